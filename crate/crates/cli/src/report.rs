//! Command output: text lines, check tallies, tables and result files.

use std::cmp::Ordering;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use coarse_core::{io, BoundCheck, Control, Dist, ExtDist, LawCheck, Map, Space};
use serde_json::Value;

/// Render with 12 significant digits; `inf` for infinity.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}

pub fn fmt_dist(d: Dist) -> String {
    match d {
        ExtDist::Finite(v) => fmt_num(v),
        ExtDist::Infinite => "inf".into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    pub fn dist(d: Dist) -> Cell {
        Cell::Num(d.finite().unwrap_or(f64::INFINITY))
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn sort_key(&self) -> (u8, f64, &str) {
        match self {
            Cell::Num(v) => (0, *v, ""),
            Cell::Int(n) => (0, *n as f64, ""),
            Cell::Text(s) => (1, 0.0, s),
        }
    }

    fn cmp_key(&self, other: &Cell) -> Ordering {
        let (a, b) = (self.sort_key(), other.sort_key());
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(b.2))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Write `table` as CSV with rows sorted by their leading cells.
pub fn emit_csv(table: &Table, out: impl Write) -> Result<()> {
    let mut rows: Vec<&Vec<Cell>> = table.rows.iter().collect();
    rows.sort_by(|a, b| a.iter().zip(b.iter()).map(|(x, y)| x.cmp_key(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub violations: usize,
    pub tables: Vec<Table>,
    pub spaces: Vec<(String, Arc<Space>)>,
    pub maps: Vec<(String, Map)>,
    pub controls: Vec<(String, Control)>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn bound(&mut self, c: &BoundCheck<f64>) {
        self.verdict(c.holds, c.to_string());
    }

    pub fn law(&mut self, c: &LawCheck) {
        self.verdict(c.holds, c.to_string());
    }

    pub fn verdict(&mut self, holds: bool, text: String) {
        if !holds {
            self.violations += 1;
        }
        self.lines.push(format!("{} {text}", if holds { "ok  " } else { "FAIL" }));
    }

    pub fn space(&mut self, name: &str, s: &Arc<Space>) {
        self.spaces.push((name.into(), s.clone()));
    }

    pub fn map(&mut self, name: &str, f: &Map) {
        self.maps.push((name.into(), f.clone()));
    }

    pub fn all_hold(&self) -> bool {
        self.violations == 0
    }

    /// Text lines, then a summary line. Tables follow as CSV unless they are
    /// written to files.
    pub fn print(&self, out: &mut impl Write, with_tables: bool) -> Result<()> {
        for l in &self.lines {
            writeln!(out, "{l}")?;
        }
        if with_tables {
            for t in &self.tables {
                writeln!(out, "\n# {}.csv", t.name)?;
                emit_csv(t, &mut *out)?;
            }
        }
        Ok(())
    }

    /// Write result spaces, maps, controls and tables into `dir`. Maps refer
    /// to spaces written alongside them by file name. Returns the paths.
    pub fn write_files(&self, dir: &Path) -> Result<Vec<String>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        let file = |name: &str, ext: &str| format!("{name}.{ext}");
        for (name, s) in &self.spaces {
            let f = file(name, "json");
            io::save_space(dir.join(&f), s)?;
            written.push(f);
        }
        let space_ref = |s: &Arc<Space>| match self.spaces.iter().find(|(_, k)| Arc::ptr_eq(k, s)) {
            Some((name, _)) => Value::String(file(name, "json")),
            None => io::space_to_json(s),
        };
        for (name, m) in &self.maps {
            let f = file(name, "json");
            io::write_json(dir.join(&f), &io::map_to_json_with_refs(m, space_ref(m.source()), space_ref(m.target())))?;
            written.push(f);
        }
        for (name, c) in &self.controls {
            let f = file(name, "json");
            io::save_control(dir.join(&f), c)?;
            written.push(f);
        }
        for t in &self.tables {
            let f = file(&t.name, "csv");
            let out = fs::File::create(dir.join(&f)).with_context(|| format!("creating {f}"))?;
            emit_csv(t, std::io::BufWriter::new(out))?;
            written.push(f);
        }
        Ok(written)
    }
}
