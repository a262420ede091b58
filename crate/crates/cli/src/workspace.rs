//! Named bindings for spaces, maps and controls.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use coarse_core::{io, Control, Map, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Space,
    Map,
    Control,
}

impl FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "space" => Ok(Kind::Space),
            "map" => Ok(Kind::Map),
            "control" => Ok(Kind::Control),
            _ => Err(format!("unknown kind `{s}` (expected space, map or control)")),
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Space => "space",
            Kind::Map => "map",
            Kind::Control => "control",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Binding {
    Space(Arc<Space>),
    Map(Map),
    Control(Control),
}

impl Binding {
    pub fn kind(&self) -> Kind {
        match self {
            Binding::Space(_) => Kind::Space,
            Binding::Map(_) => Kind::Map,
            Binding::Control(_) => Kind::Control,
        }
    }
}

/// Every binding is validated when it is registered. Spaces equal to one
/// already known are shared, so maps loaded from separate files compose.
pub struct Workspace {
    eps: f64,
    bindings: BTreeMap<String, Binding>,
    spaces: Vec<Arc<Space>>,
}

impl Workspace {
    pub fn new(eps: f64) -> Self {
        Workspace { eps, bindings: BTreeMap::new(), spaces: Vec::new() }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    fn intern(&mut self, s: Arc<Space>) -> Arc<Space> {
        if let Some(known) = self.spaces.iter().find(|k| ***k == *s) {
            return known.clone();
        }
        self.spaces.push(s.clone());
        s
    }

    pub fn bind(&mut self, name: &str, binding: Binding) -> Result<&Binding> {
        if self.bindings.contains_key(name) {
            bail!("`{name}` is already bound");
        }
        let binding = match binding {
            Binding::Space(s) => Binding::Space(self.intern(s)),
            Binding::Map(f) => {
                let (src, tgt) = (self.intern(f.source().clone()), self.intern(f.target().clone()));
                Binding::Map(f.rebased(src, tgt)?)
            }
            c => c,
        };
        Ok(self.bindings.entry(name.to_string()).or_insert(binding))
    }

    /// Parse, validate and register `path` under `name`.
    pub fn load(&mut self, name: &str, path: &Path, kind: Kind) -> Result<&Binding> {
        let context = || format!("loading {kind} {}", path.display());
        let binding = match kind {
            Kind::Space => io::load_space(path, self.eps).map(|s| Binding::Space(Arc::new(s))),
            Kind::Map => io::load_map(path, self.eps).map(Binding::Map),
            Kind::Control => io::load_control(path).map(Binding::Control),
        }
        .with_context(context)?;
        self.bind(name, binding).with_context(context)
    }

    /// A `NAME=PATH` argument.
    pub fn load_named(&mut self, spec: &str, kind: Kind) -> Result<&Binding> {
        let (name, path) = spec.split_once('=').ok_or_else(|| anyhow!("expected NAME=PATH, got `{spec}`"))?;
        self.load(name, Path::new(path), kind)
    }

    /// A binding name, or a file loaded on first use and bound under its path.
    fn resolve(&mut self, r: &str, kind: Kind) -> Result<&Binding> {
        if !self.bindings.contains_key(r) {
            if !Path::new(r).is_file() {
                bail!("no binding or file named `{r}`");
            }
            self.load(r, Path::new(r), kind)?;
        }
        let b = &self.bindings[r];
        if b.kind() != kind {
            bail!("`{r}` is a {}, not a {kind}", b.kind());
        }
        Ok(b)
    }

    pub fn space(&mut self, r: &str) -> Result<Arc<Space>> {
        match self.resolve(r, Kind::Space)? {
            Binding::Space(s) => Ok(s.clone()),
            _ => unreachable!("kind checked"),
        }
    }

    pub fn map(&mut self, r: &str) -> Result<Map> {
        match self.resolve(r, Kind::Map)? {
            Binding::Map(f) => Ok(f.clone()),
            _ => unreachable!("kind checked"),
        }
    }

    /// Besides names and paths, accepts inline forms such as `affine:1,0`.
    pub fn control(&mut self, r: &str) -> Result<Control> {
        if !self.bindings.contains_key(r) && ["affine:", "table:", "{"].iter().any(|p| r.starts_with(p)) {
            return Ok(io::parse_control(r)?);
        }
        match self.resolve(r, Kind::Control)? {
            Binding::Control(c) => Ok(c.clone()),
            _ => unreachable!("kind checked"),
        }
    }
}
