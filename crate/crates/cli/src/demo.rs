//! Family instances, dumped as space and map files for replay.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use coarse_core::colimits::cokernel_pair;
use coarse_core::equalisers::{cokernel_laws, default_kappa_grid};
use coarse_core::families::{
    corelation_check, cubes_to_squares, cubes_to_squares_stretch, horocycle_in_h2, noncoexact_family,
    squares_into_line, NoncoexactParams,
};
use coarse_core::random::{self, SpaceSpec, Weights};
use coarse_core::{certify, BoundCheck, ExtDist, LawCheck, Space};

use crate::commands::{certificate_lines, filtration, pair};
use crate::report::{fmt_dist, fmt_num, Report};
use crate::Options;

struct Params<'a> {
    family: &'a str,
    given: Vec<(&'a str, &'a str)>,
    used: Vec<&'a str>,
}

impl<'a> Params<'a> {
    fn get<T: std::str::FromStr>(&mut self, key: &'a str, default: T) -> Result<T>
    where
        T::Err: std::error::Error + Send + Sync + 'static,
    {
        self.used.push(key);
        match self.given.iter().rev().find(|(k, _)| *k == key) {
            Some((_, v)) => v.parse().with_context(|| format!("parameter {key}={v}")),
            None => Ok(default),
        }
    }

    fn finish(&self) -> Result<()> {
        if let Some((k, _)) = self.given.iter().find(|(k, _)| !self.used.contains(k)) {
            bail!("unknown parameter `{k}` for {} (known: {})", self.family, self.used.join(", "));
        }
        Ok(())
    }
}

pub(crate) fn run(family: &str, list: &[String], opts: &Options, r: &mut Report) -> Result<()> {
    let mut p = Params { family, given: crate::params(list)?, used: Vec::new() };
    match family {
        "cubes" => cubes(&mut p, opts, r),
        "squares" => squares(&mut p, r),
        "horocycle" => horocycle(&mut p, r),
        "noncoexact" => noncoexact(&mut p, opts, r),
        "random" => random_instance(&mut p, opts, r),
        _ => bail!("unknown family `{family}` (expected cubes, squares, horocycle, noncoexact or random)"),
    }
}

fn cubes(p: &mut Params, opts: &Options, r: &mut Report) -> Result<()> {
    let n: usize = p.get("n", 10)?;
    p.finish()?;
    let f = cubes_to_squares::<f64>(n)?;
    let cert = certify(&f);
    r.line(format!("cubes to squares, N = {n}"));
    certificate_lines(&f, &cert, r);
    r.law(&LawCheck { name: "surjective".into(), holds: f.is_surjective(), witness: None });
    r.bound(&BoundCheck::new(
        "upper slope <= 1",
        cert.affine_upper_fit.slope,
        ExtDist::Finite(1.0),
        Some(pair(f.source(), cert.affine_upper_fit.witness)),
        opts.eps,
    ));
    let (num, den) = cubes_to_squares_stretch(n);
    let exact = num as f64 / den as f64;
    let measured = cert.lower_stretch.value.finite().unwrap_or(f64::INFINITY);
    r.verdict(
        (measured - exact).abs() <= opts.eps * exact.max(1.0),
        format!("lower stretch {} = {num}/{den} by direct enumeration", fmt_num(measured)),
    );
    r.space("cubes", f.source());
    r.space("squares", f.target());
    r.map("cubes_to_squares", &f);
    Ok(())
}

fn squares(p: &mut Params, r: &mut Report) -> Result<()> {
    let n: usize = p.get("n", 10)?;
    let step: f64 = p.get("step", 0.5)?;
    p.finish()?;
    let s = squares_into_line::<f64>(n, step)?;
    let cert = certify(&s.map);
    r.line(format!("squares into a line of spacing {}, N = {n}", fmt_num(step)));
    certificate_lines(&s.map, &cert, r);
    r.line(format!("largest snapping error {}", fmt_num(s.max_snap_error)));
    r.space("squares", s.map.source());
    r.space("line", s.map.target());
    r.map("squares_into_line", &s.map);
    Ok(())
}

fn horocycle(p: &mut Params, r: &mut Report) -> Result<()> {
    let t_max: f64 = p.get("t_max", 50.0)?;
    let step: f64 = p.get("step", 1.0)?;
    p.finish()?;
    let f = horocycle_in_h2::<f64>(t_max, step)?;
    let cert = certify(&f);
    r.line(format!("horocycle y = 1 over [-{0}, {0}], step {1}", fmt_num(t_max), fmt_num(step)));
    certificate_lines(&f, &cert, r);
    let y = f.target();
    let end = y.len() - 1;
    r.line(format!(
        "d({}, {}) = {}; 2 ln(2T) = {}",
        y.label(0),
        y.label(end),
        fmt_dist(y.d(0, end)),
        fmt_num(2.0 * (2.0 * t_max).ln())
    ));
    r.space("parameters", f.source());
    r.space("horocycle", f.target());
    r.map("horocycle", &f);
    Ok(())
}

fn noncoexact(p: &mut Params, opts: &Options, r: &mut Report) -> Result<()> {
    let n_max: usize = p.get("n_max", 10)?;
    let t_max: f64 = p.get("t_max", 10.0)?;
    let step: f64 = p.get("step", 1.0)?;
    let with_gluing: bool = p.get("gluing", true)?;
    p.finish()?;
    let fam = noncoexact_family::<f64>(NoncoexactParams { n_max, t_max, step, with_gluing })?;
    r.line(format!(
        "non-coexact family: |X| = {}, |R| = {}, |R ⊔_X R| = {}",
        fam.x.len(),
        fam.r.len(),
        fam.pushout.space().len()
    ));
    let rep = corelation_check(&fam, opts.r_max)?;
    for l in &rep.laws {
        r.law(l);
    }
    for b in &rep.bounds {
        r.bound(b);
    }
    filtration(&fam.f_plus, &fam.f_minus, opts, r)?;
    r.space("x", &fam.x);
    r.space("r", &fam.r);
    r.space("pushout", fam.pushout.space());
    for (name, m) in [
        ("f_plus", &fam.f_plus),
        ("f_minus", &fam.f_minus),
        ("rho", &fam.rho),
        ("sigma", &fam.sigma),
        ("tau", &fam.tau),
        ("g_plus", fam.g_plus()),
        ("g_minus", fam.g_minus()),
    ] {
        r.map(name, m);
    }
    Ok(())
}

fn random_instance(p: &mut Params, opts: &Options, r: &mut Report) -> Result<()> {
    let points: usize = p.get("points", 12)?;
    let target_points: usize = p.get("target_points", points)?;
    let images: usize = p.get("images", 2)?;
    let real: bool = p.get("real", false)?;
    p.finish()?;
    if points == 0 || target_points == 0 {
        bail!("random instances need at least one point on each side");
    }
    let mut rng = random::rng(opts.seed);
    let weights = if real { Weights::Real } else { Weights::Integer };
    let mut spec = SpaceSpec { weights, ..SpaceSpec::connected(points) };
    let x: Arc<Space> = Arc::new(random::random_space(&mut rng, &spec));
    spec.points = target_points;
    let y: Arc<Space> = Arc::new(random::random_space(&mut rng, &spec));
    let f = random::random_map(&mut rng, &x, &y, images);
    r.line(format!("random map, seed {}: {} -> {} points, {} pairs", opts.seed, x.len(), y.len(), f.pairs().len()));

    let cp = cokernel_pair(&f)?;
    let grid: Vec<f64> =
        default_kappa_grid(cp.i1(), cp.i2())?.iter().filter_map(|k| k.finite()).filter(|&k| k >= 2.0).collect();
    let laws = cokernel_laws(&f, &cp, &grid)?;
    r.verdict(
        laws.fibre_defect == ExtDist::zero(),
        format!(
            "max |d(i1 y, i2 y') − 2| = {} over image fibres, at {}",
            fmt_dist(laws.fibre_defect),
            pair(cp.space(), laws.fibre_witness)
        ),
    );
    r.law(&LawCheck { name: "Eq_2(i1, i2) = f(X)".into(), holds: laws.eq2_is_image, witness: None });
    let bad = laws.neighbourhood.iter().find(|(_, w)| w.is_some());
    r.law(&LawCheck {
        name: format!("Eq_κ(i1, i2) within κ/2 - 1 of f(X) for {} values of κ", laws.neighbourhood.len()),
        holds: bad.is_none(),
        witness: bad.map(|(k, w)| format!("κ = {}, {}", fmt_num(*k), y.label(w.expect("found")))),
    });
    r.space("x", &x);
    r.space("y", &y);
    r.map("f", &f);
    Ok(())
}
