use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use coarse_core::colimits::{cokernel_pair, coarse_gluing, coequalizer, coproduct, mediating_morphism, pushout};
use coarse_core::equalisers::{cokernel_laws, default_kappa_grid, kappa_equaliser, regular_image};
use coarse_core::metric::DisjointUnion;
use coarse_core::{
    certify, closeness, diagonal_filler, filtration_report, BoundCheck, Error, ExtDist, GluingRelation, LawCheck,
    Map, MapCertificate, Space, Square,
};

use crate::report::{fmt_dist, fmt_num, Cell, Report, Table};
use crate::workspace::{Kind, Workspace};
use crate::{demo, Command, KappaGrid, Options};

pub(crate) fn run(ws: &mut Workspace, cmd: &Command, opts: &Options) -> Result<Report> {
    let mut r = Report::default();
    match cmd {
        Command::Load { kind, path } => load(ws, *kind, path, &mut r)?,
        Command::Glue { space, pairs } => glue(ws, space, pairs, &mut r)?,
        Command::Coproduct { spaces } => coproduct_cmd(ws, spaces, &mut r)?,
        Command::Pushout { f1, f2, legs, phi, c, kappa } => {
            pushout_cmd(ws, f1, f2, legs.as_deref(), phi, *c, *kappa, opts, &mut r)?
        }
        Command::Cokernel { f } => cokernel(ws, f, opts, &mut r)?,
        Command::Coeq { f, g } => coeq(ws, f, g, opts, &mut r)?,
        Command::Image { f } => image(ws, f, &mut r)?,
        Command::Equalise { f, g, kappa } => equalise(ws, f, g, *kappa, &mut r)?,
        Command::Filtration { f, g } => {
            let (f, g) = (ws.map(f)?, ws.map(g)?);
            filtration(&f, &g, opts, &mut r)?
        }
        Command::Filler { f, g, e, m, phi, psi, kappa, r: radius } => {
            filler(ws, [f, g, e, m], phi, psi, *kappa, *radius, opts, &mut r)?
        }
        Command::Certify { f, bound } => certify_cmd(ws, f, bound.as_deref(), opts, &mut r)?,
        Command::Demo { family, params } => demo::run(family, params, opts, &mut r)?,
    }
    Ok(r)
}

/// A failed precondition is a violated inequality, not an input error.
fn precondition_as_violation<T>(res: coarse_core::Result<T>, r: &mut Report) -> Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(e @ Error::Precondition { .. }) => {
            r.verdict(false, e.to_string());
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn pair(s: &Space, w: Option<(usize, usize)>) -> String {
    w.map_or_else(|| "-".into(), |(a, b)| format!("({}, {})", s.label(a), s.label(b)))
}

pub(crate) fn point(s: &Space, w: Option<usize>) -> String {
    w.map_or_else(|| "-".into(), |a| s.label(a).to_string())
}

fn load(ws: &mut Workspace, kind: Kind, path: &std::path::Path, r: &mut Report) -> Result<()> {
    let name = path.display().to_string();
    match ws.load(&name, path, kind)? {
        crate::Binding::Space(s) => {
            r.line(format!("space {name}: {} points, metric axioms hold", s.len()));
            let realized = s.realized_distances();
            r.line(format!(
                "finite distances range over [{}, {}]",
                fmt_num(realized.first().copied().unwrap_or(0.0)),
                fmt_num(realized.last().copied().unwrap_or(0.0))
            ));
        }
        crate::Binding::Map(f) => {
            r.line(format!("map {name}: {} -> {} points, {} pairs", f.source().len(), f.target().len(), f.pairs().len()));
            r.line(format!("single-valued: {}, surjective: {}", f.is_single_valued(), f.is_surjective()));
        }
        crate::Binding::Control(c) => {
            r.line(format!("control {name}: {c:?}"));
        }
    }
    Ok(())
}

fn provenance(union: &DisjointUnion<f64>, summand_names: &[&str]) -> Table {
    let mut t = Table::new("provenance", &["label", "summand", "origin"]);
    for p in union.space.points() {
        let (s, local) = union.origin(p);
        t.push(vec![
            union.space.label(p).into(),
            summand_names[s].into(),
            union.summands[s].label(local).into(),
        ]);
    }
    t
}

fn glue(ws: &mut Workspace, space: &str, pairs: &[String], r: &mut Report) -> Result<()> {
    let x = ws.space(space)?;
    let labelled = pairs
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| anyhow!("glued pairs are A=B, got `{p}`"))
        })
        .collect::<Result<Vec<_>>>()?;
    let rel = GluingRelation::from_labels(&x, &labelled)?;
    let glued = coarse_gluing(&x, &rel)?;
    let g = &glued.result;
    r.line(format!("glued {} pairs over {} points", rel.len(), g.len()));

    let mut grew = None;
    let mut far = None;
    for a in x.points() {
        for b in x.points() {
            if grew.is_none() && g.d(a, b) > x.d(a, b) {
                grew = Some((a, b));
            }
            if far.is_none() && rel.contains(a, b) && g.d(a, b) > ExtDist::Finite(1.0) {
                far = Some((a, b));
            }
        }
    }
    r.law(&LawCheck {
        name: "glued distances never exceed the original".into(),
        holds: grew.is_none(),
        witness: grew.map(|w| pair(&x, Some(w))),
    });
    r.law(&LawCheck {
        name: "glued pairs are within distance 1".into(),
        holds: far.is_none(),
        witness: far.map(|w| pair(&x, Some(w))),
    });

    let mut t = Table::new("provenance", &["label", "origin"]);
    for p in g.points() {
        t.push(vec![g.label(p).into(), x.label(glued.provenance[p]).into()]);
    }
    r.tables.push(t);
    r.space("glued", g);
    Ok(())
}

fn coproduct_cmd(ws: &mut Workspace, names: &[String], r: &mut Report) -> Result<()> {
    let spaces = names.iter().map(|n| ws.space(n)).collect::<Result<Vec<_>>>()?;
    let c = coproduct(&spaces);
    r.line(format!("coproduct of {} spaces: {} points", spaces.len(), c.space().len()));
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    r.tables.push(provenance(&c.union, &refs));
    r.space("coproduct", c.space());
    for (i, inc) in c.inclusions.iter().enumerate() {
        r.map(&format!("inclusion{i}"), inc);
    }
    Ok(())
}

fn square_check(name: &str, a: &Map, b: &Map, bound: f64, eps: f64) -> Result<BoundCheck<f64>> {
    let c = closeness(a, b)?;
    let w = c.witness.map(|x| a.source().label(x).to_string());
    Ok(BoundCheck::new(name, c.value, ExtDist::Finite(bound), w, eps))
}

#[allow(clippy::too_many_arguments)]
fn pushout_cmd(
    ws: &mut Workspace,
    f1: &str,
    f2: &str,
    legs: Option<&[String]>,
    phi: &str,
    c: f64,
    kappa: f64,
    opts: &Options,
    r: &mut Report,
) -> Result<()> {
    let (f1m, f2m) = (ws.map(f1)?, ws.map(f2)?);
    let po = pushout(&f1m, &f2m)?;
    r.line(format!("pushout: {} points", po.space().len()));
    r.bound(&square_check("closeness(i1 ∘ f1, i2 ∘ f2) <= 2", &f1m.then(&po.i1)?, &f2m.then(&po.i2)?, 2.0, opts.eps)?);
    r.bound(&square_check("closeness(i1 ∘ f1, i0) <= 2", &f1m.then(&po.i1)?, &po.i0, 2.0, opts.eps)?);
    r.tables.push(provenance(&po.union, &["source", f1, f2]));
    r.space("pushout", po.space());
    r.map("i0", &po.i0);
    r.map("i1", &po.i1);
    r.map("i2", &po.i2);

    if let Some(legs) = legs {
        let legs = legs.iter().map(|l| ws.map(l)).collect::<Result<Vec<_>>>()?;
        let phi = ws.control(phi)?;
        let res = mediating_morphism(&po, [&legs[0], &legs[1], &legs[2]], &phi, c, kappa, opts.eps);
        if let Some(med) = precondition_as_violation(res, r)? {
            r.bound(&med.check);
            r.map("mediating", &med.lambda);
        }
    }
    Ok(())
}

fn finite_grid(grid: &[ExtDist<f64>], at_least: f64) -> Vec<f64> {
    grid.iter().filter_map(|k| k.finite()).filter(|&k| k >= at_least).collect()
}

fn cokernel(ws: &mut Workspace, f: &str, opts: &Options, r: &mut Report) -> Result<()> {
    let f = ws.map(f)?;
    let cp = cokernel_pair(&f)?;
    let p = cp.space();
    let grid = match &opts.kappa_grid {
        KappaGrid::Auto => default_kappa_grid(cp.i1(), cp.i2())?,
        KappaGrid::List(k) => k.clone(),
    };
    let laws = cokernel_laws(&f, &cp, &finite_grid(&grid, 2.0))?;
    let holds = laws.fibre_defect == ExtDist::zero();
    r.verdict(
        holds,
        format!(
            "max |d(i1 y, i2 y') − 2| = {} over image fibres, at {}",
            fmt_dist(laws.fibre_defect),
            pair(p, laws.fibre_witness)
        ),
    );
    let odd = laws
        .eq2
        .members()
        .iter()
        .copied()
        .find(|y| f.image().binary_search(y).is_err())
        .or_else(|| f.image().into_iter().find(|&y| !laws.eq2.contains(y)));
    r.law(&LawCheck {
        name: format!("Eq_2(i1, i2) = f(X) ({} points)", laws.eq2.len()),
        holds: laws.eq2_is_image,
        witness: odd.map(|y| f.target().label(y).to_string()),
    });
    for (k, bad) in &laws.neighbourhood {
        r.law(&LawCheck {
            name: format!("Eq_{}(i1, i2) within {} of f(X)", fmt_num(*k), fmt_num(k / 2.0 - 1.0)),
            holds: bad.is_none(),
            witness: bad.map(|y| f.target().label(y).to_string()),
        });
    }
    r.tables.push(provenance(&cp.pushout.union, &["X", "L", "R"]));
    r.space("cokernel", p);
    r.map("i1", cp.i1());
    r.map("i2", cp.i2());
    Ok(())
}

fn coeq(ws: &mut Workspace, f: &str, g: &str, opts: &Options, r: &mut Report) -> Result<()> {
    let (fm, gm) = (ws.map(f)?, ws.map(g)?);
    let q = coequalizer(&fm, &gm)?;
    r.line(format!("coequalizer: {} points", q.space().len()));
    r.bound(&square_check(
        "closeness(q ∘ f, q ∘ g) <= 2",
        &fm.then(&q.projection)?,
        &gm.then(&q.projection)?,
        2.0,
        opts.eps,
    )?);
    r.tables.push(provenance(&q.union, &["X", "Y"]));
    r.space("coequalizer", q.space());
    r.map("projection", &q.projection);
    Ok(())
}

fn image(ws: &mut Workspace, f: &str, r: &mut Report) -> Result<()> {
    let f = ws.map(f)?;
    let ri = match regular_image(&f) {
        Ok(ri) => ri,
        Err(e @ Error::Consistency(_)) => {
            r.verdict(false, e.to_string());
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    let fac = &ri.factorisation;
    r.line(format!("image: {} of {} target points", fac.image.len(), f.target().len()));
    let me = fac.e.then(&fac.m)?;
    let diff = f.source().points().find(|&x| me.image_of(x) != f.image_of(x));
    r.law(&LawCheck {
        name: "m ∘ e = f".into(),
        holds: diff.is_none(),
        witness: diff.map(|x| f.source().label(x).to_string()),
    });
    let s = fac.m.source();
    let mut stretched = None;
    'outer: for a in s.points() {
        for b in s.points() {
            if f.target().d(fac.m.image_of(a)[0], fac.m.image_of(b)[0]) != s.d(a, b) {
                stretched = Some((a, b));
                break 'outer;
            }
        }
    }
    r.law(&LawCheck {
        name: "m is distance-preserving".into(),
        holds: stretched.is_none(),
        witness: stretched.map(|w| pair(s, Some(w))),
    });
    r.law(&LawCheck {
        name: "e is surjective".into(),
        holds: fac.e.is_surjective(),
        witness: fac.e.relation().uncovered().map(|y| s.label(y).to_string()),
    });
    r.law(&LawCheck { name: "Eq_2 of the cokernel pair is f(X)".into(), holds: true, witness: None });
    let image_space = fac.m.source().clone();
    r.space("image", &image_space);
    r.map("e", &fac.e);
    r.map("m", &fac.m);
    Ok(())
}

fn equalise(ws: &mut Workspace, f: &str, g: &str, kappa: f64, r: &mut Report) -> Result<()> {
    let (fm, gm) = (ws.map(f)?, ws.map(g)?);
    let eq = kappa_equaliser(&fm, &gm, ExtDist::Finite(kappa))?;
    r.line(format!("Eq_{}({f}, {g}): {} of {} points", fmt_num(kappa), eq.len(), fm.source().len()));
    let mut t = Table::new("equaliser", &["label"]);
    for l in eq.labels() {
        t.push(vec![l.into()]);
    }
    r.tables.push(t);
    r.space("equaliser", &Arc::new(eq.to_space()));
    Ok(())
}

/// Filtration table and budget verdicts for `f, g`.
pub(crate) fn filtration(f: &Map, g: &Map, opts: &Options, r: &mut Report) -> Result<()> {
    let grid = match &opts.kappa_grid {
        KappaGrid::Auto => None,
        KappaGrid::List(k) => Some(k.as_slice()),
    };
    let rep = filtration_report(f, g, grid, opts.r_max)?;
    let x = f.source();
    r.line(format!("filtration over {} κ values, budget r_max = {}", rep.steps.len(), fmt_dist(rep.r_max)));
    r.law(&LawCheck {
        name: "stages are nested".into(),
        holds: rep.is_monotone(),
        witness: None,
    });
    let mut t = Table::new(
        "filtration",
        &["kappa", "member_count", "covering_radius_from_prev", "verdict"],
    );
    for step in &rep.steps {
        let (radius, verdict, far) = match (&step.covering_radius_from_prev, step.stable) {
            (Some(rad), Some(ok)) => {
                let v = if ok { "within_budget" } else { "exceeds_budget" };
                (Cell::dist(rad.value), v, point(x, rad.witness))
            }
            _ => (Cell::Text("-".into()), "first", "-".into()),
        };
        if let Some(rad) = &step.covering_radius_from_prev {
            r.line(format!(
                "κ = {}: {} members, covering radius {} at {far}",
                fmt_dist(step.kappa),
                step.members.len(),
                fmt_dist(rad.value)
            ));
        }
        if step.stable == Some(false) {
            r.verdict(
                false,
                format!(
                    "Eq at κ = {}: covering radius {} > r_max at {far}",
                    fmt_dist(step.kappa),
                    fmt_dist(step.covering_radius_from_prev.as_ref().expect("has radius").value)
                ),
            );
        }
        t.push(vec![Cell::dist(step.kappa), step.members.len().into(), radius, verdict.into()]);
    }
    r.line("a finite grid can refute stabilisation within a budget, never confirm it");
    r.tables.push(t);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn filler(
    ws: &mut Workspace,
    names: [&String; 4],
    phi: &str,
    psi: &str,
    kappa: f64,
    radius: f64,
    opts: &Options,
    r: &mut Report,
) -> Result<()> {
    let [f, g, e, m] = names.map(|n| ws.map(n));
    let (f, g, e, m) = (f?, g?, e?, m?);
    let (phi, psi) = (ws.control(phi)?, ws.control(psi)?);
    let res = diagonal_filler(Square { f: &f, g: &g, e: &e, m: &m }, &phi, &psi, kappa, radius, opts.eps);
    let Some(fill) = precondition_as_violation(res, r)? else {
        return Ok(());
    };
    for c in fill.checks() {
        r.bound(c);
    }
    r.map("u", &fill.u);
    r.controls.push(("filler_control".into(), fill.control.clone()));
    Ok(())
}

fn profile_table(name: &str, f: &Map, cert: &MapCertificate<f64>) -> Table {
    let x = f.source();
    let mut t = Table::new(name, &["scale", "upper", "upper_witness", "lower", "lower_witness"]);
    for (u, l) in cert.upper_profile.steps.iter().zip(&cert.lower_profile.steps) {
        t.push(vec![
            u.scale.into(),
            Cell::dist(u.value),
            pair(x, u.witness).into(),
            Cell::dist(l.value),
            pair(x, l.witness).into(),
        ]);
    }
    t
}

/// Summary lines of a certificate, with witnesses.
pub(crate) fn certificate_lines(f: &Map, cert: &MapCertificate<f64>, r: &mut Report) {
    let (x, y) = (f.source(), f.target());
    let fit = &cert.affine_upper_fit;
    r.line(format!(
        "upper affine fit: U(t) <= {} t + {} (slope at {})",
        fmt_dist(fit.slope),
        fmt_dist(fit.offset),
        pair(x, fit.witness)
    ));
    r.line(format!(
        "lower stretch: {} at {}",
        fmt_dist(cert.lower_stretch.value),
        pair(x, cert.lower_stretch.witness)
    ));
    r.line(format!(
        "surjectivity radius: {} at {}",
        fmt_dist(cert.surjectivity_radius.value),
        point(y, cert.surjectivity_radius.witness)
    ));
}

fn certify_cmd(ws: &mut Workspace, f: &str, bound: Option<&str>, opts: &Options, r: &mut Report) -> Result<()> {
    let f = ws.map(f)?;
    let cert = certify(&f);
    certificate_lines(&f, &cert, r);
    if let Some(b) = bound {
        let c = ws.control(b)?;
        match cert.upper_profile.first_excess(&c, opts.eps)? {
            Some(ex) => r.verdict(
                false,
                format!(
                    "U({}) = {} > {} at {}",
                    fmt_num(ex.step.scale),
                    fmt_dist(ex.step.value),
                    fmt_num(ex.bound),
                    pair(f.source(), ex.step.witness)
                ),
            ),
            None => {
                let slack = cert.upper_profile.min_slack(&c)?;
                r.verdict(true, format!("upper profile within the bound (least slack {})", slack.map_or("-".into(), fmt_dist)));
            }
        }
    }
    if f.source().is_empty() {
        bail!("the source is empty; there is nothing to certify");
    }
    r.tables.push(profile_table("profile", &f, &cert));
    Ok(())
}
