//! κ-equalisers and the equaliser filtration, regular images, and the
//! diagonal filler for epi / regular-mono squares.

use std::sync::Arc;

use crate::certify::{certify, BoundCheck, MapCertificate};
use crate::colimits::{cokernel_pair, CokernelPair};
use crate::controls::{compose_controls, sum_controls, transpose_control, ControlFn};
use crate::error::{Error, Result};
use crate::ext::{ExtDist, Extremum};
use crate::maps::{closeness, union_diameter, CoarseMap, Relation};
use crate::metric::{covering_radius_witness, distance_to_set, same_space, MetricSpace, Subspace};
use crate::scalar::Scalar;

fn require_parallel<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<()> {
    if !same_space(f.source(), g.source()) || !same_space(f.target(), g.target()) {
        return Err(Error::SpaceMismatch("maps do not share source and target".into()));
    }
    Ok(())
}

/// `diam(f(x) ∪ g(x))` for every source point.
pub fn agreement_diameters<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<Vec<ExtDist<T>>> {
    require_parallel(f, g)?;
    Ok(f.source()
        .points()
        .map(|x| union_diameter(f.target(), f.image_of(x), g.image_of(x)))
        .collect())
}

/// `Eq_κ(f, g) = { x : diam(f(x) ∪ g(x)) <= κ }`, compared exactly.
pub fn kappa_equaliser<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>, kappa: ExtDist<T>) -> Result<Subspace<T>> {
    let diams = agreement_diameters(f, g)?;
    Ok(members_at(f.source(), &diams, kappa))
}

fn members_at<T: Scalar>(x: &Arc<MetricSpace<T>>, diams: &[ExtDist<T>], kappa: ExtDist<T>) -> Subspace<T> {
    let members = diams.iter().enumerate().filter(|(_, d)| **d <= kappa).map(|(i, _)| i).collect();
    Subspace::new(x.clone(), members).expect("indices come from the space")
}

/// Covering radius of `inner` inside `outer`: `sup_{y ∈ outer} d(y, inner)`,
/// with the farthest point.
pub fn relative_covering_radius<T: Scalar>(inner: &Subspace<T>, outer: &Subspace<T>) -> Extremum<T, usize> {
    let x = outer.parent();
    let mut best = Extremum { value: ExtDist::zero(), witness: None };
    for &y in outer.members() {
        let d = distance_to_set(x, y, inner.members());
        if best.witness.is_none() || d > best.value {
            best = Extremum { value: d, witness: Some(y) };
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct FiltrationStep<T: Scalar> {
    pub kappa: ExtDist<T>,
    pub members: Subspace<T>,
    /// Radius of the previous stage inside this one; `None` for the first.
    pub covering_radius_from_prev: Option<Extremum<T, usize>>,
    /// Whether that radius is within the budget; `None` for the first stage.
    pub stable: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct FiltrationReport<T: Scalar> {
    pub steps: Vec<FiltrationStep<T>>,
    pub r_max: ExtDist<T>,
}

impl<T: Scalar> FiltrationReport<T> {
    pub fn kappas(&self) -> Vec<ExtDist<T>> {
        self.steps.iter().map(|s| s.kappa).collect()
    }

    /// Stages are nested, as they must be.
    pub fn is_monotone(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].members.is_subset_of(&w[1].members))
    }
}

/// Distinct realized values of `diam(f(x) ∪ g(x))`, ascending. The filtration
/// only changes at these values.
pub fn default_kappa_grid<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<Vec<ExtDist<T>>> {
    let mut v = agreement_diameters(f, g)?;
    v.sort();
    v.dedup();
    Ok(v)
}

/// All `Eq_κ` on the grid and the covering radius of each stage in the next.
pub fn filtration_report<T: Scalar>(
    f: &CoarseMap<T>,
    g: &CoarseMap<T>,
    kappas: Option<&[ExtDist<T>]>,
    r_max: ExtDist<T>,
) -> Result<FiltrationReport<T>> {
    let diams = agreement_diameters(f, g)?;
    let grid = match kappas {
        Some(k) => {
            if let Some(w) = k.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Error::Parameter(format!("κ grid must increase ({} then {})", w[0], w[1])));
            }
            k.to_vec()
        }
        None => default_kappa_grid(f, g)?,
    };
    let mut steps: Vec<FiltrationStep<T>> = Vec::with_capacity(grid.len());
    for kappa in grid {
        let members = members_at(f.source(), &diams, kappa);
        let radius = steps.last().map(|prev| relative_covering_radius(&prev.members, &members));
        let stable = radius.as_ref().map(|r| r.value <= r_max);
        steps.push(FiltrationStep { kappa, members, covering_radius_from_prev: radius, stable });
    }
    Ok(FiltrationReport { steps, r_max })
}

/// One `Eq_κ(f, g) ⊆ Eq_{κ+2κ'}(f', g')` check.
#[derive(Clone, Debug, PartialEq)]
pub struct Containment<T: Scalar> {
    pub kappa: ExtDist<T>,
    pub widened: ExtDist<T>,
    /// A point of the smaller set missing from the larger one.
    pub counterexample: Option<usize>,
}

/// Check the containment for each `κ`, with `κ'` the larger of the two
/// measured closeness values between representatives.
pub fn representative_containment<T: Scalar>(
    (f, g): (&CoarseMap<T>, &CoarseMap<T>),
    (f2, g2): (&CoarseMap<T>, &CoarseMap<T>),
    kappas: &[ExtDist<T>],
) -> Result<(ExtDist<T>, Vec<Containment<T>>)> {
    let kp = closeness(f, f2)?.value.max(closeness(g, g2)?.value);
    let d1 = agreement_diameters(f, g)?;
    let d2 = agreement_diameters(f2, g2)?;
    let out = kappas
        .iter()
        .map(|&kappa| {
            let widened = kappa + kp + kp;
            let counterexample = (0..d1.len()).find(|&x| d1[x] <= kappa && d2[x] > widened);
            Containment { kappa, widened, counterexample }
        })
        .collect();
    Ok((kp, out))
}

/// `f = m ∘ e` through the image with its induced metric.
#[derive(Clone, Debug)]
pub struct Factorisation<T: Scalar> {
    pub image: Subspace<T>,
    pub e: CoarseMap<T>,
    pub m: CoarseMap<T>,
}

/// Corestriction of `f` to its image, and the inclusion of the image.
pub fn image_factorisation<T: Scalar>(f: &CoarseMap<T>) -> Factorisation<T> {
    let members = f.image();
    let image = Subspace::new(f.target().clone(), members.clone()).expect("image points are target points");
    let space = Arc::new(image.to_space());
    let pos = |y: usize| members.binary_search(&y).expect("in image");
    let e_rows = f.relation().rows().iter().map(|r| r.iter().map(|&y| pos(y)).collect()).collect();
    let e = CoarseMap::new(f.source().clone(), space.clone(), e_rows).expect("corestriction is total");
    let m = CoarseMap::from_fn(space, f.target().clone(), |i| members[i]).expect("inclusion is total");
    Factorisation { image, e, m }
}

/// Measured cokernel-pair laws for one map.
#[derive(Clone, Debug)]
pub struct CokernelLaws<T: Scalar> {
    /// `max |d(i1 y, i2 y') - 2|` over `y, y' ∈ f(x)`.
    pub fibre_defect: ExtDist<T>,
    pub fibre_witness: Option<(usize, usize)>,
    pub eq2: Subspace<T>,
    pub eq2_is_image: bool,
    /// Per `κ`: a point of `Eq_κ(i1, i2)` farther than `κ/2 - 1` from `f(X)`.
    pub neighbourhood: Vec<(T, Option<usize>)>,
}

impl<T: Scalar> CokernelLaws<T> {
    pub fn all_hold(&self) -> bool {
        self.fibre_defect == ExtDist::zero() && self.eq2_is_image && self.neighbourhood.iter().all(|(_, w)| w.is_none())
    }
}

pub fn cokernel_laws<T: Scalar>(f: &CoarseMap<T>, cp: &CokernelPair<T>, kappas: &[T]) -> Result<CokernelLaws<T>> {
    let (fibre_defect, fibre_witness) = cp.fibre_defect();
    let diams = agreement_diameters(cp.i1(), cp.i2())?;
    let image = f.image();
    let y = f.target();
    let eq2 = members_at(y, &diams, ExtDist::Finite(T::two()));
    let eq2_is_image = eq2.members() == image.as_slice();
    let mut neighbourhood = Vec::with_capacity(kappas.len());
    for &k in kappas {
        let reach = ExtDist::Finite(k / T::two() - T::one());
        let members = members_at(y, &diams, ExtDist::Finite(k));
        let bad = members.members().iter().copied().find(|&p| distance_to_set(y, p, &image) > reach);
        neighbourhood.push((k, bad));
    }
    Ok(CokernelLaws { fibre_defect, fibre_witness, eq2, eq2_is_image, neighbourhood })
}

#[derive(Clone, Debug)]
pub struct RegularImage<T: Scalar> {
    pub factorisation: Factorisation<T>,
    pub cokernel: CokernelPair<T>,
}

/// The image factorisation, checked against `Eq_2` of the cokernel pair.
pub fn regular_image<T: Scalar>(f: &CoarseMap<T>) -> Result<RegularImage<T>> {
    let cokernel = cokernel_pair(f)?;
    let diams = agreement_diameters(cokernel.i1(), cokernel.i2())?;
    let eq2 = members_at(f.target(), &diams, ExtDist::Finite(T::two()));
    let image = f.image();
    if eq2.members() != image.as_slice() {
        let odd = eq2
            .members()
            .iter()
            .chain(&image)
            .copied()
            .find(|p| eq2.contains(*p) != image.binary_search(p).is_ok())
            .expect("the sets differ");
        return Err(Error::Consistency(format!(
            "Eq_2(i1, i2) and f(X) disagree at `{}`",
            f.target().label(odd)
        )));
    }
    Ok(RegularImage { factorisation: image_factorisation(f), cokernel })
}

/// Certificate of the corestriction `e`, the finite-scale stand-in for
/// deciding whether `f` is a regular monomorphism.
pub fn certify_regular_mono<T: Scalar>(f: &CoarseMap<T>) -> Result<(RegularImage<T>, MapCertificate<T>)> {
    let ri = regular_image(f)?;
    let cert = certify(&ri.factorisation.e);
    Ok((ri, cert))
}

/// Lower stretch across a family of truncations.
#[derive(Clone, Debug)]
pub struct FamilyGrowth<T: Scalar> {
    pub params: Vec<String>,
    pub lower_stretch: Vec<ExtDist<T>>,
}

impl<T: Scalar> FamilyGrowth<T> {
    pub fn strictly_increasing(&self) -> bool {
        self.lower_stretch.windows(2).all(|w| w[0] < w[1])
    }
}

pub fn family_growth<T: Scalar>(members: impl IntoIterator<Item = (String, CoarseMap<T>)>) -> Result<FamilyGrowth<T>> {
    let mut params = Vec::new();
    let mut lower_stretch = Vec::new();
    for (p, f) in members {
        let (_, cert) = certify_regular_mono(&f)?;
        params.push(p);
        lower_stretch.push(cert.lower_stretch.value);
    }
    Ok(FamilyGrowth { params, lower_stretch })
}

/// The filler `u = f ∘ e^T ∘ N_r` with its three certified bounds.
#[derive(Clone, Debug)]
pub struct DiagonalFiller<T: Scalar> {
    pub u: CoarseMap<T>,
    /// `Φ'(t) = Ψ^T(Φ(t)) + Ψ^T(κ + Φ(Φ(0) + r))`.
    pub control: ControlFn<T>,
    pub upper: BoundCheck<T>,
    pub bottom: BoundCheck<T>,
    pub top: BoundCheck<T>,
}

impl<T: Scalar> DiagonalFiller<T> {
    pub fn checks(&self) -> [&BoundCheck<T>; 3] {
        [&self.upper, &self.bottom, &self.top]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|c| c.holds)
    }
}

/// Inputs to [`diagonal_filler`]: the square `m ∘ f ≈_κ g ∘ e`.
#[derive(Clone, Copy, Debug)]
pub struct Square<'a, T> {
    pub f: &'a CoarseMap<T>,
    pub g: &'a CoarseMap<T>,
    pub e: &'a CoarseMap<T>,
    pub m: &'a CoarseMap<T>,
}

fn pair_label<T: Scalar>(s: &MetricSpace<T>, (a, b): (usize, usize)) -> String {
    format!("({}, {})", s.label(a), s.label(b))
}

fn failed(bound: &str, detail: String) -> Error {
    Error::Precondition { bound: bound.into(), detail }
}

/// Largest finite distance in a space, or 0.
fn max_finite<T: Scalar>(s: &MetricSpace<T>) -> T {
    s.realized_distances().last().copied().unwrap_or(T::zero())
}

pub fn diagonal_filler<T: Scalar>(
    sq: Square<'_, T>,
    phi: &ControlFn<T>,
    psi: &ControlFn<T>,
    kappa: T,
    r: T,
    eps: T,
) -> Result<DiagonalFiller<T>> {
    let Square { f, g, e, m } = sq;
    let shape = |ok: bool, what: &str| if ok { Ok(()) } else { Err(Error::SpaceMismatch(what.into())) };
    shape(same_space(f.source(), e.source()), "f and e must share their source")?;
    shape(same_space(f.target(), m.source()), "m must start at the target of f")?;
    shape(same_space(e.target(), g.source()), "g must start at the target of e")?;
    shape(same_space(g.target(), m.target()), "g and m must share their target")?;

    for (name, map) in [("f", f), ("g", g), ("e", e), ("m", m)] {
        if let Some(ex) = certify(map).upper_profile.first_excess(phi, eps)? {
            let w = ex.step.witness.expect("realized scale");
            return Err(failed(
                &format!("Φ upper-controls {name}"),
                format!("{} > Φ({}) = {} at {}", ex.step.value, ex.step.scale, ex.bound, pair_label(map.source(), w)),
            ));
        }
    }
    let mf = f.then(m)?;
    let ge = e.then(g)?;
    let c = closeness(&mf, &ge)?;
    if !c.value.le_eps(ExtDist::Finite(kappa), eps) {
        let x = c.witness.expect("nonempty");
        return Err(failed("m∘f ≈_κ g∘e", format!("{} > κ = {kappa} at {}", c.value, f.source().label(x))));
    }
    let cover = covering_radius_witness(e.target(), &e.image());
    if !cover.value.le_eps(ExtDist::Finite(r), eps) {
        let z = cover.witness.map_or("-".to_string(), |z| e.target().label(z).to_string());
        return Err(failed("N_r e(X) = Z", format!("covering radius {} > r = {r} at {z}", cover.value)));
    }
    let y = m.source();
    for a in y.points() {
        for b in a + 1..y.len() {
            let need = psi.at(y.d(a, b))?;
            let got = m.pair_separation(a, b);
            if !need.le_eps(got, eps) {
                return Err(failed(
                    "Ψ lower-controls m",
                    format!("Ψ({}) = {need} > {got} at {}", y.d(a, b), pair_label(y, (a, b))),
                ));
            }
        }
    }

    let phi0 = phi.evaluate(T::zero())?;
    let reach = phi.evaluate(phi0 + r)?;
    let shift_arg = kappa + reach;
    let t_max = [phi.evaluate(max_finite(e.target()))?, shift_arg, phi.evaluate(phi0)?]
        .into_iter()
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let psi_t = transpose_control(psi, t_max)?;
    let shift = psi_t.evaluate(shift_arg)?;
    let control = sum_controls(&compose_controls(&psi_t, phi), &ControlFn::constant(shift));

    let z = e.target();
    let nr = Relation::neighbourhood(z, ExtDist::Finite(r));
    let rel = nr.then(&e.relation().transpose())?.then(f.relation())?;
    if let Some(p) = rel.rows().iter().position(Vec::is_empty) {
        return Err(Error::Consistency(format!("filler is empty at `{}`", z.label(p))));
    }
    let u = CoarseMap::from_relation(z.clone(), y.clone(), rel)?;

    let cert = certify(&u);
    let (measured, bound, witness) = match cert.upper_profile.first_excess(&control, eps)? {
        Some(ex) => (ex.step.value, ExtDist::Finite(ex.bound), ex.step.witness),
        None => tightest(&cert.upper_profile.steps, &control)?,
    };
    let upper = BoundCheck::new(
        "U_u(t) <= Φ'(t)",
        measured,
        bound,
        witness.map(|w| pair_label(z, w)),
        eps,
    );

    let mu = u.then(m)?;
    let c1 = closeness(g, &mu)?;
    let bottom = BoundCheck::new(
        "g ≈ m∘u within κ + 2Φ(0) + Φ(Φ(0)+r)",
        c1.value,
        ExtDist::Finite(kappa + phi0 + phi0 + reach),
        c1.witness.map(|p| z.label(p).to_string()),
        eps,
    );
    let ue = e.then(&u)?;
    let c2 = closeness(f, &ue)?;
    let top = BoundCheck::new(
        "f ≈ u∘e within Φ'(Φ(0))",
        c2.value,
        ExtDist::Finite(control.evaluate(phi0)?),
        c2.witness.map(|p| f.source().label(p).to_string()),
        eps,
    );
    Ok(DiagonalFiller { u, control, upper, bottom, top })
}

/// The realized scale with the least slack under `bound`.
fn tightest<T: Scalar>(
    steps: &[crate::certify::ProfileStep<T>],
    bound: &ControlFn<T>,
) -> Result<(ExtDist<T>, ExtDist<T>, Option<(usize, usize)>)> {
    let mut best: Option<(T, ExtDist<T>, ExtDist<T>, Option<(usize, usize)>)> = None;
    for s in steps {
        let b = bound.evaluate(s.scale)?;
        let slack = b - s.value.finite().unwrap_or(b);
        if best.as_ref().is_none_or(|(bs, ..)| slack < *bs) {
            best = Some((slack, s.value, ExtDist::Finite(b), s.witness));
        }
    }
    Ok(best.map_or((ExtDist::zero(), ExtDist::zero(), None), |(_, m, b, w)| (m, b, w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = ExtDist<f64>;

    fn line(points: &[f64]) -> Arc<MetricSpace<f64>> {
        let ls = points.iter().map(|p| format!("{p}")).collect();
        Arc::new(MetricSpace::from_fn(ls, |i, j| D::Finite((points[i] - points[j]).abs())).unwrap())
    }

    #[test]
    fn equal_maps_equalise_everywhere() {
        let x = line(&[0.0, 1.0, 2.0]);
        let f = CoarseMap::identity(x.clone());
        assert_eq!(kappa_equaliser(&f, &f, D::zero()).unwrap().len(), 3);
        let rep = filtration_report(&f, &f, Some(&[D::zero(), D::Finite(1.0), D::Finite(3.0)]), D::zero()).unwrap();
        for s in &rep.steps[1..] {
            assert_eq!(s.covering_radius_from_prev.as_ref().unwrap().value, D::zero());
            assert_eq!(s.stable, Some(true));
        }
    }

    #[test]
    fn equaliser_example_on_a_grid() {
        let x = line(&[0.0, 1.0]);
        let y = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let f = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![0]]).unwrap();
        let g = CoarseMap::new(x, y, vec![vec![5], vec![0]]).unwrap();
        assert_eq!(kappa_equaliser(&f, &g, D::zero()).unwrap().members(), &[1]);
        assert_eq!(kappa_equaliser(&f, &g, D::Finite(5.0)).unwrap().members(), &[0, 1]);
        assert_eq!(default_kappa_grid(&f, &g).unwrap(), vec![D::zero(), D::Finite(5.0)]);
    }

    #[test]
    fn grids_must_increase() {
        let x = line(&[0.0]);
        let f = CoarseMap::identity(x);
        assert!(filtration_report(&f, &f, Some(&[D::Finite(2.0), D::Finite(1.0)]), D::zero()).is_err());
        let rep = filtration_report(&f, &f, Some(&[]), D::zero()).unwrap();
        assert!(rep.steps.is_empty());
    }

    #[test]
    fn cokernel_neighbourhood_bound() {
        let y = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let x = line(&[0.0]);
        let f = CoarseMap::new(x, y, vec![vec![0]]).unwrap();
        let cp = cokernel_pair(&f).unwrap();
        let kappas: Vec<f64> = (2..=10).map(f64::from).collect();
        let laws = cokernel_laws(&f, &cp, &kappas).unwrap();
        assert!(laws.all_hold());
        let rep = filtration_report(cp.i1(), cp.i2(), None, D::Infinite).unwrap();
        assert!(rep.is_monotone());
    }

    #[test]
    fn regular_image_of_an_inclusion_and_a_constant() {
        let y = line(&[0.0, 1.0, 3.0, 7.0]);
        let inc = Subspace::new(y.clone(), vec![1, 3]).unwrap().inclusion();
        let ri = regular_image(&inc).unwrap();
        let fac = &ri.factorisation;
        assert_eq!(fac.image.members(), &[1, 3]);
        assert!(fac.e.then(&fac.m).unwrap().same_relation(&inc));
        assert_eq!(certify(&fac.e).lower_stretch.value, D::Finite(1.0));

        let x = line(&[0.0, 2.0]);
        let k = CoarseMap::new(x, y, vec![vec![2], vec![2]]).unwrap();
        let ri = regular_image(&k).unwrap();
        assert_eq!(ri.factorisation.image.len(), 1);
        assert_eq!(ri.factorisation.m.image(), vec![2]);
    }

    #[test]
    fn containment_of_perturbed_representatives() {
        let x = line(&[0.0, 1.0, 2.0]);
        let y = line(&[0.0, 1.0, 2.0, 3.0]);
        let f = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![1], vec![2]]).unwrap();
        let g = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![3], vec![2]]).unwrap();
        let f2 = CoarseMap::new(x.clone(), y.clone(), vec![vec![1], vec![1], vec![2, 3]]).unwrap();
        let g2 = CoarseMap::new(x, y, vec![vec![0], vec![2], vec![2]]).unwrap();
        let ks = [D::zero(), D::Finite(1.0), D::Finite(2.0)];
        let (kp, checks) = representative_containment((&f, &g), (&f2, &g2), &ks).unwrap();
        assert_eq!(kp, D::Finite(1.0));
        assert!(checks.iter().all(|c| c.counterexample.is_none()));
    }

    #[test]
    fn filler_on_a_point() {
        let star = line(&[0.0]);
        let ab = line(&[0.0, 1.0]);
        let f = CoarseMap::new(star.clone(), ab.clone(), vec![vec![0]]).unwrap();
        let e = CoarseMap::identity(star);
        let m = CoarseMap::identity(ab);
        let id = ControlFn::identity();
        let fl = diagonal_filler(Square { f: &f, g: &f, e: &e, m: &m }, &id, &id, 0.0, 0.0, 1e-9).unwrap();
        assert_eq!(fl.u.image_of(0), &[0]);
        assert!(fl.all_hold());
    }

    #[test]
    fn filler_on_an_exact_square() {
        // X -e-> Z surjective, m: Y -> W a subspace inclusion, m f = g e.
        let x = line(&[0.0, 1.0, 2.0, 3.0]);
        let z = line(&[0.0, 2.0]);
        let w = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let ysub = Subspace::new(w.clone(), vec![0, 2]).unwrap();
        let m = ysub.inclusion();
        let y = m.source().clone();
        let e = CoarseMap::new(x.clone(), z.clone(), vec![vec![0], vec![0], vec![1], vec![1]]).unwrap();
        let f = CoarseMap::new(x, y, vec![vec![0], vec![0], vec![1], vec![1]]).unwrap();
        let g = CoarseMap::new(z, w, vec![vec![0], vec![2]]).unwrap();
        let phi = ControlFn::affine(1.0, 2.0).unwrap();
        let id = ControlFn::identity();
        let fl = diagonal_filler(Square { f: &f, g: &g, e: &e, m: &m }, &phi, &id, 0.0, 0.0, 1e-9).unwrap();
        assert!(fl.u.then(&m).unwrap().same_relation(&g));
        assert!(fl.all_hold());
    }

    #[test]
    fn filler_rejects_a_bad_lower_control() {
        let x = line(&[0.0, 4.0]);
        let f = CoarseMap::identity(x.clone());
        let squash = line(&[0.0, 1.0]);
        let m = CoarseMap::from_fn(x.clone(), squash.clone(), |i| i).unwrap();
        let g = m.clone();
        let e = CoarseMap::identity(x);
        let phi = ControlFn::affine(1.0, 0.0).unwrap();
        let err = diagonal_filler(Square { f: &f, g: &g, e: &e, m: &m }, &phi, &phi, 0.0, 0.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition { bound, .. } if bound.contains("lower-controls")));
    }
}
