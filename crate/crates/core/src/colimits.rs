//! Coarse gluing and the finite colimits built from it.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::certify::{certify, BoundCheck};
use crate::controls::{compose_controls, sum_controls, ControlFn};
use crate::error::{Error, Result};
use crate::ext::ExtDist;
use crate::maps::{closeness, CoarseMap};
use crate::metric::{disjoint_union, disjoint_union_with_prefixes, same_space, DisjointUnion, MetricSpace};
use crate::scalar::Scalar;

/// Unordered pairs of distinct points of one space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GluingRelation {
    pairs: BTreeSet<(usize, usize)>,
}

impl GluingRelation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Pairs `(x, x)` are dropped; order within a pair does not matter.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::new();
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn from_labels<T: Scalar>(space: &MetricSpace<T>, pairs: &[(String, String)]) -> Result<Self> {
        let mut r = Self::new();
        for (a, b) in pairs {
            r.insert(space.require(a)?, space.require(b)?);
        }
        Ok(r)
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        if a != b {
            self.pairs.insert((a.min(b), a.max(b)));
        }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sorted distinct endpoints.
    pub fn endpoints(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Options for the gluing variants. Only the default (unit edges) is part of
/// the tested construction.
#[derive(Clone, Copy, Debug)]
pub struct GluingOptions<T> {
    pub edge_length: T,
}

impl<T: Scalar> Default for GluingOptions<T> {
    fn default() -> Self {
        GluingOptions { edge_length: T::one() }
    }
}

#[derive(Clone, Debug)]
pub struct GluedSpace<T> {
    pub base: Arc<MetricSpace<T>>,
    pub relation: GluingRelation,
    pub result: Arc<MetricSpace<T>>,
    /// Base index of each result point. Gluing keeps every point, so this is
    /// the identity; it is kept for reports.
    pub provenance: Vec<usize>,
}

/// Shortest-path metric over internal edges of length `d(x, y)` (finite `d`
/// only) and glued edges of length 1 between related points.
pub fn coarse_gluing<T: Scalar>(space: &Arc<MetricSpace<T>>, relation: &GluingRelation) -> Result<GluedSpace<T>> {
    coarse_gluing_with(space, relation, GluingOptions::default())
}

pub fn coarse_gluing_with<T: Scalar>(
    space: &Arc<MetricSpace<T>>,
    relation: &GluingRelation,
    opts: GluingOptions<T>,
) -> Result<GluedSpace<T>> {
    let n = space.len();
    if let Some((a, b)) = relation.pairs().find(|&(_, b)| b >= n) {
        return Err(Error::IndexOutOfRange { index: a.max(b), len: n });
    }
    if !(opts.edge_length > T::zero()) {
        return Err(Error::Parameter("glued edges need positive length".into()));
    }
    let mut dist = space.matrix().to_vec();
    let glued = ExtDist::Finite(opts.edge_length);
    for (a, b) in relation.pairs() {
        for (i, j) in [(a, b), (b, a)] {
            if glued < dist[i * n + j] {
                dist[i * n + j] = glued;
            }
        }
    }
    T::relax_through_pivots(n, &mut dist, &relation.endpoints());
    let result = MetricSpace::from_flat(space.labels().to_vec(), dist)?;
    Ok(GluedSpace {
        base: space.clone(),
        relation: relation.clone(),
        result: Arc::new(result),
        provenance: (0..n).collect(),
    })
}

/// Map `source -> target` sending local point `i` to `offset + i`.
fn shifted_inclusion<T: Scalar>(
    source: &Arc<MetricSpace<T>>,
    target: &Arc<MetricSpace<T>>,
    offset: usize,
) -> CoarseMap<T> {
    CoarseMap::from_fn(source.clone(), target.clone(), |i| offset + i).expect("shifted inclusion is total")
}

/// The coproduct with its inclusions.
#[derive(Clone, Debug)]
pub struct Coproduct<T> {
    pub union: DisjointUnion<T>,
    pub inclusions: Vec<CoarseMap<T>>,
}

impl<T: Scalar> Coproduct<T> {
    pub fn space(&self) -> &Arc<MetricSpace<T>> {
        &self.union.space
    }

    /// The induced map `⊔ λ_i` out of the coproduct.
    pub fn copair(&self, legs: &[CoarseMap<T>]) -> Result<CoarseMap<T>> {
        copair_over(&self.union, &self.union.space, legs)
    }
}

pub fn coproduct<T: Scalar>(spaces: &[Arc<MetricSpace<T>>]) -> Coproduct<T> {
    let union = disjoint_union(spaces);
    let inclusions = (0..spaces.len()).map(|i| union.inclusion(i)).collect();
    Coproduct { union, inclusions }
}

/// `⊔ legs`, defined on `space` whose points are those of `union`.
fn copair_over<T: Scalar>(
    union: &DisjointUnion<T>,
    space: &Arc<MetricSpace<T>>,
    legs: &[CoarseMap<T>],
) -> Result<CoarseMap<T>> {
    if legs.len() != union.summands.len() {
        return Err(Error::Parameter(format!("{} legs for {} summands", legs.len(), union.summands.len())));
    }
    let Some(z) = legs.first().map(|l| l.target().clone()) else {
        return CoarseMap::new(space.clone(), Arc::new(MetricSpace::empty()), Vec::new());
    };
    let mut images = Vec::with_capacity(space.len());
    for (k, leg) in legs.iter().enumerate() {
        if !same_space(leg.source(), &union.summands[k]) {
            return Err(Error::SpaceMismatch(format!("leg {k} does not start at summand {k}")));
        }
        if !same_space(leg.target(), &z) {
            return Err(Error::SpaceMismatch(format!("leg {k} has a different target")));
        }
        images.extend(leg.relation().rows().iter().cloned());
    }
    CoarseMap::new(space.clone(), z, images)
}

/// `X_1 ⊔_{X_0} X_2` presented as a gluing of `X_0 ⊔ X_1 ⊔ X_2`.
#[derive(Clone, Debug)]
pub struct Pushout<T> {
    pub union: DisjointUnion<T>,
    pub glued: GluedSpace<T>,
    pub f1: CoarseMap<T>,
    pub f2: CoarseMap<T>,
    pub i0: CoarseMap<T>,
    pub i1: CoarseMap<T>,
    pub i2: CoarseMap<T>,
}

impl<T: Scalar> Pushout<T> {
    pub fn space(&self) -> &Arc<MetricSpace<T>> {
        &self.glued.result
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PushoutVariant {
    /// `x ∼ y` for `y ∈ f_i(x)`.
    #[default]
    ThroughSource,
    /// `f_1(x) ∼ f_2(x)` directly.
    TwoSided,
}

pub fn pushout<T: Scalar>(f1: &CoarseMap<T>, f2: &CoarseMap<T>) -> Result<Pushout<T>> {
    pushout_with(f1, f2, ["0/", "1/", "2/"], PushoutVariant::default(), GluingOptions::default())
}

pub fn pushout_with<T: Scalar>(
    f1: &CoarseMap<T>,
    f2: &CoarseMap<T>,
    prefixes: [&str; 3],
    variant: PushoutVariant,
    opts: GluingOptions<T>,
) -> Result<Pushout<T>> {
    if !same_space(f1.source(), f2.source()) {
        return Err(Error::SpaceMismatch("pushout legs must share their source".into()));
    }
    let spaces = [f1.source().clone(), f1.target().clone(), f2.target().clone()];
    let union = disjoint_union_with_prefixes(&spaces, &prefixes)?;
    let mut rel = GluingRelation::new();
    for x in f1.source().points() {
        let p = union.index_in(0, x);
        match variant {
            PushoutVariant::ThroughSource => {
                for &y in f1.image_of(x) {
                    rel.insert(p, union.index_in(1, y));
                }
                for &y in f2.image_of(x) {
                    rel.insert(p, union.index_in(2, y));
                }
            }
            PushoutVariant::TwoSided => {
                for &y in f1.image_of(x) {
                    for &y2 in f2.image_of(x) {
                        rel.insert(union.index_in(1, y), union.index_in(2, y2));
                    }
                }
            }
        }
    }
    let glued = coarse_gluing_with(&union.space, &rel, opts)?;
    let p = glued.result.clone();
    Ok(Pushout {
        i0: shifted_inclusion(&spaces[0], &p, union.offset(0)),
        i1: shifted_inclusion(&spaces[1], &p, union.offset(1)),
        i2: shifted_inclusion(&spaces[2], &p, union.offset(2)),
        f1: f1.clone(),
        f2: f2.clone(),
        union,
        glued,
    })
}

/// `Y ⊔_X Y` with copies labelled `X/`, `L/`, `R/`.
#[derive(Clone, Debug)]
pub struct CokernelPair<T> {
    pub pushout: Pushout<T>,
}

impl<T: Scalar> CokernelPair<T> {
    pub fn space(&self) -> &Arc<MetricSpace<T>> {
        self.pushout.space()
    }

    pub fn i0(&self) -> &CoarseMap<T> {
        &self.pushout.i0
    }

    pub fn i1(&self) -> &CoarseMap<T> {
        &self.pushout.i1
    }

    pub fn i2(&self) -> &CoarseMap<T> {
        &self.pushout.i2
    }

    /// `max |d(i1 y, i2 y') - 2|` over `y, y' ∈ f(x)`, with the pair attaining it.
    pub fn fibre_defect(&self) -> (ExtDist<T>, Option<(usize, usize)>) {
        let f = &self.pushout.f1;
        let p = self.space();
        let two = T::two();
        let mut worst: (ExtDist<T>, Option<(usize, usize)>) = (ExtDist::zero(), None);
        for x in f.source().points() {
            for &y in f.image_of(x) {
                for &y2 in f.image_of(x) {
                    let a = self.i1().image_of(y)[0];
                    let b = self.i2().image_of(y2)[0];
                    let dev = match p.d(a, b) {
                        ExtDist::Finite(d) => ExtDist::Finite((d - two).abs()),
                        ExtDist::Infinite => ExtDist::Infinite,
                    };
                    if worst.1.is_none() || dev > worst.0 {
                        worst = (dev, Some((a, b)));
                    }
                }
            }
        }
        worst
    }
}

pub fn cokernel_pair<T: Scalar>(f: &CoarseMap<T>) -> Result<CokernelPair<T>> {
    let pushout = pushout_with(f, f, ["X/", "L/", "R/"], PushoutVariant::default(), GluingOptions::default())?;
    Ok(CokernelPair { pushout })
}

/// The induced map out of a pushout together with the certified bound on
/// its upper profile.
#[derive(Clone, Debug)]
pub struct MediatingMorphism<T: Scalar> {
    pub lambda: CoarseMap<T>,
    /// `Φ'(t) = Φ(3t + 1) + 2Ct`.
    pub control: ControlFn<T>,
    pub check: BoundCheck<T>,
}

/// Grid used to check coarse superadditivity of a caller-supplied control:
/// realized distances of the pushout together with the half-integers up to
/// the largest of them.
fn superadditivity_grid<T: Scalar>(space: &MetricSpace<T>) -> Vec<T> {
    let mut grid = space.realized_distances();
    let top = grid.last().copied().unwrap_or(T::one());
    let half = T::one() / T::two();
    let mut t = T::zero();
    while t <= top {
        grid.push(t);
        t = t + half;
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
    grid.dedup();
    grid
}

fn precondition(bound: &str, detail: String) -> Error {
    Error::Precondition { bound: bound.into(), detail }
}

/// `λ = λ0 ⊔ λ1 ⊔ λ2` on the pushout, after validating every hypothesis:
/// `Φ` upper-controls each `λ_i`, `Φ(1) >= κ`, `Φ` is `C`-coarsely
/// superadditive and `λ_i ∘ f_i` is `κ`-close to `λ0`.
pub fn mediating_morphism<T: Scalar>(
    po: &Pushout<T>,
    legs: [&CoarseMap<T>; 3],
    phi: &ControlFn<T>,
    c: T,
    kappa: T,
    eps: T,
) -> Result<MediatingMorphism<T>> {
    for (k, leg) in legs.iter().enumerate() {
        let cert = certify(leg);
        if let Some(ex) = cert.upper_profile.first_excess(phi, eps)? {
            let (a, b) = ex.step.witness.expect("realized scale");
            return Err(precondition(
                &format!("Φ upper-controls λ{k}"),
                format!(
                    "diam λ{k}({}) ∪ λ{k}({}) = {} > Φ({}) = {}",
                    leg.source().label(a),
                    leg.source().label(b),
                    ex.step.value,
                    ex.step.scale,
                    ex.bound
                ),
            ));
        }
    }
    let phi1 = phi.evaluate(T::one())?;
    if phi1 + eps < kappa {
        return Err(precondition("Φ(1) >= κ", format!("Φ(1) = {phi1} < κ = {kappa}")));
    }
    let grid = superadditivity_grid(po.space());
    for (i, &s) in grid.iter().enumerate() {
        for &t in &grid[i..] {
            let lhs = phi.evaluate(s)? + phi.evaluate(t)?;
            let rhs = phi.evaluate(s + t)? + c;
            if lhs > rhs + eps {
                return Err(precondition(
                    "Φ is C-coarsely superadditive",
                    format!("Φ({s}) + Φ({t}) = {lhs} > Φ({}) + C = {rhs}", s + t),
                ));
            }
        }
    }
    for (k, f) in [(1, &po.f1), (2, &po.f2)] {
        let lf = f.then(legs[k])?;
        let close = closeness(&lf, legs[0])?;
        if !close.value.le_eps(ExtDist::Finite(kappa), eps) {
            let x = close.witness.expect("nonempty source");
            return Err(precondition(
                &format!("λ{k} ∘ f{k} ≈_κ λ0"),
                format!("diameter {} > κ = {kappa} at {}", close.value, f.source().label(x)),
            ));
        }
    }

    let lambda = copair_over(&po.union, po.space(), &[legs[0].clone(), legs[1].clone(), legs[2].clone()])?;
    let three = T::two() + T::one();
    let inner = ControlFn::Affine { slope: three, offset: T::one() };
    let control = sum_controls(
        &compose_controls(phi, &inner),
        &ControlFn::Affine { slope: T::two() * c, offset: T::zero() },
    );
    let cert = certify(&lambda);
    let (measured, bound, witness) = match cert.upper_profile.first_excess(&control, eps)? {
        Some(ex) => (ex.step.value, ExtDist::Finite(ex.bound), ex.step.witness),
        None => {
            // Report the tightest scale.
            let mut best: Option<(T, ExtDist<T>, ExtDist<T>, Option<(usize, usize)>)> = None;
            for s in &cert.upper_profile.steps {
                let b = control.evaluate(s.scale)?;
                let slack = b - s.value.finite().unwrap_or(b);
                if best.as_ref().is_none_or(|(bs, ..)| slack < *bs) {
                    best = Some((slack, s.value, ExtDist::Finite(b), s.witness));
                }
            }
            best.map_or((ExtDist::zero(), ExtDist::zero(), None), |(_, m, b, w)| (m, b, w))
        }
    };
    let space = po.space();
    let witness = witness.map(|(a, b)| format!("({}, {})", space.label(a), space.label(b)));
    let check = BoundCheck::new("U_λ(t) <= Φ(3t+1) + 2Ct", measured, bound, witness, eps);
    Ok(MediatingMorphism { lambda, control, check })
}

/// Coequalizer of `f, g: X -> Y`: the gluing of `X ⊔ Y` along `x ∼ f(x)` and
/// `x ∼ g(x)`, with `Y` included as the projection.
#[derive(Clone, Debug)]
pub struct Coequalizer<T> {
    pub union: DisjointUnion<T>,
    pub glued: GluedSpace<T>,
    pub from_source: CoarseMap<T>,
    pub projection: CoarseMap<T>,
}

impl<T: Scalar> Coequalizer<T> {
    pub fn space(&self) -> &Arc<MetricSpace<T>> {
        &self.glued.result
    }
}

pub fn coequalizer<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<Coequalizer<T>> {
    if !same_space(f.source(), g.source()) || !same_space(f.target(), g.target()) {
        return Err(Error::SpaceMismatch("coequalizer needs parallel maps".into()));
    }
    let spaces = [f.source().clone(), f.target().clone()];
    let union = disjoint_union_with_prefixes(&spaces, &["X/", "Y/"])?;
    let mut rel = GluingRelation::new();
    for x in f.source().points() {
        for &y in f.image_of(x).iter().chain(g.image_of(x)) {
            rel.insert(union.index_in(0, x), union.index_in(1, y));
        }
    }
    let glued = coarse_gluing(&union.space, &rel)?;
    let q = glued.result.clone();
    Ok(Coequalizer {
        from_source: shifted_inclusion(&spaces[0], &q, union.offset(0)),
        projection: shifted_inclusion(&spaces[1], &q, union.offset(1)),
        union,
        glued,
    })
}

/// The comparison `1_X ⊔ m ⊔ 1_Z` from the pushout of `(1_X, f)` to the
/// pushout of `(m, f)`.
#[derive(Clone, Debug)]
pub struct StabilityComparison<T> {
    pub along_identity: Pushout<T>,
    pub along_m: Pushout<T>,
    pub comparison: CoarseMap<T>,
}

pub fn pushout_stability<T: Scalar>(m: &CoarseMap<T>, f: &CoarseMap<T>) -> Result<StabilityComparison<T>> {
    if !m.is_single_valued() {
        return Err(Error::Parameter("m must be single-valued".into()));
    }
    let id = CoarseMap::identity(m.source().clone());
    let along_identity = pushout(&id, f)?;
    let along_m = pushout(m, f)?;
    let (u, v) = (&along_identity.union, &along_m.union);
    let mut images = Vec::with_capacity(u.space.len());
    for x in m.source().points() {
        images.push(vec![v.index_in(0, x)]);
    }
    for x in m.source().points() {
        images.push(vec![v.index_in(1, m.image_of(x)[0])]);
    }
    for z in f.target().points() {
        images.push(vec![v.index_in(2, z)]);
    }
    let comparison = CoarseMap::new(along_identity.space().clone(), along_m.space().clone(), images)?;
    Ok(StabilityComparison { along_identity, along_m, comparison })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::fibre_diameter;

    type D = ExtDist<f64>;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn space(names: &[&str], edges: &[(usize, usize, f64)]) -> Arc<MetricSpace<f64>> {
        Arc::new(MetricSpace::from_edges(labels(names), edges).unwrap())
    }

    fn point(name: &str) -> Arc<MetricSpace<f64>> {
        Arc::new(MetricSpace::singleton(name))
    }

    fn d(s: &MetricSpace<f64>, a: &str, b: &str) -> D {
        s.d(s.require(a).unwrap(), s.require(b).unwrap())
    }

    #[test]
    fn gluing_examples() {
        let ab = space(&["a", "b"], &[(0, 1, 10.0)]);
        let g = coarse_gluing(&ab, &GluingRelation::from_pairs([(0, 1)])).unwrap();
        assert_eq!(g.result.d(0, 1), D::Finite(1.0));

        let g = coarse_gluing(&ab, &GluingRelation::new()).unwrap();
        assert_eq!(*g.result, *ab);

        let abc = space(&["a", "b", "c"], &[(0, 1, 10.0)]);
        let g = coarse_gluing(&abc, &GluingRelation::from_pairs([(1, 2)])).unwrap();
        assert_eq!(d(&g.result, "a", "c"), D::Finite(11.0));
        assert!(g.result.is_metric(1e-9));
    }

    #[test]
    fn gluing_relation_normalises_pairs() {
        let r = GluingRelation::from_pairs([(2, 1), (1, 2), (3, 3)]);
        assert_eq!(r.len(), 1);
        assert!(r.contains(2, 1));
        assert!(!r.contains(3, 3));
    }

    #[test]
    fn unknown_points_are_rejected() {
        let ab = space(&["a", "b"], &[(0, 1, 1.0)]);
        assert!(GluingRelation::from_labels(&ab, &[("a".into(), "z".into())]).is_err());
        assert!(coarse_gluing(&ab, &GluingRelation::from_pairs([(0, 5)])).is_err());
    }

    #[test]
    fn coproduct_and_copairing() {
        let a = space(&["a", "b"], &[(0, 1, 3.0)]);
        let c = point("c");
        let z = space(&["p", "q"], &[(0, 1, 1.0)]);
        let cp = coproduct(&[a.clone(), c.clone()]);
        let l0 = CoarseMap::new(a, z.clone(), vec![vec![0], vec![1]]).unwrap();
        let l1 = CoarseMap::new(c, z, vec![vec![0, 1]]).unwrap();
        let lam = cp.copair(&[l0.clone(), l1.clone()]).unwrap();
        assert!(cp.inclusions[0].then(&lam).unwrap().same_relation(&l0));
        assert!(cp.inclusions[1].then(&lam).unwrap().same_relation(&l1));

        let empty = coproduct::<f64>(&[]);
        assert!(empty.space().is_empty());
    }

    #[test]
    fn pushout_of_three_points() {
        let (p, a, b) = (point("p"), point("a"), point("b"));
        let f1 = CoarseMap::new(p.clone(), a, vec![vec![0]]).unwrap();
        let f2 = CoarseMap::new(p, b, vec![vec![0]]).unwrap();
        let po = pushout(&f1, &f2).unwrap();
        let s = po.space();
        assert_eq!(d(s, "0/p", "1/a"), D::Finite(1.0));
        assert_eq!(d(s, "0/p", "2/b"), D::Finite(1.0));
        assert_eq!(d(s, "1/a", "2/b"), D::Finite(2.0));
    }

    #[test]
    fn pushout_along_identities() {
        let x = space(&["a", "b", "c"], &[(0, 1, 4.0), (1, 2, 5.0)]);
        let id = CoarseMap::identity(x.clone());
        let po = pushout(&id, &id).unwrap();
        let cert = certify(&po.i0);
        assert_eq!(cert.surjectivity_radius.value, D::Finite(1.0));
        for s in &cert.upper_profile.steps {
            assert_eq!(s.value, D::Finite(s.scale));
        }
        assert!(closeness(&po.f1.then(&po.i1).unwrap(), &po.i0).unwrap().value <= D::Finite(1.0));
    }

    #[test]
    fn cokernel_pair_of_a_point() {
        let p = point("*");
        let cp = cokernel_pair(&CoarseMap::identity(p)).unwrap();
        assert_eq!(d(cp.space(), "L/*", "R/*"), D::Finite(2.0));
        assert_eq!(cp.fibre_defect().0, D::zero());
    }

    #[test]
    fn cokernel_pair_off_the_image() {
        // y sits at distance 3 from the image {o}.
        let y = space(&["o", "y"], &[(0, 1, 3.0)]);
        let x = point("x");
        let f = CoarseMap::new(x, y, vec![vec![0]]).unwrap();
        let cp = cokernel_pair(&f).unwrap();
        assert_eq!(d(cp.space(), "L/y", "R/y"), D::Finite(8.0));
        let s = cp.space();
        for a in s.points().filter(|&a| s.label(a).starts_with("L/")) {
            for b in s.points().filter(|&b| s.label(b).starts_with("R/")) {
                assert!(s.d(a, b) >= D::Finite(2.0));
            }
        }
    }

    #[test]
    fn mediating_morphism_into_the_pushout_itself() {
        let x = space(&["a", "b"], &[(0, 1, 2.0)]);
        let y = space(&["u", "v", "w"], &[(0, 1, 1.0), (1, 2, 3.0)]);
        let f1 = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![1]]).unwrap();
        let f2 = CoarseMap::new(x, y, vec![vec![1], vec![2]]).unwrap();
        let po = pushout(&f1, &f2).unwrap();
        let phi = ControlFn::affine(1.0, 1.0).unwrap();
        let m = mediating_morphism(&po, [&po.i0, &po.i1, &po.i2], &phi, 1.0, 2.0, 1e-9).unwrap();
        assert!(m.lambda.same_relation(&CoarseMap::identity(po.space().clone())));
        assert!(m.check.holds);
    }

    #[test]
    fn mediating_morphism_collapsing_to_a_point() {
        let x = space(&["a", "b"], &[(0, 1, 2.0)]);
        let y = space(&["u", "v"], &[(0, 1, 5.0)]);
        let f = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![1]]).unwrap();
        let po = pushout(&f, &f).unwrap();
        let z = point("z");
        let to_z = |s: &Arc<MetricSpace<f64>>| CoarseMap::from_fn(s.clone(), z.clone(), |_| 0).unwrap();
        let (l0, l1, l2) = (to_z(&x), to_z(&y), to_z(&y));
        let phi = ControlFn::affine(1.0, 1.0).unwrap();
        let m = mediating_morphism(&po, [&l0, &l1, &l2], &phi, 1.0, 0.0, 1e-9).unwrap();
        assert!(m.check.holds);
        assert_eq!(fibre_diameter(&m.lambda), D::zero());
        assert_eq!(certify(&m.lambda).upper_profile.at(100.0), D::zero());
    }

    #[test]
    fn mediating_morphism_reports_failed_hypotheses() {
        let x = space(&["a", "b"], &[(0, 1, 2.0)]);
        let f = CoarseMap::identity(x.clone());
        let po = pushout(&f, &f).unwrap();
        let y = space(&["p", "q"], &[(0, 1, 50.0)]);
        let spread = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![1]]).unwrap();
        let phi = ControlFn::affine(1.0, 1.0).unwrap();
        let err = mediating_morphism(&po, [&spread, &spread, &spread], &phi, 1.0, 2.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition { bound, .. } if bound.contains("upper-controls")));

        let concave = ControlFn::table(vec![(0.0, 0.0), (1.0, 10.0), (100.0, 11.0)]).unwrap();
        let id = CoarseMap::identity(x.clone());
        let tiny = ControlFn::affine(1.0, 0.0).unwrap();
        let po2 = pushout(&id, &id).unwrap();
        let l = [&po2.i0, &po2.i1, &po2.i2];
        let err = mediating_morphism(&po2, l, &tiny, 0.0, 2.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition { bound, .. } if bound.contains("Φ(1)")));
        let err = mediating_morphism(&po2, l, &concave, 0.0, 1.0, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition { bound, .. } if bound.contains("superadditive")));
    }

    #[test]
    fn coequalizer_examples() {
        let y = space(&["a", "b"], &[(0, 1, 6.0)]);
        let id = CoarseMap::identity(y.clone());
        let q = coequalizer(&id, &id).unwrap();
        for p in y.points() {
            let a = q.from_source.image_of(p)[0];
            let b = q.projection.image_of(p)[0];
            assert_eq!(q.space().d(a, b), D::Finite(1.0));
        }

        let split = space(&["a", "b"], &[]);
        let x = point("x");
        let f = CoarseMap::new(x.clone(), split.clone(), vec![vec![0]]).unwrap();
        let g = CoarseMap::new(x, split, vec![vec![1]]).unwrap();
        let q = coequalizer(&f, &g).unwrap();
        assert_eq!(d(q.space(), "Y/a", "Y/b"), D::Finite(2.0));
    }

    #[test]
    fn stability_comparison_is_isometric() {
        let y = space(&["a", "b", "c", "d"], &[(0, 1, 2.0), (1, 2, 2.0), (2, 3, 1.0)]);
        let m = crate::metric::Subspace::new(y, vec![0, 3]).unwrap().inclusion();
        let z = space(&["p", "q"], &[(0, 1, 9.0)]);
        let f = CoarseMap::new(m.source().clone(), z, vec![vec![0], vec![1]]).unwrap();
        let s = pushout_stability(&m, &f).unwrap();
        let c = &s.comparison;
        for a in c.source().points() {
            for b in c.source().points() {
                assert_eq!(c.source().d(a, b), c.target().d(c.image_of(a)[0], c.image_of(b)[0]));
            }
        }
    }
}
