//! Possibly multi-valued maps between finite metric spaces, viewed as total
//! binary relations, and the relation algebra used by the filler construction.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::{ExtDist, Extremum};
use crate::metric::{diameter, distance_to_set, same_space, MetricSpace};
use crate::scalar::Scalar;

/// A binary relation between index sets `0..rows.len()` and `0..cols`.
/// Rows are sorted and duplicate-free; rows may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    rows: Vec<Vec<usize>>,
    cols: usize,
}

impl Relation {
    pub fn new(mut rows: Vec<Vec<usize>>, cols: usize) -> Result<Self> {
        for row in &mut rows {
            row.sort_unstable();
            row.dedup();
            if let Some(&bad) = row.iter().find(|&&c| c >= cols) {
                return Err(Error::IndexOutOfRange { index: bad, len: cols });
            }
        }
        Ok(Relation { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        Relation { rows: (0..n).map(|i| vec![i]).collect(), cols: n }
    }

    /// Closed `t`-neighbourhood relation `N_t` of a space.
    pub fn neighbourhood<T: Scalar>(space: &MetricSpace<T>, t: ExtDist<T>) -> Self {
        let rows = space
            .points()
            .map(|x| {
                space
                    .row(x)
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| d.is_finite() && **d <= t)
                    .map(|(y, _)| y)
                    .collect()
            })
            .collect();
        Relation { rows, cols: space.len() }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &[usize] {
        &self.rows[x]
    }

    pub fn domain_len(&self) -> usize {
        self.rows.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.cols
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].binary_search(&y).is_ok()
    }

    pub fn is_total(&self) -> bool {
        self.rows.iter().all(|r| !r.is_empty())
    }

    pub fn is_surjective(&self) -> bool {
        self.uncovered().is_none()
    }

    /// Least codomain index not related to anything.
    pub fn uncovered(&self) -> Option<usize> {
        let mut hit = vec![false; self.cols];
        for r in &self.rows {
            for &y in r {
                hit[y] = true;
            }
        }
        hit.iter().position(|h| !h)
    }

    pub fn transpose(&self) -> Relation {
        let mut rows = vec![Vec::new(); self.cols];
        for (x, r) in self.rows.iter().enumerate() {
            for &y in r {
                rows[y].push(x);
            }
        }
        Relation { rows, cols: self.rows.len() }
    }

    /// Relational composite "first `self`, then `next`".
    pub fn then(&self, next: &Relation) -> Result<Relation> {
        if self.cols != next.rows.len() {
            return Err(Error::SpaceMismatch(format!(
                "cannot compose a relation into {} points with one out of {}",
                self.cols,
                next.rows.len()
            )));
        }
        let mut mark = vec![false; next.cols];
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                for &y in r {
                    for &z in &next.rows[y] {
                        if !mark[z] {
                            mark[z] = true;
                            out.push(z);
                        }
                    }
                }
                for &z in &out {
                    mark[z] = false;
                }
                out.sort_unstable();
                out
            })
            .collect();
        Ok(Relation { rows, cols: next.cols })
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.iter().all(|y| b.binary_search(y).is_ok()))
    }
}

/// A total, possibly multi-valued map `source -> target`.
#[derive(Clone, Debug)]
pub struct CoarseMap<T> {
    source: Arc<MetricSpace<T>>,
    target: Arc<MetricSpace<T>>,
    rel: Relation,
}

impl<T: Scalar> CoarseMap<T> {
    pub fn new(
        source: Arc<MetricSpace<T>>,
        target: Arc<MetricSpace<T>>,
        images: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} image sets for a source of {} points",
                images.len(),
                source.len()
            )));
        }
        let rel = Relation::new(images, target.len())?;
        Self::from_relation(source, target, rel)
    }

    pub fn from_relation(
        source: Arc<MetricSpace<T>>,
        target: Arc<MetricSpace<T>>,
        rel: Relation,
    ) -> Result<Self> {
        if rel.domain_len() != source.len() || rel.codomain_len() != target.len() {
            return Err(Error::SpaceMismatch("relation shape does not match the spaces".into()));
        }
        if let Some(x) = rel.rows().iter().position(Vec::is_empty) {
            return Err(Error::NotTotal(source.label(x).to_string()));
        }
        Ok(CoarseMap { source, target, rel })
    }

    pub fn from_fn(
        source: Arc<MetricSpace<T>>,
        target: Arc<MetricSpace<T>>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let images = source.points().map(|x| vec![f(x)]).collect();
        Self::new(source, target, images)
    }

    /// Map given by `(source label, target label)` pairs; repeated sources
    /// are multi-valued.
    pub fn from_pairs(
        source: Arc<MetricSpace<T>>,
        target: Arc<MetricSpace<T>>,
        pairs: &[(String, String)],
    ) -> Result<Self> {
        let mut images = vec![Vec::new(); source.len()];
        for (x, y) in pairs {
            images[source.require(x)?].push(target.require(y)?);
        }
        Self::new(source, target, images)
    }

    pub fn identity(space: Arc<MetricSpace<T>>) -> Self {
        let rel = Relation::identity(space.len());
        CoarseMap { source: space.clone(), target: space, rel }
    }

    pub fn source(&self) -> &Arc<MetricSpace<T>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MetricSpace<T>> {
        &self.target
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    pub fn image_of(&self, x: usize) -> &[usize] {
        self.rel.row(x)
    }

    /// `f(X)`, sorted.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target.len()];
        for r in self.rel.rows() {
            for &y in r {
                hit[y] = true;
            }
        }
        hit.iter().enumerate().filter(|(_, h)| **h).map(|(y, _)| y).collect()
    }

    pub fn is_single_valued(&self) -> bool {
        self.rel.rows().iter().all(|r| r.len() == 1)
    }

    pub fn is_surjective(&self) -> bool {
        self.rel.is_surjective()
    }

    /// `(x, y)` pairs by label, in source order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for x in self.source.points() {
            for &y in self.image_of(x) {
                out.push((self.source.label(x).to_string(), self.target.label(y).to_string()));
            }
        }
        out
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CoarseMap<T>) -> Result<CoarseMap<T>> {
        if !same_space(&self.target, &next.source) {
            return Err(Error::SpaceMismatch(
                "target of the first map is not the source of the second".into(),
            ));
        }
        let rel = self.rel.then(&next.rel)?;
        Ok(CoarseMap { source: self.source.clone(), target: next.target.clone(), rel })
    }

    /// Same relation, re-attached to structurally equal spaces.
    pub fn rebased(&self, source: Arc<MetricSpace<T>>, target: Arc<MetricSpace<T>>) -> Result<Self> {
        if !same_space(&self.source, &source) || !same_space(&self.target, &target) {
            return Err(Error::SpaceMismatch("rebasing onto different spaces".into()));
        }
        Ok(CoarseMap { source, target, rel: self.rel.clone() })
    }

    /// Single-valued representative choosing the least target label in each
    /// image set. It is `Φ(0)`-close to the original.
    pub fn canonicalize(&self) -> CoarseMap<T> {
        let rows = self
            .rel
            .rows()
            .iter()
            .map(|r| {
                let best = r
                    .iter()
                    .copied()
                    .min_by(|&a, &b| self.target.label(a).cmp(self.target.label(b)))
                    .expect("maps are total");
                vec![best]
            })
            .collect();
        CoarseMap {
            source: self.source.clone(),
            target: self.target.clone(),
            rel: Relation { rows, cols: self.target.len() },
        }
    }

    /// Structural equality of relations over the same spaces.
    pub fn same_relation(&self, other: &CoarseMap<T>) -> bool {
        same_space(&self.source, &other.source)
            && same_space(&self.target, &other.target)
            && self.rel == other.rel
    }

    /// `diam(f(x) ∪ f(x'))`.
    pub fn pair_diameter(&self, x: usize, x2: usize) -> ExtDist<T> {
        union_diameter(&self.target, self.image_of(x), self.image_of(x2))
    }

    /// `min { d(y, y') : y ∈ f(x), y' ∈ f(x') }`.
    pub fn pair_separation(&self, x: usize, x2: usize) -> ExtDist<T> {
        let mut best = ExtDist::Infinite;
        for &y in self.image_of(x) {
            let row = self.target.row(y);
            for &y2 in self.image_of(x2) {
                best = best.min(row[y2]);
            }
        }
        best
    }
}

impl<T: Scalar> fmt::Display for CoarseMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.source.points() {
            let ys: Vec<&str> = self.image_of(x).iter().map(|&y| self.target.label(y)).collect();
            writeln!(f, "{} -> {{{}}}", self.source.label(x), ys.join(", "))?;
        }
        Ok(())
    }
}

/// `diam(A ∪ B)` for index sets of one space.
pub(crate) fn union_diameter<T: Scalar>(space: &MetricSpace<T>, a: &[usize], b: &[usize]) -> ExtDist<T> {
    let mut best = ExtDist::zero();
    for (k, &p) in a.iter().enumerate() {
        let row = space.row(p);
        for &q in a[k + 1..].iter().chain(b) {
            best = best.max(row[q]);
        }
    }
    for (k, &p) in b.iter().enumerate() {
        let row = space.row(p);
        for &q in &b[k + 1..] {
            best = best.max(row[q]);
        }
    }
    best
}

/// `g ∘ f`.
pub fn compose_maps<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<CoarseMap<T>> {
    f.then(g)
}

fn require_parallel<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<()> {
    if !same_space(f.source(), g.source()) || !same_space(f.target(), g.target()) {
        return Err(Error::SpaceMismatch("maps do not share source and target".into()));
    }
    Ok(())
}

/// Least `κ` with `f ≈_κ g`: `max_x diam(f(x) ∪ g(x))`, witnessed by the
/// first source point attaining it.
pub fn closeness<T: Scalar>(f: &CoarseMap<T>, g: &CoarseMap<T>) -> Result<Extremum<T, usize>> {
    require_parallel(f, g)?;
    let mut best = Extremum { value: ExtDist::zero(), witness: None };
    for x in f.source().points() {
        let d = union_diameter(f.target(), f.image_of(x), g.image_of(x));
        if best.witness.is_none() || d > best.value {
            best = Extremum { value: d, witness: Some(x) };
        }
    }
    Ok(best)
}

/// The transpose `f^T`. Defined as a map only when `f` is surjective.
pub fn relation_transpose<T: Scalar>(f: &CoarseMap<T>) -> Result<CoarseMap<T>> {
    let t = f.relation().transpose();
    if let Some(y) = t.rows().iter().position(Vec::is_empty) {
        return Err(Error::NotSurjective(f.target().label(y).to_string()));
    }
    CoarseMap::from_relation(f.target().clone(), f.source().clone(), t)
}

/// `N_t ∘ f`: each point goes to the closed `t`-neighbourhood of its image.
pub fn neighbourhood_relation<T: Scalar>(f: &CoarseMap<T>, t: ExtDist<T>) -> CoarseMap<T> {
    let target = f.target();
    let rows = f
        .source()
        .points()
        .map(|x| {
            target
                .points()
                .filter(|&y| {
                    let d = distance_to_set(target, y, f.image_of(x));
                    d.is_finite() && d <= t
                })
                .collect()
        })
        .collect();
    CoarseMap::new(f.source().clone(), target.clone(), rows).expect("neighbourhoods contain the image")
}

/// `max_x diam f(x)`.
pub fn fibre_diameter<T: Scalar>(f: &CoarseMap<T>) -> ExtDist<T> {
    f.source()
        .points()
        .map(|x| diameter(f.target(), f.image_of(x)))
        .max()
        .unwrap_or(ExtDist::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricSpace;

    type D = ExtDist<f64>;

    fn line(points: &[f64]) -> Arc<MetricSpace<f64>> {
        let ls = points.iter().map(|p| format!("{p}")).collect();
        Arc::new(MetricSpace::from_fn(ls, |i, j| D::Finite((points[i] - points[j]).abs())).unwrap())
    }

    fn named(names: &[&str]) -> Arc<MetricSpace<f64>> {
        let ls: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        Arc::new(MetricSpace::from_fn(ls, |i, j| D::Finite(if i == j { 0.0 } else { 1.0 })).unwrap())
    }

    #[test]
    fn composing_with_identity() {
        let x = line(&[0.0, 1.0, 2.0]);
        let y = line(&[0.0, 5.0]);
        let f = CoarseMap::new(x.clone(), y.clone(), vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let id = CoarseMap::identity(x.clone());
        assert!(id.then(&f).unwrap().same_relation(&f));
        assert!(f.then(&CoarseMap::identity(y)).unwrap().same_relation(&f));
    }

    #[test]
    fn multivalued_composition_is_a_union() {
        let x = named(&["x"]);
        let y = named(&["a", "b"]);
        let z = named(&["p", "q"]);
        let f = CoarseMap::new(x, y.clone(), vec![vec![0, 1]]).unwrap();
        let g = CoarseMap::new(y, z, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(f.then(&g).unwrap().image_of(0), &[0, 1]);
    }

    #[test]
    fn composition_checks_spaces() {
        let x = named(&["x"]);
        let f = CoarseMap::identity(x.clone());
        let g = CoarseMap::identity(named(&["a", "b"]));
        assert!(matches!(f.then(&g), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn closeness_examples() {
        let grid = line(&(0..=5).map(f64::from).collect::<Vec<_>>());
        let pt = named(&["0"]);
        let f = CoarseMap::new(pt.clone(), grid.clone(), vec![vec![0]]).unwrap();
        let g = CoarseMap::new(pt.clone(), grid.clone(), vec![vec![5]]).unwrap();
        assert_eq!(closeness(&f, &g).unwrap().value, D::Finite(5.0));
        assert_eq!(closeness(&f, &f).unwrap().value, D::zero());

        let h = CoarseMap::new(pt, grid, vec![vec![1, 3]]).unwrap();
        assert_eq!(closeness(&h, &h).unwrap().value, D::Finite(2.0));

        let split = Arc::new(MetricSpace::<f64>::from_edges(vec!["a".into(), "b".into()], &[]).unwrap());
        let one = named(&["x"]);
        let f = CoarseMap::new(one.clone(), split.clone(), vec![vec![0]]).unwrap();
        let g = CoarseMap::new(one, split, vec![vec![1]]).unwrap();
        assert_eq!(closeness(&f, &g).unwrap().value, D::Infinite);
    }

    #[test]
    fn transpose_of_two_to_one() {
        let x = named(&["a", "b"]);
        let p = named(&["p"]);
        let f = CoarseMap::new(x.clone(), p.clone(), vec![vec![0], vec![0]]).unwrap();
        let ft = relation_transpose(&f).unwrap();
        assert_eq!(ft.image_of(0), &[0, 1]);
        let id = CoarseMap::identity(x);
        assert!(relation_transpose(&id).unwrap().same_relation(&id));
    }

    #[test]
    fn transpose_needs_surjectivity() {
        let x = named(&["a"]);
        let y = named(&["p", "q"]);
        let f = CoarseMap::new(x, y, vec![vec![0]]).unwrap();
        match relation_transpose(&f) {
            Err(Error::NotSurjective(l)) => assert_eq!(l, "q"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_neighbourhood_is_identity() {
        let grid = line(&[0.0, 1.0, 3.0]);
        let f = CoarseMap::new(grid.clone(), grid.clone(), vec![vec![1], vec![2], vec![0]]).unwrap();
        assert!(neighbourhood_relation(&f, D::zero()).same_relation(&f));
        let n1 = neighbourhood_relation(&f, D::Finite(1.0));
        assert_eq!(n1.image_of(0), &[0, 1]);
    }

    #[test]
    fn non_total_maps_are_rejected() {
        let x = named(&["a", "b"]);
        let err = CoarseMap::new(x.clone(), x, vec![vec![0], vec![]]).unwrap_err();
        assert!(matches!(err, Error::NotTotal(l) if l == "b"));
    }

    #[test]
    fn canonical_representative_picks_least_label() {
        let x = named(&["x"]);
        let y = named(&["b", "a", "c"]);
        let f = CoarseMap::new(x, y, vec![vec![0, 1, 2]]).unwrap();
        let c = f.canonicalize();
        assert_eq!(c.image_of(0), &[1]);
        assert!(c.is_single_valued());
    }
}
