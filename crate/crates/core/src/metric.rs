//! Finite extended metric spaces, subspaces, neighbourhoods and disjoint unions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ext::{ExtDist, Extremum};
use crate::maps::CoarseMap;
use crate::scalar::Scalar;

/// A finite set of labelled points with an extended distance matrix.
///
/// Construction checks only the structure (square matrix, unique labels,
/// nonnegative entries). The metric axioms are checked by [`MetricSpace::validate`].
#[derive(Clone, Debug)]
pub struct MetricSpace<T> {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<ExtDist<T>>,
}

impl<T: Scalar> MetricSpace<T> {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<ExtDist<T>>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                points: n,
                rows: rows.len(),
                cols: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
            });
        }
        Self::from_flat(labels, rows.into_iter().flatten().collect())
    }

    /// Build from a row-major `n x n` matrix.
    pub fn from_flat(labels: Vec<String>, dist: Vec<ExtDist<T>>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n * n {
            return Err(Error::DimensionMismatch {
                points: n,
                rows: if n == 0 { 0 } else { dist.len() / n.max(1) },
                cols: n,
            });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if let Some(p) = dist.iter().position(|d| !d.is_valid()) {
            return Err(Error::InvalidDistance {
                a: labels[p / n].clone(),
                b: labels[p % n].clone(),
                value: dist[p].to_f64(),
            });
        }
        Ok(MetricSpace { labels, index, dist })
    }

    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> ExtDist<T>) -> Result<Self> {
        let n = labels.len();
        let dist = (0..n * n).map(|p| f(p / n, p % n)).collect();
        Self::from_flat(labels, dist)
    }

    /// Complete a weighted graph to its shortest-path metric. Parallel edges
    /// keep the lightest weight; unreachable pairs are at distance `∞`.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize, T)]) -> Result<Self> {
        let n = labels.len();
        let mut dist = vec![ExtDist::Infinite; n * n];
        for i in 0..n {
            dist[i * n + i] = ExtDist::zero();
        }
        for &(a, b, w) in edges {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, len: n });
                }
            }
            let w = ExtDist::Finite(w);
            if !w.is_valid() {
                return Err(Error::InvalidDistance {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                    value: w.to_f64(),
                });
            }
            if a != b && w < dist[a * n + b] {
                dist[a * n + b] = w;
                dist[b * n + a] = w;
            }
        }
        let pivots: Vec<usize> = (0..n).collect();
        T::relax_through_pivots(n, &mut dist, &pivots);
        Self::from_flat(labels, dist)
    }

    pub fn from_labelled_edges(labels: Vec<String>, edges: &[(String, String, T)]) -> Result<Self> {
        let lookup: HashMap<&str, usize> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            let ia = *lookup.get(a.as_str()).ok_or_else(|| Error::UnknownPoint(a.clone()))?;
            let ib = *lookup.get(b.as_str()).ok_or_else(|| Error::UnknownPoint(b.clone()))?;
            idx_edges.push((ia, ib, *w));
        }
        Self::from_edges(labels, &idx_edges)
    }

    pub fn empty() -> Self {
        MetricSpace {
            labels: Vec::new(),
            index: HashMap::new(),
            dist: Vec::new(),
        }
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        Self::from_flat(vec![label.into()], vec![ExtDist::zero()]).expect("one point is a space")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> ExtDist<T> {
        self.dist[i * self.labels.len() + j]
    }

    pub fn row(&self, i: usize) -> &[ExtDist<T>] {
        let n = self.labels.len();
        &self.dist[i * n..(i + 1) * n]
    }

    /// Row-major distance matrix.
    pub fn matrix(&self) -> &[ExtDist<T>] {
        &self.dist
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// Same space with every label prefixed.
    pub fn with_prefix(&self, prefix: &str) -> Self {
        let labels = self.labels.iter().map(|l| format!("{prefix}{l}")).collect();
        Self::from_flat(labels, self.dist.clone()).expect("prefixing keeps labels unique")
    }

    /// Distinct finite distances realised between pairs of points, ascending.
    /// Includes `0` whenever the space is nonempty.
    pub fn realized_distances(&self) -> Vec<T> {
        let mut ds: Vec<ExtDist<T>> = self.dist.iter().copied().filter(ExtDist::is_finite).collect();
        ds.sort();
        ds.dedup();
        ds.into_iter().filter_map(ExtDist::finite).collect()
    }

    /// Check the metric axioms up to `eps`.
    ///
    /// Distinct points must be at positive distance: pseudometrics are rejected.
    pub fn validate(&self, eps: T) -> ValidationReport {
        let n = self.len();
        let mut report = ValidationReport::default();
        let label = |i: usize| self.labels[i].clone();
        for x in 0..n {
            let dxx = self.d(x, x);
            if !dxx.le_eps(ExtDist::zero(), eps) {
                report.push(Violation::Diagonal { point: label(x), value: dxx.to_f64() });
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                let (a, b) = (self.d(x, y), self.d(y, x));
                if !a.approx_eq(b, eps) {
                    report.push(Violation::Symmetry {
                        a: label(x),
                        b: label(y),
                        forward: a.to_f64(),
                        backward: b.to_f64(),
                    });
                }
                if a.le_eps(ExtDist::zero(), T::zero()) {
                    report.push(Violation::Separation { a: label(x), b: label(y) });
                }
            }
        }
        for x in 0..n {
            let row_x = self.row(x);
            for z in 0..n {
                if x == z {
                    continue;
                }
                let direct = row_x[z];
                for y in 0..n {
                    let via = row_x[y] + self.d(y, z);
                    if !direct.le_eps(via, eps) {
                        report.push(Violation::Triangle {
                            x: label(x),
                            z: label(z),
                            y: label(y),
                            direct: direct.to_f64(),
                            via: via.to_f64(),
                        });
                        break;
                    }
                }
            }
        }
        report
    }

    pub fn is_metric(&self, eps: T) -> bool {
        self.validate(eps).is_empty()
    }
}

impl<T: Scalar> PartialEq for MetricSpace<T> {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

/// Whether two spaces are the same object or equal as labelled matrices.
pub fn same_space<T: Scalar>(a: &Arc<MetricSpace<T>>, b: &Arc<MetricSpace<T>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Diagonal { point: String, value: f64 },
    Separation { a: String, b: String },
    Symmetry { a: String, b: String, forward: f64, backward: f64 },
    /// `d(x, z) > d(x, y) + d(y, z)`.
    Triangle { x: String, z: String, y: String, direct: f64, via: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { point, value } => write!(f, "d({point},{point}) = {value} != 0"),
            Violation::Separation { a, b } => write!(f, "distinct points {a}, {b} at distance 0"),
            Violation::Symmetry { a, b, forward, backward } => {
                write!(f, "asymmetric pair ({a},{b}): {forward} vs {backward}")
            }
            Violation::Triangle { x, z, y, direct, via } => {
                write!(f, "triangle ({x},{z},{y}): d({x},{z}) = {direct} > {via} via {y}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    /// The first violations found, at most [`ValidationReport::MAX_KEPT`].
    pub violations: Vec<Violation>,
    /// Total number of violations found.
    pub total: usize,
}

impl ValidationReport {
    pub const MAX_KEPT: usize = 64;

    fn push(&mut self, v: Violation) {
        self.total += 1;
        if self.violations.len() < Self::MAX_KEPT {
            self.violations.push(v);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("all metric axioms hold");
        }
        writeln!(f, "{} violation(s):", self.total)?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// A subset of a parent space carrying the induced metric.
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    parent: Arc<MetricSpace<T>>,
    members: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn new(parent: Arc<MetricSpace<T>>, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= parent.len()) {
            return Err(Error::IndexOutOfRange { index: bad, len: parent.len() });
        }
        Ok(Subspace { parent, members })
    }

    pub fn whole(parent: Arc<MetricSpace<T>>) -> Self {
        let members = parent.points().collect();
        Subspace { parent, members }
    }

    pub fn from_labels(parent: Arc<MetricSpace<T>>, labels: &[&str]) -> Result<Self> {
        let members = labels.iter().map(|l| parent.require(l)).collect::<Result<Vec<_>>>()?;
        Self::new(parent, members)
    }

    pub fn parent(&self) -> &Arc<MetricSpace<T>> {
        &self.parent
    }

    /// Sorted parent indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &Subspace<T>) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|&m| self.parent.label(m)).collect()
    }

    /// The induced metric space. Labels and distances are copied verbatim.
    pub fn to_space(&self) -> MetricSpace<T> {
        let labels = self.members.iter().map(|&m| self.parent.label(m).to_string()).collect();
        let k = self.members.len();
        let mut dist = Vec::with_capacity(k * k);
        for &a in &self.members {
            let row = self.parent.row(a);
            dist.extend(self.members.iter().map(|&b| row[b]));
        }
        MetricSpace::from_flat(labels, dist).expect("subspace of a valid space")
    }

    /// The inclusion of the induced space into the parent, with the induced
    /// space as its source.
    pub fn inclusion(&self) -> CoarseMap<T> {
        let images = self.members.iter().map(|&m| vec![m]).collect();
        CoarseMap::new(Arc::new(self.to_space()), self.parent.clone(), images)
            .expect("inclusion is total")
    }
}

impl<T: Scalar> PartialEq for Subspace<T> {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.parent, &other.parent) && self.members == other.members
    }
}

/// `d(y, S)`; `∞` for the empty set.
pub fn distance_to_set<T: Scalar>(space: &MetricSpace<T>, y: usize, subset: &[usize]) -> ExtDist<T> {
    let row = space.row(y);
    subset.iter().map(|&s| row[s]).min().unwrap_or(ExtDist::Infinite)
}

/// Closed `r`-neighbourhood `{ y : d(y, S) <= r }`. For `r = ∞` this is every
/// point at finite distance from `S`.
pub fn neighbourhood_set<T: Scalar>(
    space: &Arc<MetricSpace<T>>,
    subset: &[usize],
    r: ExtDist<T>,
) -> Subspace<T> {
    let members = space
        .points()
        .filter(|&y| {
            let d = distance_to_set(space, y, subset);
            d.is_finite() && d <= r
        })
        .collect();
    Subspace { parent: space.clone(), members }
}

/// Supremum of pairwise distances; `0` for fewer than two points.
pub fn diameter<T: Scalar>(space: &MetricSpace<T>, subset: &[usize]) -> ExtDist<T> {
    diameter_witness(space, subset).value
}

pub fn diameter_witness<T: Scalar>(space: &MetricSpace<T>, subset: &[usize]) -> Extremum<T, (usize, usize)> {
    let mut best = Extremum { value: ExtDist::zero(), witness: None };
    for (k, &a) in subset.iter().enumerate() {
        let row = space.row(a);
        for &b in &subset[k + 1..] {
            if best.witness.is_none() || row[b] > best.value {
                best = Extremum { value: row[b], witness: Some((a, b)) };
            }
        }
    }
    best
}

/// Least `r` with `N_r(S)` the whole space: `sup_y d(y, S)`.
pub fn covering_radius<T: Scalar>(space: &MetricSpace<T>, subset: &[usize]) -> ExtDist<T> {
    covering_radius_witness(space, subset).value
}

/// Covering radius with the farthest point (least index on ties).
pub fn covering_radius_witness<T: Scalar>(space: &MetricSpace<T>, subset: &[usize]) -> Extremum<T, usize> {
    let mut best = Extremum { value: ExtDist::zero(), witness: None };
    for y in space.points() {
        let d = distance_to_set(space, y, subset);
        if best.witness.is_none() || d > best.value {
            best = Extremum { value: d, witness: Some(y) };
        }
    }
    best
}

/// Disjoint union with `∞` between summands, plus bookkeeping for inclusions.
#[derive(Clone, Debug)]
pub struct DisjointUnion<T> {
    pub space: Arc<MetricSpace<T>>,
    pub summands: Vec<Arc<MetricSpace<T>>>,
    offsets: Vec<usize>,
}

impl<T: Scalar> DisjointUnion<T> {
    pub fn offset(&self, summand: usize) -> usize {
        self.offsets[summand]
    }

    /// Index in the union of point `local` of summand `summand`.
    pub fn index_in(&self, summand: usize, local: usize) -> usize {
        self.offsets[summand] + local
    }

    /// Summand and local index of a union point.
    pub fn origin(&self, p: usize) -> (usize, usize) {
        let s = self.offsets.partition_point(|&o| o <= p) - 1;
        (s, p - self.offsets[s])
    }

    pub fn inclusion(&self, summand: usize) -> CoarseMap<T> {
        let off = self.offsets[summand];
        let images = self.summands[summand].points().map(|i| vec![off + i]).collect();
        CoarseMap::new(self.summands[summand].clone(), self.space.clone(), images)
            .expect("inclusion is total")
    }
}

/// Disjoint union; summand `i` has its labels prefixed with `"i/"`.
pub fn disjoint_union<T: Scalar>(spaces: &[Arc<MetricSpace<T>>]) -> DisjointUnion<T> {
    let prefixes: Vec<String> = (0..spaces.len()).map(|i| format!("{i}/")).collect();
    let refs: Vec<&str> = prefixes.iter().map(String::as_str).collect();
    disjoint_union_with_prefixes(spaces, &refs).expect("numeric prefixes are distinct")
}

pub fn disjoint_union_with_prefixes<T: Scalar>(
    spaces: &[Arc<MetricSpace<T>>],
    prefixes: &[&str],
) -> Result<DisjointUnion<T>> {
    if prefixes.len() != spaces.len() {
        return Err(Error::Parameter(format!(
            "{} prefixes for {} summands",
            prefixes.len(),
            spaces.len()
        )));
    }
    let mut offsets = Vec::with_capacity(spaces.len());
    let mut total = 0;
    for s in spaces {
        offsets.push(total);
        total += s.len();
    }
    let mut labels = Vec::with_capacity(total);
    for (s, p) in spaces.iter().zip(prefixes) {
        labels.extend(s.labels().iter().map(|l| format!("{p}{l}")));
    }
    let mut dist = vec![ExtDist::Infinite; total * total];
    for (s, &off) in spaces.iter().zip(&offsets) {
        let k = s.len();
        for i in 0..k {
            let dst = (off + i) * total + off;
            dist[dst..dst + k].copy_from_slice(s.row(i));
        }
    }
    Ok(DisjointUnion {
        space: Arc::new(MetricSpace::from_flat(labels, dist)?),
        summands: spaces.to_vec(),
        offsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type D = ExtDist<f64>;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    pub(crate) fn line(points: &[f64]) -> Arc<MetricSpace<f64>> {
        let ls = points.iter().map(|p| format!("{p}")).collect();
        Arc::new(MetricSpace::from_fn(ls, |i, j| D::Finite((points[i] - points[j]).abs())).unwrap())
    }

    #[test]
    fn one_point_space_is_valid() {
        let s = MetricSpace::<f64>::singleton("a");
        assert!(s.validate(1e-9).is_empty());
    }

    #[test]
    fn asymmetry_is_reported_with_witness() {
        let s = MetricSpace::new(
            labels(&["a", "b"]),
            vec![vec![D::zero(), D::Finite(1.0)], vec![D::Finite(2.0), D::zero()]],
        )
        .unwrap();
        let r = s.validate(1e-9);
        assert!(r.violations.contains(&Violation::Symmetry {
            a: "a".into(),
            b: "b".into(),
            forward: 1.0,
            backward: 2.0
        }));
    }

    #[test]
    fn triangle_violation_names_the_shortcut() {
        let f = D::Finite;
        let s = MetricSpace::new(
            labels(&["a", "b", "c"]),
            vec![
                vec![f(0.0), f(1.0), f(5.0)],
                vec![f(1.0), f(0.0), f(1.0)],
                vec![f(5.0), f(1.0), f(0.0)],
            ],
        )
        .unwrap();
        let r = s.validate(1e-9);
        assert!(r.violations.iter().any(|v| matches!(v,
            Violation::Triangle { x, z, y, .. } if x == "a" && z == "c" && y == "b")));
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let err = MetricSpace::<f64>::new(labels(&["a", "b"]), vec![vec![D::zero()]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        let err = MetricSpace::<f64>::from_flat(labels(&["a", "a"]), vec![D::zero(); 4]).unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(_)));
    }

    #[test]
    fn disjoint_union_separates_summands() {
        let a = Arc::new(MetricSpace::<f64>::singleton("a"));
        let b = Arc::new(MetricSpace::<f64>::singleton("b"));
        let u = disjoint_union(&[a, b]);
        let s = &u.space;
        assert_eq!(s.d(s.require("0/a").unwrap(), s.require("1/b").unwrap()), D::Infinite);

        let ab = Arc::new(
            MetricSpace::from_edges(labels(&["a", "b"]), &[(0, 1, 3.0)]).unwrap(),
        );
        let c = Arc::new(MetricSpace::<f64>::singleton("c"));
        let u = disjoint_union(&[ab, c]);
        let s = &u.space;
        let (a, b, c) = (s.require("0/a").unwrap(), s.require("0/b").unwrap(), s.require("1/c").unwrap());
        assert_eq!(s.d(a, b), D::Finite(3.0));
        assert_eq!(s.d(a, c), D::Infinite);
        assert_eq!(u.origin(c), (1, 0));
    }

    #[test]
    fn union_of_one_space_is_a_copy() {
        let l = line(&[0.0, 1.0, 4.0]);
        let u = disjoint_union(std::slice::from_ref(&l));
        assert_eq!(u.space.matrix(), l.matrix());
        let sub = Subspace::whole(u.space.clone());
        assert_eq!(sub.to_space().matrix(), l.matrix());
    }

    #[test]
    fn empty_union_is_empty() {
        let u = disjoint_union::<f64>(&[]);
        assert!(u.space.is_empty());
    }

    #[test]
    fn neighbourhoods_on_a_grid() {
        let pts: Vec<f64> = (0..=10).map(f64::from).collect();
        let g = line(&pts);
        let n = neighbourhood_set(&g, &[0], D::Finite(3.0));
        assert_eq!(n.members(), &[0, 1, 2, 3]);
        let all: Vec<usize> = g.points().collect();
        assert_eq!(neighbourhood_set(&g, &all, D::zero()).members(), all.as_slice());
        assert!(neighbourhood_set(&g, &[], D::Finite(5.0)).is_empty());
    }

    #[test]
    fn infinite_radius_stays_in_component() {
        let two = Arc::new(MetricSpace::<f64>::from_edges(labels(&["a", "b", "c"]), &[(0, 1, 7.0)]).unwrap());
        let n = neighbourhood_set(&two, &[0], D::Infinite);
        assert_eq!(n.members(), &[0, 1]);
        let n = neighbourhood_set(&two, &[0], D::Finite(5.0));
        assert_eq!(n.members(), &[0]);
    }

    #[test]
    fn diameters_and_radii() {
        let pts: Vec<f64> = (0..=10).map(f64::from).collect();
        let g = line(&pts);
        assert_eq!(diameter(&g, &[3]), D::zero());
        assert_eq!(diameter(&g, &[]), D::zero());
        assert_eq!(diameter(&g, &[0, 7]), D::Finite(7.0));
        let evens: Vec<usize> = (0..=10).step_by(2).collect();
        assert_eq!(covering_radius(&g, &evens), D::Finite(1.0));
        let all: Vec<usize> = g.points().collect();
        assert_eq!(covering_radius(&g, &all), D::zero());
        assert_eq!(covering_radius(&g, &[]), D::Infinite);

        let two = MetricSpace::<f64>::from_edges(labels(&["a", "b"]), &[]).unwrap();
        assert_eq!(diameter(&two, &[0, 1]), D::Infinite);
        assert_eq!(covering_radius(&two, &[0]), D::Infinite);
    }

    #[test]
    fn realized_distances_are_sorted_and_distinct() {
        let g = line(&[0.0, 1.0, 3.0]);
        assert_eq!(g.realized_distances(), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn pseudometrics_are_rejected() {
        let s = MetricSpace::<f64>::from_fn(labels(&["a", "b"]), |_, _| D::zero()).unwrap();
        assert!(s.validate(1e-9).violations.iter().any(|v| matches!(v, Violation::Separation { .. })));
    }
}
