//! Seeded random instances for property tests and the acceptance suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::colimits::GluingRelation;
use crate::controls::{Continuity, ControlFn};
use crate::maps::CoarseMap;
use crate::metric::{MetricSpace, Subspace};
use crate::scalar::Scalar;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weights {
    /// `1..=max_weight`; shortest paths are bit-exact in floating point.
    Integer,
    /// Multiples of 1/8, exact in floating point and cheap as rationals.
    Eighths,
    /// Uniform in `[0.1, max_weight]`. Meant for floats: as rationals the
    /// denominators overflow quickly.
    Real,
}

#[derive(Clone, Copy, Debug)]
pub struct SpaceSpec {
    pub points: usize,
    /// Extra edges beyond a spanning forest, as a fraction of `points`.
    pub density: f64,
    pub max_weight: u32,
    pub weights: Weights,
    /// Number of mutually infinitely distant components.
    pub components: usize,
}

impl SpaceSpec {
    pub fn connected(points: usize) -> Self {
        SpaceSpec { points, density: 1.0, max_weight: 5, weights: Weights::Integer, components: 1 }
    }
}

fn weight<T: Scalar>(rng: &mut Rng8, spec: &SpaceSpec) -> T {
    match spec.weights {
        Weights::Integer => T::from_u32(rng.gen_range(1..=spec.max_weight)).expect("small integer"),
        Weights::Eighths => T::from_f64_lossy(rng.gen_range(1..=8 * spec.max_weight) as f64 / 8.0),
        Weights::Real => T::from_f64_lossy(rng.gen_range(0.1..=spec.max_weight as f64)),
    }
}

/// Shortest-path metric of a random weighted graph; labels are `p0, p1, …`.
pub fn random_space<T: Scalar>(rng: &mut Rng8, spec: &SpaceSpec) -> MetricSpace<T> {
    let n = spec.points;
    let k = spec.components.clamp(1, n.max(1));
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    let component = |i: usize| i % k;
    let mut edges = Vec::new();
    // Spanning tree per component: attach each point to an earlier one.
    for i in k..n {
        let mut j = rng.gen_range(0..i);
        while component(j) != component(i) {
            j = rng.gen_range(0..i);
        }
        edges.push((i, j, weight(rng, spec)));
    }
    let extra = (spec.density * n as f64).round() as usize;
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && component(a) == component(b) {
            edges.push((a, b, weight(rng, spec)));
        }
    }
    MetricSpace::from_edges(labels, &edges).expect("generated edges are valid")
}

/// Each source point gets between 1 and `max_images` images.
pub fn random_map<T: Scalar>(
    rng: &mut Rng8,
    source: &Arc<MetricSpace<T>>,
    target: &Arc<MetricSpace<T>>,
    max_images: usize,
) -> CoarseMap<T> {
    let images = source
        .points()
        .map(|_| {
            let k = rng.gen_range(1..=max_images.max(1));
            (0..k).map(|_| rng.gen_range(0..target.len())).collect()
        })
        .collect();
    CoarseMap::new(source.clone(), target.clone(), images).expect("nonempty images")
}

/// Nonempty random subset of `parent`.
pub fn random_subspace<T: Scalar>(rng: &mut Rng8, parent: &Arc<MetricSpace<T>>, size: usize) -> Subspace<T> {
    let mut idx: Vec<usize> = parent.points().collect();
    idx.shuffle(rng);
    idx.truncate(size.clamp(1, parent.len()));
    Subspace::new(parent.clone(), idx).expect("indices from the parent")
}

pub fn random_gluing(rng: &mut Rng8, points: usize, pairs: usize) -> GluingRelation {
    let mut rel = GluingRelation::new();
    for _ in 0..pairs {
        rel.insert(rng.gen_range(0..points), rng.gen_range(0..points));
    }
    rel
}

/// Increasing table on `[0, t_max]` with `pieces` segments, some of them
/// jumps.
pub fn random_increasing_table<T: Scalar>(rng: &mut Rng8, t_max: u32, pieces: usize) -> ControlFn<T> {
    let mut ts: Vec<u32> = (0..pieces.saturating_sub(1)).map(|_| rng.gen_range(1..t_max)).collect();
    ts.push(0);
    ts.push(t_max);
    ts.sort_unstable();
    ts.dedup();
    let half = |k: u32| T::from_u32(k).expect("small") / T::two();
    let mut v = rng.gen_range(0..4u32);
    let mut points = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        points.push((T::from_u32(t).expect("small"), half(v)));
        if i > 0 && i + 1 < ts.len() && rng.gen_bool(0.2) {
            v += rng.gen_range(1..6);
            points.push((T::from_u32(t).expect("small"), half(v)));
        }
        v += rng.gen_range(0..12);
    }
    let continuity = if rng.gen_bool(0.5) { Continuity::Left } else { Continuity::Right };
    ControlFn::table_with(points, continuity).expect("increasing by construction")
}

/// Replace each image point by a random point within `radius` of it.
pub fn perturb<T: Scalar>(rng: &mut Rng8, f: &CoarseMap<T>, radius: T) -> CoarseMap<T> {
    let y = f.target();
    let images = f
        .source()
        .points()
        .map(|x| {
            f.image_of(x)
                .iter()
                .map(|&p| {
                    let near: Vec<usize> =
                        y.points().filter(|&q| y.d(p, q) <= crate::ext::ExtDist::Finite(radius)).collect();
                    *near.choose(rng).expect("p is near itself")
                })
                .collect()
        })
        .collect();
    CoarseMap::new(f.source().clone(), y.clone(), images).expect("nonempty images")
}
