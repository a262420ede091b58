//! Exhaustive certificates for a single map: tight upper and lower profiles,
//! affine fit, lower stretch and surjectivity radius, each with a witness.
//!
//! On a finite space every map has some upper and lower control, so nothing
//! here is a yes/no answer to "is this a quasi-isometric embedding". The
//! numbers are meant to be compared across a family of truncations.

use std::cmp::Ordering;

use crate::controls::{ControlFn, Table, Continuity};
use crate::error::Result;
use crate::ext::{ExtDist, Extremum};
use crate::maps::CoarseMap;
use crate::metric::covering_radius_witness;
use crate::scalar::Scalar;

/// One realized source scale with the profile value there.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileStep<T: Scalar> {
    pub scale: T,
    pub value: ExtDist<T>,
    pub witness: Option<(usize, usize)>,
}

/// A step function sampled at the realized source distances.
///
/// The upper profile is right-continuous: `U(t)` is the value at the largest
/// scale `<= t`. The lower profile is left-continuous: `L(t)` is the value at
/// the smallest scale `>= t`, and `beyond` past the largest finite scale.
#[derive(Clone, Debug, PartialEq)]
pub struct StepProfile<T: Scalar> {
    pub steps: Vec<ProfileStep<T>>,
    pub continuity: Continuity,
    pub beyond: ProfileStep<T>,
}

impl<T: Scalar> StepProfile<T> {
    pub fn at(&self, t: T) -> ExtDist<T> {
        self.step_at(t).map(|s| s.value).unwrap_or(self.beyond.value)
    }

    fn step_at(&self, t: T) -> Option<&ProfileStep<T>> {
        match self.continuity {
            Continuity::Right => {
                let i = self.steps.partition_point(|s| s.scale <= t);
                if i == 0 {
                    None
                } else {
                    Some(&self.steps[i - 1])
                }
            }
            Continuity::Left => self.steps.get(self.steps.partition_point(|s| s.scale < t)),
        }
    }

    /// The profile as a right-continuous step table, when all values are finite.
    pub fn to_control(&self) -> Option<ControlFn<T>> {
        let mut points: Vec<(T, T)> = Vec::new();
        for s in &self.steps {
            let v = s.value.finite()?;
            match points.last() {
                None => points.push((s.scale, v)),
                Some(&(_, prev)) if v > prev => {
                    points.push((s.scale, prev));
                    points.push((s.scale, v));
                }
                _ => {}
            }
        }
        if points.is_empty() {
            points.push((T::zero(), T::zero()));
        }
        if points[0].0 > T::zero() {
            points.insert(0, (T::zero(), points[0].1));
        }
        Some(ControlFn::Tabulated(Table::new(points, Continuity::Right).ok()?))
    }

    /// First realized scale where the profile exceeds `bound(scale) + eps`.
    pub fn first_excess(&self, bound: &ControlFn<T>, eps: T) -> Result<Option<ProfileExcess<T>>> {
        for s in &self.steps {
            let b = bound.evaluate(s.scale)?;
            if !s.value.le_eps(ExtDist::Finite(b), eps) {
                return Ok(Some(ProfileExcess { step: s.clone(), bound: b }));
            }
        }
        Ok(None)
    }

    /// Least `bound(scale) - value` over realized scales; `None` without scales.
    pub fn min_slack(&self, bound: &ControlFn<T>) -> Result<Option<ExtDist<T>>> {
        let mut best: Option<ExtDist<T>> = None;
        for s in &self.steps {
            let b = bound.evaluate(s.scale)?;
            let slack = match s.value {
                ExtDist::Finite(v) if v <= b => ExtDist::Finite(b - v),
                // Negative slack is reported as zero; `first_excess` locates it.
                _ => ExtDist::zero(),
            };
            best = Some(best.map_or(slack, |b| b.min(slack)));
        }
        Ok(best)
    }
}

/// One certified inequality `measured <= bound`, with the point or pair that
/// realises `measured`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck<T: Scalar> {
    pub name: String,
    pub measured: ExtDist<T>,
    pub bound: ExtDist<T>,
    pub witness: Option<String>,
    pub holds: bool,
}

impl<T: Scalar> BoundCheck<T> {
    pub fn new(name: impl Into<String>, measured: ExtDist<T>, bound: ExtDist<T>, witness: Option<String>, eps: T) -> Self {
        let holds = measured.le_eps(bound, eps);
        BoundCheck { name: name.into(), measured, bound, witness, holds }
    }

    /// `bound - measured` when both are finite.
    pub fn slack(&self) -> Option<T> {
        Some(self.bound.finite()? - self.measured.finite()?)
    }
}

impl<T: Scalar> std::fmt::Display for BoundCheck<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} {} {}",
            self.name,
            self.measured,
            if self.holds { "<=" } else { ">" },
            self.bound
        )?;
        if let Some(s) = self.slack() {
            write!(f, " (slack {s})")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " at {w}")?;
        }
        Ok(())
    }
}

/// An exact identity (no tolerance), with a counterexample when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

impl std::fmt::Display for LawCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.name, if self.holds { "holds" } else { "fails" })?;
        if let Some(w) = &self.witness {
            write!(f, " at {w}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfileExcess<T: Scalar> {
    pub step: ProfileStep<T>,
    pub bound: T,
}

/// `U(t) <= slope * t + offset` with the least slope once the offset is
/// pinned to `U(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFit<T: Scalar> {
    pub slope: ExtDist<T>,
    pub offset: ExtDist<T>,
    /// Pair realising the slope, if any scale is positive.
    pub witness: Option<(usize, usize)>,
}

impl<T: Scalar> AffineFit<T> {
    pub fn to_control(&self) -> Option<ControlFn<T>> {
        Some(ControlFn::Affine { slope: self.slope.finite()?, offset: self.offset.finite()? })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapCertificate<T: Scalar> {
    pub upper_profile: StepProfile<T>,
    pub lower_profile: StepProfile<T>,
    pub affine_upper_fit: AffineFit<T>,
    /// Least `λ` with `d_Y >= d_X / λ` over finite-distance pairs.
    pub lower_stretch: Extremum<T, (usize, usize)>,
    pub surjectivity_radius: Extremum<T, usize>,
}

fn better<T: Scalar>(
    cur: &Option<(ExtDist<T>, (usize, usize))>,
    v: ExtDist<T>,
    w: (usize, usize),
    ord: Ordering,
) -> bool {
    match cur {
        None => true,
        Some((cv, cw)) => match v.cmp(cv) {
            o if o == ord => true,
            Ordering::Equal => w < *cw,
            _ => false,
        },
    }
}

/// Build the certificate by scanning every pair of source points.
pub fn certify<T: Scalar>(f: &CoarseMap<T>) -> MapCertificate<T> {
    let x = f.source();
    let scales = x.realized_distances();
    let k = scales.len();
    // Per scale: extremal pair at exactly that distance.
    let mut up: Vec<Option<(ExtDist<T>, (usize, usize))>> = vec![None; k];
    let mut low: Vec<Option<(ExtDist<T>, (usize, usize))>> = vec![None; k];
    let mut low_inf: Option<(ExtDist<T>, (usize, usize))> = None;
    let mut stretch: Option<(ExtDist<T>, (usize, usize))> = None;

    for a in x.points() {
        let row = x.row(a);
        for b in a..x.len() {
            let sep = f.pair_separation(a, b);
            let w = (a, b);
            match row[b] {
                ExtDist::Finite(d) => {
                    let idx = scales
                        .binary_search_by(|s| s.partial_cmp(&d).expect("comparable"))
                        .expect("realized distance");
                    let diam = f.pair_diameter(a, b);
                    if better(&up[idx], diam, w, Ordering::Greater) {
                        up[idx] = Some((diam, w));
                    }
                    if better(&low[idx], sep, w, Ordering::Less) {
                        low[idx] = Some((sep, w));
                    }
                    if a != b {
                        let ratio = match sep {
                            ExtDist::Finite(s) if !s.is_zero() => ExtDist::Finite(d / s),
                            ExtDist::Finite(_) => ExtDist::Infinite,
                            ExtDist::Infinite => ExtDist::zero(),
                        };
                        if better(&stretch, ratio, w, Ordering::Greater) {
                            stretch = Some((ratio, w));
                        }
                    }
                }
                ExtDist::Infinite => {
                    if better(&low_inf, sep, w, Ordering::Less) {
                        low_inf = Some((sep, w));
                    }
                }
            }
        }
    }

    // Prefix maxima for U, suffix minima for L; ties keep the smaller pair.
    let mut upper = Vec::with_capacity(k);
    let mut acc: Option<(ExtDist<T>, (usize, usize))> = None;
    for (i, level) in up.into_iter().enumerate() {
        if let Some((v, w)) = level {
            if better(&acc, v, w, Ordering::Greater) {
                acc = Some((v, w));
            }
        }
        let (value, witness) = acc.map_or((ExtDist::zero(), None), |(v, w)| (v, Some(w)));
        upper.push(ProfileStep { scale: scales[i], value, witness });
    }
    let mut lower = vec![None; k];
    let mut acc = low_inf;
    for i in (0..k).rev() {
        if let Some((v, w)) = low[i] {
            if better(&acc, v, w, Ordering::Less) {
                acc = Some((v, w));
            }
        }
        let (value, witness) = acc.map_or((ExtDist::Infinite, None), |(v, w)| (v, Some(w)));
        lower[i] = Some(ProfileStep { scale: scales[i], value, witness });
    }
    let lower: Vec<ProfileStep<T>> = lower.into_iter().map(|s| s.expect("filled")).collect();

    let top = scales.last().copied().unwrap_or(T::zero());
    let upper_beyond = upper
        .last()
        .cloned()
        .unwrap_or(ProfileStep { scale: top, value: ExtDist::zero(), witness: None });
    let lower_beyond = ProfileStep {
        scale: top,
        value: low_inf.map_or(ExtDist::Infinite, |p| p.0),
        witness: low_inf.map(|p| p.1),
    };

    let offset = upper.first().map_or(ExtDist::zero(), |s| s.value);
    let mut slope: Option<(ExtDist<T>, (usize, usize))> = None;
    for s in upper.iter().skip(1) {
        let cand = match (s.value, offset) {
            (ExtDist::Finite(v), ExtDist::Finite(o)) => ExtDist::Finite((v - o) / s.scale),
            (ExtDist::Infinite, ExtDist::Finite(_)) => ExtDist::Infinite,
            _ => ExtDist::zero(),
        };
        let w = s.witness.expect("positive scales come from pairs");
        if slope.as_ref().is_none_or(|(cv, _)| cand > *cv) {
            slope = Some((cand, w));
        }
    }

    MapCertificate {
        upper_profile: StepProfile { steps: upper, continuity: Continuity::Right, beyond: upper_beyond },
        lower_profile: StepProfile { steps: lower, continuity: Continuity::Left, beyond: lower_beyond },
        affine_upper_fit: AffineFit {
            slope: slope.map_or(ExtDist::zero(), |s| s.0),
            offset,
            witness: slope.map(|s| s.1),
        },
        lower_stretch: Extremum {
            value: stretch.map_or(ExtDist::zero(), |s| s.0),
            witness: stretch.map(|s| s.1),
        },
        surjectivity_radius: covering_radius_witness(f.target(), &f.image()),
    }
}
