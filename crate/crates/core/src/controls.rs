//! Control functions: increasing maps `[0, ∞) -> [0, ∞)`, either affine or
//! piecewise linear tables, with composition, sums, the coarsely
//! superadditive majorant and transposes.

use std::fmt;

use crate::error::{Error, Result};
use crate::ext::ExtDist;
use crate::scalar::Scalar;

/// Which one-sided value a table takes at a breakpoint listed twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Continuity {
    Left,
    Right,
}

/// Piecewise linear table.
///
/// Breakpoints are nondecreasing; a breakpoint may appear twice to encode a
/// jump, in which case `continuity` decides the value at the breakpoint
/// itself. Below the first breakpoint the table is constant. Past the last
/// breakpoint it continues linearly with the slope of the final segment, or
/// stays constant when the final two entries share a breakpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Table<T> {
    points: Vec<(T, T)>,
    continuity: Continuity,
}

impl<T: Scalar> Table<T> {
    pub fn new(points: Vec<(T, T)>, continuity: Continuity) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidControl("empty table".into()));
        };
        if !(first.0 >= T::zero()) || !(first.1 >= T::zero()) {
            return Err(Error::InvalidControl("negative or NaN entry in table".into()));
        }
        for (k, w) in points.windows(2).enumerate() {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            // `!(a <= b)` also rejects NaN.
            if !(t0 <= t1) {
                return Err(Error::InvalidControl(format!("breakpoints decrease at entry {}", k + 1)));
            }
            if !(v0 <= v1) {
                return Err(Error::InvalidControl(format!("values decrease at entry {}", k + 1)));
            }
            if k >= 1 && points[k - 1].0 == t1 {
                return Err(Error::InvalidControl(format!(
                    "breakpoint listed more than twice at entry {}",
                    k + 1
                )));
            }
        }
        Ok(Table { points, continuity })
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn continuity(&self) -> Continuity {
        self.continuity
    }

    pub fn has_jumps(&self) -> bool {
        self.points.windows(2).any(|w| w[0].0 == w[1].0 && w[0].1 != w[1].1)
    }

    pub fn tail_slope(&self) -> T {
        match self.points.as_slice() {
            [.., (t0, v0), (t1, v1)] if t0 != t1 => (*v1 - *v0) / (*t1 - *t0),
            _ => T::zero(),
        }
    }

    fn last(&self) -> (T, T) {
        *self.points.last().expect("tables are nonempty")
    }

    fn extend(&self, t: T) -> T {
        let (tl, vl) = self.last();
        vl + self.tail_slope() * (t - tl)
    }

    fn eval_rule(&self, t: T, rule: Continuity) -> T {
        let p = &self.points;
        if t < p[0].0 {
            return p[0].1;
        }
        match rule {
            Continuity::Right => {
                let i = p.partition_point(|q| q.0 <= t) - 1;
                if i + 1 == p.len() {
                    self.extend(t)
                } else if p[i].0 == t {
                    p[i].1
                } else {
                    interpolate(p[i], p[i + 1], t)
                }
            }
            Continuity::Left => {
                let j = p.partition_point(|q| q.0 < t);
                if j == p.len() {
                    self.extend(t)
                } else if p[j].0 == t {
                    p[j].1
                } else {
                    interpolate(p[j - 1], p[j], t)
                }
            }
        }
    }

    pub fn eval(&self, t: T) -> T {
        self.eval_rule(t, self.continuity)
    }

    /// One-sided limits `(F(t-), F(t+))`.
    pub fn limits(&self, t: T) -> (T, T) {
        (self.eval_rule(t, Continuity::Left), self.eval_rule(t, Continuity::Right))
    }
}

fn interpolate<T: Scalar>((ta, va): (T, T), (tb, vb): (T, T), t: T) -> T {
    va + (vb - va) * (t - ta) / (tb - ta)
}

/// An increasing function `[0, ∞) -> [0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ControlFn<T> {
    Affine { slope: T, offset: T },
    Tabulated(Table<T>),
    /// `outer ∘ inner`.
    Compose(Box<ControlFn<T>>, Box<ControlFn<T>>),
    Sum(Box<ControlFn<T>>, Box<ControlFn<T>>),
}

impl<T: Scalar> ControlFn<T> {
    pub fn affine(slope: T, offset: T) -> Result<Self> {
        if !(slope >= T::zero()) || !(offset >= T::zero()) {
            return Err(Error::InvalidControl(format!("affine({slope}, {offset}) has a negative coefficient")));
        }
        Ok(ControlFn::Affine { slope, offset })
    }

    pub fn identity() -> Self {
        ControlFn::Affine { slope: T::one(), offset: T::zero() }
    }

    pub fn constant(c: T) -> Self {
        ControlFn::Affine { slope: T::zero(), offset: c }
    }

    pub fn table(points: Vec<(T, T)>) -> Result<Self> {
        Ok(ControlFn::Tabulated(Table::new(points, Continuity::Right)?))
    }

    pub fn table_with(points: Vec<(T, T)>, continuity: Continuity) -> Result<Self> {
        Ok(ControlFn::Tabulated(Table::new(points, continuity)?))
    }

    pub fn evaluate(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::Domain(t.to_f64_lossy()));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: T) -> T {
        match self {
            ControlFn::Affine { slope, offset } => *slope * t + *offset,
            ControlFn::Tabulated(table) => table.eval(t),
            ControlFn::Compose(outer, inner) => outer.eval_unchecked(inner.eval_unchecked(t)),
            ControlFn::Sum(a, b) => a.eval_unchecked(t) + b.eval_unchecked(t),
        }
    }

    /// Evaluation on extended arguments, with `F(∞) = ∞`.
    pub fn at(&self, t: ExtDist<T>) -> Result<ExtDist<T>> {
        match t {
            ExtDist::Finite(v) => self.evaluate(v).map(ExtDist::Finite),
            ExtDist::Infinite => Ok(ExtDist::Infinite),
        }
    }

    pub fn as_affine(&self) -> Option<(T, T)> {
        match self {
            ControlFn::Affine { slope, offset } => Some((*slope, *offset)),
            _ => None,
        }
    }

    /// An equivalent table, when one can be formed exactly.
    pub fn to_table(&self) -> Option<Table<T>> {
        match self {
            ControlFn::Affine { slope, offset } => Some(Table {
                points: vec![(T::zero(), *offset), (T::one(), *slope + *offset)],
                continuity: Continuity::Right,
            }),
            ControlFn::Tabulated(t) => Some(t.clone()),
            ControlFn::Compose(outer, inner) => compose_tables(&outer.to_table()?, &inner.to_table()?),
            ControlFn::Sum(a, b) => sum_tables(&a.to_table()?, &b.to_table()?),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, ControlFn::Affine { slope, offset } if slope.is_zero() && offset.is_zero())
    }
}

impl<T: Scalar> fmt::Display for ControlFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlFn::Affine { slope, offset } => write!(f, "affine:{slope},{offset}"),
            ControlFn::Tabulated(t) => {
                f.write_str("table:")?;
                for (k, (a, b)) in t.points.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}:{b}")?;
                }
                Ok(())
            }
            ControlFn::Compose(a, b) => write!(f, "({a}) o ({b})"),
            ControlFn::Sum(a, b) => write!(f, "({a}) + ({b})"),
        }
    }
}

fn sorted_unique<T: Scalar>(mut ts: Vec<T>) -> Vec<T> {
    ts.sort_by(|a, b| a.partial_cmp(b).expect("comparable breakpoints"));
    ts.dedup();
    ts
}

/// Append the pinned point one unit past the last breakpoint so the final
/// segment carries the true tail slope.
fn pin_tail<T: Scalar>(points: &mut Vec<(T, T)>, f: impl Fn(T) -> T) {
    let t = points.last().expect("nonempty").0 + T::one();
    points.push((t, f(t)));
}

fn sum_tables<T: Scalar>(a: &Table<T>, b: &Table<T>) -> Option<Table<T>> {
    let continuity = match (a.has_jumps(), b.has_jumps()) {
        (false, false) => Continuity::Right,
        (true, false) => a.continuity,
        (false, true) => b.continuity,
        (true, true) if a.continuity == b.continuity => a.continuity,
        _ => return None,
    };
    let ts = sorted_unique(a.points.iter().chain(&b.points).map(|p| p.0).collect());
    let mut points = Vec::with_capacity(ts.len() + 1);
    for t in ts {
        let (al, ar) = a.limits(t);
        let (bl, br) = b.limits(t);
        points.push((t, al + bl));
        if ar + br != al + bl {
            points.push((t, ar + br));
        }
    }
    pin_tail(&mut points, |t| a.eval(t) + b.eval(t));
    Some(Table { points, continuity })
}

/// `outer ∘ inner` for continuous tables. Breakpoints of the composite are
/// those of `inner` plus the preimages of the breakpoints of `outer`.
fn compose_tables<T: Scalar>(outer: &Table<T>, inner: &Table<T>) -> Option<Table<T>> {
    if outer.has_jumps() || inner.has_jumps() {
        return None;
    }
    let mut ts: Vec<T> = inner.points.iter().map(|p| p.0).collect();
    let (tl, vl) = inner.last();
    let tail = inner.tail_slope();
    for &(s, _) in &outer.points {
        for w in inner.points.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            if v0 < s && s < v1 {
                ts.push(interpolate((v0, t0), (v1, t1), s));
            }
        }
        if s > vl && tail > T::zero() {
            ts.push(tl + (s - vl) / tail);
        }
    }
    let ts = sorted_unique(ts);
    let f = |t: T| outer.eval(inner.eval(t));
    let mut points: Vec<(T, T)> = ts.into_iter().map(|t| (t, f(t))).collect();
    pin_tail(&mut points, f);
    Some(Table { points, continuity: Continuity::Right })
}

/// `F ∘ G`. Affine inputs give an affine result; continuous tables are
/// composed exactly; anything else becomes an expression node.
pub fn compose_controls<T: Scalar>(f: &ControlFn<T>, g: &ControlFn<T>) -> ControlFn<T> {
    if let (Some((a, b)), Some((c, d))) = (f.as_affine(), g.as_affine()) {
        return ControlFn::Affine { slope: a * c, offset: a * d + b };
    }
    match (f.to_table(), g.to_table()) {
        (Some(ft), Some(gt)) => match compose_tables(&ft, &gt) {
            Some(t) => ControlFn::Tabulated(t),
            None => ControlFn::Compose(Box::new(f.clone()), Box::new(g.clone())),
        },
        _ => ControlFn::Compose(Box::new(f.clone()), Box::new(g.clone())),
    }
}

/// `F + G`.
pub fn sum_controls<T: Scalar>(f: &ControlFn<T>, g: &ControlFn<T>) -> ControlFn<T> {
    if g.is_zero() {
        return f.clone();
    }
    if f.is_zero() {
        return g.clone();
    }
    if let (Some((a, b)), Some((c, d))) = (f.as_affine(), g.as_affine()) {
        return ControlFn::Affine { slope: a + c, offset: b + d };
    }
    match (f.to_table(), g.to_table()) {
        (Some(ft), Some(gt)) => match sum_tables(&ft, &gt) {
            Some(t) => ControlFn::Tabulated(t),
            None => ControlFn::Sum(Box::new(f.clone()), Box::new(g.clone())),
        },
        _ => ControlFn::Sum(Box::new(f.clone()), Box::new(g.clone())),
    }
}

/// A majorant `F'` of `F` with `F'(s) + F'(t) <= F'(s + t) + C`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperadditivityCertificate<T> {
    pub majorant: ControlFn<T>,
    pub constant: T,
    /// `K_1, K_2, …`; the last entry is the slope used past the table.
    pub slopes: Vec<T>,
}

/// Majorant built segment by segment: on `(n-1, n]` it is `K_n t + C` with
/// `C = F(1)` and `K_n` the least slope, not below `K_{n-1}`, that keeps
/// `F <= K_n t + C` on `[0, n]`. Affine controls are their own majorant with
/// `C` equal to the offset.
pub fn superadditive_majorant<T: Scalar>(f: &ControlFn<T>) -> Result<SuperadditivityCertificate<T>> {
    if let Some((a, b)) = f.as_affine() {
        return Ok(SuperadditivityCertificate { majorant: f.clone(), constant: b, slopes: vec![a] });
    }
    let table = f
        .to_table()
        .ok_or_else(|| Error::InvalidControl("the majorant needs a control expressible as one table".into()))?;
    let c = table.eval(T::one());

    // Candidate (t, value, counts at t itself). The right limit at a jump only
    // matters for segments extending past t.
    let mut candidates: Vec<(T, T, bool)> = Vec::new();
    for &(t, _) in &table.points {
        let (left, right) = table.limits(t);
        let at = table.eval(t);
        candidates.push((t, at, true));
        if right > left {
            candidates.push((t, right, false));
        }
    }
    let last_t = table.last().0;
    let big_n = last_t.to_f64_lossy().ceil().max(0.0) as usize + 1;

    let mut slopes = Vec::with_capacity(big_n + 1);
    let mut k = T::zero();
    for n in 1..=big_n {
        let nt = T::from_usize(n).expect("segment index fits the scalar");
        let mut cand = vec![(nt, table.eval(nt))];
        cand.extend(
            candidates
                .iter()
                .filter(|(t, _, closed)| *t >= T::one() && (*t < nt || (*closed && *t <= nt)))
                .map(|(t, v, _)| (*t, *v)),
        );
        for (t, v) in cand {
            let s = (v - c) / t;
            if s > k {
                k = s;
            }
        }
        slopes.push(k);
    }
    let tail = if table.tail_slope() > k { table.tail_slope() } else { k };
    slopes.push(tail);

    let mut points: Vec<(T, T)> = vec![(T::zero(), c)];
    for (idx, &kn) in slopes.iter().enumerate() {
        let lo = T::from_usize(idx).expect("fits");
        let hi = lo + T::one();
        for p in [(lo, kn * lo + c), (hi, kn * hi + c)] {
            if points.last() != Some(&p) {
                points.push(p);
            }
        }
    }
    let majorant = ControlFn::Tabulated(Table::new(points, Continuity::Left)?);
    Ok(SuperadditivityCertificate { majorant, constant: c, slopes })
}

/// Grid check of a certificate against the function it majorises.
#[derive(Clone, Debug, PartialEq)]
pub enum SuperadditivityViolation<T> {
    NotAbove { t: T, f: T, majorant: T },
    Superadditivity { s: T, t: T, lhs: T, rhs: T },
}

/// Check `F <= F'` and `F'(s) + F'(t) <= F'(s+t) + C + eps` for all grid pairs
/// in `[0, max]` with the given step. Returns the first failure.
pub fn verify_superadditivity<T: Scalar>(
    f: &ControlFn<T>,
    cert: &SuperadditivityCertificate<T>,
    max: T,
    step: T,
    eps: T,
) -> Result<Option<SuperadditivityViolation<T>>> {
    if !(step > T::zero()) {
        return Err(Error::Parameter("grid step must be positive".into()));
    }
    let count = (max / step).to_f64_lossy().floor() as usize;
    let grid: Vec<T> = (0..=count).map(|i| T::from_usize(i).expect("fits") * step).collect();
    let vals: Vec<T> = grid.iter().map(|&t| cert.majorant.evaluate(t)).collect::<Result<_>>()?;
    for (&t, &m) in grid.iter().zip(&vals) {
        let fv = f.evaluate(t)?;
        if fv > m + eps {
            return Ok(Some(SuperadditivityViolation::NotAbove { t, f: fv, majorant: m }));
        }
    }
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let lhs = vals[i] + vals[j];
            let rhs = cert.majorant.evaluate(grid[i] + grid[j])? + cert.constant;
            if lhs > rhs + eps {
                return Ok(Some(SuperadditivityViolation::Superadditivity { s: grid[i], t: grid[j], lhs, rhs }));
            }
        }
    }
    Ok(None)
}

/// `Ψ^T(t) = sup { s >= 0 : Ψ(s) <= t }` with `sup ∅ = 0`, valid on `[0, t_max]`.
///
/// Fails with [`Error::Improper`] when `Ψ` levels off at some value `<= t_max`,
/// since `Ψ^T` is infinite from that level on.
pub fn transpose_control<T: Scalar>(psi: &ControlFn<T>, t_max: T) -> Result<ControlFn<T>> {
    if let Some((a, b)) = psi.as_affine() {
        if a.is_zero() {
            if b <= t_max {
                return Err(Error::Improper { level: b.to_f64_lossy() });
            }
            return Ok(ControlFn::constant(T::zero()));
        }
        if b.is_zero() {
            return Ok(ControlFn::Affine { slope: T::one() / a, offset: T::zero() });
        }
    }
    let table = psi
        .to_table()
        .ok_or_else(|| Error::InvalidControl("cannot transpose a control that is not one table".into()))?;
    let mut pts = table.points.clone();
    if pts[0].0 > T::zero() {
        pts.insert(0, (T::zero(), pts[0].1));
    }
    let tail = table.tail_slope();
    let last_v = table.last().1;
    if tail.is_zero() && last_v <= t_max {
        return Err(Error::Improper { level: last_v.to_f64_lossy() });
    }
    let mut swapped: Vec<(T, T)> = pts.iter().map(|&(s, v)| (v, s)).collect();
    if swapped[0].0 > T::zero() {
        swapped.insert(0, (T::zero(), T::zero()));
    }
    // Runs of equal levels collapse to their endpoints: the value there is the
    // largest s, the one before it the smallest.
    let mut compact: Vec<(T, T)> = Vec::with_capacity(swapped.len());
    for p in swapped {
        let n = compact.len();
        if n >= 2 && compact[n - 1].0 == p.0 && compact[n - 2].0 == p.0 {
            compact[n - 1] = p;
        } else {
            compact.push(p);
        }
    }
    // A positive tail slope `a` leaves the last two swapped entries on a
    // segment of slope `1/a`, which is the extension we want.
    Ok(ControlFn::Tabulated(Table::new(compact, Continuity::Right)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn aff(a: f64, b: f64) -> ControlFn<f64> {
        ControlFn::affine(a, b).unwrap()
    }

    fn tab(points: &[(f64, f64)]) -> ControlFn<f64> {
        ControlFn::table(points.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(aff(2.0, 3.0).evaluate(5.0).unwrap(), 13.0);
        assert_eq!(tab(&[(0.0, 1.0), (10.0, 1.0)]).evaluate(4.0).unwrap(), 1.0);
        assert_eq!(aff(0.0, 7.0).evaluate(123.0).unwrap(), 7.0);
        assert!(matches!(aff(1.0, 0.0).evaluate(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn table_extension_and_jumps() {
        let f = tab(&[(1.0, 2.0), (3.0, 6.0)]);
        assert_eq!(f.evaluate(0.0).unwrap(), 2.0);
        assert_eq!(f.evaluate(2.0).unwrap(), 4.0);
        assert_eq!(f.evaluate(5.0).unwrap(), 10.0);

        let step = vec![(0.0, 0.0), (2.0, 0.0), (2.0, 5.0)];
        let right = ControlFn::table_with(step.clone(), Continuity::Right).unwrap();
        let left = ControlFn::table_with(step, Continuity::Left).unwrap();
        assert_eq!(right.evaluate(2.0).unwrap(), 5.0);
        assert_eq!(left.evaluate(2.0).unwrap(), 0.0);
        assert_eq!(left.evaluate(9.0).unwrap(), 5.0);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(ControlFn::<f64>::table(vec![]).is_err());
        assert!(ControlFn::table(vec![(0.0, 2.0), (1.0, 1.0)]).is_err());
        assert!(ControlFn::table(vec![(1.0, 0.0), (0.5, 1.0)]).is_err());
        assert!(ControlFn::table(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(ControlFn::table(vec![(0.0, f64::NAN)]).is_err());
        assert!(ControlFn::affine(-1.0, 0.0).is_err());
    }

    #[test]
    fn affine_algebra() {
        assert_eq!(compose_controls(&aff(2.0, 1.0), &aff(3.0, 4.0)), aff(6.0, 9.0));
        assert_eq!(sum_controls(&aff(2.0, 1.0), &aff(3.0, 4.0)), aff(5.0, 5.0));
        let f = tab(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(sum_controls(&f, &ControlFn::constant(0.0)), f);
    }

    #[test]
    fn tabulated_composition_matches_pointwise_evaluation() {
        let f = tab(&[(0.0, 0.0), (1.0, 3.0), (4.0, 4.0), (6.0, 10.0)]);
        let g = tab(&[(0.0, 0.5), (2.0, 2.0), (3.0, 2.0), (5.0, 7.0)]);
        let fg = compose_controls(&f, &g);
        assert!(matches!(fg, ControlFn::Tabulated(_)));
        let sum = sum_controls(&f, &g);
        for i in 0..=400 {
            let t = i as f64 * 0.05;
            let direct = f.evaluate(g.evaluate(t).unwrap()).unwrap();
            assert!((fg.evaluate(t).unwrap() - direct).abs() < 1e-9, "compose at {t}");
            let s = f.evaluate(t).unwrap() + g.evaluate(t).unwrap();
            assert!((sum.evaluate(t).unwrap() - s).abs() < 1e-9, "sum at {t}");
        }
    }

    #[test]
    fn jumps_survive_sums() {
        let step = ControlFn::table_with(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 2.0)], Continuity::Left).unwrap();
        let s = sum_controls(&step, &aff(1.0, 0.0));
        for t in [0.0, 0.5, 1.0, 1.5, 3.0] {
            assert_eq!(s.evaluate(t).unwrap(), step.evaluate(t).unwrap() + t);
        }
    }

    #[test]
    fn majorant_of_affine_is_itself() {
        let f = aff(2.0, 3.0);
        let cert = superadditive_majorant(&f).unwrap();
        assert_eq!(cert.majorant, f);
        assert_eq!(cert.constant, 3.0);
    }

    #[test]
    fn majorant_of_constant() {
        let f = tab(&[(0.0, 4.0), (10.0, 4.0)]);
        let cert = superadditive_majorant(&f).unwrap();
        assert_eq!(cert.constant, 4.0);
        for t in [0.0, 0.5, 3.0, 50.0] {
            assert_eq!(cert.majorant.evaluate(t).unwrap(), 4.0);
        }
    }

    #[test]
    fn majorant_of_square_root_samples() {
        let pts: Vec<(f64, f64)> = (0..=20).map(|i| (i as f64 * 5.0, (i as f64 * 5.0).sqrt())).collect();
        let f = tab(&pts);
        let cert = superadditive_majorant(&f).unwrap();
        assert_eq!(cert.constant, f.evaluate(1.0).unwrap());
        assert_eq!(verify_superadditivity(&f, &cert, 100.0, 0.5, 1e-9).unwrap(), None);
    }

    #[test]
    fn majorant_handles_jumps() {
        let f = ControlFn::table_with(vec![(0.0, 0.0), (2.5, 1.0), (2.5, 9.0), (4.0, 9.0)], Continuity::Left)
            .unwrap();
        let cert = superadditive_majorant(&f).unwrap();
        assert_eq!(verify_superadditivity(&f, &cert, 20.0, 0.25, 1e-9).unwrap(), None);
    }

    #[test]
    fn majorant_slopes_are_minimal_and_increasing() {
        let f = tab(&[(0.0, 0.0), (1.0, 1.0), (2.0, 5.0), (3.0, 6.0)]);
        let cert = superadditive_majorant(&f).unwrap();
        // C = 1; F(2) = 5 forces K_2 = 2; F(3) = 6 needs only 5/3.
        assert_eq!(cert.constant, 1.0);
        assert_eq!(&cert.slopes[..3], &[0.0, 2.0, 2.0]);
    }

    #[test]
    fn exact_majorant_over_rationals() {
        let f: ControlFn<Rational64> = ControlFn::table(vec![
            (r(0, 1), r(0, 1)),
            (r(1, 1), r(1, 1)),
            (r(3, 1), r(2, 1)),
            (r(7, 2), r(9, 1)),
        ])
        .unwrap();
        let cert = superadditive_majorant(&f).unwrap();
        assert_eq!(verify_superadditivity(&f, &cert, r(12, 1), r(1, 4), r(0, 1)).unwrap(), None);
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose_control(&aff(0.5, 0.0), 100.0).unwrap(), aff(2.0, 0.0));
        // Ψ(s) = max(0, 2s - 3) has Ψ^T(t) = (t + 3) / 2.
        let psi = tab(&[(0.0, 0.0), (1.5, 0.0), (2.5, 2.0)]);
        let pt = transpose_control(&psi, 50.0).unwrap();
        for i in 0..=100 {
            let t = i as f64 * 0.5;
            assert!((pt.evaluate(t).unwrap() - (t + 3.0) / 2.0).abs() < 1e-12, "at {t}");
        }
        let shifted = transpose_control(&aff(2.0, 3.0), 50.0).unwrap();
        assert_eq!(shifted.evaluate(1.0).unwrap(), 0.0);
        assert_eq!(shifted.evaluate(7.0).unwrap(), 2.0);
    }

    #[test]
    fn improper_controls_cannot_be_transposed() {
        assert!(matches!(transpose_control(&aff(0.0, 3.0), 10.0), Err(Error::Improper { .. })));
        assert!(matches!(
            transpose_control(&tab(&[(0.0, 0.0), (2.0, 4.0), (3.0, 4.0)]), 10.0),
            Err(Error::Improper { level }) if level == 4.0
        ));
        // Improper only beyond the requested range is fine.
        assert!(transpose_control(&tab(&[(0.0, 0.0), (2.0, 40.0), (3.0, 40.0)]), 10.0).is_ok());
    }

    #[test]
    fn transpose_matches_brute_force_sup() {
        let psi = ControlFn::table_with(
            vec![(0.5, 1.0), (2.0, 1.0), (3.0, 4.0), (3.0, 6.0), (5.0, 6.0), (6.0, 9.0)],
            Continuity::Right,
        )
        .unwrap();
        let pt = transpose_control(&psi, 30.0).unwrap();
        let fine: Vec<f64> = (0..=40_000).map(|i| i as f64 * 1e-3).collect();
        for i in 0..=60 {
            let t = i as f64 * 0.5;
            let brute = fine
                .iter()
                .copied()
                .filter(|&s| psi.evaluate(s).unwrap() <= t)
                .fold(0.0, f64::max);
            assert!((pt.evaluate(t).unwrap() - brute).abs() <= 2e-3, "t = {t}: {} vs {brute}", pt.evaluate(t).unwrap());
        }
    }
}
