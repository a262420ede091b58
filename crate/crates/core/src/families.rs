//! Generators for the concrete examples, each at a caller-chosen truncation.

use std::sync::Arc;

use num_traits::Float;

use crate::certify::{BoundCheck, LawCheck};
use crate::colimits::{pushout, Pushout};
use crate::equalisers::{filtration_report, FiltrationReport};
use crate::error::{Error, Result};
use crate::ext::ExtDist;
use crate::maps::{closeness, CoarseMap};
use crate::metric::MetricSpace;
use crate::scalar::Scalar;

fn int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("integer fits the scalar")
}

/// Points of the real line with labels given by their coordinates.
pub fn line_space<T: Scalar>(coords: &[T]) -> MetricSpace<T> {
    let labels = coords.iter().map(|c| c.to_string()).collect();
    MetricSpace::from_fn(labels, |i, j| ExtDist::Finite((coords[i] - coords[j]).abs()))
        .expect("distinct coordinates")
}

/// `n³ ↦ n²` for `1 <= n <= N`, both sides with the Euclidean metric.
pub fn cubes_to_squares<T: Scalar>(n: usize) -> Result<CoarseMap<T>> {
    if n < 2 {
        return Err(Error::Parameter("cubes_to_squares needs N >= 2".into()));
    }
    let ns = 1..=n as i64;
    let cubes: Vec<T> = ns.clone().map(|k| int(k * k * k)).collect();
    let squares: Vec<T> = ns.map(|k| int(k * k)).collect();
    CoarseMap::from_fn(Arc::new(line_space(&cubes)), Arc::new(line_space(&squares)), |i| i)
}

/// Brute-force `max_{m<n<=N} (n³ - m³) / (n² - m²)` as an exact fraction.
pub fn cubes_to_squares_stretch(n: usize) -> (i64, i64) {
    let mut best = (0i64, 1i64);
    for b in 2..=n as i64 {
        for a in 1..b {
            let (num, den) = (b * b * b - a * a * a, b * b - a * a);
            if num * best.1 > best.0 * den {
                best = (num, den);
            }
        }
    }
    best
}

/// The inclusion of `{n² : 0 <= n <= N}` into a grid of spacing `step`
/// covering `[0, N²]`.
#[derive(Clone, Debug)]
pub struct SquaresIntoLine<T: Scalar> {
    pub map: CoarseMap<T>,
    /// Largest distance from a square to the grid point it was snapped to.
    pub max_snap_error: T,
}

pub fn squares_into_line<T: Scalar>(n: usize, step: T) -> Result<SquaresIntoLine<T>> {
    if n < 1 {
        return Err(Error::Parameter("squares_into_line needs N >= 1".into()));
    }
    if !(step > T::zero()) {
        return Err(Error::Parameter("grid step must be positive".into()));
    }
    let top: T = int((n * n) as i64);
    let count = (top / step).to_f64_lossy().ceil() as usize;
    let grid: Vec<T> = (0..=count).map(|k| int::<T>(k as i64) * step).collect();
    let squares: Vec<T> = (0..=n as i64).map(|k| int(k * k)).collect();
    let mut snap = T::zero();
    let mut images = Vec::with_capacity(squares.len());
    for &s in &squares {
        let k = (s / step).to_f64_lossy().round() as usize;
        let err = (grid[k] - s).abs();
        if err > snap {
            snap = err;
        }
        images.push(vec![k]);
    }
    let map = CoarseMap::new(Arc::new(line_space(&squares)), Arc::new(line_space(&grid)), images)?;
    Ok(SquaresIntoLine { map, max_snap_error: snap })
}

/// Hyperbolic distance between `a + i·ha` and `b + i·hb` in the upper half
/// plane, written as `2 asinh(|z - w| / (2 sqrt(ha hb)))` which avoids the
/// cancellation in `acosh(1 + x)` for small `x`.
pub fn upper_half_plane_distance<T: Float>((a, ha): (T, T), (b, hb): (T, T)) -> T {
    let two = T::one() + T::one();
    let chord = (a - b).hypot(ha - hb);
    two * (chord / (two * (ha * hb).sqrt())).asinh()
}

/// The horocycle `t ↦ t + i` sampled on `{-T, -T + step, …, T}`, as the map
/// from the parameter grid (Euclidean) to the same points with the
/// hyperbolic metric.
pub fn horocycle_in_h2<T: Scalar + Float>(t_max: T, step: T) -> Result<CoarseMap<T>> {
    if !(t_max > T::zero()) || !(step > T::zero()) {
        return Err(Error::Parameter("horocycle needs T > 0 and step > 0".into()));
    }
    let two = <T as Scalar>::two();
    let count = (two * t_max / step).round().to_usize().expect("grid size");
    let params: Vec<T> = (0..=count)
        .map(|k| -t_max + <T as num_traits::NumCast>::from(k).expect("fits") * step)
        .collect();
    let source = Arc::new(line_space(&params));
    let labels: Vec<String> = params.iter().map(|t| format!("{t}+i")).collect();
    let one = T::one();
    let target = Arc::new(MetricSpace::from_fn(labels, |i, j| {
        ExtDist::Finite(if i == j { T::zero() } else { upper_half_plane_distance((params[i], one), (params[j], one)) })
    })?);
    CoarseMap::from_fn(source, target, |i| i)
}

/// Parameters of the non-coexact family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoncoexactParams<T> {
    pub n_max: usize,
    pub t_max: T,
    pub step: T,
    /// Join the strands at `t = 1` (resp. the origin) instead of leaving
    /// them at infinite distance.
    pub with_gluing: bool,
}

/// `X = ⊔ X_n` with `X_n` a grid in `[1, t_max]`, `R ⊂ ⊔ Y_n` the joint
/// image of the two paths `f±`, and the maps `ρ, σ, τ` with the pushout
/// `R ⊔_X R`.
#[derive(Clone, Debug)]
pub struct NoncoexactFamily<T: Scalar> {
    pub params: NoncoexactParams<T>,
    /// `(n, t)` for each point of `X`.
    pub x_coords: Vec<(usize, T)>,
    /// `(n, x, y)` for each point of `R`.
    pub r_coords: Vec<(usize, T, T)>,
    pub x: Arc<MetricSpace<T>>,
    pub r: Arc<MetricSpace<T>>,
    pub f_plus: CoarseMap<T>,
    pub f_minus: CoarseMap<T>,
    pub rho: CoarseMap<T>,
    pub sigma: CoarseMap<T>,
    /// Copy 1 receives `f+` (so `i1 = g+`), copy 2 receives `f-`.
    pub pushout: Pushout<T>,
    pub tau: CoarseMap<T>,
}

impl<T: Scalar> NoncoexactFamily<T> {
    pub fn g_plus(&self) -> &CoarseMap<T> {
        &self.pushout.i1
    }

    pub fn g_minus(&self) -> &CoarseMap<T> {
        &self.pushout.i2
    }
}

/// `f±_n(t)`: up the `y`-axis to height `±n`, then along the `x`-axis.
pub fn path_point<T: Scalar>(n: usize, t: T, sign: T) -> (T, T) {
    let nt: T = int(n as i64);
    if t <= nt {
        (T::zero(), sign * t)
    } else if n == 0 {
        // Avoid a signed zero, which would print as `-0`.
        (t, T::zero())
    } else {
        (t - nt, sign * nt)
    }
}

pub fn noncoexact_x_distance<T: Scalar>((m, s): (usize, T), (n, t): (usize, T), glued: bool) -> ExtDist<T> {
    if m == n {
        ExtDist::Finite((t - s).abs())
    } else if glued {
        ExtDist::Finite(t + s - T::one())
    } else {
        ExtDist::Infinite
    }
}

pub fn noncoexact_y_distance<T: Scalar>((m, x, y): (usize, T, T), (n, x2, y2): (usize, T, T), glued: bool) -> ExtDist<T> {
    if m == n {
        ExtDist::Finite((x - x2).abs() + (y - y2).abs())
    } else if glued {
        ExtDist::Finite(x.abs() + x2.abs() + y.abs() + y2.abs() + T::one())
    } else {
        ExtDist::Infinite
    }
}

pub fn noncoexact_family<T: Scalar>(p: NoncoexactParams<T>) -> Result<NoncoexactFamily<T>> {
    if p.n_max < 1 || !(p.t_max >= T::one()) {
        return Err(Error::Parameter("noncoexact family needs n_max >= 1 and t_max >= 1".into()));
    }
    if !(p.step > T::zero()) {
        return Err(Error::Parameter("grid step must be positive".into()));
    }
    let count = ((p.t_max - T::one()) / p.step).to_f64_lossy().floor() as i64;
    let ts: Vec<T> = (0..=count).map(|k| T::one() + int::<T>(k) * p.step).collect();
    let x_coords: Vec<(usize, T)> = (0..=p.n_max).flat_map(|n| ts.iter().map(move |&t| (n, t))).collect();
    let x_labels = x_coords.iter().map(|(n, t)| format!("{n},{t}")).collect();
    let x = Arc::new(MetricSpace::from_fn(x_labels, |i, j| {
        noncoexact_x_distance(x_coords[i], x_coords[j], p.with_gluing)
    })?);

    let mut r_coords: Vec<(usize, T, T)> = Vec::new();
    let mut plus = Vec::with_capacity(x_coords.len());
    let mut minus = Vec::with_capacity(x_coords.len());
    let mut lookup = std::collections::HashMap::new();
    let mut index_of = |c: (usize, T, T), r_coords: &mut Vec<(usize, T, T)>| -> usize {
        let key = format!("{},{},{}", c.0, c.1, c.2);
        *lookup.entry(key).or_insert_with(|| {
            r_coords.push(c);
            r_coords.len() - 1
        })
    };
    for &(n, t) in &x_coords {
        let (a, b) = path_point(n, t, T::one());
        plus.push(index_of((n, a, b), &mut r_coords));
        let (a, b) = path_point(n, t, -T::one());
        minus.push(index_of((n, a, b), &mut r_coords));
    }
    let r_labels: Vec<String> = r_coords.iter().map(|(n, a, b)| format!("{n},{a},{b}")).collect();
    let r = Arc::new(MetricSpace::from_fn(r_labels, |i, j| {
        noncoexact_y_distance(r_coords[i], r_coords[j], p.with_gluing)
    })?);

    let f_plus = CoarseMap::from_fn(x.clone(), r.clone(), |i| plus[i])?;
    let f_minus = CoarseMap::from_fn(x.clone(), r.clone(), |i| minus[i])?;

    let x_key = |n: usize, t: T| x.require(&format!("{n},{t}"));
    let r_key = |n: usize, a: T, b: T| r.require(&format!("{n},{a},{b}"));
    let mut rho_img = Vec::with_capacity(r_coords.len());
    let mut sigma_img = Vec::with_capacity(r_coords.len());
    for &(n, a, b) in &r_coords {
        rho_img.push(vec![x_key(n, a.abs() + b.abs())?]);
        sigma_img.push(vec![r_key(n, a, if b.is_zero() { b } else { -b })?]);
    }
    let rho = CoarseMap::new(r.clone(), x.clone(), rho_img)?;
    let sigma = CoarseMap::new(r.clone(), r.clone(), sigma_img)?;

    let po = pushout(&f_plus, &f_minus)?;
    let tau = rho.then(&f_plus)?.then(&po.i1)?;
    Ok(NoncoexactFamily { params: p, x_coords, r_coords, x, r, f_plus, f_minus, rho, sigma, pushout: po, tau })
}

/// Membership in `Eq_{2κ}(f+, f-)`: `min(n, t) <= κ`.
pub fn noncoexact_equaliser_member<T: Scalar>(n: usize, t: T, kappa: T) -> bool {
    let nt: T = int(n as i64);
    (if nt < t { nt } else { t }) <= kappa
}

/// Law checks on the family and the equaliser filtration of `f±`.
#[derive(Clone, Debug)]
pub struct CorelationReport<T: Scalar> {
    pub laws: Vec<LawCheck>,
    pub bounds: Vec<BoundCheck<T>>,
    pub filtration: FiltrationReport<T>,
}

impl<T: Scalar> CorelationReport<T> {
    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(|l| l.holds) && self.bounds.iter().all(|b| b.holds)
    }
}

fn law_same<T: Scalar>(name: &str, a: &CoarseMap<T>, b: &CoarseMap<T>) -> LawCheck {
    let diff = a.source().points().find(|&x| a.image_of(x) != b.image_of(x));
    LawCheck {
        name: name.into(),
        holds: diff.is_none() && a.same_relation(b),
        witness: diff.map(|x| a.source().label(x).to_string()),
    }
}

/// First pair where `d(map a, map b)` compares to `d(a, b)` other than allowed.
fn first_pair<T: Scalar>(f: &CoarseMap<T>, ok: impl Fn(ExtDist<T>, ExtDist<T>) -> bool) -> Option<String> {
    let s = f.source();
    for a in s.points() {
        for b in a + 1..s.len() {
            let img = f.target().d(f.image_of(a)[0], f.image_of(b)[0]);
            if !ok(s.d(a, b), img) {
                return Some(format!("({}, {})", s.label(a), s.label(b)));
            }
        }
    }
    None
}

pub fn corelation_check<T: Scalar>(fam: &NoncoexactFamily<T>, r_max: ExtDist<T>) -> Result<CorelationReport<T>> {
    let mut laws = Vec::new();
    let mut covered = vec![false; fam.r.len()];
    for f in [&fam.f_plus, &fam.f_minus] {
        for y in f.image() {
            covered[y] = true;
        }
    }
    let missing = covered.iter().position(|c| !c);
    laws.push(LawCheck {
        name: "f+ and f- are jointly surjective".into(),
        holds: missing.is_none(),
        witness: missing.map(|y| fam.r.label(y).to_string()),
    });
    let id_x = CoarseMap::identity(fam.x.clone());
    laws.push(law_same("ρ∘f+ = 1", &fam.f_plus.then(&fam.rho)?, &id_x));
    laws.push(law_same("ρ∘f- = 1", &fam.f_minus.then(&fam.rho)?, &id_x));
    laws.push(law_same("σ∘f+ = f-", &fam.f_plus.then(&fam.sigma)?, &fam.f_minus));
    laws.push(law_same("σ∘f- = f+", &fam.f_minus.then(&fam.sigma)?, &fam.f_plus));
    laws.push(law_same("σ∘σ = 1", &fam.sigma.then(&fam.sigma)?, &CoarseMap::identity(fam.r.clone())));
    let w = first_pair(&fam.rho, |d, img| img <= d);
    laws.push(LawCheck { name: "ρ is 1-Lipschitz".into(), holds: w.is_none(), witness: w });
    let w = first_pair(&fam.sigma, |d, img| img == d);
    laws.push(LawCheck { name: "σ is an isometry".into(), holds: w.is_none(), witness: w });

    let mut bounds = Vec::new();
    let two = ExtDist::Finite(T::two());
    let gp = fam.f_plus.then(fam.g_plus())?;
    let gm = fam.f_minus.then(fam.g_minus())?;
    for (name, tf, other) in [
        ("τ∘f+ ≈ g-∘f- within 2", fam.f_plus.then(&fam.tau)?, &gm),
        ("τ∘f- ≈ g+∘f+ within 2", fam.f_minus.then(&fam.tau)?, &gp),
    ] {
        let c = closeness(&tf, other)?;
        bounds.push(BoundCheck::new(
            name,
            c.value,
            two,
            c.witness.map(|x| fam.x.label(x).to_string()),
            T::zero(),
        ));
    }
    let filtration = filtration_report(&fam.f_plus, &fam.f_minus, None, r_max)?;
    Ok(CorelationReport { laws, bounds, filtration })
}
