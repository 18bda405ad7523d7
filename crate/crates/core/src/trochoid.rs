//! The limit curve `gamma_m` of the type I catenoid and its description
//! as a hypo-trochoid.
//!
//! Convention for roulettes: a circle of radius `rolling` rolls inside a
//! fixed circle of radius `fixed`, carrying a pen at distance `pen` from its
//! centre:
//!
//! ```text
//! x(s) = (fixed - rolling) cos s + pen cos(((fixed - rolling)/rolling) s)
//! y(s) = (fixed - rolling) sin s - pen sin(((fixed - rolling)/rolling) s)
//! ```
//!
//! The parameter triple `(r_c, r_m, d)` of `gamma_m` reproduces its image with
//! `fixed = r_c` and `rolling = r_m`; [`fit_hypotrochoid`] recovers that
//! assignment by comparing images.

use std::collections::HashMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catenoid::{check_m, type_ii_planar};
use crate::error::{Error, Result};

/// `gamma_m(theta) = lim_{r -> 0} (x1, x2)` of the type I catenoid.
pub fn gamma(m: u32, theta: f64) -> [f64; 2] {
    let mf = m as f64;
    let a = (mf - 1.0).powi(2);
    let b = (mf + 1.0).powi(2);
    let (sp, cp) = ((mf + 1.0) * theta).sin_cos();
    let (sq, cq) = ((mf - 1.0) * theta).sin_cos();
    [
        (a * cp + b * cq) / (4.0 * mf),
        (a * sp - b * sq) / (4.0 * mf),
    ]
}

/// First and second derivatives of `gamma_m`, from the two-frequency form.
pub fn gamma_derivatives(m: u32, theta: f64) -> ([f64; 2], [f64; 2]) {
    let mf = m as f64;
    let a = (mf - 1.0).powi(2) / (4.0 * mf);
    let b = (mf + 1.0).powi(2) / (4.0 * mf);
    let ep = Complex64::from_polar(1.0, (mf + 1.0) * theta);
    let eq = Complex64::from_polar(1.0, -(mf - 1.0) * theta);
    let i = Complex64::i();
    let d1 = i * (mf + 1.0) * a * ep - i * (mf - 1.0) * b * eq;
    let d2 = -(mf + 1.0).powi(2) * a * ep - (mf - 1.0).powi(2) * b * eq;
    ([d1.re, d1.im], [d2.re, d2.im])
}

/// Signed curvature of `gamma_m` at `theta`.
pub fn signed_curvature(m: u32, theta: f64) -> Result<f64> {
    check_m(m)?;
    let (d1, d2) = gamma_derivatives(m, theta);
    let speed = d1[0].hypot(d1[1]);
    if !(speed > 1e-12) {
        return Err(Error::SingularPoint(format!(
            "gamma_{m} has vanishing speed at theta = {theta}"
        )));
    }
    Ok((d1[0] * d2[1] - d1[1] * d2[0]) / speed.powi(3))
}

/// Number of sign changes of the curvature over a closed `samples`-point grid.
///
/// The curvature of `gamma_m` vanishes at isolated angles; samples with
/// `|kappa|` below `1e-9 * max |kappa|` carry no sign and are skipped.
pub fn curvature_sign_changes(m: u32, samples: usize) -> Result<usize> {
    let ks: Vec<f64> = (0..samples)
        .map(|j| signed_curvature(m, TAU * j as f64 / samples as f64))
        .collect::<Result<_>>()?;
    let floor = 1e-9 * ks.iter().fold(0.0_f64, |acc, k| acc.max(k.abs()));
    let signs: Vec<f64> = ks
        .iter()
        .filter(|k| k.abs() > floor)
        .map(|k| k.signum())
        .collect();
    let n = signs.len();
    Ok((0..n).filter(|&j| signs[j] != signs[(j + 1) % n]).count())
}

/// Smallest period of the image of `gamma_m`: `pi` for odd `m`, `2 pi` for
/// even `m`.
pub fn image_period(m: u32) -> f64 {
    if m % 2 == 1 {
        0.5 * TAU
    } else {
        TAU
    }
}

/// Total turning of the tangent of `gamma_m` over `[0, span)`, in turns.
pub fn turning_number(m: u32, span: f64, samples: usize) -> Result<f64> {
    check_m(m)?;
    let angle = |j: usize| {
        let (d1, _) = gamma_derivatives(m, span * j as f64 / samples as f64);
        d1[1].atan2(d1[0])
    };
    let mut total = 0.0;
    let mut prev = angle(0);
    for j in 1..=samples {
        let a = angle(j);
        let mut d = a - prev;
        while d > 0.5 * TAU {
            d -= TAU;
        }
        while d < -0.5 * TAU {
            d += TAU;
        }
        total += d;
        prev = a;
    }
    Ok(total / TAU)
}

/// Convexity of the image of `gamma_m`: one-signed curvature and a single
/// tangent turn over one traversal of the image.
pub fn is_convex(m: u32, samples: usize) -> Result<bool> {
    let turns = turning_number(m, image_period(m), samples)?;
    Ok(curvature_sign_changes(m, samples)? == 0 && (turns.abs() - 1.0).abs() < 1e-6)
}

/// `(r_c, r_m, d)`: rolling-circle radius, rolling radius parameter and pen
/// offset attached to `gamma_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrochoidParams {
    pub r_c: f64,
    pub r_m: f64,
    pub d: f64,
}

pub fn trochoid_params(m: u32) -> TrochoidParams {
    let mf = m as f64;
    TrochoidParams {
        r_c: (mf - 1.0) / 2.0,
        r_m: (mf * mf - 1.0) / (4.0 * mf),
        d: (mf + 1.0).powi(2) / (4.0 * mf),
    }
}

/// Hypo-trochoid for `params` with pen offset `d`, using the resolved
/// assignment `fixed = r_c`, `rolling = r_m`.
pub fn hypotrochoid(params: &TrochoidParams, d: f64, s: f64) -> [f64; 2] {
    Roulette {
        fixed: params.r_c,
        rolling: params.r_m,
        pen: d,
        mirrored: false,
    }
    .point(s)
}

/// A concrete hypo-trochoid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Roulette {
    pub fixed: f64,
    pub rolling: f64,
    pub pen: f64,
    /// Flips the sign of the pen term in `y`.
    pub mirrored: bool,
}

impl Roulette {
    pub fn point(&self, s: f64) -> [f64; 2] {
        let body = self.fixed - self.rolling;
        let w = body / self.rolling * s;
        let sign = if self.mirrored { 1.0 } else { -1.0 };
        [
            body * s.cos() + self.pen * w.cos(),
            body * s.sin() + sign * self.pen * w.sin(),
        ]
    }

    /// Parameter length after which the curve closes (at most 1000 turns).
    pub fn period(&self) -> f64 {
        let q = (self.fixed - self.rolling) / self.rolling;
        (1..=1000u32)
            .find(|&n| {
                let v = n as f64 * q;
                (v - v.round()).abs() < 1e-9
            })
            .map_or(1000.0 * TAU, |n| n as f64 * TAU)
    }

    pub fn samples(&self, n: usize) -> Vec<[f64; 2]> {
        let period = self.period();
        (0..n)
            .map(|j| self.point(period * j as f64 / n as f64))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadiusAssignment {
    /// `r_c` is the fixed circle, `r_m` the rolling one.
    FixedRc,
    /// `r_m` is the fixed circle, `r_c` the rolling one.
    FixedRm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypotrochoidFit {
    pub assignment: RadiusAssignment,
    pub roulette: Roulette,
    /// Symmetric Hausdorff distance between the images.
    pub hausdorff: f64,
}

/// Brute-force search over the radius assignments and pen orientation for
/// the roulette whose image matches `gamma_m`.
pub fn fit_hypotrochoid(m: u32, samples: usize) -> Result<HypotrochoidFit> {
    check_m(m)?;
    let p = trochoid_params(m);
    let mut best: Option<HypotrochoidFit> = None;
    let coarse = samples.clamp(64, 2000);
    for assignment in [RadiusAssignment::FixedRc, RadiusAssignment::FixedRm] {
        let (fixed, rolling) = match assignment {
            RadiusAssignment::FixedRc => (p.r_c, p.r_m),
            RadiusAssignment::FixedRm => (p.r_m, p.r_c),
        };
        for mirrored in [false, true] {
            let roulette = Roulette {
                fixed,
                rolling,
                pen: p.d,
                mirrored,
            };
            let h = hausdorff_to_gamma(&roulette, m, coarse);
            if best.is_none_or(|b| h < b.hausdorff) {
                best = Some(HypotrochoidFit {
                    assignment,
                    roulette,
                    hausdorff: h,
                });
            }
        }
    }
    let mut fit = best.expect("at least one candidate");
    fit.hausdorff = hausdorff_to_gamma(&fit.roulette, m, samples);
    Ok(fit)
}

/// Symmetric Hausdorff distance between the image of `gamma_m` and the image
/// of `roulette`, each side sampled with `samples` points and measured
/// against the other curve with a local continuous refinement.
pub fn hausdorff_to_gamma(roulette: &Roulette, m: u32, samples: usize) -> f64 {
    let gamma_curve = SampledCurve::new(|t| gamma(m, t), TAU, samples);
    let period = roulette.period();
    let roulette_curve = SampledCurve::new(|s| roulette.point(s), period, samples);
    let a = gamma_curve
        .points
        .iter()
        .map(|p| roulette_curve.distance_to(p, |s| roulette.point(s)))
        .fold(0.0, f64::max);
    let b = roulette_curve
        .points
        .iter()
        .map(|p| gamma_curve.distance_to(p, |t| gamma(m, t)))
        .fold(0.0, f64::max);
    a.max(b)
}

/// Closed parametric curve sampled uniformly, with a bucket index for
/// nearest-sample queries.
struct SampledCurve {
    points: Vec<[f64; 2]>,
    step: f64,
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SampledCurve {
    fn new(curve: impl Fn(f64) -> [f64; 2], period: f64, n: usize) -> Self {
        let step = period / n as f64;
        let points: Vec<[f64; 2]> = (0..n).map(|j| curve(step * j as f64)).collect();
        let max_gap = (0..n)
            .map(|j| {
                let (a, b) = (points[j], points[(j + 1) % n]);
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .fold(0.0, f64::max);
        let cell = (2.0 * max_gap).max(1e-9);
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (j, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(j);
        }
        Self {
            points,
            step,
            cell,
            buckets,
        }
    }

    fn key(p: &[f64; 2], cell: f64) -> (i64, i64) {
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    fn nearest_sample(&self, p: &[f64; 2]) -> usize {
        let (kx, ky) = Self::key(p, self.cell);
        let mut best = (usize::MAX, f64::INFINITY);
        let mut ring = 0i64;
        loop {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                        for &j in ids {
                            let q = self.points[j];
                            let d = (q[0] - p[0]).hypot(q[1] - p[1]);
                            if d < best.1 {
                                best = (j, d);
                            }
                        }
                    }
                }
            }
            // Everything outside the searched square is at least ring*cell away.
            if best.0 != usize::MAX && best.1 <= ring as f64 * self.cell {
                return best.0;
            }
            ring += 1;
            if ring > 1_000_000 {
                return best.0;
            }
        }
    }

    /// Distance from `p` to the continuous curve, refining around the
    /// nearest sample by golden-section search.
    fn distance_to(&self, p: &[f64; 2], curve: impl Fn(f64) -> [f64; 2]) -> f64 {
        let j = self.nearest_sample(p);
        let centre = self.step * j as f64;
        let dist = |t: f64| {
            let q = curve(t);
            (q[0] - p[0]).hypot(q[1] - p[1])
        };
        let t = golden_min(&dist, centre - self.step, centre + self.step, 1e-14);
        dist(t).min(dist(centre))
    }
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub(crate) fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Least-squares scale `c` in `(x1, x2) = c * gamma_m` for the type II
/// catenoid, with the worst pointwise residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFit {
    pub c: f64,
    pub max_residual: f64,
}

pub fn fit_projection_scale(m: u32, samples: usize) -> Result<ScaleFit> {
    check_m(m)?;
    let thetas: Vec<f64> = (0..samples)
        .map(|j| TAU * (j as f64 + 0.5) / samples as f64)
        .collect();
    let (mut num, mut den) = (0.0, 0.0);
    for &t in &thetas {
        let g = gamma(m, t);
        let (x1, x2) = type_ii_planar(m, t);
        num += x1 * g[0] + x2 * g[1];
        den += g[0] * g[0] + g[1] * g[1];
    }
    let c = num / den;
    let max_residual = thetas
        .iter()
        .map(|&t| {
            let g = gamma(m, t);
            let (x1, x2) = type_ii_planar(m, t);
            (x1 - c * g[0]).hypot(x2 - c * g[1])
        })
        .fold(0.0, f64::max);
    Ok(ScaleFit { c, max_residual })
}

/// The fitted scale rounded to the nearest integer once the fit is exact.
/// Falls back to the raw least-squares value otherwise.
pub fn projection_scale(m: u32) -> Result<f64> {
    let fit = fit_projection_scale(m, 64)?;
    if fit.max_residual < 1e-10 && (fit.c - fit.c.round()).abs() < 1e-10 {
        Ok(fit.c.round())
    } else {
        Ok(fit.c)
    }
}

/// Sign in `gamma(theta + pi) = (-1)^{m+1} gamma(theta)`.
pub fn half_turn_sign(m: u32) -> f64 {
    if m % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}
