//! Finite-difference fundamental forms, unit normals and mean curvature
//! for surfaces in de Sitter and anti-de Sitter space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catenoid::{Family, SurfaceSpec};
use crate::error::{Error, Result};
use crate::lorentz::{minkowski_inner, Point4, Signature};
use crate::singular::singular_residual;

/// Default finite-difference step: near `eps^{1/4}`, which balances
/// truncation and rounding in the second differences.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Regularity floor on `|det I|`.
pub const DET_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    /// Mean curvature, oriented so that `h >= 0`.
    pub h: f64,
    pub det_i: f64,
    pub normal: Point4,
    /// `<normal, normal>`: `-1` for a timelike normal, `+1` for a spacelike one.
    pub normal_norm: f64,
    /// Largest of `|<normal, f>|`, `|<normal, f_u>|`, `|<normal, f_v>|`.
    pub orthogonality: f64,
}

struct Stencil {
    f: Point4,
    fu: Point4,
    fv: Point4,
    fuu: Point4,
    fuv: Point4,
    fvv: Point4,
}

fn check_step(h: f64) -> Result<()> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::Config(format!("finite-difference step {h:e} outside [1e-7, 1e-3]")));
    }
    Ok(())
}

fn first_derivatives<S>(surface: &S, u: f64, v: f64, h: f64) -> Result<(Point4, Point4)>
where
    S: Fn(f64, f64) -> Result<Point4>,
{
    let fu = (1.0 / (2.0 * h)) * (surface(u + h, v)? - surface(u - h, v)?);
    let fv = (1.0 / (2.0 * h)) * (surface(u, v + h)? - surface(u, v - h)?);
    Ok((fu, fv))
}

fn stencil<S>(surface: &S, u: f64, v: f64, h: f64) -> Result<Stencil>
where
    S: Fn(f64, f64) -> Result<Point4>,
{
    let f = surface(u, v)?;
    let (pu, mu) = (surface(u + h, v)?, surface(u - h, v)?);
    let (pv, mv) = (surface(u, v + h)?, surface(u, v - h)?);
    let pp = surface(u + h, v + h)?;
    let pm = surface(u + h, v - h)?;
    let mp = surface(u - h, v + h)?;
    let mm = surface(u - h, v - h)?;
    let h2 = h * h;
    Ok(Stencil {
        f,
        fu: (1.0 / (2.0 * h)) * (pu - mu),
        fv: (1.0 / (2.0 * h)) * (pv - mv),
        fuu: (1.0 / h2) * (pu - 2.0 * f + mu),
        fvv: (1.0 / h2) * (pv - 2.0 * f + mv),
        fuv: (1.0 / (4.0 * h2)) * (pp - pm - mp + mm),
    })
}

/// Euclidean 4D cross product: orthogonal (Euclidean) to `a`, `b`, `c`.
fn cross4(a: [f64; 4], b: [f64; 4], c: [f64; 4]) -> [f64; 4] {
    let det3 = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2)]
}

fn lower(p: &Point4, sig: Signature) -> [f64; 4] {
    let d = sig.diagonal();
    let a = p.to_array();
    [d[0] * a[0], d[1] * a[1], d[2] * a[2], d[3] * a[3]]
}

/// First and second fundamental forms and mean curvature at `(u, v)`.
///
/// The normal is the Lorentz-orthogonal complement of `f, f_u, f_v`; second
/// derivatives are projected off `f` before pairing with it.
pub fn fundamental_forms<S>(surface: &S, sig: Signature, u: f64, v: f64, h: f64) -> Result<FundamentalForms>
where
    S: Fn(f64, f64) -> Result<Point4>,
{
    check_step(h)?;
    let st = stencil(surface, u, v, h)?;
    let ip = |a: &Point4, b: &Point4| minkowski_inner(a, b, sig);
    let (e, f, g) = (ip(&st.fu, &st.fu), ip(&st.fu, &st.fv), ip(&st.fv, &st.fv));
    let det_i = e * g - f * f;
    if !(det_i.abs() > DET_FLOOR) {
        return Err(Error::SingularPoint(format!(
            "|det I| = {:e} at ({u}, {v}) is below {DET_FLOOR:e}",
            det_i.abs()
        )));
    }
    let raw = Point4::from_array(cross4(lower(&st.f, sig), lower(&st.fu, sig), lower(&st.fv, sig)));
    let nn = ip(&raw, &raw);
    let scale = raw.euclidean_norm();
    if !(nn.abs() > 1e-12 * scale * scale) || !(scale > 0.0) {
        return Err(Error::SingularPoint(format!(
            "normal system is rank deficient at ({u}, {v})"
        )));
    }
    let mut normal = (1.0 / nn.abs().sqrt()) * raw;
    let kappa = sig.curvature_level();
    let project = |x: &Point4| *x - (ip(x, &st.f) / kappa) * st.f;
    let (mut l, mut m, mut n) = (
        ip(&project(&st.fuu), &normal),
        ip(&project(&st.fuv), &normal),
        ip(&project(&st.fvv), &normal),
    );
    let mut mean = (g * l - 2.0 * f * m + e * n) / (2.0 * det_i);
    if mean < 0.0 {
        normal = -normal;
        l = -l;
        m = -m;
        n = -n;
        mean = -mean;
    }
    let orthogonality = [st.f, st.fu, st.fv]
        .iter()
        .map(|x| ip(&normal, x).abs())
        .fold(0.0, f64::max);
    Ok(FundamentalForms {
        e,
        f,
        g,
        l,
        m,
        n,
        h: mean,
        det_i,
        normal,
        normal_norm: ip(&normal, &normal),
        orthogonality,
    })
}

/// `E G - F^2` from central first differences; no regularity check.
pub fn metric_determinant<S>(surface: &S, sig: Signature, u: f64, v: f64, h: f64) -> Result<f64>
where
    S: Fn(f64, f64) -> Result<Point4>,
{
    let (fu, fv) = first_derivatives(surface, u, v, h)?;
    let ip = |a: &Point4, b: &Point4| minkowski_inner(a, b, sig);
    Ok(ip(&fu, &fu) * ip(&fv, &fv) - ip(&fu, &fv).powi(2))
}

/// Mean curvature at steps `h`, `h/2`, `h/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RichardsonCheck {
    pub values: [f64; 3],
    /// `|H(h) - H(h/2)| <= 10 |H(h/2) - H(h/4)| + 1e-9`.
    pub consistent: bool,
}

pub fn richardson_check<S>(surface: &S, sig: Signature, u: f64, v: f64, h: f64) -> Result<RichardsonCheck>
where
    S: Fn(f64, f64) -> Result<Point4>,
{
    let mut values = [0.0; 3];
    for (i, step) in [h, 0.5 * h, 0.25 * h].into_iter().enumerate() {
        values[i] = fundamental_forms(surface, sig, u, v, step)?.h;
    }
    let consistent =
        (values[0] - values[1]).abs() <= 10.0 * (values[1] - values[2]).abs() + 1e-9;
    Ok(RichardsonCheck { values, consistent })
}

/// Base step for [`extrapolated_mean_curvature`].
pub const EXTRAPOLATION_STEP: f64 = 1e-3;

/// `(4 H(h/2) - H(h)) / 3`: cancels the `h^2` term, so a larger step can be
/// used and rounding stays small even where the metric is nearly degenerate.
pub fn extrapolated_mean_curvature<S>(surface: &S, sig: Signature, u: f64, v: f64, h: f64) -> Result<f64>
where
    S: Fn(f64, f64) -> Result<Point4>,
{
    let coarse = fundamental_forms(surface, sig, u, v, h)?.h;
    let fine = fundamental_forms(surface, sig, u, v, 0.5 * h)?.h;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// The surface as a map of the coordinates used for differentiation:
/// `(log|r|, theta)` on the sheet `sgn r = sheet` for types I and II, and
/// `(s, theta)` for the AdS family.
pub fn surface_chart(spec: SurfaceSpec, sheet: f64) -> impl Fn(f64, f64) -> Result<Point4> + Sync {
    move |u: f64, v: f64| match spec.family {
        Family::AdS => spec.evaluate(u, v),
        _ => spec.evaluate(sheet.signum() * u.exp(), v),
    }
}

/// Agreement between the metric degeneracy and the singular residual on a
/// grid in `(log r, theta)`.
///
/// `det I^{1/4} / |residual|` is confined to `[ratio_min, ratio_max]` on a
/// calibration grid; with residual threshold `delta` the matched floor is
/// `(ratio_min delta)^4`. Points whose residual lies inside the ambiguity band
/// `(delta ratio_min / ratio_max, delta]` are counted separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyScan {
    pub spec: SurfaceSpec,
    pub grid: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub residual_threshold: f64,
    pub det_floor: f64,
    pub agreements: usize,
    pub disagreements: usize,
    pub ambiguous: usize,
}

impl DegeneracyScan {
    pub fn passed(&self) -> bool {
        self.disagreements == 0 && self.ratio_min > 0.0 && self.ratio_max.is_finite()
    }
}

const SCAN_R: (f64, f64) = (0.3, 1.8);
const SCAN_THETA_OFFSET: f64 = 1e-3;

fn scan_points(n: usize, theta_offset: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = (SCAN_R.0.ln(), SCAN_R.1.ln());
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        let u = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let theta = theta_offset + std::f64::consts::TAU * j as f64 / n as f64;
            pts.push((u, theta));
        }
    }
    pts
}

fn det_and_residual(spec: SurfaceSpec, pts: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let chart = surface_chart(spec, 1.0);
    pts.par_iter()
        .map(|&(u, theta)| {
            let d = metric_determinant(&chart, spec.family.signature(), u, theta, 1e-6)?;
            let res = singular_residual(spec, u.exp(), theta)?;
            Ok((d, res))
        })
        .collect()
}

/// Runs the matched-threshold comparison on an `n x n` grid, calibrating
/// the ratio band on an independent `n/4 x n/4` grid.
pub fn degeneracy_scan(spec: SurfaceSpec, n: usize, residual_threshold: f64) -> Result<DegeneracyScan> {
    if spec.family == Family::AdS {
        return Err(Error::Unsupported {
            operation: "degeneracy scan",
            family: "AdS",
        });
    }
    if n < 8 {
        return Err(Error::Config(format!("degeneracy grid too small: {n}")));
    }
    let calib = det_and_residual(spec, &scan_points(n / 4, 0.37 * SCAN_THETA_OFFSET + 0.01))?;
    let (mut ratio_min, mut ratio_max) = (f64::INFINITY, 0.0_f64);
    for &(d, res) in &calib {
        if res.abs() > 1e-3 {
            let q = d.max(0.0).powf(0.25) / res.abs();
            ratio_min = ratio_min.min(q);
            ratio_max = ratio_max.max(q);
        }
    }
    let det_floor = (ratio_min * residual_threshold).powi(4);
    let band_low = residual_threshold * ratio_min / ratio_max;
    let mut scan = DegeneracyScan {
        spec,
        grid: n,
        ratio_min,
        ratio_max,
        residual_threshold,
        det_floor,
        agreements: 0,
        disagreements: 0,
        ambiguous: 0,
    };
    for (d, res) in det_and_residual(spec, &scan_points(n, SCAN_THETA_OFFSET))? {
        let by_residual = res.abs() > residual_threshold;
        let by_metric = d > det_floor;
        if by_residual == by_metric {
            scan.agreements += 1;
        } else if res.abs() > band_low && res.abs() <= residual_threshold {
            scan.ambiguous += 1;
        } else {
            scan.disagreements += 1;
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::alpha;

    fn spec(f: Family, m: u32) -> SurfaceSpec {
        SurfaceSpec::new(f, m).unwrap()
    }

    fn polar(spec: SurfaceSpec) -> impl Fn(f64, f64) -> Result<Point4> {
        move |r, t| spec.evaluate(r, t)
    }

    #[test]
    fn cross4_is_orthogonal() {
        let a = [1.0, 2.0, -1.0, 0.5];
        let b = [0.3, -1.0, 2.0, 1.0];
        let c = [2.0, 0.0, 1.0, -3.0];
        let n = cross4(a, b, c);
        for v in [a, b, c] {
            let dot: f64 = (0..4).map(|i| n[i] * v[i]).sum();
            assert!(dot.abs() < 1e-12);
        }
    }

    #[test]
    fn mean_curvature_examples() {
        let ff = fundamental_forms(&polar(spec(Family::II, 2)), Signature::DeSitter, 1.3, 0.2, DEFAULT_STEP)
            .unwrap();
        assert!((ff.h - 1.0).abs() < 1e-5, "H = {}", ff.h);
        assert!(ff.det_i > 0.0);
        assert!((ff.normal_norm + 1.0).abs() < 1e-12);

        let ff = fundamental_forms(&polar(spec(Family::I, 3)), Signature::DeSitter, 0.5, 0.1, DEFAULT_STEP)
            .unwrap();
        assert!((ff.h - 1.0).abs() < 1e-5, "H = {}", ff.h);

        let ff = fundamental_forms(&polar(spec(Family::AdS, 2)), Signature::AntiDeSitter, 0.3, 0.2, DEFAULT_STEP)
            .unwrap();
        assert!((ff.h.abs() - 1.0).abs() < 1e-4, "H = {}", ff.h);
        assert!(ff.det_i < 0.0);
        assert!((ff.normal_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_is_orthogonal() {
        let chart = surface_chart(spec(Family::I, 2), -1.0);
        let ff = fundamental_forms(&chart, Signature::DeSitter, 0.2, 1.1, DEFAULT_STEP).unwrap();
        assert!(ff.orthogonality < 1e-8);
        assert!((ff.h - 1.0).abs() < 1e-4);
    }

    #[test]
    fn step_and_singularity_errors() {
        let s = polar(spec(Family::II, 2));
        assert!(fundamental_forms(&s, Signature::DeSitter, 1.0, 0.0, 1e-2).is_err());
        let on_ray = fundamental_forms(&s, Signature::DeSitter, 1.0, alpha(2, 0), DEFAULT_STEP);
        assert!(matches!(on_ray, Err(Error::SingularPoint(_))));
    }

    #[test]
    fn metric_determinant_examples() {
        let s = polar(spec(Family::II, 2));
        assert!(metric_determinant(&s, Signature::DeSitter, 1.0, 0.0, DEFAULT_STEP).unwrap() > 0.01);
        // Monotone until the value reaches rounding level.
        let mut prev = f64::INFINITY;
        for e in 1..=6 {
            let theta = alpha(2, 0) - 10f64.powi(-e);
            let d = metric_determinant(&s, Signature::DeSitter, 1.0, theta, 1e-6).unwrap();
            if e <= 4 {
                assert!(d < prev, "e={e}");
            }
            assert!(d.abs() <= 1e-8 || e <= 2);
            prev = d;
        }
        // Type I along the ray theta = pi/2 towards r = sqrt 2.
        let s = polar(spec(Family::I, 2));
        let mut prev = f64::INFINITY;
        for e in 1..=5 {
            let r = 2f64.sqrt() - 10f64.powi(-e);
            let d = metric_determinant(&s, Signature::DeSitter, r, std::f64::consts::FRAC_PI_2, 1e-7)
                .unwrap();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn extrapolation_near_the_singular_set() {
        // Type I, m = 4, where r^4 + 2 cos 4 theta = 0.25.
        let theta = ((0.25 - 1.0) / 2.0_f64).acos() / 4.0;
        let chart = surface_chart(spec(Family::I, 4), 1.0);
        let plain = fundamental_forms(&chart, Signature::DeSitter, 0.0, theta, DEFAULT_STEP).unwrap().h;
        let rich = extrapolated_mean_curvature(&chart, Signature::DeSitter, 0.0, theta, EXTRAPOLATION_STEP).unwrap();
        assert!((rich - 1.0).abs() < 1e-4, "{rich}");
        assert!((rich - 1.0).abs() <= (plain - 1.0).abs());
    }

    #[test]
    fn richardson_on_regular_points() {
        let chart = surface_chart(spec(Family::II, 3), 1.0);
        let rc = richardson_check(&chart, Signature::DeSitter, 0.4, 0.3, 1e-3).unwrap();
        assert!(rc.consistent, "{rc:?}");
    }

    #[test]
    fn degeneracy_scan_small() {
        for f in [Family::I, Family::II] {
            let scan = degeneracy_scan(spec(f, 2), 40, 0.1).unwrap();
            assert!(scan.passed(), "{scan:?}");
            assert!(scan.ratio_max / scan.ratio_min < 2.0);
        }
    }
}
