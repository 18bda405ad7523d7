//! Singular sets, region classification, cone points, light-like lines,
//! ideal limit points and membership in the type II extension.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catenoid::{alpha, check_index, check_m, quarter_coeff, DomainPoint, Family, SurfaceSpec};
use crate::error::{Error, Result};
use crate::lorentz::{minkowski_inner, Point4, Signature};
use crate::projection::{hollowball_project, nearest_ideal, IdealPoint, IdealTag};
use crate::trochoid::{gamma, golden_min, projection_scale};
use crate::zero_set::PeriodicGrid;

/// Residual magnitude below which a domain point is labelled singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    Singular,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::APlus => "A+",
            RegionLabel::AMinus => "A-",
            RegionLabel::BPlus => "B+",
            RegionLabel::BMinus => "B-",
            RegionLabel::Singular => "singular",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `{base + t direction}` with a null direction and base in de Sitter space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightLine {
    pub base: Point4,
    pub direction: Point4,
}

impl LightLine {
    pub fn point(&self, t: f64) -> Point4 {
        self.base + t * self.direction
    }
}

/// `r^m + 2 cos(m theta)` (I) or `cos(m theta)` (II); zero on the singular set.
pub fn singular_residual(spec: SurfaceSpec, r: f64, theta: f64) -> Result<f64> {
    check_m(spec.m)?;
    let mf = spec.m as f64;
    match spec.family {
        Family::I => {
            if r == 0.0 || !r.is_finite() {
                return Err(Error::Domain(format!("singular residual needs r != 0 (got {r})")));
            }
            Ok(r.powi(spec.m as i32) + 2.0 * (mf * theta).cos())
        }
        Family::II => {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::Domain(format!("type II needs r > 0 (got {r})")));
            }
            Ok((mf * theta).cos())
        }
        Family::AdS => Err(Error::Unsupported {
            operation: "singular residual",
            family: "AdS",
        }),
    }
}

/// Region of the type I domain containing `(r, theta)`.
///
/// With `e = sgn r`, `A` is where `e^m (r^m + 2 cos m theta) > 0` (it contains
/// a neighbourhood of `r = +-infinity`) and `B` is where it is negative.
pub fn classify_region(m: u32, r: f64, theta: f64) -> Result<RegionLabel> {
    let res = singular_residual(SurfaceSpec::new(Family::I, m)?, r, theta)?;
    if res.abs() <= SINGULAR_TOL {
        return Ok(RegionLabel::Singular);
    }
    let eps_m = if r < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    Ok(match (r > 0.0, eps_m * res > 0.0) {
        (true, true) => RegionLabel::APlus,
        (true, false) => RegionLabel::BPlus,
        (false, true) => RegionLabel::AMinus,
        (false, false) => RegionLabel::BMinus,
    })
}

/// Image of the ray `theta = a_k` under the type II catenoid:
/// `(-1)^k (0, -sin a_k, cos a_k, 0)`.
pub fn cone_point(m: u32, k: i64) -> Result<Point4> {
    check_index(m, k)?;
    let a = alpha(m, k as u32);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Point4::new(0.0, -sign * a.sin(), sign * a.cos(), 0.0))
}

/// Light-like lines attached at index `k`.
///
/// Type I: `L_k = {(t, gamma_m(a_k), -t)}`. Type II: the two lines
/// `{cone_point(k) + t (1, 0, 0, +-1)}`, i.e. `(t, -sin a_k, cos a_k, +-t)` up
/// to the sign `(-1)^k` of the cone point. With that sign the lines lie in
/// the type II extension for every `m` and `k`.
pub fn light_lines(spec: SurfaceSpec, k: i64) -> Result<Vec<LightLine>> {
    check_index(spec.m, k)?;
    let a = alpha(spec.m, k as u32);
    match spec.family {
        Family::I => {
            let g = gamma(spec.m, a);
            Ok(vec![LightLine {
                base: Point4::new(0.0, g[0], g[1], 0.0),
                direction: Point4::new(1.0, 0.0, 0.0, -1.0),
            }])
        }
        Family::II => {
            let base = cone_point(spec.m, k)?;
            Ok([1.0, -1.0]
                .iter()
                .map(|&s| LightLine {
                    base,
                    direction: Point4::new(1.0, 0.0, 0.0, s),
                })
                .collect())
        }
        Family::AdS => Err(Error::Unsupported {
            operation: "light-like lines",
            family: "AdS",
        }),
    }
}

/// `Q_{k,t} = (t, gamma_m(a_k), -t)`, the point of `L_k` at parameter `t`.
pub fn q_point(m: u32, k: i64, t: f64) -> Result<Point4> {
    Ok(light_lines(SurfaceSpec::new(Family::I, m)?, k)?[0].point(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadialEnd {
    Zero,
    Infinity,
}

/// Ways a sequence of domain points can leave every compact set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LimitScenario {
    RPlusInfinity,
    RMinusInfinity,
    /// `r -> 0` inside the given type I region.
    Region(RegionLabel),
    /// Type II: `r -> 0` or `r -> infinity` with a fixed sign of `cos(m theta)`.
    Sector { end: RadialEnd, cos_positive: bool },
}

impl LimitScenario {
    pub fn type_i() -> [LimitScenario; 6] {
        [
            LimitScenario::RPlusInfinity,
            LimitScenario::RMinusInfinity,
            LimitScenario::Region(RegionLabel::APlus),
            LimitScenario::Region(RegionLabel::AMinus),
            LimitScenario::Region(RegionLabel::BPlus),
            LimitScenario::Region(RegionLabel::BMinus),
        ]
    }

    pub fn type_ii() -> [LimitScenario; 4] {
        let s = |end, cos_positive| LimitScenario::Sector { end, cos_positive };
        [
            s(RadialEnd::Infinity, true),
            s(RadialEnd::Infinity, false),
            s(RadialEnd::Zero, true),
            s(RadialEnd::Zero, false),
        ]
    }

    pub fn for_family(family: Family) -> Vec<LimitScenario> {
        match family {
            Family::I => Self::type_i().to_vec(),
            Family::II => Self::type_ii().to_vec(),
            Family::AdS => Vec::new(),
        }
    }
}

impl fmt::Display for LimitScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitScenario::RPlusInfinity => f.write_str("r -> +inf"),
            LimitScenario::RMinusInfinity => f.write_str("r -> -inf"),
            LimitScenario::Region(l) => write!(f, "r -> 0 in {l}"),
            LimitScenario::Sector { end, cos_positive } => write!(
                f,
                "r -> {} with cos(m theta) {} 0",
                match end {
                    RadialEnd::Zero => "0",
                    RadialEnd::Infinity => "inf",
                },
                if *cos_positive { ">" } else { "<" }
            ),
        }
    }
}

/// Declared ideal limit point for a scenario.
///
/// Type II entries follow from `sgn x0 = -sgn cos(m theta)` and `x3/x0 -> +1`
/// as `r -> infinity`, `-> -1` as `r -> 0`.
pub fn limit_table(spec: SurfaceSpec, scenario: LimitScenario) -> Result<IdealPoint> {
    check_m(spec.m)?;
    let even = spec.m % 2 == 0;
    let unsupported = || Error::Unsupported {
        operation: "this limit scenario",
        family: spec.family.name(),
    };
    let tag = match (spec.family, scenario) {
        (Family::I, LimitScenario::RPlusInfinity) => IdealTag::NMinus,
        (Family::I, LimitScenario::RMinusInfinity) => {
            if even {
                IdealTag::PPlus
            } else {
                IdealTag::NMinus
            }
        }
        (Family::I, LimitScenario::Region(label)) => match (label, even) {
            (RegionLabel::APlus, _) => IdealTag::PMinus,
            (RegionLabel::BPlus, _) => IdealTag::NPlus,
            (RegionLabel::AMinus, true) => IdealTag::NPlus,
            (RegionLabel::AMinus, false) => IdealTag::PMinus,
            (RegionLabel::BMinus, true) => IdealTag::PMinus,
            (RegionLabel::BMinus, false) => IdealTag::NPlus,
            (RegionLabel::Singular, _) => return Err(unsupported()),
        },
        (Family::II, LimitScenario::Sector { end, cos_positive }) => match (end, cos_positive) {
            (RadialEnd::Infinity, true) => IdealTag::NMinus,
            (RadialEnd::Infinity, false) => IdealTag::PPlus,
            (RadialEnd::Zero, true) => IdealTag::NPlus,
            (RadialEnd::Zero, false) => IdealTag::PMinus,
        },
        _ => return Err(unsupported()),
    };
    Ok(IdealPoint::new(tag))
}

/// Tolerance for accepting a projected tail point as an ideal limit.
pub const LIMIT_TOL: f64 = 1e-3;

/// Tail `|x0|` a sequence must reach before it is treated as divergent.
pub const DIVERGENCE_FLOOR: f64 = 1e3;

/// Result of following a sequence of domain points to its end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LimitOutcome {
    /// The projected tail is within [`LIMIT_TOL`] of an ideal point.
    Ideal { point: IdealPoint, distance: f64 },
    /// `|x0|` stays bounded (or is not monotone on the tail); the last image
    /// is reported so that finite limits can be checked directly.
    Bounded { last: Point4 },
    /// `|x0|` diverges but the projected tail is not near any ideal point.
    Unresolved { nearest: IdealPoint, distance: f64 },
}

impl LimitOutcome {
    pub fn ideal(&self) -> Option<IdealPoint> {
        match self {
            LimitOutcome::Ideal { point, .. } => Some(*point),
            _ => None,
        }
    }
}

/// Follows `f(zeta_j)` through the hollowball model and reports the limit.
pub fn limit_of_sequence(spec: SurfaceSpec, seq: &[DomainPoint]) -> Result<LimitOutcome> {
    if spec.family == Family::AdS {
        return Err(Error::Unsupported {
            operation: "ideal limits",
            family: "AdS",
        });
    }
    if seq.is_empty() {
        return Err(Error::Domain("empty sequence".into()));
    }
    let images: Vec<Point4> = seq
        .iter()
        .map(|z| spec.evaluate(z.r, z.theta))
        .collect::<Result<_>>()?;
    let last = *images.last().expect("non-empty");
    let tail = &images[images.len() / 2..];
    let monotone = tail.windows(2).all(|w| w[1].t.abs() >= w[0].t.abs());
    if !monotone || last.t.abs() < DIVERGENCE_FLOOR {
        return Ok(LimitOutcome::Bounded { last });
    }
    let xi = hollowball_project(&last)?;
    let (nearest, distance) = nearest_ideal(&xi);
    Ok(if distance <= LIMIT_TOL {
        LimitOutcome::Ideal {
            point: nearest,
            distance,
        }
    } else {
        LimitOutcome::Unresolved { nearest, distance }
    })
}

/// Sequence indices used by [`scenario_sequence`]: `1, 2, 5, 10, ..., 10^6`.
pub fn sequence_indices() -> Vec<f64> {
    let mut out = Vec::new();
    let mut decade = 1.0;
    while decade <= 1e6 {
        for f in [1.0, 2.0, 5.0] {
            let j = f * decade;
            if j <= 1e6 {
                out.push(j);
            }
        }
        decade *= 10.0;
    }
    out
}

/// Knobs for a randomized divergent sequence: `r_j = c j^{+-p}` and
/// `m theta_j = phi + wobble / j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceShape {
    pub scale: f64,
    pub power: f64,
    /// Integer offset selecting which period of `cos(m theta)` is used.
    pub lobe: u32,
    /// Offset of `m theta` from the lobe centre, `|offset| < pi/2`.
    pub offset: f64,
    pub wobble: f64,
}

impl SequenceShape {
    /// Draws a shape from uniform variates in `[0, 1)`: `c in [1, 3]`,
    /// `p in [0.85, 1]`, `|offset| <= 1.2`, `|wobble| <= 0.2`.
    pub fn from_unit(m: u32, u: [f64; 5]) -> Self {
        Self {
            scale: 1.0 + 2.0 * u[0],
            power: 0.85 + 0.15 * u[1],
            lobe: ((u[2] * m as f64) as u32).min(m - 1),
            offset: 2.4 * u[3] - 1.2,
            wobble: 0.4 * u[4] - 0.2,
        }
    }
}

/// Builds a sequence realizing `scenario` for `spec`.
pub fn scenario_sequence(
    spec: SurfaceSpec,
    scenario: LimitScenario,
    shape: &SequenceShape,
) -> Result<Vec<DomainPoint>> {
    // Limit table validation is only meaningful where the table is defined.
    limit_table(spec, scenario)?;
    let m = spec.m;
    let odd = m % 2 == 1;
    // (sign of r, r -> infinity?, required sign of cos(m theta) or None)
    let (r_sign, to_infinity, cos_positive) = match scenario {
        LimitScenario::RPlusInfinity => (1.0, true, None),
        LimitScenario::RMinusInfinity => (-1.0, true, None),
        LimitScenario::Region(label) => match label {
            RegionLabel::APlus => (1.0, false, Some(true)),
            RegionLabel::BPlus => (1.0, false, Some(false)),
            RegionLabel::AMinus => (-1.0, false, Some(!odd)),
            RegionLabel::BMinus => (-1.0, false, Some(odd)),
            RegionLabel::Singular => unreachable!("rejected by limit_table"),
        },
        LimitScenario::Sector { end, cos_positive } => {
            (1.0, end == RadialEnd::Infinity, Some(cos_positive))
        }
    };
    let centre = match cos_positive {
        Some(false) => 0.5 * TAU,
        _ => 0.0,
    };
    let phi = centre + TAU * shape.lobe as f64 + shape.offset;
    Ok(sequence_indices()
        .into_iter()
        .map(|j| {
            let mag = if to_infinity {
                shape.scale * j.powf(shape.power)
            } else {
                shape.scale / j.powf(shape.power)
            };
            DomainPoint::new(r_sign * mag, (phi + shape.wobble / j) / m as f64)
        })
        .collect())
}

/// Sequence `r_j = 1/j`, `cos(m theta_j) = 4 m t / (j (m^2 - 1))` on the branch
/// around `a_k`; its type I image converges to `Q_{k,t}` on `L_k`.
pub fn q_sequence(m: u32, k: i64, t: f64) -> Result<Vec<DomainPoint>> {
    check_index(m, k)?;
    let mf = m as f64;
    let s = 4.0 * mf * t / (mf * mf - 1.0);
    Ok(sequence_indices()
        .into_iter()
        .filter(|&j| (s / j).abs() < 0.5)
        .map(|j| {
            let phi = crate::catenoid::branch_arccos(k as u32, s / j);
            DomainPoint::new(1.0 / j, phi / mf)
        })
        .collect())
}

/// Index `k` of the sector centred at `k pi / m` that contains `theta`, i.e.
/// `theta` in `(a_{k-1}, a_k)` with indices mod `2m`.
pub fn sector_index(m: u32, theta: f64) -> u32 {
    let width = TAU / (2 * m) as f64;
    let t = (crate::catenoid::normalize_angle(theta) + 0.5 * width) / width;
    (t.floor() as u32) % (2 * m)
}

/// `sgn x0` of the type II catenoid on sector `k`: `(-1)^{k+1}`.
pub fn sector_x0_sign(k: u32) -> f64 {
    if k % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Distance of `p` from the type II extension `C^II_m`:
/// `min_theta max(|(x, y) - c gamma_m(theta)|, |t^2 - z^2 - ((m^2-1)/(2m))^2 cos^2 m theta|)`.
pub fn extension_residual(spec: SurfaceSpec, p: &Point4, theta_samples: usize) -> Result<f64> {
    if spec.family != Family::II {
        return Err(Error::Unsupported {
            operation: "implicit extension membership",
            family: spec.family.name(),
        });
    }
    if theta_samples < 360 {
        return Err(Error::Config(format!(
            "extension residual needs at least 360 samples (got {theta_samples})"
        )));
    }
    let m = spec.m;
    let c = projection_scale(m)?;
    let amp = (2.0 * quarter_coeff(m)).powi(2);
    let hyper = p.t * p.t - p.z * p.z;
    let residual = |theta: f64| {
        let g = gamma(m, theta);
        let planar = (p.x - c * g[0]).hypot(p.y - c * g[1]);
        let cm = (m as f64 * theta).cos();
        planar.max((hyper - amp * cm * cm).abs())
    };
    let step = TAU / theta_samples as f64;
    let (best_j, best) = (0..theta_samples)
        .map(|j| (j, residual(step * j as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("samples > 0");
    let centre = step * best_j as f64;
    let theta = golden_min(&residual, centre - step, centre + step, 1e-14);
    Ok(best.min(residual(theta)))
}

/// A traced piece of the singular set in domain coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularCurve {
    /// `+1` for the `r > 0` sheet, `-1` for the `r < 0` sheet.
    pub sheet: i8,
    pub closed: bool,
    pub points: Vec<DomainPoint>,
}

/// Traces the zero set of [`singular_residual`] on a grid in `(log|r|, theta)`
/// with `|r|` in `[r_min, r_max]`; for type I both sheets are traced.
pub fn singular_curves(
    spec: SurfaceSpec,
    r_min: f64,
    r_max: f64,
    n_r: usize,
    n_theta: usize,
) -> Result<Vec<SingularCurve>> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) || n_r < 2 || n_theta < 2 {
        return Err(Error::Config(format!(
            "bad singular grid: r in [{r_min}, {r_max}], {n_r} x {n_theta}"
        )));
    }
    let sheets: &[i8] = match spec.family {
        Family::I => &[1, -1],
        Family::II => &[1],
        Family::AdS => {
            return Err(Error::Unsupported {
                operation: "singular curves",
                family: "AdS",
            })
        }
    };
    let (lo, hi) = (r_min.ln(), r_max.ln());
    let u: Vec<f64> = (0..n_r)
        .map(|i| lo + (hi - lo) * i as f64 / (n_r - 1) as f64)
        .collect();
    let v: Vec<f64> = (0..n_theta).map(|j| TAU * j as f64 / n_theta as f64).collect();
    let mut out = Vec::new();
    for &sheet in sheets {
        let sign = sheet as f64;
        let grid = PeriodicGrid::sample(u.clone(), v.clone(), TAU, |a, b| {
            singular_residual(spec, sign * a.exp(), b).unwrap_or(f64::NAN)
        });
        for curve in grid.zero_curves() {
            out.push(SingularCurve {
                sheet,
                closed: curve.closed,
                points: curve
                    .points
                    .iter()
                    .map(|q| DomainPoint::new(sign * q[0].exp(), q[1]))
                    .collect(),
            });
        }
    }
    Ok(out)
}

/// `(|<base, base> - 1|, |<direction, direction>|)` in the de Sitter form.
pub fn line_defect(line: &LightLine) -> (f64, f64) {
    let sig = Signature::DeSitter;
    (
        (minkowski_inner(&line.base, &line.base, sig) - 1.0).abs(),
        minkowski_inner(&line.direction, &line.direction, sig).abs(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::components_ii;
    use crate::lorentz::membership_residual;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};

    fn spec(f: Family, m: u32) -> SurfaceSpec {
        SurfaceSpec::new(f, m).unwrap()
    }

    #[test]
    fn residual_examples() {
        let r = singular_residual(spec(Family::I, 2), SQRT_2, FRAC_PI_2).unwrap();
        assert!(r.abs() < 1e-15);
        assert_eq!(singular_residual(spec(Family::I, 2), 1.0, 0.0).unwrap(), 3.0);
        for k in 0..6 {
            let r = singular_residual(spec(Family::II, 3), 0.7, alpha(3, k)).unwrap();
            assert!(r.abs() < 1e-14);
        }
        assert!(singular_residual(spec(Family::I, 2), 0.0, 0.0).is_err());
        assert!(singular_residual(spec(Family::II, 2), -1.0, 0.0).is_err());
    }

    #[test]
    fn region_examples() {
        assert_eq!(classify_region(2, 2.0, 0.0).unwrap(), RegionLabel::APlus);
        assert_eq!(classify_region(2, 0.1, FRAC_PI_2).unwrap(), RegionLabel::BPlus);
        assert_eq!(classify_region(2, -0.1, 0.0).unwrap(), RegionLabel::AMinus);
        assert_eq!(classify_region(3, -0.1, 0.0).unwrap(), RegionLabel::BMinus);
        assert_eq!(classify_region(3, -5.0, 0.0).unwrap(), RegionLabel::AMinus);
        assert_eq!(
            classify_region(2, SQRT_2, FRAC_PI_2).unwrap(),
            RegionLabel::Singular
        );
        assert!(classify_region(2, 0.0, 1.0).is_err());
    }

    #[test]
    fn cone_points() {
        let p = cone_point(2, 0).unwrap();
        assert!(p.max_abs_diff(&Point4::new(0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)) < 1e-15);
        let q = cone_point(2, 1).unwrap();
        assert!(q.max_abs_diff(&Point4::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)) < 1e-15);
        for m in 2..=6 {
            for k in 0..2 * m as i64 {
                let c = cone_point(m, k).unwrap();
                for r in [0.1, 1.0, 10.0] {
                    let f = components_ii(m, r, alpha(m, k as u32)).unwrap();
                    assert!(f.max_abs_diff(&c) < 1e-12, "m={m} k={k}");
                }
            }
        }
        assert!(cone_point(2, 4).is_err());
    }

    #[test]
    fn light_line_shapes() {
        let l = light_lines(spec(Family::I, 2), 0).unwrap();
        assert_eq!(l.len(), 1);
        assert!(l[0]
            .base
            .max_abs_diff(&Point4::new(0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0))
            < 1e-15);
        for m in 2..=5 {
            for k in 0..2 * m as i64 {
                for fam in [Family::I, Family::II] {
                    for line in light_lines(spec(fam, m), k).unwrap() {
                        let (b, d) = line_defect(&line);
                        assert!(b < 1e-12 && d < 1e-12);
                        for t in [-7.0, -1.0, 0.5, 3.0] {
                            assert!(membership_residual(&line.point(t), Signature::DeSitter) < 1e-12);
                        }
                    }
                }
                let a = alpha(m, k as u32);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let base = light_lines(spec(Family::II, m), k).unwrap()[0].base;
                let printed = Point4::new(0.0, -a.sin(), a.cos(), 0.0);
                assert!(base.max_abs_diff(&(sign * printed)) < 1e-15);
            }
        }
        assert!(light_lines(spec(Family::II, 2), 9).is_err());
    }

    #[test]
    fn limit_table_rows() {
        let s2 = spec(Family::I, 2);
        let s3 = spec(Family::I, 3);
        let tag = |s, sc| limit_table(s, sc).unwrap().tag;
        assert_eq!(tag(s2, LimitScenario::Region(RegionLabel::APlus)), IdealTag::PMinus);
        assert_eq!(tag(s3, LimitScenario::Region(RegionLabel::AMinus)), IdealTag::PMinus);
        assert_eq!(tag(s3, LimitScenario::RMinusInfinity), IdealTag::NMinus);
        assert_eq!(tag(s2, LimitScenario::RMinusInfinity), IdealTag::PPlus);
        assert!(limit_table(s2, LimitScenario::type_ii()[0]).is_err());
        assert!(limit_table(spec(Family::II, 2), LimitScenario::RPlusInfinity).is_err());
    }

    #[test]
    fn sequences_follow_the_table() {
        for m in [2, 3] {
            for fam in [Family::I, Family::II] {
                let s = spec(fam, m);
                for sc in LimitScenario::for_family(fam) {
                    let shape = SequenceShape::from_unit(m, [0.3, 0.6, 0.2, 0.7, 0.1]);
                    let seq = scenario_sequence(s, sc, &shape).unwrap();
                    let out = limit_of_sequence(s, &seq).unwrap();
                    assert_eq!(out.ideal(), Some(limit_table(s, sc).unwrap()), "{s} {sc}");
                }
            }
        }
    }

    #[test]
    fn region_sequences_stay_in_their_region() {
        for m in [2, 3] {
            for label in [RegionLabel::APlus, RegionLabel::AMinus, RegionLabel::BPlus, RegionLabel::BMinus] {
                let shape = SequenceShape::from_unit(m, [0.9, 0.1, 0.99, 0.0, 0.99]);
                let seq =
                    scenario_sequence(spec(Family::I, m), LimitScenario::Region(label), &shape).unwrap();
                for z in &seq[seq.len() / 2..] {
                    assert_eq!(classify_region(m, z.r, z.theta).unwrap(), label);
                }
            }
        }
    }

    #[test]
    fn first_sequence_example() {
        let seq: Vec<DomainPoint> = sequence_indices()
            .into_iter()
            .map(|j| DomainPoint::new(j, 0.0))
            .collect();
        let out = limit_of_sequence(spec(Family::I, 2), &seq).unwrap();
        assert_eq!(out.ideal().unwrap().tag, IdealTag::NMinus);
    }

    #[test]
    fn q_sequence_converges_on_the_line() {
        for (m, k, t) in [(2, 0, 0.7), (3, 4, -1.3), (4, 5, 0.2)] {
            let seq = q_sequence(m, k, t).unwrap();
            match limit_of_sequence(spec(Family::I, m), &seq).unwrap() {
                LimitOutcome::Bounded { last } => {
                    assert!(last.max_abs_diff(&q_point(m, k, t).unwrap()) < 1e-4);
                }
                other => panic!("expected a finite limit, got {other:?}"),
            }
        }
    }

    #[test]
    fn sectors_and_x0_sign() {
        for m in 2..=5u32 {
            for k in 0..2 * m {
                let mid = TAU * k as f64 / (2 * m) as f64;
                assert_eq!(sector_index(m, mid), k);
                for off in [-0.45, 0.0, 0.45] {
                    let th = mid + off * TAU / (2 * m) as f64;
                    let p = components_ii(m, 1.7, th).unwrap();
                    assert_eq!(p.t.signum(), sector_x0_sign(k));
                }
            }
        }
    }

    #[test]
    fn extension_residual_examples() {
        let s = spec(Family::II, 2);
        assert!(extension_residual(s, &cone_point(2, 0).unwrap(), 360).unwrap() < 1e-9);
        let p = components_ii(2, 2.3, 0.77).unwrap();
        assert!(extension_residual(s, &p, 10_000).unwrap() < 1e-6);
        assert!(extension_residual(s, &Point4::new(0.0, 0.0, 0.0, 1.0), 10_000).unwrap() > 0.1);
        for m in [2, 3] {
            let s = spec(Family::II, m);
            for k in 0..2 * m as i64 {
                for line in light_lines(s, k).unwrap() {
                    let r = extension_residual(s, &line.point(2.5), 720).unwrap();
                    assert!(r < 1e-9, "m={m} k={k}: {r}");
                }
            }
        }
        assert!(extension_residual(spec(Family::I, 2), &p, 360).is_err());
        assert!(extension_residual(s, &p, 100).is_err());
    }

    #[test]
    fn type_i_singular_set_has_m_components_per_sheet() {
        for m in 2..=5 {
            let curves = singular_curves(spec(Family::I, m), (-4f64).exp(), 4f64.exp(), 120, 720).unwrap();
            let plus = curves.iter().filter(|c| c.sheet == 1).count();
            let minus = curves.iter().filter(|c| c.sheet == -1).count();
            assert_eq!((plus, minus), (m as usize, m as usize), "m = {m}");
            for c in &curves {
                // Linear interpolation error: within a fraction of a cell.
                for z in &c.points {
                    let res = singular_residual(spec(Family::I, m), z.r, z.theta).unwrap();
                    let mf = m as f64;
                    let grad = mf * z.r.abs().powi(m as i32) + 2.0 * mf * (mf * z.theta).sin().abs();
                    assert!(res.abs() / grad < 0.02, "m={m} residual {res}");
                }
            }
        }
    }

    #[test]
    fn type_ii_singular_set_is_2m_rays() {
        let curves = singular_curves(spec(Family::II, 3), 0.1, 10.0, 20, 361).unwrap();
        assert_eq!(curves.len(), 6);
    }
}
