//! Visualization charts: the stereographic hollowball model of de Sitter
//! space and the solid torus model of anti-de Sitter space.

use std::f64::consts::SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{minkowski_inner, Point4, Signature};

/// Membership tolerance for projection inputs, relative to `max(1, |p|^2)`.
pub const PROJECTION_TOL: f64 = 1e-8;

pub const INNER_RADIUS: f64 = SQRT_2 - 1.0;
pub const OUTER_RADIUS: f64 = SQRT_2 + 1.0;

pub fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    norm3(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

fn check_on(p: &Point4, sig: Signature) -> Result<()> {
    let scale = (p.t * p.t + p.x * p.x + p.y * p.y + p.z * p.z).max(1.0);
    let residual = (minkowski_inner(p, p, sig) - sig.curvature_level()).abs();
    if !(residual <= PROJECTION_TOL * scale) {
        return Err(Error::OffSurface {
            space: sig.space_name(),
            residual,
        });
    }
    Ok(())
}

/// `(t,x,y,z) -> (x,y,z)/delta`, `delta = t + sqrt(2t^2 + 1)`.
///
/// The image lies in the open shell `sqrt2 - 1 < |xi| < sqrt2 + 1`.
pub fn hollowball_project(p: &Point4) -> Result<[f64; 3]> {
    check_on(p, Signature::DeSitter)?;
    let delta = hollowball_delta(p.t);
    Ok([p.x / delta, p.y / delta, p.z / delta])
}

/// `t + sqrt(2t^2 + 1)`, evaluated without cancellation for large negative t.
pub fn hollowball_delta(t: f64) -> f64 {
    let root = (2.0 * t * t + 1.0).sqrt();
    if t >= 0.0 {
        t + root
    } else {
        // (root + t)(root - t) = t^2 + 1
        (t * t + 1.0) / (root - t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealTag {
    PPlus,
    PMinus,
    NPlus,
    NMinus,
}

impl fmt::Display for IdealTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealTag::PPlus => "p+",
            IdealTag::PMinus => "p-",
            IdealTag::NPlus => "n+",
            IdealTag::NMinus => "n-",
        })
    }
}

/// One of the four limit points on the ideal boundary: `p+-` lie on the
/// inner sphere (future boundary), `n+-` on the outer sphere (past boundary).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealPoint {
    pub tag: IdealTag,
    pub coords: [f64; 3],
}

impl IdealPoint {
    pub fn new(tag: IdealTag) -> Self {
        let z = match tag {
            IdealTag::PPlus => INNER_RADIUS,
            IdealTag::PMinus => -INNER_RADIUS,
            IdealTag::NPlus => OUTER_RADIUS,
            IdealTag::NMinus => -OUTER_RADIUS,
        };
        Self {
            tag,
            coords: [0.0, 0.0, z],
        }
    }

    /// True for `p+-`, which lie on the future ideal boundary.
    pub fn on_future_boundary(&self) -> bool {
        matches!(self.tag, IdealTag::PPlus | IdealTag::PMinus)
    }
}

impl fmt::Display for IdealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tag.fmt(f)
    }
}

pub fn ideal_points() -> [IdealPoint; 4] {
    [
        IdealPoint::new(IdealTag::PPlus),
        IdealPoint::new(IdealTag::PMinus),
        IdealPoint::new(IdealTag::NPlus),
        IdealPoint::new(IdealTag::NMinus),
    ]
}

/// Nearest ideal point and its distance.
pub fn nearest_ideal(xi: &[f64; 3]) -> (IdealPoint, f64) {
    ideal_points()
        .into_iter()
        .map(|q| (q, dist3(&q.coords, xi)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("four ideal points")
}

/// `(t,x,y,z) -> (1/rho) ((1 + t/rho) x, (1 + t/rho) y, z)`, `rho = |(x,y)|`.
///
/// The image is the open solid torus swept by the unit disk centred at
/// `(1,0,0)` rotating about the third axis.
pub fn solid_torus_project(p: &Point4) -> Result<[f64; 3]> {
    check_on(p, Signature::AntiDeSitter)?;
    let rho = p.x.hypot(p.y);
    if !(rho > 1e-12) {
        return Err(Error::Domain(format!(
            "solid torus projection needs rho > 0 (rho = {rho:e})"
        )));
    }
    let k = 1.0 + p.t / rho;
    Ok([k * p.x / rho, k * p.y / rho, p.z / rho])
}

/// `(sqrt(u^2 + v^2) - 1)^2 + w^2`; below 1 inside the solid torus.
pub fn torus_level(v: &[f64; 3]) -> f64 {
    (v[0].hypot(v[1]) - 1.0).powi(2) + v[2] * v[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hollowball_examples() {
        let a = hollowball_project(&Point4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(a, [1.0, 0.0, 0.0]);
        let b = hollowball_project(&Point4::new(1.0, 0.0, 0.0, SQRT_2)).unwrap();
        assert!(dist3(&b, &[0.0, 0.0, SQRT_2 / (1.0 + 3f64.sqrt())]) < 1e-15);
        assert!(hollowball_project(&Point4::new(1.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn delta_positive_and_stable() {
        for t in [-1e12, -1e3, -1.0, 0.0, 0.5, 1e6] {
            let d = hollowball_delta(t);
            assert!(d > 0.0);
            let naive = t + (2.0 * t * t + 1.0).sqrt();
            assert!((d - naive).abs() <= 1e-12 * naive.abs().max(1.0));
        }
    }

    #[test]
    fn ideal_constants() {
        let [pp, pm, np, nm] = ideal_points();
        assert_eq!(pp.coords, [0.0, 0.0, SQRT_2 - 1.0]);
        assert_eq!(nm.coords, [0.0, 0.0, -(SQRT_2 + 1.0)]);
        assert!((norm3(&pm.coords) - INNER_RADIUS).abs() < 1e-15);
        assert!((norm3(&np.coords) - OUTER_RADIUS).abs() < 1e-15);
        assert!(pp.on_future_boundary() && !nm.on_future_boundary());
    }

    #[test]
    fn solid_torus_examples() {
        let a = solid_torus_project(&Point4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(a, [1.0, 0.0, 0.0]);
        let b = solid_torus_project(&Point4::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        assert_eq!(b, [0.0, 1.0, 0.0]);
        assert!(solid_torus_project(&Point4::new(1.0, 0.0, 0.0, 0.0)).is_err());
        assert!(solid_torus_project(&Point4::new(0.0, 1.0, 0.0, 0.5)).is_err());
    }
}
