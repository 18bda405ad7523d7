//! The exceptional catenoids of type I and II, their closed-form
//! components, the blow-up chart across `r = 0` and the anti-de Sitter
//! companion surface.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::compensated::DdComplex;
use crate::lorentz::{Mat2C, Point4, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Secondary Gauss map `z^m + 1`.
    I,
    /// Secondary Gauss map `(z^m - 1)/(z^m + 1)`.
    II,
    /// Timelike companion of type II in anti-de Sitter space.
    AdS,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::I => "I",
            Family::II => "II",
            Family::AdS => "AdS",
        }
    }

    pub fn signature(self) -> Signature {
        match self {
            Family::I | Family::II => Signature::DeSitter,
            Family::AdS => Signature::AntiDeSitter,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Family::I),
            "ii" | "2" => Ok(Family::II),
            "ads" => Ok(Family::AdS),
            other => Err(Error::Config(format!("unknown family `{other}`"))),
        }
    }
}

/// One surface: a family together with its integer parameter `m >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub family: Family,
    pub m: u32,
}

impl SurfaceSpec {
    pub fn new(family: Family, m: u32) -> Result<Self> {
        check_m(m)?;
        Ok(Self { family, m })
    }

    /// Evaluates the surface at domain coordinates `(r, theta)`. For the AdS
    /// family `r` is the periodic parameter `s`.
    pub fn evaluate(&self, r: f64, theta: f64) -> Result<Point4> {
        match self.family {
            Family::I => components_i(self.m, r, theta),
            Family::II => components_ii(self.m, r, theta),
            Family::AdS => ads_surface(self.m, r, theta),
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.m)
    }
}

/// Polar domain coordinates with `theta` normalized to `[0, 2 pi)`.
/// Negative `r` addresses the second sheet of the type I extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainPoint {
    pub r: f64,
    pub theta: f64,
}

impl DomainPoint {
    pub fn new(r: f64, theta: f64) -> Self {
        Self {
            r,
            theta: normalize_angle(theta),
        }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Coordinates `(r, s = cos(m theta)/r)` near the light-like line `L_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupPoint {
    pub r: f64,
    pub s: f64,
    pub branch_k: u32,
}

pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

pub fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidM(m));
    }
    Ok(())
}

pub(crate) fn check_index(m: u32, k: i64) -> Result<()> {
    check_m(m)?;
    if k < 0 || k >= 2 * m as i64 {
        return Err(Error::IndexOutOfRange { k, m });
    }
    Ok(())
}

/// `a_k = (2k+1) pi / (2m)`, the directions where `cos(m theta) = 0`.
pub fn alpha(m: u32, k: u32) -> f64 {
    (2 * k + 1) as f64 * PI / (2 * m) as f64
}

/// `(m^2 - 1)/(4m)`.
pub(crate) fn quarter_coeff(m: u32) -> f64 {
    let mf = m as f64;
    (mf * mf - 1.0) / (4.0 * mf)
}

/// Polynomial part `P` of the frame, `F = z^{-(m+1)/2} P / sqrt(n)`, with
/// the entries in double-double and the normalisation `n`.
fn frame_polynomial(spec: SurfaceSpec, z: Complex64) -> Result<([DdComplex; 4], f64)> {
    check_m(spec.m)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("frame is undefined at z = 0".into()));
    }
    let mf = spec.m as f64;
    let (p, q) = (mf + 1.0, mf - 1.0);
    let zd = DdComplex::from(z);
    let zm = zd.powu(spec.m);
    let one = DdComplex::real(1.0);
    match spec.family {
        Family::I => Ok((
            [
                zd * p,
                zd * (zm * q - one * p),
                one * q,
                zm * p - one * q,
            ],
            4.0 * mf,
        )),
        Family::II => Ok((
            [
                zd * (one * p - zm * q),
                zd * (zm * q + one * p),
                one * q - zm * p,
                zm * p + one * q,
            ],
            8.0 * mf,
        )),
        Family::AdS => Err(Error::Unsupported {
            operation: "frame",
            family: "AdS",
        }),
    }
}

/// Holomorphic frame `F` with `f = F e3 F*`. The prefactor `z^{-(m+1)/2}`
/// is taken on the principal branch; `f` does not depend on the branch.
pub fn frame(spec: SurfaceSpec, z: Complex64) -> Result<Mat2C> {
    let ([a11, a12, a21, a22], n) = frame_polynomial(spec, z)?;
    let pre = z.powf(-(spec.m as f64 + 1.0) / 2.0) / n.sqrt();
    Ok(Mat2C::new(a11.to_c64(), a12.to_c64(), a21.to_c64(), a22.to_c64()).scale(pre))
}

/// `F e3 F*` read back as a point of R^4_1.
///
/// The branch phase of the prefactor cancels, leaving `|z|^{-(m+1)} P e3 P* / n`.
/// `P e3 P*` is formed in double-double: near `z = 0` its entries cancel down
/// by a factor `|z|^m`, which plain doubles do not survive for larger `m`.
pub fn surface_from_frame(spec: SurfaceSpec, z: Complex64) -> Result<Point4> {
    let ([a11, a12, a21, a22], n) = frame_polynomial(spec, z)?;
    let scale = z.norm().powf(-(spec.m as f64 + 1.0)) / n;
    let x11 = a11.norm_sqr() - a12.norm_sqr();
    let x22 = a21.norm_sqr() - a22.norm_sqr();
    let x12 = a11 * a21.conj() - a12 * a22.conj();
    Ok(Point4::new(
        0.5 * scale * (x11 + x22).to_f64(),
        scale * x12.re.to_f64(),
        scale * x12.im.to_f64(),
        0.5 * scale * (x11 - x22).to_f64(),
    ))
}

/// Closed-form components of the type I catenoid, valid for any `r != 0`.
pub fn components_i(m: u32, r: f64, theta: f64) -> Result<Point4> {
    check_m(m)?;
    if r == 0.0 || !r.is_finite() {
        return Err(Error::Domain(format!(
            "type I components need finite r != 0 (got {r}); use the blow-up chart at r = 0"
        )));
    }
    let mf = m as f64;
    let a = quarter_coeff(m);
    let rm = r.powi(m as i32);
    let c = 2.0 * (mf * theta).cos();
    let plus = a * r * (c - (mf - 1.0) / (mf + 1.0) * rm);
    let minus = a / r * (c - (mf + 1.0) / (mf - 1.0) * rm);
    let (x1, x2) = type_i_planar(m, theta, rm);
    Ok(Point4::new(0.5 * (plus + minus), x1, x2, 0.5 * (plus - minus)))
}

/// `x1 + i x2` of the type I surface given `r^m`.
fn type_i_planar(m: u32, theta: f64, rm: f64) -> (f64, f64) {
    let mf = m as f64;
    let w = Complex64::from_polar((mf - 1.0).powi(2) / (4.0 * mf), (mf + 1.0) * theta)
        + Complex64::from_polar((mf + 1.0).powi(2) / (4.0 * mf), -(mf - 1.0) * theta)
        - Complex64::from_polar(quarter_coeff(m) * rm, theta);
    (w.re, w.im)
}

/// Closed-form components of the type II catenoid (`r > 0`).
pub fn components_ii(m: u32, r: f64, theta: f64) -> Result<Point4> {
    check_m(m)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!(
            "type II components need finite r > 0 (got {r})"
        )));
    }
    let b = -quarter_coeff(m) * (m as f64 * theta).cos();
    let (x1, x2) = type_ii_planar(m, theta);
    Ok(Point4::new(b * (r + 1.0 / r), x1, x2, b * (r - 1.0 / r)))
}

/// `(x1, x2)` of the type II surface; independent of `r`.
pub fn type_ii_planar(m: u32, theta: f64) -> (f64, f64) {
    let mf = m as f64;
    let (sm, cm) = (mf * theta).sin_cos();
    let (s, c) = theta.sin_cos();
    let x1 = -((mf * mf + 1.0) * cm * c + 2.0 * mf * sm * s) / (2.0 * mf);
    let x2 = -((mf * mf + 1.0) * cm * s - 2.0 * mf * sm * c) / (2.0 * mf);
    (x1, x2)
}

/// Angle `phi` with `cos(phi) = u` on the branch `(k pi, (k+1) pi)`, i.e.
/// the interval of length `pi` centred at `m a_k`.
pub fn branch_arccos(k: u32, u: f64) -> f64 {
    let base = k as f64 * PI;
    if k % 2 == 0 {
        base + u.acos()
    } else {
        base + PI - u.acos()
    }
}

/// Type I surface in blow-up coordinates `(r, s)` with `s = cos(m theta)/r`
/// on the branch around `a_k`. Analytic across `r = 0`, where it traces the
/// light-like line `L_k`.
pub fn blowup_chart(m: u32, k: u32, r: f64, s: f64) -> Result<Point4> {
    check_index(m, k as i64)?;
    let u = r * s;
    if !(u.abs() < 1.0) {
        return Err(Error::Branch(u));
    }
    let mf = m as f64;
    let a = quarter_coeff(m);
    let phi = branch_arccos(k, u);
    let theta = phi / mf;
    let plus = a * (2.0 * r * r * s - (mf - 1.0) / (mf + 1.0) * r.powi(m as i32 + 1));
    let minus = a * (2.0 * s - (mf + 1.0) / (mf - 1.0) * r.powi(m as i32 - 1));
    let w = Complex64::from_polar(1.0 / (4.0 * mf), theta)
        * (Complex64::from_polar((mf - 1.0).powi(2), phi)
            + Complex64::from_polar((mf + 1.0).powi(2), -phi)
            - (mf * mf - 1.0) * r.powi(m as i32));
    Ok(Point4::new(0.5 * (plus + minus), w.re, w.im, 0.5 * (plus - minus)))
}

pub fn blowup_point(p: &BlowupPoint, m: u32) -> Result<Point4> {
    blowup_chart(m, p.branch_k, p.r, p.s)
}

/// Secondary Gauss map: `z^m + 1` (I) or `(z^m - 1)/(z^m + 1)` (II).
pub fn secondary_gauss(spec: SurfaceSpec, z: Complex64) -> Result<Complex64> {
    check_m(spec.m)?;
    let zm = z.powu(spec.m);
    match spec.family {
        Family::I => Ok(zm + 1.0),
        Family::II => {
            let den = zm + 1.0;
            if den.norm() <= 1e-14 * zm.norm().max(1.0) {
                return Err(Error::Pole(z));
            }
            Ok((zm - 1.0) / den)
        }
        Family::AdS => Err(Error::Unsupported {
            operation: "secondary Gauss map",
            family: "AdS",
        }),
    }
}

/// Timelike CMC-1 surface in anti-de Sitter space obtained from the type II
/// catenoid by `log r -> i s`. Periodic in both `s` and `theta`.
pub fn ads_surface(m: u32, s: f64, theta: f64) -> Result<Point4> {
    check_m(m)?;
    let b = -2.0 * quarter_coeff(m) * (m as f64 * theta).cos();
    let (x1, x2) = type_ii_planar(m, theta);
    let (ss, cs) = s.sin_cos();
    Ok(Point4::new(b * cs, x1, x2, b * ss))
}
