//! Ambient arithmetic: the Lorentz–Minkowski 4-space, its Hermitian-matrix
//! model, the SL(2,C) action and the two isometric involutions used by the
//! catenoid families.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catenoid::{alpha, check_index};
use crate::error::{Error, Result};

/// Default absolute tolerance for membership and Hermiticity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A point (or vector) of R^4 written as `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point4 {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point4 {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Point4) -> f64 {
        (*self - *other)
            .to_array()
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Euclidean norm of the coordinate vector (no Lorentzian meaning).
    pub fn euclidean_norm(&self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Add for Point4 {
    type Output = Point4;
    fn add(self, o: Point4) -> Point4 {
        Point4::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point4 {
    type Output = Point4;
    fn sub(self, o: Point4) -> Point4 {
        Point4::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<Point4> for f64 {
    type Output = Point4;
    fn mul(self, p: Point4) -> Point4 {
        Point4::new(self * p.t, self * p.x, self * p.y, self * p.z)
    }
}

impl Neg for Point4 {
    type Output = Point4;
    fn neg(self) -> Point4 {
        Point4::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.t, self.x, self.y, self.z)
    }
}

/// Signature of the ambient quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    /// `(-+++)`, ambient space of de Sitter 3-space.
    DeSitter,
    /// `(+--+)`, ambient space of anti-de Sitter 3-space.
    AntiDeSitter,
}

impl Signature {
    /// Diagonal of the Gram matrix in `(t, x, y, z)` order.
    pub fn diagonal(self) -> [f64; 4] {
        match self {
            Signature::DeSitter => [-1.0, 1.0, 1.0, 1.0],
            Signature::AntiDeSitter => [1.0, -1.0, -1.0, 1.0],
        }
    }

    /// Value of `<p, p>` on the unit space form of this signature.
    pub fn curvature_level(self) -> f64 {
        match self {
            Signature::DeSitter => 1.0,
            Signature::AntiDeSitter => -1.0,
        }
    }

    pub fn space_name(self) -> &'static str {
        match self {
            Signature::DeSitter => "de Sitter space",
            Signature::AntiDeSitter => "anti-de Sitter space",
        }
    }
}

pub fn minkowski_inner(p: &Point4, q: &Point4, sig: Signature) -> f64 {
    match sig {
        Signature::DeSitter => -p.t * q.t + p.x * q.x + p.y * q.y + p.z * q.z,
        Signature::AntiDeSitter => p.t * q.t - p.x * q.x - p.y * q.y + p.z * q.z,
    }
}

/// `|<p,p> - level|` for the unit space form of `sig`.
pub fn membership_residual(p: &Point4, sig: Signature) -> f64 {
    (minkowski_inner(p, p, sig) - sig.curvature_level()).abs()
}

/// [`membership_residual`] divided by `max(1, |p|^2)` (Euclidean). The
/// absolute residual of a point with large coordinates is dominated by
/// rounding in the sum of squares; this is the scale-free version.
pub fn scaled_membership_residual(p: &Point4, sig: Signature) -> f64 {
    let e = p.euclidean_norm();
    membership_residual(p, sig) / (e * e).max(1.0)
}

pub fn in_space_form(p: &Point4, sig: Signature, tol: f64) -> bool {
    debug_assert!(tol > 0.0);
    membership_residual(p, sig) <= tol
}

/// Complex 2x2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Mat2C {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    /// `diag(1, -1)`.
    pub fn e3() -> Self {
        Self::real(1.0, 0.0, 0.0, -1.0)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn max_abs_diff(&self, other: &Mat2C) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, o: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

/// `(t,x,y,z) -> [[t+z, x+iy], [x-iy, t-z]]`.
pub fn to_herm(p: &Point4) -> Mat2C {
    Mat2C::new(
        Complex64::new(p.t + p.z, 0.0),
        Complex64::new(p.x, p.y),
        Complex64::new(p.x, -p.y),
        Complex64::new(p.t - p.z, 0.0),
    )
}

/// Inverse of [`to_herm`] with the default tolerance.
pub fn from_herm(m: &Mat2C) -> Result<Point4> {
    from_herm_tol(m, DEFAULT_TOL)
}

/// Inverse of [`to_herm`]. Input within `tol` of Hermitian is symmetrized
/// as `(X + X*)/2` before the coordinates are read off.
pub fn from_herm_tol(m: &Mat2C, tol: f64) -> Result<Point4> {
    let deviation = m.max_abs_diff(&m.adjoint());
    if !(deviation <= tol) {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: tol,
        });
    }
    let d11 = m.a11.re;
    let d22 = m.a22.re;
    let off = (m.a12 + m.a21.conj()) * 0.5;
    Ok(Point4::new(
        0.5 * (d11 + d22),
        off.re,
        off.im,
        0.5 * (d11 - d22),
    ))
}

/// `a X a*`.
pub fn conjugate_action(a: &Mat2C, x: &Mat2C) -> Mat2C {
    *a * *x * a.adjoint()
}

/// `(t,x,y,z) -> (-t,x,y,-z)`.
pub fn involution_iota(p: &Point4) -> Point4 {
    Point4::new(-p.t, p.x, p.y, -p.z)
}

/// Reflection of the `xy`-plane across the line spanned by
/// `(-sin a_k, cos a_k)`, `a_k = (2k+1)pi/(2m)`, leaving `t` and `z` alone.
///
/// Its fixed set contains the two light-like lines
/// `(t, -sin a_k, cos a_k, +-t)` through the k-th cone point of the type II
/// catenoid.
pub fn rotation_involution(k: i64, m: u32, p: &Point4) -> Result<Point4> {
    check_index(m, k)?;
    let (s2, c2) = (2.0 * alpha(m, k as u32)).sin_cos();
    Ok(Point4::new(
        p.t,
        -(c2 * p.x + s2 * p.y),
        -(s2 * p.x - c2 * p.y),
        p.z,
    ))
}
