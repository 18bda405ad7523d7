//! Seeded property suite over one surface: membership, frame consistency,
//! mean curvature, degeneracy locus, symmetries, cone points, hyperbola
//! slices, projection bounds and ideal limits. The report serializes to JSON.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catenoid::{alpha, components_ii, frame, surface_from_frame, Family, SurfaceSpec};
use crate::diffgeo::{
    degeneracy_scan, extrapolated_mean_curvature, richardson_check, surface_chart, EXTRAPOLATION_STEP,
};
use crate::error::{Error, Result};
use crate::export::LibraryInfo;
use crate::lorentz::{involution_iota, rotation_involution, scaled_membership_residual, Point4};
use crate::projection::{hollowball_project, norm3, solid_torus_project, torus_level, INNER_RADIUS, OUTER_RADIUS};
use crate::singular::{
    cone_point, limit_of_sequence, limit_table, scenario_sequence, singular_residual, LimitScenario, SequenceShape,
};

pub const MEMBERSHIP_TOL: f64 = 1e-10;
pub const FRAME_TOL: f64 = 1e-10;
pub const CMC_TOL: f64 = 1e-4;
pub const ADS_CMC_TOL: f64 = 1e-3;
pub const SYMMETRY_TOL: f64 = 1e-10;
pub const CONE_TOL: f64 = 1e-12;
pub const HYPERBOLA_TOL: f64 = 1e-10;
/// Points closer than this to the singular set (in residual) are not regular
/// enough for curvature checks.
pub const REGULAR_MARGIN: f64 = 0.2;
/// Radii used for the cone point check.
pub const CONE_RADII: [f64; 7] = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub spec: SurfaceSpec,
    pub seed: u64,
    pub samples: usize,
    pub cmc_points: usize,
    pub degeneracy_grid: usize,
    pub limit_sequences: usize,
}

impl SuiteConfig {
    pub fn new(spec: SurfaceSpec, seed: u64) -> Self {
        Self {
            spec,
            seed,
            samples: 1000,
            cmc_points: 200,
            degeneracy_grid: 40,
            limit_sequences: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn bound(name: &str, samples: usize, max_error: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: max_error <= tolerance,
            samples,
            max_error,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub library: LibraryInfo,
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(r, theta)` with `log|r|` uniform in `[-span, span]`; negative `r` is
/// drawn half the time when `both_sheets`.
fn random_domain(rng: &mut ChaCha8Rng, span: f64, both_sheets: bool) -> (f64, f64) {
    let r = rng.gen_range(-span..span).exp();
    let sign = if both_sheets && rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    (sign * r, rng.gen_range(0.0..TAU))
}

/// Random parameter for `spec`: polar `(r, theta)` with `log|r|` in
/// `[-span, span]` for types I and II (both sheets for type I), `(s, theta)`
/// over a full period for AdS.
fn random_parameter(rng: &mut ChaCha8Rng, spec: SurfaceSpec, span: f64) -> (f64, f64) {
    match spec.family {
        Family::AdS => (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU)),
        f => random_domain(rng, span, f == Family::I),
    }
}

/// Relative point distance `max|p - q| / max(1, |p|)`.
fn relative_diff(p: &Point4, q: &Point4) -> f64 {
    p.max_abs_diff(q) / p.euclidean_norm().max(1.0)
}

pub fn membership_check(spec: SurfaceSpec, samples: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 1);
    let sig = spec.family.signature();
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let (r, theta) = random_parameter(&mut rng, spec, 2.0);
        worst = worst.max(scaled_membership_residual(&spec.evaluate(r, theta)?, sig));
    }
    Ok(CheckResult::bound(
        "membership",
        samples,
        worst,
        MEMBERSHIP_TOL,
        format!("|<f,f> - ({})| / max(1, |f|^2)", sig.curvature_level()),
    ))
}

/// Closed-form components against `F e3 F*`, and `det F = 1`.
pub fn frame_check(spec: SurfaceSpec, samples: usize, seed: u64) -> Result<CheckResult> {
    if spec.family == Family::AdS {
        return Err(Error::Unsupported {
            operation: "frame check",
            family: "AdS",
        });
    }
    let mut rng = rng_for(seed, 2);
    let (mut agree, mut det) = (0.0_f64, 0.0_f64);
    for _ in 0..samples {
        let (r, theta) = random_domain(&mut rng, 2.0, false);
        let p = crate::catenoid::DomainPoint::new(r, theta);
        let closed = spec.evaluate(r, theta)?;
        let framed = surface_from_frame(spec, p.z())?;
        agree = agree.max(relative_diff(&closed, &framed));
        let f = frame(spec, p.z())?;
        let scale = (f.a11 * f.a22).norm() + (f.a12 * f.a21).norm();
        det = det.max((f.det() - 1.0).norm() / scale.max(1.0));
    }
    Ok(CheckResult::bound(
        "frame",
        samples,
        agree.max(det),
        FRAME_TOL,
        format!("components vs F e3 F*: {agree:.3e}; det F - 1: {det:.3e}"),
    ))
}

/// `H = 1` (`|H| = 1` for AdS) at random points with `|residual| >= REGULAR_MARGIN`.
pub fn cmc_check(spec: SurfaceSpec, points: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 3);
    let sig = spec.family.signature();
    let ads = spec.family == Family::AdS;
    let (mut worst, mut inconsistent, mut n) = (0.0_f64, 0usize, 0usize);
    while n < points {
        let (r, theta) = random_parameter(&mut rng, spec, 1.0);
        let residual = if ads {
            (spec.m as f64 * theta).cos()
        } else {
            singular_residual(spec, r, theta)?
        };
        if residual.abs() < REGULAR_MARGIN {
            continue;
        }
        n += 1;
        let (chart, u) = if ads {
            (surface_chart(spec, 1.0), r)
        } else {
            (surface_chart(spec, r.signum()), r.abs().ln())
        };
        let h = extrapolated_mean_curvature(&chart, sig, u, theta, EXTRAPOLATION_STEP)?;
        worst = worst.max((h.abs() - 1.0).abs());
        if ads && !richardson_check(&chart, sig, u, theta, EXTRAPOLATION_STEP)?.consistent {
            inconsistent += 1;
        }
    }
    let tol = if ads { ADS_CMC_TOL } else { CMC_TOL };
    let mut c = CheckResult::bound(
        "cmc",
        points,
        worst,
        tol,
        format!("extrapolated H, |residual| >= {REGULAR_MARGIN}, {inconsistent} Richardson-inconsistent"),
    );
    c.passed &= inconsistent == 0;
    Ok(c)
}

pub fn degeneracy_check(spec: SurfaceSpec, grid: usize) -> Result<CheckResult> {
    let scan = degeneracy_scan(spec, grid, 0.1)?;
    Ok(CheckResult {
        name: "degeneracy".into(),
        passed: scan.passed(),
        samples: grid * grid,
        max_error: scan.disagreements as f64,
        tolerance: 0.0,
        detail: format!(
            "{} agree, {} ambiguous, {} disagree; det floor {:.3e}",
            scan.agreements, scan.ambiguous, scan.disagreements, scan.det_floor
        ),
    })
}

/// Type I: `f(-r, theta + pi) = f(r, theta)` for odd `m`, `f(-r, theta) =
/// iota f(r, theta)` for even `m`. Type II: `R_k f(r, 2 a_k - theta) =
/// iota f(r, theta)` for every `k`.
pub fn symmetry_check(spec: SurfaceSpec, samples: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 4);
    let m = spec.m;
    let mut worst = 0.0_f64;
    let detail = match spec.family {
        Family::I if m % 2 == 1 => {
            for _ in 0..samples {
                let (r, theta) = random_domain(&mut rng, 2.0, false);
                let a = spec.evaluate(-r, theta + std::f64::consts::PI)?;
                worst = worst.max(relative_diff(&spec.evaluate(r, theta)?, &a));
            }
            "f(-r, theta + pi) = f(r, theta)"
        }
        Family::I => {
            for _ in 0..samples {
                let (r, theta) = random_domain(&mut rng, 2.0, false);
                let a = spec.evaluate(-r, theta)?;
                worst = worst.max(relative_diff(&involution_iota(&spec.evaluate(r, theta)?), &a));
            }
            "f(-r, theta) = iota f(r, theta)"
        }
        Family::II => {
            for _ in 0..samples {
                let (r, theta) = random_domain(&mut rng, 2.0, false);
                let k = rng.gen_range(0..2 * m as i64);
                let mirrored = spec.evaluate(r, 2.0 * alpha(m, k as u32) - theta)?;
                let lhs = rotation_involution(k, m, &mirrored)?;
                worst = worst.max(relative_diff(&involution_iota(&spec.evaluate(r, theta)?), &lhs));
            }
            "R_k f(r, 2 a_k - theta) = iota f(r, theta)"
        }
        Family::AdS => {
            for _ in 0..samples {
                let (s, theta) = random_parameter(&mut rng, spec, 0.0);
                let p = spec.evaluate(s, theta)?;
                let q = spec.evaluate(s + TAU, theta - TAU)?;
                worst = worst.max(relative_diff(&p, &q));
            }
            "2 pi periodicity in s and theta"
        }
    };
    Ok(CheckResult::bound("symmetry", samples, worst, SYMMETRY_TOL, detail.into()))
}

/// Type II rays `theta = a_k` collapse to `(-1)^k (0, -sin a_k, cos a_k, 0)`.
pub fn cone_check(m: u32) -> Result<CheckResult> {
    let mut worst = 0.0_f64;
    for k in 0..2 * m as i64 {
        let target = cone_point(m, k)?;
        let a = alpha(m, k as u32);
        for &r in &CONE_RADII {
            worst = worst.max(components_ii(m, r, a)?.max_abs_diff(&target));
        }
    }
    Ok(CheckResult::bound(
        "cone_points",
        2 * m as usize * CONE_RADII.len(),
        worst,
        CONE_TOL,
        "all k, r in {0.1, ..., 10}".into(),
    ))
}

/// `x0^2 - x3^2 = ((m^2-1)/(2m))^2 cos^2 m theta` and `sgn(cos m theta) x0 <= 0`.
pub fn hyperbola_check(m: u32, samples: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 5);
    let mf = m as f64;
    let c = (mf * mf - 1.0) / (2.0 * mf);
    let (mut worst, mut sign_violations) = (0.0_f64, 0usize);
    for _ in 0..samples {
        let (r, theta) = random_domain(&mut rng, 2.3, false);
        let p = components_ii(m, r, theta)?;
        let cos = (mf * theta).cos();
        let lhs = p.t * p.t - p.z * p.z;
        worst = worst.max((lhs - c * c * cos * cos).abs() / p.t.abs().max(1.0).powi(2));
        if cos.signum() * p.t > HYPERBOLA_TOL {
            sign_violations += 1;
        }
    }
    let mut out = CheckResult::bound(
        "hyperbola",
        samples,
        worst,
        HYPERBOLA_TOL,
        format!("r in [0.1, 10]; {sign_violations} sign violations"),
    );
    out.passed &= sign_violations == 0;
    Ok(out)
}

/// Hollowball shell for S^3_1 families, open solid torus for AdS. The error
/// reported is the smallest margin to the boundary, negated.
///
/// Samples use `log|r| in [-2, 2]`: beyond that the type I ends come closer
/// to the ideal boundary than double precision resolves.
pub fn projection_check(spec: SurfaceSpec, samples: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 6);
    let mut margin = f64::INFINITY;
    for _ in 0..samples {
        let (r, theta) = random_parameter(&mut rng, spec, 2.0);
        let p = spec.evaluate(r, theta)?;
        let m = if spec.family == Family::AdS {
            1.0 - torus_level(&solid_torus_project(&p)?)
        } else {
            let n = norm3(&hollowball_project(&p)?);
            (n - INNER_RADIUS).min(OUTER_RADIUS - n)
        };
        margin = margin.min(m);
    }
    Ok(CheckResult {
        name: "projection".into(),
        passed: margin > 0.0,
        samples,
        max_error: -margin,
        tolerance: 0.0,
        detail: format!("smallest distance to the model boundary {margin:.3e}"),
    })
}

/// Randomized divergent sequences for every scenario land on the tabulated
/// ideal point.
pub fn limit_check(spec: SurfaceSpec, sequences: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = rng_for(seed, 7);
    let (mut worst, mut wrong, mut total) = (0.0_f64, 0usize, 0usize);
    for scenario in LimitScenario::for_family(spec.family) {
        let expected = limit_table(spec, scenario)?;
        for _ in 0..sequences {
            let shape = SequenceShape::from_unit(spec.m, rng.gen());
            let seq = scenario_sequence(spec, scenario, &shape)?;
            total += 1;
            match limit_of_sequence(spec, &seq)? {
                crate::singular::LimitOutcome::Ideal { point, distance } if point.tag == expected.tag => {
                    worst = worst.max(distance);
                }
                _ => wrong += 1,
            }
        }
    }
    let mut out = CheckResult::bound(
        "limits",
        total,
        worst,
        crate::singular::LIMIT_TOL,
        format!("{wrong} sequences missed their tabulated ideal point"),
    );
    out.passed &= wrong == 0;
    Ok(out)
}

/// Runs every check that applies to `config.spec`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let spec = config.spec;
    let (n, seed) = (config.samples, config.seed);
    let mut checks = vec![membership_check(spec, n, seed)?];
    if spec.family != Family::AdS {
        checks.push(frame_check(spec, n, seed)?);
    }
    checks.push(cmc_check(spec, config.cmc_points, seed)?);
    if spec.family != Family::AdS {
        checks.push(degeneracy_check(spec, config.degeneracy_grid)?);
    }
    checks.push(symmetry_check(spec, n, seed)?);
    if spec.family == Family::II {
        checks.push(cone_check(spec.m)?);
        checks.push(hyperbola_check(spec.m, n, seed)?);
    }
    checks.push(projection_check(spec, n, seed)?);
    if spec.family != Family::AdS {
        checks.push(limit_check(spec, config.limit_sequences, seed)?);
    }
    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        log::info!("{spec} {}: {} (max {:.3e})", c.name, if c.passed { "pass" } else { "FAIL" }, c.max_error);
    }
    Ok(SuiteReport {
        library: LibraryInfo::default(),
        config: *config,
        checks,
        passed,
    })
}
