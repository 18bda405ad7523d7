//! Property tests for the surface formulas: space-form membership, the frame
//! identity, sheet symmetries, the blow-up chart and the projection models.

use std::f64::consts::{PI, TAU};

use catenoid_core::catenoid::{
    blowup_chart, branch_arccos, components_i, components_ii, surface_from_frame, DomainPoint,
};
use catenoid_core::lorentz::{involution_iota, rotation_involution, scaled_membership_residual};
use catenoid_core::projection::{
    hollowball_project, norm3, solid_torus_project, torus_level, INNER_RADIUS, OUTER_RADIUS,
};
use catenoid_core::trochoid::{gamma, half_turn_sign};
use catenoid_core::{Family, Point4, Signature, SurfaceSpec};
use proptest::prelude::*;

fn m_values() -> impl Strategy<Value = u32> {
    2u32..=6
}

/// `r` with `log|r|` in `[-2, 2]`.
fn radius() -> impl Strategy<Value = f64> {
    (-2.0..2.0f64).prop_map(f64::exp)
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

fn rel(p: &Point4, q: &Point4) -> f64 {
    p.max_abs_diff(q) / p.euclidean_norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn type_i_lies_in_de_sitter_on_both_sheets(m in m_values(), r in radius(), th in angle(), neg in any::<bool>()) {
        let r = if neg { -r } else { r };
        let p = components_i(m, r, th).unwrap();
        prop_assert!(scaled_membership_residual(&p, Signature::DeSitter) < 1e-10);
    }

    #[test]
    fn type_ii_lies_in_de_sitter(m in m_values(), r in radius(), th in angle()) {
        let p = components_ii(m, r, th).unwrap();
        prop_assert!(scaled_membership_residual(&p, Signature::DeSitter) < 1e-10);
    }

    #[test]
    fn ads_lies_in_anti_de_sitter(m in m_values(), s in angle(), th in angle()) {
        let spec = SurfaceSpec::new(Family::AdS, m).unwrap();
        let p = spec.evaluate(s, th).unwrap();
        prop_assert!(scaled_membership_residual(&p, Signature::AntiDeSitter) < 1e-10);
    }

    #[test]
    fn components_match_the_frame(m in m_values(), r in radius(), th in angle(), ii in any::<bool>()) {
        let family = if ii { Family::II } else { Family::I };
        let spec = SurfaceSpec::new(family, m).unwrap();
        let closed = spec.evaluate(r, th).unwrap();
        let framed = surface_from_frame(spec, DomainPoint::new(r, th).z()).unwrap();
        prop_assert!(rel(&closed, &framed) < 1e-10, "{closed:?} vs {framed:?}");
    }

    #[test]
    fn type_ii_planar_part_ignores_r(m in m_values(), r1 in radius(), r2 in radius(), th in angle()) {
        let a = components_ii(m, r1, th).unwrap();
        let b = components_ii(m, r2, th).unwrap();
        prop_assert_eq!((a.x, a.y), (b.x, b.y));
        let c = (m * m - 1) as f64 / (2.0 * m as f64);
        let cos = (m as f64 * th).cos();
        prop_assert!((a.x * a.x + a.y * a.y - 1.0 - c * c * cos * cos).abs() < 1e-12);
    }

    #[test]
    fn type_i_sheets_are_related(m in m_values(), r in radius(), th in angle()) {
        let p = components_i(m, r, th).unwrap();
        if m % 2 == 1 {
            let q = components_i(m, -r, th + PI).unwrap();
            prop_assert!(rel(&p, &q) < 1e-10);
        } else {
            let q = components_i(m, -r, th).unwrap();
            prop_assert!(rel(&involution_iota(&p), &q) < 1e-10);
        }
    }

    #[test]
    fn type_ii_reflection_relation(m in m_values(), r in radius(), th in angle(), k_unit in 0.0..1.0f64) {
        let k = ((k_unit * 2.0 * m as f64) as i64).min(2 * m as i64 - 1);
        let a_k = (2 * k + 1) as f64 * PI / (2.0 * m as f64);
        let lhs = rotation_involution(k, m, &components_ii(m, r, 2.0 * a_k - th).unwrap()).unwrap();
        let rhs = involution_iota(&components_ii(m, r, th).unwrap());
        prop_assert!(rel(&rhs, &lhs) < 1e-10);
    }

    #[test]
    fn blowup_chart_matches_components_off_the_line(
        m in m_values(),
        k_unit in 0.0..1.0f64,
        r in 1e-3..1e-1f64,
        s in -5.0..5.0f64,
    ) {
        let k = ((k_unit * 2.0 * m as f64) as u32).min(2 * m - 1);
        let chart = blowup_chart(m, k, r, s).unwrap();
        let theta = branch_arccos(k, r * s) / m as f64;
        let direct = components_i(m, r, theta).unwrap();
        prop_assert!(rel(&direct, &chart) < 1e-9, "{chart:?} vs {direct:?}");
    }

    #[test]
    fn blowup_chart_on_the_line(m in m_values(), k_unit in 0.0..1.0f64, s in -10.0..10.0f64) {
        let k = ((k_unit * 2.0 * m as f64) as u32).min(2 * m - 1);
        let p = blowup_chart(m, k, 0.0, s).unwrap();
        let tau = (m * m - 1) as f64 / (4.0 * m as f64) * s;
        let g = gamma(m, (2 * k + 1) as f64 * PI / (2.0 * m as f64));
        let want = Point4::new(tau, g[0], g[1], -tau);
        prop_assert!(p.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn gamma_half_turn(m in m_values(), th in angle()) {
        let a = gamma(m, th);
        let b = gamma(m, th + PI);
        let s = half_turn_sign(m);
        prop_assert!((b[0] - s * a[0]).abs() < 1e-12 && (b[1] - s * a[1]).abs() < 1e-12);
    }

    #[test]
    fn hollowball_keeps_de_sitter_points_in_the_shell(m in m_values(), r in radius(), th in angle(), neg in any::<bool>()) {
        let r = if neg { -r } else { r };
        for p in [components_i(m, r, th).unwrap(), components_ii(m, r.abs(), th).unwrap()] {
            let n = norm3(&hollowball_project(&p).unwrap());
            prop_assert!(n > INNER_RADIUS && n < OUTER_RADIUS, "{n}");
        }
    }

    #[test]
    fn solid_torus_keeps_ads_points_inside(m in m_values(), s in angle(), th in angle()) {
        let p = SurfaceSpec::new(Family::AdS, m).unwrap().evaluate(s, th).unwrap();
        prop_assert!(torus_level(&solid_torus_project(&p).unwrap()) < 1.0);
    }
}
