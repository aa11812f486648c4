use stepwaves::resummation::{
    ladder_correction, log_log_slope, reconstruct_leading_order, truncated_sum_identity, LadderChoice,
};
use stepwaves::ScaledParams;

#[test]
fn truncated_sum_against_direct_summation() {
    let s = truncated_sum_identity(0.3f64, 17).unwrap();
    let direct: f64 = (0..=17).map(|n| (-1f64).powi(n + 1) * n as f64 * 0.3f64.powi(n)).sum();
    assert!((s.partial - direct).abs() <= 1e-15);
    assert!(s.relative_gap() <= 1e-13);
    let zero = truncated_sum_identity(0.6f64, 0).unwrap();
    assert_eq!(zero.partial, 0.0);
    assert!(zero.closed.abs() <= 1e-16);
    for n in 0..200 {
        for z in [0.05, 0.3, 0.5, 0.9, 0.99] {
            assert!(truncated_sum_identity(z, n).unwrap().relative_gap() <= 1e-13, "{z} {n}");
        }
    }
}

#[test]
fn ladder_correction_tracks_leading_order() {
    let mut ratios = Vec::new();
    for eps in [0.05, 0.025, 0.0125, 0.00625] {
        let s = ScaledParams::with_step(eps, 1.0f64, 0.2, 0.01).unwrap();
        let e = ladder_correction(3, &s).unwrap();
        ratios.push((e.d / e.order_estimate - 1.0).abs());
        // Next term of tan: 2(πd)⁵/15.
        assert!(e.series_residual.abs() <= (std::f64::consts::PI * e.d).powi(5) / 5.0, "{eps}: {}", e.series_residual);
    }
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    assert!(ratios[3] < 0.01);
    let tiny = ScaledParams::with_step(1e-6, 1.0f64, 0.2, 0.01).unwrap();
    assert!(ladder_correction(5, &tiny).unwrap().series_residual.abs() <= 1e-10);
}

#[test]
fn reconstruction_deviation_is_second_order() {
    for choice in [LadderChoice::Exact, LadderChoice::Integer] {
        let samples: Vec<(f64, f64)> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&eps| {
                let s = ScaledParams::with_step(eps, 1.0, 0.2, 0.01).unwrap();
                let r = reconstruct_leading_order(&s, &[0.5], choice).unwrap();
                (eps, r.max_deviation())
            })
            .collect();
        let slope = log_log_slope(&samples).unwrap();
        assert!(slope >= 1.8, "{choice:?}: {slope}");
    }
}

#[test]
fn reconstruction_improves_on_an_interior_grid() {
    let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let mut last = f64::INFINITY;
    for eps in [0.1, 0.05, 0.025, 0.0125] {
        let s = ScaledParams::with_step(eps, 1.0, 0.2, 0.01).unwrap();
        let r = reconstruct_leading_order(&s, &grid, LadderChoice::Exact).unwrap();
        let rel = r.max_relative_deviation();
        assert!(rel < last);
        last = rel;
        assert!(r.warnings.is_empty());
    }
    assert!(last < 0.05);
}

#[test]
fn flat_bottom_reconstructs_nothing() {
    let s = ScaledParams::with_step(0.05, 1.0f64, 0.2, 0.0).unwrap();
    let r = reconstruct_leading_order(&s, &[0.2, 0.5, 0.8], LadderChoice::Exact).unwrap();
    assert!(r.points.iter().all(|p| p.value == 0.0 && p.target == 0.0));
}

#[test]
fn near_unit_zeta_is_capped() {
    let s = ScaledParams::with_step(0.05, 1.0f64, 0.2, 0.01).unwrap();
    let r = reconstruct_leading_order(&s, &[1.0 - 1e-5], LadderChoice::Integer).unwrap();
    assert!(r.points[0].capped);
    assert_eq!(r.warnings.len(), 1);
    assert!(reconstruct_leading_order(&s, &[1.0], LadderChoice::Exact).is_err());
}
