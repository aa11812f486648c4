//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p stepwaves --test acceptance`. The process exits
//! non-zero if any attainable criterion fails. Criterion 10's small-F target
//! (B = F²/4) contradicts the dispersion relation, whose coalescence curve
//! tends to B = F⁴/4; it is evaluated as stated and reported, not enforced.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex;
use stepwaves::dispersion::{
    critical_curve, critical_point_at_froude, g, low_froude_deviation, normalized_residual, roots,
};
use stepwaves::exp_asym::{
    inner_coefficients, late_order_diagnostics, remainder_jump, singulant, singulant_ode_residual, stokes_crossing,
    stokes_lines, stokes_smoothing, switched_wave,
};
use stepwaves::fourier_surface::{
    fourier_amplitude, governing_residual_oracle, kernel_transform_check, offset_grid, SurfaceProfile,
};
use stepwaves::resummation::{reconstruct_leading_order, truncated_sum_identity, LadderChoice};
use stepwaves::{BranchedConstants, Family, FlowParams, ScaledParams};

/// Criteria whose stated target is unreachable for the true dispersion relation.
const UNATTAINABLE: &[usize] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Least-squares slope of ln y against ln x, with ln y supplied directly.
fn slope(ln_x: &[f64], ln_y: &[f64]) -> f64 {
    let n = ln_x.len() as f64;
    let mx = ln_x.iter().sum::<f64>() / n;
    let my = ln_y.iter().sum::<f64>() / n;
    let num: f64 = ln_x.iter().zip(ln_y).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = ln_x.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn all_roots(flow: &FlowParams<f64>) -> Vec<Complex<f64>> {
    let rs = roots(flow, 50).unwrap();
    let mut ks: Vec<Complex<f64>> = rs.k0.into_iter().chain(rs.k1).collect();
    ks.extend(rs.beta_ladder.iter().map(|&b| Complex::new(0.0, b)));
    ks
}

fn amplitude_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let (mut pos, mut neg) = (0, 0);
    for &beta in &[0.5f64, 1.0, 2.0] {
        for &c in &[0.1, 0.2, 0.4, 0.6] {
            for &eps in &[0.2, 0.1, 0.05] {
                let s = ScaledParams::with_step(eps, beta, c * beta, 0.01).unwrap();
                let k = s.constants();
                if s.discriminant() > 0.0 {
                    pos += 1
                } else {
                    neg += 1
                }
                for &phi in &[-5.0, 0.0, 5.0] {
                    for fam in Family::BOTH {
                        let a = fourier_amplitude(&s, &k, phi, fam).unwrap().amplitude;
                        let b = switched_wave(&s, &k, fam, phi).unwrap().amplitude;
                        worst = worst.max((a - b).abs() / a);
                    }
                }
            }
        }
    }
    outcome(
        worst <= 1e-13 && pos > 0 && neg > 0,
        format!("max relative gap {worst:.2e} over {pos} Δ>0 and {neg} Δ<0 cases (tol 1e-13)"),
    )
}

fn dispersion_roots() -> Outcome {
    let eps_sweep = [0.1, 0.05, 0.025];
    let mut flows: Vec<FlowParams<f64>> = [(0.4, 0.005), (1.0, 0.05), (0.4, 0.02), (2.0, 0.1)]
        .iter()
        .map(|&(f, b)| FlowParams::new(f, b, 0.01).unwrap())
        .collect();
    for &eps in &eps_sweep {
        flows.push(ScaledParams::with_step(eps, 1.0, 0.2, 0.01).unwrap().unscale());
    }
    let (mut worst_g, mut count) = (0.0f64, 0);
    for flow in &flows {
        for k in all_roots(flow) {
            worst_g = worst_g.max(g(k, flow).norm());
            count += 1;
        }
    }
    // At large Bond number |g'(iβ)| ~ πBβ², so one ulp in β already costs ~1e-11 in |g|;
    // there the residual is compared on the scale max(1, B|k|³).
    let stiff = FlowParams::new(0.8, 0.3, 0.01).unwrap();
    let worst_scaled = all_roots(&stiff).into_iter().fold(0.0f64, |m, k| m.max(normalized_residual(k, &stiff)));
    let c = BranchedConstants::new(1.0, 0.2).unwrap();
    let ln_eps: Vec<f64> = eps_sweep.iter().map(|e: &f64| e.ln()).collect();
    let mut slopes = Vec::new();
    let mut consistent = true;
    for fam in Family::BOTH {
        let ln_dev: Vec<f64> = eps_sweep.iter().map(|&e| low_froude_deviation(&c, e, fam).unwrap().ln_abs).collect();
        slopes.push(slope(&ln_eps, &ln_dev));
        for &eps in &eps_sweep {
            let flow = ScaledParams::with_step(eps, 1.0, 0.2, 0.01).unwrap().unscale();
            let rs = roots(&flow, 0).unwrap();
            let k = match fam {
                Family::Gravity => rs.k0.unwrap(),
                Family::Capillary => rs.k1.unwrap(),
            };
            let d = c.d(fam).unwrap();
            consistent &= (k * eps - d).norm() <= 1e-12 * d.norm();
        }
    }
    let min_slope = slopes.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        worst_g <= 1e-11 && worst_scaled <= 1e-11 && min_slope >= 1.0 && consistent,
        format!(
            "max |g| {worst_g:.2e} over {count} roots, scaled {worst_scaled:.2e} at B = 0.3 (tol 1e-11); slopes of |εk−D| gravity {:.1}, capillary {:.1} (need ≥ 1.0)",
            slopes[0], slopes[1]
        ),
    )
}

fn inner_recurrence() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(b, t) in &[(1.0, 0.2), (1.0, 0.5), (2.0, 0.1)] {
        let c = BranchedConstants::new(b, t).unwrap();
        worst = worst.max(inner_coefficients(&c, 50).unwrap().max_closed_form_error.unwrap());
    }
    outcome(worst <= 1e-12, format!("max relative error {worst:.2e} for n ≤ 50 (tol 1e-12)"))
}

fn singulant_and_stokes() -> Outcome {
    let mut ode: f64 = 0.0;
    let mut im_chi: f64 = 0.0;
    let mut re_chi = f64::INFINITY;
    for &(b, t) in &[(1.0, 0.2), (1.0, 0.5)] {
        let c = BranchedConstants::new(b, t).unwrap();
        for j in 0..100 {
            let z = Complex::from_polar(0.2 + 0.03 * j as f64, -3.0 + 0.06 * j as f64);
            for fam in Family::BOTH {
                ode = ode.max(singulant_ode_residual(z, fam, &c).unwrap());
            }
        }
        for line in stokes_lines(&c, 200).unwrap() {
            for w in &line.polyline {
                let chi = singulant((-w).exp(), line.family, &c).unwrap();
                im_chi = im_chi.max(chi.im.abs());
                re_chi = re_chi.min(chi.re);
            }
        }
    }
    let pos = BranchedConstants::new(1.0, 0.2).unwrap();
    let neg = BranchedConstants::new(1.0, 0.5).unwrap();
    let gp = stokes_crossing(&pos, Family::Gravity).unwrap();
    let cp = stokes_crossing(&pos, Family::Capillary).unwrap();
    let gn = stokes_crossing(&neg, Family::Gravity).unwrap();
    let cn = stokes_crossing(&neg, Family::Capillary).unwrap();
    let crossings = gp == 0.0 && cp == 0.0 && gn > 0.0 && cn < 0.0;
    outcome(
        ode <= 1e-12 && im_chi <= 1e-10 && re_chi >= -1e-12 && crossings,
        format!(
            "ODE residual {ode:.2e}; |Im χ| {im_chi:.2e}, min Re χ {re_chi:.2e}; crossings Δ>0 ({gp}, {cp}), Δ<0 gravity {gn:.4}, capillary {cn:.4}"
        ),
    )
}

fn governing_oracle() -> Outcome {
    let flow = FlowParams::new(0.4, 0.02, 0.01).unwrap();
    let rs = roots(&flow, 0).unwrap();
    let profile = SurfaceProfile::build(&flow, &rs, offset_grid(30.0, 0.01).unwrap()).unwrap();
    let r = governing_residual_oracle(&profile, &flow).unwrap();
    outcome(
        r.relative <= 1e-4,
        format!(
            "(F, B) = (0.4, 0.02), region {}: residual/max|θ| = {:.2e} at {} points, |φ| ≥ 0.3 (tol 1e-4)",
            rs.region.as_str(),
            r.relative,
            r.points_checked
        ),
    )
}

fn kernel_transforms() -> Outcome {
    let mut worst: f64 = 0.0;
    for &k in &[0.5, 1.0, 2.0] {
        let t = kernel_transform_check(k).unwrap();
        worst = worst.max(t.plus_error()).max(t.minus_error());
    }
    outcome(worst <= 1e-6, format!("max relative error {worst:.2e} at k ∈ {{0.5, 1, 2}} (tol 1e-6)"))
}

fn stokes_smoothing_jump() -> Outcome {
    let mut worst: f64 = 0.0;
    let q = Complex::new(0.3, -0.7);
    for &r in &[0.5, 2.0, 10.0] {
        for &eps in &[0.2, 0.05] {
            let chi = Complex::new(r, 0.0);
            let p = stokes_smoothing(r, eps, 1.0, 10001).unwrap();
            let exact = remainder_jump(q, chi, eps, 1.0);
            worst = worst.max((p.jump(q, chi) - exact).norm() / exact.norm());
        }
    }
    outcome(worst <= 1e-10, format!("max relative gap {worst:.2e} between integrated and closed-form jump (tol 1e-10)"))
}

fn reconstruction() -> Outcome {
    let eps_sweep = [0.1, 0.05, 0.025];
    let mut ln_dev = Vec::new();
    for &eps in &eps_sweep {
        let s = ScaledParams::with_step(eps, 1.0, 0.2, 0.01).unwrap();
        let r = reconstruct_leading_order(&s, &[0.5f64], LadderChoice::Exact).unwrap();
        ln_dev.push(r.max_deviation().ln());
    }
    let ln_eps: Vec<f64> = eps_sweep.iter().map(|e: &f64| e.ln()).collect();
    let s = slope(&ln_eps, &ln_dev);
    let mut gap: f64 = 0.0;
    for n in 0..=200 {
        for &z in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            gap = gap.max(truncated_sum_identity(z, n).unwrap().relative_gap());
        }
    }
    outcome(
        s >= 1.8 && gap <= 1e-13,
        format!("deviation slope {s:.2} at ζ = 0.5 (need ≥ 1.8); truncated-sum identity gap {gap:.2e} (tol 1e-13)"),
    )
}

fn late_orders() -> Outcome {
    let report = late_order_diagnostics(1.0, 0.2, 1.0, 52).unwrap();
    let last = report.records.iter().rfind(|r| r.n <= 50).unwrap();
    let dev = (last.normalized() - 1.0).abs();
    let from20 = report.max_deviation_from(20).unwrap();
    outcome(
        dev <= 0.02,
        format!("ratio/prediction − 1 = {dev:.2e} at n = {}, max {from20:.2e} for n ≥ 20 (tol 2%)", last.n),
    )
}

fn critical_curve_check() -> Outcome {
    let curve = critical_curve((1e-4, 3.0), 200).unwrap();
    let mut worst = curve.points.iter().fold(0.0f64, |m, p| m.max(p.residual_g).max(p.residual_g_prime));
    let p = critical_point_at_froude(0.05).unwrap();
    worst = worst.max(p.residual_g).max(p.residual_g_prime);
    let f2 = 0.05f64 * 0.05;
    let stated = (p.bond - f2 / 4.0).abs() / (f2 / 4.0);
    let quartic = (p.bond - f2 * f2 / 4.0).abs() / (f2 * f2 / 4.0);
    outcome(
        worst <= 1e-10 && curve.warnings.is_empty() && stated <= 0.05,
        format!(
            "max |g|, |g'| {worst:.2e} on {} points (tol 1e-10); at F = 0.05, B = {:.4e} vs F²/4 = {:.4e} (gap {:.1}%, tol 5%); vs F⁴/4 gap {:.2}%",
            curve.points.len(),
            p.bond,
            f2 / 4.0,
            100.0 * stated,
            100.0 * quartic
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("amplitude equivalence", amplitude_equivalence),
        ("dispersion roots", dispersion_roots),
        ("inner recurrence vs closed form", inner_recurrence),
        ("singulant and Stokes lines", singulant_and_stokes),
        ("governing-equation oracle", governing_oracle),
        ("kernel transforms", kernel_transforms),
        ("Stokes smoothing", stokes_smoothing_jump),
        ("leading-order reconstruction", reconstruction),
        ("late-order divergence", late_orders),
        ("critical curve", critical_curve_check),
    ];
    let mut blocking = 0;
    let mut passed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {} [{secs:.2}s]", o.detail);
        if o.pass {
            passed += 1;
        } else if !UNATTAINABLE.contains(&id) {
            blocking += 1;
        }
    }
    println!("{passed}/10 criteria pass");
    for id in UNATTAINABLE {
        println!(
            "note: criterion {id} is unattainable as stated; the coalescence curve tends to B = F⁴/4 (see README)"
        );
    }
    if blocking == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
