//! The dispersion relation g(k) = kF² − tanh(πk)(Bk² + 1), its roots and the
//! classification of the (F, B) plane.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::FlowParams;
use crate::scalar::Real;
use crate::solve::{all_sign_changes, bisect, golden_max, newton_complex};
use crate::special;

/// Relative root separation below which a real pair counts as coalesced.
pub const COALESCENCE_TOL: f64 = 1e-6;

/// Normalised residual bound every reported root must meet.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-11;

/// Half-width excluded at each end of a tan branch.
const BRANCH_GUARD: f64 = 1e-9;

/// g(k).
pub fn g<T: Real>(k: Complex<T>, flow: &FlowParams<T>) -> Complex<T> {
    let pk = k * T::PI();
    k * flow.f2() - special::tanh(pk) * (k * k * flow.bond + T::one())
}

/// g'(k) = F² − π sech²(πk)(Bk² + 1) − 2Bk tanh(πk).
pub fn g_prime<T: Real>(k: Complex<T>, flow: &FlowParams<T>) -> Complex<T> {
    let pk = k * T::PI();
    let poly = k * k * flow.bond + T::one();
    Complex::new(flow.f2(), T::zero())
        - special::sech2(pk) * poly * T::PI()
        - special::tanh(pk) * k * (flow.bond * T::lit(2.0))
}

/// g on the real line.
pub fn g_real<T: Real>(k: T, flow: &FlowParams<T>) -> T {
    k * flow.f2() - (T::PI() * k).tanh() * (flow.bond * k * k + T::one())
}

/// g' on the real line.
pub fn g_prime_real<T: Real>(k: T, flow: &FlowParams<T>) -> T {
    let pk = T::PI() * k;
    flow.f2()
        - T::PI() * special::sech2_real(pk) * (flow.bond * k * k + T::one())
        - T::lit(2.0) * flow.bond * k * pk.tanh()
}

/// g'' on the real line.
pub fn g_second_real<T: Real>(k: T, flow: &FlowParams<T>) -> T {
    let pi = T::PI();
    let pk = pi * k;
    let th = pk.tanh();
    let s2 = special::sech2_real(pk);
    let b = flow.bond;
    let two = T::lit(2.0);
    two * pi * pi * s2 * th * (b * k * k + T::one()) - T::lit(4.0) * pi * b * k * s2 - two * b * th
}

/// tan(πβ)(1 − Bβ²) − βF², whose positive zeros are the imaginary roots k = iβ.
pub fn ladder_function<T: Real>(beta: T, flow: &FlowParams<T>) -> T {
    (T::PI() * beta).tan() * (T::one() - flow.bond * beta * beta) - beta * flow.f2()
}

/// g'(iβ), which is real.
pub fn g_prime_imag<T: Real>(beta: T, flow: &FlowParams<T>) -> T {
    let pb = T::PI() * beta;
    let c = pb.cos();
    flow.f2() - T::PI() * (T::one() - flow.bond * beta * beta) / (c * c) + T::lit(2.0) * beta * flow.bond * pb.tan()
}

/// |g(k)| scaled by max(1, |k|³B).
pub fn normalized_residual<T: Real>(k: Complex<T>, flow: &FlowParams<T>) -> T {
    let m = k.norm();
    g(k, flow).norm() / (m * m * m * flow.bond).max(T::one())
}

/// Region of the (F, B) plane, decided by the root structure of g.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Two distinct positive real roots k0 < k1.
    I,
    /// No positive real root; the relevant roots form a complex quartet.
    II,
    /// A single positive real root (supercritical, g'(0) > 0).
    III,
    /// Within tolerance of a transition.
    Boundary,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::Boundary => "boundary",
        }
    }
}

/// The positive real pair of Region I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoots<T> {
    pub k0: T,
    pub k1: T,
    pub near_critical: bool,
}

/// Every root family needed by the residue solution.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T> {
    pub region: Region,
    /// Downstream (gravity) pole: real, or in the lower half plane.
    pub k0: Option<Complex<T>>,
    /// Upstream (capillary) pole: real, or in the upper half plane.
    pub k1: Option<Complex<T>>,
    /// Positive imaginary roots β_1 < β_2 < …; β_0 = 0 is implicit.
    pub beta_ladder: Vec<T>,
    /// Largest normalised residual over all reported roots.
    pub residual_bound: T,
    pub near_critical: bool,
}

fn scan_limit<T: Real>(flow: &FlowParams<T>) -> T {
    // For k ≥ 1, tanh(πk) > 0.996, so any root obeys kF² ≥ 0.996(Bk² + 1).
    if flow.bond > T::zero() {
        (flow.f2() / (T::lit(0.99) * flow.bond)).max(T::one())
    } else {
        (T::one() / flow.f2()).max(T::one())
    }
}

/// All positive real zeros of g, in increasing order, plus a coalescence flag.
pub fn positive_real_roots<T: Real>(flow: &FlowParams<T>) -> Result<(Vec<T>, bool)> {
    let step = T::lit(0.1).min(T::one() / (T::lit(10.0) * T::PI() * flow.bond + T::one()));
    let limit = scan_limit(flow) + step;
    let n = (limit / step).ceil().to_usize().unwrap_or(usize::MAX).min(50_000_000);
    let f = |k: T| g_real(k, flow);
    let first = step * T::lit(1e-3);
    let mut xs = Vec::with_capacity(n + 2);
    xs.push(first);
    for i in 1..=n {
        xs.push(step * T::count(i));
    }
    let ys: Vec<T> = xs.iter().map(|&x| f(x)).collect();

    let mut roots = Vec::new();
    let mut near_critical = false;
    for i in 1..xs.len() {
        if ys[i] == T::zero() {
            roots.push(xs[i]);
        } else if ys[i - 1] != T::zero() && ys[i].signum() != ys[i - 1].signum() {
            roots.push(polish_real(bisect(f, xs[i - 1], xs[i])?, flow));
        }
    }
    // Two roots closer than one scan step leave no sign change; probe negative local maxima.
    for i in 1..xs.len().saturating_sub(1) {
        if ys[i] < T::zero() && ys[i] >= ys[i - 1] && ys[i] >= ys[i + 1] {
            let (xm, fm) = golden_max(f, xs[i - 1], xs[i + 1]);
            let scale = (xm * flow.f2()).abs().max(T::one());
            if fm > T::zero() {
                roots.push(bisect(f, xs[i - 1], xm)?);
                roots.push(bisect(f, xm, xs[i + 1])?);
                near_critical = true;
            } else if fm.abs() <= T::eps_times(64.0) * scale {
                roots.push(xm);
                roots.push(xm);
                near_critical = true;
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    for w in roots.windows(2) {
        if (w[1] - w[0]).abs() <= T::lit(COALESCENCE_TOL) * w[1].abs() {
            near_critical = true;
        }
    }
    Ok((roots, near_critical))
}

fn polish_real<T: Real>(k: T, flow: &FlowParams<T>) -> T {
    let d = g_prime_real(k, flow);
    if d == T::zero() {
        return k;
    }
    let k1 = k - g_real(k, flow) / d;
    if g_real(k1, flow).abs() < g_real(k, flow).abs() {
        k1
    } else {
        k
    }
}

/// The Region I pair (k0, k1), or `None` when g has fewer than two positive real zeros.
pub fn real_roots<T: Real>(flow: &FlowParams<T>) -> Result<Option<RealRoots<T>>> {
    let (roots, near_critical) = positive_real_roots(flow)?;
    if roots.len() < 2 {
        return Ok(None);
    }
    Ok(Some(RealRoots { k0: roots[0], k1: roots[1], near_critical }))
}

/// Newton from the quadratic seed (F² ± i√(4B − F⁴))/(2B), which is k ≈ D±/ε.
fn quartet_from_seed<T: Real>(flow: &FlowParams<T>, seed: Complex<T>) -> Result<Complex<T>> {
    let k = newton_complex(|z| g(z, flow), |z| g_prime(z, flow), seed, 200)?;
    let tiny = T::eps_times(1e3) * k.norm().max(T::one());
    if k.re <= tiny || k.im >= -tiny {
        return Err(Error::convergence(format!("Newton left the fourth quadrant ({k})")));
    }
    if normalized_residual(k, flow) > T::lit(ROOT_RESIDUAL_TOL) {
        return Err(Error::convergence(format!("complex root residual too large at {k}")));
    }
    Ok(k)
}

fn quadratic_seed<T: Real>(flow: &FlowParams<T>) -> Complex<T> {
    let two_b = T::lit(2.0) * flow.bond;
    let f2 = flow.f2();
    let disc = f2 * f2 - T::lit(4.0) * flow.bond;
    let im = if disc < T::zero() { (-disc).sqrt() } else { disc.sqrt() + T::lit(0.1) * f2 };
    Complex::new(f2 / two_b, -im / two_b)
}

/// The complex pair of Region II: k0 with Im < 0 and k1 = conj(k0) with Im > 0.
///
/// The remaining roots are −conj(k0) and −conj(k1).
pub fn complex_quartet<T: Real>(flow: &FlowParams<T>) -> Result<(Complex<T>, Complex<T>)> {
    if flow.bond <= T::zero() {
        return Err(Error::domain("a complex quartet requires B > 0"));
    }
    let k0 = quartet_from_seed(flow, quadratic_seed(flow))
        .or_else(|_| quartet_by_continuation(flow))
        .or_else(|_| quartet_by_grid(flow))?;
    Ok((k0, k0.conj()))
}

/// Tracks the root along (sF, s⁴B), which keeps 4B/F⁴ fixed, from a low-Froude start.
fn quartet_by_continuation<T: Real>(flow: &FlowParams<T>) -> Result<Complex<T>> {
    let s0 = (T::lit(0.2).sqrt() / flow.froude).min(T::lit(0.5));
    let steps = 200;
    let at = |s: T| FlowParams { froude: flow.froude * s, bond: flow.bond * s.powi(4), step_height: flow.step_height };
    let start = at(s0);
    let mut k = quartet_from_seed(&start, quadratic_seed(&start))?;
    let mut s_prev = s0;
    for i in 1..=steps {
        let s = s0 * (T::one() / s0).powf(T::count(i) / T::count(steps));
        // Roots scale like s⁻² in the asymptotic regime.
        let seed = k * (s_prev / s).powi(2);
        k = quartet_from_seed(&at(s), seed)?;
        s_prev = s;
    }
    Ok(k)
}

fn quartet_by_grid<T: Real>(flow: &FlowParams<T>) -> Result<Complex<T>> {
    let limit = scan_limit(flow);
    let mut best: Option<Complex<T>> = None;
    for i in 1..=24 {
        for j in 1..=24 {
            let seed = Complex::new(limit * T::count(i) / T::lit(24.0), -limit * T::count(j) / T::lit(24.0));
            if let Ok(k) = quartet_from_seed(flow, seed) {
                if best.is_none_or(|b| k.im.abs() < b.im.abs()) {
                    best = Some(k);
                }
            }
        }
    }
    best.ok_or_else(|| Error::convergence("no complex root found in Region II"))
}

/// Positive imaginary roots β_1 < … < β_{n_max} of g (k = iβ).
pub fn imaginary_ladder<T: Real>(flow: &FlowParams<T>, n_max: usize) -> Result<Vec<T>> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let f = |b: T| ladder_function(b, flow);
    let half = T::lit(0.5);
    let guard = T::lit(BRANCH_GUARD);
    let turning = if flow.bond > T::zero() { Some(T::one() / flow.bond.sqrt()) } else { None };
    let mut out: Vec<T> = Vec::with_capacity(n_max);
    let mut m = 0usize;
    while out.len() < n_max {
        let (lo, hi) = if m == 0 {
            (T::lit(1e-7), half - guard)
        } else {
            (T::count(m) - half + guard, T::count(m) + half - guard)
        };
        let transitional = turning.is_some_and(|t| t > lo - guard && t < hi + guard);
        let found = if transitional || m == 0 {
            all_sign_changes(f, lo, hi, if m == 0 { 2000 } else { 8192 })?
        } else {
            match bisect(f, lo, hi) {
                Ok(r) => vec![r],
                Err(_) => {
                    return Err(Error::convergence(format!(
                        "no imaginary root bracketed in branch {m} (root {})",
                        out.len() + 1
                    )))
                }
            }
        };
        for b in found {
            if out.len() < n_max {
                let k = Complex::new(T::zero(), b);
                if normalized_residual(k, flow) > T::lit(ROOT_RESIDUAL_TOL) {
                    return Err(Error::convergence(format!(
                        "imaginary root {} at beta = {b} misses the residual bound",
                        out.len() + 1
                    )));
                }
                out.push(b);
            }
        }
        m += 1;
        if m > 100 * n_max + 1000 {
            return Err(Error::convergence("imaginary ladder search ran away"));
        }
    }
    Ok(out)
}

/// Region of (F, B), decided from the roots actually found.
pub fn classify<T: Real>(flow: &FlowParams<T>) -> Region {
    let supercritical_gap = flow.f2() - T::PI();
    if supercritical_gap.abs() <= T::lit(COALESCENCE_TOL) * T::PI() {
        return Region::Boundary;
    }
    match positive_real_roots(flow) {
        Ok((roots, near_critical)) => {
            if near_critical {
                Region::Boundary
            } else if roots.len() >= 2 {
                Region::I
            } else if roots.len() == 1 {
                Region::III
            } else {
                Region::II
            }
        }
        Err(_) => Region::Boundary,
    }
}

/// Classifies (F, B) and gathers k0, k1 and the first `n_ladder` imaginary roots.
pub fn roots<T: Real>(flow: &FlowParams<T>, n_ladder: usize) -> Result<RootSet<T>> {
    let region = classify(flow);
    let (k0, k1, near_critical) = match region {
        Region::I | Region::Boundary => match real_roots(flow)? {
            Some(r) => (
                Some(Complex::new(r.k0, T::zero())),
                Some(Complex::new(r.k1, T::zero())),
                r.near_critical || region == Region::Boundary,
            ),
            None => (None, None, true),
        },
        Region::II => {
            let (a, b) = complex_quartet(flow)?;
            (Some(a), Some(b), false)
        }
        Region::III => (None, None, false),
    };
    let beta_ladder = if n_ladder > 0 { imaginary_ladder(flow, n_ladder)? } else { Vec::new() };
    let mut residual_bound = T::zero();
    for k in k0.iter().chain(k1.iter()) {
        residual_bound = residual_bound.max(normalized_residual(*k, flow));
    }
    for &b in &beta_ladder {
        residual_bound = residual_bound.max(normalized_residual(Complex::new(T::zero(), b), flow));
    }
    Ok(RootSet { region, k0, k1, beta_ladder, residual_bound, near_critical })
}

/// A point (B, F_m, k*) with g(k*) = g'(k*) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint<T> {
    pub bond: T,
    pub froude: T,
    pub k_star: T,
    pub residual_g: T,
    pub residual_g_prime: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCurve<T> {
    pub points: Vec<CriticalPoint<T>>,
    pub warnings: Vec<String>,
}

/// Largest Bond number on the coalescence curve; there k* → 0 and F² → π.
pub fn critical_bond_limit<T: Real>() -> T {
    T::PI() * T::PI() / T::lit(3.0)
}

fn finish_point<T: Real>(bond: T, k: T, f2: T) -> CriticalPoint<T> {
    let flow = FlowParams { froude: f2.sqrt(), bond, step_height: T::zero() };
    CriticalPoint {
        bond,
        froude: flow.froude,
        k_star: k,
        residual_g: g_real(k, &flow).abs(),
        residual_g_prime: g_prime_real(k, &flow).abs(),
    }
}

/// Solves g = g' = 0 at fixed B by eliminating F²: tanh(πk)(1 − Bk²) = πk sech²(πk)(Bk² + 1).
fn critical_by_reduction<T: Real>(bond: T) -> Result<(T, T)> {
    let h = |k: T| {
        let pk = T::PI() * k;
        pk.tanh() * (T::one() - bond * k * k) - pk * special::sech2_real(pk) * (bond * k * k + T::one())
    };
    let hi = T::lit(2.0) / bond.sqrt() + T::one();
    let lo = (T::lit(1e-3) / (T::one() + bond.sqrt())).min(hi / T::lit(4.0));
    let roots = all_sign_changes(h, lo, hi, 4000)?;
    let k = *roots.first().ok_or_else(|| Error::convergence(format!("no coalescence point at B = {bond}")))?;
    let f2 = (T::PI() * k).tanh() * (bond * k * k + T::one()) / k;
    Ok((k, f2))
}

/// Newton on (k, s = F²) for r1 = ks − tanh(πk)(Bk² + 1), r2 = g'(k).
fn critical_newton<T: Real>(bond: T, mut k: T, mut s: T) -> Result<(T, T)> {
    for _ in 0..60 {
        let flow = FlowParams { froude: s.sqrt(), bond, step_height: T::zero() };
        let r1 = g_real(k, &flow);
        let r2 = g_prime_real(k, &flow);
        // ∂r1/∂k = r2, ∂r1/∂s = k, ∂r2/∂k = g''(k), ∂r2/∂s = 1.
        let a = r2;
        let b = k;
        let c = g_second_real(k, &flow);
        let d = T::one();
        let det = a * d - b * c;
        if det == T::zero() || !det.is_finite() {
            return Err(Error::convergence("singular Jacobian on the critical curve"));
        }
        let dk = (r1 * d - b * r2) / det;
        let ds = (a * r2 - c * r1) / det;
        k = k - dk;
        s = s - ds;
        if !(k > T::zero() && s > T::zero()) {
            return Err(Error::convergence("critical-curve Newton left the positive quadrant"));
        }
        if dk.abs() <= T::eps_times(16.0) * k && ds.abs() <= T::eps_times(16.0) * s {
            return Ok((k, s));
        }
    }
    Err(Error::convergence("critical-curve Newton did not converge"))
}

/// F_m(B) on `n_points` evenly spaced Bond numbers, by Newton with continuation in B.
pub fn critical_curve<T: Real>(bond_range: (T, T), n_points: usize) -> Result<CriticalCurve<T>> {
    let (b0, b1) = bond_range;
    let limit = critical_bond_limit::<T>();
    if !(b0 > T::zero() && b1 < limit && b0 <= b1) || n_points == 0 {
        return Err(Error::domain(format!(
            "bond range must satisfy 0 < start <= end < {limit} with at least one point"
        )));
    }
    let tol = T::lit(1e-10);
    let mut points = Vec::with_capacity(n_points);
    let mut warnings = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for i in 0..n_points {
        let bond = if n_points == 1 { b0 } else { b0 + (b1 - b0) * T::count(i) / T::count(n_points - 1) };
        let attempt = prev
            .ok_or_else(|| Error::convergence("no seed"))
            .and_then(|(k, s)| critical_newton(bond, k, s))
            .or_else(|_| critical_by_reduction(bond).and_then(|(k, s)| critical_newton(bond, k, s).or(Ok((k, s)))));
        match attempt {
            Ok((k, s)) => {
                let p = finish_point(bond, k, s);
                if p.residual_g > tol || p.residual_g_prime > tol {
                    warnings.push(format!("continuation lost at B = {bond}; curve truncated"));
                    break;
                }
                points.push(p);
                prev = Some((k, s));
            }
            Err(e) => {
                warnings.push(format!("continuation lost at B = {bond} ({e}); curve truncated"));
                break;
            }
        }
    }
    if points.is_empty() {
        return Err(Error::convergence(warnings.join("; ")));
    }
    Ok(CriticalCurve { points, warnings })
}

/// The coalescence Bond number at a given Froude number.
///
/// Eliminating B from g = g' = 0 leaves 2tanh²(πk) = F²k tanh(πk) + πF²k² sech²(πk).
pub fn critical_point_at_froude<T: Real>(froude: T) -> Result<CriticalPoint<T>> {
    let f2 = froude * froude;
    if !(froude > T::zero() && f2 < T::PI()) {
        return Err(Error::domain("the coalescence curve needs 0 < F² < π"));
    }
    let p = |k: T| {
        let pk = T::PI() * k;
        let th = pk.tanh();
        T::lit(2.0) * th * th - f2 * k * th - T::PI() * f2 * k * k * special::sech2_real(pk)
    };
    let hi = T::lit(4.0) / f2 + T::one();
    let k = bisect(p, T::lit(1e-3), hi)?;
    let bond = (k * f2 / (T::PI() * k).tanh() - T::one()) / (k * k);
    let (k, s) = critical_newton(bond, k, f2).unwrap_or((k, f2));
    let mut point = finish_point(bond, k, s);
    point.froude = froude;
    let flow = FlowParams { froude, bond, step_height: T::zero() };
    point.residual_g = g_real(k, &flow).abs();
    point.residual_g_prime = g_prime_real(k, &flow).abs();
    Ok(point)
}

/// Signed logarithm of the offset x − D between a scaled real root x = εk and its limit D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDeviation<T> {
    pub sign: T,
    pub ln_abs: T,
}

/// Offset of the real root εk± from D± at Δ > 0, solved without cancellation.
///
/// Writing x = D + d, the relation βx = tanh(πx/ε)(βτx² + 1) becomes
/// d(h'(D) + βτd) = (1 − tanh(πx/ε))(βτx² + 1) with h(x) = βτx² − βx + 1,
/// and 1 − tanh y = 2e^{−2y}/(1 + e^{−2y}) is evaluated in logarithms.
pub fn low_froude_deviation<T: Real>(
    consts: &crate::params::BranchedConstants<T>,
    epsilon: T,
    family: crate::params::Family,
) -> Result<LogDeviation<T>> {
    if consts.discriminant() <= T::zero() || consts.critical {
        return Err(Error::domain("real low-Froude roots need a positive discriminant"));
    }
    if !(epsilon > T::zero()) {
        return Err(Error::domain("epsilon must be positive"));
    }
    let d = consts.d(family)?.re;
    let (beta, tau) = (consts.beta, consts.tau);
    let slope = beta * (T::lit(2.0) * tau * d - T::one());
    let mut dev = T::zero();
    let mut out = LogDeviation { sign: T::one(), ln_abs: T::neg_infinity() };
    for _ in 0..50 {
        let x = d + dev;
        let y = T::PI() * x / epsilon;
        let e2 = (T::lit(-2.0) * y).exp();
        let ln_t = T::LN_2() - T::lit(2.0) * y - e2.ln_1p();
        let denom = slope + beta * tau * dev;
        let ln_abs = ln_t + (beta * tau * x * x + T::one()).ln() - denom.abs().ln();
        let sign = denom.signum();
        let next = sign * ln_abs.exp();
        let done = (ln_abs - out.ln_abs).abs() <= T::eps_times(16.0) * ln_abs.abs().max(T::one());
        out = LogDeviation { sign, ln_abs };
        dev = next;
        if done {
            return Ok(out);
        }
    }
    Err(Error::convergence("low-Froude deviation iteration did not settle"))
}
