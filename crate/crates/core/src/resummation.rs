//! The bridge between the imaginary-axis residues and the algebraic
//! low-Froude solution: β_n = n + d, the truncated alternating sum and the
//! reconstruction of θ ≈ −(βεδ/π) ζ/(ζ+1)² from 𝒩 ladder terms.

use crate::dispersion::{g_prime_imag, imaginary_ladder, ladder_function};
use crate::error::{Error, Result};
use crate::params::{FlowParams, ScaledParams};
use crate::scalar::Real;
use crate::solve::all_sign_changes;

/// Largest 𝒩 used in a reconstruction.
pub const MAX_TRUNCATION: usize = 10_000;

const BRANCH_GUARD: f64 = 1e-9;

/// β_n = n + d for the n-th imaginary root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderExpansion<T> {
    pub n: usize,
    pub d: T,
    /// Leading-order estimate F²n/π = βεn/π.
    pub order_estimate: T,
    /// πd + (πd)³/3 − F²(n+d)[1 + B(n+d)²], which is O(d⁵, B²).
    pub series_residual: T,
}

/// Solves tan(πβ)(1 − Bβ²) = βF² on the branch through β = n.
pub fn ladder_correction<T: Real>(n: usize, scaled: &ScaledParams<T>) -> Result<LadderExpansion<T>> {
    if n == 0 {
        return Err(Error::domain("the ladder index starts at n = 1"));
    }
    let flow = scaled.unscale();
    let nf = T::count(n);
    let half = T::lit(0.5);
    let guard = T::lit(BRANCH_GUARD);
    let f = |b: T| ladder_function(b, &flow);
    let candidates = all_sign_changes(f, nf - half + guard, nf + half - guard, 4096)?;
    let beta_n = candidates
        .into_iter()
        .filter(|&b| f(b).abs() <= T::lit(1e-8) * (T::one() + b * flow.f2()))
        .min_by(|a, b| (*a - nf).abs().partial_cmp(&(*b - nf).abs()).expect("finite roots"))
        .ok_or_else(|| Error::convergence(format!("no imaginary root near beta = {n}")))?;
    let d = beta_n - nf;
    if d.abs() >= half - guard {
        return Err(Error::convergence(format!("root for n = {n} escaped its branch (d = {d})")));
    }
    let pd = T::PI() * d;
    let f2 = flow.f2();
    let series_residual = pd + pd * pd * pd / T::lit(3.0) - f2 * beta_n * (T::one() + flow.bond * beta_n * beta_n);
    Ok(LadderExpansion { n, d, order_estimate: f2 * nf / T::PI(), series_residual })
}

/// Σ_{n=0}^{N} (−1)^{n+1} n ζⁿ by direct summation and in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum<T> {
    pub n: usize,
    pub zeta: T,
    pub partial: T,
    /// ζ/(ζ+1)² {1 − (−ζ)^N − N(−ζ)^N − (−1)^N N ζ^{N+1}}.
    pub closed: T,
}

impl<T: Real> TruncatedSum<T> {
    /// Size of the closed form's pieces, ζ/(ζ+1)² {1 + (N+1)ζ^N + Nζ^{N+1}}.
    ///
    /// The partial sums oscillate through zero, so gaps are measured against this.
    pub fn scale(&self) -> T {
        let nf = T::count(self.n);
        let zn = self.zeta.powi(self.n as i32);
        let z1 = self.zeta + T::one();
        self.zeta / (z1 * z1) * (T::one() + (nf + T::one()) * zn + nf * zn * self.zeta)
    }

    pub fn relative_gap(&self) -> T {
        let scale = self.scale();
        if scale == T::zero() {
            (self.partial - self.closed).abs()
        } else {
            (self.partial - self.closed).abs() / scale
        }
    }
}

pub fn truncated_sum_identity<T: Real>(zeta: T, n: usize) -> Result<TruncatedSum<T>> {
    if !(zeta >= T::zero() && zeta < T::one()) {
        return Err(Error::domain(format!("zeta must lie in [0, 1), got {zeta}")));
    }
    // Odd and even terms are summed in pairs, ζ^{2m−1}[2m(1 − ζ) − 1], since the
    // individual terms reach ~1/(e ln(1/ζ)) while the sum stays O(1).
    let one_minus = T::one() - zeta;
    let mut partial = T::zero();
    for m in 1..=n / 2 {
        let two_m = T::count(2 * m);
        partial = partial + zeta.powi(2 * m as i32 - 1) * (two_m * one_minus - T::one());
    }
    if n % 2 == 1 {
        partial = partial + T::count(n) * zeta.powi(n as i32);
    }
    let nf = T::count(n);
    let neg_pow = if n.is_multiple_of(2) { zeta.powi(n as i32) } else { -zeta.powi(n as i32) };
    let sign_n = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    let braces = T::one() - neg_pow - nf * neg_pow - sign_n * nf * zeta.powi(n as i32 + 1);
    let closed = zeta / ((zeta + T::one()) * (zeta + T::one())) * braces;
    Ok(TruncatedSum { n, zeta, partial, closed })
}

/// Which imaginary roots feed the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderChoice {
    /// Roots of the full transcendental equation.
    Exact,
    /// β_n replaced by n throughout the residue.
    Integer,
}

impl LadderChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            LadderChoice::Exact => "exact",
            LadderChoice::Integer => "integer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionPoint<T> {
    pub zeta: T,
    pub n_used: usize,
    pub value: T,
    pub target: T,
    /// |value − target|.
    pub deviation: T,
    pub capped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<T> {
    pub epsilon: T,
    pub choice: LadderChoice,
    pub points: Vec<ReconstructionPoint<T>>,
    pub warnings: Vec<String>,
}

impl<T: Real> Reconstruction<T> {
    pub fn max_deviation(&self) -> T {
        self.points.iter().fold(T::zero(), |m, p| m.max(p.deviation))
    }

    /// Largest deviation relative to |target|, skipping points where the target vanishes.
    pub fn max_relative_deviation(&self) -> T {
        self.points.iter().filter(|p| p.target != T::zero()).fold(T::zero(), |m, p| m.max(p.deviation / p.target.abs()))
    }
}

/// 𝒩 = ⌈2 ln ε / ln ζ⌉, which leaves a truncation tail of order ε² ln ε.
pub fn truncation_index<T: Real>(epsilon: T, zeta: T) -> (usize, bool) {
    let raw = (T::lit(2.0) * epsilon.ln() / zeta.ln()).ceil();
    match raw.to_usize() {
        Some(n) if n <= MAX_TRUNCATION => (n.max(1), false),
        _ => (MAX_TRUNCATION, true),
    }
}

fn integer_coefficient<T: Real>(n: usize, flow: &FlowParams<T>) -> T {
    let b = T::count(n);
    let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    b / (sign * g_prime_imag(b, flow))
}

/// Sums 𝒩 upstream ladder residues at ζ = e^φ and compares with −(βεδ/π) ζ/(ζ+1)².
pub fn reconstruct_leading_order<T: Real>(
    scaled: &ScaledParams<T>,
    zeta_grid: &[T],
    choice: LadderChoice,
) -> Result<Reconstruction<T>> {
    if let Some(z) = zeta_grid.iter().find(|z| !(**z > T::zero() && **z < T::one())) {
        return Err(Error::domain(format!("zeta must lie in (0, 1), got {z}")));
    }
    let flow = scaled.unscale();
    let f2 = flow.f2();
    let step = flow.step_height;
    let mut warnings = Vec::new();
    let plan: Vec<(usize, bool)> = zeta_grid.iter().map(|&z| truncation_index(scaled.epsilon, z)).collect();
    let n_max = plan.iter().map(|p| p.0).max().unwrap_or(0);
    let (betas, coeffs): (Vec<T>, Vec<T>) = match choice {
        LadderChoice::Exact if n_max > 0 => {
            let betas = imaginary_ladder(&flow, n_max)?;
            let coeffs = betas.iter().map(|&b| b / ((T::PI() * b).cos() * g_prime_imag(b, &flow))).collect();
            (betas, coeffs)
        }
        LadderChoice::Exact => (Vec::new(), Vec::new()),
        LadderChoice::Integer => (1..=n_max).map(|n| (T::count(n), integer_coefficient(n, &flow))).unzip(),
    };
    let mut points = Vec::with_capacity(zeta_grid.len());
    for (&zeta, &(n_used, capped)) in zeta_grid.iter().zip(&plan) {
        if capped {
            warnings.push(format!("truncation capped at {MAX_TRUNCATION} terms for zeta = {zeta}"));
        }
        let ln_z = zeta.ln();
        let sum = betas.iter().zip(&coeffs).take(n_used).fold(T::zero(), |acc, (&b, &c)| acc + c * (b * ln_z).exp());
        let value = -f2 * step * sum;
        let target = -f2 * step / T::PI() * zeta / ((zeta + T::one()) * (zeta + T::one()));
        points.push(ReconstructionPoint { zeta, n_used, value, target, deviation: (value - target).abs(), capped });
    }
    Ok(Reconstruction { epsilon: scaled.epsilon, choice, points, warnings })
}

/// Least-squares slope of ln y against ln x.
pub fn log_log_slope<T: Real>(samples: &[(T, T)]) -> Result<T> {
    if samples.len() < 2 {
        return Err(Error::domain("a slope needs at least two samples"));
    }
    if samples.iter().any(|&(x, y)| !(x > T::zero() && y > T::zero())) {
        return Err(Error::domain("log-log slope needs positive samples"));
    }
    let m = T::count(samples.len());
    let (sx, sy) = samples.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = samples.iter().fold((T::zero(), T::zero()), |(n, d), &(x, y)| {
        let dx = x.ln() - mx;
        (n + dx * (y.ln() - my), d + dx * dx)
    });
    if den == T::zero() {
        return Err(Error::domain("log-log slope needs distinct abscissae"));
    }
    Ok(num / den)
}
