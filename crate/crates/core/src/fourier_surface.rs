//! The linearised surface θ(φ) assembled from residues of the Fourier
//! integrand, its elevation, the low-Froude amplitude and an independent
//! check against the governing convolution equation.

use num_complex::Complex;

use crate::dispersion::{g_prime, g_prime_imag, imaginary_ladder, RootSet};
use crate::error::{Error, Result};
use crate::params::{BranchedConstants, Family, FlowParams, ScaledParams};
use crate::quadrature::{cumulative_trapezoid, simpson};
use crate::scalar::Real;
use crate::special;

/// Ladder terms below this size (relative to F²) are dropped.
const LADDER_CUTOFF: f64 = 1e-14;

/// Hard cap on the number of imaginary roots summed.
pub const MAX_LADDER_TERMS: usize = 200_000;

/// Imaginary-axis residues: θ_ladder(φ) = −F²δ Σ c_n e^{−β_n|φ|}.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSeries<T> {
    pub betas: Vec<T>,
    /// c_n = β_n / (cos(πβ_n) g'(iβ_n)).
    pub coeffs: Vec<T>,
    f2: T,
    step: T,
}

impl<T: Real> LadderSeries<T> {
    pub fn new(flow: &FlowParams<T>, betas: &[T]) -> Self {
        let coeffs = betas.iter().map(|&b| b / ((T::PI() * b).cos() * g_prime_imag(b, flow))).collect();
        LadderSeries { betas: betas.to_vec(), coeffs, f2: flow.f2(), step: flow.step_height }
    }

    /// Finds enough imaginary roots that the first omitted term at |φ| = `phi_min` is negligible.
    pub fn for_resolution(flow: &FlowParams<T>, phi_min: T) -> Result<Self> {
        let phi_min = phi_min.abs();
        if !(phi_min > T::zero()) {
            return Err(Error::domain("ladder resolution needs a nonzero |phi|"));
        }
        let target = (flow.f2().max(T::eps_times(1.0)) / T::lit(LADDER_CUTOFF)).ln();
        let mut n = ((target / phi_min).ceil().to_usize().unwrap_or(MAX_LADDER_TERMS)).max(8);
        loop {
            let guess = (target + T::count(n).ln()) / phi_min;
            let next = guess.ceil().to_usize().unwrap_or(MAX_LADDER_TERMS).max(8);
            if next <= n || next >= MAX_LADDER_TERMS {
                n = next.min(MAX_LADDER_TERMS);
                break;
            }
            n = next;
        }
        let betas = imaginary_ladder(flow, n + 1)?;
        Ok(Self::new(flow, &betas))
    }

    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// Ladder contribution at φ ≠ 0, using at most `n` terms.
    pub fn sum_n(&self, phi: T, n: usize) -> T {
        let a = phi.abs();
        let cutoff = T::lit(LADDER_CUTOFF) * T::lit(1e-3);
        let mut acc = T::zero();
        for (&b, &c) in self.betas.iter().zip(&self.coeffs).take(n) {
            let e = (-b * a).exp();
            acc = acc + c * e;
            if e * b < cutoff {
                break;
            }
        }
        -self.f2 * self.step * acc
    }

    pub fn sum(&self, phi: T) -> T {
        self.sum_n(phi, self.betas.len())
    }

    /// Value at φ = 0, where the series only converges conditionally; the
    /// alternating tail is tamed by averaging the last two partial sums.
    pub fn sum_at_origin(&self) -> T {
        let n = self.coeffs.len();
        if n == 0 {
            return T::zero();
        }
        let total = self.coeffs.iter().fold(T::zero(), |a, &c| a + c);
        let before = total - self.coeffs[n - 1];
        -self.f2 * self.step * (total + before) * T::lit(0.5)
    }

    /// Bound on the omitted terms: F²|δ| C e^{−β_N|φ|}/(1 − e^{−|φ|}).
    pub fn tail_bound(&self, phi: T, n: usize) -> T {
        let n = n.min(self.betas.len());
        if n == 0 {
            return T::infinity();
        }
        let c = self.coeffs.iter().take(n).fold(T::zero(), |m, &v| m.max(v.abs()));
        let a = phi.abs();
        self.f2 * self.step.abs() * c * (-self.betas[n - 1] * a).exp() / (T::one() - (-a).exp())
    }
}

/// Oscillatory residue contribution: the pole k0 downstream (φ > 0), k1 upstream.
///
/// With G(k) = k e^{−ikφ}/cosh(πk) this is ±2F²δ Im[G(k*)/g'(k*)].
pub fn wave_part<T: Real>(phi: T, flow: &FlowParams<T>, k0: Complex<T>, k1: Complex<T>) -> T {
    let (k, sign) = if phi > T::zero() { (k0, T::one()) } else { (k1, -T::one()) };
    let expo = Complex::new(T::zero(), -phi) * k - special::ln_cosh(k * T::PI());
    let ratio = k / g_prime(k, flow) * expo.exp();
    sign * T::lit(2.0) * flow.f2() * flow.step_height * ratio.im
}

/// One sample of the residue solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSample<T> {
    pub theta: T,
    pub wave_part: T,
    pub ladder_part: T,
    pub terms_used: usize,
    pub tail_bound: T,
}

fn wave_roots<T: Real>(roots: &RootSet<T>) -> Result<(Complex<T>, Complex<T>)> {
    match (roots.k0, roots.k1) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::domain(format!(
            "the residue solution needs k0 and k1; region {} has none",
            roots.region.as_str()
        ))),
    }
}

/// θ(φ) = wave part + ladder part, to first order in the step height.
pub fn theta_residue<T: Real>(
    phi: T,
    flow: &FlowParams<T>,
    roots: &RootSet<T>,
    n_ladder: usize,
) -> Result<ThetaSample<T>> {
    if phi == T::zero() || !phi.is_finite() {
        return Err(Error::domain("phi = 0 lies between the upstream and downstream formulas"));
    }
    let (k0, k1) = wave_roots(roots)?;
    let betas = if roots.beta_ladder.len() >= n_ladder {
        roots.beta_ladder[..n_ladder].to_vec()
    } else {
        imaginary_ladder(flow, n_ladder.max(1))?
    };
    let ladder = LadderSeries::new(flow, &betas[..n_ladder.min(betas.len())]);
    let w = wave_part(phi, flow, k0, k1);
    let l = ladder.sum(phi);
    Ok(ThetaSample {
        theta: w + l,
        wave_part: w,
        ladder_part: l,
        terms_used: ladder.len(),
        tail_bound: ladder.tail_bound(phi, ladder.len()),
    })
}

/// Sampled surface with its residue provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceProfile<T> {
    pub phi_grid: Vec<T>,
    pub theta: Vec<T>,
    pub y: Vec<T>,
    pub wave_part: Vec<T>,
    pub ladder_part: Vec<T>,
    /// Number of imaginary roots summed.
    pub terms_used: usize,
    /// Tail bound at the grid point closest to φ = 0.
    pub tail_bound: T,
    pub k0: Complex<T>,
    pub k1: Complex<T>,
    pub step_height: T,
    /// Grid index of φ = 0, whose value averages the two one-sided formulas.
    pub origin_index: Option<usize>,
}

impl<T: Real> SurfaceProfile<T> {
    /// Evaluates θ on `phi_grid`, sizing the ladder for the smallest nonzero |φ|.
    pub fn build(flow: &FlowParams<T>, roots: &RootSet<T>, phi_grid: Vec<T>) -> Result<Self> {
        let (k0, k1) = wave_roots(roots)?;
        check_monotone(&phi_grid)?;
        let phi_min = phi_grid.iter().filter(|p| **p != T::zero()).fold(T::infinity(), |m, &p| m.min(p.abs()));
        let ladder = if phi_min.is_finite() {
            LadderSeries::for_resolution(flow, phi_min)?
        } else {
            LadderSeries::for_resolution(flow, T::lit(0.01))?
        };
        let mut theta = Vec::with_capacity(phi_grid.len());
        let mut wave = Vec::with_capacity(phi_grid.len());
        let mut lad = Vec::with_capacity(phi_grid.len());
        let mut origin_index = None;
        for (i, &phi) in phi_grid.iter().enumerate() {
            let (w, l) = if phi == T::zero() {
                origin_index = Some(i);
                let tiny = T::min_positive_value();
                let w = (wave_part(tiny, flow, k0, k1) + wave_part(-tiny, flow, k0, k1)) * T::lit(0.5);
                (w, ladder.sum_at_origin())
            } else {
                (wave_part(phi, flow, k0, k1), ladder.sum(phi))
            };
            wave.push(w);
            lad.push(l);
            theta.push(w + l);
        }
        let y = elevation(&phi_grid, &theta)?;
        let tail_bound = if phi_min.is_finite() { ladder.tail_bound(phi_min, ladder.len()) } else { T::zero() };
        Ok(SurfaceProfile {
            phi_grid,
            theta,
            y,
            wave_part: wave,
            ladder_part: lad,
            terms_used: ladder.len(),
            tail_bound,
            k0,
            k1,
            step_height: flow.step_height,
            origin_index,
        })
    }
}

fn check_monotone<T: Real>(grid: &[T]) -> Result<()> {
    if grid.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("grid contains non-finite values"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("grid must be strictly increasing"));
    }
    Ok(())
}

/// y = ∫θ dφ by cumulative trapezoid, shifted so the upstream quarter of the grid has zero mean.
pub fn elevation<T: Real>(phi: &[T], theta: &[T]) -> Result<Vec<T>> {
    if phi.len() != theta.len() {
        return Err(Error::domain("grid and samples differ in length"));
    }
    check_monotone(phi)?;
    if phi.is_empty() {
        return Ok(Vec::new());
    }
    let mut y = cumulative_trapezoid(phi, theta);
    let window = (phi.len() / 4).max(1);
    let mean = y[..window].iter().fold(T::zero(), |a, &v| a + v) / T::count(window);
    for v in &mut y {
        *v = *v - mean;
    }
    Ok(y)
}

/// Envelope of one wave family in the low-Froude limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveAmplitude<T> {
    pub family: Family,
    pub amplitude: T,
    pub carrier_wavenumber: T,
    pub decay_rate: T,
    /// Offset in θ ≈ amplitude · sin(carrier·φ + phase) on the family's side.
    pub phase: T,
}

/// (4|δ|/ε)|D/√Δ| exp[−πRe(D)/ε − |Im(D)φ|/ε] for the chosen family.
pub fn fourier_amplitude<T: Real>(
    scaled: &ScaledParams<T>,
    consts: &BranchedConstants<T>,
    phi: T,
    family: Family,
) -> Result<WaveAmplitude<T>> {
    consts.require_noncritical()?;
    let d = consts.d(family)?;
    let eps = scaled.epsilon;
    let delta = scaled.step_height();
    let ratio = (d / consts.sqrt_delta).norm();
    let exponent = -(T::PI() * d.re + (d.im * phi).abs()) / eps;
    let amplitude = T::lit(4.0) * delta.abs() / eps * ratio * exponent.exp();

    // Pole seen by the residue formula: lower half plane downstream, upper upstream.
    let (k, side) = match family {
        Family::Gravity => (Complex::new(d.re, -d.im.abs()), T::one()),
        Family::Capillary => (Complex::new(d.re, d.im.abs()), -T::one()),
    };
    let denom = Complex::new(T::one(), T::zero()) - k * (T::lit(2.0) * consts.tau);
    let lead = side * delta.signum();
    let arg_m = (if lead < T::zero() { T::PI() } else { T::zero() }) + k.arg() - denom.arg() - T::PI() * k.im / eps;
    let phase = wrap_angle(T::PI() - arg_m);
    Ok(WaveAmplitude { family, amplitude, carrier_wavenumber: d.re / eps, decay_rate: d.im.abs() / eps, phase })
}

fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut r = a % two_pi;
    if r > T::PI() {
        r = r - two_pi;
    } else if r <= -T::PI() {
        r = r + two_pi;
    }
    r
}

/// Residual of the convolution form of the linearised Bernoulli condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport<T> {
    pub max_residual: T,
    pub max_theta: T,
    /// max_residual / max|θ| (zero when θ vanishes identically).
    pub relative: T,
    pub worst_phi: T,
    pub points_checked: usize,
}

/// Evaluation window for the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions<T> {
    /// Points with |φ| below this are skipped.
    pub exclusion: T,
    /// Distance kept from the grid ends so the kernels have decayed.
    pub margin: T,
}

impl<T: Real> Default for OracleOptions<T> {
    fn default() -> Self {
        OracleOptions { exclusion: T::lit(0.3), margin: T::lit(18.0) }
    }
}

/// Eighth-order central differences.
const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

/// max |−(F²/π) d/dφ[θ∗k₊ − δk₋] − Bθ″ + θ| over the interior of the grid.
///
/// Uses k₊ = k₋ + csch, so d/dφ(θ∗k₊) = θ∗k₋′ + PV(θ′∗csch); the principal value is
/// taken with the singular part θ′(φ)csch(φ − s) integrated in closed form.
pub fn governing_residual_oracle<T: Real>(
    profile: &SurfaceProfile<T>,
    flow: &FlowParams<T>,
) -> Result<OracleReport<T>> {
    governing_residual_oracle_with(profile, flow, OracleOptions::default())
}

pub fn governing_residual_oracle_with<T: Real>(
    profile: &SurfaceProfile<T>,
    flow: &FlowParams<T>,
    opts: OracleOptions<T>,
) -> Result<OracleReport<T>> {
    let phi = &profile.phi_grid;
    let theta = &profile.theta;
    let m = phi.len();
    if m < 32 {
        return Err(Error::domain("oracle grid too small"));
    }
    let h = (phi[m - 1] - phi[0]) / T::count(m - 1);
    for w in phi.windows(2) {
        if ((w[1] - w[0]) - h).abs() > T::lit(1e-9) * h.max(T::one()) {
            return Err(Error::domain("oracle grid must be uniform"));
        }
    }
    let kmax = profile.k0.re.abs().max(profile.k1.re.abs());
    if kmax > T::zero() && h > T::lit(2.0) * T::PI() / kmax / T::lit(20.0) {
        return Err(Error::domain(format!(
            "grid spacing {h} resolves the shortest wavelength by fewer than 20 points"
        )));
    }
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let d1: Vec<T> = D1.iter().map(|&c| T::lit(c)).collect();
    let d2: Vec<T> = D2.iter().map(|&c| T::lit(c)).collect();
    let mut dtheta = vec![T::zero(); m];
    let mut ddtheta = vec![T::zero(); m];
    for i in 4..m - 4 {
        let mut a = T::zero();
        let mut b = d2[0] * theta[i];
        for j in 1..=4 {
            a = a + d1[j - 1] * (theta[i + j] - theta[i - j]);
            b = b + d2[j] * (theta[i + j] + theta[i - j]);
        }
        dtheta[i] = a / h;
        ddtheta[i] = b / (h * h);
    }
    let (lo, hi) = (4, m - 5);
    let a_end = phi[lo] - h * half;
    let b_end = phi[hi] + h * half;
    let km_prime = |s: T| {
        let c = special::sech2_real(s * half);
        c * quarter
    };
    let ln_tanh_half = |s: T| special::ln_abs_tanh_half(s);

    let f2 = flow.f2();
    let delta = profile.step_height;
    let max_theta = theta.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let mut worst = T::zero();
    let mut worst_phi = T::zero();
    let mut count = 0;
    for i in lo..=hi {
        let p = phi[i];
        if p.abs() < opts.exclusion || p < phi[0] + opts.margin || p > phi[m - 1] - opts.margin {
            continue;
        }
        let mut conv_smooth = T::zero();
        let mut conv_pv = T::zero();
        for j in lo..=hi {
            let s = p - phi[j];
            conv_smooth = conv_smooth + theta[j] * km_prime(s);
            if j == i {
                conv_pv = conv_pv - ddtheta[i];
            } else {
                conv_pv = conv_pv + (dtheta[j] - dtheta[i]) / s.sinh();
            }
        }
        conv_smooth = conv_smooth * h;
        // PV ∫ csch(φ − s) ds over [a, b] = ln|tanh((φ − a)/2)| − ln|tanh((φ − b)/2)|.
        let singular = dtheta[i] * (ln_tanh_half(p - a_end) - ln_tanh_half(p - b_end));
        conv_pv = conv_pv * h + singular;
        let forcing = delta * km_prime(p);
        let r = -(f2 / T::PI()) * (conv_smooth + conv_pv - forcing) - flow.bond * ddtheta[i] + theta[i];
        count += 1;
        if r.abs() > worst {
            worst = r.abs();
            worst_phi = p;
        }
    }
    if count == 0 {
        return Err(Error::domain("oracle window is empty; widen the grid"));
    }
    let relative = if max_theta > T::zero() { worst / max_theta } else { T::zero() };
    Ok(OracleReport { max_residual: worst, max_theta, relative, worst_phi, points_checked: count })
}

/// Uniform grid on [−half_span, half_span] whose nodes straddle φ = 0.
pub fn offset_grid<T: Real>(half_span: T, spacing: T) -> Result<Vec<T>> {
    if !(half_span > T::zero() && spacing > T::zero()) {
        return Err(Error::domain("grid span and spacing must be positive"));
    }
    let n = (T::lit(2.0) * half_span / spacing).round().to_usize().unwrap_or(0);
    if n == 0 || n > 10_000_000 {
        return Err(Error::domain("grid size out of range"));
    }
    let h = T::lit(2.0) * half_span / T::count(n);
    Ok((0..n).map(|j| -half_span + h * (T::count(j) + T::lit(0.5))).collect())
}

/// Fourier transforms of the kernels k± at a real wavenumber, numeric against closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTransforms<T> {
    pub k: T,
    pub plus: Complex<T>,
    pub minus: Complex<T>,
    pub plus_exact: Complex<T>,
    pub minus_exact: Complex<T>,
}

impl<T: Real> KernelTransforms<T> {
    pub fn plus_error(&self) -> T {
        (self.plus - self.plus_exact).norm() / self.plus_exact.norm()
    }

    pub fn minus_error(&self) -> T {
        (self.minus - self.minus_exact).norm() / self.minus_exact.norm()
    }
}

/// 𝓕[k±](k) = ∫k±(σ)e^{−ikσ}dσ for k ≠ 0, with the δ-function part of the constant ½ dropped.
///
/// The odd part ½coth(σ/2) (principal value) or ½tanh(σ/2) is split into the sign
/// function, whose transform is −2i/k, plus a remainder decaying like e^{−σ}.
pub fn kernel_transform_check<T: Real>(k: T) -> Result<KernelTransforms<T>> {
    if k == T::zero() || !k.is_finite() {
        return Err(Error::domain("kernel transforms need a finite nonzero wavenumber"));
    }
    let upper = T::lit(50.0);
    let panels = 40_000;
    let two = T::lit(2.0);
    // coth(σ/2) − 1 = 2/(e^σ − 1); tanh(σ/2) − 1 = −2/(e^σ + 1).
    let plus_rem = simpson(
        |s: T| if s == T::zero() { two * k } else { two * (k * s).sin() / s.exp_m1() },
        T::zero(),
        upper,
        panels,
    );
    let minus_rem = simpson(|s: T| -two * (k * s).sin() / (s.exp() + T::one()), T::zero(), upper, panels);
    let plus = Complex::new(T::zero(), -(T::one() / k + plus_rem));
    let minus = Complex::new(T::zero(), -(T::one() / k + minus_rem));
    let pk = T::PI() * k;
    Ok(KernelTransforms {
        k,
        plus,
        minus,
        plus_exact: Complex::new(T::zero(), -T::PI() / pk.tanh()),
        minus_exact: Complex::new(T::zero(), -T::PI() / pk.sinh()),
    })
}
