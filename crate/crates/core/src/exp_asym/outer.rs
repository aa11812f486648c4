//! Late-order outer terms q_n and the factorial-over-power ratio test.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::BranchedConstants;

/// q_n = Σ_m c_m (ζ + 1)^{−m}; `coeffs[m − 1]` holds c_m.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterTerm<R> {
    pub n: usize,
    pub coeffs: Vec<Complex<R>>,
}

impl<R: Clone + Num> OuterTerm<R> {
    /// Highest power of (ζ + 1)^{−1} with a nonzero coefficient.
    pub fn pole_order(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1)
    }

    pub fn evaluate(&self, zeta: &Complex<R>) -> Complex<R> {
        let v = Complex::new(R::one(), R::zero()) / (zeta.clone() + R::one());
        let mut acc = Complex::new(R::zero(), R::zero());
        for c in self.coeffs.iter().rev() {
            acc = (acc + c.clone()) * v.clone();
        }
        acc
    }
}

/// ζ d/dζ on the (ζ + 1)^{−m} basis: u^{−m} ↦ −m u^{−m} + m u^{−m−1}.
fn theta_op<R: Clone + Num + FromPrimitive>(c: &[Complex<R>]) -> Vec<Complex<R>> {
    let mut out = vec![Complex::new(R::zero(), R::zero()); c.len() + 1];
    for (idx, v) in c.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let m = R::from_usize(idx + 1).expect("index representable");
        let t = v.clone() * m;
        out[idx] = out[idx].clone() - t.clone();
        out[idx + 1] = out[idx + 1].clone() + t;
    }
    out
}

/// q_0 = 1/(2(ζ + 1)) and q_n = iβ ζq′_{n−1} + βτ(ζ²q″_{n−2} + ζq′_{n−2}).
///
/// The recursion omits the Hilbert-transform term, which only matters at low orders.
pub fn outer_coefficients<R: Clone + Num + FromPrimitive>(beta: R, tau: R, n_max: usize) -> Vec<OuterTerm<R>> {
    let zero = Complex::new(R::zero(), R::zero());
    let half = R::one() / (R::one() + R::one());
    let ib = Complex::new(R::zero(), beta.clone());
    let bt = beta * tau;
    let mut terms = vec![OuterTerm { n: 0, coeffs: vec![Complex::new(half, R::zero())] }];
    for n in 1..=n_max {
        let len = n + 1;
        let mut next = vec![zero.clone(); len];
        for (i, v) in theta_op(&terms[n - 1].coeffs).into_iter().enumerate() {
            next[i] = next[i].clone() + v * ib.clone();
        }
        if n >= 2 {
            let twice = theta_op(&theta_op(&terms[n - 2].coeffs));
            for (i, v) in twice.into_iter().enumerate() {
                next[i] = next[i].clone() + v * bt.clone();
            }
        }
        terms.push(OuterTerm { n, coeffs: next });
    }
    terms
}

/// A small-denominator rational close to x (so 0.2 becomes 1/5), else its exact binary value.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::domain("cannot convert a non-finite value to a rational"));
    }
    if let Some(r) = Ratio::<i64>::approximate_float(x) {
        if r.to_f64() == Some(x) {
            return Ok(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())));
        }
    }
    BigRational::from_float(x).ok_or_else(|| Error::domain("rational conversion failed"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateOrderRecord {
    pub n: usize,
    /// |q_{n+2}/q_n|.
    pub ratio: f64,
    /// (n + γ)(n + 1 + γ)/|χ|².
    pub target: f64,
}

impl LateOrderRecord {
    pub fn normalized(&self) -> f64 {
        self.ratio / self.target
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LateOrderReport {
    pub beta: f64,
    pub tau: f64,
    pub zeta: f64,
    /// Modulus of the dominant singulant at ζ.
    pub chi_abs: f64,
    pub records: Vec<LateOrderRecord>,
}

impl LateOrderReport {
    /// Largest |ratio/target − 1| over records with n ≥ `n_min`.
    pub fn max_deviation_from(&self, n_min: usize) -> Option<f64> {
        self.records.iter().filter(|r| r.n >= n_min).map(|r| (r.normalized() - 1.0).abs()).reduce(f64::max)
    }
}

/// Two-step ratio test |q_{n+2}/q_n| ≈ (n + γ)(n + 1 + γ)/|χ|² on the free surface ζ > 0.
///
/// The singularities at ζ = −1 approached from above and below contribute conjugate
/// terms of equal size on ζ > 0, so individual orders can cancel exactly (at ζ = 1 every
/// even order from 2 on vanishes). Ratios two orders apart are immune to that pairing.
/// Orders whose value is exactly zero are skipped; arithmetic is exact.
pub fn late_order_diagnostics(beta: f64, tau: f64, zeta: f64, n_max: usize) -> Result<LateOrderReport> {
    if !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::domain("late-order diagnostics are evaluated on the free surface zeta > 0"));
    }
    if n_max < 3 {
        return Err(Error::domain("need at least three outer orders"));
    }
    let consts = BranchedConstants::new(beta, tau)?;
    let beta_r = rational_from_f64(beta)?;
    let tau_r = rational_from_f64(tau)?;
    let zeta_r = Complex::new(rational_from_f64(zeta)?, BigRational::zero());
    let terms = outer_coefficients(beta_r, tau_r, n_max);
    let sq: Vec<BigRational> = terms
        .iter()
        .map(|t| {
            let v = t.evaluate(&zeta_r);
            v.re.clone() * v.re + v.im.clone() * v.im
        })
        .collect();
    let w = -zeta.ln();
    let d_min = consts.d_plus.map_or(consts.d_minus.norm(), |dp| dp.norm().min(consts.d_minus.norm()));
    let chi_abs = d_min * w.hypot(std::f64::consts::PI);
    let gamma = 1.0;
    let mut records = Vec::new();
    for n in 0..=n_max - 2 {
        if sq[n].is_zero() || sq[n + 2].is_zero() {
            continue;
        }
        let q = (sq[n + 2].clone() / sq[n].clone())
            .to_f64()
            .ok_or_else(|| Error::convergence("outer ratio overflowed f64"))?;
        let nf = n as f64;
        records.push(LateOrderRecord {
            n,
            ratio: q.sqrt(),
            target: (nf + gamma) * (nf + 1.0 + gamma) / (chi_abs * chi_abs),
        });
    }
    Ok(LateOrderReport { beta, tau, zeta, chi_abs, records })
}
