//! Physical and low-Froude parameter sets, and the branched constants Δ, D±.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Discriminants closer than this to zero are treated as critical.
pub const CRITICAL_DISCRIMINANT: f64 = 1e-10;

/// Wave family: long gravity waves downstream, short capillary waves upstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gravity,
    Capillary,
}

impl Family {
    pub const BOTH: [Family; 2] = [Family::Gravity, Family::Capillary];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gravity => "gravity",
            Family::Capillary => "capillary",
        }
    }

    /// The upper sign of the ± pairs belongs to the capillary family.
    pub fn sign<T: Real>(self) -> T {
        match self {
            Family::Gravity => -T::one(),
            Family::Capillary => T::one(),
        }
    }
}

/// Froude number, Bond number and step height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams<T> {
    pub froude: T,
    pub bond: T,
    pub step_height: T,
}

impl<T: Real> FlowParams<T> {
    pub fn new(froude: T, bond: T, step_height: T) -> Result<Self> {
        if !(froude.is_finite() && froude > T::zero()) {
            return Err(Error::domain(format!("Froude number must be positive, got {froude}")));
        }
        if !(bond.is_finite() && bond >= T::zero()) {
            return Err(Error::domain(format!("Bond number must be non-negative, got {bond}")));
        }
        if !step_height.is_finite() {
            return Err(Error::domain("step height must be finite"));
        }
        Ok(FlowParams { froude, bond, step_height })
    }

    /// F².
    pub fn f2(&self) -> T {
        self.froude * self.froude
    }

    /// A flat bottom produces no waves.
    pub fn generates_waves(&self) -> bool {
        self.step_height != T::zero()
    }

    pub fn with_step(&self, step_height: T) -> Self {
        FlowParams { step_height, ..*self }
    }
}

/// Low-Froude scalings: F² = βε, B = βτε², πδ̄ = 2δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams<T> {
    pub epsilon: T,
    pub beta: T,
    pub tau: T,
    pub delta_bar: T,
}

impl<T: Real> ScaledParams<T> {
    pub fn new(epsilon: T, beta: T, tau: T, delta_bar: T) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > T::zero()) {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(beta.is_finite() && beta > T::zero()) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        if !(tau.is_finite() && tau >= T::zero()) {
            return Err(Error::domain(format!("tau must be non-negative, got {tau}")));
        }
        if !delta_bar.is_finite() {
            return Err(Error::domain("scaled step height must be finite"));
        }
        Ok(ScaledParams { epsilon, beta, tau, delta_bar })
    }

    /// Builds the scaled set from a physical step height δ.
    pub fn with_step(epsilon: T, beta: T, tau: T, step_height: T) -> Result<Self> {
        Self::new(epsilon, beta, tau, T::lit(2.0) * step_height / T::PI())
    }

    /// δ = πδ̄/2.
    pub fn step_height(&self) -> T {
        T::PI() * self.delta_bar / T::lit(2.0)
    }

    /// Δ = 1 − 4τ/β.
    pub fn discriminant(&self) -> T {
        T::one() - T::lit(4.0) * self.tau / self.beta
    }

    pub fn unscale(&self) -> FlowParams<T> {
        let e = self.epsilon;
        FlowParams {
            froude: (self.beta * e).sqrt(),
            bond: self.beta * self.tau * e * e,
            step_height: self.step_height(),
        }
    }

    pub fn constants(&self) -> BranchedConstants<T> {
        branched_constants(self)
    }
}

/// Rescales physical parameters with the small parameter ε.
pub fn scale<T: Real>(flow: &FlowParams<T>, epsilon: T) -> Result<ScaledParams<T>> {
    if !(epsilon.is_finite() && epsilon > T::zero()) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let beta = flow.f2() / epsilon;
    let tau = flow.bond / (beta * epsilon * epsilon);
    ScaledParams::new(epsilon, beta, tau, T::lit(2.0) * flow.step_height / T::PI())
}

/// Δ, its square root and the two roots D± of βτD² − βD + 1 = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedConstants<T> {
    pub beta: T,
    pub tau: T,
    pub delta_disc: Complex<T>,
    pub sqrt_delta: Complex<T>,
    /// Gravity root.
    pub d_minus: Complex<T>,
    /// Capillary root; absent in the pure-gravity case τ = 0.
    pub d_plus: Option<Complex<T>>,
    pub critical: bool,
}

/// Evaluates Δ and D± with the branch √Δ = −i√|Δ| when Δ < 0.
pub fn branched_constants<T: Real>(scaled: &ScaledParams<T>) -> BranchedConstants<T> {
    constants_for(scaled.beta, scaled.tau)
}

pub(crate) fn constants_for<T: Real>(beta: T, tau: T) -> BranchedConstants<T> {
    let two = T::lit(2.0);
    let delta = T::one() - T::lit(4.0) * tau / beta;
    let sqrt_delta = if delta >= T::zero() {
        Complex::new(delta.sqrt(), T::zero())
    } else {
        Complex::new(T::zero(), -(-delta).sqrt())
    };
    let one_plus = Complex::new(T::one(), T::zero()) + sqrt_delta;
    // 2/(β(1 + √Δ)) equals (1 − √Δ)/(2τ) without the cancellation at small τ.
    let d_minus = Complex::new(two / beta, T::zero()) / one_plus;
    let d_plus = if tau > T::zero() { Some(one_plus / (two * tau)) } else { None };
    BranchedConstants {
        beta,
        tau,
        delta_disc: Complex::new(delta, T::zero()),
        sqrt_delta,
        d_minus,
        d_plus,
        critical: delta.abs() <= T::lit(CRITICAL_DISCRIMINANT),
    }
}

impl<T: Real> BranchedConstants<T> {
    pub fn new(beta: T, tau: T) -> Result<Self> {
        if !(beta.is_finite() && beta > T::zero()) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        if !(tau.is_finite() && tau >= T::zero()) {
            return Err(Error::domain(format!("tau must be non-negative, got {tau}")));
        }
        Ok(constants_for(beta, tau))
    }

    /// Real part of Δ.
    pub fn discriminant(&self) -> T {
        self.delta_disc.re
    }

    pub fn d(&self, family: Family) -> Result<Complex<T>> {
        match family {
            Family::Gravity => Ok(self.d_minus),
            Family::Capillary => self.d_plus.ok_or_else(|| Error::domain("capillary root D+ is absent when tau = 0")),
        }
    }

    pub fn require_noncritical(&self) -> Result<()> {
        if self.critical {
            Err(Error::Critical(format!(
                "discriminant {} is within {CRITICAL_DISCRIMINANT:e} of zero",
                self.discriminant()
            )))
        } else {
            Ok(())
        }
    }

    /// Residual of βτD² − βD + 1 relative to the size of its terms.
    pub fn quadratic_residual(&self, d: Complex<T>) -> T {
        let bt = self.beta * self.tau;
        let a = d * d * bt;
        let b = d * self.beta;
        let r = a - b + T::one();
        r.norm() / (a.norm() + b.norm() + T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn scale_example_uses_froude_squared() {
        let flow = FlowParams::new(0.1, 0.0025, 0.01).unwrap();
        let s = scale(&flow, 0.1).unwrap();
        assert!(close(s.beta, 0.1, 1e-15));
        assert!(close(s.tau, 2.5, 1e-15));
        assert!(close(s.delta_bar, 0.02 / std::f64::consts::PI, 1e-15));
        let flow = FlowParams::new(0.1, 0.0001, 0.01).unwrap();
        let s = scale(&flow, 0.01).unwrap();
        assert!(close(s.beta, 1.0, 1e-14));
        assert!(close(s.tau, 1.0, 1e-14));
    }

    #[test]
    fn zero_bond_gives_zero_tau() {
        let flow = FlowParams::new(0.3, 0.0, 0.02).unwrap();
        let s = scale(&flow, 0.09).unwrap();
        assert!(close(s.beta, 1.0, 1e-14));
        assert_eq!(s.tau, 0.0);
    }

    #[test]
    fn round_trip() {
        let flow = FlowParams::new(0.37, 0.013, -0.004).unwrap();
        let back = scale(&flow, 0.07).unwrap().unscale();
        assert!(close(back.froude, flow.froude, 4e-16));
        assert!(close(back.bond, flow.bond, 4e-16));
        assert!(close(back.step_height, flow.step_height, 4e-16));
    }

    #[test]
    fn nonpositive_epsilon_is_rejected() {
        let flow = FlowParams::new(0.3, 0.01, 0.01).unwrap();
        assert!(matches!(scale(&flow, 0.0), Err(Error::Domain(_))));
        assert!(matches!(scale(&flow, -1.0), Err(Error::Domain(_))));
        assert!(FlowParams::new(0.0, 0.1, 0.1).is_err());
        assert!(FlowParams::new(0.1, -0.1, 0.1).is_err());
    }

    #[test]
    fn real_roots_when_discriminant_positive() {
        let c = BranchedConstants::new(1.0, 0.2).unwrap();
        assert!(close(c.discriminant(), 0.2, 1e-15));
        let s = 0.2f64.sqrt();
        assert!(close(c.d_minus.re, (1.0 - s) / 0.4, 1e-15));
        assert!(close(c.d_plus.unwrap().re, (1.0 + s) / 0.4, 1e-15));
        assert_eq!(c.d_minus.im, 0.0);
        assert!(c.quadratic_residual(c.d_minus) < 1e-14);
        assert!(c.quadratic_residual(c.d_plus.unwrap()) < 1e-14);
        assert!(!c.critical);
    }

    #[test]
    fn critical_flag() {
        let c = BranchedConstants::new(1.0, 0.25).unwrap();
        assert!(c.critical);
        assert!(close(c.d_minus.re, 2.0, 1e-15));
        assert!(close(c.d_plus.unwrap().re, 2.0, 1e-15));
        assert!(matches!(c.require_noncritical(), Err(Error::Critical(_))));
    }

    #[test]
    fn decay_branch_when_discriminant_negative() {
        let c = BranchedConstants::new(1.0, 0.5).unwrap();
        assert!(close(c.discriminant(), -1.0, 1e-15));
        assert!(close(c.d_minus.re, 1.0, 1e-15));
        assert!(close(c.d_minus.im, 1.0, 1e-15));
        let dp = c.d_plus.unwrap();
        assert!(dp.im < 0.0);
        assert_eq!(dp, c.d_minus.conj());
    }

    #[test]
    fn gravity_only_mode() {
        let c = BranchedConstants::new(2.0, 0.0).unwrap();
        assert!(c.d_plus.is_none());
        assert!(close(c.d_minus.re, 0.5, 1e-15));
        assert!(c.d(Family::Capillary).is_err());
    }

    #[test]
    fn vieta() {
        for &(b, t) in &[(1.0, 0.1), (2.0, 0.3), (0.5, 0.4), (1.0, 0.9)] {
            let c = BranchedConstants::new(b, t).unwrap();
            let dp = c.d_plus.unwrap();
            let prod = dp * c.d_minus;
            let sum = dp + c.d_minus;
            assert!((prod - Complex::new(1.0 / (b * t), 0.0)).norm() < 1e-13 / (b * t));
            assert!((sum - Complex::new(1.0 / t, 0.0)).norm() < 1e-13 / t);
        }
    }

    #[test]
    fn single_precision() {
        let c = BranchedConstants::<f32>::new(1.0, 0.2).unwrap();
        assert!(c.quadratic_residual(c.d_minus) < 1e-6);
    }
}
