//! Exponential asymptotics: singulant, Stokes lines, late-order terms, inner
//! matching and the waves switched on across Stokes lines.

mod inner;
mod outer;
mod stokes;

pub use inner::{inner_closed_form, inner_coefficients, inner_recurrence, matched_lambda, InnerCoefficients};
pub use outer::{
    late_order_diagnostics, outer_coefficients, rational_from_f64, LateOrderRecord, LateOrderReport, OuterTerm,
};
pub use stokes::{
    remainder_jump, stokes_lines, stokes_smoothing, DiscriminantRegime, SmoothingProfile, StokesGeometry,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::{BranchedConstants, Family, ScaledParams};
use crate::scalar::Real;

/// The exponent γ of the factorial-over-power ansatz.
pub fn gamma<T: Real>() -> T {
    T::one()
}

/// log(−ζ) with the cut along ζ > 0, approached from the upper half plane.
fn log_minus<T: Real>(zeta: Complex<T>) -> Complex<T> {
    let a = zeta.arg();
    let arg = if a >= T::zero() { a - T::PI() } else { a + T::PI() };
    Complex::new(zeta.norm().ln(), arg)
}

/// χ = iD log(−ζ), which vanishes at ζ = −1.
pub fn singulant<T: Real>(zeta: Complex<T>, family: Family, consts: &BranchedConstants<T>) -> Result<Complex<T>> {
    if zeta.norm() == T::zero() || !zeta.norm().is_finite() {
        return Err(Error::domain("the singulant is singular at zeta = 0"));
    }
    let d = consts.d(family)?;
    Ok(Complex::new(T::zero(), T::one()) * d * log_minus(zeta))
}

/// χ on the free surface ζ = e^{−φ}: [πRe D + Im D φ] + i[πIm D − Re D φ].
pub fn singulant_on_surface<T: Real>(phi: T, family: Family, consts: &BranchedConstants<T>) -> Result<Complex<T>> {
    let d = consts.d(family)?;
    Ok(Complex::new(T::PI() * d.re + d.im * phi, T::PI() * d.im - d.re * phi))
}

/// |βτiζ²χ′² + βζχ′ − i| with χ′ = iD/ζ.
pub fn singulant_ode_residual<T: Real>(zeta: Complex<T>, family: Family, consts: &BranchedConstants<T>) -> Result<T> {
    let d = consts.d(family)?;
    let i = Complex::new(T::zero(), T::one());
    let dchi = i * d / zeta;
    let bt = consts.beta * consts.tau;
    let r = i * zeta * zeta * dchi * dchi * bt + zeta * dchi * consts.beta - i;
    Ok(r.norm())
}

/// Λ (from inner matching) and Θ = −iΛ; in closed form Λ = ±(i/2)D±/√Δ, upper sign capillary.
pub fn lambda_theta<T: Real>(consts: &BranchedConstants<T>, family: Family) -> Result<(Complex<T>, Complex<T>)> {
    let lambda = matched_lambda(consts, family)?;
    let theta = Complex::new(T::zero(), -T::one()) * lambda;
    Ok((lambda, theta))
}

/// Singulant and prefactors for one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singulant<T> {
    pub family: Family,
    pub zeta: Complex<T>,
    pub value: Complex<T>,
    pub gamma: T,
    /// Q = Λ.
    pub lambda: Complex<T>,
    pub theta: Complex<T>,
}

impl<T: Real> Singulant<T> {
    pub fn at(zeta: Complex<T>, family: Family, consts: &BranchedConstants<T>) -> Result<Self> {
        let (lambda, theta) = lambda_theta(consts, family)?;
        Ok(Singulant { family, zeta, value: singulant(zeta, family, consts)?, gamma: gamma(), lambda, theta })
    }
}

/// Where the family's Stokes line meets the free surface ψ = 0.
pub fn stokes_crossing<T: Real>(consts: &BranchedConstants<T>, family: Family) -> Result<T> {
    consts.require_noncritical()?;
    let d = consts.d(family)?;
    if d.im == T::zero() {
        Ok(T::zero())
    } else {
        Ok(T::PI() * d.im / d.re)
    }
}

/// An exponentially small wave on the free surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchedWave<T> {
    pub family: Family,
    pub phi: T,
    pub epsilon: T,
    pub gamma: T,
    pub theta_prefactor: Complex<T>,
    pub chi: Complex<T>,
    /// Stokes multiplier: 0 before the crossing, ½ on it, 1 beyond.
    pub multiplier: T,
    /// θ_exp at φ, including the multiplier and the factor δ̄.
    pub value: T,
    /// (4π|δ̄|/ε^γ)|Θ|e^{−Re χ/ε}, taking χ or its conjugate partner, whichever decays.
    pub amplitude: T,
    /// −2πiQe^{−χ/ε}/ε^γ.
    pub jump_factor: Complex<T>,
}

impl<T: Real> SwitchedWave<T> {
    pub fn switched_on(&self) -> bool {
        self.multiplier > T::zero()
    }
}

/// The wave switched on across the family's Stokes line, sampled at φ.
///
/// Crossing from upstream to downstream switches on (4π/ε^γ)Im[Θe^{−χ/ε}]; gravity
/// waves appear downstream of their crossing, capillary waves upstream with the
/// opposite sign.
pub fn switched_wave<T: Real>(
    scaled: &ScaledParams<T>,
    consts: &BranchedConstants<T>,
    family: Family,
    phi: T,
) -> Result<SwitchedWave<T>> {
    consts.require_noncritical()?;
    let eps = scaled.epsilon;
    let g = gamma::<T>();
    let d = consts.d(family)?;
    let (lambda, theta) = lambda_theta(consts, family)?;
    let chi = singulant_on_surface(phi, family, consts)?;
    let eps_g = eps.powf(g);
    let e = (-chi / eps).exp();
    let crossing = stokes_crossing(consts, family)?;
    let past = match family {
        Family::Gravity => phi - crossing,
        Family::Capillary => crossing - phi,
    };
    let multiplier = if past > T::zero() {
        T::one()
    } else if past == T::zero() {
        T::lit(0.5)
    } else {
        T::zero()
    };
    let four_pi = T::lit(4.0) * T::PI();
    let direction = -family.sign::<T>();
    let value = direction * multiplier * four_pi * scaled.delta_bar / eps_g * (theta * e).im;
    // The real wave carries χ and its conjugate partner; the envelope follows whichever stays bounded.
    let decay = chi.re.max(T::PI() * d.re - d.im * phi);
    let amplitude = four_pi * scaled.delta_bar.abs() / eps_g * theta.norm() * (-decay / eps).exp();
    let jump_factor = Complex::new(T::zero(), -T::lit(2.0) * T::PI()) * lambda * e / eps_g;
    Ok(SwitchedWave {
        family,
        phi,
        epsilon: eps,
        gamma: g,
        theta_prefactor: theta,
        chi,
        multiplier,
        value,
        amplitude,
        jump_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts(b: f64, t: f64) -> BranchedConstants<f64> {
        BranchedConstants::new(b, t).unwrap()
    }

    #[test]
    fn vanishes_at_minus_one() {
        let c = consts(1.0, 0.5);
        for fam in Family::BOTH {
            assert!(singulant(Complex::new(-1.0, 0.0), fam, &c).unwrap().norm() < 1e-15);
        }
        assert!(singulant(Complex::new(0.0, 0.0), Family::Gravity, &c).is_err());
    }

    #[test]
    fn positive_discriminant_origin_is_on_stokes_line() {
        let c = consts(1.0, 0.2);
        for fam in Family::BOTH {
            let chi = singulant(Complex::new(1.0, 0.0), fam, &c).unwrap();
            assert!(chi.im.abs() < 1e-15);
            assert!((chi.re - std::f64::consts::PI * c.d(fam).unwrap().re).abs() < 1e-14);
        }
    }

    #[test]
    fn surface_formula_matches_general_definition() {
        let c = consts(1.0, 0.5);
        for fam in Family::BOTH {
            for &phi in &[-2.0f64, 0.3, 4.0] {
                let general = singulant(Complex::new((-phi).exp(), 0.0), fam, &c).unwrap();
                let surface = singulant_on_surface(phi, fam, &c).unwrap();
                assert!((general - surface).norm() < 1e-13 * surface.norm().max(1.0));
            }
        }
    }

    #[test]
    fn singulant_derivative_matches_differences() {
        let c = consts(1.0, 0.2);
        let z = Complex::new(0.5, 0.5);
        let h = 1e-6;
        for fam in Family::BOTH {
            let fd = (singulant(z + h, fam, &c).unwrap() - singulant(z - h, fam, &c).unwrap()) / (2.0 * h);
            let an = Complex::new(0.0, 1.0) * c.d(fam).unwrap() / z;
            assert!((fd - an).norm() < 1e-8);
            assert!(singulant_ode_residual(z, fam, &c).unwrap() < 1e-12);
        }
    }

    #[test]
    fn prefactors() {
        let c = consts(1.0, 0.2);
        for fam in Family::BOTH {
            let (l, t) = lambda_theta(&c, fam).unwrap();
            assert!((l.norm() - t.norm()).abs() < 1e-15);
            assert!(l.re.abs() < 1e-15);
            let d = c.d(fam).unwrap();
            assert!((t.norm() - 0.5 * (d / c.sqrt_delta).norm()).abs() < 1e-14);
        }
        let c = consts(1.0, 0.5);
        for fam in Family::BOTH {
            let (_, t) = lambda_theta(&c, fam).unwrap();
            let d = c.d(fam).unwrap();
            let expected = d.arg() - c.delta_disc.arg() / 2.0;
            let diff = (t.arg() - expected).rem_euclid(std::f64::consts::PI);
            assert!(diff < 1e-12 || (std::f64::consts::PI - diff) < 1e-12, "{diff}");
        }
        assert!(lambda_theta(&consts(1.0, 0.25), Family::Gravity).is_err());
    }

    #[test]
    fn matched_lambda_has_the_closed_form() {
        for &(b, t) in &[(1.0, 0.0), (1.0, 0.2), (1.0, 0.5), (2.0, 0.1), (0.5, 0.3)] {
            let c = consts(b, t);
            for fam in Family::BOTH {
                let Ok(d) = c.d(fam) else { continue };
                let closed = Complex::new(0.0, 0.5 * fam.sign::<f64>()) * d / c.sqrt_delta;
                let matched = matched_lambda(&c, fam).unwrap();
                assert!((matched - closed).norm() <= 1e-14 * closed.norm(), "({b}, {t}) {fam:?}");
            }
        }
    }

    #[test]
    fn unswitched_side_is_zero() {
        let s = ScaledParams::with_step(0.1, 1.0, 0.2, 0.01).unwrap();
        let c = s.constants();
        let up = switched_wave(&s, &c, Family::Gravity, -1.0).unwrap();
        assert!(!up.switched_on());
        assert_eq!(up.value, 0.0);
        assert!(up.amplitude > 0.0);
        let down = switched_wave(&s, &c, Family::Capillary, 1.0).unwrap();
        assert!(!down.switched_on());
        let on = switched_wave(&s, &c, Family::Gravity, 0.0).unwrap();
        assert_eq!(on.multiplier, 0.5);
    }

    #[test]
    fn envelopes() {
        let s = ScaledParams::with_step(0.1, 1.0, 0.2, 0.01).unwrap();
        let c = s.constants();
        let a = switched_wave(&s, &c, Family::Gravity, 1.0).unwrap().amplitude;
        let b = switched_wave(&s, &c, Family::Gravity, 7.0).unwrap().amplitude;
        assert_eq!(a, b);
        let s = ScaledParams::with_step(0.1, 1.0, 0.5, 0.01).unwrap();
        let c = s.constants();
        let x = stokes_crossing(&c, Family::Gravity).unwrap();
        let near = switched_wave(&s, &c, Family::Gravity, x + 0.5).unwrap().amplitude;
        let far = switched_wave(&s, &c, Family::Gravity, x + 2.0).unwrap().amplitude;
        assert!(far < near);
    }
}
