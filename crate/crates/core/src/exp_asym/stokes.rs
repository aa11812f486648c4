//! Stokes-line geometry and the smoothing of the Stokes multiplier.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::{BranchedConstants, Family};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminantRegime {
    Positive,
    Negative,
}

/// The Stokes line of one family in the w = φ + iψ plane.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesGeometry<T> {
    pub family: Family,
    pub regime: DiscriminantRegime,
    /// Curve parameter of each point.
    pub s: Vec<T>,
    /// μ(s), running from w = −iπ to the free surface.
    pub polyline: Vec<Complex<T>>,
    /// φ where the line meets ψ = 0.
    pub crossing_point: T,
}

/// μ(s) = is for Δ > 0, and s + i[(Re D/Im D)s − π] for Δ < 0, for every family present.
pub fn stokes_lines<T: Real>(consts: &BranchedConstants<T>, n_points: usize) -> Result<Vec<StokesGeometry<T>>> {
    consts.require_noncritical()?;
    if n_points < 2 {
        return Err(Error::domain("a Stokes line needs at least two points"));
    }
    let families: Vec<Family> =
        if consts.d_plus.is_some() { vec![Family::Gravity, Family::Capillary] } else { vec![Family::Gravity] };
    let last = T::count(n_points - 1);
    let mut out = Vec::with_capacity(families.len());
    for family in families {
        let d = consts.d(family)?;
        let geom = if consts.discriminant() > T::zero() {
            let s: Vec<T> = (0..n_points).map(|j| -T::PI() + T::PI() * T::count(j) / last).collect();
            let polyline = s.iter().map(|&v| Complex::new(T::zero(), v)).collect();
            StokesGeometry { family, regime: DiscriminantRegime::Positive, s, polyline, crossing_point: T::zero() }
        } else {
            let end = T::PI() * d.im / d.re;
            let slope = d.re / d.im;
            let s: Vec<T> = (0..n_points).map(|j| end * T::count(j) / last).collect();
            let polyline = s
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let psi = if j == n_points - 1 { T::zero() } else { (slope * v - T::PI()).min(T::zero()) };
                    Complex::new(v, psi)
                })
                .collect();
            StokesGeometry { family, regime: DiscriminantRegime::Negative, s, polyline, crossing_point: end }
        };
        out.push(geom);
    }
    Ok(out)
}

/// Gaussian switching profile dS/dϑ̄ = (√(2πr) i/ε^γ) e^{−rϑ̄²/2} across a Stokes line.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingProfile<T> {
    pub r: T,
    pub epsilon: T,
    pub gamma: T,
    pub theta_bar: Vec<T>,
    pub ds: Vec<Complex<T>>,
    /// Running integral from the first sample.
    pub accrued: Vec<Complex<T>>,
    /// Trapezoid integral over the whole window.
    pub total: Complex<T>,
    /// 2πi/ε^γ.
    pub exact_total: Complex<T>,
}

impl<T: Real> SmoothingProfile<T> {
    /// Jump in the remainder, integrating from upstream (ϑ̄ > 0) to downstream.
    pub fn jump(&self, q: Complex<T>, chi: Complex<T>) -> Complex<T> {
        -self.total * q * (-chi / self.epsilon).exp()
    }

    /// Fraction of the switch accrued by ϑ̄ = 0.
    pub fn fraction_at_line(&self) -> Option<T> {
        let i = self.theta_bar.iter().position(|&t| t == T::zero())?;
        Some((self.accrued[i] / self.total).re)
    }
}

/// Samples the switching profile on |ϑ̄| ≤ 8/√r and integrates it by the trapezoid rule.
pub fn stokes_smoothing<T: Real>(r: T, epsilon: T, gamma: T, n_samples: usize) -> Result<SmoothingProfile<T>> {
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::domain("the singulant modulus r must be positive"));
    }
    if !(epsilon > T::zero()) {
        return Err(Error::domain("epsilon must be positive"));
    }
    if n_samples < 3 {
        return Err(Error::domain("need at least three samples"));
    }
    let half_width = T::lit(8.0) / r.sqrt();
    let h = T::lit(2.0) * half_width / T::count(n_samples - 1);
    let eps_g = epsilon.powf(gamma);
    let scale = (T::lit(2.0) * T::PI() * r).sqrt() / eps_g;
    let mid = (n_samples - 1) / 2;
    let theta_bar: Vec<T> = (0..n_samples)
        .map(|j| {
            if 2 * j == n_samples - 1 {
                T::zero()
            } else {
                h * (T::count(j) - T::count(mid))
                    - if n_samples.is_multiple_of(2) { h * T::lit(0.5) } else { T::zero() }
            }
        })
        .collect();
    let ds: Vec<Complex<T>> =
        theta_bar.iter().map(|&t| Complex::new(T::zero(), scale * (-r * t * t * T::lit(0.5)).exp())).collect();
    let mut accrued = Vec::with_capacity(n_samples);
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..n_samples {
        if j > 0 {
            acc = acc + (ds[j] + ds[j - 1]) * (h * T::lit(0.5));
        }
        accrued.push(acc);
    }
    Ok(SmoothingProfile {
        r,
        epsilon,
        gamma,
        theta_bar,
        ds,
        accrued,
        total: acc,
        exact_total: Complex::new(T::zero(), T::lit(2.0) * T::PI() / eps_g),
    })
}

/// [R] = −2πiQe^{−χ/ε}/ε^γ from upstream to downstream.
pub fn remainder_jump<T: Real>(q: Complex<T>, chi: Complex<T>, epsilon: T, gamma: T) -> Complex<T> {
    Complex::new(T::zero(), -T::lit(2.0) * T::PI()) * q * (-chi / epsilon).exp() / epsilon.powf(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_discriminant_lines_meet_at_origin() {
        let c = BranchedConstants::new(1.0, 0.2).unwrap();
        let lines = stokes_lines(&c, 50).unwrap();
        assert_eq!(lines.len(), 2);
        for l in &lines {
            assert_eq!(l.crossing_point, 0.0);
            assert_eq!(l.polyline[0], Complex::new(0.0, -std::f64::consts::PI));
            assert_eq!(*l.polyline.last().unwrap(), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn negative_discriminant_lines_separate() {
        let c = BranchedConstants::<f64>::new(1.0, 0.5).unwrap();
        let lines = stokes_lines(&c, 50).unwrap();
        let grav = lines.iter().find(|l| l.family == Family::Gravity).unwrap();
        let cap = lines.iter().find(|l| l.family == Family::Capillary).unwrap();
        assert!(grav.crossing_point > 0.0 && cap.crossing_point < 0.0);
        assert!((grav.crossing_point - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn smoothing_profile() {
        let p = stokes_smoothing(2.3f64, 0.1, 1.0, 10_001).unwrap();
        assert!(((p.total - p.exact_total).norm()) / p.exact_total.norm() < 1e-12);
        let imax = p.ds.iter().enumerate().max_by(|a, b| a.1.im.partial_cmp(&b.1.im).unwrap()).unwrap().0;
        assert_eq!(p.theta_bar[imax], 0.0);
        assert!((p.fraction_at_line().unwrap() - 0.5).abs() < 1e-14);
        let q = Complex::new(0.0, 0.3);
        let chi = Complex::new(2.3, 0.0);
        let j = p.jump(q, chi);
        let exact = remainder_jump(q, chi, 0.1, 1.0);
        assert!((j - exact).norm() / exact.norm() < 1e-12);
    }
}
