//! Large-η coefficients A_n of the inner problem.

use num_complex::Complex;
use num_traits::Num;

use crate::error::Result;
use crate::params::{BranchedConstants, Family};
use crate::scalar::Real;

/// A_0 = 1, A_1 = β, A_2 = β², A_n = β(A_{n−1} − τA_{n−2}) for n ≥ 3, over any number type.
pub fn inner_recurrence<S: Clone + Num>(beta: S, tau: S, n_max: usize) -> Vec<S> {
    let mut a: Vec<S> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let v = match n {
            0 => S::one(),
            1 => beta.clone(),
            2 => beta.clone() * beta.clone(),
            _ => beta.clone() * (a[n - 1].clone() - tau.clone() * a[n - 2].clone()),
        };
        a.push(v);
    }
    a
}

/// (1/√Δ)[(1/D₋)ⁿ − (1/D₊)ⁿ]; it reproduces A_n for n ≥ 1.
pub fn inner_closed_form<T: Real>(consts: &BranchedConstants<T>, n: usize) -> Complex<T> {
    let xm = consts.d_minus.inv();
    let xp = consts.d_plus.map(|d| d.inv()).unwrap_or_else(|| Complex::new(T::zero(), T::zero()));
    let n = n as i32;
    (xm.powi(n) - xp.powi(n)) / consts.sqrt_delta
}

/// Λ from matching the inner coefficients to the outer late-order terms.
///
/// A_n splits into geometric parts c±(1/D±)ⁿ; c is read off A_1 and A_2, and
/// matching (−1)^{n+1}Λ/D^{n+1} against −(i/2)c D^{−n} gives Λ = −(i/2)cD.
pub fn matched_lambda<T: Real>(consts: &BranchedConstants<T>, family: Family) -> Result<Complex<T>> {
    consts.require_noncritical()?;
    let d = consts.d(family)?;
    let other = match family {
        Family::Gravity => consts.d_plus.map(|v| v.inv()),
        Family::Capillary => Some(consts.d_minus.inv()),
    }
    .unwrap_or_else(|| Complex::new(T::zero(), T::zero()));
    let a = inner_recurrence(consts.beta, consts.tau, 2);
    let x = d.inv();
    let c = (Complex::new(a[2], T::zero()) - other * a[1]) / (x * (x - other));
    Ok(Complex::new(T::zero(), -T::lit(0.5)) * c * d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerCoefficients<T> {
    pub a: Vec<T>,
    pub beta: T,
    pub tau: T,
    /// Largest |A_n − closed form| over n = 1..n_max, scaled by max|1/D±|ⁿ/|√Δ|.
    pub max_closed_form_error: Option<T>,
    pub warning: Option<String>,
}

impl<T: Real> InnerCoefficients<T> {
    /// |A_{n+1}/A_n| at the top of the computed range.
    pub fn growth_rate(&self) -> Option<T> {
        let n = self.a.len();
        if n < 2 || self.a[n - 2] == T::zero() {
            return None;
        }
        Some((self.a[n - 1] / self.a[n - 2]).abs())
    }
}

/// Runs the recurrence and compares it with the closed form.
///
/// The comparison is scaled by the closed form's envelope because A_n can vanish
/// exactly (β = 1, τ = ½ gives A_4 = A_8 = 0).
pub fn inner_coefficients<T: Real>(consts: &BranchedConstants<T>, n_max: usize) -> Result<InnerCoefficients<T>> {
    let a = inner_recurrence(consts.beta, consts.tau, n_max);
    let (max_closed_form_error, warning) = if consts.critical {
        (None, Some("discriminant is critical; closed form has a repeated root and was not compared".to_string()))
    } else if consts.d_plus.is_none() {
        // τ = 0: the closed form degenerates to βⁿ.
        let err = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &v)| ((v - consts.beta.powi(n as i32)) / consts.beta.powi(n as i32)).abs())
            .fold(T::zero(), T::max);
        (Some(err), None)
    } else {
        let xm = consts.d_minus.inv().norm();
        let xp = consts.d_plus.map(|d| d.inv().norm()).unwrap_or(T::zero());
        let s = consts.sqrt_delta.norm();
        let err = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &v)| {
                let envelope = xm.max(xp).powi(n as i32) / s;
                (Complex::new(v, T::zero()) - inner_closed_form(consts, n)).norm() / envelope
            })
            .fold(T::zero(), T::max);
        (Some(err), None)
    };
    Ok(InnerCoefficients { a, beta: consts.beta, tau: consts.tau, max_closed_form_error, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn base_cases() {
        let a = inner_recurrence(2.0f64, 0.3, 4);
        assert_eq!(&a[..3], &[1.0, 2.0, 4.0]);
        assert!((a[3] - 2.0 * (4.0 - 0.3 * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn pure_gravity_is_geometric() {
        let c = BranchedConstants::new(1.5, 0.0).unwrap();
        let r = inner_coefficients(&c, 20).unwrap();
        for (n, v) in r.a.iter().enumerate() {
            assert!((v - 1.5f64.powi(n as i32)).abs() <= 1e-13 * v);
        }
        assert!(r.max_closed_form_error.unwrap() < 1e-14);
    }

    #[test]
    fn exact_rational_zeros() {
        let one = BigRational::from_integer(BigInt::from(1));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let a = inner_recurrence(one, half, 12);
        assert!(num_traits::Zero::is_zero(&a[4]));
        assert!(num_traits::Zero::is_zero(&a[8]));
    }

    #[test]
    fn closed_form_and_growth() {
        let c = BranchedConstants::new(1.0, 0.2).unwrap();
        let r = inner_coefficients(&c, 50).unwrap();
        assert!(r.max_closed_form_error.unwrap() < 1e-12);
        let rate: f64 = r.growth_rate().unwrap();
        assert!((rate * c.d_minus.re - 1.0).abs() < 1e-6);
        let crit = inner_coefficients(&BranchedConstants::new(1.0, 0.25).unwrap(), 10).unwrap();
        assert!(crit.max_closed_form_error.is_none() && crit.warning.is_some());
    }
}
