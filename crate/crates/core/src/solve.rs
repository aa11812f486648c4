//! Scalar root-finding helpers: bracketed bisection, real and complex Newton.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Bisects a sign change of `f` on [a, b] until the bracket cannot shrink.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T) -> Result<T> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::convergence(format!("no sign change on [{a}, {b}]")));
    }
    let half = T::lit(0.5);
    for _ in 0..400 {
        let m = a + (b - a) * half;
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let fa = f(a).abs();
    let fb = f(b).abs();
    Ok(if fa <= fb { a } else { b })
}

/// Locates every sign change of `f` on an evenly sampled [a, b] and bisects each.
pub fn all_sign_changes<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, samples: usize) -> Result<Vec<T>> {
    let n = samples.max(2);
    let h = (b - a) / T::count(n - 1);
    let mut roots = Vec::new();
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..n {
        let x = if i == n - 1 { b } else { a + h * T::count(i) };
        let fx = f(x);
        if f_prev == T::zero() {
            roots.push(x_prev);
        } else if fx != T::zero() && fx.signum() != f_prev.signum() {
            roots.push(bisect(&f, x_prev, x)?);
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(roots)
}

/// Newton iteration in the complex plane.
pub fn newton_complex<T, F, D>(f: F, df: D, z0: Complex<T>, max_iter: usize) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
    D: Fn(Complex<T>) -> Complex<T>,
{
    let tol = T::eps_times(8.0);
    let mut z = z0;
    for _ in 0..max_iter {
        let d = df(z);
        if d.norm() == T::zero() || !d.norm().is_finite() {
            return Err(Error::convergence("vanishing derivative in complex Newton"));
        }
        let step = f(z) / d;
        if !step.norm().is_finite() {
            return Err(Error::convergence("complex Newton produced a non-finite step"));
        }
        z = z - step;
        if step.norm() <= tol * z.norm().max(T::one()) {
            // One extra step settles the last bits.
            let d = df(z);
            if d.norm() > T::zero() {
                let s = f(z) / d;
                if s.norm().is_finite() {
                    z = z - s;
                }
            }
            return Ok(z);
        }
    }
    Err(Error::convergence(format!("complex Newton did not converge from {z0}")))
}

/// Golden-section search for a maximum of a unimodal `f` on [a, b].
pub fn golden_max<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T) -> (T, T) {
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= T::eps_times(4.0) * (a.abs() + b.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
