//! Overflow-safe hyperbolic functions of complex argument.

use num_complex::Complex;

use crate::scalar::Real;

/// Beyond this |Re z| the hyperbolic tangent equals ±1 to double precision.
const SATURATION: f64 = 30.0;

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// tanh z, saturating to sign(Re z) for large |Re z|.
pub fn tanh<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re.abs() > T::lit(SATURATION) {
        c(z.re.signum(), T::zero())
    } else {
        z.tanh()
    }
}

/// sech² z, flushed to zero for large |Re z|.
pub fn sech2<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re.abs() > T::lit(SATURATION) {
        c(T::zero(), T::zero())
    } else {
        let ch = z.cosh();
        (ch * ch).inv()
    }
}

/// A branch of log cosh z that stays finite when cosh z overflows.
pub fn ln_cosh<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re.abs() <= T::lit(SATURATION) {
        return z.cosh().ln();
    }
    // cosh z = cosh(±z) = e^{±z}(1 + e^{∓2z})/2 with the sign making Re(±z) > 0.
    let w = if z.re > T::zero() { z } else { -z };
    let tail = (w * T::lit(-2.0)).exp();
    w + (tail + T::one()).ln() - T::LN_2()
}

/// ln cosh x for real x without overflow.
pub fn ln_cosh_real<T: Real>(x: T) -> T {
    let a = x.abs();
    a + (T::lit(-2.0) * a).exp().ln_1p() - T::LN_2()
}

/// sech² x for real x.
pub fn sech2_real<T: Real>(x: T) -> T {
    let a = x.abs();
    if a > T::lit(350.0) {
        return T::zero();
    }
    let e = (-a).exp();
    let d = T::one() + e * e;
    T::lit(4.0) * e * e / (d * d)
}

/// ln|tanh(x/2)| for real x ≠ 0.
pub fn ln_abs_tanh_half<T: Real>(x: T) -> T {
    let a = x.abs();
    if a > T::lit(1.0) {
        // tanh(a/2) = (1 − e^{−a})/(1 + e^{−a}).
        let e = (-a).exp();
        (-e).ln_1p() - e.ln_1p()
    } else {
        (a * T::lit(0.5)).tanh().ln()
    }
}
