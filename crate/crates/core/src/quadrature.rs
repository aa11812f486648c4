//! Composite quadrature rules on uniform grids.

use crate::scalar::Real;

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson<T: Real, F: Fn(T) -> T>(f: F, a: T, b: T, panels: usize) -> T {
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / T::count(n);
    let mut odd = T::zero();
    let mut even = T::zero();
    for i in 1..n {
        let v = f(a + h * T::count(i));
        if i % 2 == 1 {
            odd = odd + v;
        } else {
            even = even + v;
        }
    }
    h / T::lit(3.0) * (f(a) + f(b) + T::lit(4.0) * odd + T::lit(2.0) * even)
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid<T: Real>(samples: &[T], h: T) -> T {
    match samples.len() {
        0 | 1 => T::zero(),
        n => {
            let inner = samples[1..n - 1].iter().fold(T::zero(), |acc, &v| acc + v);
            h * (inner + (samples[0] + samples[n - 1]) * T::lit(0.5))
        }
    }
}

/// Running trapezoid integral on a (possibly non-uniform) grid, starting at zero.
pub fn cumulative_trapezoid<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(y.len());
    let mut acc = T::zero();
    for i in 0..y.len() {
        if i > 0 {
            acc = acc + (x[i] - x[i - 1]) * (y[i] + y[i - 1]) * T::lit(0.5);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|x: f64| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 4);
        assert!((v - (15.0 / 4.0 - 3.0 + 3.0)).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_rules() {
        let h = 0.001;
        let xs: Vec<f64> = (0..=1000).map(|i| i as f64 * h).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.exp()).collect();
        let total = trapezoid(&ys, h);
        assert!((total - (1f64.exp() - 1.0)).abs() < 2e-7);
        let cum = cumulative_trapezoid(&xs, &ys);
        assert_eq!(cum[0], 0.0);
        assert!((cum[1000] - total).abs() < 1e-12);
    }
}
