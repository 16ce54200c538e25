//! Floating-point helpers: polynomial roots and evaluation.

use num_complex::Complex64;

/// Horner evaluation, coefficients lowest degree first.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn horner_c(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].abs() <= scale * 1e-300 {
        n -= 1;
    }
    &coeffs[..n]
}

/// All complex roots by Aberth-Ehrlich iteration.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c = trim(coeffs);
    if c.len() < 2 {
        return Vec::new();
    }
    // strip zero roots
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    let c = &c[zeros..];
    let n = c.len() - 1;
    let mut out = vec![Complex64::new(0.0, 0.0); zeros];
    if n == 0 {
        return out;
    }
    let lc = c[n];
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max((v / lc).abs()));
    let r0 = radius.min(1e6) * 0.5 + 0.1;
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_c(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    out.extend(z);
    out
}

/// Real roots (imaginary part small relative to magnitude), Newton-polished
/// and sorted.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let c = trim(coeffs);
    let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
    let mut out: Vec<f64> = complex_roots(c)
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| newton(c, &d, z.re))
        .collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

fn newton(c: &[f64], d: &[f64], mut x: f64) -> f64 {
    for _ in 0..8 {
        let dv = horner(d, x);
        if dv == 0.0 {
            break;
        }
        let step = horner(c, x) / dv;
        if !step.is_finite() {
            break;
        }
        x -= step;
        if step.abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_real_roots() {
        // (x^2 - 2)(x^2 + 1)
        let r = real_roots(&[-2.0, 0.0, -1.0, 0.0, 1.0], 1e-8);
        assert_eq!(r.len(), 2);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_root_and_degenerate() {
        let r = real_roots(&[0.0, -1.0, 0.0, 1.0], 1e-8);
        assert_eq!(r.len(), 3);
        assert!(r[1].abs() < 1e-15);
        assert!(real_roots(&[3.0], 1e-8).is_empty());
    }
}
