//! Dense complex polynomials in ascending coefficient order.

use num_complex::Complex64;

/// `(p(z), p'(z))` by Horner's scheme.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

pub fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

pub fn multiply(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn pow(base: &[Complex64], e: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..e {
        out = multiply(&out, base);
    }
    out
}

/// Index of the highest coefficient above `rel_tol · max|c|`, or `None` for the zero polynomial.
pub fn effective_degree(coeffs: &[Complex64], rel_tol: f64) -> Option<usize> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if scale == 0.0 {
        return None;
    }
    coeffs.iter().rposition(|c| c.norm() > rel_tol * scale)
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_and_derivative() {
        // 1 + 2z + 3z²
        let p = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let (v, d) = eval_with_derivative(&p, c(2.0, 0.0));
        assert_eq!(v, c(17.0, 0.0));
        assert_eq!(d, c(14.0, 0.0));
        assert_eq!(derivative(&p), vec![c(2.0, 0.0), c(6.0, 0.0)]);
    }

    #[test]
    fn products() {
        let a = [c(-1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(pow(&a, 2), vec![c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(effective_degree(&[c(1.0, 0.0), c(0.0, 0.0)], 1e-14), Some(0));
        assert_eq!(effective_degree(&[c(0.0, 0.0)], 1e-14), None);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s = compensated_sum([1.0, 1e-16, -1.0, 1e-16]);
        assert_eq!(s, 2e-16);
    }
}
