//! Floating-point polynomial root finding (Aberth–Ehrlich iteration).

use num_complex::Complex64;

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial given lowest degree first.
///
/// Intended for squarefree inputs of small degree; clustered roots converge
/// slowly and lose roughly half the working precision.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<f64> = c.iter().map(|v| v / lead).collect();
    // Cauchy bound for the starting circle
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        sum += d.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // Newton polish
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&c, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_cyclotomic_quartic() {
        let roots = complex_roots(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(roots.len(), 4);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-12);
            assert!((r.powu(4) + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn real_roots() {
        let mut roots: Vec<f64> = complex_roots(&[6.0, -5.0, 1.0])
            .iter()
            .map(|z| z.re)
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((roots[0] - 2.0).abs() < 1e-12 && (roots[1] - 3.0).abs() < 1e-12);
    }
}
