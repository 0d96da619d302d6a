use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Half-width of the 95% Wilson score interval for `successes / trials`.
pub fn wilson_halfwidth(successes: usize, trials: usize) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    Z_95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// `P(chi^2_dof <= q) = p`.
pub fn chi_square_quantile(dof: usize, p: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("chi-square degrees of freedom are positive")
        .inverse_cdf(p)
}

/// Pearson statistic and degrees of freedom for observed counts against
/// expected probabilities. Cells with zero expectation are dropped from the
/// degrees of freedom; any observation in such a cell gives `+inf`.
pub fn pearson(observed: &[u64], probs: &[f64]) -> (f64, usize) {
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * total as f64;
        if e > 0.0 {
            cells += 1;
            let d = o as f64 - e;
            stat += d * d / e;
        } else if o > 0 {
            return (f64::INFINITY, cells.saturating_sub(1));
        }
    }
    (stat, cells.saturating_sub(1))
}

/// Median of a nonempty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_value() {
        // 10/100: interval (0.0552, 0.1744)
        let h = wilson_halfwidth(10, 100);
        assert!((h - 0.059_568_262).abs() < 1e-8, "{h}");
        assert!(wilson_halfwidth(0, 50) > 0.0);
    }

    #[test]
    fn chi_square_quantiles() {
        assert!((chi_square_quantile(1, 0.999) - 10.828).abs() < 1e-3);
        assert!((chi_square_quantile(3, 0.999) - 16.266).abs() < 1e-3);
    }

    #[test]
    fn pearson_statistic() {
        let (s, dof) = pearson(&[60, 40], &[0.5, 0.5]);
        assert_eq!(dof, 1);
        assert!((s - 4.0).abs() < 1e-12);
        assert_eq!(pearson(&[10, 0], &[1.0, 0.0]), (0.0, 0));
        assert!(pearson(&[9, 1], &[1.0, 0.0]).0.is_infinite());
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
