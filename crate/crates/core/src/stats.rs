//! Small statistics helpers shared by the experiment harness.

use statrs::distribution::{Beta, ContinuousCDF};

/// Kahan-Babuska compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Mean, sample standard deviation, min and max of a non-empty sample,
/// accumulated in order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe(xs: &[f64]) -> Moments {
    assert!(!xs.is_empty(), "empty sample");
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().total() / n;
    let ss = xs.iter().map(|x| (x - mean).powi(2)).collect::<CompensatedSum>().total();
    let std_dev = if xs.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
    let (min, max) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    // Clamp away the last-ulp disagreement between the summed mean and the
    // extremes when every sample is equal.
    Moments { mean: mean.clamp(min, max), std_dev, min, max }
}

/// Two-sided Clopper-Pearson interval for `successes` out of `trials` at
/// the given confidence level.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let lower = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0).expect("valid shape").inverse_cdf(alpha / 2.0)
    };
    let upper = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).expect("valid shape").inverse_cdf(1.0 - alpha / 2.0)
    };
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::default();
        acc.add(1e16);
        for _ in 0..10 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.total(), 10.0);
    }

    #[test]
    fn describe_constant_sample() {
        let m = describe(&[0.1; 7]);
        assert_eq!((m.mean, m.min, m.max, m.std_dev), (0.1, 0.1, 0.1, 0.0));
    }

    #[test]
    fn clopper_pearson_zero_successes() {
        // Upper limit solves (1 - p)^n = alpha / 2.
        let (lo, hi) = clopper_pearson(0, 1000, 0.999);
        assert_eq!(lo, 0.0);
        let expected = 1.0 - 0.0005f64.powf(1.0 / 1000.0);
        assert!((hi - expected).abs() < 1e-9, "{hi} vs {expected}");
    }

    #[test]
    fn clopper_pearson_brackets_estimate() {
        let (lo, hi) = clopper_pearson(30, 100, 0.95);
        assert!(lo < 0.3 && 0.3 < hi);
        // Published values for 30/100: [0.2124, 0.3998].
        assert!((lo - 0.2124).abs() < 5e-4 && (hi - 0.3998).abs() < 5e-4, "{lo} {hi}");
    }
}
