//! Shared sample moments.

/// Mean and sample standard deviation (N-1 denominator) in one pass
/// (Welford). A single value or a constant vector yields sigma = 0.
///
/// Both the statistical normalizer and the threshold margin are defined
/// over these same two moments, so they share this routine.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let sigma = if values.len() < 2 {
        0.0
    } else {
        (m2 / (values.len() - 1) as f64).sqrt()
    };
    (mean, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_moments() {
        let (mu, sigma) = mean_std(&[1.0, 2.0, 3.0]);
        assert!((mu - 2.0).abs() < 1e-15);
        assert!((sigma - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_and_singleton_vectors_have_zero_sigma() {
        assert_eq!(mean_std(&[5.0, 5.0, 5.0]).1, 0.0);
        assert_eq!(mean_std(&[7.0]).1, 0.0);
    }
}
