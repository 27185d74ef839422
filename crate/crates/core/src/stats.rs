//! Small summary statistics shared by the ensemble drivers.

/// Arithmetic mean, accumulated relative to the first value so that a
/// constant sample returns that value exactly.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let first = values[0];
    first + values.iter().map(|v| v - first).sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (`n − 1` denominator); zero for fewer than two values.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_statistics() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&v), 2.5);
        assert!((std_dev(&v) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(median(&v), 2.5);
        assert_eq!(median(&[3.0, -1.0, 2.0]), 2.0);
        assert_eq!(std_dev(&[7.0]), 0.0);
        assert_eq!(std_dev(&[0.5; 10]), 0.0);
    }
}
