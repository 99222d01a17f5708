use crate::error::{Error, Result};

/// Samples needed for 99% confidence of one hit, given hit probability `p`.
///
/// `p = 1` gives 1 and `p = 0` gives `None`.
pub fn stt_from_probability(p: f64) -> Option<f64> {
    stt_from_miss(1.0 - p)
}

fn stt_from_miss(q: f64) -> Option<f64> {
    if q <= 0.0 {
        Some(1.0)
    } else if q >= 1.0 {
        None
    } else {
        Some(0.01f64.ln() / q.ln())
    }
}

/// Sample-to-target: `p` is the fraction of `costs` at or above
/// `c_opt·(1 - epsilon)`. `None` when no sample reaches the target.
pub fn stt(costs: &[f64], c_opt: f64, epsilon: f64) -> Option<f64> {
    if costs.is_empty() || !(c_opt > 0.0) {
        return None;
    }
    let target = c_opt * (1.0 - epsilon) - 1e-9 * c_opt;
    let misses = costs.iter().filter(|&&c| c < target).count();
    // The miss fraction is computed directly so that 99 hits out of 100 give
    // exactly ln(0.01)/ln(0.01).
    stt_from_miss(misses as f64 / costs.len() as f64)
}

/// Mean sample cost over `c_opt`.
pub fn approximation_ratio(costs: &[f64], c_opt: f64) -> Result<f64> {
    if costs.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(c_opt > 0.0) {
        return Err(Error::InvalidParameter(format!("c_opt must be positive, got {c_opt}")));
    }
    Ok(costs.iter().sum::<f64>() / costs.len() as f64 / c_opt)
}

/// `1 - best/c_opt`, clamped to `[0, 1]`.
pub fn optimality_gap(best_cost: f64, c_opt: f64) -> f64 {
    if !(c_opt > 0.0) {
        return f64::NAN;
    }
    (1.0 - best_cost / c_opt).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stt_values() {
        let mut costs = vec![1.0; 99];
        costs.push(0.0);
        assert_eq!(stt(&costs, 1.0, 0.0), Some(1.0));
        assert_eq!(stt(&[1.0, 0.0], 1.0, 0.0).map(|v| (v * 1e4).round() / 1e4), Some(6.6439));
        assert_eq!(stt(&[0.5, 0.2], 1.0, 0.01), None);
        assert_eq!(stt(&[1.0], 1.0, 0.0), Some(1.0));
        assert_eq!(stt_from_probability(1.0), Some(1.0));
        assert_eq!(stt_from_probability(0.0), None);
        assert!((stt_from_probability(0.5).unwrap() - 6.6439).abs() < 1e-3);
    }

    #[test]
    fn epsilon_widens_target() {
        let costs = [0.96, 0.5];
        assert_eq!(stt(&costs, 1.0, 0.01), None);
        assert!(stt(&costs, 1.0, 0.05).is_some());
    }

    #[test]
    fn ratio_and_gap() {
        assert_eq!(approximation_ratio(&[1.0, 2.0], 2.0).unwrap(), 0.75);
        assert_eq!(approximation_ratio(&[2.0, 2.0], 2.0).unwrap(), 1.0);
        assert!(matches!(approximation_ratio(&[], 2.0), Err(Error::EmptySamples)));
        assert_eq!(optimality_gap(3.0, 3.0), 0.0);
        assert!((optimality_gap(0.9, 1.0) - 0.1).abs() < 1e-15);
        assert_eq!(optimality_gap(1.0 + 1e-12, 1.0), 0.0);
    }
}
