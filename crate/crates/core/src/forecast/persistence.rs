use crate::error::{Error, Result};

/// Repeats the last training observation for horizons `1..=horizons`.
pub fn persistence_forecast(train: &[f64], horizons: usize) -> Result<Vec<f64>> {
    match train.last() {
        Some(&last) => Ok(vec![last; horizons]),
        None => Err(Error::InvalidArgument(
            "persistence needs at least one training observation".into(),
        )),
    }
}

/// One-step persistence over target times `first..=last` (one-based):
/// each `y_t` is forecast by `y_{t-1}`.
pub fn rolling_persistence(series: &[f64], first: usize, last: usize) -> Result<Vec<f64>> {
    if first < 2 || last > series.len() || first > last {
        return Err(Error::InvalidArgument(format!(
            "invalid persistence window {first}..={last} for length {}",
            series.len()
        )));
    }
    Ok(series[first - 2..last - 1].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::smape;

    #[test]
    fn repeats_last_value() {
        assert_eq!(persistence_forecast(&[1.0, 4.0, 7.0], 3).unwrap(), vec![7.0; 3]);
        assert_eq!(persistence_forecast(&[2.0], 1).unwrap(), vec![2.0]);
        assert!(persistence_forecast(&[], 2).is_err());
    }

    #[test]
    fn one_step_matches_naive_shift() {
        let y = [1.0, 2.0, 3.0, 5.0];
        assert_eq!(rolling_persistence(&y, 2, 4).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(
            rolling_persistence(&y, 4, 4).unwrap(),
            persistence_forecast(&y[..3], 1).unwrap()
        );
        assert!(rolling_persistence(&y, 1, 4).is_err());
    }

    #[test]
    fn constant_continuation_scores_zero() {
        let y = [3.0; 10];
        let f = persistence_forecast(&y[..6], 4).unwrap();
        assert_eq!(smape(&f, &y[6..]).unwrap(), 0.0);
    }
}
