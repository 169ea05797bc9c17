use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A univariate sample of finite observations.
///
/// `known_mean`, when present, replaces the sample mean wherever the
/// estimators center the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    known_mean: Option<f64>,
    assumed_symmetric: bool,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self {
            values,
            known_mean: None,
            assumed_symmetric: false,
        })
    }

    pub fn with_known_mean(mut self, mean: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(invalid("known_mean", "must be finite"));
        }
        self.known_mean = Some(mean);
        Ok(self)
    }

    pub fn assume_symmetric(mut self, symmetric: bool) -> Self {
        self.assumed_symmetric = symmetric;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn known_mean(&self) -> Option<f64> {
        self.known_mean
    }

    pub fn assumed_symmetric(&self) -> bool {
        self.assumed_symmetric
    }

    pub fn sample_mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// The mean used for centering: the known mean if given, else the sample mean.
    pub fn center(&self) -> f64 {
        self.known_mean.unwrap_or_else(|| self.sample_mean())
    }

    pub fn centered(&self) -> Vec<f64> {
        let c = self.center();
        self.values.iter().map(|x| x - c).collect()
    }

    /// Copy of the sample with observation `i` removed, keeping the flags.
    pub(crate) fn without(&self, i: usize) -> Sample {
        let mut values = self.values.clone();
        values.remove(i);
        Sample {
            values,
            known_mean: self.known_mean,
            assumed_symmetric: self.assumed_symmetric,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert_eq!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteValue { index: 1 })
        );
        assert!(Sample::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn centering_prefers_known_mean() {
        let s = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.centered(), vec![-1.0, 0.0, 1.0]);
        let s = s.with_known_mean(0.0).unwrap();
        assert_eq!(s.centered(), vec![1.0, 2.0, 3.0]);
    }
}
