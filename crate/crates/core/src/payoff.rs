use crate::error::{Error, Result};

/// A real-valued function on the alphabet, stored as one value per symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffFunction {
    values: Vec<f64>,
}

impl PayoffFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::domain(
                "payoff needs one value per symbol of an alphabet of size >= 2",
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("payoff value for symbol {i} is not finite")));
        }
        Ok(PayoffFunction { values })
    }

    /// `g(x) = 1` if `x == z`, else 0.
    pub fn indicator(z: u8, alphabet_size: usize) -> Result<Self> {
        if (z as usize) >= alphabet_size {
            return Err(Error::InvalidSymbol {
                index: z as usize,
                size: alphabet_size,
            });
        }
        let mut values = vec![0.0; alphabet_size];
        values[z as usize] = 1.0;
        PayoffFunction::new(values)
    }

    pub fn constant(c: f64, alphabet_size: usize) -> Result<Self> {
        PayoffFunction::new(vec![c; alphabet_size])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alphabet_size(&self) -> usize {
        self.values.len()
    }

    pub fn at(&self, x: u8) -> f64 {
        self.values[x as usize]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `sum_x counts[x] * g(x)`, accumulated in symbol order.
    pub fn weighted_sum(&self, counts: &[u64]) -> f64 {
        debug_assert_eq!(counts.len(), self.values.len());
        counts
            .iter()
            .zip(&self.values)
            .fold(0.0, |acc, (&c, &v)| acc + c as f64 * v)
    }

    /// `sum_x probs[x] * g(x)`.
    pub fn expectation(&self, probs: &[f64]) -> f64 {
        debug_assert_eq!(probs.len(), self.values.len());
        probs.iter().zip(&self.values).map(|(p, v)| p * v).sum()
    }
}
