use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::boolfn::BitString;
use crate::error::{Error, Result};

const NEGATIVE_TOLERANCE: f64 = 1e-12;
const SUM_TOLERANCE: f64 = 1e-9;

/// Categorical sampler over basis states `0..probs.len()`.
#[derive(Clone, Debug)]
pub struct Sampler {
    width: usize,
    dist: WeightedIndex<f64>,
}

impl Sampler {
    pub fn new(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() || !probs.len().is_power_of_two() {
            return Err(Error::InvalidDistribution(format!(
                "length {} is not a power of two",
                probs.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < -NEGATIVE_TOLERANCE)
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {p}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        let weights = probs.iter().map(|p| p.max(0.0));
        let dist = WeightedIndex::new(weights)
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        Ok(Self {
            width: probs.len().trailing_zeros() as usize,
            dist,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        BitString::from_raw(self.width, self.sample_index(rng) as u32)
    }
}

/// `shots` i.i.d. draws from `probs`; widths follow from `probs.len()`.
pub fn sample_bitstrings<R: Rng + ?Sized>(
    probs: &[f64],
    shots: usize,
    rng: &mut R,
) -> Result<Vec<BitString>> {
    let sampler = Sampler::new(probs)?;
    Ok((0..shots).map(|_| sampler.sample(rng)).collect())
}
