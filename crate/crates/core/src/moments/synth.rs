use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{check_dims, phase, FrequencyIndexSet, WeightVector};
use crate::error::{Error, Result};
use crate::torus::NodeSet;

/// Noisy moments `μ̂(k) = Σ_t α_t e^{−2πi t·k} + ρ̂(k)` with circular complex
/// Gaussian noise of total variance `δ²` (`δ²/2` per real component).
pub fn synth_moments(
    nodes: &NodeSet,
    weights: &WeightVector,
    noise_sigma: f64,
    indices: &FrequencyIndexSet,
    seed: u64,
) -> Result<Vec<Complex64>> {
    check_dims(nodes, indices)?;
    if weights.len() != nodes.len() {
        return Err(Error::Domain("weight count does not match node count".into()));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::Domain(format!("noise level must be nonnegative, got {noise_sigma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, noise_sigma / 2f64.sqrt()).expect("valid standard deviation");
    Ok(indices
        .iter()
        .map(|k| {
            let clean: Complex64 = nodes
                .points()
                .zip(weights.values())
                .map(|(t, a)| a * phase(t, k))
                .sum();
            if noise_sigma > 0.0 {
                clean + Complex64::new(noise.sample(&mut rng), noise.sample(&mut rng))
            } else {
                clean
            }
        })
        .collect())
}
