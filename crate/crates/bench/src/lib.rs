//! Fixtures shared by the benchmarks.

use rayleigh_core::moments::index_set;
use rayleigh_core::torus::gen_random_at_separation;
use rayleigh_core::{FrequencyIndexSet, NodeSet, WeightVector};

/// Random nodes at separation `sep_n / n` with unit weights and the index
/// set for bandlimit `n`.
pub fn instance(
    dim: usize,
    n: f64,
    sep_n: f64,
    count: usize,
) -> (NodeSet, WeightVector, FrequencyIndexSet) {
    let nodes = gen_random_at_separation(dim, sep_n / n, count, 7).expect("feasible fixture");
    let weights = WeightVector::ones(nodes.len());
    let indices = index_set(dim, n).expect("valid bandlimit");
    (nodes, weights, indices)
}
