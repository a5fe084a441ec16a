//! Frequency index sets, (confluent) Vandermonde blocks, Fisher information
//! and the Cramér–Rao bound for sparse super-resolution on the torus.

mod export;
mod linalg;
mod synth;

use std::f64::consts::PI;
use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::NodeSet;

pub use export::{read_matrix_csv, write_matrix_csv, FimRecord};
pub use linalg::{hermitian_eigen, singular_values, HermitianEigen};
pub use synth::synth_moments;

/// Largest index set `index_set` will enumerate.
pub const MAX_INDICES: usize = 50_000_000;

/// Relative eigenvalue threshold below which the Fisher information is
/// treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

/// Relative singular value threshold below which a block Jacobian is
/// reported as rank deficient by [`condition_proxy`].
pub const RANK_RATIO: f64 = 1e-13;

/// `{k ∈ ℤ^d : ‖k‖₂ ≤ n}` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyIndexSet {
    dim: usize,
    bandlimit: f64,
    flat: Vec<i64>,
}

impl FrequencyIndexSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandlimit(&self) -> f64 {
        self.bandlimit
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn index(&self, row: usize) -> &[i64] {
        &self.flat[row * self.dim..(row + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.flat.chunks_exact(self.dim)
    }

    /// Row of `k`, if present.
    pub fn position(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.index(mid).cmp(k) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// Enumerate the frequency index set by scanning `[−⌊n⌋, ⌊n⌋]^d`.
pub fn index_set(dim: usize, bandlimit: f64) -> Result<FrequencyIndexSet> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(bandlimit > 0.0 && bandlimit.is_finite()) {
        return Err(Error::Domain(format!(
            "bandlimit must be positive and finite, got {bandlimit}"
        )));
    }
    let m = bandlimit.floor() as i64;
    let side = (2 * m + 1) as f64;
    if side.powi(dim as i32) > MAX_INDICES as f64 {
        return Err(Error::Config(format!(
            "index box of side {side} in d={dim} exceeds {MAX_INDICES} entries"
        )));
    }
    let side = (2 * m + 1) as usize;
    let total = side.pow(dim as u32);
    let mut flat = Vec::new();
    let mut k = vec![0i64; dim];
    for code in 0..total {
        let mut rest = code;
        for slot in k.iter_mut().rev() {
            *slot = (rest % side) as i64 - m;
            rest /= side;
        }
        let sq: i64 = k.iter().map(|x| x * x).sum();
        if (sq as f64).sqrt() <= bandlimit {
            flat.extend_from_slice(&k);
        }
    }
    Ok(FrequencyIndexSet {
        dim,
        bandlimit,
        flat,
    })
}

/// Nonzero complex weights aligned with the node order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct WeightVector {
    values: Vec<Complex64>,
}

impl WeightVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("weight vector is empty".into()));
        }
        for (i, a) in values.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) || a.norm() == 0.0 {
                return Err(Error::Domain(format!("weight {i} = {a} is not a nonzero finite number")));
            }
        }
        Ok(Self { values })
    }

    pub fn ones(len: usize) -> Self {
        Self {
            values: vec![Complex64::new(1.0, 0.0); len],
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn alpha_min(&self) -> f64 {
        self.values.iter().map(|a| a.norm()).fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<[f64; 2]>> for WeightVector {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<WeightVector> for Vec<[f64; 2]> {
    fn from(w: WeightVector) -> Self {
        w.values.into_iter().map(|z| [z.re, z.im]).collect()
    }
}

fn check_dims(nodes: &NodeSet, indices: &FrequencyIndexSet) -> Result<()> {
    if nodes.dim() != indices.dim() {
        return Err(Error::Domain(format!(
            "node dimension {} does not match index dimension {}",
            nodes.dim(),
            indices.dim()
        )));
    }
    Ok(())
}

fn phase(t: &[f64], k: &[i64]) -> Complex64 {
    let dot: f64 = t.iter().zip(k).map(|(x, &j)| x * j as f64).sum();
    let frac = dot - dot.round();
    Complex64::from_polar(1.0, -2.0 * PI * frac)
}

/// `𝒜` with entries `e^{−2πi t·k}`, rows indexed by `k`, columns by `t`.
pub fn vandermonde(nodes: &NodeSet, indices: &FrequencyIndexSet) -> Result<DMatrix<Complex64>> {
    check_dims(nodes, indices)?;
    Ok(DMatrix::from_fn(indices.len(), nodes.len(), |r, c| {
        phase(nodes.point(c), indices.index(r))
    }))
}

/// Unweighted confluent block `𝒜̃_s` with entries `−2πi k_s e^{−2πi t·k}`.
/// The axis is 0-based.
pub fn confluent_block(
    nodes: &NodeSet,
    indices: &FrequencyIndexSet,
    axis: usize,
) -> Result<DMatrix<Complex64>> {
    check_dims(nodes, indices)?;
    if axis >= nodes.dim() {
        return Err(Error::Domain(format!(
            "axis {axis} out of range for dimension {}",
            nodes.dim()
        )));
    }
    Ok(DMatrix::from_fn(indices.len(), nodes.len(), |r, c| {
        let k = indices.index(r);
        Complex64::new(0.0, -2.0 * PI * k[axis] as f64) * phase(nodes.point(c), k)
    }))
}

/// `G = (𝒜, 𝒜̃_1, …, 𝒜̃_d) D_α` with column blocks of width `|Y|`.
#[derive(Clone, Debug)]
pub struct BlockJacobian {
    matrix: DMatrix<Complex64>,
    nodes: usize,
    dim: usize,
}

impl BlockJacobian {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Columns of block `b`: 0 is the weight block, `1..=d` the node
    /// coordinate blocks.
    pub fn block_columns(&self, b: usize) -> Range<usize> {
        b * self.nodes..(b + 1) * self.nodes
    }

    pub fn block_count(&self) -> usize {
        self.dim + 1
    }

    pub fn sigma_min(&self) -> Result<f64> {
        sigma_min(&self.matrix)
    }
}

pub fn block_jacobian(
    nodes: &NodeSet,
    weights: &WeightVector,
    indices: &FrequencyIndexSet,
) -> Result<BlockJacobian> {
    check_dims(nodes, indices)?;
    if weights.len() != nodes.len() {
        return Err(Error::Domain(format!(
            "{} weights for {} nodes",
            weights.len(),
            nodes.len()
        )));
    }
    let d = nodes.dim();
    let y = nodes.len();
    if indices.len() < (d + 1) * y {
        return Err(Error::Precondition(format!(
            "underdetermined: |I| = {} < (d+1)|Y| = {}",
            indices.len(),
            (d + 1) * y
        )));
    }
    let alpha = weights.values();
    let mut matrix = DMatrix::zeros(indices.len(), (d + 1) * y);
    for (r, k) in indices.iter().enumerate() {
        for (j, t) in nodes.points().enumerate() {
            let e = phase(t, k);
            matrix[(r, j)] = e;
            for s in 0..d {
                matrix[(r, (s + 1) * y + j)] =
                    Complex64::new(0.0, -2.0 * PI * k[s] as f64) * e * alpha[j];
            }
        }
    }
    Ok(BlockJacobian {
        matrix,
        nodes: y,
        dim: d,
    })
}

/// Smallest singular value.
pub fn sigma_min(m: &DMatrix<Complex64>) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

/// `J = δ^{−2} G*G`, symmetrised.
#[derive(Clone, Debug)]
pub struct FisherInfo {
    matrix: DMatrix<Complex64>,
    noise_sigma: f64,
}

impl FisherInfo {
    pub fn from_jacobian(g: &BlockJacobian, noise_sigma: f64) -> Result<Self> {
        if !(noise_sigma > 0.0 && noise_sigma.is_finite()) {
            return Err(Error::Domain(format!("noise level must be positive, got {noise_sigma}")));
        }
        let gram = g.matrix().ad_mul(g.matrix()) / Complex64::new(noise_sigma * noise_sigma, 0.0);
        let matrix = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self {
            matrix,
            noise_sigma,
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eigen(&self.matrix)
    }
}

pub fn fisher_information(
    nodes: &NodeSet,
    weights: &WeightVector,
    noise_sigma: f64,
    indices: &FrequencyIndexSet,
) -> Result<FisherInfo> {
    FisherInfo::from_jacobian(&block_jacobian(nodes, weights, indices)?, noise_sigma)
}

/// Diagonal of `J^{−1}`, the per-parameter variance floor.
pub fn cramer_rao_bound(fim: &FisherInfo) -> Result<Vec<f64>> {
    crb_from_eigen(&fim.eigen()?)
}

fn crb_from_eigen(eig: &HermitianEigen) -> Result<Vec<f64>> {
    let (lambda_min, lambda_max) = (eig.lambda_min(), eig.lambda_max());
    if lambda_min <= SINGULAR_RATIO * lambda_max {
        return Err(Error::Singular {
            lambda_min,
            lambda_max,
        });
    }
    let n = eig.values.len();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| eig.vectors[(i, j)].norm_sqr() / eig.values[j])
                .sum()
        })
        .collect())
}

/// `λ_min(J)` and the CRB diagonal as an exportable record.
pub fn fim_record(fim: &FisherInfo) -> Result<FimRecord> {
    let eig = fim.eigen()?;
    Ok(FimRecord {
        lambda_min: eig.lambda_min(),
        crb_diag: crb_from_eigen(&eig)?,
    })
}

/// `σ_min(G)` for unit weights.
pub fn unit_block_sigma_min(nodes: &NodeSet, indices: &FrequencyIndexSet) -> Result<f64> {
    block_jacobian(nodes, &WeightVector::ones(nodes.len()), indices)?.sigma_min()
}

/// `n / σ_min(G)` for unit weights; infinite when `G` is rank deficient.
pub fn condition_proxy(nodes: &NodeSet, bandlimit: f64) -> Result<f64> {
    let indices = index_set(nodes.dim(), bandlimit)?;
    let g = block_jacobian(nodes, &WeightVector::ones(nodes.len()), &indices)?;
    let sv = singular_values(g.matrix())?;
    Ok(proxy_from_singular_values(bandlimit, &sv))
}

pub(crate) fn proxy_from_singular_values(bandlimit: f64, sv: &[f64]) -> f64 {
    let smin = sv[0];
    let smax = *sv.last().expect("nonempty");
    if smin <= RANK_RATIO * smax {
        f64::INFINITY
    } else {
        bandlimit / smin
    }
}

/// Both sides of `λ_min(J) ≥ min(1, α_min²) δ^{−2} σ_min²(G_1)`, as
/// `(lower, lambda_min)`.
pub fn weight_floor_bound(
    nodes: &NodeSet,
    weights: &WeightVector,
    noise_sigma: f64,
    indices: &FrequencyIndexSet,
) -> Result<(f64, f64)> {
    let smin = unit_block_sigma_min(nodes, indices)?;
    let lambda_min = fisher_information(nodes, weights, noise_sigma, indices)?
        .eigen()?
        .lambda_min();
    let a = weights.alpha_min();
    let lower = (a * a).min(1.0) * smin * smin / (noise_sigma * noise_sigma);
    Ok((lower, lambda_min))
}

/// `(σ_min²(G), σ_min²(𝒜))` for unit weights.
pub fn vandermonde_upper_bound(
    nodes: &NodeSet,
    indices: &FrequencyIndexSet,
) -> Result<(f64, f64)> {
    let block = unit_block_sigma_min(nodes, indices)?;
    let vand = sigma_min(&vandermonde(nodes, indices)?)?;
    Ok((block * block, vand * vand))
}
