//! Recovering a kernel from a black-box linear functional by probing it with
//! unit impulses `δ^t(e_j)`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::kernel::{KernelSeq, Tail};
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::seqspace::{include, FiniteSeq};

/// Random pairs used by the linearity spot check.
pub const LINEARITY_TRIALS: usize = 32;
/// Relative tolerance of the linearity spot check.
pub const LINEARITY_TOL: f64 = 1e-9;
const DEFAULT_SEED: u64 = 0x6b65_726e_656c;

/// A kernel read off a black box on `[horizon, 0]`.
///
/// Nothing is known about the functional below the horizon, so the kernel
/// carries a zero tail: it is exact only for inputs supported in the window.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub kernel: KernelSeq,
    pub horizon: i64,
    /// Worst relative residual seen by the linearity check.
    pub linearity_residual: f64,
}

/// `κ_t e_j = H(δ^t(e_j))` for `t = horizon..=0`, after a randomized
/// linearity check. See [`extract_kernel_seeded`].
pub fn extract_kernel(h: &dyn Functional, in_dim: usize, horizon: i64) -> Result<Extraction> {
    extract_kernel_seeded(h, in_dim, horizon, DEFAULT_SEED)
}

/// Like [`extract_kernel`] with an explicit seed for the linearity check.
pub fn extract_kernel_seeded(h: &dyn Functional, in_dim: usize, horizon: i64, seed: u64) -> Result<Extraction> {
    if in_dim == 0 {
        return Err(Error::Invalid("input dimension must be positive".into()));
    }
    let horizon = horizon.min(0);
    let zero = FiniteSeq::zeros(in_dim);
    let out_dim = h.apply(&zero)?.len();
    if out_dim == 0 {
        return Err(Error::Invalid("functional has an empty codomain".into()));
    }
    let linearity_residual = linearity_residual(h, in_dim, horizon, out_dim, seed)?;
    if linearity_residual > LINEARITY_TOL {
        return Err(Error::NotLinear { residual: linearity_residual });
    }
    let mut mats = Vec::with_capacity((1 - horizon) as usize);
    for t in horizon..=0 {
        let mut k = DMatrix::zeros(out_dim, in_dim);
        for j in 0..in_dim {
            let col = probe(h, &include(DVector::from_fn(in_dim, |i, _| (i == j) as u8 as f64), t), out_dim)?;
            k.set_column(j, &col);
        }
        mats.push(k);
    }
    let kernel = KernelSeq::new(in_dim, out_dim, horizon, mats, Tail::Zero)?;
    Ok(Extraction { kernel, horizon, linearity_residual })
}

fn probe(h: &dyn Functional, z: &FiniteSeq, out_dim: usize) -> Result<DVector<f64>> {
    let y = h.apply(z)?;
    if y.len() != out_dim {
        return Err(Error::DimensionMismatch { expected: out_dim, found: y.len() });
    }
    Ok(y)
}

/// Largest relative defect `‖H(az¹+bz²) - aH(z¹) - bH(z²)‖ / scale` over
/// random pairs, where `scale` sums the norms of the three terms. The zero
/// input is included so affine maps are caught as well.
fn linearity_residual(h: &dyn Functional, in_dim: usize, horizon: i64, out_dim: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = (1 - horizon) as usize;
    let random_seq = |rng: &mut ChaCha8Rng| {
        let entries = (0..len)
            .map(|_| DVector::from_fn(in_dim, |_, _| rng.sample::<f64, _>(StandardNormal)))
            .collect();
        FiniteSeq::new(in_dim, horizon, entries)
    };
    let mut worst = 0.0f64;
    let y0 = probe(h, &FiniteSeq::zeros(in_dim), out_dim)?;
    for _ in 0..LINEARITY_TRIALS {
        let z1 = random_seq(&mut rng)?;
        let z2 = random_seq(&mut rng)?;
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let y1 = probe(h, &z1, out_dim)?;
        let y2 = probe(h, &z2, out_dim)?;
        let y12 = probe(h, &z1.lin_comb(a, &z2, b)?, out_dim)?;
        let scale = y12.norm() + a.abs() * y1.norm() + b.abs() * y2.norm();
        let defect = (&y12 - &y1 * a - &y2 * b).norm();
        let rel = if scale > 0.0 { defect / scale } else { defect };
        // H(0) must vanish relative to the typical output size
        let rel0 = if y1.norm() > 0.0 { y0.norm() / y1.norm() } else { y0.norm() };
        worst = worst.max(rel).max(rel0);
    }
    Ok(worst)
}
