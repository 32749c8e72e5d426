//! Orthant partitions of `R^m` and the cone certificate bounding
//! `Σ_t ‖κ_t z_t‖` by outputs of `H` on sign-sorted pieces of `z`.
//!
//! Inside one closed orthant, `Σ_n ‖v_n‖ ≤ c·‖Σ_n v_n‖` with `c = √m`
//! (project onto the diagonal `(1, …, 1)`). For `m ≤ 2` this is the familiar
//! `√2`; for `m ≥ 3` the constant `√2` is too small, e.g. `e₁, e₂, e₃` give
//! `3 > √2·√3`. The certificate therefore uses `c = max(√2, √m)`.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::kernel::KernelSeq;
use crate::error::Result;
use crate::seqspace::FiniteSeq;

/// Relative slack for rounding in [`ConeCertificate::holds`]; the inequality
/// is tight for vectors on a coordinate axis when `m = 2`.
const ROUNDING_SLACK: f64 = 1e-12;

/// 1-based orthant of `y`: bit `i` of `index - 1` is set iff `y_i < 0`.
/// Zero coordinates count as non-negative, so `0` lies in orthant 1.
pub fn orthant_index(y: &DVector<f64>) -> usize {
    1 + y
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < 0.0)
        .map(|(i, _)| 1usize << i)
        .sum::<usize>()
}

/// Cone constant used for outputs in `R^m`.
pub fn cone_constant(m: usize) -> f64 {
    (m.max(2) as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeCertificate {
    /// `J_i`: times `t` with `κ_t z_t` in orthant `i` and non-zero. Empty
    /// sets are omitted.
    pub sets: BTreeMap<usize, Vec<i64>>,
    /// `Σ_t ‖κ_t z_t‖`.
    pub lhs: f64,
    /// `c·Σ_i ‖H(z^i)‖` with `z^i = Σ_{t ∈ J_i} δ^t(z_t)`.
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Builds the orthant split of `z` for `κ` and evaluates both sides.
pub fn cone_certificate(kernel: &KernelSeq, z: &FiniteSeq) -> Result<ConeCertificate> {
    // rejects dimension mismatch and inputs below a non-zero tail
    kernel.eval(z)?;
    let m = kernel.out_dim();
    let mut sets: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    let mut pieces: BTreeMap<usize, DVector<f64>> = BTreeMap::new();
    let mut lhs = 0.0;
    for (t, zt) in z.iter() {
        let Some(k) = kernel.at(t) else { continue };
        let v = k * zt;
        if v.iter().all(|&x| x == 0.0) {
            continue;
        }
        lhs += v.norm();
        let i = orthant_index(&v);
        sets.entry(i).or_default().push(t);
        // H(z^i) is the sum of the κ_t z_t collected in J_i
        *pieces.entry(i).or_insert_with(|| DVector::zeros(m)) += v;
    }
    let constant = cone_constant(m);
    let rhs = constant * pieces.values().map(|v| v.norm()).sum::<f64>();
    let holds = lhs <= rhs * (1.0 + ROUNDING_SLACK);
    Ok(ConeCertificate { sets, lhs, rhs, constant, holds })
}
