//! Weighting sequences certified by a kernel, and Hölder continuity bounds.

use serde::{Deserialize, Serialize};

use super::classify::AnalyticKernel;
use super::kernel::{KernelSeq, Tail};
use crate::error::{Error, Result};
use crate::exponent::{check_exponent, conjugate};
use crate::seqspace::{TailRule, WeightingSeq};

/// Outcome of [`construct_weighting`].
#[derive(Debug, Clone, PartialEq)]
pub enum ConstructedWeighting {
    /// `w` together with `C = sup_t max{1, ‖κ_t‖}`, so that
    /// `‖H(z)‖ ≤ C·‖z‖_{w,1}`.
    Weighting { w: WeightingSeq, c: f64 },
    /// `w_t` would vanish eventually: the kernel has finite memory and any
    /// weighting sequence works.
    FiniteMemory,
}

/// `w_t = sup_{s ≤ t} min{1, ‖κ_s‖}`, with `‖κ_s‖` replaced by the tail
/// bound `M·ρ^{|s|}` below the window.
pub fn construct_weighting(kernel: &KernelSeq) -> Result<ConstructedWeighting> {
    let (m, rho) = match kernel.tail() {
        Tail::Geometric { m, rho } if m > 0.0 => (m, rho),
        _ => return Ok(ConstructedWeighting::FiniteMemory),
    };
    let start = kernel.window_start();
    let tail_top = m * rho.powf((1 - start) as f64);
    let norms = kernel.op_norms();
    let mut running = tail_top.min(1.0);
    let mut values = Vec::with_capacity(norms.len());
    for n in &norms {
        running = running.max(n.min(1.0));
        values.push(running);
    }
    let c = norms.iter().copied().fold(tail_top, f64::max).max(1.0);
    let w = WeightingSeq::tabulated(start, values, TailRule::Geometric { scale: m, ratio: rho })?;
    Ok(ConstructedWeighting::Weighting { w, c })
}

impl AnalyticKernel {
    /// The constant-norm kernel does not decay, so no weighting sequence
    /// makes it 1-weighted continuous.
    pub fn construct_weighting(&self) -> Result<ConstructedWeighting> {
        self.validate()?;
        match *self {
            AnalyticKernel::PowerLaw { omega } => Ok(ConstructedWeighting::Weighting {
                w: WeightingSeq::polynomial(1.0 + omega)?,
                c: 1.0,
            }),
            AnalyticKernel::ConstantNorm { .. } => Err(Error::NoWeighting),
        }
    }
}

/// Hölder constant of a kernel against a weighting sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ContinuityBound {
    Finite(f64),
    /// The certified series diverges for this weighting.
    Infinite,
}

impl ContinuityBound {
    pub fn finite(self) -> Option<f64> {
        match self {
            ContinuityBound::Finite(b) => Some(b),
            ContinuityBound::Infinite => None,
        }
    }
}

/// Most explicit tail terms summed before the ratio test must kick in.
const MAX_TAIL_TERMS: u64 = 10_000_000;
/// Size of the closing remainder relative to the running sum.
const REMAINDER_REL: f64 = 1e-15;

/// `B = (Σ_t w_t^{-q/p} ‖κ_t‖^q)^{1/q}` (`Σ_t ‖κ_t‖ / w_t` for `p = ∞`),
/// so that `‖H(z)‖ ≤ B·‖z‖_{w,p}`.
///
/// Below the window `‖κ_t‖` is replaced by its tail bound. The tail terms
/// are summed explicitly until their ratio is certifiably below one and the
/// geometric remainder bound is negligible. `Infinite` means the bounding
/// series diverges: `ρ` does not beat the decay rate of `w`.
pub fn continuity_bound(kernel: &KernelSeq, w: &WeightingSeq, p: f64) -> Result<ContinuityBound> {
    check_exponent(p)?;
    if p == 1.0 {
        return Err(Error::Unsupported(
            "the Hölder bound needs p > 1; use construct_weighting for p = 1".into(),
        ));
    }
    let q = conjugate(p);
    let r = if p.is_infinite() { 1.0 } else { 1.0 / p };
    let start = kernel.window_start();
    let mut total: f64 = kernel
        .op_norms()
        .iter()
        .zip(start..=0)
        .map(|(n, t)| w.at(t).powf(-q * r) * n.powf(q))
        .sum();

    if let Tail::Geometric { m, rho } = kernel.tail() {
        if m > 0.0 {
            let gamma = |k: u64| rho.powf(q) * w.step_ratio_bound(k).powf(q * r);
            if rho.powf(q) * w.step_ratio_limit().powf(q * r) >= 1.0 {
                return Ok(ContinuityBound::Infinite);
            }
            let term = |k: u64| (m * rho.powf(k as f64)).powf(q) * w.at(-(k as i64)).powf(-q * r);
            let first = (1 - start) as u64;
            let mut k = first;
            loop {
                let g = gamma(k);
                let a = term(k);
                // close with a geometric remainder once it is negligible
                if g < 1.0 && (a / (1.0 - g) <= REMAINDER_REL * total || a == 0.0) {
                    total += a / (1.0 - g);
                    break;
                }
                if k - first > MAX_TAIL_TERMS {
                    if g < 1.0 {
                        total += a / (1.0 - g);
                        break;
                    }
                    return Err(Error::NumericalFailure("tail ratio test did not settle".into()));
                }
                total += a;
                k += 1;
            }
        }
    }
    if !total.is_finite() {
        return Ok(ContinuityBound::Infinite);
    }
    Ok(ContinuityBound::Finite(total.powf(1.0 / q)))
}
