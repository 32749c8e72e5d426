//! Convolution representations `H(z) = Σ_{t ≤ 0} κ_t z_t` of linear
//! functionals: evaluation, summability, fading-memory classification,
//! weighting sequences, kernel extraction and cone certificates.

pub mod classify;
pub mod cone;
pub mod extract;
pub mod kernel;
pub mod weighting;

pub use classify::{classify, cross_exponent_violations, decide, AnalyticKernel, FmpReport, Property, SummabilityFacts, Tri, Verdict};
pub use cone::{cone_certificate, cone_constant, orthant_index, ConeCertificate};
pub use extract::{extract_kernel, extract_kernel_seeded, Extraction};
pub use kernel::{op_norm, q_seq_norm, KernelSeq, Tail, WindowedValue};
pub use weighting::{construct_weighting, continuity_bound, ConstructedWeighting, ContinuityBound};
