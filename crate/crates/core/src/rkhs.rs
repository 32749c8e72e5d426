//! Sequence kernels induced by linear functionals and kernel ridge
//! regression over them.
//!
//! A functional `H` into a Hilbert space induces `K(z¹, z²) = ⟨H(z¹), H(z²)⟩`.
//! The `λ`-kernel comes from `H(z) = Σ_t λ^{|t|} δ^t(z_t)` and satisfies
//! `K(z¹, z²) = ⟨z¹_0, z²_0⟩ + λ² K(shift(z¹, 1), shift(z², 1))`.
//!
//! Regression minimizes `(1/M) Σ_i (f(z^i) - y_i)² + γ ‖f‖²`, whose
//! minimizer is `f = Σ_i α_i K(z^i, ·)` with `(G + γM I) α = y`.
//! Because the time slices `δ^t(R^d)` are orthogonal under the `λ`-kernel,
//! fitting on truncated samples `τ_T(z^i)` is the same as fitting over
//! functionals that only look at `z_T, …, z_0`.

use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::convrep::kernel::KernelSeq;
use crate::error::{Error, Result};
use crate::seqspace::FiniteSeq;
use crate::ssm::LinearSSM;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeqKernel {
    /// `⟨κ * z¹, κ * z²⟩` for a kernel `κ` with outputs in `R^m`.
    Induced { kernel: KernelSeq },
    /// `Σ_t λ^{2|t|} ⟨z¹_t, z²_t⟩`, `λ ∈ (0, 1]`.
    Lambda { lambda: f64, dim: usize },
}

impl SeqKernel {
    pub fn lambda(lambda: f64, dim: usize) -> Result<Self> {
        let k = SeqKernel::Lambda { lambda, dim };
        k.validate()?;
        Ok(k)
    }

    pub fn induced(kernel: KernelSeq) -> Self {
        SeqKernel::Induced { kernel }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SeqKernel::Lambda { lambda, dim } => {
                if !(lambda > 0.0 && lambda <= 1.0) {
                    return Err(Error::Invalid(format!("lambda must lie in (0, 1], got {lambda}")));
                }
                if dim == 0 {
                    return Err(Error::Invalid("input dimension must be positive".into()));
                }
                Ok(())
            }
            SeqKernel::Induced { .. } => Ok(()),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            SeqKernel::Induced { kernel } => kernel.in_dim(),
            SeqKernel::Lambda { dim, .. } => *dim,
        }
    }
}

/// `K(z1, z2)`.
pub fn kernel_eval(k: &SeqKernel, z1: &FiniteSeq, z2: &FiniteSeq) -> Result<f64> {
    match k {
        SeqKernel::Induced { kernel } => Ok(kernel.eval(z1)?.dot(&kernel.eval(z2)?)),
        SeqKernel::Lambda { lambda, dim } => {
            z1.check_dim(*dim)?;
            z2.check_dim(*dim)?;
            let lam2 = lambda * lambda;
            let start = z1.support_start().max(z2.support_start());
            // Horner in λ²: each step ages the accumulated past by one
            let mut acc = 0.0;
            for t in start..=0 {
                let (a, b) = (z1.entry(t), z2.entry(t));
                acc = lam2 * acc + a.zip(b).map_or(0.0, |(a, b)| a.dot(b));
            }
            Ok(acc)
        }
    }
}

/// Gram matrix `G_ij = K(z^i, z^j)`, assembled in parallel.
pub fn gram(k: &SeqKernel, samples: &[FiniteSeq]) -> Result<DMatrix<f64>> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| kernel_eval(k, &samples[i], &samples[j])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut g = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            g[(i, i + off)] = v;
            g[(i + off, i)] = v;
        }
    }
    Ok(g)
}

/// A representer-theorem solution `f = Σ_i α_i K(z^i, ·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeFit {
    pub kernel: SeqKernel,
    /// The samples as fitted (already truncated for [`truncated_fit`]).
    pub samples: Vec<FiniteSeq>,
    pub gram: DMatrix<f64>,
    pub gamma: f64,
    pub alpha: DVector<f64>,
    pub targets: DVector<f64>,
    pub truncation: Option<i64>,
}

fn check_problem(samples: &[FiniteSeq], targets: &DVector<f64>, gamma: f64) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    if targets.len() != samples.len() {
        return Err(Error::DimensionMismatch { expected: samples.len(), found: targets.len() });
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    if targets.iter().any(|y| !y.is_finite()) {
        return Err(Error::Invalid("targets must be finite".into()));
    }
    Ok(())
}

/// Solves a symmetric positive definite system, falling back to LU.
fn solve_spd(a: DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(ch) = a.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    a.lu().solve(b).ok_or(Error::Singular)
}

/// `α = (G + γM I)^{-1} y`: mean-square loss with Tikhonov penalty `γ‖f‖²`.
pub fn ridge_fit(k: &SeqKernel, samples: &[FiniteSeq], targets: &DVector<f64>, gamma: f64) -> Result<RidgeFit> {
    k.validate()?;
    check_problem(samples, targets, gamma)?;
    let g = gram(k, samples)?;
    let m = samples.len();
    let sys = &g + DMatrix::identity(m, m) * (gamma * m as f64);
    let alpha = solve_spd(sys, targets)?;
    Ok(RidgeFit {
        kernel: k.clone(),
        samples: samples.to_vec(),
        gram: g,
        gamma,
        alpha,
        targets: targets.clone(),
        truncation: None,
    })
}

/// `ridge_fit` on `τ_T(z^i)`.
pub fn truncated_fit(
    k: &SeqKernel,
    samples: &[FiniteSeq],
    targets: &DVector<f64>,
    gamma: f64,
    cutoff: i64,
) -> Result<RidgeFit> {
    let cutoff = cutoff.min(0);
    let truncated: Vec<FiniteSeq> = samples.iter().map(|z| z.truncate(cutoff)).collect();
    let mut fit = ridge_fit(k, &truncated, targets, gamma)?;
    fit.truncation = Some(cutoff);
    Ok(fit)
}

impl RidgeFit {
    /// `f(z) = Σ_i α_i K(z^i, z)`.
    pub fn predict(&self, z: &FiniteSeq) -> Result<f64> {
        let mut acc = 0.0;
        for (a, s) in self.alpha.iter().zip(&self.samples) {
            acc += a * kernel_eval(&self.kernel, s, z)?;
        }
        Ok(acc)
    }

    pub fn predict_many(&self, zs: &[FiniteSeq]) -> Result<Vec<f64>> {
        zs.par_iter().map(|z| self.predict(z)).collect()
    }

    /// `‖f‖_H = √(αᵀ G α)`.
    pub fn rkhs_norm(&self) -> f64 {
        self.alpha.dot(&(&self.gram * &self.alpha)).max(0.0).sqrt()
    }

    /// Fitted values `f(z^i) = (Gα)_i`.
    pub fn fitted(&self) -> DVector<f64> {
        &self.gram * &self.alpha
    }

    pub fn train_mse(&self) -> f64 {
        let r = self.fitted() - &self.targets;
        r.norm_squared() / self.targets.len() as f64
    }

    /// `(1/M) Σ_i (f(z^i) - y_i)² + γ ‖f‖²`.
    pub fn objective(&self) -> f64 {
        let n = self.rkhs_norm();
        self.train_mse() + self.gamma * n * n
    }

    /// Objective of `Σ_i β_i K(z^i, ·)` for arbitrary coefficients.
    pub fn objective_at(&self, beta: &DVector<f64>) -> f64 {
        let gb = &self.gram * beta;
        let mse = (&gb - &self.targets).norm_squared() / self.targets.len() as f64;
        mse + self.gamma * beta.dot(&gb).max(0.0)
    }

    /// `‖(G + γM I) α - y‖`.
    pub fn normal_equation_residual(&self) -> f64 {
        let m = self.alpha.len() as f64;
        (&self.gram * &self.alpha + &self.alpha * (self.gamma * m) - &self.targets).norm()
    }
}

/// See [`RidgeFit::rkhs_norm`].
pub fn rkhs_norm(fit: &RidgeFit) -> f64 {
    fit.rkhs_norm()
}

/// See [`RidgeFit::predict`].
pub fn predict(fit: &RidgeFit, z: &FiniteSeq) -> Result<f64> {
    fit.predict(z)
}

/// A functional `f(z) = Σ_{t=T}^0 ⟨b_t, z_t⟩` fitted directly over the
/// finite-memory subspace of the `λ`-kernel RKHS.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMemoryFit {
    pub lambda: f64,
    pub dim: usize,
    pub cutoff: i64,
    /// `b_t` for `t = cutoff..=0`.
    pub weights: Vec<DVector<f64>>,
    pub gamma: f64,
}

/// Minimizes `(1/M) Σ_i (f(z^i) - y_i)² + γ ‖f‖²` over
/// `f(z) = Σ_{t=T}^0 ⟨b_t, z_t⟩` in the `λ`-kernel RKHS.
///
/// Such an `f` equals `⟨y, H(·)⟩` with `y_t = λ^{-|t|} b_t`, so
/// `‖f‖² = Σ_t λ^{-2|t|} ‖b_t‖²`. The normal equations are solved in the
/// `y` coordinates, `(ΦᵀΦ + γM I) y = Φᵀ targets` with feature rows
/// `Φ_i = (λ^{|t|} z^i_t)_t`, which stays well conditioned for small `λ`.
pub fn finite_memory_fit(
    k: &SeqKernel,
    samples: &[FiniteSeq],
    targets: &DVector<f64>,
    gamma: f64,
    cutoff: i64,
) -> Result<FiniteMemoryFit> {
    let (lambda, dim) = match *k {
        SeqKernel::Lambda { lambda, dim } => (lambda, dim),
        SeqKernel::Induced { .. } => return Err(Error::OrthogonalityNotCertified),
    };
    k.validate()?;
    check_problem(samples, targets, gamma)?;
    let cutoff = cutoff.min(0);
    let width = (1 - cutoff) as usize;
    let m = samples.len();
    let mut phi = DMatrix::zeros(m, width * dim);
    for (i, z) in samples.iter().enumerate() {
        z.check_dim(dim)?;
        for (slot, t) in (cutoff..=0).enumerate() {
            let scale = lambda.powi((-t) as i32);
            if let Some(v) = z.entry(t) {
                for j in 0..dim {
                    phi[(i, slot * dim + j)] = scale * v[j];
                }
            }
        }
    }
    let n = width * dim;
    let lhs = phi.transpose() * &phi + DMatrix::identity(n, n) * (gamma * m as f64);
    let y = solve_spd(lhs, &(phi.transpose() * targets))?;
    let weights = (cutoff..=0)
        .enumerate()
        .map(|(slot, t)| DVector::from_fn(dim, |j, _| lambda.powi((-t) as i32) * y[slot * dim + j]))
        .collect();
    Ok(FiniteMemoryFit { lambda, dim, cutoff, weights, gamma })
}

impl FiniteMemoryFit {
    pub fn predict(&self, z: &FiniteSeq) -> Result<f64> {
        z.check_dim(self.dim)?;
        Ok((self.cutoff..=0)
            .zip(&self.weights)
            .filter_map(|(t, b)| z.entry(t).map(|v| b.dot(v)))
            .sum())
    }

    /// `‖f‖ = (Σ_t λ^{-2|t|} ‖b_t‖²)^{1/2}`.
    pub fn rkhs_norm(&self) -> f64 {
        (self.cutoff..=0)
            .zip(&self.weights)
            .map(|(t, b)| b.norm_squared() / self.lambda.powi(2 * (-t) as i32))
            .sum::<f64>()
            .sqrt()
    }

    pub fn objective(&self, samples: &[FiniteSeq], targets: &DVector<f64>) -> Result<f64> {
        let mut mse = 0.0;
        for (z, y) in samples.iter().zip(targets.iter()) {
            mse += (self.predict(z)? - y).powi(2);
        }
        let n = self.rkhs_norm();
        Ok(mse / samples.len() as f64 + self.gamma * n * n)
    }
}

/// Agreement between [`truncated_fit`] and [`finite_memory_fit`] at one
/// cutoff, measured on the training samples and extra probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    pub cutoff: i64,
    pub probes: usize,
    /// Largest `|f_T(z) - g(z)| / max(|f_T(z)|, |g(z)|, ‖f_T‖·√K(z,z))`.
    pub prediction_residual: f64,
    /// Relative gap between the two objective values.
    pub objective_residual: f64,
    /// Relative gap between the two RKHS norms.
    pub norm_residual: f64,
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale > 0.0 {
        (a - b).abs() / scale
    } else {
        0.0
    }
}

/// Fits both ways and compares. `probes` are extra inputs on which the two
/// prediction functions are compared besides the samples themselves.
pub fn truncation_equivalence(
    k: &SeqKernel,
    samples: &[FiniteSeq],
    targets: &DVector<f64>,
    gamma: f64,
    cutoff: i64,
    probes: &[FiniteSeq],
) -> Result<Equivalence> {
    let tf = truncated_fit(k, samples, targets, gamma, cutoff)?;
    let fm = finite_memory_fit(k, samples, targets, gamma, cutoff)?;
    let f_norm = tf.rkhs_norm();
    let mut worst = 0.0f64;
    for z in samples.iter().chain(probes) {
        let (a, b) = (tf.predict(z)?, fm.predict(z)?);
        let scale = a.abs().max(b.abs()).max(f_norm * kernel_eval(k, z, z)?.max(0.0).sqrt());
        if scale > 0.0 {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    Ok(Equivalence {
        cutoff: cutoff.min(0),
        probes: samples.len() + probes.len(),
        prediction_residual: worst,
        objective_residual: rel_gap(tf.objective(), fm.objective(samples, targets)?),
        norm_residual: rel_gap(f_norm, fm.rkhs_norm()),
    })
}

/// `H(z) = Σ_t λ^{|t|} δ^t(z_t)`, the functional behind the `λ`-kernel,
/// with values in `ℓ²(R^d)` (represented as a sequence).
pub fn lambda_features(z: &FiniteSeq, lambda: f64) -> FiniteSeq {
    let entries = z.iter().map(|(t, v)| v * lambda.powi((-t) as i32)).collect();
    FiniteSeq::new(z.dim(), z.support_start(), entries).expect("same shape as the input")
}

/// Gram matrices of `f_{y_i} = ⟨y_i, H(·)⟩` in the RKHS and of their images
/// `⟨H(y_i), ·⟩` in `ℓ²(R^d)*`. They differ for `λ < 1`: the embedding is
/// injective but not isometric.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingWitness {
    pub rkhs_gram: DMatrix<f64>,
    pub embedded_gram: DMatrix<f64>,
    pub max_abs_diff: f64,
}

pub fn embedding_witness(lambda: f64, ys: &[FiniteSeq]) -> Result<EmbeddingWitness> {
    SeqKernel::lambda(lambda, ys.first().map_or(1, FiniteSeq::dim))?;
    let n = ys.len();
    let dot = |a: &FiniteSeq, b: &FiniteSeq| -> f64 {
        let start = a.support_start().min(b.support_start());
        (start..=0).map(|t| a.at(t).dot(&b.at(t))).sum()
    };
    let feats: Vec<FiniteSeq> = ys.iter().map(|y| lambda_features(y, lambda)).collect();
    let rkhs_gram = DMatrix::from_fn(n, n, |i, j| dot(&ys[i], &ys[j]));
    let embedded_gram = DMatrix::from_fn(n, n, |i, j| dot(&feats[i], &feats[j]));
    let max_abs_diff = (&rkhs_gram - &embedded_gram).amax();
    Ok(EmbeddingWitness { rkhs_gram, embedded_gram, max_abs_diff })
}

/// State-space realization of the `λ`-kernel functional truncated to
/// `len` time slices: the state holds `(x_0, x_{-1}, …)` blockwise, the
/// transition shifts every block one step into the past scaled by `λ`, and
/// the input enters at the present block. `A` is nilpotent, so the kernel is
/// `κ_t = λ^{|t|} (block |t| of the identity)` for `t > -len`.
pub fn lambda_kernel_realization(lambda: f64, dim: usize, len: usize) -> Result<LinearSSM> {
    SeqKernel::lambda(lambda, dim)?;
    if len == 0 {
        return Err(Error::Invalid("realization needs at least one time slice".into()));
    }
    let n = dim * len;
    let mut a = DMatrix::zeros(n, n);
    for blk in 1..len {
        for j in 0..dim {
            a[(blk * dim + j, (blk - 1) * dim + j)] = lambda;
        }
    }
    let mut c = DMatrix::zeros(n, dim);
    for j in 0..dim {
        c[(j, j)] = 1.0;
    }
    LinearSSM::new(a, c, DMatrix::identity(n, n))
}

/// A regression dataset: samples with one scalar target each.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub samples: Vec<FiniteSeq>,
    pub targets: DVector<f64>,
}

/// Manifest pointing at the CSV file of a dataset.
///
/// The CSV has a header row and columns `seq, t, z1, …, zd, target`; each
/// sequence lists its rows with `t ≤ 0`, and `target` is filled on the
/// `t = 0` row only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub dim: usize,
    /// Path of the CSV file, relative to the manifest.
    pub data: PathBuf,
}

impl Dataset {
    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, FiniteSeq::dim)
    }

    /// Loads a dataset from its JSON manifest.
    pub fn load(manifest_path: &Path) -> Result<Self> {
        let manifest: Manifest = serde_json::from_reader(std::fs::File::open(manifest_path)?)?;
        let csv_path = manifest_path.parent().unwrap_or(Path::new(".")).join(&manifest.data);
        Self::from_csv(std::fs::File::open(csv_path)?, manifest.dim)
    }

    pub fn from_csv<R: std::io::Read>(reader: R, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dataset dimension must be positive".into()));
        }
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        // seq id -> (t -> entry), target
        type Rows = (Vec<(i64, DVector<f64>)>, Option<f64>);
        let mut order: Vec<String> = Vec::new();
        let mut rows: std::collections::HashMap<String, Rows> = std::collections::HashMap::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != dim + 3 {
                return Err(Error::Parse(format!(
                    "row {}: expected {} columns, got {}",
                    line + 2,
                    dim + 3,
                    rec.len()
                )));
            }
            let num = |i: usize| -> Result<f64> {
                rec[i].parse::<f64>().map_err(|_| Error::Parse(format!("row {}: bad number {:?}", line + 2, &rec[i])))
            };
            let id = rec[0].to_string();
            let t: i64 = rec[1].parse().map_err(|_| Error::Parse(format!("row {}: bad time {:?}", line + 2, &rec[1])))?;
            if t > 0 {
                return Err(Error::Parse(format!("row {}: time index must be <= 0", line + 2)));
            }
            let v = DVector::from_iterator(dim, (0..dim).map(|j| num(2 + j)).collect::<Result<Vec<_>>>()?);
            let target = if rec[dim + 2].is_empty() { None } else { Some(num(dim + 2)?) };
            if target.is_some() && t != 0 {
                return Err(Error::Parse(format!("row {}: target given away from t = 0", line + 2)));
            }
            let slot = rows.entry(id.clone()).or_insert_with(|| {
                order.push(id.clone());
                (Vec::new(), None)
            });
            slot.0.push((t, v));
            if target.is_some() {
                slot.1 = target;
            }
        }
        let mut samples = Vec::with_capacity(order.len());
        let mut targets = Vec::with_capacity(order.len());
        for id in &order {
            let (mut entries, target) = rows.remove(id).expect("recorded above");
            let target = target.ok_or_else(|| Error::Parse(format!("sequence {id:?} has no target on its t = 0 row")))?;
            entries.sort_by_key(|(t, _)| *t);
            if entries.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Parse(format!("sequence {id:?} repeats a time index")));
            }
            let start = entries[0].0;
            let mut z = FiniteSeq::zeros_on(dim, start);
            let mut dense: Vec<DVector<f64>> = z.entries().to_vec();
            for (t, v) in entries {
                dense[(t - start) as usize] = v;
            }
            z = FiniteSeq::new(dim, start, dense)?;
            samples.push(z);
            targets.push(target);
        }
        if samples.is_empty() {
            return Err(Error::Parse("dataset has no sequences".into()));
        }
        Ok(Dataset { ids: order, samples, targets: DVector::from_vec(targets) })
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let dim = self.dim();
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["seq".to_string(), "t".to_string()];
        header.extend((1..=dim).map(|j| format!("z{j}")));
        header.push("target".into());
        w.write_record(&header)?;
        for ((id, z), y) in self.ids.iter().zip(&self.samples).zip(self.targets.iter()) {
            for (t, v) in z.iter() {
                let mut row = vec![id.clone(), t.to_string()];
                row.extend(v.iter().map(|x| x.to_string()));
                row.push(if t == 0 { y.to_string() } else { String::new() });
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`; returns the
    /// manifest path.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let csv_name = format!("{stem}.csv");
        self.write_csv(std::fs::File::create(dir.join(&csv_name))?)?;
        let manifest = Manifest { schema_version: 1, dim: self.dim(), data: PathBuf::from(csv_name) };
        let path = dir.join(format!("{stem}.json"));
        serde_json::to_writer_pretty(std::fs::File::create(&path)?, &manifest)?;
        Ok(path)
    }
}

/// SHA-256 of a sample's dimension, support and entries (little-endian
/// `f64` bit patterns), hex encoded.
pub fn sample_digest(z: &FiniteSeq) -> String {
    let mut h = Sha256::new();
    h.update((z.dim() as u64).to_le_bytes());
    h.update(z.support_start().to_le_bytes());
    for (_, v) in z.iter() {
        for x in v.iter() {
            h.update(x.to_bits().to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Serializable form of a [`RidgeFit`], sufficient to predict again.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub schema_version: u32,
    pub kernel: SeqKernel,
    pub gamma: f64,
    pub truncation: Option<i64>,
    pub alpha: Vec<f64>,
    pub targets: Vec<f64>,
    pub samples: Vec<FiniteSeq>,
    pub sample_digests: Vec<String>,
}

impl From<&RidgeFit> for FitRecord {
    fn from(fit: &RidgeFit) -> Self {
        FitRecord {
            schema_version: 1,
            kernel: fit.kernel.clone(),
            gamma: fit.gamma,
            truncation: fit.truncation,
            alpha: fit.alpha.iter().copied().collect(),
            targets: fit.targets.iter().copied().collect(),
            samples: fit.samples.clone(),
            sample_digests: fit.samples.iter().map(sample_digest).collect(),
        }
    }
}

impl FitRecord {
    /// Rebuilds the fit, checking the sample digests and recomputing the
    /// Gram matrix.
    pub fn into_fit(self) -> Result<RidgeFit> {
        if self.samples.len() != self.alpha.len() || self.samples.len() != self.sample_digests.len() {
            return Err(Error::Invalid("fit record has inconsistent lengths".into()));
        }
        for (i, (z, d)) in self.samples.iter().zip(&self.sample_digests).enumerate() {
            if sample_digest(z) != *d {
                return Err(Error::Invalid(format!("sample {i} does not match its digest")));
            }
        }
        let g = gram(&self.kernel, &self.samples)?;
        Ok(RidgeFit {
            kernel: self.kernel,
            samples: self.samples,
            gram: g,
            gamma: self.gamma,
            alpha: DVector::from_vec(self.alpha),
            targets: DVector::from_vec(self.targets),
            truncation: self.truncation,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::include;
    use nalgebra::dvector;

    fn lam(l: f64, d: usize) -> SeqKernel {
        SeqKernel::lambda(l, d).unwrap()
    }

    #[test]
    fn lambda_kernel_examples() {
        let k = lam(0.5, 1);
        let one = FiniteSeq::from_scalars(&[1.0, 1.0]).unwrap();
        assert_eq!(kernel_eval(&k, &one, &one).unwrap(), 1.25);
        assert_eq!(kernel_eval(&k, &one, &FiniteSeq::zeros(1)).unwrap(), 0.0);
        let k2 = lam(0.3, 2);
        let e1 = include(dvector![1.0, 0.0], 0);
        assert_eq!(kernel_eval(&k2, &e1, &e1).unwrap(), 1.0);
        assert!(SeqKernel::lambda(0.0, 1).is_err());
        assert!(SeqKernel::lambda(1.5, 1).is_err());
    }

    #[test]
    fn orthogonal_inclusions_give_diagonal_gram() {
        let k = lam(0.7, 2);
        let g = gram(&k, &[include(dvector![1.0, 0.0], -1), include(dvector![0.0, 1.0], 0)]).unwrap();
        assert_eq!((g[(0, 1)], g[(1, 0)]), (0.0, 0.0));
        assert!((g[(0, 0)] - 0.49).abs() < 1e-15 && g[(1, 1)] == 1.0);
        let g = gram(&k, &[FiniteSeq::zeros(2)]).unwrap();
        assert_eq!(g, DMatrix::zeros(1, 1));
    }

    #[test]
    fn scalar_ridge() {
        let k = lam(1.0, 1);
        let z = FiniteSeq::from_scalars(&[2.0]).unwrap();
        let fit = ridge_fit(&k, std::slice::from_ref(&z), &dvector![3.0], 0.5).unwrap();
        // g = 4, α = y / (g + γ)
        assert!((fit.alpha[0] - 3.0 / 4.5).abs() < 1e-15);
        assert!((fit.predict(&z).unwrap() - fit.alpha[0] * 4.0).abs() < 1e-15);
        assert!((fit.rkhs_norm() - fit.alpha[0].abs() * 2.0).abs() < 1e-15);
        let zero = ridge_fit(&k, &[z], &dvector![0.0], 0.5).unwrap();
        assert_eq!(zero.alpha, dvector![0.0]);
        assert_eq!(zero.rkhs_norm(), 0.0);
        assert!(matches!(
            ridge_fit(&k, &[FiniteSeq::zeros(1)], &dvector![1.0], 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn truncation_at_zero_keeps_present_only() {
        let k = lam(0.8, 1);
        let s = vec![
            FiniteSeq::from_scalars(&[1.0, 2.0, 3.0]).unwrap(),
            FiniteSeq::from_scalars(&[-1.0, 0.5]).unwrap(),
        ];
        let y = dvector![1.0, -2.0];
        let tf = truncated_fit(&k, &s, &y, 0.1, 0).unwrap();
        let present: Vec<_> = s.iter().map(|z| include(z.at(0), 0)).collect();
        let rf = ridge_fit(&k, &present, &y, 0.1).unwrap();
        assert_eq!(tf.alpha, rf.alpha);
        let fm = finite_memory_fit(&k, &s, &y, 0.1, 0).unwrap();
        // 1-D ridge on z_0: b = Σ x y / (Σ x² + γM)
        let b = (3.0 * 1.0 + 0.5 * -2.0) / (9.0 + 0.25 + 0.2);
        assert!((fm.weights[0][0] - b).abs() < 1e-14);
    }

    #[test]
    fn truncated_and_finite_memory_fits_agree() {
        let k = lam(0.6, 2);
        let s: Vec<FiniteSeq> = (0..5)
            .map(|i| {
                let rows: Vec<Vec<f64>> = (0..4).map(|t| vec![(i * 3 + t) as f64 * 0.1 - 0.4, ((i + t) % 3) as f64 - 1.0]).collect();
                FiniteSeq::from_rows(2, &rows).unwrap()
            })
            .collect();
        let y = dvector![0.3, -1.0, 2.0, 0.0, 1.5];
        let tf = truncated_fit(&k, &s, &y, 0.05, -2).unwrap();
        let fm = finite_memory_fit(&k, &s, &y, 0.05, -2).unwrap();
        let probe = FiniteSeq::from_rows(2, &[vec![9.0, 9.0], vec![1.0, -2.0], vec![0.5, 0.5], vec![-1.0, 3.0]]).unwrap();
        assert!((tf.predict(&probe).unwrap() - fm.predict(&probe).unwrap()).abs() < 1e-10);
        assert!((tf.rkhs_norm() - fm.rkhs_norm()).abs() < 1e-10);
        assert!((tf.objective() - fm.objective(&s, &y).unwrap()).abs() < 1e-10);
        assert!(tf.normal_equation_residual() < 1e-10 * y.norm());
    }

    #[test]
    fn induced_kernel_is_not_certified_for_finite_memory_fit() {
        let kern = KernelSeq::from_scalars(&[1.0], crate::convrep::Tail::Zero).unwrap();
        let k = SeqKernel::induced(kern);
        let r = finite_memory_fit(&k, &[FiniteSeq::zeros(1)], &dvector![0.0], 1.0, 0);
        assert_eq!(r, Err(Error::OrthogonalityNotCertified));
    }

    #[test]
    fn embedding_is_not_isometric_below_one() {
        let ys = vec![include(dvector![1.0], -1), FiniteSeq::from_scalars(&[1.0, 1.0]).unwrap()];
        let w = embedding_witness(0.5, &ys).unwrap();
        assert_eq!(w.rkhs_gram[(0, 0)], 1.0);
        assert_eq!(w.embedded_gram[(0, 0)], 0.25);
        assert!(w.max_abs_diff > 0.5);
        assert_eq!(embedding_witness(1.0, &ys).unwrap().max_abs_diff, 0.0);
    }

    #[test]
    fn realization_matches_lambda_kernel() {
        let sys = lambda_kernel_realization(0.5, 2, 4).unwrap();
        let kern = crate::ssm::ssm_to_kernel(&sys, 1e-12).unwrap();
        assert_eq!(kern.window_start(), -3);
        let ind = SeqKernel::induced(kern);
        let z1 = FiniteSeq::from_rows(2, &[vec![1.0, 2.0], vec![0.0, -1.0], vec![3.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let z2 = FiniteSeq::from_rows(2, &[vec![-1.0, 0.5], vec![2.0, 2.0], vec![1.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let a = kernel_eval(&ind, &z1, &z2).unwrap();
        let b = kernel_eval(&lam(0.5, 2), &z1, &z2).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn dataset_roundtrip_and_record() {
        let ds = Dataset {
            ids: vec!["a".into(), "b".into()],
            samples: vec![
                FiniteSeq::from_rows(2, &[vec![1.0, 0.5], vec![0.0, 2.0]]).unwrap(),
                FiniteSeq::from_rows(2, &[vec![-1.0, 1.0]]).unwrap(),
            ],
            targets: dvector![0.25, -3.0],
        };
        let dir = std::env::temp_dir().join(format!("fadekit-ds-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let manifest = ds.save(&dir, "toy").unwrap();
        let back = Dataset::load(&manifest).unwrap();
        assert_eq!(back, ds);
        std::fs::remove_dir_all(&dir).unwrap();

        let fit = ridge_fit(&lam(0.9, 2), &ds.samples, &ds.targets, 0.1).unwrap();
        let rec = FitRecord::from(&fit);
        let json = serde_json::to_string(&rec).unwrap();
        let again: FitRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(again.clone().into_fit().unwrap(), fit);
        let mut tampered = again;
        tampered.samples[0] = tampered.samples[0].scaled(2.0);
        assert!(tampered.into_fit().is_err());
    }

    #[test]
    fn csv_errors() {
        let bad = "seq,t,z1,target\na,0,1.0,\n";
        assert!(Dataset::from_csv(bad.as_bytes(), 1).is_err());
        let bad = "seq,t,z1,target\na,-1,1.0,2.0\na,0,1.0,\n";
        assert!(Dataset::from_csv(bad.as_bytes(), 1).is_err());
        let good = "seq,t,z1,target\na,-2,1.0,\na,0,3.0,2.0\n";
        let ds = Dataset::from_csv(good.as_bytes(), 1).unwrap();
        assert_eq!(ds.samples[0], FiniteSeq::from_scalars(&[1.0, 0.0, 3.0]).unwrap());
    }
}
