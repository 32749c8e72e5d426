//! Linear state-space realizations `x_t = A x_{t-1} + C z_t`, `y = h x_0`.
//!
//! For a finitely supported input the state can be started at zero just
//! before the support: the bounded solution is unique whenever `ρ(A) < 1`,
//! and the zero-started recursion is that solution. The kernel of the
//! realized functional is `κ_t = h A^{|t|} C`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::convrep::kernel::{matrix_from_rows, matrix_to_rows, op_norm, KernelSeq, Tail};
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::interval::Interval;
use crate::seqspace::FiniteSeq;

/// Default stability margin for [`spectral_radius`].
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// Number of squarings used for the spectral radius bracket.
pub const MAX_SQUARINGS: u32 = 20;
/// Default verification window of [`unstable_witness`].
pub const WITNESS_WINDOW: usize = 64;
/// Tolerance on the homogeneous-recursion residual of a witness.
pub const WITNESS_TOL: f64 = 1e-9;

/// Longest kernel window [`ssm_to_kernel`] will materialize.
const MAX_WINDOW: usize = 1 << 22;
/// Largest `K` for which the geometric constant is computed from all powers.
const EXPLICIT_POWERS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SsmRepr", into = "SsmRepr")]
pub struct LinearSSM {
    a: DMatrix<f64>,
    c: DMatrix<f64>,
    h: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct SsmRepr {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    h: Vec<Vec<f64>>,
}

fn shape(rows: &[Vec<f64>]) -> (usize, usize) {
    (rows.len(), rows.first().map_or(0, Vec::len))
}

impl TryFrom<SsmRepr> for LinearSSM {
    type Error = Error;

    fn try_from(r: SsmRepr) -> Result<Self> {
        let (an, am) = shape(&r.a);
        let (cn, cm) = shape(&r.c);
        let (hn, hm) = shape(&r.h);
        LinearSSM::new(
            matrix_from_rows(&r.a, an, am)?,
            matrix_from_rows(&r.c, cn, cm)?,
            matrix_from_rows(&r.h, hn, hm)?,
        )
    }
}

impl From<LinearSSM> for SsmRepr {
    fn from(s: LinearSSM) -> Self {
        SsmRepr { a: matrix_to_rows(&s.a), c: matrix_to_rows(&s.c), h: matrix_to_rows(&s.h) }
    }
}

impl LinearSSM {
    /// `a` is `n×n`, `c` is `n×d`, `h` is `m×n`.
    pub fn new(a: DMatrix<f64>, c: DMatrix<f64>, h: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::Invalid(format!("A must be square and non-empty, got {}x{}", n, a.ncols())));
        }
        if c.nrows() != n || c.ncols() == 0 {
            return Err(Error::Invalid(format!("C must be {n}xd with d > 0, got {}x{}", c.nrows(), c.ncols())));
        }
        if h.ncols() != n || h.nrows() == 0 {
            return Err(Error::Invalid(format!("h must be mx{n} with m > 0, got {}x{}", h.nrows(), h.ncols())));
        }
        if a.iter().chain(c.iter()).chain(h.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Invalid("system matrices must be finite".into()));
        }
        Ok(LinearSSM { a, c, h })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn input_dim(&self) -> usize {
        self.c.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.h.nrows()
    }
}

impl Functional for LinearSSM {
    fn apply(&self, z: &FiniteSeq) -> Result<DVector<f64>> {
        run_recurrent(self, z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Yes,
    No,
    MarginUndecided,
}

/// `‖A^j‖ ≤ M·r^j` for every `j ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricBound {
    #[serde(rename = "M")]
    pub m: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub rho_estimate: Interval,
    pub stable: Stability,
    /// The power `2^k` at which the upper estimate was attained.
    pub gelfand_k: u64,
    pub margin: f64,
    pub geometric_bound: Option<GeometricBound>,
}

/// `A^{2^k}` stored as `exp(log_norm)·unit` with `‖unit‖ = 1`, so that
/// repeated squaring neither overflows nor underflows.
struct ScaledPower {
    log_norm: f64,
    unit: DMatrix<f64>,
}

/// Powers `A^{2^k}`, `k = 0..=MAX_SQUARINGS`, in scaled form. Stops early
/// (returning `None` in place of the remaining powers) once a power is the
/// exact zero matrix.
fn dyadic_powers(a: &DMatrix<f64>) -> Vec<Option<ScaledPower>> {
    let mut out = Vec::with_capacity(MAX_SQUARINGS as usize + 1);
    let mut cur = a.clone();
    for _ in 0..=MAX_SQUARINGS {
        let nrm = op_norm(&cur);
        if nrm == 0.0 {
            out.push(None);
            break;
        }
        let unit = &cur / nrm;
        let log_norm = nrm.ln() + out.last().and_then(|p: &Option<ScaledPower>| p.as_ref()).map_or(0.0, |p| 2.0 * p.log_norm);
        cur = &unit * &unit;
        out.push(Some(ScaledPower { log_norm, unit }));
    }
    out
}

/// Brackets `ρ(A)` and decides `ρ(A) < 1`.
///
/// The upper end is `min_k ‖A^{2^k}‖^{2^{-k}}`, valid by submultiplicativity.
/// The lower end is the larger of `|tr(A^{2^k})/n|^{2^{-k}}` (the trace is a
/// sum of `n` eigenvalue powers) and `|det A|^{1/n}`. The system is stable
/// when `upper < 1 - margin` and unstable when `lower ≥ 1`.
pub fn spectral_radius(a: &DMatrix<f64>, margin: f64) -> Result<StabilityReport> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Invalid(format!("A must be square and non-empty, got {}x{}", n, a.ncols())));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::Domain(format!("margin must lie in (0, 1), got {margin}")));
    }
    let powers = dyadic_powers(a);
    let mut upper = f64::INFINITY;
    let mut lower = a.determinant().abs().powf(1.0 / n as f64);
    let mut best_k = 0u32;
    for (k, p) in powers.iter().enumerate() {
        let scale = 0.5f64.powi(k as i32);
        match p {
            None => {
                upper = 0.0;
                lower = 0.0;
                best_k = k as u32;
                break;
            }
            Some(p) => {
                let est = (p.log_norm * scale).exp();
                if est < upper {
                    upper = est;
                    best_k = k as u32;
                }
                let tr = p.unit.trace().abs() / n as f64;
                if tr > 0.0 {
                    lower = lower.max(((tr.ln() + p.log_norm) * scale).exp());
                }
            }
        }
    }
    let lower = lower.min(upper);
    let stable = if upper < 1.0 - margin {
        Stability::Yes
    } else if lower >= 1.0 {
        Stability::No
    } else {
        Stability::MarginUndecided
    };
    let geometric_bound = match stable {
        Stability::Yes => Some(geometric_bound(a, &powers, upper + margin / 2.0)),
        _ => None,
    };
    Ok(StabilityReport {
        rho_estimate: Interval::new(lower, upper),
        stable,
        gelfand_k: 1u64 << best_k,
        margin,
        geometric_bound,
    })
}

/// `M` with `‖A^j‖ ≤ M r^j` for all `j`, given some `K = 2^k` with
/// `‖A^K‖ ≤ r^K`. Writing `j = qK + s` gives `‖A^j‖ ≤ r^{qK}‖A^s‖`, so
/// `M = max_{s<K} ‖A^s‖ / r^s` works. For large `K` that maximum is bounded
/// through the binary digits of `s` instead.
fn geometric_bound(a: &DMatrix<f64>, powers: &[Option<ScaledPower>], r: f64) -> GeometricBound {
    let ln_r = r.ln();
    let mut k_hit = powers.len();
    for (k, p) in powers.iter().enumerate() {
        let fits = match p {
            None => true,
            Some(p) => p.log_norm <= ((1u64 << k) as f64) * ln_r,
        };
        if fits {
            k_hit = k;
            break;
        }
    }
    debug_assert!(k_hit < powers.len(), "upper estimate below r must be attained");
    let big_k = 1u64 << k_hit;
    if big_k <= EXPLICIT_POWERS {
        // A^s kept as exp(log_pow)·unit: both ‖A^s‖ and r^s underflow for large s
        let n = a.nrows();
        let mut unit = DMatrix::<f64>::identity(n, n);
        let mut log_pow = 0.0f64;
        let mut log_m = 0.0f64;
        for s in 1..big_k {
            unit = &unit * a;
            let nrm = op_norm(&unit);
            if nrm == 0.0 {
                break;
            }
            unit /= nrm;
            log_pow += nrm.ln();
            log_m = log_m.max(log_pow - s as f64 * ln_r);
        }
        return GeometricBound { m: log_m.exp(), r };
    }
    let log_m: f64 = powers[..k_hit]
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            None => 0.0,
            Some(p) => (p.log_norm - ((1u64 << i) as f64) * ln_r).max(0.0),
        })
        .sum();
    GeometricBound { m: log_m.exp(), r }
}

/// Smallest `k ≤ n` with `A^k = 0` exactly, if any.
fn nilpotency_index(a: &DMatrix<f64>) -> Option<usize> {
    let n = a.nrows();
    let mut pow = a.clone();
    for k in 1..=n {
        if pow.iter().all(|&x| x == 0.0) {
            return Some(k);
        }
        pow = &pow * a;
    }
    None
}

/// The kernel `κ_t = h A^{|t|} C` of a stable system.
///
/// For exactly nilpotent `A` the kernel has finite memory and a zero tail.
/// Otherwise the window `[W, 0]` is chosen so that the certified tail
/// `Σ_{t<W} M‖h‖‖C‖ r^{|t|}` is at most `eps`, where `(M, r)` is the
/// geometric bound from [`spectral_radius`].
pub fn ssm_to_kernel(sys: &LinearSSM, eps: f64) -> Result<KernelSeq> {
    ssm_to_kernel_with_margin(sys, eps, DEFAULT_MARGIN)
}

pub fn ssm_to_kernel_with_margin(sys: &LinearSSM, eps: f64, margin: f64) -> Result<KernelSeq> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let (d, m) = (sys.input_dim(), sys.output_dim());
    if let Some(k) = nilpotency_index(&sys.a) {
        return materialize(sys, k - 1, Tail::Zero);
    }
    let report = spectral_radius(&sys.a, margin)?;
    let (lower, upper) = (report.rho_estimate.lower, report.rho_estimate.upper);
    let bound = match report.stable {
        Stability::Yes => report.geometric_bound.expect("stable reports carry a bound"),
        Stability::No => return Err(Error::Unstable { lower, upper }),
        Stability::MarginUndecided => return Err(Error::StabilityUndecided { lower, upper, margin }),
    };
    let scale = bound.m * op_norm(&sys.h) * op_norm(&sys.c);
    if scale == 0.0 {
        return KernelSeq::from_fn(d, m, 0, Tail::Zero, |_| DMatrix::zeros(m, d));
    }
    let r = bound.r;
    let width = ((eps * (1.0 - r) / scale).ln() / r.ln()).ceil().max(0.0);
    if width > MAX_WINDOW as f64 {
        return Err(Error::Unsupported(format!(
            "kernel window of {width} steps needed for eps = {eps:e} at r = {r}"
        )));
    }
    materialize(sys, width as usize, Tail::Geometric { m: scale, rho: r })
}

/// `κ_t` for `t = -width..=0`.
fn materialize(sys: &LinearSSM, width: usize, tail: Tail) -> Result<KernelSeq> {
    let mut mats = Vec::with_capacity(width + 1);
    let mut ac = sys.c.clone();
    for _ in 0..=width {
        mats.push(&sys.h * &ac);
        ac = &sys.a * &ac;
    }
    mats.reverse();
    KernelSeq::new(sys.input_dim(), sys.output_dim(), -(width as i64), mats, tail)
}

/// Runs the recursion from a zero state at `z.support_start() - 1` and
/// returns `h x_0`.
pub fn run_recurrent(sys: &LinearSSM, z: &FiniteSeq) -> Result<DVector<f64>> {
    z.check_dim(sys.input_dim())?;
    let mut x = DVector::zeros(sys.state_dim());
    let mut next = DVector::zeros(sys.state_dim());
    for zt in z.entries() {
        next.gemv(1.0, &sys.c, zt, 0.0);
        next.gemv(1.0, &sys.a, &x, 1.0);
        std::mem::swap(&mut x, &mut next);
    }
    Ok(&sys.h * x)
}

/// A non-zero bounded solution `x_t = Re(λ^t v)` of `x_t = A x_{t-1}`,
/// which exists when `A` has an eigenvalue with `|λ| ≥ 1`. Two distinct
/// bounded solutions (this one and zero) mean the state equation does not
/// determine the state from the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnstableWitness {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub v_re: Vec<f64>,
    pub v_im: Vec<f64>,
    /// `x_t` for `t = -window..=0`.
    pub trajectory: FiniteSeq,
    /// `max_t ‖x_t - A x_{t-1}‖` over the window.
    pub residual: f64,
    pub sup_norm: f64,
    pub v_norm: f64,
}

impl UnstableWitness {
    pub fn lambda(&self) -> Complex<f64> {
        Complex::new(self.lambda_re, self.lambda_im)
    }

    pub fn v(&self) -> Vec<Complex<f64>> {
        self.v_re.iter().zip(&self.v_im).map(|(&r, &i)| Complex::new(r, i)).collect()
    }
}

/// See [`unstable_witness_on`]; uses a window of [`WITNESS_WINDOW`] steps.
pub fn unstable_witness(a: &DMatrix<f64>) -> Result<Option<UnstableWitness>> {
    unstable_witness_on(a, WITNESS_WINDOW)
}

/// Eigenvalues with `|λ| ≥ 1 - 1e-12` count as unstable (rounding slack).
const UNIT_SLACK: f64 = 1e-12;

/// Picks the eigenvalue of largest modulus; returns `None` when it lies
/// inside the unit disc. The trajectory is verified on `t = -window..=0`.
pub fn unstable_witness_on(a: &DMatrix<f64>, window: usize) -> Result<Option<UnstableWitness>> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Invalid(format!("A must be square and non-empty, got {}x{}", n, a.ncols())));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("matrix has non-finite entries".into()));
    }
    let eig = a.complex_eigenvalues();
    let Some(mut lambda) = eig.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())) else {
        return Err(Error::NumericalFailure("eigenvalue solver returned nothing".into()));
    };
    if !lambda.norm().is_finite() {
        return Err(Error::NumericalFailure("eigenvalue solver diverged".into()));
    }
    if lambda.norm() < 1.0 - UNIT_SLACK {
        return Ok(None);
    }
    let ac: DMatrix<Complex<f64>> = a.map(|x| Complex::new(x, 0.0));
    let mut v = null_vector(&ac, lambda)?;
    // a Rayleigh-quotient step sharpens λ before the final null vector
    for _ in 0..2 {
        lambda = (v.adjoint() * &ac * &v)[(0, 0)];
        v = null_vector(&ac, lambda)?;
    }
    // fix the phase so the largest component is real and positive
    let big = v.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or(Complex::new(1.0, 0.0));
    v *= big.conj() / big.norm();

    let x_at = |t: i32| -> DVector<f64> { (&v * lambda.powi(t)).map(|c| c.re) };
    let start = -(window as i64);
    let entries: Vec<DVector<f64>> = (start..=0).map(|t| x_at(t as i32)).collect();
    let mut residual = 0.0f64;
    for pair in entries.windows(2) {
        residual = residual.max((&pair[1] - a * &pair[0]).norm());
    }
    let sup_norm = entries.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let v_norm = v.norm();
    if residual.is_nan() || residual > WITNESS_TOL {
        return Err(Error::NumericalFailure(format!(
            "witness residual {residual:e} exceeds {WITNESS_TOL:e}"
        )));
    }
    Ok(Some(UnstableWitness {
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        v_re: v.iter().map(|c| c.re).collect(),
        v_im: v.iter().map(|c| c.im).collect(),
        trajectory: FiniteSeq::new(n, start, entries)?,
        residual,
        sup_norm,
        v_norm,
    }))
}

/// Unit vector minimizing `‖(A - λI)v‖`: the right singular vector of the
/// smallest singular value.
fn null_vector(a: &DMatrix<Complex<f64>>, lambda: Complex<f64>) -> Result<DVector<Complex<f64>>> {
    let n = a.nrows();
    let shifted = a - DMatrix::<Complex<f64>>::identity(n, n) * lambda;
    let svd = shifted.svd(false, true);
    let vt = svd
        .v_t
        .ok_or_else(|| Error::NumericalFailure("SVD did not return right singular vectors".into()))?;
    let (i, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .ok_or_else(|| Error::NumericalFailure("empty SVD".into()))?;
    let v: DVector<Complex<f64>> = vt.row(i).adjoint();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::include;
    use nalgebra::{dmatrix, dvector};

    fn scalar(a: f64) -> LinearSSM {
        LinearSSM::new(dmatrix![a], dmatrix![1.0], dmatrix![1.0]).unwrap()
    }

    #[test]
    fn radius_examples() {
        let r = spectral_radius(&DMatrix::zeros(2, 2), DEFAULT_MARGIN).unwrap();
        assert_eq!(r.rho_estimate, Interval::point(0.0));
        assert_eq!(r.stable, Stability::Yes);

        let r = spectral_radius(&dmatrix![0.5, 0.0; 0.0, 0.9], DEFAULT_MARGIN).unwrap();
        assert!(r.rho_estimate.contains(0.9));
        assert!(r.rho_estimate.width() < 1e-4, "{r:?}");
        assert_eq!(r.stable, Stability::Yes);

        let r = spectral_radius(&dmatrix![0.0, -1.0; 1.0, 0.0], DEFAULT_MARGIN).unwrap();
        assert_eq!(r.stable, Stability::No);
        assert!(r.rho_estimate.contains(1.0));
        assert!(r.geometric_bound.is_none());

        assert!(spectral_radius(&DMatrix::zeros(2, 3), DEFAULT_MARGIN).is_err());
    }

    #[test]
    fn jordan_block_bound_is_valid() {
        let a = dmatrix![0.9, 1.0; 0.0, 0.9];
        let r = spectral_radius(&a, DEFAULT_MARGIN).unwrap();
        assert!(r.rho_estimate.contains(0.9));
        let g = r.geometric_bound.unwrap();
        let mut pow = DMatrix::identity(2, 2);
        for j in 0..=200 {
            assert!(op_norm(&pow) <= g.m * g.r.powi(j) * (1.0 + 1e-12), "j = {j}");
            pow = &pow * &a;
        }
    }

    #[test]
    fn bound_survives_long_explicit_products() {
        // upper estimate settles around K = 4096, where r^K underflows
        let a = dmatrix![-0.10430468539071305, 0.3102877106902545; 0.359761158430215, -0.5570872485436186];
        let r = spectral_radius(&a, DEFAULT_MARGIN).unwrap();
        let g = r.geometric_bound.unwrap();
        assert!(g.m.is_finite() && g.m >= 1.0);
        let sys = LinearSSM::new(a, dmatrix![1.0; 0.0], dmatrix![1.0, 1.0]).unwrap();
        assert!(ssm_to_kernel(&sys, 1e-6).is_ok());
    }

    #[test]
    fn kernel_examples() {
        let sys = LinearSSM::new(DMatrix::zeros(2, 2), dmatrix![1.0; 2.0], dmatrix![3.0, 1.0]).unwrap();
        let k = ssm_to_kernel(&sys, 1e-10).unwrap();
        assert_eq!(k.window_start(), 0);
        assert_eq!(k.tail(), Tail::Zero);
        assert_eq!(k.at(0).unwrap(), &dmatrix![5.0]);

        let nil = dmatrix![0.0, 0.0, 0.0; 1.0, 0.0, 0.0; 2.0, 3.0, 0.0];
        let sys = LinearSSM::new(nil, DMatrix::identity(3, 3), DMatrix::identity(3, 3)).unwrap();
        let k = ssm_to_kernel(&sys, 1e-10).unwrap();
        assert_eq!(k.window_start(), -2);
        assert!(k.has_finite_memory());

        let k = ssm_to_kernel(&scalar(0.5), 1e-10).unwrap();
        for t in k.window_start()..=0 {
            assert_eq!(k.at(t).unwrap()[(0, 0)], 0.5f64.powi(-t as i32));
        }
        match k.tail() {
            Tail::Geometric { rho, .. } => assert!((rho - 0.5).abs() < 1e-5),
            t => panic!("{t:?}"),
        }
    }

    #[test]
    fn unstable_systems_are_refused() {
        let rot = LinearSSM::new(dmatrix![0.0, -1.0; 1.0, 0.0], DMatrix::identity(2, 2), DMatrix::identity(2, 2)).unwrap();
        assert!(matches!(ssm_to_kernel(&rot, 1e-6), Err(Error::Unstable { .. })));
        assert!(matches!(
            ssm_to_kernel(&scalar(1.0 - 1e-9), 1e-6),
            Err(Error::StabilityUndecided { .. })
        ));
    }

    #[test]
    fn recurrent_examples() {
        let sys = scalar(0.5);
        assert_eq!(run_recurrent(&sys, &FiniteSeq::zeros(1)).unwrap(), dvector![0.0]);
        assert_eq!(run_recurrent(&sys, &include(dvector![3.0], 0)).unwrap(), dvector![3.0]);
        let z = FiniteSeq::from_scalars(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(run_recurrent(&sys, &z).unwrap(), dvector![1.75]);
        let k = ssm_to_kernel(&sys, 1e-10).unwrap();
        assert_eq!(k.eval(&z).unwrap(), dvector![1.75]);
    }

    #[test]
    fn witnesses() {
        assert!(unstable_witness(&DMatrix::zeros(2, 2)).unwrap().is_none());
        assert!(unstable_witness(&dmatrix![0.5, 0.0; 0.0, 0.9]).unwrap().is_none());

        let w = unstable_witness(&DMatrix::identity(3, 3)).unwrap().unwrap();
        assert!((w.lambda() - Complex::new(1.0, 0.0)).norm() < 1e-12);
        let x0 = w.trajectory.at(0);
        assert!(w.trajectory.iter().all(|(_, x)| (x - &x0).norm() < 1e-12));

        let w = unstable_witness(&dmatrix![0.0, -1.0; 1.0, 0.0]).unwrap().unwrap();
        assert!((w.lambda().norm() - 1.0).abs() < 1e-12);
        assert!(w.residual <= WITNESS_TOL);
        assert!(w.sup_norm <= w.v_norm + 1e-12);
        // period four
        for t in -60..=-4 {
            assert!((w.trajectory.at(t) - w.trajectory.at(t + 4)).norm() < 1e-12);
        }
        assert!(w.trajectory.at(0).norm() > 0.1);
    }

    #[test]
    fn json_layout() {
        let sys = scalar(0.5);
        let v = serde_json::to_value(&sys).unwrap();
        assert_eq!(v, serde_json::json!({"A": [[0.5]], "C": [[1.0]], "h": [[1.0]]}));
        let back: LinearSSM = serde_json::from_value(v).unwrap();
        assert_eq!(back, sys);
        let bad = serde_json::json!({"A": [[0.5, 1.0]], "C": [[1.0]], "h": [[1.0]]});
        assert!(serde_json::from_value::<LinearSSM>(bad).is_err());
    }
}
