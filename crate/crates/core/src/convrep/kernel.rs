use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::check_exponent;
use crate::functional::Functional;
use crate::interval::Interval;
use crate::seqspace::FiniteSeq;

/// Behaviour of the kernel below its explicit window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    /// `κ_t = 0` for every `t` below the window: finite memory.
    Zero,
    /// Certified bound `‖κ_t‖_op ≤ M·ρ^{|t|}` for every `t` below the window.
    Geometric {
        #[serde(rename = "M")]
        m: f64,
        rho: f64,
    },
}

impl Tail {
    /// Bound on `‖κ_t‖_op` for a `t` below the window.
    pub fn bound_at(&self, t: i64) -> f64 {
        match *self {
            Tail::Zero => 0.0,
            Tail::Geometric { m, rho } => m * rho.powf((-t) as f64),
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Tail::Zero => true,
            Tail::Geometric { m, .. } => m == 0.0,
        }
    }

    /// `Σ_{t < window_start} bound_at(t)^q` in closed form (`q < ∞`).
    fn power_sum(&self, window_start: i64, q: f64) -> f64 {
        match *self {
            Tail::Zero => 0.0,
            Tail::Geometric { m, rho } => {
                let first = 1.0 - window_start as f64;
                m.powf(q) * rho.powf(q * first) / (1.0 - rho.powf(q))
            }
        }
    }
}

/// A convolution kernel `κ_t : R^d → R^m` stored explicitly for
/// `t = window_start..=0`, with a [`Tail`] describing everything older.
///
/// The functional it represents is `H(z) = Σ_{t ≤ 0} κ_t z_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelRepr")]
pub struct KernelSeq {
    in_dim: usize,
    out_dim: usize,
    window_start: i64,
    matrices: Vec<DMatrix<f64>>,
    tail: Tail,
}

#[derive(Serialize, Deserialize)]
struct KernelRepr {
    in_dim: usize,
    out_dim: usize,
    window_start: i64,
    /// Row-major `out_dim × in_dim` matrices ordered `t = window_start..=0`.
    matrices: Vec<Vec<Vec<f64>>>,
    tail: Tail,
}

impl TryFrom<KernelRepr> for KernelSeq {
    type Error = Error;

    fn try_from(r: KernelRepr) -> Result<Self> {
        let mats = r
            .matrices
            .iter()
            .map(|rows| matrix_from_rows(rows, r.out_dim, r.in_dim))
            .collect::<Result<Vec<_>>>()?;
        KernelSeq::new(r.in_dim, r.out_dim, r.window_start, mats, r.tail)
    }
}

impl From<KernelSeq> for KernelRepr {
    fn from(k: KernelSeq) -> Self {
        KernelRepr {
            in_dim: k.in_dim,
            out_dim: k.out_dim,
            window_start: k.window_start,
            matrices: k.matrices.iter().map(matrix_to_rows).collect(),
            tail: k.tail,
        }
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<DMatrix<f64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Invalid(format!("expected a {nrows}x{ncols} matrix")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub(crate) fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Result of evaluating a kernel on the part of an input inside its window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedValue {
    pub value: DVector<f64>,
    /// Bound on the norm of the contribution from entries below the window.
    pub residual_bound: f64,
    /// Whether some non-zero entry lay below the window with a non-zero tail.
    pub underflow: bool,
}

impl KernelSeq {
    pub fn new(in_dim: usize, out_dim: usize, window_start: i64, matrices: Vec<DMatrix<f64>>, tail: Tail) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::Invalid("kernel dimensions must be positive".into()));
        }
        if window_start > 0 {
            return Err(Error::Invalid(format!("window start must be <= 0, got {window_start}")));
        }
        let expected = (1 - window_start) as usize;
        if matrices.len() != expected {
            return Err(Error::Invalid(format!(
                "window [{window_start}, 0] needs {expected} matrices, got {}",
                matrices.len()
            )));
        }
        for k in &matrices {
            if k.nrows() != out_dim || k.ncols() != in_dim {
                return Err(Error::Invalid(format!(
                    "kernel matrices must be {out_dim}x{in_dim}, got {}x{}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            if k.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("kernel entries must be finite".into()));
            }
        }
        if let Tail::Geometric { m, rho } = tail {
            if !(m >= 0.0 && m.is_finite()) || !(rho > 0.0 && rho < 1.0) {
                return Err(Error::Invalid(format!(
                    "geometric tail needs M >= 0 and rho in (0,1), got ({m}, {rho})"
                )));
            }
        }
        Ok(KernelSeq { in_dim, out_dim, window_start, matrices, tail })
    }

    /// Scalar kernel (`d = m = 1`) from values ordered `t = window_start..=0`.
    pub fn from_scalars(values: &[f64], tail: Tail) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("need at least the value at t = 0".into()));
        }
        let start = 1 - values.len() as i64;
        let mats = values.iter().map(|&v| DMatrix::from_element(1, 1, v)).collect();
        Self::new(1, 1, start, mats, tail)
    }

    /// Builds `κ_t = f(t)` for `t = window_start..=0`.
    pub fn from_fn(
        in_dim: usize,
        out_dim: usize,
        window_start: i64,
        tail: Tail,
        mut f: impl FnMut(i64) -> DMatrix<f64>,
    ) -> Result<Self> {
        let mats = (window_start.min(0)..=0).map(&mut f).collect();
        Self::new(in_dim, out_dim, window_start, mats, tail)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn window_start(&self) -> i64 {
        self.window_start
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Matrices ordered `t = window_start..=0`.
    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.matrices
    }

    /// `κ_t` inside the window.
    pub fn at(&self, t: i64) -> Option<&DMatrix<f64>> {
        if t > 0 || t < self.window_start {
            None
        } else {
            Some(&self.matrices[(t - self.window_start) as usize])
        }
    }

    /// Finite memory in the strict sense: the tail is identically zero.
    pub fn has_finite_memory(&self) -> bool {
        self.tail.is_zero()
    }

    /// `‖κ_t‖_op` for `t = window_start..=0`.
    pub fn op_norms(&self) -> Vec<f64> {
        self.matrices.iter().map(op_norm).collect()
    }

    /// Evaluates on the part of `z` inside the window and bounds the rest.
    pub fn eval_windowed(&self, z: &FiniteSeq) -> Result<WindowedValue> {
        z.check_dim(self.in_dim)?;
        let mut value = DVector::zeros(self.out_dim);
        let mut residual = 0.0;
        let mut underflow = false;
        for (t, zt) in z.iter() {
            match self.at(t) {
                Some(k) => value.gemv(1.0, k, zt, 1.0),
                None if !self.tail.is_zero() => {
                    let n = zt.norm();
                    if n > 0.0 {
                        underflow = true;
                        residual += self.tail.bound_at(t) * n;
                    }
                }
                None => {}
            }
        }
        Ok(WindowedValue { value, residual_bound: residual, underflow })
    }

    /// `Σ_t κ_t z_t`. Fails with [`Error::WindowUnderflow`] when `z` has
    /// non-zero entries below the window and the tail is not zero, since the
    /// kernel is then only known up to its tail bound there.
    pub fn eval(&self, z: &FiniteSeq) -> Result<DVector<f64>> {
        let w = self.eval_windowed(z)?;
        if w.underflow {
            return Err(Error::WindowUnderflow {
                partial: w.value.iter().copied().collect(),
                residual_bound: w.residual_bound,
            });
        }
        Ok(w.value)
    }

    /// Output of the associated time-invariant filter at every `t` in
    /// `z.support_start()..=0`: `y_t = Σ_{s ≤ t} κ_{s-t} z_s`, restricted to
    /// the window. Returns the outputs (oldest first) and the largest
    /// per-step residual bound.
    pub fn filter_windowed(&self, z: &FiniteSeq) -> Result<(Vec<DVector<f64>>, f64)> {
        z.check_dim(self.in_dim)?;
        let entries = z.entries();
        let n = entries.len();
        let width = self.matrices.len();
        let mut out = Vec::with_capacity(n);
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut y = DVector::zeros(self.out_dim);
            // lag j: entry i-j contributes through κ_{-j}
            for j in 0..width.min(i + 1) {
                let k = &self.matrices[width - 1 - j];
                y.gemv(1.0, k, &entries[i - j], 1.0);
            }
            if !self.tail.is_zero() && i + 1 > width {
                let mut r = 0.0;
                for j in width..=i {
                    r += self.tail.bound_at(-(j as i64)) * entries[i - j].norm();
                }
                worst = worst.max(r);
            }
            out.push(y);
        }
        Ok((out, worst))
    }
}

impl Functional for KernelSeq {
    fn apply(&self, z: &FiniteSeq) -> Result<DVector<f64>> {
        self.eval(z)
    }
}

/// Spectral norm (largest singular value).
pub fn op_norm(mat: &DMatrix<f64>) -> f64 {
    if mat.is_empty() {
        return 0.0;
    }
    if mat.nrows() == 1 || mat.ncols() == 1 {
        return mat.norm();
    }
    mat.singular_values().max()
}

/// Certified bracket for `⫼κ⫼_q = (Σ_t ‖κ_t‖^q)^{1/q}` (`sup_t ‖κ_t‖` for `q = ∞`).
///
/// The lower end is the window alone; the upper end adds the tail bound in
/// closed form. For a zero tail both ends coincide.
pub fn q_seq_norm(kernel: &KernelSeq, q: f64) -> Result<Interval> {
    check_exponent(q)?;
    let norms = kernel.op_norms();
    if q.is_infinite() {
        let lower = norms.iter().copied().fold(0.0, f64::max);
        let upper = lower.max(kernel.tail.bound_at(kernel.window_start - 1));
        return Ok(Interval::new(lower, upper));
    }
    let window: f64 = norms.iter().map(|n| n.powf(q)).sum();
    let lower = window.powf(1.0 / q);
    if kernel.tail.is_zero() {
        return Ok(Interval::point(lower));
    }
    let upper = (window + kernel.tail.power_sum(kernel.window_start, q)).powf(1.0 / q);
    Ok(Interval::new(lower, upper.max(lower)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqspace::include;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn op_norm_examples() {
        assert_eq!(op_norm(&DMatrix::zeros(2, 3)), 0.0);
        assert!((op_norm(&DMatrix::identity(4, 4)) - 1.0).abs() < 1e-12);
        assert!((op_norm(&dmatrix![3.0, 0.0; 0.0, 4.0]) - 4.0).abs() < 4e-12);
        assert_eq!(op_norm(&dmatrix![3.0, 4.0]), 5.0);
    }

    #[test]
    fn eval_examples() {
        let k = KernelSeq::from_scalars(&[0.25, 0.5, 1.0], Tail::Zero).unwrap();
        assert_eq!(k.eval(&FiniteSeq::zeros(1)).unwrap()[0], 0.0);
        let ones = FiniteSeq::from_scalars(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(k.eval(&ones).unwrap()[0], 1.75);
        let m = KernelSeq::from_fn(2, 3, -2, Tail::Zero, |t| DMatrix::from_fn(3, 2, |i, j| (i + 2 * j) as f64 - t as f64)).unwrap();
        let v = dvector![1.0, -2.0];
        assert_eq!(m.eval(&include(v.clone(), -1)).unwrap(), m.at(-1).unwrap() * &v);
    }

    #[test]
    fn eval_errors() {
        let k = KernelSeq::from_scalars(&[1.0], Tail::Geometric { m: 1.0, rho: 0.5 }).unwrap();
        assert!(matches!(k.eval(&FiniteSeq::zeros(2)), Err(Error::DimensionMismatch { .. })));
        let z = FiniteSeq::from_scalars(&[4.0, 0.0, 1.0]).unwrap();
        match k.eval(&z) {
            Err(Error::WindowUnderflow { partial, residual_bound }) => {
                assert_eq!(partial, vec![1.0]);
                assert_eq!(residual_bound, 4.0 * 0.25);
            }
            other => panic!("expected underflow, got {other:?}"),
        }
        // zeros below the window are harmless
        let z = FiniteSeq::from_scalars(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(k.eval(&z).unwrap()[0], 1.0);
        // a zero tail makes older entries contribute exactly nothing
        let k0 = KernelSeq::from_scalars(&[1.0], Tail::Zero).unwrap();
        assert_eq!(k0.eval(&FiniteSeq::from_scalars(&[4.0, 1.0]).unwrap()).unwrap()[0], 1.0);
    }

    #[test]
    fn q_norm_examples() {
        let k = KernelSeq::from_scalars(&[-3.0, 0.0, 4.0], Tail::Zero).unwrap();
        for q in [1.0, 2.0, 5.0, f64::INFINITY] {
            let iv = q_seq_norm(&k, q).unwrap();
            assert_eq!(iv.width(), 0.0);
        }
        assert_eq!(q_seq_norm(&k, 1.0).unwrap().lower, 7.0);
        assert!((q_seq_norm(&k, 2.0).unwrap().lower - 5.0).abs() < 1e-15);

        let g = KernelSeq::from_scalars(&[1.0], Tail::Geometric { m: 1.0, rho: 0.5 }).unwrap();
        let iv = q_seq_norm(&g, 1.0).unwrap();
        assert_eq!(iv.lower, 1.0);
        assert!((iv.upper - 2.0).abs() < 1e-15);
        assert!(q_seq_norm(&g, 0.9).is_err());
    }

    #[test]
    fn json_layout() {
        let k = KernelSeq::from_fn(2, 1, -1, Tail::Geometric { m: 2.0, rho: 0.5 }, |t| dmatrix![1.0, t as f64]).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(
            s,
            r#"{"in_dim":2,"out_dim":1,"window_start":-1,"matrices":[[[1.0,-1.0]],[[1.0,0.0]]],"tail":{"kind":"geometric","M":2.0,"rho":0.5}}"#
        );
        let back: KernelSeq = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        let bad = r#"{"in_dim":2,"out_dim":1,"window_start":0,"matrices":[[[1.0]]],"tail":{"kind":"zero"}}"#;
        assert!(serde_json::from_str::<KernelSeq>(bad).is_err());
        let bad_tail = r#"{"in_dim":1,"out_dim":1,"window_start":0,"matrices":[[[1.0]]],"tail":{"kind":"geometric","M":1,"rho":1}}"#;
        assert!(serde_json::from_str::<KernelSeq>(bad_tail).is_err());
    }

    #[test]
    fn filter_matches_shifted_evaluation() {
        let k = KernelSeq::from_scalars(&[0.125, 0.25, 0.5, 1.0], Tail::Zero).unwrap();
        let z = FiniteSeq::from_scalars(&[1.0, -2.0, 3.0, 0.5, 4.0, -1.0]).unwrap();
        let (ys, worst) = k.filter_windowed(&z).unwrap();
        assert_eq!(worst, 0.0);
        for (i, y) in ys.iter().enumerate() {
            let t = z.support_start() + i as i64;
            let direct = k.eval(&z.shift((-t) as u64)).unwrap();
            assert!((y[0] - direct[0]).abs() < 1e-14);
        }
    }
}
