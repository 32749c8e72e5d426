//! Seeded random instances: sequences, kernels, weightings and state-space
//! systems with controlled spectra.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::convrep::kernel::{op_norm, KernelSeq, Tail};
use crate::seqspace::{FiniteSeq, TailRule, WeightingSeq};
use crate::ssm::LinearSSM;

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Gaussian entries on `t = -(len-1)..=0`.
pub fn sequence<R: Rng + ?Sized>(rng: &mut R, dim: usize, len: usize) -> FiniteSeq {
    let len = len.max(1);
    let entries = (0..len).map(|_| gaussian_vector(rng, dim)).collect();
    FiniteSeq::new(dim, 1 - len as i64, entries).expect("positive dimension")
}

/// Like [`sequence`] but with a random fraction of entries set to zero and
/// a random overall scale, so norms of different sizes show up.
pub fn sparse_sequence<R: Rng + ?Sized>(rng: &mut R, dim: usize, len: usize) -> FiniteSeq {
    let keep: f64 = rng.random_range(0.2..=1.0);
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    let z = sequence(rng, dim, len);
    let entries = z
        .entries()
        .iter()
        .map(|v| if rng.random_bool(keep) { v * scale } else { DVector::zeros(dim) })
        .collect();
    FiniteSeq::new(dim, z.support_start(), entries).expect("same shape")
}

/// A kernel with `κ_t = M ρ^{|t|} U_t`, `‖U_t‖ ≤ 1`, on a window of `width`
/// steps, and the matching geometric tail (or a zero tail if `finite`).
pub fn decaying_kernel<R: Rng + ?Sized>(rng: &mut R, in_dim: usize, out_dim: usize, width: usize, finite: bool) -> KernelSeq {
    let rho: f64 = rng.random_range(0.1..0.95);
    let m = 10f64.powf(rng.random_range(-1.0..1.0));
    let start = 1 - width.max(1) as i64;
    let tail = if finite { Tail::Zero } else { Tail::Geometric { m, rho } };
    KernelSeq::from_fn(in_dim, out_dim, start, tail, |t| {
        let g = gaussian_matrix(rng, out_dim, in_dim);
        let n = op_norm(&g);
        let shrink: f64 = rng.random_range(0.0..=1.0);
        let unit = if n > 0.0 { g / n } else { g };
        unit * (m * rho.powi((-t) as i32) * shrink)
    })
    .expect("consistent shapes")
}

/// Arbitrary window matrices with a zero tail.
pub fn finite_kernel<R: Rng + ?Sized>(rng: &mut R, in_dim: usize, out_dim: usize, width: usize) -> KernelSeq {
    let start = 1 - width.max(1) as i64;
    KernelSeq::from_fn(in_dim, out_dim, start, Tail::Zero, |_| gaussian_matrix(rng, out_dim, in_dim)).expect("consistent shapes")
}

/// One of the exponential, polynomial or tabulated families.
pub fn weighting<R: Rng + ?Sized>(rng: &mut R) -> WeightingSeq {
    match rng.random_range(0..3) {
        0 => WeightingSeq::exponential(rng.random_range(0.3..0.99)).expect("valid"),
        1 => WeightingSeq::polynomial(rng.random_range(0.25..3.0)).expect("valid"),
        _ => {
            let len = rng.random_range(1..8usize);
            let mut vals: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..=1.0)).collect();
            vals.sort_by(f64::total_cmp);
            let ratio: f64 = rng.random_range(0.3..0.95);
            let scale = 0.999 * vals[0] * ratio.powi(-(len as i32));
            WeightingSeq::tabulated(1 - len as i64, vals, TailRule::Geometric { scale, ratio }).expect("monotone by construction")
        }
    }
}

/// Largest eigenvalue modulus, from the general eigensolver.
pub fn eigen_radius(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// A Gaussian matrix rescaled to spectral radius `radius`.
pub fn matrix_with_radius<R: Rng + ?Sized>(rng: &mut R, n: usize, radius: f64) -> DMatrix<f64> {
    loop {
        let a = gaussian_matrix(rng, n, n);
        let r = eigen_radius(&a);
        if r > 1e-3 {
            return a * (radius / r);
        }
    }
}

/// A system with spectral radius drawn from `[0.05, max_radius]`.
pub fn stable_ssm<R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, m: usize, max_radius: f64) -> LinearSSM {
    let radius = rng.random_range(0.05..=max_radius);
    let a = matrix_with_radius(rng, n, radius);
    LinearSSM::new(a, gaussian_matrix(rng, n, d), gaussian_matrix(rng, m, n)).expect("consistent shapes")
}

/// `S D S^{-1}` with block-diagonal `D` built from the requested moduli:
/// each modulus becomes either a real eigenvalue of random sign or, when
/// room allows, a rotation-scaling block carrying a conjugate pair. The
/// first modulus always lands in the matrix. `S = I + 0.3·G` keeps the
/// eigenvector basis reasonably conditioned.
pub fn planted_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, moduli: &[f64]) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(n, n);
    let mut i = 0;
    let mut k = 0;
    while i < n {
        let r = moduli.get(k).copied().unwrap_or_else(|| moduli.last().copied().unwrap_or(0.5) * rng.random_range(0.0..1.0));
        k += 1;
        if i + 1 < n && rng.random_bool(0.5) {
            let th: f64 = rng.random_range(0.1..std::f64::consts::PI - 0.1);
            d[(i, i)] = r * th.cos();
            d[(i, i + 1)] = -r * th.sin();
            d[(i + 1, i)] = r * th.sin();
            d[(i + 1, i + 1)] = r * th.cos();
            i += 2;
        } else {
            d[(i, i)] = if rng.random_bool(0.5) { r } else { -r };
            i += 1;
        }
    }
    loop {
        let s = DMatrix::identity(n, n) + gaussian_matrix(rng, n, n) * 0.3;
        if let Some(inv) = s.clone().try_inverse() {
            if op_norm(&s) * op_norm(&inv) < 50.0 {
                return &s * d * inv;
            }
        }
    }
}

/// A matrix with one planted eigenvalue of modulus in `[1, 1.5]` and the
/// rest inside the unit disc.
pub fn planted_unstable<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let top = rng.random_range(1.0..=1.5);
    let rest: Vec<f64> = (1..n).map(|_| rng.random_range(0.0..0.9)).collect();
    let mut moduli = vec![top];
    moduli.extend(rest);
    planted_spectrum(rng, n, &moduli)
}

/// A matrix with every eigenvalue modulus at most `0.9`.
pub fn planted_stable<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let moduli: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=0.9)).collect();
    planted_spectrum(rng, n, &moduli)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planted_spectra_land_where_asked() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            let a = planted_unstable(&mut rng, n);
            let r = eigen_radius(&a);
            assert!((1.0 - 1e-9..=1.5 + 1e-9).contains(&r), "n = {n}, r = {r}");
            let b = planted_stable(&mut rng, n);
            assert!(eigen_radius(&b) <= 0.9 + 1e-9);
        }
    }

    #[test]
    fn decaying_kernels_respect_their_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let k = decaying_kernel(&mut rng, 2, 3, 6, false);
            let Tail::Geometric { m, rho } = k.tail() else { panic!() };
            for (t, n) in (k.window_start()..=0).zip(k.op_norms()) {
                assert!(n <= m * rho.powi((-t) as i32) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn weightings_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let w = weighting(&mut rng);
            let mut prev = 1.0;
            for t in 0..40 {
                let v = w.at(-t);
                assert!(v > 0.0 && v <= prev);
                prev = v;
            }
        }
    }
}
