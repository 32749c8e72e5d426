//! Functionals versus time-invariant filters, on a finite window.
//!
//! A functional `H` defines the filter `(U_H z)_t = H(shift(z, |t|))`: the
//! output at time `t` is `H` applied to the input as it looked at time `t`.
//! Conversely a filter defines the functional `H_U(z) = (U z)_0`. These maps
//! are mutually inverse between functionals and time-invariant filters, and
//! every filter of the form `U_H` is causal.
//!
//! Time invariance reads `(U shift(z, s))_t = (U z)_{t-s}` for `s ≥ 0`.
//!
//! Filters on bi-infinite sequences are handled through [`CausalFilter`],
//! with zero-extension as the right inverse of restriction to `t ≤ 0`.

use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::seqspace::FiniteSeq;

type OutputFn = dyn Fn(&FiniteSeq, i64) -> Result<DVector<f64>> + Send + Sync;

/// A filter on semi-infinite sequences, observed at `t = horizon..=0`.
#[derive(Clone)]
pub struct WindowedFilter {
    horizon: i64,
    in_dim: usize,
    output: Arc<OutputFn>,
}

impl std::fmt::Debug for WindowedFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WindowedFilter").field("horizon", &self.horizon).field("in_dim", &self.in_dim).finish()
    }
}

impl WindowedFilter {
    /// A filter from its per-time outputs `(z, t) ↦ (U z)_t`.
    pub fn new<F>(horizon: i64, in_dim: usize, output: F) -> Self
    where
        F: Fn(&FiniteSeq, i64) -> Result<DVector<f64>> + Send + Sync + 'static,
    {
        WindowedFilter { horizon: horizon.min(0), in_dim, output: Arc::new(output) }
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    /// `(U z)_t` for one `t` in the window.
    pub fn output_at(&self, z: &FiniteSeq, t: i64) -> Result<DVector<f64>> {
        if t > 0 || t < self.horizon {
            return Err(Error::Domain(format!("time {t} outside the window [{}, 0]", self.horizon)));
        }
        z.check_dim(self.in_dim)?;
        (self.output)(z, t)
    }

    /// `(U z)_t` for `t = horizon..=0`, oldest first.
    pub fn apply(&self, z: &FiniteSeq) -> Result<Vec<DVector<f64>>> {
        (self.horizon..=0).map(|t| self.output_at(z, t)).collect()
    }
}

/// `U_H` with `(U_H z)_t = H(shift(z, |t|))`.
pub fn functional_to_filter(h: Arc<dyn Functional>, in_dim: usize, horizon: i64) -> WindowedFilter {
    WindowedFilter::new(horizon, in_dim, move |z, t| h.apply(&z.shift((-t) as u64)))
}

/// `H_U(z) = (U z)_0`.
pub fn filter_to_functional(u: &WindowedFilter) -> impl Functional + use<> {
    let u = u.clone();
    FilterFunctional(u)
}

struct FilterFunctional(WindowedFilter);

impl Functional for FilterFunctional {
    fn apply(&self, z: &FiniteSeq) -> Result<DVector<f64>> {
        self.0.output_at(z, 0)
    }
}

/// A failed identity, with the input that exposes it.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub t: i64,
    pub s: u64,
    pub z: FiniteSeq,
    pub lhs: DVector<f64>,
    pub rhs: DVector<f64>,
}

/// Absolute tolerance, scaled by the output size, for the checks below.
pub const CHECK_TOL: f64 = 1e-12;

fn differs(a: &DVector<f64>, b: &DVector<f64>) -> bool {
    a.len() != b.len() || (a - b).norm() > CHECK_TOL * (1.0 + a.norm().max(b.norm()))
}

fn random_input(rng: &mut ChaCha8Rng, in_dim: usize, horizon: i64) -> FiniteSeq {
    let entries = (horizon..=0)
        .map(|_| DVector::from_fn(in_dim, |_, _| rng.sample::<f64, _>(StandardNormal)))
        .collect();
    FiniteSeq::new(in_dim, horizon, entries).expect("shape fixed above")
}

/// Checks `(U shift(z, s))_t = (U z)_{t-s}` for every `t`, `s ≥ 0` with
/// both sides in the window, on `trials` random inputs. Returns the first
/// failure.
pub fn time_invariance_check(u: &WindowedFilter, trials: usize, seed: u64) -> Result<Option<Counterexample>> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let z = random_input(&mut rng, u.in_dim, u.horizon);
        let outs = u.apply(&z)?;
        let span = (-u.horizon) as u64;
        for s in 1..=span {
            let shifted = u.apply(&z.shift(s))?;
            for t in (u.horizon + s as i64)..=0 {
                let lhs = &shifted[(t - u.horizon) as usize];
                let rhs = &outs[(t - s as i64 - u.horizon) as usize];
                if differs(lhs, rhs) {
                    return Ok(Some(Counterexample { t, s, z, lhs: lhs.clone(), rhs: rhs.clone() }));
                }
            }
        }
    }
    Ok(None)
}

/// Checks that `(U z)_t` ignores `z_s` for `s > t`: random future entries
/// are overwritten and the output at `t` must not move. In the returned
/// counterexample `s` is the number of perturbed future steps.
pub fn causality_check(u: &WindowedFilter, trials: usize, seed: u64) -> Result<Option<Counterexample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let z = random_input(&mut rng, u.in_dim, u.horizon);
        let t = rng.random_range(u.horizon..=0);
        if t == 0 {
            continue;
        }
        let noise = random_input(&mut rng, u.in_dim, u.horizon);
        let entries = z.iter().map(|(s, v)| if s > t { noise.at(s) } else { v.clone() }).collect();
        let perturbed = FiniteSeq::new(u.in_dim, u.horizon, entries)?;
        let (a, b) = (u.output_at(&z, t)?, u.output_at(&perturbed, t)?);
        if differs(&a, &b) {
            return Ok(Some(Counterexample { t, s: (-t) as u64, z: perturbed, lhs: b, rhs: a }));
        }
    }
    Ok(None)
}

/// A finitely supported bi-infinite sequence: entries at `start..start+len`,
/// zero elsewhere. Indices may be positive.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSeq {
    pub dim: usize,
    pub start: i64,
    pub entries: Vec<DVector<f64>>,
}

impl BiSeq {
    pub fn at(&self, t: i64) -> DVector<f64> {
        let i = t - self.start;
        if i < 0 || i as usize >= self.entries.len() {
            DVector::zeros(self.dim)
        } else {
            self.entries[i as usize].clone()
        }
    }

    /// The zero-extension `ι(z)` of a semi-infinite sequence.
    pub fn zero_extension(z: &FiniteSeq) -> Self {
        BiSeq { dim: z.dim(), start: z.support_start(), entries: z.entries().to_vec() }
    }

    /// The past as seen at time `t`: `s ↦ z_{t+s}` for `s ≤ 0`.
    pub fn past_at(&self, t: i64) -> FiniteSeq {
        let start = (self.start - t).min(0);
        let entries = (start..=0).map(|s| self.at(t + s)).collect();
        FiniteSeq::new(self.dim, start, entries).expect("shape fixed above")
    }
}

/// Causal time-invariant filter on bi-infinite sequences, `(V z)_t =
/// H(past of z at t)`.
#[derive(Clone)]
pub struct CausalFilter {
    h: Arc<dyn Functional>,
}

impl CausalFilter {
    pub fn from_functional(h: Arc<dyn Functional>) -> Self {
        CausalFilter { h }
    }

    pub fn output_at(&self, z: &BiSeq, t: i64) -> Result<DVector<f64>> {
        self.h.apply(&z.past_at(t))
    }

    /// Restriction to semi-infinite inputs through zero-extension.
    pub fn restrict(&self, in_dim: usize, horizon: i64) -> WindowedFilter {
        let v = self.clone();
        WindowedFilter::new(horizon, in_dim, move |z, t| v.output_at(&BiSeq::zero_extension(z), t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convrep::{KernelSeq, Tail};
    use nalgebra::dvector;

    #[test]
    fn projection_gives_identity_filter() {
        let h: Arc<dyn Functional> = Arc::new(|z: &FiniteSeq| z.at(0));
        let u = functional_to_filter(h, 2, -3);
        let z = FiniteSeq::from_rows(2, &[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let out = u.apply(&z).unwrap();
        for (i, (_, v)) in z.iter().enumerate() {
            assert_eq!(&out[i], v);
        }
        assert_eq!(time_invariance_check(&u, 5, 1).unwrap(), None);
        assert_eq!(causality_check(&u, 20, 1).unwrap(), None);
        assert_eq!(filter_to_functional(&u).apply(&z).unwrap(), dvector![7.0, 8.0]);
    }

    #[test]
    fn kernel_filter_is_sliding_convolution() {
        let k = KernelSeq::from_scalars(&[0.5, -1.0, 2.0], Tail::Zero).unwrap();
        let u = functional_to_filter(Arc::new(k.clone()), 1, -4);
        let z = FiniteSeq::from_scalars(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let out = u.apply(&z).unwrap();
        let vals = [1.0, 2.0, 3.0, 4.0, 5.0];
        let kv = [2.0, -1.0, 0.5]; // κ_0, κ_{-1}, κ_{-2}
        for i in 0..5 {
            let mut y = 0.0;
            for (j, kj) in kv.iter().enumerate() {
                if i >= j {
                    y += kj * vals[i - j];
                }
            }
            assert_eq!(out[i][0], y, "i = {i}");
        }
        let (filt, _) = k.filter_windowed(&z).unwrap();
        assert_eq!(filt, out);
    }

    #[test]
    fn time_weighted_filter_is_caught() {
        let u = WindowedFilter::new(-3, 1, |z, t| Ok(z.at(t) * t as f64));
        let cx = time_invariance_check(&u, 3, 7).unwrap().expect("not time-invariant");
        assert!(cx.s >= 1);
        assert!(differs(&cx.lhs, &cx.rhs));
        let zero = WindowedFilter::new(-3, 1, |_, _| Ok(dvector![0.0]));
        assert_eq!(time_invariance_check(&zero, 3, 7).unwrap(), None);
    }

    #[test]
    fn anticausal_filter_is_caught() {
        let u = WindowedFilter::new(-3, 1, |z, _| Ok(z.at(0)));
        assert!(causality_check(&u, 50, 3).unwrap().is_some());
    }

    #[test]
    fn bi_infinite_restriction_roundtrip() {
        let k = KernelSeq::from_scalars(&[1.0, 2.0], Tail::Zero).unwrap();
        let h: Arc<dyn Functional> = Arc::new(k);
        let v = CausalFilter::from_functional(h.clone());
        let u1 = v.restrict(1, -4);
        let u2 = functional_to_filter(h, 1, -4);
        let z = FiniteSeq::from_scalars(&[1.0, -1.0, 0.5, 2.0, 3.0]).unwrap();
        assert_eq!(u1.apply(&z).unwrap(), u2.apply(&z).unwrap());
        // future values exist on the bi-infinite line but do not matter at t ≤ 0
        let mut bz = BiSeq::zero_extension(&z);
        bz.entries.push(dvector![100.0]);
        assert_eq!(v.output_at(&bz, 0).unwrap(), u1.output_at(&z, 0).unwrap());
        assert_eq!(v.output_at(&bz, 1).unwrap(), dvector![100.0 * 2.0 + 3.0]);
    }
}
