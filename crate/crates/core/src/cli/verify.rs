//! Quick randomized self-checks behind `fadekit verify`.

use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convrep::{
    cone_certificate, construct_weighting, continuity_bound, extract_kernel, AnalyticKernel, ConstructedWeighting,
    KernelSeq, Property, Verdict,
};
use crate::duality::{causality_check, filter_to_functional, functional_to_filter, time_invariance_check};
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::rkhs::{kernel_eval, truncation_equivalence, SeqKernel};
use crate::sample;
use crate::seqspace::{lp_norm, weighted_lp_norm, FiniteSeq};
use crate::ssm::{run_recurrent, ssm_to_kernel, unstable_witness, WITNESS_TOL};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    /// Worst value of the checked statistic, where one applies.
    pub worst: Option<f64>,
    pub detail: Option<String>,
}

struct Tally {
    name: &'static str,
    instances: usize,
    worst: Option<f64>,
    limit: f64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, limit: f64) -> Self {
        Tally { name, instances: 0, worst: None, limit, failure: None }
    }

    /// Records a statistic that must stay at or below the limit.
    fn observe(&mut self, v: f64) {
        self.instances += 1;
        self.worst = Some(self.worst.map_or(v, |w| w.max(v)));
        if (v.is_nan() || v > self.limit) && self.failure.is_none() {
            self.failure = Some(format!("value {v:e} exceeds {:e} at instance {}", self.limit, self.instances));
        }
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn finish(self, res: Result<()>) -> CheckResult {
        let failure = match res {
            Ok(()) => self.failure,
            Err(e) => Some(format!("error: {e}")),
        };
        CheckResult { name: self.name, passed: failure.is_none(), instances: self.instances, worst: self.worst, detail: failure }
    }
}

/// Runs every check with `trials` instances each. Deterministic in `seed`.
pub fn run_checks(trials: usize, eps: f64, seed: u64) -> Vec<CheckResult> {
    let checks: [fn(&mut ChaCha8Rng, usize, f64) -> CheckResult; 10] = [
        dual_mode,
        analytic_truth_table,
        weighting_certificate,
        holder_bound,
        cone,
        truncation_finite_memory,
        lambda_recursion,
        duality_roundtrip,
        witness,
        extraction,
    ];
    checks
        .iter()
        .enumerate()
        .map(|(i, f)| f(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64)), trials, eps))
        .collect()
}

fn dual_mode(rng: &mut ChaCha8Rng, trials: usize, eps: f64) -> CheckResult {
    let mut t = Tally::new("dual_mode", 1.0);
    let res = (|| {
        for _ in 0..trials {
            let (n, d, m) = (rng.random_range(1..=8), rng.random_range(1..=4), rng.random_range(1..=4));
            let sys = sample::stable_ssm(rng, n, d, m, 0.95);
            let k = ssm_to_kernel(&sys, eps)?;
            let len = rng.random_range(1..=256);
            let z = sample::sequence(rng, d, len);
            let gap = (run_recurrent(&sys, &z)? - k.eval_windowed(&z)?.value).amax();
            // ratio to the allowed discrepancy eps·‖z‖_∞
            t.observe(gap / (eps * lp_norm(&z, f64::INFINITY)?));
        }
        Ok(())
    })();
    t.finish(res)
}

fn analytic_truth_table(_: &mut ChaCha8Rng, _: usize, _: f64) -> CheckResult {
    use Verdict::{Fails as F, Holds as H};
    let mut t = Tally::new("analytic_truth_table", 0.0);
    let res = (|| {
        for &(kernel, p, expect) in &[
            (AnalyticKernel::PowerLaw { omega: 1.0 }, 1.0, [H, H, H, F]),
            (AnalyticKernel::PowerLaw { omega: 1.0 }, 2.0, [H, H, H, F]),
            (AnalyticKernel::PowerLaw { omega: 1.0 }, f64::INFINITY, [H, H, H, F]),
            (AnalyticKernel::ConstantNorm { c: 1.0 }, 1.0, [F, H, H, F]),
            (AnalyticKernel::ConstantNorm { c: 1.0 }, 2.0, [F, F, F, F]),
            (AnalyticKernel::ConstantNorm { c: 1.0 }, f64::INFINITY, [F, F, F, F]),
        ] {
            let r = kernel.classify(p)?;
            let got = [
                r.verdict(Property::WeightedFmp),
                r.verdict(Property::Continuity),
                r.verdict(Property::MinimalFmpAndContinuity),
                r.verdict(Property::ProductFmp),
            ];
            t.require(got == expect, || format!("{kernel:?} at p = {p}: {got:?}"));
            let bad = r.implication_violations();
            t.require(bad.is_empty(), || format!("{kernel:?} at p = {p}: {bad:?}"));
        }
        Ok(())
    })();
    t.finish(res)
}

fn weighting_certificate(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("weighting_certificate", 1.0 + 1e-12);
    let res = (|| {
        for _ in 0..trials {
            let width = rng.random_range(1..=12);
            let (d, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let k = sample::decaying_kernel(rng, d, m, width, false);
            let ConstructedWeighting::Weighting { w, c } = construct_weighting(&k)? else {
                return Err(Error::Invalid("geometric tail reported as finite memory".into()));
            };
            for _ in 0..10 {
                let z = sample::sparse_sequence(rng, k.in_dim(), width);
                let rhs = c * weighted_lp_norm(&z, &w, 1.0)?;
                if rhs > 0.0 {
                    t.observe(k.eval(&z)?.norm() / rhs);
                }
            }
        }
        Ok(())
    })();
    t.finish(res)
}

fn holder_bound(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("holder_bound", 1.0 + 1e-12);
    let res = (|| {
        for _ in 0..trials {
            let width = rng.random_range(1..=12);
            let (d, m, finite) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_bool(0.3));
            let k = sample::decaying_kernel(rng, d, m, width, finite);
            let w = sample::weighting(rng);
            let p = if rng.random_bool(0.5) { 2.0 } else { f64::INFINITY };
            let Some(b) = continuity_bound(&k, &w, p)?.finite() else { continue };
            let z = sample::sparse_sequence(rng, k.in_dim(), width);
            let rhs = b * weighted_lp_norm(&z, &w, p)?;
            if rhs > 0.0 {
                t.observe(k.eval(&z)?.norm() / rhs);
            }
        }
        Ok(())
    })();
    t.finish(res)
}

fn cone(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("cone_certificate", 0.0);
    let res = (|| {
        for _ in 0..trials * 10 {
            let width = rng.random_range(1..=8);
            let (d, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let k = sample::finite_kernel(rng, d, m, width);
            let z = sample::sequence(rng, k.in_dim(), width);
            let cert = cone_certificate(&k, &z)?;
            t.require(cert.holds, || format!("lhs {} > rhs {}", cert.lhs, cert.rhs));
        }
        Ok(())
    })();
    t.finish(res)
}

fn truncation_finite_memory(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("truncation_finite_memory", 1e-8);
    let res = (|| {
        for _ in 0..trials {
            let d = rng.random_range(1..=3);
            let k = SeqKernel::lambda(rng.random_range(0.3..=1.0), d)?;
            let m = rng.random_range(1..=20);
            let samples: Vec<FiniteSeq> = (0..m)
                .map(|_| {
                    let len = rng.random_range(1..=12);
                    sample::sequence(rng, d, len)
                })
                .collect();
            let targets = sample::gaussian_vector(rng, m);
            let cutoff = [0, -1, -4, -8][rng.random_range(0..4)];
            let probes: Vec<FiniteSeq> = (0..20).map(|_| sample::sequence(rng, d, 12)).collect();
            let gamma = 10f64.powf(rng.random_range(-3.0..0.0));
            let eq = truncation_equivalence(&k, &samples, &targets, gamma, cutoff, &probes)?;
            t.observe(eq.prediction_residual.max(eq.objective_residual).max(eq.norm_residual));
        }
        Ok(())
    })();
    t.finish(res)
}

fn lambda_recursion(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("lambda_recursion", 1e-12);
    let res = (|| {
        for _ in 0..trials * 10 {
            let d = rng.random_range(1..=3);
            let lambda = rng.random_range(0.05..=1.0);
            let k = SeqKernel::lambda(lambda, d)?;
            let (la, lb) = (rng.random_range(1..=30), rng.random_range(1..=30));
            let (a, b) = (sample::sequence(rng, d, la), sample::sequence(rng, d, lb));
            let lhs = kernel_eval(&k, &a, &b)?;
            // ages both inputs by one step: the old z_{-1} becomes the new z_0
            let older = |z: &FiniteSeq| {
                if z.len() == 1 {
                    FiniteSeq::zeros(d)
                } else {
                    let e = z.entries()[..z.len() - 1].to_vec();
                    FiniteSeq::new(d, z.support_start() + 1, e).expect("non-empty")
                }
            };
            let rhs = a.at(0).dot(&b.at(0)) + lambda * lambda * kernel_eval(&k, &older(&a), &older(&b))?;
            let scale = kernel_eval(&k, &a, &a)?.sqrt() * kernel_eval(&k, &b, &b)?.sqrt();
            t.observe(if scale > 0.0 { (lhs - rhs).abs() / scale } else { (lhs - rhs).abs() });
        }
        Ok(())
    })();
    t.finish(res)
}

fn duality_roundtrip(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("duality_roundtrip", 0.0);
    let res = (|| {
        for i in 0..trials {
            let width = rng.random_range(1..=6);
            let (d, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let k = sample::finite_kernel(rng, d, m, width);
            let h: Arc<dyn Functional> = Arc::new(k.clone());
            let horizon = -(rng.random_range(0..=6) as i64);
            let u = functional_to_filter(h, k.in_dim(), horizon);
            let back = filter_to_functional(&u);
            let z = sample::sequence(rng, k.in_dim(), (1 - horizon) as usize);
            let gap = (back.apply(&z)? - k.apply(&z)?).amax();
            t.require(gap <= 1e-12 * (1.0 + k.apply(&z)?.amax()), || format!("H_(U_H) differs from H by {gap:e}"));
            let ti = time_invariance_check(&u, 2, i as u64)?;
            t.require(ti.is_none(), || format!("time invariance fails: {ti:?}"));
            let ca = causality_check(&u, 10, i as u64)?;
            t.require(ca.is_none(), || format!("causality fails: {ca:?}"));
        }
        Ok(())
    })();
    t.finish(res)
}

fn witness(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("unstable_witness", WITNESS_TOL);
    let res = (|| {
        for _ in 0..trials {
            let n = rng.random_range(1..=6);
            let a = sample::planted_unstable(rng, n);
            match unstable_witness(&a)? {
                Some(w) => t.observe(w.residual),
                None => t.require(false, || format!("no witness for a matrix of spectral radius {}", sample::eigen_radius(&a))),
            }
            let b = sample::planted_stable(rng, n);
            let none = unstable_witness(&b)?.is_none();
            t.require(none, || "witness returned for a stable matrix".into());
        }
        Ok(())
    })();
    t.finish(res)
}

fn extraction(rng: &mut ChaCha8Rng, trials: usize, _: f64) -> CheckResult {
    let mut t = Tally::new("extract_kernel_roundtrip", 1e-12);
    let res = (|| {
        for _ in 0..trials {
            let width = rng.random_range(1..=10);
            let (d, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
            let k: KernelSeq = sample::finite_kernel(rng, d, m, width);
            let ex = extract_kernel(&k, k.in_dim(), k.window_start())?;
            let gap = k.matrices().iter().zip(ex.kernel.matrices()).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
            t.observe(gap);
        }
        let square = |z: &FiniteSeq| z.at(0).map(|x| x * x) + DVector::from_element(1, z.at(-1)[0]);
        let rejected = matches!(extract_kernel(&square, 1, -2), Err(Error::NotLinear { .. }));
        t.require(rejected, || "nonlinear black box was accepted".into());
        Ok(())
    })();
    t.finish(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_on_a_small_run() {
        let checks = run_checks(4, 1e-10, 1);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(checks.len(), 10);
    }

    #[test]
    fn tally_reports_first_failure() {
        let mut t = Tally::new("x", 1.0);
        t.observe(0.5);
        t.observe(2.0);
        t.observe(3.0);
        let r = t.finish(Ok(()));
        assert!(!r.passed);
        assert_eq!(r.worst, Some(3.0));
        assert!(r.detail.unwrap().contains("instance 2"));
    }
}
