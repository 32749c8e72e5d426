//! Fading-memory classification of convolution kernels.
//!
//! For a linear functional with a finite-dimensional codomain and kernel
//! `κ`, the fading-memory and continuity properties reduce to summability
//! facts about `t ↦ ‖κ_t‖`:
//!
//! | `p`          | `p`-weighted FMP      | `p`-continuity        | minimal FMP + minimal continuity |
//! |--------------|-----------------------|-----------------------|----------------------------------|
//! | `1`          | `‖κ_t‖ → 0`           | `⫼κ⫼_∞ < ∞`           | `⫼κ⫼_∞ < ∞`                      |
//! | `(1, ∞)`     | `⫼κ⫼_q < ∞`           | `⫼κ⫼_q < ∞`           | `⫼κ⫼_q < ∞`                      |
//! | `∞`          | `⫼κ⫼_1 < ∞`           | `⫼κ⫼_1 < ∞` (on `c₀`) | `⫼κ⫼_1 < ∞`                      |
//!
//! where `q` is the Hölder conjugate of `p`. The product FMP holds exactly
//! when the kernel has finite memory.
//!
//! Inputs for `p = ∞` are taken to vanish at `-∞` (the `c₀` setting), which
//! makes `∞`-continuity coincide with the `∞`-weighted FMP.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kernel::{q_seq_norm, KernelSeq};
use super::weighting::ContinuityBound;
use crate::error::{Error, Result};
use crate::exponent::{check_exponent, conjugate, serde_inf};
use crate::interval::Interval;
use crate::seqspace::WeightingSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The certified bracket straddles the decision boundary. Unreachable for
    /// zero and geometric tails; kept so the report schema stays honest.
    #[serde(rename = "undecidable")]
    UndecidableAtPrecision,
}

impl From<Tri> for Verdict {
    fn from(t: Tri) -> Self {
        match t {
            Tri::Yes => Verdict::Holds,
            Tri::No => Verdict::Fails,
            Tri::Unknown => Verdict::UndecidableAtPrecision,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    #[serde(rename = "p_weighted_fmp")]
    WeightedFmp,
    #[serde(rename = "p_continuity")]
    Continuity,
    #[serde(rename = "minimal_fmp_and_minimal_continuity")]
    MinimalFmpAndContinuity,
    ProductFmp,
}

/// Summability facts the verdicts are decided from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummabilityFacts {
    /// Bracket for `⫼κ⫼_q`, `q` conjugate to the queried `p`.
    pub q_norm: Interval,
    /// Bracket for `⫼κ⫼_∞`.
    pub sup_norm: Interval,
    pub decays_to_zero: Tri,
    pub finite_memory: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmpReport {
    #[serde(with = "serde_inf")]
    pub p: f64,
    #[serde(with = "serde_inf")]
    pub q: f64,
    #[serde(with = "serde_inf")]
    pub q_norm_lower: f64,
    #[serde(with = "serde_inf")]
    pub q_norm_upper: f64,
    pub sup_norm: Interval,
    pub decays_to_zero: Tri,
    pub finite_memory: bool,
    pub verdicts: BTreeMap<Property, Verdict>,
}

fn finiteness(iv: Interval) -> Verdict {
    if iv.upper.is_finite() {
        Verdict::Holds
    } else if iv.lower.is_infinite() {
        Verdict::Fails
    } else {
        Verdict::UndecidableAtPrecision
    }
}

/// Applies the case split above to a set of summability facts.
pub fn decide(p: f64, facts: SummabilityFacts) -> Result<FmpReport> {
    check_exponent(p)?;
    let q = conjugate(p);
    let (weighted, continuity, minimal) = if p == 1.0 {
        let bounded = finiteness(facts.sup_norm);
        (Verdict::from(facts.decays_to_zero), bounded, bounded)
    } else {
        let summable = finiteness(facts.q_norm);
        (summable, summable, summable)
    };
    let product = if facts.finite_memory { Verdict::Holds } else { Verdict::Fails };
    let verdicts = BTreeMap::from([
        (Property::WeightedFmp, weighted),
        (Property::Continuity, continuity),
        (Property::MinimalFmpAndContinuity, minimal),
        (Property::ProductFmp, product),
    ]);
    Ok(FmpReport {
        p,
        q,
        q_norm_lower: facts.q_norm.lower,
        q_norm_upper: facts.q_norm.upper,
        sup_norm: facts.sup_norm,
        decays_to_zero: facts.decays_to_zero,
        finite_memory: facts.finite_memory,
        verdicts,
    })
}

/// Classifies an explicitly stored kernel.
pub fn classify(kernel: &KernelSeq, p: f64) -> Result<FmpReport> {
    check_exponent(p)?;
    let q = conjugate(p);
    let facts = SummabilityFacts {
        q_norm: q_seq_norm(kernel, q)?,
        sup_norm: q_seq_norm(kernel, f64::INFINITY)?,
        // zero and geometric tails both force ‖κ_t‖ → 0
        decays_to_zero: Tri::Yes,
        finite_memory: kernel.has_finite_memory(),
    };
    decide(p, facts)
}

impl FmpReport {
    pub fn verdict(&self, prop: Property) -> Verdict {
        self.verdicts[&prop]
    }

    /// Lists every arrow of the fading-memory implication diagram that the
    /// report contradicts. An empty list means the report is consistent.
    pub fn implication_violations(&self) -> Vec<String> {
        use Property::*;
        let holds = |p: Property| self.verdict(p) == Verdict::Holds;
        let fails = |p: Property| self.verdict(p) == Verdict::Fails;
        let mut out = Vec::new();
        let mut need = |cond: bool, msg: &str| {
            if cond {
                out.push(msg.to_string());
            }
        };
        need(holds(ProductFmp) && !holds(WeightedFmp), "product FMP without weighted FMP");
        need(holds(WeightedFmp) && fails(Continuity), "weighted FMP without continuity");
        need(holds(WeightedFmp) && fails(MinimalFmpAndContinuity), "weighted FMP without minimal FMP");
        need(holds(Continuity) && fails(MinimalFmpAndContinuity), "continuity without minimal continuity");
        need(self.finite_memory && !self.verdicts.values().all(|v| *v == Verdict::Holds), "finite memory but some property fails");
        need(self.finite_memory != holds(ProductFmp), "product FMP disagrees with finite memory");
        need(self.q_norm_lower > self.q_norm_upper, "inverted q-norm interval");
        out
    }
}

/// Arrows between reports for different exponents of the same kernel:
/// `∞`-weighted FMP implies every `p`-weighted FMP, and `p`-continuity
/// implies `r`-continuity for `r ≤ p`.
pub fn cross_exponent_violations(reports: &[FmpReport]) -> Vec<String> {
    let mut out = Vec::new();
    for a in reports {
        for b in reports {
            if a.p > b.p {
                if a.p.is_infinite() && a.verdict(Property::WeightedFmp) == Verdict::Holds && b.verdict(Property::WeightedFmp) == Verdict::Fails {
                    out.push(format!("inf-weighted FMP holds but {}-weighted fails", b.p));
                }
                if a.verdict(Property::Continuity) == Verdict::Holds && b.verdict(Property::Continuity) == Verdict::Fails {
                    out.push(format!("{}-continuity holds but {}-continuity fails", a.p, b.p));
                }
            }
        }
    }
    out
}

/// Kernels whose norms are known in closed form but are not geometrically
/// bounded, used as analytic reference cases. Both are scalar (`d = m = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AnalyticKernel {
    /// `κ_t = (1 - t)^{-(1+ω)}`, `ω > 0`: summable, but slower than any
    /// geometric sequence.
    PowerLaw { omega: f64 },
    /// `|κ_t| = c > 0` for every `t`: bounded but not decaying.
    ConstantNorm { c: f64 },
}

/// Number of explicitly summed terms before the integral bracket.
const ANALYTIC_TERMS: usize = 1001;

/// Bracket for `Σ_{n ≥ 1} n^{-s}` (`s > 1`) from `terms` partial-sum terms
/// and integral comparison of the remainder.
pub(crate) fn zeta_bracket(s: f64, terms: usize) -> Interval {
    let partial: f64 = (1..=terms).map(|n| (n as f64).powf(-s)).sum();
    let n = terms as f64;
    let lo = (n + 1.0).powf(1.0 - s) / (s - 1.0);
    let hi = n.powf(1.0 - s) / (s - 1.0);
    Interval::new(partial + lo, partial + hi)
}

impl AnalyticKernel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticKernel::PowerLaw { omega } if !(omega > 0.0 && omega.is_finite()) => {
                Err(Error::Invalid(format!("power-law exponent needs omega > 0, got {omega}")))
            }
            AnalyticKernel::ConstantNorm { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::Invalid(format!("constant-norm kernel needs c > 0, got {c}")))
            }
            _ => Ok(()),
        }
    }

    /// `κ_t` (a scalar).
    pub fn at(&self, t: i64) -> f64 {
        match *self {
            AnalyticKernel::PowerLaw { omega } => (1.0 - t as f64).powf(-(1.0 + omega)),
            AnalyticKernel::ConstantNorm { c } => c,
        }
    }

    /// The explicit window `[window_start, 0]` as a finite-memory kernel.
    pub fn window(&self, window_start: i64) -> Result<KernelSeq> {
        self.validate()?;
        let vals: Vec<f64> = (window_start.min(0)..=0).map(|t| self.at(t)).collect();
        KernelSeq::from_scalars(&vals, super::kernel::Tail::Zero)
    }

    /// Bracket for `⫼κ⫼_q`.
    pub fn q_seq_norm(&self, q: f64) -> Result<Interval> {
        check_exponent(q)?;
        self.validate()?;
        Ok(match *self {
            AnalyticKernel::PowerLaw { .. } if q.is_infinite() => Interval::point(1.0),
            AnalyticKernel::PowerLaw { omega } => {
                let iv = zeta_bracket(q * (1.0 + omega), ANALYTIC_TERMS);
                Interval::new(iv.lower.powf(1.0 / q), iv.upper.powf(1.0 / q))
            }
            AnalyticKernel::ConstantNorm { c } if q.is_infinite() => Interval::point(c),
            AnalyticKernel::ConstantNorm { .. } => Interval::new(f64::INFINITY, f64::INFINITY),
        })
    }

    pub fn facts(&self, p: f64) -> Result<SummabilityFacts> {
        check_exponent(p)?;
        Ok(SummabilityFacts {
            q_norm: self.q_seq_norm(conjugate(p))?,
            sup_norm: self.q_seq_norm(f64::INFINITY)?,
            decays_to_zero: match self {
                AnalyticKernel::PowerLaw { .. } => Tri::Yes,
                AnalyticKernel::ConstantNorm { .. } => Tri::No,
            },
            finite_memory: false,
        })
    }

    pub fn classify(&self, p: f64) -> Result<FmpReport> {
        decide(p, self.facts(p)?)
    }

    /// Hölder constant `(Σ_t w_t^{-q/p} |κ_t|^q)^{1/q}` (with `1/p` replaced
    /// by 1 when `p = ∞`).
    ///
    /// Against geometrically decaying weights the power law always diverges.
    pub fn continuity_bound(&self, w: &WeightingSeq, p: f64) -> Result<ContinuityBound> {
        check_exponent(p)?;
        self.validate()?;
        if p == 1.0 {
            return Err(Error::Unsupported("Hölder bound needs p > 1".into()));
        }
        let omega = match *self {
            AnalyticKernel::ConstantNorm { .. } => return Ok(ContinuityBound::Infinite),
            AnalyticKernel::PowerLaw { omega } => omega,
        };
        if w.decays_geometrically() {
            return Ok(ContinuityBound::Infinite);
        }
        let q = conjugate(p);
        let r = if p.is_infinite() { 1.0 } else { 1.0 / p };
        // Terms are w_t^{-qr} (1-t)^{-q(1+ω)}; beyond the table the weight is
        // min(1, scale·(1-t)^{-a}), so w^{-qr} ≤ max(1, scale^{-qr}) (1-t)^{aqr}.
        let (table_end, scale, a) = match w {
            WeightingSeq::Polynomial { a } => (0i64, 1.0, *a),
            WeightingSeq::Tabulated { start, tail: crate::seqspace::TailRule::Polynomial { scale, a }, .. } => (*start, *scale, *a),
            _ => unreachable!("geometric weightings handled above"),
        };
        let s = q * (1.0 + omega) - a * q * r;
        if s <= 1.0 {
            return Ok(ContinuityBound::Infinite);
        }
        let explicit_end = table_end.min(0) - ANALYTIC_TERMS as i64;
        let explicit: f64 = (explicit_end..=0).map(|t| w.at(t).powf(-q * r) * self.at(t).powf(q)).sum();
        // remaining t < explicit_end, i.e. n = 1 - t > 1 - explicit_end =: n0
        let n0 = (1 - explicit_end) as f64;
        let tail = scale.powf(-q * r).max(1.0) * n0.powf(1.0 - s) / (s - 1.0);
        Ok(ContinuityBound::Finite((explicit + tail).powf(1.0 / q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convrep::kernel::Tail;
    use std::f64::consts::PI;

    fn all_hold(r: &FmpReport) -> bool {
        r.verdicts.values().all(|v| *v == Verdict::Holds)
    }

    #[test]
    fn finite_memory_holds_everything() {
        let k = KernelSeq::from_scalars(&[1.0, -2.0, 0.5], Tail::Zero).unwrap();
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            let r = classify(&k, p).unwrap();
            assert!(all_hold(&r), "{r:?}");
            assert!(r.finite_memory);
            assert_eq!(r.q_norm_lower, r.q_norm_upper);
            assert!(r.implication_violations().is_empty());
        }
    }

    #[test]
    fn geometric_tail_has_infinite_memory() {
        let k = KernelSeq::from_scalars(&[0.5, 1.0], Tail::Geometric { m: 1.0, rho: 0.5 }).unwrap();
        let r = classify(&k, f64::INFINITY).unwrap();
        assert_eq!(r.verdict(Property::WeightedFmp), Verdict::Holds);
        assert_eq!(r.verdict(Property::ProductFmp), Verdict::Fails);
        assert!(r.implication_violations().is_empty());
    }

    #[test]
    fn constant_norm_is_one_continuous_without_one_weighted_fmp() {
        let k = AnalyticKernel::ConstantNorm { c: 1.0 };
        let r = k.classify(1.0).unwrap();
        assert_eq!(r.verdict(Property::Continuity), Verdict::Holds);
        assert_eq!(r.verdict(Property::WeightedFmp), Verdict::Fails);
        assert_eq!(r.verdict(Property::MinimalFmpAndContinuity), Verdict::Holds);
        for p in [2.0, f64::INFINITY] {
            let r = k.classify(p).unwrap();
            assert_eq!(r.verdict(Property::WeightedFmp), Verdict::Fails);
            assert_eq!(r.verdict(Property::Continuity), Verdict::Fails);
            assert!(r.implication_violations().is_empty());
        }
    }

    #[test]
    fn power_law_one_norm_brackets_zeta_two() {
        let iv = AnalyticKernel::PowerLaw { omega: 1.0 }.q_seq_norm(1.0).unwrap();
        assert!(iv.contains(PI * PI / 6.0), "{iv:?}");
        assert!(iv.width() < 1e-6);
    }

    #[test]
    fn power_law_excludes_exponential_weights() {
        let k = AnalyticKernel::PowerLaw { omega: 1.0 };
        let w = WeightingSeq::exponential(0.99).unwrap();
        assert_eq!(k.continuity_bound(&w, f64::INFINITY).unwrap(), ContinuityBound::Infinite);
        // polynomial weights with a < ω keep the series summable
        let w = WeightingSeq::polynomial(0.5).unwrap();
        let b = k.continuity_bound(&w, f64::INFINITY).unwrap().finite().unwrap();
        // Σ (1-t)^{-(2 - 0.5)} = ζ(1.5)
        let zeta = zeta_bracket(1.5, 100_000);
        assert!(b >= zeta.lower && b <= zeta.upper + 1e-4, "{b} vs {zeta:?}");
        let w = WeightingSeq::polynomial(1.0).unwrap();
        assert_eq!(k.continuity_bound(&w, f64::INFINITY).unwrap(), ContinuityBound::Infinite);
        assert!(k.continuity_bound(&w, 1.0).is_err());
    }

    #[test]
    fn report_json_uses_verdict_strings() {
        let r = AnalyticKernel::ConstantNorm { c: 1.0 }.classify(1.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["p"], 1.0);
        assert_eq!(v["q"], "inf");
        assert_eq!(v["verdicts"]["p_weighted_fmp"], "fails");
        assert_eq!(v["verdicts"]["p_continuity"], "holds");
        let back: FmpReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let u = serde_json::to_value(Verdict::UndecidableAtPrecision).unwrap();
        assert_eq!(u, "undecidable");
    }

    #[test]
    fn decide_reports_undecidable_for_straddling_bracket() {
        let facts = SummabilityFacts {
            q_norm: Interval::new(1.0, f64::INFINITY),
            sup_norm: Interval::point(1.0),
            decays_to_zero: Tri::Unknown,
            finite_memory: false,
        };
        let r = decide(2.0, facts).unwrap();
        assert_eq!(r.verdict(Property::WeightedFmp), Verdict::UndecidableAtPrecision);
        let r = decide(1.0, facts).unwrap();
        assert_eq!(r.verdict(Property::WeightedFmp), Verdict::UndecidableAtPrecision);
        assert!(decide(0.5, facts).is_err());
    }
}
