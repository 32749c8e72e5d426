//! Finitely supported semi-infinite sequences and weighted `ℓ^p` norms.
//!
//! Time runs over the non-positive integers `t ≤ 0`; `t = 0` is the present
//! and more negative indices are further in the past. A [`FiniteSeq`] stores
//! the entries `z_T, …, z_0` for some `T ≤ 0`; everything older is zero.
//! Entries live in `R^d` with the Euclidean norm.

use std::io::Read;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::check_exponent;

/// A sequence `(…, 0, z_T, …, z_0)` of vectors in `R^d`.
///
/// Equality ignores leading zero blocks: two sequences are equal when they
/// agree entrywise after zero-extension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SeqRepr", into = "SeqRepr")]
pub struct FiniteSeq {
    dim: usize,
    start: i64,
    entries: Vec<DVector<f64>>,
}

#[derive(Serialize, Deserialize)]
struct SeqRepr {
    dim: usize,
    start: i64,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<SeqRepr> for FiniteSeq {
    type Error = Error;

    fn try_from(r: SeqRepr) -> Result<Self> {
        let entries = r.entries.into_iter().map(DVector::from_vec).collect();
        FiniteSeq::new(r.dim, r.start, entries)
    }
}

impl From<FiniteSeq> for SeqRepr {
    fn from(z: FiniteSeq) -> Self {
        SeqRepr {
            dim: z.dim,
            start: z.start,
            entries: z.entries.iter().map(|v| v.iter().copied().collect()).collect(),
        }
    }
}

impl FiniteSeq {
    /// Builds a sequence from entries ordered `t = start..=0`.
    pub fn new(dim: usize, start: i64, entries: Vec<DVector<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("sequence dimension must be positive".into()));
        }
        if start > 0 {
            return Err(Error::Invalid(format!("support start must be <= 0, got {start}")));
        }
        let expected = (1 - start) as usize;
        if entries.len() != expected {
            return Err(Error::Invalid(format!(
                "support [{start}, 0] needs {expected} entries, got {}",
                entries.len()
            )));
        }
        for v in &entries {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("sequence entries must be finite".into()));
            }
        }
        Ok(FiniteSeq { dim, start, entries })
    }

    /// The zero sequence in `R^dim`.
    pub fn zeros(dim: usize) -> Self {
        FiniteSeq { dim, start: 0, entries: vec![DVector::zeros(dim)] }
    }

    /// Zero sequence with explicit (all-zero) support `[start, 0]`.
    pub fn zeros_on(dim: usize, start: i64) -> Self {
        let start = start.min(0);
        FiniteSeq { dim, start, entries: vec![DVector::zeros(dim); (1 - start) as usize] }
    }

    /// Scalar sequence (`dim = 1`) from values ordered oldest first, ending at `t = 0`.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Ok(Self::zeros(1));
        }
        let start = 1 - values.len() as i64;
        Self::new(1, start, values.iter().map(|&x| DVector::from_element(1, x)).collect())
    }

    /// Sequence from rows ordered oldest first, ending at `t = 0`.
    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self::zeros(dim));
        }
        let start = 1 - rows.len() as i64;
        Self::new(dim, start, rows.iter().map(|r| DVector::from_row_slice(r)).collect())
    }

    /// Reads a sequence from CSV: one row per time step, oldest first, no header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let dim = rows.first().map(|r| r.len()).ok_or_else(|| Error::Parse("empty csv".into()))?;
        Self::from_rows(dim, &rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Oldest index carried explicitly (entries below it are zero).
    pub fn support_start(&self) -> i64 {
        self.start
    }

    /// Number of explicit time steps, `1 - support_start`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entries ordered `t = support_start..=0`.
    pub fn entries(&self) -> &[DVector<f64>] {
        &self.entries
    }

    /// `z_t`, or `None` outside the explicit support.
    pub fn entry(&self, t: i64) -> Option<&DVector<f64>> {
        if t > 0 || t < self.start {
            None
        } else {
            Some(&self.entries[(t - self.start) as usize])
        }
    }

    /// `z_t` with zero-extension.
    pub fn at(&self, t: i64) -> DVector<f64> {
        self.entry(t).cloned().unwrap_or_else(|| DVector::zeros(self.dim))
    }

    /// Iterates `(t, z_t)` over the explicit support, oldest first.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &DVector<f64>)> + '_ {
        self.entries.iter().enumerate().map(move |(i, v)| (self.start + i as i64, v))
    }

    /// Oldest index holding a non-zero entry, or `None` for the zero sequence.
    pub fn oldest_nonzero(&self) -> Option<i64> {
        self.iter().find(|(_, v)| v.iter().any(|&x| x != 0.0)).map(|(t, _)| t)
    }

    pub fn is_zero(&self) -> bool {
        self.oldest_nonzero().is_none()
    }

    /// Drops leading zero blocks.
    pub fn normalized(&self) -> Self {
        match self.oldest_nonzero() {
            None => Self::zeros(self.dim),
            Some(t) => self.truncate(t),
        }
    }

    /// Re-expresses the sequence on the support `[start, 0]`, padding with
    /// zeros. Entries older than `start` are dropped.
    pub fn with_support(&self, start: i64) -> Self {
        let start = start.min(0);
        let entries = (start..=0).map(|t| self.at(t)).collect();
        FiniteSeq { dim: self.dim, start, entries }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &FiniteSeq, b: f64) -> Result<Self> {
        self.check_dim(other.dim)?;
        let start = self.start.min(other.start);
        let entries = (start..=0).map(|t| self.at(t) * a + other.at(t) * b).collect();
        Ok(FiniteSeq { dim: self.dim, start, entries })
    }

    pub fn scaled(&self, a: f64) -> Self {
        FiniteSeq { dim: self.dim, start: self.start, entries: self.entries.iter().map(|v| v * a).collect() }
    }

    /// `result_t = z_{t-s}` for `t ≤ 0`: the sequence moves toward the past,
    /// and entries pushed beyond `t = 0` are discarded. `shift(z, 1)` drops
    /// `z_0` and makes `z_{-1}` the new present value.
    ///
    /// ```
    /// # use fadekit::seqspace::{include, shift};
    /// # use nalgebra::dvector;
    /// let z = include(dvector![2.0], -3);
    /// assert_eq!(shift(&z, 1), include(dvector![2.0], -2));
    /// ```
    pub fn shift(&self, s: u64) -> Self {
        shift(self, s)
    }

    /// Keeps `z_t` for `cutoff ≤ t ≤ 0` and zeroes everything older.
    pub fn truncate(&self, cutoff: i64) -> Self {
        truncate(self, cutoff)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim });
        }
        Ok(())
    }
}

impl PartialEq for FiniteSeq {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let start = self.start.min(other.start);
        (start..=0).all(|t| self.at(t) == other.at(t))
    }
}

/// `δ^t(v)`: the sequence with the single entry `v` at time `t`.
pub fn include(v: DVector<f64>, t: i64) -> FiniteSeq {
    let t = t.min(0);
    let dim = v.len();
    let mut z = FiniteSeq::zeros_on(dim, t);
    z.entries[0] = v;
    z
}

/// See [`FiniteSeq::shift`].
pub fn shift(z: &FiniteSeq, s: u64) -> FiniteSeq {
    if s == 0 {
        return z.clone();
    }
    let s = s.min(z.len() as u64) as usize;
    if s == z.len() {
        return FiniteSeq::zeros(z.dim);
    }
    // The newest `s` entries fall off; the remainder slides `s` steps forward.
    let entries = z.entries[..z.len() - s].to_vec();
    FiniteSeq { dim: z.dim, start: z.start + s as i64, entries }
}

/// `τ_T`: keeps entries at `cutoff ≤ t ≤ 0`.
pub fn truncate(z: &FiniteSeq, cutoff: i64) -> FiniteSeq {
    let cutoff = cutoff.min(0);
    if cutoff <= z.start {
        return z.clone();
    }
    let skip = (cutoff - z.start) as usize;
    FiniteSeq { dim: z.dim, start: cutoff, entries: z.entries[skip..].to_vec() }
}

fn pow_sum_norm(terms: impl Iterator<Item = (f64, f64)>, p: f64) -> f64 {
    // terms: (weight, ‖z_t‖)
    if p.is_infinite() {
        terms.map(|(w, n)| w * n).fold(0.0, f64::max)
    } else {
        let s: f64 = terms.map(|(w, n)| w * n.powf(p)).sum();
        s.powf(1.0 / p)
    }
}

/// `‖z‖_p = (Σ_t ‖z_t‖^p)^{1/p}`, or `sup_t ‖z_t‖` for `p = ∞`.
pub fn lp_norm(z: &FiniteSeq, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(pow_sum_norm(z.entries.iter().map(|v| (1.0, v.norm())), p))
}

/// `‖z‖_{w,p} = (Σ_t w_t ‖z_t‖^p)^{1/p}`, or `sup_t w_t ‖z_t‖` for `p = ∞`.
pub fn weighted_lp_norm(z: &FiniteSeq, w: &WeightingSeq, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(pow_sum_norm(z.iter().map(|(t, v)| (w.at(t), v.norm())), p))
}

/// Decay rule for tabulated weights beyond the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    /// `w_t = min(1, scale · ratio^{|t|})`.
    Geometric { scale: f64, ratio: f64 },
    /// `w_t = min(1, scale · (1 - t)^{-a})`.
    Polynomial { scale: f64, a: f64 },
}

impl TailRule {
    fn at(&self, t: i64) -> f64 {
        let n = (-t) as f64;
        match *self {
            TailRule::Geometric { scale, ratio } => (scale * ratio.powf(n)).min(1.0),
            TailRule::Polynomial { scale, a } => (scale * (1.0 + n).powf(-a)).min(1.0),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TailRule::Geometric { scale, ratio } => {
                if !(scale > 0.0 && scale.is_finite()) || !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::Invalid(format!(
                        "geometric tail needs scale > 0 and ratio in (0,1), got ({scale}, {ratio})"
                    )));
                }
            }
            TailRule::Polynomial { scale, a } => {
                if !(scale > 0.0 && scale.is_finite()) || !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Invalid(format!(
                        "polynomial tail needs scale > 0 and a > 0, got ({scale}, {a})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A weighting sequence: monotone, `(0, 1]`-valued, vanishing at `-∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "WeightingRepr")]
pub enum WeightingSeq {
    /// `w_t = r^{|t|}` with `r ∈ (0, 1)`.
    Exponential { r: f64 },
    /// `w_t = (1 - t)^{-a}` with `a > 0`.
    Polynomial { a: f64 },
    /// Explicit values on `[start, 0]` followed by a decaying tail rule.
    /// Constant extension is not offered: the tail must decay.
    Tabulated { start: i64, values: Vec<f64>, tail: TailRule },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WeightingRepr {
    Exponential { r: f64 },
    Polynomial { a: f64 },
    Tabulated { start: i64, values: Vec<f64>, tail: TailRule },
}

impl TryFrom<WeightingRepr> for WeightingSeq {
    type Error = Error;

    fn try_from(r: WeightingRepr) -> Result<Self> {
        match r {
            WeightingRepr::Exponential { r } => WeightingSeq::exponential(r),
            WeightingRepr::Polynomial { a } => WeightingSeq::polynomial(a),
            WeightingRepr::Tabulated { start, values, tail } => WeightingSeq::tabulated(start, values, tail),
        }
    }
}

impl WeightingSeq {
    pub fn exponential(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Invalid(format!("exponential weighting needs r in (0,1), got {r}")));
        }
        Ok(WeightingSeq::Exponential { r })
    }

    pub fn polynomial(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Invalid(format!("polynomial weighting needs a > 0, got {a}")));
        }
        Ok(WeightingSeq::Polynomial { a })
    }

    /// `values` are ordered `t = start..=0`.
    pub fn tabulated(start: i64, values: Vec<f64>, tail: TailRule) -> Result<Self> {
        if start > 0 || values.len() != (1 - start) as usize {
            return Err(Error::Invalid(format!(
                "tabulated weights on [{start}, 0] need {} values, got {}",
                1 - start.min(0),
                values.len()
            )));
        }
        if values.iter().any(|&w| !(w > 0.0 && w <= 1.0)) {
            return Err(Error::Invalid("weights must lie in (0, 1]".into()));
        }
        if values.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::Invalid("weights must be non-decreasing toward t = 0".into()));
        }
        tail.validate()?;
        if tail.at(start - 1) > values[0] {
            return Err(Error::Invalid("tail rule exceeds the oldest tabulated weight".into()));
        }
        Ok(WeightingSeq::Tabulated { start, values, tail })
    }

    /// `w_t` for `t ≤ 0`.
    pub fn at(&self, t: i64) -> f64 {
        let t = t.min(0);
        match self {
            WeightingSeq::Exponential { r } => r.powf((-t) as f64),
            WeightingSeq::Polynomial { a } => (1.0 - t as f64).powf(-a),
            WeightingSeq::Tabulated { start, values, tail } => {
                if t >= *start {
                    values[(t - start) as usize]
                } else {
                    tail.at(t)
                }
            }
        }
    }

    /// Upper bound on `w_{-k} / w_{-k-1}` valid for every `k ≥ n`.
    pub(crate) fn step_ratio_bound(&self, n: u64) -> f64 {
        let poly = |a: f64, n: u64| ((n as f64 + 2.0) / (n as f64 + 1.0)).powf(a);
        match self {
            WeightingSeq::Exponential { r } => 1.0 / r,
            WeightingSeq::Polynomial { a } => poly(*a, n),
            WeightingSeq::Tabulated { start, tail, .. } => {
                let table_end = (-start) as u64;
                let tail_bound = match *tail {
                    TailRule::Geometric { ratio, .. } => 1.0 / ratio,
                    TailRule::Polynomial { a, .. } => poly(a, n.max(table_end)),
                };
                let explicit = (n..=table_end)
                    .map(|k| self.at(-(k as i64)) / self.at(-(k as i64) - 1))
                    .fold(1.0, f64::max);
                explicit.max(tail_bound)
            }
        }
    }

    /// `lim_{k→∞} w_{-k} / w_{-k-1}`.
    pub(crate) fn step_ratio_limit(&self) -> f64 {
        match self {
            WeightingSeq::Exponential { r } => 1.0 / r,
            WeightingSeq::Polynomial { .. } => 1.0,
            WeightingSeq::Tabulated { tail, .. } => match tail {
                TailRule::Geometric { ratio, .. } => 1.0 / ratio,
                TailRule::Polynomial { .. } => 1.0,
            },
        }
    }

    /// Whether the weights eventually decay geometrically (as opposed to
    /// polynomially).
    pub fn decays_geometrically(&self) -> bool {
        self.step_ratio_limit() > 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn sample() -> FiniteSeq {
        FiniteSeq::from_rows(2, &[vec![5.0, 12.0], vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap()
    }

    #[test]
    fn lp_norm_examples() {
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(lp_norm(&FiniteSeq::zeros(3), p).unwrap(), 0.0);
        }
        assert_eq!(lp_norm(&include(dvector![1.0, 0.0], 0), 2.0).unwrap(), 1.0);
        assert_eq!(lp_norm(&sample(), 1.0).unwrap(), 18.0);
        assert_eq!(lp_norm(&sample(), f64::INFINITY).unwrap(), 13.0);
        assert!(matches!(lp_norm(&sample(), 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn inclusion_norm_is_entry_norm() {
        let v = dvector![3.0, -4.0];
        for t in [0, -1, -7] {
            for p in [1.0, 2.0, f64::INFINITY] {
                assert!((lp_norm(&include(v.clone(), t), p).unwrap() - 5.0).abs() < 1e-15);
            }
        }
        assert!(include(dvector![0.0, 0.0], -5).is_zero());
    }

    #[test]
    fn weighted_examples() {
        let w = WeightingSeq::exponential(0.5).unwrap();
        let z = include(dvector![1.0], -2);
        assert_eq!(weighted_lp_norm(&z, &w, f64::INFINITY).unwrap(), 0.25);
        let ones = FiniteSeq::from_scalars(&[1.0; 4]).unwrap();
        assert_eq!(weighted_lp_norm(&ones, &w, 1.0).unwrap(), 1.875);
        assert_eq!(weighted_lp_norm(&FiniteSeq::zeros(1), &w, 2.0).unwrap(), 0.0);
        assert!(weighted_lp_norm(&ones, &w, 0.0).is_err());
    }

    #[test]
    fn shift_examples() {
        let z = sample();
        assert_eq!(shift(&z, 0), z);
        let v = dvector![1.0, 2.0];
        assert_eq!(shift(&include(v.clone(), -3), 1), include(v.clone(), -2));
        assert!(shift(&include(v.clone(), 0), 1).is_zero());
        assert!(shift(&z, 10).is_zero());
        // result_t = z_{t-1}
        let s = shift(&z, 1);
        assert_eq!(s.at(0), z.at(-1));
        assert_eq!(s.at(-1), z.at(-2));
    }

    #[test]
    fn truncate_examples() {
        let z = FiniteSeq::from_scalars(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(truncate(&z, -5), z);
        assert_eq!(truncate(&z, -9), z);
        assert_eq!(truncate(&z, 0), include(dvector![6.0], 0));
        let t = truncate(&z, -2);
        for s in -5..=-3 {
            assert_eq!(t.at(s)[0], 0.0);
        }
        for s in -2..=0 {
            assert_eq!(t.at(s), z.at(s));
        }
        assert!(truncate(&include(dvector![1.0], -4), -2).is_zero());
    }

    #[test]
    fn equality_ignores_leading_zeros() {
        let a = FiniteSeq::from_scalars(&[0.0, 0.0, 1.0, 2.0]).unwrap();
        let b = FiniteSeq::from_scalars(&[1.0, 2.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.normalized().support_start(), -1);
        assert_ne!(a, FiniteSeq::from_scalars(&[1.0, 3.0]).unwrap());
    }

    #[test]
    fn construction_errors() {
        assert!(FiniteSeq::new(2, 1, vec![]).is_err());
        assert!(FiniteSeq::new(2, -1, vec![DVector::zeros(2)]).is_err());
        assert!(matches!(
            FiniteSeq::new(2, 0, vec![DVector::zeros(3)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(FiniteSeq::new(1, 0, vec![dvector![f64::NAN]]).is_err());
    }

    #[test]
    fn json_roundtrip_and_layout() {
        let z = sample();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"dim":2,"start":-2,"entries":[[5.0,12.0],[0.0,0.0],[3.0,4.0]]}"#);
        let back: FiniteSeq = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<FiniteSeq>(r#"{"dim":2,"start":-1,"entries":[[1,2]]}"#).is_err());
    }

    #[test]
    fn csv_ingestion() {
        let z = FiniteSeq::from_csv_reader("5,12\n0,0\n3,4\n".as_bytes()).unwrap();
        assert_eq!(z, sample());
        assert!(FiniteSeq::from_csv_reader("1,x\n".as_bytes()).is_err());
    }

    #[test]
    fn weighting_families() {
        let p = WeightingSeq::polynomial(2.0).unwrap();
        assert_eq!(p.at(0), 1.0);
        assert_eq!(p.at(-1), 0.25);
        assert!(WeightingSeq::exponential(1.0).is_err());
        assert!(WeightingSeq::polynomial(0.0).is_err());
        let tail = TailRule::Geometric { scale: 1.0, ratio: 0.5 };
        let w = WeightingSeq::tabulated(-2, vec![0.25, 0.5, 1.0], tail).unwrap();
        assert_eq!(w.at(-2), 0.25);
        assert_eq!(w.at(-3), 0.125);
        // not monotone
        assert!(WeightingSeq::tabulated(-1, vec![1.0, 0.5], tail).is_err());
        // tail jumps above the table
        assert!(WeightingSeq::tabulated(-1, vec![0.01, 1.0], tail).is_err());
        // constant extension is not a decaying tail
        assert!(WeightingSeq::tabulated(0, vec![1.0], TailRule::Geometric { scale: 1.0, ratio: 1.0 }).is_err());
    }

    #[test]
    fn weighting_json() {
        let w: WeightingSeq = serde_json::from_str(r#"{"kind":"exponential","r":0.5}"#).unwrap();
        assert_eq!(w, WeightingSeq::Exponential { r: 0.5 });
        assert!(serde_json::from_str::<WeightingSeq>(r#"{"kind":"exponential","r":2.0}"#).is_err());
        let t = WeightingSeq::tabulated(-1, vec![0.5, 1.0], TailRule::Polynomial { scale: 1.0, a: 1.0 }).unwrap();
        let back: WeightingSeq = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn step_ratio_bounds_hold() {
        let ws = [
            WeightingSeq::exponential(0.7).unwrap(),
            WeightingSeq::polynomial(1.5).unwrap(),
            WeightingSeq::tabulated(-2, vec![0.3, 0.6, 1.0], TailRule::Geometric { scale: 2.0, ratio: 0.5 }).unwrap(),
            WeightingSeq::tabulated(-1, vec![0.9, 1.0], TailRule::Polynomial { scale: 3.0, a: 2.0 }).unwrap(),
        ];
        for w in &ws {
            for n in 0..40u64 {
                let bound = w.step_ratio_bound(n);
                for k in n..n + 60 {
                    let r = w.at(-(k as i64)) / w.at(-(k as i64) - 1);
                    assert!(r <= bound * (1.0 + 1e-12), "{w:?} n={n} k={k}: {r} > {bound}");
                }
            }
        }
    }
}
