//! Functionals and causal time-invariant filters, in both directions.

use std::sync::Arc;

use fadekit::convrep::{KernelSeq, Tail};
use fadekit::duality::{filter_to_functional, functional_to_filter, time_invariance_check, WindowedFilter};
use fadekit::{FiniteSeq, Functional};
use nalgebra::dmatrix;

fn main() -> fadekit::Result<()> {
    let k = KernelSeq::new(1, 1, -2, vec![dmatrix![0.25], dmatrix![0.5], dmatrix![1.0]], Tail::Zero)?;
    let u = functional_to_filter(Arc::new(k.clone()), 1, -6);
    let z = FiniteSeq::from_scalars(&[1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0])?;
    let ys: Vec<f64> = u.apply(&z)?.iter().map(|y| y[0]).collect();
    println!("moving sum output: {ys:?}");
    println!("time-invariant: {}", time_invariance_check(&u, 20, 0)?.is_none());

    let back = filter_to_functional(&u);
    println!("H(z) = {}, recovered H(z) = {}", k.apply(&z)?[0], back.apply(&z)?[0]);

    // scaling by the time index breaks shift invariance
    let ramp = WindowedFilter::new(-6, 1, |z: &FiniteSeq, t: i64| Ok(z.at(t) * (1 - t) as f64));
    if let Some(cx) = time_invariance_check(&ramp, 20, 0)? {
        println!("counterexample at t = {}, s = {}: {} ≠ {}", cx.t, cx.s, cx.lhs[0], cx.rhs[0]);
    }
    Ok(())
}
