//! Norms, shifts and truncations of finitely supported past sequences.

use fadekit::seqspace::{include, lp_norm, shift, truncate, weighted_lp_norm};
use fadekit::{FiniteSeq, WeightingSeq};
use nalgebra::dvector;

fn main() -> fadekit::Result<()> {
    // z_{-3}, …, z_0 in R^2
    let z = FiniteSeq::from_rows(2, &[vec![4.0, 0.0], vec![0.0, -2.0], vec![1.0, 1.0], vec![0.5, 0.0]])?;
    let w = WeightingSeq::exponential(0.5)?;

    for p in [1.0, 2.0, f64::INFINITY] {
        println!("p = {p:>3}: plain {:.4}  weighted {:.4}", lp_norm(&z, p)?, weighted_lp_norm(&z, &w, p)?);
    }

    let older = shift(&z, 2);
    println!("shift by 2 moves the support to start at {}", older.support_start());
    println!("weighted sup norm after the shift: {:.4}", weighted_lp_norm(&older, &w, f64::INFINITY)?);

    for cutoff in [0, -1, -2, -3] {
        let tail = z.lin_comb(1.0, &truncate(&z, cutoff), -1.0)?;
        println!("cutoff {cutoff:>2}: weighted ℓ² of the dropped past = {:.4}", weighted_lp_norm(&tail, &w, 2.0)?);
    }

    let spike = include(dvector![1.0, 0.0], -5);
    println!("δ^-5 has weighted ℓ¹ norm {}", weighted_lp_norm(&spike, &w, 1.0)?);
    Ok(())
}
