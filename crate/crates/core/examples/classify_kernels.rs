//! Fading-memory verdicts for explicit and analytic kernels.

use fadekit::convrep::{
    classify, construct_weighting, continuity_bound, AnalyticKernel, ConstructedWeighting, KernelSeq, Tail,
};
use fadekit::WeightingSeq;

fn main() -> fadekit::Result<()> {
    let geometric = KernelSeq::from_scalars(&[0.125, 0.25, 0.5, 1.0], Tail::Geometric { m: 1.0, rho: 0.5 })?;
    let finite = KernelSeq::from_scalars(&[3.0, 0.0, -1.0], Tail::Zero)?;

    for (name, k) in [("geometric", &geometric), ("finite", &finite)] {
        for p in [1.0, 2.0, f64::INFINITY] {
            let rep = classify(k, p)?;
            println!("{name:>9} p={p:<3} {:?}", rep.verdicts);
        }
    }

    for family in [AnalyticKernel::PowerLaw { omega: 0.5 }, AnalyticKernel::ConstantNorm { c: 1.0 }] {
        for p in [1.0, 2.0] {
            println!("{family:?} p={p}: {:?}", family.classify(p)?.verdicts);
        }
    }

    match construct_weighting(&geometric)? {
        ConstructedWeighting::Weighting { w, c } => {
            let head: Vec<f64> = (-4..=0).rev().map(|t| w.at(t)).collect();
            println!("weighting w_0..w_-4 = {head:?}, constant {c}");
        }
        ConstructedWeighting::FiniteMemory => println!("finite memory, any weighting works"),
    }

    let w = WeightingSeq::exponential(0.8)?;
    println!("continuity bound against r = 0.8: {:?}", continuity_bound(&geometric, &w, f64::INFINITY)?);
    Ok(())
}
