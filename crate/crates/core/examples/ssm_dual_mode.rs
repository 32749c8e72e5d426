//! A stable state-space system evaluated recurrently and as a convolution.

use fadekit::seqspace::lp_norm;
use fadekit::ssm::{run_recurrent, spectral_radius, ssm_to_kernel, LinearSSM};
use fadekit::sample;
use nalgebra::dmatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fadekit::Result<()> {
    let a = dmatrix![0.6, 0.3, 0.0; -0.2, 0.5, 0.1; 0.0, 0.4, 0.3];
    let sys = LinearSSM::new(a.clone(), dmatrix![1.0, 0.0; 0.0, 1.0; 1.0, -1.0], dmatrix![1.0, 0.5, -0.5])?;

    let rep = spectral_radius(&a, 1e-6)?;
    println!("ρ(A) ∈ [{:.6}, {:.6}], stable: {:?}", rep.rho_estimate.lower, rep.rho_estimate.upper, rep.stable);
    if let Some(b) = rep.geometric_bound {
        println!("‖A^j‖ ≤ {:.4}·{:.4}^j", b.m, b.r);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z = sample::sequence(&mut rng, 2, 500);
    let direct = run_recurrent(&sys, &z)?;
    for eps in [1e-4, 1e-8, 1e-12] {
        let k = ssm_to_kernel(&sys, eps)?;
        let conv = k.eval_windowed(&z)?.value;
        let gap = (&direct - conv).amax();
        println!("eps {eps:e}: window {:>4}, gap {gap:.3e} ≤ {:.3e}", -k.window_start() + 1, eps * lp_norm(&z, f64::INFINITY)?);
    }
    Ok(())
}
