//! Ridge regression with the λ-kernel, and its finite-memory equivalent after truncation.

use fadekit::rkhs::{finite_memory_fit, ridge_fit, truncation_equivalence, SeqKernel};
use fadekit::{sample, FiniteSeq};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fadekit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (dim, lambda, gamma) = (2, 0.7, 0.05);
    let samples: Vec<FiniteSeq> = (0..40)
        .map(|_| {
            let len = rng.random_range(1..12);
            sample::sequence(&mut rng, dim, len)
        })
        .collect();
    // target: a fading sum of the first coordinate plus noise
    let targets = DVector::from_iterator(
        samples.len(),
        samples.iter().map(|z| z.iter().map(|(t, v)| 0.6f64.powi(-t as i32) * v[0]).sum::<f64>()),
    ) + sample::gaussian_vector(&mut rng, samples.len()) * 0.05;

    let k = SeqKernel::lambda(lambda, dim)?;
    let fit = ridge_fit(&k, &samples, &targets, gamma)?;
    println!("full fit: mse {:.4}, ‖f‖ {:.4}, objective {:.4}", fit.train_mse(), fit.rkhs_norm(), fit.objective());

    let fm = finite_memory_fit(&k, &samples, &targets, gamma, -3)?;
    for (t, w) in (-3..=0).zip(&fm.weights) {
        println!("  weight at t = {t:>2}: [{:+.4}, {:+.4}]", w[0], w[1]);
    }

    let probes: Vec<FiniteSeq> = (0..50).map(|_| sample::sequence(&mut rng, dim, 15)).collect();
    let eq = truncation_equivalence(&k, &samples, &targets, gamma, -3, &probes)?;
    println!(
        "truncated kernel fit vs weight fit: prediction {:.1e}, objective {:.1e}, norm {:.1e}",
        eq.prediction_residual, eq.objective_residual, eq.norm_residual
    );
    Ok(())
}
