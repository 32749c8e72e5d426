//! Orthant splitting for a finite-memory kernel and the resulting ℓ¹ bound.

use fadekit::convrep::{cone_certificate, cone_constant};
use fadekit::sample;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fadekit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let k = sample::finite_kernel(&mut rng, 2, 3, 6);
    let z = sample::sparse_sequence(&mut rng, 2, 6);

    let cert = cone_certificate(&k, &z)?;
    println!("Σ‖κ_t z_t‖ = {:.4} ≤ {:.4} ({})", cert.lhs, cert.rhs, if cert.holds { "holds" } else { "fails" });
    for (orthant, times) in &cert.sets {
        println!("  orthant {orthant:03b}: t ∈ {times:?}");
    }

    // Three orthogonal unit vectors have ℓ¹ sum 3 but norm √3, so √2 is too small once m ≥ 3.
    let e: Vec<DVector<f64>> = (0..3).map(|i| DVector::from_fn(3, |j, _| if i == j { 1.0 } else { 0.0 })).collect();
    let sum: DVector<f64> = e.iter().sum();
    let ratio = e.iter().map(|v| v.norm()).sum::<f64>() / sum.norm();
    println!("e1+e2+e3 ratio {ratio:.4}, √2 = {:.4}, constant used for m = 3: {:.4}", 2f64.sqrt(), cone_constant(3));
    Ok(())
}
