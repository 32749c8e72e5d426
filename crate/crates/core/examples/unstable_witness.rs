//! A bounded input history that a marginally stable system never forgets.

use fadekit::ssm::{spectral_radius, unstable_witness};
use nalgebra::dmatrix;

fn main() -> fadekit::Result<()> {
    let a = dmatrix![0.0, -1.0; 1.0, 0.0];
    let rep = spectral_radius(&a, 1e-6)?;
    println!("ρ(A) ∈ [{}, {}], stable: {:?}", rep.rho_estimate.lower, rep.rho_estimate.upper, rep.stable);

    let Some(w) = unstable_witness(&a)? else {
        println!("no eigenvalue on or outside the unit circle");
        return Ok(());
    };
    println!("eigenvalue {} with residual {:e}", w.lambda(), w.residual);
    println!("trajectory sup norm {:.4}; the last eight states:", w.sup_norm);
    for (t, x) in w.trajectory.iter().rev().take(8) {
        println!("  x_{t:<3} = ({:+.4}, {:+.4})", x[0], x[1]);
    }
    Ok(())
}
