//! Recovering the kernel of a black-box linear functional from its impulse responses.

use fadekit::convrep::extract_kernel;
use fadekit::FiniteSeq;
use nalgebra::{dvector, DVector};

fn main() -> fadekit::Result<()> {
    // y = Σ_t 2^t (z_t[0] - z_t[1]) over the last four steps
    let h = |z: &FiniteSeq| {
        let s: f64 = z.iter().filter(|(t, _)| *t >= -3).map(|(t, v)| 2f64.powi(t as i32) * (v[0] - v[1])).sum();
        DVector::from_element(1, s)
    };
    let ex = extract_kernel(&h, 2, -5)?;
    for (t, m) in (ex.kernel.window_start()..=0).zip(ex.kernel.matrices()) {
        println!("κ_{t:>2} = [{:+.4}, {:+.4}]", m[(0, 0)], m[(0, 1)]);
    }
    println!("linearity residual on random probes: {:e}", ex.linearity_residual);

    let z = FiniteSeq::new(2, -1, vec![dvector![1.0, 3.0], dvector![2.0, 0.5]])?;
    println!("H(z) = {}, κ·z = {}", h(&z)[0], ex.kernel.eval(&z)?[0]);
    Ok(())
}
