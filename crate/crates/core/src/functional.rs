use nalgebra::DVector;

use crate::error::Result;
use crate::seqspace::FiniteSeq;

/// A black-box map from finitely supported sequences to `R^m`.
///
/// Implementors must be safe to call from several threads at once; the
/// randomized checks in this crate may probe them concurrently.
pub trait Functional: Send + Sync {
    fn apply(&self, z: &FiniteSeq) -> Result<DVector<f64>>;
}

impl<F> Functional for F
where
    F: Fn(&FiniteSeq) -> DVector<f64> + Send + Sync,
{
    fn apply(&self, z: &FiniteSeq) -> Result<DVector<f64>> {
        Ok(self(z))
    }
}
