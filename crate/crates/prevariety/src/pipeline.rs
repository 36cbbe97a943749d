//! Wiring from a polynomial system to fans and from fans to a finished
//! result.

use crate::cones::{hypersurface_fan, Fan};
use crate::newton::NewtonPolytope;
use crate::systems::PolynomialSystem;
use crate::Result;

/// Stage one: a Newton polytope and a half-open hypersurface fan per
/// polynomial. Each polytope gets its own orientation stream so a retry of
/// one cannot disturb the others.
pub fn build_fans(system: &PolynomialSystem, seed: u64) -> Result<Vec<Fan>> {
    let mut fans = Vec::with_capacity(system.supports().len());
    for (i, support) in system.supports().iter().enumerate() {
        let polytope = NewtonPolytope::build(support, seed.wrapping_add(i as u64))?;
        fans.push(hypersurface_fan(&polytope, i)?);
    }
    Ok(fans)
}
