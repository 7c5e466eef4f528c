//! Physical context of a spectral sector: coupling, angular quantum number,
//! polynomial degree, and the exponents derived from them.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Immutable per-sector data. `gamma` is the power-law exponent at the
/// origin, `beta = gamma + 1/2` the parameter the operator algebra sees, and
/// `ell_minus`/`ell_plus` are l + 1/2 -/+ gamma with
/// ell_minus * ell_plus = (Z*alpha)^2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PhysicalContext {
    pub m: f64,
    pub zalpha: f64,
    pub l: i64,
    pub n: u32,
    #[serde(skip)]
    pub gamma: f64,
    #[serde(skip)]
    pub beta: f64,
    #[serde(skip)]
    pub ell_minus: f64,
    #[serde(skip)]
    pub ell_plus: f64,
}

/// Build a context, rejecting couplings strong enough to make the origin
/// exponent complex (oscillatory regime): requires (l + 1/2)^2 > (Z*alpha)^2.
pub fn derive_context(m: f64, zalpha: f64, l: i64, n: u32) -> Result<PhysicalContext> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidContext(format!("mass must be positive and finite, got {m}")));
    }
    if !(zalpha.is_finite() && zalpha > 0.0) {
        return Err(Error::InvalidContext(format!(
            "coupling Z*alpha must be positive and finite, got {zalpha}"
        )));
    }
    let half_shift = l as f64 + 0.5;
    if zalpha >= half_shift.abs() {
        return Err(Error::InvalidContext(format!(
            "Z*alpha = {zalpha} >= |l + 1/2| = {}: origin exponent would be complex",
            half_shift.abs()
        )));
    }
    let gamma = (half_shift * half_shift - zalpha * zalpha).sqrt();
    Ok(PhysicalContext {
        m,
        zalpha,
        l,
        n,
        gamma,
        beta: gamma + 0.5,
        ell_minus: half_shift - gamma,
        ell_plus: half_shift + gamma,
    })
}

impl PhysicalContext {
    /// Rebuild derived fields after deserialization of the bare quantum
    /// numbers.
    pub fn rederive(&self) -> Result<PhysicalContext> {
        derive_context(self.m, self.zalpha, self.l, self.n)
    }
}
