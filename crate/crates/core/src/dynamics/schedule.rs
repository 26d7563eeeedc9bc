//! Time-dependent pressure gradient and wall conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ramps count as switched fully on once within this of their target.
const SETTLED: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Pressure {
    Constant {
        g: f64,
    },
    /// `0` for `t ≤ t₁`, then `Ḡ tanh(δ(t − t₁))`.
    Ramp {
        g_bar: f64,
        delta: f64,
        t1: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Anchoring {
    Robin {
        b: f64,
    },
    /// Flux `C` for `t ≤ t₂`, then `C(1 − T) ∓ T sin 2θ/𝓑` with
    /// `T = tanh(κ(t − t₂))`.
    Ramp {
        c: f64,
        kappa: f64,
        t2: f64,
        b: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub pressure: Pressure,
    pub anchoring: Anchoring,
    /// Uses `sin 2θ(1, t)` in the lower-wall ramp flux as well, instead of
    /// the lower-wall angle.
    #[serde(default)]
    pub literal_lower_flux: bool,
}

impl Schedule {
    pub fn constant(g: f64, b: f64) -> Self {
        Self {
            pressure: Pressure::Constant { g },
            anchoring: Anchoring::Robin { b },
            literal_lower_flux: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self.pressure {
            Pressure::Constant { g } if !g.is_finite() => return bad(format!("non-finite G {g}")),
            Pressure::Ramp { g_bar, delta, t1 }
                if !(delta > 0.0) || !g_bar.is_finite() || !t1.is_finite() =>
            {
                return bad(format!(
                    "pressure ramp needs finite Ḡ, t1 and δ > 0, got ({g_bar}, {delta}, {t1})"
                ))
            }
            _ => {}
        }
        match self.anchoring {
            Anchoring::Robin { b } if !(b > 0.0 && b.is_finite()) => {
                bad(format!("B must be positive, got {b}"))
            }
            Anchoring::Ramp { c, kappa, t2, b }
                if !(kappa > 0.0)
                    || !(b > 0.0 && b.is_finite())
                    || !c.is_finite()
                    || !t2.is_finite() =>
            {
                bad(format!(
                    "anchoring ramp needs κ > 0, B > 0, got (κ, B) = ({kappa}, {b})"
                ))
            }
            _ => Ok(()),
        }
    }

    /// `𝒢(t)`.
    pub fn pressure_at(&self, t: f64) -> f64 {
        match self.pressure {
            Pressure::Constant { g } => g,
            Pressure::Ramp { g_bar, delta, t1 } => {
                if t <= t1 {
                    0.0
                } else {
                    g_bar * (delta * (t - t1)).tanh()
                }
            }
        }
    }

    /// Robin weight `T(t) ∈ [0, 1]`; constant anchoring is always 1.
    pub fn anchoring_weight(&self, t: f64) -> f64 {
        match self.anchoring {
            Anchoring::Robin { .. } => 1.0,
            Anchoring::Ramp { kappa, t2, .. } => {
                if t <= t2 {
                    0.0
                } else {
                    (kappa * (t - t2)).tanh()
                }
            }
        }
    }

    /// Prescribed flux in the ramp phase, `C`; zero for constant anchoring.
    pub fn initial_flux(&self) -> f64 {
        match self.anchoring {
            Anchoring::Robin { .. } => 0.0,
            Anchoring::Ramp { c, .. } => c,
        }
    }

    pub fn final_pressure(&self) -> f64 {
        match self.pressure {
            Pressure::Constant { g } => g,
            Pressure::Ramp { g_bar, .. } => g_bar,
        }
    }

    pub fn inverse_anchoring(&self) -> f64 {
        match self.anchoring {
            Anchoring::Robin { b } | Anchoring::Ramp { b, .. } => b,
        }
    }

    /// Whether both ramps have reached their targets by time `t`.
    pub fn settled(&self, t: f64) -> bool {
        let g_final = self.final_pressure();
        (self.pressure_at(t) - g_final).abs() <= SETTLED * g_final.abs().max(1.0)
            && (1.0 - self.anchoring_weight(t)) <= SETTLED
    }
}
