//! Closed-form equilibria at zero pressure gradient.
//!
//! With `𝒢 = 0` every equilibrium is linear, `θ*(z) = az + b`, and the
//! anchoring conditions reduce to transcendental equations for `a` and `b`:
//!
//! | family | slope           | intercept                     |
//! |--------|-----------------|-------------------------------|
//! | I      | `𝓑a = −sin 2a`  | `b = 0`                       |
//! | II     | `𝓑a = sin 2a`   | `b = π/2`                     |
//! | III    | `a = (n+¼)π`    | `cos 2b = −𝓑(n+¼)π`           |
//! | IV     | `a = (n+¾)π`    | `cos 2b = 𝓑(n+¾)π`            |

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::GridProfile;
use crate::numerics::bisect;

/// Default slope cutoff, covering `|ω| ≤ 4`.
pub const DEFAULT_A_MAX: f64 = 4.0 * PI;

const ROOT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "I")]
    TypeI,
    #[serde(rename = "II")]
    TypeII,
    #[serde(rename = "III")]
    TypeIII,
    #[serde(rename = "IV")]
    TypeIV,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::TypeI,
        Family::TypeII,
        Family::TypeIII,
        Family::TypeIV,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::TypeI => "I",
            Family::TypeII => "II",
            Family::TypeIII => "III",
            Family::TypeIV => "IV",
        }
    }

    /// Intercept of the family's profiles (Types I and II only).
    pub fn intercept(self) -> Option<f64> {
        match self {
            Family::TypeI => Some(0.0),
            Family::TypeII => Some(FRAC_PI_2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "1" => Ok(Family::TypeI),
            "II" | "2" => Ok(Family::TypeII),
            "III" | "3" => Ok(Family::TypeIII),
            "IV" | "4" => Ok(Family::TypeIV),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

/// A zero-gradient equilibrium `θ*(z) = az + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticEquilibrium {
    pub family: Family,
    /// Signed branch label; `a_{−n} = −a_n`.
    pub index: i32,
    pub slope: f64,
    pub intercept: f64,
}

impl AnalyticEquilibrium {
    /// The constant solution θ ≡ 0.
    pub fn trivial() -> Self {
        Self {
            family: Family::TypeI,
            index: 0,
            slope: 0.0,
            intercept: 0.0,
        }
    }

    pub fn omega(&self) -> f64 {
        self.slope / PI
    }

    pub fn theta(&self, z: f64) -> f64 {
        self.slope * z + self.intercept
    }

    pub fn profile(&self, n: usize) -> GridProfile {
        GridProfile::from_fn(n, |z| self.theta(z))
    }

    /// Residual of the defining boundary relation at `z = 1`,
    /// `𝓑a + sin(2(a + b))`.
    pub fn boundary_residual(&self, inverse_anchoring: f64) -> f64 {
        inverse_anchoring * self.slope + (2.0 * (self.slope + self.intercept)).sin()
    }
}

/// A nonnegative slope root with its branch label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slope {
    pub index: i32,
    pub a: f64,
}

/// `sin(2a)/a`, continuous at zero.
fn sinc2(a: f64) -> f64 {
    if a.abs() < 1e-8 {
        2.0 - 4.0 * a * a / 3.0
    } else {
        (2.0 * a).sin() / a
    }
}

/// Positive stationary points of `sin(2a)/a` below `a_max`; their doubles
/// are the roots of `tan x = x`.
pub fn stationary_points(a_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1.. {
        let lo = k as f64 * PI;
        if lo / 2.0 > a_max {
            break;
        }
        // x cos x − sin x changes sign on (kπ, kπ + π/2) and has no poles
        let x = bisect(|x| x * x.cos() - x.sin(), lo, lo + FRAC_PI_2, ROOT_TOL)
            .expect("tan x = x has a root in every (kπ, kπ + π/2)");
        if x / 2.0 <= a_max {
            out.push(x / 2.0);
        }
    }
    out
}

fn slope_roots(inverse_anchoring: f64, a_max: f64, sign: f64) -> Result<Vec<Slope>> {
    if !(inverse_anchoring > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inverse anchoring must be positive, got {inverse_anchoring}"
        )));
    }
    let b = inverse_anchoring;
    // sign·sin(2a)/a = 𝓑 on pieces where sin(2a)/a is monotone
    let psi = |a: f64| b - sign * sinc2(a);
    let mut breaks = vec![0.0];
    breaks.extend(stationary_points(a_max));
    if *breaks.last().unwrap() < a_max {
        breaks.push(a_max);
    }
    let mut roots = vec![Slope { index: 0, a: 0.0 }];
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (f_lo, f_hi) = (psi(lo), psi(hi));
        if f_lo * f_hi > 0.0 {
            continue;
        }
        let Some(a) = bisect(psi, lo, hi, ROOT_TOL) else {
            continue;
        };
        if a <= 0.0 {
            // coincides with the constant solution
            continue;
        }
        let index = roots.len() as i32;
        roots.push(Slope { index, a });
    }
    Ok(roots)
}

/// Nonnegative roots of `𝓑a = −sin 2a` on `[0, a_max]`, `a₀ = 0 < a₁ < …`.
pub fn solve_type1_slopes(inverse_anchoring: f64, a_max: f64) -> Result<Vec<Slope>> {
    slope_roots(inverse_anchoring, a_max, -1.0)
}

/// Nonnegative roots of `𝓑a = sin 2a` on `[0, a_max]`, `ã₀ = 0 < ã₁ < …`.
pub fn solve_type2_slopes(inverse_anchoring: f64, a_max: f64) -> Result<Vec<Slope>> {
    slope_roots(inverse_anchoring, a_max, 1.0)
}

/// Intercepts `b ∈ [0, π)` for the Type III/IV equilibrium with label `n`.
/// Empty when the family member does not exist at this `𝓑`.
pub fn solve_type34_intercepts(inverse_anchoring: f64, n: i32, family: Family) -> Result<Vec<f64>> {
    if !(inverse_anchoring >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "inverse anchoring must be nonnegative, got {inverse_anchoring}"
        )));
    }
    let rhs = match family {
        Family::TypeIII => -inverse_anchoring * type34_slope(n, family),
        Family::TypeIV => inverse_anchoring * type34_slope(n, family),
        _ => {
            return Err(Error::InvalidParameter(
                "intercept equations exist only for Types III and IV".into(),
            ))
        }
    };
    // 4/π·(π/4) rounds to 1 + ε; treat that as the tangency
    if rhs.abs() > 1.0 + 1e-12 {
        return Ok(Vec::new());
    }
    let half = rhs.clamp(-1.0, 1.0).acos() / 2.0;
    let mut bs = vec![half, PI - half];
    if (bs[1] - bs[0]).abs() < 1e-12 || bs[1] >= PI {
        bs.truncate(1);
    }
    Ok(bs)
}

pub fn type34_slope(n: i32, family: Family) -> f64 {
    match family {
        Family::TypeIII => (n as f64 + 0.25) * PI,
        Family::TypeIV => (n as f64 + 0.75) * PI,
        _ => f64::NAN,
    }
}

/// Branch that coalesces with branch `i` at its critical inverse anchoring.
pub fn fold_partner(index: i32) -> i32 {
    index - index.signum()
}

/// Critical inverse anchoring `𝓑*ᵢ` at zero gradient: Type I for even `i`
/// (pair `a_i`, `a_{i∓1}`), Type II for odd `i` (pair `ã_i`, `ã_{i∓1}`).
pub fn critical_inverse_anchoring(family: Family, index: i32) -> Result<f64> {
    if index == 0 {
        return Err(Error::InvalidParameter(
            "critical index must be nonzero".into(),
        ));
    }
    let i = index.unsigned_abs() as usize;
    let expected = if i.is_multiple_of(2) {
        Family::TypeI
    } else {
        Family::TypeII
    };
    if family != expected {
        return Err(Error::InvalidParameter(format!(
            "critical index {index} belongs to family {expected}, not {family}"
        )));
    }
    if i == 1 {
        // ã₁ is created from the constant ã₀ where sin(2a)/a → 2
        return Ok(2.0);
    }
    let a_max = (i as f64 + 1.0) * PI / 2.0;
    let s = stationary_points(a_max)[i - 2];
    Ok(sinc2(s).abs())
}

/// Every zero-gradient equilibrium with `|a| ≤ a_max` in the requested
/// families, each slope listed with both signs.
pub fn enumerate_equilibria(
    inverse_anchoring: f64,
    a_max: f64,
    families: &[Family],
) -> Result<Vec<AnalyticEquilibrium>> {
    let mut out = Vec::new();
    for &family in families {
        match family {
            Family::TypeI | Family::TypeII => {
                let roots = if family == Family::TypeI {
                    solve_type1_slopes(inverse_anchoring, a_max)?
                } else {
                    solve_type2_slopes(inverse_anchoring, a_max)?
                };
                let b = family.intercept().unwrap();
                for r in roots.iter().rev().filter(|r| r.index > 0) {
                    out.push(AnalyticEquilibrium {
                        family,
                        index: -r.index,
                        slope: -r.a,
                        intercept: b,
                    });
                }
                for r in &roots {
                    out.push(AnalyticEquilibrium {
                        family,
                        index: r.index,
                        slope: r.a,
                        intercept: b,
                    });
                }
            }
            Family::TypeIII | Family::TypeIV => {
                let n_max = (a_max / PI).ceil() as i32 + 1;
                for n in -n_max..=n_max {
                    let a = type34_slope(n, family);
                    if a.abs() > a_max {
                        continue;
                    }
                    for b in solve_type34_intercepts(inverse_anchoring, n, family)? {
                        out.push(AnalyticEquilibrium {
                            family,
                            index: n,
                            slope: a,
                            intercept: b,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Looks up the Type I/II equilibrium with signed label `index` at `𝓑`.
pub fn equilibrium(
    family: Family,
    index: i32,
    inverse_anchoring: f64,
) -> Result<AnalyticEquilibrium> {
    let b = family.intercept().ok_or_else(|| {
        Error::InvalidParameter(
            "Types III/IV are labelled by (n, b); use enumerate_equilibria".into(),
        )
    })?;
    let need = index.unsigned_abs() as usize;
    let a_max = (need as f64 + 2.0) * FRAC_PI_2;
    let roots = if family == Family::TypeI {
        solve_type1_slopes(inverse_anchoring, a_max)?
    } else {
        solve_type2_slopes(inverse_anchoring, a_max)?
    };
    let root = roots.get(need).ok_or_else(|| {
        Error::Undefined(format!(
            "equilibrium {family}:{index} does not exist at inverse anchoring {inverse_anchoring}"
        ))
    })?;
    Ok(AnalyticEquilibrium {
        family,
        index,
        slope: if index < 0 { -root.a } else { root.a },
        intercept: b,
    })
}

/// `ω = (θ(1) − θ(−1)) / 2π`.
pub fn winding_number(profile: &GridProfile) -> f64 {
    profile.winding_number()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: dense scan of `x ↦ 𝓑x ∓ sin 2x` for sign changes.
    fn scan_oracle(b: f64, a_max: f64, sign: f64) -> Vec<f64> {
        let n = 2_000_000;
        let f = |a: f64| b * a - sign * (2.0 * a).sin();
        let mut roots = vec![0.0];
        let mut prev = (1e-9, f(1e-9));
        for i in 1..=n {
            let a = a_max * i as f64 / n as f64;
            let fa = f(a);
            if prev.1.signum() != fa.signum() {
                roots.push(bisect(f, prev.0, a, 1e-15).unwrap());
            }
            prev = (a, fa);
        }
        roots
    }

    #[test]
    fn type1_no_nonzero_root_at_unit_b() {
        let r = solve_type1_slopes(1.0, DEFAULT_A_MAX).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].a, 0.0);
    }

    #[test]
    fn type1_two_roots_straddle_stationary_point() {
        let r = solve_type1_slopes(0.3, PI).unwrap();
        assert_eq!(r.len(), 3);
        assert!(PI / 2.0 < r[1].a && r[1].a < 2.2467);
        assert!(2.2467 < r[2].a && r[2].a < PI);
        let oracle = scan_oracle(0.3, PI, -1.0);
        assert_eq!(oracle.len(), 3);
        for (x, y) in r.iter().zip(&oracle) {
            assert!((x.a - y).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_near_fold_both_found() {
        // both roots lie in the same π/4 cell just below 𝓑*₂
        let b = critical_inverse_anchoring(Family::TypeI, 2).unwrap() - 1e-4;
        let r = solve_type1_slopes(b, PI).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r[2].a - r[1].a < PI / 4.0);
    }

    #[test]
    fn type2_examples() {
        assert_eq!(solve_type2_slopes(2.5, DEFAULT_A_MAX).unwrap().len(), 1);
        let r = solve_type2_slopes(1.0, DEFAULT_A_MAX).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[1].a - 0.94775).abs() < 1e-5);
        // sin x = x/2 with x = 2ã
        let x = 2.0 * r[1].a;
        assert!((x.sin() - x / 2.0).abs() < 1e-12);
        let eq = equilibrium(Family::TypeII, 1, 1.0).unwrap();
        assert!((eq.omega() - 0.30168).abs() < 1e-5);
    }

    #[test]
    fn small_b_limits() {
        let expected = [PI / 2.0, PI, 1.5 * PI, 2.0 * PI];
        for roots in [
            solve_type1_slopes(1e-7, 2.0 * PI + 1e-3).unwrap(),
            solve_type2_slopes(1e-7, 2.0 * PI + 1e-3).unwrap(),
        ] {
            let nonzero: Vec<f64> = roots.iter().skip(1).map(|r| r.a).collect();
            assert_eq!(nonzero.len(), 4, "{nonzero:?}");
            for (a, e) in nonzero.iter().zip(expected) {
                assert!((a - e).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn residuals_far_below_tolerance() {
        for &b in &[0.01, 0.1, 0.3, 0.4345, 1.0, 1.9] {
            for (sign, roots) in [
                (-1.0, solve_type1_slopes(b, DEFAULT_A_MAX).unwrap()),
                (1.0, solve_type2_slopes(b, DEFAULT_A_MAX).unwrap()),
            ] {
                for r in roots {
                    let res = b * r.a - sign * (2.0 * r.a).sin();
                    assert!(res.abs() < 1e-12, "b={b} a={} res={res}", r.a);
                }
            }
        }
    }

    #[test]
    fn intercept_examples() {
        let b = solve_type34_intercepts(4.0 / PI, 0, Family::TypeIII).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0] - PI / 2.0).abs() < 1e-6);
        assert!(solve_type34_intercepts(2.0, 0, Family::TypeIII)
            .unwrap()
            .is_empty());
        let b = solve_type34_intercepts(0.0, 0, Family::TypeIV).unwrap();
        assert_eq!(b.len(), 2);
        assert!((b[0] - PI / 4.0).abs() < 1e-15 && (b[1] - 0.75 * PI).abs() < 1e-15);
        assert!(solve_type34_intercepts(1.0, 0, Family::TypeI).is_err());
    }

    #[test]
    fn type4_thresholds() {
        // n = 0 member needs 𝓑·3π/4 ≤ 1; the n = −1 member reaches 4/π
        let t0 = 4.0 / (3.0 * PI);
        assert!(!solve_type34_intercepts(t0 - 1e-6, 0, Family::TypeIV)
            .unwrap()
            .is_empty());
        assert!(solve_type34_intercepts(t0 + 1e-6, 0, Family::TypeIV)
            .unwrap()
            .is_empty());
        let t1 = 4.0 / PI;
        assert!(!solve_type34_intercepts(t1 - 1e-3, -1, Family::TypeIV)
            .unwrap()
            .is_empty());
        assert!(solve_type34_intercepts(t1 + 1e-3, -1, Family::TypeIV)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_inverse_anchoring(Family::TypeII, 1).unwrap(), 2.0);
        assert_eq!(critical_inverse_anchoring(Family::TypeII, -1).unwrap(), 2.0);
        // independent route: tan x = x roots tabulated to 5 places
        let b2 = critical_inverse_anchoring(Family::TypeI, 2).unwrap();
        let x1: f64 = 4.493409457909064;
        assert!((b2 - (-2.0 * x1.sin() / x1)).abs() < 1e-12);
        assert!((b2 - 0.4345).abs() < 1e-4);
        let b4 = critical_inverse_anchoring(Family::TypeI, -4).unwrap();
        let x3: f64 = 10.904121659428899;
        assert!((b4 - (-2.0 * x3.sin() / x3)).abs() < 1e-12);
        assert!((b4 - 0.1827).abs() < 1e-4);
        assert!(critical_inverse_anchoring(Family::TypeI, 0).is_err());
        assert!(critical_inverse_anchoring(Family::TypeI, 3).is_err());
    }

    #[test]
    fn bracketing_around_critical_values() {
        for i in [2, 4, 6] {
            let b = critical_inverse_anchoring(Family::TypeI, i).unwrap();
            let below = solve_type1_slopes(b - 1e-6, DEFAULT_A_MAX).unwrap().len();
            let above = solve_type1_slopes(b + 1e-6, DEFAULT_A_MAX).unwrap().len();
            assert_eq!(below, above + 2, "i = {i}");
        }
        for i in [3, 5] {
            let b = critical_inverse_anchoring(Family::TypeII, i).unwrap();
            let below = solve_type2_slopes(b - 1e-6, DEFAULT_A_MAX).unwrap().len();
            let above = solve_type2_slopes(b + 1e-6, DEFAULT_A_MAX).unwrap().len();
            assert_eq!(below, above + 2, "i = {i}");
        }
        let below = solve_type2_slopes(2.0 - 1e-6, DEFAULT_A_MAX).unwrap().len();
        let above = solve_type2_slopes(2.0 + 1e-6, DEFAULT_A_MAX).unwrap().len();
        assert_eq!(below, above + 1);
    }

    #[test]
    fn partners() {
        assert_eq!(fold_partner(2), 1);
        assert_eq!(fold_partner(-2), -1);
        assert_eq!(fold_partner(1), 0);
        assert_eq!(fold_partner(-3), -2);
    }

    #[test]
    fn enumeration_is_symmetric() {
        let all =
            enumerate_equilibria(0.1, DEFAULT_A_MAX, &[Family::TypeI, Family::TypeII]).unwrap();
        for e in &all {
            assert!(all.iter().any(|o| o.family == e.family
                && o.index == -e.index
                && (o.slope + e.slope).abs() < 1e-15));
        }
        let eq = equilibrium(Family::TypeI, -2, 0.1).unwrap();
        assert!(eq.slope < 0.0);
        assert!(eq.boundary_residual(0.1).abs() < 1e-12);
    }
}
