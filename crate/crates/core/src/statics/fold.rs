//! Saddle-node detection in `𝓑` at fixed `𝒢`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{equilibrium, fold_partner, Family};
use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};

use super::continuation::{
    continue_in_g, seed_point, try_step, BranchPoint, ContinuationOptions, Parameter,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldOptions {
    pub initial_step: f64,
    /// Width of the final existence bracket.
    pub tol: f64,
    /// Profiles closer than this (sup norm) count as one solution.
    pub distinct_tol: f64,
    pub continuation: ContinuationOptions,
}

impl Default for FoldOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.02,
            tol: 1e-5,
            distinct_tol: 1e-8,
            continuation: ContinuationOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldEstimate {
    pub b_star: f64,
    /// Largest `𝓑` where both branches were found and smallest where not.
    pub bracket: (f64, f64),
    /// Sup-norm distance of the pair at the lower bracket end.
    pub distance: f64,
    pub stable: BranchPoint,
    pub partner: BranchPoint,
}

/// Family and partner index for fold pair `i`.
pub fn fold_pair(index: i32) -> Result<(Family, i32, i32)> {
    if index == 0 {
        return Err(Error::InvalidParameter("fold index must be nonzero".into()));
    }
    let family = if index % 2 == 0 {
        Family::TypeI
    } else {
        Family::TypeII
    };
    Ok((family, index, fold_partner(index)))
}

/// Marches both branches upward in `𝓑` until they coalesce or vanish.
pub fn detect_fold(
    coeffs: &LeslieCoefficients,
    stable: &BranchPoint,
    partner: &BranchPoint,
    b_max: f64,
    opts: &FoldOptions,
) -> Result<FoldEstimate> {
    if stable.g != partner.g || stable.b != partner.b {
        return Err(Error::InvalidParameter(
            "fold pair must share (G, B)".into(),
        ));
    }
    let b_lo = stable.b;
    let mut s = stable.clone();
    let mut p = partner.clone();
    if s.profile.sup_distance(&p.profile) <= opts.distinct_tol {
        return Err(Error::InvalidParameter(format!(
            "fold pair coincides at the starting B = {b_lo}"
        )));
    }
    let (mut s_prev, mut p_prev): (Option<BranchPoint>, Option<BranchPoint>) = (None, None);
    let mut step = opts.initial_step;
    loop {
        if s.b >= b_max {
            return Err(Error::NoFold {
                lo: b_lo,
                hi: b_max,
            });
        }
        let next = (s.b + step).min(b_max);
        let cont = &opts.continuation;
        let ns = try_step(coeffs, Parameter::B, &s, s_prev.as_ref(), next, cont);
        let np = ns
            .as_ref()
            .and_then(|_| try_step(coeffs, Parameter::B, &p, p_prev.as_ref(), next, cont));
        match (ns, np) {
            (Some(a), Some(c)) if a.profile.sup_distance(&c.profile) > opts.distinct_tol => {
                s_prev = Some(std::mem::replace(&mut s, a));
                p_prev = Some(std::mem::replace(&mut p, c));
                step = (step * 1.5).min(opts.initial_step);
            }
            _ => {
                let hi = next;
                if hi - s.b <= opts.tol {
                    let distance = s.profile.sup_distance(&p.profile);
                    return Ok(FoldEstimate {
                        b_star: 0.5 * (s.b + hi),
                        bracket: (s.b, hi),
                        distance,
                        stable: s,
                        partner: p,
                    });
                }
                step = 0.5 * (hi - s.b);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSample {
    pub g: f64,
    /// `None` when the pair survives up to the search bound.
    pub b_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldCurve {
    pub index: i32,
    pub family: Family,
    pub samples: Vec<FoldSample>,
}

/// Seeds fold pair `i` at `(𝒢, 𝓑) = (0, b_start)` and continues both
/// members in `𝒢` to each grid value.
pub fn fold_pair_at(
    coeffs: &LeslieCoefficients,
    index: i32,
    b_start: f64,
    g_grid: &[f64],
    n: usize,
    opts: &ContinuationOptions,
) -> Result<Vec<(BranchPoint, BranchPoint)>> {
    let (family, i, j) = fold_pair(index)?;
    let seeds = [
        equilibrium(family, i, b_start)?,
        equilibrium(family, j, b_start)?,
    ];
    let mut branches = Vec::with_capacity(2);
    for seed in &seeds {
        let start = seed_point(coeffs, seed, b_start, n)?;
        branches.push(continue_in_g(
            coeffs, family, seed.index, &start, g_grid, opts,
        )?);
    }
    g_grid
        .iter()
        .map(|&g| {
            let pick = |k: usize| {
                branches[k].at(g).cloned().ok_or_else(|| {
                    Error::Undefined(format!(
                        "branch {family}:{} missing G = {g}",
                        seeds[k].index
                    ))
                })
            };
            Ok((pick(0)?, pick(1)?))
        })
        .collect()
}

/// `𝓑*ᵢ,𝒢` over an ascending `𝒢` grid; folds are located in parallel.
pub fn fold_curve(
    coeffs: &LeslieCoefficients,
    index: i32,
    g_grid: &[f64],
    b_start: f64,
    b_max: f64,
    n: usize,
    opts: &FoldOptions,
) -> Result<FoldCurve> {
    let (family, _, _) = fold_pair(index)?;
    let pairs = fold_pair_at(coeffs, index, b_start, g_grid, n, &opts.continuation)?;
    let samples = pairs
        .par_iter()
        .map(|(s, p)| match detect_fold(coeffs, s, p, b_max, opts) {
            Ok(f) => Ok(FoldSample {
                g: s.g,
                b_star: Some(f.b_star),
            }),
            Err(Error::NoFold { .. }) => Ok(FoldSample {
                g: s.g,
                b_star: None,
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FoldCurve {
        index,
        family,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::critical_inverse_anchoring;
    use crate::grid::DEFAULT_NODES;

    const C: LeslieCoefficients = LeslieCoefficients::FIVE_CB;

    #[test]
    fn pairing() {
        assert_eq!(fold_pair(2).unwrap(), (Family::TypeI, 2, 1));
        assert_eq!(fold_pair(-3).unwrap(), (Family::TypeII, -3, -2));
        assert!(fold_pair(0).is_err());
    }

    #[test]
    fn zero_gradient_type1_fold() {
        let pairs = fold_pair_at(&C, 2, 0.2, &[0.0], DEFAULT_NODES, &Default::default()).unwrap();
        let (s, p) = &pairs[0];
        let f = detect_fold(&C, s, p, 1.0, &Default::default()).unwrap();
        let exact = critical_inverse_anchoring(Family::TypeI, 2).unwrap();
        assert!((f.b_star - exact).abs() < 1e-3, "{} vs {exact}", f.b_star);
        assert!(f.bracket.1 - f.bracket.0 <= 1e-5);
        assert!(f.distance < 0.1);
    }
}
