//! Identifying a steady state among known equilibria.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::analytic::{equilibrium, Family};
use crate::coefficients::LeslieCoefficients;
use crate::error::{Error, Result};
use crate::grid::GridProfile;
use crate::statics::{continue_in_b, continue_in_g, seed_point, ContinuationOptions};

/// Winding-number window for candidate branches.
pub const OMEGA_WINDOW: f64 = 0.05;
/// Largest `L²` distance accepted as a match.
pub const DEFAULT_MATCH_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchId {
    pub family: Family,
    pub index: i32,
}

impl BranchId {
    pub fn new(family: Family, index: i32) -> Self {
        Self { family, index }
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.index)
    }
}

impl std::str::FromStr for BranchId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, idx) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("expected family:index, got {s:?}")))?;
        let index = idx
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad branch index {idx:?}")))?;
        Ok(Self {
            family: fam.parse()?,
            index,
        })
    }
}

/// Equilibria known at one `(𝒢, 𝓑)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Catalog {
    pub entries: Vec<(BranchId, GridProfile)>,
}

impl Catalog {
    pub fn get(&self, id: BranchId) -> Option<&GridProfile> {
        self.entries.iter().find(|(i, _)| *i == id).map(|(_, p)| p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyMatch {
    pub id: BranchId,
    pub distance: f64,
}

/// Closest catalog entry with `|Δω| < 0.05`, or `None` beyond `threshold`.
pub fn match_steady_state(
    profile: &GridProfile,
    catalog: &Catalog,
    threshold: f64,
) -> Result<Option<SteadyMatch>> {
    if catalog.entries.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let omega = profile.winding_number();
    let best = catalog
        .entries
        .iter()
        .filter(|(_, p)| (p.winding_number() - omega).abs() < OMEGA_WINDOW)
        .map(|(id, p)| SteadyMatch {
            id: *id,
            distance: profile.l2_distance(p),
        })
        .min_by(|a, b| a.distance.total_cmp(&b.distance));
    Ok(best.filter(|m| m.distance <= threshold))
}

/// Continues each Type I/II seed to `(𝒢, 𝓑)`: seeded at `b_seed`, then in
/// `𝒢`, then in `𝓑`. Branches that cannot be reached are skipped.
pub fn build_catalog(
    coeffs: &LeslieCoefficients,
    g: f64,
    b: f64,
    seeds: &[BranchId],
    b_seed: f64,
    n: usize,
    opts: &ContinuationOptions,
) -> Catalog {
    let mut entries = Vec::new();
    for &id in seeds {
        let reach = || -> Result<GridProfile> {
            let seed = equilibrium(id.family, id.index, b_seed)?;
            let start = seed_point(coeffs, &seed, b_seed, n)?;
            let along_g = continue_in_g(coeffs, id.family, id.index, &start, &[g], opts)?;
            let along_b = continue_in_b(coeffs, id.family, id.index, along_g.last(), &[b], opts)?;
            Ok(along_b.last().profile.clone())
        };
        if let Ok(p) = reach() {
            entries.push((id, p));
        }
    }
    Catalog { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DEFAULT_NODES;

    #[test]
    fn ids_round_trip() {
        let id: BranchId = "II:-3".parse().unwrap();
        assert_eq!(id, BranchId::new(Family::TypeII, -3));
        assert_eq!(id.to_string(), "II:-3");
        assert!("I".parse::<BranchId>().is_err());
    }

    #[test]
    fn self_match_and_filters() {
        let t1 = equilibrium(Family::TypeII, 1, 1.0)
            .unwrap()
            .profile(DEFAULT_NODES);
        let mut cat = Catalog::default();
        assert_eq!(
            match_steady_state(&t1, &cat, 0.05),
            Err(Error::EmptyDatabase)
        );
        cat.entries.push((
            BranchId::new(Family::TypeI, 0),
            GridProfile::constant(DEFAULT_NODES, 0.0),
        ));
        cat.entries
            .push((BranchId::new(Family::TypeII, 1), t1.clone()));
        let m = match_steady_state(&t1, &cat, 0.05).unwrap().unwrap();
        assert_eq!(m.id, BranchId::new(Family::TypeII, 1));
        assert!(m.distance < 1e-9);
        let half = GridProfile::from_fn(DEFAULT_NODES, |z| std::f64::consts::FRAC_PI_2 * z);
        let only = Catalog {
            entries: vec![(
                BranchId::new(Family::TypeI, 0),
                GridProfile::constant(DEFAULT_NODES, 0.0),
            )],
        };
        assert_eq!(match_steady_state(&half, &only, 0.05).unwrap(), None);
    }
}
