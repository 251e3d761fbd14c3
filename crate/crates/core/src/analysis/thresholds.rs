use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Half-width of the band around an equality in which no verdict is given.
pub const BOUNDARY_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// Recoverable from `G₁` alone.
    Green,
    /// Needs both graphs; exact matching is feasible.
    Cyan,
    /// Needs both graphs; exact matching is infeasible.
    Yellow,
    /// Not recoverable even from the aligned union.
    Red,
    BoundaryIndeterminate,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Green => "green",
            Region::Cyan => "cyan",
            Region::Yellow => "yellow",
            Region::Red => "red",
            Region::BoundaryIndeterminate => "boundary",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub region: Region,
    /// `s²(α+β)/2 > 1`.
    pub matching_feasible: bool,
    /// `|√α − √β| > √(2/s)`.
    pub single_graph: bool,
    /// `|√α − √β| > √(2/(1 − (1−s)²))`.
    pub pair_union: bool,
    /// `|√α − √β| > √(2/(1 − (1−s)^K))`.
    pub k_union: bool,
    /// `|√α − √β| > √2`.
    pub parent: bool,
}

/// Strict comparison `lhs > rhs` together with a flag for `|lhs − rhs|`
/// inside the boundary band.
fn compare(lhs: f64, rhs: f64) -> (bool, bool) {
    if rhs.is_infinite() {
        return (false, false);
    }
    (lhs > rhs, (lhs - rhs).abs() <= BOUNDARY_BAND)
}

/// Region verdict for raw `(α, β, s, K)`.
pub fn classify(alpha: f64, beta: f64, s: f64, k: usize) -> Result<RegionVerdict> {
    if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::param(format!("alpha and beta must be finite and >= 0, got {alpha}, {beta}")));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::param(format!("s must lie in [0, 1], got {s}")));
    }
    if k < 2 {
        return Err(Error::param(format!("K must be at least 2, got {k}")));
    }
    let gap = (alpha.sqrt() - beta.sqrt()).abs();
    // rate multipliers; a zero multiplier makes the threshold infinite
    let rhs = |factor: f64| if factor > 0.0 { (2.0 / factor).sqrt() } else { f64::INFINITY };
    let (single_graph, single_edge) = compare(gap, rhs(s));
    let (pair_union, pair_edge) = compare(gap, rhs(1.0 - (1.0 - s) * (1.0 - s)));
    let (k_union, _) = compare(gap, rhs(1.0 - (1.0 - s).powi(k as i32)));
    let (parent, _) = compare(gap, 2f64.sqrt());
    let (matching_feasible, matching_edge) = compare(s * s * (alpha + beta) / 2.0, 1.0);

    let region = if pair_edge {
        Region::BoundaryIndeterminate
    } else if !pair_union {
        Region::Red
    } else if single_edge {
        Region::BoundaryIndeterminate
    } else if single_graph {
        Region::Green
    } else if matching_edge {
        Region::BoundaryIndeterminate
    } else if matching_feasible {
        Region::Cyan
    } else {
        Region::Yellow
    };
    Ok(RegionVerdict { region, matching_feasible, single_graph, pair_union, k_union, parent })
}

/// Region verdict for a parameter set; `α`, `β` are read as the
/// coefficients of `log(n)/n` whatever the scaling mode.
pub fn thresholds(params: &ModelParams) -> RegionVerdict {
    classify(params.alpha(), params.beta(), params.s(), params.k_graphs()).expect("validated parameters")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_points() {
        assert_eq!(classify(8.0, 1.0, 0.5, 2).unwrap().region, Region::Cyan);
        assert_eq!(classify(9.0, 0.5, 0.25, 2).unwrap().region, Region::Yellow);
        assert_eq!(classify(16.0, 1.0, 0.75, 2).unwrap().region, Region::Green);
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(classify(5.0, 5.0, s, 2).unwrap().region, Region::Red);
        }
        let v = classify(100.0, 0.0, 0.0, 3).unwrap();
        assert!(!v.single_graph && !v.pair_union && !v.k_union && !v.matching_feasible);
        assert_eq!(v.region, Region::Red);
    }

    #[test]
    fn boundary_band() {
        // s = 1: every threshold is √2; α = 2, β = 0 sits exactly on it
        assert_eq!(classify(2.0, 0.0, 1.0, 2).unwrap().region, Region::BoundaryIndeterminate);
        // matching boundary: s²(α+β)/2 = 1 inside the pair region
        let v = classify(7.0, 1.0, 0.5, 2).unwrap();
        assert!(v.pair_union && !v.single_graph);
        assert_eq!(v.region, Region::BoundaryIndeterminate);
    }

    #[test]
    fn k_union_decreases_with_k() {
        let rhs = |k: i32| (2.0 / (1.0 - 0.7f64.powi(k))).sqrt();
        assert!((2..10).all(|k| rhs(k + 1) < rhs(k)));
        assert!(classify(5.5, 0.5, 0.3, 5).unwrap().k_union);
        assert!(!classify(5.5, 0.5, 0.3, 2).unwrap().pair_union);
    }

    proptest! {
        #[test]
        fn verdict_implications(a in 0.0f64..60.0, b in 0.0f64..60.0, s in 0.0f64..=1.0, k in 2usize..6) {
            let v = classify(a, b, s, k).unwrap();
            match v.region {
                Region::Green => prop_assert!(v.single_graph),
                Region::Cyan => prop_assert!(!v.single_graph && v.pair_union && v.matching_feasible),
                Region::Yellow => prop_assert!(!v.single_graph && v.pair_union && !v.matching_feasible),
                Region::Red => prop_assert!(!v.pair_union),
                Region::BoundaryIndeterminate => {}
            }
            prop_assert!(!v.single_graph || v.pair_union);
            prop_assert!(!v.pair_union || v.k_union);
            prop_assert_eq!(v, classify(b, a, s, k).unwrap());
        }

        #[test]
        fn matching_monotone(a in 0.0f64..30.0, b in 0.0f64..30.0, s in 0.0f64..=1.0, d in 0.0f64..5.0) {
            let base = classify(a, b, s, 2).unwrap().matching_feasible;
            if base {
                prop_assert!(classify(a + d, b, s, 2).unwrap().matching_feasible);
                prop_assert!(classify(a, b + d, s, 2).unwrap().matching_feasible);
                prop_assert!(classify(a, b, (s + d / 5.0).min(1.0), 2).unwrap().matching_feasible);
            }
        }

        #[test]
        fn more_correlation_never_leaves_green(a in 0.0f64..40.0, b in 0.0f64..40.0, s in 0.01f64..1.0, d in 0.0f64..1.0) {
            let s2 = (s + d).min(1.0);
            if classify(a, b, s, 2).unwrap().region == Region::Green {
                prop_assert_ne!(classify(a, b, s2, 2).unwrap().region, Region::Red);
            }
        }
    }
}
