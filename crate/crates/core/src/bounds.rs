//! Reference lower bounds and the d = 5 triplet partition.

use serde::{Deserialize, Serialize};

use crate::functionals::{FunctionalKind, TripletId};
use crate::mub::BasisLabel;

/// 2 log₂ 5, the S1 entropy bound.
pub fn two_log2_5() -> f64 {
    2.0 * 5f64.log2()
}

/// Entropy bound of the S2 triplets (known to five decimals).
pub const S2_ENTROPY: f64 = 4.43223;
/// Variance-sum bound of the S1 triplets (printed to three figures).
pub const S1_VARIANCE: f64 = 1.67;
/// Variance-sum bound of the S2 triplets.
pub const S2_VARIANCE: f64 = 1.37;
/// Entropy bound of every d = 4 triplet.
pub const D4_ENTROPY: f64 = 3.0;
/// Variance-sum bound of every d = 4 triplet.
pub const D4_VARIANCE: f64 = 0.75;

/// Triplets reaching 2 log₂ 5.
pub const S1_TRIPLETS: [&str; 10] = ["ABC", "ABF", "BEF", "ADE", "BCD", "CEF", "CDF", "BDE", "ACE", "ADF"];
/// Triplets reaching ≈ 4.43223.
pub const S2_TRIPLETS: [&str; 10] = ["ABD", "ABE", "ACF", "BCE", "DEF", "CDE", "BDF", "ACD", "BCF", "AEF"];

/// Inequivalence class of a triplet of bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassId {
    S1,
    S2,
    /// The single class of the complete d = 4 set.
    Uniform,
}

impl ClassId {
    pub fn entropy_bound(self) -> f64 {
        match self {
            ClassId::S1 => two_log2_5(),
            ClassId::S2 => S2_ENTROPY,
            ClassId::Uniform => D4_ENTROPY,
        }
    }

    pub fn variance_bound(self) -> f64 {
        match self {
            ClassId::S1 => S1_VARIANCE,
            ClassId::S2 => S2_VARIANCE,
            ClassId::Uniform => D4_VARIANCE,
        }
    }

    pub fn bound(self, functional: FunctionalKind) -> f64 {
        match functional {
            FunctionalKind::ShannonEntropySum => self.entropy_bound(),
            FunctionalKind::MinVarianceSum => self.variance_bound(),
        }
    }
}

/// Published class of a triplet: S1/S2 for d = 5, `Uniform` for d = 4.
pub fn reference_class(dim: usize, triplet: &TripletId) -> Option<ClassId> {
    match dim {
        4 => triplet.valid_for(4).then_some(ClassId::Uniform),
        5 => {
            let name = triplet.to_string();
            if S1_TRIPLETS.contains(&name.as_str()) {
                Some(ClassId::S1)
            } else if S2_TRIPLETS.contains(&name.as_str()) {
                Some(ClassId::S2)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// A lower bound on a functional sum and whether it is exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KnownBound {
    pub value: f64,
    /// Exact bounds (log₂ d, 2 log₂ 5, 3) versus numerically known ones.
    pub exact: bool,
}

/// Best known lower bound for a tuple of bases, if one is known.
pub fn known_bound(dim: usize, functional: FunctionalKind, labels: &[BasisLabel]) -> Option<KnownBound> {
    let log_d = (dim as f64).log2();
    match (functional, labels.len()) {
        (FunctionalKind::ShannonEntropySum, 2) => Some(KnownBound { value: log_d, exact: true }),
        (_, 3) => {
            let t = TripletId::new(labels[0], labels[1], labels[2]).ok()?;
            let class = reference_class(dim, &t)?;
            let exact = functional == FunctionalKind::ShannonEntropySum && class != ClassId::S2;
            Some(KnownBound { value: class.bound(functional), exact })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_is_complete_and_disjoint() {
        let mut names: Vec<&str> = S1_TRIPLETS.iter().chain(S2_TRIPLETS.iter()).copied().collect();
        names.sort();
        let all: Vec<String> = TripletId::all(5).iter().map(|t| t.to_string()).collect();
        assert_eq!(names, all.iter().map(String::as_str).collect::<Vec<_>>());
    }

    #[test]
    fn bounds_lookup() {
        let l = BasisLabel::parse_list("ABE").unwrap();
        let b = known_bound(5, FunctionalKind::ShannonEntropySum, &l).unwrap();
        assert_eq!(b.value, S2_ENTROPY);
        assert!(!b.exact);
        let l = BasisLabel::parse_list("CD").unwrap();
        assert_eq!(known_bound(5, FunctionalKind::ShannonEntropySum, &l).unwrap().value, 5f64.log2());
        assert!(known_bound(5, FunctionalKind::MinVarianceSum, &l).is_none());
        let l = BasisLabel::parse_list("BCE").unwrap();
        assert_eq!(known_bound(4, FunctionalKind::MinVarianceSum, &l).unwrap().value, 0.75);
    }
}
