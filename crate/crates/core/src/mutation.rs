//! Exceptional pairs and their mutations, on classes in the Mukai lattice.
//!
//! For an exceptional pair `(E, F)` the type is read off the sign of the skew
//! form: `hom` when `chi_-(E, F) > 0`, `ext` when negative, `zero` otherwise.
//! Left mutations replace `F` by `L_E F`, right mutations replace `E` by
//! `R_F E`; the class of the new member depends on which exact triple
//! realises the mutation (regular, singular or extension).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{MukaiVector, SurfaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairType {
    Hom,
    Ext,
    Zero,
}

impl PairType {
    pub fn from_skew(chi_minus: &BigInt) -> Self {
        if chi_minus.is_positive() {
            PairType::Hom
        } else if chi_minus.is_negative() {
            PairType::Ext
        } else {
            PairType::Zero
        }
    }

    /// `+1`, `-1` or `0`.
    pub fn sign(self) -> i32 {
        match self {
            PairType::Hom => 1,
            PairType::Ext => -1,
            PairType::Zero => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairType::Hom => "hom",
            PairType::Ext => "ext",
            PairType::Zero => "zero",
        }
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationKind {
    Regular,
    Singular,
    Extension,
}

impl MutationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MutationKind::Regular => "regular",
            MutationKind::Singular => "singular",
            MutationKind::Extension => "extension",
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub pair_type: PairType,
    /// `|chi(v, w)|`; equals the dimension of the nontrivial Ext space when
    /// the pair is numerically exceptional.
    pub h: BigInt,
    pub chi: BigInt,
    pub chi_minus: BigInt,
    pub is_numerically_exceptional_pair: bool,
}

/// Types the pair and checks the numerical shadow of exceptionality:
/// both members have `chi(v, v) = 1` and `chi(w, v) = 0`.
pub fn classify_pair(surface: &SurfaceModel, v: &MukaiVector, w: &MukaiVector) -> Result<PairClassification> {
    let chi = surface.euler(v, w)?;
    let back = surface.euler(w, v)?;
    let chi_minus = surface.euler_minus(v, w)?;
    let exceptional = back.is_zero() && surface.is_numerically_exceptional(v) && surface.is_numerically_exceptional(w);
    Ok(PairClassification {
        pair_type: PairType::from_skew(&chi_minus),
        h: chi.abs(),
        chi,
        chi_minus,
        is_numerically_exceptional_pair: exceptional,
    })
}

fn require_exceptional(surface: &SurfaceModel, v: &MukaiVector, w: &MukaiVector) -> Result<PairClassification> {
    let class = classify_pair(surface, v, w)?;
    if !class.is_numerically_exceptional_pair {
        return Err(Error::NotExceptionalPair(format!("({v}, {w})")));
    }
    Ok(class)
}

/// Class of the mutated member: `L_v w` for [`Side::Left`], `R_w v` for
/// [`Side::Right`].
pub fn mutate(
    surface: &SurfaceModel,
    v: &MukaiVector,
    w: &MukaiVector,
    side: Side,
    kind: MutationKind,
) -> Result<MukaiVector> {
    let class = require_exceptional(surface, v, w)?;
    let compatible = matches!(
        (class.pair_type, kind),
        (PairType::Hom, MutationKind::Regular | MutationKind::Singular) | (PairType::Ext, MutationKind::Extension)
    );
    if !compatible {
        return Err(Error::InvalidMutation(format!("{kind} mutation of a {} pair", class.pair_type)));
    }
    let chi = &class.chi;
    let out = match (side, kind) {
        (Side::Left, MutationKind::Regular) => &v.scale(chi) - w,
        (Side::Left, MutationKind::Singular) => w - &v.scale(chi),
        (Side::Left, MutationKind::Extension) => w + &v.scale(&chi.abs()),
        (Side::Right, MutationKind::Regular) => &w.scale(chi) - v,
        (Side::Right, MutationKind::Singular) => v - &w.scale(chi),
        (Side::Right, MutationKind::Extension) => v + &w.scale(&chi.abs()),
    };
    debug_assert!(surface.is_numerically_exceptional(&out));
    Ok(out)
}

/// Picks the triple realising the mutation from the rank of the regular
/// candidate: regular when it is non-negative. A zero-rank regular result is
/// a torsion class.
pub fn infer_mutation_kind(
    surface: &SurfaceModel,
    v: &MukaiVector,
    w: &MukaiVector,
    side: Side,
) -> Result<MutationKind> {
    let class = require_exceptional(surface, v, w)?;
    match class.pair_type {
        PairType::Zero => Err(Error::AmbiguousMutation),
        PairType::Ext => Ok(MutationKind::Extension),
        PairType::Hom => {
            let chi = &class.chi;
            let candidate_rank = match side {
                Side::Left => chi * &v.r - &w.r,
                Side::Right => chi * &w.r - &v.r,
            };
            if candidate_rank.is_negative() {
                Ok(MutationKind::Singular)
            } else {
                Ok(MutationKind::Regular)
            }
        }
    }
}

/// [`mutate`] with the kind from [`infer_mutation_kind`].
pub fn mutate_inferred(surface: &SurfaceModel, v: &MukaiVector, w: &MukaiVector, side: Side) -> Result<MukaiVector> {
    let kind = infer_mutation_kind(surface, v, w, side)?;
    mutate(surface, v, w, side, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SurfacePreset;

    fn p2() -> SurfaceModel {
        SurfaceModel::preset(SurfacePreset::ProjectivePlane).unwrap()
    }
    fn bl1() -> SurfaceModel {
        SurfaceModel::preset(SurfacePreset::Blowup(1)).unwrap()
    }
    fn mv(r: i64, c: &[i64], s: i64) -> MukaiVector {
        MukaiVector::from_i64(r, c, s)
    }

    #[test]
    fn classify_examples() {
        let c = classify_pair(&p2(), &mv(1, &[-1], 1), &mv(1, &[0], 0)).unwrap();
        assert_eq!(c.pair_type, PairType::Hom);
        assert_eq!(c.h, BigInt::from(3));
        assert!(c.is_numerically_exceptional_pair);

        let c = classify_pair(&bl1(), &mv(0, &[0, 1], 1), &mv(1, &[0, -1], -1)).unwrap();
        assert_eq!(c.pair_type, PairType::Ext);
        assert_eq!(c.h, BigInt::from(1));
        assert!(c.is_numerically_exceptional_pair);

        let c = classify_pair(&p2(), &mv(1, &[0], 0), &mv(1, &[0], 2)).unwrap();
        assert_eq!(c.pair_type, PairType::Zero);
    }

    #[test]
    fn non_exceptional_pairs_are_flagged() {
        // (O(H), O) has chi(O, O(H)) = 3 != 0 in the backward direction
        let c = classify_pair(&p2(), &mv(1, &[1], 1), &mv(1, &[0], 0)).unwrap();
        assert!(!c.is_numerically_exceptional_pair);
        assert!(matches!(
            mutate(&p2(), &mv(1, &[1], 1), &mv(1, &[0], 0), Side::Left, MutationKind::Regular),
            Err(Error::NotExceptionalPair(_))
        ));
    }

    #[test]
    fn mutate_examples() {
        let s = p2();
        let (a, b) = (mv(1, &[-1], 1), mv(1, &[0], 0));
        assert_eq!(mutate(&s, &a, &b, Side::Right, MutationKind::Regular).unwrap(), mv(2, &[1], -1));
        assert_eq!(mutate(&s, &a, &b, Side::Left, MutationKind::Regular).unwrap(), mv(2, &[-3], 3));

        let s = bl1();
        let (a, b) = (mv(1, &[0, -1], -1), mv(1, &[0, 0], 0));
        assert_eq!(mutate(&s, &a, &b, Side::Left, MutationKind::Regular).unwrap(), mv(0, &[0, -1], -1));
    }

    #[test]
    fn incompatible_kinds_are_rejected() {
        let s = p2();
        let (a, b) = (mv(1, &[-1], 1), mv(1, &[0], 0));
        assert!(matches!(mutate(&s, &a, &b, Side::Left, MutationKind::Extension), Err(Error::InvalidMutation(_))));
        let s = bl1();
        let (e, f) = (mv(0, &[0, 1], 1), mv(1, &[0, -1], -1));
        assert!(matches!(mutate(&s, &e, &f, Side::Right, MutationKind::Regular), Err(Error::InvalidMutation(_))));
        // extension of the ext pair (O_e, O(-e)) gives O
        assert_eq!(mutate(&s, &e, &f, Side::Right, MutationKind::Extension).unwrap(), mv(1, &[0, 0], 0));
    }

    #[test]
    fn inferred_kinds() {
        let s = p2();
        assert_eq!(
            infer_mutation_kind(&s, &mv(1, &[-1], 1), &mv(1, &[0], 0), Side::Left).unwrap(),
            MutationKind::Regular
        );
        let s = bl1();
        // (O, O_e): left regular, right singular, realised by O(-e) -> O -> O_e
        let (o, oe) = (mv(1, &[0, 0], 0), mv(0, &[0, 1], 1));
        assert_eq!(infer_mutation_kind(&s, &o, &oe, Side::Left).unwrap(), MutationKind::Regular);
        assert_eq!(infer_mutation_kind(&s, &o, &oe, Side::Right).unwrap(), MutationKind::Singular);
        assert_eq!(mutate_inferred(&s, &o, &oe, Side::Right).unwrap(), mv(1, &[0, -1], -1));
        assert_eq!(mutate_inferred(&s, &o, &oe, Side::Left).unwrap(), mv(1, &[0, -1], -1));
        // (O(-e), O) right: regular with a rank-zero result O_e
        let ome = mv(1, &[0, -1], -1);
        assert_eq!(infer_mutation_kind(&s, &ome, &o, Side::Right).unwrap(), MutationKind::Regular);
        assert_eq!(mutate_inferred(&s, &ome, &o, Side::Right).unwrap(), oe);
        // ext pairs
        assert_eq!(infer_mutation_kind(&s, &oe, &ome, Side::Left).unwrap(), MutationKind::Extension);
        assert_eq!(infer_mutation_kind(&s, &oe, &ome, Side::Right).unwrap(), MutationKind::Extension);
    }

    #[test]
    fn zero_pairs_are_ambiguous() {
        // O_{e1}(-1), O_{e2}(-1) on the blow-up in two points
        let s = SurfaceModel::preset(SurfacePreset::Blowup(2)).unwrap();
        let (a, b) = (mv(0, &[0, 1, 0], -1), mv(0, &[0, 0, 1], -1));
        assert_eq!(infer_mutation_kind(&s, &a, &b, Side::Left), Err(Error::AmbiguousMutation));
    }
}
