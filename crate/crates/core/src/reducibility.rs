//! Reducibility of tempered induction and of segment induction from cuspidals,
//! and the conversion between Jordan lines and cuspidal reducibility points.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::jordan::{JordanBlock, JordanSet};
use crate::label::{CuspidalLabel, GroupFamily, GroupKind, Parity};
use crate::segment::Segment;

/// Exponents `x ≥ 0` at which `Ind(|det|^x ρ ⊗ π)` reduces, for one cuspidal
/// `π` of a classical group (named by `pi_tag`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspidalReducibilityData {
    #[serde(serialize_with = "crate::label::serialize_label_id")]
    pub rho: Arc<CuspidalLabel>,
    pub pi_tag: String,
    pub points: BTreeSet<HalfInt>,
}

impl CuspidalReducibilityData {
    pub fn new(
        rho: Arc<CuspidalLabel>,
        pi_tag: impl Into<String>,
        points: impl IntoIterator<Item = HalfInt>,
    ) -> Result<Self> {
        let points: BTreeSet<HalfInt> = points.into_iter().collect();
        if let Some(x) = points.iter().find(|x| x.doubled() < 0) {
            return Err(Error::OutOfRange(format!(
                "reducibility point {x} is negative"
            )));
        }
        Ok(CuspidalReducibilityData {
            rho,
            pi_tag: pi_tag.into(),
            points,
        })
    }
}

/// Whether `Ind(δ(Δ) ⊗ π)` reduces, π cuspidal: some `±x` lies in Δ.
pub fn segment_induction_reducible(seg: &Segment, data: &CuspidalReducibilityData) -> Result<bool> {
    if seg.rho.id != data.rho.id {
        return Err(Error::LineMismatch {
            segment: seg.rho.id.clone(),
            data: data.rho.id.clone(),
        });
    }
    Ok(data
        .points
        .iter()
        .any(|&x| seg.contains(x) || seg.contains(-x)))
}

/// Whether `Ind(δ(ρ,m) ⊗ π)` reduces for square-integrable π with
/// `Jord(π) = jord`.
pub fn is_reducible_tempered(jord: &JordanSet, block: &JordanBlock) -> bool {
    let line = jord.line(&block.rho.id);
    match line.first() {
        Some(&m0) => m0 % 2 == block.m % 2 && !line.contains(&block.m),
        None => Parity::of(block.m) == block.rho.base_parity,
    }
}

/// Jordan set of the rank-zero member of the series.
pub fn rank_zero_jord(fam_kind: GroupKind, triv: &Arc<CuspidalLabel>) -> JordanSet {
    match fam_kind {
        GroupKind::SoOdd => JordanSet::empty(),
        GroupKind::Sp => JordanSet::new([JordanBlock::new(triv.clone(), 1).expect("m = 1")])
            .expect("single block"),
    }
}

/// Reads the Jordan line `δ(ρ,2x−1), δ(ρ,2x−3), ..., δ(ρ,ε)` of a cuspidal
/// with reducibility at `x ≥ 1` (ε = 1 for integral x, else 2).
pub fn jord_line_from_reducibility(
    rho: &Arc<CuspidalLabel>,
    x: HalfInt,
) -> Result<Vec<JordanBlock>> {
    if x < HalfInt::ONE {
        return Err(Error::PointBelowOne(x.to_string()));
    }
    let top = (x.doubled() - 1) as u32;
    let mut out = Vec::new();
    let mut m = top;
    loop {
        out.push(JordanBlock::new(rho.clone(), m)?);
        if m <= 2 {
            break;
        }
        m -= 2;
    }
    Ok(out)
}

/// `(a + 1) / 2` for the largest `a` with `δ(ρ,a)` in the set.
pub fn reducibility_from_jord_line(jord: &JordanSet, rho_id: &str) -> Option<HalfInt> {
    jord.line(rho_id)
        .into_iter()
        .max()
        .map(|a| HalfInt::halves(a as i64 + 1))
}

/// Compares the direct rule with the formulation through the rank-zero
/// representation: reducible iff reducible over `base` and `block ∉ jord`.
///
/// Returns the base-side answer. On the trivial GL(1) line for Sp the two are
/// allowed to differ; anywhere else a difference is an error.
pub fn equivalent_formulation_check(
    fam: GroupFamily,
    jord: &JordanSet,
    block: &JordanBlock,
    base: &JordanSet,
) -> Result<bool> {
    let via_base = is_reducible_tempered(base, block) && !jord.contains(&block.rho.id, block.m);
    let exempt = fam.kind == GroupKind::Sp && block.rho.is_trivial_character();
    if !exempt {
        let direct = is_reducible_tempered(jord, block);
        if direct != via_base {
            return Err(Error::FormulationMismatch {
                rho: block.rho.id.clone(),
                m: block.m,
                direct,
                base: via_base,
            });
        }
    }
    Ok(via_base)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityRow {
    pub m: u32,
    pub in_jord: bool,
    pub reducible: bool,
}

/// `m = 1..=max_m` against `Ind(δ(ρ,m) ⊗ π)`.
pub fn reducibility_table(
    jord: &JordanSet,
    rho: &Arc<CuspidalLabel>,
    max_m: u32,
) -> Vec<ReducibilityRow> {
    (1..=max_m)
        .map(|m| {
            let block = JordanBlock::new(rho.clone(), m).expect("m >= 1");
            ReducibilityRow {
                m,
                in_jord: jord.contains(&rho.id, m),
                reducible: is_reducible_tempered(jord, &block),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::QuadChar;

    fn triv() -> Arc<CuspidalLabel> {
        Arc::new(CuspidalLabel::quadratic("triv", QuadChar(0), Parity::Even))
    }

    fn blk(rho: &Arc<CuspidalLabel>, m: u32) -> JordanBlock {
        JordanBlock::new(rho.clone(), m).unwrap()
    }

    #[test]
    fn segment_points() {
        let t = triv();
        let half = CuspidalReducibilityData::new(t.clone(), "1", [HalfInt::HALF]).unwrap();
        let one = CuspidalReducibilityData::new(t.clone(), "1", [HalfInt::ONE]).unwrap();
        for m in 1..12 {
            let seg = Segment::centered(t.clone(), m);
            assert_eq!(
                segment_induction_reducible(&seg, &half).unwrap(),
                m % 2 == 0
            );
            assert_eq!(
                segment_induction_reducible(&seg, &one).unwrap(),
                m % 2 == 1 && m >= 3
            );
        }
        let other = Arc::new(CuspidalLabel::quadratic("psi", QuadChar(1), Parity::Even));
        let seg = Segment::centered(other, 2);
        assert!(segment_induction_reducible(&seg, &half).is_err());
    }

    #[test]
    fn steinberg_line() {
        let t = triv();
        let jord = JordanSet::new([blk(&t, 7)]).unwrap();
        for m in 1..30 {
            assert_eq!(
                is_reducible_tempered(&jord, &blk(&t, m)),
                m % 2 == 1 && m != 7
            );
        }
    }

    #[test]
    fn empty_line_uses_base_parity() {
        let t = triv();
        for m in 1..10 {
            assert_eq!(
                is_reducible_tempered(&JordanSet::empty(), &blk(&t, m)),
                m % 2 == 0
            );
        }
    }

    #[test]
    fn line_from_point() {
        let t = triv();
        let ms = |x| -> Vec<u32> {
            jord_line_from_reducibility(&t, x)
                .unwrap()
                .iter()
                .map(|b| b.m)
                .collect()
        };
        assert_eq!(ms(HalfInt::ONE), vec![1]);
        assert_eq!(ms(HalfInt::halves(3)), vec![2]);
        assert_eq!(ms(HalfInt::from_int(2)), vec![3, 1]);
        assert_eq!(ms(HalfInt::halves(7)), vec![6, 4, 2]);
        assert!(jord_line_from_reducibility(&t, HalfInt::HALF).is_err());
    }

    #[test]
    fn point_from_line() {
        let t = triv();
        let jord = JordanSet::new([blk(&t, 8)]).unwrap();
        assert_eq!(
            reducibility_from_jord_line(&jord, "triv"),
            Some(HalfInt::halves(9))
        );
        assert_eq!(reducibility_from_jord_line(&jord, "psi"), None);
    }

    #[test]
    fn formulation_so() {
        let t = triv();
        let st = JordanSet::new([blk(&t, 4)]).unwrap();
        let fam = GroupFamily::so(2);
        assert!(!equivalent_formulation_check(fam, &st, &blk(&t, 4), &JordanSet::empty()).unwrap());
        assert!(equivalent_formulation_check(fam, &st, &blk(&t, 2), &JordanSet::empty()).unwrap());
        assert!(!equivalent_formulation_check(fam, &st, &blk(&t, 3), &JordanSet::empty()).unwrap());
    }

    #[test]
    fn formulation_sp_trivial_line_is_exempt() {
        let t = Arc::new(CuspidalLabel::quadratic("triv", QuadChar(0), Parity::Odd));
        let jord = JordanSet::new([blk(&t, 3)]).unwrap();
        let base = rank_zero_jord(GroupKind::Sp, &t);
        // Direct rule says δ(1,1) reduces; through the base it does not.
        assert!(is_reducible_tempered(&jord, &blk(&t, 1)));
        assert!(
            !equivalent_formulation_check(GroupFamily::sp(1), &jord, &blk(&t, 1), &base).unwrap()
        );
    }
}
