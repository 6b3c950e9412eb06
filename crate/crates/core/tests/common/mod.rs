#![allow(dead_code)]

use std::sync::Arc;

use jordpack_core::jordan::JordanBlock;
use jordpack_core::properties::sample_labels;
use jordpack_core::{CuspidalLabel, GroupFamily, GroupKind, JordanSet};
use proptest::prelude::*;

fn label(id: &str) -> Arc<CuspidalLabel> {
    sample_labels()
        .into_iter()
        .find(|l| l.id == id)
        .expect("sample label")
}

/// Lines with the block lengths each may use for `kind`.
fn line_menu(kind: GroupKind) -> Vec<(&'static str, Vec<u32>)> {
    match kind {
        GroupKind::Sp => vec![
            ("triv", vec![1, 3, 5, 7]),
            ("psi1", vec![1, 3, 5, 7]),
            ("psi2", vec![1, 3, 5]),
            ("psi3", vec![1, 3, 5]),
            ("rho", vec![2, 4, 6]),
            ("o1", vec![1, 3, 5]),
        ],
        GroupKind::SoOdd => vec![
            ("triv", vec![2, 4, 6, 8]),
            ("psi1", vec![2, 4, 6]),
            ("psi2", vec![2, 4, 6]),
            ("psi3", vec![2, 4]),
            ("rho", vec![1, 3, 5]),
            ("o1", vec![2, 4]),
        ],
    }
}

fn toggle(blocks: &mut Vec<(String, u32)>, id: &str, m: u32) {
    if let Some(i) = blocks.iter().position(|(r, x)| r == id && *x == m) {
        blocks.remove(i);
    } else {
        blocks.push((id.to_string(), m));
    }
}

/// Random valid Jordan set of `kind`. Sp sets are repaired into validity by
/// toggling `δ(ψ,1)` for the missing central character and then `δ(1,1)`
/// for the dimension parity.
pub fn jordan_set(kind: GroupKind) -> impl Strategy<Value = (GroupFamily, JordanSet)> {
    let menu = line_menu(kind);
    let picks: Vec<_> = menu
        .iter()
        .map(|(_, ms)| proptest::sample::subsequence(ms.clone(), 0..=2))
        .collect();
    picks.prop_map(move |chosen| {
        let mut blocks: Vec<(String, u32)> = menu
            .iter()
            .zip(chosen)
            .flat_map(|((id, _), ms)| ms.into_iter().map(move |m| (id.to_string(), m)))
            .collect();
        if kind == GroupKind::Sp {
            let product = blocks
                .iter()
                .map(|(id, _)| label(id))
                .filter(|l| l.phi_type == jordpack_core::PhiType::Orthogonal)
                .fold(0u16, |acc, l| acc ^ l.central_char.0);
            if product != 0 {
                toggle(
                    &mut blocks,
                    ["triv", "psi1", "psi2", "psi3"][product as usize],
                    1,
                );
            }
            let dim: u64 = blocks
                .iter()
                .map(|(id, m)| label(id).gl_rank as u64 * *m as u64)
                .sum();
            if dim.is_multiple_of(2) {
                toggle(&mut blocks, "triv", 1);
            }
        }
        let set = JordanSet::new(
            blocks
                .iter()
                .map(|(id, m)| JordanBlock::new(label(id), *m).unwrap()),
        )
        .unwrap();
        let rank = kind.rank_for_dimension(set.total_dimension()).unwrap();
        (GroupFamily::new(kind, rank), set)
    })
}

pub fn any_jordan_set() -> impl Strategy<Value = (GroupFamily, JordanSet)> {
    prop_oneof![jordan_set(GroupKind::Sp), jordan_set(GroupKind::SoOdd)]
}

/// A function on the blocks that defines a character of `kind`.
pub fn function_for(kind: GroupKind, set: &JordanSet, seed: u64) -> u64 {
    let n = set.len();
    let mut f = if n == 0 {
        0
    } else {
        seed & (u64::MAX >> (64 - n))
    };
    if kind == GroupKind::SoOdd && f.count_ones() % 2 == 1 {
        f ^= 1;
    }
    f
}
