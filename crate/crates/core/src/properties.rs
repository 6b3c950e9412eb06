//! Exhaustive invariant sweeps over small Jordan sets. The randomized
//! counterparts live in the test suites; these run from `verify`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::compgroup::{is_cuspidal_function, BlockMask, ComponentGroup};
use crate::error::Result;
use crate::halfint::HalfInt;
use crate::jordan::{has_gaps, validate_jordan_set, JordanBlock, JordanSet};
use crate::label::{CuspidalLabel, GroupFamily, GroupKind, Parity, PhiType, QuadChar};
use crate::packets::{
    build_element, build_element_with_order, gl_factor_inventory, is_cuspidal_element,
    supported_on_minimal_parabolic, PacketElement, StepKind, StepOrder,
};
use crate::reducibility::{segment_induction_reducible, CuspidalReducibilityData};
use crate::segment::Segment;
use crate::speh::{expansion_stats, speh_determinant};

pub const NAMES: [&str; 6] = [
    "dimension_parity",
    "sp_coset",
    "order_robustness",
    "validate_permutation",
    "contragredient",
    "speh_shape",
];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub cases: u64,
    pub violations: Vec<String>,
}

impl PropertyReport {
    fn new(name: &str) -> Self {
        PropertyReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn fail(&mut self, msg: String) {
        // The first few are enough to debug from.
        if self.violations.len() < 20 {
            self.violations.push(msg);
        }
    }
}

/// Four GL(1) quadratic labels, a symplectic and an orthogonal GL(2) label.
pub fn sample_labels() -> Vec<Arc<CuspidalLabel>> {
    let q = |id: &str, ch| Arc::new(CuspidalLabel::quadratic(id, QuadChar(ch), Parity::Even));
    vec![
        q("triv", 0),
        q("psi1", 1),
        q("psi2", 2),
        q("psi3", 3),
        Arc::new(
            CuspidalLabel::new("rho", 2, PhiType::Symplectic, QuadChar(0), Parity::Odd)
                .expect("valid label"),
        ),
        Arc::new(
            CuspidalLabel::new("o1", 2, PhiType::Orthogonal, QuadChar(1), Parity::Even)
                .expect("valid label"),
        ),
    ]
}

/// Every block over `labels` of dimension at most `max_dim`.
pub fn candidate_blocks(labels: &[Arc<CuspidalLabel>], max_dim: u64) -> Vec<JordanBlock> {
    let mut out = Vec::new();
    for rho in labels {
        for m in 1.. {
            if rho.gl_rank as u64 * m as u64 > max_dim {
                break;
            }
            out.push(JordanBlock::new(rho.clone(), m).expect("m >= 1"));
        }
    }
    out
}

/// All block subsets of total dimension at most `max_dim`, valid or not.
pub fn block_subsets(blocks: &[JordanBlock], max_dim: u64) -> Vec<Vec<JordanBlock>> {
    fn go(
        blocks: &[JordanBlock],
        i: usize,
        left: u64,
        cur: &mut Vec<JordanBlock>,
        out: &mut Vec<Vec<JordanBlock>>,
    ) {
        if i == blocks.len() {
            out.push(cur.clone());
            return;
        }
        go(blocks, i + 1, left, cur, out);
        let d = blocks[i].dimension();
        if d <= left {
            cur.push(blocks[i].clone());
            go(blocks, i + 1, left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(blocks, 0, max_dim, &mut Vec::new(), &mut out);
    out
}

/// Valid Jordan sets of `kind` over the sample labels up to `max_dim`.
pub fn small_jordan_sets(kind: GroupKind, max_dim: u64) -> Vec<(GroupFamily, JordanSet)> {
    let labels = sample_labels();
    let blocks: Vec<JordanBlock> = candidate_blocks(&labels, max_dim)
        .into_iter()
        .filter(|b| b.phi_type() == kind.required_block_type())
        .collect();
    block_subsets(&blocks, max_dim)
        .into_iter()
        .filter_map(|bs| {
            let set = JordanSet::new(bs).ok()?;
            let fam = GroupFamily::new(kind, kind.rank_for_dimension(set.total_dimension())?);
            validate_jordan_set(fam, &set)
                .is_empty()
                .then_some((fam, set))
        })
        .collect()
}

fn inner_jord(e: &PacketElement) -> (&JordanSet, BlockMask) {
    match e {
        PacketElement::Base { jord, function, .. } | PacketElement::Step { jord, function, .. } => {
            (jord, *function)
        }
    }
}

fn m_sum(j: &JordanSet) -> u64 {
    j.iter().map(|b| b.m as u64).sum()
}

/// `mask` with bit `i` deleted and the higher bits shifted down.
fn drop_bit(mask: BlockMask, i: usize) -> BlockMask {
    let low = mask & ((1 << i) - 1);
    low | (mask >> (i + 1)) << i
}

/// Structural checks on one element: each step removes even dimension,
/// the step measure decreases, step (4) removes exactly `δ(ρ,2)` with the
/// character restricted, and the base is gap-free, cuspidal and of the
/// right dimension parity.
pub fn check_element(fam: GroupFamily, e: &PacketElement) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = e;
    while let PacketElement::Step {
        kind,
        segment,
        jord,
        function,
        inner,
        ..
    } = cur
    {
        let (next, next_fn) = inner_jord(inner);
        let removed = jord.total_dimension() as i64 - next.total_dimension() as i64;
        if removed <= 0 || removed % 2 != 0 {
            out.push(format!("{jord} -> {next}: removed dimension {removed}"));
        }
        if m_sum(next) >= m_sum(jord) {
            out.push(format!("{jord} -> {next}: step measure did not decrease"));
        }
        if *kind == StepKind::HalfShift {
            let rho = &segment.rho.id;
            match jord.index_of(rho, 2) {
                Some(i) => {
                    if *next != jord.without(&[(rho, 2)]) {
                        out.push(format!(
                            "{jord} -> {next}: step (4) did not remove δ({rho},2) alone"
                        ));
                    }
                    if next_fn != drop_bit(*function, i) {
                        out.push(format!(
                            "{jord} -> {next}: step (4) character is not the restriction"
                        ));
                    }
                }
                None => out.push(format!("{jord}: step (4) without δ({rho},2)")),
            }
        }
        cur = inner;
    }
    if let PacketElement::Base { jord, function, .. } = cur {
        let d = jord.total_dimension();
        let ok = match fam.kind {
            GroupKind::Sp => d % 2 == 1,
            GroupKind::SoOdd => d % 2 == 0,
        };
        if !ok {
            out.push(format!("base {jord} has total dimension {d}"));
        }
        if has_gaps(jord) || !is_cuspidal_function(jord, *function) {
            out.push(format!("base {jord} is not cuspidal data"));
        }
    }
    out
}

pub fn dimension_parity(max_dim: u64) -> Result<PropertyReport> {
    let mut r = PropertyReport::new("dimension_parity");
    for kind in [GroupKind::Sp, GroupKind::SoOdd] {
        for (fam, set) in small_jordan_sets(kind, max_dim) {
            let g = ComponentGroup::new(fam, set)?;
            for chi in g.characters() {
                r.cases += 1;
                let e = build_element(&g, &chi)?;
                for v in check_element(fam, &e) {
                    r.fail(format!("{fam} {chi}: {v}"));
                }
            }
        }
    }
    Ok(r)
}

/// Cuspidality of an Sp function is unchanged by the sign `(−1)^dim`.
pub fn sp_coset(max_dim: u64) -> Result<PropertyReport> {
    let mut r = PropertyReport::new("sp_coset");
    for (fam, set) in small_jordan_sets(GroupKind::Sp, max_dim) {
        let lambda: BlockMask = set
            .iter()
            .enumerate()
            .filter(|(_, b)| b.dimension() % 2 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i);
        for f in 0..(1u64 << set.len()) {
            r.cases += 1;
            if is_cuspidal_function(&set, f) != is_cuspidal_function(&set, f ^ lambda) {
                r.fail(format!("{fam} {set}: function {f:#b}"));
            }
        }
    }
    Ok(r)
}

#[derive(Debug, PartialEq, Eq)]
struct Attributes {
    cuspidal: bool,
    minimal_parabolic: bool,
    base: String,
    segments: BTreeMap<String, usize>,
}

pub fn attributes_of(e: &PacketElement) -> impl PartialEq + std::fmt::Debug {
    let mut segments = BTreeMap::new();
    for s in gl_factor_inventory(e) {
        *segments.entry(s.to_string()).or_insert(0) += 1;
    }
    Attributes {
        cuspidal: is_cuspidal_element(e),
        minimal_parabolic: supported_on_minimal_parabolic(e),
        base: e.base_jord().to_string(),
        segments,
    }
}

fn line_orders(ids: &[String]) -> Vec<Vec<String>> {
    if ids.len() <= 3 {
        let mut out = Vec::new();
        permute(ids.to_vec(), 0, &mut out);
        out
    } else {
        (0..ids.len())
            .flat_map(|k| {
                let mut v = ids.to_vec();
                v.rotate_left(k);
                let mut w = v.clone();
                w.reverse();
                [v, w]
            })
            .collect()
    }
}

fn permute(mut v: Vec<String>, k: usize, out: &mut Vec<Vec<String>>) {
    if k == v.len() {
        out.push(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v.clone(), k + 1, out);
        v.swap(k, i);
    }
}

pub fn order_robustness(max_dim: u64) -> Result<PropertyReport> {
    let mut r = PropertyReport::new("order_robustness");
    for kind in [GroupKind::Sp, GroupKind::SoOdd] {
        for (fam, set) in small_jordan_sets(kind, max_dim) {
            let ids: Vec<String> = set.lines().keys().map(|s| s.to_string()).collect();
            if ids.len() < 2 {
                continue;
            }
            let g = ComponentGroup::new(fam, set)?;
            for chi in g.characters() {
                let canon = attributes_of(&build_element(&g, &chi)?);
                for order in line_orders(&ids) {
                    r.cases += 1;
                    let e = build_element_with_order(&g, &chi, &StepOrder::Lines(order.clone()))?;
                    if attributes_of(&e) != canon {
                        r.fail(format!("{fam} {chi}: order {order:?}"));
                    }
                }
            }
        }
    }
    Ok(r)
}

pub fn validate_permutation(max_dim: u64) -> Result<PropertyReport> {
    let mut r = PropertyReport::new("validate_permutation");
    let labels = sample_labels();
    let blocks = candidate_blocks(&labels, max_dim);
    for subset in block_subsets(&blocks, max_dim) {
        let mut rev = subset.clone();
        rev.reverse();
        let a = JordanSet::new(subset)?;
        let b = JordanSet::new(rev)?;
        for kind in [GroupKind::Sp, GroupKind::SoOdd] {
            r.cases += 1;
            let d = a.total_dimension();
            let fam = GroupFamily::new(kind, kind.rank_for_dimension(d).unwrap_or((d / 2) as u32));
            if validate_jordan_set(fam, &a) != validate_jordan_set(fam, &b) {
                r.fail(format!("{fam} {a}"));
            }
        }
    }
    Ok(r)
}

/// `segment_induction_reducible` agrees on `Δ` and its contragredient.
pub fn contragredient(max_end: i64) -> Result<PropertyReport> {
    let mut r = PropertyReport::new("contragredient");
    let rho = sample_labels().swap_remove(0);
    let datasets: Vec<Vec<HalfInt>> = vec![
        vec![HalfInt::halves(1)],
        vec![HalfInt::from_int(1)],
        vec![HalfInt::from_int(0), HalfInt::halves(3)],
        vec![HalfInt::from_int(2), HalfInt::halves(5)],
    ];
    for points in datasets {
        let data = CuspidalReducibilityData::new(rho.clone(), "sample", points)?;
        for b2 in -2 * max_end..=2 * max_end {
            for len in 0..=2 * max_end {
                let (b, e) = (HalfInt::halves(b2), HalfInt::halves(b2 + 2 * len));
                let seg = Segment::new(rho.clone(), b, e)?;
                r.cases += 1;
                if segment_induction_reducible(&seg, &data)?
                    != segment_induction_reducible(&seg.contragredient(), &data)?
                {
                    r.fail(format!("{seg} with points {:?}", data.points));
                }
            }
        }
    }
    Ok(r)
}

/// Identity term with coefficient +1, at most `m!` terms, and total length
/// `l·m` in every term, for all `l·m <= max_lm`.
pub fn speh_shape(max_lm: u32) -> Result<PropertyReport> {
    let mut r = PropertyReport::new("speh_shape");
    let rho = sample_labels().swap_remove(0);
    for l in 1..=max_lm {
        for m in 1..=max_lm / l {
            r.cases += 1;
            let x = speh_determinant(&rho, l, m)?;
            let st = expansion_stats(&x);
            let fact: u64 = (1..=m as u64).product();
            if !st.identity_present {
                r.fail(format!("l={l} m={m}: identity term missing"));
            }
            if st.terms as u64 > fact {
                r.fail(format!("l={l} m={m}: {} terms exceed {fact}", st.terms));
            }
            if let Some(ms) = x
                .element
                .terms()
                .keys()
                .find(|ms| ms.total_length() != (l * m) as i64)
            {
                r.fail(format!(
                    "l={l} m={m}: term {ms} has length {}",
                    ms.total_length()
                ));
            }
        }
    }
    Ok(r)
}

/// Runs the named sweep with its size parameter.
pub fn run(name: &str, size: u64) -> Result<PropertyReport> {
    match name {
        "dimension_parity" => dimension_parity(size),
        "sp_coset" => sp_coset(size),
        "order_robustness" => order_robustness(size),
        "validate_permutation" => validate_permutation(size),
        "contragredient" => contragredient(size as i64),
        "speh_shape" => speh_shape(size as u32),
        other => Err(crate::error::Error::Parse(format!(
            "unknown property {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drop_bit_shifts() {
        assert_eq!(drop_bit(0b1011, 1), 0b101);
        assert_eq!(drop_bit(0b1011, 0), 0b101);
        assert_eq!(drop_bit(0b1000, 3), 0);
    }

    #[test]
    fn universe_is_valid_and_nonempty() {
        let sp = small_jordan_sets(GroupKind::Sp, 7);
        assert!(sp.iter().any(|(f, s)| f.rank == 0 && s.len() == 1));
        assert!(sp
            .iter()
            .all(|(f, s)| validate_jordan_set(*f, s).is_empty()));
        let so = small_jordan_sets(GroupKind::SoOdd, 6);
        assert!(so.iter().any(|(_, s)| s.is_empty()));
    }

    #[test]
    fn small_sweeps_pass() {
        for (name, size) in [
            ("dimension_parity", 7),
            ("sp_coset", 7),
            ("order_robustness", 7),
            ("validate_permutation", 5),
            ("contragredient", 3),
            ("speh_shape", 8),
        ] {
            let r = run(name, size).unwrap();
            assert!(r.cases > 0, "{name}");
            assert!(r.violations.is_empty(), "{name}: {:?}", r.violations);
        }
    }
}
