//! Symbolic construction of the packet member attached to a pair
//! `(Jord, φ)` by successive induction steps down to a cuspidal pair.
//!
//! The recursion keeps one representative function `Jord → {±1}` of φ and
//! restricts it (or moves its value, for a gap shift) as blocks are removed.
//! Every step only looks at one cuspidal line, so the lines evolve
//! independently; [`reduce_line`] exposes a single line's run.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::compgroup::{is_cuspidal_function, BlockMask, ComponentCharacter, ComponentGroup};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::jordan::{JordanBlock, JordanSet};
use crate::label::{CuspidalLabel, GroupFamily, GroupKind};
use crate::segment::Segment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StepKind {
    /// Removes `δ(ρ,a), δ(ρ,a_-)` when φ is `+1` on their product.
    PairRemoval,
    /// Replaces `δ(ρ,a)` by the lowest free `δ(ρ,a−2k)` below a gap.
    GapShift,
    /// Removes `δ(ρ,2)` when φ is `+1` on it.
    HalfShift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SelectionRule {
    RuleA,
    RuleB,
    RuleC,
    RuleD,
}

/// Which of the two subrepresentations of a pair removal is meant: the one
/// that embeds into an induced representation from `segment` (twisted by
/// `τ_tau` for rule (d)) exactly when `embeds` is true.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub rule: SelectionRule,
    pub segment: Segment,
    pub embeds: bool,
    /// The value was read off a single odd-dimensional block, which depends
    /// on the representative of an Sp character.
    pub representative_dependent: bool,
    /// Index of the τ in rule (d); `1` is the generic one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum PacketElement {
    Base {
        family: GroupFamily,
        jord: JordanSet,
        character: ComponentCharacter,
        /// Representative carried down the recursion, as a −1 mask on `jord`.
        function: BlockMask,
    },
    Step {
        kind: StepKind,
        segment: Segment,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        selections: Vec<Selection>,
        /// Jordan set and representative before the step.
        jord: JordanSet,
        function: BlockMask,
        inner: Box<PacketElement>,
    },
}

impl PacketElement {
    pub fn base(&self) -> &PacketElement {
        let mut e = self;
        while let PacketElement::Step { inner, .. } = e {
            e = inner;
        }
        e
    }

    pub fn base_jord(&self) -> &JordanSet {
        match self.base() {
            PacketElement::Base { jord, .. } => jord,
            PacketElement::Step { .. } => unreachable!(),
        }
    }

    /// Steps from the root down to the base.
    pub fn steps(&self) -> Vec<&PacketElement> {
        let mut out = Vec::new();
        let mut e = self;
        while let PacketElement::Step { inner, .. } = e {
            out.push(e);
            e = inner;
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.steps().len()
    }
}

/// Tie-breaking between lines that offer a step of the same kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum StepOrder {
    /// Largest `a` first, then smallest rho id; step (4) on the first line.
    #[default]
    Canonical,
    /// Lines earlier in the list go first; within a line the largest `a`.
    /// Lines not listed come after, in id order.
    Lines(Vec<String>),
}

/// Blocks of one cuspidal line, ascending in `m`, with `true` meaning −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineState {
    pub rho: Arc<CuspidalLabel>,
    pub blocks: Vec<(u32, bool)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LineOp {
    Pair { idx: usize },
    Gap { idx: usize, new_m: u32 },
    Half,
}

impl LineOp {
    fn kind(self) -> StepKind {
        match self {
            LineOp::Pair { .. } => StepKind::PairRemoval,
            LineOp::Gap { .. } => StepKind::GapShift,
            LineOp::Half => StepKind::HalfShift,
        }
    }
}

fn half(numerator: i64) -> HalfInt {
    HalfInt::halves(numerator)
}

fn seg(rho: &Arc<CuspidalLabel>, b: HalfInt, e: HalfInt) -> Segment {
    Segment::new(rho.clone(), b, e).expect("construction segments are well formed")
}

impl LineState {
    /// The step this line would take next, with its `a`.
    fn next_op(&self) -> Option<(LineOp, u32)> {
        let b = &self.blocks;
        for i in (1..b.len()).rev() {
            if b[i].1 == b[i - 1].1 {
                return Some((LineOp::Pair { idx: i }, b[i].0));
            }
        }
        for i in (0..b.len()).rev() {
            let m = b[i].0;
            let below = if i > 0 { Some(b[i - 1].0) } else { None };
            if m >= 3 && below != Some(m - 2) {
                let new_m = match below {
                    Some(l) => l + 2,
                    None => 2 - m % 2,
                };
                return Some((LineOp::Gap { idx: i, new_m }, m));
            }
        }
        match b.first() {
            Some(&(2, false)) => Some((LineOp::Half, 2)),
            _ => None,
        }
    }

    /// Applies `op`, returning the step segment and the selection tags.
    /// `odd_dim_dependent` says whether reading φ on a single odd-dimensional
    /// block depends on the representative (Sp only).
    fn apply(&mut self, op: LineOp, rep_dependent_series: bool) -> (Segment, Vec<Selection>) {
        let rho = self.rho.clone();
        match op {
            LineOp::Pair { idx } => {
                let (a, sa) = self.blocks[idx];
                let (am, sam) = self.blocks[idx - 1];
                let segment = seg(&rho, half(1 - am as i64), half(a as i64 - 1));
                let mut sel = Vec::new();
                if let Some(&(b, sb)) = self.blocks.get(idx + 1) {
                    sel.push(Selection {
                        rule: SelectionRule::RuleA,
                        segment: seg(&rho, half(a as i64 + 1), half(b as i64 - 1)),
                        embeds: sb == sa,
                        representative_dependent: false,
                        tau: None,
                    });
                }
                if idx >= 2 {
                    let (b, sb) = self.blocks[idx - 2];
                    sel.push(Selection {
                        rule: SelectionRule::RuleB,
                        segment: seg(&rho, half(b as i64 + 1), half(am as i64 - 1)),
                        embeds: sb == sam,
                        representative_dependent: false,
                        tau: None,
                    });
                }
                if sel.is_empty() {
                    let odd_dim = rho.gl_rank as u64 * a as u64 % 2 == 1;
                    let dependent = rep_dependent_series && odd_dim;
                    if a % 2 == 0 {
                        sel.push(Selection {
                            rule: SelectionRule::RuleC,
                            segment: seg(&rho, HalfInt::HALF, half(am as i64 - 1)),
                            embeds: !sa,
                            representative_dependent: dependent,
                            tau: None,
                        });
                    } else {
                        sel.push(Selection {
                            rule: SelectionRule::RuleD,
                            segment: seg(&rho, HalfInt::ONE, half(a as i64 - 1)),
                            embeds: !sa,
                            representative_dependent: dependent,
                            tau: Some(1),
                        });
                    }
                }
                self.blocks.drain(idx - 1..=idx);
                (segment, sel)
            }
            LineOp::Gap { idx, new_m } => {
                let a = self.blocks[idx].0;
                self.blocks[idx].0 = new_m;
                (
                    seg(&rho, half(new_m as i64 + 1), half(a as i64 - 1)),
                    Vec::new(),
                )
            }
            LineOp::Half => {
                self.blocks.remove(0);
                (seg(&rho, HalfInt::HALF, HalfInt::HALF), Vec::new())
            }
        }
    }
}

/// Result of running the recursion on a single line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineReduction {
    pub steps: Vec<(StepKind, Segment)>,
    pub remaining: Vec<(u32, bool)>,
}

/// Runs the recursion on one line in isolation. Within a line the order of
/// steps is the same as in a full build, so the remaining blocks and the
/// segments agree with [`build_element`] restricted to this line.
pub fn reduce_line(rho: &Arc<CuspidalLabel>, blocks: &[(u32, bool)]) -> LineReduction {
    let mut line = LineState {
        rho: rho.clone(),
        blocks: blocks.to_vec(),
    };
    line.blocks.sort_unstable();
    let mut steps = Vec::new();
    while let Some((op, _)) = line.next_op() {
        let (segment, _) = line.apply(op, false);
        steps.push((op.kind(), segment));
    }
    LineReduction {
        steps,
        remaining: line.blocks,
    }
}

fn split_lines(jord: &JordanSet, minus: BlockMask) -> Vec<LineState> {
    let mut lines: Vec<LineState> = Vec::new();
    for (i, b) in jord.iter().enumerate() {
        let sign = minus >> i & 1 == 1;
        match lines.last_mut() {
            Some(l) if l.rho.id == b.rho.id => l.blocks.push((b.m, sign)),
            _ => lines.push(LineState {
                rho: b.rho.clone(),
                blocks: vec![(b.m, sign)],
            }),
        }
    }
    lines
}

fn join_lines(lines: &[LineState]) -> Result<(JordanSet, BlockMask)> {
    let mut blocks = Vec::new();
    for l in lines {
        for &(m, _) in &l.blocks {
            blocks.push(JordanBlock::new(l.rho.clone(), m)?);
        }
    }
    let jord = JordanSet::new(blocks)?;
    let mut minus = 0;
    for l in lines {
        for &(m, s) in &l.blocks {
            if s {
                minus |= 1 << jord.index_of(&l.rho.id, m).expect("just inserted");
            }
        }
    }
    Ok((jord, minus))
}

fn family_of(kind: GroupKind, jord: &JordanSet) -> Result<GroupFamily> {
    let dim = jord.total_dimension();
    kind.rank_for_dimension(dim)
        .map(|r| GroupFamily::new(kind, r))
        .ok_or_else(|| Error::Stalled(format!("dimension {dim} left for the {kind} series")))
}

fn choose(lines: &[LineState], order: &StepOrder) -> Option<(usize, LineOp)> {
    let ops: Vec<(usize, LineOp, u32)> = lines
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.next_op().map(|(op, a)| (i, op, a)))
        .collect();
    let kind = ops.iter().map(|(_, op, _)| op.kind()).min()?;
    let mut cands: Vec<&(usize, LineOp, u32)> =
        ops.iter().filter(|(_, op, _)| op.kind() == kind).collect();
    match order {
        StepOrder::Canonical => {
            if kind != StepKind::HalfShift {
                // Stable sort keeps id order among equal a.
                cands.sort_by_key(|x| std::cmp::Reverse(x.2));
            }
        }
        StepOrder::Lines(pref) => {
            let rank = |i: usize| {
                pref.iter()
                    .position(|id| *id == lines[i].rho.id)
                    .unwrap_or(pref.len())
            };
            cands.sort_by_key(|c| rank(c.0));
        }
    }
    cands.first().map(|c| (c.0, c.1))
}

pub fn build_element(group: &ComponentGroup, chi: &ComponentCharacter) -> Result<PacketElement> {
    build_element_with_order(group, chi, &StepOrder::Canonical)
}

pub fn build_element_with_order(
    group: &ComponentGroup,
    chi: &ComponentCharacter,
    order: &StepOrder,
) -> Result<PacketElement> {
    let kind = group.family().kind;
    let check = group.character_from_function(chi.representative())?;
    if check != *chi {
        return Err(Error::InvalidCharacter(format!(
            "{chi} is not a character of this component group"
        )));
    }
    let mut lines = split_lines(group.jord(), chi.representative());
    let rep_dependent = kind == GroupKind::Sp;
    let mut trail = Vec::new();
    let budget: u64 = group.jord().iter().map(|b| b.m as u64).sum::<u64>() + 1;
    while let Some((li, op)) = choose(&lines, order) {
        if trail.len() as u64 > budget {
            return Err(Error::Stalled("step measure did not decrease".into()));
        }
        let (jord, function) = join_lines(&lines)?;
        let (segment, selections) = lines[li].apply(op, rep_dependent);
        if lines[li].blocks.is_empty() {
            lines.remove(li);
        }
        trail.push((op.kind(), segment, selections, jord, function));
    }
    let (jord, function) = join_lines(&lines)?;
    if !is_cuspidal_function(&jord, function) {
        return Err(Error::Stalled(format!(
            "recursion stopped at non-cuspidal {jord}"
        )));
    }
    let family = family_of(kind, &jord)?;
    let base_group = ComponentGroup::new(family, jord.clone())?;
    let character = base_group.character_from_function(function)?;
    let mut element = PacketElement::Base {
        family,
        jord,
        character,
        function,
    };
    for (kind, segment, selections, jord, function) in trail.into_iter().rev() {
        element = PacketElement::Step {
            kind,
            segment,
            selections,
            jord,
            function,
            inner: Box::new(element),
        };
    }
    Ok(element)
}

/// No induction step: the element is the cuspidal member itself.
pub fn is_cuspidal_element(e: &PacketElement) -> bool {
    matches!(e, PacketElement::Base { .. })
}

/// Jordan set of the rank-zero member: `∅` for SO, `{δ(1,1)}` for Sp.
pub fn is_rank_zero_base(kind: GroupKind, jord: &JordanSet) -> bool {
    match kind {
        GroupKind::SoOdd => jord.is_empty(),
        GroupKind::Sp => {
            jord.len() == 1 && {
                let b = &jord.blocks()[0];
                b.m == 1 && b.rho.is_trivial_character()
            }
        }
    }
}

pub fn supported_on_minimal_parabolic(e: &PacketElement) -> bool {
    let base_ok = match e.base() {
        PacketElement::Base { family, jord, .. } => is_rank_zero_base(family.kind, jord),
        PacketElement::Step { .. } => unreachable!(),
    };
    base_ok && gl_factor_inventory(e).iter().all(|s| s.rho.gl_rank == 1)
}

/// Segments of the induction steps, root first.
pub fn gl_factor_inventory(e: &PacketElement) -> Vec<Segment> {
    e.steps()
        .into_iter()
        .map(|s| match s {
            PacketElement::Step { segment, .. } => segment.clone(),
            PacketElement::Base { .. } => unreachable!(),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PacketEntry {
    pub character: ComponentCharacter,
    pub element: PacketElement,
}

#[derive(Clone, Debug)]
pub struct Packet {
    pub group: ComponentGroup,
    pub elements: Vec<PacketEntry>,
}

impl Packet {
    pub fn family(&self) -> GroupFamily {
        self.group.family()
    }

    pub fn jord(&self) -> &JordanSet {
        self.group.jord()
    }

    pub fn get(&self, chi: &ComponentCharacter) -> Option<&PacketElement> {
        self.elements
            .iter()
            .find(|e| e.character == *chi)
            .map(|e| &e.element)
    }

    pub fn cuspidal_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| is_cuspidal_element(&e.element))
            .count()
    }

    pub fn minimal_parabolic_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| supported_on_minimal_parabolic(&e.element))
            .count()
    }
}

pub fn build_packet(group: &ComponentGroup) -> Result<Packet> {
    let elements = group
        .characters()
        .into_iter()
        .map(|character| {
            let element = build_element(group, &character)?;
            Ok(PacketEntry { character, element })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Packet {
        group: group.clone(),
        elements,
    })
}

/// Per-character summary used by reports.
#[derive(Clone, Debug, Serialize)]
pub struct ElementReport {
    pub character: String,
    pub signs: ComponentCharacter,
    pub cuspidal: bool,
    pub minimal_parabolic: bool,
    pub gl_factors: Vec<String>,
    pub base_jord: String,
    pub tree: PacketElement,
}

impl From<&PacketEntry> for ElementReport {
    fn from(e: &PacketEntry) -> Self {
        ElementReport {
            character: e.character.to_string(),
            signs: e.character.clone(),
            cuspidal: is_cuspidal_element(&e.element),
            minimal_parabolic: supported_on_minimal_parabolic(&e.element),
            gl_factors: gl_factor_inventory(&e.element)
                .iter()
                .map(|s| s.to_string())
                .collect(),
            base_jord: e.element.base_jord().to_string(),
            tree: e.element.clone(),
        }
    }
}
