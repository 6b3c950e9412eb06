//! Packets with antipodes: a packet holding both a cuspidal member and a
//! member supported on the minimal parabolic subgroup.
//!
//! Existence is decided twice. The arithmetic route solves the sum conditions
//! on ladder lengths directly. The packet route enumerates every ladder Jordan
//! set over the quadratic characters, counts cuspidal characters over GF(2) and
//! runs the construction line by line to find a minimal-parabolic member.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::compgroup::ComponentGroup;
use crate::error::Result;
use crate::jordan::{JordanBlock, JordanSet};
use crate::label::{CuspidalLabel, GroupFamily, GroupKind, Parity, QuadChar, QuadCharSpace};
use crate::packets::reduce_line;

pub fn is_sum_of_three_squares(n: u64) -> bool {
    let mut n = n;
    while n > 0 && n.is_multiple_of(4) {
        n /= 4;
    }
    n % 8 != 7
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `(a, b)` with `a ≥ b ≥ 0` and `a² + b² = n`, largest `a` first.
pub fn two_squares(n: u64) -> Option<(u64, u64)> {
    (0..=isqrt(n)).rev().find_map(|a| {
        let rest = n - a * a;
        let b = isqrt(rest);
        (b * b == rest && b <= a).then_some((a, b))
    })
}

pub fn is_sum_of_two_squares(n: u64) -> bool {
    two_squares(n).is_some()
}

/// `(a, b, c)` with `a ≥ b ≥ c` and `a² + b² + c² = n`, largest `a` first.
pub fn three_squares(n: u64) -> Option<(u64, u64, u64)> {
    (0..=isqrt(n)).rev().find_map(|a| {
        let (b, c) = two_squares(n - a * a)?;
        (b <= a).then_some((a, b, c))
    })
}

pub fn triangular(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// `(a, b, c)` with `T(a) + T(b) + T(c) = n`, `a ≥ b ≥ c`.
pub fn three_triangular(n: u64) -> Option<(u64, u64, u64)> {
    let top = |x: u64| (isqrt(8 * x + 1) - 1) / 2;
    (0..=top(n)).rev().find_map(|a| {
        let r = n - triangular(a);
        (0..=top(r).min(a)).rev().find_map(|b| {
            let r2 = r - triangular(b);
            let c = top(r2);
            (triangular(c) == r2 && c <= b).then_some((a, b, c))
        })
    })
}

/// `l = m1(m1+1) + m2² + m3² + m4²` with `m1 ∈ {0, 1}`: `m1 = 0` when `l`
/// is a sum of three squares, else `m1 = 1` and `l − 2` is split.
pub fn gauss_decomposition_sp(l: u64) -> (u64, u64, u64, u64) {
    let (m1, rest) = if is_sum_of_three_squares(l) {
        (0, l)
    } else {
        (1, l - 2)
    };
    let (a, b, c) = three_squares(rest).expect("l − 2 is a sum of three squares when l is not");
    debug_assert_eq!(m1 * (m1 + 1) + a * a + b * b + c * c, l);
    (m1, a, b, c)
}

/// Ladder lines `(ψ, k)` with distinct ψ: `δ(ψ,2), ..., δ(ψ,2k)` for SO and
/// `δ(ψ,1), ..., δ(ψ,2k−1)` for Sp.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LadderSpec {
    pub lines: Vec<(QuadChar, u32)>,
}

impl LadderSpec {
    /// Label used for the line of `ch`: `triv`, or `chi_<bits>`.
    pub fn label(space: QuadCharSpace, ch: QuadChar) -> Arc<CuspidalLabel> {
        let id = if ch.is_trivial() {
            "triv".to_string()
        } else {
            format!("chi_{}", space.format_char(ch))
        };
        Arc::new(CuspidalLabel::quadratic(id, ch, Parity::Even))
    }

    pub fn block_lengths(kind: GroupKind, k: u32) -> impl Iterator<Item = u32> {
        (1..=k).map(move |i| match kind {
            GroupKind::SoOdd => 2 * i,
            GroupKind::Sp => 2 * i - 1,
        })
    }

    pub fn expand(&self, kind: GroupKind, space: QuadCharSpace) -> Result<JordanSet> {
        let mut blocks = Vec::new();
        for &(ch, k) in &self.lines {
            let rho = LadderSpec::label(space, ch);
            for m in LadderSpec::block_lengths(kind, k) {
                blocks.push(JordanBlock::new(rho.clone(), m)?);
            }
        }
        JordanSet::new(blocks)
    }

    pub fn family(&self, kind: GroupKind) -> GroupFamily {
        let dim: u64 = self
            .lines
            .iter()
            .map(|&(_, k)| match kind {
                GroupKind::SoOdd => k as u64 * (k as u64 + 1),
                GroupKind::Sp => k as u64 * k as u64,
            })
            .sum();
        GroupFamily::new(kind, kind.rank_for_dimension(dim).unwrap_or(0))
    }
}

impl fmt::Display for LadderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lines
            .iter()
            .map(|(ch, k)| format!("{}:k={k}", ch.0))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// All `(k_ψ)` over the characters of `space` (zero meaning absent) with
/// `Σ w(k_ψ) = target`, as ladder specs.
fn ladder_tuples(
    space: QuadCharSpace,
    target: u64,
    weight: impl Fn(u32) -> u64,
) -> Vec<LadderSpec> {
    let chars: Vec<QuadChar> = space.characters().collect();
    let mut out = Vec::new();
    let mut ks = vec![0u32; chars.len()];
    fn rec(
        i: usize,
        left: u64,
        chars: &[QuadChar],
        ks: &mut Vec<u32>,
        weight: &dyn Fn(u32) -> u64,
        out: &mut Vec<LadderSpec>,
    ) {
        if i == chars.len() {
            if left == 0 {
                let lines = chars
                    .iter()
                    .zip(ks.iter())
                    .filter(|(_, &k)| k > 0)
                    .map(|(&c, &k)| (c, k))
                    .collect();
                out.push(LadderSpec { lines });
            }
            return;
        }
        let mut k = 0;
        while weight(k) <= left {
            ks[i] = k;
            rec(i + 1, left - weight(k), chars, ks, weight, out);
            k += 1;
        }
        ks[i] = 0;
    }
    rec(0, target, &chars, &mut ks, &weight, &mut out);
    out
}

fn floor_sum(spec: &LadderSpec) -> u32 {
    spec.lines.iter().map(|&(_, k)| k.div_ceil(2)).sum()
}

/// Ladder specs meeting the dimension equation and the arithmetic
/// conditions for a cuspidal and a minimal-parabolic member.
pub fn antipodal_candidates(kind: GroupKind, n: u32, space: QuadCharSpace) -> Vec<LadderSpec> {
    match kind {
        GroupKind::SoOdd => ladder_tuples(space, 2 * n as u64, |k| k as u64 * (k as u64 + 1))
            .into_iter()
            .filter(|s| floor_sum(s).is_multiple_of(2))
            .collect(),
        GroupKind::Sp => ladder_tuples(space, 2 * n as u64 + 1, |k| k as u64 * k as u64)
            .into_iter()
            .filter(|s| {
                s.lines.iter().all(|&(ch, k)| {
                    if ch.is_trivial() {
                        k % 2 == 1
                    } else {
                        k % 2 == 0
                    }
                }) && s.lines.iter().any(|(ch, _)| ch.is_trivial())
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntipodesVerdict {
    pub exists: bool,
    pub witness: Option<LadderSpec>,
    /// False for Sp outside odd residual characteristic (more than four
    /// quadratic characters), where no answer is claimed.
    pub within_hypothesis: bool,
}

pub fn proposition_applies(kind: GroupKind, space: QuadCharSpace) -> bool {
    kind == GroupKind::SoOdd || space.dim() == 2
}

/// Arithmetic route.
pub fn exists_antipodal_packet(kind: GroupKind, n: u32, space: QuadCharSpace) -> AntipodesVerdict {
    let witness = antipodal_candidates(kind, n, space).into_iter().next();
    AntipodesVerdict {
        exists: witness.is_some(),
        witness,
        within_hypothesis: proposition_applies(kind, space),
    }
}

/// Packet route, with per-line results cached across specs.
#[derive(Debug, Default)]
pub struct PacketSearch {
    /// `(kind, k, trivial line)` → parities of the number of −1 signs among
    /// sign vectors that reduce the line to its rank-zero part.
    cache: HashMap<(GroupKind, u32, bool), BTreeSet<bool>>,
}

impl PacketSearch {
    pub fn new() -> Self {
        PacketSearch::default()
    }

    fn line_parities(&mut self, kind: GroupKind, k: u32, trivial: bool) -> &BTreeSet<bool> {
        self.cache.entry((kind, k, trivial)).or_insert_with(|| {
            let rho = Arc::new(CuspidalLabel::quadratic(
                "line",
                QuadChar(u16::from(!trivial)),
                Parity::Even,
            ));
            let ms: Vec<u32> = LadderSpec::block_lengths(kind, k).collect();
            let mut found = BTreeSet::new();
            for signs in 0u64..(1u64 << k) {
                let blocks: Vec<(u32, bool)> = ms
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| (m, signs >> i & 1 == 1))
                    .collect();
                let rest = reduce_line(&rho, &blocks).remaining;
                let target_reached = match (kind, trivial) {
                    (GroupKind::Sp, true) => rest.len() == 1 && rest[0].0 == 1,
                    _ => rest.is_empty(),
                };
                if target_reached {
                    found.insert(signs.count_ones() % 2 == 1);
                }
            }
            found
        })
    }

    /// Whether the packet of `spec` has a member on the minimal parabolic.
    pub fn has_minimal_parabolic_member(&mut self, kind: GroupKind, spec: &LadderSpec) -> bool {
        let mut reachable = BTreeSet::from([false]);
        for &(ch, k) in &spec.lines {
            let line = self.line_parities(kind, k, ch.is_trivial()).clone();
            if line.is_empty() {
                return false;
            }
            reachable = reachable
                .iter()
                .flat_map(|&a| line.iter().map(move |&b| a != b))
                .collect();
        }
        match kind {
            // A character must be trivial on the product of all blocks.
            GroupKind::SoOdd => reachable.contains(&false),
            GroupKind::Sp => !reachable.is_empty(),
        }
    }

    /// Every ladder Jordan set of the rank with a cuspidal and a
    /// minimal-parabolic member.
    pub fn antipodal_ladders(
        &mut self,
        kind: GroupKind,
        n: u32,
        space: QuadCharSpace,
    ) -> Result<Vec<LadderSpec>> {
        let specs = match kind {
            GroupKind::SoOdd => ladder_tuples(space, 2 * n as u64, |k| k as u64 * (k as u64 + 1)),
            GroupKind::Sp => ladder_tuples(space, 2 * n as u64 + 1, |k| k as u64 * k as u64)
                .into_iter()
                .filter(|s| {
                    s.lines
                        .iter()
                        .filter(|(_, k)| k % 2 == 1)
                        .fold(QuadChar::TRIVIAL, |acc, (ch, _)| acc.times(*ch))
                        .is_trivial()
                })
                .collect(),
        };
        let mut out = Vec::new();
        for spec in specs {
            let fam = GroupFamily::new(kind, n);
            let jord = spec.expand(kind, space)?;
            if ComponentGroup::new(fam, jord)?.count_cuspidal() == 0 {
                continue;
            }
            if self.has_minimal_parabolic_member(kind, &spec) {
                out.push(spec);
            }
        }
        Ok(out)
    }
}

/// Packet route as a verdict.
pub fn packet_level_antipodes(
    kind: GroupKind,
    n: u32,
    space: QuadCharSpace,
) -> Result<AntipodesVerdict> {
    let witness = PacketSearch::new()
        .antipodal_ladders(kind, n, space)?
        .into_iter()
        .next();
    Ok(AntipodesVerdict {
        exists: witness.is_some(),
        witness,
        within_hypothesis: proposition_applies(kind, space),
    })
}

/// Iwahori packets of Sp(2n) with antipodes: `2n+1 = a² + b²`.
pub fn iwahori_antipodes_sp(n: u32) -> bool {
    is_sum_of_two_squares(2 * n as u64 + 1)
}

/// Iwahori packets of SO(2n+1) with antipodes: `2n = k1(k1+1) + k2(k2+1)`
/// with `⌊(k1+1)/2⌋ + ⌊(k2+1)/2⌋` even.
pub fn iwahori_antipodes_so(n: u32) -> bool {
    let target = 2 * n as u64;
    (0..)
        .take_while(|k1| k1 * (k1 + 1) <= target)
        .any(|k1: u64| {
            let r = target - k1 * (k1 + 1);
            let k2 = (isqrt(4 * r + 1) - 1) / 2;
            k2 * (k2 + 1) == r && (k1.div_ceil(2) + k2.div_ceil(2)).is_multiple_of(2)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_squares_rule() {
        assert!(!is_sum_of_three_squares(7));
        assert!(is_sum_of_three_squares(6));
        assert!(!is_sum_of_three_squares(28));
        assert!(is_sum_of_three_squares(0));
    }

    #[test]
    fn gauss() {
        assert_eq!(gauss_decomposition_sp(0), (0, 0, 0, 0));
        assert_eq!(gauss_decomposition_sp(6), (0, 2, 1, 1));
        assert_eq!(gauss_decomposition_sp(7), (1, 2, 1, 0));
    }

    #[test]
    fn iwahori() {
        assert!(iwahori_antipodes_sp(4));
        assert!(iwahori_antipodes_sp(6));
        assert!(!iwahori_antipodes_sp(1));
        assert!(!iwahori_antipodes_so(1));
        assert!(iwahori_antipodes_so(2));
        for k in 1..10u32 {
            assert!(iwahori_antipodes_so(k * (k + 1)));
        }
    }

    #[test]
    fn small_candidates() {
        let q = QuadCharSpace::default();
        assert!(antipodal_candidates(GroupKind::SoOdd, 1, q).is_empty());
        let so2 = antipodal_candidates(GroupKind::SoOdd, 2, q);
        assert!(so2
            .iter()
            .all(|s| s.lines.len() == 2 && s.lines.iter().all(|l| l.1 == 1)));
        assert!(!so2.is_empty());
        let sp4 = antipodal_candidates(GroupKind::Sp, 4, q);
        assert!(sp4.contains(&LadderSpec {
            lines: vec![(QuadChar(0), 3)]
        }));
        assert!(antipodal_candidates(GroupKind::Sp, 1, q).is_empty());
    }

    #[test]
    fn routes_agree_small() {
        let q = QuadCharSpace::default();
        for kind in [GroupKind::SoOdd, GroupKind::Sp] {
            for n in 1..=12 {
                let a = exists_antipodal_packet(kind, n, q).exists;
                let b = packet_level_antipodes(kind, n, q).unwrap().exists;
                assert_eq!(a, b, "{kind} {n}");
                assert_eq!(a, n % 2 == 0, "{kind} {n}");
            }
        }
    }
}
