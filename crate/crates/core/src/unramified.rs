//! Pairs of partitions into distinct parts parameterizing unramified strongly
//! negative (and isolated) representations, with exact counts.
//!
//! For `Sp(2n)` a parameter is `(p1, p2)` with distinct odd parts,
//! `Σp1 + Σp2 = 2n+1` and `|p2|` even. The SO variant uses distinct even parts
//! summing to `2n` and has no condition on `|p2|`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jordan::{ensure_valid, JordanBlock, JordanSet};
use crate::label::{CuspidalLabel, GroupFamily, GroupKind};

/// Largest rank accepted by [`enumerate_sn_params`].
pub const ENUMERATION_LIMIT: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnramifiedParam {
    pub p1: Vec<u32>,
    pub p2: Vec<u32>,
}

impl fmt::Display for UnramifiedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "p1=[{}] p2=[{}]", list(&self.p1), list(&self.p2))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IsolationConstraint {
    /// No two parts of the same partition differ by 2.
    pub no_consecutive: bool,
    pub exclude_three: bool,
}

impl IsolationConstraint {
    pub const NONE: IsolationConstraint = IsolationConstraint {
        no_consecutive: false,
        exclude_three: false,
    };
    pub const ISOLATED: IsolationConstraint = IsolationConstraint {
        no_consecutive: true,
        exclude_three: true,
    };

    pub fn admits(&self, parts: &[u32]) -> bool {
        if self.exclude_three && parts.contains(&3) {
            return false;
        }
        !(self.no_consecutive && parts.windows(2).any(|w| w[1] == w[0] + 2))
    }
}

fn total(kind: GroupKind, n: u32) -> u32 {
    kind.dual_dimension(n) as u32
}

fn smallest_part(kind: GroupKind) -> u32 {
    match kind {
        GroupKind::Sp => 1,
        GroupKind::SoOdd => 2,
    }
}

fn needs_even_p2(kind: GroupKind) -> bool {
    kind == GroupKind::Sp
}

/// `table[s][c]`: partitions of `s` into distinct parts `first, first+2, ...`
/// admitted by `cons`, with number of parts ≡ `c` (mod 2).
fn distinct_part_table(first: u32, max_sum: u32, cons: IsolationConstraint) -> Vec<[BigUint; 2]> {
    let size = max_sum as usize + 1;
    // State: (sum, parity, previous candidate part taken).
    let mut cur = vec![
        [
            [BigUint::zero(), BigUint::zero()],
            [BigUint::zero(), BigUint::zero()]
        ];
        size
    ];
    cur[0][0][0] = BigUint::one();
    let mut part = first;
    while part <= max_sum {
        let allowed = !(cons.exclude_three && part == 3);
        let mut next = vec![
            [
                [BigUint::zero(), BigUint::zero()],
                [BigUint::zero(), BigUint::zero()]
            ];
            size
        ];
        for s in 0..size {
            for c in 0..2 {
                for taken in 0..2 {
                    let v = &cur[s][c][taken];
                    if v.is_zero() {
                        continue;
                    }
                    next[s][c][0] += v;
                    let blocked = cons.no_consecutive && taken == 1;
                    let t = s + part as usize;
                    if allowed && !blocked && t < size {
                        next[t][1 - c][1] += v;
                    }
                }
            }
        }
        cur = next;
        part += 2;
    }
    cur.into_iter()
        .map(|[even, odd]| [&even[0] + &even[1], &odd[0] + &odd[1]])
        .collect()
}

pub fn count_with(fam: GroupFamily, cons: IsolationConstraint) -> BigUint {
    let target = total(fam.kind, fam.rank);
    let table = distinct_part_table(smallest_part(fam.kind), target, cons);
    let mut sum = BigUint::zero();
    for s in 0..=target as usize {
        let p1 = &table[s][0] + &table[s][1];
        let rest = &table[target as usize - s];
        let p2 = if needs_even_p2(fam.kind) {
            rest[0].clone()
        } else {
            &rest[0] + &rest[1]
        };
        sum += p1 * p2;
    }
    sum
}

pub fn count_strongly_negative(fam: GroupFamily) -> BigUint {
    count_with(fam, IsolationConstraint::NONE)
}

pub fn count_isolated(fam: GroupFamily) -> BigUint {
    count_with(fam, IsolationConstraint::ISOLATED)
}

fn distinct_partitions(sum: u32, min_part: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if sum == 0 {
        out.push(acc.clone());
        return;
    }
    let mut p = min_part;
    while p <= sum {
        acc.push(p);
        distinct_partitions(sum - p, p + 2, acc, out);
        acc.pop();
        p += 2;
    }
}

/// Every parameter of the given rank, sorted by `(p2, p1)`.
pub fn enumerate_sn_params(fam: GroupFamily) -> Result<Vec<UnramifiedParam>> {
    if fam.rank > ENUMERATION_LIMIT {
        return Err(Error::RankTooLarge {
            rank: fam.rank,
            limit: ENUMERATION_LIMIT,
        });
    }
    let target = total(fam.kind, fam.rank);
    let first = smallest_part(fam.kind);
    let mut parts_by_sum: Vec<Vec<Vec<u32>>> = Vec::new();
    for s in 0..=target {
        let mut out = Vec::new();
        distinct_partitions(s, first, &mut Vec::new(), &mut out);
        parts_by_sum.push(out);
    }
    let mut params = Vec::new();
    for s in 0..=target as usize {
        for p1 in &parts_by_sum[s] {
            for p2 in &parts_by_sum[target as usize - s] {
                if needs_even_p2(fam.kind) && p2.len() % 2 == 1 {
                    continue;
                }
                params.push(UnramifiedParam {
                    p1: p1.clone(),
                    p2: p2.clone(),
                });
            }
        }
    }
    params.sort_by(|a, b| (&a.p2, &a.p1).cmp(&(&b.p2, &b.p1)));
    Ok(params)
}

pub fn is_isolated(p: &UnramifiedParam) -> bool {
    IsolationConstraint::ISOLATED.admits(&p.p1) && IsolationConstraint::ISOLATED.admits(&p.p2)
}

/// `δ(1, a)` for `a ∈ p1` and `δ(ψ_un, b)` for `b ∈ p2`.
pub fn param_to_jordan(
    kind: GroupKind,
    p: &UnramifiedParam,
    triv: &Arc<CuspidalLabel>,
    psi_un: &Arc<CuspidalLabel>,
) -> Result<(GroupFamily, JordanSet)> {
    let blocks =
        p.p1.iter()
            .map(|&a| JordanBlock::new(triv.clone(), a))
            .chain(p.p2.iter().map(|&b| JordanBlock::new(psi_un.clone(), b)))
            .collect::<Result<Vec<_>>>()?;
    let jord = JordanSet::new(blocks)?;
    let dim = jord.total_dimension();
    let rank = kind.rank_for_dimension(dim).ok_or_else(|| {
        Error::InvalidParam(format!(
            "{p} has total {dim}, of the wrong parity for {kind}"
        ))
    })?;
    let fam = GroupFamily::new(kind, rank);
    ensure_valid(fam, &jord)?;
    Ok((fam, jord))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sp_params() {
        let show = |n| -> Vec<String> {
            enumerate_sn_params(GroupFamily::sp(n))
                .unwrap()
                .iter()
                .map(|p| p.to_string())
                .collect()
        };
        assert_eq!(show(0), ["p1=[1] p2=[]"]);
        assert_eq!(show(1), ["p1=[3] p2=[]"]);
        assert_eq!(show(2), ["p1=[5] p2=[]", "p1=[1] p2=[1,3]"]);
    }

    #[test]
    fn small_counts() {
        let sn = |n| count_strongly_negative(GroupFamily::sp(n));
        let iso = |n| count_isolated(GroupFamily::sp(n));
        assert_eq!(sn(0), BigUint::from(1u32));
        assert_eq!(sn(1), BigUint::from(1u32));
        assert_eq!(sn(2), BigUint::from(2u32));
        assert_eq!(iso(1), BigUint::zero());
        assert_eq!(iso(2), BigUint::one());
    }

    #[test]
    fn rank_guard() {
        assert!(enumerate_sn_params(GroupFamily::sp(21)).is_err());
    }

    #[test]
    fn isolation_admits() {
        assert!(IsolationConstraint::ISOLATED.admits(&[1, 5, 9]));
        assert!(!IsolationConstraint::ISOLATED.admits(&[1, 3]));
        assert!(!IsolationConstraint::ISOLATED.admits(&[5, 7]));
        assert!(IsolationConstraint::NONE.admits(&[5, 7]));
    }
}
