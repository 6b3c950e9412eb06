//! Component groups attached to Jordan sets and their characters.
//!
//! Elements of `2^Jord` are subsets of the Jordan set, packed as bit masks over
//! the block order of [`JordanSet`] (sorted by `(rho id, m)`).
//!
//! * Sp: the group is the subgroup of subsets with even total dimension. The
//!   canonical basis is the singletons of even-dimensional blocks followed by
//!   consecutive pairs of odd-dimensional blocks. A character is stored as a
//!   representative function `Jord → {±1}`; representatives differing by the
//!   dimension-parity function λ give the same character. There is an odd
//!   number of odd-dimensional blocks, so exactly one of the two is trivial on
//!   the product of all blocks; that one is the canonical representative.
//! * SO: the group is `2^Jord / {∅, Jord}`. Its characters are the characters
//!   of `2^Jord` that are trivial on the full product, and the basis is the
//!   singletons (a basis of `2^Jord`), so coordinates read as `φ(ε1, ..., εk)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{self, Equation};
use crate::jordan::{a_minus, ensure_valid, has_gaps, JordanSet};
use crate::label::{GroupFamily, GroupKind};

/// Subset of a Jordan set, bit `i` standing for the `i`-th block.
pub type BlockMask = u64;

pub const MAX_BLOCKS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    /// Parses a signed bit string such as `+-+`.
    pub fn parse_string(s: &str) -> Result<Vec<Sign>> {
        s.trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(Error::Parse(format!(
                    "signed bit string {s:?} may only contain + and -"
                ))),
            })
            .collect()
    }

    pub fn format_string(signs: &[Sign]) -> String {
        signs.iter().map(|s| s.symbol()).collect()
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() != rhs.is_minus())
    }
}

/// A character of a [`ComponentGroup`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentCharacter {
    /// Blocks on which the canonical representative takes the value −1.
    minus: BlockMask,
    values_on_basis: Vec<Sign>,
}

impl ComponentCharacter {
    pub fn values_on_basis(&self) -> &[Sign] {
        &self.values_on_basis
    }

    /// Canonical representative as a function on blocks.
    pub fn representative(&self) -> BlockMask {
        self.minus
    }

    pub fn sign_on_block(&self, index: usize) -> Sign {
        Sign::from_parity(self.minus >> index & 1 == 1)
    }

    pub fn signs(&self) -> String {
        Sign::format_string(&self.values_on_basis)
    }

    pub fn is_trivial(&self) -> bool {
        self.values_on_basis.iter().all(|s| *s == Sign::Plus)
    }
}

impl fmt::Display for ComponentCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self
            .values_on_basis
            .iter()
            .map(|s| s.value().to_string())
            .collect();
        write!(f, "φ({})", vals.join(","))
    }
}

impl Serialize for ComponentCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.signs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGroup {
    family: GroupFamily,
    jord: JordanSet,
    basis: Vec<BlockMask>,
    odd_mask: BlockMask,
}

impl ComponentGroup {
    /// Component group with the canonical basis.
    pub fn new(family: GroupFamily, jord: JordanSet) -> Result<Self> {
        let mut g = ComponentGroup::unchecked(family, jord)?;
        g.basis = g.canonical_basis();
        Ok(g)
    }

    /// Component group with an explicitly chosen basis.
    pub fn with_basis(family: GroupFamily, jord: JordanSet, basis: Vec<BlockMask>) -> Result<Self> {
        let mut g = ComponentGroup::unchecked(family, jord)?;
        let full = g.full_mask();
        for &b in &basis {
            if b & !full != 0 {
                return Err(Error::InvalidBasis(format!(
                    "element {b:#b} names missing blocks"
                )));
            }
            if !g.contains(b) {
                return Err(Error::InvalidBasis(format!(
                    "{} is not in the component group",
                    g.describe(b)
                )));
            }
        }
        let expected = g.basis_len();
        if basis.len() != expected || gf2::rank(&basis) != expected {
            return Err(Error::InvalidBasis(format!(
                "expected {expected} independent elements, got {} of rank {}",
                basis.len(),
                gf2::rank(&basis)
            )));
        }
        g.basis = basis;
        Ok(g)
    }

    fn unchecked(family: GroupFamily, jord: JordanSet) -> Result<Self> {
        ensure_valid(family, &jord)?;
        if jord.len() > MAX_BLOCKS {
            return Err(Error::TooManyBlocks(jord.len()));
        }
        let odd_mask = jord
            .iter()
            .enumerate()
            .filter(|(_, b)| b.dimension() % 2 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i);
        Ok(ComponentGroup {
            family,
            jord,
            basis: Vec::new(),
            odd_mask,
        })
    }

    fn canonical_basis(&self) -> Vec<BlockMask> {
        let n = self.jord.len();
        match self.family.kind {
            GroupKind::SoOdd => (0..n).map(|i| 1 << i).collect(),
            GroupKind::Sp => {
                let mut basis: Vec<BlockMask> = (0..n)
                    .filter(|i| self.odd_mask >> i & 1 == 0)
                    .map(|i| 1 << i)
                    .collect();
                let odd: Vec<usize> = (0..n).filter(|i| self.odd_mask >> i & 1 == 1).collect();
                basis.extend(odd.windows(2).map(|w| (1 << w[0]) | (1 << w[1])));
                basis
            }
        }
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn jord(&self) -> &JordanSet {
        &self.jord
    }

    pub fn basis(&self) -> &[BlockMask] {
        &self.basis
    }

    pub fn full_mask(&self) -> BlockMask {
        if self.jord.is_empty() {
            0
        } else {
            u64::MAX >> (64 - self.jord.len())
        }
    }

    /// Number of coordinates of a character.
    fn basis_len(&self) -> usize {
        let n = self.jord.len();
        match self.family.kind {
            GroupKind::SoOdd => n,
            GroupKind::Sp if self.odd_mask != 0 => n - 1,
            GroupKind::Sp => n,
        }
    }

    /// Dimension of the group as an F_2-vector space.
    pub fn rank(&self) -> usize {
        let n = self.jord.len();
        match self.family.kind {
            GroupKind::SoOdd => n.saturating_sub(1),
            GroupKind::Sp if self.odd_mask != 0 => n - 1,
            GroupKind::Sp => n,
        }
    }

    pub fn order(&self) -> u64 {
        1u64 << self.rank()
    }

    /// Mask of the named blocks.
    pub fn element(&self, blocks: &[(&str, u32)]) -> Result<BlockMask> {
        blocks.iter().try_fold(0, |acc, (id, m)| {
            self.jord
                .index_of(id, *m)
                .map(|i| acc ^ (1 << i))
                .ok_or_else(|| Error::NotInJordanSet {
                    rho: id.to_string(),
                    m: *m,
                })
        })
    }

    /// Parses a whitespace-separated product such as `triv:1 triv:3`.
    pub fn parse_element(&self, text: &str) -> Result<BlockMask> {
        let mut pairs = Vec::new();
        for tok in text.split_whitespace() {
            let (id, m) = tok
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected <rho-id>:<m>, got {tok:?}")))?;
            let m: u32 = m
                .parse()
                .map_err(|_| Error::Parse(format!("bad block length in {tok:?}")))?;
            pairs.push((id, m));
        }
        self.element(&pairs)
    }

    pub fn describe(&self, e: BlockMask) -> String {
        let parts: Vec<String> = self
            .jord
            .iter()
            .enumerate()
            .filter(|(i, _)| e >> i & 1 == 1)
            .map(|(_, b)| format!("δ({},{})", b.rho.id, b.m))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("")
        }
    }

    pub fn contains(&self, e: BlockMask) -> bool {
        if e & !self.full_mask() != 0 {
            return false;
        }
        match self.family.kind {
            GroupKind::SoOdd => true,
            GroupKind::Sp => !gf2::parity(e & self.odd_mask),
        }
    }

    /// Character with the given coordinates on the basis.
    pub fn character(&self, values: &[Sign]) -> Result<ComponentCharacter> {
        if values.len() != self.basis.len() {
            return Err(Error::InvalidCharacter(format!(
                "expected {} values, got {}",
                self.basis.len(),
                values.len()
            )));
        }
        let n = self.jord.len();
        let mut eqs: Vec<Equation> = self
            .basis
            .iter()
            .zip(values)
            .map(|(&b, v)| Equation::new(b, v.is_minus()))
            .collect();
        if self.family.kind == GroupKind::Sp && self.odd_mask != 0 {
            eqs.push(Equation::new(self.odd_mask, false));
        }
        let sol = gf2::solve(&eqs, n)
            .ok_or_else(|| Error::InvalidCharacter("inconsistent basis values".into()))?;
        debug_assert!(sol.kernel.is_empty());
        self.character_from_function(sol.particular)
    }

    /// Character defined by the function that is −1 exactly on `minus`.
    pub fn character_from_function(&self, minus: BlockMask) -> Result<ComponentCharacter> {
        let mut minus = minus & self.full_mask();
        match self.family.kind {
            GroupKind::SoOdd => {
                if gf2::parity(minus) {
                    return Err(Error::InvalidCharacter(
                        "not trivial on the product of all Jordan blocks".into(),
                    ));
                }
            }
            GroupKind::Sp => {
                if gf2::parity(minus & self.odd_mask) {
                    minus ^= self.odd_mask;
                }
            }
        }
        let values_on_basis = self
            .basis
            .iter()
            .map(|&b| Sign::from_parity(gf2::parity(minus & b)))
            .collect();
        Ok(ComponentCharacter {
            minus,
            values_on_basis,
        })
    }

    /// All characters, ordered by their coordinates read as a binary counter
    /// (`+` = 0, first basis element = lowest bit).
    pub fn characters(&self) -> Vec<ComponentCharacter> {
        let k = self.basis.len();
        let mut out = Vec::with_capacity(self.order() as usize);
        for c in 0u64..(1u64 << k) {
            let values: Vec<Sign> = (0..k).map(|j| Sign::from_parity(c >> j & 1 == 1)).collect();
            if let Ok(chi) = self.character(&values) {
                out.push(chi);
            }
        }
        out
    }

    pub fn evaluate(&self, chi: &ComponentCharacter, e: BlockMask) -> Result<Sign> {
        if !self.contains(e) {
            return Err(Error::NotInComponentGroup(self.describe(e)));
        }
        Ok(Sign::from_parity(gf2::parity(chi.minus & e)))
    }

    pub fn is_cuspidal(&self, chi: &ComponentCharacter) -> bool {
        is_cuspidal_function(&self.jord, chi.minus)
    }

    /// The cuspidal characters, found by solving the defining conditions as
    /// an affine system over F_2.
    pub fn cuspidal_characters(&self) -> Vec<ComponentCharacter> {
        match self.cuspidal_solution_space() {
            None => Vec::new(),
            Some(sol) => sol
                .iter()
                .map(|f| {
                    self.character_from_function(f)
                        .expect("solutions satisfy the group constraint")
                })
                .collect(),
        }
    }

    pub fn count_cuspidal(&self) -> u64 {
        self.cuspidal_solution_space()
            .map_or(0, |sol| 1u64 << sol.kernel.len())
    }

    fn cuspidal_solution_space(&self) -> Option<gf2::AffineSolution> {
        if has_gaps(&self.jord) {
            return None;
        }
        let mut eqs = cuspidal_equations(&self.jord);
        match self.family.kind {
            GroupKind::SoOdd => eqs.push(Equation::new(self.full_mask(), false)),
            GroupKind::Sp if self.odd_mask != 0 => eqs.push(Equation::new(self.odd_mask, false)),
            GroupKind::Sp => {}
        }
        gf2::solve(&eqs, self.jord.len())
    }

    pub fn describe_basis(&self) -> Vec<String> {
        self.basis.iter().map(|&b| self.describe(b)).collect()
    }
}

/// Conditions (2) and (3) of a cuspidal character as linear equations on the
/// −1 set of a representative.
fn cuspidal_equations(jord: &JordanSet) -> Vec<Equation> {
    let mut eqs = Vec::new();
    for (i, b) in jord.iter().enumerate() {
        if b.m == 2 {
            eqs.push(Equation::new(1 << i, true));
        }
        if let Some(lower) = a_minus(jord, &b.rho.id, b.m).expect("block is a member") {
            let j = jord.index_of(&b.rho.id, lower).expect("a_- is a member");
            eqs.push(Equation::new((1 << i) | (1 << j), true));
        }
    }
    eqs
}

/// Cuspidal-character test on the −1 set of a function `Jord → {±1}`.
pub fn is_cuspidal_function(jord: &JordanSet, minus: BlockMask) -> bool {
    !has_gaps(jord)
        && cuspidal_equations(jord)
            .iter()
            .all(|e| gf2::parity(e.coeffs & minus) == e.rhs)
}

pub fn component_group(fam: GroupFamily, jord: &JordanSet) -> Result<ComponentGroup> {
    ComponentGroup::new(fam, jord.clone())
}

pub fn characters(g: &ComponentGroup) -> Vec<ComponentCharacter> {
    g.characters()
}

pub fn evaluate(g: &ComponentGroup, chi: &ComponentCharacter, e: BlockMask) -> Result<Sign> {
    g.evaluate(chi, e)
}

pub fn is_cuspidal_character(g: &ComponentGroup, chi: &ComponentCharacter) -> bool {
    g.is_cuspidal(chi)
}

pub fn count_cuspidal_characters(fam: GroupFamily, jord: &JordanSet) -> Result<u64> {
    Ok(ComponentGroup::new(fam, jord.clone())?.count_cuspidal())
}

/// JSON view of a group: family, blocks and the basis in words.
#[derive(Debug, Serialize)]
pub struct GroupSummary {
    pub family: String,
    pub jord: Vec<String>,
    pub basis: Vec<String>,
    pub order: u64,
}

impl From<&ComponentGroup> for GroupSummary {
    fn from(g: &ComponentGroup) -> Self {
        GroupSummary {
            family: g.family.to_string(),
            jord: g.jord.iter().map(|b| b.to_string()).collect(),
            basis: g.describe_basis(),
            order: g.order(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{CuspidalLabel, Parity, PhiType, QuadChar};
    use std::collections::BTreeSet;
    use std::sync::Arc;

    fn q(id: &str, ch: u16) -> Arc<CuspidalLabel> {
        Arc::new(CuspidalLabel::quadratic(id, QuadChar(ch), Parity::Even))
    }

    fn set(blocks: &[(&Arc<CuspidalLabel>, u32)]) -> JordanSet {
        JordanSet::new(
            blocks
                .iter()
                .map(|(r, m)| crate::jordan::JordanBlock::new((*r).clone(), *m).unwrap()),
        )
        .unwrap()
    }

    /// Counts cuspidal characters by running over every function on the
    /// blocks, keeping those that define a character, and grouping them by
    /// their values on the whole group.
    fn brute_force_cuspidal(g: &ComponentGroup) -> usize {
        let n = g.jord().len();
        let members: Vec<BlockMask> = (0..1u64 << n).filter(|&e| g.contains(e)).collect();
        let mut seen = BTreeSet::new();
        for f in 0..1u64 << n {
            if g.family().kind == GroupKind::SoOdd && (f.count_ones() % 2 == 1) {
                continue;
            }
            if !is_cuspidal_function(g.jord(), f) {
                continue;
            }
            let values: Vec<bool> = members
                .iter()
                .map(|&e| (f & e).count_ones() % 2 == 1)
                .collect();
            seen.insert(values);
        }
        seen.len()
    }

    #[test]
    fn ex_symp_1_group() {
        let t = q("triv", 0);
        let g = ComponentGroup::new(GroupFamily::sp(4), set(&[(&t, 1), (&t, 3), (&t, 5)])).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(
            g.describe_basis(),
            ["δ(triv,1)δ(triv,3)", "δ(triv,3)δ(triv,5)"]
        );
        assert!(!g.contains(g.element(&[("triv", 1)]).unwrap()));
        assert_eq!(g.count_cuspidal(), 1);
        let cusp = g.cuspidal_characters();
        assert_eq!(cusp.len(), 1);
        assert_eq!(cusp[0].signs(), "--");
    }

    #[test]
    fn counts_match_brute_force() {
        let (t, a, b, c) = (q("triv", 0), q("psi1", 1), q("psi2", 2), q("psi3", 3));
        let r = Arc::new(
            CuspidalLabel::new("rho", 2, PhiType::Symplectic, QuadChar(0), Parity::Odd).unwrap(),
        );
        let cases = [
            (GroupFamily::sp(4), set(&[(&t, 1), (&t, 3), (&t, 5)])),
            (GroupFamily::sp(2), set(&[(&t, 1), (&a, 1), (&a, 3)])),
            (GroupFamily::sp(6), set(&[(&t, 1), (&r, 2), (&r, 4)])),
            (
                GroupFamily::sp(6),
                set(&[(&t, 1), (&t, 3), (&t, 5), (&a, 1), (&a, 3)]),
            ),
            (GroupFamily::sp(1), set(&[(&a, 1), (&b, 1), (&c, 1)])),
            (GroupFamily::so(2), set(&[(&a, 2), (&b, 2)])),
            (GroupFamily::so(3), set(&[(&a, 2), (&b, 2), (&c, 2)])),
            (
                GroupFamily::so(6),
                set(&[(&a, 2), (&a, 4), (&b, 2), (&b, 4)]),
            ),
            (GroupFamily::so(4), set(&[(&a, 2), (&a, 6)])),
        ];
        for (fam, j) in cases {
            let g = ComponentGroup::new(fam, j.clone()).unwrap();
            let expected = brute_force_cuspidal(&g);
            assert_eq!(g.count_cuspidal() as usize, expected, "{fam} {j}");
            assert_eq!(g.cuspidal_characters().len(), expected, "{fam} {j}");
        }
    }

    #[test]
    fn gaps_mean_no_cuspidal() {
        let a = q("psi1", 1);
        let g = ComponentGroup::new(GroupFamily::so(4), set(&[(&a, 2), (&a, 6)])).unwrap();
        assert_eq!(g.count_cuspidal(), 0);
    }

    #[test]
    fn characters_cover_group_and_multiply() {
        let (a, b, c) = (q("psi1", 1), q("psi2", 2), q("psi3", 3));
        let g = ComponentGroup::new(GroupFamily::so(3), set(&[(&a, 2), (&b, 2), (&c, 2)])).unwrap();
        let chars = g.characters();
        assert_eq!(chars.len() as u64, g.order());
        assert_eq!(chars.iter().collect::<BTreeSet<_>>().len(), chars.len());
        for chi in &chars {
            assert_eq!(chi.representative().count_ones() % 2, 0);
            for e1 in 0..8u64 {
                for e2 in 0..8u64 {
                    let lhs = g.evaluate(chi, e1 ^ e2).unwrap();
                    let rhs = g.evaluate(chi, e1).unwrap() * g.evaluate(chi, e2).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sp_representative_is_trivial_on_product() {
        let (t, a) = (q("triv", 0), q("psi1", 1));
        let g = ComponentGroup::new(GroupFamily::sp(2), set(&[(&t, 1), (&a, 1), (&a, 3)])).unwrap();
        for chi in g.characters() {
            assert_eq!(chi.representative().count_ones() % 2, 0);
        }
        // Flipping by the odd blocks gives the same character.
        let chi = g.character_from_function(0b001).unwrap();
        assert_eq!(chi, g.character_from_function(0b110).unwrap());
        assert!(g.evaluate(&chi, 0b001).is_err());
    }

    #[test]
    fn explicit_basis_is_checked() {
        let t = q("triv", 0);
        let j = set(&[(&t, 1), (&t, 3), (&t, 5)]);
        assert!(
            ComponentGroup::with_basis(GroupFamily::sp(4), j.clone(), vec![0b011, 0b101]).is_ok()
        );
        assert!(
            ComponentGroup::with_basis(GroupFamily::sp(4), j.clone(), vec![0b011, 0b011]).is_err()
        );
        assert!(ComponentGroup::with_basis(GroupFamily::sp(4), j, vec![0b001, 0b011]).is_err());
    }

    #[test]
    fn sign_strings() {
        let s = Sign::parse_string("+-").unwrap();
        assert_eq!(s, [Sign::Plus, Sign::Minus]);
        assert_eq!(Sign::format_string(&s), "+-");
        assert!(Sign::parse_string("+x").is_err());
    }
}
