//! Jordan blocks δ(ρ,m), Jordan sets, and their validity for a group family.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{CuspidalLabel, GroupFamily, GroupKind, PhiType, QuadChar};

/// δ(ρ,m): the self-dual square-integrable representation on the line of ρ
/// with segment length `m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JordanBlock {
    pub rho: Arc<CuspidalLabel>,
    pub m: u32,
}

impl JordanBlock {
    pub fn new(rho: Arc<CuspidalLabel>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parse(format!(
                "δ({}, 0): m must be positive",
                rho.id
            )));
        }
        Ok(JordanBlock { rho, m })
    }

    /// Dimension of Φ(ρ) ⊗ E_m.
    pub fn dimension(&self) -> u64 {
        self.rho.gl_rank as u64 * self.m as u64
    }

    pub fn phi_type(&self) -> PhiType {
        block_phi_type(self)
    }
}

impl fmt::Display for JordanBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.rho.id, self.m)
    }
}

impl Serialize for JordanBlock {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Orthogonal iff Φ(ρ) and E_m have the same type.
pub fn block_phi_type(b: &JordanBlock) -> PhiType {
    b.rho.phi_type.tensor(PhiType::of_sl2_rep(b.m))
}

/// A finite set of Jordan blocks, kept sorted by `(rho id, m)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JordanSet {
    blocks: Vec<JordanBlock>,
}

impl JordanSet {
    pub fn new(blocks: impl IntoIterator<Item = JordanBlock>) -> Result<Self> {
        let mut blocks: Vec<JordanBlock> = blocks.into_iter().collect();
        blocks.sort();
        for w in blocks.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateBlock {
                    rho: w[0].rho.id.clone(),
                    m: w[0].m,
                });
            }
        }
        Ok(JordanSet { blocks })
    }

    pub fn empty() -> Self {
        JordanSet::default()
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn iter(&self) -> std::slice::Iter<'_, JordanBlock> {
        self.blocks.iter()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn index_of(&self, rho_id: &str, m: u32) -> Option<usize> {
        self.blocks
            .binary_search_by(|b| (b.rho.id.as_str(), b.m).cmp(&(rho_id, m)))
            .ok()
    }

    pub fn contains(&self, rho_id: &str, m: u32) -> bool {
        self.index_of(rho_id, m).is_some()
    }

    pub fn total_dimension(&self) -> u64 {
        self.blocks.iter().map(JordanBlock::dimension).sum()
    }

    /// Sorted `m` values on the line of `rho_id`.
    pub fn line(&self, rho_id: &str) -> Vec<u32> {
        self.blocks
            .iter()
            .filter(|b| b.rho.id == rho_id)
            .map(|b| b.m)
            .collect()
    }

    /// The cuspidal lines present, each with its sorted `m` values.
    pub fn lines(&self) -> BTreeMap<&str, (Arc<CuspidalLabel>, Vec<u32>)> {
        let mut out: BTreeMap<&str, (Arc<CuspidalLabel>, Vec<u32>)> = BTreeMap::new();
        for b in &self.blocks {
            out.entry(b.rho.id.as_str())
                .or_insert_with(|| (b.rho.clone(), Vec::new()))
                .1
                .push(b.m);
        }
        out
    }

    pub fn without(&self, remove: &[(&str, u32)]) -> JordanSet {
        JordanSet {
            blocks: self
                .blocks
                .iter()
                .filter(|b| !remove.iter().any(|(id, m)| b.rho.id == *id && b.m == *m))
                .cloned()
                .collect(),
        }
    }

    pub fn with(&self, block: JordanBlock) -> Result<JordanSet> {
        JordanSet::new(self.blocks.iter().cloned().chain(std::iter::once(block)))
    }

    /// Parses `rho:m, rho:m, ...` (no family prefix), resolving ids with `lookup`.
    pub fn parse_blocks<F>(text: &str, mut lookup: F) -> Result<JordanSet>
    where
        F: FnMut(&str) -> Result<Arc<CuspidalLabel>>,
    {
        let mut blocks = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (id, m) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected <rho-id>:<m>, got {item:?}")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad block length in {item:?}")))?;
            blocks.push(JordanBlock::new(lookup(id.trim())?, m)?);
        }
        JordanSet::new(blocks)
    }
}

impl<'a> IntoIterator for &'a JordanSet {
    type Item = &'a JordanBlock;
    type IntoIter = std::slice::Iter<'a, JordanBlock>;
    fn into_iter(self) -> Self::IntoIter {
        self.blocks.iter()
    }
}

impl fmt::Display for JordanSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for JordanSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.blocks.iter())
    }
}

/// Parses the `<family><rank>: <rho-id>:<m>[, ...]` grammar, e.g.
/// `Sp4: triv:1, triv:3, triv:5`.
pub fn parse_family_and_set<F>(text: &str, lookup: F) -> Result<(GroupFamily, JordanSet)>
where
    F: FnMut(&str) -> Result<Arc<CuspidalLabel>>,
{
    let (head, body) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected <family><rank>: ..., got {text:?}")))?;
    let head = head.trim();
    let split = head
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::Parse(format!("missing rank in {head:?}")))?;
    let kind: GroupKind = head[..split].parse()?;
    let rank: u32 = head[split..]
        .parse()
        .map_err(|_| Error::Parse(format!("bad rank in {head:?}")))?;
    let set = JordanSet::parse_blocks(body, lookup)?;
    Ok((GroupFamily::new(kind, rank), set))
}

pub fn format_family_and_set(fam: GroupFamily, set: &JordanSet) -> String {
    let parts: Vec<String> = set.iter().map(|b| b.to_string()).collect();
    format!("{fam}: {}", parts.join(", "))
}

/// One failed clause of [`validate_jordan_set`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause")]
pub enum Violation {
    /// (a) block type differs from the family's required type.
    WrongType {
        blocks: Vec<String>,
        required: PhiType,
    },
    /// (b) Σ dimensions ≠ dimension of the dual group.
    Dimension { expected: u64, actual: u64 },
    /// (c) Sp only: ∏ ω_ρ over orthogonal-ρ blocks is not trivial.
    CentralCharacter { blocks: Vec<String>, product: u16 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongType { blocks, required } => {
                write!(f, "(a) blocks [{}] are not {required}", blocks.join(", "))
            }
            Violation::Dimension { expected, actual } => write!(
                f,
                "(b) total dimension {actual} differs from dual-group dimension {expected}"
            ),
            Violation::CentralCharacter { blocks, product } => write!(
                f,
                "(c) central characters of [{}] multiply to {product:b}, not the trivial character",
                blocks.join(", ")
            ),
        }
    }
}

/// Checks the three conditions for `J` to be the Jordan set of a discrete
/// parameter of `fam`. Empty result means valid.
pub fn validate_jordan_set(fam: GroupFamily, set: &JordanSet) -> Vec<Violation> {
    let mut out = Vec::new();
    let required = fam.required_block_type();
    let wrong: Vec<String> = set
        .iter()
        .filter(|b| b.phi_type() != required)
        .map(|b| b.to_string())
        .collect();
    if !wrong.is_empty() {
        out.push(Violation::WrongType {
            blocks: wrong,
            required,
        });
    }
    let actual = set.total_dimension();
    if actual != fam.dual_dimension() {
        out.push(Violation::Dimension {
            expected: fam.dual_dimension(),
            actual,
        });
    }
    if fam.kind == GroupKind::Sp {
        let orth: Vec<&JordanBlock> = set
            .iter()
            .filter(|b| b.rho.phi_type == PhiType::Orthogonal)
            .collect();
        let product = orth
            .iter()
            .fold(QuadChar::TRIVIAL, |acc, b| acc.times(b.rho.central_char));
        if !product.is_trivial() {
            out.push(Violation::CentralCharacter {
                blocks: orth.iter().map(|b| b.to_string()).collect(),
                product: product.0,
            });
        }
    }
    out
}

pub fn ensure_valid(fam: GroupFamily, set: &JordanSet) -> Result<()> {
    let v = validate_jordan_set(fam, set);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidJordanSet(v))
    }
}

/// `max { b : δ(ρ,b) ∈ J, b < a }`.
pub fn a_minus(set: &JordanSet, rho_id: &str, a: u32) -> Result<Option<u32>> {
    if !set.contains(rho_id, a) {
        return Err(Error::NotInJordanSet {
            rho: rho_id.to_string(),
            m: a,
        });
    }
    Ok(set.line(rho_id).into_iter().filter(|&b| b < a).max())
}

/// True iff some δ(ρ,m) with m ≥ 3 lacks δ(ρ,m−2).
pub fn has_gaps(set: &JordanSet) -> bool {
    set.iter()
        .any(|b| b.m >= 3 && !set.contains(&b.rho.id, b.m - 2))
}

/// Whether the Speh representation u(δ(ρ,l), m) is isolated modulo center
/// in the unitary dual of the general linear group.
pub fn is_isolated_gl_speh(l: u32, m: u32) -> bool {
    l != 2 && m != 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Parity;

    fn quad(id: &str, bits: u16) -> Arc<CuspidalLabel> {
        Arc::new(CuspidalLabel::quadratic(id, QuadChar(bits), Parity::Even))
    }

    fn rho2() -> Arc<CuspidalLabel> {
        Arc::new(
            CuspidalLabel::new("rho", 2, PhiType::Symplectic, QuadChar(0), Parity::Odd).unwrap(),
        )
    }

    fn set(blocks: &[(&Arc<CuspidalLabel>, u32)]) -> JordanSet {
        JordanSet::new(
            blocks
                .iter()
                .map(|(r, m)| JordanBlock::new((*r).clone(), *m).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn block_types() {
        let triv = quad("triv", 0);
        let r = rho2();
        assert_eq!(
            JordanBlock::new(triv.clone(), 3).unwrap().phi_type(),
            PhiType::Orthogonal
        );
        assert_eq!(
            JordanBlock::new(r, 2).unwrap().phi_type(),
            PhiType::Orthogonal
        );
        assert_eq!(
            JordanBlock::new(triv, 2).unwrap().phi_type(),
            PhiType::Symplectic
        );
    }

    #[test]
    fn validate_examples() {
        let triv = quad("triv", 0);
        let j = set(&[(&triv, 1), (&triv, 3), (&triv, 5)]);
        assert!(validate_jordan_set(GroupFamily::sp(4), &j).is_empty());

        let (p1, p2) = (quad("psi1", 1), quad("psi2", 2));
        let j = set(&[(&p1, 2), (&p2, 2)]);
        assert!(validate_jordan_set(GroupFamily::so(2), &j).is_empty());

        // χ1 χ2 χ3 = 01 ^ 10 ^ 10 ≠ 1
        let (c1, c2, c3) = (quad("c1", 1), quad("c2", 2), quad("c3", 2));
        let j = set(&[(&c1, 1), (&c2, 1), (&c3, 1)]);
        let v = validate_jordan_set(GroupFamily::sp(1), &j);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::CentralCharacter { .. }));
    }

    #[test]
    fn validate_reports_each_clause() {
        let triv = quad("triv", 0);
        let psi = quad("psi", 1);
        let j = set(&[(&triv, 2), (&psi, 1)]);
        let v = validate_jordan_set(GroupFamily::sp(3), &j);
        assert!(matches!(v[0], Violation::WrongType { ref blocks, .. } if blocks == &["triv:2"]));
        assert!(matches!(
            v[1],
            Violation::Dimension {
                expected: 7,
                actual: 3
            }
        ));
        assert!(matches!(v[2], Violation::CentralCharacter { .. }));
    }

    #[test]
    fn a_minus_examples() {
        let triv = quad("triv", 0);
        let j = set(&[(&triv, 1), (&triv, 3), (&triv, 5)]);
        assert_eq!(a_minus(&j, "triv", 5).unwrap(), Some(3));
        assert_eq!(a_minus(&j, "triv", 1).unwrap(), None);
        assert!(a_minus(&j, "triv", 4).is_err());
        let r = rho2();
        let j = set(&[(&r, 2), (&r, 4)]);
        assert_eq!(a_minus(&j, "rho", 4).unwrap(), Some(2));
    }

    #[test]
    fn gaps() {
        let triv = quad("triv", 0);
        assert!(!has_gaps(&set(&[(&triv, 1), (&triv, 3), (&triv, 5)])));
        for n in 2..6 {
            assert!(has_gaps(&set(&[(&triv, 2 * n)])));
        }
        let psi = quad("psi", 1);
        assert!(!has_gaps(&set(&[(&psi, 2)])));
    }

    #[test]
    fn isolated_speh() {
        assert!(is_isolated_gl_speh(1, 1));
        assert!(!is_isolated_gl_speh(2, 3));
        assert!(is_isolated_gl_speh(3, 5));
        assert!(!is_isolated_gl_speh(3, 2));
    }

    #[test]
    fn parse_grammar() {
        let triv = quad("triv", 0);
        let lookup = |id: &str| {
            if id == "triv" {
                Ok(triv.clone())
            } else {
                Err(Error::UnknownLabel(id.into()))
            }
        };
        let (fam, j) = parse_family_and_set("Sp4: triv:1, triv:3, triv:5", lookup).unwrap();
        assert_eq!(fam, GroupFamily::sp(4));
        assert_eq!(j.len(), 3);
        assert_eq!(
            format_family_and_set(fam, &j),
            "Sp4: triv:1, triv:3, triv:5"
        );
        let dup = parse_family_and_set("Sp4: triv:1, triv:1", lookup);
        assert!(matches!(dup, Err(Error::DuplicateBlock { m: 1, .. })));
        assert!(parse_family_and_set("Sp4: foo:1", lookup).is_err());
        assert!(parse_family_and_set("Xy4: triv:1", lookup).is_err());
        let (fam, j) = parse_family_and_set("SO0:", lookup).unwrap();
        assert_eq!(fam, GroupFamily::so(0));
        assert!(j.is_empty());
    }
}
