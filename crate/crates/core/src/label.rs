//! Group series, quadratic characters and cuspidal-line labels.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// Sp(2n, F), dual group SO(2n+1, ℂ).
    Sp,
    /// Split SO(2n+1, F), dual group Sp(2n, ℂ).
    #[serde(rename = "SO")]
    SoOdd,
}

impl GroupKind {
    /// Type that every Jordan block of this series must have.
    pub fn required_block_type(self) -> PhiType {
        match self {
            GroupKind::Sp => PhiType::Orthogonal,
            GroupKind::SoOdd => PhiType::Symplectic,
        }
    }

    pub fn dual_dimension(self, rank: u32) -> u64 {
        match self {
            GroupKind::Sp => 2 * rank as u64 + 1,
            GroupKind::SoOdd => 2 * rank as u64,
        }
    }

    /// Rank of the member of the series whose dual group has dimension `dim`.
    pub fn rank_for_dimension(self, dim: u64) -> Option<u32> {
        match self {
            GroupKind::Sp if dim % 2 == 1 => Some(((dim - 1) / 2) as u32),
            GroupKind::SoOdd if dim.is_multiple_of(2) => Some((dim / 2) as u32),
            _ => None,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Sp => "Sp",
            GroupKind::SoOdd => "SO",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sp" => Ok(GroupKind::Sp),
            "so" | "so_odd" | "soodd" => Ok(GroupKind::SoOdd),
            other => Err(Error::Parse(format!("unknown group family {other:?}"))),
        }
    }
}

/// `Sp(2n, F)` or `SO(2n+1, F)` with its rank `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupFamily {
    pub kind: GroupKind,
    pub rank: u32,
}

impl GroupFamily {
    pub fn new(kind: GroupKind, rank: u32) -> Self {
        GroupFamily { kind, rank }
    }

    pub fn sp(rank: u32) -> Self {
        GroupFamily::new(GroupKind::Sp, rank)
    }

    pub fn so(rank: u32) -> Self {
        GroupFamily::new(GroupKind::SoOdd, rank)
    }

    pub fn dual_dimension(&self) -> u64 {
        self.kind.dual_dimension(self.rank)
    }

    pub fn required_block_type(&self) -> PhiType {
        self.kind.required_block_type()
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiType {
    Orthogonal,
    Symplectic,
}

impl PhiType {
    /// Type of the irreducible `m`-dimensional representation of SL(2, ℂ).
    pub fn of_sl2_rep(m: u32) -> PhiType {
        if m % 2 == 1 {
            PhiType::Orthogonal
        } else {
            PhiType::Symplectic
        }
    }

    /// Type of a tensor product of two self-dual representations.
    pub fn tensor(self, other: PhiType) -> PhiType {
        if self == other {
            PhiType::Orthogonal
        } else {
            PhiType::Symplectic
        }
    }
}

impl fmt::Display for PhiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhiType::Orthogonal => "orthogonal",
            PhiType::Symplectic => "symplectic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: u32) -> Parity {
        if m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// The group (ℤ/2)^dim of quadratic characters of F^×.
///
/// `dim = 2` (four characters) is the odd residual characteristic case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadCharSpace {
    dim: u8,
}

impl QuadCharSpace {
    pub fn new(dim: u8) -> Result<Self> {
        if dim == 0 || dim > 16 {
            return Err(Error::OutOfRange(format!(
                "quadratic character space dimension must be in 1..=16, got {dim}"
            )));
        }
        Ok(QuadCharSpace { dim })
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn size(&self) -> u32 {
        1 << self.dim
    }

    pub fn characters(&self) -> impl Iterator<Item = QuadChar> {
        (0..self.size() as u16).map(QuadChar)
    }

    pub fn parse_char(&self, bits: &str) -> Result<QuadChar> {
        let bits = bits.trim();
        if bits.len() != self.dim as usize || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::Parse(format!(
                "central character {bits:?} is not a {}-bit string",
                self.dim
            )));
        }
        Ok(QuadChar(
            u16::from_str_radix(bits, 2).expect("checked binary"),
        ))
    }

    pub fn format_char(&self, ch: QuadChar) -> String {
        format!("{:0width$b}", ch.0, width = self.dim as usize)
    }
}

impl Default for QuadCharSpace {
    fn default() -> Self {
        QuadCharSpace { dim: 2 }
    }
}

/// An element of a [`QuadCharSpace`]; the group law is XOR.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct QuadChar(pub u16);

impl QuadChar {
    pub const TRIVIAL: QuadChar = QuadChar(0);

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }

    pub fn times(self, other: QuadChar) -> QuadChar {
        QuadChar(self.0 ^ other.0)
    }
}

/// A self-dual irreducible cuspidal representation ρ of GL(d, F), as data.
///
/// Labels are compared by `id` alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspidalLabel {
    pub id: String,
    pub gl_rank: u32,
    pub phi_type: PhiType,
    pub central_char: QuadChar,
    /// Parity of `m` for which `Ind(δ(ρ,m) ⊗ 1)` reduces when ρ is not on a
    /// Jordan line. Declared for the series the registry describes.
    pub base_parity: Parity,
}

impl CuspidalLabel {
    pub fn new(
        id: impl Into<String>,
        gl_rank: u32,
        phi_type: PhiType,
        central_char: QuadChar,
        base_parity: Parity,
    ) -> Result<Self> {
        let label = CuspidalLabel {
            id: id.into(),
            gl_rank,
            phi_type,
            central_char,
            base_parity,
        };
        label.check()?;
        Ok(label)
    }

    /// The quadratic character `ch` of F^× = GL(1, F).
    pub fn quadratic(id: impl Into<String>, ch: QuadChar, base_parity: Parity) -> Self {
        CuspidalLabel {
            id: id.into(),
            gl_rank: 1,
            phi_type: PhiType::Orthogonal,
            central_char: ch,
            base_parity,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidLabel {
            id: self.id.clone(),
            reason: reason.to_string(),
        };
        if self.id.is_empty() || self.id.contains([':', ',', ' ']) {
            return Err(bad("ids must be non-empty and free of ':', ',' and spaces"));
        }
        if self.gl_rank == 0 {
            return Err(bad("gl_rank must be positive"));
        }
        if self.gl_rank == 1 && self.phi_type != PhiType::Orthogonal {
            return Err(bad("a character of GL(1) has orthogonal L-parameter"));
        }
        Ok(())
    }

    /// The trivial character of GL(1, F).
    pub fn is_trivial_character(&self) -> bool {
        self.gl_rank == 1 && self.central_char.is_trivial()
    }
}

impl PartialEq for CuspidalLabel {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for CuspidalLabel {}

impl PartialOrd for CuspidalLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CuspidalLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}

impl Hash for CuspidalLabel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl fmt::Display for CuspidalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// Serializes a shared label by its id.
pub fn serialize_label_id<S: serde::Serializer>(
    label: &std::sync::Arc<CuspidalLabel>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&label.id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_dimensions() {
        assert_eq!(GroupFamily::sp(4).dual_dimension(), 9);
        assert_eq!(GroupFamily::so(2).dual_dimension(), 4);
        assert_eq!(GroupKind::Sp.rank_for_dimension(9), Some(4));
        assert_eq!(GroupKind::Sp.rank_for_dimension(8), None);
        assert_eq!(GroupKind::SoOdd.rank_for_dimension(0), Some(0));
    }

    #[test]
    fn gl1_labels_are_orthogonal() {
        let err = CuspidalLabel::new("x", 1, PhiType::Symplectic, QuadChar(0), Parity::Even);
        assert!(err.is_err());
        assert!(
            CuspidalLabel::new("rho", 2, PhiType::Symplectic, QuadChar(0), Parity::Odd).is_ok()
        );
        assert!(
            CuspidalLabel::new("a:b", 2, PhiType::Symplectic, QuadChar(0), Parity::Odd).is_err()
        );
    }

    #[test]
    fn equality_is_by_id() {
        let a = CuspidalLabel::quadratic("psi", QuadChar(1), Parity::Even);
        let b = CuspidalLabel::quadratic("psi", QuadChar(2), Parity::Odd);
        assert_eq!(a, b);
    }

    #[test]
    fn quad_chars() {
        let q = QuadCharSpace::default();
        assert_eq!(q.size(), 4);
        let c = q.parse_char("01").unwrap();
        assert_eq!(q.format_char(c), "01");
        assert!(c.times(c).is_trivial());
        assert!(q.parse_char("2").is_err());
        assert!(q.parse_char("011").is_err());
    }

    #[test]
    fn tensor_types() {
        assert_eq!(
            PhiType::Orthogonal.tensor(PhiType::of_sl2_rep(3)),
            PhiType::Orthogonal
        );
        assert_eq!(
            PhiType::Symplectic.tensor(PhiType::of_sl2_rep(2)),
            PhiType::Orthogonal
        );
        assert_eq!(
            PhiType::Orthogonal.tensor(PhiType::of_sl2_rep(2)),
            PhiType::Symplectic
        );
    }
}
