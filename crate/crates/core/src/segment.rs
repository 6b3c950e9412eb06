//! Segments [b, e]ρ of twists of a cuspidal representation.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::label::CuspidalLabel;

/// The chain `|det|^b ρ, |det|^{b+1} ρ, ..., |det|^e ρ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub rho: Arc<CuspidalLabel>,
    pub b: HalfInt,
    pub e: HalfInt,
}

impl Segment {
    pub fn new(rho: Arc<CuspidalLabel>, b: HalfInt, e: HalfInt) -> Result<Self> {
        let len = e - b;
        if !len.is_integer() || len < HalfInt::ZERO {
            return Err(Error::Parse(format!(
                "segment [{b}, {e}] must have e - b a non-negative integer"
            )));
        }
        Ok(Segment { rho, b, e })
    }

    /// δ(ρ,m) = δ([−(m−1)/2, (m−1)/2]ρ).
    pub fn centered(rho: Arc<CuspidalLabel>, m: u32) -> Self {
        let half = HalfInt::halves(m as i64 - 1);
        Segment {
            rho,
            b: -half,
            e: half,
        }
    }

    /// Number of cuspidal twists in the segment.
    pub fn length(&self) -> u32 {
        ((self.e - self.b).doubled() / 2 + 1) as u32
    }

    pub fn contains(&self, x: HalfInt) -> bool {
        self.b <= x && x <= self.e && (x - self.b).is_integer()
    }

    /// The segment of the contragredient: `[−e, −b]`.
    pub fn contragredient(&self) -> Segment {
        Segment {
            rho: self.rho.clone(),
            b: -self.e,
            e: -self.b,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]_{}", self.b, self.e, self.rho.id)
    }
}

impl Serialize for Segment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Segment", 3)?;
        st.serialize_field("rho", &self.rho.id)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("e", &self.e)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{Parity, QuadChar};

    #[test]
    fn centered_segments() {
        let triv = Arc::new(CuspidalLabel::quadratic("triv", QuadChar(0), Parity::Even));
        let s = Segment::centered(triv.clone(), 4);
        assert_eq!(s.b, HalfInt::halves(-3));
        assert_eq!(s.e, HalfInt::halves(3));
        assert_eq!(s.length(), 4);
        assert!(s.contains(HalfInt::HALF));
        assert!(!s.contains(HalfInt::ONE));
        assert_eq!(s.contragredient(), s);
        assert!(Segment::new(triv.clone(), HalfInt::ONE, HalfInt::ZERO).is_err());
        assert!(Segment::new(triv, HalfInt::ZERO, HalfInt::HALF).is_err());
    }
}
