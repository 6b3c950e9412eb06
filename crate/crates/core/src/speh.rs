//! Speh representations as determinants of segment representations in the
//! Grothendieck group of a single cuspidal line.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::label::CuspidalLabel;

/// Largest number of permutation terms [`speh_determinant`] will expand.
pub const EXPANSION_LIMIT: u64 = 5_000_000;

/// Multiset of segments `[b, e]` on one line, kept sorted in decreasing order.
/// The empty multisegment is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multisegment(Vec<(HalfInt, HalfInt)>);

impl Multisegment {
    pub fn new(mut segs: Vec<(HalfInt, HalfInt)>) -> Self {
        segs.sort_unstable_by(|x, y| y.cmp(x));
        Multisegment(segs)
    }

    pub fn unit() -> Self {
        Multisegment(Vec::new())
    }

    pub fn segments(&self) -> &[(HalfInt, HalfInt)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the segment lengths `e − b + 1`.
    pub fn total_length(&self) -> i64 {
        self.0
            .iter()
            .map(|(b, e)| (e.doubled() - b.doubled()) / 2 + 1)
            .sum()
    }

    pub fn times(&self, other: &Multisegment) -> Multisegment {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Multisegment::new(v)
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|(b, e)| format!("[{b}, {e}]")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Multisegment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (b, e) in &self.0 {
            seq.serialize_element(&[b, e])?;
        }
        seq.end()
    }
}

/// An integer combination of multisegments on one cuspidal line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrothendieckElement {
    rho: Arc<CuspidalLabel>,
    terms: BTreeMap<Multisegment, i64>,
}

impl GrothendieckElement {
    pub fn zero(rho: Arc<CuspidalLabel>) -> Self {
        GrothendieckElement {
            rho,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(rho: Arc<CuspidalLabel>, ms: Multisegment, coeff: i64) -> Self {
        let mut g = GrothendieckElement::zero(rho);
        g.add_term(ms, coeff);
        g
    }

    pub fn rho(&self) -> &Arc<CuspidalLabel> {
        &self.rho
    }

    pub fn terms(&self) -> &BTreeMap<Multisegment, i64> {
        &self.terms
    }

    pub fn coefficient(&self, ms: &Multisegment) -> i64 {
        self.terms.get(ms).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, ms: Multisegment, coeff: i64) {
        let c = self.terms.entry(ms.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&ms);
        }
    }

    fn same_line(&self, other: &GrothendieckElement) -> Result<()> {
        if self.rho.id != other.rho.id {
            return Err(Error::LineMismatch {
                segment: other.rho.id.clone(),
                data: self.rho.id.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GrothendieckElement) -> Result<GrothendieckElement> {
        self.same_line(other)?;
        let mut out = self.clone();
        for (ms, c) in &other.terms {
            out.add_term(ms.clone(), *c);
        }
        Ok(out)
    }

    /// Product given by parabolic induction: union of multisegments.
    pub fn mul(&self, other: &GrothendieckElement) -> Result<GrothendieckElement> {
        self.same_line(other)?;
        let mut out = GrothendieckElement::zero(self.rho.clone());
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                out.add_term(x.times(y), a * b);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GrothendieckElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (ms, c)) in self.terms.iter().rev().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if i > 0 {
                f.write_str(" ")?;
            }
            match c.abs() {
                1 => write!(f, "{sign} {ms}")?,
                k => write!(f, "{sign} {k}{ms}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coefficient: i64,
    pub segments: Multisegment,
}

impl Serialize for GrothendieckElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .terms
            .iter()
            .rev()
            .map(|(ms, c)| Term {
                coefficient: *c,
                segments: ms.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

/// `(b_k, e_k)` for `k = 1..m`, centers `(m−1)/2 − (k−1)` descending.
pub fn speh_segments(l: u32, m: u32) -> Vec<(HalfInt, HalfInt)> {
    let h = l as i64 - 1;
    (1..=m as i64)
        .map(|k| {
            let c = (m as i64 - 1) - 2 * (k - 1);
            (HalfInt::halves(c - h), HalfInt::halves(c + h))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpehExpansion {
    pub l: u32,
    pub m: u32,
    pub element: GrothendieckElement,
    /// Permutations whose product survived before like terms were combined.
    pub surviving_permutations: u64,
}

/// Expands `det[δ([b_i, e_j]ρ)]`. An entry with `b_i = e_j + 1` is the unit
/// and one with `b_i > e_j + 1` is zero.
pub fn speh_determinant(rho: &Arc<CuspidalLabel>, l: u32, m: u32) -> Result<SpehExpansion> {
    if l == 0 || m == 0 {
        return Err(Error::OutOfRange("l and m must be positive".into()));
    }
    let segs = speh_segments(l, m);
    let n = m as usize;
    let mut element = GrothendieckElement::zero(rho.clone());
    let mut used = vec![false; n];
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut count = 0u64;
    expand(&segs, &mut used, &mut chosen, &mut element, &mut count)?;
    Ok(SpehExpansion {
        l,
        m,
        element,
        surviving_permutations: count,
    })
}

fn expand(
    segs: &[(HalfInt, HalfInt)],
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    out: &mut GrothendieckElement,
    count: &mut u64,
) -> Result<()> {
    let n = segs.len();
    let i = chosen.len();
    if i == n {
        *count += 1;
        if *count > EXPANSION_LIMIT {
            return Err(Error::OutOfRange(format!(
                "more than {EXPANSION_LIMIT} permutation terms"
            )));
        }
        let mut parts = Vec::with_capacity(n);
        for (row, &col) in chosen.iter().enumerate() {
            let b = segs[row].0;
            let e = segs[col].1;
            if b.doubled() <= e.doubled() {
                parts.push((b, e));
            }
        }
        out.add_term(Multisegment::new(parts), permutation_sign(chosen));
        return Ok(());
    }
    let b = segs[i].0;
    for j in 0..n {
        if used[j] || b.doubled() > segs[j].1.doubled() + 2 {
            continue;
        }
        used[j] = true;
        chosen.push(j);
        expand(segs, used, chosen, out, count)?;
        chosen.pop();
        used[j] = false;
    }
    Ok(())
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionStats {
    pub terms: usize,
    pub identity_present: bool,
    pub positive: usize,
    pub negative: usize,
}

pub fn expansion_stats(x: &SpehExpansion) -> ExpansionStats {
    let identity = Multisegment::new(speh_segments(x.l, x.m));
    let terms = x.element.terms();
    ExpansionStats {
        terms: terms.len(),
        identity_present: x.element.coefficient(&identity) == 1,
        positive: terms.values().filter(|c| **c > 0).count(),
        negative: terms.values().filter(|c| **c < 0).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{Parity, QuadChar};

    fn rho() -> Arc<CuspidalLabel> {
        Arc::new(CuspidalLabel::quadratic("triv", QuadChar(0), Parity::Even))
    }

    #[test]
    fn segments() {
        let show = |l, m| -> Vec<String> {
            speh_segments(l, m)
                .iter()
                .map(|(b, e)| format!("{b},{e}"))
                .collect()
        };
        assert_eq!(show(1, 2), ["1/2,1/2", "-1/2,-1/2"]);
        assert_eq!(show(2, 2), ["0,1", "-1,0"]);
        assert_eq!(show(3, 1), ["-1,1"]);
    }

    #[test]
    fn two_by_two() {
        let x = speh_determinant(&rho(), 1, 2).unwrap();
        assert_eq!(
            x.element.to_string(),
            "+ {[1/2, 1/2], [-1/2, -1/2]} - {[-1/2, 1/2]}"
        );
        let x = speh_determinant(&rho(), 2, 2).unwrap();
        assert_eq!(
            x.element.to_string(),
            "+ {[0, 1], [-1, 0]} - {[0, 0], [-1, 1]}"
        );
        let st = expansion_stats(&x);
        assert_eq!(
            (st.terms, st.identity_present, st.positive, st.negative),
            (2, true, 1, 1)
        );
    }

    #[test]
    fn signs_of_permutations() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    #[test]
    fn line_mismatch() {
        let a = GrothendieckElement::zero(rho());
        let b = GrothendieckElement::zero(Arc::new(CuspidalLabel::quadratic(
            "psi",
            QuadChar(1),
            Parity::Even,
        )));
        assert!(a.add(&b).is_err());
        assert!(a.mul(&b).is_err());
    }
}
