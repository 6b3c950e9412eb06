//! Small dense linear algebra over GF(2), vectors packed in `u64`.

/// An affine equation `popcount(coeffs & x) mod 2 == rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Equation {
    pub coeffs: u64,
    pub rhs: bool,
}

impl Equation {
    pub fn new(coeffs: u64, rhs: bool) -> Self {
        Equation { coeffs, rhs }
    }
}

/// Solution set of a consistent affine system: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: u64,
    pub kernel: Vec<u64>,
}

impl AffineSolution {
    /// Every solution, in the order of the binary counter over `kernel`.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let k = self.kernel.len();
        assert!(k < 64, "solution space too large to enumerate");
        (0u64..(1u64 << k)).map(move |c| {
            let mut x = self.particular;
            for (i, v) in self.kernel.iter().enumerate() {
                if c >> i & 1 == 1 {
                    x ^= v;
                }
            }
            x
        })
    }
}

pub fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}

/// Reduced row echelon form; returns the pivot column of each kept row.
fn eliminate(rows: &mut [Equation], nvars: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let bit = 1u64 << col;
        let Some(p) = (r..rows.len()).find(|&i| rows[i].coeffs & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.coeffs & bit != 0 {
                row.coeffs ^= pivot.coeffs;
                row.rhs ^= pivot.rhs;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Solves the system in `nvars` unknowns, or `None` if it is inconsistent.
pub fn solve(equations: &[Equation], nvars: usize) -> Option<AffineSolution> {
    assert!(nvars <= 64);
    let mut rows = equations.to_vec();
    let pivots = eliminate(&mut rows, nvars);
    let rank = pivots.len();
    if rows[rank..].iter().any(|e| e.rhs) {
        return None;
    }
    let mut particular = 0u64;
    for (row, &col) in rows.iter().zip(&pivots) {
        if row.rhs {
            particular |= 1 << col;
        }
    }
    let kernel = (0..nvars)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = 1u64 << free;
            for (row, &col) in rows.iter().zip(&pivots) {
                if row.coeffs >> free & 1 == 1 {
                    v |= 1 << col;
                }
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

/// Dimension of the span of `vectors`.
pub fn rank(vectors: &[u64]) -> usize {
    let mut rows: Vec<Equation> = vectors.iter().map(|&v| Equation::new(v, false)).collect();
    eliminate(&mut rows, 64).len()
}

/// Coordinates of `target` in the independent family `basis`, if it lies in the span.
pub fn coordinates(basis: &[u64], target: u64) -> Option<u64> {
    // Unknown i is the coefficient of basis[i]; one equation per bit position.
    let n = basis.len();
    assert!(n <= 64);
    let equations: Vec<Equation> = (0..64)
        .map(|bit| {
            let coeffs = basis
                .iter()
                .enumerate()
                .filter(|(_, v)| *v >> bit & 1 == 1)
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            Equation::new(coeffs, target >> bit & 1 == 1)
        })
        .collect();
    solve(&equations, n).map(|s| s.particular)
}
