//! Subspaces of E = F₂^m, their canonical form and coset structure.
//!
//! A point z = (z₁, …, z_m) of E is stored as the integer whose binary
//! expansion is z₁z₂…z_m, so z₁ is the most significant bit. Component `i` of
//! a binary word or LLR vector of length 2^m belongs to the point `z = i`.
//! "Column" below means a coordinate position counted from the left: column 0
//! is z₁ (bit `m - 1`), column `m - 1` is z_m (bit 0).

use itertools::Itertools;

use crate::error::{invalid, mismatch, Result};

/// Largest supported ambient dimension.
pub const MAX_M: usize = 20;

/// A point of F₂^m, see the module docs for the bit convention.
pub type Point = u32;

/// An s-dimensional subspace of F₂^m held in reduced row-echelon form.
///
/// Basis rows are sorted by pivot column (leftmost set bit) from left to
/// right, which makes the rows strictly decreasing as integers, and every
/// pivot column is zero in all other rows. The form is unique per point set,
/// so `==` is subspace equality and the derived `Ord` is lexicographic on the
/// basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    m: usize,
    basis: Vec<Point>,
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_M {
        return Err(invalid(format!(
            "ambient dimension m = {m} outside 1..={MAX_M}"
        )));
    }
    Ok(())
}

fn leading_bit(v: Point) -> u32 {
    31 - v.leading_zeros()
}

impl Subspace {
    /// The zero subspace {0} of F₂^m.
    pub fn zero(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            basis: Vec::new(),
        })
    }

    /// The whole space F₂^m.
    pub fn full(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            basis: (0..m).rev().map(|b| 1 << b).collect(),
        })
    }

    /// Canonical subspace spanned by `vectors`. Dependent and zero vectors are
    /// allowed; an all-zero input gives the zero subspace.
    pub fn span(vectors: &[Point], m: usize) -> Result<Self> {
        check_m(m)?;
        let limit = 1u64 << m;
        // rows[b] holds the row whose leading bit is b.
        let mut rows = [0 as Point; MAX_M];
        for &v in vectors {
            if u64::from(v) >= limit {
                return Err(invalid(format!(
                    "vector {v:#b} does not fit in m = {m} bits"
                )));
            }
            let mut v = v;
            while v != 0 {
                let b = leading_bit(v) as usize;
                if rows[b] == 0 {
                    rows[b] = v;
                    break;
                }
                v ^= rows[b];
            }
        }
        // Back-substitute, lowest pivot first; rows[b] is already clear of
        // every lower pivot by the time it is used.
        for b in 0..m {
            if rows[b] == 0 {
                continue;
            }
            for c in b + 1..m {
                if rows[c] >> b & 1 == 1 {
                    rows[c] ^= rows[b];
                }
            }
        }
        let basis = (0..m).rev().map(|b| rows[b]).filter(|&r| r != 0).collect();
        Ok(Self { m, basis })
    }

    /// Builds a subspace from rows that must already be in canonical form.
    pub fn from_canonical_basis(basis: Vec<Point>, m: usize) -> Result<Self> {
        let s = Self::span(&basis, m)?;
        if s.basis != basis {
            return Err(invalid("basis is not in reduced row-echelon form"));
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    /// OR of the pivot bits.
    pub fn pivot_mask(&self) -> Point {
        self.basis
            .iter()
            .fold(0, |acc, &r| acc | 1 << leading_bit(r))
    }

    /// Reduces `z` against the basis. The result is the minimum element of
    /// the coset `z + B`; it is zero iff `z ∈ B`.
    pub fn reduce(&self, z: Point) -> Point {
        self.basis.iter().fold(z, |acc, &row| {
            if acc >> leading_bit(row) & 1 == 1 {
                acc ^ row
            } else {
                acc
            }
        })
    }

    pub fn contains(&self, z: Point) -> bool {
        self.reduce(z) == 0
    }

    /// All 2^s elements. Element `j` is the XOR of the basis rows selected by
    /// the bits of `j` (bit t selects row t), so element 0 is the zero vector.
    pub fn elements(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(1 << self.dim());
        out.push(0);
        for &row in &self.basis {
            let len = out.len();
            for j in 0..len {
                out.push(out[j] ^ row);
            }
        }
        out
    }
}

/// Dimension of the intersection, `dim a + dim b - rank(a ∪ b)`.
pub fn intersect_dim(a: &Subspace, b: &Subspace) -> Result<usize> {
    if a.m != b.m {
        return Err(mismatch(format!(
            "subspaces live in F2^{} and F2^{}",
            a.m, b.m
        )));
    }
    let stacked: Vec<Point> = a.basis.iter().chain(&b.basis).copied().collect();
    let joint = Subspace::span(&stacked, a.m)?.dim();
    Ok(a.dim() + b.dim() - joint)
}

/// Canonical form of the span of `vectors`.
pub fn canonicalize(vectors: &[Point], m: usize) -> Result<Subspace> {
    Subspace::span(vectors, m)
}

/// Number of s-dimensional subspaces of F₂^m (the Gaussian binomial
/// coefficient with q = 2).
pub fn gaussian_binomial(m: usize, s: usize) -> Result<u128> {
    if m > MAX_M || s > m {
        return Err(invalid(format!(
            "gaussian binomial needs 0 <= s <= m <= {MAX_M}, got m = {m}, s = {s}"
        )));
    }
    // [m, j] = [m, j-1] (2^(m-j+1) - 1) / (2^j - 1), exact at every step.
    let mut acc: u128 = 1;
    for j in 1..=s {
        acc = acc * ((1u128 << (m - j + 1)) - 1) / ((1u128 << j) - 1);
    }
    Ok(acc)
}

/// Every s-dimensional subspace of F₂^m, sorted lexicographically by
/// canonical basis (rows compared as integers, first row first).
///
/// The RREF matrices are generated directly: for each choice of pivot
/// columns, row `i` has a one at its pivot, zeros at every other pivot and to
/// the left of its pivot, and free entries at the remaining columns to the
/// right.
pub fn enumerate_subspaces(m: usize, s: usize) -> Result<Vec<Subspace>> {
    let count = gaussian_binomial(m, s)?;
    if m == 0 {
        return Err(invalid("ambient dimension must be at least 1"));
    }
    let count = usize::try_from(count).map_err(|_| invalid("too many subspaces to enumerate"))?;
    let bit = |col: usize| 1 << (m - 1 - col);
    let mut out = Vec::with_capacity(count);
    for pivots in (0..m).combinations(s) {
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (p + 1..m).filter(|c| !pivots.contains(c)).collect())
            .collect();
        let total_free: usize = free.iter().map(Vec::len).sum();
        for assignment in 0u64..1 << total_free {
            let mut cursor = 0;
            let basis = pivots
                .iter()
                .zip(&free)
                .map(|(&p, cols)| {
                    let mut row = bit(p);
                    for &c in cols {
                        if assignment >> cursor & 1 == 1 {
                            row |= bit(c);
                        }
                        cursor += 1;
                    }
                    row
                })
                .collect();
            out.push(Subspace { m, basis });
        }
    }
    out.sort_unstable();
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// The partition of E into the 2^(m-s) cosets of a subspace.
///
/// Cosets are numbered by ascending minimum element. The minimum elements
/// are exactly the points with zeros in every pivot column, so the coset
/// index of `z` is the integer formed by the non-pivot bits of `z`. That
/// numbering is a linear bijection E/B → F₂^(m-s), which is what lets the
/// projected word be read as a word of RM(r-s, m-s) in the same point
/// convention.
#[derive(Debug, Clone)]
pub struct CosetTable {
    subspace: Subspace,
    representatives: Vec<Point>,
    coset_of: Vec<u32>,
    // Coset c occupies members[c << s .. (c + 1) << s]; its first entry is
    // the representative.
    members: Vec<Point>,
}

impl CosetTable {
    pub fn new(subspace: &Subspace) -> Self {
        let m = subspace.m;
        let s = subspace.dim();
        let pivots = subspace.pivot_mask();
        let elements = subspace.elements();
        let representatives: Vec<Point> = (0..1u32 << m).filter(|z| z & pivots == 0).collect();
        let mut coset_of = vec![0u32; 1 << m];
        let mut members = Vec::with_capacity(1 << m);
        for (c, &rep) in representatives.iter().enumerate() {
            for &e in &elements {
                coset_of[(rep ^ e) as usize] = c as u32;
                members.push(rep ^ e);
            }
        }
        debug_assert_eq!(representatives.len(), 1 << (m - s));
        Self {
            subspace: subspace.clone(),
            representatives,
            coset_of,
            members,
        }
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn num_cosets(&self) -> usize {
        self.representatives.len()
    }

    pub fn coset_size(&self) -> usize {
        1 << self.subspace.dim()
    }

    /// Minimum element of each coset, ascending.
    pub fn representatives(&self) -> &[Point] {
        &self.representatives
    }

    pub fn coset_of(&self, z: Point) -> usize {
        self.coset_of[z as usize] as usize
    }

    pub fn coset(&self, c: usize) -> &[Point] {
        let size = self.coset_size();
        &self.members[c * size..(c + 1) * size]
    }

    pub fn cosets(&self) -> impl Iterator<Item = &[Point]> {
        self.members.chunks(self.coset_size())
    }

    /// XOR of `v` over each coset.
    pub fn project_binary(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.coset_of.len() {
            return Err(mismatch(format!(
                "word of length {} projected in F2^{}",
                v.len(),
                self.subspace.m
            )));
        }
        Ok(self
            .cosets()
            .map(|coset| coset.iter().fold(0, |acc, &z| acc ^ v[z as usize]))
            .collect())
    }
}

pub fn build_coset_table(b: &Subspace) -> CosetTable {
    CosetTable::new(b)
}

/// Binary projection `v_{/B}`: one XOR per coset of `b`, cosets ordered as in
/// [`CosetTable`].
pub fn project_binary(v: &[u8], b: &Subspace) -> Result<Vec<u8>> {
    CosetTable::new(b).project_binary(v)
}

/// Formats a point as a fixed-width binary string, z₁ first.
pub fn format_point(z: Point, m: usize) -> String {
    format!("{z:0m$b}")
}
