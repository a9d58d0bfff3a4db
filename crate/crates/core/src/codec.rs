//! RM(r, m) as an evaluation code.
//!
//! Codeword component `i` is the value of the message polynomial at the
//! point `z = i` (z₁ most significant, see [`crate::subspace`]). Message bit
//! `t` is the coefficient of the `t`-th monomial in graded lexicographic
//! order: by degree first, then lexicographically on the sorted list of
//! variable indices. For m = 3 the order is 1, z₁, z₂, z₃, z₁z₂, z₁z₃, z₂z₃,
//! z₁z₂z₃.

use itertools::Itertools;

use crate::error::{invalid, mismatch, Result};
use crate::subspace::MAX_M;

#[derive(Debug, Clone)]
pub struct RmCode {
    r: usize,
    m: usize,
    // Monomial t as a mask over point bits: variable z_j is bit m - j.
    monomials: Vec<u32>,
    generator: Vec<Vec<u8>>,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl RmCode {
    pub fn new(r: usize, m: usize) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(invalid(format!("m = {m} outside 1..={MAX_M}")));
        }
        if r > m {
            return Err(invalid(format!("order r = {r} exceeds m = {m}")));
        }
        let n = 1usize << m;
        let monomials: Vec<u32> = (0..=r)
            .flat_map(|deg| {
                (1..=m)
                    .combinations(deg)
                    .map(move |vars| vars.iter().fold(0u32, |acc, &j| acc | 1 << (m - j)))
            })
            .collect();
        let generator = monomials
            .iter()
            .map(|&mask| (0..n as u32).map(|z| u8::from(z & mask == mask)).collect())
            .collect();
        Ok(Self {
            r,
            m,
            monomials,
            generator,
        })
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn vars(&self) -> usize {
        self.m
    }

    /// Block length n = 2^m.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1 << self.m
    }

    /// Dimension k = Σ_{i ≤ r} C(m, i).
    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.len() as f64
    }

    /// Monomials in message order, as point-bit masks.
    pub fn monomials(&self) -> &[u32] {
        &self.monomials
    }

    /// k × n generator; row t evaluates monomial t over E.
    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.dimension() {
            return Err(mismatch(format!(
                "RM({}, {}) takes {} message bits, got {}",
                self.r,
                self.m,
                self.dimension(),
                message.len()
            )));
        }
        let mut word = vec![0u8; self.len()];
        for (row, _) in self
            .generator
            .iter()
            .zip(message)
            .filter(|(_, &b)| b & 1 == 1)
        {
            for (w, g) in word.iter_mut().zip(row) {
                *w ^= g;
            }
        }
        Ok(word)
    }

    /// Membership test through the algebraic normal form: `v` is a codeword
    /// iff its ANF has no monomial of degree above r. Words of the wrong
    /// length are not codewords.
    pub fn is_codeword(&self, v: &[u8]) -> bool {
        if v.len() != self.len() {
            return false;
        }
        anf(v)
            .iter()
            .enumerate()
            .all(|(mask, &c)| c == 0 || (mask as u32).count_ones() as usize <= self.r)
    }

    /// Recovers the message of a codeword.
    pub fn message_of(&self, v: &[u8]) -> Result<Vec<u8>> {
        if !self.is_codeword(v) {
            return Err(invalid(format!(
                "word is not in RM({}, {})",
                self.r, self.m
            )));
        }
        let coeffs = anf(v);
        Ok(self
            .monomials
            .iter()
            .map(|&mask| coeffs[mask as usize])
            .collect())
    }
}

/// Binary Möbius transform: ANF coefficients of the Boolean function whose
/// truth table is `v` (length must be a power of two). Coefficient index is a
/// monomial mask in the point-bit convention.
pub fn anf(v: &[u8]) -> Vec<u8> {
    debug_assert!(v.len().is_power_of_two());
    let mut a: Vec<u8> = v.iter().map(|&b| b & 1).collect();
    let mut h = 1;
    while h < a.len() {
        for z in 0..a.len() {
            if z & h != 0 {
                a[z] ^= a[z ^ h];
            }
        }
        h <<= 1;
    }
    a
}

/// Dimension of RM(r, m).
pub fn rm_dimension(r: usize, m: usize) -> usize {
    (0..=r.min(m)).map(|i| binomial(m, i)).sum()
}

/// Hard decision of an LLR vector: bit 1 iff the LLR is negative.
pub fn hard_decision(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&l| u8::from(l < 0.0)).collect()
}
