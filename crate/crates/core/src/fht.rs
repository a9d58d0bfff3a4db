//! Maximum-likelihood decoding of first-order Reed-Muller codes with the fast
//! Hadamard transform.
//!
//! The codewords of RM(1, k) are the affine functions `v(z) = a·z ⊕ c`. The
//! transform `H[a] = Σ_z (-1)^(a·z) L(z)` gives the correlation
//! `Σ_z (1 - 2v(z)) L(z)` of every codeword at once: `H[a]` for `c = 0` and
//! `-H[a]` for `c = 1`.
//!
//! Codewords are enumerated with index `2a + c`. Equal metrics resolve to the
//! lowest index, so an all-zero input decodes to the all-zero word.

use crate::error::{invalid, Result};

/// In-place, unnormalized Walsh-Hadamard transform in natural order.
pub fn hadamard_transform(x: &mut [f64]) {
    debug_assert!(x.len().is_power_of_two());
    let n = x.len();
    let mut h = 1;
    while h < n {
        for block in x.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
}

/// An RM(1, k) codeword `a·z ⊕ c` with its correlation metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineDecision {
    pub linear: u32,
    pub complement: bool,
    pub metric: f64,
}

impl AffineDecision {
    pub fn codeword(&self, k: usize) -> Vec<u8> {
        affine_word(k, self.linear, self.complement)
    }
}

/// Truth table of `a·z ⊕ c` over F₂^k.
pub fn affine_word(k: usize, linear: u32, complement: bool) -> Vec<u8> {
    (0..1u32 << k)
        .map(|z| ((linear & z).count_ones() & 1) as u8 ^ u8::from(complement))
        .collect()
}

/// Transform-domain search. `llr.len()` must be 2^k with k ≥ 1.
pub fn fht_decide(llr: &[f64]) -> Result<AffineDecision> {
    if llr.len() < 2 || !llr.len().is_power_of_two() {
        return Err(invalid(format!(
            "first-order decoding needs length 2^k with k >= 1, got {}",
            llr.len()
        )));
    }
    let mut h = llr.to_vec();
    hadamard_transform(&mut h);
    let mut best = AffineDecision {
        linear: 0,
        complement: false,
        metric: h[0],
    };
    for (a, &value) in h.iter().enumerate() {
        for (complement, metric) in [(false, value), (true, -value)] {
            if metric > best.metric {
                best = AffineDecision {
                    linear: a as u32,
                    complement,
                    metric,
                };
            }
        }
    }
    Ok(best)
}

/// ML codeword of RM(1, k) for `llr` and its correlation metric.
pub fn fht_ml_decode_rm1(llr: &[f64]) -> Result<(Vec<u8>, f64)> {
    let d = fht_decide(llr)?;
    let k = llr.len().trailing_zeros() as usize;
    Ok((d.codeword(k), d.metric))
}
