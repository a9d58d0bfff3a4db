//! Soft projection kernels.
//!
//! LLRs use the natural-log convention `ln(W(y|0) / W(y|1))`: positive means
//! bit 0 is more likely. The projection of an LLR vector onto the cosets of a
//! subspace combines the members of each coset with the boxplus rule
//! `2 atanh(Π tanh(L/2))`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, mismatch, Result};
use crate::subspace::{CosetTable, Point, Subspace};

/// Magnitude bound applied to every LLR the decoders produce or consume.
pub const L_MAX: f64 = 30.0;

/// Bound on `|Π tanh(L/2)|` before `atanh`.
pub const PRODUCT_LIMIT: f64 = 1.0 - 1e-12;

pub fn clamp_llr(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-L_MAX, L_MAX)
    }
}

fn tanh_half(l: f64) -> f64 {
    (clamp_llr(l) / 2.0).tanh()
}

// 2 atanh(p) = ln((1 + p) / (1 - p))
fn from_product(p: f64) -> f64 {
    let p = p.clamp(-PRODUCT_LIMIT, PRODUCT_LIMIT);
    clamp_llr(((1.0 + p) / (1.0 - p)).ln())
}

/// Two-argument boxplus.
pub fn boxplus(a: f64, b: f64) -> f64 {
    from_product(tanh_half(a) * tanh_half(b))
}

/// How coset members are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckRule {
    /// Exact tanh rule.
    #[default]
    Exact,
    /// Sign times minimum magnitude.
    MinSum,
}

impl CheckRule {
    /// Per-point values the combiner consumes: `tanh(L/2)` for the exact
    /// rule, the clamped LLR itself for min-sum. Computed once per LLR vector
    /// and shared by every subspace.
    pub fn prepare(self, llr: &[f64]) -> Vec<f64> {
        match self {
            CheckRule::Exact => llr.iter().map(|&l| tanh_half(l)).collect(),
            CheckRule::MinSum => llr.iter().map(|&l| clamp_llr(l)).collect(),
        }
    }

    /// Combines the prepared values at `points`, skipping index `skip` of the
    /// slice if given. Members are folded left to right.
    pub fn combine(self, prepared: &[f64], points: &[Point], skip: Option<usize>) -> f64 {
        let skip = skip.unwrap_or(usize::MAX);
        match self {
            CheckRule::Exact => {
                let mut product = 1.0;
                for (j, &z) in points.iter().enumerate() {
                    if j != skip {
                        product *= prepared[z as usize];
                    }
                }
                from_product(product)
            }
            CheckRule::MinSum => {
                let mut negative = false;
                // Empty boxplus is the identity element, +∞ clamped.
                let mut min = L_MAX;
                for (j, &z) in points.iter().enumerate() {
                    if j != skip {
                        let v = prepared[z as usize];
                        negative ^= v < 0.0;
                        min = min.min(v.abs());
                    }
                }
                if negative {
                    -min
                } else {
                    min
                }
            }
        }
    }
}

impl CosetTable {
    /// Projection of prepared values (see [`CheckRule::prepare`]), one entry per coset.
    pub fn project_prepared(&self, prepared: &[f64], rule: CheckRule) -> Vec<f64> {
        self.cosets()
            .map(|c| rule.combine(prepared, c, None))
            .collect()
    }

    /// Boxplus projection `L_{/B}`, one entry per coset.
    pub fn project_llr(&self, llr: &[f64]) -> Result<Vec<f64>> {
        self.check_llr_len(llr)?;
        let rule = CheckRule::Exact;
        Ok(self.project_prepared(&rule.prepare(llr), rule))
    }

    /// Boxplus over the coset of `z` with `z` itself left out.
    pub fn partial_project_llr(&self, llr: &[f64], z: Point) -> Result<f64> {
        self.check_llr_len(llr)?;
        if z as usize >= llr.len() {
            return Err(invalid(format!(
                "point {z} outside F2^{}",
                self.subspace().ambient_dim()
            )));
        }
        let coset = self.coset(self.coset_of(z));
        let at = coset
            .iter()
            .position(|&x| x == z)
            .expect("point is in its own coset");
        let rule = CheckRule::Exact;
        let prepared = rule.prepare(llr);
        Ok(rule.combine(&prepared, coset, Some(at)))
    }

    fn check_llr_len(&self, llr: &[f64]) -> Result<()> {
        let n = 1usize << self.subspace().ambient_dim();
        if llr.len() != n {
            return Err(mismatch(format!(
                "LLR vector of length {} for n = {n}",
                llr.len()
            )));
        }
        Ok(())
    }
}

fn positive_dim(b: &Subspace) -> Result<()> {
    if b.dim() == 0 {
        return Err(invalid("LLR projection needs a subspace of dimension >= 1"));
    }
    Ok(())
}

/// `L_{/B}(T) = 2 atanh(Π_{z∈T} tanh(L(z)/2))` for every coset T of `b`.
pub fn project_llr(llr: &[f64], b: &Subspace) -> Result<Vec<f64>> {
    positive_dim(b)?;
    CosetTable::new(b).project_llr(llr)
}

/// `L_{/B}(T − {z})` for the coset T of `b` that contains `z`.
pub fn partial_project_llr(llr: &[f64], b: &Subspace, z: Point) -> Result<f64> {
    positive_dim(b)?;
    CosetTable::new(b).partial_project_llr(llr, z)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::codec::hard_decision;
    use crate::subspace::{canonicalize, enumerate_subspaces, project_binary};

    // Scalar reference written straight from the two-argument formula.
    fn reference_pair(a: f64, b: f64) -> f64 {
        2.0 * ((a / 2.0).tanh() * (b / 2.0).tanh()).atanh()
    }

    #[test]
    fn zero_member_annihilates_the_coset() {
        let b = canonicalize(&[0b001, 0b010], 3).unwrap();
        let llr = [0.0, 3.0, -2.0, 1.5, 4.0, 4.0, 4.0, 4.0];
        let p = project_llr(&llr, &b).unwrap();
        assert_eq!(p[0], 0.0);
        assert!(p[1] > 0.0);
    }

    #[test]
    fn saturated_agreement_approaches_the_bound() {
        let b = canonicalize(&[0b1], 1).unwrap();
        let p = project_llr(&[1e6, f64::INFINITY], &b).unwrap();
        assert!(p[0] > L_MAX - 2.0 && p[0] <= L_MAX, "{}", p[0]);
        assert!(p[0].is_finite());
        let p = project_llr(&[-1e6, L_MAX], &b).unwrap();
        assert!(p[0] < -(L_MAX - 2.0));
    }

    #[test]
    fn pairwise_projection_matches_scalar_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = canonicalize(&[0b001], 3).unwrap();
        for _ in 0..200 {
            let llr: Vec<f64> = (0..8).map(|_| rng.random_range(-8.0..8.0)).collect();
            let p = project_llr(&llr, &b).unwrap();
            for c in 0..4 {
                let expect = reference_pair(llr[2 * c], llr[2 * c + 1]);
                assert!((p[c] - expect).abs() < 1e-12, "{} vs {}", p[c], expect);
                assert!((boxplus(llr[2 * c], llr[2 * c + 1]) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_projection_special_cases() {
        let b = canonicalize(&[0b100], 3).unwrap();
        let llr = [1.25, -2.0, 0.5, 3.0, -4.5, 6.0, 7.0, -0.25];
        for z in 0..8u32 {
            let other = llr[(z ^ 0b100) as usize];
            let got = partial_project_llr(&llr, &b, z).unwrap();
            assert!((got - other).abs() < 1e-9, "z = {z}: {got} vs {other}");
        }
        let b = canonicalize(&[0b001, 0b010], 3).unwrap();
        let llr = [9.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(partial_project_llr(&llr, &b, 0).unwrap(), 0.0);
        assert!(partial_project_llr(&llr, &b, 8).is_err());
        assert!(project_llr(&llr, &crate::subspace::Subspace::zero(3).unwrap()).is_err());
        assert!(project_llr(&llr[..4], &b).is_err());
    }

    #[test]
    fn min_sum_rule() {
        let rule = CheckRule::MinSum;
        let prepared = rule.prepare(&[2.0, -0.5, 3.0, -1.0]);
        assert_eq!(rule.combine(&prepared, &[0, 1, 2, 3], None), 0.5);
        assert_eq!(rule.combine(&prepared, &[0, 1, 2, 3], Some(1)), -1.0);
        assert_eq!(rule.combine(&prepared, &[0, 2], None), 2.0);
    }

    proptest! {
        #[test]
        fn partial_then_boxplus_recovers_full(llr in prop::collection::vec(-6.0f64..6.0, 32), idx in 0usize..155, z in 0u32..32) {
            let b = &enumerate_subspaces(5, 2).unwrap()[idx];
            let t = CosetTable::new(b);
            let full = t.project_llr(&llr).unwrap()[t.coset_of(z)];
            let partial = t.partial_project_llr(&llr, z).unwrap();
            prop_assert!((boxplus(partial, llr[z as usize]) - full).abs() < 1e-9);
        }

        #[test]
        fn hard_and_soft_projections_agree(llr in prop::collection::vec(prop_oneof![-9.0f64..-0.01, 0.01f64..9.0], 32), idx in 0usize..155) {
            let b = &enumerate_subspaces(5, 2).unwrap()[idx];
            let soft = project_llr(&llr, b).unwrap();
            let hard = project_binary(&hard_decision(&llr), b).unwrap();
            prop_assert_eq!(hard_decision(&soft), hard);
        }
    }
}
