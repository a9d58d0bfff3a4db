//! Collapsed projection-aggregation decoding and its pruned variant.
//!
//! Each iteration projects the current LLR vector onto every subspace of the
//! collection, decodes each projection as a first-order RM code with the
//! fast Hadamard transform, and aggregates the estimates back into a new LLR
//! per point:
//!
//! ```text
//! L̂(z) = ω Σ_i (1 − 2 v̂_i(T_i(z))) · L_{/B_i}(T_i(z) − {z})
//! ```
//!
//! where `T_i(z)` is the coset of `B_i` containing `z`. With the full
//! enumeration of (r−1)-dimensional subspaces this is CPA; any smaller
//! collection gives PCPA. The final hard decision maps a negative LLR to 1
//! and everything else, ties included, to 0.

use serde::{Deserialize, Serialize};

use crate::codec::{hard_decision, RmCode};
use crate::collection::SubspaceCollection;
use crate::error::{invalid, mismatch, Result};
use crate::fht::fht_decide;
use crate::llr::{clamp_llr, CheckRule};
use crate::subspace::{CosetTable, Subspace};

/// Iteration count used for every reported experiment.
pub const DEFAULT_T_MAX: usize = 3;

#[derive(Debug, Clone)]
pub struct DecoderConfig {
    pub t_max: usize,
    /// Aggregation scale ω; [`DecoderConfig::new`] sets it to `1 / |S|`.
    pub omega: f64,
    /// Stop once the hard decision repeats and is a codeword.
    pub early_stop: bool,
    /// Add the channel LLR to every aggregated value.
    pub include_channel_prior: bool,
    pub check_rule: CheckRule,
    /// Keep the first-order estimates of every iteration in the outcome.
    pub record_estimates: bool,
    pub collection: SubspaceCollection,
}

impl DecoderConfig {
    pub fn new(collection: SubspaceCollection) -> Self {
        Self {
            t_max: DEFAULT_T_MAX,
            omega: 1.0 / collection.len() as f64,
            early_stop: false,
            include_channel_prior: false,
            check_rule: CheckRule::Exact,
            record_estimates: false,
            collection,
        }
    }

    /// CPA: every (r−1)-dimensional subspace of F₂^m.
    pub fn cpa(r: usize, m: usize) -> Result<Self> {
        if r < 2 {
            return Err(invalid("projection-aggregation needs r >= 2"));
        }
        if r > m {
            return Err(invalid(format!("order r = {r} exceeds m = {m}")));
        }
        Ok(Self::new(SubspaceCollection::full(m, r - 1)?))
    }

    pub fn with_t_max(mut self, t_max: usize) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// Code order implied by the collection (s = r − 1).
    pub fn order(&self) -> usize {
        self.collection.subspace_dim() + 1
    }

    pub fn vars(&self) -> usize {
        self.collection.ambient_dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_max == 0 {
            return Err(invalid("t_max must be at least 1"));
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(invalid(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.order() > self.vars() {
            return Err(invalid("collection subspaces must have dimension below m"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub codeword: Vec<u8>,
    pub final_llr: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
    /// First-order projections decoded, summed over iterations.
    pub projections: usize,
    /// `[iteration][subspace]` estimates, when requested.
    pub estimates: Option<Vec<Vec<Vec<u8>>>>,
}

/// One first-order estimate handed to [`aggregate`].
#[derive(Debug, Clone)]
pub struct Estimate {
    pub subspace: Subspace,
    /// Decoded projection, indexed by coset as in [`CosetTable`].
    pub word: Vec<u8>,
}

/// Sign-weighted sum of partial projections, scaled by ω and clamped. The sum
/// runs over the estimates in slice order for every point.
pub fn aggregate(l_prev: &[f64], estimates: &[Estimate], omega: f64) -> Result<Vec<f64>> {
    let tables: Vec<CosetTable> = estimates
        .iter()
        .map(|e| CosetTable::new(&e.subspace))
        .collect();
    let words: Vec<&[u8]> = estimates.iter().map(|e| e.word.as_slice()).collect();
    check_estimates(l_prev.len(), &tables, &words)?;
    let rule = CheckRule::Exact;
    Ok(aggregate_prepared(
        &rule.prepare(l_prev),
        &tables,
        &words,
        omega,
        rule,
    ))
}

fn check_estimates(n: usize, tables: &[CosetTable], words: &[&[u8]]) -> Result<()> {
    for (t, w) in tables.iter().zip(words) {
        if 1usize << t.subspace().ambient_dim() != n {
            return Err(mismatch(format!(
                "estimate subspace lives in F2^{} but the LLR vector has length {n}",
                t.subspace().ambient_dim()
            )));
        }
        if w.len() != t.num_cosets() {
            return Err(mismatch(format!(
                "estimate of length {} for a subspace with {} cosets",
                w.len(),
                t.num_cosets()
            )));
        }
    }
    Ok(())
}

fn aggregate_prepared(
    prepared: &[f64],
    tables: &[CosetTable],
    words: &[&[u8]],
    omega: f64,
    rule: CheckRule,
) -> Vec<f64> {
    let mut acc = vec![0.0; prepared.len()];
    for (table, word) in tables.iter().zip(words) {
        for (c, coset) in table.cosets().enumerate() {
            let sign = if word[c] & 1 == 1 { -1.0 } else { 1.0 };
            for (j, &z) in coset.iter().enumerate() {
                acc[z as usize] += sign * rule.combine(prepared, coset, Some(j));
            }
        }
    }
    acc.into_iter().map(|x| clamp_llr(omega * x)).collect()
}

/// A decoder with coset tables for its collection built once.
#[derive(Debug, Clone)]
pub struct PcpaDecoder {
    config: DecoderConfig,
    code: RmCode,
    tables: Vec<CosetTable>,
}

impl PcpaDecoder {
    pub fn new(config: DecoderConfig) -> Result<Self> {
        config.validate()?;
        let code = RmCode::new(config.order(), config.vars())?;
        let tables = config
            .collection
            .members()
            .iter()
            .map(CosetTable::new)
            .collect();
        Ok(Self {
            config,
            code,
            tables,
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn code(&self) -> &RmCode {
        &self.code
    }

    /// First-order decodes per iteration; equals the collection size.
    pub fn projections_per_iteration(&self) -> usize {
        self.tables.len()
    }

    /// First-order estimate of every projection of `llr`, in collection order.
    pub fn first_order_estimates(&self, llr: &[f64]) -> Result<Vec<Vec<u8>>> {
        self.check_len(llr)?;
        let prepared = self.config.check_rule.prepare(llr);
        Ok(self.estimates_prepared(&prepared))
    }

    fn estimates_prepared(&self, prepared: &[f64]) -> Vec<Vec<u8>> {
        let k = self.code.vars() - self.config.collection.subspace_dim();
        self.tables
            .iter()
            .map(|t| {
                let projected = t.project_prepared(prepared, self.config.check_rule);
                fht_decide(&projected)
                    .expect("projections have length 2^(m-s) with m > s")
                    .codeword(k)
            })
            .collect()
    }

    fn check_len(&self, llr: &[f64]) -> Result<()> {
        if llr.len() != self.code.len() {
            return Err(mismatch(format!(
                "LLR vector of length {} for RM({}, {})",
                llr.len(),
                self.code.order(),
                self.code.vars()
            )));
        }
        Ok(())
    }

    pub fn decode(&self, llr: &[f64]) -> Result<DecodeOutcome> {
        self.check_len(llr)?;
        let cfg = &self.config;
        let channel: Vec<f64> = llr.iter().map(|&l| clamp_llr(l)).collect();
        let mut current = channel.clone();
        let mut previous_hard = hard_decision(&channel);
        let mut log = cfg.record_estimates.then(Vec::new);
        let mut iterations_run = 0;
        let mut stopped_early = false;
        for _ in 0..cfg.t_max {
            let prepared = cfg.check_rule.prepare(&current);
            let words = self.estimates_prepared(&prepared);
            let refs: Vec<&[u8]> = words.iter().map(Vec::as_slice).collect();
            let mut next =
                aggregate_prepared(&prepared, &self.tables, &refs, cfg.omega, cfg.check_rule);
            if cfg.include_channel_prior {
                for (x, &l0) in next.iter_mut().zip(&channel) {
                    *x = clamp_llr(*x + l0);
                }
            }
            current = next;
            iterations_run += 1;
            if let Some(log) = log.as_mut() {
                log.push(words);
            }
            if cfg.early_stop {
                let hard = hard_decision(&current);
                if hard == previous_hard && self.code.is_codeword(&hard) {
                    stopped_early = true;
                    break;
                }
                previous_hard = hard;
            }
        }
        let codeword = hard_decision(&current);
        let converged = stopped_early || self.code.is_codeword(&codeword);
        Ok(DecodeOutcome {
            codeword,
            final_llr: current,
            iterations_run,
            converged,
            projections: iterations_run * self.tables.len(),
            estimates: log,
        })
    }
}

pub fn pcpa_decode(llr: &[f64], config: &DecoderConfig) -> Result<DecodeOutcome> {
    PcpaDecoder::new(config.clone())?.decode(llr)
}

/// CPA over all (r−1)-dimensional subspaces; `omega = None` uses `1 / N`.
pub fn cpa_decode(
    llr: &[f64],
    r: usize,
    m: usize,
    t_max: usize,
    omega: Option<f64>,
) -> Result<DecodeOutcome> {
    let mut config = DecoderConfig::cpa(r, m)?.with_t_max(t_max);
    if let Some(w) = omega {
        config.omega = w;
    }
    pcpa_decode(llr, &config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{build_collection, Strategy};
    use crate::llr::partial_project_llr;
    use crate::subspace::canonicalize;

    #[test]
    fn aggregation_of_agreeing_votes() {
        // Uniform LLR: every partial projection over the other three members
        // of a 2-dim coset has the same value p.
        let llr = vec![2.0; 16];
        let subspaces = [
            canonicalize(&[0b0001, 0b0010], 4).unwrap(),
            canonicalize(&[0b0100, 0b1000], 4).unwrap(),
            canonicalize(&[0b0011, 0b1100], 4).unwrap(),
        ];
        let p = partial_project_llr(&llr, &subspaces[0], 0).unwrap();
        let estimates: Vec<Estimate> = subspaces
            .iter()
            .map(|b| Estimate {
                subspace: b.clone(),
                word: vec![0; 4],
            })
            .collect();
        let out = aggregate(&llr, &estimates, 0.5).unwrap();
        for x in out {
            assert!((x - 0.5 * 3.0 * p).abs() < 1e-12);
        }
    }

    #[test]
    fn a_single_one_flips_the_sign() {
        let llr: Vec<f64> = (0..8).map(|i| 0.3 + i as f64 * 0.7).collect();
        let b = canonicalize(&[0b010], 3).unwrap();
        let table = CosetTable::new(&b);
        let mut word = vec![0u8; 4];
        word[table.coset_of(5)] = 1;
        let out = aggregate(
            &llr,
            &[Estimate {
                subspace: b.clone(),
                word,
            }],
            1.0,
        )
        .unwrap();
        let partial = partial_project_llr(&llr, &b, 5).unwrap();
        assert!((out[5] + partial).abs() < 1e-12);
        assert!((out[0] - partial_project_llr(&llr, &b, 0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn aggregation_rejects_mismatches() {
        let b = canonicalize(&[0b010], 3).unwrap();
        let short = Estimate {
            subspace: b.clone(),
            word: vec![0; 3],
        };
        assert!(aggregate(&[1.0; 8], &[short], 1.0).is_err());
        let ok = Estimate {
            subspace: b,
            word: vec![0; 4],
        };
        assert!(aggregate(&[1.0; 16], &[ok], 1.0).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(DecoderConfig::cpa(1, 5).is_err());
        assert!(cpa_decode(&[1.0; 32], 1, 5, 3, None).is_err());
        let c = DecoderConfig::cpa(3, 5).unwrap();
        assert_eq!(c.omega, 1.0 / 155.0);
        assert_eq!(c.t_max, 3);
        assert!(PcpaDecoder::new(c.clone().with_t_max(0)).is_err());
        assert!(PcpaDecoder::new(c.clone().with_omega(0.0)).is_err());
        assert!(PcpaDecoder::new(c.clone().with_omega(f64::NAN)).is_err());
        let d = PcpaDecoder::new(c).unwrap();
        assert!(d.decode(&[1.0; 16]).is_err());
    }

    #[test]
    fn cpa_projection_counts() {
        assert_eq!(
            PcpaDecoder::new(DecoderConfig::cpa(3, 5).unwrap())
                .unwrap()
                .projections_per_iteration(),
            155
        );
        assert_eq!(
            PcpaDecoder::new(DecoderConfig::cpa(3, 7).unwrap())
                .unwrap()
                .projections_per_iteration(),
            2667
        );
        let out = cpa_decode(&[1.0; 32], 3, 5, 2, None).unwrap();
        assert_eq!(out.projections, 310);
    }

    #[test]
    fn all_positive_input_decodes_to_zero_word() {
        let out = cpa_decode(&[4.0; 32], 3, 5, 3, None).unwrap();
        assert_eq!(out.codeword, vec![0; 32]);
        assert!(out.converged);
        assert_eq!(out.iterations_run, 3);
    }

    #[test]
    fn early_stop_and_estimate_log() {
        let mut c =
            DecoderConfig::new(build_collection(5, 2, 9, Strategy::SpreadFirst, 0).unwrap());
        c.early_stop = true;
        c.record_estimates = true;
        let out = pcpa_decode(&[5.0; 32], &c).unwrap();
        assert_eq!(out.iterations_run, 1);
        assert!(out.converged);
        let log = out.estimates.unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].len(), 9);
        assert!(log[0].iter().all(|w| w == &vec![0; 8]));
    }

    #[test]
    fn channel_prior_and_min_sum_variants_run() {
        let mut c = DecoderConfig::cpa(2, 4).unwrap();
        c.include_channel_prior = true;
        c.check_rule = CheckRule::MinSum;
        let code = RmCode::new(2, 4).unwrap();
        let msg = vec![1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0];
        let w = code.encode(&msg).unwrap();
        let llr: Vec<f64> = w.iter().map(|&b| if b == 0 { 3.0 } else { -3.0 }).collect();
        assert_eq!(pcpa_decode(&llr, &c).unwrap().codeword, w);
    }
}
