//! Monte Carlo campaigns: word error rates and the estimate-agreement
//! frequency matrix.
//!
//! Trial `t` at SNR `snr` always uses [`trial_rng`]`(seed, snr.to_bits(), t)`,
//! so results depend only on the seed and never on the worker count. Trials
//! run in fixed-size batches; the error-target stopping rule is checked
//! between batches.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{noise_sigma, random_message, transmit, trial_rng};
use crate::codec::RmCode;
use crate::collection::SubspaceCollection;
use crate::decoder::{DecoderConfig, PcpaDecoder};
use crate::error::{invalid, mismatch, Result};
use crate::stats::{spearman, wilson_interval, Z_95};
use crate::subspace::{intersect_dim, CosetTable};

/// Trials per parallel batch.
pub const BATCH: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stopping {
    FixedTrials(u64),
    /// Run until `errors` word errors or `cap` trials, whichever first.
    TargetErrors {
        errors: u64,
        cap: u64,
    },
}

impl Default for Stopping {
    fn default() -> Self {
        Stopping::TargetErrors {
            errors: 100,
            cap: 1_000_000,
        }
    }
}

impl Stopping {
    fn cap(self) -> u64 {
        match self {
            Stopping::FixedTrials(n) => n,
            Stopping::TargetErrors { cap, .. } => cap,
        }
    }

    fn done(self, trials: u64, errors: u64) -> bool {
        match self {
            Stopping::FixedTrials(n) => trials >= n,
            Stopping::TargetErrors {
                errors: target,
                cap,
            } => errors >= target || trials >= cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WerRow {
    pub snr_db: f64,
    pub trials: u64,
    pub word_errors: u64,
    pub wer: f64,
    pub wer_lower: f64,
    pub wer_upper: f64,
}

impl WerRow {
    fn new(snr_db: f64, trials: u64, word_errors: u64) -> Self {
        let (wer_lower, wer_upper) = wilson_interval(word_errors, trials, Z_95);
        Self {
            snr_db,
            trials,
            word_errors,
            wer: word_errors as f64 / trials as f64,
            wer_lower,
            wer_upper,
        }
    }

    pub fn interval_width(&self) -> f64 {
        self.wer_upper - self.wer_lower
    }
}

/// Decoder identity carried by every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderDescriptor {
    /// "CPA" for the full enumeration, otherwise "PCPA-<size>".
    pub name: String,
    pub r: usize,
    pub m: usize,
    pub collection_size: usize,
    pub r_s: f64,
    pub omega: f64,
    pub t_max: usize,
    pub early_stop: bool,
    pub include_channel_prior: bool,
}

impl DecoderDescriptor {
    pub fn of(config: &DecoderConfig) -> Self {
        let (r, m) = (config.order(), config.vars());
        let full = crate::subspace::gaussian_binomial(m, r - 1).unwrap_or(0);
        let size = config.collection.len();
        Self {
            name: if size as u128 == full {
                "CPA".to_string()
            } else {
                format!("PCPA-{size}")
            },
            r,
            m,
            collection_size: size,
            r_s: config.collection.r_s(),
            omega: config.omega,
            t_max: config.t_max,
            early_stop: config.early_stop,
            include_channel_prior: config.include_channel_prior,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WerReport {
    pub decoder: DecoderDescriptor,
    pub seed: u64,
    pub stopping: Stopping,
    pub rows: Vec<WerRow>,
}

impl WerReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,trials,word_errors,wer,wer_lower,wer_upper\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6e},{:.6e},{:.6e}\n",
                r.snr_db, r.trials, r.word_errors, r.wer, r.wer_lower, r.wer_upper
            ));
        }
        out
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))
}

/// Word error rate of `config` on `code` at each SNR. `workers = 0` lets the
/// pool pick a thread count.
pub fn run_wer(
    code: &RmCode,
    config: &DecoderConfig,
    snrs: &[f64],
    stopping: Stopping,
    seed: u64,
    workers: usize,
) -> Result<WerReport> {
    if (config.order(), config.vars()) != (code.order(), code.vars()) {
        return Err(mismatch(format!(
            "decoder is for RM({}, {}) but the code is RM({}, {})",
            config.order(),
            config.vars(),
            code.order(),
            code.vars()
        )));
    }
    if stopping.cap() == 0 {
        return Err(invalid("at least one trial per SNR point is required"));
    }
    if let Some(bad) = snrs.iter().find(|s| !s.is_finite()) {
        return Err(invalid(format!("SNR must be finite, got {bad}")));
    }
    let decoder = PcpaDecoder::new(config.clone())?;
    let pool = thread_pool(workers)?;
    let mut rows = Vec::with_capacity(snrs.len());
    for &snr in snrs {
        let sigma = noise_sigma(code.rate(), snr);
        let point = snr.to_bits();
        let (mut trials, mut errors) = (0u64, 0u64);
        while !stopping.done(trials, errors) {
            let end = (trials + BATCH).min(stopping.cap());
            let batch_errors = pool.install(|| {
                (trials..end)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng = trial_rng(seed, point, t);
                        let msg = random_message(code.dimension(), &mut rng);
                        let tx = code.encode(&msg).expect("message has length k");
                        let llr = transmit(&tx, sigma, &mut rng);
                        let out = decoder.decode(&llr).expect("LLR length matches the code");
                        u64::from(out.codeword != tx)
                    })
                    .sum::<u64>()
            });
            errors += batch_errors;
            trials = end;
        }
        rows.push(WerRow::new(snr, trials, errors));
    }
    Ok(WerReport {
        decoder: DecoderDescriptor::of(config),
        seed,
        stopping,
        rows,
    })
}

/// Agreement frequencies between first-iteration estimates of every
/// (r−1)-dimensional projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyMatrix {
    pub size: usize,
    pub trials: u64,
    pub snr_db: f64,
    /// Row-major `p_ij`: fraction of trials where estimates i and j are both
    /// correct or both wrong.
    pub p: Vec<f64>,
    /// Row-major `r_ij`.
    pub r: Vec<f64>,
    /// Per-subspace fraction of correct estimates.
    pub correct_rate: Vec<f64>,
}

impl FrequencyMatrix {
    pub fn p_at(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.size + j]
    }

    pub fn r_at(&self, i: usize, j: usize) -> f64 {
        self.r[i * self.size + j]
    }

    /// Off-diagonal (i < j) pairs as `(p_ij, r_ij)` columns.
    pub fn off_diagonal(&self) -> (Vec<f64>, Vec<f64>) {
        let mut ps = Vec::new();
        let mut rs = Vec::new();
        for i in 0..self.size {
            for j in i + 1..self.size {
                ps.push(self.p_at(i, j));
                rs.push(self.r_at(i, j));
            }
        }
        (ps, rs)
    }

    /// Spearman rank correlation between off-diagonal `p_ij` and `r_ij`.
    pub fn spearman_rho(&self) -> f64 {
        let (ps, rs) = self.off_diagonal();
        spearman(&ps, &rs)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.p_at(i, j) == self.p_at(j, i)))
    }

    fn matrix_csv(&self, values: &[f64]) -> String {
        let mut out = String::new();
        for row in values.chunks(self.size) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn p_csv(&self) -> String {
        self.matrix_csv(&self.p)
    }

    pub fn r_csv(&self) -> String {
        self.matrix_csv(&self.r)
    }
}

/// `r_ij` matrix of a collection, row-major.
pub fn correlation_matrix(collection: &SubspaceCollection) -> Result<Vec<f64>> {
    let members = collection.members();
    let s = collection.subspace_dim() as f64;
    let mut r = Vec::with_capacity(members.len() * members.len());
    for a in members {
        for b in members {
            r.push(intersect_dim(a, b)? as f64 / s);
        }
    }
    Ok(r)
}

/// Transmits random codewords of RM(r, m) at `snr_db`, decodes the
/// first-iteration projection onto every (r−1)-dimensional subspace, and
/// counts how often each pair of estimates is simultaneously right or wrong.
/// An estimate is right when it equals the projection of the transmitted
/// codeword.
pub fn run_frequency_matrix(
    code: &RmCode,
    snr_db: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<FrequencyMatrix> {
    if code.order() < 2 {
        return Err(invalid("the frequency experiment needs r >= 2"));
    }
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if !snr_db.is_finite() {
        return Err(invalid(format!("SNR must be finite, got {snr_db}")));
    }
    let collection = SubspaceCollection::full(code.vars(), code.order() - 1)?;
    let n = collection.len();
    let decoder = PcpaDecoder::new(DecoderConfig::new(collection.clone()).with_t_max(1))?;
    let tables: Vec<CosetTable> = collection.members().iter().map(CosetTable::new).collect();
    let sigma = noise_sigma(code.rate(), snr_db);
    let point = snr_db.to_bits();
    let pool = thread_pool(workers)?;

    let batches: Vec<(u64, u64)> = (0..trials)
        .step_by(BATCH as usize)
        .map(|start| (start, (start + BATCH).min(trials)))
        .collect();
    // Upper-triangle agreement counts plus per-subspace correct counts.
    let (agree, correct) = pool.install(|| {
        batches
            .par_iter()
            .map(|&(start, end)| {
                let mut agree = vec![0u32; n * n];
                let mut correct = vec![0u32; n];
                for t in start..end {
                    let mut rng = trial_rng(seed, point, t);
                    let msg = random_message(code.dimension(), &mut rng);
                    let tx = code.encode(&msg).expect("message has length k");
                    let llr = transmit(&tx, sigma, &mut rng);
                    let clamped: Vec<f64> = llr.iter().map(|&l| crate::llr::clamp_llr(l)).collect();
                    let estimates = decoder
                        .first_order_estimates(&clamped)
                        .expect("LLR length matches the code");
                    let ok: Vec<bool> = tables
                        .iter()
                        .zip(&estimates)
                        .map(|(table, est)| {
                            &table.project_binary(&tx).expect("codeword length matches") == est
                        })
                        .collect();
                    for i in 0..n {
                        correct[i] += u32::from(ok[i]);
                        for j in i + 1..n {
                            agree[i * n + j] += u32::from(ok[i] == ok[j]);
                        }
                    }
                }
                (agree, correct)
            })
            .reduce(
                || (vec![0u32; n * n], vec![0u32; n]),
                |(mut a, mut c), (b, d)| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    c.iter_mut().zip(d).for_each(|(x, y)| *x += y);
                    (a, c)
                },
            )
    });

    let total = trials as f64;
    let mut p = vec![1.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = f64::from(agree[i * n + j]) / total;
            p[i * n + j] = v;
            p[j * n + i] = v;
        }
    }
    Ok(FrequencyMatrix {
        size: n,
        trials,
        snr_db,
        p,
        r: correlation_matrix(&collection)?,
        correct_rate: correct.iter().map(|&c| f64::from(c) / total).collect(),
    })
}
