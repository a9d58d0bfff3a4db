//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p pcpa-core --test acceptance -- --nocapture` to see
//! the report. Lines tagged `info` are reported but do not gate the run.
//! The report is written to stderr directly so it also shows under the
//! default captured test output.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use pcpa_core::channel::simulate_channel;
use pcpa_core::fht::fht_ml_decode_rm1;
use pcpa_core::sim::{run_frequency_matrix, run_wer, Stopping, WerRow};
use pcpa_core::subspace::{enumerate_subspaces, gaussian_binomial, project_binary};
use pcpa_core::theorem::{subspace_pair, theorem1_monte_carlo, theorem1_probability};
use pcpa_core::{
    build_collection, cpa_decode, DecoderConfig, PcpaDecoder, RmCode, Strategy, SubspaceCollection,
};

const SEED: u64 = 2025;

struct Report {
    failed: Vec<String>,
}

fn emit(line: String) {
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

impl Report {
    fn check(&mut self, id: &str, pass: bool, detail: String) {
        emit(format!(
            "{} {id}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        ));
        if !pass {
            self.failed.push(id.to_string());
        }
    }

    fn info(&mut self, id: &str, pass: bool, detail: String) {
        emit(format!(
            "{} {id} (info): {detail}",
            if pass { "PASS" } else { "FAIL" }
        ));
    }
}

fn random_codeword(code: &RmCode, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let msg: Vec<u8> = (0..code.dimension())
        .map(|_| u8::from(rng.random::<bool>()))
        .collect();
    code.encode(&msg).unwrap()
}

fn noiseless_llr(codeword: &[u8]) -> Vec<f64> {
    codeword
        .iter()
        .map(|&b| if b == 0 { 10.0 } else { -10.0 })
        .collect()
}

fn fmt_row(row: &WerRow) -> String {
    format!(
        "{:.4} [{:.4}, {:.4}]",
        row.wer, row.wer_lower, row.wer_upper
    )
}

// Product formula, independent of the recurrence used by the library.
fn gaussian_product(m: usize, s: usize) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..s {
        num *= (1u128 << m) - (1u128 << i);
        den *= (1u128 << s) - (1u128 << i);
    }
    num / den
}

fn enumeration_counts(report: &mut Report) {
    let start = Instant::now();
    let mut ok = true;
    for m in 1..=6 {
        for s in 0..=m {
            let list = enumerate_subspaces(m, s).unwrap();
            let expect = gaussian_product(m, s);
            ok &= list.len() as u128 == expect && gaussian_binomial(m, s).unwrap() == expect;
            ok &= list.windows(2).all(|w| w[0] < w[1]);
            ok &= list.iter().all(|b| b.dim() == s);
        }
    }
    let n72 = enumerate_subspaces(7, 2).unwrap().len();
    let n52 = enumerate_subspaces(5, 2).unwrap().len();
    let elapsed = start.elapsed();
    ok &= n72 == 2667 && n52 == 155;
    report.check(
        "C1 subspace enumeration",
        ok && elapsed < Duration::from_secs(10),
        format!("1 <= m <= 6 all s match product formula, (7,2) = {n72}, (5,2) = {n52}, {elapsed:.2?} (limit 10s)"),
    );
}

fn projection_closure(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let rm24 = RmCode::new(2, 4).unwrap();
    let rm35 = RmCode::new(3, 5).unwrap();
    let rm13 = RmCode::new(1, 3).unwrap();
    let lines = enumerate_subspaces(4, 1).unwrap();
    let planes = enumerate_subspaces(5, 2).unwrap();
    let mut checked = 0usize;
    let mut bad = 0usize;
    for msg in 0u32..1 << rm24.dimension() {
        let bits: Vec<u8> = (0..rm24.dimension())
            .map(|i| (msg >> i & 1) as u8)
            .collect();
        let c = rm24.encode(&bits).unwrap();
        for b in &lines {
            checked += 1;
            bad += usize::from(!rm13.is_codeword(&project_binary(&c, b).unwrap()));
        }
    }
    for _ in 0..500 {
        let c = random_codeword(&rm35, &mut rng);
        for b in &planes {
            checked += 1;
            bad += usize::from(!rm13.is_codeword(&project_binary(&c, b).unwrap()));
        }
    }
    report.check(
        "C2 projection closure",
        bad == 0,
        format!("{checked} projections of RM(2,4) and RM(3,5) codewords, {bad} outside RM(1,3)"),
    );
}

fn fht_against_brute_force(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut compared = 0usize;
    let mut skipped = 0usize;
    let mut bad = 0usize;
    for k in 3..=5 {
        let code = RmCode::new(1, k).unwrap();
        let words: Vec<Vec<u8>> = (0u32..1 << code.dimension())
            .map(|msg| {
                let bits: Vec<u8> = (0..code.dimension())
                    .map(|i| (msg >> i & 1) as u8)
                    .collect();
                code.encode(&bits).unwrap()
            })
            .collect();
        for _ in 0..1000 {
            let llr: Vec<f64> = (0..code.len())
                .map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0)
                .collect();
            let mut scored: Vec<(f64, &Vec<u8>)> = words
                .iter()
                .map(|w| {
                    let corr = w
                        .iter()
                        .zip(&llr)
                        .map(|(&b, &l)| if b == 0 { l } else { -l })
                        .sum();
                    (corr, w)
                })
                .collect();
            scored.sort_by(|a, b| b.0.total_cmp(&a.0));
            if scored[0].0 - scored[1].0 <= 1e-9 {
                skipped += 1;
                continue;
            }
            compared += 1;
            let (word, metric) = fht_ml_decode_rm1(&llr).unwrap();
            bad += usize::from(&word != scored[0].1 || (metric - scored[0].0).abs() > 1e-9);
        }
    }
    report.check(
        "C3 FHT equals brute-force ML",
        bad == 0 && compared > 0,
        format!("k = 3,4,5: {compared} compared, {skipped} near-ties skipped, {bad} mismatches"),
    );
}

fn theorem_monte_carlo(report: &mut Report) {
    let start = Instant::now();
    let trials = 100_000u64;
    let mut worst = 0.0f64;
    let mut ok = true;
    for (i, &(s, d)) in [(1, 0), (2, 0), (2, 1)].iter().enumerate() {
        let (b1, b2) = subspace_pair(2 * s - d + 1, s, d).unwrap();
        for (j, eps) in [0.05, 0.1, 0.2].into_iter().enumerate() {
            let p = theorem1_probability(s, d, eps).unwrap();
            let mc =
                theorem1_monte_carlo(&b1, &b2, eps, 1, trials, SEED + (3 * i + j) as u64).unwrap();
            let tol = 0.01f64.max(3.0 * (p * (1.0 - p) / trials as f64).sqrt());
            worst = worst.max((mc - p).abs() / tol);
            ok &= (mc - p).abs() <= tol;
        }
    }
    let elapsed = start.elapsed();
    report.check(
        "C4 agreement probability vs Monte Carlo",
        ok && elapsed < Duration::from_secs(60),
        format!("9 cases at 1e5 trials, worst |mc - closed| / tol = {worst:.3}, {elapsed:.2?} (limit 60s)"),
    );
}

fn cpa_is_full_pcpa(report: &mut Report) {
    let code = RmCode::new(3, 5).unwrap();
    let full =
        PcpaDecoder::new(DecoderConfig::new(SubspaceCollection::full(5, 2).unwrap())).unwrap();
    let mut same = 0usize;
    for t in 0..100 {
        let s = simulate_channel(&code, None, 2.0, SEED, t).unwrap();
        let a = cpa_decode(&s.llr, 3, 5, 3, None).unwrap();
        let b = full.decode(&s.llr).unwrap();
        let bitwise = a
            .final_llr
            .iter()
            .zip(&b.final_llr)
            .all(|(x, y)| x.to_bits() == y.to_bits());
        same += usize::from(a.codeword == b.codeword && bitwise);
    }
    report.check(
        "C5 CPA equals PCPA with the full collection",
        same == 100,
        format!("{same}/100 noisy RM(3,5) words at 2.0 dB identical bit for bit"),
    );
}

fn noiseless_decoding(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let rm35 = RmCode::new(3, 5).unwrap();
    let cpa35 = PcpaDecoder::new(DecoderConfig::cpa(3, 5).unwrap()).unwrap();
    let spread = build_collection(5, 2, 9, Strategy::SpreadFirst, 0).unwrap();
    let pcpa9 = PcpaDecoder::new(DecoderConfig::new(spread)).unwrap();
    let mut errors = 0usize;
    let mut words = 0usize;
    for _ in 0..200 {
        let c = random_codeword(&rm35, &mut rng);
        let llr = noiseless_llr(&c);
        errors += usize::from(cpa35.decode(&llr).unwrap().codeword != c);
        errors += usize::from(pcpa9.decode(&llr).unwrap().codeword != c);
        words += 2;
    }
    let rm24 = RmCode::new(2, 4).unwrap();
    let cpa24 = PcpaDecoder::new(DecoderConfig::cpa(2, 4).unwrap()).unwrap();
    let greedy = build_collection(4, 1, 5, Strategy::GreedyMinRs, 0).unwrap();
    let pcpa5 = PcpaDecoder::new(DecoderConfig::new(greedy)).unwrap();
    for msg in 0u32..1 << rm24.dimension() {
        let bits: Vec<u8> = (0..rm24.dimension())
            .map(|i| (msg >> i & 1) as u8)
            .collect();
        let c = rm24.encode(&bits).unwrap();
        let llr = noiseless_llr(&c);
        errors += usize::from(cpa24.decode(&llr).unwrap().codeword != c);
        errors += usize::from(pcpa5.decode(&llr).unwrap().codeword != c);
        words += 2;
    }
    report.check(
        "C6 noiseless decoding",
        errors == 0,
        format!("{words} decodes (RM(3,5) CPA and PCPA-9, all of RM(2,4) with CPA and PCPA-5), {errors} errors"),
    );
}

fn correlation_ordering(report: &mut Report) {
    let code = RmCode::new(3, 5).unwrap();
    let trials = Stopping::FixedTrials(30_000);
    let snr = [2.5];
    let low = build_collection(5, 2, 9, Strategy::SpreadFirst, 0).unwrap();
    let high = build_collection(5, 2, 9, Strategy::TargetRs(31.0), 0).unwrap();
    let wer = |config: DecoderConfig| {
        run_wer(&code, &config, &snr, trials, SEED, 0).unwrap().rows[0].clone()
    };
    let cpa = wer(DecoderConfig::cpa(3, 5).unwrap());
    let w_low = wer(DecoderConfig::new(low.clone()));
    let w_high = wer(DecoderConfig::new(high.clone()));
    report.check(
        "C7a PCPA-9 low r_S beats high r_S",
        low.r_s() == 9.0 && high.r_s() == 31.0 && w_low.wer_upper < w_high.wer_lower,
        format!(
            "2.5 dB, 3e4 trials: r_S = {} {} vs r_S = {} {}",
            low.r_s(),
            fmt_row(&w_low),
            high.r_s(),
            fmt_row(&w_high)
        ),
    );
    report.check(
        "C7b CPA no worse than PCPA-9",
        cpa.wer <= w_low.wer_upper,
        format!(
            "CPA {} vs PCPA-9 upper bound {:.4}",
            fmt_row(&cpa),
            w_low.wer_upper
        ),
    );
    let random = build_collection(5, 2, 9, Strategy::Random, 1).unwrap();
    let w_rand = wer(DecoderConfig::new(random.clone()));
    report.info(
        "C7c random collection",
        w_low.wer <= w_rand.wer,
        format!("r_S = {} {}", random.r_s(), fmt_row(&w_rand)),
    );
}

fn frequency_matrix(report: &mut Report) {
    let start = Instant::now();
    let code = RmCode::new(3, 5).unwrap();
    let fm = run_frequency_matrix(&code, 2.0, 10_000, SEED, 0).unwrap();
    let elapsed = start.elapsed();
    let rho = fm.spearman_rho();
    let unit_diag = (0..fm.size).all(|i| fm.p_at(i, i) == 1.0 && fm.r_at(i, i) == 1.0);
    report.check(
        "C8 agreement frequency tracks correlation",
        rho > 0.3 && fm.is_symmetric() && unit_diag && elapsed < Duration::from_secs(600),
        format!(
            "155x155 at 2.0 dB, 1e4 trials: Spearman rho = {rho:.3} (need > 0.3), symmetric {}, unit diagonal {unit_diag}, {elapsed:.2?}",
            fm.is_symmetric()
        ),
    );
}

fn cpa_monotone(report: &mut Report) {
    let code = RmCode::new(3, 5).unwrap();
    let snrs = [1.0, 1.5, 2.0, 2.5, 3.0];
    let config = DecoderConfig::cpa(3, 5).unwrap();
    let rep = run_wer(
        &code,
        &config,
        &snrs,
        Stopping::FixedTrials(10_000),
        SEED,
        0,
    )
    .unwrap();
    let monotone = rep.rows.windows(2).all(|w| w[1].wer <= w[0].wer);
    let curve: Vec<String> = rep
        .rows
        .iter()
        .map(|r| format!("{}:{:.4}", r.snr_db, r.wer))
        .collect();
    report.check(
        "C9 CPA WER non-increasing in SNR",
        monotone,
        format!("1e4 trials per point: {}", curve.join(" ")),
    );
}

fn large_code_smoke(report: &mut Report) {
    let code = RmCode::new(3, 7).unwrap();
    let collection = build_collection(7, 2, 64, Strategy::GreedyMinRs, 0).unwrap();
    let r_s = collection.r_s();
    let decoder = PcpaDecoder::new(DecoderConfig::new(collection)).unwrap();
    let mut ok = decoder.projections_per_iteration() == 64;
    let mut errors = 0;
    for t in 0..1000 {
        let s = simulate_channel(&code, None, 2.0, SEED, t).unwrap();
        let out = decoder.decode(&s.llr).unwrap();
        ok &= out.projections == 64 * out.iterations_run;
        errors += usize::from(out.codeword != s.transmitted);
    }
    report.info(
        "C10 RM(3,7) PCPA-64 smoke",
        ok,
        format!(
            "64 projections per iteration, greedy r_S = {r_s}, {errors}/1000 word errors at 2.0 dB"
        ),
    );
}

#[test]
fn acceptance() {
    let mut report = Report { failed: Vec::new() };
    enumeration_counts(&mut report);
    projection_closure(&mut report);
    fht_against_brute_force(&mut report);
    theorem_monte_carlo(&mut report);
    cpa_is_full_pcpa(&mut report);
    noiseless_decoding(&mut report);
    correlation_ordering(&mut report);
    frequency_matrix(&mut report);
    cpa_monotone(&mut report);
    large_code_smoke(&mut report);
    assert!(report.failed.is_empty(), "failed: {:?}", report.failed);
}
