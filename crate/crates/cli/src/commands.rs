use serde_json::json;

use pcpa_core::codec::RmCode;
use pcpa_core::collection::format_subspace;
use pcpa_core::format::{parse_llr_rows, word_to_string};
use pcpa_core::llr::CheckRule;
use pcpa_core::sim::{run_frequency_matrix, run_wer, DecoderDescriptor, Stopping};
use pcpa_core::subspace::enumerate_subspaces;
use pcpa_core::theorem::{subspace_pair, theorem1_monte_carlo, theorem1_probability};
use pcpa_core::{build_collection, DecoderConfig, PcpaDecoder, SubspaceCollection};

use crate::manifest::ExperimentManifest;
use crate::output::{read_file, resolve, with_suffix, write_file, CmdResult, Failure};
use crate::{
    DecodeArgs, DecoderArgs, FreqmatArgs, SelectArgs, SubspacesArgs, TheoremArgs, WerArgs,
};

pub fn subspaces(a: &SubspacesArgs) -> CmdResult {
    let collection = SubspaceCollection::new(enumerate_subspaces(a.m, a.s)?)?;
    let manifest = ExperimentManifest::new("subspaces", a).collection(&collection, false);
    let path = resolve(
        a.out.as_deref(),
        &format!("subspaces_m{}_s{}.txt", a.m, a.s),
    );
    write_file(&path, &(manifest.comment_line() + &collection.to_text()))?;
    println!("{}", collection.len());
    eprintln!("wrote {} subspaces to {}", collection.len(), path.display());
    Ok(())
}

pub fn select(a: &SelectArgs) -> CmdResult {
    let collection = build_collection(a.m, a.s, a.size, a.strategy, a.seed)?;
    let manifest = ExperimentManifest::new("select", a)
        .seed(a.seed)
        .collection(&collection, false);
    let name = format!("collection_m{}_s{}_k{}.txt", a.m, a.s, a.size);
    let path = resolve(a.out.as_deref(), &name);
    write_file(&path, &(manifest.comment_line() + &collection.to_text()))?;
    println!("{}", collection.r_s());
    eprintln!(
        "{} strategy: {} subspaces, r_S = {}, written to {}",
        a.strategy,
        collection.len(),
        collection.r_s(),
        path.display()
    );
    Ok(())
}

/// Decoder configuration for RM(r, m) plus whether its collection is the
/// full enumeration.
fn decoder_config(r: usize, m: usize, d: &DecoderArgs) -> CmdResult<(DecoderConfig, bool)> {
    if r < 2 || r > m {
        return Err(Failure::usage(format!(
            "need 2 <= r <= m, got r = {r}, m = {m}"
        )));
    }
    let (mut config, full) = if d.full {
        (DecoderConfig::cpa(r, m)?, true)
    } else if let Some(path) = &d.collection {
        let collection = SubspaceCollection::from_text(&read_file(path)?)
            .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
        (DecoderConfig::new(collection), false)
    } else {
        let strategy = d
            .strategy
            .ok_or_else(|| Failure::usage("no collection given"))?;
        let size = d
            .size
            .ok_or_else(|| Failure::usage("--strategy needs --size"))?;
        (
            DecoderConfig::new(build_collection(
                m,
                r - 1,
                size,
                strategy,
                d.collection_seed,
            )?),
            false,
        )
    };
    if (config.order(), config.vars()) != (r, m) {
        return Err(Failure::data(format!(
            "collection of {}-dimensional subspaces of F2^{} does not fit RM({r}, {m})",
            config.collection.subspace_dim(),
            config.vars()
        )));
    }
    config.t_max = d.t_max;
    if let Some(w) = d.omega {
        config.omega = w;
    }
    config.early_stop = d.early_stop;
    config.include_channel_prior = d.channel_prior;
    if d.min_sum {
        config.check_rule = CheckRule::MinSum;
    }
    config.validate()?;
    let full = full
        || config.collection.len() as u128 == pcpa_core::subspace::gaussian_binomial(m, r - 1)?;
    Ok((config, full))
}

pub fn decode(a: &DecodeArgs) -> CmdResult {
    let (mut config, full) = decoder_config(a.r, a.m, &a.decoder)?;
    config.record_estimates = a.record_estimates;
    let rows = parse_llr_rows(&read_file(&a.llr)?)
        .map_err(|e| Failure::data(format!("{}: {e}", a.llr.display())))?;
    let decoder = PcpaDecoder::new(config)?;
    let mut results = Vec::with_capacity(rows.len());
    let mut converged = 0;
    for (i, llr) in rows.iter().enumerate() {
        let out = decoder
            .decode(llr)
            .map_err(|e| Failure::data(format!("{} row {}: {e}", a.llr.display(), i + 1)))?;
        converged += usize::from(out.converged);
        results.push(json!({
            "codeword": word_to_string(&out.codeword),
            "converged": out.converged,
            "iterations_run": out.iterations_run,
            "projections": out.projections,
            "final_llr": out.final_llr,
            "estimates": out.estimates.map(|iters| iters
                .iter()
                .map(|words| words.iter().map(|w| word_to_string(w)).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
        }));
    }
    let manifest = ExperimentManifest::new("decode", a)
        .code(a.r, a.m)
        .collection(&decoder.config().collection, !full);
    let doc = json!({
        "manifest": manifest,
        "decoder": DecoderDescriptor::of(decoder.config()),
        "results": results,
    });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &a.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "decoded {} words, {converged} ended on a codeword",
        rows.len()
    );
    Ok(())
}

pub fn wer(a: &WerArgs) -> CmdResult {
    let (config, full) = decoder_config(a.r, a.m, &a.decoder)?;
    let stopping = match a.trials {
        Some(n) => Stopping::FixedTrials(n),
        None => Stopping::TargetErrors {
            errors: a.target_errors,
            cap: a.cap,
        },
    };
    let code = RmCode::new(a.r, a.m)?;
    let report = run_wer(&code, &config, &a.snr, stopping, a.seed, a.workers)?;
    let manifest = ExperimentManifest::new("wer", a)
        .seed(a.seed)
        .code(a.r, a.m)
        .collection(&config.collection, !full);
    let prefix = resolve(a.out.as_deref(), "wer");
    let csv = with_suffix(&prefix, ".csv");
    let js = with_suffix(&prefix, ".json");
    write_file(&csv, &(manifest.comment_line() + &report.to_csv()))?;
    let doc = json!({ "manifest": manifest, "report": report });
    write_file(&js, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    eprintln!(
        "{} RM({},{}) r_S = {}",
        report.decoder.name, a.r, a.m, report.decoder.r_s
    );
    for row in &report.rows {
        eprintln!(
            "  {:>5} dB  {:>8} trials  {:>6} errors  WER {:.4e} [{:.4e}, {:.4e}]",
            row.snr_db, row.trials, row.word_errors, row.wer, row.wer_lower, row.wer_upper
        );
    }
    eprintln!("wrote {} and {}", csv.display(), js.display());
    Ok(())
}

pub fn freqmat(a: &FreqmatArgs) -> CmdResult {
    let code = RmCode::new(a.r, a.m)?;
    let fm = run_frequency_matrix(&code, a.snr, a.trials, a.seed, a.workers)?;
    let subspaces: Vec<String> = enumerate_subspaces(a.m, a.r - 1)?
        .iter()
        .map(format_subspace)
        .collect();
    let manifest = ExperimentManifest::new("freqmat", a)
        .seed(a.seed)
        .code(a.r, a.m);
    let prefix = resolve(a.out.as_deref(), "freqmat");
    let p_path = with_suffix(&prefix, "_p.csv");
    let r_path = with_suffix(&prefix, "_r.csv");
    let js = with_suffix(&prefix, ".json");
    write_file(&p_path, &(manifest.comment_line() + &fm.p_csv()))?;
    write_file(&r_path, &(manifest.comment_line() + &fm.r_csv()))?;
    let rho = fm.spearman_rho();
    let doc = json!({
        "manifest": manifest,
        "size": fm.size,
        "trials": fm.trials,
        "snr_db": fm.snr_db,
        "spearman_rho": rho,
        "symmetric": fm.is_symmetric(),
        "correct_rate": fm.correct_rate,
        "subspaces": subspaces,
    });
    write_file(&js, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    eprintln!(
        "{0}x{0} matrix at {1} dB over {2} trials: Spearman rho = {rho:.4}",
        fm.size, a.snr, a.trials
    );
    eprintln!(
        "wrote {}, {} and {}",
        p_path.display(),
        r_path.display(),
        js.display()
    );
    Ok(())
}

pub fn theorem1(a: &TheoremArgs) -> CmdResult {
    let closed = theorem1_probability(a.s, a.d, a.epsilon)?;
    let m = a.m.unwrap_or((2 * a.s + 1).saturating_sub(a.d));
    let (b1, b2) = subspace_pair(m, a.s, a.d)?;
    let empirical = theorem1_monte_carlo(&b1, &b2, a.epsilon, a.z, a.trials, a.seed)?;
    let sigma = (closed * (1.0 - closed) / a.trials as f64).sqrt();
    let manifest = ExperimentManifest::new("theorem1", a).seed(a.seed);
    let doc = json!({
        "manifest": manifest,
        "s": a.s,
        "d": a.d,
        "m": m,
        "epsilon": a.epsilon,
        "trials": a.trials,
        "closed_form": closed,
        "empirical": empirical,
        "std_error": sigma,
    });
    println!("{}", serde_json::to_string(&doc)?);
    eprintln!(
        "s = {}, d = {}, eps = {}: closed form {closed:.6}, Monte Carlo {empirical:.6} ({} sigma)",
        a.s,
        a.d,
        a.epsilon,
        if sigma > 0.0 {
            format!("{:.2}", (empirical - closed) / sigma)
        } else {
            "0".into()
        }
    );
    Ok(())
}
