use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use parid::ensemble::{
    concentration_diagnostic, edge_trace_check, run_ensemble, DichotomyThresholds, EnsembleConfig,
};
use parid::io::{
    create_output, format_real, write_degree_sequence_csv, write_edge_trace_csv, write_header,
    write_jsonl, write_raw_records_jsonl, write_summary_csv, write_theory_table_csv, Header,
};
use parid::process::{run, InitialLaw, ParidConfig, Truncation};
use parid::sampling::tail_constants;
use parid::seed::derive_seed;
use parid::theory::{
    check_inverse_moments, check_lemma31, check_lemma32, exact_enumeration_oracle,
    monte_carlo_distribution, product_sweep, total_variation, BoundVerdict, TheoryTable,
};
use parid::Error;

use crate::args::{EnsembleArgs, LawArgs, OracleArgs, SimulateArgs, TheoryCommand, VerifyCommand};

/// Ways a command can end unsuccessfully, each with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// At least one verdict did not hold (exit 1).
    Verdict,
    /// Invalid input or unusable output path (exit 2).
    Usage(String),
    /// Refused or aborted for size reasons (exit 3).
    Guard(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Self::Verdict => 1,
            Self::Usage(_) => 2,
            Self::Guard(_) => 3,
        }
    }

    pub fn message(&self) -> Option<&str> {
        match self {
            Self::Verdict => None,
            Self::Usage(m) | Self::Guard(m) => Some(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Io(_) | Error::Json(_) => Self::Usage(e.to_string()),
            Error::ResourceGuard(_)
            | Error::StateSpace { .. }
            | Error::EdgeOverflow { .. }
            | Error::Ensemble { .. } => Self::Guard(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `1:p1,2:p2,...` into `pmf[i - 1] = p_i`.
pub fn parse_pmf(text: &str) -> Result<Vec<f64>, Failure> {
    let mut pmf = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Failure::Usage(format!("malformed pmf entry `{item}`; expected `value:probability`"));
        let (k, p) = item.split_once(':').ok_or_else(bad)?;
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        let p: f64 = p.trim().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(Failure::Usage("pmf values must be positive integers".into()));
        }
        if pmf.len() < k {
            pmf.resize(k, 0.0);
        }
        if pmf[k - 1] != 0.0 {
            return Err(Failure::Usage(format!("pmf value {k} listed twice")));
        }
        pmf[k - 1] = p;
    }
    if pmf.is_empty() {
        return Err(Failure::Usage("pmf is empty".into()));
    }
    Ok(pmf)
}

fn parse_truncation(text: &str, alpha: f64) -> Result<Truncation, Failure> {
    match text {
        "auto" => Ok(Truncation::horizon_for(alpha)),
        "none" => Ok(Truncation::None),
        other => other
            .parse()
            .map(Truncation::Explicit)
            .map_err(|_| Failure::Usage(format!("--truncate must be auto, none or an integer, got `{other}`"))),
    }
}

fn build_config(law: &LawArgs, steps: u64) -> Result<ParidConfig, Failure> {
    let initial = match (law.alpha, &law.pmf) {
        (Some(alpha), _) => InitialLaw::PowerLaw {
            alpha,
            truncation: parse_truncation(&law.truncate, alpha)?,
        },
        (None, Some(pmf)) => InitialLaw::Finite { pmf: parse_pmf(pmf)? },
        (None, None) => return Err(Failure::Usage("either --alpha or --pmf is required".into())),
    };
    let limit = (!law.no_guard).then_some(law.endpoint_limit);
    Ok(ParidConfig::new(initial, steps)
        .with_delta(law.delta)
        .with_k_max(law.k_max)
        .with_endpoint_limit(limit))
}

fn config_value(config: &ParidConfig) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(config).map_err(Error::from)?;
    v["resolved_cap"] = json!(config.resolved_cap()?);
    Ok(v)
}

fn threads_or_default(threads: Option<usize>) -> usize {
    threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn ensemble_header(command: &str, config: &EnsembleConfig) -> Result<Header, Failure> {
    let mut value = serde_json::to_value(config).map_err(Error::from)?;
    if let Value::Object(map) = &mut value {
        map.remove("parallelism");
    }
    value["base"]["resolved_cap"] = json!(config.base.resolved_cap()?);
    let seeds = json!({
        "master_seed": config.master_seed,
        "replica_seeds": (0..config.replicas).map(|i| config.replica_seed(i)).collect::<Vec<_>>(),
    });
    Ok(Header::new(command, value, seeds, config.parallelism))
}

fn open_with_header(path: &Path, header: &Header) -> Result<std::io::BufWriter<std::fs::File>, Failure> {
    let mut w = create_output(path)?;
    write_header(&mut w, header)?;
    Ok(w)
}

pub fn simulate(a: SimulateArgs) -> CmdResult {
    let config = build_config(&a.law, a.steps)?
        .with_seed(a.seed)
        .with_checkpoints(a.checkpoints.clone());
    let header = Header::new("simulate", config_value(&config)?, json!([a.seed]), 1);
    println!("simulating {} steps (seed {})", config.steps, config.seed);
    let out = run(&config)?;

    let mut snapshots: Vec<_> = out.checkpoints.iter().collect();
    if snapshots.last().map(|s| s.t) != Some(config.steps) {
        snapshots.push(&out.final_sequence);
    }
    for seq in snapshots {
        let path = a.out.join(format!("degrees_t{}.csv", seq.t));
        let mut w = open_with_header(&path, &header)?;
        write_degree_sequence_csv(&mut w, seq)?;
        w.flush()?;
        println!("wrote {}", path.display());
    }
    let path = a.out.join("edge_trace.csv");
    let mut w = open_with_header(&path, &header)?;
    write_edge_trace_csv(&mut w, &out.edge_trace)?;
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_manifest(dir: &Path, header: &Header, err: &Error) -> Result<(), Failure> {
    if let Error::Ensemble { total, completed, failed } = err {
        let path = dir.join("manifest.json");
        let mut w = open_with_header(&path, header)?;
        let manifest = json!({ "total": total, "completed": completed, "failed": failed });
        writeln!(w, "{manifest}")?;
        w.flush()?;
        println!("wrote partial-results manifest {}", path.display());
    }
    Ok(())
}

pub fn ensemble(a: EnsembleArgs) -> CmdResult {
    let base = build_config(&a.law, a.steps)?;
    let config = EnsembleConfig::new(base, a.replicas, a.master_seed)
        .with_parallelism(threads_or_default(a.threads))
        .with_tracked_k(a.tracked_k.clone())
        .with_checkpoints(a.checkpoints.clone())
        .with_thresholds(DichotomyThresholds {
            concentrating: a.conc_threshold,
            non_concentrating: a.nonconc_threshold,
        });
    let header = ensemble_header("ensemble", &config)?;
    println!(
        "running {} replicas of {} steps on {} threads",
        config.replicas, config.base.steps, config.parallelism
    );
    let out = match run_ensemble(&config) {
        Ok(out) => out,
        Err(e) => {
            write_manifest(&a.out, &header, &e)?;
            return Err(e.into());
        }
    };

    let path = a.out.join("raw.jsonl");
    let mut w = open_with_header(&path, &header)?;
    write_raw_records_jsonl(&mut w, &out.records, &config.tracked_k)?;
    w.flush()?;
    println!("wrote {}", path.display());

    let path = a.out.join("summary.csv");
    let mut w = open_with_header(&path, &header)?;
    write_summary_csv(&mut w, &out.summary)?;
    w.flush()?;
    println!("wrote {}", path.display());

    let taus = &out.summary.taus;
    let tau_early = a.tau_early.unwrap_or(taus[0]);
    let tau_late = a.tau_late.unwrap_or(*taus.last().expect("final step present"));
    let report = concentration_diagnostic(&out.summary, tau_early, tau_late, config.thresholds)?;
    for e in &report.entries {
        let ratio = e.std_ratio.map_or("undefined".to_owned(), |r| format!("{r:.4}"));
        println!("k={} std ratio {ratio} ({:?})", e.k, e.verdict);
    }
    let edge_check = edge_trace_check(&out.summary).ok();
    let path = a.out.join("report.json");
    let mut w = open_with_header(&path, &header)?;
    let body = json!({ "concentration": report, "edge_check": edge_check });
    writeln!(w, "{body}")?;
    w.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn theory(c: TheoryCommand) -> CmdResult {
    match c {
        TheoryCommand::Bk { k_max, out } => {
            let table = TheoryTable::new(k_max, None)?;
            let header = Header::new("theory bk", json!({ "k_max": k_max }), json!([]), 1);
            let mut w = open_with_header(&out, &header)?;
            write_theory_table_csv(&mut w, &table)?;
            w.flush()?;
            for (k, b) in table.b_k.iter().enumerate().take(10) {
                println!("b_{} = {}", k + 1, format_real(*b));
            }
            println!("1 - sum b_k = {}", format_real(table.tail_remainder));
            println!("wrote {}", out.display());
        }
        TheoryCommand::Bkprime { t, k_max, out } => {
            let table = TheoryTable::new(k_max, Some(t))?;
            let header = Header::new("theory bkprime", json!({ "t": t, "k_max": k_max }), json!([]), 1);
            let mut w = open_with_header(&out, &header)?;
            write_theory_table_csv(&mut w, &table)?;
            w.flush()?;
            println!("max |residual| = {:e}", table.max_abs_residual());
            println!("wrote {}", out.display());
        }
        TheoryCommand::Constants { alpha, t, out } => {
            let k = tail_constants(alpha, t)?;
            let header = Header::new("theory constants", json!({ "alpha": alpha, "t": t }), json!([]), 1);
            let mut w = open_with_header(&out, &header)?;
            serde_json::to_writer(&mut w, &k).map_err(Error::from)?;
            writeln!(w)?;
            w.flush()?;
            println!("c = {}, C(alpha, t) = {}, C_inf = {}", k.c, k.c_of_t, k.c_inf);
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

/// Runs `check` on each grid point, skipping points whose preconditions fail.
fn sweep<P: std::fmt::Debug>(
    points: Vec<P>,
    mut check: impl FnMut(&P) -> parid::Result<BoundVerdict>,
) -> Result<Vec<BoundVerdict>, Failure> {
    let mut verdicts = Vec::new();
    for p in points {
        match check(&p) {
            Ok(v) => {
                println!(
                    "{:?} {p:?}: observed {:.6e}, bound {:.6e}, holds={}",
                    v.lemma_id, v.observed_value, v.bound_value, v.holds
                );
                verdicts.push(v);
            }
            Err(Error::Domain(msg)) => eprintln!("warning: skipping {p:?}: {msg}"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(verdicts)
}

fn finish_verdicts(command: &str, config: Value, seeds: Value, out: &Path, verdicts: &[BoundVerdict]) -> CmdResult {
    let header = Header::new(command, config, seeds, 1);
    let mut w = open_with_header(out, &header)?;
    write_jsonl(&mut w, verdicts)?;
    w.flush()?;
    let failed = verdicts.iter().filter(|v| !v.holds).count();
    println!("{} verdicts, {failed} failed; wrote {}", verdicts.len(), out.display());
    if failed > 0 {
        Err(Failure::Verdict)
    } else {
        Ok(())
    }
}

pub fn verify(c: VerifyCommand) -> CmdResult {
    match c {
        VerifyCommand::Lemma31 { alpha, t, z, samples, seed, out } => {
            let mut points = Vec::new();
            for &a in &alpha {
                for &tt in &t {
                    for &zz in &z {
                        points.push((a, tt, zz));
                    }
                }
            }
            let seeds: Vec<u64> = (0..points.len() as u64).map(|i| derive_seed(seed, i)).collect();
            let mut i = 0;
            let verdicts = sweep(points, |&(a, tt, zz)| {
                i += 1;
                check_lemma31(a, tt, zz, samples, seeds[i - 1])
            })?;
            let config = json!({ "alpha": alpha, "t": t, "z": z, "samples": samples });
            finish_verdicts("verify lemma31", config, json!({ "seed": seed, "point_seeds": seeds }), &out, &verdicts)
        }
        VerifyCommand::Lemma32 { alpha, t, gamma, out } => {
            let mut points = Vec::new();
            for &a in &alpha {
                for &tt in &t {
                    for &g in &gamma {
                        points.push((a, tt, g));
                    }
                }
            }
            let verdicts = sweep(points, |&(a, tt, g)| check_lemma32(a, tt, g))?;
            let config = json!({ "alpha": alpha, "t": t, "gamma": gamma });
            finish_verdicts("verify lemma32", config, json!([]), &out, &verdicts)
        }
        VerifyCommand::Edges { t, replicas, master_seed, threads, checkpoints, out } => {
            let checkpoints = if checkpoints.is_empty() {
                (1..=10).map(|i| (t * i / 10).max(1)).collect()
            } else {
                checkpoints
            };
            let base = ParidConfig::power_law(2.0, Truncation::HorizonAlphaEq2, t).with_k_max(10);
            let config = EnsembleConfig::new(base, replicas, master_seed)
                .with_parallelism(threads_or_default(threads))
                .with_tracked_k(vec![1])
                .with_checkpoints(checkpoints);
            let header = ensemble_header("verify edges", &config)?;
            println!("running {replicas} replicas of {t} steps");
            let summary = run_ensemble(&config)?.summary;
            let verdicts = sweep(vec![t], |_| edge_trace_check(&summary))?;
            finish_verdicts("verify edges", header.config, header.seeds, &out, &verdicts)
        }
        VerifyCommand::Invmoments { t, s, ell, samples, seed, out } => {
            let s = s.unwrap_or(t);
            let seeds: Vec<u64> = (0..ell.len() as u64).map(|i| derive_seed(seed, i)).collect();
            let points: Vec<(usize, u32)> = ell.iter().copied().enumerate().collect();
            let verdicts = sweep(points, |&(i, l)| check_inverse_moments(t, s, l, samples, seeds[i]))?;
            let config = json!({ "t": t, "s": s, "ell": ell, "samples": samples });
            finish_verdicts("verify invmoments", config, json!({ "seed": seed, "point_seeds": seeds }), &out, &verdicts)
        }
        VerifyCommand::Product { cases, seed, out } => {
            let result = product_sweep(cases, seed);
            println!(
                "{} cases, {} violations, worst relative margin {:e}",
                result.cases, result.violations, result.worst_relative_margin
            );
            let config = json!({ "cases": cases });
            finish_verdicts("verify product", config, json!([seed]), &out, &[result.verdict(seed)])
        }
    }
}

pub fn oracle(a: OracleArgs) -> CmdResult {
    let pmf = parse_pmf(&a.pmf)?;
    let exact = exact_enumeration_oracle(&pmf, a.delta, a.t)?;
    let empirical = a
        .compare_samples
        .map(|n| monte_carlo_distribution(&pmf, a.delta, a.t, n, a.seed))
        .transpose()?;

    let config = json!({ "t": a.t, "pmf": pmf, "delta": a.delta, "compare_samples": a.compare_samples });
    let header = Header::new("oracle", config, json!([a.seed]), 1);
    let mut w = open_with_header(&a.out, &header)?;
    for (multiset, p) in &exact.probabilities {
        let mut line = json!({ "multiset": multiset, "probability": p });
        if let Some(emp) = &empirical {
            line["empirical"] = json!(emp.get(multiset).copied().unwrap_or(0.0));
        }
        writeln!(w, "{line}")?;
        println!("{multiset:?}: {p}");
    }
    if let Some(emp) = &empirical {
        let tv = total_variation(&exact.probabilities, emp);
        writeln!(w, "{}", json!({ "total_variation": tv, "samples": a.compare_samples }))?;
        println!("total variation distance: {tv:.6}");
    }
    w.flush()?;
    println!("wrote {}", a.out.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_parsing() {
        assert_eq!(parse_pmf("1:0.7,2:0.3").unwrap(), vec![0.7, 0.3]);
        assert_eq!(parse_pmf("2:1.0").unwrap(), vec![0.0, 1.0]);
        assert!(parse_pmf("1:0.5,1:0.5").is_err());
        assert!(parse_pmf("0:1").is_err());
        assert!(parse_pmf("x").is_err());
        assert!(parse_pmf("").is_err());
    }

    #[test]
    fn truncation_parsing() {
        assert_eq!(parse_truncation("auto", 2.0).unwrap(), Truncation::HorizonAlphaEq2);
        assert_eq!(parse_truncation("auto", 3.0).unwrap(), Truncation::None);
        assert_eq!(parse_truncation("17", 2.0).unwrap(), Truncation::Explicit(17));
        assert!(parse_truncation("soft", 2.0).is_err());
    }
}
