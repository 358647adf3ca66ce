use std::path::PathBuf;
use std::thread;

use clap::{Args, ValueEnum};
use dfs_core::dfs::Trine;
use dfs_core::qkd::{
    conditional_exclusion_table, run_rounds, Backend, ChannelConfig, ExclusionCell, ExclusionTable,
    ProtocolStats, TrineReference,
};
use serde_json::{json, Value};

use crate::{CliError, CliResult, RunReport, Switch};

/// Off-diagonal exclusion probability for trine states, `1 − |⟨Ξ_k|Ξ_l⟩|²`.
const OFF_DIAGONAL_TARGET: f64 = 0.75;
const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Abstract,
    Fock,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Abstract => Backend::Abstract,
            BackendArg::Fock => Backend::Fock,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct QkdArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,
    /// Probability that one photon is lost per round.
    #[arg(long, default_value_t = 0.0)]
    pub loss: f64,
    #[arg(long, value_enum, default_value = "on")]
    pub noise: Switch,
    #[arg(long, value_enum, default_value = "abstract")]
    pub backend: BackendArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Write the exclusion table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Splits the rounds into contiguous ranges, one per thread. Each round
/// seeds itself, so the merged result does not depend on the split.
pub fn simulate(
    rounds: u64,
    channel: &ChannelConfig,
    backend: Backend,
    threads: u32,
) -> CliResult<ProtocolStats> {
    let reference = TrineReference::new();
    let threads = u64::from(threads).min(rounds).max(1);
    let chunk = rounds.div_ceil(threads);
    let parts: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let range = (t * chunk).min(rounds)..((t + 1) * chunk).min(rounds);
                let reference = &reference;
                s.spawn(move || run_rounds(range, channel, backend, reference))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut stats = ProtocolStats::default();
    for part in parts {
        stats.merge(&part?);
    }
    Ok(stats)
}

fn cell_json(cell: Option<ExclusionCell>) -> Value {
    match cell {
        None => Value::Null,
        Some(c) => json!({
            "trials": c.trials,
            "xi_perp": c.xi_perp,
            "probability": c.probability,
            "std_error": c.std_error,
        }),
    }
}

/// CSV with one row per (Alice, Bob) cell; absent cells have empty fields.
pub fn exclusion_csv(table: &ExclusionTable) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_csv = |e: csv::Error| CliError::usage(format!("csv: {e}"));
    w.write_record([
        "alice",
        "bob",
        "trials",
        "xi_perp",
        "probability",
        "std_error",
    ])
    .map_err(to_csv)?;
    for alice in Trine::ALL {
        for bob in Trine::ALL {
            let fields = match table.get(alice, bob) {
                Some(c) => [
                    c.trials.to_string(),
                    c.xi_perp.to_string(),
                    format!("{:.14e}", c.probability),
                    format!("{:.14e}", c.std_error),
                ],
                None => Default::default(),
            };
            let mut record = vec![alice.to_string(), bob.to_string()];
            record.extend(fields);
            w.write_record(&record).map_err(to_csv)?;
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn cmd_qkd(args: &QkdArgs) -> CliResult<RunReport> {
    let channel = ChannelConfig::new(args.noise.is_on(), args.loss, args.seed)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let stats = simulate(args.rounds, &channel, args.backend.into(), args.threads)?;
    let table = conditional_exclusion_table(&stats);

    let counts: Vec<Value> = stats
        .counts
        .iter()
        .map(|(k, n)| {
            json!({
                "alice": k.alice.to_string(),
                "bob": k.bob.to_string(),
                "outcome": k.outcome.as_str(),
                "lost": k.lost,
                "count": n,
            })
        })
        .collect();
    let matrix: Vec<Vec<Value>> = Trine::ALL
        .iter()
        .map(|&a| {
            Trine::ALL
                .iter()
                .map(|&b| cell_json(table.get(a, b)))
                .collect()
        })
        .collect();

    let diagonal = table.diagonal();
    let off = table.off_diagonal();
    let diagonal_ok = diagonal.is_none_or(|c| c.xi_perp == 0);
    let off_z =
        off.map(|c| (c.probability - OFF_DIAGONAL_TARGET) / c.sigma_under(OFF_DIAGONAL_TARGET));
    let off_ok = off_z.is_none_or(|z| z.abs() <= SIGMAS);

    if let Some(path) = &args.csv {
        let text = exclusion_csv(&table)?;
        std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }

    let results = json!({
        "rounds": stats.rounds,
        "sifted_pairs": stats.sifted_pairs,
        "counts": counts,
        "exclusion_table": matrix,
        "diagonal": cell_json(diagonal),
        "off_diagonal": cell_json(off),
        "off_diagonal_target": OFF_DIAGONAL_TARGET,
        "off_diagonal_z": off_z,
    });
    let params = json!({
        "rounds": args.rounds,
        "loss": args.loss,
        "noise": args.noise.is_on(),
        "backend": match args.backend { BackendArg::Abstract => "abstract", BackendArg::Fock => "fock" },
        "seed": args.seed,
    });
    Ok(RunReport::new(
        "qkd",
        params,
        results,
        diagonal_ok && off_ok,
    ))
}
