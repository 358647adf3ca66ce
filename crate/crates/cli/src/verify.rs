use clap::{Args, ValueEnum};
use dfs_core::dfs::{
    dfs_basis, multiplicity, psi_minus, verify_invariance, xi, DfsBasis, SpinLabel, Trine,
};
use dfs_core::linalg::{self, CMatrix};
use dfs_core::lossrec::{
    branch_vectors, cnot_decomposition_check, lose_two, post_loss_invariance, recover_four_qubit,
    recovery_fidelity, two_loss_counterexample, verify_branch_cycle, verify_branch_property,
    LogicalAmplitudes,
};
use dfs_core::photonic::{detection_table, measure_trine_basis};
use dfs_core::qcore::{fidelity, PureState};
use dfs_core::qkd::{uu_random_check, TrineReference};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::{CliError, CliResult, RunReport};

/// A control state must move by more than this to count as detected.
const CONTROL_MIN_DEVIATION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Invariance,
    Branch,
    Recovery,
    TwoLoss,
    Photonic,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Invariance => "invariance",
            Suite::Branch => "branch",
            Suite::Recovery => "recovery",
            Suite::TwoLoss => "two-loss",
            Suite::Photonic => "photonic",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Number of particles (invariance and branch suites).
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Local dimension (invariance and branch suites).
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Haar draws or random inputs per check.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = dfs_core::EXACT_TOL)]
    pub tol: f64,
}

struct Outcome {
    results: Value,
    pass: bool,
}

fn checked_basis(n: usize, d: usize) -> CliResult<DfsBasis> {
    if d < 2 || n < 2 {
        return Err(CliError::usage("--n and --d must be at least 2"));
    }
    if !n.is_multiple_of(d) {
        return Err(CliError::usage(format!(
            "no invariant subspace: --d {d} does not divide --n {n}"
        )));
    }
    linalg::hilbert_dim(d, n)?;
    Ok(dfs_basis(n, d)?)
}

fn invariance(basis: &DfsBasis, args: &VerifyArgs) -> Outcome {
    let (n, d) = (basis.num_sites(), basis.local_dim());
    let mut max_deviation: f64 = 0.0;
    for (k, psi) in basis.states().iter().enumerate() {
        let r = verify_invariance(psi, args.trials, args.seed.wrapping_add(k as u64), args.tol);
        max_deviation = max_deviation.max(r.max_deviation);
    }
    let gram_error =
        linalg::max_abs(&(basis.gram() - CMatrix::identity(basis.dimension(), basis.dimension())));
    let expected_dimension = if d == 2 {
        multiplicity(n as u32, SpinLabel::ZERO)
            .ok()
            .map(|k| k as usize)
    } else {
        None
    };
    let dim_ok = expected_dimension.is_none_or(|k| k == basis.dimension());
    let pass = max_deviation < args.tol && gram_error < args.tol && dim_ok;
    Outcome {
        results: json!({
            "dimension": basis.dimension(),
            "expected_dimension": expected_dimension,
            "max_deviation": max_deviation,
            "orthonormality_error": gram_error,
            "pass": pass,
        }),
        pass,
    }
}

fn branch(basis: &DfsBasis, args: &VerifyArgs) -> CliResult<Outcome> {
    let (n, d) = (basis.num_sites(), basis.local_dim());
    let states = basis.states();
    let mut property_error: f64 = 0.0;
    let mut cycle_error: f64 = 0.0;
    let mut post_loss: f64 = 0.0;
    for phi in states {
        for site in 1..=n {
            for psi in states {
                let m = verify_branch_property(phi, psi, site)?;
                let expect = CMatrix::identity(d, d) * phi.inner(psi)?;
                property_error = property_error.max(linalg::max_abs(&(m - expect)));
            }
            cycle_error = cycle_error.max(verify_branch_cycle(phi, site)?.max_modulus_deviation);
            let r = post_loss_invariance(phi, site, args.trials, args.seed)?;
            post_loss = post_loss.max(r.max_deviation);
        }
    }
    let control = PureState::basis(d, &vec![0; n])?;
    let control_deviation =
        post_loss_invariance(&control, 1, args.trials, args.seed)?.max_deviation;
    let pass = property_error < args.tol
        && cycle_error < args.tol
        && post_loss < args.tol
        && control_deviation > CONTROL_MIN_DEVIATION;
    Ok(Outcome {
        results: json!({
            "branch_property_error": property_error,
            "branch_cycle_error": cycle_error,
            "post_loss_max_deviation": post_loss,
            "control_deviation": control_deviation,
            "pass": pass,
        }),
        pass,
    })
}

fn recovery(args: &VerifyArgs) -> CliResult<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut min_branch: f64 = 1.0;
    let mut min_channel: f64 = 1.0;
    for _ in 0..args.trials {
        let psi = LogicalAmplitudes::random(&mut rng).encode();
        for site in 1..=4 {
            for b in branch_vectors(&psi, site)? {
                min_branch =
                    min_branch.min(recover_four_qubit(&b, &psi, site)?.fidelity_with_original);
            }
            min_channel = min_channel.min(recovery_fidelity(&psi, site)?);
        }
    }
    let cnot = cnot_decomposition_check();
    let pass = min_branch >= 1.0 - args.tol && min_channel >= 1.0 - args.tol && cnot;
    Ok(Outcome {
        results: json!({
            "min_branch_fidelity": min_branch,
            "min_channel_fidelity": min_channel,
            "cnot_decomposition": cnot,
            "pass": pass,
        }),
        pass,
    })
}

fn two_loss(args: &VerifyArgs) -> CliResult<Outcome> {
    let singlet_fidelity = fidelity(&psi_minus(), &lose_two(&xi(Trine::Xi1), [1, 2])?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let inputs: Vec<LogicalAmplitudes> = (0..args.trials.max(1))
        .map(|_| LogicalAmplitudes::random(&mut rng))
        .collect();
    let report = two_loss_counterexample(&inputs)?;
    let pass = (singlet_fidelity - 1.0).abs() < args.tol && report.exhibited;
    let witness = report.witness.map(|i| {
        let w = &report.entries[i];
        json!({
            "alpha": [w.input.alpha().re, w.input.alpha().im],
            "beta": [w.input.beta().re, w.input.beta().im],
            "trace_distance": w.partner_trace_distance,
        })
    });
    Ok(Outcome {
        results: json!({
            "lost_sites": report.lost_sites,
            "singlet_fidelity": singlet_fidelity,
            "min_trace_distance": report.min_trace_distance,
            "witness": witness,
            "exhibited": report.exhibited,
            "pass": pass,
        }),
        pass,
    })
}

fn photonic(args: &VerifyArgs) -> CliResult<Outcome> {
    let mut table_error: f64 = 0.0;
    for row in detection_table()? {
        let correct = if row.perp_input {
            row.outcomes.xi_perp
        } else {
            row.outcomes.xi
        };
        table_error = table_error
            .max((correct - 1.0).abs())
            .max(row.outcomes.invalid.abs());
    }
    let reference = TrineReference::new();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut backend_gap: f64 = 0.0;
    for _ in 0..args.trials {
        let psi = LogicalAmplitudes::random(&mut rng).encode();
        for basis in Trine::ALL {
            for lost in [None, Some(1), Some(2), Some(3), Some(4)] {
                let a = reference.measure(&psi, basis, lost)?;
                let f = measure_trine_basis(&psi, basis, lost)?;
                backend_gap = backend_gap.max(a.max_abs_diff(&f));
            }
        }
    }
    let uu = uu_random_check(args.trials.max(1) as u64, args.seed)?;
    let pass = table_error < args.tol && backend_gap < args.tol && uu.pass;
    Ok(Outcome {
        results: json!({
            "table_error": table_error,
            "backend_max_gap": backend_gap,
            "pairwise_noise_min_correct": uu.min_correct,
            "pairwise_noise_max_invalid": uu.max_invalid,
            "pass": pass,
        }),
        pass,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<RunReport> {
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let needs_basis = matches!(args.suite, Suite::Invariance | Suite::Branch | Suite::All);
    let basis = if needs_basis {
        Some(checked_basis(args.n, args.d)?)
    } else {
        None
    };
    let mut suites = Map::new();
    let mut pass = true;
    let mut add = |name: &str, outcome: Outcome| {
        pass &= outcome.pass;
        suites.insert(name.to_owned(), outcome.results);
    };
    let run = |s: Suite| matches!(args.suite, Suite::All) || args.suite == s;
    if run(Suite::Invariance) {
        add(
            "invariance",
            invariance(basis.as_ref().expect("basis built"), args),
        );
    }
    if run(Suite::Branch) {
        add(
            "branch",
            branch(basis.as_ref().expect("basis built"), args)?,
        );
    }
    if run(Suite::Recovery) {
        add("recovery", recovery(args)?);
    }
    if run(Suite::TwoLoss) {
        add("two-loss", two_loss(args)?);
    }
    if run(Suite::Photonic) {
        add("photonic", photonic(args)?);
    }
    let params = json!({
        "suite": args.suite.name(),
        "n": args.n,
        "d": args.d,
        "trials": args.trials,
        "seed": args.seed,
        "tol": args.tol,
    });
    Ok(RunReport::new(
        "verify",
        params,
        json!({ "suites": suites }),
        pass,
    ))
}
