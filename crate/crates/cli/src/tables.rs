use std::str::FromStr;

use dfs_core::dfs::{MultiplicityTable, SpinLabel, Trine};
use dfs_core::photonic::detection_table;
use serde_json::{json, Map, Value};

use crate::{CliError, CliResult, RunReport};

const PHOTONIC_TOL: f64 = 1e-12;

/// Largest `n` whose completeness sum `2^n` still fits the report's integers.
const MAX_N: u32 = 63;

pub fn cmd_multiplicity(n: u32, j: Option<&str>) -> CliResult<RunReport> {
    if n == 0 || n > MAX_N {
        return Err(CliError::usage(format!("--n must lie in 1..={MAX_N}")));
    }
    let table = MultiplicityTable::new(n)?;
    let mut entries = Map::new();
    for (spin, k) in table.entries() {
        entries.insert(spin.to_string(), json!(k));
    }
    let checksum = table.completeness_sum();
    let expected = 1u128 << n;
    let mut results = json!({
        "n": n,
        "entries": entries,
        "checksum": checksum as u64,
        "expected_checksum": expected as u64,
    });
    if let Some(j) = j {
        let spin =
            SpinLabel::from_str(j).map_err(|_| CliError::usage(format!("bad spin {j:?}")))?;
        results["j"] = json!(spin.to_string());
        results["multiplicity"] = json!(dfs_core::dfs::multiplicity(n, spin)?);
    }
    let params = json!({ "n": n, "j": j });
    Ok(RunReport::new(
        "multiplicity",
        params,
        results,
        checksum == expected,
    ))
}

fn input_label(basis: Trine, perp: bool) -> String {
    if perp {
        format!("{basis}_perp")
    } else {
        basis.to_string()
    }
}

pub fn cmd_photonic_table() -> CliResult<RunReport> {
    let mut rows = Vec::new();
    let mut pass = true;
    for row in detection_table()? {
        let correct = if row.perp_input {
            row.outcomes.xi_perp
        } else {
            row.outcomes.xi
        };
        let ok = (correct - 1.0).abs() < PHOTONIC_TOL && row.outcomes.invalid.abs() < PHOTONIC_TOL;
        pass &= ok;
        let events: Map<String, Value> = row
            .distribution
            .iter()
            .map(|(e, p)| (e.to_string(), json!(p)))
            .collect();
        rows.push(json!({
            "basis": row.basis.to_string(),
            "input": input_label(row.basis, row.perp_input),
            "lost_photon": row.lost_photon,
            "events": events,
            "outcomes": {
                "XI": row.outcomes.xi,
                "XI_PERP": row.outcomes.xi_perp,
                "INVALID": row.outcomes.invalid,
            },
            "correct": ok,
        }));
    }
    let results = json!({ "rows": rows, "tolerance": PHOTONIC_TOL });
    Ok(RunReport::new("photonic-table", json!({}), results, pass))
}
