use dfs_core::dfs::Trine;
use dfs_core::photonic::Outcome;
use dfs_core::qkd::{
    conditional_exclusion_table, run_protocol, run_rounds, Backend, ChannelConfig, ExclusionCell,
    ProtocolStats, TrineReference,
};

fn within_sigma(cell: &ExclusionCell, p: f64, k: f64) -> bool {
    (cell.probability - p).abs() <= k * cell.sigma_under(p)
}

#[test]
fn rejects_bad_arguments() {
    assert!(ChannelConfig::new(false, 1.5, 0).is_err());
    assert!(ChannelConfig::new(false, -0.1, 0).is_err());
    let ch = ChannelConfig::new(false, 0.0, 0).unwrap();
    assert!(run_protocol(0, &ch, Backend::Abstract).is_err());
}

#[test]
fn counts_sum_to_rounds() {
    let ch = ChannelConfig::new(true, 0.5, 99).unwrap();
    let stats = run_protocol(3000, &ch, Backend::Abstract).unwrap();
    assert_eq!(stats.counts.values().sum::<u64>(), stats.rounds);
    assert_eq!(stats.rounds, 3000);
    assert_eq!(
        stats.sifted_pairs,
        stats.count_where(|k| k.outcome == Outcome::XiPerp)
    );
}

#[test]
fn exclusion_statistics_without_loss() {
    let ch = ChannelConfig::new(true, 0.0, 2024).unwrap();
    let stats = run_protocol(20_000, &ch, Backend::Abstract).unwrap();
    let table = conditional_exclusion_table(&stats);
    let diag = table.diagonal().unwrap();
    assert_eq!(diag.xi_perp, 0);
    let off = table.off_diagonal().unwrap();
    assert!(within_sigma(&off, 0.75, 3.0), "{off:?}");
    assert_eq!(stats.count_where(|k| k.outcome == Outcome::Invalid), 0);
}

#[test]
fn exclusion_survives_certain_loss() {
    let ch = ChannelConfig::new(true, 1.0, 7).unwrap();
    let stats = run_protocol(20_000, &ch, Backend::Abstract).unwrap();
    assert_eq!(stats.count_where(|k| !k.lost), 0);
    let table = conditional_exclusion_table(&stats);
    assert_eq!(table.diagonal().unwrap().xi_perp, 0);
    assert!(within_sigma(&table.off_diagonal().unwrap(), 0.75, 3.0));
    assert_eq!(stats.count_where(|k| k.outcome == Outcome::Invalid), 0);
}

#[test]
fn backends_produce_identical_rounds() {
    let ch = ChannelConfig::new(true, 0.5, 31).unwrap();
    let a = run_protocol(400, &ch, Backend::Abstract).unwrap();
    let b = run_protocol(400, &ch, Backend::Fock).unwrap();
    assert_eq!(a, b);
}

#[test]
fn partitioned_runs_merge_to_sequential() {
    let ch = ChannelConfig::new(true, 0.3, u64::MAX - 10).unwrap();
    let reference = TrineReference::new();
    let whole = run_rounds(0..1000, &ch, Backend::Abstract, &reference).unwrap();
    let mut merged = ProtocolStats::default();
    for range in [0..137, 137..600, 600..1000] {
        merged.merge(&run_rounds(range, &ch, Backend::Abstract, &reference).unwrap());
    }
    assert_eq!(whole, merged);
}

#[test]
fn same_seed_same_stats() {
    let ch = ChannelConfig::new(true, 0.2, 5).unwrap();
    let a = run_protocol(500, &ch, Backend::Abstract).unwrap();
    let b = run_protocol(500, &ch, Backend::Abstract).unwrap();
    assert_eq!(a, b);
}

#[test]
fn empty_cells_are_absent() {
    let ch = ChannelConfig::new(false, 0.0, 0).unwrap();
    let stats = run_protocol(1, &ch, Backend::Abstract).unwrap();
    let table = conditional_exclusion_table(&stats);
    let filled = Trine::ALL
        .iter()
        .flat_map(|&k| Trine::ALL.map(|l| table.get(k, l)))
        .filter(Option::is_some)
        .count();
    assert_eq!(filled, 1);
}
