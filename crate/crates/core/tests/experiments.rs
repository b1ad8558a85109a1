use quron_walk::classical::{ctmc_evolve, ProbabilityVector, RateMatrix};
use quron_walk::experiments::{
    default_coin_grid, run_classical, run_coin_check, run_hopfield, run_simulate, run_sweep, ExperimentError,
    ScenarioConfig, SweepGrid,
};
use quron_walk::gkls::{evolve, DensityMatrix, WalkError, WalkParams};
use quron_walk::hypercube::{build_jump_operators, HypercubeSpec};

use proptest::prelude::*;

fn config(json: &str) -> ScenarioConfig {
    ScenarioConfig::from_json(json).unwrap()
}

fn parse_csv(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn simulate_csv_rows_are_distributions() {
    let cfg = config(r#"{"n": 3, "sinks": ["101", "111"], "initial": "000", "t_max": 2}"#);
    let sim = run_simulate(&cfg, true).unwrap();
    let (header, rows) = parse_csv(&sim.csv);
    assert_eq!(header.len(), 1 + 8 + 3);
    assert_eq!(header[1], "pattern_000");
    assert_eq!(header[8], "pattern_111");
    assert_eq!(rows.len(), 41);
    for row in &rows {
        let total: f64 = row[1..9].iter().map(|x| x.parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9, "row sums to {total}");
    }
    let svg = sim.svg.unwrap();
    assert_eq!(svg.matches("<polyline").count(), 8);
}

#[test]
fn simulate_is_deterministic() {
    let cfg = config(r#"{"n": 3, "sinks": ["011", "101"], "initial": "000", "t_max": 1}"#);
    let a = run_simulate(&cfg, false).unwrap().csv;
    let b = run_simulate(&cfg, false).unwrap().csv;
    assert_eq!(a, b);
}

#[test]
fn single_quron_decays_exponentially() {
    let cfg = config(r#"{"n": 1, "sinks": ["1"], "initial": "0", "kappa": 0.7, "gamma": 1.3, "t_max": 5}"#);
    let traj = run_simulate(&cfg, false).unwrap().trajectory;
    for (t, p) in traj.times.iter().zip(&traj.populations) {
        let expected = 1.0 - (-t).exp();
        assert!((p.as_slice()[1] - expected).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn sweep_serial_and_parallel_agree() {
    let cfg = config(
        r#"{"n": 3, "sinks": ["101", "111"], "initial": "000", "t_max": 20,
            "kappas": [0.5, 1.0], "gammas": [1.0, 0.5, 0.0]}"#,
    );
    let grid = cfg.grid().unwrap();
    let serial = run_sweep(&cfg, &grid, false, false).unwrap();
    let parallel = run_sweep(&cfg, &grid, true, true).unwrap();
    assert_eq!(serial.csv, parallel.csv);
    assert!(parallel.svg.is_some());

    let (header, rows) = parse_csv(&serial.csv);
    assert_eq!(header, ["kappa", "gamma", "t_mix", "diagnostics"]);
    assert_eq!(rows.len(), 6);
    let gammas: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(gammas, [0.0, 0.0, 0.5, 0.5, 1.0, 1.0]);
}

#[test]
fn sweep_handles_static_point() {
    let cfg = config(r#"{"n": 2, "sinks": ["11"], "initial": "00", "t_max": 1}"#);
    let grid = SweepGrid {
        kappas: vec![0.0],
        gammas: vec![0.0],
    };
    let sweep = run_sweep(&cfg, &grid, false, false).unwrap();
    assert_eq!(sweep.points[0].t_mix, 0.0);
    assert_eq!(sweep.points[0].diagnostics, "static walk");
}

#[test]
fn sweep_mixing_time_on_grid() {
    // With no coherent part every run retrieves a memory.
    let cfg = config(r#"{"n": 2, "sinks": ["11"], "initial": "00", "t_max": 30}"#);
    let grid = SweepGrid {
        kappas: vec![0.0],
        gammas: vec![1.0],
    };
    let sweep = run_sweep(&cfg, &grid, false, false).unwrap();
    let t = sweep.points[0].t_mix;
    assert!(t > 0.0 && t < 30.0);
    assert!(((t / 0.05).round() * 0.05 - t).abs() < 1e-9);
}

#[test]
fn coin_check_table() {
    let (rows, csv) = run_coin_check(&default_coin_grid()).unwrap();
    assert_eq!(rows.len(), 42);
    assert!(csv.starts_with("p,kind,deviation,unitary\n"));
    let neuron_unitary: Vec<f64> = rows.iter().filter(|r| r.kind == "neuron" && r.unitary).map(|r| r.p).collect();
    assert_eq!(neuron_unitary, [0.5]);
    assert!(rows.iter().filter(|r| r.kind == "biased").all(|r| r.unitary));
    assert!(matches!(run_coin_check(&[1.5]), Err(ExperimentError::Coin(_))));
}

#[test]
fn hopfield_csv_energy_traces() {
    let cfg = config(r#"{"n": 4, "stored": ["1010"], "threshold_sense": "standard"}"#);
    let (rows, csv) = run_hopfield(&cfg).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(csv.lines().count(), 6);
    for row in &rows {
        assert!(row.converged);
        assert!(row.energies.windows(2).all(|e| e[1] <= e[0] + 1e-12));
        assert_eq!(row.output.to_string(), "1010");
    }
}

#[test]
fn hopfield_random_order_is_seeded() {
    let json = r#"{"n": 5, "stored": ["10110", "01101"], "inputs": ["11111", "00000", "10101"],
                   "update_order": "random", "seed": 11}"#;
    let a = run_hopfield(&config(json)).unwrap().1;
    let b = run_hopfield(&config(json)).unwrap().1;
    assert_eq!(a, b);
}

#[test]
fn classical_command_matches_quantum_walk_without_coherence() {
    let cfg = config(r#"{"n": 3, "sinks": ["101", "111"], "initial": "000", "kappa": 0, "gamma": 0.8, "t_max": 4}"#);
    let run = run_classical(&cfg).unwrap();
    let traj = run_simulate(&cfg, false).unwrap().trajectory;
    assert_eq!(run.times.len(), traj.len());
    for (p, q) in run.populations.iter().zip(&traj.populations) {
        for (a, b) in p.iter().zip(q.as_slice()) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}

#[test]
fn coarse_step_reports_diagnostics() {
    // κ/γ = 19 at the default step resolves the coherent part too coarsely.
    let cfg = config(r#"{"n": 3, "sinks": ["110", "001"], "initial": "000", "kappa": 1.9, "gamma": 0.1, "t_max": 1}"#);
    let err = run_simulate(&cfg, false).err().unwrap();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("smaller dt"));

    let finer = config(
        r#"{"n": 3, "sinks": ["110", "001"], "initial": "000", "kappa": 1.9, "gamma": 0.1, "t_max": 1, "dt": 0.001}"#,
    );
    assert!(run_simulate(&finer, false).is_ok());
}

#[test]
fn config_errors_carry_field_names() {
    let cfg = config(r#"{"n": 3, "sinks": [], "initial": "000"}"#);
    let err = run_simulate(&cfg, false).err().unwrap();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("sinks"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zero_coherence_matches_ctmc(
        n in 1usize..=3,
        sink_seed in any::<u64>(),
        start_seed in any::<u64>(),
        gamma in 0.3f64..2.0,
    ) {
        let dim = 1usize << n;
        let sink = (sink_seed % dim as u64) as usize;
        let start = (start_seed % dim as u64) as usize;
        let spec = HypercubeSpec::new(n, vec![quron_walk::Pattern::from_index(sink, n).unwrap()]).unwrap();
        let params = WalkParams::new(0.0, gamma).with_t_max(2.0).with_sample_every(0.5);
        let traj = evolve(&DensityMatrix::basis(dim, start), &spec, &params).unwrap();
        let q = RateMatrix::from_jumps(dim, &build_jump_operators(&spec), gamma).unwrap();
        let pi0 = ProbabilityVector::delta(dim, start);
        for (t, p) in traj.times.iter().zip(&traj.populations) {
            let exact = ctmc_evolve(&q, &pi0, t / gamma).unwrap();
            prop_assert!(p.max_diff(&exact) < 1e-8);
        }
    }

    #[test]
    fn walk_is_guarded_or_healthy(kappa in 0.0f64..2.0, gamma in 0.2f64..2.0) {
        let spec = HypercubeSpec::from_strs(&["110", "001"]).unwrap();
        let params = WalkParams::new(kappa, gamma).with_t_max(3.0);
        match evolve(&DensityMatrix::basis(8, 0), &spec, &params) {
            Ok(traj) => {
                let sink = traj.sink_population();
                prop_assert!(sink.windows(2).all(|w| w[1] >= w[0] - 1e-9));
                prop_assert!(traj.diagnostics.iter().all(|d| d.trace_drift < 1e-9 && d.min_eig >= -1e-6));
            }
            Err(e) => prop_assert!(matches!(e, WalkError::Diagnostics { .. }), "{e}"),
        }
    }
}
