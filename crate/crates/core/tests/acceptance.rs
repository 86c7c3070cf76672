//! Acceptance suite: one test per shipping criterion, each with its tolerance
//! pinned in code and a PASS line on stdout. Expensive dictionaries are built
//! once and shared across criteria.

use dfrc_core::array::{maximal_spread_angle, phase_rotation_plan};
use dfrc_core::dictionary::{
    analytic_extreme_pair, build_radar_dictionary_by_enumeration,
    build_regularized_dictionary, distance_stats, enumerate_subarrays,
    greedy_maxmin_dictionary, permute_augment, ripple_rank_key, scp_comm_select, scp_radar_select,
    squared_distance, subarray_count, Scheme, ScpOptions, SymbolDictionary,
};
use dfrc_core::exec;
use dfrc_core::pattern::{
    design_minimax_weights, ripple_metric, worst_sidelobe_db, PatternGrid, PhaseProfile,
};
use dfrc_core::report::write_sweep_csv;
use dfrc_core::signaling::{
    bits_per_symbol, comm_observation, decode_nearest_index, exact_bpsk_ber, SchemeConfig,
};
use dfrc_core::sim::{
    run_angle_robustness, run_ser_sweep, ChannelModel, MonteCarloConfig, SimOptions, SweepResult,
};
use dfrc_core::{ArrayGeometry, ReceiveArray, Subarray};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const SIDELOBE_DB: f64 = -20.0;
const SIDELOBE_LINEAR: f64 = 0.1;
const PRF_HZ: f64 = 10_000.0;

fn geometry() -> ArrayGeometry {
    ArrayGeometry::new(16, 0.25).unwrap()
}

fn receive() -> ReceiveArray {
    ReceiveArray::ula(10, 0.5).unwrap()
}

fn theta_c() -> f64 {
    maximal_spread_angle(&geometry()).unwrap()
}

fn comm_dictionary() -> &'static SymbolDictionary {
    static DC: OnceLock<SymbolDictionary> = OnceLock::new();
    DC.get_or_init(|| greedy_maxmin_dictionary(16, 8, 256).unwrap())
}

fn hybrid_dictionary() -> &'static SymbolDictionary {
    static DP: OnceLock<SymbolDictionary> = OnceLock::new();
    DP.get_or_init(|| permute_augment(comm_dictionary()).unwrap())
}

/// Ripple-ranked dictionary plus the seconds its (parallel) build took.
fn radar_dictionary() -> &'static (SymbolDictionary, f64) {
    static DR: OnceLock<(SymbolDictionary, f64)> = OnceLock::new();
    DR.get_or_init(|| {
        let grid = PatternGrid::optimization((-10.0, 10.0)).unwrap();
        let t = Instant::now();
        let dict = build_radar_dictionary_by_enumeration(
            &geometry(),
            8,
            256,
            &receive(),
            &grid,
            SIDELOBE_LINEAR,
            None,
        )
        .unwrap();
        (dict, t.elapsed().as_secs_f64())
    })
}

fn scheme_config(dict: SymbolDictionary, bits: Option<u32>) -> SchemeConfig {
    SchemeConfig::with_rotation(geometry(), theta_c(), dict, bits, PRF_HZ).unwrap()
}

fn mc_standard_error(ser: f64, n: u64) -> f64 {
    (ser * (1.0 - ser) / n as f64).sqrt()
}

#[test]
fn criterion_01_combinatorics_and_capacity() {
    let t = Instant::now();
    assert_eq!(subarray_count(16, 8).unwrap(), 12870);
    assert_eq!(enumerate_subarrays(16, 8).unwrap().count(), 12870);
    assert_eq!(bits_per_symbol(Scheme::Selection, 16, 8).unwrap(), 13);
    assert_eq!(bits_per_symbol(Scheme::Hybrid, 16, 8).unwrap(), 28);
    assert_eq!(bits_per_symbol(Scheme::Regularized, 16, 8).unwrap(), 8);
    let dt = t.elapsed();
    assert!(dt < Duration::from_secs(1), "took {dt:?}");
    println!("criterion 01 PASS: C(16,8)=12870, Nb = 13/28/8, {dt:?}");
}

#[test]
fn criterion_02_maximal_spread_angle_and_phase_plan() {
    let angle_deg = maximal_spread_angle(&geometry()).unwrap().to_degrees();
    assert!(
        (angle_deg - 14.4775).abs() <= 0.001,
        "maximal spread angle {angle_deg} deg"
    );
    let plan = phase_rotation_plan(&geometry(), angle_deg.to_radians());
    let worst = plan
        .angles()
        .iter()
        .map(|a| a.abs())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-10, "plan angle magnitude {worst}");
    println!(
        "criterion 02 PASS: theta_cm = {angle_deg:.4} deg, plan residual {worst:.2e}"
    );
}

#[test]
fn criterion_03_distance_structure() {
    let (a, b) = analytic_extreme_pair(16, 8).unwrap();
    let d = squared_distance(&a.vector, &b.vector);
    assert!((d - 32.0).abs() < 1e-9, "analytic pair distance {d}");

    let reg = build_regularized_dictionary(8).unwrap();
    let stats = distance_stats(&reg).unwrap();
    assert_eq!(stats.global_min, 4.0);
    assert_eq!(stats.global_max, 32.0);

    let base_min = distance_stats(comm_dictionary()).unwrap().global_min;
    let aug_min = distance_stats(hybrid_dictionary()).unwrap().global_min;
    assert!(
        aug_min >= base_min - 1e-9,
        "augmented min {aug_min} below base min {base_min}"
    );
    println!(
        "criterion 03 PASS: pair d2 = {d:.12}, regularized (4, 32) exact, \
         augmented min {aug_min:.4} >= base min {base_min:.4}"
    );
}

#[test]
fn criterion_04_noiseless_roundtrip() {
    let configs = vec![
        scheme_config(comm_dictionary().clone(), None),
        scheme_config(hybrid_dictionary().clone(), None),
        scheme_config(build_regularized_dictionary(8).unwrap(), None),
    ];
    let gains = [
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(2.0, PI / 3.0),
        Complex64::new(-0.3, 1.7),
    ];
    let t = Instant::now();
    for cfg in &configs {
        for &alpha in &gains {
            for idx in 0..cfg.dictionary().len() {
                let spec = cfg.transmit_spec(idx).unwrap();
                let y = comm_observation(&spec, cfg, alpha);
                let got = decode_nearest_index(cfg, &y, alpha).unwrap();
                assert_eq!(got, idx, "scheme {} alpha {alpha}", cfg.scheme());
            }
        }
    }
    let dt = t.elapsed();
    assert!(dt < Duration::from_secs(10), "took {dt:?}");
    println!("criterion 04 PASS: 3 schemes x 256 codewords x 3 gains, {dt:?}");
}

#[test]
fn criterion_05_ser_anchor_at_low_snr() {
    // radar-priority dictionary, 1 bit per symbol: the two smallest-ripple
    // subarrays are nearly collinear, so deep noise drives the SER to a half
    let dict = radar_dictionary().0.clone();
    let cfg = scheme_config(dict, Some(1));
    let mc = MonteCarloConfig {
        snr_grid_db: vec![-20.0],
        num_symbols: 100_000,
        seed: 0xD0,
    };
    let channel = ChannelModel::for_snr_db(-20.0);
    let t = Instant::now();
    let result = run_ser_sweep(&cfg, &mc, &channel, &SimOptions::default()).unwrap();
    let dt = t.elapsed();
    let ser = result.points[0].ser();
    assert!(
        (0.45..=0.55).contains(&ser),
        "SER {ser} outside [0.45, 0.55]"
    );
    assert!(dt < Duration::from_secs(60), "took {dt:?}");
    println!("criterion 05 PASS: SER = {ser:.4} at -20 dB, 1 bit/symbol, {dt:?}");
}

fn check_bound_compliance(result: &SweepResult) {
    for p in &result.points {
        let ser = p.ser();
        let slack = 3.0 * mc_standard_error(ser, p.symbols);
        assert!(
            ser <= p.theory_bound + slack,
            "{} at {} dB: SER {ser} > bound {} + {slack}",
            result.scheme,
            p.x,
            p.theory_bound
        );
    }
    // monotone within Monte Carlo noise, one inversion allowed
    let mut inversions = 0;
    for w in result.points.windows(2) {
        let (a, b) = (w[0].ser(), w[1].ser());
        let noise = 3.0 * (mc_standard_error(a, w[0].symbols) + mc_standard_error(b, w[1].symbols));
        if b > a + noise {
            inversions += 1;
        }
    }
    assert!(inversions <= 1, "{} inversions in {}", inversions, result.scheme);
}

#[test]
fn criterion_06_bound_compliance_and_exact_regularized_ber() {
    let snr_grid: Vec<f64> = (-10..=10).step_by(2).map(|x| x as f64).collect();
    let mc = MonteCarloConfig {
        snr_grid_db: snr_grid.clone(),
        num_symbols: 1_000_000,
        seed: 0xBEE,
    };
    let channel = ChannelModel::for_snr_db(0.0);
    let opts = SimOptions::default();
    let t = Instant::now();

    let selection = scheme_config(comm_dictionary().clone(), None);
    let sel_result = run_ser_sweep(&selection, &mc, &channel, &opts).unwrap();
    check_bound_compliance(&sel_result);

    let regularized = scheme_config(build_regularized_dictionary(8).unwrap(), None);
    let reg_result = run_ser_sweep(&regularized, &mc, &channel, &opts).unwrap();
    check_bound_compliance(&reg_result);

    // empirical regularized BER against the exact antipodal probability,
    // wherever at least 50 bit errors are expected
    let mut checked = 0;
    for p in &reg_result.points {
        let rho = 10f64.powf(p.x / 10.0);
        let want = exact_bpsk_ber(rho);
        let n_bits = p.symbols as f64 * reg_result.bits as f64;
        if want * n_bits < 50.0 {
            continue;
        }
        let se = (want * (1.0 - want) / n_bits).sqrt();
        let got = p.ber(reg_result.bits);
        assert!(
            (got - want).abs() <= 3.0 * se,
            "BER {got} vs exact {want} at {} dB (se {se})",
            p.x
        );
        checked += 1;
    }
    assert!(checked >= 8, "only {checked} BER points had enough errors");
    let dt = t.elapsed();
    assert!(dt < Duration::from_secs(900), "took {dt:?}");
    println!(
        "criterion 06 PASS: 11 points x 1e6 symbols, selection + regularized within bounds, \
         {checked} exact-BER points, {dt:?}"
    );
}

#[test]
fn criterion_07_radar_dictionary_sidelobe_feasibility() {
    let (dict, build_secs) = radar_dictionary();
    assert_eq!(dict.len(), 256);
    let grid = PatternGrid::optimization((-10.0, 10.0)).unwrap();
    let report = PatternGrid::reporting((-10.0, 10.0)).unwrap();
    let g = geometry();
    let r = receive();

    let t = Instant::now();
    let verified: Vec<(f64, f64)> = exec::map_indexed(dict.len(), None, |i| {
        let sub = &dict.entries()[i].sub;
        let (w, rho) = design_minimax_weights(
            sub,
            &g,
            &r,
            &grid,
            SIDELOBE_LINEAR * 0.85,
            PhaseProfile::default(),
        )
        .unwrap();
        (worst_sidelobe_db(&w, sub, &g, &r, &report).unwrap(), rho)
    });
    let verify_secs = t.elapsed().as_secs_f64();
    let worst = verified
        .iter()
        .map(|v| v.0)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        worst <= SIDELOBE_DB + 1e-9,
        "worst re-verified sidelobe {worst} dB"
    );
    let total = build_secs + verify_secs;
    assert!(total < 1800.0, "build {build_secs:.0}s + verify {verify_secs:.0}s");

    // a ripple-ranked dictionary should not lose to the distance-built one on
    // its own metric
    let dc = comm_dictionary();
    let dc_mean: f64 = exec::map_indexed(dc.len(), None, |i| {
        ripple_metric(&dc.entries()[i].sub, &g, &r, &grid, SIDELOBE_LINEAR * 0.85).unwrap()
    })
    .iter()
    .sum::<f64>()
        / dc.len() as f64;
    let dr_mean: f64 = verified.iter().map(|v| v.1).sum::<f64>() / verified.len() as f64;
    assert!(
        dr_mean <= dc_mean,
        "ranked-dictionary mean ripple {dr_mean} above distance-built mean {dc_mean}"
    );
    println!(
        "criterion 07 PASS: 256/256 codewords <= -20 dB on the 0.1-degree grid \
         (worst {worst:.2} dB), mean ripple {dr_mean:.4} <= {dc_mean:.4}, \
         build {build_secs:.0}s + verify {verify_secs:.0}s"
    );
}

#[test]
fn criterion_08_toy_scale_oracle_equivalence() {
    // greedy max-min at (4, 2, 2) against the exhaustive pair search
    let dict = greedy_maxmin_dictionary(4, 2, 2).unwrap();
    let got = squared_distance(&dict.entries()[0].vector, &dict.entries()[1].vector);
    let mut best = 0.0f64;
    let all: Vec<Subarray> = enumerate_subarrays(4, 2).unwrap().collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let a = dfrc_core::array::rotated_symbol(&all[i], 4).unwrap().into_vec();
            let b = dfrc_core::array::rotated_symbol(&all[j], 4).unwrap().into_vec();
            best = best.max(squared_distance(&a, &b));
        }
    }
    assert!((got - best).abs() < 1e-9, "greedy {got} vs exhaustive {best}");

    // SCP communication selection reaches the exhaustive optimum
    let (c0, c1) = analytic_extreme_pair(4, 2).unwrap();
    let chosen = vec![c0.clone(), c1.clone()];
    let mut oracle = 0.0f64;
    for sub in enumerate_subarrays(4, 2).unwrap() {
        if sub == c0.sub || sub == c1.sub {
            continue;
        }
        let v = dfrc_core::array::rotated_symbol(&sub, 4).unwrap().into_vec();
        let d = chosen
            .iter()
            .map(|c| squared_distance(&c.vector, &v))
            .fold(f64::INFINITY, f64::min);
        oracle = oracle.max(d);
    }
    let opts = ScpOptions::default();
    let mut scp_best = 0.0f64;
    for seed in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok(cw) = scp_comm_select(4, 2, &chosen, &opts, &mut rng) {
            let d = chosen
                .iter()
                .map(|c| squared_distance(&c.vector, &cw.vector))
                .fold(f64::INFINITY, f64::min);
            scp_best = scp_best.max(d);
        }
    }
    assert!(
        scp_best >= oracle - 1e-9,
        "scp best {scp_best} below oracle {oracle}"
    );

    // ripple ranking at (6, 3): builder output equals the oracle ranking and
    // SCP radar selection lands within 10% of the exhaustive minimum
    let g6 = ArrayGeometry::new(6, 0.5).unwrap();
    let r4 = ReceiveArray::ula(4, 0.5).unwrap();
    let grid = PatternGrid::with_steps((-10.0, 10.0), 4.0, 2.0).unwrap();
    let eps = 10f64.powf(-10.0 / 20.0);

    let subs: Vec<Subarray> = enumerate_subarrays(6, 3).unwrap().collect();
    let mut oracle_rank: Vec<(f64, usize)> = subs
        .iter()
        .enumerate()
        .map(|(i, s)| (ripple_metric(s, &g6, &r4, &grid, eps * 0.85).unwrap(), i))
        .collect();
    oracle_rank.sort_by(|a, b| {
        ripple_rank_key(a.0)
            .cmp(&ripple_rank_key(b.0))
            .then(a.1.cmp(&b.1))
    });

    let built = build_radar_dictionary_by_enumeration(&g6, 3, 4, &r4, &grid, eps, None).unwrap();
    for (entry, &(_, oracle_idx)) in built.entries().iter().zip(&oracle_rank[..4]) {
        assert_eq!(entry.sub, subs[oracle_idx], "ranking deviates from oracle");
    }

    let rho_min = oracle_rank[0].0;
    let mut scp_rho = f64::INFINITY;
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok((_, rho)) = scp_radar_select(&g6, 3, &r4, &grid, eps * 0.85, &opts, &mut rng) {
            scp_rho = scp_rho.min(rho);
        }
    }
    assert!(
        scp_rho <= 1.10 * rho_min,
        "scp ripple {scp_rho} vs exhaustive minimum {rho_min}"
    );
    println!(
        "criterion 08 PASS: greedy(4,2)=exhaustive, scp comm {scp_best:.3} >= oracle {oracle:.3}, \
         ranked(6,3) = oracle, scp radar {scp_rho:.4} <= 1.10 x {rho_min:.4}"
    );
}

#[test]
fn criterion_09_regularized_beats_hybrid_under_angle_error() {
    let channel = ChannelModel::for_snr_db(10.0);
    let opts = SimOptions::default();
    let trials = 500;
    let per_trial = 200;

    let hybrid = scheme_config(hybrid_dictionary().clone(), Some(8));
    let hyb = run_angle_robustness(&hybrid, &[5.0], trials, per_trial, &channel, 0xA11, &opts)
        .unwrap();

    let regularized = scheme_config(build_regularized_dictionary(8).unwrap(), Some(8));
    let reg = run_angle_robustness(&regularized, &[5.0], trials, per_trial, &channel, 0xA11, &opts)
        .unwrap();

    let hyb_ser = hyb.points[0].ser();
    let reg_ser = reg.points[0].ser();
    assert!(
        reg_ser <= hyb_ser,
        "regularized SER {reg_ser} above hybrid SER {hyb_ser} at sigma = 5 deg"
    );
    println!(
        "criterion 09 PASS: sigma 5 deg, 8 bits, SER regularized {reg_ser:.4} <= hybrid {hyb_ser:.4}"
    );
}

#[test]
fn criterion_10_csv_determinism_across_worker_counts() {
    let cfg = scheme_config(comm_dictionary().clone(), Some(4));
    let mc = MonteCarloConfig {
        snr_grid_db: vec![-5.0, 0.0, 5.0],
        num_symbols: 200_000,
        seed: 0xCAFE,
    };
    let channel = ChannelModel::for_snr_db(0.0);
    let mut outputs: Vec<Vec<u8>> = Vec::new();
    for threads in [1usize, 4, 8] {
        let opts = SimOptions {
            threads: Some(threads),
            ..SimOptions::default()
        };
        let result = run_ser_sweep(&cfg, &mc, &channel, &opts).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&result, &mut buf).unwrap();
        outputs.push(buf);
    }
    assert_eq!(outputs[0], outputs[1], "1 vs 4 workers differ");
    assert_eq!(outputs[0], outputs[2], "1 vs 8 workers differ");
    println!(
        "criterion 10 PASS: byte-identical CSV ({} bytes) under 1, 4 and 8 workers",
        outputs[0].len()
    );
}
