//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `--nocapture`, and always for failing criteria).
//!
//! Run with `cargo test --release --test acceptance -- --nocapture`.
//!
//! Criteria 1-3 assert externally supplied reference values at face value.
//! Three of those reference points are not reproducible from the implemented
//! formulas (the example statistic's 0.2422 corresponds to order 0.8, not
//! 0.4; the reference p-value does not match the stated null simulation; and
//! the single-integral decomposition is exact only under constant hazard).
//! Those tests report the measured values and fail honestly rather than
//! loosening tolerances. See README "Build and test" for the summary.

use std::time::Instant;

use rklgof::censoring::{generate_progressive_sample, CensoringScheme, ProgressiveSample};
use rklgof::distributions::Distribution;
use rklgof::entropy::joint_renyi_entropy_numeric;
use rklgof::gof::{mle_exponential_scale, renyi_test_statistic, StatisticKind};
use rklgof::mc::{self, split_stream, CritvalCache, McConfig, PowerCell};
use rklgof::quad::integrate;

const NELSON_X: [f64; 8] = [0.19, 0.78, 0.96, 1.31, 2.78, 4.85, 6.50, 7.35];
const NELSON_R: [usize; 8] = [0, 0, 3, 0, 3, 0, 0, 5];

fn nelson_sample() -> ProgressiveSample {
    let scheme = CensoringScheme::new(19, 8, NELSON_R.to_vec()).unwrap();
    ProgressiveSample::new(scheme, NELSON_X.to_vec()).unwrap()
}

fn check(line: &str, ok: bool) {
    println!("{line}");
    assert!(ok, "{line}");
}

#[test]
fn criterion_1_worked_example_statistic() {
    let t0 = Instant::now();
    let sample = nelson_sample();
    let theta = mle_exponential_scale(&sample).unwrap();
    let t04 = renyi_test_statistic(&sample, 0.4, 3).unwrap().value;
    let t08 = renyi_test_statistic(&sample, 0.8, 3).unwrap().value;
    let elapsed = t0.elapsed().as_secs_f64();

    let theta_ok = (theta - 9.086).abs() <= 0.005;
    let stat_ok = (t04 - 0.2422).abs() <= 0.001;
    let time_ok = elapsed < 1.0;
    let status = if theta_ok && stat_ok && time_ok { "PASS" } else { "FAIL" };
    check(
        &format!(
            "criterion 1: {status} — theta_hat={theta:.5} (want 9.086±0.005: {theta_ok}), \
             T(alpha=0.4,w=3)={t04:.5} (want 0.2422±0.001: {stat_ok}; note: T(alpha=0.8,w=3)={t08:.5} \
             matches the 0.2422 target exactly), runtime {elapsed:.3}s (<1s: {time_ok})"
        ),
        theta_ok && stat_ok && time_ok,
    );
}

#[test]
fn criterion_2_worked_example_p_value() {
    let t0 = Instant::now();
    let scheme = CensoringScheme::new(19, 8, NELSON_R.to_vec()).unwrap();
    let observed = renyi_test_statistic(&nelson_sample(), 0.4, 3).unwrap().value;
    let cfg = McConfig { reps: 10_000, seed: 20_260_808, level: 0.10, workers: 1 };
    let p_a = mc::p_value(observed, &scheme, StatisticKind::RenyiRkl, Some(0.4), 3, &cfg).unwrap();
    let cfg_b = McConfig { seed: 4242, ..cfg };
    let p_b = mc::p_value(observed, &scheme, StatisticKind::RenyiRkl, Some(0.4), 3, &cfg_b).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();

    let ok_a = (p_a - 0.9737).abs() <= 0.010;
    let ok_b = (p_b - 0.9737).abs() <= 0.010;
    let time_ok = elapsed < 30.0;
    let status = if ok_a && ok_b && time_ok { "PASS" } else { "FAIL" };
    check(
        &format!(
            "criterion 2: {status} — p={p_a:.4} (seed A) / {p_b:.4} (seed B), want 0.9737±0.010, \
             runtime {elapsed:.1}s single-worker (<30s: {time_ok})"
        ),
        ok_a && ok_b && time_ok,
    );
}

#[test]
fn criterion_3_joint_entropy_decomposition_oracle() {
    let t0 = Instant::now();
    let dists = [
        ("exponential(1)", Distribution::exponential(1.0).unwrap()),
        ("weibull(2)", Distribution::weibull(2.0).unwrap()),
        ("gamma(2)", Distribution::gamma(2.0).unwrap()),
    ];
    let schemes = [
        ("m=2 n=3 R=(1,0)", CensoringScheme::new(3, 2, vec![1, 0]).unwrap()),
        ("m=3 n=4 R=(1,0,0)", CensoringScheme::new(4, 3, vec![1, 0, 0]).unwrap()),
    ];
    let alpha = 0.5;
    let mut all_ok = true;
    let mut lines = Vec::new();
    for (sname, scheme) in &schemes {
        for (dname, dist) in &dists {
            let out = joint_renyi_entropy_numeric(scheme, dist, alpha).unwrap();
            let nested = out.nested.unwrap();
            let diff = (out.single_integral - nested).abs();
            let ok = diff < 1e-4;
            all_ok &= ok;
            lines.push(format!(
                "  {sname} {dname}: |single - nested| = {diff:.2e} (<1e-4: {ok})"
            ));
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let time_ok = elapsed < 120.0;
    let status = if all_ok && time_ok { "PASS" } else { "FAIL" };
    println!("criterion 3: {status} — runtime {elapsed:.1}s (<120s: {time_ok})");
    for l in &lines {
        println!("{l}");
    }
    assert!(all_ok && time_ok, "criterion 3 cases:\n{}", lines.join("\n"));
}

struct Table1Target {
    removals: [usize; 5],
    shannon: [f64; 6],
    renyi: [f64; 6],
}

const TABLE1_SELECTED: [Table1Target; 2] = [
    Table1Target {
        removals: [5, 0, 0, 0, 0],
        shannon: [0.406, 0.690, 0.020, 0.026, 0.039, 0.219],
        renyi: [0.446, 0.731, 0.027, 0.040, 0.051, 0.241],
    },
    Table1Target {
        removals: [0, 0, 0, 0, 5],
        shannon: [0.323, 0.440, 0.033, 0.038, 0.035, 0.255],
        renyi: [0.370, 0.516, 0.044, 0.046, 0.047, 0.305],
    },
];

#[test]
fn criterion_4_power_reproduction_desk_scale() {
    let t0 = Instant::now();
    let cfg = McConfig { reps: 2000, seed: 20_260_808, level: 0.10, workers: 8 };
    let cache_dir = std::env::temp_dir().join(format!("rklgof-acc4-{}", std::process::id()));
    let cache = CritvalCache::new(&cache_dir).unwrap();
    let alternatives = mc::tables::alternatives();

    let mut all_schemes_ok = true;
    let mut lines = Vec::new();
    for target in &TABLE1_SELECTED {
        let scheme = CensoringScheme::new(10, 5, target.removals.to_vec()).unwrap();
        let candidates: Vec<usize> = (1..5).collect();
        let mut cells = Vec::new();
        for kind in [StatisticKind::ShannonKl, StatisticKind::RenyiRkl] {
            let alpha = matches!(kind, StatisticKind::RenyiRkl).then_some(0.4);
            let w = mc::select_window(&scheme, kind, alpha, &cfg, &candidates).unwrap();
            for alt in &alternatives {
                cells.push(PowerCell { scheme: scheme.clone(), alternative: *alt, kind, alpha, w });
            }
        }
        let table = mc::power_study(&cells, &cfg, Some(&cache)).unwrap();
        let mut within = 0;
        let mut details = Vec::new();
        for (i, row) in table.rows.iter().enumerate() {
            let col = i % 6;
            let expect = if matches!(row.cell.kind, StatisticKind::ShannonKl) {
                target.shannon[col]
            } else {
                target.renyi[col]
            };
            let got = row.power.unwrap();
            let ok = (got - expect).abs() <= 0.05;
            within += ok as usize;
            details.push(format!(
                "    {} {} w={}: {got:.3} vs {expect:.3} ({})",
                row.cell.kind,
                row.cell.alternative,
                row.cell.w,
                if ok { "ok" } else { "OFF" }
            ));
        }
        let scheme_ok = within >= 10;
        all_schemes_ok &= scheme_ok;
        lines.push(format!(
            "  scheme R={:?}: {within}/12 cells within ±0.05 (need ≥10: {scheme_ok})",
            target.removals
        ));
        lines.extend(details);
    }
    std::fs::remove_dir_all(cache_dir).ok();
    let elapsed = t0.elapsed().as_secs_f64();
    let time_ok = elapsed < 600.0;
    let status = if all_schemes_ok && time_ok { "PASS" } else { "FAIL" };
    println!("criterion 4: {status} — runtime {elapsed:.1}s at 8 workers (<600s: {time_ok})");
    for l in &lines {
        println!("{l}");
    }
    assert!(all_schemes_ok && time_ok, "criterion 4:\n{}", lines.join("\n"));
}

#[test]
fn criterion_5_renyi_dominates_shannon_on_table1() {
    let t0 = Instant::now();
    let cfg = McConfig { reps: 2000, seed: 20_260_808, level: 0.10, workers: 8 };
    let cache_dir = std::env::temp_dir().join(format!("rklgof-acc5-{}", std::process::id()));
    let cache = CritvalCache::new(&cache_dir).unwrap();
    let alternatives = mc::tables::alternatives();

    let mut dominated = 0usize;
    let mut total = 0usize;
    for scheme in mc::tables::schemes(1).unwrap() {
        let candidates: Vec<usize> = (1..scheme.m()).collect();
        let w_s = mc::select_window(&scheme, StatisticKind::ShannonKl, None, &cfg, &candidates).unwrap();
        let w_r = mc::select_window(&scheme, StatisticKind::RenyiRkl, Some(0.4), &cfg, &candidates).unwrap();
        let mut cells = Vec::new();
        for alt in &alternatives {
            cells.push(PowerCell {
                scheme: scheme.clone(),
                alternative: *alt,
                kind: StatisticKind::ShannonKl,
                alpha: None,
                w: w_s,
            });
            cells.push(PowerCell {
                scheme: scheme.clone(),
                alternative: *alt,
                kind: StatisticKind::RenyiRkl,
                alpha: Some(0.4),
                w: w_r,
            });
        }
        let table = mc::power_study(&cells, &cfg, Some(&cache)).unwrap();
        for pair in table.rows.chunks(2) {
            let p_shannon = pair[0].power.unwrap();
            let p_renyi = pair[1].power.unwrap();
            total += 1;
            dominated += (p_renyi >= p_shannon) as usize;
        }
    }
    std::fs::remove_dir_all(cache_dir).ok();
    let elapsed = t0.elapsed().as_secs_f64();
    let frac = dominated as f64 / total as f64;
    let ok = frac >= 0.80;
    let status = if ok { "PASS" } else { "FAIL" };
    check(
        &format!(
            "criterion 5: {status} — Renyi power ≥ Shannon power in {dominated}/{total} cells \
             ({:.0}%, need ≥80%), runtime {elapsed:.1}s",
            frac * 100.0
        ),
        ok,
    );
}

#[test]
fn criterion_6_size_correctness_all_table_schemes() {
    // Critical values are simulated at the standard 10^4 replicates so that
    // the 3-SE band around the fresh 2000-replicate rejection rate is
    // calibrated for the size run's noise alone.
    let t0 = Instant::now();
    let crit_cfg = McConfig { reps: 10_000, seed: 20_260_808, level: 0.10, workers: 8 };
    let size_cfg = McConfig { reps: 2000, seed: 917, level: 0.10, workers: 8 };
    let se = (0.10_f64 * 0.90 / 2000.0).sqrt();
    let band = 3.0 * se;
    let mut worst: (f64, String) = (0.0, String::new());
    let mut all_ok = true;
    let mut checked = 0;
    for table in 1..=3u8 {
        for scheme in mc::tables::schemes(table).unwrap() {
            let crit =
                mc::critical_value(&scheme, StatisticKind::RenyiRkl, Some(0.4), 3, &crit_cfg, None)
                    .unwrap();
            // rejection rate of fresh nulls = P(T > crit) on an independent stream
            let rate =
                mc::p_value(crit, &scheme, StatisticKind::RenyiRkl, Some(0.4), 3, &size_cfg).unwrap();
            let dev = (rate - 0.10).abs();
            if dev > worst.0 {
                worst = (dev, format!("{scheme} rate={rate:.4}"));
            }
            all_ok &= dev <= band;
            checked += 1;
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let status = if all_ok { "PASS" } else { "FAIL" };
    check(
        &format!(
            "criterion 6: {status} — {checked} scheme size checks at level 0.10, \
             band ±{band:.4}; worst deviation {:.4} at [{}], runtime {elapsed:.1}s",
            worst.0, worst.1
        ),
        all_ok,
    );
}

#[test]
fn criterion_7_coefficient_and_reduction_suite() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();

    // gamma recursion on every tabled scheme
    for table in 1..=3u8 {
        for scheme in mc::tables::schemes(table).unwrap() {
            let g = scheme.gammas();
            ok &= g[0] == scheme.n() as f64;
            for i in 0..scheme.m() - 1 {
                ok &= g[i] - g[i + 1] == scheme.removals()[i] as f64 + 1.0;
            }
        }
    }
    notes.push(format!("gamma recursion on 30 schemes: {ok}"));

    // complete-sample and right-censoring reductions
    let complete = CensoringScheme::complete(9).unwrap();
    let p = complete.expected_uniform_order_stats();
    let mut red_ok = p.iter().enumerate().all(|(i, v)| (v - (i + 1) as f64 / 10.0).abs() < 1e-15);
    let rc = CensoringScheme::right_censored(12, 7).unwrap();
    red_ok &= rc.gammas().iter().enumerate().all(|(i, g)| *g == (12 - i) as f64);
    ok &= red_ok;
    notes.push(format!("complete/right-censored reductions: {red_ok}"));

    // density normalization through the a-coefficients, two base laws
    let scheme = CensoringScheme::new(19, 8, NELSON_R.to_vec()).unwrap();
    let mut quad_ok = true;
    for dist in [Distribution::exponential(1.0).unwrap(), Distribution::weibull(2.0).unwrap()] {
        let g = scheme.gammas();
        let lo = dist.quantile(1e-10).unwrap();
        let hi = dist.quantile(1.0 - 1e-10).unwrap();
        for j in 1..=scheme.m() {
            let a = scheme.a_coeffs(j).unwrap();
            let c_partial: f64 = g[..j].iter().product();
            let integral = integrate(
                |x| {
                    let s = dist.survival(x);
                    let mix: f64 =
                        a.iter().zip(&g).map(|(ai, gi)| ai * s.powf(gi - 1.0)).sum();
                    c_partial * dist.pdf(x) * mix
                },
                lo,
                hi,
                1e-10,
            )
            .unwrap();
            quad_ok &= (integral - 1.0).abs() < 1e-8;
        }
    }
    ok &= quad_ok;
    notes.push(format!("marginal density normalization (j=1..8, two laws): {quad_ok}"));

    // p vector against the Monte Carlo oracle at 1e5 replicates
    let p = scheme.expected_uniform_order_stats();
    let reps = 100_000u64;
    let mut sums = [0.0; 8];
    let mut sumsq = [0.0; 8];
    for rep in 0..reps {
        let mut rng = split_stream(31_337, rep);
        let s = generate_progressive_sample(&scheme, |u| u, &mut rng).unwrap();
        for (i, &u) in s.observations().iter().enumerate() {
            sums[i] += u;
            sumsq[i] += u * u;
        }
    }
    let mut mc_ok = true;
    for i in 0..8 {
        let mean = sums[i] / reps as f64;
        let var = sumsq[i] / reps as f64 - mean * mean;
        let se = (var / reps as f64).sqrt();
        mc_ok &= (mean - p[i]).abs() < 3.0 * se;
    }
    ok &= mc_ok;
    notes.push(format!("expected uniform order stats vs 1e5-rep simulation (3 SE): {mc_ok}"));

    let elapsed = t0.elapsed().as_secs_f64();
    let time_ok = elapsed < 60.0;
    let status = if ok && time_ok { "PASS" } else { "FAIL" };
    check(
        &format!("criterion 7: {status} — {}; runtime {elapsed:.1}s (<60s: {time_ok})", notes.join("; ")),
        ok && time_ok,
    );
}

#[test]
fn criterion_8_determinism_across_worker_counts() {
    let t0 = Instant::now();
    let scheme = CensoringScheme::new(10, 5, vec![1, 1, 1, 1, 1]).unwrap();
    let mk = |workers| McConfig { reps: 2000, seed: 87, level: 0.10, workers };

    let c1 = mc::critical_value(&scheme, StatisticKind::RenyiRkl, Some(0.4), 2, &mk(1), None).unwrap();
    let c8 = mc::critical_value(&scheme, StatisticKind::RenyiRkl, Some(0.4), 2, &mk(8), None).unwrap();
    let p1 = mc::p_value(0.2, &scheme, StatisticKind::ShannonKl, None, 2, &mk(1)).unwrap();
    let p8 = mc::p_value(0.2, &scheme, StatisticKind::ShannonKl, None, 2, &mk(8)).unwrap();
    let w1 = mc::select_window(&scheme, StatisticKind::RenyiRkl, Some(0.4), &mk(1), &[1, 2, 3, 4]).unwrap();
    let w8 = mc::select_window(&scheme, StatisticKind::RenyiRkl, Some(0.4), &mk(8), &[1, 2, 3, 4]).unwrap();
    let cells = vec![PowerCell {
        scheme,
        alternative: Distribution::LogNormal { mu: 0.0, sigma: 1.0 },
        kind: StatisticKind::RenyiRkl,
        alpha: Some(0.4),
        w: 2,
    }];
    let t1 = mc::power_study(&cells, &mk(1), None).unwrap().rows[0].power.unwrap();
    let t8 = mc::power_study(&cells, &mk(8), None).unwrap().rows[0].power.unwrap();

    let ok = c1.to_bits() == c8.to_bits()
        && p1.to_bits() == p8.to_bits()
        && w1 == w8
        && t1.to_bits() == t8.to_bits();
    let elapsed = t0.elapsed().as_secs_f64();
    let status = if ok { "PASS" } else { "FAIL" };
    check(
        &format!(
            "criterion 8: {status} — critical value, p-value, window selection and power \
             bit-identical at 1 and 8 workers (runtime {elapsed:.1}s)"
        ),
        ok,
    );
}
