//! The acceptance gate: one test per shipping criterion, each printing a
//! `criterion N: PASS` line (visible with --nocapture). Tolerances and time
//! budgets are pinned as constants next to the assertions that use them.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use svaudit::constructions::{build_for_arity, i5_shapley_closed_form, lower_bound};
use svaudit::issues::detect;
use svaudit::model::{parse_function, BooleanFunction, ExplanationProblem, Point};
use svaudit::search::survey;
use svaudit::shapley::{decimal3, shapley_all, shapley_brute, shapley_value, Rational};
use svaudit::xplain::{check_duality, explanation_sets};
use svaudit::Issue;

const K_I1: &str = "3\n00010101\n";
const K_I3: &str = "3\n01010011\n";
const K_I4: &str = "4\n0001010100010011\n";
const K_I5: &str = "4\n0000000000010110\n";

fn problem(btt: &str, bits: &str) -> ExplanationProblem {
    let f = parse_function(btt).unwrap();
    ExplanationProblem::at_point(f, Point::parse(bits).unwrap()).unwrap()
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Criterion 1: the 3-feature running example computes exactly
/// (-5/12, -1/24, 1/12); the 3-decimal rendering lands within 5e-4 of the
/// published -0.417, -0.042, 0.083; one full analysis stays under 10 ms.
#[test]
fn criterion_1_exact_values_rendering_and_speed() {
    const DISPLAY_TOLERANCE: f64 = 5e-4;
    const TIME_BUDGET: Duration = Duration::from_millis(10);

    let p = problem(K_I1, "001");
    let started = Instant::now();
    let values = shapley_all(&p);
    let elapsed = started.elapsed();

    assert_eq!(values, vec![rat(-5, 12), rat(-1, 24), rat(1, 12)]);
    for (value, published) in values.iter().zip([-0.417f64, -0.042, 0.083]) {
        let rendered: f64 = decimal3(value).parse().unwrap();
        assert!(
            (rendered - published).abs() <= DISPLAY_TOLERANCE,
            "{rendered} vs {published}"
        );
    }
    assert!(elapsed <= TIME_BUDGET, "took {elapsed:?}");
    println!("criterion 1: PASS ({elapsed:?})");
}

/// Criterion 2: the 4-feature running example yields AXp's {1,2},{2,4} and
/// CXp's {2},{1,4} exactly, with feature 3 irrelevant and 1, 2, 4 relevant.
#[test]
fn criterion_2_explanation_families_and_labels() {
    let p = problem(K_I4, "0011");
    let sets = explanation_sets(&p);
    let fam = |sets: &[svaudit::FeatureSet]| -> Vec<Vec<u8>> {
        sets.iter().map(|s| s.iter().collect()).collect()
    };
    assert_eq!(fam(&sets.axps), vec![vec![1, 2], vec![2, 4]]);
    assert_eq!(fam(&sets.cxps), vec![vec![2], vec![1, 4]]);
    assert!(!sets.relevancy[2].is_relevant());
    for i in [0usize, 1, 3] {
        assert!(sets.relevancy[i].is_relevant());
    }
    println!("criterion 2: PASS");
}

/// Criterion 3: each running pair fires its designated issue; the I3 pair
/// has Sv(3) = 0 exactly with feature 3 still relevant.
#[test]
fn criterion_3_running_pairs_fire_their_issues() {
    let r1 = detect(&problem(K_I1, "001"));
    assert!(r1.i1.is_some());
    assert!(r1.i2.is_none() && r1.i3.is_none() && r1.i4.is_none() && r1.i5.is_none());

    let r3 = detect(&problem(K_I3, "111"));
    assert_eq!(r3.i3, Some(3));
    assert!(r3.shapley[2].is_zero());
    assert!(r3.relevancy[2].is_relevant());
    assert!(r3.i1.is_none() && r3.i2.is_none() && r3.i4.is_none() && r3.i5.is_none());

    let r4 = detect(&problem(K_I4, "0011"));
    assert_eq!(r4.i4, Some((3, 4)));

    let r5 = detect(&problem(K_I5, "1111"));
    assert_eq!(r5.i5, Some(4));
    println!("criterion 3: PASS");
}

/// Criterion 4: the engine reproduces the closed form
/// Sv(n) = (2^(m+1) - m - 2) / ((m+1) 2^(m+1)) for the I5 construction,
/// m = 3..13, inside 60 seconds.
#[test]
fn criterion_4_closed_form_sweep() {
    const TIME_BUDGET: Duration = Duration::from_secs(60);

    let started = Instant::now();
    assert_eq!(i5_shapley_closed_form(3).unwrap(), rat(11, 64));
    for m in 3u8..=13 {
        let built = build_for_arity(Issue::I5, m + 1, 1, None).unwrap();
        let engine = shapley_value(&built.problem().unwrap(), m + 1).unwrap();
        assert_eq!(engine, i5_shapley_closed_form(m).unwrap(), "m={m}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed <= TIME_BUDGET, "took {elapsed:?}");
    println!("criterion 4: PASS ({elapsed:?})");
}

/// Criterion 5: every constructor passes detector verification across its
/// whole supported range, radius-2 additionally keeps the strict ordering
/// Sv(n-1) > Sv(n) > 0, and the sweep finishes within 5 minutes.
#[test]
fn criterion_5_construction_soundness_sweep() {
    const TIME_BUDGET: Duration = Duration::from_secs(300);

    let started = Instant::now();
    let mut verified = 0;
    for n in 3u8..=14 {
        build_for_arity(Issue::I1, n, 1, None).unwrap().verify().unwrap();
        verified += 1;
    }
    for n in (3u8..=13).step_by(2) {
        build_for_arity(Issue::I3, n, 1, None).unwrap().verify().unwrap();
        verified += 1;
    }
    for n in (4u8..=12).step_by(2) {
        build_for_arity(Issue::I4, n, 1, None).unwrap().verify().unwrap();
        verified += 1;
    }
    for n in 4u8..=14 {
        build_for_arity(Issue::I5, n, 1, None).unwrap().verify().unwrap();
        verified += 1;
    }
    for n in 4u8..=12 {
        build_for_arity(Issue::I2, n, 1, None).unwrap().verify().unwrap();
        verified += 1;
    }
    for n in 7u8..=12 {
        let report = build_for_arity(Issue::I2, n, 2, None).unwrap().verify().unwrap();
        let a = &report.shapley[n as usize - 2];
        let b = &report.shapley[n as usize - 1];
        assert!(a > b, "n={n}: Sv(n-1) = {a} <= Sv(n) = {b}");
        assert!(b > &Rational::zero(), "n={n}: Sv(n) = {b}");
        verified += 1;
    }
    let elapsed = started.elapsed();
    assert_eq!(verified, 12 + 6 + 5 + 11 + 9 + 6);
    assert!(elapsed <= TIME_BUDGET, "took {elapsed:?}");
    println!("criterion 5: PASS ({verified} constructions, {elapsed:?})");
}

fn random_problem(rng: &mut ChaCha8Rng, max_n: u8) -> ExplanationProblem {
    let n = 1 + (rng.next_u32() % max_n as u32) as u8;
    let bits: Vec<u64> = (0..1usize << n).map(|_| rng.next_u64()).collect();
    let f = BooleanFunction::from_fn(n, |i| bits[i as usize] & 1 == 1).unwrap();
    let v = Point::from_index(n, rng.next_u32() & ((1 << n) - 1)).unwrap();
    ExplanationProblem::at_point(f, v).unwrap()
}

/// Criterion 6: the property suites — (a) the efficiency identity on 1,000
/// random problems up to n = 10, exactly; (b) duality on every function and
/// instance at m = 2 and 3; (c) engine = brute-force oracle on 200 random
/// problems up to n = 8; (d) the issue implications on every problem the
/// exhaustive sweeps visit.
#[test]
fn criterion_6_property_suites() {
    // (a) efficiency: sum of attributions = prediction - average
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..1000 {
        let p = random_problem(&mut rng, 10);
        let total = shapley_all(&p).into_iter().fold(Rational::zero(), |a, b| a + b);
        let baseline = rat(p.function().ones_count() as i64, 1i64 << p.arity());
        assert_eq!(total, rat(p.class() as i64, 1) - baseline);
    }

    // (b) duality over the full m = 2 and m = 3 spaces
    for m in [2u8, 3] {
        for t in 0..1u64 << (1u32 << m) {
            let f = BooleanFunction::from_fn(m, |i| (t >> i) & 1 == 1).unwrap();
            for v in 0..1u32 << m {
                let p = ExplanationProblem::at_point(f.clone(), Point::from_index(m, v).unwrap())
                    .unwrap();
                assert!(check_duality(&p), "m={m} t={t} v={v}");
            }
        }
    }

    // (c) dual-route equality
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for _ in 0..200 {
        let p = random_problem(&mut rng, 8);
        for i in 1..=p.arity() {
            assert_eq!(shapley_value(&p, i).unwrap(), shapley_brute(&p, i).unwrap());
        }
    }

    // (d) implications on every surveyed problem
    for m in 1u8..=3 {
        for t in 0..1u64 << (1u32 << m) {
            let f = BooleanFunction::from_fn(m, |i| (t >> i) & 1 == 1).unwrap();
            for v in 0..1u32 << m {
                let p = ExplanationProblem::at_point(f.clone(), Point::from_index(m, v).unwrap())
                    .unwrap();
                let r = detect(&p);
                assert!(svaudit::implies_i2(&r), "m={m} t={t} v={v}");
                if r.i4.is_some() {
                    assert!(r.i1.is_some() && r.i3.is_some(), "m={m} t={t} v={v}");
                }
            }
        }
    }
    println!("criterion 6: PASS");
}

/// Criterion 7: the exhaustive m = 3 survey finds at least as many
/// I1-exhibiting functions as the proven lower bound (10), within 30 s.
#[test]
fn criterion_7_survey_meets_the_lower_bound() {
    const TIME_BUDGET: Duration = Duration::from_secs(30);

    let started = Instant::now();
    let result = survey(3, None, 0).unwrap();
    let elapsed = started.elapsed();

    let found = result.function_counts.get(Issue::I1);
    let bound = lower_bound(Issue::I1, 3).unwrap();
    assert!(num_bigint::BigUint::from(found) >= bound, "{found} < {bound}");
    assert!(elapsed <= TIME_BUDGET, "took {elapsed:?}");
    println!("criterion 7: PASS ({found} functions >= {bound}, {elapsed:?})");
}

/// Criterion 8: analyze and survey emit byte-identical JSON (timing aside)
/// across repeated runs and across worker counts 1 vs. all cores.
#[test]
fn criterion_8_byte_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.btt");
    std::fs::write(&file, K_I4).unwrap();
    let file = file.display().to_string();
    let max = std::thread::available_parallelism().map_or(4, |n| n.get()).to_string();

    let analyze = ["analyze", "--function", &file, "--instance", "0011", "--format", "json"];
    let survey = ["survey", "--m", "3", "--format", "json"];
    let sampled =
        ["survey", "--m", "5", "--sample", "400", "--seed", "11", "--format", "json"];

    for args in [&analyze[..], &survey[..], &sampled[..]] {
        let mut outputs: Vec<String> = Vec::new();
        for workers in ["1", max.as_str(), "1", max.as_str()] {
            let out = Command::new(env!("CARGO_BIN_EXE_svaudit"))
                .args(args)
                .env("SVAUDIT_WORKERS", workers)
                .output()
                .unwrap();
            assert!(out.status.success(), "{args:?}");
            let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
            v.as_object_mut().unwrap().remove("timing");
            outputs.push(serde_json::to_string(&v).unwrap());
        }
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "output varies for {args:?}"
        );
    }
    println!("criterion 8: PASS");
}
