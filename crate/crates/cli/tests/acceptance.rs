//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`; a failing criterion fails its
//! test). Tolerances are pinned here and in `survmart::montecarlo`; every
//! non-Monte-Carlo criterion is exact.

use std::process::Command;
use std::time::{Duration, Instant};

use survmart::estimator::{
    greenwood_variance, influence, km_fit, InfluenceForm, Sample, Variance,
};
use survmart::model::{fixture_nsd, fixture_u2, induce_observed};
use survmart::montecarlo::{COVARIANCE_RTOL, COVERAGE_TOL, VARIANCE_RTOL};
use survmart::oracle::{
    atom_paths, check_measurability, exhibit_transform_drift, random_laws,
    verify_covariation, verify_cross_covariation, verify_transform_martingale, AtomSpace,
};
use survmart::pathwise::{CenteringVariant, Integrand, MartingaleKind, MeasurabilityClass};
use survmart::population::{check_identification, population_of, StepFunction};
use survmart::{rat, run_suite, Observation, Population, Rat, Status, Time};

const RANDOM_SEED: u64 = 20_240_611;

fn report(criterion: u32, passed: bool, description: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {criterion}: {description}");
    assert!(passed, "criterion {criterion}: {description}");
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_survmart"))
}

fn t(n: u64) -> Time {
    Time::from_int(n)
}

/// Criterion 1: the full exact-identity suite (martingale property, G-drift,
/// Doob sums, pathwise decomposition, hazard relation, cumulative gap) over
/// both fixtures and 50 seeded random laws, zero violations, under 10 s.
#[test]
fn criterion_1_exact_martingale_verification() {
    let started = Instant::now();
    let output = binary()
        .args(["verify", "--random-laws", "50"])
        .arg("--seed")
        .arg(RANDOM_SEED.to_string())
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed();
    let report_json: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("valid JSON");
    let passed = output.status.code() == Some(0)
        && report_json["total_violations"] == 0
        && report_json["laws"].as_array().unwrap().len() == 52
        && report_json["total_checks"].as_u64().unwrap() > 5_000
        && elapsed < Duration::from_secs(10);
    report(
        1,
        passed,
        &format!(
            "verify on U2, NSD, and 50 random laws: {} checks, {} violations in {elapsed:.2?}",
            report_json["total_checks"], report_json["total_violations"]
        ),
    );
}

/// Criterion 2: hazard equality and martingale indistinguishability hold
/// exactly iff the shared-discontinuity set is empty, with at least ten
/// random laws on each side of the dichotomy.
#[test]
fn criterion_2_iff_conditions_both_directions() {
    let mut shared = 0;
    let mut unshared = 0;
    let mut passed = true;
    for (name, law) in random_laws(RANDOM_SEED, 50) {
        let (observed, population) = population_of(&law);
        let suite = run_suite(&name, &observed, None);
        let has_shared = !population.shared_discontinuities().is_empty();
        if has_shared {
            shared += 1;
        } else {
            unshared += 1;
        }
        let hazards_equal = population.censoring_hazard_standard()
            == population.censoring_hazard_modified();
        passed &= suite.is_clean()
            && hazards_equal == !has_shared
            && suite.indistinguishable == !has_shared
            && suite.witness.is_some() == has_shared;
    }
    passed &= shared >= 10 && unshared >= 10;
    report(
        2,
        passed,
        &format!(
            "iff dichotomy exact on every law ({shared} shared-discontinuity laws, {unshared} without)"
        ),
    );
}

/// Criterion 3: transforms by admissible integrands are exact
/// F-martingales; all three covariation centerings verify; cross-products
/// against the failure martingale have exactly zero drift; and one
/// adapted-only integrand exhibits the drift its exclusion predicts.
#[test]
fn criterion_3_transform_and_covariation_theorems() {
    let mut passed = true;
    let mut drift_witnesses = 0;
    for law in [fixture_u2(), fixture_nsd()] {
        let observed = induce_observed(&law);
        let (_, population) = population_of(&law);
        let space = AtomSpace::new(&observed);
        let grid = population.grid().clone();
        let paths = atom_paths(&space, &population);

        // Transforms of the modified censoring martingale: a constant, a
        // deterministic step, and the half-predictable failure jump.
        let det_step = Integrand::deterministic_step(
            StepFunction::constant(rat(1, 1)).with_jump(grid.min().clone(), rat(-1, 2)),
        );
        for h in [Integrand::one(), det_step.clone(), Integrand::failure_jump()] {
            let violations = verify_transform_martingale(
                &h,
                MartingaleKind::CensoringModified,
                &space,
                &grid,
                &paths,
            )
            .expect("admissible integrand");
            passed &= violations.is_empty();
        }

        // All three covariation centerings, for integrands meeting each
        // variant's hypotheses.
        for variant in CenteringVariant::all() {
            let h1 = match variant.required_class() {
                MeasurabilityClass::Predictable => Integrand::one(),
                _ => Integrand::failure_jump(),
            };
            let violations = verify_covariation(
                &h1,
                &det_step,
                variant,
                &space,
                &grid,
                &paths,
                &population,
            )
            .expect("admissible integrands");
            passed &= violations.is_empty();
        }

        // Orthogonality: cross-products against the failure martingale.
        let violations = verify_cross_covariation(
            &Integrand::failure_jump(),
            &det_step,
            &space,
            &grid,
            &paths,
        )
        .expect("admissible integrands");
        passed &= violations.is_empty();

        // Hypothesis necessity: the adapted-only censoring jump must drift.
        let h = Integrand::censoring_jump();
        let measured = check_measurability(&h, &space, &grid);
        passed &= measured < MartingaleKind::CensoringModified.required_class();
        let drifts = exhibit_transform_drift(
            &h,
            MartingaleKind::CensoringModified,
            &space,
            &grid,
            &paths,
        )
        .expect("within declared bound");
        if !drifts.is_empty() {
            drift_witnesses += 1;
        }
    }
    passed &= drift_witnesses >= 1;
    report(
        3,
        passed,
        &format!(
            "transforms, three covariation centerings, and cross-orthogonality exact; {drift_witnesses} adapted-only drift witnesses"
        ),
    );
}

/// Criterion 4: on every independent law, the observable hazards recover the
/// latent marginal hazards exactly on their support.
#[test]
fn criterion_4_identification() {
    let mut laws = vec![
        ("u2".to_string(), fixture_u2()),
        ("nsd".to_string(), fixture_nsd()),
    ];
    laws.extend(random_laws(RANDOM_SEED, 50));
    let mut checked = 0;
    let mut passed = true;
    for (_, law) in &laws {
        if !law.is_independent() {
            continue;
        }
        checked += 1;
        passed &= check_identification(law).unwrap().is_clean();
    }
    passed &= checked >= 10;
    report(
        4,
        passed,
        &format!("latent hazards identified exactly on {checked} independent laws"),
    );
}

/// Criterion 5: both influence-function representations agree on every atom
/// at every valid time, with exact mean zero and second moment equal to the
/// asymptotic variance; on U2, sigma^2(1) = 1/4.
#[test]
fn criterion_5_influence_function_identities() {
    let mut passed = true;
    let zero = Rat::from_integer(0.into());
    for law in [fixture_u2(), fixture_nsd()] {
        let (observed, population) = population_of(&law);
        let curves = population.curves();
        for t in population.grid().iter() {
            if curves.censoring_survival().value(t) == zero {
                continue;
            }
            let mut mean = zero.clone();
            let mut second = zero.clone();
            for (x, status, mass) in observed.atoms() {
                let o = Observation::new(x.clone(), status);
                let censor = influence(curves, &o, t, InfluenceForm::Censoring).unwrap();
                let failure = influence(curves, &o, t, InfluenceForm::Failure).unwrap();
                passed &= censor == failure;
                mean += mass * &censor;
                second += mass * &censor * &censor;
            }
            passed &= mean == zero;
            passed &= match greenwood_variance(curves, t) {
                Variance::Finite(v) => second == v,
                Variance::Infinite => false,
            };
        }
    }
    let (_, u2_population) = population_of(&fixture_u2());
    passed &= greenwood_variance(u2_population.curves(), &t(1))
        == Variance::Finite(rat(1, 4));
    report(
        5,
        passed,
        "influence representations agree atomwise with E[IF]=0, E[IF^2]=sigma^2; U2 sigma^2(1)=1/4",
    );
}

/// Criterion 6: the Kaplan–Meier fit of any rational sample equals the
/// population functions of its empirical law, exactly.
#[test]
fn criterion_6_plugin_equality() {
    let samples = [
        vec![(1, true), (1, true), (1, false), (2, true)],
        vec![(1, true), (2, false), (2, false), (3, true), (7, false)],
        vec![(4, false)],
        vec![(1, false), (1, false), (2, true), (5, true), (5, false), (6, true)],
        vec![(3, true), (3, true), (3, true)],
    ];
    let mut passed = true;
    for rows in &samples {
        let sample = Sample::from_observations(rows.iter().map(|&(time, failed)| {
            Observation::new(
                t(time),
                if failed { Status::Failure } else { Status::Censored },
            )
        }))
        .unwrap();
        let fit = km_fit(&sample);
        let population = Population::from_observed(&sample.empirical_law());
        passed &= fit.curves() == population.curves();
    }
    report(
        6,
        passed,
        "km_fit equals population functions of the empirical law on every sample, exactly",
    );
}

/// Criterion 7: U2 Monte Carlo at n=10^4, B=10^3: empirical variance within
/// 5% of 1/4 and coverage within 0.95 ± 0.02, single-threaded in under 60 s.
#[test]
fn criterion_7_monte_carlo_variance_and_coverage() {
    let started = Instant::now();
    let output = binary()
        .args([
            "simulate", "--spec", "u2", "--n", "10000", "--reps", "1000", "--t", "1", "--seed",
            "7",
        ])
        .output()
        .expect("binary runs");
    let elapsed = started.elapsed();
    let report_json: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("valid JSON");
    let point = &report_json["points"][0];
    let variance = point["empirical_variance"].as_f64().unwrap();
    let coverage = point["coverage"].as_f64().unwrap();
    let passed = output.status.code() == Some(0)
        && (variance - 0.25).abs() <= VARIANCE_RTOL * 0.25
        && (coverage - 0.95).abs() <= COVERAGE_TOL
        && elapsed < Duration::from_secs(60);
    report(
        7,
        passed,
        &format!(
            "U2 n=10^4 B=10^3: Var {variance:.4} (target 0.25 ± 5%), coverage {coverage:.3} (0.95 ± 0.02) in {elapsed:.2?}"
        ),
    );
}

/// Criterion 8: NSD Monte Carlo at n=10^4, B=10^3: empirical covariance of
/// the estimator at times 1 and 2 within 10% of 1/4.
#[test]
fn criterion_8_monte_carlo_covariance() {
    let output = binary()
        .args([
            "simulate", "--spec", "nsd", "--n", "10000", "--reps", "1000", "--t", "1,2",
            "--seed", "7",
        ])
        .output()
        .expect("binary runs");
    let report_json: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("valid JSON");
    let pair = &report_json["pairs"][0];
    let covariance = pair["empirical_covariance"].as_f64().unwrap();
    let passed = output.status.code() == Some(0)
        && pair["population_covariance"]["rat"] == "1/4"
        && (covariance - 0.25).abs() <= COVARIANCE_RTOL * 0.25;
    report(
        8,
        passed,
        &format!("NSD n=10^4 B=10^3: Cov(1,2) = {covariance:.4} (target 0.25 ± 10%)"),
    );
}

/// Criterion 9: a fixed seed makes `simulate` output byte-identical across
/// runs.
#[test]
fn criterion_9_simulation_determinism() {
    let run = || {
        binary()
            .args([
                "simulate", "--spec", "u2", "--n", "10000", "--reps", "1000", "--t", "1,2",
                "--seed", "7",
            ])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    let passed = first.status.code() == Some(0)
        && first.stdout == second.stdout
        && !first.stdout.is_empty();
    report(
        9,
        passed,
        "identical seeds produce byte-identical simulate JSON across two runs",
    );
}
