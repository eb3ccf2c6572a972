//! Command-line front end: describe population functions of a distribution
//! spec, verify the exact martingale identities, fit Kaplan–Meier curves
//! from CSV data, check the influence-function identities, and run seeded
//! Monte Carlo experiments.
//!
//! Exit codes are stable: 0 means every requested check passed, 1 means a
//! mathematical identity was violated, 2 means the input could not be used.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use survmart::estimator::{influence, km_fit, InfluenceForm, Sample, Variance};
use survmart::model::{
    fixture_nsd, fixture_u2, induce_observed, parse_distribution_spec, support_sets,
};
use survmart::montecarlo::{run_experiment, ExperimentConfig};
use survmart::oracle::{
    atom_paths, check_measurability, exhibit_transform_drift, random_laws,
    verify_transform_martingale, AtomSpace, DistinguishingWitness, Violation,
};
use survmart::pathwise::{Integrand, MartingaleKind};
use survmart::population::population_of;
use survmart::{run_suite, Error, LatentLaw, Observation, Rat, RatDisplay, Time};

const EXIT_PASS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "survmart",
    version,
    about = "Exact martingale calculus and Kaplan-Meier estimation for censored data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the population functions of a distribution spec: hazards,
    /// survivals, support sets, and shared-discontinuity flags.
    Describe {
        /// Path to a distribution spec, or a builtin name (u2, nsd).
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the full exact-identity verification suite and report violations.
    Verify {
        /// Path to a distribution spec, or a builtin name (u2, nsd).
        /// Defaults to both builtin fixtures.
        #[arg(long)]
        spec: Option<String>,
        /// Seed for the randomized-law generator.
        #[arg(long, default_value_t = 20_240_611)]
        seed: u64,
        /// Number of additional randomized laws to verify.
        #[arg(long, default_value_t = 50)]
        random_laws: usize,
        /// Also check one named integrand against every martingale,
        /// documenting the expected drift when its measurability is too weak
        /// (e.g. deltaNC).
        #[arg(long)]
        h: Option<String>,
    },
    /// Fit Kaplan-Meier curves to `time,status` CSV data.
    Km {
        /// CSV file with a `time,status` header; status is 0 (censored) or
        /// 1 (failure).
        #[arg(long)]
        data: String,
        /// Comma-separated evaluation times (defaults to all observed
        /// times).
        #[arg(long)]
        t: Option<String>,
        /// Confidence level for the Wald intervals.
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a seeded Monte Carlo experiment and compare empirical moments
    /// and coverage against the population values. Output is always JSON.
    Simulate {
        /// Path to a distribution spec, or a builtin name (u2, nsd).
        #[arg(long)]
        spec: String,
        /// Sample size per replication.
        #[arg(long)]
        n: usize,
        /// Number of replications.
        #[arg(long)]
        reps: usize,
        /// Comma-separated evaluation times.
        #[arg(long)]
        t: String,
        #[arg(long)]
        seed: u64,
        /// Confidence level for the coverage check.
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Check the influence-function identities: both representations agree
    /// on every atom, the mean is zero, and the second moment equals the
    /// asymptotic variance.
    Ifcheck {
        /// Path to a distribution spec, or a builtin name (u2, nsd).
        #[arg(long)]
        spec: String,
        /// Comma-separated evaluation times (defaults to the whole grid).
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(command: Command) -> survmart::Result<u8> {
    match command {
        Command::Describe { spec, format } => describe(&spec, format),
        Command::Verify {
            spec,
            seed,
            random_laws,
            h,
        } => verify(spec.as_deref(), seed, random_laws, h.as_deref()),
        Command::Km {
            data,
            t,
            level,
            format,
        } => km(&data, t.as_deref(), level, format),
        Command::Simulate {
            spec,
            n,
            reps,
            t,
            seed,
            level,
        } => simulate(&spec, n, reps, &t, seed, level),
        Command::Ifcheck { spec, t, format } => ifcheck(&spec, t.as_deref(), format),
    }
}

/// Resolves `--spec`: a builtin fixture name or a path to a spec file.
fn resolve_spec(value: &str) -> survmart::Result<(String, LatentLaw)> {
    match value.to_ascii_lowercase().as_str() {
        "u2" => Ok(("u2".to_string(), fixture_u2())),
        "nsd" => Ok(("nsd".to_string(), fixture_nsd())),
        _ => {
            let text = fs::read_to_string(value)?;
            let law = parse_distribution_spec(&text)?;
            Ok((value.to_string(), law))
        }
    }
}

fn parse_times(list: &str) -> survmart::Result<Vec<Time>> {
    list.split(',')
        .map(|token| Time::parse(token.trim()))
        .collect()
}

fn print_json<T: Serialize>(value: &T) -> survmart::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

// ---------------------------------------------------------------- describe

#[derive(Serialize)]
struct DescribeRow {
    u: String,
    failure_hazard: RatDisplay,
    censoring_hazard_standard: RatDisplay,
    censoring_hazard_modified: RatDisplay,
    failure_survival: RatDisplay,
    censoring_survival: RatDisplay,
    shared_discontinuity: bool,
}

#[derive(Serialize)]
struct DescribeReport {
    law: String,
    summary: String,
    horizon: String,
    at_risk_support: Vec<String>,
    at_risk_modified_support: Vec<String>,
    shared_discontinuities: Vec<String>,
    rows: Vec<DescribeRow>,
}

fn describe(spec: &str, format: Format) -> survmart::Result<u8> {
    let (name, law) = resolve_spec(spec)?;
    let (observed, population) = population_of(&law);
    let support = support_sets(&observed);
    let shared = population.shared_discontinuities();
    let rows = population
        .grid()
        .iter()
        .map(|u| DescribeRow {
            u: u.to_string(),
            failure_hazard: RatDisplay::from(&population.failure_hazard().jump(u)),
            censoring_hazard_standard: RatDisplay::from(
                &population.censoring_hazard_standard().jump(u),
            ),
            censoring_hazard_modified: RatDisplay::from(
                &population.censoring_hazard_modified().jump(u),
            ),
            failure_survival: RatDisplay::from(&population.failure_survival().value(u)),
            censoring_survival: RatDisplay::from(&population.censoring_survival().value(u)),
            shared_discontinuity: shared.contains(u),
        })
        .collect();
    let report = DescribeReport {
        law: name,
        summary: law.summary(),
        horizon: population.horizon().to_string(),
        at_risk_support: support.at_risk.iter().map(Time::to_string).collect(),
        at_risk_modified_support: support
            .at_risk_modified
            .iter()
            .map(Time::to_string)
            .collect(),
        shared_discontinuities: shared.iter().map(Time::to_string).collect(),
        rows,
    };
    match format {
        Format::Json => print_json(&report)?,
        Format::Tsv => {
            println!("# law: {} ({})", report.law, report.summary);
            println!(
                "# horizon: {}  shared discontinuities: {}",
                report.horizon,
                join_or_dash(&report.shared_discontinuities)
            );
            println!(
                "# at-risk support: {}  modified: {}",
                join_or_dash(&report.at_risk_support),
                join_or_dash(&report.at_risk_modified_support)
            );
            println!("u\tdL_T\tdL_C_standard\tdL_C_modified\tF\tG\tshared");
            for row in &report.rows {
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    row.u,
                    row.failure_hazard.rat,
                    row.censoring_hazard_standard.rat,
                    row.censoring_hazard_modified.rat,
                    row.failure_survival.rat,
                    row.censoring_survival.rat,
                    row.shared_discontinuity
                );
            }
        }
    }
    Ok(EXIT_PASS)
}

fn join_or_dash(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

// ------------------------------------------------------------------ verify

#[derive(Serialize)]
struct LawReport {
    law: String,
    grid: Vec<String>,
    atom_count: usize,
    shared_discontinuities: Vec<String>,
    indistinguishable: bool,
    witness: Option<DistinguishingWitness>,
    checks: usize,
    violations: Vec<Violation>,
    expected_failures: usize,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ForcedOutcome {
    martingale: String,
    required_class: String,
    status: String,
    expected_drifts: Vec<Violation>,
    violations: Vec<Violation>,
}

#[derive(Serialize)]
struct ForcedIntegrandReport {
    integrand: String,
    measured_class: String,
    outcomes: Vec<ForcedOutcome>,
}

#[derive(Serialize)]
struct VerifyReport {
    laws: Vec<LawReport>,
    total_checks: usize,
    total_violations: usize,
    necessity_witness_found: bool,
    forced_integrand: Option<ForcedIntegrandReport>,
    pass: bool,
}

fn verify(
    spec: Option<&str>,
    seed: u64,
    random_count: usize,
    forced: Option<&str>,
) -> survmart::Result<u8> {
    let mut laws: Vec<(String, LatentLaw)> = match spec {
        Some(value) => vec![resolve_spec(value)?],
        None => vec![
            ("u2".to_string(), fixture_u2()),
            ("nsd".to_string(), fixture_nsd()),
        ],
    };
    let primary_count = laws.len();
    laws.extend(random_laws(seed, random_count));

    let mut reports = Vec::with_capacity(laws.len());
    let mut total_checks = 0;
    let mut total_violations = 0;
    let mut necessity_witness_found = false;
    for (name, law) in &laws {
        let observed = induce_observed(law);
        let suite = run_suite(name, &observed, Some(law));
        let checks = suite.total_checks();
        total_checks += checks;
        total_violations += suite.violation_count();
        necessity_witness_found |= suite.necessity_witness_found();
        let mut violations = Vec::new();
        let mut notes = Vec::new();
        let mut expected_failures = 0;
        for section in &suite.sections {
            violations.extend(section.violations.iter().cloned());
            expected_failures += section.expected_failures.len();
            notes.extend(
                section
                    .notes
                    .iter()
                    .map(|n| format!("{}: {n}", section.name)),
            );
        }
        reports.push(LawReport {
            law: suite.law,
            grid: suite.grid,
            atom_count: suite.atom_count,
            shared_discontinuities: suite.shared_discontinuities,
            indistinguishable: suite.indistinguishable,
            witness: suite.witness,
            checks,
            violations,
            expected_failures,
            notes,
        });
    }

    // An explicitly forced integrand is checked against each martingale on
    // the primary (non-random) laws: admitted integrands must verify, and
    // under-qualified ones must exhibit the drift their exclusion predicts.
    let forced_integrand = match forced {
        None => None,
        Some(name) => {
            let h = Integrand::by_name(name).ok_or_else(|| {
                Error::BadExperiment(format!("unknown integrand `{name}`"))
            })?;
            let mut outcomes = Vec::new();
            let mut measured_class = String::new();
            for (_, law) in &laws[..primary_count] {
                let observed = induce_observed(law);
                let (_, population) = population_of(law);
                let space = AtomSpace::new(&observed);
                let grid = population.grid().clone();
                let paths = atom_paths(&space, &population);
                let measured = check_measurability(&h, &space, &grid);
                measured_class = measured.to_string();
                for kind in [
                    MartingaleKind::Failure,
                    MartingaleKind::CensoringStandard,
                    MartingaleKind::CensoringModified,
                ] {
                    let (status, expected_drifts, violations) =
                        if measured >= kind.required_class() {
                            let violations =
                                verify_transform_martingale(&h, kind, &space, &grid, &paths)?;
                            let status = if violations.is_empty() {
                                "verified"
                            } else {
                                "violated"
                            };
                            (status, Vec::new(), violations)
                        } else {
                            let drifts =
                                exhibit_transform_drift(&h, kind, &space, &grid, &paths)?;
                            let status = if drifts.is_empty() {
                                "refused (no drift on this law)"
                            } else {
                                "refused (drift exhibited)"
                            };
                            (status, drifts, Vec::new())
                        };
                    total_violations += violations.len();
                    outcomes.push(ForcedOutcome {
                        martingale: kind.label().to_string(),
                        required_class: kind.required_class().to_string(),
                        status: status.to_string(),
                        expected_drifts,
                        violations,
                    });
                }
            }
            Some(ForcedIntegrandReport {
                integrand: name.to_string(),
                measured_class,
                outcomes,
            })
        }
    };

    let report = VerifyReport {
        laws: reports,
        total_checks,
        total_violations,
        necessity_witness_found,
        forced_integrand,
        pass: total_violations == 0,
    };
    print_json(&report)?;
    Ok(if report.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

// ---------------------------------------------------------------------- km

#[derive(Serialize)]
struct KmRow {
    t: String,
    survival: RatDisplay,
    censoring_survival: RatDisplay,
    variance: Option<RatDisplay>,
    variance_infinite: bool,
    ci_lower: f64,
    ci_upper: f64,
    degenerate: bool,
    unbounded: bool,
    frozen: bool,
}

#[derive(Serialize)]
struct KmReport {
    n: usize,
    horizon: String,
    level: f64,
    rows: Vec<KmRow>,
}

fn km(data: &str, t: Option<&str>, level: f64, format: Format) -> survmart::Result<u8> {
    let file = fs::File::open(data)?;
    let sample = Sample::from_csv(file)?;
    let fit = km_fit(&sample);
    let times: Vec<Time> = match t {
        Some(list) => parse_times(list)?,
        None => sample
            .counted()
            .map(|(o, _)| o.time.clone())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    let mut rows = Vec::with_capacity(times.len());
    for t in &times {
        let interval = fit.confidence_interval(t, level)?;
        let (variance, variance_infinite) = match fit.variance(t) {
            Variance::Finite(v) => (Some(RatDisplay::from(&v)), false),
            Variance::Infinite => (None, true),
        };
        rows.push(KmRow {
            t: t.to_string(),
            survival: RatDisplay::from(&fit.survival(t)),
            censoring_survival: RatDisplay::from(&fit.censoring_survival(t)),
            variance,
            variance_infinite,
            ci_lower: interval.lower,
            ci_upper: interval.upper,
            degenerate: interval.degenerate,
            unbounded: interval.unbounded,
            frozen: t > fit.horizon(),
        });
    }
    let report = KmReport {
        n: fit.n(),
        horizon: fit.horizon().to_string(),
        level,
        rows,
    };
    match format {
        Format::Json => print_json(&report)?,
        Format::Tsv => {
            println!("# n: {}  horizon: {}  level: {}", report.n, report.horizon, report.level);
            println!("t\tF\tG\tsigma2\tci_lower\tci_upper\tfrozen");
            for row in &report.rows {
                let sigma2 = match &row.variance {
                    Some(v) => v.rat.clone(),
                    None => "inf".to_string(),
                };
                println!(
                    "{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{}",
                    row.t,
                    row.survival.rat,
                    row.censoring_survival.rat,
                    sigma2,
                    row.ci_lower,
                    row.ci_upper,
                    row.frozen
                );
            }
        }
    }
    Ok(EXIT_PASS)
}

// ---------------------------------------------------------------- simulate

fn simulate(
    spec: &str,
    n: usize,
    reps: usize,
    t: &str,
    seed: u64,
    level: f64,
) -> survmart::Result<u8> {
    let (label, law) = resolve_spec(spec)?;
    let config = ExperimentConfig {
        law,
        label,
        n,
        replications: reps,
        t_points: parse_times(t)?,
        seed,
        level,
    };
    let result = run_experiment(&config)?;
    println!("{}", result.to_json());
    Ok(if result.all_pass { EXIT_PASS } else { EXIT_VIOLATION })
}

// ----------------------------------------------------------------- ifcheck

#[derive(Serialize)]
struct IfcheckRow {
    t: String,
    status: String,
    reason: Option<String>,
    forms_agree: Option<bool>,
    mean: Option<RatDisplay>,
    second_moment: Option<RatDisplay>,
    variance: Option<RatDisplay>,
    pass: Option<bool>,
}

#[derive(Serialize)]
struct IfcheckReport {
    law: String,
    atom_count: usize,
    rows: Vec<IfcheckRow>,
    pass: bool,
}

fn ifcheck(spec: &str, t: Option<&str>, format: Format) -> survmart::Result<u8> {
    let (name, law) = resolve_spec(spec)?;
    let (observed, population) = population_of(&law);
    let curves = population.curves();
    let times: Vec<Time> = match t {
        Some(list) => parse_times(list)?,
        None => population.grid().iter().cloned().collect(),
    };
    let zero = Rat::from_integer(0.into());
    let mut rows = Vec::with_capacity(times.len());
    let mut all_pass = true;
    for t in &times {
        if curves.censoring_survival().value(t) == zero {
            rows.push(IfcheckRow {
                t: t.to_string(),
                status: "skipped".to_string(),
                reason: Some(
                    "censoring survival is zero at this time; the representation divides by it"
                        .to_string(),
                ),
                forms_agree: None,
                mean: None,
                second_moment: None,
                variance: None,
                pass: None,
            });
            continue;
        }
        let mut forms_agree = true;
        let mut mean = zero.clone();
        let mut second = zero.clone();
        for (x, status, mass) in observed.atoms() {
            let o = Observation::new(x.clone(), status);
            let censor = influence(curves, &o, t, InfluenceForm::Censoring)?;
            let failure = influence(curves, &o, t, InfluenceForm::Failure)?;
            forms_agree &= censor == failure;
            mean += mass * &censor;
            second += mass * &censor * &censor;
        }
        let variance = match survmart::estimator::greenwood_variance(curves, t) {
            Variance::Finite(v) => v,
            Variance::Infinite => unreachable!("population curves are internally consistent"),
        };
        let pass = forms_agree && mean == zero && second == variance;
        all_pass &= pass;
        rows.push(IfcheckRow {
            t: t.to_string(),
            status: "checked".to_string(),
            reason: None,
            forms_agree: Some(forms_agree),
            mean: Some(RatDisplay::from(&mean)),
            second_moment: Some(RatDisplay::from(&second)),
            variance: Some(RatDisplay::from(&variance)),
            pass: Some(pass),
        });
    }
    let report = IfcheckReport {
        law: name,
        atom_count: observed.atom_count(),
        rows,
        pass: all_pass,
    };
    match format {
        Format::Json => print_json(&report)?,
        Format::Tsv => {
            println!("# law: {}  atoms: {}", report.law, report.atom_count);
            println!("t\tstatus\tforms_agree\tmean\tsecond_moment\tsigma2\tpass");
            for row in &report.rows {
                let mut line = String::new();
                write!(line, "{}\t{}", row.t, row.status).unwrap();
                match row.status.as_str() {
                    "checked" => write!(
                        line,
                        "\t{}\t{}\t{}\t{}\t{}",
                        row.forms_agree.unwrap(),
                        row.mean.as_ref().unwrap().rat,
                        row.second_moment.as_ref().unwrap().rat,
                        row.variance.as_ref().unwrap().rat,
                        row.pass.unwrap()
                    )
                    .unwrap(),
                    _ => write!(
                        line,
                        "\t-\t-\t-\t-\t{}",
                        row.reason.as_deref().unwrap_or("-")
                    )
                    .unwrap(),
                }
                println!("{line}");
            }
            println!("# overall: {}", if report.pass { "pass" } else { "FAIL" });
        }
    }
    Ok(if report.pass { EXIT_PASS } else { EXIT_VIOLATION })
}
