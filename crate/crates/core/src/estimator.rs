//! Sample-based estimation: the Kaplan–Meier estimator, its Greenwood-type
//! variance and cross-time covariance, both influence-function
//! representations, and Wald confidence intervals.
//!
//! Fitting works in exact rational arithmetic by direct counting over the
//! sample, *not* by delegating to the population machinery — so the fact that
//! a fit coincides exactly with the population functions of the empirical law
//! is a genuine cross-check of the plugin principle, exercised in the tests.

use std::collections::BTreeMap;
use std::io::Read;

use num_traits::{One, Zero};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::{Observation, ObservedLaw, Status, Time, TimeGrid};
use crate::population::{Curves, StepFunction};
use crate::rational::{parse_rat, to_f64, Rat};

/// An i.i.d. sample of observations, stored as a counted multiset so huge
/// simulated samples stay cheap: the number of distinct observed values is
/// bounded by the law's support, not by `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    counts: BTreeMap<Observation, usize>,
    n: usize,
}

impl Sample {
    /// Builds a sample from individual observations.
    pub fn from_observations(
        observations: impl IntoIterator<Item = Observation>,
    ) -> Result<Sample> {
        let mut sample = Sample {
            counts: BTreeMap::new(),
            n: 0,
        };
        for o in observations {
            sample.push(o, 1);
        }
        sample.reject_empty()
    }

    /// Builds a sample from pre-counted observations; zero counts are fine
    /// and simply dropped.
    pub fn from_counts(counts: impl IntoIterator<Item = (Observation, usize)>) -> Result<Sample> {
        let mut sample = Sample {
            counts: BTreeMap::new(),
            n: 0,
        };
        for (o, k) in counts {
            sample.push(o, k);
        }
        sample.reject_empty()
    }

    /// Parses `time,status` CSV rows (header required). Times may be
    /// decimals, integers, or `num/den` rationals; status is `0` (censored)
    /// or `1` (failure). All malformed rows are reported together, by line
    /// number, rather than one at a time.
    pub fn from_csv(reader: impl Read) -> Result<Sample> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv_reader
            .headers()
            .map_err(|e| Error::BadRows {
                detail: format!("unreadable header: {e}"),
            })?
            .clone();
        let expected = ["time", "status"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::BadRows {
                detail: format!(
                    "header must be `time,status`, found `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        let mut sample = Sample {
            counts: BTreeMap::new(),
            n: 0,
        };
        let mut bad_rows = Vec::new();
        for (index, record) in csv_reader.records().enumerate() {
            let line = index + 2; // header is line 1
            let mut fail = |reason: String| bad_rows.push(format!("line {line}: {reason}"));
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    fail(format!("{e}"));
                    continue;
                }
            };
            if record.len() != 2 {
                fail(format!("expected 2 fields, found {}", record.len()));
                continue;
            }
            let time = match parse_rat(&record[0]).and_then(Time::new) {
                Ok(t) => t,
                Err(e) => {
                    fail(format!("bad time `{}`: {e}", &record[0]));
                    continue;
                }
            };
            let status = match &record[1] {
                "0" => Status::Censored,
                "1" => Status::Failure,
                other => {
                    fail(format!("bad status `{other}`: must be 0 or 1"));
                    continue;
                }
            };
            sample.push(Observation::new(time, status), 1);
        }
        if !bad_rows.is_empty() {
            return Err(Error::BadRows {
                detail: bad_rows.join("; "),
            });
        }
        sample.reject_empty()
    }

    fn push(&mut self, o: Observation, k: usize) {
        if k > 0 {
            *self.counts.entry(o).or_insert(0) += k;
            self.n += k;
        }
    }

    fn reject_empty(self) -> Result<Sample> {
        if self.n == 0 {
            Err(Error::EmptySample)
        } else {
            Ok(self)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Distinct observations with their multiplicities, in time order.
    pub fn counted(&self) -> impl Iterator<Item = (&Observation, usize)> {
        self.counts.iter().map(|(o, &k)| (o, k))
    }

    /// The empirical law: each distinct observation carries mass `count / n`.
    pub fn empirical_law(&self) -> ObservedLaw {
        let grid = TimeGrid::from_set(self.counts.keys().map(|o| o.time.clone()).collect())
            .expect("samples are nonempty");
        let n = Rat::from_integer(self.n.into());
        let entries = self
            .counts
            .iter()
            .map(|(o, &k)| {
                (
                    (o.time.clone(), o.status),
                    Rat::from_integer(k.into()) / &n,
                )
            })
            .collect();
        ObservedLaw::new(grid, entries).expect("empirical masses sum to one")
    }
}

/// A fitted Kaplan–Meier estimate: the full curve set (hazards and
/// product-limit survivals for both failure and censoring) plus the sample
/// size, frozen beyond the largest observation.
#[derive(Clone, Debug, PartialEq)]
pub struct KMEstimate {
    curves: Curves,
    horizon: Time,
    n: usize,
}

impl KMEstimate {
    pub fn curves(&self) -> &Curves {
        &self.curves
    }

    /// The largest observed time; every curve is constant beyond it.
    pub fn horizon(&self) -> &Time {
        &self.horizon
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `F̂(t)`, the product-limit failure survival estimate.
    pub fn survival(&self, t: &Time) -> Rat {
        self.curves.failure_survival().value(t)
    }

    /// `Ĝ(t)`, the product-limit censoring survival estimate built from the
    /// modified at-risk counts.
    pub fn censoring_survival(&self, t: &Time) -> Rat {
        self.curves.censoring_survival().value(t)
    }

    /// The Greenwood-type variance of `√n (F̂(t) - F(t))`, with the fitted
    /// curves plugged into the population formula.
    pub fn variance(&self, t: &Time) -> Variance {
        greenwood_variance(&self.curves, t)
    }

    /// Plugin covariance of `√n (F̂(s) - F(s))` and `√n (F̂(t) - F(t))`.
    pub fn covariance(&self, s: &Time, t: &Time) -> Variance {
        km_covariance(&self.curves, s, t)
    }

    /// Wald confidence interval for `F(t)` at the given level.
    pub fn confidence_interval(&self, t: &Time, level: f64) -> Result<ConfidenceInterval> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::BadLevel(level));
        }
        let estimate = to_f64(&self.survival(t));
        match self.variance(t) {
            Variance::Infinite => Ok(ConfidenceInterval {
                estimate,
                lower: 0.0,
                upper: 1.0,
                level,
                degenerate: false,
                unbounded: true,
            }),
            Variance::Finite(sigma2) => {
                let z = normal_quantile(level);
                let half_width = z * (to_f64(&sigma2) / self.n as f64).sqrt();
                Ok(ConfidenceInterval {
                    estimate,
                    lower: (estimate - half_width).max(0.0),
                    upper: (estimate + half_width).min(1.0),
                    level,
                    degenerate: sigma2.is_zero(),
                    unbounded: false,
                })
            }
        }
    }
}

/// Two-sided standard normal quantile for a confidence level.
fn normal_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}

/// A Wald interval, clipped to `[0, 1]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConfidenceInterval {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    /// True when the variance estimate is exactly zero, collapsing the
    /// interval to a point.
    pub degenerate: bool,
    /// True when the variance carries the infinite marker; the interval is
    /// then the whole of `[0, 1]` and says nothing.
    pub unbounded: bool,
}

/// Fits the Kaplan–Meier curves by direct counting.
///
/// At each distinct observed time `u` the failure hazard increment is
/// `d_u / r_u` (failures over at-risk), the standard censoring increment is
/// `c_u / r_u`, and the modified censoring increment is `c_u / m_u`, where
/// the modified at-risk count `m_u` drops the failures happening exactly at
/// `u`. Empty at-risk sets contribute nothing (`0/0 = 0`).
pub fn km_fit(sample: &Sample) -> KMEstimate {
    let mut failure_hazard = StepFunction::zero();
    let mut censoring_standard = StepFunction::zero();
    let mut censoring_modified = StepFunction::zero();
    let mut at_risk = sample.n(); // #{x >= u}, maintained by sweeping forward
    let times: Vec<Time> = sample
        .counts
        .keys()
        .map(|o| o.time.clone())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    for u in &times {
        let failures = sample.count_at(u, Status::Failure);
        let censorings = sample.count_at(u, Status::Censored);
        let modified_at_risk = at_risk - failures;
        let ratio = |numerator: usize, denominator: usize| {
            if denominator == 0 {
                Rat::zero()
            } else {
                Rat::new(numerator.into(), denominator.into())
            }
        };
        failure_hazard.set_jump(u.clone(), ratio(failures, at_risk));
        censoring_standard.set_jump(u.clone(), ratio(censorings, at_risk));
        censoring_modified.set_jump(u.clone(), ratio(censorings, modified_at_risk));
        at_risk -= failures + censorings;
    }
    KMEstimate {
        curves: Curves::from_hazards(failure_hazard, censoring_standard, censoring_modified),
        horizon: times.last().expect("samples are nonempty").clone(),
        n: sample.n(),
    }
}

impl Sample {
    fn count_at(&self, u: &Time, status: Status) -> usize {
        self.counts
            .get(&Observation::new(u.clone(), status))
            .copied()
            .unwrap_or(0)
    }
}

/// A variance that may carry the infinite marker (a zero censoring survival
/// strictly inside the integration range). For curve sets produced by
/// [`km_fit`] or the population machinery the marker is unreachable — a
/// vanished at-risk set forces a zero failure increment — but the formula is
/// defended anyway.
#[derive(Clone, Debug, PartialEq)]
pub enum Variance {
    Finite(Rat),
    Infinite,
}

impl Variance {
    pub fn expect_finite(&self) -> &Rat {
        match self {
            Variance::Finite(v) => v,
            Variance::Infinite => panic!("variance carries the infinite marker"),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Variance::Finite(_))
    }
}

/// The Greenwood-type asymptotic variance of `√n (F̂(t) - F(t))`:
///
/// `σ²(t) = F(t)² Σ_{u ≤ t} dΛ_T(u) / (G(u−) F(u))`
///
/// using `d{1/F}(u) = dΛ_T(u) / F(u)`. When `F(t) = 0` the prefactor
/// dominates and the variance is zero by convention (the estimator is pinned
/// at zero from the first mass-exhausting failure onward).
pub fn greenwood_variance(curves: &Curves, t: &Time) -> Variance {
    match raw_variance_integral(curves, t) {
        None => Variance::Infinite,
        Some(integral) => {
            let survival = curves.failure_survival().value(t);
            Variance::Finite(&survival * &survival * integral)
        }
    }
}

/// Plugin covariance of the estimator at two times:
/// `σ²(s, t) = F(s) F(t) Σ_{u ≤ s∧t} dΛ_T(u) / (G(u−) F(u))`.
pub fn km_covariance(curves: &Curves, s: &Time, t: &Time) -> Variance {
    let earlier = s.min(t);
    match raw_variance_integral(curves, earlier) {
        None => Variance::Infinite,
        Some(integral) => Variance::Finite(
            curves.failure_survival().value(s) * curves.failure_survival().value(t) * integral,
        ),
    }
}

/// `Σ_{u ≤ t} dΛ_T(u) / (G(u−) F(u))`, or `None` for the infinite marker.
/// When `F(t) = 0` the sum is cut at the mass-exhausting failure (every
/// caller multiplies by `F(t)` or `F(t)²`, so the tail cannot matter), which
/// keeps the summand's `F(u)` strictly positive up to the cut.
fn raw_variance_integral(curves: &Curves, t: &Time) -> Option<Rat> {
    let mut integral = Rat::zero();
    for (u, jump) in curves.failure_hazard().jumps() {
        if u > t {
            break;
        }
        let survival = curves.failure_survival().value(u);
        if survival.is_zero() {
            break;
        }
        let censoring_before = curves.censoring_survival().value_before(u);
        if censoring_before.is_zero() {
            return None;
        }
        integral += jump / (censoring_before * survival);
    }
    Some(integral)
}

/// Which representation of the Kaplan–Meier influence function to evaluate.
/// Both give the same number on every observation; they differ in which
/// martingale carries the fluctuation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InfluenceForm {
    /// `I(X > t)/G(t) + Σ_{u ≤ t} (F(t)/F(u)) δM_C(u)/G(u) − F(t)`, built on
    /// the modified censoring martingale.
    Censoring,
    /// `−Σ_{u ≤ t} (F(t)/F(u)) δM_T(u)/G(u−)`, built on the failure
    /// martingale via integration by parts.
    Failure,
}

impl InfluenceForm {
    pub fn label(self) -> &'static str {
        match self {
            InfluenceForm::Censoring => "censor-form",
            InfluenceForm::Failure => "failure-form",
        }
    }
}

/// Evaluates the influence function of the Kaplan–Meier estimator at `t` for
/// one observation, against any curve set (population or fitted).
///
/// Survival ratios `F(t)/F(u)` are computed as products of `1 − dΛ_T(v)` over
/// `(u, t]`, so they are defined even where `F` itself has hit zero. Genuine
/// divisions by a zero censoring survival are rejected with the offending
/// time.
pub fn influence(
    curves: &Curves,
    observation: &Observation,
    t: &Time,
    form: InfluenceForm,
) -> Result<Rat> {
    let x = &observation.time;
    let failed = observation.status.is_failure();
    // F(t)/F(u) as a division-free running product over (u, t], accumulated
    // from the right: ratio_from(u) = prod_{u < v <= t} (1 - dL_T(v)).
    let ratio_from = |u: &Time| -> Rat {
        curves
            .failure_hazard()
            .jumps()
            .filter(|(v, _)| *v > u && *v <= t)
            .map(|(_, jump)| Rat::one() - jump)
            .product()
    };
    match form {
        InfluenceForm::Censoring => {
            let censoring_at_t = curves.censoring_survival().value(t);
            if censoring_at_t.is_zero() {
                return Err(Error::ZeroSurvival {
                    at: t.to_string(),
                    context: "censoring survival at the evaluation time".to_string(),
                });
            }
            let mut total = Rat::zero();
            if x > t {
                total += Rat::one() / &censoring_at_t;
            }
            for (u, jump) in curves.censoring_hazard_modified().jumps() {
                if u > t {
                    break;
                }
                // δM_C(u) on this path: censoring indicator minus the
                // modified-at-risk share of the hazard jump.
                let at_risk_modified = u < x || (u == x && !failed);
                let mut delta = if at_risk_modified {
                    -jump.clone()
                } else {
                    Rat::zero()
                };
                if u == x && !failed {
                    delta += Rat::one();
                }
                if delta.is_zero() {
                    continue;
                }
                // G(u) >= G(t) > 0 because u <= t and G is nonincreasing.
                let censoring_at_u = curves.censoring_survival().value(u);
                total += ratio_from(u) * delta / censoring_at_u;
            }
            total -= curves.failure_survival().value(t);
            Ok(total)
        }
        InfluenceForm::Failure => {
            let mut total = Rat::zero();
            for (u, jump) in curves.failure_hazard().jumps() {
                if u > t {
                    break;
                }
                let at_risk = u <= x;
                let mut delta = if at_risk { -jump.clone() } else { Rat::zero() };
                if u == x && failed {
                    delta += Rat::one();
                }
                if delta.is_zero() {
                    continue;
                }
                let censoring_before = curves.censoring_survival().value_before(u);
                if censoring_before.is_zero() {
                    return Err(Error::ZeroSurvival {
                        at: u.to_string(),
                        context: "censoring survival just before a failure time".to_string(),
                    });
                }
                total -= ratio_from(u) * delta / censoring_before;
            }
            Ok(total)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixture_nsd, fixture_u2, fixtures, induce_observed};
    use crate::population::{population_of, Population};
    use crate::rational::{rat, rat_int};

    fn t(n: u64) -> Time {
        Time::from_int(n)
    }

    fn obs(time: u64, failed: bool) -> Observation {
        Observation::new(
            Time::from_int(time),
            if failed { Status::Failure } else { Status::Censored },
        )
    }

    /// A sample whose empirical law is exactly the U2 observed law.
    fn u2_sample() -> Sample {
        Sample::from_counts([
            (obs(1, true), 2),
            (obs(1, false), 1),
            (obs(2, true), 1),
        ])
        .unwrap()
    }

    #[test]
    fn single_failure_exhausts_survival() {
        let sample = Sample::from_observations([obs(1, true)]).unwrap();
        let fit = km_fit(&sample);
        assert_eq!(fit.survival(&t(1)), rat_int(0));
        assert_eq!(fit.censoring_survival(&t(1)), rat_int(1));
    }

    #[test]
    fn u2_proportioned_sample_matches_hand_counts() {
        let fit = km_fit(&u2_sample());
        // d_1 = 2 of r_1 = 4 at risk; the one censoring at 1 is measured
        // against the modified at-risk count m_1 = 4 - 2 = 2.
        assert_eq!(fit.survival(&t(1)), rat(1, 2));
        assert_eq!(fit.censoring_survival(&t(1)), rat(1, 2));
        assert_eq!(fit.survival(&t(2)), rat_int(0));
        assert_eq!(fit.horizon(), &t(2));
        assert_eq!(fit.n(), 4);
    }

    #[test]
    fn plugin_fit_equals_population_of_empirical_law() {
        // Dual route: km_fit counts the sample directly; the population
        // machinery computes expectations of the empirical law. The curve
        // sets must coincide exactly.
        for sample in [
            u2_sample(),
            Sample::from_counts([
                (obs(1, true), 2),
                (obs(2, false), 1),
                (obs(3, true), 1),
            ])
            .unwrap(),
            Sample::from_counts([
                (obs(1, false), 3),
                (obs(2, true), 2),
                (obs(5, false), 1),
                (obs(7, true), 4),
            ])
            .unwrap(),
        ] {
            let fit = km_fit(&sample);
            let population = Population::from_observed(&sample.empirical_law());
            assert_eq!(fit.curves(), population.curves());
        }
    }

    #[test]
    fn uncensored_fit_is_empirical_cdf_with_binomial_variance() {
        let sample = Sample::from_counts([
            (obs(1, true), 2),
            (obs(3, true), 5),
            (obs(4, true), 3),
        ])
        .unwrap();
        let fit = km_fit(&sample);
        assert_eq!(fit.censoring_survival(&t(4)), rat_int(1));
        assert_eq!(fit.survival(&t(1)), rat(8, 10));
        assert_eq!(fit.survival(&t(3)), rat(3, 10));
        // With no censoring the Greenwood sum telescopes to the binomial
        // variance F(t)(1 - F(t)).
        for time in [1u64, 2, 3, 4] {
            let f = fit.survival(&t(time));
            let sigma2 = fit.variance(&t(time));
            assert_eq!(*sigma2.expect_finite(), &f * (Rat::one() - &f), "t={time}");
        }
    }

    #[test]
    fn greenwood_variance_on_population_curves() {
        let (_, population) = population_of(&fixture_u2());
        let sigma2 = greenwood_variance(population.curves(), &t(1));
        assert_eq!(*sigma2.expect_finite(), rat(1, 4));
        // F(2) = 0: the prefactor convention pins the variance to zero.
        let sigma2 = greenwood_variance(population.curves(), &t(2));
        assert_eq!(*sigma2.expect_finite(), rat_int(0));

        let (_, population) = population_of(&fixture_nsd());
        let sigma2 = greenwood_variance(population.curves(), &t(1));
        assert_eq!(*sigma2.expect_finite(), rat(1, 4));
    }

    #[test]
    fn variance_is_zero_before_the_first_event() {
        let fit = km_fit(&u2_sample());
        let early = Time::new(rat(1, 2)).unwrap();
        assert_eq!(*fit.variance(&early).expect_finite(), rat_int(0));
    }

    #[test]
    fn covariance_matches_fixture_values() {
        let (_, population) = population_of(&fixture_nsd());
        let curves = population.curves();
        assert_eq!(
            *km_covariance(curves, &t(1), &t(2)).expect_finite(),
            rat(1, 4)
        );
        // F(3) = 0 kills the prefactor.
        assert_eq!(
            *km_covariance(curves, &t(1), &t(3)).expect_finite(),
            rat_int(0)
        );
        // Symmetry and the diagonal.
        assert_eq!(
            km_covariance(curves, &t(2), &t(1)),
            km_covariance(curves, &t(1), &t(2))
        );
        for time in [1u64, 2, 3] {
            assert_eq!(
                km_covariance(curves, &t(time), &t(time)),
                greenwood_variance(curves, &t(time))
            );
        }
    }

    #[test]
    fn influence_values_on_u2() {
        let (observed, population) = population_of(&fixture_u2());
        let curves = population.curves();
        let expected = [
            (obs(1, true), rat(-1, 2)),
            (obs(1, false), rat(1, 2)),
            (obs(2, true), rat(1, 2)),
        ];
        for (o, value) in &expected {
            for form in [InfluenceForm::Censoring, InfluenceForm::Failure] {
                assert_eq!(
                    influence(curves, o, &t(1), form).unwrap(),
                    *value,
                    "{o} {}",
                    form.label()
                );
            }
        }
        // Mean zero and second moment equal to the Greenwood variance,
        // exactly.
        let mut mean = Rat::zero();
        let mut second = Rat::zero();
        for (x, status, mass) in observed.atoms() {
            let o = Observation::new(x.clone(), status);
            let value = influence(curves, &o, &t(1), InfluenceForm::Failure).unwrap();
            mean += mass * &value;
            second += mass * &value * &value;
        }
        assert_eq!(mean, rat_int(0));
        assert_eq!(second, rat(1, 4));
    }

    #[test]
    fn influence_forms_agree_on_all_fixture_atoms() {
        for (name, law) in fixtures() {
            let (observed, population) = population_of(&law);
            let curves = population.curves();
            for time in observed.grid().iter() {
                if curves.censoring_survival().value(time).is_zero() {
                    continue;
                }
                let mut mean = Rat::zero();
                let mut second = Rat::zero();
                for (x, status, mass) in observed.atoms() {
                    let o = Observation::new(x.clone(), status);
                    let censor = influence(curves, &o, time, InfluenceForm::Censoring).unwrap();
                    let failure = influence(curves, &o, time, InfluenceForm::Failure).unwrap();
                    assert_eq!(censor, failure, "{name}: atom ({o}) at t={time}");
                    mean += mass * &censor;
                    second += mass * &censor * &censor;
                }
                assert_eq!(mean, rat_int(0), "{name}: t={time}");
                assert_eq!(
                    second,
                    *greenwood_variance(curves, time).expect_finite(),
                    "{name}: t={time}"
                );
            }
        }
    }

    #[test]
    fn confidence_interval_uses_the_normal_quantile() {
        let z = normal_quantile(0.95);
        assert!((z - 1.959964).abs() < 1e-6);
        let fit = km_fit(&u2_sample());
        let interval = fit.confidence_interval(&t(1), 0.95).unwrap();
        assert!((interval.estimate - 0.5).abs() < 1e-12);
        // sigma2(1) = 1/4 on the fitted curves as well, so the half-width is
        // z * sqrt(0.25 / 4) = z / 4.
        assert!((interval.upper - interval.lower - 2.0 * z / 4.0).abs() < 1e-12);
        assert!(!interval.degenerate && !interval.unbounded);
        assert!(interval.lower >= 0.0 && interval.upper <= 1.0);
    }

    #[test]
    fn confidence_interval_edge_cases() {
        let fit = km_fit(&u2_sample());
        // Before any event the variance is zero: a degenerate interval.
        let early = Time::new(rat(1, 2)).unwrap();
        let interval = fit.confidence_interval(&early, 0.95).unwrap();
        assert!(interval.degenerate);
        assert_eq!(interval.lower, interval.upper);
        // Bad levels are rejected.
        assert!(matches!(
            fit.confidence_interval(&t(1), 0.0),
            Err(Error::BadLevel(_))
        ));
        assert!(matches!(
            fit.confidence_interval(&t(1), 1.0),
            Err(Error::BadLevel(_))
        ));
    }

    #[test]
    fn csv_parses_times_in_all_forms() {
        let data = "time,status\n1,1\n0.5,0\n3/2,1\n1,1\n";
        let sample = Sample::from_csv(data.as_bytes()).unwrap();
        assert_eq!(sample.n(), 4);
        let half = Time::new(rat(1, 2)).unwrap();
        let three_halves = Time::new(rat(3, 2)).unwrap();
        let counts: Vec<(Observation, usize)> = sample
            .counted()
            .map(|(o, k)| (o.clone(), k))
            .collect();
        assert_eq!(
            counts,
            vec![
                (Observation::new(half, Status::Censored), 1),
                (obs(1, true), 2),
                (Observation::new(three_halves, Status::Failure), 1),
            ]
        );
    }

    #[test]
    fn csv_reports_every_bad_row_with_line_numbers() {
        let data = "time,status\n1,1\n-2,1\nabc,0\n2,7\n3,1\n";
        let err = Sample::from_csv(data.as_bytes()).unwrap_err();
        match err {
            Error::BadRows { detail } => {
                assert!(detail.contains("line 3"), "{detail}");
                assert!(detail.contains("line 4"), "{detail}");
                assert!(detail.contains("line 5"), "{detail}");
                assert!(!detail.contains("line 2"), "{detail}");
                assert!(!detail.contains("line 6"), "{detail}");
            }
            other => panic!("expected BadRows, got {other:?}"),
        }
    }

    #[test]
    fn csv_rejects_wrong_header_and_empty_body() {
        assert!(matches!(
            Sample::from_csv("t,s\n1,1\n".as_bytes()),
            Err(Error::BadRows { .. })
        ));
        assert!(matches!(
            Sample::from_csv("time,status\n".as_bytes()),
            Err(Error::EmptySample)
        ));
    }

    #[test]
    fn empirical_law_of_u2_sample_is_the_u2_observed_law() {
        let law = u2_sample().empirical_law();
        assert_eq!(law, induce_observed(&fixture_u2()));
    }
}
