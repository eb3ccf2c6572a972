//! Pathwise process evaluation for a single observation.
//!
//! Given an observation `(x, status)` and a curve set, this module evaluates
//! the counting processes, at-risk indicators, centering terms, and the three
//! martingales as exact step functions of time, along with martingale
//! transforms and covariation centering processes for bounded step-process
//! integrands. Every integral here is a finite Stieltjes sum over jump
//! points; there is no quadrature and no tolerance.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Observation, Time, TimeGrid};
use crate::population::{Curves, StepFunction};
use crate::rational::Rat;

/// How much information an integrand is allowed to use, ordered weakest to
/// strongest. `Predictable` means constant on every strict-past atom;
/// `HalfPredictable` additionally admits present failure (but not present
/// censoring) information; `AdaptedOnly` admits both; `NotAdapted` peeks at
/// the future.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurabilityClass {
    NotAdapted,
    AdaptedOnly,
    HalfPredictable,
    Predictable,
}

impl std::fmt::Display for MeasurabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeasurabilityClass::NotAdapted => "not-adapted",
            MeasurabilityClass::AdaptedOnly => "adapted-only",
            MeasurabilityClass::HalfPredictable => "half-predictable",
            MeasurabilityClass::Predictable => "F-predictable",
        })
    }
}

/// Which martingale a transform integrates against.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MartingaleKind {
    /// The failure martingale: counting failures minus its standard-at-risk
    /// centering.
    Failure,
    /// The censoring martingale with the standard-at-risk centering.
    CensoringStandard,
    /// The censoring martingale with the modified-at-risk centering.
    CensoringModified,
}

impl MartingaleKind {
    /// The weakest integrand class under which the transform is still a
    /// martingale. The modified censoring martingale tolerates
    /// half-predictable integrands; the other two need full predictability.
    pub fn required_class(self) -> MeasurabilityClass {
        match self {
            MartingaleKind::CensoringModified => MeasurabilityClass::HalfPredictable,
            MartingaleKind::Failure | MartingaleKind::CensoringStandard => {
                MeasurabilityClass::Predictable
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MartingaleKind::Failure => "failure_martingale",
            MartingaleKind::CensoringStandard => "censoring_martingale_standard",
            MartingaleKind::CensoringModified => "censoring_martingale_modified",
        }
    }
}

/// All processes of one observation, evaluated against one curve set.
#[derive(Clone, PartialEq, Debug)]
pub struct Path {
    observation: Observation,
    counting_failure: StepFunction,
    counting_censoring: StepFunction,
    centering_failure: StepFunction,
    centering_censoring_standard: StepFunction,
    centering_censoring_modified: StepFunction,
    failure_martingale: StepFunction,
    censoring_martingale_standard: StepFunction,
    censoring_martingale_modified: StepFunction,
}

impl Path {
    /// Evaluates every process for `observation` against `curves`.
    ///
    /// The observation time must not exceed the grid maximum: beyond the
    /// grid, hazards are frozen by convention and a path living out there
    /// cannot be represented. Times strictly inside the grid's range that
    /// fall between grid points are fine; all indicator logic is exact.
    pub fn evaluate(observation: &Observation, grid: &TimeGrid, curves: &Curves) -> Result<Path> {
        if observation.time > *grid.max() {
            return Err(Error::BeyondGrid {
                time: observation.time.to_string(),
                max: grid.max().to_string(),
            });
        }
        let x = &observation.time;
        let one_jump_at_x = |when: bool| {
            let mut f = StepFunction::zero();
            if when {
                f.set_jump(x.clone(), Rat::one());
            }
            f
        };
        let counting_failure = one_jump_at_x(observation.status.is_failure());
        let counting_censoring = one_jump_at_x(!observation.status.is_failure());
        // Each centering term accumulates the hazard jumps at times where the
        // relevant at-risk indicator is 1 on this path.
        let integrate = |hazard: &StepFunction, at_risk: &dyn Fn(&Time) -> bool| {
            let mut f = StepFunction::zero();
            for (u, jump) in hazard.jumps() {
                if at_risk(u) {
                    f.set_jump(u.clone(), jump.clone());
                }
            }
            f
        };
        let standard = |u: &Time| u <= x;
        let modified =
            |u: &Time| u < x || (u == x && !observation.status.is_failure());
        let centering_failure = integrate(curves.failure_hazard(), &standard);
        let centering_censoring_standard = integrate(curves.censoring_hazard_standard(), &standard);
        let centering_censoring_modified = integrate(curves.censoring_hazard_modified(), &modified);
        let minus_one = -Rat::one();
        let failure_martingale = counting_failure.plus(&centering_failure.scaled(&minus_one));
        let censoring_martingale_standard =
            counting_censoring.plus(&centering_censoring_standard.scaled(&minus_one));
        let censoring_martingale_modified =
            counting_censoring.plus(&centering_censoring_modified.scaled(&minus_one));
        Ok(Path {
            observation: observation.clone(),
            counting_failure,
            counting_censoring,
            centering_failure,
            centering_censoring_standard,
            centering_censoring_modified,
            failure_martingale,
            censoring_martingale_standard,
            censoring_martingale_modified,
        })
    }

    pub fn observation(&self) -> &Observation {
        &self.observation
    }

    /// `N_T(u)`: 1 once a failure has been observed at or before `u`.
    pub fn counting_failure(&self) -> &StepFunction {
        &self.counting_failure
    }

    /// `N_C(u)`: 1 once a censoring has been observed at or before `u`.
    pub fn counting_censoring(&self) -> &StepFunction {
        &self.counting_censoring
    }

    /// Standard at-risk indicator at `u` (observation still present at `u`).
    pub fn at_risk(&self, u: &Time) -> Rat {
        if *u <= self.observation.time {
            Rat::one()
        } else {
            Rat::zero()
        }
    }

    /// Modified at-risk indicator at `u`: excludes a failure happening
    /// exactly at `u` but keeps a censoring there.
    pub fn at_risk_modified(&self, u: &Time) -> Rat {
        let x = &self.observation.time;
        let held = u < x || (u == x && !self.observation.status.is_failure());
        if held {
            Rat::one()
        } else {
            Rat::zero()
        }
    }

    /// The centering (compensator) of the failure counting process.
    pub fn centering_failure(&self) -> &StepFunction {
        &self.centering_failure
    }

    /// The centering of the censoring counting process over the standard
    /// at-risk set.
    pub fn centering_censoring_standard(&self) -> &StepFunction {
        &self.centering_censoring_standard
    }

    /// The centering of the censoring counting process over the modified
    /// at-risk set. Nondecreasing and right-continuous, but not predictable:
    /// its jump at `u` depends on whether the path fails exactly at `u`.
    pub fn centering_censoring_modified(&self) -> &StepFunction {
        &self.centering_censoring_modified
    }

    pub fn failure_martingale(&self) -> &StepFunction {
        &self.failure_martingale
    }

    pub fn censoring_martingale_standard(&self) -> &StepFunction {
        &self.censoring_martingale_standard
    }

    pub fn censoring_martingale_modified(&self) -> &StepFunction {
        &self.censoring_martingale_modified
    }

    pub fn martingale(&self, kind: MartingaleKind) -> &StepFunction {
        match kind {
            MartingaleKind::Failure => &self.failure_martingale,
            MartingaleKind::CensoringStandard => &self.censoring_martingale_standard,
            MartingaleKind::CensoringModified => &self.censoring_martingale_modified,
        }
    }
}

/// The evaluation rule of an integrand process, as a closed set of variants
/// so integrands stay cloneable, comparable, and nameable.
#[derive(Clone, PartialEq, Debug)]
enum IntegrandRule {
    /// `H(u) = c`.
    Constant(Rat),
    /// `H(u) = f(u)` for a deterministic step function of time.
    DeterministicStep(StepFunction),
    /// `H(u) = table[u]` (0 off the table); deterministic point values.
    DeterministicAt(BTreeMap<Time, Rat>),
    /// `H(u) = 1` exactly when the path fails at `u`.
    FailureJump,
    /// `H(u) = 1` once the path has failed strictly before `u`.
    FailureCountBefore,
    /// `H(u) = 1` exactly when the path is censored at `u`.
    CensoringJump,
    /// `H(u) = 1` once the path has been censored strictly before `u`.
    CensoringCountBefore,
    /// `H(u)` is the modified at-risk indicator.
    ModifiedAtRisk,
    /// `H(u)` is the standard at-risk indicator.
    AtRisk,
    /// `H(u) = 1` when the path's eventual status is failure, at every `u`.
    EventualFailure,
}

/// A bounded integrand process `H(u)` with a declared measurability class.
///
/// The declaration is the class the rule guarantees on *every* law; the
/// verification engine measures the actual class on a concrete law (which can
/// be stronger on degenerate laws, never weaker) and refuses transforms whose
/// theorem needs more than what was measured.
#[derive(Clone, PartialEq, Debug)]
pub struct Integrand {
    name: String,
    declared: MeasurabilityClass,
    bound: Rat,
    rule: IntegrandRule,
}

impl Integrand {
    pub fn constant(c: Rat) -> Integrand {
        Integrand {
            name: format!("const({})", crate::rational::format_rat(&c)),
            declared: MeasurabilityClass::Predictable,
            bound: abs(&c),
            rule: IntegrandRule::Constant(c),
        }
    }

    /// The constant integrand 1; its transform reproduces the martingale.
    pub fn one() -> Integrand {
        let mut h = Integrand::constant(Rat::one());
        h.name = "one".to_string();
        h
    }

    /// A deterministic step function of time, evaluated by value.
    pub fn deterministic_step(f: StepFunction) -> Integrand {
        let mut bound = abs(f.initial());
        let mut running = f.initial().clone();
        for (_, jump) in f.jumps() {
            running += jump;
            bound = bound.max(abs(&running));
        }
        Integrand {
            name: "deterministic-step".to_string(),
            declared: MeasurabilityClass::Predictable,
            bound,
            rule: IntegrandRule::DeterministicStep(f),
        }
    }

    /// Deterministic point values: `H(u) = values[u]`, zero elsewhere.
    pub fn deterministic_at(values: BTreeMap<Time, Rat>) -> Integrand {
        let bound = values.values().map(abs).max().unwrap_or_else(Rat::zero);
        Integrand {
            name: "deterministic-pointwise".to_string(),
            declared: MeasurabilityClass::Predictable,
            bound,
            rule: IntegrandRule::DeterministicAt(values),
        }
    }

    /// Deterministic point values given by the jumps of a step function;
    /// `hazard_jumps(L)` turns `H(u) = dL(u)` into an integrand.
    pub fn hazard_jumps(f: &StepFunction) -> Integrand {
        let mut h = Integrand::deterministic_at(
            f.jumps().map(|(t, j)| (t.clone(), j.clone())).collect(),
        );
        h.name = "hazard-jumps".to_string();
        h
    }

    /// `H(u) = dN_T(u)`: knows about a failure the instant it happens, which
    /// is half-predictable information but not predictable.
    pub fn failure_jump() -> Integrand {
        Integrand {
            name: "deltaNT".to_string(),
            declared: MeasurabilityClass::HalfPredictable,
            bound: Rat::one(),
            rule: IntegrandRule::FailureJump,
        }
    }

    /// `H(u) = N_T(u-)`: failures strictly before `u`; predictable.
    pub fn failure_count_before() -> Integrand {
        Integrand {
            name: "NTminus".to_string(),
            declared: MeasurabilityClass::Predictable,
            bound: Rat::one(),
            rule: IntegrandRule::FailureCountBefore,
        }
    }

    /// `H(u) = dN_C(u)`: knows about a censoring the instant it happens,
    /// which is adapted but not even half-predictable.
    pub fn censoring_jump() -> Integrand {
        Integrand {
            name: "deltaNC".to_string(),
            declared: MeasurabilityClass::AdaptedOnly,
            bound: Rat::one(),
            rule: IntegrandRule::CensoringJump,
        }
    }

    /// `H(u) = N_C(u-)`: censorings strictly before `u`; predictable.
    pub fn censoring_count_before() -> Integrand {
        Integrand {
            name: "NCminus".to_string(),
            declared: MeasurabilityClass::Predictable,
            bound: Rat::one(),
            rule: IntegrandRule::CensoringCountBefore,
        }
    }

    /// The modified at-risk indicator as an integrand; half-predictable
    /// because it reacts to a failure at the present instant.
    pub fn modified_at_risk() -> Integrand {
        Integrand {
            name: "Ydagger".to_string(),
            declared: MeasurabilityClass::HalfPredictable,
            bound: Rat::one(),
            rule: IntegrandRule::ModifiedAtRisk,
        }
    }

    /// The standard at-risk indicator as an integrand; predictable since
    /// `X >= u` is determined strictly before `u`.
    pub fn at_risk() -> Integrand {
        Integrand {
            name: "Y".to_string(),
            declared: MeasurabilityClass::Predictable,
            bound: Rat::one(),
            rule: IntegrandRule::AtRisk,
        }
    }

    /// `H(u) = 1` iff the eventual status is failure: constant in time but a
    /// function of the future, hence not adapted.
    pub fn eventual_failure() -> Integrand {
        Integrand {
            name: "Delta".to_string(),
            declared: MeasurabilityClass::NotAdapted,
            bound: Rat::one(),
            rule: IntegrandRule::EventualFailure,
        }
    }

    /// Looks an integrand up by its CLI/report name.
    pub fn by_name(name: &str) -> Option<Integrand> {
        match name.to_ascii_lowercase().as_str() {
            "one" | "1" => Some(Integrand::one()),
            "deltant" => Some(Integrand::failure_jump()),
            "ntminus" => Some(Integrand::failure_count_before()),
            "deltanc" => Some(Integrand::censoring_jump()),
            "ncminus" => Some(Integrand::censoring_count_before()),
            "ydagger" | "ymod" => Some(Integrand::modified_at_risk()),
            "y" => Some(Integrand::at_risk()),
            "delta" => Some(Integrand::eventual_failure()),
            _ => None,
        }
    }

    /// The built-in path-functional integrands, one per measurability class
    /// at least.
    pub fn catalog() -> Vec<Integrand> {
        vec![
            Integrand::one(),
            Integrand::failure_jump(),
            Integrand::failure_count_before(),
            Integrand::censoring_jump(),
            Integrand::censoring_count_before(),
            Integrand::modified_at_risk(),
            Integrand::at_risk(),
            Integrand::eventual_failure(),
        ]
    }

    /// Overrides the declared class (for exercising misdeclarations).
    pub fn with_declared(mut self, declared: MeasurabilityClass) -> Integrand {
        self.declared = declared;
        self
    }

    /// Overrides the declared bound (for exercising bound enforcement).
    pub fn with_bound(mut self, bound: Rat) -> Integrand {
        self.bound = bound;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared(&self) -> MeasurabilityClass {
        self.declared
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    /// Evaluates `H(u)` on the path of `observation`.
    pub fn value(&self, u: &Time, observation: &Observation) -> Rat {
        let x = &observation.time;
        let failed = observation.status.is_failure();
        let indicator = |b: bool| if b { Rat::one() } else { Rat::zero() };
        match &self.rule {
            IntegrandRule::Constant(c) => c.clone(),
            IntegrandRule::DeterministicStep(f) => f.value(u),
            IntegrandRule::DeterministicAt(m) => m.get(u).cloned().unwrap_or_else(Rat::zero),
            IntegrandRule::FailureJump => indicator(x == u && failed),
            IntegrandRule::FailureCountBefore => indicator(x < u && failed),
            IntegrandRule::CensoringJump => indicator(x == u && !failed),
            IntegrandRule::CensoringCountBefore => indicator(x < u && !failed),
            IntegrandRule::ModifiedAtRisk => indicator(x > u || (x == u && !failed)),
            IntegrandRule::AtRisk => indicator(x >= u),
            IntegrandRule::EventualFailure => indicator(failed),
        }
    }

    /// Evaluates with the bound enforced.
    pub fn checked_value(&self, u: &Time, observation: &Observation) -> Result<Rat> {
        let v = self.value(u, observation);
        if abs(&v) > self.bound {
            return Err(Error::BoundExceeded {
                name: self.name.clone(),
                at: u.to_string(),
                value: v.to_string(),
                bound: self.bound.to_string(),
            });
        }
        Ok(v)
    }
}

fn abs(v: &Rat) -> Rat {
    if v < &Rat::zero() {
        -v.clone()
    } else {
        v.clone()
    }
}

/// The martingale transform `(H . M)(t) = sum_{u <= t} H(u) dM(u)` as a step
/// function, for one path. Bounds are enforced at every jump point of `M`;
/// measurability enforcement belongs to the verification engine, which is the
/// only place a machine-checked class exists.
pub fn transform_path(
    h: &Integrand,
    observation: &Observation,
    martingale: &StepFunction,
) -> Result<StepFunction> {
    let mut out = StepFunction::zero();
    for (u, jump) in martingale.jumps() {
        let weight = h.checked_value(u, observation)?;
        out.set_jump(u.clone(), weight * jump);
    }
    Ok(out)
}

/// The transform evaluated at a single time.
pub fn transform(
    h: &Integrand,
    observation: &Observation,
    martingale: &StepFunction,
    t: &Time,
) -> Result<Rat> {
    Ok(transform_path(h, observation, martingale)?.value(t))
}

/// The three centering constructions for the covariation of two transformed
/// censoring martingales.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenteringVariant {
    /// Centering for half-predictable integrands, driven by the modified
    /// at-risk indicator and the censoring survival ratio.
    HalfPredictable,
    /// Centering for predictable integrands, driven by the standard at-risk
    /// indicator and both survival ratios.
    PredictableFull,
    /// The half-predictable centering again, admitted under the stronger
    /// requirement that both integrands be fully predictable. The variant
    /// exists because its theorem has a different proof route (through the
    /// predictable-full centering plus an algebraic correction martingale),
    /// not because the centering process differs.
    PredictableMixed,
}

impl CenteringVariant {
    /// The weakest integrand class the variant's covariation theorem allows.
    pub fn required_class(self) -> MeasurabilityClass {
        match self {
            CenteringVariant::HalfPredictable => MeasurabilityClass::HalfPredictable,
            CenteringVariant::PredictableFull | CenteringVariant::PredictableMixed => {
                MeasurabilityClass::Predictable
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CenteringVariant::HalfPredictable => "half-predictable",
            CenteringVariant::PredictableFull => "predictable-full",
            CenteringVariant::PredictableMixed => "predictable-mixed",
        }
    }

    pub fn all() -> [CenteringVariant; 3] {
        [
            CenteringVariant::HalfPredictable,
            CenteringVariant::PredictableFull,
            CenteringVariant::PredictableMixed,
        ]
    }
}

/// The covariation centering process for `(H1 . M)(H2 . M)` with `M` the
/// modified censoring martingale, under the chosen variant, on one path.
///
/// All three variants integrate `H1(u) H2(u)` against the modified censoring
/// hazard with an at-risk indicator and a survival-ratio factor; the survival
/// ratios are written as one-minus-hazard-jump so no division (and no 0/0
/// case) ever arises:
///
/// * half-predictable: `(1 - dL_C(u)) * Ymod(u)`
/// * predictable-full: `(1 - dL_T(u)) (1 - dL_C(u)) * Y(u)`
/// * predictable-mixed: `(1 - dL_C(u)) * Ymod(u)` — the same process as the
///   half-predictable variant, reached under stronger integrand assumptions
///
/// where `dL_T` is the failure hazard jump and `dL_C` the modified censoring
/// hazard jump. A mixed factor `(1 - dL_T(u)) * Ymod(u)` would fail: its
/// conditional increment over the strict past is `(1 - dL_T)^2 dL_C`, not the
/// `(1 - dL_T)(1 - dL_C) dL_C` the product process actually accrues, so the
/// difference drifts whenever the two hazards jump unequally at a censoring
/// time. For the cross-covariation with the failure martingale the centering
/// is identically zero and no function is needed.
pub fn covariation_centering(
    h1: &Integrand,
    h2: &Integrand,
    variant: CenteringVariant,
    path: &Path,
    curves: &Curves,
) -> Result<StepFunction> {
    let mut out = StepFunction::zero();
    for (u, censoring_jump) in curves.censoring_hazard_modified().jumps() {
        let pair = h1.checked_value(u, path.observation())?
            * h2.checked_value(u, path.observation())?;
        let failure_ratio = Rat::one() - curves.failure_hazard().jump(u);
        let censoring_ratio = Rat::one() - censoring_jump;
        let factor = match variant {
            CenteringVariant::HalfPredictable | CenteringVariant::PredictableMixed => {
                censoring_ratio * path.at_risk_modified(u)
            }
            CenteringVariant::PredictableFull => {
                failure_ratio * censoring_ratio * path.at_risk(u)
            }
        };
        out.set_jump(u.clone(), pair * factor * censoring_jump);
    }
    Ok(out)
}

/// Pathwise gaps in the decomposition of the modified censoring martingale
/// into the standard one plus a hazard-jump transform of the failure
/// martingale. The returned list of `(t, gap)` pairs over `times` must be
/// empty; a nonzero gap is an arithmetic fault, not a model property.
pub fn check_martingale_decomposition(
    path: &Path,
    curves: &Curves,
    times: &[Time],
) -> Result<Vec<(Time, Rat)>> {
    let correction = transform_path(
        &Integrand::hazard_jumps(curves.censoring_hazard_modified()),
        path.observation(),
        path.failure_martingale(),
    )?;
    let mut gaps = Vec::new();
    for t in times {
        let gap = path.censoring_martingale_modified().value(t)
            - path.censoring_martingale_standard().value(t)
            - correction.value(t);
        if !gap.is_zero() {
            gaps.push((t.clone(), gap));
        }
    }
    Ok(gaps)
}
