//! Population-level functions of an observed law.
//!
//! Everything in this module is an exact finite computation over the grid of
//! an [`ObservedLaw`]: expected counting-process increments, at-risk
//! expectations, cumulative hazards (stored as jump maps wrapped in
//! [`StepFunction`]), product-limit survival functions, and the structural
//! identities connecting them. The zero-over-zero convention is explicit
//! throughout: a hazard increment whose at-risk expectation vanishes is zero.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{
    induce_observed, support_sets, LatentLaw, ObservedLaw, Status, SupportSets, Time, TimeGrid,
};
use crate::rational::{Rat, RatDisplay};
use serde::Serialize;

/// A right-continuous step function stored as its initial value plus a map of
/// jump increments.
///
/// `value(t)` is the initial value plus every jump at or before `t`, so
/// queries beyond the last jump return the final (frozen) value; `value(t)`
/// with `t` below the first jump returns the initial value. Jumps of size
/// zero are never stored.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct StepFunction {
    initial: Rat,
    jumps: BTreeMap<Time, Rat>,
}

impl StepFunction {
    /// The zero function.
    pub fn zero() -> Self {
        StepFunction::default()
    }

    /// A flat function equal to `initial` everywhere.
    pub fn constant(initial: Rat) -> Self {
        StepFunction {
            initial,
            jumps: BTreeMap::new(),
        }
    }

    /// Sets (or clears, when zero) the jump at `t`.
    pub fn set_jump(&mut self, t: Time, size: Rat) {
        if size.is_zero() {
            self.jumps.remove(&t);
        } else {
            self.jumps.insert(t, size);
        }
    }

    /// Builder-style [`StepFunction::set_jump`].
    pub fn with_jump(mut self, t: Time, size: Rat) -> Self {
        self.set_jump(t, size);
        self
    }

    /// Reconstructs a step function from its values at grid points.
    ///
    /// The `values` slice must be aligned with `grid.points()`; jump sizes
    /// are obtained by differencing consecutive values.
    pub fn from_grid_values(initial: Rat, grid: &TimeGrid, values: &[Rat]) -> Self {
        assert_eq!(grid.len(), values.len(), "one value per grid point");
        let mut f = StepFunction::constant(initial);
        let mut previous = f.initial.clone();
        for (t, v) in grid.iter().zip(values) {
            f.set_jump(t.clone(), v - &previous);
            previous = v.clone();
        }
        f
    }

    /// Value at time zero (equivalently, just before the first jump).
    pub fn initial(&self) -> &Rat {
        &self.initial
    }

    /// Right-continuous value at `t`.
    pub fn value(&self, t: &Time) -> Rat {
        let mut v = self.initial.clone();
        for (_, jump) in self.jumps.range(..=t.clone()) {
            v += jump;
        }
        v
    }

    /// Left limit at `t`: the value just before any jump at `t`.
    pub fn value_before(&self, t: &Time) -> Rat {
        let mut v = self.initial.clone();
        for (_, jump) in self.jumps.range(..t.clone()) {
            v += jump;
        }
        v
    }

    /// Jump size at `t` (zero when no jump is stored there).
    pub fn jump(&self, t: &Time) -> Rat {
        self.jumps.get(t).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterates stored jumps in time order.
    pub fn jumps(&self) -> impl Iterator<Item = (&Time, &Rat)> {
        self.jumps.iter()
    }

    /// Times carrying a nonzero jump, in order.
    pub fn jump_times(&self) -> impl Iterator<Item = &Time> {
        self.jumps.keys()
    }

    /// Value after the last jump.
    pub fn final_value(&self) -> Rat {
        self.initial.clone() + self.jumps.values().sum::<Rat>()
    }

    /// Pointwise sum of two step functions.
    pub fn plus(&self, other: &StepFunction) -> StepFunction {
        let mut out = self.clone();
        out.initial += &other.initial;
        for (t, jump) in &other.jumps {
            let merged = out.jump(t) + jump;
            out.set_jump(t.clone(), merged);
        }
        out
    }

    /// Pointwise scalar multiple.
    pub fn scaled(&self, factor: &Rat) -> StepFunction {
        if factor.is_zero() {
            return StepFunction::zero();
        }
        StepFunction {
            initial: &self.initial * factor,
            jumps: self
                .jumps
                .iter()
                .map(|(t, j)| (t.clone(), j * factor))
                .collect(),
        }
    }
}

/// Expected counting-process increments and at-risk expectations on the grid.
///
/// For each grid point `u`:
/// * `failure_mass[u]` is `P(X = u, failure)`, the expected increment of the
///   failure counting process;
/// * `censoring_mass[u]` is `P(X = u, censored)`;
/// * `at_risk[u]` is `E[Y(u)] = P(X >= u)` for the standard at-risk
///   indicator;
/// * `at_risk_modified[u]` is `E[Y~(u)] = P(X > u) + P(X = u, censored)` for
///   the modified at-risk indicator that excludes a failure occurring exactly
///   at `u` but keeps a censoring there.
///
/// Every grid point is present in all four tables, including zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Increments {
    pub failure_mass: BTreeMap<Time, Rat>,
    pub censoring_mass: BTreeMap<Time, Rat>,
    pub at_risk: BTreeMap<Time, Rat>,
    pub at_risk_modified: BTreeMap<Time, Rat>,
}

/// Computes the increment and at-risk tables of an observed law.
pub fn expected_increments(law: &ObservedLaw) -> Increments {
    let mut failure_mass = BTreeMap::new();
    let mut censoring_mass = BTreeMap::new();
    let mut at_risk = BTreeMap::new();
    let mut at_risk_modified = BTreeMap::new();
    let mut tail = Rat::zero(); // P(X > u), accumulated from the right
    for u in law.grid().points().iter().rev() {
        let censored = law.mass(u, Status::Censored);
        let failed = law.mass(u, Status::Failure);
        at_risk.insert(u.clone(), tail.clone() + &censored + &failed);
        at_risk_modified.insert(u.clone(), tail.clone() + &censored);
        failure_mass.insert(u.clone(), failed.clone());
        censoring_mass.insert(u.clone(), censored.clone());
        tail += censored + failed;
    }
    Increments {
        failure_mass,
        censoring_mass,
        at_risk,
        at_risk_modified,
    }
}

/// The five curves every downstream computation consumes: three cumulative
/// hazards and the two product-limit survival functions.
///
/// Both population functions (exact, from an observed law) and Kaplan–Meier
/// fits (counted from a sample) produce a `Curves`, so path evaluation,
/// variances, and influence functions are written once against this type.
#[derive(Clone, PartialEq, Debug)]
pub struct Curves {
    failure_hazard: StepFunction,
    censoring_hazard_standard: StepFunction,
    censoring_hazard_modified: StepFunction,
    failure_survival: StepFunction,
    censoring_survival: StepFunction,
}

impl Curves {
    /// Assembles a curve set, deriving the survival functions from the
    /// hazards by product limits.
    pub fn from_hazards(
        failure_hazard: StepFunction,
        censoring_hazard_standard: StepFunction,
        censoring_hazard_modified: StepFunction,
    ) -> Self {
        let failure_survival = product_limit(&failure_hazard);
        let censoring_survival = product_limit(&censoring_hazard_modified);
        Curves {
            failure_hazard,
            censoring_hazard_standard,
            censoring_hazard_modified,
            failure_survival,
            censoring_survival,
        }
    }

    /// Cumulative hazard of an observed failure (standard at-risk set).
    pub fn failure_hazard(&self) -> &StepFunction {
        &self.failure_hazard
    }

    /// Cumulative censoring hazard over the standard at-risk set. Its
    /// increments average over paths that fail exactly at `u`, which can
    /// never be censored at `u`; it is therefore *not* the marginal censoring
    /// hazard when failures and censorings share a discontinuity.
    pub fn censoring_hazard_standard(&self) -> &StepFunction {
        &self.censoring_hazard_standard
    }

    /// Cumulative censoring hazard over the modified at-risk set, which drops
    /// same-instant failures from the denominator. Under independence this is
    /// the marginal censoring hazard wherever the modified at-risk
    /// expectation is positive.
    pub fn censoring_hazard_modified(&self) -> &StepFunction {
        &self.censoring_hazard_modified
    }

    /// Product-limit survival function of the failure time.
    pub fn failure_survival(&self) -> &StepFunction {
        &self.failure_survival
    }

    /// Product-limit survival function of the censoring time, built from the
    /// modified-at-risk censoring hazard.
    pub fn censoring_survival(&self) -> &StepFunction {
        &self.censoring_survival
    }

    /// Grid points at which both the failure hazard and the modified
    /// censoring hazard jump. Empty exactly when the standard and modified
    /// censoring constructions agree.
    pub fn shared_discontinuities(&self) -> BTreeSet<Time> {
        self.failure_hazard
            .jump_times()
            .filter(|u| !self.censoring_hazard_modified.jump(u).is_zero())
            .cloned()
            .collect()
    }
}

/// All population-level functions of one observed law, computed eagerly.
#[derive(Clone, PartialEq, Debug)]
pub struct Population {
    grid: TimeGrid,
    increments: Increments,
    curves: Curves,
    support: SupportSets,
}

impl Population {
    /// Computes hazards, survival functions, and support sets from a law.
    pub fn from_observed(law: &ObservedLaw) -> Self {
        let grid = law.grid().clone();
        let increments = expected_increments(law);
        let hazard = |numerators: &BTreeMap<Time, Rat>, denominators: &BTreeMap<Time, Rat>| {
            let mut h = StepFunction::zero();
            for (u, numer) in numerators {
                let denom = &denominators[u];
                if denom.is_zero() {
                    // At-risk expectation zero forces the numerator to zero as
                    // well; the increment is zero by the 0/0 convention.
                    debug_assert!(numer.is_zero(), "counting mass without at-risk mass");
                    continue;
                }
                if !numer.is_zero() {
                    h.set_jump(u.clone(), numer / denom);
                }
            }
            h
        };
        let failure_hazard = hazard(&increments.failure_mass, &increments.at_risk);
        let censoring_hazard_standard = hazard(&increments.censoring_mass, &increments.at_risk);
        let censoring_hazard_modified =
            hazard(&increments.censoring_mass, &increments.at_risk_modified);
        let curves = Curves::from_hazards(
            failure_hazard,
            censoring_hazard_standard,
            censoring_hazard_modified,
        );
        let support = support_sets(law);
        Population {
            grid,
            increments,
            curves,
            support,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn increments(&self) -> &Increments {
        &self.increments
    }

    /// The hazard and survival curves of this population.
    pub fn curves(&self) -> &Curves {
        &self.curves
    }

    /// See [`Curves::failure_hazard`].
    pub fn failure_hazard(&self) -> &StepFunction {
        self.curves.failure_hazard()
    }

    /// See [`Curves::censoring_hazard_standard`].
    pub fn censoring_hazard_standard(&self) -> &StepFunction {
        self.curves.censoring_hazard_standard()
    }

    /// See [`Curves::censoring_hazard_modified`].
    pub fn censoring_hazard_modified(&self) -> &StepFunction {
        self.curves.censoring_hazard_modified()
    }

    /// See [`Curves::failure_survival`].
    pub fn failure_survival(&self) -> &StepFunction {
        self.curves.failure_survival()
    }

    /// See [`Curves::censoring_survival`].
    pub fn censoring_survival(&self) -> &StepFunction {
        self.curves.censoring_survival()
    }

    pub fn support(&self) -> &SupportSets {
        &self.support
    }

    /// Last grid point with positive at-risk mass; all curves freeze here.
    pub fn horizon(&self) -> &Time {
        &self.support.horizon
    }

    /// See [`Curves::shared_discontinuities`].
    pub fn shared_discontinuities(&self) -> BTreeSet<Time> {
        self.curves.shared_discontinuities()
    }
}

/// `prod_{u <= t} (1 - jump(u))` as a step function with value 1 at zero.
pub fn product_limit(hazard: &StepFunction) -> StepFunction {
    let mut survival = StepFunction::constant(Rat::one());
    let mut current = Rat::one();
    for (u, jump) in hazard.jumps() {
        let next = &current * (Rat::one() - jump);
        survival.set_jump(u.clone(), &next - &current);
        current = next;
    }
    survival
}

/// Marginal cumulative hazards of the latent failure and censoring times.
///
/// These are plain discrete hazards of the marginals: mass at `u` divided by
/// mass at or after `u`, with the 0/0 convention.
pub fn latent_hazards(law: &LatentLaw) -> (StepFunction, StepFunction) {
    (
        marginal_hazard(&law.marginal_t()),
        marginal_hazard(&law.marginal_c()),
    )
}

fn marginal_hazard(marginal: &BTreeMap<Time, Rat>) -> StepFunction {
    let mut hazard = StepFunction::zero();
    let mut tail = marginal.values().cloned().sum::<Rat>(); // P(V >= u) running
    for (u, mass) in marginal {
        if !tail.is_zero() && !mass.is_zero() {
            hazard.set_jump(u.clone(), mass / &tail);
        }
        tail -= mass;
    }
    hazard
}

/// One failed comparison between an observable and a latent hazard.
#[derive(Clone, Debug, Serialize)]
pub struct IdentificationViolation {
    pub which: String,
    pub at: String,
    pub observable: RatDisplay,
    pub latent: RatDisplay,
}

/// Outcome of [`check_identification`].
#[derive(Clone, Debug, Serialize, Default)]
pub struct IdentificationReport {
    pub violations: Vec<IdentificationViolation>,
}

impl IdentificationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies that the observable hazards recover the latent marginal hazards
/// under independence.
///
/// The failure comparison runs over grid points where the standard at-risk
/// expectation is positive; the censoring comparison over points where the
/// modified at-risk expectation is positive. Cumulative values are compared
/// exactly. Laws not declared independent are rejected, because the identity
/// has no reason to hold for them.
pub fn check_identification(law: &LatentLaw) -> Result<IdentificationReport> {
    if !law.is_independent() {
        return Err(Error::IndependenceRequired);
    }
    let observed = induce_observed(law);
    let population = Population::from_observed(&observed);
    let (latent_failure, latent_censoring) = latent_hazards(law);
    let mut report = IdentificationReport::default();
    let mut record = |which: &str, at: &Time, observable: Rat, latent: Rat| {
        if observable != latent {
            report.violations.push(IdentificationViolation {
                which: which.to_string(),
                at: at.to_string(),
                observable: RatDisplay::from(&observable),
                latent: RatDisplay::from(&latent),
            });
        }
    };
    for u in &population.support().at_risk {
        record(
            "failure",
            u,
            population.failure_hazard().value(u),
            latent_failure.value(u),
        );
    }
    for u in &population.support().at_risk_modified {
        record(
            "censoring",
            u,
            population.censoring_hazard_modified().value(u),
            latent_censoring.value(u),
        );
    }
    Ok(report)
}

/// One failed structural identity between population functions.
#[derive(Clone, Debug, Serialize)]
pub struct RelationViolation {
    pub identity: String,
    pub at: String,
    pub lhs: RatDisplay,
    pub rhs: RatDisplay,
}

/// Checks the pointwise identities tying the two censoring hazards together.
///
/// At every grid point `u`:
/// * `dL_C_standard(u) = (1 - dL_failure(u)) * dL_C_modified(u)`, and
/// * `E[Y~(u)] / E[Y(u)] - 1 = -dL_failure(u)` wherever `E[Y(u)] > 0`.
///
/// Both hold for every observed law, so a nonempty result indicates an
/// internal arithmetic fault; the checks exist to be run, not to pass
/// vacuously.
pub fn check_hazard_relation(population: &Population) -> Vec<RelationViolation> {
    let mut violations = Vec::new();
    for u in population.grid().iter() {
        let failure = population.failure_hazard().jump(u);
        let standard = population.censoring_hazard_standard().jump(u);
        let modified = population.censoring_hazard_modified().jump(u);
        let expected = (Rat::one() - &failure) * &modified;
        if standard != expected {
            violations.push(RelationViolation {
                identity: "censoring_hazard_standard = (1 - failure_jump) * censoring_hazard_modified".to_string(),
                at: u.to_string(),
                lhs: RatDisplay::from(&standard),
                rhs: RatDisplay::from(&expected),
            });
        }
        let at_risk = &population.increments().at_risk[u];
        if !at_risk.is_zero() {
            let ratio_minus_one = &population.increments().at_risk_modified[u] / at_risk - Rat::one();
            let negated_failure = -failure.clone();
            if ratio_minus_one != negated_failure {
                violations.push(RelationViolation {
                    identity: "at_risk_modified / at_risk - 1 = -failure_jump".to_string(),
                    at: u.to_string(),
                    lhs: RatDisplay::from(&ratio_minus_one),
                    rhs: RatDisplay::from(&negated_failure),
                });
            }
        }
    }
    violations
}

/// Checks the survival factorization `P(X > t) = F(t) * G~(t)` at every grid
/// point, where `F` is the failure survival and `G~` the censoring survival.
pub fn check_survival_factorization(
    law: &ObservedLaw,
    population: &Population,
) -> Vec<RelationViolation> {
    let mut violations = Vec::new();
    for t in population.grid().iter() {
        let lhs = law.survivor_mass(t);
        let rhs =
            population.failure_survival().value(t) * population.censoring_survival().value(t);
        if lhs != rhs {
            violations.push(RelationViolation {
                identity: "P(X > t) = failure_survival * censoring_survival".to_string(),
                at: t.to_string(),
                lhs: RatDisplay::from(&lhs),
                rhs: RatDisplay::from(&rhs),
            });
        }
    }
    violations
}

/// Checks the cumulative-difference formula
/// `L_C_modified(t) - L_C_standard(t) = sum_{u <= t} failure_jump(u) * modified_jump(u)`
/// at every grid point. The right-hand side accumulates exactly the shared
/// discontinuities, which is why the two cumulative hazards agree if and only
/// if no discontinuity is shared.
pub fn check_cumulative_difference(population: &Population) -> Vec<RelationViolation> {
    let mut violations = Vec::new();
    let mut accumulated = Rat::zero();
    for u in population.grid().iter() {
        accumulated += population.failure_hazard().jump(u)
            * population.censoring_hazard_modified().jump(u);
        let difference = population.censoring_hazard_modified().value(u)
            - population.censoring_hazard_standard().value(u);
        if difference != accumulated {
            violations.push(RelationViolation {
                identity: "censoring_hazard gap accumulates shared jump products".to_string(),
                at: u.to_string(),
                lhs: RatDisplay::from(&difference),
                rhs: RatDisplay::from(&accumulated),
            });
        }
    }
    violations
}

/// Convenience: population functions straight from a latent law.
pub fn population_of(law: &LatentLaw) -> (ObservedLaw, Population) {
    let observed = induce_observed(law);
    let population = Population::from_observed(&observed);
    (observed, population)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixture_nsd, fixture_u2, fixtures};
    use crate::rational::{rat, rat_int};

    fn t(n: u64) -> Time {
        Time::from_int(n)
    }

    #[test]
    fn step_function_queries() {
        let f = StepFunction::constant(rat_int(1))
            .with_jump(t(2), rat(-1, 2))
            .with_jump(t(4), rat(-1, 4));
        assert_eq!(f.value(&t(1)), rat_int(1));
        assert_eq!(f.value(&t(2)), rat(1, 2));
        assert_eq!(f.value_before(&t(2)), rat_int(1));
        assert_eq!(f.value(&t(3)), rat(1, 2));
        assert_eq!(f.value(&t(4)), rat(1, 4));
        // Queries beyond the last jump return the frozen final value.
        assert_eq!(f.value(&t(100)), rat(1, 4));
        assert_eq!(f.final_value(), rat(1, 4));
        assert_eq!(f.jump(&t(2)), rat(-1, 2));
        assert_eq!(f.jump(&t(3)), rat_int(0));
    }

    #[test]
    fn step_function_zero_jumps_are_not_stored() {
        let f = StepFunction::zero().with_jump(t(1), rat_int(0));
        assert_eq!(f.jump_times().count(), 0);
    }

    #[test]
    fn step_function_algebra() {
        let f = StepFunction::zero().with_jump(t(1), rat(1, 2));
        let g = StepFunction::constant(rat_int(2)).with_jump(t(1), rat(-1, 2)).with_jump(t(3), rat_int(1));
        let sum = f.plus(&g);
        assert_eq!(sum.value(&t(1)), rat_int(2));
        assert_eq!(sum.jump(&t(1)), rat_int(0));
        assert_eq!(sum.value(&t(3)), rat_int(3));
        let scaled = g.scaled(&rat(1, 2));
        assert_eq!(scaled.value(&t(1)), rat(3, 4));
    }

    #[test]
    fn from_grid_values_reconstructs_steps() {
        let grid = TimeGrid::new(vec![t(1), t(2), t(3)]).unwrap();
        let f = StepFunction::from_grid_values(
            rat_int(0),
            &grid,
            &[rat(1, 2), rat(1, 2), rat(-1, 4)],
        );
        assert_eq!(f.value(&t(1)), rat(1, 2));
        assert_eq!(f.jump(&t(2)), rat_int(0));
        assert_eq!(f.value(&t(3)), rat(-1, 4));
    }

    /// Brute-force oracle for the increment tables: sums indicator values
    /// over every atom of the observed law.
    fn enumerated_increments(law: &ObservedLaw) -> Increments {
        let mut failure_mass = BTreeMap::new();
        let mut censoring_mass = BTreeMap::new();
        let mut at_risk = BTreeMap::new();
        let mut at_risk_modified = BTreeMap::new();
        for u in law.grid().iter() {
            let mut sums = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
            for (x, status, mass) in law.atoms() {
                if x == u && status.is_failure() {
                    sums[0] += mass;
                }
                if x == u && !status.is_failure() {
                    sums[1] += mass;
                }
                if x >= u {
                    sums[2] += mass;
                }
                if x > u || (x == u && !status.is_failure()) {
                    sums[3] += mass;
                }
            }
            let [f, c, y, ym] = sums;
            failure_mass.insert(u.clone(), f);
            censoring_mass.insert(u.clone(), c);
            at_risk.insert(u.clone(), y);
            at_risk_modified.insert(u.clone(), ym);
        }
        Increments {
            failure_mass,
            censoring_mass,
            at_risk,
            at_risk_modified,
        }
    }

    #[test]
    fn u2_increment_tables() {
        let (observed, population) = population_of(&fixture_u2());
        let inc = population.increments();
        // Frozen from the enumeration oracle.
        assert_eq!(inc.failure_mass[&t(1)], rat(1, 2));
        assert_eq!(inc.censoring_mass[&t(1)], rat(1, 4));
        assert_eq!(inc.at_risk[&t(1)], rat_int(1));
        assert_eq!(inc.at_risk_modified[&t(1)], rat(1, 2));
        assert_eq!(inc.failure_mass[&t(2)], rat(1, 4));
        assert_eq!(inc.censoring_mass[&t(2)], rat_int(0));
        assert_eq!(inc.at_risk[&t(2)], rat(1, 4));
        assert_eq!(inc.at_risk_modified[&t(2)], rat_int(0));
        assert_eq!(inc, &enumerated_increments(&observed));
    }

    #[test]
    fn u2_hazards() {
        let (_, population) = population_of(&fixture_u2());
        assert_eq!(population.failure_hazard().jump(&t(1)), rat(1, 2));
        assert_eq!(population.failure_hazard().jump(&t(2)), rat_int(1));
        assert_eq!(population.censoring_hazard_standard().jump(&t(1)), rat(1, 4));
        assert_eq!(population.censoring_hazard_standard().jump(&t(2)), rat_int(0));
        assert_eq!(population.censoring_hazard_modified().jump(&t(1)), rat(1, 2));
        // 0/0 at u=2: both the censoring mass and the modified at-risk
        // expectation vanish, so the increment is zero by convention.
        assert_eq!(population.censoring_hazard_modified().jump(&t(2)), rat_int(0));
    }

    #[test]
    fn nsd_hazards() {
        let (_, population) = population_of(&fixture_nsd());
        assert_eq!(population.failure_hazard().jump(&t(1)), rat(1, 2));
        assert_eq!(population.failure_hazard().jump(&t(2)), rat_int(0));
        assert_eq!(population.failure_hazard().jump(&t(3)), rat_int(1));
        assert_eq!(population.censoring_hazard_modified().jump(&t(1)), rat_int(0));
        assert_eq!(population.censoring_hazard_modified().jump(&t(2)), rat(1, 2));
        assert_eq!(population.censoring_hazard_modified().jump(&t(3)), rat_int(0));
    }

    #[test]
    fn u2_latent_hazards_are_uniform_discrete() {
        let (failure, censoring) = latent_hazards(&fixture_u2());
        for hazard in [&failure, &censoring] {
            assert_eq!(hazard.jump(&t(1)), rat(1, 2));
            assert_eq!(hazard.jump(&t(2)), rat_int(1));
        }
    }

    #[test]
    fn identification_holds_on_independent_fixtures() {
        for (name, law) in fixtures() {
            let report = check_identification(&law).unwrap();
            assert!(report.is_clean(), "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn identification_requires_the_independence_flag() {
        let grid = TimeGrid::new(vec![t(1), t(2)]).unwrap();
        let dependent = LatentLaw::new(
            grid.clone(),
            grid,
            vec![((t(1), t(1)), rat(1, 2)), ((t(2), t(2)), rat(1, 2))],
            false,
        )
        .unwrap();
        assert!(matches!(
            check_identification(&dependent),
            Err(Error::IndependenceRequired)
        ));
    }

    #[test]
    fn shared_discontinuities_fixtures() {
        let (_, u2) = population_of(&fixture_u2());
        assert_eq!(u2.shared_discontinuities(), BTreeSet::from([t(1)]));
        let (_, nsd) = population_of(&fixture_nsd());
        assert!(nsd.shared_discontinuities().is_empty());
    }

    #[test]
    fn hazard_relation_fixtures() {
        for (name, law) in fixtures() {
            let (_, population) = population_of(&law);
            let violations = check_hazard_relation(&population);
            assert!(violations.is_empty(), "{name}: {violations:?}");
        }
        // Spot value: at u=1 on U2 the standard censoring increment is the
        // modified one thinned by surviving the failure jump.
        let (_, population) = population_of(&fixture_u2());
        assert_eq!(
            population.censoring_hazard_standard().jump(&t(1)),
            (rat_int(1) - rat(1, 2)) * rat(1, 2)
        );
    }

    #[test]
    fn u2_survival_functions() {
        let (observed, population) = population_of(&fixture_u2());
        assert_eq!(population.failure_survival().value(&t(1)), rat(1, 2));
        assert_eq!(population.failure_survival().value(&t(2)), rat_int(0));
        assert_eq!(population.censoring_survival().value(&t(1)), rat(1, 2));
        assert_eq!(population.censoring_survival().value(&t(2)), rat(1, 2));
        assert!(check_survival_factorization(&observed, &population).is_empty());
    }

    #[test]
    fn nsd_survival_functions() {
        let (observed, population) = population_of(&fixture_nsd());
        assert_eq!(population.failure_survival().value(&t(1)), rat(1, 2));
        assert_eq!(population.failure_survival().value(&t(2)), rat(1, 2));
        assert_eq!(population.failure_survival().value(&t(3)), rat_int(0));
        assert_eq!(population.censoring_survival().value(&t(1)), rat_int(1));
        assert_eq!(population.censoring_survival().value(&t(2)), rat(1, 2));
        assert_eq!(observed.survivor_mass(&t(2)), rat(1, 4));
        assert!(check_survival_factorization(&observed, &population).is_empty());
    }

    #[test]
    fn cumulative_difference_fixtures() {
        for (name, law) in fixtures() {
            let (_, population) = population_of(&law);
            let violations = check_cumulative_difference(&population);
            assert!(violations.is_empty(), "{name}: {violations:?}");
        }
        // On U2 the gap at t in {1, 2} is 1/2 * 1/2 = 1/4.
        let (_, population) = population_of(&fixture_u2());
        let gap = population.censoring_hazard_modified().value(&t(2))
            - population.censoring_hazard_standard().value(&t(2));
        assert_eq!(gap, rat(1, 4));
    }

    #[test]
    fn laws_without_censoring_have_zero_censoring_hazards() {
        let grid = TimeGrid::new(vec![t(1), t(2)]).unwrap();
        let all_failures = ObservedLaw::new(
            grid,
            vec![
                ((t(1), Status::Failure), rat(1, 2)),
                ((t(2), Status::Failure), rat(1, 2)),
            ],
        )
        .unwrap();
        let population = Population::from_observed(&all_failures);
        assert_eq!(population.censoring_hazard_standard(), &StepFunction::zero());
        assert_eq!(population.censoring_hazard_modified(), &StepFunction::zero());
        assert_eq!(population.censoring_survival().final_value(), rat_int(1));
    }

    #[test]
    fn laws_without_failures_have_flat_failure_survival() {
        let grid = TimeGrid::new(vec![t(1)]).unwrap();
        let all_censored = ObservedLaw::new(
            grid,
            vec![((t(1), Status::Censored), rat_int(1))],
        )
        .unwrap();
        let population = Population::from_observed(&all_censored);
        assert_eq!(population.failure_survival().final_value(), rat_int(1));
        // Everyone is censored at 1, so the censoring survival drops to zero.
        assert_eq!(population.censoring_survival().value(&t(1)), rat_int(0));
    }

    #[test]
    fn survival_values_stay_in_the_unit_interval() {
        for (_, law) in fixtures() {
            let (_, population) = population_of(&law);
            for u in population.grid().iter() {
                for f in [population.failure_survival(), population.censoring_survival()] {
                    let v = f.value(u);
                    assert!(v >= rat_int(0) && v <= rat_int(1));
                }
                for h in [
                    population.failure_hazard(),
                    population.censoring_hazard_standard(),
                    population.censoring_hazard_modified(),
                ] {
                    let j = h.jump(u);
                    assert!(j >= rat_int(0) && j <= rat_int(1));
                }
            }
        }
    }
}
