//! Discrete data model: event times, latent and observed laws.
//!
//! The latent object is a pair `(T, C)` of a failure time and a censoring
//! time carried by a joint probability mass function on a finite grid of
//! strictly positive rational times. What is observed is `X = min(T, C)`
//! together with the status indicator that marks whether the failure or the
//! censoring happened first; ties are recorded as failures. Both laws store
//! exact rational masses and validate that the total mass is exactly one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat, rat, Rat};

/// A strictly positive rational event time.
///
/// `Time` is ordered and usable as a map key, so jump maps and grids are kept
/// in `BTreeMap`/`BTreeSet` collections sorted by time.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Time(Rat);

impl Time {
    /// Wraps a rational, rejecting zero and negative values.
    pub fn new(value: Rat) -> Result<Self> {
        if value.is_positive() {
            Ok(Time(value))
        } else {
            Err(Error::NonpositiveTime {
                value: format_rat(&value),
            })
        }
    }

    /// Convenience constructor for integer times.
    ///
    /// # Panics
    /// Panics when `n == 0`; intended for literals in code and tests.
    pub fn from_int(n: u64) -> Self {
        Time::new(Rat::from_integer(n.into())).expect("positive integer time")
    }

    /// Parses `"a/b"`, integer, or decimal text into a time.
    pub fn parse(text: &str) -> Result<Self> {
        Time::new(parse_rat(text)?)
    }

    /// The underlying rational value.
    pub fn as_rat(&self) -> &Rat {
        &self.0
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(&self.0))
    }
}

impl fmt::Debug for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Time({})", self)
    }
}

/// Observed event type: did the failure or the censoring come first?
///
/// A tie `T = C` is recorded as [`Status::Failure`], matching the indicator
/// `I(T <= C)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Status {
    Censored,
    Failure,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Failure)
    }

    /// Numeric code used in data files: censored rows carry 0, failures 1.
    pub fn code(self) -> u8 {
        match self {
            Status::Censored => 0,
            Status::Failure => 1,
        }
    }

    /// Parses the numeric code, rejecting anything but 0 and 1.
    pub fn from_code(code: &str) -> Result<Self> {
        match code.trim() {
            "0" => Ok(Status::Censored),
            "1" => Ok(Status::Failure),
            other => Err(Error::ParseNumber {
                input: other.to_string(),
                reason: "status must be 0 (censored) or 1 (failure)".to_string(),
            }),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// One observed data point: the earlier of the two latent times plus the
/// status flag saying which one it was.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Observation {
    pub time: Time,
    pub status: Status,
}

impl Observation {
    pub fn new(time: Time, status: Status) -> Self {
        Observation { time, status }
    }

    pub fn is_failure(&self) -> bool {
        self.status.is_failure()
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.time, self.status)
    }
}

/// A finite, strictly increasing grid of positive times.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TimeGrid {
    points: Vec<Time>,
}

impl TimeGrid {
    /// Validates that `points` is strictly increasing (hence duplicate-free).
    pub fn new(points: Vec<Time>) -> Result<Self> {
        for pair in points.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::InvalidGrid {
                    detail: format!(
                        "points must be strictly increasing, found {} before {}",
                        pair[0], pair[1]
                    ),
                });
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidGrid {
                detail: "grid must contain at least one point".to_string(),
            });
        }
        Ok(TimeGrid { points })
    }

    /// Builds a grid from any collection of times, discarding duplicates.
    pub fn from_set(points: BTreeSet<Time>) -> Result<Self> {
        TimeGrid::new(points.into_iter().collect())
    }

    /// Merges two grids into their sorted union.
    pub fn union(&self, other: &TimeGrid) -> TimeGrid {
        let set: BTreeSet<Time> = self
            .points
            .iter()
            .chain(other.points.iter())
            .cloned()
            .collect();
        TimeGrid {
            points: set.into_iter().collect(),
        }
    }

    pub fn points(&self) -> &[Time] {
        &self.points
    }

    pub fn contains(&self, t: &Time) -> bool {
        self.points.binary_search(t).is_ok()
    }

    pub fn min(&self) -> &Time {
        self.points.first().expect("grids are nonempty")
    }

    pub fn max(&self) -> &Time {
        self.points.last().expect("grids are nonempty")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Time> {
        self.points.iter()
    }
}

/// Joint law of the latent pair `(T, C)` on `grid_t x grid_c`.
///
/// Only strictly positive masses are stored. When `independent` is set the
/// constructor verifies that the joint mass factorizes into the product of
/// its marginals exactly; the flag is never taken on trust.
#[derive(Clone, PartialEq, Debug)]
pub struct LatentLaw {
    grid_t: TimeGrid,
    grid_c: TimeGrid,
    pmf: BTreeMap<(Time, Time), Rat>,
    independent: bool,
}

impl LatentLaw {
    /// Validates grids, masses, total mass, and (when declared) independence.
    pub fn new(
        grid_t: TimeGrid,
        grid_c: TimeGrid,
        entries: Vec<((Time, Time), Rat)>,
        independent: bool,
    ) -> Result<Self> {
        let mut pmf = BTreeMap::new();
        let mut total = Rat::zero();
        for ((t, c), mass) in entries {
            if !grid_t.contains(&t) || !grid_c.contains(&c) {
                return Err(Error::AtomOffGrid {
                    atom: format!("(t={t}, c={c})"),
                });
            }
            if mass.is_negative() {
                return Err(Error::NegativeMass {
                    atom: format!("(t={t}, c={c})"),
                    mass: format_rat(&mass),
                });
            }
            total += &mass;
            if mass.is_zero() {
                continue;
            }
            if pmf.insert((t.clone(), c.clone()), mass).is_some() {
                return Err(Error::DuplicateAtom {
                    atom: format!("(t={t}, c={c})"),
                });
            }
        }
        if !total.is_one() {
            return Err(Error::MassNotOne {
                total: format_rat(&total),
            });
        }
        let law = LatentLaw {
            grid_t,
            grid_c,
            pmf,
            independent,
        };
        if independent {
            law.verify_factorization()?;
        }
        Ok(law)
    }

    /// Builds the product law of two marginal mass functions.
    pub fn independent_product(
        marginal_t: Vec<(Time, Rat)>,
        marginal_c: Vec<(Time, Rat)>,
    ) -> Result<Self> {
        let check_marginal = |entries: &[(Time, Rat)], label: &str| -> Result<BTreeSet<Time>> {
            let mut seen = BTreeSet::new();
            let mut total = Rat::zero();
            for (t, mass) in entries {
                if mass.is_negative() {
                    return Err(Error::NegativeMass {
                        atom: format!("{label}={t}"),
                        mass: format_rat(mass),
                    });
                }
                total += mass;
                if !seen.insert(t.clone()) {
                    return Err(Error::DuplicateAtom {
                        atom: format!("{label}={t}"),
                    });
                }
            }
            if !total.is_one() {
                return Err(Error::MassNotOne {
                    total: format_rat(&total),
                });
            }
            Ok(seen)
        };
        let grid_t = TimeGrid::from_set(check_marginal(&marginal_t, "t")?)?;
        let grid_c = TimeGrid::from_set(check_marginal(&marginal_c, "c")?)?;
        let mut entries = Vec::new();
        for (t, pt) in &marginal_t {
            for (c, pc) in &marginal_c {
                let mass = pt * pc;
                if !mass.is_zero() {
                    entries.push(((t.clone(), c.clone()), mass));
                }
            }
        }
        LatentLaw::new(grid_t, grid_c, entries, true)
    }

    fn verify_factorization(&self) -> Result<()> {
        let marg_t = self.marginal_t();
        let marg_c = self.marginal_c();
        for t in self.grid_t.iter() {
            for c in self.grid_c.iter() {
                let joint = self.mass(t, c);
                let product = marg_t.get(t).cloned().unwrap_or_else(Rat::zero)
                    * marg_c.get(c).cloned().unwrap_or_else(Rat::zero);
                if joint != product {
                    return Err(Error::NotIndependent {
                        t: t.to_string(),
                        c: c.to_string(),
                        joint: format_rat(&joint),
                        product: format_rat(&product),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn grid_t(&self) -> &TimeGrid {
        &self.grid_t
    }

    pub fn grid_c(&self) -> &TimeGrid {
        &self.grid_c
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// Joint mass at `(t, c)`, zero when the atom is absent.
    pub fn mass(&self, t: &Time, c: &Time) -> Rat {
        self.pmf
            .get(&(t.clone(), c.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Iterates positive-mass atoms in `(t, c)` order.
    pub fn atoms(&self) -> impl Iterator<Item = (&Time, &Time, &Rat)> {
        self.pmf.iter().map(|((t, c), p)| (t, c, p))
    }

    /// Marginal law of the failure time.
    pub fn marginal_t(&self) -> BTreeMap<Time, Rat> {
        let mut out: BTreeMap<Time, Rat> = BTreeMap::new();
        for ((t, _), p) in &self.pmf {
            *out.entry(t.clone()).or_insert_with(Rat::zero) += p;
        }
        out
    }

    /// Marginal law of the censoring time.
    pub fn marginal_c(&self) -> BTreeMap<Time, Rat> {
        let mut out: BTreeMap<Time, Rat> = BTreeMap::new();
        for ((_, c), p) in &self.pmf {
            *out.entry(c.clone()).or_insert_with(Rat::zero) += p;
        }
        out
    }

    /// One-line description used in reports.
    pub fn summary(&self) -> String {
        format!(
            "latent law: {} atoms on {}x{} grid points, independent={}",
            self.pmf.len(),
            self.grid_t.len(),
            self.grid_c.len(),
            self.independent
        )
    }
}

/// Law of the observed pair `(X, status)` on a single grid.
#[derive(Clone, PartialEq, Debug)]
pub struct ObservedLaw {
    grid: TimeGrid,
    pmf: BTreeMap<(Time, Status), Rat>,
}

impl ObservedLaw {
    /// Validates atoms against the grid and checks the total mass.
    pub fn new(grid: TimeGrid, entries: Vec<((Time, Status), Rat)>) -> Result<Self> {
        let mut pmf = BTreeMap::new();
        let mut total = Rat::zero();
        for ((x, status), mass) in entries {
            if !grid.contains(&x) {
                return Err(Error::AtomOffGrid {
                    atom: format!("(x={x}, status={status})"),
                });
            }
            if mass.is_negative() {
                return Err(Error::NegativeMass {
                    atom: format!("(x={x}, status={status})"),
                    mass: format_rat(&mass),
                });
            }
            total += &mass;
            if mass.is_zero() {
                continue;
            }
            if pmf.insert((x.clone(), status), mass).is_some() {
                return Err(Error::DuplicateAtom {
                    atom: format!("(x={x}, status={status})"),
                });
            }
        }
        if !total.is_one() {
            return Err(Error::MassNotOne {
                total: format_rat(&total),
            });
        }
        Ok(ObservedLaw { grid, pmf })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Mass at the atom `(x, status)`, zero when absent.
    pub fn mass(&self, x: &Time, status: Status) -> Rat {
        self.pmf
            .get(&(x.clone(), status))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Iterates positive-mass atoms in `(x, status)` order.
    pub fn atoms(&self) -> impl Iterator<Item = (&Time, Status, &Rat)> {
        self.pmf.iter().map(|((x, s), p)| (x, *s, p))
    }

    /// Number of positive-mass atoms.
    pub fn atom_count(&self) -> usize {
        self.pmf.len()
    }

    /// `P(X > t)` evaluated exactly.
    pub fn survivor_mass(&self, t: &Time) -> Rat {
        self.pmf
            .iter()
            .filter(|((x, _), _)| x > t)
            .map(|(_, p)| p.clone())
            .sum()
    }
}

/// Projects a latent law to the observed law of `(min(T, C), status)`.
///
/// Ties are failures: the status indicator is `I(T <= C)`. The observed grid
/// is the union of the two latent grids, so later population computations can
/// refer to any latent time point.
pub fn induce_observed(law: &LatentLaw) -> ObservedLaw {
    let grid = law.grid_t().union(law.grid_c());
    let mut pmf: BTreeMap<(Time, Status), Rat> = BTreeMap::new();
    for (t, c, p) in law.atoms() {
        let (x, status) = if t <= c {
            (t.clone(), Status::Failure)
        } else {
            (c.clone(), Status::Censored)
        };
        *pmf.entry((x, status)).or_insert_with(Rat::zero) += p;
    }
    let entries = pmf.into_iter().collect();
    ObservedLaw::new(grid, entries).expect("induced observed law preserves total mass")
}

/// Grid-point support sets of the at-risk expectations, plus the horizon.
///
/// With `Y` the standard at-risk indicator `I(X >= u)` and `Y~` the modified
/// one `I(X > u) + I(X = u, censored)`:
/// * `at_risk`: grid points with `E[Y(s)] > 0`,
/// * `at_risk_modified`: grid points with `E[Y~(s)] > 0`,
/// * `at_risk_beyond`: grid points with `P(X > s) > 0`,
/// * `horizon`: the largest grid point in `at_risk` (the last time any mass
///   is still at risk; all population functions are frozen beyond it).
///
/// The nesting `at_risk_beyond <= at_risk_modified <= at_risk` always holds.
#[derive(Clone, PartialEq, Debug)]
pub struct SupportSets {
    pub at_risk: BTreeSet<Time>,
    pub at_risk_modified: BTreeSet<Time>,
    pub at_risk_beyond: BTreeSet<Time>,
    pub horizon: Time,
}

/// Computes the support sets of an observed law over its grid.
pub fn support_sets(law: &ObservedLaw) -> SupportSets {
    let mut at_risk = BTreeSet::new();
    let mut at_risk_modified = BTreeSet::new();
    let mut at_risk_beyond = BTreeSet::new();
    let mut tail = Rat::zero(); // P(X > s), built from the right
    for s in law.grid().points().iter().rev() {
        let censored_here = law.mass(s, Status::Censored);
        let failed_here = law.mass(s, Status::Failure);
        if tail.is_positive() {
            at_risk_beyond.insert(s.clone());
        }
        if (tail.clone() + &censored_here).is_positive() {
            at_risk_modified.insert(s.clone());
        }
        if (tail.clone() + &censored_here + &failed_here).is_positive() {
            at_risk.insert(s.clone());
        }
        tail += censored_here + failed_here;
    }
    let horizon = at_risk
        .iter()
        .next_back()
        .cloned()
        .expect("laws carry unit mass, so some grid point is at risk");
    SupportSets {
        at_risk,
        at_risk_modified,
        at_risk_beyond,
        horizon,
    }
}

/// Fixture `U2`: failure and censoring times independent and uniform on
/// `{1, 2}`.
///
/// Both laws put mass on the point 1, so the failure and censoring hazards
/// share a discontinuity there; this is the canonical example in which the
/// standard and modified censoring martingales differ.
pub fn fixture_u2() -> LatentLaw {
    let marg = vec![
        (Time::from_int(1), rat(1, 2)),
        (Time::from_int(2), rat(1, 2)),
    ];
    LatentLaw::independent_product(marg.clone(), marg).expect("U2 fixture is a valid law")
}

/// Fixture `NSD`: failure times uniform on `{1, 3}`, censoring times uniform
/// on `{2, 4}`, independent.
///
/// The two supports are disjoint, so no discontinuity is shared and the
/// standard and modified constructions coincide everywhere.
pub fn fixture_nsd() -> LatentLaw {
    let marg_t = vec![
        (Time::from_int(1), rat(1, 2)),
        (Time::from_int(3), rat(1, 2)),
    ];
    let marg_c = vec![
        (Time::from_int(2), rat(1, 2)),
        (Time::from_int(4), rat(1, 2)),
    ];
    LatentLaw::independent_product(marg_t, marg_c).expect("NSD fixture is a valid law")
}

/// Named fixtures in a stable order, for suites that sweep both.
pub fn fixtures() -> Vec<(&'static str, LatentLaw)> {
    vec![("U2", fixture_u2()), ("NSD", fixture_nsd())]
}

// ---------------------------------------------------------------------------
// Distribution-spec documents
// ---------------------------------------------------------------------------

/// Parses a distribution-spec JSON document into a latent law.
///
/// Two layouts are accepted:
///
/// ```json
/// {"grid_T": [1, 2], "grid_C": [1, 2], "independent": true,
///  "pmf": [{"t": 1, "c": 1, "p": "1/4"}, ...]}
/// ```
///
/// and the marginal shorthand for independent laws:
///
/// ```json
/// {"margT": [{"t": 1, "p": "1/2"}, ...], "margC": [{"t": 2, "p": "1/2"}, ...]}
/// ```
///
/// Times may be JSON numbers or strings; probabilities must be exact strings
/// (`"num/den"` or decimal text) or integer literals, never floats.
pub fn parse_distribution_spec(text: &str) -> Result<LatentLaw> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Spec("top level must be a JSON object".to_string()))?;

    const KNOWN: [&str; 6] = ["grid_T", "grid_C", "pmf", "independent", "margT", "margC"];
    for key in obj.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(Error::Spec(format!("unknown field {key:?}")));
        }
    }

    let marginal_form = obj.contains_key("margT") || obj.contains_key("margC");
    if marginal_form {
        if obj.contains_key("pmf") {
            return Err(Error::Spec(
                "give either pmf or margT/margC, not both".to_string(),
            ));
        }
        let marg_t = parse_marginal(obj.get("margT"), "margT")?;
        let marg_c = parse_marginal(obj.get("margC"), "margC")?;
        if let Some(flag) = obj.get("independent") {
            if flag.as_bool() != Some(true) {
                return Err(Error::Spec(
                    "margT/margC laws are independent by construction; \
                     independent must be omitted or true"
                        .to_string(),
                ));
            }
        }
        let law = LatentLaw::independent_product(marg_t, marg_c)
            .map_err(|e| Error::Spec(e.to_string()))?;
        check_declared_grid(obj.get("grid_T"), "grid_T", law.grid_t())?;
        check_declared_grid(obj.get("grid_C"), "grid_C", law.grid_c())?;
        return Ok(law);
    }

    let grid_t = parse_grid(obj.get("grid_T"), "grid_T")?;
    let grid_c = parse_grid(obj.get("grid_C"), "grid_C")?;
    let independent = match obj.get("independent") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(other) => {
            return Err(Error::Spec(format!(
                "independent must be a boolean, got {other}"
            )))
        }
    };
    let pmf_value = obj
        .get("pmf")
        .ok_or_else(|| Error::Spec("missing field pmf".to_string()))?;
    let rows = pmf_value
        .as_array()
        .ok_or_else(|| Error::Spec("pmf must be an array".to_string()))?;
    let mut entries = Vec::with_capacity(rows.len());
    for (index, row) in rows.iter().enumerate() {
        let row_obj = row
            .as_object()
            .ok_or_else(|| Error::Spec(format!("pmf[{index}] must be an object")))?;
        for key in row_obj.keys() {
            if !["t", "c", "p"].contains(&key.as_str()) {
                return Err(Error::Spec(format!("pmf[{index}]: unknown field {key:?}")));
            }
        }
        let t = time_field(row_obj.get("t"), &format!("pmf[{index}].t"))?;
        let c = time_field(row_obj.get("c"), &format!("pmf[{index}].c"))?;
        let p = probability_field(row_obj.get("p"), &format!("pmf[{index}].p"))?;
        entries.push(((t, c), p));
    }
    LatentLaw::new(grid_t, grid_c, entries, independent).map_err(|e| Error::Spec(e.to_string()))
}

fn parse_grid(value: Option<&Value>, field: &str) -> Result<TimeGrid> {
    let value = value.ok_or_else(|| Error::Spec(format!("missing field {field}")))?;
    let items = value
        .as_array()
        .ok_or_else(|| Error::Spec(format!("{field} must be an array of times")))?;
    let mut points = Vec::with_capacity(items.len());
    for (index, item) in items.iter().enumerate() {
        points.push(time_field(Some(item), &format!("{field}[{index}]"))?);
    }
    TimeGrid::new(points).map_err(|e| Error::Spec(format!("{field}: {e}")))
}

fn check_declared_grid(value: Option<&Value>, field: &str, expected: &TimeGrid) -> Result<()> {
    match value {
        None => Ok(()),
        Some(_) => {
            let declared = parse_grid(value, field)?;
            if &declared == expected {
                Ok(())
            } else {
                Err(Error::Spec(format!(
                    "{field} disagrees with the support of the marginal mass function"
                )))
            }
        }
    }
}

fn parse_marginal(value: Option<&Value>, field: &str) -> Result<Vec<(Time, Rat)>> {
    let value = value.ok_or_else(|| Error::Spec(format!("missing field {field}")))?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Spec(format!("{field} must be an array")))?;
    let mut out = Vec::with_capacity(rows.len());
    for (index, row) in rows.iter().enumerate() {
        let row_obj = row
            .as_object()
            .ok_or_else(|| Error::Spec(format!("{field}[{index}] must be an object")))?;
        for key in row_obj.keys() {
            if !["t", "p"].contains(&key.as_str()) {
                return Err(Error::Spec(format!(
                    "{field}[{index}]: unknown field {key:?}"
                )));
            }
        }
        let t = time_field(row_obj.get("t"), &format!("{field}[{index}].t"))?;
        let p = probability_field(row_obj.get("p"), &format!("{field}[{index}].p"))?;
        out.push((t, p));
    }
    Ok(out)
}

fn time_field(value: Option<&Value>, context: &str) -> Result<Time> {
    let value = value.ok_or_else(|| Error::Spec(format!("missing field {context}")))?;
    let rat = match value {
        Value::Number(n) => parse_rat(&n.to_string()),
        Value::String(s) => parse_rat(s),
        other => {
            return Err(Error::Spec(format!(
                "{context}: expected a number or string, got {other}"
            )))
        }
    }
    .map_err(|e| Error::Spec(format!("{context}: {e}")))?;
    Time::new(rat).map_err(|e| Error::Spec(format!("{context}: {e}")))
}

fn probability_field(value: Option<&Value>, context: &str) -> Result<Rat> {
    let value = value.ok_or_else(|| Error::Spec(format!("missing field {context}")))?;
    match value {
        Value::String(s) => parse_rat(s).map_err(|e| Error::Spec(format!("{context}: {e}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rat(&n.to_string())
            .map_err(|e| Error::Spec(format!("{context}: {e}"))),
        Value::Number(_) => Err(Error::Spec(format!(
            "{context}: probabilities must be exact strings like \"1/4\", not floats"
        ))),
        other => Err(Error::Spec(format!(
            "{context}: expected a string probability, got {other}"
        ))),
    }
}

/// Renders a latent law back into the full distribution-spec layout.
///
/// Useful for writing fixture files that the command-line tool can read back.
pub fn render_distribution_spec(law: &LatentLaw) -> String {
    let grid = |g: &TimeGrid| -> Vec<Value> {
        g.iter().map(|t| Value::String(t.to_string())).collect()
    };
    let pmf: Vec<Value> = law
        .atoms()
        .map(|(t, c, p)| {
            serde_json::json!({
                "t": t.to_string(),
                "c": c.to_string(),
                "p": format_rat(p),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "grid_T": grid(law.grid_t()),
        "grid_C": grid(law.grid_c()),
        "independent": law.is_independent(),
        "pmf": pmf,
    });
    serde_json::to_string_pretty(&doc).expect("spec documents serialize")
}
