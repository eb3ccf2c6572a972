//! Exact verification engine for the martingale structure of observed laws.
//!
//! The engine enumerates the filtration atoms of a finite observed law,
//! computes conditional expectations by mass-weighted averaging over
//! information cells, measures the measurability class of integrand processes
//! by constancy on those cells, and checks every martingale, transform,
//! covariation, and identification identity exactly — zero tolerance, in
//! rational arithmetic. Nothing here samples: all verification is exhaustive
//! enumeration over positive-mass atoms.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LatentLaw, Observation, ObservedLaw, Time, TimeGrid};
use crate::pathwise::{
    covariation_centering, transform_path, CenteringVariant, Integrand, MartingaleKind,
    MeasurabilityClass, Path,
};
use crate::population::{
    check_cumulative_difference, check_hazard_relation, check_identification,
    check_survival_factorization, Population,
};
use crate::rational::{Rat, RatDisplay};

/// The positive-mass atoms of an observed law, indexed densely so partitions
/// and value tables can refer to atoms by position.
#[derive(Clone, Debug)]
pub struct AtomSpace {
    atoms: Vec<(Observation, Rat)>,
}

impl AtomSpace {
    pub fn new(law: &ObservedLaw) -> AtomSpace {
        AtomSpace {
            atoms: law
                .atoms()
                .map(|(x, status, mass)| {
                    (
                        Observation {
                            time: x.clone(),
                            status,
                        },
                        mass.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn observation(&self, index: usize) -> &Observation {
        &self.atoms[index].0
    }

    pub fn mass(&self, index: usize) -> &Rat {
        &self.atoms[index].1
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.atoms.len()
    }

    fn cell_mass(&self, cell: &[usize]) -> Rat {
        cell.iter().map(|&i| self.mass(i)).sum()
    }
}

/// Which sigma algebra a partition represents at a given time.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FiltrationKind {
    /// Everything observed through `t`: past and present of both counting
    /// processes.
    Full,
    /// Everything observed strictly before `t`.
    StrictPast,
    /// Past of both processes plus the *present* of the failure process only:
    /// a failure at `t` is visible, a censoring at `t` is not.
    FailureClosed,
}

/// A partition of the atom space into the information cells of one sigma
/// algebra at one time. Only nonempty cells are kept; every cell has positive
/// mass because every atom does.
#[derive(Clone, Debug)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// The single-cell partition: no information at all (time zero).
    pub fn trivial(space: &AtomSpace) -> Partition {
        Partition {
            cells: vec![space.indices().collect()],
        }
    }

    /// Human-readable label of a cell, for violation reports.
    pub fn describe_cell(space: &AtomSpace, cell: &[usize]) -> String {
        let atoms: Vec<String> = cell
            .iter()
            .map(|&i| format!("({})", space.observation(i)))
            .collect();
        format!("{{{}}}", atoms.join(", "))
    }

    /// True when every cell of `self` lies inside some cell of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.cells.iter().all(|fine| {
            coarser
                .cells
                .iter()
                .any(|coarse| fine.iter().all(|i| coarse.contains(i)))
        })
    }
}

/// The information cells of the chosen sigma algebra at time `t`.
///
/// * `Full`: one singleton per atom with `x <= t`, plus the cell `{X > t}`.
/// * `StrictPast`: one singleton per atom with `x < t`, plus `{X >= t}`.
/// * `FailureClosed`: one singleton per atom with `x < t`, plus the cell of a
///   failure exactly at `t`, plus the cell `{X > t} or censored-at-t` — the
///   event that the modified at-risk indicator is 1.
pub fn partition(space: &AtomSpace, t: &Time, kind: FiltrationKind) -> Partition {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut held_out: Vec<usize> = Vec::new();
    let mut present_failure: Vec<usize> = Vec::new();
    for i in space.indices() {
        let o = space.observation(i);
        let singleton = match kind {
            FiltrationKind::Full => o.time <= *t,
            FiltrationKind::StrictPast | FiltrationKind::FailureClosed => o.time < *t,
        };
        if singleton {
            cells.push(vec![i]);
        } else if kind == FiltrationKind::FailureClosed
            && o.time == *t
            && o.status.is_failure()
        {
            present_failure.push(i);
        } else {
            held_out.push(i);
        }
    }
    if !present_failure.is_empty() {
        cells.push(present_failure);
    }
    if !held_out.is_empty() {
        cells.push(held_out);
    }
    Partition { cells }
}

/// Mass-weighted average of `z` on each cell, written back per atom: every
/// atom receives its cell's conditional expectation. `z` must carry one value
/// per atom.
pub fn conditional_expectation(space: &AtomSpace, partition: &Partition, z: &[Rat]) -> Vec<Rat> {
    assert_eq!(z.len(), space.len(), "one value per atom");
    let mut out = vec![Rat::zero(); space.len()];
    for cell in partition.cells() {
        let mass = space.cell_mass(cell);
        let weighted: Rat = cell.iter().map(|&i| &z[i] * space.mass(i)).sum();
        let average = weighted / mass;
        for &i in cell {
            out[i] = average.clone();
        }
    }
    out
}

/// Measures the strongest class an integrand satisfies on this law: constant
/// on every strict-past cell at every grid point means predictable; constant
/// on every failure-closed cell means half-predictable (grid processes are
/// constant between points, so constancy at the left endpoint settles the
/// whole interval); constant on every full-information cell means adapted.
pub fn check_measurability(
    h: &Integrand,
    space: &AtomSpace,
    grid: &TimeGrid,
) -> MeasurabilityClass {
    let constant_on = |kind: FiltrationKind| {
        grid.iter().all(|u| {
            partition(space, u, kind).cells().iter().all(|cell| {
                let mut values = cell
                    .iter()
                    .map(|&i| h.value(u, space.observation(i)));
                match values.next() {
                    None => true,
                    Some(first) => values.all(|v| v == first),
                }
            })
        })
    };
    if constant_on(FiltrationKind::StrictPast) {
        MeasurabilityClass::Predictable
    } else if constant_on(FiltrationKind::FailureClosed) {
        MeasurabilityClass::HalfPredictable
    } else if constant_on(FiltrationKind::Full) {
        MeasurabilityClass::AdaptedOnly
    } else {
        MeasurabilityClass::NotAdapted
    }
}

/// One exact identity that failed, with both sides.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub section: String,
    pub context: String,
    pub lhs: RatDisplay,
    pub rhs: RatDisplay,
}

impl Violation {
    fn new(section: &str, context: String, lhs: &Rat, rhs: &Rat) -> Violation {
        Violation {
            section: section.to_string(),
            context,
            lhs: RatDisplay::from(lhs),
            rhs: RatDisplay::from(rhs),
        }
    }
}

/// Values of one process family on `{0} ∪ grid` for every atom: column 0
/// holds the time-zero value, column `j + 1` the value at the `j`-th grid
/// point. All verifications run off these tables.
#[derive(Clone, Debug)]
pub struct ProcessTable {
    name: String,
    values: Vec<Vec<Rat>>,
}

impl ProcessTable {
    /// Tabulates a process that starts at 0, from per-atom step functions.
    pub fn from_paths(name: &str, grid: &TimeGrid, paths: &[&crate::population::StepFunction]) -> ProcessTable {
        ProcessTable::build(name, grid, paths.len(), |i, t| match t {
            None => paths[i].initial().clone(),
            Some(u) => paths[i].value(u),
        })
    }

    /// Tabulates from an arbitrary rule; `None` is time zero.
    pub fn build(
        name: &str,
        grid: &TimeGrid,
        atom_count: usize,
        value: impl Fn(usize, Option<&Time>) -> Rat,
    ) -> ProcessTable {
        let values = (0..atom_count)
            .map(|i| {
                std::iter::once(value(i, None))
                    .chain(grid.iter().map(|u| value(i, Some(u))))
                    .collect()
            })
            .collect();
        ProcessTable {
            name: name.to_string(),
            values,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Value for atom `i` at timepoint index `k` (0 = time zero).
    fn at(&self, i: usize, k: usize) -> &Rat {
        &self.values[i][k]
    }

    /// Jump at the `j`-th grid point (processes jump only on the grid).
    fn delta(&self, i: usize, j: usize) -> Rat {
        &self.values[i][j + 1] - &self.values[i][j]
    }
}

/// Checks the martingale property of a tabulated process against the full
/// filtration: for every pair of timepoints `t < t2` (including time zero)
/// and every positive-mass information cell at `t`, the process is constant
/// on the cell and its conditional expectation at `t2` equals that constant.
pub fn verify_f_martingale(
    table: &ProcessTable,
    space: &AtomSpace,
    grid: &TimeGrid,
) -> Vec<Violation> {
    let section = format!("martingale[{}]", table.name());
    let mut violations = Vec::new();
    let timepoints: Vec<Option<&Time>> =
        std::iter::once(None).chain(grid.iter().map(Some)).collect();
    for (k, t) in timepoints.iter().enumerate() {
        let cells = match t {
            None => Partition::trivial(space),
            Some(u) => partition(space, u, FiltrationKind::Full),
        };
        for (k2, t2) in timepoints.iter().enumerate().skip(k + 1) {
            for cell in cells.cells() {
                let now = table.at(cell[0], k);
                if let Some(&i) = cell.iter().find(|&&i| table.at(i, k) != now) {
                    violations.push(Violation::new(
                        &section,
                        format!(
                            "not adapted at t={}: {} differs inside cell {}",
                            describe_timepoint(*t),
                            space.observation(i),
                            Partition::describe_cell(space, cell)
                        ),
                        table.at(i, k),
                        now,
                    ));
                    continue;
                }
                let mass = space.cell_mass(cell);
                let later: Rat = cell
                    .iter()
                    .map(|&i| table.at(i, k2) * space.mass(i))
                    .sum::<Rat>()
                    / mass;
                if later != *now {
                    violations.push(Violation::new(
                        &section,
                        format!(
                            "drift from t={} to t2={} on cell {}",
                            describe_timepoint(*t),
                            describe_timepoint(*t2),
                            Partition::describe_cell(space, cell)
                        ),
                        &later,
                        now,
                    ));
                }
            }
        }
    }
    violations
}

fn describe_timepoint(t: Option<&Time>) -> String {
    match t {
        None => "0".to_string(),
        Some(u) => u.to_string(),
    }
}

/// Checks that the process increments have zero conditional mean given the
/// failure-closed sigma algebra at each grid point: the drift condition the
/// modified censoring martingale satisfies and the standard one does not at
/// shared discontinuities.
pub fn verify_g_drift(table: &ProcessTable, space: &AtomSpace, grid: &TimeGrid) -> Vec<Violation> {
    let section = format!("g-drift[{}]", table.name());
    let mut violations = Vec::new();
    for (j, u) in grid.iter().enumerate() {
        let cells = partition(space, u, FiltrationKind::FailureClosed);
        for cell in cells.cells() {
            let mass = space.cell_mass(cell);
            let mean: Rat = cell
                .iter()
                .map(|&i| table.delta(i, j) * space.mass(i))
                .sum::<Rat>()
                / mass;
            if !mean.is_zero() {
                violations.push(Violation::new(
                    &section,
                    format!(
                        "increment at u={u} on cell {}",
                        Partition::describe_cell(space, cell)
                    ),
                    &mean,
                    &Rat::zero(),
                ));
            }
        }
    }
    violations
}

/// All atom paths of a population, aligned with the atom space.
pub fn atom_paths(space: &AtomSpace, population: &Population) -> Vec<Path> {
    space
        .indices()
        .map(|i| {
            Path::evaluate(space.observation(i), population.grid(), population.curves())
                .expect("law atoms lie on the law's grid")
        })
        .collect()
}

/// Tabulates one of the three martingales over all atoms.
pub fn martingale_table(
    kind: MartingaleKind,
    paths: &[Path],
    grid: &TimeGrid,
) -> ProcessTable {
    let step_paths: Vec<_> = paths.iter().map(|p| p.martingale(kind)).collect();
    ProcessTable::from_paths(kind.label(), grid, &step_paths)
}

/// Verifies the two Doob-sum reconstructions: summing the conditional
/// expectations of the censoring increments given the strict past rebuilds
/// the standard centering, and given the failure-closed present rebuilds the
/// modified centering — atom by atom, time by time.
pub fn verify_doob_sums(
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut running_strict = vec![Rat::zero(); space.len()];
    let mut running_closed = vec![Rat::zero(); space.len()];
    for u in grid.iter() {
        let delta_censoring: Vec<Rat> = space
            .indices()
            .map(|i| paths[i].counting_censoring().jump(u))
            .collect();
        let strict = conditional_expectation(
            space,
            &partition(space, u, FiltrationKind::StrictPast),
            &delta_censoring,
        );
        let closed = conditional_expectation(
            space,
            &partition(space, u, FiltrationKind::FailureClosed),
            &delta_censoring,
        );
        for i in space.indices() {
            running_strict[i] += &strict[i];
            running_closed[i] += &closed[i];
            let expected_strict = paths[i].centering_censoring_standard().value(u);
            if running_strict[i] != expected_strict {
                violations.push(Violation::new(
                    "doob-sum[standard]",
                    format!("atom ({}), t={u}", space.observation(i)),
                    &running_strict[i],
                    &expected_strict,
                ));
            }
            let expected_closed = paths[i].centering_censoring_modified().value(u);
            if running_closed[i] != expected_closed {
                violations.push(Violation::new(
                    "doob-sum[modified]",
                    format!("atom ({}), t={u}", space.observation(i)),
                    &running_closed[i],
                    &expected_closed,
                ));
            }
        }
    }
    violations
}

/// Verifies the tower property through the nesting strict-past ⊆
/// failure-closed ⊆ full: averaging the failure-closed conditional
/// expectation over the strict past must equal conditioning on the strict
/// past directly. Atom indicators span every function on the space, so
/// checking them checks everything.
pub fn verify_tower(space: &AtomSpace, grid: &TimeGrid) -> Vec<Violation> {
    let mut violations = Vec::new();
    for u in grid.iter() {
        let strict = partition(space, u, FiltrationKind::StrictPast);
        let closed = partition(space, u, FiltrationKind::FailureClosed);
        let full = partition(space, u, FiltrationKind::Full);
        if !closed.refines(&strict) || !full.refines(&closed) {
            violations.push(Violation::new(
                "tower",
                format!("partition nesting broken at t={u}"),
                &Rat::zero(),
                &Rat::one(),
            ));
            continue;
        }
        for target in space.indices() {
            let indicator: Vec<Rat> = space
                .indices()
                .map(|i| if i == target { Rat::one() } else { Rat::zero() })
                .collect();
            let through_closed = conditional_expectation(
                space,
                &strict,
                &conditional_expectation(space, &closed, &indicator),
            );
            let direct = conditional_expectation(space, &strict, &indicator);
            for i in space.indices() {
                if through_closed[i] != direct[i] {
                    violations.push(Violation::new(
                        "tower",
                        format!(
                            "indicator of ({}) at t={u}, atom ({})",
                            space.observation(target),
                            space.observation(i)
                        ),
                        &through_closed[i],
                        &direct[i],
                    ));
                }
            }
        }
    }
    violations
}

/// Builds the transform table `(H . M)` for every atom.
fn transform_table(
    h: &Integrand,
    kind: MartingaleKind,
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
) -> Result<ProcessTable> {
    let transformed: Vec<crate::population::StepFunction> = space
        .indices()
        .map(|i| transform_path(h, space.observation(i), paths[i].martingale(kind)))
        .collect::<Result<_>>()?;
    let refs: Vec<_> = transformed.iter().collect();
    Ok(ProcessTable::from_paths(
        &format!("{}·{}", h.name(), kind.label()),
        grid,
        &refs,
    ))
}

/// Verifies that the transform of a martingale by `h` is itself a
/// martingale, after machine-measuring `h`'s class and rejecting integrands
/// below the theorem's requirement for that martingale.
pub fn verify_transform_martingale(
    h: &Integrand,
    kind: MartingaleKind,
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
) -> Result<Vec<Violation>> {
    let measured = check_measurability(h, space, grid);
    let required = kind.required_class();
    if measured < required {
        return Err(Error::MeasurabilityTooWeak {
            name: h.name().to_string(),
            measured: measured.to_string(),
            required: required.to_string(),
        });
    }
    let table = transform_table(h, kind, space, grid, paths)?;
    let mut violations = verify_f_martingale(&table, space, grid);
    if kind == MartingaleKind::CensoringModified {
        violations.extend(verify_g_drift(&table, space, grid));
    }
    Ok(violations)
}

/// Runs the transform martingale check *without* the measurability gate, to
/// exhibit the drift violations an under-qualified integrand produces. Used
/// to document that the hypotheses of the transform theorems are necessary,
/// not decorative.
pub fn exhibit_transform_drift(
    h: &Integrand,
    kind: MartingaleKind,
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
) -> Result<Vec<Violation>> {
    let table = transform_table(h, kind, space, grid, paths)?;
    let mut violations = verify_f_martingale(&table, space, grid);
    violations.extend(verify_g_drift(&table, space, grid));
    Ok(violations)
}

/// Verifies one covariation theorem: the product of two transformed modified
/// censoring martingales minus the variant's centering is an exact
/// martingale. Integrand classes are machine-measured against the variant's
/// requirement first.
pub fn verify_covariation(
    h1: &Integrand,
    h2: &Integrand,
    variant: CenteringVariant,
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
    population: &Population,
) -> Result<Vec<Violation>> {
    let required = variant.required_class();
    for h in [h1, h2] {
        let measured = check_measurability(h, space, grid);
        if measured < required {
            return Err(Error::MeasurabilityTooWeak {
                name: h.name().to_string(),
                measured: measured.to_string(),
                required: required.to_string(),
            });
        }
    }
    let kind = MartingaleKind::CensoringModified;
    let left = transform_table(h1, kind, space, grid, paths)?;
    let right = transform_table(h2, kind, space, grid, paths)?;
    let centerings: Vec<crate::population::StepFunction> = space
        .indices()
        .map(|i| covariation_centering(h1, h2, variant, &paths[i], population.curves()))
        .collect::<Result<_>>()?;
    let name = format!(
        "({}·M)({}·M) - centering[{}]",
        h1.name(),
        h2.name(),
        variant.label()
    );
    let table = ProcessTable::build(&name, grid, space.len(), |i, t| match t {
        None => Rat::zero(),
        Some(u) => left.at(i, index_of(grid, u)) * right.at(i, index_of(grid, u))
            - centerings[i].value(u),
    });
    Ok(verify_f_martingale(&table, space, grid))
}

fn index_of(grid: &TimeGrid, u: &Time) -> usize {
    grid.iter().position(|t| t == u).expect("grid point") + 1
}

/// Verifies the orthogonality of transformed modified censoring martingales
/// and transformed failure martingales: their product is already a martingale
/// with no centering at all, shared discontinuities notwithstanding.
pub fn verify_cross_covariation(
    h1: &Integrand,
    h3: &Integrand,
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
) -> Result<Vec<Violation>> {
    for (h, required) in [
        (h1, MeasurabilityClass::HalfPredictable),
        (h3, MeasurabilityClass::Predictable),
    ] {
        let measured = check_measurability(h, space, grid);
        if measured < required {
            return Err(Error::MeasurabilityTooWeak {
                name: h.name().to_string(),
                measured: measured.to_string(),
                required: required.to_string(),
            });
        }
    }
    let left = transform_table(h1, MartingaleKind::CensoringModified, space, grid, paths)?;
    let right = transform_table(h3, MartingaleKind::Failure, space, grid, paths)?;
    let name = format!("({}·M_C)({}·M_T)", h1.name(), h3.name());
    let table = ProcessTable::build(&name, grid, space.len(), |i, t| match t {
        None => Rat::zero(),
        Some(u) => {
            let k = index_of(grid, u);
            left.at(i, k) * right.at(i, k)
        }
    });
    Ok(verify_f_martingale(&table, space, grid))
}

/// A concrete atom and time at which the standard and modified censoring
/// martingales take different values.
#[derive(Clone, Debug, Serialize)]
pub struct DistinguishingWitness {
    pub atom: String,
    pub t: String,
    pub standard: RatDisplay,
    pub modified: RatDisplay,
}

/// Outcome of the indistinguishability check, both directions.
#[derive(Clone, Debug, Serialize)]
pub struct IndistinguishabilityReport {
    pub shared_discontinuities: Vec<String>,
    pub indistinguishable: bool,
    pub witness: Option<DistinguishingWitness>,
    pub violations: Vec<Violation>,
}

/// Checks the equivalence: the two censoring martingales agree on every atom
/// at every time exactly when no discontinuity is shared. With an empty
/// shared set, any disagreement is a violation; with a nonempty one, the
/// *absence* of a disagreement is the violation, and the first disagreement
/// found is reported as the witness.
pub fn verify_indistinguishability(
    space: &AtomSpace,
    grid: &TimeGrid,
    paths: &[Path],
    population: &Population,
) -> IndistinguishabilityReport {
    let shared = population.shared_discontinuities();
    let mut witness = None;
    let mut violations = Vec::new();
    for i in space.indices() {
        for t in grid.iter() {
            let standard = paths[i].censoring_martingale_standard().value(t);
            let modified = paths[i].censoring_martingale_modified().value(t);
            if standard != modified {
                if shared.is_empty() {
                    violations.push(Violation::new(
                        "indistinguishability",
                        format!(
                            "no shared discontinuity, yet paths differ: atom ({}), t={t}",
                            space.observation(i)
                        ),
                        &standard,
                        &modified,
                    ));
                } else if witness.is_none() {
                    witness = Some(DistinguishingWitness {
                        atom: space.observation(i).to_string(),
                        t: t.to_string(),
                        standard: RatDisplay::from(&standard),
                        modified: RatDisplay::from(&modified),
                    });
                }
            }
        }
    }
    if !shared.is_empty() && witness.is_none() {
        violations.push(Violation::new(
            "indistinguishability",
            "shared discontinuity present but no distinguishing atom/time found".to_string(),
            &Rat::zero(),
            &Rat::one(),
        ));
    }
    IndistinguishabilityReport {
        shared_discontinuities: shared.iter().map(|t| t.to_string()).collect(),
        indistinguishable: shared.is_empty(),
        witness,
        violations,
    }
}

/// Checks both directions of the cumulative-hazard equivalence: the standard
/// and modified censoring hazards agree at every grid point exactly when no
/// discontinuity is shared.
pub fn verify_hazard_equality_iff(population: &Population) -> Vec<Violation> {
    let shared = population.shared_discontinuities();
    let mut violations = Vec::new();
    let mut differ_somewhere = false;
    for t in population.grid().iter() {
        let standard = population.censoring_hazard_standard().value(t);
        let modified = population.censoring_hazard_modified().value(t);
        if standard != modified {
            differ_somewhere = true;
            if shared.is_empty() {
                violations.push(Violation::new(
                    "hazard-equality-iff",
                    format!("no shared discontinuity, yet cumulative hazards differ at t={t}"),
                    &standard,
                    &modified,
                ));
            }
        }
    }
    if !shared.is_empty() && !differ_somewhere {
        violations.push(Violation::new(
            "hazard-equality-iff",
            "shared discontinuity present but cumulative hazards agree everywhere".to_string(),
            &Rat::zero(),
            &Rat::one(),
        ));
    }
    violations
}

/// One section of a verification suite: its name, how many elementary exact
/// comparisons ran, the violations (must be empty for a clean law), and the
/// documented expected failures (hypothesis-necessity findings that are
/// supposed to appear).
#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub name: String,
    pub checks: usize,
    pub violations: Vec<Violation>,
    pub expected_failures: Vec<Violation>,
    pub notes: Vec<String>,
}

impl SectionReport {
    fn new(name: &str) -> SectionReport {
        SectionReport {
            name: name.to_string(),
            checks: 0,
            violations: Vec::new(),
            expected_failures: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// The full verification report for one law.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub law: String,
    pub grid: Vec<String>,
    pub atom_count: usize,
    pub shared_discontinuities: Vec<String>,
    pub indistinguishable: bool,
    pub witness: Option<DistinguishingWitness>,
    pub sections: Vec<SectionReport>,
}

impl SuiteReport {
    pub fn violation_count(&self) -> usize {
        self.sections.iter().map(|s| s.violations.len()).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn total_checks(&self) -> usize {
        self.sections.iter().map(|s| s.checks).sum()
    }

    /// True when some under-qualified integrand produced the documented drift
    /// violation, demonstrating the necessity of the measurability
    /// hypotheses.
    pub fn necessity_witness_found(&self) -> bool {
        self.sections
            .iter()
            .any(|s| s.name == "transform-necessity" && !s.expected_failures.is_empty())
    }
}

/// Runs every exact check on one observed law (plus identification when the
/// latent law is supplied). Violations mean an identity that must hold
/// failed; a clean report is the assertion that every theorem held exactly on
/// this law.
pub fn run_suite(name: &str, law: &ObservedLaw, latent: Option<&LatentLaw>) -> SuiteReport {
    let population = Population::from_observed(law);
    let space = AtomSpace::new(law);
    let grid = law.grid();
    let paths = atom_paths(&space, &population);
    let mut sections = Vec::new();

    // Structural hazard identities.
    let mut section = SectionReport::new("hazard-relation");
    section.checks = 2 * grid.len();
    section.violations = check_hazard_relation(&population)
        .into_iter()
        .map(|v| Violation {
            section: "hazard-relation".to_string(),
            context: format!("{} at u={}", v.identity, v.at),
            lhs: v.lhs,
            rhs: v.rhs,
        })
        .collect();
    sections.push(section);

    let mut section = SectionReport::new("cumulative-gap");
    section.checks = grid.len();
    section.violations = check_cumulative_difference(&population)
        .into_iter()
        .map(|v| Violation {
            section: "cumulative-gap".to_string(),
            context: format!("{} at t={}", v.identity, v.at),
            lhs: v.lhs,
            rhs: v.rhs,
        })
        .collect();
    sections.push(section);

    let mut section = SectionReport::new("survival-factorization");
    section.checks = grid.len();
    section.violations = check_survival_factorization(law, &population)
        .into_iter()
        .map(|v| Violation {
            section: "survival-factorization".to_string(),
            context: format!("at t={}", v.at),
            lhs: v.lhs,
            rhs: v.rhs,
        })
        .collect();
    sections.push(section);

    let mut section = SectionReport::new("hazard-equality-iff");
    section.checks = grid.len();
    section.violations = verify_hazard_equality_iff(&population);
    sections.push(section);

    // Martingale properties of the three canonical martingales.
    let mut section = SectionReport::new("martingale-f");
    for kind in [
        MartingaleKind::Failure,
        MartingaleKind::CensoringStandard,
        MartingaleKind::CensoringModified,
    ] {
        let table = martingale_table(kind, &paths, grid);
        section.checks += pair_count(grid.len());
        section
            .violations
            .extend(verify_f_martingale(&table, &space, grid));
    }
    sections.push(section);

    // Drift against the failure-closed filtration: zero for the modified
    // martingale everywhere; failing for the standard one exactly at shared
    // discontinuities.
    let mut section = SectionReport::new("g-drift");
    let modified_table = martingale_table(MartingaleKind::CensoringModified, &paths, grid);
    section.checks += grid.len();
    section
        .violations
        .extend(verify_g_drift(&modified_table, &space, grid));
    let standard_table = martingale_table(MartingaleKind::CensoringStandard, &paths, grid);
    let standard_drifts = verify_g_drift(&standard_table, &space, grid);
    section.checks += grid.len();
    let shared = population.shared_discontinuities();
    if shared.is_empty() {
        section.violations.extend(standard_drifts);
    } else if standard_drifts.is_empty() {
        section.violations.push(Violation::new(
            "g-drift",
            "standard censoring martingale shows no drift despite a shared discontinuity"
                .to_string(),
            &Rat::zero(),
            &Rat::one(),
        ));
    } else {
        section.notes.push(format!(
            "standard censoring martingale drifts at {} failure-closed cell(s), as it must with shared discontinuities {:?}",
            standard_drifts.len(),
            population
                .shared_discontinuities()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
        ));
        section.expected_failures.extend(standard_drifts);
    }
    sections.push(section);

    let mut section = SectionReport::new("doob-sums");
    section.checks = 2 * grid.len() * space.len();
    section.violations = verify_doob_sums(&space, grid, &paths);
    sections.push(section);

    let mut section = SectionReport::new("tower");
    section.checks = grid.len() * space.len() * space.len();
    section.violations = verify_tower(&space, grid);
    sections.push(section);

    // Pathwise decomposition of the modified martingale.
    let mut section = SectionReport::new("decomposition");
    let times: Vec<Time> = grid.iter().cloned().collect();
    for i in space.indices() {
        section.checks += times.len();
        let gaps = crate::pathwise::check_martingale_decomposition(
            &paths[i],
            population.curves(),
            &times,
        )
        .expect("catalog integrands stay within their bounds");
        for (t, gap) in gaps {
            section.violations.push(Violation::new(
                "decomposition",
                format!("atom ({}), t={t}", space.observation(i)),
                &gap,
                &Rat::zero(),
            ));
        }
    }
    sections.push(section);

    // Measured class must never fall below the declared class.
    let mut section = SectionReport::new("measurability");
    let catalog = Integrand::catalog();
    for h in &catalog {
        section.checks += 1;
        let measured = check_measurability(h, &space, grid);
        if measured < h.declared() {
            section.violations.push(Violation::new(
                "measurability",
                format!(
                    "integrand {} measured {} below declared {}",
                    h.name(),
                    measured,
                    h.declared()
                ),
                &Rat::zero(),
                &Rat::one(),
            ));
        }
    }
    sections.push(section);

    // Transform theorems, with the measurability gate doing the selecting:
    // qualified integrands must verify, under-qualified ones must be refused.
    let mut section = SectionReport::new("transforms");
    let mut necessity = SectionReport::new("transform-necessity");
    for kind in [
        MartingaleKind::Failure,
        MartingaleKind::CensoringStandard,
        MartingaleKind::CensoringModified,
    ] {
        for h in &catalog {
            let measured = check_measurability(h, &space, grid);
            match verify_transform_martingale(h, kind, &space, grid, &paths) {
                Ok(violations) => {
                    section.checks += 1;
                    if measured < kind.required_class() {
                        section.violations.push(Violation::new(
                            "transforms",
                            format!(
                                "gate admitted {} (measured {}) for {}",
                                h.name(),
                                measured,
                                kind.label()
                            ),
                            &Rat::zero(),
                            &Rat::one(),
                        ));
                    }
                    section.violations.extend(violations);
                }
                Err(Error::MeasurabilityTooWeak { .. }) => {
                    section.checks += 1;
                    if measured >= kind.required_class() {
                        section.violations.push(Violation::new(
                            "transforms",
                            format!(
                                "gate refused {} (measured {}) for {}",
                                h.name(),
                                measured,
                                kind.label()
                            ),
                            &Rat::zero(),
                            &Rat::one(),
                        ));
                        continue;
                    }
                    // Document what goes wrong without the hypothesis.
                    necessity.checks += 1;
                    let drifts = exhibit_transform_drift(h, kind, &space, grid, &paths)
                        .expect("catalog integrands stay within their bounds");
                    if drifts.is_empty() {
                        necessity.notes.push(format!(
                            "{} on {} produced no drift on this law (degenerate case)",
                            h.name(),
                            kind.label()
                        ));
                    } else {
                        necessity.expected_failures.extend(drifts);
                    }
                }
                Err(other) => panic!("unexpected transform failure: {other}"),
            }
        }
    }
    sections.push(section);
    sections.push(necessity);

    // Covariation theorems for all three centerings plus cross-orthogonality.
    let mut section = SectionReport::new("covariation");
    let det_step = Integrand::deterministic_step(
        crate::population::StepFunction::constant(Rat::one())
            .with_jump(grid.min().clone(), -Rat::one() / (Rat::one() + Rat::one())),
    );
    let pairs: Vec<(Integrand, Integrand)> = vec![
        (Integrand::one(), Integrand::one()),
        (Integrand::one(), Integrand::failure_count_before()),
        (Integrand::censoring_count_before(), Integrand::failure_count_before()),
        (Integrand::failure_jump(), Integrand::one()),
        (Integrand::modified_at_risk(), Integrand::failure_jump()),
        (det_step.clone(), Integrand::one()),
    ];
    for variant in CenteringVariant::all() {
        for (h1, h2) in &pairs {
            let qualified = [h1, h2].into_iter().all(|h| {
                check_measurability(h, &space, grid) >= variant.required_class()
            });
            if !qualified {
                continue;
            }
            section.checks += 1;
            section.violations.extend(
                verify_covariation(h1, h2, variant, &space, grid, &paths, &population)
                    .expect("qualified integrands were measured above the requirement"),
            );
        }
    }
    for (h1, h3) in [
        (Integrand::one(), Integrand::one()),
        (Integrand::failure_jump(), Integrand::failure_count_before()),
        (Integrand::modified_at_risk(), det_step.clone()),
    ] {
        let ok_left =
            check_measurability(&h1, &space, grid) >= MeasurabilityClass::HalfPredictable;
        let ok_right = check_measurability(&h3, &space, grid) >= MeasurabilityClass::Predictable;
        if ok_left && ok_right {
            section.checks += 1;
            section.violations.extend(
                verify_cross_covariation(&h1, &h3, &space, grid, &paths)
                    .expect("qualified integrands were measured above the requirement"),
            );
        }
    }
    sections.push(section);

    // Both directions of the indistinguishability equivalence.
    let indist = verify_indistinguishability(&space, grid, &paths, &population);
    let mut section = SectionReport::new("indistinguishability");
    section.checks = space.len() * grid.len();
    section.violations = indist.violations.clone();
    if let Some(w) = &indist.witness {
        section.notes.push(format!(
            "witness: atom {} at t={} takes standard value {} and modified value {}",
            w.atom, w.t, w.standard.rat, w.modified.rat
        ));
    }
    sections.push(section);

    // Identification of the latent hazards under independence.
    let mut section = SectionReport::new("identification");
    match latent {
        None => section.notes.push("no latent law supplied".to_string()),
        Some(l) if !l.is_independent() => {
            section.checks += 1;
            match check_identification(l) {
                Err(Error::IndependenceRequired) => section
                    .notes
                    .push("dependent law correctly rejected".to_string()),
                other => section.violations.push(Violation::new(
                    "identification",
                    format!("dependent law not rejected: {other:?}"),
                    &Rat::zero(),
                    &Rat::one(),
                )),
            }
        }
        Some(l) => {
            section.checks += grid.len();
            let report = check_identification(l).expect("independent law");
            for v in report.violations {
                section.violations.push(Violation {
                    section: "identification".to_string(),
                    context: format!("{} hazard at t={}", v.which, v.at),
                    lhs: v.observable,
                    rhs: v.latent,
                });
            }
        }
    }
    sections.push(section);

    SuiteReport {
        law: name.to_string(),
        grid: grid.iter().map(|t| t.to_string()).collect(),
        atom_count: space.len(),
        shared_discontinuities: indist.shared_discontinuities.clone(),
        indistinguishable: indist.indistinguishable,
        witness: indist.witness,
        sections,
    }
}

fn pair_count(grid_len: usize) -> usize {
    // timepoints = {0} ∪ grid; ordered pairs t < t2
    (grid_len + 1) * grid_len / 2
}

/// Which structural feature a generated law is forced to have.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ForcedBranch {
    /// At least one time carries both failure and censoring hazard jumps.
    SharedDiscontinuity,
    /// The latent failure and censoring supports are disjoint, so no time is
    /// shared.
    DisjointSupports,
    /// Unconstrained independent law.
    FreeIndependent,
    /// Unconstrained dependent law (joint pmf, no factorization).
    FreeDependent,
}

impl ForcedBranch {
    pub fn label(self) -> &'static str {
        match self {
            ForcedBranch::SharedDiscontinuity => "shared-discontinuity",
            ForcedBranch::DisjointSupports => "disjoint-supports",
            ForcedBranch::FreeIndependent => "free-independent",
            ForcedBranch::FreeDependent => "free-dependent",
        }
    }
}

const TIME_POOL: [u64; 8] = [1, 2, 3, 4, 5, 6, 7, 8];
const MAX_DENOMINATOR: u64 = 64;
const MAX_GRID: usize = 5;

/// Draws a random latent law with the forced structural branch. Grids use at
/// most five distinct times in total; every probability is a rational with
/// denominator at most 64. Deterministic given the generator state.
pub fn random_law(rng: &mut ChaCha8Rng, branch: ForcedBranch) -> LatentLaw {
    let pool = random_pool(rng, branch);
    match branch {
        ForcedBranch::SharedDiscontinuity => {
            // The first pool time gets failure *and* censoring mass, and the
            // failure marginal also reaches past it, so a censoring there has
            // positive probability.
            let shared = pool[0].clone();
            let later = pool[1].clone();
            let grid_t = random_subset_including(rng, &pool, &[shared.clone(), later.clone()]);
            let grid_c = random_subset_including(rng, &pool, std::slice::from_ref(&shared));
            let t_marginal = random_masses(rng, &grid_t, &[shared.clone(), later]);
            let c_marginal = random_masses(rng, &grid_c, &[shared]);
            LatentLaw::independent_product(t_marginal, c_marginal)
                .expect("generated marginals are valid")
        }
        ForcedBranch::DisjointSupports => {
            let split = rng.random_range(1..pool.len());
            let (left, right) = pool.split_at(split);
            let t_marginal = random_masses(rng, left, &left[..1]);
            let c_marginal = random_masses(rng, right, &right[..1]);
            LatentLaw::independent_product(t_marginal, c_marginal)
                .expect("generated marginals are valid")
        }
        ForcedBranch::FreeIndependent => {
            let grid_t = random_subset_including(rng, &pool, &pool[..1]);
            let grid_c = random_subset_including(rng, &pool, &pool[pool.len() - 1..]);
            let t_marginal = random_masses(rng, &grid_t, &grid_t[..1]);
            let c_marginal = random_masses(rng, &grid_c, &grid_c[..1]);
            LatentLaw::independent_product(t_marginal, c_marginal)
                .expect("generated marginals are valid")
        }
        ForcedBranch::FreeDependent => {
            let grid_t = random_subset_including(rng, &pool, &pool[..1]);
            let grid_c = random_subset_including(rng, &pool, &pool[pool.len() - 1..]);
            let cells: Vec<(Time, Time)> = grid_t
                .iter()
                .flat_map(|t| grid_c.iter().map(move |c| (t.clone(), c.clone())))
                .collect();
            let masses = distribute(rng, cells.len());
            let pmf: Vec<((Time, Time), Rat)> = cells
                .into_iter()
                .zip(masses)
                .filter(|(_, m)| !m.is_zero())
                .collect();
            let gt = TimeGrid::from_set(grid_t.into_iter().collect()).expect("nonempty");
            let gc = TimeGrid::from_set(grid_c.into_iter().collect()).expect("nonempty");
            LatentLaw::new(gt, gc, pmf, false).expect("generated joint pmf is valid")
        }
    }
}

/// 2–5 distinct sorted times (2 guaranteed so forced branches always have
/// room for their structure).
fn random_pool(rng: &mut ChaCha8Rng, branch: ForcedBranch) -> Vec<Time> {
    let min_size = match branch {
        ForcedBranch::SharedDiscontinuity | ForcedBranch::DisjointSupports => 2,
        _ => 1,
    };
    let size = rng.random_range(min_size..=MAX_GRID);
    let mut choices = TIME_POOL.to_vec();
    let mut picked = Vec::new();
    for _ in 0..size {
        let k = rng.random_range(0..choices.len());
        picked.push(choices.swap_remove(k));
    }
    picked.sort_unstable();
    picked.into_iter().map(Time::from_int).collect()
}

/// A random subset of the pool guaranteed to contain `required`.
fn random_subset_including(
    rng: &mut ChaCha8Rng,
    pool: &[Time],
    required: &[Time],
) -> Vec<Time> {
    let mut subset: Vec<Time> = pool
        .iter()
        .filter(|t| required.contains(t) || rng.random_bool(0.5))
        .cloned()
        .collect();
    if subset.is_empty() {
        subset.push(pool[0].clone());
    }
    subset
}

/// Random masses over `points` summing to one, each a rational with a common
/// denominator of at most 64, with every `required` point getting positive
/// mass. Points that draw zero mass are dropped.
fn random_masses(
    rng: &mut ChaCha8Rng,
    points: &[Time],
    required: &[Time],
) -> Vec<(Time, Rat)> {
    let floor: Vec<u64> = points
        .iter()
        .map(|t| u64::from(required.contains(t)))
        .collect();
    let reserved: u64 = floor.iter().sum();
    let total = rng.random_range(reserved.max(1)..=MAX_DENOMINATOR);
    let mut counts = floor;
    for _ in 0..(total - reserved) {
        let slot = rng.random_range(0..counts.len());
        counts[slot] += 1;
    }
    points
        .iter()
        .cloned()
        .zip(to_fractions(counts, total))
        .filter(|(_, m)| !m.is_zero())
        .collect()
}

/// `count` random masses summing to one (some may be zero), denominator at
/// most 64; at least one cell is positive because every unit lands somewhere.
fn distribute(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rat> {
    let total = rng.random_range(1..=MAX_DENOMINATOR);
    let mut counts = vec![0u64; count];
    for _ in 0..total {
        counts[rng.random_range(0..count)] += 1;
    }
    to_fractions(counts, total)
}

fn to_fractions(counts: Vec<u64>, total: u64) -> Vec<Rat> {
    let denom = crate::rational::rat_int(total as i64);
    counts
        .into_iter()
        .map(|c| crate::rational::rat_int(c as i64) / &denom)
        .collect()
}

/// Generates `count` random laws by cycling the four forced branches, so at
/// least `count / 4` laws land in each. Deterministic given the seed.
pub fn random_laws(seed: u64, count: usize) -> Vec<(String, LatentLaw)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let branches = [
        ForcedBranch::SharedDiscontinuity,
        ForcedBranch::DisjointSupports,
        ForcedBranch::FreeIndependent,
        ForcedBranch::FreeDependent,
    ];
    (0..count)
        .map(|i| {
            let branch = branches[i % branches.len()];
            let law = random_law(&mut rng, branch);
            (format!("random-{i:02}-{}", branch.label()), law)
        })
        .collect()
}
