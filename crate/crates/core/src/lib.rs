//! Exact counting-process calculus for censored survival data on finite
//! grids, together with the Kaplan–Meier estimator, its influence functions,
//! and a machine-checkable oracle for the martingale structure.

pub mod error;
pub mod estimator;
pub mod model;
pub mod montecarlo;
pub mod oracle;
pub mod pathwise;
pub mod population;
pub mod rational;

pub use error::{Error, Result};
pub use estimator::{
    greenwood_variance, influence, km_covariance, km_fit, InfluenceForm, KMEstimate, Sample,
    Variance,
};
pub use model::{LatentLaw, Observation, ObservedLaw, Status, Time, TimeGrid};
pub use montecarlo::{run_experiment, sample_latent, ExperimentConfig, ExperimentResult};
pub use oracle::{run_suite, AtomSpace, SuiteReport};
pub use pathwise::{Integrand, MartingaleKind, MeasurabilityClass, Path};
pub use population::{Curves, Population, StepFunction};
pub use rational::{rat, rat_int, Rat, RatDisplay};
