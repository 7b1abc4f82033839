//! Coulomb-fluid picture: equilibrium measure, large-n expansions and the
//! fits that compare them with exact finite-n data.

mod fit;
mod measure;
mod series;

pub use fit::{decay_fit, exact_values, fit_logd_constants, DecayFit, LogDConstants};
pub use measure::{
    check_equilibrium, density, free_energy, solve_support, EquilibriumMeasure,
};
pub use series::{
    expansion_eval, Coefficient, ExpansionSeries, SeriesKind, SeriesTerm, C0_FREE, C0_TILDE,
    C1_TILDE,
};
