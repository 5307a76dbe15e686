//! Bound states of the screened Kratzer potential in a magnetic field and an
//! Aharonov-Bohm flux tube, with partition functions, thermodynamics and
//! magnetic response.
//!
//! All quantities are in natural units unless [`Constants`] says otherwise.

pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod tables;
pub mod thermo;
pub mod units;
pub mod wavefunction;

pub use error::{Result, SkpError};
pub use model::{
    cutoffs, dimensionless_map, energy_2d, energy_2d_real_m, energy_3d, energy_db,
    energy_derivatives, greene_aldrich, potential_eval, quantization_residual, DimensionlessSet,
    EnergyDerivatives, FieldConfig, PotentialParams, QuantumState, SpectrumCutoffs,
};
pub use specfun::{erf_complex, erf_real, erfi, gauss_2f1_terminating, ComplexValue};
pub use units::Constants;
pub use wavefunction::{normalized_state, RadialSolution};
pub use tables::{reference_table, table_alpha, ReferenceCell, TABLE_COLUMNS};
pub use oracle::{
    brute_force_nmax, brute_force_partition, effective_potential, fd_eigenvalues, fd_richardson,
    FdGrid, FdSpectrum,
};
pub use thermo::{
    magnetization_zero_t, partition, partition_closed, partition_direct, partition_quadrature,
    susceptibility_zero_t, thermo_point, Convention, ErfTerms, IntegralParams, ThermoPoint, ZMethod,
};
