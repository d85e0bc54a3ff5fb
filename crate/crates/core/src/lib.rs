//! Steady-state heat transport through strongly coupled spins.
//!
//! A spin chain ([`spinops`]) is attached to two thermal baths through either
//! the strong-coupling (global) dissipator, built from jump operators between
//! eigenstates of the full Hamiltonian, or the phenomenological (local) one
//! built from bare single-spin ladder operators ([`lindblad`]). Steady states
//! come from the Liouvillian kernel, with the closed Ising rate equations as
//! an independent check ([`steady`]); [`thermo`] turns them into heat
//! currents and rectification figures, and [`experiments`] sweeps parameters
//! into CSV datasets.
//!
//! Units: `ħ = k_B = 1`; energies are usually quoted in units of the field `h`.

pub mod error;
pub mod experiments;
pub mod lindblad;
pub mod linalg;
pub mod model;
pub mod parallel;
pub mod spinops;
pub mod steady;
pub mod thermo;

pub use error::{Error, Result};
pub use lindblad::{assemble_liouvillian, BathSpec, DissipatorStyle, JumpOperator, Liouvillian};
pub use model::{OperatingPoint, TwoBathModel};
pub use parallel::Execution;
pub use spinops::{HermitianOperator, SpectralDecomposition, SpinChainSpec, SpinModel};
pub use steady::{NetRates, SteadyState};
pub use thermo::{HeatCurrents, RectificationReport};
