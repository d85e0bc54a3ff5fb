//! A spin chain between two baths: the left bath on site 0 and the right bath
//! on the last site.

use crate::error::Result;
use crate::lindblad::{assemble_liouvillian, BathSpec, DissipatorStyle, Liouvillian};
use crate::spinops::{self, HermitianOperator, SpinChainSpec, SpinModel};
use crate::steady::{steady_state_nullspace, SteadyState};
use crate::thermo::{heat_currents, HeatCurrents};

#[derive(Debug, Clone)]
pub struct TwoBathModel {
    pub chain: SpinChainSpec,
    pub kappa: f64,
    pub style: DissipatorStyle,
    /// Frequencies at which local baths sample `J(ω)` and `n_ω`, as
    /// `(left, right)`.
    pub local_frequencies: (f64, f64),
    hamiltonian: HermitianOperator,
}

/// Steady state of a model at one pair of temperatures.
#[derive(Debug, Clone)]
pub struct OperatingPoint {
    pub t_left: f64,
    pub t_right: f64,
    pub steady: SteadyState,
    pub currents: HeatCurrents,
}

impl TwoBathModel {
    /// Local frequencies default to the bare spin splittings: `h` on every
    /// spin of the XY chain; `h` on the left and `0` on the right for the
    /// Ising pair, whose right spin carries no field.
    pub fn new(chain: SpinChainSpec, kappa: f64, style: DissipatorStyle) -> Result<Self> {
        let hamiltonian = spinops::build_hamiltonian(&chain)?;
        let local_frequencies = match chain.model {
            SpinModel::IsingZZ => (chain.field_h, 0.0),
            SpinModel::XYTransverse => (chain.field_h, chain.field_h),
        };
        let model = Self { chain, kappa, style, local_frequencies, hamiltonian };
        model.baths(0.0, 0.0).iter().try_for_each(BathSpec::validate)?;
        Ok(model)
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn baths(&self, t_left: f64, t_right: f64) -> [BathSpec; 2] {
        let right = self.chain.right_site();
        match self.style {
            DissipatorStyle::Global => [BathSpec::global(0, t_left, self.kappa), BathSpec::global(right, t_right, self.kappa)],
            DissipatorStyle::Local => [
                BathSpec::local(0, t_left, self.kappa, self.local_frequencies.0),
                BathSpec::local(right, t_right, self.kappa, self.local_frequencies.1),
            ],
        }
    }

    pub fn liouvillian(&self, t_left: f64, t_right: f64) -> Result<Liouvillian> {
        assemble_liouvillian(&self.hamiltonian, &self.baths(t_left, t_right))
    }

    pub fn solve(&self, t_left: f64, t_right: f64) -> Result<OperatingPoint> {
        let l = self.liouvillian(t_left, t_right)?;
        let steady = steady_state_nullspace(&l)?;
        let currents = heat_currents(&l, &steady.rho, &self.hamiltonian)?;
        Ok(OperatingPoint { t_left, t_right, steady, currents })
    }

    /// Net left-to-right steady-state current.
    pub fn current(&self, t_left: f64, t_right: f64) -> Result<f64> {
        Ok(self.solve(t_left, t_right)?.currents.j_net)
    }
}
