//! Steady states: Liouvillian kernel extraction, and the closed four-level
//! rate equations of the two-spin Ising model as an independent route.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::lindblad::{bose_einstein, BathSpec, Liouvillian};
use crate::linalg::{self, real, CMatrix, CVector, ONE};
use crate::spinops::{self, HermitianOperator, SpinChainSpec};

/// Singular values below this fraction of the largest span the kernel.
pub const KERNEL_TOL: f64 = 1e-9;

/// Largest superoperator dimension handled by the SVD route in `Auto` mode.
pub const SVD_MAX_DIM: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMethod {
    /// SVD up to [`SVD_MAX_DIM`], trace-constrained LU above.
    #[default]
    Auto,
    /// Right-singular vector(s) of the smallest singular value(s).
    Svd,
    /// Replace the first population row with the trace functional and solve
    /// `L' x = e₀`. Assumes a one-dimensional kernel.
    TraceConstrainedLu,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: CMatrix,
    /// Frobenius norm of `L[ρ]`.
    pub residual: f64,
    pub kernel_dim: usize,
    /// Set when the kernel has more than one dimension; `rho` is then the
    /// projection of the maximally mixed state onto it.
    pub degenerate: bool,
    /// Eigenbasis populations in ascending-energy order.
    pub populations: Vec<f64>,
}

impl SteadyState {
    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = HermitianOperator::new(self.rho.clone()).expect("steady state is Hermitized");
        spinops::spectral_decompose(&h).energies[0]
    }
}

fn normalize(rho: CMatrix) -> Result<CMatrix> {
    let tr = rho.trace();
    if tr.norm() < 1e-300 {
        return Err(Error::SolverFailure("kernel vector has zero trace".into()));
    }
    let rho = rho / tr;
    let rho = (&rho + rho.adjoint()) * real(0.5);
    let tr = rho.trace().re;
    Ok(rho / real(tr))
}

fn kernel_by_svd(l: &Liouvillian) -> Result<(CMatrix, usize)> {
    let d = l.dim;
    let svd = l.matrix.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let largest = svd.singular_values.max();
    let cutoff = KERNEL_TOL * largest;
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] < cutoff)
        .collect();
    match kernel.len() {
        0 => Err(Error::SolverFailure(format!(
            "no singular value below {cutoff:e} (smallest {:e})",
            svd.singular_values.min()
        ))),
        1 => {
            let v: CVector = v_t.row(kernel[0]).adjoint();
            Ok((linalg::unvectorize(&v, d), 1))
        }
        n => {
            let mixed = linalg::vectorize(&(linalg::identity(d) / real(d as f64)));
            let mut proj = CVector::zeros(d * d);
            for &k in &kernel {
                let v: CVector = v_t.row(k).adjoint();
                let coeff = v.dotc(&mixed);
                proj += v * coeff;
            }
            Ok((linalg::unvectorize(&proj, d), n))
        }
    }
}

// Tiny pivots of the trace-constrained LU count the extra kernel dimensions.
// A degenerate kernel is resolved with the resolvent `s(s − L)⁻¹` applied to
// the maximally mixed state, i.e. the long-time limit reached from `I/d`.
fn kernel_by_lu(l: &Liouvillian) -> Result<(CMatrix, usize)> {
    let d = l.dim;
    let mut m = l.matrix.clone();
    let trace = linalg::trace_row(d);
    m.set_row(0, &trace.transpose());
    let lu = m.lu();
    let pivots: Vec<f64> = lu.u().diagonal().iter().map(|p| p.norm()).collect();
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let tiny = pivots.iter().filter(|&&p| p < KERNEL_TOL * largest).count();
    if tiny == 0 {
        let mut rhs = CVector::zeros(d * d);
        rhs[0] = ONE;
        let x = lu
            .solve(&rhs)
            .ok_or_else(|| Error::SolverFailure("trace-constrained Liouvillian is singular".into()))?;
        return Ok((linalg::unvectorize(&x, d), 1));
    }
    let s = real(KERNEL_TOL * largest);
    let shifted = linalg::identity(d * d) * s - &l.matrix;
    let mixed = linalg::vectorize(&(linalg::identity(d) / real(d as f64)));
    let x = shifted
        .lu()
        .solve(&(mixed * s))
        .ok_or_else(|| Error::SolverFailure("shifted Liouvillian is singular".into()))?;
    Ok((linalg::unvectorize(&x, d), tiny + 1))
}

/// Steady state with the default kernel method.
pub fn steady_state_nullspace(l: &Liouvillian) -> Result<SteadyState> {
    steady_state_with(l, KernelMethod::Auto)
}

pub fn steady_state_with(l: &Liouvillian, method: KernelMethod) -> Result<SteadyState> {
    let use_svd = match method {
        KernelMethod::Auto => l.matrix.nrows() <= SVD_MAX_DIM,
        KernelMethod::Svd => true,
        KernelMethod::TraceConstrainedLu => false,
    };
    let (raw, kernel_dim) = if use_svd { kernel_by_svd(l)? } else { kernel_by_lu(l)? };
    let rho = normalize(raw)?;
    let residual = (&l.matrix * linalg::vectorize(&rho)).norm();
    if !residual.is_finite() {
        return Err(Error::SolverFailure("non-finite steady state".into()));
    }
    let h = HermitianOperator::new(l.hamiltonian.clone())?;
    let populations = spinops::spectral_decompose(&h).populations(&rho);
    Ok(SteadyState { rho, residual, kernel_dim, degenerate: kernel_dim > 1, populations })
}

/// Net transition rates `Γ_ij = κω_ij[(1 + n)ρ_ii − n ρ_jj]` of the Ising
/// cycle, named by the bath that drives them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetRates {
    pub gamma_41_l: f64,
    pub gamma_23_l: f64,
    pub gamma_12_r: f64,
    pub gamma_34_r: f64,
    pub cycle_gamma: f64,
}

impl NetRates {
    /// Largest spread between the four link rates.
    pub fn cycle_spread(&self) -> f64 {
        let r = [self.gamma_41_l, self.gamma_23_l, self.gamma_12_r, self.gamma_34_r];
        let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = r.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// Parameters of the two-spin Ising rate equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingRateModel {
    pub field_h: f64,
    pub delta: f64,
    pub kappa: f64,
    pub t_left: f64,
    pub t_right: f64,
}

impl IsingRateModel {
    pub fn new(field_h: f64, delta: f64, kappa: f64, t_left: f64, t_right: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < field_h) {
            return Err(Error::InvalidSpec(format!("rate equations need 0 < delta < h, got delta={delta}, h={field_h}")));
        }
        if !(kappa > 0.0) || !(t_left >= 0.0) || !(t_right >= 0.0) {
            return Err(Error::InvalidSpec("rate equations need kappa > 0 and temperatures >= 0".into()));
        }
        Ok(Self { field_h, delta, kappa, t_left, t_right })
    }

    /// `(κω, n_ω)` for the three distinct links: left ω₄₁, left ω₃₂, right Δ.
    fn link_weights(&self) -> [(f64, f64); 3] {
        let (h, d) = (self.field_h, self.delta);
        let w41 = h + d;
        let w32 = h - d;
        [
            (self.kappa * w41, bose_einstein(w41, self.t_left)),
            (self.kappa * w32, bose_einstein(w32, self.t_left)),
            (self.kappa * d, bose_einstein(d, self.t_right)),
        ]
    }

    /// Net rates for populations `p = (p₁, p₂, p₃, p₄)` of kets `|1⟩..|4⟩`.
    pub fn net_rates(&self, p: &[f64; 4]) -> NetRates {
        let [(a, n41), (b, n32), (c, nr)] = self.link_weights();
        let net = |w: f64, n: f64, upper: f64, lower: f64| w * ((1.0 + n) * upper - n * lower);
        let gamma_41_l = net(a, n41, p[3], p[0]);
        let gamma_23_l = -net(b, n32, p[2], p[1]);
        let gamma_12_r = -net(c, nr, p[1], p[0]);
        let gamma_34_r = -net(c, nr, p[3], p[2]);
        NetRates { gamma_41_l, gamma_23_l, gamma_12_r, gamma_34_r, cycle_gamma: gamma_23_l }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RateSolution {
    /// Populations of `|1⟩..|4⟩`.
    pub populations: [f64; 4],
    pub rates: NetRates,
}

/// Solve the balance equations `ρ̇₁₁ = ρ̇₂₂ = ρ̇₃₃ = 0` with `Σρ_ii = 1`.
pub fn steady_state_rate_equations(
    field_h: f64,
    delta: f64,
    kappa: f64,
    t_left: f64,
    t_right: f64,
) -> Result<RateSolution> {
    let model = IsingRateModel::new(field_h, delta, kappa, t_left, t_right)?;
    let [(a, n41), (b, n32), (c, nr)] = model.link_weights();
    #[rustfmt::skip]
    let m = Matrix4::new(
        -a * n41 - c * nr, c * (1.0 + nr),            0.0,                      a * (1.0 + n41),
        c * nr,            -b * n32 - c * (1.0 + nr), b * (1.0 + n32),          0.0,
        0.0,               b * n32,                   -b * (1.0 + n32) - c * nr, c * (1.0 + nr),
        1.0,               1.0,                       1.0,                      1.0,
    );
    let rhs = Vector4::new(0.0, 0.0, 0.0, 1.0);
    let p = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SolverFailure("singular rate-equation system".into()))?;
    let populations = [p[0], p[1], p[2], p[3]];
    Ok(RateSolution { populations, rates: model.net_rates(&populations) })
}

/// Outcome of solving the Ising model by both routes.
#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub nullspace: SteadyState,
    pub rate_equations: RateSolution,
    pub max_population_deviation: f64,
    /// Largest eigenbasis coherence of the kernel solution.
    pub max_offdiagonal: f64,
}

impl CrossValidation {
    pub const POPULATION_TOL: f64 = 1e-8;
    pub const COHERENCE_TOL: f64 = 1e-10;

    pub fn agrees(&self) -> bool {
        self.max_population_deviation < Self::POPULATION_TOL && self.max_offdiagonal < Self::COHERENCE_TOL
    }
}

/// Build the global Ising Liouvillian for the given parameters.
pub fn ising_global_liouvillian(
    field_h: f64,
    delta: f64,
    kappa: f64,
    t_left: f64,
    t_right: f64,
) -> Result<Liouvillian> {
    let spec = SpinChainSpec::ising(field_h, delta)?;
    let h = spinops::build_hamiltonian(&spec)?;
    let baths = [BathSpec::global(0, t_left, kappa), BathSpec::global(1, t_right, kappa)];
    crate::lindblad::assemble_liouvillian(&h, &baths)
}

/// Solve the Ising model with the kernel solver and the rate equations and
/// compare eigenbasis populations.
pub fn cross_validate(field_h: f64, delta: f64, kappa: f64, t_left: f64, t_right: f64) -> Result<CrossValidation> {
    let rates = steady_state_rate_equations(field_h, delta, kappa, t_left, t_right)?;
    let spec = SpinChainSpec::ising(field_h, delta)?;
    let (_, dec) = spinops::decompose_chain(&spec)?;
    let nullspace = steady_state_nullspace(&ising_global_liouvillian(field_h, delta, kappa, t_left, t_right)?)?;

    let in_basis = dec.to_eigenbasis(&nullspace.rho);
    let mut max_population_deviation = 0.0_f64;
    for k in 1..=4 {
        let col = dec.ket(k).expect("labels exist for 0 < delta < h");
        max_population_deviation = max_population_deviation.max((in_basis[(col, col)].re - rates.populations[k - 1]).abs());
    }
    let mut max_offdiagonal = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                max_offdiagonal = max_offdiagonal.max(in_basis[(i, j)].norm());
            }
        }
    }
    Ok(CrossValidation { nullspace, rate_equations: rates, max_population_deviation, max_offdiagonal })
}
