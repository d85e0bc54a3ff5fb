//! Global (eigenbasis) and local (bare single-spin) dissipators and the full
//! Liouvillian superoperator.
//!
//! All baths couple through `σˣ` of one spin and have an ohmic spectral
//! function `J(ω) = κω`. Superoperators use column-stacking vectorization
//! (see [`crate::linalg`]).

use nalgebra::Schur;

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, CVector, C64};
use crate::spinops::{self, Axis, HermitianOperator, SpectralDecomposition};

/// Relative tolerance for grouping equal Bohr frequencies.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Jump operators whose entries all fall below this are dropped.
const NEGLIGIBLE_ENTRY: f64 = 1e-12;

/// Above this ratio `ω/T` the occupation is flushed to zero.
const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DissipatorStyle {
    /// Strong-coupling dissipator built from eigenstates of the full Hamiltonian.
    Global,
    /// Phenomenological dissipator built from bare `σ±` of the bath's spin.
    Local,
}

/// One thermal reservoir attached to a single spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub site: usize,
    /// `k_B T` in energy units.
    pub temperature: f64,
    pub kappa: f64,
    pub style: DissipatorStyle,
    /// Frequency at which a local bath samples `J(ω)` and `n_ω`. Ignored by
    /// global baths.
    pub local_frequency: f64,
}

impl BathSpec {
    pub fn global(site: usize, temperature: f64, kappa: f64) -> Self {
        Self { site, temperature, kappa, style: DissipatorStyle::Global, local_frequency: 0.0 }
    }

    pub fn local(site: usize, temperature: f64, kappa: f64, local_frequency: f64) -> Self {
        Self { site, temperature, kappa, style: DissipatorStyle::Local, local_frequency }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::InvalidSpec(format!("bath temperature must be >= 0, got {}", self.temperature)));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidSpec(format!("bath kappa must be > 0, got {}", self.kappa)));
        }
        if self.style == DissipatorStyle::Local && !(self.local_frequency.is_finite() && self.local_frequency >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "local bath frequency must be >= 0, got {}",
                self.local_frequency
            )));
        }
        Ok(())
    }

    /// Ohmic spectral function `κω`.
    pub fn spectral(&self, frequency: f64) -> f64 {
        self.kappa * frequency
    }
}

/// Bose–Einstein occupation `1 / (exp(ω/T) − 1)`.
///
/// Exactly zero at `T = 0` and for `ω/T > 700`.
///
/// # Panics
///
/// If `frequency <= 0`.
pub fn bose_einstein(frequency: f64, temperature: f64) -> f64 {
    assert!(frequency > 0.0, "Bose-Einstein occupation needs a positive frequency, got {frequency}");
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = frequency / temperature;
    if x > MAX_EXPONENT {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Eigenbasis component `A(ω)` of a coupling operator, in the computational
/// basis.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub frequency: f64,
    pub matrix: CMatrix,
}

/// One term `rate · (L ρ L† − ½{L†L, ρ})`.
#[derive(Debug, Clone)]
pub struct Channel {
    pub rate: f64,
    pub operator: CMatrix,
}

/// The dissipator contributed by a single bath, kept in operator form.
#[derive(Debug, Clone)]
pub struct Dissipator {
    pub bath: BathSpec,
    pub channels: Vec<Channel>,
}

impl Dissipator {
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
        for ch in &self.channels {
            out += linalg::apply_lindblad(&ch.operator, rho) * real(ch.rate);
        }
        out
    }

    pub fn superoperator(&self, dim: usize) -> CMatrix {
        let mut out = CMatrix::zeros(dim * dim, dim * dim);
        self.accumulate(&mut out);
        out
    }

    fn accumulate(&self, target: &mut CMatrix) {
        for ch in &self.channels {
            add_lindblad_term(target, ch.rate, &ch.operator);
        }
    }
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if z.norm() != 0.0 {
                out.push((i, j, z));
            }
        }
    }
    out
}

/// Adds `rate · (L̄ ⊗ L − ½ I ⊗ L†L − ½ (L†L)ᵀ ⊗ I)` in place, touching only
/// entries generated by nonzeros of `L`.
fn add_lindblad_term(target: &mut CMatrix, rate: f64, l: &CMatrix) {
    let d = l.nrows();
    let nz = nonzeros(l);
    let rate_c = real(rate);
    for &(i, k, lik) in &nz {
        for &(j, m, ljm) in &nz {
            target[(i + d * j, k + d * m)] += rate_c * lik * ljm.conj();
        }
    }
    let ldl = l.adjoint() * l;
    let half = real(0.5 * rate);
    for (a, b, z) in nonzeros(&ldl) {
        for c in 0..d {
            // I ⊗ K: row a + d c, column b + d c.
            target[(a + d * c, b + d * c)] -= half * z;
            // Kᵀ ⊗ I: row c + d b, column c + d a.
            target[(c + d * b, c + d * a)] -= half * z;
        }
    }
}

/// Jump operators `A(ω) = Σ_{ε_j − ε_i = ω} |i⟩⟨i| X |j⟩⟨j|`, one per distinct
/// positive Bohr frequency. Frequencies closer than
/// `degeneracy_tol · max|ε|` are merged; vanishing operators are dropped.
pub fn global_jump_operators(
    decomp: &SpectralDecomposition,
    coupling_op: &HermitianOperator,
    degeneracy_tol: f64,
) -> Result<Vec<JumpOperator>> {
    let d = decomp.dim();
    if coupling_op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: coupling_op.dim() });
    }
    let energies = &decomp.energies;
    let scale = energies.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    let tol = degeneracy_tol * if scale > 0.0 { scale } else { 1.0 };
    let x_eig = decomp.to_eigenbasis(coupling_op.matrix());

    // (gap, i, j) with ε_j − ε_i > tol, sorted by gap.
    let mut transitions: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let gap = energies[j] - energies[i];
            if gap > tol {
                transitions.push((gap, i, j));
            }
        }
    }
    transitions.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut jumps = Vec::new();
    let mut start = 0;
    while start < transitions.len() {
        let mut end = start + 1;
        while end < transitions.len() && transitions[end].0 - transitions[end - 1].0 <= tol {
            end += 1;
        }
        let group = &transitions[start..end];
        let frequency = group.iter().map(|t| t.0).sum::<f64>() / group.len() as f64;
        let mut a_eig = CMatrix::zeros(d, d);
        for &(_, i, j) in group {
            a_eig[(i, j)] = x_eig[(i, j)];
        }
        if linalg::max_abs(&a_eig) >= NEGLIGIBLE_ENTRY {
            let mut matrix = decomp.from_eigenbasis(&a_eig);
            // Entries that are zero up to rounding in the basis change.
            matrix.iter_mut().for_each(|z| {
                if z.re.abs() < 1e-15 {
                    z.re = 0.0;
                }
                if z.im.abs() < 1e-15 {
                    z.im = 0.0;
                }
            });
            jumps.push(JumpOperator { frequency, matrix });
        }
        start = end;
    }
    Ok(jumps)
}

/// `Σ_ω J(ω)(1 + n_ω) D[A(ω)] + J(ω) n_ω D[A†(ω)]` for one bath.
pub fn global_dissipator(jumps: &[JumpOperator], bath: &BathSpec) -> Result<Dissipator> {
    bath.validate()?;
    if bath.style != DissipatorStyle::Global {
        return Err(Error::InvalidSpec("global_dissipator needs a Global bath".into()));
    }
    let mut channels = Vec::with_capacity(2 * jumps.len());
    for jump in jumps {
        let weight = bath.spectral(jump.frequency);
        let n = bose_einstein(jump.frequency, bath.temperature);
        channels.push(Channel { rate: weight * (1.0 + n), operator: jump.matrix.clone() });
        if n > 0.0 {
            channels.push(Channel { rate: weight * n, operator: jump.matrix.adjoint() });
        }
    }
    Ok(Dissipator { bath: *bath, channels })
}

/// Decay and excitation rates of a local bath at its own frequency `ν`.
///
/// At `ν = 0` the continuous limit is taken: `κν(1 + n_ν) → κT` and
/// `κν n_ν → κT`.
pub fn local_rates(bath: &BathSpec) -> (f64, f64) {
    let nu = bath.local_frequency;
    if nu == 0.0 {
        let r = bath.kappa * bath.temperature;
        (r, r)
    } else {
        let n = bose_einstein(nu, bath.temperature);
        let w = bath.spectral(nu);
        (w * (1.0 + n), w * n)
    }
}

/// Phenomenological dissipator with bare `σ⁻` / `σ⁺` on `site`.
pub fn local_dissipator(site: usize, n_spins: usize, bath: &BathSpec) -> Result<Dissipator> {
    bath.validate()?;
    if bath.style != DissipatorStyle::Local {
        return Err(Error::InvalidSpec("local_dissipator needs a Local bath".into()));
    }
    let lower = spinops::embed_matrix(&spinops::sigma_minus(), site, n_spins)?;
    let raise = spinops::embed_matrix(&spinops::sigma_plus(), site, n_spins)?;
    let (down, up) = local_rates(bath);
    let channels = [(down, lower), (up, raise)]
        .into_iter()
        .filter(|(rate, _)| *rate > 0.0)
        .map(|(rate, operator)| Channel { rate, operator })
        .collect();
    Ok(Dissipator { bath: *bath, channels })
}

/// The generator `L[ρ] = −i[H, ρ] + Σ_b D_b[ρ]` as a `d² × d²` matrix, with
/// each bath's dissipator retained separately.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub dim: usize,
    pub matrix: CMatrix,
    pub hamiltonian: CMatrix,
    pub parts: Vec<Dissipator>,
}

impl Liouvillian {
    /// Rebuild the superoperator from a Hamiltonian and per-bath dissipators.
    pub fn from_parts(hamiltonian: &HermitianOperator, parts: Vec<Dissipator>) -> Self {
        let mut matrix = linalg::commutator_superoperator(hamiltonian.matrix());
        for part in &parts {
            part.accumulate(&mut matrix);
        }
        Self { dim: hamiltonian.dim(), matrix, hamiltonian: hamiltonian.matrix().clone(), parts }
    }

    /// `L[ρ]` evaluated in operator form.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let h = &self.hamiltonian;
        let mut out = (h * rho - rho * h) * (-linalg::I);
        for part in &self.parts {
            out += part.apply(rho);
        }
        out
    }

    /// `L[ρ]` via the superoperator matrix.
    pub fn apply_superoperator(&self, rho: &CMatrix) -> CMatrix {
        linalg::unvectorize(&(&self.matrix * linalg::vectorize(rho)), self.dim)
    }

    pub fn hamiltonian_part(&self) -> CMatrix {
        linalg::commutator_superoperator(&self.hamiltonian)
    }

    pub fn part_superoperator(&self, index: usize) -> CMatrix {
        self.parts[index].superoperator(self.dim)
    }

    /// Largest modulus of `t · L`, where `t` is the vectorized trace.
    pub fn trace_annihilation_error(&self) -> f64 {
        let t: CVector = linalg::trace_row(self.dim);
        (t.transpose() * &self.matrix).iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// All eigenvalues of the superoperator.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        Schur::new(self.matrix.clone())
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .ok_or_else(|| Error::SolverFailure("Schur decomposition did not converge".into()))
    }
}

/// Assemble the Liouvillian for `h` with the given baths. Global baths couple
/// through `σˣ` of their site; local baths through `σ±`.
pub fn assemble_liouvillian(h: &HermitianOperator, baths: &[BathSpec]) -> Result<Liouvillian> {
    let d = h.dim();
    let n_spins = h
        .n_spins()
        .ok_or_else(|| Error::InvalidSpec(format!("Hilbert dimension {d} is not a power of two")))?
        as usize;
    if baths.is_empty() {
        return Err(Error::InvalidSpec("at least one bath is required".into()));
    }
    let needs_spectrum = baths.iter().any(|b| b.style == DissipatorStyle::Global);
    let decomp = needs_spectrum.then(|| spinops::spectral_decompose(h));

    let mut parts = Vec::with_capacity(baths.len());
    for bath in baths {
        if bath.site >= n_spins {
            return Err(Error::SiteOutOfRange { site: bath.site, n_spins });
        }
        let part = match bath.style {
            DissipatorStyle::Global => {
                let coupling = spinops::embed(&spinops::pauli(Axis::X), bath.site, n_spins)?;
                let jumps = global_jump_operators(decomp.as_ref().expect("spectrum"), &coupling, DEGENERACY_TOL)?;
                global_dissipator(&jumps, bath)?
            }
            DissipatorStyle::Local => local_dissipator(bath.site, n_spins, bath)?,
        };
        parts.push(part);
    }

    Ok(Liouvillian::from_parts(h, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinops::{decompose_chain, SpinChainSpec};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn ising(delta: f64) -> (HermitianOperator, SpectralDecomposition) {
        decompose_chain(&SpinChainSpec::ising(1.0, delta).unwrap()).unwrap()
    }

    fn sigma_x(site: usize, n: usize) -> HermitianOperator {
        spinops::embed(&spinops::pauli(Axis::X), site, n).unwrap()
    }

    /// `|a⟩⟨b|` between Ising kets in the computational basis.
    fn ket_bra(dec: &SpectralDecomposition, a: usize, b: usize) -> CMatrix {
        let va = dec.eigenvectors.column(dec.ket(a).unwrap()).into_owned();
        let vb = dec.eigenvectors.column(dec.ket(b).unwrap()).into_owned();
        va * vb.adjoint()
    }

    #[test]
    fn bose_einstein_values() {
        assert_eq!(bose_einstein(1.0, 0.0), 0.0);
        assert_relative_eq!(bose_einstein(1.0, 1.0 / std::f64::consts::LN_2), 1.0, max_relative = 1e-14);
        // 1/(e^{0.1} − 1), evaluated with 30-digit arithmetic.
        assert_relative_eq!(bose_einstein(1.0, 10.0), 9.508331944775044, max_relative = 1e-13);
        assert_eq!(bose_einstein(701.0, 1.0), 0.0);
        // Small-ratio branch: n ≈ T/ω − 1/2.
        assert_relative_eq!(bose_einstein(1e-12, 1.0), 1e12 - 0.5, max_relative = 1e-12);
    }

    #[test]
    #[should_panic]
    fn bose_einstein_rejects_zero_frequency() {
        bose_einstein(0.0, 1.0);
    }

    #[test]
    fn left_jump_operators_match_ising_transitions() {
        let (_, dec) = ising(0.5);
        let jumps = global_jump_operators(&dec, &sigma_x(0, 2), DEGENERACY_TOL).unwrap();
        assert_eq!(jumps.len(), 2);
        assert_abs_diff_eq!(jumps[0].frequency, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(jumps[1].frequency, 1.5, epsilon = 1e-14);
        assert_eq!(jumps[0].matrix, ket_bra(&dec, 2, 3));
        assert_eq!(jumps[1].matrix, ket_bra(&dec, 1, 4));
    }

    #[test]
    fn right_jump_operator_groups_degenerate_gaps() {
        let (_, dec) = ising(0.5);
        let jumps = global_jump_operators(&dec, &sigma_x(1, 2), DEGENERACY_TOL).unwrap();
        assert_eq!(jumps.len(), 1);
        assert_abs_diff_eq!(jumps[0].frequency, 0.5, epsilon = 1e-14);
        assert_eq!(jumps[0].matrix, ket_bra(&dec, 3, 4) + ket_bra(&dec, 1, 2));
        // Nothing at ω = h: double flips are forbidden.
        assert!(jumps.iter().all(|j| (j.frequency - 1.0).abs() > 1e-6));
    }

    #[test]
    fn jump_operators_are_complete() {
        for spec in [SpinChainSpec::ising(1.0, 0.3).unwrap(), SpinChainSpec::xy(3, 1.0, 0.8).unwrap()] {
            let (_, dec) = decompose_chain(&spec).unwrap();
            for site in [0, spec.right_site()] {
                let x = sigma_x(site, spec.n_spins);
                let x_eig = dec.to_eigenbasis(x.matrix());
                let mut sum = CMatrix::zeros(spec.dim(), spec.dim());
                for j in global_jump_operators(&dec, &x, DEGENERACY_TOL).unwrap() {
                    let a = dec.to_eigenbasis(&j.matrix);
                    sum += &a + a.adjoint();
                }
                let scale = dec.energies.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
                for i in 0..spec.dim() {
                    for k in 0..spec.dim() {
                        if (dec.energies[i] - dec.energies[k]).abs() <= DEGENERACY_TOL * scale {
                            sum[(i, k)] += x_eig[(i, k)];
                        }
                    }
                }
                assert!(linalg::max_abs(&(sum - x_eig)) < 1e-10);
            }
        }
    }

    #[test]
    fn zero_temperature_global_bath_only_decays() {
        let (_, dec) = ising(0.5);
        let jumps = global_jump_operators(&dec, &sigma_x(0, 2), DEGENERACY_TOL).unwrap();
        let diss = global_dissipator(&jumps, &BathSpec::global(0, 0.0, 1.0)).unwrap();
        assert_eq!(diss.channels.len(), 2);
        assert_abs_diff_eq!(diss.channels[1].rate, 1.5, epsilon = 1e-14);

        // ρ = |4⟩⟨4| decays into |1⟩ at rate J(ω₄₁) = h + Δ.
        let rho = ket_bra(&dec, 4, 4);
        let drho = diss.apply(&rho);
        let p = dec.populations(&drho);
        assert_abs_diff_eq!(p[dec.ket(1).unwrap()], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p[dec.ket(4).unwrap()], -1.5, epsilon = 1e-14);
    }

    #[test]
    fn local_dissipator_rates() {
        let (down, up) = local_rates(&BathSpec::local(0, 0.0, 1.0, 1.0));
        assert_eq!((down, up), (1.0, 0.0));

        let (down, up) = local_rates(&BathSpec::local(1, 2.0, 1.0, 0.0));
        assert_eq!((down, up), (2.0, 2.0));
        // Numerical limit check at ω = 1e-8.
        let (d_small, u_small) = local_rates(&BathSpec::local(1, 2.0, 1.0, 1e-8));
        assert_relative_eq!(d_small, 2.0, max_relative = 1e-7);
        assert_relative_eq!(u_small, 2.0, max_relative = 1e-7);

        let zero = local_dissipator(1, 2, &BathSpec::local(1, 0.0, 1.0, 0.0)).unwrap();
        assert!(zero.channels.is_empty());
        assert_eq!(linalg::max_abs(&zero.superoperator(4)), 0.0);
    }

    #[test]
    fn superoperator_matches_operator_form() {
        let (h, _) = ising(0.4);
        let baths = [BathSpec::global(0, 1.3, 1.0), BathSpec::local(1, 0.7, 0.5, 0.0)];
        let liou = assemble_liouvillian(&h, &baths).unwrap();
        let rho = CMatrix::from_fn(4, 4, |i, j| C64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.05));
        let diff = liou.apply(&rho) - liou.apply_superoperator(&rho);
        assert!(linalg::max_abs(&diff) < 1e-12);
        let mut from_parts = liou.hamiltonian_part();
        for k in 0..liou.parts.len() {
            from_parts += liou.part_superoperator(k);
        }
        assert!(linalg::max_abs(&(from_parts - &liou.matrix)) < 1e-13);
    }

    #[test]
    fn closed_system_spectrum_is_bohr_frequencies() {
        let (h, dec) = ising(0.5);
        // κ → 0 leaves the commutator part only.
        let liou = assemble_liouvillian(&h, &[BathSpec::global(0, 1.0, 1e-300)]).unwrap();
        let eigs = liou.eigenvalues().unwrap();
        for z in &eigs {
            assert!(z.re.abs() < 1e-12);
            let matches_gap = (0..4).any(|m| (0..4).any(|n| (z.im.abs() - (dec.energies[m] - dec.energies[n]).abs()).abs() < 1e-12));
            assert!(matches_gap, "eigenvalue {z} is not ±iω");
        }
    }

    #[test]
    fn assembled_liouvillian_has_one_dimensional_kernel() {
        let (h, _) = ising(0.5);
        let liou = assemble_liouvillian(&h, &[BathSpec::global(0, 1.0, 1.0), BathSpec::global(1, 0.5, 1.0)]).unwrap();
        assert_eq!(liou.matrix.nrows(), 16);
        assert!(liou.trace_annihilation_error() < 1e-12);
        let sv = liou.matrix.clone().singular_values();
        let max = sv.max();
        let null = sv.iter().filter(|&&s| s < 1e-9 * max).count();
        assert_eq!(null, 1);
    }

    #[test]
    fn global_dissipator_keeps_eigenbasis_diagonal_states_diagonal() {
        let (h, dec) = ising(0.6);
        let liou = assemble_liouvillian(&h, &[BathSpec::global(0, 2.0, 1.0), BathSpec::global(1, 0.3, 1.0)]).unwrap();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[real(0.1), real(0.2), real(0.3), real(0.4)]));
        let rho = dec.from_eigenbasis(&diag);
        let out = dec.to_eigenbasis(&liou.apply(&rho));
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(out[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn assembly_errors() {
        let (h, _) = ising(0.5);
        assert!(matches!(assemble_liouvillian(&h, &[]), Err(Error::InvalidSpec(_))));
        assert!(matches!(
            assemble_liouvillian(&h, &[BathSpec::global(2, 1.0, 1.0)]),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(assemble_liouvillian(&h, &[BathSpec::global(0, -1.0, 1.0)]).is_err());
        let three = HermitianOperator::new(linalg::identity(3)).unwrap();
        assert!(assemble_liouvillian(&three, &[BathSpec::global(0, 1.0, 1.0)]).is_err());
    }
}
