//! Spin operators, chain Hamiltonians and their spectral decompositions.
//!
//! Basis convention: `|↑⟩ = (1, 0)ᵀ`, `|↓⟩ = (0, 1)ᵀ`, and site 0 (the left
//! spin) is the leftmost, most significant tensor factor. For two spins the
//! computational basis is therefore `{↑↑, ↑↓, ↓↑, ↓↓}`.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg::{self, real, CMatrix, C64, I, ONE, ZERO};

/// Absolute tolerance of the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A dense complex matrix equal to its own conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let deviation = linalg::hermiticity_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Number of spins when the dimension is a power of two.
    pub fn n_spins(&self) -> Option<u32> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros())
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.matrix[(i, j)] == ZERO))
    }

    fn scaled_sum(terms: &[(f64, &HermitianOperator)], dim: usize) -> Self {
        let mut acc = CMatrix::zeros(dim, dim);
        for (c, op) in terms {
            acc += &op.matrix * real(*c);
        }
        Self { matrix: acc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The 2×2 Pauli matrix along `axis`.
pub fn pauli(axis: Axis) -> HermitianOperator {
    let m = match axis {
        Axis::X => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Axis::Z => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    };
    HermitianOperator { matrix: m }
}

/// Single-spin lowering operator `σ⁻ = |↓⟩⟨↑|`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

/// Single-spin raising operator `σ⁺ = |↑⟩⟨↓|`.
pub fn sigma_plus() -> CMatrix {
    sigma_minus().transpose()
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` on `site`, for arbitrary (non-Hermitian)
/// single-site matrices.
pub fn embed_matrix(op: &CMatrix, site: usize, n_spins: usize) -> Result<CMatrix> {
    if site >= n_spins {
        return Err(Error::SiteOutOfRange { site, n_spins });
    }
    if op.nrows() != 2 || op.ncols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: op.nrows() });
    }
    let left = linalg::identity(1 << site);
    let right = linalg::identity(1 << (n_spins - site - 1));
    Ok(linalg::kron(&linalg::kron(&left, op), &right))
}

pub fn embed(op: &HermitianOperator, site: usize, n_spins: usize) -> Result<HermitianOperator> {
    embed_matrix(&op.matrix, site, n_spins).map(|matrix| HermitianOperator { matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinModel {
    /// `(h/2) σᶻ_L + (Δ/2) σᶻ_L σᶻ_R`; field on the left spin only.
    IsingZZ,
    /// Open chain, `(h/2) Σ σᶻ_i + (Δ/2) Σ (σˣ_i σˣ_{i+1} + σʸ_i σʸ_{i+1})`.
    XYTransverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainSpec {
    pub n_spins: usize,
    pub field_h: f64,
    pub coupling_delta: f64,
    pub model: SpinModel,
}

/// Largest chain the dense machinery accepts.
pub const MAX_SPINS: usize = 8;

impl SpinChainSpec {
    pub fn new(model: SpinModel, n_spins: usize, field_h: f64, coupling_delta: f64) -> Result<Self> {
        let spec = Self { n_spins, field_h, coupling_delta, model };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ising(field_h: f64, coupling_delta: f64) -> Result<Self> {
        Self::new(SpinModel::IsingZZ, 2, field_h, coupling_delta)
    }

    pub fn xy(n_spins: usize, field_h: f64, coupling_delta: f64) -> Result<Self> {
        Self::new(SpinModel::XYTransverse, n_spins, field_h, coupling_delta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 || self.n_spins > MAX_SPINS {
            return Err(Error::InvalidSpec(format!(
                "n_spins must lie in 2..={MAX_SPINS}, got {}",
                self.n_spins
            )));
        }
        if self.model == SpinModel::IsingZZ && self.n_spins != 2 {
            return Err(Error::InvalidSpec("the Ising model is defined for exactly two spins".into()));
        }
        if !(self.field_h.is_finite() && self.field_h > 0.0) {
            return Err(Error::InvalidSpec(format!("field_h must be positive, got {}", self.field_h)));
        }
        if !(self.coupling_delta.is_finite() && self.coupling_delta >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "coupling_delta must be non-negative, got {}",
                self.coupling_delta
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_spins
    }

    pub fn right_site(&self) -> usize {
        self.n_spins - 1
    }

    /// True in the regime `0 < Δ < h` where the four Ising eigenstates carry
    /// the `|1⟩..|4⟩` labels.
    pub fn has_ising_labels(&self) -> bool {
        self.model == SpinModel::IsingZZ && self.coupling_delta > 0.0 && self.coupling_delta < self.field_h
    }
}

pub fn build_hamiltonian(spec: &SpinChainSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    let n = spec.n_spins;
    let (h, delta) = (spec.field_h, spec.coupling_delta);
    let z = |site| embed(&pauli(Axis::Z), site, n);
    match spec.model {
        SpinModel::IsingZZ => {
            let (zl, zr) = (z(0)?, z(1)?);
            let zz = HermitianOperator { matrix: zl.matrix() * zr.matrix() };
            Ok(HermitianOperator::scaled_sum(&[(h / 2.0, &zl), (delta / 2.0, &zz)], spec.dim()))
        }
        SpinModel::XYTransverse => {
            let d = spec.dim();
            let mut acc = CMatrix::zeros(d, d);
            for site in 0..n {
                acc += z(site)?.matrix() * real(h / 2.0);
            }
            for site in 0..n - 1 {
                for axis in [Axis::X, Axis::Y] {
                    let a = embed(&pauli(axis), site, n)?;
                    let b = embed(&pauli(axis), site + 1, n)?;
                    acc += a.matrix() * b.matrix() * real(delta / 2.0);
                }
            }
            HermitianOperator::new(acc)
        }
    }
}

/// Eigenvalues in ascending order with unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub energies: Vec<f64>,
    pub eigenvectors: CMatrix,
    /// `labels[k - 1]` is the column holding the two-spin Ising ket `|k⟩`.
    /// Only present in the `0 < Δ < h` regime.
    pub labels: Option<[usize; 4]>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Column index of Ising ket `|k⟩`, `k` in `1..=4`.
    pub fn ket(&self, k: usize) -> Option<usize> {
        let labels = self.labels?;
        (1..=4).contains(&k).then(|| labels[k - 1])
    }

    /// `ε_m − ε_n` between Ising kets `|m⟩` and `|n⟩`.
    pub fn ket_gap(&self, m: usize, n: usize) -> Option<f64> {
        Some(self.energies[self.ket(m)?] - self.energies[self.ket(n)?])
    }

    /// Transform an operator into the eigenbasis: `V† A V`.
    pub fn to_eigenbasis(&self, op: &CMatrix) -> CMatrix {
        self.eigenvectors.adjoint() * op * &self.eigenvectors
    }

    pub fn from_eigenbasis(&self, op: &CMatrix) -> CMatrix {
        &self.eigenvectors * op * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.dim(),
            self.energies.iter().map(|&e| real(e)),
        ));
        self.from_eigenbasis(&diag)
    }

    /// Populations `⟨v_k|ρ|v_k⟩` in ascending-energy order.
    pub fn populations(&self, rho: &CMatrix) -> Vec<f64> {
        let in_basis = self.to_eigenbasis(rho);
        (0..self.dim()).map(|k| in_basis[(k, k)].re).collect()
    }
}

/// First basis index whose amplitude is within rounding of the largest one.
fn dominant_index(v: nalgebra::DVectorView<'_, C64>) -> usize {
    let max = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    v.iter().position(|z| z.norm() >= max - 1e-9).unwrap_or(0)
}

/// Diagonalize `h`. Energies ascend; exactly degenerate (within `1e-12`
/// relative) levels are ordered by the dominant basis index of their
/// eigenvector. Each eigenvector is phased so its dominant component is real
/// and positive.
pub fn spectral_decompose(h: &HermitianOperator) -> SpectralDecomposition {
    let d = h.dim();
    let (values, vectors): (Vec<f64>, CMatrix) = if h.is_diagonal() {
        ((0..d).map(|i| h.matrix()[(i, i)].re).collect(), linalg::identity(d))
    } else {
        let eig = SymmetricEigen::new(h.matrix().clone());
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let scale = values.iter().fold(1.0_f64, |m, e| m.max(e.abs()));
    let tie_tol = 1e-12 * scale;
    let dominant: Vec<usize> = (0..d).map(|k| dominant_index(vectors.column(k))).collect();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    // Within runs of equal energies, order by dominant basis index.
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && values[order[end]] - values[order[end - 1]] <= tie_tol {
            end += 1;
        }
        order[start..end].sort_by_key(|&k| dominant[k]);
        start = end;
    }

    let energies: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let v = vectors.column(k);
        let pivot = v[dominant[k]];
        let phase = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { ONE };
        eigenvectors.set_column(col, &(v * phase));
    }
    SpectralDecomposition { energies, eigenvectors, labels: None }
}

/// Build and diagonalize the chain Hamiltonian, attaching the Ising ket
/// labels when `0 < Δ < h`.
pub fn decompose_chain(spec: &SpinChainSpec) -> Result<(HermitianOperator, SpectralDecomposition)> {
    let h = build_hamiltonian(spec)?;
    let mut decomp = spectral_decompose(&h);
    if spec.has_ising_labels() {
        // Ascending energies (−h−Δ, −h+Δ, h−Δ, h+Δ)/2 are |1⟩..|4⟩.
        decomp.labels = Some([0, 1, 2, 3]);
    }
    Ok((h, decomp))
}
