//! Dense complex matrix helpers shared by the operator and superoperator code.
//!
//! Vectorization is column-stacking throughout: `vec(X)[i + d*j] = X[(i, j)]`,
//! so that `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Largest elementwise modulus of `m - m†`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Column-stacking vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    // nalgebra storage is column-major, which is exactly column stacking.
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, d: usize) -> CMatrix {
    assert_eq!(v.len(), d * d, "vector length is not a square");
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// Superoperator of `X ↦ A X`.
pub fn left_multiplication(a: &CMatrix) -> CMatrix {
    kron(&identity(a.nrows()), a)
}

/// Superoperator of `X ↦ X B`.
pub fn right_multiplication(b: &CMatrix) -> CMatrix {
    kron(&b.transpose(), &identity(b.nrows()))
}

/// Superoperator of `X ↦ -i[H, X]`.
pub fn commutator_superoperator(h: &CMatrix) -> CMatrix {
    (left_multiplication(h) - right_multiplication(h)) * (-I)
}

/// Superoperator of `X ↦ L X L† - ½{L†L, X}`.
pub fn lindblad_superoperator(l: &CMatrix) -> CMatrix {
    let ldl = l.adjoint() * l;
    let sandwich = kron(&l.map(|z| z.conj()), l);
    sandwich - (left_multiplication(&ldl) + right_multiplication(&ldl)) * real(0.5)
}

/// `L X L† - ½{L†L, X}` evaluated directly in operator form.
pub fn apply_lindblad(l: &CMatrix, x: &CMatrix) -> CMatrix {
    let ld = l.adjoint();
    let ldl = &ld * l;
    l * x * &ld - (&ldl * x + x * &ldl) * real(0.5)
}

/// Row functional `t` with `t · vec(X) = Tr X`.
pub fn trace_row(d: usize) -> CVector {
    let mut t = CVector::zeros(d * d);
    for i in 0..d {
        t[i + d * i] = ONE;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(d: usize, seed: f64) -> CMatrix {
        CMatrix::from_fn(d, d, |i, j| {
            C64::new((seed + (i * 3 + j) as f64).sin(), (seed * 0.7 + (i + 5 * j) as f64).cos())
        })
    }

    #[test]
    fn vectorization_round_trips() {
        let m = sample(3, 0.3);
        let v = vectorize(&m);
        assert_eq!(v[1 + 3 * 2], m[(1, 2)]);
        assert_eq!(unvectorize(&v, 3), m);
    }

    #[test]
    fn superoperators_match_operator_form() {
        let (a, x, b) = (sample(3, 0.1), sample(3, 1.2), sample(3, 2.5));
        let lhs = vectorize(&(&a * &x * &b));
        let rhs = left_multiplication(&a) * right_multiplication(&b) * vectorize(&x);
        assert!((lhs - rhs).norm() < 1e-12);

        let direct = vectorize(&apply_lindblad(&a, &x));
        let superop = lindblad_superoperator(&a) * vectorize(&x);
        assert!((direct - superop).norm() < 1e-12);
    }

    #[test]
    fn trace_row_annihilates_commutator() {
        let h = sample(4, 0.9);
        let h = (&h + h.adjoint()) * real(0.5);
        let t = trace_row(4);
        let row = t.transpose() * commutator_superoperator(&h);
        assert!(row.iter().all(|z| z.norm() < 1e-12));
    }
}
