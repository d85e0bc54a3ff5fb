use proptest::prelude::*;

use qdiode_core::lindblad::Liouvillian;
use qdiode_core::linalg::{self, CMatrix, C64};
use qdiode_core::spinops::{self, Axis};
use qdiode_core::steady::steady_state_rate_equations;
use qdiode_core::thermo::current_from_cycle;
use qdiode_core::{DissipatorStyle, SpinChainSpec, TwoBathModel};

fn matrix_from(values: &[f64], d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| C64::new(values[(i * d + j) % values.len()], values[(j * d + i + 1) % values.len()]))
}

fn style(local: bool) -> DissipatorStyle {
    if local {
        DissipatorStyle::Local
    } else {
        DissipatorStyle::Global
    }
}

fn liouvillian(xy: bool, n: usize, h: f64, d: f64, kappa: f64, local: bool, tl: f64, tr: f64) -> Liouvillian {
    let chain = if xy { SpinChainSpec::xy(n, h, d) } else { SpinChainSpec::ising(h, d) }.unwrap();
    TwoBathModel::new(chain, kappa, style(local)).unwrap().liouvillian(tl, tr).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_hamiltonians_reconstruct(n in 2usize..=4, h in 0.1f64..3.0, d in 0.0f64..3.0) {
        let (ham, dec) = spinops::decompose_chain(&SpinChainSpec::xy(n, h, d).unwrap()).unwrap();
        prop_assert!(linalg::max_abs(&(dec.reconstruct() - ham.matrix())) < 1e-10);
        let eye = linalg::identity(ham.dim());
        prop_assert!(linalg::max_abs(&(dec.eigenvectors.adjoint() * &dec.eigenvectors - eye)) < 1e-10);
    }

    #[test]
    fn disjoint_embeddings_commute(n in 2usize..=4, a in 0usize..4, b in 0usize..4, ax in 0usize..3, bx in 0usize..3) {
        prop_assume!(a < n && b < n && a != b);
        let axes = [Axis::X, Axis::Y, Axis::Z];
        let p = spinops::embed(&spinops::pauli(axes[ax]), a, n).unwrap();
        let q = spinops::embed(&spinops::pauli(axes[bx]), b, n).unwrap();
        let comm = p.matrix() * q.matrix() - q.matrix() * p.matrix();
        prop_assert_eq!(linalg::max_abs(&comm), 0.0);
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity(
        xy in any::<bool>(), n in 2usize..=3, local in any::<bool>(),
        h in 0.5f64..2.0, frac in 0.05f64..0.95, kappa in 0.1f64..3.0,
        tl in 0.0f64..10.0, tr in 0.0f64..10.0,
        values in proptest::collection::vec(-1.0f64..1.0, 16..64),
    ) {
        let l = liouvillian(xy, n, h, frac * h, kappa, local, tl, tr);
        let x = matrix_from(&values, l.dim);
        let herm = (&x + x.adjoint()) * linalg::real(0.5);
        prop_assert!(l.apply(&herm).trace().norm() < 1e-10);
        prop_assert!(linalg::max_abs(&(l.apply(&x).adjoint() - l.apply(&x.adjoint()))) < 1e-10);
        prop_assert!(l.trace_annihilation_error() < 1e-10);
    }

    #[test]
    fn ising_routes_agree(frac in 0.02f64..0.98, tl in 0.0f64..20.0, tr in 0.0f64..20.0, kappa in 0.2f64..2.0) {
        let d = frac;
        let point = TwoBathModel::new(SpinChainSpec::ising(1.0, d).unwrap(), kappa, DissipatorStyle::Global)
            .unwrap()
            .solve(tl, tr)
            .unwrap();
        let sol = steady_state_rate_equations(1.0, d, kappa, tl, tr).unwrap();
        prop_assert!(sol.rates.cycle_spread() < 1e-10);
        prop_assert!(sol.populations.iter().all(|&p| p >= 0.0));
        prop_assert!((sol.populations.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for k in 0..4 {
            prop_assert!((point.steady.populations[k] - sol.populations[k]).abs() < 1e-8);
        }
        let j = point.currents.j_net;
        prop_assert!((j - current_from_cycle(d, sol.rates.cycle_gamma)).abs() < 1e-9);
        prop_assert!(point.currents.balance_residual < 1e-9);
        prop_assert!(point.steady.residual < 1e-9);
        prop_assert!(point.steady.min_eigenvalue() > -1e-10);
        // Saturation bound and Clausius sign.
        prop_assert!(j <= kappa * d * d / 2.0 + 1e-9);
        if tl > tr {
            prop_assert!(j >= -1e-12);
        }
    }

    #[test]
    fn phenomenological_ising_never_conducts(frac in 0.01f64..0.99, tl in 0.0f64..20.0, tr in 0.0f64..20.0) {
        let j = TwoBathModel::new(SpinChainSpec::ising(1.0, frac).unwrap(), 1.0, DissipatorStyle::Local)
            .unwrap()
            .current(tl, tr)
            .unwrap();
        prop_assert!(j.abs() < 1e-10);
    }

    #[test]
    fn xy_steady_states_balance(n in 2usize..=3, local in any::<bool>(), d in 0.1f64..1.5, tl in 0.0f64..10.0, tr in 0.0f64..10.0) {
        let point = TwoBathModel::new(SpinChainSpec::xy(n, 1.0, d).unwrap(), 1.0, style(local))
            .unwrap()
            .solve(tl, tr)
            .unwrap();
        prop_assert!(point.currents.balance_residual < 1e-9);
        prop_assert!((point.steady.trace() - 1.0).abs() < 1e-10);
        prop_assert!(point.steady.min_eigenvalue() > -1e-10);
        if tl > tr {
            prop_assert!(point.currents.j_net >= -1e-12);
        }
    }
}

#[test]
fn cycle_rate_rises_monotonically_with_left_temperature() {
    let grid: Vec<f64> = (0..=30).map(|k| 0.1 * 100f64.powf(k as f64 / 30.0)).collect();
    for d in [0.01, 0.1, 0.5] {
        let model = TwoBathModel::new(SpinChainSpec::ising(1.0, d).unwrap(), 1.0, DissipatorStyle::Global).unwrap();
        let mut last = 0.0;
        for &tl in &grid {
            let j = model.current(tl, 0.0).unwrap();
            assert!(j >= last - 1e-12, "Δ={d}: J dropped at T_L={tl}");
            last = j;
        }
    }
}

#[test]
fn xy_kernels_are_unique_for_the_comparison_chain() {
    for local in [false, true] {
        let model = TwoBathModel::new(SpinChainSpec::xy(4, 1.0, 1.0).unwrap(), 1.0, style(local)).unwrap();
        for tl in [0.05, 1.0, 100.0] {
            let p = model.solve(tl, 0.0).unwrap();
            assert_eq!(p.steady.kernel_dim, 1);
            assert!(p.steady.residual < 1e-9);
        }
    }
}
