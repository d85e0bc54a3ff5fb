//! Datasets for the heat-current curves: current versus left temperature,
//! versus coupling, versus temperature gradient, and the XY chain comparison.

use std::path::Path;

use super::config::StyleChoice;
use super::table::Table;
use super::{linspace, logspace};
use crate::error::{Error, Result};
use crate::lindblad::DissipatorStyle;
use crate::model::TwoBathModel;
use crate::parallel::Execution;
use crate::spinops::SpinChainSpec;

pub const FIELD_H: f64 = 1.0;
pub const FIG2_DELTAS: [f64; 3] = [0.01, 0.1, 0.5];
pub const FIG2_LOCAL_DELTA: f64 = 0.01;
pub const FIG3_HOT: f64 = 10.0;
pub const FIG3_COLD: [f64; 3] = [0.0, 0.1, 0.3];
pub const FIG3_DELTA_POINTS: usize = 100;
pub const INSET_DELTA: f64 = 0.5;
pub const INSET_MEANS: [f64; 2] = [0.5, 5.0];
pub const INSET_POINTS: usize = 101;
pub const TEMPERATURE_POINTS: usize = 200;
pub const XY_SPIN_RANGE: std::ops::RangeInclusive<usize> = 2..=6;

fn ising(delta: f64, kappa: f64, style: DissipatorStyle) -> Result<TwoBathModel> {
    TwoBathModel::new(SpinChainSpec::ising(FIELD_H, delta)?, kappa, style)
}

/// Evaluate every `(model index, T_L, T_R)` job and return currents in job order.
fn currents(models: &[TwoBathModel], jobs: &[(usize, f64, f64)], exec: Execution) -> Result<Vec<f64>> {
    exec.map(jobs, |&(m, tl, tr)| models[m].current(tl, tr)).into_iter().collect()
}

fn fmt_param(x: f64) -> String {
    format!("{x}")
}

/// The log grid 0.01h..100h used for temperature sweeps.
pub fn temperature_grid(points: usize) -> Vec<f64> {
    logspace(0.01 * FIELD_H, 100.0 * FIELD_H, points)
}

/// `J_L` versus `T_L` at `T_R = 0` for three couplings, plus the local model
/// at the weakest coupling. The first row is the exact `T_L = 0` point.
pub fn run_fig2(kappa: f64, exec: Execution) -> Result<Table> {
    let mut models = FIG2_DELTAS
        .iter()
        .map(|&d| ising(d, kappa, DissipatorStyle::Global))
        .collect::<Result<Vec<_>>>()?;
    models.push(ising(FIG2_LOCAL_DELTA, kappa, DissipatorStyle::Local)?);

    let mut t_left = vec![0.0];
    t_left.extend(temperature_grid(TEMPERATURE_POINTS));
    let jobs: Vec<_> = t_left
        .iter()
        .flat_map(|&tl| (0..models.len()).map(move |m| (m, tl, 0.0)))
        .collect();
    let j = currents(&models, &jobs, exec)?;

    let mut columns = vec!["T_L".to_string()];
    columns.extend(FIG2_DELTAS.iter().map(|d| format!("J_global_delta_{}", fmt_param(*d))));
    columns.push(format!("J_local_delta_{}", fmt_param(FIG2_LOCAL_DELTA)));
    let mut table = Table::new(columns);
    table.comments.push(format!("J_L versus T_L at T_R=0, kappa={}", fmt_param(kappa)));
    for (row, tl) in t_left.iter().enumerate() {
        let mut values = vec![*tl];
        values.extend_from_slice(&j[row * models.len()..(row + 1) * models.len()]);
        table.push_row(values);
    }
    Ok(table)
}

pub struct Fig3 {
    /// Hot left bath, cold right bath at each of [`FIG3_COLD`].
    pub panel_a: Table,
    /// Hot right bath, cold left bath at each of [`FIG3_COLD`].
    pub panel_b: Table,
    /// Long format `(mean_T, delta_T, T_L, T_R, J)` at `Δ = 0.5h`.
    pub inset: Table,
}

/// Coupling grid `Δ_k = k h / (N + 1)`, open interval `(0, h)`.
pub fn coupling_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|k| FIELD_H * k as f64 / (points + 1) as f64).collect()
}

/// `δT` grid over `[−2h, 2h]`, clipped so both temperatures stay non-negative.
pub fn gradient_grid(mean_t: f64, points: usize) -> Vec<f64> {
    let half_width = (2.0 * FIELD_H).min(2.0 * mean_t);
    linspace(-half_width, half_width, points)
}

pub fn run_fig3(kappa: f64, exec: Execution) -> Result<Fig3> {
    let deltas = coupling_grid(FIG3_DELTA_POINTS);
    let models = deltas
        .iter()
        .map(|&d| ising(d, kappa, DissipatorStyle::Global))
        .collect::<Result<Vec<_>>>()?;

    let panel = |hot_left: bool| -> Result<Table> {
        let jobs: Vec<_> = (0..models.len())
            .flat_map(|m| {
                FIG3_COLD
                    .iter()
                    .map(move |&cold| if hot_left { (m, FIG3_HOT, cold) } else { (m, cold, FIG3_HOT) })
            })
            .collect();
        let j = currents(&models, &jobs, exec)?;
        let cold_name = if hot_left { "T_R" } else { "T_L" };
        let mut columns = vec!["delta".to_string()];
        columns.extend(FIG3_COLD.iter().map(|c| format!("J_{cold_name}_{}", fmt_param(*c))));
        let mut table = Table::new(columns);
        let hot_name = if hot_left { "T_L" } else { "T_R" };
        table.comments.push(format!("J_L versus delta at {hot_name}={}, kappa={}", fmt_param(FIG3_HOT), fmt_param(kappa)));
        for (m, d) in deltas.iter().enumerate() {
            let mut values = vec![*d];
            values.extend_from_slice(&j[m * FIG3_COLD.len()..(m + 1) * FIG3_COLD.len()]);
            table.push_row(values);
        }
        Ok(table)
    };
    let panel_a = panel(true)?;
    let panel_b = panel(false)?;

    let inset_model = [ising(INSET_DELTA, kappa, DissipatorStyle::Global)?];
    let points: Vec<(f64, f64)> = INSET_MEANS
        .iter()
        .flat_map(|&mean| gradient_grid(mean, INSET_POINTS).into_iter().map(move |dt| (mean, dt)))
        .collect();
    let temps: Vec<(f64, f64)> = points
        .iter()
        .map(|&(mean, dt)| ((mean + dt / 2.0).max(0.0), (mean - dt / 2.0).max(0.0)))
        .collect();
    let jobs: Vec<_> = temps.iter().map(|&(tl, tr)| (0, tl, tr)).collect();
    let j = currents(&inset_model, &jobs, exec)?;
    let mut inset = Table::new(["mean_T", "delta_T", "T_L", "T_R", "J"]);
    inset.comments.push(format!("J_L versus delta_T at delta={}, kappa={}", fmt_param(INSET_DELTA), fmt_param(kappa)));
    for (k, (&(mean, dt), &(tl, tr))) in points.iter().zip(&temps).enumerate() {
        inset.push_row(vec![mean, dt, tl, tr, j[k]]);
    }
    Ok(Fig3 { panel_a, panel_b, inset })
}

/// XY chain with `Δ = h` and `T_R = 0`: current versus `T_L` for the chosen
/// dissipator styles.
pub fn run_xy_comparison(n_spins: usize, kappa: f64, styles: StyleChoice, exec: Execution) -> Result<Table> {
    run_xy_on_grid(n_spins, kappa, styles, &temperature_grid(TEMPERATURE_POINTS), exec)
}

pub fn run_xy_on_grid(
    n_spins: usize,
    kappa: f64,
    styles: StyleChoice,
    t_left: &[f64],
    exec: Execution,
) -> Result<Table> {
    if !XY_SPIN_RANGE.contains(&n_spins) {
        return Err(Error::Config(format!("xy comparison needs 2..=6 spins, got {n_spins}")));
    }
    let chain = SpinChainSpec::xy(n_spins, FIELD_H, FIELD_H)?;
    let models = styles
        .styles()
        .iter()
        .map(|&s| TwoBathModel::new(chain, kappa, s))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<_> = t_left
        .iter()
        .flat_map(|&tl| (0..models.len()).map(move |m| (m, tl, 0.0)))
        .collect();
    let j = currents(&models, &jobs, exec)?;
    let mut columns = vec!["T_L".to_string()];
    columns.extend(styles.styles().iter().map(|s| format!("J_{}", StyleChoice::style_name(*s))));
    let mut table = Table::new(columns);
    table
        .comments
        .push(format!("open XY chain, n_spins={n_spins}, delta=h, T_R=0, kappa={}", fmt_param(kappa)));
    for (row, tl) in t_left.iter().enumerate() {
        let mut values = vec![*tl];
        values.extend_from_slice(&j[row * models.len()..(row + 1) * models.len()]);
        table.push_row(values);
    }
    Ok(table)
}

pub fn write_fig3(fig: &Fig3, out_dir: &Path) -> Result<()> {
    fig.panel_a.write(&out_dir.join("fig3a.csv"))?;
    fig.panel_b.write(&out_dir.join("fig3b.csv"))?;
    fig.inset.write(&out_dir.join("fig3_inset.csv"))
}
