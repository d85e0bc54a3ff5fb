//! Parameter sweeps that regenerate the heat-current datasets, and the
//! acceptance checks.

pub mod acceptance;
pub mod config;
pub mod figures;
pub mod table;

pub use config::{StyleChoice, SweepConfig};
pub use table::Table;

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { stop } else { start + step * k as f64 }).collect()
        }
    }
}

/// `n` geometrically spaced values from `start` to `stop` inclusive.
pub fn logspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    linspace(a, b, n)
        .into_iter()
        .enumerate()
        .map(|(k, x)| if k == 0 { start } else if k == n - 1 { stop } else { x.exp() })
        .collect()
}
