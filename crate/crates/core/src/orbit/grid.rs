use std::sync::Arc;

use super::Orbit;
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::lattice::{Axis, Lattice};

pub const DEFAULT_NODE_CAP: usize = 1 << 24;

/// Uniform grid on the orbit in chart coordinates, centred on the chart of `ξ₀`.
#[derive(Clone, Debug)]
pub struct OrbitGrid {
    orbit: Orbit,
    lattice: Arc<Lattice>,
}

impl OrbitGrid {
    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// Lebesgue cell volume `∏ 2L_k/N`.
    pub fn weight(&self) -> f64 {
        self.lattice.cell_volume()
    }

    /// Cell volume in the Liouville measure.
    pub fn liouville_weight(&self) -> f64 {
        self.weight() * self.orbit.liouville_density()
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        self.lattice.point(idx)
    }

    /// The full functional at a node.
    pub fn lift(&self, idx: usize) -> Vec<f64> {
        self.orbit.lift_f64(&self.node(idx))
    }

    /// Frequency grid of the discrete transform: spacing `π/L_k`.
    pub fn dual_lattice(&self) -> Lattice {
        self.lattice.dual()
    }
}

/// Grid with `n` points per axis over `∏ [c_k - L_k, c_k + L_k)`, `c` the chart of `ξ₀`.
pub fn make_grid(orbit: &Orbit, half_widths: &[f64], n: usize, cap: usize) -> Result<OrbitGrid> {
    let d = orbit.dim();
    if d > 0 && (n < 2 || !n.is_power_of_two()) {
        return Err(Error::Grid(format!(
            "points per axis {n} is not a power of two ≥ 2"
        )));
    }
    let widths: Vec<f64> = match half_widths.len() {
        1 => vec![half_widths[0]; d],
        l if l == d => half_widths.to_vec(),
        l => {
            return Err(Error::Dimension {
                expected: d,
                got: l,
            })
        }
    };
    if widths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::Grid("box half-widths must be positive".into()));
    }
    let nodes = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(n));
    match nodes {
        Some(v) if v <= cap => {}
        _ => {
            return Err(Error::GridTooLarge {
                nodes: nodes.unwrap_or(usize::MAX),
                cap,
            })
        }
    }
    let centre: Vec<f64> = orbit.base_chart().iter().map(to_f64).collect();
    let axes = widths
        .iter()
        .zip(&centre)
        .map(|(&l, &c)| Axis::centered(n, l, c))
        .collect();
    Ok(OrbitGrid {
        orbit: orbit.clone(),
        lattice: Arc::new(Lattice::new(axes)),
    })
}
