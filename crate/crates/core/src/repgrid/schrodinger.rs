use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Domain, GridFunction, Monomial, Representation, C64};
use crate::error::{Error, Result};
use crate::lattice::{Axis, Lattice};
use crate::liecore::{Functional, NilpotentAlgebra};
use crate::orbit::{Orbit, OrbitData};

/// Schrödinger representation of heis3 on `L²(ℝ)` sampled at `n` points of `[-L, L)`.
///
/// `π(exp(x1 X1 + x2 X2 + x3 X3)) = e^{i(x1 + x2 Q + x3 P)}` with `Q` multiplication by `x`
/// and `P = -i d/dx`. The orbit is `{ξ₁ = 1}` with chart `(t2, t3) = (q, p)`.
#[derive(Clone, Debug)]
pub struct SchrodingerRep {
    orbit: Orbit,
    hilbert: Arc<Lattice>,
    symbol: Arc<Lattice>,
    predual: Arc<Lattice>,
    symbol_weight: f64,
    predual_weight: f64,
}

impl SchrodingerRep {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Grid(format!("points {n} is not a power of two ≥ 2")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Grid("box half-width must be positive".into()));
        }
        let h = NilpotentAlgebra::heisenberg();
        let orbit = OrbitData::new(&Functional::dual_basis(&h, 0))?;
        let x_axis = Axis::centered(n, half_width, 0.0);
        let p_axis = x_axis.dual();
        let symbol = Lattice::new(vec![x_axis.clone(), p_axis]);
        let predual = symbol.dual();
        let symbol_weight = symbol.cell_volume() * orbit.liouville_density();
        let predual_weight = predual.cell_volume() * orbit.predual_density();
        Ok(Self {
            orbit,
            hilbert: Arc::new(Lattice::new(vec![x_axis])),
            symbol: Arc::new(symbol),
            predual: Arc::new(predual),
            symbol_weight,
            predual_weight,
        })
    }

    /// Equal position and momentum boxes: `L = sqrt(π n / 2)`.
    pub fn balanced(n: usize) -> Result<Self> {
        Self::new(n, (PI * n as f64 / 2.0).sqrt())
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn n(&self) -> usize {
        self.hilbert.len()
    }

    pub fn step(&self) -> f64 {
        self.hilbert.axes()[0].step
    }

    pub fn half_width(&self) -> f64 {
        self.hilbert.axes()[0].half_width()
    }
}

impl Representation for SchrodingerRep {
    fn name(&self) -> &str {
        "schrodinger"
    }

    fn hilbert_lattice(&self) -> &Arc<Lattice> {
        &self.hilbert
    }

    fn hilbert_weight(&self) -> f64 {
        self.step()
    }

    fn hilbert_domain(&self) -> Domain {
        Domain::Line
    }

    fn symbol_lattice(&self) -> &Arc<Lattice> {
        &self.symbol
    }

    fn symbol_weight(&self) -> f64 {
        self.symbol_weight
    }

    fn predual_lattice(&self) -> &Arc<Lattice> {
        &self.predual
    }

    fn predual_weight(&self) -> f64 {
        self.predual_weight
    }

    fn predual_indices(&self) -> Vec<usize> {
        self.orbit.jump_positions().to_vec()
    }

    fn algebra_dim(&self) -> usize {
        self.orbit.algebra().dim()
    }

    fn node_operator(&self, node: usize) -> Result<Monomial> {
        let m = self.predual.unravel(node);
        let axes = self.predual.axes();
        let x2 = axes[0].coord(m[0]);
        let k3 = axes[1].signed(m[1]);
        let x3 = k3 as f64 * self.step();
        let n = self.n() as i64;
        let ax = &self.hilbert.axes()[0];
        let src = (0..n).map(|i| (i + k3).rem_euclid(n) as usize).collect();
        let phase = (0..self.n())
            .map(|i| Complex64::from_polar(1.0, x2 * (ax.coord(i) + x3 / 2.0)))
            .collect();
        Ok(Monomial { src, phase })
    }
}

/// `e^{it} e^{ip(x - q/2)} f(x - q)`: translation by `q`, modulation by `p`, central phase `t`
/// in the symmetric gauge, i.e. `π(exp(t X1 + p X2 - q X3))`.
///
/// Shifts that are whole grid steps permute samples cyclically; other shifts go through the
/// band-limited Fourier shift.
pub fn schrodinger_apply(
    rep: &SchrodingerRep,
    p: f64,
    q: f64,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction> {
    rep.check_vector(f)?;
    if q.abs() > rep.half_width() {
        return Err(Error::Grid(format!(
            "shift {q} exceeds the box half-width {}",
            rep.half_width()
        )));
    }
    let ax = &rep.hilbert.axes()[0];
    let shifted = super::resample::shift_periodic(rep.hilbert_lattice(), f.values(), &[-q]);
    let values = shifted
        .into_iter()
        .enumerate()
        .map(|(i, v)| v * Complex64::from_polar(1.0, t + p * (ax.coord(i) - q / 2.0)))
        .collect::<Vec<C64>>();
    f.with_values(values)
}
