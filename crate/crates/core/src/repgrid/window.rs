use std::sync::Arc;

use num_complex::Complex64;

use super::resample::heat_smooth;
use super::{Domain, GridFunction, Representation};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// A unit-norm window `φ₀`.
#[derive(Clone, Debug)]
pub struct ReferenceWindow {
    phi: GridFunction,
}

impl ReferenceWindow {
    /// Wraps `phi`, which must already have unit norm to `1e-12`.
    pub fn new(phi: GridFunction) -> Result<Self> {
        let n = phi.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Degenerate(format!("window norm {n} is not 1")));
        }
        Ok(Self { phi })
    }

    /// Rescales `phi` to unit norm.
    pub fn normalized(phi: &GridFunction) -> Result<Self> {
        let n = phi.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Degenerate("zero window".into()));
        }
        Self::new(phi.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn function(&self) -> &GridFunction {
        &self.phi
    }
}

impl AsRef<GridFunction> for ReferenceWindow {
    fn as_ref(&self) -> &GridFunction {
        &self.phi
    }
}

/// Unit-norm Gaussian of width `sigma` centred on the lattice origin.
pub fn gaussian_window_with(
    lattice: Arc<Lattice>,
    weight: f64,
    domain: Domain,
    sigma: f64,
) -> Result<ReferenceWindow> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Grid(format!("window width {sigma} is not positive")));
    }
    for a in lattice.axes() {
        let edge = (-a.half_width().powi(2) / (2.0 * sigma * sigma)).exp();
        if edge > 1e-12 {
            return Err(Error::Grid(format!(
                "box half-width {} too small for a window of width {sigma}",
                a.half_width()
            )));
        }
    }
    let centre: Vec<f64> = lattice.axes().iter().map(|a| a.origin).collect();
    let g = GridFunction::from_fn(lattice, weight, domain, |t| {
        let r2: f64 = t.iter().zip(&centre).map(|(a, b)| (a - b) * (a - b)).sum();
        Complex64::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
    });
    ReferenceWindow::normalized(&g)
}

/// Unit-norm Gaussian window in the Hilbert space of `rep`.
pub fn gaussian_window<R: Representation + ?Sized>(rep: &R, sigma: f64) -> Result<ReferenceWindow> {
    gaussian_window_with(
        rep.hilbert_lattice().clone(),
        rep.hilbert_weight(),
        rep.hilbert_domain(),
        sigma,
    )
}

/// Convolution with a Gaussian of width `s` (periodic, spectral).
pub fn gaussian_smooth(f: &GridFunction, s: f64) -> GridFunction {
    f.with_values(heat_smooth(f.lattice(), f.values(), s))
        .expect("same grid")
}
