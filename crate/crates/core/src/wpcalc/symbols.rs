use num_complex::Complex64;
use statrs::function::erf::erf;

use rand::Rng;

use crate::lattice::{apply_separable, Lattice};
use crate::repgrid::{GridFunction, Representation, C64};

/// `½[erf((t + R)/τ) − erf((t − R)/τ)]`: the indicator of `[-R, R]` smoothed by a Gaussian.
pub fn flat_top(t: f64, r: f64, tau: f64) -> f64 {
    0.5 * (erf((t + r) / tau) - erf((t - r) / tau))
}

/// `Π_k flat_top(t_k − c_k)` on the symbol lattice, `c` the lattice origin.
pub fn windowed_constant<R: Representation + ?Sized>(rep: &R, r: f64, tau: f64) -> GridFunction {
    windowed_polynomial(rep, r, tau, |_| Complex64::new(1.0, 0.0))
}

/// `p(t) · Π_k flat_top(t_k − c_k)`.
pub fn windowed_polynomial<R: Representation + ?Sized>(
    rep: &R,
    r: f64,
    tau: f64,
    p: impl Fn(&[f64]) -> C64,
) -> GridFunction {
    let centre: Vec<f64> = rep
        .symbol_lattice()
        .axes()
        .iter()
        .map(|a| a.origin)
        .collect();
    rep.symbol_from_fn(&|t: &[f64]| {
        let w: f64 = t
            .iter()
            .zip(&centre)
            .map(|(a, c)| flat_top(a - c, r, tau))
            .product();
        p(t) * w
    })
}

/// `amp · exp(-Σ (t_k − c_k)² / (2 s_k²) + i Σ ω_k t_k)`.
#[derive(Clone, Debug)]
pub struct GaussianSpec {
    pub centre: Vec<f64>,
    pub widths: Vec<f64>,
    pub freq: Vec<f64>,
    pub amp: C64,
}

impl GaussianSpec {
    pub fn eval(&self, t: &[f64]) -> C64 {
        let mut e = 0.0;
        let mut ph = 0.0;
        for k in 0..t.len() {
            let u = t[k] - self.centre[k];
            e += u * u / (2.0 * self.widths[k] * self.widths[k]);
            ph += self.freq[k] * t[k];
        }
        self.amp * Complex64::from_polar((-e).exp(), ph)
    }
}

/// Samples `spec` on the symbol lattice (separably).
pub fn gaussian_symbol<R: Representation + ?Sized>(rep: &R, spec: &GaussianSpec) -> GridFunction {
    let lat = rep.symbol_lattice();
    let factors: Vec<Vec<C64>> = lat
        .axes()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            (0..a.n)
                .map(|m| {
                    let t = a.coord(m);
                    let u = t - spec.centre[k];
                    let s = spec.widths[k];
                    Complex64::from_polar((-u * u / (2.0 * s * s)).exp(), spec.freq[k] * t)
                })
                .collect()
        })
        .collect();
    let mut v = vec![spec.amp; lat.len()];
    apply_separable(&mut v, &factors);
    rep.new_symbol(v).expect("symbol lattice")
}

/// Random Gaussian-type parameters on `lattice`: centres and frequencies within
/// `±spread · L`, widths in `[0.9, 1.1]`, unit-modulus amplitude.
pub fn random_gaussian_spec<G: Rng + ?Sized>(
    lattice: &Lattice,
    spread: f64,
    rng: &mut G,
) -> GaussianSpec {
    let axes = lattice.axes();
    let mut draw =
        |a: &crate::lattice::Axis| a.half_width() * spread * (2.0 * rng.gen::<f64>() - 1.0);
    let centre = axes.iter().map(|a| a.origin + draw(a)).collect();
    let freq = axes.iter().map(|a| draw(&a.dual())).collect();
    let widths = axes.iter().map(|_| 0.9 + 0.2 * rng.gen::<f64>()).collect();
    let amp = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.gen::<f64>());
    GaussianSpec {
        centre,
        widths,
        freq,
        amp,
    }
}

/// Default spread for [`random_gaussian_vector`] and [`random_gaussian_symbol`].
pub const GAUSSIAN_SPREAD: f64 = 0.04;

/// A random Gaussian-type vector in the Hilbert space of `rep`.
pub fn random_gaussian_vector<R: Representation + ?Sized, G: Rng + ?Sized>(
    rep: &R,
    rng: &mut G,
) -> GridFunction {
    let spec = random_gaussian_spec(rep.hilbert_lattice(), GAUSSIAN_SPREAD, rng);
    rep.vector_from_fn(&|t| spec.eval(t))
}

/// A random Gaussian-type symbol on the orbit of `rep`.
pub fn random_gaussian_symbol<R: Representation + ?Sized, G: Rng + ?Sized>(
    rep: &R,
    rng: &mut G,
) -> GridFunction {
    let spec = random_gaussian_spec(rep.symbol_lattice(), GAUSSIAN_SPREAD, rng);
    gaussian_symbol(rep, &spec)
}
