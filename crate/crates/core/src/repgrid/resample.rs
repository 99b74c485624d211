//! Periodic band-limited resampling on product lattices.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::C64;
use crate::lattice::{fft_nd, Lattice};

/// Tolerance, in grid steps, for treating a shift as a whole number of steps.
pub const ON_GRID_TOL: f64 = 1e-9;

fn signed_freq(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Angular frequency of DFT bin `k` on an axis with `n` nodes of spacing `step`.
fn omega(k: usize, n: usize, step: f64) -> f64 {
    2.0 * PI * signed_freq(k, n) as f64 / (n as f64 * step)
}

/// `g(t) = f(t + b)` on the periodized grid.
pub fn shift_periodic(lattice: &Lattice, values: &[C64], b: &[f64]) -> Vec<C64> {
    let axes = lattice.axes();
    let steps: Option<Vec<i64>> = axes
        .iter()
        .zip(b)
        .map(|(a, &bk)| a.steps_of(bk, ON_GRID_TOL))
        .collect();
    if let Some(steps) = steps {
        return (0..values.len())
            .map(|i| {
                let m: Vec<i64> = lattice
                    .unravel(i)
                    .iter()
                    .zip(&steps)
                    .map(|(&mi, &s)| mi as i64 + s)
                    .collect();
                values[lattice.ravel_wrapped(&m)]
            })
            .collect();
    }
    let shape = lattice.shape();
    let mut data = values.to_vec();
    fft_nd(&mut data, &shape, false);
    let factors: Vec<Vec<C64>> = axes
        .iter()
        .zip(b)
        .map(|(a, &bk)| {
            (0..a.n)
                .map(|k| {
                    let w = omega(k, a.n, a.step);
                    if a.n > 1 && k == a.n / 2 {
                        Complex64::new((w * bk).cos(), 0.0)
                    } else {
                        Complex64::from_polar(1.0, w * bk)
                    }
                })
                .collect()
        })
        .collect();
    crate::lattice::apply_separable(&mut data, &factors);
    fft_nd(&mut data, &shape, true);
    let n = values.len() as f64;
    data.iter_mut().for_each(|v| *v /= n);
    data
}

/// Trigonometric interpolant of grid data, evaluated at arbitrary points.
pub struct TrigInterpolant {
    lattice: Lattice,
    spectrum: Vec<C64>,
}

impl TrigInterpolant {
    pub fn new(lattice: &Lattice, values: &[C64]) -> Self {
        let mut spectrum = values.to_vec();
        fft_nd(&mut spectrum, &lattice.shape(), false);
        let n = values.len() as f64;
        spectrum.iter_mut().for_each(|v| *v /= n);
        Self {
            lattice: lattice.clone(),
            spectrum,
        }
    }

    pub fn eval(&self, t: &[f64]) -> C64 {
        let axes = self.lattice.axes();
        let factors: Vec<Vec<C64>> = axes
            .iter()
            .zip(t)
            .map(|(a, &tk)| {
                let x = tk - a.coord(0);
                (0..a.n)
                    .map(|k| {
                        let w = omega(k, a.n, a.step);
                        if a.n > 1 && k == a.n / 2 {
                            Complex64::new((w * x).cos(), 0.0)
                        } else {
                            Complex64::from_polar(1.0, w * x)
                        }
                    })
                    .collect()
            })
            .collect();
        // contract the last axis first
        let mut cur = self.spectrum.clone();
        for f in factors.iter().rev() {
            let n = f.len();
            cur = cur
                .chunks(n)
                .map(|c| c.iter().zip(f).map(|(a, b)| a * b).sum())
                .collect();
        }
        cur[0]
    }
}

/// Spectral partial derivative along `axis` (Nyquist bin dropped).
pub fn spectral_derivative(lattice: &Lattice, values: &[C64], axis: usize) -> Vec<C64> {
    let shape = lattice.shape();
    let mut data = values.to_vec();
    fft_nd(&mut data, &shape, false);
    let factors: Vec<Vec<C64>> = lattice
        .axes()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if k != axis {
                vec![Complex64::new(1.0, 0.0); a.n]
            } else {
                (0..a.n)
                    .map(|j| {
                        if j == a.n / 2 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            Complex64::new(0.0, omega(j, a.n, a.step))
                        }
                    })
                    .collect()
            }
        })
        .collect();
    crate::lattice::apply_separable(&mut data, &factors);
    fft_nd(&mut data, &shape, true);
    let n = values.len() as f64;
    data.iter_mut().for_each(|v| *v /= n);
    data
}

/// Multiplies the spectrum by `exp(-s²|ω|²/2)`: convolution with a Gaussian of width `s`.
pub fn heat_smooth(lattice: &Lattice, values: &[C64], s: f64) -> Vec<C64> {
    let shape = lattice.shape();
    let mut data = values.to_vec();
    fft_nd(&mut data, &shape, false);
    let factors: Vec<Vec<C64>> = lattice
        .axes()
        .iter()
        .map(|a| {
            (0..a.n)
                .map(|k| {
                    let w = omega(k, a.n, a.step);
                    Complex64::new((-s * s * w * w / 2.0).exp(), 0.0)
                })
                .collect()
        })
        .collect();
    crate::lattice::apply_separable(&mut data, &factors);
    fft_nd(&mut data, &shape, true);
    let n = values.len() as f64;
    data.iter_mut().for_each(|v| *v /= n);
    data
}

/// Largest `|v|` over nodes within `depth` of the box boundary on some axis, relative to the
/// overall maximum.
pub fn boundary_ratio(lattice: &Lattice, values: &[C64], depth: usize) -> f64 {
    let max = values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    let axes = lattice.axes();
    let Some(last) = axes.last() else {
        return 0.0;
    };
    let near = |mi: usize, n: usize| n > 1 && (mi < depth || mi + depth >= n);
    let mut edge: f64 = 0.0;
    lattice.for_each_row(|start, prefix| {
        let row = &values[start..start + last.n];
        if prefix.iter().zip(axes).any(|(&mi, a)| near(mi, a.n)) {
            edge = row.iter().map(|v| v.norm_sqr()).fold(edge, f64::max);
        } else {
            for (m, v) in row.iter().enumerate() {
                if near(m, last.n) {
                    edge = edge.max(v.norm_sqr());
                }
            }
        }
    });
    (edge / max).sqrt()
}
