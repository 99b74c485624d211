//! Uniform product lattices and centered discrete Fourier transforms on them.
//!
//! A node index `i` on an axis sits at `origin + (i - n/2) * step`, so the origin is a
//! node. Multi-index order is row-major with the last axis fastest.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub n: usize,
    pub step: f64,
    pub origin: f64,
}

impl Axis {
    pub fn new(n: usize, step: f64, origin: f64) -> Self {
        Self { n, step, origin }
    }

    /// `n` nodes covering `[origin - L, origin + L)`.
    pub fn centered(n: usize, half_width: f64, origin: f64) -> Self {
        Self::new(n, 2.0 * half_width / n as f64, origin)
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.origin + (i as f64 - (self.n / 2) as f64) * self.step
    }

    pub fn half_width(&self) -> f64 {
        self.n as f64 * self.step / 2.0
    }

    /// Frequency axis of the discrete transform: spacing `2π/(n·step)`, centered at zero.
    pub fn dual(&self) -> Axis {
        Axis::new(self.n, 2.0 * PI / (self.n as f64 * self.step), 0.0)
    }

    /// Signed lattice offset `k` with `x ≈ k·step`, if `x` is within `tol·step` of one.
    pub fn steps_of(&self, x: f64, tol: f64) -> Option<i64> {
        let k = (x / self.step).round();
        ((x / self.step - k).abs() <= tol).then_some(k as i64)
    }

    /// Distance of the index `i` from the centre index, as a signed integer.
    pub fn signed(&self, i: usize) -> i64 {
        i as i64 - (self.n / 2) as i64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    axes: Vec<Axis>,
}

pub type SharedLattice = Arc<Lattice>;

impl Lattice {
    pub fn new(axes: Vec<Axis>) -> Self {
        Self { axes }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.n).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    pub fn dual(&self) -> Lattice {
        Lattice::new(self.axes.iter().map(Axis::dual).collect())
    }

    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = idx % a.n;
            idx /= a.n;
        }
        out
    }

    pub fn ravel(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, a)| acc * a.n + i)
    }

    /// Ravel with periodic wrap of signed indices.
    pub fn ravel_wrapped(&self, multi: &[i64]) -> usize {
        multi.iter().zip(&self.axes).fold(0, |acc, (&i, a)| {
            acc * a.n + i.rem_euclid(a.n as i64) as usize
        })
    }

    pub fn point(&self, idx: usize) -> Vec<f64> {
        self.unravel(idx)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.coord(i))
            .collect()
    }

    /// Calls `f(i, point)` for every node in index order, reusing one buffer.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[f64])) {
        let d = self.axes.len();
        let mut m = vec![0usize; d];
        let mut p: Vec<f64> = self.axes.iter().map(|a| a.coord(0)).collect();
        for i in 0..self.len() {
            f(i, &p);
            for k in (0..d).rev() {
                m[k] += 1;
                if m[k] < self.axes[k].n {
                    p[k] = self.axes[k].coord(m[k]);
                    break;
                }
                m[k] = 0;
                p[k] = self.axes[k].coord(0);
            }
        }
    }

    /// Calls `f(i, multi_index)` for every node in index order.
    pub fn for_each_multi(&self, mut f: impl FnMut(usize, &[usize])) {
        let d = self.axes.len();
        let mut m = vec![0usize; d];
        for i in 0..self.len() {
            f(i, &m);
            for k in (0..d).rev() {
                m[k] += 1;
                if m[k] < self.axes[k].n {
                    break;
                }
                m[k] = 0;
            }
        }
    }

    /// Calls `f(start, prefix)` for every line along the last axis, where `prefix` is the
    /// multi-index on the other axes.
    pub fn for_each_row(&self, mut f: impl FnMut(usize, &[usize])) {
        let d = self.axes.len();
        if d == 0 {
            f(0, &[]);
            return;
        }
        let inner = self.axes[d - 1].n;
        let mut m = vec![0usize; d - 1];
        for r in 0..self.len() / inner {
            f(r * inner, &m);
            for k in (0..d - 1).rev() {
                m[k] += 1;
                if m[k] < self.axes[k].n {
                    break;
                }
                m[k] = 0;
            }
        }
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.axes.len()];
        for k in (0..self.axes.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.axes[k + 1].n;
        }
        s
    }

    /// Index map `i ↦ ravel(unravel(i) + shift)` with periodic wrap.
    pub fn shifted_indices(&self, shift: &[i64]) -> Vec<usize> {
        let strides = self.strides();
        // per-axis contribution of each index after the shift
        let tables: Vec<Vec<usize>> = self
            .axes
            .iter()
            .zip(shift)
            .zip(&strides)
            .map(|((a, &s), &st)| {
                (0..a.n)
                    .map(|m| (m as i64 + s).rem_euclid(a.n as i64) as usize * st)
                    .collect()
            })
            .collect();
        let d = self.axes.len();
        let mut out = Vec::with_capacity(self.len());
        let mut m = vec![0usize; d];
        let mut acc: usize = tables.iter().map(|t| t[0]).sum();
        for _ in 0..self.len() {
            out.push(acc);
            for k in (0..d).rev() {
                acc -= tables[k][m[k]];
                m[k] += 1;
                if m[k] < self.axes[k].n {
                    acc += tables[k][m[k]];
                    break;
                }
                m[k] = 0;
                acc += tables[k][0];
            }
        }
        out
    }

    /// Contiguous runs `(dst, src, len)` of the wrapped map `node ↦ node + shift`.
    pub fn shifted_runs(&self, shift: &[i64]) -> Vec<(usize, usize, usize)> {
        let d = self.axes.len();
        if d == 0 {
            return vec![(0, 0, 1)];
        }
        let strides = self.strides();
        let inner = self.axes[d - 1].n;
        let s_last = shift[d - 1].rem_euclid(inner as i64) as usize;
        let tables: Vec<Vec<usize>> = self.axes[..d - 1]
            .iter()
            .zip(shift)
            .zip(&strides)
            .map(|((a, &s), &st)| {
                (0..a.n)
                    .map(|m| (m as i64 + s).rem_euclid(a.n as i64) as usize * st)
                    .collect()
            })
            .collect();
        let rows = self.len() / inner;
        let mut runs = Vec::with_capacity(2 * rows);
        let mut m = vec![0usize; d - 1];
        for r in 0..rows {
            let base: usize = tables.iter().zip(&m).map(|(t, &mi)| t[mi]).sum();
            let dst = r * inner;
            runs.push((dst, base + s_last, inner - s_last));
            if s_last > 0 {
                runs.push((dst + inner - s_last, base, s_last));
            }
            for k in (0..d - 1).rev() {
                m[k] += 1;
                if m[k] < self.axes[k].n {
                    break;
                }
                m[k] = 0;
            }
        }
        runs
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Index of the node at the axis origins.
    pub fn origin_index(&self) -> usize {
        self.ravel(&self.axes.iter().map(|a| a.n / 2).collect::<Vec<_>>())
    }

    /// Product lattice `self × other`, axes of `self` first.
    pub fn product(&self, other: &Lattice) -> Lattice {
        Lattice::new(self.axes.iter().chain(&other.axes).cloned().collect())
    }

    pub fn check_same(&self, other: &Lattice) -> Result<()> {
        if self.axes.len() != other.axes.len()
            || self
                .axes
                .iter()
                .zip(&other.axes)
                .any(|(a, b)| a.n != b.n || !close(a.step, b.step) || !close(a.origin, b.origin))
        {
            return Err(Error::Domain("grids differ".into()));
        }
        Ok(())
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

thread_local! {
    static PLANNER: std::cell::RefCell<FftPlanner<f64>> = std::cell::RefCell::new(FftPlanner::new());
    static FFT_BUFS: std::cell::RefCell<(Vec<Complex64>, Vec<Complex64>)> = const { std::cell::RefCell::new((Vec::new(), Vec::new())) };
}

fn plan(n: usize, inverse: bool) -> Arc<dyn rustfft::Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Columns gathered per block when transforming a strided axis.
const BLOCK: usize = 32;

/// Unnormalized in-place FFT over every axis of a row-major array.
pub fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total);
    FFT_BUFS.with(|b| {
        let (scratch, lines) = &mut *b.borrow_mut();
        fft_nd_with(data, shape, inverse, scratch, lines)
    });
}

fn fft_nd_with(
    data: &mut [Complex64],
    shape: &[usize],
    inverse: bool,
    scratch: &mut Vec<Complex64>,
    lines: &mut Vec<Complex64>,
) {
    let zero = Complex64::new(0.0, 0.0);
    let mut stride = 1;
    for &n in shape.iter().rev() {
        if n > 1 {
            let fft = plan(n, inverse);
            let need = fft.get_inplace_scratch_len();
            if scratch.len() < need {
                scratch.resize(need, zero);
            }
            let scratch = &mut scratch[..need];
            if stride == 1 {
                fft.process_with_scratch(data, scratch);
            } else {
                // each slab of n*stride values is an n × stride row-major matrix whose
                // columns are the lines to transform
                if lines.len() < n * BLOCK.min(stride) {
                    lines.resize(n * BLOCK.min(stride), zero);
                }
                for slab in data.chunks_mut(n * stride) {
                    let mut s0 = 0;
                    while s0 < stride {
                        let w = BLOCK.min(stride - s0);
                        for k in 0..n {
                            let row = &slab[k * stride + s0..k * stride + s0 + w];
                            for (c, v) in row.iter().enumerate() {
                                lines[c * n + k] = *v;
                            }
                        }
                        fft.process_with_scratch(&mut lines[..w * n], scratch);
                        for k in 0..n {
                            let row = &mut slab[k * stride + s0..k * stride + s0 + w];
                            for (c, v) in row.iter_mut().enumerate() {
                                *v = lines[c * n + k];
                            }
                        }
                        s0 += w;
                    }
                }
            }
        }
        stride *= n;
    }
}

fn sign(i: usize) -> f64 {
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Multiplies `data[i]` by `Π_k factors[k][i_k]` in row-major order.
pub fn apply_separable(data: &mut [Complex64], factors: &[Vec<Complex64>]) {
    let shape: Vec<usize> = factors.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total);
    if factors.is_empty() {
        return;
    }
    let last = factors.len() - 1;
    let inner = shape[last];
    let mut multi = vec![0usize; factors.len()];
    for chunk in data.chunks_mut(inner) {
        let prefix: Complex64 = multi[..last]
            .iter()
            .enumerate()
            .map(|(k, &i)| factors[k][i])
            .product();
        for (v, f) in chunk.iter_mut().zip(&factors[last]) {
            *v *= prefix * f;
        }
        for k in (0..last).rev() {
            multi[k] += 1;
            if multi[k] < shape[k] {
                break;
            }
            multi[k] = 0;
        }
    }
}

/// Flattened pre- and post-factors of [`centered_forward`]: it equals
/// `post ⊙ fft(pre ⊙ v)`.
pub fn centered_factors(lattice: &Lattice) -> (Vec<Complex64>, Vec<Complex64>) {
    let (pre, post) = forward_factors(lattice);
    let mut a = vec![Complex64::new(1.0, 0.0); lattice.len()];
    let mut b = a.clone();
    apply_separable(&mut a, &pre);
    apply_separable(&mut b, &post);
    (a, b)
}

/// Writes the transpose of the row-major `rows × cols` matrix `src` into `dst`.
pub fn transpose_into(src: &[Complex64], rows: usize, cols: usize, dst: &mut [Complex64]) {
    const B: usize = 32;
    assert_eq!(src.len(), rows * cols);
    assert_eq!(dst.len(), rows * cols);
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

pub(crate) fn forward_factors(lattice: &Lattice) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let pre = lattice
        .axes()
        .iter()
        .map(|a| (0..a.n).map(|i| Complex64::new(sign(i), 0.0)).collect())
        .collect();
    let post = lattice
        .axes()
        .iter()
        .map(|a| {
            let d = a.dual();
            (0..a.n)
                .map(|m| Complex64::from_polar(sign(m) * sign(a.n / 2), -a.origin * d.coord(m)))
                .collect()
        })
        .collect();
    (pre, post)
}

/// `F(x_m) = Σ_i e^{-i t_i·x_m} v_i` from `lattice` to its dual (no quadrature weight).
pub fn centered_forward(lattice: &Lattice, values: &[Complex64]) -> Vec<Complex64> {
    let mut data = values.to_vec();
    centered_forward_in_place(lattice, &mut data);
    data
}

pub fn centered_forward_in_place(lattice: &Lattice, data: &mut [Complex64]) {
    let (pre, post) = forward_factors(lattice);
    apply_separable(data, &pre);
    fft_nd(data, &lattice.shape(), false);
    apply_separable(data, &post);
}

/// `G(t_i) = Σ_m e^{i t_i·x_m} c_m` from the dual of `lattice` back to `lattice`.
pub fn centered_inverse(lattice: &Lattice, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut data = coeffs.to_vec();
    centered_inverse_in_place(lattice, &mut data);
    data
}

pub fn centered_inverse_in_place(lattice: &Lattice, data: &mut [Complex64]) {
    let (pre, post) = forward_factors(lattice);
    let conj = |f: Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
        f.into_iter()
            .map(|v| v.into_iter().map(|c| c.conj()).collect())
            .collect()
    };
    apply_separable(data, &conj(post));
    fft_nd(data, &lattice.shape(), true);
    apply_separable(data, &conj(pre));
}
