//! Mixed-norm modulation spaces `M^{r,s}_φ(π)` over a splitting of the predual.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::repgrid::{
    boundary_ratio, pairwise_sum_f64, GridFunction, Representation, TildeRep, C64,
};
use crate::wpcalc::random_gaussian_vector;

/// A partition of the predual positions into an inner group `g_e¹` and an outer group `g_e²`.
///
/// Positions are 0-based algebra indices as reported by [`Representation::predual_indices`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredualSplit {
    inner: Vec<usize>,
    outer: Vec<usize>,
    /// Whether this is the default convention rather than a caller's choice.
    convention: bool,
}

impl PredualSplit {
    pub fn new<R: Representation + ?Sized>(
        rep: &R,
        inner: Vec<usize>,
        outer: Vec<usize>,
    ) -> Result<Self> {
        let mut all: Vec<usize> = inner.iter().chain(&outer).copied().collect();
        all.sort_unstable();
        let mut e = rep.predual_indices();
        e.sort_unstable();
        if all != e {
            return Err(Error::Domain(format!(
                "split {inner:?} | {outer:?} is not a partition of the predual {e:?}"
            )));
        }
        Ok(Self {
            inner,
            outer,
            convention: false,
        })
    }

    /// Lower half of the sorted predual positions inside, upper half outside. For `π̃` this is
    /// `X` inside and `Y` outside.
    pub fn default_for<R: Representation + ?Sized>(rep: &R) -> Self {
        let mut e = rep.predual_indices();
        e.sort_unstable();
        let outer = e.split_off(e.len().div_ceil(2));
        Self {
            inner: e,
            outer,
            convention: true,
        }
    }

    pub fn inner(&self) -> &[usize] {
        &self.inner
    }

    pub fn outer(&self) -> &[usize] {
        &self.outer
    }

    pub fn is_convention(&self) -> bool {
        self.convention
    }

    /// Predual axes of each group, inner first, each in the group's order.
    fn axes<R: Representation + ?Sized>(&self, rep: &R) -> Result<(Vec<usize>, Vec<usize>)> {
        let idx = rep.predual_indices();
        let find = |g: &[usize]| -> Result<Vec<usize>> {
            g.iter()
                .map(|j| {
                    idx.iter().position(|k| k == j).ok_or_else(|| {
                        Error::Domain(format!("position {j} is not in the predual {idx:?}"))
                    })
                })
                .collect()
        };
        Ok((find(&self.inner)?, find(&self.outer)?))
    }
}

/// Node weights `(w_in, w_out)` with `w_in · w_out` the predual weight; the density is shared
/// evenly among the axes.
pub fn split_weights<R: Representation + ?Sized>(
    rep: &R,
    split: &PredualSplit,
) -> Result<(f64, f64)> {
    let (inner, outer) = split.axes(rep)?;
    let axes = rep.predual_lattice().axes();
    let volume: f64 = axes.iter().map(|a| a.step).product();
    let density = rep.predual_weight() / volume;
    let part = |g: &[usize]| {
        g.iter().map(|&a| axes[a].step).product::<f64>()
            * density.powf(g.len() as f64 / axes.len() as f64)
    };
    Ok((part(&inner), part(&outer)))
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Exponent(p))
    }
}

/// Flat offsets of every node of the sub-lattice spanned by `axes`.
fn offsets(shape: &[usize], strides: &[usize], axes: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &a in axes.iter().rev() {
        out = (0..shape[a])
            .flat_map(|m| out.iter().map(move |o| o + m * strides[a]))
            .collect();
    }
    out
}

fn lp(values: impl Iterator<Item = f64>, p: f64, w: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (pairwise_sum_f64(values.map(|v| v.powf(p))) * w).powf(1.0 / p)
    }
}

/// `‖(∫_{g_e²} (∫_{g_e¹} |F|^r)^{s/r})^{1/s}‖` of a predual array, `∞` as a maximum.
pub fn mixed_norm<R: Representation + ?Sized>(
    a: &GridFunction,
    r: f64,
    s: f64,
    split: &PredualSplit,
    rep: &R,
) -> Result<f64> {
    check_exponent(r)?;
    check_exponent(s)?;
    rep.check_predual(a)?;
    let (inner, outer) = split.axes(rep)?;
    let (w_in, w_out) = split_weights(rep, split)?;
    let lattice = rep.predual_lattice();
    let shape = lattice.shape();
    let strides = lattice.strides();
    let inner_off = offsets(&shape, &strides, &inner);
    let outer_off = offsets(&shape, &strides, &outer);
    let v = a.values();
    let slices: Vec<f64> = outer_off
        .par_iter()
        .map(|&o| lp(inner_off.iter().map(|&i| v[o + i].norm()), r, w_in))
        .collect();
    Ok(lp(slices.into_iter(), s, w_out))
}

/// `‖f‖_{M^{r,s}_φ}`: the mixed norm of `A_φ f`.
pub fn mod_norm<R: Representation + ?Sized>(
    f: &GridFunction,
    phi: &GridFunction,
    r: f64,
    s: f64,
    split: &PredualSplit,
    rep: &R,
) -> Result<f64> {
    check_exponent(r)?;
    check_exponent(s)?;
    if phi.norm() == 0.0 {
        return Err(Error::Degenerate("zero window".into()));
    }
    mixed_norm(&rep.ambiguity(f, phi)?, r, s, split, rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurConstant {
    /// `sqrt(max row sum · max column sum)` of `|K(X, ξ)| = |Φ(ξ∘e^{ad X})|`.
    pub analytic: f64,
    /// Largest `‖F‖_{M^{2,∞}_Φ} / ‖F‖` over the sampled family, `F = Φ` included.
    pub empirical: f64,
    /// Ratio for `F = Φ`.
    pub at_window: f64,
    pub samples: usize,
}

/// Schur bound for `F ↦ A_Φ F(·, Y)` from `L²(O)` to `L²(g_e)`, uniform in `Y`.
///
/// Only grid geometry is touched, so this stays cheap on grids whose predual arrays would not
/// fit in memory.
pub fn schur_bound(rep: &TildeRep, phi: &GridFunction) -> Result<f64> {
    rep.check_vector(phi)?;
    if phi.max_abs() == 0.0 {
        return Err(Error::Degenerate("zero window".into()));
    }
    let t = rep.t_lattice();
    let edge = boundary_ratio(t, phi.values(), 1);
    if edge > 1e-8 {
        return Err(Error::InsufficientDecay(format!(
            "window at the box edge is {edge:.3e} of its maximum"
        )));
    }
    let (w_x, _) = split_weights(rep, &PredualSplit::default_for(rep))?;
    let abs: Vec<f64> = phi.values().iter().map(|v| v.norm()).collect();
    let mut rows: f64 = 0.0;
    let mut cols = vec![0.0f64; abs.len()];
    for x in 0..rep.x_lattice().len() {
        let mut row = 0.0;
        for (d, s, l) in t.shifted_runs(&rep.shift_steps(x)) {
            for k in 0..l {
                row += abs[s + k];
                cols[d + k] += abs[s + k];
            }
        }
        rows = rows.max(row);
    }
    let col = cols.into_iter().fold(0.0, f64::max);
    Ok((rows * rep.hilbert_weight() * col * w_x).sqrt())
}

/// Analytic Schur constant together with the empirical ratio over `F = Φ` and `samples`
/// random inputs (Gaussian-type and white noise, alternating).
pub fn schur_embedding_constant<G: Rng + ?Sized>(
    rep: &TildeRep,
    phi: &GridFunction,
    samples: usize,
    rng: &mut G,
) -> Result<SchurConstant> {
    let analytic = schur_bound(rep, phi)?;
    let split = PredualSplit::default_for(rep);
    let ratio = |f: &GridFunction| -> Result<f64> {
        Ok(mod_norm(f, phi, 2.0, f64::INFINITY, &split, rep)? / f.norm())
    };
    let at_window = ratio(phi)?;
    let mut empirical = at_window;
    let n = rep.hilbert_lattice().len();
    for k in 0..samples {
        let f = if k % 2 == 0 {
            random_gaussian_vector(rep, rng)
        } else {
            let v = (0..n)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            rep.new_vector(v)?
        };
        empirical = empirical.max(ratio(&f)?);
    }
    Ok(SchurConstant {
        analytic,
        empirical,
        at_window,
        samples,
    })
}
