//! Orbit Fourier transform, quantization, symbols, Moyal product, ambiguity and Wigner
//! functions, reconstruction and decay diagnostics.
//!
//! Measures: Liouville on the orbit, `(2π)^{-d}`-normalized Lebesgue on the predual, so the
//! discrete transforms below are exactly inverse to each other.

mod symbols;

pub use symbols::{
    flat_top, gaussian_symbol, random_gaussian_spec, random_gaussian_symbol,
    random_gaussian_vector, windowed_constant, windowed_polynomial, GaussianSpec, GAUSSIAN_SPREAD,
};

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{centered_forward, centered_inverse, Axis, Lattice};
use crate::liecore::AlgebraElement;
use crate::repgrid::{
    boundary_ratio, pairwise_sum, GridFunction, GridOperator, ReferenceWindow, Representation,
    TildeRep, TrigInterpolant, C64,
};

/// Fraction of each predual axis (at both ends) treated as the outer frequency shell.
pub const OUTER_SHELL: f64 = 0.1;
/// Largest energy fraction tolerated in the outer shell.
pub const ALIAS_TOL: f64 = 1e-8;
/// Largest `|â|` at the predual box edge, relative to its maximum.
pub const DECAY_TOL: f64 = 1e-10;
/// Default threshold for [`smoothness_score`].
pub const SMOOTH_THRESHOLD: f64 = 4.0;

fn in_outer_shell(a: &Axis, m: usize) -> bool {
    a.n > 1 && (a.signed(m).unsigned_abs() as f64) >= (0.5 - OUTER_SHELL / 2.0) * a.n as f64
}

/// Fraction of `Σ|v|²` carried by the outer shell.
pub fn outer_shell_fraction(lattice: &Lattice, values: &[C64]) -> f64 {
    let axes = lattice.axes();
    let Some(last) = axes.last() else {
        return 0.0;
    };
    let shell: Vec<bool> = (0..last.n).map(|m| in_outer_shell(last, m)).collect();
    let mut outer = 0.0;
    let mut total = 0.0;
    lattice.for_each_row(|start, prefix| {
        let row = &values[start..start + last.n];
        let e: f64 = row.iter().map(|v| v.norm_sqr()).sum();
        total += e;
        if prefix.iter().zip(axes).any(|(&m, a)| in_outer_shell(a, m)) {
            outer += e;
        } else {
            outer += row
                .iter()
                .zip(&shell)
                .filter(|(_, &s)| s)
                .map(|(v, _)| v.norm_sqr())
                .sum::<f64>();
        }
    });
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

/// `â(X) = ∫ e^{-i⟨ξ,X⟩} a(ξ) dξ` without the aliasing guard.
pub fn orbit_fourier_unchecked<R: Representation + ?Sized>(
    rep: &R,
    a: &GridFunction,
) -> Result<GridFunction> {
    rep.check_symbol(a)?;
    let mut v = centered_forward(rep.symbol_lattice(), a.values());
    let w = rep.symbol_weight();
    v.iter_mut().for_each(|z| *z *= w);
    rep.new_predual(v)
}

/// Orbit Fourier transform with the aliasing guard.
pub fn orbit_fourier<R: Representation + ?Sized>(
    rep: &R,
    a: &GridFunction,
) -> Result<GridFunction> {
    let ahat = orbit_fourier_unchecked(rep, a)?;
    let frac = outer_shell_fraction(rep.predual_lattice(), ahat.values());
    if frac > ALIAS_TOL {
        return Err(Error::Aliasing(format!(
            "outer frequency shell carries {frac:.3e} of the energy"
        )));
    }
    Ok(ahat)
}

/// `a(ξ) = ∫ e^{i⟨ξ,X⟩} â(X) dX`.
pub fn inverse_orbit_fourier<R: Representation + ?Sized>(
    rep: &R,
    ahat: &GridFunction,
) -> Result<GridFunction> {
    rep.check_predual(ahat)?;
    let mut v = centered_inverse(rep.symbol_lattice(), ahat.values());
    let w = rep.predual_weight();
    v.iter_mut().for_each(|z| *z *= w);
    rep.new_symbol(v)
}

fn decay_guard(lattice: &Lattice, values: &[C64], tol: f64, what: &str) -> Result<()> {
    let r = boundary_ratio(lattice, values, 1);
    if r > tol {
        return Err(Error::InsufficientDecay(format!(
            "{what} at the predual box edge is {r:.3e} of its maximum"
        )));
    }
    Ok(())
}

/// `Op(a) = ∫ â(X) π(exp X) dX`.
pub fn quantize<R: Representation + ?Sized>(a: &GridFunction, rep: &R) -> Result<GridOperator> {
    let ahat = orbit_fourier(rep, a)?;
    quantize_fourier(&ahat, rep)
}

/// Quantization from a predual function.
pub fn quantize_fourier<R: Representation + ?Sized>(
    ahat: &GridFunction,
    rep: &R,
) -> Result<GridOperator> {
    rep.check_predual(ahat)?;
    decay_guard(rep.predual_lattice(), ahat.values(), DECAY_TOL, "|â|")?;
    rep.assemble(ahat)
}

/// Symbol with `â(X) = Tr(π(exp X)⁻¹ T)`.
pub fn symbol_of<R: Representation + ?Sized>(t: &GridOperator, rep: &R) -> Result<GridFunction> {
    let ahat = rep.trace_pairings(t)?;
    decay_guard(rep.predual_lattice(), ahat.values(), 1e-8, "trace pairing")?;
    inverse_orbit_fourier(rep, &ahat)
}

/// `a # b` with `Op(a # b) = Op(a) Op(b)`.
pub fn moyal_product<R: Representation + ?Sized>(
    a: &GridFunction,
    b: &GridFunction,
    rep: &R,
) -> Result<GridFunction> {
    let p = quantize(a, rep)?.compose(&quantize(b, rep)?)?;
    symbol_of(&p, rep)
}

/// `X ↦ (f | π(exp X) φ)`.
pub fn ambiguity<R: Representation + ?Sized>(
    f: &GridFunction,
    phi: &GridFunction,
    rep: &R,
) -> Result<GridFunction> {
    rep.ambiguity(f, phi)
}

/// Both sides of the Moyal identity: `(A_{φ₁} f₁ | A_{φ₂} f₂)` and `(f₁|f₂)(φ₂|φ₁)`.
pub fn moyal_identity<R: Representation + ?Sized>(
    f1: &GridFunction,
    phi1: &GridFunction,
    f2: &GridFunction,
    phi2: &GridFunction,
    rep: &R,
) -> Result<(C64, C64)> {
    let lhs = rep.ambiguity_pairing(f1, phi1, f2, phi2)?;
    Ok((lhs, f1.inner(f2)? * phi2.inner(phi1)?))
}

/// Cross-Wigner distribution: the symbol whose transform is the ambiguity function.
pub fn wigner<R: Representation + ?Sized>(
    f: &GridFunction,
    phi: &GridFunction,
    rep: &R,
) -> Result<GridFunction> {
    inverse_orbit_fourier(rep, &rep.ambiguity(f, phi)?)
}

/// `∫ (A_{φ₀} f)(X) π(exp X) φ₀ dX`, which returns `f` for a unit window.
pub fn reconstruct<R: Representation + ?Sized>(
    f: &GridFunction,
    phi0: &ReferenceWindow,
    rep: &R,
) -> Result<GridFunction> {
    reconstruct_with(f, phi0, phi0.function(), rep)
}

/// `∫ (A_{φ₀} f)(X) π(exp X) φ dX = (φ|φ₀) f`.
pub fn reconstruct_with<R: Representation + ?Sized>(
    f: &GridFunction,
    phi0: &ReferenceWindow,
    phi: &GridFunction,
    rep: &R,
) -> Result<GridFunction> {
    let a = rep.ambiguity(f, phi0.function())?;
    decay_guard(rep.predual_lattice(), a.values(), 1e-8, "|A f|")?;
    rep.synthesize(&a, phi)
}

fn interpolate_at(
    lattice: &Lattice,
    values: &[C64],
    ip: &mut Option<TrigInterpolant>,
    t: &[f64],
) -> C64 {
    let m: Option<Vec<i64>> = t
        .iter()
        .zip(lattice.axes())
        .map(|(&v, a)| a.steps_of(v - a.coord(0), 1e-9))
        .collect();
    match m {
        Some(m) => values[lattice.ravel_wrapped(&m)],
        None => ip
            .get_or_insert_with(|| TrigInterpolant::new(lattice, values))
            .eval(t),
    }
}

/// Direct quadrature of
/// `∫_O e^{-i⟨ξ, ∫₀¹ e^{s ad X} Y ds⟩} f(ξ) conj(φ(ξ∘e^{ad X})) dξ`.
pub fn ambiguity_tilde_closed_form(
    rep: &TildeRep,
    f: &GridFunction,
    phi: &GridFunction,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<C64> {
    let g = rep.orbit().algebra();
    if **x.parent() != **g || **y.parent() != **g {
        return Err(Error::MismatchedAlgebra);
    }
    ambiguity_tilde_closed_form_f64(rep, f, phi, &x.to_f64(), &y.to_f64())
}

/// As [`ambiguity_tilde_closed_form`] with full algebra coordinates in floating point.
pub fn ambiguity_tilde_closed_form_f64(
    rep: &TildeRep,
    f: &GridFunction,
    phi: &GridFunction,
    x: &[f64],
    y: &[f64],
) -> Result<C64> {
    rep.check_vector(f)?;
    rep.check_vector(phi)?;
    let g = rep.orbit().algebra();
    let my = g.exp_ad_integral_f64(x) * DVector::from_column_slice(y);
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let t = rep.t_lattice();
    let chart = rep.orbit().chart_map();
    let mut ip = None;
    let terms: Vec<C64> = (0..t.len())
        .map(|i| {
            let ph: f64 = rep.lifts()[i]
                .iter()
                .zip(my.iter())
                .map(|(a, b)| a * b)
                .sum();
            let moved = chart.eval_f64(&neg, &t.point(i));
            let pv = interpolate_at(t, phi.values(), &mut ip, &moved);
            Complex64::from_polar(1.0, -ph) * f.values()[i] * pv.conj()
        })
        .collect();
    Ok(pairwise_sum(terms.into_iter()) * rep.hilbert_weight())
}

/// Flat-orbit shortcut for two-step algebras:
/// `e^{-(i/2)⟨ξ₀,[X,Y]⟩} ∫ e^{-i⟨ξ,Y⟩} f(ξ) conj(φ(ξ + ξ₀∘ad X)) dξ`.
pub fn ambiguity_two_step(
    rep: &TildeRep,
    f: &GridFunction,
    phi: &GridFunction,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<C64> {
    let g = rep.orbit().algebra();
    if **x.parent() != **g || **y.parent() != **g {
        return Err(Error::MismatchedAlgebra);
    }
    if g.class() > 2 {
        return Err(Error::UnsupportedRegime(format!(
            "the shortcut needs a two-step algebra, class is {}",
            g.class()
        )));
    }
    rep.check_vector(f)?;
    rep.check_vector(phi)?;
    let xf = x.to_f64();
    let yf = y.to_f64();
    let xi0 = rep.orbit().xi0().to_f64();
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    let central = dot(&xi0, &g.bracket_f64(&xf, &yf));
    // chart of ξ₀∘ad X
    let shift: Vec<f64> = rep
        .orbit()
        .jump_positions()
        .iter()
        .map(|&j| {
            let mut e = vec![0.0; g.dim()];
            e[j] = 1.0;
            dot(&xi0, &g.bracket_f64(&xf, &e))
        })
        .collect();
    let t = rep.t_lattice();
    let mut ip = None;
    let terms: Vec<C64> = (0..t.len())
        .map(|i| {
            let ti = t.point(i);
            let moved: Vec<f64> = ti.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let pv = interpolate_at(t, phi.values(), &mut ip, &moved);
            let ph = dot(&rep.lifts()[i], &yf);
            Complex64::from_polar(1.0, -ph) * f.values()[i] * pv.conj()
        })
        .collect();
    Ok(pairwise_sum(terms.into_iter())
        * rep.hilbert_weight()
        * Complex64::from_polar(1.0, -central / 2.0))
}

/// Decay exponent of `|A_{φ₀} f|` over dyadic shells `[2^{j-1}, 2^j)·r₀` of the physical
/// predual radius, `r₀ = max(1, largest step)`, from a least-squares fit of `log max|A|`
/// against `log r`, clamped to `[0, 50]`. Only shells inside the inscribed ball of the box
/// are used (the last one clipped), and the ball `r < r₀` is left out.
/// Shell maxima are floored at `1e-13` of the global maximum.
pub fn smoothness_score<R: Representation + ?Sized>(
    f: &GridFunction,
    phi0: &ReferenceWindow,
    rep: &R,
) -> Result<f64> {
    if f.norm() < 1e-300 || f.max_abs() == 0.0 {
        return Err(Error::Degenerate("zero input".into()));
    }
    let a = rep.ambiguity(f, phi0.function())?;
    Ok(decay_exponent(rep.predual_lattice(), a.values()))
}

/// The shell-fit exponent used by [`smoothness_score`].
pub fn decay_exponent(lattice: &Lattice, values: &[C64]) -> f64 {
    let global = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if global == 0.0 {
        return 0.0;
    }
    let axes = lattice.axes();
    let r0 = axes.iter().map(|a| a.step).fold(1.0, f64::max);
    let inscribed = axes
        .iter()
        .map(|a| a.half_width())
        .fold(f64::INFINITY, f64::min)
        / r0;
    if !(inscribed > 1.0) {
        return 0.0;
    }
    let shells = inscribed.log2().ceil() as usize;
    let mut maxima = vec![None::<f64>; shells + 1];
    lattice.for_each_multi(|i, m| {
        let r = m
            .iter()
            .zip(axes)
            .map(|(&m, a)| (a.coord(m) - a.origin).powi(2))
            .sum::<f64>()
            .sqrt()
            / r0;
        if r > inscribed {
            return;
        }
        let shell = if r < 1.0 {
            0
        } else {
            (r.log2().floor() as usize + 1).min(shells)
        };
        let v = values[i].norm();
        maxima[shell] = Some(maxima[shell].map_or(v, |m| m.max(v)));
    });
    let floor = 1e-13 * global;
    // geometric centre of each (clipped) shell
    let pts: Vec<(f64, f64)> = (1..=shells)
        .filter_map(|j| {
            let m = maxima[j]?;
            let lo = 2f64.powi(j as i32 - 1);
            let hi = (2.0 * lo).min(inscribed);
            Some((0.5 * (lo * hi).ln(), m.max(floor).ln()))
        })
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (-sxy / sxx).clamp(0.0, 50.0)
}

/// Relative residuals of `Tr Op(a) = ∫a`, `Tr(Op(a)Op(b)) = ∫ab`, `Tr(Op(a)Op(b)*) = ∫a b̄`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceResiduals {
    pub trace: f64,
    pub product: f64,
    pub product_adjoint: f64,
}

impl TraceResiduals {
    pub fn max(&self) -> f64 {
        self.trace.max(self.product).max(self.product_adjoint)
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn trace_identities<R: Representation + ?Sized>(
    a: &GridFunction,
    b: &GridFunction,
    rep: &R,
) -> Result<TraceResiduals> {
    let oa = quantize(a, rep)?;
    let ob = quantize(b, rep)?;
    let int_a = a.integral();
    let int_ab = a.mul(b)?.integral();
    let int_abar = a.inner(b)?;
    Ok(TraceResiduals {
        trace: rel(oa.trace(), int_a),
        product: rel(oa.trace_product(&ob), int_ab),
        product_adjoint: rel(oa.trace_product_adjoint(&ob), int_abar),
    })
}
