//! Identity suites behind `verify`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::qfrac;
use crate::liecore::{AlgebraElement, GroupElement};
use crate::orbit::{coadjoint_action, Orbit};
use crate::repgrid::{
    gaussian_window, pitilde_apply_f64, GridFunction, GridOperator, Representation, ResampleMode,
    TildeRep,
};
use crate::wpcalc::{
    ambiguity_tilde_closed_form, ambiguity_tilde_closed_form_f64, ambiguity_two_step,
    moyal_identity, quantize, random_gaussian_symbol, random_gaussian_vector, reconstruct,
    reconstruct_with, trace_identities, wigner,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Orbit,
    Moyal,
    Trace,
    Rankone,
    Reconstruct,
    TildeAmbiguity,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Orbit => "orbit",
            Suite::Moyal => "moyal",
            Suite::Trace => "trace",
            Suite::Rankone => "rankone",
            Suite::Reconstruct => "reconstruct",
            Suite::TildeAmbiguity => "tilde-ambiguity",
        }
    }

    /// Points per axis used when `--points` is not given.
    pub fn default_points(self) -> usize {
        match self {
            Suite::Orbit | Suite::TildeAmbiguity => 16,
            _ => 64,
        }
    }

    pub fn all() -> Vec<Suite> {
        Suite::value_variants().to_vec()
    }
}

/// Base tolerances, before `--tolerance-scale`.
pub fn tolerance_table(scale: f64) -> BTreeMap<String, f64> {
    [
        ("orbit.violations", 0.0),
        ("moyal.identity", 1e-8),
        ("moyal.isometry", 1e-8),
        ("trace.trace", 1e-6),
        ("trace.product", 1e-6),
        ("trace.product_adjoint", 1e-6),
        ("rankone.op_norm", 1e-7),
        ("reconstruct.reference", 1e-6),
        ("reconstruct.general", 1e-6),
        ("tilde-ambiguity.closed_vs_matrix", 1e-8),
        ("tilde-ambiguity.closed_vs_fft", 1e-8),
        ("tilde-ambiguity.two_step", 1e-10),
        ("modnorm.m22", 1e-8),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v * scale))
    .collect()
}

#[derive(Clone, Debug, Default)]
pub struct SuiteResult {
    pub residuals: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn put(&mut self, key: &str, v: f64) {
        self.residuals.insert(key.to_string(), v);
    }

    /// Every residual within its tolerance (NaN fails).
    pub fn pass(&self, suite: Suite, tol: &BTreeMap<String, f64>) -> bool {
        self.residuals.iter().all(|(k, v)| {
            let t = tol[&format!("{}.{k}", suite.name())];
            *v <= t
        })
    }
}

pub fn rng_for(seed: u64, suite: Suite) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite as u64)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Symbolic orbit checks: `|isotropy| + d = n`, `d` even, and `Ad*(exp X)ξ₀` on the graph.
pub fn orbit_suite(orbit: &Orbit, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let g = orbit.algebra();
    let n = g.dim();
    let d = orbit.dim();
    let mut bad = 0usize;
    if orbit.isotropy_basis().len() + d != n {
        bad += 1;
    }
    if d % 2 != 0 {
        bad += 1;
    }
    for _ in 0..10 {
        let x: Vec<_> = (0..n)
            .map(|_| qfrac(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
            .collect();
        let h = GroupElement::from_log(g, x)?;
        let xi = coadjoint_action(&h, orbit.xi0())?;
        if !orbit.contains(xi.coords()) {
            bad += 1;
        }
    }
    let mut r = SuiteResult::default();
    r.put("violations", bad as f64);
    r.notes
        .push(format!("e = {:?}, d = {d}", orbit.jump_indices()));
    Ok(r)
}

pub fn moyal_suite<R: Representation>(
    rep: &R,
    rng: &mut ChaCha8Rng,
    quadruples: usize,
) -> Result<SuiteResult> {
    let mut worst: f64 = 0.0;
    for _ in 0..quadruples {
        let f1 = random_gaussian_vector(rep, rng);
        let p1 = random_gaussian_vector(rep, rng);
        let f2 = random_gaussian_vector(rep, rng);
        let p2 = random_gaussian_vector(rep, rng);
        let (lhs, rhs) = moyal_identity(&f1, &p1, &f2, &p2, rep)?;
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    let f = random_gaussian_vector(rep, rng);
    let phi = random_gaussian_vector(rep, rng);
    let a = rep.ambiguity(&f, &phi)?;
    let mut r = SuiteResult::default();
    r.put("identity", worst);
    r.put("isometry", rel(a.norm(), f.norm() * phi.norm()));
    Ok(r)
}

pub fn trace_suite<R: Representation>(rep: &R, rng: &mut ChaCha8Rng) -> Result<SuiteResult> {
    let a = random_gaussian_symbol(rep, rng);
    let b = random_gaussian_symbol(rep, rng);
    let t = trace_identities(&a, &b, rep)?;
    let mut r = SuiteResult::default();
    r.put("trace", t.trace);
    r.put("product", t.product);
    r.put("product_adjoint", t.product_adjoint);
    Ok(r)
}

/// `Op(W(f, φ)) = (·|φ) f` in operator norm, relative.
pub fn rankone_suite<R: Representation>(
    rep: &R,
    f: &GridFunction,
    phi: &GridFunction,
) -> Result<SuiteResult> {
    let op = quantize(&wigner(f, phi, rep)?, rep)?;
    let expect = GridOperator::rank_one(f, phi)?;
    let mut r = SuiteResult::default();
    r.put("op_norm", op.sub(&expect)?.op_norm() / expect.op_norm());
    Ok(r)
}

pub fn reconstruct_suite<R: Representation>(
    rep: &R,
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<SuiteResult> {
    let phi0 = gaussian_window(rep, sigma)?;
    let f = random_gaussian_vector(rep, rng);
    let phi = random_gaussian_vector(rep, rng);
    let back = reconstruct(&f, &phi0, rep)?;
    let general = reconstruct_with(&f, &phi0, &phi, rep)?;
    let expect = f.scale(phi.inner(phi0.function())?);
    let mut r = SuiteResult::default();
    r.put("reference", back.sub(&f)?.norm() / f.norm());
    r.put("general", general.sub(&expect)?.norm() / f.norm());
    Ok(r)
}

/// Closed form against `(f | π̃(exp(X, Y)) φ)` and the FFT path on a `side × side` sample of
/// lattice nodes, and against the two-step shortcut at rational points when the class is ≤ 2.
pub fn tilde_ambiguity_suite(
    rep: &TildeRep,
    rng: &mut ChaCha8Rng,
    side: usize,
) -> Result<SuiteResult> {
    let alg = rep.orbit().algebra();
    let f = random_gaussian_vector(rep, rng);
    let phi = random_gaussian_vector(rep, rng);
    let a = rep.ambiguity(&f, &phi)?;
    let scale = a.max_abs();
    let ny = rep.y_lattice().len();
    let nx = rep.x_lattice().len();
    let pick = |len: usize, k: usize| (k * len) / side;
    let (mut vs_matrix, mut vs_fft): (f64, f64) = (0.0, 0.0);
    for i in 0..side.min(ny) {
        let yi = pick(ny, i);
        let y = rep.embed_predual(&rep.y_lattice().point(yi));
        for j in 0..side.min(nx) {
            let xi = pick(nx, j);
            let x = rep.embed_predual(&rep.x_lattice().point(xi));
            let c = ambiguity_tilde_closed_form_f64(rep, &f, &phi, &x, &y)?;
            let fiber = alg.exp_ad_integral_f64(&x) * DVector::from_column_slice(&y);
            let moved =
                pitilde_apply_f64(rep, &x, fiber.as_slice(), &phi, ResampleMode::AffineOnly)?;
            vs_matrix = vs_matrix.max((c - f.inner(&moved)?).norm() / scale);
            vs_fft = vs_fft.max((c - a.values()[yi * nx + xi]).norm() / scale);
        }
    }
    let mut r = SuiteResult::default();
    r.put("closed_vs_matrix", vs_matrix);
    r.put("closed_vs_fft", vs_fft);
    if alg.class() <= 2 {
        let mut worst: f64 = 0.0;
        let n = alg.dim();
        for _ in 0..side {
            let mut draw = || {
                let c = (0..n)
                    .map(|_| qfrac(rng.gen_range(-12..=12), rng.gen_range(1..=6)))
                    .collect();
                AlgebraElement::new(alg, c)
            };
            let (x, y) = (draw()?, draw()?);
            let c = ambiguity_tilde_closed_form(rep, &f, &phi, &x, &y)?;
            let s = ambiguity_two_step(rep, &f, &phi, &x, &y)?;
            worst = worst.max((c - s).norm() / (f.norm() * phi.norm()));
        }
        r.put("two_step", worst);
    } else {
        r.notes.push(format!(
            "two-step shortcut skipped: nilpotency class {}",
            alg.class()
        ));
    }
    Ok(r)
}
