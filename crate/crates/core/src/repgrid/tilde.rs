use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::resample::{boundary_ratio, shift_periodic, spectral_derivative, TrigInterpolant};
use super::{pairwise_sum, Domain, GridFunction, GridOperator, Monomial, Representation, C64};
use crate::error::{Error, Result};
use crate::exact::{factorial, to_f64, Poly, Q};
use crate::lattice::{apply_separable, centered_factors, fft_nd, forward_factors, Axis, Lattice};
use crate::liecore::{tangent_algebra, AlgebraElement, Functional, GroupElement};
use crate::orbit::{make_grid, Orbit, OrbitData, OrbitGrid, DEFAULT_NODE_CAP};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResampleMode {
    /// Affine chart actions only; anything else is an error.
    #[default]
    AffineOnly,
    /// Fall back to trigonometric interpolation for polynomial actions.
    Interpolate,
}

/// The representation `π̃(g, Y) f(ξ) = e^{i⟨ξ,Y⟩} f(Ad*(g⁻¹)ξ)` of `G ⋉ g` on `L²(O)`.
///
/// Predual coordinates are `(y, x)` for `(Y, X) = (Σ y_k X_{j_k}, Σ x_k X_{j_k})`.
/// Requires the translation regime: for `X ∈ g_e` the pull-back is a lattice translation
/// `t ↦ t + S x` with `S` a signed permutation pattern, and
/// `⟨Ξ(t), ∫₀¹ e^{s ad X} X_{j_k} ds⟩ = t_k + c_k(x)`.
#[derive(Clone, Debug)]
pub struct TildeRep {
    orbit: Orbit,
    grid: OrbitGrid,
    tilde_orbit: Orbit,
    hilbert_weight: f64,
    symbol: Arc<Lattice>,
    symbol_weight: f64,
    predual: Arc<Lattice>,
    predual_weight: f64,
    y_lattice: Lattice,
    x_lattice: Lattice,
    /// x-axis `l` moves t-axis `shift[l].0` by `shift[l].1` steps per x step.
    shift: Vec<(usize, i64)>,
    /// `c_k` as polynomials in the `d` predual coordinates `x`.
    phase_offset: Vec<Poly>,
    lifts: Vec<Vec<f64>>,
    /// Factors of the centered transform from `t` to `y`: flattened on `t`, per axis on `y`.
    pre: Vec<C64>,
    post: Vec<Vec<C64>>,
}

impl TildeRep {
    pub fn new(orbit: &Orbit, n: usize, half_widths: &[f64]) -> Result<Self> {
        Self::with_cap(orbit, n, half_widths, DEFAULT_NODE_CAP)
    }

    /// Box half-width `sqrt(π n / 2)` on every axis.
    pub fn balanced(orbit: &Orbit, n: usize) -> Result<Self> {
        Self::new(orbit, n, &[(PI * n as f64 / 2.0).sqrt()])
    }

    pub fn with_cap(orbit: &Orbit, n: usize, half_widths: &[f64], cap: usize) -> Result<Self> {
        let d = orbit.dim();
        let grid = make_grid(orbit, half_widths, n, cap)?;
        let nodes = grid.len().checked_mul(grid.len());
        match nodes {
            Some(v) if v <= cap => {}
            _ => {
                return Err(Error::GridTooLarge {
                    nodes: nodes.unwrap_or(usize::MAX),
                    cap,
                })
            }
        }
        let g = orbit.algebra();
        let dim = g.dim();
        let jumps = orbit.jump_positions().to_vec();

        let tangent = tangent_algebra(g);
        let xi_t: Vec<Q> = orbit
            .xi0()
            .coords()
            .iter()
            .cloned()
            .chain((0..dim).map(|_| Q::zero()))
            .collect();
        let tilde_orbit = OrbitData::new(&Functional::new(&tangent, xi_t)?)?;
        let expected: Vec<usize> = jumps
            .iter()
            .copied()
            .chain(jumps.iter().map(|&j| dim + j))
            .collect();
        if tilde_orbit.jump_positions() != expected.as_slice() {
            return Err(Error::UnsupportedRegime(format!(
                "tangent predual {:?} differs from g_e × g_e {:?}",
                tilde_orbit.jump_indices(),
                expected.iter().map(|j| j + 1).collect::<Vec<_>>()
            )));
        }

        let (s, phase_offset) = translation_regime(orbit)?;
        let t_lattice = grid.lattice().clone();
        let y_lattice = t_lattice.dual();
        let mut shift = Vec::with_capacity(d);
        let mut x_axes = Vec::with_capacity(d);
        for l in 0..d {
            let rows: Vec<usize> = (0..d).filter(|&k| !s[k][l].is_zero()).collect();
            let k = rows[0];
            let a = to_f64(&s[k][l]);
            let unit = a.abs();
            let tax = &t_lattice.axes()[k];
            x_axes.push(Axis::new(n, tax.step / unit, 0.0));
            shift.push((k, if a > 0.0 { 1 } else { -1 }));
        }
        let x_lattice = Lattice::new(x_axes);
        let eta = x_lattice.dual();
        let symbol = t_lattice.product(&eta);
        let predual = symbol.dual();
        let symbol_weight = symbol.cell_volume() * tilde_orbit.liouville_density();
        let predual_weight = predual.cell_volume() * tilde_orbit.predual_density();
        let nh = t_lattice.len() as f64;
        if (predual_weight * nh - 1.0).abs() > 1e-10 {
            return Err(Error::UnsupportedRegime(format!(
                "predual weight {predual_weight} is not 1/{nh}"
            )));
        }
        let lifts = (0..grid.len()).map(|i| grid.lift(i)).collect();
        let pre = centered_factors(&t_lattice).0;
        let post = forward_factors(&t_lattice).1;
        Ok(Self {
            orbit: orbit.clone(),
            hilbert_weight: grid.liouville_weight(),
            grid,
            tilde_orbit,
            symbol: Arc::new(symbol),
            symbol_weight,
            predual: Arc::new(predual),
            predual_weight,
            y_lattice,
            x_lattice,
            shift,
            phase_offset,
            lifts,
            pre,
            post,
        })
    }

    pub fn orbit(&self) -> &Orbit {
        &self.orbit
    }

    pub fn grid(&self) -> &OrbitGrid {
        &self.grid
    }

    /// The orbit `Õ` of `ξ̃₀ = (ξ₀, 0)` in the tangent algebra.
    pub fn tilde_orbit(&self) -> &Orbit {
        &self.tilde_orbit
    }

    pub fn t_lattice(&self) -> &Arc<Lattice> {
        self.grid.lattice()
    }

    pub fn y_lattice(&self) -> &Lattice {
        &self.y_lattice
    }

    pub fn x_lattice(&self) -> &Lattice {
        &self.x_lattice
    }

    /// `Ξ(t_i)` for every Hilbert-grid node.
    pub fn lifts(&self) -> &[Vec<f64>] {
        &self.lifts
    }

    /// Full algebra coordinates of `Σ c_k X_{j_k}`.
    pub fn embed_predual(&self, c: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.orbit.algebra().dim()];
        for (&j, &ck) in self.orbit.jump_positions().iter().zip(c) {
            v[j] = ck;
        }
        v
    }

    /// Splits a predual node into its `y` and `x` indices.
    pub fn split_node(&self, node: usize) -> (usize, usize) {
        let nx = self.x_lattice.len();
        (node / nx, node % nx)
    }

    /// Chart shift in whole steps for the x-node `x_idx`.
    pub fn shift_steps(&self, x_idx: usize) -> Vec<i64> {
        let m = self.x_lattice.unravel(x_idx);
        let mut out = vec![0i64; self.shift.len()];
        for (l, &(k, sgn)) in self.shift.iter().enumerate() {
            out[k] += sgn * self.x_lattice.axes()[l].signed(m[l]);
        }
        out
    }

    /// `c(x)` at predual coordinates `x`.
    pub fn phase_offset(&self, x: &[f64]) -> Vec<f64> {
        self.phase_offset.iter().map(|p| p.eval_f64(x)).collect()
    }

    /// Shifted runs and offset `c(x)` for an x-node.
    fn x_node(&self, x_idx: usize) -> (Vec<(usize, usize, usize)>, Vec<f64>) {
        let x = self.x_lattice.point(x_idx);
        (
            self.t_lattice().shifted_runs(&self.shift_steps(x_idx)),
            self.phase_offset(&x),
        )
    }

    /// Per-axis `y` factors `w^{[k=0]} post_k(y) e^{∓i y·c}`.
    fn row_factors(&self, c: &[f64], sign: f64, w: f64) -> Vec<Vec<C64>> {
        self.y_lattice
            .axes()
            .iter()
            .zip(c)
            .zip(&self.post)
            .enumerate()
            .map(|(k, ((a, &ck), post))| {
                let scale = if k == 0 { w } else { 1.0 };
                (0..a.n)
                    .map(|m| {
                        let p = if sign < 0.0 { post[m] } else { post[m].conj() };
                        p * Complex64::from_polar(scale, sign * a.coord(m) * ck)
                    })
                    .collect()
            })
            .collect()
    }

    /// Ambiguity row at `x_idx`; `fpre` is `f` times the centered pre-factor.
    fn ambiguity_row(&self, x_idx: usize, fpre: &[C64], phi: &[C64], row: &mut [C64]) {
        let (runs, c) = self.x_node(x_idx);
        self.ambiguity_row_with(
            &runs,
            &self.row_factors(&c, -1.0, self.hilbert_weight),
            fpre,
            phi,
            row,
        );
    }

    fn ambiguity_row_with(
        &self,
        runs: &[(usize, usize, usize)],
        factors: &[Vec<C64>],
        fpre: &[C64],
        phi: &[C64],
        row: &mut [C64],
    ) {
        for &(d, s, l) in runs {
            for k in 0..l {
                row[d + k] = fpre[d + k] * phi[s + k].conj();
            }
        }
        fft_nd(row, &self.t_lattice().shape(), false);
        apply_separable(row, factors);
    }

    /// `Σ_y w c(x, y) e^{i⟨Ξ, M_X Y⟩}` on `t`, still missing the conjugate pre-factor.
    fn inverse_row(&self, row: &mut [C64], c: &[f64]) {
        apply_separable(row, &self.row_factors(c, 1.0, self.predual_weight));
        fft_nd(row, &self.t_lattice().shape(), true);
    }

    /// Fills the predual array block by block: `fill(x0, block)` writes the raw rows of x-nodes
    /// `x0..`, then `f(x_idx, row)` finishes each row.
    fn collect_rows(
        &self,
        mut fill: impl FnMut(usize, &mut [C64]),
        f: impl Fn(usize, &mut [C64]) + Sync,
    ) -> Result<GridFunction> {
        let (nx, ny) = (self.x_lattice.len(), self.y_lattice.len());
        let mut out = vec![C64::new(0.0, 0.0); nx * ny];
        let mut scratch = vec![C64::new(0.0, 0.0); X_BLOCK * ny];
        for x0 in (0..nx).step_by(X_BLOCK) {
            let len = X_BLOCK.min(nx - x0);
            let blk = &mut scratch[..len * ny];
            fill(x0, blk);
            blk.par_chunks_mut(ny)
                .enumerate()
                .for_each(|(j, row)| f(x0 + j, row));
            for yi in 0..ny {
                let dst = &mut out[yi * nx + x0..yi * nx + x0 + len];
                for (j, o) in dst.iter_mut().enumerate() {
                    *o = blk[j * ny + yi];
                }
            }
        }
        self.new_predual(out)
    }

    /// Hands the y-vector of `values` at every x-node to `f`, then each finished block to
    /// `sink(x0, block)` in order.
    fn visit_rows(
        &self,
        values: &[C64],
        f: impl Fn(usize, &mut [C64]) + Sync,
        mut sink: impl FnMut(usize, &[C64]),
    ) {
        let (nx, ny) = (self.x_lattice.len(), self.y_lattice.len());
        let mut scratch = vec![C64::new(0.0, 0.0); X_BLOCK * ny];
        for x0 in (0..nx).step_by(X_BLOCK) {
            let len = X_BLOCK.min(nx - x0);
            let blk = &mut scratch[..len * ny];
            for yi in 0..ny {
                let src = &values[yi * nx + x0..yi * nx + x0 + len];
                for (j, v) in src.iter().enumerate() {
                    blk[j * ny + yi] = *v;
                }
            }
            blk.par_chunks_mut(ny)
                .enumerate()
                .for_each(|(j, row)| f(x0 + j, row));
            sink(x0, blk);
        }
    }
}

const X_BLOCK: usize = 32;

/// Checks the translation regime and returns `S` (pull-back shift, `t ↦ t + S x`) and `c_k(x)`.
fn translation_regime(orbit: &Orbit) -> Result<(Vec<Vec<Q>>, Vec<Poly>)> {
    let g = orbit.algebra();
    let n = g.dim();
    let d = orbit.dim();
    let jumps = orbit.jump_positions();
    let nv = 2 * d;
    // chart map variables (x_1..x_n, t_1..t_d) -> (x_e, t) with x replaced by -x
    let mut subs = vec![Poly::zero(nv); n + d];
    for (l, &j) in jumps.iter().enumerate() {
        subs[j] = Poly::var(nv, l).scale(&-Q::one());
    }
    for k in 0..d {
        subs[n + k] = Poly::var(nv, d + k);
    }
    let not_translation =
        || Error::UnsupportedRegime("coadjoint action of g_e is not a chart translation".into());
    let mut s = vec![vec![Q::zero(); d]; d];
    for (k, p) in orbit.chart_map().polys().iter().enumerate() {
        let r = &p.compose(&subs) - &Poly::var(nv, d + k);
        for (e, c) in r.terms() {
            let tdeg: u32 = e[d..].iter().sum();
            let xdeg: u32 = e[..d].iter().sum();
            if tdeg != 0 || xdeg != 1 {
                return Err(not_translation());
            }
            let l = e[..d].iter().position(|&v| v == 1).unwrap();
            s[k][l] = c.clone();
        }
    }
    for l in 0..d {
        let col = (0..d).filter(|&k| !s[k][l].is_zero()).count();
        let row = (0..d).filter(|&k| !s[l][k].is_zero()).count();
        if col != 1 || row != 1 {
            return Err(Error::UnsupportedRegime(
                "predual translations do not map onto single chart axes".into(),
            ));
        }
    }
    // M_X = Σ ad(X)^m / (m+1)!, X = Σ x_l X_{j_l}
    let mut ad = vec![vec![Poly::zero(nv); n]; n];
    for (l, &jl) in jumps.iter().enumerate() {
        for j in 0..n {
            for k in 0..n {
                let c = g.structure_constant(jl, j, k);
                if !c.is_zero() {
                    ad[k][j] = &ad[k][j] + &Poly::var(nv, l).scale(&c);
                }
            }
        }
    }
    let ident: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::constant(nv, Q::one())
                    } else {
                        Poly::zero(nv)
                    }
                })
                .collect()
        })
        .collect();
    let mut m = ident.clone();
    let mut power = ident;
    for p in 1..n.max(1) {
        power = crate::orbit::chart_mat_mul(&power, &ad, nv);
        if power.iter().flatten().all(Poly::is_zero) {
            break;
        }
        let c = Q::one() / factorial(p + 1);
        for i in 0..n {
            for j in 0..n {
                m[i][j] = &m[i][j] + &power[i][j].scale(&c);
            }
        }
    }
    let t_map: Vec<usize> = (d..2 * d).collect();
    let xi: Vec<Poly> = orbit.graph().iter().map(|p| p.embed(nv, &t_map)).collect();
    let mut offsets = Vec::with_capacity(d);
    for (k, &jk) in jumps.iter().enumerate() {
        let mut gk = Poly::zero(nv);
        for i in 0..n {
            if !m[i][jk].is_zero() && !xi[i].is_zero() {
                gk = &gk + &(&xi[i] * &m[i][jk]);
            }
        }
        let ck = &gk - &Poly::var(nv, d + k);
        if ck.terms().any(|(e, _)| e[d..].iter().any(|&v| v > 0)) {
            return Err(Error::UnsupportedRegime(
                "phase of π̃ on the predual is not affine in the chart".into(),
            ));
        }
        let mut proj = Poly::zero(d);
        for (e, c) in ck.terms() {
            proj.add_term(e[..d].to_vec(), c.clone());
        }
        offsets.push(proj);
    }
    Ok((s, offsets))
}

impl Representation for TildeRep {
    fn name(&self) -> &str {
        "tilde"
    }

    fn hilbert_lattice(&self) -> &Arc<Lattice> {
        self.grid.lattice()
    }

    fn hilbert_weight(&self) -> f64 {
        self.hilbert_weight
    }

    fn hilbert_domain(&self) -> Domain {
        Domain::Orbit
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

    /// `Y` axes map to the second copy `n + e`, `X` axes to `e`.
    fn predual_indices(&self) -> Vec<usize> {
        let n = self.orbit.algebra().dim();
        let e = self.orbit.jump_positions();
        e.iter().map(|&j| n + j).chain(e.iter().copied()).collect()
    }

    fn algebra_dim(&self) -> usize {
        2 * self.orbit.algebra().dim()
    }

    /// Direct evaluation from the chart map and the integrated exponential, independent of
    /// the translation-regime shortcuts used by the fast paths.
    fn node_operator(&self, node: usize) -> Result<Monomial> {
        let (yi, xi) = self.split_node(node);
        let y = self.embed_predual(&self.y_lattice.point(yi));
        let x = self.embed_predual(&self.x_lattice.point(xi));
        let g = self.orbit.algebra();
        let my = g.exp_ad_integral_f64(&x) * nalgebra::DVector::from_column_slice(&y);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let t = self.t_lattice();
        let mut src = Vec::with_capacity(t.len());
        let mut phase = Vec::with_capacity(t.len());
        for i in 0..t.len() {
            let target = self.orbit.chart_map().eval_f64(&neg, &t.point(i));
            let m: Option<Vec<i64>> = target
                .iter()
                .zip(t.axes())
                .map(|(&v, a)| a.steps_of(v - a.coord(0), 1e-8))
                .collect();
            let m = m.ok_or_else(|| {
                Error::UnsupportedRegime("predual node moves the chart off the lattice".into())
            })?;
            src.push(t.ravel_wrapped(&m));
            let ph: f64 = self.lifts[i]
                .iter()
                .zip(my.iter())
                .map(|(a, b)| a * b)
                .sum();
            phase.push(Complex64::from_polar(1.0, ph));
        }
        Ok(Monomial { src, phase })
    }

    fn ambiguity(&self, f: &GridFunction, phi: &GridFunction) -> Result<GridFunction> {
        self.check_vector(f)?;
        self.check_vector(phi)?;
        let fpre: Vec<C64> = f
            .values()
            .iter()
            .zip(&self.pre)
            .map(|(a, b)| a * b)
            .collect();
        self.collect_rows(
            |_, _| {},
            |x_idx, row| self.ambiguity_row(x_idx, &fpre, phi.values(), row),
        )
    }

    fn ambiguity_pairing(
        &self,
        f1: &GridFunction,
        phi1: &GridFunction,
        f2: &GridFunction,
        phi2: &GridFunction,
    ) -> Result<C64> {
        for v in [f1, phi1, f2, phi2] {
            self.check_vector(v)?;
        }
        let ny = self.y_lattice.len();
        let pre = |f: &GridFunction| -> Vec<C64> {
            f.values()
                .iter()
                .zip(&self.pre)
                .map(|(a, b)| a * b)
                .collect()
        };
        let (p1, p2) = (pre(f1), pre(f2));
        let rows: Vec<C64> = (0..self.x_lattice.len())
            .into_par_iter()
            .map_init(
                || (vec![C64::new(0.0, 0.0); ny], vec![C64::new(0.0, 0.0); ny]),
                |(r1, r2), x_idx| {
                    let (runs, c) = self.x_node(x_idx);
                    let factors = self.row_factors(&c, -1.0, self.hilbert_weight);
                    self.ambiguity_row_with(&runs, &factors, &p1, phi1.values(), r1);
                    self.ambiguity_row_with(&runs, &factors, &p2, phi2.values(), r2);
                    pairwise_sum(r1.iter().zip(r2.iter()).map(|(a, b)| a * b.conj()))
                },
            )
            .collect();
        Ok(pairwise_sum(rows.into_iter()) * self.predual_weight)
    }

    fn synthesize(&self, coeffs: &GridFunction, phi: &GridFunction) -> Result<GridFunction> {
        self.check_predual(coeffs)?;
        self.check_vector(phi)?;
        let ny = self.y_lattice.len();
        let pv = phi.values();
        let mut out = vec![C64::new(0.0, 0.0); ny];
        self.visit_rows(
            coeffs.values(),
            |x_idx, row| {
                let c = self.phase_offset(&self.x_lattice.point(x_idx));
                self.inverse_row(row, &c);
            },
            |x0, blk| {
                for (j, row) in blk.chunks(ny).enumerate() {
                    for &(d, s, l) in &self.t_lattice().shifted_runs(&self.shift_steps(x0 + j)) {
                        for k in 0..l {
                            out[d + k] += row[d + k] * pv[s + k];
                        }
                    }
                }
            },
        );
        out.iter_mut()
            .zip(&self.pre)
            .for_each(|(v, p)| *v *= p.conj());
        self.new_vector(out)
    }

    fn assemble(&self, fhat: &GridFunction) -> Result<GridOperator> {
        self.check_predual(fhat)?;
        let ny = self.y_lattice.len();
        let t = self.t_lattice();
        let mut mat = DMatrix::<C64>::zeros(ny, ny);
        let m = mat.as_mut_slice();
        self.visit_rows(
            fhat.values(),
            |x_idx, row| {
                let c = self.phase_offset(&self.x_lattice.point(x_idx));
                self.inverse_row(row, &c);
                row.iter_mut()
                    .zip(&self.pre)
                    .for_each(|(v, p)| *v *= p.conj());
            },
            |x0, blk| {
                for (j, row) in blk.chunks(ny).enumerate() {
                    for &(d, s, l) in &t.shifted_runs(&self.shift_steps(x0 + j)) {
                        for k in 0..l {
                            // column-major entry (d + k, s + k)
                            m[(s + k) * ny + d + k] += row[d + k];
                        }
                    }
                }
            },
        );
        GridOperator::on(mat, t.clone(), self.hilbert_weight, Domain::Orbit)
    }

    fn trace_pairings(&self, op: &GridOperator) -> Result<GridFunction> {
        self.t_lattice().check_same(op.lattice())?;
        let ny = self.y_lattice.len();
        let m = op.matrix().as_slice();
        self.collect_rows(
            |x0, blk| {
                for (j, row) in blk.chunks_mut(ny).enumerate() {
                    for &(d, s, l) in &self.t_lattice().shifted_runs(&self.shift_steps(x0 + j)) {
                        for k in 0..l {
                            row[d + k] = m[(s + k) * ny + d + k] * self.pre[d + k];
                        }
                    }
                }
            },
            |x_idx, row| {
                let c = self.phase_offset(&self.x_lattice.point(x_idx));
                fft_nd(row, &self.t_lattice().shape(), false);
                apply_separable(row, &self.row_factors(&c, -1.0, 1.0));
            },
        )
    }
}

/// `π̃(g, Y) f` for a group element `g` of `G` and `Y ∈ g`.
pub fn pitilde_apply(
    rep: &TildeRep,
    g: &GroupElement,
    y: &AlgebraElement,
    f: &GridFunction,
    mode: ResampleMode,
) -> Result<GridFunction> {
    let alg = rep.orbit.algebra();
    if **g.parent() != **alg || **y.parent() != **alg {
        return Err(Error::MismatchedAlgebra);
    }
    let x: Vec<f64> = g.log_coords().iter().map(to_f64).collect();
    pitilde_apply_f64(rep, &x, &y.to_f64(), f, mode)
}

/// As [`pitilde_apply`] with `g = exp(Σ x_i X_i)` and `Y = Σ y_i X_i` in floating point.
pub fn pitilde_apply_f64(
    rep: &TildeRep,
    x: &[f64],
    y: &[f64],
    f: &GridFunction,
    mode: ResampleMode,
) -> Result<GridFunction> {
    rep.check_vector(f)?;
    let n = rep.orbit.algebra().dim();
    if x.len() != n || y.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len().min(y.len()),
        });
    }
    let t = rep.t_lattice();
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let chart = rep.orbit.chart_map();
    let pulled: Vec<C64> = match chart.affine_f64(&neg) {
        Some((a, b)) if (a.clone() - DMatrix::identity(a.nrows(), a.ncols())).amax() <= 1e-14 => {
            shift_periodic(t, f.values(), b.as_slice())
        }
        affine => {
            if affine.is_none() && mode == ResampleMode::AffineOnly {
                return Err(Error::NonAffineAction);
            }
            let ip = TrigInterpolant::new(t, f.values());
            (0..t.len())
                .into_par_iter()
                .map(|i| ip.eval(&chart.eval_f64(&neg, &t.point(i))))
                .collect()
        }
    };
    let values = pulled
        .into_iter()
        .zip(&rep.lifts)
        .map(|(v, l)| {
            let ph: f64 = l.iter().zip(y).map(|(a, b)| a * b).sum();
            v * Complex64::from_polar(1.0, ph)
        })
        .collect();
    f.with_values(values)
}

/// `dπ̃(X, Y) f(ξ) = i⟨ξ,Y⟩ f(ξ) + d/dt f(ξ∘e^{t ad X})|₀` with spectral chart derivatives.
pub fn dpitilde_apply(
    rep: &TildeRep,
    x: &AlgebraElement,
    y: &AlgebraElement,
    f: &GridFunction,
) -> Result<GridFunction> {
    let alg = rep.orbit.algebra();
    if **x.parent() != **alg || **y.parent() != **alg {
        return Err(Error::MismatchedAlgebra);
    }
    rep.check_vector(f)?;
    let t = rep.t_lattice();
    let depth = (t.axes().iter().map(|a| a.n).min().unwrap_or(16) / 16).max(1);
    let ratio = boundary_ratio(t, f.values(), depth);
    if ratio > 1e-10 {
        return Err(Error::InsufficientDecay(format!(
            "|f| near the box boundary is {ratio:.3e} of its maximum"
        )));
    }
    let xf = x.to_f64();
    let yf = y.to_f64();
    let d = rep.orbit.dim();
    // [X, X_{j_k}]
    let brackets: Vec<Vec<f64>> = rep
        .orbit
        .jump_positions()
        .iter()
        .map(|&j| {
            let mut e = vec![0.0; alg.dim()];
            e[j] = 1.0;
            alg.bracket_f64(&xf, &e)
        })
        .collect();
    let grads: Vec<Vec<C64>> = (0..d)
        .map(|k| spectral_derivative(t, f.values(), k))
        .collect();
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };
    let values = (0..t.len())
        .map(|i| {
            let l = &rep.lifts[i];
            let mut v = f.values()[i] * C64::new(0.0, dot(l, &yf));
            for k in 0..d {
                v += grads[k][i] * dot(l, &brackets[k]);
            }
            v
        })
        .collect();
    f.with_values(values)
}
