//! Coadjoint orbits: isotropy algebra, jump indices, the polynomial graph chart and
//! uniform grids in chart coordinates.
//!
//! Convention: `Ad*(g)ξ = ξ ∘ Ad(g⁻¹) = ξ ∘ e^{-ad log g}`.

mod chart;
mod grid;

pub(crate) use chart::mat_mul as chart_mat_mul;
pub use chart::ChartMap;
pub use grid::{make_grid, OrbitGrid, DEFAULT_NODE_CAP};

use std::f64::consts::PI;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{to_f64, Poly, QMatrix, Q};
use crate::liecore::{Algebra, AlgebraElement, Functional, GroupElement};

/// `Ad*(g) ξ`.
pub fn coadjoint_action(g: &GroupElement, xi: &Functional) -> Result<Functional> {
    if **g.parent() != **xi.parent() {
        return Err(Error::MismatchedAlgebra);
    }
    let minus: Vec<Q> = g.log_coords().iter().map(|c| -c).collect();
    Ok(xi.compose(&g.parent().exp_ad_coords(&minus)))
}

/// Floating-point `Ad*(exp X) ξ`.
pub fn coadjoint_action_f64(alg: &Algebra, x: &[f64], xi: &[f64]) -> Vec<f64> {
    let minus: Vec<f64> = x.iter().map(|v| -v).collect();
    let m = alg.exp_ad_f64(&minus);
    (0..alg.dim())
        .map(|j| (0..alg.dim()).map(|i| xi[i] * m[(i, j)]).sum())
        .collect()
}

/// Rows `B[j][i] = ⟨ξ, [X_i, X_j]⟩`, the matrix of `X ↦ ξ ∘ ad X`.
fn coadjoint_derivative(xi: &Functional) -> QMatrix {
    let alg = xi.parent();
    let n = alg.dim();
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Q::zero();
            for (k, c) in xi.coords().iter().enumerate() {
                if !c.is_zero() {
                    acc += c * alg.structure_constant(i, j, k);
                }
            }
            m[(j, i)] = acc;
        }
    }
    m
}

/// Basis of `g_ξ = {X : ξ ∘ ad X = 0}`.
pub fn isotropy_algebra(xi: &Functional) -> Vec<AlgebraElement> {
    coadjoint_derivative(xi)
        .kernel()
        .into_iter()
        .map(|v| AlgebraElement::new(xi.parent(), v).expect("kernel vector has algebra length"))
        .collect()
}

/// 0-based positions `j` with `X_j ∉ g_{j-1} + g_ξ`.
fn jump_positions(alg: &Algebra, isotropy: &[Vec<Q>]) -> Vec<usize> {
    let n = alg.dim();
    let unit = |i: usize| -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        v[i] = Q::one();
        v
    };
    let mut out = Vec::new();
    let mut rows: Vec<Vec<Q>> = isotropy.to_vec();
    let mut rank = if rows.is_empty() {
        0
    } else {
        QMatrix::from_rows(&rows).rank()
    };
    for j in 0..n {
        rows.push(unit(j));
        let r = QMatrix::from_rows(&rows).rank();
        if r > rank {
            out.push(j);
        }
        rank = r;
    }
    out
}

/// Jump indices `e`, 1-based.
pub fn jump_indices(xi: &Functional) -> Vec<usize> {
    let iso: Vec<Vec<Q>> = isotropy_algebra(xi)
        .iter()
        .map(|x| x.coords().to_vec())
        .collect();
    jump_positions(xi.parent(), &iso)
        .into_iter()
        .map(|j| j + 1)
        .collect()
}

/// Pfaffian of an antisymmetric matrix by expansion along the first row.
pub fn pfaffian(m: &QMatrix) -> Q {
    let n = m.rows();
    if n == 0 {
        return Q::one();
    }
    if n % 2 == 1 {
        return Q::zero();
    }
    let mut acc = Q::zero();
    for j in 1..n {
        let a = &m[(0, j)];
        if a.is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let mut minor = QMatrix::zeros(n - 2, n - 2);
        for (r, &kr) in keep.iter().enumerate() {
            for (c, &kc) in keep.iter().enumerate() {
                minor[(r, c)] = m[(kr, kc)].clone();
            }
        }
        let term = a * pfaffian(&minor);
        // sign (-1)^{j+1} for 0-based j ≥ 1
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `ξ ↦ ξ ∘ e^{-s ad X}` on a vector of polynomial coordinates, `s` a polynomial.
fn flow(alg: &Algebra, xi: &[Poly], x: &[Q], s: &Poly) -> Vec<Poly> {
    let n = alg.dim();
    let nv = s.nvars();
    let ad = alg.ad_coords(x);
    let mut out = xi.to_vec();
    let mut power = QMatrix::identity(n);
    let mut s_pow = Poly::constant(nv, Q::one());
    let mut fact = Q::one();
    for m in 1..n.max(1) {
        power = &power * &ad;
        if power.is_zero() {
            break;
        }
        s_pow = &s_pow * s;
        fact *= Q::from_integer(m.into());
        let sign = if m % 2 == 1 { -Q::one() } else { Q::one() };
        let coef = sign / &fact;
        for j in 0..n {
            let mut acc = Poly::zero(nv);
            for i in 0..n {
                let c = &power[(i, j)];
                if !c.is_zero() && !xi[i].is_zero() {
                    acc = &acc + &xi[i].scale(c);
                }
            }
            if !acc.is_zero() {
                out[j] = &out[j] + &(&acc * &s_pow).scale(&coef);
            }
        }
    }
    out
}

/// Coadjoint orbit through `ξ₀` with its graph chart.
pub struct OrbitData {
    algebra: Algebra,
    xi0: Functional,
    isotropy: Vec<AlgebraElement>,
    jumps: Vec<usize>,
    graph: Vec<Poly>,
    pfaffian: Q,
    chart_map: ChartMap,
}

pub type Orbit = Arc<OrbitData>;

impl OrbitData {
    /// Builds the orbit chart and checks graph invariance symbolically.
    pub fn new(xi0: &Functional) -> Result<Orbit> {
        let alg = xi0.parent().clone();
        let n = alg.dim();
        let isotropy = isotropy_algebra(xi0);
        let iso_coords: Vec<Vec<Q>> = isotropy.iter().map(|x| x.coords().to_vec()).collect();
        let jumps = jump_positions(&alg, &iso_coords);
        let d = jumps.len();
        if isotropy.len() + d != n {
            return Err(Error::Degenerate(format!(
                "isotropy dimension {} plus {d} jump indices differs from {n}",
                isotropy.len()
            )));
        }
        if d % 2 == 1 {
            return Err(Error::Degenerate(format!("odd number of jump indices {d}")));
        }

        // ξ(s) = Ad*(exp(s_d X_{j_d}) ⋯ exp(s_1 X_{j_1})) ξ₀
        let mut xi_s: Vec<Poly> = xi0
            .coords()
            .iter()
            .map(|c| Poly::constant(d, c.clone()))
            .collect();
        for (k, &j) in jumps.iter().enumerate() {
            xi_s = flow(&alg, &xi_s, &unit(n, j), &Poly::var(d, k));
        }
        let solution = invert_triangular(&xi_s, &jumps)?;
        let graph: Vec<Poly> = xi_s.iter().map(|p| p.compose(&solution)).collect();
        for (k, &j) in jumps.iter().enumerate() {
            if graph[j] != Poly::var(d, k) {
                return Err(Error::Triangularization(format!(
                    "chart coordinate {} does not invert to t_{}",
                    j + 1,
                    k + 1
                )));
            }
        }

        let mut b = QMatrix::zeros(d, d);
        for (k, &jk) in jumps.iter().enumerate() {
            for (l, &jl) in jumps.iter().enumerate() {
                let br = alg.bracket_coords(&unit(n, jk), &unit(n, jl));
                b[(k, l)] = br
                    .iter()
                    .zip(xi0.coords())
                    .fold(Q::zero(), |acc, (u, v)| acc + u * v);
            }
        }
        let pf = pfaffian(&b);
        if pf.is_zero() {
            return Err(Error::Degenerate(
                "the orbit form is degenerate on the predual".into(),
            ));
        }
        let chart_map = ChartMap::build(&alg, &graph, &jumps);
        let orbit = OrbitData {
            algebra: alg,
            xi0: xi0.clone(),
            isotropy,
            jumps,
            graph,
            pfaffian: pf,
            chart_map,
        };
        orbit.check_invariance()?;
        if !orbit.contains(xi0.coords()) {
            return Err(Error::Triangularization(
                "base point does not satisfy its own graph equations".into(),
            ));
        }
        Ok(Arc::new(orbit))
    }

    fn check_invariance(&self) -> Result<()> {
        let d = self.dim();
        let n = self.algebra.dim();
        let lifted: Vec<Poly> = self
            .graph
            .iter()
            .map(|p| p.embed(d + 1, &(0..d).collect::<Vec<_>>()))
            .collect();
        let tau = Poly::var(d + 1, d);
        for &j in &self.jumps {
            let moved = flow(&self.algebra, &lifted, &unit(n, j), &tau);
            let t_new: Vec<Poly> = self.jumps.iter().map(|&jj| moved[jj].clone()).collect();
            for (i, p) in self.graph.iter().enumerate() {
                if self.jumps.contains(&i) {
                    continue;
                }
                if !(&moved[i] - &p.compose(&t_new)).is_zero() {
                    return Err(Error::Triangularization(format!(
                        "graph equation for coordinate {} is not invariant under the flow of X{}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn xi0(&self) -> &Functional {
        &self.xi0
    }

    pub fn isotropy_basis(&self) -> &[AlgebraElement] {
        &self.isotropy
    }

    /// Orbit dimension `d = |e|`.
    pub fn dim(&self) -> usize {
        self.jumps.len()
    }

    /// Jump indices, 1-based.
    pub fn jump_indices(&self) -> Vec<usize> {
        self.jumps.iter().map(|j| j + 1).collect()
    }

    /// Jump indices, 0-based.
    pub fn jump_positions(&self) -> &[usize] {
        &self.jumps
    }

    pub fn predual_basis(&self) -> Vec<AlgebraElement> {
        self.jumps
            .iter()
            .map(|&j| AlgebraElement::basis(&self.algebra, j))
            .collect()
    }

    /// `p_j(t)` for every coordinate `j`; for `j = j_k` this is `t_k`.
    pub fn graph(&self) -> &[Poly] {
        &self.graph
    }

    /// Graph polynomials `(j, p_j)` for `j ∉ e`, 1-based.
    pub fn graph_polynomials(&self) -> Vec<(usize, &Poly)> {
        self.graph
            .iter()
            .enumerate()
            .filter(|(j, _)| !self.jumps.contains(j))
            .map(|(j, p)| (j + 1, p))
            .collect()
    }

    /// `Pf(⟨ξ₀, [X_{j_k}, X_{j_l}]⟩)`.
    pub fn pfaffian(&self) -> &Q {
        &self.pfaffian
    }

    /// Liouville measure in chart coordinates: `(2π)^{-d/2} |Pf|^{-1} dt`.
    pub fn liouville_density(&self) -> f64 {
        (2.0 * PI).powf(-(self.dim() as f64) / 2.0) / to_f64(&self.pfaffian.abs())
    }

    /// Predual measure in coordinates `x_k` of `Σ x_k X_{j_k}`: `(2π)^{-d/2} |Pf| dx`.
    pub fn predual_density(&self) -> f64 {
        (2.0 * PI).powf(-(self.dim() as f64) / 2.0) * to_f64(&self.pfaffian.abs())
    }

    pub fn chart_map(&self) -> &ChartMap {
        &self.chart_map
    }

    /// Chart coordinates `(⟨ξ, X_{j_k}⟩)_k`.
    pub fn chart_of(&self, xi: &[Q]) -> Vec<Q> {
        self.jumps.iter().map(|&j| xi[j].clone()).collect()
    }

    pub fn lift_q(&self, t: &[Q]) -> Vec<Q> {
        self.graph.iter().map(|p| p.eval_q(t)).collect()
    }

    pub fn lift_f64(&self, t: &[f64]) -> Vec<f64> {
        self.graph.iter().map(|p| p.eval_f64(t)).collect()
    }

    /// Whether `ξ` satisfies the graph equations exactly.
    pub fn contains(&self, xi: &[Q]) -> bool {
        xi.len() == self.algebra.dim() && self.lift_q(&self.chart_of(xi)) == xi
    }

    pub fn base_chart(&self) -> Vec<Q> {
        self.chart_of(self.xi0.coords())
    }
}

impl std::fmt::Debug for OrbitData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OrbitData")
            .field("algebra", &self.algebra.name())
            .field("xi0", &self.xi0)
            .field("jump_indices", &self.jump_indices())
            .finish()
    }
}

/// Builds the orbit for `ξ₀`; see [`OrbitData::new`].
pub fn orbit_chart(xi0: &Functional) -> Result<Orbit> {
    OrbitData::new(xi0)
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Solves `t_k = ξ(s)_{j_k}` for `s` by repeated linear elimination.
/// Returns `s_m` as polynomials in `t` (same number of variables).
fn invert_triangular(xi_s: &[Poly], jumps: &[usize]) -> Result<Vec<Poly>> {
    let d = jumps.len();
    // Ring with s_0..s_{d-1}, t_0..t_{d-1}.
    let s_map: Vec<usize> = (0..d).collect();
    let eqs: Vec<Poly> = jumps
        .iter()
        .map(|&j| xi_s[j].embed(2 * d, &s_map))
        .collect();
    let mut sol: Vec<Option<Poly>> = vec![None; d];
    let mut done = vec![false; d];
    while done.iter().any(|x| !x) {
        let mut progress = false;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let subs: Vec<Poly> = (0..2 * d)
                .map(|v| {
                    if v < d {
                        sol[v].clone().unwrap_or_else(|| Poly::var(2 * d, v))
                    } else {
                        Poly::var(2 * d, v)
                    }
                })
                .collect();
            let q = eqs[k].compose(&subs);
            let free: Vec<usize> = q
                .support_vars()
                .into_iter()
                .filter(|&v| v < d && sol[v].is_none())
                .collect();
            match free.as_slice() {
                [] => {
                    return Err(Error::Triangularization(format!(
                        "coordinate {} does not depend on the remaining flow parameters",
                        jumps[k] + 1
                    )))
                }
                [m] => {
                    let m = *m;
                    if q.degree_in(m) != 1 {
                        continue;
                    }
                    let mut lin = Poly::zero(2 * d);
                    let mut rest = Poly::zero(2 * d);
                    for (e, c) in q.terms() {
                        if e[m] == 1 {
                            lin.add_term(e.to_vec(), c.clone());
                        } else {
                            rest.add_term(e.to_vec(), c.clone());
                        }
                    }
                    let mut unit_exp = vec![0; 2 * d];
                    unit_exp[m] = 1;
                    let coef = lin.coefficient(&unit_exp);
                    if lin.terms().count() != 1 || coef.is_zero() {
                        continue;
                    }
                    let rhs = &Poly::var(2 * d, d + k) - &rest;
                    sol[m] = Some(rhs.scale(&coef.recip()));
                    done[k] = true;
                    progress = true;
                }
                _ => continue,
            }
        }
        if !progress {
            return Err(Error::Triangularization(
                "no equation is linear in a single remaining flow parameter".into(),
            ));
        }
    }
    // Move solutions into the t-only ring.
    let to_t: Vec<Poly> = (0..2 * d)
        .map(|v| {
            if v < d {
                Poly::zero(d)
            } else {
                Poly::var(d, v - d)
            }
        })
        .collect();
    Ok(sol
        .into_iter()
        .map(|p| p.expect("every parameter solved").compose(&to_t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qfrac};
    use crate::liecore::NilpotentAlgebra;

    #[test]
    fn heisenberg_orbit() {
        let h = NilpotentAlgebra::heisenberg();
        let xi = Functional::dual_basis(&h, 0);
        assert_eq!(jump_indices(&xi), vec![2, 3]);
        let o = OrbitData::new(&xi).unwrap();
        assert_eq!(o.isotropy_basis().len(), 1);
        assert_eq!(o.isotropy_basis()[0].coords(), &[q(1), q(0), q(0)]);
        assert_eq!(o.graph()[0], Poly::constant(2, q(1)));
        assert_eq!(o.pfaffian().abs(), q(1));
    }

    #[test]
    fn filiform_orbit_is_quadratic() {
        let f = NilpotentAlgebra::filiform4();
        let xi = Functional::dual_basis(&f, 0);
        let o = OrbitData::new(&xi).unwrap();
        assert_eq!(o.jump_indices(), vec![2, 4]);
        assert_eq!(o.graph()[2], Poly::monomial(vec![2, 0], qfrac(1, 2)));
        assert_eq!(o.lift_q(&[q(1), q(0)]), vec![q(1), q(1), qfrac(1, 2), q(0)]);
        let iso: Vec<Vec<Q>> = o
            .isotropy_basis()
            .iter()
            .map(|x| x.coords().to_vec())
            .collect();
        let stacked = QMatrix::from_rows(&[iso, vec![unit(4, 0), unit(4, 2)]].concat());
        assert_eq!(stacked.rank(), 2);
    }

    #[test]
    fn abelian_orbit_is_a_point() {
        let a = NilpotentAlgebra::abelian(2);
        let xi = Functional::new(&a, vec![q(3), q(-1)]).unwrap();
        let o = OrbitData::new(&xi).unwrap();
        assert_eq!(o.dim(), 0);
        assert!(o.jump_indices().is_empty());
        assert_eq!(o.isotropy_basis().len(), 2);
        assert_eq!(o.lift_q(&[]), vec![q(3), q(-1)]);
    }

    #[test]
    fn coadjoint_sign_convention() {
        let h = NilpotentAlgebra::heisenberg();
        let xi = Functional::dual_basis(&h, 0);
        let g = GroupElement::exp(&AlgebraElement::basis(&h, 2).scale(&q(5)));
        let moved = coadjoint_action(&g, &xi).unwrap();
        // ξ₁ ∘ e^{-5 ad X3}: X2 ↦ X2 - 5 X1, so the ξ₂ coordinate is -5.
        assert_eq!(moved.coords(), &[q(1), q(-5), q(0)]);
    }

    #[test]
    fn pfaffian_of_standard_form() {
        let mut j = QMatrix::zeros(4, 4);
        j[(0, 1)] = q(2);
        j[(1, 0)] = q(-2);
        j[(2, 3)] = q(3);
        j[(3, 2)] = q(-3);
        assert_eq!(pfaffian(&j), q(6));
        assert_eq!(pfaffian(&j).clone() * pfaffian(&j), j.determinant());
    }
}
