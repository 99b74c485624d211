use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::exact::{Poly, QMatrix, Q};
use crate::liecore::Algebra;

/// The coadjoint action in chart coordinates: `(x, t) ↦ chart(Ad*(exp x) Ξ(t))`,
/// as `d` polynomials in the `n + d` variables `(x_1..x_n, t_1..t_d)`.
#[derive(Clone, Debug)]
pub struct ChartMap {
    n: usize,
    d: usize,
    polys: Vec<Poly>,
    affine: bool,
    /// For affine maps: constant part `b_k(x)` and coefficients `A_kl(x)`.
    offset: Vec<Poly>,
    linear: Vec<Vec<Poly>>,
}

pub(crate) fn mat_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], nv: usize) -> Vec<Vec<Poly>> {
    let n = a.len();
    let mut out = vec![vec![Poly::zero(nv); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

impl ChartMap {
    pub(crate) fn build(alg: &Algebra, graph: &[Poly], jumps: &[usize]) -> Self {
        let n = alg.dim();
        let d = jumps.len();
        let nv = n + d;
        let t_map: Vec<usize> = (n..n + d).collect();
        let xi: Vec<Poly> = graph.iter().map(|p| p.embed(nv, &t_map)).collect();
        // ad(x)[k][j] = Σ_i x_i c[i][j][k]
        let mut ad = vec![vec![Poly::zero(nv); n]; n];
        for (i, ad_i) in (0..n).map(|i| {
            let mut e = vec![Q::zero(); n];
            e[i] = num_traits::One::one();
            (i, alg.ad_coords(&e))
        }) {
            for k in 0..n {
                for j in 0..n {
                    let c = &ad_i[(k, j)];
                    if !c.is_zero() {
                        ad[k][j] = &ad[k][j] + &Poly::var(nv, i).scale(c);
                    }
                }
            }
        }
        // M = e^{-ad x}
        let mut m: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Poly::constant(nv, num_traits::One::one())
                        } else {
                            Poly::zero(nv)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut power = m.clone();
        let mut fact = Q::from_integer(1.into());
        for p in 1..n.max(1) {
            power = mat_mul(&power, &ad, nv);
            if power.iter().flatten().all(Poly::is_zero) {
                break;
            }
            fact *= Q::from_integer(p.into());
            let sign: Q = if p % 2 == 1 {
                -Q::from_integer(1.into())
            } else {
                Q::from_integer(1.into())
            };
            let c = sign / &fact;
            for i in 0..n {
                for j in 0..n {
                    if !power[i][j].is_zero() {
                        m[i][j] = &m[i][j] + &power[i][j].scale(&c);
                    }
                }
            }
        }
        let polys: Vec<Poly> = jumps
            .iter()
            .map(|&j| {
                let mut acc = Poly::zero(nv);
                for i in 0..n {
                    if !m[i][j].is_zero() && !xi[i].is_zero() {
                        acc = &acc + &(&xi[i] * &m[i][j]);
                    }
                }
                acc
            })
            .collect();
        let t_degree = |e: &[u32]| -> u32 { e[n..].iter().sum() };
        let affine = polys
            .iter()
            .all(|p| p.terms().all(|(e, _)| t_degree(e) <= 1));
        let mut offset = vec![Poly::zero(nv); d];
        let mut linear = vec![vec![Poly::zero(nv); d]; d];
        if affine {
            for (k, p) in polys.iter().enumerate() {
                for (e, c) in p.terms() {
                    match (n..n + d).find(|&v| e[v] == 1) {
                        None => offset[k].add_term(e.to_vec(), c.clone()),
                        Some(v) => {
                            let mut e2 = e.to_vec();
                            e2[v] = 0;
                            linear[k][v - n].add_term(e2, c.clone());
                        }
                    }
                }
            }
        }
        ChartMap {
            n,
            d,
            polys,
            affine,
            offset,
            linear,
        }
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Whether the action is affine in `t` for every `x`.
    pub fn is_affine(&self) -> bool {
        self.affine
    }

    fn full_f64(&self, x: &[f64], t: &[f64]) -> Vec<f64> {
        x.iter().chain(t).copied().collect()
    }

    pub fn eval_f64(&self, x: &[f64], t: &[f64]) -> Vec<f64> {
        let v = self.full_f64(x, t);
        self.polys.iter().map(|p| p.eval_f64(&v)).collect()
    }

    pub fn eval_q(&self, x: &[Q], t: &[Q]) -> Vec<Q> {
        let v: Vec<Q> = x.iter().chain(t).cloned().collect();
        self.polys.iter().map(|p| p.eval_q(&v)).collect()
    }

    /// `t ↦ A t + b` for the group element `exp x`, if the action is affine.
    pub fn affine_f64(&self, x: &[f64]) -> Option<(DMatrix<f64>, DVector<f64>)> {
        if !self.affine {
            return None;
        }
        let v = self.full_f64(x, &vec![0.0; self.d]);
        let a = DMatrix::from_fn(self.d, self.d, |k, l| self.linear[k][l].eval_f64(&v));
        let b = DVector::from_fn(self.d, |k, _| self.offset[k].eval_f64(&v));
        Some((a, b))
    }

    pub fn affine_q(&self, x: &[Q]) -> Option<(QMatrix, Vec<Q>)> {
        if !self.affine {
            return None;
        }
        let v: Vec<Q> = x
            .iter()
            .cloned()
            .chain((0..self.d).map(|_| Q::zero()))
            .collect();
        let mut a = QMatrix::zeros(self.d, self.d);
        for k in 0..self.d {
            for l in 0..self.d {
                a[(k, l)] = self.linear[k][l].eval_q(&v);
            }
        }
        let b = self.offset.iter().map(|p| p.eval_q(&v)).collect();
        Some((a, b))
    }

    pub fn algebra_dim(&self) -> usize {
        self.n
    }
}
