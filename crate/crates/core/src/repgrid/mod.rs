//! Unitary representations on discretized spaces.
//!
//! Every representation exposes three lattices: the Hilbert-space grid, the symbol
//! grid on the orbit (chart coordinates) and the predual grid (its Fourier dual).
//! On predual nodes `π(exp X)` is a monomial matrix, a permutation times phases;
//! the generic calculus in [`generic`] works from that alone.

pub mod generic;
mod resample;
mod schrodinger;
mod tilde;
mod window;

pub use resample::{
    boundary_ratio, heat_smooth, shift_periodic, spectral_derivative, TrigInterpolant,
};
pub use schrodinger::{schrodinger_apply, SchrodingerRep};
pub use tilde::{dpitilde_apply, pitilde_apply, pitilde_apply_f64, ResampleMode, TildeRep};
pub use window::{gaussian_smooth, gaussian_window, gaussian_window_with, ReferenceWindow};

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Functions on an orbit in chart coordinates (symbols, or vectors of L²(O)).
    Orbit,
    /// Functions on the predual.
    Predual,
    /// Functions on the real line (Schrödinger model).
    Line,
}

/// Complex samples on a lattice with a uniform quadrature weight per node.
#[derive(Clone, Debug)]
pub struct GridFunction {
    lattice: Arc<Lattice>,
    weight: f64,
    domain: Domain,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(
        lattice: Arc<Lattice>,
        weight: f64,
        domain: Domain,
        values: Vec<C64>,
    ) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::Dimension {
                expected: lattice.len(),
                got: values.len(),
            });
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::Grid(format!(
                "quadrature weight {weight} is not positive"
            )));
        }
        Ok(Self {
            lattice,
            weight,
            domain,
            values,
        })
    }

    pub fn zeros(lattice: Arc<Lattice>, weight: f64, domain: Domain) -> Self {
        let n = lattice.len();
        Self::new(lattice, weight, domain, vec![C64::new(0.0, 0.0); n]).expect("zero function")
    }

    pub fn from_fn(
        lattice: Arc<Lattice>,
        weight: f64,
        domain: Domain,
        f: impl Fn(&[f64]) -> C64,
    ) -> Self {
        let mut values = Vec::with_capacity(lattice.len());
        lattice.for_each_point(|_, p| values.push(f(p)));
        Self::new(lattice, weight, domain, values).expect("sampled function")
    }

    /// Same grid and weight, new values.
    pub fn with_values(&self, values: Vec<C64>) -> Result<Self> {
        Self::new(self.lattice.clone(), self.weight, self.domain, values)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::Domain(format!(
                "{:?} function paired with {:?} function",
                self.domain, other.domain
            )));
        }
        self.lattice.check_same(&other.lattice)?;
        if (self.weight - other.weight).abs() > 1e-12 * self.weight {
            return Err(Error::Domain("quadrature weights differ".into()));
        }
        Ok(())
    }

    /// `(f | g) = w Σ f ḡ`, linear in the first slot.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_compatible(other)?;
        Ok(pairwise_sum(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b.conj()),
        ) * self.weight)
    }

    pub fn norm_sq(&self) -> f64 {
        self.weight * pairwise_sum_f64(self.values.iter().map(|v| v.norm_sqr()))
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `w Σ f`.
    pub fn integral(&self) -> C64 {
        pairwise_sum(self.values.iter().copied()) * self.weight
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            weight: self.weight,
            domain: self.domain,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            lattice: self.lattice.clone(),
            weight: self.weight,
            domain: self.domain,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Relative L² distance `‖self − other‖ / ‖other‖`.
    pub fn rel_dist(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm() / other.norm())
    }

    pub fn to_dvector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.values)
    }
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(it: impl Iterator<Item = C64>) -> C64 {
    let v: Vec<C64> = it.collect();
    fn rec(v: &[C64]) -> C64 {
        if v.len() <= 64 {
            v.iter().sum()
        } else {
            let (a, b) = v.split_at(v.len() / 2);
            rec(a) + rec(b)
        }
    }
    rec(&v)
}

pub fn pairwise_sum_f64(it: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = it.collect();
    fn rec(v: &[f64]) -> f64 {
        if v.len() <= 64 {
            v.iter().sum()
        } else {
            let (a, b) = v.split_at(v.len() / 2);
            rec(a) + rec(b)
        }
    }
    rec(&v)
}

/// Dense operator on a Hilbert-space grid.
#[derive(Clone, Debug)]
pub struct GridOperator {
    matrix: DMatrix<C64>,
    lattice: Arc<Lattice>,
    weight: f64,
    domain: Domain,
}

impl GridOperator {
    pub fn new(matrix: DMatrix<C64>, space: &GridFunction) -> Result<Self> {
        Self::on(matrix, space.lattice.clone(), space.weight, space.domain)
    }

    pub fn on(
        matrix: DMatrix<C64>,
        lattice: Arc<Lattice>,
        weight: f64,
        domain: Domain,
    ) -> Result<Self> {
        let n = lattice.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension {
                expected: n,
                got: matrix.nrows(),
            });
        }
        if matrix
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::Degenerate("operator has non-finite entries".into()));
        }
        Ok(Self {
            matrix,
            lattice,
            weight,
            domain,
        })
    }

    pub fn identity_on(lattice: Arc<Lattice>, weight: f64, domain: Domain) -> Self {
        let n = lattice.len();
        Self {
            matrix: DMatrix::identity(n, n),
            lattice,
            weight,
            domain,
        }
    }

    /// `(·|φ₂) φ₁`.
    pub fn rank_one(phi1: &GridFunction, phi2: &GridFunction) -> Result<Self> {
        phi1.check_compatible(phi2)?;
        let a = phi1.to_dvector();
        let b = phi2.to_dvector();
        let m = (a * b.adjoint()) * C64::new(phi1.weight, 0.0);
        Self::new(m, phi1)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        if f.domain != self.domain {
            return Err(Error::Domain(
                "operator applied to a function on another space".into(),
            ));
        }
        self.lattice.check_same(&f.lattice)?;
        let v = &self.matrix * f.to_dvector();
        f.with_values(v.as_slice().to_vec())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            lattice: self.lattice.clone(),
            weight: self.weight,
            domain: self.domain,
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.lattice.check_same(&other.lattice)?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            lattice: self.lattice.clone(),
            weight: self.weight,
            domain: self.domain,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lattice.check_same(&other.lattice)?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
            lattice: self.lattice.clone(),
            weight: self.weight,
            domain: self.domain,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            matrix: &self.matrix * c,
            lattice: self.lattice.clone(),
            weight: self.weight,
            domain: self.domain,
        }
    }

    pub fn trace(&self) -> C64 {
        pairwise_sum(self.matrix.diagonal().iter().copied())
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim();
        let cols: Vec<C64> = (0..n)
            .map(|j| {
                // Σ_i A[j, i] B[i, j]
                let b = other.matrix.column(j);
                pairwise_sum((0..n).map(|i| self.matrix[(j, i)] * b[i]))
            })
            .collect();
        pairwise_sum(cols.into_iter())
    }

    /// `Tr(A B*) = Σ A_ij conj(B_ij)`.
    pub fn trace_product_adjoint(&self, other: &Self) -> C64 {
        pairwise_sum(
            self.matrix
                .iter()
                .zip(other.matrix.iter())
                .map(|(a, b)| a * b.conj()),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        pairwise_sum_f64(self.matrix.iter().map(|v| v.norm_sqr())).sqrt()
    }

    /// Operator norm by power iteration on `A*A`, run to convergence. The inner-product
    /// weight is uniform, so matrix and operator norms agree.
    pub fn op_norm(&self) -> f64 {
        self.op_norm_lower(500)
    }

    /// Power-iteration estimate after at most `iters` steps. Every iterate is a lower bound.
    pub fn op_norm_lower(&self, iters: usize) -> f64 {
        let n = self.dim();
        if n == 0 {
            return 0.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut v = DVector::from_fn(n, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let mut est: f64 = 0.0;
        for _ in 0..iters {
            let nv = v.norm();
            if nv == 0.0 {
                return est;
            }
            v /= C64::new(nv, 0.0);
            let w = &self.matrix * &v;
            let next = w.norm();
            v = self.matrix.ad_mul(&w);
            if (next - est).abs() <= 1e-13 * next {
                return next;
            }
            est = est.max(next);
        }
        est
    }
}

/// `π(exp X)` on a predual node: `(π f)[i] = phase[i] · f[src[i]]`.
#[derive(Clone, Debug)]
pub struct Monomial {
    pub src: Vec<usize>,
    pub phase: Vec<C64>,
}

impl Monomial {
    pub fn apply(&self, f: &[C64]) -> Vec<C64> {
        self.src
            .iter()
            .zip(&self.phase)
            .map(|(&s, p)| p * f[s])
            .collect()
    }
}

/// A unitary representation restricted to a finite predual lattice.
pub trait Representation: Send + Sync {
    fn name(&self) -> &str;

    fn hilbert_lattice(&self) -> &Arc<Lattice>;
    fn hilbert_weight(&self) -> f64;
    fn hilbert_domain(&self) -> Domain;

    /// Chart lattice of the orbit carrying the symbols.
    fn symbol_lattice(&self) -> &Arc<Lattice>;
    /// Liouville weight of one symbol cell.
    fn symbol_weight(&self) -> f64;

    fn predual_lattice(&self) -> &Arc<Lattice>;
    /// Normalized predual weight of one node.
    fn predual_weight(&self) -> f64;

    /// 0-based algebra position of each predual axis, in axis order.
    fn predual_indices(&self) -> Vec<usize>;
    /// Dimension of the algebra those positions refer to.
    fn algebra_dim(&self) -> usize;

    /// `π(exp X)` for the predual node `node`.
    fn node_operator(&self, node: usize) -> Result<Monomial>;

    fn new_vector(&self, values: Vec<C64>) -> Result<GridFunction> {
        GridFunction::new(
            self.hilbert_lattice().clone(),
            self.hilbert_weight(),
            self.hilbert_domain(),
            values,
        )
    }

    fn new_symbol(&self, values: Vec<C64>) -> Result<GridFunction> {
        GridFunction::new(
            self.symbol_lattice().clone(),
            self.symbol_weight(),
            Domain::Orbit,
            values,
        )
    }

    fn new_predual(&self, values: Vec<C64>) -> Result<GridFunction> {
        GridFunction::new(
            self.predual_lattice().clone(),
            self.predual_weight(),
            Domain::Predual,
            values,
        )
    }

    fn vector_from_fn(&self, f: &dyn Fn(&[f64]) -> C64) -> GridFunction {
        GridFunction::from_fn(
            self.hilbert_lattice().clone(),
            self.hilbert_weight(),
            self.hilbert_domain(),
            f,
        )
    }

    fn symbol_from_fn(&self, f: &dyn Fn(&[f64]) -> C64) -> GridFunction {
        GridFunction::from_fn(
            self.symbol_lattice().clone(),
            self.symbol_weight(),
            Domain::Orbit,
            f,
        )
    }

    fn check_vector(&self, f: &GridFunction) -> Result<()> {
        if f.domain() != self.hilbert_domain() {
            return Err(Error::Domain(format!(
                "expected a {:?} vector, got {:?}",
                self.hilbert_domain(),
                f.domain()
            )));
        }
        self.hilbert_lattice().check_same(f.lattice())
    }

    fn check_predual(&self, f: &GridFunction) -> Result<()> {
        if f.domain() != Domain::Predual {
            return Err(Error::Domain("expected a predual function".into()));
        }
        self.predual_lattice().check_same(f.lattice())
    }

    fn check_symbol(&self, f: &GridFunction) -> Result<()> {
        if f.domain() != Domain::Orbit {
            return Err(Error::Domain("expected a symbol on the orbit".into()));
        }
        self.symbol_lattice().check_same(f.lattice())
    }

    /// `X ↦ (f | π(exp X) φ)` on every predual node.
    fn ambiguity(&self, f: &GridFunction, phi: &GridFunction) -> Result<GridFunction> {
        generic::ambiguity(self, f, phi)
    }

    /// `Σ_X w c(X) π(exp X) φ`.
    fn synthesize(&self, coeffs: &GridFunction, phi: &GridFunction) -> Result<GridFunction> {
        generic::synthesize(self, coeffs, phi)
    }

    /// `Σ_X w â(X) π(exp X)` as a dense matrix.
    fn assemble(&self, fhat: &GridFunction) -> Result<GridOperator> {
        generic::assemble(self, fhat)
    }

    /// `X ↦ Tr(π(exp X)⁻¹ T)`.
    fn trace_pairings(&self, t: &GridOperator) -> Result<GridFunction> {
        generic::trace_pairings(self, t)
    }

    /// `(A_{φ₁} f₁ | A_{φ₂} f₂)` in the predual inner product.
    fn ambiguity_pairing(
        &self,
        f1: &GridFunction,
        phi1: &GridFunction,
        f2: &GridFunction,
        phi2: &GridFunction,
    ) -> Result<C64> {
        self.ambiguity(f1, phi1)?.inner(&self.ambiguity(f2, phi2)?)
    }
}
