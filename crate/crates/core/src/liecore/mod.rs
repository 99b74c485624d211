//! Nilpotent Lie algebras given by structure constants in a Jordan-Hölder basis,
//! their simply connected groups in first-kind exponential coordinates, semidirect
//! sums and the tangent group `G ⋉ g`.
//!
//! Indices are 0-based in the API. Group files and reports use 1-based indices.

mod bch;
mod file;
mod semidirect;

pub use bch::{bch_terms, BchTerm, BCH_MAX_DEGREE};
pub use file::{line_col, parse_group_definition};
pub use semidirect::{semidirect_sum, tangent_algebra, tangent_group_exp, TangentElement};

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, to_f64, QMatrix, Q};

/// Finite-dimensional nilpotent Lie algebra with exact structure constants.
pub struct NilpotentAlgebra {
    name: String,
    labels: Vec<String>,
    dim: usize,
    /// Nonzero components of `[X_i, X_j]`, indexed by `i * dim + j`.
    table: Vec<Vec<(usize, Q)>>,
    table_f64: Vec<Vec<(usize, f64)>>,
    class: usize,
}

pub type Algebra = Arc<NilpotentAlgebra>;

impl NilpotentAlgebra {
    /// Builds an algebra from bracket entries `(i, j, k, c)` meaning `c[i][j][k] = c`,
    /// 0-based. The antisymmetric partner is filled in automatically.
    pub fn from_brackets(
        name: impl Into<String>,
        dim: usize,
        labels: Option<Vec<String>>,
        entries: &[(usize, usize, usize, Q)],
    ) -> Result<Algebra> {
        let mut dense = vec![vec![Q::zero(); dim]; dim * dim];
        let mut set = vec![false; dim * dim * dim];
        for (i, j, k, c) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::Parse(format!(
                    "bracket index ({}, {}, {}) out of range for dimension {dim}",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            if i == j {
                if !c.is_zero() {
                    return Err(Error::Antisymmetry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                    });
                }
                continue;
            }
            for (a, b, v) in [(i, j, c.clone()), (j, i, -c.clone())] {
                let slot = a * dim * dim + b * dim + k;
                if set[slot] && dense[a * dim + b][k] != v {
                    return Err(Error::Antisymmetry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                    });
                }
                set[slot] = true;
                dense[a * dim + b][k] = v;
            }
        }
        Self::from_dense(name, labels, dim, dense)
    }

    /// Builds an algebra from a dense table `t[i * dim + j][k]`, validating every invariant.
    pub fn from_dense(
        name: impl Into<String>,
        labels: Option<Vec<String>>,
        dim: usize,
        dense: Vec<Vec<Q>>,
    ) -> Result<Algebra> {
        if dense.len() != dim * dim || dense.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: dense.len(),
            });
        }
        let labels = match labels {
            Some(l) if l.len() != dim => {
                return Err(Error::Dimension {
                    expected: dim,
                    got: l.len(),
                })
            }
            Some(l) => l,
            None => (1..=dim).map(|i| format!("X{i}")).collect(),
        };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if dense[i * dim + j][k] != -dense[j * dim + i][k].clone() {
                        return Err(Error::Antisymmetry {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                    // [X_i, X_j] must lie in g_{min(i,j)-1}, i.e. components k >= min(i,j) vanish.
                    if k >= i.min(j) && !dense[i * dim + j][k].is_zero() {
                        return Err(Error::NotJordanHolder {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        let table: Vec<Vec<(usize, Q)>> = dense
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect()
            })
            .collect();
        let table_f64 = table
            .iter()
            .map(|v| v.iter().map(|(k, c)| (*k, to_f64(c))).collect())
            .collect();
        let mut alg = NilpotentAlgebra {
            name: name.into(),
            labels,
            dim,
            table,
            table_f64,
            class: 0,
        };
        alg.check_jacobi()?;
        alg.class = alg.compute_class()?;
        Ok(Arc::new(alg))
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Algebra {
        Self::from_brackets(format!("abelian{dim}"), dim, None, &[]).expect("abelian is valid")
    }

    /// Three-dimensional Heisenberg algebra with `[X3, X2] = X1`.
    pub fn heisenberg() -> Algebra {
        Self::from_brackets("heis3", 3, None, &[(2, 1, 0, Q::one())]).expect("heis3 is valid")
    }

    /// Four-dimensional filiform algebra with `[X4, X3] = X2`, `[X4, X2] = X1`.
    pub fn filiform4() -> Algebra {
        Self::from_brackets(
            "filiform4",
            4,
            None,
            &[(3, 2, 1, Q::one()), (3, 1, 0, Q::one())],
        )
        .expect("filiform4 is valid")
    }

    /// Strictly upper triangular `m × m` matrices, basis `E_ab` ordered by decreasing height.
    pub fn strictly_upper(m: usize) -> Algebra {
        let mut basis = Vec::new();
        for h in (1..m).rev() {
            for a in 0..m - h {
                basis.push((a, a + h));
            }
        }
        let n = basis.len();
        let index = |p: (usize, usize)| basis.iter().position(|&b| b == p);
        let mut entries = Vec::new();
        for (i, &(a, b)) in basis.iter().enumerate() {
            for (j, &(c, d)) in basis.iter().enumerate() {
                if i >= j {
                    continue;
                }
                // [E_ab, E_cd] = δ_bc E_ad − δ_da E_cb
                if b == c {
                    entries.push((i, j, index((a, d)).unwrap(), Q::one()));
                }
                if d == a {
                    entries.push((i, j, index((c, b)).unwrap(), -Q::one()));
                }
            }
        }
        let labels = basis
            .iter()
            .map(|(a, b)| format!("E{}{}", a + 1, b + 1))
            .collect();
        Self::from_brackets(format!("n{m}"), n, Some(labels), &entries)
            .expect("strictly upper triangular matrices form a nilpotent algebra")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Nilpotency class: smallest `c` with `C^{c+1} g = 0`. Zero for the zero algebra.
    pub fn class(&self) -> usize {
        self.class
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// Structure constant `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.table[i * self.dim + j]
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or_else(Q::zero, |(_, c)| c.clone())
    }

    /// Nonzero structure constants `(i, j, k, c)` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, usize, Q)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, c) in &self.table[i * self.dim + j] {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn bracket_coords(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let n = self.dim;
        let mut out = vec![Q::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let terms = &self.table[i * n + j];
                if terms.is_empty() {
                    continue;
                }
                let xy = xi * yj;
                for (k, c) in terms {
                    out[*k] += &xy * c;
                }
            }
        }
        out
    }

    pub fn bracket_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                for &(k, c) in &self.table_f64[i * n + j] {
                    out[k] += xi * yj * c;
                }
            }
        }
        out
    }

    /// `ad X` as a matrix whose column `j` holds `[X, X_j]`.
    pub fn ad_coords(&self, x: &[Q]) -> QMatrix {
        let n = self.dim;
        let mut m = QMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.table[i * n + j] {
                    m[(*k, j)] += xi * c;
                }
            }
        }
        m
    }

    pub fn ad_f64(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        let n = self.dim;
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                for &(k, c) in &self.table_f64[i * n + j] {
                    m[(k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// `Σ_{k<n} ad(X)^k · coef(k)` for a coefficient sequence.
    fn ad_series(&self, x: &[Q], coef: impl Fn(usize) -> Q) -> QMatrix {
        let ad = self.ad_coords(x);
        let mut acc = QMatrix::identity(self.dim).scale(&coef(0));
        let mut power = QMatrix::identity(self.dim);
        for k in 1..self.dim.max(1) {
            power = &power * &ad;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power.scale(&coef(k));
        }
        acc
    }

    /// `e^{ad X} = Σ ad(X)^k / k!`.
    pub fn exp_ad_coords(&self, x: &[Q]) -> QMatrix {
        self.ad_series(x, |k| factorial(k).recip())
    }

    /// `∫₀¹ e^{s ad X} ds = Σ ad(X)^k / (k+1)!`.
    pub fn exp_ad_integral_coords(&self, x: &[Q]) -> QMatrix {
        self.ad_series(x, |k| factorial(k + 1).recip())
    }

    fn ad_series_f64(&self, x: &[f64], coef: impl Fn(usize) -> f64) -> nalgebra::DMatrix<f64> {
        let n = self.dim;
        let ad = self.ad_f64(x);
        let mut acc = nalgebra::DMatrix::identity(n, n) * coef(0);
        let mut power = nalgebra::DMatrix::identity(n, n);
        for k in 1..n.max(1) {
            power = &power * &ad;
            acc += &power * coef(k);
        }
        acc
    }

    pub fn exp_ad_f64(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        self.ad_series_f64(x, |k| 1.0 / to_f64(&factorial(k)))
    }

    pub fn exp_ad_integral_f64(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        self.ad_series_f64(x, |k| 1.0 / to_f64(&factorial(k + 1)))
    }

    /// Center `z = {X : [X, X_j] = 0 for all j}`.
    pub fn center_basis(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        // Row (j, k) of the map X ↦ ([X, X_j])_k.
        let mut m = QMatrix::zeros(n * n, n);
        for i in 0..n {
            for j in 0..n {
                for (k, c) in &self.table[i * n + j] {
                    m[(j * n + k, i)] = c.clone();
                }
            }
        }
        m.kernel()
    }

    /// The same algebra in a new basis whose vectors are the columns of `p`
    /// (expressed in the current basis). Fails if the new basis is not Jordan-Hölder.
    pub fn rebased(&self, p: &QMatrix, name: impl Into<String>) -> Result<Algebra> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(Error::Dimension {
                expected: n,
                got: p.rows(),
            });
        }
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Degenerate("change of basis is singular".into()))?;
        let cols: Vec<Vec<Q>> = (0..n).map(|j| p.column(j)).collect();
        let mut dense = vec![vec![Q::zero(); n]; n * n];
        for a in 0..n {
            for b in 0..n {
                let br = self.bracket_coords(&cols[a], &cols[b]);
                dense[a * n + b] = pinv.mul_vec(&br);
            }
        }
        Self::from_dense(name, None, n, dense)
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim;
        let e = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (xi, xj, xk) = (e(i), e(j), e(k));
                    let a = self.bracket_coords(&xi, &self.bracket_coords(&xj, &xk));
                    let b = self.bracket_coords(&xj, &self.bracket_coords(&xk, &xi));
                    let c = self.bracket_coords(&xk, &self.bracket_coords(&xi, &xj));
                    if (0..n).any(|t| !(&(&a[t] + &b[t]) + &c[t]).is_zero()) {
                        return Err(Error::Jacobi {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Length of the lower central series, from exact spans.
    fn compute_class(&self) -> Result<usize> {
        let n = self.dim;
        let mut current: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut v = vec![Q::zero(); n];
                v[i] = Q::one();
                v
            })
            .collect();
        for step in 0..=n {
            if current.is_empty() {
                return Ok(step);
            }
            let mut next = Vec::new();
            for i in 0..n {
                let mut xi = vec![Q::zero(); n];
                xi[i] = Q::one();
                for c in &current {
                    let b = self.bracket_coords(&xi, c);
                    if b.iter().any(|v| !v.is_zero()) {
                        next.push(b);
                    }
                }
            }
            current = if next.is_empty() {
                Vec::new()
            } else {
                let m = QMatrix::from_rows(&next);
                let (r, piv) = m.rref();
                (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
            };
        }
        Err(Error::NotNilpotent)
    }
}

impl fmt::Debug for NilpotentAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NilpotentAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("class", &self.class)
            .finish()
    }
}

impl PartialEq for NilpotentAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.table == other.table
    }
}

fn same(a: &Algebra, b: &Algebra) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::MismatchedAlgebra)
    }
}

fn check_len(alg: &Algebra, v: &[Q]) -> Result<()> {
    if v.len() != alg.dim() {
        return Err(Error::Dimension {
            expected: alg.dim(),
            got: v.len(),
        });
    }
    Ok(())
}

/// Element of the Lie algebra in Jordan-Hölder coordinates.
#[derive(Clone)]
pub struct AlgebraElement {
    parent: Algebra,
    coords: Vec<Q>,
}

impl AlgebraElement {
    pub fn new(parent: &Algebra, coords: Vec<Q>) -> Result<Self> {
        check_len(parent, &coords)?;
        Ok(Self {
            parent: parent.clone(),
            coords,
        })
    }

    pub fn zero(parent: &Algebra) -> Self {
        Self {
            parent: parent.clone(),
            coords: vec![Q::zero(); parent.dim()],
        }
    }

    /// Basis vector `X_{i+1}`.
    pub fn basis(parent: &Algebra, i: usize) -> Self {
        let mut e = Self::zero(parent);
        e.coords[i] = Q::one();
        e
    }

    pub fn parent(&self) -> &Algebra {
        &self.parent
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            parent: self.parent.clone(),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same(&self.parent, &other.parent)?;
        Ok(Self {
            parent: self.parent.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.coords == other.coords
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(crate::exact::format_q).collect();
        write!(f, "({})", c.join(", "))
    }
}

pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    same(&x.parent, &y.parent)?;
    Ok(AlgebraElement {
        parent: x.parent.clone(),
        coords: x.parent.bracket_coords(&x.coords, &y.coords),
    })
}

pub fn ad_matrix(x: &AlgebraElement) -> QMatrix {
    x.parent.ad_coords(&x.coords)
}

pub fn exp_ad(x: &AlgebraElement) -> QMatrix {
    x.parent.exp_ad_coords(&x.coords)
}

pub fn exp_ad_integral(x: &AlgebraElement) -> QMatrix {
    x.parent.exp_ad_integral_coords(&x.coords)
}

/// Group element `exp_G(X)` stored by its logarithm.
#[derive(Clone)]
pub struct GroupElement {
    parent: Algebra,
    log: Vec<Q>,
}

impl GroupElement {
    pub fn identity(parent: &Algebra) -> Self {
        Self {
            parent: parent.clone(),
            log: vec![Q::zero(); parent.dim()],
        }
    }

    pub fn exp(x: &AlgebraElement) -> Self {
        Self {
            parent: x.parent.clone(),
            log: x.coords.clone(),
        }
    }

    pub fn from_log(parent: &Algebra, log: Vec<Q>) -> Result<Self> {
        check_len(parent, &log)?;
        Ok(Self {
            parent: parent.clone(),
            log,
        })
    }

    pub fn parent(&self) -> &Algebra {
        &self.parent
    }

    pub fn log_coords(&self) -> &[Q] {
        &self.log
    }

    pub fn log(&self) -> AlgebraElement {
        AlgebraElement {
            parent: self.parent.clone(),
            coords: self.log.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.log.iter().all(Zero::is_zero)
    }

    pub fn inverse(&self) -> Self {
        Self {
            parent: self.parent.clone(),
            log: self.log.iter().map(|c| -c).collect(),
        }
    }

    /// `Ad_G(g) = e^{ad log g}`.
    pub fn adjoint(&self) -> QMatrix {
        self.parent.exp_ad_coords(&self.log)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        group_multiply(self, other)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.log == other.log
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.log.iter().map(crate::exact::format_q).collect();
        write!(f, "exp({})", c.join(", "))
    }
}

/// Group law in exponential coordinates via the BCH series truncated at the nilpotency class.
pub fn group_multiply(g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
    same(&g.parent, &h.parent)?;
    let log = bch::bch(&g.parent, &g.log, &h.log)?;
    Ok(GroupElement {
        parent: g.parent.clone(),
        log,
    })
}

/// Floating-point BCH product for grid code; same truncation as the exact law.
pub fn group_multiply_f64(alg: &NilpotentAlgebra, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    bch::bch_f64(alg, x, y)
}

/// Dual-space functional in the basis dual to the Jordan-Hölder basis.
#[derive(Clone)]
pub struct Functional {
    parent: Algebra,
    coords: Vec<Q>,
}

impl Functional {
    pub fn new(parent: &Algebra, coords: Vec<Q>) -> Result<Self> {
        check_len(parent, &coords)?;
        Ok(Self {
            parent: parent.clone(),
            coords,
        })
    }

    /// Dual basis vector `ξ_{i+1}`.
    pub fn dual_basis(parent: &Algebra, i: usize) -> Self {
        let mut coords = vec![Q::zero(); parent.dim()];
        coords[i] = Q::one();
        Self {
            parent: parent.clone(),
            coords,
        }
    }

    pub fn parent(&self) -> &Algebra {
        &self.parent
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }

    pub fn pair(&self, x: &AlgebraElement) -> Result<Q> {
        same(&self.parent, &x.parent)?;
        Ok(self
            .coords
            .iter()
            .zip(&x.coords)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b))
    }

    /// `ξ ∘ M` for a linear map `M` on the algebra.
    pub fn compose(&self, m: &QMatrix) -> Self {
        Self {
            parent: self.parent.clone(),
            coords: m.vec_mul(&self.coords),
        }
    }
}

impl PartialEq for Functional {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.coords == other.coords
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(crate::exact::format_q).collect();
        write!(f, "ξ({})", c.join(", "))
    }
}
