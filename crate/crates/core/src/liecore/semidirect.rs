use std::fmt;

use num_traits::Zero;

use super::{Algebra, AlgebraElement, GroupElement, NilpotentAlgebra};
use crate::error::{Error, Result};
use crate::exact::{QMatrix, Q};

/// Semidirect sum `g1 ⋉ g2` for a representation of `g1` by derivations of `g2`.
///
/// `action[i]` is the matrix of the derivation attached to the `i`-th basis vector of
/// `g1`. The result's basis is the basis of `g2` followed by the basis of `g1`, which is
/// a Jordan-Hölder order whenever every derivation lowers the flag of `g2`.
pub fn semidirect_sum(g1: &Algebra, g2: &Algebra, action: &[QMatrix]) -> Result<Algebra> {
    let (n1, n2) = (g1.dim(), g2.dim());
    if action.len() != n1 {
        return Err(Error::Dimension {
            expected: n1,
            got: action.len(),
        });
    }
    for (i, d) in action.iter().enumerate() {
        if d.rows() != n2 || d.cols() != n2 {
            return Err(Error::Dimension {
                expected: n2,
                got: d.rows(),
            });
        }
        if n2 > 0 && !d.pow(n2).is_zero() {
            return Err(Error::NotUnipotent { index: i + 1 });
        }
        for a in 0..n2 {
            for b in a + 1..n2 {
                let (ea, eb) = (unit(n2, a), unit(n2, b));
                let lhs = d.mul_vec(&g2.bracket_coords(&ea, &eb));
                let r1 = g2.bracket_coords(&d.mul_vec(&ea), &eb);
                let r2 = g2.bracket_coords(&ea, &d.mul_vec(&eb));
                if (0..n2).any(|k| lhs[k] != &r1[k] + &r2[k]) {
                    return Err(Error::NotDerivation { index: i + 1 });
                }
            }
        }
    }
    for i in 0..n1 {
        for j in i + 1..n1 {
            let br = g1.bracket_coords(&unit(n1, i), &unit(n1, j));
            let mut lhs = QMatrix::zeros(n2, n2);
            for (k, c) in br.iter().enumerate() {
                if !c.is_zero() {
                    lhs = &lhs + &action[k].scale(c);
                }
            }
            let comm = &(&action[i] * &action[j]) - &(&action[j] * &action[i]);
            if lhs != comm {
                return Err(Error::NotHomomorphism { i: i + 1, j: j + 1 });
            }
        }
    }

    let n = n1 + n2;
    let mut dense = vec![vec![Q::zero(); n]; n * n];
    for a in 0..n2 {
        for b in 0..n2 {
            let br = g2.bracket_coords(&unit(n2, a), &unit(n2, b));
            dense[a * n + b][..n2].clone_from_slice(&br);
        }
    }
    for i in 0..n1 {
        for b in 0..n2 {
            let v = action[i].column(b);
            for (k, c) in v.into_iter().enumerate() {
                dense[(n2 + i) * n + b][k] = c.clone();
                dense[b * n + n2 + i][k] = -c;
            }
        }
        for j in 0..n1 {
            let br = g1.bracket_coords(&unit(n1, i), &unit(n1, j));
            dense[(n2 + i) * n + n2 + j][n2..].clone_from_slice(&br);
        }
    }
    let labels = g2
        .labels()
        .iter()
        .map(|l| format!("(0,{l})"))
        .chain(g1.labels().iter().map(|l| format!("({l},0)")))
        .collect();
    NilpotentAlgebra::from_dense(
        format!("{}x{}", g1.name(), g2.name()),
        Some(labels),
        n,
        dense,
    )
}

/// Lie algebra `g ⋉_ad g` of the tangent group, the second factor taken abelian.
/// Basis `(0, X_1..X_n), (X_1..X_n, 0)`.
pub fn tangent_algebra(g: &Algebra) -> Algebra {
    let action: Vec<QMatrix> = (0..g.dim())
        .map(|i| g.ad_coords(&unit(g.dim(), i)))
        .collect();
    let fiber = NilpotentAlgebra::from_brackets(g.name(), g.dim(), Some(g.labels().to_vec()), &[])
        .expect("abelian algebra is valid");
    semidirect_sum(g, &fiber, &action).expect("the adjoint representation is a nilpotent action")
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// Element `(g, Y)` of `G ⋉ g` with law `(g1, Y1)(g2, Y2) = (g1 g2, Y1 + Ad(g1) Y2)`.
#[derive(Clone, PartialEq)]
pub struct TangentElement {
    pub base: GroupElement,
    pub fiber: Vec<Q>,
}

impl TangentElement {
    pub fn identity(g: &Algebra) -> Self {
        Self {
            base: GroupElement::identity(g),
            fiber: vec![Q::zero(); g.dim()],
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let base = self.base.multiply(&other.base)?;
        let moved = self.base.adjoint().mul_vec(&other.fiber);
        Ok(Self {
            base,
            fiber: self.fiber.iter().zip(&moved).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let inv = self.base.inverse();
        let fiber = inv.adjoint().mul_vec(&self.fiber);
        Self {
            base: inv,
            fiber: fiber.into_iter().map(|c| -c).collect(),
        }
    }

    /// Logarithm in the tangent algebra: coordinates `(Y, X)` in the basis of [`tangent_algebra`].
    pub fn log_coords(&self) -> Vec<Q> {
        let g = self.base.parent();
        let x = self.base.log_coords();
        let m = g.exp_ad_integral_coords(x);
        let y = m
            .inverse()
            .expect("the integrated exponential is unipotent")
            .mul_vec(&self.fiber);
        y.into_iter().chain(x.iter().cloned()).collect()
    }

    /// The same element as a group element of the tangent algebra's group.
    pub fn to_group_element(&self, tangent: &Algebra) -> Result<GroupElement> {
        GroupElement::from_log(tangent, self.log_coords())
    }

    /// Inverse of [`TangentElement::to_group_element`].
    pub fn from_group_element(g: &Algebra, h: &GroupElement) -> Result<Self> {
        let n = g.dim();
        if h.parent().dim() != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                got: h.parent().dim(),
            });
        }
        let log = h.log_coords();
        let x = AlgebraElement::new(g, log[n..].to_vec())?;
        let y = AlgebraElement::new(g, log[..n].to_vec())?;
        tangent_group_exp(&x, &y)
    }
}

impl fmt::Debug for TangentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.fiber.iter().map(crate::exact::format_q).collect();
        write!(f, "({:?}, ({}))", self.base, c.join(", "))
    }
}

/// `exp(X, Y) = (exp_G X, ∫₀¹ e^{s ad X} Y ds)`.
pub fn tangent_group_exp(x: &AlgebraElement, y: &AlgebraElement) -> Result<TangentElement> {
    if **x.parent() != **y.parent() {
        return Err(Error::MismatchedAlgebra);
    }
    let m = x.parent().exp_ad_integral_coords(x.coords());
    Ok(TangentElement {
        base: GroupElement::exp(x),
        fiber: m.mul_vec(y.coords()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qfrac};

    #[test]
    fn trivial_action_gives_direct_sum() {
        let h = NilpotentAlgebra::heisenberg();
        let a = NilpotentAlgebra::abelian(2);
        let zero = vec![QMatrix::zeros(3, 3); 2];
        let s = semidirect_sum(&a, &h, &zero).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(s.structure_constant(2, 1, 0), q(1));
        assert_eq!(s.nonzero_brackets().len(), 1);
    }

    #[test]
    fn invalid_actions_rejected() {
        let h = NilpotentAlgebra::heisenberg();
        let a = NilpotentAlgebra::abelian(1);
        let mut d = QMatrix::zeros(3, 3);
        d[(1, 1)] = q(1);
        assert!(matches!(
            semidirect_sum(&a, &h, &[d]),
            Err(Error::NotUnipotent { .. })
        ));
        // X3 ↦ X1 + X2 is a nilpotent derivation of heis3.
        let mut d = QMatrix::zeros(3, 3);
        d[(0, 2)] = q(1);
        d[(1, 2)] = q(1);
        assert!(semidirect_sum(&a, &h, &[d]).is_ok());
        // X3 ↦ X2 on filiform4: D[X4, X3] = 0 but [X4, D X3] = X1.
        let f = NilpotentAlgebra::filiform4();
        let mut d = QMatrix::zeros(4, 4);
        d[(1, 2)] = q(1);
        assert!(matches!(
            semidirect_sum(&a, &f, &[d]),
            Err(Error::NotDerivation { .. })
        ));
    }

    #[test]
    fn tangent_exp_examples() {
        let h = NilpotentAlgebra::heisenberg();
        let x3 = AlgebraElement::basis(&h, 2);
        let x2 = AlgebraElement::basis(&h, 1);
        let t = tangent_group_exp(&x3, &x2).unwrap();
        assert_eq!(t.fiber, vec![qfrac(1, 2), q(1), q(0)]);
        let t0 = tangent_group_exp(&AlgebraElement::zero(&h), &x2).unwrap();
        assert!(t0.base.is_identity());
        assert_eq!(t0.fiber, x2.coords().to_vec());
        let ty = tangent_group_exp(&x3, &AlgebraElement::zero(&h)).unwrap();
        assert_eq!(ty.base, GroupElement::exp(&x3));
        assert!(ty.fiber.iter().all(Zero::is_zero));
    }
}
