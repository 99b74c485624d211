//! Reference implementations built only from [`Representation::node_operator`].
//! Cost is one monomial application per predual node; fast paths must agree with these.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{pairwise_sum, GridFunction, GridOperator, Representation, C64};
use crate::error::Result;

pub fn ambiguity<R: Representation + ?Sized>(
    rep: &R,
    f: &GridFunction,
    phi: &GridFunction,
) -> Result<GridFunction> {
    rep.check_vector(f)?;
    rep.check_vector(phi)?;
    let w = rep.hilbert_weight();
    let nodes = rep.predual_lattice().len();
    let values = (0..nodes)
        .into_par_iter()
        .map(|x| {
            let m = rep.node_operator(x)?;
            let fv = f.values();
            let pv = phi.values();
            Ok(pairwise_sum((0..fv.len()).map(|i| fv[i] * (m.phase[i] * pv[m.src[i]]).conj())) * w)
        })
        .collect::<Result<Vec<C64>>>()?;
    rep.new_predual(values)
}

pub fn synthesize<R: Representation + ?Sized>(
    rep: &R,
    coeffs: &GridFunction,
    phi: &GridFunction,
) -> Result<GridFunction> {
    rep.check_predual(coeffs)?;
    rep.check_vector(phi)?;
    let w = rep.predual_weight();
    let n = phi.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (x, &c) in coeffs.values().iter().enumerate() {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let m = rep.node_operator(x)?;
        let cw = c * w;
        for i in 0..n {
            out[i] += cw * m.phase[i] * phi.values()[m.src[i]];
        }
    }
    rep.new_vector(out)
}

pub fn assemble<R: Representation + ?Sized>(rep: &R, fhat: &GridFunction) -> Result<GridOperator> {
    rep.check_predual(fhat)?;
    let w = rep.predual_weight();
    let n = rep.hilbert_lattice().len();
    let mut mat = DMatrix::<C64>::zeros(n, n);
    for (x, &c) in fhat.values().iter().enumerate() {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        let m = rep.node_operator(x)?;
        let cw = c * w;
        for i in 0..n {
            mat[(i, m.src[i])] += cw * m.phase[i];
        }
    }
    GridOperator::on(
        mat,
        rep.hilbert_lattice().clone(),
        rep.hilbert_weight(),
        rep.hilbert_domain(),
    )
}

pub fn trace_pairings<R: Representation + ?Sized>(
    rep: &R,
    t: &GridOperator,
) -> Result<GridFunction> {
    rep.hilbert_lattice().check_same(t.lattice())?;
    let mat = t.matrix();
    let nodes = rep.predual_lattice().len();
    let values = (0..nodes)
        .into_par_iter()
        .map(|x| {
            let m = rep.node_operator(x)?;
            Ok(pairwise_sum(
                (0..m.src.len()).map(|i| m.phase[i].conj() * mat[(i, m.src[i])]),
            ))
        })
        .collect::<Result<Vec<C64>>>()?;
    rep.new_predual(values)
}
