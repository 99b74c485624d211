//! Baker-Campbell-Hausdorff series through total degree 6.
//!
//! The coefficients are generated once: `log(e^X e^Y)` is expanded in the free
//! associative algebra on two letters, and each homogeneous part is turned into a
//! combination of left-normed brackets by the Dynkin-Specht-Wever map.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;

use super::NilpotentAlgebra;
use crate::error::{Error, Result};
use crate::exact::{factorial, q, to_f64, Q};

pub const BCH_MAX_DEGREE: usize = 6;

/// `coef · [[..[w_1, w_2], ..], w_m]` with letters `0 = X`, `1 = Y`.
#[derive(Clone, Debug)]
pub struct BchTerm {
    pub word: Vec<u8>,
    pub coef: Q,
}

type Series = BTreeMap<Vec<u8>, Q>;

fn mul(a: &Series, b: &Series) -> Series {
    let mut out = Series::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            if wa.len() + wb.len() > BCH_MAX_DEGREE {
                continue;
            }
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            *out.entry(w).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn exp_letter(letter: u8) -> Series {
    (0..=BCH_MAX_DEGREE)
        .map(|k| (vec![letter; k], factorial(k).recip()))
        .collect()
}

/// `log(e^X e^Y)` as a truncated associative series.
fn log_series() -> Series {
    let mut w = mul(&exp_letter(0), &exp_letter(1));
    w.remove(&Vec::new());
    let mut out = Series::new();
    let mut power = w.clone();
    for k in 1..=BCH_MAX_DEGREE {
        let sign = if k % 2 == 1 { q(1) } else { q(-1) };
        let c = sign / q(k as i64);
        for (word, v) in &power {
            *out.entry(word.clone()).or_insert_with(Q::zero) += &c * v;
        }
        power = mul(&power, &w);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Left-normed bracket terms, sorted by degree then word.
pub fn bch_terms() -> &'static [BchTerm] {
    static TERMS: OnceLock<Vec<BchTerm>> = OnceLock::new();
    TERMS.get_or_init(|| {
        let mut terms: Vec<BchTerm> = log_series()
            .into_iter()
            .map(|(word, c)| {
                let m = q(word.len() as i64);
                BchTerm { word, coef: c / m }
            })
            .collect();
        terms.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then(a.word.cmp(&b.word)));
        terms
    })
}

fn bch_terms_f64() -> &'static [(Vec<u8>, f64)] {
    static TERMS: OnceLock<Vec<(Vec<u8>, f64)>> = OnceLock::new();
    TERMS.get_or_init(|| {
        bch_terms()
            .iter()
            .map(|t| (t.word.clone(), to_f64(&t.coef)))
            .collect()
    })
}

fn depth(alg: &NilpotentAlgebra) -> Result<usize> {
    let class = alg.class();
    if class > BCH_MAX_DEGREE {
        return Err(Error::BchDepth {
            class,
            max: BCH_MAX_DEGREE,
        });
    }
    Ok(class.max(1))
}

/// Generic evaluation: every left-normed word value is built from its prefix.
#[allow(clippy::too_many_arguments)]
fn evaluate<T: Clone>(
    depth: usize,
    x: &[T],
    y: &[T],
    terms: impl Iterator<Item = (usize, T)>,
    words: &[Vec<u8>],
    bracket: impl Fn(&[T], &[T]) -> Vec<T>,
    is_zero: impl Fn(&[T]) -> bool,
    axpy: impl Fn(&mut [T], &T, &[T]),
    zero: Vec<T>,
) -> Vec<T> {
    let mut values: BTreeMap<Vec<u8>, Vec<T>> = BTreeMap::new();
    values.insert(vec![0], x.to_vec());
    values.insert(vec![1], y.to_vec());
    for m in 2..=depth {
        let prev: Vec<(Vec<u8>, Vec<T>)> = values
            .iter()
            .filter(|(w, _)| w.len() == m - 1)
            .map(|(w, v)| (w.clone(), v.clone()))
            .collect();
        for (w, v) in prev {
            if is_zero(&v) {
                continue;
            }
            for (letter, l) in [(0u8, x), (1u8, y)] {
                let b = bracket(&v, l);
                if !is_zero(&b) {
                    let mut nw = w.clone();
                    nw.push(letter);
                    values.insert(nw, b);
                }
            }
        }
    }
    let mut out = zero;
    for (idx, c) in terms {
        if let Some(v) = values.get(&words[idx]) {
            axpy(&mut out, &c, v);
        }
    }
    out
}

fn all_words() -> &'static [Vec<u8>] {
    static WORDS: OnceLock<Vec<Vec<u8>>> = OnceLock::new();
    WORDS.get_or_init(|| bch_terms().iter().map(|t| t.word.clone()).collect())
}

/// Exact `log(e^X e^Y)` in a nilpotent algebra of class at most 6.
pub(crate) fn bch(alg: &NilpotentAlgebra, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
    let depth = depth(alg)?;
    if alg.is_abelian() {
        return Ok(x.iter().zip(y).map(|(a, b)| a + b).collect());
    }
    let terms = bch_terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.word.len() <= depth)
        .map(|(i, t)| (i, t.coef.clone()));
    Ok(evaluate(
        depth,
        x,
        y,
        terms,
        all_words(),
        |a, b| alg.bracket_coords(a, b),
        |v| v.iter().all(Zero::is_zero),
        |out, c, v| {
            for (o, vi) in out.iter_mut().zip(v) {
                if !vi.is_zero() {
                    *o += c * vi;
                }
            }
        },
        vec![Q::zero(); alg.dim()],
    ))
}

pub(crate) fn bch_f64(alg: &NilpotentAlgebra, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let depth = depth(alg)?;
    if alg.is_abelian() {
        return Ok(x.iter().zip(y).map(|(a, b)| a + b).collect());
    }
    let terms = bch_terms_f64()
        .iter()
        .enumerate()
        .filter(|(_, (w, _))| w.len() <= depth)
        .map(|(i, (_, c))| (i, *c));
    Ok(evaluate(
        depth,
        x,
        y,
        terms,
        all_words(),
        |a, b| alg.bracket_f64(a, b),
        |v| v.iter().all(|&t| t == 0.0),
        |out, c, v| {
            for (o, vi) in out.iter_mut().zip(v) {
                *o += c * vi;
            }
        },
        vec![0.0; alg.dim()],
    ))
}
