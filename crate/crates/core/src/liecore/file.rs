//! The algebra section of a group-definition file.
//!
//! ```toml
//! name = "heis3"
//! dim = 3
//! labels = ["X1", "X2", "X3"]
//! brackets = [[3, 2, 1, "1"]]   # [X3, X2] = X1, 1-based
//! ```

use serde::Deserialize;
use toml::Spanned;

use super::{Algebra, NilpotentAlgebra};
use crate::error::{Error, Result};
use crate::exact::{parse_q, Q};

#[derive(Deserialize)]
struct AlgebraSection {
    name: String,
    dim: usize,
    labels: Option<Vec<String>>,
    #[serde(default)]
    brackets: Vec<Spanned<Vec<toml::Value>>>,
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn at(text: &str, offset: usize, msg: impl std::fmt::Display) -> Error {
    let (l, c) = line_col(text, offset);
    Error::Parse(format!("line {l}, column {c}: {msg}"))
}

fn bracket_entry(
    text: &str,
    entry: &Spanned<Vec<toml::Value>>,
) -> Result<(usize, usize, usize, Q)> {
    let start = entry.span().start;
    let v = entry.get_ref();
    if v.len() != 4 {
        return Err(at(
            text,
            start,
            format!(
                "bracket entry has {} fields, expected [i, j, k, \"p/q\"]",
                v.len()
            ),
        ));
    }
    let mut idx = [0usize; 3];
    for (slot, value) in idx.iter_mut().zip(v) {
        match value.as_integer() {
            Some(i) if i >= 1 => *slot = i as usize - 1,
            _ => {
                return Err(at(
                    text,
                    start,
                    format!("bracket index {value} is not a positive integer"),
                ))
            }
        }
    }
    let c = match &v[3] {
        toml::Value::String(s) => parse_q(s),
        toml::Value::Integer(i) => Ok(Q::from_integer((*i).into())),
        other => Err(Error::Parse(format!(
            "coefficient {other} is not a rational string"
        ))),
    }
    .map_err(|e| at(text, start, e))?;
    Ok((idx[0], idx[1], idx[2], c))
}

/// Parses and validates the algebra fields of a group-definition document. Other tables
/// are ignored.
pub fn parse_group_definition(text: &str) -> Result<Algebra> {
    let sec: AlgebraSection = toml::from_str(text).map_err(|e| match e.span() {
        Some(s) => at(text, s.start, e.message()),
        None => Error::Parse(e.message().to_string()),
    })?;
    let entries = sec
        .brackets
        .iter()
        .map(|b| bracket_entry(text, b))
        .collect::<Result<Vec<_>>>()?;
    NilpotentAlgebra::from_brackets(sec.name, sec.dim, sec.labels, &entries).map_err(|e| match e {
        Error::Parse(msg) => match sec.brackets.first() {
            Some(b) => at(text, b.span().start, msg),
            None => Error::Parse(msg),
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_file() {
        let g = parse_group_definition(
            "name = \"h\"\ndim = 3\nlabels = [\"Z\", \"Y\", \"X\"]\nbrackets = [[3, 2, 1, \"1\"]]\n[orbit]\nxi0 = [\"1\", \"0\", \"0\"]\n",
        )
        .unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.labels()[2], "X");
        assert_eq!(g.class(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_group_definition("name = \"h\"\ndim = 3\nbrackets = [[3, 2, \"1\"]]\n")
            .unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_group_definition("name = \"h\"\ndim = 3\nbrackets = [[3, 0, 1, \"1\"]]\n")
            .unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_group_definition("name = \"h\"\ndim = \nbrackets = []\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = parse_group_definition("name = \"h\"\ndim = 3\nbrackets = [[3, 2, 1, \"1/0\"]]\n")
            .unwrap_err();
        assert!(matches!(e, Error::Parse(_)), "{e}");
        // [X2, X1] = X3 breaks the flag order
        let e = parse_group_definition("name = \"h\"\ndim = 3\nbrackets = [[2, 1, 3, \"1\"]]\n")
            .unwrap_err();
        assert!(matches!(e, Error::NotJordanHolder { .. }), "{e}");
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("ab", 0), (1, 1));
    }
}
