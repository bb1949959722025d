//! Text formats: Matrix Market matrices, plain right-hand sides, edge
//! lists, and JSON with 17 significant digits for every float.

mod edges;
mod json;
mod matrix_market;

pub use edges::{format_edge_list, parse_edge_list};
pub use json::{to_json, to_json_lines};
pub use matrix_market::{format_matrix_market, format_matrix_market_coordinate, parse_matrix_market};

use thiserror::Error;

use crate::graph::GraphError;
use crate::linalg::LinalgError;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers. `comment` starts
/// a comment anywhere on a line.
pub(crate) fn content_lines(text: &str, comment: char) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(move |(k, line)| {
        let body = line.split(comment).next().unwrap_or("").trim();
        (!body.is_empty()).then_some((k + 1, body))
    })
}

pub(crate) fn parse_real<T: Real>(token: &str, line: usize) -> Result<T, ParseError> {
    let v: f64 = token
        .parse()
        .map_err(|_| syntax(line, format!("not a number: {token:?}")))?;
    if !v.is_finite() {
        return Err(syntax(line, format!("non-finite value {token:?}")));
    }
    Ok(T::of(v))
}

/// `v` with 17 significant digits.
pub fn format_real<T: Real>(v: T) -> String {
    format!("{:.16e}", v.f64())
}

/// Right-hand side: one number per line, `#` comments and blank lines
/// ignored.
pub fn parse_vector<T: Real>(text: &str) -> Result<Vec<T>, ParseError> {
    content_lines(text, '#')
        .map(|(line, body)| {
            let mut tokens = body.split_whitespace();
            let v = parse_real(tokens.next().expect("content line is non-empty"), line)?;
            match tokens.next() {
                Some(extra) => Err(syntax(line, format!("expected one value, found extra {extra:?}"))),
                None => Ok(v),
            }
        })
        .collect()
}

pub fn format_vector<T: Real>(v: &[T]) -> String {
    v.iter().map(|&x| format_real(x) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vectors_with_comments() {
        let v: Vec<f64> = parse_vector("# rhs\n1\n\n2.5e0  # second\n-3\n").unwrap();
        assert_eq!(v, vec![1.0, 2.5, -3.0]);
        assert!(matches!(parse_vector::<f64>("1\nx\n"), Err(ParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_vector::<f64>("1 2\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(parse_vector::<f64>("nan\n").is_err());
    }

    proptest! {
        #[test]
        fn vector_text_round_trip(v in proptest::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 0..20)) {
            let back: Vec<f64> = parse_vector(&format_vector(&v)).unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
