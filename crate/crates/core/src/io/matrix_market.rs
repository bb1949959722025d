use super::{content_lines, format_real, parse_real, syntax, ParseError};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

enum Layout {
    Array,
    Coordinate,
}

fn header(text: &str) -> Result<Layout, ParseError> {
    let first = text.lines().next().ok_or_else(|| syntax(1, "empty input"))?;
    let words: Vec<String> = first.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(syntax(1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    if words[3] != "real" && words[3] != "integer" {
        return Err(syntax(1, format!("unsupported field {:?}", words[3])));
    }
    if words[4] != "general" {
        return Err(syntax(1, format!("unsupported symmetry {:?}", words[4])));
    }
    match words[2].as_str() {
        "array" => Ok(Layout::Array),
        "coordinate" => Ok(Layout::Coordinate),
        other => Err(syntax(1, format!("unsupported layout {other:?}"))),
    }
}

fn parse_index(token: &str, bound: usize, line: usize) -> Result<usize, ParseError> {
    match token.parse::<usize>() {
        Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
        _ => Err(syntax(line, format!("index {token:?} outside 1..={bound}"))),
    }
}

fn parse_size(token: Option<&str>, line: usize) -> Result<usize, ParseError> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(line, "malformed size line"))
}

/// Reads the `array` (column-major) and `coordinate` layouts of real or
/// integer general matrices. Coordinate entries may appear in any order;
/// absent entries are zero and repeated entries are rejected.
pub fn parse_matrix_market<T: Real>(text: &str) -> Result<DenseMatrix<T>, ParseError> {
    let layout = header(text)?;
    let mut lines = content_lines(text, '%');
    let (size_line, sizes) = lines.next().ok_or_else(|| syntax(1, "missing size line"))?;
    let mut tokens = sizes.split_whitespace();
    let rows = parse_size(tokens.next(), size_line)?;
    let cols = parse_size(tokens.next(), size_line)?;
    let mut data = vec![T::zero(); rows * cols];
    match layout {
        Layout::Array => {
            if tokens.next().is_some() {
                return Err(syntax(size_line, "array size line takes two numbers"));
            }
            let mut k = 0;
            for (line, body) in lines {
                for token in body.split_whitespace() {
                    if k == rows * cols {
                        return Err(syntax(line, "more values than the declared size"));
                    }
                    let (i, j) = (k % rows, k / rows);
                    data[i * cols + j] = parse_real(token, line)?;
                    k += 1;
                }
            }
            if k != rows * cols {
                return Err(ParseError::Invalid(format!("expected {} values, found {k}", rows * cols)));
            }
        }
        Layout::Coordinate => {
            let nnz = parse_size(tokens.next(), size_line)?;
            if tokens.next().is_some() {
                return Err(syntax(size_line, "coordinate size line takes three numbers"));
            }
            let mut seen = vec![false; rows * cols];
            let mut count = 0;
            for (line, body) in lines {
                let t: Vec<&str> = body.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(syntax(line, "expected 'row col value'"));
                }
                let i = parse_index(t[0], rows, line)?;
                let j = parse_index(t[1], cols, line)?;
                if std::mem::replace(&mut seen[i * cols + j], true) {
                    return Err(syntax(line, format!("repeated entry ({}, {})", i + 1, j + 1)));
                }
                data[i * cols + j] = parse_real(t[2], line)?;
                count += 1;
            }
            if count != nnz {
                return Err(ParseError::Invalid(format!("declared {nnz} entries, found {count}")));
            }
        }
    }
    Ok(DenseMatrix::new(rows, cols, data)?)
}

/// `array` layout, one value per line, 17 significant digits.
pub fn format_matrix_market<T: Real>(m: &DenseMatrix<T>) -> String {
    let mut out = format!("%%MatrixMarket matrix array real general\n{} {}\n", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out += &format_real(m.get(i, j));
            out.push('\n');
        }
    }
    out
}

/// `coordinate` layout listing the nonzero entries row by row.
pub fn format_matrix_market_coordinate<T: Real>(m: &DenseMatrix<T>) -> String {
    let entries: Vec<(usize, usize, T)> = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, m.get(i, j)))
        .filter(|e| e.2 != T::zero())
        .collect();
    let mut out = format!(
        "%%MatrixMarket matrix coordinate real general\n{} {} {}\n",
        m.rows(),
        m.cols(),
        entries.len()
    );
    for (i, j, v) in entries {
        out += &format!("{} {} {}\n", i + 1, j + 1, format_real(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type M = DenseMatrix<f64>;

    #[test]
    fn array_is_column_major() {
        let text = "%%MatrixMarket matrix array real general\n% a comment\n2 3\n1\n4\n2\n5\n3\n6\n";
        let m: M = parse_matrix_market(text).unwrap();
        assert_eq!(m, M::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap());
    }

    #[test]
    fn coordinate_fills_zeros() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 2.0\n2 2 -1\n";
        let m: M = parse_matrix_market(text).unwrap();
        assert_eq!(m, M::from_diagonal(&[2.0, -1.0]));
    }

    #[test]
    fn malformed_inputs() {
        let bad = [
            "",
            "%%MatrixMarket matrix array complex general\n1 1\n1\n",
            "%%MatrixMarket matrix array real symmetric\n1 1\n1\n",
            "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n",
            "%%MatrixMarket matrix array real general\n1 1\n1\n2\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n",
            "%%MatrixMarket matrix array real general\n1 1\ninf\n",
        ];
        for text in bad {
            assert!(parse_matrix_market::<f64>(text).is_err(), "{text:?}");
        }
    }

    fn matrix() -> impl Strategy<Value = M> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                prop_oneof![Just(0.0), any::<f64>().prop_filter("finite", |x| x.is_finite())],
                r * c,
            )
            .prop_map(move |d| M::new(r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn both_layouts_round_trip_exactly(m in matrix()) {
            prop_assert_eq!(parse_matrix_market::<f64>(&format_matrix_market(&m)).unwrap(), m.clone());
            prop_assert_eq!(parse_matrix_market::<f64>(&format_matrix_market_coordinate(&m)).unwrap(), m);
        }
    }
}
