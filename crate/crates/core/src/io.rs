//! Alist readers and writers.
//!
//! Binary files use the classical alist layout. The q-ary variant keeps the
//! same layout with a field size on the first line and `(index value)` pairs
//! in the adjacency lists:
//!
//! ```text
//! n r q
//! max_col_degree max_row_degree
//! column degrees
//! row degrees
//! one line per column: row value row value ...   (1-based, padded with 0 0)
//! one line per row:    col value col value ...   (1-based, padded with 0 0)
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::qmatrix::SparseQMatrix;

struct Tokens<'a> {
    iter: std::str::SplitAsciiWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        Tokens { iter: text.split_ascii_whitespace() }
    }

    fn next(&mut self, what: &str) -> Result<usize> {
        let tok = self.iter.next().ok_or_else(|| Error::Parse(format!("unexpected end of input reading {what}")))?;
        tok.parse().map_err(|_| Error::Parse(format!("expected integer for {what}, found {tok:?}")))
    }

    fn list(&mut self, len: usize, what: &str) -> Result<Vec<usize>> {
        (0..len).map(|_| self.next(what)).collect()
    }

    fn is_done(&mut self) -> bool {
        self.iter.clone().next().is_none()
    }
}

struct Header {
    cols: usize,
    rows: usize,
    col_deg: Vec<usize>,
    row_deg: Vec<usize>,
    max_col: usize,
    max_row: usize,
}

fn read_header(t: &mut Tokens<'_>, cols: usize, rows: usize) -> Result<Header> {
    let max_col = t.next("max column degree")?;
    let max_row = t.next("max row degree")?;
    let col_deg = t.list(cols, "column degree")?;
    let row_deg = t.list(rows, "row degree")?;
    if col_deg.iter().any(|&d| d > max_col) || row_deg.iter().any(|&d| d > max_row) {
        return Err(Error::Parse("degree exceeds declared maximum".into()));
    }
    Ok(Header { cols, rows, col_deg, row_deg, max_col, max_row })
}

/// Reads `count` padded entries; zero indices are padding and must come last.
fn read_adjacency(
    t: &mut Tokens<'_>,
    degree: usize,
    max: usize,
    bound: usize,
    with_values: bool,
    what: &str,
) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(degree);
    for k in 0..max {
        let idx = t.next(what)?;
        let val = if with_values { t.next(what)? } else { 1 };
        if k < degree {
            if idx == 0 || idx > bound {
                return Err(Error::Parse(format!("{what} index {idx} outside 1..={bound}")));
            }
            if val == 0 {
                return Err(Error::Parse(format!("{what} has a zero value")));
            }
            out.push((idx - 1, val));
        } else if idx != 0 || (with_values && val != 0) {
            return Err(Error::Parse(format!("{what} has more entries than its degree")));
        }
    }
    Ok(out)
}

fn read_body(t: &mut Tokens<'_>, h: &Header, field: Arc<Field>, with_values: bool) -> Result<SparseQMatrix> {
    let mut from_cols = Vec::new();
    for j in 0..h.cols {
        for (i, v) in read_adjacency(t, h.col_deg[j], h.max_col, h.rows, with_values, &format!("column {}", j + 1))? {
            from_cols.push((i, j, v));
        }
    }
    let mut from_rows = Vec::new();
    for i in 0..h.rows {
        for (j, v) in read_adjacency(t, h.row_deg[i], h.max_row, h.cols, with_values, &format!("row {}", i + 1))? {
            from_rows.push((i, j, v));
        }
    }
    for &(_, _, v) in &from_cols {
        if v >= field.q() {
            return Err(Error::Parse(format!("value {v} outside GF({})", field.q())));
        }
    }
    from_cols.sort_unstable();
    from_rows.sort_unstable();
    if from_cols != from_rows {
        return Err(Error::Parse("column and row lists disagree".into()));
    }
    let entries = from_cols.into_iter().map(|(i, j, v)| (i, j, v as Elem));
    SparseQMatrix::from_entries(field, h.rows, h.cols, entries).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a q-ary alist over `field`; the declared `q` must match.
pub fn read_qary_alist(text: &str, field: Arc<Field>) -> Result<SparseQMatrix> {
    let mut t = Tokens::new(text);
    let cols = t.next("column count")?;
    let rows = t.next("row count")?;
    let q = t.next("field size")?;
    if q != field.q() {
        return Err(Error::Parse(format!("file declares q = {q}, expected {}", field.q())));
    }
    let h = read_header(&mut t, cols, rows)?;
    let m = read_body(&mut t, &h, field, true)?;
    if !t.is_done() {
        return Err(Error::Parse("trailing data after alist".into()));
    }
    Ok(m)
}

/// Field size declared on the first line of a q-ary alist.
pub fn qary_alist_field_size(text: &str) -> Result<usize> {
    let mut t = Tokens::new(text);
    t.next("column count")?;
    t.next("row count")?;
    t.next("field size")
}

fn degrees(h: &SparseQMatrix) -> (Vec<usize>, Vec<usize>) {
    ((0..h.cols()).map(|j| h.col_degree(j)).collect(), (0..h.rows()).map(|i| h.row_degree(i)).collect())
}

fn write_common(out: &mut String, h: &SparseQMatrix, with_values: bool) {
    let (cd, rd) = degrees(h);
    let max_c = cd.iter().copied().max().unwrap_or(0);
    let max_r = rd.iter().copied().max().unwrap_or(0);
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "{max_c} {max_r}").unwrap();
    writeln!(out, "{}", join(&cd)).unwrap();
    writeln!(out, "{}", join(&rd)).unwrap();
    let line = |out: &mut String, list: &[(usize, Elem)], max: usize| {
        let mut toks: Vec<String> = Vec::with_capacity(2 * max);
        for &(k, v) in list {
            toks.push((k + 1).to_string());
            if with_values {
                toks.push(v.to_string());
            }
        }
        for _ in list.len()..max {
            toks.push("0".into());
            if with_values {
                toks.push("0".into());
            }
        }
        writeln!(out, "{}", toks.join(" ")).unwrap();
    };
    for j in 0..h.cols() {
        line(out, h.col(j), max_c);
    }
    for i in 0..h.rows() {
        line(out, h.row(i), max_r);
    }
}

pub fn write_qary_alist(h: &SparseQMatrix) -> String {
    let mut out = format!("{} {} {}\n", h.cols(), h.rows(), h.field().q());
    write_common(&mut out, h, true);
    out
}

/// Classical alist of a matrix over GF(2).
pub fn write_binary_alist(h: &SparseQMatrix) -> Result<String> {
    if h.field().m() != 1 {
        return Err(Error::InvalidParameter("binary alist needs a matrix over GF(2)".into()));
    }
    let mut out = format!("{} {}\n", h.cols(), h.rows());
    write_common(&mut out, h, false);
    Ok(out)
}

/// Reads one or more classical alist blocks written back to back.
pub fn read_binary_alists(text: &str) -> Result<Vec<SparseQMatrix>> {
    let f2 = Arc::new(Field::new(1)?);
    let mut t = Tokens::new(text);
    let mut out = Vec::new();
    while !t.is_done() {
        let cols = t.next("column count")?;
        let rows = t.next("row count")?;
        let h = read_header(&mut t, cols, rows)?;
        out.push(read_body(&mut t, &h, f2.clone(), false)?);
    }
    if out.is_empty() {
        return Err(Error::Parse("no alist block found".into()));
    }
    Ok(out)
}

pub fn read_binary_alist(text: &str) -> Result<SparseQMatrix> {
    let mut all = read_binary_alists(text)?;
    if all.len() != 1 {
        return Err(Error::Parse(format!("expected one alist block, found {}", all.len())));
    }
    Ok(all.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::ExtendedToricCode;

    #[test]
    fn qary_layout() {
        let f = Arc::new(Field::new(2).unwrap());
        let h = SparseQMatrix::from_dense(f.clone(), &[vec![1, 0, 3], vec![2, 2, 0]]).unwrap();
        let text = write_qary_alist(&h);
        let expected = "3 2 4\n2 2\n2 1 1\n2 2\n1 1 2 2\n2 2 0 0\n1 3 0 0\n1 1 3 3\n1 2 2 2\n";
        assert_eq!(text, expected);
        assert_eq!(read_qary_alist(&text, f).unwrap(), h);
    }

    #[test]
    fn binary_round_trip_and_stacking() {
        let code = ExtendedToricCode::build(2, 1, 0).unwrap();
        let hx = code.pair().hxq();
        let hz = code.pair().hzq();
        let text = write_binary_alist(hx).unwrap() + &write_binary_alist(hz).unwrap();
        let both = read_binary_alists(&text).unwrap();
        assert_eq!((&both[0], &both[1]), (hx, hz));
        assert!(read_binary_alist(&text).is_err());
    }

    #[test]
    fn rejects_malformed() {
        let f = Arc::new(Field::new(2).unwrap());
        let good = "2 1 4\n1 2\n1 1\n2\n1 3\n1 2\n1 3 2 2\n";
        assert!(read_qary_alist(good, f.clone()).is_ok());
        // value outside the field
        assert!(read_qary_alist("2 1 4\n1 2\n1 1\n2\n1 5\n1 2\n1 5 2 2\n", f.clone()).is_err());
        // row list disagrees with column list
        assert!(read_qary_alist("2 1 4\n1 2\n1 1\n2\n1 3\n1 2\n1 3 2 1\n", f.clone()).is_err());
        // wrong q
        assert!(read_qary_alist(good, Arc::new(Field::new(3).unwrap())).is_err());
        // truncated and trailing
        assert!(read_qary_alist("2 1 4\n1 2\n1 1\n2\n1 3\n", f.clone()).is_err());
        assert!(read_qary_alist(&format!("{good} 7"), f.clone()).is_err());
        assert!(read_qary_alist("2 x 4", f).is_err());
        assert!(read_binary_alists("").is_err());
    }
}
