//! Text formats.
//!
//! Matrix files: first line `n`, then `n` rows of whitespace-separated
//! entries, each a decimal literal, a fraction `p/q`, or `*` for a missing
//! entry. Numbers are written with 12 digits after the leading one
//! (`%.12e` precision), so a write/parse round trip is exact to 5e-13 relative.
//!
//! DAG files: first line `n`, then one arc `i j` per line, 1-based.
//!
//! Blank lines and lines starting with `#` are ignored in both.

use std::fmt::Write as _;

use crate::error::{PcmError, Result};
use crate::graph::PreferenceDag;
use crate::matrix::{CompleteMatrix, IncompleteMatrix, WeightVector};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> PcmError {
    PcmError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a single entry token; `None` for `*`.
pub fn parse_entry(token: &str) -> std::result::Result<Option<f64>, String> {
    if token == "*" {
        return Ok(None);
    }
    let number = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| format!("'{token}' is not a number, fraction or '*'"))
    };
    let value = match token.split_once('/') {
        Some((p, q)) => number(p)? / number(q)?,
        None => number(token)?,
    };
    Ok(Some(value))
}

fn read_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<usize> {
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    header
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected the order n, found '{header}'")))
}

pub fn parse_matrix(text: &str) -> Result<IncompleteMatrix> {
    let mut lines = content_lines(text);
    let n = read_header(&mut lines)?;
    let mut raw = Vec::with_capacity(n);
    let mut last_line = 1;
    for (line, row) in lines.by_ref().take(n) {
        last_line = line;
        let entries = row
            .split_whitespace()
            .map(parse_entry)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|m| parse_err(line, m))?;
        if entries.len() != n {
            return Err(parse_err(
                line,
                format!("row has {} entries, expected {n}", entries.len()),
            ));
        }
        raw.push(entries);
    }
    if raw.len() != n {
        return Err(parse_err(last_line, format!("expected {n} rows, found {}", raw.len())));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "unexpected content after the last row"));
    }
    IncompleteMatrix::from_raw(&raw)
}

pub fn parse_complete_matrix(text: &str) -> Result<CompleteMatrix> {
    parse_matrix(text)?.into_complete()
}

/// Formats `v` with 12 digits after the leading one, trailing zeros trimmed.
pub fn format_number(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..=15).contains(&exp) {
        let decimals = (12 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let s = format!("{v:.12e}");
        match s.split_once('e') {
            Some((mantissa, e)) => format!("{}e{e}", trim_zeros(mantissa.to_string())),
            None => s,
        }
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_incomplete_matrix(m: &IncompleteMatrix) -> String {
    let n = m.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| m.get(i, j).map_or_else(|| "*".to_string(), format_number))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn write_matrix(m: &CompleteMatrix) -> String {
    write_incomplete_matrix(&m.to_incomplete())
}

pub fn parse_dag(text: &str) -> Result<PreferenceDag> {
    let mut lines = content_lines(text);
    let n = read_header(&mut lines)?;
    let mut arcs = Vec::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(parse_err(line, format!("expected 'i j', found '{l}'")));
        };
        let vertex = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                _ => Err(parse_err(line, format!("'{s}' is not a vertex in 1..={n}"))),
            }
        };
        arcs.push((vertex(a)?, vertex(b)?));
    }
    PreferenceDag::new(n, arcs)
}

pub fn write_dag(g: &PreferenceDag) -> String {
    let mut out = format!("{}\n", g.n());
    for &(a, b) in g.arcs() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

/// Weights as whitespace- or comma-separated numbers (fractions allowed).
///
/// The indexed form written by the CLI is also accepted: an optional
/// `item,weight` header followed by two or more `index weight` lines whose
/// indices run 1, 2, 3, ...
pub fn parse_weights(text: &str) -> Result<WeightVector> {
    let mut rows: Vec<(usize, Vec<&str>)> = content_lines(text)
        .map(|(line, l)| {
            let tokens = l.split(|c: char| c.is_whitespace() || c == ',');
            (line, tokens.filter(|t| !t.is_empty()).collect())
        })
        .collect();
    if rows.first().is_some_and(|(_, t)| t == &["item", "weight"]) {
        rows.remove(0);
    }
    let indexed = rows.len() >= 2
        && rows
            .iter()
            .enumerate()
            .all(|(k, (_, t))| t.len() == 2 && t[0].parse::<usize>() == Ok(k + 1));
    let mut values = Vec::new();
    for (line, tokens) in &rows {
        let tokens = if indexed { &tokens[1..] } else { &tokens[..] };
        for token in tokens {
            match parse_entry(token) {
                Ok(Some(v)) => values.push(v),
                Ok(None) => return Err(parse_err(*line, "weights cannot be missing")),
                Err(m) => return Err(parse_err(*line, m)),
            }
        }
    }
    WeightVector::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED_EXAMPLE: &str = "4\n1 2 * *\n1/2 1 1 8\n* 1 1 1\n* 1/8 1 1\n";

    #[test]
    fn parses_fractions_and_missing() {
        let m = parse_matrix(WORKED_EXAMPLE).unwrap();
        assert_eq!(m.missing_pairs(), vec![(0, 2), (0, 3)]);
        assert_eq!(m.get(3, 1), Some(0.125));
    }

    #[test]
    fn weights_in_every_cli_layout() {
        let plain = parse_weights("0.5 0.25\n1/4\n").unwrap();
        let indexed = parse_weights("1 0.5\n2 0.25\n3 0.25\n# lambda_max=3\n").unwrap();
        let csv = parse_weights("item,weight\n1,0.5\n2,0.25\n3,0.25\n").unwrap();
        assert_eq!(plain, indexed);
        assert_eq!(plain, csv);
        assert_eq!(parse_weights("1 2\n").unwrap().len(), 2);
    }

    #[test]
    fn writes_the_same_format() {
        let m = parse_matrix(WORKED_EXAMPLE).unwrap();
        assert_eq!(write_incomplete_matrix(&m), "4\n1 2 * *\n0.5 1 1 8\n* 1 1 1\n* 0.125 1 1\n");
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(4.0), "4");
        assert_eq!(format_number(1.0 / 3.0), "0.3333333333333");
        assert_eq!(format_number(123456.789), "123456.789");
        assert_eq!(format_number(2.0f64.sqrt() * 1e-7), "1.414213562373e-7");
        assert_eq!(format_number(-2.5), "-2.5");
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_matrix("2\n1 x\n1 1\n").unwrap_err();
        assert!(matches!(err, PcmError::Parse { line: 2, .. }), "{err:?}");
        assert!(matches!(parse_matrix("2\n1 2\n"), Err(PcmError::Parse { .. })));
        assert!(matches!(parse_matrix("2\n1 2 3\n1 1\n"), Err(PcmError::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix(""), Err(PcmError::Parse { .. })));
        assert!(matches!(
            parse_matrix("2\n1 2\n3 1\n"),
            Err(PcmError::ReciprocityViolation { .. })
        ));
    }

    #[test]
    fn dag_round_trip() {
        let g = parse_dag("# path\n3\n1 2\n2 3\n").unwrap();
        assert_eq!(g.arcs().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(parse_dag(&write_dag(&g)).unwrap(), g);
        assert!(matches!(parse_dag("3\n1 4\n"), Err(PcmError::Parse { line: 2, .. })));
        assert!(matches!(parse_dag("3\n1 2 3\n"), Err(PcmError::Parse { .. })));
    }

    #[test]
    fn weights_file() {
        let w = parse_weights("0.2, 0.3\n0.5").unwrap();
        assert_eq!(w.len(), 3);
        assert!(parse_weights("0.2 *").is_err());
    }
}
