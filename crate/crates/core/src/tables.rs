//! Whitespace-separated numeric text tables with `#` comments.

use std::path::Path;

use crate::error::{Error, Result};

/// Parses rows of exactly `columns` numbers. Blank lines and anything after
/// `#` are ignored.
pub fn parse_rows(text: &str, columns: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Table {
                    line: i + 1,
                    msg: format!("'{tok}' is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != columns {
            return Err(Error::Table {
                line: i + 1,
                msg: format!("expected {columns} columns, found {}", row.len()),
            });
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Table { line: i + 1, msg: format!("non-finite value {v}") });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Table { line: 0, msg: "table has no rows".into() });
    }
    Ok(rows)
}

pub fn read_rows(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>> {
    parse_rows(&std::fs::read_to_string(path)?, columns)
}

/// Checks that the first column strictly increases.
pub fn check_increasing(rows: &[Vec<f64>]) -> Result<()> {
    for (i, w) in rows.windows(2).enumerate() {
        if w[1][0] <= w[0][0] {
            return Err(Error::Table {
                line: i + 2,
                msg: format!("abscissa {} does not increase", w[1][0]),
            });
        }
    }
    Ok(())
}

/// Piecewise-linear interpolation on sorted `xs`, clamped at both ends.
pub fn interp_clamped(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let rows = parse_rows("# header\n100 1.5\n\n200 -2 # trailing\n", 2).unwrap();
        assert_eq!(rows, vec![vec![100.0, 1.5], vec![200.0, -2.0]]);
    }

    #[test]
    fn reports_bad_line() {
        match parse_rows("1 2\n3 x\n", 2) {
            Err(Error::Table { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_rows("1 2 3\n", 2).is_err());
        assert!(parse_rows("# nothing\n", 2).is_err());
    }

    #[test]
    fn interpolation_clamps() {
        let xs = [0.0, 1.0, 3.0];
        let ys = [0.0, 10.0, 30.0];
        assert_eq!(interp_clamped(&xs, &ys, -1.0), 0.0);
        assert_eq!(interp_clamped(&xs, &ys, 2.0), 20.0);
        assert_eq!(interp_clamped(&xs, &ys, 5.0), 30.0);
    }
}
