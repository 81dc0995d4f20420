//! Plain-text CSV tables for solutions and sampled closed forms.
//!
//! Every table starts with `# tba-exact v1 <columns>` followed by the column
//! row. Numbers use 17 significant digits so that a round trip is exact.

use std::fmt::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::solver::{Su2kSolution, Su3Solution};
use crate::Real;

pub const FORMAT_VERSION: &str = "v1";

pub const SU2K_COLUMNS: [&str; 5] = ["theta", "reA", "imA", "reB", "imB"];
pub const SU3_COLUMNS: [&str; 9] = ["theta", "reA", "imA", "reB", "imB", "reA2", "imA2", "reB0b", "imB0b"];
pub const SAMPLE_COLUMNS: [&str; 3] = ["theta", "re", "im"];

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(columns: &[&str]) -> String {
    let cols = columns.join(",");
    format!("# tba-exact {FORMAT_VERSION} {cols}\n{cols}\n")
}

fn table<T: Real>(columns: &[&str], funcs: &[&GridFunction<T>]) -> String {
    let mut s = header(columns);
    let grid = funcs[0].grid;
    for i in 0..grid.count() {
        s.push_str(&num(grid.theta(i).to_f64().unwrap()));
        for f in funcs {
            let v = f.values[i];
            let _ = write!(s, ",{},{}", num(v.re.to_f64().unwrap()), num(v.im.to_f64().unwrap()));
        }
        s.push('\n');
    }
    s
}

pub fn su2k_csv<T: Real>(sol: &Su2kSolution<T>) -> String {
    table(&SU2K_COLUMNS, &[&sol.a, &sol.b])
}

/// Columns `A, B` hold `A_1, B_0`; `A2, B0b` hold `A_2, B_0bar`.
pub fn su3_csv<T: Real>(sol: &Su3Solution<T>) -> String {
    table(&SU3_COLUMNS, &[&sol.a1, &sol.b0, &sol.a2, &sol.b0bar])
}

/// One sampled function, columns `theta,re,im`.
pub fn samples_csv(thetas: &[f64], values: &[Complex64]) -> Result<String> {
    if thetas.len() != values.len() {
        return Err(Error::GridMismatch(format!(
            "{} abscissae for {} values",
            thetas.len(),
            values.len()
        )));
    }
    let mut s = header(&SAMPLE_COLUMNS);
    for (t, v) in thetas.iter().zip(values) {
        let _ = writeln!(s, "{},{},{}", num(*t), num(v.re), num(v.im));
    }
    Ok(s)
}

/// A parsed table: column names and rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// Reads a table written by this module; the version line is required.
pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let first = lines.next().unwrap_or_default();
    let cols = first
        .strip_prefix(&format!("# tba-exact {FORMAT_VERSION} "))
        .ok_or_else(|| Error::Invalid(format!("missing version line, got '{first}'")))?;
    let columns: Vec<String> = cols.split(',').map(str::to_string).collect();
    if lines.next() != Some(cols) {
        return Err(Error::Invalid("column row does not match the version line".into()));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Invalid(format!("row {}: {e}", n + 1)))?;
        if row.len() != columns.len() {
            return Err(Error::Invalid(format!("row {} has {} fields", n + 1, row.len())));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let t = [-1.0 / 3.0, 0.1, 2.5e-300];
        let v = [
            Complex64::new(-0.577_350_269_189_625_8, 1e-17),
            Complex64::new(f64::MAX, -0.0),
            Complex64::new(std::f64::consts::PI, 1.0),
        ];
        let s = samples_csv(&t, &v).unwrap();
        assert!(s.starts_with("# tba-exact v1 theta,re,im\ntheta,re,im\n"));
        let tab = parse_csv(&s).unwrap();
        assert_eq!(tab.column("theta").unwrap(), t);
        assert_eq!(tab.column("re").unwrap(), v.map(|z| z.re));
        assert_eq!(tab.column("im").unwrap(), v.map(|z| z.im));
    }

    #[test]
    fn rejects_unversioned() {
        assert!(parse_csv("theta,re,im\n0,1,2\n").is_err());
        assert!(samples_csv(&[0.0], &[]).is_err());
    }
}
