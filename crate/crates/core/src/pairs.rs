// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Digits that make every `f64` round-trip through text.
pub const ROUND_TRIP_DIGITS: usize = 17;

/// A dense `n × n` table of a pairwise quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairMatrix {
    n: usize,
    values: Vec<f64>,
}

impl PairMatrix {
    pub fn zeros(n: usize) -> Self {
        PairMatrix { n, values: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        PairMatrix { n, values }
    }

    /// Builds a symmetric table with zero diagonal from `f(i, j)`, `i < j`.
    pub fn symmetric_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                m.values[i * n + j] = v;
                m.values[j * n + i] = v;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0.0)
    }

    pub fn max_abs_diff(&self, other: &PairMatrix) -> f64 {
        assert_eq!(self.n, other.n, "tables of different size");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with a 1-based header row and a 1-based label column.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::new();
        for j in 0..self.n {
            let _ = write!(out, ",{}", j + 1);
        }
        out.push('\n');
        for i in 0..self.n {
            let _ = write!(out, "{}", i + 1);
            for j in 0..self.n {
                let _ = write!(out, ",{}", format_value(self.get(i, j), digits));
            }
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`PairMatrix::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Empty)?;
        let n = header.split(',').count().saturating_sub(1);
        let mut values = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (idx, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != n + 1 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {} fields, found {}", n + 1, fields.len()),
                });
            }
            for tok in &fields[1..] {
                values.push(tok.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("`{tok}` is not a number"),
                })?);
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: rows + 1,
                message: format!("expected {n} rows, found {rows}"),
            });
        }
        Ok(PairMatrix { n, values })
    }
}

/// Formats `v` with at most `digits` significant digits.
///
/// At [`ROUND_TRIP_DIGITS`] or more this is the shortest representation
/// that parses back to the same bits.
pub fn format_value(v: f64, digits: usize) -> String {
    if digits >= ROUND_TRIP_DIGITS || !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let rounded: f64 = format!("{:.*e}", digits - 1, v).parse().unwrap_or(v);
    format!("{rounded}")
}
