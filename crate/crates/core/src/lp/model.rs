use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::LpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Row {
    name: String,
    sense: Sense,
    rhs: f64,
}

/// minimize c·x subject to row constraints and x ≥ 0, stored column-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpModel {
    col_names: Vec<String>,
    cost: Vec<f64>,
    rows: Vec<Row>,
    col_start: Vec<usize>,
    row_index: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Debug, Default, Clone)]
pub struct LpBuilder {
    col_names: Vec<String>,
    cost: Vec<f64>,
    rows: Vec<Row>,
    /// (column, row, value)
    entries: Vec<(usize, usize, f64)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_col(&mut self, name: impl Into<String>, cost: f64) -> usize {
        self.col_names.push(name.into());
        self.cost.push(cost);
        self.cost.len() - 1
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        sense: Sense,
        rhs: f64,
        coefs: &[(usize, f64)],
    ) -> usize {
        let r = self.rows.len();
        self.rows.push(Row {
            name: name.into(),
            sense,
            rhs,
        });
        self.entries.extend(coefs.iter().map(|&(c, v)| (c, r, v)));
        r
    }

    pub fn build(mut self) -> Result<LpModel, LpError> {
        let ncols = self.cost.len();
        if let Some(c) = self.cost.iter().find(|c| !c.is_finite()) {
            return Err(LpError::Malformed(format!("objective coefficient {c}")));
        }
        if let Some(r) = self.rows.iter().find(|r| !r.rhs.is_finite()) {
            return Err(LpError::Malformed(format!(
                "right-hand side {} of row {}",
                r.rhs, r.name
            )));
        }
        for &(c, r, v) in &self.entries {
            if c >= ncols {
                return Err(LpError::Malformed(format!(
                    "row {} references column {c}",
                    self.rows[r].name
                )));
            }
            if !v.is_finite() {
                return Err(LpError::Malformed(format!(
                    "coefficient {v} in row {}",
                    self.rows[r].name
                )));
            }
        }
        self.entries.sort_by_key(|&(c, r, _)| (c, r));
        let mut col_start = vec![0; ncols + 1];
        let mut row_index: Vec<usize> = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for &(c, r, v) in &self.entries {
            if last == Some((c, r)) {
                *values.last_mut().expect("previous entry exists") += v;
                continue;
            }
            last = Some((c, r));
            col_start[c + 1] += 1;
            row_index.push(r);
            values.push(v);
        }
        for c in 0..ncols {
            col_start[c + 1] += col_start[c];
        }
        Ok(LpModel {
            col_names: self.col_names,
            cost: self.cost,
            rows: self.rows,
            col_start,
            row_index,
            values,
        })
    }
}

impl LpModel {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    pub fn nonzeros(&self) -> usize {
        self.values.len()
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn col_name(&self, j: usize) -> &str {
        &self.col_names[j]
    }

    pub fn row_name(&self, i: usize) -> &str {
        &self.rows[i].name
    }

    pub fn sense(&self, i: usize) -> Sense {
        self.rows[i].sense
    }

    pub fn rhs(&self, i: usize) -> f64 {
        self.rows[i].rhs
    }

    /// Row indices and coefficients of column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.col_start[j], self.col_start[j + 1]);
        (&self.row_index[a..b], &self.values[a..b])
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// A x, row by row.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        let mut act = vec![0.0; self.num_rows()];
        for (j, &xj) in x.iter().enumerate().take(self.num_cols()) {
            if xj != 0.0 {
                let (rows, vals) = self.column(j);
                for (&i, &a) in rows.iter().zip(vals) {
                    act[i] += a * xj;
                }
            }
        }
        act
    }

    /// Largest absolute violation of any row or nonnegativity bound.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let act = self.row_activity(x);
        let rows = self.rows.iter().zip(&act).map(|(r, &a)| match r.sense {
            Sense::Ge => (r.rhs - a).max(0.0),
            Sense::Le => (a - r.rhs).max(0.0),
            Sense::Eq => (a - r.rhs).abs(),
        });
        let bounds = x.iter().map(|&v| (-v).max(0.0));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    /// The model in CPLEX LP text format.
    pub fn to_lp_format(&self) -> String {
        const PER_LINE: usize = 8;
        let mut out = String::from("\\ generated by mrt\nMinimize\n obj:");
        let mut terms = 0;
        for (j, &c) in self.cost.iter().enumerate() {
            if c != 0.0 {
                push_term(&mut out, c, &self.col_names[j], terms == 0);
                terms += 1;
                if terms % PER_LINE == 0 {
                    out.push_str("\n ");
                }
            }
        }
        if terms == 0 {
            out.push_str(" 0 ");
            out.push_str(self.col_names.first().map_or("x", String::as_str));
        }
        out.push_str("\nSubject To\n");
        let mut by_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.num_rows()];
        for j in 0..self.num_cols() {
            let (rows, vals) = self.column(j);
            for (&i, &a) in rows.iter().zip(vals) {
                by_row[i].push((j, a));
            }
        }
        for (r, coefs) in self.rows.iter().zip(&by_row) {
            write!(out, " {}:", r.name).expect("writing to a String");
            for (k, &(j, a)) in coefs.iter().enumerate() {
                push_term(&mut out, a, &self.col_names[j], k == 0);
                if (k + 1) % PER_LINE == 0 {
                    out.push_str("\n  ");
                }
            }
            if coefs.is_empty() {
                out.push_str(" 0 ");
                out.push_str(self.col_names.first().map_or("x", String::as_str));
            }
            let op = match r.sense {
                Sense::Ge => ">=",
                Sense::Le => "<=",
                Sense::Eq => "=",
            };
            writeln!(out, " {op} {}", r.rhs).expect("writing to a String");
        }
        out.push_str("End\n");
        out
    }
}

fn push_term(out: &mut String, coef: f64, name: &str, first: bool) {
    let sign = if coef < 0.0 {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    if sign.is_empty() {
        write!(out, " {} {name}", coef.abs()).expect("writing to a String");
    } else {
        write!(out, " {sign} {} {name}", coef.abs()).expect("writing to a String");
    }
}
