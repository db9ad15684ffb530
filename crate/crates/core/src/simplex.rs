//! Dense two-phase simplex for small linear programs.
//!
//! Solves `minimize cᵀx subject to rows, x ≥ 0`. Rows are normalised to a
//! nonnegative right-hand side; `≤` rows get a slack, `≥` rows a surplus and
//! an artificial, `=` rows an artificial. Dantzig pricing is used until a run
//! of degenerate pivots is seen, after which Bland's rule takes over so the
//! method cannot cycle.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
const FEASIBILITY_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible (phase-one residual {0})")]
    Infeasible(f64),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),
    #[error("variable index {index} out of range for {num_vars} variables")]
    BadVariable { index: usize, num_vars: usize },
    #[error("coefficient is not finite")]
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    cmp: Comparison,
    rhs: f64,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

impl LinearProgram {
    /// A program with `objective.len()` nonnegative variables to minimise.
    pub fn minimize(objective: Vec<f64>) -> LinearProgram {
        LinearProgram {
            objective,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, cmp: Comparison, rhs: f64) -> Result<(), LpError> {
        let num_vars = self.num_vars();
        if let Some(&(index, _)) = coeffs.iter().find(|(i, _)| *i >= num_vars) {
            return Err(LpError::BadVariable { index, num_vars });
        }
        if !rhs.is_finite() || coeffs.iter().any(|(_, v)| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
        self.rows.push(Row { coeffs, cmp, rhs });
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    /// `m` rows of `width + 1` entries; the last entry is the rhs.
    cells: Vec<Vec<f64>>,
    basis: Vec<usize>,
    num_vars: usize,
    first_artificial: usize,
    width: usize,
    iterations: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars();
        let mut rows: Vec<Row> = lp.rows.clone();
        for row in &mut rows {
            if row.rhs < 0.0 {
                row.rhs = -row.rhs;
                for c in &mut row.coeffs {
                    c.1 = -c.1;
                }
                row.cmp = match row.cmp {
                    Comparison::Le => Comparison::Ge,
                    Comparison::Ge => Comparison::Le,
                    Comparison::Eq => Comparison::Eq,
                };
            }
        }
        let num_slack = rows.iter().filter(|r| r.cmp != Comparison::Eq).count();
        let num_artificial = rows.iter().filter(|r| r.cmp != Comparison::Le).count();
        let first_artificial = n + num_slack;
        let width = first_artificial + num_artificial;

        let mut cells = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut next_slack, mut next_artificial) = (n, first_artificial);
        for row in &rows {
            let mut cell = vec![0.0; width + 1];
            for &(j, v) in &row.coeffs {
                cell[j] += v;
            }
            cell[width] = row.rhs;
            match row.cmp {
                Comparison::Le => {
                    cell[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Comparison::Ge => {
                    cell[next_slack] = -1.0;
                    next_slack += 1;
                    cell[next_artificial] = 1.0;
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
                Comparison::Eq => {
                    cell[next_artificial] = 1.0;
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
            }
            cells.push(cell);
        }
        Tableau {
            cells,
            basis,
            num_vars: n,
            first_artificial,
            width,
            iterations: 0,
        }
    }

    fn iteration_limit(&self) -> usize {
        50 * (self.cells.len() + self.width) + 1000
    }

    /// Reduced costs `c_j − c_Bᵀ B⁻¹ A_j` and the current objective value.
    fn reduced_costs(&self, costs: &[f64]) -> (Vec<f64>, f64) {
        let mut d = costs.to_vec();
        d.resize(self.width, 0.0);
        let mut value = 0.0;
        for (row, &b) in self.cells.iter().zip(&self.basis) {
            let cb = costs.get(b).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..self.width {
                    d[j] -= cb * row[j];
                }
                value += cb * row[self.width];
            }
        }
        (d, value)
    }

    fn pivot(&mut self, r: usize, col: usize, d: &mut [f64], value: &mut f64) {
        let w = self.width;
        let p = self.cells[r][col];
        for v in self.cells[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.cells[r].clone();
        for (i, row) in self.cells.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[col] = 0.0;
            }
        }
        let f = d[col];
        if f != 0.0 {
            for j in 0..w {
                d[j] -= f * pivot_row[j];
            }
            d[col] = 0.0;
            *value += f * pivot_row[w];
        }
        self.basis[r] = col;
        self.iterations += 1;
    }

    /// Runs simplex iterations over columns `< allowed`.
    fn optimize(&mut self, d: &mut [f64], value: &mut f64, allowed: usize) -> Result<(), LpError> {
        let w = self.width;
        let mut degenerate = 0usize;
        loop {
            if self.iterations > self.iteration_limit() {
                return Err(LpError::IterationLimit(self.iterations));
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let entering = if bland {
                (0..allowed).find(|&j| d[j] < -COST_TOL)
            } else {
                (0..allowed)
                    .filter(|&j| d[j] < -COST_TOL)
                    .min_by(|&a, &b| d[a].total_cmp(&d[b]))
            };
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, f64)> = None;
            for (i, row) in self.cells.iter().enumerate() {
                let a = row[col];
                if a > PIVOT_TOL {
                    let ratio = row[w] / a;
                    let better = match leaving {
                        None => true,
                        Some((k, best)) => {
                            ratio < best - 1e-13 || (ratio <= best + 1e-13 && self.basis[i] < self.basis[k])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leaving else {
                return Err(LpError::Unbounded);
            };
            if ratio <= 1e-13 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, col, d, value);
            // clamp roundoff in the rhs column
            for row in &mut self.cells {
                if row[w] < 0.0 && row[w] > -1e-12 {
                    row[w] = 0.0;
                }
            }
        }
    }

    fn run(mut self, objective: &[f64]) -> Result<LpSolution, LpError> {
        let w = self.width;
        if self.first_artificial < w {
            let mut phase_one = vec![0.0; w];
            for c in phase_one.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            let (mut d, mut value) = self.reduced_costs(&phase_one);
            self.optimize(&mut d, &mut value, w)?;
            let residual: f64 = self
                .cells
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.first_artificial)
                .map(|(row, _)| row[w])
                .sum();
            if residual > FEASIBILITY_TOL {
                return Err(LpError::Infeasible(residual));
            }
            // drive zero-valued artificials out of the basis
            for r in 0..self.cells.len() {
                if self.basis[r] >= self.first_artificial {
                    if let Some(col) = (0..self.first_artificial).find(|&j| self.cells[r][j].abs() > 1e-9) {
                        let mut scratch = vec![0.0; w];
                        let mut v = 0.0;
                        self.pivot(r, col, &mut scratch, &mut v);
                    }
                }
            }
        }
        let (mut d, mut value) = self.reduced_costs(objective);
        self.optimize(&mut d, &mut value, self.first_artificial)?;

        let mut x = vec![0.0; self.num_vars];
        for (row, &b) in self.cells.iter().zip(&self.basis) {
            if b < self.num_vars {
                x[b] = row[w];
            }
        }
        let objective_value = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpSolution {
            objective: objective_value,
            x,
            iterations: self.iterations,
        })
    }
}
