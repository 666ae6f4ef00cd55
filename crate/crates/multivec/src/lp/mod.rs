//! Sparse linear-program container, embedded two-phase primal simplex and
//! MPS export/import.

mod mps;
mod simplex;

pub use mps::{read_mps, write_mps};

use std::collections::HashMap;

use crate::{Error, Result};

/// Handle to a column created by [`LinearProgram::add_column`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColId(pub(crate) usize);

/// Handle to a row created by [`LinearProgram::add_row`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowId(pub(crate) usize);

impl ColId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl RowId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub name: String,
    pub sense: Sense,
    pub rhs: f64,
}

/// Mutable LP under construction. Minimization sense throughout.
///
/// Columns and rows keep insertion order; that order is the canonical one used
/// by the solver, the MPS writer and every report, so identical build sequences
/// produce byte-identical artifacts.
#[derive(Debug, Default, Clone)]
pub struct LinearProgram {
    cols: Vec<Column>,
    rows: Vec<Row>,
    triplets: Vec<(usize, usize, f64)>,
    col_index: HashMap<String, usize>,
    row_index: HashMap<String, usize>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_column(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        objective: f64,
    ) -> Result<ColId> {
        let name = name.into();
        if self.col_index.contains_key(&name) {
            return Err(Error::Lp(format!("duplicate column name '{name}'")));
        }
        if !(lower <= upper) {
            return Err(Error::Lp(format!(
                "column '{name}': lower bound {lower} exceeds upper bound {upper}"
            )));
        }
        if !objective.is_finite() {
            return Err(Error::Lp(format!("column '{name}': non-finite objective")));
        }
        let id = ColId(self.cols.len());
        self.col_index.insert(name.clone(), id.0);
        self.cols.push(Column {
            name,
            lower,
            upper,
            objective,
        });
        Ok(id)
    }

    pub fn add_row(&mut self, name: impl Into<String>, sense: Sense, rhs: f64) -> Result<RowId> {
        let name = name.into();
        if self.row_index.contains_key(&name) {
            return Err(Error::Lp(format!("duplicate row name '{name}'")));
        }
        if !rhs.is_finite() {
            return Err(Error::Lp(format!("row '{name}': non-finite rhs")));
        }
        let id = RowId(self.rows.len());
        self.row_index.insert(name.clone(), id.0);
        self.rows.push(Row { name, sense, rhs });
        Ok(id)
    }

    pub fn add_coeff(&mut self, row: RowId, col: ColId, value: f64) {
        debug_assert!(row.0 < self.rows.len() && col.0 < self.cols.len());
        if value != 0.0 {
            self.triplets.push((row.0, col.0, value));
        }
    }

    /// Name-addressed variant of [`add_coeff`](Self::add_coeff).
    pub fn add_coeff_by_name(&mut self, row: &str, col: &str, value: f64) -> Result<()> {
        let r = self
            .row_index
            .get(row)
            .ok_or_else(|| Error::Lp(format!("unknown row '{row}'")))?;
        let c = self
            .col_index
            .get(col)
            .ok_or_else(|| Error::Lp(format!("unknown column '{col}'")))?;
        self.add_coeff(RowId(*r), ColId(*c), value);
        Ok(())
    }

    /// Add `value` to the objective coefficient of an existing column.
    pub fn add_objective(&mut self, col: ColId, value: f64) {
        self.cols[col.0].objective += value;
    }

    pub fn col_id(&self, name: &str) -> Option<ColId> {
        self.col_index.get(name).copied().map(ColId)
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Row> {
        &mut self.rows
    }

    pub fn row_id(&self, name: &str) -> Option<RowId> {
        self.row_index.get(name).copied().map(RowId)
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Freeze the program: sum duplicate coefficients, build column-major
    /// storage, detect trivially inconsistent empty rows. Consumes the builder,
    /// so no further edits are possible.
    pub fn finalize(self) -> FinalizedLp {
        let ncols = self.cols.len();
        let nrows = self.rows.len();

        // Sum duplicates via a (col, row)-sorted pass.
        let mut entries = self.triplets;
        entries.sort_unstable_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut col_starts = vec![0usize; ncols + 1];
        let mut col_rows = Vec::with_capacity(entries.len());
        let mut col_vals = Vec::with_capacity(entries.len());
        {
            let mut i = 0;
            for c in 0..ncols {
                col_starts[c] = col_rows.len();
                while i < entries.len() && entries[i].1 == c {
                    let row = entries[i].0;
                    let mut v = entries[i].2;
                    i += 1;
                    while i < entries.len() && entries[i].1 == c && entries[i].0 == row {
                        v += entries[i].2;
                        i += 1;
                    }
                    if v != 0.0 {
                        col_rows.push(row);
                        col_vals.push(v);
                    }
                }
            }
            col_starts[ncols] = col_rows.len();
        }

        let mut row_nnz = vec![0usize; nrows];
        for &r in &col_rows {
            row_nnz[r] += 1;
        }
        let trivially_infeasible = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, row)| {
                row_nnz[*i] == 0
                    && match row.sense {
                        Sense::Le => row.rhs < 0.0,
                        Sense::Eq => row.rhs != 0.0,
                        Sense::Ge => row.rhs > 0.0,
                    }
            })
            .map(|(i, _)| i)
            .collect();

        FinalizedLp {
            cols: self.cols,
            rows: self.rows,
            col_starts,
            col_rows,
            col_vals,
            trivially_infeasible,
        }
    }
}

/// Immutable finalized LP in column-major sparse form.
#[derive(Debug, Clone)]
pub struct FinalizedLp {
    pub cols: Vec<Column>,
    pub rows: Vec<Row>,
    col_starts: Vec<usize>,
    col_rows: Vec<usize>,
    col_vals: Vec<f64>,
    trivially_infeasible: Vec<usize>,
}

impl FinalizedLp {
    /// Sparse entries of one column as (row, value) pairs, row-sorted.
    pub fn col_entries(&self, col: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.col_starts[col];
        let hi = self.col_starts[col + 1];
        self.col_rows[lo..hi]
            .iter()
            .copied()
            .zip(self.col_vals[lo..hi].iter().copied())
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.col_rows.len()
    }

    pub fn col_id(&self, name: &str) -> Option<usize> {
        self.cols.iter().position(|c| c.name == name)
    }

    pub fn row_id(&self, name: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.name == name)
    }

    /// Solve with the embedded simplex.
    pub fn solve(&self, options: &SolveOptions) -> Solution {
        simplex::solve(self, options)
    }

    /// Objective value of an assignment, in the LP's own ordering.
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.cols
            .iter()
            .zip(values)
            .map(|(c, v)| c.objective * v)
            .sum()
    }

    /// Left-hand-side values of every row for an assignment.
    pub fn row_activity(&self, values: &[f64]) -> Vec<f64> {
        let mut act = vec![0.0; self.rows.len()];
        for c in 0..self.cols.len() {
            let x = values[c];
            if x != 0.0 {
                for (r, v) in self.col_entries(c) {
                    act[r] += v * x;
                }
            }
        }
        act
    }

    /// Largest scaled feasibility residual of an assignment: bound violations
    /// and row violations, each divided by max(1, |rhs|).
    pub fn max_scaled_residual(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (c, &x) in self.cols.iter().zip(values) {
            let denom = 1f64.max(c.lower.abs()).max(c.upper.abs().min(f64::MAX));
            if x < c.lower {
                worst = worst.max((c.lower - x) / denom);
            }
            if x > c.upper {
                worst = worst.max((x - c.upper) / denom);
            }
        }
        for (r, act) in self.rows.iter().zip(self.row_activity(values)) {
            let denom = 1f64.max(r.rhs.abs());
            let viol = match r.sense {
                Sense::Le => act - r.rhs,
                Sense::Ge => r.rhs - act,
                Sense::Eq => (act - r.rhs).abs(),
            };
            worst = worst.max(viol / denom);
        }
        worst
    }

    pub(crate) fn trivially_infeasible_rows(&self) -> &[usize] {
        &self.trivially_infeasible
    }
}

/// Solver options. Defaults follow the shipped tolerances: 1e-7 pivot,
/// 1e-6 feasibility, refactorization every 50 pivots, Bland's rule after 50
/// degenerate pivots.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub feasibility_tol: f64,
    pub pivot_tol: f64,
    pub max_iters: usize,
    /// Reserved for randomized variants; the default pricing is deterministic.
    pub seed: u64,
    pub refactor_interval: usize,
    pub bland_trigger: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            feasibility_tol: 1e-6,
            pivot_tol: 1e-7,
            max_iters: 200_000,
            seed: 0,
            refactor_interval: 50,
            bland_trigger: 50,
        }
    }
}

/// Solve outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Phase-1 evidence of infeasibility.
#[derive(Debug, Clone, Default)]
pub struct InfeasibilityCertificate {
    /// Rows whose artificial variable kept a positive residual.
    pub violated_rows: Vec<String>,
    /// Rows participating in the phase-1 dual proof (nonzero multiplier).
    pub supporting_rows: Vec<String>,
}

impl InfeasibilityCertificate {
    pub fn mentions(&self, row: &str) -> bool {
        self.violated_rows.iter().any(|r| r == row)
            || self.supporting_rows.iter().any(|r| r == row)
    }
}

/// Solution container; primal values per column, duals per row, reduced costs
/// per column, all in the original (unscaled) problem units.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    pub objective: f64,
    pub values: Vec<f64>,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub certificate: Option<InfeasibilityCertificate>,
    pub iterations: usize,
}

impl Solution {
    pub fn value_of(&self, lp: &FinalizedLp, name: &str) -> Option<f64> {
        lp.col_id(name).map(|i| self.values[i])
    }

    pub fn dual_of(&self, lp: &FinalizedLp, name: &str) -> Option<f64> {
        lp.row_id(name).map(|i| self.duals[i])
    }

    /// |cᵀx − bᵀy| / max(1, |cᵀx|), only meaningful for optimal solutions.
    pub fn duality_gap(&self, lp: &FinalizedLp) -> f64 {
        let primal = self.objective;
        // Account for nonbasic variables at bounds: gap uses b'y + sum of
        // bound contributions via reduced costs.
        let mut dual_obj: f64 = lp
            .rows
            .iter()
            .zip(&self.duals)
            .map(|(r, y)| r.rhs * y)
            .sum();
        for (c, d) in lp.cols.iter().zip(&self.reduced_costs) {
            if *d > 0.0 && c.lower.is_finite() {
                dual_obj += d * c.lower;
            } else if *d < 0.0 && c.upper.is_finite() {
                dual_obj += d * c.upper;
            }
        }
        (primal - dual_obj).abs() / 1f64.max(primal.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_lp_finalizes_to_zero_problem() {
        let lp = LinearProgram::new().finalize();
        assert_eq!(lp.num_cols(), 0);
        assert_eq!(lp.num_rows(), 0);
        let sol = lp.solve(&SolveOptions::default());
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn duplicate_coefficients_are_summed() {
        let mut lp = LinearProgram::new();
        let c = lp.add_column("x", 0.0, 10.0, 1.0).unwrap();
        let r = lp.add_row("r", Sense::Ge, 1.0).unwrap();
        lp.add_coeff(r, c, 2.0);
        lp.add_coeff(r, c, 3.0);
        let f = lp.finalize();
        let entries: Vec<_> = f.col_entries(0).collect();
        assert_eq!(entries, vec![(0, 5.0)]);
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut lp = LinearProgram::new();
        lp.add_column("x", 0.0, 1.0, 0.0).unwrap();
        assert!(lp.add_column("x", 0.0, 1.0, 0.0).is_err());
        lp.add_row("r", Sense::Le, 0.0).unwrap();
        assert!(lp.add_row("r", Sense::Eq, 1.0).is_err());
        assert!(lp.add_coeff_by_name("nope", "x", 1.0).is_err());
        assert!(lp.add_coeff_by_name("r", "nope", 1.0).is_err());
    }

    #[test]
    fn inconsistent_empty_rows_flagged() {
        let mut lp = LinearProgram::new();
        lp.add_column("x", 0.0, 1.0, 0.0).unwrap();
        lp.add_row("bad_eq", Sense::Eq, 2.0).unwrap();
        lp.add_row("ok_le", Sense::Le, 0.5).unwrap();
        lp.add_row("bad_ge", Sense::Ge, 0.5).unwrap();
        let f = lp.finalize();
        assert_eq!(f.trivially_infeasible_rows(), &[0, 2]);
        let sol = f.solve(&SolveOptions::default());
        assert_eq!(sol.status, Status::Infeasible);
        let cert = sol.certificate.unwrap();
        assert!(cert.mentions("bad_eq"));
        assert!(cert.mentions("bad_ge"));
        assert!(!cert.mentions("ok_le"));
    }
}
