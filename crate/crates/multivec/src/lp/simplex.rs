//! Two-phase primal simplex on the bounded-variable form.
//!
//! Rows are turned into equalities with one logical (slack) column each;
//! rows infeasible at the starting point receive a phase-1 artificial column.
//! The basis is factorized densely after eliminating basic logical columns
//! (they are unit vectors, so only the structural core needs an LU), with
//! product-form eta updates between periodic refactorizations. Pricing is
//! Dantzig with lowest-index tie-break, switching to Bland's rule after a run
//! of degenerate pivots.

use super::{FinalizedLp, InfeasibilityCertificate, Sense, Solution, SolveOptions, Status};

const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    FreeZero,
}

struct IColumn {
    lower: f64,
    upper: f64,
    /// Phase-2 (true) cost, scaled.
    cost: f64,
    entries: Vec<(usize, f64)>,
    /// Row covered when this is a logical/artificial unit column.
    unit_row: Option<(usize, f64)>,
}

struct Problem {
    m: usize,
    n_struct: usize,
    cols: Vec<IColumn>,
    rhs: Vec<f64>,
    row_scale: Vec<f64>,
    col_scale: Vec<f64>,
    /// Artificial column index per row, if one was created.
    artificial_of_row: Vec<Option<usize>>,
}

impl Problem {
    fn cost_of(&self, col: usize, phase_one: bool) -> f64 {
        if phase_one {
            if col >= self.n_struct + self.m {
                1.0
            } else {
                0.0
            }
        } else {
            self.cols[col].cost
        }
    }
}

/// Round a positive number to the nearest power of two.
fn pow2_near(x: f64) -> f64 {
    if !x.is_finite() || x <= 0.0 {
        return 1.0;
    }
    (2.0f64).powi(x.log2().round() as i32)
}

/// Geometric-mean equilibration, factors rounded to powers of two so scaling
/// introduces no rounding error.
fn equilibrate(lp: &FinalizedLp) -> (Vec<f64>, Vec<f64>) {
    let m = lp.num_rows();
    let n = lp.num_cols();
    let mut row_scale = vec![1.0f64; m];
    let mut col_scale = vec![1.0f64; n];
    for _ in 0..2 {
        let mut row_min = vec![INF; m];
        let mut row_max = vec![0.0f64; m];
        for c in 0..n {
            for (r, v) in lp.col_entries(c) {
                let a = (v * row_scale[r] * col_scale[c]).abs();
                if a > 0.0 {
                    row_min[r] = row_min[r].min(a);
                    row_max[r] = row_max[r].max(a);
                }
            }
        }
        for r in 0..m {
            if row_max[r] > 0.0 {
                row_scale[r] *= pow2_near(1.0 / (row_min[r] * row_max[r]).sqrt());
            }
        }
        let mut col_min = vec![INF; n];
        let mut col_max = vec![0.0f64; n];
        for c in 0..n {
            for (r, v) in lp.col_entries(c) {
                let a = (v * row_scale[r] * col_scale[c]).abs();
                if a > 0.0 {
                    col_min[c] = col_min[c].min(a);
                    col_max[c] = col_max[c].max(a);
                }
            }
        }
        for c in 0..n {
            if col_max[c] > 0.0 {
                col_scale[c] *= pow2_near(1.0 / (col_min[c] * col_max[c]).sqrt());
            }
        }
    }
    (row_scale, col_scale)
}

fn build_problem(lp: &FinalizedLp) -> Problem {
    let m = lp.num_rows();
    let n = lp.num_cols();
    let (row_scale, col_scale) = equilibrate(lp);

    let mut cols = Vec::with_capacity(n + m);
    for (c, col) in lp.cols.iter().enumerate() {
        let s = col_scale[c];
        let entries = lp
            .col_entries(c)
            .map(|(r, v)| (r, v * row_scale[r] * s))
            .collect();
        cols.push(IColumn {
            lower: if col.lower.is_finite() { col.lower / s } else { col.lower },
            upper: if col.upper.is_finite() { col.upper / s } else { col.upper },
            cost: col.objective * s,
            entries,
            unit_row: None,
        });
    }
    // Logical column per row; its coefficient stays exactly 1 because the
    // implicit column scale is 1/row_scale.
    for (r, row) in lp.rows.iter().enumerate() {
        let (lower, upper) = match row.sense {
            Sense::Le => (0.0, INF),
            Sense::Eq => (0.0, 0.0),
            Sense::Ge => (-INF, 0.0),
        };
        cols.push(IColumn {
            lower,
            upper,
            cost: 0.0,
            entries: vec![(r, 1.0)],
            unit_row: Some((r, 1.0)),
        });
    }
    let rhs = lp
        .rows
        .iter()
        .enumerate()
        .map(|(r, row)| row.rhs * row_scale[r])
        .collect();
    Problem {
        m,
        n_struct: n,
        cols,
        rhs,
        row_scale,
        col_scale,
        artificial_of_row: vec![None; m],
    }
}

struct DenseLu {
    n: usize,
    /// Row-major L\U storage, unit diagonal of L implicit.
    a: Vec<f64>,
    piv: Vec<usize>,
}

impl DenseLu {
    fn factor(n: usize, mut a: Vec<f64>) -> Option<DenseLu> {
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let mut best = k;
            let mut best_abs = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best_abs {
                    best_abs = v;
                    best = i;
                }
            }
            if best_abs < 1e-12 {
                return None;
            }
            piv[k] = best;
            if best != k {
                for j in 0..n {
                    a.swap(k * n + j, best * n + j);
                }
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                if f != 0.0 {
                    let (head, tail) = a.split_at_mut(i * n);
                    let row_k = &head[k * n + k + 1..k * n + n];
                    let row_i = &mut tail[k + 1..n];
                    for (x, y) in row_i.iter_mut().zip(row_k) {
                        *x -= f * y;
                    }
                }
            }
        }
        Some(DenseLu { n, a, piv })
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for i in 1..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.a[i * n + j] * b[j];
            }
            b[i] = s / self.a[i * n + i];
        }
    }

    fn solve_t(&self, b: &mut [f64]) {
        let n = self.n;
        // Uᵀ z = b: forward substitution with non-unit diagonal.
        for i in 0..n {
            let mut s = b[i];
            for j in 0..i {
                s -= self.a[j * n + i] * b[j];
            }
            b[i] = s / self.a[i * n + i];
        }
        // Lᵀ w = z: backward substitution with unit diagonal.
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= self.a[j * n + i] * b[j];
            }
            b[i] = s;
        }
        for k in (0..n).rev() {
            b.swap(k, self.piv[k]);
        }
    }
}

/// Basis factorization with basic unit (logical) columns eliminated before the
/// dense LU of the remaining structural core.
struct Factor {
    /// row -> (basis position, sign) when covered by a basic unit column.
    unit_at_row: Vec<Option<(usize, f64)>>,
    core_rows: Vec<usize>,
    /// core column -> basis position.
    core_pos: Vec<usize>,
    /// core column -> entries on covered rows (row, value).
    covered_entries: Vec<Vec<(usize, f64)>>,
    lu: DenseLu,
}

impl Factor {
    fn build(prob: &Problem, basis: &[usize]) -> Option<Factor> {
        let m = prob.m;
        let mut unit_at_row: Vec<Option<(usize, f64)>> = vec![None; m];
        let mut core_pos = Vec::new();
        for (p, &c) in basis.iter().enumerate() {
            match prob.cols[c].unit_row {
                Some((r, sign)) if unit_at_row[r].is_none() => {
                    unit_at_row[r] = Some((p, sign));
                }
                _ => core_pos.push(p),
            }
        }
        let core_rows: Vec<usize> = (0..m).filter(|r| unit_at_row[*r].is_none()).collect();
        let dim = core_rows.len();
        if core_pos.len() != dim {
            return None;
        }
        let mut row_to_core = vec![usize::MAX; m];
        for (i, &r) in core_rows.iter().enumerate() {
            row_to_core[r] = i;
        }
        let mut dense = vec![0.0f64; dim * dim];
        let mut covered_entries = Vec::with_capacity(dim);
        for (j, &p) in core_pos.iter().enumerate() {
            let mut ve = Vec::new();
            for &(r, v) in &prob.cols[basis[p]].entries {
                match row_to_core[r] {
                    usize::MAX => ve.push((r, v)),
                    i => dense[i * dim + j] = v,
                }
            }
            covered_entries.push(ve);
        }
        let lu = DenseLu::factor(dim, dense)?;
        Some(Factor {
            unit_at_row,
            core_rows,
            core_pos,
            covered_entries,
            lu,
        })
    }

    /// w = B₀⁻¹ a, result indexed by basis position. `a` is dense over rows
    /// and is consumed as scratch.
    fn ftran(&self, a: &mut [f64], out: &mut [f64]) {
        let mut rhs: Vec<f64> = self.core_rows.iter().map(|&r| a[r]).collect();
        if !rhs.is_empty() {
            self.lu.solve(&mut rhs);
        }
        for (j, &x) in rhs.iter().enumerate() {
            if x != 0.0 {
                for &(r, v) in &self.covered_entries[j] {
                    a[r] -= v * x;
                }
            }
        }
        for p in out.iter_mut() {
            *p = 0.0;
        }
        for (r, info) in self.unit_at_row.iter().enumerate() {
            if let Some((p, sign)) = info {
                out[*p] = sign * a[r];
            }
        }
        for (j, &p) in self.core_pos.iter().enumerate() {
            out[p] = rhs[j];
        }
    }

    /// y = B₀⁻ᵀ c, input indexed by basis position, output indexed by row.
    fn btran(&self, c: &[f64], y: &mut [f64]) {
        for (r, info) in self.unit_at_row.iter().enumerate() {
            y[r] = match info {
                Some((p, sign)) => sign * c[*p],
                None => 0.0,
            };
        }
        let dim = self.core_rows.len();
        if dim == 0 {
            return;
        }
        let mut rhs = vec![0.0f64; dim];
        for (j, &p) in self.core_pos.iter().enumerate() {
            let mut v = c[p];
            for &(r, a) in &self.covered_entries[j] {
                v -= a * y[r];
            }
            rhs[j] = v;
        }
        self.lu.solve_t(&mut rhs);
        for (i, &r) in self.core_rows.iter().enumerate() {
            y[r] = rhs[i];
        }
    }
}

struct Eta {
    pos: usize,
    diag: f64,
    /// (position, value) pairs excluding the pivot position.
    entries: Vec<(usize, f64)>,
}

struct Engine {
    prob: Problem,
    opts: SolveOptions,
    basis: Vec<usize>,
    state: Vec<VarState>,
    x: Vec<f64>,
    factor: Factor,
    etas: Vec<Eta>,
    iterations: usize,
    degenerate_run: usize,
}

enum PhaseOutcome {
    Converged,
    Unbounded,
    IterationLimit,
    NumericalBreakdown,
}

impl Engine {
    /// B⁻¹ (column of `col`), indexed by basis position.
    fn ftran_col(&self, col: usize) -> Vec<f64> {
        let m = self.prob.m;
        let mut a = vec![0.0f64; m];
        for &(r, v) in &self.prob.cols[col].entries {
            a[r] += v;
        }
        let mut w = vec![0.0f64; m];
        self.factor.ftran(&mut a, &mut w);
        for eta in &self.etas {
            let t = w[eta.pos] / eta.diag;
            if t != 0.0 {
                for &(i, v) in &eta.entries {
                    w[i] -= v * t;
                }
            }
            w[eta.pos] = t;
        }
        w
    }

    /// Row duals for the current basis under phase-1 or phase-2 costs.
    fn duals(&self, phase_one: bool) -> Vec<f64> {
        let m = self.prob.m;
        let mut c: Vec<f64> = self
            .basis
            .iter()
            .map(|&b| self.prob.cost_of(b, phase_one))
            .collect();
        for eta in self.etas.iter().rev() {
            let mut acc = c[eta.pos];
            for &(i, v) in &eta.entries {
                acc -= v * c[i];
            }
            c[eta.pos] = acc / eta.diag;
        }
        let mut y = vec![0.0f64; m];
        self.factor.btran(&c, &mut y);
        y
    }

    /// Recompute basic values from scratch: x_B = B⁻¹ (b − N x_N).
    fn recompute_basics(&mut self) {
        let m = self.prob.m;
        let mut rhs = self.prob.rhs.clone();
        for (c, col) in self.prob.cols.iter().enumerate() {
            if matches!(self.state[c], VarState::Basic(_)) {
                continue;
            }
            let xv = self.x[c];
            if xv != 0.0 {
                for &(r, v) in &col.entries {
                    rhs[r] -= v * xv;
                }
            }
        }
        let mut w = vec![0.0f64; m];
        self.factor.ftran(&mut rhs, &mut w);
        for (p, &c) in self.basis.iter().enumerate() {
            self.x[c] = w[p];
        }
    }

    fn refactor(&mut self) -> Result<(), ()> {
        match Factor::build(&self.prob, &self.basis) {
            Some(f) => {
                self.factor = f;
                self.etas.clear();
                self.recompute_basics();
                Ok(())
            }
            None => Err(()),
        }
    }

    fn run_phase(&mut self, phase_one: bool) -> PhaseOutcome {
        let n_all = self.prob.cols.len();
        let tol_d = self.opts.pivot_tol;
        let mut bland = false;
        loop {
            if self.iterations >= self.opts.max_iters {
                return PhaseOutcome::IterationLimit;
            }
            let y = self.duals(phase_one);

            // Pricing: Dantzig largest violation, or Bland lowest index.
            let mut enter: Option<(usize, f64, bool)> = None;
            for c in 0..n_all {
                let st = self.state[c];
                if matches!(st, VarState::Basic(_)) {
                    continue;
                }
                let col = &self.prob.cols[c];
                if col.upper - col.lower <= 0.0 {
                    continue; // fixed, never enters
                }
                let mut d = self.prob.cost_of(c, phase_one);
                for &(r, v) in &col.entries {
                    d -= y[r] * v;
                }
                let (improves, increase) = match st {
                    VarState::AtLower => (d < -tol_d, true),
                    VarState::AtUpper => (d > tol_d, false),
                    VarState::FreeZero => (d.abs() > tol_d, d < 0.0),
                    VarState::Basic(_) => unreachable!(),
                };
                if improves {
                    if bland {
                        enter = Some((c, d.abs(), increase));
                        break;
                    }
                    if enter.map_or(true, |(_, best, _)| d.abs() > best) {
                        enter = Some((c, d.abs(), increase));
                    }
                }
            }
            let Some((q, _, increase)) = enter else {
                return PhaseOutcome::Converged;
            };

            let w = self.ftran_col(q);
            let dir: f64 = if increase { 1.0 } else { -1.0 };

            // Ratio test: tightest basic-variable limit vs. the entering
            // variable's own bound span.
            let colq = &self.prob.cols[q];
            let flip_room = colq.upper - colq.lower;
            let mut row_room = INF;
            let mut row_choice: Option<(usize, f64)> = None; // (position, g)
            for (p, &wp) in w.iter().enumerate() {
                let g = dir * wp;
                if g.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let b = self.basis[p];
                let xb = self.x[b];
                let col = &self.prob.cols[b];
                let room = if g > 0.0 {
                    if col.lower.is_finite() {
                        ((xb - col.lower) / g).max(0.0)
                    } else {
                        continue;
                    }
                } else if col.upper.is_finite() {
                    ((col.upper - xb) / -g).max(0.0)
                } else {
                    continue;
                };
                let take = match row_choice {
                    None => true,
                    Some((bp, bg)) => {
                        let tie = (room - row_room).abs() <= 1e-9 * (1.0 + row_room.abs());
                        if tie {
                            if bland {
                                self.basis[p] < self.basis[bp]
                            } else {
                                g.abs() > bg.abs()
                            }
                        } else {
                            room < row_room
                        }
                    }
                };
                if take {
                    row_room = row_room.min(room);
                    row_choice = Some((p, g));
                }
            }

            let (step, pivot) = if flip_room < row_room {
                (flip_room, None)
            } else if let Some(choice) = row_choice {
                (row_room, Some(choice))
            } else {
                return PhaseOutcome::Unbounded;
            };
            if !step.is_finite() {
                return PhaseOutcome::Unbounded;
            }
            let step = step.max(0.0);

            self.x[q] += dir * step;
            if step != 0.0 {
                for (p, &wp) in w.iter().enumerate() {
                    if wp != 0.0 {
                        let b = self.basis[p];
                        self.x[b] -= dir * step * wp;
                    }
                }
            }

            self.iterations += 1;
            if step <= 1e-10 {
                self.degenerate_run += 1;
                if self.degenerate_run >= self.opts.bland_trigger {
                    bland = true;
                }
            } else {
                self.degenerate_run = 0;
                bland = false;
            }

            match pivot {
                None => {
                    // Bound flip: entering variable reached its other bound.
                    self.state[q] = if increase {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                    self.x[q] = if increase { colq.upper } else { colq.lower };
                }
                Some((p, g)) => {
                    let leaving = self.basis[p];
                    let col = &self.prob.cols[leaving];
                    if g > 0.0 {
                        self.state[leaving] = VarState::AtLower;
                        self.x[leaving] = col.lower;
                    } else {
                        self.state[leaving] = VarState::AtUpper;
                        self.x[leaving] = col.upper;
                    }
                    self.basis[p] = q;
                    self.state[q] = VarState::Basic(p);
                    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(8);
                    for (i, &wi) in w.iter().enumerate() {
                        if i != p && wi != 0.0 {
                            entries.push((i, wi));
                        }
                    }
                    self.etas.push(Eta {
                        pos: p,
                        diag: w[p],
                        entries,
                    });
                    if self.etas.len() >= self.opts.refactor_interval && self.refactor().is_err()
                    {
                        return PhaseOutcome::NumericalBreakdown;
                    }
                }
            }
        }
    }
}

pub(super) fn solve(lp: &FinalizedLp, opts: &SolveOptions) -> Solution {
    let n = lp.num_cols();
    let m = lp.num_rows();

    if !lp.trivially_infeasible_rows().is_empty() {
        let names: Vec<String> = lp
            .trivially_infeasible_rows()
            .iter()
            .map(|&r| lp.rows[r].name.clone())
            .collect();
        return Solution {
            status: Status::Infeasible,
            objective: 0.0,
            values: vec![0.0; n],
            duals: vec![0.0; m],
            reduced_costs: vec![0.0; n],
            certificate: Some(InfeasibilityCertificate {
                violated_rows: names.clone(),
                supporting_rows: names,
            }),
            iterations: 0,
        };
    }

    let mut prob = build_problem(lp);

    // Starting point: structural variables at their nearest finite bound.
    let mut state = Vec::with_capacity(prob.cols.len());
    let mut x = Vec::with_capacity(prob.cols.len());
    for col in &prob.cols[..n] {
        if col.lower.is_finite() {
            state.push(VarState::AtLower);
            x.push(col.lower);
        } else if col.upper.is_finite() {
            state.push(VarState::AtUpper);
            x.push(col.upper);
        } else {
            state.push(VarState::FreeZero);
            x.push(0.0);
        }
    }

    let mut resid = prob.rhs.clone();
    for (c, col) in prob.cols[..n].iter().enumerate() {
        if x[c] != 0.0 {
            for &(r, v) in &col.entries {
                resid[r] -= v * x[c];
            }
        }
    }

    // Rows whose logical variable can hold the residual start with it basic;
    // the rest get an artificial.
    let mut basis = vec![usize::MAX; m];
    let mut need_phase1 = false;
    for r in 0..m {
        let slack = n + r;
        let (lo, up) = (prob.cols[slack].lower, prob.cols[slack].upper);
        let v = resid[r];
        if v >= lo - 1e-12 && v <= up + 1e-12 {
            basis[r] = slack;
            state.push(VarState::Basic(r));
            x.push(v.clamp(lo.max(-f64::MAX), up.min(f64::MAX)));
        } else {
            let clamped = v.clamp(lo.max(-f64::MAX), up.min(f64::MAX));
            state.push(if clamped == lo {
                VarState::AtLower
            } else {
                VarState::AtUpper
            });
            x.push(clamped);
            let gap = v - clamped;
            let sigma = if gap >= 0.0 { 1.0 } else { -1.0 };
            let art = prob.cols.len();
            prob.cols.push(IColumn {
                lower: 0.0,
                upper: INF,
                cost: 0.0,
                entries: vec![(r, sigma)],
                unit_row: Some((r, sigma)),
            });
            prob.artificial_of_row[r] = Some(art);
            basis[r] = art;
            need_phase1 = true;
        }
    }
    for r in 0..m {
        if let Some(art) = prob.artificial_of_row[r] {
            let slack = n + r;
            let gap = resid[r] - x[slack];
            debug_assert_eq!(x.len(), art);
            state.push(VarState::Basic(r));
            x.push(gap.abs());
        }
    }

    let factor = match Factor::build(&prob, &basis) {
        Some(f) => f,
        None => return failed_solution(n, m, Status::IterationLimit),
    };
    let mut engine = Engine {
        prob,
        opts: opts.clone(),
        basis,
        state,
        x,
        factor,
        etas: Vec::new(),
        iterations: 0,
        degenerate_run: 0,
    };

    if need_phase1 {
        match engine.run_phase(true) {
            PhaseOutcome::IterationLimit => {
                return failed_solution(n, m, Status::IterationLimit)
            }
            PhaseOutcome::Unbounded | PhaseOutcome::NumericalBreakdown => {
                return failed_solution(n, m, Status::IterationLimit)
            }
            PhaseOutcome::Converged => {}
        }
        let infeas: f64 = (0..engine.prob.m)
            .filter_map(|r| engine.prob.artificial_of_row[r])
            .map(|a| engine.x[a].max(0.0))
            .sum();
        if infeas > opts.feasibility_tol {
            let y = engine.duals(true);
            let mut violated = Vec::new();
            let mut supporting = Vec::new();
            for r in 0..engine.prob.m {
                if let Some(a) = engine.prob.artificial_of_row[r] {
                    if engine.x[a] > opts.feasibility_tol {
                        violated.push(lp.rows[r].name.clone());
                    }
                }
                if y[r].abs() > opts.pivot_tol {
                    supporting.push(lp.rows[r].name.clone());
                }
            }
            return Solution {
                status: Status::Infeasible,
                objective: 0.0,
                values: vec![0.0; n],
                duals: vec![0.0; m],
                reduced_costs: vec![0.0; n],
                certificate: Some(InfeasibilityCertificate {
                    violated_rows: violated,
                    supporting_rows: supporting,
                }),
                iterations: engine.iterations,
            };
        }
        // Pin artificials at zero before the cost switch.
        for r in 0..engine.prob.m {
            if let Some(a) = engine.prob.artificial_of_row[r] {
                engine.prob.cols[a].upper = 0.0;
                if matches!(engine.state[a], VarState::Basic(_)) {
                    engine.x[a] = engine.x[a].clamp(0.0, f64::MAX);
                } else {
                    engine.state[a] = VarState::AtLower;
                    engine.x[a] = 0.0;
                }
            }
        }
    }

    let status = match engine.run_phase(false) {
        PhaseOutcome::Converged => Status::Optimal,
        PhaseOutcome::Unbounded => Status::Unbounded,
        PhaseOutcome::IterationLimit | PhaseOutcome::NumericalBreakdown => Status::IterationLimit,
    };

    // Unscale.
    let mut values = vec![0.0f64; n];
    for c in 0..n {
        values[c] = engine.x[c] * engine.prob.col_scale[c];
    }
    let y = engine.duals(false);
    let mut duals = vec![0.0f64; m];
    for r in 0..m {
        duals[r] = y[r] * engine.prob.row_scale[r];
    }
    let mut reduced = vec![0.0f64; n];
    for c in 0..n {
        let col = &engine.prob.cols[c];
        let mut d = col.cost;
        for &(r, v) in &col.entries {
            d -= y[r] * v;
        }
        reduced[c] = d / engine.prob.col_scale[c];
    }
    let objective = lp.objective_value(&values);

    Solution {
        status,
        objective,
        values,
        duals,
        reduced_costs: reduced,
        certificate: None,
        iterations: engine.iterations,
    }
}

fn failed_solution(n: usize, m: usize, status: Status) -> Solution {
    Solution {
        status,
        objective: 0.0,
        values: vec![0.0; n],
        duals: vec![0.0; m],
        reduced_costs: vec![0.0; n],
        certificate: None,
        iterations: 0,
    }
}

#[cfg(test)]
mod tests {
    use crate::lp::{LinearProgram, Sense, SolveOptions, Status};
    use approx::assert_relative_eq;

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn maximize_single_variable_against_row() {
        // min -x s.t. x <= 1 (row), x >= 0
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let r = lp.add_row("cap", Sense::Le, 1.0).unwrap();
        lp.add_coeff(r, x, 1.0);
        let f = lp.finalize();
        let sol = f.solve(&opts());
        assert_eq!(sol.status, Status::Optimal);
        assert_relative_eq!(sol.objective, -1.0, epsilon = 1e-9);
        assert_relative_eq!(sol.values[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(sol.duals[0], -1.0, epsilon = 1e-9);
    }

    #[test]
    fn two_variable_cover() {
        // min x+y s.t. x+y >= 1 -> objective 1
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, f64::INFINITY, 1.0).unwrap();
        let y = lp.add_column("y", 0.0, f64::INFINITY, 1.0).unwrap();
        let r = lp.add_row("cover", Sense::Ge, 1.0).unwrap();
        lp.add_coeff(r, x, 1.0);
        lp.add_coeff(r, y, 1.0);
        let sol = lp.finalize().solve(&opts());
        assert_eq!(sol.status, Status::Optimal);
        assert_relative_eq!(sol.objective, 1.0, epsilon = 1e-9);
        assert!(sol.duals[0] >= 0.0);
        assert_relative_eq!(sol.duals[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn contradictory_rows_yield_certificate_naming_both() {
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, f64::INFINITY, 0.0).unwrap();
        let hi = lp.add_row("at_least_two", Sense::Ge, 2.0).unwrap();
        let lo = lp.add_row("at_most_one", Sense::Le, 1.0).unwrap();
        lp.add_coeff(hi, x, 1.0);
        lp.add_coeff(lo, x, 1.0);
        let sol = lp.finalize().solve(&opts());
        assert_eq!(sol.status, Status::Infeasible);
        let cert = sol.certificate.unwrap();
        assert!(cert.mentions("at_least_two"));
        assert!(cert.mentions("at_most_one"));
    }

    #[test]
    fn equality_rows_with_free_variables() {
        // min x + 2y s.t. x + y = 3, y - x = 1, both free
        let mut lp = LinearProgram::new();
        let x = lp
            .add_column("x", f64::NEG_INFINITY, f64::INFINITY, 1.0)
            .unwrap();
        let y = lp
            .add_column("y", f64::NEG_INFINITY, f64::INFINITY, 2.0)
            .unwrap();
        let a = lp.add_row("sum", Sense::Eq, 3.0).unwrap();
        let b = lp.add_row("diff", Sense::Eq, 1.0).unwrap();
        lp.add_coeff(a, x, 1.0);
        lp.add_coeff(a, y, 1.0);
        lp.add_coeff(b, x, -1.0);
        lp.add_coeff(b, y, 1.0);
        let sol = lp.finalize().solve(&opts());
        assert_eq!(sol.status, Status::Optimal);
        assert_relative_eq!(sol.values[0], 1.0, epsilon = 1e-8);
        assert_relative_eq!(sol.values[1], 2.0, epsilon = 1e-8);
        assert_relative_eq!(sol.objective, 5.0, epsilon = 1e-8);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new();
        lp.add_column("x", 0.0, f64::INFINITY, -1.0).unwrap();
        let sol = lp.finalize().solve(&opts());
        assert_eq!(sol.status, Status::Unbounded);
    }

    #[test]
    fn bounded_variables_with_bound_flips() {
        // min -2x - y with x in [0, 4], y in [0, 3], x + y <= 5
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, 4.0, -2.0).unwrap();
        let y = lp.add_column("y", 0.0, 3.0, -1.0).unwrap();
        let r = lp.add_row("budget", Sense::Le, 5.0).unwrap();
        lp.add_coeff(r, x, 1.0);
        lp.add_coeff(r, y, 1.0);
        let sol = lp.finalize().solve(&opts());
        assert_eq!(sol.status, Status::Optimal);
        assert_relative_eq!(sol.objective, -9.0, epsilon = 1e-9);
        assert_relative_eq!(sol.values[0], 4.0, epsilon = 1e-9);
        assert_relative_eq!(sol.values[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn objective_scaling_preserves_argmin() {
        let build = |lambda: f64| {
            let mut lp = LinearProgram::new();
            let x = lp.add_column("x", 0.0, 10.0, lambda * 3.0).unwrap();
            let y = lp.add_column("y", 0.0, 10.0, lambda * 5.0).unwrap();
            let r = lp.add_row("need", Sense::Ge, 7.0).unwrap();
            lp.add_coeff(r, x, 1.0);
            lp.add_coeff(r, y, 2.0);
            lp.finalize()
        };
        let base = build(1.0).solve(&opts());
        let scaled = build(4.5).solve(&opts());
        assert_eq!(base.status, Status::Optimal);
        assert_eq!(scaled.status, Status::Optimal);
        assert_relative_eq!(scaled.objective, 4.5 * base.objective, max_relative = 1e-9);
        for (a, b) in base.values.iter().zip(&scaled.values) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn degenerate_lp_stays_consistent()
    {
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, f64::INFINITY, 1.0).unwrap();
        let y = lp.add_column("y", 0.0, f64::INFINITY, 1.0).unwrap();
        let z = lp.add_column("z", 0.0, f64::INFINITY, 1.0).unwrap();
        for i in 0..3 {
            let r = lp.add_row(format!("r{i}"), Sense::Ge, 2.0).unwrap();
            lp.add_coeff(r, x, 1.0);
            lp.add_coeff(r, y, 1.0);
            lp.add_coeff(r, z, 1.0);
        }
        let f = lp.finalize();
        let sol = f.solve(&opts());
        assert_eq!(sol.status, Status::Optimal);
        assert!(f.max_scaled_residual(&sol.values) <= 1e-6);
        assert!(sol.duality_gap(&f) <= 1e-6);
        assert_relative_eq!(sol.objective, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn iteration_limit_reported() {
        let mut lp = LinearProgram::new();
        let x = lp.add_column("x", 0.0, f64::INFINITY, 1.0).unwrap();
        let r = lp.add_row("need", Sense::Ge, 1.0).unwrap();
        lp.add_coeff(r, x, 1.0);
        let sol = lp.finalize().solve(&SolveOptions {
            max_iters: 0,
            ..SolveOptions::default()
        });
        assert_eq!(sol.status, Status::IterationLimit);
    }
}
