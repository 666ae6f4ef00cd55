//! Acceptance suite: one test per criterion, each printing a PASS line.

mod oracle;

use multivec::lp::{LinearProgram, Sense, SolveOptions, Status};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criterion 3: on 200 random bounded LPs (≤6 vars, ≤6 rows) the simplex
/// objective matches brute-force vertex enumeration within 1e-6 absolute,
/// with zero discrepancies.
#[test]
fn criterion_3_solver_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut solved = 0usize;
    let mut infeasible = 0usize;
    for case in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=6);
        let mut lp = LinearProgram::new();
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut cols = Vec::new();
        for j in 0..n {
            let lo = if rng.gen_bool(0.3) {
                -rng.gen_range(0.5..5.0)
            } else {
                0.0
            };
            let hi = lo + rng.gen_range(0.5..10.0);
            let c = rng.gen_range(-5.0..5.0);
            cols.push(lp.add_column(format!("x{j}"), lo, hi, c).unwrap());
            lower.push(lo);
            upper.push(hi);
        }
        let mut rows = Vec::new();
        let mut matrix = vec![vec![0.0f64; n]; m];
        for i in 0..m {
            let sense = match rng.gen_range(0..3) {
                0 => Sense::Le,
                1 => Sense::Ge,
                _ => Sense::Eq,
            };
            let rhs = rng.gen_range(-6.0..6.0);
            let r = lp.add_row(format!("r{i}"), sense, rhs).unwrap();
            for j in 0..n {
                if rng.gen_bool(0.7) {
                    let v = rng.gen_range(-5.0..5.0);
                    lp.add_coeff(r, cols[j], v);
                    matrix[i][j] = v;
                }
            }
            rows.push((sense, rhs));
        }

        let f = lp.finalize();
        let sol = f.solve(&SolveOptions::default());
        let objective: Vec<f64> = f.cols.iter().map(|c| c.objective).collect();
        let oracle = oracle::enumerate_vertices(&matrix, &rows, &lower, &upper, &objective);

        match (sol.status, oracle) {
            (Status::Optimal, Some(best)) => {
                assert!(
                    (sol.objective - best).abs() <= 1e-6,
                    "case {case}: simplex {} vs oracle {best}",
                    sol.objective
                );
                assert!(
                    f.max_scaled_residual(&sol.values) <= 1e-6,
                    "case {case}: residual {}",
                    f.max_scaled_residual(&sol.values)
                );
                solved += 1;
            }
            (Status::Infeasible, None) => infeasible += 1,
            (status, oracle) => panic!(
                "case {case}: simplex said {status:?}, oracle said {}",
                if oracle.is_some() { "feasible" } else { "infeasible" }
            ),
        }
    }
    assert_eq!(solved + infeasible, 200);
    println!(
        "ACCEPTANCE 3 solver-oracle-equivalence: PASS ({solved} optimal, {infeasible} infeasible, 0 discrepancies)"
    );
}
