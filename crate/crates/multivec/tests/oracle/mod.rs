//! Independent brute-force LP oracle: enumerate every basis intersection of
//! row-equalities and variable bounds, keep the feasible ones, return the best
//! objective. Only for tiny bounded problems; deliberately shares no code with
//! the simplex path it checks.

use multivec::lp::Sense;

const FEAS_TOL: f64 = 1e-7;

/// Solve a dense n×n system via Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let mut piv = k;
        for i in k + 1..n {
            if a[i][k].abs() > a[piv][k].abs() {
                piv = i;
            }
        }
        if a[piv][k].abs() < 1e-10 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

/// Minimum objective over all feasible vertices, or None when no vertex is
/// feasible (for a bounded polytope that means the LP is infeasible).
pub fn enumerate_vertices(
    matrix: &[Vec<f64>],
    rows: &[(Sense, f64)],
    lower: &[f64],
    upper: &[f64],
    objective: &[f64],
) -> Option<f64> {
    let n = lower.len();
    let m = rows.len();

    // Candidate equalities: every row plus every finite bound.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m {
        planes.push((matrix[i].clone(), rows[i].1));
    }
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = 1.0;
        planes.push((row.clone(), lower[j]));
        planes.push((row, upper[j]));
    }

    let feasible = |x: &[f64]| -> bool {
        for j in 0..n {
            let scale = 1f64.max(lower[j].abs()).max(upper[j].abs());
            if x[j] < lower[j] - FEAS_TOL * scale || x[j] > upper[j] + FEAS_TOL * scale {
                return false;
            }
        }
        for i in 0..m {
            let act: f64 = matrix[i].iter().zip(x).map(|(a, v)| a * v).sum();
            let scale = 1f64.max(rows[i].1.abs());
            let ok = match rows[i].0 {
                Sense::Le => act <= rows[i].1 + FEAS_TOL * scale,
                Sense::Ge => act >= rows[i].1 - FEAS_TOL * scale,
                Sense::Eq => (act - rows[i].1).abs() <= FEAS_TOL * scale,
            };
            if !ok {
                return false;
            }
        }
        true
    };

    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; n];
    let total = planes.len();
    if n == 0 {
        return if feasible(&[]) { Some(0.0) } else { None };
    }
    if total < n {
        return None;
    }

    // Iterate all n-combinations of candidate planes.
    for i in 0..n {
        pick[i] = i;
    }
    loop {
        let a: Vec<Vec<f64>> = pick.iter().map(|&p| planes[p].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&p| planes[p].1).collect();
        if let Some(x) = solve_dense(a, b) {
            if feasible(&x) {
                let obj: f64 = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(match best {
                    None => obj,
                    Some(cur) => cur.min(obj),
                });
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] != i + total - n {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}
