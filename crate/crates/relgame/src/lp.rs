//! Dense linear programming: min cᵀz subject to Az ≤ b, optionally z ≥ 0.
//!
//! The solver is a two-phase tableau simplex with Bland's rule, which makes
//! iteration order deterministic and rules out cycling. Problems at this
//! crate's scale are small and dense, so no factorization updates or sparse
//! storage.

use crate::Result;

/// Pivot / reduced-cost tolerance.
const TOL: f64 = 1e-9;
/// Phase-1 objective above this means infeasible.
const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("simplex iteration limit exceeded ({0} iterations)")]
    IterationLimit(usize),
    #[error("malformed LP: {0}")]
    Malformed(String),
}

/// Inequality-form LP: minimize `objective`ᵀz subject to rows·z ≤ rhs.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    /// All variables satisfy z ≥ 0 when set; free otherwise.
    pub nonnegative: bool,
}

impl LinearProgram {
    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Constraint count under the reporting convention: inequality rows plus
    /// one bound per variable when the nonnegativity flag is set.
    pub fn num_constraints(&self) -> usize {
        self.num_rows() + if self.nonnegative { self.num_variables() } else { 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.rhs.len() {
            return Err(LpError::Malformed(format!(
                "{} rows but {} right-hand sides",
                self.rows.len(),
                self.rhs.len()
            ))
            .into());
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.num_variables() {
                return Err(LpError::Malformed(format!(
                    "row {} has {} coefficients, expected {}",
                    i,
                    row.len(),
                    self.num_variables()
                ))
                .into());
            }
        }
        let finite = self.objective.iter().chain(self.rhs.iter()).all(|v| v.is_finite())
            && self.rows.iter().all(|r| r.iter().all(|v| v.is_finite()));
        if !finite {
            return Err(LpError::Malformed("non-finite coefficient".into()).into());
        }
        Ok(())
    }

    /// Plain-text tableau dump (variables, rows, rhs) for debugging.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let n = self.num_variables();
        writeln!(s, "minimize").unwrap();
        write!(s, " ").unwrap();
        for (j, c) in self.objective.iter().enumerate() {
            write!(s, " {c:+.6}*z{}", j + 1).unwrap();
        }
        writeln!(s, "\nsubject to ({} rows, z >= 0: {})", self.rows.len(), self.nonnegative)
            .unwrap();
        for (row, b) in self.rows.iter().zip(&self.rhs) {
            write!(s, " ").unwrap();
            for j in 0..n {
                write!(s, " {:+10.6}", row[j]).unwrap();
            }
            writeln!(s, " <= {b:+10.6}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { solution: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

/// Solves the LP. Free-variable problems are handled by an internal
/// positive/negative split.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    if lp.nonnegative {
        return simplex(&lp.objective, &lp.rows, &lp.rhs);
    }
    // split z = z+ - z-
    let n = lp.num_variables();
    let mut objective = lp.objective.clone();
    objective.extend(lp.objective.iter().map(|c| -c));
    let rows: Vec<Vec<f64>> = lp
        .rows
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.extend(r.iter().map(|c| -c));
            row
        })
        .collect();
    match simplex(&objective, &rows, &lp.rhs)? {
        LpOutcome::Optimal { solution, objective } => {
            let merged = (0..n).map(|j| solution[j] - solution[n + j]).collect();
            Ok(LpOutcome::Optimal { solution: merged, objective })
        }
        other => Ok(other),
    }
}

enum CoreStatus {
    Optimal,
    Unbounded,
}

/// Two-phase simplex for min cᵀz, Az ≤ b, z ≥ 0.
fn simplex(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpOutcome> {
    let m = a.len();
    let n = c.len();
    let slack_start = n;
    let art_start = n + m;

    // Row i: a_i z + s_i = b_i, negated so rhs >= 0.
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    let mut needs_artificial: Vec<bool> = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i] < 0.0;
        let sign = if neg { -1.0 } else { 1.0 };
        let mut row = vec![0.0; n + m];
        for j in 0..n {
            row[j] = sign * a[i][j];
        }
        row[slack_start + i] = sign;
        rows.push(row);
        rhs.push(sign * b[i]);
        needs_artificial.push(neg);
    }

    let num_art = needs_artificial.iter().filter(|&&x| x).count();
    let ncols = n + m + num_art;
    let mut basis = vec![0usize; m];
    for row in rows.iter_mut() {
        row.resize(ncols, 0.0);
    }
    {
        let mut art = art_start;
        for i in 0..m {
            if needs_artificial[i] {
                rows[i][art] = 1.0;
                basis[i] = art;
                art += 1;
            } else {
                basis[i] = slack_start + i;
            }
        }
    }

    let max_iter = 200 * (m + ncols) + 2000;

    if num_art > 0 {
        let mut phase1 = vec![0.0; ncols];
        for item in phase1.iter_mut().skip(art_start) {
            *item = 1.0;
        }
        match simplex_core(&mut rows, &mut rhs, &mut basis, &phase1, art_start, max_iter)? {
            CoreStatus::Unbounded => {
                // phase-1 objective is bounded below by 0; cannot happen
                return Err(LpError::Malformed("phase-1 unbounded".into()).into());
            }
            CoreStatus::Optimal => {}
        }
        let p1_obj: f64 = basis
            .iter()
            .zip(rhs.iter())
            .filter(|(&bv, _)| bv >= art_start)
            .map(|(_, &v)| v)
            .sum();
        if p1_obj > FEAS_TOL {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive artificials out of the basis where possible; a stuck
        // artificial sits at value 0 and is barred from re-entering.
        for i in 0..m {
            if basis[i] >= art_start {
                if let Some(j) = (0..art_start).find(|&j| rows[i][j].abs() > TOL) {
                    pivot(&mut rows, &mut rhs, &mut basis, i, j);
                }
            }
        }
    }

    let mut phase2 = vec![0.0; ncols];
    phase2[..n].copy_from_slice(c);
    match simplex_core(&mut rows, &mut rhs, &mut basis, &phase2, art_start, max_iter)? {
        CoreStatus::Unbounded => return Ok(LpOutcome::Unbounded),
        CoreStatus::Optimal => {}
    }

    let mut solution = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            solution[bv] = rhs[i];
        }
    }
    let objective = c.iter().zip(&solution).map(|(ci, zi)| ci * zi).sum();
    Ok(LpOutcome::Optimal { solution, objective })
}

/// Bland-rule simplex iterations on the current tableau. Columns at or past
/// `banned_from` never enter the basis.
fn simplex_core(
    rows: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
    banned_from: usize,
    max_iter: usize,
) -> Result<CoreStatus> {
    let m = rows.len();
    let ncols = cost.len();
    for _ in 0..max_iter {
        // reduced costs r_j = c_j - c_B^T B^-1 A_j
        let mut entering = None;
        for j in 0..ncols.min(banned_from) {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j];
            for i in 0..m {
                let cb = cost[basis[i]];
                if cb != 0.0 {
                    r -= cb * rows[i][j];
                }
            }
            if r < -TOL {
                entering = Some(j); // Bland: smallest index
                break;
            }
        }
        let Some(j) = entering else {
            return Ok(CoreStatus::Optimal);
        };

        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            let pivot_val = rows[i][j];
            if pivot_val > TOL {
                let ratio = rhs[i] / pivot_val;
                match leaving {
                    None => leaving = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - TOL
                            || ((ratio - lr).abs() <= TOL && basis[i] < basis[li])
                        {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, _)) = leaving else {
            return Ok(CoreStatus::Unbounded);
        };
        pivot(rows, rhs, basis, i, j);
    }
    Err(LpError::IterationLimit(max_iter).into())
}

fn pivot(rows: &mut [Vec<f64>], rhs: &mut [f64], basis: &mut [usize], pr: usize, pc: usize) {
    let pv = rows[pr][pc];
    for v in rows[pr].iter_mut() {
        *v /= pv;
    }
    rhs[pr] /= pv;
    for i in 0..rows.len() {
        if i == pr {
            continue;
        }
        let factor = rows[i][pc];
        if factor == 0.0 {
            continue;
        }
        let (pivot_row, row) = if i < pr {
            let (lo, hi) = rows.split_at_mut(pr);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = rows.split_at_mut(i);
            (&lo[pr], &mut hi[0])
        };
        for (v, &p) in row.iter_mut().zip(pivot_row.iter()) {
            *v -= factor * p;
        }
        rhs[i] -= factor * rhs[pr];
    }
    basis[pr] = pc;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn lp(obj: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> LinearProgram {
        LinearProgram { objective: obj, rows, rhs, nonnegative: true }
    }

    #[test]
    fn simple_lower_bound() {
        // min z1 s.t. z1 >= 3  <=>  -z1 <= -3
        let p = lp(vec![1.0], vec![vec![-1.0]], vec![-3.0]);
        match solve_lp(&p).unwrap() {
            LpOutcome::Optimal { solution, objective } => {
                assert!((solution[0] - 3.0).abs() < 1e-9);
                assert!((objective - 3.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_below() {
        let p = lp(vec![-1.0], vec![], vec![]);
        assert_eq!(solve_lp(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_detected() {
        // z1 <= 1, z1 >= 2
        let p = lp(vec![1.0], vec![vec![1.0], vec![-1.0]], vec![1.0, -2.0]);
        assert_eq!(solve_lp(&p).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn two_variable_textbook() {
        // min -(z1 + 2 z2) s.t. z1 + z2 <= 4, z2 <= 2
        let p = lp(vec![-1.0, -2.0], vec![vec![1.0, 1.0], vec![0.0, 1.0]], vec![4.0, 2.0]);
        match solve_lp(&p).unwrap() {
            LpOutcome::Optimal { solution, objective } => {
                assert!((solution[0] - 2.0).abs() < 1e-9);
                assert!((solution[1] - 2.0).abs() < 1e-9);
                assert!((objective + 6.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn free_variable_split() {
        // min z1 s.t. z1 >= -5, z free
        let p = LinearProgram {
            objective: vec![1.0],
            rows: vec![vec![-1.0]],
            rhs: vec![5.0],
            nonnegative: false,
        };
        match solve_lp(&p).unwrap() {
            LpOutcome::Optimal { solution, .. } => assert!((solution[0] + 5.0).abs() < 1e-9),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    /// Constructive oracle: pick an optimal point z*, build constraints that
    /// are tight there with outward normals, and an objective in the cone of
    /// the active normals, so z* is optimal by construction.
    #[test]
    fn random_lps_with_known_optima() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let n = rng.gen_range(2..5);
            let zstar: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
            // n active constraints: z_j <= z*_j, each tight at z*.
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for j in 0..n {
                let mut row = vec![0.0; n];
                row[j] = 1.0;
                rows.push(row);
                rhs.push(zstar[j]);
            }
            // a few slack (inactive) constraints
            for _ in 0..rng.gen_range(1..4) {
                let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let val: f64 = row.iter().zip(&zstar).map(|(a, b)| a * b).sum();
                rows.push(row);
                rhs.push(val + rng.gen_range(0.5..2.0));
            }
            // objective = -sum of positive multiples of active normals:
            // minimizing it pushes z up against the active bounds.
            let mult: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
            let objective: Vec<f64> = mult.iter().map(|m| -m).collect();
            let expected: f64 = objective.iter().zip(&zstar).map(|(a, b)| a * b).sum();
            let p = lp(objective, rows, rhs);
            match solve_lp(&p).unwrap() {
                LpOutcome::Optimal { objective, .. } => {
                    assert!(
                        (objective - expected).abs() < 1e-6,
                        "objective {objective} vs constructed {expected}"
                    );
                }
                other => panic!("expected optimal, got {other:?}"),
            }
        }
    }

    #[test]
    fn degenerate_rhs_zero_terminates() {
        // Degenerate vertex at origin; Bland's rule must not cycle.
        let p = lp(
            vec![-0.75, 150.0, -0.02, 6.0],
            vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            vec![0.0, 0.0, 1.0],
        );
        match solve_lp(&p).unwrap() {
            LpOutcome::Optimal { objective, .. } => assert!((objective + 0.05).abs() < 1e-9),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn constraint_count_convention() {
        let p = lp(vec![0.0; 12], vec![vec![0.0; 12]; 4], vec![0.0; 4]);
        assert_eq!(p.num_constraints(), 16);
    }
}
