//! Dense two-phase simplex with Bland's rule.
//!
//! Problems here are small (up to a few hundred rows, a handful of
//! structural variables plus per-atom slacks), so a dense tableau with a
//! deterministic anti-cycling rule beats anything fancier: no external
//! dependency, bit-reproducible pivots.

use crate::error::{Error, Result};
use crate::geometry::{HPolytope, Vector};

/// Pivot candidates need at least this magnitude.
const PIVOT_TOL: f64 = 1e-11;
/// Reduced costs below this are treated as non-improving.
const COST_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarBound {
    NonNeg,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `maximize <c,x>` subject to `rows` and per-variable sign bounds.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Cmp, f64)>,
    pub bounds: Vec<VarBound>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize, // total columns including rhs
    data: Vec<f64>,
    basis: Vec<usize>,
    obj: Vec<f64>, // reduced-cost row, length cols (last entry = objective value)
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let cols = self.cols;
        let p = self.data[r * cols + c];
        for j in 0..cols {
            self.data[r * cols + j] /= p;
        }
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * cols + c];
            if f != 0.0 {
                for j in 0..cols {
                    self.data[i * cols + j] -= f * self.data[r * cols + j];
                }
                self.data[i * cols + c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for j in 0..cols {
                self.obj[j] -= f * self.data[r * cols + j];
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Run simplex iterations with Bland's rule on the allowed columns.
    /// Returns false when the problem is unbounded in the current phase.
    fn run(&mut self, allowed: &[bool], max_iters: usize) -> Result<bool> {
        for _ in 0..max_iters {
            // entering: smallest-index improving column (Bland)
            let mut enter = None;
            for j in 0..self.cols - 1 {
                if allowed[j] && self.obj[j] > COST_TOL {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else {
                return Ok(true);
            };
            // leaving: minimum ratio, ties by smallest basis index (Bland)
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, j);
                if a > PIVOT_TOL {
                    let ratio = self.at(i, self.cols - 1) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12
                                || (ratio < lr + 1e-12 && self.basis[i] < self.basis[li])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, j);
        }
        Err(Error::SolverFailure(
            "simplex iteration limit exceeded".into(),
        ))
    }
}

/// Solve a small dense LP. Errors only for malformed input or iteration
/// blow-up; infeasibility and unboundedness are ordinary outcomes.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.len();
    if lp.bounds.len() != n {
        return Err(Error::InvalidParameter(
            "objective and bounds length mismatch".into(),
        ));
    }
    for (row, _, _) in &lp.rows {
        if row.len() != n {
            return Err(Error::InvalidParameter("row length mismatch".into()));
        }
    }
    let m = lp.rows.len();

    // columns for structural variables: free variables are split x = x+ - x-
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut n_struct = 0;
    for b in &lp.bounds {
        match b {
            VarBound::NonNeg => {
                col_of.push((n_struct, None));
                n_struct += 1;
            }
            VarBound::Free => {
                col_of.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            }
        }
    }

    // count slack and artificial columns after normalizing rhs >= 0
    let mut n_slack = 0;
    let mut n_art = 0;
    let mut normalized: Vec<(Vec<f64>, Cmp, f64)> = Vec::with_capacity(m);
    for (row, cmp, b) in &lp.rows {
        let (row, cmp, b) = if *b < 0.0 {
            let flipped = match cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            };
            (row.iter().map(|v| -v).collect::<Vec<f64>>(), flipped, -b)
        } else {
            (row.clone(), *cmp, *b)
        };
        match cmp {
            Cmp::Le => n_slack += 1,
            Cmp::Ge => {
                n_slack += 1;
                n_art += 1;
            }
            Cmp::Eq => n_art += 1,
        }
        normalized.push((row, cmp, b));
    }

    let cols = n_struct + n_slack + n_art + 1;
    let mut data = vec![0.0; m * cols];
    let mut basis = vec![0usize; m];
    let mut is_artificial = vec![false; cols - 1];
    let mut slack_cursor = n_struct;
    let mut art_cursor = n_struct + n_slack;

    for (i, (row, cmp, b)) in normalized.iter().enumerate() {
        for (j, &coef) in row.iter().enumerate() {
            let (cp, cm) = col_of[j];
            data[i * cols + cp] = coef;
            if let Some(cm) = cm {
                data[i * cols + cm] = -coef;
            }
        }
        data[i * cols + cols - 1] = *b;
        match cmp {
            Cmp::Le => {
                data[i * cols + slack_cursor] = 1.0;
                basis[i] = slack_cursor;
                slack_cursor += 1;
            }
            Cmp::Ge => {
                data[i * cols + slack_cursor] = -1.0;
                slack_cursor += 1;
                data[i * cols + art_cursor] = 1.0;
                is_artificial[art_cursor] = true;
                basis[i] = art_cursor;
                art_cursor += 1;
            }
            Cmp::Eq => {
                data[i * cols + art_cursor] = 1.0;
                is_artificial[art_cursor] = true;
                basis[i] = art_cursor;
                art_cursor += 1;
            }
        }
    }

    let max_iters = 10_000 + 200 * (m + cols);
    let mut t = Tableau {
        rows: m,
        cols,
        data,
        basis,
        obj: vec![0.0; cols],
    };

    // phase 1: maximize -sum(artificials); reduced costs relative to the
    // artificial basis
    if n_art > 0 {
        for j in 0..cols {
            let mut v = 0.0;
            for i in 0..m {
                if is_artificial[t.basis[i]] {
                    v += t.at(i, j);
                }
            }
            t.obj[j] = v;
        }
        for (j, &art) in is_artificial.iter().enumerate() {
            if art {
                t.obj[j] -= 1.0;
            }
        }
        let allowed: Vec<bool> = (0..cols - 1).map(|_| true).collect();
        let bounded = t.run(&allowed, max_iters)?;
        debug_assert!(bounded, "phase 1 objective is bounded by construction");
        let infeas: f64 = (0..m)
            .filter(|&i| is_artificial[t.basis[i]])
            .map(|i| t.at(i, cols - 1))
            .sum();
        if infeas > 1e-7 {
            return Ok(LpOutcome::Infeasible);
        }
        // pivot lingering zero-level artificials out of the basis
        for i in 0..m {
            if is_artificial[t.basis[i]] {
                if let Some(j) =
                    (0..cols - 1).find(|&j| !is_artificial[j] && t.at(i, j).abs() > 1e-8)
                {
                    t.pivot(i, j);
                }
            }
        }
    }

    // phase 2: reduced costs for the real objective
    let mut cost = vec![0.0; cols - 1];
    for (j, &(cp, cm)) in col_of.iter().enumerate() {
        cost[cp] = lp.objective[j];
        if let Some(cm) = cm {
            cost[cm] = -lp.objective[j];
        }
    }
    for j in 0..cols {
        let mut v = if j < cols - 1 { cost[j] } else { 0.0 };
        for i in 0..m {
            let cb = if t.basis[i] < cols - 1 {
                cost[t.basis[i]]
            } else {
                0.0
            };
            v -= cb * t.at(i, j);
        }
        t.obj[j] = v;
    }
    let allowed: Vec<bool> = (0..cols - 1).map(|j| !is_artificial[j]).collect();
    if !t.run(&allowed, max_iters)? {
        return Ok(LpOutcome::Unbounded);
    }

    // read out the structural solution
    let mut xs = vec![0.0; cols - 1];
    for i in 0..m {
        if t.basis[i] < cols - 1 {
            xs[t.basis[i]] = t.at(i, cols - 1);
        }
    }
    let mut x = vec![0.0; n];
    for (j, &(cp, cm)) in col_of.iter().enumerate() {
        x[j] = xs[cp] - cm.map_or(0.0, |c| xs[c]);
    }
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum::<f64>();
    Ok(LpOutcome::Optimal(LpSolution { value, x }))
}

/// Support value `h(P,u)` of an H-polytope by linear programming.
pub fn lp_support(p: &HPolytope, u: &Vector) -> f64 {
    lp_support_point(p, u).map(|s| s.value).unwrap_or(f64::NAN)
}

/// Support value and an attaining point; errors for unbounded directions and
/// empty intersections.
pub fn lp_support_point(p: &HPolytope, u: &Vector) -> Result<LpSolution> {
    if u.dim() != p.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            got: u.dim(),
        });
    }
    let rows = p
        .halfspaces
        .iter()
        .map(|h| {
            let (a, b) = h.le_form();
            (a.0, Cmp::Le, b)
        })
        .collect();
    let lp = LinearProgram {
        objective: u.as_slice().to_vec(),
        rows,
        bounds: vec![VarBound::Free; p.dim],
    };
    match solve(&lp)? {
        LpOutcome::Optimal(s) => Ok(s),
        LpOutcome::Infeasible => Err(Error::EmptyCell),
        LpOutcome::Unbounded => Err(Error::UnboundedDirection),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Halfspace, Orientation};

    fn unit_square() -> HPolytope {
        let e1 = Vector(vec![1.0, 0.0]);
        let e2 = Vector(vec![0.0, 1.0]);
        HPolytope::new(
            vec![
                Halfspace::new(&e1, 1.0, Orientation::Le).unwrap(),
                Halfspace::new(&e1, -1.0, Orientation::Ge).unwrap(),
                Halfspace::new(&e2, 1.0, Orientation::Le).unwrap(),
                Halfspace::new(&e2, -1.0, Orientation::Ge).unwrap(),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn support_unit_square() {
        let p = unit_square();
        let s = lp_support_point(&p, &Vector(vec![1.0, 0.0])).unwrap();
        assert!((s.value - 1.0).abs() < 1e-10);
        // vertex oracle: max of <x, (1,1)> over the square is 2 at (1,1)
        let s = lp_support_point(&p, &Vector(vec![1.0, 1.0])).unwrap();
        assert!((s.value - 2.0).abs() < 1e-10);
        assert!((s.x[0] - 1.0).abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_direction_detected() {
        let e1 = Vector(vec![1.0, 0.0]);
        let p = HPolytope::new(
            vec![Halfspace::new(&e1, 1.0, Orientation::Le).unwrap()],
            false,
        )
        .unwrap();
        assert!(matches!(
            lp_support_point(&p, &Vector(vec![0.0, 1.0])),
            Err(Error::UnboundedDirection)
        ));
    }

    #[test]
    fn infeasible_detected() {
        let e1 = Vector(vec![1.0, 0.0]);
        let p = HPolytope::new(
            vec![
                Halfspace::new(&e1, -1.0, Orientation::Le).unwrap(),
                Halfspace::new(&e1, 1.0, Orientation::Ge).unwrap(),
            ],
            false,
        )
        .unwrap();
        assert!(matches!(
            lp_support_point(&p, &Vector(vec![1.0, 0.0])),
            Err(Error::EmptyCell)
        ));
    }

    #[test]
    fn equality_rows_and_nonneg_vars() {
        // max x + y  s.t. x + y + s = 1, all >= 0  -> 1
        let lp = LinearProgram {
            objective: vec![1.0, 1.0, 0.0],
            rows: vec![(vec![1.0, 1.0, 1.0], Cmp::Eq, 1.0)],
            bounds: vec![VarBound::NonNeg; 3],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal(s) => assert!((s.value - 1.0).abs() < 1e-10),
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // several redundant constraints through the optimum
        let lp = LinearProgram {
            objective: vec![1.0, 0.0],
            rows: vec![
                (vec![1.0, 0.0], Cmp::Le, 1.0),
                (vec![1.0, 1.0], Cmp::Le, 1.0),
                (vec![1.0, -1.0], Cmp::Le, 1.0),
                (vec![0.0, 1.0], Cmp::Ge, 0.0),
                (vec![0.0, 1.0], Cmp::Le, 0.0),
            ],
            bounds: vec![VarBound::Free, VarBound::Free],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal(s) => assert!((s.value - 1.0).abs() < 1e-9),
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
