//! Exact linear programming over free variables.
//!
//! Problems have the form `max c.x` subject to `A x <= b`, `E x = e`. Equalities
//! are eliminated by parametrising their solution space, the remaining free
//! variables are split into positive and negative parts, and a dense two-phase
//! simplex with Bland's rule runs over `BigRational`.

use num_traits::{One, Signed, Zero};

use crate::linalg::solve_affine;
use crate::rational::{dot, Rat};

/// A single constraint `a . x (<= or =) b`.
pub type Constraint = (Vec<Rat>, Rat);

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost . x` over columns flagged in `allowed`. Returns false
    /// when unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: &[bool]) -> bool {
        let rhs = self.ncols;
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        d -= cb * &row[j];
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else {
                return false;
            };
            self.pivot(i, j);
        }
    }

    fn value_of(&self, col: usize) -> Rat {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|i| self.rows[i][self.ncols].clone())
            .unwrap_or_else(Rat::zero)
    }
}

/// Maximizes `c . x` over the polyhedron in `R^n`.
pub fn maximize(n: usize, ineqs: &[Constraint], eqs: &[Constraint], c: &[Rat]) -> LpOutcome {
    let eq_rows: Vec<Vec<Rat>> = eqs.iter().map(|(a, _)| a.clone()).collect();
    let eq_rhs: Vec<Rat> = eqs.iter().map(|(_, b)| b.clone()).collect();
    let Some((x0, kernel)) = solve_affine(&eq_rows, &eq_rhs, n) else {
        return LpOutcome::Infeasible;
    };
    let k = kernel.len();
    // Reduced problem in y: x = x0 + sum_j y_j kernel[j].
    let red: Vec<(Vec<Rat>, Rat)> = ineqs
        .iter()
        .map(|(a, b)| {
            let row: Vec<Rat> = kernel.iter().map(|v| dot(a, v)).collect();
            (row, b - dot(a, &x0))
        })
        .collect();
    let cred: Vec<Rat> = kernel.iter().map(|v| dot(c, v)).collect();
    let c0 = dot(c, &x0);
    let lift = |y: &[Rat]| -> Vec<Rat> {
        let mut x = x0.clone();
        for (yj, v) in y.iter().zip(&kernel) {
            if yj.is_zero() {
                continue;
            }
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += yj * vi;
            }
        }
        x
    };

    if k == 0 {
        if red.iter().any(|(_, b)| b.is_negative()) {
            return LpOutcome::Infeasible;
        }
        return LpOutcome::Optimal { value: c0, point: x0 };
    }

    let m = red.len();
    let n_art = red.iter().filter(|(_, b)| b.is_negative()).count();
    // Columns: u (k), v (k), slack (m), artificial (n_art), rhs.
    let ncols = 2 * k + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for (i, (a, b)) in red.iter().enumerate() {
        let mut row = vec![Rat::zero(); ncols + 1];
        let sign = if b.is_negative() { -Rat::one() } else { Rat::one() };
        for j in 0..k {
            row[j] = &sign * &a[j];
            row[k + j] = -&sign * &a[j];
        }
        row[2 * k + i] = sign.clone();
        row[ncols] = &sign * b;
        if b.is_negative() {
            let col = 2 * k + m + art;
            row[col] = Rat::one();
            basis.push(col);
            art += 1;
        } else {
            basis.push(2 * k + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, ncols };

    if n_art > 0 {
        let mut cost = vec![Rat::zero(); ncols];
        for c in cost.iter_mut().skip(2 * k + m) {
            *c = -Rat::one();
        }
        let allowed = vec![true; ncols];
        t.optimize(&cost, &allowed);
        let infeas: Rat = (2 * k + m..ncols).map(|j| t.value_of(j)).sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive artificial variables out of the basis.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= 2 * k + m {
                match (0..2 * k + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut cost = vec![Rat::zero(); ncols];
    for j in 0..k {
        cost[j] = cred[j].clone();
        cost[k + j] = -cred[j].clone();
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < 2 * k + m).collect();
    if !t.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let y: Vec<Rat> = (0..k).map(|j| t.value_of(j) - t.value_of(k + j)).collect();
    let value = dot(&cred, &y) + c0;
    LpOutcome::Optimal {
        value,
        point: lift(&y),
    }
}

/// Some point of the polyhedron, if nonempty.
pub fn feasible_point(n: usize, ineqs: &[Constraint], eqs: &[Constraint]) -> Option<Vec<Rat>> {
    match maximize(n, ineqs, eqs, &vec![Rat::zero(); n]) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

pub fn is_feasible(n: usize, ineqs: &[Constraint], eqs: &[Constraint]) -> bool {
    feasible_point(n, ineqs, eqs).is_some()
}

/// Maximizes the common slack `t <= 1` in `a_i . x + t <= b_i` for the given
/// inequalities. Returns `None` when infeasible, otherwise `(t, x)`.
pub fn max_common_slack(
    n: usize,
    ineqs: &[Constraint],
    eqs: &[Constraint],
) -> Option<(Rat, Vec<Rat>)> {
    let mut ext: Vec<Constraint> = ineqs
        .iter()
        .map(|(a, b)| {
            let mut row = a.clone();
            row.push(Rat::one());
            (row, b.clone())
        })
        .collect();
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = Rat::one();
    ext.push((cap.clone(), Rat::one()));
    let ext_eqs: Vec<Constraint> = eqs
        .iter()
        .map(|(a, b)| {
            let mut row = a.clone();
            row.push(Rat::zero());
            (row, b.clone())
        })
        .collect();
    match maximize(n + 1, &ext, &ext_eqs, &cap) {
        LpOutcome::Optimal { value, mut point } => {
            if value.is_negative() {
                return None;
            }
            point.truncate(n);
            Some((value, point))
        }
        _ => None,
    }
}

/// True iff some point satisfies all inequalities strictly and all equalities.
pub fn is_strictly_feasible(n: usize, ineqs: &[Constraint], eqs: &[Constraint]) -> bool {
    matches!(max_common_slack(n, ineqs, eqs), Some((t, _)) if t.is_positive())
}
