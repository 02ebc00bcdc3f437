//! Dense exact linear algebra over the rationals and integers.

use num_traits::{One, Signed, Zero};

use crate::rational::{Int, Rat};

pub type Matrix = Vec<Vec<Rat>>;

/// Reduced row echelon form. Returns the reduced nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b`. Returns a particular solution and a nullspace basis, or
/// `None` if the system is inconsistent.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<(Vec<Rat>, Matrix)> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some((x, nullspace(a, ncols)))
}

/// Unique solution of a square nonsingular system.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.first().map_or(0, |r| r.len());
    let (x, ker) = solve_affine(a, b, n)?;
    ker.is_empty().then_some(x)
}

pub fn det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn int_det(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Orthogonal projection of `x` onto the orthogonal complement of span(`basis`).
pub fn project_out(x: &[Rat], basis: &[Vec<Rat>]) -> Vec<Rat> {
    if basis.is_empty() {
        return x.to_vec();
    }
    let n = x.len();
    // Solve (B B^T) c = B x and subtract B^T c.
    let k = basis.len();
    let gram: Matrix = (0..k)
        .map(|i| (0..k).map(|j| crate::rational::dot(&basis[i], &basis[j])).collect())
        .collect();
    let rhs: Vec<Rat> = basis.iter().map(|b| crate::rational::dot(b, x)).collect();
    let c = solve_unique(&gram, &rhs).expect("basis is linearly independent");
    let mut y = x.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        for j in 0..n {
            y[j] -= ci * &b[j];
        }
    }
    y
}

pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}
