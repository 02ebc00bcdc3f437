//! Integer lattices: echelon forms, kernels, saturation and sublattice index.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Int, Rat};

/// Integer vectors spanning a rational subspace of `Q^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeSpan {
    pub ambient_dim: usize,
    #[serde(with = "crate::rational::serde_int_vecs")]
    pub generators: Vec<Vec<Int>>,
}

impl SublatticeSpan {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<Int>>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: g.len(),
            });
        }
        Ok(Self {
            ambient_dim,
            generators,
        })
    }

    pub fn from_i64(ambient_dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            ambient_dim,
            generators
                .iter()
                .map(|g| g.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    /// Rejects generators with non-integral entries.
    pub fn from_rationals(ambient_dim: usize, generators: &[Vec<Rat>]) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.iter().any(|x| !x.is_integer()) {
                return Err(Error::NonIntegral);
            }
            gens.push(g.iter().map(|x| x.to_integer()).collect());
        }
        Self::new(ambient_dim, gens)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeIndex {
    Finite(#[serde(with = "crate::rational::serde_int")] Int),
    Infinite,
}

/// Row echelon form by unimodular row operations, applied to every column of
/// `rows` but pivoting only within the first `pivot_cols` columns. Returns the
/// transformed rows and the number of pivots; rows past the pivot count are
/// zero on the pivot columns.
fn echelon(mut rows: Vec<Vec<Int>>, pivot_cols: usize) -> (Vec<Vec<Int>>, usize) {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = best else {
                break;
            };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = num_integer::Integer::div_floor(&rows[i][c], &rows[r][c]);
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -x.clone();
            }
        }
        r += 1;
    }
    (rows, r)
}

/// Basis of the row lattice, in echelon form with positive pivots.
pub fn row_basis(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let (e, rank) = echelon(rows.to_vec(), ncols);
    e.into_iter().take(rank).collect()
}

/// Basis of `{x in Z^n : rows . x = 0}`. The result is saturated.
pub fn integer_kernel(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let k = rows.len();
    // Row j of the augmented matrix is [column j of `rows` | e_j].
    let aug: Vec<Vec<Int>> = (0..ncols)
        .map(|j| {
            let mut v: Vec<Int> = rows.iter().map(|r| r[j].clone()).collect();
            v.extend((0..ncols).map(|i| if i == j { Int::one() } else { Int::zero() }));
            v
        })
        .collect();
    let (e, rank) = echelon(aug, k);
    e.into_iter()
        .skip(rank)
        .map(|row| row[k..].to_vec())
        .collect()
}

/// Lattice basis of `Z^n` intersected with the rational span of the generators.
pub fn saturate(span: &SublatticeSpan) -> Vec<Vec<Int>> {
    let n = span.ambient_dim;
    let gens: Vec<Vec<Int>> = span
        .generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if gens.is_empty() {
        return Vec::new();
    }
    let orth = integer_kernel(&gens, n);
    if orth.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
    }
    integer_kernel(&orth, n)
}

/// Index of the lattice generated by the saturations of all spans.
pub fn lattice_index(spans: &[SublatticeSpan]) -> Result<LatticeIndex> {
    let Some(first) = spans.first() else {
        return Err(Error::EmptyInput("lattice_index needs at least one span"));
    };
    let n = first.ambient_dim;
    if let Some(s) = spans.iter().find(|s| s.ambient_dim != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.ambient_dim,
        });
    }
    let stacked: Vec<Vec<Int>> = spans.iter().flat_map(saturate).collect();
    Ok(index_of_rows(&stacked, n))
}

/// Index in `Z^n` of the lattice generated by the given rows.
pub fn index_of_rows(rows: &[Vec<Int>], n: usize) -> LatticeIndex {
    let basis = row_basis(rows, n);
    if basis.len() < n {
        return LatticeIndex::Infinite;
    }
    let mut prod = Int::one();
    for (i, row) in basis.iter().enumerate() {
        let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        debug_assert!(pivot >= i);
        prod *= row[pivot].abs();
    }
    LatticeIndex::Finite(prod)
}
