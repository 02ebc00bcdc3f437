//! Regular subdivisions of lifted point configurations and mixed subdivisions
//! via the Cayley embedding.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hull::{affine_dim, hull, Hull};
use super::{convex_hull, RationalPolytope};
use crate::error::{Error, Result};
use crate::rational::{lcm_denominators, Int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedConfiguration {
    pub points: Vec<Vec<i64>>,
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub heights: Vec<Rat>,
}

impl LiftedConfiguration {
    pub fn new(points: Vec<Vec<i64>>, heights: Vec<Rat>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("lifted configuration needs a point"));
        }
        if heights.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: heights.len(),
            });
        }
        let n = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        Ok(Self { points, heights })
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    fn int_points(&self) -> Vec<Vec<Int>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|&x| Int::from(x)).collect())
            .collect()
    }
}

/// Cells of a regular subdivision as sorted point-index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularSubdivision {
    pub configuration: LiftedConfiguration,
    pub orientation: Orientation,
    /// Maximal cells, sorted.
    pub cells: Vec<Vec<usize>>,
    /// Every cell (faces of maximal cells included) with its dimension, sorted.
    pub faces: Vec<(Vec<usize>, usize)>,
    /// Affine dimension of the configuration.
    pub dim: usize,
}

impl RegularSubdivision {
    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().filter(move |(_, k)| *k == d).map(|(f, _)| f)
    }
}

/// Lifts with heights scaled to integers; UPPER negates the heights.
fn lifted_points(c: &LiftedConfiguration, orientation: Orientation) -> Vec<Vec<Int>> {
    let l = lcm_denominators(&c.heights);
    let sign = match orientation {
        Orientation::Lower => Int::from(1),
        Orientation::Upper => Int::from(-1),
    };
    c.points
        .iter()
        .zip(&c.heights)
        .map(|(p, h)| {
            let mut v: Vec<Int> = p.iter().map(|&x| Int::from(x)).collect();
            v.push((h * Rat::from_integer(l.clone())).to_integer() * &sign);
            v
        })
        .collect()
}

/// Lower facets of the lifted hull, and all facets for face closure.
fn lower_structure(lifted: &[Vec<Int>]) -> (Hull, Vec<Vec<usize>>) {
    let h = hull(lifted);
    let n = lifted[0].len() - 1;
    let height_kept = h.coords.last() == Some(&n);
    let lower: Vec<Vec<usize>> = if height_kept {
        h.facets
            .iter()
            .filter(|f| f.normal.last().expect("nonempty normal").is_negative())
            .map(|f| f.points.clone())
            .collect()
    } else {
        vec![(0..lifted.len()).collect()]
    };
    (h, lower)
}

fn close_faces(h: &Hull, lower: &[Vec<usize>], height_kept: bool) -> BTreeSet<Vec<usize>> {
    if !height_kept {
        // Flat lifting: the cells are the faces of the hull itself.
        return h.faces().into_iter().map(|(f, _)| f).collect();
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Vec<usize>> = lower.to_vec();
    while let Some(face) = queue.pop() {
        if !found.insert(face.clone()) {
            continue;
        }
        for f in &h.facets {
            let meet: Vec<usize> = face
                .iter()
                .copied()
                .filter(|i| f.points.binary_search(i).is_ok())
                .collect();
            if !meet.is_empty() && meet.len() < face.len() && !found.contains(&meet) {
                queue.push(meet);
            }
        }
    }
    found
}

pub fn regular_subdivision(c: &LiftedConfiguration, orientation: Orientation) -> RegularSubdivision {
    let lifted = lifted_points(c, orientation);
    let n = c.ambient_dim();
    let (h, mut lower) = lower_structure(&lifted);
    let height_kept = h.coords.last() == Some(&n);
    lower.sort();
    let faces = close_faces(&h, &lower, height_kept);
    let pts = c.int_points();
    let faces: Vec<(Vec<usize>, usize)> = faces
        .into_iter()
        .map(|f| {
            let sub: Vec<Vec<Int>> = f.iter().map(|&i| pts[i].clone()).collect();
            let d = affine_dim(&sub);
            (f, d)
        })
        .collect();
    RegularSubdivision {
        configuration: c.clone(),
        orientation,
        cells: lower,
        faces,
        dim: affine_dim(&pts),
    }
}

/// A cell of a mixed subdivision with its Minkowski decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedCell {
    /// Point indices of each configuration.
    pub summands: Vec<Vec<usize>>,
    pub summand_dims: Vec<usize>,
    pub total_cell: RationalPolytope,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedSubdivision {
    pub ambient_dim: usize,
    /// Full-dimensional cells of the subdivision of the Minkowski sum.
    pub maximal: Vec<MixedCell>,
    /// All cells, faces of maximal cells included.
    pub cells: Vec<MixedCell>,
}

pub fn mixed_subdivision(
    configs: &[LiftedConfiguration],
    orientation: Orientation,
) -> Result<MixedSubdivision> {
    let Some(first) = configs.first() else {
        return Err(Error::EmptyInput("mixed subdivision of no configurations"));
    };
    let n = first.ambient_dim();
    if let Some(c) = configs.iter().find(|c| c.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: c.ambient_dim(),
        });
    }
    let r = configs.len();
    let mut points = Vec::new();
    let mut heights = Vec::new();
    let mut owner = Vec::new();
    for (l, c) in configs.iter().enumerate() {
        for (i, (p, h)) in c.points.iter().zip(&c.heights).enumerate() {
            let mut v = p.clone();
            v.extend((0..r).map(|j| (j == l) as i64));
            points.push(v);
            heights.push(h.clone());
            owner.push((l, i));
        }
    }
    let cayley = LiftedConfiguration::new(points, heights)?;
    let sub = regular_subdivision(&cayley, orientation);
    let decompose = |cell: &[usize]| -> Option<MixedCell> {
        let mut summands = vec![Vec::new(); r];
        for &k in cell {
            let (l, i) = owner[k];
            summands[l].push(i);
        }
        if summands.iter().any(|s| s.is_empty()) {
            return None;
        }
        Some(build_mixed_cell(configs, summands))
    };
    let maximal: Vec<MixedCell> = sub.cells.iter().filter_map(|c| decompose(c)).collect();
    let cells: Vec<MixedCell> = sub.faces.iter().filter_map(|(c, _)| decompose(c)).collect();
    Ok(MixedSubdivision {
        ambient_dim: n,
        maximal,
        cells,
    })
}

fn build_mixed_cell(configs: &[LiftedConfiguration], summands: Vec<Vec<usize>>) -> MixedCell {
    let n = configs[0].ambient_dim();
    let mut summand_dims = Vec::with_capacity(summands.len());
    let mut directions: Vec<Vec<Int>> = Vec::new();
    let mut total: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]];
    for (c, s) in configs.iter().zip(&summands) {
        let pts: Vec<Vec<Int>> = s
            .iter()
            .map(|&i| c.points[i].iter().map(|&x| Int::from(x)).collect())
            .collect();
        summand_dims.push(affine_dim(&pts));
        for p in &pts[1..] {
            directions.push(p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect());
        }
        let verts = convex_hull(
            &s.iter()
                .map(|&i| c.points[i].iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect::<Vec<_>>(),
        )
        .expect("nonempty summand")
        .vertices;
        let mut next = Vec::with_capacity(total.len() * verts.len());
        for a in &total {
            for b in &verts {
                next.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        total = convex_hull(&next).expect("nonempty").vertices;
    }
    let mut gens = vec![vec![Int::zero(); n]];
    gens.extend(directions);
    let dim = affine_dim(&gens);
    MixedCell {
        summands,
        summand_dims,
        total_cell: RationalPolytope {
            ambient_dim: n,
            vertices: total,
        },
        dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::normalized_volume;
    use crate::rational::{rat, Rat};
    use proptest::prelude::*;

    fn config(pts: &[[i64; 2]], h: &[i64]) -> LiftedConfiguration {
        LiftedConfiguration::new(pts.iter().map(|p| p.to_vec()).collect(), h.iter().map(|&x| rat(x)).collect())
            .unwrap()
    }

    fn cells_as_points(s: &RegularSubdivision) -> Vec<Vec<Vec<i64>>> {
        let mut out: Vec<Vec<Vec<i64>>> = s
            .cells
            .iter()
            .map(|c| {
                let mut v: Vec<Vec<i64>> = c.iter().map(|&i| s.configuration.points[i].clone()).collect();
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    fn sorted(cells: &[&[[i64; 2]]]) -> Vec<Vec<Vec<i64>>> {
        let mut out: Vec<Vec<Vec<i64>>> = cells
            .iter()
            .map(|c| {
                let mut v: Vec<Vec<i64>> = c.iter().map(|p| p.to_vec()).collect();
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    const F_SUPPORT: [[i64; 2]; 5] = [[0, 0], [1, 0], [0, 1], [3, 0], [1, 2]];
    const G_SUPPORT: [[i64; 2]; 5] = [[0, 0], [1, 0], [0, 1], [2, 1], [0, 3]];

    #[test]
    fn flat_lifting_is_one_cell() {
        let s = regular_subdivision(&config(&F_SUPPORT, &[0; 5]), Orientation::Lower);
        assert_eq!(s.cells, vec![vec![0, 1, 2, 3, 4]]);
        assert!(s.faces.iter().any(|(f, d)| *d == 1 && f == &vec![0, 1, 3]));
    }

    #[test]
    fn newton_subdivision_of_f() {
        let expected = sorted(&[
            &[[0, 0], [1, 0], [0, 1]],
            &[[1, 0], [1, 2], [0, 1]],
            &[[1, 0], [3, 0], [1, 2]],
        ]);
        // Valuations (3,0,2,0,0): lower hull; max-coefficients (-3,0,-2,0,0): upper hull.
        let s = regular_subdivision(&config(&F_SUPPORT, &[3, 0, 2, 0, 0]), Orientation::Lower);
        assert_eq!(cells_as_points(&s), expected);
        let s = regular_subdivision(&config(&F_SUPPORT, &[-3, 0, -2, 0, 0]), Orientation::Upper);
        assert_eq!(cells_as_points(&s), expected);
        // The upper hull of the raw valuations is flat over the polytope.
        let s = regular_subdivision(&config(&F_SUPPORT, &[3, 0, 2, 0, 0]), Orientation::Upper);
        assert_eq!(s.cells.len(), 1);
    }

    #[test]
    fn newton_subdivision_of_g() {
        let expected = sorted(&[
            &[[0, 0], [1, 0], [2, 1]],
            &[[0, 0], [2, 1], [0, 1]],
            &[[2, 1], [0, 1], [0, 3]],
        ]);
        let s = regular_subdivision(&config(&G_SUPPORT, &[-4, -4, -2, 0, 0]), Orientation::Upper);
        assert_eq!(cells_as_points(&s), expected);
        let s = regular_subdivision(&config(&G_SUPPORT, &[4, 4, 2, 0, 0]), Orientation::Lower);
        assert_eq!(cells_as_points(&s), expected);
    }

    #[test]
    fn flat_mixed_subdivision() {
        let p = config(&[[0, 0], [1, 0], [0, 1]], &[0, 0, 0]);
        let q = config(&[[0, 0], [2, 0], [0, 2]], &[0, 0, 0]);
        let m = mixed_subdivision(&[p, q], Orientation::Lower).unwrap();
        assert_eq!(m.maximal.len(), 1);
        assert_eq!(m.maximal[0].summands, vec![vec![0, 1, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn parallel_segments_are_not_additive() {
        // Supports of x+y+1 and tx+y+1 under MIN with t-adic valuations.
        let f = config(&[[1, 0], [0, 1], [0, 0]], &[0, 0, 0]);
        let g = config(&[[1, 0], [0, 1], [0, 0]], &[1, 0, 0]);
        let m = mixed_subdivision(&[f, g], Orientation::Lower).unwrap();
        let bad = m
            .cells
            .iter()
            .find(|c| c.dim == 1 && c.summand_dims == vec![1, 1])
            .expect("defective cell");
        assert_eq!(bad.summands, vec![vec![1, 2], vec![1, 2]]);
    }

    fn lifted(n: usize) -> impl Strategy<Value = LiftedConfiguration> {
        proptest::collection::vec((proptest::collection::vec(0i64..3, n), -6i64..7), 1..7).prop_map(|v| {
            let (p, h): (Vec<_>, Vec<_>) = v.into_iter().unzip();
            LiftedConfiguration::new(p, h.into_iter().map(rat).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn cells_tile_the_hull(c in lifted(2)) {
            let s = regular_subdivision(&c, Orientation::Lower);
            let poly = |cell: &[usize]| RationalPolytope::from_i64(
                &cell.iter().map(|&i| c.points[i].clone()).collect::<Vec<_>>()).unwrap();
            let total: Rat = s.cells.iter().map(|cell| normalized_volume(&poly(cell))).sum();
            let all: Vec<usize> = (0..c.points.len()).collect();
            prop_assert_eq!(total, normalized_volume(&poly(&all)));
            for cell in &s.cells {
                let pts: Vec<Vec<Int>> = cell.iter().map(|&i| c.points[i].iter().map(|&x| Int::from(x)).collect()).collect();
                prop_assert_eq!(affine_dim(&pts), s.dim);
            }
        }

        #[test]
        fn cayley_cells_match_summed_configuration(a in lifted(2), b in lifted(2)) {
            let m = mixed_subdivision(&[a.clone(), b.clone()], Orientation::Lower).unwrap();
            let mut pts = Vec::new();
            let mut hs = Vec::new();
            for (p, hp) in a.points.iter().zip(&a.heights) {
                for (q, hq) in b.points.iter().zip(&b.heights) {
                    pts.push(vec![p[0] + q[0], p[1] + q[1]]);
                    hs.push(hp + hq);
                }
            }
            let sum = LiftedConfiguration::new(pts.clone(), hs).unwrap();
            let direct = regular_subdivision(&sum, Orientation::Lower);
            let mut lhs: Vec<RationalPolytope> = m.maximal.iter().map(|c| c.total_cell.clone()).collect();
            let mut rhs: Vec<RationalPolytope> = direct.cells.iter().map(|cell| RationalPolytope::from_i64(
                &cell.iter().map(|&i| pts[i].clone()).collect::<Vec<_>>()).unwrap()).collect();
            lhs.sort_by(|x, y| x.vertices.cmp(&y.vertices));
            rhs.sort_by(|x, y| x.vertices.cmp(&y.vertices));
            rhs.dedup();
            // Only full-dimensional cells are comparable; both sides agree on the rest by tiling.
            prop_assert_eq!(lhs, rhs);
        }
    }
}
