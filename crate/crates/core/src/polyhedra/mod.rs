//! Exact polyhedral geometry: hulls, Minkowski sums, volumes, subdivisions and lattices.

pub(crate) mod hull;
pub mod lattice;
pub mod polyhedron;
pub mod subdivision;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{lcm_denominators, scale_to_int, Int, Rat};

pub use lattice::{index_of_rows, integer_kernel, lattice_index, saturate, LatticeIndex, SublatticeSpan};
pub use polyhedron::{Polyhedron, RationalPolyhedron};
pub use subdivision::{
    mixed_subdivision, regular_subdivision, LiftedConfiguration, MixedCell, MixedSubdivision,
    Orientation, RegularSubdivision,
};

/// Convex hull of finitely many rational points, stored by its vertices in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolytope {
    pub ambient_dim: usize,
    #[serde(with = "crate::rational::serde_rat_vecs")]
    pub vertices: Vec<Vec<Rat>>,
}

impl RationalPolytope {
    pub fn from_i64(points: &[Vec<i64>]) -> Result<Self> {
        let pts: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| p.iter().map(|&x| Rat::from_integer(x.into())).collect())
            .collect();
        convex_hull(&pts)
    }

    pub fn point(p: Vec<Rat>) -> Self {
        Self {
            ambient_dim: p.len(),
            vertices: vec![p],
        }
    }

    pub fn dim(&self) -> usize {
        let (pts, _) = integer_points(&self.vertices);
        hull::affine_dim(&pts)
    }

    /// Vertices as integer vectors, if all are integral.
    pub fn integer_vertices(&self) -> Option<Vec<Vec<Int>>> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
            .collect()
    }

    pub fn translate(&self, t: &[Rat]) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }
}

/// Scales points by the lcm of all denominators.
pub(crate) fn integer_points(points: &[Vec<Rat>]) -> (Vec<Vec<Int>>, Int) {
    let l = lcm_denominators(points.iter().flatten());
    (points.iter().map(|p| scale_to_int(p, &l)).collect(), l)
}

fn check_dims(points: &[Vec<Rat>]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyInput("convex hull of no points"));
    };
    let n = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    Ok(n)
}

pub fn convex_hull(points: &[Vec<Rat>]) -> Result<RationalPolytope> {
    let n = check_dims(points)?;
    let (ints, _) = integer_points(points);
    let h = hull::hull(&ints);
    let mut vertices: Vec<Vec<Rat>> = h.vertices().into_iter().map(|i| points[i].clone()).collect();
    vertices.sort();
    Ok(RationalPolytope {
        ambient_dim: n,
        vertices,
    })
}

pub fn minkowski_sum(p: &RationalPolytope, q: &RationalPolytope) -> Result<RationalPolytope> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim,
            found: q.ambient_dim,
        });
    }
    let sums: Vec<Vec<Rat>> = p
        .vertices
        .iter()
        .flat_map(|a| {
            q.vertices
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
        })
        .collect();
    convex_hull(&sums)
}

/// `n!` times the Euclidean volume; zero for lower-dimensional polytopes.
pub fn normalized_volume(p: &RationalPolytope) -> Rat {
    let n = p.ambient_dim;
    let (ints, l) = integer_points(&p.vertices);
    let h = hull::hull(&ints);
    if h.dim < n {
        return Rat::zero();
    }
    let mut scale = Int::one();
    for _ in 0..n {
        scale *= &l;
    }
    Rat::new(h.lattice_volume(), scale)
}
