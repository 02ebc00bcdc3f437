//! Beneath-beyond convex hull of integer point sets in any dimension.
//!
//! Points are projected injectively onto a coordinate subset spanning their
//! affine hull, then inserted one at a time. Boundary facets are kept as
//! simplices; the visible facets of each new point, coned from that point,
//! form a placing triangulation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::linalg::{int_det, rank, rref};
use crate::rational::{dot_int, primitive, Int, Rat};

#[derive(Debug, Clone)]
pub(crate) struct HullFacet {
    /// Primitive outer normal in projected coordinates.
    pub normal: Vec<Int>,
    /// Indices of all input points on the facet hyperplane, sorted.
    pub points: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Hull {
    /// Affine dimension of the point set.
    pub dim: usize,
    /// Columns of the original coordinates kept by the projection.
    pub coords: Vec<usize>,
    pub projected: Vec<Vec<Int>>,
    pub facets: Vec<HullFacet>,
    /// Placing triangulation; each simplex lists `dim + 1` point indices.
    pub simplices: Vec<Vec<usize>>,
}

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vec<Int>,
    offset: Int,
    alive: bool,
}

fn to_rat(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

fn sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Affine basis (indices into `points`, first point always included) found
/// greedily in input order.
pub(crate) fn affine_basis(points: &[Vec<Int>]) -> Vec<usize> {
    let mut basis = vec![0];
    let mut echelon: Vec<Vec<Rat>> = Vec::new();
    let n = points[0].len();
    for (i, p) in points.iter().enumerate().skip(1) {
        if echelon.len() == n {
            break;
        }
        let mut v = to_rat(&sub(p, &points[0]));
        for row in &echelon {
            let piv = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if !v[piv].is_zero() {
                let f = &v[piv] / &row[piv];
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            echelon.push(v);
            basis.push(i);
        }
    }
    basis
}

pub(crate) fn affine_dim(points: &[Vec<Int>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let n = points[0].len();
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| to_rat(&sub(p, &points[0]))).collect();
    rank(&diffs, n)
}

/// Hyperplane through `k` affinely independent points of `Z^k`, oriented so
/// that `interior / scale` lies strictly on the negative side.
fn hyperplane(pts: &[&Vec<Int>], interior: &[Int], scale: &Int) -> (Vec<Int>, Int) {
    let k = pts[0].len();
    let mut normal = if k == 1 {
        vec![Int::from(1)]
    } else {
        let m: Vec<Vec<Int>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
        (0..k)
            .map(|j| {
                let minor: Vec<Vec<Int>> = m
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let d = int_det(&minor);
                if j % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect()
    };
    normal = primitive(&normal);
    let mut offset = dot_int(&normal, pts[0]);
    let side = dot_int(&normal, interior) - scale * &offset;
    debug_assert!(!side.is_zero(), "interior point on facet hyperplane");
    if side.is_positive() {
        normal = normal.iter().map(|x| -x).collect();
        offset = -offset;
    }
    (normal, offset)
}

pub(crate) fn hull(points: &[Vec<Int>]) -> Hull {
    assert!(!points.is_empty(), "hull of empty point set");
    let n = points[0].len();
    let basis = affine_basis(points);
    let k = basis.len() - 1;
    if k == 0 {
        return Hull {
            dim: 0,
            coords: Vec::new(),
            projected: vec![Vec::new(); points.len()],
            facets: Vec::new(),
            simplices: vec![vec![0]],
        };
    }
    let diffs: Vec<Vec<Rat>> = basis[1..]
        .iter()
        .map(|&i| to_rat(&sub(&points[i], &points[basis[0]])))
        .collect();
    let (_, coords) = rref(&diffs, n);
    debug_assert_eq!(coords.len(), k);
    let projected: Vec<Vec<Int>> = points
        .iter()
        .map(|p| coords.iter().map(|&c| p[c].clone()).collect())
        .collect();

    let scale = Int::from(k as i64 + 1);
    let mut interior = vec![Int::zero(); k];
    for &b in &basis {
        for (x, y) in interior.iter_mut().zip(&projected[b]) {
            *x += y;
        }
    }

    let mut facets: Vec<SimplexFacet> = Vec::new();
    for skip in 0..=k {
        let mut verts: Vec<usize> = basis
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &b)| b)
            .collect();
        verts.sort_unstable();
        let pts: Vec<&Vec<Int>> = verts.iter().map(|&v| &projected[v]).collect();
        let (normal, offset) = hyperplane(&pts, &interior, &scale);
        facets.push(SimplexFacet {
            verts,
            normal,
            offset,
            alive: true,
        });
    }
    let mut simplices = vec![{
        let mut s = basis.clone();
        s.sort_unstable();
        s
    }];

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for p in 0..points.len() {
        if in_basis.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && dot_int(&f.normal, &projected[p]) > f.offset)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for &fi in &visible {
            let verts = &facets[fi].verts;
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
            let mut s = verts.clone();
            s.push(p);
            s.sort_unstable();
            simplices.push(s);
        }
        for &fi in &visible {
            facets[fi].alive = false;
        }
        let mut horizon: Vec<Vec<usize>> = ridge_count
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        for ridge in horizon {
            let mut verts = ridge;
            verts.push(p);
            verts.sort_unstable();
            let pts: Vec<&Vec<Int>> = verts.iter().map(|&v| &projected[v]).collect();
            let (normal, offset) = hyperplane(&pts, &interior, &scale);
            facets.push(SimplexFacet {
                verts,
                normal,
                offset,
                alive: true,
            });
        }
    }

    let mut planes: BTreeMap<(Vec<Int>, Int), ()> = BTreeMap::new();
    for f in facets.iter().filter(|f| f.alive) {
        planes.insert((f.normal.clone(), f.offset.clone()), ());
    }
    let facets = planes
        .into_keys()
        .map(|(normal, offset)| {
            let pts = (0..points.len())
                .filter(|&i| dot_int(&normal, &projected[i]) == offset)
                .collect();
            HullFacet { normal, points: pts }
        })
        .collect();
    Hull {
        dim: k,
        coords,
        projected,
        facets,
        simplices,
    }
}

impl Hull {
    /// Indices of the vertices; among coincident points the smallest index is kept.
    pub fn vertices(&self) -> Vec<usize> {
        let mut seen: BTreeSet<&Vec<Int>> = BTreeSet::new();
        let mut out = Vec::new();
        for i in 0..self.projected.len() {
            if !seen.insert(&self.projected[i]) {
                continue;
            }
            if self.dim == 0 {
                out.push(i);
                continue;
            }
            let normals: Vec<Vec<Rat>> = self
                .facets
                .iter()
                .filter(|f| f.points.binary_search(&i).is_ok())
                .map(|f| to_rat(&f.normal))
                .collect();
            if rank(&normals, self.dim) == self.dim {
                out.push(i);
            }
        }
        out
    }

    /// Sum of `|det|` over the placing triangulation, in projected coordinates.
    pub fn lattice_volume(&self) -> Int {
        if self.dim == 0 {
            return Int::from(1);
        }
        self.simplices
            .iter()
            .map(|s| {
                let m: Vec<Vec<Int>> = s[1..]
                    .iter()
                    .map(|&v| sub(&self.projected[v], &self.projected[s[0]]))
                    .collect();
                int_det(&m).abs()
            })
            .sum()
    }

    /// Point sets of all nonempty faces (including the whole set), each with
    /// its affine dimension.
    pub fn faces(&self) -> Vec<(Vec<usize>, usize)> {
        let all: Vec<usize> = (0..self.projected.len()).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(all);
        let mut queue: Vec<Vec<usize>> = self.facets.iter().map(|f| f.points.clone()).collect();
        while let Some(face) = queue.pop() {
            if !found.insert(face.clone()) {
                continue;
            }
            for f in &self.facets {
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
            .into_iter()
            .map(|f| {
                let pts: Vec<Vec<Int>> = f.iter().map(|&i| self.projected[i].clone()).collect();
                let d = affine_dim(&pts);
                (f, d)
            })
            .collect()
    }
}
