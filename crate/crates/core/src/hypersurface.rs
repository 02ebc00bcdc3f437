//! Weighted polyhedral complexes and tropical hypersurfaces.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, solve_unique};
use crate::polyhedra::hull::hull;
use crate::polyhedra::polyhedron::canonical_lineality;
use crate::polyhedra::{
    regular_subdivision, saturate, LiftedConfiguration, Orientation, Polyhedron, RationalPolyhedron,
    RegularSubdivision, SublatticeSpan,
};
use crate::rational::{ext_gcd, gcd_vec, lcm_denominators, primitive_from_rat, to_rat_vec, Int, Rat};
use crate::semiring::{Convention, TropicalPolynomial};

/// Vertex and ray indices of one maximal cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellIndices {
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
}

/// A polyhedral complex stored by its maximal cells, each the convex hull of
/// some shared vertices plus the cone over some shared rays plus the common
/// lineality space. Rays are primitive and orthogonal to the lineality space;
/// vertices are the orthogonal projections of the minimal faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPolyhedralComplex {
    pub ambient_dim: usize,
    #[serde(with = "crate::rational::serde_rat_vecs")]
    pub vertices: Vec<Vec<Rat>>,
    #[serde(with = "crate::rational::serde_int_vecs")]
    pub rays: Vec<Vec<Int>>,
    #[serde(with = "crate::rational::serde_int_vecs")]
    pub lineality: Vec<Vec<Int>>,
    pub maximal_cells: Vec<CellIndices>,
    pub multiplicities: Vec<u64>,
}

/// Outcome of a balancing check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancingReport {
    pub balanced: bool,
    /// First codimension-one cell where the weighted normals fail to cancel.
    pub violation: Option<RationalPolyhedron>,
}

impl WeightedPolyhedralComplex {
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
            maximal_cells: Vec::new(),
            multiplicities: Vec::new(),
        }
    }

    /// Builds a complex from cells given in V-representation, merging
    /// identical cells by adding their multiplicities.
    pub fn from_cells(ambient_dim: usize, cells: Vec<(RationalPolyhedron, u64)>) -> Result<Self> {
        let mut out = Self::empty(ambient_dim);
        let Some((first, _)) = cells.first() else {
            return Ok(out);
        };
        out.lineality = first.lineality.clone();
        let mut merged: BTreeMap<CellIndices, u64> = BTreeMap::new();
        for (c, m) in cells {
            if c.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: c.ambient_dim,
                });
            }
            if m == 0 {
                continue;
            }
            let mut vs: Vec<usize> = c.vertices.iter().map(|v| intern(&mut out.vertices, v)).collect();
            let mut rs: Vec<usize> = c.rays.iter().map(|r| intern(&mut out.rays, r)).collect();
            vs.sort();
            vs.dedup();
            rs.sort();
            rs.dedup();
            *merged.entry(CellIndices { vertices: vs, rays: rs }).or_insert(0) += m;
        }
        for (k, m) in merged {
            out.maximal_cells.push(k);
            out.multiplicities.push(m);
        }
        Ok(out.canonical())
    }

    /// Sorts vertices, rays and cells lexicographically.
    pub fn canonical(mut self) -> Self {
        let (vertices, vmap) = sorted_with_map(&self.vertices);
        let (rays, rmap) = sorted_with_map(&self.rays);
        let mut cells: Vec<(CellIndices, u64)> = self
            .maximal_cells
            .iter()
            .zip(&self.multiplicities)
            .map(|(c, &m)| {
                let mut v: Vec<usize> = c.vertices.iter().map(|&i| vmap[i]).collect();
                let mut r: Vec<usize> = c.rays.iter().map(|&i| rmap[i]).collect();
                v.sort();
                r.sort();
                (CellIndices { vertices: v, rays: r }, m)
            })
            .collect();
        cells.sort();
        self.vertices = vertices;
        self.rays = rays;
        self.maximal_cells = cells.iter().map(|(c, _)| c.clone()).collect();
        self.multiplicities = cells.iter().map(|(_, m)| *m).collect();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.maximal_cells.is_empty()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn cell(&self, i: usize) -> RationalPolyhedron {
        let c = &self.maximal_cells[i];
        RationalPolyhedron::new(
            self.ambient_dim,
            c.vertices.iter().map(|&j| self.vertices[j].clone()).collect(),
            c.rays.iter().map(|&j| self.rays[j].clone()).collect(),
            self.lineality.clone(),
        )
    }

    pub fn cells(&self) -> Vec<RationalPolyhedron> {
        (0..self.maximal_cells.len()).map(|i| self.cell(i)).collect()
    }

    pub fn cell_dims(&self) -> Vec<usize> {
        self.cells().iter().map(|c| c.dim()).collect()
    }

    /// Common dimension of the maximal cells, or `None` if empty or impure.
    pub fn dim(&self) -> Option<usize> {
        let dims = self.cell_dims();
        let d = *dims.first()?;
        dims.iter().all(|&e| e == d).then_some(d)
    }

    pub fn is_pure(&self) -> bool {
        self.is_empty() || self.dim().is_some()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    /// True iff `w` lies in some maximal cell.
    pub fn contains_point(&self, w: &[Rat]) -> bool {
        self.cells().iter().any(|c| c.facet_data().hrep.contains(w))
    }

    pub fn hreps(&self) -> Vec<Polyhedron> {
        self.cells().iter().map(|c| c.facet_data().hrep).collect()
    }

    /// Same complex with the multiplicity of one maximal cell replaced.
    pub fn with_multiplicity(mut self, cell: usize, m: u64) -> Self {
        self.multiplicities[cell] = m;
        self
    }
}

fn intern<T: Clone + PartialEq>(list: &mut Vec<T>, x: &T) -> usize {
    if let Some(i) = list.iter().position(|y| y == x) {
        return i;
    }
    list.push(x.clone());
    list.len() - 1
}

fn sorted_with_map<T: Clone + Ord>(xs: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].cmp(&xs[b]));
    let mut map = vec![0; xs.len()];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new;
    }
    (order.iter().map(|&i| xs[i].clone()).collect(), map)
}

/// Vertices and primitive rays in lexicographic order.
pub fn vertices_and_rays(c: &WeightedPolyhedralComplex) -> (Vec<Vec<Rat>>, Vec<Vec<Int>>) {
    let mut v = c.vertices.clone();
    let mut r = c.rays.clone();
    v.sort();
    r.sort();
    (v, r)
}

/// Lattice vector `u` in `Z^n ∩ span σ` that generates it modulo `Z^n ∩ span τ`
/// and on which `phi` is positive. `phi` must vanish exactly on span τ within span σ.
pub(crate) fn primitive_normal(sigma_span: &[Vec<Rat>], phi: &[Rat], n: usize) -> Vec<Int> {
    let gens: Vec<Vec<Int>> = sigma_span.iter().map(|g| primitive_from_rat(g)).collect();
    let basis = saturate(&SublatticeSpan {
        ambient_dim: n,
        generators: gens,
    });
    let vals: Vec<Rat> = basis.iter().map(|b| crate::rational::dot(phi, &to_rat_vec(b))).collect();
    let l = Rat::from_integer(lcm_denominators(&vals));
    let ints: Vec<Int> = vals.iter().map(|v| (v * &l).to_integer()).collect();
    let g = gcd_vec(&ints);
    let ints: Vec<Int> = ints.iter().map(|x| x / &g).collect();
    // Bezout coefficients x with sum x_i * ints_i = 1.
    let mut acc = Int::zero();
    let mut coeffs = vec![Int::zero(); ints.len()];
    for (i, c) in ints.iter().enumerate() {
        if acc.is_zero() {
            if !c.is_zero() {
                acc = c.clone();
                coeffs[i] = Int::one();
            }
            continue;
        }
        let (g, a, b) = ext_gcd(&acc, c);
        for x in coeffs.iter_mut().take(i) {
            *x *= &a;
        }
        coeffs[i] = b;
        acc = g;
    }
    if acc.is_negative() {
        for x in coeffs.iter_mut() {
            *x = -x.clone();
        }
    }
    let mut u = vec![Int::zero(); n];
    for (b, x) in basis.iter().zip(&coeffs) {
        for (ui, bi) in u.iter_mut().zip(b) {
            *ui += x * bi;
        }
    }
    u
}

/// Balancing at every codimension-one cell: the multiplicity-weighted sum of
/// primitive normals of the adjacent maximal cells lies in the cell's span.
pub fn check_balancing(c: &WeightedPolyhedralComplex) -> Result<BalancingReport> {
    if !c.is_pure() {
        return Err(Error::NotPure);
    }
    let n = c.ambient_dim;
    // Codim-one cell (global vertex and ray indices) -> adjacent (cell, outward functional).
    let mut star: BTreeMap<CellIndices, Vec<(usize, Vec<Rat>)>> = BTreeMap::new();
    for i in 0..c.maximal_cells.len() {
        let cell = c.cell(i);
        let fd = cell.facet_data();
        let idx = &c.maximal_cells[i];
        for ((a, _), (vs, rs)) in fd.hrep.ineqs.iter().zip(&fd.facets) {
            let key = CellIndices {
                vertices: vs.iter().map(|&j| idx.vertices[j]).collect(),
                rays: rs.iter().map(|&j| idx.rays[j]).collect(),
            };
            let phi: Vec<Rat> = a.iter().map(|x| -x).collect();
            star.entry(key).or_default().push((i, phi));
        }
    }
    for (tau, adj) in &star {
        let tau_poly = RationalPolyhedron::new(
            n,
            tau.vertices.iter().map(|&j| c.vertices[j].clone()).collect(),
            tau.rays.iter().map(|&j| c.rays[j].clone()).collect(),
            c.lineality.clone(),
        );
        let tau_span = tau_poly.direction_generators();
        let r = rank(&tau_span, n);
        let mut sum = vec![Int::zero(); n];
        for (i, phi) in adj {
            let u = primitive_normal(&c.cell(*i).direction_generators(), phi, n);
            let m = Int::from(c.multiplicities[*i]);
            for (s, x) in sum.iter_mut().zip(&u) {
                *s += &m * x;
            }
        }
        let mut rows = tau_span.clone();
        rows.push(to_rat_vec(&sum));
        if rank(&rows, n) != r {
            return Ok(BalancingReport {
                balanced: false,
                violation: Some(tau_poly),
            });
        }
    }
    Ok(BalancingReport {
        balanced: true,
        violation: None,
    })
}

/// A tropical hypersurface with the Newton subdivision it is dual to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalHypersurface {
    pub complex: WeightedPolyhedralComplex,
    pub dual: RegularSubdivision,
    pub source: TropicalPolynomial,
    /// Index into `dual.cells` of the cell dual to each vertex of the complex.
    pub vertex_duals: Vec<usize>,
    /// Point indices of the dual edge of each maximal cell.
    pub cell_duals: Vec<Vec<usize>>,
}

impl TropicalHypersurface {
    /// The hypersurface of a monomial or constant is empty.
    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }
}

/// Corner locus of `f`, with the polyhedral structure dual to the regular
/// subdivision of its support lifted by the coefficients.
pub fn tropical_hypersurface(f: &TropicalPolynomial) -> Result<TropicalHypersurface> {
    let n = f.arity();
    let points: Vec<Vec<i64>> = f.terms().keys().cloned().collect();
    let coeffs: Vec<Rat> = f.terms().values().cloned().collect();
    if points.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let orientation = match f.convention() {
        Convention::Min => Orientation::Lower,
        Convention::Max => Orientation::Upper,
    };
    let config = LiftedConfiguration::new(points.clone(), coeffs.clone())?;
    let dual = regular_subdivision(&config, orientation);
    if points.len() < 2 {
        return Ok(TropicalHypersurface {
            complex: WeightedPolyhedralComplex::empty(n),
            dual,
            source: f.clone(),
            vertex_duals: Vec::new(),
            cell_duals: Vec::new(),
        });
    }
    let rat_pts: Vec<Vec<Rat>> = points.iter().map(|p| p.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
    let diffs: Vec<Vec<Rat>> = rat_pts[1..]
        .iter()
        .map(|p| p.iter().zip(&rat_pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let lin_basis = nullspace(&diffs, n);
    let lineality = canonical_lineality(&lin_basis);

    // Dual vertices: equal term values on each maximal cell, orthogonal to the lineality.
    let mut vertices = Vec::new();
    for cell in &dual.cells {
        let a0 = cell[0];
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &a in &cell[1..] {
            rows.push(rat_pts[a].iter().zip(&rat_pts[a0]).map(|(x, y)| x - y).collect());
            rhs.push(&coeffs[a0] - &coeffs[a]);
        }
        for l in &lin_basis {
            rows.push(l.clone());
            rhs.push(Rat::zero());
        }
        let w = solve_unique(&rows, &rhs).expect("maximal cell determines a unique vertex");
        vertices.push(w);
    }

    // Rays: normals of the Newton polytope's facets within its affine span.
    let ints: Vec<Vec<Int>> = points.iter().map(|p| p.iter().map(|&x| Int::from(x)).collect()).collect();
    let h = hull(&ints);
    let mut facet_sets: Vec<Vec<usize>> = Vec::new();
    let mut rays: Vec<Vec<Int>> = Vec::new();
    for fct in &h.facets {
        let p0 = fct.points[0];
        let mut rows: Vec<Vec<Rat>> = fct.points[1..]
            .iter()
            .map(|&p| rat_pts[p].iter().zip(&rat_pts[p0]).map(|(x, y)| x - y).collect())
            .collect();
        rows.extend(lin_basis.iter().cloned());
        let ns = nullspace(&rows, n);
        debug_assert_eq!(ns.len(), 1);
        let mut u = ns[0].clone();
        // Inner normal for MIN, outer for MAX.
        let off = (0..points.len())
            .map(|q| crate::rational::dot(&u, &rat_pts[q]) - crate::rational::dot(&u, &rat_pts[p0]))
            .find(|s| !s.is_zero())
            .expect("facet is proper");
        let inner = off.is_positive();
        let want_inner = f.convention() == Convention::Min;
        if inner != want_inner {
            u = u.iter().map(|x| -x).collect();
        }
        rays.push(primitive_from_rat(&u));
        facet_sets.push(fct.points.clone());
    }

    let mut cells = Vec::new();
    let mut mults = Vec::new();
    let mut cell_duals = Vec::new();
    for edge in dual.faces_of_dim(1) {
        let lo = edge.iter().min_by(|&&a, &&b| points[a].cmp(&points[b])).copied().expect("edge");
        let hi = edge.iter().max_by(|&&a, &&b| points[a].cmp(&points[b])).copied().expect("edge");
        let v: Vec<Int> = points[hi].iter().zip(&points[lo]).map(|(a, b)| Int::from(a - b)).collect();
        let m = gcd_vec(&v).to_u64().expect("multiplicity fits in u64");
        let vs: Vec<usize> = (0..dual.cells.len())
            .filter(|&k| edge.iter().all(|p| dual.cells[k].binary_search(p).is_ok()))
            .collect();
        let rs: Vec<usize> = (0..facet_sets.len())
            .filter(|&k| edge.iter().all(|p| facet_sets[k].binary_search(p).is_ok()))
            .collect();
        cells.push(CellIndices { vertices: vs, rays: rs });
        mults.push(m);
        cell_duals.push(edge.clone());
    }

    // Facets of the Newton polytope that contain no edge contribute no ray.
    let mut used = vec![false; rays.len()];
    for c in &cells {
        for &r in &c.rays {
            used[r] = true;
        }
    }
    let mut renumber = vec![usize::MAX; rays.len()];
    let mut kept = Vec::new();
    for (i, r) in rays.into_iter().enumerate() {
        if used[i] {
            renumber[i] = kept.len();
            kept.push(r);
        }
    }
    let rays = kept;
    for c in cells.iter_mut() {
        for r in c.rays.iter_mut() {
            *r = renumber[*r];
        }
    }

    // Canonical order, keeping the duality maps aligned.
    let (vsorted, vmap) = sorted_with_map(&vertices);
    let mut vertex_duals = vec![0; vertices.len()];
    for (old, &new) in vmap.iter().enumerate() {
        vertex_duals[new] = old;
    }
    let (rsorted, rmap) = sorted_with_map(&rays);
    let mut entries: Vec<(CellIndices, u64, Vec<usize>)> = cells
        .into_iter()
        .zip(mults)
        .zip(cell_duals)
        .map(|((c, m), e)| {
            let mut v: Vec<usize> = c.vertices.iter().map(|&i| vmap[i]).collect();
            let mut r: Vec<usize> = c.rays.iter().map(|&i| rmap[i]).collect();
            v.sort();
            r.sort();
            (CellIndices { vertices: v, rays: r }, m, e)
        })
        .collect();
    entries.sort();
    let complex = WeightedPolyhedralComplex {
        ambient_dim: n,
        vertices: vsorted,
        rays: rsorted,
        lineality,
        maximal_cells: entries.iter().map(|e| e.0.clone()).collect(),
        multiplicities: entries.iter().map(|e| e.1).collect(),
    };
    Ok(TropicalHypersurface {
        complex,
        dual,
        source: f.clone(),
        vertex_duals,
        cell_duals: entries.into_iter().map(|e| e.2).collect(),
    })
}

/// True iff the optimum of `f` at `w` is attained by at least two terms.
pub fn contains(f: &TropicalPolynomial, w: &[Rat]) -> Result<bool> {
    Ok(f.optimal_terms(w)?.len() >= 2)
}
