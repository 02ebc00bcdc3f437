//! Rational polyhedra in H- and V-representation, and conversion between them.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::hull::hull;
use crate::linalg::{nullspace, project_out, rank, rref};
use crate::lp::{max_common_slack, maximize, Constraint, LpOutcome};
use crate::rational::{dot, primitive_from_rat, to_rat_vec, Int, Rat};

/// `{x : a.x <= b for ineqs, a.x = b for eqs}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    pub ambient_dim: usize,
    pub ineqs: Vec<Constraint>,
    pub eqs: Vec<Constraint>,
}

impl Polyhedron {
    pub fn new(ambient_dim: usize, ineqs: Vec<Constraint>, eqs: Vec<Constraint>) -> Self {
        Self {
            ambient_dim,
            ineqs,
            eqs,
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b) && self.eqs.iter().all(|(a, b)| dot(a, x) == *b)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(o.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(o.eqs.iter().cloned());
        Self::new(self.ambient_dim, ineqs, eqs)
    }

    pub fn translate(&self, t: &[Rat]) -> Self {
        let shift = |(a, b): &Constraint| (a.clone(), b + dot(a, t));
        Self::new(
            self.ambient_dim,
            self.ineqs.iter().map(shift).collect(),
            self.eqs.iter().map(shift).collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        max_common_slack(self.ambient_dim, &[], &self.eqs).is_none()
            || crate::lp::feasible_point(self.ambient_dim, &self.ineqs, &self.eqs).is_none()
    }

    /// Flags of inequalities that hold with equality on the whole polyhedron,
    /// or `None` if it is empty.
    pub fn implicit_equalities(&self) -> Option<Vec<bool>> {
        let n = self.ambient_dim;
        let m = self.ineqs.len();
        let mut implicit = vec![false; m];
        let mut undecided: Vec<usize> = (0..m).collect();
        crate::lp::feasible_point(n, &self.ineqs, &self.eqs)?;
        while !undecided.is_empty() {
            // max sum t_i, a_i x + t_i <= b_i, 0 <= t_i <= 1 for undecided i.
            let u = undecided.len();
            let width = n + u;
            let mut ineqs: Vec<Constraint> = Vec::new();
            let mut pos = vec![None; m];
            for (k, &i) in undecided.iter().enumerate() {
                pos[i] = Some(k);
            }
            for (i, (a, b)) in self.ineqs.iter().enumerate() {
                let mut row = a.clone();
                row.resize(width, Rat::zero());
                if let Some(k) = pos[i] {
                    row[n + k] = Rat::one();
                }
                ineqs.push((row, b.clone()));
            }
            for k in 0..u {
                let mut lo = vec![Rat::zero(); width];
                lo[n + k] = -Rat::one();
                ineqs.push((lo.clone(), Rat::zero()));
                lo[n + k] = Rat::one();
                ineqs.push((lo, Rat::one()));
            }
            let eqs: Vec<Constraint> = self
                .eqs
                .iter()
                .map(|(a, b)| {
                    let mut row = a.clone();
                    row.resize(width, Rat::zero());
                    (row, b.clone())
                })
                .collect();
            let mut c = vec![Rat::zero(); width];
            for x in c.iter_mut().skip(n) {
                *x = Rat::one();
            }
            let LpOutcome::Optimal { point, .. } = maximize(width, &ineqs, &eqs, &c) else {
                unreachable!("bounded and feasible");
            };
            let x = &point[..n];
            let before = undecided.len();
            undecided.retain(|&i| {
                let (a, b) = &self.ineqs[i];
                dot(a, x) == *b
            });
            if undecided.len() == before {
                for &i in &undecided {
                    implicit[i] = true;
                }
                break;
            }
        }
        Some(implicit)
    }

    /// Equations of the affine hull (explicit plus implicit), or `None` if empty.
    pub fn affine_hull(&self) -> Option<Vec<Constraint>> {
        let imp = self.implicit_equalities()?;
        let mut eqs = self.eqs.clone();
        eqs.extend(
            self.ineqs
                .iter()
                .zip(&imp)
                .filter(|(_, &f)| f)
                .map(|(c, _)| c.clone()),
        );
        Some(eqs)
    }

    pub fn dim(&self) -> Option<usize> {
        let eqs = self.affine_hull()?;
        let rows: Vec<Vec<Rat>> = eqs.into_iter().map(|(a, _)| a).collect();
        Some(self.ambient_dim - rank(&rows, self.ambient_dim))
    }

    /// Basis of the linear space parallel to the affine hull.
    pub fn direction_space(&self) -> Option<Vec<Vec<Rat>>> {
        let eqs = self.affine_hull()?;
        let rows: Vec<Vec<Rat>> = eqs.into_iter().map(|(a, _)| a).collect();
        Some(nullspace(&rows, self.ambient_dim))
    }

    pub fn relint_point(&self) -> Option<Vec<Rat>> {
        let imp = self.implicit_equalities()?;
        let mut eqs = self.eqs.clone();
        let mut strict = Vec::new();
        for (c, &f) in self.ineqs.iter().zip(&imp) {
            if f {
                eqs.push(c.clone());
            } else {
                strict.push(c.clone());
            }
        }
        max_common_slack(self.ambient_dim, &strict, &eqs).map(|(_, x)| x)
    }

    /// Tightening the given inequalities to equalities.
    pub fn restrict(&self, tight: &BTreeSet<usize>) -> Self {
        let mut eqs = self.eqs.clone();
        eqs.extend(tight.iter().map(|&i| self.ineqs[i].clone()));
        Self::new(self.ambient_dim, self.ineqs.clone(), eqs)
    }

    /// Faces of dimension `d`, each keyed by its set of tight inequalities.
    pub fn faces_of_dim(&self, d: usize) -> Vec<(BTreeSet<usize>, Polyhedron)> {
        let Some(imp) = self.implicit_equalities() else {
            return Vec::new();
        };
        let Some(top) = self.dim() else {
            return Vec::new();
        };
        if d > top {
            return Vec::new();
        }
        let start: BTreeSet<usize> = (0..imp.len()).filter(|&i| imp[i]).collect();
        let mut level: Vec<(BTreeSet<usize>, Polyhedron)> = vec![(start, self.clone())];
        let mut cur = top;
        while cur > d {
            let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
            let mut next = Vec::new();
            for (tight, face) in &level {
                for i in 0..self.ineqs.len() {
                    if tight.contains(&i) {
                        continue;
                    }
                    let mut t = tight.clone();
                    t.insert(i);
                    let cand = self.restrict(&t);
                    let Some(imp) = cand.implicit_equalities() else {
                        continue;
                    };
                    let closure: BTreeSet<usize> = (0..imp.len()).filter(|&j| imp[j]).chain(t.iter().copied()).collect();
                    if seen.contains(&closure) {
                        continue;
                    }
                    let cand = self.restrict(&closure);
                    if cand.dim() == Some(cur - 1) {
                        seen.insert(closure.clone());
                        next.push((closure, cand));
                    }
                }
                let _ = face;
            }
            level = next;
            cur -= 1;
        }
        level
    }

    /// Tangent cone at a point of the polyhedron, as a polyhedral cone.
    pub fn tangent_cone(&self, x: &[Rat]) -> Polyhedron {
        let n = self.ambient_dim;
        let ineqs = self
            .ineqs
            .iter()
            .filter(|(a, b)| dot(a, x) == *b)
            .map(|(a, _)| (a.clone(), Rat::zero()))
            .collect();
        let eqs = self.eqs.iter().map(|(a, _)| (a.clone(), Rat::zero())).collect();
        Polyhedron::new(n, ineqs, eqs)
    }

    pub fn recession_cone(&self) -> Polyhedron {
        let zero = |(a, _): &Constraint| (a.clone(), Rat::zero());
        Polyhedron::new(
            self.ambient_dim,
            self.ineqs.iter().map(zero).collect(),
            self.eqs.iter().map(zero).collect(),
        )
    }

    /// V-representation, or `None` if empty.
    pub fn vrep(&self) -> Option<RationalPolyhedron> {
        let n = self.ambient_dim;
        let rows: Vec<Vec<Rat>> = self
            .ineqs
            .iter()
            .chain(self.eqs.iter())
            .map(|(a, _)| a.clone())
            .collect();
        let lin = nullspace(&rows, n);
        let l = lin.len();
        let mut vertices: Vec<Vec<Rat>> = self
            .faces_of_dim(l)
            .into_iter()
            .filter_map(|(_, f)| f.relint_point())
            .map(|x| project_out(&x, &lin))
            .collect();
        if vertices.is_empty() {
            return None;
        }
        vertices.sort();
        vertices.dedup();
        let mut rays: Vec<Vec<Int>> = self
            .recession_cone()
            .faces_of_dim(l + 1)
            .into_iter()
            .filter_map(|(_, f)| f.relint_point())
            .map(|y| primitive_from_rat(&project_out(&y, &lin)))
            .collect();
        rays.sort();
        rays.dedup();
        Some(RationalPolyhedron::new(n, vertices, rays, canonical_lineality(&lin)))
    }
}

/// Integer basis of a rational subspace, canonical for the subspace.
pub fn canonical_lineality(basis: &[Vec<Rat>]) -> Vec<Vec<Int>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let n = basis[0].len();
    let (r, _) = rref(basis, n);
    r.iter().map(|row| primitive_from_rat(row)).collect()
}

/// Polyhedron given by vertices, primitive rays and a lineality basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalPolyhedron {
    pub ambient_dim: usize,
    #[serde(with = "crate::rational::serde_rat_vecs")]
    pub vertices: Vec<Vec<Rat>>,
    #[serde(with = "crate::rational::serde_int_vecs")]
    pub rays: Vec<Vec<Int>>,
    #[serde(with = "crate::rational::serde_int_vecs")]
    pub lineality: Vec<Vec<Int>>,
}

/// H-representation of a V-polyhedron together with the generators on each facet.
#[derive(Debug, Clone)]
pub struct FacetData {
    pub hrep: Polyhedron,
    /// For each inequality of `hrep`: indices of the vertices and rays on it.
    pub facets: Vec<(Vec<usize>, Vec<usize>)>,
    pub dim: usize,
}

impl RationalPolyhedron {
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Vec<Rat>>,
        rays: Vec<Vec<Int>>,
        lineality: Vec<Vec<Int>>,
    ) -> Self {
        Self {
            ambient_dim,
            vertices,
            rays,
            lineality,
        }
    }

    /// Linear span of the polyhedron's directions: vertex differences, rays, lineality.
    pub fn direction_generators(&self) -> Vec<Vec<Rat>> {
        let mut out: Vec<Vec<Rat>> = Vec::new();
        if let Some(v0) = self.vertices.first() {
            for v in &self.vertices[1..] {
                out.push(v.iter().zip(v0).map(|(a, b)| a - b).collect());
            }
        }
        out.extend(self.rays.iter().map(|r| to_rat_vec(r)));
        out.extend(self.lineality.iter().map(|r| to_rat_vec(r)));
        out
    }

    pub fn dim(&self) -> usize {
        rank(&self.direction_generators(), self.ambient_dim)
    }

    /// Converts to an H-representation through the homogenized cone.
    pub fn facet_data(&self) -> FacetData {
        let n = self.ambient_dim;
        let hom = |v: &[Rat], last: Rat| -> Vec<Rat> {
            let mut h = v.to_vec();
            h.push(last);
            h
        };
        let mut gens: Vec<Vec<Rat>> = self.vertices.iter().map(|v| hom(v, Rat::one())).collect();
        gens.extend(self.rays.iter().map(|r| hom(&to_rat_vec(r), Rat::zero())));
        let lin: Vec<Vec<Rat>> = self.lineality.iter().map(|r| hom(&to_rat_vec(r), Rat::zero())).collect();
        let nv = self.vertices.len();

        let all_rows: Vec<Vec<Rat>> = gens.iter().chain(lin.iter()).cloned().collect();
        let eq_normals = nullspace(&all_rows, n + 1);
        let split = |h: &[Rat]| -> Constraint { (h[..n].to_vec(), -h[n].clone()) };
        let eqs: Vec<Constraint> = eq_normals.iter().map(|h| split(h)).collect();
        let dim = rank(&all_rows, n + 1) - 1;

        // Quotient by lineality, then take the hull of the origin and generators.
        let (lr, lpiv) = rref(&lin, n + 1);
        let keep: Vec<usize> = (0..=n).filter(|c| !lpiv.contains(c)).collect();
        let reduced: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| {
                let mut g = g.clone();
                for (row, &p) in lr.iter().zip(&lpiv) {
                    let f = g[p].clone();
                    if !f.is_zero() {
                        for (x, y) in g.iter_mut().zip(row) {
                            *x -= &f * y;
                        }
                    }
                }
                let kept: Vec<Rat> = keep.iter().map(|&c| g[c].clone()).collect();
                primitive_from_rat(&kept)
            })
            .collect();
        let mut pts = vec![vec![Int::zero(); keep.len()]];
        pts.extend(reduced);
        let h = hull(&pts);

        let mut ineqs = Vec::new();
        let mut facets = Vec::new();
        for f in &h.facets {
            if f.points.first() != Some(&0) {
                continue;
            }
            let on: Vec<usize> = f.points[1..].iter().map(|&i| i - 1).collect();
            let vs: Vec<usize> = on.iter().copied().filter(|&i| i < nv).collect();
            if vs.is_empty() {
                continue;
            }
            let rs: Vec<usize> = on.iter().copied().filter(|&i| i >= nv).map(|i| i - nv).collect();
            let mut rows: Vec<Vec<Rat>> = on.iter().map(|&i| gens[i].clone()).collect();
            rows.extend(lin.iter().cloned());
            let cand = nullspace(&rows, n + 1);
            let off: Vec<usize> = (0..gens.len()).filter(|i| !on.contains(i)).collect();
            let mut chosen = None;
            'search: for h in &cand {
                for &i in &off {
                    let s = dot(h, &gens[i]);
                    if !s.is_zero() {
                        let h = if s.is_positive() { h.iter().map(|x| -x).collect() } else { h.clone() };
                        chosen = Some(h);
                        break 'search;
                    }
                }
            }
            let h = chosen.expect("facet normal separates the remaining generators");
            let (a, b) = split(&h);
            let l = crate::rational::lcm_denominators(a.iter().chain(std::iter::once(&b)));
            let l = Rat::from_integer(l);
            ineqs.push((a.iter().map(|x| x * &l).collect(), &b * &l));
            facets.push((vs, rs));
        }
        FacetData {
            hrep: Polyhedron::new(n, ineqs, eqs),
            facets,
            dim,
        }
    }
}
