//! Stable intersections, intersection numbers and transversality of weighted complexes.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::{check_balancing, WeightedPolyhedralComplex};
use crate::linalg::{int_det, rank};
use crate::lp::{max_common_slack, Constraint};
use crate::polyhedra::{
    integer_kernel, lattice_index, LatticeIndex, Polyhedron, RationalPolyhedron, SublatticeSpan,
};
use crate::rational::{dot, primitive_from_rat, Int, Rat};

/// Retries of the seeded perturbation before giving up.
pub const MAX_PERTURBATION_RETRIES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    User,
    Seeded(u64),
}

/// Direction of the infinitesimal displacement used for stable intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationVector {
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub v: Vec<Rat>,
    pub provenance: Provenance,
}

impl PerturbationVector {
    pub fn user(v: Vec<Rat>) -> Result<Self> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::NonGenericPerturbation);
        }
        Ok(Self {
            v,
            provenance: Provenance::User,
        })
    }

    /// Deterministic vector whose coordinates have distinct large prime denominators.
    pub fn seeded(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            v: seeded_coordinates(&mut rng, n),
            provenance: Provenance::Seeded(seed),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn seeded_coordinates(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    let mut p: u64 = 1_000_000 + rng.gen_range(0..1_000_000);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        p += 1;
        while !is_prime(p) {
            p += 1;
        }
        let mut num: i64 = rng.gen_range(-999_999..=999_999);
        if num == 0 {
            num = 1;
        }
        out.push(Rat::new(Int::from(num), Int::from(p)));
    }
    out
}

/// Per-cell data reused across intersection tests.
struct CellGeom {
    hrep: Polyhedron,
    span: Vec<Vec<Rat>>,
    mult: u64,
}

fn geometry(c: &WeightedPolyhedralComplex) -> Vec<CellGeom> {
    (0..c.maximal_cells.len())
        .map(|i| {
            let cell = c.cell(i);
            CellGeom {
                hrep: cell.facet_data().hrep,
                span: cell.direction_generators(),
                mult: c.multiplicities[i],
            }
        })
        .collect()
}

fn span_lattice(n: usize, span: &[Vec<Rat>]) -> SublatticeSpan {
    SublatticeSpan {
        ambient_dim: n,
        generators: span.iter().map(|g| primitive_from_rat(g)).collect(),
    }
}

/// Places block `b` of width `n` into a vector of `blocks * n` columns.
fn embed(a: &[Rat], b: usize, blocks: usize) -> Vec<Rat> {
    let n = a.len();
    let mut row = vec![Rat::zero(); n * blocks];
    row[b * n..(b + 1) * n].clone_from_slice(a);
    row
}

/// Slack of the local displacement problem at `x`: tangent directions
/// `y_i` of every cell with `y_0 - y_i = shifts[i]`. `None` if infeasible,
/// zero if only feasible on the boundary of the tangent cones.
fn displacement_slack(cells: &[&Polyhedron], x: &[Rat], shifts: &[Vec<Rat>]) -> Option<Rat> {
    let n = x.len();
    let k = cells.len();
    let mut ineqs: Vec<Constraint> = Vec::new();
    let mut eqs: Vec<Constraint> = Vec::new();
    for (b, p) in cells.iter().enumerate() {
        for (a, rhs) in &p.ineqs {
            if dot(a, x) == *rhs {
                ineqs.push((embed(a, b, k), Rat::zero()));
            }
        }
        for (a, _) in &p.eqs {
            eqs.push((embed(a, b, k), Rat::zero()));
        }
    }
    for b in 1..k {
        for j in 0..n {
            let mut row = vec![Rat::zero(); n * k];
            row[j] = Rat::from_integer(1.into());
            row[b * n + j] = Rat::from_integer((-1).into());
            eqs.push((row, shifts[b][j].clone()));
        }
    }
    max_common_slack(n * k, &ineqs, &eqs).map(|(t, _)| t)
}

fn check_same_ambient(a: &WeightedPolyhedralComplex, b: &WeightedPolyhedralComplex) -> Result<usize> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim,
            found: b.ambient_dim,
        });
    }
    Ok(a.ambient_dim)
}

fn index_u64(i: LatticeIndex) -> u64 {
    match i {
        LatticeIndex::Finite(k) => k.to_u64().expect("lattice index fits in u64"),
        LatticeIndex::Infinite => 0,
    }
}

/// Stable intersection `A ∧ B` with respect to the displacement direction `v`.
/// Cells are the faces of dimension `dim A + dim B - n` of pairwise cell
/// intersections that carry positive multiplicity.
pub fn stable_intersection(
    a: &WeightedPolyhedralComplex,
    b: &WeightedPolyhedralComplex,
    v: &PerturbationVector,
) -> Result<WeightedPolyhedralComplex> {
    let n = check_same_ambient(a, b)?;
    if v.v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.v.len(),
        });
    }
    if a.is_empty() || b.is_empty() {
        return Ok(WeightedPolyhedralComplex::empty(n));
    }
    for c in [a, b] {
        if !check_balancing(c)?.balanced {
            return Err(Error::NotBalanced);
        }
    }
    let da = a.dim().ok_or(Error::NotPure)?;
    let db = b.dim().ok_or(Error::NotPure)?;
    if da + db < n {
        return Ok(WeightedPolyhedralComplex::empty(n));
    }
    let e = da + db - n;
    let ga = geometry(a);
    let gb = geometry(b);

    let mut candidates: BTreeMap<RationalPolyhedron, Vec<Rat>> = BTreeMap::new();
    for ca in &ga {
        for cb in &gb {
            let p = ca.hrep.intersect(&cb.hrep);
            match p.dim() {
                Some(d) if d >= e => {}
                _ => continue,
            }
            for (_, face) in p.faces_of_dim(e) {
                if let (Some(vr), Some(x)) = (face.vrep(), face.relint_point()) {
                    candidates.entry(vr).or_insert(x);
                }
            }
        }
    }

    let shifts = vec![vec![Rat::zero(); n], v.v.clone()];
    let mut cells = Vec::new();
    for (cell, x) in candidates {
        let star_a: Vec<&CellGeom> = ga.iter().filter(|c| c.hrep.contains(&x)).collect();
        let star_b: Vec<&CellGeom> = gb.iter().filter(|c| c.hrep.contains(&x)).collect();
        let mut mult = 0u64;
        for t1 in &star_a {
            for t2 in &star_b {
                let Some(slack) = displacement_slack(&[&t1.hrep, &t2.hrep], &x, &shifts) else {
                    continue;
                };
                let mut rows = t1.span.clone();
                rows.extend(t2.span.iter().cloned());
                if slack.is_zero() || rank(&rows, n) < n {
                    return Err(Error::NonGenericPerturbation);
                }
                let idx = lattice_index(&[span_lattice(n, &t1.span), span_lattice(n, &t2.span)])?;
                mult += t1.mult * t2.mult * index_u64(idx);
            }
        }
        if mult > 0 {
            cells.push((cell, mult));
        }
    }
    WeightedPolyhedralComplex::from_cells(n, cells)
}

/// Stable intersection with seeded perturbations, retrying on degenerate directions.
pub fn stable_intersection_seeded(
    a: &WeightedPolyhedralComplex,
    b: &WeightedPolyhedralComplex,
    seed: u64,
) -> Result<WeightedPolyhedralComplex> {
    let n = check_same_ambient(a, b)?;
    for attempt in 0..MAX_PERTURBATION_RETRIES as u64 {
        let v = PerturbationVector::seeded(n, seed.wrapping_add(attempt));
        match stable_intersection(a, b, &v) {
            Err(Error::NonGenericPerturbation) => continue,
            other => return other,
        }
    }
    Err(Error::PerturbationExhausted(MAX_PERTURBATION_RETRIES))
}

fn codims(complexes: &[WeightedPolyhedralComplex], n: usize) -> Result<Option<usize>> {
    let mut sum = 0;
    for c in complexes {
        if c.ambient_dim != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.ambient_dim,
            });
        }
        if c.is_empty() {
            return Ok(None);
        }
        sum += n - c.dim().ok_or(Error::NotPure)?;
    }
    Ok(Some(sum))
}

/// Total multiplicity of the stable intersection of complexes of complementary
/// codimension, displacing complex `i` by `shifts[i]` (the first shift is ignored).
pub fn intersection_number_with(
    complexes: &[WeightedPolyhedralComplex],
    shifts: &[Vec<Rat>],
) -> Result<Int> {
    let Some(first) = complexes.first() else {
        return Err(Error::EmptyInput("intersection number of no complexes"));
    };
    let n = first.ambient_dim;
    let Some(sum) = codims(complexes, n)? else {
        return Ok(Int::zero());
    };
    if sum != n {
        return Err(Error::NotComplementary {
            codim_sum: sum,
            ambient: n,
        });
    }
    let k = complexes.len();
    if shifts.len() != k || shifts.iter().any(|s| s.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: shifts.len(),
        });
    }
    let mut shifts = shifts.to_vec();
    shifts[0] = vec![Rat::zero(); n];
    let geoms: Vec<Vec<CellGeom>> = complexes.iter().map(geometry).collect();
    let orth: Vec<Vec<Vec<Vec<Int>>>> = geoms
        .iter()
        .map(|g| {
            g.iter()
                .map(|c| {
                    let gens: Vec<Vec<Int>> = c.span.iter().map(|s| primitive_from_rat(s)).collect();
                    integer_kernel(&gens, n)
                })
                .collect()
        })
        .collect();
    let mut total = Int::zero();
    let mut chosen = Vec::with_capacity(k);
    let universe = Polyhedron::new(n, Vec::new(), Vec::new());
    search(&geoms, &orth, &shifts, &universe, &mut chosen, &mut total)?;
    Ok(total)
}

fn search(
    geoms: &[Vec<CellGeom>],
    orth: &[Vec<Vec<Vec<Int>>>],
    shifts: &[Vec<Rat>],
    current: &Polyhedron,
    chosen: &mut Vec<usize>,
    total: &mut Int,
) -> Result<()> {
    let level = chosen.len();
    if level == geoms.len() {
        return leaf(geoms, orth, shifts, current, chosen, total);
    }
    for (i, c) in geoms[level].iter().enumerate() {
        let next = current.intersect(&c.hrep);
        if next.is_empty() {
            continue;
        }
        chosen.push(i);
        search(geoms, orth, shifts, &next, chosen, total)?;
        chosen.pop();
    }
    Ok(())
}

fn leaf(
    geoms: &[Vec<CellGeom>],
    orth: &[Vec<Vec<Vec<Int>>>],
    shifts: &[Vec<Rat>],
    meet: &Polyhedron,
    chosen: &[usize],
    total: &mut Int,
) -> Result<()> {
    let Some(x) = meet.relint_point() else {
        return Ok(());
    };
    let cells: Vec<&Polyhedron> = chosen.iter().enumerate().map(|(l, &i)| &geoms[l][i].hrep).collect();
    let Some(slack) = displacement_slack(&cells, &x, shifts) else {
        return Ok(());
    };
    let m: Vec<Vec<Int>> = chosen
        .iter()
        .enumerate()
        .flat_map(|(l, &i)| orth[l][i].iter().cloned())
        .collect();
    let det = int_det(&m).abs();
    if slack.is_zero() || det.is_zero() {
        return Err(Error::NonGenericPerturbation);
    }
    let mut w = det;
    for (l, &i) in chosen.iter().enumerate() {
        w *= Int::from(geoms[l][i].mult);
    }
    *total += w;
    Ok(())
}

/// Intersection number with seeded perturbations and bounded retries.
pub fn intersection_number(complexes: &[WeightedPolyhedralComplex], seed: u64) -> Result<Int> {
    let Some(first) = complexes.first() else {
        return Err(Error::EmptyInput("intersection number of no complexes"));
    };
    let n = first.ambient_dim;
    for attempt in 0..MAX_PERTURBATION_RETRIES as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let shifts: Vec<Vec<Rat>> = (0..complexes.len()).map(|_| seeded_coordinates(&mut rng, n)).collect();
        match intersection_number_with(complexes, &shifts) {
            Err(Error::NonGenericPerturbation) => continue,
            other => return other,
        }
    }
    Err(Error::PerturbationExhausted(MAX_PERTURBATION_RETRIES))
}

/// True iff every nonempty intersection of maximal cells has the expected
/// dimension and meets both relative interiors.
pub fn is_transverse(a: &WeightedPolyhedralComplex, b: &WeightedPolyhedralComplex) -> Result<bool> {
    let n = check_same_ambient(a, b)?;
    let ga = geometry(a);
    let gb = geometry(b);
    for ca in &ga {
        let da = rank(&ca.span, n);
        for cb in &gb {
            let p = ca.hrep.intersect(&cb.hrep);
            let Some(d) = p.dim() else {
                continue;
            };
            let db = rank(&cb.span, n);
            if da + db < n || d != da + db - n {
                return Ok(false);
            }
            let mut eqs = ca.hrep.eqs.clone();
            eqs.extend(cb.hrep.eqs.iter().cloned());
            let mut ineqs = ca.hrep.ineqs.clone();
            ineqs.extend(cb.hrep.ineqs.iter().cloned());
            match max_common_slack(n, &ineqs, &eqs) {
                Some((t, _)) if t.is_positive() || ineqs.is_empty() => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::tropical_hypersurface;
    use crate::rational::{rat, rat_vec};
    use crate::semiring::{Convention, TropicalPolynomial};

    fn poly(conv: Convention, terms: &[(&[i64], i64)]) -> TropicalPolynomial {
        let n = terms[0].0.len();
        TropicalPolynomial::new(conv, n, terms.iter().map(|(a, c)| (a.to_vec(), rat(*c)))).unwrap()
    }

    fn curve(conv: Convention, terms: &[(&[i64], i64)]) -> WeightedPolyhedralComplex {
        tropical_hypersurface(&poly(conv, terms)).unwrap().complex
    }

    fn line(a: i64, b: i64) -> WeightedPolyhedralComplex {
        curve(Convention::Min, &[(&[1, 0], a), (&[0, 1], b), (&[0, 0], 0)])
    }

    #[test]
    fn line_with_itself() {
        let l = line(0, 0);
        let v = PerturbationVector::user(rat_vec(&[1, 2])).unwrap();
        let s = stable_intersection(&l, &l, &v).unwrap();
        assert_eq!(s.vertices, vec![rat_vec(&[0, 0])]);
        assert_eq!(s.multiplicities, vec![1]);
        assert!(!is_transverse(&l, &l).unwrap());
        // Displacing along a shared ray is degenerate.
        let bad = PerturbationVector::user(rat_vec(&[1, 1])).unwrap();
        assert_eq!(stable_intersection(&l, &l, &bad), Err(Error::NonGenericPerturbation));
        assert_eq!(intersection_number(&[l.clone(), l], 7).unwrap(), Int::from(1));
    }

    #[test]
    fn translated_lines_are_transverse() {
        let a = line(0, 0);
        let b = line(2, -3);
        assert!(is_transverse(&a, &b).unwrap());
        let s = stable_intersection_seeded(&a, &b, 1).unwrap();
        assert_eq!(s.total_multiplicity(), 1);
        let plain: Vec<Vec<Rat>> = s.vertices.clone();
        assert_eq!(plain.len(), 1);
    }

    #[test]
    fn conic_and_line_meet_twice() {
        let conic = curve(
            Convention::Min,
            &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0), (&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)],
        );
        let l = line(3, -1);
        assert_eq!(stable_intersection_seeded(&conic, &l, 3).unwrap().total_multiplicity(), 2);
        assert_eq!(intersection_number(&[conic, l], 3).unwrap(), Int::from(2));
    }

    #[test]
    fn hyperplanes_in_three_space() {
        let h = |c: [i64; 3]| {
            curve(
                Convention::Min,
                &[(&[1, 0, 0], c[0]), (&[0, 1, 0], c[1]), (&[0, 0, 1], c[2]), (&[0, 0, 0], 0)],
            )
        };
        let (a, b, c) = (h([0, 0, 0]), h([1, -2, 3]), h([-1, 2, 5]));
        assert_eq!(intersection_number(&[a.clone(), b.clone(), c], 11).unwrap(), Int::from(1));
        let ab = stable_intersection_seeded(&a, &b, 5).unwrap();
        assert_eq!(ab.dim(), Some(1));
        assert!(check_balancing(&ab).unwrap().balanced);
        assert_eq!(
            intersection_number(&[a.clone(), b], 1),
            Err(Error::NotComplementary {
                codim_sum: 2,
                ambient: 3
            })
        );
    }

    #[test]
    fn unbalanced_input_is_rejected() {
        let l = line(0, 0).with_multiplicity(0, 3);
        let v = PerturbationVector::seeded(2, 0);
        assert_eq!(stable_intersection(&l, &line(1, 1), &v), Err(Error::NotBalanced));
    }

    #[test]
    fn seeded_vectors_are_deterministic() {
        assert_eq!(PerturbationVector::seeded(4, 9), PerturbationVector::seeded(4, 9));
        assert_ne!(PerturbationVector::seeded(4, 9), PerturbationVector::seeded(4, 10));
        let v = PerturbationVector::seeded(4, 9).v;
        let dens: std::collections::BTreeSet<Int> = v.iter().map(|x| x.denom().clone()).collect();
        assert_eq!(dens.len(), 4);
    }
}
