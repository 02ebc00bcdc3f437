//! Normalized mixed volume via mixed cells of a random lifting.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{det, solve_unique};
use crate::lp::{feasible_point, Constraint};
use crate::polyhedra::{integer_points, RationalPolytope};
use crate::rational::{dot, Int, Rat};

/// Seeds tried before a lifting is declared degenerate.
pub const MAX_LIFTING_ATTEMPTS: u64 = 16;

/// Default seed for the lifting when none is given.
pub const DEFAULT_LIFTING_SEED: u64 = 0x5eed;

pub fn mixed_volume(polytopes: &[RationalPolytope]) -> Result<Rat> {
    mixed_volume_seeded(polytopes, DEFAULT_LIFTING_SEED)
}

/// Normalized mixed volume, so that `MV(P, ..., P) = n! vol(P)`.
pub fn mixed_volume_seeded(polytopes: &[RationalPolytope], seed: u64) -> Result<Rat> {
    let n = polytopes.len();
    if n == 0 {
        return Err(Error::EmptyInput("mixed volume of no polytopes"));
    }
    if let Some(p) = polytopes.iter().find(|p| p.ambient_dim != n) {
        return Err(Error::PolytopeCount {
            expected: p.ambient_dim,
            found: n,
        });
    }
    let mut scale = Int::one();
    let mut supports = Vec::with_capacity(n);
    for p in polytopes {
        let (pts, l) = integer_points(&p.vertices);
        scale *= l;
        supports.push(pts.into_iter().map(|v| v.into_iter().map(Rat::from_integer).collect()).collect::<Vec<Vec<Rat>>>());
    }
    if supports.iter().any(|s| s.len() < 2) {
        return Ok(Rat::zero());
    }
    for attempt in 0..MAX_LIFTING_ATTEMPTS {
        match lifted_mixed_volume(&supports, seed.wrapping_add(attempt)) {
            Err(Error::DegenerateLifting) => continue,
            Ok(v) => return Ok(Rat::from_integer(v) / Rat::from_integer(scale)),
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateLifting)
}

struct Lifted<'a> {
    points: &'a [Vec<Rat>],
    heights: Vec<Rat>,
}

impl Lifted<'_> {
    /// Inner normal `(w, 1)` selects exactly the pair `(a, b)` among the lower faces.
    fn edge_constraints(&self, a: usize, b: usize) -> (Vec<Constraint>, Constraint) {
        let pa = &self.points[a];
        let ha = &self.heights[a];
        let eq = (
            self.points[b].iter().zip(pa).map(|(x, y)| x - y).collect(),
            ha - &self.heights[b],
        );
        let ineqs = (0..self.points.len())
            .filter(|&c| c != a && c != b)
            .map(|c| {
                (
                    pa.iter().zip(&self.points[c]).map(|(x, y)| x - y).collect(),
                    &self.heights[c] - ha,
                )
            })
            .collect();
        (ineqs, eq)
    }
}

fn lifted_mixed_volume(supports: &[Vec<Vec<Rat>>], seed: u64) -> Result<Int> {
    let n = supports.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lifts: Vec<Lifted> = supports
        .iter()
        .map(|s| Lifted {
            points: s,
            heights: (0..s.len()).map(|_| Rat::from_integer(rng.gen_range(0i64..1 << 24).into())).collect(),
        })
        .collect();
    // Lower edges of each lifted polytope on its own.
    let mut edges: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    for l in &lifts {
        let mut es = Vec::new();
        for a in 0..l.points.len() {
            for b in a + 1..l.points.len() {
                let (ineqs, eq) = l.edge_constraints(a, b);
                if feasible_point(n, &ineqs, &[eq]).is_some() {
                    es.push((a, b));
                }
            }
        }
        edges.push(es);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| edges[i].len());
    let mut search = Search {
        lifts: &lifts,
        edges: &edges,
        order: &order,
        ineqs: Vec::new(),
        eqs: Vec::new(),
        picked: Vec::with_capacity(n),
        total: Int::zero(),
    };
    search.descend()?;
    Ok(search.total)
}

struct Search<'a> {
    lifts: &'a [Lifted<'a>],
    edges: &'a [Vec<(usize, usize)>],
    order: &'a [usize],
    ineqs: Vec<Constraint>,
    eqs: Vec<Constraint>,
    /// Edge index chosen for each polytope so far, in `order`.
    picked: Vec<usize>,
    total: Int,
}

impl Search<'_> {
    fn descend(&mut self) -> Result<()> {
        let n = self.lifts.len();
        let level = self.picked.len();
        if level == n {
            return self.leaf();
        }
        let i = self.order[level];
        for (e, &(a, b)) in self.edges[i].iter().enumerate() {
            let (more, eq) = self.lifts[i].edge_constraints(a, b);
            let k = self.ineqs.len();
            self.ineqs.extend(more);
            self.eqs.push(eq);
            if feasible_point(n, &self.ineqs, &self.eqs).is_some() {
                self.picked.push(e);
                self.descend()?;
                self.picked.pop();
            }
            self.eqs.pop();
            self.ineqs.truncate(k);
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        let m: Vec<Vec<Rat>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let d = det(&m);
        if d.is_zero() {
            return Err(Error::DegenerateLifting);
        }
        let rhs: Vec<Rat> = self.eqs.iter().map(|(_, b)| b.clone()).collect();
        let w = solve_unique(&m, &rhs).expect("nonsingular");
        // Ties with a third point mean the lifting is not generic.
        if self.ineqs.iter().any(|(a, b)| dot(a, &w) == *b) {
            return Err(Error::DegenerateLifting);
        }
        self.total += d.abs().to_integer();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{minkowski_sum, normalized_volume};
    use crate::rational::{frac, rat};
    use proptest::prelude::*;

    fn poly(v: &[Vec<i64>]) -> RationalPolytope {
        RationalPolytope::from_i64(v).unwrap()
    }

    fn simplex(n: usize) -> RationalPolytope {
        let mut v = vec![vec![0i64; n]];
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            v.push(e);
        }
        poly(&v)
    }

    /// Sum over nonempty subsets of (-1)^(n-|J|) times the Euclidean volume of the partial Minkowski sum.
    fn inclusion_exclusion(ps: &[RationalPolytope]) -> Rat {
        let n = ps.len();
        let mut total = Rat::zero();
        for mask in 1u32..(1 << n) {
            let mut sum: Option<RationalPolytope> = None;
            for (i, p) in ps.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum = Some(match sum {
                        None => p.clone(),
                        Some(s) => minkowski_sum(&s, p).unwrap(),
                    });
                }
            }
            let v = normalized_volume(&sum.unwrap()) / factorial(n);
            if (n - mask.count_ones() as usize).is_multiple_of(2) {
                total += v;
            } else {
                total -= v;
            }
        }
        total
    }

    fn factorial(n: usize) -> Rat {
        (1..=n as i64).map(rat).product()
    }

    #[test]
    fn basic_values() {
        for n in 1..5 {
            let ps = vec![simplex(n); n];
            assert_eq!(mixed_volume(&ps).unwrap(), rat(1));
        }
        let sq = poly(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(mixed_volume(&[sq.clone(), sq.clone()]).unwrap(), rat(2));
        assert_eq!(inclusion_exclusion(&[sq.clone(), sq]), rat(2));
        let two = poly(&[vec![0, 0], vec![2, 0], vec![0, 2]]);
        assert_eq!(mixed_volume(&[two.clone(), two]).unwrap(), rat(4));
        let seg = poly(&[vec![0, 0], vec![1, 0]]);
        assert_eq!(mixed_volume(&[seg.clone(), seg]).unwrap(), rat(0));
        let half = crate::polyhedra::convex_hull(&[
            vec![rat(0), rat(0)],
            vec![frac(1, 2), rat(0)],
            vec![rat(0), frac(1, 2)],
        ])
        .unwrap();
        assert_eq!(mixed_volume(&[half.clone(), half]).unwrap(), frac(1, 4));
        assert!(matches!(mixed_volume(&[simplex(2)]), Err(Error::PolytopeCount { .. })));
    }

    fn cloud(n: usize) -> impl Strategy<Value = RationalPolytope> {
        proptest::collection::vec(proptest::collection::vec(-2i64..3, n), 1..6).prop_map(|v| poly(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn agrees_with_inclusion_exclusion_2d(a in cloud(2), b in cloud(2)) {
            let ps = [a, b];
            prop_assert_eq!(mixed_volume(&ps).unwrap(), inclusion_exclusion(&ps));
        }

        #[test]
        fn agrees_with_inclusion_exclusion_3d(a in cloud(3), b in cloud(3), c in cloud(3)) {
            let ps = [a, b, c];
            let mv = mixed_volume(&ps).unwrap();
            prop_assert_eq!(&mv, &inclusion_exclusion(&ps));
            let permuted = [ps[2].clone(), ps[0].clone(), ps[1].clone()];
            prop_assert_eq!(&mv, &mixed_volume(&permuted).unwrap());
            prop_assert_eq!(&mv, &mixed_volume_seeded(&ps, 99).unwrap());
        }

        #[test]
        fn diagonal_is_normalized_volume(p in cloud(3)) {
            prop_assert_eq!(mixed_volume(&[p.clone(), p.clone(), p.clone()]).unwrap(), normalized_volume(&p));
        }

        #[test]
        fn multilinear_in_first_argument(a in cloud(2), a2 in cloud(2), b in cloud(2)) {
            let sum = minkowski_sum(&a, &a2).unwrap();
            let lhs = mixed_volume(&[sum, b.clone()]).unwrap();
            let rhs = mixed_volume(&[a, b.clone()]).unwrap() + mixed_volume(&[a2, b]).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
