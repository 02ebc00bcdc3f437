//! Acceptance suite. Every criterion prints one PASS or FAIL line; the process
//! exits nonzero if any criterion fails. All comparisons are exact.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tropical_core::hypersurface::{check_balancing, tropical_hypersurface, WeightedPolyhedralComplex};
use tropical_core::intersection::{intersection_number, stable_intersection_seeded};
use tropical_core::io::SystemFile;
use tropical_core::polyhedra::{lattice_index, minkowski_sum, normalized_volume, LatticeIndex, RationalPolytope, SublatticeSpan};
use tropical_core::rational::{Int, Rat};
use tropical_core::rootcount::{generic_root_count, mixed_volume_seeded, nonlinear_resonator_system, RootCountOptions};
use tropical_core::semiring::{trop_add, trop_det, trop_mul, Convention, TropicalMatrix, TropicalNumber, TropicalPolynomial, TropicalValue};
use tropical_core::valuation::{tropicalize, valuate, RatFunc, SemiringMap, UPoly, ValuedField, ValuedScalar};

/// Wall-clock budgets per criterion.
const BUDGET_OSCILLATOR_INSTANCE: Duration = Duration::from_secs(60);
const BUDGET_OSCILLATOR_TOTAL: Duration = Duration::from_secs(600);
const BUDGET_CURVES: Duration = Duration::from_secs(1);
const BUDGET_STABLE_INTERSECTION: Duration = Duration::from_secs(5);
const BUDGET_TRANSVERSAL_EACH: Duration = Duration::from_secs(1);
const BUDGET_LATTICE: Duration = Duration::from_secs(1);
const BUDGET_MIXED_VOLUME: Duration = Duration::from_secs(120);
const BUDGET_PROPERTIES: Duration = Duration::from_secs(120);
const BUDGET_INTERSECTION_NUMBER: Duration = Duration::from_secs(120);

/// Seeds for the perturbation-independence check.
const PERTURBATION_SEEDS: [u64; 3] = [1, 2024, 987_654_321];
const MV_INSTANCES: usize = 50;
const MV_SEED: u64 = 6;
const SEMIRING_TRIPLES: usize = 1000;
const DET_INSTANCES: usize = 100;
const VALUATION_PAIRS: usize = 1000;
const INTERSECTION_PAIRS: usize = 25;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);
/// A cell by its vertex coordinates and ray directions.
type CellKey = (Vec<Vec<Rat>>, Vec<Vec<Int>>);

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn load(name: &str) -> SystemFile {
    SystemFile::parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn tropical(name: &str, index: usize) -> TropicalPolynomial {
    let f = load(name);
    tropicalize(&f.polynomial(index).unwrap(), &SemiringMap::new(f.field, f.convention)).unwrap()
}

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tropical")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn rv(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

// ---------------------------------------------------------------- oracles

/// Twice the area of a lattice polygon given by arbitrary points (hull then shoelace).
fn doubled_area(points: &[[i64; 2]]) -> i64 {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return 0;
    }
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[i64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let seq: Vec<[i64; 2]> = if pass == 0 { pts.clone() } else { pts.iter().rev().copied().collect() };
        for p in seq {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let mut s = 0;
    for k in 0..hull.len() {
        let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs()
}

/// Normalized mixed volume of two lattice polygons: area(P+Q) - area(P) - area(Q).
fn planar_mixed_volume(p: &[[i64; 2]], q: &[[i64; 2]]) -> i64 {
    let sum: Vec<[i64; 2]> = p.iter().flat_map(|a| q.iter().map(move |b| [a[0] + b[0], a[1] + b[1]])).collect();
    let twice = doubled_area(&sum) - doubled_area(p) - doubled_area(q);
    assert_eq!(twice % 2, 0);
    twice / 2
}

/// Sum over nonempty subsets J of (-1)^(n-|J|) vol(sum_J P_j), with Euclidean volumes.
fn inclusion_exclusion(ps: &[RationalPolytope]) -> Rat {
    let n = ps.len();
    let fact: Rat = (1..=n as i64).map(rat).product();
    let mut total = rat(0);
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
        let v = normalized_volume(&sum.unwrap()) / &fact;
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += v;
        } else {
            total -= v;
        }
    }
    total
}

fn newton_points(t: &TropicalPolynomial) -> Vec<[i64; 2]> {
    t.terms().keys().map(|a| [a[0], a[1]]).collect()
}

// ---------------------------------------------------------------- criteria

fn oscillator_counts() -> Outcome {
    let dir = std::env::temp_dir().join(format!("tropical-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut slowest = Duration::ZERO;
    for n in 1..=4u32 {
        for m in 1..=4u32 {
            let path = dir.join(format!("oscillator_{n}_{m}.json"));
            let p = path.to_str().unwrap();
            let (code, _) = bin(&["oscillator", "--n", &n.to_string(), "--m", &m.to_string(), "--out", p]);
            ensure(code == 0, || format!("oscillator n={n} m={m} exited {code}"))?;
            let start = Instant::now();
            let (code, out) = bin(&["root-count", p]);
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(code == 0, || format!("root-count n={n} m={m} exited {code}"))?;
            let expected = 2 * m * n + 1;
            ensure(out.trim() == expected.to_string(), || {
                format!("n={n} m={m}: got {}, expected {expected}", out.trim())
            })?;
            ensure(took <= BUDGET_OSCILLATOR_INSTANCE, || format!("n={n} m={m} took {took:?}"))?;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("16/16 instances equal 2mn+1, slowest {slowest:.2?}"))
}

fn curve_reproduction() -> Outcome {
    let expect = |name: &str, vertices: [[i64; 2]; 3], doubled: &[(&[usize], &[[i64; 2]])]| -> Result<(), String> {
        let h = tropical_hypersurface(&tropical(name, 0)).map_err(|e| e.to_string())?;
        let c = &h.complex;
        let got: BTreeSet<Vec<Rat>> = c.vertices.iter().cloned().collect();
        let want: BTreeSet<Vec<Rat>> = vertices.iter().map(|v| rv(v)).collect();
        ensure(got == want, || format!("{name}: vertices {got:?}"))?;
        // Cells of multiplicity two, by vertex coordinates and ray directions.
        let twos: BTreeSet<CellKey> = c
            .maximal_cells
            .iter()
            .zip(&c.multiplicities)
            .filter(|(_, &m)| m == 2)
            .map(|(cell, _)| {
                (
                    cell.vertices.iter().map(|&i| c.vertices[i].clone()).collect(),
                    cell.rays.iter().map(|&i| c.rays[i].clone()).collect(),
                )
            })
            .collect();
        let want: BTreeSet<CellKey> = doubled
            .iter()
            .map(|(vs, rays)| {
                (
                    vs.iter().map(|&i| rv(&vertices[i])).collect(),
                    rays.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect(),
                )
            })
            .collect();
        ensure(twos == want, || format!("{name}: multiplicity-2 cells {twos:?}"))?;
        ensure(c.multiplicities.iter().all(|&m| m == 1 || m == 2), || format!("{name}: multiplicities"))?;
        Ok(())
    };
    // Vertices sorted lexicographically, as stored.
    expect(
        "curve_f.json",
        [[-3, -1], [-2, 0], [0, 0]],
        &[(&[1, 2], &[]), (&[2], &[[0, -1]]), (&[2], &[[1, 1]])],
    )?;
    expect(
        "curve_g.json",
        [[-1, -2], [-1, -1], [0, -4]],
        &[(&[0, 1], &[]), (&[1], &[[-1, 0]]), (&[1], &[[1, 1]])],
    )?;
    Ok("vertex sets and the three multiplicity-2 cells of each curve match".into())
}

fn stable_intersection_reproduction() -> Outcome {
    let (tf, tg) = (tropical("curve_f.json", 0), tropical("curve_g.json", 0));
    let (hf, hg) = (tropical_hypersurface(&tf).unwrap(), tropical_hypersurface(&tg).unwrap());
    let mut outputs = Vec::new();
    for seed in PERTURBATION_SEEDS {
        let meet = stable_intersection_seeded(&hf.complex, &hg.complex, seed).map_err(|e| e.to_string())?;
        ensure(meet.dim() == Some(0), || format!("seed {seed}: dimension {:?}", meet.dim()))?;
        ensure(meet.vertices.len() == 4, || format!("seed {seed}: {} points", meet.vertices.len()))?;
        outputs.push(meet);
    }
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "output depends on the seed".into())?;
    let total = outputs[0].total_multiplicity() as i64;
    let oracle = planar_mixed_volume(&newton_points(&tf), &newton_points(&tg));
    ensure(total == oracle, || format!("total multiplicity {total}, mixed volume {oracle}"))?;
    Ok(format!("4 points for seeds {PERTURBATION_SEEDS:?}, total multiplicity {total} = mixed volume"))
}

fn transversality_verdicts() -> Outcome {
    let cases = [
        ("transverse_lines.json", true),
        ("defective_lines.json", false),
        ("shared_ray_lines.json", false),
    ];
    for (name, expected) in cases {
        let start = Instant::now();
        let (code, out) = bin(&["--json", "transversal", fixture(name).to_str().unwrap()]);
        let took = start.elapsed();
        ensure(code == 0, || format!("{name}: exit {code}"))?;
        let v: Value = serde_json::from_str(&out).map_err(|e| format!("{name}: {e}"))?;
        ensure(v["transverse"] == Value::Bool(expected), || format!("{name}: {out}"))?;
        let witness = &v["witness"];
        if expected {
            ensure(witness.is_null(), || format!("{name}: unexpected witness"))?;
        } else {
            let deficit = witness["deficit"].as_u64().unwrap_or(0);
            let dims: u64 = witness["cell"]["summand_dims"]
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_u64).sum())
                .unwrap_or(0);
            let dim = witness["cell"]["dim"].as_u64().unwrap_or(u64::MAX);
            ensure(deficit > 0 && dims == dim + deficit, || format!("{name}: witness {witness}"))?;
        }
        ensure(took <= BUDGET_TRANSVERSAL_EACH, || format!("{name} took {took:?}"))?;
    }
    Ok("true, false with witness, false with witness".into())
}

fn lattice_indices() -> Outcome {
    for (n, m) in [(1usize, 2usize), (2, 2), (2, 3)] {
        // Coordinates x1, x2, w, y1..yn, z1..zn.
        let dim = 2 * n + 3;
        let e = |k: usize| {
            let mut v = vec![0i64; dim];
            v[k] = 1;
            v
        };
        let (x1, x2, w) = (0, 1, 2);
        let y = |i: usize| 2 + i;
        let z = |i: usize| 2 + n + i;
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(p, q)| p + q).collect::<Vec<_>>();
        let mut ray = e(x1);
        for i in 1..=n {
            ray = add(&ray, &e(y(i)));
        }
        let mut lin = add(&e(x1), &e(x2));
        lin[w] = m as i64;
        for i in 1..=n {
            lin[y(i)] = (m * i + 1) as i64;
            lin[z(i)] = (m * i + 1) as i64;
        }
        let sigma = SublatticeSpan::from_i64(dim, &[ray, lin]).unwrap();
        let mut t1 = vec![add(&add(&e(x1), &e(y(n))), &e(z(n))), e(x2), e(w)];
        t1.extend((1..n).map(|i| e(y(i))));
        t1.extend((1..n).map(|i| e(z(i))));
        let mut t2 = vec![add(&add(&e(x1), &e(x2)), &e(z(n))), e(w)];
        t2.extend((1..=n).map(|i| e(y(i))));
        t2.extend((1..n).map(|i| e(z(i))));
        let mut t3 = vec![e(w)];
        t3.extend((1..=n).map(|i| e(y(i))));
        t3.extend((1..=n).map(|i| e(z(i))));
        let mn = Int::from(m * n);
        let expected = [mn.clone(), mn, Int::from(1)];
        let mut sum = Int::from(0);
        for (k, (tau, want)) in [t1, t2, t3].into_iter().zip(expected).enumerate() {
            let tau = SublatticeSpan::from_i64(dim, &tau).unwrap();
            let got = lattice_index(&[tau, sigma.clone()]).map_err(|e| e.to_string())?;
            ensure(got == LatticeIndex::Finite(want.clone()), || {
                format!("n={n} m={m} pair {}: {got:?}, expected {want}", k + 1)
            })?;
            sum += want;
        }
        let count = generic_root_count(&nonlinear_resonator_system(n, m).unwrap(), RootCountOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(sum == count, || format!("n={n} m={m}: indices sum to {sum}, root count {count}"))?;
    }
    Ok("indices mn, mn, 1 for (1,2), (2,2), (2,3); sums equal the root counts".into())
}

fn random_polytope(rng: &mut ChaCha8Rng, dim: usize) -> RationalPolytope {
    let k = rng.gen_range(1..=8);
    let pts: Vec<Vec<i64>> = (0..k).map(|_| (0..dim).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    RationalPolytope::from_i64(&pts).unwrap()
}

fn mixed_volume_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(MV_SEED);
    let mut nonzero = 0;
    for i in 0..MV_INSTANCES {
        let dim = 1 + i % 4;
        let ps: Vec<RationalPolytope> = (0..dim).map(|_| random_polytope(&mut rng, dim)).collect();
        let mv = mixed_volume_seeded(&ps, i as u64).map_err(|e| e.to_string())?;
        let oracle = inclusion_exclusion(&ps);
        ensure(mv == oracle, || format!("instance {i}: mixed cells {mv}, inclusion-exclusion {oracle}"))?;
        nonzero += usize::from(mv != rat(0));
        let diag = vec![ps[0].clone(); dim];
        let d = mixed_volume_seeded(&diag, i as u64).map_err(|e| e.to_string())?;
        ensure(d == normalized_volume(&ps[0]), || format!("instance {i}: diagonal {d}"))?;
    }
    Ok(format!("{MV_INSTANCES} instances agree ({nonzero} nonzero), diagonal identity holds"))
}

fn random_tropical(rng: &mut ChaCha8Rng, c: Convention) -> TropicalNumber {
    if rng.gen_bool(0.1) {
        TropicalNumber::infinite(c)
    } else {
        TropicalNumber::finite(Rat::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=6).into()), c)
    }
}

fn semiring_axioms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for c in [Convention::Min, Convention::Max] {
        let zero = TropicalNumber::infinite(c);
        let one = TropicalNumber::one(c);
        for _ in 0..SEMIRING_TRIPLES {
            let [a, b, d] = [0; 3].map(|_| random_tropical(rng, c));
            let add = |x: &TropicalNumber, y: &TropicalNumber| trop_add(x, y).unwrap();
            let mul = |x: &TropicalNumber, y: &TropicalNumber| trop_mul(x, y).unwrap();
            let checks = [
                add(&add(&a, &b), &d) == add(&a, &add(&b, &d)),
                mul(&mul(&a, &b), &d) == mul(&a, &mul(&b, &d)),
                add(&a, &b) == add(&b, &a),
                mul(&a, &b) == mul(&b, &a),
                mul(&a, &add(&b, &d)) == add(&mul(&a, &b), &mul(&a, &d)),
                add(&a, &zero) == a,
                mul(&a, &one) == a,
                mul(&a, &zero) == zero,
                add(&a, &a) == a,
            ];
            ensure(checks.iter().all(|&x| x), || format!("{c}: axioms fail on {a}, {b}, {d}"))?;
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn determinants(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for i in 0..DET_INSTANCES {
        let n = 1 + i % 7;
        let c = if i % 2 == 0 { Convention::Min } else { Convention::Max };
        let entries: Vec<Vec<TropicalValue>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.15) {
                            TropicalValue::Infinite
                        } else {
                            TropicalValue::Finite(rat(rng.gen_range(-20..=20)))
                        }
                    })
                    .collect()
            })
            .collect();
        let mut best: Option<Rat> = None;
        for p in permutations(n) {
            let mut s = rat(0);
            let mut finite = true;
            for (r, &col) in p.iter().enumerate() {
                match &entries[r][col] {
                    TropicalValue::Finite(q) => s += q,
                    TropicalValue::Infinite => finite = false,
                }
            }
            if finite && best.as_ref().is_none_or(|b| c.prefers(&s, b)) {
                best = Some(s);
            }
        }
        let expected = match best {
            Some(q) => TropicalNumber::finite(q, c),
            None => TropicalNumber::infinite(c),
        };
        let m = TropicalMatrix::new(c, entries).map_err(|e| e.to_string())?;
        let got = trop_det(&m).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("instance {i} ({n}x{n}): {got} vs {expected}"))?;
    }
    Ok(())
}

fn balancing_on_fixtures() -> Result<usize, String> {
    let mut complexes: Vec<WeightedPolyhedralComplex> = Vec::new();
    let files = [
        ("curve_f.json", 1),
        ("curve_g.json", 1),
        ("curve_pair.json", 2),
        ("line.json", 1),
        ("plane.json", 1),
        ("transverse_lines.json", 3),
        ("defective_lines.json", 3),
        ("shared_ray_lines.json", 2),
    ];
    for (name, count) in files {
        for i in 0..count {
            complexes.push(tropical_hypersurface(&tropical(name, i)).unwrap().complex);
        }
    }
    let mut meets = Vec::new();
    for (a, b) in [(0, 1), (2, 3), (4, 6), (6, 7), (9, 10), (12, 13)] {
        let meet = stable_intersection_seeded(&complexes[a], &complexes[b], PERTURBATION_SEEDS[0]).map_err(|e| e.to_string())?;
        meets.push(meet);
    }
    complexes.extend(meets);
    for (i, c) in complexes.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let rep = check_balancing(c).map_err(|e| format!("complex {i}: {e}"))?;
        ensure(rep.balanced, || format!("complex {i} is not balanced at {:?}", rep.violation))?;
    }
    Ok(complexes.len())
}

fn random_scalar(rng: &mut ChaCha8Rng, field: ValuedField) -> ValuedScalar {
    let nz = |rng: &mut ChaCha8Rng| loop {
        let x: i64 = rng.gen_range(-60..=60);
        if x != 0 {
            return x;
        }
    };
    match field {
        ValuedField::TadicQT => {
            let poly = |rng: &mut ChaCha8Rng| {
                let low = rng.gen_range(0..3);
                let mut c = vec![rat(0); low];
                c.extend((0..rng.gen_range(1..4)).map(|_| rat(rng.gen_range(-5..=5))));
                c.push(rat(nz(rng)));
                UPoly::new(c)
            };
            let (num, den) = (poly(rng), poly(rng));
            ValuedScalar::Function(RatFunc::new(num, den).unwrap())
        }
        _ => ValuedScalar::rational(Rat::new(nz(rng).into(), nz(rng).abs().into())),
    }
}

fn valuation_laws(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for field in [ValuedField::TrivialQ, ValuedField::PadicQ(3), ValuedField::TadicQT] {
        for _ in 0..VALUATION_PAIRS {
            let a = random_scalar(rng, field);
            let b = random_scalar(rng, field);
            let (va, vb) = (valuate(field, &a).unwrap(), valuate(field, &b).unwrap());
            let prod = valuate(field, &a.mul(&b)).unwrap();
            ensure(prod == &va + &vb, || format!("{field}: v({a} * {b}) = {prod}"))?;
            let s = a.add(&b);
            if !s.is_zero() {
                let vs = valuate(field, &s).unwrap();
                ensure(vs >= va.clone().min(vb.clone()), || format!("{field}: v({a} + {b}) = {vs}"))?;
            }
        }
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    semiring_axioms(&mut rng)?;
    determinants(&mut rng)?;
    let balanced = balancing_on_fixtures()?;
    valuation_laws(&mut rng)?;
    Ok(format!(
        "semiring axioms x{SEMIRING_TRIPLES} per convention, {DET_INSTANCES} determinants, {balanced} complexes balanced, valuation laws x{VALUATION_PAIRS} per field"
    ))
}

fn random_full_polynomial(rng: &mut ChaCha8Rng, c: Convention) -> TropicalPolynomial {
    loop {
        let k = rng.gen_range(3..=6);
        let pts: Vec<Vec<i64>> = (0..k).map(|_| vec![rng.gen_range(0..=3), rng.gen_range(0..=3)]).collect();
        let arr: Vec<[i64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
        if doubled_area(&arr) == 0 {
            continue;
        }
        let terms = pts.into_iter().map(|p| (p, rat(rng.gen_range(-4..=4))));
        return TropicalPolynomial::new(c, 2, terms).unwrap();
    }
}

fn intersection_numbers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..INTERSECTION_PAIRS {
        let c = if i % 2 == 0 { Convention::Min } else { Convention::Max };
        let (f, g) = (random_full_polynomial(&mut rng, c), random_full_polynomial(&mut rng, c));
        let hf = tropical_hypersurface(&f).unwrap().complex;
        let hg = tropical_hypersurface(&g).unwrap().complex;
        let number = intersection_number(&[hf, hg], i as u64).map_err(|e| e.to_string())?;
        let polys: Vec<RationalPolytope> = [&f, &g]
            .iter()
            .map(|t| RationalPolytope::from_i64(&t.terms().keys().cloned().collect::<Vec<_>>()).unwrap())
            .collect();
        let mv = mixed_volume_seeded(&polys, i as u64).map_err(|e| e.to_string())?;
        let oracle = planar_mixed_volume(&newton_points(&f), &newton_points(&g));
        ensure(Rat::from_integer(number.clone()) == mv && mv == rat(oracle), || {
            format!("pair {i}: intersection number {number}, mixed volume {mv}, oracle {oracle}")
        })?;
    }
    Ok(format!("{INTERSECTION_PAIRS} random pairs: intersection number = mixed volume"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 oscillator root counts", BUDGET_OSCILLATOR_TOTAL, oscillator_counts),
        ("2 plane curve reproduction", BUDGET_CURVES, curve_reproduction),
        ("3 stable intersection of the two curves", BUDGET_STABLE_INTERSECTION, stable_intersection_reproduction),
        ("4 transversality verdicts", 3 * BUDGET_TRANSVERSAL_EACH, transversality_verdicts),
        ("5 oscillator lattice indices", BUDGET_LATTICE, lattice_indices),
        ("6 mixed volume oracle", BUDGET_MIXED_VOLUME, mixed_volume_oracle),
        ("7 property suites", BUDGET_PROPERTIES, property_suites),
        ("8 intersection number = mixed volume", BUDGET_INTERSECTION_NUMBER, intersection_numbers),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if took > budget {
                Err(format!("{msg}; took {took:.2?}, budget {budget:?}"))
            } else {
                Ok(msg)
            }
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
