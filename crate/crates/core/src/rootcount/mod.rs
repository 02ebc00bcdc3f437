//! Horizontally parametrised systems, transversality of the base, the
//! modification into a binomial-linear system, and generic root counts.

mod mixed_volume;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use mixed_volume::{mixed_volume, mixed_volume_seeded, DEFAULT_LIFTING_SEED, MAX_LIFTING_ATTEMPTS};

use crate::error::{Error, Result};
use crate::hypersurface::tropical_hypersurface;
use crate::intersection::intersection_number;
use crate::polyhedra::{mixed_subdivision, LiftedConfiguration, MixedCell, Orientation, RationalPolytope};
use crate::rational::{Int, Rat};
use crate::semiring::{Convention, TropicalPolynomial};
use crate::valuation::{SemiringMap, ValuedField, ValuedPolynomial, ValuedScalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalityCertificate {
    pub verdict: bool,
    pub witness: Option<DefectWitness>,
}

/// A cell of the mixed subdivision whose summand dimensions add up to more
/// than its own dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectWitness {
    pub cell: MixedCell,
    pub deficit: usize,
}

/// `f_i = sum_{j in A_i} a_{ij} s_j` with `s_j = prod_l b_l^{beta_{jl}}`.
///
/// `partition[i]` lists the support indices `A_i` of equation `i`; one support
/// element may appear in several equations, each occurrence with its own parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalSystem {
    pub n_vars: usize,
    pub variables: Vec<String>,
    pub field: ValuedField,
    pub convention: Convention,
    pub base: Vec<ValuedPolynomial>,
    pub beta: Vec<Vec<i64>>,
    pub partition: Vec<Vec<usize>>,
    /// Parameter names, aligned with `partition`.
    pub parameters: Vec<Vec<String>>,
    pub support: Option<Vec<ValuedPolynomial>>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSystem(msg.into())
}

fn unique(names: &[String]) -> bool {
    names.iter().collect::<BTreeSet<_>>().len() == names.len()
}

impl HorizontalSystem {
    /// Parameter names `a0, a1, ...` for the first equation, `b0, ...` for the second, and so on.
    pub fn default_parameters(partition: &[Vec<usize>]) -> Vec<Vec<String>> {
        partition
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let stem = if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("p{i}_")
                };
                (0..a.len()).map(|k| format!("{stem}{k}")).collect()
            })
            .collect()
    }

    pub fn n_support(&self) -> usize {
        self.beta.len()
    }

    pub fn n_equations(&self) -> usize {
        self.partition.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_vars;
        if n == 0 {
            return Err(invalid("no variables"));
        }
        if self.variables.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: self.variables.len(),
            });
        }
        if !unique(&self.variables) {
            return Err(invalid("variable names are not unique"));
        }
        if self.base.is_empty() {
            return Err(Error::EmptyInput("base"));
        }
        for b in &self.base {
            if b.arity() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: b.arity(),
                });
            }
            if b.field() != self.field {
                return Err(Error::FieldMismatch(b.field().to_string(), self.field.to_string()));
            }
            if b.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
        }
        let r = self.base.len();
        let m = self.beta.len();
        if let Some(row) = self.beta.iter().find(|row| row.len() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: row.len(),
            });
        }
        let mut covered = vec![false; m];
        for (i, a) in self.partition.iter().enumerate() {
            if a.is_empty() {
                return Err(invalid(format!("equation {i} has no support")));
            }
            for &j in a {
                if j >= m {
                    return Err(invalid(format!("equation {i} uses support index {j} of {m}")));
                }
                covered[j] = true;
            }
            let mut seen = a.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != a.len() {
                return Err(invalid(format!("equation {i} repeats a support index")));
            }
        }
        if let Some(j) = covered.iter().position(|c| !c) {
            return Err(invalid(format!("support index {j} is used by no equation")));
        }
        if self.parameters.len() != self.partition.len()
            || self.parameters.iter().zip(&self.partition).any(|(p, a)| p.len() != a.len())
        {
            return Err(invalid("parameters do not match the partition"));
        }
        let flat: Vec<String> = self.parameters.iter().flatten().cloned().collect();
        if !unique(&flat) || flat.iter().any(|p| self.variables.contains(p)) {
            return Err(invalid("parameter names are not unique"));
        }
        if let Some(s) = &self.support {
            if s.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: s.len(),
                });
            }
            if let Some(p) = s.iter().find(|p| p.arity() != n) {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: p.arity(),
                });
            }
        }
        Ok(())
    }

    /// `prod_l b_l^{beta_{jl}}` as numerator and denominator.
    fn support_fraction(&self, j: usize) -> Result<(ValuedPolynomial, ValuedPolynomial)> {
        let one = ValuedPolynomial::one(self.field, self.n_vars);
        let (mut num, mut den) = (one.clone(), one);
        for (b, &e) in self.base.iter().zip(&self.beta[j]) {
            let p = b.pow(e.unsigned_abs() as u32)?;
            if e >= 0 {
                num = num.mul(&p)?;
            } else {
                den = den.mul(&p)?;
            }
        }
        Ok((num, den))
    }

    /// The support element `s_j`, when `beta_j` has no negative entries.
    pub fn support_element(&self, j: usize) -> Result<Option<ValuedPolynomial>> {
        if self.beta[j].iter().any(|&e| e < 0) {
            return Ok(None);
        }
        Ok(Some(self.support_fraction(j)?.0))
    }
}

/// Exact check `s_j * prod_{beta<0} b^{-beta} = prod_{beta>0} b^beta` for every `j`.
pub fn verify_support(s: &HorizontalSystem) -> Result<bool> {
    let Some(support) = &s.support else {
        return Err(invalid("no explicit support to verify"));
    };
    if s.base.iter().any(|b| b.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    if support.len() != s.beta.len() {
        return Err(Error::DimensionMismatch {
            expected: s.beta.len(),
            found: support.len(),
        });
    }
    for (j, sj) in support.iter().enumerate() {
        let (num, den) = s.support_fraction(j)?;
        if sj.mul(&den)? != num {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certifies that the tropical hypersurfaces of the base meet with additive
/// codimension: every cell of the mixed subdivision of the Newton polytopes,
/// lifted by the coefficient valuations, has summand dimensions adding up to
/// its own dimension. Monomials have empty hypersurfaces and are skipped.
pub fn is_tropically_transverse(base: &[ValuedPolynomial], map: &SemiringMap) -> Result<TransversalityCertificate> {
    if base.is_empty() {
        return Err(Error::EmptyInput("base"));
    }
    if base.iter().any(|b| b.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    let mut configs = Vec::new();
    for b in base {
        if b.terms().len() < 2 {
            continue;
        }
        let mut points = Vec::with_capacity(b.terms().len());
        let mut heights = Vec::with_capacity(b.terms().len());
        for (alpha, c) in b.terms() {
            points.push(alpha.clone());
            heights.push(map.image_finite(c)?);
        }
        configs.push(LiftedConfiguration::new(points, heights)?);
    }
    if configs.len() < 2 {
        return Ok(TransversalityCertificate {
            verdict: true,
            witness: None,
        });
    }
    let orientation = match map.convention {
        Convention::Min => Orientation::Lower,
        Convention::Max => Orientation::Upper,
    };
    let sub = mixed_subdivision(&configs, orientation)?;
    let witness = sub.cells.into_iter().find_map(|cell| {
        let total: usize = cell.summand_dims.iter().sum();
        (total != cell.dim).then(|| DefectWitness {
            deficit: total - cell.dim,
            cell,
        })
    });
    Ok(TransversalityCertificate {
        verdict: witness.is_none(),
        witness,
    })
}

/// Sum of scalar multiples of parameters (`Some(k)`) and plain scalars (`None`).
/// Terms are merged by parameter and zero terms are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamCoeff(pub Vec<(Option<usize>, ValuedScalar)>);

impl ParamCoeff {
    pub fn scalar(c: ValuedScalar) -> Self {
        Self::default().plus(None, c)
    }

    pub fn parameter(k: usize, c: ValuedScalar) -> Self {
        Self::default().plus(Some(k), c)
    }

    fn plus(mut self, p: Option<usize>, c: ValuedScalar) -> Self {
        match self.0.iter_mut().find(|(q, _)| *q == p) {
            Some((_, d)) => *d = d.add(&c),
            None => self.0.push((p, c)),
        }
        self.0.retain(|(_, d)| !d.is_zero());
        self.0.sort_by_key(|(q, _)| *q);
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        o.0.iter().fold(self.clone(), |acc, (p, c)| acc.plus(*p, c.clone()))
    }

    /// Nonzero for generic parameter values.
    pub fn is_generically_nonzero(&self) -> bool {
        !self.0.is_empty()
    }

    /// Image under `map` at a generic point where every parameter has valuation zero.
    pub fn generic_image(&self, map: &SemiringMap) -> Result<Rat> {
        let mut best: Option<Rat> = None;
        for (_, c) in &self.0 {
            let v = map.image_finite(c)?;
            if best.as_ref().is_none_or(|b| map.convention.prefers(&v, b)) {
                best = Some(v);
            }
        }
        best.ok_or(Error::ZeroValuation)
    }
}

/// Laurent polynomial with [`ParamCoeff`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPolynomial {
    pub arity: usize,
    pub terms: BTreeMap<Vec<i64>, ParamCoeff>,
}

impl ParamPolynomial {
    pub fn new(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, alpha: Vec<i64>, c: ParamCoeff) {
        debug_assert_eq!(alpha.len(), self.arity);
        let entry = self.terms.entry(alpha.clone()).or_default();
        *entry = entry.add(&c);
        if !entry.is_generically_nonzero() {
            self.terms.remove(&alpha);
        }
    }

    /// Exponents with generically nonzero coefficient.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn generic_tropicalization(&self, map: &SemiringMap) -> Result<TropicalPolynomial> {
        if self.terms.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (alpha, c) in &self.terms {
            terms.push((alpha.clone(), c.generic_image(map)?));
        }
        TropicalPolynomial::new(map.convention, self.arity, terms)
    }
}

/// `f_hat` linear in the `z` variables, binomials `g_hat = z_j - y^{beta_j}`,
/// and `h_hat = y_l - b_l`, over the variables `x, y, z` in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedSystem {
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub f_hat: Vec<ParamPolynomial>,
    pub g_hat: Vec<ParamPolynomial>,
    pub h_hat: Vec<ParamPolynomial>,
}

impl ModifiedSystem {
    pub fn equations(&self) -> impl Iterator<Item = &ParamPolynomial> {
        self.f_hat.iter().chain(&self.g_hat).chain(&self.h_hat)
    }

    pub fn n_equations(&self) -> usize {
        self.f_hat.len() + self.g_hat.len() + self.h_hat.len()
    }

    /// Translated Newton polytopes of all equations, in the nonnegative orthant.
    pub fn newton_polytopes(&self) -> Result<Vec<RationalPolytope>> {
        self.equations()
            .map(|p| {
                let pts = p.support();
                if pts.is_empty() {
                    return Err(invalid("an equation vanishes identically"));
                }
                let low: Vec<i64> = (0..p.arity)
                    .map(|k| pts.iter().map(|a| a[k]).min().expect("nonempty"))
                    .collect();
                let shifted: Vec<Vec<i64>> = pts
                    .iter()
                    .map(|a| a.iter().zip(&low).map(|(x, l)| x - l).collect())
                    .collect();
                RationalPolytope::from_i64(&shifted)
            })
            .collect()
    }
}

fn unit(len: usize, k: usize) -> Vec<i64> {
    let mut e = vec![0; len];
    e[k] = 1;
    e
}

/// Builds the modified system. With `simplify`, monomial base elements are
/// substituted into the support, support elements that become monomials in
/// `x` go straight into `f_hat`, support elements with the same remaining
/// exponent share one `z`, and unused `y` are dropped.
pub fn build_modification(s: &HorizontalSystem, simplify: bool) -> Result<ModifiedSystem> {
    s.validate()?;
    if let Some(false) = s.support.as_ref().map(|_| verify_support(s)).transpose()? {
        return Err(invalid("support does not match the base and beta"));
    }
    let n = s.n_vars;
    let r = s.base.len();
    let parameters: Vec<String> = s.parameters.iter().flatten().cloned().collect();
    let mut param_index = Vec::with_capacity(s.partition.len());
    let mut k = 0;
    for a in &s.partition {
        param_index.push((k..k + a.len()).collect::<Vec<_>>());
        k += a.len();
    }
    let neg_one = ValuedScalar::one().neg();

    // Each support element is `coef * x^gamma * y^eta`, with `y` indexed by kept base elements.
    let mono: Vec<Option<(&Vec<i64>, &ValuedScalar)>> = s
        .base
        .iter()
        .map(|b| if simplify { b.as_monomial() } else { None })
        .collect();
    let kept: Vec<usize> = (0..r).filter(|&l| mono[l].is_none()).collect();
    let mut factored = Vec::with_capacity(s.beta.len());
    for row in &s.beta {
        let mut coef = ValuedScalar::one();
        let mut gamma = vec![0i64; n];
        for (l, &e) in row.iter().enumerate() {
            if let Some((alpha, c)) = mono[l] {
                coef = coef.mul(&c.pow(e)?);
                for (g, a) in gamma.iter_mut().zip(alpha) {
                    *g += e * a;
                }
            }
        }
        let eta: Vec<i64> = kept.iter().map(|&l| row[l]).collect();
        factored.push((coef, gamma, eta));
    }
    let used: Vec<usize> = if simplify {
        (0..kept.len())
            .filter(|&q| factored.iter().any(|(_, _, eta)| eta[q] != 0))
            .collect()
    } else {
        (0..kept.len()).collect()
    };
    // Distinct `z` variables, keyed by `(gamma, eta)` when simplifying.
    let mut z_keys: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    let mut z_of = Vec::with_capacity(s.beta.len());
    for (_, gamma, eta) in &factored {
        if simplify && eta.iter().all(|&e| e == 0) {
            z_of.push(None);
            continue;
        }
        let key = (gamma.clone(), eta.clone());
        let z = match z_keys.iter().position(|k| simplify && *k == key) {
            Some(z) => z,
            None => {
                z_keys.push(key);
                z_keys.len() - 1
            }
        };
        z_of.push(Some(z));
    }
    let ny = used.len();
    let nz = z_keys.len();
    let arity = n + ny + nz;
    let y_slot = |q: usize| used.iter().position(|&u| u == q).map(|p| n + p);
    let mut variables = s.variables.clone();
    variables.extend((1..=ny).map(|i| format!("y{i}")));
    variables.extend((1..=nz).map(|i| format!("z{i}")));
    let lift_x = |alpha: &[i64]| {
        let mut e = alpha.to_vec();
        e.resize(arity, 0);
        e
    };

    let mut f_hat = Vec::with_capacity(s.partition.len());
    for (i, a) in s.partition.iter().enumerate() {
        let mut f = ParamPolynomial::new(arity);
        for (pos, &j) in a.iter().enumerate() {
            let (coef, gamma, _) = &factored[j];
            let c = ParamCoeff::parameter(param_index[i][pos], coef.clone());
            match z_of[j] {
                Some(z) => f.add_term(unit(arity, n + ny + z), c),
                None => f.add_term(lift_x(gamma), c),
            }
        }
        f_hat.push(f);
    }
    let mut g_hat = Vec::with_capacity(nz);
    for (z, (gamma, eta)) in z_keys.iter().enumerate() {
        let mut g = ParamPolynomial::new(arity);
        g.add_term(unit(arity, n + ny + z), ParamCoeff::scalar(ValuedScalar::one()));
        let mut e = lift_x(gamma);
        for (q, &x) in eta.iter().enumerate() {
            if x != 0 {
                e[y_slot(q).expect("used y")] += x;
            }
        }
        g.add_term(e, ParamCoeff::scalar(neg_one.clone()));
        g_hat.push(g);
    }
    let mut h_hat = Vec::with_capacity(ny);
    for (p, &q) in used.iter().enumerate() {
        let mut h = ParamPolynomial::new(arity);
        h.add_term(unit(arity, n + p), ParamCoeff::scalar(ValuedScalar::one()));
        for (alpha, c) in s.base[kept[q]].terms() {
            h.add_term(lift_x(alpha), ParamCoeff::scalar(c.neg()));
        }
        h_hat.push(h);
    }
    Ok(ModifiedSystem {
        variables,
        parameters,
        f_hat,
        g_hat,
        h_hat,
    })
}

/// Options for [`generic_root_count`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCountOptions {
    pub simplify: bool,
    /// Also compute the tropical intersection number of the modified system and compare.
    pub check_intersection: bool,
    pub seed: u64,
}

impl Default for RootCountOptions {
    fn default() -> Self {
        Self {
            simplify: true,
            check_intersection: false,
            seed: DEFAULT_LIFTING_SEED,
        }
    }
}

/// Number of solutions in the torus for generic parameters, as the mixed
/// volume of the modified system. Refuses bases that are not tropically transverse.
pub fn generic_root_count(s: &HorizontalSystem, opts: RootCountOptions) -> Result<Int> {
    s.validate()?;
    if s.n_equations() != s.n_vars {
        return Err(Error::NonSquare {
            equations: s.n_equations(),
            variables: s.n_vars,
        });
    }
    let map = SemiringMap::new(s.field, s.convention);
    let cert = is_tropically_transverse(&s.base, &map)?;
    if !cert.verdict {
        return Err(Error::NotTransverse(Box::new(cert)));
    }
    let modified = build_modification(s, opts.simplify)?;
    let polytopes = modified.newton_polytopes()?;
    let mv = mixed_volume_seeded(&polytopes, opts.seed)?;
    debug_assert!(mv.is_integer());
    let count = mv.to_integer();
    if opts.check_intersection {
        let mut complexes = Vec::with_capacity(modified.n_equations());
        for p in modified.equations() {
            let trop = p.generic_tropicalization(&map)?;
            complexes.push(tropical_hypersurface(&trop)?.complex);
        }
        let number = if complexes.iter().any(|c| c.is_empty()) {
            Int::zero()
        } else {
            intersection_number(&complexes, opts.seed)?
        };
        if number != count {
            return Err(Error::CrossCheck {
                mixed_volume: count.to_string(),
                intersection_number: number.to_string(),
            });
        }
    }
    Ok(count)
}

/// Equilibria of two coupled nonlinear oscillators:
/// `f_1 = a_0 + a_1 x_1 + a_2 x_2 + sum_{i=1}^n a_{i+2} x_1 (x_1^m + x_2^m)^i` and
/// `f_2` alike with `b` and `x_2` in place of `a` and `x_1` in the sum.
pub fn nonlinear_resonator_system(n: usize, m: usize) -> Result<HorizontalSystem> {
    if n == 0 || m == 0 {
        return Err(invalid("n and m must be positive"));
    }
    let field = ValuedField::TrivialQ;
    let one = ValuedScalar::one();
    let x1 = ValuedPolynomial::monomial(field, vec![1, 0], one.clone());
    let x2 = ValuedPolynomial::monomial(field, vec![0, 1], one.clone());
    let ni = n as i64;
    let mi = m as i64;
    let power_sum = ValuedPolynomial::new(field, 2, [(vec![mi, 0], one.clone()), (vec![0, mi], one)])?;
    let base = vec![x1, x2, power_sum];
    let mut beta = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]];
    beta.extend((1..=ni).map(|i| vec![1, 0, i]));
    beta.extend((1..=ni).map(|i| vec![0, 1, i]));
    let shared = [0usize, 1, 2];
    let partition = vec![
        shared.iter().copied().chain(3..3 + n).collect::<Vec<_>>(),
        shared.iter().copied().chain(3 + n..3 + 2 * n).collect(),
    ];
    let mut s = HorizontalSystem {
        n_vars: 2,
        variables: vec!["x1".into(), "x2".into()],
        field,
        convention: Convention::Min,
        base,
        beta,
        parameters: HorizontalSystem::default_parameters(&partition),
        partition,
        support: None,
    };
    let support = (0..s.n_support())
        .map(|j| s.support_element(j).map(|p| p.expect("nonnegative exponents")))
        .collect::<Result<Vec<_>>>()?;
    s.support = Some(support);
    Ok(s)
}
