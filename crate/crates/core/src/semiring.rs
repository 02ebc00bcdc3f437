//! Min-plus and max-plus arithmetic, tropical polynomials and tropical matrices.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{dot, format_rational, parse_rational, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Min,
    Max,
}

impl Convention {
    /// True iff `a` is strictly preferred to `b` by tropical addition.
    pub fn prefers(self, a: &Rat, b: &Rat) -> bool {
        match self {
            Convention::Min => a < b,
            Convention::Max => a > b,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Convention::Min => 1,
            Convention::Max => -1,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Min => "min",
            Convention::Max => "max",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Convention::Min),
            "max" => Ok(Convention::Max),
            _ => Err(Error::Parse {
                location: "convention".into(),
                message: format!("expected \"min\" or \"max\", found {s:?}"),
            }),
        }
    }
}

/// Finite part of a tropical number, or the additive identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TropicalValue {
    Infinite,
    Finite(Rat),
}

impl TropicalValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            TropicalValue::Infinite => None,
            TropicalValue::Finite(q) => Some(q),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ValueRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inf: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num: Option<String>,
}

impl Serialize for TropicalValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            TropicalValue::Infinite => ValueRepr {
                inf: Some(true),
                num: None,
            },
            TropicalValue::Finite(q) => ValueRepr {
                inf: None,
                num: Some(format_rational(q)),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ValueRepr::deserialize(d)?;
        match (repr.inf, repr.num) {
            (Some(true), None) => Ok(TropicalValue::Infinite),
            (None | Some(false), Some(s)) => parse_rational(&s)
                .map(TropicalValue::Finite)
                .map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom(
                "expected {\"inf\": true} or {\"num\": \"p/q\"}",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TropicalNumber {
    pub value: TropicalValue,
    pub convention: Convention,
}

impl TropicalNumber {
    pub fn finite(q: Rat, convention: Convention) -> Self {
        Self {
            value: TropicalValue::Finite(q),
            convention,
        }
    }

    pub fn infinite(convention: Convention) -> Self {
        Self {
            value: TropicalValue::Infinite,
            convention,
        }
    }

    /// The multiplicative identity (rational zero).
    pub fn one(convention: Convention) -> Self {
        Self::finite(Rat::zero(), convention)
    }

    pub fn is_infinite(&self) -> bool {
        self.value == TropicalValue::Infinite
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.convention == other.convention {
            Ok(())
        } else {
            Err(Error::ConventionMismatch(self.convention, other.convention))
        }
    }
}

impl fmt::Display for TropicalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            TropicalValue::Infinite => match self.convention {
                Convention::Min => f.write_str("(inf)"),
                Convention::Max => f.write_str("(-inf)"),
            },
            TropicalValue::Finite(q) => write!(f, "({})", format_rational(q)),
        }
    }
}

pub fn trop_add(a: &TropicalNumber, b: &TropicalNumber) -> Result<TropicalNumber> {
    a.check(b)?;
    let value = match (&a.value, &b.value) {
        (TropicalValue::Infinite, v) | (v, TropicalValue::Infinite) => v.clone(),
        (TropicalValue::Finite(x), TropicalValue::Finite(y)) => {
            if a.convention.prefers(y, x) {
                TropicalValue::Finite(y.clone())
            } else {
                TropicalValue::Finite(x.clone())
            }
        }
    };
    Ok(TropicalNumber {
        value,
        convention: a.convention,
    })
}

pub fn trop_mul(a: &TropicalNumber, b: &TropicalNumber) -> Result<TropicalNumber> {
    a.check(b)?;
    let value = match (&a.value, &b.value) {
        (TropicalValue::Finite(x), TropicalValue::Finite(y)) => TropicalValue::Finite(x + y),
        _ => TropicalValue::Infinite,
    };
    Ok(TropicalNumber {
        value,
        convention: a.convention,
    })
}

/// Order of the tropical semiring: rationals keep their order under MIN and
/// reverse it under MAX; the additive identity is the smallest element.
pub fn trop_compare(a: &TropicalNumber, b: &TropicalNumber) -> Result<Ordering> {
    a.check(b)?;
    Ok(match (&a.value, &b.value) {
        (TropicalValue::Infinite, TropicalValue::Infinite) => Ordering::Equal,
        (TropicalValue::Infinite, _) => Ordering::Less,
        (_, TropicalValue::Infinite) => Ordering::Greater,
        (TropicalValue::Finite(x), TropicalValue::Finite(y)) => match a.convention {
            Convention::Min => x.cmp(y),
            Convention::Max => y.cmp(x),
        },
    })
}

/// Tropical polynomial with finite coefficients on a Laurent support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    convention: Convention,
    arity: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl TropicalPolynomial {
    /// Repeated exponents are combined by tropical addition.
    pub fn new(
        convention: Convention,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, Rat)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: alpha.len(),
                });
            }
            match map.get_mut(&alpha) {
                Some(old) => {
                    if convention.prefers(&c, old) {
                        *old = c;
                    }
                }
                None => {
                    map.insert(alpha, c);
                }
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyInput("tropical polynomial needs at least one term"));
        }
        Ok(Self {
            convention,
            arity,
            terms: map,
        })
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, Rat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_point(&self, w: &[Rat]) -> Result<()> {
        if w.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: w.len(),
            });
        }
        Ok(())
    }

    fn term_value(alpha: &[i64], c: &Rat, w: &[Rat]) -> Rat {
        let a: Vec<Rat> = alpha.iter().map(|&x| Rat::from_integer(x.into())).collect();
        c + dot(&a, w)
    }

    pub fn eval(&self, w: &[Rat]) -> Result<TropicalNumber> {
        self.check_point(w)?;
        let mut best: Option<Rat> = None;
        for (alpha, c) in &self.terms {
            let v = Self::term_value(alpha, c, w);
            if best.as_ref().is_none_or(|b| self.convention.prefers(&v, b)) {
                best = Some(v);
            }
        }
        Ok(TropicalNumber::finite(best.expect("nonempty"), self.convention))
    }

    /// Exponents of the terms attaining the optimum at `w`.
    pub fn optimal_terms(&self, w: &[Rat]) -> Result<Vec<Vec<i64>>> {
        let opt = self.eval(w)?;
        let opt = opt.value.finite().expect("finite").clone();
        Ok(self
            .terms
            .iter()
            .filter(|(alpha, c)| Self::term_value(alpha, c, w) == opt)
            .map(|(alpha, _)| alpha.clone())
            .collect())
    }

    /// Tropical product: optimum convolution of the two term maps.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch(self.convention, other.convention));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        let terms = self.terms.iter().flat_map(|(a, c)| {
            other.terms.iter().map(move |(b, d)| {
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                (e, c + d)
            })
        });
        Self::new(self.convention, self.arity, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    convention: Convention,
    arity: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    monomial: Vec<i64>,
}

impl Serialize for TropicalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            convention: self.convention,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    coeff: format_rational(c),
                    monomial: m.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut terms = Vec::new();
        for t in repr.terms {
            let c = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
            terms.push((t.monomial, c));
        }
        TropicalPolynomial::new(repr.convention, repr.arity, terms).map_err(serde::de::Error::custom)
    }
}

/// Rectangular matrix of tropical values sharing one convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalMatrix {
    pub convention: Convention,
    pub entries: Vec<Vec<TropicalValue>>,
}

impl TropicalMatrix {
    pub fn new(convention: Convention, entries: Vec<Vec<TropicalValue>>) -> Result<Self> {
        let cols = entries.first().map_or(0, |r| r.len());
        if entries.is_empty() || cols == 0 {
            return Err(Error::EmptyInput("tropical matrix"));
        }
        if let Some(r) = entries.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Ok(Self {
            convention,
            entries,
        })
    }

    pub fn from_rationals(convention: Convention, rows: Vec<Vec<Rat>>) -> Result<Self> {
        Self::new(
            convention,
            rows.into_iter()
                .map(|r| r.into_iter().map(TropicalValue::Finite).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    fn submatrix(&self, cols: &[usize]) -> Self {
        Self {
            convention: self.convention,
            entries: self
                .entries
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect(),
        }
    }
}

/// Tropical determinant by the Hungarian method with potentials. Infinite
/// entries are treated as forbidden assignments.
pub fn trop_det(m: &TropicalMatrix) -> Result<TropicalNumber> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: m.cols(),
        });
    }
    let sign = Rat::from_integer(m.convention.sign().into());
    // Minimization costs, 1-indexed.
    let cost = |i: usize, j: usize| -> Option<Rat> {
        m.entries[i - 1][j - 1].finite().map(|q| q * &sign)
    };
    let mut u = vec![Rat::zero(); n + 1];
    let mut v = vec![Rat::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rat>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<Rat> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0, j) {
                    let cur = c - &u[i0] - &v[j];
                    if minv[j].as_ref().is_none_or(|mv| cur < *mv) {
                        minv[j] = Some(cur);
                        way[j] = j0;
                    }
                }
                if let Some(mv) = &minv[j] {
                    if delta.as_ref().is_none_or(|d| mv < d) {
                        delta = Some(mv.clone());
                        j1 = j;
                    }
                }
            }
            let Some(delta) = delta else {
                return Ok(TropicalNumber::infinite(m.convention));
            };
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(mv) = minv[j].as_mut() {
                    *mv -= &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut total = Rat::zero();
    for j in 1..=n {
        total += m.entries[p[j] - 1][j - 1].finite().expect("assigned entries are finite");
    }
    Ok(TropicalNumber::finite(total, m.convention))
}

/// Maximal tropical minors keyed by 1-based column subsets.
pub fn trop_minors(m: &TropicalMatrix) -> Result<BTreeMap<Vec<usize>, TropicalNumber>> {
    let (r, c) = (m.rows(), m.cols());
    if r > c {
        return Err(Error::TooManyRows { rows: r, cols: c });
    }
    let mut out = BTreeMap::new();
    for cols in combinations(c, r) {
        let det = trop_det(&m.submatrix(&cols))?;
        out.insert(cols.iter().map(|x| x + 1).collect(), det);
    }
    Ok(out)
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
