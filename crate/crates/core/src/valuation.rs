//! Valued coefficient fields, semiring maps and tropicalization.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rat};
use crate::semiring::{Convention, TropicalNumber, TropicalPolynomial};

/// Dense univariate polynomial in `t`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<Rat>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn t() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree of the lowest nonzero term.
    pub fn low_degree(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.0.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    fn lead(&self) -> &Rat {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = Rat::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.0.iter().map(|c| c * s).collect())
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::default(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                r[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead().recip();
        a.scale(&l)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sep, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, "{sep}")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(&mag))?,
                _ => write!(f, "{}*t^{k}", format_rational(&mag))?,
            }
        }
        Ok(())
    }
}

/// Reduced element of Q(t): the denominator's lowest nonzero coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse {
                location: String::new(),
                message: "zero denominator".into(),
            });
        }
        if num.is_zero() {
            return Ok(Self {
                num,
                den: UPoly::constant(Rat::one()),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let low = den.0[den.low_degree().expect("nonzero")].recip();
        Ok(Self {
            num: num.scale(&low),
            den: den.scale(&low),
        })
    }

    pub fn from_poly(p: UPoly) -> Self {
        Self::new(p, UPoly::constant(Rat::one())).expect("nonzero denominator")
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero denominator")
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn t_adic_valuation(&self) -> Option<i64> {
        let n = self.num.low_degree()? as i64;
        let d = self.den.low_degree().expect("nonzero denominator") as i64;
        Some(n - d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuedField {
    TrivialQ,
    PadicQ(u64),
    TadicQT,
}

impl ValuedField {
    pub fn padic(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(ValuedField::PadicQ(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for ValuedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuedField::TrivialQ => f.write_str("Q"),
            ValuedField::PadicQ(p) => write!(f, "Q_{p}"),
            ValuedField::TadicQT => f.write_str("Q(t)"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldRepr {
    Name(String),
    Padic {
        #[serde(rename = "Qp")]
        qp: u64,
    },
}

impl Serialize for ValuedField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ValuedField::TrivialQ => FieldRepr::Name("Q".into()),
            ValuedField::PadicQ(p) => FieldRepr::Padic { qp: *p },
            ValuedField::TadicQT => FieldRepr::Name("Q(t)".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ValuedField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match FieldRepr::deserialize(d)? {
            FieldRepr::Name(n) if n == "Q" => Ok(ValuedField::TrivialQ),
            FieldRepr::Name(n) if n == "Q(t)" => Ok(ValuedField::TadicQT),
            FieldRepr::Name(n) => Err(serde::de::Error::custom(format!(
                "unknown field {n:?}; expected \"Q\", {{\"Qp\": p}} or \"Q(t)\""
            ))),
            FieldRepr::Padic { qp } => ValuedField::padic(qp).map_err(serde::de::Error::custom),
        }
    }
}

/// Coefficient of a valued polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValuedScalar {
    Rational(Rat),
    Function(RatFunc),
}

impl ValuedScalar {
    pub fn rational(q: Rat) -> Self {
        ValuedScalar::Rational(q)
    }

    pub fn one() -> Self {
        ValuedScalar::Rational(Rat::one())
    }

    /// `c * t^k`.
    pub fn monomial_t(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        ValuedScalar::Function(RatFunc::from_poly(UPoly::new(coeffs))).simplify()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ValuedScalar::Rational(q) => q.is_zero(),
            ValuedScalar::Function(f) => f.is_zero(),
        }
    }

    fn as_function(&self) -> RatFunc {
        match self {
            ValuedScalar::Rational(q) => RatFunc::constant(q.clone()),
            ValuedScalar::Function(f) => f.clone(),
        }
    }

    /// Demotes constant functions to rationals.
    fn simplify(self) -> Self {
        match self {
            ValuedScalar::Function(f) => match f.as_constant() {
                Some(q) => ValuedScalar::Rational(q),
                None => ValuedScalar::Function(f),
            },
            r => r,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (ValuedScalar::Rational(a), ValuedScalar::Rational(b)) => ValuedScalar::Rational(a + b),
            _ => ValuedScalar::Function(self.as_function().add(&o.as_function())).simplify(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ValuedScalar::Rational(a) => ValuedScalar::Rational(-a),
            ValuedScalar::Function(f) => ValuedScalar::Function(f.neg()),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (ValuedScalar::Rational(a), ValuedScalar::Rational(b)) => ValuedScalar::Rational(a * b),
            _ => ValuedScalar::Function(self.as_function().mul(&o.as_function())).simplify(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self {
            ValuedScalar::Rational(a) if a.is_zero() => Err(Error::ZeroValuation),
            ValuedScalar::Rational(a) => Ok(ValuedScalar::Rational(a.recip())),
            ValuedScalar::Function(f) => Ok(ValuedScalar::Function(f.inv()?).simplify()),
        }
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = ValuedScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn involves_t(&self) -> bool {
        matches!(self, ValuedScalar::Function(_))
    }
}

impl fmt::Display for ValuedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuedScalar::Rational(q) => f.write_str(&format_rational(q)),
            ValuedScalar::Function(r) => write!(f, "{r}"),
        }
    }
}

fn p_multiplicity(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

pub fn valuate(field: ValuedField, c: &ValuedScalar) -> Result<Rat> {
    if c.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match (field, c) {
        (ValuedField::TrivialQ, ValuedScalar::Rational(_)) => Ok(Rat::zero()),
        (ValuedField::PadicQ(p), ValuedScalar::Rational(q)) => {
            let p = BigInt::from(p);
            let v = p_multiplicity(q.numer(), &p) - p_multiplicity(q.denom(), &p);
            Ok(Rat::from_integer(v.into()))
        }
        (ValuedField::TadicQT, ValuedScalar::Rational(_)) => Ok(Rat::zero()),
        (ValuedField::TadicQT, ValuedScalar::Function(f)) => Ok(Rat::from_integer(
            f.t_adic_valuation().expect("nonzero").into(),
        )),
        (field, ValuedScalar::Function(_)) => Err(Error::FieldMismatch(
            field.to_string(),
            ValuedField::TadicQT.to_string(),
        )),
    }
}

/// The map `nu` sending a scalar to its valuation (MIN) or negated valuation (MAX).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiringMap {
    pub field: ValuedField,
    pub convention: Convention,
}

impl SemiringMap {
    pub fn new(field: ValuedField, convention: Convention) -> Self {
        Self { field, convention }
    }

    /// Finite image of a nonzero scalar.
    pub fn image_finite(&self, c: &ValuedScalar) -> Result<Rat> {
        let v = valuate(self.field, c)?;
        Ok(match self.convention {
            Convention::Min => v,
            Convention::Max => -v,
        })
    }
}

pub fn semiring_image(m: &SemiringMap, c: &ValuedScalar) -> Result<TropicalNumber> {
    if c.is_zero() {
        return Ok(TropicalNumber::infinite(m.convention));
    }
    Ok(TropicalNumber::finite(m.image_finite(c)?, m.convention))
}

/// Laurent polynomial with valued coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedPolynomial {
    field: ValuedField,
    arity: usize,
    terms: BTreeMap<Vec<i64>, ValuedScalar>,
}

impl ValuedPolynomial {
    /// Repeated exponents are summed; zero coefficients are dropped.
    pub fn new(
        field: ValuedField,
        arity: usize,
        terms: impl IntoIterator<Item = (Vec<i64>, ValuedScalar)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Vec<i64>, ValuedScalar> = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: alpha.len(),
                });
            }
            if c.involves_t() && field != ValuedField::TadicQT {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    ValuedField::TadicQT.to_string(),
                ));
            }
            let entry = map
                .entry(alpha)
                .or_insert_with(|| ValuedScalar::Rational(Rat::zero()));
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { field, arity, terms: map })
    }

    pub fn zero(field: ValuedField, arity: usize) -> Self {
        Self {
            field,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: ValuedField, arity: usize) -> Self {
        Self::monomial(field, vec![0; arity], ValuedScalar::one())
    }

    pub fn monomial(field: ValuedField, alpha: Vec<i64>, c: ValuedScalar) -> Self {
        let arity = alpha.len();
        Self::new(field, arity, [(alpha, c)]).expect("consistent monomial")
    }

    pub fn field(&self) -> ValuedField {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, ValuedScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    /// Single term, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Vec<i64>, &ValuedScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        if self.arity != o.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: o.arity,
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Self::new(
            self.field,
            self.arity,
            self.terms
                .iter()
                .chain(o.terms.iter())
                .map(|(a, c)| (a.clone(), c.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            arity: self.arity,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, c) in &self.terms {
            for (b, d) in &o.terms {
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                terms.push((e, c.mul(d)));
            }
        }
        Self::new(self.field, self.arity, terms)
    }

    /// Nonnegative power.
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(self.field, self.arity);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

pub fn tropicalize(f: &ValuedPolynomial, m: &SemiringMap) -> Result<TropicalPolynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.field != m.field {
        return Err(Error::FieldMismatch(f.field.to_string(), m.field.to_string()));
    }
    let mut terms = Vec::with_capacity(f.terms.len());
    for (alpha, c) in &f.terms {
        terms.push((alpha.clone(), m.image_finite(c)?));
    }
    TropicalPolynomial::new(m.convention, f.arity, terms)
}

/// Parses a scalar such as `"3/4"`, `"t^3+t^4"` or `"(t^3+2*t)/(1)"`.
pub fn parse_scalar(field: ValuedField, s: &str) -> Result<ValuedScalar> {
    let err = |message: String| Error::Parse {
        location: String::new(),
        message,
    };
    let tokens = tokenize(s).map_err(|m| err(format!("{m} in {s:?}")))?;
    let mut p = Parser { tokens, pos: 0 };
    let value = p.expr().map_err(|m| err(format!("{m} in {s:?}")))?;
    if p.pos != p.tokens.len() {
        return Err(err(format!("unexpected trailing input in {s:?}")));
    }
    let scalar = ValuedScalar::Function(value).simplify();
    if scalar.involves_t() && field != ValuedField::TadicQT {
        return Err(err(format!(
            "{s:?} involves t but the field is {field}"
        )));
    }
    Ok(scalar)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    T,
    Op(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(text.parse().expect("digits")));
            }
            't' => {
                out.push(Token::T);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Token::Op(c));
                i += 1;
            }
            _ => return Err(format!("unexpected character {c:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty scalar".into());
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult = std::result::Result<RatFunc, String>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> PResult {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err("division by zero".into());
                }
                acc = acc.mul(&d.inv().map_err(|e| e.to_string())?);
            } else if matches!(self.peek(), Some(Token::T | Token::Num(_) | Token::Op('('))) {
                acc = acc.mul(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k = match self.peek() {
            Some(Token::Num(n)) => {
                let k: u32 = n.try_into().map_err(|_| "exponent too large".to_string())?;
                self.pos += 1;
                k
            }
            _ => return Err("expected an integer exponent after '^'".into()),
        };
        let mut acc = RatFunc::constant(Rat::one());
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        if neg {
            acc = acc.inv().map_err(|_| "zero to a negative power".to_string())?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> PResult {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(Rat::from_integer(n)))
            }
            Some(Token::T) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(UPoly::t()))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(v)
            }
            Some(tok) => Err(format!("unexpected token {tok:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}
