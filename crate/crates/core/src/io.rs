//! JSON system files.
//!
//! ```json
//! {
//!   "field": "Q(t)",
//!   "convention": "max",
//!   "variables": ["x", "y"],
//!   "polynomials": [[{"coeff": "t^3", "monomial": [0, 0]}, {"coeff": "1", "monomial": [1, 0]}]]
//! }
//! ```
//!
//! Horizontal systems add `"base"` (term lists like `"polynomials"`), `"beta"`
//! (one exponent row per support element) and `"partition"` (support indices per
//! equation). Their `"polynomials"`, when present, are the explicit support
//! elements and `"parameters"` lists one name per partition entry, in order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootcount::HorizontalSystem;
use crate::semiring::Convention;
use crate::valuation::{parse_scalar, ValuedField, ValuedPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coeff: String,
    pub monomial: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub field: ValuedField,
    #[serde(default)]
    pub convention: Convention,
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub polynomials: Vec<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<Vec<Term>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

/// Parses a field name: `Q`, `Q(t)`, `Qp:<p>` or `Q_<p>`.
pub fn parse_field(s: &str) -> Result<ValuedField> {
    let s = s.trim();
    match s {
        "Q" => return Ok(ValuedField::TrivialQ),
        "Q(t)" => return Ok(ValuedField::TadicQT),
        _ => {}
    }
    let p = s
        .strip_prefix("Qp:")
        .or_else(|| s.strip_prefix("Q_"))
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| parse_err("field", format!("unknown field {s:?}; expected Q, Q(t), Qp:<p> or Q_<p>")))?;
    ValuedField::padic(p)
}

pub fn parse_convention(s: &str) -> Result<Convention> {
    s.parse().map_err(|_| parse_err("convention", format!("expected min or max, found {s:?}")))
}

fn polynomial(field: ValuedField, arity: usize, terms: &[Term], at: &str) -> Result<ValuedPolynomial> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, t) in terms.iter().enumerate() {
        if t.monomial.len() != arity {
            return Err(parse_err(
                format!("{at}[{k}].monomial"),
                format!("expected {arity} exponents, found {}", t.monomial.len()),
            ));
        }
        let c = parse_scalar(field, &t.coeff).map_err(|e| e.at(format!("{at}[{k}].coeff")))?;
        out.push((t.monomial.clone(), c));
    }
    ValuedPolynomial::new(field, arity, out).map_err(|e| match e {
        Error::FieldMismatch(..) => parse_err(at, format!("coefficient outside {field}")),
        other => other,
    })
}

fn terms_of(p: &ValuedPolynomial) -> Vec<Term> {
    p.terms()
        .iter()
        .map(|(a, c)| Term {
            coeff: c.to_string(),
            monomial: a.clone(),
        })
        .collect()
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: SystemFile = serde_json::from_str(text).map_err(json_err)?;
        f.check_names()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn check_names(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(parse_err("variables", "no variables"));
        }
        let mut seen = BTreeSet::new();
        for (i, v) in self.variables.iter().chain(&self.parameters).enumerate() {
            if !seen.insert(v) {
                let at = if i < self.variables.len() {
                    format!("variables[{i}]")
                } else {
                    format!("parameters[{}]", i - self.variables.len())
                };
                return Err(parse_err(at, format!("duplicate name {v:?}")));
            }
        }
        Ok(())
    }

    pub fn polynomials(&self) -> Result<Vec<ValuedPolynomial>> {
        let n = self.variables.len();
        self.polynomials
            .iter()
            .enumerate()
            .map(|(i, p)| polynomial(self.field, n, p, &format!("polynomials[{i}]")))
            .collect()
    }

    /// The `i`-th polynomial.
    pub fn polynomial(&self, i: usize) -> Result<ValuedPolynomial> {
        let p = self.polynomials.get(i).ok_or_else(|| {
            parse_err(
                "polynomials",
                format!("index {i} out of range for {} polynomials", self.polynomials.len()),
            )
        })?;
        polynomial(self.field, self.variables.len(), p, &format!("polynomials[{i}]"))
    }

    /// `"base"` if present, otherwise `"polynomials"`.
    pub fn base_polynomials(&self) -> Result<Vec<ValuedPolynomial>> {
        match &self.base {
            Some(b) => {
                let n = self.variables.len();
                b.iter()
                    .enumerate()
                    .map(|(i, p)| polynomial(self.field, n, p, &format!("base[{i}]")))
                    .collect()
            }
            None => self.polynomials(),
        }
    }

    pub fn horizontal_system(&self) -> Result<HorizontalSystem> {
        let missing = |k: &str| parse_err(k, "required for a horizontal system");
        let base = self.base_polynomials()?;
        if self.base.is_none() {
            return Err(missing("base"));
        }
        let beta = self.beta.clone().ok_or_else(|| missing("beta"))?;
        let partition = self.partition.clone().ok_or_else(|| missing("partition"))?;
        let parameters = if self.parameters.is_empty() {
            HorizontalSystem::default_parameters(&partition)
        } else {
            let total: usize = partition.iter().map(Vec::len).sum();
            if total != self.parameters.len() {
                return Err(parse_err(
                    "parameters",
                    format!("expected {total} names to match the partition, found {}", self.parameters.len()),
                ));
            }
            let mut rest = self.parameters.as_slice();
            partition
                .iter()
                .map(|a| {
                    let (head, tail) = rest.split_at(a.len());
                    rest = tail;
                    head.to_vec()
                })
                .collect()
        };
        let support = if self.polynomials.is_empty() {
            None
        } else {
            Some(self.polynomials()?)
        };
        let s = HorizontalSystem {
            n_vars: self.variables.len(),
            variables: self.variables.clone(),
            field: self.field,
            convention: self.convention,
            base,
            beta,
            partition,
            parameters,
            support,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_polynomials(
        field: ValuedField,
        convention: Convention,
        variables: Vec<String>,
        polys: &[ValuedPolynomial],
    ) -> Self {
        Self {
            field,
            convention,
            variables,
            parameters: Vec::new(),
            polynomials: polys.iter().map(terms_of).collect(),
            base: None,
            beta: None,
            partition: None,
        }
    }

    pub fn from_horizontal(s: &HorizontalSystem) -> Self {
        Self {
            field: s.field,
            convention: s.convention,
            variables: s.variables.clone(),
            parameters: s.parameters.iter().flatten().cloned().collect(),
            polynomials: s.support.iter().flatten().map(terms_of).collect(),
            base: Some(s.base.iter().map(terms_of).collect()),
            beta: Some(s.beta.clone()),
            partition: Some(s.partition.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootcount::{nonlinear_resonator_system, verify_support};

    const CUBIC: &str = r#"{
        "field": "Q(t)",
        "convention": "max",
        "variables": ["x", "y"],
        "polynomials": [
            [{"coeff": "t^3", "monomial": [0, 0]}, {"coeff": "1", "monomial": [1, 0]},
             {"coeff": "t^2", "monomial": [0, 1]}, {"coeff": "1", "monomial": [3, 0]},
             {"coeff": "1", "monomial": [1, 2]}]
        ]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let f = SystemFile::parse(CUBIC).unwrap();
        assert_eq!(f.convention, Convention::Max);
        let p = f.polynomial(0).unwrap();
        assert_eq!(p.terms().len(), 5);
        let again = SystemFile::from_polynomials(f.field, f.convention, f.variables.clone(), std::slice::from_ref(&p));
        let back = SystemFile::parse(&again.to_json()).unwrap();
        assert_eq!(back.polynomial(0).unwrap(), p);
    }

    #[test]
    fn errors_name_their_location() {
        let bad = CUBIC.replace("\"t^2\"", "\"t^\"");
        match SystemFile::parse(&bad).unwrap().polynomial(0) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "polynomials[0][2].coeff"),
            other => panic!("{other:?}"),
        }
        let bad = CUBIC.replace("[1, 2]", "[1, 2, 0]");
        match SystemFile::parse(&bad).unwrap().polynomials() {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "polynomials[0][4].monomial"),
            other => panic!("{other:?}"),
        }
        match SystemFile::parse("{\"field\": \"Q\",\n \"variables\": [\"x\", \"x\"]}") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "variables[1]"),
            other => panic!("{other:?}"),
        }
        match SystemFile::parse("{\"field\": \"Q\",\n \"variables\": [\"x\"],,}") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
        assert!(SystemFile::parse(&CUBIC.replace("Q(t)", "R")).is_err());
        let rational_field = CUBIC.replace("\"Q(t)\"", "\"Q\"");
        assert!(matches!(
            SystemFile::parse(&rational_field).unwrap().polynomial(0),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn horizontal_round_trip() {
        let s = nonlinear_resonator_system(2, 3).unwrap();
        let text = SystemFile::from_horizontal(&s).to_json();
        let back = SystemFile::parse(&text).unwrap().horizontal_system().unwrap();
        assert_eq!(back, s);
        assert!(verify_support(&back).unwrap());
        let mut f = SystemFile::parse(&text).unwrap();
        f.parameters.pop();
        assert!(f.horizontal_system().is_err());
        f.parameters.clear();
        assert_eq!(f.horizontal_system().unwrap().parameters, s.parameters);
    }

    #[test]
    fn field_flags() {
        assert_eq!(parse_field("Q").unwrap(), ValuedField::TrivialQ);
        assert_eq!(parse_field("Q(t)").unwrap(), ValuedField::TadicQT);
        assert_eq!(parse_field("Qp:5").unwrap(), ValuedField::PadicQ(5));
        assert_eq!(parse_field("Q_7").unwrap(), ValuedField::PadicQ(7));
        assert_eq!(parse_field("Qp:6"), Err(Error::NotPrime(6)));
        assert!(parse_field("R").is_err());
        assert_eq!(parse_convention("max").unwrap(), Convention::Max);
        assert!(parse_convention("avg").is_err());
    }
}
