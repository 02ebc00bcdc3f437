//! Exact rational and integer helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_vec(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn int_vec(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn to_rat_vec(xs: &[Int]) -> Vec<Rat> {
    xs.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse {
        location: String::new(),
        message: format!("invalid rational '{s}'"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

pub fn format_rational(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Int {
    xs.into_iter()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector by `factor` and returns the integer result.
/// The caller guarantees `factor` clears every denominator.
pub fn scale_to_int(xs: &[Rat], factor: &Int) -> Vec<Int> {
    xs.iter()
        .map(|x| {
            let y = x * Rat::from_integer(factor.clone());
            debug_assert!(y.is_integer());
            y.to_integer()
        })
        .collect()
}

pub fn gcd_vec(xs: &[Int]) -> Int {
    xs.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(xs: &[Int]) -> Vec<Int> {
    let g = gcd_vec(xs);
    if g.is_zero() || g.is_one() {
        return xs.to_vec();
    }
    xs.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector and returns the primitive integer
/// vector pointing in the same direction.
pub fn primitive_from_rat(xs: &[Rat]) -> Vec<Int> {
    let l = lcm_denominators(xs);
    primitive(&scale_to_int(xs, &l))
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale_vec(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn abs_int(x: &Int) -> Int {
    x.abs()
}

/// Extended gcd over arbitrary integers: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub mod serde_rat {
    //! Serialize rationals as exact strings.
    use super::{format_rational, parse_rational, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::{format_rational, parse_rational, Rat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rat_vecs {
    use super::{format_rational, parse_rational, Rat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod serde_int {
    use super::Int;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Int, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse::<Int>().map_err(serde::de::Error::custom)
    }
}

pub mod serde_int_vecs {
    use super::Int;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.trim().parse::<Int>().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
