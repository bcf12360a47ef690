//! Exact rational scalars and their canonical string form.
//!
//! Scalars are [`num_rational::BigRational`], which keeps every value reduced
//! with a positive denominator. In JSON files a rational is written `"p/q"`,
//! or `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// A column vector of rationals.
pub type Vector = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(s: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|x| s * x).collect()
}

/// `acc += s * v`
pub fn axpy(acc: &mut [Rational], s: &Rational, v: &[Rational]) {
    assert_eq!(acc.len(), v.len());
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

/// Largest absolute numerator or denominator; used only in diagnostics.
pub fn height(v: &[Rational]) -> BigInt {
    v.iter()
        .map(|q| q.numer().abs().max(q.denom().clone()))
        .max()
        .unwrap_or_else(BigInt::zero)
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_vector(v: &[String]) -> Result<Vector, Error> {
    v.iter().map(|s| parse_rational(s)).collect()
}
