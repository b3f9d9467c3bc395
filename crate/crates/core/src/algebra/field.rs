//! Ground fields: the rationals and prime fields GF(p).
//!
//! All arithmetic is exact and equality is decidable. Rationals are kept in
//! lowest terms with positive denominator; GF(p) elements are canonical
//! representatives in `0..p`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A ground field: Q or GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// 0 for the rationals, p for GF(p).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => FieldElement::Prime { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> FieldElement {
        self.integer(1)
    }

    /// The canonical image of an integer in the field.
    pub fn integer(&self, n: i64) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(n.into())),
            FieldSpec::PrimeField(p) => FieldElement::Prime {
                value: n.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    /// A fraction literal `num/den` reduced into the field.
    pub fn fraction(&self, num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::FieldSyntax("zero denominator in literal".into()));
        }
        let d = self.integer(den);
        if d.is_zero() {
            // e.g. 1/7 over GF(7)
            return Err(Error::FieldSyntax(format!(
                "denominator {den} vanishes in GF({})",
                self.characteristic()
            )));
        }
        Ok(self.integer(num).div(&d))
    }

    /// Parses a scalar literal: an integer or `int/int`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        let bad = || Error::FieldSyntax(format!("bad scalar literal {text:?}"));
        if let Some((n, d)) = text.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            self.fraction(n, d)
        } else {
            let n: i64 = text.parse().map_err(|_| bad())?;
            Ok(self.integer(n))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// Parses `"Q"` or `"GF(p)"` with p a prime literal.
pub fn parse_field(text: &str) -> Result<FieldSpec> {
    let text = text.trim();
    if text == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if let Some(inner) = text.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::FieldSyntax(format!("bad modulus {inner:?}")))?;
        if !is_prime(p) {
            return Err(Error::PrimeRequired(p));
        }
        return Ok(FieldSpec::PrimeField(p));
    }
    Err(Error::FieldSyntax(format!(
        "expected \"Q\" or \"GF(p)\", got {text:?}"
    )))
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    // Known-sufficient witness set for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// An exact scalar in Q or GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl FieldElement {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rationals,
            FieldElement::Prime { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Prime { value, .. } => *value == 1,
        }
    }

    fn binop(
        &self,
        rhs: &FieldElement,
        q: impl Fn(&BigRational, &BigRational) -> BigRational,
        p: impl Fn(u64, u64, u64) -> u64,
    ) -> FieldElement {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(q(a, b)),
            (
                FieldElement::Prime { value: a, modulus: m },
                FieldElement::Prime { value: b, modulus: m2 },
            ) => {
                assert_eq!(m, m2, "field mismatch");
                FieldElement::Prime { value: p(*a, *b, *m), modulus: *m }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        self.binop(rhs, |a, b| a + b, |a, b, m| {
            let s = a as u128 + b as u128;
            (s % m as u128) as u64
        })
    }

    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        self.binop(rhs, |a, b| a - b, |a, b, m| {
            let s = a as u128 + (m - b) as u128;
            (s % m as u128) as u64
        })
    }

    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        self.binop(rhs, |a, b| a * b, mul_mod)
    }

    pub fn neg(&self) -> FieldElement {
        self.field().zero().sub(self)
    }

    /// Multiplicative inverse; panics on zero (callers check).
    pub fn inv(&self) -> FieldElement {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            FieldElement::Rational(q) => FieldElement::Rational(q.recip()),
            FieldElement::Prime { value, modulus } => FieldElement::Prime {
                value: pow_mod(*value, *modulus - 2, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn div(&self, rhs: &FieldElement) -> FieldElement {
        self.mul(&rhs.inv())
    }

    pub fn pow(&self, mut n: u64) -> FieldElement {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Exact string form: `-3/2` over Q, the canonical representative over GF(p).
    pub fn to_exact_string(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Converts to a rational when the element lives in Q; used by matrix code.
impl From<&FieldElement> for BigRational {
    fn from(e: &FieldElement) -> Self {
        match e {
            FieldElement::Rational(q) => q.clone(),
            FieldElement::Prime { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }
}

/// Is the rational a non-negative integer? Helper for matrix invariants.
pub fn is_nonneg_integer(q: &BigRational) -> bool {
    q.denom().is_one() && !q.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_literals() {
        assert_eq!(parse_field("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(parse_field("GF(7)").unwrap(), FieldSpec::PrimeField(7));
        assert_eq!(parse_field("GF(6)"), Err(Error::PrimeRequired(6)));
        assert!(matches!(parse_field("R"), Err(Error::FieldSyntax(_))));
        assert!(matches!(parse_field("GF(x)"), Err(Error::FieldSyntax(_))));
    }

    #[test]
    fn field_spec_characteristic() {
        assert_eq!(FieldSpec::Rationals.characteristic(), 0);
        assert_eq!(FieldSpec::PrimeField(101).characteristic(), 101);
    }

    #[test]
    fn rational_arithmetic_is_canonical() {
        let f = FieldSpec::Rationals;
        let half = f.fraction(1, 2).unwrap();
        let third = f.fraction(-2, -6).unwrap();
        let sum = half.add(&third);
        assert_eq!(sum, f.fraction(5, 6).unwrap());
        assert_eq!(sum.to_exact_string(), "5/6");
        assert_eq!(f.fraction(2, -4).unwrap().to_exact_string(), "-1/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::PrimeField(7);
        let three = f.integer(3);
        let five = f.integer(5);
        assert_eq!(three.mul(&five), f.integer(1));
        assert_eq!(three.inv(), five);
        assert!(f.integer(7).is_zero());
        assert_eq!(f.fraction(1, 2).unwrap(), f.integer(4));
        assert!(f.fraction(1, 7).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(101));
        assert!(is_prime(997));
        assert!(is_prime(4294967311)); // > 2^32
        assert!(!is_prime(1));
        assert!(!is_prime(6));
        assert!(!is_prime(4294967297)); // 641 * 6700417
    }
}
