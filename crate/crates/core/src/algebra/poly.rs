//! Univariate polynomials in t over an exact field.
//!
//! Carrier for branch parametrizations x(t), y(t) and for resultants.
//! Text grammar (whitespace insignificant):
//!
//! ```text
//! poly := term (('+'|'-') term)*
//! term := [coef '*'] 't' ['^' nat] | coef
//! coef := int | int '/' int
//! ```

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// A dense univariate polynomial; `coeffs[i]` multiplies `t^i`.
/// Trailing zeros are normalized away, so the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.field(), vec![c])
    }

    pub fn monomial(field: FieldSpec, coeff: FieldElement, exp: usize) -> Self {
        let mut coeffs = vec![field.zero(); exp];
        coeffs.push(coeff);
        Self::new(field, coeffs)
    }

    /// `t^exp` with unit coefficient.
    pub fn t_power(field: FieldSpec, exp: usize) -> Self {
        Self::monomial(field, field.one(), exp)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order at t = 0: the lowest exponent with nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coefficient of the highest power; panics on zero.
    pub fn leading_coeff(&self) -> FieldElement {
        self.coeffs.last().expect("leading coefficient of zero").clone()
    }

    /// Coefficient of the lowest power; panics on zero.
    pub fn trailing_coeff(&self) -> FieldElement {
        self.coeff(self.ord().expect("trailing coefficient of zero"))
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        UniPoly::new(self.field, coeffs)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(FieldElement::neg).collect())
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        UniPoly::new(self.field, coeffs)
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, n: usize) -> UniPoly {
        let mut acc = UniPoly::one(self.field);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Euclidean division; panics if `rhs` is zero.
    pub fn divrem(&self, rhs: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        assert_eq!(self.field, rhs.field, "field mismatch");
        let dr = rhs.degree().unwrap();
        let lead_inv = rhs.leading_coeff().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dr)];
        while rem.len() > dr {
            let k = rem.len() - 1 - dr;
            let q = rem.last().unwrap().mul(&lead_inv);
            if !q.is_zero() {
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&q.mul(b));
                }
                quot[k] = q;
            }
            rem.pop();
        }
        (UniPoly::new(self.field, quot), UniPoly::new(self.field, rem))
    }

    /// Division known to be exact; panics on a nonzero remainder.
    pub fn exact_div(&self, rhs: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor. Over Q this runs a primitive
    /// pseudo-remainder sequence on integer polynomials, which keeps the
    /// coefficient growth polynomial; over GF(p) plain Euclid is fine.
    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        match self.field {
            FieldSpec::Rationals => gcd_primitive_prs(self, rhs),
            FieldSpec::PrimeField(_) => {
                let mut a = self.clone();
                let mut b = rhs.clone();
                while !b.is_zero() {
                    let r = a.divrem(&b).1;
                    a = b;
                    b = r;
                }
                if a.is_zero() {
                    a
                } else {
                    let li = a.leading_coeff().inv();
                    a.scale(&li)
                }
            }
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift_up(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly::new(self.field, coeffs)
    }

    /// Divides by `t^k`; panics unless ord >= k.
    pub fn shift_down(&self, k: usize) -> UniPoly {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        assert!(self.ord().unwrap() >= k, "not divisible by t^{k}");
        UniPoly::new(self.field, self.coeffs[k..].to_vec())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Reduce an integer-coefficient polynomial over Q into GF(p).
    /// Returns None if a coefficient has a denominator divisible by p.
    pub fn reduce_mod(&self, p: u64) -> Option<UniPoly> {
        let target = FieldSpec::PrimeField(p);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            match c {
                FieldElement::Rational(q) => {
                    let num = mod_bigint(q.numer(), p);
                    let den = mod_bigint(q.denom(), p);
                    if den == 0 {
                        return None;
                    }
                    coeffs.push(target.integer(num as i64).div(&target.integer(den as i64)));
                }
                FieldElement::Prime { .. } => return None,
            }
        }
        Some(UniPoly::new(target, coeffs))
    }
}

/// Primitive pseudo-remainder sequence over Z, returned monic over Q.
fn gcd_primitive_prs(a: &UniPoly, b: &UniPoly) -> UniPoly {
    use num_bigint::BigInt;
    use num_traits::Zero as _;

    fn to_int(p: &UniPoly) -> Vec<BigInt> {
        // clear denominators
        let mut lcm = BigInt::from(1);
        for c in 0..=p.degree().unwrap_or(0) {
            if let FieldElement::Rational(q) = p.coeff(c) {
                let d = q.denom().clone();
                let g = num_integer::Integer::gcd(&lcm, &d);
                lcm = lcm / g * d;
            }
        }
        (0..=p.degree().unwrap_or(0))
            .map(|c| match p.coeff(c) {
                FieldElement::Rational(q) => q.numer() * (&lcm / q.denom()),
                FieldElement::Prime { .. } => unreachable!(),
            })
            .collect()
    }

    fn trim(v: &mut Vec<BigInt>) {
        while v.last().is_some_and(BigInt::is_zero) {
            v.pop();
        }
    }

    fn content(v: &[BigInt]) -> BigInt {
        let mut g = BigInt::zero();
        for c in v {
            g = num_integer::Integer::gcd(&g, c);
            if g == BigInt::from(1) {
                break;
            }
        }
        g
    }

    fn make_primitive(v: &mut Vec<BigInt>) {
        trim(v);
        let g = content(v);
        if !g.is_zero() && g != BigInt::from(1) {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    // pseudo-remainder of u by v: lc(v)^(du-dv+1) u mod v
    fn pseudo_rem(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
        let mut r = u.to_vec();
        let dv = v.len() - 1;
        let lv = v.last().unwrap().clone();
        while r.len() > dv {
            let lead = r.last().unwrap().clone();
            let k = r.len() - 1 - dv;
            for c in r.iter_mut() {
                *c = &*c * &lv;
            }
            for (j, vc) in v.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&lead * vc);
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    if a.is_zero() {
        return if b.is_zero() {
            b.clone()
        } else {
            let li = b.leading_coeff().inv();
            b.scale(&li)
        };
    }
    if b.is_zero() {
        let li = a.leading_coeff().inv();
        return a.scale(&li);
    }
    let mut u = to_int(a);
    let mut v = to_int(b);
    make_primitive(&mut u);
    make_primitive(&mut v);
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_empty() {
        let mut r = pseudo_rem(&u, &v);
        make_primitive(&mut r);
        u = v;
        v = r;
    }
    let field = a.field();
    let coeffs: Vec<FieldElement> = u
        .iter()
        .map(|c| FieldElement::Rational(num_rational::BigRational::from_integer(c.clone())))
        .collect();
    let out = UniPoly::new(field, coeffs);
    let li = out.leading_coeff().inv();
    out.scale(&li)
}

fn mod_bigint(n: &num_bigint::BigInt, p: u64) -> u64 {
    let r = n % num_bigint::BigInt::from(p);
    let r = if r.is_negative() { r + num_bigint::BigInt::from(p) } else { r };
    u64::try_from(r).unwrap()
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = split_sign(c);
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Splits a scalar into (is_negative, magnitude); GF(p) representatives are
/// never treated as negative.
fn split_sign(c: &FieldElement) -> (bool, FieldElement) {
    match c {
        FieldElement::Rational(q) if q.is_negative() => {
            (true, FieldElement::Rational(-q.clone()))
        }
        _ => (false, c.clone()),
    }
}

/// Parses the polynomial grammar above; coefficients are reduced into `field`.
pub fn parse_poly(text: &str, field: FieldSpec) -> Result<UniPoly> {
    Parser { bytes: text.as_bytes(), pos: 0, field }.run()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn run(&mut self) -> Result<UniPoly> {
        let mut acc = UniPoly::zero(self.field);
        self.skip_ws();
        if self.bytes.is_empty() || self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let term = self.term()?;
            acc = if negate { acc.sub(&term) } else { acc.add(&term) };
            self.skip_ws();
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(c) => return Err(self.err(&format!("expected '+' or '-', got {:?}", c as char))),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<UniPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                let e = self.opt_exponent()?;
                Ok(UniPoly::t_power(self.field, e))
            }
            Some(c) if c.is_ascii_digit() => {
                let coef = self.coefficient()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some(b't') {
                        return Err(self.err("expected 't' after '*'"));
                    }
                    self.pos += 1;
                    let e = self.opt_exponent()?;
                    Ok(UniPoly::monomial(self.field, coef, e))
                } else {
                    Ok(UniPoly::constant(coef))
                }
            }
            Some(c) => Err(self.err(&format!("unexpected {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn coefficient(&mut self) -> Result<FieldElement> {
        let n = self.integer()?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let d = self.integer()?;
            self.field.fraction(n, d)
        } else {
            Ok(self.field.integer(n))
        }
    }

    fn opt_exponent(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            if e < 0 {
                return Err(self.err("negative exponent"));
            }
            Ok(e as usize)
        } else {
            Ok(1)
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| self.err("number too large"))
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, reason: &str) -> Error {
        Error::PolySyntax { at: self.pos, reason: reason.to_string() }
    }
}

/// Rational lift of a coefficient; only well-defined over Q.
pub fn as_rational(c: &FieldElement) -> BigRational {
    BigRational::from(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn parse_basic_terms() {
        let p = parse_poly("t^3 + 2*t^5", q()).unwrap();
        assert_eq!(p.coeff(3), q().integer(1));
        assert_eq!(p.coeff(5), q().integer(2));
        assert_eq!(p.coeff(4), q().integer(0));
        assert_eq!(p.degree(), Some(5));
        assert_eq!(p.ord(), Some(3));
    }

    #[test]
    fn parse_reduces_into_prime_field() {
        let f = FieldSpec::PrimeField(3);
        assert!(parse_poly("3*t", f).unwrap().is_zero());
    }

    #[test]
    fn parse_cancellation() {
        assert!(parse_poly("t^2 - t^2", q()).unwrap().is_zero());
    }

    #[test]
    fn parse_fractions_and_signs() {
        let p = parse_poly("-1/2*t^2 + 7 - t", q()).unwrap();
        assert_eq!(p.coeff(2), q().fraction(-1, 2).unwrap());
        assert_eq!(p.coeff(0), q().integer(7));
        assert_eq!(p.coeff(1), q().integer(-1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_poly("t +", q()), Err(Error::PolySyntax { .. })));
        assert!(matches!(parse_poly("t ^ -2", q()), Err(Error::PolySyntax { .. })));
        assert!(matches!(parse_poly("2 t", q()), Err(Error::PolySyntax { .. })));
        assert!(matches!(parse_poly("", q()), Err(Error::PolySyntax { .. })));
        assert!(matches!(parse_poly("1/0", q()), Err(Error::FieldSyntax(_))));
    }

    #[test]
    fn display_round_trips() {
        for s in ["t^3 + 2*t^5", "-1/2*t^2 + 7 - t", "t", "0", "3 - t^4"] {
            let p = parse_poly(s, q()).unwrap_or_else(|_| UniPoly::zero(q()));
            let shown = p.to_string();
            let again = parse_poly(&shown, q()).unwrap_or_else(|_| UniPoly::zero(q()));
            assert_eq!(p, again, "round trip through {shown:?}");
        }
    }

    #[test]
    fn divrem_and_gcd() {
        let a = parse_poly("t^3 - t", q()).unwrap(); // t(t-1)(t+1)
        let b = parse_poly("t^2 - t", q()).unwrap(); // t(t-1)
        let (quot, rem) = a.divrem(&b);
        assert_eq!(a, b.mul(&quot).add(&rem));
        let g = a.gcd(&b);
        assert_eq!(g, parse_poly("t^2 - t", q()).unwrap());
    }

    #[test]
    fn exact_division_of_products() {
        let a = parse_poly("1 + t + 3*t^2", q()).unwrap();
        let b = parse_poly("2 - t^3", q()).unwrap();
        assert_eq!(a.mul(&b).exact_div(&b), a);
    }
}
