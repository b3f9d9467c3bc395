//! Rational-function series in t with exact t-adic valuation.
//!
//! Elements are stored as reduced fractions of polynomials, so every value
//! produced by the expansion engine from polynomial input is represented
//! exactly; there is no truncation precision to manage anywhere.

use std::fmt;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

/// A natural number extended with infinity; the value range of the t-adic
/// valuation and of intersection numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

// inherent add/mul keep the extended arithmetic (inf conventions) explicit
// at call sites instead of hiding it behind operator overloading
#[allow(clippy::should_implement_trait)]
impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Valuation::Finite(n) => Some(*n),
            Valuation::Infinite => None,
        }
    }

    /// Panics on infinity; for contexts where finiteness was checked.
    pub fn expect_finite(&self) -> u64 {
        self.finite().expect("unexpected infinite value")
    }

    pub fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    /// Product with the convention inf * x = inf for x >= 1. The zero factor
    /// never arises: tableau entries are at least 1.
    pub fn mul(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a * b),
            _ => Valuation::Infinite,
        }
    }

    pub fn min(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a.min(b)),
            (Valuation::Finite(a), _) | (_, Valuation::Finite(a)) => Valuation::Finite(a),
            _ => Valuation::Infinite,
        }
    }

    /// gcd with the convention gcd(x, inf) = x.
    pub fn gcd(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => {
                Valuation::Finite(num_integer::gcd(a, b))
            }
            (Valuation::Finite(a), _) | (_, Valuation::Finite(a)) => Valuation::Finite(a),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => std::cmp::Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => std::cmp::Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(n) => write!(f, "{n}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl From<u64> for Valuation {
    fn from(n: u64) -> Self {
        Valuation::Finite(n)
    }
}

/// An exact rational function num/den, kept in canonical form: common powers
/// of t stripped, fraction reduced, denominator scaled so its lowest nonzero
/// coefficient is 1. Equality is therefore structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatSeries {
    field: FieldSpec,
    num: UniPoly,
    den: UniPoly,
}

impl RatSeries {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let field = p.field();
        RatSeries { field, num: p, den: UniPoly::one(field) }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Self::from_poly(UniPoly::zero(field))
    }

    fn canonical(mut num: UniPoly, mut den: UniPoly) -> Self {
        let field = num.field();
        if num.is_zero() {
            return RatSeries { field, num, den: UniPoly::one(field) };
        }
        let strip = num.ord().unwrap().min(den.ord().unwrap());
        num = num.shift_down(strip);
        den = den.shift_down(strip);
        if num.degree() != Some(0) && den.degree() != Some(0) {
            let g = num.gcd(&den);
            if g.degree() != Some(0) {
                num = num.exact_div(&g);
                den = den.exact_div(&g);
            }
        }
        let unit = den.trailing_coeff().inv();
        RatSeries { field, num: num.scale(&unit), den: den.scale(&unit) }
    }

    /// Canonical form bypassing the gcd for inputs already known coprime.
    fn from_coprime(mut num: UniPoly, mut den: UniPoly) -> Self {
        let field = num.field();
        if num.is_zero() {
            return RatSeries { field, num, den: UniPoly::one(field) };
        }
        let strip = num.ord().unwrap().min(den.ord().unwrap());
        num = num.shift_down(strip);
        den = den.shift_down(strip);
        let unit = den.trailing_coeff().inv();
        RatSeries { field, num: num.scale(&unit), den: den.scale(&unit) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// ord(num) - ord(den); None for the zero series.
    pub fn ord_signed(&self) -> Option<i64> {
        self.num.ord().map(|n| n as i64 - self.den.ord().unwrap() as i64)
    }

    /// The t-adic valuation. Infinite exactly for zero; a negative valuation
    /// signals misuse (the operand left the valuation ring) and is an error.
    pub fn ord_t(&self) -> Result<Valuation> {
        match self.ord_signed() {
            None => Ok(Valuation::Infinite),
            Some(v) if v < 0 => Err(Error::NotInValuationRing(v)),
            Some(v) => Ok(Valuation::Finite(v as u64)),
        }
    }

    /// Coefficient of t^ord, the lowest nonzero one; panics on zero.
    pub fn leading_coeff(&self) -> FieldElement {
        self.num.trailing_coeff().div(&self.den.trailing_coeff())
    }

    pub fn add(&self, rhs: &RatSeries) -> RatSeries {
        Self::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &RatSeries) -> RatSeries {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatSeries {
        RatSeries { field: self.field, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &RatSeries) -> RatSeries {
        Self::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &RatSeries) -> Result<RatSeries> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.num.mul(&rhs.den), self.den.mul(&rhs.num)))
    }

    pub fn pow(&self, n: usize) -> RatSeries {
        // powers of a reduced fraction stay reduced
        RatSeries::from_coprime(self.num.pow(n), self.den.pow(n))
    }

    /// x^a * y^b for integer exponents of either sign, reduced once at the
    /// end. This is how chain elements are materialized.
    pub fn monomial_in(x: &RatSeries, y: &RatSeries, a: i64, b: i64) -> RatSeries {
        let field = x.field;
        let mut num = UniPoly::one(field);
        let mut den = UniPoly::one(field);
        let apply = |s: &RatSeries, e: i64, num: &mut UniPoly, den: &mut UniPoly| {
            if e >= 0 {
                *num = num.mul(&s.num.pow(e as usize));
                *den = den.mul(&s.den.pow(e as usize));
            } else {
                *num = num.mul(&s.den.pow((-e) as usize));
                *den = den.mul(&s.num.pow((-e) as usize));
            }
        };
        apply(x, a, &mut num, &mut den);
        apply(y, b, &mut num, &mut den);
        RatSeries::canonical(num, den)
    }

    /// Subtracts a scalar.
    pub fn sub_scalar(&self, c: &FieldElement) -> RatSeries {
        self.sub(&RatSeries::from_poly(UniPoly::constant(c.clone())))
    }

    /// Coefficient of t^e in the power-series expansion, computed exactly by
    /// inverting the denominator to order e. Requires a non-negative
    /// valuation operand.
    pub fn coeff_at(&self, e: u64) -> FieldElement {
        if self.is_zero() {
            return self.field.zero();
        }
        let ord = self.ord_signed().unwrap();
        assert!(ord >= 0, "coeff_at on an element outside the valuation ring");
        let e = e as usize;
        // canonical form: den has nonzero constant term whenever ord >= 0
        debug_assert_eq!(self.den.ord(), Some(0));
        let d0_inv = self.den.coeff(0).inv();
        let mut inv = vec![d0_inv.clone()];
        for k in 1..=e {
            let mut s = self.field.zero();
            for j in 1..=k {
                let dj = self.den.coeff(j);
                if !dj.is_zero() {
                    s = s.add(&dj.mul(&inv[k - j]));
                }
            }
            inv.push(s.neg().mul(&d0_inv));
        }
        let mut out = self.field.zero();
        for j in 0..=e {
            let nj = self.num.coeff(j);
            if !nj.is_zero() {
                out = out.add(&nj.mul(&inv[e - j]));
            }
        }
        out
    }
}

impl fmt::Display for RatSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::parse_poly;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn series(num: &str, den: &str) -> RatSeries {
        RatSeries::new(parse_poly(num, q()).unwrap(), parse_poly(den, q()).unwrap()).unwrap()
    }

    fn poly_series(s: &str) -> RatSeries {
        RatSeries::from_poly(parse_poly(s, q()).unwrap())
    }

    #[test]
    fn ord_of_polynomials_and_fractions() {
        assert_eq!(poly_series("t^3 + 2*t^5").ord_t().unwrap(), Valuation::Finite(3));
        assert_eq!(RatSeries::zero(q()).ord_t().unwrap(), Valuation::Infinite);
        let s = series("t^2 + t^3", "1 + 2*t + t^2"); // (t^2+t^3)/(1+t)^2
        assert_eq!(s.ord_t().unwrap(), Valuation::Finite(2));
    }

    #[test]
    fn negative_order_is_rejected() {
        let s = series("t^2", "t^3");
        assert_eq!(s.ord_t(), Err(Error::NotInValuationRing(-1)));
    }

    #[test]
    fn division_normalizes() {
        // t^3 / t^2 = t
        let d = poly_series("t^3").div(&poly_series("t^2")).unwrap();
        assert_eq!(d, poly_series("t"));
        // t^2 / (t + t^2)^2 = 1/(1+t)^2, ord 0
        let den = poly_series("t + t^2").pow(2);
        let s = poly_series("t^2").div(&den).unwrap();
        assert_eq!(s.ord_t().unwrap(), Valuation::Finite(0));
        assert_eq!(s, series("1", "1 + 2*t + t^2"));
    }

    #[test]
    fn pow_is_binomial() {
        assert_eq!(poly_series("t + t^2").pow(2), poly_series("t^2 + 2*t^3 + t^4"));
    }

    #[test]
    fn coeff_extraction() {
        let s = series("1", "1 + 2*t + t^2"); // 1/(1+t)^2 = 1 - 2t + 3t^2 - ...
        assert_eq!(s.coeff_at(0), q().integer(1));
        assert_eq!(s.coeff_at(1), q().integer(-2));
        assert_eq!(s.coeff_at(2), q().integer(3));
        assert_eq!(poly_series("t^3").coeff_at(3), q().integer(1));
        assert_eq!(poly_series("t^3").coeff_at(2), q().integer(0));
    }

    #[test]
    fn leading_coeff_is_nonzero() {
        let s = series("2*t^2 + t^3", "3 + t");
        assert_eq!(s.leading_coeff(), q().fraction(2, 3).unwrap());
        assert_eq!(s.coeff_at(2), q().fraction(2, 3).unwrap());
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(
            poly_series("t").div(&RatSeries::zero(q())),
            Err(Error::DivisionByZero)
        );
    }
}
