//! Resultants of bivariate polynomials in s with coefficients in F[t].
//!
//! Used as the elimination oracle for intersection numbers: the resultant of
//! x1(s) - x2(t) and y1(s) - y2(t) with respect to s is an exact polynomial
//! in t whose order is the intersection multiplicity.
//!
//! Sign convention: Sylvester matrix with the rows of the first argument on
//! top, coefficients in descending degree. Swapping the arguments multiplies
//! the result by (-1)^(deg p * deg q).

use crate::algebra::poly::UniPoly;
use crate::algebra::series::Valuation;
use crate::algebra::FieldSpec;
use crate::error::{Error, Result};

/// A polynomial in s whose coefficients are polynomials in t;
/// `coeffs[k]` multiplies `s^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPoly {
    field: FieldSpec,
    coeffs: Vec<UniPoly>,
}

impl SPoly {
    pub fn new(field: FieldSpec, mut coeffs: Vec<UniPoly>) -> Self {
        while coeffs.last().is_some_and(UniPoly::is_zero) {
            coeffs.pop();
        }
        SPoly { field, coeffs }
    }

    /// Builds p(s) - q(t): the s-polynomial with constant-in-s part -q(t).
    pub fn difference(p_of_s: &UniPoly, q_of_t: &UniPoly) -> Self {
        let field = p_of_s.field();
        let mut coeffs: Vec<UniPoly> = (0..=p_of_s.degree().unwrap_or(0))
            .map(|k| UniPoly::constant(p_of_s.coeff(k)))
            .collect();
        coeffs[0] = coeffs[0].sub(q_of_t);
        SPoly::new(field, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_s(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, k: usize) -> UniPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(|| UniPoly::zero(self.field))
    }
}

/// Resultant with respect to s. The zero polynomial is returned when the
/// arguments share a common factor for every t (in particular when either
/// argument is identically zero).
pub fn resultant(p: &SPoly, q: &SPoly) -> Result<UniPoly> {
    let field = p.field;
    if p.is_zero() || q.is_zero() {
        return Ok(UniPoly::zero(field));
    }
    let dp = p.deg_s().unwrap();
    let dq = q.deg_s().unwrap();
    if dp == 0 && dq == 0 {
        return Err(Error::ResultantUndefined);
    }
    if dp == 0 {
        return Ok(p.coeff(0).pow(dq));
    }
    if dq == 0 {
        return Ok(q.coeff(0).pow(dp));
    }
    let n = dp + dq;
    let mut m = vec![vec![UniPoly::zero(field); n]; n];
    for row in 0..dq {
        for k in 0..=dp {
            m[row][row + k] = p.coeff(dp - k);
        }
    }
    for row in 0..dp {
        for k in 0..=dq {
            m[dq + row][row + k] = q.coeff(dq - k);
        }
    }
    if field == FieldSpec::Rationals {
        if let Some(int_rows) = int_matrix(&m) {
            return Ok(int_bareiss_det(int_rows, field));
        }
    }
    Ok(bareiss_det(m))
}

/// Order of the resultant as a valuation; infinite when it vanishes.
pub fn resultant_ord(p: &SPoly, q: &SPoly) -> Result<Valuation> {
    let r = resultant(p, q)?;
    Ok(match r.ord() {
        None => Valuation::Infinite,
        Some(v) => Valuation::Finite(v as u64),
    })
}

type IntPoly = Vec<num_bigint::BigInt>;

/// Integer image of the matrix entries, when every coefficient is integral.
fn int_matrix(m: &[Vec<UniPoly>]) -> Option<Vec<Vec<IntPoly>>> {
    use crate::algebra::field::FieldElement;
    use num_traits::One as _;
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut int_row = Vec::with_capacity(row.len());
        for p in row {
            let mut ip: IntPoly = Vec::new();
            for k in 0..=p.degree().map_or(0, |d| d) {
                match p.coeff(k) {
                    FieldElement::Rational(q) if q.denom().is_one() => ip.push(q.numer().clone()),
                    FieldElement::Rational(_) => return None,
                    FieldElement::Prime { .. } => return None,
                }
            }
            int_trim(&mut ip);
            int_row.push(ip);
        }
        out.push(int_row);
    }
    Some(out)
}

fn int_trim(p: &mut IntPoly) {
    use num_traits::Zero as _;
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    use num_traits::Zero as _;
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![num_bigint::BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_sub(a: &IntPoly, b: &IntPoly) -> IntPoly {
    use num_traits::Zero as _;
    let mut out = vec![num_bigint::BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    int_trim(&mut out);
    out
}

/// Exact division of integer polynomials, used for the Bareiss pivots where
/// exactness is guaranteed.
fn int_exact_div(num: &IntPoly, den: &IntPoly) -> IntPoly {
    use num_traits::Zero as _;
    assert!(!den.is_empty(), "division by zero polynomial");
    if num.is_empty() {
        return Vec::new();
    }
    let mut rem = num.clone();
    let dd = den.len() - 1;
    let lead = den.last().unwrap();
    let mut quot = vec![num_bigint::BigInt::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let q = rem.last().unwrap() / lead;
        debug_assert_eq!(&q * lead, *rem.last().unwrap(), "inexact integer division");
        if !q.is_zero() {
            for (j, c) in den.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        int_trim(&mut rem);
    }
    debug_assert!(rem.is_empty(), "inexact integer polynomial division");
    quot
}

fn int_bareiss_det(mut m: Vec<Vec<IntPoly>>, field: FieldSpec) -> UniPoly {
    use num_traits::One as _;
    let n = m.len();
    let mut sign_flip = false;
    let mut prev: IntPoly = vec![num_bigint::BigInt::one()];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&r| !m[r][k].is_empty()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return UniPoly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = int_sub(&int_mul(&m[k][k], &m[i][j]), &int_mul(&m[i][k], &m[k][j]));
                m[i][j] = int_exact_div(&t, &prev);
            }
            m[i][k] = Vec::new();
        }
        prev = m[k][k].clone();
    }
    let det = &m[n - 1][n - 1];
    let coeffs = det
        .iter()
        .map(|c| {
            let c = if sign_flip { -c.clone() } else { c.clone() };
            crate::algebra::field::FieldElement::Rational(
                num_rational::BigRational::from_integer(c),
            )
        })
        .collect();
    UniPoly::new(field, coeffs)
}

/// Fraction-free Bareiss determinant over the polynomial ring F[t].
/// Every division is exact, so entries stay polynomial.
fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        unreachable!("empty Sylvester matrix");
    }
    let field = m[0][0].field();
    let mut sign_flip = false;
    let mut prev = UniPoly::one(field);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return UniPoly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev);
            }
            m[i][k] = UniPoly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::parse_poly;
    use rand::{Rng, SeedableRng};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn sp(coeffs: &[&str]) -> SPoly {
        SPoly::new(q(), coeffs.iter().map(|c| parse_poly(c, q()).unwrap()).collect())
    }

    #[test]
    fn common_root_for_all_t_gives_zero() {
        // Res_s(s - t, s^2 - t^2) = 0
        let p = sp(&["-t", "1"]);
        let r = sp(&["-t^2", "0", "1"]);
        assert!(resultant(&p, &r).unwrap().is_zero());
        assert_eq!(resultant_ord(&p, &r).unwrap(), Valuation::Infinite);
    }

    #[test]
    fn two_by_two_sylvester() {
        // Res_s(s^2 - t, s) = -t under the p-rows-first convention
        let p = sp(&["-t", "0", "1"]);
        let s = sp(&["0", "1"]);
        let r = resultant(&p, &s).unwrap();
        assert_eq!(r, parse_poly("t", q()).unwrap().neg());
        assert_eq!(r.ord(), Some(1));
    }

    #[test]
    fn cusp_against_parabola_has_order_three() {
        // f = (s, s^2) against target point (t^2, t^3):
        // Res_s(s - t^2, s^2 - t^3) has ord 3
        let p = sp(&["-t^2", "1"]);
        let r = sp(&["-t^3", "0", "1"]);
        assert_eq!(resultant_ord(&p, &r).unwrap(), Valuation::Finite(3));
    }

    #[test]
    fn degree_zero_cases() {
        let c = sp(&["t^3"]);
        let p = sp(&["-t", "0", "1"]);
        // Res(const, p) = const^{deg p}
        assert_eq!(resultant(&c, &p).unwrap(), parse_poly("t^6", q()).unwrap());
        assert_eq!(resultant(&p, &c).unwrap(), parse_poly("t^6", q()).unwrap());
        assert_eq!(resultant(&c, &c), Err(Error::ResultantUndefined));
    }

    fn random_spoly(rng: &mut impl Rng, field: FieldSpec, deg_s: usize, deg_t: usize) -> SPoly {
        let coeffs = (0..=deg_s)
            .map(|_| {
                let cs = (0..=deg_t)
                    .map(|_| field.integer(rng.gen_range(-3..=3)))
                    .collect();
                UniPoly::new(field, cs)
            })
            .collect();
        SPoly::new(field, coeffs)
    }

    #[test]
    fn swap_symmetry_up_to_sign() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for field in [q(), FieldSpec::PrimeField(101)] {
            for _ in 0..25 {
                let (dp, ds) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                let p = random_spoly(&mut rng, field, dp, 2);
                let s = random_spoly(&mut rng, field, ds, 2);
                if p.is_zero() || s.is_zero() {
                    continue;
                }
                let (dp, dq) = (p.deg_s().unwrap(), s.deg_s().unwrap());
                if dp == 0 || dq == 0 {
                    continue;
                }
                let a = resultant(&p, &s).unwrap();
                let b = resultant(&s, &p).unwrap();
                let expect = if (dp * dq) % 2 == 1 { b.neg() } else { b };
                assert_eq!(a, expect);
            }
        }
    }
}
