//! Property tests for the arithmetic layer and the expansion engine.

use branchlab_core::algebra::poly::parse_poly;
use branchlab_core::algebra::series::RatSeries;
use branchlab_core::hn::{
    hn_tableau, synthesize_branch, synthesize_branch_seeded, DepthPolicy,
};
use branchlab_core::intersect::{
    approximation_closed_form, contact_order_of, mu_approximation, ApproxSpec,
};
use branchlab_core::invariants::characteristic_data;
use branchlab_core::sampling::{random_tableau_branch, seeded_rng};
use branchlab_core::{FieldSpec, UniPoly, Valuation};
use proptest::prelude::*;

fn small_poly(field: FieldSpec) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-4i64..=4, 0..7)
        .prop_map(move |cs| UniPoly::new(field, cs.iter().map(|&c| field.integer(c)).collect()))
}

fn small_series(field: FieldSpec) -> impl Strategy<Value = RatSeries> {
    (small_poly(field), small_poly(field)).prop_filter_map("nonzero denominator", |(n, d)| {
        if d.is_zero() {
            None
        } else {
            Some(RatSeries::new(n, d).unwrap())
        }
    })
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(
        a in small_series(FieldSpec::Rationals),
        b in small_series(FieldSpec::Rationals),
    ) {
        let prod = a.mul(&b);
        let (oa, ob) = (a.ord_signed(), b.ord_signed());
        match (oa, ob) {
            (Some(x), Some(y)) => prop_assert_eq!(prod.ord_signed(), Some(x + y)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn valuation_of_sums(
        a in small_series(FieldSpec::Rationals),
        b in small_series(FieldSpec::Rationals),
    ) {
        let sum = a.add(&b);
        match (a.ord_signed(), b.ord_signed()) {
            (Some(x), Some(y)) => {
                if let Some(o) = sum.ord_signed() {
                    prop_assert!(o >= x.min(y));
                }
                if x != y {
                    prop_assert_eq!(sum.ord_signed(), Some(x.min(y)));
                }
            }
            (Some(x), None) => prop_assert_eq!(sum.ord_signed(), Some(x)),
            (None, Some(y)) => prop_assert_eq!(sum.ord_signed(), Some(y)),
            (None, None) => prop_assert!(sum.is_zero()),
        }
    }

    #[test]
    fn head_coefficient_is_nonzero(s in small_series(FieldSpec::Rationals)) {
        prop_assume!(!s.is_zero());
        prop_assume!(s.ord_signed().unwrap() >= 0);
        let ord = s.ord_signed().unwrap() as u64;
        prop_assert!(!s.coeff_at(ord).is_zero());
        prop_assert_eq!(s.coeff_at(ord), s.leading_coeff());
    }

    #[test]
    fn frobenius_over_prime_fields(a in 0u64..101, b in 0u64..101) {
        for p in [3u64, 7, 101] {
            let f = FieldSpec::PrimeField(p);
            let (x, y) = (f.integer(a as i64), f.integer(b as i64));
            prop_assert_eq!(x.add(&y).pow(p), x.pow(p).add(&y.pow(p)));
        }
    }
}

#[test]
fn chain_telescoping_on_random_branches() {
    use branchlab_core::hn::euclid_chain;
    let mut rng = seeded_rng(71);
    for _ in 0..50 {
        let b = branchlab_core::sampling::random_branch(&mut rng, FieldSpec::Rationals, 8);
        if b.x().is_zero() || b.y().is_zero() {
            continue;
        }
        let ch = match euclid_chain(&b.y_series(), &b.x_series()) {
            Ok(ch) => ch,
            Err(_) => continue,
        };
        let v = &ch.eta_vals;
        for i in 1..=ch.kappa {
            assert_eq!(v[i - 1], ch.s_list[i - 1] * v[i] + v[i + 1]);
        }
        assert_eq!(v[ch.kappa], num_integer::gcd(v[0], v[1]));
        assert_eq!(ch.m, ch.s_list.iter().sum::<u64>());
    }
}

#[test]
fn random_tableaux_terminate_properly() {
    let mut rng = seeded_rng(72);
    for _ in 0..120 {
        let (t, _) = random_tableau_branch(&mut rng, FieldSpec::Rationals).unwrap();
        let last = t.column(t.len() - 1);
        let (p, c) = (last.p.expect_finite(), last.c.expect_finite());
        assert!(c == 1 || num_integer::gcd(c, p) == 1);
        for col in &t.columns()[..t.len() - 1] {
            let g = num_integer::gcd(col.p.expect_finite(), col.c.expect_finite());
            assert!(g > 1, "minimal tableaux stop at the first gcd-1 column");
        }
    }
}

#[test]
fn perturbing_an_approximation() {
    // changing the terminal unit keeps the curvette property; changing a
    // prefix coefficient destroys the required contact order
    let mut rng = seeded_rng(73);
    let field = FieldSpec::Rationals;
    let mut seen_deep = 0;
    for _ in 0..60 {
        let (t, f) = random_tableau_branch(&mut rng, field).unwrap();
        let data = characteristic_data(&t).unwrap();
        for j in 1..=data.h {
            let spec = ApproxSpec::for_index(&t, j).unwrap();
            let approx = mu_approximation(&t, &spec).unwrap();
            let g_other = synthesize_branch_seeded(&approx, &field.integer(2)).unwrap();
            let iota = branchlab_core::intersect::intersection_of_branches(&f, &g_other)
                .unwrap()
                .expect_finite();
            assert_eq!(iota, data.sg_seq[j], "terminal unit does not matter");
            if spec.mu > 1 {
                seen_deep += 1;
                let mut cols = approx.columns().to_vec();
                let branchlab_core::hn::Coefficient::Unit(a) = &cols[0].a else {
                    unreachable!()
                };
                cols[0].a = branchlab_core::hn::Coefficient::Unit(a.add(&field.one()).add(
                    // keep it nonzero
                    &if a.add(&field.one()).is_zero() { field.one() } else { field.zero() },
                ));
                let broken = branchlab_core::hn::HNTableau::new(
                    field,
                    cols,
                    approx.m_list().to_vec(),
                );
                if let Ok(g_broken) = synthesize_branch(&broken) {
                    let s = contact_order_of(&f, &g_broken).s;
                    assert!(
                        s < Valuation::Finite(spec.mu as u64 - 1),
                        "a prefix perturbation must reduce the contact order"
                    );
                }
            }
        }
    }
    assert!(seen_deep > 0, "the generator must produce multi-column tableaux");
}

#[test]
fn closed_form_matches_semigroup() {
    let mut rng = seeded_rng(74);
    for _ in 0..80 {
        let (t, _) = random_tableau_branch(&mut rng, FieldSpec::Rationals).unwrap();
        let data = characteristic_data(&t).unwrap();
        for j in 1..=data.h {
            let mu = data.index(j).unwrap();
            assert_eq!(approximation_closed_form(&t, mu), data.sg_seq[j]);
            // the divisibility law behind it
            let c_mu = t.column(mu - 1).c.expect_finite();
            for i in 1..mu {
                assert_eq!(t.column(i - 1).p.expect_finite() % c_mu, 0);
            }
            for i in 1..=mu {
                assert_eq!(t.column(i - 1).c.expect_finite() % c_mu, 0);
            }
        }
    }
}

#[test]
fn swapping_parametrization_swaps_tableau_rows() {
    let field = FieldSpec::Rationals;
    let b = branchlab_core::Branch::new(
        parse_poly("t^4", field).unwrap(),
        parse_poly("t^6 + t^7", field).unwrap(),
        field,
    )
    .unwrap();
    let t = hn_tableau(&b, DepthPolicy::Minimal);
    let s = hn_tableau(&b.swapped(), DepthPolicy::Minimal);
    // first column swaps p and c
    assert_eq!(t.column(0).p, s.column(0).c);
    assert_eq!(t.column(0).c, s.column(0).p);
}
