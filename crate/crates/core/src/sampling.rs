//! Seeded random generators for the self-check suites: branches, branch
//! pairs and minimal tableaux. Cluster generation lives next to the cluster
//! type.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::poly::UniPoly;
use crate::branch::Branch;
use crate::error::Result;
use crate::hn::{euclid_quotients, Coefficient, HNTableau, TableauColumn};
use crate::Valuation;

/// The deterministic RNG used by every suite; the seed comes from the
/// BRANCHLAB_SEED environment variable in the CLI.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero scalar with small numerator over Q.
pub fn random_unit(rng: &mut impl Rng, field: FieldSpec) -> FieldElement {
    match field {
        FieldSpec::Rationals => loop {
            let n = rng.gen_range(-3i64..=3);
            if n != 0 {
                return field.integer(n);
            }
        },
        FieldSpec::PrimeField(p) => field.integer(rng.gen_range(1..p) as i64),
    }
}

fn random_poly_with_order(
    rng: &mut impl Rng,
    field: FieldSpec,
    ord: usize,
    max_deg: usize,
) -> UniPoly {
    let mut coeffs = vec![field.zero(); ord];
    coeffs.push(random_unit(rng, field));
    for _ in ord + 1..=max_deg {
        if rng.gen_bool(0.4) {
            coeffs.push(random_unit(rng, field));
        } else {
            coeffs.push(field.zero());
        }
    }
    UniPoly::new(field, coeffs)
}

/// A random valid branch with parametrization degrees at most `max_deg`
/// whose parametrization meets the origin only at t = 0, so that the
/// elimination oracle is local.
pub fn random_branch(rng: &mut impl Rng, field: FieldSpec, max_deg: usize) -> Branch {
    loop {
        let ord_x = rng.gen_range(1..=4.min(max_deg));
        let ord_y = rng.gen_range(1..=6.min(max_deg));
        let x = random_poly_with_order(rng, field, ord_x, max_deg);
        let y = random_poly_with_order(rng, field, ord_y, max_deg);
        if let Ok(b) = Branch::new(x, y, field) {
            if !b.revisits_origin() {
                return b;
            }
        }
    }
}

/// A random pair of distinct branches; roughly a third of the pairs share a
/// deep tableau prefix (a high-order perturbation of the same branch) so
/// that high-contact paths get exercised.
pub fn random_branch_pair(
    rng: &mut impl Rng,
    field: FieldSpec,
    max_deg: usize,
) -> (Branch, Branch) {
    let f = random_branch(rng, field, max_deg);
    if rng.gen_bool(0.35) {
        for _ in 0..12 {
            let k = rng.gen_range(f.y().ord().map_or(1, |o| o + 1)..=max_deg.max(2));
            let bump = UniPoly::monomial(field, random_unit(rng, field), k);
            let y = f.y().add(&bump);
            if let Ok(g) = Branch::new(f.x().clone(), y, field) {
                if !g.revisits_origin() {
                    return (f, g);
                }
            }
        }
    }
    let g = random_branch(rng, field, max_deg);
    (f, g)
}

/// A random valid minimal-form tableau: the gcd chain strictly reaches 1
/// only at the terminal column, so the minimal policy reproduces it.
pub fn random_minimal_tableau(rng: &mut impl Rng, field: FieldSpec) -> HNTableau {
    let mut c: u64 = rng.gen_range(1..=9);
    let mut columns = Vec::new();
    let mut m_list = Vec::new();
    loop {
        let force_stop = c == 1 || columns.len() >= 4;
        if force_stop || rng.gen_bool(0.45) {
            // terminal column: p coprime to c
            let p = loop {
                let p = rng.gen_range(1..=3 * c.max(2));
                if num_integer::gcd(p, c) == 1 {
                    break p;
                }
            };
            columns.push(TableauColumn::new(
                Valuation::Finite(p),
                Valuation::Finite(c),
                Coefficient::Infinity,
            ));
            m_list.push(euclid_quotients(p, c).iter().sum());
            return HNTableau::new(field, columns, m_list);
        }
        // continuing column: pick the next gcd g >= 2 among divisors of c
        let divisors: Vec<u64> = (2..=c).filter(|d| c.is_multiple_of(*d)).collect();
        let g = divisors[rng.gen_range(0..divisors.len())];
        let p = loop {
            let k = rng.gen_range(1..=6);
            let p = g * k;
            if num_integer::gcd(c, p) == g {
                break p;
            }
        };
        columns.push(TableauColumn::new(
            Valuation::Finite(p),
            Valuation::Finite(c),
            Coefficient::Unit(random_unit(rng, field)),
        ));
        m_list.push(euclid_quotients(p, c).iter().sum());
        c = g;
    }
}

/// Random tableau together with its canonical branch.
pub fn random_tableau_branch(
    rng: &mut impl Rng,
    field: FieldSpec,
) -> Result<(HNTableau, Branch)> {
    let t = random_minimal_tableau(rng, field);
    let b = crate::hn::synthesize_branch(&t)?;
    Ok((t, b))
}
