//! Contact order of expansions, intersection numbers by three independent
//! methods, resolution clusters, and approximation (curvette) synthesis.
//!
//! The three intersection paths are deliberately separate computations:
//! the contact formula sums p_i c'_i over the agreeing columns plus a
//! minimum term at the divergence column; the resultant path eliminates the
//! parameters; the point-count path replays both blow-up sequences jointly
//! and sums multiplicity products over the shared points. The randomized
//! suites assert their agreement.

use std::cmp::Ordering;

use crate::algebra::field::FieldElement;
use crate::algebra::resultant::{resultant_ord, SPoly};
use crate::algebra::series::Valuation;
use crate::branch::Branch;
use crate::cluster::matrices::inverse_proximity;
use crate::cluster::Cluster;
use crate::error::{Error, Result};
use crate::hn::{
    hn_tableau, multiplicity_sequence, synthesize_branch, Coefficient, DepthPolicy, HNTableau,
    TableauColumn, TableauExpansion,
};
use crate::invariants::characteristic_data;

/// Contact order of two expansions: the number of leading columns agreeing
/// in the ratio p/c and in the coefficient a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactData {
    pub s: Valuation,
    /// 1-based index of the first column where the tableaux differ; None
    /// when they never do.
    pub first_divergence: Option<usize>,
}

fn ratios_equal(a: &TableauColumn, b: &TableauColumn) -> bool {
    a.p.mul(b.c) == b.p.mul(a.c)
}

fn coefficients_equal(a: &TableauColumn, b: &TableauColumn) -> bool {
    match (&a.a, &b.a) {
        (Coefficient::Unit(x), Coefficient::Unit(y)) => x == y,
        (Coefficient::Zero, Coefficient::Zero) => true,
        _ => false,
    }
}

fn columns_agree(a: &TableauColumn, b: &TableauColumn) -> bool {
    ratios_equal(a, b) && coefficients_equal(a, b)
}

/// Intersection-number budget above which two expansions must belong to the
/// same branch: the order of a nonzero resultant cannot exceed it.
fn budget(a: &TableauExpansion, b: &TableauExpansion) -> u128 {
    a.degree_hint() as u128 * b.degree_hint() as u128
}

/// Scans columns until the first divergence. Two expansions that agree
/// beyond every bound the degrees allow, or that both stabilize into the
/// same repeating degenerate column, belong to the same branch: s is
/// infinite.
pub fn contact_order(a: &mut TableauExpansion, b: &mut TableauExpansion) -> ContactData {
    let limit = budget(a, b);
    let mut weight: u128 = 0;
    let mut i = 0usize;
    loop {
        let ca = a.column(i);
        let cb = b.column(i);
        if !columns_agree(&ca, &cb) {
            return ContactData { s: Valuation::Finite(i as u64), first_divergence: Some(i + 1) };
        }
        if ca.is_degenerate() && cb.is_degenerate() {
            // both expansions repeat this column forever
            return ContactData { s: Valuation::Infinite, first_divergence: None };
        }
        weight += ca.p.expect_finite() as u128 * cb.c.expect_finite() as u128;
        if weight > limit {
            // a finite intersection number never exceeds the degree budget
            return ContactData { s: Valuation::Infinite, first_divergence: None };
        }
        i += 1;
    }
}

/// Contact order of two branches.
pub fn contact_order_of(f: &Branch, g: &Branch) -> ContactData {
    contact_order(&mut TableauExpansion::from_branch(f), &mut TableauExpansion::from_branch(g))
}

/// The three equivalent proportionality statements over the first s columns:
/// ratios against c_1, against every c_i, and columnwise.
pub fn proportionality_conditions(t1: &HNTableau, t2: &HNTableau, s: usize) -> (bool, bool, bool) {
    assert!(t1.len() >= s && t2.len() >= s, "need columns 1..=s");
    let col1 = |i: usize| t1.column(i - 1);
    let col2 = |i: usize| t2.column(i - 1);
    let ratio_eq = |pj: Valuation, ci: Valuation, pj2: Valuation, ci2: Valuation| {
        pj.mul(ci2) == pj2.mul(ci)
    };
    let c1 = (1..=s).all(|j| ratio_eq(col1(j).p, col1(1).c, col2(j).p, col2(1).c));
    let c2 = (1..=s)
        .all(|j| (1..=s).all(|i| ratio_eq(col1(j).p, col1(i).c, col2(j).p, col2(i).c)));
    let c3 = (1..=s).all(|j| ratio_eq(col1(j).p, col1(j).c, col2(j).p, col2(j).c));
    (c1, c2, c3)
}

/// True iff all three equivalent ratio conditions hold through column s.
/// When they do and column s+1 is available, the implied proportionality at
/// column s+1 is asserted as well.
pub fn proportionality_check(t1: &HNTableau, t2: &HNTableau, s: usize) -> bool {
    let (c1, c2, c3) = proportionality_conditions(t1, t2, s);
    debug_assert!(c1 == c2 && c2 == c3, "the three conditions are equivalent");
    let holds = c1 && c2 && c3;
    if holds && t1.len() > s && t2.len() > s {
        for j in 1..=s {
            debug_assert!(
                t1.column(j - 1).p.mul(t2.column(s).c) == t2.column(j - 1).p.mul(t1.column(s).c),
                "consequence at column s+1 must follow"
            );
        }
    }
    holds
}

/// Intersection number from the contact formula: sum of p_i c'_i over the
/// agreeing columns plus min(p c', p' c) at the divergence column. Both
/// symmetric expressions are computed and must agree.
pub fn intersection_number(
    a: &mut TableauExpansion,
    b: &mut TableauExpansion,
) -> Result<Valuation> {
    let contact = contact_order(a, b);
    let s = match contact.s {
        Valuation::Infinite => return Err(Error::SameBranch),
        Valuation::Finite(s) => s as usize,
    };
    let mut sum_a: u128 = 0;
    let mut sum_b: u128 = 0;
    for i in 0..s {
        let (ca, cb) = (a.column(i), b.column(i));
        sum_a += ca.p.expect_finite() as u128 * cb.c.expect_finite() as u128;
        sum_b += cb.p.expect_finite() as u128 * ca.c.expect_finite() as u128;
    }
    assert_eq!(sum_a, sum_b, "the two displayed forms of the formula must agree");
    let (ca, cb) = (a.column(s), b.column(s));
    let delta = ca.p.mul(cb.c).min(cb.p.mul(ca.c));
    let delta = delta.finite().expect("divergence column cannot have both terms infinite");
    Ok(Valuation::Finite(sum_a as u64 + delta))
}

/// Contact-formula intersection number of two branches.
pub fn intersection_of_branches(f: &Branch, g: &Branch) -> Result<Valuation> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    intersection_number(
        &mut TableauExpansion::from_branch(f),
        &mut TableauExpansion::from_branch(g),
    )
}

/// Contact-formula intersection number of two abstract tableaux, expanded
/// through their canonical branches.
pub fn intersection_of_tableaux(t1: &HNTableau, t2: &HNTableau) -> Result<Valuation> {
    intersection_number(
        &mut TableauExpansion::from_tableau(t1)?,
        &mut TableauExpansion::from_tableau(t2)?,
    )
}

/// Elimination oracle: ord_t of Res_s(x1(s) - x2(t), y1(s) - y2(t)).
/// Infinite exactly when the branches have the same image.
pub fn resultant_intersection(f: &Branch, g: &Branch) -> Result<Valuation> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    let p = SPoly::difference(f.x(), g.x());
    let q = SPoly::difference(f.y(), g.y());
    resultant_ord(&p, &q)
}

/// Noether's formula: the sum of products of multiplicities over the
/// infinitely near points shared by the two branches, computed by replaying
/// both Euclidean blow-up sequences jointly. Independent of the contact
/// formula's sum.
pub fn noether_intersection(f: &Branch, g: &Branch) -> Result<u64> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    noether_of_expansions(
        &mut TableauExpansion::from_branch(f),
        &mut TableauExpansion::from_branch(g),
    )
}

pub fn noether_of_expansions(
    a: &mut TableauExpansion,
    b: &mut TableauExpansion,
) -> Result<u64> {
    let limit = budget(a, b);
    let mut total: u128 = 0;
    let mut col = 0usize;
    loop {
        let ca = a.column(col);
        let cb = b.column(col);
        if ca.is_degenerate() && cb.is_degenerate() {
            let both_y = !ca.p.is_finite() && !cb.p.is_finite();
            let both_x = !ca.c.is_finite() && !cb.c.is_finite();
            if both_y || both_x {
                // the expansions repeat the same kind of column forever
                return Err(Error::SameBranch);
            }
        }
        let (mut pa, mut qa) = (ca.p, ca.c);
        let (mut pb, mut qb) = (cb.p, cb.c);
        loop {
            let ma = pa.min(qa).expect_finite() as u128;
            let mb = pb.min(qb).expect_finite() as u128;
            total += ma * mb;
            if total > limit {
                return Err(Error::SameBranch);
            }
            match (pa.cmp(&qa), pb.cmp(&qb)) {
                (Ordering::Greater, Ordering::Greater) => {
                    pa = val_sub(pa, qa);
                    pb = val_sub(pb, qb);
                }
                (Ordering::Less, Ordering::Less) => {
                    qa = val_sub(qa, pa);
                    qb = val_sub(qb, pb);
                }
                (Ordering::Equal, Ordering::Equal) => {
                    // both chains reached the diagonal point: the next
                    // center is decided by the column coefficients
                    let (Coefficient::Unit(x), Coefficient::Unit(y)) = (&ca.a, &cb.a) else {
                        unreachable!("degenerate columns never reach the diagonal")
                    };
                    if x == y {
                        break; // shared; continue with the next columns
                    }
                    return Ok(total as u64);
                }
                _ => return Ok(total as u64), // different charts: separated
            }
        }
        col += 1;
    }
}

fn val_sub(a: Valuation, b: Valuation) -> Valuation {
    match (a, b) {
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x - y),
        (Valuation::Infinite, _) => Valuation::Infinite,
        _ => unreachable!("subtrahend is always finite here"),
    }
}

/// The cluster of the minimal embedded resolution of a branch, with the
/// multiplicity vector of the strict transforms. All degrees are 1.
///
/// Contract (asserted): P^t m is the unit vector at the last point, and the
/// last row of Q equals m.
pub fn resolution_cluster(b: &Branch) -> Result<(Cluster, Vec<u64>)> {
    let t = hn_tableau(b, DepthPolicy::Minimal);
    let m = multiplicity_sequence(&t)?;
    let cluster = Cluster::from_multiplicities(&m);
    assert!(resolution_contract_holds(&cluster, &m), "proximity-defect contract violated");
    Ok((cluster, m))
}

/// Checks the proximity-defect criterion P^t m = e_last together with the
/// curvette row identity row_last(Q) = m.
pub fn resolution_contract_holds(cluster: &Cluster, m: &[u64]) -> bool {
    if cluster.len() != m.len() || m.is_empty() {
        return false;
    }
    let n = m.len();
    let defect_ok = (0..n).all(|s| {
        let consumed: u64 = cluster.proximate_to(s).iter().map(|&u| m[u]).sum();
        let expected = if s + 1 == n { 1 } else { 0 };
        m[s] as i128 - consumed as i128 == expected
    });
    if !defect_ok {
        return false;
    }
    let q = inverse_proximity(cluster);
    let last = n - 1;
    (0..n).all(|col| {
        *q.get(last, col) == num_rational::BigRational::from_integer(m[col].into())
    })
}

/// Which characteristic stage an approximation targets: mu is the j-th
/// characteristic index of the source tableau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxSpec {
    pub mu: usize,
    pub j: usize,
}

impl ApproxSpec {
    pub fn for_index(t: &HNTableau, j: usize) -> Result<ApproxSpec> {
        let data = characteristic_data(t)?;
        match data.index(j) {
            Some(mu) => Ok(ApproxSpec { mu, j }),
            None => Err(Error::IndexOutOfRange { index: j, h: data.h }),
        }
    }
}

/// The canonical approximation tableau at column mu: the prefix scaled by
/// 1/c_mu with the same coefficients, closed by a terminal column with
/// c = 1 and the smallest p' that both satisfies p' >= p_mu and breaks the
/// ratio at column mu.
pub fn mu_approximation(t: &HNTableau, spec: &ApproxSpec) -> Result<HNTableau> {
    let data = characteristic_data(t)?;
    if data.index(spec.j) != Some(spec.mu) || spec.mu == 0 {
        return Err(Error::NotCharacteristicIndex(spec.mu));
    }
    let mu = spec.mu;
    let c_mu = t.column(mu - 1).c.expect_finite();
    let mut columns = Vec::with_capacity(mu);
    let mut m_list = Vec::with_capacity(mu);
    for i in 1..mu {
        let col = t.column(i - 1);
        let (p, c) = (col.p.expect_finite(), col.c.expect_finite());
        if p % c_mu != 0 || c % c_mu != 0 {
            return Err(Error::NonIntegerScaling(c_mu));
        }
        let Coefficient::Unit(a) = &col.a else {
            return Err(Error::NotCharacteristicIndex(mu));
        };
        columns.push(TableauColumn::new(
            Valuation::Finite(p / c_mu),
            Valuation::Finite(c / c_mu),
            Coefficient::Unit(a.clone()),
        ));
        m_list.push(chain_m(p / c_mu, c / c_mu));
    }
    let p_mu = t.column(mu - 1).p.expect_finite();
    // ratio at column mu must break: p' * c_mu != p_mu * c' with c' = 1
    let p_prime = if p_mu * c_mu != p_mu { p_mu } else { p_mu + 1 };
    columns.push(TableauColumn::new(
        Valuation::Finite(p_prime),
        Valuation::Finite(1),
        Coefficient::Infinity,
    ));
    m_list.push(chain_m(p_prime, 1));
    Ok(HNTableau::new(t.field(), columns, m_list))
}

fn chain_m(p: u64, c: u64) -> u64 {
    crate::hn::euclid_quotients(p, c).iter().sum()
}

/// The closed form for the intersection number of an approximation at
/// column mu with its source: sum over i <= mu of p_i c_i / c_mu.
pub fn approximation_closed_form(t: &HNTableau, mu: usize) -> u64 {
    let c_mu = t.column(mu - 1).c.expect_finite();
    (1..=mu)
        .map(|i| {
            let col = t.column(i - 1);
            let num = col.p.expect_finite() * col.c.expect_finite();
            assert_eq!(num % c_mu, 0);
            num / c_mu
        })
        .sum()
}

/// Does g intersect f with multiplicity exactly r_j? By the approximation
/// theory this characterizes curvettes at the j-th characteristic stage.
pub fn curvette_check(f: &Branch, g: &Branch, j: usize) -> Result<bool> {
    let t = hn_tableau(f, DepthPolicy::Minimal);
    let data = characteristic_data(&t)?;
    if j == 0 || j > data.h {
        return Err(Error::IndexOutOfRange { index: j, h: data.h });
    }
    let r_j = data.sg_seq[j];
    let iota = intersection_of_branches(f, g)?;
    Ok(iota == Valuation::Finite(r_j))
}

/// Synthesizes the canonical approximation branch for the j-th
/// characteristic index of f's tableau.
pub fn approximation_branch(f: &Branch, j: usize) -> Result<Branch> {
    let t = hn_tableau(f, DepthPolicy::Minimal);
    let spec = ApproxSpec::for_index(&t, j)?;
    synthesize_branch(&mu_approximation(&t, &spec)?)
}

/// Two branches with the tableau's numerical data and coefficients but
/// different terminal units: they pass through exactly the tableau's chain
/// points together and separate immediately after.
pub fn sibling_branches(
    t: &HNTableau,
    w1: &FieldElement,
    w2: &FieldElement,
) -> Result<(Branch, Branch)> {
    assert_ne!(w1, w2, "siblings need distinct terminal units");
    Ok((
        crate::hn::synthesize_branch_seeded(t, w1)?,
        crate::hn::synthesize_branch_seeded(t, w2)?,
    ))
}

/// Raw chain emission of a minimal tableau, before truncation to the
/// minimal cluster: the multiplicities of every blow-up point the tableau's
/// chains pass through.
pub fn raw_chain_multiplicities(t: &HNTableau) -> Vec<u64> {
    let mut m = Vec::new();
    for col in t.columns() {
        if col.is_degenerate() {
            break;
        }
        crate::hn::emit_chain_minima(col.p.expect_finite(), col.c.expect_finite(), &mut m);
    }
    m
}
