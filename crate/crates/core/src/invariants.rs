//! Characteristic indices and the derived numerical sequences of a tableau:
//! characteristic, divisor, n- and semigroup sequences.

use crate::algebra::series::Valuation;
use crate::error::{Error, Result};
use crate::hn::HNTableau;

/// The four derived sequences of a tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharData {
    /// Characteristic indices i_1 < ... < i_h (1-based).
    pub indices: Vec<usize>,
    pub h: usize,
    /// d_1: the multiplicity-like head of the characteristic sequence.
    pub d1: u64,
    /// q_1 .. q_h; together with d1 this is the characteristic sequence
    /// Ch = (d1; q_1 ... q_h).
    pub q_seq: Vec<u64>,
    /// Divisor sequence d_1 .. d_{h+1}, ending in 1.
    pub div_seq: Vec<u64>,
    /// n_i = d_i / d_{i+1}.
    pub n_seq: Vec<u64>,
    /// Semigroup sequence r_0 .. r_h.
    pub sg_seq: Vec<u64>,
}

/// Indices where the gcd chain value c drops (plus the mandatory first
/// index), with the convention c_{l+1} = 0.
pub fn characteristic_indices(t: &HNTableau) -> Vec<usize> {
    let l = t.len();
    let c_at = |i: usize| -> Valuation {
        if i < l {
            t.column(i).c
        } else {
            Valuation::Finite(0)
        }
    };
    (1..=l).filter(|&i| i == 1 || c_at(i) < c_at(i - 1)).collect()
}

/// Populates the full characteristic data; requires the columns up to the
/// last characteristic index to be finite.
pub fn characteristic_data(t: &HNTableau) -> Result<CharData> {
    let indices = characteristic_indices(t);
    let h = indices.len();
    let i_h = *indices.last().expect("a tableau has at least one column");
    for i in 1..=i_h {
        let col = t.column(i - 1);
        if !col.p.is_finite() || !col.c.is_finite() {
            return Err(Error::InfiniteCharacteristicColumn(i));
        }
    }
    let p = |i: usize| t.column(i - 1).p.expect_finite();
    let c = |i: usize| t.column(i - 1).c.expect_finite();

    let mut q_seq = Vec::with_capacity(h);
    for (j, &ij) in indices.iter().enumerate() {
        let lo = if j == 0 { 1 } else { indices[j - 1] + 1 };
        q_seq.push((lo..=ij).map(p).sum());
    }
    let mut div_seq: Vec<u64> = indices.iter().map(|&ij| c(ij)).collect();
    let d1 = div_seq[0];
    div_seq.push(num_integer::gcd(*div_seq.last().unwrap(), *q_seq.last().unwrap()));
    debug_assert_eq!(*div_seq.last().unwrap(), 1, "divisor sequence must end in 1");
    for j in 1..h {
        debug_assert_eq!(div_seq[j], num_integer::gcd(div_seq[j - 1], q_seq[j - 1]));
    }

    let n_seq: Vec<u64> = (0..h)
        .map(|i| {
            assert_eq!(div_seq[i] % div_seq[i + 1], 0);
            div_seq[i] / div_seq[i + 1]
        })
        .collect();

    let mut sg_seq = vec![d1];
    for i in 1..=h {
        let mut acc: u64 = 0;
        for j in 1..=i {
            let num = q_seq[j - 1] * div_seq[j - 1];
            assert_eq!(num % div_seq[i - 1], 0, "semigroup entry must be integral");
            acc += num / div_seq[i - 1];
        }
        sg_seq.push(acc);
    }

    Ok(CharData { indices, h, d1, q_seq, div_seq, n_seq, sg_seq })
}

impl CharData {
    /// r_j for a 1-based characteristic position j (r_0 is the multiplicity).
    pub fn r(&self, j: usize) -> Option<u64> {
        self.sg_seq.get(j).copied()
    }

    /// The characteristic index i_j (1-based j).
    pub fn index(&self, j: usize) -> Option<usize> {
        if j == 0 {
            None
        } else {
            self.indices.get(j - 1).copied()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::parse_poly;
    use crate::algebra::FieldSpec;
    use crate::branch::Branch;
    use crate::hn::{hn_tableau, DepthPolicy};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn minimal(x: &str, y: &str) -> HNTableau {
        let b =
            Branch::new(parse_poly(x, q()).unwrap(), parse_poly(y, q()).unwrap(), q()).unwrap();
        hn_tableau(&b, DepthPolicy::Minimal)
    }

    #[test]
    fn indices_of_worked_examples() {
        assert_eq!(characteristic_indices(&minimal("t^2", "t^3")), vec![1]);
        assert_eq!(characteristic_indices(&minimal("t^4", "t^6 + t^7")), vec![1, 2]);
        assert_eq!(characteristic_indices(&minimal("t", "t^2")), vec![1]);
    }

    #[test]
    fn cusp_data() {
        let d = characteristic_data(&minimal("t^2", "t^3")).unwrap();
        assert_eq!((d.d1, d.q_seq.clone()), (2, vec![3]));
        assert_eq!(d.div_seq, vec![2, 1]);
        assert_eq!(d.n_seq, vec![2]);
        assert_eq!(d.sg_seq, vec![2, 3]);
    }

    #[test]
    fn two_characteristic_pairs() {
        let d = characteristic_data(&minimal("t^4", "t^6 + t^7")).unwrap();
        assert_eq!((d.d1, d.q_seq.clone()), (4, vec![6, 1]));
        assert_eq!(d.div_seq, vec![4, 2, 1]);
        assert_eq!(d.n_seq, vec![2, 2]);
        assert_eq!(d.sg_seq, vec![4, 6, 13]);
    }

    #[test]
    fn smooth_branch_degenerates_gracefully() {
        let d = characteristic_data(&minimal("t", "t^2")).unwrap();
        assert_eq!((d.d1, d.q_seq.clone()), (1, vec![2]));
        assert_eq!(d.div_seq, vec![1, 1]);
        assert_eq!(d.n_seq, vec![1]);
        assert_eq!(d.sg_seq, vec![1, 2]);
    }

    #[test]
    fn cusp_family_semigroups() {
        for (a, b) in [(2u64, 3u64), (2, 5), (3, 4), (3, 5), (4, 5), (5, 7)] {
            let t = minimal(&format!("t^{a}"), &format!("t^{b}"));
            let d = characteristic_data(&t).unwrap();
            assert_eq!((d.d1, d.q_seq.clone()), (a, vec![b]), "cusp ({a},{b})");
            assert_eq!(d.sg_seq, vec![a, b]);
        }
    }

    #[test]
    fn semigroup_recursion() {
        for (x, y) in [("t^4", "t^6 + t^7"), ("t^6", "t^9 + t^10"), ("t^4", "t^10 + t^11")] {
            let d = characteristic_data(&minimal(x, y)).unwrap();
            // r_1 = q_1 and r_i = n_{i-1} r_{i-1} + q_i
            assert_eq!(d.sg_seq[1], d.q_seq[0]);
            for i in 2..=d.h {
                assert_eq!(d.sg_seq[i], d.n_seq[i - 2] * d.sg_seq[i - 1] + d.q_seq[i - 1]);
            }
            // gcd(d1, q_1, ..., q_h) = 1
            let mut g = d.d1;
            for &qj in &d.q_seq {
                g = num_integer::gcd(g, qj);
            }
            assert_eq!(g, 1);
        }
    }

    #[test]
    fn infinite_column_is_rejected() {
        let axis =
            Branch::new(crate::algebra::UniPoly::zero(q()), parse_poly("t", q()).unwrap(), q())
                .unwrap();
        let t = hn_tableau(&axis, DepthPolicy::Minimal);
        assert_eq!(characteristic_data(&t), Err(Error::InfiniteCharacteristicColumn(1)));
    }
}
