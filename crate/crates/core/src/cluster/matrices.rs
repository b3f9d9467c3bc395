//! The proximity-derived matrices of a cluster: P, Delta, P', P~, the
//! intersection matrix N (by product and entrywise), Q = P^-1 and the
//! curvette Gram matrix M = -N^-1.
//!
//! Convention: rows are indexed by the proximate point and columns by the
//! target, so P is lower unitriangular in the cluster order, N = -P^t Delta P
//! and M = Q Delta^-1 Q^t. The entrywise characterizations are normative and
//! the product forms are checked against them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cluster::Cluster;
use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A dense matrix of exact rationals with cluster point labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
    row_labels: Vec<usize>,
    col_labels: Vec<usize>,
}

impl ExactMatrix {
    pub fn from_fn(labels: &[usize], f: impl Fn(usize, usize) -> BigRational) -> ExactMatrix {
        let n = labels.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        ExactMatrix {
            rows: n,
            cols: n,
            entries,
            row_labels: labels.to_vec(),
            col_labels: labels.to_vec(),
        }
    }

    pub fn zero(labels: &[usize]) -> ExactMatrix {
        Self::from_fn(labels, |_, _| BigRational::zero())
    }

    pub fn identity(labels: &[usize]) -> ExactMatrix {
        Self::from_fn(labels, |r, c| if r == c { BigRational::one() } else { BigRational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> &[usize] {
        &self.row_labels
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: vec![BigRational::zero(); self.entries.len()],
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn neg(&self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e.clone()).collect(),
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
        }
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ExactMatrix {
            rows: self.rows,
            cols: rhs.cols,
            entries: vec![BigRational::zero(); self.rows * rhs.cols],
            row_labels: self.row_labels.clone(),
            col_labels: rhs.col_labels.clone(),
        };
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.get(r, c).is_one()
                    } else {
                        self.get(r, c).is_zero()
                    }
                })
            })
    }

    /// All entries non-negative integers.
    pub fn is_nonneg_integral(&self) -> bool {
        self.entries.iter().all(|e| e.denom().is_one() && !e.numer().is_negative())
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigRational>, r: usize, c: usize| m[r * n + c].clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let pivot_row = match (k..n).find(|&r| !at(&m, r, k).is_zero()) {
                Some(r) => r,
                None => return BigRational::zero(),
            };
            if pivot_row != k {
                for c in 0..n {
                    m.swap(k * n + c, pivot_row * n + c);
                }
                det = -det;
            }
            let pivot = at(&m, k, k);
            det *= pivot.clone();
            for r in k + 1..n {
                let factor = at(&m, r, k) / pivot.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = at(&m, r, c) - factor.clone() * at(&m, k, c);
                    m[r * n + c] = v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan; None when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = ExactMatrix::identity(&self.row_labels);
        for k in 0..n {
            let pivot_row = (k..n).find(|&r| !m.get(r, k).is_zero())?;
            if pivot_row != k {
                for c in 0..n {
                    let a = m.get(k, c).clone();
                    let b = m.get(pivot_row, c).clone();
                    m.set(k, c, b);
                    m.set(pivot_row, c, a);
                    let a = inv.get(k, c).clone();
                    let b = inv.get(pivot_row, c).clone();
                    inv.set(k, c, b);
                    inv.set(pivot_row, c, a);
                }
            }
            let pivot = m.get(k, k).clone();
            for c in 0..n {
                let a = m.get(k, c) / pivot.clone();
                m.set(k, c, a);
                let b = inv.get(k, c) / pivot.clone();
                inv.set(k, c, b);
            }
            for r in 0..n {
                if r == k || m.get(r, k).is_zero() {
                    continue;
                }
                let factor = m.get(r, k).clone();
                for c in 0..n {
                    let a = m.get(r, c) - factor.clone() * m.get(k, c);
                    m.set(r, c, a);
                    let b = inv.get(r, c) - factor.clone() * inv.get(k, c);
                    inv.set(r, c, b);
                }
            }
        }
        Some(inv)
    }

    /// Compact bracket rendering with exact entries; 1x1 matrices render as
    /// `[x]`.
    pub fn render_compact(&self) -> String {
        let row_text = |r: usize| {
            let cells: Vec<String> = self.row(r).iter().map(rational_string).collect();
            format!("[{}]", cells.join(","))
        };
        if self.rows == 1 && self.cols == 1 {
            return row_text(0);
        }
        let rows: Vec<String> = (0..self.rows).map(row_text).collect();
        format!("[{}]", rows.join(","))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.row_labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "cols": self.col_labels.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "entries": (0..self.rows)
                .map(|r| self.row(r).iter().map(rational_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<ExactMatrix> {
        let bad = |m: &str| Error::JsonFormat(m.to_string());
        let labels = |key: &str| -> Result<Vec<usize>> {
            v.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| bad("missing labels"))?
                .iter()
                .map(|s| s.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad label")))
                .collect()
        };
        let row_labels = labels("rows")?;
        let col_labels = labels("cols")?;
        let entries_json =
            v.get("entries").and_then(|x| x.as_array()).ok_or_else(|| bad("missing entries"))?;
        if entries_json.len() != row_labels.len() {
            return Err(bad("row count mismatch"));
        }
        let mut entries = Vec::new();
        for row in entries_json {
            let row = row.as_array().ok_or_else(|| bad("bad row"))?;
            if row.len() != col_labels.len() {
                return Err(bad("column count mismatch"));
            }
            for cell in row {
                let s = cell.as_str().ok_or_else(|| bad("entries are strings"))?;
                entries.push(parse_rational(s).ok_or_else(|| bad("bad rational entry"))?);
            }
        }
        Ok(ExactMatrix {
            rows: row_labels.len(),
            cols: col_labels.len(),
            entries,
            row_labels,
            col_labels,
        })
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

fn labels(c: &Cluster) -> Vec<usize> {
    (0..c.len()).collect()
}

/// P: 1 on the diagonal, -1 at (proximate point, target); lower
/// unitriangular in the cluster order.
pub fn proximity_matrix(c: &Cluster) -> ExactMatrix {
    ExactMatrix::from_fn(&labels(c), |r, col| {
        if r == col {
            rat(1)
        } else if c.point(r).prox.contains(&col) {
            rat(-1)
        } else {
            rat(0)
        }
    })
}

/// Delta: the diagonal matrix of residue degrees.
pub fn degree_matrix(c: &Cluster) -> ExactMatrix {
    ExactMatrix::from_fn(&labels(c), |r, col| {
        if r == col {
            rat_u(c.point(r).degree)
        } else {
            rat(0)
        }
    })
}

/// P': 1 on the diagonal and -[S:T] = -deg(S)/deg(T) at proximities.
pub fn refined_proximity(c: &Cluster) -> ExactMatrix {
    ExactMatrix::from_fn(&labels(c), |r, col| {
        if r == col {
            rat(1)
        } else if c.point(r).prox.contains(&col) {
            -(rat_u(c.point(r).degree) / rat_u(c.point(col).degree))
        } else {
            rat(0)
        }
    })
}

/// P~: deg(S) on the diagonal and -deg(S) at proximities; equals Delta * P,
/// which is asserted.
pub fn total_proximity(c: &Cluster) -> ExactMatrix {
    let out = ExactMatrix::from_fn(&labels(c), |r, col| {
        if r == col {
            rat_u(c.point(r).degree)
        } else if c.point(r).prox.contains(&col) {
            -rat_u(c.point(r).degree)
        } else {
            rat(0)
        }
    });
    debug_assert_eq!(out, degree_matrix(c).mul(&proximity_matrix(c)));
    out
}

/// N = -P^t Delta P: the intersection matrix of the exceptional components.
pub fn intersection_matrix(c: &Cluster) -> ExactMatrix {
    let p = proximity_matrix(c);
    p.transpose().mul(&degree_matrix(c)).mul(&p).neg()
}

/// N built entry by entry from the case analysis: the diagonal entry is
/// -(deg(S) + sum of degrees of points proximate to S); for T proximate to
/// S the entry is deg(T) unless the satellite continuation of T over S lies
/// in the cluster, in which case the components no longer meet and the
/// entry is 0.
pub fn intersection_entries_direct(c: &Cluster) -> ExactMatrix {
    let n = c.len();
    let mut out = ExactMatrix::zero(&labels(c));
    for s in 0..n {
        let mut diag = rat_u(c.point(s).degree);
        for u in c.proximate_to(s) {
            diag += rat_u(c.point(u).degree);
        }
        out.set(s, s, -diag);
    }
    for t in 1..n {
        for &s in c.point(t).prox.clone().iter() {
            // the continuation: a child of T proximate to S
            let continuation_present = c
                .points()
                .iter()
                .any(|u| u.parent == Some(t) && u.prox.contains(&s));
            let value = if continuation_present { rat(0) } else { rat_u(c.point(t).degree) };
            out.set(s, t, value.clone());
            out.set(t, s, value);
        }
    }
    out
}

/// Q = P^-1 by unitriangular forward substitution: row S of Q is e_S plus
/// the Q-rows of the points S is proximate to. All entries are non-negative
/// integers; row T is the multiplicity vector of a curvette at T.
pub fn inverse_proximity(c: &Cluster) -> ExactMatrix {
    let n = c.len();
    let mut out = ExactMatrix::identity(&labels(c));
    for s in 1..n {
        for &t in c.point(s).prox.clone().iter() {
            for col in 0..=t {
                let v = out.get(s, col) + out.get(t, col);
                out.set(s, col, v);
            }
        }
    }
    debug_assert!(out.is_nonneg_integral());
    out
}

/// det(-N) equals the product of the residue degrees (P is unimodular).
pub fn det_matches_degree_product(c: &Cluster) -> bool {
    let mut degrees = BigRational::one();
    for p in c.points() {
        degrees *= rat_u(p.degree);
    }
    intersection_matrix(c).neg().det() == degrees
}

/// M = Q Delta^-1 Q^t = -N^-1: the Gram matrix of curvette intersection
/// numbers.
pub fn curvette_gram(c: &Cluster) -> Result<ExactMatrix> {
    let q = inverse_proximity(c);
    let delta_inv = ExactMatrix::from_fn(&labels(c), |r, col| {
        if r == col {
            rat(1) / rat_u(c.point(r).degree)
        } else {
            rat(0)
        }
    });
    let m = q.mul(&delta_inv).mul(&q.transpose());
    // exactness check: N * M = -I
    if !intersection_matrix(c).mul(&m).neg().is_identity() {
        return Err(Error::SingularN);
    }
    Ok(m)
}
