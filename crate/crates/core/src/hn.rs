//! The Hamburger-Noether engine: Euclidean chains on valuations, tableau
//! construction and validation, multiplicity sequences, and branch synthesis
//! from a tableau.
//!
//! A tableau column records (p, c, a): the valuations of the working
//! parameters y and x at that stage and the leading coefficient extracted by
//! the Euclidean chain. Expansion of a branch runs one chain per column on
//! exact rational series, so no precision management is needed.

use std::fmt::Write as _;

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::poly::UniPoly;
use crate::algebra::series::{RatSeries, Valuation};
use crate::branch::Branch;
use crate::error::{join_violations, Error, Result, Violation};

/// One Euclidean division chain: the data extracted from a pair of series
/// with finite positive valuation.
#[derive(Debug, Clone)]
pub struct EuclidChain {
    /// Division multiplicities s_1..s_kappa (s_1 may be 0).
    pub s_list: Vec<u64>,
    pub kappa: usize,
    /// Valuations v(eta_0)..v(eta_{kappa+1}); the last entry is 0.
    pub eta_vals: Vec<u64>,
    /// The unique nonzero scalar making the valuation jump.
    pub a: FieldElement,
    /// Number of blow-ups the chain accounts for: s_1 + ... + s_kappa.
    pub m: u64,
    /// Regular parameters for the next stage.
    pub next_x: RatSeries,
    pub next_y: RatSeries,
}

/// Runs the Euclidean algorithm on v(eta0), v(eta1) with exact division of
/// the series, then extracts the coefficient a with
/// v(eta_{k-1} - a * eta_k^{s_k}) > v(eta_{k-1}) and the next-stage
/// parameters.
pub fn euclid_chain(eta0: &RatSeries, eta1: &RatSeries) -> Result<EuclidChain> {
    let v0 = match eta0.ord_t()? {
        Valuation::Finite(v) if v > 0 => v,
        _ => return Err(Error::NonPositiveValuation),
    };
    let v1 = match eta1.ord_t()? {
        Valuation::Finite(v) if v > 0 => v,
        _ => return Err(Error::NonPositiveValuation),
    };
    // every eta is a Laurent monomial eta0^b * eta1^a within one chain, so
    // only exponent pairs are tracked and just two series get materialized
    let mut vals = vec![v0, v1];
    let mut exps: Vec<(i64, i64)> = vec![(0, 1), (1, 0)]; // (exp of eta1, exp of eta0)
    let mut s_list: Vec<u64> = Vec::new();
    let mut i = 1usize;
    loop {
        let (prev, cur) = (vals[i - 1], vals[i]);
        let s = prev / cur;
        let rem = prev % cur;
        s_list.push(s);
        let (pa, pb) = exps[i - 1];
        let (ca, cb) = exps[i];
        exps.push((pa - s as i64 * ca, pb - s as i64 * cb));
        vals.push(rem);
        if rem == 0 {
            break;
        }
        i += 1;
    }
    let kappa = s_list.len();
    let s_k = s_list[kappa - 1] as i64;
    // quot = eta_{k-1} / eta_k^{s_k}, a unit; a is its value at t = 0
    let (qa, qb) = (
        exps[kappa - 1].0 - s_k * exps[kappa].0,
        exps[kappa - 1].1 - s_k * exps[kappa].1,
    );
    let lc1 = eta1.leading_coeff();
    let lc0 = eta0.leading_coeff();
    let a = scalar_power(&lc1, qa).mul(&scalar_power(&lc0, qb));
    debug_assert!(!a.is_zero());
    let next_x = RatSeries::monomial_in(eta1, eta0, exps[kappa].0, exps[kappa].1);
    let next_y = RatSeries::monomial_in(eta1, eta0, qa, qb).sub_scalar(&a);
    let m = s_list.iter().sum();
    Ok(EuclidChain { s_list, kappa, eta_vals: vals, a, m, next_x, next_y })
}

fn scalar_power(c: &FieldElement, e: i64) -> FieldElement {
    if e >= 0 {
        c.pow(e as u64)
    } else {
        c.inv().pow((-e) as u64)
    }
}

/// The quotient sequence of the numeric Euclidean algorithm on (v0, v1).
pub(crate) fn euclid_quotients(v0: u64, v1: u64) -> Vec<u64> {
    let (mut prev, mut cur) = (v0, v1);
    let mut out = Vec::new();
    loop {
        out.push(prev / cur);
        let rem = prev % cur;
        if rem == 0 {
            return out;
        }
        prev = cur;
        cur = rem;
    }
}

/// Number of blow-ups the chain on the valuation pair (v0, v1) accounts
/// for: the sum of the Euclidean quotients.
pub fn chain_length(v0: u64, v1: u64) -> u64 {
    euclid_quotients(v0, v1).iter().sum()
}

/// The a-entry of a tableau column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    /// A nonzero scalar extracted by the chain.
    Unit(FieldElement),
    /// Marks degenerate columns (p or c infinite).
    Zero,
    /// The terminal marker closing a minimal tableau.
    Infinity,
}

impl Coefficient {
    pub fn render(&self) -> String {
        match self {
            Coefficient::Unit(e) => e.to_string(),
            Coefficient::Zero => "0".into(),
            Coefficient::Infinity => "inf".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauColumn {
    pub p: Valuation,
    pub c: Valuation,
    pub a: Coefficient,
}

impl TableauColumn {
    pub fn new(p: Valuation, c: Valuation, a: Coefficient) -> Self {
        TableauColumn { p, c, a }
    }

    /// Degenerate columns repeat forever once reached.
    pub fn is_degenerate(&self) -> bool {
        !self.p.is_finite() || !self.c.is_finite()
    }
}

/// Stopping rule for tableau construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthPolicy {
    /// Stop at the first column with gcd(c, p) = 1 and mark it terminal.
    Minimal,
    /// Emit exactly n columns with their true coefficients; once the
    /// expansion degenerates the repeating column is emitted on demand.
    ToColumns(usize),
}

/// A Hamburger-Noether tableau: columns (p_i, c_i, a_i) plus the chain
/// lengths m_i (0 for degenerate columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNTableau {
    field: FieldSpec,
    columns: Vec<TableauColumn>,
    m_list: Vec<u64>,
}

impl HNTableau {
    /// Assembles a tableau from raw parts. Structural invariants are not
    /// enforced here; `tableau_validate` reports them.
    pub fn new(field: FieldSpec, columns: Vec<TableauColumn>, m_list: Vec<u64>) -> Self {
        HNTableau { field, columns, m_list }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[TableauColumn] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &TableauColumn {
        &self.columns[i]
    }

    pub fn m_list(&self) -> &[u64] {
        &self.m_list
    }

    /// True for tableaux produced under the minimal policy on a branch with
    /// x and y both nonzero: finite columns closed by the terminal marker.
    pub fn is_minimal_form(&self) -> bool {
        !self.columns.is_empty()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(i, col)| {
                    let last = i + 1 == self.columns.len();
                    col.p.is_finite()
                        && col.c.is_finite()
                        && if last {
                            col.a == Coefficient::Infinity
                        } else {
                            matches!(col.a, Coefficient::Unit(_))
                        }
                })
    }

    /// True for the constant tableau of an axis branch (x or y identically
    /// zero).
    pub fn is_degenerate(&self) -> bool {
        self.columns.len() == 1 && self.columns[0].is_degenerate()
    }
}

/// Streaming expansion of a branch into tableau columns with their true
/// coefficients. Degenerate columns are produced on demand and never stored.
#[derive(Debug, Clone)]
pub struct TableauExpansion {
    field: FieldSpec,
    state: ExpansionState,
    cols: Vec<TableauColumn>,
    chain_lengths: Vec<u64>,
    degree_hint: u64,
}

#[derive(Debug, Clone)]
enum ExpansionState {
    Regular { x: RatSeries, y: RatSeries },
    YZero { c: u64 },
    XZero { p: u64 },
}

impl TableauExpansion {
    pub fn from_branch(b: &Branch) -> Self {
        let deg = |p: &UniPoly| p.degree().map_or(0, |d| d as u64);
        let degree_hint = (deg(b.x()) + deg(b.y())).max(1);
        let state = if b.x().is_zero() {
            ExpansionState::XZero { p: b.y().ord().unwrap() as u64 }
        } else if b.y().is_zero() {
            ExpansionState::YZero { c: b.x().ord().unwrap() as u64 }
        } else {
            ExpansionState::Regular { x: b.x_series(), y: b.y_series() }
        };
        TableauExpansion {
            field: b.field(),
            state,
            cols: Vec::new(),
            chain_lengths: Vec::new(),
            degree_hint,
        }
    }

    /// Expansion of the canonical branch realizing an abstract tableau.
    pub fn from_tableau(t: &HNTableau) -> Result<Self> {
        Ok(Self::from_branch(&synthesize_branch(t)?))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Degree budget used to recognize equal branches during a joint scan:
    /// a finite intersection number never exceeds the product of two hints.
    pub fn degree_hint(&self) -> u64 {
        self.degree_hint
    }

    /// The i-th column (0-based), computing chains as needed.
    pub fn column(&mut self, i: usize) -> TableauColumn {
        loop {
            if let Some(col) = self.cols.get(i) {
                return col.clone();
            }
            match &self.state {
                ExpansionState::YZero { c } => {
                    return TableauColumn::new(
                        Valuation::Infinite,
                        Valuation::Finite(*c),
                        Coefficient::Zero,
                    )
                }
                ExpansionState::XZero { p } => {
                    return TableauColumn::new(
                        Valuation::Finite(*p),
                        Valuation::Infinite,
                        Coefficient::Zero,
                    )
                }
                ExpansionState::Regular { .. } => self.advance(),
            }
        }
    }

    /// Chain length of column i; 0 for degenerate columns.
    pub fn chain_length(&mut self, i: usize) -> u64 {
        let _ = self.column(i);
        self.chain_lengths.get(i).copied().unwrap_or(0)
    }

    fn advance(&mut self) {
        let ExpansionState::Regular { x, y } = &self.state else {
            unreachable!("advance on a degenerate state")
        };
        if y.is_zero() {
            let c = x.ord_t().unwrap().expect_finite();
            self.state = ExpansionState::YZero { c };
            return;
        }
        let p = y.ord_t().expect("expansion parameter left the valuation ring");
        let c = x.ord_t().expect("expansion parameter left the valuation ring");
        let chain = euclid_chain(y, x).expect("positive valuations at stage start");
        self.cols.push(TableauColumn::new(p, c, Coefficient::Unit(chain.a.clone())));
        self.chain_lengths.push(chain.m);
        self.state = ExpansionState::Regular { x: chain.next_x, y: chain.next_y };
    }
}

/// Runs the expansion algorithm on a branch under the given depth policy.
pub fn hn_tableau(b: &Branch, policy: DepthPolicy) -> HNTableau {
    match policy {
        DepthPolicy::Minimal => minimal_tableau(b),
        DepthPolicy::ToColumns(n) => {
            assert!(n >= 1, "ToColumns requires at least one column");
            let mut exp = TableauExpansion::from_branch(b);
            let columns: Vec<_> = (0..n).map(|i| exp.column(i)).collect();
            let m_list = (0..n).map(|i| exp.chain_length(i)).collect();
            HNTableau::new(b.field(), columns, m_list)
        }
    }
}

fn minimal_tableau(b: &Branch) -> HNTableau {
    if b.x().is_zero() {
        let p = b.y().ord().unwrap() as u64;
        let col = TableauColumn::new(Valuation::Finite(p), Valuation::Infinite, Coefficient::Zero);
        return HNTableau::new(b.field(), vec![col], vec![0]);
    }
    if b.y().is_zero() {
        let c = b.x().ord().unwrap() as u64;
        let col = TableauColumn::new(Valuation::Infinite, Valuation::Finite(c), Coefficient::Zero);
        return HNTableau::new(b.field(), vec![col], vec![0]);
    }
    let mut x = b.x_series();
    let mut y = b.y_series();
    let mut columns = Vec::new();
    let mut m_list = Vec::new();
    for _ in 0..10_000 {
        let p = y.ord_t().unwrap().expect_finite();
        let c = x.ord_t().unwrap().expect_finite();
        if num_integer::gcd(p, c) == 1 {
            columns.push(TableauColumn::new(
                Valuation::Finite(p),
                Valuation::Finite(c),
                Coefficient::Infinity,
            ));
            m_list.push(chain_length(p, c));
            return HNTableau::new(b.field(), columns, m_list);
        }
        let chain = euclid_chain(&y, &x).expect("positive valuations");
        columns.push(TableauColumn::new(
            Valuation::Finite(p),
            Valuation::Finite(c),
            Coefficient::Unit(chain.a.clone()),
        ));
        m_list.push(chain.m);
        x = chain.next_x;
        y = chain.next_y;
        // for a primitive branch y cannot vanish while gcd(p, c) > 1
        assert!(!y.is_zero(), "expansion terminated before reaching gcd 1");
    }
    panic!("expansion did not terminate");
}

/// Checks every structural tableau invariant; an empty list means valid.
pub fn tableau_validate(t: &HNTableau) -> Vec<Violation> {
    let mut out = Vec::new();
    let cols = t.columns();
    let l = cols.len();
    if l == 0 {
        out.push(Violation::new("tableau", "no columns"));
        return out;
    }
    if t.m_list().len() != l {
        out.push(Violation::new("tableau", "m-list length differs from column count"));
    }
    for (i, col) in cols.iter().enumerate() {
        let subject = format!("column {}", i + 1);
        let degenerate = col.is_degenerate();
        match &col.a {
            Coefficient::Zero if !degenerate => {
                out.push(Violation::new(&subject, "a = 0 is only allowed with p or c infinite"))
            }
            Coefficient::Unit(u) if degenerate => {
                out.push(Violation::new(&subject, format!("a = {u} on a degenerate column")))
            }
            Coefficient::Unit(u) if u.is_zero() => {
                out.push(Violation::new(&subject, "a must be nonzero"))
            }
            Coefficient::Infinity if i + 1 != l => {
                out.push(Violation::new(&subject, "terminal marker before the last column"))
            }
            Coefficient::Infinity if degenerate => {
                out.push(Violation::new(&subject, "terminal marker on a degenerate column"))
            }
            _ => {}
        }
        if !col.p.is_finite() && !col.c.is_finite() {
            out.push(Violation::new(&subject, "p and c cannot both be infinite"));
        }
        if col.p == Valuation::Finite(0) || col.c == Valuation::Finite(0) {
            out.push(Violation::new(&subject, "p and c must be at least 1"));
        }
    }
    // gcd chain and monotonicity of c over consecutive finite columns
    for i in 0..l.saturating_sub(1) {
        let (a, b) = (&cols[i], &cols[i + 1]);
        if let (Valuation::Finite(c1), Valuation::Finite(p1)) = (a.c, a.p) {
            let g = num_integer::gcd(c1, p1);
            match b.c {
                Valuation::Finite(c2) if c2 != g => out.push(Violation::new(
                    format!("column {}", i + 2),
                    format!("c = {c2} differs from gcd(c, p) = {g} of the previous column"),
                )),
                Valuation::Infinite => out.push(Violation::new(
                    format!("column {}", i + 2),
                    "c becomes infinite after a finite column",
                )),
                _ => {}
            }
        }
        // once degenerate, always degenerate with the same finite entry
        if !a.p.is_finite() && (b.p.is_finite() || a.c != b.c) {
            out.push(Violation::new(
                format!("column {}", i + 2),
                "p = inf must persist with constant c",
            ));
        }
        if !a.c.is_finite() && (b.c.is_finite() || a.p != b.p) {
            out.push(Violation::new(
                format!("column {}", i + 2),
                "c = inf must persist with constant p",
            ));
        }
        if let (Valuation::Finite(c1), Valuation::Finite(c2)) = (a.c, b.c) {
            if c2 > c1 {
                out.push(Violation::new(
                    format!("column {}", i + 2),
                    format!("c increases from {c1} to {c2}"),
                ));
            }
        }
    }
    // the last finite column must close the gcd chain
    if let Some(last) = cols.iter().rev().find(|col| col.c.is_finite() && col.p.is_finite()) {
        let (c, p) = (last.c.expect_finite(), last.p.expect_finite());
        let closes = c == 1 || num_integer::gcd(c, p) == 1;
        // only binding when nothing follows it except degenerate columns
        let followed_by_regular = cols
            .iter()
            .skip_while(|k| *k != last)
            .skip(1)
            .any(|k| !k.is_degenerate());
        if !closes && !followed_by_regular {
            out.push(Violation::new(
                "last column",
                format!("gcd(c, p) = gcd({c}, {p}) must be 1"),
            ));
        }
    }
    out
}

/// Multiplicities of the strict transform at the points of the minimal
/// embedded resolution, in quadratic-sequence order.
///
/// Each column's chain emits its subtractive Euclid minima; the sequence is
/// then truncated to the shortest tail satisfying the proximity equalities
/// (trailing free points of multiplicity 1 are dropped).
pub fn multiplicity_sequence(t: &HNTableau) -> Result<Vec<u64>> {
    if t.is_degenerate() {
        // an axis branch is smooth: the cluster is the origin alone
        return Ok(vec![1]);
    }
    if !t.is_minimal_form() {
        return Err(Error::RequiresMinimalPolicy);
    }
    let mut m = Vec::new();
    for col in t.columns() {
        emit_chain_minima(col.p.expect_finite(), col.c.expect_finite(), &mut m);
    }
    truncate_to_minimal_cluster(&mut m);
    Ok(m)
}

/// Pushes the multiplicity of every blow-up point of the chain on (p, c):
/// the subtractive Euclidean minima, ending at the equal pair.
pub(crate) fn emit_chain_minima(p: u64, c: u64, out: &mut Vec<u64>) {
    let (mut p, mut c) = (p, c);
    loop {
        if p == c {
            out.push(p);
            return;
        } else if p > c {
            out.push(c);
            p -= c;
        } else {
            out.push(p);
            c -= p;
        }
    }
}

/// Proximity targets of each point, derived from the multiplicity sequence:
/// a point is proximate to its predecessor and to the nearest earlier point
/// whose multiplicity its block is still consuming.
pub(crate) fn saturation_proximities(m: &[u64]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut prox = vec![Vec::new(); n];
    for j in 1..n {
        prox[j].push(j - 1);
        for t in (0..j.saturating_sub(1)).rev() {
            let consumed: u64 = m[t + 1..=j].iter().sum();
            if consumed <= m[t] {
                prox[j].push(t);
                break;
            }
        }
        prox[j].sort_unstable();
    }
    prox
}

fn truncate_to_minimal_cluster(m: &mut Vec<u64>) {
    while m.len() > 1 {
        let n = m.len() - 1;
        if m[n] != 1 {
            break;
        }
        // keep the point if it is a satellite
        let satellite = (0..n.saturating_sub(1)).any(|t| {
            let consumed: u64 = m[t + 1..=n].iter().sum();
            consumed <= m[t]
        });
        if satellite {
            break;
        }
        m.pop();
    }
}

/// Builds the canonical branch whose minimal tableau reproduces `t`
/// column-for-column: all free coefficients beyond the recorded a-entries
/// are zero and the terminal seed unit is 1.
pub fn synthesize_branch(t: &HNTableau) -> Result<Branch> {
    synthesize_branch_seeded(t, &t.field().one())
}

/// Synthesis with a chosen terminal unit: the seed at the last column is
/// (t^c, w * t^p). Different units give branches that separate immediately
/// after the tableau's last chain.
pub fn synthesize_branch_seeded(t: &HNTableau, unit: &FieldElement) -> Result<Branch> {
    let problems = tableau_validate(t);
    if !problems.is_empty() {
        return Err(Error::UnrealizableTableau(join_violations(&problems)));
    }
    if unit.is_zero() {
        return Err(Error::UnrealizableTableau("terminal unit must be nonzero".into()));
    }
    let cols = t.columns();
    let last = cols.last().unwrap();
    if last.a != Coefficient::Infinity || cols.iter().any(TableauColumn::is_degenerate) {
        return Err(Error::UnrealizableTableau(
            "synthesis requires finite columns closed by the terminal marker".into(),
        ));
    }
    let field = t.field();
    let c_l = last.c.expect_finite() as usize;
    let p_l = last.p.expect_finite() as usize;
    let mut x = UniPoly::t_power(field, c_l);
    let mut y = UniPoly::monomial(field, unit.clone(), p_l);
    for col in cols[..cols.len() - 1].iter().rev() {
        let Coefficient::Unit(a) = &col.a else { unreachable!("validated above") };
        let p = col.p.expect_finite();
        let c = col.c.expect_finite();
        let s = euclid_quotients(p, c);
        let kappa = s.len();
        // reverse chain: eta_k = x, eta_{k-1} = x^{s_k} (a + y),
        // eta_{i-1} = eta_i^{s_i} eta_{i+1}
        let mut etas = vec![UniPoly::zero(field); kappa + 1];
        etas[kappa] = x;
        etas[kappa - 1] =
            etas[kappa].pow(s[kappa - 1] as usize).mul(&y.add(&UniPoly::constant(a.clone())));
        for i in (1..kappa).rev() {
            etas[i - 1] = etas[i].pow(s[i - 1] as usize).mul(&etas[i + 1]);
        }
        y = etas[0].clone();
        x = etas[1].clone();
    }
    Branch::new(x, y, field).map_err(|e| Error::UnrealizableTableau(e.to_string()))
}

/// Aligned text rendering: rows p:, c:, a:, m:, infinity rendered as inf.
pub fn render_tableau_text(t: &HNTableau) -> String {
    let ps: Vec<String> = t.columns().iter().map(|c| c.p.to_string()).collect();
    let cs: Vec<String> = t.columns().iter().map(|c| c.c.to_string()).collect();
    let as_: Vec<String> = t.columns().iter().map(|c| c.a.render()).collect();
    let ms: Vec<String> = t.m_list().iter().map(|m| m.to_string()).collect();
    let width: Vec<usize> = (0..t.len())
        .map(|i| {
            [&ps[i], &cs[i], &as_[i], ms.get(i).unwrap_or(&String::new())]
                .iter()
                .map(|s| s.len())
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    for (label, row) in [("p:", &ps), ("c:", &cs), ("a:", &as_), ("m:", &ms)] {
        let mut line = String::from(label);
        for (i, cell) in row.iter().enumerate() {
            let _ = write!(line, " {cell:<w$}", w = width[i]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Machine form: an array of column triples with exact string entries.
pub fn tableau_to_json(t: &HNTableau) -> serde_json::Value {
    serde_json::json!({
        "field": t.field().to_string(),
        "columns": t
            .columns()
            .iter()
            .map(|col| vec![col.p.to_string(), col.c.to_string(), col.a.render()])
            .collect::<Vec<_>>(),
        "m": t.m_list().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
    })
}

/// Inverse of `tableau_to_json`.
pub fn tableau_from_json(v: &serde_json::Value) -> Result<HNTableau> {
    let bad = |m: &str| Error::JsonFormat(m.to_string());
    let field = crate::algebra::field::parse_field(
        v.get("field").and_then(|f| f.as_str()).ok_or_else(|| bad("missing field"))?,
    )?;
    let cols_json = v
        .get("columns")
        .and_then(|c| c.as_array())
        .ok_or_else(|| bad("missing columns"))?;
    let mut columns = Vec::new();
    for col in cols_json {
        let triple = col.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("bad column"))?;
        let entry = |i: usize| triple[i].as_str().ok_or_else(|| bad("column entries are strings"));
        let parse_val = |s: &str| -> Result<Valuation> {
            if s == "inf" {
                Ok(Valuation::Infinite)
            } else {
                s.parse::<u64>().map(Valuation::Finite).map_err(|_| bad("bad valuation"))
            }
        };
        let p = parse_val(entry(0)?)?;
        let c = parse_val(entry(1)?)?;
        let a = match entry(2)? {
            "inf" => Coefficient::Infinity,
            "0" => Coefficient::Zero,
            s => Coefficient::Unit(field.parse_element(s)?),
        };
        columns.push(TableauColumn::new(p, c, a));
    }
    let m_list = v
        .get("m")
        .and_then(|m| m.as_array())
        .ok_or_else(|| bad("missing m"))?
        .iter()
        .map(|m| {
            m.as_str()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| bad("bad m entry"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HNTableau::new(field, columns, m_list))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::parse_poly;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn branch(x: &str, y: &str) -> Branch {
        Branch::new(parse_poly(x, q()).unwrap(), parse_poly(y, q()).unwrap(), q()).unwrap()
    }

    fn fin(n: u64) -> Valuation {
        Valuation::Finite(n)
    }

    fn series(s: &str) -> RatSeries {
        RatSeries::from_poly(parse_poly(s, q()).unwrap())
    }

    #[test]
    fn chain_on_cusp_valuations() {
        let ch = euclid_chain(&series("t^3"), &series("t^2")).unwrap();
        assert_eq!(ch.s_list, vec![1, 2]);
        assert_eq!(ch.kappa, 2);
        assert_eq!(ch.eta_vals, vec![3, 2, 1, 0]);
        assert_eq!(ch.a, q().one());
        assert_eq!(ch.m, 3);
        assert_eq!(ch.next_x, series("t"));
        assert!(ch.next_y.is_zero());
    }

    #[test]
    fn chain_with_unit_denominators() {
        let ch = euclid_chain(&series("t^6 + t^7"), &series("t^4")).unwrap();
        assert_eq!(ch.s_list, vec![1, 2]);
        assert_eq!(ch.a, q().one());
        assert_eq!(ch.m, 3);
        assert_eq!(ch.next_x, series("t^2 + t^3"));
        // next_y = 1/(1+t)^2 - 1, of valuation 1
        assert_eq!(ch.next_y.ord_t().unwrap(), fin(1));
        assert_eq!(ch.next_y.coeff_at(1), q().integer(-2));
    }

    #[test]
    fn chain_with_equal_valuations() {
        let ch = euclid_chain(&series("t^2"), &series("t^2")).unwrap();
        assert_eq!(ch.kappa, 1);
        assert_eq!(ch.s_list, vec![1]);
        assert_eq!(ch.a, q().one());
        assert_eq!(ch.m, 1);
    }

    #[test]
    fn chain_rejects_bad_valuations() {
        assert!(matches!(
            euclid_chain(&series("1 + t"), &series("t")),
            Err(Error::NonPositiveValuation)
        ));
        assert!(matches!(
            euclid_chain(&RatSeries::zero(q()), &series("t")),
            Err(Error::NonPositiveValuation)
        ));
    }

    #[test]
    fn chain_division_relations_hold() {
        for (e0, e1) in [("t^6 + t^7", "t^4"), ("t^5", "t^3"), ("t^4 + t^6", "t^4 + t^5")] {
            let ch = euclid_chain(&series(e0), &series(e1)).unwrap();
            let v = &ch.eta_vals;
            assert_eq!(*v.last().unwrap(), 0);
            for i in 1..=ch.kappa {
                assert_eq!(v[i - 1], ch.s_list[i - 1] * v[i] + v[i + 1]);
            }
            assert_eq!(v[ch.kappa], num_integer::gcd(v[0], v[1]));
        }
    }

    #[test]
    fn minimal_tableau_of_cusp() {
        let t = hn_tableau(&branch("t^2", "t^3"), DepthPolicy::Minimal);
        assert_eq!(t.len(), 1);
        assert_eq!(t.column(0), &TableauColumn::new(fin(3), fin(2), Coefficient::Infinity));
        assert_eq!(t.m_list(), &[3]);
        assert!(tableau_validate(&t).is_empty());
    }

    #[test]
    fn minimal_tableau_with_two_columns() {
        let t = hn_tableau(&branch("t^4", "t^6 + t^7"), DepthPolicy::Minimal);
        assert_eq!(t.len(), 2);
        assert_eq!(t.column(0), &TableauColumn::new(fin(6), fin(4), Coefficient::Unit(q().one())));
        assert_eq!(t.column(1), &TableauColumn::new(fin(1), fin(2), Coefficient::Infinity));
        assert_eq!(t.m_list(), &[3, 2]);
        assert!(tableau_validate(&t).is_empty());
    }

    #[test]
    fn extended_tableau_of_cusp() {
        let t = hn_tableau(&branch("t^2", "t^3"), DepthPolicy::ToColumns(2));
        assert_eq!(t.column(0), &TableauColumn::new(fin(3), fin(2), Coefficient::Unit(q().one())));
        assert_eq!(t.column(1), &TableauColumn::new(Valuation::Infinite, fin(1), Coefficient::Zero));
        assert_eq!(t.m_list(), &[3, 0]);
        assert!(tableau_validate(&t).is_empty());
    }

    #[test]
    fn degenerate_axis_tableaux() {
        let axis = Branch::new(UniPoly::zero(q()), parse_poly("t", q()).unwrap(), q()).unwrap();
        let t = hn_tableau(&axis, DepthPolicy::Minimal);
        assert_eq!(t.column(0), &TableauColumn::new(fin(1), Valuation::Infinite, Coefficient::Zero));
        assert!(t.is_degenerate());
        assert_eq!(multiplicity_sequence(&t).unwrap(), vec![1]);
    }

    #[test]
    fn validation_flags_bad_gcd_chain() {
        let t = HNTableau::new(
            q(),
            vec![
                TableauColumn::new(fin(6), fin(4), Coefficient::Unit(q().one())),
                TableauColumn::new(fin(1), fin(3), Coefficient::Infinity),
            ],
            vec![3, 2],
        );
        let problems = tableau_validate(&t);
        assert!(
            problems.iter().any(|v| v.rule.contains("gcd")),
            "expected a gcd-chain violation, got {problems:?}"
        );
    }

    #[test]
    fn multiplicity_sequences() {
        let cusp = hn_tableau(&branch("t^2", "t^3"), DepthPolicy::Minimal);
        assert_eq!(multiplicity_sequence(&cusp).unwrap(), vec![2, 1, 1]);
        let b = hn_tableau(&branch("t^4", "t^6 + t^7"), DepthPolicy::Minimal);
        assert_eq!(multiplicity_sequence(&b).unwrap(), vec![4, 2, 2, 1, 1]);
        let smooth = hn_tableau(&branch("t", "t^2"), DepthPolicy::Minimal);
        assert_eq!(multiplicity_sequence(&smooth).unwrap(), vec![1]);
        // the extra h.o.t. does not change the cluster of the cusp
        let c2 = hn_tableau(&branch("t^2", "t^3 + t^4"), DepthPolicy::Minimal);
        assert_eq!(multiplicity_sequence(&c2).unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn multiplicity_requires_minimal_policy() {
        let t = hn_tableau(&branch("t^2", "t^3"), DepthPolicy::ToColumns(2));
        assert_eq!(multiplicity_sequence(&t), Err(Error::RequiresMinimalPolicy));
    }

    #[test]
    fn sequence_is_non_increasing_within_chains() {
        for (x, y) in [("t^4", "t^6 + t^7"), ("t^3", "t^5"), ("t^2", "t^7 + t^9")] {
            let t = hn_tableau(&branch(x, y), DepthPolicy::Minimal);
            let m = multiplicity_sequence(&t).unwrap();
            let mut offset = 0;
            for (col, &mj) in t.columns().iter().zip(t.m_list()) {
                let mut chain = Vec::new();
                emit_chain_minima(col.p.expect_finite(), col.c.expect_finite(), &mut chain);
                assert_eq!(chain.len() as u64, mj);
                for w in chain.windows(2) {
                    assert!(w[0] >= w[1]);
                }
                offset += chain.len();
                let _ = offset;
            }
            assert!(m.iter().next_back() == Some(&1));
        }
    }

    #[test]
    fn synthesis_of_simple_tableaux() {
        let cusp = hn_tableau(&branch("t^2", "t^3"), DepthPolicy::Minimal);
        assert_eq!(synthesize_branch(&cusp).unwrap(), branch("t^2", "t^3"));
        let smooth = HNTableau::new(
            q(),
            vec![TableauColumn::new(fin(2), fin(1), Coefficient::Infinity)],
            vec![2],
        );
        assert_eq!(synthesize_branch(&smooth).unwrap(), branch("t", "t^2"));
    }

    #[test]
    fn synthesis_round_trips_two_columns() {
        let t = hn_tableau(&branch("t^4", "t^6 + t^7"), DepthPolicy::Minimal);
        let b = synthesize_branch(&t).unwrap();
        assert_eq!(hn_tableau(&b, DepthPolicy::Minimal), t);
    }

    #[test]
    fn synthesis_rejects_invalid_tableaux() {
        let t = HNTableau::new(
            q(),
            vec![TableauColumn::new(fin(4), fin(2), Coefficient::Infinity)],
            vec![2],
        );
        assert!(matches!(synthesize_branch(&t), Err(Error::UnrealizableTableau(_))));
    }

    #[test]
    fn field_independence_of_numeric_parts() {
        for (x, y) in [("t^2", "t^3"), ("t^4", "t^6 + t^7"), ("t^6", "t^9 + t^10")] {
            let b = branch(x, y);
            let t = hn_tableau(&b, DepthPolicy::Minimal);
            for p in [101u64, 997] {
                let bp = b.reduce_mod(p).unwrap();
                let tp = hn_tableau(&bp, DepthPolicy::Minimal);
                assert_eq!(t.len(), tp.len());
                assert_eq!(t.m_list(), tp.m_list());
                for (a, b) in t.columns().iter().zip(tp.columns()) {
                    assert_eq!((a.p, a.c), (b.p, b.c));
                }
            }
        }
    }

    #[test]
    fn text_rendering_contains_rows() {
        let t = hn_tableau(&branch("t^2", "t^3"), DepthPolicy::Minimal);
        let text = render_tableau_text(&t);
        assert!(text.contains("p: 3"));
        assert!(text.contains("c: 2"));
        assert!(text.contains("a: inf"));
    }

    #[test]
    fn json_round_trip() {
        for b in [branch("t^4", "t^6 + t^7"), branch("t^2", "t^3")] {
            for policy in [DepthPolicy::Minimal, DepthPolicy::ToColumns(3)] {
                let t = hn_tableau(&b, policy);
                let v = tableau_to_json(&t);
                assert_eq!(tableau_from_json(&v).unwrap(), t);
            }
        }
    }
}
