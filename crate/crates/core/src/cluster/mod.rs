//! Clusters of infinitely near points: parent links, proximity sets and
//! residue degrees, with validation, classification, a text format and a
//! random generator for the self-check suites.

pub mod matrices;

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result, Violation};

/// One infinitely near point. The root (id 0) is the base point; every other
/// point is a quadratic transform of its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPoint {
    pub id: usize,
    pub parent: Option<usize>,
    /// Points this one is proximate to; always contains the parent, plus at
    /// most one more target inherited from the parent's proximities.
    pub prox: BTreeSet<usize>,
    /// Residue degree over the base point.
    pub degree: u64,
}

/// Classification by the number of proximity targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Root,
    Free,
    Satellite,
}

/// A finite set of infinitely near points closed under predecessors, stored
/// in an order where parents precede children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    points: Vec<ClusterPoint>,
}

impl Cluster {
    pub fn new(points: Vec<ClusterPoint>) -> Cluster {
        Cluster { points }
    }

    /// Single root point.
    pub fn root() -> Cluster {
        Cluster {
            points: vec![ClusterPoint { id: 0, parent: None, prox: BTreeSet::new(), degree: 1 }],
        }
    }

    /// The chain cluster of a multiplicity sequence: parents follow the
    /// quadratic sequence and proximities are read off by saturation
    /// (each point consumes the multiplicities of the points proximate to
    /// it). All degrees are 1.
    pub fn from_multiplicities(m: &[u64]) -> Cluster {
        let prox = crate::hn::saturation_proximities(m);
        let points = (0..m.len())
            .map(|id| ClusterPoint {
                id,
                parent: id.checked_sub(1),
                prox: prox[id].iter().copied().collect(),
                degree: 1,
            })
            .collect();
        Cluster { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ClusterPoint] {
        &self.points
    }

    pub fn point(&self, id: usize) -> &ClusterPoint {
        &self.points[id]
    }

    /// Ids proximate to `target`.
    pub fn proximate_to(&self, target: usize) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| p.prox.contains(&target))
            .map(|p| p.id)
            .collect()
    }

    pub fn classify(&self, id: usize) -> PointKind {
        let p = &self.points[id];
        if p.parent.is_none() {
            PointKind::Root
        } else if p.prox.len() == 1 {
            PointKind::Free
        } else {
            PointKind::Satellite
        }
    }

    /// Appends a free point of degree 1 under `parent`, returning its id.
    pub fn push_free_point(&mut self, parent: usize) -> usize {
        let id = self.points.len();
        self.points.push(ClusterPoint {
            id,
            parent: Some(parent),
            prox: BTreeSet::from([parent]),
            degree: 1,
        });
        id
    }

    /// Checks every structural invariant; an empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            out.push(Violation::new("cluster", "no points"));
            return out;
        }
        for (i, p) in self.points.iter().enumerate() {
            let subject = format!("point {i}");
            if p.id != i {
                out.push(Violation::new(&subject, format!("id {} out of order", p.id)));
            }
            if i == 0 {
                if p.parent.is_some() || !p.prox.is_empty() {
                    out.push(Violation::new(&subject, "the root has no parent and no proximities"));
                }
                if p.degree != 1 {
                    out.push(Violation::new(&subject, "the root has degree 1"));
                }
                continue;
            }
            let Some(parent) = p.parent else {
                out.push(Violation::new(&subject, "only the root may lack a parent"));
                continue;
            };
            if parent >= i {
                out.push(Violation::new(&subject, "parent must precede the point"));
                continue;
            }
            if !p.prox.contains(&parent) {
                out.push(Violation::new(&subject, "every point is proximate to its parent"));
            }
            if p.prox.len() > 2 {
                out.push(Violation::new(&subject, "at most two proximity targets"));
            }
            if p.prox.iter().any(|&t| t >= i) {
                out.push(Violation::new(&subject, "proximity targets must precede the point"));
            }
            if p.degree == 0 {
                out.push(Violation::new(&subject, "degree must be at least 1"));
            }
            for &extra in p.prox.iter().filter(|&&t| t != parent) {
                if extra < self.points.len() && !self.points[parent].prox.contains(&extra) {
                    out.push(Violation::new(
                        &subject,
                        "extra proximity target not inherited from the parent",
                    ));
                }
                // the satellite point on two exceptional components keeps
                // the residue field of its parent
                if p.degree != self.points[parent].degree {
                    out.push(Violation::new(
                        &subject,
                        "a satellite must have its parent's degree",
                    ));
                }
            }
        }
        // the intersection point of two exceptional components is unique, so
        // two children of the same parent cannot share an extra target
        let mut seen = BTreeSet::new();
        for p in self.points.iter().skip(1) {
            let parent = match p.parent {
                Some(parent) => parent,
                None => continue,
            };
            for &extra in p.prox.iter().filter(|&&t| t != parent) {
                if !seen.insert((parent, extra)) {
                    out.push(Violation::new(
                        format!("point {}", p.id),
                        format!("second satellite over ({parent}, {extra})"),
                    ));
                }
            }
        }
        out
    }

    pub fn validated(self) -> Result<Cluster> {
        let problems = self.validate();
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidCluster(crate::error::join_violations(&problems)))
        }
    }
}

/// Grows a random valid cluster: each new point picks any existing parent,
/// becomes a satellite with probability 1/2 when the parent has proximities
/// to inherit, and draws a free degree from {1, 2, 3}.
pub fn random_cluster(rng: &mut impl Rng, size: usize) -> Cluster {
    assert!(size >= 1);
    let mut cluster = Cluster::root();
    let mut taken: BTreeSet<(usize, usize)> = BTreeSet::new();
    for id in 1..size {
        let parent = rng.gen_range(0..id);
        let parent_prox: Vec<usize> = cluster.points[parent].prox.iter().copied().collect();
        let mut prox = BTreeSet::from([parent]);
        let mut satellite = false;
        if !parent_prox.is_empty() && rng.gen_bool(0.5) {
            let extra = parent_prox[rng.gen_range(0..parent_prox.len())];
            if taken.insert((parent, extra)) {
                prox.insert(extra);
                satellite = true;
            }
        }
        let degree = if satellite { cluster.points[parent].degree } else { rng.gen_range(1..=3) };
        cluster.points.push(ClusterPoint { id, parent: Some(parent), prox, degree });
    }
    debug_assert!(cluster.validate().is_empty());
    cluster
}

/// Parses the cluster text format: one `point <id>: parent=<id|none>,
/// prox=[ids], deg=<n>` per line, `#` comments allowed.
pub fn parse_cluster_file(text: &str) -> Result<Cluster> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let err = |reason: String| Error::FileFormat { line: lineno, reason };
        let rest = line
            .strip_prefix("point")
            .ok_or_else(|| err("expected `point <id>: ...`".into()))?;
        let (id_text, fields) =
            rest.split_once(':').ok_or_else(|| err("expected `:` after the id".into()))?;
        let id: usize =
            id_text.trim().parse().map_err(|_| err(format!("bad id {:?}", id_text.trim())))?;
        let mut parent = None;
        let mut prox = BTreeSet::new();
        let mut degree = 1u64;
        let mut saw_parent = false;
        // split on commas outside the prox bracket
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in fields.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cur.push(ch);
                }
                ']' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    parts.push(cur.clone());
                    cur.clear();
                }
                _ => cur.push(ch),
            }
        }
        parts.push(cur);
        for part in parts {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) =
                part.split_once('=').ok_or_else(|| err(format!("expected `key=value` in {part:?}")))?;
            match key.trim() {
                "parent" => {
                    saw_parent = true;
                    let v = value.trim();
                    parent = if v == "none" {
                        None
                    } else {
                        Some(v.parse().map_err(|_| err(format!("bad parent {v:?}")))?)
                    };
                }
                "prox" => {
                    let inner = value
                        .trim()
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| err("prox must be a [list]".into()))?;
                    for token in inner.split(',') {
                        let token = token.trim();
                        if token.is_empty() {
                            continue;
                        }
                        prox.insert(
                            token.parse().map_err(|_| err(format!("bad prox id {token:?}")))?,
                        );
                    }
                }
                "deg" => {
                    degree =
                        value.trim().parse().map_err(|_| err(format!("bad degree {value:?}")))?;
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        if !saw_parent {
            return Err(err("missing parent=".into()));
        }
        points.push(ClusterPoint { id, parent, prox, degree });
    }
    points.sort_by_key(|p| p.id);
    Ok(Cluster::new(points))
}

pub fn render_cluster_file(c: &Cluster) -> String {
    let mut out = String::new();
    for p in c.points() {
        let parent = p.parent.map_or("none".to_string(), |q| q.to_string());
        let prox: Vec<String> = p.prox.iter().map(ToString::to_string).collect();
        out.push_str(&format!(
            "point {}: parent={}, prox=[{}], deg={}\n",
            p.id,
            parent,
            prox.join(","),
            p.degree
        ));
    }
    out
}

pub fn cluster_to_json(c: &Cluster) -> serde_json::Value {
    serde_json::json!({
        "points": c
            .points()
            .iter()
            .map(|p| {
                serde_json::json!({
                    "id": p.id.to_string(),
                    "parent": p.parent.map(|q| q.to_string()),
                    "prox": p.prox.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "deg": p.degree.to_string(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn cluster_from_json(v: &serde_json::Value) -> Result<Cluster> {
    let bad = |m: &str| Error::JsonFormat(m.to_string());
    let points_json =
        v.get("points").and_then(|p| p.as_array()).ok_or_else(|| bad("missing points"))?;
    let mut points = Vec::new();
    for pj in points_json {
        let id: usize = pj
            .get("id")
            .and_then(|x| x.as_str())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad id"))?;
        let parent = match pj.get("parent") {
            Some(serde_json::Value::Null) | None => None,
            Some(serde_json::Value::String(s)) => {
                Some(s.parse().map_err(|_| bad("bad parent"))?)
            }
            _ => return Err(bad("bad parent")),
        };
        let prox = pj
            .get("prox")
            .and_then(|x| x.as_array())
            .ok_or_else(|| bad("bad prox"))?
            .iter()
            .map(|s| s.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad prox id")))
            .collect::<Result<BTreeSet<usize>>>()?;
        let degree = pj
            .get("deg")
            .and_then(|x| x.as_str())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad deg"))?;
        points.push(ClusterPoint { id, parent, prox, degree });
    }
    points.sort_by_key(|p| p.id);
    Ok(Cluster::new(points))
}

/// The cluster of the cusp resolution: 0 <- 1 <- 2 with 2 proximate to both.
#[cfg(test)]
pub(crate) fn cusp_cluster() -> Cluster {
    Cluster::from_multiplicities(&[2, 1, 1])
}
