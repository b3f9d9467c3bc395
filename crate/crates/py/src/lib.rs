//! Python bindings: branches, clusters and the main invariant computations.
//!
//! Exact values cross the boundary as strings (scalars, matrix entries,
//! possibly-infinite valuations) or machine integers where they are plain
//! counts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use branchlab_core::branch::render_branch_file;
use branchlab_core::cluster::matrices::{
    curvette_gram, degree_matrix, intersection_entries_direct, intersection_matrix,
    inverse_proximity, proximity_matrix, refined_proximity, total_proximity, ExactMatrix,
};
use branchlab_core::hn::{hn_tableau, render_tableau_text, DepthPolicy, HNTableau};
use branchlab_core::intersect::{
    intersection_of_branches, mu_approximation, noether_intersection, resolution_cluster,
    resultant_intersection, ApproxSpec,
};
use branchlab_core::invariants::characteristic_data;
use branchlab_core::{parse_field, parse_poly, Valuation};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_rows(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(branchlab_core::cluster::matrices::rational_string)
                .collect()
        })
        .collect()
}

fn tableau_dict<'py>(py: Python<'py>, t: &HNTableau) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let cols: Vec<(String, String, String)> = t
        .columns()
        .iter()
        .map(|c| (c.p.to_string(), c.c.to_string(), c.a.render()))
        .collect();
    d.set_item("columns", cols)?;
    d.set_item("m", t.m_list().to_vec())?;
    d.set_item("text", render_tableau_text(t))?;
    Ok(d)
}

/// A plane curve branch given by a polynomial parametrization over Q or
/// GF(p).
#[pyclass(frozen)]
struct Branch {
    inner: branchlab_core::Branch,
}

#[pymethods]
impl Branch {
    #[new]
    fn new(field: &str, x: &str, y: &str) -> PyResult<Self> {
        let spec = parse_field(field).map_err(err)?;
        let x = parse_poly(x, spec).map_err(err)?;
        let y = parse_poly(y, spec).map_err(err)?;
        Ok(Branch { inner: branchlab_core::Branch::new(x, y, spec).map_err(err)? })
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn x(&self) -> String {
        self.inner.x().to_string()
    }

    #[getter]
    fn y(&self) -> String {
        self.inner.y().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Branch({})", self.inner)
    }

    /// Hamburger-Noether tableau; depth is None for the minimal policy or a
    /// positive column count.
    #[pyo3(signature = (depth=None))]
    fn tableau<'py>(&self, py: Python<'py>, depth: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
        let policy = match depth {
            None => DepthPolicy::Minimal,
            Some(0) => return Err(err("depth must be at least 1")),
            Some(n) => DepthPolicy::ToColumns(n),
        };
        tableau_dict(py, &hn_tableau(&self.inner, policy))
    }

    /// Characteristic indices and the Ch, d, n, r sequences.
    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let t = hn_tableau(&self.inner, DepthPolicy::Minimal);
        let data = characteristic_data(&t).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("indices", data.indices.clone())?;
        let mut ch = vec![data.d1];
        ch.extend(&data.q_seq);
        d.set_item("Ch", ch)?;
        d.set_item("d", data.div_seq.clone())?;
        d.set_item("n", data.n_seq.clone())?;
        d.set_item("r", data.sg_seq.clone())?;
        Ok(d)
    }

    /// Multiplicities of the strict transforms along the minimal resolution.
    fn multiplicity_sequence(&self) -> PyResult<Vec<u64>> {
        let t = hn_tableau(&self.inner, DepthPolicy::Minimal);
        branchlab_core::hn::multiplicity_sequence(&t).map_err(err)
    }

    /// The minimal resolution cluster and its multiplicity vector.
    fn resolution<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let (cluster, m) = resolution_cluster(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        let points = PyList::empty(py);
        for p in cluster.points() {
            let pd = PyDict::new(py);
            pd.set_item("id", p.id)?;
            pd.set_item("parent", p.parent)?;
            pd.set_item("prox", p.prox.iter().copied().collect::<Vec<_>>())?;
            pd.set_item("deg", p.degree)?;
            points.append(pd)?;
        }
        d.set_item("points", points)?;
        d.set_item("m", m)?;
        Ok(d)
    }

    /// The canonical curvette approximation at the j-th characteristic
    /// index.
    fn approximation(&self, j: usize) -> PyResult<Branch> {
        let t = hn_tableau(&self.inner, DepthPolicy::Minimal);
        let spec = ApproxSpec::for_index(&t, j).map_err(err)?;
        let approx = mu_approximation(&t, &spec).map_err(err)?;
        Ok(Branch { inner: branchlab_core::hn::synthesize_branch(&approx).map_err(err)? })
    }

    /// The branch file rendering of this branch.
    fn to_text(&self) -> String {
        render_branch_file(&self.inner)
    }
}

/// A cluster of infinitely near points.
#[pyclass(frozen)]
struct Cluster {
    inner: branchlab_core::Cluster,
}

#[pymethods]
impl Cluster {
    /// Parses the cluster text format (`point <id>: parent=.., prox=[..],
    /// deg=..` lines).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let c = branchlab_core::cluster::parse_cluster_file(text).map_err(err)?;
        Ok(Cluster { inner: c })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn validate(&self) -> Vec<String> {
        self.inner.validate().iter().map(ToString::to_string).collect()
    }

    /// All derived matrices, entries as exact strings.
    fn matrices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = &self.inner;
        if !c.validate().is_empty() {
            return Err(err("cluster is not valid"));
        }
        let d = PyDict::new(py);
        d.set_item("P", matrix_rows(&proximity_matrix(c)))?;
        d.set_item("Delta", matrix_rows(&degree_matrix(c)))?;
        d.set_item("Pprime", matrix_rows(&refined_proximity(c)))?;
        d.set_item("Ptilde", matrix_rows(&total_proximity(c)))?;
        let n = intersection_matrix(c);
        d.set_item("N", matrix_rows(&n))?;
        d.set_item("Q", matrix_rows(&inverse_proximity(c)))?;
        d.set_item("M", matrix_rows(&curvette_gram(c).map_err(err)?))?;
        d.set_item("consistent", n == intersection_entries_direct(c))?;
        Ok(d)
    }

    fn to_text(&self) -> String {
        branchlab_core::cluster::render_cluster_file(&self.inner)
    }
}

/// Intersection number of two branches as a string ("inf" for equal
/// images), by the chosen method: "tableau", "resultant", "noether" or
/// "all" (a dict of the three).
#[pyfunction]
#[pyo3(signature = (f, g, method="all"))]
fn intersect(py: Python<'_>, f: &Branch, g: &Branch, method: &str) -> PyResult<Py<PyAny>> {
    let render = |v: Result<Valuation, branchlab_core::Error>| -> PyResult<String> {
        match v {
            Ok(v) => Ok(v.to_string()),
            Err(branchlab_core::Error::SameBranch) => Ok("inf".into()),
            Err(e) => Err(err(e)),
        }
    };
    let tableau = || render(intersection_of_branches(&f.inner, &g.inner));
    let resultant = || render(resultant_intersection(&f.inner, &g.inner));
    let noether = || render(noether_intersection(&f.inner, &g.inner).map(Valuation::Finite));
    match method {
        "tableau" => Ok(tableau()?.into_pyobject(py)?.unbind().into_any()),
        "resultant" => Ok(resultant()?.into_pyobject(py)?.unbind().into_any()),
        "noether" => Ok(noether()?.into_pyobject(py)?.unbind().into_any()),
        "all" => {
            let d = PyDict::new(py);
            d.set_item("tableau", tableau()?)?;
            d.set_item("resultant", resultant()?)?;
            d.set_item("noether", noether()?)?;
            Ok(d.unbind().into_any())
        }
        other => Err(err(format!("unknown method {other:?}"))),
    }
}

/// Builds the canonical branch of a minimal tableau given as (p, c, a)
/// string triples; a is "inf" on the last column.
#[pyfunction]
fn synthesize(field: &str, columns: Vec<(String, String, String)>) -> PyResult<Branch> {
    use branchlab_core::hn::{chain_length, Coefficient, TableauColumn};
    let spec = parse_field(field).map_err(err)?;
    let parse_val = |s: &str| -> PyResult<Valuation> {
        if s == "inf" {
            Ok(Valuation::Infinite)
        } else {
            s.parse::<u64>().map(Valuation::Finite).map_err(err)
        }
    };
    let mut cols = Vec::new();
    let mut m_list = Vec::new();
    for (p, c, a) in &columns {
        let p = parse_val(p)?;
        let c = parse_val(c)?;
        let a = match a.as_str() {
            "inf" => Coefficient::Infinity,
            "0" => Coefficient::Zero,
            s => Coefficient::Unit(spec.parse_element(s).map_err(err)?),
        };
        m_list.push(match (p, c) {
            (Valuation::Finite(p), Valuation::Finite(c)) => chain_length(p, c),
            _ => 0,
        });
        cols.push(TableauColumn::new(p, c, a));
    }
    let t = HNTableau::new(spec, cols, m_list);
    Ok(Branch { inner: branchlab_core::hn::synthesize_branch(&t).map_err(err)? })
}

/// A cluster built from a multiplicity sequence, all degrees 1.
#[pyfunction]
fn cluster_from_multiplicities(m: Vec<u64>) -> PyResult<Cluster> {
    if m.is_empty() {
        return Err(err("empty multiplicity sequence"));
    }
    Ok(Cluster { inner: branchlab_core::Cluster::from_multiplicities(&m) })
}

#[pymodule]
fn branchlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Branch>()?;
    m.add_class::<Cluster>()?;
    m.add_function(wrap_pyfunction!(intersect, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_from_multiplicities, m)?)?;
    Ok(())
}
