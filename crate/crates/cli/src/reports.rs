//! Report rendering and the verb dispatcher.

use std::fmt::Write as _;
use std::path::Path;

use branchlab_core::branch::{parse_branch_file, render_branch_file, Branch};
use branchlab_core::cluster::matrices::{
    curvette_gram, degree_matrix, intersection_entries_direct, intersection_matrix,
    inverse_proximity, proximity_matrix, refined_proximity, total_proximity,
};
use branchlab_core::cluster::{parse_cluster_file, render_cluster_file, Cluster};
use branchlab_core::hn::{hn_tableau, render_tableau_text, tableau_to_json, DepthPolicy};
use branchlab_core::intersect::{
    approximation_closed_form, intersection_of_branches, mu_approximation, noether_intersection,
    resolution_cluster, resolution_contract_holds, resultant_intersection, ApproxSpec,
};
use branchlab_core::invariants::{characteristic_data, characteristic_indices};
use branchlab_core::{Error, Valuation};

use crate::{checks, Command, Method, Verb};

/// Executes a parsed command; returns the process exit code.
pub fn run(cmd: &Command) -> Result<u8, String> {
    match cmd.verb {
        Verb::Tableau => tableau_report(cmd),
        Verb::Invariants => invariants_report(cmd),
        Verb::Resolve => resolve_report(cmd),
        Verb::Matrices => matrices_report(cmd),
        Verb::Intersect => intersect_report(cmd),
        Verb::Approx => approx_report(cmd),
        Verb::Check => checks::check_input(cmd),
        Verb::Oracle => checks::oracle_suites(cmd),
    }
}

pub fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_branch(path: &Path) -> Result<Branch, String> {
    parse_branch_file(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_cluster(path: &Path) -> Result<Cluster, String> {
    let c = parse_cluster_file(&read_file(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let problems = c.validate();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(ToString::to_string).collect();
        return Err(format!("{}: invalid cluster: {}", path.display(), list.join("; ")));
    }
    Ok(c)
}

fn tableau_report(cmd: &Command) -> Result<u8, String> {
    let b = load_branch(&cmd.inputs[0])?;
    let t = hn_tableau(&b, cmd.depth);
    if cmd.json {
        println!("{}", tableau_to_json(&t));
    } else {
        println!("field: {}", b.field());
        print!("{}", render_tableau_text(&t));
    }
    Ok(0)
}

fn join_u64(values: &[u64]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn strings(values: &[u64]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn invariants_report(cmd: &Command) -> Result<u8, String> {
    let b = load_branch(&cmd.inputs[0])?;
    let t = hn_tableau(&b, DepthPolicy::Minimal);
    let indices = characteristic_indices(&t);
    let data = characteristic_data(&t).map_err(|e| e.to_string())?;
    if cmd.json {
        let mut ch = vec![data.d1.to_string()];
        ch.extend(strings(&data.q_seq));
        println!(
            "{}",
            serde_json::json!({
                "char_indices": indices.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "Ch": ch,
                "d": strings(&data.div_seq),
                "n": strings(&data.n_seq),
                "r": strings(&data.sg_seq),
            })
        );
    } else {
        println!(
            "char-indices: {}",
            indices.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
        );
        println!("Ch: ({}; {})", data.d1, join_u64(&data.q_seq));
        println!("d: {}", join_u64(&data.div_seq));
        println!("n: {}", join_u64(&data.n_seq));
        println!("r: {}", join_u64(&data.sg_seq));
    }
    Ok(0)
}

fn resolve_report(cmd: &Command) -> Result<u8, String> {
    let b = load_branch(&cmd.inputs[0])?;
    let (cluster, m) = resolution_cluster(&b).map_err(|e| e.to_string())?;
    let ok = resolution_contract_holds(&cluster, &m);
    if cmd.json {
        println!(
            "{}",
            serde_json::json!({
                "cluster": branchlab_core::cluster::cluster_to_json(&cluster),
                "m": strings(&m),
                "defect_check": if ok { "PASS" } else { "FAIL" },
            })
        );
    } else {
        print!("{}", render_cluster_file(&cluster));
        println!("m: {}", join_u64(&m));
        println!("defect-check: {}", if ok { "PASS (P^t m = e_last, Q row = m)" } else { "FAIL" });
    }
    Ok(if ok { 0 } else { 1 })
}

fn matrices_report(cmd: &Command) -> Result<u8, String> {
    let c = load_cluster(&cmd.inputs[0])?;
    let p = proximity_matrix(&c);
    let delta = degree_matrix(&c);
    let pprime = refined_proximity(&c);
    let ptilde = total_proximity(&c);
    let n = intersection_matrix(&c);
    let direct = intersection_entries_direct(&c);
    let q = inverse_proximity(&c);
    let m = curvette_gram(&c).map_err(|e| e.to_string())?;
    let agree = n == direct;
    if cmd.json {
        println!(
            "{}",
            serde_json::json!({
                "points": (0..c.len()).map(|i| i.to_string()).collect::<Vec<_>>(),
                "P": p.to_json(),
                "Delta": delta.to_json(),
                "Pprime": pprime.to_json(),
                "Ptilde": ptilde.to_json(),
                "N": n.to_json(),
                "Q": q.to_json(),
                "M": m.to_json(),
                "consistency": if agree { "AGREE" } else { "DISAGREE" },
            })
        );
    } else {
        println!("points: {}", c.len());
        println!("P = {}", p.render_compact());
        println!("Delta = {}", delta.render_compact());
        println!("Pprime = {}", pprime.render_compact());
        println!("Ptilde = {}", ptilde.render_compact());
        println!("N = {}", n.render_compact());
        println!("Q = {}", q.render_compact());
        println!("M = {}", m.render_compact());
        println!(
            "N-check: product vs direct {}",
            if agree { "AGREE" } else { "DISAGREE" }
        );
    }
    Ok(if agree { 0 } else { 1 })
}

fn value_or_inf(v: Result<Valuation, Error>) -> Result<String, String> {
    match v {
        Ok(v) => Ok(v.to_string()),
        Err(Error::SameBranch) => Ok("inf".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn intersect_report(cmd: &Command) -> Result<u8, String> {
    let f = load_branch(&cmd.inputs[0])?;
    let g = load_branch(&cmd.inputs[1])?;
    let revisits = f.revisits_origin() || g.revisits_origin();
    let mut parts = Vec::new();
    let mut values = Vec::new();
    let mut compared = Vec::new();
    if matches!(cmd.method, Method::Tableau | Method::All) {
        let v = value_or_inf(intersection_of_branches(&f, &g))?;
        parts.push(format!("tableau={v}"));
        values.push(("tableau", v.clone()));
        compared.push(v);
    }
    if matches!(cmd.method, Method::Resultant | Method::All) {
        let v = value_or_inf(resultant_intersection(&f, &g))?;
        parts.push(format!("resultant={v}"));
        values.push(("resultant", v.clone()));
        if !revisits {
            compared.push(v);
        }
    }
    if matches!(cmd.method, Method::Noether | Method::All) {
        let v = value_or_inf(
            noether_intersection(&f, &g).map(Valuation::Finite),
        )?;
        parts.push(format!("noether={v}"));
        values.push(("noether", v.clone()));
        compared.push(v);
    }
    let agree = compared.windows(2).all(|w| w[0] == w[1]);
    let verdict = if cmd.method == Method::All {
        Some(if agree { "AGREE" } else { "DISAGREE" })
    } else {
        None
    };
    if cmd.json {
        let mut obj = serde_json::Map::new();
        for (k, v) in &values {
            obj.insert((*k).into(), serde_json::Value::String(v.clone()));
        }
        if let Some(v) = verdict {
            obj.insert("verdict".into(), serde_json::Value::String(v.into()));
        }
        if revisits {
            obj.insert(
                "note".into(),
                serde_json::Value::String("parametrization revisits the origin".into()),
            );
        }
        println!("{}", serde_json::Value::Object(obj));
    } else {
        let mut line = parts.join(" ");
        if let Some(v) = verdict {
            let _ = write!(line, " {v}");
        }
        println!("{line}");
        if revisits && cmd.method == Method::All {
            println!(
                "note: a parametrization revisits the origin; the elimination method counts \
                 every origin germ and is excluded from the verdict"
            );
        }
    }
    Ok(if agree { 0 } else { 1 })
}

fn approx_report(cmd: &Command) -> Result<u8, String> {
    let f = load_branch(&cmd.inputs[0])?;
    let j = cmd.index.expect("checked at parse time");
    let t = hn_tableau(&f, DepthPolicy::Minimal);
    let spec = ApproxSpec::for_index(&t, j).map_err(|e| e.to_string())?;
    let data = characteristic_data(&t).map_err(|e| e.to_string())?;
    let approx = mu_approximation(&t, &spec).map_err(|e| e.to_string())?;
    let g = branchlab_core::hn::synthesize_branch(&approx).map_err(|e| e.to_string())?;
    let iota = intersection_of_branches(&f, &g).map_err(|e| e.to_string())?;
    let r_j = data.sg_seq[j];
    let closed = approximation_closed_form(&t, spec.mu);
    let ok = iota == Valuation::Finite(r_j) && closed == r_j;
    if cmd.json {
        println!(
            "{}",
            serde_json::json!({
                "j": j.to_string(),
                "mu": spec.mu.to_string(),
                "tableau": tableau_to_json(&approx),
                "branch": {
                    "field": g.field().to_string(),
                    "x": g.x().to_string(),
                    "y": g.y().to_string(),
                },
                "iota": iota.to_string(),
                "r": r_j.to_string(),
                "verdict": if ok { "PASS" } else { "FAIL" },
            })
        );
    } else {
        println!("mu: {} (characteristic index {} of {})", spec.mu, j, data.h);
        println!("approximation tableau:");
        print!("{}", render_tableau_text(&approx));
        println!("branch:");
        print!("{}", render_branch_file(&g));
        println!("iota: {iota}");
        println!("r_{j}: {r_j}");
        println!("curvette-check: {}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(if ok { 0 } else { 1 })
}
