//! The `check` and `oracle` verbs: named invariant suites with one
//! pass/fail line per case, sorted by case id.

use branchlab_core::branch::Branch;
use branchlab_core::cluster::matrices::{
    curvette_gram, degree_matrix, det_matches_degree_product, intersection_entries_direct,
    intersection_matrix, inverse_proximity, proximity_matrix, total_proximity,
};
use branchlab_core::cluster::{parse_cluster_file, random_cluster, Cluster};
use branchlab_core::hn::{
    hn_tableau, synthesize_branch, tableau_from_json, tableau_to_json, tableau_validate,
    DepthPolicy,
};
use branchlab_core::intersect::{
    approximation_closed_form, intersection_of_branches, mu_approximation, noether_intersection,
    resolution_cluster, resolution_contract_holds, resultant_intersection, ApproxSpec,
};
use branchlab_core::invariants::characteristic_data;
use branchlab_core::sampling::{random_branch_pair, random_tableau_branch, seeded_rng};
use branchlab_core::{parse_field, FieldSpec, Valuation};

use crate::{suite_seed, Command};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

struct Case {
    id: String,
    pass: bool,
    detail: String,
}

fn case(id: &str, pass: bool, detail: impl Into<String>) -> Case {
    Case { id: id.into(), pass, detail: detail.into() }
}

fn report(mut cases: Vec<Case>, json: bool) -> Result<u8, String> {
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    let failed = cases.iter().filter(|c| !c.pass).count();
    if json {
        println!(
            "{}",
            serde_json::json!({
                "cases": cases
                    .iter()
                    .map(|c| serde_json::json!({
                        "id": c.id,
                        "status": if c.pass { "pass" } else { "fail" },
                        "detail": c.detail,
                    }))
                    .collect::<Vec<_>>(),
                "failed": failed.to_string(),
            })
        );
    } else {
        for c in &cases {
            let flag = if c.pass { "[PASS]" } else { "[FAIL]" };
            if c.detail.is_empty() {
                println!("{flag} {}", c.id);
            } else {
                println!("{flag} {}: {}", c.id, c.detail);
            }
        }
        println!("{} case(s), {} failed", cases.len(), failed);
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

/// Runs the invariant suites applicable to the given input file. Branch and
/// cluster files are told apart by their first content line.
pub fn check_input(cmd: &Command) -> Result<u8, String> {
    let text = crate::reports::read_file(&cmd.inputs[0])?;
    let is_cluster = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("point"));
    let cases = if is_cluster {
        let c = parse_cluster_file(&text).map_err(|e| e.to_string())?;
        cluster_cases(&c)
    } else {
        let b = crate::reports::load_branch(&cmd.inputs[0])?;
        branch_cases(&b)
    };
    report(cases, cmd.json)
}

fn cluster_cases(c: &Cluster) -> Vec<Case> {
    let mut out = Vec::new();
    let problems = c.validate();
    out.push(case(
        "cluster/01-valid",
        problems.is_empty(),
        problems.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
    ));
    if !problems.is_empty() {
        return out;
    }
    let n = intersection_matrix(c);
    let direct = intersection_entries_direct(c);
    out.push(case("cluster/02-intersection-two-routes", n == direct, ""));
    out.push(case("cluster/03-symmetric", n.is_symmetric(), ""));
    let q = inverse_proximity(c);
    out.push(case(
        "cluster/04-inverse-nonnegative",
        q.is_nonneg_integral() && proximity_matrix(c).mul(&q).is_identity(),
        "",
    ));
    match curvette_gram(c) {
        Ok(m) => {
            let inv_ok = n.inverse().map(|i| i.neg() == m).unwrap_or(false);
            out.push(case("cluster/05-gram-is-neg-inverse", inv_ok, ""));
        }
        Err(e) => out.push(case("cluster/05-gram-is-neg-inverse", false, e.to_string())),
    }
    out.push(case("cluster/06-determinant", det_matches_degree_product(c), ""));
    out.push(case(
        "cluster/07-total-proximity",
        total_proximity(c) == degree_matrix(c).mul(&proximity_matrix(c)),
        "",
    ));
    out
}

fn branch_cases(b: &Branch) -> Vec<Case> {
    let mut out = Vec::new();
    let t = hn_tableau(b, DepthPolicy::Minimal);
    let problems = tableau_validate(&t);
    out.push(case(
        "branch/01-tableau-valid",
        problems.is_empty(),
        problems.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
    ));
    match resolution_cluster(b) {
        Ok((cluster, m)) => out.push(case(
            "branch/02-proximity-defect",
            resolution_contract_holds(&cluster, &m),
            format!("m = {m:?}"),
        )),
        Err(e) => out.push(case("branch/02-proximity-defect", false, e.to_string())),
    }
    if t.is_minimal_form() {
        let round = synthesize_branch(&t)
            .map(|g| hn_tableau(&g, DepthPolicy::Minimal) == t)
            .unwrap_or(false);
        out.push(case("branch/03-round-trip", round, ""));
        let json_round = tableau_from_json(&tableau_to_json(&t)).map(|u| u == t).unwrap_or(false);
        out.push(case("branch/04-json-round-trip", json_round, ""));
        match characteristic_data(&t) {
            Ok(data) => {
                let mut rec_ok = data.sg_seq.get(1) == Some(&data.q_seq[0]);
                for i in 2..=data.h {
                    rec_ok &= data.sg_seq[i]
                        == data.n_seq[i - 2] * data.sg_seq[i - 1] + data.q_seq[i - 1];
                }
                let mut g = data.d1;
                for &qj in &data.q_seq {
                    g = gcd(g, qj);
                }
                out.push(case(
                    "branch/05-semigroup-recursion",
                    rec_ok && g == 1,
                    format!("r = {:?}", data.sg_seq),
                ));
                for j in 1..=data.h {
                    let id = format!("branch/06-curvette-j{j}");
                    let ok = ApproxSpec::for_index(&t, j)
                        .and_then(|spec| {
                            let approx = mu_approximation(&t, &spec)?;
                            let g = synthesize_branch(&approx)?;
                            let iota = intersection_of_branches(b, &g)?;
                            Ok(iota == Valuation::Finite(data.sg_seq[j])
                                && approximation_closed_form(&t, spec.mu) == data.sg_seq[j])
                        })
                        .unwrap_or(false);
                    out.push(case(&id, ok, format!("r_{j} = {}", data.sg_seq[j])));
                }
            }
            Err(e) => out.push(case("branch/05-semigroup-recursion", false, e.to_string())),
        }
        if b.field() == FieldSpec::Rationals {
            let mut ok = true;
            let mut tried = 0;
            for p in [101u64, 997] {
                if let Some(bp) = b.reduce_mod(p) {
                    tried += 1;
                    let tp = hn_tableau(&bp, DepthPolicy::Minimal);
                    ok &= tp.len() == t.len()
                        && tp.m_list() == t.m_list()
                        && tp
                            .columns()
                            .iter()
                            .zip(t.columns())
                            .all(|(a, b)| (a.p, a.c) == (b.p, b.c));
                }
            }
            if tried > 0 {
                out.push(case("branch/07-field-independence", ok, ""));
            }
        }
    }
    out
}

/// Randomized cross-check suites, seeded by BRANCHLAB_SEED.
pub fn oracle_suites(cmd: &Command) -> Result<u8, String> {
    let field = parse_field(&cmd.field).map_err(|e| e.to_string())?;
    let mut rng = seeded_rng(suite_seed());
    let mut out = Vec::new();

    // three-way intersection agreement
    let mut agreed = 0usize;
    let mut mismatches = Vec::new();
    let mut same_image = 0usize;
    while agreed + same_image < cmd.pairs * 4 && agreed < cmd.pairs {
        let (f, g) = random_branch_pair(&mut rng, field, 8);
        let by_res = resultant_intersection(&f, &g).map_err(|e| e.to_string())?;
        if by_res == Valuation::Infinite {
            same_image += 1;
            continue;
        }
        let by_formula = intersection_of_branches(&f, &g).map_err(|e| e.to_string())?;
        let by_points = noether_intersection(&f, &g).map_err(|e| e.to_string())?;
        if by_formula != by_res || Valuation::Finite(by_points) != by_res {
            mismatches.push(format!("{f} vs {g}: {by_formula}/{by_res}/{by_points}"));
        }
        agreed += 1;
    }
    let detail = if mismatches.is_empty() {
        format!("{agreed} pairs over {field}")
    } else {
        format!("{agreed} pairs over {field}; {}", mismatches.join(" | "))
    };
    out.push(case(
        "oracle/01-three-way-intersection",
        mismatches.is_empty() && agreed >= cmd.pairs,
        detail,
    ));

    // matrix identities on random clusters
    let mut bad = 0usize;
    for i in 0..cmd.clusters {
        let size = 1 + i % 12;
        let c = random_cluster(&mut rng, size);
        let n = intersection_matrix(&c);
        let ok = n == intersection_entries_direct(&c)
            && inverse_proximity(&c).is_nonneg_integral()
            && curvette_gram(&c).map(|m| Some(m.neg()) == n.inverse()).unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    out.push(case(
        "oracle/02-matrix-identities",
        bad == 0,
        format!("{} clusters, {bad} failures", cmd.clusters),
    ));

    // synthesis round-trips
    let mut bad = 0usize;
    for _ in 0..cmd.tableaux {
        let (t, b) = random_tableau_branch(&mut rng, field).map_err(|e| e.to_string())?;
        if hn_tableau(&b, DepthPolicy::Minimal) != t {
            bad += 1;
        }
    }
    out.push(case(
        "oracle/03-round-trips",
        bad == 0,
        format!("{} tableaux, {bad} failures", cmd.tableaux),
    ));

    // approximation laws
    let mut bad = 0usize;
    let branches = (cmd.tableaux / 2).max(10);
    for _ in 0..branches {
        let (t, f) = random_tableau_branch(&mut rng, field).map_err(|e| e.to_string())?;
        let data = characteristic_data(&t).map_err(|e| e.to_string())?;
        for j in 1..=data.h {
            let ok = ApproxSpec::for_index(&t, j)
                .and_then(|spec| {
                    let g = synthesize_branch(&mu_approximation(&t, &spec)?)?;
                    let iota = intersection_of_branches(&f, &g)?;
                    Ok(iota == Valuation::Finite(data.sg_seq[j]))
                })
                .unwrap_or(false);
            if !ok {
                bad += 1;
            }
        }
    }
    out.push(case(
        "oracle/04-approximation-laws",
        bad == 0,
        format!("{branches} branches, {bad} failures"),
    ));

    // proximity defect on random branches
    let mut bad = 0usize;
    for _ in 0..cmd.tableaux {
        let b = branchlab_core::sampling::random_branch(&mut rng, field, 8);
        let ok = resolution_cluster(&b)
            .map(|(c, m)| resolution_contract_holds(&c, &m))
            .unwrap_or(false);
        if !ok {
            bad += 1;
        }
    }
    out.push(case(
        "oracle/05-proximity-defect",
        bad == 0,
        format!("{} branches, {bad} failures", cmd.tableaux),
    ));

    report(out, cmd.json)
}
