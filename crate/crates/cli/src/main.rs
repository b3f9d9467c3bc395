//! branchlab: exact resolution data of plane curve branches.
//!
//! Verbs: tableau, invariants, resolve, matrices, intersect, approx, check,
//! oracle. Exit codes: 0 success, 1 mathematical disagreement or failed
//! check, 2 input or usage error.

mod checks;
mod reports;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use branchlab_core::hn::DepthPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Tableau,
    Invariants,
    Resolve,
    Matrices,
    Intersect,
    Approx,
    Check,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Tableau,
    Resultant,
    Noether,
    All,
}

/// A fully parsed invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub inputs: Vec<PathBuf>,
    pub depth: DepthPolicy,
    pub json: bool,
    pub index: Option<usize>,
    pub method: Method,
    pub pairs: usize,
    pub clusters: usize,
    pub tableaux: usize,
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UsageError {
    UnknownVerb(String),
    MissingArgument(String),
    BadOption(String),
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageError::UnknownVerb(v) => write!(f, "unknown verb {v:?}"),
            UsageError::MissingArgument(m) => write!(f, "missing argument: {m}"),
            UsageError::BadOption(o) => write!(f, "bad option: {o}"),
        }
    }
}

const USAGE: &str = "\
usage: branchlab <verb> [inputs] [options]

verbs:
  tableau    <branch-file>              Hamburger-Noether tableau
  invariants <branch-file>              characteristic and semigroup data
  resolve    <branch-file>              minimal resolution cluster
  matrices   <cluster-file>             P, Delta, P', P~, N, Q, M
  intersect  <f.branch> <g.branch>      intersection number
  approx     <branch-file> --index j    curvette approximation at stage j
  check      <file>                     invariant suites on the given input
  oracle                                randomized cross-check suites

options:
  --depth minimal|<n>    tableau depth policy (default minimal)
  --json                 machine-readable report
  --index <j>            characteristic index for approx
  --method tableau|resultant|noether|all   intersect method (default all)
  --pairs/--clusters/--tableaux <n>        oracle suite sizes
  --field Q|GF(p)        oracle ground field (default Q)

BRANCHLAB_SEED fixes the seed of the randomized suites.
";

/// Parses argv (without the program name) into a Command.
pub fn parse_command(argv: &[String]) -> Result<Command, UsageError> {
    let mut it = argv.iter().peekable();
    let verb = match it.next().map(String::as_str) {
        None => return Err(UsageError::MissingArgument("a verb".into())),
        Some("tableau") => Verb::Tableau,
        Some("invariants") => Verb::Invariants,
        Some("resolve") => Verb::Resolve,
        Some("matrices") => Verb::Matrices,
        Some("intersect") => Verb::Intersect,
        Some("approx") => Verb::Approx,
        Some("check") => Verb::Check,
        Some("oracle") => Verb::Oracle,
        Some(other) => return Err(UsageError::UnknownVerb(other.into())),
    };
    let mut cmd = Command {
        verb,
        inputs: Vec::new(),
        depth: DepthPolicy::Minimal,
        json: false,
        index: None,
        method: Method::All,
        pairs: 40,
        clusters: 200,
        tableaux: 50,
        field: "Q".into(),
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--json" => cmd.json = true,
            "--depth" => {
                let v = it.next().ok_or(UsageError::MissingArgument("--depth value".into()))?;
                cmd.depth = if v == "minimal" {
                    DepthPolicy::Minimal
                } else {
                    let n: usize = v
                        .parse()
                        .map_err(|_| UsageError::BadOption(format!("--depth {v}")))?;
                    if n == 0 {
                        return Err(UsageError::BadOption("--depth 0".into()));
                    }
                    DepthPolicy::ToColumns(n)
                };
            }
            "--index" => {
                let v = it.next().ok_or(UsageError::MissingArgument("--index value".into()))?;
                cmd.index =
                    Some(v.parse().map_err(|_| UsageError::BadOption(format!("--index {v}")))?);
            }
            "--method" => {
                let v = it.next().ok_or(UsageError::MissingArgument("--method value".into()))?;
                cmd.method = match v.as_str() {
                    "tableau" => Method::Tableau,
                    "resultant" => Method::Resultant,
                    "noether" => Method::Noether,
                    "all" => Method::All,
                    other => return Err(UsageError::BadOption(format!("--method {other}"))),
                };
            }
            "--pairs" | "--clusters" | "--tableaux" => {
                let v = it
                    .next()
                    .ok_or(UsageError::MissingArgument(format!("{arg} value")))?;
                let n: usize =
                    v.parse().map_err(|_| UsageError::BadOption(format!("{arg} {v}")))?;
                match arg.as_str() {
                    "--pairs" => cmd.pairs = n,
                    "--clusters" => cmd.clusters = n,
                    _ => cmd.tableaux = n,
                }
            }
            "--field" => {
                let v = it.next().ok_or(UsageError::MissingArgument("--field value".into()))?;
                cmd.field = v.clone();
            }
            other if other.starts_with("--") => {
                return Err(UsageError::BadOption(other.into()))
            }
            path => cmd.inputs.push(PathBuf::from(path)),
        }
    }
    let arity: usize = match verb {
        Verb::Intersect => 2,
        Verb::Oracle => 0,
        _ => 1,
    };
    if cmd.inputs.len() != arity {
        return Err(UsageError::MissingArgument(format!(
            "{arity} input file(s) expected, got {}",
            cmd.inputs.len()
        )));
    }
    if verb == Verb::Approx && cmd.index.is_none() {
        return Err(UsageError::MissingArgument("--index required for approx".into()));
    }
    Ok(cmd)
}

/// The seed of every randomized suite; overridable for reproducibility.
pub fn suite_seed() -> u64 {
    std::env::var("BRANCHLAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20260810)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.iter().any(|a| a == "--help" || a == "-h") || argv.is_empty() {
        print!("{USAGE}");
        return ExitCode::from(if argv.is_empty() { 2 } else { 0 });
    }
    let cmd = match parse_command(&argv) {
        Ok(cmd) => cmd,
        Err(e) => {
            eprintln!("error: {e}");
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    match reports::run(&cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn parses_simple_verbs() {
        let cmd = parse_command(&args(&["tableau", "cusp.branch"])).unwrap();
        assert_eq!(cmd.verb, Verb::Tableau);
        assert_eq!(cmd.inputs, vec![PathBuf::from("cusp.branch")]);
        assert_eq!(cmd.depth, DepthPolicy::Minimal);
        assert!(!cmd.json);
    }

    #[test]
    fn parses_intersect_with_method() {
        let cmd =
            parse_command(&args(&["intersect", "a.branch", "b.branch", "--method", "all"]))
                .unwrap();
        assert_eq!(cmd.verb, Verb::Intersect);
        assert_eq!(cmd.method, Method::All);
        assert_eq!(cmd.inputs.len(), 2);
    }

    #[test]
    fn approx_requires_index() {
        assert_eq!(
            parse_command(&args(&["approx", "f.branch"])),
            Err(UsageError::MissingArgument("--index required for approx".into()))
        );
        assert!(parse_command(&args(&["approx", "f.branch", "--index", "2"])).is_ok());
    }

    #[test]
    fn rejects_unknown_verbs_and_options() {
        assert!(matches!(
            parse_command(&args(&["frobnicate"])),
            Err(UsageError::UnknownVerb(_))
        ));
        assert!(matches!(
            parse_command(&args(&["tableau", "x", "--wat"])),
            Err(UsageError::BadOption(_))
        ));
        assert!(matches!(
            parse_command(&args(&["tableau", "x", "--depth", "zero"])),
            Err(UsageError::BadOption(_))
        ));
        assert!(matches!(
            parse_command(&args(&["intersect", "only-one.branch"])),
            Err(UsageError::MissingArgument(_))
        ));
    }

    #[test]
    fn depth_option_variants() {
        let cmd = parse_command(&args(&["tableau", "x", "--depth", "3"])).unwrap();
        assert_eq!(cmd.depth, DepthPolicy::ToColumns(3));
        let cmd = parse_command(&args(&["tableau", "x", "--depth", "minimal"])).unwrap();
        assert_eq!(cmd.depth, DepthPolicy::Minimal);
    }
}
