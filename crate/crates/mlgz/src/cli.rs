//! Command-line dispatch.  Pure function of the argument list plus the
//! `MLGZ_BUDGET` environment variable: returns the exit code and the text
//! for standard output, so the whole surface is testable in-process.
//!
//! Exit codes: 0 success, 1 mathematical verification failure, 2 usage or
//! parse errors.  Output is deterministic ASCII `key=value` lines; errors
//! surface as a single `error=` line.

use std::fmt::Write as _;

use crate::aut::{brute_force_aut, crt_unit_aut, signed_monodromy_group, DEFAULT_BRUTE_BUDGET};
use crate::catalog::{builtin_catalog_text, load_catalog, verify_all, CatalogEntry};
use crate::cyclo::{chain_condition_witness, power_traces};
use crate::d2k::d2k_analysis;
use crate::lattice::{ade_milnor, suspend, AdeFamily};
use crate::orlik::{orlik_cyclic_search, split_by_multiplicity, DEFAULT_ORLIK_NORM_BOUND};
use crate::Error;

/// Exit code plus what goes to standard output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
}

fn usage(msg: &str) -> CliOutput {
    CliOutput {
        code: 2,
        stdout: format!("error=usage: {msg}\n"),
    }
}

fn math_failure(err: &Error) -> CliOutput {
    CliOutput {
        code: 1,
        stdout: format!("error={err}\n"),
    }
}

fn parse_failure(err: &Error) -> CliOutput {
    CliOutput {
        code: 2,
        stdout: format!("error={err}\n"),
    }
}

fn budget_from_env() -> Result<u64, CliOutput> {
    match std::env::var("MLGZ_BUDGET") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| usage(&format!("MLGZ_BUDGET must be a nonnegative integer, got {v}"))),
        Err(_) => Ok(DEFAULT_BRUTE_BUDGET),
    }
}

fn shipped_entries() -> Vec<CatalogEntry> {
    load_catalog(builtin_catalog_text()).expect("shipped catalog parses")
}

fn find_entry(name: &str) -> Option<CatalogEntry> {
    shipped_entries().into_iter().find(|e| e.name == name)
}

fn parse_family_mu(family: &str, mu: &str) -> Result<(AdeFamily, usize), CliOutput> {
    let family: AdeFamily = family
        .parse()
        .map_err(|_| usage(&format!("unknown family {family}, expected A, D or E")))?;
    let mu: usize = mu
        .parse()
        .map_err(|_| usage(&format!("mu must be a positive integer, got {mu}")))?;
    Ok((family, mu))
}

/// Value of a `--flag value` pair, if present.
fn flag_value<'a>(args: &'a [String], flag: &str) -> Result<Option<&'a str>, CliOutput> {
    match args.iter().position(|a| a == flag) {
        Some(i) => match args.get(i + 1) {
            Some(v) => Ok(Some(v)),
            None => Err(usage(&format!("{flag} needs a value"))),
        },
        None => Ok(None),
    }
}

/// Dispatch a full argument list (without the program name).
pub fn cli_dispatch(args: &[String]) -> CliOutput {
    match dispatch_inner(args) {
        Ok(out) => out,
        Err(out) => out,
    }
}

fn dispatch_inner(args: &[String]) -> Result<CliOutput, CliOutput> {
    let sub = args.first().map(String::as_str).ok_or_else(|| {
        usage("expected a subcommand: info | aut | trace | suspend | orlik | verify-table | chain")
    })?;
    match sub {
        "info" => cmd_info(&args[1..]),
        "aut" => cmd_aut(&args[1..]),
        "trace" => cmd_trace(&args[1..]),
        "suspend" => cmd_suspend(&args[1..]),
        "orlik" => cmd_orlik(&args[1..]),
        "verify-table" => cmd_verify_table(&args[1..]),
        "chain" => cmd_chain(&args[1..]),
        other => Err(usage(&format!("unknown subcommand {other}"))),
    }
}

fn cmd_info(args: &[String]) -> Result<CliOutput, CliOutput> {
    let name = args.first().ok_or_else(|| usage("info <name>"))?;
    let entry = find_entry(name).ok_or_else(|| usage(&format!("unknown entry {name}")))?;
    let mut out = String::new();
    let _ = writeln!(out, "name={}", entry.name);
    let _ = writeln!(out, "mu={}", entry.mu());
    let _ = writeln!(out, "charpoly={}", entry.factors);
    let _ = writeln!(out, "n={}", entry.n);
    let _ = writeln!(out, "mult={}", entry.mult);
    let _ = writeln!(out, "squarefree={}", entry.squarefree());
    if let Some((order, prov)) = entry.expected_gz_order {
        let _ = writeln!(out, "gz_order={order}");
        let _ = writeln!(out, "order_provenance={prov}");
    }
    if entry.classification_open() {
        let _ = writeln!(out, "classification=open");
    }
    Ok(CliOutput { code: 0, stdout: out })
}

fn cmd_aut(args: &[String]) -> Result<CliOutput, CliOutput> {
    let (family, mu) = match (args.first(), args.get(1)) {
        (Some(f), Some(m)) => parse_family_mu(f, m)?,
        _ => return Err(usage("aut <family> <mu> --engine brute|crt|signed|d2k")),
    };
    let engine = flag_value(&args[2..], "--engine")?
        .ok_or_else(|| usage("aut needs --engine brute|crt|signed|d2k"))?;
    let budget = budget_from_env()?;
    let ml = ade_milnor(family, mu).map_err(|e| math_failure(&e))?;
    let mut out = String::new();
    let _ = writeln!(out, "family={family}");
    let _ = writeln!(out, "mu={mu}");
    let _ = writeln!(out, "engine={engine}");
    match engine {
        "brute" => {
            let g = brute_force_aut(&ml, budget).map_err(|e| math_failure(&e))?;
            let _ = writeln!(out, "gz_order={}", g.order());
        }
        "crt" => {
            let f = ml.monodromy_factorization().map_err(|e| math_failure(&e))?;
            let split = split_by_multiplicity(&f);
            let gens = orlik_cyclic_search(&ml, &split, DEFAULT_ORLIK_NORM_BOUND)
                .map_err(|e| math_failure(&e))?;
            let g = crt_unit_aut(&ml, &gens[0]).map_err(|e| math_failure(&e))?;
            let _ = writeln!(out, "gz_order={}", g.order());
        }
        "signed" => {
            let g = signed_monodromy_group(&ml).map_err(|e| math_failure(&e))?;
            let _ = writeln!(out, "gz_order={}", g.order());
        }
        "d2k" => {
            let r = d2k_analysis(&ml, budget).map_err(|e| math_failure(&e))?;
            let _ = writeln!(out, "gz_order={}", r.total_order);
            let _ = writeln!(out, "gram_b1={}", r.gram_b1);
            let _ = writeln!(out, "aut_b1_order={}", r.aut_b1_order);
            let _ = writeln!(out, "cyclic_part_order={}", r.cyclic_part_order);
        }
        other => return Err(usage(&format!("unknown engine {other}"))),
    }
    Ok(CliOutput { code: 0, stdout: out })
}

fn cmd_trace(args: &[String]) -> Result<CliOutput, CliOutput> {
    let name = args.first().ok_or_else(|| usage("trace <name> --k K"))?;
    let k: usize = match flag_value(&args[1..], "--k")? {
        Some(v) => v
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| usage("--k must be a positive integer"))?,
        None => 1,
    };
    let entry = find_entry(name).ok_or_else(|| usage(&format!("unknown entry {name}")))?;
    let traces = power_traces(&entry.factors, k);
    let mut out = String::new();
    for (i, t) in traces.iter().enumerate() {
        let _ = writeln!(out, "t{}={}", i + 1, t);
    }
    Ok(CliOutput { code: 0, stdout: out })
}

fn cmd_suspend(args: &[String]) -> Result<CliOutput, CliOutput> {
    let (family, mu) = match (args.first(), args.get(1)) {
        (Some(f), Some(m)) => parse_family_mu(f, m)?,
        _ => return Err(usage("suspend <family> <mu> --times T")),
    };
    let times: u32 = match flag_value(&args[2..], "--times")? {
        Some(v) => v
            .parse()
            .map_err(|_| usage("--times must be a nonnegative integer"))?,
        None => 1,
    };
    let mut ml = ade_milnor(family, mu).map_err(|e| math_failure(&e))?;
    for _ in 0..times {
        ml = suspend(&ml);
    }
    let mut out = String::new();
    let _ = writeln!(out, "family={family}");
    let _ = writeln!(out, "mu={mu}");
    let _ = writeln!(out, "times={times}");
    let _ = writeln!(out, "n={}", ml.ambient_n());
    let _ = writeln!(out, "L={}", ml.seifert());
    let _ = writeln!(out, "M={}", ml.monodromy());
    let _ = writeln!(out, "I={}", ml.intersection());
    if let Ok(f) = ml.monodromy_factorization() {
        let _ = writeln!(out, "charpoly={f}");
    }
    Ok(CliOutput { code: 0, stdout: out })
}

fn cmd_orlik(args: &[String]) -> Result<CliOutput, CliOutput> {
    let (family, mu) = match (args.first(), args.get(1)) {
        (Some(f), Some(m)) => parse_family_mu(f, m)?,
        _ => return Err(usage("orlik <family> <mu>")),
    };
    let ml = ade_milnor(family, mu).map_err(|e| math_failure(&e))?;
    let f = ml.monodromy_factorization().map_err(|e| math_failure(&e))?;
    let split = split_by_multiplicity(&f);
    let gens =
        orlik_cyclic_search(&ml, &split, DEFAULT_ORLIK_NORM_BOUND).map_err(|e| math_failure(&e))?;
    let mut out = String::new();
    let _ = writeln!(out, "family={family}");
    let _ = writeln!(out, "mu={mu}");
    let split_str: Vec<String> = split
        .iter()
        .map(|p| match crate::cyclo::cyclotomic_factor(p) {
            Ok(f) => f.to_string(),
            Err(_) => p.to_string(),
        })
        .collect();
    let _ = writeln!(out, "split={}", split_str.join("|"));
    for (i, g) in gens.iter().enumerate() {
        let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "a{}=[{}]", i + 1, parts.join(","));
    }
    let _ = writeln!(out, "verified=true");
    Ok(CliOutput { code: 0, stdout: out })
}

fn cmd_verify_table(args: &[String]) -> Result<CliOutput, CliOutput> {
    let budget = budget_from_env()?;
    let entries = match args.first() {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(&format!("cannot read {path}: {e}")))?;
            load_catalog(&text).map_err(|e| parse_failure(&e))?
        }
        None => shipped_entries(),
    };
    match verify_all(&entries, budget) {
        Ok(report) => Ok(CliOutput {
            code: 0,
            stdout: report.text(),
        }),
        Err(Error::VerificationFailure { report, .. }) => {
            Ok(CliOutput { code: 1, stdout: report })
        }
        Err(e) => Err(math_failure(&e)),
    }
}

fn cmd_chain(args: &[String]) -> Result<CliOutput, CliOutput> {
    let name = args.first().ok_or_else(|| usage("chain <name>"))?;
    let entry = find_entry(name).ok_or_else(|| usage(&format!("unknown entry {name}")))?;
    let w = chain_condition_witness(&entry.factors.ord_set()).map_err(|e| math_failure(&e))?;
    let join = |xs: &[u64]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::new();
    let _ = writeln!(out, "name={}", entry.name);
    let _ = writeln!(out, "m_seq={}", join(&w.m_seq));
    let _ = writeln!(
        out,
        "j_seq={}",
        w.j_seq.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    );
    let _ = writeln!(out, "p_seq={}", join(&w.p_seq));
    let _ = writeln!(
        out,
        "k_seq={}",
        w.k_seq.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    );
    let _ = writeln!(out, "i1={}", w.i1);
    let _ = writeln!(out, "i2={}", w.i2);
    Ok(CliOutput { code: 0, stdout: out })
}
