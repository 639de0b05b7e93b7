//! Command-line front end. Reports go to stdout as JSON, a short summary to
//! stderr. Exit status: 0 when every check passes, 1 on a domain failure,
//! 2 on unusable input.

mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use quasishift::{
    all_passed, block_bound_check, chain_component, coset_cover, entropy_checks, kitchens_decompose, replay,
    round_trip_check, search_move_sequence, structural_checks, verify_isomorphism, BlockOperationRule,
    ChainInstance, DecomposeError, Move, MoveKind, OperationPair, SearchError, SectionPolicy, VerifyError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("check failed")]
    Domain { report: Value },
}

#[derive(Parser)]
#[command(name = "quasishift", version, about = "Markov shifts with 1-block quasigroup operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Latin square, compatibility and every structural identity.
    Validate { path: PathBuf },
    /// Quotient quasigroups, τ, the h-class, entropy and irreducibility.
    Analyze { path: PathBuf },
    /// Decompose into a finite factor times a full shift and verify the conjugacy.
    Decompose {
        path: PathBuf,
        #[arg(long, default_value_t = 8)]
        verify_len: usize,
        /// Include the full rules of both codes.
        #[arg(long)]
        emit_code: bool,
    },
    /// Apply an elementary move, or search for a sequence of them.
    Moves {
        #[command(subcommand)]
        action: MovesAction,
    },
    /// Chain components and their coset partition on windows.
    Chains {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        /// Order whose component is partitioned; defaults to the radius.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Print the transition graph in DOT format.
    ExportDot { path: PathBuf },
}

#[derive(Subcommand)]
enum MovesAction {
    Apply {
        path: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        anchor: String,
        /// Comma-separated symbol names.
        #[arg(long, value_delimiter = ',')]
        block: Vec<String>,
        #[arg(long, default_value_t = 8)]
        verify_len: usize,
    },
    Search {
        from: PathBuf,
        to: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
    },
}

/// Stdout text, stderr summary, and whether every check passed.
struct Outcome {
    stdout: String,
    summary: String,
    passed: bool,
}

fn json_outcome(report: Value, summary: String) -> Outcome {
    let passed = report["passed"].as_bool().unwrap_or(true);
    Outcome {
        stdout: serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        summary,
        passed,
    }
}

fn load(path: &PathBuf) -> Result<instance::Loaded, CliError> {
    instance::read(path)?.load()
}

fn validate(path: &PathBuf) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    let mut checks = loaded.checks;
    checks.extend(structural_checks(&loaded.qs));
    let passed = all_passed(&checks);
    let failed = checks.iter().filter(|c| !c.passed).count();
    Ok(json_outcome(
        json!({
            "command": "validate",
            "instance": instance::describe(&loaded.qs),
            "checks": report::checks(&checks),
            "passed": passed,
        }),
        format!("{} checks, {failed} failed", checks.len()),
    ))
}

fn analyze(path: &PathBuf) -> Result<Outcome, CliError> {
    let loaded = load(path)?;
    let qs = &loaded.qs;
    let a = qs.alphabet();
    let q = qs.quotients();
    let label = |p: &quasishift::CosetPartition, i: usize| a.set_label(p.block(i));
    let tau: serde_json::Map<String, Value> = q
        .tau
        .iter()
        .enumerate()
        .map(|(i, &j)| (label(&q.laf, i), json!(label(&q.lap, j))))
        .collect();
    let shift = qs.shift();
    let exact = shift.exact_entropy_symbolic();
    let report = json!({
        "command": "analyze",
        "instance": instance::describe(qs),
        "block_length": loaded.block_len,
        "follower_classes": report::partition(a, &q.laf),
        "predecessor_classes": report::partition(a, &q.lap),
        "h_classes": report::partition(a, &q.lah),
        "follower_quotient": q.laf_quotient.table_names(),
        "predecessor_quotient": q.lap_quotient.table_names(),
        "h_quotient": q.lah_quotient.table_names(),
        "tau": tau,
        "h": report::set(a, qs.h()),
        "h_size": qs.h().len(),
        "follower_size": qs.follower_size(),
        "entropy": {
            "exact_log_of": exact,
            "numeric": shift.entropy(),
            "perron_eigenvalue": shift.perron_eigenvalue(),
        },
        "irreducible": shift.is_irreducible(),
        "passed": true,
    });
    let summary = format!(
        "|h| = {}, {} follower classes, entropy log {}",
        qs.h().len(),
        q.laf.len(),
        exact.map_or("?".into(), |k| k.to_string())
    );
    Ok(json_outcome(report, summary))
}

fn decompose(path: &PathBuf, verify_len: usize, emit_code: bool) -> Result<Outcome, CliError> {
    if verify_len == 0 {
        return Err(CliError::Input("--verify-len must be at least 1".into()));
    }
    let loaded = load(path)?;
    let qs = &loaded.qs;
    let policy = SectionPolicy::First(loaded.section.clone());
    let d = kitchens_decompose(qs, &policy);
    let entropy = entropy_checks(&d, qs);
    let source_op = BlockOperationRule::from_quasigroup(qs.op());
    let verification = verify_isomorphism(
        &d.forward,
        Some(&d.inverse),
        qs.shift(),
        &d.target,
        Some(OperationPair {
            source: &source_op,
            target: &d.product_operation,
        }),
        verify_len,
    );
    let (verification_json, verified) = match &verification {
        Ok(r) => (report::isomorphism(r), true),
        Err(VerifyError::VerificationFailed { check, witness, detail }) => (
            json!({ "passed": false, "check": check, "witness": witness, "detail": detail }),
            false,
        ),
        Err(e) => (json!({ "passed": false, "detail": e.to_string() }), false),
    };
    let (bound_json, bound_ok) = match block_bound_check(&d, qs) {
        Ok(b) => (report::bound(&b), b.passed),
        Err(DecomposeError::NotIrreducible) => (json!({ "skipped": "the shift is not irreducible" }), true),
    };
    let passed = verified && bound_ok && all_passed(&entropy);
    let mut out = report::decomposition(&d, emit_code);
    out["command"] = json!("decompose");
    out["entropy_checks"] = report::checks(&entropy);
    out["verification"] = verification_json;
    out["block_bound"] = bound_json;
    out["passed"] = json!(passed);
    let summary = format!(
        "|F| = {}, n = {}, {} steps, verification {}",
        d.factor_size(),
        d.full_shift_exponent,
        d.trace.len(),
        if verified { "passed" } else { "FAILED" }
    );
    Ok(json_outcome(out, summary))
}

fn parse_move(qs: &quasishift::QuasigroupShift, kind: &str, anchor: &str, block: &[String]) -> Result<Move, CliError> {
    let kind = MoveKind::parse(kind).ok_or_else(|| CliError::Input(format!("unknown move kind {kind:?}")))?;
    let a = qs.alphabet();
    let anchor = a.lookup(anchor).map_err(|e| CliError::Input(format!("anchor: {e}")))?;
    let block = a.parse_set(block).map_err(|e| CliError::Input(format!("block: {e}")))?;
    Ok(Move { kind, anchor, block })
}

fn moves_apply(path: &PathBuf, kind: &str, anchor: &str, block: &[String], verify_len: usize) -> Result<Outcome, CliError> {
    if verify_len == 0 {
        return Err(CliError::Input("--verify-len must be at least 1".into()));
    }
    let loaded = load(path)?;
    let qs = &loaded.qs;
    let m = parse_move(qs, kind, anchor, block)?;
    let description = m.describe(qs.alphabet());
    match quasishift::apply_move(qs, &m) {
        Err(e) => Ok(json_outcome(
            json!({ "command": "moves apply", "move": description, "error": e.to_string(), "passed": false }),
            format!("{description}: {e}"),
        )),
        Ok(out) => {
            let round_trip = round_trip_check(qs, &m, verify_len);
            let (rt_json, ok) = match &round_trip {
                Ok(r) => (report::isomorphism(r), true),
                Err(e) => (json!({ "passed": false, "detail": e.to_string() }), false),
            };
            let same_entropy = out.shift.shift().exact_entropy_symbolic() == qs.shift().exact_entropy_symbolic();
            Ok(json_outcome(
                json!({
                    "command": "moves apply",
                    "move": description,
                    "result": instance::describe(&out.shift),
                    "forward": report::code(&out.forward, false),
                    "backward": report::code(&out.backward, false),
                    "entropy_preserved": same_entropy,
                    "round_trip": rt_json,
                    "passed": ok && same_entropy,
                }),
                format!("{description}: {} symbols", out.shift.alphabet().len()),
            ))
        }
    }
}

fn moves_search(from: &PathBuf, to: &PathBuf, max_depth: usize) -> Result<Outcome, CliError> {
    let a = load(from)?.qs;
    let b = load(to)?.qs;
    match search_move_sequence(&a, &b, max_depth) {
        Ok(path) => {
            let mut state = a.clone();
            let mut steps = Vec::new();
            for m in &path {
                steps.push(json!(m.describe(state.alphabet())));
                state = replay(&state, std::slice::from_ref(m)).expect("found moves replay");
            }
            Ok(json_outcome(
                json!({ "command": "moves search", "max_depth": max_depth, "found": true, "moves": steps, "passed": true }),
                format!("found {} moves within depth {max_depth}", path.len()),
            ))
        }
        Err(SearchError::NotFoundWithinDepth { depth, reason }) => Ok(json_outcome(
            json!({
                "command": "moves search",
                "max_depth": depth,
                "found": false,
                "reason": format!("{reason:?}"),
                "passed": false,
            }),
            format!("no sequence within depth {depth} ({reason:?})"),
        )),
    }
}

fn chains(path: &PathBuf, radius: usize, order: Option<usize>) -> Result<Outcome, CliError> {
    let qs = load(path)?.qs;
    let order = order.unwrap_or(radius);
    if order > radius {
        return Err(CliError::Input(format!("--order {order} exceeds --radius {radius}")));
    }
    let a = qs.alphabet().clone();
    let ci = match ChainInstance::new(qs, radius, None) {
        Ok(ci) => ci,
        Err(e) => {
            return Ok(json_outcome(
                json!({ "command": "chains", "error": e.to_string(), "passed": false }),
                e.to_string(),
            ))
        }
    };
    let mut components = Vec::new();
    let mut passed = true;
    let mut previous: Option<std::collections::BTreeSet<quasishift::Word>> = None;
    let mut chosen = None;
    for t in 0..=radius {
        let m = chain_component(&ci, t).expect("t within radius");
        let nested = previous.as_ref().is_none_or(|p| m.windows.is_subset(p));
        passed &= m.closed && m.symmetric && nested;
        components.push(json!({
            "order": t,
            "size": m.windows.len(),
            "closed": m.closed,
            "symmetric": m.symmetric,
            "nested_in_previous": nested,
        }));
        if t == order {
            chosen = Some(m.windows.clone());
        }
        previous = Some(m.windows);
    }
    let q_set = chosen.expect("order within radius");
    let partition = match coset_cover(&ci, &q_set) {
        Ok(blocks) => json!(blocks
            .iter()
            .map(|b| b.iter().map(|w| a.word_name(w)).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
        Err(e) => {
            passed = false;
            json!({ "error": e.to_string() })
        }
    };
    Ok(json_outcome(
        json!({
            "command": "chains",
            "radius": radius,
            "order": order,
            "e_window": a.word_name(ci.e_window()),
            "e_window_is_constant": ci.e_window_is_constant(),
            "components": components,
            "partition": partition,
            "passed": passed,
        }),
        format!("radius {radius}, |M_{order}| = {}", q_set.len()),
    ))
}

fn export_dot(path: &PathBuf) -> Result<Outcome, CliError> {
    let qs = load(path)?.qs;
    let name = path.file_stem().map_or("shift".into(), |s| s.to_string_lossy().into_owned());
    Ok(Outcome {
        stdout: qs.shift().to_dot(&name),
        summary: format!("{} nodes, {} edges", qs.alphabet().len(), qs.shift().transition_count()),
        passed: true,
    })
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Analyze { path } => analyze(&path),
        Command::Decompose { path, verify_len, emit_code } => decompose(&path, verify_len, emit_code),
        Command::Moves { action } => match action {
            MovesAction::Apply { path, kind, anchor, block, verify_len } => {
                moves_apply(&path, &kind, &anchor, &block, verify_len)
            }
            MovesAction::Search { from, to, max_depth } => moves_search(&from, &to, max_depth),
        },
        Command::Chains { path, radius, order } => chains(&path, radius, order),
        Command::ExportDot { path } => export_dot(&path),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprintln!("{}", out.summary);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Domain { report }) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            let failed = report["checks"]
                .as_array()
                .and_then(|cs| cs.iter().find(|c| c["passed"] == false))
                .map(|c| format!("{}: {}", c["name"].as_str().unwrap_or(""), c["witness"].as_str().unwrap_or("")));
            eprintln!("FAIL {}", failed.unwrap_or_default());
            ExitCode::from(1)
        }
        Err(e @ CliError::Input(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
