//! JSON renderings of library results. Sets and symbols always appear in
//! canonical order.

use serde_json::{json, Value};

use quasishift::{
    Alphabet, BlockBoundReport, BlockCode, CheckResult, CosetPartition, Decomposition, IsomorphismReport, Step,
    ShiftSpace, Symbol, SymbolSet,
};

pub fn checks(checks: &[CheckResult]) -> Value {
    checks
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed, "witness": c.witness }))
        .collect()
}

pub fn set(alphabet: &Alphabet, s: &SymbolSet) -> Value {
    json!(alphabet.set_names(s))
}

pub fn partition(alphabet: &Alphabet, p: &CosetPartition) -> Value {
    p.blocks().iter().map(|b| set(alphabet, b)).collect()
}

pub fn code(c: &BlockCode, with_rule: bool) -> Value {
    let mut out = json!({
        "memory": c.memory(),
        "anticipation": c.anticipation(),
        "width": c.width(),
    });
    if with_rule {
        out["rule"] = c
            .rule()
            .iter()
            .map(|(w, &y)| json!({ "window": c.source().word_names(w), "image": c.target().name(y) }))
            .collect();
    }
    out
}

pub fn step(s: &Step) -> Value {
    match *s {
        Step::Phi { h_size, before, after } => json!({ "kind": "phi", "h_size": h_size, "before": before, "after": after }),
        Step::Theta { before, after } => json!({ "kind": "theta", "before": before, "after": after }),
    }
}

pub fn bound(b: &BlockBoundReport) -> Value {
    json!({
        "n": b.n,
        "factorization": b.factorization.iter().map(|&(p, q)| json!([p, q])).collect::<Vec<_>>(),
        "bound": b.bound,
        "width": b.width,
        "memory": b.memory,
        "anticipation": b.anticipation,
        "passed": b.passed,
    })
}

pub fn isomorphism(r: &IsomorphismReport) -> Value {
    json!({
        "max_len": r.max_len,
        "checks": checks(&r.checks),
        "word_counts": [r.word_counts.0.to_string(), r.word_counts.1.to_string()],
        "periodic_counts": r.periodic_counts.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
    })
}

pub fn decomposition(d: &Decomposition, emit_code: bool) -> Value {
    let factor = &d.finite_factor;
    let fa = factor.alphabet();
    let orbit = |o: &Vec<Symbol>| json!(fa.word_names(o));
    json!({
        "finite_factor": {
            "alphabet": fa.names(),
            "orbits": d.orbits.iter().map(orbit).collect::<Vec<_>>(),
            "op_table": factor.op().table_names(),
        },
        "full_shift_exponent": d.full_shift_exponent,
        "trace": d.trace.iter().map(step).collect::<Vec<_>>(),
        "target_alphabet": d.target.alphabet().names(),
        "forward": code(&d.forward, emit_code),
        "inverse": code(&d.inverse, emit_code),
        "product_operation": {
            "memory": d.product_operation.memory(),
            "anticipation": d.product_operation.anticipation(),
            "width": d.product_operation.width(),
        },
    })
}
