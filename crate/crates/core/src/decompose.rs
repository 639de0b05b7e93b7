//! Decomposition of a quasigroup shift into a finite quasigroup factor times
//! a full shift, and a brute-force oracle for conjugacies.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::block_op::BlockOperationRule;
use crate::check::CheckResult;
use crate::code::{compose_codes, BlockCode};
use crate::qgshift::{QuasigroupShift, Section};
use crate::shift::{MarkovShift, ShiftSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("the shift is not irreducible")]
    NotIrreducible,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{check} fails on {}: {detail}", witness.join(" "))]
    VerificationFailed {
        check: String,
        witness: Vec<String>,
        detail: String,
    },
    #[error("code alphabets do not match the shifts")]
    AlphabetMismatch,
    #[error("verification length must be at least 1")]
    ZeroLength,
}

/// How to choose the section at each splitting step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SectionPolicy {
    #[default]
    Min,
    Max,
    /// Used for the first splitting; later steps use the minimum section.
    First(Section),
}

/// One step of the decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Split off a full shift on the h-class of the base point.
    Phi { h_size: usize, before: usize, after: usize },
    /// Pass to the follower-set quotient.
    Theta { before: usize, after: usize },
}

/// A conjugacy from a quasigroup shift onto `F × Σ_n`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The last stage: every symbol has exactly one follower.
    pub finite_factor: QuasigroupShift,
    /// Cycles of the finite factor, each starting at its least symbol.
    pub orbits: Vec<Word>,
    pub full_shift_exponent: usize,
    /// The product shift `F × Σ_n`.
    pub target: MarkovShift,
    /// `components[i]` is the finite-factor symbol and the full-shift
    /// coordinates (one symbol of each split stage) of target symbol `i`.
    pub components: Vec<(Symbol, Vec<Symbol>)>,
    /// 1-block code onto the product.
    pub forward: BlockCode,
    /// Inverse code with memory equal to the number of θ-steps.
    pub inverse: BlockCode,
    /// `u ⊗ v = forward(inverse(u) • inverse(v))`, trimmed to its smallest window.
    pub product_operation: BlockOperationRule,
    pub trace: Vec<Step>,
}

impl Decomposition {
    pub fn theta_steps(&self) -> usize {
        self.trace.iter().filter(|s| matches!(s, Step::Theta { .. })).count()
    }

    pub fn factor_size(&self) -> usize {
        self.finite_factor.alphabet().len()
    }
}

/// State of the running decomposition.
struct Stage {
    qs: QuasigroupShift,
    /// Alphabet and h-class of every split stage so far.
    splits: Vec<(Alphabet, Vec<Symbol>)>,
    /// Original symbol ↦ current stage symbol.
    position: Vec<Symbol>,
    /// Original symbol ↦ full-shift coordinates.
    coords: Vec<Vec<Symbol>>,
    /// Code from the current product alphabet back to the original one.
    inverse: BlockCode,
}

/// The product of a stage alphabet with the split h-classes.
struct Product {
    alphabet: Alphabet,
    components: Vec<(Symbol, Vec<Symbol>)>,
    index: BTreeMap<(Symbol, Vec<Symbol>), Symbol>,
}

impl Product {
    fn new(stage: &Alphabet, splits: &[(Alphabet, Vec<Symbol>)]) -> Self {
        let mut tuples: Vec<Vec<Symbol>> = vec![Vec::new()];
        for (_, h) in splits {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    h.iter().map(move |&x| {
                        let mut next = t.clone();
                        next.push(x);
                        next
                    })
                })
                .collect();
        }
        let mut components = Vec::new();
        let mut names = Vec::new();
        for s in stage.symbols() {
            for t in &tuples {
                let coords: Vec<&str> = t.iter().zip(splits).map(|(&x, (a, _))| a.name(x)).collect();
                names.push(if coords.is_empty() {
                    format!("({})", stage.name(s))
                } else {
                    format!("({};{})", stage.name(s), coords.join(","))
                });
                components.push((s, t.clone()));
            }
        }
        let (alphabet, positions) = Alphabet::with_positions(&names).expect("product names are distinct");
        let mut ordered = vec![(0, Vec::new()); components.len()];
        for (c, &p) in components.into_iter().zip(&positions) {
            ordered[p] = c;
        }
        let index = ordered.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Product {
            alphabet,
            components: ordered,
            index,
        }
    }
}

/// Alternates splitting off `h` (while `|h| > 1`) and passing to the
/// follower quotient (while follower sets have more than one element) until
/// the shift is a finite union of periodic orbits.
pub fn kitchens_decompose(qs: &QuasigroupShift, policy: &SectionPolicy) -> Decomposition {
    let n = qs.alphabet().len();
    let initial = Product::new(qs.alphabet(), &[]);
    let inverse = BlockCode::one_block(initial.alphabet.clone(), qs.alphabet().clone(), |u| initial.components[u].0);
    let mut stage = Stage {
        qs: qs.clone(),
        splits: Vec::new(),
        position: (0..n).collect(),
        coords: vec![Vec::new(); n],
        inverse,
    };
    let mut trace = Vec::new();
    let mut first_split = true;
    loop {
        let before = stage.qs.alphabet().len();
        let product_before = Product::new(stage.qs.alphabet(), &stage.splits);
        if stage.qs.h().len() > 1 {
            let section = match (policy, first_split) {
                (SectionPolicy::First(s), true) => s.clone(),
                (SectionPolicy::Max, _) => Section::max(&stage.qs),
                _ => Section::min(&stage.qs),
            };
            first_split = false;
            let sigma_h = stage.qs.sigma_h();
            let h: Vec<Symbol> = stage.qs.h().iter().copied().collect();
            let mut splits = stage.splits.clone();
            splits.push((stage.qs.alphabet().clone(), h.clone()));
            let after = Product::new(sigma_h.alphabet(), &splits);
            let step = BlockCode::one_block(after.alphabet.clone(), product_before.alphabet.clone(), |u| {
                let (block, coords) = &after.components[u];
                let (x, rest) = coords.split_last().unwrap();
                let symbol = stage.qs.phi_inverse(&section, (*block, *x));
                product_before.index[&(symbol, rest.to_vec())]
            });
            for a in 0..n {
                let (block, x) = stage.qs.phi_symbol(&section, stage.position[a]);
                stage.position[a] = block;
                stage.coords[a].push(x);
            }
            stage.inverse = compose_codes(&step, &stage.inverse).expect("alphabets chain");
            trace.push(Step::Phi {
                h_size: h.len(),
                before,
                after: sigma_h.alphabet().len(),
            });
            debug_assert_eq!(sigma_h.h().len(), 1, "the h-class shift has a singleton h-class");
            stage.splits = splits;
            stage.qs = sigma_h;
        } else if stage.qs.follower_size() > 1 {
            let quotient = stage.qs.sigma_f();
            let theta_inverse = stage.qs.theta_inverse().expect("h is a singleton");
            let after = Product::new(quotient.shift.alphabet(), &stage.splits);
            let mut rule = BTreeMap::new();
            for u in after.alphabet.symbols() {
                for v in after.alphabet.symbols() {
                    let (f0, _) = &after.components[u];
                    let (f1, t1) = &after.components[v];
                    if let Some(g) = theta_inverse.get(&[*f0, *f1]) {
                        rule.insert(vec![u, v], product_before.index[&(g, t1.clone())]);
                    }
                }
            }
            let step = BlockCode::new(after.alphabet.clone(), product_before.alphabet.clone(), 1, 0, rule)
                .expect("2-block rule");
            for a in 0..n {
                stage.position[a] = quotient.theta.get(&[stage.position[a]]).unwrap();
            }
            stage.inverse = compose_codes(&step, &stage.inverse).expect("alphabets chain");
            trace.push(Step::Theta {
                before,
                after: quotient.shift.alphabet().len(),
            });
            stage.qs = quotient.shift;
        } else {
            break;
        }
    }

    let product = Product::new(stage.qs.alphabet(), &stage.splits);
    let factor = stage.qs.shift();
    let target = MarkovShift::from_fn(product.alphabet.clone(), |u, v| {
        factor.allows(product.components[u].0, product.components[v].0)
    })
    .expect("product of essential shifts is essential");
    let forward = BlockCode::one_block(qs.alphabet().clone(), product.alphabet.clone(), |a| {
        product.index[&(stage.position[a], stage.coords[a].clone())]
    });
    let inverse = stage.inverse;
    let memory = inverse.memory();
    let windows = target.enumerate_words(memory + 1).expect("non-empty");
    let product_operation = BlockOperationRule::from_windows(product.alphabet.clone(), memory, 0, windows, |u, v| {
        let a = inverse.get(u).expect("inverse is total on allowed windows");
        let b = inverse.get(v).expect("inverse is total on allowed windows");
        forward.get(&[qs.op().op(a, b)]).unwrap()
    })
    .trimmed();
    let full_shift_exponent = stage.splits.iter().map(|(_, h)| h.len()).product();
    Decomposition {
        orbits: orbits(factor),
        finite_factor: stage.qs,
        full_shift_exponent,
        target,
        components: product.components,
        forward,
        inverse,
        product_operation,
        trace,
    }
}

fn orbits(shift: &MarkovShift) -> Vec<Word> {
    let mut seen = vec![false; shift.order()];
    let mut out = Vec::new();
    for start in shift.alphabet().symbols() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            orbit.push(s);
            s = *shift.followers(s).first().unwrap();
        }
        out.push(orbit);
    }
    out
}

/// Entropy checks: every follower set of the original has exactly `n`
/// elements, and the numeric entropy is within `1e-9` of `log n`.
pub fn entropy_checks(d: &Decomposition, qs: &QuasigroupShift) -> Vec<CheckResult> {
    let n = d.full_shift_exponent;
    let exact = qs.shift().exact_entropy_symbolic();
    let numeric = qs.shift().entropy();
    vec![
        CheckResult::from_witness(
            "exact entropy is log n",
            (exact != Some(n)).then(|| format!("follower size {exact:?}, n = {n}")),
        ),
        CheckResult::from_witness(
            "numeric entropy agrees with log n",
            ((numeric - (n as f64).ln()).abs() > 1e-9).then(|| format!("{numeric} vs log {n}")),
        ),
    ]
}

/// Bound on the width of the product operation in terms of the prime
/// factorization `n = p₁^q₁ ⋯ p_r^q_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockBoundReport {
    pub n: usize,
    pub factorization: Vec<(usize, u32)>,
    /// `1 + q₁ + ⋯ + q_r`.
    pub bound: usize,
    pub width: usize,
    pub memory: usize,
    pub anticipation: usize,
    pub passed: bool,
}

pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut q = 0;
        while n % p == 0 {
            n /= p;
            q += 1;
        }
        if q > 0 {
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Checks `width(⊗) ≤ 1 + Σ qᵢ` and that `⊗` has anticipation 0.
pub fn block_bound_check(d: &Decomposition, qs: &QuasigroupShift) -> Result<BlockBoundReport, DecomposeError> {
    if !qs.shift().is_irreducible() {
        return Err(DecomposeError::NotIrreducible);
    }
    let n = d.full_shift_exponent;
    let factorization = factorize(n);
    let bound = 1 + factorization.iter().map(|&(_, q)| q as usize).sum::<usize>();
    let op = &d.product_operation;
    Ok(BlockBoundReport {
        n,
        factorization,
        bound,
        width: op.width(),
        memory: op.memory(),
        anticipation: op.anticipation(),
        passed: op.width() <= bound && op.anticipation() == 0,
    })
}

/// Outcome of a successful [`verify_isomorphism`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismReport {
    pub max_len: usize,
    pub checks: Vec<CheckResult>,
    /// `|W(source, L)|` and `|W(target, L)|`.
    pub word_counts: (u128, u128),
    /// Number of points of period dividing `p`, on both sides, for `p ≤ L`.
    pub periodic_counts: Vec<(u128, u128)>,
}

/// Operations carried by both sides of a conjugacy.
#[derive(Debug, Clone, Copy)]
pub struct OperationPair<'a> {
    pub source: &'a BlockOperationRule,
    pub target: &'a BlockOperationRule,
}

fn failure(check: &str, alphabet: &Alphabet, witness: &[Symbol], detail: String) -> VerifyError {
    VerifyError::VerificationFailed {
        check: check.to_string(),
        witness: alphabet.word_names(witness),
        detail,
    }
}

/// Depth-first search over allowed words of `shift` up to `max_len`,
/// calling `visit` at every node. A node where `visit` reports a failure is
/// pruned; the failure at the shortest, then lexicographically least, word
/// is returned.
fn search_words(
    shift: &MarkovShift,
    max_len: usize,
    mut visit: impl FnMut(&[Symbol]) -> Option<String>,
) -> Option<(Word, String)> {
    let mut best: Option<(Word, String)> = None;
    let mut word = Vec::with_capacity(max_len);
    fn go(
        shift: &MarkovShift,
        limit: &mut usize,
        word: &mut Word,
        visit: &mut dyn FnMut(&[Symbol]) -> Option<String>,
        best: &mut Option<(Word, String)>,
    ) {
        if let Some(detail) = visit(word) {
            *limit = word.len() - 1;
            *best = Some((word.clone(), detail));
            return;
        }
        if word.len() >= *limit {
            return;
        }
        let candidates: Vec<Symbol> = match word.last() {
            Some(&a) => shift.followers(a).iter().copied().collect(),
            None => shift.alphabet().symbols().collect(),
        };
        for b in candidates {
            word.push(b);
            go(shift, limit, word, visit, best);
            word.pop();
            if word.len() >= *limit {
                return;
            }
        }
    }
    let mut limit = max_len;
    for a in shift.alphabet().symbols() {
        word.push(a);
        go(shift, &mut limit, &mut word, &mut visit, &mut best);
        word.pop();
        if limit == 0 {
            break;
        }
    }
    best
}

/// Checks `code` against the conjugacy properties on bounded words.
///
/// On every allowed source word of length at most `max_len`: the rule is
/// defined, the image is allowed, and `inverse ∘ forward` is the identity
/// when an inverse is given. With an inverse, the same holds in the other
/// direction, which gives surjectivity and injectivity; without one,
/// surjectivity is checked by counting images of each length and
/// injectivity on periodic points. Periodic point counts must agree for
/// every period up to `max_len`. When operations are given, the code must
/// intertwine them on every pair of windows that determines an output.
///
/// Failures carry the shortest, then lexicographically least, witness.
pub fn verify_isomorphism(
    forward: &BlockCode,
    inverse: Option<&BlockCode>,
    source: &MarkovShift,
    target: &MarkovShift,
    ops: Option<OperationPair<'_>>,
    max_len: usize,
) -> Result<IsomorphismReport, VerifyError> {
    if max_len == 0 {
        return Err(VerifyError::ZeroLength);
    }
    if forward.source() != source.alphabet() || forward.target() != target.alphabet() {
        return Err(VerifyError::AlphabetMismatch);
    }
    if let Some(inv) = inverse {
        if inv.source() != target.alphabet() || inv.target() != source.alphabet() {
            return Err(VerifyError::AlphabetMismatch);
        }
    }
    let mut checks = Vec::new();

    one_direction(forward, inverse, source, target, max_len, "forward")?;
    checks.push(CheckResult::pass("forward image is allowed and well defined"));
    if let Some(inv) = inverse {
        checks.push(CheckResult::pass("inverse ∘ forward = id"));
        one_direction(inv, Some(forward), target, source, max_len, "inverse")?;
        checks.push(CheckResult::pass("forward ∘ inverse = id"));
    } else {
        surjectivity(forward, source, target, max_len)?;
        checks.push(CheckResult::pass("forward is onto words of each length"));
        periodic_injectivity(forward, source, max_len)?;
        checks.push(CheckResult::pass("forward is injective on periodic points"));
    }

    let periodic_counts: Vec<(u128, u128)> = (1..=max_len)
        .map(|p| (source.periodic_point_count(p), target.periodic_point_count(p)))
        .collect();
    if let Some(p) = periodic_counts.iter().position(|(a, b)| a != b) {
        return Err(VerifyError::VerificationFailed {
            check: "periodic point counts agree".into(),
            witness: Vec::new(),
            detail: format!(
                "period {}: {} source points, {} target points",
                p + 1,
                periodic_counts[p].0,
                periodic_counts[p].1
            ),
        });
    }
    checks.push(CheckResult::pass("periodic point counts agree"));

    if let Some(pair) = ops {
        homomorphism(forward, source, pair)?;
        checks.push(CheckResult::pass("forward intertwines the operations"));
    }
    Ok(IsomorphismReport {
        max_len,
        checks,
        word_counts: (source.word_counts(max_len)[max_len - 1], target.word_counts(max_len)[max_len - 1]),
        periodic_counts,
    })
}

fn one_direction(
    code: &BlockCode,
    back: Option<&BlockCode>,
    source: &MarkovShift,
    target: &MarkovShift,
    max_len: usize,
    label: &str,
) -> Result<(), VerifyError> {
    let wf = code.width();
    let mut outputs: Vec<Symbol> = Vec::with_capacity(max_len);
    let found = search_words(source, max_len, |word| {
        let m = word.len();
        outputs.truncate(m.saturating_sub(wf));
        if m < wf {
            return None;
        }
        let Some(y) = code.get(&word[m - wf..]) else {
            return Some(format!("{label} rule is undefined"));
        };
        outputs.push(y);
        let j = outputs.len() - 1;
        if j >= 1 && !target.allows(outputs[j - 1], y) {
            return Some(format!("{label} image is not allowed"));
        }
        if let Some(back) = back {
            let wi = back.width();
            if outputs.len() >= wi {
                let window = &outputs[outputs.len() - wi..];
                let expected = word[code.memory() + j - back.anticipation()];
                match back.get(window) {
                    None => return Some(format!("{label} image leaves the domain of the reverse code")),
                    Some(x) if x != expected => {
                        return Some(format!("reverse code does not undo the {label} code"));
                    }
                    _ => {}
                }
            }
        }
        None
    });
    match found {
        None => Ok(()),
        Some((word, detail)) => {
            let check = if back.is_some() {
                format!("{label} code is invertible")
            } else {
                format!("{label} code is well defined")
            };
            Err(failure(&check, source.alphabet(), &word, detail))
        }
    }
}

fn surjectivity(code: &BlockCode, source: &MarkovShift, target: &MarkovShift, max_len: usize) -> Result<(), VerifyError> {
    let wf = code.width();
    let base = target.order() as u128;
    let counts = target.word_counts(max_len);
    for m in 1..=max_len {
        let mut images: HashSet<u128> = HashSet::new();
        for w in source.enumerate_words(m + wf - 1).expect("non-empty") {
            let y = code.apply(&w).expect("checked to be total");
            images.insert(y.iter().fold(0, |acc, &s| acc * base + s as u128));
        }
        if (images.len() as u128) < counts[m - 1] {
            let missing = target
                .enumerate_words(m)
                .expect("non-empty")
                .into_iter()
                .find(|w| !images.contains(&w.iter().fold(0, |acc, &s| acc * base + s as u128)))
                .expect("a word is missing");
            return Err(failure(
                "forward is onto words of each length",
                target.alphabet(),
                &missing,
                "target word has no preimage".into(),
            ));
        }
    }
    Ok(())
}

fn periodic_injectivity(code: &BlockCode, source: &MarkovShift, max_len: usize) -> Result<(), VerifyError> {
    let w = code.width();
    for p in 1..=max_len {
        let mut images: BTreeMap<Word, Word> = BTreeMap::new();
        for x in source.periodic_words(p) {
            let y: Word = (0..p)
                .map(|i| {
                    let window: Word = (0..w).map(|k| x[(i + p * w + k - code.memory()) % p]).collect();
                    code.get(&window).expect("checked to be total")
                })
                .collect();
            if let Some(other) = images.insert(y, x.clone()) {
                return Err(VerifyError::VerificationFailed {
                    check: "forward is injective on periodic points".into(),
                    witness: source.alphabet().word_names(&x),
                    detail: format!(
                        "({})^∞ and ({})^∞ have the same image",
                        source.alphabet().word_name(&other),
                        source.alphabet().word_name(&x)
                    ),
                });
            }
        }
    }
    Ok(())
}

fn homomorphism(code: &BlockCode, source: &MarkovShift, ops: OperationPair<'_>) -> Result<(), VerifyError> {
    let (s_op, t_op) = (ops.source, ops.target);
    let span = |w: usize| w - 1;
    let n = span(s_op.width()) + span(code.width()) + span(t_op.width()) + 1;
    let words = source.enumerate_words(n).expect("non-empty");
    // output position of each side, measured in source coordinates
    let lhs_start = s_op.memory() + code.memory();
    let rhs_start = code.memory() + t_op.memory();
    let lo = lhs_start.max(rhs_start);
    let hi_l = n - s_op.anticipation() - code.anticipation();
    let hi_r = n - code.anticipation() - t_op.anticipation();
    let hi = hi_l.min(hi_r);
    let alphabet = source.alphabet();
    for x in &words {
        for y in &words {
            let detail = || format!("with y = {}", alphabet.word_name(y));
            let Some(xy) = s_op.apply(x, y) else {
                return Err(failure(
                    "source operation is defined",
                    alphabet,
                    x,
                    detail(),
                ));
            };
            let lhs = code.apply(&xy).map_err(|_| {
                failure("forward code is defined on products", alphabet, x, detail())
            })?;
            let fx = code.apply(x).expect("source words are in the domain");
            let fy = code.apply(y).expect("source words are in the domain");
            let Some(rhs) = t_op.apply(&fx, &fy) else {
                return Err(failure("target operation is defined on images", alphabet, x, detail()));
            };
            for pos in lo..hi {
                if lhs[pos - lhs_start] != rhs[pos - rhs_start] {
                    return Err(failure(
                        "forward intertwines the operations",
                        alphabet,
                        x,
                        format!("{} at position {pos}", detail()),
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasigroup::FiniteQuasigroup;

    fn z4_coset() -> QuasigroupShift {
        let a = Alphabet::numeric(4);
        let shift = MarkovShift::from_fn(a.clone(), |x, y| (y + 4 - x) % 2 == 0).unwrap();
        let op = FiniteQuasigroup::from_fn(a, |x, y| (x + y) % 4).unwrap();
        QuasigroupShift::build(shift, op, 0).unwrap()
    }

    fn full2() -> QuasigroupShift {
        let a = Alphabet::numeric(2);
        QuasigroupShift::build(MarkovShift::full(a.clone()), FiniteQuasigroup::from_fn(a, |x, y| x ^ y).unwrap(), 0)
            .unwrap()
    }

    fn rotation3() -> QuasigroupShift {
        let a = Alphabet::numeric(3);
        let shift = MarkovShift::from_fn(a.clone(), |x, y| y == (x + 1) % 3).unwrap();
        let op = FiniteQuasigroup::from_fn(a, |x, y| (6 - x - y) % 3).unwrap();
        QuasigroupShift::build(shift, op, 0).unwrap()
    }

    fn verify(d: &Decomposition, qs: &QuasigroupShift, len: usize) -> IsomorphismReport {
        let source_op = BlockOperationRule::from_quasigroup(qs.op());
        verify_isomorphism(
            &d.forward,
            Some(&d.inverse),
            qs.shift(),
            &d.target,
            Some(OperationPair {
                source: &source_op,
                target: &d.product_operation,
            }),
            len,
        )
        .unwrap()
    }

    #[test]
    fn z4_coset_decomposes_into_two_points_times_two_shift() {
        let qs = z4_coset();
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        assert_eq!((d.factor_size(), d.full_shift_exponent), (2, 2));
        assert_eq!(d.trace, vec![Step::Phi { h_size: 2, before: 4, after: 2 }]);
        assert_eq!(d.orbits, vec![vec![0], vec![1]]);
        assert_eq!(d.finite_factor.op().rows(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!((d.forward.width(), d.inverse.width()), (1, 1));
        let report = verify(&d, &qs, 8);
        assert_eq!(report.word_counts, (4 * 2u128.pow(7), 4 * 2u128.pow(7)));
        assert!(entropy_checks(&d, &qs).iter().all(|c| c.passed));
    }

    #[test]
    fn full_shift_has_a_single_point_factor() {
        let qs = full2();
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        assert_eq!((d.factor_size(), d.full_shift_exponent), (1, 2));
        verify(&d, &qs, 8);
        let bound = block_bound_check(&d, &qs).unwrap();
        assert_eq!((bound.bound, bound.width), (2, 1));
        assert!(bound.passed);
    }

    #[test]
    fn zero_entropy_shift_is_its_own_factor() {
        let qs = rotation3();
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        assert_eq!((d.factor_size(), d.full_shift_exponent), (3, 1));
        assert!(d.trace.is_empty());
        assert_eq!(d.orbits, vec![vec![0, 1, 2]]);
        assert_eq!(d.target.alphabet().names(), &["(0)", "(1)", "(2)"]);
        verify(&d, &qs, 8);
        assert!(entropy_checks(&d, &qs).iter().all(|c| c.passed));
        assert_eq!(block_bound_check(&d, &qs).unwrap().width, 1);
    }

    #[test]
    fn two_block_presentation_needs_a_theta_step() {
        let (qs, _) = full2().higher_block(2).unwrap();
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        assert_eq!(d.theta_steps(), 1);
        assert_eq!(d.full_shift_exponent, 2);
        assert_eq!(d.inverse.memory(), 1);
        verify(&d, &qs, 8);
        assert!(block_bound_check(&d, &qs).unwrap().passed);
    }

    /// Words over Z2³ with `a → b` iff `b₁ = a₂`, coordinatewise addition.
    fn shifted_cube() -> QuasigroupShift {
        let a = Alphabet::numeric(8);
        let bit = |s: usize, i: usize| (s >> (2 - i)) & 1;
        let shift = MarkovShift::from_fn(a.clone(), |x, y| bit(y, 0) == bit(x, 1)).unwrap();
        let op = FiniteQuasigroup::from_fn(a, |x, y| x ^ y).unwrap();
        QuasigroupShift::build(shift, op, 0).unwrap()
    }

    #[test]
    fn exponent_four_bound() {
        let qs = shifted_cube();
        assert_eq!(qs.h().len(), 2);
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        assert_eq!(d.full_shift_exponent, 4);
        assert_eq!(d.theta_steps(), 1);
        verify(&d, &qs, 6);
        let bound = block_bound_check(&d, &qs).unwrap();
        assert_eq!(bound.factorization, vec![(2, 2)]);
        assert_eq!(bound.bound, 3);
        assert!(bound.passed, "{bound:?}");
    }

    #[test]
    fn sections_do_not_change_the_outcome() {
        let qs = z4_coset();
        let a = kitchens_decompose(&qs, &SectionPolicy::Min);
        let b = kitchens_decompose(&qs, &SectionPolicy::Max);
        assert_eq!(a.full_shift_exponent, b.full_shift_exponent);
        assert_eq!(a.finite_factor.op().rows(), b.finite_factor.op().rows());
        verify(&b, &qs, 6);
    }

    #[test]
    fn reducible_shift_has_no_bound_check() {
        let qs = z4_coset();
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        assert_eq!(block_bound_check(&d, &qs).unwrap_err(), DecomposeError::NotIrreducible);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(7), vec![(7, 1)]);
    }

    #[test]
    fn identity_code_verifies() {
        let qs = z4_coset();
        let id = BlockCode::identity(qs.alphabet().clone());
        verify_isomorphism(&id, Some(&id), qs.shift(), qs.shift(), None, 8).unwrap();
        verify_isomorphism(&id, None, qs.shift(), qs.shift(), None, 6).unwrap();
    }

    #[test]
    fn corrupted_code_has_a_minimal_witness() {
        let qs = z4_coset();
        let d = kitchens_decompose(&qs, &SectionPolicy::Min);
        let mut rule = d.forward.rule().clone();
        let (r0, r1) = (rule[&vec![0]], rule[&vec![1]]);
        rule.insert(vec![0], r1);
        rule.insert(vec![1], r0);
        let bad = BlockCode::new(d.forward.source().clone(), d.forward.target().clone(), 0, 0, rule).unwrap();
        let err = verify_isomorphism(&bad, None, qs.shift(), &d.target, None, 8).unwrap_err();
        let VerifyError::VerificationFailed { witness, .. } = err else { panic!() };
        assert_eq!(witness, ["0", "2"]);
        let err = verify_isomorphism(&bad, Some(&d.inverse), qs.shift(), &d.target, None, 8).unwrap_err();
        let VerifyError::VerificationFailed { witness, .. } = err else { panic!() };
        assert_eq!(witness, ["0"]);
    }
}
