//! Operations on shift spaces given by a local rule on pairs of windows, and
//! finite-window checks of their algebraic properties.

use std::collections::HashMap;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::check::CheckResult;
use crate::quasigroup::FiniteQuasigroup;
use crate::shift::{MarkovShift, ShiftError, ShiftSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockOpError {
    #[error("local rule is undefined on allowed window {0}")]
    RuleNotTotal(String),
    #[error("verification length {max_len} is shorter than the rule width {width}")]
    LengthTooShort { max_len: usize, width: usize },
    #[error("rule and shift use different alphabets")]
    AlphabetMismatch,
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

/// A shift-commuting operation `(x ⋆ y)_i = rule(x[i-ℓ..=i+r], y[i-ℓ..=i+r])`.
///
/// The rule is stored densely over an indexed list of windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOperationRule {
    alphabet: Alphabet,
    memory: usize,
    anticipation: usize,
    windows: Vec<Word>,
    index: HashMap<Word, usize>,
    table: Vec<Symbol>,
}

impl BlockOperationRule {
    /// Rule on all allowed windows of `shift`.
    pub fn from_fn<S: ShiftSpace + ?Sized>(
        shift: &S,
        memory: usize,
        anticipation: usize,
        f: impl Fn(&[Symbol], &[Symbol]) -> Symbol,
    ) -> Result<Self, BlockOpError> {
        let windows = shift.enumerate_words(memory + anticipation + 1)?;
        Ok(Self::from_windows(shift.alphabet().clone(), memory, anticipation, windows, f))
    }

    /// Rule on an explicit list of windows, each of length `memory + anticipation + 1`.
    pub fn from_windows(
        alphabet: Alphabet,
        memory: usize,
        anticipation: usize,
        windows: Vec<Word>,
        f: impl Fn(&[Symbol], &[Symbol]) -> Symbol,
    ) -> Self {
        let width = memory + anticipation + 1;
        assert!(windows.iter().all(|w| w.len() == width), "windows must have the rule width");
        let m = windows.len();
        let mut table = Vec::with_capacity(m * m);
        for u in &windows {
            for v in &windows {
                let out = f(u, v);
                assert!(out < alphabet.len(), "rule output outside the alphabet");
                table.push(out);
            }
        }
        let index = windows.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        BlockOperationRule {
            alphabet,
            memory,
            anticipation,
            windows,
            index,
            table,
        }
    }

    /// A 1-block operation.
    pub fn from_quasigroup(q: &FiniteQuasigroup) -> Self {
        let windows = q.alphabet().symbols().map(|s| vec![s]).collect();
        Self::from_windows(q.alphabet().clone(), 0, 0, windows, |u, v| q.op(u[0], v[0]))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    pub fn width(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn windows(&self) -> &[Word] {
        &self.windows
    }

    pub fn window_index(&self, w: &[Symbol]) -> Option<usize> {
        self.index.get(w).copied()
    }

    #[inline]
    pub fn by_index(&self, i: usize, j: usize) -> Symbol {
        self.table[i * self.windows.len() + j]
    }

    pub fn get(&self, x: &[Symbol], y: &[Symbol]) -> Option<Symbol> {
        Some(self.by_index(self.window_index(x)?, self.window_index(y)?))
    }

    /// Product of two words of equal length; the output has length
    /// `len - width + 1` and starts at input position `memory`.
    pub fn apply(&self, x: &[Symbol], y: &[Symbol]) -> Option<Word> {
        assert_eq!(x.len(), y.len(), "operands must have equal length");
        let w = self.width();
        if x.len() < w {
            return Some(Vec::new());
        }
        x.windows(w).zip(y.windows(w)).map(|(u, v)| self.get(u, v)).collect()
    }

    /// Product of two periodic points given by cyclic words of equal length.
    pub fn apply_cyclic(&self, x: &[Symbol], y: &[Symbol]) -> Option<Word> {
        let p = x.len();
        assert_eq!(p, y.len(), "operands must have equal period");
        let w = self.width();
        let mut u = Vec::with_capacity(w);
        let mut v = Vec::with_capacity(w);
        (0..p)
            .map(|i| {
                u.clear();
                v.clear();
                for k in 0..w {
                    let pos = (i + p * w + k - self.memory) % p;
                    u.push(x[pos]);
                    v.push(y[pos]);
                }
                self.get(&u, &v)
            })
            .collect()
    }

    /// Equivalent rule on the shortest sub-window that still determines the
    /// output and contains the output position.
    pub fn trimmed(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.width();
        while lo < self.memory && self.factors(lo + 1, hi) {
            lo += 1;
        }
        while hi > self.memory + 1 && self.factors(lo, hi - 1) {
            hi -= 1;
        }
        if (lo, hi) == (0, self.width()) {
            return self.clone();
        }
        let restricted = self.restriction(lo, hi);
        let mut windows: Vec<Word> = self.windows.iter().map(|w| w[lo..hi].to_vec()).collect();
        windows.sort();
        windows.dedup();
        Self::from_windows(
            self.alphabet.clone(),
            self.memory - lo,
            hi - 1 - self.memory,
            windows,
            |u, v| restricted[&(u.to_vec(), v.to_vec())],
        )
    }

    fn restriction(&self, lo: usize, hi: usize) -> HashMap<(Word, Word), Symbol> {
        let m = self.windows.len();
        let mut map = HashMap::new();
        for i in 0..m {
            for j in 0..m {
                let key = (self.windows[i][lo..hi].to_vec(), self.windows[j][lo..hi].to_vec());
                map.entry(key).or_insert(self.by_index(i, j));
            }
        }
        map
    }

    fn factors(&self, lo: usize, hi: usize) -> bool {
        let m = self.windows.len();
        let mut map: HashMap<(&[Symbol], &[Symbol]), Symbol> = HashMap::new();
        for i in 0..m {
            for j in 0..m {
                let key = (&self.windows[i][lo..hi], &self.windows[j][lo..hi]);
                let out = self.by_index(i, j);
                if *map.entry(key).or_insert(out) != out {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of [`check_block_operation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOperationReport {
    pub max_len: usize,
    pub checks: Vec<CheckResult>,
    pub note: String,
}

impl BlockOperationReport {
    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.passed)
    }
}

pub const CLOSED: &str = "closed";
pub const LEFT_CANCELLABLE: &str = "left cancellable";
pub const RIGHT_CANCELLABLE: &str = "right cancellable";
pub const COMMUTATIVE: &str = "commutative";
pub const PERIOD_2: &str = "period 2";
pub const MEDIAL: &str = "medial";
pub const NO_IDENTITY: &str = "no identity";

/// Largest number of operand tuples a single check enumerates.
const BUDGET: usize = 400_000_000;

/// Finite-window checks of a block operation on a Markov shift.
///
/// Closure, cancellability and the identity search run on all periodic
/// points of period at most `max_len`. An identity would be fixed by the
/// shift, so only fixed points are candidates. Commutativity, period 2 and
/// mediality are checked on every tuple of windows they depend on.
pub fn check_block_operation(
    shift: &MarkovShift,
    rule: &BlockOperationRule,
    max_len: usize,
) -> Result<BlockOperationReport, BlockOpError> {
    if shift.alphabet() != rule.alphabet() {
        return Err(BlockOpError::AlphabetMismatch);
    }
    let width = rule.width();
    if max_len < width {
        return Err(BlockOpError::LengthTooShort { max_len, width });
    }
    let alphabet = shift.alphabet();
    let span = width - 1;
    let allowed = shift.enumerate_words(width)?;
    if let Some(w) = allowed.iter().find(|w| rule.window_index(w).is_none()) {
        return Err(BlockOpError::RuleNotTotal(alphabet.word_name(w)));
    }
    let word = |w: &[Symbol]| alphabet.word_name(w);
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let (closed, left, right) = periodic_checks(shift, rule, max_len, &mut notes);
    checks.push(closed);
    checks.push(left);
    checks.push(right);

    let idx: Vec<usize> = allowed.iter().map(|w| rule.window_index(w).unwrap()).collect();
    let commutative = idx
        .iter()
        .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
        .find(|&(i, j)| rule.by_index(i, j) != rule.by_index(j, i))
        .map(|(i, j)| format!("x={}, y={}", word(&rule.windows()[i]), word(&rule.windows()[j])));
    checks.push(CheckResult::from_witness(COMMUTATIVE, commutative));

    // windows of width 2·span+1 carry both levels of a nested product
    let wide = shift.enumerate_words(2 * span + 1)?;
    let m = wide.len();
    let sub: Vec<Vec<usize>> = wide
        .iter()
        .map(|w| (0..=span).map(|j| rule.window_index(&w[j..j + width]).unwrap()).collect())
        .collect();
    let mut product = vec![None; m * m];
    let mut closure_witness = None;
    for a in 0..m {
        for b in 0..m {
            let inner: Word = (0..=span).map(|j| rule.by_index(sub[a][j], sub[b][j])).collect();
            product[a * m + b] = rule.window_index(&inner);
            if product[a * m + b].is_none() && closure_witness.is_none() {
                closure_witness = Some(format!(
                    "{} ⋆ {} = {} is not allowed",
                    word(&wide[a]),
                    word(&wide[b]),
                    word(&inner)
                ));
            }
        }
    }
    if let Some(w) = closure_witness {
        checks[0] = CheckResult::fail(CLOSED, w);
        checks.push(CheckResult::fail(PERIOD_2, "operation is not closed"));
        checks.push(CheckResult::fail(MEDIAL, "operation is not closed"));
    } else {
        let prod = |a: usize, b: usize| product[a * m + b].unwrap();
        let memory = rule.memory();
        let period2 = (0..m)
            .flat_map(|x| (0..m).map(move |y| (x, y)))
            .find(|&(x, y)| rule.by_index(sub[x][memory], prod(x, y)) != wide[y][2 * memory])
            .map(|(x, y)| format!("x={}, y={}", word(&wide[x]), word(&wide[y])));
        checks.push(CheckResult::from_witness(PERIOD_2, period2));

        if m.saturating_pow(4) > BUDGET {
            notes.push(format!("mediality skipped: {m}^4 window quadruples exceed the budget"));
            checks.push(CheckResult::fail(MEDIAL, "not checked: too many window quadruples"));
        } else {
            let mut medial = None;
            'search: for a in 0..m {
                for b in 0..m {
                    let ab = prod(a, b);
                    for c in 0..m {
                        let ac = prod(a, c);
                        for d in 0..m {
                            if rule.by_index(ab, prod(c, d)) != rule.by_index(ac, prod(b, d)) {
                                medial = Some(format!(
                                    "a={}, b={}, c={}, d={}",
                                    word(&wide[a]),
                                    word(&wide[b]),
                                    word(&wide[c]),
                                    word(&wide[d])
                                ));
                                break 'search;
                            }
                        }
                    }
                }
            }
            checks.push(CheckResult::from_witness(MEDIAL, medial));
        }
    }

    checks.push(identity_check(shift, rule, max_len));
    notes.push(format!(
        "passed up to length {max_len}; these are necessary conditions on finite windows and periodic points \
         and do not certify the quasigroup property on infinite sequences"
    ));
    Ok(BlockOperationReport {
        max_len,
        checks,
        note: notes.join("; "),
    })
}

/// Dense or hashed lookup from periodic words to their position.
struct PeriodicIndex {
    base: usize,
    dense: Option<Vec<u32>>,
    sparse: HashMap<u128, u32>,
}

impl PeriodicIndex {
    fn new(base: usize, points: &[Word]) -> Self {
        let p = points.first().map_or(0, Vec::len);
        let size = (base as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
        let mut index = PeriodicIndex {
            base,
            dense: (size <= 1 << 24).then(|| vec![u32::MAX; size as usize]),
            sparse: HashMap::new(),
        };
        for (i, w) in points.iter().enumerate() {
            let key = index.key(w);
            match &mut index.dense {
                Some(d) => d[key as usize] = i as u32,
                None => {
                    index.sparse.insert(key, i as u32);
                }
            }
        }
        index
    }

    fn key(&self, w: &[Symbol]) -> u128 {
        w.iter().fold(0u128, |acc, &s| acc * self.base as u128 + s as u128)
    }

    fn get(&self, w: &[Symbol]) -> Option<usize> {
        let key = self.key(w);
        let found = match &self.dense {
            Some(d) => d[key as usize],
            None => *self.sparse.get(&key)?,
        };
        (found != u32::MAX).then_some(found as usize)
    }
}

fn periodic_checks(
    shift: &MarkovShift,
    rule: &BlockOperationRule,
    max_len: usize,
    notes: &mut Vec<String>,
) -> (CheckResult, CheckResult, CheckResult) {
    let alphabet = shift.alphabet();
    let name = |w: &[Symbol]| format!("({})^∞", alphabet.word_name(w));
    let mut closed = None;
    let mut left = None;
    let mut right = None;
    for p in 1..=max_len {
        let points = shift.periodic_words(p);
        let count = points.len();
        if count.saturating_mul(count).saturating_mul(p) > BUDGET {
            notes.push(format!("periodic checks stop at period {}", p - 1));
            break;
        }
        let index = PeriodicIndex::new(alphabet.len(), &points);
        let windows: Vec<Vec<usize>> = points
            .iter()
            .map(|x| {
                (0..p)
                    .map(|i| {
                        let w: Word = (0..rule.width())
                            .map(|k| x[(i + p * rule.width() + k - rule.memory()) % p])
                            .collect();
                        rule.window_index(&w).expect("rule is total on allowed windows")
                    })
                    .collect()
            })
            .collect();
        let mut z = vec![0; p];
        let mut seen = vec![u32::MAX; count];
        let mut who = vec![0usize; count];
        // rows: x fixed (left cancellable); columns: y fixed (right cancellable)
        for pass in 0..2 {
            seen.iter_mut().for_each(|s| *s = u32::MAX);
            for outer in 0..count {
                for inner in 0..count {
                    let (x, y) = if pass == 0 { (outer, inner) } else { (inner, outer) };
                    for i in 0..p {
                        z[i] = rule.by_index(windows[x][i], windows[y][i]);
                    }
                    let Some(k) = index.get(&z) else {
                        if closed.is_none() {
                            closed = Some(format!("{} ⋆ {} = {} is not a point", name(&points[x]), name(&points[y]), name(&z)));
                        }
                        continue;
                    };
                    if seen[k] == outer as u32 {
                        let slot = if pass == 0 { &mut left } else { &mut right };
                        if slot.is_none() {
                            let (other, fixed) = (who[k], outer);
                            *slot = Some(if pass == 0 {
                                format!(
                                    "{} ⋆ {} = {} ⋆ {}",
                                    name(&points[fixed]),
                                    name(&points[other]),
                                    name(&points[fixed]),
                                    name(&points[inner])
                                )
                            } else {
                                format!(
                                    "{} ⋆ {} = {} ⋆ {}",
                                    name(&points[other]),
                                    name(&points[fixed]),
                                    name(&points[inner]),
                                    name(&points[fixed])
                                )
                            });
                        }
                    } else {
                        seen[k] = outer as u32;
                        who[k] = inner;
                    }
                }
            }
        }
        if closed.is_some() && left.is_some() && right.is_some() {
            break;
        }
    }
    (
        CheckResult::from_witness(CLOSED, closed),
        CheckResult::from_witness(LEFT_CANCELLABLE, left),
        CheckResult::from_witness(RIGHT_CANCELLABLE, right),
    )
}

fn identity_check(shift: &MarkovShift, rule: &BlockOperationRule, max_len: usize) -> CheckResult {
    let alphabet = shift.alphabet();
    let candidates: Vec<Symbol> = alphabet.symbols().filter(|&a| shift.allows(a, a)).collect();
    let mut unrefuted = Vec::new();
    'candidate: for &a in &candidates {
        for p in 1..=max_len {
            let u = vec![a; p];
            for y in shift.periodic_words(p) {
                if rule.apply_cyclic(&u, &y).as_ref() != Some(&y) || rule.apply_cyclic(&y, &u).as_ref() != Some(&y) {
                    continue 'candidate;
                }
            }
        }
        unrefuted.push(a);
    }
    match unrefuted.first() {
        None => CheckResult::pass(NO_IDENTITY),
        Some(&a) => CheckResult::fail(
            NO_IDENTITY,
            format!(
                "({})^∞ acts as an identity on all periodic points up to period {max_len}",
                alphabet.name(a)
            ),
        ),
    }
}
