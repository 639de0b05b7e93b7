//! Shifts of finite type: Markov shifts given by 0/1 transition matrices and
//! shifts given by finite lists of forbidden words.
//!
//! Shift spaces are handled through their languages only. Bi-infinite points
//! are never materialized; periodic points appear as cyclic words.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError, Symbol, SymbolSet, Word};
use crate::code::BlockCode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("transition matrix must be {expected}x{expected}")]
    Shape { expected: usize },
    #[error("symbol `{0}` has no follower or no predecessor")]
    NotEssential(String),
    #[error("the shift is empty")]
    EmptyShift,
    #[error("word length must be at least 1")]
    ZeroLength,
    #[error("word {0} is not allowed")]
    WordNotAllowed(String),
    #[error("forbidden words must have length at least 2")]
    ForbiddenWordTooShort,
    #[error("block length {k} is below the step length {needed}")]
    BlockLengthTooShort { k: usize, needed: usize },
}

/// Operations shared by every presentation of a shift space.
pub trait ShiftSpace {
    fn alphabet(&self) -> &Alphabet;

    /// Whether `word` occurs in some point of the shift. The empty word is
    /// allowed.
    fn is_allowed(&self, word: &[Symbol]) -> bool;

    /// All allowed words of length `n` in lexicographic order.
    fn enumerate_words(&self, n: usize) -> Result<Vec<Word>, ShiftError> {
        if n == 0 {
            return Err(ShiftError::ZeroLength);
        }
        let symbols: Vec<Symbol> = self.alphabet().symbols().collect();
        let mut out = Vec::new();
        let mut stack: Vec<Word> = vec![Vec::new()];
        // depth-first in reverse so that pops come out lexicographically
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                out.push(prefix);
                continue;
            }
            for &s in symbols.iter().rev() {
                let mut next = prefix.clone();
                next.push(s);
                if self.is_allowed(&next) {
                    stack.push(next);
                }
            }
        }
        if out.is_empty() {
            return Err(ShiftError::EmptyShift);
        }
        Ok(out)
    }

    fn follower_set(&self, u: &[Symbol]) -> Result<SymbolSet, ShiftError> {
        if !self.is_allowed(u) {
            return Err(ShiftError::WordNotAllowed(self.alphabet().word_name(u)));
        }
        let mut w = u.to_vec();
        w.push(0);
        Ok(self
            .alphabet()
            .symbols()
            .filter(|&b| {
                *w.last_mut().unwrap() = b;
                self.is_allowed(&w)
            })
            .collect())
    }

    fn predecessor_set(&self, u: &[Symbol]) -> Result<SymbolSet, ShiftError> {
        if !self.is_allowed(u) {
            return Err(ShiftError::WordNotAllowed(self.alphabet().word_name(u)));
        }
        let mut w = Vec::with_capacity(u.len() + 1);
        w.push(0);
        w.extend_from_slice(u);
        Ok(self
            .alphabet()
            .symbols()
            .filter(|&b| {
                w[0] = b;
                self.is_allowed(&w)
            })
            .collect())
    }

    /// Smallest `N` such that the follower set of every allowed word depends
    /// only on its last `N + 1` symbols.
    fn sft_step(&self) -> usize;
}

/// A two-sided Markov shift: the bi-infinite paths of a 0/1 transition
/// matrix with no null row and no null column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkovShift {
    alphabet: Alphabet,
    matrix: Vec<bool>,
    followers: Vec<SymbolSet>,
    predecessors: Vec<SymbolSet>,
}

/// Result of pruning a transition matrix down to its essential part.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub shift: MarkovShift,
    /// Names of the removed symbols, in canonical order.
    pub removed: Vec<String>,
}

impl MarkovShift {
    /// `matrix[a][b]` is true when `b` may follow `a` (canonical indices).
    /// Fails if some symbol has no follower or no predecessor.
    pub fn new(alphabet: Alphabet, matrix: Vec<Vec<bool>>) -> Result<Self, ShiftError> {
        let n = alphabet.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(ShiftError::Shape { expected: n });
        }
        let flat: Vec<bool> = matrix.into_iter().flatten().collect();
        let followers: Vec<SymbolSet> = (0..n).map(|a| (0..n).filter(|&b| flat[a * n + b]).collect()).collect();
        let predecessors: Vec<SymbolSet> = (0..n).map(|b| (0..n).filter(|&a| flat[a * n + b]).collect()).collect();
        for s in 0..n {
            if followers[s].is_empty() || predecessors[s].is_empty() {
                return Err(ShiftError::NotEssential(alphabet.name(s).to_string()));
            }
        }
        Ok(MarkovShift {
            alphabet,
            matrix: flat,
            followers,
            predecessors,
        })
    }

    pub fn from_fn(alphabet: Alphabet, allowed: impl Fn(Symbol, Symbol) -> bool) -> Result<Self, ShiftError> {
        let n = alphabet.len();
        let matrix = (0..n).map(|a| (0..n).map(|b| allowed(a, b)).collect()).collect();
        Self::new(alphabet, matrix)
    }

    /// Names in arbitrary order, `matrix` rows/columns in that same order.
    /// Fails if pruning would remove a symbol.
    pub fn from_names<S: AsRef<str>>(names: &[S], matrix: &[Vec<bool>]) -> Result<Self, ShiftError> {
        let pruned = Self::pruned(names, matrix)?;
        match pruned.removed.into_iter().next() {
            Some(name) => Err(ShiftError::NotEssential(name)),
            None => Ok(pruned.shift),
        }
    }

    /// Repeatedly removes symbols with no follower or no predecessor. The
    /// removed symbols are reported in [`Pruned::removed`].
    pub fn pruned<S: AsRef<str>>(names: &[S], matrix: &[Vec<bool>]) -> Result<Pruned, ShiftError> {
        let n = names.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(ShiftError::Shape { expected: n });
        }
        let (alphabet, positions) = Alphabet::with_positions(names)?;
        let mut canonical = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                canonical[positions[i]][positions[j]] = matrix[i][j];
            }
        }
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for s in 0..n {
                if !alive[s] {
                    continue;
                }
                let has_follower = (0..n).any(|t| alive[t] && canonical[s][t]);
                let has_predecessor = (0..n).any(|t| alive[t] && canonical[t][s]);
                if !has_follower || !has_predecessor {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<Symbol> = (0..n).filter(|&s| alive[s]).collect();
        if kept.is_empty() {
            return Err(ShiftError::EmptyShift);
        }
        let removed = (0..n).filter(|&s| !alive[s]).map(|s| alphabet.name(s).to_string()).collect();
        let sub = Alphabet::new(kept.iter().map(|&s| alphabet.name(s).to_string()))?;
        let sub_matrix = kept
            .iter()
            .map(|&a| kept.iter().map(|&b| canonical[a][b]).collect())
            .collect();
        Ok(Pruned {
            shift: MarkovShift::new(sub, sub_matrix)?,
            removed,
        })
    }

    pub fn full(alphabet: Alphabet) -> Self {
        Self::from_fn(alphabet, |_, _| true).expect("full shift is essential")
    }

    pub fn order(&self) -> usize {
        self.alphabet.len()
    }

    #[inline]
    pub fn allows(&self, a: Symbol, b: Symbol) -> bool {
        self.matrix[a * self.order() + b]
    }

    pub fn followers(&self, a: Symbol) -> &SymbolSet {
        &self.followers[a]
    }

    pub fn predecessors(&self, a: Symbol) -> &SymbolSet {
        &self.predecessors[a]
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        self.matrix.chunks(self.order()).map(<[bool]>::to_vec).collect()
    }

    pub fn matrix_01(&self) -> Vec<Vec<u8>> {
        self.matrix
            .chunks(self.order())
            .map(|r| r.iter().map(|&b| u8::from(b)).collect())
            .collect()
    }

    pub fn transition_count(&self) -> usize {
        self.matrix.iter().filter(|&&b| b).count()
    }

    /// Number of allowed words of each length `1..=max_len`, by matrix powers.
    pub fn word_counts(&self, max_len: usize) -> Vec<u128> {
        let n = self.order();
        let mut ending = vec![1u128; n];
        let mut counts = Vec::with_capacity(max_len);
        for len in 1..=max_len {
            if len > 1 {
                let mut next = vec![0u128; n];
                for a in 0..n {
                    for &b in &self.followers[a] {
                        next[b] += ending[a];
                    }
                }
                ending = next;
            }
            counts.push(ending.iter().sum());
        }
        counts
    }

    /// Number of points of period dividing `p` (the trace of `A^p`).
    pub fn periodic_point_count(&self, p: usize) -> u128 {
        let n = self.order();
        let mut total = 0u128;
        for start in 0..n {
            let mut reach = vec![0u128; n];
            reach[start] = 1;
            for _ in 0..p {
                let mut next = vec![0u128; n];
                for a in 0..n {
                    if reach[a] > 0 {
                        for &b in &self.followers[a] {
                            next[b] += reach[a];
                        }
                    }
                }
                reach = next;
            }
            total += reach[start];
        }
        total
    }

    /// All cyclic words of length `p` whose consecutive pairs, including the
    /// wrap-around pair, are transitions. These are the points of period
    /// dividing `p`, each written from coordinate 0.
    pub fn periodic_words(&self, p: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(p);
        for start in self.alphabet.symbols() {
            word.clear();
            word.push(start);
            self.extend_cycles(p, &mut word, &mut out);
        }
        out
    }

    fn extend_cycles(&self, p: usize, word: &mut Word, out: &mut Vec<Word>) {
        if word.len() == p {
            if self.allows(*word.last().unwrap(), word[0]) {
                out.push(word.clone());
            }
            return;
        }
        let last = *word.last().unwrap();
        for &b in &self.followers[last] {
            word.push(b);
            self.extend_cycles(p, word, out);
            word.pop();
        }
    }

    /// Iterated follower sets `F^0(a) = F(a)`, `F^{k+1}(a) = ∪_{h ∈ F^k(a)} F(h)`.
    pub fn iterated_followers(&self, a: Symbol, k: usize) -> SymbolSet {
        let mut current = self.followers[a].clone();
        for _ in 0..k {
            current = current.iter().flat_map(|&h| self.followers[h].iter().copied()).collect();
        }
        current
    }

    /// True iff every symbol reaches the whole alphabet through the union of
    /// its iterated follower sets, i.e. the transition graph is strongly
    /// connected.
    pub fn is_irreducible(&self) -> bool {
        let n = self.order();
        self.alphabet.symbols().all(|a| {
            let mut reached = self.followers[a].clone();
            let mut frontier = reached.clone();
            for _ in 0..n {
                let next: SymbolSet = frontier
                    .iter()
                    .flat_map(|&h| self.followers[h].iter().copied())
                    .filter(|s| !reached.contains(s))
                    .collect();
                if next.is_empty() {
                    break;
                }
                reached.extend(next.iter().copied());
                frontier = next;
            }
            reached.len() == n
        })
    }

    /// Some `a` and `k` with `F^k(a)` equal to the alphabet (the transition
    /// matrix is primitive on the component of `a`).
    pub fn mixing_witness(&self) -> Option<(Symbol, usize)> {
        let n = self.order();
        let bound = n * n;
        self.alphabet.symbols().find_map(|a| {
            let mut current = self.followers[a].clone();
            for k in 0..=bound {
                if current.len() == n {
                    return Some((a, k));
                }
                current = current.iter().flat_map(|&h| self.followers[h].iter().copied()).collect();
            }
            None
        })
    }

    /// Topological entropy in nats: the log of the Perron eigenvalue of the
    /// transition matrix.
    pub fn entropy(&self) -> f64 {
        self.perron_eigenvalue().ln()
    }

    /// Perron eigenvalue by power iteration on `A + I`.
    ///
    /// For a positive vector `x`, `min_i (Mx)_i/x_i ≤ ρ(M) ≤ max_i (Mx)_i/x_i`;
    /// iteration stops once this bracket has relative width below `1e-10` or
    /// after `100_000` steps. The shift by `I` makes periodic components
    /// converge.
    pub fn perron_eigenvalue(&self) -> f64 {
        const TOLERANCE: f64 = 1e-10;
        const MAX_ITERATIONS: usize = 100_000;
        let n = self.order();
        let mut x = vec![1.0f64; n];
        let mut estimate = 0.0;
        for _ in 0..MAX_ITERATIONS {
            let y: Vec<f64> = (0..n)
                .map(|a| x[a] + self.followers[a].iter().map(|&b| x[b]).sum::<f64>())
                .collect();
            let ratios = y.iter().zip(&x).map(|(yi, xi)| yi / xi);
            let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
            estimate = 0.5 * (lo + hi);
            if hi - lo <= TOLERANCE * estimate {
                break;
            }
            let norm = y.iter().cloned().fold(0.0, f64::max);
            x = y.into_iter().map(|v| v / norm).collect();
        }
        estimate - 1.0
    }

    /// `Some(k)` when every symbol has exactly `k` followers; the entropy is
    /// then exactly `log k`.
    pub fn exact_entropy_symbolic(&self) -> Option<usize> {
        let k = self.followers[0].len();
        self.followers.iter().all(|f| f.len() == k).then_some(k)
    }

    /// Transition digraph in DOT format, nodes in canonical order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{}\" {{\n", name.replace('"', "\\\""));
        for s in self.alphabet.symbols() {
            out.push_str(&format!("  \"{}\";\n", escape(self.alphabet.name(s))));
        }
        for a in self.alphabet.symbols() {
            for &b in &self.followers[a] {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    escape(self.alphabet.name(a)),
                    escape(self.alphabet.name(b))
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl ShiftSpace for MarkovShift {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_allowed(&self, word: &[Symbol]) -> bool {
        word.iter().all(|&s| s < self.order()) && word.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    fn follower_set(&self, u: &[Symbol]) -> Result<SymbolSet, ShiftError> {
        match u.last() {
            Some(&a) if self.is_allowed(u) => Ok(self.followers[a].clone()),
            None => Ok(self.alphabet.symbols().collect()),
            _ => Err(ShiftError::WordNotAllowed(self.alphabet.word_name(u))),
        }
    }

    fn predecessor_set(&self, u: &[Symbol]) -> Result<SymbolSet, ShiftError> {
        match u.first() {
            Some(&a) if self.is_allowed(u) => Ok(self.predecessors[a].clone()),
            None => Ok(self.alphabet.symbols().collect()),
            _ => Err(ShiftError::WordNotAllowed(self.alphabet.word_name(u))),
        }
    }

    fn sft_step(&self) -> usize {
        0
    }
}

/// A shift of finite type given by forbidden words.
///
/// Internally the shift is presented as a Markov shift on its allowed
/// `K`-words, `K = max(longest forbidden word - 1, 1)`, after pruning
/// non-extendable words.
#[derive(Debug, Clone)]
pub struct SftPresentation {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
    block_len: usize,
    blocks: Vec<Word>,
    block_index: HashMap<Word, usize>,
    graph: Vec<SymbolSet>,
    short_words: HashSet<Word>,
}

impl SftPresentation {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self, ShiftError> {
        if forbidden.iter().any(|w| w.len() < 2) {
            return Err(ShiftError::ForbiddenWordTooShort);
        }
        let n = alphabet.len();
        let block_len = forbidden.iter().map(|w| w.len() - 1).max().unwrap_or(1).max(1);
        let forbidden_set: HashSet<&[Symbol]> = forbidden.iter().map(Vec::as_slice).collect();
        let avoids = |w: &[Symbol]| {
            (0..w.len()).all(|i| (i + 2..=w.len()).all(|j| !forbidden_set.contains(&w[i..j])))
        };
        let mut candidates: Vec<Word> = vec![Vec::new()];
        for _ in 0..block_len {
            candidates = candidates
                .into_iter()
                .flat_map(|w| {
                    (0..n).map(move |s| {
                        let mut next = w.clone();
                        next.push(s);
                        next
                    })
                })
                .filter(|w| avoids(w))
                .collect();
        }
        let m = candidates.len();
        let index: HashMap<Word, usize> =
            candidates.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges: Vec<SymbolSet> = vec![SymbolSet::new(); m];
        for (i, u) in candidates.iter().enumerate() {
            for s in 0..n {
                let mut long = u.clone();
                long.push(s);
                if !avoids(&long) {
                    continue;
                }
                if let Some(&j) = index.get(&long[1..]) {
                    edges[i].insert(j);
                }
            }
        }
        // prune vertices without successors or predecessors
        let mut alive = vec![true; m];
        loop {
            let mut changed = false;
            for v in 0..m {
                if !alive[v] {
                    continue;
                }
                let out = edges[v].iter().any(|&w| alive[w]);
                let inn = (0..m).any(|w| alive[w] && edges[w].contains(&v));
                if !out || !inn {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let kept: Vec<usize> = (0..m).filter(|&v| alive[v]).collect();
        if kept.is_empty() {
            return Err(ShiftError::EmptyShift);
        }
        let renumber: HashMap<usize, usize> =
            kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let blocks: Vec<Word> = kept.iter().map(|&v| candidates[v].clone()).collect();
        let graph: Vec<SymbolSet> = kept
            .iter()
            .map(|&v| edges[v].iter().filter_map(|w| renumber.get(w).copied()).collect())
            .collect();
        let block_index = blocks.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut short_words = HashSet::new();
        for b in &blocks {
            for i in 0..b.len() {
                for j in i + 1..=b.len() {
                    short_words.insert(b[i..j].to_vec());
                }
            }
        }
        Ok(SftPresentation {
            alphabet,
            forbidden,
            block_len,
            blocks,
            block_index,
            graph,
            short_words,
        })
    }

    pub fn from_names<S: AsRef<str>, T: AsRef<str>>(alphabet: &[S], forbidden: &[Vec<T>]) -> Result<Self, ShiftError> {
        let alphabet = Alphabet::new(alphabet.iter().map(|s| s.as_ref().to_string()))?;
        let words = forbidden
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, words)
    }

    pub fn forbidden_words(&self) -> &[Word] {
        &self.forbidden
    }

    /// Block length of the internal Markov presentation.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Symbols that occur in some point of the shift.
    pub fn used_symbols(&self) -> SymbolSet {
        self.blocks.iter().flat_map(|b| b.iter().copied()).collect()
    }
}

impl From<&MarkovShift> for SftPresentation {
    fn from(shift: &MarkovShift) -> Self {
        let n = shift.order();
        let forbidden = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| !shift.allows(a, b))
            .map(|(a, b)| vec![a, b])
            .collect();
        SftPresentation::new(shift.alphabet.clone(), forbidden).expect("an essential Markov shift is non-empty")
    }
}

impl ShiftSpace for SftPresentation {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn is_allowed(&self, word: &[Symbol]) -> bool {
        let k = self.block_len;
        if word.len() <= k {
            return word.is_empty() || self.short_words.contains(word);
        }
        let mut previous: Option<usize> = None;
        for window in word.windows(k) {
            let Some(&v) = self.block_index.get(window) else {
                return false;
            };
            if let Some(p) = previous {
                if !self.graph[p].contains(&v) {
                    return false;
                }
            }
            previous = Some(v);
        }
        true
    }

    fn sft_step(&self) -> usize {
        let k = self.block_len;
        'candidate: for step in 0..k {
            for len in step + 2..=k + 1 {
                let words = self.enumerate_words(len).expect("non-empty shift");
                for w in &words {
                    let full = self.follower_set(w).expect("enumerated word");
                    let tail = self.follower_set(&w[len - step - 1..]).expect("factor of an allowed word");
                    if full != tail {
                        continue 'candidate;
                    }
                }
            }
            return step;
        }
        k - 1
    }
}

/// The `k`-block presentation of a shift together with the conjugacies
/// between it and the original.
#[derive(Debug, Clone)]
pub struct HigherBlock {
    pub shift: MarkovShift,
    /// `k`-block code into the presentation: memory 0, anticipation `k - 1`.
    pub forward: BlockCode,
    /// 1-block code back: a `k`-word maps to its first symbol.
    pub inverse: BlockCode,
    /// `words[i]` is the `k`-word named by symbol `i` of the presentation.
    pub words: Vec<Word>,
}

/// Markov shift on the allowed `k`-words, `u → v` when `u` and `v` overlap
/// in `k - 1` symbols and the glued `(k+1)`-word is allowed.
pub fn higher_block_presentation<S: ShiftSpace + ?Sized>(shift: &S, k: usize) -> Result<HigherBlock, ShiftError> {
    if k == 0 {
        return Err(ShiftError::ZeroLength);
    }
    let needed = shift.sft_step() + 1;
    if k < needed {
        return Err(ShiftError::BlockLengthTooShort { k, needed });
    }
    let source = shift.alphabet();
    let words = shift.enumerate_words(k)?;
    let names: Vec<String> = words.iter().map(|w| source.word_name(w)).collect();
    let (alphabet, positions) = Alphabet::with_positions(&names)?;
    let mut ordered = vec![Vec::new(); words.len()];
    for (w, &p) in words.iter().zip(&positions) {
        ordered[p] = w.clone();
    }
    let glued_allowed = |u: &Word, v: &Word| {
        if u[1..] != v[..k - 1] {
            return false;
        }
        let mut glued = u.clone();
        glued.push(*v.last().unwrap());
        shift.is_allowed(&glued)
    };
    let presentation = MarkovShift::from_fn(alphabet.clone(), |a, b| glued_allowed(&ordered[a], &ordered[b]))?;
    let forward = BlockCode::new(
        source.clone(),
        alphabet.clone(),
        0,
        k - 1,
        ordered.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect(),
    )
    .expect("windows have the declared length");
    let inverse = BlockCode::new(
        alphabet,
        source.clone(),
        0,
        0,
        ordered.iter().enumerate().map(|(i, w)| (vec![i], w[0])).collect(),
    )
    .expect("1-block rule");
    Ok(HigherBlock {
        shift: presentation,
        forward,
        inverse,
        words: ordered,
    })
}
