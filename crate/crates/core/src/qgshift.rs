//! A Markov shift paired with a compatible 1-block quasigroup operation, and
//! the structures it induces on follower sets, predecessor sets and h-classes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, SymbolSet, Word};
use crate::check::CheckResult;
use crate::code::BlockCode;
use crate::quasigroup::{
    validate_latin_square, BaseElement, CosetPartition, FiniteQuasigroup, PartitionError, QuasigroupError,
};
use crate::shift::{higher_block_presentation, HigherBlock, MarkovShift, ShiftError, ShiftSpace, SftPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QgShiftError {
    #[error("shift alphabet {shift} differs from operation alphabet {op}")]
    AlphabetMismatch { shift: String, op: String },
    #[error(
        "operation is not compatible with the shift: b={b}, b'={b_prime}, a={a}, a'={a_prime} \
         (a ∈ F(b), a' ∈ F(b') but a•a' ∉ F(b•b'))"
    )]
    IncompatibleOperation {
        b: String,
        b_prime: String,
        a: String,
        a_prime: String,
    },
    #[error("follower sets of `{first}` and `{second}` have different sizes")]
    UnequalFollowerCardinalities { first: String, second: String },
    #[error("predecessor sets of `{first}` and `{second}` have different sizes")]
    UnequalPredecessorCardinalities { first: String, second: String },
    #[error("follower sets have size {follower} but predecessor sets have size {predecessor}")]
    FollowerPredecessorMismatch { follower: usize, predecessor: usize },
    #[error("induced partition: {0}")]
    Partition(#[from] PartitionError),
    #[error("h-class has {size} elements; the follower quotient is injective only when it is a singleton")]
    HNotTrivial { size: usize },
    #[error("section picks `{symbol}` outside h-class {block}")]
    InvalidSection { block: String, symbol: String },
    #[error("unknown h-class {0}")]
    UnknownBlock(String),
    #[error("product of words {left} and {right} is not allowed")]
    IncompatibleWords { left: String, right: String },
    #[error(transparent)]
    Shift(#[from] ShiftError),
    #[error(transparent)]
    Quasigroup(#[from] QuasigroupError),
}

/// Follower, predecessor and h-class partitions with their quotients.
///
/// Block indices coincide with symbol indices of the matching quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedQuotients {
    pub laf: CosetPartition,
    pub lap: CosetPartition,
    pub lah: CosetPartition,
    pub laf_quotient: FiniteQuasigroup,
    pub lap_quotient: FiniteQuasigroup,
    pub lah_quotient: FiniteQuasigroup,
    /// `tau[i]` is the predecessor block `P(b)` for any `b` in follower block `i`.
    pub tau: Vec<usize>,
    /// Canonical minimum of `P(e)`.
    pub x_bar: Symbol,
    /// Canonical minimum of `F(e)`.
    pub y_bar: Symbol,
    /// `h = F(x̄) ∩ P(ȳ)`, the h-class of `e`.
    pub h: SymbolSet,
}

/// A compatible pair of a Markov shift and a quasigroup on its alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasigroupShift {
    shift: MarkovShift,
    op: FiniteQuasigroup,
    base: BaseElement,
    quotients: InducedQuotients,
}

/// One representative per h-class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    picks: Vec<Symbol>,
}

impl Section {
    /// Canonical minimum of every class.
    pub fn min(qs: &QuasigroupShift) -> Self {
        Section {
            picks: qs.quotients.lah.blocks().iter().map(|b| *b.first().unwrap()).collect(),
        }
    }

    /// Canonical maximum of every class.
    pub fn max(qs: &QuasigroupShift) -> Self {
        Section {
            picks: qs.quotients.lah.blocks().iter().map(|b| *b.last().unwrap()).collect(),
        }
    }

    /// The minimum section with some classes overridden: `overrides` maps
    /// a class (named by any of its members) to its representative.
    pub fn with_overrides(qs: &QuasigroupShift, overrides: &BTreeMap<Symbol, Symbol>) -> Result<Self, QgShiftError> {
        let mut section = Self::min(qs);
        let lah = &qs.quotients.lah;
        let alphabet = qs.alphabet();
        for (&member, &pick) in overrides {
            if member >= alphabet.len() {
                return Err(QgShiftError::UnknownBlock(member.to_string()));
            }
            let block = lah.block_of(member);
            if lah.block_of(pick) != block {
                return Err(QgShiftError::InvalidSection {
                    block: alphabet.set_label(lah.block(block)),
                    symbol: alphabet.name(pick).to_string(),
                });
            }
            section.picks[block] = pick;
        }
        Ok(section)
    }

    /// Representative of h-class `block`.
    pub fn pick(&self, block: usize) -> Symbol {
        self.picks[block]
    }

    pub fn picks(&self) -> &[Symbol] {
        &self.picks
    }
}

/// The splitting `a ↦ (h_a, S(h_a)⁻ • a)` as a quasigroup shift on pairs.
#[derive(Debug, Clone)]
pub struct PhiSplit {
    /// Shift on pairs `(h-class, element of h)`; transitions follow the
    /// h-class coordinate, the second coordinate is free.
    pub product: QuasigroupShift,
    /// The h-class shift alone.
    pub sigma_h: QuasigroupShift,
    pub forward: BlockCode,
    pub inverse: BlockCode,
    /// `pairs[i]` is the (h-class, element of h) named by symbol `i` of the
    /// product.
    pub pairs: Vec<(usize, Symbol)>,
}

/// The follower-set quotient `a ↦ F(a)`.
#[derive(Debug, Clone)]
pub struct FollowerQuotient {
    pub shift: QuasigroupShift,
    pub theta: BlockCode,
}

impl QuasigroupShift {
    /// Validates compatibility `a ∈ F(b), a′ ∈ F(b′) ⟹ a•a′ ∈ F(b•b′)` and the
    /// equal-cardinality conditions, then computes the induced quotients.
    pub fn build(shift: MarkovShift, op: FiniteQuasigroup, e: Symbol) -> Result<Self, QgShiftError> {
        if shift.alphabet() != op.alphabet() {
            return Err(QgShiftError::AlphabetMismatch {
                shift: shift.alphabet().to_string(),
                op: op.alphabet().to_string(),
            });
        }
        let alphabet = shift.alphabet().clone();
        let name = |s: Symbol| alphabet.name(s).to_string();
        for a in alphabet.symbols() {
            for a_prime in alphabet.symbols() {
                let product = op.op(a, a_prime);
                for &b in shift.predecessors(a) {
                    for &b_prime in shift.predecessors(a_prime) {
                        if !shift.allows(op.op(b, b_prime), product) {
                            return Err(QgShiftError::IncompatibleOperation {
                                b: name(b),
                                b_prime: name(b_prime),
                                a: name(a),
                                a_prime: name(a_prime),
                            });
                        }
                    }
                }
            }
        }
        let k = shift.followers(0).len();
        if let Some(s) = alphabet.symbols().find(|&s| shift.followers(s).len() != k) {
            return Err(QgShiftError::UnequalFollowerCardinalities {
                first: name(0),
                second: name(s),
            });
        }
        let p = shift.predecessors(0).len();
        if let Some(s) = alphabet.symbols().find(|&s| shift.predecessors(s).len() != p) {
            return Err(QgShiftError::UnequalPredecessorCardinalities {
                first: name(0),
                second: name(s),
            });
        }
        if k != p {
            return Err(QgShiftError::FollowerPredecessorMismatch {
                follower: k,
                predecessor: p,
            });
        }
        let base = op.base_element(e);
        let quotients = induce(&shift, &op, e)?;
        Ok(QuasigroupShift {
            shift,
            op,
            base,
            quotients,
        })
    }

    /// Builds from a forbidden-word presentation by passing to its
    /// `(step + 1)`-block presentation with the operation lifted
    /// coordinatewise. The base becomes `e…e` if allowed, otherwise the least
    /// allowed word starting with `e`.
    pub fn from_sft(
        sft: &SftPresentation,
        op: &FiniteQuasigroup,
        e: Symbol,
    ) -> Result<(Self, HigherBlock), QgShiftError> {
        if sft.alphabet() != op.alphabet() {
            return Err(QgShiftError::AlphabetMismatch {
                shift: sft.alphabet().to_string(),
                op: op.alphabet().to_string(),
            });
        }
        let k = sft.sft_step() + 1;
        let hb = higher_block_presentation(sft, k)?;
        if k == 1 && hb.shift.alphabet() != op.alphabet() {
            return Err(QgShiftError::AlphabetMismatch {
                shift: hb.shift.alphabet().to_string(),
                op: op.alphabet().to_string(),
            });
        }
        let qs = lift_to_blocks(&hb, sft.alphabet(), op, e)?;
        Ok((qs, hb))
    }

    /// The `k`-block presentation with the operation applied coordinatewise.
    pub fn higher_block(&self, k: usize) -> Result<(Self, HigherBlock), QgShiftError> {
        let hb = higher_block_presentation(&self.shift, k)?;
        let qs = lift_to_blocks(&hb, self.alphabet(), &self.op, self.e())?;
        Ok((qs, hb))
    }

    pub fn shift(&self) -> &MarkovShift {
        &self.shift
    }

    pub fn op(&self) -> &FiniteQuasigroup {
        &self.op
    }

    pub fn base(&self) -> &BaseElement {
        &self.base
    }

    pub fn e(&self) -> Symbol {
        self.base.e()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.shift.alphabet()
    }

    pub fn quotients(&self) -> &InducedQuotients {
        &self.quotients
    }

    /// Common size of all follower (and predecessor) sets.
    pub fn follower_size(&self) -> usize {
        self.shift.followers(0).len()
    }

    /// The h-class of `e`.
    pub fn h(&self) -> &SymbolSet {
        &self.quotients.h
    }

    /// Same structure with a different base element.
    pub fn with_base(&self, e: Symbol) -> Self {
        QuasigroupShift::build(self.shift.clone(), self.op.clone(), e).expect("base choice does not affect validity")
    }

    /// `(h_a, S(h_a)⁻ • a)`; the second coordinate lies in `h`.
    pub fn phi_symbol(&self, section: &Section, a: Symbol) -> (usize, Symbol) {
        let block = self.quotients.lah.block_of(a);
        let rep = section.pick(block);
        (block, self.op.op(self.base.left_inverse(rep), a))
    }

    /// The unique `a` in class `block` with `S(block)⁻ • a = x`.
    pub fn phi_inverse(&self, section: &Section, (block, x): (usize, Symbol)) -> Symbol {
        let rep = section.pick(block);
        self.op.right_solve(self.base.left_inverse(rep), x)
    }

    /// `φ(φ⁻¹(x) • φ⁻¹(y))`.
    pub fn diamond(&self, section: &Section, x: (usize, Symbol), y: (usize, Symbol)) -> (usize, Symbol) {
        let product = self.op.op(self.phi_inverse(section, x), self.phi_inverse(section, y));
        self.phi_symbol(section, product)
    }

    /// Shift on h-classes, `h₀ → h₁` iff `h₁ ⊆ F(h₀)`, with the quotient
    /// operation and base `h_e`.
    pub fn sigma_h(&self) -> QuasigroupShift {
        let lah = &self.quotients.lah;
        let reps: Vec<Symbol> = lah.blocks().iter().map(|b| *b.first().unwrap()).collect();
        let shift = MarkovShift::from_fn(self.quotients.lah_quotient.alphabet().clone(), |i, j| {
            lah.block(j).is_subset(self.shift.followers(reps[i]))
        })
        .expect("every h-class has a follower and a predecessor class");
        QuasigroupShift::build(shift, self.quotients.lah_quotient.clone(), lah.block_of(self.e()))
            .expect("the h-class shift is a quasigroup shift")
    }

    /// The splitting into the h-class shift times the full shift on `h`.
    pub fn phi_code(&self, section: &Section) -> PhiSplit {
        let sigma_h = self.sigma_h();
        let h: Vec<Symbol> = self.h().iter().copied().collect();
        let blocks = sigma_h.alphabet().len();
        let mut pairs = Vec::with_capacity(blocks * h.len());
        let mut names = Vec::with_capacity(blocks * h.len());
        for block in 0..blocks {
            for &x in &h {
                pairs.push((block, x));
                names.push(format!(
                    "({};{})",
                    sigma_h.alphabet().name(block),
                    self.alphabet().name(x)
                ));
            }
        }
        let (alphabet, positions) = Alphabet::with_positions(&names).expect("pair names are distinct");
        let mut ordered = vec![(0, 0); pairs.len()];
        for (pair, &pos) in pairs.iter().zip(&positions) {
            ordered[pos] = *pair;
        }
        let index: BTreeMap<(usize, Symbol), Symbol> = ordered.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let shift = MarkovShift::from_fn(alphabet.clone(), |u, v| {
            sigma_h.shift().allows(ordered[u].0, ordered[v].0)
        })
        .expect("product of essential shifts is essential");
        let op = FiniteQuasigroup::from_fn(alphabet.clone(), |u, v| {
            index[&self.diamond(section, ordered[u], ordered[v])]
        })
        .expect("diamond is a conjugate of the operation");
        let e = index[&self.phi_symbol(section, self.e())];
        let product = QuasigroupShift::build(shift, op, e).expect("the split is a quasigroup shift");
        let forward = BlockCode::one_block(self.alphabet().clone(), alphabet.clone(), |a| {
            index[&self.phi_symbol(section, a)]
        });
        let inverse = BlockCode::one_block(alphabet, self.alphabet().clone(), |u| self.phi_inverse(section, ordered[u]));
        PhiSplit {
            product,
            sigma_h,
            forward,
            inverse,
            pairs: ordered,
        }
    }

    /// Shift on follower sets, `F₁ → F₂` iff `F(g) = F₂` for some `g ∈ F₁`,
    /// with `θ: a ↦ F(a)`. The base is `F(e)`.
    pub fn sigma_f(&self) -> FollowerQuotient {
        let laf = &self.quotients.laf;
        let follower_block = |g: Symbol| laf.find(self.shift.followers(g)).expect("follower sets are blocks");
        let shift = MarkovShift::from_fn(self.quotients.laf_quotient.alphabet().clone(), |i, j| {
            laf.block(i).iter().any(|&g| follower_block(g) == j)
        })
        .expect("every follower class has a follower and a predecessor class");
        let target = shift.alphabet().clone();
        let qs = QuasigroupShift::build(shift, self.quotients.laf_quotient.clone(), follower_block(self.e()))
            .expect("the follower shift is a quasigroup shift");
        let theta = BlockCode::one_block(self.alphabet().clone(), target, follower_block);
        FollowerQuotient { shift: qs, theta }
    }

    /// Memory-1 inverse of `θ`: `[F₁, F₂] ↦` the unique `g ∈ F₁` with
    /// `F(g) = F₂`.
    pub fn theta_inverse(&self) -> Result<BlockCode, QgShiftError> {
        if self.h().len() != 1 {
            return Err(QgShiftError::HNotTrivial { size: self.h().len() });
        }
        let quotient = self.sigma_f();
        let laf = &self.quotients.laf;
        let mut rule = BTreeMap::new();
        for i in quotient.shift.alphabet().symbols() {
            for &j in quotient.shift.shift().followers(i) {
                let mut found = laf.block(i).iter().filter(|&&g| laf.find(self.shift.followers(g)) == Some(j));
                let g = *found.next().expect("transition has a witness");
                if found.next().is_some() {
                    return Err(QgShiftError::HNotTrivial { size: self.h().len() });
                }
                rule.insert(vec![i, j], g);
            }
        }
        Ok(BlockCode::new(quotient.shift.alphabet().clone(), self.alphabet().clone(), 1, 0, rule)
            .expect("2-block rule"))
    }

    /// Exhaustive checks of the structural identities every quasigroup shift
    /// satisfies.
    pub fn structural_checks(&self) -> Vec<CheckResult> {
        structural_checks(self)
    }
}

fn induce(shift: &MarkovShift, op: &FiniteQuasigroup, e: Symbol) -> Result<InducedQuotients, QgShiftError> {
    let alphabet = shift.alphabet();
    let mut follower_sets: Vec<SymbolSet> = alphabet.symbols().map(|a| shift.followers(a).clone()).collect();
    follower_sets.sort();
    follower_sets.dedup();
    let mut predecessor_sets: Vec<SymbolSet> = alphabet.symbols().map(|a| shift.predecessors(a).clone()).collect();
    predecessor_sets.sort();
    predecessor_sets.dedup();
    let laf = CosetPartition::new(op, follower_sets)?;
    let lap = CosetPartition::new(op, predecessor_sets)?;
    let mut classes: Vec<SymbolSet> = alphabet
        .symbols()
        .map(|a| {
            laf.block_containing(a)
                .intersection(lap.block_containing(a))
                .copied()
                .collect()
        })
        .collect();
    classes.sort();
    classes.dedup();
    let lah = CosetPartition::new(op, classes)?;
    let tau = (0..laf.len())
        .map(|i| {
            let b = *laf.block(i).first().unwrap();
            lap.find(shift.predecessors(b)).expect("predecessor sets are blocks")
        })
        .collect();
    let x_bar = *shift.predecessors(e).first().unwrap();
    let y_bar = *shift.followers(e).first().unwrap();
    let h: SymbolSet = shift
        .followers(x_bar)
        .intersection(shift.predecessors(y_bar))
        .copied()
        .collect();
    debug_assert_eq!(&h, lah.block_containing(e));
    Ok(InducedQuotients {
        laf_quotient: op.quotient(&laf),
        lap_quotient: op.quotient(&lap),
        lah_quotient: op.quotient(&lah),
        laf,
        lap,
        lah,
        tau,
        x_bar,
        y_bar,
        h,
    })
}

fn lift_to_blocks(
    hb: &HigherBlock,
    source: &Alphabet,
    op: &FiniteQuasigroup,
    e: Symbol,
) -> Result<QuasigroupShift, QgShiftError> {
    let index: BTreeMap<&Word, Symbol> = hb.words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = hb.words.len();
    let mut table = vec![vec![0; n]; n];
    for (i, u) in hb.words.iter().enumerate() {
        for (j, v) in hb.words.iter().enumerate() {
            let product: Word = u.iter().zip(v).map(|(&a, &b)| op.op(a, b)).collect();
            table[i][j] = *index.get(&product).ok_or_else(|| QgShiftError::IncompatibleWords {
                left: source.word_name(u),
                right: source.word_name(v),
            })?;
        }
    }
    let lifted = FiniteQuasigroup::from_table(hb.shift.alphabet().clone(), table)?;
    let k = hb.words[0].len();
    let constant = vec![e; k];
    let base = index
        .get(&constant)
        .copied()
        .or_else(|| hb.words.iter().position(|w| w[0] == e))
        .ok_or_else(|| QgShiftError::Shift(ShiftError::WordNotAllowed(source.name(e).to_string())))?;
    QuasigroupShift::build(hb.shift.clone(), lifted, base)
}

fn set_name(alphabet: &Alphabet, set: &SymbolSet) -> String {
    format!("{{{}}}", alphabet.set_names(set).join(","))
}

/// Exhaustive checks of the identities relating follower sets, predecessor
/// sets, h-classes and their quotients.
pub fn structural_checks(qs: &QuasigroupShift) -> Vec<CheckResult> {
    let shift = &qs.shift;
    let op = &qs.op;
    let q = &qs.quotients;
    let alphabet = qs.alphabet();
    let n = alphabet.len();
    let name = |s: Symbol| alphabet.name(s).to_string();
    let f = |a: Symbol| shift.followers(a);
    let p = |a: Symbol| shift.predecessors(a);
    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
    let mut out = Vec::new();

    let overlap = |sets: Vec<&SymbolSet>| {
        pairs()
            .find(|&(a, b)| sets[a] != sets[b] && !sets[a].is_disjoint(sets[b]))
            .map(|(a, b)| format!("{} and {}", name(a), name(b)))
    };
    out.push(CheckResult::from_witness(
        "follower sets are disjoint or equal",
        overlap((0..n).map(f).collect()),
    ));
    out.push(CheckResult::from_witness(
        "predecessor sets are disjoint or equal",
        overlap((0..n).map(p).collect()),
    ));

    let k = f(0).len();
    out.push(CheckResult::from_witness(
        "follower and predecessor sets all have the same size",
        (0..n)
            .find(|&a| f(a).len() != k || p(a).len() != k)
            .map(|a| format!("{}: |F|={}, |P|={}, expected {k}", name(a), f(a).len(), p(a).len())),
    ));

    let mut translate = None;
    'outer: for r in 0..n {
        for &s in f(r) {
            for h in 0..n {
                if op.left_translate(s, f(h)) != *f(op.op(r, h)) {
                    translate = Some(format!("r={}, s={}, h={}", name(r), name(s), name(h)));
                    break 'outer;
                }
            }
        }
    }
    out.push(CheckResult::from_witness(
        "s•F(h) = F(r•h) whenever s ∈ F(r)",
        translate,
    ));

    out.push(CheckResult::from_witness(
        "F(a)•F(b) = F(a•b)",
        pairs()
            .find(|&(a, b)| op.set_product(f(a), f(b)) != *f(op.op(a, b)))
            .map(|(a, b)| format!("a={}, b={}", name(a), name(b))),
    ));
    out.push(CheckResult::from_witness(
        "P(a)•P(b) = P(a•b)",
        pairs()
            .find(|&(a, b)| op.set_product(p(a), p(b)) != *p(op.op(a, b)))
            .map(|(a, b)| format!("a={}, b={}", name(a), name(b))),
    ));

    for (label, quotient) in [
        ("follower quotient is a Latin square", &q.laf_quotient),
        ("predecessor quotient is a Latin square", &q.lap_quotient),
        ("h-class quotient is a Latin square", &q.lah_quotient),
    ] {
        let witness = validate_latin_square(quotient.alphabet().names(), &quotient.table_names())
            .err()
            .map(|e| e.to_string());
        out.push(CheckResult::from_witness(label, witness));
    }

    let mut tau_witness = None;
    let mut seen = vec![false; q.lap.len()];
    for (i, &t) in q.tau.iter().enumerate() {
        let block = q.laf.block(i);
        if let Some(&b) = block.iter().find(|&&b| q.lap.find(p(b)) != Some(t)) {
            tau_witness = Some(format!("P({}) differs across {}", name(b), alphabet.set_label(block)));
        } else if std::mem::replace(&mut seen[t], true) {
            tau_witness = Some(format!("τ is not injective at {}", alphabet.set_label(block)));
        }
    }
    if tau_witness.is_none() && q.tau.len() != q.lap.len() {
        tau_witness = Some(format!("{} follower classes, {} predecessor classes", q.tau.len(), q.lap.len()));
    }
    if tau_witness.is_none() {
        let laf_op = &q.laf_quotient;
        let lap_op = &q.lap_quotient;
        tau_witness = (0..q.laf.len())
            .flat_map(|i| (0..q.laf.len()).map(move |j| (i, j)))
            .find(|&(i, j)| q.tau[laf_op.op(i, j)] != lap_op.op(q.tau[i], q.tau[j]))
            .map(|(i, j)| format!("{} and {}", laf_op.alphabet().name(i), laf_op.alphabet().name(j)));
    }
    out.push(CheckResult::from_witness("τ is an isomorphism of the quotients", tau_witness));

    let class = |a: Symbol| q.lah.block_containing(a);
    let mut through = None;
    'points: for a in 0..n {
        for &r in p(a) {
            for &t in f(a) {
                let meet: SymbolSet = f(r).intersection(p(t)).copied().collect();
                if meet != *class(a) {
                    through = Some(format!("a={}, r={}, t={}", name(a), name(r), name(t)));
                    break 'points;
                }
            }
        }
    }
    out.push(CheckResult::from_witness("h_a = F(r) ∩ P(t) for a ∈ F(r) ∩ P(t)", through));

    out.push(CheckResult::from_witness(
        "h_(a•b) = h_a•h_b = a•h_b = h_a•b",
        pairs()
            .find(|&(a, b)| {
                let target = class(op.op(a, b));
                op.set_product(class(a), class(b)) != *target
                    || op.left_translate(a, class(b)) != *target
                    || op.right_translate(class(a), b) != *target
            })
            .map(|(a, b)| format!("a={}, b={}", name(a), name(b))),
    ));

    out.push(CheckResult::from_witness(
        "|h|·|h-classes| = |alphabet|",
        (qs.h().len() * q.lah.len() != n).then(|| format!("{}·{} ≠ {n}", qs.h().len(), q.lah.len())),
    ));
    out.push(CheckResult::from_witness(
        "distinct h-classes are disjoint",
        pairs()
            .find(|&(a, b)| class(a) != class(b) && !class(a).is_disjoint(class(b)))
            .map(|(a, b)| format!("{} and {}", set_name(alphabet, class(a)), set_name(alphabet, class(b)))),
    ));

    let section = Section::min(qs);
    let images: Vec<(usize, Symbol)> = (0..n).map(|a| qs.phi_symbol(&section, a)).collect();
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    let phi_witness = images
        .iter()
        .position(|(_, x)| !qs.h().contains(x))
        .map(|a| format!("second coordinate of φ({}) is outside h", name(a)))
        .or_else(|| (distinct.len() != n).then(|| "φ is not injective".to_string()))
        .or_else(|| {
            (0..n)
                .find(|&a| qs.phi_inverse(&section, images[a]) != a)
                .map(|a| format!("φ⁻¹(φ({})) ≠ {}", name(a), name(a)))
        });
    out.push(CheckResult::from_witness("φ is a bijection onto h-classes × h", phi_witness));

    let sigma_h = qs.sigma_h();
    out.push(CheckResult::from_witness(
        "the h-class shift has a singleton h-class",
        (sigma_h.h().len() != 1).then(|| format!("|h| = {}", sigma_h.h().len())),
    ));
    out
}
