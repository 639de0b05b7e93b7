//! Chain components and their coset partitions, computed on windows of a
//! fixed width in place of points of the shift.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Symbol, Word};
use crate::qgshift::QuasigroupShift;
use crate::shift::{MarkovShift, ShiftSpace};

/// The four hypotheses on the operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `x • y = y • x`.
    H1,
    /// `x • (x • y) = y`.
    H2,
    /// The base window times a neighbourhood window stays in the neighbourhood.
    H3,
    /// `(a • b) • (c • d) = (a • c) • (b • d)`.
    H4,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::H1 => "h1",
            Hypothesis::H2 => "h2",
            Hypothesis::H3 => "h3",
            Hypothesis::H4 => "h4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("hypothesis {which} fails: {witness}")]
    HypothesisViolated { which: Hypothesis, witness: String },
    #[error("order {t} exceeds the radius {radius}")]
    OrderTooLarge { t: usize, radius: usize },
    #[error("window {0} does not have width 2n+1 or is not allowed")]
    BadWindow(String),
    #[error("the base window is not in the ground set")]
    BaseNotInGround,
    #[error("translates {first} and {second} overlap without being equal")]
    NotAPartition { first: String, second: String },
    #[error("translate of {0} leaves the ground set")]
    TranslateOutsideGround(String),
    #[error("the product of blocks {first} and {second} is not a block")]
    NotCompatible { first: String, second: String },
}

/// A quasigroup shift seen through windows of width `2·radius + 1`.
#[derive(Debug, Clone)]
pub struct ChainInstance {
    qs: QuasigroupShift,
    radius: usize,
    ground: BTreeSet<Word>,
    e_window: Word,
    e_window_is_constant: bool,
}

/// `M_t` together with the closure properties it was checked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComponent {
    pub order: usize,
    pub windows: BTreeSet<Word>,
    /// `M_t • M_t = M_t` as sets.
    pub closed: bool,
    /// `M_t⁻ = M_t`.
    pub symmetric: bool,
}

impl ChainInstance {
    /// Uses every allowed window as the ground set when `ground` is `None`.
    pub fn new(qs: QuasigroupShift, radius: usize, ground: Option<Vec<Word>>) -> Result<Self, ChainError> {
        let op = qs.op();
        let name = |s: Symbol| qs.alphabet().name(s).to_string();
        if let Some((a, b)) = op.commutativity_violation() {
            return Err(ChainError::HypothesisViolated {
                which: Hypothesis::H1,
                witness: format!("{} • {}", name(a), name(b)),
            });
        }
        if let Some((a, b)) = op.period2_violation() {
            return Err(ChainError::HypothesisViolated {
                which: Hypothesis::H2,
                witness: format!("{} • ({} • {})", name(a), name(a), name(b)),
            });
        }
        if let Some([a, b, c, d]) = op.medial_violation() {
            return Err(ChainError::HypothesisViolated {
                which: Hypothesis::H4,
                witness: format!("({} • {}) • ({} • {})", name(a), name(b), name(c), name(d)),
            });
        }
        let width = 2 * radius + 1;
        let shift = qs.shift();
        let all = shift.enumerate_words(width).expect("non-empty shift");
        let e = qs.e();
        let constant = vec![e; width];
        let e_window_is_constant = shift.is_allowed(&constant);
        let e_window = if e_window_is_constant {
            constant
        } else {
            all.iter()
                .find(|w| w[radius] == e)
                .cloned()
                .expect("every symbol lies on an allowed window")
        };
        let ground: BTreeSet<Word> = match ground {
            None => all.into_iter().collect(),
            Some(words) => {
                for w in &words {
                    if w.len() != width || !shift.is_allowed(w) {
                        return Err(ChainError::BadWindow(qs.alphabet().word_name(w)));
                    }
                }
                words.into_iter().collect()
            }
        };
        if !ground.contains(&e_window) {
            return Err(ChainError::BaseNotInGround);
        }
        let ci = ChainInstance {
            qs,
            radius,
            ground,
            e_window,
            e_window_is_constant,
        };
        let neighbourhood = ci.neighbourhood(radius);
        for v in &neighbourhood {
            let p = ci.product(&ci.e_window, v);
            if !neighbourhood.contains(&p) {
                return Err(ChainError::HypothesisViolated {
                    which: Hypothesis::H3,
                    witness: format!("e-window • {}", ci.qs.alphabet().word_name(v)),
                });
            }
        }
        Ok(ci)
    }

    pub fn qs(&self) -> &QuasigroupShift {
        &self.qs
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn ground(&self) -> &BTreeSet<Word> {
        &self.ground
    }

    /// `e…e` when allowed, otherwise the least allowed window with `e` in the middle.
    pub fn e_window(&self) -> &Word {
        &self.e_window
    }

    pub fn e_window_is_constant(&self) -> bool {
        self.e_window_is_constant
    }

    fn shift(&self) -> &MarkovShift {
        self.qs.shift()
    }

    pub fn product(&self, v: &[Symbol], w: &[Symbol]) -> Word {
        v.iter().zip(w).map(|(&a, &b)| self.qs.op().op(a, b)).collect()
    }

    /// `v⁻` with `v⁻ • v` equal to the base window, solved position by position.
    pub fn inverse(&self, v: &[Symbol]) -> Word {
        v.iter()
            .zip(&self.e_window)
            .map(|(&a, &e)| self.qs.op().left_solve(a, e))
            .collect()
    }

    fn in_neighbourhood(&self, w: &[Symbol], t: usize) -> bool {
        let (lo, hi) = (self.radius - t, self.radius + t + 1);
        w[lo..hi] == self.e_window[lo..hi] && self.shift().is_allowed(w)
    }

    /// `V_t`: allowed windows agreeing with the base window on the central `2t + 1` symbols.
    pub fn neighbourhood(&self, t: usize) -> BTreeSet<Word> {
        let width = 2 * self.radius + 1;
        self.shift()
            .enumerate_words(width)
            .expect("non-empty shift")
            .into_iter()
            .filter(|w| self.in_neighbourhood(w, t))
            .collect()
    }
}

/// `M_t`: windows of the ground set reachable from the base window by
/// links `v → w` with `v⁻ • w ∈ V_t`.
pub fn chain_component(ci: &ChainInstance, t: usize) -> Result<ChainComponent, ChainError> {
    if t > ci.radius {
        return Err(ChainError::OrderTooLarge { t, radius: ci.radius });
    }
    let mut reached: BTreeSet<Word> = BTreeSet::from([ci.e_window.clone()]);
    let mut stack = vec![ci.e_window.clone()];
    while let Some(v) = stack.pop() {
        let v_inv = ci.inverse(&v);
        for w in &ci.ground {
            if !reached.contains(w) && ci.in_neighbourhood(&ci.product(&v_inv, w), t) {
                reached.insert(w.clone());
                stack.push(w.clone());
            }
        }
    }
    let products: BTreeSet<Word> = reached
        .iter()
        .flat_map(|v| reached.iter().map(move |w| (v, w)))
        .map(|(v, w)| ci.product(v, w))
        .collect();
    let inverses: BTreeSet<Word> = reached.iter().map(|v| ci.inverse(v)).collect();
    Ok(ChainComponent {
        order: t,
        closed: products == reached,
        symmetric: inverses == reached,
        windows: reached,
    })
}

/// The translates `w • q_set` for `w` in the ground set, checked to be a
/// partition of the ground set compatible with the operation.
pub fn coset_cover(ci: &ChainInstance, q_set: &BTreeSet<Word>) -> Result<Vec<BTreeSet<Word>>, ChainError> {
    let alphabet = ci.qs.alphabet();
    let mut blocks: Vec<BTreeSet<Word>> = Vec::new();
    for w in &ci.ground {
        let translate: BTreeSet<Word> = q_set.iter().map(|q| ci.product(w, q)).collect();
        if let Some(outside) = translate.iter().find(|x| !ci.ground.contains(*x)) {
            return Err(ChainError::TranslateOutsideGround(alphabet.word_name(outside)));
        }
        if let Some(other) = blocks.iter().find(|b| **b != translate && !b.is_disjoint(&translate)) {
            return Err(ChainError::NotAPartition {
                first: alphabet.word_name(other.first().unwrap()),
                second: alphabet.word_name(translate.first().unwrap()),
            });
        }
        if !blocks.contains(&translate) {
            blocks.push(translate);
        }
    }
    let covered: usize = blocks.iter().map(BTreeSet::len).sum();
    if covered != ci.ground.len() {
        let missing = ci.ground.iter().find(|w| !blocks.iter().any(|b| b.contains(*w))).unwrap();
        return Err(ChainError::TranslateOutsideGround(alphabet.word_name(missing)));
    }
    blocks.sort();
    for a in &blocks {
        for b in &blocks {
            let product: BTreeSet<Word> = a.iter().flat_map(|x| b.iter().map(move |y| ci.product(x, y))).collect();
            if !blocks.contains(&product) {
                return Err(ChainError::NotCompatible {
                    first: alphabet.word_name(a.first().unwrap()),
                    second: alphabet.word_name(b.first().unwrap()),
                });
            }
        }
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::quasigroup::FiniteQuasigroup;

    /// Z4 cosets with `a • b = -(a + b)`, which is commutative, medial and of period 2.
    fn z4_coset() -> QuasigroupShift {
        let a = Alphabet::numeric(4);
        let shift = MarkovShift::from_fn(a.clone(), |x, y| (y + 4 - x) % 2 == 0).unwrap();
        let op = FiniteQuasigroup::from_fn(a, |x, y| (8 - x - y) % 4).unwrap();
        QuasigroupShift::build(shift, op, 0).unwrap()
    }

    fn full2() -> QuasigroupShift {
        let a = Alphabet::numeric(2);
        QuasigroupShift::build(MarkovShift::full(a.clone()), FiniteQuasigroup::from_fn(a, |x, y| x ^ y).unwrap(), 0)
            .unwrap()
    }

    #[test]
    fn full_shift_radius_one() {
        let ci = ChainInstance::new(full2(), 1, None).unwrap();
        assert!(ci.e_window_is_constant());
        let m1 = chain_component(&ci, 1).unwrap();
        assert_eq!(m1.windows, BTreeSet::from([vec![0, 0, 0]]));
        let m0 = chain_component(&ci, 0).unwrap();
        assert_eq!(m0.windows.len(), 4);
        assert!(m0.windows.iter().all(|w| w[1] == 0));
        assert!(m1.windows.is_subset(&m0.windows));
        let singletons = coset_cover(&ci, &m1.windows).unwrap();
        assert_eq!(singletons.len(), 8);
        assert_eq!(coset_cover(&ci, &m0.windows).unwrap().len(), 2);
    }

    #[test]
    fn z4_components_are_closed() {
        let ci = ChainInstance::new(z4_coset(), 1, None).unwrap();
        let m0 = chain_component(&ci, 0).unwrap();
        let m1 = chain_component(&ci, 1).unwrap();
        assert_eq!(m1.windows.len(), 1);
        assert_eq!(m0.windows.len(), 4);
        for m in [&m0, &m1] {
            assert!(m.closed && m.symmetric);
            let blocks = coset_cover(&ci, &m.windows).unwrap();
            assert!(blocks.iter().all(|b| b.len() == m.windows.len()));
        }
    }

    #[test]
    fn one_link_suffices_when_the_neighbourhood_is_everything() {
        let qs = full2();
        let ground: Vec<Word> = qs.shift().enumerate_words(3).unwrap().into_iter().filter(|w| w[1] == 0).collect();
        let ci = ChainInstance::new(qs, 1, Some(ground.clone())).unwrap();
        let m = chain_component(&ci, 0).unwrap();
        assert_eq!(m.windows, ground.into_iter().collect());
        assert_eq!(coset_cover(&ci, &m.windows).unwrap().len(), 1);
    }

    #[test]
    fn addition_is_not_of_period_two() {
        let a = Alphabet::numeric(4);
        let shift = MarkovShift::from_fn(a.clone(), |x, y| (y + 4 - x) % 2 == 0).unwrap();
        let op = FiniteQuasigroup::from_fn(a, |x, y| (x + y) % 4).unwrap();
        let qs = QuasigroupShift::build(shift, op, 0).unwrap();
        let err = ChainInstance::new(qs, 1, None).unwrap_err();
        assert!(matches!(err, ChainError::HypothesisViolated { which: Hypothesis::H2, .. }));
    }

    #[test]
    fn order_is_bounded_by_radius() {
        let ci = ChainInstance::new(full2(), 1, None).unwrap();
        assert_eq!(chain_component(&ci, 2).unwrap_err(), ChainError::OrderTooLarge { t: 2, radius: 1 });
    }
}
