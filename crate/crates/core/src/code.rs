//! Sliding block codes with explicit memory and anticipation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockCodeError {
    #[error("window {window} has length {len}, expected {expected}")]
    WindowLength { window: String, len: usize, expected: usize },
    #[error("symbol index {0} outside the alphabet")]
    OutOfRange(usize),
    #[error("target alphabet of the first code differs from the source alphabet of the second")]
    AlphabetMismatch,
    #[error("local rule is undefined on window {0}")]
    RuleNotTotal(String),
}

/// A sliding block code `x ↦ y` with `y_i = rule(x[i-memory ..= i+anticipation])`.
///
/// The rule is a finite map; windows outside its domain are treated as
/// not allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    source: Alphabet,
    target: Alphabet,
    memory: usize,
    anticipation: usize,
    rule: BTreeMap<Word, Symbol>,
}

impl BlockCode {
    pub fn new(
        source: Alphabet,
        target: Alphabet,
        memory: usize,
        anticipation: usize,
        rule: BTreeMap<Word, Symbol>,
    ) -> Result<Self, BlockCodeError> {
        let width = memory + anticipation + 1;
        for (window, &out) in &rule {
            if window.len() != width {
                return Err(BlockCodeError::WindowLength {
                    window: source_name(&source, window),
                    len: window.len(),
                    expected: width,
                });
            }
            if let Some(&bad) = window.iter().find(|&&s| s >= source.len()) {
                return Err(BlockCodeError::OutOfRange(bad));
            }
            if out >= target.len() {
                return Err(BlockCodeError::OutOfRange(out));
            }
        }
        Ok(BlockCode {
            source,
            target,
            memory,
            anticipation,
            rule,
        })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::one_block(alphabet.clone(), alphabet, |s| s)
    }

    pub fn one_block(source: Alphabet, target: Alphabet, f: impl Fn(Symbol) -> Symbol) -> Self {
        let rule = source.symbols().map(|s| (vec![s], f(s))).collect();
        Self::new(source, target, 0, 0, rule).expect("1-block rule over the source alphabet")
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    /// Window length `memory + anticipation + 1`.
    pub fn width(&self) -> usize {
        self.memory + self.anticipation + 1
    }

    pub fn rule(&self) -> &BTreeMap<Word, Symbol> {
        &self.rule
    }

    pub fn get(&self, window: &[Symbol]) -> Option<Symbol> {
        self.rule.get(window).copied()
    }

    /// Image of a finite word. The output has length `word.len() - width + 1`
    /// and its first symbol sits at position `memory` of the input.
    pub fn apply(&self, word: &[Symbol]) -> Result<Word, BlockCodeError> {
        let width = self.width();
        if word.len() < width {
            return Ok(Vec::new());
        }
        word.windows(width)
            .map(|w| {
                self.get(w)
                    .ok_or_else(|| BlockCodeError::RuleNotTotal(source_name(&self.source, w)))
            })
            .collect()
    }

    /// Same rule with source and target names replaced.
    pub fn relabelled(&self, source: Alphabet, target: Alphabet) -> Result<Self, BlockCodeError> {
        Self::new(source, target, self.memory, self.anticipation, self.rule.clone())
    }
}

fn source_name(alphabet: &Alphabet, window: &[Symbol]) -> String {
    if window.iter().all(|&s| s < alphabet.len()) {
        alphabet.word_name(window)
    } else {
        format!("{window:?}")
    }
}

/// The code "apply `f`, then `g`", with memory `ℓ_f + ℓ_g` and anticipation
/// `r_f + r_g`.
///
/// The composite is defined on every window whose sub-windows all lie in the
/// domain of `f` and whose image under `f` lies in the domain of `g`.
pub fn compose_codes(f: &BlockCode, g: &BlockCode) -> Result<BlockCode, BlockCodeError> {
    if f.target != g.source {
        return Err(BlockCodeError::AlphabetMismatch);
    }
    let wf = f.width();
    let width = wf + g.width() - 1;
    let mut rule = BTreeMap::new();
    let mut outputs: Vec<Symbol> = Vec::with_capacity(g.width());
    for (start, &first) in &f.rule {
        let mut window = start.clone();
        outputs.clear();
        outputs.push(first);
        extend(f, g, width, &mut window, &mut outputs, &mut rule);
    }
    BlockCode::new(
        f.source.clone(),
        g.target.clone(),
        f.memory + g.memory,
        f.anticipation + g.anticipation,
        rule,
    )
}

fn extend(
    f: &BlockCode,
    g: &BlockCode,
    width: usize,
    window: &mut Word,
    outputs: &mut Vec<Symbol>,
    rule: &mut BTreeMap<Word, Symbol>,
) {
    if window.len() == width {
        if let Some(out) = g.get(outputs) {
            rule.insert(window.clone(), out);
        }
        return;
    }
    let wf = f.width();
    for s in f.source.symbols() {
        window.push(s);
        if let Some(o) = f.get(&window[window.len() - wf..]) {
            outputs.push(o);
            extend(f, g, width, window, outputs, rule);
            outputs.pop();
        }
        window.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> Alphabet {
        Alphabet::numeric(2)
    }

    /// `y_i = x_{i-1} + x_i mod 2`.
    fn xor_code() -> BlockCode {
        let rule = [(vec![0, 0], 0), (vec![0, 1], 1), (vec![1, 0], 1), (vec![1, 1], 0)]
            .into_iter()
            .collect();
        BlockCode::new(binary(), binary(), 1, 0, rule).unwrap()
    }

    #[test]
    fn apply_slides_the_window() {
        assert_eq!(xor_code().apply(&[0, 1, 1, 0]).unwrap(), vec![1, 0, 1]);
        assert_eq!(xor_code().apply(&[1]).unwrap(), Vec::<Symbol>::new());
        let partial = BlockCode::new(binary(), binary(), 1, 0, [(vec![0, 0], 0)].into_iter().collect()).unwrap();
        assert!(matches!(partial.apply(&[0, 1]), Err(BlockCodeError::RuleNotTotal(w)) if w == "01"));
    }

    #[test]
    fn rejects_malformed_rules() {
        let bad = BlockCode::new(binary(), binary(), 1, 0, [(vec![0], 0)].into_iter().collect());
        assert!(matches!(bad, Err(BlockCodeError::WindowLength { expected: 2, .. })));
        let bad = BlockCode::new(binary(), binary(), 0, 0, [(vec![0], 5)].into_iter().collect());
        assert_eq!(bad, Err(BlockCodeError::OutOfRange(5)));
    }

    #[test]
    fn identity_is_neutral() {
        let c = xor_code();
        assert_eq!(compose_codes(&BlockCode::identity(binary()), &c).unwrap(), c);
        assert_eq!(compose_codes(&c, &BlockCode::identity(binary())).unwrap(), c);
    }

    #[test]
    fn memory_and_anticipation_add() {
        let flip = BlockCode::one_block(binary(), binary(), |s| 1 - s);
        let c = compose_codes(&xor_code(), &flip).unwrap();
        assert_eq!((c.memory(), c.anticipation(), c.width()), (1, 0, 2));

        let cc = compose_codes(&xor_code(), &xor_code()).unwrap();
        assert_eq!((cc.memory(), cc.anticipation(), cc.width()), (2, 0, 3));
        // sequential application agrees on every 3-word
        for w in 0..8usize {
            let word = vec![w >> 2 & 1, w >> 1 & 1, w & 1];
            let twice = xor_code().apply(&xor_code().apply(&word).unwrap()).unwrap();
            assert_eq!(cc.apply(&word).unwrap(), twice);
        }
    }

    #[test]
    fn composition_checks_alphabets() {
        let three = BlockCode::identity(Alphabet::numeric(3));
        assert_eq!(compose_codes(&xor_code(), &three), Err(BlockCodeError::AlphabetMismatch));
    }
}
