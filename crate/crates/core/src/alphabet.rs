//! Finite alphabets of opaque symbol names.
//!
//! Every structure in this crate works with symbol *indices*. An [`Alphabet`]
//! owns the names and fixes the canonical order: lexicographic on the names.
//! Index `i` always refers to the `i`-th smallest name.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index of a symbol inside its [`Alphabet`].
pub type Symbol = usize;

/// A finite word over an alphabet, stored as symbol indices.
pub type Word = Vec<Symbol>;

/// A set of symbols, iterated in canonical order.
pub type SymbolSet = BTreeSet<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet is empty")]
    Empty,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

/// An ordered set of distinct symbol names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet, sorting the names into canonical order.
    pub fn new<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlphabetError::Empty);
        }
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(AlphabetError::DuplicateSymbol(pair[0].clone()));
            }
        }
        Ok(Alphabet { names })
    }

    /// Builds an alphabet from names given in an arbitrary order and returns,
    /// for each input position, the canonical index of that name.
    pub fn with_positions<S: AsRef<str>>(names: &[S]) -> Result<(Self, Vec<Symbol>), AlphabetError> {
        let alphabet = Alphabet::new(names.iter().map(|s| s.as_ref().to_string()))?;
        let positions = names
            .iter()
            .map(|s| alphabet.index_of(s.as_ref()).expect("name was just inserted"))
            .collect();
        Ok((alphabet, positions))
    }

    /// `0, 1, ..., n-1` as decimal names. Note that canonical order is
    /// lexicographic, so for `n > 10` index and numeric value differ.
    pub fn numeric(n: usize) -> Self {
        Alphabet::new((0..n).map(|i| i.to_string())).expect("n > 0 distinct names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbols(&self) -> std::ops::Range<Symbol> {
        0..self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn lookup(&self, name: &str) -> Result<Symbol, AlphabetError> {
        self.index_of(name)
            .ok_or_else(|| AlphabetError::UnknownSymbol(name.to_string()))
    }

    pub fn parse_word<S: AsRef<str>>(&self, names: &[S]) -> Result<Word, AlphabetError> {
        names.iter().map(|n| self.lookup(n.as_ref())).collect()
    }

    pub fn parse_set<S: AsRef<str>>(&self, names: &[S]) -> Result<SymbolSet, AlphabetError> {
        names.iter().map(|n| self.lookup(n.as_ref())).collect()
    }

    /// Concatenates names when every name is a single character, otherwise
    /// joins them with `.`.
    pub fn word_name(&self, word: &[Symbol]) -> String {
        if self.names.iter().all(|n| n.chars().count() == 1) {
            word.iter().map(|&s| self.name(s)).collect()
        } else {
            word.iter()
                .map(|&s| self.name(s))
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Label of a set of symbols: its canonical minimum in brackets.
    pub fn set_label(&self, set: &SymbolSet) -> String {
        let min = set.iter().next().expect("labelled sets are non-empty");
        format!("[{}]", self.name(*min))
    }

    pub fn set_names(&self, set: &SymbolSet) -> Vec<String> {
        set.iter().map(|&s| self.name(s).to_string()).collect()
    }

    pub fn word_names(&self, word: &[Symbol]) -> Vec<String> {
        word.iter().map(|&s| self.name(s).to_string()).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(","))
    }
}
