//! Finite quasigroups given by Latin-square Cayley tables, their algebraic
//! property checks, inverses relative to a base element, and compatible
//! partitions (cosets) with the quotient quasigroups they induce.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError, Symbol, SymbolSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasigroupError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("table shape does not match an alphabet of size {expected}")]
    Shape { expected: usize },
    #[error("row {row} is not a permutation of the alphabet")]
    RowNotPermutation { row: usize },
    #[error("column {col} is not a permutation of the alphabet")]
    ColumnNotPermutation { col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("translates {first} and {second} overlap without being equal")]
    NotAPartition { first: String, second: String },
    #[error("blocks do not cover the alphabet or contain an empty block")]
    NotACover,
    #[error("blocks have unequal sizes")]
    UnequalBlocks,
    #[error("product of blocks {left} and {right} is not a block")]
    NotCompatible { left: String, right: String },
}

/// A finite quasigroup: every row and every column of the table is a
/// permutation of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuasigroup {
    alphabet: Alphabet,
    table: Vec<Symbol>,
}

/// Validates a Cayley table given by symbol names.
///
/// `table[i][j]` is the product of `alphabet[i]` and `alphabet[j]`, in the
/// order the caller supplied. Rows are checked before columns; reported row and
/// column numbers refer to the caller's order.
pub fn validate_latin_square<S: AsRef<str>, T: AsRef<str>>(
    alphabet: &[S],
    table: &[Vec<T>],
) -> Result<FiniteQuasigroup, QuasigroupError> {
    let (canonical, positions) = Alphabet::with_positions(alphabet)?;
    let n = alphabet.len();
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(QuasigroupError::Shape { expected: n });
    }
    let mut raw = vec![vec![0; n]; n];
    for (i, row) in table.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            raw[i][j] = canonical.lookup(entry.as_ref())?;
        }
    }
    check_rows_and_columns(&raw)?;
    let mut canonical_table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            canonical_table[positions[i]][positions[j]] = raw[i][j];
        }
    }
    FiniteQuasigroup::from_table(canonical, canonical_table)
}

fn check_rows_and_columns(table: &[Vec<Symbol>]) -> Result<(), QuasigroupError> {
    let n = table.len();
    for (row, entries) in table.iter().enumerate() {
        let distinct: BTreeSet<_> = entries.iter().collect();
        if distinct.len() != n {
            return Err(QuasigroupError::RowNotPermutation { row });
        }
    }
    for col in 0..n {
        let distinct: BTreeSet<_> = table.iter().map(|r| r[col]).collect();
        if distinct.len() != n {
            return Err(QuasigroupError::ColumnNotPermutation { col });
        }
    }
    Ok(())
}

impl FiniteQuasigroup {
    /// Builds from a table of canonical indices (`table[a][b] = a • b`).
    pub fn from_table(alphabet: Alphabet, table: Vec<Vec<Symbol>>) -> Result<Self, QuasigroupError> {
        let n = alphabet.len();
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&s| s >= n)) {
            return Err(QuasigroupError::Shape { expected: n });
        }
        check_rows_and_columns(&table)?;
        Ok(FiniteQuasigroup {
            alphabet,
            table: table.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(alphabet: Alphabet, op: impl Fn(Symbol, Symbol) -> Symbol) -> Result<Self, QuasigroupError> {
        let n = alphabet.len();
        let table = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        Self::from_table(alphabet, table)
    }

    /// Builds from names in arbitrary order with the product given on input
    /// positions; the result is re-indexed canonically.
    pub fn from_named_fn<S: AsRef<str>>(
        names: &[S],
        op: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, QuasigroupError> {
        let n = names.len();
        let table: Vec<Vec<&str>> = (0..n)
            .map(|i| (0..n).map(|j| names[op(i, j)].as_ref()).collect())
            .collect();
        validate_latin_square(names, &table)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn order(&self) -> usize {
        self.alphabet.len()
    }

    #[inline]
    pub fn op(&self, a: Symbol, b: Symbol) -> Symbol {
        self.table[a * self.order() + b]
    }

    /// The unique `x` with `x • b = c`.
    pub fn left_solve(&self, b: Symbol, c: Symbol) -> Symbol {
        (0..self.order())
            .find(|&x| self.op(x, b) == c)
            .expect("columns are permutations")
    }

    /// The unique `y` with `a • y = c`.
    pub fn right_solve(&self, a: Symbol, c: Symbol) -> Symbol {
        (0..self.order())
            .find(|&y| self.op(a, y) == c)
            .expect("rows are permutations")
    }

    pub fn rows(&self) -> Vec<Vec<Symbol>> {
        self.table.chunks(self.order()).map(<[Symbol]>::to_vec).collect()
    }

    pub fn table_names(&self) -> Vec<Vec<String>> {
        self.rows()
            .into_iter()
            .map(|row| row.into_iter().map(|s| self.alphabet.name(s).to_string()).collect())
            .collect()
    }

    /// `{a • b : a ∈ left, b ∈ right}`.
    pub fn set_product(&self, left: &SymbolSet, right: &SymbolSet) -> SymbolSet {
        left.iter()
            .flat_map(|&a| right.iter().map(move |&b| self.op(a, b)))
            .collect()
    }

    /// `g • K`.
    pub fn left_translate(&self, g: Symbol, set: &SymbolSet) -> SymbolSet {
        set.iter().map(|&k| self.op(g, k)).collect()
    }

    /// `K • g`.
    pub fn right_translate(&self, set: &SymbolSet, g: Symbol) -> SymbolSet {
        set.iter().map(|&k| self.op(k, g)).collect()
    }

    pub fn commutativity_violation(&self) -> Option<(Symbol, Symbol)> {
        let n = self.order();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.op(a, b) != self.op(b, a))
    }

    pub fn check_commutative(&self) -> bool {
        self.commutativity_violation().is_none()
    }

    /// A pair with `a • (a • b) ≠ b`, if any.
    pub fn period2_violation(&self) -> Option<(Symbol, Symbol)> {
        let n = self.order();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.op(a, self.op(a, b)) != b)
    }

    pub fn check_period2(&self) -> bool {
        self.period2_violation().is_none()
    }

    /// A quadruple with `(a•b)•(c•d) ≠ (a•c)•(b•d)`, if any.
    pub fn medial_violation(&self) -> Option<[Symbol; 4]> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if self.op(self.op(a, b), self.op(c, d)) != self.op(self.op(a, c), self.op(b, d)) {
                            return Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn check_medial(&self) -> bool {
        self.medial_violation().is_none()
    }

    /// Left and right inverses with respect to `e`.
    pub fn base_element(&self, e: Symbol) -> BaseElement {
        let n = self.order();
        assert!(e < n, "base element outside the alphabet");
        let left_inverse: Vec<Symbol> = (0..n).map(|a| self.left_solve(a, e)).collect();
        let right_inverse: Vec<Symbol> = (0..n).map(|a| self.right_solve(a, e)).collect();
        debug_assert!(
            !(self.check_commutative() && self.check_period2()) || left_inverse == right_inverse,
            "commutative period-2 quasigroups have equal left and right inverses"
        );
        BaseElement {
            e,
            left_inverse,
            right_inverse,
        }
    }

    pub fn base_element_named(&self, e: &str) -> Result<BaseElement, AlphabetError> {
        Ok(self.base_element(self.alphabet.lookup(e)?))
    }

    /// The left translates `{g • h : g ∈ alphabet}` of `h`, provided they
    /// partition the alphabet compatibly with the operation.
    pub fn coset_partition_from_block(&self, h: &SymbolSet) -> Result<CosetPartition, PartitionError> {
        if h.is_empty() {
            return Err(PartitionError::NotACover);
        }
        let mut translates: Vec<SymbolSet> = Vec::new();
        for g in 0..self.order() {
            let t = self.left_translate(g, h);
            if let Some(other) = translates.iter().find(|o| **o != t && !o.is_disjoint(&t)) {
                return Err(PartitionError::NotAPartition {
                    first: self.alphabet.set_label(other),
                    second: format!("{}•{}", self.alphabet.name(g), self.alphabet.set_label(h)),
                });
            }
            if !translates.contains(&t) {
                translates.push(t);
            }
        }
        CosetPartition::new(self, translates)
    }

    /// Cayley table of the quotient by a compatible partition, on the block
    /// labels.
    pub fn quotient(&self, partition: &CosetPartition) -> FiniteQuasigroup {
        let labels: Vec<String> = partition.labels(&self.alphabet);
        let alphabet = Alphabet::new(labels).expect("block labels are distinct");
        let reps: Vec<Symbol> = partition.blocks().iter().map(|b| *b.iter().next().unwrap()).collect();
        let k = reps.len();
        let table = (0..k)
            .map(|i| (0..k).map(|j| partition.block_of(self.op(reps[i], reps[j]))).collect())
            .collect();
        FiniteQuasigroup::from_table(alphabet, table).expect("quotient of a compatible partition is a quasigroup")
    }

    /// Same operation on a renamed alphabet: `rename[s]` is the new name of `s`.
    pub fn renamed(&self, names: &[String]) -> Result<FiniteQuasigroup, QuasigroupError> {
        let n = self.order();
        let table: Vec<Vec<&str>> = (0..n)
            .map(|a| (0..n).map(|b| names[self.op(a, b)].as_str()).collect())
            .collect();
        validate_latin_square(names, &table)
    }
}

/// A fixed element `e` with the left inverses `a⁻` (`a⁻ • a = e`) and right
/// inverses `a⁺` (`a • a⁺ = e`) it determines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseElement {
    e: Symbol,
    left_inverse: Vec<Symbol>,
    right_inverse: Vec<Symbol>,
}

impl BaseElement {
    pub fn e(&self) -> Symbol {
        self.e
    }

    pub fn left_inverse(&self, a: Symbol) -> Symbol {
        self.left_inverse[a]
    }

    pub fn right_inverse(&self, a: Symbol) -> Symbol {
        self.right_inverse[a]
    }

    pub fn left_inverse_map(&self) -> &[Symbol] {
        &self.left_inverse
    }

    pub fn right_inverse_map(&self) -> &[Symbol] {
        &self.right_inverse
    }
}

/// A partition of an alphabet whose blocks multiply to blocks.
///
/// Blocks are ordered by their label (`[min]`), so block index `i` is also the
/// index of the corresponding symbol of the quotient quasigroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetPartition {
    blocks: Vec<SymbolSet>,
    block_of: Vec<usize>,
}

impl CosetPartition {
    pub fn new(q: &FiniteQuasigroup, mut blocks: Vec<SymbolSet>) -> Result<Self, PartitionError> {
        let n = q.order();
        let alphabet = q.alphabet();
        blocks.sort_by_key(|b| b.iter().next().map(|&m| format!("[{}]", alphabet.name(m))));
        blocks.dedup();
        let mut block_of = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::NotACover);
            }
            for &s in block {
                if s >= n {
                    return Err(PartitionError::NotACover);
                }
                if block_of[s] != usize::MAX {
                    return Err(PartitionError::NotAPartition {
                        first: alphabet.set_label(&blocks[block_of[s]]),
                        second: alphabet.set_label(block),
                    });
                }
                block_of[s] = i;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(PartitionError::NotACover);
        }
        let size = blocks[0].len();
        if blocks.iter().any(|b| b.len() != size) {
            return Err(PartitionError::UnequalBlocks);
        }
        for left in &blocks {
            for right in &blocks {
                let product = q.set_product(left, right);
                let target = &blocks[block_of[*product.iter().next().unwrap()]];
                if &product != target {
                    return Err(PartitionError::NotCompatible {
                        left: alphabet.set_label(left),
                        right: alphabet.set_label(right),
                    });
                }
            }
        }
        Ok(CosetPartition { blocks, block_of })
    }

    pub fn singletons(q: &FiniteQuasigroup) -> Self {
        Self::new(q, q.alphabet().symbols().map(|s| SymbolSet::from([s])).collect())
            .expect("singletons are always compatible")
    }

    pub fn whole(q: &FiniteQuasigroup) -> Self {
        Self::new(q, vec![q.alphabet().symbols().collect()]).expect("one block is always compatible")
    }

    pub fn blocks(&self) -> &[SymbolSet] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &SymbolSet {
        &self.blocks[i]
    }

    pub fn block_of(&self, s: Symbol) -> usize {
        self.block_of[s]
    }

    pub fn block_containing(&self, s: Symbol) -> &SymbolSet {
        &self.blocks[self.block_of[s]]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn labels(&self, alphabet: &Alphabet) -> Vec<String> {
        self.blocks.iter().map(|b| alphabet.set_label(b)).collect()
    }

    /// Index of the block equal to `set`, if `set` is a block.
    pub fn find(&self, set: &SymbolSet) -> Option<usize> {
        let first = *set.iter().next()?;
        let i = self.block_of[first];
        (self.blocks[i] == *set).then_some(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteQuasigroup {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        FiniteQuasigroup::from_named_fn(&names, f).unwrap()
    }

    fn set(q: &FiniteQuasigroup, names: &[&str]) -> SymbolSet {
        q.alphabet().parse_set(names).unwrap()
    }

    #[test]
    fn z3_addition_is_a_quasigroup() {
        let q = cyclic(3, |a, b| (a + b) % 3);
        assert_eq!(q.order(), 3);
        assert!(q.check_commutative());
    }

    #[test]
    fn repeated_row_entry_is_rejected() {
        let err = validate_latin_square(&["0", "1"], &[vec!["0", "0"], vec!["1", "1"]]).unwrap_err();
        assert_eq!(err, QuasigroupError::RowNotPermutation { row: 0 });
        let err = validate_latin_square(&["0", "1"], &[vec!["0", "1"], vec!["0", "1"]]).unwrap_err();
        assert_eq!(err, QuasigroupError::ColumnNotPermutation { col: 0 });
    }

    #[test]
    fn unknown_symbols_and_shapes() {
        assert!(matches!(
            validate_latin_square(&["0", "1"], &[vec!["0", "x"], vec!["1", "0"]]),
            Err(QuasigroupError::Alphabet(AlphabetError::UnknownSymbol(_)))
        ));
        assert_eq!(
            validate_latin_square(&["0", "1"], &[vec!["0", "1"]]),
            Err(QuasigroupError::Shape { expected: 2 })
        );
    }

    #[test]
    fn input_order_is_canonicalized() {
        let q = validate_latin_square(&["b", "a"], &[vec!["a", "b"], vec!["b", "a"]]).unwrap();
        // b•b = a, b•a = b, a•b = b, a•a = a
        assert_eq!(q.alphabet().names(), &["a", "b"]);
        assert_eq!(q.op(1, 1), 0);
        assert_eq!(q.op(1, 0), 1);
        assert_eq!(q.op(0, 1), 1);
        assert_eq!(q.op(0, 0), 0);
    }

    #[test]
    fn property_checkers() {
        let neg = cyclic(3, |a, b| (6 - a - b) % 3);
        assert!(neg.check_commutative());
        assert!(neg.check_period2());
        assert!(neg.check_medial());

        let add = cyclic(3, |a, b| (a + b) % 3);
        assert!(!add.check_period2());
        assert_eq!(add.period2_violation(), Some((1, 0)));

        let sub = cyclic(3, |a, b| (3 + a - b) % 3);
        assert!(!sub.check_commutative());
        assert_eq!(sub.op(0, 1), 2);
        assert_eq!(sub.op(1, 0), 1);

        assert!(cyclic(2, |a, b| (a + b) % 2).check_period2());
        assert!(cyclic(5, |a, b| (2 * a + b) % 5).check_medial());
        assert!(cyclic(4, |a, b| (a + b) % 4).check_medial());
    }

    #[test]
    fn trivial_quasigroup_passes_everything() {
        let q = cyclic(1, |_, _| 0);
        assert!(q.check_commutative() && q.check_period2() && q.check_medial());
        let base = q.base_element(0);
        assert_eq!(base.left_inverse(0), 0);
    }

    #[test]
    fn base_element_inverses() {
        let z4 = cyclic(4, |a, b| (a + b) % 4);
        let base = z4.base_element(0);
        assert_eq!(base.left_inverse_map(), &[0, 3, 2, 1]);
        assert_eq!(base.right_inverse_map(), &[0, 3, 2, 1]);

        let neg = cyclic(3, |a, b| (6 - a - b) % 3);
        let base = neg.base_element(0);
        assert_eq!(base.left_inverse_map(), &[0, 2, 1]);
        assert_eq!(base.left_inverse_map(), base.right_inverse_map());

        let z2 = cyclic(2, |a, b| (a + b) % 2);
        assert_eq!(z2.base_element(1).left_inverse_map(), &[1, 0]);
    }

    #[test]
    fn inverse_maps_are_mutually_inverse() {
        let q = cyclic(5, |a, b| (2 * a + 3 * b + 1) % 5);
        let base = q.base_element(2);
        for a in 0..5 {
            assert_eq!(q.op(base.left_inverse(a), a), 2);
            assert_eq!(q.op(a, base.right_inverse(a)), 2);
            assert_eq!(base.right_inverse(base.left_inverse(a)), a);
            assert_eq!(base.left_inverse(base.right_inverse(a)), a);
        }
    }

    #[test]
    fn cosets_of_z4() {
        let z4 = cyclic(4, |a, b| (a + b) % 4);
        let p = z4.coset_partition_from_block(&set(&z4, &["0", "2"])).unwrap();
        assert_eq!(p.blocks(), &[set(&z4, &["0", "2"]), set(&z4, &["1", "3"])]);
        let quotient = z4.quotient(&p);
        assert_eq!(quotient.alphabet().names(), &["[0]", "[1]"]);
        assert_eq!(quotient.rows(), vec![vec![0, 1], vec![1, 0]]);

        assert!(matches!(
            z4.coset_partition_from_block(&set(&z4, &["0", "1"])),
            Err(PartitionError::NotAPartition { .. })
        ));

        let whole = z4.coset_partition_from_block(&set(&z4, &["0", "1", "2", "3"])).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(z4.quotient(&whole).order(), 1);
    }

    #[test]
    fn singleton_quotient_is_a_renaming() {
        let q = cyclic(3, |a, b| (2 * a + 2 * b) % 3);
        let p = CosetPartition::singletons(&q);
        let quotient = q.quotient(&p);
        assert_eq!(quotient.rows(), q.rows());
    }

    #[test]
    fn incompatible_partition_is_rejected() {
        // {0,1},{2,3} under Z4 addition: {0,1}+{0,1} = {0,1,2}
        let z4 = cyclic(4, |a, b| (a + b) % 4);
        let err = CosetPartition::new(&z4, vec![set(&z4, &["0", "1"]), set(&z4, &["2", "3"])]).unwrap_err();
        assert!(matches!(err, PartitionError::NotCompatible { .. }));
        let err = CosetPartition::new(&z4, vec![set(&z4, &["0"]), set(&z4, &["1", "2", "3"])]).unwrap_err();
        assert_eq!(err, PartitionError::UnequalBlocks);
    }
}
