//! Instance corpus shared by the integration tests.
//!
//! Every compatible shift arises as `a → b iff b ∈ θ(a)` for a compatible
//! partition of the quasigroup and a homomorphism `θ` onto its quotient, so
//! enumerating those pairs over all small Latin squares covers the class.

#![allow(dead_code)]

use std::collections::BTreeSet;

use quasishift::{Alphabet, CosetPartition, FiniteQuasigroup, MarkovShift, QuasigroupShift, Symbol, SymbolSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub qs: QuasigroupShift,
}

/// All Latin squares on `0..n`, rows as permutations in lexicographic order.
pub fn latin_squares(n: usize) -> Vec<Vec<Vec<Symbol>>> {
    fn go(n: usize, rows: &mut Vec<Vec<Symbol>>, row: &mut Vec<Symbol>, out: &mut Vec<Vec<Vec<Symbol>>>) {
        if rows.len() == n {
            out.push(rows.clone());
            return;
        }
        if row.len() == n {
            rows.push(std::mem::take(row));
            go(n, rows, row, out);
            *row = rows.pop().unwrap();
            return;
        }
        let col = row.len();
        for s in 0..n {
            if row.contains(&s) || rows.iter().any(|r| r[col] == s) {
                continue;
            }
            row.push(s);
            go(n, rows, row, out);
            row.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Distinct compatible coset partitions, found from every non-empty block.
pub fn compatible_partitions(op: &FiniteQuasigroup) -> Vec<CosetPartition> {
    let n = op.order();
    let mut seen: BTreeSet<Vec<SymbolSet>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let h: SymbolSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if let Ok(p) = op.coset_partition_from_block(&h) {
            if seen.insert(p.blocks().to_vec()) {
                out.push(p);
            }
        }
    }
    out
}

/// Maps `θ: symbols → blocks` with `θ(x • y) = θ(x) ∘ θ(y)` in the
/// quotient, in lexicographic order, at most `limit` of them.
pub fn homomorphisms(op: &FiniteQuasigroup, p: &CosetPartition, limit: usize) -> Vec<Vec<usize>> {
    let quotient = op.quotient(p);
    let n = op.order();
    let k = p.len();
    let mut out = Vec::new();
    let mut theta: Vec<Option<usize>> = vec![None; n];
    fn consistent(op: &FiniteQuasigroup, quotient: &FiniteQuasigroup, theta: &[Option<usize>], x: Symbol) -> bool {
        (0..theta.len()).all(|y| {
            [(x, y), (y, x)].iter().all(|&(a, b)| match (theta[a], theta[b], theta[op.op(a, b)]) {
                (Some(ta), Some(tb), Some(tab)) => quotient.op(ta, tb) == tab,
                _ => true,
            })
        })
    }
    fn go(
        op: &FiniteQuasigroup,
        quotient: &FiniteQuasigroup,
        k: usize,
        limit: usize,
        theta: &mut Vec<Option<usize>>,
        x: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if x == theta.len() {
            out.push(theta.iter().map(|t| t.unwrap()).collect());
            return;
        }
        for v in 0..k {
            theta[x] = Some(v);
            let ok = (0..=x).all(|y| consistent(op, quotient, theta, y));
            if ok {
                go(op, quotient, k, limit, theta, x + 1, out);
            }
            theta[x] = None;
        }
    }
    go(op, &quotient, k, limit, &mut theta, 0, &mut out);
    out
}

/// The shift `a → b iff b ∈ θ(a)` with base `0`, if it is essential and compatible.
pub fn instance_from(op: &FiniteQuasigroup, p: &CosetPartition, theta: &[usize]) -> Option<QuasigroupShift> {
    let shift = MarkovShift::from_fn(op.alphabet().clone(), |a, b| p.block_of(b) == theta[a]).ok()?;
    QuasigroupShift::build(shift, op.clone(), 0).ok()
}

/// Every compatible shift over every Latin square of order at most `max_order`.
pub fn exhaustive_corpus(max_order: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for (i, table) in latin_squares(n).into_iter().enumerate() {
            let op = FiniteQuasigroup::from_table(Alphabet::numeric(n), table).unwrap();
            for (j, p) in compatible_partitions(&op).iter().enumerate() {
                for (k, theta) in homomorphisms(&op, p, usize::MAX).iter().enumerate() {
                    if let Some(qs) = instance_from(&op, p, theta) {
                        out.push(Instance {
                            name: format!("order {n} square {i} partition {j} map {k}"),
                            qs,
                        });
                    }
                }
            }
        }
    }
    out
}

fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random isotopes `γ(α(x) + β(y))` of the cyclic groups of order 5 and 6,
/// each with a random compatible shift structure.
pub fn random_corpus(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(5..=6);
        let (alpha, beta, gamma) = (permutation(&mut rng, n), permutation(&mut rng, n), permutation(&mut rng, n));
        let op = FiniteQuasigroup::from_fn(Alphabet::numeric(n), |x, y| gamma[(alpha[x] + beta[y]) % n]).unwrap();
        let partitions = compatible_partitions(&op);
        let p = partitions.choose(&mut rng).unwrap();
        let homs = homomorphisms(&op, p, 64);
        let Some(theta) = homs.choose(&mut rng) else { continue };
        if let Some(qs) = instance_from(&op, p, theta) {
            out.push(Instance {
                name: format!("random {} (order {n})", out.len()),
                qs,
            });
        }
    }
    out
}

pub fn full_corpus() -> Vec<Instance> {
    let mut all = exhaustive_corpus(4);
    all.extend(random_corpus(200, 0x5eed));
    all
}

/// `a → b` iff `b - a` is even, with addition mod 4.
pub fn z4_coset() -> QuasigroupShift {
    let a = Alphabet::numeric(4);
    let shift = MarkovShift::from_fn(a.clone(), |x, y| (y + 4 - x) % 2 == 0).unwrap();
    let op = FiniteQuasigroup::from_fn(a, |x, y| (x + y) % 4).unwrap();
    QuasigroupShift::build(shift, op, 0).unwrap()
}

/// The Z4-coset shift with `a • b = -(a + b)`: commutative, medial and of period 2.
pub fn z4_coset_reflected() -> QuasigroupShift {
    let a = Alphabet::numeric(4);
    let shift = MarkovShift::from_fn(a.clone(), |x, y| (y + 4 - x) % 2 == 0).unwrap();
    let op = FiniteQuasigroup::from_fn(a, |x, y| (8 - x - y) % 4).unwrap();
    QuasigroupShift::build(shift, op, 0).unwrap()
}

pub fn full_shift(n: usize) -> QuasigroupShift {
    let a = Alphabet::numeric(n);
    let op = FiniteQuasigroup::from_fn(a.clone(), |x, y| (x + y) % n).unwrap();
    QuasigroupShift::build(MarkovShift::full(a), op, 0).unwrap()
}

/// `a → a + 1 mod 3` with `a • b = -(a + b)`.
pub fn rotation3() -> QuasigroupShift {
    let a = Alphabet::numeric(3);
    let shift = MarkovShift::from_fn(a.clone(), |x, y| y == (x + 1) % 3).unwrap();
    let op = FiniteQuasigroup::from_fn(a, |x, y| (6 - x - y) % 3).unwrap();
    QuasigroupShift::build(shift, op, 0).unwrap()
}
