//! State splittings and amalgamations that keep a 1-block quasigroup
//! operation, and a bounded search for sequences of them.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol, SymbolSet};
use crate::block_op::BlockOperationRule;
use crate::code::BlockCode;
use crate::decompose::{verify_isomorphism, IsomorphismReport, OperationPair, VerifyError};
use crate::qgshift::{QgShiftError, QuasigroupShift};
use crate::quasigroup::{CosetPartition, FiniteQuasigroup, PartitionError};
use crate::shift::MarkovShift;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    SplitSuccessors,
    SplitPredecessors,
    /// Merge cosets whose members have common predecessors and disjoint successors.
    AmalgPredCommonSuccDisjoint,
    /// Merge cosets whose members have common successors and disjoint predecessors.
    AmalgSuccCommonPredDisjoint,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] = [
        MoveKind::SplitSuccessors,
        MoveKind::SplitPredecessors,
        MoveKind::AmalgPredCommonSuccDisjoint,
        MoveKind::AmalgSuccCommonPredDisjoint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::SplitSuccessors => "split_successors",
            MoveKind::SplitPredecessors => "split_predecessors",
            MoveKind::AmalgPredCommonSuccDisjoint => "amalg_pred_common_succ_disjoint",
            MoveKind::AmalgSuccCommonPredDisjoint => "amalg_succ_common_pred_disjoint",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn is_split(self) -> bool {
        matches!(self, MoveKind::SplitSuccessors | MoveKind::SplitPredecessors)
    }

    /// Whether the block lives in a follower set (rather than a predecessor set).
    fn uses_followers(self) -> bool {
        matches!(self, MoveKind::SplitSuccessors | MoveKind::AmalgPredCommonSuccDisjoint)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An elementary move: `block ⊆ F(anchor)` or `block ⊆ P(anchor)` depending on the kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub anchor: Symbol,
    pub block: SymbolSet,
}

impl Move {
    pub fn new(kind: MoveKind, anchor: Symbol, block: impl IntoIterator<Item = Symbol>) -> Self {
        Move {
            kind,
            anchor,
            block: block.into_iter().collect(),
        }
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        format!(
            "{} at {} with {{{}}}",
            self.kind,
            alphabet.name(self.anchor),
            alphabet.set_names(&self.block).join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidMoveReason {
    #[error("the block is empty")]
    EmptyBlock,
    #[error("the block is not inside the follower set of the anchor")]
    BlockNotInFollowerSet,
    #[error("the block is not inside the predecessor set of the anchor")]
    BlockNotInPredecessorSet,
    #[error("the cosets of the block are not a compatible partition: {0}")]
    NotAPartition(#[from] PartitionError),
    #[error("the neighbour set of {symbol} is not a union of cosets")]
    NotUnionOfCosets { symbol: String },
    #[error("coset {coset} meets P({symbol}) in more than one symbol")]
    PredecessorOverlap { coset: String, symbol: String },
    #[error("coset {coset} meets F({symbol}) in more than one symbol")]
    SuccessorOverlap { coset: String, symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("invalid move: {reason}")]
    InvalidMove { reason: InvalidMoveReason },
    #[error("the moved shift fails to build: {0}")]
    Build(#[from] QgShiftError),
}

impl From<InvalidMoveReason> for MoveError {
    fn from(reason: InvalidMoveReason) -> Self {
        MoveError::InvalidMove { reason }
    }
}

/// Result of [`apply_move`].
#[derive(Debug, Clone)]
pub struct MoveOutcome {
    pub shift: QuasigroupShift,
    pub forward: BlockCode,
    pub backward: BlockCode,
}

/// Names items, sorts them by name and returns the alphabet, the items by
/// symbol and the reverse lookup.
fn labelled<T: Clone + Ord>(
    items: Vec<T>,
    name: impl Fn(&T) -> String,
) -> (Alphabet, Vec<T>, BTreeMap<T, Symbol>) {
    let names: Vec<String> = items.iter().map(&name).collect();
    let (alphabet, positions) = Alphabet::with_positions(&names).expect("labels are distinct");
    let mut by_symbol = items.clone();
    for (item, &p) in items.into_iter().zip(&positions) {
        by_symbol[p] = item;
    }
    let index = by_symbol.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    (alphabet, by_symbol, index)
}

fn neighbours(shift: &MarkovShift, followers: bool, a: Symbol) -> &SymbolSet {
    if followers {
        shift.followers(a)
    } else {
        shift.predecessors(a)
    }
}

/// Validates `m` against `qs` and returns the coset partition of its block.
pub fn validate_move(qs: &QuasigroupShift, m: &Move) -> Result<CosetPartition, InvalidMoveReason> {
    if m.block.is_empty() {
        return Err(InvalidMoveReason::EmptyBlock);
    }
    let shift = qs.shift();
    let alphabet = qs.alphabet();
    let forward = m.kind.uses_followers();
    if !m.block.is_subset(neighbours(shift, forward, m.anchor)) {
        return Err(if forward {
            InvalidMoveReason::BlockNotInFollowerSet
        } else {
            InvalidMoveReason::BlockNotInPredecessorSet
        });
    }
    let partition = qs.op().coset_partition_from_block(&m.block)?;
    for g in alphabet.symbols() {
        let set = neighbours(shift, forward, g);
        let straddles = partition
            .blocks()
            .iter()
            .any(|c| !c.is_subset(set) && !c.is_disjoint(set));
        if straddles {
            return Err(InvalidMoveReason::NotUnionOfCosets {
                symbol: alphabet.name(g).to_string(),
            });
        }
    }
    if !m.kind.is_split() {
        for c in partition.blocks() {
            for x in alphabet.symbols() {
                if c.intersection(neighbours(shift, !forward, x)).count() > 1 {
                    let coset = alphabet.set_label(c);
                    let symbol = alphabet.name(x).to_string();
                    return Err(if forward {
                        InvalidMoveReason::PredecessorOverlap { coset, symbol }
                    } else {
                        InvalidMoveReason::SuccessorOverlap { coset, symbol }
                    });
                }
            }
        }
    }
    Ok(partition)
}

/// Applies an elementary move, returning the new shift and the codes both ways.
///
/// Splittings produce pairs `(g, c)` with `c` a coset inside `F(g)` (or
/// `P(g)`); the forward code has width 2 and the backward code forgets `c`.
/// Amalgamations collapse each coset to one symbol; the forward code has
/// width 1 and the backward code reads two symbols to recover the member.
pub fn apply_move(qs: &QuasigroupShift, m: &Move) -> Result<MoveOutcome, MoveError> {
    let partition = validate_move(qs, m)?;
    if m.kind.is_split() {
        split(qs, m.kind, &partition)
    } else {
        amalgamate(qs, m.kind, &partition)
    }
}

fn split(qs: &QuasigroupShift, kind: MoveKind, partition: &CosetPartition) -> Result<MoveOutcome, MoveError> {
    let shift = qs.shift();
    let alphabet = qs.alphabet();
    let forward_dir = kind == MoveKind::SplitSuccessors;
    let pairs: Vec<(Symbol, usize)> = alphabet
        .symbols()
        .flat_map(|g| {
            (0..partition.len())
                .filter(move |&c| partition.block(c).is_subset(neighbours(shift, forward_dir, g)))
                .map(move |c| (g, c))
        })
        .collect();
    let (new_alphabet, by_symbol, index) = labelled(pairs, |&(g, c)| {
        format!("({},{})", alphabet.name(g), alphabet.set_label(partition.block(c)))
    });
    let quotient = qs.op().quotient(partition);
    let new_shift = MarkovShift::from_fn(new_alphabet.clone(), |u, v| {
        let ((g, c), (g2, c2)) = (by_symbol[u], by_symbol[v]);
        if forward_dir {
            partition.block(c).contains(&g2)
        } else {
            partition.block(c2).contains(&g)
        }
    })
    .expect("split shifts are essential");
    let op = FiniteQuasigroup::from_fn(new_alphabet.clone(), |u, v| {
        let ((g, c), (g2, c2)) = (by_symbol[u], by_symbol[v]);
        index[&(qs.op().op(g, g2), quotient.op(c, c2))]
    })
    .expect("coordinatewise product of quasigroups");
    let e = qs.e();
    let base = (0..by_symbol.len()).find(|&u| by_symbol[u].0 == e).expect("every symbol has a pair");
    let mut rule = BTreeMap::new();
    for g in alphabet.symbols() {
        for &h in shift.followers(g) {
            let target = if forward_dir {
                index[&(g, partition.block_of(h))]
            } else {
                index[&(h, partition.block_of(g))]
            };
            rule.insert(vec![g, h], target);
        }
    }
    let (memory, anticipation) = if forward_dir { (0, 1) } else { (1, 0) };
    let forward = BlockCode::new(alphabet.clone(), new_alphabet.clone(), memory, anticipation, rule)
        .expect("rule over allowed 2-blocks");
    let backward = BlockCode::one_block(new_alphabet, alphabet.clone(), |u| by_symbol[u].0);
    Ok(MoveOutcome {
        shift: QuasigroupShift::build(new_shift, op, base)?,
        forward,
        backward,
    })
}

fn amalgamate(qs: &QuasigroupShift, kind: MoveKind, partition: &CosetPartition) -> Result<MoveOutcome, MoveError> {
    let shift = qs.shift();
    let alphabet = qs.alphabet();
    let forward_dir = kind == MoveKind::AmalgPredCommonSuccDisjoint;
    // Block indices are already ordered by label.
    let new_alphabet = Alphabet::new(partition.labels(alphabet)).expect("labels are distinct");
    // the member of `from` whose neighbours contain the whole of `to`
    let member = |from: usize, to: usize| {
        partition
            .block(from)
            .iter()
            .copied()
            .find(|&h| partition.block(to).is_subset(neighbours(shift, forward_dir, h)))
    };
    let new_shift = MarkovShift::from_fn(new_alphabet.clone(), |c, c2| {
        if forward_dir {
            member(c, c2).is_some()
        } else {
            member(c2, c).is_some()
        }
    })
    .expect("amalgamated shifts are essential");
    let op = qs.op().quotient(partition);
    let forward = BlockCode::one_block(alphabet.clone(), new_alphabet.clone(), |g| partition.block_of(g));
    let mut rule = BTreeMap::new();
    for c in new_alphabet.symbols() {
        for &c2 in new_shift.followers(c) {
            let h = if forward_dir { member(c, c2) } else { member(c2, c) };
            rule.insert(vec![c, c2], h.expect("transition has a witness"));
        }
    }
    let (memory, anticipation) = if forward_dir { (0, 1) } else { (1, 0) };
    let backward = BlockCode::new(new_alphabet, alphabet.clone(), memory, anticipation, rule)
        .expect("rule over allowed 2-blocks");
    Ok(MoveOutcome {
        shift: QuasigroupShift::build(new_shift, op, partition.block_of(qs.e()))?,
        forward,
        backward,
    })
}

/// Applies `m` and checks that the two codes are mutually inverse
/// conjugacies intertwining the operations, on words of length at most `max_len`.
pub fn round_trip_check(qs: &QuasigroupShift, m: &Move, max_len: usize) -> Result<IsomorphismReport, RoundTripError> {
    let out = apply_move(qs, m)?;
    let source = BlockOperationRule::from_quasigroup(qs.op());
    let target = BlockOperationRule::from_quasigroup(out.shift.op());
    Ok(verify_isomorphism(
        &out.forward,
        Some(&out.backward),
        qs.shift(),
        out.shift.shift(),
        Some(OperationPair {
            source: &source,
            target: &target,
        }),
        max_len,
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundTripError {
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Every valid move on `qs`, ordered by kind, anchor, then block.
pub fn valid_moves(qs: &QuasigroupShift) -> Vec<Move> {
    let mut out = Vec::new();
    for kind in MoveKind::ALL {
        for anchor in qs.alphabet().symbols() {
            let pool: Vec<Symbol> = neighbours(qs.shift(), kind.uses_followers(), anchor)
                .iter()
                .copied()
                .collect();
            let mut blocks: Vec<Vec<Symbol>> = (1u32..1 << pool.len())
                .map(|mask| {
                    pool.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &s)| s)
                        .collect()
                })
                .collect();
            blocks.sort();
            for block in blocks {
                let m = Move::new(kind, anchor, block);
                if validate_move(qs, &m).is_ok() {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// A bijection `a-symbol ↦ b-symbol` preserving transitions and the
/// operation, if one exists.
pub fn find_isomorphism(a: &QuasigroupShift, b: &QuasigroupShift) -> Option<Vec<Symbol>> {
    let n = a.alphabet().len();
    if n != b.alphabet().len() || a.shift().transition_count() != b.shift().transition_count() {
        return None;
    }
    let signature = |qs: &QuasigroupShift, s: Symbol| {
        let shift = qs.shift();
        let op = qs.op();
        let idempotent = op.op(s, s) == s;
        let squares = (0..n).filter(|&x| op.op(x, x) == s).count();
        (shift.followers(s).len(), shift.predecessors(s).len(), shift.allows(s, s), idempotent, squares)
    };
    let sig_a: Vec<_> = (0..n).map(|s| signature(a, s)).collect();
    let sig_b: Vec<_> = (0..n).map(|s| signature(b, s)).collect();
    let (mut sorted_a, mut sorted_b) = (sig_a.clone(), sig_b.clone());
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return None;
    }

    struct Ctx<'a> {
        a: &'a QuasigroupShift,
        b: &'a QuasigroupShift,
        sig_a: Vec<(usize, usize, bool, bool, usize)>,
        sig_b: Vec<(usize, usize, bool, bool, usize)>,
    }

    /// Assigns `x ↦ y` and closes under the operation; false on conflict.
    fn assign(ctx: &Ctx, map: &mut [Option<Symbol>], inv: &mut [Option<Symbol>], x: Symbol, y: Symbol) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match (map[x], inv[y]) {
                (Some(old), _) if old == y => continue,
                (None, None) if ctx.sig_a[x] == ctx.sig_b[y] => {}
                _ => return false,
            }
            map[x] = Some(y);
            inv[y] = Some(x);
            let assigned: Vec<(Symbol, Symbol)> = map
                .iter()
                .enumerate()
                .filter_map(|(s, t)| t.map(|t| (s, t)))
                .collect();
            for &(s, t) in &assigned {
                if ctx.a.shift().allows(x, s) != ctx.b.shift().allows(y, t)
                    || ctx.a.shift().allows(s, x) != ctx.b.shift().allows(t, y)
                {
                    return false;
                }
                queue.push((ctx.a.op().op(x, s), ctx.b.op().op(y, t)));
                queue.push((ctx.a.op().op(s, x), ctx.b.op().op(t, y)));
            }
        }
        true
    }

    fn search(ctx: &Ctx, map: Vec<Option<Symbol>>, inv: Vec<Option<Symbol>>) -> Option<Vec<Symbol>> {
        let Some(x) = map.iter().position(Option::is_none) else {
            return Some(map.into_iter().map(Option::unwrap).collect());
        };
        for y in 0..inv.len() {
            if inv[y].is_some() {
                continue;
            }
            let (mut m, mut i) = (map.clone(), inv.clone());
            if assign(ctx, &mut m, &mut i, x, y) {
                if let Some(found) = search(ctx, m, i) {
                    return Some(found);
                }
            }
        }
        None
    }

    let ctx = Ctx { a, b, sig_a, sig_b };
    search(&ctx, vec![None; n], vec![None; n])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFoundReason {
    /// The entropies differ, so no sequence exists at any depth.
    Nonisomorphic,
    /// The bounded search ran out; this proves nothing.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no sequence of moves found within depth {depth} ({reason:?})")]
    NotFoundWithinDepth { depth: usize, reason: NotFoundReason },
}

/// Breadth-first search for a shortest sequence of moves from `a` to a
/// shift isomorphic to `b`. Moves are tried in the order of [`valid_moves`];
/// states larger than `max(8, |a|, |b|)` symbols and states isomorphic to
/// one already seen are not expanded.
pub fn search_move_sequence(a: &QuasigroupShift, b: &QuasigroupShift, max_depth: usize) -> Result<Vec<Move>, SearchError> {
    let entropy_differs = match (a.shift().exact_entropy_symbolic(), b.shift().exact_entropy_symbolic()) {
        (Some(x), Some(y)) => x != y,
        _ => (a.shift().entropy() - b.shift().entropy()).abs() > 1e-9,
    };
    if entropy_differs {
        return Err(SearchError::NotFoundWithinDepth {
            depth: max_depth,
            reason: NotFoundReason::Nonisomorphic,
        });
    }
    if find_isomorphism(a, b).is_some() {
        return Ok(Vec::new());
    }
    let cap = 8.max(a.alphabet().len()).max(b.alphabet().len());
    let mut seen: Vec<QuasigroupShift> = vec![a.clone()];
    let mut frontier: Vec<(QuasigroupShift, Vec<Move>)> = vec![(a.clone(), Vec::new())];
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for (state, path) in &frontier {
            for m in valid_moves(state) {
                let Ok(out) = apply_move(state, &m) else { continue };
                let reached = out.shift;
                if reached.alphabet().len() > cap || seen.iter().any(|s| find_isomorphism(s, &reached).is_some()) {
                    continue;
                }
                let mut path = path.clone();
                path.push(m);
                if find_isomorphism(&reached, b).is_some() {
                    return Ok(path);
                }
                seen.push(reached.clone());
                next.push((reached, path));
            }
        }
        frontier = next;
    }
    Err(SearchError::NotFoundWithinDepth {
        depth: max_depth,
        reason: NotFoundReason::Exhausted,
    })
}

/// Replays `moves` from `qs`.
pub fn replay(qs: &QuasigroupShift, moves: &[Move]) -> Result<QuasigroupShift, MoveError> {
    moves
        .iter()
        .try_fold(qs.clone(), |state, m| apply_move(&state, m).map(|out| out.shift))
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn entropy(qs: &QuasigroupShift) -> Option<usize> {
        qs.shift().exact_entropy_symbolic()
    }

    #[test]
    fn z4_split_by_whole_follower_set_is_a_renaming() {
        let qs = z4_coset();
        let m = Move::new(MoveKind::SplitSuccessors, 0, [0, 2]);
        let out = apply_move(&qs, &m).unwrap();
        assert_eq!(out.shift.alphabet().names(), &["(0,[0])", "(1,[1])", "(2,[0])", "(3,[1])"]);
        assert!(find_isomorphism(&qs, &out.shift).is_some());
        assert_eq!((out.forward.memory(), out.forward.anticipation(), out.backward.width()), (0, 1, 1));
        round_trip_check(&qs, &m, 8).unwrap();
    }

    #[test]
    fn z4_singleton_split_is_the_two_block_presentation() {
        let qs = z4_coset();
        let out = apply_move(&qs, &Move::new(MoveKind::SplitSuccessors, 0, [0])).unwrap();
        let (two_block, _) = qs.higher_block(2).unwrap();
        assert_eq!(out.shift.alphabet().len(), 8);
        assert!(find_isomorphism(&out.shift, &two_block).is_some());
    }

    #[test]
    fn amalgamation_with_predecessor_overlap_is_rejected() {
        let err = apply_move(&z4_coset(), &Move::new(MoveKind::AmalgPredCommonSuccDisjoint, 0, [0, 2])).unwrap_err();
        assert!(matches!(
            err,
            MoveError::InvalidMove {
                reason: InvalidMoveReason::PredecessorOverlap { .. }
            }
        ));
    }

    #[test]
    fn invalid_blocks() {
        let qs = z4_coset();
        let reason = |m: Move| match apply_move(&qs, &m).unwrap_err() {
            MoveError::InvalidMove { reason } => reason,
            e => panic!("{e}"),
        };
        assert_eq!(reason(Move::new(MoveKind::SplitSuccessors, 0, [])), InvalidMoveReason::EmptyBlock);
        assert_eq!(
            reason(Move::new(MoveKind::SplitSuccessors, 0, [1])),
            InvalidMoveReason::BlockNotInFollowerSet
        );
        assert_eq!(
            reason(Move::new(MoveKind::SplitPredecessors, 1, [0])),
            InvalidMoveReason::BlockNotInPredecessorSet
        );
    }

    #[test]
    fn singleton_amalgamation_is_the_identity() {
        for qs in [z4_coset(), full2()] {
            let e = qs.e();
            let anchor = *qs.shift().predecessors(e).first().unwrap();
            let m = Move::new(MoveKind::AmalgPredCommonSuccDisjoint, anchor, [e]);
            let out = apply_move(&qs, &m).unwrap();
            assert_eq!(out.shift.shift().matrix(), qs.shift().matrix());
            assert_eq!(out.shift.op().rows(), qs.op().rows());
            round_trip_check(&qs, &m, 8).unwrap();
        }
    }

    #[test]
    fn split_then_amalgamate_returns() {
        let qs = full2();
        let m = Move::new(MoveKind::SplitSuccessors, 0, [0, 1]);
        let out = apply_move(&qs, &m).unwrap();
        assert_eq!(out.shift.alphabet().len(), 2);
        round_trip_check(&qs, &m, 8).unwrap();
        let split = apply_move(&qs, &Move::new(MoveKind::SplitSuccessors, 0, [0])).unwrap();
        assert_eq!(split.shift.alphabet().len(), 4);
        let moves = valid_moves(&split.shift);
        let back = moves
            .iter()
            .filter(|m| !m.kind.is_split())
            .find_map(|m| apply_move(&split.shift, m).ok().filter(|o| o.shift.alphabet().len() == 2))
            .expect("an amalgamation undoes the split");
        assert!(find_isomorphism(&back.shift, &qs).is_some());
    }

    #[test]
    fn every_valid_move_round_trips() {
        for qs in [z4_coset(), full2()] {
            let before = entropy(&qs);
            for m in valid_moves(&qs) {
                let out = apply_move(&qs, &m).unwrap();
                assert_eq!(entropy(&out.shift), before, "{m:?}");
                round_trip_check(&qs, &m, 8).unwrap();
            }
        }
    }

    #[test]
    fn search_examples() {
        let qs = z4_coset();
        assert_eq!(search_move_sequence(&qs, &qs, 3).unwrap(), vec![]);
        let (two_block, _) = qs.higher_block(2).unwrap();
        let path = search_move_sequence(&qs, &two_block, 2).unwrap();
        assert!(!path.is_empty() && path.len() <= 2);
        let end = replay(&qs, &path).unwrap();
        assert!(find_isomorphism(&end, &two_block).is_some());
        let rotation = {
            let a = Alphabet::numeric(3);
            let shift = MarkovShift::from_fn(a.clone(), |x, y| y == (x + 1) % 3).unwrap();
            let op = FiniteQuasigroup::from_fn(a, |x, y| (6 - x - y) % 3).unwrap();
            QuasigroupShift::build(shift, op, 0).unwrap()
        };
        assert_eq!(
            search_move_sequence(&full2(), &rotation, 10).unwrap_err(),
            SearchError::NotFoundWithinDepth {
                depth: 10,
                reason: NotFoundReason::Nonisomorphic
            }
        );
    }

    #[test]
    fn isomorphism_respects_the_operation() {
        let a = Alphabet::numeric(4);
        let shift = MarkovShift::full(a.clone());
        let z4 = QuasigroupShift::build(shift.clone(), FiniteQuasigroup::from_fn(a.clone(), |x, y| (x + y) % 4).unwrap(), 0)
            .unwrap();
        let klein = QuasigroupShift::build(shift, FiniteQuasigroup::from_fn(a, |x, y| x ^ y).unwrap(), 0).unwrap();
        assert!(find_isomorphism(&z4, &klein).is_none());
        assert!(find_isomorphism(&z4, &z4.clone()).is_some());
    }
}
