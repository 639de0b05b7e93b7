//! Markov shifts carrying a 1-block quasigroup operation.
//!
//! The crate validates the algebraic structure of such shifts, computes the
//! quotient quasigroups induced on follower, predecessor and h-classes,
//! decomposes a shift into a finite factor times a full shift, applies state
//! splittings and amalgamations, and checks every construction against
//! brute-force oracles on bounded-length words.

pub mod alphabet;
pub mod block_op;
pub mod chains;
pub mod check;
pub mod code;
pub mod decompose;
pub mod moves;
pub mod qgshift;
pub mod quasigroup;
pub mod shift;

pub use alphabet::{Alphabet, AlphabetError, Symbol, SymbolSet, Word};
pub use block_op::{check_block_operation, BlockOpError, BlockOperationReport, BlockOperationRule};
pub use chains::{chain_component, coset_cover, ChainComponent, ChainError, ChainInstance, Hypothesis};
pub use check::{all_passed, CheckResult};
pub use code::{compose_codes, BlockCode, BlockCodeError};
pub use decompose::{
    block_bound_check, entropy_checks, factorize, kitchens_decompose, verify_isomorphism, BlockBoundReport,
    DecomposeError, Decomposition, IsomorphismReport, OperationPair, SectionPolicy, Step, VerifyError,
};
pub use moves::{
    apply_move, find_isomorphism, replay, round_trip_check, search_move_sequence, valid_moves, validate_move,
    InvalidMoveReason, Move, MoveError, MoveKind, MoveOutcome, NotFoundReason, RoundTripError, SearchError,
};
pub use qgshift::{
    structural_checks, FollowerQuotient, InducedQuotients, PhiSplit, QgShiftError, QuasigroupShift, Section,
};
pub use quasigroup::{
    validate_latin_square, BaseElement, CosetPartition, FiniteQuasigroup, PartitionError, QuasigroupError,
};
pub use shift::{higher_block_presentation, HigherBlock, MarkovShift, ShiftError, ShiftSpace, SftPresentation};
