//! Free groups, identity sequences over colored presentations, the maps
//! `Λ` into symmetric commutator quotients, and finite oracles for checking
//! congruences modulo products of commutator subgroups.

pub mod campaign;
pub mod functors;
pub mod grammar;
pub mod lambda;
pub mod oracle;
pub mod random;
pub mod sequences;
pub mod words;
pub mod wu;

pub use lambda::{cross_effect3, denominator_factors, lambda2, lambda3, LambdaValue};
pub use sequences::{
    BlockDecomposition, ColoredPresentation, ConjugatedRelator, IdentitySequence, PeifferMove,
    SequenceError,
};
pub use words::{Alphabet, Sign, Word, WordError};
