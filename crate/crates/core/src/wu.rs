//! Sphere presentations `⟨y₀,…,y_{n−1} | y₀; …; y_{n−1}; (y₀⋯y_{n−1})⁻¹⟩`,
//! the bracket generators of their symmetric commutator subgroups, and the
//! explicit homotopy generator words in low degrees.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::sequences::{ColoredPresentation, IdentitySequence};
use crate::words::{Alphabet, Sign, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WuError {
    #[error("n must be at least 1, got {0}")]
    RankTooSmall(usize),
    #[error("brackets using all {symbols} symbols need length at least {symbols}, got {max_len}")]
    LengthTooSmall { symbols: usize, max_len: usize },
    #[error("no generator word is known for degree {0}; expected 3, 4 or 5")]
    UnsupportedDegree(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone)]
pub struct WuInstance {
    pub n: usize,
    pub presentation: Arc<ColoredPresentation>,
}

impl WuInstance {
    /// The element `y₋₁ = (y₀⋯y_{n−1})⁻¹`.
    pub fn y_minus_one(&self) -> Word {
        self.presentation.class(self.n + 1).unwrap()[0].clone()
    }

    /// One item of each class with trivial conjugators; its product is
    /// `y₀⋯y_{n−1}·(y₀⋯y_{n−1})⁻¹ = 1`.
    pub fn generator_sequence(&self) -> IdentitySequence {
        let tags: Vec<_> = (1..=self.n + 1).map(|c| (c, 1, Sign::Pos)).collect();
        IdentitySequence::from_tags(self.presentation.clone(), &tags)
            .expect("every class has one relator")
    }
}

fn y_alphabet(n: usize) -> Arc<Alphabet> {
    Alphabet::new((0..n).map(|i| format!("y{i}"))).expect("valid names")
}

pub fn wu_presentation(n: usize) -> Result<WuInstance, WuError> {
    if n < 1 {
        return Err(WuError::RankTooSmall(n));
    }
    let alphabet = y_alphabet(n);
    let gens: Vec<Word> = (0..n).map(|i| Word::generator(&alphabet, i)).collect();
    let mut product = Word::identity(&alphabet);
    for g in &gens {
        product = &product * g;
    }
    let mut classes: Vec<Vec<Word>> = gens.into_iter().map(|g| vec![g]).collect();
    classes.push(vec![product.inverse()]);
    let presentation = ColoredPresentation::new(alphabet, classes).expect("valid presentation");
    Ok(WuInstance {
        n,
        presentation: Arc::new(presentation),
    })
}

/// A bracket entry: symbol index `0` is `y₋₁`, index `i ≥ 1` is `y_{i−1}`.
pub type BracketTuple = Vec<(usize, Sign)>;

/// All `(symbol, sign)` tuples of length `t` over the `n + 1` symbols that
/// use every symbol at least once, in lexicographic order (`y₋₁ < y₀ < …`,
/// `− < +`).
pub fn bracket_tuples(n: usize, t: usize) -> Vec<BracketTuple> {
    let symbols = n + 1;
    let choices = 2 * symbols;
    let mut out = Vec::new();
    let mut digits = vec![0usize; t];
    if t == 0 {
        return out;
    }
    loop {
        let mut seen = vec![false; symbols];
        for &d in &digits {
            seen[d / 2] = true;
        }
        if seen.iter().all(|&s| s) {
            out.push(
                digits
                    .iter()
                    .map(|&d| (d / 2, if d % 2 == 0 { Sign::Neg } else { Sign::Pos }))
                    .collect(),
            );
        }
        // Odometer increment, last position fastest.
        let mut i = t;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < choices {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Distinct nonempty left-normed brackets `[z₁^{ε₁}, …, z_t^{ε_t}]` with
/// `t ≤ max_len` in which every symbol of `{y₋₁, …, y_{n−1}}` occurs.
/// Ordered by length, then by tuple; the first spelling of a word wins.
pub fn wu_bracket_generators(n: usize, max_len: usize) -> Result<Vec<Word>, WuError> {
    let wu = wu_presentation(n)?;
    if max_len < n + 1 {
        return Err(WuError::LengthTooSmall {
            symbols: n + 1,
            max_len,
        });
    }
    let alphabet = wu.presentation.alphabet().clone();
    let mut symbols = vec![wu.y_minus_one()];
    symbols.extend((0..n).map(|i| Word::generator(&alphabet, i)));
    let inverses: Vec<Word> = symbols.iter().map(|s| s.inverse()).collect();

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in n + 1..=max_len {
        for tuple in bracket_tuples(n, t) {
            let entries: Vec<Word> = tuple
                .iter()
                .map(|&(s, sign)| match sign {
                    Sign::Pos => symbols[s].clone(),
                    Sign::Neg => inverses[s].clone(),
                })
                .collect();
            let w = Word::left_normed_commutator(&entries)?;
            if !w.is_empty() && seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Words in Milnor's construction for the generators of `π_k(S²)`,
/// `k ∈ {3, 4, 5}`.
pub fn sphere_generator_word(k: usize) -> Result<Word, WuError> {
    match k {
        3 => {
            let a = Alphabet::numbered("x", 2);
            Ok(Word::parse("[x1,x2]", &a)?)
        }
        4 => Ok(Word::parse("[[y0,y1],[y0,y1 y2]]", &y_alphabet(3))?),
        5 => Ok(Word::parse(
            "[[[y0,y1],[y0,y1 y2]],[[y0,y1],[y0,y1 y2 y3]]]",
            &y_alphabet(4),
        )?),
        other => Err(WuError::UnsupportedDegree(other)),
    }
}
