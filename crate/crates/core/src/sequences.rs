//! Identity sequences over a colored presentation and the Peiffer moves on them.
//!
//! An item `(class:relator ± @ w)` stands for the conjugated relator `(t^±1)^w`
//! where `t` is relator number `relator` of class `class` (both 1-based). A
//! sequence is an identity sequence when the ordered product of its realized
//! items is trivial in the free group.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::words::{same_alphabet, Alphabet, Sign, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("a colored presentation needs at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("relator {relator} of class {class} is the empty word")]
    EmptyRelator { class: usize, relator: usize },
    #[error("class {0} does not exist")]
    ClassOutOfRange(usize),
    #[error("class {class} has no relator {relator}")]
    RelatorOutOfRange { class: usize, relator: usize },
    #[error("position {pos} out of range for a sequence of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("items at positions {pos} and {} are not mutually inverse", pos + 1)]
    NotInversePair { pos: usize },
    #[error("sequences belong to different presentations")]
    PresentationMismatch,
    #[error("the sequence is not an identity sequence")]
    NotIdentity,
    #[error("expected a presentation with {expected} classes, found {found}")]
    WrongClassCount { expected: String, found: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An alphabet together with `n ≥ 2` classes of relators. Class `i` normally
/// generates the normal subgroup `Rᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredPresentation {
    alphabet: Arc<Alphabet>,
    classes: Vec<Vec<Word>>,
}

impl ColoredPresentation {
    pub fn new(alphabet: Arc<Alphabet>, classes: Vec<Vec<Word>>) -> Result<Self, SequenceError> {
        if classes.len() < 2 {
            return Err(SequenceError::TooFewClasses(classes.len()));
        }
        for (ci, class) in classes.iter().enumerate() {
            for (ri, r) in class.iter().enumerate() {
                if !same_alphabet(r.alphabet(), &alphabet) {
                    return Err(WordError::AlphabetMismatch.into());
                }
                if r.is_empty() {
                    return Err(SequenceError::EmptyRelator {
                        class: ci + 1,
                        relator: ri + 1,
                    });
                }
            }
        }
        Ok(ColoredPresentation { alphabet, classes })
    }

    /// Parses relator classes written in the word grammar.
    pub fn from_text(
        alphabet: Arc<Alphabet>,
        classes: &[&[&str]],
    ) -> Result<Arc<Self>, SequenceError> {
        let classes = classes
            .iter()
            .map(|c| c.iter().map(|r| Word::parse(r, &alphabet)).collect())
            .collect::<Result<Vec<Vec<Word>>, _>>()?;
        Ok(Arc::new(Self::new(alphabet, classes)?))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Relators of class `class` (1-based).
    pub fn class(&self, class: usize) -> Option<&[Word]> {
        class
            .checked_sub(1)
            .and_then(|i| self.classes.get(i))
            .map(|c| c.as_slice())
    }

    pub fn classes(&self) -> &[Vec<Word>] {
        &self.classes
    }

    pub fn relator(&self, class: usize, relator: usize) -> Result<&Word, SequenceError> {
        let c = self.class(class).ok_or(SequenceError::ClassOutOfRange(class))?;
        relator
            .checked_sub(1)
            .and_then(|i| c.get(i))
            .ok_or(SequenceError::RelatorOutOfRange { class, relator })
    }

    /// All `(class, relator)` tags in declaration order.
    pub fn tags(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| (0..c.len()).map(move |ri| (ci + 1, ri + 1)))
    }
}

impl fmt::Display for ColoredPresentation {
    /// The presentation file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .alphabet
            .generators()
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        writeln!(f, "gens: {}", names.join(" "))?;
        for class in &self.classes {
            let rels: Vec<String> = class.iter().map(|r| r.to_string()).collect();
            writeln!(f, "class: {}", rels.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugatedRelator {
    pub class: usize,
    pub relator: usize,
    pub exponent: Sign,
    pub conjugator: Word,
}

impl ConjugatedRelator {
    pub fn new(class: usize, relator: usize, exponent: Sign, conjugator: Word) -> Self {
        ConjugatedRelator {
            class,
            relator,
            exponent,
            conjugator,
        }
    }

    /// The same relator with the opposite exponent and the same conjugator.
    pub fn inverse(&self) -> Self {
        ConjugatedRelator {
            exponent: self.exponent.flip(),
            ..self.clone()
        }
    }

    /// This item conjugated by `g`: the conjugator becomes `w·g`.
    pub fn conjugated_by(&self, g: &Word) -> Self {
        ConjugatedRelator {
            conjugator: &self.conjugator * g,
            ..self.clone()
        }
    }

    /// The word `(t^±1)^w`.
    pub fn realize(&self, pres: &ColoredPresentation) -> Result<Word, SequenceError> {
        let r = pres.relator(self.class, self.relator)?;
        let base = match self.exponent {
            Sign::Pos => r.clone(),
            Sign::Neg => r.inverse(),
        };
        Ok(base.conjugate(&self.conjugator)?)
    }
}

impl fmt::Display for ConjugatedRelator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let conj = if self.conjugator.is_empty() {
            "e".to_string()
        } else {
            self.conjugator.to_string()
        };
        write!(
            f,
            "({}:{} {} @ {})",
            self.class, self.relator, self.exponent, conj
        )
    }
}

/// One of the five Peiffer operations. Positions are 0-based; a move at
/// `pos` acts on the items `pos` and `pos + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeifferMove {
    /// (i) respell a conjugator. Conjugators are stored reduced, so this is a no-op.
    Respell { pos: usize },
    /// (ii) delete two consecutive mutually inverse items.
    Delete { pos: usize },
    /// (iii) insert `item` followed by its inverse before position `pos`.
    Insert { pos: usize, item: ConjugatedRelator },
    /// (iv) `(cᵢ, cᵢ₊₁) → (cᵢ₊₁, cᵢ^{cᵢ₊₁})`.
    Exchange { pos: usize },
    /// (v) `(cᵢ, cᵢ₊₁) → (cᵢ₊₁^{cᵢ⁻¹}, cᵢ)`.
    ExchangeInverse { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySequence {
    presentation: Arc<ColoredPresentation>,
    items: Vec<ConjugatedRelator>,
}

/// Class blocks obtained by moving items of lower classes to the left with
/// exchange moves. `blocks[k]` is the product of block `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub reordered: Vec<ConjugatedRelator>,
    pub block_sizes: Vec<usize>,
    pub blocks: Vec<Word>,
}

impl BlockDecomposition {
    pub fn r_c(&self) -> &Word {
        &self.blocks[0]
    }

    pub fn s_c(&self) -> &Word {
        &self.blocks[1]
    }

    pub fn t_c(&self) -> Option<&Word> {
        self.blocks.get(2)
    }

    /// Items of block `k` (0-based).
    pub fn block_items(&self, k: usize) -> &[ConjugatedRelator] {
        let start: usize = self.block_sizes[..k].iter().sum();
        &self.reordered[start..start + self.block_sizes[k]]
    }
}

impl IdentitySequence {
    /// Checks indices and alphabets. Triviality of the product is not
    /// required here; see [`IdentitySequence::validate`].
    pub fn new(
        presentation: Arc<ColoredPresentation>,
        items: Vec<ConjugatedRelator>,
    ) -> Result<Self, SequenceError> {
        for item in &items {
            presentation.relator(item.class, item.relator)?;
            if !same_alphabet(item.conjugator.alphabet(), presentation.alphabet()) {
                return Err(WordError::AlphabetMismatch.into());
            }
        }
        Ok(IdentitySequence {
            presentation,
            items,
        })
    }

    pub fn empty(presentation: Arc<ColoredPresentation>) -> Self {
        IdentitySequence {
            presentation,
            items: Vec::new(),
        }
    }

    /// Items `(class, relator, exponent)` with trivial conjugators.
    pub fn from_tags(
        presentation: Arc<ColoredPresentation>,
        tags: &[(usize, usize, Sign)],
    ) -> Result<Self, SequenceError> {
        let e = Word::identity(presentation.alphabet());
        let items = tags
            .iter()
            .map(|&(c, r, s)| ConjugatedRelator::new(c, r, s, e.clone()))
            .collect();
        Self::new(presentation, items)
    }

    pub fn presentation(&self) -> &Arc<ColoredPresentation> {
        &self.presentation
    }

    pub fn items(&self) -> &[ConjugatedRelator] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn realize(&self, pos: usize) -> Word {
        self.items[pos]
            .realize(&self.presentation)
            .expect("indices checked on construction")
    }

    /// Ordered product of the realized items.
    pub fn product(&self) -> Word {
        let mut acc = Word::identity(self.presentation.alphabet());
        for i in 0..self.items.len() {
            acc = &acc * &self.realize(i);
        }
        acc
    }

    pub fn validate(&self) -> bool {
        self.product().is_empty()
    }

    fn ensure_valid(&self) -> Result<(), SequenceError> {
        if self.validate() {
            Ok(())
        } else {
            Err(SequenceError::NotIdentity)
        }
    }

    fn same_presentation(&self, other: &IdentitySequence) -> Result<(), SequenceError> {
        if Arc::ptr_eq(&self.presentation, &other.presentation)
            || self.presentation == other.presentation
        {
            Ok(())
        } else {
            Err(SequenceError::PresentationMismatch)
        }
    }

    /// Two adjacent items cancel when they carry the same relator with
    /// opposite exponents and realize mutually inverse words.
    pub fn is_inverse_pair(&self, a: &ConjugatedRelator, b: &ConjugatedRelator) -> bool {
        if a.class != b.class || a.relator != b.relator || a.exponent == b.exponent {
            return false;
        }
        match (a.realize(&self.presentation), b.realize(&self.presentation)) {
            (Ok(x), Ok(y)) => (&x * &y).is_empty(),
            _ => false,
        }
    }

    /// Positions where a deletion move applies.
    pub fn deletable_positions(&self) -> Vec<usize> {
        (0..self.items.len().saturating_sub(1))
            .filter(|&i| self.is_inverse_pair(&self.items[i], &self.items[i + 1]))
            .collect()
    }

    pub fn apply(&self, mv: &PeifferMove) -> Result<IdentitySequence, SequenceError> {
        let len = self.items.len();
        let pair_in_range = |pos: usize| {
            if pos + 1 < len {
                Ok(())
            } else {
                Err(SequenceError::PositionOutOfRange { pos, len })
            }
        };
        let mut items = self.items.clone();
        match mv {
            PeifferMove::Respell { pos } => {
                if *pos >= len {
                    return Err(SequenceError::PositionOutOfRange { pos: *pos, len });
                }
            }
            PeifferMove::Delete { pos } => {
                pair_in_range(*pos)?;
                if !self.is_inverse_pair(&items[*pos], &items[*pos + 1]) {
                    return Err(SequenceError::NotInversePair { pos: *pos });
                }
                items.drain(*pos..*pos + 2);
            }
            PeifferMove::Insert { pos, item } => {
                if *pos > len {
                    return Err(SequenceError::PositionOutOfRange { pos: *pos, len });
                }
                self.presentation.relator(item.class, item.relator)?;
                if !same_alphabet(item.conjugator.alphabet(), self.presentation.alphabet()) {
                    return Err(WordError::AlphabetMismatch.into());
                }
                items.insert(*pos, item.inverse());
                items.insert(*pos, item.clone());
            }
            PeifferMove::Exchange { pos } => {
                pair_in_range(*pos)?;
                let next = self.realize(*pos + 1);
                let moved = items[*pos].conjugated_by(&next);
                items[*pos] = items[*pos + 1].clone();
                items[*pos + 1] = moved;
            }
            PeifferMove::ExchangeInverse { pos } => {
                pair_in_range(*pos)?;
                let prev_inv = self.realize(*pos).inverse();
                let moved = items[*pos + 1].conjugated_by(&prev_inv);
                items[*pos + 1] = items[*pos].clone();
                items[*pos] = moved;
            }
        }
        Ok(IdentitySequence {
            presentation: self.presentation.clone(),
            items,
        })
    }

    /// Concatenation; the sum in `E_P`.
    pub fn juxtapose(&self, other: &IdentitySequence) -> Result<IdentitySequence, SequenceError> {
        self.same_presentation(other)?;
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        Ok(IdentitySequence {
            presentation: self.presentation.clone(),
            items,
        })
    }

    /// `(c_m⁻¹, …, c₁⁻¹)`.
    pub fn inverse(&self) -> IdentitySequence {
        IdentitySequence {
            presentation: self.presentation.clone(),
            items: self.items.iter().rev().map(|c| c.inverse()).collect(),
        }
    }

    /// `(c₁^f, …, c_m^f)`.
    pub fn conjugate(&self, f: &Word) -> Result<IdentitySequence, SequenceError> {
        if !same_alphabet(f.alphabet(), self.presentation.alphabet()) {
            return Err(WordError::AlphabetMismatch.into());
        }
        Ok(IdentitySequence {
            presentation: self.presentation.clone(),
            items: self.items.iter().map(|c| c.conjugated_by(f)).collect(),
        })
    }

    /// Reorders a 2- or 3-class identity sequence into class blocks.
    pub fn block_decompose(&self) -> Result<BlockDecomposition, SequenceError> {
        let n = self.presentation.class_count();
        if !(2..=3).contains(&n) {
            return Err(SequenceError::WrongClassCount {
                expected: "2 or 3".into(),
                found: n,
            });
        }
        self.ensure_valid()?;
        Ok(self.decompose_blocks())
    }

    /// Block decomposition for any number of classes; the product need not
    /// be trivial. Round `k` moves every class-`k` item to the left of the
    /// items of higher classes; an item passed over is conjugated by the
    /// product, in sequence order, of the class-`k` items it was in front of.
    pub(crate) fn decompose_blocks(&self) -> BlockDecomposition {
        let n = self.presentation.class_count();
        let alphabet = self.presentation.alphabet();
        let mut rest: Vec<(ConjugatedRelator, Word)> = self
            .items
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), self.realize(i)))
            .collect();
        let mut reordered = Vec::with_capacity(self.items.len());
        let mut block_sizes = Vec::with_capacity(n);
        let mut blocks = Vec::with_capacity(n);
        for class in 1..=n {
            // Right-to-left sweep keeping the product of later class-`class` items.
            let mut suffix = Word::identity(alphabet);
            let mut block_rev = Vec::new();
            let mut others_rev = Vec::new();
            for (item, word) in rest.into_iter().rev() {
                if item.class == class {
                    suffix = &word * &suffix;
                    block_rev.push((item, word));
                } else if suffix.is_empty() {
                    others_rev.push((item, word));
                } else {
                    let word = word.conjugate(&suffix).expect("same alphabet");
                    others_rev.push((item.conjugated_by(&suffix), word));
                }
            }
            block_sizes.push(block_rev.len());
            let mut product = Word::identity(alphabet);
            for (item, word) in block_rev.into_iter().rev() {
                product = &product * &word;
                reordered.push(item);
            }
            blocks.push(product);
            others_rev.reverse();
            rest = others_rev;
        }
        debug_assert!(rest.is_empty());
        BlockDecomposition {
            reordered,
            block_sizes,
            blocks,
        }
    }

    /// Parses the `seq { … }` text format.
    pub fn parse(
        text: &str,
        presentation: &Arc<ColoredPresentation>,
    ) -> Result<IdentitySequence, SequenceError> {
        let mut items = Vec::new();
        let mut opened = false;
        let mut closed = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| SequenceError::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            if closed {
                return Err(err("content after closing `}`"));
            }
            if !opened {
                let rest = line
                    .strip_prefix("seq")
                    .map(str::trim_start)
                    .and_then(|r| r.strip_prefix('{'))
                    .ok_or_else(|| err("expected `seq {`"))?;
                opened = true;
                if !rest.trim().is_empty() {
                    return Err(err("items must start on their own line"));
                }
                continue;
            }
            if line == "}" {
                closed = true;
                continue;
            }
            let item = parse_item(line, presentation).map_err(|e| match e {
                SequenceError::Parse { msg, .. } => SequenceError::Parse { line: line_no, msg },
                other => SequenceError::Parse {
                    line: line_no,
                    msg: other.to_string(),
                },
            })?;
            items.push(item);
        }
        if !opened || !closed {
            return Err(SequenceError::Parse {
                line: text.lines().count(),
                msg: "missing `seq { … }` block".into(),
            });
        }
        IdentitySequence::new(presentation.clone(), items)
    }
}

fn parse_item(
    line: &str,
    pres: &Arc<ColoredPresentation>,
) -> Result<ConjugatedRelator, SequenceError> {
    let bad = |msg: &str| SequenceError::Parse {
        line: 0,
        msg: msg.to_string(),
    };
    let inner = line
        .strip_prefix('(')
        .and_then(|l| l.strip_suffix(')'))
        .ok_or_else(|| bad("expected `(<class>:<relator> <+|-> @ <word>)`"))?;
    let (head, conj) = inner.split_once('@').ok_or_else(|| bad("missing `@`"))?;
    let mut parts = head.split_whitespace();
    let tag = parts.next().ok_or_else(|| bad("missing tag"))?;
    let sign = parts.next().ok_or_else(|| bad("missing sign"))?;
    if parts.next().is_some() {
        return Err(bad("unexpected text before `@`"));
    }
    let (c, r) = tag.split_once(':').ok_or_else(|| bad("tag must be `<class>:<relator>`"))?;
    let class: usize = c.parse().map_err(|_| bad("class index is not a number"))?;
    let relator: usize = r.parse().map_err(|_| bad("relator index is not a number"))?;
    let exponent = match sign {
        "+" => Sign::Pos,
        "-" => Sign::Neg,
        _ => return Err(bad("sign must be `+` or `-`")),
    };
    let conj = conj.trim();
    let conjugator = if conj == "e" && pres.alphabet().lookup("e").is_none() {
        Word::identity(pres.alphabet())
    } else {
        Word::parse(conj, pres.alphabet())?
    };
    pres.relator(class, relator)?;
    Ok(ConjugatedRelator::new(class, relator, exponent, conjugator))
}

impl fmt::Display for IdentitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seq {{")?;
        for item in &self.items {
            writeln!(f, "  {item}")?;
        }
        writeln!(f, "}}")
    }
}
