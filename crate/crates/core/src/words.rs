//! Reduced words in a finitely generated free group.
//!
//! Conventions: `[a, b] = a⁻¹b⁻¹ab` and `a^g = g⁻¹ag`. Longer brackets are
//! left-normed, `[a, b, c] = [[a, b], c]`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator index {index} out of range for an alphabet of size {size}")]
    GeneratorOutOfRange { index: usize, size: usize },
    #[error("words are over different alphabets")]
    AlphabetMismatch,
    #[error("a left-normed commutator needs at least two entries, got {0}")]
    TooFewEntries(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: usize,
    pub name: String,
}

/// An ordered list of named generators. Indices follow declaration order.
#[derive(Debug)]
pub struct Alphabet {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Alphabet {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Arc<Alphabet>, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut gens = Vec::new();
        let mut index = HashMap::new();
        for name in names {
            let name = name.into();
            if !valid_name(&name) {
                return Err(WordError::InvalidName(name));
            }
            if index.contains_key(&name) {
                return Err(WordError::DuplicateGenerator(name));
            }
            index.insert(name.clone(), gens.len());
            gens.push(Generator {
                id: gens.len(),
                name,
            });
        }
        Ok(Arc::new(Alphabet { gens, index }))
    }

    /// `prefix1, …, prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Arc<Alphabet> {
        Self::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("numbered names are valid")
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.gens[id].name
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: usize, sign: Sign) -> Letter {
        Letter {
            gen: gen as u32,
            sign,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            sign: self.sign.flip(),
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_alphabet(&self.alphabet, &other.alphabet)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

/// Appends `letters` to the reduced word `acc`, cancelling at the junction.
fn push_reduced(acc: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for l in letters {
        if acc.last() == Some(&l.inverse()) {
            acc.pop();
        } else {
            acc.push(l);
        }
    }
}

impl Word {
    pub fn identity(alphabet: &Arc<Alphabet>) -> Word {
        Word {
            alphabet: alphabet.clone(),
            letters: Vec::new(),
        }
    }

    pub fn generator(alphabet: &Arc<Alphabet>, id: usize) -> Word {
        assert!(id < alphabet.len(), "generator {id} out of range");
        Word {
            alphabet: alphabet.clone(),
            letters: vec![Letter::new(id, Sign::Pos)],
        }
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters(
        alphabet: &Arc<Alphabet>,
        letters: impl IntoIterator<Item = Letter>,
    ) -> Result<Word, WordError> {
        let mut acc = Vec::new();
        for l in letters {
            if l.gen as usize >= alphabet.len() {
                return Err(WordError::GeneratorOutOfRange {
                    index: l.gen as usize,
                    size: alphabet.len(),
                });
            }
            push_reduced(&mut acc, [l]);
        }
        Ok(Word {
            alphabet: alphabet.clone(),
            letters: acc,
        })
    }

    /// Signed 1-based generator indices, e.g. `[1, -2]` is `x1 x2⁻¹`.
    pub fn from_signed(alphabet: &Arc<Alphabet>, code: &[i32]) -> Result<Word, WordError> {
        let letters = code.iter().map(|&c| {
            assert!(c != 0, "signed letter codes are nonzero");
            let sign = if c > 0 { Sign::Pos } else { Sign::Neg };
            Letter::new(c.unsigned_abs() as usize - 1, sign)
        });
        Self::from_letters(alphabet, letters)
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.letters
            .iter()
            .map(|l| (l.gen as i32 + 1) * l.sign.as_i8() as i32)
            .collect()
    }

    pub fn parse(text: &str, alphabet: &Arc<Alphabet>) -> Result<Word, WordError> {
        crate::grammar::parse_word(text, alphabet)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_alphabet(&self, other: &Word) -> Result<(), WordError> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(WordError::AlphabetMismatch)
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        self.check_alphabet(other)?;
        let mut acc = self.letters.clone();
        push_reduced(&mut acc, other.letters.iter().copied());
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters: acc,
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Result<Word, WordError> {
        self.check_alphabet(g)?;
        let mut acc = g.inverse().letters;
        push_reduced(&mut acc, self.letters.iter().copied());
        push_reduced(&mut acc, g.letters.iter().copied());
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters: acc,
        })
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut acc = Vec::new();
        for _ in 0..exp.unsigned_abs() {
            push_reduced(&mut acc, base.letters.iter().copied());
        }
        Word {
            alphabet: self.alphabet.clone(),
            letters: acc,
        }
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word, WordError> {
        a.check_alphabet(b)?;
        let mut acc = a.inverse().letters;
        push_reduced(&mut acc, b.inverse().letters);
        push_reduced(&mut acc, a.letters.iter().copied());
        push_reduced(&mut acc, b.letters.iter().copied());
        Ok(Word {
            alphabet: a.alphabet.clone(),
            letters: acc,
        })
    }

    /// `[w₁, …, w_t] = [[…[w₁, w₂], …], w_t]`.
    pub fn left_normed_commutator(ws: &[Word]) -> Result<Word, WordError> {
        if ws.len() < 2 {
            return Err(WordError::TooFewEntries(ws.len()));
        }
        let mut acc = ws[0].clone();
        for w in &ws[1..] {
            acc = Word::commutator(&acc, w)?;
        }
        Ok(acc)
    }

    /// Exponent sum of each generator (the image in the abelianization).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.len()];
        for l in &self.letters {
            sums[l.gen as usize] += l.sign.as_i8() as i64;
        }
        sums
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    /// Panics when the alphabets differ; use [`Word::multiply`] to get an error instead.
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs).expect("multiplying words over different alphabets")
    }
}

impl Mul<Word> for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        // Runs of a repeated letter are printed as powers.
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let name = self.alphabet.name(l.gen as usize);
            let exp = run as i64 * l.sign.as_i8() as i64;
            if exp == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}
