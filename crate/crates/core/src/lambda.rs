//! The maps from identity sequences to intersections of normal subgroups.
//!
//! For three classes, `lambda3(c) = [r_c, s_c]`, a representative of a coset
//! of `R₁∩R₂∩R₃` modulo `D = [R₁,R₂∩R₃][R₂,R₃∩R₁][R₃,R₁∩R₂]`. For two classes,
//! `lambda2(c) = r_c` represents a coset of `R₁∩R₂` modulo `[R₁,R₂]`.
//! There is no normal form modulo `D`; congruences are tested in finite
//! shadows, see [`crate::oracle::Shadow`].

use std::fmt;

use serde::Serialize;

use crate::sequences::{ConjugatedRelator, IdentitySequence, SequenceError};
use crate::words::Word;

/// The commutator subgroup `[⋂_{i∈left} Rᵢ, ⋂_{j∈right} Rⱼ]`, classes 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DenominatorFactor {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl fmt::Display for DenominatorFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[usize]| {
            s.iter()
                .map(|i| format!("R{i}"))
                .collect::<Vec<_>>()
                .join("∩")
        };
        write!(f, "[{}, {}]", side(&self.left), side(&self.right))
    }
}

/// Factors of the denominator of `Iₙ`: one per split of `{1, …, n}` into two
/// nonempty parts, the part containing the smallest class listed first.
/// For `n = 3` this is `[R₁,R₂∩R₃]`, `[R₁∩R₂,R₃]`, `[R₁∩R₃,R₂]`.
pub fn denominator_factors(n: usize) -> Vec<DenominatorFactor> {
    assert!((2..=20).contains(&n), "class count {n} out of range");
    // Bit 0 (class 1) always sits in the left part.
    (1u32..(1 << n) - 1)
        .filter(|mask| mask & 1 == 1)
        .map(|mask| {
            let (left, right): (Vec<usize>, Vec<usize>) =
                (1..=n).partition(|&i| mask & (1 << (i - 1)) != 0);
            DenominatorFactor { left, right }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaValue {
    pub representative: Word,
    pub denominator: Vec<DenominatorFactor>,
    /// Block products `r_c`, `s_c` (and `t_c` for three classes).
    pub blocks: Vec<Word>,
    /// The items of each block; they realize to the block products and
    /// certify membership of each block in its `Rᵢ`.
    pub certificates: Vec<Vec<ConjugatedRelator>>,
}

impl LambdaValue {
    fn from_sequence(c: &IdentitySequence, classes: usize) -> Result<Self, SequenceError> {
        let found = c.presentation().class_count();
        if found != classes {
            return Err(SequenceError::WrongClassCount {
                expected: classes.to_string(),
                found,
            });
        }
        let blocks = c.block_decompose()?;
        let representative = if classes == 3 {
            Word::commutator(blocks.r_c(), blocks.s_c())?
        } else {
            blocks.r_c().clone()
        };
        let certificates = (0..classes)
            .map(|k| blocks.block_items(k).to_vec())
            .collect();
        Ok(LambdaValue {
            representative,
            denominator: denominator_factors(classes),
            blocks: blocks.blocks,
            certificates,
        })
    }
}

/// `c ↦ [r_c, s_c]` for a three-class identity sequence.
pub fn lambda3(c: &IdentitySequence) -> Result<LambdaValue, SequenceError> {
    LambdaValue::from_sequence(c, 3)
}

/// `c ↦ r_c` for a two-class identity sequence.
pub fn lambda2(c: &IdentitySequence) -> Result<LambdaValue, SequenceError> {
    LambdaValue::from_sequence(c, 2)
}

/// Representative of `Λ(a+b) − Λ(a) − Λ(b)`, spelled `Λ(a+b)·Λ(b)⁻¹·Λ(a)⁻¹`.
pub fn cross_effect3(a: &IdentitySequence, b: &IdentitySequence) -> Result<Word, SequenceError> {
    let sum = a.juxtapose(b)?;
    let lab = lambda3(&sum)?.representative;
    let la = lambda3(a)?.representative;
    let lb = lambda3(b)?.representative;
    Ok(&(&lab * &lb.inverse()) * &la.inverse())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::sequences::ColoredPresentation;
    use crate::words::{Alphabet, Sign};

    fn wu() -> Arc<ColoredPresentation> {
        ColoredPresentation::from_text(
            Alphabet::numbered("x", 2),
            &[&["x1"], &["x2"], &["x2^-1 x1^-1"]],
        )
        .unwrap()
    }

    fn word(p: &ColoredPresentation, s: &str) -> Word {
        Word::parse(s, p.alphabet()).unwrap()
    }

    #[test]
    fn factors() {
        let f = denominator_factors(3);
        let shown: Vec<String> = f.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, vec!["[R1, R2∩R3]", "[R1∩R2, R3]", "[R1∩R3, R2]"]);
        assert_eq!(denominator_factors(2).len(), 1);
        assert_eq!(denominator_factors(4).len(), 7);
    }

    #[test]
    fn lambda3_of_generator_is_the_commutator() {
        let p = wu();
        let c = IdentitySequence::from_tags(
            p.clone(),
            &[(1, 1, Sign::Pos), (2, 1, Sign::Pos), (3, 1, Sign::Pos)],
        )
        .unwrap();
        let v = lambda3(&c).unwrap();
        assert_eq!(v.representative, word(&p, "[x1,x2]"));
        assert_eq!(v.denominator.len(), 3);
        for (k, cert) in v.certificates.iter().enumerate() {
            let mut prod = word(&p, "1");
            for item in cert {
                assert_eq!(item.class, k + 1);
                prod = &prod * &item.realize(&p).unwrap();
            }
            assert_eq!(prod, v.blocks[k]);
        }
    }

    #[test]
    fn lambda3_of_swapped_sequence() {
        let p = wu();
        let c = IdentitySequence::parse("seq {\n(2:1 + @ e)\n(1:1 + @ e)\n(3:1 + @ x1)\n}", &p)
            .unwrap();
        let v = lambda3(&c).unwrap();
        assert_eq!(v.representative, word(&p, "[x1, x2^x1]"));
    }

    #[test]
    fn lambda3_without_class_one_is_trivial() {
        let p = wu();
        let c = IdentitySequence::parse("seq {\n(2:1 + @ x1)\n(2:1 - @ x1)\n}", &p).unwrap();
        assert!(lambda3(&c).unwrap().representative.is_empty());
    }

    #[test]
    fn lambda2_examples() {
        let sphere =
            ColoredPresentation::from_text(Alphabet::new(["x"]).unwrap(), &[&["x"], &["x^-1"]])
                .unwrap();
        let c = IdentitySequence::from_tags(sphere.clone(), &[(1, 1, Sign::Pos), (2, 1, Sign::Pos)])
            .unwrap();
        assert_eq!(lambda2(&c).unwrap().representative, word(&sphere, "x"));
        let c = IdentitySequence::from_tags(sphere.clone(), &[(1, 1, Sign::Pos), (1, 1, Sign::Neg)])
            .unwrap();
        assert!(lambda2(&c).unwrap().representative.is_empty());
        let c = IdentitySequence::from_tags(sphere.clone(), &[(2, 1, Sign::Neg), (2, 1, Sign::Pos)])
            .unwrap();
        assert!(lambda2(&c).unwrap().representative.is_empty());
        assert!(matches!(
            lambda3(&c),
            Err(SequenceError::WrongClassCount { found: 2, .. })
        ));
    }

    #[test]
    fn cross_effect_with_empty_sequence() {
        let p = wu();
        let a = IdentitySequence::from_tags(
            p.clone(),
            &[(1, 1, Sign::Pos), (2, 1, Sign::Pos), (3, 1, Sign::Pos)],
        )
        .unwrap();
        let e = IdentitySequence::empty(p);
        assert!(cross_effect3(&a, &e).unwrap().is_empty());
    }
}
