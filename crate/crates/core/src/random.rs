//! Seeded samplers for words, identity sequences and Peiffer moves.
//!
//! Every campaign derives the seed of case `i` as `splitmix64(master ⊕ i·φ)`,
//! so a failing case can be replayed on its own.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sequences::{ColoredPresentation, ConjugatedRelator, IdentitySequence, PeifferMove};
use crate::words::{Alphabet, Letter, Sign, Word};

pub type CaseRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn case_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_mul(GOLDEN))
}

pub fn case_rng(master: u64, index: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(case_seed(master, index))
}

/// A reduced word of length at most `max_len`, built letter by letter
/// without immediate cancellation.
pub fn random_word<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, max_len: usize) -> Word {
    let n = alphabet.len();
    if n == 0 || max_len == 0 {
        return Word::identity(alphabet);
    }
    let len = rng.gen_range(0..=max_len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
        let l = Letter::new(rng.gen_range(0..n), sign);
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_letters(alphabet, letters).expect("letters are in range")
}

/// A product of `count` random conjugates of relators drawn from `classes`.
pub fn random_relator_product<R: Rng>(
    rng: &mut R,
    presentation: &ColoredPresentation,
    classes: &[usize],
    count: usize,
    conj_len: usize,
) -> Word {
    let alphabet = presentation.alphabet();
    let mut w = Word::identity(alphabet);
    for _ in 0..count {
        let c = *classes.choose(rng).expect("at least one class");
        let rels = presentation.class(c).expect("class in range");
        let r = rels.choose(rng).expect("classes are nonempty");
        let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
        let g = random_word(rng, alphabet, conj_len);
        w = &w * &r.conjugate(&g).expect("same alphabet");
    }
    w
}

/// A random item with a random conjugator.
pub fn random_item<R: Rng>(
    rng: &mut R,
    presentation: &ColoredPresentation,
    conj_len: usize,
) -> ConjugatedRelator {
    let tags: Vec<(usize, usize)> = presentation.tags().collect();
    let &(c, r) = tags.choose(rng).expect("presentations have relators");
    let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
    ConjugatedRelator::new(c, r, sign, random_word(rng, presentation.alphabet(), conj_len))
}

/// A random applicable Peiffer move, or `None` for a sequence that admits
/// only insertions and insertions are disabled.
pub fn random_move<R: Rng>(
    rng: &mut R,
    seq: &IdentitySequence,
    conj_len: usize,
    allow_insert: bool,
) -> Option<PeifferMove> {
    let len = seq.len();
    let deletable = seq.deletable_positions();
    let mut kinds: Vec<u8> = Vec::new();
    if len >= 1 {
        kinds.push(0);
    }
    if !deletable.is_empty() {
        kinds.push(1);
    }
    if allow_insert {
        kinds.push(2);
    }
    if len >= 2 {
        kinds.extend([3, 3, 4, 4]);
    }
    let kind = *kinds.choose(rng)?;
    Some(match kind {
        0 => PeifferMove::Respell {
            pos: rng.gen_range(0..len),
        },
        1 => PeifferMove::Delete {
            pos: *deletable.choose(rng).unwrap(),
        },
        2 => PeifferMove::Insert {
            pos: rng.gen_range(0..=len),
            item: random_item(rng, seq.presentation(), conj_len),
        },
        3 => PeifferMove::Exchange {
            pos: rng.gen_range(0..len - 1),
        },
        _ => PeifferMove::ExchangeInverse {
            pos: rng.gen_range(0..len - 1),
        },
    })
}

/// Applies up to `moves` random moves; returns the result and the moves used.
pub fn mutate<R: Rng>(
    rng: &mut R,
    seq: &IdentitySequence,
    moves: usize,
    conj_len: usize,
) -> (IdentitySequence, Vec<PeifferMove>) {
    let mut cur = seq.clone();
    let mut log = Vec::new();
    for _ in 0..moves {
        let Some(mv) = random_move(rng, &cur, conj_len, true) else {
            break;
        };
        cur = cur.apply(&mv).expect("sampled moves apply");
        log.push(mv);
    }
    (cur, log)
}

/// Draws identity sequences as sums of conjugated base sequences.
#[derive(Debug, Clone)]
pub struct SequenceSampler {
    presentation: Arc<ColoredPresentation>,
    bases: Vec<IdentitySequence>,
    pub pieces: usize,
    pub conj_len: usize,
    pub insertions: usize,
}

impl SequenceSampler {
    /// Bases found in the presentation: pairs of equal relators carried by
    /// different tags, and one relator per class when their product is
    /// trivial in class order.
    pub fn new(presentation: Arc<ColoredPresentation>) -> SequenceSampler {
        let mut bases = Vec::new();
        let tags: Vec<(usize, usize)> = presentation.tags().collect();
        let rel = |t: (usize, usize)| presentation.relator(t.0, t.1).unwrap().clone();
        for (i, &a) in tags.iter().enumerate() {
            for &b in &tags[i + 1..] {
                let (ra, rb) = (rel(a), rel(b));
                let sign = if ra == rb {
                    Some(Sign::Neg)
                } else if ra == rb.inverse() {
                    Some(Sign::Pos)
                } else {
                    None
                };
                if let Some(s) = sign {
                    bases.push(
                        IdentitySequence::from_tags(
                            presentation.clone(),
                            &[(a.0, a.1, Sign::Pos), (b.0, b.1, s)],
                        )
                        .unwrap(),
                    );
                }
            }
        }
        let firsts: Vec<(usize, usize, Sign)> = (1..=presentation.class_count())
            .map(|c| (c, 1, Sign::Pos))
            .collect();
        let all = IdentitySequence::from_tags(presentation.clone(), &firsts).unwrap();
        if all.validate() {
            bases.push(all);
        }
        SequenceSampler {
            presentation,
            bases,
            pieces: 2,
            conj_len: 3,
            insertions: 1,
        }
    }

    pub fn with_bases(
        presentation: Arc<ColoredPresentation>,
        bases: Vec<IdentitySequence>,
    ) -> SequenceSampler {
        SequenceSampler {
            presentation,
            bases,
            pieces: 2,
            conj_len: 3,
            insertions: 1,
        }
    }

    pub fn bases(&self) -> &[IdentitySequence] {
        &self.bases
    }

    /// Keeps only bases whose items use classes from `classes`.
    pub fn restricted_to(&self, classes: &[usize]) -> SequenceSampler {
        let bases = self
            .bases
            .iter()
            .filter(|b| b.items().iter().all(|it| classes.contains(&it.class)))
            .cloned()
            .collect();
        SequenceSampler {
            bases,
            ..self.clone()
        }
    }

    pub fn presentation(&self) -> &Arc<ColoredPresentation> {
        &self.presentation
    }

    /// A sum of `1..=pieces` conjugated bases (each possibly inverted), with
    /// up to `insertions` inverse pairs (restricted to the classes already
    /// present) slipped in.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> IdentitySequence {
        let alphabet = self.presentation.alphabet();
        let mut seq = IdentitySequence::empty(self.presentation.clone());
        if self.bases.is_empty() {
            return seq;
        }
        let pieces = rng.gen_range(1..=self.pieces.max(1));
        for _ in 0..pieces {
            let mut b = self.bases.choose(rng).unwrap().clone();
            if rng.gen_bool(0.5) {
                b = b.inverse();
            }
            let g = random_word(rng, alphabet, self.conj_len);
            seq = seq.juxtapose(&b.conjugate(&g).unwrap()).unwrap();
        }
        let used: Vec<usize> = seq.items().iter().map(|it| it.class).collect();
        for _ in 0..rng.gen_range(0..=self.insertions) {
            let mut item = random_item(rng, &self.presentation, self.conj_len);
            if !used.contains(&item.class) {
                continue;
            }
            if rng.gen_bool(0.5) {
                item = item.inverse();
            }
            let pos = rng.gen_range(0..=seq.len());
            seq = seq.apply(&PeifferMove::Insert { pos, item }).unwrap();
        }
        seq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wu::wu_presentation;

    #[test]
    fn seeds_are_stable_and_spread() {
        assert_eq!(case_seed(42, 0), case_seed(42, 0));
        assert_ne!(case_seed(42, 0), case_seed(42, 1));
        assert_ne!(case_seed(42, 1), case_seed(43, 1));
    }

    #[test]
    fn words_are_reduced_and_bounded() {
        let a = Alphabet::numbered("x", 2);
        let mut rng = case_rng(7, 0);
        for _ in 0..200 {
            let w = random_word(&mut rng, &a, 6);
            assert!(w.len() <= 6);
            let again = Word::from_signed(&a, &w.to_signed()).unwrap();
            assert_eq!(again.len(), w.len());
        }
    }

    #[test]
    fn samples_and_mutations_stay_valid() {
        let wu = wu_presentation(2).unwrap();
        let sampler = SequenceSampler::new(wu.presentation.clone());
        assert!(!sampler.bases().is_empty());
        let mut rng = case_rng(1, 0);
        for _ in 0..50 {
            let s = sampler.sample(&mut rng);
            assert!(s.validate());
            let (m, log) = mutate(&mut rng, &s, 10, 3);
            assert!(m.validate());
            assert!(log.len() <= 10);
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let wu = wu_presentation(2).unwrap();
        let sampler = SequenceSampler::new(wu.presentation.clone());
        let a = sampler.sample(&mut case_rng(9, 3));
        let b = sampler.sample(&mut case_rng(9, 3));
        assert_eq!(a, b);
    }
}
