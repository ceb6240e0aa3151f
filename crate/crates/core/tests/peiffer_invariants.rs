use std::sync::Arc;

use peiffer::random::{case_rng, mutate, random_move, random_word, SequenceSampler};
use peiffer::{
    lambda3, Alphabet, ColoredPresentation, ConjugatedRelator, IdentitySequence, PeifferMove,
    Sign, Word,
};
use proptest::prelude::*;

fn wu() -> Arc<ColoredPresentation> {
    ColoredPresentation::from_text(
        Alphabet::numbered("x", 2),
        &[&["x1"], &["x2"], &["x2^-1 x1^-1"]],
    )
    .unwrap()
}

/// Same normal closures as `wu`, with extra relators giving two-class
/// identity sequences.
fn sew() -> Arc<ColoredPresentation> {
    ColoredPresentation::from_text(
        Alphabet::numbered("x", 2),
        &[&["x1"], &["x2", "[x1,x2]"], &["x2^-1 x1^-1"]],
    )
    .unwrap()
}

fn sampler_for(p: Arc<ColoredPresentation>) -> SequenceSampler {
    let mut s = SequenceSampler::new(p.clone());
    if p.class(2).unwrap().len() == 2 {
        let extra = [
            "seq {\n(1:1 - @ e)\n(1:1 + @ x2)\n(2:2 - @ e)\n}",
            "seq {\n(3:1 + @ x1)\n(3:1 - @ e)\n(2:2 - @ e)\n}",
        ];
        let mut bases = s.bases().to_vec();
        bases.extend(extra.iter().map(|t| IdentitySequence::parse(t, &p).unwrap()));
        s = SequenceSampler::with_bases(p, bases);
    }
    s
}

/// The block products written out literally: class-2 items conjugated by
/// the later class-1 items, class-3 items by the later class-1 items and
/// then the later (already conjugated) class-2 items.
fn literal_blocks(c: &IdentitySequence) -> (Word, Word, Word) {
    let pres = c.presentation();
    let a = pres.alphabet();
    let real: Vec<Word> = (0..c.len()).map(|i| c.realize(i)).collect();
    let class = |i: usize| c.items()[i].class;
    let later_product = |after: usize, k: usize, words: &[Word]| {
        let mut w = Word::identity(a);
        for (j, x) in words.iter().enumerate().skip(after + 1) {
            if class(j) == k {
                w = &w * x;
            }
        }
        w
    };
    let mut bar = real.clone();
    for i in 0..c.len() {
        if class(i) == 2 {
            bar[i] = real[i].conjugate(&later_product(i, 1, &real)).unwrap();
        }
    }
    let bar2 = bar.clone();
    for i in 0..c.len() {
        if class(i) == 3 {
            let g = &later_product(i, 1, &real) * &later_product(i, 2, &bar2);
            bar[i] = real[i].conjugate(&g).unwrap();
        }
    }
    let block = |k: usize| {
        let mut w = Word::identity(a);
        for (i, x) in bar.iter().enumerate() {
            if class(i) == k {
                w = &w * x;
            }
        }
        w
    };
    (block(1), block(2), block(3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn moves_preserve_identity_sequences(seed in any::<u64>(), use_sew in any::<bool>()) {
        let p = if use_sew { sew() } else { wu() };
        let sampler = sampler_for(p);
        let mut rng = case_rng(seed, 0);
        let mut seq = sampler.sample(&mut rng);
        prop_assert!(seq.validate());
        for _ in 0..12 {
            let mv = random_move(&mut rng, &seq, 3, true).unwrap();
            seq = seq.apply(&mv).unwrap();
            prop_assert!(seq.validate(), "{:?}", mv);
        }
    }

    #[test]
    fn blocks_match_the_literal_formulas(seed in any::<u64>(), use_sew in any::<bool>()) {
        let p = if use_sew { sew() } else { wu() };
        let mut rng = case_rng(seed, 1);
        let base = sampler_for(p).sample(&mut rng);
        let seq = mutate(&mut rng, &base, 8, 3).0;
        let b = seq.block_decompose().unwrap();
        let (r, s, t) = literal_blocks(&seq);
        prop_assert_eq!(b.r_c(), &r);
        prop_assert_eq!(b.s_c(), &s);
        prop_assert_eq!(b.t_c().unwrap(), &t);
        prop_assert!((&(&r * &s) * &t).is_empty());
        let reordered = IdentitySequence::new(seq.presentation().clone(), b.reordered.clone()).unwrap();
        prop_assert!(reordered.validate());
        for (k, item) in b.reordered.iter().enumerate() {
            let start: usize = b.block_sizes[..item.class - 1].iter().sum();
            prop_assert!(k >= start && k < start + b.block_sizes[item.class - 1]);
        }
    }

    #[test]
    fn exchange_moves_are_mutually_inverse(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 2);
        let seq = sampler_for(wu()).sample(&mut rng);
        prop_assume!(seq.len() >= 2);
        for pos in 0..seq.len() - 1 {
            let there = seq.apply(&PeifferMove::Exchange { pos }).unwrap();
            let back = there.apply(&PeifferMove::ExchangeInverse { pos }).unwrap();
            let realized: Vec<Word> = (0..seq.len()).map(|i| seq.realize(i)).collect();
            let again: Vec<Word> = (0..back.len()).map(|i| back.realize(i)).collect();
            prop_assert_eq!(realized, again);
            let other = seq.apply(&PeifferMove::ExchangeInverse { pos }).unwrap()
                .apply(&PeifferMove::Exchange { pos }).unwrap();
            prop_assert_eq!((0..other.len()).map(|i| other.realize(i)).collect::<Vec<_>>(),
                            (0..seq.len()).map(|i| seq.realize(i)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn same_class_transposition_keeps_blocks(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 3);
        let base = sampler_for(wu()).sample(&mut rng);
        let seq = mutate(&mut rng, &base, 6, 3).0;
        let before = seq.block_decompose().unwrap();
        for pos in 0..seq.len().saturating_sub(1) {
            if seq.items()[pos].class == seq.items()[pos + 1].class {
                let after = seq.apply(&PeifferMove::Exchange { pos }).unwrap().block_decompose().unwrap();
                prop_assert_eq!(after.r_c(), before.r_c());
                prop_assert_eq!(after.s_c(), before.s_c());
            }
        }
    }

    #[test]
    fn group_operations(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 4);
        let sampler = sampler_for(wu());
        let (a, b, c) = (sampler.sample(&mut rng), sampler.sample(&mut rng), sampler.sample(&mut rng));
        let ab_c = a.juxtapose(&b).unwrap().juxtapose(&c).unwrap();
        let a_bc = a.juxtapose(&b.juxtapose(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert!(ab_c.validate());
        prop_assert_eq!(a.juxtapose(&b).unwrap().inverse(), b.inverse().juxtapose(&a.inverse()).unwrap());
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        let f = random_word(&mut rng, wu().alphabet(), 4);
        let conj = a.conjugate(&f).unwrap();
        prop_assert!(conj.validate());
        prop_assert_eq!(conj.conjugate(&f.inverse()).unwrap(), a.clone());
        // c + (−c) reduces to the empty sequence by deletions from the middle.
        let mut z = a.juxtapose(&a.inverse()).unwrap();
        while !z.is_empty() {
            let pos = z.len() / 2 - 1;
            z = z.apply(&PeifferMove::Delete { pos }).unwrap();
        }
    }
}

#[test]
fn realize_examples() {
    let p = wu();
    let a = p.alphabet().clone();
    let x1 = Word::parse("x1", &a).unwrap();
    let item = ConjugatedRelator::new(3, 1, Sign::Pos, x1.clone());
    assert_eq!(item.realize(&p).unwrap(), Word::parse("x1^-1 x2^-1", &a).unwrap());
    let item = ConjugatedRelator::new(2, 1, Sign::Neg, x1);
    assert_eq!(item.realize(&p).unwrap(), Word::parse("x1^-1 x2^-1 x1", &a).unwrap());
}

#[test]
fn lambda_of_conjugated_generator() {
    let p = wu();
    let a = p.alphabet().clone();
    let g = IdentitySequence::from_tags(
        p.clone(),
        &[(1, 1, Sign::Pos), (2, 1, Sign::Pos), (3, 1, Sign::Pos)],
    )
    .unwrap();
    let f = Word::parse("x2 x1^-1", &a).unwrap();
    let v = lambda3(&g.conjugate(&f).unwrap()).unwrap();
    let expected = Word::commutator(&Word::parse("x1", &a).unwrap(), &Word::parse("x2", &a).unwrap())
        .unwrap()
        .conjugate(&f)
        .unwrap();
    assert_eq!(v.representative, expected);
}
