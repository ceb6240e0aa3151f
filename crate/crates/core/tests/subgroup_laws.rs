use std::sync::Arc;

use peiffer::oracle::{build_quotient, subgroup_op, QuotientGroup, SubgroupHandle, SubgroupOp, DEFAULT_BUDGET};
use peiffer::random::{case_rng, random_word};
use peiffer::{Alphabet, Word};

fn setup(p: u32) -> (Arc<QuotientGroup>, Arc<Alphabet>) {
    (build_quotient(2, p, 3, DEFAULT_BUDGET).unwrap(), Alphabet::numbered("x", 2))
}

fn w(a: &Arc<Alphabet>, s: &str) -> Word {
    Word::parse(s, a).unwrap()
}

/// Closure under products of all element pairs, independent of the
/// generator-based check. Large subgroups fall back to the generator check.
fn fully_closed(h: &SubgroupHandle) -> bool {
    let q = h.group();
    if h.order() > 256 {
        return h.is_closed();
    }
    h.elements()
        .iter()
        .all(|&a| h.elements().iter().all(|&b| h.contains(q.mul(a, b))))
}

fn random_normal_subgroups(q: &Arc<QuotientGroup>, a: &Arc<Alphabet>, seed: u64) -> Vec<SubgroupHandle> {
    let mut rng = case_rng(seed, 0);
    (0..4)
        .map(|_| {
            let gens: Vec<Word> = (0..2).map(|_| random_word(&mut rng, a, 6)).collect();
            q.normal_closure(&gens).unwrap()
        })
        .collect()
}

#[test]
fn regression_orders() {
    let (q, a) = setup(2);
    assert_eq!(q.order(), 128);
    // Normal closure of x1 in the (p=2, d=3) quotient.
    assert_eq!(q.normal_closure(&[w(&a, "x1")]).unwrap().order(), 32);
    let (q3, _) = setup(3);
    assert_eq!(q3.order(), 2187);
    assert_eq!(q3.normal_closure(&[w(&a, "x1")]).unwrap().order(), 243);
}

#[test]
fn laws_on_random_normal_subgroups() {
    for p in [2, 3] {
        let (q, a) = setup(p);
        let whole = q.whole_group();
        let triv = q.trivial_subgroup();
        for seed in 0..6 {
            let hs = random_normal_subgroups(&q, &a, seed);
            for x in &hs {
                assert!(x.is_normal() && x.is_closed() && fully_closed(x));
                assert_eq!(&subgroup_op(SubgroupOp::Meet, x, &whole).unwrap(), x);
                assert_eq!(subgroup_op(SubgroupOp::Commutator, x, &triv).unwrap(), triv);
                assert_eq!(q.order() % x.order(), 0);
                for y in &hs {
                    // Keep the exhaustive commutator affordable.
                    if x.order() * y.order() > 100_000 {
                        continue;
                    }
                    let m = subgroup_op(SubgroupOp::Meet, x, y).unwrap();
                    let c = subgroup_op(SubgroupOp::Commutator, x, y).unwrap();
                    let j = subgroup_op(SubgroupOp::Join, x, y).unwrap();
                    assert!(fully_closed(&m) && fully_closed(&c) && fully_closed(&j));
                    assert!(c.is_subgroup_of(&m));
                    assert!(c.is_normal());
                    assert!(x.is_subgroup_of(&j) && y.is_subgroup_of(&j));
                    assert!(m.is_subgroup_of(x) && m.is_subgroup_of(y));
                    // |XY| = |X||Y| / |X∩Y| for normal subgroups.
                    assert_eq!(j.order() * m.order(), x.order() * y.order());
                    // Commutators are symmetric.
                    assert_eq!(c, subgroup_op(SubgroupOp::Commutator, y, x).unwrap());
                }
            }
        }
    }
}

#[test]
fn commutator_of_the_whole_group_is_the_derived_subgroup() {
    let (q, a) = setup(2);
    let whole = q.whole_group();
    let derived = whole.commutator(&whole).unwrap();
    let from_words = q.normal_closure(&[w(&a, "[x1,x2]")]).unwrap();
    assert_eq!(derived, from_words);
}

#[test]
fn congruence_by_membership() {
    let (q, a) = setup(2);
    let h = q.normal_closure(&[w(&a, "x1")]).unwrap();
    let x = q.project(&w(&a, "x2 x1 x2^-1")).unwrap();
    assert!(h.contains(x));
    assert!(!h.contains(q.project(&w(&a, "x2")).unwrap()));
    let enc = q.encode(x);
    assert_eq!(q.decode(&enc), Some(x));
}

/// For normal subgroups the commutator is the normal closure of the
/// generator commutators; compare that with the exhaustive computation.
#[test]
fn commutator_of_normal_subgroups_from_generators() {
    let (q, a) = setup(3);
    let hs = random_normal_subgroups(&q, &a, 11);
    for x in &hs {
        for y in &hs {
            if x.order() * y.order() > 600_000 {
                continue;
            }
            let comms: Vec<u32> = x
                .generators()
                .iter()
                .flat_map(|&g| y.generators().iter().map(move |&h| (g, h)))
                .map(|(g, h)| q.commutator(g, h))
                .collect();
            assert_eq!(x.commutator(y).unwrap(), q.normal_closure_of(&comms));
        }
    }
}
