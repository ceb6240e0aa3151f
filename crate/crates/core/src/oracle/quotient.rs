//! The finite p-group `F / D_{d+1}(F; 𝔽_p)`: the image of the free group in
//! truncated power series mod `p`, enumerated in full, and its subgroups.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use super::OracleError;
use crate::words::{Sign, Word};

/// Default cap on enumerated elements.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Above this many element pairs, commutators of normal subgroups are
/// generated from generator commutators and closed under conjugation.
const PAIR_LIMIT: usize = 50_000_000;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Dense layout of the monomials of degree `1..=d`, graded-lex ordered.
#[derive(Debug)]
struct Layout {
    len: usize,
    /// `(a, b, ab)` for every pair with `deg a + deg b ≤ d`.
    pairs: Vec<(u32, u32, u32)>,
    /// Index of each single variable `X_i`.
    linear: Vec<usize>,
}

impl Layout {
    fn new(rank: usize, d: usize) -> Layout {
        let mut offsets = vec![0usize; d + 2];
        let mut size = 1usize;
        for j in 1..=d {
            size *= rank;
            offsets[j + 1] = offsets[j] + size;
        }
        // offsets[j] is the start of degree j, with degree 1 at index 0.
        let start = |j: usize| offsets[j];
        let len = offsets[d + 1];
        let mut pairs = Vec::new();
        let mut size_i = 1usize;
        for i in 1..=d {
            size_i *= rank;
            let mut size_j = 1usize;
            for j in 1..=d - i {
                size_j *= rank;
                for a in 0..size_i {
                    for b in 0..size_j {
                        let ab = start(i + j) + a * size_j + b;
                        pairs.push(((start(i) + a) as u32, (start(j) + b) as u32, ab as u32));
                    }
                }
            }
        }
        Layout {
            len,
            pairs,
            linear: (0..rank).collect(),
        }
    }
}

/// An element `1 + A` is stored as the coefficients of `A`.
pub struct QuotientGroup {
    p: u32,
    degree: usize,
    rank: usize,
    layout: Layout,
    elements: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, u32>,
    inverses: Vec<u32>,
    /// `right[i * rank + g]` is element `i` times generator `g`.
    right: Vec<u32>,
    right_inv: Vec<u32>,
    generators: Vec<u32>,
}

impl std::fmt::Debug for QuotientGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuotientGroup")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("rank", &self.rank)
            .field("order", &self.elements.len())
            .finish()
    }
}

/// Enumerates the image of the free group of rank `rank` in truncated
/// series mod `p` of degree `d`.
pub fn build_quotient(
    rank: usize,
    p: u32,
    d: usize,
    budget: usize,
) -> Result<Arc<QuotientGroup>, OracleError> {
    if !is_prime(p as u64) {
        return Err(OracleError::NotPrime(p as u64));
    }
    if d == 0 {
        return Err(OracleError::ZeroDegree);
    }
    let layout = Layout::new(rank, d);
    let mut q = QuotientGroup {
        p,
        degree: d,
        rank,
        layout,
        elements: Vec::new(),
        index: HashMap::new(),
        inverses: Vec::new(),
        right: Vec::new(),
        right_inv: Vec::new(),
        generators: Vec::new(),
    };
    let identity: Box<[u32]> = vec![0; q.layout.len].into_boxed_slice();
    q.index.insert(identity.clone(), 0);
    q.elements.push(identity);
    let gen_vectors: Vec<Box<[u32]>> = (0..rank)
        .map(|g| {
            let mut v = vec![0; q.layout.len];
            v[q.layout.linear[g]] = 1 % p;
            v.into_boxed_slice()
        })
        .collect();

    let mut queue = VecDeque::from([0u32]);
    let mut right = Vec::new();
    while let Some(i) = queue.pop_front() {
        debug_assert_eq!(right.len(), i as usize * rank);
        for g in &gen_vectors {
            let prod = q.raw_mul(&q.elements[i as usize], g);
            let j = match q.index.get(&prod) {
                Some(&j) => j,
                None => {
                    if q.elements.len() >= budget {
                        return Err(OracleError::BudgetExceeded {
                            what: format!("enumerating the image group for p={p}, d={d}"),
                            bound: budget,
                        });
                    }
                    let j = q.elements.len() as u32;
                    q.index.insert(prod.clone(), j);
                    q.elements.push(prod);
                    queue.push_back(j);
                    j
                }
            };
            right.push(j);
        }
    }
    let n = q.elements.len();
    let mut right_inv = vec![0u32; n * rank];
    for i in 0..n {
        for g in 0..rank {
            right_inv[right[i * rank + g] as usize * rank + g] = i as u32;
        }
    }
    q.right = right;
    q.right_inv = right_inv;
    q.generators = (0..rank).map(|g| q.right[g]).collect();
    q.inverses = (0..n)
        .map(|i| {
            let inv = q.raw_inverse(&q.elements[i]);
            q.index[&inv]
        })
        .collect();
    Ok(Arc::new(q))
}

impl QuotientGroup {
    fn raw_mul(&self, a: &[u32], b: &[u32]) -> Box<[u32]> {
        let p = self.p as u64;
        let mut acc: Vec<u64> = a.iter().zip(b).map(|(&x, &y)| x as u64 + y as u64).collect();
        for &(i, j, k) in &self.layout.pairs {
            let (x, y) = (a[i as usize], b[j as usize]);
            if x != 0 && y != 0 {
                acc[k as usize] += (x as u64 * y as u64) % p;
            }
        }
        acc.into_iter().map(|c| (c % p) as u32).collect()
    }

    /// Product of the augmentation parts only.
    fn alg_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut acc = vec![0u64; a.len()];
        for &(i, j, k) in &self.layout.pairs {
            let (x, y) = (a[i as usize], b[j as usize]);
            if x != 0 && y != 0 {
                acc[k as usize] += (x as u64 * y as u64) % p;
            }
        }
        acc.into_iter().map(|c| (c % p) as u32).collect()
    }

    /// `(1 + A)⁻¹ = 1 + Σ_{k≥1} (−A)^k`.
    fn raw_inverse(&self, a: &[u32]) -> Box<[u32]> {
        let p = self.p;
        let neg: Vec<u32> = a.iter().map(|&x| (p - x) % p).collect();
        let mut sum = neg.clone();
        let mut power = neg.clone();
        for _ in 2..=self.degree {
            power = self.alg_mul(&power, &neg);
            for (s, x) in sum.iter_mut().zip(&power) {
                *s = (*s + x) % p;
            }
        }
        sum.into_boxed_slice()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// Image of the `g`-th free generator.
    pub fn generator(&self, g: usize) -> u32 {
        self.generators[g]
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// Coefficients of the augmentation part of element `i`.
    pub fn coefficients(&self, i: u32) -> &[u32] {
        &self.elements[i as usize]
    }

    /// Canonical text encoding of element `i`.
    pub fn encode(&self, i: u32) -> String {
        let c = self.coefficients(i);
        if self.p < 10 {
            c.iter().map(|x| char::from(b'0' + *x as u8)).collect()
        } else {
            let mut s = String::new();
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    s.push('.');
                }
                write!(s, "{x}").unwrap();
            }
            s
        }
    }

    /// Inverse of [`QuotientGroup::encode`].
    pub fn decode(&self, text: &str) -> Option<u32> {
        let coeffs: Option<Vec<u32>> = if self.p < 10 {
            text.chars().map(|c| c.to_digit(10)).collect()
        } else {
            text.split('.').map(|t| t.parse().ok()).collect()
        };
        let coeffs = coeffs?;
        self.index.get(coeffs.as_slice()).copied()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let prod = self.raw_mul(&self.elements[a as usize], &self.elements[b as usize]);
        *self.index.get(&prod).expect("the image group is closed")
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut result = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        result
    }

    /// `g⁻¹ a g`.
    pub fn conjugate(&self, a: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inverse(g), a), g)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        let left = self.mul(self.inverse(a), self.inverse(b));
        self.mul(left, self.mul(a, b))
    }

    /// Image of a word; the word's alphabet must have `rank` generators.
    pub fn project(&self, w: &Word) -> Result<u32, OracleError> {
        let found = w.alphabet().len();
        if found != self.rank {
            return Err(OracleError::RankMismatch {
                expected: self.rank,
                found,
            });
        }
        let mut cur = 0u32;
        for l in w.letters() {
            let slot = cur as usize * self.rank + l.gen as usize;
            cur = match l.sign {
                Sign::Pos => self.right[slot],
                Sign::Neg => self.right_inv[slot],
            };
        }
        Ok(cur)
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> SubgroupHandle {
        SubgroupHandle::trivial(self.clone())
    }

    pub fn whole_group(self: &Arc<Self>) -> SubgroupHandle {
        let mut h = self.trivial_subgroup();
        for &g in &self.generators {
            h.extend(g);
        }
        h
    }

    pub fn subgroup_generated(self: &Arc<Self>, gens: &[u32]) -> SubgroupHandle {
        let mut h = self.trivial_subgroup();
        for &g in gens {
            h.extend(g);
        }
        h
    }

    /// Smallest subgroup containing `gens` and closed under conjugation by
    /// the generator images.
    pub fn normal_closure_of(self: &Arc<Self>, gens: &[u32]) -> SubgroupHandle {
        let mut h = self.subgroup_generated(gens);
        h.close_normally();
        h
    }

    pub fn normal_closure(self: &Arc<Self>, words: &[Word]) -> Result<SubgroupHandle, OracleError> {
        let images = words
            .iter()
            .map(|w| self.project(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.normal_closure_of(&images))
    }
}

/// A subgroup of a [`QuotientGroup`], held as an explicit element set.
#[derive(Clone)]
pub struct SubgroupHandle {
    group: Arc<QuotientGroup>,
    mask: Vec<u64>,
    elements: Vec<u32>,
    generators: Vec<u32>,
}

impl std::fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupHandle")
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for SubgroupHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.mask == other.mask
    }
}

impl Eq for SubgroupHandle {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupOp {
    Meet,
    Commutator,
    Join,
}

pub fn subgroup_op(
    kind: SubgroupOp,
    a: &SubgroupHandle,
    b: &SubgroupHandle,
) -> Result<SubgroupHandle, OracleError> {
    match kind {
        SubgroupOp::Meet => a.meet(b),
        SubgroupOp::Commutator => a.commutator(b),
        SubgroupOp::Join => a.join(b),
    }
}

impl SubgroupHandle {
    fn trivial(group: Arc<QuotientGroup>) -> SubgroupHandle {
        let words = group.order().div_ceil(64);
        let mut mask = vec![0u64; words];
        mask[0] |= 1;
        SubgroupHandle {
            group,
            mask,
            elements: vec![0],
            generators: Vec::new(),
        }
    }

    fn insert(&mut self, x: u32) -> bool {
        let (w, b) = (x as usize / 64, x as usize % 64);
        if self.mask[w] >> b & 1 == 1 {
            return false;
        }
        self.mask[w] |= 1 << b;
        self.elements.push(x);
        true
    }

    /// Adds `g` as a generator and closes under multiplication.
    fn extend(&mut self, g: u32) {
        if self.contains(g) {
            return;
        }
        self.generators.push(g);
        let q = self.group.clone();
        let old = self.elements.len();
        // Old elements are closed under the old generators, so only the new
        // generator needs applying to them.
        let mut frontier = VecDeque::new();
        for k in 0..old {
            let y = q.mul(self.elements[k], g);
            if self.insert(y) {
                frontier.push_back(y);
            }
        }
        while let Some(x) = frontier.pop_front() {
            for gi in 0..self.generators.len() {
                let y = q.mul(x, self.generators[gi]);
                if self.insert(y) {
                    frontier.push_back(y);
                }
            }
        }
    }

    /// Adds conjugates of generators by the group generators until stable.
    fn close_normally(&mut self) {
        let q = self.group.clone();
        let mut i = 0;
        while i < self.generators.len() {
            let s = self.generators[i];
            for &x in q.generators() {
                self.extend(q.conjugate(s, x));
            }
            i += 1;
        }
    }

    fn check_owner(&self, other: &SubgroupHandle) -> Result<(), OracleError> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(OracleError::OwnerMismatch)
        }
    }

    pub fn group(&self) -> &Arc<QuotientGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn contains(&self, x: u32) -> bool {
        let (w, b) = (x as usize / 64, x as usize % 64);
        self.mask[w] >> b & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &SubgroupHandle) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    /// Closure under products and inverses, checked element by element.
    pub fn is_closed(&self) -> bool {
        let q = &self.group;
        self.contains(0)
            && self.elements.iter().all(|&x| {
                self.contains(q.inverse(x))
                    && self.generators.iter().all(|&g| self.contains(q.mul(x, g)))
            })
            && self.generators.iter().all(|&g| self.contains(g))
    }

    /// Normality in the whole group, checked on generators.
    pub fn is_normal(&self) -> bool {
        let q = &self.group;
        self.generators
            .iter()
            .all(|&s| q.generators().iter().all(|&x| self.contains(q.conjugate(s, x))))
    }

    /// Normality in `ambient`, checked on generators of both.
    pub fn is_normal_in(&self, ambient: &SubgroupHandle) -> bool {
        let q = &self.group;
        self.is_subgroup_of(ambient)
            && self
                .generators
                .iter()
                .all(|&s| ambient.generators.iter().all(|&x| self.contains(q.conjugate(s, x))))
    }

    pub fn meet(&self, other: &SubgroupHandle) -> Result<SubgroupHandle, OracleError> {
        self.check_owner(other)?;
        let mask: Vec<u64> = self.mask.iter().zip(&other.mask).map(|(a, b)| a & b).collect();
        let mut members = Vec::new();
        for (w, bits) in mask.iter().enumerate() {
            let mut bits = *bits;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                members.push((w * 64 + b) as u32);
                bits &= bits - 1;
            }
        }
        // Pick generators greedily from the member list.
        let mut gens = self.group.trivial_subgroup();
        for &x in &members {
            gens.extend(x);
        }
        debug_assert_eq!(gens.mask, mask);
        Ok(SubgroupHandle {
            group: self.group.clone(),
            mask,
            elements: members,
            generators: gens.generators,
        })
    }

    pub fn join(&self, other: &SubgroupHandle) -> Result<SubgroupHandle, OracleError> {
        self.check_owner(other)?;
        let mut h = self.clone();
        for &g in &other.generators {
            h.extend(g);
        }
        Ok(h)
    }

    /// `[A, B]`, generated by all commutators `[a, b]` with `a ∈ A`, `b ∈ B`.
    pub fn commutator(&self, other: &SubgroupHandle) -> Result<SubgroupHandle, OracleError> {
        self.check_owner(other)?;
        let q = self.group.clone();
        let pairs = self.order().saturating_mul(other.order());
        if pairs > PAIR_LIMIT {
            if self.is_normal() && other.is_normal() {
                let mut comms = Vec::new();
                for &a in &self.generators {
                    for &b in &other.generators {
                        comms.push(q.commutator(a, b));
                    }
                }
                return Ok(q.normal_closure_of(&comms));
            }
            return Err(OracleError::BudgetExceeded {
                what: "forming commutators of non-normal subgroups".into(),
                bound: PAIR_LIMIT,
            });
        }
        let mut seen = vec![0u64; self.mask.len()];
        let mut comms = Vec::new();
        for &a in &self.elements {
            for &b in &other.elements {
                let c = q.commutator(a, b);
                let (w, bit) = (c as usize / 64, c as usize % 64);
                if seen[w] >> bit & 1 == 0 {
                    seen[w] |= 1 << bit;
                    comms.push(c);
                }
            }
        }
        comms.sort_unstable();
        Ok(q.subgroup_generated(&comms))
    }
}
