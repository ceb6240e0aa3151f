//! Finite shadows of `R₁∩…∩Rₙ` modulo the symmetric commutator product.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::quotient::{build_quotient, QuotientGroup, SubgroupHandle};
use super::OracleError;
use crate::lambda::{denominator_factors, DenominatorFactor};
use crate::sequences::ColoredPresentation;
use crate::words::Word;

#[derive(Debug, Clone)]
pub struct FactorShadow {
    pub factor: DenominatorFactor,
    pub left: SubgroupHandle,
    pub right: SubgroupHandle,
    pub commutator: SubgroupHandle,
}

/// Images of the class closures `R̄ᵢ`, their intersection `N̄` and the
/// denominator `D̄` inside a finite p-quotient of the free group.
#[derive(Debug, Clone)]
pub struct Shadow {
    presentation: Arc<ColoredPresentation>,
    group: Arc<QuotientGroup>,
    closures: Vec<SubgroupHandle>,
    factors: Vec<FactorShadow>,
    intersection: SubgroupHandle,
    denominator: SubgroupHandle,
}

impl Shadow {
    /// Shadow for any number `n ≥ 2` of classes.
    pub fn new(
        presentation: Arc<ColoredPresentation>,
        p: u32,
        d: usize,
        budget: usize,
    ) -> Result<Shadow, OracleError> {
        let n = presentation.class_count();
        if n < 2 {
            return Err(OracleError::WrongClassCount {
                expected: "at least 2".into(),
                found: n,
            });
        }
        let group = build_quotient(presentation.alphabet().len(), p, d, budget)?;
        let closures = presentation
            .classes()
            .iter()
            .map(|class| group.normal_closure(class))
            .collect::<Result<Vec<_>, _>>()?;

        let mut meets: BTreeMap<Vec<usize>, SubgroupHandle> = BTreeMap::new();
        let mut meet_of = |classes: &[usize]| -> Result<SubgroupHandle, OracleError> {
            if let Some(h) = meets.get(classes) {
                return Ok(h.clone());
            }
            let mut h = closures[classes[0] - 1].clone();
            for &c in &classes[1..] {
                h = h.meet(&closures[c - 1])?;
            }
            meets.insert(classes.to_vec(), h.clone());
            Ok(h)
        };

        let all: Vec<usize> = (1..=n).collect();
        let intersection = meet_of(&all)?;
        let mut factors = Vec::new();
        let mut denominator = group.trivial_subgroup();
        for factor in denominator_factors(n) {
            let left = meet_of(&factor.left)?;
            let right = meet_of(&factor.right)?;
            let commutator = left.commutator(&right)?;
            denominator = denominator.join(&commutator)?;
            factors.push(FactorShadow {
                factor,
                left,
                right,
                commutator,
            });
        }
        Ok(Shadow {
            presentation,
            group,
            closures,
            factors,
            intersection,
            denominator,
        })
    }

    pub fn presentation(&self) -> &Arc<ColoredPresentation> {
        &self.presentation
    }

    pub fn group(&self) -> &Arc<QuotientGroup> {
        &self.group
    }

    pub fn closures(&self) -> &[SubgroupHandle] {
        &self.closures
    }

    pub fn factors(&self) -> &[FactorShadow] {
        &self.factors
    }

    pub fn intersection(&self) -> &SubgroupHandle {
        &self.intersection
    }

    pub fn denominator(&self) -> &SubgroupHandle {
        &self.denominator
    }

    pub fn project(&self, w: &Word) -> Result<u32, OracleError> {
        self.group.project(w)
    }

    /// Whether `D̄` is a normal subgroup of `N̄`.
    pub fn denominator_is_normal(&self) -> bool {
        self.denominator.is_normal_in(&self.intersection)
    }

    /// `project(u·v⁻¹) ∈ D̄`. A `false` refutes `u ≡ v mod D` in the free
    /// group; a `true` is only evidence for it.
    pub fn congruent(&self, u: &Word, v: &Word) -> Result<bool, OracleError> {
        let pu = self.project(u)?;
        let pv = self.project(v)?;
        let x = self.group.mul(pu, self.group.inverse(pv));
        Ok(self.denominator.contains(x))
    }

    /// Label of the coset `x·D̄`: the smallest encoding among its elements.
    pub fn coset_label(&self, x: u32) -> String {
        self.denominator
            .elements()
            .iter()
            .map(|&d| self.group.coefficients(self.group.mul(x, d)))
            .min()
            .map(|c| encode_coefficients(c, self.group.p()))
            .expect("the denominator contains the identity")
    }

    /// Order of `x·D̄` in `N̄/D̄`; `None` if `x ∉ N̄`.
    pub fn coset_order(&self, x: u32) -> Option<u64> {
        if !self.intersection.contains(x) {
            return None;
        }
        let mut k = 1u64;
        let mut y = x;
        while !self.denominator.contains(y) {
            y = self.group.mul(y, x);
            k += 1;
        }
        Some(k)
    }

    pub fn quotient_order(&self) -> usize {
        self.intersection.order() / self.denominator.order()
    }

    /// Whether commutators of generators of `N̄` fall in `D̄`.
    pub fn quotient_is_abelian(&self) -> bool {
        let g = self.intersection.generators();
        g.iter().all(|&a| {
            g.iter()
                .all(|&b| self.denominator.contains(self.group.commutator(a, b)))
        })
    }

    /// Orders of one representative per coset of `D̄` in `N̄`.
    fn coset_orders(&self) -> Vec<u64> {
        let q = &self.group;
        let mut visited = vec![false; q.order()];
        let mut orders = Vec::new();
        for &x in self.intersection.elements() {
            if visited[x as usize] {
                continue;
            }
            for &d in self.denominator.elements() {
                visited[q.mul(x, d) as usize] = true;
            }
            orders.push(self.coset_order(x).expect("x lies in the intersection"));
        }
        orders
    }

    /// Invariants `p^{e₁} ≤ p^{e₂} ≤ …` of `N̄/D̄` when it is abelian, read off
    /// the number of cosets killed by each `p^k`.
    pub fn quotient_invariants(&self) -> Option<Vec<u64>> {
        if !self.denominator_is_normal() || !self.quotient_is_abelian() {
            return None;
        }
        let p = self.group.p() as u64;
        let orders = self.coset_orders();
        let max_order = orders.iter().copied().max().unwrap_or(1);
        // omega[k] = log_p #{cosets with order dividing p^k}.
        let mut omega = vec![0u32];
        let mut pk = 1u64;
        while pk < max_order {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count() as u64;
            omega.push(log_p(count, p)?);
        }
        // Number of cyclic factors of order ≥ p^k is omega[k] − omega[k−1].
        let mut invariants = Vec::new();
        let top = omega.len() - 1;
        for k in 1..=top {
            let at_least_k = omega[k] - omega[k - 1];
            let at_least_next = if k < top { omega[k + 1] - omega[k] } else { 0 };
            for _ in 0..at_least_k - at_least_next {
                invariants.push(p.pow(k as u32));
            }
        }
        invariants.sort_unstable();
        Some(invariants)
    }

    /// Full report, with coset data for each named word.
    pub fn report(&self, words: &[(String, Word)]) -> Result<ShadowReport, OracleError> {
        let q = &self.group;
        let quotient_order = self.quotient_order() as u64;
        let invariants = self.quotient_invariants();
        let mut word_reports = Vec::new();
        for (name, w) in words {
            let x = self.project(w)?;
            let coset_order = self.coset_order(x);
            word_reports.push(WordReport {
                name: name.clone(),
                word: w.to_string(),
                image: q.encode(x),
                in_intersection: self.intersection.contains(x),
                in_denominator: self.denominator.contains(x),
                coset: self.coset_label(x),
                coset_order,
                generates_quotient: coset_order == Some(quotient_order),
            });
        }
        Ok(ShadowReport {
            schema: 1,
            p: q.p(),
            d: q.degree(),
            rank: q.rank(),
            classes: self.presentation.class_count(),
            image_order: q.order() as u64,
            closure_orders: self.closures.iter().map(|h| h.order() as u64).collect(),
            factors: self
                .factors
                .iter()
                .map(|f| FactorReport {
                    factor: f.factor.to_string(),
                    left_order: f.left.order() as u64,
                    right_order: f.right.order() as u64,
                    commutator_order: f.commutator.order() as u64,
                })
                .collect(),
            intersection_order: self.intersection.order() as u64,
            denominator_order: self.denominator.order() as u64,
            denominator_normal: self.denominator_is_normal(),
            denominator_generators: self
                .denominator
                .generators()
                .iter()
                .map(|&g| q.encode(g))
                .collect(),
            quotient_order,
            quotient_abelian: self.quotient_is_abelian(),
            quotient_cyclic: invariants.as_ref().map(|v| v.len() <= 1),
            quotient_invariants: invariants,
            words: word_reports,
        })
    }
}

fn encode_coefficients(c: &[u32], p: u32) -> String {
    if p < 10 {
        c.iter().map(|x| char::from(b'0' + *x as u8)).collect()
    } else {
        c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn log_p(mut n: u64, p: u64) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        k += 1;
    }
    Some(k)
}

/// The three-class shadow.
pub fn shadow_of_i3(
    presentation: Arc<ColoredPresentation>,
    p: u32,
    d: usize,
    budget: usize,
) -> Result<Shadow, OracleError> {
    let found = presentation.class_count();
    if found != 3 {
        return Err(OracleError::WrongClassCount {
            expected: "3".into(),
            found,
        });
    }
    Shadow::new(presentation, p, d, budget)
}

/// One-shot congruence test; builds the shadow each call.
pub fn shadow_congruent(
    u: &Word,
    v: &Word,
    presentation: Arc<ColoredPresentation>,
    p: u32,
    d: usize,
    budget: usize,
) -> Result<bool, OracleError> {
    shadow_of_i3(presentation, p, d, budget)?.congruent(u, v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub factor: String,
    pub left_order: u64,
    pub right_order: u64,
    pub commutator_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordReport {
    pub name: String,
    pub word: String,
    pub image: String,
    pub in_intersection: bool,
    pub in_denominator: bool,
    pub coset: String,
    pub coset_order: Option<u64>,
    pub generates_quotient: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    pub schema: u32,
    pub p: u32,
    pub d: usize,
    pub rank: usize,
    pub classes: usize,
    pub image_order: u64,
    pub closure_orders: Vec<u64>,
    pub factors: Vec<FactorReport>,
    pub intersection_order: u64,
    pub denominator_order: u64,
    pub denominator_normal: bool,
    /// Encodings of a generating set of `D̄`.
    pub denominator_generators: Vec<String>,
    pub quotient_order: u64,
    pub quotient_abelian: bool,
    pub quotient_cyclic: Option<bool>,
    pub quotient_invariants: Option<Vec<u64>>,
    pub words: Vec<WordReport>,
}
