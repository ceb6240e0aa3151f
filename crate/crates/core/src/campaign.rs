//! Seeded Peiffer-invariance campaigns checked in a finite shadow.

use serde::Serialize;
use thiserror::Error;

use crate::lambda::{lambda2, lambda3};
use crate::oracle::{OracleError, Shadow};
use crate::random::{case_rng, case_seed, mutate, SequenceSampler};
use crate::sequences::{IdentitySequence, SequenceError};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CampaignError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no base identity sequences are available for sampling")]
    NoBases,
}

/// `Λ` for two or three classes.
pub fn lambda_word(c: &IdentitySequence) -> Result<Word, SequenceError> {
    match c.presentation().class_count() {
        2 => Ok(lambda2(c)?.representative),
        _ => Ok(lambda3(c)?.representative),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub count: usize,
    pub moves: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseFailure {
    pub index: usize,
    pub seed: u64,
    pub original: String,
    pub mutated: String,
    pub moves: Vec<String>,
    pub lambda_original: String,
    pub lambda_mutated: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub schema: u32,
    pub p: u32,
    pub d: usize,
    pub seed: u64,
    pub count: usize,
    pub moves: usize,
    pub passed: usize,
    /// Cases whose `Λ` coset was nontrivial in the shadow.
    pub nontrivial: usize,
    pub failures: Vec<CaseFailure>,
}

impl FuzzReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.count
    }
}

/// For each case: sample a sequence, apply up to `moves` random Peiffer
/// moves, and test `Λ(original) ≡ Λ(mutated)` in the shadow.
pub fn fuzz_peiffer(
    shadow: &Shadow,
    sampler: &SequenceSampler,
    cfg: FuzzConfig,
) -> Result<FuzzReport, CampaignError> {
    if sampler.bases().is_empty() {
        return Err(CampaignError::NoBases);
    }
    let mut passed = 0;
    let mut nontrivial = 0;
    let mut failures = Vec::new();
    for index in 0..cfg.count {
        let mut rng = case_rng(cfg.seed, index as u64);
        let original = sampler.sample(&mut rng);
        let (mutated, log) = mutate(&mut rng, &original, cfg.moves, sampler.conj_len);
        let lo = lambda_word(&original)?;
        let lm = lambda_word(&mutated)?;
        if !shadow.denominator().contains(shadow.project(&lo)?) {
            nontrivial += 1;
        }
        if shadow.congruent(&lo, &lm)? {
            passed += 1;
        } else {
            failures.push(CaseFailure {
                index,
                seed: case_seed(cfg.seed, index as u64),
                original: original.to_string(),
                mutated: mutated.to_string(),
                moves: log.iter().map(|m| format!("{m:?}")).collect(),
                lambda_original: lo.to_string(),
                lambda_mutated: lm.to_string(),
            });
        }
    }
    let group = shadow.group();
    Ok(FuzzReport {
        schema: 1,
        p: group.p(),
        d: group.degree(),
        seed: cfg.seed,
        count: cfg.count,
        moves: cfg.moves,
        passed,
        nontrivial,
        failures,
    })
}
