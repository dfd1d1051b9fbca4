//! k-NIM classification of explicit trees and the resulting counts.
//!
//! A tree with `M(T) >= k + 1` is k-NIM exactly when every HDV `v` satisfies
//!
//! * (i) at most `3 - k` components of `T - v` have more than one vertex, and
//! * (ii) `δ(v) = deg_T(v) - deg_H(v)` reaches the threshold selected by
//!   [`DeltaRule`] (`k + 2` by default).
//!
//! Paths are counted as NIM (`k = 1`); for `k = 2, 3` trees below the
//! multiplicity threshold are reported separately and never counted. No tree
//! is k-NIM for `k >= 4`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::enumerate_free_trees;
use crate::multiplicity::max_multiplicity;
use crate::tree::{Tree, TreeError};

/// Largest `n` accepted by [`count_k_nim_oracle`].
pub const MAX_ORACLE_VERTICES: usize = 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("n = {n} is below the minimum of {min}")]
    InvalidRange { n: u64, min: u64 },
    #[error("tree is not NIM")]
    NotNimTree,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Threshold used for condition (ii).
///
/// `KPlusTwo` reproduces every published count; `KPlusOne` is kept so the
/// discrepancy stays testable (it admits the double star on six vertices as
/// a NIM tree).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaRule {
    #[default]
    KPlusTwo,
    KPlusOne,
}

impl DeltaRule {
    pub fn threshold(self, k: usize) -> usize {
        match self {
            DeltaRule::KPlusTwo => k + 2,
            DeltaRule::KPlusOne => k + 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    KNim,
    NotKNim,
    BelowMultiplicityThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// (i); `required` is the maximum allowed.
    NonSingletonComponents,
    /// (ii); `required` is the minimum allowed.
    Delta,
    /// No tree is k-NIM for k >= 4; `required` is the largest admissible k.
    KAtMostThree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionFailure {
    pub vertex: Option<usize>,
    pub condition: Condition,
    pub observed: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KNimVerdict {
    pub k: usize,
    pub verdict: Verdict,
    /// `M(T)`.
    pub m: usize,
    pub failures: Vec<ConditionFailure>,
}

impl KNimVerdict {
    pub fn is_k_nim(&self) -> bool {
        self.verdict == Verdict::KNim
    }
}

pub fn classify_k_nim(t: &Tree, k: usize) -> Result<KNimVerdict, ClassifyError> {
    classify_k_nim_with(t, k, DeltaRule::default())
}

pub fn classify_k_nim_with(t: &Tree, k: usize, rule: DeltaRule) -> Result<KNimVerdict, ClassifyError> {
    if k == 0 {
        return Err(ClassifyError::InvalidK);
    }
    let m = max_multiplicity(t);
    let verdict = |verdict, failures| KNimVerdict {
        k,
        verdict,
        m,
        failures,
    };
    if k >= 4 {
        return Ok(verdict(
            Verdict::NotKNim,
            vec![ConditionFailure {
                vertex: None,
                condition: Condition::KAtMostThree,
                observed: k,
                required: 3,
            }],
        ));
    }
    if k == 1 && t.is_path() {
        return Ok(verdict(Verdict::KNim, Vec::new()));
    }
    if m < k + 1 {
        return Ok(verdict(Verdict::BelowMultiplicityThreshold, Vec::new()));
    }
    let max_nonsingleton = 3 - k;
    let min_delta = rule.threshold(k);
    let mut failures = Vec::new();
    for info in t.hdv_profile() {
        if info.nonsingleton_components > max_nonsingleton {
            failures.push(ConditionFailure {
                vertex: Some(info.vertex),
                condition: Condition::NonSingletonComponents,
                observed: info.nonsingleton_components,
                required: max_nonsingleton,
            });
        }
        if info.delta < min_delta {
            failures.push(ConditionFailure {
                vertex: Some(info.vertex),
                condition: Condition::Delta,
                observed: info.delta,
                required: min_delta,
            });
        }
    }
    let v = if failures.is_empty() {
        Verdict::KNim
    } else {
        Verdict::NotKNim
    };
    Ok(verdict(v, failures))
}

fn check_oracle_args(n: usize, k: usize) -> Result<(), ClassifyError> {
    if k == 0 {
        return Err(ClassifyError::InvalidK);
    }
    if n > MAX_ORACLE_VERTICES {
        return Err(TreeError::SizeLimitExceeded {
            what: "oracle size",
            value: n,
            limit: MAX_ORACLE_VERTICES,
        }
        .into());
    }
    Ok(())
}

/// Number of isomorphism classes of k-NIM trees on `n` vertices, by
/// classifying every free tree.
pub fn count_k_nim_oracle(n: usize, k: usize) -> Result<u64, ClassifyError> {
    count_k_nim_oracle_with(n, k, DeltaRule::default())
}

pub fn count_k_nim_oracle_with(n: usize, k: usize, rule: DeltaRule) -> Result<u64, ClassifyError> {
    check_oracle_args(n, k)?;
    if n == 0 {
        return Ok(0);
    }
    let count = enumerate_free_trees(n)?
        .par_bridge()
        .filter(|t| {
            classify_k_nim_with(t, k, rule)
                .map(|v| v.is_k_nim())
                .unwrap_or(false)
        })
        .count();
    Ok(count as u64)
}

/// The k-NIM trees on `n` vertices, in enumeration order.
pub fn k_nim_trees(n: usize, k: usize) -> Result<Vec<Tree>, ClassifyError> {
    check_oracle_args(n, k)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for t in enumerate_free_trees(n)? {
        if classify_k_nim(&t, k)?.is_k_nim() {
            out.push(t);
        }
    }
    Ok(out)
}

/// Number of 2-NIM trees on `n` vertices: `⌊(n-4)/2⌋·⌈(n-4)/2⌉` from `n = 8`
/// on, with the tabulated values below that.
pub fn two_nim_closed_form(n: u64) -> u64 {
    const PREFIX: [u64; 7] = [0, 0, 0, 0, 1, 2, 3];
    if n == 0 {
        return 0;
    }
    if n < 8 {
        return PREFIX[(n - 1) as usize];
    }
    let m = n - 4;
    (m / 2) * m.div_ceil(2)
}

/// The case-by-case summation behind the 2-NIM closed form:
/// `n - 4 + ⌊(n-8)/2⌋ + Σ_{j=1}^{n-8} ⌊(n-6-j)/2⌋`.
pub fn two_nim_summation_form(n: u64) -> Result<u64, ClassifyError> {
    if n < 10 {
        return Err(ClassifyError::InvalidRange { n, min: 10 });
    }
    let sum: u64 = (1..=n - 8).map(|j| (n - 6 - j) / 2).sum();
    Ok(n - 4 + (n - 8) / 2 + sum)
}

/// Number of 3-NIM trees on `n` vertices. The only candidates are stars, and
/// `S_n` qualifies exactly when its center has degree at least 5.
pub fn three_nim_count(n: u64) -> u64 {
    // S_n: one HDV with delta n-1, no non-singleton components, M = n-2.
    let m_ok = n >= 2 && n - 2 >= 4;
    let delta_ok = n > DeltaRule::default().threshold(3) as u64;
    u64::from(m_ok && delta_ok)
}
