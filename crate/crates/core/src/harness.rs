//! Verification campaigns: engine output against closed forms, and the
//! well-definedness scan for the original Q sequence.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::quasipoly::{self, QuasipolyError, QuasipolySolution, WeightSequence};
use crate::recurrence::{self, EngineError, NestedRecurrence, Stepper, UnderflowPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Quasipoly(#[from] QuasipolyError),
    #[error("range {n_max} is too short, need at least {min}")]
    RangeTooShort { n_max: usize, min: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub expected: BigInt,
    pub actual: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    /// Indices `1..=range_end` were compared.
    pub range_end: usize,
    pub matched: bool,
    pub first_mismatch: Option<Mismatch>,
    /// Smallest `m` such that the recurrence identity holds on the closed
    /// form at every checked index `≥ m`.
    pub first_valid_index: usize,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.matched { "pass" } else { "FAIL" };
        write!(
            f,
            "{}: {} on [1, {}], first_valid_index {}",
            self.subject, status, self.range_end, self.first_valid_index
        )?;
        if let Some(m) = &self.first_mismatch {
            write!(
                f,
                ", first mismatch at {}: expected {}, got {}",
                m.index, m.expected, m.actual
            )?;
        }
        Ok(())
    }
}

/// Whether `a(m) = Σ_j a(m - a(m - s_j))` holds on `terms` (1-indexed),
/// with `a(i) = 0` for `i ≤ 0`. Outer indices `≥ m` count as a failure.
pub fn recurrence_identity_holds(terms: &[BigInt], shifts: &[usize], m: usize) -> bool {
    if m > terms.len() || shifts.iter().any(|&s| s >= m) {
        return false;
    }
    let mut sum = BigInt::zero();
    for &s in shifts {
        let outer = BigInt::from(m) - &terms[m - s - 1];
        if outer <= BigInt::zero() {
            continue;
        }
        match outer.to_usize() {
            Some(i) if i < m => sum += &terms[i - 1],
            _ => return false,
        }
    }
    sum == terms[m - 1]
}

/// Smallest `m` with the identity holding at every index in `[m, len]`.
/// Only indices past the largest shift are considered, so the result is at
/// least `max_shift + 1`; it is `len + 1` when the last term already fails.
pub fn first_valid_index(terms: &[BigInt], rec: &NestedRecurrence) -> usize {
    let lowest = rec.max_shift() + 1;
    let mut m = terms.len() + 1;
    while m > lowest && recurrence_identity_holds(terms, rec.shifts(), m - 1) {
        m -= 1;
    }
    m.max(lowest)
}

fn first_mismatch(expected: &[BigInt], actual: &[BigInt]) -> Option<Mismatch> {
    expected
        .iter()
        .zip(actual)
        .enumerate()
        .find(|(_, (e, a))| e != a)
        .map(|(i, (e, a))| Mismatch {
            index: i + 1,
            expected: e.clone(),
            actual: a.clone(),
        })
}

/// Runs the Q-recurrence from the solution's initial condition and compares
/// with the closed form on `1..=n_max`.
pub fn verify_theorem(
    d: u32,
    n_max: usize,
    weights: Option<&WeightSequence>,
) -> Result<VerificationReport, HarnessError> {
    let sol = QuasipolySolution::new(d, weights.cloned())?;
    let min = sol.initial_len() + 1;
    if n_max < min {
        return Err(HarnessError::RangeTooShort { n_max, min });
    }
    let rec = NestedRecurrence::hofstadter();
    let expected = sol.buffer(n_max);
    let computed = recurrence::compute(
        &rec,
        &sol.initial_condition(),
        n_max,
        UnderflowPolicy::ZeroConvention,
    )?;
    let mismatch = first_mismatch(expected.terms(), computed.terms());
    let subject = if weights.is_some() {
        format!("theorem d={d} (weighted)")
    } else {
        format!("theorem d={d}")
    };
    Ok(VerificationReport {
        subject,
        range_end: n_max,
        matched: mismatch.is_none(),
        first_mismatch: mismatch,
        first_valid_index: first_valid_index(expected.terms(), &rec),
    })
}

/// [`verify_theorem`] over several `d`, one job per value. Results keep the
/// input order.
pub fn verify_theorem_sweep(
    ds: &[u32],
    n_max: usize,
) -> Vec<Result<VerificationReport, HarnessError>> {
    ds.par_iter().map(|&d| verify_theorem(d, n_max, None)).collect()
}

/// Runs the Q-recurrence from `[3, 2, 1]` and compares with Golomb's
/// closed form.
pub fn verify_golomb(n_max: usize) -> Result<VerificationReport, HarnessError> {
    if n_max < 3 {
        return Err(HarnessError::RangeTooShort { n_max, min: 3 });
    }
    let rec = NestedRecurrence::hofstadter();
    let expected = quasipoly::golomb_buffer(n_max);
    let computed = recurrence::compute(
        &rec,
        &expected.terms()[..3],
        n_max,
        UnderflowPolicy::ZeroConvention,
    )?;
    let mismatch = first_mismatch(expected.terms(), computed.terms());
    Ok(VerificationReport {
        subject: "golomb".to_string(),
        range_end: n_max,
        matched: mismatch.is_none(),
        first_mismatch: mismatch,
        first_valid_index: first_valid_index(expected.terms(), &rec),
    })
}

/// Smallest `n ≤ n_max` past the initial condition with `a(n) > n`, for
/// the Q-recurrence from `init` under the zero convention. Initial values
/// are given, not computed, and are not scanned.
pub fn q_wellposed_scan(init: &[BigInt], n_max: usize) -> Result<Option<usize>, EngineError> {
    let rec = NestedRecurrence::hofstadter();
    let mut stepper = Stepper::new(&rec, init, UnderflowPolicy::ZeroConvention)?;
    for _ in 0..n_max {
        let (n, value) = stepper.step()?;
        if n > init.len() && *value > BigInt::from(n) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
