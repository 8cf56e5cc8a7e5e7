//! Evaluation of nested recurrences `a(n) = Σ_j a(n - a(n - s_j))`.
//!
//! Hofstadter's Q-recurrence is the shift list `[1, 2]`. Sequences are
//! 1-indexed; indices `≤ 0` are only reachable through an
//! [`UnderflowPolicy`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("a recurrence needs at least one shift")]
    NoShifts,
    #[error("shifts must be positive")]
    NonPositiveShift,
    #[error("initial condition is empty")]
    EmptyInit,
    #[error("requested length must be at least 1")]
    ZeroLength,
    #[error("initial condition of length {len} is shorter than the largest shift {max_shift}")]
    InitTooShort { len: usize, max_shift: usize },
    #[error("underflow at n={n}: term {term} references index {index}")]
    Underflow { n: usize, term: usize, index: BigInt },
    #[error("forward reference at n={n}: term {term} references index {index}")]
    ForwardReference { n: usize, term: usize, index: BigInt },
    #[error("buffer was not produced by a recurrence and cannot be extended")]
    NotExtendable,
    #[error("cannot shrink a buffer of length {len} to {requested}")]
    Shrink { len: usize, requested: usize },
}

/// The shift list `s_1, ..., s_t` of `a(n) = Σ_j a(n - a(n - s_j))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NestedRecurrence {
    shifts: Vec<usize>,
}

impl NestedRecurrence {
    pub fn new(shifts: Vec<usize>) -> Result<Self, EngineError> {
        if shifts.is_empty() {
            return Err(EngineError::NoShifts);
        }
        if shifts.contains(&0) {
            return Err(EngineError::NonPositiveShift);
        }
        Ok(NestedRecurrence { shifts })
    }

    /// Hofstadter's `Q(n) = Q(n - Q(n-1)) + Q(n - Q(n-2))`.
    pub fn hofstadter() -> Self {
        NestedRecurrence { shifts: vec![1, 2] }
    }

    pub fn shifts(&self) -> &[usize] {
        &self.shifts
    }

    pub fn max_shift(&self) -> usize {
        *self.shifts.iter().max().expect("nonempty")
    }
}

impl fmt::Display for NestedRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shifts: Vec<String> = self.shifts.iter().map(ToString::to_string).collect();
        write!(f, "shifts [{}]", shifts.join(","))
    }
}

/// What a reference to an index `≤ 0` means.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UnderflowPolicy {
    /// `a(n) = 0` for `n ≤ 0`.
    #[default]
    ZeroConvention,
    /// Any reference to `n ≤ 0` is an error.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Recurrence {
        recurrence: NestedRecurrence,
        init: Vec<BigInt>,
        policy: UnderflowPolicy,
    },
    /// Generated from a closed form or read from a file.
    Explicit(String),
}

/// A 1-indexed prefix of an integer sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceBuffer {
    terms: Vec<BigInt>,
    provenance: Provenance,
}

impl SequenceBuffer {
    pub fn explicit(terms: Vec<BigInt>, label: impl Into<String>) -> Self {
        SequenceBuffer {
            terms,
            provenance: Provenance::Explicit(label.into()),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `a(m)` for `1 ≤ m ≤ len`.
    pub fn get(&self, m: usize) -> Option<&BigInt> {
        m.checked_sub(1).and_then(|i| self.terms.get(i))
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<BigInt> {
        self.terms
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

/// Resolves an outer index `n - a(n - s)` against the computed prefix.
///
/// `terms` holds `a(1)..a(n-1)`.
fn lookup(
    terms: &[BigInt],
    n: usize,
    term: usize,
    index: BigInt,
    policy: UnderflowPolicy,
) -> Result<BigInt, EngineError> {
    if index <= BigInt::zero() {
        return match policy {
            UnderflowPolicy::ZeroConvention => Ok(BigInt::zero()),
            UnderflowPolicy::Strict => Err(EngineError::Underflow { n, term, index }),
        };
    }
    match index.to_usize() {
        Some(i) if i < n => Ok(terms[i - 1].clone()),
        _ => Err(EngineError::ForwardReference { n, term, index }),
    }
}

/// Computes `a(n)` from `terms = [a(1), ..., a(n-1)]`.
fn next_term(
    rec: &NestedRecurrence,
    terms: &[BigInt],
    policy: UnderflowPolicy,
) -> Result<BigInt, EngineError> {
    let n = terms.len() + 1;
    let mut sum = BigInt::zero();
    for (j, &s) in rec.shifts.iter().enumerate() {
        let term = j + 1;
        // n > len(init) >= max shift, so the inner index is always in range.
        let inner = &terms[n - s - 1];
        let outer = BigInt::from(n) - inner;
        sum += lookup(terms, n, term, outer, policy)?;
    }
    Ok(sum)
}

fn grow(
    rec: &NestedRecurrence,
    terms: &mut Vec<BigInt>,
    n_max: usize,
    policy: UnderflowPolicy,
) -> Result<(), EngineError> {
    terms.reserve(n_max.saturating_sub(terms.len()));
    while terms.len() < n_max {
        let next = next_term(rec, terms, policy)?;
        terms.push(next);
    }
    Ok(())
}

fn check_init(rec: &NestedRecurrence, init: &[BigInt], n_max: usize) -> Result<(), EngineError> {
    if init.is_empty() {
        return Err(EngineError::EmptyInit);
    }
    if n_max == 0 {
        return Err(EngineError::ZeroLength);
    }
    if n_max > init.len() && init.len() < rec.max_shift() {
        return Err(EngineError::InitTooShort {
            len: init.len(),
            max_shift: rec.max_shift(),
        });
    }
    Ok(())
}

/// Runs the recurrence from `init` until the buffer holds `n_max` terms.
///
/// When `n_max` is shorter than `init`, the buffer is the first `n_max`
/// initial values.
pub fn compute(
    rec: &NestedRecurrence,
    init: &[BigInt],
    n_max: usize,
    policy: UnderflowPolicy,
) -> Result<SequenceBuffer, EngineError> {
    check_init(rec, init, n_max)?;
    let mut terms: Vec<BigInt> = init.iter().take(n_max).cloned().collect();
    grow(rec, &mut terms, n_max, policy)?;
    Ok(SequenceBuffer {
        terms,
        provenance: Provenance::Recurrence {
            recurrence: rec.clone(),
            init: init.to_vec(),
            policy,
        },
    })
}

/// Continues a recurrence-produced buffer to `n_max` terms. The existing
/// prefix is kept as is.
pub fn extend(buf: &SequenceBuffer, n_max: usize) -> Result<SequenceBuffer, EngineError> {
    let Provenance::Recurrence {
        recurrence,
        init,
        policy,
    } = &buf.provenance
    else {
        return Err(EngineError::NotExtendable);
    };
    if n_max < buf.len() {
        return Err(EngineError::Shrink {
            len: buf.len(),
            requested: n_max,
        });
    }
    check_init(recurrence, init, n_max)?;
    let mut terms = buf.terms.clone();
    // A buffer cut short inside its initial condition resumes from it.
    while terms.len() < n_max && terms.len() < init.len() {
        terms.push(init[terms.len()].clone());
    }
    grow(recurrence, &mut terms, n_max, *policy)?;
    Ok(SequenceBuffer {
        terms,
        provenance: buf.provenance.clone(),
    })
}

/// Term-at-a-time evaluation, for scans that stop early.
pub struct Stepper<'a> {
    rec: &'a NestedRecurrence,
    policy: UnderflowPolicy,
    init: &'a [BigInt],
    terms: Vec<BigInt>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        rec: &'a NestedRecurrence,
        init: &'a [BigInt],
        policy: UnderflowPolicy,
    ) -> Result<Self, EngineError> {
        if init.is_empty() {
            return Err(EngineError::EmptyInit);
        }
        Ok(Stepper {
            rec,
            policy,
            init,
            terms: Vec::new(),
        })
    }

    /// Produces the next term and returns `(index, value)`.
    pub fn step(&mut self) -> Result<(usize, &BigInt), EngineError> {
        let next = if self.terms.len() < self.init.len() {
            self.init[self.terms.len()].clone()
        } else {
            if self.init.len() < self.rec.max_shift() {
                return Err(EngineError::InitTooShort {
                    len: self.init.len(),
                    max_shift: self.rec.max_shift(),
                });
            }
            next_term(self.rec, &self.terms, self.policy)?
        };
        self.terms.push(next);
        Ok((self.terms.len(), self.terms.last().expect("just pushed")))
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }
}
