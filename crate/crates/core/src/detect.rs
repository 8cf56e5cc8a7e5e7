//! Eventual quasipolynomial structure in a sequence prefix.
//!
//! For each candidate period `q` the buffer splits into residue classes
//! `m = qn + r`. Each class gets a polynomial in `n` interpolated from its
//! *last* samples, which is then checked backward to find where it stops
//! matching. The smallest `q` whose classes all confirm wins.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::arith::{poly_from_samples, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("buffer has {len} terms, need at least {need} to fit even a single class")]
    BufferTooShort { len: usize, need: usize },
    #[error("q_max and min_confirm must be positive")]
    InvalidParameters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectParams {
    pub q_max: usize,
    pub deg_max: usize,
    /// Matching samples required per class beyond the interpolation window.
    pub min_confirm: usize,
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams {
            q_max: 12,
            deg_max: 4,
            min_confirm: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasipolyFit {
    pub period: usize,
    /// Every index `≥ onset` matches the fit.
    pub onset: usize,
    /// Indexed by residue `r`; polynomial in `n` where `m = period·n + r`.
    pub residue_polys: Vec<Polynomial>,
    /// Fewest confirming samples over all classes, interpolation window
    /// excluded.
    pub confirmed: usize,
}

impl QuasipolyFit {
    /// The fitted value at index `m ≥ 1`.
    pub fn value_at(&self, m: usize) -> BigRational {
        let r = m % self.period;
        self.residue_polys[r].eval(&BigInt::from(m / self.period))
    }

    /// Indices `≥ onset` of `terms` (1-indexed) that disagree with the fit.
    pub fn mismatches<'a>(&'a self, terms: &'a [BigInt]) -> impl Iterator<Item = usize> + 'a {
        (self.onset..=terms.len()).filter(move |&m| {
            let v = self.value_at(m);
            !(v.is_integer() && v.to_integer() == terms[m - 1])
        })
    }

    pub fn degrees(&self) -> Vec<Option<usize>> {
        self.residue_polys.iter().map(Polynomial::degree).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection {
    Found(QuasipolyFit),
    NotFound,
}

impl Detection {
    pub fn fit(&self) -> Option<&QuasipolyFit> {
        match self {
            Detection::Found(f) => Some(f),
            Detection::NotFound => None,
        }
    }
}

struct ClassFit {
    poly: Polynomial,
    /// Earliest index of the matching suffix.
    earliest: usize,
    matched: usize,
}

/// Fits one residue class. `None` when the class is too short or its
/// matching suffix does not reach `window + min_confirm` samples.
fn fit_class(terms: &[BigInt], q: usize, r: usize, params: &DetectParams) -> Option<ClassFit> {
    let first = if r == 0 { q } else { r };
    let indices: Vec<usize> = (first..=terms.len()).step_by(q).collect();
    let window = params.deg_max + 1;
    if indices.len() < window + params.min_confirm {
        return None;
    }
    let tail = &indices[indices.len() - window..];
    let samples: Vec<BigInt> = tail.iter().map(|&m| terms[m - 1].clone()).collect();
    let start = (tail[0] / q) as i64;
    let poly = poly_from_samples(&samples, start).expect("window is nonempty");

    let mut matched = 0;
    let mut earliest = *indices.last().expect("nonempty");
    for &m in indices.iter().rev() {
        if poly.eval_integer(&BigInt::from(m / q)).as_ref() != Some(&terms[m - 1]) {
            break;
        }
        matched += 1;
        earliest = m;
    }
    (matched >= window + params.min_confirm).then_some(ClassFit {
        poly,
        earliest,
        matched,
    })
}

fn fit_period(terms: &[BigInt], q: usize, params: &DetectParams) -> Option<QuasipolyFit> {
    let mut residue_polys = Vec::with_capacity(q);
    let mut onset = 1;
    let mut confirmed = usize::MAX;
    for r in 0..q {
        let class = fit_class(terms, q, r, params)?;
        // The index just before the suffix in this class is the last
        // mismatch, if the class has one.
        if class.earliest > q {
            onset = onset.max(class.earliest - q + 1);
        }
        confirmed = confirmed.min(class.matched - (params.deg_max + 1));
        residue_polys.push(class.poly);
    }
    Some(QuasipolyFit {
        period: q,
        onset,
        residue_polys,
        confirmed,
    })
}

/// Searches periods `1..=q_max` in increasing order and returns the first
/// that fits with polynomial degree `≤ deg_max` in every class.
///
/// Periods whose classes hold fewer than `deg_max + 1 + min_confirm`
/// samples cannot be confirmed and are skipped; the buffer is rejected
/// only when even period 1 is out of reach.
pub fn detect(terms: &[BigInt], params: &DetectParams) -> Result<Detection, DetectError> {
    if params.q_max == 0 || params.min_confirm == 0 {
        return Err(DetectError::InvalidParameters);
    }
    let need = params.deg_max + 1 + params.min_confirm;
    if terms.len() < need {
        return Err(DetectError::BufferTooShort {
            len: terms.len(),
            need,
        });
    }
    Ok((1..=params.q_max)
        .find_map(|q| fit_period(terms, q, params))
        .map_or(Detection::NotFound, Detection::Found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasipoly::{closed_form_buffer, golomb_buffer};
    use crate::recurrence::{compute, NestedRecurrence, UnderflowPolicy};
    use proptest::prelude::*;

    fn params(q_max: usize, deg_max: usize, min_confirm: usize) -> DetectParams {
        DetectParams {
            q_max,
            deg_max,
            min_confirm,
        }
    }

    fn found(terms: &[BigInt], p: DetectParams) -> QuasipolyFit {
        match detect(terms, &p).unwrap() {
            Detection::Found(f) => f,
            Detection::NotFound => panic!("no fit"),
        }
    }

    #[test]
    fn golomb_structure() {
        let buf = golomb_buffer(300);
        let fit = found(buf.terms(), params(6, 3, 20));
        assert_eq!(fit.period, 3);
        assert_eq!(fit.onset, 1);
        assert_eq!(fit.residue_polys[0], Polynomial::from_int_coeffs([-2, 3]));
        assert_eq!(fit.residue_polys[1], Polynomial::constant(3));
        assert_eq!(fit.residue_polys[2], Polynomial::from_int_coeffs([2, 3]));
        assert_eq!(fit.mismatches(buf.terms()).count(), 0);
    }

    #[test]
    fn constant_sequence() {
        let terms = vec![BigInt::from(5); 50];
        let fit = found(&terms, DetectParams::default());
        assert_eq!(fit.period, 1);
        assert_eq!(fit.onset, 1);
        assert_eq!(fit.residue_polys, vec![Polynomial::constant(5)]);
        assert_eq!(fit.confirmed, 50 - 5);
    }

    #[test]
    fn worked_example_structure() {
        let buf = closed_form_buffer(3, 500, None).unwrap();
        let fit = found(buf.terms(), params(12, 4, 20));
        assert_eq!(fit.period, 9);
        let degrees: Vec<usize> = fit.degrees().into_iter().map(Option::unwrap).collect();
        assert_eq!(degrees, vec![1, 0, 0, 2, 0, 0, 3, 0, 0]);
        assert_eq!(fit.onset, 3);
        assert_eq!(
            fit.residue_polys[6].to_string(),
            "3/2 n^3 + 9/2 n^2 + 8 n + 8"
        );
    }

    #[test]
    fn hofstadter_has_no_structure() {
        let buf = compute(
            &NestedRecurrence::hofstadter(),
            &[BigInt::from(1), BigInt::from(1)],
            200,
            UnderflowPolicy::ZeroConvention,
        )
        .unwrap();
        assert_eq!(detect(buf.terms(), &params(12, 3, 20)), Ok(Detection::NotFound));
    }

    #[test]
    fn argument_errors() {
        let terms = vec![BigInt::from(1); 10];
        assert_eq!(
            detect(&terms, &params(3, 2, 20)),
            Err(DetectError::BufferTooShort { len: 10, need: 23 })
        );
        assert_eq!(detect(&terms, &params(0, 2, 2)), Err(DetectError::InvalidParameters));
        assert_eq!(detect(&terms, &params(2, 2, 0)), Err(DetectError::InvalidParameters));
    }

    #[test]
    fn exceptional_prefix_sets_onset() {
        // 7, 7, 7, then 2n for the rest: constant-free linear tail.
        let mut terms: Vec<BigInt> = (1..=80).map(|m| BigInt::from(2 * m)).collect();
        terms[0] = BigInt::from(7);
        terms[2] = BigInt::from(7);
        let fit = found(&terms, params(4, 2, 20));
        assert_eq!(fit.period, 1);
        assert_eq!(fit.onset, 4);
        assert_eq!(fit.mismatches(&terms).count(), 0);
    }

    #[test]
    fn round_trip_over_d() {
        for d in 1..=5u32 {
            let q = 3 * d as usize;
            let buf = closed_form_buffer(d, q * 60, None).unwrap();
            let fit = found(buf.terms(), params(q + 3, d as usize + 1, 20));
            assert_eq!(fit.period, q);
            let sol = crate::quasipoly::QuasipolySolution::new(d, None).unwrap();
            for (r, piece) in sol.pieces().iter().enumerate() {
                assert_eq!(fit.residue_polys[r], piece.to_polynomial(), "d={d} r={r}");
            }
            assert!(fit.onset <= 3);
        }
    }

    proptest! {
        #[test]
        fn soundness_and_minimality(
            period in 1usize..5,
            pieces in prop::collection::vec(prop::collection::vec(-5i64..6, 1..3), 4),
            noise in prop::collection::vec(-3i64..4, 0..4),
            len in 120usize..200,
        ) {
            let polys: Vec<Polynomial> = pieces[..period]
                .iter()
                .map(|c| Polynomial::from_int_coeffs(c.clone()))
                .collect();
            let mut terms: Vec<BigInt> = (1..=len)
                .map(|m| polys[m % period].eval_i64((m / period) as i64).to_integer())
                .collect();
            for (i, v) in noise.iter().enumerate() {
                terms[i] += *v;
            }
            let p = params(6, 2, 15);
            if let Detection::Found(fit) = detect(&terms, &p).unwrap() {
                prop_assert_eq!(fit.mismatches(&terms).count(), 0);
                prop_assert!(fit.period <= period);
                for q in 1..fit.period {
                    prop_assert!(fit_period(&terms, q, &p).is_none());
                }
            } else {
                prop_assert!(false, "generated sequence has period {}", period);
            }
        }

        #[test]
        fn extension_keeps_fit(d in 1u32..4, extra in 0usize..200) {
            let q = 3 * d as usize;
            let p = params(q + 3, d as usize + 1, 20);
            let short = closed_form_buffer(d, q * 40, None).unwrap();
            let long = closed_form_buffer(d, q * 40 + extra, None).unwrap();
            let a = detect(short.terms(), &p).unwrap();
            let b = detect(long.terms(), &p).unwrap();
            let (a, b) = (a.fit().unwrap(), b.fit().unwrap());
            prop_assert_eq!(a.period, b.period);
            prop_assert_eq!(&a.residue_polys, &b.residue_polys);
            prop_assert!(b.onset >= 1 && b.onset == a.onset);
        }
    }
}
