//! Closed-form solutions of the Q-recurrence.
//!
//! For a degree parameter `d ≥ 1` the polynomials
//!
//! ```text
//! p_{d,k}(n) = 3d·C(n+k, k+1) + Σ_{i=1..k} w_i·C(n-1+k-i, k-i),   w_i = 3i + 2
//! ```
//!
//! feed a sequence of period `3d` whose residue class `r ≡ 0 (mod 3)` grows
//! like `p_{d, r/3}`. That sequence satisfies the Q-recurrence after its
//! first `3d + 2` terms. Golomb's purely quasilinear solution lives here too.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{BinomialPolynomial, BinomialTerm, Polynomial};
use crate::recurrence::SequenceBuffer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuasipolyError {
    #[error("degree parameter must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("weight w_{index} = {value} is below the admissible minimum {min}")]
    InadmissibleWeight {
        index: usize,
        value: BigInt,
        min: BigInt,
    },
}

/// Weights `w_1, w_2, ...` of the lower-order binomial terms, each at least
/// `3i + 2`.
///
/// Indices past the supplied entries fall back to `3i + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightSequence {
    entries: Vec<BigInt>,
}

impl WeightSequence {
    pub fn new(entries: Vec<BigInt>) -> Result<Self, QuasipolyError> {
        for (i, w) in entries.iter().enumerate() {
            let min = Self::minimum(i + 1);
            if *w < min {
                return Err(QuasipolyError::InadmissibleWeight {
                    index: i + 1,
                    value: w.clone(),
                    min,
                });
            }
        }
        Ok(WeightSequence { entries })
    }

    /// The smallest admissible weight, `3i + 2`, which is also the default.
    pub fn minimum(i: usize) -> BigInt {
        BigInt::from(3 * i + 2)
    }

    /// `w_i` for `i ≥ 1`.
    pub fn get(&self, i: usize) -> BigInt {
        assert!(i >= 1, "weights are 1-indexed");
        self.entries
            .get(i - 1)
            .cloned()
            .unwrap_or_else(|| Self::minimum(i))
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }
}

/// `p_{d,k}` in binomial basis.
///
/// # Panics
///
/// If `d < 1` or `k < -1`.
pub fn p_poly(d: u32, k: i32, weights: Option<&WeightSequence>) -> BinomialPolynomial {
    assert!(d >= 1, "p_{{d,k}} needs d >= 1");
    assert!(k >= -1, "p_{{d,k}} needs k >= -1");
    let default = WeightSequence::default();
    let weights = weights.unwrap_or(&default);
    let k_len = (k + 1) as usize;
    let mut terms = Vec::with_capacity(k_len + 1);
    terms.push(BinomialTerm::new(3 * d as i64, k as i64, k_len));
    for i in 1..k_len {
        // C(n - 1 + k - i, k - i)
        terms.push(BinomialTerm::new(weights.get(i), (k - 1 - i as i32) as i64, k_len - 1 - i));
    }
    BinomialPolynomial::new(terms)
}

/// `p_{d,k}(n)`. `p_{d,-1} = 3d` and `p_{d,0} = 3dn` fall out of the
/// general formula.
pub fn p_eval(d: u32, k: i32, n: i64, weights: Option<&WeightSequence>) -> BigInt {
    p_poly(d, k, weights).eval_i64(n)
}

/// One residue class of a [`QuasipolySolution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Constant(BigInt),
    /// `p_{d,level}` with `level = r / 3`.
    Polynomial {
        level: u32,
        poly: BinomialPolynomial,
    },
}

impl Piece {
    pub fn eval(&self, n: &BigInt) -> BigInt {
        match self {
            Piece::Constant(c) => c.clone(),
            Piece::Polynomial { poly, .. } => poly.eval(n),
        }
    }

    /// Degree as a polynomial in `n`.
    pub fn degree(&self) -> usize {
        match self {
            Piece::Constant(_) => 0,
            Piece::Polynomial { level, .. } => *level as usize + 1,
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        match self {
            Piece::Constant(c) => Polynomial::constant(c.clone()),
            Piece::Polynomial { poly, .. } => poly.to_polynomial(),
        }
    }
}

/// The period-`3d` solution: `a_1 = 3d - 2`, `a_2 = 0`, and for
/// `m = 3dn + r` with `0 ≤ r < 3d`
///
/// | residue            | value            |
/// |--------------------|------------------|
/// | `r ≡ 0 (mod 3)`    | `p_{d, r/3}(n)`  |
/// | `r ≡ 1 (mod 3)`    | `3d`             |
/// | `r = 3d - 1`       | `2`              |
/// | other `r ≡ 2`      | `3`              |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasipolySolution {
    d: u32,
    weights: WeightSequence,
    pieces: Vec<Piece>,
}

impl QuasipolySolution {
    pub fn new(d: u32, weights: Option<WeightSequence>) -> Result<Self, QuasipolyError> {
        if d < 1 {
            return Err(QuasipolyError::InvalidDegree(d));
        }
        let weights = weights.unwrap_or_default();
        let period = 3 * d;
        let pieces = (0..period)
            .map(|r| match r % 3 {
                0 => Piece::Polynomial {
                    level: r / 3,
                    poly: p_poly(d, (r / 3) as i32, Some(&weights)),
                },
                1 => Piece::Constant(BigInt::from(3 * d)),
                _ if r == period - 1 => Piece::Constant(BigInt::from(2)),
                _ => Piece::Constant(BigInt::from(3)),
            })
            .collect();
        Ok(QuasipolySolution { d, weights, pieces })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn period(&self) -> usize {
        3 * self.d as usize
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// Indexed by residue `r ∈ [0, 3d)`.
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Length of the initial condition after which the recurrence holds.
    pub fn initial_len(&self) -> usize {
        self.period() + 2
    }

    /// `a_m` for `m ≥ 1`.
    pub fn term(&self, m: usize) -> BigInt {
        assert!(m >= 1, "sequence is 1-indexed");
        match m {
            1 => BigInt::from(3 * self.d - 2),
            2 => BigInt::zero(),
            _ => {
                let q = self.period();
                self.pieces[m % q].eval(&BigInt::from(m / q))
            }
        }
    }

    pub fn initial_condition(&self) -> Vec<BigInt> {
        (1..=self.initial_len()).map(|m| self.term(m)).collect()
    }

    pub fn buffer(&self, n_max: usize) -> SequenceBuffer {
        let terms = (1..=n_max).map(|m| self.term(m)).collect();
        SequenceBuffer::explicit(terms, format!("closed form d={}", self.d))
    }
}

/// `a_m` of the default-weight solution for degree parameter `d`. Builds
/// the solution on each call; use [`QuasipolySolution`] for sweeps.
pub fn theorem_term(d: u32, m: usize) -> BigInt {
    solution(d).term(m)
}

/// The first `3d + 2` terms.
pub fn initial_condition(d: u32) -> Vec<BigInt> {
    solution(d).initial_condition()
}

pub fn closed_form_buffer(
    d: u32,
    n_max: usize,
    weights: Option<&WeightSequence>,
) -> Result<SequenceBuffer, QuasipolyError> {
    Ok(QuasipolySolution::new(d, weights.cloned())?.buffer(n_max))
}

fn solution(d: u32) -> QuasipolySolution {
    QuasipolySolution::new(d, None).expect("d >= 1")
}

/// Golomb's solution: `Q(3n) = 3n - 2`, `Q(3n+1) = 3`, `Q(3n+2) = 3n + 2`.
pub fn golomb_term(m: usize) -> BigInt {
    assert!(m >= 1, "sequence is 1-indexed");
    match m % 3 {
        0 => BigInt::from(m - 2),
        1 => BigInt::from(3),
        _ => BigInt::from(m),
    }
}

pub fn golomb_buffer(n_max: usize) -> SequenceBuffer {
    SequenceBuffer::explicit((1..=n_max).map(golomb_term).collect(), "golomb")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Failure {
    pub k: i32,
    pub n: i64,
    /// `p_{d,k}(n)`
    pub lhs: BigInt,
    /// `p_{d,k-1}(n) + p_{d,k}(n-1)`
    pub rhs: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub d: u32,
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<Lemma1Failure>,
}

/// Checks `p_{d,k}(n) = p_{d,k-1}(n) + p_{d,k}(n-1)` for `0 ≤ k ≤ k_max`,
/// `1 ≤ n ≤ n_max`, stopping at the first failure.
pub fn check_lemma1(d: u32, k_max: u32, n_max: i64) -> Lemma1Report {
    let mut checked = 0;
    let mut prev = p_poly(d, -1, None);
    for k in 0..=k_max as i32 {
        let cur = p_poly(d, k, None);
        for n in 1..=n_max {
            let lhs = cur.eval_i64(n);
            let rhs = prev.eval_i64(n) + cur.eval_i64(n - 1);
            checked += 1;
            if lhs != rhs {
                return Lemma1Report {
                    d,
                    holds: false,
                    checked,
                    counterexample: Some(Lemma1Failure { k, n, lhs, rhs }),
                };
            }
        }
        prev = cur;
    }
    Lemma1Report {
        d,
        holds: true,
        checked,
        counterexample: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Failure {
    pub k: i32,
    pub n: i64,
    pub value: BigInt,
    pub bound: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Report {
    pub d: u32,
    pub holds: bool,
    pub checked: usize,
    /// `(k, n)` with `p_{d,k}(n) = 3dn + 3k + 2`, in scan order.
    pub equality_witnesses: Vec<(i32, i64)>,
    pub counterexample: Option<Lemma2Failure>,
}

/// Checks `p_{d,k}(n) ≥ 3dn + 3k + 2` for `1 ≤ k ≤ k_max`, `0 ≤ n ≤ n_max`.
pub fn check_lemma2(d: u32, k_max: u32, n_max: i64) -> Lemma2Report {
    let mut report = Lemma2Report {
        d,
        holds: true,
        checked: 0,
        equality_witnesses: Vec::new(),
        counterexample: None,
    };
    for k in 1..=k_max as i32 {
        let p = p_poly(d, k, None);
        for n in 0..=n_max {
            let value = p.eval_i64(n);
            let bound = BigInt::from(3 * d as i64 * n + 3 * k as i64 + 2);
            report.checked += 1;
            if value == bound {
                report.equality_witnesses.push((k, n));
            } else if value < bound {
                report.holds = false;
                report.counterexample = Some(Lemma2Failure { k, n, value, bound });
                return report;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly_from_samples;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    const LISTING: [i64; 35] = [
        7, 0, 5, 9, 3, 8, 9, 2, 9, 9, 3, 14, 9, 3, 22, 9, 2, 18, 9, 3, 32, 9, 3, 54, 9, 2, 27,
        9, 3, 59, 9, 3, 113, 9, 2,
    ];

    /// Resolves `a(index)` against a 1-indexed closed form, with `0` for
    /// nonpositive indices. `None` if the index is at or past `limit`.
    fn zero_extended<F>(index: &BigInt, limit: usize, term: F) -> Option<BigInt>
    where
        F: Fn(usize) -> BigInt,
    {
        if *index <= BigInt::zero() {
            return Some(BigInt::zero());
        }
        match index.to_usize() {
            Some(i) if i < limit => Some(term(i)),
            _ => None,
        }
    }

    /// Q-identity at m under the zero convention, evaluated through `term`.
    fn identity_holds<F: Fn(usize) -> BigInt + Copy>(term: F, m: usize) -> bool {
        let mm = BigInt::from(m);
        let first = zero_extended(&(&mm - term(m - 1)), m, term);
        let second = zero_extended(&(&mm - term(m - 2)), m, term);
        matches!((first, second), (Some(a), Some(b)) if &a + &b == term(m))
    }

    #[test]
    fn p_eval_examples() {
        assert_eq!(p_eval(2, -1, 7, None), big(6));
        assert_eq!(p_eval(3, 0, 4, None), big(36));
        assert_eq!(p_eval(1, 0, 4, None), big(12));
        assert_eq!(p_eval(3, 1, 1, None), big(14));
        assert_eq!(p_eval(3, 2, 1, None), big(22));
        assert_eq!(p_eval(5, 2, 0, None), big(8));
    }

    #[test]
    fn worked_example_polynomials() {
        let rat = |a: i64, b: i64| BigRational::new(big(a), big(b));
        assert_eq!(p_poly(3, 0, None).to_polynomial(), Polynomial::from_int_coeffs([0, 9]));
        assert_eq!(
            p_poly(3, 1, None).to_polynomial(),
            Polynomial::from_coeffs(vec![rat(5, 1), rat(9, 2), rat(9, 2)])
        );
        assert_eq!(
            p_poly(3, 2, None).to_polynomial(),
            Polynomial::from_coeffs(vec![rat(8, 1), rat(8, 1), rat(9, 2), rat(3, 2)])
        );
    }

    #[test]
    fn proof_facts_at_zero_and_one() {
        for d in 1..=6u32 {
            for k in 1..=8i32 {
                assert_eq!(p_eval(d, k, 0, None), big(3 * k as i64 + 2));
                // 2 p(1) = 3k^2 + 7k + 6d
                let twice = 3 * k as i64 * k as i64 + 7 * k as i64 + 6 * d as i64;
                assert_eq!(p_eval(d, k, 1, None) * 2, big(twice));
            }
        }
    }

    #[test]
    fn theorem_term_examples() {
        assert_eq!(theorem_term(3, 1), big(7));
        assert_eq!(theorem_term(3, 2), big(0));
        assert_eq!(theorem_term(3, 17), big(2));
        assert_eq!(theorem_term(3, 15), big(22));
        assert_eq!(theorem_term(1, 6), big(6));
    }

    #[test]
    fn initial_conditions() {
        assert_eq!(initial_condition(3), bigs(&LISTING[..11]));
        assert_eq!(initial_condition(1), bigs(&[1, 0, 3, 3, 2]));
        assert_eq!(initial_condition(10).len(), 32);
    }

    #[test]
    fn closed_form_listing() {
        let buf = closed_form_buffer(3, 35, None).unwrap();
        assert_eq!(buf.terms(), bigs(&LISTING).as_slice());
        assert_eq!(closed_form_buffer(1, 5, None).unwrap().terms(), bigs(&[1, 0, 3, 3, 2]).as_slice());
        assert_eq!(closed_form_buffer(3, 11, None).unwrap().into_terms(), initial_condition(3));
        assert_eq!(closed_form_buffer(0, 5, None), Err(QuasipolyError::InvalidDegree(0)));
    }

    #[test]
    fn residue_classification() {
        let sol = QuasipolySolution::new(4, None).unwrap();
        assert_eq!(sol.period(), 12);
        let degrees: Vec<usize> = sol.pieces().iter().map(Piece::degree).collect();
        assert_eq!(degrees, vec![1, 0, 0, 2, 0, 0, 3, 0, 0, 4, 0, 0]);
        let consts: Vec<Option<BigInt>> = sol
            .pieces()
            .iter()
            .map(|p| match p {
                Piece::Constant(c) => Some(c.clone()),
                Piece::Polynomial { .. } => None,
            })
            .collect();
        assert_eq!(consts[1], Some(big(12)));
        assert_eq!(consts[2], Some(big(3)));
        assert_eq!(consts[8], Some(big(3)));
        assert_eq!(consts[11], Some(big(2)));
    }

    #[test]
    fn golomb_values() {
        assert_eq!(golomb_term(1), big(3));
        assert_eq!(golomb_term(2), big(2));
        assert_eq!(golomb_term(3), big(1));
        assert_eq!(golomb_term(7), big(3));
        assert_eq!(golomb_term(8), big(8));
        assert_eq!(golomb_term(9), big(7));
    }

    #[test]
    fn golomb_identity_from_four() {
        for m in 4..3000 {
            assert!(identity_holds(golomb_term, m), "m={m}");
        }
        assert!(!identity_holds(golomb_term, 3));
    }

    #[test]
    fn lemma1_checks() {
        for (d, k, n) in [(3, 4, 100), (1, 0, 10), (7, 6, 50)] {
            let r = check_lemma1(d, k, n);
            assert!(r.holds, "{r:?}");
            assert_eq!(r.checked, (k as usize + 1) * n as usize);
        }
    }

    #[test]
    fn lemma2_checks() {
        let r = check_lemma2(3, 1, 0);
        assert!(r.holds);
        assert_eq!(r.equality_witnesses, vec![(1, 0)]);

        let r = check_lemma2(1, 1, 1);
        assert!(r.holds);
        assert_eq!(r.equality_witnesses, vec![(1, 0), (1, 1)]);

        let r = check_lemma2(4, 3, 100);
        assert!(r.holds);
        assert_eq!(r.equality_witnesses, vec![(1, 0), (1, 1), (2, 0), (3, 0)]);
    }

    #[test]
    fn weights_are_validated() {
        assert!(WeightSequence::new(bigs(&[5, 8, 11])).is_ok());
        assert_eq!(
            WeightSequence::new(bigs(&[5, 7])),
            Err(QuasipolyError::InadmissibleWeight {
                index: 2,
                value: big(7),
                min: big(8)
            })
        );
        let w = WeightSequence::new(bigs(&[6])).unwrap();
        assert_eq!(w.get(1), big(6));
        assert_eq!(w.get(2), big(8));
    }

    #[test]
    fn weighted_polynomial() {
        let w = WeightSequence::new(bigs(&[10, 20])).unwrap();
        // 9 C(n+2,3) + 10 C(n,1) + 20
        for n in 0..10i64 {
            let direct = 9 * (n + 2) * (n + 1) * n / 6 + 10 * n + 20;
            assert_eq!(p_eval(3, 2, n, Some(&w)), big(direct));
        }
    }

    #[test]
    fn theorem_identity_small_d() {
        for d in 1..=6u32 {
            let sol = QuasipolySolution::new(d, None).unwrap();
            let term = |m: usize| sol.term(m);
            for m in (sol.initial_len() + 1)..2000 {
                assert!(identity_holds(term, m), "d={d} m={m}");
            }
        }
    }

    proptest! {
        #[test]
        fn degree_and_leading_coefficient(d in 1u32..12, k in -1i32..9) {
            let samples: Vec<BigInt> = (0..(k as i64 + 3)).map(|n| p_eval(d, k, n, None)).collect();
            let p = poly_from_samples(&samples, 0).unwrap();
            prop_assert_eq!(p.degree(), Some((k + 1) as usize));
            let fact: BigInt = (1..=(k + 1) as i64).map(BigInt::from).product();
            prop_assert_eq!(p.leading_coeff().unwrap(), &BigRational::new(big(3 * d as i64), fact));
        }

        #[test]
        fn weighted_identity(
            d in 1u32..5,
            extra in prop::collection::vec(0i64..50, 4),
        ) {
            let weights = WeightSequence::new(
                extra.iter().enumerate().map(|(i, e)| WeightSequence::minimum(i + 1) + e).collect(),
            ).unwrap();
            let sol = QuasipolySolution::new(d, Some(weights)).unwrap();
            let term = |m: usize| sol.term(m);
            for m in (sol.initial_len() + 1)..600 {
                prop_assert!(identity_holds(term, m), "m={}", m);
            }
        }
    }
}
