//! Exact integer and rational arithmetic used throughout the crate.
//!
//! - [`binom_poly`]: binomial coefficient extended to every integer upper argument
//! - [`finite_difference`]: consecutive differences of an integer list
//! - [`poly_from_samples`]: Newton forward-difference interpolation
//! - [`Polynomial`]: rational coefficients in the monomial basis
//! - [`BinomialTerm`], [`BinomialPolynomial`]: integer combinations of `C(n + shift, choose)`
//!
//! Nothing in here touches floating point.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("finite difference needs at least 2 values, got {0}")]
    TooFewValues(usize),
    #[error("cannot interpolate an empty sample list")]
    NoSamples,
}

/// `x (x-1) ... (x-k+1) / k!` for any integer `x`.
///
/// Negative upper arguments follow the falling-factorial polynomial, so
/// `C(-1, 0) = 1` and `C(-2, 1) = -2`.
pub fn binom_poly(x: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    let mut factor = x.clone();
    for j in 1..=k {
        // acc == C(x, j-1); acc * (x-j+1) == j * C(x, j), so the division is exact.
        acc *= &factor;
        acc /= j;
        if acc.is_zero() {
            break;
        }
        factor -= 1;
    }
    acc
}

/// Consecutive differences `values[i+1] - values[i]`.
pub fn finite_difference(values: &[BigInt]) -> Result<Vec<BigInt>, ArithError> {
    if values.len() < 2 {
        return Err(ArithError::TooFewValues(values.len()));
    }
    Ok(values.windows(2).map(|w| &w[1] - &w[0]).collect())
}

/// A polynomial in one variable with exact rational coefficients, lowest
/// degree first. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![BigRational::from_integer(c.into())])
    }

    /// Builds a polynomial from coefficients (lowest degree first), trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_int_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Horner evaluation at an integer point.
    pub fn eval(&self, n: &BigInt) -> BigRational {
        let x = BigRational::from_integer(n.clone());
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    pub fn eval_i64(&self, n: i64) -> BigRational {
        self.eval(&BigInt::from(n))
    }

    /// Evaluates and returns the value only when it is an integer.
    pub fn eval_integer(&self, n: &BigInt) -> Option<BigInt> {
        let v = self.eval(n);
        v.is_integer().then(|| v.to_integer())
    }

    fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
                match other.coeffs.get(i) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by the linear factor `x + a`.
    fn mul_linear(&self, a: &BigInt) -> Polynomial {
        let a = BigRational::from_integer(a.clone());
        let mut out = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c * &a;
            out[i + 1] += c;
        }
        Polynomial::from_coeffs(out)
    }

    /// The monomial form of `x ↦ C(x + shift, choose)`.
    pub fn binomial(shift: &BigInt, choose: usize) -> Polynomial {
        let mut p = Polynomial::constant(1);
        let mut offset = shift.clone();
        for _ in 0..choose {
            p = p.mul_linear(&offset);
            offset -= 1;
        }
        let fact: BigInt = (1..=choose).map(BigInt::from).product();
        p.scale(&BigRational::new(BigInt::one(), fact))
    }
}

impl fmt::Display for Polynomial {
    /// Descending degree, coefficients in lowest terms, variable `n`:
    /// `3/2 n^3 + 9/2 n^2 + 8 n + 8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let unit = mag.is_one();
            if deg == 0 || !unit {
                write!(f, "{}", mag)?;
            }
            match deg {
                0 => {}
                1 if unit => write!(f, "n")?,
                1 => write!(f, " n")?,
                _ if unit => write!(f, "n^{}", deg)?,
                _ => write!(f, " n^{}", deg)?,
            }
        }
        Ok(())
    }
}

/// Unique minimal-degree polynomial through `(start + i, values[i])`.
///
/// Built in Newton forward-difference form
/// `f(start + t) = Σ_j Δ^j f(start) · C(t, j)` and then expanded once into
/// monomial coefficients.
pub fn poly_from_samples(values: &[BigInt], start: i64) -> Result<Polynomial, ArithError> {
    if values.is_empty() {
        return Err(ArithError::NoSamples);
    }
    // Leading entries of the difference table: Δ^0 f(start), Δ^1 f(start), ...
    let mut leading = Vec::with_capacity(values.len());
    let mut row = values.to_vec();
    loop {
        leading.push(row[0].clone());
        if row.len() == 1 {
            break;
        }
        row = finite_difference(&row)?;
    }
    while leading.len() > 1 && leading.last().is_some_and(Zero::is_zero) {
        leading.pop();
    }

    // Horner in the Newton basis: C(t, j+1) = C(t, j) (t - j) / (j + 1).
    let shift = BigInt::from(start);
    let mut acc = Polynomial::zero();
    for (j, delta) in leading.iter().enumerate().rev() {
        acc = acc
            .mul_linear(&(-&shift - j))
            .scale(&BigRational::new(BigInt::one(), BigInt::from(j + 1)));
        acc = acc.add(&Polynomial::constant(delta.clone()));
    }
    Ok(acc)
}

/// Evaluates `p` exactly at `n`.
pub fn poly_eval(p: &Polynomial, n: &BigInt) -> BigRational {
    p.eval(n)
}

/// `weight · C(n + shift, choose)` as a function of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialTerm {
    pub weight: BigInt,
    pub shift: i64,
    pub choose: usize,
}

impl BinomialTerm {
    pub fn new(weight: impl Into<BigInt>, shift: i64, choose: usize) -> Self {
        BinomialTerm {
            weight: weight.into(),
            shift,
            choose,
        }
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        if self.weight.is_zero() {
            return BigInt::zero();
        }
        &self.weight * binom_poly(&(n + self.shift), self.choose)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::binomial(&BigInt::from(self.shift), self.choose)
            .scale(&BigRational::from_integer(self.weight.clone()))
    }
}

/// A sum of [`BinomialTerm`]s. Integer-valued on the integers by construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BinomialPolynomial {
    terms: Vec<BinomialTerm>,
}

impl BinomialPolynomial {
    pub fn new(terms: Vec<BinomialTerm>) -> Self {
        BinomialPolynomial { terms }
    }

    pub fn terms(&self) -> &[BinomialTerm] {
        &self.terms
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.terms.iter().map(|t| t.eval(n)).sum()
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    /// Rational monomial form, for display and comparison.
    pub fn to_polynomial(&self) -> Polynomial {
        self.terms
            .iter()
            .fold(Polynomial::zero(), |acc, t| acc.add(&t.to_polynomial()))
    }
}
