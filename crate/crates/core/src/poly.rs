//! Complex polynomials vanishing at the origin.
//!
//! [`Coefficients`] carries `b_1, …, b_D` of `f(z) = Σ b_k z^k`; the constant
//! term is implicitly zero. [`Poly`] is the general carrier (constant term
//! included) used for derivatives and recentered series.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// A point of the complex plane, typically in the closed unit disc.
pub type ComplexPoint = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Taylor coefficients `b_1, …, b_D` of a polynomial with `f(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoefficientDocument", into = "CoefficientDocument")]
pub struct Coefficients {
    // coeffs[k - 1] = b_k
    coeffs: Vec<Complex64>,
}

/// On-disk form: `{"coeffs": [[re, im], …]}` listing `b_1 … b_D`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientDocument {
    pub coeffs: Vec<[f64; 2]>,
}

impl TryFrom<CoefficientDocument> for Coefficients {
    type Error = Error;

    fn try_from(doc: CoefficientDocument) -> Result<Self> {
        Coefficients::from_pairs(&doc.coeffs)
    }
}

impl From<Coefficients> for CoefficientDocument {
    fn from(f: Coefficients) -> Self {
        CoefficientDocument {
            coeffs: f.to_pairs(),
        }
    }
}

impl Coefficients {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        if let Some(i) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFiniteCoefficient { index: i + 1 });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }

    /// `c · z^n`, stored with length `n`.
    pub fn monomial(n: usize, c: Complex64) -> Result<Self> {
        check_range("n", n as f64, n >= 1, "n >= 1")?;
        let mut coeffs = vec![ZERO; n];
        coeffs[n - 1] = c;
        Self::new(coeffs)
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }

    /// Stored length `D` (trailing zeros included).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Always false; `D >= 1` is a construction invariant.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest index with a nonzero coefficient, 0 for the zero function.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != ZERO)
            .map_or(0, |i| i + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 0
    }

    /// `b_k`, with `b_0 = 0` and zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Complex64 {
        if k == 0 {
            ZERO
        } else {
            self.coeffs.get(k - 1).copied().unwrap_or(ZERO)
        }
    }

    /// `b_1 … b_D` as a slice (index 0 holds `b_1`).
    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|b| b * c).collect(),
        }
    }

    /// Zero-padded or truncated copy of length `len` (at least 1).
    pub fn resized(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len.max(1), ZERO);
        Self { coeffs }
    }

    /// True when every coefficient is real with exact zero imaginary part and `>= 0`.
    pub fn is_nonnegative_real(&self) -> bool {
        self.first_non_nonnegative().is_none()
    }

    pub(crate) fn first_non_nonnegative(&self) -> Option<(usize, Complex64)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.im != 0.0 || c.re < 0.0)
            .map(|(i, c)| (i + 1, *c))
    }

    /// `Σ b_k z^k` by nested multiplication.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &b| acc * z + b) * z
    }

    /// Coefficients of `f′`; index `j` of the result holds the coefficient of `z^j`.
    pub fn derivative(&self) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &b)| b * (i + 1) as f64)
                .collect(),
        }
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Format(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CoefficientDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CoefficientDocument::from(self.clone()))
            .expect("coefficient document serializes")
    }
}

/// Dense polynomial with constant term; `coeffs[j]` multiplies `z^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Evaluation at a real point using real parts only.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re)
    }
}

/// The disc automorphism `φ_λ(z) = (z + λ) / (1 + λ̄ z)`.
#[derive(Debug, Clone, Copy)]
pub struct Mobius {
    lambda: Complex64,
}

impl Mobius {
    pub fn new(lambda: Complex64) -> Result<Self> {
        let r = lambda.norm();
        check_range("|lambda|", r, r < 1.0, "|lambda| < 1")?;
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (z + self.lambda) / (Complex64::new(1.0, 0.0) + self.lambda.conj() * z)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) + self.lambda.conj() * z;
        Complex64::new(1.0 - self.lambda.norm_sqr(), 0.0) / (d * d)
    }

    /// Taylor coefficients of `φ_λ` up to degree `k`, constant term at index 0.
    fn series(&self, k: usize) -> Vec<Complex64> {
        let scale = 1.0 - self.lambda.norm_sqr();
        let ratio = -self.lambda.conj();
        let mut out = Vec::with_capacity(k + 1);
        out.push(self.lambda);
        let mut power = Complex64::new(1.0, 0.0);
        for _ in 1..=k {
            out.push(power * scale);
            power *= ratio;
        }
        out
    }
}

fn mul_truncated(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == ZERO {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// First `k` Taylor coefficients `B_1(λ), …, B_k(λ)` of `f(φ_λ(z)) − f(λ)`.
///
/// Nested multiplication over truncated power series; the constant term
/// `f(λ)` is dropped so the result vanishes at the origin.
pub fn mobius_recenter(f: &Coefficients, lambda: ComplexPoint, k: usize) -> Result<Coefficients> {
    let phi = Mobius::new(lambda)?;
    check_range("K", k as f64, k >= 1, "K >= 1")?;
    let len = k + 1;
    let w = phi.series(k);
    let mut acc = vec![ZERO; len];
    for &b in f.as_slice().iter().rev() {
        acc = mul_truncated(&acc, &w, len);
        acc[0] += b;
    }
    acc = mul_truncated(&acc, &w, len);
    acc.remove(0);
    Coefficients::new(acc)
}

/// First-order coefficient `c_k` of `|B_k(λ)|² = |b_k|² + 2 Re{c_k λ} + O(|λ|²)`.
pub fn marty_first_order(f: &Coefficients, k: usize) -> Complex64 {
    debug_assert!(k >= 1);
    let kf = k as f64;
    (kf + 1.0) * f.coeff(k + 1) * f.coeff(k).conj()
        - (kf - 1.0) * f.coeff(k - 1).conj() * f.coeff(k)
}
