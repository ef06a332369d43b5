//! Power series of analytic functions on the disk, truncated modulo `z^(N+1)`.
//!
//! Every closure (product, quotient, composition, logarithm) is degreewise
//! exact: coefficient `k` of a result depends only on coefficients `0..=k` of
//! the operands, so a truncated result agrees with the truncation of the
//! infinite-series result. Binary operations refuse operands of different
//! truncation degree instead of resizing them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients `c_0..=c_N` of an analytic function, taken modulo `z^(N+1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    /// False once the coefficient of `z^N` no longer matches the true
    /// function (differentiation drops it).
    top_exact: bool,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    trunc_degree: usize,
    coeffs: Vec<Complex64>,
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        if repr.coeffs.len() != repr.trunc_degree + 1 {
            return Err(Error::Parse(format!(
                "series with trunc_degree {} needs {} coefficients, got {}",
                repr.trunc_degree,
                repr.trunc_degree + 1,
                repr.coeffs.len()
            )));
        }
        Ok(Self::new(repr.coeffs))
    }
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            trunc_degree: s.trunc_degree(),
            coeffs: s.coeffs,
        }
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl TruncatedSeries {
    /// Wraps a coefficient vector; the truncation degree is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self {
            coeffs,
            top_exact: true,
        }
    }

    /// Polynomial `p` viewed at degree `n`: padded with zeros or cut off.
    pub fn from_poly(p: &[Complex64], n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        for (c, &v) in coeffs.iter_mut().zip(p) {
            *c = v;
        }
        Self::new(coeffs)
    }

    pub fn from_real(p: &[f64], n: usize) -> Self {
        let p: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_poly(&p, n)
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![ZERO; n + 1])
    }

    pub fn constant(c: Complex64, n: usize) -> Self {
        let mut s = Self::zeros(n);
        s.coeffs[0] = c;
        s
    }

    pub fn one(n: usize) -> Self {
        Self::constant(ONE, n)
    }

    /// `z^k`; the zero series when `k > n`.
    pub fn monomial(k: usize, n: usize) -> Self {
        let mut s = Self::zeros(n);
        if k <= n {
            s.coeffs[k] = ONE;
        }
        s
    }

    /// The identity symbol `z`.
    pub fn identity(n: usize) -> Self {
        Self::monomial(1, n)
    }

    pub fn trunc_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Whether the top coefficient still equals the true `z^N` coefficient.
    pub fn top_exact(&self) -> bool {
        self.top_exact
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.trunc_degree() != other.trunc_degree() {
            return Err(Error::DegreeMismatch {
                left: self.trunc_degree(),
                right: other.trunc_degree(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_degree(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| op(x, y))
            .collect();
        Ok(Self {
            coeffs,
            top_exact: self.top_exact && other.top_exact,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
            top_exact: self.top_exact,
        }
    }

    /// Adds a constant to `c_0`.
    pub fn add_constant(&self, k: Complex64) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += k;
        s
    }

    /// Multiplication by `z`. The shifted-out coefficient is lost, which is
    /// exact: `z·f` modulo `z^(N+1)` only needs `f_0..f_(N-1)`.
    pub fn shift(&self) -> Self {
        let n = self.trunc_degree();
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[1..].copy_from_slice(&self.coeffs[..n]);
        Self::new(coeffs)
    }

    /// Cauchy product truncated at the common degree.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let n = self.trunc_degree();
        let mut coeffs = vec![ZERO; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (c, &b) in coeffs[i..].iter_mut().zip(&other.coeffs) {
                *c += a * b;
            }
        }
        Ok(Self {
            coeffs,
            top_exact: self.top_exact && other.top_exact,
        })
    }

    /// Power-series quotient `f / g`; requires `g_0 != 0`.
    #[allow(clippy::should_implement_trait)]
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let g0 = other.coeffs[0];
        if g0 == ZERO {
            return Err(Error::Singular(
                "division by a series with zero constant term".into(),
            ));
        }
        let n = self.trunc_degree();
        let mut q = vec![ZERO; n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= other.coeffs[j] * q[k - j];
            }
            q[k] = acc / g0;
        }
        Ok(Self {
            coeffs: q,
            top_exact: self.top_exact && other.top_exact,
        })
    }

    /// `f'`, kept at degree `N`; the top coefficient becomes zero and is
    /// flagged as no longer exact.
    pub fn derivative(&self) -> Self {
        let n = self.trunc_degree();
        let mut coeffs = vec![ZERO; n + 1];
        for k in 0..n {
            coeffs[k] = self.coeffs[k + 1] * (k + 1) as f64;
        }
        Self {
            coeffs,
            top_exact: n == 0 && self.top_exact,
        }
    }

    /// The primitive vanishing at the origin.
    pub fn antiderivative(&self) -> Self {
        let n = self.trunc_degree();
        let mut coeffs = vec![ZERO; n + 1];
        for k in 1..=n {
            coeffs[k] = self.coeffs[k - 1] / k as f64;
        }
        Self::new(coeffs)
    }

    /// `f ∘ g` by Horner's rule on the truncated `f`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_degree(g)?;
        let n = self.trunc_degree();
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(g)?.add_constant(self.coeffs[k]);
        }
        acc.top_exact = self.top_exact && g.top_exact;
        Ok(acc)
    }

    /// `branch_constant + L` with `L(0) = 0` and `L' = f'/f`.
    ///
    /// The caller chooses the branch; passing the principal logarithm of
    /// `f_0` gives the principal branch near the origin.
    pub fn log_series(&self, branch_constant: Complex64) -> Result<Self> {
        if self.coeffs[0] == ZERO {
            return Err(Error::Singular(
                "logarithm of a series with zero constant term".into(),
            ));
        }
        let log_derivative = self.derivative().div(self)?;
        Ok(log_derivative.antiderivative().add_constant(branch_constant))
    }

    /// `exp(f)` via `E' = f'·E`.
    pub fn exp_series(&self) -> Self {
        let n = self.trunc_degree();
        let mut e = vec![ZERO; n + 1];
        e[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * j as f64 * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self {
            coeffs: e,
            top_exact: self.top_exact,
        }
    }

    /// Horner evaluation of the truncated polynomial at `z`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Coefficients of `(1 - c z)^(-s)`.
    pub fn binomial_kernel(c: Complex64, s: f64, n: usize) -> Result<Self> {
        if c.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "binomial kernel needs |c| < 1, got |c| = {}",
                c.norm()
            )));
        }
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[0] = ONE;
        for k in 1..=n {
            coeffs[k] = coeffs[k - 1] * c * ((s + k as f64 - 1.0) / k as f64);
        }
        Ok(Self::new(coeffs))
    }

    /// Largest coefficient modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_degree(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    /// Same function viewed at another truncation degree.
    pub fn resize(&self, n: usize) -> Self {
        let mut s = Self::from_poly(&self.coeffs, n);
        s.top_exact = n < self.trunc_degree() || self.top_exact;
        s
    }
}
