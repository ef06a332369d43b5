//! Weighted Hardy spaces `H²(β)`: `‖f‖² = Σ |a_n|² β(n)²`.
//!
//! Every space here has orthogonal monomials with `‖z^n‖ = β(n)` and
//! `β(0) = 1`, so inner products, point-evaluation kernels and
//! derivative-evaluation kernels all come from one weight sequence.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// A weighted Hardy space, identified by its weight sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    /// `β(n) = 1`.
    Hardy,
    /// Standard weighted Bergman space, `β(n)² = n!·Γ(α+2)/Γ(n+α+2)`.
    ///
    /// For `-2 < α <= -1` the same Gamma ratio still defines a space whose
    /// kernel is `(1 - w̄z)^(-(α+2))`; `α = -1` is the Hardy space.
    Bergman { alpha: f64 },
    /// `β(n) = sqrt(n)`; same weights as `Equiv { alpha: -2 }`.
    Dirichlet,
    /// `β(n) = n`: derivative in `H²`.
    S2,
    /// `β(1) = 1`, `β(n) = sqrt(n(n-1))`: an equivalent renorming of `S2`
    /// with closed-form kernels.
    S2tilde,
    /// `β(n) = n^(-(α+1)/2)`, norm-equivalent to `A²_α` for every real `α`.
    Equiv { alpha: f64 },
}

/// Which functional a kernel reproduces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `⟨f, K_w⟩ = f(w)`
    PointEval,
    /// `⟨f, K_w^(1)⟩ = f'(w)`
    DerivEval,
}

impl SpaceSpec {
    pub fn bergman(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -2.0 {
            return Err(Error::Domain(format!(
                "Bergman weights need alpha > -2, got {alpha}"
            )));
        }
        Ok(SpaceSpec::Bergman { alpha })
    }

    /// `β(n)²`.
    pub fn weight_sq(&self, n: usize) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let x = n as f64;
        match *self {
            SpaceSpec::Hardy => 1.0,
            SpaceSpec::Bergman { alpha } => {
                (1..=n).fold(1.0, |acc, k| acc * k as f64 / (k as f64 + alpha + 1.0))
            }
            SpaceSpec::Dirichlet => x,
            SpaceSpec::S2 => x * x,
            SpaceSpec::S2tilde => {
                if n == 1 {
                    1.0
                } else {
                    x * (x - 1.0)
                }
            }
            SpaceSpec::Equiv { alpha } => x.powf(-(alpha + 1.0)),
        }
    }

    /// `β(n)`.
    pub fn weight(&self, n: usize) -> f64 {
        self.weight_sq(n).sqrt()
    }

    /// `β(0)², …, β(n)²`.
    pub fn weights_sq(&self, n: usize) -> Vec<f64> {
        match *self {
            SpaceSpec::Bergman { alpha } => {
                let mut w = Vec::with_capacity(n + 1);
                let mut acc = 1.0;
                w.push(acc);
                for k in 1..=n {
                    acc *= k as f64 / (k as f64 + alpha + 1.0);
                    w.push(acc);
                }
                w
            }
            _ => (0..=n).map(|k| self.weight_sq(k)).collect(),
        }
    }

    pub fn weights(&self, n: usize) -> Vec<f64> {
        self.weights_sq(n).into_iter().map(f64::sqrt).collect()
    }

    /// `Σ f_n conj(g_n) β(n)²`.
    pub fn inner_product(&self, f: &TruncatedSeries, g: &TruncatedSeries) -> Result<Complex64> {
        if f.trunc_degree() != g.trunc_degree() {
            return Err(Error::DegreeMismatch {
                left: f.trunc_degree(),
                right: g.trunc_degree(),
            });
        }
        let w = self.weights_sq(f.trunc_degree());
        Ok(f
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .zip(&w)
            .map(|((a, b), &wn)| a * b.conj() * wn)
            .sum())
    }

    pub fn norm(&self, f: &TruncatedSeries) -> f64 {
        let w = self.weights_sq(f.trunc_degree());
        f.coeffs()
            .iter()
            .zip(&w)
            .map(|(a, &wn)| a.norm_sqr() * wn)
            .sum::<f64>()
            .sqrt()
    }

    /// Reproducing kernel for point or derivative evaluation at `w`.
    pub fn kernel(&self, kind: KernelKind, w: Complex64, n: usize) -> Result<TruncatedSeries> {
        if w.norm() >= 1.0 {
            return Err(Error::Domain(format!(
                "kernel point must lie in the open disk, got |w| = {}",
                w.norm()
            )));
        }
        let wbar = w.conj();
        let weights = self.weights_sq(n);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        match kind {
            KernelKind::PointEval => {
                let mut p = Complex64::new(1.0, 0.0);
                for (k, c) in coeffs.iter_mut().enumerate() {
                    *c = p / weights[k];
                    p *= wbar;
                }
            }
            KernelKind::DerivEval => {
                let mut p = Complex64::new(1.0, 0.0);
                for k in 1..=n {
                    coeffs[k] = p * (k as f64 / weights[k]);
                    p *= wbar;
                }
            }
        }
        Ok(TruncatedSeries::new(coeffs))
    }
}

fn multiplier(point: Complex64, alpha: f64, n: usize) -> Result<TruncatedSeries> {
    if point.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "multiplier base point must lie in the open disk, got |p| = {}",
            point.norm()
        )));
    }
    Ok(TruncatedSeries::binomial_kernel(point.conj(), alpha + 3.0, n)?.shift())
}

/// `g_α(z) = z / (1 - conj(φ(0)) z)^(α+3)`.
pub fn multiplier_g_alpha(phi0: Complex64, alpha: f64, n: usize) -> Result<TruncatedSeries> {
    multiplier(phi0, alpha, n)
}

/// `h_α(z) = z / (1 - conj(σ(0)) z)^(α+3)`.
pub fn multiplier_h_alpha(sigma0: Complex64, alpha: f64, n: usize) -> Result<TruncatedSeries> {
    multiplier(sigma0, alpha, n)
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Hardy => write!(f, "hardy"),
            SpaceSpec::Bergman { alpha } => write!(f, "bergman:{alpha}"),
            SpaceSpec::Dirichlet => write!(f, "dirichlet"),
            SpaceSpec::S2 => write!(f, "s2"),
            SpaceSpec::S2tilde => write!(f, "s2tilde"),
            SpaceSpec::Equiv { alpha } => write!(f, "equiv:{alpha}"),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    /// `hardy | bergman:α | dirichlet | s2 | s2tilde | equiv:α`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let alpha = || -> Result<f64> {
            let a = arg.ok_or_else(|| Error::Parse(format!("space `{s}` needs an alpha")))?;
            a.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad alpha in `{s}`: {e}")))
        };
        let plain = |sp: SpaceSpec| {
            if arg.is_some() {
                Err(Error::Parse(format!("space `{head}` takes no argument")))
            } else {
                Ok(sp)
            }
        };
        match head.to_ascii_lowercase().as_str() {
            "hardy" => plain(SpaceSpec::Hardy),
            "dirichlet" => plain(SpaceSpec::Dirichlet),
            "s2" => plain(SpaceSpec::S2),
            "s2tilde" => plain(SpaceSpec::S2tilde),
            "bergman" => SpaceSpec::bergman(alpha()?),
            "equiv" => {
                let a = alpha()?;
                if !a.is_finite() {
                    return Err(Error::Parse(format!("bad alpha in `{s}`")));
                }
                Ok(SpaceSpec::Equiv { alpha: a })
            }
            other => Err(Error::Parse(format!("unknown space `{other}`"))),
        }
    }
}
