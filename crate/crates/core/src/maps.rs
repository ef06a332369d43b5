//! Self-maps of the disk used as composition symbols.
//!
//! [`MoebiusMap`] carries the linear fractional data needed by the adjoint
//! formulas (Krein adjoint `σ`, the factors `μ` and `η`, branch-normalized
//! logarithms). [`MonomialMap`] carries the closed-form norm and spectrum of
//! `D_φ` for `φ(z) = a z^M`. [`Symbol`] is the common wrapper accepted by the
//! operator builders.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Margin required between a grid-estimated sup norm and 1.
pub const POLY_SUP_MARGIN: f64 = 1e-6;

/// Grid size for sup norms of polynomial symbols.
pub const POLY_SUP_GRID: usize = 1 << 16;

/// `z ↦ (az + b)/(cz + d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if (a * d - b * c).norm() == 0.0 {
            return Err(Error::Domain("degenerate linear fractional map: ad - bc = 0".into()));
        }
        Ok(Self { a, b, c, d })
    }

    /// `z ↦ az + b`.
    pub fn affine(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(a, b, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn phi0(&self) -> Complex64 {
        self.b / self.d
    }

    fn pole_check(&self) -> Result<f64> {
        let gap = self.d.norm_sqr() - self.c.norm_sqr();
        if gap <= 0.0 {
            let pole = if self.c.norm() == 0.0 {
                "infinity".to_string()
            } else {
                format!("{}", -self.d / self.c)
            };
            return Err(Error::PoleInDisk { pole });
        }
        Ok(gap)
    }

    /// `‖φ‖∞` over the disk.
    ///
    /// The unit circle maps to the circle with center
    /// `(b d̄ - a c̄)/(|d|² - |c|²)` and radius `|ad - bc|/(|d|² - |c|²)`; the
    /// maximum modulus is attained on it.
    pub fn sup_norm(&self) -> Result<f64> {
        let gap = self.pole_check()?;
        let center = (self.b * self.d.conj() - self.a * self.c.conj()) / gap;
        let radius = (self.a * self.d - self.b * self.c).norm() / gap;
        Ok(center.norm() + radius)
    }

    /// Certifies `‖φ‖∞ < 1`, returning the sup norm.
    pub fn certify_strict(&self) -> Result<f64> {
        let s = self.sup_norm()?;
        if s < 1.0 {
            Ok(s)
        } else {
            Err(Error::Certification(format!(
                "linear fractional map has sup norm {s} >= 1"
            )))
        }
    }

    /// Certifies `‖φ‖∞ <= 1`.
    pub fn certify_self_map(&self) -> Result<f64> {
        let s = self.sup_norm()?;
        if s <= 1.0 + 1e-14 {
            Ok(s)
        } else {
            Err(Error::Certification(format!(
                "linear fractional map is not a self-map of the disk: sup norm {s}"
            )))
        }
    }

    /// `σ(z) = (ā z - c̄)/(-b̄ z + d̄)`, itself certified as a self-map.
    pub fn krein_adjoint(&self) -> Result<MoebiusMap> {
        self.certify_self_map()?;
        let sigma = MoebiusMap {
            a: self.a.conj(),
            b: -self.c.conj(),
            c: -self.b.conj(),
            d: self.d.conj(),
        };
        sigma.certify_self_map()?;
        Ok(sigma)
    }

    /// `σ(0) = -c̄/d̄`.
    pub fn sigma0(&self) -> Complex64 {
        -self.c.conj() / self.d.conj()
    }

    pub fn series(&self, n: usize) -> Result<TruncatedSeries> {
        let num = TruncatedSeries::from_poly(&[self.b, self.a], n);
        num.mul(&self.eta_series_unchecked(n)?)
    }

    fn eta_series_unchecked(&self, n: usize) -> Result<TruncatedSeries> {
        TruncatedSeries::one(n).div(&TruncatedSeries::from_poly(&[self.d, self.c], n))
    }

    /// `μ(z) = -b̄ z + d̄`.
    pub fn mu_series(&self, n: usize) -> Result<TruncatedSeries> {
        self.certify_strict()?;
        Ok(TruncatedSeries::from_poly(&[self.d.conj(), -self.b.conj()], n))
    }

    /// `η(z) = 1/(cz + d)`.
    pub fn eta_series(&self, n: usize) -> Result<TruncatedSeries> {
        self.certify_strict()?;
        self.eta_series_unchecked(n)
    }

    /// `log μ` normalized by the constant `log d̄`.
    pub fn log_mu(&self, n: usize) -> Result<TruncatedSeries> {
        self.mu_series(n)?.log_series(self.d.conj().ln())
    }

    /// `log conj(η(w)) = -log d̄ - log(1 + (c̄/d̄) w̄)`, the normalization that
    /// cancels the constant in [`MoebiusMap::log_mu`].
    pub fn log_eta_conj_at(&self, w: Complex64) -> Result<Complex64> {
        self.certify_strict()?;
        let x = self.c.conj() / self.d.conj() * w.conj();
        Ok(-self.d.conj().ln() - (Complex64::new(1.0, 0.0) + x).ln())
    }

    /// `φ ∘ ψ` as a linear fractional map.
    pub fn compose(&self, inner: &MoebiusMap) -> Result<MoebiusMap> {
        MoebiusMap::new(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
        )
    }
}

/// `φ(z) = a z^M` with `0 < |a| < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialMap {
    pub a: Complex64,
    pub m: u32,
}

impl MonomialMap {
    pub fn new(a: Complex64, m: u32) -> Result<Self> {
        let r = a.norm();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!(
                "monomial symbol needs 0 < |a| < 1, got |a| = {r}"
            )));
        }
        if m == 0 {
            return Err(Error::Domain("monomial symbol needs M >= 1".into()));
        }
        Ok(Self { a, m })
    }

    /// `ν = ⌊(2 - |a|)/(1 - |a|)⌋`, the index maximizing `M(n-1)|a|^(n-1)`.
    pub fn nu(&self) -> u32 {
        let r = self.a.norm();
        ((2.0 - r) / (1.0 - r)).floor() as u32
    }

    /// `max{1, M(ν-1)|a|^(ν-1)}`.
    pub fn norm_formula(&self) -> f64 {
        let k = self.nu() - 1;
        let peak = self.m as f64 * k as f64 * self.a.norm().powi(k as i32);
        peak.max(1.0)
    }

    /// `{0, 2a}` when `M = 2`, otherwise `{0}`.
    pub fn exact_spectrum(&self) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        if self.m == 2 {
            vec![zero, self.a * 2.0]
        } else {
            vec![zero]
        }
    }

    /// Smallest truncation degree containing the image of the norming basis
    /// vector `z^ν`.
    pub fn min_trunc_for_norm(&self) -> usize {
        self.m as usize * (self.nu() as usize - 1) + 2
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.a * z.powu(self.m)
    }

    pub fn series(&self, n: usize) -> TruncatedSeries {
        TruncatedSeries::monomial(self.m as usize, n).scale(self.a)
    }
}

/// A composition symbol accepted by the operator builders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Symbol {
    Moebius(MoebiusMap),
    Monomial(MonomialMap),
    /// Polynomial `c_0 + c_1 z + …`.
    Poly { coeffs: Vec<Complex64> },
}

impl Symbol {
    pub fn poly(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("polynomial symbol needs a coefficient".into()));
        }
        Ok(Symbol::Poly { coeffs })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Symbol::Moebius(m) => m.eval(z),
            Symbol::Monomial(m) => m.eval(z),
            Symbol::Poly { coeffs } => coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c),
        }
    }

    pub fn series(&self, n: usize) -> Result<TruncatedSeries> {
        match self {
            Symbol::Moebius(m) => m.series(n),
            Symbol::Monomial(m) => Ok(m.series(n)),
            Symbol::Poly { coeffs } => {
                if coeffs.len() > n + 1 && coeffs[n + 1..].iter().any(|c| c.norm() != 0.0) {
                    return Err(Error::Precondition(format!(
                        "polynomial symbol of degree {} does not fit truncation {n}",
                        coeffs.len() - 1
                    )));
                }
                Ok(TruncatedSeries::from_poly(coeffs, n))
            }
        }
    }

    /// `‖φ‖∞`: exact for linear fractional and monomial symbols, a uniform
    /// grid maximum on the circle for polynomials.
    pub fn sup_norm(&self) -> Result<f64> {
        match self {
            Symbol::Moebius(m) => m.sup_norm(),
            Symbol::Monomial(m) => Ok(m.a.norm()),
            Symbol::Poly { .. } => Ok(grid_sup_norm(|z| self.eval(z), POLY_SUP_GRID)),
        }
    }

    fn margin(&self) -> f64 {
        match self {
            Symbol::Poly { .. } => POLY_SUP_MARGIN,
            _ => 0.0,
        }
    }

    /// Certifies `‖φ‖∞ < 1`.
    pub fn certify_strict(&self) -> Result<f64> {
        let s = self.sup_norm()?;
        if s + self.margin() < 1.0 {
            Ok(s)
        } else {
            Err(Error::Certification(format!(
                "symbol {self} has sup norm {s}, not certified below 1"
            )))
        }
    }

    /// Certifies `‖φ‖∞ <= 1`. Polynomials must clear the grid margin.
    pub fn certify_self_map(&self) -> Result<f64> {
        let s = self.sup_norm()?;
        let ok = match self {
            Symbol::Poly { .. } => s + POLY_SUP_MARGIN < 1.0 || self.is_rotation(),
            _ => s <= 1.0 + 1e-14,
        };
        if ok {
            Ok(s)
        } else {
            Err(Error::Certification(format!(
                "symbol {self} is not certified as a self-map of the disk (sup norm {s})"
            )))
        }
    }

    /// `φ(z) = λz` with `|λ| = 1`, the one boundary polynomial accepted.
    fn is_rotation(&self) -> bool {
        match self {
            Symbol::Poly { coeffs } => {
                coeffs.len() >= 2
                    && coeffs[0].norm() == 0.0
                    && (coeffs[1].norm() - 1.0).abs() < 1e-15
                    && coeffs[2..].iter().all(|c| c.norm() == 0.0)
            }
            _ => false,
        }
    }

    /// `φ(z) = az + b` in any representation.
    pub fn as_affine(&self) -> Option<(Complex64, Complex64)> {
        match self {
            Symbol::Moebius(m) if m.c.norm() == 0.0 => Some((m.a / m.d, m.b / m.d)),
            Symbol::Monomial(m) if m.m == 1 => Some((m.a, Complex64::new(0.0, 0.0))),
            Symbol::Poly { coeffs } if coeffs.iter().skip(2).all(|c| c.norm() == 0.0) => {
                let b = coeffs[0];
                let a = coeffs.get(1).copied().unwrap_or_default();
                Some((a, b))
            }
            _ => None,
        }
    }
}

/// Maximum of `|f(e^{iθ})|` over `count` equally spaced angles.
pub fn grid_sup_norm(f: impl Fn(Complex64) -> Complex64, count: usize) -> f64 {
    (0..count)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / count as f64;
            f(Complex64::from_polar(1.0, theta)).norm()
        })
        .fold(0.0, f64::max)
}

fn parse_floats(body: &str, what: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number `{t}` in {what}: {e}")))
        })
        .collect()
}

impl FromStr for Symbol {
    type Err = Error;

    /// `moebius:a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im`,
    /// `monomial:a_re,a_im,M` or `poly:c0_re,c0_im,…`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("symbol `{s}` has no `kind:` prefix")))?;
        match head.to_ascii_lowercase().as_str() {
            "moebius" | "mobius" => {
                let v = parse_floats(body, "moebius symbol")?;
                if v.len() != 8 {
                    return Err(Error::Parse(format!(
                        "moebius symbol needs 8 numbers, got {}",
                        v.len()
                    )));
                }
                let z = |i: usize| Complex64::new(v[2 * i], v[2 * i + 1]);
                Ok(Symbol::Moebius(MoebiusMap::new(z(0), z(1), z(2), z(3))?))
            }
            "monomial" => {
                let v = parse_floats(body, "monomial symbol")?;
                if v.len() != 3 || v[2].fract() != 0.0 || v[2] < 1.0 {
                    return Err(Error::Parse(
                        "monomial symbol is `monomial:a_re,a_im,M` with integer M >= 1".into(),
                    ));
                }
                Ok(Symbol::Monomial(MonomialMap::new(
                    Complex64::new(v[0], v[1]),
                    v[2] as u32,
                )?))
            }
            "poly" => {
                let v = parse_floats(body, "poly symbol")?;
                if v.is_empty() || v.len() % 2 != 0 {
                    return Err(Error::Parse(
                        "poly symbol needs re,im pairs of coefficients".into(),
                    ));
                }
                Symbol::poly(v.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
            }
            other => Err(Error::Parse(format!("unknown symbol kind `{other}`"))),
        }
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, zs: &[Complex64]) -> fmt::Result {
    let parts: Vec<String> = zs.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
    write!(f, "{}", parts.join(","))
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Moebius(m) => {
                write!(f, "moebius:")?;
                write_parts(f, &[m.a, m.b, m.c, m.d])
            }
            Symbol::Monomial(m) => write!(f, "monomial:{},{},{}", m.a.re, m.a.im, m.m),
            Symbol::Poly { coeffs } => {
                write!(f, "poly:")?;
                write_parts(f, coeffs)
            }
        }
    }
}

impl From<MoebiusMap> for Symbol {
    fn from(m: MoebiusMap) -> Self {
        Symbol::Moebius(m)
    }
}

impl From<MonomialMap> for Symbol {
    fn from(m: MonomialMap) -> Self {
        Symbol::Monomial(m)
    }
}
