//! Dense monomial-basis matrices for `C_φ`, `D`, `D_φ`, `DC_φ` and `T_ψ`.
//!
//! Entry `(i, j)` of an [`OpMatrix`] is the coefficient of `z^i` in the image
//! of `z^j`. Matrices are stored in the raw monomial basis and are
//! space-agnostic; the space weights enter only through the similarity
//! `B_cod · A · B_dom⁻¹` (`B = diag β`) inside norms, singular values and
//! adjoints.
//!
//! Every builder computes its columns from exactly truncated series, so each
//! stored entry equals the corresponding entry of the infinite matrix.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::Symbol;
use crate::series::TruncatedSeries;
use crate::spaces::SpaceSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Magic bytes of the binary matrix dump.
pub const BINARY_MAGIC: &[u8; 4] = b"HSOP";
pub const BINARY_VERSION: u8 = 1;

/// An operator truncated to `span{1, z, …, z^N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix {
    entries: DMatrix<Complex64>,
    domain: SpaceSpec,
    codomain: SpaceSpec,
    label: String,
}

/// Eigenvalues, singular values and numerical rank of one truncation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<Complex64>,
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    pub rank_tol: f64,
    pub trunc_degree: usize,
}

/// `φ^0, φ^1, …, φ^n` at truncation degree `n`.
fn powers(phi: &TruncatedSeries) -> Result<Vec<TruncatedSeries>> {
    let n = phi.trunc_degree();
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = TruncatedSeries::one(n);
    for _ in 0..=n {
        let next = cur.mul(phi)?;
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

impl OpMatrix {
    /// Wraps a square matrix; both spaces default to the Hardy space.
    pub fn from_matrix(entries: DMatrix<Complex64>, label: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::Precondition(format!(
                "operator matrices are square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self {
            entries,
            domain: SpaceSpec::Hardy,
            codomain: SpaceSpec::Hardy,
            label: label.into(),
        })
    }

    fn from_columns(columns: &[TruncatedSeries], label: String) -> Self {
        let n = columns.len();
        let entries = DMatrix::from_fn(n, n, |i, j| columns[j].coeff(i));
        Self {
            entries,
            domain: SpaceSpec::Hardy,
            codomain: SpaceSpec::Hardy,
            label,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n + 1, n + 1),
            domain: SpaceSpec::Hardy,
            codomain: SpaceSpec::Hardy,
            label: "I".into(),
        }
    }

    /// `C_φ f = f ∘ φ`: column `j` holds `φ^j`.
    pub fn composition(phi: &Symbol, n: usize) -> Result<Self> {
        phi.certify_self_map()?;
        let cols = powers(&phi.series(n)?)?;
        Ok(Self::from_columns(&cols, format!("C[{phi}]")))
    }

    /// `D f = f'`: column `j` holds `j z^(j-1)`.
    pub fn differentiation(n: usize) -> Self {
        let mut entries = DMatrix::zeros(n + 1, n + 1);
        for j in 1..=n {
            entries[(j - 1, j)] = Complex64::new(j as f64, 0.0);
        }
        Self {
            entries,
            domain: SpaceSpec::Hardy,
            codomain: SpaceSpec::Hardy,
            label: "D".into(),
        }
    }

    /// `D_φ f = f' ∘ φ`: column `j` holds `j φ^(j-1)`.
    pub fn d_phi(phi: &Symbol, n: usize) -> Result<Self> {
        phi.certify_self_map()?;
        let pw = powers(&phi.series(n)?)?;
        let zero = TruncatedSeries::zeros(n);
        let cols: Vec<TruncatedSeries> = (0..=n)
            .map(|j| {
                if j == 0 {
                    zero.clone()
                } else {
                    pw[j - 1].scale(Complex64::new(j as f64, 0.0))
                }
            })
            .collect();
        Ok(Self::from_columns(&cols, format!("D_phi[{phi}]")))
    }

    /// `DC_φ f = (f ∘ φ)' = (f' ∘ φ)·φ'`.
    pub fn dc_phi(phi: &Symbol, n: usize) -> Result<Self> {
        phi.certify_self_map()?;
        let dphi = Self::symbol_derivative(phi, n)?;
        let pw = powers(&phi.series(n)?)?;
        let mut cols = vec![TruncatedSeries::zeros(n)];
        for j in 1..=n {
            cols.push(pw[j - 1].mul(&dphi)?.scale(Complex64::new(j as f64, 0.0)));
        }
        Ok(Self::from_columns(&cols, format!("DC_phi[{phi}]")))
    }

    /// `φ'` exact through degree `n` (taken from the degree `n+1` series).
    pub fn symbol_derivative(phi: &Symbol, n: usize) -> Result<TruncatedSeries> {
        let s = match phi {
            Symbol::Poly { coeffs } if coeffs.len() > n + 2 => phi.series(n)?,
            _ => phi.series(n + 1)?,
        };
        Ok(s.derivative().resize(n))
    }

    /// `T_ψ f = ψ·f`: lower-triangular Toeplitz matrix with `(i, j) = ψ_(i-j)`.
    pub fn multiplication(psi: &TruncatedSeries) -> Self {
        let n = psi.trunc_degree();
        let entries = DMatrix::from_fn(n + 1, n + 1, |i, j| if i >= j { psi.coeff(i - j) } else { ZERO });
        Self {
            entries,
            domain: SpaceSpec::Hardy,
            codomain: SpaceSpec::Hardy,
            label: "T_psi".into(),
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trunc_degree(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn domain(&self) -> SpaceSpec {
        self.domain
    }

    pub fn codomain(&self) -> SpaceSpec {
        self.codomain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same matrix acting within one space.
    pub fn with_space(self, space: SpaceSpec) -> Self {
        self.with_spaces(space, space)
    }

    pub fn with_spaces(mut self, domain: SpaceSpec, codomain: SpaceSpec) -> Self {
        self.domain = domain;
        self.codomain = codomain;
        self
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.trunc_degree() != other.trunc_degree() {
            return Err(Error::DegreeMismatch {
                left: self.trunc_degree(),
                right: other.trunc_degree(),
            });
        }
        Ok(())
    }

    /// Operator product `self · inner` (apply `inner` first).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_dims(inner)?;
        if inner.codomain != self.domain {
            return Err(Error::Unsupported(format!(
                "cannot compose: inner operator lands in {} but outer acts on {}",
                inner.codomain, self.domain
            )));
        }
        Ok(Self {
            entries: &self.entries * &inner.entries,
            domain: inner.domain,
            codomain: self.codomain,
            label: format!("{}*{}", self.label, inner.label),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Unsupported("difference of operators between different spaces".into()));
        }
        Ok(Self {
            entries: &self.entries - &other.entries,
            domain: self.domain,
            codomain: self.codomain,
            label: format!("{}-{}", self.label, other.label),
        })
    }

    /// Top-left `size × size` block, same spaces.
    pub fn block(&self, size: usize) -> Self {
        let size = size.clamp(1, self.entries.nrows());
        Self {
            entries: self.entries.view((0, 0), (size, size)).into_owned(),
            domain: self.domain,
            codomain: self.codomain,
            label: self.label.clone(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Adjoint with respect to the space inner product: `W⁻¹ Aᴴ W`,
    /// `W = diag(β(n)²)`.
    pub fn weighted_adjoint(&self) -> Result<Self> {
        if self.domain != self.codomain {
            return Err(Error::Unsupported(format!(
                "adjoint of an operator from {} to {} is not supported",
                self.domain, self.codomain
            )));
        }
        let w = self.domain.weights_sq(self.trunc_degree());
        let a = &self.entries;
        let entries = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(j, i)].conj() * (w[j] / w[i]));
        Ok(Self {
            entries,
            domain: self.domain,
            codomain: self.codomain,
            label: format!("({})^*", self.label),
        })
    }

    /// `B_cod · A · B_dom⁻¹`: the matrix in orthonormal bases of the spaces.
    pub fn orthonormal_matrix(&self) -> DMatrix<Complex64> {
        let n = self.trunc_degree();
        let bd = self.domain.weights(n);
        let bc = self.codomain.weights(n);
        let a = &self.entries;
        DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * (bc[i] / bd[j]))
    }

    /// Singular values in the space norms, nonincreasing.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        let m = self.orthonormal_matrix();
        let max_iter = 1000 * m.nrows().max(10);
        let svd = nalgebra::linalg::SVD::try_new(m, false, false, f64::EPSILON, max_iter).ok_or_else(|| {
            Error::Numerical(format!(
                "SVD of {} (N = {}) did not converge in {max_iter} iterations",
                self.label,
                self.trunc_degree()
            ))
        })?;
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    /// Largest singular value of `B_cod · A · B_dom⁻¹`.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?[0])
    }

    /// Operator norm between two different spaces; same formula as
    /// [`OpMatrix::operator_norm`].
    pub fn cross_norm(&self) -> Result<f64> {
        self.operator_norm()
    }

    /// Count of singular values above `tol · σ_1`.
    pub fn numerical_rank(&self, tol: f64) -> Result<usize> {
        let s = self.singular_values()?;
        Ok(rank_from_singular_values(&s, tol))
    }

    /// Eigenvalues of the truncation.
    ///
    /// The matrix is first split along the strongly connected components of
    /// its sparsity graph (a symmetric permutation to block upper triangular
    /// form); singleton blocks contribute their diagonal entry exactly and
    /// only irreducible blocks go through a dense Schur decomposition. The
    /// weight similarity does not change eigenvalues, so the raw matrix is
    /// used.
    pub fn spectrum(&self) -> Result<Vec<Complex64>> {
        let a = &self.entries;
        let n = a.nrows();
        let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
        let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
        for j in 0..n {
            for i in 0..n {
                if i != j && a[(i, j)] != ZERO {
                    graph.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        let mut eig = Vec::with_capacity(n);
        for comp in tarjan_scc(&graph) {
            if comp.len() == 1 {
                let k = comp[0].index();
                eig.push(a[(k, k)]);
                continue;
            }
            let mut idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
            idx.sort_unstable();
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])]);
            let max_iter = 1000 * idx.len().max(10);
            let schur = nalgebra::linalg::Schur::try_new(sub, f64::EPSILON, max_iter).ok_or_else(|| {
                Error::Numerical(format!(
                    "Schur iteration on a {0}x{0} block of {1} did not converge",
                    idx.len(),
                    self.label
                ))
            })?;
            let vals = schur.eigenvalues().ok_or_else(|| {
                Error::Numerical(format!("Schur form of {} is not triangular", self.label))
            })?;
            eig.extend(vals.iter().copied());
        }
        eig.sort_by(|x, y| {
            y.norm()
                .total_cmp(&x.norm())
                .then(x.re.total_cmp(&y.re))
                .then(x.im.total_cmp(&y.im))
        });
        Ok(eig)
    }

    pub fn spectral_summary(&self, rank_tol: f64) -> Result<SpectralSummary> {
        let singular_values = self.singular_values()?;
        Ok(SpectralSummary {
            eigenvalues: self.spectrum()?,
            numerical_rank: rank_from_singular_values(&singular_values, rank_tol),
            singular_values,
            rank_tol,
            trunc_degree: self.trunc_degree(),
        })
    }

    /// Matrix-vector product on coefficient vectors.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.trunc_degree() != self.trunc_degree() {
            return Err(Error::DegreeMismatch {
                left: self.trunc_degree(),
                right: f.trunc_degree(),
            });
        }
        let v = DVector::from_column_slice(f.coeffs());
        let out = &self.entries * v;
        Ok(TruncatedSeries::new(out.iter().copied().collect()))
    }

    /// Row-major CSV, each entry written as two fields `re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        let a = &self.entries;
        for i in 0..a.nrows() {
            let row: Vec<String> = (0..a.ncols())
                .flat_map(|j| [format!("{:e}", a[(i, j)].re), format!("{:e}", a[(i, j)].im)])
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `HSOP`, version byte, `N` as little-endian `u32`, then the
    /// `(N+1)²` entries row-major as little-endian `f64` pairs.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&[BINARY_VERSION])?;
        let n = u32::try_from(self.trunc_degree())
            .map_err(|_| Error::Unsupported("truncation too large for binary dump".into()))?;
        out.write_all(&n.to_le_bytes())?;
        let a = &self.entries;
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                out.write_all(&a[(i, j)].re.to_le_bytes())?;
                out.write_all(&a[(i, j)].im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads a dump written by [`OpMatrix::write_binary`]; spaces are reset
    /// to Hardy.
    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut head = [0u8; 9];
        input.read_exact(&mut head)?;
        if &head[..4] != BINARY_MAGIC {
            return Err(Error::Parse("not an HSOP matrix dump".into()));
        }
        if head[4] != BINARY_VERSION {
            return Err(Error::Parse(format!("unsupported HSOP version {}", head[4])));
        }
        let n = u32::from_le_bytes([head[5], head[6], head[7], head[8]]) as usize;
        let size = n + 1;
        let mut buf = vec![0u8; size * size * 16];
        input.read_exact(&mut buf)?;
        let f = |k: usize| f64::from_le_bytes(buf[8 * k..8 * k + 8].try_into().expect("8 bytes"));
        let entries = DMatrix::from_fn(size, size, |i, j| {
            let k = 2 * (i * size + j);
            Complex64::new(f(k), f(k + 1))
        });
        Self::from_matrix(entries, "binary")
    }
}

pub fn rank_from_singular_values(s: &[f64], tol: f64) -> usize {
    match s.first() {
        Some(&top) => s.iter().filter(|&&x| x > tol * top).count(),
        None => 0,
    }
}
