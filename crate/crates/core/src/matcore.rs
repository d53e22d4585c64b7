//! Dense complex linear algebra: Hermitian eigendecomposition, support-aware
//! functional calculus, Schatten norms, partial traces and pinching.
//!
//! Every matrix function here follows one support convention: eigenvalues at
//! or below `support_clip * λ_max` are treated as exactly zero. Powers with a
//! negative real part therefore act as pseudo-inverse powers on the support,
//! and the zeroth power is the support projection.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative imaginary residue above which a trace that should be real is
/// reported as an error instead of being discarded.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-8;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Numerical tolerances shared by validation and the functional calculus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermiticity_tol: f64,
    pub recon_tol: f64,
    /// Relative to the largest eigenvalue.
    pub support_clip: f64,
    pub trace_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity_tol: 1e-10,
            recon_tol: 1e-9,
            support_clip: 1e-12,
            trace_tol: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("hermiticity_tol", self.hermiticity_tol),
            ("recon_tol", self.recon_tol),
            ("support_clip", self.support_clip),
            ("trace_tol", self.trace_tol),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// A square matrix that passed the Hermiticity check. The stored entries are
/// exactly Hermitian: construction replaces `M` by `(M + M*)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian(CMatrix);

impl Hermitian {
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        ensure_square(&m)?;
        ensure_finite(&m)?;
        let dev = max_abs(&(&m - m.adjoint()));
        if dev > tol.hermiticity_tol * (1.0 + max_abs(&m)) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::hermitize(m))
    }

    /// Symmetrizes without checking. Used for matrices that are Hermitian by
    /// construction up to roundoff.
    pub fn hermitize(m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        let h = (&m + m.adjoint()) * c64(0.5, 0.0);
        Self(h)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c64(x, 0.0)));
        Self(CMatrix::from_diagonal(&d))
    }

    /// Builds from a row-major list of real entries.
    pub fn from_real_rows(n: usize, entries: &[f64], tol: &Tolerances) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        Self::new(CMatrix::from_row_iterator(n, n, entries.iter().map(|&x| c64(x, 0.0))), tol)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Eigenvalues in non-increasing order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Eigenvalues at or below this value count as kernel.
    pub fn support_threshold(&self, tol: &Tolerances) -> f64 {
        tol.support_clip * self.largest().max(0.0)
    }

    pub fn rank(&self, tol: &Tolerances) -> usize {
        let thr = self.support_threshold(tol);
        self.eigenvalues.iter().filter(|&&l| l > thr).count()
    }

    /// `U diag(f(λ)) U*`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let fl = f(l);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= fl;
            }
        }
        scaled * u.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| c64(l, 0.0))
    }

    /// Columns of the eigenvectors spanning the support.
    pub fn support_vectors(&self, tol: &Tolerances) -> CMatrix {
        let r = self.rank(tol);
        self.eigenvectors.columns(0, r).into_owned()
    }

    /// Projector onto the numerical kernel.
    pub fn kernel_projector(&self, tol: &Tolerances) -> CMatrix {
        let r = self.rank(tol);
        let k = self.eigenvectors.columns(r, self.dim() - r);
        k * k.adjoint()
    }

    fn ensure_psd(&self, tol: &Tolerances) -> Result<()> {
        if let Some(&min) = self.eigenvalues.last() {
            let scale = self.largest().abs().max(min.abs());
            if min < -tol.support_clip * scale {
                return Err(Error::NotPsd(min));
            }
        }
        Ok(())
    }
}

/// Deterministic Hermitian eigensolve, eigenvalues sorted non-increasing.
pub fn hermitian_eig(m: &Hermitian) -> SpectralDecomposition {
    let n = m.dim();
    if n == 0 {
        return SpectralDecomposition { eigenvalues: Vec::new(), eigenvectors: CMatrix::zeros(0, 0) };
    }
    let eig = m.as_matrix().clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SpectralDecomposition { eigenvalues, eigenvectors }
}

/// Eigendecomposition of a PSD matrix with kernel eigenvalues set to exactly 0.
pub fn psd_spectrum(m: &Hermitian, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let mut sd = hermitian_eig(m);
    sd.ensure_psd(tol)?;
    let thr = sd.support_threshold(tol);
    for l in sd.eigenvalues.iter_mut() {
        if *l <= thr {
            *l = 0.0;
        }
    }
    Ok(sd)
}

/// `M^z` under the support convention. Real `z` gives a Hermitian result.
pub fn mat_power(m: &Hermitian, z: C64, tol: &Tolerances) -> Result<CMatrix> {
    let sd = psd_spectrum(m, tol)?;
    let out = sd.map(|l| if l > 0.0 { (z * l.ln()).exp() } else { c64(0.0, 0.0) });
    if z.im == 0.0 {
        Ok(Hermitian::hermitize(out).into_matrix())
    } else {
        Ok(out)
    }
}

pub fn mat_power_real(m: &Hermitian, r: f64, tol: &Tolerances) -> Result<Hermitian> {
    let sd = psd_spectrum(m, tol)?;
    Ok(power_from_spectrum(&sd, r))
}

/// Real power from a spectrum already produced by [`psd_spectrum`].
pub fn power_from_spectrum(sd: &SpectralDecomposition, r: f64) -> Hermitian {
    Hermitian::hermitize(sd.map(|l| if l > 0.0 { c64(l.powf(r), 0.0) } else { c64(0.0, 0.0) }))
}

/// `ln M` on the support, 0 on the kernel.
pub fn mat_log_support(m: &Hermitian, tol: &Tolerances) -> Result<Hermitian> {
    let sd = psd_spectrum(m, tol)?;
    Ok(Hermitian::hermitize(sd.map(|l| if l > 0.0 { c64(l.ln(), 0.0) } else { c64(0.0, 0.0) })))
}

/// Schatten p-norm `(Σ sᵢᵖ)^{1/p}`. Values of `p` in `(0, 1)` give the
/// quasi-norm; nothing in this crate evaluates those.
pub fn schatten_norm(m: &CMatrix, p: f64) -> Result<f64> {
    if !(p > 0.0) || p.is_nan() {
        return Err(Error::Domain(format!("Schatten exponent must be > 0, got {p}")));
    }
    ensure_finite(m)?;
    if m.is_empty() {
        return Ok(0.0);
    }
    let sv = m.singular_values();
    if p.is_infinite() {
        return Ok(sv.iter().cloned().fold(0.0, f64::max));
    }
    if p == 1.0 {
        return Ok(sv.iter().sum());
    }
    // Scale by the largest singular value so large p does not overflow.
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = sv.iter().map(|&x| (x / smax).powf(p)).sum();
    Ok(smax * s.powf(1.0 / p))
}

/// Which tensor factor of `ℂᵐ ⊗ ℂᵏ` to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Partial trace over one factor of `ℂ^dim_first ⊗ ℂ^dim_second`, with
/// basis index `(i, a) ↦ i * dim_second + a`.
pub fn partial_trace(m: &CMatrix, dim_first: usize, dim_second: usize, factor: Factor) -> Result<CMatrix> {
    let d = dim_first * dim_second;
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of {}x{} matrix over {dim_first}x{dim_second}",
            m.nrows(),
            m.ncols()
        )));
    }
    let out = match factor {
        Factor::First => CMatrix::from_fn(dim_second, dim_second, |a, b| {
            (0..dim_first).map(|i| m[(i * dim_second + a, i * dim_second + b)]).sum()
        }),
        Factor::Second => CMatrix::from_fn(dim_first, dim_first, |i, j| {
            (0..dim_second).map(|a| m[(i * dim_second + a, j * dim_second + a)]).sum()
        }),
    };
    Ok(out)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Checks that the columns of `basis` form an orthonormal basis of ℂⁿ.
pub fn check_orthonormal_basis(basis: &CMatrix, tol: &Tolerances) -> Result<()> {
    ensure_square(basis)?;
    ensure_finite(basis)?;
    let n = basis.ncols();
    let resid = max_abs(&(basis.adjoint() * basis - CMatrix::identity(n, n)));
    if resid > tol.recon_tol {
        return Err(Error::NotOrthonormal(resid));
    }
    Ok(())
}

/// `Σᵢ PᵢMPᵢ` with `Pᵢ = vᵢvᵢ*` for the columns `vᵢ` of `basis`.
pub fn pinch(m: &Hermitian, basis: &CMatrix, tol: &Tolerances) -> Result<Hermitian> {
    check_orthonormal_basis(basis, tol)?;
    if basis.nrows() != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis of C^{} for a {}x{} matrix",
            basis.nrows(),
            m.dim(),
            m.dim()
        )));
    }
    let inner = basis.adjoint() * m.as_matrix() * basis;
    let diag = DVector::from_iterator(inner.nrows(), inner.diagonal().iter().map(|z| c64(z.re, 0.0)));
    Ok(Hermitian::hermitize(basis * CMatrix::from_diagonal(&diag) * basis.adjoint()))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `tr(AB)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut s = c64(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Returns the real part of a trace that must be real, or an error when the
/// imaginary residue is too large to be roundoff.
pub fn real_part_checked(z: C64, scale: f64) -> Result<f64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if z.im.abs() > IMAGINARY_RESIDUE_TOL * (1.0 + z.re.abs().max(scale)) {
        return Err(Error::ImaginaryResidue { real: z.re, imag: z.im });
    }
    Ok(z.re)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn ensure_square(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(())
}

pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Real matrix from row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows * cols");
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c64(x, 0.0)))
}
