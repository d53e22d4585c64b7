//! Density matrices, CPTP channels in Kraus and Stinespring form, pinching
//! channels, Petz and rotated Petz recovery maps, and the relative modular
//! operator.

use crate::error::{Error, Result};
use crate::matcore::{
    c64, check_orthonormal_basis, hermitian_eig, max_abs, partial_trace, power_from_spectrum, psd_spectrum,
    CMatrix, CVector, Factor, Hermitian, SpectralDecomposition, Tolerances,
};
use crate::sampling::{gaussian_matrix, rng_from_seed};

/// Residual allowed in `Σ Kᵢ*Kᵢ = I` and `V*V = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Positive semidefinite unit-trace matrix together with its clipped spectrum.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: Hermitian,
    spectrum: SpectralDecomposition,
    rank: usize,
}

impl DensityMatrix {
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::from_hermitian(Hermitian::new(m, tol)?, tol)
    }

    pub fn from_hermitian(mat: Hermitian, tol: &Tolerances) -> Result<Self> {
        let tr = mat.trace();
        if (tr - 1.0).abs() > tol.trace_tol {
            return Err(Error::BadTrace(tr));
        }
        let spectrum = psd_spectrum(&mat, tol)?;
        let rank = spectrum.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        Ok(Self { mat, spectrum, rank })
    }

    /// Renormalizes a PSD matrix to unit trace before validating.
    pub fn normalized(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let h = Hermitian::new(m, tol)?;
        let tr = h.trace();
        if !(tr > 0.0) {
            return Err(Error::BadTrace(tr));
        }
        Self::from_hermitian(Hermitian::hermitize(h.into_matrix().unscale(tr)), tol)
    }

    /// The pure state `xx*/‖x‖²`.
    pub fn pure(x: &CVector, tol: &Tolerances) -> Result<Self> {
        let n2 = x.norm_squared();
        if !(n2 > 0.0) {
            return Err(Error::Invalid("zero vector".into()));
        }
        Self::from_hermitian(Hermitian::hermitize((x * x.adjoint()).unscale(n2)), tol)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let mat = Hermitian::from_real_diagonal(&vec![1.0 / n as f64; n]);
        let spectrum = hermitian_eig(&mat);
        Self { mat, spectrum, rank: n }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_positive_definite(&self) -> bool {
        self.rank == self.dim()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.mat
    }

    pub fn matrix(&self) -> &CMatrix {
        self.mat.as_matrix()
    }

    /// Spectrum with kernel eigenvalues set to exactly 0.
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// Real power under the support convention.
    pub fn power(&self, r: f64) -> Hermitian {
        power_from_spectrum(&self.spectrum, r)
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.eigenvalues.iter().map(|l| l * l).sum()
    }
}

/// `ρ = GG*/tr(GG*)` with `G` a `dim × rank` complex Gaussian matrix.
pub fn random_state(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::Domain(format!("rank {rank} outside 1..={dim}")));
    }
    let mut rng = rng_from_seed(seed);
    let g = gaussian_matrix(&mut rng, dim, rank);
    DensityMatrix::normalized(&g * g.adjoint(), &Tolerances::default())
}

/// A CPTP map `Mₙ → M_k` given by its Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Invalid("channel needs at least one Kraus operator".into()))?;
        let (out_dim, in_dim) = first.shape();
        for k in &kraus {
            if k.shape() != (out_dim, in_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operators of shapes {:?} and {:?}",
                    (out_dim, in_dim),
                    k.shape()
                )));
            }
            crate::matcore::ensure_finite(k)?;
        }
        let ch = Self { in_dim, out_dim, kraus };
        let resid = ch.completeness_residual();
        if resid > COMPLETENESS_TOL {
            return Err(Error::Invalid(format!("Kraus operators are not trace preserving (residual {resid:e})")));
        }
        Ok(ch)
    }

    pub fn identity(n: usize) -> Self {
        Self { in_dim: n, out_dim: n, kraus: vec![CMatrix::identity(n, n)] }
    }

    /// `X ↦ tr(X) I/n`, with Kraus operators `|i⟩⟨j|/√n`.
    pub fn completely_depolarizing(n: usize) -> Self {
        let s = 1.0 / (n as f64).sqrt();
        let mut kraus = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut k = CMatrix::zeros(n, n);
                k[(i, j)] = c64(s, 0.0);
                kraus.push(k);
            }
        }
        Self { in_dim: n, out_dim: n, kraus }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn completeness_residual(&self) -> f64 {
        let mut s = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            s += k.adjoint() * k;
        }
        max_abs(&(s - CMatrix::identity(self.in_dim, self.in_dim)))
    }

    /// `Σᵢ KᵢXKᵢ*`.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "channel input is {0}x{0}, got {1}x{2}",
                self.in_dim,
                x.nrows(),
                x.ncols()
            )));
        }
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    pub fn apply_hermitian(&self, x: &Hermitian) -> Result<Hermitian> {
        Ok(Hermitian::hermitize(self.apply(x.as_matrix())?))
    }

    pub fn apply_state(&self, rho: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
        let out = self.apply_hermitian(rho.hermitian())?;
        // Renormalize away the O(1e-16) trace drift of the sum.
        let tr = out.trace();
        if (tr - 1.0).abs() > tol.trace_tol {
            return Err(Error::BadTrace(tr));
        }
        DensityMatrix::from_hermitian(Hermitian::hermitize(out.into_matrix().unscale(tr)), tol)
    }

    /// `Σᵢ Kᵢ*YKᵢ`, the Hilbert–Schmidt adjoint.
    pub fn adjoint_apply(&self, y: &CMatrix) -> Result<CMatrix> {
        if y.shape() != (self.out_dim, self.out_dim) {
            return Err(Error::DimensionMismatch(format!(
                "adjoint input is {0}x{0}, got {1}x{2}",
                self.out_dim,
                y.nrows(),
                y.ncols()
            )));
        }
        let mut out = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            out += k.adjoint() * y * k;
        }
        Ok(out)
    }

    /// Isometry `V x = Σᵢ eᵢ ⊗ Kᵢx` into environment ⊗ output.
    pub fn stinespring(&self) -> StinespringDilation {
        let m = self.kraus.len();
        let k = self.out_dim;
        let mut v = CMatrix::zeros(m * k, self.in_dim);
        for (i, kr) in self.kraus.iter().enumerate() {
            v.view_mut((i * k, 0), (k, self.in_dim)).copy_from(kr);
        }
        StinespringDilation { v, env_dim: m, out_dim: k }
    }
}

/// Channel with Kraus operators `vᵢvᵢ*` for the columns of `basis`.
pub fn pinching_channel(basis: &CMatrix, tol: &Tolerances) -> Result<KrausChannel> {
    check_orthonormal_basis(basis, tol)?;
    let n = basis.nrows();
    let kraus = (0..n)
        .map(|i| {
            let v = basis.column(i);
            v * v.adjoint()
        })
        .collect();
    Ok(KrausChannel { in_dim: n, out_dim: n, kraus })
}

/// Random channel from a Gaussian isometry `V: ℂⁿ → ℂᵐ ⊗ ℂᵏ` split into `m`
/// Kraus operators of shape `k × n`.
pub fn random_channel(n: usize, k: usize, m: usize, seed: u64) -> Result<KrausChannel> {
    if n == 0 || k == 0 || m == 0 {
        return Err(Error::Domain("channel dimensions must be positive".into()));
    }
    if m * k < n {
        return Err(Error::Domain(format!("no isometry from C^{n} into C^{m} ⊗ C^{k}")));
    }
    let mut rng = rng_from_seed(seed);
    let g = gaussian_matrix(&mut rng, m * k, n);
    let v = g.qr().q();
    let kraus = (0..m).map(|i| v.view((i * k, 0), (k, n)).into_owned()).collect();
    KrausChannel::new(kraus)
}

#[derive(Clone, Debug)]
pub struct StinespringDilation {
    pub v: CMatrix,
    pub env_dim: usize,
    pub out_dim: usize,
}

impl StinespringDilation {
    pub fn isometry_residual(&self) -> f64 {
        let n = self.v.ncols();
        max_abs(&(self.v.adjoint() * &self.v - CMatrix::identity(n, n)))
    }

    /// Traces the environment out of `VXV*`.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.v.ncols(), self.v.ncols()) {
            return Err(Error::DimensionMismatch("dilation input".into()));
        }
        partial_trace(&(&self.v * x * self.v.adjoint()), self.env_dim, self.out_dim, Factor::First)
    }
}

/// The Petz map `R_{φ,B}` and its rotated family, with the spectra of `B`
/// and `φ(B)` computed once.
#[derive(Clone, Debug)]
pub struct RecoveryMap {
    channel: KrausChannel,
    reference: SpectralDecomposition,
    image: SpectralDecomposition,
}

impl RecoveryMap {
    pub fn new(channel: &KrausChannel, b: &DensityMatrix, tol: &Tolerances) -> Result<Self> {
        if b.dim() != channel.in_dim() {
            return Err(Error::DimensionMismatch(format!(
                "reference state is {0}x{0}, channel input is {1}x{1}",
                b.dim(),
                channel.in_dim()
            )));
        }
        if !b.is_positive_definite() {
            return Err(Error::IllPosed("reference state B is singular".into()));
        }
        let image = psd_spectrum(&channel.apply_hermitian(b.hermitian())?, tol)?;
        if image.rank(tol) < image.dim() || image.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::IllPosed("image φ(B) is singular".into()));
        }
        Ok(Self { channel: channel.clone(), reference: b.spectrum().clone(), image })
    }

    pub fn channel(&self) -> &KrausChannel {
        &self.channel
    }

    /// `B^{1/2} φ*(φ(B)^{-1/2} Y φ(B)^{-1/2}) B^{1/2}`.
    pub fn petz(&self, y: &Hermitian) -> Result<Hermitian> {
        self.check_input(y)?;
        let img = self.image.map(|l| c64(l.powf(-0.5), 0.0));
        let refh = self.reference.map(|l| c64(l.sqrt(), 0.0));
        let inner = &img * y.as_matrix() * &img;
        let lifted = self.channel.adjoint_apply(&inner)?;
        Ok(Hermitian::hermitize(&refh * lifted * &refh))
    }

    /// `B^{1/2+it} φ*(φ(B)^{-1/2-it} Y (φ(B)^{-1/2-it})*) (B^{1/2+it})*`.
    /// At `t = 0` this is exactly [`RecoveryMap::petz`].
    pub fn rotated(&self, t: f64, y: &Hermitian) -> Result<Hermitian> {
        if t == 0.0 {
            return self.petz(y);
        }
        self.check_input(y)?;
        let img = self.image.map(|l| (c64(-0.5, -t) * l.ln()).exp());
        let refp = self.reference.map(|l| (c64(0.5, t) * l.ln()).exp());
        let inner = &img * y.as_matrix() * img.adjoint();
        let lifted = self.channel.adjoint_apply(&inner)?;
        Ok(Hermitian::hermitize(&refp * lifted * refp.adjoint()))
    }

    fn check_input(&self, y: &Hermitian) -> Result<()> {
        if y.dim() != self.channel.out_dim() {
            return Err(Error::DimensionMismatch(format!(
                "recovery input is {0}x{0}, channel output is {1}x{1}",
                y.dim(),
                self.channel.out_dim()
            )));
        }
        Ok(())
    }
}

pub fn petz_recover(channel: &KrausChannel, b: &DensityMatrix, y: &Hermitian, tol: &Tolerances) -> Result<Hermitian> {
    RecoveryMap::new(channel, b, tol)?.petz(y)
}

pub fn rotated_petz_recover(
    channel: &KrausChannel,
    b: &DensityMatrix,
    t: f64,
    y: &Hermitian,
    tol: &Tolerances,
) -> Result<Hermitian> {
    RecoveryMap::new(channel, b, tol)?.rotated(t, y)
}

/// `Δ^θ(X) = A^θ X B^{-θ}` for the relative modular operator `Δ(X) = AXB⁻¹`.
pub fn modular_power_apply(a: &DensityMatrix, b: &DensityMatrix, theta: f64, x: &CMatrix) -> Result<CMatrix> {
    if !b.is_positive_definite() {
        return Err(Error::IllPosed("modular operator needs a positive definite B".into()));
    }
    if a.dim() != b.dim() || x.shape() != (a.dim(), a.dim()) {
        return Err(Error::DimensionMismatch("modular operator operands".into()));
    }
    Ok(a.power(theta).as_matrix() * x * b.power(-theta).as_matrix())
}
