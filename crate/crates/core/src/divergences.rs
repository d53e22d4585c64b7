//! Entropies, divergences and fidelities of density matrices.
//!
//! All logarithms are natural. Relative entropies that are infinite because
//! of a support violation are returned as values with `finite == false`
//! rather than as errors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    c64, hermitian_eig, power_from_spectrum, psd_spectrum, real_part_checked, schatten_norm, trace_product, CMatrix,
    Hermitian, SpectralDecomposition, Tolerances,
};
use crate::quantum::{DensityMatrix, KrausChannel};

/// Residual norm of a support vector of `A` in the kernel of `B` above which
/// `supp(A) ⊆ supp(B)` is considered false.
pub const SUPPORT_INCLUSION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivergenceValue {
    /// Nats. `+∞` when `finite` is false.
    #[serde(with = "crate::harness::report::lossless_f64")]
    pub value: f64,
    pub finite: bool,
}

impl DivergenceValue {
    pub fn finite(value: f64) -> Self {
        Self { value, finite: true }
    }

    pub fn infinite() -> Self {
        Self { value: f64::INFINITY, finite: false }
    }

    /// The value if finite.
    pub fn get(&self) -> Option<f64> {
        self.finite.then_some(self.value)
    }
}

/// Values of a quantity along a strictly increasing parameter list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCurve {
    pub parameter: String,
    pub points: Vec<(f64, f64)>,
}

impl GridCurve {
    pub fn new(parameter: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::NonFinite);
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Invalid("curve parameters must be strictly increasing".into()));
        }
        Ok(Self { parameter: parameter.into(), points })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }
}

fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{0}x{0} vs {1}x{1}", a.dim(), b.dim())));
    }
    Ok(())
}

fn check_unit_interval(name: &str, x: f64, lo_open: bool, hi_open: bool) -> Result<()> {
    let lo_ok = if lo_open { x > 0.0 } else { x >= 0.0 };
    let hi_ok = if hi_open { x < 1.0 } else { x <= 1.0 };
    if !(lo_ok && hi_ok) {
        return Err(Error::Domain(format!("{name} = {x} outside its interval")));
    }
    Ok(())
}

/// Sum of `f(λ)` over the eigenvalues of a PSD product, dropping kernel
/// eigenvalues (relative clip) so that roundoff near zero is not amplified by
/// fractional powers.
fn psd_trace_fn(m: CMatrix, tol: &Tolerances, f: impl Fn(f64) -> f64) -> f64 {
    let sd = hermitian_eig(&Hermitian::hermitize(m));
    let thr = sd.support_threshold(tol);
    sd.eigenvalues.iter().filter(|&&l| l > thr).map(|&l| f(l)).sum()
}

/// `supp(A) ⊆ supp(B)`: every support eigenvector of `A` has a component in
/// the kernel of `B` of norm at most [`SUPPORT_INCLUSION_TOL`].
pub fn support_contained(a: &DensityMatrix, b: &DensityMatrix, tol: &Tolerances) -> bool {
    if b.is_positive_definite() {
        return true;
    }
    let kernel = b.spectrum().kernel_projector(tol);
    let support = a.spectrum().support_vectors(tol);
    let residual = kernel * support;
    residual.column_iter().all(|c| c.norm() <= SUPPORT_INCLUSION_TOL)
}

/// `D(A|B) = tr A(ln A − ln B)`, infinite unless `supp(A) ⊆ supp(B)`.
pub fn relative_entropy(a: &DensityMatrix, b: &DensityMatrix, tol: &Tolerances) -> Result<DivergenceValue> {
    check_same_dim(a, b)?;
    if !support_contained(a, b, tol) {
        return Ok(DivergenceValue::infinite());
    }
    let neg_entropy: f64 = a.spectrum().eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum();
    let log_b = log_from_spectrum(b.spectrum());
    let cross = real_part_checked(trace_product(a.matrix(), &log_b), 1.0)?;
    Ok(DivergenceValue::finite(neg_entropy - cross))
}

fn log_from_spectrum(sd: &SpectralDecomposition) -> CMatrix {
    Hermitian::hermitize(sd.map(|l| if l > 0.0 { c64(l.ln(), 0.0) } else { c64(0.0, 0.0) })).into_matrix()
}

/// `tr(A^θ B^{1−θ})` for `θ ∈ [0, 1]`.
pub fn theta_divergence(a: &DensityMatrix, b: &DensityMatrix, theta: f64, _tol: &Tolerances) -> Result<f64> {
    check_same_dim(a, b)?;
    check_unit_interval("theta", theta, false, false)?;
    let z = trace_product(a.power(theta).as_matrix(), b.power(1.0 - theta).as_matrix());
    real_part_checked(z, 1.0)
}

/// Rényi divergence `ln tr(A^θ B^{1−θ}) / (θ − 1)` for `θ ∈ [0, 1)`.
pub fn renyi_theta(a: &DensityMatrix, b: &DensityMatrix, theta: f64, tol: &Tolerances) -> Result<DivergenceValue> {
    check_unit_interval("theta", theta, false, true)?;
    let base = theta_divergence(a, b, theta, tol)?;
    if !(base > 0.0) {
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(base.ln() / (theta - 1.0)))
}

/// `F(A|B) = tr (A^{1/2} B A^{1/2})^{1/2}`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    check_same_dim(a, b)?;
    let ah = a.power(0.5);
    let inner = ah.as_matrix() * b.matrix() * ah.as_matrix();
    Ok(psd_trace_fn(inner, tol, f64::sqrt))
}

/// Fidelity against an arbitrary PSD matrix (recovered states need not be
/// normalized exactly).
pub fn fidelity_with(a: &DensityMatrix, y: &Hermitian, tol: &Tolerances) -> Result<f64> {
    if a.dim() != y.dim() {
        return Err(Error::DimensionMismatch("fidelity operands".into()));
    }
    let ah = a.power(0.5);
    let inner = ah.as_matrix() * y.as_matrix() * ah.as_matrix();
    Ok(psd_trace_fn(inner, tol, f64::sqrt))
}

/// `F_θ(A|B) = tr|A^θ B^{1−θ}|`.
pub fn f_theta(a: &DensityMatrix, b: &DensityMatrix, theta: f64, _tol: &Tolerances) -> Result<f64> {
    check_same_dim(a, b)?;
    check_unit_interval("theta", theta, false, false)?;
    schatten_norm(&(a.power(theta).as_matrix() * b.power(1.0 - theta).as_matrix()), 1.0)
}

/// `Σⱼ λⱼ^θ σⱼ^{1−θ}` over both spectra sorted non-increasing.
pub fn vn_upper_bound(a: &DensityMatrix, b: &DensityMatrix, theta: f64) -> Result<f64> {
    check_same_dim(a, b)?;
    check_unit_interval("theta", theta, true, true)?;
    let pow = |x: f64, e: f64| if x > 0.0 { x.powf(e) } else { 0.0 };
    Ok(a.spectrum()
        .eigenvalues
        .iter()
        .zip(&b.spectrum().eigenvalues)
        .map(|(&l, &s)| pow(l, theta) * pow(s, 1.0 - theta))
        .sum())
}

fn check_sandwich_order(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("sandwiched order t = {t} must be in (0, ∞)")));
    }
    Ok(())
}

/// `𝓕_t(A|B) = tr (B^{(1−t)/2t} A B^{(1−t)/2t})^t`.
pub fn sandwiched_f(a: &DensityMatrix, b: &DensityMatrix, t: f64, tol: &Tolerances) -> Result<f64> {
    check_same_dim(a, b)?;
    check_sandwich_order(t)?;
    if !support_contained(a, b, tol) {
        return Err(Error::SupportViolation);
    }
    let bs = b.power((1.0 - t) / (2.0 * t));
    let inner = bs.as_matrix() * a.matrix() * bs.as_matrix();
    Ok(psd_trace_fn(inner, tol, |l| l.powf(t)))
}

/// `S_t(A|B) = ln 𝓕_t(A|B) / (t − 1)`.
pub fn sandwiched_renyi(a: &DensityMatrix, b: &DensityMatrix, t: f64, tol: &Tolerances) -> Result<DivergenceValue> {
    if t == 1.0 {
        return Err(Error::Domain("sandwiched Rényi order must differ from 1".into()));
    }
    let f = sandwiched_f(a, b, t, tol)?;
    if !(f > 0.0) {
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(f.ln() / (t - 1.0)))
}

/// `D(A|B) − D(φ(A)|φ(B))`.
pub fn relative_entropy_difference(
    a: &DensityMatrix,
    b: &DensityMatrix,
    channel: &KrausChannel,
    tol: &Tolerances,
) -> Result<DivergenceValue> {
    let before = relative_entropy(a, b, tol)?;
    let fa = channel.apply_state(a, tol)?;
    let fb = channel.apply_state(b, tol)?;
    let after = relative_entropy(&fa, &fb, tol)?;
    match (before.get(), after.get()) {
        (Some(x), Some(y)) => Ok(DivergenceValue::finite(x - y)),
        _ => Ok(DivergenceValue::infinite()),
    }
}

/// Shared pieces of the Rényi relative entropy difference at one order.
struct DeltaParts {
    a_half: Hermitian,
    b_pow: Hermitian,
    /// `φ(B)^{-s}` and `φ(A)^{2s}` (or `φ(A)^{s}` for the dilation form).
    image_b: SpectralDecomposition,
    image_a: SpectralDecomposition,
}

fn delta_parts(a: &DensityMatrix, b: &DensityMatrix, channel: &KrausChannel, s: f64, tol: &Tolerances) -> Result<DeltaParts> {
    check_same_dim(a, b)?;
    if !b.is_positive_definite() {
        return Err(Error::IllPosed("B must be positive definite".into()));
    }
    let image_b = psd_spectrum(&channel.apply_hermitian(b.hermitian())?, tol)?;
    if image_b.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::IllPosed("φ(B) must be positive definite".into()));
    }
    let image_a = psd_spectrum(&channel.apply_hermitian(a.hermitian())?, tol)?;
    Ok(DeltaParts { a_half: a.power(0.5), b_pow: b.power(s), image_b, image_a })
}

fn check_delta_order(t: f64) -> Result<()> {
    if !(0.5..1.0).contains(&t) {
        return Err(Error::Domain(format!("order t = {t} outside [1/2, 1)")));
    }
    Ok(())
}

/// Rényi relative entropy difference `Δ̃_t(A, B, φ)` for `t ∈ [1/2, 1)`,
/// evaluated through the trace form
/// `tr(A^{1/2}B^{s} φ*(φ(B)^{-s} φ(A)^{2s} φ(B)^{-s}) B^{s}A^{1/2})^t / (t − 1)`
/// with `s = (1 − t)/2t`.
pub fn delta_tilde(
    a: &DensityMatrix,
    b: &DensityMatrix,
    channel: &KrausChannel,
    t: f64,
    tol: &Tolerances,
) -> Result<DivergenceValue> {
    check_delta_order(t)?;
    let s = (1.0 - t) / (2.0 * t);
    let p = delta_parts(a, b, channel, s, tol)?;
    let fb = power_from_spectrum(&p.image_b, -s);
    let fa = power_from_spectrum(&p.image_a, 2.0 * s);
    let inner = fb.as_matrix() * fa.as_matrix() * fb.as_matrix();
    let lifted = channel.adjoint_apply(&inner)?;
    let outer = p.a_half.as_matrix() * p.b_pow.as_matrix();
    let m = &outer * lifted * outer.adjoint();
    let q = psd_trace_fn(m, tol, |l| l.powf(t));
    if !(q > 0.0) {
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(q.ln() / (t - 1.0)))
}

/// `Δ̃_t` through the Stinespring isometry:
/// `2t/(t−1) · ln ‖(I_m ⊗ φ(A)^{s} φ(B)^{-s}) V B^{s} A^{1/2}‖_{2t}`.
pub fn delta_tilde_dilation(
    a: &DensityMatrix,
    b: &DensityMatrix,
    channel: &KrausChannel,
    t: f64,
    tol: &Tolerances,
) -> Result<DivergenceValue> {
    check_delta_order(t)?;
    let s = (1.0 - t) / (2.0 * t);
    let x = dilated_operator(a, b, channel, s, tol)?;
    let norm = schatten_norm(&x, 2.0 * t)?;
    if !(norm > 0.0) {
        return Ok(DivergenceValue::infinite());
    }
    Ok(DivergenceValue::finite(2.0 * t / (t - 1.0) * norm.ln()))
}

/// `(I_m ⊗ φ(A)^{s} φ(B)^{-s}) V B^{s} A^{1/2}`.
fn dilated_operator(
    a: &DensityMatrix,
    b: &DensityMatrix,
    channel: &KrausChannel,
    s: f64,
    tol: &Tolerances,
) -> Result<CMatrix> {
    let p = delta_parts(a, b, channel, s, tol)?;
    let left = power_from_spectrum(&p.image_a, s).as_matrix() * power_from_spectrum(&p.image_b, -s).as_matrix();
    let dil = channel.stinespring();
    let k = dil.out_dim;
    let n = a.dim();
    let right = &dil.v * p.b_pow.as_matrix() * p.a_half.as_matrix();
    let mut out = CMatrix::zeros(dil.env_dim * k, n);
    for i in 0..dil.env_dim {
        let block = &left * right.view((i * k, 0), (k, n));
        out.view_mut((i * k, 0), (k, n)).copy_from(&block);
    }
    Ok(out)
}

/// `θ ↦ ‖(I_m ⊗ φ(A)^{θ/2} φ(B)^{-θ/2}) V B^{θ/2} A^{1/2}‖_{2/(1+θ)}` on
/// `[0, 1]`. Log-convexity of this map would imply monotonicity of `Δ̃_t`.
pub fn recoverability_probe(
    a: &DensityMatrix,
    b: &DensityMatrix,
    channel: &KrausChannel,
    theta: f64,
    tol: &Tolerances,
) -> Result<f64> {
    check_unit_interval("theta", theta, false, false)?;
    let x = dilated_operator(a, b, channel, theta / 2.0, tol)?;
    schatten_norm(&x, 2.0 / (1.0 + theta))
}

/// `F(A | R_{φ,B}(φ(A)))`.
pub fn recovery_fidelity(a: &DensityMatrix, b: &DensityMatrix, channel: &KrausChannel, tol: &Tolerances) -> Result<f64> {
    let map = crate::quantum::RecoveryMap::new(channel, b, tol)?;
    let fa = channel.apply_hermitian(a.hermitian())?;
    fidelity_with(a, &map.petz(&fa)?, tol)
}

/// `tr(ρ x^θ)`, the state-power curve for a positive definite `x`.
pub fn state_power(rho: &DensityMatrix, x: &Hermitian, theta: f64, tol: &Tolerances) -> Result<f64> {
    let sd = positive_definite_spectrum(x, tol)?;
    real_part_checked(trace_product(rho.matrix(), power_from_spectrum(&sd, theta).as_matrix()), 1.0)
}

fn positive_definite_spectrum(x: &Hermitian, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let sd = psd_spectrum(x, tol).map_err(|_| Error::Domain("x must be positive definite".into()))?;
    if sd.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::Domain("x must be positive definite".into()));
    }
    Ok(sd)
}

/// Both sides of `φ(x ln x) ≥ φ(x)[ln φ(x) + 2(ln φ(x)^{1/2} − ln φ(x^{1/2}))]`
/// for the state `φ = tr(ρ ·)`, plus the Jensen bound `φ(x) ln φ(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenRefinement {
    pub lhs: f64,
    pub rhs: f64,
    pub jensen: f64,
}

impl JensenRefinement {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn corollary3_terms(rho: &DensityMatrix, x: &Hermitian, tol: &Tolerances) -> Result<JensenRefinement> {
    if rho.dim() != x.dim() {
        return Err(Error::DimensionMismatch("state and operator".into()));
    }
    let sd = positive_definite_spectrum(x, tol)?;
    let state = |m: &CMatrix| real_part_checked(trace_product(rho.matrix(), m), 1.0);
    let x_log_x = sd.map(|l| c64(l * l.ln(), 0.0));
    let lhs = state(&x_log_x)?;
    let phi_x = state(x.as_matrix())?;
    let phi_sqrt = state(power_from_spectrum(&sd, 0.5).as_matrix())?;
    let rhs = phi_x * (phi_x.ln() + 2.0 * (0.5 * phi_x.ln() - phi_sqrt.ln()));
    Ok(JensenRefinement { lhs, rhs, jensen: phi_x * phi_x.ln() })
}

/// `φ(x ln x) − RHS`; non-negative for every positive definite state and `x`.
pub fn corollary3_gap(rho: &DensityMatrix, x: &Hermitian, tol: &Tolerances) -> Result<f64> {
    Ok(corollary3_terms(rho, x, tol)?.gap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_matrix;
    use crate::quantum::{pinching_channel, random_channel, random_state};
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag(d: &[f64]) -> DensityMatrix {
        DensityMatrix::from_hermitian(Hermitian::from_real_diagonal(d), &tol()).unwrap()
    }

    fn paper_pair() -> (DensityMatrix, DensityMatrix, KrausChannel) {
        let a = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]), &tol()).unwrap();
        let b = DensityMatrix::new(real_matrix(2, 2, &[0.75, -0.25, -0.25, 0.25]), &tol()).unwrap();
        let ch = pinching_channel(&CMatrix::identity(2, 2), &tol()).unwrap();
        (a, b, ch)
    }

    // Scalar evaluations for the commuting pair diag(1/2,1/2), diag(3/4,1/4).
    const KL_COMMUTING: f64 = 0.143_841_036_225_890_42; // 0.5 ln(4/3)
    const AFFINITY_COMMUTING: f64 = 0.965_925_826_289_068_3; // √(3/8) + √(1/8)

    #[test]
    fn commuting_constants_are_scalar_formulas() {
        assert_abs_diff_eq!(KL_COMMUTING, 0.5 * (4.0f64 / 3.0).ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(AFFINITY_COMMUTING, (3.0f64 / 8.0).sqrt() + (1.0f64 / 8.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn relative_entropy_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        assert_abs_diff_eq!(relative_entropy(&a, &a, &tol()).unwrap().value, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(relative_entropy(&a, &b, &tol()).unwrap().value, KL_COMMUTING, epsilon = 1e-14);

        // rank-one A = xx*: D = −⟨x, ln B x⟩. ln B from the closed-form 2x2 eigensystem.
        let (pa, pb, _) = paper_pair();
        let disc = (0.0625f64 + 0.0625).sqrt(); // sqrt(((3/4-1/4)/2)^2 + (1/4)^2)
        let (l1, l2) = (0.5 + disc, 0.5 - disc);
        // eigenvector for l1: ( -1/4, l1 - 3/4 ) normalised
        let (vx, vy) = (-0.25, l1 - 0.75);
        let nv = (vx * vx + vy * vy).sqrt();
        let (vx, vy) = (vx / nv, vy / nv);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let overlap1 = ((vx + vy) * s).powi(2);
        let expected = -(overlap1 * l1.ln() + (1.0 - overlap1) * l2.ln());
        let d = relative_entropy(&pa, &pb, &tol()).unwrap();
        assert!(d.finite);
        assert_abs_diff_eq!(d.value, expected, epsilon = 1e-12);
        // The commonly quoted 1.66308 is rounded loosely; the closed form gives 1.662946.
        assert_abs_diff_eq!(d.value, 1.66308, epsilon = 2e-4);
    }

    #[test]
    fn relative_entropy_support_violation_is_infinite() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[1.0, 0.0]);
        let d = relative_entropy(&a, &b, &tol()).unwrap();
        assert!(!d.finite);
        assert!(d.value.is_infinite());
        // the reverse direction is finite
        assert!(relative_entropy(&b, &a, &tol()).unwrap().finite);
    }

    #[test]
    fn theta_divergence_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        assert_abs_diff_eq!(theta_divergence(&a, &b, 1.0, &tol()).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(theta_divergence(&a, &b, 0.5, &tol()).unwrap(), AFFINITY_COMMUTING, epsilon = 1e-14);
        let r = random_state(4, 4, 1).unwrap();
        for th in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(theta_divergence(&r, &r, th, &tol()).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert!(theta_divergence(&a, &b, 1.2, &tol()).is_err());
        assert!(theta_divergence(&a, &b, -0.1, &tol()).is_err());
        // θ = 1 with singular B gives tr(A Π_B)
        assert_abs_diff_eq!(theta_divergence(&a, &diag(&[1.0, 0.0]), 1.0, &tol()).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn renyi_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        let r = renyi_theta(&a, &b, 0.5, &tol()).unwrap().value;
        assert_abs_diff_eq!(r, -2.0 * AFFINITY_COMMUTING.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(r, 0.069335, epsilon = 2e-6);
        assert_abs_diff_eq!(renyi_theta(&b, &b, 0.3, &tol()).unwrap().value, 0.0, epsilon = 1e-14);
        assert!(renyi_theta(&a, &b, 1.0, &tol()).is_err());
        // disjoint supports
        let d = renyi_theta(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 0.5, &tol()).unwrap();
        assert!(!d.finite);
    }

    #[test]
    fn fidelity_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        assert_abs_diff_eq!(fidelity(&b, &b, &tol()).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fidelity(&a, &b, &tol()).unwrap(), AFFINITY_COMMUTING, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = DensityMatrix::from_hermitian(Hermitian::from_real_diagonal(&[1.0, 0.0]), &tol()).unwrap();
        let y = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]), &tol()).unwrap();
        assert_abs_diff_eq!(fidelity(&x, &y, &tol()).unwrap(), s, epsilon = 1e-12);
    }

    #[test]
    fn f_theta_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        assert_abs_diff_eq!(f_theta(&a, &b, 0.5, &tol()).unwrap(), AFFINITY_COMMUTING, epsilon = 1e-14);
        assert_abs_diff_eq!(f_theta(&a, &b, 1.0, &tol()).unwrap(), 1.0, epsilon = 1e-14);

        // A = (1/2)[[1,1/2],[1/2,1]] has eigenpairs 3/4 ↦ (1,1)/√2, 1/4 ↦ (1,−1)/√2,
        // so ‖A^θ e₁‖² = ((3/4)^{2θ} + (1/4)^{2θ}) / 2.
        let a6 = DensityMatrix::new(real_matrix(2, 2, &[0.5, 0.25, 0.25, 0.5]), &tol()).unwrap();
        let b6 = diag(&[1.0, 0.0]);
        let th = 0.75;
        let closed = ((0.75f64.powf(2.0 * th) + 0.25f64.powf(2.0 * th)) / 2.0).sqrt();
        assert_abs_diff_eq!(f_theta(&a6, &b6, th, &tol()).unwrap(), closed, epsilon = 1e-13);
        assert_abs_diff_eq!(closed, 0.62230, epsilon = 1e-5);
    }

    #[test]
    fn vn_bound_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        assert_abs_diff_eq!(vn_upper_bound(&a, &b, 0.5).unwrap(), AFFINITY_COMMUTING, epsilon = 1e-14);
        let r = random_state(3, 3, 9).unwrap();
        assert_abs_diff_eq!(vn_upper_bound(&r, &r, 0.4).unwrap(), 1.0, epsilon = 1e-14);
        assert!(vn_upper_bound(&a, &b, 0.0).is_err());
    }

    #[test]
    fn sandwiched_examples() {
        let a = diag(&[0.5, 0.5]);
        let b = diag(&[0.75, 0.25]);
        assert_abs_diff_eq!(sandwiched_f(&a, &b, 1.0, &tol()).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sandwiched_f(&a, &b, 0.5, &tol()).unwrap(), AFFINITY_COMMUTING, epsilon = 1e-14);
        let r = random_state(3, 3, 2).unwrap();
        for t in [0.5, 0.8, 2.0] {
            assert_abs_diff_eq!(sandwiched_f(&r, &r, t, &tol()).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sandwiched_renyi(&r, &r, t, &tol()).unwrap().value, 0.0, epsilon = 1e-11);
        }
        let s = sandwiched_renyi(&a, &b, 0.5, &tol()).unwrap().value;
        assert_abs_diff_eq!(s, -2.0 * fidelity(&a, &b, &tol()).unwrap().ln(), epsilon = 1e-13);
        assert!(matches!(sandwiched_f(&a, &diag(&[1.0, 0.0]), 0.7, &tol()), Err(Error::SupportViolation)));
        assert!(sandwiched_renyi(&a, &b, 1.0, &tol()).is_err());
        assert!(sandwiched_f(&a, &b, 0.0, &tol()).is_err());
    }

    #[test]
    fn relative_entropy_difference_examples() {
        let a = random_state(3, 3, 5).unwrap();
        let b = random_state(3, 3, 6).unwrap();
        let id = KrausChannel::identity(3);
        assert_abs_diff_eq!(relative_entropy_difference(&a, &b, &id, &tol()).unwrap().value, 0.0, epsilon = 1e-12);
        let dep = KrausChannel::completely_depolarizing(3);
        assert_abs_diff_eq!(relative_entropy_difference(&a, &a, &dep, &tol()).unwrap().value, 0.0, epsilon = 1e-12);

        let (pa, pb, pin) = paper_pair();
        let red = relative_entropy_difference(&pa, &pb, &pin, &tol()).unwrap().value;
        assert_abs_diff_eq!(red, 1.5191, epsilon = 2e-3);
    }

    #[test]
    fn delta_tilde_examples() {
        let a = random_state(3, 3, 15).unwrap();
        let b = random_state(3, 3, 16).unwrap();
        let id = KrausChannel::identity(3);
        for t in [0.5, 0.7, 0.95] {
            assert_abs_diff_eq!(delta_tilde(&a, &b, &id, t, &tol()).unwrap().value, 0.0, epsilon = 1e-10);
        }
        let (pa, pb, pin) = paper_pair();
        let half = delta_tilde(&pa, &pb, &pin, 0.5, &tol()).unwrap().value;
        assert_abs_diff_eq!(half, 1.5349, epsilon = 2e-3);
        let near_one = delta_tilde(&pa, &pb, &pin, 0.999, &tol()).unwrap().value;
        assert_abs_diff_eq!(near_one, 1.5191, epsilon = 0.01);
        assert!(delta_tilde(&pa, &pb, &pin, 1.0, &tol()).is_err());
        assert!(delta_tilde(&pa, &pb, &pin, 0.4, &tol()).is_err());
        assert!(matches!(delta_tilde(&pb, &pa, &pin, 0.6, &tol()), Err(Error::IllPosed(_))));
    }

    #[test]
    fn delta_tilde_two_routes_agree() {
        let a = random_state(3, 2, 25).unwrap();
        let b = random_state(3, 3, 26).unwrap();
        let ch = random_channel(3, 2, 3, 27).unwrap();
        for t in [0.5, 0.66, 0.9, 0.999] {
            let x = delta_tilde(&a, &b, &ch, t, &tol()).unwrap().value;
            let y = delta_tilde_dilation(&a, &b, &ch, t, &tol()).unwrap().value;
            assert_abs_diff_eq!(x, y, epsilon = 1e-8);
        }
    }

    #[test]
    fn delta_tilde_half_is_petz_fidelity() {
        let (pa, pb, pin) = paper_pair();
        let f = recovery_fidelity(&pa, &pb, &pin, &tol()).unwrap();
        assert_abs_diff_eq!(f, (-1.5349f64 / 2.0).exp(), epsilon = 1e-3);
        let d = delta_tilde(&pa, &pb, &pin, 0.5, &tol()).unwrap().value;
        assert_abs_diff_eq!(d, -2.0 * f.ln(), epsilon = 1e-8);
    }

    #[test]
    fn corollary3_examples() {
        let rho = random_state(3, 3, 3).unwrap();
        let id = Hermitian::identity(3);
        assert_abs_diff_eq!(corollary3_gap(&rho, &id, &tol()).unwrap(), 0.0, epsilon = 1e-14);
        let scaled = Hermitian::from_real_diagonal(&[2.5, 2.5, 2.5]);
        assert_abs_diff_eq!(corollary3_gap(&rho, &scaled, &tol()).unwrap(), 0.0, epsilon = 1e-13);
        let not_pd = Hermitian::from_real_diagonal(&[1.0, 0.0, 1.0]);
        assert!(matches!(corollary3_gap(&rho, &not_pd, &tol()), Err(Error::Domain(_))));
    }

    #[test]
    fn grid_curve_validation() {
        assert!(GridCurve::new("theta", vec![(0.0, 1.0), (0.5, 2.0)]).is_ok());
        assert!(GridCurve::new("theta", vec![(0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(GridCurve::new("theta", vec![(0.0, f64::NAN)]).is_err());
    }
}
