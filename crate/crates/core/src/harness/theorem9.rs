//! Rank-one `A = xx*` with `φ` a pinching along a basis containing `x`: the
//! recoverability inequality holds, and the interpolating function has the
//! closed form `g(θ) = λ^{−θ/2}⟨B^{θ/2}x, x⟩`, `λ = ⟨Bx, x⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::counterexample::eq4_sides;
use crate::harness::grid::Grid;
use crate::harness::scans::{logconvexity_report, ScanReport, SCAN_TOL};
use crate::instance::ProblemInstance;
use crate::matcore::{power_from_spectrum, psd_spectrum, schatten_norm, CMatrix, CVector, Tolerances};
use crate::quantum::{pinching_channel, DensityMatrix};

pub const G_AGREEMENT_TOL: f64 = 1e-8;
pub const INEQUALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem9Report {
    pub dim: usize,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub inequality_slack: f64,
    pub max_g_discrepancy: f64,
    pub scan: ScanReport,
    pub pass: bool,
}

/// Orthonormal basis (as columns) whose first column is `x`.
pub fn basis_containing(x: &CVector) -> CMatrix {
    let n = x.len();
    let mut cols: Vec<CVector> = vec![x.clone()];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = CVector::zeros(n);
        v[j] = crate::matcore::c64(1.0, 0.0);
        for c in &cols {
            let proj = c.dotc(&v);
            v -= c * proj;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v.unscale(norm));
        }
    }
    CMatrix::from_columns(&cols)
}

pub fn theorem9_check(b: &DensityMatrix, x: &CVector, grid: &Grid, tol: &Tolerances) -> Result<Theorem9Report> {
    let n = b.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("x has length {}, B is {n}x{n}", x.len())));
    }
    if !b.is_positive_definite() {
        return Err(Error::Domain("B must be positive definite".into()));
    }
    if (x.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("x has norm {}", x.norm())));
    }
    if !grid.within(0.0, 1.0) {
        return Err(Error::Domain(format!("grid {grid} outside [0, 1]")));
    }
    let basis = basis_containing(x);
    let phi = pinching_channel(&basis, tol)?;
    let a = DensityMatrix::pure(x, tol)?;
    let inst = ProblemInstance::new("theorem9", a, b.clone(), Some(phi.clone()))?;
    let (lhs, rhs) = eq4_sides(&inst, tol)?;

    let lambda = (x.adjoint() * b.matrix() * x)[(0, 0)].re;
    let image = psd_spectrum(&phi.apply_hermitian(b.hermitian())?, tol)?;
    let proj = x * x.adjoint();
    let points = grid.points();
    let mut closed = Vec::with_capacity(points.len());
    let mut discrepancy: f64 = 0.0;
    for &th in &points {
        let bp = b.power(th / 2.0);
        let g = lambda.powf(-th / 2.0) * (x.adjoint() * bp.as_matrix() * x)[(0, 0)].re;
        let m = &proj * power_from_spectrum(&image, -th / 2.0).as_matrix() * bp.as_matrix() * &proj;
        let g_matrix = schatten_norm(&m, 2.0 / (1.0 + th))?;
        discrepancy = discrepancy.max((g - g_matrix).abs());
        closed.push(g);
    }
    let scan = logconvexity_report("theorem9-g", *grid, points, closed, SCAN_TOL, false)?;
    let inequality_slack = rhs - lhs;
    let pass = inequality_slack >= -INEQUALITY_TOL && discrepancy <= G_AGREEMENT_TOL && scan.pass();
    Ok(Theorem9Report {
        dim: n,
        lambda,
        lhs,
        rhs,
        inequality_slack,
        max_g_discrepancy: discrepancy,
        scan,
        pass,
    })
}
