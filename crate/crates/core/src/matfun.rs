//! Primary matrix square roots.
//!
//! A primary square root applies one scalar branch of `√z` to every
//! eigenvalue, so it agrees with a polynomial in its argument. The kernel is
//! the Schur method: `T = Q U Q*`, then the upper triangular root of `U` is
//! filled in column by column.
//!
//! The branch is selected by an angle `θ`: `W = e^{iθ/2} · √(e^{−iθ} T)` with
//! the principal root inside, i.e. the cut is the ray through `−e^{iθ}`.

use nalgebra::Schur;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

pub const DEFAULT_SQRT_TOL: f64 = 1e-10;

/// Eigenvalues closer than this to the (rotated) cut are rejected.
pub const BRANCH_CUT_GUARD: f64 = 1e-8;

/// Minimum clearance a shared branch must leave around every eigenvalue.
pub const COMMON_BRANCH_MARGIN: f64 = 1e-6;

/// Number of candidate branch angles tried by [`choose_branch`].
pub const BRANCH_GRID: usize = 64;

const SCHUR_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtResult {
    #[serde(with = "crate::linalg::matrix_serde")]
    pub w: CMatrix,
    pub branch_angle: f64,
    /// `‖W² − T‖_F`.
    pub residual: f64,
    /// `‖WT − TW‖_F`.
    pub commutation: f64,
}

struct SchurForm {
    q: CMatrix,
    u: CMatrix,
}

impl SchurForm {
    /// Schur form of `T − μI` with `μ` the mean eigenvalue, shifted back.
    /// The iteration can stall on matrices that are scalar up to rounding,
    /// so a looser deflation threshold is tried second.
    fn new(t: &CMatrix) -> Result<Self> {
        let n = t.nrows();
        let mu = t.trace() / Complex64::from(n as f64);
        let shifted = t - CMatrix::identity(n, n) * mu;
        if shifted.iter().all(|x| *x == Complex64::from(0.0)) {
            return Ok(SchurForm {
                q: CMatrix::identity(n, n),
                u: t.clone(),
            });
        }
        let schur = [f64::EPSILON, 1e-14]
            .into_iter()
            .find_map(|eps| Schur::try_new(shifted.clone(), eps, SCHUR_MAX_ITER))
            .ok_or(Error::NoConvergence)?;
        let (q, mut u) = schur.unpack();
        for i in 0..n {
            u[(i, i)] += mu;
        }
        Ok(SchurForm { q, u })
    }

    fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.u.nrows()).map(|i| self.u[(i, i)]).collect()
    }
}

/// Distance from `z` to the closed ray `(−∞, 0]`.
fn distance_to_negative_axis(z: Complex64) -> f64 {
    if z.re <= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

fn rotation(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, -theta)
}

/// Smallest distance from the rotated eigenvalues to the cut.
pub fn branch_clearance(eigenvalues: &[Complex64], theta: f64) -> f64 {
    let w = rotation(theta);
    eigenvalues
        .iter()
        .map(|&z| distance_to_negative_axis(w * z))
        .fold(f64::INFINITY, f64::min)
}

/// The scalar branch `z ↦ e^{iθ/2} √(e^{−iθ} z)`.
pub fn scalar_sqrt(z: Complex64, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta / 2.0) * (rotation(theta) * z).sqrt()
}

/// Picks one branch angle usable for every eigenvalue in `eigenvalues`.
///
/// The principal branch (`θ = 0`) is kept unless another grid angle clears
/// the spectrum at least twice as well.
pub fn choose_branch(eigenvalues: &[Complex64]) -> Result<f64> {
    let grid = (0..BRANCH_GRID).map(|k| 2.0 * std::f64::consts::PI * k as f64 / BRANCH_GRID as f64);
    let (best_theta, best) = grid
        .map(|theta| (theta, branch_clearance(eigenvalues, theta)))
        .fold((0.0, f64::NEG_INFINITY), |acc, cur| {
            if cur.1 > acc.1 {
                cur
            } else {
                acc
            }
        });
    if best < COMMON_BRANCH_MARGIN {
        return Err(Error::NoCommonBranch { best });
    }
    let principal = branch_clearance(eigenvalues, 0.0);
    if principal >= 0.5 * best {
        Ok(0.0)
    } else {
        Ok(best_theta)
    }
}

fn check_input(t: &CMatrix) -> Result<()> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "square root of a {}x{} matrix",
            t.nrows(),
            t.ncols()
        )));
    }
    if !linalg::is_invertible(t) {
        return Err(Error::SingularInput);
    }
    Ok(())
}

fn sqrt_from_schur(t: &CMatrix, schur: &SchurForm, theta: f64, tol: f64) -> Result<SqrtResult> {
    let n = t.nrows();
    let u = &schur.u;
    let rot = rotation(theta);
    for i in 0..n {
        let z = rot * u[(i, i)];
        if distance_to_negative_axis(z) < BRANCH_CUT_GUARD {
            return Err(Error::BranchCutHit {
                re: u[(i, i)].re,
                im: u[(i, i)].im,
            });
        }
    }

    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = scalar_sqrt(u[(j, j)], theta);
        for i in (0..j).rev() {
            let mut s = u[(i, j)];
            for k in i + 1..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    let w = &schur.q * r * schur.q.adjoint();

    let residual = linalg::frobenius(&(&w * &w - t));
    let commutation = linalg::frobenius(&(&w * t - t * &w));
    let scale = t.norm().max(1.0);
    if residual > tol * scale || commutation > tol * scale * scale {
        return Err(Error::SqrtInaccurate {
            residual,
            commutation,
        });
    }
    Ok(SqrtResult {
        w,
        branch_angle: theta,
        residual,
        commutation,
    })
}

/// Square root of `T` on the branch selected by `theta`.
pub fn primary_sqrt(t: &CMatrix, theta: f64, tol: f64) -> Result<SqrtResult> {
    check_input(t)?;
    if t.nrows() == 0 {
        return Ok(SqrtResult {
            w: t.clone(),
            branch_angle: theta,
            residual: 0.0,
            commutation: 0.0,
        });
    }
    sqrt_from_schur(t, &SchurForm::new(t)?, theta, tol)
}

/// Square roots of several matrices on one shared branch, i.e. the blocks of
/// a single primary square root of their direct sum.
pub fn blockwise_primary_sqrt(blocks: &[CMatrix], tol: f64) -> Result<Vec<SqrtResult>> {
    for b in blocks {
        check_input(b)?;
    }
    let forms = blocks
        .iter()
        .map(|b| {
            if b.nrows() == 0 {
                Ok(None)
            } else {
                SchurForm::new(b).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues: Vec<Complex64> = forms
        .iter()
        .flatten()
        .flat_map(|f| f.eigenvalues())
        .collect();
    let theta = if eigenvalues.is_empty() {
        0.0
    } else {
        choose_branch(&eigenvalues)?
    };
    blocks
        .iter()
        .zip(&forms)
        .map(|(b, form)| match form {
            Some(form) => sqrt_from_schur(b, form, theta, tol),
            None => Ok(SqrtResult {
                w: b.clone(),
                branch_angle: theta,
                residual: 0.0,
                commutation: 0.0,
            }),
        })
        .collect()
}

/// Interpolating polynomial of a primary square root, coefficients lowest
/// degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtPolynomial {
    pub coeffs: Vec<Complex64>,
    pub branch_angle: f64,
}

impl SqrtPolynomial {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn eval_matrix(&self, t: &CMatrix) -> CMatrix {
        let n = t.nrows();
        let mut acc = CMatrix::zeros(n, n);
        for &a in self.coeffs.iter().rev() {
            acc = &acc * t;
            for i in 0..n {
                acc[(i, i)] += a;
            }
        }
        acc
    }
}

/// Minimum pairwise eigenvalue gap accepted by [`sqrt_poly_coeffs`].
pub const MIN_EIGEN_GAP: f64 = 1e-6;

/// Lagrange interpolant `g` of the square-root branch on the spectrum of `T`,
/// so that `g(T)` is the primary square root. Needs well separated eigenvalues.
pub fn sqrt_poly_coeffs(t: &CMatrix, tol: f64) -> Result<SqrtPolynomial> {
    check_input(t)?;
    let n = t.nrows();
    if n == 0 {
        return Ok(SqrtPolynomial {
            coeffs: Vec::new(),
            branch_angle: 0.0,
        });
    }
    let eigs = SchurForm::new(t)?.eigenvalues();
    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in 0..i {
            gap = gap.min((eigs[i] - eigs[j]).norm());
        }
    }
    if gap <= MIN_EIGEN_GAP {
        return Err(Error::SpectrumTooClustered { gap });
    }
    let theta = choose_branch(&eigs)?;

    // Newton divided differences, then expand the nested form.
    let mut dd: Vec<Complex64> = eigs.iter().map(|&z| scalar_sqrt(z, theta)).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (eigs[i] - eigs[i - level]);
        }
    }
    let mut coeffs = vec![dd[n - 1]];
    for k in (0..n - 1).rev() {
        // coeffs ← coeffs · (x − λ_k) + dd[k]
        let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
        for (d, &a) in coeffs.iter().enumerate() {
            next[d + 1] += a;
            next[d] -= a * eigs[k];
        }
        next[0] += dd[k];
        coeffs = next;
    }
    let poly = SqrtPolynomial {
        coeffs,
        branch_angle: theta,
    };

    let g = poly.eval_matrix(t);
    let residual = linalg::frobenius(&(&g * &g - t));
    if residual > tol * t.norm().max(1.0) {
        return Err(Error::SqrtInaccurate {
            residual,
            commutation: 0.0,
        });
    }
    Ok(poly)
}
