//! Twisted cohomology with su(2) adjoint coefficients, computed from
//! group presentations via Fox calculus, plus the Mayer–Vietoris
//! bookkeeping used to cross-check dimensions across a splice.
//!
//! H¹ of a presentation 2-complex equals H¹ of the group, which is all
//! that is needed for the aspherical spaces in play (knot exteriors, the
//! torus, and their splices).

use crate::presentation::{GluingMatrix, Presentation, Word};
use crate::su2::{adjoint_matrix, stabilizer_type, GroupElement};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Relative singular-value threshold for numerical rank.
pub const RANK_REL_TOL: f64 = 1e-7;

/// Numerical rank data of one matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankInfo {
    pub rank: usize,
    pub threshold: f64,
    /// Smallest singular value counted into the rank (∞ when rank 0).
    pub min_kept: f64,
    /// Largest singular value below the threshold (0 when none dropped).
    pub max_dropped: f64,
    /// Set when some singular value falls within a factor 10 of the
    /// threshold; such a rank needs a higher-precision re-run.
    pub flagged: bool,
}

impl RankInfo {
    /// Ratio between the kept and dropped singular values across the
    /// threshold (∞ for clean full/zero rank).
    pub fn gap(&self) -> f64 {
        if self.max_dropped == 0.0 {
            f64::INFINITY
        } else {
            self.min_kept / self.max_dropped
        }
    }
}

/// Rank and kernel basis of a real matrix by SVD with a relative
/// threshold. The matrix is padded with zero rows so the full set of
/// right singular vectors is available for the kernel.
pub fn numerical_rank_and_kernel(mat: &DMatrix<f64>) -> (RankInfo, Vec<DVector<f64>>) {
    let (m, n) = (mat.nrows(), mat.ncols());
    let padded = if m >= n {
        mat.clone()
    } else {
        let mut p = DMatrix::<f64>::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(mat);
        p
    };
    let svd = padded.svd(false, true);
    let sv = &svd.singular_values;
    let sigma_max = sv.iter().cloned().fold(0.0f64, f64::max);
    if sigma_max == 0.0 {
        let kernel = (0..n)
            .map(|i| DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 }))
            .collect();
        return (
            RankInfo { rank: 0, threshold: 0.0, min_kept: f64::INFINITY, max_dropped: 0.0, flagged: false },
            kernel,
        );
    }
    let tau = RANK_REL_TOL * sigma_max;
    let rank = sv.iter().filter(|&&s| s > tau).count();
    let min_kept = sv.iter().cloned().filter(|&s| s > tau).fold(f64::INFINITY, f64::min);
    let max_dropped = sv.iter().cloned().filter(|&s| s <= tau).fold(0.0f64, f64::max);
    let flagged = sv.iter().any(|&s| s > tau / 10.0 && s < tau * 10.0);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let kernel = (rank..n).map(|i| v_t.row(i).transpose()).collect();
    (RankInfo { rank, threshold: tau, min_kept, max_dropped, flagged }, kernel)
}

/// Dimensions of the twisted cohomology of one piece at one
/// representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub label: String,
    pub h0: usize,
    pub h1: usize,
    /// Dimension of the cocycle space Z¹ = ker of the Fox Jacobian.
    pub z1: usize,
    pub rank_jacobian: usize,
    pub rank_info: RankInfo,
}

impl CohomologyReport {
    pub fn flagged(&self) -> bool {
        self.rank_info.flagged
    }
}

/// dim H⁰ = dimension of the Lie algebra of the stabilizer: 3 for a
/// central representation, 1 for abelian non-central, 0 for irreducible.
pub fn h0_dim(rep: &[GroupElement]) -> Result<usize> {
    Ok(stabilizer_type(rep)?.lie_dim())
}

/// dim H¹ from the Fox Jacobian: h1 = z1 − dim B¹ = (3g − rank J) − (3 − h0).
pub fn h1_dim(pres: &Presentation, rep: &[GroupElement]) -> Result<CohomologyReport> {
    let jac = pres.fox_jacobian(rep)?;
    let (info, _) = numerical_rank_and_kernel(&jac);
    let h0 = h0_dim(rep)?;
    let z1 = 3 * pres.num_generators - info.rank;
    let h1 = z1 - (3 - h0);
    Ok(CohomologyReport {
        label: pres.label.clone(),
        h0,
        h1,
        z1,
        rank_jacobian: info.rank,
        rank_info: info,
    })
}

/// Kernel of the Fox Jacobian as per-generator cocycle values.
pub fn cocycle_basis(pres: &Presentation, rep: &[GroupElement]) -> Result<Vec<Vec<Vector3<f64>>>> {
    let jac = pres.fox_jacobian(rep)?;
    let (_, kernel) = numerical_rank_and_kernel(&jac);
    Ok(kernel
        .into_iter()
        .map(|v| {
            (0..pres.num_generators)
                .map(|g| Vector3::new(v[3 * g], v[3 * g + 1], v[3 * g + 2]))
                .collect()
        })
        .collect())
}

/// Value of a cocycle on a word: ξ(uv) = ξ(u) + Ad(ρ(u))·ξ(v) and
/// ξ(g⁻¹) = −Ad(ρ(g⁻¹))·ξ(g).
pub fn cocycle_on_word(
    word: &Word,
    rep: &[GroupElement],
    values: &[Vector3<f64>],
) -> Vector3<f64> {
    let mut acc = Vector3::zeros();
    let mut prefix = Matrix3::<f64>::identity();
    for &(g, e) in word.letters() {
        let ad = Matrix3::from_fn(|i, j| adjoint_matrix(&rep[g])[i][j]);
        if e >= 0 {
            for _ in 0..e {
                acc += prefix * values[g];
                prefix *= ad;
            }
        } else {
            let ad_inv = ad.transpose();
            for _ in 0..(-e) {
                prefix *= ad_inv;
                acc -= prefix * values[g];
            }
        }
    }
    acc
}

/// Mayer–Vietoris count: dim ker of the difference map
/// H¹(X) ⊕ H¹(Y) → H¹(∂X), namely hx.h1 + hy.h1 − rank.
pub fn mv_h1(hx: &CohomologyReport, hy: &CohomologyReport, rank_difference_map: usize) -> Result<usize> {
    if rank_difference_map > hx.h1 + hy.h1 {
        return Err(Error::InvalidInput(format!(
            "difference-map rank {rank_difference_map} exceeds h1 sum {}",
            hx.h1 + hy.h1
        )));
    }
    Ok(hx.h1 + hy.h1 - rank_difference_map)
}

/// The two boundary words of the right side carried through the gluing:
/// μ_Y^a λ_Y^b and μ_Y^c λ_Y^d.
fn glued_boundary_words(pres_y: &Presentation, h: &GluingMatrix) -> Result<(Word, Word)> {
    let per = pres_y
        .peripheral
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} has no peripheral data", pres_y.label)))?;
    let wa = per.meridian.pow(h.a).mul(&per.longitude.pow(h.b));
    let wb = per.meridian.pow(h.c).mul(&per.longitude.pow(h.d));
    Ok((wa, wb))
}

/// Rank of the difference map H¹(X) ⊕ H¹(Y) → H¹(∂X), computed from
/// cocycle bases restricted to the glued peripheral words and reduced
/// modulo the boundary coboundaries B¹(∂X).
pub fn rank_difference_map(
    pres_x: &Presentation,
    rep_x: &[GroupElement],
    pres_y: &Presentation,
    rep_y: &[GroupElement],
    h: &GluingMatrix,
) -> Result<usize> {
    let per_x = pres_x
        .peripheral
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} has no peripheral data", pres_x.label)))?;
    let (wa, wb) = glued_boundary_words(pres_y, h)?;
    // Precondition: the two sides agree on the glued peripheral torus.
    let mu_x = per_x.meridian.evaluate(rep_x)?;
    let la_x = per_x.longitude.evaluate(rep_x)?;
    let mu_glued = wa.evaluate(rep_y)?;
    let la_glued = wb.evaluate(rep_y)?;
    let dev = mu_x.dist(&mu_glued).max(la_x.dist(&la_glued));
    if dev > 1e-8 {
        return Err(Error::Precondition(format!(
            "peripheral mismatch across the gluing: deviation {dev:.3e}"
        )));
    }

    let zx = cocycle_basis(pres_x, rep_x)?;
    let zy = cocycle_basis(pres_y, rep_y)?;
    let ncols = zx.len() + zy.len();
    let mut diff = DMatrix::<f64>::zeros(6, ncols);
    for (j, xi) in zx.iter().enumerate() {
        let top = cocycle_on_word(&per_x.meridian, rep_x, xi);
        let bot = cocycle_on_word(&per_x.longitude, rep_x, xi);
        for i in 0..3 {
            diff[(i, j)] = top[i];
            diff[(3 + i, j)] = bot[i];
        }
    }
    for (j, eta) in zy.iter().enumerate() {
        let top = cocycle_on_word(&wa, rep_y, eta);
        let bot = cocycle_on_word(&wb, rep_y, eta);
        for i in 0..3 {
            diff[(i, zx.len() + j)] = -top[i];
            diff[(3 + i, zx.len() + j)] = -bot[i];
        }
    }
    // B¹(∂X): coboundaries v ↦ (v − Ad(ρ(μ))v, v − Ad(ρ(λ))v).
    let b = boundary_coboundaries(&mu_x, &la_x);
    let (rank_b, _) = numerical_rank_and_kernel(&b);
    let mut stacked = DMatrix::<f64>::zeros(6, ncols + 3);
    stacked.view_mut((0, 0), (6, ncols)).copy_from(&diff);
    stacked.view_mut((0, ncols), (6, 3)).copy_from(&b);
    let (rank_all, _) = numerical_rank_and_kernel(&stacked);
    Ok(rank_all.rank - rank_b.rank)
}

fn boundary_coboundaries(mu: &GroupElement, la: &GroupElement) -> DMatrix<f64> {
    let ad_mu = adjoint_matrix(mu);
    let ad_la = adjoint_matrix(la);
    DMatrix::<f64>::from_fn(6, 3, |i, j| {
        if i < 3 {
            f64::from(i == j) - ad_mu[i][j]
        } else {
            f64::from(i - 3 == j) - ad_la[i - 3][j]
        }
    })
}

/// Dimension of the cokernel of H⁰(X) ⊕ H⁰(Y) → H⁰(∂X): the bending
/// directions. In the Mayer–Vietoris sequence this cokernel injects into
/// H¹ of the splice, so
/// dim H¹(Σ) = mv_h1 + bending.
///
/// Invariant vectors of each side are invariant under the boundary, so
/// the cokernel is h⁰(∂) minus the dimension of the span of the two
/// sides' invariant subspaces.
pub fn bending_dim(
    pres_x: &Presentation,
    rep_x: &[GroupElement],
    pres_y: &Presentation,
    rep_y: &[GroupElement],
    h: &GluingMatrix,
) -> Result<usize> {
    let per_x = pres_x
        .peripheral
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} has no peripheral data", pres_x.label)))?;
    let _ = glued_boundary_words(pres_y, h)?;
    let mu = per_x.meridian.evaluate(rep_x)?;
    let la = per_x.longitude.evaluate(rep_x)?;
    let h0_boundary = 3 - numerical_rank_and_kernel(&boundary_coboundaries(&mu, &la)).0.rank;
    let invariants = |rep: &[GroupElement]| -> Vec<DVector<f64>> {
        let mut m = DMatrix::<f64>::zeros(3 * rep.len(), 3);
        for (g, el) in rep.iter().enumerate() {
            let ad = adjoint_matrix(el);
            for i in 0..3 {
                for j in 0..3 {
                    m[(3 * g + i, j)] = f64::from(i == j) - ad[i][j];
                }
            }
        }
        numerical_rank_and_kernel(&m).1
    };
    let ix = invariants(rep_x);
    let iy = invariants(rep_y);
    if ix.is_empty() && iy.is_empty() {
        return Ok(h0_boundary);
    }
    let mut span = DMatrix::<f64>::zeros(3, ix.len() + iy.len());
    for (j, v) in ix.iter().chain(iy.iter()).enumerate() {
        for i in 0..3 {
            span[(i, j)] = v[i];
        }
    }
    let joint = numerical_rank_and_kernel(&span).0.rank;
    Ok(h0_boundary - joint)
}
