//! One executable check per frame theorem: erasure, perturbation, images
//! under closed-range operators, boundedness below, dual pairs, tightness
//! via scaled duals, the injectivity criterion, and the decomposition
//! identities. Each check computes the quantities the theorem talks about
//! and verifies the asserted inequality with an explicit slack.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use super::{
    besselet_bound, frame_bounds_with, inner, is_frame_via_injectivity, reconstruct,
    vector_norm, CoordFamily, FrameBounds, FrameError, Tolerances,
};
use crate::linalg::{operator_norm, pseudo_inverse_norm, singular_values, CMatrix};

/// Context echoed into every report.
#[derive(Debug, Clone, Copy)]
pub struct ReportMeta {
    pub p: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundsJson {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

/// The per-check report. `margin` is the distance to the decision boundary
/// of the tightest inequality tested (positive slack when satisfied).
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub p: u64,
    #[serde(rename = "spaceDims")]
    pub space_dims: usize,
    #[serde(rename = "familySize")]
    pub family_size: usize,
    pub bounds: BoundsJson,
    #[serde(rename = "theoremBound")]
    pub theorem_bound: serde_json::Value,
    pub satisfied: bool,
    pub margin: f64,
    pub seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn report(
    meta: ReportMeta,
    check: &str,
    family: &CoordFamily,
    bounds: FrameBounds,
    theorem_bound: serde_json::Value,
    satisfied: bool,
    margin: f64,
) -> CheckReport {
    CheckReport {
        check: check.to_string(),
        p: meta.p,
        space_dims: family.dim(),
        family_size: family.len(),
        bounds: BoundsJson {
            a: bounds.lower,
            b: bounds.upper,
        },
        theorem_bound,
        satisfied,
        margin,
        seed: meta.seed,
    }
}

/// Erasure: removing a sub-family with Bessel bound `C < A` leaves a frame
/// with bounds `(A - C, B)`. When `C >= A` the theorem is vacuous for the
/// instance and only the upper bound is asserted.
pub fn check_erasure(
    meta: ReportMeta,
    family: &CoordFamily,
    removed: &[usize],
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family, false, tol.rank_rel)?;
    let removed_family = family.subset(removed);
    let c = besselet_bound(&removed_family)?;
    let survivors = family.without(removed);
    let survivor_bounds = frame_bounds_with(&survivors, false, tol.rank_rel)?;

    let upper_slack = bounds.upper - survivor_bounds.upper;
    let vacuous = c >= bounds.lower;
    let (satisfied, margin) = if vacuous {
        (upper_slack >= -tol.theorem, upper_slack)
    } else {
        let lower_slack = survivor_bounds.lower - (bounds.lower - c);
        (
            lower_slack >= -tol.theorem && upper_slack >= -tol.theorem,
            lower_slack.min(upper_slack),
        )
    };
    let theorem_bound = json!({
        "besselC": c,
        "vacuous": vacuous,
        "guaranteedLower": if vacuous { serde_json::Value::Null } else { json!(bounds.lower - c) },
        "guaranteedUpper": bounds.upper,
        "survivorBounds": {"A": survivor_bounds.lower, "B": survivor_bounds.upper},
        "removedCount": removed.len(),
    });
    Ok(report(
        meta, "erasure", family, bounds, theorem_bound, satisfied, margin,
    ))
}

/// Perturbation: if the difference family has Bessel bound `C < A`, the
/// perturbed family is a frame with bounds `((sqrt A - sqrt C)^2, (sqrt B + sqrt C)^2)`.
pub fn check_perturbation(
    meta: ReportMeta,
    family_f: &CoordFamily,
    family_g: &CoordFamily,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family_f, false, tol.rank_rel)?;
    let diff = family_f.difference(family_g)?;
    let c = besselet_bound(&diff)?;
    let perturbed_bounds = frame_bounds_with(family_g, false, tol.rank_rel)?;

    let vacuous = c >= bounds.lower;
    let (satisfied, margin, guaranteed) = if vacuous {
        (true, 0.0, serde_json::Value::Null)
    } else {
        let lower = (bounds.lower.sqrt() - c.sqrt()).powi(2);
        let upper = (bounds.upper.sqrt() + c.sqrt()).powi(2);
        let lower_slack = perturbed_bounds.lower - lower;
        let upper_slack = upper - perturbed_bounds.upper;
        (
            lower_slack >= -tol.theorem && upper_slack >= -tol.theorem,
            lower_slack.min(upper_slack),
            json!({"A": lower, "B": upper}),
        )
    };
    let theorem_bound = json!({
        "besselC": c,
        "vacuous": vacuous,
        "guaranteed": guaranteed,
        "perturbedBounds": {"A": perturbed_bounds.lower, "B": perturbed_bounds.upper},
    });
    Ok(report(
        meta,
        "perturb",
        family_f,
        bounds,
        theorem_bound,
        satisfied,
        margin,
    ))
}

/// Closed-range image: `{U f_i}` is a frame sequence with bounds at least
/// `A ||U^+||^(-2)` and at most `B ||U||^2`, measured on its span.
pub fn check_operator_image(
    meta: ReportMeta,
    family: &CoordFamily,
    op: &CMatrix,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family, false, tol.rank_rel)?;
    if bounds.lower <= tol.rank_rel * bounds.upper {
        return Err(FrameError::NotAFrame);
    }
    let image = family.apply(op)?;
    let image_bounds = frame_bounds_with(&image, true, tol.rank_rel)?;
    let norm = operator_norm(op)?;
    let pinv_norm = pseudo_inverse_norm(op)?;
    if norm == 0.0 {
        // Zero operator: empty span, nothing to assert.
        let theorem_bound = json!({"operatorNorm": 0.0, "vacuous": true});
        return Ok(report(
            meta, "image", family, bounds, theorem_bound, true, 0.0,
        ));
    }
    let guaranteed_lower = bounds.lower / (pinv_norm * pinv_norm);
    let guaranteed_upper = bounds.upper * norm * norm;
    let lower_slack = image_bounds.lower - guaranteed_lower;
    let upper_slack = guaranteed_upper - image_bounds.upper;
    let satisfied = lower_slack >= -tol.theorem && upper_slack >= -tol.theorem;
    let theorem_bound = json!({
        "operatorNorm": norm,
        "pseudoInverseNorm": pinv_norm,
        "guaranteed": {"A": guaranteed_lower, "B": guaranteed_upper},
        "imageBounds": {"A": image_bounds.lower, "B": image_bounds.upper},
    });
    Ok(report(
        meta,
        "image",
        family,
        bounds,
        theorem_bound,
        satisfied,
        lower_slack.min(upper_slack),
    ))
}

/// Boundedness below: `{M f_i}` is a frame iff `sigma_min(M^*)^2 > 0`; when
/// it is, its optimal bounds lie within `[A * lambda, B * ||M^*||^2]` for
/// `lambda = sigma_min(M^*)^2`.
pub fn check_bounded_below(
    meta: ReportMeta,
    family: &CoordFamily,
    op: &CMatrix,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family, false, tol.rank_rel)?;
    if bounds.lower <= tol.rank_rel * bounds.upper {
        return Err(FrameError::NotAFrame);
    }
    // M and M^* share singular values.
    let sv = singular_values(op)?;
    let sigma_min = sv.first().copied().unwrap_or(0.0);
    let sigma_max = sv.last().copied().unwrap_or(0.0);
    let lambda_best = sigma_min * sigma_min;
    let predicted_frame = lambda_best > tol.rank_rel * sigma_max * sigma_max;

    let image = family.apply(op)?;
    let actual_frame = is_frame_via_injectivity(&image, tol.rank_rel)?;
    let image_bounds = frame_bounds_with(&image, false, tol.rank_rel)?;

    let mut satisfied = predicted_frame == actual_frame;
    let mut margin = 0.0;
    if satisfied && actual_frame {
        let guaranteed_lower = bounds.lower * lambda_best;
        let guaranteed_upper = bounds.upper * sigma_max * sigma_max;
        let lower_slack = image_bounds.lower - guaranteed_lower;
        let upper_slack = guaranteed_upper - image_bounds.upper;
        satisfied = lower_slack >= -tol.theorem && upper_slack >= -tol.theorem;
        margin = lower_slack.min(upper_slack);
    }
    let theorem_bound = json!({
        "lambdaBest": lambda_best,
        "adjointNormSq": sigma_max * sigma_max,
        "predictedFrame": predicted_frame,
        "actualFrame": actual_frame,
        "imageBounds": {"A": image_bounds.lower, "B": image_bounds.upper},
    });
    Ok(report(
        meta,
        "bounded-below",
        family,
        bounds,
        theorem_bound,
        satisfied,
        margin,
    ))
}

/// Dual-pair equivalence: the three conditions
/// (i)  `f = sum <f, f_i> g_i` (mixed operator identity),
/// (ii) `f = sum <f, g_i> f_i`,
/// (iii) `<f, g> = sum <f, g_i> <f_i, g>` on random pairs,
/// must all agree; when they hold, both families must be frames.
pub fn check_dual_pair<R: Rng>(
    meta: ReportMeta,
    family_f: &CoordFamily,
    family_g: &CoordFamily,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    if family_f.len() != family_g.len() || family_f.dim() != family_g.dim() {
        return Err(FrameError::IndexMismatch(family_f.len(), family_g.len()));
    }
    let n = family_f.dim();
    let identity = CMatrix::identity(n);
    // (i): sum_i g_i f_i^H = G^T conj(F).
    let mixed_i = family_g
        .members()
        .transpose()
        .mul(&family_f.members().conj());
    let dev_i = mixed_i.sub(&identity).max_abs();
    let ok_i = dev_i <= tol.linalg;
    // (ii): sum_i f_i g_i^H = F^T conj(G).
    let mixed_ii = family_f
        .members()
        .transpose()
        .mul(&family_g.members().conj());
    let dev_ii = mixed_ii.sub(&identity).max_abs();
    let ok_ii = dev_ii <= tol.linalg;
    // (iii): sampled sesquilinear identity.
    let mut dev_iii = 0.0f64;
    for _ in 0..20 {
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let g: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let lhs = inner(&f, &g);
        let mut rhs = Complex64::new(0.0, 0.0);
        for i in 0..family_f.len() {
            rhs += inner(&f, family_g.member(i)) * inner(family_f.member(i), &g);
        }
        let scale = (vector_norm(&f) * vector_norm(&g)).max(1.0);
        dev_iii = dev_iii.max((lhs - rhs).norm() / scale);
    }
    let ok_iii = dev_iii <= tol.linalg;

    let agree = ok_i == ok_ii && ok_ii == ok_iii;
    let mut frames_when_dual = serde_json::Value::Null;
    let mut satisfied = agree;
    if agree && ok_i {
        let fb = frame_bounds_with(family_f, false, tol.rank_rel)?;
        let gb = frame_bounds_with(family_g, false, tol.rank_rel)?;
        let both_frames =
            fb.lower > tol.rank_rel * fb.upper && gb.lower > tol.rank_rel * gb.upper;
        frames_when_dual = json!(both_frames);
        satisfied = both_frames;
    }
    let worst = dev_i.max(dev_ii).max(dev_iii);
    let margin = if ok_i {
        tol.linalg - worst
    } else {
        dev_i.min(dev_ii).min(dev_iii) - tol.linalg
    };
    let bounds = frame_bounds_with(family_f, false, tol.rank_rel)?;
    let theorem_bound = json!({
        "i": ok_i,
        "ii": ok_ii,
        "iii": ok_iii,
        "framesWhenDual": frames_when_dual,
        "maxDeviation": worst,
    });
    Ok(report(
        meta,
        "dual-pair",
        family_f,
        bounds,
        theorem_bound,
        satisfied,
        margin,
    ))
}

/// Tightness is equivalent to `{alpha f_i}` being a dual for `alpha = 1/A`.
pub fn check_tight_scaled_dual<R: Rng>(
    meta: ReportMeta,
    family: &CoordFamily,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family, false, tol.rank_rel)?;
    if bounds.lower <= tol.rank_rel * bounds.upper {
        return Err(FrameError::NotAFrame);
    }
    let tight = bounds.upper - bounds.lower <= tol.tight_rel * bounds.upper;
    let alpha = 1.0 / bounds.lower;
    let scaled = family.scale(Complex64::new(alpha, 0.0));
    let dual_report = check_dual_pair(meta, family, &scaled, rng, tol)?;
    let scaled_is_dual = dual_report.theorem_bound["i"] == json!(true)
        && dual_report.theorem_bound["ii"] == json!(true)
        && dual_report.theorem_bound["iii"] == json!(true);
    let satisfied = tight == scaled_is_dual;
    let margin = (bounds.upper - bounds.lower - tol.tight_rel * bounds.upper).abs();
    let theorem_bound = json!({
        "tight": tight,
        "alpha": alpha,
        "scaledDualIsDual": scaled_is_dual,
    });
    Ok(report(
        meta,
        "tight-dual",
        family,
        bounds,
        theorem_bound,
        satisfied,
        margin,
    ))
}

/// The injectivity criterion: full rank of the frame operator must agree
/// with a positive optimal lower bound.
pub fn check_injectivity(
    meta: ReportMeta,
    family: &CoordFamily,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family, false, tol.rank_rel)?;
    let via_injectivity = is_frame_via_injectivity(family, tol.rank_rel)?;
    let via_lower_bound = bounds.lower > tol.rank_rel * bounds.upper;
    let satisfied = via_injectivity == via_lower_bound;
    let margin = (bounds.lower - tol.rank_rel * bounds.upper).abs();
    let theorem_bound = json!({
        "viaInjectivity": via_injectivity,
        "viaLowerBound": via_lower_bound,
    });
    Ok(report(
        meta,
        "injectivity",
        family,
        bounds,
        theorem_bound,
        satisfied,
        margin,
    ))
}

/// Both decomposition formulas must reproduce random vectors.
#[allow(clippy::needless_range_loop)]
pub fn check_decomposition<R: Rng>(
    meta: ReportMeta,
    family: &CoordFamily,
    rng: &mut R,
    vectors: usize,
    tol: &Tolerances,
) -> Result<CheckReport, FrameError> {
    let bounds = frame_bounds_with(family, false, tol.rank_rel)?;
    let n = family.dim();
    let mut max_residual = 0.0f64;
    for _ in 0..vectors {
        let g: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let rec = reconstruct(family, &g, tol.rank_rel)?;
        let scale = vector_norm(&g).max(1e-300);
        for out in [&rec.via_dual_coefficients, &rec.via_frame_coefficients] {
            let diff: Vec<Complex64> = out.iter().zip(&g).map(|(a, b)| a - b).collect();
            max_residual = max_residual.max(vector_norm(&diff) / scale);
        }
    }
    let satisfied = max_residual <= tol.theorem;
    let theorem_bound = json!({
        "maxResidual": max_residual,
        "vectors": vectors,
    });
    Ok(report(
        meta,
        "decomposition",
        family,
        bounds,
        theorem_bound,
        satisfied,
        tol.theorem - max_residual,
    ))
}
