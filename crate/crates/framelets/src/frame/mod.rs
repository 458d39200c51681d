//! Frame-theoretic computations on finite-dimensional test spaces: the
//! analysis/synthesis coefficients of a family, the frame operator and its
//! optimal bounds via Hermitian eigenvalues, canonical duals, and
//! reconstruction.
//!
//! A [`TestSpace`] is the span of normalized ball indicators: functions
//! supported on `p^(-J) Z_p` and constant on cosets of `p^K Z_p`. Family
//! members that lie in the space exactly are expressed in that orthonormal
//! basis, after which everything reduces to dense complex linear algebra.

pub mod battery;
mod checks;

pub use checks::*;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::funcspace::{FuncError, LCFunction};
use crate::linalg::{
    hermitian_eigensystem, CMatrix, Eigensystem, LinalgError, RANK_THRESHOLD_FACTOR,
};
use crate::padic::{Ball, BallRelation, PAdicRational, Prime};
use crate::wavelets::FrameFamily;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum FrameError {
    #[error("family members outside the test space at indices {0:?}")]
    FamilyNotInSpace(Vec<usize>),
    #[error("family is not a frame for the space (lower bound below threshold)")]
    NotAFrame,
    #[error("families have different sizes: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("operator is {0}x{1} but the space has dimension {2}")]
    OperatorShape(usize, usize, usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// Numerical tolerances, all overridable from the CLI. The defaults are the
/// module-level contracts used throughout the tests.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Closed form vs quadrature agreement (absolute).
    pub oracle: f64,
    /// Matrix identities such as mixed-operator = identity (absolute).
    pub linalg: f64,
    /// Slack added to every theorem inequality (absolute).
    pub theorem: f64,
    /// Relative rank threshold for eigen/singular value cutoffs.
    pub rank_rel: f64,
    /// Relative tightness test `B - A <= tight_rel * B`.
    pub tight_rel: f64,
    /// Relative tolerance for dual-bound reciprocity.
    pub dual_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            oracle: 1e-12,
            linalg: 1e-9,
            theorem: 1e-8,
            rank_rel: RANK_THRESHOLD_FACTOR,
            tight_rel: 1e-9,
            dual_rel: 1e-8,
        }
    }
}

/// Whether out-of-space family members are an error or get projected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContainmentMode {
    /// Out-of-space members abort with [`FrameError::FamilyNotInSpace`].
    Strict,
    /// Members are replaced by their orthogonal projections onto the space;
    /// every downstream statement then refers to the projected family.
    Project,
}

/// The span of the normalized indicators `p^(K/2) 1_{c + p^K Z_p}` over the
/// cosets of `p^K Z_p` inside `p^(-J) Z_p`; dimension `p^(J+K)`.
#[derive(Debug, Clone)]
pub struct TestSpace {
    prime: Prime,
    support_log: u32,
    resolution_log: u32,
    outer: Ball,
    basis: Vec<LCFunction>,
}

impl TestSpace {
    pub fn new(prime: Prime, support_log: u32, resolution_log: u32) -> Self {
        let outer = Ball::new(PAdicRational::zero(prime), support_log as i64);
        let mut cells = std::collections::BTreeSet::new();
        collect_cells(&outer, -(resolution_log as i64), &mut cells);
        let gain = prime.pow_f64(resolution_log as i64).sqrt();
        let basis = cells
            .into_iter()
            .map(|cell| LCFunction::indicator(cell).scale(Complex64::new(gain, 0.0)))
            .collect();
        TestSpace {
            prime,
            support_log,
            resolution_log,
            outer,
            basis,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// J: functions are supported on the ball of radius `p^J` around 0.
    pub fn support_log(&self) -> u32 {
        self.support_log
    }

    /// K: functions are constant on balls of radius `p^(-K)`.
    pub fn resolution_log(&self) -> u32 {
        self.resolution_log
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LCFunction] {
        &self.basis
    }

    pub fn outer(&self) -> &Ball {
        &self.outer
    }

    fn constancy_scale(&self) -> i64 {
        -(self.resolution_log as i64)
    }

    /// Membership is decided geometrically: every atom's support must sit
    /// inside the outer ball and the atom must be constant at the cell scale.
    pub fn contains(&self, f: &LCFunction) -> bool {
        f.atoms().iter().all(|atom| {
            let inside = matches!(
                atom.support().relation(&self.outer),
                BallRelation::Equal | BallRelation::FirstInsideSecond
            );
            inside && atom.constancy_scale() >= self.constancy_scale()
        })
    }

    /// Indices of family members that do not lie in the space.
    pub fn membership_violations(&self, family: &FrameFamily) -> Vec<usize> {
        family
            .functions()
            .enumerate()
            .filter(|(_, f)| !self.contains(f))
            .map(|(i, _)| i)
            .collect()
    }

    /// Orthogonal projection onto the space (exact for character atoms).
    pub fn project(&self, f: &LCFunction) -> LCFunction {
        f.project(&self.outer, self.constancy_scale())
    }

    /// Coordinates of a function in the indicator basis.
    pub fn coordinates(&self, f: &LCFunction) -> Vec<Complex64> {
        self.basis.iter().map(|e| f.inner_product(e)).collect()
    }
}

fn collect_cells(ball: &Ball, cell_log: i64, cells: &mut std::collections::BTreeSet<Ball>) {
    if ball.radius_log() <= cell_log {
        cells.insert(ball.clone());
        return;
    }
    for child in ball.split() {
        collect_cells(&child, cell_log, cells);
    }
}

/// The coefficient matrix `G[i][c] = <f_i, e_c>` of a family against the
/// space's orthonormal basis. The analysis operator acts on coordinate
/// vectors as `v -> conj(G) v`.
pub fn coefficients(
    family: &FrameFamily,
    space: &TestSpace,
    mode: ContainmentMode,
) -> Result<CMatrix, FrameError> {
    if mode == ContainmentMode::Strict {
        let violations = space.membership_violations(family);
        if !violations.is_empty() {
            return Err(FrameError::FamilyNotInSpace(violations));
        }
    }
    let rows = family
        .functions()
        .map(|f| space.coordinates(f))
        .collect::<Vec<_>>();
    if rows.is_empty() {
        return Ok(CMatrix::zeros(0, space.dim()));
    }
    Ok(CMatrix::from_rows(rows))
}

/// A Hermitian matrix, verified at construction (entrywise deviation from
/// the adjoint at most 1e-10) and stored symmetrized.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    matrix: CMatrix,
}

/// Construction tolerance for [`HermitianMatrix`].
pub const HERMITIAN_DEFECT_TOL: f64 = 1e-10;

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self, FrameError> {
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_DEFECT_TOL {
            return Err(FrameError::Linalg(LinalgError::NotHermitian(defect)));
        }
        let sym = m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0));
        Ok(HermitianMatrix { matrix: sym })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eigensystem(&self) -> Result<Eigensystem, FrameError> {
        Ok(hermitian_eigensystem(&self.matrix)?)
    }
}

/// Frame bounds: `A ||g||^2 <= sum |<g, f_i>|^2 <= B ||g||^2`, on the whole
/// space or (with `on_span_only`) on the family's span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    #[serde(rename = "A")]
    pub lower: f64,
    #[serde(rename = "B")]
    pub upper: f64,
    #[serde(rename = "onSpanOnly")]
    pub on_span_only: bool,
}

/// A family expressed as coordinate rows in a space's orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordFamily {
    members: CMatrix,
}

impl CoordFamily {
    pub fn new(members: CMatrix) -> Self {
        CoordFamily { members }
    }

    /// Expresses a wavelet family in the space's basis; the flag reports
    /// whether any member needed projection.
    pub fn from_family(
        family: &FrameFamily,
        space: &TestSpace,
        mode: ContainmentMode,
    ) -> Result<(Self, bool), FrameError> {
        let violations = space.membership_violations(family);
        let matrix = coefficients(family, space, mode)?;
        Ok((CoordFamily::new(matrix), !violations.is_empty()))
    }

    pub fn members(&self) -> &CMatrix {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.members.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.members.cols()
    }

    pub fn member(&self, i: usize) -> &[Complex64] {
        self.members.row(i)
    }

    /// The frame operator `S = sum_i <., f_i> f_i` in basis coordinates.
    /// With the analysis matrix `A = conj(G)` this is `A^H A`: Hermitian
    /// positive semidefinite by construction.
    pub fn frame_operator(&self) -> Result<HermitianMatrix, FrameError> {
        let analysis = self.members.conj();
        HermitianMatrix::new(analysis.adjoint().mul(&analysis))
    }

    /// Gram matrix `<f_i, f_j>` of the members.
    pub fn gram(&self) -> CMatrix {
        self.members.mul(&self.members.adjoint())
    }

    /// The energy `sum_i |<g, f_i>|^2`, summed directly member by member.
    pub fn direct_energy(&self, g: &[Complex64]) -> f64 {
        (0..self.len())
            .map(|i| inner(g, self.member(i)).norm_sqr())
            .sum()
    }

    pub fn subset(&self, indices: &[usize]) -> CoordFamily {
        let rows = indices
            .iter()
            .map(|&i| self.member(i).to_vec())
            .collect::<Vec<_>>();
        CoordFamily::new(if rows.is_empty() {
            CMatrix::zeros(0, self.dim())
        } else {
            CMatrix::from_rows(rows)
        })
    }

    pub fn without(&self, removed: &[usize]) -> CoordFamily {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !removed.contains(i)).collect();
        self.subset(&keep)
    }

    pub fn scale(&self, factor: Complex64) -> CoordFamily {
        CoordFamily::new(self.members.scale(factor))
    }

    /// Applies an operator to every member: `{U f_i}`.
    pub fn apply(&self, op: &CMatrix) -> Result<CoordFamily, FrameError> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(FrameError::OperatorShape(op.rows(), op.cols(), self.dim()));
        }
        Ok(CoordFamily::new(self.members.mul(&op.transpose())))
    }

    /// Member-wise difference `{f_i - g_i}`.
    pub fn difference(&self, other: &CoordFamily) -> Result<CoordFamily, FrameError> {
        if self.len() != other.len() || self.dim() != other.dim() {
            return Err(FrameError::IndexMismatch(self.len(), other.len()));
        }
        Ok(CoordFamily::new(self.members.sub(&other.members)))
    }

    /// Appends extra members.
    pub fn extend(&self, extra: &CoordFamily) -> CoordFamily {
        let mut rows: Vec<Vec<Complex64>> =
            (0..self.len()).map(|i| self.member(i).to_vec()).collect();
        rows.extend((0..extra.len()).map(|i| extra.member(i).to_vec()));
        CoordFamily::new(CMatrix::from_rows(rows))
    }

    /// Re-expresses the members in an orthonormal basis of their own span
    /// (the eigenvectors of the frame operator above the rank threshold).
    /// Inner products between members are preserved exactly, so frame-
    /// sequence statements become whole-space statements in the smaller
    /// dimension.
    pub fn restrict_to_span(&self, rank_rel: f64) -> Result<CoordFamily, FrameError> {
        let eig = self.frame_operator()?.eigensystem()?;
        let lambda_max = eig.values.last().copied().unwrap_or(0.0);
        let cutoff = rank_rel * lambda_max;
        let kept: Vec<usize> = (0..eig.values.len())
            .filter(|&i| eig.values[i] > cutoff)
            .collect();
        let mut span_basis = CMatrix::zeros(self.dim(), kept.len());
        for (new_col, &old_col) in kept.iter().enumerate() {
            for row in 0..self.dim() {
                span_basis.set(row, new_col, eig.vectors.get(row, old_col));
            }
        }
        Ok(CoordFamily::new(self.members.mul(&span_basis.conj())))
    }
}

/// `<u, v> = sum u_c conj(v_c)` on coordinate vectors.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Optimal frame bounds from the frame-operator spectrum. `B` is always the
/// top eigenvalue; `A` is the bottom eigenvalue, or with `span_only` the
/// smallest eigenvalue whose eigenvector lies in the family's span (above
/// the rank threshold).
pub fn frame_bounds_with(
    family: &CoordFamily,
    span_only: bool,
    rank_rel: f64,
) -> Result<FrameBounds, FrameError> {
    let eig = family.frame_operator()?.eigensystem()?;
    Ok(bounds_from_values(&eig.values, span_only, rank_rel))
}

pub fn frame_bounds(family: &CoordFamily, span_only: bool) -> Result<FrameBounds, FrameError> {
    frame_bounds_with(family, span_only, RANK_THRESHOLD_FACTOR)
}

fn bounds_from_values(values: &[f64], span_only: bool, rank_rel: f64) -> FrameBounds {
    let upper = values.last().copied().unwrap_or(0.0).max(0.0);
    let lower = if span_only {
        let cutoff = rank_rel * upper;
        values
            .iter()
            .copied()
            .find(|v| *v > cutoff)
            .unwrap_or(0.0)
            .max(0.0)
    } else {
        values.first().copied().unwrap_or(0.0).max(0.0)
    };
    FrameBounds {
        lower,
        upper,
        on_span_only: span_only,
    }
}

/// The optimal Bessel bound: the top frame-operator eigenvalue. Valid on the
/// whole space even when the family spans a proper subspace.
pub fn besselet_bound(family: &CoordFamily) -> Result<f64, FrameError> {
    if family.is_empty() {
        return Ok(0.0);
    }
    let eig = family.frame_operator()?.eigensystem()?;
    Ok(eig.values.last().copied().unwrap_or(0.0).max(0.0))
}

/// Frame test via injectivity of the analysis operator: the family is a
/// frame for the whole space iff the frame operator has full rank.
pub fn is_frame_via_injectivity(family: &CoordFamily, rank_rel: f64) -> Result<bool, FrameError> {
    let eig = family.frame_operator()?.eigensystem()?;
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 {
        return Ok(family.dim() == 0);
    }
    let cutoff = rank_rel * lambda_max;
    let rank = eig.values.iter().filter(|&&v| v > cutoff).count();
    Ok(rank == family.dim())
}

/// The canonical dual `{S^(-1) f_i}` in coordinates. Its optimal bounds are
/// the reciprocals of the original's and its frame operator is `S^(-1)`.
pub fn canonical_dual(family: &CoordFamily, rank_rel: f64) -> Result<CoordFamily, FrameError> {
    let inverse = frame_operator_inverse(family, rank_rel)?;
    Ok(CoordFamily::new(
        family.members().mul(&inverse.transpose()),
    ))
}

/// `S^(-1)` via the eigendecomposition; [`FrameError::NotAFrame`] when the
/// bottom eigenvalue sits at or below the rank threshold.
pub fn frame_operator_inverse(
    family: &CoordFamily,
    rank_rel: f64,
) -> Result<CMatrix, FrameError> {
    let eig = family.frame_operator()?.eigensystem()?;
    let lambda_max = eig.values.last().copied().unwrap_or(0.0);
    let lambda_min = eig.values.first().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 || lambda_min <= rank_rel * lambda_max {
        return Err(FrameError::NotAFrame);
    }
    Ok(eig.map_to_matrix(|l| 1.0 / l))
}

/// Both canonical reconstruction formulas, computed through the two distinct
/// expansions rather than through `g` itself.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `sum_i <g, S^(-1) f_i> f_i`
    pub via_dual_coefficients: Vec<Complex64>,
    /// `sum_i <g, f_i> S^(-1) f_i`
    pub via_frame_coefficients: Vec<Complex64>,
}

pub fn reconstruct(
    family: &CoordFamily,
    g: &[Complex64],
    rank_rel: f64,
) -> Result<Reconstruction, FrameError> {
    assert_eq!(g.len(), family.dim());
    let dual = canonical_dual(family, rank_rel)?;
    let n = family.dim();
    let mut via_dual = vec![Complex64::new(0.0, 0.0); n];
    let mut via_frame = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..family.len() {
        let f_i = family.member(i);
        let d_i = dual.member(i);
        let dual_coeff = inner(g, d_i);
        let frame_coeff = inner(g, f_i);
        for c in 0..n {
            via_dual[c] += dual_coeff * f_i[c];
            via_frame[c] += frame_coeff * d_i[c];
        }
    }
    Ok(Reconstruction {
        via_dual_coefficients: via_dual,
        via_frame_coefficients: via_frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelets::{GeneratorSet, IndexSet};
    use num_bigint::BigInt;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn q(prime: u64, m: i64, e: i64) -> PAdicRational {
        PAdicRational::new(p(prime), BigInt::from(m), e)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn family_rows(rows: Vec<Vec<Complex64>>) -> CoordFamily {
        CoordFamily::new(CMatrix::from_rows(rows))
    }

    fn basis_family(dim: usize) -> CoordFamily {
        CoordFamily::new(CMatrix::identity(dim))
    }

    #[test]
    fn test_space_dimension_and_orthonormality() {
        let space = TestSpace::new(p(2), 1, 1);
        assert_eq!(space.dim(), 4);
        let space = TestSpace::new(p(3), 1, 2);
        assert_eq!(space.dim(), 27);
        // Basis Gram = identity (disjoint supports, normalized measures).
        let space = TestSpace::new(p(2), 1, 2);
        for (i, e_i) in space.basis().iter().enumerate() {
            for (j, e_j) in space.basis().iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = e_i.inner_product(e_j);
                assert!((got - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coefficients_of_basis_is_identity() {
        let space = TestSpace::new(p(2), 0, 1);
        let generators = GeneratorSet::custom(p(2), space.basis().to_vec());
        let idx = IndexSet::full(generators.len(), 0, 0, 0);
        let family = FrameFamily::build(&generators, &idx).unwrap();
        let g = coefficients(&family, &space, ContainmentMode::Strict).unwrap();
        let defect = g.sub(&CMatrix::identity(space.dim())).max_abs();
        assert!(defect < 1e-12);
    }

    #[test]
    fn kozyrev_coefficient_row() {
        // theta_1 against the basis of V(0,1) over p = 2.
        let space = TestSpace::new(p(2), 0, 1);
        let generators = GeneratorSet::kozyrev(p(2));
        let idx = IndexSet::full(generators.len(), 0, 0, 0);
        let family = FrameFamily::build(&generators, &idx).unwrap();
        let g = coefficients(&family, &space, ContainmentMode::Strict).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((g.get(0, 0) - c(r, 0.0)).norm() < 1e-12);
        assert!((g.get(0, 1) - c(-r, 0.0)).norm() < 1e-12);
        // Cross-check against the quadrature oracle.
        let theta = &family.entries()[0].function;
        for (col, e) in space.basis().iter().enumerate() {
            let depth = theta
                .required_quadrature_depth()
                .max(e.required_quadrature_depth());
            let oracle = theta.quadrature_inner_product(e, depth).unwrap();
            assert!((g.get(0, col) - oracle).norm() < 1e-12);
        }
        // Row norms equal member norms.
        let row_norm: f64 = g.row(0).iter().map(|z| z.norm_sqr()).sum();
        assert!((row_norm - theta.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn strict_mode_reports_offenders() {
        let space = TestSpace::new(p(2), 0, 1);
        let generators = GeneratorSet::kozyrev(p(2));
        // j = -1 members reach outside Z_p.
        let idx = IndexSet::full(generators.len(), -1, 0, 1);
        let family = FrameFamily::build(&generators, &idx).unwrap();
        match coefficients(&family, &space, ContainmentMode::Strict) {
            Err(FrameError::FamilyNotInSpace(bad)) => assert!(!bad.is_empty()),
            other => panic!("expected FamilyNotInSpace, got {other:?}"),
        }
        // Projection mode proceeds.
        let g = coefficients(&family, &space, ContainmentMode::Project).unwrap();
        assert_eq!(g.rows(), family.len());
    }

    #[test]
    fn projected_coefficients_match_projected_functions() {
        let space = TestSpace::new(p(2), 0, 2);
        let generators = GeneratorSet::kozyrev(p(2));
        let idx = IndexSet::full(generators.len(), -1, 1, 1);
        let family = FrameFamily::build(&generators, &idx).unwrap();
        let g = coefficients(&family, &space, ContainmentMode::Project).unwrap();
        for (i, f) in family.functions().enumerate() {
            let projected = space.project(f);
            let coords = space.coordinates(&projected);
            for (col, expect) in coords.iter().enumerate() {
                assert!((g.get(i, col) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn frame_operator_examples() {
        // Orthonormal family spanning the space: S = I.
        let fam = basis_family(3);
        let s = fam.frame_operator().unwrap();
        assert!(s.matrix().sub(&CMatrix::identity(3)).max_abs() < 1e-14);
        // Doubling the family doubles S.
        let doubled = fam.extend(&fam);
        let s2 = doubled.frame_operator().unwrap();
        assert!(
            s2.matrix()
                .sub(&CMatrix::identity(3).scale(c(2.0, 0.0)))
                .max_abs()
                < 1e-14
        );
    }

    #[test]
    fn frame_operator_matches_direct_energy() {
        let fam = family_rows(vec![
            vec![c(0.3, 0.1), c(-0.2, 0.4)],
            vec![c(1.1, -0.3), c(0.0, 0.9)],
            vec![c(-0.5, 0.2), c(0.7, 0.0)],
        ]);
        let s = fam.frame_operator().unwrap();
        let mut state = 1u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for _ in 0..20 {
            let g = vec![c(next(), next()), c(next(), next())];
            let sv = s.matrix().mul_vec(&g);
            let quadratic = inner(&sv, &g).re;
            let direct = fam.direct_energy(&g);
            assert!((quadratic - direct).abs() < 1e-9 * (1.0 + direct));
        }
    }

    #[test]
    fn bounds_examples() {
        // basis + basis: A = B = 2.
        let fam = basis_family(2).extend(&basis_family(2));
        let b = frame_bounds(&fam, false).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
        // {e1, e1, e2}: A = 1, B = 2.
        let fam = family_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let b = frame_bounds(&fam, false).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
        // {e1} in a 2-dim space: Bessel bound 1, not a frame, span bound 1.
        let fam = family_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!((besselet_bound(&fam).unwrap() - 1.0).abs() < 1e-12);
        let whole = frame_bounds(&fam, false).unwrap();
        assert!(whole.lower.abs() < 1e-12);
        let span = frame_bounds(&fam, true).unwrap();
        assert!((span.lower - 1.0).abs() < 1e-12);
        // Bessel inequality holds for vectors outside the span.
        let g = vec![c(0.3, 0.0), c(0.8, -0.1)];
        let energy = fam.direct_energy(&g);
        let norm_sq = g.iter().map(|z| z.norm_sqr()).sum::<f64>();
        assert!(energy <= besselet_bound(&fam).unwrap() * norm_sq + 1e-12);
        // Scaling the family scales the Bessel bound quadratically.
        let scaled = fam.scale(c(3.0, 0.0));
        assert!((besselet_bound(&scaled).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn injectivity_examples() {
        assert!(is_frame_via_injectivity(&basis_family(2), 1e-10).unwrap());
        let partial = family_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(!is_frame_via_injectivity(&partial, 1e-10).unwrap());
    }

    #[test]
    fn canonical_dual_examples() {
        // Parseval family: dual = family.
        let fam = basis_family(3);
        let dual = canonical_dual(&fam, 1e-10).unwrap();
        assert!(dual.members().sub(fam.members()).max_abs() < 1e-12);
        // Tight with bound 2: dual = family / 2.
        let fam = basis_family(2).extend(&basis_family(2));
        let dual = canonical_dual(&fam, 1e-10).unwrap();
        let expect = fam.scale(c(0.5, 0.0));
        assert!(dual.members().sub(expect.members()).max_abs() < 1e-12);
        // Not a frame: error.
        let partial = family_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        assert_eq!(
            canonical_dual(&partial, 1e-10).unwrap_err(),
            FrameError::NotAFrame
        );
    }

    #[test]
    fn dual_bounds_are_reciprocal() {
        let fam = family_rows(vec![
            vec![c(1.0, 0.2), c(0.1, -0.3)],
            vec![c(-0.4, 0.5), c(0.9, 0.1)],
            vec![c(0.2, 0.0), c(0.3, 0.8)],
        ]);
        let b = frame_bounds(&fam, false).unwrap();
        assert!(b.lower > 1e-6);
        let dual = canonical_dual(&fam, 1e-10).unwrap();
        let db = frame_bounds(&dual, false).unwrap();
        assert!((db.lower - 1.0 / b.upper).abs() <= 1e-8 * (1.0 / b.upper));
        assert!((db.upper - 1.0 / b.lower).abs() <= 1e-8 * (1.0 / b.lower));
        // The dual's frame operator is S^(-1).
        let s_inv = frame_operator_inverse(&fam, 1e-10).unwrap();
        let s_dual = dual.frame_operator().unwrap();
        let rel = s_dual.matrix().sub(&s_inv).frobenius_norm() / s_inv.frobenius_norm();
        assert!(rel < 1e-10);
        // Involution: the dual of the dual returns the family.
        let back = canonical_dual(&dual, 1e-10).unwrap();
        assert!(back.members().sub(fam.members()).max_abs() < 1e-7);
    }

    #[test]
    fn reconstruction_examples() {
        // Parseval family: both formulas reproduce g directly.
        let fam = basis_family(2);
        let g = vec![c(0.3, -0.2), c(1.1, 0.4)];
        let rec = reconstruct(&fam, &g, 1e-10).unwrap();
        for c_idx in 0..2 {
            assert!((rec.via_dual_coefficients[c_idx] - g[c_idx]).norm() < 1e-12);
            assert!((rec.via_frame_coefficients[c_idx] - g[c_idx]).norm() < 1e-12);
        }
        // Tight frame with bound 2: reconstruction equals (1/2) sum <g,f> f.
        let fam = basis_family(2).extend(&basis_family(2));
        let rec = reconstruct(&fam, &g, 1e-10).unwrap();
        let mut tight = [Complex64::new(0.0, 0.0); 2];
        for i in 0..fam.len() {
            let coeff = inner(&g, fam.member(i));
            for c_idx in 0..2 {
                tight[c_idx] += coeff * fam.member(i)[c_idx] * 0.5;
            }
        }
        for c_idx in 0..2 {
            assert!((rec.via_dual_coefficients[c_idx] - tight[c_idx]).norm() < 1e-12);
            assert!((rec.via_frame_coefficients[c_idx] - g[c_idx]).norm() < 1e-12);
        }
    }

    #[test]
    fn span_restriction_preserves_gram() {
        let fam = family_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.5, 0.5), c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let restricted = fam.restrict_to_span(1e-10).unwrap();
        assert!(restricted.dim() <= 2);
        let before = fam.gram();
        let after = restricted.gram();
        assert!(before.sub(&after).max_abs() < 1e-12);
        // Bounds on the restricted space equal span-only bounds.
        let span_bounds = frame_bounds(&fam, true).unwrap();
        let full_bounds = frame_bounds(&restricted, false).unwrap();
        assert!((span_bounds.lower - full_bounds.lower).abs() < 1e-12);
        assert!((span_bounds.upper - full_bounds.upper).abs() < 1e-12);
    }

    #[test]
    fn kozyrev_family_is_parseval_on_its_span() {
        let space = TestSpace::new(p(2), 1, 2);
        let generators = GeneratorSet::kozyrev(p(2));
        let idx = IndexSet::full(generators.len(), -1, 1, 1);
        let family = FrameFamily::build(&generators, &idx).unwrap();
        let (coords, projected) =
            CoordFamily::from_family(&family, &space, ContainmentMode::Project).unwrap();
        assert!(projected);
        let b = frame_bounds(&coords, true).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-9, "A = {}", b.lower);
        assert!((b.upper - 1.0).abs() < 1e-9, "B = {}", b.upper);
    }

    #[test]
    fn hermitian_matrix_rejects_skew() {
        let mut m = CMatrix::identity(2);
        m.set(0, 1, c(0.5, 0.0));
        assert!(HermitianMatrix::new(m).is_err());
    }

    #[test]
    fn padic_example_row_exists() {
        // The (j, a) = (0, 1/2) Kozyrev member sits inside V(1,1) over p=2.
        let space = TestSpace::new(p(2), 1, 1);
        let f = GeneratorSet::kozyrev(p(2)).generators()[0]
            .dilate_translate(0, &q(2, 1, -1));
        assert!(space.contains(&f));
    }
}
