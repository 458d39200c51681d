//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian
//! matrices. Everything here is deterministic: fixed sweep order, fixed
//! summation order, reproducible eigenvalue sorting.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum LinalgError {
    #[error("matrix dimensions do not match: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    ConvergenceFailure(usize),
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "incompatible shapes {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the adjoint.
    pub fn hermitian_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// Maximum number of cyclic sweeps before reporting failure.
pub const JACOBI_SWEEP_BUDGET: usize = 100;
/// Off-diagonal convergence tolerance, relative to the Frobenius norm.
pub const JACOBI_TOL_FACTOR: f64 = 1e-13;

/// Eigenvalues (ascending) and matching unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigensystem {
    /// Applies `f` to each eigenvalue and reassembles `V f(D) V^H`.
    pub fn map_to_matrix(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = CMatrix::zeros(n, n);
        for j in 0..n {
            let fv = f(self.values[j]);
            for i in 0..n {
                scaled.set(i, j, self.vectors.get(i, j) * fv);
            }
        }
        scaled.mul(&self.vectors.adjoint())
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation annihilates one off-diagonal entry exactly; sweeps run in a
/// fixed row-major order until the off-diagonal Frobenius norm drops below
/// `JACOBI_TOL_FACTOR * ||M||_F`. Eigenvalues are sorted ascending with a
/// lexicographic eigenvector tie-break so repeated runs produce identical
/// output.
pub fn hermitian_eigensystem(m: &CMatrix) -> Result<Eigensystem, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::DimensionMismatch(
            m.rows(),
            m.cols(),
            m.cols(),
            m.rows(),
        ));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Eigensystem {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let scale = m.frobenius_norm();
    let tol = JACOBI_TOL_FACTOR * scale;
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);

    let mut converged = scale == 0.0 || off_diagonal_norm(&a) <= tol;
    if !converged {
        for _sweep in 0..JACOBI_SWEEP_BUDGET {
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q, tol / (n as f64));
                }
            }
            if off_diagonal_norm(&a) <= tol {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(LinalgError::ConvergenceFailure(JACOBI_SWEEP_BUDGET));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigenvalue = |i: usize| a.get(i, i).re;
    order.sort_by(|&i, &j| {
        eigenvalue(i)
            .total_cmp(&eigenvalue(j))
            .then_with(|| compare_columns(&v, i, j))
    });

    let values: Vec<f64> = order.iter().map(|&i| eigenvalue(i)).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v.get(row, old_col));
        }
    }
    Ok(Eigensystem { values, vectors })
}

fn compare_columns(v: &CMatrix, i: usize, j: usize) -> std::cmp::Ordering {
    for row in 0..v.rows() {
        let a = v.get(row, i);
        let b = v.get(row, j);
        let ord = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

/// One Jacobi rotation on the (p, q) plane: with the phase of `a[p][q]`
/// factored out the 2x2 block becomes real symmetric and the classical
/// rotation applies.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, skip_below: f64) {
    let apq = a.get(p, q);
    let abs = apq.norm();
    if abs <= skip_below || abs == 0.0 {
        return;
    }
    let phase = apq / abs; // e^{i theta}, a[p][q] = |a[p][q]| e^{i theta}
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Unitary U: U[p][p] = c, U[p][q] = s*phase, U[q][p] = -s*conj(phase),
    // U[q][q] = c. Update A <- U^H A U and V <- V U.
    let upq = s * phase;
    let uqp = -s * phase.conj();

    let n = a.rows();
    // Columns p and q of A (right multiplication).
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c + akq * uqp);
        a.set(k, q, akp * upq + akq * c);
    }
    // Rows p and q of A (left multiplication by U^H).
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c + aqk * uqp.conj());
        a.set(q, k, apk * upq.conj() + aqk * c);
    }
    // Exact values on the rotated 2x2 block.
    a.set(p, p, Complex64::new(app - t * abs, 0.0));
    a.set(q, q, Complex64::new(aqq + t * abs, 0.0));
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * uqp);
        v.set(k, q, vkp * upq + vkq * c);
    }
}

/// Singular values of an arbitrary complex matrix, ascending, via the
/// Hermitian eigenvalues of `M^H M`.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>, LinalgError> {
    let gram = m.adjoint().mul(m);
    let eig = hermitian_eigensystem(&gram)?;
    Ok(eig.values.iter().map(|l| l.max(0.0).sqrt()).collect())
}

/// Relative threshold below which singular values count as zero.
pub const RANK_THRESHOLD_FACTOR: f64 = 1e-10;

/// Operator norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> Result<f64, LinalgError> {
    Ok(singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// Norm of the Moore-Penrose pseudo-inverse: the reciprocal of the smallest
/// singular value above the rank threshold. Zero matrices give 0.
pub fn pseudo_inverse_norm(m: &CMatrix) -> Result<f64, LinalgError> {
    let sv = singular_values(m)?;
    let max = sv.last().copied().unwrap_or(0.0);
    if max == 0.0 {
        return Ok(0.0);
    }
    let cutoff = RANK_THRESHOLD_FACTOR * max;
    let min_kept = sv.iter().copied().find(|s| *s > cutoff).unwrap_or(max);
    Ok(1.0 / min_kept)
}
