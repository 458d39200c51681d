//! Seeded randomized instance generators and the check battery that drives
//! them. Every instance is constructed so the checked theorem's hypotheses
//! hold (frames stay frames, Bessel bounds of removed or perturbing parts
//! stay below the lower bound), with a sprinkling of degenerate cases where
//! the theorem predicts failure.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::checks::{
    check_bounded_below, check_decomposition, check_dual_pair, check_erasure,
    check_injectivity, check_operator_image, check_perturbation, check_tight_scaled_dual,
    CheckReport, ReportMeta,
};
use super::{canonical_dual, frame_bounds_with, CoordFamily, FrameError, Tolerances};
use crate::linalg::CMatrix;

/// Default seed for every randomized suite.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// The theorem batteries the CLI can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Erasure,
    Perturbation,
    Image,
    BoundedBelow,
    DualPair,
    TightDual,
    Injectivity,
    Decomposition,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Erasure,
        CheckKind::Perturbation,
        CheckKind::Image,
        CheckKind::BoundedBelow,
        CheckKind::DualPair,
        CheckKind::TightDual,
        CheckKind::Injectivity,
        CheckKind::Decomposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Erasure => "erasure",
            CheckKind::Perturbation => "perturb",
            CheckKind::Image => "image",
            CheckKind::BoundedBelow => "bounded-below",
            CheckKind::DualPair => "dual-pair",
            CheckKind::TightDual => "tight-dual",
            CheckKind::Injectivity => "injectivity",
            CheckKind::Decomposition => "decomposition",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.iter().copied().find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone)]
pub struct BatteryConfig {
    /// Prime echoed into reports.
    pub p: u64,
    /// Dimension of the coordinate space for randomized instances.
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Random vectors per decomposition trial.
    pub vectors: usize,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatterySummary {
    pub check: String,
    pub p: u64,
    pub seed: u64,
    pub trials: usize,
    pub violations: usize,
    pub reports: Vec<CheckReport>,
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows).map(|_| random_vector(rng, cols)).collect();
    CMatrix::from_rows(data)
}

/// A random frame: `dim + extra` members with a safely positive lower bound.
pub fn random_frame<R: Rng>(rng: &mut R, dim: usize, extra: usize) -> CoordFamily {
    loop {
        let family = CoordFamily::new(random_matrix(rng, dim + extra, dim));
        let bounds = frame_bounds_with(&family, false, 1e-10).expect("frame bounds");
        if bounds.lower > 1e-6 * bounds.upper && bounds.lower > 0.0 {
            return family;
        }
    }
}

/// A random unitary via modified Gram-Schmidt on a random square matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    loop {
        let raw = random_matrix(rng, dim, dim);
        if let Some(q) = gram_schmidt_columns(&raw) {
            return q;
        }
    }
}

fn gram_schmidt_columns(m: &CMatrix) -> Option<CMatrix> {
    let n = m.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| m.get(i, j)).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = cols[j]
                .iter()
                .zip(&cols[k])
                .map(|(a, b)| a * b.conj())
                .sum();
            for i in 0..n {
                let correction = proj * cols[k][i];
                cols[j][i] -= correction;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        for value in &mut cols[j] {
            *value /= norm;
        }
    }
    let mut q = CMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, value) in col.iter().enumerate() {
            q.set(i, j, *value);
        }
    }
    Some(q)
}

/// A well-conditioned invertible operator: `I + R / (2 ||R||)`.
pub fn random_invertible<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    let raw = random_matrix(rng, dim, dim);
    let norm = crate::linalg::operator_norm(&raw).expect("operator norm");
    let scaled = if norm > 0.0 {
        raw.scale(Complex64::new(0.5 / norm, 0.0))
    } else {
        raw
    };
    CMatrix::identity(dim).add(&scaled)
}

/// An orthogonal projection of the given rank.
pub fn random_projection<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> CMatrix {
    let q = random_unitary(rng, dim);
    let mut qr = CMatrix::zeros(dim, rank);
    for j in 0..rank {
        for i in 0..dim {
            qr.set(i, j, q.get(i, j));
        }
    }
    qr.mul(&qr.adjoint())
}

/// An exactly singular operator: a rank-deficient projection composed with
/// an invertible map.
pub fn random_singular<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    let rank = dim.saturating_sub(1);
    random_projection(rng, dim, rank).mul(&random_invertible(rng, dim))
}

/// Unit vectors appended to `base` and scaled so their total energy (an
/// upper bound for their Bessel bound) stays below `budget`.
fn tiny_extras<R: Rng>(rng: &mut R, dim: usize, count: usize, budget: f64) -> CoordFamily {
    let scale = (budget / count as f64).sqrt();
    let rows: Vec<Vec<Complex64>> = (0..count)
        .map(|_| {
            let v = random_vector(rng, dim);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|z| z * (scale / norm)).collect()
        })
        .collect();
    CoordFamily::new(CMatrix::from_rows(rows))
}

/// Runs one battery. Trial 0 exercises `initial` (when given) in the
/// theorem's canonical configuration; the remaining trials are randomized.
pub fn run_battery(
    kind: CheckKind,
    cfg: &BatteryConfig,
    initial: Option<&CoordFamily>,
) -> Result<BatterySummary, FrameError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let meta = ReportMeta {
        p: cfg.p,
        seed: cfg.seed,
    };
    let tol = &cfg.tolerances;
    let mut reports = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let use_initial = trial == 0 && initial.is_some();
        let report = match kind {
            CheckKind::Erasure => {
                let (family, removed) = if use_initial {
                    (initial.unwrap().clone(), vec![])
                } else {
                    erasure_instance(&mut rng, cfg.dim, trial)
                };
                check_erasure(meta, &family, &removed, tol)?
            }
            CheckKind::Perturbation => {
                let (f, g) = if use_initial {
                    let f = initial.unwrap().clone();
                    (f.clone(), f)
                } else {
                    perturbation_instance(&mut rng, cfg.dim, trial)
                };
                check_perturbation(meta, &f, &g, tol)?
            }
            CheckKind::Image => {
                let (family, op) = if use_initial {
                    let f = initial.unwrap().clone();
                    let id = CMatrix::identity(f.dim());
                    (f, id)
                } else {
                    image_instance(&mut rng, cfg.dim, trial)
                };
                check_operator_image(meta, &family, &op, tol)?
            }
            CheckKind::BoundedBelow => {
                let (family, op) = if use_initial {
                    let f = initial.unwrap().clone();
                    let id = CMatrix::identity(f.dim());
                    (f, id)
                } else {
                    bounded_below_instance(&mut rng, cfg.dim, trial)
                };
                check_bounded_below(meta, &family, &op, tol)?
            }
            CheckKind::DualPair => {
                let (f, g) = if use_initial {
                    let f = initial.unwrap().clone();
                    let dual = canonical_dual(&f, tol.rank_rel)?;
                    (f, dual)
                } else {
                    dual_pair_instance(&mut rng, cfg.dim, trial, tol)?
                };
                check_dual_pair(meta, &f, &g, &mut rng, tol)?
            }
            CheckKind::TightDual => {
                let family = if use_initial {
                    initial.unwrap().clone()
                } else {
                    tight_dual_instance(&mut rng, cfg.dim, trial)
                };
                check_tight_scaled_dual(meta, &family, &mut rng, tol)?
            }
            CheckKind::Injectivity => {
                let family = if use_initial {
                    initial.unwrap().clone()
                } else {
                    injectivity_instance(&mut rng, cfg.dim, trial)?
                };
                check_injectivity(meta, &family, tol)?
            }
            CheckKind::Decomposition => {
                let family = if use_initial {
                    initial.unwrap().clone()
                } else {
                    random_frame(&mut rng, cfg.dim, 2 + trial % 3)
                };
                check_decomposition(meta, &family, &mut rng, cfg.vectors, tol)?
            }
        };
        reports.push(report);
    }
    let violations = reports.iter().filter(|r| !r.satisfied).count();
    Ok(BatterySummary {
        check: kind.name().to_string(),
        p: cfg.p,
        seed: cfg.seed,
        trials: cfg.trials,
        violations,
        reports,
    })
}

/// A frame plus appended tiny members whose removal keeps `C < A`.
pub fn erasure_instance<R: Rng>(
    rng: &mut R,
    dim: usize,
    trial: usize,
) -> (CoordFamily, Vec<usize>) {
    let base = random_frame(rng, dim, 2 + trial % 3);
    if trial % 10 == 9 {
        return (base, vec![]);
    }
    let bounds = frame_bounds_with(&base, false, 1e-10).expect("frame bounds");
    let count = 1 + trial % 3;
    let extras = tiny_extras(rng, dim, count, bounds.lower / 4.0);
    let family = base.extend(&extras);
    let removed = (base.len()..family.len()).collect();
    (family, removed)
}

/// A frame and a perturbation whose difference family stays small.
pub fn perturbation_instance<R: Rng>(
    rng: &mut R,
    dim: usize,
    trial: usize,
) -> (CoordFamily, CoordFamily) {
    let f = random_frame(rng, dim, 2 + trial % 3);
    let bounds = frame_bounds_with(&f, false, 1e-10).expect("frame bounds");
    let delta = tiny_extras(rng, dim, f.len(), bounds.lower / 8.0);
    let g = CoordFamily::new(f.members().add(delta.members()));
    (f, g)
}

/// Cycles unitary, scalar, generic invertible, and projection operators.
pub fn image_instance<R: Rng>(rng: &mut R, dim: usize, trial: usize) -> (CoordFamily, CMatrix) {
    let family = random_frame(rng, dim, 3);
    let op = match trial % 4 {
        0 => random_unitary(rng, dim),
        1 => CMatrix::identity(dim).scale(Complex64::new(2.0, 0.0)),
        2 => random_invertible(rng, dim),
        _ => random_projection(rng, dim, (dim - 1).max(1)),
    };
    (family, op)
}

/// Mostly invertible operators with exactly singular ones mixed in.
pub fn bounded_below_instance<R: Rng>(
    rng: &mut R,
    dim: usize,
    trial: usize,
) -> (CoordFamily, CMatrix) {
    let family = random_frame(rng, dim, 3);
    let op = if trial.is_multiple_of(10) {
        random_singular(rng, dim)
    } else {
        random_invertible(rng, dim)
    };
    (family, op)
}

/// True dual pairs (canonical dual, self-dual orthonormal rows) alternating
/// with constructed non-duals (scaled duals, unrelated families).
pub fn dual_pair_instance<R: Rng>(
    rng: &mut R,
    dim: usize,
    trial: usize,
    tol: &Tolerances,
) -> Result<(CoordFamily, CoordFamily), FrameError> {
    match trial % 4 {
        0 => {
            let f = random_frame(rng, dim, 2 + trial % 2);
            let g = canonical_dual(&f, tol.rank_rel)?;
            Ok((f, g))
        }
        1 => {
            let f = CoordFamily::new(random_unitary(rng, dim));
            Ok((f.clone(), f))
        }
        2 => {
            let f = random_frame(rng, dim, 2);
            let g = canonical_dual(&f, tol.rank_rel)?.scale(Complex64::new(2.0, 0.0));
            Ok((f, g))
        }
        _ => {
            let f = random_frame(rng, dim, 2);
            let g = random_frame(rng, dim, 2);
            Ok((f, g))
        }
    }
}

/// Tight frames (rotated scaled bases, duplicated bases) alternating with
/// generic non-tight frames.
pub fn tight_dual_instance<R: Rng>(rng: &mut R, dim: usize, trial: usize) -> CoordFamily {
    let scale = 0.5 + (trial % 7) as f64 / 7.0;
    match trial % 3 {
        0 => CoordFamily::new(random_unitary(rng, dim)).scale(Complex64::new(scale, 0.0)),
        1 => {
            let basis = CoordFamily::new(CMatrix::identity(dim));
            let doubled = basis.extend(&basis).scale(Complex64::new(scale, 0.0));
            doubled
                .apply(&random_unitary(rng, dim))
                .expect("square operator")
        }
        _ => random_frame(rng, dim, 2 + trial % 3),
    }
}

/// Frames alternating with certainly-deficient families.
pub fn injectivity_instance<R: Rng>(
    rng: &mut R,
    dim: usize,
    trial: usize,
) -> Result<CoordFamily, FrameError> {
    match trial % 3 {
        0 => Ok(random_frame(rng, dim, 1 + trial % 4)),
        1 => {
            let rows = (dim - 1).max(1);
            Ok(CoordFamily::new(random_matrix(rng, rows, dim)))
        }
        _ => {
            let family = random_frame(rng, dim, 2);
            family.apply(&random_singular(rng, dim))
        }
    }
}

/// A quick scan over every battery; returns total violations. Used by the
/// full-suite invariant test and the CLI battery mode.
pub fn run_all(cfg: &BatteryConfig) -> Result<Vec<BatterySummary>, FrameError> {
    CheckKind::ALL
        .iter()
        .map(|&kind| run_battery(kind, cfg, None))
        .collect()
}
