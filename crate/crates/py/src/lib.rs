//! Python bindings: exact p-adic arithmetic, character-atom functions,
//! wavelet families, and frame analysis, exposed as a thin layer over the
//! `framelets` crate.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use framelets::frame::battery::{run_battery, BatteryConfig, CheckKind};
use framelets::{
    canonical_dual, frame_bounds_with, Ball, ContainmentMode, CoordFamily, FrameFamily,
    GeneratorSet, IndexSet, LCFunction, PAdicRational, Prime, TestSpace, Tolerances,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn parse_prime(p: u64) -> PyResult<Prime> {
    Prime::new(p).map_err(value_err)
}

/// An exact element of Z[1/p], serialized as "m*p^e".
#[pyclass(name = "PAdic", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPAdic {
    inner: PAdicRational,
}

#[pymethods]
impl PyPAdic {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner: PAdicRational = text.parse().map_err(value_err)?;
        Ok(PyPAdic { inner })
    }

    /// Builds `n` as an element of Z[1/p].
    #[staticmethod]
    fn integer(p: u64, n: i64) -> PyResult<Self> {
        Ok(PyPAdic {
            inner: PAdicRational::from_integer(parse_prime(p)?, n),
        })
    }

    /// Builds `mantissa * p^exponent`.
    #[staticmethod]
    fn scaled(p: u64, mantissa: i64, exponent: i64) -> PyResult<Self> {
        Ok(PyPAdic {
            inner: PAdicRational::new(parse_prime(p)?, mantissa.into(), exponent),
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.prime().get()
    }

    /// The p-adic valuation, or None for zero.
    fn valuation(&self) -> Option<i64> {
        self.inner.valuation()
    }

    /// The p-adic norm as a float.
    fn norm(&self) -> f64 {
        self.inner.prime().pow_f64(-self.inner.valuation().unwrap_or(0))
            * if self.inner.is_zero() { 0.0 } else { 1.0 }
    }

    /// The p-adic norm as an exact rational string.
    fn norm_exact(&self) -> String {
        self.inner.norm().to_string()
    }

    /// The value as an ordinary rational string.
    fn as_rational(&self) -> String {
        self.inner.to_rational().to_string()
    }

    fn as_float(&self) -> f64 {
        self.inner.to_f64()
    }

    fn fractional_part(&self) -> Self {
        PyPAdic {
            inner: self.inner.fractional_part(),
        }
    }

    /// The additive character value e^(2 pi i {x}_p) as a complex number.
    fn character(&self) -> Complex64 {
        self.inner.character_phase().as_complex()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyPAdic {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyPAdic {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &Self) -> Self {
        PyPAdic {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __neg__(&self) -> Self {
        PyPAdic {
            inner: self.inner.neg(),
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PAdic(\"{}\")", self.inner)
    }
}

/// The ultrametric ball center + p^(-radiusLog) Z_p, serialized as
/// "center;radiusLog".
#[pyclass(name = "Ball", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBall {
    inner: Ball,
}

#[pymethods]
impl PyBall {
    #[new]
    fn new(center: &PyPAdic, radius_log: i64) -> Self {
        PyBall {
            inner: Ball::new(center.inner.clone(), radius_log),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyBall {
            inner: text.parse().map_err(value_err)?,
        })
    }

    /// The unit ball Z_p.
    #[staticmethod]
    fn integers(p: u64) -> PyResult<Self> {
        Ok(PyBall {
            inner: Ball::integers(parse_prime(p)?),
        })
    }

    fn center(&self) -> PyPAdic {
        PyPAdic {
            inner: self.inner.center().clone(),
        }
    }

    #[getter]
    fn radius_log(&self) -> i64 {
        self.inner.radius_log()
    }

    fn contains(&self, x: &PyPAdic) -> bool {
        self.inner.contains(&x.inner)
    }

    /// Haar measure as a float (p^radiusLog).
    fn measure(&self) -> f64 {
        self.inner.measure_f64()
    }

    fn measure_exact(&self) -> String {
        self.inner.measure().to_string()
    }

    fn split(&self) -> Vec<PyBall> {
        self.inner
            .split()
            .into_iter()
            .map(|b| PyBall { inner: b })
            .collect()
    }

    /// One of "disjoint", "equal", "first-inside-second", "second-inside-first".
    fn relation(&self, other: &PyBall) -> &'static str {
        use framelets::BallRelation::*;
        match self.inner.relation(&other.inner) {
            Disjoint => "disjoint",
            Equal => "equal",
            FirstInsideSecond => "first-inside-second",
            SecondInsideFirst => "second-inside-first",
        }
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ball.parse(\"{}\")", self.inner)
    }
}

/// A locally constant compactly supported function (finite sum of
/// character atoms).
#[pyclass(name = "Function", frozen, from_py_object)]
#[derive(Clone)]
struct PyFunction {
    inner: LCFunction,
}

#[pymethods]
impl PyFunction {
    #[staticmethod]
    fn indicator(ball: &PyBall) -> Self {
        PyFunction {
            inner: LCFunction::indicator(ball.inner.clone()),
        }
    }

    /// The p-1 Kozyrev generators.
    #[staticmethod]
    fn kozyrev(p: u64) -> PyResult<Vec<PyFunction>> {
        Ok(GeneratorSet::kozyrev(parse_prime(p)?)
            .generators()
            .iter()
            .map(|f| PyFunction { inner: f.clone() })
            .collect())
    }

    /// The Khrennikov-Shelkovich generators of order m.
    #[staticmethod]
    fn khrennikov_shelkovich(p: u64, m: u32) -> PyResult<Vec<PyFunction>> {
        Ok(GeneratorSet::khrennikov_shelkovich(parse_prime(p)?, m)
            .map_err(value_err)?
            .generators()
            .iter()
            .map(|f| PyFunction { inner: f.clone() })
            .collect())
    }

    #[staticmethod]
    fn from_json(p: u64, text: &str) -> PyResult<Self> {
        Ok(PyFunction {
            inner: LCFunction::from_json(parse_prime(p)?, text).map_err(value_err)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn atom_count(&self) -> usize {
        self.inner.atoms().len()
    }

    fn evaluate(&self, x: &PyPAdic) -> Complex64 {
        self.inner.evaluate(&x.inner)
    }

    /// Closed-form L2 inner product.
    fn inner(&self, other: &PyFunction) -> Complex64 {
        self.inner.inner_product(&other.inner)
    }

    /// Coset-sampling quadrature oracle for the inner product.
    fn quadrature_inner(&self, other: &PyFunction, depth: i64) -> PyResult<Complex64> {
        self.inner
            .quadrature_inner_product(&other.inner, depth)
            .map_err(value_err)
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    /// The unitary action x -> p^(j/2) f(p^(-j) x - a).
    fn dilate_translate(&self, j: i64, a: &PyPAdic) -> Self {
        PyFunction {
            inner: self.inner.dilate_translate(j, &a.inner),
        }
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyFunction {
            inner: self.inner.add(&other.inner).map_err(runtime_err)?,
        })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "<Function p={} atoms={}>",
            self.inner.prime().get(),
            self.inner.atoms().len()
        )
    }
}

/// A finite dilation-translation family over a truncated index set.
#[pyclass(name = "Family", frozen)]
struct PyFamily {
    inner: FrameFamily,
}

fn build_generators(prime: Prime, system: &str) -> PyResult<GeneratorSet> {
    if system == "kozyrev" {
        return Ok(GeneratorSet::kozyrev(prime));
    }
    if let Some(order) = system.strip_prefix("ks:") {
        let order: u32 = order
            .parse()
            .map_err(|_| value_err(format!("bad system {system:?}")))?;
        return GeneratorSet::khrennikov_shelkovich(prime, order).map_err(value_err);
    }
    Err(value_err(format!(
        "unknown system {system:?} (expected \"kozyrev\" or \"ks:M\")"
    )))
}

#[pymethods]
impl PyFamily {
    /// Materializes the system over scales j_min..=j_max and translations
    /// of norm at most p^depth.
    #[new]
    fn new(p: u64, system: &str, j_min: i64, j_max: i64, depth: u32) -> PyResult<Self> {
        let prime = parse_prime(p)?;
        let generators = build_generators(prime, system)?;
        let index = IndexSet::full(generators.len(), j_min, j_max, depth);
        Ok(PyFamily {
            inner: FrameFamily::build(&generators, &index).map_err(value_err)?,
        })
    }

    /// Builds a family from explicit generator functions.
    #[staticmethod]
    fn custom(
        p: u64,
        generators: Vec<PyFunction>,
        j_min: i64,
        j_max: i64,
        depth: u32,
    ) -> PyResult<Self> {
        let prime = parse_prime(p)?;
        let set = GeneratorSet::custom(prime, generators.into_iter().map(|f| f.inner).collect());
        let index = IndexSet::full(set.len(), j_min, j_max, depth);
        Ok(PyFamily {
            inner: FrameFamily::build(&set, &index).map_err(value_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn function(&self, i: usize) -> PyResult<PyFunction> {
        self.inner
            .entries()
            .get(i)
            .map(|e| PyFunction {
                inner: e.function.clone(),
            })
            .ok_or_else(|| value_err(format!("index {i} out of range")))
    }

    fn manifest_json(&self) -> String {
        self.inner.manifest_json().to_string()
    }

    /// Largest deviation of the Gram matrix from the identity.
    fn gram_defect(&self) -> f64 {
        let gram = self.inner.gram_matrix();
        let n = gram.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram.get(i, j) - Complex64::new(expect, 0.0)).norm());
            }
        }
        worst
    }
}

/// The test space of functions supported on p^(-J) Z_p and constant on
/// cosets of p^K Z_p; dimension p^(J+K).
#[pyclass(name = "Space", frozen)]
struct PySpace {
    inner: TestSpace,
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(p: u64, j: u32, k: u32) -> PyResult<Self> {
        if j + k > 7 {
            return Err(value_err("space parameters limited to J+K <= 7"));
        }
        Ok(PySpace {
            inner: TestSpace::new(parse_prime(p)?, j, k),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn contains(&self, f: &PyFunction) -> bool {
        self.inner.contains(&f.inner)
    }
}

fn coords_for(family: &PyFamily, space: &PySpace, project: bool) -> PyResult<CoordFamily> {
    let mode = if project {
        ContainmentMode::Project
    } else {
        ContainmentMode::Strict
    };
    let (coords, _) =
        CoordFamily::from_family(&family.inner, &space.inner, mode).map_err(runtime_err)?;
    Ok(coords)
}

/// Optimal frame bounds (A, B) of the family on the space.
#[pyfunction]
#[pyo3(signature = (family, space, span_only = false, project = false))]
fn frame_bounds(
    family: &PyFamily,
    space: &PySpace,
    span_only: bool,
    project: bool,
) -> PyResult<(f64, f64)> {
    let coords = coords_for(family, space, project || span_only)?;
    let bounds =
        frame_bounds_with(&coords, span_only, Tolerances::default().rank_rel).map_err(runtime_err)?;
    Ok((bounds.lower, bounds.upper))
}

/// Optimal bounds of the canonical dual family (reciprocals of the
/// original's, in reverse order).
#[pyfunction]
#[pyo3(signature = (family, space, project = false))]
fn canonical_dual_bounds(family: &PyFamily, space: &PySpace, project: bool) -> PyResult<(f64, f64)> {
    let coords = coords_for(family, space, project)?;
    let rank_rel = Tolerances::default().rank_rel;
    let dual = canonical_dual(&coords, rank_rel).map_err(runtime_err)?;
    let bounds = frame_bounds_with(&dual, false, rank_rel).map_err(runtime_err)?;
    Ok((bounds.lower, bounds.upper))
}

/// Runs a randomized theorem-check battery; returns the summary JSON.
#[pyfunction]
#[pyo3(signature = (theorem, p = 2, dim = 4, trials = 50, seed = 0xC0FFEE, vectors = 20))]
fn run_check(
    theorem: &str,
    p: u64,
    dim: usize,
    trials: usize,
    seed: u64,
    vectors: usize,
) -> PyResult<String> {
    let kind = CheckKind::from_name(theorem)
        .ok_or_else(|| value_err(format!("unknown theorem {theorem:?}")))?;
    parse_prime(p)?;
    let cfg = BatteryConfig {
        p,
        dim,
        trials,
        seed,
        vectors,
        tolerances: Tolerances::default(),
    };
    let summary = run_battery(kind, &cfg, None).map_err(runtime_err)?;
    serde_json::to_string(&summary).map_err(runtime_err)
}

#[pymodule]
fn framelets_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPAdic>()?;
    m.add_class::<PyBall>()?;
    m.add_class::<PyFunction>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(frame_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_dual_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    Ok(())
}
