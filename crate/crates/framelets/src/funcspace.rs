//! Locally constant, compactly supported functions on `Q_p`, represented
//! exactly as finite sums of character atoms `amplitude * chi_p(s*x) * 1_B(x)`.
//!
//! The p-adic geometry (supports, frequencies, character phases) is exact;
//! only amplitudes are double-precision complex, since dilation introduces
//! the irrational factor `p^(j/2)`. Inner products have a closed form, with
//! an independent coset-sampling quadrature as cross-check: both are exact
//! for locally constant integrands, so they must agree to within floating
//! round-off of the amplitude arithmetic.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::padic::{Ball, BallRelation, PAdicRational, PadicError, Prime};

/// Atoms with amplitude modulus below this are dropped during
/// canonicalization.
pub const AMPLITUDE_DROP_EPS: f64 = 1e-14;
/// Hard cap on atoms materialized while refining nested supports.
pub const REFINEMENT_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum FuncError {
    #[error("support refinement exceeded the budget of {REFINEMENT_BUDGET} atoms")]
    RefinementBudgetExceeded,
    #[error("quadrature depth {depth} too coarse; need at least {required}")]
    DepthTooCoarse { depth: i64, required: i64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("invalid function JSON: {0}")]
    Json(String),
}

/// One term `amplitude * chi_p(frequency * x) * 1_support(x)`.
///
/// Frequencies are reduced modulo the support's dual scale: two frequencies
/// whose difference has valuation at least `radius_log` give the same
/// function up to a constant phase, which is folded into the amplitude. With
/// the support center canonical as well, equal atoms have equal fields.
#[derive(Debug, Clone, PartialEq)]
pub struct CharAtom {
    amplitude: Complex64,
    frequency: PAdicRational,
    support: Ball,
}

impl CharAtom {
    pub fn new(amplitude: Complex64, frequency: PAdicRational, support: Ball) -> Self {
        let scale = support.radius_log();
        let reduced = frequency.digits_below(scale);
        let leftover = frequency.sub(&reduced);
        let amplitude = if leftover.is_zero() {
            amplitude
        } else {
            // chi_p(s*x) = chi_p((s - s')*c) * chi_p(s'*x) on the ball.
            amplitude
                * leftover
                    .mul(support.center())
                    .character_phase()
                    .as_complex()
        };
        CharAtom {
            amplitude,
            frequency: reduced,
            support,
        }
    }

    /// The indicator of a ball.
    pub fn indicator(support: Ball) -> Self {
        let zero = PAdicRational::zero(support.prime());
        CharAtom::new(Complex64::new(1.0, 0.0), zero, support)
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn frequency(&self) -> &PAdicRational {
        &self.frequency
    }

    pub fn support(&self) -> &Ball {
        &self.support
    }

    pub fn evaluate(&self, x: &PAdicRational) -> Complex64 {
        if self.support.contains(x) {
            self.amplitude * self.frequency.mul(x).character_phase().as_complex()
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Coarsest `scale` such that the atom is constant on every ball of
    /// radius-log `scale` (the min of the support scale and the frequency
    /// valuation).
    pub fn constancy_scale(&self) -> i64 {
        match self.frequency.valuation() {
            None => self.support.radius_log(),
            Some(v) => v.min(self.support.radius_log()),
        }
    }
}

/// A finite sum of character atoms in canonical form: supports pairwise
/// disjoint, one atom per support, negligible amplitudes dropped, atoms
/// sorted by (support center, radius-log).
#[derive(Debug, Clone, PartialEq)]
pub struct LCFunction {
    prime: Prime,
    atoms: Vec<CharAtom>,
}

impl LCFunction {
    /// Canonicalizes a raw atom list: nested or equal supports are resolved
    /// by splitting the coarser atom, and same-support atoms with equivalent
    /// frequencies merge by complex addition.
    pub fn new(prime: Prime, raw: Vec<CharAtom>) -> Result<Self, FuncError> {
        let mut atoms: Vec<CharAtom> = raw
            .into_iter()
            .filter(|a| a.amplitude.norm() >= AMPLITUDE_DROP_EPS)
            .collect();
        for a in &atoms {
            assert_eq!(a.support.prime(), prime, "atom prime mismatch");
        }
        if atoms.len() > 1 {
            let mut root = atoms[0].support.clone();
            for a in &atoms[1..] {
                root = Ball::enclosing(&root, &a.support);
            }
            let mut budget = REFINEMENT_BUDGET.saturating_sub(atoms.len());
            atoms = resolve(&root, atoms, &mut budget)?;
        }
        sort_atoms(&mut atoms);
        Ok(LCFunction { prime, atoms })
    }

    /// Builds from atoms already known to have pairwise disjoint supports.
    fn from_disjoint_atoms(prime: Prime, atoms: Vec<CharAtom>) -> Self {
        let mut atoms: Vec<CharAtom> = atoms
            .into_iter()
            .filter(|a| a.amplitude.norm() >= AMPLITUDE_DROP_EPS)
            .collect();
        sort_atoms(&mut atoms);
        debug_assert!(atoms
            .iter()
            .enumerate()
            .all(|(i, a)| atoms[i + 1..]
                .iter()
                .all(|b| a.support.relation(&b.support) == BallRelation::Disjoint)));
        LCFunction { prime, atoms }
    }

    pub fn zero(prime: Prime) -> Self {
        LCFunction {
            prime,
            atoms: vec![],
        }
    }

    pub fn single(atom: CharAtom) -> Self {
        let prime = atom.support.prime();
        if atom.amplitude.norm() < AMPLITUDE_DROP_EPS {
            LCFunction::zero(prime)
        } else {
            LCFunction {
                prime,
                atoms: vec![atom],
            }
        }
    }

    /// The indicator function of a ball.
    pub fn indicator(support: Ball) -> Self {
        LCFunction::single(CharAtom::indicator(support))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn atoms(&self) -> &[CharAtom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn evaluate(&self, x: &PAdicRational) -> Complex64 {
        self.atoms.iter().map(|a| a.evaluate(x)).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        LCFunction::from_disjoint_atoms(
            self.prime,
            self.atoms
                .iter()
                .map(|a| CharAtom {
                    amplitude: a.amplitude * factor,
                    frequency: a.frequency.clone(),
                    support: a.support.clone(),
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self, FuncError> {
        assert_eq!(self.prime, other.prime);
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        LCFunction::new(self.prime, atoms)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FuncError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner_product(self).re.max(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Closed-form L2 inner product `<f, g> = integral of f * conj(g)`.
    ///
    /// For each atom pair with intersecting supports the contribution is
    /// `a * conj(b) * chi_p((s_f - s_g) * c) * measure(B)` over the smaller
    /// ball `B` with center `c`, and zero unless `|s_f - s_g|_p <= p^(-radius_log(B))`,
    /// by the ball-integral identity for characters.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.prime, other.prime);
        let mut total = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            for b in &other.atoms {
                let small = match a.support.relation(&b.support) {
                    BallRelation::Disjoint => continue,
                    BallRelation::Equal | BallRelation::FirstInsideSecond => &a.support,
                    BallRelation::SecondInsideFirst => &b.support,
                };
                let diff = a.frequency.sub(&b.frequency);
                let vanishes = match diff.valuation() {
                    None => false,
                    Some(v) => v < small.radius_log(),
                };
                if vanishes {
                    continue;
                }
                let phase = diff.mul(small.center()).character_phase().as_complex();
                total +=
                    a.amplitude * b.amplitude.conj() * phase * small.measure_f64();
            }
        }
        total
    }

    /// The coarsest valid quadrature depth for this function.
    pub fn required_quadrature_depth(&self) -> i64 {
        self.atoms
            .iter()
            .map(|a| {
                let by_support = 1 - a.support.radius_log();
                match a.frequency.valuation() {
                    None => by_support,
                    Some(v) => by_support.max(-v),
                }
            })
            .max()
            .unwrap_or(0)
    }

    /// Independent integration oracle: a Riemann sum over the cosets of
    /// `p^depth * Z_p` covering all supports, one sample per coset. For
    /// locally constant integrands this sum is exact, so it must agree with
    /// [`LCFunction::inner_product`] up to amplitude round-off.
    pub fn quadrature_inner_product(
        &self,
        other: &Self,
        depth: i64,
    ) -> Result<Complex64, FuncError> {
        assert_eq!(self.prime, other.prime);
        let required = self
            .required_quadrature_depth()
            .max(other.required_quadrature_depth());
        if depth < required {
            return Err(FuncError::DepthTooCoarse { depth, required });
        }
        let mut cells: BTreeSet<Ball> = BTreeSet::new();
        for atom in self.atoms.iter().chain(other.atoms.iter()) {
            collect_cells(&atom.support, -depth, &mut cells);
        }
        let cell_measure = self.prime.pow_f64(-depth);
        let mut total = Complex64::new(0.0, 0.0);
        for cell in &cells {
            let x = cell.center();
            total += self.evaluate(x) * other.evaluate(x).conj() * cell_measure;
        }
        Ok(total)
    }

    /// The unitary dilation-translation `x -> p^(j/2) f(p^(-j) x - a)`.
    ///
    /// Acts atom-wise in closed form: amplitude picks up `p^(j/2) * chi_p(-s*a)`,
    /// the frequency becomes `p^(-j) * s`, and the support becomes
    /// `p^j * (support + a)`.
    pub fn dilate_translate(&self, j: i64, a: &PAdicRational) -> Self {
        assert_eq!(self.prime, a.prime());
        let gain = self.prime.pow_f64(j).sqrt();
        let atoms = self
            .atoms
            .iter()
            .map(|atom| {
                let phase = atom.frequency.mul(a).neg().character_phase().as_complex();
                let amplitude = atom.amplitude * gain * phase;
                let frequency = atom.frequency.mul_pow_p(-j);
                let center = atom.support.center().add(a).mul_pow_p(j);
                let support = Ball::new(center, atom.support.radius_log() - j);
                CharAtom::new(amplitude, frequency, support)
            })
            .collect();
        LCFunction::from_disjoint_atoms(self.prime, atoms)
    }

    /// Orthogonal projection onto the functions supported in `region` and
    /// constant on balls of radius-log `constancy_scale`.
    ///
    /// Exact on atoms: the support is intersected with the region, and an
    /// atom whose frequency oscillates below the constancy scale averages to
    /// zero cell by cell.
    pub fn project(&self, region: &Ball, constancy_scale: i64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .filter_map(|atom| {
                let support = match atom.support.relation(region) {
                    BallRelation::Disjoint => return None,
                    BallRelation::Equal | BallRelation::FirstInsideSecond => {
                        atom.support.clone()
                    }
                    BallRelation::SecondInsideFirst => region.clone(),
                };
                let projected =
                    CharAtom::new(atom.amplitude, atom.frequency.clone(), support);
                match projected.frequency.valuation() {
                    Some(v) if v < constancy_scale => None,
                    _ => Some(projected),
                }
            })
            .collect();
        LCFunction::from_disjoint_atoms(self.prime, atoms)
    }

    /// Serializes to the atom-list JSON format.
    pub fn to_json_value(&self) -> serde_json::Value {
        let reprs: Vec<AtomRepr> = self
            .atoms
            .iter()
            .map(|a| AtomRepr {
                amplitude: [a.amplitude.re, a.amplitude.im],
                frequency: a.frequency.to_string(),
                ball: BallRepr {
                    center: a.support.center().to_string(),
                    radius_log: a.support.radius_log(),
                },
            })
            .collect();
        serde_json::to_value(reprs).expect("atom list serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json_value(prime: Prime, value: &serde_json::Value) -> Result<Self, FuncError> {
        let reprs: Vec<AtomRepr> =
            serde_json::from_value(value.clone()).map_err(|e| FuncError::Json(e.to_string()))?;
        let mut atoms = Vec::with_capacity(reprs.len());
        for repr in reprs {
            let frequency: PAdicRational = repr.frequency.parse()?;
            let center: PAdicRational = repr.ball.center.parse()?;
            if frequency.prime() != prime || center.prime() != prime {
                return Err(FuncError::Padic(PadicError::PrimeMismatch(
                    prime.get(),
                    frequency.prime().get(),
                )));
            }
            atoms.push(CharAtom::new(
                Complex64::new(repr.amplitude[0], repr.amplitude[1]),
                frequency,
                Ball::new(center, repr.ball.radius_log),
            ));
        }
        LCFunction::new(prime, atoms)
    }

    pub fn from_json(prime: Prime, text: &str) -> Result<Self, FuncError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| FuncError::Json(e.to_string()))?;
        LCFunction::from_json_value(prime, &value)
    }
}

#[derive(Serialize, Deserialize)]
struct AtomRepr {
    amplitude: [f64; 2],
    frequency: String,
    ball: BallRepr,
}

#[derive(Serialize, Deserialize)]
struct BallRepr {
    center: String,
    #[serde(rename = "radiusLog")]
    radius_log: i64,
}

fn sort_atoms(atoms: &mut [CharAtom]) {
    atoms.sort_by(|a, b| {
        a.support
            .center()
            .cmp(b.support.center())
            .then_with(|| a.support.radius_log().cmp(&b.support.radius_log()))
    });
}

/// Recursively resolves all atoms inside `ball` into disjoint supports.
/// Atoms sitting exactly on `ball` are merged per canonical frequency; if
/// more than one frequency survives, or finer atoms exist below, everything
/// on `ball` is split one level down and resolution continues per child.
fn resolve(
    ball: &Ball,
    atoms: Vec<CharAtom>,
    budget: &mut usize,
) -> Result<Vec<CharAtom>, FuncError> {
    let (here, deeper): (Vec<CharAtom>, Vec<CharAtom>) = atoms
        .into_iter()
        .partition(|a| a.support.relation(ball) == BallRelation::Equal);
    let merged = merge_on_same_ball(here);
    if deeper.is_empty() && merged.len() <= 1 {
        return Ok(merged);
    }
    let children = ball.split();
    let new_atoms = merged.len() * children.len();
    if *budget < new_atoms {
        return Err(FuncError::RefinementBudgetExceeded);
    }
    *budget -= new_atoms;

    let mut out = Vec::new();
    for child in &children {
        let mut sub: Vec<CharAtom> = deeper
            .iter()
            .filter(|a| {
                matches!(
                    a.support.relation(child),
                    BallRelation::Equal | BallRelation::FirstInsideSecond
                )
            })
            .cloned()
            .collect();
        for m in &merged {
            sub.push(CharAtom::new(m.amplitude, m.frequency.clone(), child.clone()));
        }
        if sub.is_empty() {
            continue;
        }
        out.extend(resolve(child, sub, budget)?);
    }
    Ok(out)
}

/// Merges atoms that share one support ball: after canonicalization,
/// equivalent frequencies have identical fields, so grouping is structural.
fn merge_on_same_ball(mut atoms: Vec<CharAtom>) -> Vec<CharAtom> {
    atoms.sort_by(|a, b| a.frequency.cmp(&b.frequency));
    let mut out: Vec<CharAtom> = Vec::new();
    for atom in atoms {
        match out.last_mut() {
            Some(last) if last.frequency == atom.frequency => {
                last.amplitude += atom.amplitude;
            }
            _ => out.push(atom),
        }
    }
    out.retain(|a| a.amplitude.norm() >= AMPLITUDE_DROP_EPS);
    out
}

fn collect_cells(support: &Ball, cell_log: i64, cells: &mut BTreeSet<Ball>) {
    if support.radius_log() <= cell_log {
        cells.insert(support.clone());
        return;
    }
    for child in support.split() {
        collect_cells(&child, cell_log, cells);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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

    /// The Kozyrev generator chi_p(k/p * x) on Z_p, used across the tests.
    fn theta(prime: u64, k: i64) -> LCFunction {
        LCFunction::single(CharAtom::new(
            c(1.0, 0.0),
            q(prime, k, -1),
            Ball::integers(p(prime)),
        ))
    }

    #[test]
    fn single_atom_is_unchanged() {
        let f = LCFunction::new(
            p(2),
            vec![CharAtom::new(c(0.5, 0.0), q(2, 1, -1), Ball::integers(p(2)))],
        )
        .unwrap();
        assert_eq!(f.atoms().len(), 1);
        assert_eq!(f.atoms()[0].amplitude(), c(0.5, 0.0));
    }

    #[test]
    fn duplicate_atom_doubles_amplitude() {
        let atom = CharAtom::new(c(1.0, 0.0), q(2, 1, -1), Ball::integers(p(2)));
        let f = LCFunction::new(p(2), vec![atom.clone(), atom]).unwrap();
        assert_eq!(f.atoms().len(), 1);
        assert_eq!(f.atoms()[0].amplitude(), c(2.0, 0.0));
    }

    #[test]
    fn canonicalization_preserves_pointwise_values() {
        // 1_{Z_2} - chi_2(x/2) 1_{Z_2}: distinct frequencies on one ball.
        let raw = vec![
            CharAtom::indicator(Ball::integers(p(2))),
            CharAtom::new(c(-1.0, 0.0), q(2, 1, -1), Ball::integers(p(2))),
        ];
        let f = LCFunction::new(p(2), raw.clone()).unwrap();
        // Supports must now be pairwise disjoint.
        for (i, a) in f.atoms().iter().enumerate() {
            for b in &f.atoms()[i + 1..] {
                assert_eq!(a.support().relation(b.support()), BallRelation::Disjoint);
            }
        }
        for x in [q(2, 0, 0), q(2, 1, 0), q(2, 2, 0), q(2, 3, 0)] {
            let naive: Complex64 = raw.iter().map(|a| a.evaluate(&x)).sum();
            let canonical = f.evaluate(&x);
            assert!((naive - canonical).norm() < 1e-12, "at {x}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let one = LCFunction::indicator(Ball::integers(p(3)));
        assert_eq!(one.evaluate(&q(3, 0, 0)), c(1.0, 0.0));
        // theta_1 at x = 1 over p = 2: chi_2(1/2) = -1.
        let f = theta(2, 1);
        let v = f.evaluate(&q(2, 1, 0));
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
        // Outside every support.
        assert_eq!(f.evaluate(&q(2, 1, -1)), c(0.0, 0.0));
    }

    #[test]
    fn inner_product_examples() {
        for prime in [2u64, 3, 5] {
            let f = theta(prime, 1);
            let ip = f.inner_product(&f);
            assert!((ip - c(1.0, 0.0)).norm() < 1e-15);
        }
        // Distinct Kozyrev generators are orthogonal.
        let f = theta(3, 1);
        let g = theta(3, 2);
        assert!(f.inner_product(&g).norm() < 1e-15);
        let quad = f.quadrature_inner_product(&g, 2).unwrap();
        assert!(quad.norm() < 1e-13);
        // Wavelets have zero mean.
        for prime in [2u64, 3, 5] {
            let one = LCFunction::indicator(Ball::integers(p(prime)));
            for k in 1..prime as i64 {
                let f = theta(prime, k);
                assert!(f.inner_product(&one).norm() < 1e-15);
                let quad = f.quadrature_inner_product(&one, 2).unwrap();
                assert!(quad.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn quadrature_basics() {
        let one = LCFunction::indicator(Ball::integers(p(5)));
        for depth in 1..=3 {
            let v = one.quadrature_inner_product(&one, depth).unwrap();
            assert!((v - c(1.0, 0.0)).norm() < 1e-13);
        }
        // Disjoint supports integrate to zero.
        let here = LCFunction::indicator(Ball::new(q(2, 0, 0), -1));
        let there = LCFunction::indicator(Ball::new(q(2, 1, 0), -1));
        let v = here.quadrature_inner_product(&there, 3).unwrap();
        assert_eq!(v, c(0.0, 0.0));
        // Too-coarse depth is an error.
        let f = theta(2, 1);
        match f.quadrature_inner_product(&f, 0) {
            Err(FuncError::DepthTooCoarse { required, .. }) => assert_eq!(required, 1),
            other => panic!("expected DepthTooCoarse, got {other:?}"),
        }
    }

    #[test]
    fn dilate_translate_identity_and_example() {
        let f = theta(2, 1);
        let same = f.dilate_translate(0, &q(2, 0, 0));
        assert_eq!(f, same);

        // (j, a) = (1, 0): support 2Z_2, frequency 1/4, amplitude sqrt(2).
        let g = f.dilate_translate(1, &q(2, 0, 0));
        assert_eq!(g.atoms().len(), 1);
        let atom = &g.atoms()[0];
        assert_eq!(atom.support(), &Ball::new(q(2, 0, 0), -1));
        assert_eq!(atom.frequency(), &q(2, 1, -2));
        assert!((atom.amplitude() - c(2.0f64.sqrt(), 0.0)).norm() < 1e-15);
        // Unit norm against the quadrature oracle.
        let depth = g.required_quadrature_depth();
        let n = g.quadrature_inner_product(&g, depth).unwrap();
        assert!((n - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dilate_translate_is_unitary() {
        let cases = [
            (2u64, 1i64, q(2, 1, -2)),
            (2, -2, q(2, 3, -1)),
            (3, 2, q(3, 2, -1)),
            (5, -1, q(5, 4, -2)),
        ];
        for (prime, j, a) in cases {
            let f = LCFunction::new(
                p(prime),
                vec![
                    CharAtom::new(c(0.7, -0.2), q(prime, 1, -1), Ball::integers(p(prime))),
                    CharAtom::new(c(0.1, 0.4), q(prime, 1, 0), Ball::new(q(prime, 1, -1), -1)),
                ],
            )
            .unwrap();
            let g = f.dilate_translate(j, &a);
            assert!((f.norm_sq() - g.norm_sq()).abs() < 1e-12);
        }
    }

    #[test]
    fn dilate_translate_composes_pointwise() {
        // Applying (j1, a1) then (j2, a2) equals evaluating the composite
        // x -> p^((j1+j2)/2) f(p^(-j1-j2) x - p^(-j1) a2 - a1) directly.
        let f = theta(3, 2);
        let (j1, j2) = (1i64, -1i64);
        let a1 = q(3, 1, -1);
        let a2 = q(3, 2, -1);
        let step = f.dilate_translate(j1, &a1).dilate_translate(j2, &a2);
        let gain = p(3).pow_f64(j1 + j2).sqrt();
        let samples: Vec<PAdicRational> = (0..50).map(|n| q(3, n, -2)).collect();
        for x in samples {
            let inner = x.mul_pow_p(-j1 - j2).sub(&a2.mul_pow_p(-j1)).sub(&a1);
            let direct = f.evaluate(&inner) * gain;
            let got = step.evaluate(&x);
            assert!((direct - got).norm() < 1e-12, "at {x}");
        }
    }

    #[test]
    fn projection_is_exact_truncation() {
        let region = Ball::integers(p(2));
        // An atom fully outside projects to zero.
        let outside = theta(2, 1).dilate_translate(-1, &q(2, 1, -2));
        let projected = outside.project(&region, -3);
        assert!(projected.is_zero());
        // An atom inside is untouched.
        let inside = theta(2, 1);
        assert_eq!(inside.project(&region, -3), inside);
        // A fine oscillation averages away.
        let fine = LCFunction::single(CharAtom::new(
            c(1.0, 0.0),
            q(2, 1, -4),
            Ball::integers(p(2)),
        ));
        assert!(fine.project(&region, -3).is_zero());
        // A coarse indicator over a larger ball truncates to the region.
        let wide = LCFunction::indicator(Ball::new(q(2, 0, 0), 2));
        let cut = wide.project(&region, -3);
        assert_eq!(cut, LCFunction::indicator(region));
    }

    #[test]
    fn json_round_trip() {
        let f = LCFunction::new(
            p(2),
            vec![
                CharAtom::new(c(0.25, -1.5), q(2, 3, -2), Ball::new(q(2, 1, 0), -1)),
                CharAtom::new(c(1.0, 0.0), q(2, 0, 0), Ball::new(q(2, 0, 0), -1)),
            ],
        )
        .unwrap();
        let text = f.to_json();
        let back = LCFunction::from_json(p(2), &text).unwrap();
        assert_eq!(f, back);
        let empty = LCFunction::zero(p(3));
        assert_eq!(
            LCFunction::from_json(p(3), &empty.to_json()).unwrap(),
            empty
        );
    }

    #[test]
    fn refinement_budget_is_enforced() {
        // Two atoms whose frequencies only merge 25 levels down on p = 5
        // would need ~5^25 cells.
        let a = CharAtom::new(c(1.0, 0.0), q(5, 1, -25), Ball::integers(p(5)));
        let b = CharAtom::indicator(Ball::integers(p(5)));
        match LCFunction::new(p(5), vec![a, b]) {
            Err(FuncError::RefinementBudgetExceeded) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
