//! Generator families and finite dilation-translation systems.
//!
//! The Kozyrev generators are `theta_k(x) = chi_p(k/p * x) 1_{Z_p}(x)` for
//! `k = 1..p-1`; the Khrennikov-Shelkovich generators of order m use one
//! frequency per fraction of p-adic norm `p^m`. Families materialize
//! `p^(j/2) f^(l)(p^(-j) x - a)` over a truncated index set: scales in
//! `[j_min, j_max]` and translations of norm at most `p^m`.

use num_bigint::BigInt;
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use crate::funcspace::{CharAtom, LCFunction};
use crate::linalg::CMatrix;
use crate::padic::{Ball, PAdicRational, Prime};

#[derive(Debug, Error, PartialEq, Clone)]
pub enum WaveletError {
    #[error("Khrennikov-Shelkovich order must be at least 1, got {0}")]
    InvalidOrder(u32),
    #[error("generator label {0} outside 1..={1}")]
    GeneratorLabel(usize, usize),
    #[error("index set too large: p^{0} does not fit the enumeration")]
    EnumerationOverflow(u32),
}

fn checked_power(p: u64, m: u32) -> Result<u64, WaveletError> {
    p.checked_pow(m).ok_or(WaveletError::EnumerationOverflow(m))
}

/// Fractions `s` with `{s}_p = s` and `|s|_p = p^m`, sorted ascending.
///
/// These are exactly `n * p^(-m)` for `1 <= n < p^m` with `p` not dividing
/// `n`; there are `(p-1) * p^(m-1)` of them.
pub fn fractions_of_norm(prime: Prime, m: u32) -> Result<Vec<PAdicRational>, WaveletError> {
    if m == 0 {
        return Err(WaveletError::InvalidOrder(0));
    }
    let p = prime.get();
    let total = checked_power(p, m)?;
    let mut out = Vec::with_capacity((total - total / p) as usize);
    for n in 1..total {
        if n % p != 0 {
            out.push(PAdicRational::new(prime, BigInt::from(n), -(m as i64)));
        }
    }
    Ok(out)
}

/// The truncated translation set: all fractions of p-adic norm at most
/// `p^m`, i.e. `n * p^(-m)` for `0 <= n < p^m`, sorted ascending with 0
/// first. Depth 0 gives just `{0}`.
pub fn translations(prime: Prime, m: u32) -> Result<Vec<PAdicRational>, WaveletError> {
    let total = checked_power(prime.get(), m)?;
    Ok((0..total)
        .map(|n| PAdicRational::new(prime, BigInt::from(n), -(m as i64)))
        .collect())
}

/// Which generator family a [`GeneratorSet`] was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemKind {
    Kozyrev,
    KhrennikovShelkovich { order: u32 },
    Custom,
}

impl SystemKind {
    pub fn label(&self) -> String {
        match self {
            SystemKind::Kozyrev => "kozyrev".to_string(),
            SystemKind::KhrennikovShelkovich { order } => format!("ks:{order}"),
            SystemKind::Custom => "custom".to_string(),
        }
    }
}

/// An ordered list of generator functions, indexed `l = 1..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    prime: Prime,
    kind: SystemKind,
    generators: Vec<LCFunction>,
}

impl GeneratorSet {
    /// The p-1 Kozyrev generators `chi_p(k/p * x) 1_{Z_p}(x)`.
    pub fn kozyrev(prime: Prime) -> Self {
        let unit = Ball::integers(prime);
        let generators = (1..prime.get())
            .map(|k| {
                let freq = PAdicRational::new(prime, BigInt::from(k), -1);
                LCFunction::single(CharAtom::new(Complex64::new(1.0, 0.0), freq, unit.clone()))
            })
            .collect();
        GeneratorSet {
            prime,
            kind: SystemKind::Kozyrev,
            generators,
        }
    }

    /// The `(p-1) p^(m-1)` Khrennikov-Shelkovich generators of order `m`:
    /// `chi_p(s x) 1_{Z_p}(x)` for each fraction `s` of norm `p^m`.
    pub fn khrennikov_shelkovich(prime: Prime, order: u32) -> Result<Self, WaveletError> {
        let unit = Ball::integers(prime);
        let generators = fractions_of_norm(prime, order)?
            .into_iter()
            .map(|s| LCFunction::single(CharAtom::new(Complex64::new(1.0, 0.0), s, unit.clone())))
            .collect();
        Ok(GeneratorSet {
            prime,
            kind: SystemKind::KhrennikovShelkovich { order },
            generators,
        })
    }

    pub fn custom(prime: Prime, generators: Vec<LCFunction>) -> Self {
        GeneratorSet {
            prime,
            kind: SystemKind::Custom,
            generators,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    /// The order L of the set.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[LCFunction] {
        &self.generators
    }
}

/// A finite truncation of the full index set `(l, j, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    pub j_min: i64,
    pub j_max: i64,
    /// Translations range over fractions of norm at most `p^translation_depth`.
    pub translation_depth: u32,
    /// 1-based generator labels to include.
    pub labels: Vec<usize>,
}

impl IndexSet {
    /// All generators over the given scale range and translation depth.
    pub fn full(generator_count: usize, j_min: i64, j_max: i64, translation_depth: u32) -> Self {
        IndexSet {
            j_min,
            j_max,
            translation_depth,
            labels: (1..=generator_count).collect(),
        }
    }
}

/// One indexed member `f^(l)_{j,a}` of a materialized family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEntry {
    /// 1-based generator label l.
    pub label: usize,
    /// Scale index j.
    pub scale: i64,
    /// Translation a.
    pub shift: PAdicRational,
    pub function: LCFunction,
}

/// An ordered finite family `{f^(l)_{j,a}}`, lexicographic in `(l, j, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFamily {
    prime: Prime,
    kind: SystemKind,
    j_min: i64,
    j_max: i64,
    translation_depth: u32,
    entries: Vec<FamilyEntry>,
}

impl FrameFamily {
    /// Materializes every `(l, j, a)` combination via dilation-translation.
    pub fn build(generators: &GeneratorSet, index: &IndexSet) -> Result<Self, WaveletError> {
        let count = generators.len();
        for &label in &index.labels {
            if label == 0 || label > count {
                return Err(WaveletError::GeneratorLabel(label, count));
            }
        }
        let shifts = translations(generators.prime(), index.translation_depth)?;
        let mut entries = Vec::new();
        for &label in &index.labels {
            let f = &generators.generators()[label - 1];
            for j in index.j_min..=index.j_max {
                for a in &shifts {
                    entries.push(FamilyEntry {
                        label,
                        scale: j,
                        shift: a.clone(),
                        function: f.dilate_translate(j, a),
                    });
                }
            }
        }
        Ok(FrameFamily {
            prime: generators.prime(),
            kind: generators.kind().clone(),
            j_min: index.j_min,
            j_max: index.j_max,
            translation_depth: index.translation_depth,
            entries,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    pub fn functions(&self) -> impl Iterator<Item = &LCFunction> {
        self.entries.iter().map(|e| &e.function)
    }

    /// The Gram matrix `<f_i, f_j>` of the family members.
    pub fn gram_matrix(&self) -> CMatrix {
        let n = self.entries.len();
        let mut g = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(
                    i,
                    j,
                    self.entries[i].function.inner_product(&self.entries[j].function),
                );
            }
        }
        g
    }

    /// Manifest JSON: prime, system kind, truncation, and the index list.
    pub fn manifest_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| json!([e.label, e.scale, e.shift.to_string()]))
            .collect();
        json!({
            "p": self.prime.get(),
            "kind": self.kind.label(),
            "m": self.translation_depth,
            "jRange": [self.j_min, self.j_max],
            "count": self.entries.len(),
            "entries": entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicError;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn q(prime: u64, m: i64, e: i64) -> PAdicRational {
        PAdicRational::new(p(prime), BigInt::from(m), e)
    }

    /// Brute-force digit enumeration of the fractions with leading digit at
    /// position -m nonzero, independent of the arithmetic shortcut.
    fn fractions_by_digits(prime: u64, m: u32) -> Vec<PAdicRational> {
        let mut tuples: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..m {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..prime).map(move |d| {
                        let mut t = t.clone();
                        t.push(d);
                        t
                    })
                })
                .collect();
        }
        let mut out: Vec<PAdicRational> = tuples
            .into_iter()
            .filter(|digits| digits[0] != 0) // digit at position -m
            .map(|digits| {
                let mut value = PAdicRational::zero(p(prime));
                for (i, &d) in digits.iter().enumerate() {
                    let position = -(m as i64) + i as i64;
                    value = value.add(&q(prime, d as i64, position));
                }
                value
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn kozyrev_generator_frequencies() {
        let gen = GeneratorSet::kozyrev(p(2));
        assert_eq!(gen.len(), 1);
        assert_eq!(gen.generators()[0].atoms()[0].frequency(), &q(2, 1, -1));

        let gen = GeneratorSet::kozyrev(p(3));
        assert_eq!(gen.len(), 2);
        let freqs: Vec<_> = gen
            .generators()
            .iter()
            .map(|g| g.atoms()[0].frequency().clone())
            .collect();
        assert_eq!(freqs, vec![q(3, 1, -1), q(3, 2, -1)]);
        for g in gen.generators() {
            assert!((g.norm_sq() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ks_order_one_matches_kozyrev() {
        for prime in [2u64, 3, 5] {
            let ks = GeneratorSet::khrennikov_shelkovich(p(prime), 1).unwrap();
            let kz = GeneratorSet::kozyrev(p(prime));
            assert_eq!(ks.generators(), kz.generators());
        }
    }

    #[test]
    fn ks_enumeration_matches_digit_oracle() {
        assert_eq!(
            fractions_of_norm(p(2), 2).unwrap(),
            vec![q(2, 1, -2), q(2, 3, -2)]
        );
        assert_eq!(GeneratorSet::khrennikov_shelkovich(p(3), 2).unwrap().len(), 6);
        for prime in [2u64, 3, 5] {
            for m in 1..=3u32 {
                let fast = fractions_of_norm(p(prime), m).unwrap();
                let slow = fractions_by_digits(prime, m);
                assert_eq!(fast, slow, "p={prime} m={m}");
                let expected = (prime - 1) * prime.pow(m - 1);
                assert_eq!(fast.len() as u64, expected);
            }
        }
        assert_eq!(
            GeneratorSet::khrennikov_shelkovich(p(3), 0),
            Err(WaveletError::InvalidOrder(0))
        );
    }

    #[test]
    fn translation_enumeration() {
        let zero_only = translations(p(5), 0).unwrap();
        assert_eq!(zero_only, vec![PAdicRational::zero(p(5))]);

        let t22 = translations(p(2), 2).unwrap();
        assert_eq!(
            t22,
            vec![q(2, 0, 0), q(2, 1, -2), q(2, 1, -1), q(2, 3, -2)]
        );
        let t31 = translations(p(3), 1).unwrap();
        assert_eq!(t31, vec![q(3, 0, 0), q(3, 1, -1), q(3, 2, -1)]);

        // Determinism and the count law |I_p^(m)| = p^m, against digit
        // enumeration (fractions of every norm up to p^m, plus zero).
        for prime in [2u64, 3, 5] {
            for m in 0..=3u32 {
                let fast = translations(p(prime), m).unwrap();
                assert_eq!(fast, translations(p(prime), m).unwrap());
                assert_eq!(fast.len() as u64, prime.pow(m));
                let mut slow = vec![PAdicRational::zero(p(prime))];
                for k in 1..=m {
                    slow.extend(fractions_by_digits(prime, k));
                }
                slow.sort();
                assert_eq!(fast, slow);
                assert!(fast[0].is_zero());
            }
        }
    }

    #[test]
    fn trivial_family_equals_generators() {
        let gen = GeneratorSet::kozyrev(p(3));
        let idx = IndexSet::full(gen.len(), 0, 0, 0);
        let family = FrameFamily::build(&gen, &idx).unwrap();
        assert_eq!(family.len(), 2);
        for (entry, generator) in family.entries().iter().zip(gen.generators()) {
            assert_eq!(&entry.function, generator);
        }
    }

    #[test]
    fn small_kozyrev_family_is_orthonormal() {
        let gen = GeneratorSet::kozyrev(p(2));
        let idx = IndexSet::full(gen.len(), -1, 0, 1);
        let family = FrameFamily::build(&gen, &idx).unwrap();
        assert_eq!(family.len(), 4);
        let gram = family.gram_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (gram.get(i, j) - Complex64::new(expect, 0.0)).norm() < 1e-10,
                    "entry ({i},{j}) = {}",
                    gram.get(i, j)
                );
            }
        }
    }

    #[test]
    fn family_ordering_and_manifest() {
        let gen = GeneratorSet::kozyrev(p(3));
        let idx = IndexSet::full(gen.len(), -1, 1, 1);
        let family = FrameFamily::build(&gen, &idx).unwrap();
        assert_eq!(family.len(), 2 * 3 * 3);
        // Lexicographic in (l, j, a).
        let keys: Vec<(usize, i64, PAdicRational)> = family
            .entries()
            .iter()
            .map(|e| (e.label, e.scale, e.shift.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let manifest = family.manifest_json();
        assert_eq!(manifest["p"], 3);
        assert_eq!(manifest["kind"], "kozyrev");
        assert_eq!(manifest["count"], 18);
        assert_eq!(manifest["entries"][0], json!([1, -1, "0*3^0"]));
    }

    #[test]
    fn build_rejects_bad_labels() {
        let gen = GeneratorSet::kozyrev(p(2));
        let mut idx = IndexSet::full(gen.len(), 0, 0, 0);
        idx.labels = vec![2];
        assert_eq!(
            FrameFamily::build(&gen, &idx),
            Err(WaveletError::GeneratorLabel(2, 1))
        );
    }

    #[test]
    fn enumeration_rejects_composite_base() {
        assert_eq!(Prime::new(6), Err(PadicError::NotPrime(6)));
    }
}
