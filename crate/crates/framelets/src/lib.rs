//! Exact p-adic wavelet frame systems on finite-dimensional test spaces.
//!
//! The crate builds up in four layers:
//!
//! - [`padic`]: exact arithmetic on `Z[1/p]`, the p-adic norm and fractional
//!   part, additive character phases, and ultrametric ball geometry with
//!   Haar measure.
//! - [`funcspace`]: locally constant compactly supported functions as finite
//!   sums of character atoms, with closed-form inner products, an
//!   independent quadrature oracle, and the unitary dilation-translation
//!   action.
//! - [`wavelets`]: Kozyrev and Khrennikov-Shelkovich generator families and
//!   finite dilation-translation systems over truncated index sets.
//! - [`frame`]: frame operators, optimal bounds through Hermitian
//!   eigenvalues, canonical duals, reconstruction, and one executable check
//!   per frame theorem, plus a seeded randomized battery.
//!
//! All p-adic geometry is exact (arbitrary-precision integers); only complex
//! amplitudes are floating point, since dilation scales by `p^(j/2)`.

pub mod funcspace;
pub mod linalg;
pub mod padic;
pub mod wavelets;

pub mod frame;

pub use funcspace::{CharAtom, FuncError, LCFunction};
pub use linalg::{hermitian_eigensystem, CMatrix, Eigensystem, LinalgError};
pub use padic::{Ball, BallRelation, PAdicRational, PadicError, Prime, UnitPhase};
pub use wavelets::{FrameFamily, GeneratorSet, IndexSet, SystemKind, WaveletError};

pub use frame::{
    besselet_bound, canonical_dual, coefficients, frame_bounds, frame_bounds_with,
    is_frame_via_injectivity, reconstruct, ContainmentMode, CoordFamily, FrameBounds, FrameError,
    HermitianMatrix, TestSpace, Tolerances,
};
