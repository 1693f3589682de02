//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by validated constructors and the isogeny machinery.
///
/// Programmer errors (mixing elements of different fields in arithmetic
/// operators) panic instead; everything that depends on runtime data returns
/// one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Modulus rejected: not prime, not congruent to 2 mod 3, or too small.
    #[error("invalid field modulus {0}: need a prime p > 3 with p = 2 mod 3")]
    InvalidModulus(u64),

    /// Inversion or division hit zero.
    #[error("division by zero in Fp2")]
    DivisionByZero,

    /// A projective point had all coordinates zero.
    #[error("all projective coordinates are zero")]
    ZeroVector,

    /// A point failed its curve or surface membership check.
    #[error("point does not lie on the expected variety")]
    NotOnVariety,

    /// A Weierstrass curve was singular.
    #[error("singular Weierstrass curve (4a^3 + 27b^2 = 0)")]
    SingularCurve,

    /// A Hesse parameter hit a degenerate member of the pencil.
    #[error("degenerate Hesse parameter d = ({0}, {1})")]
    DegenerateHesseParameter(String, String),

    /// Point sampling or torsion-basis search exhausted its retry budget.
    #[error("sampling failed after {0} attempts")]
    SamplingFailed(u32),

    /// Requested torsion order does not divide the group exponent.
    #[error("torsion order {0} does not divide p + 1 = {1}")]
    BadTorsionOrder(u64, u64),

    /// A claimed torsion basis failed its order or pairing certification.
    #[error("invalid torsion basis: {0}")]
    InvalidBasis(&'static str),

    /// Weil pairing ran out of auxiliary points.
    #[error("Weil pairing failed to find a usable auxiliary point")]
    PairingDegenerate,

    /// A Burkhardt point was rejected (not on the quartic, or wrong kind).
    #[error("point is not on the Burkhardt quartic")]
    NotOnQuartic,

    /// Automorphism-word search exceeded its depth bound.
    #[error("automorphism word search exceeded depth {0}")]
    WordSearchExhausted(u32),

    /// Surface parameters failed a joint validity check.
    #[error("inconsistent surface parameters: {0}")]
    InvalidSurface(&'static str),

    /// A point could not be matched against the 81 torsion translates.
    #[error("point is not a translate of the theta null point")]
    NotATorsionTranslate,

    /// The dual parameter h is not singular, so the surface does not split.
    #[error("surface is not reducible: h is a smooth point of the quartic")]
    NotAProduct,

    /// Rank-1 factorization of a product point failed.
    #[error("point does not factor through the Segre embedding")]
    NotASegrePoint,

    /// A kernel specification failed validation.
    #[error("invalid kernel: {0}")]
    InvalidKernel(&'static str),

    /// Codomain neutral gives no information on d and no sample points were
    /// supplied to fit it.
    #[error("degenerate codomain neutral: d must be fitted from sample points")]
    DegenerateNeutral,

    /// The h-parameter kernel was not one-dimensional.
    #[error("codomain h is not uniquely determined (non-generic Hessian kernel)")]
    AmbiguousDual,

    /// Scaling recovery ran out of usable relations.
    #[error("scaling recovery failed: {0}")]
    ScalingUnderdetermined(&'static str),

    /// The codomain carries an extra automorphism; the exceptional scaling
    /// relations cannot pin lambda. Chains abort with this error.
    #[error("codomain has an extra automorphism; aborting (step {step})")]
    ExtraAutomorphism { step: usize },

    /// A dual-isogeny scaling could not be recovered.
    #[error("degenerate dual isogeny: {0}")]
    DegenerateDual(&'static str),

    /// Input JSON parsed but described an invalid object.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// Input JSON failed to parse at all.
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
}

pub type Result<T> = std::result::Result<T, Error>;
