//! Arithmetic for elliptic curves and principally polarized abelian surfaces in
//! level-3 Hesse form over `Fp2 = Fp[w]/(w^2 + w + 1)`, together with the
//! (3,3)-isogeny evaluated as `C_lambda ∘ M33 ∘ cube ∘ S_K` and chains of such
//! steps that glue two elliptic curves, walk through (3^n,3^n)-isogenies and
//! split the final surface back into a product.
//!
//! The main entry points are:
//!
//! * [`fp2`] — the quadratic field, cube roots of unity, operation counters;
//! * [`weierstrass`] — short Weierstrass curves used as the independent oracle
//!   (group law, Weil pairing, torsion bases, odd-degree Velu isogenies);
//! * [`hesse_curve`] — plane cubics `d1(X^3+Y^3+Z^3) = 3 d0 XYZ`, the
//!   chord-tangent group law, and the transport from Weierstrass form;
//! * [`burkhardt`] — the quartic threefold parametrizing the surfaces, its 45
//!   singular points and automorphism words;
//! * [`surface`] — abelian surfaces `A_{d,h}` embedded in P^8 by 13 equations,
//!   torsion translates, parameter maps `t -> d` and `t -> h`;
//! * [`segre`] — products of two Hesse curves under the Segre embedding,
//!   splitting points and moving a surface with singular `h` to product form;
//! * [`isogeny`] / [`chain`] — the (3,3)-isogeny itself, kernel normalization,
//!   scaling recovery (generic and exceptional), duals, tripling, and full
//!   gluing/splitting chains;
//! * [`cli`] — the `hesse33` binary's subcommands (`chain`, `glue`, `step`,
//!   `split`, `inspect`, `selftest`, `bench`) built on the JSON types in [`io`].
//!
//! Each capability has a runnable walk-through under `examples/`:
//!
//! ```text
//! cargo run --example field_arithmetic      quadratic field + operation counting
//! cargo run --example hesse_curves          Weierstrass -> Hesse transport, 3-isogenies
//! cargo run --example burkhardt_quartic     singular points, automorphism orbit
//! cargo run --example glue_and_split        Segre products, splitting a surface
//! cargo run --example isogeny_step          one (3,3)-step with scaling recovery
//! cargo run --example tripling              multiplication by 3 through the dual
//! cargo run --example isogeny_chain         a full (9,9) gluing/splitting walk
//! cargo run --example operation_counts      cost profile of the evaluation map
//! ```

pub mod burkhardt;
pub mod chain;
pub mod cli;
pub mod error;
pub mod fp2;
pub mod hesse_curve;
pub mod io;
pub mod isogeny;
pub mod linalg;
pub mod proj;
pub mod segre;
pub mod surface;
pub mod weierstrass;

pub use error::Error;
pub use fp2::{FieldParams, Fp2, OpCounter};
