// ================================================================================
// (3^n, 3^n)-isogeny chains: glue, step, split
// ================================================================================

//! Chains of (3,3)-isogenies between abelian surfaces, starting from a product
//! of elliptic curves.
//!
//! A chain instance supplies two curves `E1`, `E2` in short Weierstrass form
//! and a pair of points `H1`, `H2` of order `3^(n+1)` on `E1 x E2`.  The
//! actual chain kernel is `<3 H1, 3 H2>`; the extra factor of 3 provides the
//! nine-torsion points above each intermediate kernel that the scaling
//! recovery consumes.  The run proceeds in three phases:
//!
//! 1. **Glue.**  Both curves are moved into the Hesse pencil through the
//!    3-torsion bases `[3^n] H_i`, and the product is embedded with the Segre
//!    map.  All `3^m`-multiples of the four tracked pairs `H1`, `H2`,
//!    `H1 + H2`, `H1 - H2` are prepared here with plain elliptic arithmetic —
//!    after this point no scalar multiplication is available (or needed).
//! 2. **Step.**  Each of the `n` steps builds a (3,3)-isogeny from the
//!    current rungs of the four ladders, records the kernel normalization,
//!    the recovered scaling and the codomain parameters, and pushes every
//!    still-needed rung (plus a few auxiliary points) through the isogeny.
//!    Homomorphy keeps the ladders aligned: the image of `[3^m] H_i` is the
//!    `[3^m]`-multiple of the image of `H_i`.
//! 3. **Split.**  If the final `h` sits on the singular locus of the
//!    Burkhardt quartic, the surface is a transformed product; the closing
//!    transform and the two recovered pencil parameters are reported.  A
//!    nonsingular endpoint is reported as irreducible, not as an error.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::fp2::OpCounter;
use crate::hesse_curve::from_weierstrass;
use crate::isogeny::{build_isogeny, KernelSpec};
use crate::proj::{P1, P4, P8};
use crate::segre::{to_product_form, ProductSurface};
use crate::surface::{HesseSurface, SurfaceTransform};
use crate::weierstrass::{Curve, Point};

// ================================================================================
// Instances and outcomes
// ================================================================================

/// A (3^n, 3^n)-isogeny chain problem on a product of two elliptic curves.
#[derive(Clone, Debug)]
pub struct ChainInstance {
    pub e1: Curve,
    pub e2: Curve,
    /// Number of (3,3)-steps.
    pub n: usize,
    /// Kernel generators upstairs: pairs on `E1 x E2` of order `3^(n+1)`.
    pub h1: (Point, Point),
    pub h2: (Point, Point),
    /// Explicit `3^(n+1)`-torsion bases for `E1` and `E2`.  When absent the
    /// embeddings take their 3-torsion from the kernel components, which
    /// requires both projections of the kernel to be full.
    pub basis: Option<ChainBasis>,
}

/// Explicit torsion bases accompanying an instance.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    pub e1: (Point, Point),
    pub e2: (Point, Point),
}

/// The record kept for one chain step.
#[derive(Clone, Debug)]
pub struct StepRecord {
    /// The kernel normalization `S_K` applied before the core map.
    pub transform: SurfaceTransform,
    /// Parameters of the transformed domain.
    pub d_transformed: P4,
    pub h_transformed: P4,
    /// The recovered scaling vector.
    pub lambda: P4,
    /// Codomain parameters.
    pub d: P4,
    pub h: P4,
}

/// The closing report when the final polarization splits.
#[derive(Clone, Debug)]
pub struct SplitRecord {
    /// The automorphism word moving the endpoint onto the product form.
    pub transform: SurfaceTransform,
    /// Parameters after that move.
    pub d_transformed: P4,
    pub h_transformed: P4,
    /// Pencil parameters of the two factors, in quotient order.
    pub factors: (P1, P1),
}

/// Everything produced by a chain run.
#[derive(Clone, Debug)]
pub struct ChainOutcome {
    /// The glued product surface the chain starts on.
    pub start: HesseSurface,
    pub steps: Vec<StepRecord>,
    /// The surface after the last step.
    pub end: HesseSurface,
    /// Present when the endpoint carries a (transformed) product polarization.
    pub split: Option<SplitRecord>,
    /// Field operations over all scaling recoveries and point pushes.
    pub ops: OpCounter,
}

// ================================================================================
// Running a chain
// ================================================================================

/// Glues, runs `n` (3,3)-steps, and splits if the endpoint allows it.
///
/// The randomness only feeds embedding validation and auxiliary off-torsion
/// points; every reported parameter is deterministic in the instance.  A
/// mid-chain extra-automorphism abort is reported with its 1-based step
/// index.
pub fn run_chain(instance: &ChainInstance, rng: &mut impl RngCore) -> Result<ChainOutcome> {
    let e1 = &instance.e1;
    let e2 = &instance.e2;
    if e1.params() != e2.params() {
        return Err(Error::InvalidInstance(
            "the two curves live over different fields".into(),
        ));
    }
    let n = instance.n;
    if n >= 64 {
        return Err(Error::InvalidInstance("chain length out of range".into()));
    }
    validate_kernel_orders(instance)?;

    // Hesse embeddings through the 3-torsion bases [3^n] H_i.  The E2 basis
    // crosses the kernel generators: its first element comes from H2, so that
    // each embedding sees the "own" generator of its curve first.
    let cofactor = 3u128.pow(n as u32);
    let (a1, b1, a2, b2) = match &instance.basis {
        Some(basis) => (
            e1.scalar_mul(cofactor, &basis.e1.0),
            e1.scalar_mul(cofactor, &basis.e1.1),
            e2.scalar_mul(cofactor, &basis.e2.0),
            e2.scalar_mul(cofactor, &basis.e2.1),
        ),
        None => (
            e1.scalar_mul(cofactor, &instance.h1.0),
            e1.scalar_mul(cofactor, &instance.h2.0),
            e2.scalar_mul(cofactor, &instance.h2.1),
            e2.scalar_mul(cofactor, &instance.h1.1),
        ),
    };
    let f1 = from_weierstrass(e1, &a1, &b1, rng)?;
    let f2 = from_weierstrass(e2, &a2, &b2, rng)?;
    let product = ProductSurface::new(f2.curve().clone(), f1.curve().clone())?;
    let embed_pair =
        |x1: &Point, x2: &Point| -> Result<P8> { product.embed(&f2.map(x2), &f1.map(x1)) };

    // Ladders: ladders[i][m] is the embedding of [3^m] T_i, where T_1 = H1,
    // T_2 = H2, T_3 = H1 + H2, T_4 = H1 - H2.  Step k consumes rung n - k as
    // its nine-torsion input and rung n - k + 1 as the kernel itself.
    let tracked = [
        (instance.h1.0, instance.h1.1),
        (instance.h2.0, instance.h2.1),
        (
            e1.add(&instance.h1.0, &instance.h2.0),
            e2.add(&instance.h1.1, &instance.h2.1),
        ),
        (
            e1.sub(&instance.h1.0, &instance.h2.0),
            e2.sub(&instance.h1.1, &instance.h2.1),
        ),
    ];
    let mut ladders: Vec<Vec<P8>> = Vec::with_capacity(4);
    for (x1, x2) in &tracked {
        let mut rungs = Vec::with_capacity(n + 1);
        let (mut y1, mut y2) = (*x1, *x2);
        for _ in 0..=n {
            rungs.push(embed_pair(&y1, &y2)?);
            y1 = e1.scalar_mul(3, &y1);
            y2 = e2.scalar_mul(3, &y2);
        }
        ladders.push(rungs);
    }

    // Off-torsion auxiliaries, pushed alongside the ladders; they anchor the
    // codomain `d` on steps whose neutral relation degenerates.
    let mut aux_points = Vec::with_capacity(AUX_COUNT);
    for _ in 0..AUX_COUNT {
        aux_points.push(embed_pair(&e1.random_point(rng), &e2.random_point(rng))?);
    }

    let start = product.surface().clone();
    let mut surface = start.clone();
    let mut steps = Vec::with_capacity(n);
    let mut ops = OpCounter::new();
    for k in 1..=n {
        let lvl = n - k;
        let u = surface.decompose_torsion(&ladders[0][lvl + 1])?;
        let v = surface.decompose_torsion(&ladders[1][lvl + 1])?;
        let mut spec = KernelSpec::new(ladders[0][lvl], ladders[1][lvl], u, v)?
            .with_sums(ladders[2][lvl], ladders[3][lvl]);
        for aux in &aux_points {
            spec = spec.with_aux(*aux);
        }
        let phi = match build_isogeny(&surface, &spec) {
            Ok(phi) => phi,
            Err(Error::ExtraAutomorphism { .. }) => {
                return Err(Error::ExtraAutomorphism { step: k })
            }
            Err(e) => return Err(e),
        };
        ops.add(phi.build_ops());
        steps.push(StepRecord {
            transform: phi.pre_transform().clone(),
            d_transformed: *phi.transformed().d(),
            h_transformed: *phi.transformed().h(),
            lambda: *phi.lambda(),
            d: *phi.codomain().d(),
            h: *phi.codomain().h(),
        });
        for ladder in &mut ladders {
            for rung in ladder.iter_mut().take(lvl + 1) {
                *rung = phi.evaluate_counted(rung, &mut ops)?;
            }
        }
        for aux in &mut aux_points {
            *aux = phi.evaluate_counted(aux, &mut ops)?;
        }
        surface = phi.codomain().clone();
    }

    let end = surface;
    let split = match to_product_form(&end) {
        Ok((transform, parts)) => {
            let moved = transform.apply_surface(&end);
            let (first, second) = parts.factors();
            Some(SplitRecord {
                transform,
                d_transformed: *moved.d(),
                h_transformed: *moved.h(),
                factors: (*first.d(), *second.d()),
            })
        }
        Err(Error::NotAProduct) => None,
        Err(e) => return Err(e),
    };
    Ok(ChainOutcome {
        start,
        steps,
        end,
        split,
        ops,
    })
}

/// Auxiliary points carried through the chain for `d`-fitting.
const AUX_COUNT: usize = 3;

/// Both kernel generators must be killed by `3^(n+1)` and survive `3^n`.
fn validate_kernel_orders(instance: &ChainInstance) -> Result<()> {
    let order = 3u128
        .checked_pow(instance.n as u32 + 1)
        .ok_or_else(|| Error::InvalidInstance("chain length out of range".into()))?;
    for (name, (x1, x2)) in [("H1", &instance.h1), ("H2", &instance.h2)] {
        if !instance.e1.contains(x1) || !instance.e2.contains(x2) {
            return Err(Error::InvalidInstance(format!(
                "kernel point {name} does not lie on the product"
            )));
        }
        if !instance.e1.scalar_mul(order, x1).is_infinity()
            || !instance.e2.scalar_mul(order, x2).is_infinity()
        {
            return Err(Error::InvalidInstance(format!(
                "kernel point {name} is not killed by 3^(n+1)"
            )));
        }
        if instance.e1.scalar_mul(order / 3, x1).is_infinity()
            && instance.e2.scalar_mul(order / 3, x2).is_infinity()
        {
            return Err(Error::InvalidInstance(format!(
                "kernel point {name} does not have exact order 3^(n+1)"
            )));
        }
    }
    Ok(())
}

// ================================================================================
// Tests
// ================================================================================
