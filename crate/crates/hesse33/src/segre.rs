// ================================================================================
// Products of Hesse elliptic curves under the Segre embedding
// ================================================================================

//! Gluing two Hesse elliptic curves into a product-polarized abelian surface
//! and splitting such a surface back into its factors.
//!
//! The Segre map `((x:y:z), (x':y':z')) -> (xx':xy':...:zz')` carries the
//! product `H_d x H_d'` onto the surface `A_{D,h}` with
//!
//! ```text
//! D = (d0 d0' : d0 d1' : d1 d0' : d1 d1' : d1 d1'),    h = (0:0:0:-1:1),
//! ```
//!
//! so products are exactly the surfaces whose quadric coefficient vector sits
//! at the distinguished singular point of the Burkhardt quartic.  Conversely,
//! any surface whose `h` is singular can be moved onto that point by a word in
//! the coordinate scalings and the Fourier transform; [`to_product_form`]
//! finds the word, transports the parameters, and reads the two factor curves
//! off the product pattern of the transported `d`.

use crate::burkhardt::{self, AutGen, AutWord};
use crate::error::{Error, Result};
use crate::fp2::FieldParams;
use crate::hesse_curve::HesseCurve;
use crate::proj::{P1, P2, P4, P8};
use crate::surface::{HesseSurface, SurfaceMove, SurfaceTransform};

// ================================================================================
// The coordinate map
// ================================================================================

/// The raw Segre map on coordinates, `x_{3i+j} = a_i * b_j` with the first
/// factor indexing rows.  No curve membership is checked; see
/// [`ProductSurface::embed`] for the checked version.
pub fn segre(p: &P2, q: &P2) -> P8 {
    let a = p.coords();
    let b = q.coords();
    let mut c = [a[0]; 9];
    for i in 0..3 {
        for j in 0..3 {
            c[3 * i + j] = a[i] * b[j];
        }
    }
    P8::new(c).expect("projective points have a nonzero coordinate")
}

// ================================================================================
// Product surfaces
// ================================================================================

/// A product of two Hesse elliptic curves carrying the product polarization,
/// together with its model as an abelian surface in `P^8`.
#[derive(Clone, Debug)]
pub struct ProductSurface {
    first: HesseCurve,
    second: HesseCurve,
    surface: HesseSurface,
}

impl ProductSurface {
    /// Builds the Segre image of `first x second` with its surface model.
    pub fn new(first: HesseCurve, second: HesseCurve) -> Result<Self> {
        let fp = first.params();
        if fp.p() != second.params().p() {
            return Err(Error::InvalidSurface(
                "product factors must share the field of definition",
            ));
        }
        let a = first.d().coords();
        let b = second.d().coords();
        let d = P4::new([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1], a[1] * b[1]])?;
        let h = HesseSurface::product_h(&fp);
        let t = P4::from_i64(&fp, [(0, 0), (0, 0), (0, 0), (1, 0), (-1, 0)]);
        let surface = HesseSurface::new(d, h, t)?;
        Ok(ProductSurface {
            first,
            second,
            surface,
        })
    }

    /// The first factor (indexing rows of the coordinate matrix).
    pub fn first(&self) -> &HesseCurve {
        &self.first
    }

    /// The second factor (indexing columns of the coordinate matrix).
    pub fn second(&self) -> &HesseCurve {
        &self.second
    }

    /// Both factors in row/column order.
    pub fn factors(&self) -> (&HesseCurve, &HesseCurve) {
        (&self.first, &self.second)
    }

    /// The surface model of the product.
    pub fn surface(&self) -> &HesseSurface {
        &self.surface
    }

    pub fn params(&self) -> FieldParams {
        self.surface.params()
    }

    /// The Segre image of a pair of points on the factors.
    pub fn embed(&self, p: &P2, q: &P2) -> Result<P8> {
        if !self.first.contains(p) || !self.second.contains(q) {
            return Err(Error::NotOnVariety);
        }
        Ok(segre(p, q))
    }

    /// Inverts the Segre map: factors a surface point into a pair of factor
    /// points, reading the first nonzero column and row of the rank-one
    /// coordinate matrix `x_{3i+j}`.
    ///
    /// Points off the Segre image (some `2x2` minor nonzero) are rejected
    /// with [`Error::NotASegrePoint`]; rank-one points whose factors miss the
    /// curves — i.e. points of `P^2 x P^2` off the product surface — with
    /// [`Error::NotOnVariety`].
    pub fn split_point(&self, x: &P8) -> Result<(P2, P2)> {
        let c = x.coords();
        let m = |i: usize, j: usize| c[3 * i + j];
        for i in 0..3 {
            for k in (i + 1)..3 {
                for j in 0..3 {
                    for l in (j + 1)..3 {
                        if m(i, j) * m(k, l) != m(i, l) * m(k, j) {
                            return Err(Error::NotASegrePoint);
                        }
                    }
                }
            }
        }
        let col = (0..3)
            .find(|&j| (0..3).any(|i| !m(i, j).is_zero()))
            .expect("projective points have a nonzero coordinate");
        let row = (0..3)
            .find(|&i| !m(i, col).is_zero())
            .expect("the selected column is nonzero");
        let p = P2::new([m(0, col), m(1, col), m(2, col)])?;
        let q = P2::new([m(row, 0), m(row, 1), m(row, 2)])?;
        if !self.first.contains(&p) || !self.second.contains(&q) {
            return Err(Error::NotOnVariety);
        }
        Ok((p, q))
    }

    /// The canonical torsion basis as Segre images of the factor bases:
    /// `(i(0,P'), i(P,0), i(0,Q'), i(Q,0))` with `(P,Q)` the canonical basis
    /// of each factor.  Projectively equal to the surface's own
    /// `canonical_basis`.
    pub fn basis_images(&self) -> [P8; 4] {
        let zero1 = self.first.neutral();
        let zero2 = self.second.neutral();
        let (p1, q1) = self.first.canonical_basis();
        let (p2, q2) = self.second.canonical_basis();
        [
            segre(&zero1, &p2),
            segre(&p1, &zero2),
            segre(&zero1, &q2),
            segre(&q1, &zero2),
        ]
    }
}

// ================================================================================
// Moving a split surface onto the product polarization
// ================================================================================

/// Reads the two factor parameters off a product-pattern coefficient vector
/// `(d0 d0' : d0 d1' : d1 d0' : d1 d1' : d1 d1')`.
fn read_product_factors(d: &P4) -> Result<(P1, P1)> {
    let c = d.coords();
    // The first four coordinates form the rank-one 2x2 block (rows scaled by
    // the first factor, columns by the second); the last repeats the corner.
    if c[3] != c[4] || c[0] * c[3] != c[1] * c[2] {
        return Err(Error::InvalidSurface(
            "cubic coefficient vector does not follow the product pattern",
        ));
    }
    let first = if !c[0].is_zero() || !c[2].is_zero() {
        P1::new([c[0], c[2]])?
    } else {
        P1::new([c[1], c[3]])?
    };
    let second = if !c[0].is_zero() || !c[1].is_zero() {
        P1::new([c[0], c[1]])?
    } else {
        P1::new([c[2], c[3]])?
    };
    Ok((first, second))
}

/// Translates a Burkhardt automorphism word into the surface-level transform
/// with the same matrices: `M` becomes the Fourier transform, `S_i^k` the
/// scaling by the `i`-th diagonal generator.
fn word_transform(fp: &FieldParams, word: &AutWord) -> SurfaceTransform {
    let mut transform = SurfaceTransform::identity(fp);
    for g in word.gens() {
        match *g {
            AutGen::M => transform.push(SurfaceMove::Dft),
            AutGen::S0(k) if k % 3 != 0 => transform.push(SurfaceMove::Scale(k % 3, 0, 0)),
            AutGen::S1(k) if k % 3 != 0 => transform.push(SurfaceMove::Scale(0, k % 3, 0)),
            AutGen::S2(k) if k % 3 != 0 => transform.push(SurfaceMove::Scale(0, 0, k % 3)),
            _ => {}
        }
    }
    transform
}

/// Moves a surface with singular quadric coefficients onto the product
/// polarization and splits it.
///
/// Returns the symplectic transform together with the factored surface; the
/// transform applied to `surface` equals the product's own model.  A surface
/// over a nonsingular Burkhardt point does not split and is rejected with
/// [`Error::NotAProduct`].
pub fn to_product_form(surface: &HesseSurface) -> Result<(SurfaceTransform, ProductSurface)> {
    let fp = surface.params();
    let transform = if surface.is_product_polarized() {
        SurfaceTransform::identity(&fp)
    } else {
        word_transform(&fp, &burkhardt::product_structure_word(surface.h())?)
    };
    let image = transform.apply_surface(surface);
    assert!(
        image.is_product_polarized(),
        "the automorphism word must land on the product polarization"
    );
    let (f1, f2) = read_product_factors(image.d())?;
    let product = ProductSurface::new(HesseCurve::new(f1)?, HesseCurve::new(f2)?)?;
    assert!(
        product.surface().same_surface(&image),
        "the factored surface must reproduce the transported parameters"
    );
    Ok((transform, product))
}

// ================================================================================
// Tests
// ================================================================================
