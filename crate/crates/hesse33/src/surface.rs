//! Principally polarized abelian surfaces `A_{d,h}` in level-3 Hesse form.
//!
//! A surface in Hesse form lives in `P^8` and is cut out by four cubics
//! `F_1..F_4` weighted by a coefficient vector `d` and nine quadrics
//! `G_0..G_8` weighted by a vector `h`; its neutral element is the symmetric
//! point built from a third vector `t`.  The three vectors are tied to the
//! Burkhardt quartic: `h` lies on the quartic, `d` on its dual side (paired
//! with `h` by the Coble relation), and the doubled `t`-vector on the Hessian
//! hypersurface.  [`HesseSurface::new`] checks every one of those conditions,
//! so a constructed surface is always internally consistent.
//!
//! The 3-torsion translates act on the nine coordinates by the monomial maps
//! `sigma_1, sigma_2, tau_1, tau_2` ([`translate_point`]); together with
//! negation, the discrete Fourier transform [`dft_point`] and the symmetric
//! scalings `C_lambda` they generate the symplectic transformations
//! ([`SurfaceTransform`]) that move isogeny kernels into standard position
//! and carry the `(d, h, t)` parameters along.

use std::fmt;

use crate::burkhardt::{self, AutGen};
use crate::error::{Error, Result};
use crate::fp2::{FieldParams, Fp2};
use crate::linalg::{kernel, mat_vec, vec_mat, Mat};
use crate::proj::{P4, P8};

// ================================================================================
// Defining equations
// ================================================================================

/// Index triples of the cubic `F_{k+1}`: each family groups the nine
/// coordinates into three products of three.
const CUBIC_TRIPLES: [[[usize; 3]; 3]; 4] = [
    [[0, 1, 2], [3, 4, 5], [6, 7, 8]],
    [[0, 3, 6], [1, 4, 7], [2, 5, 8]],
    [[0, 4, 8], [1, 5, 6], [2, 3, 7]],
    [[0, 5, 7], [1, 3, 8], [2, 4, 6]],
];

/// Index pairs of the quadric `G_i`: the products multiplying `h_1..h_4`
/// (the `h_0` term is always `x_i^2`).
const QUADRIC_PAIRS: [[[usize; 2]; 4]; 9] = [
    [[1, 2], [3, 6], [4, 8], [5, 7]],
    [[0, 2], [4, 7], [5, 6], [3, 8]],
    [[0, 1], [5, 8], [3, 7], [4, 6]],
    [[4, 5], [0, 6], [2, 7], [1, 8]],
    [[3, 5], [1, 7], [0, 8], [2, 6]],
    [[3, 4], [2, 8], [1, 6], [0, 7]],
    [[7, 8], [0, 3], [1, 5], [2, 4]],
    [[6, 8], [1, 4], [2, 3], [0, 5]],
    [[6, 7], [2, 5], [0, 4], [1, 3]],
];

/// Which of the five symmetric classes coordinate `x_i` belongs to: the
/// quintuple `(x_0, x_1, x_3, x_4, x_5)` represents the classes, and
/// `C_lambda` scales `x_i` by `lambda[COORD_CLASS[i]]`.
pub(crate) const COORD_CLASS: [usize; 9] = [0, 1, 1, 2, 3, 4, 2, 4, 3];

/// The building blocks of the four cubics at `x`: the cube sum `sum x_j^3`
/// and the four triple-product families `T_1..T_4` from [`CUBIC_TRIPLES`].
pub(crate) fn cubic_parts(x: &P8) -> (Fp2, [Fp2; 4]) {
    let fp = x.params();
    let c = x.coords();
    let sum_cubes = c.iter().fold(fp.zero(), |acc, v| acc + v.cube());
    let mut triples = [fp.zero(); 4];
    for (k, family) in CUBIC_TRIPLES.iter().enumerate() {
        for t in family {
            triples[k] = triples[k] + c[t[0]] * c[t[1]] * c[t[2]];
        }
    }
    (sum_cubes, triples)
}

/// Values of the four cubics `F_1..F_4` at `x`.
///
/// `F_k = d_k * sum x_j^3 - 3 d_0 * (three triple products)`, with the triple
/// families listed in [`CUBIC_TRIPLES`].
pub fn eval_cubics(d: &P4, x: &P8) -> [Fp2; 4] {
    let (sum_cubes, triples) = cubic_parts(x);
    let mut out = [x.params().zero(); 4];
    for k in 0..4 {
        out[k] = d.coord(k + 1) * sum_cubes - d.coord(0) * triples[k].mul_small(3);
    }
    out
}

/// Values of the nine quadrics `G_0..G_8` at `x`.
///
/// `G_i = h_0 x_i^2 + h_1 (pair) + ... + h_4 (pair)` with the pair tables of
/// [`QUADRIC_PAIRS`].
pub fn eval_quadrics(h: &P4, x: &P8) -> [Fp2; 9] {
    let fp = x.params();
    let c = x.coords();
    let mut out = [fp.zero(); 9];
    for i in 0..9 {
        let mut acc = h.coord(0) * c[i].square();
        for (k, pair) in QUADRIC_PAIRS[i].iter().enumerate() {
            acc = acc + h.coord(k + 1) * c[pair[0]] * c[pair[1]];
        }
        out[i] = acc;
    }
    out
}

fn equations_vanish(d: &P4, h: &P4, x: &P8) -> bool {
    eval_cubics(d, x).iter().all(Fp2::is_zero) && eval_quadrics(h, x).iter().all(Fp2::is_zero)
}

// ================================================================================
// Torsion translations, negation, and the symplectic pairing
// ================================================================================

/// Exponent vector `(a, b, c, e)` of a 3-torsion translation
/// `sigma_1^a sigma_2^b tau_1^c tau_2^e`, with components modulo 3.
///
/// The `(a, b)` half indexes the `K_1 = <P_1, P_2>` directions, the `(c, e)`
/// half the `K_2 = <Q_1, Q_2>` directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorsionVector {
    pub a: u8,
    pub b: u8,
    pub c: u8,
    pub e: u8,
}

impl TorsionVector {
    pub fn new(a: u8, b: u8, c: u8, e: u8) -> Self {
        Self {
            a: a % 3,
            b: b % 3,
            c: c % 3,
            e: e % 3,
        }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    pub fn add(&self, other: &TorsionVector) -> TorsionVector {
        Self::new(
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.e + other.e,
        )
    }

    pub fn neg(&self) -> TorsionVector {
        Self::new(3 - self.a, 3 - self.b, 3 - self.c, 3 - self.e)
    }

    pub fn scaled(&self, k: u8) -> TorsionVector {
        Self::new(self.a * k, self.b * k, self.c * k, self.e * k)
    }

    /// Exponent of the commutator pairing: the translation operators satisfy
    /// `t_v t_w = omega^pairing(v, w) * t_w t_v`.  The canonical basis pairs to
    /// `pairing(P_i, Q_j) = delta_ij`, so this is the symplectic form in which
    /// both `K_1` and `K_2` are Lagrangian.
    pub fn pairing(&self, other: &TorsionVector) -> u8 {
        (self.a * other.c + self.b * other.e + 2 * (self.c * other.a + self.e * other.b)) % 3
    }

    /// All 81 exponent vectors, in lexicographic order.
    pub fn all() -> Vec<TorsionVector> {
        let mut out = Vec::with_capacity(81);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for e in 0..3 {
                        out.push(Self::new(a, b, c, e));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TorsionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.e)
    }
}

/// Translation of a point by the 3-torsion element with exponent vector `v`.
///
/// Writing the coordinate index as `3i + j`, the four generators act by
/// `sigma_1: x[3i+j] <- x[3i+j+1]`, `sigma_2: x[3i+j] <- x[3(i+1)+j]`,
/// `tau_1: x[3i+j] <- omega^j x[3i+j]` and `tau_2: x[3i+j] <- omega^i x[3i+j]`.
/// The maps are independent of the surface parameters; they commute up to
/// powers of `omega`, so the application order only moves the representative.
pub fn translate_point(x: &P8, v: &TorsionVector) -> P8 {
    let fp = x.params();
    let mut scaled = *x.coords();
    for (idx, value) in scaled.iter_mut().enumerate() {
        let (i, j) = ((idx / 3) as u8, (idx % 3) as u8);
        *value = value.mul_omega_pow((v.c * j + v.e * i) % 3);
    }
    let mut out = [fp.zero(); 9];
    for i in 0..3 {
        for j in 0..3 {
            let si = (i + v.b as usize) % 3;
            let sj = (j + v.a as usize) % 3;
            out[3 * i + j] = scaled[3 * si + sj];
        }
    }
    P8::new(out).expect("translation permutes and scales a nonzero vector")
}

/// Index permutation of multiplication by `[-1]`:
/// `(x0:...:x8) -> (x0:x2:x1:x6:x8:x7:x3:x5:x4)`.
const NEG_PERM: [usize; 9] = [0, 2, 1, 6, 8, 7, 3, 5, 4];

/// Multiplication by `[-1]` on coordinates; an involution fixing the even
/// 2-torsion pattern (and in particular every neutral element).
pub fn negate_point(x: &P8) -> P8 {
    let c = x.coords();
    let mut out = [x.params().zero(); 9];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = c[NEG_PERM[i]];
    }
    P8::new(out).expect("negation permutes a nonzero vector")
}

/// The symmetric ("even 2-torsion shaped") point built from a five-vector:
/// `(v0 : v1 : v1 : v2 : v3 : v4 : v2 : v4 : v3)`.  Neutral elements and the
/// images of neutral elements under symmetric maps all have this shape.
pub fn even_vector(v: &P4) -> P8 {
    let c = v.coords();
    let mut out = [v.params().zero(); 9];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = c[COORD_CLASS[i]];
    }
    P8::new(out).expect("a nonzero five-vector spreads to a nonzero nine-vector")
}

/// Reads the five-vector back out of an even-shaped point; `None` if the
/// coordinates do not literally repeat along the symmetric classes (the check
/// is on the stored representative, matching how [`even_vector`] writes it).
pub fn even_part(x: &P8) -> Option<P4> {
    let c = x.coords();
    for (i, &class) in COORD_CLASS.iter().enumerate() {
        if c[i] != c[[0, 1, 3, 4, 5][class]] {
            return None;
        }
    }
    P4::new([c[0], c[1], c[3], c[4], c[5]]).ok()
}

// ================================================================================
// The surface type
// ================================================================================

/// A principally polarized abelian surface in Hesse form, described by the
/// cubic coefficients `d`, the quadric coefficients `h` and the neutral
/// vector `t`.
#[derive(Clone, Debug)]
pub struct HesseSurface {
    d: P4,
    h: P4,
    t: P4,
}

impl HesseSurface {
    /// Validated constructor: checks that `h` lies on the Burkhardt quartic,
    /// that `d` pairs with `h` under the Coble relation, that the doubled
    /// neutral vector lies on the Hessian hypersurface, that `d` agrees with
    /// the vector recovered from `t` (whenever that recovery is defined), and
    /// that the neutral element satisfies all thirteen defining equations.
    pub fn new(d: P4, h: P4, t: P4) -> Result<Self> {
        if !burkhardt::is_on_quartic(&h) {
            return Err(Error::InvalidSurface(
                "quadric coefficient vector is off the Burkhardt quartic",
            ));
        }
        if !burkhardt::coble_relation(&h, &d) {
            return Err(Error::InvalidSurface(
                "coefficient vectors violate the Coble relation",
            ));
        }
        if !burkhardt::eval_hf(&doubled_neutral(&t)).is_zero() {
            return Err(Error::InvalidSurface(
                "neutral vector is off the Hessian hypersurface",
            ));
        }
        if let Ok(from_t) = t_to_d(&t) {
            if !from_t.eq_proj(&d) {
                return Err(Error::InvalidSurface(
                    "cubic coefficient vector disagrees with the neutral element",
                ));
            }
        }
        let surface = Self { d, h, t };
        if !surface.contains(&surface.neutral()) {
            return Err(Error::InvalidSurface(
                "neutral element does not satisfy the defining equations",
            ));
        }
        Ok(surface)
    }

    /// Builds the surface whose neutral vector is `t`, recovering `d` and `h`
    /// through [`t_to_d`] and [`t_to_h`].
    pub fn from_t(t: &P4) -> Result<Self> {
        Self::new(t_to_d(t)?, t_to_h(t)?, *t)
    }

    pub fn d(&self) -> &P4 {
        &self.d
    }

    pub fn h(&self) -> &P4 {
        &self.h
    }

    pub fn t(&self) -> &P4 {
        &self.t
    }

    pub fn params(&self) -> FieldParams {
        self.d.params()
    }

    /// The `h`-vector `(0:0:0:-1:1)` of product polarizations.
    pub fn product_h(fp: &FieldParams) -> P4 {
        P4::from_i64(fp, [(0, 0), (0, 0), (0, 0), (-1, 0), (1, 0)])
    }

    /// A surface carries the product polarization exactly when `h` is
    /// projectively `(0:0:0:-1:1)`; those surfaces split (or are moved by
    /// [`crate::segre`] transforms) into two Hesse elliptic curves.
    pub fn is_product_polarized(&self) -> bool {
        self.h.eq_proj(&Self::product_h(&self.params()))
    }

    /// Same parameter triple up to projective scaling.
    pub fn same_surface(&self, other: &HesseSurface) -> bool {
        self.d.eq_proj(&other.d) && self.h.eq_proj(&other.h) && self.t.eq_proj(&other.t)
    }

    /// The neutral element `(t0 : t1 : t1 : t2 : t3 : t4 : t2 : t4 : t3)`.
    pub fn neutral(&self) -> P8 {
        even_vector(&self.t)
    }

    /// Membership: all four cubics and all nine quadrics vanish.
    pub fn contains(&self, x: &P8) -> bool {
        equations_vanish(&self.d, &self.h, x)
    }

    /// The 3-torsion point `translate(neutral, v)`.
    pub fn torsion_point(&self, v: &TorsionVector) -> P8 {
        translate_point(&self.neutral(), v)
    }

    /// The canonical symplectic basis `[P1, P2, Q1, Q2]`: translates of the
    /// neutral element by the four generator translations.
    pub fn canonical_basis(&self) -> [P8; 4] {
        [
            self.torsion_point(&TorsionVector::new(1, 0, 0, 0)),
            self.torsion_point(&TorsionVector::new(0, 1, 0, 0)),
            self.torsion_point(&TorsionVector::new(0, 0, 1, 0)),
            self.torsion_point(&TorsionVector::new(0, 0, 0, 1)),
        ]
    }

    /// Writes a 3-torsion point as a translate of the neutral element by
    /// matching against all 81 candidates.
    pub fn decompose_torsion(&self, x: &P8) -> Result<TorsionVector> {
        let zero = self.neutral();
        for v in TorsionVector::all() {
            if translate_point(&zero, &v).eq_proj(x) {
                return Ok(v);
            }
        }
        Err(Error::NotATorsionTranslate)
    }

    /// The cubed-and-transformed neutral vector together with the
    /// exceptionality data steering the isogeny scaling recovery.
    pub fn exceptional_profile(&self) -> ExceptionalProfile {
        let t_tilde = t_tilde(&self.t);
        let nonzero_tail = (1..5).filter(|&i| !t_tilde.coord(i).is_zero()).count();
        ExceptionalProfile {
            exceptional: nonzero_tail < 4,
            nonzero_head: !t_tilde.coord(0).is_zero(),
            nonzero_tail,
            t_tilde,
        }
    }
}

// ================================================================================
// Neutral-vector parameter maps
// ================================================================================

/// The doubled neutral vector `(t0 : 2t1 : 2t2 : 2t3 : 2t4)`, the
/// representative on the Hessian hypersurface used by the parameter maps.
pub fn doubled_neutral(t: &P4) -> P4 {
    let c = t.coords();
    P4::new([
        c[0],
        c[1].mul_small(2),
        c[2].mul_small(2),
        c[3].mul_small(2),
        c[4].mul_small(2),
    ])
    .expect("doubling preserves nonzero vectors")
}

/// Recovers the cubic coefficients from the neutral vector:
/// `d_0 = t0^3 + 2(t1^3 + t2^3 + t3^3 + t4^3)` and
/// `d_i = 3 t0 ti^2 + 6 * (product of the other three tail entries)`,
/// defined only when `d_0` is nonzero.  The result coincides with the
/// Burkhardt gradient at the doubled neutral vector, which is asserted.
pub fn t_to_d(t: &P4) -> Result<P4> {
    let [t0, t1, t2, t3, t4] = *t.coords();
    let tail = t1.cube() + t2.cube() + t3.cube() + t4.cube();
    let d0 = t0.cube() + tail.mul_small(2);
    if d0.is_zero() {
        return Err(Error::DegenerateNeutral);
    }
    let d = P4::new([
        d0,
        (t0 * t1.square()).mul_small(3) + (t2 * t3 * t4).mul_small(6),
        (t0 * t2.square()).mul_small(3) + (t1 * t3 * t4).mul_small(6),
        (t0 * t3.square()).mul_small(3) + (t1 * t2 * t4).mul_small(6),
        (t0 * t4.square()).mul_small(3) + (t1 * t2 * t3).mul_small(6),
    ])
    .expect("the first coordinate is nonzero");
    let grad = burkhardt::gradient(&doubled_neutral(t))
        .expect("the gradient is nonzero whenever d0 is nonzero");
    assert!(
        grad.eq_proj(&d),
        "cubic-coefficient recovery must coincide with the Burkhardt gradient"
    );
    Ok(d)
}

/// Recovers the quadric coefficients from the neutral vector as the kernel of
/// the Burkhardt Hessian matrix at the doubled neutral vector.
///
/// Generically the kernel is a line; a trivial kernel means the input is not
/// a neutral vector at all, and a higher-dimensional kernel is reported as
/// ambiguous rather than guessed.  When all four denominators
/// `3(t0 ti^2 - product of other tail entries)` are nonzero, the closed form
/// `h = (1 : h_1 : ... : h_4)` is checked against the kernel vector.
pub fn t_to_h(t: &P4) -> Result<P4> {
    let hess = burkhardt::hessian_matrix(&doubled_neutral(t));
    let basis = kernel(&hess);
    let h = match basis.len() {
        0 => {
            return Err(Error::InvalidSurface(
                "neutral vector admits no quadric coefficients",
            ))
        }
        1 => P4::new(basis[0]).expect("kernel basis vectors are nonzero"),
        _ => return Err(Error::AmbiguousDual),
    };
    let [t0, t1, t2, t3, t4] = *t.coords();
    let tail = [t1, t2, t3, t4];
    let tail_cubes = t1.cube() + t2.cube() + t3.cube() + t4.cube();
    let mut closed = [t0.params().one(); 5];
    let mut closed_form_defined = true;
    for i in 0..4 {
        let others = tail.iter().enumerate().fold(t0.params().one(), |acc, (j, v)| {
            if j == i {
                acc
            } else {
                acc * *v
            }
        });
        let den = (t0 * tail[i].square() - others).mul_small(3);
        if den.is_zero() {
            closed_form_defined = false;
            break;
        }
        let num = t0.cube() + tail[i].cube().mul_small(3) - tail_cubes;
        closed[i + 1] = -(num * den.inv().expect("denominator checked nonzero"));
    }
    if closed_form_defined {
        let closed = P4::new(closed).expect("first coordinate is one");
        assert!(
            h.eq_proj(&closed),
            "kernel vector must match the closed-form quadric coefficients"
        );
    }
    Ok(h)
}

/// The transformed cube vector `t~ = M * (t0^3, ..., t4^3)`, the neutral data
/// of the isogeny codomain before scaling.  Spelled out:
///
/// ```text
/// t~0 = t0^3 + 2 t1^3 + 2 t2^3 + 2 t3^3 + 2 t4^3
/// t~1 = t0^3 -   t1^3 + 2 t2^3 -   t3^3 -   t4^3
/// t~2 = t0^3 + 2 t1^3 -   t2^3 -   t3^3 -   t4^3
/// t~3 = t0^3 -   t1^3 -   t2^3 -   t3^3 + 2 t4^3
/// t~4 = t0^3 -   t1^3 -   t2^3 + 2 t3^3 -   t4^3
/// ```
pub fn t_tilde(t: &P4) -> P4 {
    let fp = t.params();
    let m = AutGen::M.matrix(&fp);
    let cubes = t.map(|v| v.cube());
    P4::new(mat_vec(&m, cubes.coords())).expect("the transform matrix is invertible")
}

/// Exceptionality data of a surface: the vector `t~`, whether some tail entry
/// vanishes (forcing the extended scaling recovery), whether the head entry
/// is nonzero, and how many tail entries survive.
///
/// Every valid surface has at least two nonzero `t~` entries; the
/// unrecoverable configuration — exactly one nonzero tail entry next to a
/// nonzero head — is the extra-automorphism case the isogeny layer aborts on.
#[derive(Clone, Debug)]
pub struct ExceptionalProfile {
    pub t_tilde: P4,
    pub exceptional: bool,
    pub nonzero_head: bool,
    pub nonzero_tail: usize,
}

// ================================================================================
// Symplectic transformations
// ================================================================================

/// The scaling vector `a0^alpha * a1^beta * a2^gamma` built from the three
/// generators `a0 = (1:w:1:w:w)`, `a1 = (1:1:1:w^2:w)`, `a2 = (1:1:w:w:w)`.
pub fn scaling_vector(fp: &FieldParams, alpha: u8, beta: u8, gamma: u8) -> P4 {
    let e1 = alpha % 3;
    let e2 = gamma % 3;
    let e3 = (alpha + 2 * beta + gamma) % 3;
    let e4 = (alpha + beta + gamma) % 3;
    P4::new([
        fp.one(),
        fp.omega_pow(e1),
        fp.omega_pow(e2),
        fp.omega_pow(e3),
        fp.omega_pow(e4),
    ])
    .expect("omega powers are nonzero")
}

/// Componentwise product `lambda * x` of five-vectors.
pub fn star(lambda: &P4, x: &P4) -> P4 {
    let l = lambda.coords();
    let c = x.coords();
    P4::new([l[0] * c[0], l[1] * c[1], l[2] * c[2], l[3] * c[3], l[4] * c[4]])
        .expect("componentwise scaling by a nowhere-zero vector")
}

/// Componentwise quotient `lambda^-1 * x`; errors when `lambda` has a zero
/// coordinate (the scaling is not invertible).
pub fn star_inv(lambda: &P4, x: &P4) -> Result<P4> {
    let l = lambda.coords();
    let c = x.coords();
    let mut out = [x.params().zero(); 5];
    for i in 0..5 {
        out[i] = c[i] * l[i].inv()?;
    }
    Ok(P4::new(out).expect("componentwise scaling preserves nonzero vectors"))
}

/// The symmetric scaling `C_lambda`: coordinate `x_i` is multiplied by the
/// class entry `lambda[COORD_CLASS[i]]`.  Errors when some `lambda_i = 0`.
pub fn scale_coords(lambda: &P4, x: &P8) -> Result<P8> {
    if lambda.coords().iter().any(Fp2::is_zero) {
        return Err(Error::DivisionByZero);
    }
    let l = lambda.coords();
    let c = x.coords();
    let mut out = [x.params().zero(); 9];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = c[i] * l[COORD_CLASS[i]];
    }
    Ok(P8::new(out).expect("invertible scaling preserves nonzero vectors"))
}

/// The 9x9 discrete Fourier matrix `M[3i+j][3k+l] = omega^(ik + jl)`.
pub fn dft33_matrix(fp: &FieldParams) -> Mat<9> {
    let mut m = [[fp.zero(); 9]; 9];
    for i in 0..3u8 {
        for j in 0..3u8 {
            for k in 0..3u8 {
                for l in 0..3u8 {
                    m[(3 * i + j) as usize][(3 * k + l) as usize] =
                        fp.omega_pow((i * k + j * l) % 3);
                }
            }
        }
    }
    m
}

/// The discrete Fourier transform of a point.  Squares to 9 times the
/// negation permutation, so projectively `dft . dft = [-1]`.
pub fn dft_point(x: &P8) -> P8 {
    let m = dft33_matrix(&x.params());
    P8::new(mat_vec(&m, x.coords())).expect("the Fourier matrix is invertible")
}

/// One generator move of a symplectic surface transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceMove {
    /// `C_lambda` with `lambda = a0^alpha * a1^beta * a2^gamma`.
    Scale(u8, u8, u8),
    /// The discrete Fourier transform.
    Dft,
    /// Multiplication by `[-1]`.
    Negate,
}

/// An ordered word of surface moves, applied left to right; transports
/// points, the parameter triple `(d, h, t)`, and torsion exponent vectors
/// consistently.
#[derive(Clone, Debug)]
pub struct SurfaceTransform {
    fp: FieldParams,
    moves: Vec<SurfaceMove>,
}

impl SurfaceTransform {
    pub fn identity(fp: &FieldParams) -> Self {
        Self {
            fp: *fp,
            moves: Vec::new(),
        }
    }

    pub fn push(&mut self, mv: SurfaceMove) {
        self.moves.push(mv);
    }

    pub fn moves(&self) -> &[SurfaceMove] {
        &self.moves
    }

    pub fn is_identity(&self) -> bool {
        self.moves.is_empty()
    }

    /// The transform that applies `self` first and `other` after it.
    pub fn then(&self, other: &SurfaceTransform) -> SurfaceTransform {
        let mut out = self.clone();
        out.moves.extend_from_slice(&other.moves);
        out
    }

    pub fn apply_point(&self, x: &P8) -> P8 {
        let mut out = *x;
        for mv in &self.moves {
            out = match mv {
                SurfaceMove::Scale(alpha, beta, gamma) => {
                    let lambda = scaling_vector(&self.fp, *alpha, *beta, *gamma);
                    scale_coords(&lambda, &out).expect("omega scalings are invertible")
                }
                SurfaceMove::Dft => dft_point(&out),
                SurfaceMove::Negate => negate_point(&out),
            };
        }
        out
    }

    /// Transports the parameter triple: scalings act by `d -> lambda^-1 * d`,
    /// `h -> lambda * h`, `t -> lambda * t`; the Fourier transform by
    /// `d -> M d`, `h -> h M`, `t -> M t`; negation fixes all three.
    pub fn apply_surface(&self, surface: &HesseSurface) -> HesseSurface {
        let mut d = *surface.d();
        let mut h = *surface.h();
        let mut t = *surface.t();
        for mv in &self.moves {
            match mv {
                SurfaceMove::Scale(alpha, beta, gamma) => {
                    let lambda = scaling_vector(&self.fp, *alpha, *beta, *gamma);
                    d = star_inv(&lambda, &d).expect("omega scalings are invertible");
                    h = star(&lambda, &h);
                    t = star(&lambda, &t);
                }
                SurfaceMove::Dft => {
                    let m = AutGen::M.matrix(&self.fp);
                    d = P4::new(mat_vec(&m, d.coords())).expect("invertible transform");
                    h = P4::new(vec_mat(h.coords(), &m)).expect("invertible transform");
                    t = P4::new(mat_vec(&m, t.coords())).expect("invertible transform");
                }
                SurfaceMove::Negate => {}
            }
        }
        HesseSurface::new(d, h, t).expect("symplectic moves preserve the surface invariants")
    }

    /// The induced symplectic action on torsion exponent vectors: scalings
    /// shear the `K_2`-half by the `K_1`-half, the Fourier transform swaps
    /// the halves (with a sign), negation negates.
    pub fn torsion_action(&self, v: &TorsionVector) -> TorsionVector {
        let mut w = *v;
        for mv in &self.moves {
            w = match mv {
                SurfaceMove::Scale(alpha, beta, gamma) => TorsionVector::new(
                    w.a,
                    w.b,
                    w.c + alpha * w.a + beta * w.b,
                    w.e + beta * w.a + gamma * w.b,
                ),
                SurfaceMove::Dft => TorsionVector::new(w.c, w.e, 3 - w.a, 3 - w.b),
                SurfaceMove::Negate => w.neg(),
            };
        }
        w
    }

    /// The inverse word: `Scale(e)^-1 = Scale(-e)`, `Dft^-1 = Negate . Dft`
    /// up to scale, `Negate^-1 = Negate`.
    pub fn inverse(&self) -> SurfaceTransform {
        let mut inv = SurfaceTransform::identity(&self.fp);
        for mv in self.moves.iter().rev() {
            match mv {
                SurfaceMove::Scale(alpha, beta, gamma) => inv.push(SurfaceMove::Scale(
                    (3 - alpha % 3) % 3,
                    (3 - beta % 3) % 3,
                    (3 - gamma % 3) % 3,
                )),
                SurfaceMove::Dft => {
                    inv.push(SurfaceMove::Dft);
                    inv.push(SurfaceMove::Negate);
                }
                SurfaceMove::Negate => inv.push(SurfaceMove::Negate),
            }
        }
        inv
    }
}

impl fmt::Display for SurfaceTransform {
    /// Composition notation, rightmost move first, e.g.
    /// `[-1] . M33 . C(1:1:1:w:268+268w)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moves.is_empty() {
            return write!(f, "id");
        }
        for (n, mv) in self.moves.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " . ")?;
            }
            match mv {
                SurfaceMove::Scale(alpha, beta, gamma) => {
                    let lambda = scaling_vector(&self.fp, *alpha, *beta, *gamma);
                    write!(f, "C(")?;
                    for (i, v) in lambda.coords().iter().enumerate() {
                        if i > 0 {
                            write!(f, ":")?;
                        }
                        write!(f, "{v}")?;
                    }
                    write!(f, ")")?;
                }
                SurfaceMove::Dft => write!(f, "M33")?,
                SurfaceMove::Negate => write!(f, "[-1]")?,
            }
        }
        Ok(())
    }
}

// ================================================================================
// Tests
// ================================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hesse_curve::{solve_depressed_cubic, HesseCurve};
    use crate::linalg::mat_mul;
    use crate::proj::{P1, P2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp269() -> FieldParams {
        FieldParams::new(269).unwrap()
    }

    /// The glued surface of the reference isogeny walk at p = 269.
    fn golden_glued(fp: &FieldParams) -> (P4, P4, P4) {
        let d = P4::from_i64(fp, [(263, 0), (51, 54), (3, 0), (57, 57), (54, 51)]);
        let h = P4::from_i64(fp, [(0, -1), (0, 1), (0, 1), (-1, -1), (1, 0)]);
        let t = P4::from_i64(fp, [(0, -2), (0, 1), (0, 1), (-1, -1), (1, 0)]);
        (d, h, t)
    }

    /// The product surface of two Hesse curves, built directly from the
    /// parameter formulas.
    fn product_surface(e1: &HesseCurve, e2: &HesseCurve) -> HesseSurface {
        let fp = e1.params();
        let (a0, a1) = (e1.d().coord(0), e1.d().coord(1));
        let (b0, b1) = (e2.d().coord(0), e2.d().coord(1));
        let d = P4::new([a0 * b0, a0 * b1, a1 * b0, a1 * b1, a1 * b1]).unwrap();
        let h = HesseSurface::product_h(&fp);
        let t = P4::from_i64(&fp, [(0, 0), (0, 0), (0, 0), (1, 0), (-1, 0)]);
        HesseSurface::new(d, h, t).unwrap()
    }

    /// The Segre image of a pair of curve points, first factor on the row
    /// index: `x_{3i+j} = a_i b_j`.
    fn segre(p: &P2, q: &P2) -> P8 {
        let a = p.coords();
        let b = q.coords();
        let mut c = [p.params().zero(); 9];
        for i in 0..3 {
            for j in 0..3 {
                c[3 * i + j] = a[i] * b[j];
            }
        }
        P8::new(c).unwrap()
    }

    /// The two factors of the reference walk: H_(18w^2:1) and H_(-2:1).
    fn golden_factors(fp: &FieldParams) -> (HesseCurve, HesseCurve) {
        (
            HesseCurve::from_i64(fp, (-18, -18), (1, 0)).unwrap(),
            HesseCurve::from_i64(fp, (-2, 0), (1, 0)).unwrap(),
        )
    }

    /// The matrix of a coordinate map, built by feeding it delta vectors.
    fn op_matrix(fp: &FieldParams, op: impl Fn(&P8) -> P8) -> Mat<9> {
        let mut m = [[fp.zero(); 9]; 9];
        for k in 0..9 {
            let mut delta = [fp.zero(); 9];
            delta[k] = fp.one();
            let image = op(&P8::new(delta).unwrap());
            for (row, v) in image.coords().iter().enumerate() {
                m[row][k] = *v;
            }
        }
        m
    }

    #[test]
    fn reference_surfaces_validate() {
        let fp = fp269();
        let (e1, e2) = golden_factors(&fp);
        let product = product_surface(&e1, &e2);
        assert!(product.is_product_polarized());
        assert!(product.d().eq_proj(&P4::from_i64(
            &fp,
            [(36, 36), (-18, -18), (-2, 0), (1, 0), (1, 0)]
        )));
        assert!(product.contains(&product.neutral()));
        // A point clearly off the surface: F_2 evaluates to d_2 there.
        let off = P8::from_i64(
            &fp,
            [
                (1, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (0, 0),
                (0, 0),
            ],
        );
        assert!(!product.contains(&off));

        let (d, h, t) = golden_glued(&fp);
        let glued = HesseSurface::new(d, h, t).unwrap();
        assert!(!glued.is_product_polarized());
        assert!(glued.contains(&glued.neutral()));

        // Tampered parameters are rejected with the matching diagnosis.
        let bad_h = P4::from_i64(&fp, [(1, 0), (1, 0), (0, 0), (0, 0), (0, 0)]);
        assert!(matches!(
            HesseSurface::new(d, bad_h, t),
            Err(Error::InvalidSurface(msg)) if msg.contains("Burkhardt")
        ));
        let bad_d = P4::from_i64(&fp, [(1, 0), (0, 0), (0, 0), (0, 0), (0, 0)]);
        assert!(HesseSurface::new(bad_d, h, t).is_err());
    }

    #[test]
    fn segre_images_satisfy_the_equations() {
        let fp = fp269();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (e1, e2) = golden_factors(&fp);
        let surface = product_surface(&e1, &e2);
        for _ in 0..20 {
            let p = e1.random_point(&mut rng).unwrap();
            let q = e2.random_point(&mut rng).unwrap();
            assert!(surface.contains(&segre(&p, &q)));
        }
        assert!(segre(&e1.neutral(), &e2.neutral()).eq_proj(&surface.neutral()));
    }

    #[test]
    fn two_torsion_splits_into_ten_even_and_six_odd() {
        let fp = fp269();
        let (e1, e2) = golden_factors(&fp);
        let surface = product_surface(&e1, &e2);

        // All three nontrivial 2-torsion points of H_d have the shape
        // (x : 1 : 1) with d1 x^3 - 3 d0 x + 2 d1 = 0; the cubic is split
        // because the curve group is (Z/(p+1))^2.
        let two_torsion = |e: &HesseCurve| -> Vec<P2> {
            let ratio = e.d().coord(0) * e.d().coord(1).inv().unwrap();
            let p = -ratio.mul_small(3);
            let q = fp.el(2, 0);
            let x0 = solve_depressed_cubic(p, q).unwrap();
            let disc = (-x0.square().mul_small(3) - p.mul_small(4)).sqrt().unwrap();
            let half = fp.el(2, 0).inv().unwrap();
            let mut points = vec![e.neutral()];
            for root in [x0, (-x0 + disc) * half, (-x0 - disc) * half] {
                let pt = P2::new([root, fp.one(), fp.one()]).unwrap();
                assert!(e.contains(&pt));
                assert!(e.add(&pt, &pt).eq_proj(&e.neutral()));
                points.push(pt);
            }
            points
        };

        let is_even = |x: &P8| {
            let c = x.coords();
            c[1] == c[2] && c[3] == c[6] && c[4] == c[8] && c[5] == c[7]
        };
        let is_odd = |x: &P8| {
            let c = x.coords();
            c[0].is_zero() && c[1] == -c[2] && c[3] == -c[6] && c[4] == -c[8] && c[5] == -c[7]
        };

        let (mut even, mut odd) = (0, 0);
        for a in two_torsion(&e1) {
            for b in two_torsion(&e2) {
                let x = segre(&a, &b);
                assert!(surface.contains(&x));
                assert!(negate_point(&x).eq_proj(&x));
                if is_even(&x) {
                    even += 1;
                } else {
                    assert!(is_odd(&x));
                    odd += 1;
                }
            }
        }
        assert_eq!((even, odd), (10, 6));
    }

    #[test]
    fn torsion_operators_satisfy_the_commutator_table() {
        let fp = fp269();
        let sigma = |k: usize| {
            let mut v = TorsionVector::zero();
            if k == 0 {
                v.a = 1
            } else {
                v.b = 1
            };
            op_matrix(&fp, |x| translate_point(x, &v))
        };
        let tau = |k: usize| {
            let mut v = TorsionVector::zero();
            if k == 0 {
                v.c = 1
            } else {
                v.e = 1
            };
            op_matrix(&fp, |x| translate_point(x, &v))
        };

        for i in 0..2 {
            for j in 0..2 {
                let st = mat_mul(&sigma(i), &tau(j));
                let ts = mat_mul(&tau(j), &sigma(i));
                let scale = if i == j { fp.omega() } else { fp.one() };
                for r in 0..9 {
                    for c in 0..9 {
                        assert_eq!(st[r][c], scale * ts[r][c]);
                    }
                }
            }
        }

        // Each generator has order three as a projective map (exactly three
        // as a matrix for the sigmas, and up to the omega-pattern for taus:
        // the cube of a tau is the identity on the nose as well).
        for m in [sigma(0), sigma(1), tau(0), tau(1)] {
            let cube = mat_mul(&mat_mul(&m, &m), &m);
            for r in 0..9 {
                for c in 0..9 {
                    assert_eq!(cube[r][c], if r == c { fp.one() } else { fp.zero() });
                }
            }
        }

        // The Fourier matrix squares to 9 times the negation permutation.
        let m = dft33_matrix(&fp);
        let m2 = mat_mul(&m, &m);
        let nine = fp.el(9, 0);
        for r in 0..9 {
            for c in 0..9 {
                let expected = if NEG_PERM[r] == c { nine } else { fp.zero() };
                assert_eq!(m2[r][c], expected);
            }
        }

        // Pairing exponents of the canonical basis: omega exactly on matched
        // P_i / Q_i pairs.
        let basis = [
            TorsionVector::new(1, 0, 0, 0),
            TorsionVector::new(0, 1, 0, 0),
            TorsionVector::new(0, 0, 1, 0),
            TorsionVector::new(0, 0, 0, 1),
        ];
        for i in 0..2 {
            for j in 2..4 {
                let expected = u8::from(i + 2 == j);
                assert_eq!(basis[i].pairing(&basis[j]), expected);
                assert_eq!(basis[j].pairing(&basis[i]), (3 - expected) % 3);
            }
        }
        assert_eq!(basis[0].pairing(&basis[1]), 0);
        assert_eq!(basis[2].pairing(&basis[3]), 0);
    }

    #[test]
    fn canonical_basis_and_decompositions_round_trip() {
        let fp = fp269();
        let (d, h, t) = golden_glued(&fp);
        let glued = HesseSurface::new(d, h, t).unwrap();

        let basis = glued.canonical_basis();
        let vectors = [
            TorsionVector::new(1, 0, 0, 0),
            TorsionVector::new(0, 1, 0, 0),
            TorsionVector::new(0, 0, 1, 0),
            TorsionVector::new(0, 0, 0, 1),
        ];
        for (point, v) in basis.iter().zip(vectors.iter()) {
            assert!(glued.contains(point));
            assert_eq!(glued.decompose_torsion(point).unwrap(), *v);
        }

        for v in TorsionVector::all() {
            let point = glued.torsion_point(&v);
            assert!(glued.contains(&point));
            assert_eq!(glued.decompose_torsion(&point).unwrap(), v);
            // Translating three times by v returns to the start.
            let thrice = translate_point(
                &translate_point(&translate_point(&glued.neutral(), &v), &v),
                &v,
            );
            assert!(thrice.eq_proj(&glued.neutral()));
        }

        // translate(Q1, (0,0,2,0)) is the neutral element again.
        let q1 = &basis[2];
        assert!(translate_point(q1, &TorsionVector::new(0, 0, 2, 0)).eq_proj(&glued.neutral()));

        let junk = P8::from_i64(
            &fp,
            [
                (1, 0),
                (2, 0),
                (3, 0),
                (4, 0),
                (5, 0),
                (6, 0),
                (7, 0),
                (8, 0),
                (9, 0),
            ],
        );
        assert!(matches!(
            glued.decompose_torsion(&junk),
            Err(Error::NotATorsionTranslate)
        ));
    }

    #[test]
    fn neutral_vector_maps_recover_the_parameters() {
        let fp = fp269();
        let (_, h, t) = golden_glued(&fp);

        // The glued surface is still a transformed product: the sum
        // t0^3 + 2(t1^3 + ... + t4^3) = -8 + 8 vanishes, so the cubic
        // coefficients are not recoverable from its neutral vector (the
        // quadric coefficients are).
        assert!(matches!(t_to_d(&t), Err(Error::DegenerateNeutral)));
        let recovered_h = t_to_h(&t).unwrap();
        assert!(recovered_h.eq_proj(&h));
        assert!(burkhardt::is_on_quartic(&recovered_h));

        // The first isogeny codomain is irreducible and its neutral vector
        // t' = lambda' * t~ reproduces the printed coefficient vectors.
        let lambda = P4::from_i64(&fp, [(88, 0), (170, 0), (5, 181), (93, 88), (1, 0)]);
        let t_prime = star(&lambda, &t_tilde(&t));
        let d_prime = P4::from_i64(&fp, [(107, 0), (144, 0), (200, 169), (31, 100), (1, 0)]);
        let h_prime = P4::from_i64(&fp, [(104, 0), (76, 0), (167, 203), (233, 66), (1, 0)]);
        let recovered_d = t_to_d(&t_prime).unwrap();
        assert!(recovered_d.eq_proj(&d_prime));
        assert!(t_to_h(&t_prime).unwrap().eq_proj(&h_prime));
        assert!(HesseSurface::from_t(&t_prime)
            .unwrap()
            .same_surface(&HesseSurface::new(d_prime, h_prime, t_prime).unwrap()));

        // Homogeneity: t -> c t scales d by c^3.
        let c = fp.el(7, 11);
        let scaled = t_to_d(&t_prime.scale(c)).unwrap();
        assert!(scaled.eq_proj(&recovered_d));
        assert_eq!(scaled.coord(0), recovered_d.coord(0) * c.cube());

        // The product neutral vector has a vanishing d0 form, and its
        // quadric coefficients are the product polarization.
        let product_t = P4::from_i64(&fp, [(0, 0), (0, 0), (0, 0), (1, 0), (-1, 0)]);
        assert!(matches!(t_to_d(&product_t), Err(Error::DegenerateNeutral)));
        assert!(t_to_h(&product_t).unwrap().eq_proj(&HesseSurface::product_h(&fp)));
    }

    #[test]
    fn exceptional_profiles_match_the_reference_surfaces() {
        let fp = fp269();
        let (d, h, t) = golden_glued(&fp);
        let glued = HesseSurface::new(d, h, t).unwrap();
        let profile = glued.exceptional_profile();
        assert!(!profile.exceptional);
        assert_eq!(profile.nonzero_tail, 4);

        let (e1, e2) = golden_factors(&fp);
        let product = product_surface(&e1, &e2);
        let profile = product.exceptional_profile();
        assert!(profile.exceptional);
        assert!(!profile.nonzero_head);
        assert_eq!(profile.nonzero_tail, 2);
        assert!(profile
            .t_tilde
            .eq_proj(&P4::from_i64(&fp, [(0, 0), (0, 0), (0, 0), (-1, 0), (1, 0)])));

        // The profile is insensitive to the representative of t.
        let c = fp.el(100, 3);
        let scaled = t_tilde(&glued.t().scale(c));
        assert!(scaled.eq_proj(&glued.exceptional_profile().t_tilde));
    }

    #[test]
    fn the_gluing_transform_reaches_the_printed_surface() {
        let fp = fp269();
        let (e1, e2) = golden_factors(&fp);
        let product = product_surface(&e1, &e2);

        // S_K = [-1] . M33 . C_lambda with lambda = (1:1:1:w:w^2) = a1^2.
        let mut s_k = SurfaceTransform::identity(&fp);
        s_k.push(SurfaceMove::Scale(0, 2, 0));
        s_k.push(SurfaceMove::Dft);
        s_k.push(SurfaceMove::Negate);
        assert!(scaling_vector(&fp, 0, 2, 0).eq_proj(&P4::from_i64(
            &fp,
            [(1, 0), (1, 0), (1, 0), (0, 1), (-1, -1)]
        )));

        let glued = s_k.apply_surface(&product);
        let (d, h, t) = golden_glued(&fp);
        assert!(glued.d().eq_proj(&d));
        assert!(glued.h().eq_proj(&h));
        assert!(glued.t().eq_proj(&t));

        // The inverse word moves the surface back.
        let back = s_k.inverse().apply_surface(&glued);
        assert!(back.same_surface(&product));
        for v in TorsionVector::all() {
            assert_eq!(s_k.inverse().torsion_action(&s_k.torsion_action(&v)), v);
        }

        // Round trip on points as well.
        let x = product.torsion_point(&TorsionVector::new(1, 2, 0, 1));
        assert!(s_k.inverse().apply_point(&s_k.apply_point(&x)).eq_proj(&x));

        // Scaling by a0 transports the parameters componentwise.
        let a0 = scaling_vector(&fp, 1, 0, 0);
        let mut twist = SurfaceTransform::identity(&fp);
        twist.push(SurfaceMove::Scale(1, 0, 0));
        let twisted = twist.apply_surface(&glued);
        assert!(twisted.d().eq_proj(&star_inv(&a0, glued.d()).unwrap()));
        assert!(twisted.h().eq_proj(&star(&a0, glued.h())));

        let shown = format!("{s_k}");
        assert!(shown.starts_with("[-1] . M33 . C("));
    }

    #[test]
    fn transforms_act_symplectically_on_torsion() {
        for p in [269, 53] {
            let fp = FieldParams::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            let e1 = random_curve(&fp, &mut rng);
            let e2 = random_curve(&fp, &mut rng);
            let surface = product_surface(&e1, &e2);

            let moves = [
                SurfaceMove::Scale(1, 0, 0),
                SurfaceMove::Scale(0, 1, 0),
                SurfaceMove::Scale(0, 0, 1),
                SurfaceMove::Dft,
                SurfaceMove::Negate,
            ];
            for mv in moves {
                let mut tf = SurfaceTransform::identity(&fp);
                tf.push(mv);
                let image = tf.apply_surface(&surface);
                for v in TorsionVector::all() {
                    let moved = tf.apply_point(&surface.torsion_point(&v));
                    assert_eq!(
                        image.decompose_torsion(&moved).unwrap(),
                        tf.torsion_action(&v),
                        "move {mv:?} disagrees on {v}"
                    );
                }
            }
        }

        fn random_curve(fp: &FieldParams, rng: &mut ChaCha8Rng) -> HesseCurve {
            loop {
                let d = P1::random(fp, rng);
                if let Ok(curve) = HesseCurve::new(d) {
                    return curve;
                }
            }
        }
    }

    #[test]
    fn dft_and_negation_identities() {
        let fp = fp269();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = P8::random(&fp, &mut rng);
            assert!(dft_point(&dft_point(&x)).eq_proj(&negate_point(&x)));
            assert!(negate_point(&negate_point(&x)).eq_proj(&x));
            // C_lambda commutes with negation: the scaling pattern is
            // symmetric under the permutation.
            let lambda = P4::random(&fp, &mut rng);
            if lambda.coords().iter().any(Fp2::is_zero) {
                continue;
            }
            let a = negate_point(&scale_coords(&lambda, &x).unwrap());
            let b = scale_coords(&lambda, &negate_point(&x)).unwrap();
            assert!(a.eq_proj(&b));
        }

        // An odd-shaped vector is fixed by negation.
        let odd = P8::from_i64(
            &fp,
            [
                (0, 0),
                (5, 1),
                (-5, -1),
                (7, 0),
                (2, 3),
                (9, 9),
                (-7, 0),
                (-9, -9),
                (-2, -3),
            ],
        );
        assert!(negate_point(&odd).eq_proj(&odd));

        // Even vectors round trip through their five-vector part.
        let five = P4::from_i64(&fp, [(3, 1), (0, 2), (8, 0), (1, 1), (4, 5)]);
        assert_eq!(even_part(&even_vector(&five)).unwrap().coords(), five.coords());
        assert!(even_part(&odd).is_none());
    }
}
