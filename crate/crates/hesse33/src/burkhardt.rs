//! The Burkhardt quartic threefold `B` in `P^4` and its automorphisms.
//!
//! The quartic is the moduli backbone of the whole crate: the coefficient
//! vector `h` of the quadric equations of a surface lies on `B`, the cubic
//! coefficient vector `d` lies on the dual of `B`, and the coordinates of the
//! neutral point satisfy the Hessian relation.  Irreducible surfaces sit over
//! nonsingular points of `B`; products of two elliptic curves sit over the 45
//! singular points, on which the automorphism group acts transitively.  The
//! breadth-first word search of [`product_structure_word`] makes that
//! transitivity effective: it returns, for any singular `h`, a word in the
//! generators moving `h` to the distinguished singularity `(0:0:0:-1:1)`,
//! which the surface layer then replays as symplectic transformations.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::RngCore;

use crate::error::{Error, Result};
use crate::fp2::{FieldParams, Fp2};
use crate::hesse_curve::solve_depressed_cubic;
use crate::linalg::{det, mat_from_i64, mat_vec, vec_mat, Mat};
use crate::proj::P4;

// ================================================================================
// The quartic, its gradient and its Hessian
// ================================================================================

/// `F(x) = x0 (x0^3 + x1^3 + x2^3 + x3^3 + x4^3) + 3 x1 x2 x3 x4`.
///
/// Homogeneous of degree 4, so the value is well defined up to fourth powers
/// of the coordinate scale; [`is_on_quartic`] is scale invariant.
pub fn eval_f(x: &P4) -> Fp2 {
    let [x0, x1, x2, x3, x4] = *x.coords();
    let cubes = x0.cube() + x1.cube() + x2.cube() + x3.cube() + x4.cube();
    x0 * cubes + (x1 * x2 * x3 * x4).mul_small(3)
}

/// Membership test `F(x) = 0`.
pub fn is_on_quartic(x: &P4) -> bool {
    eval_f(x).is_zero()
}

/// The gradient map into the dual quartic.
///
/// `(4 x0^3 + x1^3 + ... + x4^3, 3(x0 x1^2 + x2 x3 x4), ..., 3(x0 x4^2 + x1 x2 x3))`.
/// On `B` it vanishes exactly at the 45 singular points, which surface as
/// [`Error::ZeroVector`] here.
pub fn gradient(x: &P4) -> Result<P4> {
    let [x0, x1, x2, x3, x4] = *x.coords();
    let tail = x1.cube() + x2.cube() + x3.cube() + x4.cube();
    P4::new([
        x0.cube().mul_small(4) + tail,
        (x0 * x1.square() + x2 * x3 * x4).mul_small(3),
        (x0 * x2.square() + x1 * x3 * x4).mul_small(3),
        (x0 * x3.square() + x1 * x2 * x4).mul_small(3),
        (x0 * x4.square() + x1 * x2 * x3).mul_small(3),
    ])
}

/// The matrix of second partial derivatives of `F` at `x`.
pub fn hessian_matrix(x: &P4) -> Mat<5> {
    let [x0, x1, x2, x3, x4] = *x.coords();
    let sq = |a: Fp2| a.square().mul_small(3);
    let mixed = |a: Fp2, b: Fp2| (a * b).mul_small(3);
    let diag = |a: Fp2| (x0 * a).mul_small(6);
    [
        [
            x0.square().mul_small(12),
            sq(x1),
            sq(x2),
            sq(x3),
            sq(x4),
        ],
        [sq(x1), diag(x1), mixed(x3, x4), mixed(x2, x4), mixed(x2, x3)],
        [sq(x2), mixed(x3, x4), diag(x2), mixed(x1, x4), mixed(x1, x3)],
        [sq(x3), mixed(x2, x4), mixed(x1, x4), diag(x3), mixed(x1, x2)],
        [sq(x4), mixed(x2, x3), mixed(x1, x3), mixed(x1, x2), diag(x4)],
    ]
}

/// `H(F)(x) = det(d^2 F / dx_i dx_j) / 486`, homogeneous of degree 10.
///
/// The normalization keeps the polynomial integral with content 1; `486`
/// is invertible because the modulus is a prime larger than 3.
pub fn eval_hf(x: &P4) -> Fp2 {
    let fp = x.params();
    let scale = fp
        .el(486 % fp.p(), 0)
        .inv()
        .expect("486 is invertible for p > 3");
    det(&hessian_matrix(x)) * scale
}

/// The bilinear pairing `h0 d0 + h1 d1 + h2 d2 + h3 d3 + h4 d4 = 0` between
/// the quartic and its dual; the surface layer requires it of every valid
/// coefficient pair `(d, h)`.
pub fn coble_relation(h: &P4, d: &P4) -> bool {
    let hc = h.coords();
    let dc = d.coords();
    let mut acc = h.params().zero();
    for i in 0..5 {
        acc = acc + hc[i] * dc[i];
    }
    acc.is_zero()
}

// ================================================================================
// Singular points
// ================================================================================

/// Where a point of `B` sits in the singularity classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityClass {
    /// A smooth point: an irreducible surface lives above it.
    Nonsingular,
    /// `h` is a coordinate permutation of `(0 : 0 : 0 : -w^i : 1)` fixing the
    /// first slot.  `neg_slot < one_slot` are the two nonzero positions after
    /// scaling the later one to 1; 18 such points.
    TypeA {
        neg_slot: usize,
        one_slot: usize,
        omega_exp: u8,
    },
    /// `h = (1 : -w^i : -w^j : -w^k : -w^(-i-j-k))`; 27 such points.
    TypeB { exps: [u8; 3] },
}

impl SingularityClass {
    /// True for both singular shapes.
    pub fn is_singular(&self) -> bool {
        !matches!(self, SingularityClass::Nonsingular)
    }
}

/// Matches `h` against the explicit singularity lists.
///
/// Returns [`Error::NotOnQuartic`] when `F(h) != 0`.  Points matching
/// neither list are cross-checked to have a nonvanishing gradient, so the
/// classification agrees with the analytic notion of smoothness.
pub fn classify_singularity(h: &P4) -> Result<SingularityClass> {
    if !is_on_quartic(h) {
        return Err(Error::NotOnQuartic);
    }
    let fp = h.params();
    let c = h.coords();
    let nonzero: Vec<usize> = (0..5).filter(|&i| !c[i].is_zero()).collect();

    // Type (a): first slot zero and exactly two nonzero coordinates whose
    // ratio is minus a cube root of unity.
    if nonzero.len() == 2 && nonzero[0] != 0 {
        let (u, v) = (nonzero[0], nonzero[1]);
        let ratio = c[u].div(&c[v]).expect("nonzero coordinate");
        for i in 0..3u8 {
            if ratio == -fp.omega_pow(i) {
                return Ok(SingularityClass::TypeA {
                    neg_slot: u,
                    one_slot: v,
                    omega_exp: i,
                });
            }
        }
    }

    // Type (b): all coordinates nonzero, each trailing one equal to minus a
    // root of unity after scaling the first to 1, with matching exponents.
    if nonzero.len() == 5 {
        let inv0 = c[0].inv().expect("nonzero coordinate");
        let mut exps = [0u8; 4];
        let mut shaped = true;
        'slots: for s in 1..5 {
            let ratio = c[s] * inv0;
            for i in 0..3u8 {
                if ratio == -fp.omega_pow(i) {
                    exps[s - 1] = i;
                    continue 'slots;
                }
            }
            shaped = false;
            break;
        }
        if shaped {
            let sum = (exps[0] + exps[1] + exps[2]) % 3;
            if exps[3] == (3 - sum) % 3 {
                return Ok(SingularityClass::TypeB {
                    exps: [exps[0], exps[1], exps[2]],
                });
            }
        }
    }

    // Everything else must be an honest smooth point.
    assert!(
        gradient(h).is_ok(),
        "point off the singularity lists has vanishing gradient"
    );
    Ok(SingularityClass::Nonsingular)
}

/// The distinguished singular point `(0 : 0 : 0 : -1 : 1)` marking product
/// polarization.
pub fn base_singular_point(fp: &FieldParams) -> P4 {
    P4::from_i64(fp, [(0, 0), (0, 0), (0, 0), (-1, 0), (1, 0)])
}

/// All 45 singular points of `B`, 18 of type (a) followed by 27 of type (b).
pub fn singular_points(fp: &FieldParams) -> Vec<P4> {
    let mut pts = Vec::with_capacity(45);
    for u in 1..5 {
        for v in (u + 1)..5 {
            for i in 0..3u8 {
                let mut c = [fp.zero(); 5];
                c[u] = -fp.omega_pow(i);
                c[v] = fp.one();
                pts.push(P4::new(c).expect("nonzero vector"));
            }
        }
    }
    for i in 0..3u8 {
        for j in 0..3u8 {
            for k in 0..3u8 {
                let tail = (3 - (i + j + k) % 3) % 3;
                pts.push(
                    P4::new([
                        fp.one(),
                        -fp.omega_pow(i),
                        -fp.omega_pow(j),
                        -fp.omega_pow(k),
                        -fp.omega_pow(tail),
                    ])
                    .expect("nonzero vector"),
                );
            }
        }
    }
    pts
}

// ================================================================================
// Automorphism group
// ================================================================================

/// A generator symbol of `Aut(B) = <M, S0, S1, S2>`.
///
/// `M` is the symmetric matrix realizing the discrete Fourier transform on
/// the surface side; the `Si(k)` are the k-th powers of the diagonal scalings
/// `S0 = diag(1, w, 1, w, w)`, `S1 = diag(1, 1, 1, w^2, w)`,
/// `S2 = diag(1, 1, w, w, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutGen {
    M,
    S0(u8),
    S1(u8),
    S2(u8),
}

impl AutGen {
    /// The matrix of the generator.
    pub fn matrix(&self, fp: &FieldParams) -> Mat<5> {
        match *self {
            AutGen::M => mat_from_i64(
                fp,
                [
                    [1, 2, 2, 2, 2],
                    [1, -1, 2, -1, -1],
                    [1, 2, -1, -1, -1],
                    [1, -1, -1, -1, 2],
                    [1, -1, -1, 2, -1],
                ],
            ),
            AutGen::S0(k) => diag_matrix(fp, [0, k, 0, k, k]),
            AutGen::S1(k) => diag_matrix(fp, [0, 0, 0, 2 * k, k]),
            AutGen::S2(k) => diag_matrix(fp, [0, 0, k, k, k]),
        }
    }

    /// The symbol of the inverse element: `M` squares to a scalar, and the
    /// scalings invert by complementing the exponent.
    pub fn inverse(&self) -> AutGen {
        let flip = |k: u8| (3 - k % 3) % 3;
        match *self {
            AutGen::M => AutGen::M,
            AutGen::S0(k) => AutGen::S0(flip(k)),
            AutGen::S1(k) => AutGen::S1(flip(k)),
            AutGen::S2(k) => AutGen::S2(flip(k)),
        }
    }
}

fn diag_matrix(fp: &FieldParams, exps: [u8; 5]) -> Mat<5> {
    let mut m = [[fp.zero(); 5]; 5];
    for (i, e) in exps.into_iter().enumerate() {
        m[i][i] = fp.omega_pow(e % 3);
    }
    m
}

impl fmt::Display for AutGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AutGen::M => write!(f, "M"),
            AutGen::S0(1) => write!(f, "S0"),
            AutGen::S0(k) => write!(f, "S0^{k}"),
            AutGen::S1(1) => write!(f, "S1"),
            AutGen::S1(k) => write!(f, "S1^{k}"),
            AutGen::S2(1) => write!(f, "S2"),
            AutGen::S2(k) => write!(f, "S2^{k}"),
        }
    }
}

/// Which of the two linked actions a word is applied through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionSide {
    /// Right action on points of the quartic: `h -> h * g`.
    Point,
    /// Left action by the inverse on the dual: `d -> g^(-1) * d`.
    Dual,
}

/// A word in the generators, applied left to right; the empty word is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AutWord(Vec<AutGen>);

impl AutWord {
    /// The identity word.
    pub fn identity() -> Self {
        AutWord(Vec::new())
    }

    /// A word made of the given generator symbols.
    pub fn new(gens: Vec<AutGen>) -> Self {
        AutWord(gens)
    }

    /// The generator symbols, left to right.
    pub fn gens(&self) -> &[AutGen] {
        &self.0
    }

    /// Appends one generator.
    pub fn push(&mut self, g: AutGen) {
        self.0.push(g);
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for the identity word.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The reversed word of inverse symbols: the group inverse up to scalar.
    pub fn inverse(&self) -> AutWord {
        AutWord(self.0.iter().rev().map(AutGen::inverse).collect())
    }
}

impl fmt::Display for AutWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Applies a word to a vector on the chosen side.
///
/// On the point side the word `g1 g2 ... gn` sends `h` to `h g1 g2 ... gn`;
/// on the dual side it sends `d` to `gn^(-1) ... g1^(-1) d`, so the two
/// actions stay compatible with the pairing of the quartic and its dual.
pub fn apply_aut(word: &AutWord, x: &P4, side: ActionSide) -> P4 {
    let fp = x.params();
    let mut c = *x.coords();
    for g in word.gens() {
        c = match side {
            ActionSide::Point => vec_mat(&c, &g.matrix(&fp)),
            ActionSide::Dual => mat_vec(&g.inverse().matrix(&fp), &c),
        };
    }
    P4::new(c).expect("automorphisms are invertible")
}

// ================================================================================
// Product-structure word search
// ================================================================================

struct WordTable {
    /// `(singular point, word moving it to the base singular point)`.
    entries: Vec<(P4, AutWord)>,
}

fn build_word_table(fp: &FieldParams) -> WordTable {
    let base = base_singular_point(fp);
    let gens = [AutGen::M, AutGen::S0(1), AutGen::S1(1), AutGen::S2(1)];
    // Breadth-first over the orbit of the base point, recording for every
    // reached point the word that produced it from the base.
    let mut reached: Vec<(P4, AutWord)> = vec![(base.clone(), AutWord::identity())];
    let mut head = 0;
    while head < reached.len() {
        let (point, word) = reached[head].clone();
        head += 1;
        for g in gens {
            let next = apply_aut(&AutWord::new(vec![g]), &point, ActionSide::Point);
            if reached.iter().any(|(p, _)| p.eq_proj(&next)) {
                continue;
            }
            let mut w = word.clone();
            w.push(g);
            assert!(w.len() <= 12, "orbit word exceeded the depth bound");
            reached.push((next, w));
        }
    }
    assert_eq!(reached.len(), 45, "orbit of the base singular point");
    // Stored per point: the inverse word, i.e. the one taking the point back
    // to the base.
    WordTable {
        entries: reached
            .into_iter()
            .map(|(p, w)| (p, w.inverse()))
            .collect(),
    }
}

fn word_table(fp: &FieldParams) -> Arc<WordTable> {
    static TABLES: OnceLock<Mutex<HashMap<u64, Arc<WordTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = tables.lock().expect("word table lock");
    guard
        .entry(fp.p())
        .or_insert_with(|| Arc::new(build_word_table(fp)))
        .clone()
}

/// A word `w` with `apply_aut(w, h, Point)` projectively equal to
/// `(0 : 0 : 0 : -1 : 1)`.
///
/// Only singular points admit one; a nonsingular `h` is rejected with
/// [`Error::NotAProduct`] because the surface above it does not split.  The
/// 45-entry table is computed once per modulus and cached for the process.
pub fn product_structure_word(h: &P4) -> Result<AutWord> {
    if !classify_singularity(h)?.is_singular() {
        return Err(Error::NotAProduct);
    }
    let table = word_table(&h.params());
    let entry = table
        .entries
        .iter()
        .find(|(p, _)| p.eq_proj(h))
        .expect("singular point missing from the orbit table");
    Ok(entry.1.clone())
}

// ================================================================================
// Sampling
// ================================================================================

/// A random nonsingular point of `B`, found by solving the defining quartic
/// for the last coordinate over random slices.
///
/// With the first coordinate fixed to 1 the equation is a depressed cubic in
/// `x4`, so each attempt succeeds with constant probability; the retry budget
/// is generous and failures surface as [`Error::SamplingFailed`].
pub fn random_smooth_point(fp: &FieldParams, rng: &mut impl RngCore) -> Result<P4> {
    const ATTEMPTS: u32 = 200;
    for _ in 0..ATTEMPTS {
        let x1 = fp.random(rng);
        let x2 = fp.random(rng);
        let x3 = fp.random(rng);
        // F(1, x1, x2, x3, x4) = x4^3 + 3 x1 x2 x3 x4 + (1 + x1^3 + x2^3 + x3^3).
        let p = (x1 * x2 * x3).mul_small(3);
        let q = fp.one() + x1.cube() + x2.cube() + x3.cube();
        let Some(x4) = solve_depressed_cubic(p, q) else {
            continue;
        };
        let h = P4::new([fp.one(), x1, x2, x3, x4]).expect("first coordinate is 1");
        debug_assert!(is_on_quartic(&h));
        if classify_singularity(&h)? == SingularityClass::Nonsingular {
            return Ok(h);
        }
    }
    Err(Error::SamplingFailed(ATTEMPTS))
}

// ================================================================================
// Tests
// ================================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f269() -> FieldParams {
        FieldParams::new(269).unwrap()
    }

    #[test]
    fn quartic_values_at_known_points() {
        let fp = f269();
        assert!(eval_f(&base_singular_point(&fp)).is_zero());
        assert_eq!(
            eval_f(&P4::from_i64(&fp, [(1, 0), (0, 0), (0, 0), (0, 0), (0, 0)])),
            fp.one()
        );
        // The nonsingular coefficient vector of the glued surface in the
        // reference chain over p = 269.
        let h1 = P4::from_i64(&fp, [(104, 0), (76, 0), (167, 203), (233, 66), (1, 0)]);
        assert!(is_on_quartic(&h1));
        assert_eq!(
            classify_singularity(&h1).unwrap(),
            SingularityClass::Nonsingular
        );
    }

    #[test]
    fn singular_points_are_exactly_the_lists() {
        let fp = f269();
        let pts = singular_points(&fp);
        assert_eq!(pts.len(), 45);
        // Pairwise distinct projectively, on the quartic, gradient zero.
        for (i, p) in pts.iter().enumerate() {
            assert!(is_on_quartic(p));
            assert_eq!(gradient(p), Err(Error::ZeroVector));
            assert!(classify_singularity(p).unwrap().is_singular());
            for q in &pts[i + 1..] {
                assert!(!p.eq_proj(q));
            }
        }
    }

    #[test]
    fn classification_round_trips() {
        let fp = f269();
        assert_eq!(
            classify_singularity(&base_singular_point(&fp)).unwrap(),
            SingularityClass::TypeA {
                neg_slot: 3,
                one_slot: 4,
                omega_exp: 0
            }
        );
        let b = P4::from_i64(&fp, [(1, 0), (-1, 0), (-1, 0), (-1, 0), (-1, 0)]);
        assert_eq!(
            classify_singularity(&b).unwrap(),
            SingularityClass::TypeB { exps: [0, 0, 0] }
        );
        // Off the quartic.
        let off = P4::from_i64(&fp, [(1, 0), (0, 0), (0, 0), (0, 0), (0, 0)]);
        assert_eq!(classify_singularity(&off), Err(Error::NotOnQuartic));
        // A smooth point with only two nonzero coordinates, to exercise the
        // near-miss of the type (a) pattern.
        let near = P4::from_i64(&fp, [(0, 0), (1, 0), (2, 0), (0, 0), (0, 0)]);
        assert!(is_on_quartic(&near));
        assert_eq!(
            classify_singularity(&near).unwrap(),
            SingularityClass::Nonsingular
        );
    }

    #[test]
    fn gradient_is_the_derivative_of_f() {
        // Interpolate t -> F(h + t v) through five points and compare the
        // linear coefficient with grad F(h) . v.  This pins the gradient
        // formula against the quartic itself rather than a re-derivation.
        let fp = f269();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let h = P4::random(&fp, &mut rng);
            let v = P4::random(&fp, &mut rng);
            let Ok(g) = gradient(&h) else { continue };
            let gc = *g.coords();
            let dot = (0..5).fold(fp.zero(), |acc, i| acc + gc[i] * v.coord(i));
            // Five samples pin the quartic polynomial in t; read off the
            // linear coefficient from the Vandermonde system.
            let ts: Vec<Fp2> = (1..=5).map(|t| fp.el(t, 0)).collect();
            let vals: Vec<Fp2> = ts
                .iter()
                .map(|t| {
                    let shifted: [Fp2; 5] =
                        std::array::from_fn(|i| h.coord(i) + *t * v.coord(i));
                    eval_f(&P4::new(shifted).expect("generic shift"))
                })
                .collect();
            let coeff1 = vandermonde_coefficient(&fp, &ts, &vals, 1);
            assert_eq!(coeff1, dot);
        }
    }

    fn vandermonde_coefficient(fp: &FieldParams, ts: &[Fp2], vals: &[Fp2], want: usize) -> Fp2 {
        use crate::linalg::solve;
        let mut m = [[fp.zero(); 5]; 5];
        let mut b = [fp.zero(); 5];
        for r in 0..5 {
            let mut pw = fp.one();
            for c in 0..5 {
                m[r][c] = pw;
                pw = pw * ts[r];
            }
            b[r] = vals[r];
        }
        let sol = solve(&m, &b).expect("distinct interpolation nodes");
        sol[want]
    }

    #[test]
    fn gradient_lands_on_the_dual_side() {
        let fp = f269();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let h = random_smooth_point(&fp, &mut rng).unwrap();
            let d = gradient(&h).unwrap();
            // Euler relation: the point lies on its own tangent hyperplane.
            assert!(coble_relation(&h, &d));
        }
    }

    #[test]
    fn hessian_relation_and_homogeneity() {
        let fp = f269();
        // Neutral vector (-2w : w : w : w^2 : 1) of the glued surface in the
        // reference chain; the Hessian relation doubles the tail entries.
        let t = P4::from_i64(&fp, [(0, -2), (0, 1), (0, 1), (-1, -1), (1, 0)]);
        let tc = *t.coords();
        let doubled = P4::new([
            tc[0],
            tc[1].mul_small(2),
            tc[2].mul_small(2),
            tc[3].mul_small(2),
            tc[4].mul_small(2),
        ])
        .unwrap();
        assert!(eval_hf(&doubled).is_zero());
        // Product-surface neutral pattern.
        let prod = P4::from_i64(&fp, [(0, 0), (0, 0), (0, 0), (2, 0), (-2, 0)]);
        assert!(eval_hf(&prod).is_zero());
        // Degree-10 homogeneity.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let x = P4::random(&fp, &mut rng);
        let c = fp.el(7, 3);
        assert_eq!(eval_hf(&x.scale(c)), eval_hf(&x) * c.pow(10));
        // Degree-4 homogeneity of F itself, while we are at it.
        assert_eq!(eval_f(&x.scale(c)), eval_f(&x) * c.pow(4));
    }

    #[test]
    fn generators_preserve_f_up_to_scalar() {
        let fp = f269();
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for g in [AutGen::M, AutGen::S0(1), AutGen::S1(1), AutGen::S2(1)] {
            let w = AutWord::new(vec![g]);
            let mut ratio: Option<Fp2> = None;
            for _ in 0..8 {
                let x = P4::random(&fp, &mut rng);
                let fx = eval_f(&x);
                if fx.is_zero() {
                    continue;
                }
                let fy = eval_f(&apply_aut(&w, &x, ActionSide::Point));
                let r = fy.div(&fx).unwrap();
                match ratio {
                    None => ratio = Some(r),
                    Some(prev) => assert_eq!(prev, r, "scalar drifts for {g}"),
                }
            }
            assert!(ratio.is_some());
        }
    }

    #[test]
    fn m_squares_to_a_scalar_and_actions_invert() {
        let fp = f269();
        let m = AutGen::M.matrix(&fp);
        let mm = crate::linalg::mat_mul(&m, &m);
        for r in 0..5 {
            for c in 0..5 {
                let want = if r == c { fp.el(9, 0) } else { fp.zero() };
                assert_eq!(mm[r][c], want);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let x = P4::random(&fp, &mut rng);
        // S0 acts diagonally as stated.
        let ones = P4::from_i64(&fp, [(1, 0), (1, 0), (1, 0), (1, 0), (1, 0)]);
        let s0 = apply_aut(&AutWord::new(vec![AutGen::S0(1)]), &ones, ActionSide::Point);
        assert!(s0.eq_proj(&P4::new([
            fp.one(),
            fp.omega(),
            fp.one(),
            fp.omega(),
            fp.omega()
        ])
        .unwrap()));
        // Word inverse undoes the word on both sides.
        let w = AutWord::new(vec![AutGen::M, AutGen::S1(2), AutGen::S2(1), AutGen::M]);
        for side in [ActionSide::Point, ActionSide::Dual] {
            let y = apply_aut(&w, &x, side);
            assert!(apply_aut(&w.inverse(), &y, side).eq_proj(&x));
        }
        // Empty word is the identity; M M is projectively the identity.
        assert!(apply_aut(&AutWord::identity(), &x, ActionSide::Point).eq_proj(&x));
        let w2 = AutWord::new(vec![AutGen::M, AutGen::M]);
        assert!(apply_aut(&w2, &x, ActionSide::Point).eq_proj(&x));
    }

    #[test]
    fn point_and_dual_actions_preserve_coble() {
        let fp = f269();
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let w = AutWord::new(vec![AutGen::S0(2), AutGen::M, AutGen::S2(1)]);
        for _ in 0..10 {
            // Pick h at random and d in its orthogonal hyperplane.
            let h = P4::random(&fp, &mut rng);
            let mut d = *P4::random(&fp, &mut rng).coords();
            // Adjust the last nonzero slot of h to force the relation.
            let k = h.last_nonzero();
            let mut dot = fp.zero();
            for i in 0..5 {
                if i != k {
                    dot = dot + h.coord(i) * d[i];
                }
            }
            d[k] = -dot.div(&h.coord(k)).unwrap();
            let d = P4::new(d).unwrap();
            assert!(coble_relation(&h, &d));
            let hw = apply_aut(&w, &h, ActionSide::Point);
            let dw = apply_aut(&w, &d, ActionSide::Dual);
            assert!(coble_relation(&hw, &dw), "pairing not preserved");
        }
    }

    #[test]
    fn word_search_covers_all_singular_points() {
        let fp = f269();
        let base = base_singular_point(&fp);
        assert!(product_structure_word(&base).unwrap().is_empty());
        for h in singular_points(&fp) {
            let w = product_structure_word(&h).unwrap();
            assert!(w.len() <= 12);
            assert!(apply_aut(&w, &h, ActionSide::Point).eq_proj(&base));
        }
        // Nonsingular points are refused.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let smooth = random_smooth_point(&fp, &mut rng).unwrap();
        assert_eq!(product_structure_word(&smooth), Err(Error::NotAProduct));
        // The table also works at a second modulus.
        let fp2 = FieldParams::new(53).unwrap();
        for h in singular_points(&fp2) {
            let w = product_structure_word(&h).unwrap();
            assert!(apply_aut(&w, &h, ActionSide::Point)
                .eq_proj(&base_singular_point(&fp2)));
        }
    }
}
