//! Short Weierstrass curves over `Fp2`: the independent oracle.
//!
//! The Hesse-form machinery is validated against this module, so it stays
//! deliberately boring: affine chord-tangent addition, double-and-add scalar
//! multiplication, Miller's algorithm for the Weil pairing, and Velu's
//! formulas for odd-degree isogenies.  The curves of interest are
//! supersingular with `E(Fp2) = (Z/(p+1))^2`.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::fp2::{FieldParams, Fp2};

// ================================================================================
// Curves and points
// ================================================================================

/// `y^2 = x^3 + a x + b` over `Fp2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    a: Fp2,
    b: Fp2,
}

/// Affine point or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine { x: Fp2, y: Fp2 },
}

impl Point {
    pub fn affine(x: Fp2, y: Fp2) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// `(x, y)` of a finite point.
    pub fn xy(&self) -> Option<(Fp2, Fp2)> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, y } => Some((*x, *y)),
        }
    }
}

impl Curve {
    pub fn new(a: Fp2, b: Fp2) -> Result<Self> {
        let disc = a.cube().mul_small(4) + b.square().mul_small(27);
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Curve { a, b })
    }

    pub fn a(&self) -> Fp2 {
        self.a
    }

    pub fn b(&self) -> Fp2 {
        self.b
    }

    pub fn params(&self) -> FieldParams {
        self.a.params()
    }

    /// `j = 1728 * 4a^3 / (4a^3 + 27b^2)`; the denominator is the
    /// discriminant, nonzero by construction.
    pub fn j_invariant(&self) -> Fp2 {
        let num = self.a.cube().mul_small(4);
        let den = num + self.b.square().mul_small(27);
        num.mul_small(1728) * den.inv().expect("nonsingular curve")
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => y.square() == x.cube() + self.a * *x + self.b,
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: *x, y: -*y },
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1) = match p {
            Point::Infinity => return *q,
            Point::Affine { x, y } => (*x, *y),
        };
        let (x2, y2) = match q {
            Point::Infinity => return *p,
            Point::Affine { x, y } => (*x, *y),
        };
        let m = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return Point::Infinity;
            }
            // Tangent slope (3 x^2 + a) / (2 y).
            let num = x1.square().mul_small(3) + self.a;
            let den = y1.mul_small(2);
            num * den.inv().expect("2y nonzero off 2-torsion")
        } else {
            (y2 - y1) * (x2 - x1).inv().expect("x1 != x2")
        };
        let x3 = m.square() - x1 - x2;
        let y3 = m * (x1 - x3) - y1;
        Point::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Point {
        self.add(p, &self.neg(q))
    }

    /// `[k] P` by double-and-add.
    pub fn scalar_mul(&self, k: u128, p: &Point) -> Point {
        if k == 0 || p.is_infinity() {
            return Point::Infinity;
        }
        let mut acc = Point::Infinity;
        let bits = 128 - k.leading_zeros();
        for i in (0..bits).rev() {
            acc = self.double(&acc);
            if (k >> i) & 1 == 1 {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    /// Order of `p` given that it divides `bound`.
    pub fn point_order(&self, p: &Point, bound: u64) -> u64 {
        let mut order = bound;
        for (ell, _) in factorize(bound) {
            while order % ell == 0 && self.scalar_mul((order / ell) as u128, p).is_infinity() {
                order /= ell;
            }
        }
        order
    }

    /// Uniform-ish random point: random `x` until `x^3 + a x + b` is square.
    pub fn random_point(&self, rng: &mut impl RngCore) -> Point {
        let fp = self.params();
        loop {
            let x = fp.random(rng);
            let rhs = x.cube() + self.a * x + self.b;
            if let Some(y) = rhs.sqrt() {
                // Flip the root half the time so both sheets are hit.
                let y = if rng.next_u32() & 1 == 1 { -y } else { y };
                if !(y.is_zero() && rng.next_u32() & 1 == 1) {
                    return Point::Affine { x, y };
                }
            }
        }
    }

    // ============================================================================
    // Torsion bases
    // ============================================================================

    /// Samples a basis `(P, Q)` of `E[n]`, `n | p + 1`, certified by order
    /// checks and a Weil pairing of exact order `n`.  When `3 | n` the basis
    /// is oriented so that `e_n(Q, P)^(n/3)` is the fixed cube root `w`.
    pub fn torsion_basis(&self, n: u64, rng: &mut impl RngCore) -> Result<(Point, Point)> {
        let fp = self.params();
        let p1 = fp.p() + 1;
        if n == 0 || p1 % n != 0 {
            return Err(Error::BadTorsionOrder(n, p1));
        }
        let p_gen = self.sample_exact_order(n, rng)?;
        for _ in 0..100 {
            let q_gen = self.sample_exact_order(n, rng)?;
            let e = self.weil_pairing(&q_gen, &p_gen, n, rng)?;
            if !has_exact_order(&e, n) {
                continue;
            }
            let mut q_gen = q_gen;
            if n % 3 == 0 {
                // Orient: e_n(Q, P)^(n/3) = w; negating Q inverts the pairing.
                let z = e.pow((n / 3) as u128);
                if z == fp.omega_sq() {
                    q_gen = self.neg(&q_gen);
                } else if z != fp.omega() {
                    continue; // pairing not primitive at 3; resample
                }
            }
            return Ok((p_gen, q_gen));
        }
        Err(Error::SamplingFailed(100))
    }

    /// Samples a point of exact order `n` by cofactor multiplication.
    fn sample_exact_order(&self, n: u64, rng: &mut impl RngCore) -> Result<Point> {
        let cof = ((self.params().p() + 1) / n) as u128;
        let factors = factorize(n);
        for _ in 0..100 {
            let r = self.random_point(rng);
            let cand = self.scalar_mul(cof, &r);
            if !self.scalar_mul(n as u128, &cand).is_infinity() {
                // Wrong twist or bad input curve; no amount of retries helps.
                return Err(Error::InvalidBasis("curve group exponent is not p + 1"));
            }
            if factors
                .iter()
                .all(|&(ell, _)| !self.scalar_mul((n / ell) as u128, &cand).is_infinity())
            {
                return Ok(cand);
            }
        }
        Err(Error::SamplingFailed(100))
    }

    /// Certifies that `(P, Q)` is a basis of `E[n]`: membership, exact orders,
    /// and a Weil pairing of exact order `n`.
    pub fn is_torsion_basis(&self, p: &Point, q: &Point, n: u64, rng: &mut impl RngCore) -> bool {
        if !self.contains(p) || !self.contains(q) {
            return false;
        }
        for pt in [p, q] {
            if !self.scalar_mul(n as u128, pt).is_infinity() {
                return false;
            }
            if factorize(n)
                .iter()
                .any(|&(ell, _)| self.scalar_mul((n / ell) as u128, pt).is_infinity())
            {
                return false;
            }
        }
        match self.weil_pairing(p, q, n, rng) {
            Ok(e) => has_exact_order(&e, n),
            Err(_) => false,
        }
    }

    // ============================================================================
    // Weil pairing (Miller's algorithm)
    // ============================================================================

    /// `e_n(P, Q)` for `P, Q` in `E[n]`.
    ///
    /// Uses Miller functions evaluated on shifted divisors with a random
    /// auxiliary point, retrying whenever a line evaluation degenerates.
    pub fn weil_pairing(
        &self,
        p: &Point,
        q: &Point,
        n: u64,
        rng: &mut impl RngCore,
    ) -> Result<Fp2> {
        let fp = self.params();
        if p.is_infinity() || q.is_infinity() {
            return Ok(fp.one());
        }
        debug_assert!(self.scalar_mul(n as u128, p).is_infinity());
        debug_assert!(self.scalar_mul(n as u128, q).is_infinity());
        for _ in 0..100 {
            let s = self.random_point(rng);
            let qs = self.add(q, &s);
            let ps = self.sub(p, &s);
            let ns = self.neg(&s);
            if s.is_infinity() || qs.is_infinity() || ps.is_infinity() {
                continue;
            }
            let fa = self.miller(p, n, &qs, &s);
            let fb = self.miller(q, n, &ps, &ns);
            if let (Some(a), Some(b)) = (fa, fb) {
                if b.is_zero() {
                    continue;
                }
                let e = a * b.inv()?;
                if e.pow(n as u128) == fp.one() {
                    return Ok(e);
                }
            }
        }
        Err(Error::PairingDegenerate)
    }

    /// Miller function `f_{n,P}` evaluated on the divisor `(U) - (V)`;
    /// `None` if any intermediate line evaluation is degenerate.
    fn miller(&self, p: &Point, n: u64, u: &Point, v: &Point) -> Option<Fp2> {
        let fp = self.params();
        let mut num = fp.one();
        let mut den = fp.one();
        let mut t = *p;
        let bits = 64 - n.leading_zeros();
        for i in (0..bits - 1).rev() {
            let l_u = self.line_eval(&t, &t, u)?;
            let l_v = self.line_eval(&t, &t, v)?;
            t = self.double(&t);
            let w_u = self.vertical_eval(&t, u)?;
            let w_v = self.vertical_eval(&t, v)?;
            num = num.square() * l_u * w_v;
            den = den.square() * l_v * w_u;
            if num.is_zero() || den.is_zero() {
                return None;
            }
            if (n >> i) & 1 == 1 {
                let l_u = self.line_eval(&t, p, u)?;
                let l_v = self.line_eval(&t, p, v)?;
                t = self.add(&t, p);
                let w_u = self.vertical_eval(&t, u)?;
                let w_v = self.vertical_eval(&t, v)?;
                num = num * l_u * w_v;
                den = den * l_v * w_u;
                if num.is_zero() || den.is_zero() {
                    return None;
                }
            }
        }
        Some(num * den.inv().ok()?)
    }

    /// Chord (or tangent) through `a` and `b`, evaluated at the finite point
    /// `x`; `None` when the value is zero or a point at infinity intrudes.
    fn line_eval(&self, a: &Point, b: &Point, x: &Point) -> Option<Fp2> {
        let (xx, xy) = x.xy()?;
        let val = match (a.xy(), b.xy()) {
            (None, None) => self.params().one(),
            (Some((ax, _)), None) | (None, Some((ax, _))) => xx - ax,
            (Some((ax, ay)), Some((bx, by))) => {
                if ax == bx && (ay + by).is_zero() {
                    xx - ax
                } else {
                    let m = if ax == bx {
                        (ax.square().mul_small(3) + self.a) * ay.mul_small(2).inv().ok()?
                    } else {
                        (by - ay) * (bx - ax).inv().ok()?
                    };
                    xy - ay - m * (xx - ax)
                }
            }
        };
        if val.is_zero() {
            None
        } else {
            Some(val)
        }
    }

    /// Vertical line through `s` evaluated at the finite point `x`.
    fn vertical_eval(&self, s: &Point, x: &Point) -> Option<Fp2> {
        let (xx, _) = x.xy()?;
        let val = match s.xy() {
            None => self.params().one(),
            Some((sx, _)) => xx - sx,
        };
        if val.is_zero() {
            None
        } else {
            Some(val)
        }
    }
}

/// Exact multiplicative order test against `n`.
fn has_exact_order(e: &Fp2, n: u64) -> bool {
    let fp = e.params();
    if e.pow(n as u128) != fp.one() {
        return false;
    }
    factorize(n).iter().all(|&(ell, _)| e.pow((n / ell) as u128) != fp.one())
}

/// Trial-division factorization `n = prod ell^k` for the small orders here.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// ================================================================================
// Velu isogenies (odd degree)
// ================================================================================

/// An odd-degree cyclic isogeny in Velu's normalized form.
#[derive(Debug, Clone)]
pub struct VeluIsogeny {
    domain: Curve,
    codomain: Curve,
    ell: u64,
    /// The `ell - 1` finite kernel points.
    kernel: Vec<(Fp2, Fp2)>,
}

/// Builds the isogeny with kernel `<K>`, `K` of odd prime-power order `ell`.
pub fn velu_isogeny(e: &Curve, k: &Point, ell: u64) -> Result<VeluIsogeny> {
    if ell < 3 || ell % 2 == 0 {
        return Err(Error::InvalidKernel("velu kernel order must be odd and >= 3"));
    }
    if !e.contains(k) {
        return Err(Error::NotOnVariety);
    }
    if !e.scalar_mul(ell as u128, k).is_infinity() || k.is_infinity() {
        return Err(Error::InvalidKernel("kernel generator order does not match"));
    }
    let fp = e.params();
    let mut kernel = Vec::with_capacity(ell as usize - 1);
    let mut t = fp.zero();
    let mut w = fp.zero();
    let mut run = *k;
    for _ in 1..ell {
        let (xq, yq) = match run.xy() {
            Some(xy) => xy,
            None => return Err(Error::InvalidKernel("kernel generator order too small")),
        };
        // Per-point contributions: t_Q = 3 x^2 + a, u_Q = 2 y^2.
        let tq = xq.square().mul_small(3) + e.a();
        let uq = yq.square().mul_small(2);
        t += tq;
        w += uq + xq * tq;
        kernel.push((xq, yq));
        run = e.add(&run, k);
    }
    if !run.is_infinity() {
        return Err(Error::InvalidKernel("kernel generator order too large"));
    }
    let codomain = Curve::new(e.a() - t.mul_small(5), e.b() - w.mul_small(7))?;
    Ok(VeluIsogeny { domain: *e, codomain, ell, kernel })
}

impl VeluIsogeny {
    pub fn domain(&self) -> &Curve {
        &self.domain
    }

    pub fn codomain(&self) -> &Curve {
        &self.codomain
    }

    pub fn degree(&self) -> u64 {
        self.ell
    }

    /// Pushes a point through the isogeny.
    pub fn evaluate(&self, p: &Point) -> Point {
        let (x, y) = match p.xy() {
            None => return Point::Infinity,
            Some(xy) => xy,
        };
        if self.kernel.iter().any(|&(xq, _)| xq == x) {
            return Point::Infinity;
        }
        let mut xx = x;
        let mut y_factor = x.params().one();
        for &(xq, yq) in &self.kernel {
            let _ = yq;
            let dx_inv = (x - xq).inv().expect("nonzero off the kernel");
            let dx2 = dx_inv.square();
            let tq = xq.square().mul_small(3) + self.domain.a();
            let uq = yq.square().mul_small(2);
            xx += tq * dx_inv + uq * dx2;
            y_factor = y_factor - (tq * dx2 + uq.mul_small(2) * dx2 * dx_inv);
        }
        Point::Affine { x: xx, y: y * y_factor }
    }

    /// Checks `dual ∘ self = [ell]` on sample points: builds the dual with
    /// kernel `phi(E[ell])`, fixes the isomorphism back to the domain on a
    /// probe point, and compares.
    pub fn compose_with_dual_is_mul_ell(
        &self,
        points: &[Point],
        rng: &mut impl RngCore,
    ) -> Result<bool> {
        // A generator of phi(E[ell]): push an ell-torsion basis point that
        // avoids the kernel.
        let (t_gen, q_gen) = self.domain.torsion_basis(self.ell, rng)?;
        let mut img = self.evaluate(&t_gen);
        if img.is_infinity() {
            img = self.evaluate(&q_gen);
        }
        let dual = velu_isogeny(&self.codomain, &img, self.ell)?;
        // dual lands on a curve isomorphic to the domain via some
        // (x, y) -> (x / u^2, y / u^3); enumerate the finitely many candidates
        // (extra ones only for j = 0 / j = 1728) and let a probe point pick.
        let (a1, b1) = (self.domain.a(), self.domain.b());
        let (a2, b2) = (dual.codomain.a(), dual.codomain.b());
        let mut pairs: Vec<(Fp2, Fp2)> = Vec::new(); // (u^2, u^3) with (u^3)^2 = (u^2)^3
        let push_u2 = |u2: Fp2, pairs: &mut Vec<(Fp2, Fp2)>| {
            if let Some(u3) = u2.cube().sqrt() {
                pairs.push((u2, u3));
                pairs.push((u2, -u3));
            }
        };
        if !a1.is_zero() && !b1.is_zero() {
            // u^4 = a2/a1 and u^6 = b2/b1 force u^2 = (b2 a1) / (a2 b1).
            push_u2(b2 * a1 * (a2 * b1).inv()?, &mut pairs);
        } else if a1.is_zero() {
            // j = 0: u^6 = b2/b1; the three cube roots differ by omega.
            if let Some(r) = (b2 * b1.inv()?).cbrt() {
                push_u2(r, &mut pairs);
                push_u2(r.mul_omega(), &mut pairs);
                push_u2(r.mul_omega_sq(), &mut pairs);
            }
        } else {
            // j = 1728: u^4 = a2/a1.
            if let Some(r) = (a2 * a1.inv()?).sqrt() {
                push_u2(r, &mut pairs);
                push_u2(-r, &mut pairs);
            }
        }
        let probe = self.domain.random_point(rng);
        let want_probe = self.domain.scalar_mul(self.ell as u128, &probe);
        'candidates: for (u2, u3) in pairs {
            if u2.is_zero() || u3.is_zero() {
                continue;
            }
            let (u2i, u3i) = (u2.inv()?, u3.inv()?);
            let map = |pt: &Point| -> Point {
                match pt.xy() {
                    None => Point::Infinity,
                    Some((x, y)) => Point::Affine { x: x * u2i, y: y * u3i },
                }
            };
            if map(&dual.evaluate(&self.evaluate(&probe))) != want_probe {
                continue;
            }
            for pt in points {
                let image = map(&dual.evaluate(&self.evaluate(pt)));
                if image != self.domain.scalar_mul(self.ell as u128, pt) {
                    continue 'candidates;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

// ================================================================================
// Tests
// ================================================================================
