//! The quadratic extension `Fp2 = Fp[w]/(w^2 + w + 1)`.
//!
//! The modulus is a runtime parameter: a prime `p > 3` with `p = 2 mod 3`, so
//! that `w^2 + w + 1` is irreducible and `w` is a primitive cube root of
//! unity.  Elements are stored as `a + b*w` with `a, b` reduced mod `p`.
//!
//! Multiplications by `w` and `w^2` are component shuffles and never touch the
//! multiplier, so the evaluation cost model can treat them as free.  The
//! [`OpCounter`] tracks multiplications, squarings, cubings and inversions for
//! the code paths that care (isogeny evaluation); ordinary operator calls are
//! not counted.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::RngCore;

use crate::error::{Error, Result};

// ================================================================================
// Field parameters
// ================================================================================

/// The prime modulus and derived constants for one instantiation of `Fp2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldParams {
    p: u64,
}

impl FieldParams {
    /// Validates and wraps a modulus.  Requires `p > 3`, prime, `p = 2 mod 3`.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p % 3 != 2 || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(FieldParams { p })
    }

    #[inline(always)]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Order of the multiplicative group, `p^2 - 1`.
    #[inline]
    pub fn group_order(&self) -> u128 {
        (self.p as u128) * (self.p as u128) - 1
    }

    /// Builds an element `a + b*w`, reducing both components mod `p`.
    #[inline]
    pub fn el(&self, a: u64, b: u64) -> Fp2 {
        Fp2 {
            a: a % self.p,
            b: b % self.p,
            p: self.p,
        }
    }

    /// Element from a signed pair; convenient for small tabulated constants.
    #[inline]
    pub fn el_i64(&self, a: i64, b: i64) -> Fp2 {
        let p = self.p as i64;
        let ra = a.rem_euclid(p) as u64;
        let rb = b.rem_euclid(p) as u64;
        self.el(ra, rb)
    }

    #[inline]
    pub fn zero(&self) -> Fp2 {
        self.el(0, 0)
    }

    #[inline]
    pub fn one(&self) -> Fp2 {
        self.el(1, 0)
    }

    /// The fixed primitive cube root of unity `w`.
    #[inline]
    pub fn omega(&self) -> Fp2 {
        self.el(0, 1)
    }

    /// `w^2 = -1 - w`.
    #[inline]
    /// `omega^k` for `k` reduced mod 3.
    pub fn omega_pow(&self, k: u8) -> Fp2 {
        match k % 3 {
            0 => self.one(),
            1 => self.omega(),
            _ => self.omega_sq(),
        }
    }

    pub fn omega_sq(&self) -> Fp2 {
        self.el(self.p - 1, self.p - 1)
    }

    /// Uniform random element.
    pub fn random(&self, rng: &mut impl RngCore) -> Fp2 {
        // Rejection-free: modulo bias is irrelevant at the sizes handled here,
        // but staying uniform is a one-liner with 128-bit reduction.
        let a = (rng.next_u64() as u128 % self.p as u128) as u64;
        let b = (rng.next_u64() as u128 % self.p as u128) as u64;
        self.el(a, b)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs with the standard base set.
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline(always)]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

// ================================================================================
// Elements
// ================================================================================

/// An element `a + b*w` of `Fp2`, carrying its modulus.
///
/// Arithmetic operators panic if the two operands live over different moduli;
/// all data-dependent failure modes return `Result` instead.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    a: u64,
    b: u64,
    p: u64,
}

impl Fp2 {
    #[inline(always)]
    pub fn params(&self) -> FieldParams {
        FieldParams { p: self.p }
    }

    #[inline(always)]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Components `(a, b)` of `a + b*w`.
    #[inline(always)]
    pub fn parts(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    #[inline(always)]
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    #[inline(always)]
    fn same_field(&self, rhs: &Fp2) {
        assert_eq!(self.p, rhs.p, "mixed Fp2 moduli: {} vs {}", self.p, rhs.p);
    }

    #[inline(always)]
    fn add_raw(x: u64, y: u64, p: u64) -> u64 {
        let s = x + y; // p < 2^63 in practice; via u128 if anyone pushes it
        if s >= p {
            s - p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub_raw(x: u64, y: u64, p: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + p - y
        }
    }

    /// `self * w`, as a component shuffle: `(a + b w) w = -b + (a - b) w`.
    #[inline]
    pub fn mul_omega(&self) -> Fp2 {
        Fp2 {
            a: Self::sub_raw(0, self.b, self.p),
            b: Self::sub_raw(self.a, self.b, self.p),
            p: self.p,
        }
    }

    /// `self * w^2 = (b - a) - a w`.
    #[inline]
    pub fn mul_omega_sq(&self) -> Fp2 {
        Fp2 {
            a: Self::sub_raw(self.b, self.a, self.p),
            b: Self::sub_raw(0, self.a, self.p),
            p: self.p,
        }
    }

    /// `self * w^k` for `k mod 3`.
    #[inline]
    pub fn mul_omega_pow(&self, k: u8) -> Fp2 {
        match k % 3 {
            0 => *self,
            1 => self.mul_omega(),
            _ => self.mul_omega_sq(),
        }
    }

    /// Frobenius conjugate `a + b*w^2 = (a - b) - b*w`.
    #[inline]
    pub fn conj(&self) -> Fp2 {
        Fp2 {
            a: Self::sub_raw(self.a, self.b, self.p),
            b: Self::sub_raw(0, self.b, self.p),
            p: self.p,
        }
    }

    /// Multiplication by a small integer constant (repeated addition; not
    /// counted as a field multiplication).
    #[inline]
    pub fn mul_small(&self, k: i64) -> Fp2 {
        let p = self.p as i64;
        let r = k.rem_euclid(p) as u64;
        let a = mul_mod_u64(self.a, r, self.p);
        let b = mul_mod_u64(self.b, r, self.p);
        Fp2 { a, b, p: self.p }
    }

    /// Uncounted square.
    #[inline]
    pub fn square(&self) -> Fp2 {
        // (a + b w)^2 = a^2 - b^2 + (2ab - b^2) w
        let p = self.p;
        let aa = mul_mod_u64(self.a, self.a, p);
        let bb = mul_mod_u64(self.b, self.b, p);
        let ab = mul_mod_u64(self.a, self.b, p);
        Fp2 {
            a: Self::sub_raw(aa, bb, p),
            b: Self::sub_raw(Self::add_raw(ab, ab, p), bb, p),
            p,
        }
    }

    /// Uncounted cube, computed as one squaring and one multiplication.
    #[inline]
    pub fn cube(&self) -> Fp2 {
        self.square() * *self
    }

    /// Counted multiplication.
    #[inline]
    pub fn mul_counted(&self, rhs: &Fp2, ctr: &mut OpCounter) -> Fp2 {
        ctr.mults += 1;
        *self * *rhs
    }

    /// Counted squaring.
    #[inline]
    pub fn square_counted(&self, ctr: &mut OpCounter) -> Fp2 {
        ctr.squarings += 1;
        self.square()
    }

    /// Counted cubing: one increment of the cubing counter; the decomposed
    /// view charges it as one squaring plus one multiplication.
    #[inline]
    pub fn cube_counted(&self, ctr: &mut OpCounter) -> Fp2 {
        ctr.cubings += 1;
        self.cube()
    }

    /// `self^e` by square-and-multiply.
    pub fn pow(&self, mut e: u128) -> Fp2 {
        let mut base = *self;
        let mut acc = self.params().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Inverse via exponentiation by `p^2 - 2`.
    pub fn inv(&self) -> Result<Fp2> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as u128;
        Ok(self.pow(p * p - 2))
    }

    /// Counted inversion.
    pub fn inv_counted(&self, ctr: &mut OpCounter) -> Result<Fp2> {
        ctr.inversions += 1;
        self.inv()
    }

    /// `self / rhs`.
    pub fn div(&self, rhs: &Fp2) -> Result<Fp2> {
        Ok(*self * rhs.inv()?)
    }

    /// Legendre symbol in `Fp2`: `1` for nonzero squares, `-1` otherwise,
    /// `0` for zero; encoded as `1 / p^2 - 1 ... ` — returned as `i8`.
    pub fn chi(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let e = self.params().group_order() / 2;
        let v = self.pow(e);
        if v == self.params().one() {
            1
        } else {
            -1
        }
    }

    /// A cube root, or `None` if `self` is not a cube.  Since `3 | p + 1`,
    /// cubing is 3-to-1 on units and `x` is a cube iff `x^((p^2-1)/3) = 1`.
    ///
    /// Splits the unit group order as `3^v * m` with `3 ∤ m`, takes the easy
    /// root against the 3-regular part, then corrects the 3-Sylow component
    /// digit by digit (Adleman-Manders-Miller).
    pub fn cbrt(&self) -> Option<Fp2> {
        let fp = self.params();
        if self.is_zero() {
            return Some(*self);
        }
        let order = fp.group_order();
        if self.pow(order / 3) != fp.one() {
            return None;
        }
        let mut m = order;
        let mut v = 0u32;
        while m % 3 == 0 {
            m /= 3;
            v += 1;
        }
        // Generator of the cyclic 3-Sylow subgroup: power up any non-cube.
        let mut k = 0u64;
        let g = loop {
            let z = fp.el(k, 1);
            if !z.is_zero() && z.pow(order / 3) != fp.one() {
                break z.pow(m);
            }
            k += 1;
        };
        // Discrete log of the Sylow component of self in base g, one ternary
        // digit at a time; h generates the order-3 subgroup.
        let b = self.pow(m);
        let h = g.pow(pow3(v - 1));
        let h2 = h.square();
        let mut t: u128 = 0;
        let mut ginv_t = fp.one();
        let g_inv = g.inv().ok()?;
        for i in 0..v {
            let probe = (b * ginv_t).pow(pow3(v - 1 - i));
            let digit = if probe == fp.one() {
                0u128
            } else if probe == h {
                1
            } else if probe == h2 {
                2
            } else {
                return None;
            };
            t += digit * pow3(i);
            ginv_t = ginv_t * g_inv.pow(digit * pow3(i));
        }
        if t % 3 != 0 {
            return None;
        }
        // Solve (self^alpha * g^beta)^3 = self with 3*alpha = 1 + c*m.
        let alpha = mod_inverse_u128(3, m)?;
        let c = (3 * alpha - 1) / m;
        let s = t / 3;
        let sylow = pow3(v);
        let beta_neg = (s % sylow) * (c % sylow) % sylow;
        let root = self.pow(alpha) * g_inv.pow(beta_neg);
        if root.cube() == *self {
            Some(root)
        } else {
            None
        }
    }

    /// Square root by Tonelli-Shanks over `Fp2`, or `None` for non-squares.
    pub fn sqrt(&self) -> Option<Fp2> {
        let fp = self.params();
        if self.is_zero() {
            return Some(*self);
        }
        if self.chi() != 1 {
            return None;
        }
        // q - 1 = 2^s * t with t odd
        let q1 = fp.group_order();
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        // Deterministic non-residue search: k + w for k = 0, 1, 2, ...
        let mut z = fp.omega();
        let mut k = 0u64;
        while z.chi() != -1 {
            k += 1;
            z = fp.el(k, 1);
        }
        let mut m = s;
        let mut c = z.pow(t);
        let mut u = self.pow(t);
        let mut r = self.pow((t + 1) / 2);
        while u != fp.one() {
            // Find least i with u^(2^i) = 1.
            let mut i = 0u32;
            let mut probe = u;
            while probe != fp.one() {
                probe = probe.square();
                i += 1;
                if i == m {
                    return None; // unreachable for genuine squares
                }
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            u = u * c;
            r = r * b;
        }
        debug_assert_eq!(r.square(), *self);
        Some(r)
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}w mod {})", self.a, self.b, self.p)
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "w"),
            (0, b) => write!(f, "{b}w"),
            (a, 1) => write!(f, "{a}+w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    #[inline]
    fn add(self, rhs: Fp2) -> Fp2 {
        self.same_field(&rhs);
        Fp2 {
            a: Self::add_raw(self.a, rhs.a, self.p),
            b: Self::add_raw(self.b, rhs.b, self.p),
            p: self.p,
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    #[inline]
    fn sub(self, rhs: Fp2) -> Fp2 {
        self.same_field(&rhs);
        Fp2 {
            a: Self::sub_raw(self.a, rhs.a, self.p),
            b: Self::sub_raw(self.b, rhs.b, self.p),
            p: self.p,
        }
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    #[inline]
    fn neg(self) -> Fp2 {
        Fp2 {
            a: Self::sub_raw(0, self.a, self.p),
            b: Self::sub_raw(0, self.b, self.p),
            p: self.p,
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    #[inline]
    fn mul(self, rhs: Fp2) -> Fp2 {
        self.same_field(&rhs);
        // (a + b w)(c + d w) = ac - bd + (ad + bc - bd) w
        let p = self.p;
        let ac = mul_mod_u64(self.a, rhs.a, p);
        let bd = mul_mod_u64(self.b, rhs.b, p);
        let ad = mul_mod_u64(self.a, rhs.b, p);
        let bc = mul_mod_u64(self.b, rhs.a, p);
        Fp2 {
            a: Self::sub_raw(ac, bd, p),
            b: Self::sub_raw(Self::add_raw(ad, bc, p), bd, p),
            p,
        }
    }
}

impl AddAssign for Fp2 {
    fn add_assign(&mut self, rhs: Fp2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp2 {
    fn sub_assign(&mut self, rhs: Fp2) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp2 {
    fn mul_assign(&mut self, rhs: Fp2) {
        *self = *self * rhs;
    }
}

fn pow3(e: u32) -> u128 {
    3u128.pow(e)
}

pub(crate) fn mod_inverse_u128(a: u128, m: u128) -> Option<u128> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

// ================================================================================
// Operation counting
// ================================================================================

/// Field-operation tally for one evaluation context.
///
/// Cubings are tracked as their own category; [`OpCounter::decomposed`] maps
/// each cubing to one squaring plus one multiplication for comparison with
/// flat M/S cost models.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounter {
    pub mults: u64,
    pub squarings: u64,
    pub cubings: u64,
    pub inversions: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// `(multiplications, squarings)` with cubings expanded as 1M + 1S.
    pub fn decomposed(&self) -> (u64, u64) {
        (self.mults + self.cubings, self.squarings + self.cubings)
    }

    pub fn add(&mut self, other: &OpCounter) {
        self.mults += other.mults;
        self.squarings += other.squarings;
        self.cubings += other.cubings;
        self.inversions += other.inversions;
    }
}

// ================================================================================
// Tests
// ================================================================================
