//! Projective coordinate vectors over `Fp2`.
//!
//! One generic type covers all the ambient spaces used here: `P^1` for Hesse
//! parameters `(d0 : d1)`, `P^2` for plane cubics, `P^4` for quartic
//! parameters `d`, `h`, `t`, and `P^8` for embedded abelian surfaces.  The
//! const parameter is the number of coordinates, one more than the projective
//! dimension.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::fp2::{FieldParams, Fp2};

/// A point of projective space with `N` homogeneous coordinates, not all zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Projective<const N: usize> {
    c: [Fp2; N],
}

/// `(d0 : d1)` Hesse curve parameters.
pub type P1 = Projective<2>;
/// Plane points `(X : Y : Z)`.
pub type P2 = Projective<3>;
/// Quartic-threefold points and surface parameters.
pub type P4 = Projective<5>;
/// Embedded abelian surface points.
pub type P8 = Projective<9>;

impl<const N: usize> Projective<N> {
    /// Wraps coordinates, rejecting the zero vector and mixed moduli.
    pub fn new(c: [Fp2; N]) -> Result<Self> {
        let p = c[0].p();
        if c.iter().any(|x| x.p() != p) {
            panic!("mixed Fp2 moduli in projective point");
        }
        if c.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(Projective { c })
    }

    /// Tabulated constant points from signed component pairs `(a, b)`.
    pub fn from_i64(fp: &FieldParams, c: [(i64, i64); N]) -> Self {
        let arr = c.map(|(a, b)| fp.el_i64(a, b));
        Projective::new(arr).expect("constant projective point must be nonzero")
    }

    #[inline(always)]
    pub fn coords(&self) -> &[Fp2; N] {
        &self.c
    }

    #[inline(always)]
    pub fn coord(&self, i: usize) -> Fp2 {
        self.c[i]
    }

    #[inline(always)]
    pub fn params(&self) -> FieldParams {
        self.c[0].params()
    }

    /// Projective equality by cross-multiplication against the first nonzero
    /// coordinate; no inversions.
    pub fn eq_proj(&self, other: &Self) -> bool {
        if self.c[0].p() != other.c[0].p() {
            return false;
        }
        let i = match self.c.iter().position(|x| !x.is_zero()) {
            Some(i) => i,
            None => return false,
        };
        if other.c[i].is_zero() {
            return false;
        }
        for j in 0..N {
            if self.c[j] * other.c[i] != other.c[j] * self.c[i] {
                return false;
            }
        }
        true
    }

    /// Index of the last nonzero coordinate.
    pub fn last_nonzero(&self) -> usize {
        self.c
            .iter()
            .rposition(|x| !x.is_zero())
            .expect("projective point cannot be zero")
    }

    /// Canonical representative: scaled so the last nonzero coordinate is 1.
    pub fn normalized(&self) -> Self {
        let i = self.last_nonzero();
        let inv = self.c[i].inv().expect("nonzero by construction");
        let mut c = self.c;
        for x in c.iter_mut() {
            *x = *x * inv;
        }
        Projective { c }
    }

    /// Scales every coordinate by a nonzero constant (same point).
    pub fn scale(&self, s: Fp2) -> Self {
        assert!(!s.is_zero(), "scaling a projective point by zero");
        let mut c = self.c;
        for x in c.iter_mut() {
            *x = *x * s;
        }
        Projective { c }
    }

    /// Applies a function to each coordinate; panics if the image is zero.
    pub fn map(&self, f: impl Fn(Fp2) -> Fp2) -> Self {
        let c = self.c.map(f);
        Projective::new(c).expect("coordinate map must not kill the point")
    }

    /// Uniform random point (rejection-samples the zero vector).
    pub fn random(fp: &FieldParams, rng: &mut impl RngCore) -> Self {
        loop {
            let mut c = [fp.zero(); N];
            for x in c.iter_mut() {
                *x = fp.random(rng);
            }
            if let Ok(pt) = Projective::new(c) {
                return pt;
            }
        }
    }
}

/// Normalizes a batch with a single inversion (Montgomery's trick): each point
/// is scaled so its last nonzero coordinate becomes 1.
pub fn batch_normalize<const N: usize>(points: &mut [Projective<N>]) {
    if points.is_empty() {
        return;
    }
    let fp = points[0].params();
    let denoms: Vec<Fp2> = points.iter().map(|pt| pt.c[pt.last_nonzero()]).collect();
    // Prefix products, one shared inversion, then unwind.
    let mut prefix = Vec::with_capacity(denoms.len());
    let mut acc = fp.one();
    for d in &denoms {
        acc = acc * *d;
        prefix.push(acc);
    }
    let mut inv_acc = acc.inv().expect("denominators are nonzero");
    for i in (0..points.len()).rev() {
        let inv_i = if i == 0 { inv_acc } else { inv_acc * prefix[i - 1] };
        inv_acc = inv_acc * denoms[i];
        for x in points[i].c.iter_mut() {
            *x = *x * inv_i;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f269() -> FieldParams {
        FieldParams::new(269).unwrap()
    }

    #[test]
    fn equality_is_scale_invariant() {
        let fp = f269();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let pt: P4 = Projective::random(&fp, &mut rng);
            let s = loop {
                let s = fp.random(&mut rng);
                if !s.is_zero() {
                    break s;
                }
            };
            assert!(pt.eq_proj(&pt.scale(s)));
            assert!(pt.scale(s).eq_proj(&pt));
        }
        let a = P2::from_i64(&fp, [(1, 0), (2, 0), (0, 0)]);
        let b = P2::from_i64(&fp, [(1, 0), (2, 0), (1, 0)]);
        assert!(!a.eq_proj(&b));
        assert!(!b.eq_proj(&a));
    }

    #[test]
    fn zero_vector_rejected() {
        let fp = f269();
        let z = [fp.zero(); 3];
        assert_eq!(P2::new(z), Err(Error::ZeroVector));
    }

    #[test]
    fn normalization_lands_on_unit_last_coordinate() {
        let fp = f269();
        // (2 : 4) -> (2/4 : 1) = (135 : 1)
        let pt = P1::from_i64(&fp, [(2, 0), (4, 0)]);
        let n = pt.normalized();
        assert_eq!(n.coord(0), fp.el(135, 0));
        assert_eq!(n.coord(1), fp.one());
        // trailing zeros: last nonzero coordinate becomes 1, zeros stay
        let pt = P2::from_i64(&fp, [(3, 0), (6, 0), (0, 0)]);
        let n = pt.normalized();
        assert_eq!(n.coord(1), fp.one());
        assert!(n.coord(2).is_zero());
    }

    #[test]
    fn batch_normalize_matches_pointwise() {
        let fp = f269();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut pts: Vec<P8> = (0..37).map(|_| Projective::random(&fp, &mut rng)).collect();
        let expect: Vec<P8> = pts.iter().map(|p| p.normalized()).collect();
        batch_normalize(&mut pts);
        for (got, want) in pts.iter().zip(&expect) {
            assert_eq!(got, want);
        }
    }
}
