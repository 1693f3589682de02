//! Small dense linear algebra over `Fp2`.
//!
//! Everything here runs on fixed-size square matrices (3x3 up to 9x9) with
//! plain Gaussian elimination; fields make pivoting trivial.

use crate::fp2::{FieldParams, Fp2};

pub type Mat<const N: usize> = [[Fp2; N]; N];

/// `M * v` (column vector).
pub fn mat_vec<const N: usize>(m: &Mat<N>, v: &[Fp2; N]) -> [Fp2; N] {
    let fp = v[0].params();
    let mut out = [fp.zero(); N];
    for i in 0..N {
        let mut acc = fp.zero();
        for j in 0..N {
            acc += m[i][j] * v[j];
        }
        out[i] = acc;
    }
    out
}

/// `v * M` (row vector).
pub fn vec_mat<const N: usize>(v: &[Fp2; N], m: &Mat<N>) -> [Fp2; N] {
    let fp = v[0].params();
    let mut out = [fp.zero(); N];
    for j in 0..N {
        let mut acc = fp.zero();
        for i in 0..N {
            acc += v[i] * m[i][j];
        }
        out[j] = acc;
    }
    out
}

/// `A * B`.
pub fn mat_mul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let fp = a[0][0].params();
    let mut out = [[fp.zero(); N]; N];
    for i in 0..N {
        for k in 0..N {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..N {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Scales a matrix entrywise.
pub fn mat_scale<const N: usize>(m: &Mat<N>, s: Fp2) -> Mat<N> {
    let mut out = *m;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = *x * s;
        }
    }
    out
}

/// Identity matrix.
pub fn identity<const N: usize>(fp: &FieldParams) -> Mat<N> {
    let mut out = [[fp.zero(); N]; N];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = fp.one();
    }
    out
}

/// Builds a matrix from signed small-integer entries.
pub fn mat_from_i64<const N: usize>(fp: &FieldParams, m: [[i64; N]; N]) -> Mat<N> {
    m.map(|row| row.map(|x| fp.el_i64(x, 0)))
}

/// Determinant by elimination with division.
pub fn det<const N: usize>(m: &Mat<N>) -> Fp2 {
    let fp = m[0][0].params();
    let mut a = *m;
    let mut acc = fp.one();
    for col in 0..N {
        let pivot = (col..N).find(|&r| !a[r][col].is_zero());
        let pr = match pivot {
            Some(pr) => pr,
            None => return fp.zero(),
        };
        if pr != col {
            a.swap(pr, col);
            acc = -acc;
        }
        let piv = a[col][col];
        acc = acc * piv;
        let piv_inv = piv.inv().expect("pivot nonzero");
        for r in (col + 1)..N {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col] * piv_inv;
            for c in col..N {
                let sub = factor * a[col][c];
                a[r][c] = a[r][c] - sub;
            }
        }
    }
    acc
}

/// Matrix inverse, or `None` if singular.
pub fn inverse<const N: usize>(m: &Mat<N>) -> Option<Mat<N>> {
    let fp = m[0][0].params();
    let mut a = *m;
    let mut inv = identity::<N>(&fp);
    for col in 0..N {
        let pr = (col..N).find(|&r| !a[r][col].is_zero())?;
        if pr != col {
            a.swap(pr, col);
            inv.swap(pr, col);
        }
        let piv_inv = a[col][col].inv().expect("pivot nonzero");
        for c in 0..N {
            a[col][c] = a[col][c] * piv_inv;
            inv[col][c] = inv[col][c] * piv_inv;
        }
        for r in 0..N {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for c in 0..N {
                let s1 = factor * a[col][c];
                a[r][c] = a[r][c] - s1;
                let s2 = factor * inv[col][c];
                inv[r][c] = inv[r][c] - s2;
            }
        }
    }
    Some(inv)
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel<const N: usize>(m: &Mat<N>) -> Vec<[Fp2; N]> {
    let fp = m[0][0].params();
    let mut a = *m;
    // Row-reduce, tracking pivot columns.
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..N {
        let pr = match (row..N).find(|&r| !a[r][col].is_zero()) {
            Some(pr) => pr,
            None => continue,
        };
        a.swap(pr, row);
        let piv_inv = a[row][col].inv().expect("pivot nonzero");
        for c in 0..N {
            a[row][c] = a[row][c] * piv_inv;
        }
        for r in 0..N {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col];
            for c in 0..N {
                let s = factor * a[row][c];
                a[r][c] = a[r][c] - s;
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == N {
            break;
        }
    }
    // Free columns parametrize the kernel.
    let mut basis = Vec::new();
    for free in 0..N {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = [fp.zero(); N];
        v[free] = fp.one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Solves `M x = b`; `None` if the system is inconsistent or underdetermined.
pub fn solve<const N: usize>(m: &Mat<N>, b: &[Fp2; N]) -> Option<[Fp2; N]> {
    let inv = inverse(m)?;
    Some(mat_vec(&inv, b))
}
