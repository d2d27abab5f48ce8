use num_traits::{One, Zero};

use super::{RatMatrix, Rational};
use crate::error::{Error, Result};

/// Reduced row echelon form together with rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: RatMatrix,
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
}

pub fn rref(m: &RatMatrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            a[(r, j)] *= &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let delta = &f * &a[(r, j)];
                a[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        reduced: a,
        rank: r,
        pivot_columns: pivots,
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).rank
}

/// Exact inverse of a nonsingular square matrix.
pub fn inverse(m: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let aug = RatMatrix::hstack(&[m.clone(), RatMatrix::identity(n)])?;
    let red = rref(&aug);
    if !red.pivot_columns.iter().copied().take(n).eq(0..n) {
        return Err(Error::Singular);
    }
    Ok(red.reduced.block(0, n, n, n))
}

/// Strategy used to build a generalized inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GInverse {
    /// Moore-Penrose inverse from the rank factorization `m = F G`.
    #[default]
    MoorePenrose,
    /// Inverse of a nonsingular `r x r` pivot submatrix, zero elsewhere.
    Reflexive,
}

impl GInverse {
    pub fn apply(self, m: &RatMatrix) -> RatMatrix {
        match self {
            GInverse::MoorePenrose => g_inverse(m),
            GInverse::Reflexive => reflexive_g_inverse(m),
        }
    }
}

/// Moore-Penrose inverse computed as `G^T (G G^T)^-1 (F^T F)^-1 F^T`, where
/// `F` holds the pivot columns of `m` and `G` the nonzero rows of its RREF.
pub fn g_inverse(m: &RatMatrix) -> RatMatrix {
    let red = rref(m);
    let r = red.rank;
    if r == 0 {
        return RatMatrix::zeros(m.cols(), m.rows());
    }
    let all_rows: Vec<usize> = (0..m.rows()).collect();
    let f = m.select(&all_rows, &red.pivot_columns);
    let g = red.reduced.block(0, 0, r, m.cols());
    let gt = g.transpose();
    let ft = f.transpose();
    // Both Gram matrices are r x r with full rank.
    let ggt_inv = inverse(&(&g * &gt)).expect("row space Gram matrix has full rank");
    let ftf_inv = inverse(&(&ft * &f)).expect("column space Gram matrix has full rank");
    &(&(&gt * &ggt_inv) * &ftf_inv) * &ft
}

/// A reflexive generalized inverse: select a nonsingular `r x r` submatrix
/// `W` on independent rows and columns and place `W^-1` at the transposed
/// positions.
pub fn reflexive_g_inverse(m: &RatMatrix) -> RatMatrix {
    let col_basis = rref(m).pivot_columns;
    let row_basis = rref(&m.transpose()).pivot_columns;
    let mut g = RatMatrix::zeros(m.cols(), m.rows());
    if col_basis.is_empty() {
        return g;
    }
    let w = m.select(&row_basis, &col_basis);
    let w_inv = inverse(&w).expect("basis submatrix is nonsingular");
    for (i, &c) in col_basis.iter().enumerate() {
        for (j, &r) in row_basis.iter().enumerate() {
            g[(c, r)] = w_inv[(i, j)].clone();
        }
    }
    g
}

/// `a_b - a_z · zz^- · z_b`, the Schur complement that eliminates the `z` block.
pub fn schur_complement(
    a_b: &RatMatrix,
    a_z: &RatMatrix,
    z_b: &RatMatrix,
    zz: &RatMatrix,
    method: GInverse,
) -> Result<RatMatrix> {
    if a_z.cols() == 0 {
        return Ok(a_b.clone());
    }
    let correction = a_z.try_mul(&method.apply(zz))?.try_mul(z_b)?;
    a_b.try_sub(&correction)
}

/// `x^T (I - z (z^T z)^- z^T) x`: the information left in `x` after the
/// columns of `z` have been eliminated.
pub fn project_out(x: &RatMatrix, z: &RatMatrix) -> Result<RatMatrix> {
    project_out_with(x, z, GInverse::default())
}

pub fn project_out_with(x: &RatMatrix, z: &RatMatrix, method: GInverse) -> Result<RatMatrix> {
    if x.rows() != z.rows() {
        return Err(Error::DimensionMismatch {
            op: "project_out",
            left: x.shape(),
            right: z.shape(),
        });
    }
    let xt = x.transpose();
    let zt = z.transpose();
    let xz = &xt * z;
    schur_complement(&(&xt * x), &xz, &xz.transpose(), &(&zt * z), method)
}

/// Schur complement of a symmetric positive semidefinite matrix onto the
/// indices in `keep`, after eliminating those in `drop` by symmetric
/// Gaussian elimination. Zero pivots are skipped; for PSD input their rows
/// are already zero, so the result equals `m_kk - m_kd (m_dd)^- m_dk` for
/// any generalized inverse.
pub fn eliminate_symmetric(m: &RatMatrix, keep: &[usize], drop: &[usize]) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let order: Vec<usize> = drop.iter().chain(keep).copied().collect();
    let mut a = m.select(&order, &order);
    let n = order.len();
    for k in 0..drop.len() {
        let pivot = a[(k, k)].clone();
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !a[(k, j)].is_zero()) {
                return Err(Error::InvalidArgument("matrix is not positive semidefinite".into()));
            }
            continue;
        }
        let inv = Rational::one() / &pivot;
        // Only the upper triangle is maintained.
        for i in k + 1..n {
            if a[(k, i)].is_zero() {
                continue;
            }
            let f = &a[(k, i)] * &inv;
            for j in i..n {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let delta = &f * &a[(k, j)];
                a[(i, j)] -= delta;
            }
        }
    }
    let d = drop.len();
    let w = keep.len();
    Ok(RatMatrix::from_fn(w, w, |i, j| {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        a[(d + i, d + j)].clone()
    }))
}

/// Exact positive semidefiniteness test for symmetric matrices by symmetric
/// elimination: a negative pivot, or a zero pivot with a nonzero remainder
/// in its row, rules out PSD.
pub fn is_positive_semidefinite(m: &RatMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n {
        let pivot = a[(k, k)].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !a[(k, j)].is_zero()) {
                return false;
            }
            continue;
        }
        let inv = Rational::one() / &pivot;
        for i in k + 1..n {
            if a[(k, i)].is_zero() {
                continue;
            }
            let f = &a[(k, i)] * &inv;
            for j in k + 1..n {
                let delta = &f * &a[(k, j)];
                a[(i, j)] -= delta;
            }
        }
    }
    true
}
