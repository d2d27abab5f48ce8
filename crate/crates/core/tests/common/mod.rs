//! Independent reference computations for the integration tests.
//!
//! Everything here works on explicit run vectors with Gram-Schmidt
//! residuals, so it shares no code path with the library's Gram-matrix
//! elimination, and it computes in `BigRational` rather than the library's
//! rational type.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use omep_core::{Plan, RatMatrix, Rational};

pub type Q = BigRational;

fn big(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Library rational for an integer.
pub fn q(n: i64) -> Rational {
    Rational::from(big(n))
}

/// Library rational `n / d`.
pub fn qr(n: i64, d: i64) -> Rational {
    Rational::from(Q::new(BigInt::from(n), BigInt::from(d)))
}

fn to_matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |i, j| Rational::from(f(i, j)))
}

fn row_of(m: &RatMatrix, i: usize) -> Vec<Q> {
    m.row(i).iter().map(Rational::to_big).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal (unnormalized) basis grown one vector at a time.
#[derive(Default)]
pub struct Basis {
    vecs: Vec<Vec<Q>>,
    norms: Vec<Q>,
}

impl Basis {
    pub fn residual(&self, v: &[Q]) -> Vec<Q> {
        let mut r = v.to_vec();
        for (b, nb) in self.vecs.iter().zip(&self.norms) {
            let c = dot(&r, b) / nb;
            if c.is_zero() {
                continue;
            }
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= &c * bi;
            }
        }
        r
    }

    /// Adds `v`; returns whether it was independent of the basis.
    pub fn push(&mut self, v: &[Q]) -> bool {
        let r = self.residual(v);
        let n = dot(&r, &r);
        if n.is_zero() {
            return false;
        }
        self.vecs.push(r);
        self.norms.push(n);
        true
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }
}

pub fn indicators(plan: &Plan, name: &str) -> Vec<Vec<Q>> {
    let idx = plan.factor_names().iter().position(|n| *n == name).expect("factor exists");
    let levels = plan.levels(idx);
    (0..plan.factor(name).unwrap().level_count())
        .map(|l| levels.iter().map(|&x| if x == l { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// `X_U^T (I - P) X_V` with `P` projecting onto the mean and the columns of `eliminate`.
pub fn c_oracle(plan: &Plan, u: &str, v: &str, eliminate: &[&str]) -> RatMatrix {
    let mut basis = Basis::default();
    basis.push(&vec![Q::one(); plan.runs()]);
    for e in eliminate {
        for col in indicators(plan, e) {
            basis.push(&col);
        }
    }
    let ru: Vec<Vec<Q>> = indicators(plan, u).iter().map(|c| basis.residual(c)).collect();
    let rv: Vec<Vec<Q>> = indicators(plan, v).iter().map(|c| basis.residual(c)).collect();
    to_matrix(ru.len(), rv.len(), |i, j| dot(&ru[i], &rv[j]))
}

pub fn full_c_oracle(plan: &Plan, u: &str) -> RatMatrix {
    let others: Vec<&str> = plan.factor_names().into_iter().filter(|n| *n != u).collect();
    c_oracle(plan, u, u, &others)
}

/// Rank of the model matrix `[1, X_A, X_B, ..]`.
pub fn model_rank(plan: &Plan) -> usize {
    let mut basis = Basis::default();
    basis.push(&vec![Q::one(); plan.runs()]);
    for name in plan.factor_names() {
        for col in indicators(plan, name) {
            basis.push(&col);
        }
    }
    basis.len()
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut basis = Basis::default();
    for i in 0..m.rows() {
        basis.push(&row_of(m, i));
    }
    basis.len()
}

/// Dimension of the `lambda`-eigenspace of a symmetric matrix.
pub fn multiplicity(m: &RatMatrix, lambda: &Rational) -> usize {
    let lambda = lambda.to_big();
    let mut basis = Basis::default();
    for i in 0..m.rows() {
        let mut row = row_of(m, i);
        row[i] -= &lambda;
        basis.push(&row);
    }
    m.rows() - basis.len()
}

/// `C_d` entry by entry: `r_i [i = j] - sum_b n_ib n_jb / k_b`.
pub fn design_c_oracle(v: usize, blocks: &[Vec<usize>]) -> RatMatrix {
    to_matrix(v, v, |i, j| {
        let mut c = Q::zero();
        for b in blocks {
            let ni = b.iter().filter(|&&t| t == i).count() as i64;
            let nj = b.iter().filter(|&&t| t == j).count() as i64;
            if i == j {
                c += big(ni);
            }
            c -= Q::new(BigInt::from(ni * nj), BigInt::from(b.len() as i64));
        }
        c
    })
}

/// `c I - (c/n) J`.
pub fn scaled_k(c: Rational, n: usize) -> RatMatrix {
    let c = c.to_big();
    to_matrix(n, n, |i, j| {
        let off = &c / big(n as i64);
        if i == j {
            &c - off
        } else {
            -off
        }
    })
}

/// Counts level pairs of two factors run by run.
pub fn pair_table(a: &[usize], b: &[usize], sa: usize, sb: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0; sb]; sa];
    for (&x, &y) in a.iter().zip(b) {
        t[x][y] += 1;
    }
    t
}

/// `n N^{AB} = r^A (r^B)^T`, by counting.
pub fn proportional(plan: &Plan, a: &str, b: &str) -> bool {
    let ia = plan.factor_names().iter().position(|n| *n == a).unwrap();
    let ib = plan.factor_names().iter().position(|n| *n == b).unwrap();
    let (sa, sb) = (plan.level_count(ia), plan.level_count(ib));
    let t = pair_table(plan.levels(ia), plan.levels(ib), sa, sb);
    let ra: Vec<usize> = t.iter().map(|r| r.iter().sum()).collect();
    let rb: Vec<usize> = (0..sb).map(|j| t.iter().map(|r| r[j]).sum()).collect();
    (0..sa).all(|i| (0..sb).all(|j| plan.runs() * t[i][j] == ra[i] * rb[j]))
}
