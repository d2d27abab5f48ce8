//! Characteristic polynomials and exact spectra.
//!
//! Polynomials are coefficient vectors in ascending degree order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{int, RatMatrix, Rational};
use crate::error::{Error, Result};

/// Coefficients of `det(λI - m)` by the Faddeev-LeVerrier recurrence.
///
/// With `M_0 = 0`, `c_n = 1`, the recurrence is
/// `M_k = m M_{k-1} + c_{n-k+1} I` and `c_{n-k} = -tr(m M_k) / k`.
pub fn char_poly(m: &RatMatrix) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut acc = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &acc;
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        let am = m * &next;
        coeffs[n - k] = -am.trace() / int(k as i64);
        acc = next;
    }
    Ok(coeffs)
}

/// `∏ (λ - root)^multiplicity`.
pub fn poly_from_roots(roots: &[(Rational, usize)]) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for (root, mult) in roots {
        for _ in 0..*mult {
            let mut next = vec![Rational::zero(); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * root;
            }
            p = next;
        }
    }
    p
}

pub fn poly_eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(λ - root)`, assuming it is a root.
fn deflate(p: &[Rational], root: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &carry * root;
        q[i] = carry.clone();
    }
    q
}

/// True iff `m` has exactly the claimed eigenvalues with multiplicities.
pub fn verify_spectrum(m: &RatMatrix, claimed: &[(Rational, usize)]) -> Result<bool> {
    let total: usize = claimed.iter().map(|(_, k)| k).sum();
    if total != m.rows() || !m.is_square() {
        return Err(Error::MultiplicityMismatch {
            expected: m.rows(),
            got: total,
        });
    }
    Ok(char_poly(m)? == poly_from_roots(claimed))
}

/// Rational eigenvalues with multiplicities, ascending, plus the monic
/// factor of the characteristic polynomial that has no rational roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub eigenvalues: Vec<(Rational, usize)>,
    pub irrational_factor: Vec<Rational>,
}

impl Spectrum {
    pub fn is_rational(&self) -> bool {
        self.irrational_factor.len() == 1
    }

    pub fn multiplicity_of(&self, value: &Rational) -> usize {
        self.eigenvalues
            .iter()
            .find(|(v, _)| v == value)
            .map_or(0, |(_, k)| *k)
    }

    /// `0^1.1^1.3^1` style notation.
    pub fn notation(&self) -> String {
        let mut parts: Vec<String> = self
            .eigenvalues
            .iter()
            .map(|(v, k)| format!("{v}^{k}"))
            .collect();
        if !self.is_rational() {
            parts.push(format!("roots{:?}", self.irrational_factor.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
        }
        parts.join(".")
    }
}

/// Exact rational part of the spectrum.
///
/// Scaling `m` by the lcm `s` of its denominators gives an integer matrix
/// whose monic integer characteristic polynomial can only have integer
/// rational roots; those lie within the Gershgorin bound and divide the
/// constant term.
pub fn rational_spectrum(m: &RatMatrix) -> Result<Spectrum> {
    let s = Rational::from_integer(m.denominator_lcm());
    let scaled = m.scale(&s);
    let mut p = char_poly(&scaled)?;
    let bound = (0..scaled.rows())
        .map(|i| scaled.row(i).iter().map(|v| v.abs()).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero)
        .to_integer();
    let bound = bound.to_i64().ok_or_else(|| Error::InvalidArgument("eigenvalue bound too large".into()))?;

    let mut found = Vec::new();
    let zero = Rational::zero();
    let mut zeros = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zeros += 1;
    }
    if zeros > 0 {
        found.push((zero, zeros));
    }
    for t in -bound..=bound {
        if t == 0 || p.len() == 1 {
            continue;
        }
        let constant: BigInt = p[0].to_integer();
        if !constant.is_multiple_of(&BigInt::from(t)) {
            continue;
        }
        let root = int(t);
        let mut mult = 0;
        while p.len() > 1 && poly_eval(&p, &root).is_zero() {
            p = deflate(&p, &root);
            mult += 1;
        }
        if mult > 0 {
            found.push((root, mult));
        }
    }
    let inv_s = Rational::one() / &s;
    let mut eigenvalues: Vec<(Rational, usize)> = found.into_iter().map(|(v, k)| (v * &inv_s, k)).collect();
    eigenvalues.sort_by(|a, b| a.0.cmp(&b.0));
    // Undo the scaling on the leftover factor: q(λ) = s^-d p(sλ).
    let d = p.len() - 1;
    let irrational_factor = p
        .iter()
        .enumerate()
        .map(|(i, c)| c * num_traits::pow(s.clone(), i) / num_traits::pow(s.clone(), d))
        .collect();
    Ok(Spectrum {
        eigenvalues,
        irrational_factor,
    })
}
