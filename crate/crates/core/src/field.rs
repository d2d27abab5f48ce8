//! Prime-power finite fields GF(p^d).
//!
//! Elements are stored by index: the coefficient vector `(c_0, .., c_{d-1})`
//! of the polynomial `c_0 + c_1 x + ..` maps to `Σ c_i p^i`. This ordering is
//! the fixed bijection onto `0..k` used when an array needs plain symbols.

use crate::error::{Error, Result};

/// Splits `k` as `p^d` with `p` prime, if possible.
pub fn prime_power(k: u64) -> Option<(u32, u32)> {
    if k < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= k).find(|d| k.is_multiple_of(*d)).unwrap_or(k);
    let mut rest = k;
    let mut d = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p as u32, d))
}

/// Element of a [`FieldSpec`], by index in `0..order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    degree: u32,
    /// Monic irreducible modulus, ascending coefficients, length `degree + 1`.
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Field of order `k`. The modulus is the monic irreducible polynomial of
    /// degree `d` whose lower coefficients have the smallest index encoding.
    pub fn new(k: u64) -> Result<Self> {
        let (p, degree) = prime_power(k).ok_or(Error::NotPrimePower(k))?;
        let modulus = if degree == 1 {
            vec![0, 1]
        } else {
            let tail_count = (p as u64).pow(degree);
            (0..tail_count)
                .map(|code| {
                    let mut m = digits(code, p, degree as usize);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        Ok(Self { p, degree, modulus })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.degree)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.order() {
            Ok(FieldElement(index))
        } else {
            Err(Error::InvalidElement {
                index,
                order: self.order(),
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.degree as usize)
    }

    fn element_from_coefficients(&self, c: &[u32]) -> FieldElement {
        FieldElement(c.iter().rev().fold(0, |acc, &v| acc * self.p + v))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (ca, cb) = (self.coefficients(a), self.coefficients(b));
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.element_from_coefficients(&sum)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let c: Vec<u32> = self
            .coefficients(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.element_from_coefficients(&c)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (ca, cb) = (self.coefficients(a), self.coefficients(b));
        let d = self.degree as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce top-down using x^d = -(m_0 + .. + m_{d-1} x^{d-1}).
        for top in (d..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &m) in self.modulus[..d].iter().enumerate() {
                let idx = top - d + k;
                prod[idx] = (prod[idx] + (p - lead) * m as u64) % p;
            }
        }
        let reduced: Vec<u32> = prod[..d].iter().map(|&v| v as u32).collect();
        self.element_from_coefficients(&reduced)
    }

    /// Multiplicative inverse via `a^(k-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let mut exp = self.order() - 2;
        let mut base = a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Ok(acc)
    }
}

fn digits(mut code: u64, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % base as u64) as u32);
        code /= base as u64;
    }
    out
}

/// Remainder of `a mod b` over GF(p); `b` monic.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&v| v as u64).collect();
    let db = b.len() - 1;
    let p = p as u64;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (k, &c) in b.iter().enumerate() {
                r[shift + k] = (r[shift + k] + (p - lead) * c as u64) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|v| v as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if poly_rem(m, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(3), Some((3, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
    }

    #[test]
    fn field_make_examples() {
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!((f3.characteristic(), f3.degree()), (3, 1));
        assert_eq!(f3.modulus(), &[0, 1]);

        let f4 = FieldSpec::new(4).unwrap();
        assert_eq!((f4.characteristic(), f4.degree()), (2, 2));
        assert_eq!(f4.modulus(), &[1, 1, 1]);

        assert_eq!(FieldSpec::new(6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn gf4_modulus_is_only_irreducible_quadratic() {
        // Exhaustive root check over GF(2) for x^2 + a x + b.
        let irreducible: Vec<(u32, u32)> = (0..2)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .filter(|&(a, b)| (0..2).all(|x| (x * x + a * x + b) % 2 != 0))
            .collect();
        assert_eq!(irreducible, vec![(1, 1)]);
    }

    #[test]
    fn gf4_x_times_x() {
        let f = FieldSpec::new(4).unwrap();
        let x = f.element(2).unwrap();
        // x^2 = x + 1 mod x^2 + x + 1, i.e. coefficients (1, 1), index 3.
        assert_eq!(f.coefficients(f.mul(x, x)), vec![1, 1]);
    }

    #[test]
    fn gf5_inverse_of_two() {
        let f = FieldSpec::new(5).unwrap();
        assert_eq!(f.inv(f.element(2).unwrap()).unwrap().index(), 3);
        assert_eq!(f.inv(f.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn element_bounds() {
        let f = FieldSpec::new(8).unwrap();
        assert!(f.element(7).is_ok());
        assert_eq!(f.element(8), Err(Error::InvalidElement { index: 8, order: 8 }));
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldSpec::new(9).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = FieldSpec::new(k).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if a != f.zero() {
                    let inverses: Vec<_> = els.iter().filter(|&&b| f.mul(a, b) == f.one()).collect();
                    assert_eq!(inverses.len(), 1, "unique inverse in GF({k})");
                    assert_eq!(*inverses[0], f.inv(a).unwrap());
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }
}
