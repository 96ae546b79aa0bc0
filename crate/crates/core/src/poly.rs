//! Sparse integer polynomials with arbitrary exponents.
//!
//! Minors themselves are multilinear and live in [`crate::minors`]; this type
//! is the general ring the oracles work in, where products of non-disjoint
//! paths produce squares before they cancel.

use alloc::collections::btree_map::{BTreeMap, Entry};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::gf::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, i64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, bit: usize) -> Self {
        let mut e = vec![0; nvars];
        e[bit] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u8>, i64)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exponents: Vec<u8>, coeff: i64) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if coeff == 0 {
            return;
        }
        match self.terms.entry(exponents) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], i64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&d| d <= 1))
    }

    pub fn max_degree_per_var(&self) -> u8 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Remainder modulo the field equations `x^q - x`, with coefficients
    /// reduced into `0..p`. Over `F_q` the result is zero exactly when the
    /// polynomial vanishes at every point of `F_q^k`.
    pub fn reduce_field_equations(&self, q: u32, p: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, &c) in &self.terms {
            let reduced: Vec<u8> = e
                .iter()
                .map(|&d| {
                    if d == 0 {
                        0
                    } else {
                        (1 + (u32::from(d) - 1) % (q - 1)) as u8
                    }
                })
                .collect();
            out.add_term(reduced, c);
        }
        out.terms
            .values_mut()
            .for_each(|c| *c = c.rem_euclid(i64::from(p)));
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn eval(&self, field: &Field, point: &[u8]) -> u8 {
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut t = field.from_int(c);
            for (var, &d) in e.iter().enumerate() {
                for _ in 0..d {
                    t = field.mul(t, point[var]);
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_basics() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = &x + &y;
        let d = &x - &y;
        let prod = &s * &d; // x^2 - y^2
        assert_eq!(prod.len(), 2);
        assert!(!prod.is_multilinear());
        assert!((&prod - &prod).is_zero());
        assert_eq!(prod.max_degree_per_var(), 2);
    }

    #[test]
    fn field_equation_reduction() {
        // x^3 - x vanishes on F_3 but not on F_5
        let x = Poly::var(1, 0);
        let x3 = &(&x * &x) * &x;
        let f = &x3 - &x;
        assert!(f.reduce_field_equations(3, 3).is_zero());
        assert!(!f.reduce_field_equations(5, 5).is_zero());
        // x^2 + x over F_2 vanishes
        let g = &(&x * &x) + &x;
        assert!(g.reduce_field_equations(2, 2).is_zero());
        // x^4 - x over F_4 vanishes (coefficients mod 2)
        let x4 = &x3 * &x;
        assert!((&x4 - &x).reduce_field_equations(4, 2).is_zero());
    }
}
