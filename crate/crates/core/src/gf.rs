//! Small finite fields with full lookup tables, and the point spaces the
//! solver scans.
//!
//! An element of `F_{p^m}` is stored as the integer whose base-`p` digits are
//! its polynomial coefficients, constant term first. For `F_4` built on
//! `a^2 + a + 1` that gives `0, 1, a = 2, a + 1 = 3`.

use alloc::vec;
use alloc::vec::Vec;

use crate::minors::MinorPolynomial;
use crate::{Error, Result};

/// Extension fields and their reduction polynomials, coefficients from the
/// constant term up (monic).
const EXTENSIONS: &[(u32, u32, &[u32])] = &[
    (4, 2, &[1, 1, 1]),        // a^2 + a + 1
    (8, 2, &[1, 1, 0, 1]),     // a^3 + a + 1
    (9, 3, &[2, 2, 1]),        // a^2 + 2a + 2
    (16, 2, &[1, 1, 0, 0, 1]), // a^4 + a + 1
];

/// Orders up to which construction also runs the exhaustive axiom check.
const CHECKED_UP_TO: u32 = 16;

fn is_prime(q: u32) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    m: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Field {
    /// Every order [`Field::new`] accepts, ascending.
    pub fn supported_orders() -> Vec<u32> {
        (2..256)
            .filter(|&q| is_prime(q) || EXTENSIONS.iter().any(|e| e.0 == q))
            .collect()
    }

    pub fn new(q: u32) -> Result<Self> {
        let (p, modulus): (u32, Vec<u32>) = if is_prime(q) && q < 256 {
            (q, vec![0, 1])
        } else if let Some(&(_, p, m)) = EXTENSIONS.iter().find(|e| e.0 == q) {
            (p, m.to_vec())
        } else {
            return Err(Error::UnsupportedField(q));
        };
        let m = modulus.len() as u32 - 1;
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, m);
            for b in 0..q {
                let db = digits(b, p, m);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum, p) as u8;
                mul[(a * q + b) as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p) as u8;
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs)
                .find(|&b| add[a * qs + b] == 0)
                .expect("additive inverse") as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .ok_or(Error::UnsupportedField(q))? as u8;
            }
        }
        let field = Field {
            q,
            p,
            m,
            modulus,
            add,
            mul,
            neg,
            inv,
        };
        if q <= CHECKED_UP_TO {
            field
                .check_axioms()
                .map_err(|_| Error::UnsupportedField(q))?;
        }
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Reduction polynomial, constant term first; `[0, 1]` for a prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u8, mut e: u32) -> u8 {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> u8 {
        c.rem_euclid(i64::from(self.p)) as u8
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }

    pub fn check_element(&self, a: u32) -> Result<u8> {
        if a < self.q {
            Ok(a as u8)
        } else {
            Err(Error::ElementOutOfRange {
                element: a,
                q: self.q,
            })
        }
    }

    /// Exhaustive check of the field axioms on the tables.
    pub fn check_axioms(&self) -> core::result::Result<(), &'static str> {
        let q = self.q as u8;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err("identity");
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err("additive inverse");
            }
            if a != 0 && self.mul(a, self.inv[a as usize]) != 1 {
                return Err("multiplicative inverse");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err("commutativity");
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err("additive associativity");
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err("multiplicative associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err("distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    /// Value of a minor at `point` (one element per edge variable).
    pub fn eval(&self, poly: &MinorPolynomial, point: &[u8]) -> Result<u8> {
        if point.len() < poly.num_vars() {
            return Err(Error::PointLength {
                expected: poly.num_vars(),
                got: point.len(),
            });
        }
        let mut acc = 0;
        for t in poly.terms() {
            let mut v = self.from_int(t.coeff);
            for b in t.vars.bits() {
                v = self.mul(v, point[b]);
            }
            acc = self.add(acc, v);
        }
        Ok(acc)
    }
}

fn digits(mut a: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * m];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (m..prod.len()).rev() {
        let c = prod[deg];
        if c != 0 {
            // subtract c * x^(deg-m) * modulus (monic)
            for (k, &mk) in modulus.iter().enumerate() {
                let slot = &mut prod[deg - m + k];
                *slot = (*slot + (p - (c * mk) % p)) % p;
            }
        }
    }
    prod.truncate(m);
    prod
}

/// The points of `F_q^k` (or of `(F_q^*)^k` when `nonzero`), in lexicographic
/// order with the first variable most significant. Point `b` is the
/// mixed-radix expansion of `b`; evaluation-table bit positions use this
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointSpace {
    pub q: u32,
    pub k: usize,
    pub nonzero: bool,
}

impl PointSpace {
    pub fn new(q: u32, k: usize, nonzero: bool) -> Self {
        PointSpace { q, k, nonzero }
    }

    pub fn radix(&self) -> u32 {
        if self.nonzero {
            self.q - 1
        } else {
            self.q
        }
    }

    fn offset(&self) -> u8 {
        self.nonzero as u8
    }

    /// Number of points; saturates at `u128::MAX`.
    pub fn len(&self) -> u128 {
        let r = u128::from(self.radix());
        (0..self.k)
            .try_fold(1u128, |acc, _| acc.checked_mul(r))
            .unwrap_or(u128::MAX)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Errors when the space has more than `budget` points.
    pub fn check_budget(&self, budget: u128) -> Result<u64> {
        let len = self.len();
        if len > budget || len > u128::from(u64::MAX) {
            return Err(Error::Budget {
                what: "exhaustive point scan",
                required: len,
                limit: budget,
            });
        }
        Ok(len as u64)
    }

    pub fn point_at(&self, mut index: u64, out: &mut [u8]) {
        let r = u64::from(self.radix());
        for slot in out[..self.k].iter_mut().rev() {
            *slot = (index % r) as u8 + self.offset();
            index /= r;
        }
    }

    pub fn index_of(&self, point: &[u8]) -> Option<u64> {
        let r = u64::from(self.radix());
        point.iter().try_fold(0u64, |acc, &v| {
            let d = v
                .checked_sub(self.offset())
                .filter(|&d| u32::from(d) < self.radix())?;
            Some(acc * r + u64::from(d))
        })
    }

    /// Moves `point` to its successor; false after the last point.
    #[inline]
    pub fn advance(&self, point: &mut [u8]) -> bool {
        let top = (self.radix() as u8)
            .wrapping_add(self.offset())
            .wrapping_sub(1);
        for slot in point[..self.k].iter_mut().rev() {
            if *slot < top {
                *slot += 1;
                return true;
            }
            *slot = self.offset();
        }
        false
    }

    pub fn iter(&self) -> Points {
        Points {
            space: *self,
            next: if self.is_empty() {
                None
            } else {
                Some(vec![self.offset(); self.k])
            },
        }
    }
}

pub struct Points {
    space: PointSpace,
    next: Option<Vec<u8>>,
}

impl Iterator for Points {
    type Item = Vec<u8>;
    fn next(&mut self) -> Option<Vec<u8>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if self.space.advance(&mut succ) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Stream of `(F_q^*)^k`, refusing spaces larger than `budget`.
pub fn iterate_nonzero_points(field: &Field, k: usize, budget: u128) -> Result<Points> {
    let space = PointSpace::new(field.order(), k, true);
    space.check_budget(budget)?;
    Ok(space.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_field_examples() {
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.mul(2, 3), 1); // a(a+1) = 1
        assert_eq!(f4.mul(2, 2), 3); // a^2 = a+1
        let f5 = Field::new(5).unwrap();
        assert_eq!(f5.mul(2, 3), 1);
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
    }

    #[test]
    fn unsupported_orders() {
        for q in [0, 1, 6, 10, 12, 15, 25, 256, 1000] {
            assert_eq!(Field::new(q).unwrap_err(), Error::UnsupportedField(q));
        }
    }

    #[test]
    fn axioms_and_frobenius() {
        for q in Field::supported_orders().into_iter().filter(|&q| q <= 31) {
            let f = Field::new(q).unwrap();
            f.check_axioms().unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a, "q={q} a={a}");
            }
            // the multiplicative group is cyclic of order q-1
            assert!(f
                .elements()
                .skip(1)
                .any(|g| (1..q - 1).all(|e| f.pow(g, e) != 1)));
        }
        assert_eq!(
            &Field::supported_orders()[..10],
            &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
        );
    }

    #[test]
    fn point_counts() {
        assert_eq!(PointSpace::new(3, 12, true).len(), 4096);
        assert_eq!(PointSpace::new(4, 12, true).len(), 531441);
        assert_eq!(PointSpace::new(5, 12, true).len(), 16777216);
        assert_eq!(PointSpace::new(2, 12, true).len(), 1);
        assert_eq!(PointSpace::new(2, 3, false).len(), 8);
        let f3 = Field::new(3).unwrap();
        assert_eq!(
            iterate_nonzero_points(&f3, 12, 1 << 20).unwrap().count(),
            4096
        );
        assert!(matches!(
            iterate_nonzero_points(&Field::new(5).unwrap(), 12, 1000),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn point_order_is_stable_and_indexed() {
        for space in [PointSpace::new(4, 3, true), PointSpace::new(3, 4, false)] {
            let mut buf = vec![0u8; space.k];
            for (b, pt) in space.iter().enumerate() {
                space.point_at(b as u64, &mut buf);
                assert_eq!(buf, pt);
                assert_eq!(space.index_of(&pt), Some(b as u64));
            }
            assert_eq!(space.iter().count() as u128, space.len());
        }
        assert_eq!(PointSpace::new(4, 2, true).index_of(&[0, 1]), None);
    }

    #[test]
    fn eval_examples() {
        let l4 = crate::Lattice::new(4).unwrap();
        let pl = |labels: [usize; 4]| crate::Placement::new(&l4, labels).unwrap();
        let ones = [1u8; 12];
        let f2 = Field::new(2).unwrap();
        let f3 = Field::new(3).unwrap();
        let m = crate::minors::minor(&l4, &pl([2, 5, 7, 10]));
        assert_eq!(f2.eval(&m, &ones).unwrap(), 0);
        let m = crate::minors::minor(&l4, &pl([1, 2, 4, 9]));
        // both terms carry the same sign; with the sign convention the sum is -2 = 1
        assert_eq!(f3.eval(&m, &ones).unwrap(), f3.from_int(-2));
        assert_eq!(f3.eval(&m.negated(), &ones).unwrap(), 2);
        assert!(matches!(
            f3.eval(&m, &[1; 3]),
            Err(Error::PointLength { .. })
        ));
    }
}
