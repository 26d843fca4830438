//! Matrix categories over discrete semirings: objects are natural numbers,
//! morphisms `m -> n` are `m x n` matrices, composition is the matrix product.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub trait Semiring {
    type Elem: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Index of an entry that lies outside the carrier, if any.
    fn check(&self, _a: &Self::Elem) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Natural;

impl Semiring for Natural {
    type Elem = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Integer;

impl Semiring for Integer {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// Semiring on `0..size` given by tables, with all axioms checked exhaustively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemiring {
    size: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
    mul_commutative: bool,
}

impl FiniteSemiring {
    pub fn new(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>, zero: usize, one: usize) -> Result<FiniteSemiring> {
        let n = add.len();
        let shaped = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|&v| v < n));
        if n == 0 || !shaped(&add) || !shaped(&mul) || zero >= n || one >= n {
            return Err(Error::ShapeMismatch("semiring tables must be square over 0..n".into()));
        }
        let s = FiniteSemiring {
            size: n,
            add: add.concat(),
            mul: mul.concat(),
            zero,
            one,
            mul_commutative: false,
        };
        s.check_axioms()?;
        let mul_commutative = (0..n).all(|a| (0..n).all(|b| s.m(a, b) == s.m(b, a)));
        Ok(FiniteSemiring { mul_commutative, ..s })
    }

    /// `{0, 1}` with `or` and `and`.
    pub fn boolean() -> FiniteSemiring {
        FiniteSemiring::new(vec![vec![0, 1], vec![1, 1]], vec![vec![0, 0], vec![0, 1]], 0, 1).expect("boolean semiring")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_mul_commutative(&self) -> bool {
        self.mul_commutative
    }

    fn a(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y]
    }

    fn m(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.size;
        let fail = |what: &str, w: &[usize]| Err(Error::SemiringAxiom(format!("{what} at {w:?}")));
        for x in 0..n {
            if self.a(x, self.zero) != x || self.a(self.zero, x) != x {
                return fail("additive unit", &[x]);
            }
            if self.m(x, self.one) != x || self.m(self.one, x) != x {
                return fail("multiplicative unit", &[x]);
            }
            if self.m(x, self.zero) != self.zero || self.m(self.zero, x) != self.zero {
                return fail("zero annihilates", &[x]);
            }
            for y in 0..n {
                if self.a(x, y) != self.a(y, x) {
                    return fail("additive commutativity", &[x, y]);
                }
                for z in 0..n {
                    if self.a(self.a(x, y), z) != self.a(x, self.a(y, z)) {
                        return fail("additive associativity", &[x, y, z]);
                    }
                    if self.m(self.m(x, y), z) != self.m(x, self.m(y, z)) {
                        return fail("multiplicative associativity", &[x, y, z]);
                    }
                    if self.m(x, self.a(y, z)) != self.a(self.m(x, y), self.m(x, z)) {
                        return fail("left distributivity", &[x, y, z]);
                    }
                    if self.m(self.a(y, z), x) != self.a(self.m(y, x), self.m(z, x)) {
                        return fail("right distributivity", &[x, y, z]);
                    }
                }
            }
        }
        Ok(())
    }
}

impl Semiring for FiniteSemiring {
    type Elem = usize;
    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        self.a(*a, *b)
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.m(*a, *b)
    }
    fn check(&self, a: &usize) -> Result<()> {
        if *a < self.size {
            Ok(())
        } else {
            Err(Error::EntryOutOfCarrier(*a))
        }
    }
}

#[derive(Clone, Debug)]
pub struct SemiringMatrixCat<R: Semiring> {
    pub semiring: R,
}

pub type Matrix<E> = Vec<Vec<E>>;

impl<R: Semiring> SemiringMatrixCat<R> {
    pub fn new(semiring: R) -> Self {
        SemiringMatrixCat { semiring }
    }

    pub fn identity(&self, n: usize) -> Matrix<R::Elem> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.semiring.one() } else { self.semiring.zero() }).collect())
            .collect()
    }

    /// `A: m -> k`, `B: k -> n`, result `m -> n`. `cols_a` fixes the inner
    /// dimension when `A` has no rows.
    pub fn compose(&self, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>, cols_a: usize, cols_b: usize) -> Result<Matrix<R::Elem>> {
        if a.iter().any(|r| r.len() != cols_a) || b.len() != cols_a || b.iter().any(|r| r.len() != cols_b) {
            return Err(Error::ShapeMismatch(format!("{}x{} then {}x{}", a.len(), cols_a, b.len(), cols_b)));
        }
        for e in a.iter().chain(b.iter()).flatten() {
            self.semiring.check(e)?;
        }
        let r = &self.semiring;
        Ok(a.iter()
            .map(|row| {
                (0..cols_b)
                    .map(|j| row.iter().zip(b).fold(r.zero(), |acc, (x, brow)| r.add(&acc, &r.mul(x, &brow[j]))))
                    .collect()
            })
            .collect())
    }
}
