//! 2×2 matrices over any of the library's coefficient domains.

use std::fmt;

use crate::algebra::{Rat, RatFunc, UniPoly};

/// Minimal ring surface shared by the coefficient domains.
pub trait Coeff: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
}

impl Coeff for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
}

impl Coeff for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

#[derive(Clone, PartialEq)]
pub struct Mat2<T: Coeff> {
    /// entries[row][col]
    pub e: [[T; 2]; 2],
}

impl<T: Coeff> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 {
            e: [[a11, a12], [a21, a22]],
        }
    }

    pub fn zero() -> Self {
        Mat2::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Mat2::new(
            self.e[0][0].add(&rhs.e[0][0]),
            self.e[0][1].add(&rhs.e[0][1]),
            self.e[1][0].add(&rhs.e[1][0]),
            self.e[1][1].add(&rhs.e[1][1]),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Mat2::new(
            self.e[0][0].sub(&rhs.e[0][0]),
            self.e[0][1].sub(&rhs.e[0][1]),
            self.e[1][0].sub(&rhs.e[1][0]),
            self.e[1][1].sub(&rhs.e[1][1]),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let ent = |i: usize, j: usize| {
            self.e[i][0]
                .mul(&rhs.e[0][j])
                .add(&self.e[i][1].mul(&rhs.e[1][j]))
        };
        Mat2::new(ent(0, 0), ent(0, 1), ent(1, 0), ent(1, 1))
    }

    pub fn neg(&self) -> Self {
        Mat2::new(
            self.e[0][0].neg(),
            self.e[0][1].neg(),
            self.e[1][0].neg(),
            self.e[1][1].neg(),
        )
    }

    pub fn det(&self) -> T {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn trace(&self) -> T {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(T::is_zero)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(
            f(&self.e[0][0]),
            f(&self.e[0][1]),
            f(&self.e[1][0]),
            f(&self.e[1][1]),
        )
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

impl<T: Coeff + fmt::Display> fmt::Debug for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_trace() {
        let m = Mat2::new(
            Rat::from_int(1),
            Rat::from_int(2),
            Rat::from_int(3),
            Rat::from_int(4),
        );
        assert_eq!(m.det(), Rat::from_int(-2));
        assert_eq!(m.trace(), Rat::from_int(5));
    }

    #[test]
    fn identity_multiplication() {
        let m = Mat2::new(
            UniPoly::var(),
            UniPoly::one(),
            UniPoly::zero(),
            UniPoly::var(),
        );
        assert_eq!(m.mul(&Mat2::identity()), m);
        assert_eq!(Mat2::identity().mul(&m), m);
    }
}
