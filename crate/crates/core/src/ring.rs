//! The tiny ring interface shared by rational and symbolic coefficients.

use std::fmt::Debug;

use crate::padic::PadicNum;

pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_q(q: PadicNum) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn scale(&self, q: &PadicNum) -> Self {
        self.mul(&Self::from_q(q.clone()))
    }
}

impl Coeff for PadicNum {
    fn zero() -> Self {
        PadicNum::zero()
    }
    fn one() -> Self {
        PadicNum::one()
    }
    fn is_zero(&self) -> bool {
        PadicNum::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_q(q: PadicNum) -> Self {
        q
    }
}
