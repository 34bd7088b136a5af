//! Minimal ring abstractions shared by the generic algorithms (twisted
//! polynomials, subresultants, determinants).
//!
//! Elements carry their own context (field tables, moduli), so a zero or
//! one of the right ring is always obtained from an existing element.

use std::fmt;

pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Inverse if `self` is a unit.
    fn try_inv(&self) -> Option<Self>;

    /// `self / rhs` when the division is exact in this ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        rhs.try_inv().map(|inv| self.mul_ref(&inv))
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Embeds an integer through the prime subring.
    fn from_int(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        let mut base = one;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add_ref(&base);
            }
            base = base.add_ref(&base);
            k >>= 1;
        }
        if n < 0 {
            acc.neg_ref()
        } else {
            acc
        }
    }
}

/// Rings of characteristic p containing F_q, with the q-power Frobenius.
pub trait FrobeniusRing: Ring {
    /// The size of the constant field F_q.
    fn q(&self) -> u64;

    /// x ↦ x^q.
    fn frobenius(&self) -> Self {
        self.pow(self.q())
    }

    fn frobenius_pow(&self, k: u32) -> Self {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.frobenius();
        }
        x
    }

    /// The unique y with y^q = x when it exists in this ring.
    fn qth_root(&self) -> Option<Self>;
}

/// Marker: every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }
}

/// Implements the `std::ops` operators for a `Ring` type by delegating to
/// the `*_ref` methods.
#[macro_export]
macro_rules! impl_ring_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                $crate::arith::Ring::add_ref(&self, &rhs)
            }
        }
        impl<'a> std::ops::Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &'a $t) -> $t {
                $crate::arith::Ring::add_ref(self, rhs)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                $crate::arith::Ring::sub_ref(&self, &rhs)
            }
        }
        impl<'a> std::ops::Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &'a $t) -> $t {
                $crate::arith::Ring::sub_ref(self, rhs)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                $crate::arith::Ring::mul_ref(&self, &rhs)
            }
        }
        impl<'a> std::ops::Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &'a $t) -> $t {
                $crate::arith::Ring::mul_ref(self, rhs)
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $crate::arith::Ring::neg_ref(&self)
            }
        }
        impl<'a> std::ops::Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                $crate::arith::Ring::neg_ref(self)
            }
        }
    };
}
