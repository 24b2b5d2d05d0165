use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RationalValue(BigRational);

impl RationalValue {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        // BigRational::new reduces and normalizes the sign; panics on zero denominator.
        RationalValue(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        RationalValue(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        RationalValue(BigRational::zero())
    }

    pub fn one() -> Self {
        RationalValue(BigRational::one())
    }

    /// `1/m`.
    pub fn recip_of(m: u64) -> Self {
        Self::new(1, m)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for RationalValue {
    fn from(r: BigRational) -> Self {
        RationalValue(r)
    }
}

impl From<i64> for RationalValue {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

/// `p/q`, or just `p` for integers.
impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for RationalValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalValue {
            type Output = RationalValue;
            fn $m(self, rhs: RationalValue) -> RationalValue {
                RationalValue((self.0).$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a RationalValue> for &'a RationalValue {
            type Output = RationalValue;
            fn $m(self, rhs: &'a RationalValue) -> RationalValue {
                RationalValue((&self.0).$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for RationalValue {
    type Output = RationalValue;
    fn neg(self) -> RationalValue {
        RationalValue(-self.0)
    }
}

impl std::iter::Sum for RationalValue {
    fn sum<I: Iterator<Item = RationalValue>>(iter: I) -> Self {
        iter.fold(RationalValue::zero(), |a, b| a + b)
    }
}
