use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// `c0 + c1*h` with `h^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HClass {
    pub c0: Rat,
    pub c1: Rat,
}

impl HClass {
    pub fn new(c0: Rat, c1: Rat) -> Self {
        HClass { c0, c1 }
    }

    pub fn constant(c0: Rat) -> Self {
        HClass {
            c0,
            c1: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn from_ints(c0: i64, c1: i64) -> Self {
        HClass::new(super::int(c0), super::int(c1))
    }

    pub fn pow(&self, n: u32) -> HClass {
        if n == 0 {
            return HClass::one();
        }
        // (a + bh)^n = a^n + n a^(n-1) b h
        let an1 = num_traits::pow(self.c0.clone(), (n - 1) as usize);
        HClass {
            c0: &an1 * &self.c0,
            c1: an1 * &self.c1 * Rat::from_integer(n.into()),
        }
    }

    pub fn inverse(&self) -> Result<HClass> {
        if self.c0.is_zero() {
            return Err(Error::DegenerateClass);
        }
        let inv = self.c0.recip();
        Ok(HClass {
            c1: -(&self.c1 * &inv * &inv),
            c0: inv,
        })
    }
}

pub fn hclass_div(n: &HClass, d: &HClass) -> Result<HClass> {
    Ok(n * &d.inverse()?)
}

impl Add for &HClass {
    type Output = HClass;
    fn add(self, o: &HClass) -> HClass {
        HClass::new(&self.c0 + &o.c0, &self.c1 + &o.c1)
    }
}

impl Sub for &HClass {
    type Output = HClass;
    fn sub(self, o: &HClass) -> HClass {
        HClass::new(&self.c0 - &o.c0, &self.c1 - &o.c1)
    }
}

impl Mul for &HClass {
    type Output = HClass;
    fn mul(self, o: &HClass) -> HClass {
        HClass::new(&self.c0 * &o.c0, &self.c0 * &o.c1 + &self.c1 * &o.c0)
    }
}

impl Neg for &HClass {
    type Output = HClass;
    fn neg(self) -> HClass {
        HClass::new(-&self.c0, -&self.c1)
    }
}

impl fmt::Display for HClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}h", self.c0, self.c1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn division_examples() {
        // (a^2 - 2ah) / (b - a + h) at a = 1, b = 2
        let n = HClass::from_ints(1, -2);
        let d = HClass::from_ints(1, 1);
        assert_eq!(hclass_div(&n, &d).unwrap(), HClass::from_ints(1, -3));

        let x = HClass::new(rat(3, 7), int(-2));
        assert_eq!(hclass_div(&x, &HClass::one()).unwrap(), x);

        let q = hclass_div(&HClass::from_ints(0, 5), &HClass::from_ints(3, 7)).unwrap();
        assert_eq!(q, HClass::new(int(0), rat(5, 3)));
    }

    #[test]
    fn zero_constant_part_is_rejected() {
        let r = hclass_div(&HClass::one(), &HClass::from_ints(0, 1));
        assert_eq!(r, Err(Error::DegenerateClass));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = HClass::new(rat(-2, 3), rat(5, 2));
        let mut acc = HClass::one();
        for n in 0..14 {
            assert_eq!(x.pow(n), acc);
            acc = &acc * &x;
        }
    }
}
