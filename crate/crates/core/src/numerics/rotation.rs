use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{exact_sqrt, one, Rational};
use crate::error::{Error, Result};

/// A rational point `(c, s)` on the unit circle, standing in exactly for an
/// angle whose cosine and sine are both rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalRotation {
    c: Rational,
    s: Rational,
}

impl RationalRotation {
    /// Fails unless `c^2 + s^2 = 1` exactly.
    pub fn new(c: Rational, s: Rational) -> Result<Self> {
        if &c * &c + &s * &s != Rational::one() {
            return Err(Error::InvalidInput(format!("({c}, {s}) is not on the unit circle")));
        }
        Ok(Self { c, s })
    }

    fn from_parts(c: Rational, s: Rational) -> Self {
        Self { c, s }
    }

    pub fn identity() -> Self {
        Self::from_parts(one(), Rational::zero())
    }

    /// The angle in `[0, pi]` with cosine `c`, when its sine is rational.
    pub fn from_cosine(c: &Rational) -> Option<Self> {
        if c.abs() > Rational::one() {
            return None;
        }
        let s = exact_sqrt(&(Rational::one() - c * c))?;
        Some(Self::from_parts(c.clone(), s))
    }

    pub fn cos(&self) -> &Rational {
        &self.c
    }

    pub fn sin(&self) -> &Rational {
        &self.s
    }

    pub fn is_identity(&self) -> bool {
        self.s.is_zero() && self.c.is_one()
    }

    /// Angle addition.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = self.gaussian();
        let (c, d) = other.gaussian();
        let den = self.c.denom() * other.c.denom();
        Self::from_parts(Rational::new(&a * &c - &b * &d, den.clone()), Rational::new(&b * &c + &a * &d, den))
    }

    /// Numerators over the shared denominator of both coordinates.
    fn gaussian(&self) -> (BigInt, BigInt) {
        debug_assert_eq!(self.c.denom(), self.s.denom());
        (self.c.numer().clone(), self.s.numer().clone())
    }

    pub fn inverse(&self) -> Self {
        Self::from_parts(self.c.clone(), -self.s.clone())
    }

    /// `t`-fold composition. A rational point on the circle has one
    /// denominator `d` for both coordinates, so the power is
    /// `(p + iq)^t / d^t` with the numerator raised in Gaussian integers.
    pub fn power(&self, t: i64) -> Self {
        let d = self.c.denom().clone();
        let (mut bre, mut bim) = self.gaussian();
        if t < 0 {
            bim = -bim;
        }
        let (mut re, mut im) = (BigInt::one(), BigInt::zero());
        let mut exp = t.unsigned_abs();
        while exp > 0 {
            if exp & 1 == 1 {
                (re, im) = (&re * &bre - &im * &bim, &re * &bim + &im * &bre);
            }
            exp >>= 1;
            if exp > 0 {
                (bre, bim) = (&bre * &bre - &bim * &bim, BigInt::from(2) * &bre * &bim);
            }
        }
        let den = num_traits::pow(d, t.unsigned_abs() as usize);
        Self::from_parts(Rational::new(re, den.clone()), Rational::new(im, den))
    }

    /// Inner product of the two unit vectors, i.e. the cosine of the angle
    /// between them.
    pub fn dot(&self, other: &Self) -> Rational {
        &self.c * &other.c + &self.s * &other.s
    }

    /// Principal angle in `(-pi, pi]`.
    pub fn angle(&self) -> f64 {
        super::to_f64(&self.s).atan2(super::to_f64(&self.c))
    }
}
