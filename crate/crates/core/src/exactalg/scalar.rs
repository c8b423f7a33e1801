use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;

use super::cyclo::{common_order, Cyclo, Rational};

/// A number that is either an exact cyclotomic value or a complex double.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Cyclo),
    Approx(Complex64),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(Cyclo::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Exact(Cyclo::one())
    }

    pub fn int(v: i64) -> Scalar {
        Scalar::Exact(Cyclo::from_int(v))
    }

    pub fn ratio(p: i64, q: i64) -> Scalar {
        Scalar::Exact(Cyclo::from_rational(&Rational::new(BigInt::from(p), BigInt::from(q))))
    }

    pub fn rational(r: &Rational) -> Scalar {
        Scalar::Exact(Cyclo::from_rational(r))
    }

    /// ζ_n^k.
    pub fn zeta(n: u32, k: i64) -> Scalar {
        Scalar::Exact(Cyclo::zeta(n, k))
    }

    pub fn approx(re: f64, im: f64) -> Scalar {
        Scalar::Approx(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_cyclo(&self) -> Option<&Cyclo> {
        match self {
            Scalar::Exact(c) => Some(c),
            Scalar::Approx(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_cyclo().and_then(Cyclo::as_rational)
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(c) => c.to_complex(),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn to_approx(&self) -> Scalar {
        Scalar::Approx(self.to_complex())
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Exact zero test in exact mode, `|z| < eps` otherwise.
    pub fn is_zero_tol(&self, eps: f64) -> bool {
        match self {
            Scalar::Exact(c) => c.is_zero(),
            Scalar::Approx(z) => z.norm() < eps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_tol(crate::settings::DEFAULT_EPS)
    }

    /// Exact equality when both sides are exact, tolerance comparison otherwise.
    pub fn eq_tol(&self, other: &Scalar, eps: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() < eps,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.conj()),
            Scalar::Approx(z) => Scalar::Approx(z.conj()),
        }
    }

    /// Multiplicative inverse; `None` for (numerically) zero values.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(c) => c.inv().map(Scalar::Exact),
            Scalar::Approx(z) => {
                if z.norm() == 0.0 {
                    None
                } else {
                    Some(Scalar::Approx(z.inv()))
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        Some(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Option<Scalar> {
        match self {
            Scalar::Exact(c) => c.pow(e).map(Scalar::Exact),
            Scalar::Approx(z) => {
                if e < 0 && z.norm() == 0.0 {
                    None
                } else {
                    Some(Scalar::Approx(z.powi(e as i32)))
                }
            }
        }
    }

    /// Exact square root of a rational value when one is available in a cyclotomic
    /// field, otherwise the principal complex square root.
    pub fn sqrt(&self) -> Scalar {
        if let Some(r) = self.as_rational() {
            if let Some(c) = Cyclo::sqrt_rational(&r) {
                return Scalar::Exact(c);
            }
        }
        Scalar::Approx(self.to_complex().sqrt())
    }

    pub fn scale_rational(&self, r: &Rational) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.scale(r)),
            Scalar::Approx(z) => Scalar::Approx(z * rational_to_f64(r)),
        }
    }

    pub fn order(&self) -> Option<u32> {
        self.as_cyclo().map(Cyclo::order)
    }

    pub(crate) fn lift(&self, order: u32) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.lift(order)),
            other => other.clone(),
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(c) => write!(f, "{c}"),
            Scalar::Approx(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => a == b,
            _ => false,
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Cyclo> for Scalar {
    fn from(c: Cyclo) -> Self {
        Scalar::Exact(c)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Approx(z)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $cy:ident, $op:tt) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) if common_order(a.order(), b.order()).is_some() => {
                        Scalar::Exact(a.$cy(b))
                    }
                    _ => Scalar::Approx(self.to_complex() $op rhs.to_complex()),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, add, +);
binop!(Sub, sub, sub, -);
binop!(Mul, mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(c) => Scalar::Exact(c.neg()),
            Scalar::Approx(z) => Scalar::Approx(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

/// 4cos²(π/n) = 2 + ζ_n + ζ_n⁻¹, exactly.
pub fn four_cos_sq_pi_over(n: u32) -> Scalar {
    let z = Cyclo::zeta(n, 1);
    Scalar::Exact(Cyclo::from_int(2).add(&z).add(&z.conj()))
}

/// The golden ratio (1+√5)/2 = ζ_10 + ζ_10⁻¹.
pub fn golden_ratio() -> Scalar {
    let z = Cyclo::zeta(10, 1);
    Scalar::Exact(z.add(&z.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_squares() {
        let phi = golden_ratio();
        assert_eq!(&phi * &phi, &phi + &Scalar::one());
        assert!((phi.to_complex().re - 1.618033988749895).abs() < 1e-14);
    }

    #[test]
    fn four_cos_values() {
        assert_eq!(four_cos_sq_pi_over(3), Scalar::one());
        assert_eq!(four_cos_sq_pi_over(4), Scalar::int(2));
        assert_eq!(four_cos_sq_pi_over(6), Scalar::int(3));
        let phi = golden_ratio();
        assert_eq!(four_cos_sq_pi_over(5), &phi * &phi);
    }

    #[test]
    fn mixing_promotes_to_approx() {
        let s = &Scalar::int(2) + &Scalar::approx(0.5, 0.0);
        assert!(!s.is_exact());
        assert!((s.to_complex().re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn sqrt_is_exact_for_rationals() {
        let r = Scalar::int(3).sqrt();
        assert!(r.is_exact());
        assert_eq!(&r * &r, Scalar::int(3));
    }
}
