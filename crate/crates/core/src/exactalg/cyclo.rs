//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! A [`Cyclo`] stores its value as `(Σ_j num_j ζ_N^j) / den` with `j < φ(N)`,
//! i.e. reduced modulo the N-th cyclotomic polynomial. At a fixed order the
//! reduced form is unique, so equality at a common order is a plain comparison
//! of numerator vectors. Binary operations lift both operands to the lcm of
//! their orders first.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Fields above this degree are refused; products cost O(φ²) big-integer ops.
pub const MAX_PHI: usize = 512;

pub(crate) struct Field {
    pub(crate) order: u32,
    pub(crate) phi: usize,
    /// `powers[k]` is x^k mod Φ_order for `k < order`.
    powers: Vec<Vec<i64>>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ{})", self.order)
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();

pub(crate) fn field(order: u32) -> Arc<Field> {
    let map = FIELDS.get_or_init(Default::default);
    let mut guard = map.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(Field::build(order)))
        .clone()
}

pub fn euler_phi(n: u32) -> usize {
    let mut result = n as u64;
    let mut m = n as u64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

fn mobius(n: u32) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let ql = num.len() + 1 - dl;
    let mut q = vec![0i128; ql];
    for i in (0..ql).rev() {
        let c = rem[i + dl - 1];
        q[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    q
}

pub(crate) fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut num = vec![1i128];
    let mut den = vec![1i128];
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mut xd = vec![0i128; d as usize + 1];
        xd[0] = -1;
        xd[d as usize] = 1;
        match mobius(n / d) {
            1 => num = poly_mul(&num, &xd),
            -1 => den = poly_mul(&den, &xd),
            _ => {}
        }
    }
    poly_div_exact(&num, &den)
        .into_iter()
        .map(|c| c as i64)
        .collect()
}

impl Field {
    fn build(order: u32) -> Field {
        assert!(order >= 1);
        let poly = cyclotomic_poly(order);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic Φ
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1] - top * poly[i];
            }
            cur[0] = -top * poly[0];
        }
        let roots = (0..order)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / order as f64))
            .collect();
        Field {
            order,
            phi,
            powers,
            roots,
        }
    }
}

/// An exact element of a cyclotomic field.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<Field>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = Rational::new(c.clone(), self.den.clone());
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{r}")?;
            } else {
                write!(f, "{r}*z{}^{j}", self.field.order)?;
            }
        }
        Ok(())
    }
}

impl Cyclo {
    fn from_parts(field: Arc<Field>, num: Vec<BigInt>, den: BigInt) -> Cyclo {
        let mut c = Cyclo { field, num, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in self.num.iter_mut() {
                *x = -x.clone();
            }
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if g.is_zero() {
            self.den = BigInt::one();
        } else if !g.is_one() {
            self.den /= &g;
            for x in self.num.iter_mut() {
                *x /= &g;
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        }
    }

    pub fn zero() -> Cyclo {
        Cyclo::from_parts(field(1), vec![BigInt::zero()], BigInt::one())
    }

    pub fn one() -> Cyclo {
        Cyclo::from_int(1)
    }

    pub fn from_int(v: i64) -> Cyclo {
        Cyclo::from_parts(field(1), vec![BigInt::from(v)], BigInt::one())
    }

    pub fn from_rational(r: &Rational) -> Cyclo {
        Cyclo::from_parts(field(1), vec![r.numer().clone()], r.denom().clone())
    }

    /// ζ_order^k.
    pub fn zeta(order: u32, k: i64) -> Cyclo {
        let f = field(order);
        let idx = k.rem_euclid(order as i64) as usize;
        let num = f.powers[idx].iter().map(|&v| BigInt::from(v)).collect();
        Cyclo::from_parts(f, num, BigInt::one())
    }

    /// Builds Σ_j coeffs[j] ζ_order^j from an unreduced power vector.
    pub fn from_power_coeffs(order: u32, coeffs: &[Rational]) -> Result<Cyclo> {
        if order == 0 {
            return Err(Error::Parse("cyclotomic order must be positive".into()));
        }
        if euler_phi(order) > MAX_PHI {
            return Err(Error::FieldTooLarge { order });
        }
        let f = field(order);
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let mut num = vec![BigInt::zero(); f.phi];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            for (slot, p) in num.iter_mut().zip(&f.powers[j % order as usize]) {
                if *p != 0 {
                    *slot += &scaled * BigInt::from(*p);
                }
            }
        }
        Ok(Cyclo::from_parts(f, num, den))
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn phi(&self) -> usize {
        self.field.phi
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Common denominator of the reduced coefficients; 1 means the value lies in Z[ζ].
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.iter().skip(1).all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Reduced coefficients over ζ^0..ζ^{φ-1}.
    pub fn reduced_coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Length-N coefficient vector over ζ^0..ζ^{N-1} (reduced form, zero padded).
    pub fn power_vector(&self) -> Vec<Rational> {
        let mut v = self.reduced_coeffs();
        v.resize(self.field.order as usize, Rational::zero());
        v
    }

    /// Re-expresses the value in Q(ζ_order); `order` must be a multiple of the current one.
    pub fn lift(&self, order: u32) -> Cyclo {
        let cur = self.field.order;
        if cur == order {
            return self.clone();
        }
        assert!(order % cur == 0, "cannot lift order {cur} to {order}");
        let step = (order / cur) as usize;
        let f = field(order);
        let mut num = vec![BigInt::zero(); f.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &f.powers[(j * step) % order as usize];
            for (slot, v) in num.iter_mut().zip(p) {
                if *v != 0 {
                    *slot += c * BigInt::from(*v);
                }
            }
        }
        Cyclo::from_parts(f, num, self.den.clone())
    }

    fn aligned(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        let order = lcm_u32(a.order(), b.order());
        (a.lift(order), b.lift(order))
    }

    fn same_field(&self, other: &Cyclo) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        if !self.same_field(other) {
            let (a, b) = Cyclo::aligned(self, other);
            return a.add(&b);
        }
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(x, y)| x + y).collect();
            return Cyclo::from_parts(self.field.clone(), num, self.den.clone());
        }
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(x, y)| x * &other.den + y * &self.den)
            .collect();
        Cyclo::from_parts(self.field.clone(), num, &self.den * &other.den)
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            field: self.field.clone(),
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        if !self.same_field(other) {
            let (a, b) = Cyclo::aligned(self, other);
            return a.mul(&b);
        }
        let f = &self.field;
        let phi = f.phi;
        if phi == 1 {
            return Cyclo::from_parts(
                f.clone(),
                vec![&self.num[0] * &other.num[0]],
                &self.den * &other.den,
            );
        }
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in self.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.num.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut num: Vec<BigInt> = conv[..phi].to_vec();
        for (k, c) in conv.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            let p = &f.powers[k % f.order as usize];
            for (slot, v) in num.iter_mut().zip(p) {
                if *v != 0 {
                    *slot += c * BigInt::from(*v);
                }
            }
        }
        Cyclo::from_parts(f.clone(), num, &self.den * &other.den)
    }

    pub fn scale(&self, r: &Rational) -> Cyclo {
        let num = self.num.iter().map(|x| x * r.numer()).collect();
        Cyclo::from_parts(self.field.clone(), num, &self.den * r.denom())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Cyclo> {
        if self.is_zero() {
            return None;
        }
        let f = &self.field;
        let phi = f.phi;
        if phi == 1 {
            return Some(Cyclo::from_parts(
                f.clone(),
                vec![self.den.clone()],
                self.num[0].clone(),
            ));
        }
        // Solve (multiplication-by-self matrix) · c = e_0 over Q.
        let mut cols = Vec::with_capacity(phi);
        let mut basis = Cyclo::one().lift(f.order);
        let x = Cyclo::zeta(f.order, 1);
        let plain = Cyclo::from_parts(f.clone(), self.num.clone(), BigInt::one());
        for _ in 0..phi {
            cols.push(plain.mul(&basis).num);
            basis = basis.mul(&x);
        }
        let mut aug: Vec<Vec<Rational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<Rational> = (0..phi)
                    .map(|c| Rational::from_integer(cols[c][r].clone()))
                    .collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let p = aug[col][col].clone();
            for v in aug[col].iter_mut() {
                *v /= &p;
            }
            for r in 0..phi {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for c in col..=phi {
                        let t = &aug[col][c] * &factor;
                        aug[r][c] -= t;
                    }
                }
            }
        }
        let coeffs: Vec<Rational> = aug.iter().map(|row| row[phi].clone()).collect();
        // c solves plain·c = 1, so self^{-1} = den·c
        let c = Cyclo::from_power_coeffs(f.order, &coeffs).ok()?;
        Some(c.scale(&Rational::from_integer(self.den.clone())))
    }

    pub fn div(&self, other: &Cyclo) -> Option<Cyclo> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Option<Cyclo> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Cyclo::one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq);
            }
        }
        Some(acc)
    }

    /// Galois automorphism ζ ↦ ζ^k (k coprime to the order).
    pub fn galois(&self, k: i64) -> Cyclo {
        let f = &self.field;
        let n = f.order as i64;
        let mut num = vec![BigInt::zero(); f.phi];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = ((j as i64) * k).rem_euclid(n) as usize;
            for (slot, v) in num.iter_mut().zip(&f.powers[idx]) {
                if *v != 0 {
                    *slot += c * BigInt::from(*v);
                }
            }
        }
        Cyclo::from_parts(f.clone(), num, self.den.clone())
    }

    /// Complex conjugate (the automorphism ζ ↦ ζ^{-1}).
    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    pub fn to_complex(&self) -> Complex64 {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc += self.field.roots[j] * c.to_f64().unwrap_or(f64::NAN);
            }
        }
        acc / den
    }

    /// Exact square root of a rational number, when it exists in a cyclotomic field
    /// of manageable degree. Negative inputs give i·√|r|.
    pub fn sqrt_rational(r: &Rational) -> Option<Cyclo> {
        if r.is_zero() {
            return Some(Cyclo::zero());
        }
        // √(p/q) = √(p·q)/q
        let prod = r.numer() * r.denom();
        let negative = prod.is_negative();
        let mut m = prod.abs();
        let mut square = BigInt::one();
        let mut primes = Vec::new();
        let mut p = BigInt::from(2);
        while &p * &p <= m {
            let mut count = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                count += 1;
            }
            for _ in 0..count / 2 {
                square *= &p;
            }
            if count % 2 == 1 {
                primes.push(p.to_u32()?);
            }
            p += 1;
        }
        if !m.is_one() {
            primes.push(m.to_u32()?);
        }
        let target = primes.iter().fold(if negative { 4 } else { 1 }, |acc, &p| {
            let o = match p {
                2 => 8,
                p if p % 4 == 1 => p,
                p => 4 * p,
            };
            lcm_u32(acc, o)
        });
        if euler_phi(target) > MAX_PHI {
            return None;
        }
        let mut root = Cyclo::one();
        for p in primes {
            root = root.mul(&sqrt_prime(p)?);
        }
        if negative {
            root = root.mul(&Cyclo::zeta(4, 1));
        }
        let scale = Rational::new(square, r.denom().clone());
        Some(root.scale(&scale))
    }

    pub fn eq_exact(&self, other: &Cyclo) -> bool {
        if self.same_field(other) {
            return self.den == other.den && self.num == other.num;
        }
        let (a, b) = Cyclo::aligned(self, other);
        a.den == b.den && a.num == b.num
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Positive square root of a prime via a quadratic Gauss sum.
fn sqrt_prime(p: u32) -> Option<Cyclo> {
    let root = if p == 2 {
        Cyclo::zeta(8, 1).add(&Cyclo::zeta(8, -1))
    } else {
        let f = field(p);
        if f.phi > MAX_PHI {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); p as usize];
        for a in 1..p {
            coeffs[a as usize] = Rational::from_integer(BigInt::from(legendre(a as u64, p as u64)));
        }
        let g = Cyclo::from_power_coeffs(p, &coeffs).ok()?;
        if p % 4 == 1 {
            g
        } else {
            // g² = -p, so (-i)·g squares to p
            g.mul(&Cyclo::zeta(4, -1))
        }
    };
    if root.to_complex().re < 0.0 {
        Some(root.neg())
    } else {
        Some(root)
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// lcm(a, b) when that field is small enough to compute in, otherwise None.
pub fn common_order(a: u32, b: u32) -> Option<u32> {
    let l = (a / a.gcd(&b)).checked_mul(b)?;
    (euler_phi(l) <= MAX_PHI).then_some(l)
}

/// Parses "p", "p/q" or a finite decimal such as "-0.25".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(60), 16);
    }

    #[test]
    fn zeta_power_wraps_to_one() {
        for n in [1u32, 2, 3, 5, 8, 12, 20] {
            let z = Cyclo::zeta(n, 1);
            assert_eq!(z.pow(n as i64).unwrap(), Cyclo::one());
        }
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let s = Cyclo::one().add(&Cyclo::zeta(3, 1)).add(&Cyclo::zeta(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn lifting_preserves_value() {
        let w = Cyclo::zeta(3, 1);
        let lifted = w.lift(12);
        assert_eq!(lifted.order(), 12);
        assert_eq!(w, lifted);
        assert_eq!(Cyclo::zeta(12, 4), w);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Cyclo::from_power_coeffs(5, &[q(1, 2), q(3, 1), q(0, 1), q(-2, 7), q(1, 1)]).unwrap();
        let b = a.inv().unwrap();
        assert_eq!(a.mul(&b), Cyclo::one());
        assert!(Cyclo::zero().inv().is_none());
    }

    #[test]
    fn square_roots() {
        for n in [2i64, 3, 5, 6, 7, 12, 13] {
            let r = Cyclo::sqrt_rational(&q(n, 1)).unwrap();
            assert_eq!(r.mul(&r), Cyclo::from_int(n));
            let c = r.to_complex();
            assert!((c.re - (n as f64).sqrt()).abs() < 1e-12 && c.im.abs() < 1e-12);
        }
        let r = Cyclo::sqrt_rational(&q(-3, 4)).unwrap();
        assert_eq!(r.mul(&r), Cyclo::from_rational(&q(-3, 4)));
        assert!((r.to_complex().im - 0.75f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn conjugation_of_root_of_unity() {
        let z = Cyclo::zeta(8, 1);
        assert_eq!(z.conj(), Cyclo::zeta(8, 7));
        assert_eq!(z.mul(&z.conj()), Cyclo::one());
    }
}
