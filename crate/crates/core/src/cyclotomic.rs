//! Exact arithmetic in Q(zeta12).
//!
//! Elements are stored as c0 + c1*z + c2*z^2 + c3*z^3 where z is a primitive
//! 12th root of unity with z^4 = z^2 - 1.  rho = z^4 = z^2 - 1, i = z^3 and
//! sqrt(3) = z + z^11 = 2z - z^3.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// An element of Q(zeta12) in the basis {1, z, z^2, z^3}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycNum {
    c: [BigRational; 4],
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycNum {
    pub fn new(c: [BigRational; 4]) -> Self {
        CycNum { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        CycNum { c: c.map(q) }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycNum {
            c: [r, BigRational::zero(), BigRational::zero(), BigRational::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.c
    }

    /// The primitive 12th root z = exp(i pi / 6).
    pub fn zeta() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    /// rho = exp(2 pi i / 3) = z^2 - 1.
    pub fn rho() -> Self {
        Self::from_ints([-1, 0, 1, 0])
    }

    pub fn i() -> Self {
        Self::from_ints([0, 0, 0, 1])
    }

    pub fn sqrt3() -> Self {
        Self::from_ints([0, 2, 0, -1])
    }

    /// z^k for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(12) as usize;
        // z^6 = -1, so z^k = -z^(k-6)
        let (sign, e) = if k >= 6 { (-1, k - 6) } else { (1, k) };
        let base = match e {
            0 => [1, 0, 0, 0],
            1 => [0, 1, 0, 0],
            2 => [0, 0, 1, 0],
            3 => [0, 0, 0, 1],
            4 => [-1, 0, 1, 0],
            _ => [0, -1, 0, 1],
        };
        Self::from_ints(base.map(|x| x * sign))
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.c[0])
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("pow of zero with negative exponent").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the automorphism z -> z^k, k coprime to 12.
    pub fn galois(&self, k: i64) -> Self {
        assert!(
            [1, 5, 7, 11].contains(&k.rem_euclid(12)),
            "k must be a unit mod 12"
        );
        let mut out = Self::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            out += Self::zeta_pow(k * j as i64).scale(cj);
        }
        out
    }

    /// Complex conjugation z -> z^11.
    pub fn conj(&self) -> Self {
        self.galois(11)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNum {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r],
        }
    }

    /// Field norm to Q (product of the four conjugates).
    pub fn norm(&self) -> BigRational {
        let p = self * &self.galois(5) * self.galois(7) * self.galois(11);
        debug_assert!(p.is_rational());
        p.c[0].clone()
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let others = self.galois(5) * self.galois(7) * self.galois(11);
        let n = (self * &others).c[0].clone();
        Ok(others.scale(&n.recip()))
    }

    /// Numerical value at z = exp(i pi/6).
    pub fn embed<T: Float>(&self) -> Complex<T> {
        let zeta = Complex::new(
            T::from(3.0f64.sqrt() / 2.0).unwrap(),
            T::from(0.5).unwrap(),
        );
        let mut acc = Complex::new(T::zero(), T::zero());
        let mut p = Complex::new(T::one(), T::zero());
        for cj in &self.c {
            acc = acc + p * T::from(cj.to_f64().unwrap_or(f64::NAN)).unwrap();
            p = p * zeta;
        }
        acc
    }

    /// If self = (-1)^s rho^j, returns (s, j) with s in {0,1}, j in {0,1,2}.
    pub fn unit_class(&self) -> Option<(u8, u8)> {
        let r = Self::rho();
        let mut p = Self::one();
        for j in 0..3u8 {
            if *self == p {
                return Some((0, j));
            }
            if *self == -&p {
                return Some((1, j));
            }
            p = &p * &r;
        }
        None
    }

    /// True for the sixth roots of unity.
    pub fn is_unit_root(&self) -> bool {
        self.unit_class().is_some()
    }

    /// Multiplicative order if self is a root of unity (a divisor of 12).
    pub fn root_of_unity_order(&self) -> Option<u32> {
        let one = Self::one();
        let mut p = self.clone();
        for n in 1..=12u32 {
            if p == one {
                return Some(n);
            }
            p = &p * self;
        }
        None
    }
}

impl Zero for CycNum {
    fn zero() -> Self {
        CycNum {
            c: [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl One for CycNum {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for CycNum {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        CycNum {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
                &self.c[3] + &o.c[3],
            ],
        }
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        CycNum {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
                &self.c[3] - &o.c[3],
            ],
        }
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        let zero = BigRational::zero();
        let mut p: [BigRational; 7] = std::array::from_fn(|_| zero.clone());
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        // z^6 = -1, z^5 = z^3 - z, z^4 = z^2 - 1
        let [p0, p1, p2, p3, p4, p5, p6] = p;
        CycNum {
            c: [p0 - &p4 - &p6, p1 - &p5, p2 + p4, p3 + p5],
        }
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl<'a> Div<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn div(self, o: &CycNum) -> CycNum {
        self * &o.inv().expect("division by zero in Q(zeta12)")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, o: CycNum) -> CycNum {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $f(self, o: &CycNum) -> CycNum {
                (&self).$f(o)
            }
        }
        impl<'a> $tr<CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $f(self, o: CycNum) -> CycNum {
                self.$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign for CycNum {
    fn add_assign(&mut self, o: CycNum) {
        *self = &*self + &o;
    }
}

impl<'a> AddAssign<&'a CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        *self = &*self + o;
    }
}

impl SubAssign for CycNum {
    fn sub_assign(&mut self, o: CycNum) {
        *self = &*self - &o;
    }
}

impl MulAssign for CycNum {
    fn mul_assign(&mut self, o: CycNum) {
        *self = &*self * &o;
    }
}

impl std::iter::Sum for CycNum {
    fn sum<I: Iterator<Item = CycNum>>(iter: I) -> Self {
        iter.fold(CycNum::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for CycNum {
    fn product<I: Iterator<Item = CycNum>>(iter: I) -> Self {
        iter.fold(CycNum::one(), |a, b| a * b)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycNum {
    /// Canonical form "c0 + c1*z + c2*z^2 + c3*z^3"; zero coordinates are
    /// dropped except that zero itself prints as "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "z", "z^2", "z^3"];
        let mut first = true;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let mag = ck.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => fmt_rat(&mag),
                (_, true) => names[k].to_string(),
                _ => format!("{}*{}", fmt_rat(&mag), names[k]),
            };
            if first {
                if ck.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {} {body}", if ck.is_negative() { '-' } else { '+' })?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for CycNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Recursive-descent parser for expressions such as
/// "-23/8*i*rho - 23/16*i + 19/8" or "1 + 2*z^3".
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!(
            "{msg} at byte {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CycNum, Error> {
        let mut acc = CycNum::zero();
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc - t } else { acc + t };
            match self.peek() {
                Some(b'+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CycNum, Error> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc * self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc / d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<CycNum, Error> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = self.integer()?;
            let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            if neg && base.is_zero() {
                return Err(self.err("division by zero"));
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<CycNum, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(CycNum::from_rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"z" | b"zeta" => Ok(CycNum::zeta()),
                    b"rho" => Ok(CycNum::rho()),
                    b"i" => Ok(CycNum::i()),
                    b"sqrt3" => Ok(CycNum::sqrt3()),
                    _ => {
                        self.pos = start;
                        Err(self.err("unknown symbol"))
                    }
                }
            }
            _ => Err(self.err("expected number, symbol or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CycNum {
        s.parse().unwrap()
    }

    #[test]
    fn rho_identities() {
        let r = CycNum::rho();
        assert_eq!(r.pow(3), CycNum::one());
        assert_eq!(&r + &r.pow(2), CycNum::from_int(-1));
        assert_eq!(r.conj(), r.pow(2));
        assert_eq!(CycNum::i().conj(), -CycNum::i());
        assert_eq!(CycNum::i().pow(2), CycNum::from_int(-1));
        assert_eq!(CycNum::sqrt3().pow(2), CycNum::from_int(3));
        assert_eq!(CycNum::zeta_pow(4), r);
        assert_eq!(CycNum::zeta_pow(-1), CycNum::zeta().conj());
    }

    #[test]
    fn conj_of_one_minus_rho() {
        let one = CycNum::one();
        let r = CycNum::rho();
        assert_eq!((&one - &r).conj(), &one - &r.pow(2));
    }

    #[test]
    fn rho_sq_over_one_minus_rho() {
        // (1 - rho)(1 - rho^2) = 3, so rho^2/(1 - rho) = rho^2 (1 - rho^2)/3 = (rho^2 - rho)/3
        // and rho^2 - rho = -i sqrt3.
        let r = CycNum::rho();
        let v = (CycNum::one() - &r).inv().unwrap() * r.pow(2);
        let expect = (CycNum::i() * CycNum::sqrt3()).scale(&BigRational::new((-1).into(), 3.into()));
        assert_eq!(v, expect);
        let z = v.embed::<f64>();
        assert!((z.re).abs() < 1e-15 && (z.im + 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unit_classes() {
        let r = CycNum::rho();
        assert_eq!((-r.pow(2)).unit_class(), Some((1, 2)));
        assert_eq!(CycNum::one().unit_class(), Some((0, 0)));
        assert_eq!(CycNum::from_int(2).unit_class(), None);
        assert_eq!(CycNum::i().unit_class(), None);
    }

    #[test]
    fn embed_values() {
        let r = CycNum::rho().embed::<f64>();
        assert!((r.re + 0.5).abs() < 1e-15 && (r.im - 0.75f64.sqrt()).abs() < 1e-15);
        let s = (CycNum::zeta() + CycNum::zeta_pow(11)).embed::<f64>();
        assert!((s.re - 3f64.sqrt()).abs() < 1e-15 && s.im.abs() < 1e-15);
        assert!(CycNum::rho().pow(2).embed::<f64>().im < 0.0);
        let f = CycNum::rho().embed::<f32>();
        assert!((f.re + 0.5).abs() < 1e-6);
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "1", "-1/2 + z", "3*z^2 - 7/5*z^3", "-z + z^3"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert_eq!(c("rho"), c("z^2 - 1"));
        assert_eq!(c("-23/8*i*rho - 23/16*i + 19/8"), {
            let i = CycNum::i();
            let r = CycNum::rho();
            CycNum::frac(-23, 8) * &i * r + CycNum::frac(-23, 16) * i + CycNum::frac(19, 8)
        });
        assert_eq!(c("(1 + i)^2"), CycNum::from_int(2) * CycNum::i());
        assert_eq!(c("rho^-1"), c("rho^2"));
        assert!("q + 1".parse::<CycNum>().is_err());
        assert!("1/0".parse::<CycNum>().is_err());
    }

    #[test]
    fn inverse_of_zero_is_error() {
        assert!(CycNum::zero().inv().is_err());
    }
}
