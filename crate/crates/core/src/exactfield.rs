//! Exact arithmetic in the biquadratic field `Q(√2, i)`.
//!
//! A [`Scalar`] is stored as four rational coordinates `(p, q, r, s)` standing
//! for `p + q·√2 + r·i + s·i·√2`. Because `{1, √2, i, i√2}` is a basis of the
//! field over `Q`, equality and zero testing are coordinate-wise and exact.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// An element `p + q√2 + r·i + s·i√2` of `Q(√2, i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    p: BigRational,
    q: BigRational,
    r: BigRational,
    s: BigRational,
}

// (a + b√2)(c + d√2) with zero coordinates skipped; most values in practice are rational.
fn mul_q2(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
) -> (BigRational, BigRational) {
    let mut rat = BigRational::zero();
    let mut irr = BigRational::zero();
    if !a.is_zero() {
        if !c.is_zero() {
            rat += a * c;
        }
        if !d.is_zero() {
            irr += a * d;
        }
    }
    if !b.is_zero() {
        if !d.is_zero() {
            let bd = b * d;
            rat += &bd + &bd;
        }
        if !c.is_zero() {
            irr += b * c;
        }
    }
    (rat, irr)
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar {
    pub fn new(p: BigRational, q: BigRational, r: BigRational, s: BigRational) -> Self {
        Scalar { p, q, r, s }
    }

    pub fn from_rational(p: BigRational) -> Self {
        Scalar {
            p,
            ..Scalar::default()
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// The rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(ratio(num, den))
    }

    pub fn sqrt2() -> Self {
        Scalar {
            q: BigRational::one(),
            ..Scalar::default()
        }
    }

    pub fn i() -> Self {
        Scalar {
            r: BigRational::one(),
            ..Scalar::default()
        }
    }

    /// `1/√2 = √2/2`.
    pub fn inv_sqrt2() -> Self {
        Scalar {
            q: ratio(1, 2),
            ..Scalar::default()
        }
    }

    pub fn coords(&self) -> [&BigRational; 4] {
        [&self.p, &self.q, &self.r, &self.s]
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero() && self.r.is_zero() && self.s.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.p)
    }

    /// Complex conjugate (`i ↦ −i`).
    pub fn conj(&self) -> Self {
        Scalar {
            p: self.p.clone(),
            q: self.q.clone(),
            r: -&self.r,
            s: -&self.s,
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Scalar::from_rational(self.p.recip()));
        }
        // 1/(A + Bi) = (A − Bi)/(A² + B²) with A, B, A² + B² in Q(√2).
        let (a2_r, a2_i) = mul_q2(&self.p, &self.q, &self.p, &self.q);
        let (b2_r, b2_i) = mul_q2(&self.r, &self.s, &self.r, &self.s);
        let u = a2_r + b2_r;
        let v = a2_i + b2_i;
        // 1/(u + v√2) = (u − v√2)/(u² − 2v²); the norm vanishes only at zero.
        let norm = &u * &u - (&v * &v) * BigRational::from_integer(BigInt::from(2));
        let inv_u = &u / &norm;
        let inv_v = -(&v / &norm);
        let (re_r, re_i) = mul_q2(&self.p, &self.q, &inv_u, &inv_v);
        let (im_r, im_i) = mul_q2(&self.r, &self.s, &inv_u, &inv_v);
        Ok(Scalar {
            p: re_r,
            q: re_i,
            r: -im_r,
            s: -im_i,
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Floating-point approximation, for diagnostics only.
    pub fn to_complex(&self) -> Complex64 {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        let sqrt2 = std::f64::consts::SQRT_2;
        Complex64::new(
            f(&self.p) + f(&self.q) * sqrt2,
            f(&self.r) + f(&self.s) * sqrt2,
        )
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(v)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.is_rational()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_i64(1)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
            r: &self.r + &rhs.r,
            s: &self.s + &rhs.s,
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
            r: &self.r - &rhs.r,
            s: &self.s - &rhs.s,
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_rational() && rhs.is_rational() {
            return Scalar::from_rational(&self.p * &rhs.p);
        }
        // (A1 + B1 i)(A2 + B2 i) = (A1A2 − B1B2) + (A1B2 + B1A2) i
        let (aa_r, aa_i) = mul_q2(&self.p, &self.q, &rhs.p, &rhs.q);
        let (bb_r, bb_i) = mul_q2(&self.r, &self.s, &rhs.r, &rhs.s);
        let (ab_r, ab_i) = mul_q2(&self.p, &self.q, &rhs.r, &rhs.s);
        let (ba_r, ba_i) = mul_q2(&self.r, &self.s, &rhs.p, &rhs.q);
        Scalar {
            p: aa_r - bb_r,
            q: aa_i - bb_i,
            r: ab_r + ba_r,
            s: ab_i + ba_i,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            p: -&self.p,
            q: -&self.q,
            r: -&self.r,
            s: -&self.s,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.p += &rhs.p;
        self.q += &rhs.q;
        self.r += &rhs.r;
        self.s += &rhs.s;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.p -= &rhs.p;
        self.q -= &rhs.q;
        self.r -= &rhs.r;
        self.s -= &rhs.s;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| &acc * &x)
    }
}

fn fmt_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

const UNITS: [&str; 4] = ["", "sqrt2", "i", "i*sqrt2"];

impl fmt::Display for Scalar {
    /// Compact form, e.g. `1/2 - 3*sqrt2 + i`. The alternate flag (`{:#}`)
    /// prints all four coordinates as `p + q*sqrt2 + r*i + s*i*sqrt2` with
    /// every rational written `num/den`. Both forms parse back exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.coords();
        if f.alternate() {
            let full = |x: &BigRational| format!("{}/{}", x.numer(), x.denom());
            return write!(
                f,
                "{} + {}*sqrt2 + {}*i + {}*i*sqrt2",
                full(coords[0]),
                full(coords[1]),
                full(coords[2]),
                full(coords[3])
            );
        }
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (c, unit) in coords.iter().zip(UNITS) {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            let body = match (unit, mag.is_one()) {
                ("", _) => fmt_rational(&mag),
                (u, true) => u.to_string(),
                (u, false) => format!("{}*{}", fmt_rational(&mag), u),
            };
            match (first, negative) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_number(tok: &str) -> Option<BigRational> {
    if let Some((n, d)) = tok.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = tok.split_once('.') {
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let int_part = if int_part.is_empty() { "0" } else { int_part };
        let whole: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        return Some(BigRational::new(whole, den));
    }
    tok.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn parse_term(term: &str) -> Option<Scalar> {
    let mut sign = 1i64;
    let mut body = term;
    while let Some(c) = body.chars().next() {
        match c {
            '+' => body = &body[1..],
            '-' => {
                sign = -sign;
                body = &body[1..];
            }
            _ => break,
        }
    }
    if body.is_empty() {
        return None;
    }
    let mut acc = Scalar::from_i64(sign);
    for factor in body.split('*') {
        let f = match factor {
            "sqrt2" | "√2" => Scalar::sqrt2(),
            "i" => Scalar::i(),
            _ => Scalar::from_rational(parse_number(factor)?),
        };
        acc = &acc * &f;
    }
    Some(acc)
}

impl FromStr for Scalar {
    type Err = FieldError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| FieldError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // A sign opens a new term unless it follows an operator (as in `+ -1/2`).
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (idx, &b) in bytes.iter().enumerate() {
            if idx > 0 && (b == b'+' || b == b'-') {
                let prev = bytes[idx - 1];
                if !matches!(prev, b'+' | b'-' | b'*' | b'/') {
                    terms.push(&compact[start..idx]);
                    start = idx;
                }
            }
        }
        terms.push(&compact[start..]);
        let mut total = Scalar::zero();
        for t in terms {
            total += parse_term(t).ok_or_else(|| err(&format!("bad term `{t}`")))?;
        }
        Ok(total)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(v) => Ok(Scalar::from_i64(v)),
        }
    }
}
