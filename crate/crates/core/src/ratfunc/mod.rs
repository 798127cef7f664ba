//! The coefficient field: rational functions in `t = q^{1/2}` over `Q`.
//!
//! A [`RatFunc`] is stored as `t^shift · num(t) / den(t)` with `num(0) != 0`,
//! `den(0) != 0`, `den` monic and `gcd(num, den) = 1`. That form is unique, so
//! equality is structural. The half Tate twist `L^{1/2}` is represented by
//! `-t` throughout the crate.

mod laurent;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use laurent::LaurentPoly;
pub use poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    shift: i64,
    num: Poly,
    den: Poly,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::from_rational(rat(n))
    }

    pub fn from_rational(c: BigRational) -> RatFunc {
        RatFunc::from_parts(0, Poly::constant(c), Poly::one())
    }

    /// `t^k`.
    pub fn t_pow(k: i64) -> RatFunc {
        RatFunc {
            shift: k,
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn t() -> RatFunc {
        RatFunc::t_pow(1)
    }

    /// `q = t^2`.
    pub fn q() -> RatFunc {
        RatFunc::t_pow(2)
    }

    /// `(-t)^k`, the weight-polynomial image of `L^{k/2}`.
    pub fn neg_t_pow(k: i64) -> RatFunc {
        let m = RatFunc::t_pow(k);
        if k.rem_euclid(2) == 1 {
            -m
        } else {
            m
        }
    }

    /// `t/(q - 1)`, the virtual weight polynomial of `H(CP^∞)`, whose ascending
    /// expansion is `-t - t^3 - t^5 - ...`.
    pub fn chi_cpinf_vir() -> RatFunc {
        RatFunc::from_parts(1, Poly::one(), Poly::from_ints(&[-1, 0, 1]))
    }

    /// Builds `t^shift · num / den` in canonical form.
    pub fn from_parts(shift: i64, num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let nv = num.valuation().unwrap();
        let dv = den.valuation().unwrap();
        let mut num = num.shift_down(nv);
        let mut den = den.shift_down(dv);
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.exact_div(&g);
            den = den.exact_div(&g);
        }
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc {
            shift: shift + nv as i64 - dv as i64,
            num,
            den,
        }
    }

    /// Builds a Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> RatFunc {
        let terms: Vec<(i64, BigRational)> = terms.into_iter().collect();
        let Some(low) = terms.iter().map(|(e, _)| *e).min() else {
            return RatFunc::zero();
        };
        let high = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (high - low) as usize + 1];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        RatFunc::from_parts(low, Poly::from_coeffs(coeffs), Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// Numerator polynomial (without the `t^shift` factor).
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Lowest exponent of the ascending expansion, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut result = RatFunc::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(result)
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        if c.is_zero() || self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            shift: self.shift,
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// The Adams operation `t ↦ t^n`.
    pub fn adams(&self, n: u32) -> RatFunc {
        assert!(n >= 1, "Adams operations are indexed by n >= 1");
        let n = n as usize;
        // Coprimality and monicity survive t ↦ t^n.
        RatFunc {
            shift: self.shift * n as i64,
            num: self.num.substitute_power(n),
            den: self.den.substitute_power(n),
        }
    }

    /// The substitution `t ↦ t^{-1}`.
    pub fn invert_t(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let nd = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        RatFunc::from_parts(-self.shift - nd + dd, self.num.reverse(), self.den.reverse())
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.invert_t()
    }

    /// The Laurent polynomial equal to `self`, if the denominator is trivial
    /// and every coefficient is an integer.
    pub fn as_laurent_polynomial(&self) -> Option<LaurentPoly> {
        if !self.den.is_one() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (k, c) in self.num.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_integer() {
                return None;
            }
            terms.insert(self.shift + k as i64, c.to_integer());
        }
        Some(LaurentPoly::from_map(terms))
    }

    /// True if the denominator is trivial (coefficients may be fractions).
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Nonzero terms of the ascending expansion up to and including `t^max_exp`.
    pub fn expand_ascending(&self, max_exp: i64) -> Vec<(i64, BigRational)> {
        if self.is_zero() || max_exp < self.shift {
            return Vec::new();
        }
        let len = (max_exp - self.shift) as usize + 1;
        let d0_inv = self.den.coeff(0).recip();
        let mut series: Vec<BigRational> = Vec::with_capacity(len);
        for j in 0..len {
            let mut c = self.num.coeff(j);
            for (i, di) in self.den.coeffs().iter().enumerate().skip(1).take(j) {
                if !di.is_zero() {
                    c -= di * &series[j - i];
                }
            }
            series.push(c * &d0_inv);
        }
        series
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (self.shift + j as i64, c))
            .collect()
    }

    /// Exact value at a rational `t0`.
    pub fn eval_at(&self, t0: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let pole = || Error::Pole(t0.to_string());
        if t0.is_zero() && self.shift < 0 {
            return Err(pole());
        }
        let d = self.den.eval(t0);
        if d.is_zero() {
            return Err(pole());
        }
        let power = if self.shift >= 0 {
            num_traits::pow(t0.clone(), self.shift as usize)
        } else {
            num_traits::pow(t0.recip(), (-self.shift) as usize)
        };
        Ok(power * self.num.eval(t0) / d)
    }

    /// Integer numerator and denominator terms, scaled so all coefficients
    /// are coprime integers and the denominator's leading one is positive.
    pub fn integer_parts(&self) -> (BTreeMap<i64, BigInt>, BTreeMap<i64, BigInt>) {
        let (n, nm) = self.num.integer_form();
        let (d, dm) = self.den.integer_form();
        // num/den = (n/nm)/(d/dm) = (n·dm)/(d·nm)
        let n: Vec<BigInt> = n.into_iter().map(|c| c * &dm).collect();
        let d: Vec<BigInt> = d.into_iter().map(|c| c * &nm).collect();
        let mut g = BigInt::zero();
        for c in n.iter().chain(&d) {
            g = num_integer::Integer::gcd(&g, c);
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        let collect = |v: Vec<BigInt>, shift: i64| -> BTreeMap<i64, BigInt> {
            v.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (shift + k as i64, c / &g))
                .collect()
        };
        (collect(n, self.shift), collect(d, 0))
    }

    fn from_integer_parts(num: &BTreeMap<i64, BigInt>, den: &BTreeMap<i64, BigInt>) -> Result<RatFunc> {
        let to_terms = |m: &BTreeMap<i64, BigInt>| {
            RatFunc::from_terms(m.iter().map(|(&e, c)| (e, BigRational::from_integer(c.clone()))))
        };
        to_terms(num).checked_div(&to_terms(den))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;

    fn add(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - low) as usize);
        let b = other.num.shift_up((other.shift - low) as usize);
        if self.den == other.den {
            return RatFunc::from_parts(low, &a + &b, self.den.clone());
        }
        // Henrici: only the common factor of the denominators can cancel.
        let g = self.den.gcd(&other.den);
        let d1 = self.den.exact_div(&g);
        let d2 = other.den.exact_div(&g);
        let num = &(&a * &d2) + &(&b * &d1);
        let den = &self.den * &d2;
        if num.is_zero() {
            return RatFunc::zero();
        }
        let nv = num.valuation().unwrap();
        let num = num.shift_down(nv);
        let h = num.gcd(&g);
        RatFunc {
            shift: low + nv as i64,
            num: num.exact_div(&h),
            den: den.exact_div(&h),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;

    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &(-other)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            shift: self.shift,
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;

    fn mul(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &other.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &other.den.exact_div(&g1);
        let lc = den.leading().unwrap().clone();
        let (num, den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.recip();
            (num.scale(&inv), den.scale(&inv))
        };
        RatFunc {
            shift: self.shift + other.shift,
            num,
            den,
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, other: RatFunc) -> RatFunc {
                (&self).$m(&other)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, other: &RatFunc) -> RatFunc {
                (&self).$m(other)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

/// Formats `Σ c_k t^k` in descending exponent order.
pub(crate) fn format_terms(terms: &[(i64, BigRational)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match *e {
            0 => String::new(),
            1 => "t".into(),
            e => format!("t^{e}"),
        };
        if mono.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    out
}

fn poly_terms(p: &Poly, shift: i64) -> Vec<(i64, BigRational)> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (shift + k as i64, c.clone()))
        .collect()
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = poly_terms(&self.num, self.shift);
        if self.den.is_one() {
            return write!(f, "{}", format_terms(&num));
        }
        let num_s = format_terms(&num);
        let num_s = if num.len() > 1 { format!("({num_s})") } else { num_s };
        write!(f, "{}/({})", num_s, format_terms(&poly_terms(&self.den, 0)))
    }
}

pub(crate) fn serialize_int_map<S: Serializer>(
    m: &BTreeMap<i64, BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (e, c) in m {
        map.serialize_entry(&e.to_string(), &c.to_string())?;
    }
    map.end()
}

/// Accepts `{exp: coeff}` with string keys and string or integer coefficients.
pub(crate) fn parse_int_map(
    raw: &BTreeMap<String, serde_json::Value>,
) -> std::result::Result<BTreeMap<i64, BigInt>, String> {
    let mut out = BTreeMap::new();
    for (k, v) in raw {
        let e: i64 = k.trim().parse().map_err(|_| format!("bad exponent `{k}`"))?;
        let c: BigInt = match v {
            serde_json::Value::String(s) => s.trim().parse().map_err(|_| format!("bad coefficient `{s}`"))?,
            serde_json::Value::Number(n) if n.is_i64() => BigInt::from(n.as_i64().unwrap()),
            other => return Err(format!("bad coefficient `{other}`")),
        };
        if !c.is_zero() {
            *out.entry(e).or_insert_with(BigInt::zero) += c;
        }
    }
    Ok(out)
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct IntMap<'a>(&'a BTreeMap<i64, BigInt>);
        impl Serialize for IntMap<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_int_map(self.0, s)
            }
        }
        let (num, den) = self.integer_parts();
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("num", &IntMap(&num))?;
        map.serialize_entry("den", &IntMap(&den))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<RatFunc, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: BTreeMap<String, serde_json::Value>,
            den: BTreeMap<String, serde_json::Value>,
        }
        let raw = Raw::deserialize(d)?;
        let num = parse_int_map(&raw.num).map_err(de::Error::custom)?;
        let den = parse_int_map(&raw.den).map_err(de::Error::custom)?;
        RatFunc::from_integer_parts(&num, &den).map_err(de::Error::custom)
    }
}

/// Parses a rational number `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
