//! The quantum torus: series graded by dimension vectors inside a box, with
//! rational-function coefficients.
//!
//! The twisted product is
//! `(F ⊛ G)_d = Σ_{d'+d''=d} (−t)^{<d'',d'>} F_{d'} G_{d''}`,
//! and the plethystic exponential treats every monomial `t^k x^d` as a line
//! element: `EXP(c t^k x^d) = (1 − t^k x^d)^{−c}`, i.e.
//! `EXP(f) = exp(Σ_{n≥1} ψ_n(f)/n)` with `ψ_n` the Adams operation on
//! coefficients and `d ↦ n·d` on the grading.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};
use crate::ratfunc::RatFunc;
use crate::stability::{Slope, Stability};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesTag {
    /// Stacky point counts, rational functions of `q`.
    Count,
    /// Virtually normalized weight polynomials in `t`.
    Virtual,
}

/// `Σ_{0 <= d <= box} a_d x^d`. Absent keys are zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    bound: DimVector,
    tag: SeriesTag,
    coeffs: BTreeMap<DimVector, RatFunc>,
}

impl GradedSeries {
    pub fn zero(bound: DimVector, tag: SeriesTag) -> GradedSeries {
        GradedSeries {
            bound,
            tag,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(bound: DimVector, tag: SeriesTag) -> GradedSeries {
        let mut s = GradedSeries::zero(bound, tag);
        let z = DimVector::zero(s.bound.len());
        s.coeffs.insert(z, RatFunc::one());
        s
    }

    pub fn monomial(bound: DimVector, tag: SeriesTag, d: DimVector, c: RatFunc) -> Result<GradedSeries> {
        let mut s = GradedSeries::zero(bound, tag);
        s.set(d, c)?;
        Ok(s)
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn tag(&self) -> SeriesTag {
        self.tag
    }

    pub fn with_tag(mut self, tag: SeriesTag) -> GradedSeries {
        self.tag = tag;
        self
    }

    pub fn coeff(&self, d: &DimVector) -> RatFunc {
        self.coeffs.get(d).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coeff_ref(&self, d: &DimVector) -> Option<&RatFunc> {
        self.coeffs.get(d)
    }

    pub fn set(&mut self, d: DimVector, c: RatFunc) -> Result<()> {
        if !d.fits_in(&self.bound) {
            return Err(Error::OutsideBox(d, self.bound.clone()));
        }
        if c.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, c);
        }
        Ok(())
    }

    /// Nonzero coefficients in dimension-vector order.
    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<DimVector> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Restricts to a smaller box.
    pub fn restrict(&self, bound: &DimVector) -> GradedSeries {
        GradedSeries {
            bound: bound.clone(),
            tag: self.tag,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(d, _)| d.fits_in(bound))
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_compatible(&self, other: &GradedSeries) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::BoxMismatch(self.bound.clone(), other.bound.clone()));
        }
        if self.tag != other.tag {
            return Err(Error::TagMismatch(format!("{:?} vs {:?}", self.tag, other.tag)));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            let s = &out.coeff(d) + c;
            out.set(d.clone(), s)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.add(&other.map_coeffs(|c| -c))
    }

    pub fn map_coeffs<F: Fn(&RatFunc) -> RatFunc>(&self, f: F) -> GradedSeries {
        let mut out = GradedSeries::zero(self.bound.clone(), self.tag);
        for (d, c) in &self.coeffs {
            out.set(d.clone(), f(c)).unwrap();
        }
        out
    }

    /// `ψ_n`: Adams operation on coefficients, `d ↦ n·d` on the grading.
    pub fn adams(&self, n: u32) -> GradedSeries {
        let mut out = GradedSeries::zero(self.bound.clone(), self.tag);
        for (d, c) in &self.coeffs {
            let nd = d.scale(n);
            if nd.fits_in(&self.bound) {
                out.coeffs.insert(nd, c.adams(n));
            }
        }
        out
    }

    fn product_with<W>(&self, other: &GradedSeries, weight: W) -> GradedSeries
    where
        W: Fn(&DimVector, &DimVector) -> RatFunc,
    {
        let mut acc: BTreeMap<DimVector, RatFunc> = BTreeMap::new();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let d = a.add(b);
                if !d.fits_in(&self.bound) {
                    continue;
                }
                let term = &(x * y) * &weight(a, b);
                let slot = acc.entry(d).or_insert_with(RatFunc::zero);
                *slot = &*slot + &term;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        GradedSeries {
            bound: self.bound.clone(),
            tag: self.tag,
            coeffs: acc,
        }
    }

    /// Cauchy product truncated to the box.
    pub fn mul_untwisted(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        Ok(self.product_with(other, |_, _| RatFunc::one()))
    }

    /// Quantum-torus product with the `(−t)^{<d'',d'>}` twist.
    pub fn mul_twisted(&self, quiver: &Quiver, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_compatible(other)?;
        quiver.check_len(&self.bound)?;
        if self.tag != SeriesTag::Virtual {
            return Err(Error::TagMismatch("twisted products need virtual series".into()));
        }
        Ok(self.product_with(other, |a, b| RatFunc::neg_t_pow(quiver.antisym(b, a))))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("series serializes")
    }
}

/// Left-to-right twisted product of per-slope factors, slopes strictly
/// decreasing, each factor supported on its slope (plus the constant term).
pub fn ordered_slope_product(
    quiver: &Quiver,
    stability: &Stability,
    parts: &[(Slope, GradedSeries)],
) -> Result<GradedSeries> {
    let Some((_, first)) = parts.first() else {
        return Err(Error::Parse("ordered product of no factors".into()));
    };
    for w in parts.windows(2) {
        if w[0].0.try_cmp(&w[1].0)? != std::cmp::Ordering::Greater {
            return Err(Error::SlopeOrder(w[0].0.to_string(), w[1].0.to_string()));
        }
    }
    for (mu, f) in parts {
        for d in f.coeffs.keys().filter(|d| !d.is_zero()) {
            let s = Slope::Rational(stability.slope(d)?);
            if s != *mu {
                return Err(Error::SupportOutsideSlope {
                    d: d.clone(),
                    found: s.to_string(),
                    expected: mu.to_string(),
                });
            }
        }
    }
    let mut acc = GradedSeries::unit(first.bound.clone(), first.tag);
    for (_, f) in parts {
        acc = acc.mul_twisted(quiver, f)?;
    }
    Ok(acc)
}

fn check_commuting(quiver: &Quiver, s: &GradedSeries) -> Result<()> {
    quiver.check_len(&s.bound)?;
    let support: Vec<&DimVector> = s.coeffs.keys().filter(|d| !d.is_zero()).collect();
    for (i, d) in support.iter().enumerate() {
        for e in &support[i + 1..] {
            let p = quiver.antisym(d, e);
            if p != 0 {
                return Err(Error::NonCommutingSupport {
                    d: (*d).clone(),
                    e: (*e).clone(),
                    pairing: p,
                });
            }
        }
    }
    Ok(())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `exp(g)` by the Euler-operator recursion `|d| F_d = Σ_{0<e<=d} |e| g_e F_{d−e}`.
fn x_adic_exp(g: &GradedSeries) -> GradedSeries {
    let mut out = GradedSeries::unit(g.bound.clone(), g.tag);
    for d in g.bound.graded_box().into_iter().skip(1) {
        let mut acc = RatFunc::zero();
        for (e, ge) in &g.coeffs {
            if e.is_zero() || !e.fits_in(&d) {
                continue;
            }
            let rest = d.checked_sub(e).unwrap();
            if let Some(fr) = out.coeffs.get(&rest) {
                acc = &acc + &(ge * fr).scale(&rat(e.total() as i64));
            }
        }
        let c = acc.scale(&rat(d.total() as i64).recip());
        out.set(d, c).unwrap();
    }
    out
}

/// Inverse of [`x_adic_exp`] for series with constant term 1.
fn x_adic_log(f: &GradedSeries) -> GradedSeries {
    let mut out = GradedSeries::zero(f.bound.clone(), f.tag);
    for d in f.bound.graded_box().into_iter().skip(1) {
        let n = d.total() as i64;
        let mut acc = f.coeff(&d).scale(&rat(n));
        for (e, le) in &out.coeffs {
            if !e.fits_in(&d) || *e == d {
                continue;
            }
            let rest = d.checked_sub(e).unwrap();
            if let Some(fr) = f.coeffs.get(&rest) {
                acc = &acc - &(le * fr).scale(&rat(e.total() as i64));
            }
        }
        let c = acc.scale(&rat(n).recip());
        out.set(d, c).unwrap();
    }
    out
}

fn max_multiplier(bound: &DimVector) -> u32 {
    bound.entries().iter().copied().max().unwrap_or(0)
}

pub(crate) fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Plethystic exponential of a series with zero constant term and commuting
/// support.
pub fn exp_pleth(quiver: &Quiver, f: &GradedSeries) -> Result<GradedSeries> {
    let zero = DimVector::zero(f.bound.len());
    if f.coeffs.contains_key(&zero) {
        return Err(Error::NonzeroConstantTerm);
    }
    check_commuting(quiver, f)?;
    let mut g = GradedSeries::zero(f.bound.clone(), f.tag);
    for n in 1..=max_multiplier(&f.bound) {
        let term = f.adams(n).map_coeffs(|c| c.scale(&rat(n as i64).recip()));
        g = g.add(&term)?;
    }
    Ok(x_adic_exp(&g))
}

/// Plethystic logarithm: the unique `f` with `exp_pleth(f) = F` in the box.
pub fn log_pleth(quiver: &Quiver, big_f: &GradedSeries) -> Result<GradedSeries> {
    let zero = DimVector::zero(big_f.bound.len());
    if !big_f.coeff(&zero).is_one() {
        return Err(Error::NonUnitConstantTerm);
    }
    check_commuting(quiver, big_f)?;
    let log = x_adic_log(big_f);
    let mut f = GradedSeries::zero(big_f.bound.clone(), big_f.tag);
    for n in 1..=max_multiplier(&big_f.bound) {
        let mu = mobius(n);
        if mu == 0 {
            continue;
        }
        let c = BigRational::new(mu.into(), (n as i64).into());
        f = f.add(&log.adams(n).map_coeffs(|x| x.scale(&c)))?;
    }
    Ok(f)
}

impl Serialize for GradedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a BTreeMap<DimVector, RatFunc>);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (d, c) in self.0 {
                    m.serialize_entry(&d.key(), c)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("box", &self.bound)?;
        m.serialize_entry("tag", &self.tag)?;
        m.serialize_entry("coeffs", &Coeffs(&self.coeffs))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for GradedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<GradedSeries, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "box")]
            bound: DimVector,
            tag: SeriesTag,
            coeffs: BTreeMap<String, RatFunc>,
        }
        let raw = Raw::deserialize(d)?;
        let mut s = GradedSeries::zero(raw.bound, raw.tag);
        for (k, c) in raw.coeffs {
            let dv = DimVector::parse(&k).map_err(de::Error::custom)?;
            if dv.len() != s.bound.len() {
                return Err(de::Error::custom(format!("key `{k}` has the wrong length")));
            }
            s.set(dv, c).map_err(de::Error::custom)?;
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn one_var(bound: u32, coeffs: &[(u32, RatFunc)]) -> GradedSeries {
        let mut s = GradedSeries::zero(dv(&[bound]), SeriesTag::Virtual);
        for (d, c) in coeffs {
            s.set(dv(&[*d]), c.clone()).unwrap();
        }
        s
    }

    fn geometric_q() -> RatFunc {
        RatFunc::one().checked_div(&(&RatFunc::one() - &RatFunc::q())).unwrap()
    }

    /// `Π_{j=1..d} (1 − q^j)^{-1}`.
    fn q_pochhammer_inv(d: u32) -> RatFunc {
        (1..=d).fold(RatFunc::one(), |acc, j| {
            let f = &RatFunc::one() - &RatFunc::t_pow(2 * j as i64);
            acc.checked_div(&f).unwrap()
        })
    }

    #[test]
    fn untwisted_examples() {
        let one = RatFunc::one();
        let f = one_var(2, &[(0, one.clone()), (1, one.clone())]);
        let sq = f.mul_untwisted(&f).unwrap();
        assert_eq!(
            sq,
            one_var(2, &[(0, one.clone()), (1, RatFunc::from_int(2)), (2, one.clone())])
        );
        let unit = GradedSeries::unit(dv(&[2]), SeriesTag::Virtual);
        assert_eq!(f.mul_untwisted(&unit).unwrap(), f);
        let other = GradedSeries::unit(dv(&[3]), SeriesTag::Virtual);
        assert!(matches!(f.mul_untwisted(&other), Err(Error::BoxMismatch(..))));
        let count = GradedSeries::unit(dv(&[2]), SeriesTag::Count);
        assert!(matches!(f.mul_untwisted(&count), Err(Error::TagMismatch(_))));
    }

    #[test]
    fn twisted_examples() {
        let a2 = Quiver::a2();
        let b = dv(&[1, 1]);
        let x10 = GradedSeries::monomial(b.clone(), SeriesTag::Virtual, dv(&[1, 0]), RatFunc::one()).unwrap();
        let x01 = GradedSeries::monomial(b.clone(), SeriesTag::Virtual, dv(&[0, 1]), RatFunc::one()).unwrap();
        let p = x10.mul_twisted(&a2, &x01).unwrap();
        assert_eq!(p.coeff(&dv(&[1, 1])), -RatFunc::t());
        let p = x01.mul_twisted(&a2, &x10).unwrap();
        assert_eq!(p.coeff(&dv(&[1, 1])), -RatFunc::t_pow(-1));
        let count = GradedSeries::unit(b, SeriesTag::Count);
        assert!(count.mul_twisted(&a2, &count).is_err());
    }

    #[test]
    fn exp_examples() {
        let j = Quiver::jordan();
        let one = RatFunc::one();
        let x = one_var(5, &[(1, one.clone())]);
        let e = exp_pleth(&j, &x).unwrap();
        assert_eq!(e, one_var(5, &(0..=5).map(|d| (d, one.clone())).collect::<Vec<_>>()));

        let f = one_var(4, &[(1, geometric_q())]);
        let e = exp_pleth(&j, &f).unwrap();
        let euler: Vec<_> = (0..=4).map(|d| (d, q_pochhammer_inv(d))).collect();
        assert_eq!(e, one_var(4, &euler));
        assert_eq!(log_pleth(&j, &e).unwrap(), f);

        let zero = GradedSeries::zero(dv(&[3]), SeriesTag::Virtual);
        assert_eq!(
            exp_pleth(&j, &zero).unwrap(),
            GradedSeries::unit(dv(&[3]), SeriesTag::Virtual)
        );
        assert_eq!(
            log_pleth(&j, &one_var(5, &(0..=5).map(|d| (d, one.clone())).collect::<Vec<_>>())).unwrap(),
            x
        );
    }

    #[test]
    fn exp_line_element_rule() {
        // EXP(c t^k x) = (1 − t^k x)^{-c}
        let j = Quiver::jordan();
        for (c, k) in [(2i64, 1i64), (-1, 3), (3, -2)] {
            let f = one_var(4, &[(1, RatFunc::t_pow(k).scale(&rat(c)))]);
            let e = exp_pleth(&j, &f).unwrap();
            // (1 − y)^{-c} = Σ_n binom(c+n−1, n) y^n
            let mut expected = GradedSeries::unit(dv(&[4]), SeriesTag::Virtual);
            let mut binom = rat(1);
            for n in 1..=4u32 {
                binom = binom * rat(c + n as i64 - 1) / rat(n as i64);
                expected
                    .set(dv(&[n]), RatFunc::t_pow(k * n as i64).scale(&binom))
                    .unwrap();
            }
            assert_eq!(e, expected);
        }
    }

    #[test]
    fn exp_errors() {
        let k2 = Quiver::kronecker(2);
        let b = dv(&[1, 1]);
        let unit = GradedSeries::unit(b.clone(), SeriesTag::Virtual);
        assert!(matches!(exp_pleth(&k2, &unit), Err(Error::NonzeroConstantTerm)));
        let mut f = GradedSeries::zero(b.clone(), SeriesTag::Virtual);
        f.set(dv(&[1, 0]), RatFunc::one()).unwrap();
        f.set(dv(&[0, 1]), RatFunc::one()).unwrap();
        assert!(matches!(exp_pleth(&k2, &f), Err(Error::NonCommutingSupport { .. })));
        assert!(matches!(log_pleth(&k2, &f), Err(Error::NonUnitConstantTerm)));
    }

    #[test]
    fn ordered_product_checks() {
        let a2 = Quiver::a2();
        let z = Stability::from_ints(&[(-1, 1), (0, 1)]).unwrap();
        let b = dv(&[1, 1]);
        let f1 = GradedSeries::monomial(b.clone(), SeriesTag::Virtual, dv(&[1, 0]), RatFunc::one()).unwrap();
        let f0 = GradedSeries::monomial(b.clone(), SeriesTag::Virtual, dv(&[0, 1]), RatFunc::one()).unwrap();
        let one = Slope::Rational(rat(1));
        let zero = Slope::Rational(rat(0));
        assert_eq!(
            ordered_slope_product(&a2, &z, &[(one.clone(), f1.clone())]).unwrap(),
            f1
        );
        let p = ordered_slope_product(&a2, &z, &[(one.clone(), f1.clone()), (zero.clone(), f0.clone())]).unwrap();
        assert_eq!(p, f1.mul_twisted(&a2, &f0).unwrap());
        assert!(matches!(
            ordered_slope_product(&a2, &z, &[(zero.clone(), f0.clone()), (one.clone(), f1.clone())]),
            Err(Error::SlopeOrder(..))
        ));
        assert!(matches!(
            ordered_slope_product(&a2, &z, &[(zero, f1)]),
            Err(Error::SupportOutsideSlope { .. })
        ));
    }

    #[test]
    fn series_json() {
        let mut s = GradedSeries::unit(dv(&[2, 1]), SeriesTag::Virtual);
        s.set(dv(&[1, 1]), RatFunc::chi_cpinf_vir()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"box":[2,1],"tag":"virtual","coeffs":{"0,0":"#));
        let back: GradedSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(s.set(dv(&[3, 0]), RatFunc::one()).is_err());
    }

    #[test]
    fn mobius_values() {
        let v: Vec<i64> = (1..=10).map(mobius).collect();
        assert_eq!(v, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    // Small random coefficients: ±t^k and 1/(1 − t^k) pieces.
    fn arb_coeff() -> impl Strategy<Value = RatFunc> {
        prop_oneof![
            (-2i64..3, -2i64..3).prop_map(|(c, k)| RatFunc::t_pow(k).scale(&rat(c))),
            (1i64..3).prop_map(|k| RatFunc::one()
                .checked_div(&(&RatFunc::one() - &RatFunc::t_pow(k)))
                .unwrap()),
        ]
    }

    fn arb_series(bound: DimVector, with_constant: bool) -> impl Strategy<Value = GradedSeries> {
        let keys: Vec<DimVector> = bound.box_iter().filter(|d| with_constant || !d.is_zero()).collect();
        let n = keys.len();
        prop::collection::vec(prop::option::weighted(0.4, arb_coeff()), n).prop_map(move |cs| {
            let mut s = GradedSeries::zero(bound.clone(), SeriesTag::Virtual);
            for (d, c) in keys.iter().zip(cs) {
                if let Some(c) = c {
                    s.set(d.clone(), c).unwrap();
                }
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn twisted_product_is_associative(
            a in arb_series(dv(&[2, 1]), true),
            b in arb_series(dv(&[2, 1]), true),
            c in arb_series(dv(&[2, 1]), true),
        ) {
            let q = Quiver::kronecker(2);
            let left = a.mul_twisted(&q, &b).unwrap().mul_twisted(&q, &c).unwrap();
            let right = a.mul_twisted(&q, &b.mul_twisted(&q, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let ul = a.mul_untwisted(&b).unwrap().mul_untwisted(&c).unwrap();
            let ur = a.mul_untwisted(&b.mul_untwisted(&c).unwrap()).unwrap();
            prop_assert_eq!(ul, ur);
        }

        #[test]
        fn symmetric_quiver_twist_vanishes(a in arb_series(dv(&[1, 2]), true), b in arb_series(dv(&[1, 2]), true)) {
            let q = Quiver::new(vec!["1".into(), "2".into()], vec![(0, 1), (1, 0), (0, 0)]).unwrap();
            prop_assert_eq!(a.mul_twisted(&q, &b).unwrap(), a.mul_untwisted(&b).unwrap());
        }

        #[test]
        fn exp_log_inverse(f in arb_series(dv(&[2, 2]), false)) {
            let q = Quiver::loops(2).framed_quiver(&dv(&[0])).unwrap();
            // two vertices, no arrows between them: symmetric, so everything commutes
            let sym = Quiver::new(q.vertices().to_vec(), vec![(0, 0)]).unwrap();
            let e = exp_pleth(&sym, &f).unwrap();
            prop_assert_eq!(log_pleth(&sym, &e).unwrap(), f.clone());
        }

        #[test]
        fn exp_is_additive(f in arb_series(dv(&[3]), false), g in arb_series(dv(&[3]), false)) {
            let j = Quiver::jordan();
            let lhs = exp_pleth(&j, &f.add(&g).unwrap()).unwrap();
            let rhs = exp_pleth(&j, &f).unwrap().mul_untwisted(&exp_pleth(&j, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn adams_grading(f in arb_series(dv(&[3, 2]), false), n in 2u32..4) {
            for (d, _) in f.adams(n).iter() {
                prop_assert!(d.entries().iter().all(|x| x % n == 0));
            }
        }

        #[test]
        fn box_monotonicity(f in arb_series(dv(&[3]), false)) {
            let j = Quiver::jordan();
            let small = dv(&[2]);
            prop_assert_eq!(
                exp_pleth(&j, &f).unwrap().restrict(&small),
                exp_pleth(&j, &f.restrict(&small)).unwrap()
            );
        }
    }

    #[test]
    fn monomials_twist_commute() {
        let k2 = Quiver::kronecker(2);
        let b = dv(&[2, 2]);
        for (d1, d2) in [
            (dv(&[1, 0]), dv(&[0, 1])),
            (dv(&[1, 1]), dv(&[1, 0])),
            (dv(&[0, 1]), dv(&[1, 1])),
        ] {
            let x1 = GradedSeries::monomial(b.clone(), SeriesTag::Virtual, d1.clone(), RatFunc::one()).unwrap();
            let x2 = GradedSeries::monomial(b.clone(), SeriesTag::Virtual, d2.clone(), RatFunc::one()).unwrap();
            let lhs = x1.mul_twisted(&k2, &x2).unwrap();
            let rhs = x2.mul_twisted(&k2, &x1).unwrap();
            let s = d1.add(&d2);
            let factor = RatFunc::q().pow(k2.antisym(&d2, &d1)).unwrap();
            assert_eq!(lhs.coeff(&s), &factor * &rhs.coeff(&s));
        }
    }
}
