//! Central charges, slopes, genericity and Harder–Narasimhan types.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};
use crate::ratfunc::parse_rational;

/// A slope value. `JustAbove(μ)` sits strictly between `μ` and every rational
/// larger than `μ`; it is the slope given to framed vectors with `δ = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Rational(BigRational),
    JustAbove(BigRational),
}

impl Slope {
    pub fn rational(&self) -> &BigRational {
        match self {
            Slope::Rational(r) | Slope::JustAbove(r) => r,
        }
    }

    pub fn try_cmp(&self, other: &Slope) -> Result<Ordering> {
        use Slope::*;
        Ok(match (self, other) {
            (Rational(a), Rational(b)) => a.cmp(b),
            (JustAbove(a), Rational(b)) => {
                if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (Rational(_), JustAbove(_)) => other.try_cmp(self)?.reverse(),
            (JustAbove(a), JustAbove(b)) => {
                if a != b {
                    return Err(Error::SymbolicComparison(self.to_string(), other.to_string()));
                }
                Ordering::Equal
            }
        })
    }

    pub fn parse(s: &str) -> Result<Slope> {
        let s = s.trim();
        match s.strip_suffix('+') {
            Some(r) => Ok(Slope::JustAbove(parse_rational(r)?)),
            None => Ok(Slope::Rational(parse_rational(s)?)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Rational(r) => write!(f, "{r}"),
            Slope::JustAbove(r) => write!(f, "{r}+"),
        }
    }
}

impl From<BigRational> for Slope {
    fn from(r: BigRational) -> Self {
        Slope::Rational(r)
    }
}

/// A rule assigning slopes to nonzero dimension vectors.
pub trait SlopeMap: Sync {
    fn dimension(&self) -> usize;
    fn slope_of(&self, d: &DimVector) -> Result<Slope>;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Charge {
    #[serde(with = "rational_string")]
    pub re: BigRational,
    #[serde(with = "rational_string")]
    pub im: BigRational,
}

mod rational_string {
    use num_rational::BigRational;
    use serde::de::{self, Deserializer};
    use serde::{Deserialize, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) if n.is_i64() => n.to_string(),
            other => return Err(de::Error::custom(format!("bad rational `{other}`"))),
        };
        crate::ratfunc::parse_rational(&text).map_err(de::Error::custom)
    }
}

/// Per-vertex central charges `ζ_i = re_i + i·im_i` with `im_i > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stability {
    charges: Vec<Charge>,
}

impl Stability {
    pub fn new(charges: Vec<Charge>) -> Result<Stability> {
        if let Some(i) = charges.iter().position(|c| !c.im.is_positive()) {
            return Err(Error::NonPositiveImaginary(i));
        }
        Ok(Stability { charges })
    }

    pub fn from_ints(pairs: &[(i64, i64)]) -> Result<Stability> {
        Stability::new(
            pairs
                .iter()
                .map(|&(re, im)| Charge {
                    re: BigRational::from_integer(BigInt::from(re)),
                    im: BigRational::from_integer(BigInt::from(im)),
                })
                .collect(),
        )
    }

    /// Every vertex gets `ζ_i = i`, so every vector has slope 0.
    pub fn trivial(n: usize) -> Stability {
        Stability::from_ints(&vec![(0, 1); n]).unwrap()
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }

    pub fn from_json(s: &str) -> Result<Stability> {
        Stability::new(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.charges).expect("stability serializes")
    }

    /// `Ξ(d) = −Re Z(d) / Im Z(d)`.
    pub fn slope(&self, d: &DimVector) -> Result<BigRational> {
        if d.len() != self.charges.len() {
            return Err(Error::VertexMismatch {
                expected: self.charges.len(),
                found: d.len(),
            });
        }
        if d.is_zero() {
            return Err(Error::ZeroDimension);
        }
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for (c, &x) in self.charges.iter().zip(d.entries()) {
            if x > 0 {
                let x = BigRational::from_integer(BigInt::from(x));
                re += &c.re * &x;
                im += &c.im * &x;
            }
        }
        Ok(-re / im)
    }

    /// All nonzero `d <= box` of slope `μ`, in graded order.
    pub fn lambda_mu(&self, mu: &Slope, bound: &DimVector) -> Result<Vec<DimVector>> {
        let Slope::Rational(mu) = mu else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for d in bound.graded_box() {
            if !d.is_zero() && self.slope(&d)? == *mu {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Distinct slopes realized by nonzero vectors in the box, descending.
    pub fn slopes_on_box(&self, bound: &DimVector) -> Result<Vec<BigRational>> {
        let mut slopes = Vec::new();
        for d in bound.box_iter() {
            if !d.is_zero() {
                slopes.push(self.slope(&d)?);
            }
        }
        slopes.sort_by(|a, b| b.cmp(a));
        slopes.dedup();
        Ok(slopes)
    }

    /// A pair in `Λ_μ ∩ box` with nonvanishing `<,>`, if any.
    pub fn genericity_witness(
        &self,
        quiver: &Quiver,
        mu: &Slope,
        bound: &DimVector,
    ) -> Result<Option<(DimVector, DimVector, i64)>> {
        quiver.check_len(bound)?;
        let lambda = self.lambda_mu(mu, bound)?;
        for (i, d) in lambda.iter().enumerate() {
            for e in &lambda[i + 1..] {
                let p = quiver.antisym(d, e);
                if p != 0 {
                    return Ok(Some((d.clone(), e.clone(), p)));
                }
            }
        }
        Ok(None)
    }

    /// `ζ` is `μ`-generic on the box: `<d,e> = 0` for all `d, e ∈ Λ_μ ∩ box`.
    pub fn is_mu_generic(&self, quiver: &Quiver, mu: &Slope, bound: &DimVector) -> Result<bool> {
        Ok(self.genericity_witness(quiver, mu, bound)?.is_none())
    }

    pub fn require_generic(&self, quiver: &Quiver, mu: &Slope, bound: &DimVector) -> Result<()> {
        match self.genericity_witness(quiver, mu, bound)? {
            None => Ok(()),
            Some((d, e, pairing)) => Err(Error::NotGeneric {
                slope: mu.to_string(),
                boxed: bound.clone(),
                d,
                e,
                pairing,
            }),
        }
    }
}

impl SlopeMap for Stability {
    fn dimension(&self) -> usize {
        self.charges.len()
    }

    fn slope_of(&self, d: &DimVector) -> Result<Slope> {
        self.slope(d).map(Slope::Rational)
    }
}

/// The limit stability on the framed quiver: `∞` is the last coordinate,
/// vectors with `δ = 0` keep their `ζ`-slope and vectors with `δ >= 1` get
/// the symbolic slope `μ+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedStability {
    pub base: Stability,
    pub mu: BigRational,
}

pub fn framed_stability(base: &Stability, mu: &BigRational) -> FramedStability {
    FramedStability {
        base: base.clone(),
        mu: mu.clone(),
    }
}

impl SlopeMap for FramedStability {
    fn dimension(&self) -> usize {
        self.base.dimension() + 1
    }

    fn slope_of(&self, d: &DimVector) -> Result<Slope> {
        let n = self.base.dimension();
        if d.len() != n + 1 {
            return Err(Error::VertexMismatch {
                expected: n + 1,
                found: d.len(),
            });
        }
        if d.entries()[n] > 0 {
            return Ok(Slope::JustAbove(self.mu.clone()));
        }
        self.base
            .slope(&DimVector::new(d.entries()[..n].to_vec()))
            .map(Slope::Rational)
    }
}

/// A Harder–Narasimhan type: parts with strictly decreasing slopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnType {
    pub parts: Vec<DimVector>,
    pub slopes: Vec<Slope>,
    /// `Σ_{r<r'} d^r · d^{r'}`.
    pub f1: i64,
    /// `Σ_{r<r'} Σ_a d^{r'}_{s(a)} d^r_{t(a)}`.
    pub f2: i64,
}

impl HnType {
    pub fn new(quiver: &Quiver, parts: Vec<DimVector>, slopes: Vec<Slope>) -> HnType {
        let (f1, f2) = twist_dims(quiver, &parts);
        HnType { parts, slopes, f1, f2 }
    }

    /// `(d̄,d̄) = f1 − f2`.
    pub fn twist(&self) -> i64 {
        self.f1 - self.f2
    }

    pub fn total(&self) -> DimVector {
        let n = self.parts[0].len();
        self.parts.iter().fold(DimVector::zero(n), |acc, p| acc.add(p))
    }
}

fn twist_dims(quiver: &Quiver, parts: &[DimVector]) -> (i64, i64) {
    let mut f1 = 0;
    let mut f2 = 0;
    for (r, a) in parts.iter().enumerate() {
        for b in &parts[r + 1..] {
            f1 += a.dot(b);
            f2 += quiver
                .arrows()
                .iter()
                .map(|&(s, t)| b.entries()[s] as i64 * a.entries()[t] as i64)
                .sum::<i64>();
        }
    }
    (f1, f2)
}

/// Recomputes `(d̄,d̄) = f1(d̄) − f2(d̄)` from the parts.
pub fn hn_twist(quiver: &Quiver, h: &HnType) -> i64 {
    let (f1, f2) = twist_dims(quiver, &h.parts);
    f1 - f2
}

/// Every HN type of `d`, including the trivial one `(d)`, ordered by number
/// of parts and then lexicographically on the flattened parts.
pub fn hn_types(quiver: &Quiver, slopes: &dyn SlopeMap, d: &DimVector) -> Result<Vec<HnType>> {
    quiver.check_len(d)?;
    if d.is_zero() {
        return Err(Error::ZeroDimension);
    }
    let mut cache: HashMap<DimVector, Slope> = HashMap::new();
    for e in d.box_iter() {
        if !e.is_zero() {
            let s = slopes.slope_of(&e)?;
            cache.insert(e, s);
        }
    }
    let mut found = Vec::new();
    let mut acc = Vec::new();
    enumerate(d, None, &cache, &mut acc, &mut found)?;
    let mut types: Vec<HnType> = found
        .into_iter()
        .map(|parts: Vec<DimVector>| {
            let s = parts.iter().map(|p| cache[p].clone()).collect();
            HnType::new(quiver, parts, s)
        })
        .collect();
    types.sort_by(|a, b| {
        a.parts.len().cmp(&b.parts.len()).then_with(|| {
            let fa = a.parts.iter().flat_map(|p| p.entries().iter());
            let fb = b.parts.iter().flat_map(|p| p.entries().iter());
            fa.cmp(fb)
        })
    });
    Ok(types)
}

fn enumerate(
    remaining: &DimVector,
    bound: Option<&Slope>,
    cache: &HashMap<DimVector, Slope>,
    acc: &mut Vec<DimVector>,
    out: &mut Vec<Vec<DimVector>>,
) -> Result<()> {
    if remaining.is_zero() {
        out.push(acc.clone());
        return Ok(());
    }
    for e in remaining.box_iter() {
        if e.is_zero() {
            continue;
        }
        let s = &cache[&e];
        if let Some(b) = bound {
            if s.try_cmp(b)? != Ordering::Less {
                continue;
            }
        }
        let rest = remaining.checked_sub(&e).unwrap();
        acc.push(e);
        let s = s.clone();
        enumerate(&rest, Some(&s), cache, acc, out)?;
        acc.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn chamber_a() -> Stability {
        Stability::from_ints(&[(-1, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn slope_examples() {
        let triv = Stability::trivial(2);
        assert_eq!(triv.slope(&dv(&[3, 1])).unwrap(), r(0, 1));
        let z = chamber_a();
        assert_eq!(z.slope(&dv(&[1, 1])).unwrap(), r(1, 2));
        assert_eq!(z.slope(&dv(&[0, 1])).unwrap(), r(0, 1));
        assert_eq!(z.slope(&dv(&[1, 0])).unwrap(), r(1, 1));
        assert!(matches!(z.slope(&dv(&[0, 0])), Err(Error::ZeroDimension)));
        assert!(Stability::from_ints(&[(0, 0)]).is_err());
    }

    #[test]
    fn lambda_examples() {
        let triv = Stability::trivial(2);
        let zero = Slope::Rational(r(0, 1));
        assert_eq!(triv.lambda_mu(&zero, &dv(&[2, 2])).unwrap().len(), 8);
        let z = chamber_a();
        assert_eq!(
            z.lambda_mu(&Slope::Rational(r(1, 2)), &dv(&[3, 3])).unwrap(),
            vec![dv(&[1, 1]), dv(&[2, 2]), dv(&[3, 3])]
        );
        assert!(z.lambda_mu(&Slope::Rational(r(2, 1)), &dv(&[3, 3])).unwrap().is_empty());
    }

    #[test]
    fn genericity_examples() {
        let zero = Slope::Rational(r(0, 1));
        let k2 = Quiver::kronecker(2);
        assert!(Stability::trivial(1)
            .is_mu_generic(&Quiver::loops(3), &zero, &dv(&[5]))
            .unwrap());
        let w = Stability::trivial(2)
            .genericity_witness(&k2, &zero, &dv(&[1, 1]))
            .unwrap()
            .unwrap();
        assert_eq!((w.0, w.1, w.2), (dv(&[0, 1]), dv(&[1, 0]), 2));
        assert!(chamber_a()
            .is_mu_generic(&k2, &Slope::Rational(r(1, 2)), &dv(&[4, 4]))
            .unwrap());
        assert!(matches!(
            Stability::trivial(2).require_generic(&k2, &zero, &dv(&[1, 1])),
            Err(Error::NotGeneric { pairing: 2, .. })
        ));
    }

    #[test]
    fn hn_examples() {
        let a2 = Quiver::a2();
        let z = chamber_a();
        let t = hn_types(&a2, &z, &dv(&[1, 1])).unwrap();
        let parts: Vec<_> = t.iter().map(|h| h.parts.clone()).collect();
        assert_eq!(parts, vec![vec![dv(&[1, 1])], vec![dv(&[1, 0]), dv(&[0, 1])]]);
        let t = hn_types(&a2, &z, &dv(&[2, 1])).unwrap();
        let parts: Vec<_> = t.iter().map(|h| h.parts.clone()).collect();
        assert_eq!(
            parts,
            vec![
                vec![dv(&[2, 1])],
                vec![dv(&[1, 0]), dv(&[1, 1])],
                vec![dv(&[2, 0]), dv(&[0, 1])],
            ]
        );
        let t = hn_types(&Quiver::jordan(), &Stability::trivial(1), &dv(&[1])).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn twist_examples() {
        let a2 = Quiver::a2();
        let z = chamber_a();
        let trivial = hn_types(&a2, &z, &dv(&[2, 1])).unwrap();
        assert_eq!(hn_twist(&a2, &trivial[0]), 0);
        let h = HnType::new(&a2, vec![dv(&[1, 0]), dv(&[0, 1])], vec![]);
        assert_eq!((h.f1, h.f2, h.twist()), (0, 0, 0));
        let h = HnType::new(&a2, vec![dv(&[0, 1]), dv(&[1, 0])], vec![]);
        assert_eq!((h.f1, h.f2, h.twist()), (0, 1, -1));
    }

    #[test]
    fn symbolic_slopes() {
        let half = r(1, 2);
        let plus = Slope::JustAbove(half.clone());
        let at = Slope::Rational(half.clone());
        let above = Slope::Rational(r(2, 3));
        assert_eq!(plus.try_cmp(&at).unwrap(), Ordering::Greater);
        assert_eq!(plus.try_cmp(&above).unwrap(), Ordering::Less);
        assert_eq!(at.try_cmp(&plus).unwrap(), Ordering::Less);
        assert_eq!(at.try_cmp(&above).unwrap(), Ordering::Less);
        assert!(plus.try_cmp(&Slope::JustAbove(r(0, 1))).is_err());
        assert_eq!(Slope::parse("1/2+").unwrap(), plus);

        let fs = framed_stability(&chamber_a(), &half);
        assert_eq!(fs.slope_of(&dv(&[1, 1, 1])).unwrap(), plus);
        assert_eq!(fs.slope_of(&dv(&[1, 0, 0])).unwrap(), Slope::Rational(r(1, 1)));
    }

    #[test]
    fn stability_json() {
        let z = Stability::from_json(r#"[{"re":"-1","im":"1"},{"re":"0","im":"1/2"}]"#).unwrap();
        assert_eq!(z.charges()[1].im, r(1, 2));
        assert_eq!(Stability::from_json(&z.to_json()).unwrap(), z);
        assert!(Stability::from_json(r#"[{"re":"0","im":"-1"}]"#).is_err());
    }

    fn arb_stability() -> impl Strategy<Value = Stability> {
        prop::collection::vec((-3i64..4, 1i64..4), 2).prop_map(|v| Stability::from_ints(&v).unwrap())
    }

    proptest! {
        #[test]
        fn slope_is_scale_invariant(z in arb_stability(), a in 0u32..4, b in 0u32..4, k in 1u32..5) {
            let d = dv(&[a, b]);
            prop_assume!(!d.is_zero());
            prop_assert_eq!(z.slope(&d.scale(k)).unwrap(), z.slope(&d).unwrap());
        }

        #[test]
        fn hn_types_partition(z in arb_stability(), a in 0u32..3, b in 0u32..3) {
            let d = dv(&[a, b]);
            prop_assume!(!d.is_zero());
            let k2 = Quiver::kronecker(2);
            let types = hn_types(&k2, &z, &d).unwrap();
            prop_assert_eq!(&types[0].parts, &vec![d.clone()]);
            prop_assert_eq!(types[0].twist(), 0);
            for h in &types {
                prop_assert_eq!(h.total(), d.clone());
                for w in h.slopes.windows(2) {
                    prop_assert_eq!(w[0].try_cmp(&w[1]).unwrap(), Ordering::Greater);
                }
                prop_assert_eq!(hn_twist(&k2, h), h.twist());
            }
        }

        #[test]
        fn genericity_shrinks_with_box(z in arb_stability(), a in 1u32..3, b in 1u32..3) {
            let k2 = Quiver::kronecker(2);
            let small = dv(&[a, b]);
            let large = dv(&[a + 1, b + 1]);
            for mu in z.slopes_on_box(&large).unwrap() {
                let mu = Slope::Rational(mu);
                if z.is_mu_generic(&k2, &mu, &large).unwrap() {
                    prop_assert!(z.is_mu_generic(&k2, &mu, &small).unwrap());
                }
            }
        }
    }

    #[test]
    fn single_slope_has_only_trivial_type() {
        let k2 = Quiver::kronecker(2);
        for d in dv(&[2, 2]).box_iter().filter(|d| !d.is_zero()) {
            assert_eq!(hn_types(&k2, &Stability::trivial(2), &d).unwrap().len(), 1);
        }
    }
}
