//! Framed moduli spaces, the framed PBW identity and stabilization.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quiver::{framed_vector, DimVector, FramingVector, Quiver};
use crate::ratfunc::RatFunc;
use crate::stability::{framed_stability, Stability};
use crate::torus::{exp_pleth, GradedSeries, SeriesTag};

use super::dt::{dt_invariants, t_minus_t_inv};
use super::series::{bridge, semistable_counts_with, vir_series};

/// Virtual weight polynomial of the smooth framed moduli space `M_{f,d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedClass {
    pub framing: FramingVector,
    pub d: DimVector,
    pub chi_vir: RatFunc,
    /// `f·d − (d,d)`.
    pub dim: i64,
}

impl FramedClass {
    pub fn is_empty(&self) -> bool {
        self.chi_vir.is_zero()
    }
}

fn check_in_lambda(stability: &Stability, mu: &BigRational, d: &DimVector) -> Result<()> {
    if !d.is_zero() && stability.slope(d)? != *mu {
        return Err(Error::NotOfSlope(d.clone(), mu.to_string()));
    }
    Ok(())
}

/// `χ(M_{f,d})_vir = (t − t^{-1}) · a^{ss}_{(d,1)}` on the framed quiver, for
/// every `d ∈ Λ_μ ∩ box` (and `d = 0`), in graded order.
pub fn framed_classes(
    quiver: &Quiver,
    framing: &FramingVector,
    stability: &Stability,
    mu: &BigRational,
    bound: &DimVector,
) -> Result<Vec<FramedClass>> {
    quiver.check_len(framing)?;
    quiver.check_len(bound)?;
    let qf = quiver.framed_quiver(framing)?;
    let fs = framed_stability(stability, mu);
    let counts = semistable_counts_with(&qf, &fs, &framed_vector(1, bound), Exec::default())?;
    let vir = bridge(&qf, &counts)?;
    let factor = t_minus_t_inv();
    let mut out = Vec::new();
    for d in bound.graded_box() {
        if !d.is_zero() && stability.slope(&d)? != *mu {
            continue;
        }
        let chi_vir = &factor * &vir.coeff(&framed_vector(1, &d));
        out.push(FramedClass {
            dim: framing.dot(&d) - quiver.euler(&d, &d),
            framing: framing.clone(),
            d,
            chi_vir,
        });
    }
    Ok(out)
}

pub fn framed_vir(
    quiver: &Quiver,
    framing: &FramingVector,
    stability: &Stability,
    mu: &BigRational,
    d: &DimVector,
) -> Result<FramedClass> {
    quiver.check_len(d)?;
    check_in_lambda(stability, mu, d)?;
    let classes = framed_classes(quiver, framing, stability, mu, d)?;
    Ok(classes.into_iter().find(|c| c.d == *d).expect("d is in its own box"))
}

/// `χ(P^{n−1})_vir = (−t)^{−(n−1)} (1 + q + … + q^{n−1})`, zero for `n = 0`.
pub fn projective_space_vir(n: i64) -> RatFunc {
    if n <= 0 {
        return RatFunc::zero();
    }
    let sum = RatFunc::from_terms((0..n).map(|j| (2 * j, BigRational::from_integer(1.into()))));
    &RatFunc::neg_t_pow(1 - n) * &sum
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwReport {
    pub lhs: GradedSeries,
    pub rhs: GradedSeries,
    /// Nonzero coefficients of `lhs − rhs`.
    pub residual: Vec<(DimVector, RatFunc)>,
}

impl PbwReport {
    pub fn passed(&self) -> bool {
        self.residual.is_empty()
    }
}

/// `Σ (−t)^{f·d} χ(M_{f,d})_vir x^d = EXP(Σ Ω_d (−t)^{f·d} χ(P^{f·d−1})_vir x^d)`
/// over `Λ_μ ∩ box`.
pub fn framed_pbw_check(
    quiver: &Quiver,
    framing: &FramingVector,
    stability: &Stability,
    mu: &BigRational,
    bound: &DimVector,
) -> Result<PbwReport> {
    let dt = dt_invariants(quiver, stability, mu, bound)?;
    let mut lhs = GradedSeries::unit(bound.clone(), SeriesTag::Virtual);
    for c in framed_classes(quiver, framing, stability, mu, bound)? {
        if !c.d.is_zero() {
            let n = framing.dot(&c.d);
            lhs.set(c.d.clone(), &RatFunc::neg_t_pow(n) * &c.chi_vir)?;
        }
    }
    let mut arg = GradedSeries::zero(bound.clone(), SeriesTag::Virtual);
    for e in &dt.entries {
        let n = framing.dot(&e.dim_vector);
        let c = &(&e.omega * &RatFunc::neg_t_pow(n)) * &projective_space_vir(n);
        arg.set(e.dim_vector.clone(), c)?;
    }
    let rhs = exp_pleth(quiver, &arg)?;
    let residual = lhs.sub(&rhs)?.iter().map(|(d, c)| (d.clone(), c.clone())).collect();
    Ok(PbwReport { lhs, rhs, residual })
}

/// One row of a stabilization profile; `order = None` means exact agreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationRow {
    pub framing: FramingVector,
    pub order: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub d: DimVector,
    pub rows: Vec<StabilizationRow>,
}

impl StabilizationReport {
    /// Orders strictly increase, exact agreement counting as `+∞` (and
    /// staying there).
    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| match (w[0].order, w[1].order) {
            (Some(a), Some(b)) => b > a,
            (Some(_), None) => true,
            (None, None) => true,
            (None, Some(_)) => false,
        })
    }
}

/// Lowest `t`-exponent where `(−t)^{f·d} χ(M_{f,d})_vir · χ(CP^∞)_vir · (t − t^{-1})`
/// departs from `a^{ss}_d`, for each framing in turn.
pub fn stabilization_profile(
    quiver: &Quiver,
    stability: &Stability,
    mu: &BigRational,
    d: &DimVector,
    framings: &[FramingVector],
) -> Result<StabilizationReport> {
    quiver.check_len(d)?;
    check_in_lambda(stability, mu, d)?;
    for w in framings.windows(2) {
        if !w[0].fits_in(&w[1]) {
            return Err(Error::FramingOrder(w[0].clone(), w[1].clone()));
        }
    }
    let target = vir_series(quiver, stability, d)?.coeff(d);
    let normalizer = &RatFunc::chi_cpinf_vir() * &t_minus_t_inv();
    let mut rows = Vec::new();
    for f in framings {
        let order = if d.is_zero() {
            None
        } else {
            let c = framed_vir(quiver, f, stability, mu, d)?;
            let approx = &(&RatFunc::neg_t_pow(f.dot(d)) * &c.chi_vir) * &normalizer;
            (&approx - &target).valuation()
        };
        rows.push(StabilizationRow {
            framing: f.clone(),
            order,
        });
    }
    Ok(StabilizationReport { d: d.clone(), rows })
}

/// The slope `μ` of `d` under `ζ`, or `0` for the zero vector.
pub fn slope_or_zero(stability: &Stability, d: &DimVector) -> Result<BigRational> {
    if d.is_zero() {
        return Ok(BigRational::from_integer(0.into()));
    }
    stability.slope(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn zero() -> BigRational {
        BigRational::from_integer(0.into())
    }

    #[test]
    fn jordan_hilbert_schemes() {
        let j = Quiver::jordan();
        let z = Stability::trivial(1);
        for d in 0..=4u32 {
            let c = framed_vir(&j, &dv(&[1]), &z, &zero(), &dv(&[d])).unwrap();
            assert_eq!(c.chi_vir, RatFunc::neg_t_pow(-(d as i64)), "d = {d}");
            assert_eq!(c.dim, d as i64);
        }
    }

    #[test]
    fn a2_empty_framed_space() {
        let a2 = Quiver::a2();
        let z = Stability::trivial(2);
        let c = framed_vir(&a2, &dv(&[1, 0]), &z, &zero(), &dv(&[0, 1])).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.dim, -1);
    }

    #[test]
    fn pbw_jordan_and_zero_framing() {
        let j = Quiver::jordan();
        let z = Stability::trivial(1);
        let rep = framed_pbw_check(&j, &dv(&[1]), &z, &zero(), &dv(&[5])).unwrap();
        assert!(rep.passed());
        for d in 0..=5 {
            assert!(rep.lhs.coeff(&dv(&[d])).is_one());
        }
        let rep = framed_pbw_check(&j, &dv(&[0]), &z, &zero(), &dv(&[4])).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.lhs, GradedSeries::unit(dv(&[4]), SeriesTag::Virtual));
    }

    #[test]
    fn projective_spaces() {
        assert!(projective_space_vir(0).is_zero());
        assert!(projective_space_vir(1).is_one());
        let p1 = &RatFunc::neg_t_pow(-1) * &(&RatFunc::one() + &RatFunc::q());
        assert_eq!(projective_space_vir(2), p1);
    }

    #[test]
    fn jordan_stabilization() {
        let j = Quiver::jordan();
        let z = Stability::trivial(1);
        let fs: Vec<DimVector> = (1..=5).map(|f| dv(&[f])).collect();
        let rep = stabilization_profile(&j, &z, &zero(), &dv(&[1]), &fs).unwrap();
        let orders: Vec<_> = rep.rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, (1..=5).map(|f| Some(2 * f)).collect::<Vec<_>>());
        assert!(rep.strictly_increasing());
        let rep = stabilization_profile(&j, &z, &zero(), &dv(&[0]), &fs).unwrap();
        assert!(rep.rows.iter().all(|r| r.order.is_none()));
        assert!(rep.strictly_increasing());
        let bad = [dv(&[2]), dv(&[1])];
        assert!(matches!(
            stabilization_profile(&j, &z, &zero(), &dv(&[1]), &bad),
            Err(Error::FramingOrder(..))
        ));
    }
}
