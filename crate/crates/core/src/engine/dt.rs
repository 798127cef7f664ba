//! DT extraction and the wall-crossing check.

use num_rational::BigRational;

use crate::error::Result;
use crate::quiver::{DimVector, Quiver};
use crate::ratfunc::{LaurentPoly, RatFunc};
use crate::stability::{Slope, Stability};
use crate::torus::{log_pleth, ordered_slope_product, GradedSeries};

use super::series::{closed_form_stack_series, vir_series};

/// `t − t^{-1}`.
pub fn t_minus_t_inv() -> RatFunc {
    &RatFunc::t() - &RatFunc::t_pow(-1)
}

/// `Z^{ss}_μ`: the coefficients of slope `μ` together with the constant term.
pub fn slope_part(stability: &Stability, mu: &BigRational, series: &GradedSeries) -> Result<GradedSeries> {
    let mut out = GradedSeries::zero(series.bound().clone(), series.tag());
    for (d, c) in series.iter() {
        if d.is_zero() || stability.slope(d)? == *mu {
            out.set(d.clone(), c.clone())?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtEntry {
    pub dim_vector: DimVector,
    pub omega: RatFunc,
    /// The integer Laurent polynomial equal to `omega`, when there is one.
    pub polynomial: Option<LaurentPoly>,
    pub palindromic: bool,
}

impl DtEntry {
    pub fn new(dim_vector: DimVector, omega: RatFunc) -> DtEntry {
        DtEntry {
            polynomial: omega.as_laurent_polynomial(),
            palindromic: omega.is_palindromic(),
            dim_vector,
            omega,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtPackage {
    pub stability: Stability,
    pub mu: BigRational,
    pub bound: DimVector,
    /// Every `d ∈ Λ_μ ∩ box` in graded order, zeros included.
    pub entries: Vec<DtEntry>,
}

impl DtPackage {
    pub fn omega(&self, d: &DimVector) -> RatFunc {
        self.entries
            .iter()
            .find(|e| e.dim_vector == *d)
            .map(|e| e.omega.clone())
            .unwrap_or_else(RatFunc::zero)
    }

    /// Dimension vectors with nonzero invariant.
    pub fn support(&self) -> Vec<DimVector> {
        self.entries
            .iter()
            .filter(|e| !e.omega.is_zero())
            .map(|e| e.dim_vector.clone())
            .collect()
    }
}

/// `Ω_μ = (t − t^{-1}) · LOG(Z^{ss}_μ)` for a `μ`-generic stability.
pub fn dt_invariants(quiver: &Quiver, stability: &Stability, mu: &BigRational, bound: &DimVector) -> Result<DtPackage> {
    let ss = vir_series(quiver, stability, bound)?;
    dt_from_series(quiver, stability, mu, &ss)
}

/// DT extraction from an already computed virtual semistable series.
pub fn dt_from_series(
    quiver: &Quiver,
    stability: &Stability,
    mu: &BigRational,
    semistable: &GradedSeries,
) -> Result<DtPackage> {
    let bound = semistable.bound();
    let slope = Slope::Rational(mu.clone());
    stability.require_generic(quiver, &slope, bound)?;
    let log = log_pleth(quiver, &slope_part(stability, mu, semistable)?)?;
    let factor = t_minus_t_inv();
    let entries = stability
        .lambda_mu(&slope, bound)?
        .into_iter()
        .map(|d| {
            let omega = &log.coeff(&d) * &factor;
            DtEntry::new(d, omega)
        })
        .collect();
    Ok(DtPackage {
        stability: stability.clone(),
        mu: mu.clone(),
        bound: bound.clone(),
        entries,
    })
}

/// DT packages for every slope realized on the box, slopes descending.
pub fn dt_all_slopes(quiver: &Quiver, stability: &Stability, bound: &DimVector) -> Result<Vec<DtPackage>> {
    let ss = vir_series(quiver, stability, bound)?;
    stability
        .slopes_on_box(bound)?
        .iter()
        .map(|mu| dt_from_series(quiver, stability, mu, &ss))
        .collect()
}

/// The per-slope factors of one stability and the residual of their ordered
/// product against the total stack series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigRational, GradedSeries)>,
    pub residual: Vec<(DimVector, RatFunc)>,
}

impl Factorization {
    /// Nonzero, non-constant support of each factor.
    pub fn factor_supports(&self) -> Vec<(BigRational, Vec<DimVector>)> {
        self.factors
            .iter()
            .map(|(mu, f)| {
                (
                    mu.clone(),
                    f.iter().map(|(d, _)| d.clone()).filter(|d| !d.is_zero()).collect(),
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallcrossReport {
    pub first: Factorization,
    pub second: Factorization,
}

impl WallcrossReport {
    pub fn passed(&self) -> bool {
        self.first.residual.is_empty() && self.second.residual.is_empty()
    }
}

pub fn factorize(quiver: &Quiver, stability: &Stability, bound: &DimVector) -> Result<Factorization> {
    let ss = vir_series(quiver, stability, bound)?;
    let mut factors = Vec::new();
    for mu in stability.slopes_on_box(bound)? {
        let part = slope_part(stability, &mu, &ss)?;
        if part.iter().any(|(d, _)| !d.is_zero()) {
            factors.push((mu, part));
        }
    }
    let parts: Vec<(Slope, GradedSeries)> = factors
        .iter()
        .map(|(mu, f)| (Slope::Rational(mu.clone()), f.clone()))
        .collect();
    let product = if parts.is_empty() {
        GradedSeries::unit(bound.clone(), crate::torus::SeriesTag::Virtual)
    } else {
        ordered_slope_product(quiver, stability, &parts)?
    };
    let total = closed_form_stack_series(quiver, bound)?;
    let residual = product
        .sub(&total)?
        .iter()
        .map(|(d, c)| (d.clone(), c.clone()))
        .collect();
    Ok(Factorization { factors, residual })
}

/// Both ordered factorizations must reproduce the total stack series.
pub fn wallcross_check(
    quiver: &Quiver,
    first: &Stability,
    second: &Stability,
    bound: &DimVector,
) -> Result<WallcrossReport> {
    Ok(WallcrossReport {
        first: factorize(quiver, first, bound)?,
        second: factorize(quiver, second, bound)?,
    })
}
