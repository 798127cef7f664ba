//! Stack counts, the Harder–Narasimhan recursion and the virtual bridge.

use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::exec::Exec;
use crate::quiver::{DimVector, Quiver};
use crate::ratfunc::RatFunc;
use crate::stability::{hn_types, Slope, SlopeMap, Stability};
use crate::torus::{GradedSeries, SeriesTag};

fn q_pow(k: i64) -> RatFunc {
    RatFunc::t_pow(2 * k)
}

/// `|G_d(F_q)| = Π_i Π_{j<d_i} (q^{d_i} − q^j)` as a polynomial in `t`.
pub fn group_order(d: &DimVector) -> RatFunc {
    let mut acc = RatFunc::one();
    for &n in d.entries() {
        let qn = q_pow(n as i64);
        for j in 0..n {
            acc = &acc * &(&qn - &q_pow(j as i64));
        }
    }
    acc
}

/// `c_d = q^{dim X_d} / |G_d(q)|`, the stacky point count of `[X_d / G_d]`.
pub fn stack_count(quiver: &Quiver, d: &DimVector) -> RatFunc {
    q_pow(quiver.rep_space_dim(d) as i64)
        .checked_div(&group_order(d))
        .expect("group order is a nonzero polynomial")
}

pub fn count_stack_series(quiver: &Quiver, bound: &DimVector) -> Result<GradedSeries> {
    quiver.check_len(bound)?;
    let mut s = GradedSeries::zero(bound.clone(), SeriesTag::Count);
    for d in bound.box_iter() {
        let c = stack_count(quiver, &d);
        s.set(d, c)?;
    }
    Ok(s)
}

/// Semistable stacky counts `c^{ss}_d` for every `d <= box`.
pub fn count_semistable_series(quiver: &Quiver, stability: &Stability, bound: &DimVector) -> Result<GradedSeries> {
    semistable_counts_with(quiver, stability, bound, Exec::default())
}

/// The HN recursion for an arbitrary slope function.
///
/// Splitting off the part of largest slope gives
/// `c_d = Σ_{0<e<=d} c^{ss}_e q^{−(d−e,e)} T(d−e, slope e)`, where `T(x, b)`
/// sums HN types of `x` whose slopes all lie below `b`; `T` obeys the same
/// recursion. Levels `|d| = n` are independent given all lower levels.
pub fn semistable_counts_with(
    quiver: &Quiver,
    slopes: &dyn SlopeMap,
    bound: &DimVector,
    exec: Exec,
) -> Result<GradedSeries> {
    quiver.check_len(bound)?;
    let mut slope_of: HashMap<DimVector, Slope> = HashMap::new();
    let mut levels: BTreeMap<u64, Vec<DimVector>> = BTreeMap::new();
    for d in bound.graded_box() {
        if !d.is_zero() {
            slope_of.insert(d.clone(), slopes.slope_of(&d)?);
        }
        levels.entry(d.total()).or_default().push(d);
    }

    let zero = DimVector::zero(bound.len());
    let mut css: HashMap<DimVector, RatFunc> = HashMap::new();
    css.insert(zero.clone(), RatFunc::one());
    let mut tail: HashMap<(DimVector, Slope), RatFunc> = HashMap::new();

    // Σ_{0<e1<=e (or <e), slope(e1) passes} c^{ss}_{e1} q^{−(e−e1,e1)} T(e−e1, slope e1)
    let first_part_sum = |e: &DimVector,
                          bound_slope: Option<&Slope>,
                          css: &HashMap<DimVector, RatFunc>,
                          tail: &HashMap<(DimVector, Slope), RatFunc>|
     -> Result<RatFunc> {
        let mut acc = RatFunc::zero();
        for e1 in e.box_iter() {
            if e1.is_zero() || (bound_slope.is_none() && e1 == *e) {
                continue;
            }
            let se1 = &slope_of[&e1];
            if let Some(b) = bound_slope {
                if se1.try_cmp(b)? != std::cmp::Ordering::Less {
                    continue;
                }
            }
            let c1 = &css[&e1];
            if c1.is_zero() {
                continue;
            }
            let rest = e.checked_sub(&e1).unwrap();
            let t = if rest.is_zero() {
                RatFunc::one()
            } else {
                tail[&(rest.clone(), se1.clone())].clone()
            };
            if t.is_zero() {
                continue;
            }
            acc = &acc + &(&(c1 * &t) * &q_pow(-quiver.euler(&rest, &e1)));
        }
        Ok(acc)
    };

    let top = bound.total();
    for n in 1..=top {
        if n >= 2 {
            let mut items: Vec<(DimVector, Slope)> = Vec::new();
            for e in &levels[&(n - 1)] {
                let room = bound.checked_sub(e).unwrap();
                let mut bs: Vec<Slope> = Vec::new();
                for x in room.box_iter().filter(|x| !x.is_zero()) {
                    let s = &slope_of[&x];
                    if !bs.contains(s) {
                        bs.push(s.clone());
                    }
                }
                items.extend(bs.into_iter().map(|b| (e.clone(), b)));
            }
            let values = exec.map(&items, |(e, b)| first_part_sum(e, Some(b), &css, &tail));
            for (key, v) in items.into_iter().zip(values) {
                tail.insert(key, v?);
            }
        }
        let level = &levels[&n];
        let values = exec.map(level, |d| {
            let lower = first_part_sum(d, None, &css, &tail)?;
            Ok::<_, crate::error::Error>(&stack_count(quiver, d) - &lower)
        });
        for (d, v) in level.iter().zip(values) {
            css.insert(d.clone(), v?);
        }
    }

    let mut s = GradedSeries::zero(bound.clone(), SeriesTag::Count);
    for (d, c) in css {
        s.set(d, c)?;
    }
    Ok(s)
}

/// `Σ_{HN types} q^{−(d̄,d̄)} Π c^{ss} − c_d` for every `d <= box`, using the
/// explicit HN-type enumeration. Returns only the nonzero residuals.
pub fn hn_reassembly_residual(
    quiver: &Quiver,
    slopes: &dyn SlopeMap,
    semistable: &GradedSeries,
) -> Result<Vec<(DimVector, RatFunc)>> {
    let mut out = Vec::new();
    for d in semistable.bound().graded_box() {
        if d.is_zero() {
            continue;
        }
        let mut total = RatFunc::zero();
        for h in hn_types(quiver, slopes, &d)? {
            let prod = h
                .parts
                .iter()
                .fold(q_pow(-h.twist()), |acc, p| &acc * &semistable.coeff(p));
            total = &total + &prod;
        }
        let r = &total - &stack_count(quiver, &d);
        if !r.is_zero() {
            out.push((d, r));
        }
    }
    Ok(out)
}

/// `a_d = (−t^{-1})^{(d,d)} · c_d|_{t ↦ t^{-1}}`.
pub fn bridge(quiver: &Quiver, counts: &GradedSeries) -> Result<GradedSeries> {
    if counts.tag() != SeriesTag::Count {
        return Err(crate::error::Error::TagMismatch("the bridge takes count series".into()));
    }
    quiver.check_len(counts.bound())?;
    let mut s = GradedSeries::zero(counts.bound().clone(), SeriesTag::Virtual);
    for (d, c) in counts.iter() {
        let a = &RatFunc::neg_t_pow(-quiver.euler(d, d)) * &c.invert_t();
        s.set(d.clone(), a)?;
    }
    Ok(s)
}

/// Virtual semistable series `a^{ss}`.
pub fn vir_series(quiver: &Quiver, stability: &Stability, bound: &DimVector) -> Result<GradedSeries> {
    bridge(quiver, &count_semistable_series(quiver, stability, bound)?)
}

/// `(−t)^{(d,d)} Π_i Π_{j=1}^{d_i} (1 − q^j)^{-1}`, the virtual stack series in closed form.
pub fn closed_form_stack_series(quiver: &Quiver, bound: &DimVector) -> Result<GradedSeries> {
    quiver.check_len(bound)?;
    let mut s = GradedSeries::zero(bound.clone(), SeriesTag::Virtual);
    for d in bound.box_iter() {
        let mut den = RatFunc::one();
        for &n in d.entries() {
            for j in 1..=n {
                den = &den * &(&RatFunc::one() - &q_pow(j as i64));
            }
        }
        let a = RatFunc::neg_t_pow(quiver.euler(&d, &d)).checked_div(&den)?;
        s.set(d, a)?;
    }
    Ok(s)
}
