//! JSON and CSV renderings of reports. Every number is an exact string.

use serde_json::{json, Map, Value};

use crate::engine::{DtEntry, DtPackage, Factorization, FramedClass, PbwReport, StabilizationReport, WallcrossReport};
use crate::error::{Error, Result};
use crate::fq_oracle::OracleReport;
use crate::quiver::DimVector;
use crate::ratfunc::{LaurentPoly, RatFunc};
use crate::torus::GradedSeries;

fn ratfunc_value(r: &RatFunc) -> Value {
    serde_json::to_value(r).expect("rational functions serialize")
}

/// Laurent-polynomial map when possible, full rational function otherwise.
pub fn omega_value(entry: &DtEntry) -> Value {
    match &entry.polynomial {
        Some(p) => serde_json::to_value(p).expect("polynomials serialize"),
        None => ratfunc_value(&entry.omega),
    }
}

pub fn dt_entry_to_json(entry: &DtEntry) -> Value {
    json!({
        "dim_vector": entry.dim_vector,
        "omega": omega_value(entry),
        "polynomial": entry.polynomial.is_some(),
        "palindromic": entry.palindromic,
    })
}

pub fn dt_entry_from_json(v: &Value) -> Result<DtEntry> {
    let d: DimVector = serde_json::from_value(v["dim_vector"].clone())?;
    let omega_v = &v["omega"];
    let omega = if omega_v.get("num").is_some() {
        serde_json::from_value::<RatFunc>(omega_v.clone())?
    } else {
        serde_json::from_value::<LaurentPoly>(omega_v.clone())?.to_ratfunc()
    };
    let entry = DtEntry::new(d, omega);
    if v["polynomial"].as_bool() != Some(entry.polynomial.is_some())
        || v["palindromic"].as_bool() != Some(entry.palindromic)
    {
        return Err(Error::Parse("verdicts do not match the invariant".into()));
    }
    Ok(entry)
}

pub fn dt_package_to_json(p: &DtPackage) -> Value {
    json!({
        "stability": serde_json::to_value(p.stability.charges()).expect("charges serialize"),
        "mu": p.mu.to_string(),
        "box": p.bound,
        "entries": p.entries.iter().map(dt_entry_to_json).collect::<Vec<_>>(),
    })
}

pub fn residuals_to_json(residual: &[(DimVector, RatFunc)]) -> Value {
    Value::Array(
        residual
            .iter()
            .map(|(d, r)| json!({"dim_vector": d, "residual": ratfunc_value(r)}))
            .collect(),
    )
}

fn factorization_to_json(f: &Factorization) -> Value {
    json!({
        "factors": f.factor_supports().iter().map(|(mu, s)| json!({"slope": mu.to_string(), "support": s})).collect::<Vec<_>>(),
        "residuals": residuals_to_json(&f.residual),
    })
}

pub fn wallcross_to_json(r: &WallcrossReport) -> Value {
    json!({
        "passed": r.passed(),
        "first": factorization_to_json(&r.first),
        "second": factorization_to_json(&r.second),
    })
}

pub fn pbw_to_json(r: &PbwReport) -> Value {
    json!({
        "passed": r.passed(),
        "lhs": r.lhs.to_json_value(),
        "residuals": residuals_to_json(&r.residual),
    })
}

pub fn stabilization_to_json(r: &StabilizationReport) -> Value {
    json!({
        "dim_vector": r.d,
        "strictly_increasing": r.strictly_increasing(),
        "rows": r.rows.iter().map(|row| json!({
            "framing": row.framing,
            "first_disagreement": row.order,
        })).collect::<Vec<_>>(),
    })
}

pub fn framed_to_json(classes: &[FramedClass]) -> Value {
    Value::Array(
        classes
            .iter()
            .map(|c| {
                json!({
                    "framing": c.framing,
                    "dim_vector": c.d,
                    "chi_vir": ratfunc_value(&c.chi_vir),
                    "dim": c.dim,
                    "empty": c.is_empty(),
                })
            })
            .collect(),
    )
}

pub fn oracle_to_json(r: &OracleReport) -> Value {
    json!({
        "passed": r.passed(),
        "rows": r.rows.iter().map(|row| {
            let mut m = Map::new();
            m.insert("dim_vector".into(), json!(row.d));
            m.insert("q".into(), json!(row.q));
            m.insert("semistable_points".into(), json!(row.semistable_points.to_string()));
            m.insert("group_order".into(), json!(row.group_order.to_string()));
            m.insert("stacky".into(), json!(row.stacky.to_string()));
            m.insert("predicted".into(), json!(row.predicted.to_string()));
            m.insert("matched".into(), json!(row.matched));
            Value::Object(m)
        }).collect::<Vec<_>>(),
    })
}

pub const CSV_HEADER: &str = "d;t_exponent;coefficient";

/// Ascending expansions up to `t^max_exp`, one row per nonzero term.
pub fn series_to_csv(series: &GradedSeries, max_exp: i64) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (d, c) in series.iter() {
        for (k, v) in c.expand_ascending(max_exp) {
            out.push_str(&format!("{};{};{}\n", d.key(), k, v));
        }
    }
    out
}
