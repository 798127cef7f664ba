//! `dtq`: batch front end for exact DT-invariant computations.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use dtq_core::engine::{
    bridge, count_stack_series, dt_all_slopes, dt_invariants, framed_classes, framed_pbw_check, slope_or_zero,
    stabilization_profile, vir_series, wallcross_check, DtPackage, FramedClass, PbwReport, WallcrossReport,
};
use dtq_core::exec::configure_threads;
use dtq_core::fq_oracle::{oracle_check, OracleReport};
use dtq_core::json::{
    dt_package_to_json, framed_to_json, oracle_to_json, pbw_to_json, series_to_csv, stabilization_to_json,
    wallcross_to_json, CSV_HEADER,
};
use dtq_core::ratfunc::parse_rational;
use dtq_core::{DimVector, GradedSeries, Quiver, RatFunc, Stability};

#[derive(Parser)]
#[command(name = "dtq", version, about = "Exact refined DT invariants of quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct Common {
    /// Quiver JSON file: {"vertices": [...], "arrows": [[source, target], ...]}.
    #[arg(long)]
    quiver: PathBuf,
    /// Stability as inline JSON or a file path; trivial if omitted.
    #[arg(long)]
    stability: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Display order of ascending expansions (presentation only).
    #[arg(short = 'N', default_value_t = 10)]
    order: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Stack series, or the semistable series with --semistable.
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box")]
        bound: String,
        #[arg(long)]
        semistable: bool,
    },
    /// DT invariants for one slope or all slopes on the box.
    Dt {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box")]
        bound: String,
        #[arg(long, default_value = "all")]
        slope: String,
    },
    /// Virtual classes of framed moduli spaces.
    Framed {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box")]
        bound: String,
        #[arg(long)]
        framing: String,
        #[arg(long, default_value = "all")]
        slope: String,
    },
    /// Exact identity checks.
    Check {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Both ordered factorizations reproduce the stack series.
    Wallcross {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box")]
        bound: String,
        #[arg(long)]
        stability2: String,
    },
    /// The framed PBW identity.
    FramedPbw {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box")]
        bound: String,
        #[arg(long)]
        framing: String,
        #[arg(long, default_value = "all")]
        slope: String,
    },
    /// First-disagreement orders along ascending framings.
    Stabilize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: String,
        /// Semicolon-separated framing vectors, e.g. "1,1;2,2;3,3".
        #[arg(long)]
        framings: String,
    },
    /// Brute-force point counts over F_q against the recursion.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box")]
        bound: String,
        /// Comma-separated field orders from {4, 9, 25}.
        #[arg(long)]
        q: String,
    },
}

struct Inputs {
    quiver: Quiver,
    stability: Stability,
    format: Format,
    order: i64,
}

fn load(common: &Common) -> Result<Inputs> {
    let text =
        std::fs::read_to_string(&common.quiver).with_context(|| format!("reading {}", common.quiver.display()))?;
    let quiver = Quiver::from_json(&text).context("parsing the quiver")?;
    let stability = match &common.stability {
        None => Stability::trivial(quiver.vertex_count()),
        Some(s) => parse_stability(s)?,
    };
    if stability.charges().len() != quiver.vertex_count() {
        bail!(
            "stability has {} charges but the quiver has {} vertices",
            stability.charges().len(),
            quiver.vertex_count()
        );
    }
    Ok(Inputs {
        quiver,
        stability,
        format: common.format,
        order: common.order,
    })
}

fn parse_stability(s: &str) -> Result<Stability> {
    let text = if s.trim_start().starts_with('[') {
        s.to_string()
    } else {
        std::fs::read_to_string(s).with_context(|| format!("reading {s}"))?
    };
    Stability::from_json(&text).context("parsing the stability")
}

fn parse_vector(q: &Quiver, s: &str, what: &str) -> Result<DimVector> {
    let d = DimVector::parse(s).with_context(|| format!("parsing {what} `{s}`"))?;
    q.check_len(&d).with_context(|| format!("{what} `{s}`"))?;
    Ok(d)
}

/// `None` stands for every slope realized on the box.
fn parse_slope(s: &str) -> Result<Option<BigRational>> {
    if s.trim() == "all" {
        return Ok(None);
    }
    Ok(Some(parse_rational(s).with_context(|| format!("parsing slope `{s}`"))?))
}

fn slopes_for(inputs: &Inputs, bound: &DimVector, filter: &Option<BigRational>) -> Result<Vec<BigRational>> {
    Ok(match filter {
        Some(mu) => vec![mu.clone()],
        None => inputs.stability.slopes_on_box(bound)?,
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn expansion(c: &RatFunc, order: i64) -> String {
    let terms = c.expand_ascending(order);
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(k, v)| format!("{v}*t^{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
        + " + ..."
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                let pad = w - c.chars().count();
                s.push_str(c);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        out.push_str(&line(row.clone()));
    }
    out
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn csv_unsupported(format: Format) -> Result<()> {
    if format == Format::Csv {
        bail!("csv output is available for series, dt and framed");
    }
    Ok(())
}

fn render_series(s: &GradedSeries, inputs: &Inputs) -> String {
    match inputs.format {
        Format::Json => pretty(&s.to_json_value()),
        Format::Csv => series_to_csv(s, inputs.order),
        Format::Table => {
            let rows: Vec<Vec<String>> = s
                .iter()
                .map(|(d, c)| vec![d.key(), c.to_string(), expansion(c, inputs.order)])
                .collect();
            let exp = format!("expansion to t^{} (display only)", inputs.order);
            format!(
                "# {:?} series on box {}\n{}",
                s.tag(),
                s.bound(),
                table(&["d", "coefficient", &exp], &rows)
            )
        }
    }
}

fn render_dt(packages: &[DtPackage], inputs: &Inputs, bound: &DimVector) -> String {
    match inputs.format {
        Format::Json => pretty(&json!({
            "box": bound,
            "packages": packages.iter().map(dt_package_to_json).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for e in packages.iter().flat_map(|p| &p.entries) {
                for (k, v) in e.omega.expand_ascending(inputs.order) {
                    let _ = writeln!(out, "{};{};{}", e.dim_vector.key(), k, v);
                }
            }
            out
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = packages
                .iter()
                .flat_map(|p| {
                    p.entries.iter().map(move |e| {
                        vec![
                            p.mu.to_string(),
                            e.dim_vector.key(),
                            e.omega.to_string(),
                            yes_no(e.polynomial.is_some()),
                            yes_no(e.palindromic),
                        ]
                    })
                })
                .collect();
            format!(
                "# DT invariants on box {bound}; palindromic is informational (t <-> t^-1 symmetry)\n{}",
                table(&["slope", "d", "omega", "polynomial", "palindromic"], &rows)
            )
        }
    }
}

fn render_framed(classes: &[FramedClass], inputs: &Inputs) -> String {
    match inputs.format {
        Format::Json => pretty(&framed_to_json(classes)),
        Format::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for c in classes {
                for (k, v) in c.chi_vir.expand_ascending(inputs.order) {
                    let _ = writeln!(out, "{};{};{}", c.d.key(), k, v);
                }
            }
            out
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = classes
                .iter()
                .map(|c| {
                    vec![
                        c.d.key(),
                        c.dim.to_string(),
                        c.chi_vir.to_string(),
                        yes_no(c.is_empty()),
                    ]
                })
                .collect();
            table(&["d", "dim", "chi_vir", "empty"], &rows)
        }
    }
}

fn render_residuals(res: &[(DimVector, RatFunc)]) -> String {
    if res.is_empty() {
        return "residuals: none\n".into();
    }
    let mut out = String::from("residuals:\n");
    for (d, r) in res {
        let _ = writeln!(out, "  {}: {}", d.key(), r);
    }
    out
}

fn render_wallcross(rep: &WallcrossReport, inputs: &Inputs) -> String {
    if inputs.format == Format::Json {
        return pretty(&wallcross_to_json(rep));
    }
    let mut out = String::new();
    for (name, f) in [("first", &rep.first), ("second", &rep.second)] {
        let _ = writeln!(out, "# {name} stability");
        for (mu, s) in f.factor_supports() {
            let keys: Vec<String> = s.iter().map(|d| d.key()).collect();
            let _ = writeln!(out, "slope {mu}: [{}]", keys.join("] ["));
        }
        out.push_str(&render_residuals(&f.residual));
    }
    let _ = writeln!(out, "wall-crossing: {}", if rep.passed() { "pass" } else { "FAIL" });
    out
}

fn render_pbw(reports: &[(BigRational, PbwReport)], inputs: &Inputs) -> String {
    if inputs.format == Format::Json {
        return pretty(&Value::Array(
            reports
                .iter()
                .map(|(mu, r)| {
                    let mut v = pbw_to_json(r);
                    v["slope"] = json!(mu.to_string());
                    v
                })
                .collect(),
        ));
    }
    let mut out = String::new();
    for (mu, r) in reports {
        let _ = writeln!(out, "# slope {mu}: {}", if r.passed() { "pass" } else { "FAIL" });
        out.push_str(&render_residuals(&r.residual));
    }
    out
}

fn render_oracle(rep: &OracleReport, inputs: &Inputs) -> String {
    if inputs.format == Format::Json {
        return pretty(&oracle_to_json(rep));
    }
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                r.d.key(),
                r.q.to_string(),
                r.semistable_points.to_string(),
                r.group_order.to_string(),
                r.stacky.to_string(),
                r.predicted.to_string(),
                yes_no(r.matched),
            ]
        })
        .collect();
    let header = ["d", "q", "semistable points", "|G_d|", "stacky", "predicted", "match"];
    format!(
        "{}{} of {} rows match\n",
        table(&header, &rows),
        rep.rows.iter().filter(|r| r.matched).count(),
        rep.rows.len()
    )
}

/// Prints the report and returns whether every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Series {
            common,
            bound,
            semistable,
        } => {
            let inputs = load(&common)?;
            let b = parse_vector(&inputs.quiver, &bound, "box")?;
            let s = if semistable {
                vir_series(&inputs.quiver, &inputs.stability, &b)?
            } else {
                bridge(&inputs.quiver, &count_stack_series(&inputs.quiver, &b)?)?
            };
            print!("{}", render_series(&s, &inputs));
            Ok(true)
        }
        Command::Dt { common, bound, slope } => {
            let inputs = load(&common)?;
            let b = parse_vector(&inputs.quiver, &bound, "box")?;
            let packages = match parse_slope(&slope)? {
                None => dt_all_slopes(&inputs.quiver, &inputs.stability, &b)?,
                Some(mu) => vec![dt_invariants(&inputs.quiver, &inputs.stability, &mu, &b)?],
            };
            print!("{}", render_dt(&packages, &inputs, &b));
            Ok(true)
        }
        Command::Framed {
            common,
            bound,
            framing,
            slope,
        } => {
            let inputs = load(&common)?;
            let b = parse_vector(&inputs.quiver, &bound, "box")?;
            let f = parse_vector(&inputs.quiver, &framing, "framing")?;
            let mut classes = Vec::new();
            for mu in slopes_for(&inputs, &b, &parse_slope(&slope)?)? {
                let mut cs = framed_classes(&inputs.quiver, &f, &inputs.stability, &mu, &b)?;
                if !classes.is_empty() {
                    cs.retain(|c| !c.d.is_zero());
                }
                classes.extend(cs);
            }
            print!("{}", render_framed(&classes, &inputs));
            Ok(true)
        }
        Command::Check { check } => run_check(check),
    }
}

fn run_check(check: Check) -> Result<bool> {
    match check {
        Check::Wallcross {
            common,
            bound,
            stability2,
        } => {
            let inputs = load(&common)?;
            csv_unsupported(inputs.format)?;
            let b = parse_vector(&inputs.quiver, &bound, "box")?;
            let second = parse_stability(&stability2)?;
            inputs.quiver.check_len(&DimVector::zero(second.charges().len()))?;
            let rep = wallcross_check(&inputs.quiver, &inputs.stability, &second, &b)?;
            print!("{}", render_wallcross(&rep, &inputs));
            Ok(rep.passed())
        }
        Check::FramedPbw {
            common,
            bound,
            framing,
            slope,
        } => {
            let inputs = load(&common)?;
            csv_unsupported(inputs.format)?;
            let b = parse_vector(&inputs.quiver, &bound, "box")?;
            let f = parse_vector(&inputs.quiver, &framing, "framing")?;
            let mut reports = Vec::new();
            for mu in slopes_for(&inputs, &b, &parse_slope(&slope)?)? {
                let r = framed_pbw_check(&inputs.quiver, &f, &inputs.stability, &mu, &b)?;
                reports.push((mu, r));
            }
            print!("{}", render_pbw(&reports, &inputs));
            Ok(reports.iter().all(|(_, r)| r.passed()))
        }
        Check::Stabilize { common, dim, framings } => {
            let inputs = load(&common)?;
            csv_unsupported(inputs.format)?;
            let d = parse_vector(&inputs.quiver, &dim, "dimension vector")?;
            let fs = framings
                .split(';')
                .map(|s| parse_vector(&inputs.quiver, s, "framing"))
                .collect::<Result<Vec<_>>>()?;
            let mu = slope_or_zero(&inputs.stability, &d)?;
            let rep = stabilization_profile(&inputs.quiver, &inputs.stability, &mu, &d, &fs)?;
            if inputs.format == Format::Json {
                print!("{}", pretty(&stabilization_to_json(&rep)));
            } else {
                let rows: Vec<Vec<String>> = rep
                    .rows
                    .iter()
                    .map(|r| {
                        let order = r.order.map_or("exact".to_string(), |o| o.to_string());
                        vec![r.framing.key(), order]
                    })
                    .collect();
                print!("{}", table(&["framing", "first disagreement"], &rows));
                println!(
                    "strictly increasing: {}",
                    if rep.strictly_increasing() { "yes" } else { "NO" }
                );
            }
            Ok(rep.strictly_increasing())
        }
        Check::Oracle { common, bound, q } => {
            let inputs = load(&common)?;
            csv_unsupported(inputs.format)?;
            let b = parse_vector(&inputs.quiver, &bound, "box")?;
            let qs = q
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|e| anyhow!("parsing q `{s}`: {e}")))
                .collect::<Result<Vec<_>>>()?;
            let rep = oracle_check(&inputs.quiver, &inputs.stability, &b, &qs)?;
            print!("{}", render_oracle(&rep, &inputs));
            Ok(rep.passed())
        }
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("DTQ_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => configure_threads(n),
            _ => {
                eprintln!("error: DTQ_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
