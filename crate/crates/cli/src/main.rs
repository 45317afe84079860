use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fibertwist_core::fiber::{self, CaseSpec, FiberGraph, FiberLocation};
use fibertwist_core::singloc::{self, GeometricLocus, QuotientSingularity};
use fibertwist_core::tables::{self, RowReport};
use fibertwist_core::toric::{self, JuniorLocation};
use fibertwist_core::twist::{self, TwistInput};
use fibertwist_core::wps::{self, WeightedForm};
use fibertwist_core::{Error, SCHEMA};

#[derive(Parser)]
#[command(
    name = "fibertwist",
    version,
    about = "Twist-map fibrations of weighted hypersurfaces"
)]
struct Cli {
    /// Print a versioned JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a Fermat form to well-formed weights, e.g. `reduce 2,3,6 12`.
    Reduce { weights: List<u64>, degree: u64 },
    /// Image of the twist map, e.g. `twist 3,1,2 1,1,2,2 6`.
    Twist {
        w: List<u64>,
        v: List<u64>,
        ell: u64,
    },
    /// Singular strata of the ambient space, and their traces on the
    /// Fermat hypersurface when a degree is given.
    Strata {
        weights: List<u64>,
        degree: Option<u64>,
    },
    /// Junior simplex of 1/d(a,b,c) and a unimodular triangulation.
    Resolve {
        d: u64,
        a: u64,
        b: u64,
        c: u64,
        /// Valuation of the base coordinate on the three axes; vertices of
        /// valuation zero are counted as sections and circled in the SVG.
        #[arg(long, allow_hyphen_values = true)]
        valuation: Option<List<i64>>,
        /// Write the triangulation as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Singular fibers of a fibered Fermat hypersurface.
    Census {
        weights: Option<List<u64>>,
        degree: Option<u64>,
        /// Read the case from a JSON file instead.
        #[arg(long)]
        case: Option<PathBuf>,
    },
    /// Assemble a star fiber by name (e.g. `IV1*`) or from a case file.
    Fiber {
        name: Option<String>,
        #[arg(long)]
        case: Option<PathBuf>,
        #[arg(long, value_enum)]
        location: Option<Location>,
        /// Print the fiber graph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Recompute Table 1, 2 or 3 and compare with the stored values.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Location {
    Infinity,
    Zero,
}

impl From<Location> for FiberLocation {
    fn from(l: Location) -> Self {
        match l {
            Location::Infinity => FiberLocation::Infinity,
            Location::Zero => FiberLocation::Zero,
        }
    }
}

/// A comma-separated list such as `2,3,6`.
#[derive(Debug, Clone)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<T>().map_err(|e| format!("{t:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(List)
    }
}

/// What a command produced: text, a JSON payload, and whether every
/// comparison against stored values agreed.
struct Outcome {
    text: String,
    json: serde_json::Value,
    matches: bool,
}

impl Outcome {
    fn ok(text: String, json: impl Serialize) -> Result<Self, Error> {
        Ok(Self {
            text,
            json: to_value(json)?,
            matches: true,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<serde_json::Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

#[derive(Serialize)]
struct Document<'a> {
    schema: &'a str,
    command: &'a str,
    ok: bool,
    result: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run(cli.command) {
        Ok(out) => {
            let rendered = if cli.json {
                let doc = Document {
                    schema: SCHEMA,
                    command: name,
                    ok: out.matches,
                    result: out.json,
                };
                serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
            if out.matches {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Reduce { .. } => "reduce",
        Command::Twist { .. } => "twist",
        Command::Strata { .. } => "strata",
        Command::Resolve { .. } => "resolve",
        Command::Census { .. } => "census",
        Command::Fiber { .. } => "fiber",
        Command::Table { .. } => "table",
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Reduce { weights, degree } => cmd_reduce(weights.0, degree),
        Command::Twist { w, v, ell } => cmd_twist(TwistInput::new(w.0, v.0, ell)),
        Command::Strata { weights, degree } => cmd_strata(weights.0, degree),
        Command::Resolve {
            d,
            a,
            b,
            c,
            valuation,
            svg,
        } => cmd_resolve(d, [a, b, c], valuation.map(|v| v.0), svg),
        Command::Census {
            weights,
            degree,
            case,
        } => cmd_census(weights.map(|w| w.0), degree, case),
        Command::Fiber {
            name,
            case,
            location,
            dot,
        } => cmd_fiber(name, case, location.map(Into::into), dot),
        Command::Table { n } => cmd_table(n),
    }
}

fn cmd_reduce(weights: Vec<u64>, degree: u64) -> Result<Outcome, Error> {
    let reduction = wps::reduce_form(&WeightedForm::new(weights, degree)?)?;
    Outcome::ok(format!("{}\n", reduction.chain_notation()), &reduction)
}

fn cmd_twist(input: TwistInput) -> Result<Outcome, Error> {
    let image = twist::twist_image(&input)?;
    let exponents: Vec<String> = twist::twist_exponent_table(&input)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let text = format!(
        "image {}\nCalabi-Yau: {}\nbase pair: ({}, {})\ngeneric fiber: {}\nexponents: {}\n",
        WeightedForm::new(image.image_weights.clone(), image.degree)?,
        image.is_calabi_yau,
        image.base_pair.0,
        image.base_pair.1,
        image.generic_fiber.chain_notation(),
        exponents.join(" "),
    );
    #[derive(Serialize)]
    struct Json<'a> {
        image: &'a twist::TwistImage,
        exponents: Vec<String>,
    }
    Outcome::ok(
        text,
        Json {
            image: &image,
            exponents,
        },
    )
}

#[derive(Serialize)]
struct StratumReport {
    label: String,
    stratum: singloc::Stratum,
    #[serde(skip_serializing_if = "Option::is_none")]
    locus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point_type: Option<String>,
}

fn cmd_strata(weights: Vec<u64>, degree: Option<u64>) -> Result<Outcome, Error> {
    let form = match degree {
        Some(d) => Some(WeightedForm::fermat(weights.clone(), d)?),
        None => {
            WeightedForm::new(weights.clone(), 1)?;
            None
        }
    };
    let mut reports = Vec::new();
    let mut text = String::new();
    for s in singloc::strata(&weights) {
        let mut report = StratumReport {
            label: s.label(),
            stratum: s.clone(),
            locus: None,
            point_type: None,
        };
        if let Some(form) = &form {
            match singloc::stratum_intersection(form, &s) {
                Ok(locus) => {
                    if let GeometricLocus::Points { .. } = locus {
                        report.point_type =
                            Some(singloc::point_singularity_type(form, &s)?.to_string());
                    }
                    report.locus = Some(locus.to_string());
                }
                Err(Error::EmptyIntersection(_)) => report.locus = Some("empty".into()),
                Err(e) => return Err(e),
            }
        }
        text.push_str(&format!("{} dim {}", report.label, s.dim));
        if let Some(l) = &report.locus {
            text.push_str(&format!(": {l}"));
        }
        if let Some(t) = &report.point_type {
            text.push_str(&format!(", type {t}"));
        }
        text.push('\n');
        reports.push(report);
    }
    Outcome::ok(text, reports)
}

fn cmd_resolve(
    d: u64,
    weights: [u64; 3],
    valuation: Option<Vec<i64>>,
    svg: Option<PathBuf>,
) -> Result<Outcome, Error> {
    let q = QuotientSingularity::new(d, &weights)?;
    let counts = toric::lemma_counts(&q)?;
    let tri = toric::triangulate(&q)?;
    tri.validate()?;
    let sections: Vec<usize> = match &valuation {
        Some(v) if v.len() != 3 => {
            return Err(Error::InvalidInput(format!(
                "valuation needs three entries, got {}",
                v.len()
            )))
        }
        Some(v) => tri
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| !matches!(p.location, JuniorLocation::Corner(_)))
            .filter(|(_, p)| (0..3).map(|j| v[j] * p.scaled[j] as i64).sum::<i64>() == 0)
            .map(|(i, _)| i)
            .collect(),
        None => Vec::new(),
    };
    if let Some(path) = &svg {
        fs::write(path, tri.to_svg(&sections))
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    }
    let split = tri.boundary_split();
    let mut text = format!(
        "{q}\nv = {}, e = {}, s = {}\nboundary points per edge: {} {} {}\ninterior points: {}\n",
        counts.v,
        counts.e,
        counts.s,
        split[0],
        split[1],
        split[2],
        tri.interior_count()
    );
    if valuation.is_some() {
        text.push_str(&format!("section vertices: {}\n", sections.len()));
    }
    #[derive(Serialize)]
    struct Json<'a> {
        counts: toric::LemmaCounts,
        boundary_split: [u64; 3],
        interior: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        section_vertices: Option<&'a [usize]>,
        triangulation: &'a toric::JuniorTriangulation,
    }
    Outcome::ok(
        text,
        Json {
            counts,
            boundary_split: split,
            interior: tri.interior_count(),
            section_vertices: valuation.as_ref().map(|_| sections.as_slice()),
            triangulation: &tri,
        },
    )
}

fn read_case(path: &PathBuf) -> Result<CaseSpec, Error> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn cmd_census(
    weights: Option<Vec<u64>>,
    degree: Option<u64>,
    case: Option<PathBuf>,
) -> Result<Outcome, Error> {
    let form = match (weights, degree, case) {
        (Some(w), Some(d), None) => WeightedForm::fermat(w, d)?,
        (None, None, Some(path)) => read_case(&path)?.ambient_form()?,
        _ => {
            return Err(Error::InvalidInput(
                "give either WEIGHTS DEGREE or --case FILE".into(),
            ))
        }
    };
    let census = fiber::census(&form)?;
    let mut text = format!(
        "{form}\ngeneric: {}× {}\n",
        census.generic.count, census.generic.fiber_type.name
    );
    for s in &census.sections {
        text.push_str(&format!(
            "{}: {} ≅ {}{}\n",
            s.location,
            s.form,
            s.reduced,
            if s.is_star { ", star fiber" } else { "" }
        ));
    }
    text.push_str(&format!("singular fibers: {}\n", census.total));
    Outcome::ok(text, &census)
}

/// Built-in cases: the quoted figure inventories, then the single-star rows
/// of Table 3 by star name.
fn named_case(name: &str) -> Result<(CaseSpec, Option<tables::FigureFixture>), Error> {
    if let Some(f) = tables::figure_fixtures()
        .into_iter()
        .find(|f| f.name == name)
    {
        return Ok((tables::figure_case(&f)?, Some(f)));
    }
    let row = tables::table3_rows()
        .into_iter()
        .find(|r| r.stars == [name])
        .ok_or_else(|| Error::InvalidInput(format!("no built-in case named {name:?}")))?;
    let mut case = CaseSpec::from_twist(
        name,
        TwistInput::new(row.w.to_vec(), row.v.to_vec(), row.ell),
    );
    case.euler_total = Some(row.euler);
    Ok((case, None))
}

fn cmd_fiber(
    name: Option<String>,
    case: Option<PathBuf>,
    location: Option<FiberLocation>,
    dot: bool,
) -> Result<Outcome, Error> {
    let (case, figure) = match (name, case) {
        (Some(n), None) => named_case(&n)?,
        (None, Some(path)) => (read_case(&path)?, None),
        _ => {
            return Err(Error::InvalidInput(
                "give either NAME or --case FILE".into(),
            ))
        }
    };
    let graphs: Vec<FiberGraph> = match location {
        Some(l) => vec![fiber::assemble_star_fiber(&case, l)?],
        None => fiber::check_case_budget(&case)?,
    };
    let mut text = String::new();
    for g in &graphs {
        if dot {
            text.push_str(&g.to_dot());
            continue;
        }
        text.push_str(&format!(
            "{} at {}: {} components, {} sections, e = {}",
            g.name,
            g.location,
            g.component_count(),
            g.sections.len(),
            g.euler
        ));
        if let Some(k) = g.kodaira_symbol() {
            text.push_str(&format!(", Kodaira {k}"));
        }
        text.push('\n');
        for c in &g.components {
            text.push_str(&format!("  {} e = {}\n", c.label, c.euler));
        }
    }
    let mut report: Option<RowReport> = None;
    if let Some(f) = &figure {
        if let Some(g) = graphs.iter().find(|g| g.location == f.location) {
            let mut checks = vec![tables::Check::new(
                "components",
                f.components,
                g.component_count(),
            )];
            if let Some(s) = f.sections {
                checks.push(tables::Check::new("sections", s, g.sections.len()));
            }
            if let Some(e) = f.euler {
                checks.push(tables::Check::new("euler", e, g.euler));
            }
            let known_discrepancy = (f.name == "IX1**")
                .then(|| {
                    tables::ix1_double_star_type()
                        .ok()
                        .flatten()
                        .map(|d| d.detail)
                })
                .flatten();
            report = Some(RowReport {
                label: f.name.to_string(),
                checks,
                known_discrepancy,
            });
        }
    }
    let matches = report.as_ref().is_none_or(RowReport::passed);
    if let Some(r) = &report {
        if !dot {
            text.push_str(&render_row(r));
        }
    }
    #[derive(Serialize)]
    struct Json<'a> {
        graphs: &'a [FiberGraph],
        #[serde(skip_serializing_if = "Option::is_none")]
        figure: Option<&'a RowReport>,
    }
    Ok(Outcome {
        json: to_value(Json {
            graphs: &graphs,
            figure: report.as_ref(),
        })?,
        text,
        matches,
    })
}

fn render_row(r: &RowReport) -> String {
    let status = match (r.checks.iter().all(|c| c.ok), &r.known_discrepancy) {
        (true, _) => "ok",
        (false, Some(_)) => "known-discrepancy",
        (false, None) => "MISMATCH",
    };
    let mut s = format!("{}: {status}\n", r.label);
    for c in &r.checks {
        let mark = if c.ok { " " } else { "!" };
        s.push_str(&format!(
            "  {mark} {}: expected {}, computed {}\n",
            c.field, c.expected, c.computed
        ));
    }
    if let Some(d) = &r.known_discrepancy {
        s.push_str(&format!("    known-discrepancy: {d}\n"));
    }
    s
}

fn cmd_table(n: u8) -> Result<Outcome, Error> {
    let report = tables::table_report(n)?;
    let mut text = format!("Table {n}\n");
    for row in &report.rows {
        text.push_str(&render_row(row));
    }
    if n == 3 {
        text.push_str("star Euler numbers:\n");
        for s in tables::star_euler_values()? {
            let from = match s.source {
                tables::StarEulerSource::Stated => "stated".to_string(),
                tables::StarEulerSource::Budget { row } => format!("solved from row {row}"),
            };
            text.push_str(&format!("  {} e = {} ({from})\n", s.name, s.euler));
        }
    }
    Ok(Outcome {
        matches: report.passed(),
        json: to_value(&report)?,
        text,
    })
}
