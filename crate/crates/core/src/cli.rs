//! Command-line front end. `run` parses arguments, dispatches to the library,
//! and returns the exit code: 0 on success, 1 on a domain error, 2 on a
//! usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::builders::{classical_artin, BuildError, dual_artin, load_germ, save_germ, CoxeterSpec, GermFileError};
use crate::geometry::{translation_lower_bound, Vertex};
use crate::germ::Germ;
use crate::homology::{self, checks, FinitePoset, HomologyGroup, ReducedHomology};
use crate::words::{GroupElement, NormCalculator, Positive, DEFAULT_NODE_BUDGET};

/// Environment variable overriding the norm node budget.
pub const BUDGET_VAR: &str = "GARSIDE_NODE_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "garside", version, about = "Garside germs: normal forms, homology and geometry")]
struct Cli {
    /// Emit structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Flavor {
    Classical,
    Dual,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the germ axioms.
    Validate { germ: PathBuf },
    /// Build a standard germ, e.g. `build dual A 3`.
    Build {
        flavor: Flavor,
        /// A or I2.
        family: String,
        /// Rank for A, m for I2.
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Left greedy normal form of a positive element.
    Nf { germ: PathBuf, word: String },
    /// Deligne normal form of a group element.
    Dnf { germ: PathBuf, element: String },
    /// Product of group elements.
    Mult {
        germ: PathBuf,
        #[arg(required = true, num_args = 2..)]
        elements: Vec<String>,
    },
    /// Inverse of a group element.
    Inv { germ: PathBuf, element: String },
    /// Equality of group elements.
    Eq { germ: PathBuf, a: String, b: String },
    /// Left gcd of positive elements.
    Gcd { germ: PathBuf, a: String, b: String },
    /// Longest atom factorization of a positive element.
    Norm { germ: PathBuf, word: String },
    /// Cell counts, or the cells of one dimension.
    Cells { germ: PathBuf, dim: Option<usize> },
    /// Integral homology of the group.
    Homology { germ: PathBuf },
    /// Integral cohomology of the group.
    Cohomology { germ: PathBuf },
    /// Reduced homology of the proper divisor poset or an avoid poset.
    PosetHomology {
        germ: PathBuf,
        /// Drop the simples above this one.
        #[arg(long)]
        avoid: Option<String>,
    },
    /// Duality-group test on poset cohomology.
    DualityCheck { germ: PathBuf },
    /// Connectivity at infinity from poset homology.
    EndConnectivity { germ: PathBuf },
    /// Ascending and descending links of a vertex.
    Links { germ: PathBuf, vertex: String },
    /// Nonsymmetric distance between vertices.
    Distance { germ: PathBuf, from: String, to: String },
    /// Geodesic labels, path and orientation profile.
    Geodesic { germ: PathBuf, from: String, to: String },
    /// Circumscribed radius and centers of a vertex set.
    Centers {
        germ: PathBuf,
        #[arg(required = true)]
        vertices: Vec<String>,
    },
    /// Finite cyclic subgroups of the central quotient.
    Subgroups { germ: PathBuf },
    /// Norms of powers of Δ.
    Tameness {
        germ: PathBuf,
        #[arg(default_value_t = 6)]
        n: u64,
    },
    /// Upper estimate of the translation length.
    TranslationLength {
        germ: PathBuf,
        element: String,
        #[arg(default_value_t = 6)]
        n: u64,
        /// Also print the lower bound from a tameness probe up to this power.
        #[arg(long)]
        tameness: Option<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain { message: String, witness: Option<Value> },
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure::Domain { message: e.to_string(), witness: None }
    }
}

impl From<crate::words::WordError> for Failure {
    fn from(e: crate::words::WordError) -> Self {
        Failure::domain(e)
    }
}

impl From<crate::geometry::GeometryError> for Failure {
    fn from(e: crate::geometry::GeometryError) -> Self {
        Failure::domain(e)
    }
}

impl From<homology::SnfError> for Failure {
    fn from(e: homology::SnfError) -> Self {
        Failure::domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::domain(e)
    }
}

impl From<GermFileError> for Failure {
    fn from(e: GermFileError) -> Self {
        let witness = match &e {
            GermFileError::Invalid(v) => Some(serde_json::to_value(v).expect("violations serialize")),
            _ => None,
        };
        Failure::Domain { message: e.to_string(), witness }
    }
}

/// Text lines plus the equivalent JSON value.
struct Output {
    text: Vec<String>,
    json: Value,
}

impl Output {
    fn new(text: Vec<String>, json: Value) -> Self {
        Output { text, json }
    }

    fn line(text: String, json: Value) -> Self {
        Output { text: vec![text], json }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let json = cli.json;
    match dispatch(cli.command) {
        Ok(output) => {
            let written = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&output.json).expect("values serialize"))
            } else {
                output.text.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            match written {
                Ok(()) => 0,
                Err(_) => 1,
            }
        }
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: {message}");
            2
        }
        Err(Failure::Domain { message, witness }) => {
            if json {
                let v = json!({ "error": message, "witness": witness });
                let _ = writeln!(err, "{}", serde_json::to_string_pretty(&v).expect("values serialize"));
            } else {
                let _ = writeln!(err, "error: {message}");
                if let Some(Value::Array(items)) = &witness {
                    for item in items {
                        let _ = writeln!(err, "  {item}");
                    }
                }
            }
            1
        }
    }
}

fn node_budget() -> Result<usize, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{BUDGET_VAR} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn open(path: &Path) -> Result<Germ, Failure> {
    let file = File::open(path).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
    Ok(load_germ(BufReader::new(file))?)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn element_json(germ: &Germ, g: &GroupElement) -> Value {
    json!({
        "text": germ.render_element(g),
        "prefix": g.prefix().letters().iter().map(|&s| germ.name_of(s)).collect::<Vec<_>>(),
        "exp": g.exp(),
    })
}

fn positive(germ: &Germ, text: &str) -> Result<Positive, Failure> {
    Ok(germ.parse_positive(text)?)
}

fn groups_output(groups: &[HomologyGroup], lowest: i64, letter: &str) -> Output {
    let text = groups.iter().enumerate().map(|(i, g)| format!("{letter}_{} = {g}", i as i64 + lowest)).collect();
    let json = groups
        .iter()
        .enumerate()
        .map(|(i, g)| json!({ "degree": i as i64 + lowest, "rank": g.rank, "torsion": g.torsion }))
        .collect();
    Output::new(text, Value::Array(json))
}

fn reduced_output(h: &ReducedHomology) -> Output {
    let groups: Vec<HomologyGroup> = h.iter().map(|(_, g)| g.clone()).collect();
    groups_output(&groups, -1, "H~")
}

fn poset_names(germ: &Germ, p: &FinitePoset) -> Vec<String> {
    p.elements().iter().map(|&s| germ.name_of(s).to_string()).collect()
}

fn report_lines(reports: &[checks::PosetReport], letter: &str) -> Vec<String> {
    reports
        .iter()
        .map(|r| {
            let groups: Vec<String> = r.groups.iter().map(|d| format!("{letter}_{} = {}", d.degree, d.group)).collect();
            let groups = if groups.is_empty() { "acyclic".to_string() } else { groups.join(", ") };
            format!("  {} [{} elements]: {groups}", r.label, r.size)
        })
        .collect()
}

fn vertex(germ: &Germ, text: &str) -> Result<Vertex, Failure> {
    Ok(germ.parse_vertex(text)?)
}

fn dispatch(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Validate { germ } => {
            let g = open(&germ)?;
            let norm = g.simple_norm(g.delta());
            Ok(Output::line(
                format!(
                    "ok: {} ({} simples, {} atoms, ||Δ|| = {norm}, σ of order {})",
                    g.name(),
                    g.len(),
                    g.atoms().len(),
                    g.sigma_order()
                ),
                json!({
                    "valid": true,
                    "name": g.name(),
                    "simples": g.len(),
                    "atoms": g.atoms().iter().map(|&a| g.name_of(a)).collect::<Vec<_>>(),
                    "delta": g.name_of(g.delta()),
                    "delta_norm": norm,
                    "sigma_order": g.sigma_order(),
                }),
            ))
        }
        Command::Build { flavor, family, n, output } => {
            let spec = CoxeterSpec::parse(&family, n).map_err(|e| match e {
                BuildError::InvalidSpec(_) => Failure::Usage(e.to_string()),
                _ => Failure::domain(e),
            })?;
            let g = match flavor {
                Flavor::Classical => classical_artin(spec),
                Flavor::Dual => dual_artin(spec),
            }
            .map_err(Failure::domain)?;
            let mut buf = Vec::new();
            save_germ(&g, &mut buf)?;
            match output {
                Some(path) => {
                    std::fs::write(&path, &buf).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
                    Ok(Output::line(
                        format!("wrote {} ({} simples) to {}", g.name(), g.len(), path.display()),
                        json!({ "name": g.name(), "simples": g.len(), "path": path }),
                    ))
                }
                None => {
                    let text = String::from_utf8(buf).expect("germ files are UTF-8");
                    let value: Value = serde_json::from_str(&text).expect("saved germs parse");
                    Ok(Output::new(text.lines().map(str::to_string).collect(), value))
                }
            }
        }
        Command::Nf { germ, word } => {
            let g = open(&germ)?;
            let p = positive(&g, &word)?;
            Ok(Output::line(
                g.render_positive(&p),
                json!({
                    "text": g.render_positive(&p),
                    "deltas": p.deltas,
                    "word": p.word.letters().iter().map(|&s| g.name_of(s)).collect::<Vec<_>>(),
                }),
            ))
        }
        Command::Dnf { germ, element } => {
            let g = open(&germ)?;
            let x = g.parse_element(&element)?;
            Ok(Output::line(g.render_element(&x), element_json(&g, &x)))
        }
        Command::Mult { germ, elements } => {
            let g = open(&germ)?;
            let mut acc = g.identity();
            for e in &elements {
                acc = g.mult(&acc, &g.parse_element(e)?)?;
            }
            Ok(Output::line(g.render_element(&acc), element_json(&g, &acc)))
        }
        Command::Inv { germ, element } => {
            let g = open(&germ)?;
            let x = g.inverse(&g.parse_element(&element)?)?;
            Ok(Output::line(g.render_element(&x), element_json(&g, &x)))
        }
        Command::Eq { germ, a, b } => {
            let g = open(&germ)?;
            let same = g.equals(&g.parse_element(&a)?, &g.parse_element(&b)?)?;
            Ok(Output::line(same.to_string(), json!({ "equal": same })))
        }
        Command::Gcd { germ, a, b } => {
            let g = open(&germ)?;
            let d = g.left_gcd(&positive(&g, &a)?, &positive(&g, &b)?);
            let x = g.positive_to_element(&d);
            Ok(Output::line(g.render_element(&x), element_json(&g, &x)))
        }
        Command::Norm { germ, word } => {
            let g = open(&germ)?;
            let p = positive(&g, &word)?;
            let mut calc = NormCalculator::new(&g, node_budget()?);
            let n = calc.norm(&p)?;
            Ok(Output::line(n.to_string(), json!({ "norm": n, "nodes": calc.nodes() })))
        }
        Command::Cells { germ, dim } => {
            let g = open(&germ)?;
            match dim {
                Some(k) => {
                    let cells = homology::cells(&g, k);
                    let rendered: Vec<String> = cells
                        .iter()
                        .map(|c| format!("[{}]", c.entries.iter().map(|&s| g.name_of(s)).collect::<Vec<_>>().join("|")))
                        .collect();
                    let json = cells
                        .iter()
                        .map(|c| c.entries.iter().map(|&s| g.name_of(s)).collect::<Vec<_>>())
                        .collect::<Vec<_>>();
                    Ok(Output::new(rendered, json!({ "dimension": k, "cells": json })))
                }
                None => {
                    let complex = homology::bar_complex(&g);
                    let ranks = complex.ranks().to_vec();
                    let chi = complex.euler_characteristic();
                    let mut text: Vec<String> = ranks.iter().enumerate().map(|(k, r)| format!("D_{k} = {r}")).collect();
                    text.push(format!("euler characteristic = {chi}"));
                    Ok(Output::new(text, json!({ "counts": ranks, "euler_characteristic": chi })))
                }
            }
        }
        Command::Homology { germ } => Ok(groups_output(&homology::homology(&open(&germ)?)?, 0, "H")),
        Command::Cohomology { germ } => Ok(groups_output(&homology::cohomology(&open(&germ)?)?, 0, "H^")),
        Command::PosetHomology { germ, avoid } => {
            let g = open(&germ)?;
            let p = match avoid {
                Some(name) => {
                    let mu = g.simple(&name).ok_or_else(|| Failure::domain(format!("unknown simple {name:?}")))?;
                    checks::avoid_poset(&g, mu)
                }
                None => checks::proper_poset(&g),
            };
            let mut out = reduced_output(&homology::reduced_poset_homology(&p)?);
            out.json = json!({ "elements": poset_names(&g, &p), "reduced_homology": out.json });
            Ok(out)
        }
        Command::DualityCheck { germ } => {
            let g = open(&germ)?;
            let v = checks::duality_check(&g)?;
            let head = match v.verdict {
                checks::Verdict::Yes => format!(
                    "yes: duality group of dimension {} (poset cohomology concentrated in degree {})",
                    v.n.unwrap(),
                    v.concentrated_in.unwrap()
                ),
                checks::Verdict::Inconclusive => format!(
                    "inconclusive: {}{}",
                    v.reason.clone().unwrap_or_default(),
                    v.offending.as_ref().map(|o| format!(" ({o})")).unwrap_or_default()
                ),
            };
            let mut text = vec![head];
            text.extend(report_lines(&v.reports, "H~^"));
            Ok(Output::new(text, to_json(&v)))
        }
        Command::EndConnectivity { germ } => {
            let g = open(&germ)?;
            let e = checks::end_connectivity_check(&g)?;
            let head = match e.n {
                Some(n) => format!("{}-acyclic at infinity; {}", n, e.conclusion),
                None => format!(
                    "inconclusive{}",
                    e.offending.as_ref().map(|o| format!(" ({o} has reduced homology in degree ≤ 0)")).unwrap_or_default()
                ),
            };
            let mut text = vec![head];
            text.extend(report_lines(&e.reports, "H~"));
            Ok(Output::new(text, to_json(&e)))
        }
        Command::Links { germ, vertex: v } => {
            let g = open(&germ)?;
            let v = vertex(&g, &v)?;
            let mut text = Vec::new();
            let mut json = serde_json::Map::new();
            for (label, p) in [
                ("descending", checks::descending_link(&g, &v.rep)),
                ("ascending", checks::ascending_link(&g, &v.rep)),
            ] {
                let h = homology::reduced_poset_homology(&p)?;
                let names = poset_names(&g, &p);
                text.push(format!("{label}: {{{}}}", names.join(", ")));
                let r = reduced_output(&h);
                text.extend(r.text.iter().map(|l| format!("  {l}")));
                json.insert(label.into(), json!({ "elements": names, "reduced_homology": r.json }));
            }
            Ok(Output::new(text, Value::Object(json)))
        }
        Command::Distance { germ, from, to } => {
            let g = open(&germ)?;
            let d = g.distance(&vertex(&g, &from)?, &vertex(&g, &to)?)?;
            Ok(Output::line(d.to_string(), json!({ "distance": d })))
        }
        Command::Geodesic { germ, from, to } => {
            let g = open(&germ)?;
            let (v, w) = (vertex(&g, &from)?, vertex(&g, &to)?);
            let labels: Vec<&str> = g.geodesic(&v, &w)?.into_iter().map(|s| g.name_of(s)).collect();
            let path: Vec<String> = g.geodesic_path(&v, &w)?.iter().map(|p| g.render_vertex(p)).collect();
            let profile = g.orientation_profile(&v, &w)?;
            let text = vec![
                format!("labels: {}", labels.join(".")),
                format!("path: {}", path.iter().map(|p| format!("[{p}]")).collect::<Vec<_>>().join(" -> ")),
                format!("profile: {}", serde_json::to_value(&profile).unwrap().as_array().unwrap().iter().map(|o| o.as_str().unwrap()).collect::<Vec<_>>().join(" ")),
            ];
            Ok(Output::new(text, json!({ "labels": labels, "path": path, "profile": profile })))
        }
        Command::Centers { germ, vertices } => {
            let g = open(&germ)?;
            let targets = vertices.iter().map(|t| vertex(&g, t)).collect::<Result<Vec<_>, _>>()?;
            let report = g.centers(&targets)?;
            let centers: Vec<String> = report.centers.iter().map(|c| g.render_vertex(c)).collect();
            let text = vec![
                format!("radius: {}", report.radius),
                format!("centers: {}", centers.iter().map(|c| format!("[{c}]")).collect::<Vec<_>>().join(" ")),
            ];
            Ok(Output::new(text, json!({ "radius": report.radius, "centers": centers })))
        }
        Command::Subgroups { germ } => {
            let g = open(&germ)?;
            let table = g.finite_subgroups();
            let mut text = vec![format!("m = {}", g.sigma_order())];
            let mut rows = Vec::new();
            for r in &table {
                if !g.verify_subgroup(r)? {
                    return Err(Failure::domain(format!("subgroup record failed verification: {r:?}")));
                }
                let extra = r.k.map(|k| format!(", Δ^{k}")).unwrap_or_default();
                text.push(format!(
                    "type {}: <{}·Δ^{}{extra}>  t = {}  order = {}",
                    r.kind,
                    g.name_of(r.mu),
                    r.j,
                    r.t,
                    r.order
                ));
                rows.push(json!({
                    "mu": g.name_of(r.mu), "j": r.j, "t": r.t, "k": r.k, "order": r.order, "type": r.kind,
                }));
            }
            Ok(Output::new(text, json!({ "sigma_order": g.sigma_order(), "subgroups": rows })))
        }
        Command::Tameness { germ, n } => {
            let g = open(&germ)?;
            let probe = g.tameness_probe(n, node_budget()?)?;
            let mut text: Vec<String> = probe.norms.iter().map(|(k, v)| format!("||Δ^{k}|| = {v}")).collect();
            text.push(format!("c_{n} = {}", probe.constant));
            Ok(Output::new(text, to_json(&probe)))
        }
        Command::TranslationLength { germ, element, n, tameness } => {
            let g = open(&germ)?;
            let x = g.parse_element(&element)?;
            let est = g.translation_length(&x, n)?;
            let mut text = vec![
                format!("estimate: {} (attained at n = {})", est.estimate, est.argmin),
                format!("lengths: {}", est.lengths.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")),
            ];
            let mut json = to_json(&est);
            if let Some(probe_n) = tameness {
                let probe = g.tameness_probe(probe_n, node_budget()?)?;
                let bound = translation_lower_bound(probe.constant, g.simple_norm(g.delta()) as u64);
                text.push(format!("lower bound for infinite order: {bound} (c = {})", probe.constant));
                json["lower_bound"] = json!(bound.to_string());
            }
            Ok(Output::new(text, json))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("garside").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["build", "dual", "B", "3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn missing_file_is_domain_error() {
        let (code, _, err) = call(&["homology", "/nonexistent/germ.json"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn build_to_stdout() {
        let (code, out, _) = call(&["build", "dual", "A", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"delta\": \"(123)\""));
        let (code, out, _) = call(&["--json", "build", "classical", "I2", "4"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["delta"], "stst");
        assert_eq!(call(&["build", "classical", "A", "6"]).0, 1);
    }
}
