//! Command-line front end: reads system files, runs the library operations and
//! prints text or JSON, optionally rendering plane curves as SVG.

pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropical_core::hypersurface::{check_balancing, tropical_hypersurface, vertices_and_rays, TropicalHypersurface, WeightedPolyhedralComplex};
use tropical_core::intersection::stable_intersection_seeded;
use tropical_core::io::{parse_convention, parse_field, SystemFile};
use tropical_core::rational::format_rational;
use tropical_core::rootcount::{generic_root_count, is_tropically_transverse, nonlinear_resonator_system, RootCountOptions};
use tropical_core::semiring::TropicalPolynomial;
use tropical_core::valuation::{tropicalize, SemiringMap};
use tropical_core::Error;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "tropical", version, about = "Tropical hypersurfaces, stable intersections and generic root counts")]
pub struct Cli {
    /// Override the file's valued field: Q, Q(t), Qp:<p> or Q_<p>.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Override the file's convention: min or max.
    #[arg(long, global = true)]
    pub convention: Option<String>,
    /// Seed for perturbations and liftings.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write an SVG rendering (plane curves only).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tropicalize one polynomial of a system file.
    Tropicalize {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Tropical hypersurface of one polynomial.
    Hypersurface {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Stable intersection of two hypersurfaces: the first polynomial of each
    /// file, or the first two polynomials of a single file.
    StableIntersection { a: PathBuf, b: Option<PathBuf> },
    /// Tropical transversality of a base ("base", or else "polynomials").
    Transversal { file: PathBuf },
    /// Generic root count of a horizontally parametrised system.
    RootCount {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        simplify: Switch,
        /// Compare with the tropical intersection number of the modified system.
        #[arg(long)]
        check_intersection: bool,
    },
    /// Write the coupled-oscillator system for given n and m.
    Oscillator {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn core(&self) -> Option<&Error> {
        match self {
            CliError::File { source, .. } | CliError::Core(source) => Some(source),
            _ => None,
        }
    }

    /// 2 usage, 3 parse, 4 failed precondition, 5 non-transverse base, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match (self, self.core()) {
            (CliError::Usage(_), _) => 2,
            (_, Some(Error::Parse { .. })) => 3,
            (_, Some(Error::NotTransverse(_))) => 5,
            (_, Some(_)) => 4,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

impl Cli {
    fn load(&self, path: &Path) -> CliResult<SystemFile> {
        let in_file = |source: Error| CliError::File {
            path: path.to_owned(),
            source,
        };
        let mut f = SystemFile::parse(&read(path)?).map_err(in_file)?;
        if let Some(s) = &self.field {
            f.field = parse_field(s)?;
        }
        if let Some(s) = &self.convention {
            f.convention = parse_convention(s)?;
        }
        Ok(f)
    }

    fn tropical(&self, path: &Path, index: usize) -> CliResult<(SystemFile, TropicalPolynomial)> {
        let f = self.load(path)?;
        let p = f.polynomial(index).map_err(|source| CliError::File {
            path: path.to_owned(),
            source,
        })?;
        let t = tropicalize(&p, &SemiringMap::new(f.field, f.convention))?;
        Ok((f, t))
    }
}

/// Runs one invocation and returns what it prints.
pub fn run(cli: &Cli) -> CliResult<String> {
    let svg_allowed = matches!(cli.command, Command::Hypersurface { .. } | Command::StableIntersection { .. });
    if cli.svg.is_some() && !svg_allowed {
        return Err(CliError::Usage("--svg applies to hypersurface and stable-intersection only".into()));
    }
    match &cli.command {
        Command::Tropicalize { file, index } => {
            let (f, t) = cli.tropical(file, *index)?;
            Ok(if cli.json {
                to_json(&t)
            } else {
                format_tropical(&t, &f.variables)
            })
        }
        Command::Hypersurface { file, index } => {
            let (_, t) = cli.tropical(file, *index)?;
            let h = tropical_hypersurface(&t)?;
            if let Some(path) = &cli.svg {
                write(path, &svg::render_hypersurface(&h)?)?;
            }
            Ok(if cli.json {
                hypersurface_json(&h)
            } else {
                hypersurface_text(&h)
            })
        }
        Command::StableIntersection { a, b } => {
            let (ta, tb) = match b {
                Some(b) => (cli.tropical(a, 0)?.1, cli.tropical(b, 0)?.1),
                None => (cli.tropical(a, 0)?.1, cli.tropical(a, 1)?.1),
            };
            let ha = tropical_hypersurface(&ta)?;
            let hb = tropical_hypersurface(&tb)?;
            let meet = stable_intersection_seeded(&ha.complex, &hb.complex, cli.seed)?;
            if let Some(path) = &cli.svg {
                write(path, &svg::render_intersection(&ha.complex, &hb.complex, &meet)?)?;
            }
            Ok(if cli.json {
                intersection_json(&meet)
            } else {
                intersection_text(&meet)
            })
        }
        Command::Transversal { file } => {
            let f = cli.load(file)?;
            let base = f.base_polynomials().map_err(|source| CliError::File {
                path: file.clone(),
                source,
            })?;
            let cert = is_tropically_transverse(&base, &SemiringMap::new(f.field, f.convention))?;
            Ok(if cli.json {
                to_json(&json!({ "transverse": cert.verdict, "witness": cert.witness }))
            } else {
                match &cert.witness {
                    None => "transverse".to_string(),
                    Some(w) => format!(
                        "not transverse: cell of dimension {} with summand dimensions {:?} (deficit {})",
                        w.cell.dim, w.cell.summand_dims, w.deficit
                    ),
                }
            })
        }
        Command::RootCount {
            file,
            simplify,
            check_intersection,
        } => {
            let f = cli.load(file)?;
            let s = f.horizontal_system().map_err(|source| CliError::File {
                path: file.clone(),
                source,
            })?;
            let opts = RootCountOptions {
                simplify: *simplify == Switch::On,
                check_intersection: *check_intersection,
                seed: cli.seed,
            };
            let count = generic_root_count(&s, opts)?;
            Ok(if cli.json {
                to_json(&json!({ "root_count": count.to_string() }))
            } else {
                count.to_string()
            })
        }
        Command::Oscillator { n, m, out } => {
            let s = nonlinear_resonator_system(*n as usize, *m as usize)?;
            let text = SystemFile::from_horizontal(&s).to_json();
            match out {
                Some(path) => {
                    write(path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn to_json<T: serde::Serialize + ?Sized>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable")
}

fn format_vec(v: &[impl std::fmt::Display]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn format_point(v: &[tropical_core::rational::Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// `max(-3, x, -2 + y, 3*x, x + 2*y)`.
pub fn format_tropical(t: &TropicalPolynomial, vars: &[String]) -> String {
    let terms: Vec<String> = t
        .terms()
        .iter()
        .map(|(alpha, c)| {
            let mut parts = Vec::new();
            if format_rational(c) != "0" || alpha.iter().all(|&a| a == 0) {
                parts.push(format_rational(c));
            }
            for (a, v) in alpha.iter().zip(vars) {
                match a {
                    0 => {}
                    1 => parts.push(v.clone()),
                    a => parts.push(format!("{a}*{v}")),
                }
            }
            parts.join(" + ")
        })
        .collect();
    format!("{}({})", t.convention(), terms.join(", "))
}

fn complex_summary(c: &WeightedPolyhedralComplex) -> Value {
    let (vertices, rays) = vertices_and_rays(c);
    json!({
        "vertices": vertices.iter().map(|v| v.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "rays": rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn hypersurface_json(h: &TropicalHypersurface) -> String {
    let mut v = complex_summary(&h.complex);
    v["complex"] = serde_json::to_value(&h.complex).expect("serializable");
    v["dual_edges"] = json!(h.cell_duals);
    to_json(&v)
}

fn hypersurface_text(h: &TropicalHypersurface) -> String {
    let c = &h.complex;
    let mut out = String::new();
    if c.is_empty() {
        return "empty hypersurface".into();
    }
    let _ = writeln!(out, "vertices:");
    for v in &c.vertices {
        let _ = writeln!(out, "  {}", format_point(v));
    }
    let _ = writeln!(out, "rays:");
    for r in &c.rays {
        let _ = writeln!(out, "  {}", format_vec(r));
    }
    if !c.lineality.is_empty() {
        let _ = writeln!(out, "lineality:");
        for l in &c.lineality {
            let _ = writeln!(out, "  {}", format_vec(l));
        }
    }
    let _ = writeln!(out, "maximal cells (vertices; rays; multiplicity):");
    for (cell, m) in c.maximal_cells.iter().zip(&c.multiplicities) {
        let _ = writeln!(out, "  {:?}; {:?}; {m}", cell.vertices, cell.rays);
    }
    let balanced = check_balancing(c).map(|r| r.balanced).unwrap_or(false);
    let _ = write!(out, "balanced: {balanced}");
    out
}

/// Isolated points of a stable intersection with their multiplicities.
fn points_of(c: &WeightedPolyhedralComplex) -> Vec<(usize, u64)> {
    if !c.lineality.is_empty() {
        return Vec::new();
    }
    c.maximal_cells
        .iter()
        .zip(&c.multiplicities)
        .filter(|(cell, _)| cell.rays.is_empty() && cell.vertices.len() == 1)
        .map(|(cell, &m)| (cell.vertices[0], m))
        .collect()
}

fn intersection_json(c: &WeightedPolyhedralComplex) -> String {
    let points: Vec<Value> = points_of(c)
        .into_iter()
        .map(|(v, m)| {
            json!({
                "point": c.vertices[v].iter().map(format_rational).collect::<Vec<_>>(),
                "multiplicity": m,
            })
        })
        .collect();
    to_json(&json!({
        "points": points,
        "total_multiplicity": c.total_multiplicity(),
        "complex": c,
    }))
}

fn intersection_text(c: &WeightedPolyhedralComplex) -> String {
    if c.is_empty() {
        return "empty intersection".into();
    }
    let points = points_of(c);
    if points.len() != c.maximal_cells.len() {
        return format!(
            "{}-dimensional stable intersection with {} maximal cells, total multiplicity {}",
            c.dim().unwrap_or(0),
            c.maximal_cells.len(),
            c.total_multiplicity()
        );
    }
    let mut out = String::new();
    for (v, m) in points {
        let _ = writeln!(out, "{} multiplicity {m}", format_point(&c.vertices[v]));
    }
    let _ = write!(out, "total multiplicity {}", c.total_multiplicity());
    out
}
