//! The `gridfloer` command line.
//!
//! Exit codes: 0 success, 2 usage, 3 unreadable or invalid input,
//! 4 capacity exceeded, 5 internal convention failure.
//! `GRIDFLOER_THREADS` sets the worker count for parallel work; unset means
//! all available cores.

use clap::{Parser, Subcommand, ValueEnum};
use gridfloer::concordance::{batch_report, inherits_base, ConcordanceError};
use gridfloer::grid::{parse_raw, validate, RawGrid};
use gridfloer::legendrian::{bennequin_checks, thin_shortcut, LegendrianError};
use gridfloer::{
    homology, obstruct, obstruct_stabilized, tau, theta, CapacityError, GridDiagram, GridError, Sign, DEFAULT_CAP,
    MAX_CAP,
};
use heegaard_domains::diagram::format_fraction;
use heegaard_domains::{
    chern_pairing, euler_measure, is_weakly_admissible, periodic_boundary, periodic_domain_basis, Admissibility,
    CurveDiagram, DomainVector, HeegaardError,
};
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;
pub const EXIT_CONVENTION: i32 = 5;

pub const THREADS_ENV: &str = "GRIDFLOER_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "gridfloer",
    version,
    about = "Grid homology and Legendrian concordance obstructions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,
    /// Largest grid size to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP, global = true, value_parser = parse_cap)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (2..=MAX_CAP).contains(&n) => Ok(n),
        _ => Err(format!("expected an integer in 2..={MAX_CAP}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a grid file and list every violated condition.
    Validate { grid: PathBuf },
    /// Classical invariants tb, r and sl of the front.
    Invariants { grid: PathBuf },
    /// Ranks of the fully blocked grid homology.
    Hfk {
        grid: PathBuf,
        /// Divide out the grid-size factors.
        #[arg(long)]
        hat: bool,
    },
    /// Whether the canonical class vanishes.
    Theta {
        grid: PathBuf,
        #[arg(long, value_enum, default_value_t = SignArg::Plus)]
        sign: SignArg,
    },
    /// The concordance invariant tau and the slice-Bennequin check.
    Tau {
        grid: PathBuf,
        /// Also run the thin-knot shortcut (enumerates the whole complex).
        #[arg(long)]
        thin: bool,
    },
    /// Obstruct a Lagrangian concordance from K1 to K2.
    Obstruct {
        k1: PathBuf,
        k2: PathBuf,
        /// Also test all pairs of up to this many negative stabilizations.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run `obstruct` on every pair listed in a file, two paths per line.
    ObstructBatch { pairs: PathBuf },
    /// Periodic domains, admissibility and pairings of a Heegaard diagram.
    DomainsCheck {
        diagram: PathBuf,
        /// Curve families whose curves may bound periodic domains.
        #[arg(long, value_delimiter = ',', default_value = "alpha,beta")]
        families: Vec<String>,
        /// Curves to eliminate first in the basis normal form.
        #[arg(long, value_delimiter = ',')]
        eliminate: Vec<String>,
        /// Intersection points of a generator at which to evaluate pairings.
        #[arg(long, value_delimiter = ',')]
        generator: Vec<String>,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: m.into(),
        }
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<CapacityError> for Failure {
    fn from(e: CapacityError) -> Self {
        Failure {
            code: EXIT_CAPACITY,
            message: e.to_string(),
        }
    }
}

impl From<LegendrianError> for Failure {
    fn from(e: LegendrianError) -> Self {
        match e {
            LegendrianError::Capacity(c) => c.into(),
            LegendrianError::Convention(m) => Failure {
                code: EXIT_CONVENTION,
                message: m,
            },
        }
    }
}

impl From<ConcordanceError> for Failure {
    fn from(e: ConcordanceError) -> Self {
        let code = concordance_code(&e);
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HeegaardError> for Failure {
    fn from(e: HeegaardError) -> Self {
        let code = match e {
            HeegaardError::Overflow => EXIT_CAPACITY,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn concordance_code(e: &ConcordanceError) -> i32 {
    match e {
        ConcordanceError::Grid(_) | ConcordanceError::Io(_) => EXIT_INPUT,
        ConcordanceError::Capacity(_) => EXIT_CAPACITY,
        ConcordanceError::Convention(_) => EXIT_CONVENTION,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_grid(path: &Path) -> Result<GridDiagram, Failure> {
    GridDiagram::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

/// Thread count from the environment; `None` means use the default pool.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>, String> {
    match value {
        None => Ok(None),
        Some(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {s:?}")),
        },
    }
}

/// Parses `argv`, runs one subcommand and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let threads = match threads_from_env(std::env::var(THREADS_ENV).ok().as_deref()) {
        Ok(t) => t,
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_USAGE;
        }
    };
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure {
                code: EXIT_CONVENTION,
                message: e.to_string(),
            }),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn sign(s: SignArg) -> Sign {
    match s {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    }
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    n: usize,
    issues: Vec<Issue>,
}

#[derive(Serialize)]
struct Issue {
    code: &'static str,
    message: String,
}

fn dispatch(cli: &Cli) -> Result<(String, i32), Failure> {
    let cap = cli.cap;
    let tsv = cli.format == Format::Tsv;
    match &cli.command {
        Command::Validate { grid } => {
            let text = read(grid)?;
            let raw: RawGrid = if text.trim_start().starts_with('{') {
                serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", grid.display())))?
            } else {
                parse_raw(&text)?
            };
            let report = validate(&raw);
            let r = ValidateReport {
                valid: report.is_valid(),
                n: raw.n,
                issues: report
                    .issues
                    .iter()
                    .map(|e| Issue {
                        code: e.code(),
                        message: e.to_string(),
                    })
                    .collect(),
            };
            let code = if r.valid { EXIT_OK } else { EXIT_INPUT };
            let s = if tsv {
                let mut s = if r.valid {
                    format!("valid n={}\n", r.n)
                } else {
                    "invalid\n".to_string()
                };
                for i in &r.issues {
                    s += &format!("{}\t{}\n", i.code, i.message);
                }
                s
            } else {
                json(&r)
            };
            Ok((s, code))
        }
        Command::Invariants { grid } => {
            let inv = load_grid(grid)?.classical_invariants();
            Ok((if tsv { format!("{inv}\n") } else { json(&inv) }, EXIT_OK))
        }
        Command::Hfk { grid, hat } => {
            let d = load_grid(grid)?;
            let mut h = homology(&d, cap)?;
            if *hat {
                h = h.desmear().ok_or_else(|| Failure {
                    code: EXIT_CONVENTION,
                    message: "homology is not a free multiple of the smearing factor".into(),
                })?;
            }
            Ok((if tsv { h.to_tsv() } else { h.to_json() + "\n" }, EXIT_OK))
        }
        Command::Theta { grid, sign: s } => {
            let t = theta(&load_grid(grid)?, sign(*s), cap)?;
            Ok((
                if tsv {
                    format!("vanishes={}\n", t.vanishes)
                } else {
                    json(&t)
                },
                EXIT_OK,
            ))
        }
        Command::Tau { grid, thin } => {
            let d = load_grid(grid)?;
            let t = tau(&d, cap)?;
            let b = bennequin_checks(&d, cap)?;
            let shortcut = if *thin { Some(thin_shortcut(&d, cap)?) } else { None };
            #[derive(Serialize)]
            struct TauReport {
                tau: i32,
                sl: i64,
                bound: i64,
                sharp: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                thin_shortcut: Option<gridfloer::legendrian::ThinVerdict>,
            }
            let r = TauReport {
                tau: t.tau,
                sl: b.sl,
                bound: b.bound,
                sharp: b.sharp,
                thin_shortcut: shortcut,
            };
            let s = if tsv {
                let mut s = format!("tau={} sl={} bound={} sharp={}", r.tau, r.sl, r.bound, r.sharp);
                if let Some(v) = shortcut {
                    s += &format!(" thin_shortcut={}", serde_json::to_value(v).unwrap().as_str().unwrap());
                }
                s + "\n"
            } else {
                json(&r)
            };
            Ok((s, EXIT_OK))
        }
        Command::Obstruct { k1, k2, depth } => {
            let (a, b) = (load_grid(k1)?, load_grid(k2)?);
            match depth {
                None => {
                    let v = obstruct(&a, &b, cap)?;
                    let s = if tsv {
                        let e = &v.evidence;
                        let opt = |x: Option<bool>| x.map_or("-".to_string(), |b| b.to_string());
                        format!(
                            "{}\ntb1={} r1={} tb2={} r2={} theta1_vanishes={} theta2_vanishes={}\n",
                            v.kind,
                            e.k1.tb,
                            e.k1.r,
                            e.k2.tb,
                            e.k2.r,
                            opt(e.theta1_vanishes),
                            opt(e.theta2_vanishes)
                        )
                    } else {
                        json(&v)
                    };
                    Ok((s, EXIT_OK))
                }
                Some(k) => {
                    let list = obstruct_stabilized(&a, &b, *k, cap)?;
                    let inherits = inherits_base(&list);
                    let s = if tsv {
                        let mut s = String::from("i\tj\tverdict\n");
                        for v in &list {
                            s += &format!("{}\t{}\t{}\n", v.i, v.j, v.verdict.kind);
                        }
                        s + &format!("inherits_base={inherits}\n")
                    } else {
                        #[derive(Serialize)]
                        struct Stabilized<'a> {
                            depth: usize,
                            inherits_base: bool,
                            pairs: &'a [gridfloer::concordance::StabilizedVerdict],
                        }
                        json(&Stabilized {
                            depth: *k,
                            inherits_base: inherits,
                            pairs: &list,
                        })
                    };
                    Ok((s, EXIT_OK))
                }
            }
        }
        Command::ObstructBatch { pairs } => {
            let list = parse_pairs(&read(pairs)?, pairs.parent().unwrap_or(Path::new(".")))?;
            let report = batch_report(&list, cap);
            let code = report
                .rows
                .iter()
                .find_map(|r| r.error.as_ref())
                .map_or(EXIT_OK, |e| match e.kind.as_str() {
                    "capacity" => EXIT_CAPACITY,
                    "convention" => EXIT_CONVENTION,
                    _ => EXIT_INPUT,
                });
            Ok((if tsv { report.to_tsv() } else { report.to_json() + "\n" }, code))
        }
        Command::DomainsCheck {
            diagram,
            families,
            eliminate,
            generator,
        } => domains_check(diagram, families, eliminate, generator, tsv),
    }
}

/// Two whitespace-separated paths per line; `#` starts a comment. Relative
/// paths are taken relative to the directory of the pairs file.
pub fn parse_pairs(text: &str, base: &Path) -> Result<Vec<(String, String)>, Failure> {
    let resolve = |p: &str| {
        let p = Path::new(p);
        if p.is_absolute() {
            p.display().to_string()
        } else {
            base.join(p).display().to_string()
        }
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Failure::input(format!("pairs line {}: expected two paths", i + 1)));
        }
        out.push((resolve(f[0]), resolve(f[1])));
    }
    Ok(out)
}

#[derive(Serialize)]
struct BasisEntry {
    domain: DomainVector,
    boundary: BTreeMap<String, i64>,
    euler: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairing: Option<i64>,
}

#[derive(Serialize)]
struct DomainsReport {
    diagram: Option<String>,
    regions: usize,
    surface_euler: i64,
    families: Vec<String>,
    basis: Vec<BasisEntry>,
    admissibility: Admissibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    whole_surface_pairing: Option<i64>,
}

fn domains_check(
    path: &Path,
    families: &[String],
    eliminate: &[String],
    generator: &[String],
    tsv: bool,
) -> Result<(String, i32), Failure> {
    let d = CurveDiagram::parse(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let fams: Vec<&str> = families.iter().map(String::as_str).collect();
    let elim: Vec<&str> = eliminate.iter().map(String::as_str).collect();
    let x: Vec<&str> = generator.iter().map(String::as_str).collect();
    let basis = periodic_domain_basis(&d, &fams, &elim)?;
    let admissibility = is_weakly_admissible(&d, &basis)?;
    let mut entries = Vec::new();
    for p in basis {
        let boundary = periodic_boundary(&d, &p)?.ok_or_else(|| Failure {
            code: EXIT_CONVENTION,
            message: "basis element is not periodic".into(),
        })?;
        let pairing = if x.is_empty() {
            None
        } else {
            Some(chern_pairing(&d, &p, &x)?)
        };
        entries.push(BasisEntry {
            euler: format_fraction(&euler_measure(&d, &p)?),
            domain: p,
            boundary,
            pairing,
        });
    }
    let whole = if x.is_empty() {
        None
    } else {
        Some(chern_pairing(&d, &DomainVector::whole(&d), &x)?)
    };
    let r = DomainsReport {
        diagram: d.name.clone(),
        regions: d.regions.len(),
        surface_euler: d.surface_euler,
        families: families.to_vec(),
        basis: entries,
        admissibility,
        generator: (!x.is_empty()).then(|| generator.to_vec()),
        whole_surface_pairing: whole,
    };
    if !tsv {
        return Ok((json(&r), EXIT_OK));
    }
    let kv = |m: &BTreeMap<String, i64>| m.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(",");
    let mut s = format!(
        "diagram={} regions={} surface_euler={} families={}\n",
        r.diagram.as_deref().unwrap_or("-"),
        r.regions,
        r.surface_euler,
        families.join(",")
    );
    for (i, b) in r.basis.iter().enumerate() {
        s += &format!(
            "basis\t{i}\teuler={}\tboundary={}\tdomain={}",
            b.euler,
            kv(&b.boundary),
            kv(&b.domain.mult)
        );
        if let Some(p) = b.pairing {
            s += &format!("\tpairing={p}");
        }
        s += "\n";
    }
    match &r.admissibility {
        Admissibility::Admissible => s += "weakly_admissible=true\n",
        Admissibility::Inadmissible { coefficients, domain } => {
            let c: Vec<String> = coefficients.iter().map(i64::to_string).collect();
            s += &format!(
                "weakly_admissible=false\tcoefficients={}\tdomain={}\n",
                c.join(","),
                kv(&domain.mult)
            );
        }
    }
    if let Some(w) = r.whole_surface_pairing {
        s += &format!("whole_surface_pairing={w}\n");
    }
    Ok((s, EXIT_OK))
}
