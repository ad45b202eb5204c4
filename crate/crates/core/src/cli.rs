//! Command-line front end.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::catalog::{
    enumerate_configurations, enumerate_connected, group_types, verify_constraints, CatalogOptions,
    CatalogRecord, ClauseStatus, SCHEMA,
};
use crate::complex::{
    index_from_profile, reduced_homology_with, Coefficients, SimplicialComplex, DEFAULT_SIMPLEX_CAP,
};
use crate::curve::enumerate_loop_types;
use crate::slopes::{barrier_check, farey_distance, parse_slope_set, Distance, Slope, TorusMap};
use crate::surgery::{replay, MoveLog};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

const DEFAULT_CONFIG: &str = "tmcat.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "tmcat", version, about = "Local-index catalogs for surfaces in a tetrahedron")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Configuration file; defaults to ./tmcat.toml when present.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the parsed command as JSON and exit.
    #[arg(long, global = true, hide = true)]
    pub dump_spec: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// List normal loop types up to a length.
    Loops {
        #[arg(long)]
        max_length: u32,
    },
    /// Enumerate candidate surfaces at a local index.
    Catalog(CatalogArgs),
    /// Check a configuration record against the index constraints.
    Verify {
        #[arg(long)]
        index: u32,
        /// Record file; reads standard input when omitted.
        file: Option<PathBuf>,
    },
    /// Replay a surgery move log.
    Surgery {
        #[arg(long)]
        replay: PathBuf,
    },
    /// Simplicial complex tools.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Farey graph distance between two slopes.
    Farey {
        #[arg(allow_hyphen_values = true)]
        from: String,
        #[arg(allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Check the 2n+1 separation between two slope sets.
    Barrier {
        #[arg(long, allow_hyphen_values = true)]
        omega_x: String,
        #[arg(long, allow_hyphen_values = true)]
        omega_y: String,
        #[arg(long = "map", allow_hyphen_values = true, default_value = "1,0;0,1")]
        map: String,
        #[arg(long)]
        index: u32,
        #[arg(long)]
        cap: Option<u32>,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CatalogArgs {
    #[arg(long)]
    pub index: u32,
    /// Mark candidates absent from the reference index-2 list.
    #[arg(long)]
    pub flag_extras: bool,
    /// One record per labeled variant instead of per type.
    #[arg(long)]
    pub labeled: bool,
    /// Emit full configurations (components plus normal disk families).
    #[arg(long)]
    pub configurations: bool,
    /// Per-edge weight cap for normal disk families in configurations.
    #[arg(long)]
    pub disk_cap: Option<u32>,
    #[arg(long)]
    pub include_closed: bool,
    #[arg(long)]
    pub non_helical: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum ComplexAction {
    /// Homology index of a complex file.
    Index {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Reduced homology ranks of a complex file.
    Homology {
        file: PathBuf,
        /// Integer coefficients, reporting torsion.
        #[arg(long)]
        integral: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
}

/// Optional configuration file contents; flags take precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub max_index: u32,
    pub max_edge_weight: u32,
    pub distance_cap: u32,
    pub disk_cap: u32,
    pub simplex_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_index: 6,
            max_edge_weight: 32,
            distance_cap: crate::slopes::DEFAULT_DISTANCE_CAP,
            disk_cap: 2,
            simplex_cap: DEFAULT_SIMPLEX_CAP,
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn malformed(msg: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_MALFORMED, message: msg.to_string() }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    let (path, required) = match path {
        Some(p) => (p.to_path_buf(), true),
        None => (PathBuf::from(DEFAULT_CONFIG), false),
    };
    match std::fs::read_to_string(&path) {
        Ok(text) => {
            toml::from_str(&text).map_err(|e| malformed(format!("{}: {}", path.display(), e.message())))
        }
        Err(_) if !required => Ok(Config::default()),
        Err(e) => Err(malformed(format!("{}: {e}", path.display()))),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(value).expect("serializable"))
}

/// Runs the CLI with explicit streams; returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            let _ = writeln!(stderr, "error: {line}");
            return EXIT_MALFORMED;
        }
    };
    if cli.dump_spec {
        let _ = emit_json(stdout, &cli);
        return EXIT_OK;
    }
    match execute(&cli, stdin, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message.replace('\n', " "));
            f.code
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = load_config(cli.config.as_deref())?;
    let json = cli.format == Format::Json;
    let io = |e: std::io::Error| Failure { code: EXIT_MALFORMED, message: e.to_string() };

    match &cli.command {
        Command::Loops { max_length } => {
            let limit = 4 * (config.max_index + 1);
            if *max_length > limit {
                return Err(malformed(format!(
                    "max length {max_length} exceeds the configured limit {limit}"
                )));
            }
            for kind in enumerate_loop_types(*max_length) {
                if json {
                    emit_json(
                        out,
                        &json!({"length": kind.length(), "loop": kind, "weights": kind.weights()}),
                    )
                    .map_err(io)?;
                } else {
                    writeln!(out, "{:>3}  {}  {}", kind.length(), kind, kind.weights()).map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Catalog(args) => run_catalog(args, &config, json, out),
        Command::Verify { index, file } => {
            let text = match file {
                Some(p) => read_file(p)?,
                None => {
                    let mut s = String::new();
                    stdin.read_to_string(&mut s).map_err(io)?;
                    s
                }
            };
            let record: CatalogRecord =
                serde_json::from_str(text.trim()).map_err(|e| malformed(format!("bad record: {e}")))?;
            if record.schema != SCHEMA {
                return Err(malformed(format!("unsupported schema `{}`", record.schema)));
            }
            let report = verify_constraints(&record.to_configuration(), *index);
            if json {
                emit_json(out, &json!({"schema": SCHEMA, "report": report})).map_err(io)?;
            } else {
                for c in &report.clauses {
                    let status = match c.status {
                        ClauseStatus::Pass => "pass",
                        ClauseStatus::Fail => "FAIL",
                        ClauseStatus::RepresentedNotVerified => "not verified",
                    };
                    writeln!(out, "{:<16} {:<13} {}", c.clause, status, c.detail).map_err(io)?;
                }
                writeln!(out, "overall: {}", if report.pass { "pass" } else { "fail" }).map_err(io)?;
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_VERDICT })
        }
        Command::Surgery { replay: path } => {
            let log: MoveLog = serde_json::from_str(&read_file(path)?)
                .map_err(|e| malformed(format!("bad move log: {e}")))?;
            let steps = match replay(&log) {
                Ok(steps) => steps,
                Err(e) => return Err(Failure { code: EXIT_VERDICT, message: e.to_string() }),
            };
            if json {
                emit_json(out, &json!({"schema": SCHEMA, "steps": steps})).map_err(io)?;
            } else {
                for s in &steps {
                    let shapes: Vec<String> =
                        s.pieces.iter().map(|p| format!("g{}{:?}", p.genus, p.lengths())).collect();
                    writeln!(
                        out,
                        "step {:>2}  chi {:>3}  length {:>3}  {}",
                        s.step,
                        s.euler_characteristic,
                        s.boundary_length,
                        shapes.join(" ")
                    )
                    .map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Complex { action } => {
            let (file, cap, coefficients) = match action {
                ComplexAction::Index { file, cap } => (file, cap, Coefficients::Gf2),
                ComplexAction::Homology { file, integral, cap } => {
                    (file, cap, if *integral { Coefficients::Integers } else { Coefficients::Gf2 })
                }
            };
            let k = SimplicialComplex::parse(&read_file(file)?).map_err(malformed)?;
            let profile = reduced_homology_with(&k, coefficients, cap.unwrap_or(config.simplex_cap))
                .map_err(malformed)?;
            match action {
                ComplexAction::Index { .. } => {
                    let index = index_from_profile(&profile);
                    if json {
                        emit_json(out, &json!({"schema": SCHEMA, "homology_index": index.to_string()}))
                            .map_err(io)?;
                    } else {
                        writeln!(out, "{index}").map_err(io)?;
                    }
                }
                ComplexAction::Homology { .. } => {
                    if json {
                        emit_json(out, &json!({"schema": SCHEMA, "homology": profile})).map_err(io)?;
                    } else {
                        for (i, r) in profile.ranks.iter().enumerate() {
                            let torsion = profile
                                .torsion
                                .as_ref()
                                .map(|t| format!("  torsion {:?}", t[i]))
                                .unwrap_or_default();
                            writeln!(out, "degree {:>2}  rank {r}{torsion}", i as i64 - 1).map_err(io)?;
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Farey { from, to, cap } => {
            let a: Slope = from.parse().map_err(malformed)?;
            let b: Slope = to.parse().map_err(malformed)?;
            let cap = cap.unwrap_or(config.distance_cap);
            if cap == 0 {
                return Err(malformed("cap must be at least 1"));
            }
            let d = farey_distance(a, b, cap);
            if json {
                let value = match d {
                    Distance::Exact(d) => json!(d),
                    Distance::ExceedsCap => json!("exceeds cap"),
                };
                emit_json(out, &json!({"schema": SCHEMA, "from": a, "to": b, "cap": cap, "distance": value}))
                    .map_err(io)?;
            } else {
                writeln!(out, "{d}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Barrier { omega_x, omega_y, map, index, cap } => {
            let xs = parse_slope_set(omega_x).map_err(malformed)?;
            let ys = parse_slope_set(omega_y).map_err(malformed)?;
            let m: TorusMap = map.parse().map_err(malformed)?;
            let cap = cap.unwrap_or(config.distance_cap);
            let v = barrier_check(&xs, &ys, &m, *index, cap).map_err(malformed)?;
            if json {
                emit_json(out, &json!({"schema": SCHEMA, "verdict": v})).map_err(io)?;
            } else {
                let verdict = if v.holds { "barrier holds" } else { "inconclusive" };
                write!(out, "{verdict}: distance {} vs threshold {}", v.min_distance, v.threshold)
                    .map_err(io)?;
                if let (false, Some((y, img))) = (v.holds, v.witness) {
                    write!(out, " (witness {y} ~ {img})").map_err(io)?;
                }
                if !v.anosov {
                    write!(out, " [map is not Anosov]").map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
            Ok(if v.holds { EXIT_OK } else { EXIT_VERDICT })
        }
    }
}

fn run_catalog(args: &CatalogArgs, config: &Config, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure { code: EXIT_MALFORMED, message: e.to_string() };
    if args.index > config.max_index {
        return Err(malformed(format!(
            "index {} exceeds the configured maximum {}",
            args.index, config.max_index
        )));
    }
    let opts = CatalogOptions {
        include_closed: args.include_closed,
        non_helical: args.non_helical,
        flag_extras: args.flag_extras,
    };

    if args.configurations {
        let cap = args.disk_cap.unwrap_or(config.disk_cap);
        if cap > config.max_edge_weight {
            return Err(malformed(format!(
                "disk cap {cap} exceeds the maximum edge weight {}",
                config.max_edge_weight
            )));
        }
        for c in enumerate_configurations(args.index, cap, &opts) {
            let record = CatalogRecord::from_configuration(&c, args.index);
            if json {
                emit_json(out, &record).map_err(io)?;
            } else {
                let parts: Vec<String> =
                    c.components.iter().map(|p| format!("{}@{}", p.shape().name(), p.index)).collect();
                writeln!(out, "{}", parts.join(" + ")).map_err(io)?;
            }
        }
        return Ok(EXIT_OK);
    }

    let candidates = enumerate_connected(args.index, &opts);
    if args.labeled {
        for c in &candidates {
            if json {
                emit_json(out, &CatalogRecord::from_candidate(c, None)).map_err(io)?;
            } else {
                let loops: Vec<String> = c.boundary.iter().map(ToString::to_string).collect();
                writeln!(out, "{:<24} {}", c.shape().name(), loops.join(" ")).map_err(io)?;
            }
        }
    } else {
        for (shape, count, rep) in group_types(&candidates) {
            if json {
                emit_json(out, &CatalogRecord::from_candidate(rep, Some(count))).map_err(io)?;
            } else {
                let flags: Vec<String> = rep
                    .flags
                    .iter()
                    .map(|f| serde_json::to_value(f).unwrap().as_str().unwrap().to_string())
                    .collect();
                writeln!(
                    out,
                    "{:<24} length {:>2}  variants {:>3}  {}",
                    shape.name(),
                    rep.boundary_length(),
                    count,
                    flags.join(",")
                )
                .map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}
