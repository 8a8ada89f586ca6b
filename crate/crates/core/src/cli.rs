//! The `mec` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::{
    generator_matrix, mds_combinatorial, mds_matrix, CodeSpec, CodeSpecJson, MatrixMode, Verdict, Witness,
};
use crate::constructions::{audit_code, build_max_code_in, mec_bound};
use crate::curve::{find_curve, make_curve, Curve, SearchStrategy};
use crate::field::{make_field, Field};
use crate::group::{index2_subgroups, GroupTable};
use crate::places::{divisor_sum, find_degree3_avoid, find_degree3_trace};

#[derive(Parser, Debug)]
#[command(name = "mec", version, about = "Maximum-length MDS elliptic codes")]
pub struct Cli {
    /// Worker threads for minors and searches (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximal length from the bound table.
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u64,
        /// Require Supp(G) to be rational.
        #[arg(long)]
        restricted: bool,
    },
    #[command(subcommand)]
    Curve(CurveCmd),
    #[command(subcommand)]
    Place(PlaceCmd),
    #[command(subcommand)]
    Code(CodeCmd),
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub a: u32,
    /// Monic modulus over GF(p), constant term first, e.g. `3,16,1`.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// a1,a2,a3,a4,a6; each coefficient as `c0:c1:...` over GF(p).
    #[arg(long, value_delimiter = ',', required = true)]
    pub coeffs: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// Point count, Hasse check, group structure and generators.
    Info(CurveArgs),
    /// Find a curve with a given number of points.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "target-n")]
        target_n: u64,
        #[arg(long, value_enum, default_value_t = Strategy::Family)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Family,
    Exhaustive,
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaceMethod {
    Trace,
    Avoid,
}

#[derive(Subcommand, Debug)]
pub enum PlaceCmd {
    /// A degree-3 place whose points sum to O.
    Deg3 {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum)]
        method: PlaceMethod,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CodeCmd {
    /// Build a maximum-length MDS code; writes the spec and its generator matrix.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        restricted: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Matrix CSV path; defaults to the spec path with a `.csv` extension.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Decide whether a code is MDS.
    Verify {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        /// combinatorial | minors | sampled:COUNT | distance
        #[arg(long, default_value = "combinatorial")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of minors for `minors`.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Structural facts about a code.
    Audit {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
}

type CliResult = Result<(Value, i32), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn make_field_args(f: &FieldArgs) -> Result<Field, String> {
    make_field(f.p, f.a, f.modulus.clone()).map_err(err)
}

fn make_curve_args(c: &CurveArgs) -> Result<Curve, String> {
    let f = make_field_args(&c.field)?;
    // short digit lists are padded with zeros, so `1` means `1:0` over GF(p^2)
    let pad = |s: &String| {
        let mut d: Vec<&str> = s.split(':').collect();
        d.resize((f.degree_over_prime() as usize).max(d.len()), "0");
        f.parse_rendered(&d.join(":"))
    };
    let coeffs = c.coeffs.iter().map(pad).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let coeffs: [_; 5] = coeffs.try_into().map_err(|_| "need five coefficients".to_string())?;
    make_curve(&f, coeffs).map_err(err)
}

fn read_spec(path: &Path) -> Result<CodeSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let j: CodeSpecJson = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    CodeSpec::from_json(&j).map_err(err)
}

fn parse_mode(mode: &str, seed: u64) -> Result<Option<MatrixMode>, String> {
    Ok(match mode {
        "combinatorial" => None,
        "minors" => Some(MatrixMode::ExhaustiveMinors),
        "distance" => Some(MatrixMode::ExhaustiveDistance),
        m => match m.strip_prefix("sampled:") {
            Some(c) => Some(MatrixMode::SampledMinors { count: c.parse().map_err(|_| format!("bad sample count {c}"))?, seed }),
            None => return Err(format!("unknown mode {m}")),
        },
    })
}

fn curve_info(curve: &Curve) -> CliResult {
    let q = curve.q();
    let n = curve.count_points();
    let t = q as i64 + 1 - n as i64;
    let mut out = json!({
        "curve": curve.to_json(),
        "N": n,
        "trace": t,
        "hasse_ok": (t * t) as u64 <= 4 * q,
    });
    if let Ok(table) = GroupTable::from_curve(curve) {
        let (d, e) = table.invariants();
        out["structure"] = json!([d, e]);
        out["generators"] = json!({
            "g1": curve.point_to_json(table.point(table.g1())),
            "g2": curve.point_to_json(table.point(table.g2())),
        });
        out["two_torsion"] = json!(table.two_torsion().len());
        out["index2_subgroups"] = json!(index2_subgroups(&table));
    }
    Ok((out, 0))
}

fn verify(spec: &CodeSpec, mode: &str, seed: u64, budget: Option<u128>) -> CliResult {
    let parsed = parse_mode(mode, seed)?;
    let verdict = match parsed {
        None => {
            let table = GroupTable::from_curve(&spec.curve).map_err(err)?;
            let v = mds_combinatorial(spec, &table).map_err(err)?;
            if let Verdict::NotMds(Witness::Subset(s)) = &v {
                let target = table.code(&divisor_sum(&spec.curve, &spec.g).map_err(err)?).map_err(err)?;
                let sum = s.iter().try_fold(table.identity(), |acc, &i| table.code(&spec.points[i]).map(|c| table.add(acc, c)));
                if sum.map_err(err)? != target {
                    return Err("witness does not sum to sum(G)".into());
                }
            }
            v
        }
        Some(m) => {
            let g = generator_matrix(spec).map_err(err)?;
            mds_matrix(&g, m, budget).map_err(err)?
        }
    };
    let (n, k) = (spec.n(), spec.k());
    let mut out = json!({ "mode": mode, "n": n, "k": k });
    if let Some(MatrixMode::SampledMinors { count, seed }) = parsed {
        out["samples"] = json!(count);
        out["seed"] = json!(seed);
    }
    let code = match verdict {
        Verdict::Mds => {
            out["verdict"] = json!("MDS");
            out["d"] = json!(n - k + 1);
            0
        }
        Verdict::NotMds(w) => {
            out["verdict"] = json!("NotMDS");
            out["witness"] = match w {
                Witness::Subset(s) => json!({
                    "positions": s,
                    "points": s.iter().map(|&i| spec.curve.point_to_json(&spec.points[i])).collect::<Vec<_>>(),
                }),
                Witness::Codeword { message, weight } => json!({
                    "message": message.iter().map(|e| spec.curve.field().elem_to_json(e)).collect::<Vec<_>>(),
                    "weight": weight,
                }),
            };
            2
        }
    };
    if spec.is_degenerate() {
        out["degenerate"] = json!(true);
    }
    Ok((out, code))
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Bound { q, k, restricted } => {
            let b = mec_bound(q, k, restricted).map_err(err)?;
            Ok((serde_json::to_value(b).map_err(err)?, 0))
        }
        Command::Curve(CurveCmd::Info(c)) => curve_info(&make_curve_args(&c)?),
        Command::Curve(CurveCmd::Search { field, target_n, strategy, seed, budget }) => {
            let f = make_field_args(&field)?;
            let s = match strategy {
                Strategy::Family => SearchStrategy::Family,
                Strategy::Exhaustive => SearchStrategy::Exhaustive,
                Strategy::Random => SearchStrategy::Random { seed, budget },
            };
            let c = find_curve(&f, target_n, s).map_err(err)?;
            Ok((json!({ "curve": c.to_json(), "N": target_n, "strategy": s }), 0))
        }
        Command::Place(PlaceCmd::Deg3 { curve, method, seed }) => {
            let e = make_curve_args(&curve)?;
            let (place, b) = match method {
                PlaceMethod::Avoid => {
                    let (r, b) = find_degree3_avoid(&e).map_err(err)?;
                    (r, Some(b))
                }
                PlaceMethod::Trace => (find_degree3_trace(&e, seed).map_err(err)?, None),
            };
            let sum = place.sum(&e).map_err(err)?;
            let mut out = json!({
                "place": place.to_json(&e, b.as_ref()),
                "method": if method == PlaceMethod::Avoid { "avoid" } else { "trace" },
                "sum": e.point_to_json(&sum),
            });
            if method == PlaceMethod::Trace {
                out["seed"] = json!(seed);
            }
            Ok((out, 0))
        }
        Command::Code(CodeCmd::Construct { field, k, restricted, seed, output, matrix }) => {
            let spec = build_max_code_in(&make_field_args(&field)?, k, restricted, seed).map_err(err)?;
            let g = generator_matrix(&spec).map_err(err)?;
            let text = serde_json::to_string_pretty(&spec.to_json()).map_err(err)? + "\n";
            std::fs::write(&output, text).map_err(|e| format!("{}: {e}", output.display()))?;
            let matrix = matrix.unwrap_or_else(|| output.with_extension("csv"));
            std::fs::write(&matrix, g.to_csv(&spec.provenance)).map_err(|e| format!("{}: {e}", matrix.display()))?;
            Ok((
                json!({
                    "spec": output.display().to_string(),
                    "matrix": matrix.display().to_string(),
                    "n": spec.n(),
                    "k": spec.k(),
                    "provenance": spec.provenance,
                }),
                0,
            ))
        }
        Command::Code(CodeCmd::Verify { input, mode, seed, budget }) => verify(&read_spec(&input)?, &mode, seed, budget),
        Command::Code(CodeCmd::Audit { input }) => {
            let spec = read_spec(&input)?;
            let table = GroupTable::from_curve(&spec.curve).map_err(err)?;
            let a = audit_code(&spec, &table).map_err(err)?;
            Ok((serde_json::to_value(a).map_err(err)?, 0))
        }
    }
}

/// Run the command line; returns the process exit code (0 ok or MDS,
/// 2 not MDS, 1 error).
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, errw: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(errw, "{e}") };
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(cli) {
        Ok((v, code)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            code
        }
        Err(e) => {
            let _ = writeln!(errw, "error: {e}");
            1
        }
    }
}
