//! `kmeis`: command-line front end for the tits-eisenstein library.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical check fails,
//! 2 for usage and configuration errors.

mod config;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use tits_eisenstein::eisenstein::{
    self, check_identities, eisenstein_ray, eisenstein_values, eisenstein_values_at, functional_equation_check, poles,
    uniqueness_system_check,
};
use tits_eisenstein::exactalg::{parse_rational, LaurentPoly};
use tits_eisenstein::oracle::{
    self, brute_eisenstein, coset_rows, default_precision, quotient_ray_check_with, LatticeVertex, Method, CAUCHY_TOL,
};
use tits_eisenstein::report::run_all;
use tits_eisenstein::roots::{
    check_inversion_containment, check_inversion_recursion, delta_re_stream, haar_index_exponent, inversion_set,
    CartanMatrix, WeylWord,
};
use tits_eisenstein::spectral::{constant_term, eigen_exceptions, psi, radial_apply, radial_eigenvalue, RadialKernel};
use tits_eisenstein::tree::{bruhat_label, bruhat_mismatches, build_tree, check_busemann, Tree};
use tits_eisenstein::Error;

use config::{parse_config, Format, Partial, RunConfig};

/// Tolerance on the spread of the brute/ray ratio in `oracle compare`.
const RATIO_TOL: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(name = "kmeis", version, about = "Exact spectral computations on rank-2 Kac-Moody Tits trees")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Default)]
struct GlobalOpts {
    /// key=value file with defaults for the options below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    q: Option<u32>,
    /// off-diagonal Cartan entry is -m
    #[arg(long, global = true)]
    m: Option<u32>,
    /// labeling, 1 or 2
    #[arg(long, global = true)]
    i: Option<u8>,
    #[arg(long, global = true)]
    radius: Option<u32>,
    /// maximal polynomial degree for oracle enumeration
    #[arg(long, visible_alias = "degree", global = true)]
    deg: Option<usize>,
    /// Laurent places for lattice reduction
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// evaluation point, as "p/q"
    #[arg(long, global = true)]
    z0: Option<String>,
    /// write the result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Real roots and inversion sets
    #[command(subcommand)]
    Roots(RootsCmd),
    /// The truncated Tits tree
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Adjacency and radial operators on the tree
    #[command(subcommand)]
    Spectral(SpectralCmd),
    /// Eisenstein series on the ray quotient
    #[command(subcommand)]
    Eisenstein(EisensteinCmd),
    /// Brute-force affine oracle over F_q[t]
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Acceptance suite
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand, Debug)]
enum RootsCmd {
    /// First elements of both chains of Delta^re_i
    Enum {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Inversion set of a reduced word such as 121
    Inversions {
        #[arg(long)]
        word: String,
    },
    /// Haar index exponent of (w_i w_{3-i})^n
    HaarIndex {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum TreeCmd {
    /// Vertices with words, labels and heights
    Build,
    /// Propagated labels against Bruhat-word labels
    VerifyLabels,
}

#[derive(Subcommand, Debug)]
enum SpectralCmd {
    /// T Psi = (qz + 1/z) Psi at interior vertices
    EigenCheck,
    /// Radial kernel on Psi against its shell-recurrence eigenvalue
    Radial {
        /// distance:coefficient pairs, e.g. "1:1" or "0:1,2:1/2"
        #[arg(long, default_value = "1:1")]
        kernel: String,
    },
    /// Horospherical average of Psi
    ConstantTerm {
        #[arg(long, allow_hyphen_values = true)]
        level: i64,
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
}

#[derive(Subcommand, Debug)]
enum EisensteinCmd {
    /// Solve for c1, c2 and report
    Solve,
    /// E(0..=n), symbolic or at --z0
    Values {
        #[arg(long, default_value_t = 10)]
        n: u32,
    },
    /// c2(z) c2(1/(qz)) = 1
    FunctionalEq,
    /// Poles of the continued series
    Poles,
    /// Uniqueness of the solution of the boundary system
    Uniqueness,
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Bottom rows (c, d) of coset representatives up to --deg
    Enumerate,
    /// Partial sums of the brute-force series at sigma_n
    Brute {
        #[arg(long, default_value_t = 0)]
        vertex: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Stratified)]
        method: MethodArg,
    },
    /// Brute sums against the ray model at sigma_0..sigma_n
    Compare {
        #[arg(long, default_value_t = 5)]
        n: u32,
    },
    /// Gamma-orbit collapse of the lattice ball onto the ray
    RayCheck,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum MethodArg {
    Explicit,
    Stratified,
}

#[derive(Subcommand, Debug)]
enum ReportCmd {
    /// Every acceptance criterion
    All,
}

/// What a command produced.
struct Outcome {
    body: String,
    /// Description of a failed check, for stderr.
    failure: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, failure: None }
    }

    fn check(body: String, failure: Option<String>) -> Self {
        Outcome { body, failure }
    }
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientDegree(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn format_of(cfg: &RunConfig, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = cfg.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!("format {f:?} is not available for this command")))
    }
}

fn parse_kernel(s: &str) -> Result<RadialKernel, Failure> {
    let mut pairs = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (n, c) = part
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("kernel entry '{part}' is not distance:coefficient")))?;
        let n: u32 = n.trim().parse().map_err(|_| Failure::Usage(format!("bad distance '{n}'")))?;
        let c = parse_rational(c.trim()).map_err(|e| Failure::Usage(e.to_string()))?;
        pairs.push((n, c));
    }
    Ok(RadialKernel::from_pairs(pairs))
}

fn cartan(cfg: &RunConfig) -> Result<CartanMatrix, Failure> {
    Ok(CartanMatrix::new(cfg.m)?)
}

fn roots_cmd(cmd: &RootsCmd, cfg: &RunConfig) -> CmdResult {
    let cm = cartan(cfg)?;
    match cmd {
        RootsCmd::Enum { count } => {
            let d = delta_re_stream(cfg.i, *count, &cm);
            match format_of(cfg, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => Ok(Outcome::ok(pretty(&json!({ "m": cfg.m, "delta_re": d })))),
                Format::Csv => {
                    let mut out = String::from("k,root\n");
                    for k in -(*count as i64)..*count as i64 {
                        if let Some(r) = d.get(k) {
                            writeln!(out, "{k},\"{}\"", serde_json::to_value(r).expect("root").as_str().unwrap_or(""))
                                .unwrap();
                        }
                    }
                    Ok(Outcome::ok(out))
                }
            }
        }
        RootsCmd::Inversions { word } => {
            let w: WeylWord = word.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            if !w.is_reduced() {
                return Err(Failure::Usage(format!("word {word} is not reduced")));
            }
            format_of(cfg, Format::Json, &[Format::Json])?;
            let set = inversion_set(&w, &cm);
            let recursion = check_inversion_recursion(&w, &cm);
            let containment = check_inversion_containment(&w, &cm);
            let body = pretty(&json!({
                "m": cfg.m,
                "word": w.to_string(),
                "length": w.length(),
                "inversion_set": set,
                "recursion_ok": recursion,
                "containment_ok": containment,
            }));
            let mut bad = Vec::new();
            if set.len() != w.length() {
                bad.push(format!("|S| = {} but length {}", set.len(), w.length()));
            }
            if !recursion {
                bad.push("recursion fails".to_string());
            }
            if !containment {
                bad.push("containment fails".to_string());
            }
            Ok(Outcome::check(body, (!bad.is_empty()).then(|| bad.join("; "))))
        }
        RootsCmd::HaarIndex { n } => {
            format_of(cfg, Format::Json, &[Format::Json])?;
            let e = haar_index_exponent(cfg.i, *n, &cm);
            let body = pretty(&json!({ "m": cfg.m, "i": cfg.i, "n": n, "exponent": e }));
            let failure = (e != 2 * n).then(|| format!("exponent {e}, expected {}", 2 * n));
            Ok(Outcome::check(body, failure))
        }
    }
}

fn tree_of(cfg: &RunConfig) -> Result<Tree, Failure> {
    Ok(build_tree(cfg.q, cfg.radius, cfg.i)?)
}

fn tree_cmd(cmd: &TreeCmd, cfg: &RunConfig) -> CmdResult {
    let tree = tree_of(cfg)?;
    match cmd {
        TreeCmd::Build => match format_of(cfg, Format::Json, &[Format::Json, Format::Csv])? {
            Format::Json => Ok(Outcome::ok(tree.to_json_lines())),
            Format::Csv => {
                let mut out = String::from("id,j,word,i,n,H,down\n");
                for v in tree.vertices() {
                    let down = v.down.map_or(String::new(), |d| d.to_string());
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        v.id,
                        v.j,
                        v.bruhat_word(),
                        v.label.i,
                        v.label.n,
                        v.height(),
                        down
                    )
                    .unwrap();
                }
                Ok(Outcome::ok(out))
            }
        },
        TreeCmd::VerifyLabels => {
            format_of(cfg, Format::Json, &[Format::Json])?;
            let bad = bruhat_mismatches(&tree);
            let busemann = check_busemann(&tree);
            let body = pretty(&json!({
                "q": cfg.q, "radius": cfg.radius, "i": cfg.i,
                "vertices": tree.len(), "mismatches": bad, "busemann": busemann,
            }));
            let mut diff = String::new();
            for &id in bad.iter().take(20) {
                let v = tree.vertex(id);
                writeln!(diff, "vertex {id}: propagated {:?}, from word {:?}", v.label, bruhat_label(&tree, id))
                    .unwrap();
            }
            if !busemann {
                diff.push_str("height steps are not (-1 once, +1 q times)\n");
            }
            Ok(Outcome::check(body, (!diff.is_empty()).then_some(diff)))
        }
    }
}

fn spectral_cmd(cmd: &SpectralCmd, cfg: &RunConfig) -> CmdResult {
    let tree = tree_of(cfg)?;
    format_of(cfg, Format::Json, &[Format::Json])?;
    match cmd {
        SpectralCmd::EigenCheck => {
            let ex = eigen_exceptions(&tree);
            let body = pretty(&json!({
                "q": cfg.q, "radius": cfg.radius, "i": cfg.i,
                "interior": tree.ball_len(cfg.radius - 1), "exceptions": ex,
            }));
            let failure = (!ex.is_empty()).then(|| format!("{} interior vertices fail: {:?}", ex.len(), ex));
            Ok(Outcome::check(body, failure))
        }
        SpectralCmd::Radial { kernel } => {
            let k = parse_kernel(kernel)?;
            let f = psi(&tree);
            let kf = radial_apply(&k, &tree, &f)?;
            let lam = radial_eigenvalue(cfg.q, &k);
            let bad: Vec<usize> = (0..kf.values.len()).filter(|&x| kf.values[x] != &lam * &f.values[x]).collect();
            let body = pretty(&json!({
                "q": cfg.q, "radius": cfg.radius, "kernel": kernel,
                "eigenvalue": lam.to_string(), "checked": kf.values.len(), "mismatches": bad,
            }));
            let failure = (!bad.is_empty()).then(|| format!("{} vertices differ from the eigenvalue", bad.len()));
            Ok(Outcome::check(body, failure))
        }
        SpectralCmd::ConstantTerm { level, depth } => {
            let value = constant_term(&tree, &psi(&tree), *level, *depth)?;
            let expected = LaurentPoly::z_pow(*level);
            let body = pretty(&json!({
                "q": cfg.q, "level": level, "depth": depth,
                "value": value.to_string(), "psi_at_level": expected.to_string(),
            }));
            let failure = (value != expected).then(|| format!("{value} != {expected}"));
            Ok(Outcome::check(body, failure))
        }
    }
}

fn eisenstein_cmd(cmd: &EisensteinCmd, cfg: &RunConfig) -> CmdResult {
    let data = eisenstein_ray(cfg.q)?;
    match cmd {
        EisensteinCmd::Solve => {
            format_of(cfg, Format::Json, &[Format::Json])?;
            let rep = eisenstein::report(&data);
            let failure = (!rep.boundary_ok || !rep.recurrence_ok).then(|| "ray identities fail".to_string());
            Ok(Outcome::check(pretty(&rep), failure))
        }
        EisensteinCmd::Values { n } => {
            let f = format_of(cfg, Format::Csv, &[Format::Json, Format::Csv])?;
            let (values, ok) = match &cfg.z0 {
                Some(z0) => {
                    let v = eisenstein_values_at(&data, *n, z0)?;
                    let strs: Vec<String> = v.values.iter().map(ToString::to_string).collect();
                    (strs, eisenstein::check_identities_at(&data, (*n).max(1), z0)?.ok())
                }
                None => {
                    let v = eisenstein_values(&data, *n);
                    (v.values.iter().map(ToString::to_string).collect(), check_identities(&data, (*n).max(1)).ok())
                }
            };
            let body = match f {
                Format::Csv => {
                    let mut out = String::from("n,value\n");
                    for (k, v) in values.iter().enumerate() {
                        writeln!(out, "{k},{v}").unwrap();
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "q": cfg.q,
                    "z0": cfg.z0.as_ref().map(ToString::to_string),
                    "values": values,
                })),
            };
            Ok(Outcome::check(body, (!ok).then(|| "recurrence or boundary rule fails".to_string())))
        }
        EisensteinCmd::FunctionalEq => {
            format_of(cfg, Format::Json, &[Format::Json])?;
            let ok = functional_equation_check(&data);
            let dual = data.c2.dual_substitute(cfg.q);
            let body = pretty(&json!({
                "q": cfg.q, "c2": data.c2, "c2_dual": dual,
                "product": &data.c2 * &dual, "functional_eq": ok,
            }));
            Ok(Outcome::check(body, (!ok).then(|| "c2(z) c2(1/(qz)) != 1".to_string())))
        }
        EisensteinCmd::Poles => {
            let p = poles(&data);
            let strs: Vec<String> = p.rational.iter().map(ToString::to_string).collect();
            let body = match format_of(cfg, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => pretty(&json!({
                    "q": cfg.q, "denominator": p.denominator.to_string(), "poles": strs,
                })),
                Format::Csv => {
                    let mut out = String::from("pole\n");
                    for s in &strs {
                        writeln!(out, "{s}").unwrap();
                    }
                    out
                }
            };
            Ok(Outcome::ok(body))
        }
        EisensteinCmd::Uniqueness => {
            format_of(cfg, Format::Json, &[Format::Json])?;
            let rep = uniqueness_system_check(cfg.q)?;
            Ok(Outcome::check(pretty(&rep), (!rep.ok()).then(|| format!("{rep:?}"))))
        }
    }
}

fn brute_json(s: &oracle::BruteSum, vertex: u32) -> Json {
    json!({
        "q": s.q,
        "z0": s.z0.to_string(),
        "vertex": format!("sigma_{vertex}"),
        "degree": s.degree(),
        "partials": s.partials.iter().map(|p| oracle::decimal(p, 12)).collect::<Vec<_>>(),
        "value": s.value().to_string(),
        "tail_ratio": s.tail_ratio(),
        "tail_bound": s.tail_bound(),
        "monotone": s.is_monotone(),
        "cauchy": s.is_cauchy(CAUCHY_TOL),
    })
}

fn oracle_cmd(cmd: &OracleCmd, cfg: &RunConfig) -> CmdResult {
    let q = cfg.q;
    let d = cfg.degree;
    match cmd {
        OracleCmd::Enumerate => {
            let rows = coset_rows(q, d)?;
            let body = match format_of(cfg, Format::Csv, &[Format::Json, Format::Csv])? {
                Format::Csv => {
                    let mut out = String::from("c,d\n");
                    for (c, dd) in &rows {
                        writeln!(out, "{c},{dd}").unwrap();
                    }
                    out
                }
                Format::Json => pretty(&json!({
                    "q": q, "degree": d, "count": rows.len(),
                    "rows": rows.iter().map(|(c, dd)| [c.to_string(), dd.to_string()]).collect::<Vec<_>>(),
                })),
            };
            Ok(Outcome::ok(body))
        }
        OracleCmd::Brute { vertex, method } => {
            let method = match method {
                MethodArg::Explicit => Method::Explicit,
                MethodArg::Stratified => Method::Stratified,
            };
            let z0 = cfg.z0_or_default();
            let s = brute_eisenstein(q, &LatticeVertex::sigma(*vertex as i64), &z0, d, method)?;
            let body = match format_of(cfg, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => pretty(&brute_json(&s, *vertex)),
                Format::Csv => {
                    let mut out = String::from("degree,partial\n");
                    for (k, p) in s.partials.iter().enumerate() {
                        writeln!(out, "{k},{}", oracle::decimal(p, 12)).unwrap();
                    }
                    out
                }
            };
            Ok(Outcome::ok(body))
        }
        OracleCmd::Compare { n } => {
            let z0 = cfg.z0_or_default();
            let cmp = oracle::compare(q, &z0, d, *n)?;
            let dev = cmp.max_deviation();
            let body = match format_of(cfg, Format::Csv, &[Format::Json, Format::Csv])? {
                Format::Csv => cmp.to_csv(),
                Format::Json => pretty(&json!({
                    "q": q, "z0": z0.to_string(), "degree": d,
                    "rows": cmp.rows.iter().map(|r| json!({
                        "vertex": format!("sigma_{}", r.n),
                        "brute": oracle::decimal(r.brute.value(), 12),
                        "ray_model": oracle::decimal(&r.ray, 12),
                        "ratio": oracle::decimal(&r.ratio, 12),
                        "tail_bound": r.brute.tail_bound(),
                    })).collect::<Vec<_>>(),
                    "max_deviation": dev,
                    "tolerance": RATIO_TOL,
                })),
            };
            eprintln!("ratio spread {dev:.3e} (tolerance {RATIO_TOL:.0e})");
            let failure = (dev >= RATIO_TOL).then(|| format!("ratio spread {dev:.3e} exceeds {RATIO_TOL:.0e}"));
            Ok(Outcome::check(body, failure))
        }
        OracleCmd::RayCheck => {
            format_of(cfg, Format::Json, &[Format::Json])?;
            let prec = cfg.precision.unwrap_or_else(|| default_precision(d, cfg.radius as usize));
            let rq = quotient_ray_check_with(q, cfg.radius, d, prec)?;
            let failure = (!rq.ok).then(|| format!("multiplicities {:?}, {} classes", rq.multiplicities, rq.classes));
            Ok(Outcome::check(pretty(&rq), failure))
        }
    }
}

fn report_cmd(cmd: &ReportCmd, cfg: &RunConfig) -> CmdResult {
    let ReportCmd::All = cmd;
    let results = run_all();
    let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(ToString::to_string).collect();
    let body = match cfg.format {
        Some(Format::Json) => pretty(&results),
        Some(Format::Csv) => {
            let mut out = String::from("criterion,name,pass,seconds\n");
            for r in &results {
                writeln!(out, "{},{},{},{:.3}", r.id, r.name, r.pass, r.seconds).unwrap();
            }
            out
        }
        None => results.iter().map(|r| format!("{r}\n")).collect(),
    };
    Ok(Outcome::check(body, (!failed.is_empty()).then(|| failed.join("\n"))))
}

fn settings(opts: &GlobalOpts) -> Result<RunConfig, Failure> {
    let file = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => Partial::default(),
    };
    let flags = Partial {
        q: opts.q,
        m: opts.m,
        i: opts.i,
        radius: opts.radius,
        degree: opts.deg,
        precision: opts.precision,
        z0: opts.z0.clone(),
        output: opts.output.clone(),
        format: opts.format,
    };
    RunConfig::resolve(flags.over(file)).map_err(Failure::Usage)
}

fn run(cli: &Cli) -> Result<(RunConfig, Outcome), Failure> {
    let cfg = settings(&cli.opts)?;
    let outcome = match &cli.cmd {
        Command::Roots(c) => roots_cmd(c, &cfg),
        Command::Tree(c) => tree_cmd(c, &cfg),
        Command::Spectral(c) => spectral_cmd(c, &cfg),
        Command::Eisenstein(c) => eisenstein_cmd(c, &cfg),
        Command::Oracle(c) => oracle_cmd(c, &cfg),
        Command::Report(c) => report_cmd(c, &cfg),
    }?;
    Ok((cfg, outcome))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((cfg, outcome)) => {
            let written = match &cfg.output {
                Some(path) => {
                    std::fs::write(path, &outcome.body).map_err(|e| format!("cannot write {}: {e}", path.display()))
                }
                None => {
                    print!("{}", outcome.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match outcome.failure {
                Some(diff) => {
                    eprintln!("check failed:\n{diff}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
