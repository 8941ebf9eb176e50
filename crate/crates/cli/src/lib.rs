//! `pest-lab` command line. [`run`] parses arguments, dispatches one
//! subcommand and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; for `check`, `search` and `verify` a positive result |
//! | 1 | negative verdict, no partner, or no fidelity hit |
//! | 2 | usage or validation error |
//! | 3 | internal error |

pub mod input;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::{json, Value};

use pest_lab::boolfn::{gold_function, inner_product_bent};
use pest_lab::constructions::ConstructionError;
use pest_lab::oracle::{fidelity_at, DEFAULT_TOLERANCE};
use pest_lab::pestcheck::PestStatus;
use pest_lab::{
    bent_lift_certificate, check_pest, classify, find_pest_partners, semibent_lift_certificate,
    sweep_candidate_times, trace_orthogonal_basis, wht, BooleanFunction, Classification,
    ConnectionSet, EdgeStatePair, FidelityReport, FieldSpec, GroupElement, LiftCertificate,
    LiftOptions, PestCertificate,
};

use input::{parse_elements, parse_support, parse_time, parse_truth_table};

pub const SCHEMA: &str = "pest-lab/1";

#[derive(Parser, Debug)]
#[command(
    name = "pest-lab",
    version,
    about = "Perfect edge state transfer on cubelike graphs"
)]
pub struct Cli {
    /// Emit JSON instead of a table
    #[arg(long, global = true)]
    pub json: bool,
    /// Dimension m of F_2^m
    #[arg(long, global = true)]
    pub m: Option<u32>,
    /// Field modulus as a hex mask including the leading term, e.g. 0xd
    #[arg(long, global = true, value_parser = parse_hex)]
    pub modulus: Option<u32>,
    /// Fidelity tolerance for numeric checks
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Treat pairs whose endpoints are not edges as errors
    #[arg(long, global = true)]
    pub require_edges: bool,
    /// Run the lift constructions below their minimum k
    #[arg(long, global = true)]
    pub unsafe_small_k: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues lambda_x of Cay(F_2^m, S) in index order
    Spectrum {
        #[arg(long)]
        support: PathBuf,
    },
    /// Walsh-Hadamard spectrum and classification of a Boolean function
    Wht(WhtArgs),
    /// Trace-orthogonal basis of GF(2^m)
    Basis,
    /// Decide perfect edge state transfer for one pair
    Check {
        #[arg(long)]
        support: PathBuf,
        /// a,b,c,d for the transfer e_a - e_b -> e_c - e_d
        #[arg(long)]
        pair: String,
    },
    /// All targets (c, d) reached from the edge state e_a - e_b
    Search {
        #[arg(long)]
        support: PathBuf,
        /// a,b
        #[arg(long)]
        edge: String,
    },
    /// Numeric fidelity at one time or over all candidate times
    Verify {
        #[arg(long)]
        support: PathBuf,
        #[arg(long)]
        pair: String,
        /// Time as a multiple of pi, e.g. 1/2pi
        #[arg(long, conflicts_with = "sweep")]
        time: Option<String>,
        /// Sweep the candidate times (the default)
        #[arg(long)]
        sweep: bool,
    },
    /// Lift a bent function on F_2^(2k) and certify the transfer
    LiftBent {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        source: BentSource,
    },
    /// Lift the Gold function Tr(x^(2^e+1)) on GF(2^m) and certify the transfer
    LiftSemibent {
        #[arg(long)]
        e: u32,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct WhtArgs {
    #[arg(long)]
    truth_table: Option<PathBuf>,
    /// Indicator function of a connection-set file
    #[arg(long)]
    support: Option<PathBuf>,
    /// Gold exponent e for Tr(x^(2^e+1)), needs odd --m
    #[arg(long)]
    gold: Option<u32>,
    /// MASK[,AFFINE] for x . rev(y) + MASK . z + AFFINE, needs even --m
    #[arg(long)]
    inner_product: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct BentSource {
    #[arg(long)]
    truth_table: Option<PathBuf>,
    /// MASK[,AFFINE] for x . rev(y) + MASK . z + AFFINE
    #[arg(long)]
    inner_product: Option<String>,
}

fn parse_hex(text: &str) -> Result<u32, String> {
    let digits = text
        .strip_prefix("0x")
        .or_else(|| text.strip_prefix("0X"))
        .unwrap_or(text);
    u32::from_str_radix(digits, 16).map_err(|e| format!("{text:?} is not a hex mask: {e}"))
}

/// Failure with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `args` (including the program name), runs the command, and
/// returns the exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let mut ctx = Context {
        cli: &cli,
        out,
        err,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| ctx.dispatch())).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure::Internal(msg))
    });
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(ctx.err, "internal error: {msg}");
            3
        }
    }
}

struct Context<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn bin(z: GroupElement, m: u32) -> String {
    z.to_binary(m)
}

fn ratio(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn table_string(f: &BooleanFunction) -> String {
    f.table()
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect()
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pair_json(pair: &EdgeStatePair, m: u32) -> Value {
    json!({
        "a": bin(pair.a, m),
        "b": bin(pair.b, m),
        "c": bin(pair.c, m),
        "d": bin(pair.d, m),
    })
}

fn certificate_json(cert: &PestCertificate, set: &ConnectionSet) -> Value {
    let m = cert.m;
    let spectrum = set.spectrum();
    let (status, reason) = match cert.status {
        PestStatus::Positive => ("Positive", Value::Null),
        PestStatus::Negative(r) => ("Negative", json!(r.code())),
    };
    let gaps = match (&cert.partition, cert.x0) {
        (Some(p), Some(x0)) => {
            let base = spectrum.get(x0);
            let entry = |x: &GroupElement, side: &str| {
                let gap = base - spectrum.get(*x);
                let v2 = pest_lab::v2(gap);
                json!({
                    "x": bin(*x, m),
                    "side": side,
                    "lambda": spectrum.get(*x),
                    "gap": gap,
                    "v2": v2.finite(),
                })
            };
            p.omega_plus
                .iter()
                .map(|x| entry(x, "plus"))
                .chain(p.omega_minus.iter().map(|x| entry(x, "minus")))
                .collect()
        }
        _ => Vec::new(),
    };
    json!({
        "m": m,
        "pair": pair_json(&cert.pair, m),
        "status": status,
        "reason": reason,
        "x0": cert.x0.map(|x| bin(x, m)),
        "omega_plus": cert.partition.as_ref().map(|p| p.omega_plus.iter().map(|x| bin(*x, m)).collect::<Vec<_>>()),
        "omega_minus": cert.partition.as_ref().map(|p| p.omega_minus.iter().map(|x| bin(*x, m)).collect::<Vec<_>>()),
        "gaps": gaps,
        "modulus": cert.modulus,
        "rho": cert.rho,
        "ell": cert.ell,
        "t_min_pi": cert.t_min_pi.map(ratio),
        "connected": cert.connected,
        "ab_is_edge": cert.ab_is_edge,
        "cd_is_edge": cert.cd_is_edge,
    })
}

fn report_json(r: &FidelityReport) -> Value {
    json!({
        "t": r.t,
        "t_pi": r.t_pi.map(ratio),
        "fidelity": r.fidelity,
        "amplitude": { "re": r.amplitude.re, "im": r.amplitude.im },
        "hit": r.is_hit(),
    })
}

fn support_lines(set: &ConnectionSet) -> Vec<String> {
    set.members().iter().map(|z| bin(*z, set.m())).collect()
}

/// `MASK[,AFFINE]` with MASK binary or hex.
fn parse_inner_product(text: &str, m: u32) -> Result<(GroupElement, bool), Failure> {
    let (mask, affine) = match text.split_once(',') {
        Some((mask, affine)) => (mask, affine.trim()),
        None => (text, "0"),
    };
    let mask = input::parse_element(mask, m)?;
    let affine = match affine {
        "0" => false,
        "1" => true,
        other => return Err(usage(format!("affine bit must be 0 or 1, got {other:?}"))),
    };
    Ok((mask, affine))
}

impl Context<'_> {
    fn warn(&mut self, msg: impl AsRef<str>) {
        let _ = writeln!(self.err, "warning: {}", msg.as_ref());
    }

    fn emit_json(&mut self, command: &str, mut body: Value) -> Result<(), Failure> {
        let obj = body.as_object_mut().expect("object body");
        obj.insert("schema".into(), json!(SCHEMA));
        obj.insert("command".into(), json!(command));
        let text =
            serde_json::to_string_pretty(&body).map_err(|e| Failure::Internal(e.to_string()))?;
        writeln!(self.out, "{text}").map_err(|e| Failure::Internal(e.to_string()))
    }

    fn line(&mut self, text: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", text.as_ref()).map_err(|e| Failure::Internal(e.to_string()))
    }

    fn load_support(&mut self, path: &Path) -> Result<ConnectionSet, Failure> {
        let parsed = parse_support(&read(path)?, self.cli.m)?;
        for w in &parsed.warnings {
            self.warn(w);
        }
        if !parsed.set.is_connected() {
            self.warn(format!(
                "S spans a proper subspace (rank {} < m = {}); the graph is disconnected",
                parsed.set.rank(),
                parsed.set.m()
            ));
        }
        Ok(parsed.set)
    }

    fn load_pair(&mut self, set: &ConnectionSet, text: &str) -> Result<EdgeStatePair, Failure> {
        let m = set.m();
        let v = parse_elements(text, m, 4)?;
        let pair = EdgeStatePair::new(v[0], v[1], v[2], v[3])?;
        self.check_edges(set, &[(pair.a, pair.b), (pair.c, pair.d)])?;
        Ok(pair)
    }

    fn check_edges(
        &mut self,
        set: &ConnectionSet,
        edges: &[(GroupElement, GroupElement)],
    ) -> Result<(), Failure> {
        let m = set.m();
        for &(u, v) in edges {
            if !set.is_edge(u, v) {
                let msg = format!("({}, {}) is not an edge", bin(u, m), bin(v, m));
                if self.cli.require_edges {
                    return Err(usage(msg));
                }
                self.warn(msg);
            }
        }
        Ok(())
    }

    fn field(&self, m: u32) -> Result<FieldSpec, Failure> {
        Ok(FieldSpec::new(m, self.cli.modulus)?)
    }

    fn require_m(&self) -> Result<u32, Failure> {
        self.cli.m.ok_or_else(|| usage("--m is required"))
    }

    fn dispatch(&mut self) -> Outcome {
        match &self.cli.command {
            Command::Spectrum { support } => self.spectrum(support),
            Command::Wht(args) => self.wht(args),
            Command::Basis => self.basis(),
            Command::Check { support, pair } => self.check(support, pair),
            Command::Search { support, edge } => self.search(support, edge),
            Command::Verify {
                support,
                pair,
                time,
                ..
            } => self.verify(support, pair, time.as_deref()),
            Command::LiftBent { k, source } => self.lift_bent(*k, source),
            Command::LiftSemibent { e } => self.lift_semibent(*e),
        }
    }

    fn spectrum(&mut self, path: &Path) -> Outcome {
        let set = self.load_support(path)?;
        let m = set.m();
        let spectrum = set.spectrum();
        if self.cli.json {
            let entries: Vec<Value> = spectrum
                .iter()
                .map(|(x, l)| json!({ "x": bin(x, m), "lambda": l }))
                .collect();
            self.emit_json(
                "spectrum",
                json!({
                    "m": m,
                    "support": support_lines(&set),
                    "connected": set.is_connected(),
                    "spectrum": entries,
                }),
            )?;
        } else {
            self.line(format!("{:>w$}  lambda", "x", w = m as usize))?;
            for (x, l) in spectrum.iter() {
                self.line(format!("{}  {l:>6}", bin(x, m)))?;
            }
        }
        Ok(0)
    }

    fn wht(&mut self, args: &WhtArgs) -> Outcome {
        let (f, source) = if let Some(path) = &args.truth_table {
            (
                parse_truth_table(&read(path)?, self.cli.m)?,
                "truth-table".to_string(),
            )
        } else if let Some(path) = &args.support {
            let set = self.load_support(path)?;
            (set.indicator(), "support".to_string())
        } else if let Some(e) = args.gold {
            let field = self.field(self.require_m()?)?;
            let basis = trace_orthogonal_basis(&field)?;
            (gold_function(&field, &basis, e)?, format!("gold e={e}"))
        } else if let Some(params) = &args.inner_product {
            let m = self.require_m()?;
            if m % 2 != 0 {
                return Err(usage(format!(
                    "inner-product functions need even m, got {m}"
                )));
            }
            let (mask, affine) = parse_inner_product(params, m)?;
            (
                inner_product_bent(m / 2, mask, affine)?,
                "inner-product".to_string(),
            )
        } else {
            unreachable!("clap enforces one source")
        };
        let m = f.m();
        let spectrum = wht(&f);
        let class = classify(&f);
        let dual = match &class {
            Classification::Bent { dual } => Some(table_string(dual)),
            _ => None,
        };
        let amplitude = match class {
            Classification::Plateaued { amplitude } => Some(amplitude),
            _ => None,
        };
        if self.cli.json {
            let values: Vec<Value> = spectrum
                .values()
                .iter()
                .enumerate()
                .map(|(a, v)| json!({ "a": bin(GroupElement(a as u32), m), "value": v }))
                .collect();
            let frequencies: Vec<Value> = spectrum
                .frequencies()
                .into_iter()
                .map(|(v, n)| json!({ "value": v, "count": n }))
                .collect();
            self.emit_json(
                "wht",
                json!({
                    "m": m,
                    "source": source,
                    "truth_table": table_string(&f),
                    "classification": class.name(),
                    "amplitude": amplitude,
                    "dual": dual,
                    "walsh": values,
                    "frequencies": frequencies,
                }),
            )?;
        } else {
            self.line(format!("classification: {}", class.name()))?;
            if let Some(dual) = dual {
                self.line(format!("dual: {dual}"))?;
            }
            for (a, v) in spectrum.values().iter().enumerate() {
                self.line(format!("{}  {v:>6}", bin(GroupElement(a as u32), m)))?;
            }
        }
        Ok(0)
    }

    fn basis(&mut self) -> Outcome {
        let field = self.field(self.require_m()?)?;
        let basis = trace_orthogonal_basis(&field)?;
        let m = field.m();
        let primitive = field.is_primitive();
        let width = (m as usize).div_ceil(4);
        let entries: Vec<(String, Option<u64>)> = basis
            .alphas()
            .iter()
            .map(|&a| (format!("0x{:0width$x}", a.bits()), field.discrete_log(a)))
            .collect();
        if self.cli.json {
            let list: Vec<Value> = entries
                .iter()
                .map(|(hex, power)| json!({ "hex": hex, "power": power }))
                .collect();
            self.emit_json(
                "basis",
                json!({
                    "m": m,
                    "modulus": format!("0x{:x}", field.modulus()),
                    "primitive": primitive,
                    "basis": list,
                }),
            )?;
        } else {
            self.line(format!(
                "GF(2^{m}) mod 0x{:x}{}",
                field.modulus(),
                if primitive { " (primitive)" } else { "" }
            ))?;
            for (i, (hex, power)) in entries.iter().enumerate() {
                let power = power.map(|p| format!("  = x^{p}")).unwrap_or_default();
                self.line(format!("alpha_{} = {hex}{power}", i + 1))?;
            }
        }
        Ok(0)
    }

    fn check(&mut self, path: &Path, pair: &str) -> Outcome {
        let set = self.load_support(path)?;
        let pair = self.load_pair(&set, pair)?;
        let cert = check_pest(&set, &pair)?;
        if self.cli.json {
            self.emit_json("check", certificate_json(&cert, &set))?;
        } else {
            match (cert.status, cert.t_min_pi) {
                (PestStatus::Positive, Some(t)) => self.line(format!(
                    "Positive: rho = {}, M = {}, t_min = {} pi",
                    cert.rho.unwrap_or_default(),
                    cert.modulus.unwrap_or_default(),
                    ratio(t)
                ))?,
                (PestStatus::Negative(r), _) => self.line(format!("Negative: {r}"))?,
                (PestStatus::Positive, None) => {
                    return Err(Failure::Internal(
                        "positive certificate without a time".into(),
                    ))
                }
            }
        }
        Ok(if cert.is_positive() { 0 } else { 1 })
    }

    fn search(&mut self, path: &Path, edge: &str) -> Outcome {
        let set = self.load_support(path)?;
        let m = set.m();
        let v = parse_elements(edge, m, 2)?;
        if v[0] == v[1] {
            return Err(usage("edge endpoints must differ"));
        }
        self.check_edges(&set, &[(v[0], v[1])])?;
        let partners = find_pest_partners(&set, v[0], v[1])?;
        if self.cli.json {
            let list: Vec<Value> = partners
                .iter()
                .map(|(c, d, cert)| {
                    json!({
                        "c": bin(*c, m),
                        "d": bin(*d, m),
                        "rho": cert.rho,
                        "t_min_pi": cert.t_min_pi.map(ratio),
                        "cd_is_edge": cert.cd_is_edge,
                    })
                })
                .collect();
            self.emit_json(
                "search",
                json!({
                    "m": m,
                    "edge": { "a": bin(v[0], m), "b": bin(v[1], m) },
                    "partners": list,
                }),
            )?;
        } else if partners.is_empty() {
            self.line("no partners")?;
        } else {
            for (c, d, cert) in &partners {
                let t = cert.t_min_pi.map(ratio).unwrap_or_default();
                self.line(format!("{} {}  t_min = {t} pi", bin(*c, m), bin(*d, m)))?;
            }
        }
        Ok(if partners.is_empty() { 1 } else { 0 })
    }

    fn verify(&mut self, path: &Path, pair: &str, time: Option<&str>) -> Outcome {
        let tol = self.cli.tolerance;
        if !(tol > 0.0 && tol <= 1e-3) {
            return Err(usage(format!("tolerance {tol} outside (0, 1e-3]")));
        }
        let set = self.load_support(path)?;
        let pair = self.load_pair(&set, pair)?;
        let reports = match time {
            Some(text) => vec![fidelity_at(&set.spectrum(), &pair, parse_time(text)?, tol)],
            None => {
                let sweep = sweep_candidate_times(&set, &pair, tol)?;
                if !sweep.premise_holds && !sweep.grid_hits.is_empty() {
                    self.warn("grid scan found hits outside the candidate times");
                }
                let mut all = sweep.hits;
                all.extend(sweep.grid_hits);
                if all.is_empty() {
                    all.push(sweep.best);
                }
                all
            }
        };
        let hit = reports.iter().any(FidelityReport::is_hit);
        if self.cli.json {
            let list: Vec<Value> = reports.iter().map(report_json).collect();
            self.emit_json(
                "verify",
                json!({
                    "m": set.m(),
                    "pair": pair_json(&pair, set.m()),
                    "tolerance": tol,
                    "hit": hit,
                    "reports": list,
                }),
            )?;
        } else {
            for r in &reports {
                let t = r
                    .t_pi
                    .map(|q| format!("{} pi", ratio(q)))
                    .unwrap_or(format!("{}", r.t));
                let mark = if r.is_hit() { "hit" } else { "miss" };
                self.line(format!("t = {t}  fidelity = {:.12}  {mark}", r.fidelity))?;
            }
        }
        Ok(if hit { 0 } else { 1 })
    }

    fn options(&self) -> LiftOptions {
        LiftOptions {
            allow_small_k: self.cli.unsafe_small_k,
        }
    }

    fn lift_bent(&mut self, k: u32, source: &BentSource) -> Outcome {
        let m = 2 * k;
        if k == 0 || m + 1 > pest_lab::MAX_M {
            return Err(usage(format!("k = {k} out of range")));
        }
        let f = if let Some(path) = &source.truth_table {
            parse_truth_table(&read(path)?, Some(m))?
        } else if let Some(params) = &source.inner_product {
            let (mask, affine) = parse_inner_product(params, m)?;
            inner_product_bent(k, mask, affine)?
        } else {
            unreachable!("clap enforces one source")
        };
        let cert = bent_lift_certificate(&f, self.options()).map_err(construction_failure)?;
        self.emit_lift("lift-bent", &cert, json!({ "k": k }))
    }

    fn lift_semibent(&mut self, e: u32) -> Outcome {
        let field = self.field(self.require_m()?)?;
        let basis = trace_orthogonal_basis(&field)?;
        let cert = semibent_lift_certificate(&field, &basis, e, self.options())
            .map_err(construction_failure)?;
        let params = json!({
            "m": field.m(),
            "e": e,
            "modulus": format!("0x{:x}", field.modulus()),
        });
        self.emit_lift("lift-semibent", &cert, params)
    }

    fn emit_lift(&mut self, command: &str, cert: &LiftCertificate, params: Value) -> Outcome {
        let lifted = &cert.lifted;
        let m = lifted.m();
        let lines = support_lines(lifted);
        if self.cli.json {
            self.emit_json(
                command,
                json!({
                    "kind": format!("{:?}", cert.kind),
                    "parameters": params,
                    "base_truth_table": table_string(&cert.base),
                    "m": m,
                    "support": lines,
                    "support_file": lines.iter().map(|l| format!("{l}\n")).collect::<String>(),
                    "pair": pair_json(&cert.pair, m),
                    "t_pi": ratio(cert.t_pi),
                    "certificate": certificate_json(&cert.pest, lifted),
                }),
            )?;
        } else {
            self.line(format!(
                "# {:?}, transfer {} -> {} at {} pi",
                cert.kind,
                format_args!("({}, {})", bin(cert.pair.a, m), bin(cert.pair.b, m)),
                format_args!("({}, {})", bin(cert.pair.c, m), bin(cert.pair.d, m)),
                ratio(cert.t_pi)
            ))?;
            for l in &lines {
                self.line(l)?;
            }
        }
        Ok(0)
    }
}

fn construction_failure(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::CertificateMismatch(_) => Failure::Internal(e.to_string()),
        ConstructionError::SmallK { .. } => {
            usage(format!("{e}; --unsafe-small-k lets the checker decide"))
        }
        other => usage(other.to_string()),
    }
}
