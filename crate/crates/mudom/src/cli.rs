//! Command-line front end. Every command prints one JSON document (or CSV
//! for `slice --format csv`) and maps its outcome to an exit code:
//! 0 ok, 2 violation (a check ran and failed), 1 error (bad input or a
//! precondition failure).
//!
//! Point and matrix arguments are file paths, `-` for stdin, or inline JSON
//! when the argument starts with `[`.

use std::ffi::OsString;
use std::io::Read as _;

use clap::{Parser, Subcommand, ValueEnum};

use crate::boundary::{fiber_boundary_check, in_K, in_K1, k1_relation_deviation, k_bridge_check, k_relation_deviation, unitary_image_checks};
use crate::core_types::json::{
    complex_from_value, complex_json, complexes_json, config_json, matrix3_from_value, parse_value, point5_from_value,
    point7_from_value, verdict_json, Json,
};
use crate::core_types::sampling::sub_seed;
use crate::core_types::{random_contraction, Complex, Point2, Point3, Point5, Point7, ScanConfig, State, Verdict};
use crate::domain312::{bridge_in_G, bridge_in_Gamma, in_G_312, in_Gamma_312};
use crate::domain333::{
    contractive_preimage, in_G_333, in_G_333_fiberwise, in_Gamma_333, in_Gamma_333_fiberwise, mu_E333, pi333, Fiber,
};
use crate::error::{MudomError, Result};
use crate::geometry::{separate, CertificateData};
use crate::schwarz::{schwarz_necessary_312, schwarz_necessary_333, Quantity};
use crate::tetrablock::{in_G_bidisc, in_G_tetra, in_Gamma_bidisc, in_Gamma_tetra};

#[derive(Parser, Debug)]
#[command(name = "mudom", version, about = "Membership oracles and certificates for the mu-synthesis domains")]
pub struct Cli {
    /// Torus grid size per axis (torus_n).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Numerical tolerance (tol); the boundary band is raised to match if smaller.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership verdict for a point.
    Membership {
        #[arg(value_enum)]
        domain: Domain,
        point: String,
        /// Test the closed domain instead of the open one.
        #[arg(long)]
        closure: bool,
    },
    /// Structured singular value of a 3×3 matrix.
    Mu { matrix: String },
    /// Run every equivalent oracle and report agreement.
    Crosscheck {
        point: Option<String>,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.9)]
        norm_bound: f64,
        #[arg(long)]
        closure: bool,
    },
    /// Distinguished-boundary candidate checks.
    Boundary {
        #[arg(long, value_enum)]
        set: BoundarySet,
        point: Option<String>,
        #[arg(long)]
        unitaries: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Schwarz-lemma necessary conditions.
    Schwarz {
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
        point: String,
        #[arg(long, value_enum, default_value = "e333")]
        domain: SchwarzDomain,
    },
    /// Separating function for a point outside the closed C⁷ domain.
    Separate { point: String },
    /// Verdict states over a 2-D affine slice.
    Slice {
        #[arg(long)]
        plane: String,
        #[arg(long, default_value_t = 21)]
        res: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: SliceFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    E333,
    E312,
    Tetra,
    Bidisc,
}

impl Domain {
    pub fn dim(self) -> usize {
        match self {
            Domain::E333 => 7,
            Domain::E312 => 5,
            Domain::Tetra => 3,
            Domain::Bidisc => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Domain::E333 => "e333",
            Domain::E312 => "e312",
            Domain::Tetra => "tetra",
            Domain::Bidisc => "bidisc",
        }
    }

    fn parse(s: &str) -> Result<Domain> {
        match s {
            "e333" => Ok(Domain::E333),
            "e312" => Ok(Domain::E312),
            "tetra" => Ok(Domain::Tetra),
            "bidisc" => Ok(Domain::Bidisc),
            _ => Err(MudomError::Parse(format!("unknown domain '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundarySet {
    #[value(name = "K")]
    K,
    #[value(name = "K1")]
    K1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchwarzDomain {
    E333,
    E312,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SliceFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 2,
            Status::Error => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Json(Json),
    Text(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Output,
}

impl CommandResult {
    fn json(status: Status, fields: Vec<(&str, Json)>) -> Self {
        let mut all = vec![("status".to_string(), Json::str(status.as_str()))];
        all.extend(fields.into_iter().map(|(k, v)| (k.to_string(), v)));
        CommandResult { status, payload: Output::Json(Json::Obj(all)) }
    }

    fn error(e: &MudomError) -> Self {
        CommandResult::json(Status::Error, vec![("message", Json::str(e.to_string()))])
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn render(&self) -> String {
        match &self.payload {
            Output::Json(j) => j.render(),
            Output::Text(t) => t.clone(),
        }
    }
}

/// Parses arguments and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let status = if e.use_stderr() { Status::Error } else { Status::Ok };
            CommandResult { status, payload: Output::Text(e.to_string()) }
        }
    }
}

pub fn execute(cli: &Cli) -> CommandResult {
    match config_from(cli).and_then(|cfg| dispatch(&cli.command, &cfg)) {
        Ok(r) => r,
        Err(e) => CommandResult::error(&e),
    }
}

fn config_from(cli: &Cli) -> Result<ScanConfig> {
    let mut cfg = ScanConfig::default();
    if let Some(n) = cli.grid {
        cfg.torus_n = n;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
        if cfg.boundary_band < t {
            cfg.boundary_band = t;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cmd: &Command, cfg: &ScanConfig) -> Result<CommandResult> {
    match cmd {
        Command::Membership { domain, point, closure } => cmd_membership(*domain, &read_input(point)?, *closure, cfg),
        Command::Mu { matrix } => cmd_mu(&read_input(matrix)?, cfg),
        Command::Crosscheck { point, sample, seed, norm_bound, closure } => {
            let points = match (point, sample) {
                (Some(p), None) => CrosscheckInput::Points(parse_point7_list(&read_input(p)?)?),
                (None, Some(n)) => CrosscheckInput::Sample { n: *n, seed: *seed, norm_bound: *norm_bound },
                _ => return Err(MudomError::Parse("give either a point file or --sample".into())),
            };
            Ok(cmd_crosscheck(&points, *closure, cfg))
        }
        Command::Boundary { set, point, unitaries, seed } => match (point, unitaries) {
            (Some(p), None) => cmd_boundary_points(*set, &read_input(p)?, cfg),
            (None, Some(n)) => Ok(cmd_boundary_unitaries(*set, *n, *seed, cfg)),
            _ => Err(MudomError::Parse("give either a point file or --unitaries".into())),
        },
        Command::Schwarz { lambda0, point, domain } => {
            let l = complex_from_value(&parse_value(lambda0.as_bytes())?)?;
            cmd_schwarz(l, &read_input(point)?, *domain, cfg)
        }
        Command::Separate { point } => cmd_separate(&read_input(point)?, cfg),
        Command::Slice { plane, res, format } => cmd_slice(&parse_plane_spec(plane)?, *res, *format, cfg),
    }
}

fn read_input(arg: &str) -> Result<Vec<u8>> {
    if arg.trim_start().starts_with('[') {
        return Ok(arg.as_bytes().to_vec());
    }
    if arg == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| MudomError::Parse(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read(arg).map_err(|e| MudomError::Parse(format!("{arg}: {e}")))
}

fn complex_list(data: &[u8], dim: usize) -> Result<Vec<Complex>> {
    let v = parse_value(data)?;
    let items = v.as_array().ok_or_else(|| MudomError::Parse("expected an array".into()))?;
    if items.len() != dim {
        return Err(MudomError::Parse(format!("expected {dim} coordinates, got {}", items.len())));
    }
    items.iter().map(complex_from_value).collect()
}

fn parse_point7_list(data: &[u8]) -> Result<Vec<Point7>> {
    crate::core_types::json::parse_point7_list(data)
}

fn parse_point5_list(data: &[u8]) -> Result<Vec<Point5>> {
    let v = parse_value(data)?;
    if let Ok(p) = point5_from_value(&v) {
        return Ok(vec![p]);
    }
    v.as_array()
        .ok_or_else(|| MudomError::Parse("expected a point or a list of points".into()))?
        .iter()
        .map(point5_from_value)
        .collect()
}

/// Verdict for a point given as a coordinate slice of the domain's arity.
pub fn membership_verdict(domain: Domain, p: &[Complex], closure: bool, cfg: &ScanConfig) -> Verdict {
    match domain {
        Domain::E333 => {
            let x = Point7(p.try_into().expect("arity checked"));
            if closure { in_Gamma_333(&x, cfg) } else { in_G_333(&x, cfg) }
        }
        Domain::E312 => {
            let x = Point5(p.try_into().expect("arity checked"));
            if closure { in_Gamma_312(&x, cfg) } else { in_G_312(&x, cfg) }
        }
        Domain::Tetra => {
            let x = Point3(p.try_into().expect("arity checked"));
            if closure { in_Gamma_tetra(&x, cfg) } else { in_G_tetra(&x, cfg) }
        }
        Domain::Bidisc => {
            let x = Point2(p.try_into().expect("arity checked"));
            if closure { in_Gamma_bidisc(&x, cfg) } else { in_G_bidisc(&x, cfg) }
        }
    }
}

pub fn cmd_membership(domain: Domain, data: &[u8], closure: bool, cfg: &ScanConfig) -> Result<CommandResult> {
    let p = complex_list(data, domain.dim())?;
    let v = membership_verdict(domain, &p, closure, cfg);
    Ok(CommandResult::json(
        Status::Ok,
        vec![
            ("command", Json::str("membership")),
            ("domain", Json::str(domain.name())),
            ("closure", Json::Bool(closure)),
            ("point", complexes_json(&p)),
            ("verdict", verdict_json(&v)),
        ],
    ))
}

pub fn cmd_mu(data: &[u8], cfg: &ScanConfig) -> Result<CommandResult> {
    let a = matrix3_from_value(&parse_value(data)?)?;
    let m = mu_E333(&a, cfg);
    Ok(CommandResult::json(
        Status::Ok,
        vec![
            ("command", Json::str("mu")),
            ("mu", Json::Num(m.mu)),
            ("witness_r", Json::Num(m.witness_r)),
            ("iterations", Json::Int(m.iterations as i64)),
            ("degenerate", Json::Bool(m.degenerate)),
            ("operator_norm", Json::Num(a.operator_norm())),
            ("config", config_json(cfg)),
        ],
    ))
}

pub enum CrosscheckInput {
    Points(Vec<Point7>),
    Sample { n: usize, seed: u64, norm_bound: f64 },
}

/// Oracle states count as decided when every margin exceeds this.
pub const CONCORDANCE_MARGIN: f64 = 1e-6;

pub struct OracleRow {
    pub name: &'static str,
    pub verdict: Verdict,
}

/// All equivalent membership oracles for one point.
pub fn crosscheck_oracles(x: &Point7, closure: bool, cfg: &ScanConfig) -> Vec<OracleRow> {
    let mut rows = vec![OracleRow {
        name: "psi1_torus",
        verdict: if closure { in_Gamma_333(x, cfg) } else { in_G_333(x, cfg) },
    }];
    for w in Fiber::ALL {
        let name = match w {
            Fiber::X => "fiber_x",
            Fiber::Y => "fiber_y",
            Fiber::Z => "fiber_z",
        };
        let verdict = if closure { in_Gamma_333_fiberwise(x, w, cfg) } else { in_G_333_fiberwise(x, w, cfg) };
        rows.push(OracleRow { name, verdict });
    }
    rows.push(OracleRow {
        name: "eta_bridge",
        verdict: if closure { bridge_in_Gamma(x, cfg) } else { bridge_in_G(x, cfg) },
    });
    rows
}

/// Some(true/false) when all margins are decided, None otherwise.
pub fn rows_agree(rows: &[OracleRow]) -> Option<bool> {
    if rows.iter().any(|r| !(r.verdict.margin.abs() > CONCORDANCE_MARGIN)) {
        return None;
    }
    Some(rows.iter().all(|r| r.verdict.state == rows[0].verdict.state))
}

pub fn cmd_crosscheck(input: &CrosscheckInput, closure: bool, cfg: &ScanConfig) -> CommandResult {
    let (points, source) = match input {
        CrosscheckInput::Points(p) => (p.clone(), Json::str("file")),
        CrosscheckInput::Sample { n, seed, norm_bound } => (
            (0..*n).map(|i| pi333(&random_contraction(sub_seed(*seed, i as u64), *norm_bound))).collect(),
            Json::obj([
                ("sample", Json::Int(*n as i64)),
                ("seed", Json::Int(*seed as i64)),
                ("norm_bound", Json::Num(*norm_bound)),
            ]),
        ),
    };
    let mut disagreements = 0;
    let mut flagged = 0;
    let mut reports = vec![];
    for x in &points {
        let rows = crosscheck_oracles(x, closure, cfg);
        let agree = rows_agree(&rows);
        match agree {
            Some(false) => disagreements += 1,
            None => flagged += 1,
            Some(true) => {}
        }
        let preimage = if rows[0].verdict.is_inside() {
            let p = contractive_preimage(x, cfg);
            if p.attempted {
                Json::obj([("found", Json::Bool(p.found())), ("best_norm", Json::Num(p.best_norm))])
            } else {
                Json::Null
            }
        } else {
            Json::Null
        };
        reports.push(Json::obj([
            ("point", complexes_json(&x.0)),
            (
                "oracles",
                Json::Arr(
                    rows.iter()
                        .map(|r| {
                            Json::obj([
                                ("name", Json::str(r.name)),
                                ("state", Json::str(r.verdict.state.as_str())),
                                ("margin", Json::Num(r.verdict.margin)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("agree", agree.map_or(Json::Null, Json::Bool)),
            ("band_flagged", Json::Bool(agree.is_none())),
            ("contractive_preimage", preimage),
        ]));
    }
    let status = if disagreements > 0 { Status::Violation } else { Status::Ok };
    CommandResult::json(
        status,
        vec![
            ("command", Json::str("crosscheck")),
            ("closure", Json::Bool(closure)),
            ("source", source),
            ("concordance_margin", Json::Num(CONCORDANCE_MARGIN)),
            ("points", Json::Int(points.len() as i64)),
            ("disagreements", Json::Int(disagreements)),
            ("band_flagged", Json::Int(flagged)),
            ("config", config_json(cfg)),
            ("results", Json::Arr(reports)),
        ],
    )
}

fn state_ok(v: &Verdict) -> bool {
    v.state == State::Inside
}

pub fn cmd_boundary_points(set: BoundarySet, data: &[u8], cfg: &ScanConfig) -> Result<CommandResult> {
    let mut all_in = true;
    let mut rows = vec![];
    match set {
        BoundarySet::K => {
            for x in parse_point7_list(data)? {
                let k = in_K(&x, cfg);
                all_in &= state_ok(&k);
                let f = fiber_boundary_check(&x, cfg);
                let b = k_bridge_check(&x, cfg);
                rows.push(Json::obj([
                    ("point", complexes_json(&x.0)),
                    ("in_K", verdict_json(&k)),
                    ("relation_deviation", Json::Num(k_relation_deviation(&x))),
                    (
                        "fiber_check",
                        Json::obj([
                            ("case", Json::str(f.case.name())),
                            ("z_deviation", Json::Num(f.z_deviation)),
                            ("y_deviation", Json::Num(f.y_deviation)),
                            ("holds", Json::Bool(f.holds)),
                        ]),
                    ),
                    (
                        "k1_bridge",
                        Json::obj([
                            ("worst_state", Json::str(b.k1_worst.state.as_str())),
                            ("worst_margin", Json::Num(b.k1_worst.margin)),
                            ("worst_eta", complex_json(b.worst_eta)),
                            ("agree", b.agree.map_or(Json::Null, Json::Bool)),
                        ]),
                    ),
                ]));
            }
        }
        BoundarySet::K1 => {
            for xt in parse_point5_list(data)? {
                let k = in_K1(&xt, cfg);
                all_in &= state_ok(&k);
                rows.push(Json::obj([
                    ("point", complexes_json(&xt.0)),
                    ("in_K1", verdict_json(&k)),
                    ("relation_deviation", Json::Num(k1_relation_deviation(&xt))),
                ]));
            }
        }
    }
    let status = if all_in { Status::Ok } else { Status::Violation };
    Ok(CommandResult::json(
        status,
        vec![
            ("command", Json::str("boundary")),
            ("set", Json::str(set_name(set))),
            ("config", config_json(cfg)),
            ("results", Json::Arr(rows)),
        ],
    ))
}

fn set_name(set: BoundarySet) -> &'static str {
    match set {
        BoundarySet::K => "K",
        BoundarySet::K1 => "K1",
    }
}

/// Haar unitaries: the images must lie in the chosen set. Both images are
/// computed; only the requested set decides the status.
pub fn cmd_boundary_unitaries(set: BoundarySet, n: usize, seed: u64, cfg: &ScanConfig) -> CommandResult {
    let rep = unitary_image_checks(seed, n, cfg);
    let (dev, margin) = match set {
        BoundarySet::K => (rep.worst_k_deviation, rep.worst_k_margin),
        BoundarySet::K1 => (rep.worst_k1_deviation, rep.worst_k1_margin),
    };
    let ok = rep.ok();
    CommandResult::json(
        if ok { Status::Ok } else { Status::Violation },
        vec![
            ("command", Json::str("boundary")),
            ("set", Json::str(set_name(set))),
            ("unitaries", Json::Int(n as i64)),
            ("seed", Json::Int(seed as i64)),
            ("worst_relation_deviation", Json::Num(dev)),
            ("worst_margin", Json::Num(margin)),
            ("failures", Json::Arr(rep.failures.iter().map(|&i| Json::Int(i as i64)).collect())),
            ("config", config_json(cfg)),
        ],
    )
}

pub fn cmd_schwarz(lambda0: Complex, data: &[u8], domain: SchwarzDomain, cfg: &ScanConfig) -> Result<CommandResult> {
    let v = parse_value(data)?;
    let (ok, fields) = match domain {
        SchwarzDomain::E333 => {
            let x = point7_from_value(&v)?;
            let r = schwarz_necessary_333(lambda0, &x, cfg)?;
            let values = Json::obj(Quantity::ALL.iter().map(|q| (q.name(), Json::Num(r.get(*q)))));
            (
                r.necessary_ok,
                vec![
                    ("point", complexes_json(&x.0)),
                    ("quantities", values),
                    ("worst", Json::obj([("name", Json::str(r.worst.0.name())), ("at", complex_json(r.worst.1))])),
                ],
            )
        }
        SchwarzDomain::E312 => {
            let xt = point5_from_value(&v)?;
            let r = schwarz_necessary_312(lambda0, &xt, cfg)?;
            (
                r.necessary_ok,
                vec![
                    ("point", complexes_json(&xt.0)),
                    ("quantities", Json::obj([("Gt1", Json::Num(r.gt1)), ("Gt2", Json::Num(r.gt2))])),
                ],
            )
        }
    };
    let mut all = vec![
        ("command", Json::str("schwarz")),
        ("lambda0", complex_json(lambda0)),
        ("bound", Json::Num(lambda0.norm())),
        ("necessary_ok", Json::Bool(ok)),
    ];
    all.extend(fields);
    all.push(("config", config_json(cfg)));
    Ok(CommandResult::json(if ok { Status::Ok } else { Status::Violation }, all))
}

pub fn cmd_separate(data: &[u8], cfg: &ScanConfig) -> Result<CommandResult> {
    let a = point7_from_value(&parse_value(data)?)?;
    let cert = match separate(&a, cfg) {
        Ok(c) => c,
        Err(e @ MudomError::SeparationNotCertified(_)) => {
            return Ok(CommandResult::json(
                Status::Violation,
                vec![("command", Json::str("separate")), ("message", Json::str(e.to_string()))],
            ))
        }
        Err(e) => return Err(e),
    };
    let data = match &cert.data {
        CertificateData::TetraLift { triple, margin } => Json::obj([
            ("triple", Json::Arr(triple.iter().map(|&k| Json::Int(k as i64)).collect())),
            ("tetra_margin", Json::Num(*margin)),
        ]),
        CertificateData::FNPolynomial { z0, w0, n, epsilon, psi2_at_target } => Json::obj([
            ("z0", complex_json(*z0)),
            ("w0", complex_json(*w0)),
            ("N", Json::Int(*n as i64)),
            ("epsilon", Json::Num(*epsilon)),
            ("psi2_at_target", Json::Num(*psi2_at_target)),
        ]),
        CertificateData::Hyperplane { coefficients, constant } => Json::obj([
            ("coefficients", complexes_json(coefficients)),
            ("constant", complex_json(*constant)),
        ]),
    };
    Ok(CommandResult::json(
        Status::Ok,
        vec![
            ("command", Json::str("separate")),
            ("target", complexes_json(&a.0)),
            ("kind", Json::str(cert.kind().as_str())),
            ("data", data),
            ("value_at_target", Json::Num(cert.value_at_target)),
            ("sup_on_sample", Json::Num(cert.sup_on_sample)),
            ("sample_seed", Json::Int(cert.sample_seed as i64)),
            ("samples", Json::Int(cert.samples as i64)),
            ("config", config_json(cfg)),
        ],
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSpec {
    pub domain: Domain,
    /// 0-based coordinate index and real/imaginary part of each axis.
    pub axes: [(usize, Part); 2],
    pub lo: f64,
    pub hi: f64,
    pub base: Vec<Complex>,
    pub closure: bool,
}

fn parse_axis(s: &str, dim: usize) -> Result<(usize, Part)> {
    let bad = || MudomError::Parse(format!("bad axis '{s}', expected x<k>.re or x<k>.im"));
    let rest = s.trim().strip_prefix('x').ok_or_else(bad)?;
    let (k, part) = rest.split_once('.').ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    if k == 0 || k > dim {
        return Err(MudomError::Parse(format!("axis index {k} outside 1..={dim}")));
    }
    let part = match part {
        "re" => Part::Re,
        "im" => Part::Im,
        _ => return Err(bad()),
    };
    Ok((k - 1, part))
}

/// `<domain>:<axis>,<axis>[;range=lo..hi][;base=<json>][;closure]`
pub fn parse_plane_spec(s: &str) -> Result<PlaneSpec> {
    let (domain, rest) = s.split_once(':').ok_or_else(|| MudomError::Parse("plane spec needs '<domain>:'".into()))?;
    let domain = Domain::parse(domain.trim())?;
    let dim = domain.dim();
    let mut parts = rest.split(';');
    let axes_s = parts.next().unwrap_or("");
    let (a, b) = axes_s.split_once(',').ok_or_else(|| MudomError::Parse("plane spec needs two axes".into()))?;
    let axes = [parse_axis(a, dim)?, parse_axis(b, dim)?];
    if axes[0] == axes[1] {
        return Err(MudomError::Parse("plane axes must differ".into()));
    }
    let mut spec = PlaneSpec { domain, axes, lo: -2.0, hi: 2.0, base: vec![Complex::new(0.0, 0.0); dim], closure: false };
    for p in parts {
        let p = p.trim();
        if p == "closure" {
            spec.closure = true;
        } else if let Some(r) = p.strip_prefix("range=") {
            let (lo, hi) = r.split_once("..").ok_or_else(|| MudomError::Parse(format!("bad range '{r}'")))?;
            let num = |t: &str| t.trim().parse::<f64>().map_err(|_| MudomError::Parse(format!("bad number '{t}'")));
            spec.lo = num(lo)?;
            spec.hi = num(hi)?;
            if !(spec.lo.is_finite() && spec.hi.is_finite() && spec.lo < spec.hi) {
                return Err(MudomError::Parse("range needs finite lo < hi".into()));
            }
        } else if let Some(j) = p.strip_prefix("base=") {
            spec.base = complex_list(j.as_bytes(), dim)?;
        } else {
            return Err(MudomError::Parse(format!("unknown plane option '{p}'")));
        }
    }
    Ok(spec)
}

pub fn cmd_slice(spec: &PlaneSpec, res: usize, format: SliceFormat, cfg: &ScanConfig) -> Result<CommandResult> {
    if res < 2 {
        return Err(MudomError::DomainViolation("res must be at least 2".into()));
    }
    let coord = |i: usize| spec.lo + (spec.hi - spec.lo) * i as f64 / (res - 1) as f64;
    let mut cells = vec![];
    for j in 0..res {
        for i in 0..res {
            let (u, v) = (coord(i), coord(j));
            let mut p = spec.base.clone();
            for ((k, part), t) in spec.axes.iter().zip([u, v]) {
                match part {
                    Part::Re => p[*k].re += t,
                    Part::Im => p[*k].im += t,
                }
            }
            cells.push((u, v, membership_verdict(spec.domain, &p, spec.closure, cfg)));
        }
    }
    let payload = match format {
        SliceFormat::Csv => {
            let mut s = String::from("u,v,state,margin\n");
            for (u, v, verdict) in &cells {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    crate::core_types::json::fmt_f64(*u),
                    crate::core_types::json::fmt_f64(*v),
                    verdict.state.as_str(),
                    crate::core_types::json::fmt_f64(verdict.margin)
                ));
            }
            Output::Text(s)
        }
        SliceFormat::Json => {
            let rows = cells
                .iter()
                .map(|(u, v, verdict)| {
                    Json::obj([
                        ("u", Json::Num(*u)),
                        ("v", Json::Num(*v)),
                        ("state", Json::str(verdict.state.as_str())),
                        ("margin", Json::Num(verdict.margin)),
                    ])
                })
                .collect();
            let axis = |(k, part): (usize, Part)| Json::str(format!("x{}.{}", k + 1, if part == Part::Re { "re" } else { "im" }));
            let CommandResult { payload, .. } = CommandResult::json(
                Status::Ok,
                vec![
                    ("command", Json::str("slice")),
                    ("domain", Json::str(spec.domain.name())),
                    ("axes", Json::Arr(vec![axis(spec.axes[0]), axis(spec.axes[1])])),
                    ("range", Json::Arr(vec![Json::Num(spec.lo), Json::Num(spec.hi)])),
                    ("base", complexes_json(&spec.base)),
                    ("closure", Json::Bool(spec.closure)),
                    ("res", Json::Int(res as i64)),
                    ("config", config_json(cfg)),
                    ("cells", Json::Arr(rows)),
                ],
            );
            payload
        }
    };
    Ok(CommandResult { status: Status::Ok, payload })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run(std::iter::once("mudom").chain(args.iter().copied()))
    }

    #[test]
    fn plane_spec_grammar() {
        let p = parse_plane_spec("e333:x1.re,x7.re").unwrap();
        assert_eq!(p.axes, [(0, Part::Re), (6, Part::Re)]);
        assert_eq!((p.lo, p.hi, p.closure), (-2.0, 2.0, false));
        let q = parse_plane_spec("e312:x2.im,x4.re;range=-1..1.5;base=[0,0,0,[0.5,0],0];closure").unwrap();
        assert_eq!((q.lo, q.hi, q.closure), (-1.0, 1.5, true));
        assert_eq!(q.base[3], Complex::new(0.5, 0.0));
        for bad in ["", "e333", "e999:x1.re,x2.re", "e333:x1.re", "e333:x1.re,x1.re", "e333:x8.re,x1.re",
                    "tetra:x1.re,x2.re;range=2..1", "bidisc:x1.re,x2.re;base=[0]", "e333:x1.re,x2.re;bogus"] {
            assert!(parse_plane_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["membership", "e333", "[0,0,0,0,0,0,0]"]).exit_code(), 0);
        assert_eq!(run_args(&["membership", "e333", "[0,0,0]"]).exit_code(), 1);
        assert_eq!(run_args(&["bogus"]).exit_code(), 1);
        assert_eq!(run_args(&["separate", "[0,0,0,0,0,0,0]"]).exit_code(), 1);
        assert_eq!(run_args(&["schwarz", "--lambda0", "0.1", "[0.9,0,0,0,0,0,0]"]).exit_code(), 2);
    }

    #[test]
    fn slice_origin_inside() {
        let r = run_args(&["slice", "--plane", "e333:x1.re,x7.re", "--res", "5"]);
        assert_eq!(r.exit_code(), 0);
        let text = r.render();
        let origin = text.lines().find(|l| l.starts_with("0.0000000000000000e0,0.0000000000000000e0,")).unwrap();
        assert!(origin.contains(",Inside,"), "{origin}");
    }
}
