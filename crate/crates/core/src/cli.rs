//! Command-line front end. Every subcommand prints one JSON object
//! `{status, payload}` on stdout (`--pretty` switches to a readable layout);
//! timing goes to stderr so stdout stays byte-deterministic.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::Int;
use crate::discriminant::{construct_mirror_embedding, discriminant_group, glue_extends};
use crate::error::Error;
use crate::lattice::make_standard;
use crate::modular::{fm_partner_count, monodromy_index, monodromy_index_report, table1, verify_section5};
use crate::monodromy::{numeric_monodromy, SingularPoint, DEFAULT_BASEPOINT};
use crate::mukai::{normalize_mukai_vector, Action, MukaiVector, NsContext};
use crate::picard_fuchs::{mirror_map, pi_series, schwarzian_check, standard_form_check};

#[derive(Parser, Debug)]
#[command(name = "k3mirror", version, about = "Exact lattice, modular and Picard–Fuchs computations for K3 mirror families")]
struct Cli {
    /// Human-readable output instead of JSON
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a standard lattice and report its invariants
    Lattice(LatticeArgs),
    /// Discriminant group of a standard lattice
    Disc(LatticeArgs),
    /// Mukai-vector actions
    #[command(subcommand)]
    Mukai(MukaiCommand),
    /// Number of Fourier–Mukai partners for NS = ⟨degree⟩
    FmPartners { degree: i64 },
    /// Index of the symplectic monodromy for U ⊕ ⟨2n⟩
    MonodromyIndex { n: i64 },
    /// Exact checks of the degree-12 monodromy matrices
    VerifyTable1,
    /// Mirror gluing of (U ⊕ M_n) ⊕ (U ⊕ M̌_n) into the Mukai lattice
    VerifyGlue {
        #[arg(long, default_value_t = 6)]
        n: i64,
    },
    /// Picard–Fuchs computations
    #[command(subcommand)]
    Pf(PfCommand),
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// U, E8minus, two_n, minus_two_n, K3, Mukai, U_plus_Mn, Mcheck_n, U_plus_Mcheck_n
    name: String,
    #[arg(long)]
    n: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum MukaiCommand {
    /// Apply a word of actions (JSON list of tagged records) to v
    Apply {
        #[arg(long)]
        n: i64,
        /// Comma-separated r,d,s
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// e.g. '[{"action":"switch"},{"action":"tensor","b":["1"]}]'
        #[arg(long)]
        word: String,
    },
    /// Normalize an isotropic v with companion u (⟨u,v⟩ = −1)
    Normalize {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
}

#[derive(Subcommand, Debug)]
enum PfCommand {
    /// Coefficients of the holomorphic period Π through x^order
    Series {
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Exact check of the Schwarzian {t,x}
    Schwarzian {
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Exact check of the standard form in z = 48x/(12x+1)
    StandardForm {
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
    /// q-expansion of the inverse mirror map
    MirrorMap {
        #[arg(long, default_value_t = 30)]
        order: usize,
    },
    /// Numerical monodromy around 0, 1/36 or 1/4
    Monodromy {
        #[arg(long)]
        point: SingularPoint,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_BASEPOINT)]
        basepoint: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl CommandResult {
    fn value(payload: Value) -> Self {
        CommandResult {
            status: Status::Value,
            payload,
            elapsed_ms: 0,
        }
    }

    fn verdict(ok: bool, payload: Value) -> Self {
        CommandResult {
            status: if ok { Status::Pass } else { Status::Fail },
            payload,
            elapsed_ms: 0,
        }
    }

    fn failure(operation: &str, inputs: Value, expected: Value, got: Value) -> Self {
        CommandResult {
            status: Status::Fail,
            payload: json!({ "failure": { "operation": operation, "inputs": inputs, "expected": expected, "got": got } }),
            elapsed_ms: 0,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            Status::Pass | Status::Value => 0,
        }
    }
}

/// Captured process output.
#[derive(Clone, Debug)]
pub struct CliOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    pub result: Option<CommandResult>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("payloads serialize")
}

fn parse_vector(s: &str) -> std::result::Result<MukaiVector, String> {
    let parts: Vec<Int> = s
        .split(',')
        .map(|p| p.trim().parse::<Int>().map_err(|e| format!("bad integer {p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if parts.len() < 3 {
        return Err(format!("expected r,d...,s with at least three entries, got {s:?}"));
    }
    let r = parts[0].clone();
    let s_ = parts[parts.len() - 1].clone();
    Ok(MukaiVector::new(r, parts[1..parts.len() - 1].to_vec(), s_))
}

fn error_result(operation: &str, inputs: Value, e: &Error) -> CommandResult {
    CommandResult::failure(operation, inputs, json!("a valid result"), json!(e.to_string()))
}

fn execute(cmd: &Command) -> std::result::Result<CommandResult, String> {
    let r = match cmd {
        Command::Lattice(a) => {
            let inputs = json!({ "name": a.name, "n": a.n });
            match make_standard(&a.name, a.n) {
                Ok(l) => {
                    let sig = l.signature().map_err(|e| e.to_string())?;
                    CommandResult::value(json!({
                        "lattice": to_value(&l.to_record()),
                        "signature": [sig.0, sig.1],
                        "det": l.det().to_string(),
                        "even": l.is_even(),
                        "unimodular": l.is_unimodular(),
                    }))
                }
                Err(e) => error_result("make_standard", inputs, &e),
            }
        }
        Command::Disc(a) => {
            let inputs = json!({ "name": a.name, "n": a.n });
            match make_standard(&a.name, a.n).and_then(|l| discriminant_group(&l)) {
                Ok(d) => CommandResult::value(json!({
                    "discriminant": to_value(&d.to_record()),
                    "order": d.order().to_string(),
                })),
                Err(e) => error_result("discriminant_group", inputs, &e),
            }
        }
        Command::Mukai(MukaiCommand::Apply { n, v, word }) => {
            let inputs = json!({ "n": n, "v": v, "word": word });
            let vec = parse_vector(v)?;
            let word: Vec<Action> = serde_json::from_str(word).map_err(|e| format!("bad action word: {e}"))?;
            match NsContext::rank_one(*n).and_then(|c| c.apply_word(&word, &vec)) {
                Ok(out) => CommandResult::value(json!({ "v": to_value(&out) })),
                Err(e) => error_result("apply_action", inputs, &e),
            }
        }
        Command::Mukai(MukaiCommand::Normalize { n, v, u }) => {
            let inputs = json!({ "n": n, "v": v, "u": u });
            let vv = parse_vector(v)?;
            let uu = parse_vector(u)?;
            match NsContext::rank_one(*n).and_then(|c| normalize_mukai_vector(&c, &vv, &uu)) {
                Ok(out) => CommandResult::value(to_value(&out)),
                Err(e) => error_result("normalize_mukai_vector", inputs, &e),
            }
        }
        Command::FmPartners { degree } => match fm_partner_count(*degree) {
            Ok(c) => CommandResult::value(json!(c)),
            Err(e) => error_result("fm_partner_count", json!({ "degree": degree }), &e),
        },
        Command::MonodromyIndex { n } => match (monodromy_index(*n), monodromy_index_report(*n)) {
            (Ok(i), Ok(rep)) => CommandResult::value(json!({ "index": i, "chain": to_value(&rep) })),
            (Err(e), _) | (_, Err(e)) => error_result("monodromy_index", json!({ "n": n }), &e),
        },
        Command::VerifyTable1 => match verify_section5(6) {
            Ok(rep) => {
                let all = rep.all_passed();
                let table = table1(6).map_err(|e| e.to_string())?;
                if all {
                    CommandResult::verdict(true, json!({ "table1": to_value(&table), "report": to_value(&rep) }))
                } else {
                    let first = rep.checks.iter().find(|c| !c.passed).expect("a failing check");
                    CommandResult::failure(
                        &format!("verify_section5 check ({})", first.id),
                        json!({ "n": 6 }),
                        json!(first.description),
                        first.details.clone(),
                    )
                }
            }
            Err(e) => error_result("verify_section5", json!({ "n": 6 }), &e),
        },
        Command::VerifyGlue { n } => verify_glue(*n),
        Command::Pf(pf) => execute_pf(pf),
    };
    Ok(r)
}

fn verify_glue(n: i64) -> CommandResult {
    let inputs = json!({ "n": n });
    let gd = match construct_mirror_embedding(n) {
        Ok(g) => g,
        Err(e) => return error_result("construct_mirror_embedding", inputs, &e),
    };
    let over = gd.overlattice();
    let sig = over.signature().ok();
    let mut payload = json!({
        "glue": to_value(&gd.to_record()),
        "unimodular": over.is_unimodular(),
        "even": over.is_even(),
        "signature": sig.map(|(p, q)| [p, q]),
    });
    let mut ok = over.is_unimodular() && over.is_even() && sig == Some((4, 20));
    if n == 6 {
        let ext = table1(6).and_then(|t| t.isometries()).and_then(|[tb, s1b, s2b]| {
            let id = gd.k_lattice().identity_isometry();
            Ok([
                glue_extends(&gd, &tb, &id)?.is_some(),
                glue_extends(&gd, &s1b, &id)?.is_some(),
                glue_extends(&gd, &s2b, &id)?.is_some(),
            ])
        });
        match ext {
            Ok([t, s1, s2]) => {
                payload["extends"] = json!({ "T_bar": t, "S1_bar": s1, "S2_bar": s2 });
                ok &= t && s1 && !s2;
                if !ok {
                    return CommandResult::failure(
                        "glue_extends",
                        inputs,
                        json!({ "T_bar": true, "S1_bar": true, "S2_bar": false, "unimodular": true, "even": true }),
                        payload,
                    );
                }
            }
            Err(e) => return error_result("glue_extends", inputs, &e),
        }
    }
    if ok {
        CommandResult::verdict(true, payload)
    } else {
        CommandResult::failure(
            "construct_mirror_embedding",
            inputs,
            json!({ "unimodular": true, "even": true, "signature": [4, 20] }),
            payload,
        )
    }
}

fn execute_pf(cmd: &PfCommand) -> CommandResult {
    match cmd {
        PfCommand::Series { order } => match pi_series(*order).to_strings(*order as i64) {
            Ok(c) => CommandResult::value(json!({ "order": order, "coefficients": c })),
            Err(e) => error_result("pi_series", json!({ "order": order }), &e),
        },
        PfCommand::Schwarzian { order } => match schwarzian_check(*order) {
            Ok(c) if c.passed => CommandResult::verdict(true, to_value(&c)),
            Ok(c) => {
                let m = c.first_mismatch.clone().expect("mismatch present");
                CommandResult::failure(
                    "schwarzian_check",
                    json!({ "order": order, "degree": m.degree }),
                    json!(m.expected),
                    json!(m.got),
                )
            }
            Err(e) => error_result("schwarzian_check", json!({ "order": order }), &e),
        },
        PfCommand::StandardForm { order } => match standard_form_check(*order) {
            Ok(c) if c.passed => CommandResult::verdict(true, to_value(&c)),
            Ok(c) => {
                let m = c.first_mismatch.clone().expect("mismatch present");
                CommandResult::failure(
                    "standard_form_check",
                    json!({ "order": order, "degree": m.degree }),
                    json!(m.expected),
                    json!(m.got),
                )
            }
            Err(e) => error_result("standard_form_check", json!({ "order": order }), &e),
        },
        PfCommand::MirrorMap { order } => {
            let inputs = json!({ "order": order });
            match mirror_map(*order).and_then(|mm| Ok((mm.x_of_q.to_strings(*order as i64)?, mm.is_integral()?))) {
                Ok((x, integral)) => CommandResult::value(json!({ "order": order, "x_of_q": x, "integral": integral })),
                Err(e) => error_result("mirror_map", inputs, &e),
            }
        }
        PfCommand::Monodromy { point, tol, basepoint } => {
            let inputs = json!({ "point": point, "tol": tol, "basepoint": basepoint });
            match numeric_monodromy(*point, *basepoint) {
                Ok(res) => match res.verify(*tol) {
                    Ok(()) => CommandResult::verdict(true, to_value(&res)),
                    Err(e) => CommandResult::failure(
                        "numeric_monodromy",
                        inputs,
                        json!(format!("residual ≤ {tol}")),
                        json!({ "error": e.to_string(), "result": to_value(&res) }),
                    ),
                },
                Err(e) => error_result("numeric_monodromy", inputs, &e),
            }
        }
    }
}

fn pretty(cmd: &Command, r: &CommandResult) -> String {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Value => "VALUE",
    };
    let mut out = format!("status: {status}\n");
    if let (Command::VerifyTable1, Status::Pass) = (cmd, r.status) {
        for c in r.payload["report"]["checks"].as_array().into_iter().flatten() {
            let mark = if c["passed"].as_bool() == Some(true) { "pass" } else { "FAIL" };
            out += &format!("  ({}) {:<4}  {}\n", c["id"].as_str().unwrap_or("?"), mark, c["description"].as_str().unwrap_or(""));
        }
        for (name, key) in [("T̄", "t_bar"), ("S̄₁", "s1_bar"), ("S̄₂", "s2_bar")] {
            out += &format!("  {name} = {}\n", render_matrix(&r.payload["table1"][key]));
        }
        return out;
    }
    out + &serde_json::to_string_pretty(&r.payload).expect("json") + "\n"
}

fn render_matrix(m: &Value) -> String {
    let rows: Vec<String> = m
        .as_array()
        .into_iter()
        .flatten()
        .map(|row| {
            let cells: Vec<&str> = row.as_array().into_iter().flatten().filter_map(Value::as_str).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Parses `argv` (including the program name), runs the command and returns
/// what should be written to stdout/stderr together with the exit code.
pub fn run<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { stdout: text, stderr: String::new(), code, result: None }
            } else {
                CliOutput { stdout: String::new(), stderr: text, code, result: None }
            };
        }
    };
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(mut r) => {
            r.elapsed_ms = start.elapsed().as_millis();
            let stdout = if cli.pretty {
                pretty(&cli.command, &r)
            } else {
                serde_json::to_string(&r).expect("json") + "\n"
            };
            CliOutput {
                stdout,
                stderr: format!("elapsed_ms: {}\n", r.elapsed_ms),
                code: r.exit_code(),
                result: Some(r),
            }
        }
        Err(msg) => CliOutput {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 2,
            result: None,
        },
    }
}
