//! File-driven analysis subcommands.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use trilie_core::gates::{
    a4_generators, constant, ga4_basis, gate_entanglement_report, joint_eigensign_check, observable_triple,
    registry, s4sl2_basis, sl3_basis, we8_generators, TripleKind,
};
use trilie_core::liealg::{
    invariants, killing_form, killing_signature, lie_closure, roots_relative, verify_chevalley_table,
    LieAlgebraBasis,
};
use trilie_core::matgroup::{
    derived_subgroup, enumerate_with, identify_small, order_bsgs_with, BsgsOptions, Control, GroupError,
    MatrixGroup, ProgressEvent,
};
use trilie_core::qubits::{concurrence_pure2, entanglement_profile, is_b_type, PureState, StateJson};
use trilie_core::Matrix;

/// A command failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn err(e: impl fmt::Display) -> CliError {
    CliError::input(e.to_string())
}

/// Command output in both renderings.
pub struct Output {
    pub json: Json,
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(json: Json, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::input(format!("stdin: {e}")));
    }
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn tangle(path: &Path) -> Result<Output, CliError> {
    let text = read(path)?;
    let raw: StateJson = parse(path, &text)?;
    let state = PureState::try_from(raw).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    match state.qubits() {
        3 => {
            let p = entanglement_profile(&state).map_err(err)?;
            let b = is_b_type(&p);
            let text = format!(
                "three_tangle = {}\ntau_AB = {}\ntau_AC = {}\ntau_BC = {}\ntau_A(BC) = {}\ntau_B(AC) = {}\ntau_C(AB) = {}\nresiduals = [{}, {}, {}]\nB-type = {b}\n",
                p.three_tangle, p.tau_ab, p.tau_ac, p.tau_bc, p.tau_a_bc, p.tau_b_ac, p.tau_c_ab,
                p.residuals[0], p.residuals[1], p.residuals[2]
            );
            Ok(Output::ok(json!({ "qubits": 3, "profile": p, "b_type": b }), text))
        }
        2 => {
            let c = concurrence_pure2(&state).map_err(err)?;
            let text = format!("concurrence = {c}\n");
            Ok(Output::ok(json!({ "qubits": 2, "concurrence": c }), text))
        }
        n => Err(CliError::input(format!("{}: tangles need 2 or 3 qubits, got {n}", path.display()))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Bsgs,
    Enumerate,
}

pub struct GroupArgs<'a> {
    pub gens: &'a Path,
    pub method: Method,
    pub limit: usize,
    pub seed: u64,
    pub verify: bool,
    pub progress: bool,
    pub cancel: &'a AtomicBool,
}

fn print_progress(e: &ProgressEvent) {
    if let Ok(line) = serde_json::to_string(e) {
        eprintln!("{line}");
    }
}

fn load_group(path: &Path) -> Result<MatrixGroup, CliError> {
    let text = read(path)?;
    MatrixGroup::from_json(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn group_error(e: GroupError) -> CliError {
    match e {
        GroupError::LimitExceeded { .. } | GroupError::OrbitCapExceeded { .. } | GroupError::NotFinite => {
            CliError { code: 1, message: e.to_string() }
        }
        e => err(e),
    }
}

/// JSON number when it fits, decimal string otherwise.
fn big(n: &impl ToString) -> Json {
    let s = n.to_string();
    s.parse::<u64>().map(Json::from).unwrap_or(Json::String(s))
}

pub fn group_order(a: &GroupArgs) -> Result<Output, CliError> {
    let g = load_group(a.gens)?;
    let ctl = Control { cancel: Some(a.cancel), progress: a.progress.then_some(&print_progress) };
    match a.method {
        Method::Enumerate => {
            let c = enumerate_with(&g, a.limit, &ctl).map_err(group_error)?;
            Ok(Output::ok(
                json!({ "method": "enumerate", "order": c.order() }),
                format!("order {}\nmethod enumerate\n", c.order()),
            ))
        }
        Method::Bsgs => {
            let opts = BsgsOptions { seed: a.seed, verify: a.verify, ..BsgsOptions::default() };
            let (order, chain) = order_bsgs_with(&g, &opts, &ctl).map_err(group_error)?;
            let sizes = chain.orbit_sizes();
            Ok(Output::ok(
                json!({
                    "method": "bsgs",
                    "order": big(&order),
                    "verified": chain.verified(),
                    "seed": a.seed,
                    "orbit_sizes": sizes,
                }),
                format!(
                    "order {order}\nmethod bsgs (seed {}, {})\norbit sizes {sizes:?}\n",
                    a.seed,
                    if chain.verified() { "verified" } else { "randomized, not verified" }
                ),
            ))
        }
    }
}

pub fn group_derived(a: &GroupArgs) -> Result<Output, CliError> {
    let g = load_group(a.gens)?;
    let ctl = Control { cancel: Some(a.cancel), progress: a.progress.then_some(&print_progress) };
    let c = enumerate_with(&g, a.limit, &ctl).map_err(group_error)?;
    let d = derived_subgroup(&c);
    let s = identify_small(&c).map_err(err)?;
    let text = format!(
        "order {}\nderived order {}\nabelianization {:?}\nexponent {}\nname {}\n",
        s.order,
        d.order(),
        s.abelianization,
        s.exponent,
        s.name.as_deref().unwrap_or("unidentified")
    );
    Ok(Output::ok(json!({ "order": c.order(), "derived_order": d.order(), "structure": s }), text))
}

#[derive(Deserialize)]
struct NamedMatrix {
    name: String,
    matrix: Matrix,
}

/// Reads a basis file, plain or named, keeping serde's line/column
/// diagnostics for whichever form the file uses.
pub fn load_basis(path: &Path) -> Result<LieAlgebraBasis, CliError> {
    let text = read(path)?;
    let value: Json = parse(path, &text)?;
    let named = value.as_array().and_then(|a| a.first()).is_some_and(|v| v.get("name").is_some());
    let basis = if named {
        let items: Vec<NamedMatrix> = parse(path, &text)?;
        LieAlgebraBasis::from_pairs(items.into_iter().map(|n| (n.name, n.matrix)).collect())
    } else {
        LieAlgebraBasis::new(parse(path, &text)?)
    };
    basis.map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LieOp {
    Closure,
    Killing,
    Signature,
    Roots,
    Table,
}

pub fn lie(op: LieOp, path: &Path, cartan: Option<&str>, maxdim: usize) -> Result<Output, CliError> {
    let b = load_basis(path)?;
    match op {
        LieOp::Closure => {
            let c = lie_closure(b.elements(), maxdim).map_err(err)?;
            let inv = invariants(&c).map_err(err)?;
            let text = format!(
                "dim {}\ncenter dim {}\nderived dim {}\nkilling rank {}\nsemisimple {}\n",
                inv.dim, inv.center_dim, inv.derived_dim, inv.killing_rank, inv.semisimple
            );
            let basis: Json = serde_json::from_str(&c.to_json()).map_err(err)?;
            Ok(Output::ok(json!({ "invariants": inv, "basis": basis }), text))
        }
        LieOp::Killing => {
            let k = killing_form(&b).map_err(err)?;
            Ok(Output::ok(json!({ "names": b.names(), "killing": k }), format!("{k}\n")))
        }
        LieOp::Signature => {
            let (p, n, z) = killing_signature(&b).map_err(err)?;
            Ok(Output::ok(
                json!({ "positive": p, "negative": n, "zero": z }),
                format!("signature ({p}, {n}, {z})\n"),
            ))
        }
        LieOp::Roots => {
            let names = cartan.ok_or_else(|| CliError::input("lie roots needs --cartan with basis element names"))?;
            let hs: Vec<Matrix> = names
                .split(',')
                .map(|n| {
                    b.get(n.trim()).cloned().ok_or_else(|| {
                        CliError::input(format!("{}: no basis element named {:?}", path.display(), n.trim()))
                    })
                })
                .collect::<Result<_, _>>()?;
            let rd = roots_relative(&b, &hs).map_err(err)?;
            let fmt = |w: &[trilie_core::Scalar]| {
                format!("({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            };
            let positive = rd.positive_roots();
            let mut text: String = positive.iter().map(|w| format!("±{}\n", fmt(w))).collect();
            text.push_str(&format!("cartan matrix {:?}\n", rd.cartan_matrix()));
            if let Some(t) = rd.root_system_type() {
                text.push_str(&format!("type {t}\n"));
            }
            Ok(Output::ok(
                json!({
                    "roots": rd.weights(),
                    "positive_roots": positive,
                    "simple_roots": rd.simple_roots(),
                    "cartan_matrix": rd.cartan_matrix(),
                    "type": rd.root_system_type(),
                    "zero_weight_dim": rd.zero_weight_dim,
                    "complete": rd.complete,
                }),
                text,
            ))
        }
        LieOp::Table => {
            let pairs: Vec<(String, Matrix)> = b.names().iter().cloned().zip(b.elements().iter().cloned()).collect();
            let r = verify_chevalley_table(&pairs).map_err(err)?;
            let mut text = String::new();
            for c in &r.checks {
                text.push_str(&format!(
                    "{} [{},{}] expected {} computed {}\n",
                    if c.pass { "pass" } else { "FAIL" },
                    c.left,
                    c.right,
                    c.expected,
                    c.computed
                ));
            }
            let checks: Vec<Json> = r
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "check": format!("[{},{}]", c.left, c.right),
                        "expected": c.expected,
                        "computed": c.computed,
                        "pass": c.pass,
                    })
                })
                .collect();
            Ok(Output { json: json!({ "checks": checks, "all_pass": r.all_pass() }), text, code: u8::from(!r.all_pass()) })
        }
    }
}

pub fn eigencheck(gate: &str, kind: TripleKind) -> Result<Output, CliError> {
    let m = match constant(gate) {
        Ok(m) => m.clone(),
        Err(e) => {
            let path = PathBuf::from(gate);
            if !path.exists() {
                return Err(err(e));
            }
            let text = read(&path)?;
            parse(&path, &text)?
        }
    };
    let triple = observable_triple(kind);
    match joint_eigensign_check(&m, &triple) {
        Ok(signs) => {
            let rows = gate_entanglement_report(&m).ok();
            let mut text = format!("signs {}\n", signs.render());
            if let Some(rows) = &rows {
                for r in rows {
                    text.push_str(&format!(
                        "row {}: three_tangle {}, tau_AB {}, tau_AC {}, tau_BC {}, B-type {}\n",
                        r.row, r.profile.three_tangle, r.profile.tau_ab, r.profile.tau_ac, r.profile.tau_bc, r.b_type
                    ));
                }
            }
            Ok(Output::ok(json!({ "joint_eigenvectors": true, "signs": signs.rows, "rows": rows }), text))
        }
        Err(e) => Ok(Output {
            json: json!({ "joint_eigenvectors": false, "reason": e.to_string() }),
            text: format!("not joint eigenvectors: {e}\n"),
            code: 1,
        }),
    }
}

pub fn constants(name: Option<&str>) -> Result<Output, CliError> {
    match name {
        Some(n) => {
            let m = constant(n).map_err(err)?;
            Ok(Output::ok(serde_json::to_value(m).map_err(err)?, format!("{m}\n")))
        }
        None => {
            let list: Vec<Json> =
                registry().iter().map(|c| json!({ "name": c.name, "description": c.description })).collect();
            let text = registry().iter().map(|c| format!("{:<20} {}\n", c.name, c.description)).collect();
            Ok(Output::ok(Json::Array(list), text))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Ghz,
    W,
    B,
    We8,
    A4,
    Sl3,
    Ga4,
    S4sl2,
}

#[derive(Serialize)]
struct NamedOut<'a> {
    name: &'a str,
    matrix: &'a Matrix,
}

/// Built-in inputs in the file formats the other subcommands read.
pub fn preset(p: Preset) -> Json {
    let state = |s: PureState| serde_json::to_value(s.to_json().expect("exact preset")).expect("serializable");
    let named = |pairs: Vec<(String, Matrix)>| {
        let v: Vec<NamedOut> = pairs.iter().map(|(n, m)| NamedOut { name: n, matrix: m }).collect();
        serde_json::to_value(v).expect("serializable")
    };
    match p {
        Preset::Ghz => state(PureState::ghz()),
        Preset::W => state(PureState::w()),
        Preset::B => state(PureState::b_state()),
        Preset::We8 => serde_json::to_value(we8_generators()).expect("serializable"),
        Preset::A4 => serde_json::to_value(a4_generators()).expect("serializable"),
        Preset::Sl3 => named(sl3_basis()),
        Preset::Ga4 => named(ga4_basis()),
        Preset::S4sl2 => named(s4sl2_basis()),
    }
}
