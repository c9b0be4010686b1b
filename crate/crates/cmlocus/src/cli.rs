//! Command-line front end: parameter sweeps rendered as JSON or TSV.
//!
//! Every command produces one object `{config, rows, footers, verdicts,
//! errata}`; TSV output is the rows alone. Exit codes: 0 when every verdict
//! passes, 1 on a failed check, 2 on a usage error, 3 when a truncation runs
//! out of precision.

use crate::combinatorics::{check_inventory, component_inventory_with, vertical_multiplicity_closed, ComponentKind};
use crate::error::Error;
use crate::lattice::{
    descend_superlattice, enumerate_stable_sublattices, enumerate_stable_superlattices_with, hodge_lift_table,
    lie_action_parity, sublattice_exponents, sublattice_shape_erratum, LieCharacter, Search, SemilinearModule,
};
use crate::length::{annihilator_check, quotient_length, vertical_multiplicity, LengthOptions, DEFAULT_X1_WINDOW};
use crate::padic::Zp2;
use crate::report::{poly_string_below, Erratum};
use crate::series::Window;
use crate::window::{
    alpha_beta, closed_form_vertical, solve_thickened_recursion, structure_check, thick::Truncation, verify_closed_form,
    CaseDescriptor, CaseKind,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

pub const SCHEMA: &str = "cmlocus-report/1";
pub const OUT_DIR_ENV: &str = "CMLOCUS_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "cmlocus-out";

#[derive(Parser, Debug)]
#[command(name = "cmlocus", version, about = "Exact computations on the CM deformation locus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Component inventory and total intersection number.
    Inventory {
        /// Take vertical multiplicities from the length computation.
        #[arg(long)]
        snf_vertical: bool,
    },
    /// Two-variable recursion: structure verdicts and alpha/beta dumps.
    Recursion,
    /// Vertical multiplicities as lengths, against the closed form.
    Multiplicity,
    /// Lattice classifications and the Hodge-lift count.
    Lattice {
        /// Stable sublattices of colength 0..=N.
        #[arg(long)]
        sublattices: Option<u32>,
        /// Stable superlattices of colength 2N.
        #[arg(long)]
        superlattices: Option<u32>,
        /// Hodge-lift counts over the dual numbers.
        #[arg(long)]
        appendix: bool,
    },
    /// A fast pass over every suite.
    Selfcheck,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Inventory { .. } => "inventory",
            Command::Recursion => "recursion",
            Command::Multiplicity => "multiplicity",
            Command::Lattice { .. } => "lattice",
            Command::Selfcheck => "selfcheck",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseArg {
    Unr,
    Ram,
    Both,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    #[arg(long, global = true, value_enum)]
    pub case: Option<CaseArg>,
    /// Primes: a list "3,5" or an inclusive range "3..7".
    #[arg(long, global = true)]
    pub p: Option<String>,
    #[arg(long, global = true)]
    pub c0: Option<String>,
    #[arg(long, global = true)]
    pub k: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Multiplies every default x1-window.
    #[arg(long, global = true)]
    pub precision_scale: Option<u32>,
    #[arg(long, global = true)]
    pub x1_window: Option<i64>,
    /// Print alpha_k and beta_k.
    #[arg(long, global = true)]
    pub dump: bool,
    /// x1-exponent bound for dumped series.
    #[arg(long, global = true)]
    pub dump_x1: Option<i64>,
    /// File of `key = value` lines mirroring the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Also write the output to the output directory.
    #[arg(long, global = true)]
    pub save: bool,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

/// Resolved job parameters, echoed in the output.
#[derive(Clone, Debug, Serialize)]
pub struct JobConfig {
    pub schema: &'static str,
    pub command: &'static str,
    pub cases: Vec<CaseKind>,
    pub p: Vec<u64>,
    pub c0: Vec<u32>,
    pub k: Vec<u32>,
    pub format: Format,
    pub precision_scale: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1_window: Option<i64>,
    pub dump: bool,
    pub dump_x1: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snf_vertical: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sublattices: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superlattices: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub appendix: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn verdict(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { name: name.into(), passed, detail: detail.into() }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: JobConfig,
    pub rows: Vec<Map<String, Value>>,
    pub footers: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub errata: Vec<Erratum>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Tsv => tsv(&self.rows),
        }
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

fn tsv(rows: &[Map<String, Value>]) -> String {
    let mut cols: Vec<&String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !cols.contains(&k) {
                cols.push(k);
            }
        }
    }
    let mut out = cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join("\t") + "\n";
    for r in rows {
        let line: Vec<String> = cols.iter().map(|c| r.get(*c).map(cell_text).unwrap_or_default()).collect();
        out += &line.join("\t");
        out.push('\n');
    }
    out
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted(_) | Error::WindowExhausted(_) | Error::PrecisionTooLow(_) | Error::BadPrecision { .. } => 3,
        Error::BadPrime(_) | Error::Invalid(_) => 2,
        _ => 1,
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn parse_list<T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>>(name: &str, s: &str) -> Result<Vec<T>, Error> {
    let bad = || usage(format!("cannot parse --{name} {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if b < a || b - a > 1000 {
                return Err(bad());
            }
            for x in a..=b {
                out.push(T::try_from(x).map_err(|_| bad())?);
            }
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_bool(key: &str, v: &str) -> Result<bool, Error> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(usage(format!("config key {key}: expected a boolean, got {v:?}"))),
    }
}

/// Reads `key = value` lines; `#` starts a comment. Keys use the flag names.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, Error> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key = value", n + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn apply_config(cli: &mut Cli, cfg: &BTreeMap<String, String>) -> Result<(), Error> {
    let o = &mut cli.opts;
    for (k, v) in cfg {
        let num = |v: &str| v.parse::<u32>().map_err(|_| usage(format!("config key {k}: expected a number")));
        match k.as_str() {
            "case" => {
                if o.case.is_none() {
                    o.case = Some(CaseArg::from_str(v, true).map_err(|_| usage(format!("config key case: {v:?}")))?);
                }
            }
            "p" => o.p = o.p.take().or(Some(v.clone())),
            "c0" => o.c0 = o.c0.take().or(Some(v.clone())),
            "k" => o.k = o.k.take().or(Some(v.clone())),
            "format" => {
                if o.format.is_none() {
                    o.format = Some(Format::from_str(v, true).map_err(|_| usage(format!("config key format: {v:?}")))?);
                }
            }
            "precision-scale" => o.precision_scale = o.precision_scale.or(Some(num(v)?)),
            "x1-window" => {
                let w = v.parse().map_err(|_| usage("config key x1-window: expected a number"))?;
                o.x1_window = o.x1_window.or(Some(w));
            }
            "dump" => o.dump |= parse_bool(k, v)?,
            "dump-x1" => o.dump_x1 = o.dump_x1.or(Some(num(v)? as i64)),
            "save" => o.save |= parse_bool(k, v)?,
            "out-dir" => o.out_dir = o.out_dir.take().or(Some(PathBuf::from(v))),
            "snf-vertical" | "sublattices" | "superlattices" | "appendix" => match (&mut cli.command, k.as_str()) {
                (Command::Inventory { snf_vertical }, "snf-vertical") => *snf_vertical |= parse_bool(k, v)?,
                (Command::Lattice { sublattices, .. }, "sublattices") => *sublattices = sublattices.or(Some(num(v)?)),
                (Command::Lattice { superlattices, .. }, "superlattices") => {
                    *superlattices = superlattices.or(Some(num(v)?))
                }
                (Command::Lattice { appendix, .. }, "appendix") => *appendix |= parse_bool(k, v)?,
                _ => {}
            },
            _ => return Err(usage(format!("unknown config key {k:?}"))),
        }
    }
    Ok(())
}

fn resolve(cli: &Cli) -> Result<JobConfig, Error> {
    let o = &cli.opts;
    let cases = match o.case.unwrap_or(CaseArg::Both) {
        CaseArg::Unr => vec![CaseKind::Unramified],
        CaseArg::Ram => vec![CaseKind::Ramified],
        CaseArg::Both => vec![CaseKind::Unramified, CaseKind::Ramified],
    };
    let p_text = o.p.as_deref().unwrap_or("3");
    let mut p: Vec<u64> = parse_list("p", p_text)?;
    // Ranges of p run over the odd primes they contain; listed values must be odd primes.
    if p_text.contains("..") {
        p.retain(|&q| Zp2::new(q, 1).is_ok());
        if p.is_empty() {
            return Err(usage(format!("--p {p_text:?} contains no odd prime")));
        }
    }
    for &q in &p {
        Zp2::new(q, 1)?;
    }
    let c0 = parse_list::<u32>("c0", o.c0.as_deref().unwrap_or("1"))?;
    let k = parse_list::<u32>("k", o.k.as_deref().unwrap_or("2"))?;
    let precision_scale = o.precision_scale.unwrap_or(1);
    if precision_scale == 0 {
        return Err(usage("--precision-scale must be at least 1"));
    }
    if o.x1_window.is_some_and(|w| w < 1) {
        return Err(usage("--x1-window must be positive"));
    }
    let (mut snf_vertical, mut sublattices, mut superlattices, mut appendix) = (None, None, None, None);
    match &cli.command {
        Command::Inventory { snf_vertical: s } => snf_vertical = Some(*s),
        Command::Lattice { sublattices: a, superlattices: b, appendix: c } => {
            if a.is_none() && b.is_none() && !c {
                (sublattices, superlattices, appendix) = (Some(4), Some(1), Some(true));
            } else {
                (sublattices, superlattices, appendix) = (*a, *b, Some(*c));
            }
        }
        _ => {}
    }
    Ok(JobConfig {
        schema: SCHEMA,
        command: cli.command.name(),
        cases,
        p,
        c0,
        k,
        format: o.format.unwrap_or_default(),
        precision_scale,
        x1_window: o.x1_window,
        dump: o.dump,
        dump_x1: o.dump_x1.unwrap_or(6),
        snf_vertical,
        sublattices,
        superlattices,
        appendix,
    })
}

/// What one grid cell contributes to a report.
#[derive(Default)]
struct Cell {
    rows: Vec<Map<String, Value>>,
    footer: Option<(String, Value)>,
    verdicts: Vec<Verdict>,
    errata: Vec<Erratum>,
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("rows are objects"),
    }
}

/// Exact integer as a JSON number when it fits, else as a string.
fn int(x: i128) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn cell_label(case: CaseKind, p: u64, name: &str, v: u32) -> String {
    format!("{case} p={p} {name}={v}")
}

fn grid<T: Copy + Send + Sync>(cases: &[CaseKind], p: &[u64], third: &[T]) -> Vec<(CaseKind, u64, T)> {
    let mut out = Vec::new();
    for &c in cases {
        for &q in p {
            for &t in third {
                out.push((c, q, t));
            }
        }
    }
    out
}

/// Runs cells concurrently and merges them in grid order; the first error
/// (in grid order) wins.
type Merged = (Vec<Map<String, Value>>, Map<String, Value>, Vec<Verdict>, Vec<Erratum>);

fn merge(cells: Vec<Result<Cell, Error>>) -> Result<Merged, Error> {
    let (mut rows, mut footers, mut verdicts, mut errata) = (Vec::new(), Map::new(), Vec::new(), Vec::new());
    for c in cells {
        let c = c?;
        rows.extend(c.rows);
        if let Some((k, v)) = c.footer {
            footers.insert(k, v);
        }
        verdicts.extend(c.verdicts);
        for e in c.errata {
            if !errata.contains(&e) {
                errata.push(e);
            }
        }
    }
    Ok((rows, footers, verdicts, errata))
}

fn length_opts(cfg: &JobConfig) -> LengthOptions {
    LengthOptions { x1_window: cfg.x1_window.unwrap_or(DEFAULT_X1_WINDOW) * cfg.precision_scale as i64, ..Default::default() }
}

fn inventory_cell(cfg: &JobConfig, case: CaseKind, p: u64, c0: u32) -> Result<Cell, Error> {
    let label = cell_label(case, p, "c0", c0);
    let closed = vertical_multiplicity_closed(p, c0);
    let mut cell = Cell::default();
    let mult = if cfg.snf_vertical == Some(true) && c0 > 0 {
        let m = vertical_multiplicity(&CaseDescriptor::default_for(case), p, c0, length_opts(cfg))? as i128;
        cell.verdicts.push(verdict(format!("{label}: vertical length"), m == closed, format!("{m} vs {closed}")));
        m
    } else {
        closed
    };
    let inv = component_inventory_with(case, p, c0, mult);
    for r in &inv.records {
        cell.rows.push(obj(json!({
            "case": case, "p": p, "c0": c0, "kind": r.kind, "s": r.level, "t": r.orbit_level,
            "count": int(r.count), "multiplicity": int(r.multiplicity),
            "intersection": int(r.intersection), "proper": r.proper,
        })));
    }
    let (checks, errata) = check_inventory(&inv);
    let vertical: i128 = inv
        .records
        .iter()
        .filter(|r| r.proper && r.kind == ComponentKind::Vertical)
        .map(|r| r.count * r.multiplicity * r.intersection)
        .sum();
    cell.footer = Some((
        label.clone(),
        json!({
            "horizontal_total": int(inv.horizontal_total()),
            "vertical_total": int(vertical),
            "total": int(checks.total),
            "closed_form_total": int(checks.closed_form_total),
            "level_sums_match": checks.level_sums_match,
            "corollary_matches": checks.corollary_matches,
            "fiber_bookkeeping_matches": checks.fiber_bookkeeping_matches,
            "consistent": checks.passed(),
        }),
    ));
    cell.verdicts.push(verdict(
        format!("{label}: consistency"),
        checks.passed(),
        format!("total {} vs closed form {}", checks.total, checks.closed_form_total),
    ));
    cell.errata = errata;
    Ok(cell)
}

/// Default x1-window for the recursion report at level k.
pub fn recursion_window(p: u64, k: u32) -> i64 {
    50 + 2 * p.pow(k + 1) as i64
}

fn recursion_cell(cfg: &JobConfig, case: CaseKind, p: u64, k: u32) -> Result<Cell, Error> {
    let label = cell_label(case, p, "k", k);
    let x1 = cfg.x1_window.unwrap_or_else(|| recursion_window(p, k)) * cfg.precision_scale as i64;
    let desc = CaseDescriptor::default_for(case);
    let sol = solve_thickened_recursion(&desc, p, k, Truncation::with_x1(x1))?;
    let rep = structure_check(&sol);
    let mut cell = Cell::default();
    for c in &rep.clauses {
        cell.rows.push(obj(json!({
            "case": case, "p": p, "k": k, "clause": c.name, "level": c.level, "passed": c.passed, "detail": c.detail,
        })));
        cell.verdicts.push(verdict(format!("{label}: {} at level {}", c.name, c.level), c.passed, c.detail.clone()));
    }
    let r = sol.ring();
    let closed = closed_form_vertical(r, Window::x1_only(x1), desc.abcd(&r));
    let level0 = sol.level_zero_at_x2_zero() == closed;
    cell.verdicts.push(verdict(format!("{label}: level 0 equals the one-variable closed form"), level0, ""));
    let commute = sol.level_commutation()?;
    cell.verdicts.push(verdict(format!("{label}: every level commutes with Phi"), commute.iter().all(|&b| b), format!("{commute:?}")));
    let compat = sol.reduction_compatibility();
    cell.verdicts.push(verdict(format!("{label}: reduction compatibility"), compat.iter().all(|&b| b), format!("{compat:?}")));
    let mut footer = json!({ "x1_window": x1, "digits": sol.digits, "leading": rep.leading });
    if cfg.dump {
        let (a, b) = alpha_beta(&sol, 2 * k + 1)?;
        footer["alpha"] = json!(poly_string_below(&a, cfg.dump_x1));
        footer["beta"] = json!(poly_string_below(&b, cfg.dump_x1));
    }
    cell.footer = Some((label, footer));
    Ok(cell)
}

fn multiplicity_cell(cfg: &JobConfig, case: CaseKind, p: u64, c0: u32) -> Result<Cell, Error> {
    let label = cell_label(case, p, "c0", c0);
    let closed = vertical_multiplicity_closed(p, c0);
    let mut cell = Cell::default();
    let (length, window, doublings, doubled, stable) = if c0 == 0 {
        (0, None, 0, None, true)
    } else {
        let rep = quotient_length(&CaseDescriptor::default_for(case), p, c0, length_opts(cfg))?;
        (rep.length, Some(rep.x1_window), rep.doublings, rep.doubled_length, rep.stable())
    };
    let pass = length as i128 == closed && stable;
    cell.rows.push(obj(json!({
        "case": case, "p": p, "c0": c0, "length": length, "closed_form": int(closed),
        "x1_window": window, "doublings": doublings, "doubled_length": doubled, "stable": stable,
        "verdict": if pass { "PASS" } else { "FAIL" },
    })));
    cell.verdicts.push(verdict(format!("{label}: length equals closed form"), pass, format!("{length} vs {closed}")));
    Ok(cell)
}

fn lattice_cell(cfg: &JobConfig, p: u64) -> Result<Cell, Error> {
    let mut cell = Cell::default();
    let mut footer = Map::new();
    let sane = SemilinearModule::height_two(Zp2::new(p, 4)?).sanity() && SemilinearModule::height_four(Zp2::new(p, 4)?).sanity();
    cell.verdicts.push(verdict(format!("p={p}: FV = VF = p and actions commute"), sane, ""));
    if let Some(n) = cfg.sublattices {
        let mut parities = Vec::new();
        for k in 0..=n {
            let found = enumerate_stable_sublattices(p, k)?;
            cell.verdicts.push(verdict(format!("p={p} k={k}: unique stable sublattice"), found.len() == 1, format!("{} found", found.len())));
            for l in &found {
                let (i, j) = sublattice_exponents(l);
                let par = lie_action_parity(p, l)?;
                parities.push(par.to_string());
                cell.rows.push(obj(json!({
                    "suite": "sublattice", "p": p, "k": k, "e0_exponent": i, "f0_exponent": j, "parity": par,
                })));
                let expected = if k % 2 == 0 { LieCharacter::Psi } else { LieCharacter::PsiBar };
                cell.verdicts.push(verdict(format!("p={p} k={k}: Lie parity"), par == expected, par.to_string()));
                if k % 2 == 1 && !cell.errata.contains(&sublattice_shape_erratum()) {
                    cell.errata.push(sublattice_shape_erratum());
                }
            }
        }
        footer.insert("parities".into(), json!(parities.join(",")));
    }
    if let Some(s) = cfg.superlattices {
        let (m, search) = if s <= 1 { (1, Search::Exhaustive) } else { (s, Search::Diagonal) };
        let rep = enumerate_stable_superlattices_with(p, s, m, search)?;
        for sh in &rep.found {
            let d = descend_superlattice(p, sh.a, sh.b, sh.delta)?;
            cell.rows.push(obj(json!({
                "suite": "superlattice", "p": p, "s": s, "m": m, "search": search,
                "a": sh.a, "b": sh.b, "delta": sh.delta, "descent_scale": d.scale,
                "descent_e0": format!("{:?}", d.e0), "descent_f0": format!("{:?}", d.f0),
            })));
        }
        cell.verdicts.push(verdict(
            format!("p={p} s={s} m={m}: superlattices match the (a, b, delta) family"),
            rep.matches(),
            format!("{} found, {} expected", rep.found.len(), rep.expected.len()),
        ));
        footer.insert("superlattice_count".into(), json!(rep.found.len()));
    }
    if cfg.appendix == Some(true) {
        let (table, errata) = hodge_lift_table(p)?;
        for (c, n) in &table {
            cell.rows.push(obj(json!({
                "suite": "hodge-lifts", "p": p, "order_action": c.order_action, "uniformizer": c.uniformizer, "count": n,
            })));
        }
        cell.verdicts.push(verdict(format!("p={p}: unique Hodge lift"), table[0].1 == 1, table[0].1.to_string()));
        footer.insert("hodge_lift_count".into(), json!(table[0].1));
        cell.errata.extend(errata);
    }
    cell.footer = Some((format!("p={p}"), Value::Object(footer)));
    Ok(cell)
}

fn abcd_signed(case: CaseKind, p: u64) -> Result<[[i64; 2]; 4], Error> {
    let r = Zp2::new(p, 4)?;
    Ok(CaseDescriptor::default_for(case).abcd(&r).map(|x| x.signed()))
}

fn selfcheck(cfg: &JobConfig) -> Result<(Vec<Verdict>, Vec<Erratum>), Error> {
    let mut v = Vec::new();
    let mut errata = Vec::new();
    for case in [CaseKind::Unramified, CaseKind::Ramified] {
        for p in [3, 5] {
            let c = verify_closed_form(p, 8, 81, abcd_signed(case, p)?)?;
            v.push(verdict(format!("{case} p={p}: closed form solves the recursion"), c.recursion_holds && c.reduces_to_gamma, ""));
        }
        let rec = JobConfig { dump: false, ..cfg.clone() };
        for k in 1..=2 {
            v.extend(recursion_cell(&rec, case, 3, k)?.verdicts);
        }
        let quick = LengthOptions { x1_window: 100 * cfg.precision_scale as i64, max_doublings: 3, verdict: true };
        for c0 in 1..=2 {
            let rep = quotient_length(&CaseDescriptor::default_for(case), 3, c0, quick)?;
            let closed = vertical_multiplicity_closed(3, c0);
            v.push(verdict(format!("{case} p=3 c0={c0}: vertical length"), rep.length as i128 == closed && rep.stable(), format!("{} vs {closed}", rep.length)));
        }
        let ann = annihilator_check(&CaseDescriptor::default_for(case), 3, 1, 100 * cfg.precision_scale as i64)?;
        v.push(verdict(format!("{case} p=3 k=1: annihilators"), ann.passed(), format!("{ann:?}")));
        for p in [3, 5, 7] {
            for c0 in 0..=4 {
                let inv = inventory_cell(&JobConfig { snf_vertical: None, ..cfg.clone() }, case, p, c0)?;
                v.extend(inv.verdicts);
                for e in inv.errata {
                    if !errata.contains(&e) {
                        errata.push(e);
                    }
                }
            }
        }
    }
    let lat = JobConfig { sublattices: Some(4), superlattices: Some(1), appendix: Some(true), ..cfg.clone() };
    let cell = lattice_cell(&lat, 3)?;
    v.extend(cell.verdicts);
    errata.extend(cell.errata);
    Ok((v, errata))
}

fn execute(cfg: &JobConfig) -> Result<Report, Error> {
    let (rows, footers, verdicts, errata) = match cfg.command {
        "inventory" => merge(grid(&cfg.cases, &cfg.p, &cfg.c0).into_par_iter().map(|(c, p, c0)| inventory_cell(cfg, c, p, c0)).collect())?,
        "recursion" => merge(grid(&cfg.cases, &cfg.p, &cfg.k).into_par_iter().map(|(c, p, k)| recursion_cell(cfg, c, p, k)).collect())?,
        "multiplicity" => {
            merge(grid(&cfg.cases, &cfg.p, &cfg.c0).into_par_iter().map(|(c, p, c0)| multiplicity_cell(cfg, c, p, c0)).collect())?
        }
        "lattice" => merge(cfg.p.par_iter().map(|&p| lattice_cell(cfg, p)).collect())?,
        _ => {
            let (verdicts, errata) = selfcheck(cfg)?;
            let rows = verdicts.iter().map(|v| obj(json!({"check": v.name, "passed": v.passed, "detail": v.detail}))).collect();
            (rows, Map::new(), verdicts, errata)
        }
    };
    Ok(Report { config: cfg.clone(), rows, footers, verdicts, errata })
}

/// Parses arguments, runs the command and renders the output. `env_out_dir`
/// stands in for the output-directory environment variable.
pub fn run<I, T>(args: I, env_out_dir: Option<PathBuf>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let fail = |code: i32, msg: String| Outcome { stdout: String::new(), stderr: msg, code };
    let mut cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome { stdout: text, stderr: String::new(), code } } else { fail(2, text) };
        }
    };
    if let Some(path) = cli.opts.config.clone() {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => return fail(2, format!("cannot read {}: {e}\n", path.display())),
        };
        if let Err(e) = parse_config(&text).and_then(|c| apply_config(&mut cli, &c)) {
            return fail(2, format!("error: {e}\n"));
        }
    }
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => return fail(exit_code(&e), format!("error: {e}\n")),
    };
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(exit_code(&e), format!("error: {e}\n")),
    };
    let stdout = report.render();
    let mut stderr = String::new();
    let mut code = if report.passed() { 0 } else { 1 };
    if cli.opts.save {
        let dir = cli.opts.out_dir.clone().or(env_out_dir).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let ext = match cfg.format {
            Format::Json => "json",
            Format::Tsv => "tsv",
        };
        let path = dir.join(format!("{}.{ext}", cfg.command));
        if let Err(e) = std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(&path, &stdout)) {
            stderr = format!("cannot write {}: {e}\n", path.display());
            code = 1;
        }
    }
    for v in report.verdicts.iter().filter(|v| !v.passed) {
        stderr += &format!("FAIL {}: {}\n", v.name, v.detail);
    }
    Outcome { stdout, stderr, code }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list::<u64>("p", "3,5").unwrap(), vec![3, 5]);
        assert_eq!(parse_list::<u32>("c0", "0..3").unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_list::<u32>("c0", "3..1").is_err());
    }

    #[test]
    fn config_lines() {
        let c = parse_config("case = ram\n# comment\np = 3,5 # trailing\nprecision_scale=2\n").unwrap();
        assert_eq!(c["case"], "ram");
        assert_eq!(c["p"], "3,5");
        assert_eq!(c["precision-scale"], "2");
        assert!(parse_config("nonsense").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["cmlocus", "inventory", "--p", "4"], None).code, 2);
        assert_eq!(run(["cmlocus", "frobnicate"], None).code, 2);
        assert_eq!(run(["cmlocus", "inventory", "--c0", "x"], None).code, 2);
    }
}
