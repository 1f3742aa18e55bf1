//! Command-line front end: argument handling, dispatch and rendering.

pub mod parse;

use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use ffkoopman::oracle;
use ffkoopman::parametric::{param_koopman_with_limit, specialize_map, Factorization};
use ffkoopman::polyfunc::DEFAULT_MAX_SPACE;
use ffkoopman::{
    build_invariant_subspace_with_limit, classify_parameters, invert_companion, invert_decomposition, is_permutation,
    map_power, param_invert, represent_map, Error as CoreError, FieldSpec, KoopmanDecomposition, ParamClassification,
    ParamDecomposition, ParamInverse, ParamMap, PolyMap, RationalFunc, RationalFunctionField, ScalarField, Verdict,
};

use parse::{mentions_param, parse_map, parse_param_map, split_components, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_PERMUTATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ffkoopman", version, about = "Permutation testing and inversion of polynomial maps over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Invert a univariate permutation polynomial
    Invert,
    /// Invert a map F_p^n -> F_p^n
    InvertMap,
    /// Show the invariant subspace, the matrix M and the verdict
    Koopman,
    /// Compute the k-th iterate of a map (negative k uses the inverse)
    Power,
    /// Invert a map whose coefficients involve a parameter
    ParamInvert,
    /// Classify every value of the parameter
    Classify,
    /// Cross-check the pipeline against brute-force evaluation
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Prime p of the base field
    #[arg(long, global = true)]
    pub field: Option<u64>,
    /// Number of variables (defaults to the number of map components)
    #[arg(long, global = true)]
    pub vars: Option<usize>,
    /// Univariate polynomial in x, or `-` for standard input
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Map components separated by `;`, or `-` for standard input
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub map: Option<String>,
    /// Symbol of the parameter
    #[arg(long, global = true, default_value = "a")]
    pub param: String,
    /// Substitute this value for the parameter first
    #[arg(long, global = true)]
    pub at: Option<u64>,
    /// Exponent for `power`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub power: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also cross-check the answer against brute-force evaluation
    #[arg(long, global = true)]
    pub verify: bool,
    /// Cap on p^n, the number of cells of the function space
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SPACE)]
    pub max_space: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot read standard input: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::NotPermutation { .. } | CoreError::GenericallySingular) => EXIT_NOT_PERMUTATION,
            _ => EXIT_USAGE,
        }
    }
}

/// What a command printed and how the process should exit.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }
}

struct Ctx {
    field: FieldSpec,
    max_space: usize,
    format: Format,
    symbol: String,
}

/// Where the expression came from, already read.
enum Source {
    Poly(String),
    Map(String),
}

impl Source {
    fn text(&self) -> &str {
        match self {
            Source::Poly(s) | Source::Map(s) => s,
        }
    }
}

fn read_arg(v: &str) -> Result<String, CliError> {
    if v == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s.trim().to_string())
    } else {
        Ok(v.to_string())
    }
}

fn source(opts: &Options) -> Result<Source, CliError> {
    match (&opts.poly, &opts.map) {
        (Some(p), None) => Ok(Source::Poly(read_arg(p)?)),
        (None, Some(m)) => Ok(Source::Map(read_arg(m)?)),
        (Some(_), Some(_)) => Err(CliError::Usage("give either --poly or --map, not both".into())),
        (None, None) => Err(CliError::Usage("missing input: pass --poly or --map".into())),
    }
}

fn nvars(opts: &Options, src: &Source) -> Result<usize, CliError> {
    match src {
        Source::Poly(_) => match opts.vars {
            None | Some(1) => Ok(1),
            Some(_) => Err(CliError::Usage("--poly takes a univariate polynomial; use --map for several variables".into())),
        },
        Source::Map(m) => Ok(opts.vars.unwrap_or_else(|| split_components(m).len())),
    }
}

fn param_field(ctx: &Ctx) -> RationalFunctionField {
    RationalFunctionField::with_symbol(ctx.field, &ctx.symbol)
}

/// Parses a concrete map, substituting `--at` first when given.
fn load_map(ctx: &Ctx, opts: &Options, src: &Source) -> Result<PolyMap<FieldSpec>, CliError> {
    let n = nvars(opts, src)?;
    match opts.at {
        Some(a0) => {
            let map = parse_param_map(src.text(), &param_field(ctx), n)?;
            Ok(specialize_map(&map, a0 % ctx.field.p())?)
        }
        None => Ok(parse_map(src.text(), &ctx.field, n)?),
    }
}

fn load_param_map(ctx: &Ctx, opts: &Options, src: &Source) -> Result<ParamMap, CliError> {
    Ok(parse_param_map(src.text(), &param_field(ctx), nvars(opts, src)?)?)
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(out) => out,
        Err(e) => {
            let code = e.exit_code();
            if code == EXIT_NOT_PERMUTATION {
                Outcome { stdout: format!("{e}\n"), stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code }
            }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let opts = &cli.opts;
    let p = opts.field.ok_or_else(|| CliError::Usage("missing --field <p>".into()))?;
    let ctx = Ctx { field: FieldSpec::new(p)?, max_space: opts.max_space, format: opts.format, symbol: opts.param.clone() };
    if !is_identifier(&ctx.symbol) || ctx.symbol.starts_with('x') {
        return Err(CliError::Usage(format!("`{}` cannot be used as the parameter symbol", ctx.symbol)));
    }
    if opts.power.is_some() && cli.command != Command::Power {
        return Err(CliError::Usage("--power only applies to the power subcommand".into()));
    }
    let src = source(opts)?;
    match cli.command {
        Command::Invert => {
            if matches!(src, Source::Map(_)) {
                return Err(CliError::Usage("invert takes --poly; use invert-map for maps".into()));
            }
            concrete(&ctx, opts, &src, Mode::Invert)
        }
        Command::InvertMap => concrete(&ctx, opts, &src, Mode::Invert),
        Command::Koopman => concrete(&ctx, opts, &src, Mode::Report),
        Command::Power => {
            let k = opts.power.ok_or_else(|| CliError::Usage("power needs --power <k>".into()))?;
            concrete(&ctx, opts, &src, Mode::Power(k))
        }
        Command::ParamInvert if opts.at.is_some() => concrete(&ctx, opts, &src, Mode::Invert),
        Command::ParamInvert => parametric(&ctx, opts, &src, false),
        Command::Classify => {
            if opts.at.is_some() {
                return Err(CliError::Usage("classify covers every value of the parameter; drop --at".into()));
            }
            parametric(&ctx, opts, &src, true)
        }
        Command::Verify => verify_command(&ctx, opts, &src),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// ---------------------------------------------------------------------------
// rendering helpers

trait Show: ScalarField {
    fn json(&self, e: &Self::Elem) -> Value;
    fn text(&self, e: &Self::Elem) -> String;
}

impl Show for FieldSpec {
    fn json(&self, e: &Self::Elem) -> Value {
        json!(e.value())
    }

    fn text(&self, e: &Self::Elem) -> String {
        e.value().to_string()
    }
}

impl Show for RationalFunctionField {
    fn json(&self, e: &RationalFunc) -> Value {
        json!({ "num": e.num().coeffs(), "den": e.den().coeffs() })
    }

    fn text(&self, e: &RationalFunc) -> String {
        e.render(self.symbol())
    }
}

fn matrix_json<K: Show>(field: &K, rows: &[Vec<K::Elem>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(|e| field.json(e)).collect())).collect())
}

fn set_text(values: &[u64]) -> String {
    let items: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn base_json<K: Show>(
    d: &KoopmanDecomposition<K>,
    det: &K::Elem,
    invertible: bool,
    inverse: Option<String>,
) -> Map<String, Value> {
    let field = d.field();
    let mut obj = Map::new();
    obj.insert("field".into(), json!(field.characteristic()));
    obj.insert("nvars".into(), json!(d.map().nvars()));
    obj.insert("input".into(), json!(d.map().to_string()));
    obj.insert("dimension".into(), json!(d.dimension()));
    obj.insert("matrix".into(), matrix_json(field, &d.matrix().to_rows()));
    let alpha: Vec<Vec<K::Elem>> = d.chains().iter().map(|c| c.closing.clone()).collect();
    obj.insert("alpha".into(), matrix_json(field, &alpha));
    obj.insert("invertible".into(), json!(invertible));
    obj.insert("det".into(), field.json(det));
    obj.insert("inverse".into(), inverse.map_or(Value::Null, Value::String));
    obj
}

fn render_json(obj: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn report_text<K: Show>(d: &KoopmanDecomposition<K>, det: &K::Elem, invertible: bool, inverse: Option<&str>) -> String {
    let field = d.field();
    let mut out = String::new();
    out.push_str(&format!("field: F_{}\n", field.characteristic()));
    out.push_str(&format!("nvars: {}\n", d.map().nvars()));
    out.push_str(&format!("input: {}\n", d.map()));
    out.push_str(&format!("dimension: {}\n", d.dimension()));
    out.push_str("basis:\n");
    for (i, psi) in d.basis().iter().enumerate() {
        out.push_str(&format!("  psi_{} = {}\n", i + 1, psi));
    }
    out.push_str("matrix:\n");
    for row in d.matrix().to_rows() {
        let cells: Vec<String> = row.iter().map(|e| field.text(e)).collect();
        out.push_str(&format!("  {}\n", cells.join(" ")));
    }
    for chain in d.chains() {
        let cells: Vec<String> = chain.closing.iter().map(|e| field.text(e)).collect();
        out.push_str(&format!("alpha: {}\n", cells.join(" ")));
    }
    out.push_str(&format!("det: {}\n", field.text(det)));
    out.push_str(&format!("invertible: {invertible}\n"));
    out.push_str(&format!("inverse: {}\n", inverse.unwrap_or("none")));
    out
}

// ---------------------------------------------------------------------------
// concrete commands

#[derive(Clone, Copy)]
enum Mode {
    Invert,
    Report,
    Power(i64),
}

fn invert_any<K: ScalarField>(d: &KoopmanDecomposition<K>) -> ffkoopman::Result<PolyMap<K>> {
    let inv = if d.map().nvars() == 1 { invert_companion(d)? } else { invert_decomposition(d)? };
    Ok(inv.inverse_map)
}

fn concrete(ctx: &Ctx, opts: &Options, src: &Source, mode: Mode) -> Result<Outcome, CliError> {
    let map = load_map(ctx, opts, src)?;
    let d = build_invariant_subspace_with_limit(&map, ctx.max_space)?;
    let verdict = is_permutation(&d);
    let inverse = if verdict.invertible { Some(invert_any(&d)?) } else { None };
    let mut code = if verdict.invertible { EXIT_OK } else { EXIT_NOT_PERMUTATION };
    let not_perm = CoreError::NotPermutation { det: ctx.field.text(&verdict.det) }.to_string();

    let power = match mode {
        Mode::Power(k) => match map_power(&d, k) {
            Ok(m) => {
                code = EXIT_OK;
                Some(m)
            }
            Err(CoreError::NotPermutation { .. }) => None,
            Err(e) => return Err(e.into()),
        },
        _ => None,
    };

    let mut out = match ctx.format {
        Format::Json => {
            let mut obj = base_json(&d, &verdict.det, verdict.invertible, inverse.as_ref().map(|g| g.to_string()));
            if let Mode::Power(k) = mode {
                obj.insert("power".into(), json!({ "k": k, "map": power.as_ref().map(|m| m.to_string()) }));
            }
            Outcome { stdout: render_json(obj), stderr: String::new(), code }
        }
        Format::Text => {
            let text = match (mode, &inverse, &power) {
                (Mode::Report, _, _) => report_text(&d, &verdict.det, verdict.invertible, inverse.map(|g| g.to_string()).as_deref()),
                (Mode::Power(_), _, Some(m)) => format!("{m}\n"),
                (Mode::Invert, Some(g), _) => format!("{g}\n"),
                _ => format!("{not_perm}\n"),
            };
            Outcome { stdout: text, stderr: String::new(), code }
        }
    };

    if opts.verify {
        let check = cross_check(&map, ctx.max_space)?;
        finish_verify(&mut out, &check.problems);
    }
    Ok(out)
}

/// Appends the verification result to stderr and escalates the exit code on
/// disagreement.
fn finish_verify(out: &mut Outcome, problems: &[String]) {
    if problems.is_empty() {
        out.stderr.push_str("verify: ok\n");
    } else {
        for p in problems {
            out.stderr.push_str(&format!("verify: {p}\n"));
        }
        out.code = EXIT_MISMATCH;
    }
}

// ---------------------------------------------------------------------------
// verification

struct Check {
    pipeline: bool,
    brute_force: bool,
    problems: Vec<String>,
}

fn describe(invertible: bool) -> &'static str {
    if invertible {
        "permutation"
    } else {
        "not a permutation"
    }
}

fn bruteforce_inverse(map: &PolyMap<FieldSpec>, max_space: usize) -> ffkoopman::Result<PolyMap<FieldSpec>> {
    let table = oracle::evaluate_with_limit(map, max_space)?;
    Ok(oracle::interpolate(&oracle::invert_table(&table)?))
}

fn cross_check(map: &PolyMap<FieldSpec>, max_space: usize) -> Result<Check, CliError> {
    let d = build_invariant_subspace_with_limit(map, max_space)?;
    let pipeline = is_permutation(&d).invertible;
    let brute_force = oracle::perm_check_bruteforce_with_limit(map, max_space)?;
    let mut problems = Vec::new();
    if represent_map(&d)? != *map {
        problems.push("V M psi does not reproduce the map".to_string());
    }
    if pipeline != brute_force {
        problems.push(format!("pipeline says {}, brute force says {}", describe(pipeline), describe(brute_force)));
    } else if pipeline {
        let g = invert_any(&d)?;
        let want = bruteforce_inverse(map, max_space)?;
        if g != want {
            problems.push(format!("inverse {g} differs from the interpolated inverse {want}"));
        }
        if !oracle::is_left_inverse(&g, map)? || !oracle::is_left_inverse(map, &g)? {
            problems.push("composition with the inverse is not the identity".to_string());
        }
    }
    Ok(Check { pipeline, brute_force, problems })
}

/// Checks every specialization of a parametric map against brute force.
fn param_cross_check(
    map: &ParamMap,
    c: &ParamClassification,
    inv: Option<&ParamInverse>,
    max_space: usize,
) -> Result<Vec<String>, CliError> {
    let mut problems = Vec::new();
    for v in &c.verdicts {
        let a0 = v.a;
        let concrete = specialize_map(map, a0)?;
        let truth = oracle::perm_check_bruteforce_with_limit(&concrete, max_space)?;
        if v.verdict != Verdict::Undefined && (v.verdict == Verdict::Invertible) != truth {
            problems.push(format!("a = {a0}: classified {}, brute force says {}", v.verdict, describe(truth)));
        }
        if v.fallback_invertible != Some(truth) {
            problems.push(format!("a = {a0}: concrete pipeline disagrees with brute force"));
        }
        if v.verdict != Verdict::Invertible {
            continue;
        }
        let Some(inv) = inv else { continue };
        match inv.specialize(a0) {
            Ok(g) => {
                if g != bruteforce_inverse(&concrete, max_space)? {
                    problems.push(format!("a = {a0}: specialized inverse {g} is wrong"));
                }
            }
            Err(CoreError::UndefinedAt(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(problems)
}

fn verify_command(ctx: &Ctx, opts: &Options, src: &Source) -> Result<Outcome, CliError> {
    let n = nvars(opts, src)?;
    if opts.at.is_none() && mentions_param(src.text(), n, &ctx.symbol)? {
        return param_verify(ctx, opts, src);
    }
    let map = load_map(ctx, opts, src)?;
    let check = cross_check(&map, ctx.max_space)?;
    let agree = check.problems.is_empty();
    let code = if agree { EXIT_OK } else { EXIT_MISMATCH };
    let stdout = match ctx.format {
        Format::Json => render_json(verify_json(&map, check.pipeline, check.brute_force, &check.problems)),
        Format::Text => {
            let mut s = format!("input: {map}\npipeline: {}\nbrute force: {}\n", describe(check.pipeline), describe(check.brute_force));
            for p in &check.problems {
                s.push_str(&format!("mismatch: {p}\n"));
            }
            s.push_str(if agree { "result: agree\n" } else { "result: MISMATCH\n" });
            s
        }
    };
    Ok(Outcome { stdout, stderr: String::new(), code })
}

fn verify_json(map: &PolyMap<FieldSpec>, pipeline: bool, brute_force: bool, problems: &[String]) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("field".into(), json!(map.field().p()));
    obj.insert("nvars".into(), json!(map.nvars()));
    obj.insert("input".into(), json!(map.to_string()));
    obj.insert("invertible".into(), json!(pipeline));
    obj.insert("verify".into(), json!({ "brute_force": brute_force, "agree": problems.is_empty(), "problems": problems }));
    obj
}

fn param_verify(ctx: &Ctx, opts: &Options, src: &Source) -> Result<Outcome, CliError> {
    let map = load_param_map(ctx, opts, src)?;
    let d = param_koopman_with_limit(&map, ctx.max_space)?;
    let c = classify_parameters(&d)?;
    let inv = match param_invert(&d) {
        Ok(inv) => Some(inv),
        Err(CoreError::GenericallySingular) => None,
        Err(e) => return Err(e.into()),
    };
    let problems = param_cross_check(&map, &c, inv.as_ref(), ctx.max_space)?;
    let agree = problems.is_empty();
    let code = if agree { EXIT_OK } else { EXIT_MISMATCH };
    let stdout = match ctx.format {
        Format::Json => {
            let mut obj = param_json(ctx, &d, &c, inv.as_ref());
            obj.insert("verify".into(), json!({ "agree": agree, "problems": problems }));
            render_json(obj)
        }
        Format::Text => {
            let mut s = format!("input: {map}\nchecked: {} values of {}\n", c.verdicts.len(), ctx.symbol);
            for p in &problems {
                s.push_str(&format!("mismatch: {p}\n"));
            }
            s.push_str(if agree { "result: agree\n" } else { "result: MISMATCH\n" });
            s
        }
    };
    Ok(Outcome { stdout, stderr: String::new(), code })
}

// ---------------------------------------------------------------------------
// parametric commands

fn factorization_json(f: &Option<Factorization>) -> Value {
    match f {
        None => Value::Null,
        Some(f) => json!({
            "unit": f.unit,
            "factors": f.factors.iter().map(|(g, m)| json!({ "poly": g.coeffs(), "multiplicity": m })).collect::<Vec<_>>(),
        }),
    }
}

fn param_json(ctx: &Ctx, d: &ParamDecomposition, c: &ParamClassification, inv: Option<&ParamInverse>) -> Map<String, Value> {
    let mut obj = base_json(d.decomposition(), d.det(), !d.det().is_zero(), inv.map(|g| g.reduced().to_string()));
    let undefined: Vec<Value> = c
        .verdicts
        .iter()
        .filter(|v| v.verdict == Verdict::Undefined)
        .map(|v| json!({ "a": v.a, "invertible": v.fallback_invertible }))
        .collect();
    obj.insert(
        "classification".into(),
        json!({
            "invertible": c.invertible(),
            "singular": c.singular(),
            "undefined": c.undefined(),
            "mismatches": c.mismatches(),
            "degeneration": inv.map_or(d.degeneration(), |g| &g.degeneration[..]),
            "concrete_at_undefined": undefined,
        }),
    );
    obj.insert(
        "factors".into(),
        json!({
            "num": factorization_json(&c.det_num_factors),
            "den": factorization_json(&c.det_den_factors),
            "rendered": c.render_det(&ctx.symbol),
        }),
    );
    obj
}

fn parametric(ctx: &Ctx, opts: &Options, src: &Source, classify: bool) -> Result<Outcome, CliError> {
    let map = load_param_map(ctx, opts, src)?;
    let d = param_koopman_with_limit(&map, ctx.max_space)?;
    let c = classify_parameters(&d)?;
    let inv = match param_invert(&d) {
        Ok(inv) => Some(inv),
        Err(CoreError::GenericallySingular) if classify => None,
        Err(e) => return Err(e.into()),
    };
    let mut out = match ctx.format {
        Format::Json => Outcome::ok(render_json(param_json(ctx, &d, &c, inv.as_ref()))),
        Format::Text if classify => Outcome::ok(classify_text(ctx, &d, &c)),
        Format::Text => {
            let inv = inv.as_ref().expect("generically singular maps return early");
            let mut s = String::new();
            s.push_str(&format!("field: F_{}\n", ctx.field.p()));
            s.push_str(&format!("input: {map}\n"));
            s.push_str(&format!("dimension: {}\n", d.dimension()));
            s.push_str(&format!("det: {}\n", c.render_det(&ctx.symbol)));
            s.push_str(&format!("undefined at: {}\n", set_text(&inv.degeneration)));
            s.push_str(&format!("inverse: {}\n", inv.reduced()));
            Outcome::ok(s)
        }
    };
    if opts.verify {
        let problems = param_cross_check(&map, &c, inv.as_ref(), ctx.max_space)?;
        finish_verify(&mut out, &problems);
    }
    Ok(out)
}

fn classify_text(ctx: &Ctx, d: &ParamDecomposition, c: &ParamClassification) -> String {
    let mut s = String::new();
    s.push_str(&format!("field: F_{}\n", ctx.field.p()));
    s.push_str(&format!("dimension: {}\n", d.dimension()));
    s.push_str(&format!("invertible: {}\n", set_text(&c.invertible())));
    s.push_str(&format!("singular: {}\n", set_text(&c.singular())));
    s.push_str(&format!("undefined: {}\n", set_text(&c.undefined())));
    for v in c.verdicts.iter().filter(|v| v.verdict == Verdict::Undefined) {
        if let Some(b) = v.fallback_invertible {
            s.push_str(&format!("  {} = {}: concrete check says {}\n", ctx.symbol, v.a, describe(b)));
        }
    }
    let mismatches = c.mismatches();
    if !mismatches.is_empty() {
        s.push_str(&format!("generic mismatches: {}\n", set_text(&mismatches)));
    }
    s.push_str(&format!("det: {}\n", c.render_det(&ctx.symbol)));
    s
}
