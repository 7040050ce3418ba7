//! Command-line workbench over the exact slice-function calculus: parses
//! one-sided polynomial expressions (or raw stem JSON on stdin), applies the
//! symbolic operators, and emits byte-stable reports.

#![forbid(unsafe_code)]

use std::io::{Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use slicelab::almansi::{
    classical_almansi, fueter_sce, regroup_all, simultaneous_almansi, slice_almansi,
};
use slicelab::clifford::gamma;
use slicelab::expr;
use slicelab::harmonic::{laplacian_power, polyharmonic_degree, CoefficientTable};
use slicelab::jsonio;
use slicelab::oracle::{fd_dirac, point_to_f64, sample_points, StencilConfig};
use slicelab::scalar::{rat_to_str, Rat};
use slicelab::slice::SliceFunction;
use slicelab::stem::format_subset;
use slicelab::verify::{run_all, run_suite, CheckResult, Suite};

/// Writes to stdout, exiting with the conventional SIGPIPE code when the
/// downstream consumer has closed the pipe, instead of panicking.
fn emit(args: std::fmt::Arguments<'_>, newline: bool) {
    let mut out = std::io::stdout().lock();
    let result = if newline {
        out.write_fmt(args).and_then(|()| out.write_all(b"\n"))
    } else {
        out.write_fmt(args)
    };
    if result.is_err() {
        std::process::exit(141);
    }
}

macro_rules! outln {
    ($($t:tt)*) => { emit(format_args!($($t)*), true) };
}

macro_rules! outp {
    ($($t:tt)*) => { emit(format_args!($($t)*), false) };
}

#[derive(Parser)]
#[command(
    name = "slicelab",
    version,
    about = "Exact symbolic workbench for slice functions over Clifford algebras"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Clifford algebra dimension m (odd, 3 ≤ m ≤ 15); defaults to 3 for
    /// expressions; stem JSON input carries its own value.
    #[arg(short = 'm', long = "dim", global = true)]
    m: Option<u32>,

    /// Number of variables n; defaults to 1 for expressions.
    #[arg(short = 'n', long = "num-vars", global = true)]
    n: Option<u32>,

    /// Coefficient rendering in reports.
    #[arg(long, global = true, value_enum, default_value_t = ScalarMode::Exact)]
    scalar: ScalarMode,

    /// Emit machine-readable JSON on stdout instead of tables.
    #[arg(long, global = true)]
    json: bool,

    /// Seed of the deterministic sampler and verification battery.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Finite-difference step of the numeric oracle.
    #[arg(long, global = true, default_value_t = 1e-3)]
    step: f64,

    /// Relative residual tolerance of the numeric certificates.
    #[arg(long, global = true, default_value_t = 1e-5)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalarMode {
    /// Exact rationals, printed as p/q.
    Exact,
    /// Double-precision floats.
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum SphericalKind {
    Value,
    Derivative,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlmansiMode {
    /// f = Σ |x_h|^{2j} h_j with harmonic h_j, in one variable.
    Classical,
    /// f = Σ over K ⊆ H of x_K-weighted spherical components.
    Slice,
    /// Slice decomposition over H refined radially in G ⊆ H.
    Simultaneous,
}

#[derive(Args, Clone)]
struct FunctionArg {
    /// Expression such as "x1^4 * (e1 + 2/3)", or "-" to read stem JSON
    /// from stdin.
    expr: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a function and reprint it canonically.
    Eval(FunctionArg),
    /// Iterated per-variable Laplacian of the function.
    Laplacian {
        #[command(flatten)]
        input: FunctionArg,
        /// Variable h of the Laplacian Δ_{m+1,h}.
        #[arg(long = "var", default_value_t = 1)]
        var: u32,
        /// Iteration count k.
        #[arg(long = "power", default_value_t = 1)]
        power: u32,
    },
    /// Spherical value or spherical derivative over an ordered variable set.
    Spherical {
        #[command(flatten)]
        input: FunctionArg,
        #[arg(long = "kind", value_enum, default_value_t = SphericalKind::Derivative)]
        kind: SphericalKind,
        /// Variables of the composition, e.g. --vars 1,2.
        #[arg(long = "vars", value_delimiter = ',', default_values_t = [1u32])]
        vars: Vec<u32>,
    },
    /// Almansi-type decompositions with exact reconstruction certificates.
    Almansi {
        #[command(flatten)]
        input: FunctionArg,
        #[arg(long = "mode", value_enum)]
        mode: AlmansiMode,
        /// Slice variable set H, e.g. --set 1,2 (slice and simultaneous
        /// modes; defaults to all variables).
        #[arg(long = "set", value_delimiter = ',')]
        set: Vec<u32>,
        /// Refinement subset G ⊆ H (simultaneous mode).
        #[arg(long = "sub", value_delimiter = ',')]
        sub: Vec<u32>,
        /// Depth p of the classical decomposition; defaults to the least
        /// order with Δ^p f = 0.
        #[arg(long = "degree")]
        degree: Option<u32>,
        /// Variable of the classical decomposition.
        #[arg(long = "var", default_value_t = 1)]
        var: u32,
    },
    /// Apply Δ^{γ_m} in one variable and certify the image is monogenic.
    FueterSce {
        #[command(flatten)]
        input: FunctionArg,
        #[arg(long = "var", default_value_t = 1)]
        var: u32,
        /// Number of numeric oracle sample points.
        #[arg(long = "numeric")]
        numeric: Option<usize>,
    },
    /// Closed-form Laplacian coefficient table a_j^(k) as CSV.
    Coeffs {
        #[arg(long = "max-k", default_value_t = 6)]
        max_k: u32,
    },
    /// Run verification suites; exits 1 when any check fails.
    Verify {
        /// One of products, spherical, polyharmonic, almansi, fueter-sce,
        /// or all.
        #[arg(long = "suite", default_value = "all")]
        suite: String,
        /// Optional function to check alongside the suites.
        expr: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let common = &cli.common;
    match &cli.command {
        Command::Eval(input) => {
            let f = load_function(common, &input.expr)?;
            let extras = vec![
                ("m".to_string(), json!(f.m())),
                ("n".to_string(), json!(f.n())),
                ("slice_regular".to_string(), json!(f.is_slice_regular()?)),
            ];
            emit_function(common, "eval", extras, &f);
            Ok(true)
        }
        Command::Laplacian { input, var, power } => {
            let f = load_function(common, &input.expr)?;
            let result = laplacian_power(&f, *var, *power)?;
            let extras = vec![
                ("variable".to_string(), json!(var)),
                ("power".to_string(), json!(power)),
            ];
            emit_function(common, "laplacian", extras, &result);
            Ok(true)
        }
        Command::Spherical { input, kind, vars } => {
            let f = load_function(common, &input.expr)?;
            let mask = mask_from(vars, f.n())?;
            let result = match kind {
                SphericalKind::Value => f.spherical_value_set(mask)?,
                SphericalKind::Derivative => f.spherical_derivative_set(mask)?,
            };
            let extras = vec![
                (
                    "kind".to_string(),
                    json!(match kind {
                        SphericalKind::Value => "value",
                        SphericalKind::Derivative => "derivative",
                    }),
                ),
                ("set".to_string(), json!(format_subset(mask))),
            ];
            emit_function(common, "spherical", extras, &result);
            Ok(true)
        }
        Command::Almansi {
            input,
            mode,
            set,
            sub,
            degree,
            var,
        } => run_almansi(common, input, *mode, set, sub, *degree, *var),
        Command::FueterSce {
            input,
            var,
            numeric,
        } => run_fueter_sce(common, input, *var, *numeric),
        Command::Coeffs { max_k } => {
            let table = CoefficientTable::new(*max_k);
            if common.json {
                let mut entries = Vec::new();
                for k in 1..=*max_k {
                    for j in 1..=k {
                        entries.push(json!({
                            "k": k,
                            "j": j,
                            "value": rat_to_str(&table.get(k, j)),
                        }));
                    }
                }
                let doc = json!({
                    "command": "coeffs",
                    "max_k": max_k,
                    "recursion_verified": table.verify_recursion(),
                    "stepping_verified": table.verify_stepping(),
                    "entries": entries,
                });
                outln!("{}", jsonio::to_canonical_string(&doc));
            } else {
                outp!("{}", table.to_csv());
            }
            Ok(table.verify_recursion() && table.verify_stepping())
        }
        Command::Verify { suite, expr } => run_verify(common, suite, expr.as_deref()),
    }
}

/// Loads the function argument: an expression in the input language, or the
/// canonical stem JSON document when the argument is "-".
fn load_function(common: &Common, text: &str) -> anyhow::Result<SliceFunction<Rat>> {
    if text == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stem JSON from stdin")?;
        let value: Value = serde_json::from_str(&buf).context("stdin is not valid JSON")?;
        let f = jsonio::function_from_json(&value)?;
        if let Some(m) = common.m {
            if m != f.m() {
                bail!("-m {m} disagrees with the stem document (m = {})", f.m());
            }
        }
        if let Some(n) = common.n {
            if n != f.n() {
                bail!("-n {n} disagrees with the stem document (n = {})", f.n());
            }
        }
        Ok(f)
    } else {
        let m = common.m.unwrap_or(3);
        let n = common.n.unwrap_or(1);
        Ok(expr::parse_to_function::<Rat>(text, m, n)?)
    }
}

fn mask_from(vars: &[u32], n: u32) -> anyhow::Result<u32> {
    let mut mask = 0u32;
    for &v in vars {
        if v == 0 || v > n {
            bail!("variable {v} out of range 1..={n}");
        }
        mask |= 1 << (v - 1);
    }
    Ok(mask)
}

fn stencil_config(common: &Common, samples: Option<usize>) -> StencilConfig {
    StencilConfig {
        step: common.step,
        tolerance: common.tol,
        samples: samples.unwrap_or(StencilConfig::default().samples),
        seed: common.seed,
    }
}

// ---------------------------------------------------------------------------
// Report emission.
// ---------------------------------------------------------------------------

fn function_value(f: &SliceFunction<Rat>, mode: ScalarMode) -> Value {
    match mode {
        ScalarMode::Exact => jsonio::function_to_json(f),
        ScalarMode::Float => float_function_json(&f.to_f64()),
    }
}

/// Float rendering of a function document, mirroring the exact schema with
/// JSON numbers for the blade coefficients.
fn float_function_json(f: &SliceFunction<f64>) -> Value {
    let mut components = Map::new();
    for (k, poly) in f.stem().components() {
        let mut terms = Vec::new();
        for (mono, c) in poly.terms() {
            let mut alpha = Vec::new();
            let mut beta = Vec::new();
            for h in 1..=f.n() {
                alpha.push(mono.alpha_exp(h));
                beta.push(mono.beta_exp(h));
            }
            let mut coeff = Map::new();
            for (mask, value) in c.terms() {
                coeff.insert(jsonio::blade_to_str(mask), json!(value));
            }
            terms.push(json!({"alpha": alpha, "beta": beta, "coeff": coeff}));
        }
        if !terms.is_empty() {
            components.insert(format_subset(k), Value::Array(terms));
        }
    }
    json!({"m": f.m(), "n": f.n(), "components": components})
}

fn emit_function(common: &Common, command: &str, extras: Vec<(String, Value)>, f: &SliceFunction<Rat>) {
    if common.json {
        let mut obj = Map::new();
        obj.insert("command".to_string(), json!(command));
        for (k, v) in extras {
            obj.insert(k, v);
        }
        obj.insert("result".to_string(), function_value(f, common.scalar));
        outln!("{}", jsonio::to_canonical_string(&Value::Object(obj)));
    } else {
        for (k, v) in &extras {
            outln!("{k}: {v}");
        }
        print_function_line("result", f, common.scalar);
    }
}

fn print_function_line(label: &str, f: &SliceFunction<Rat>, mode: ScalarMode) {
    match mode {
        ScalarMode::Exact => outln!("{label} = {f}"),
        ScalarMode::Float => outln!("{label} = {}", f.to_f64()),
    }
}

// ---------------------------------------------------------------------------
// Almansi subcommand.
// ---------------------------------------------------------------------------

fn run_almansi(
    common: &Common,
    input: &FunctionArg,
    mode: AlmansiMode,
    set: &[u32],
    sub: &[u32],
    degree: Option<u32>,
    var: u32,
) -> anyhow::Result<bool> {
    let f = load_function(common, &input.expr)?;
    let full: Vec<u32> = (1..=f.n()).collect();
    match mode {
        AlmansiMode::Classical => {
            let depth = match degree {
                Some(p) => p,
                None => polyharmonic_degree(&f, var, gamma(f.m()) + 1)?
                    .context("function is not polyharmonic within the slice-regular bound")?,
            };
            let decomposition = classical_almansi(&f, var, depth)?;
            if common.json {
                let components: Vec<Value> = decomposition
                    .components
                    .iter()
                    .map(|c| function_value(c, common.scalar))
                    .collect();
                let doc = json!({
                    "command": "almansi",
                    "mode": "classical",
                    "variable": var,
                    "depth": depth,
                    "components": components,
                    "reconstructed": true,
                });
                outln!("{}", jsonio::to_canonical_string(&doc));
            } else {
                outln!("classical decomposition in variable {var}, depth {depth}");
                for (j, c) in decomposition.components.iter().enumerate() {
                    print_function_line(&format!("h_{j}"), c, common.scalar);
                }
                outln!("reconstruction: exact");
            }
            Ok(true)
        }
        AlmansiMode::Slice => {
            let h_mask = mask_from(if set.is_empty() { &full } else { set }, f.n())?;
            let decomposition = slice_almansi(&f, h_mask)?;
            if common.json {
                let mut components = Map::new();
                for (k, c) in &decomposition.components {
                    components.insert(format_subset(*k), function_value(c, common.scalar));
                }
                let doc = json!({
                    "command": "almansi",
                    "mode": "slice",
                    "set": format_subset(h_mask),
                    "components": components,
                    "polyharmonic": decomposition.polyharmonic,
                    "reconstructed": true,
                });
                outln!("{}", jsonio::to_canonical_string(&doc));
            } else {
                outln!("slice decomposition over H = {}", format_subset(h_mask));
                for (k, c) in &decomposition.components {
                    print_function_line(&format!("S_{}", format_subset(*k)), c, common.scalar);
                }
                if let Some(flag) = decomposition.polyharmonic {
                    outln!("components polyharmonic of order gamma: {flag}");
                }
                outln!("reconstruction: exact");
            }
            Ok(decomposition.polyharmonic != Some(false))
        }
        AlmansiMode::Simultaneous => {
            let h_mask = mask_from(if set.is_empty() { &full } else { set }, f.n())?;
            let g_mask = mask_from(sub, f.n())?;
            let sim = simultaneous_almansi(&f, h_mask, g_mask)?;
            let regrouped = regroup_all(&f, &sim)?;
            if common.json {
                let components: Vec<Value> = sim
                    .components
                    .iter()
                    .map(|((k, t), c)| {
                        json!({
                            "subset": format_subset(*k),
                            "weights": t,
                            "value": function_value(c, common.scalar),
                        })
                    })
                    .collect();
                let grouped: Vec<Value> = regrouped
                    .components
                    .iter()
                    .map(|(t, c)| {
                        json!({
                            "weights": t,
                            "value": function_value(c, common.scalar),
                        })
                    })
                    .collect();
                let doc = json!({
                    "command": "almansi",
                    "mode": "simultaneous",
                    "set": format_subset(h_mask),
                    "sub": format_subset(g_mask),
                    "depth": sim.depth,
                    "components": components,
                    "regrouped": grouped,
                    "harmonic_certified": sim.harmonic_certified,
                    "biharmonic_in_sub": regrouped.biharmonic_in_g,
                });
                outln!("{}", jsonio::to_canonical_string(&doc));
            } else {
                outln!(
                    "simultaneous decomposition over H = {}, refined in G = {}, depth {}",
                    format_subset(h_mask),
                    format_subset(g_mask),
                    sim.depth
                );
                for ((k, t), c) in &sim.components {
                    print_function_line(
                        &format!("E_{}^{:?}", format_subset(*k), t),
                        c,
                        common.scalar,
                    );
                }
                for (t, c) in &regrouped.components {
                    print_function_line(&format!("G^{t:?}"), c, common.scalar);
                }
                outln!("harmonic in G: {}", sim.harmonic_certified);
                outln!("regrouped biharmonic in G: {}", regrouped.biharmonic_in_g);
            }
            Ok(sim.harmonic_certified && regrouped.biharmonic_in_g)
        }
    }
}

// ---------------------------------------------------------------------------
// Fueter–Sce subcommand.
// ---------------------------------------------------------------------------

fn run_fueter_sce(
    common: &Common,
    input: &FunctionArg,
    var: u32,
    numeric: Option<usize>,
) -> anyhow::Result<bool> {
    let f = load_function(common, &input.expr)?;
    let cfg = stencil_config(common, numeric);
    let cert = fueter_sce(&f, var, &cfg)?;
    let worst = cert
        .dirac_residuals
        .iter()
        .map(|r| r.relative)
        .fold(0.0f64, f64::max);
    if common.json {
        let doc = json!({
            "command": "fueter-sce",
            "variable": var,
            "power": cert.power,
            "image": function_value(&cert.image, common.scalar),
            "image_is_slice": cert.image_is_slice,
            "spherical_polyharmonic": cert.spherical_polyharmonic,
            "dirac_exact_zero": cert.dirac_exact_zero,
            "sample_points": cert.dirac_residuals.len(),
            "worst_relative_residual": worst,
            "tolerance": cert.tolerance,
            "passed": cert.ok(),
        });
        outln!("{}", jsonio::to_canonical_string(&doc));
    } else {
        outln!("monogenic map in variable {var}: Delta^{}", cert.power);
        print_function_line("image", &cert.image, common.scalar);
        outln!("image is slice: {}", cert.image_is_slice);
        outln!(
            "spherical derivative polyharmonic: {}",
            cert.spherical_polyharmonic
        );
        if let Some(exact) = cert.dirac_exact_zero {
            outln!("Dirac of image exactly zero: {exact}");
        }
        outln!(
            "numeric Dirac residual: worst {worst:.3e} over {} points (tolerance {:.0e})",
            cert.dirac_residuals.len(),
            cert.tolerance
        );
        outln!("certificate: {}", if cert.ok() { "PASS" } else { "FAIL" });
    }
    Ok(cert.ok())
}

// ---------------------------------------------------------------------------
// Verify subcommand.
// ---------------------------------------------------------------------------

fn input_function_checks(common: &Common, f: &SliceFunction<Rat>) -> anyhow::Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let g = gamma(f.m());
    let regular = f.is_slice_regular()?;
    checks.push(CheckResult {
        label: "slice-regular".to_string(),
        passed: regular,
        detail: "stem is holomorphic in every variable".to_string(),
    });
    let mut kernel = true;
    for h in 1..=f.n() {
        if !laplacian_power(&f.spherical_derivative(h)?, h, g)?.is_zero() {
            kernel = false;
        }
        if !laplacian_power(f, h, g + 1)?.is_zero() {
            kernel = false;
        }
    }
    checks.push(CheckResult {
        label: "kernel-orders".to_string(),
        passed: kernel,
        detail: format!("Δ^{g} f'_s,h = 0 and Δ^{} f = 0 in every variable", g + 1),
    });
    let cfg = stencil_config(common, None);
    let numeric = f.to_f64();
    let symbolic = slicelab::harmonic::dirac_symbolic_var1(f)?.to_f64();
    let mut worst = 0.0f64;
    for x in sample_points(f.n(), f.m(), &cfg)? {
        let xf = point_to_f64(&x);
        let fd = fd_dirac(&numeric, 1, &xf, &cfg)?;
        let residual = fd.residual_against(&symbolic.evaluate(&xf)?)?;
        worst = worst.max(residual.relative);
    }
    checks.push(CheckResult {
        label: "fd-dirac-residual".to_string(),
        passed: worst <= cfg.tolerance,
        detail: format!(
            "worst relative residual {worst:.3e} over {} points (tolerance {:.0e})",
            cfg.samples, cfg.tolerance
        ),
    });
    Ok(checks)
}

fn run_verify(common: &Common, suite: &str, expr: Option<&str>) -> anyhow::Result<bool> {
    let reports = if suite == "all" {
        run_all(common.seed)?
    } else {
        vec![run_suite(Suite::from_name(suite)?, common.seed)?]
    };
    let mut sections: Vec<(String, Vec<CheckResult>)> = reports
        .into_iter()
        .map(|r| (r.suite.name().to_string(), r.checks))
        .collect();
    if let Some(text) = expr {
        let f = load_function(common, text)?;
        sections.push(("input-function".to_string(), input_function_checks(common, &f)?));
    }
    let passed = sections
        .iter()
        .all(|(_, checks)| checks.iter().all(|c| c.passed));
    if common.json {
        let suites: Vec<Value> = sections
            .iter()
            .map(|(name, checks)| {
                json!({
                    "name": name,
                    "passed": checks.iter().all(|c| c.passed),
                    "checks": checks
                        .iter()
                        .map(|c| json!({
                            "label": c.label,
                            "passed": c.passed,
                            "detail": c.detail,
                        }))
                        .collect::<Vec<Value>>(),
                })
            })
            .collect();
        let doc = json!({
            "command": "verify",
            "seed": common.seed,
            "passed": passed,
            "suites": suites,
        });
        outln!("{}", jsonio::to_canonical_string(&doc));
    } else {
        let mut total = 0usize;
        for (name, checks) in &sections {
            for c in checks {
                total += 1;
                outln!(
                    "[{}] {name}/{}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.label,
                    c.detail
                );
            }
        }
        outln!(
            "overall: {} ({} sections, {total} checks)",
            if passed { "PASS" } else { "FAIL" },
            sections.len()
        );
    }
    Ok(passed)
}
