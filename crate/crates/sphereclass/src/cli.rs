//! Command-line front end.
//!
//! Exit codes: `0` when a report was produced (including negative verdicts),
//! `2` for input errors, `3` when a bounded verification finds a
//! counterexample. Defaults for search bounds and the worker count come from
//! the TOML file named by `SPHERECLASS_CONFIG`; flags override it.

use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::classify::classify;
use crate::configuration::{
    enumerate_exceptional, is_g_positive, recognize_ade, validate_configuration, Configuration,
};
use crate::constructor::{
    blowup, family_type3, fiber_multiple, minus_twenty_pair, singular_family, FamilyParams,
};
use crate::diophantine::{
    enumerate_window_solutions, is_equal_entry_solution, tuple_text, verify_ci_bound,
    verify_normal_form, verify_reduced_nonexistence, ConstraintSystem,
};
use crate::dmgroup::{equivalent, reduce, reduce_ruled};
use crate::genus::{report as genus_report, symplectic_genus_reduced};
use crate::lattice::{Class, CohomologyClass, Manifold};
pub use crate::literal::{format_class, parse_class, parse_cohomology};

/// Name of the environment variable holding the config file path.
pub const CONFIG_ENV: &str = "SPHERECLASS_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "sphereclass",
    version,
    about = "Sphere classes in rational and ruled 4-manifolds"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Rational manifold CP^2 # k (default)
    #[arg(long, global = true, conflicts_with = "ruled")]
    pub rational: bool,
    /// Irrational ruled manifold over a genus-h surface
    #[arg(long, global = true)]
    pub ruled: bool,
    /// Base genus h for --ruled
    #[arg(long = "genus", global = true, value_name = "H", default_value_t = 1)]
    pub h: u32,
    /// Number of blow-ups; inferred from the literal when absent
    #[arg(short = 'k', global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Attach wall-clock time to the report
    #[arg(long, global = true)]
    pub timing: bool,
    /// Worker threads for verify verbs
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Reduce a class and print the move log
    Reduce {
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Smooth and symplectic sphere verdicts
    Classify {
        #[arg(allow_hyphen_values = true)]
        class: String,
        /// Cohomology class of a symplectic form (ruled only)
        #[arg(long)]
        omega: Option<String>,
    },
    /// Adjunction-type invariants
    Genus {
        #[arg(allow_hyphen_values = true)]
        class: String,
        /// Canonical class; defaults to K_st
        #[arg(long)]
        canonical: Option<String>,
    },
    /// Bounded verifications
    Verify {
        #[command(subcommand)]
        which: VerifyVerb,
    },
    /// Generate known sphere classes
    Construct {
        #[command(subcommand)]
        which: ConstructVerb,
    },
    /// Validate a configuration file
    ConfigCheck {
        file: String,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Recognize an ADE plumbing of (-2)-classes
    AdeRecognize {
        /// One vertex class; repeat for each vertex
        #[arg(long = "class", required = true, allow_hyphen_values = true)]
        classes: Vec<String>,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Exceptional classes inside a coefficient box
    ExceptionalEnum {
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        canonical: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyVerb {
    /// Solutions in the exceptional window
    Window {
        #[arg(long, allow_hyphen_values = true)]
        square: i64,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Reduced solutions inside a box (uses -k)
    Nonexistence {
        #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
        square: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 2)]
        d_max: i64,
        #[arg(long, allow_hyphen_values = true)]
        d_min: Option<i64>,
        #[arg(long, default_value_t = 1)]
        tau: i64,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        last_b: Option<i64>,
    },
    /// Grid search of the normal form (uses -k)
    NormalForm {
        #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
        square: i64,
        #[arg(long)]
        tau: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        b_max: Option<i64>,
        #[arg(long)]
        resolution: Option<i64>,
    },
    /// Ruled |c_i| bound (uses --genus)
    CiBound {
        #[arg(long)]
        k_max: usize,
        #[arg(long)]
        f_bound: Option<i64>,
        #[arg(long)]
        c_bound: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstructVerb {
    /// (3a; a x 9, 2)
    Type3 {
        #[arg(long)]
        a: i64,
    },
    /// Singular-curve family with perturbation vector k_1..k_9
    Singular {
        #[arg(long)]
        a: i64,
        /// Nine comma-separated values; all zero when omitted
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        perturb: Vec<i64>,
    },
    /// The two square -20 classes on CP^2 # 20
    MinusTwenty,
    /// Blow up points of given multiplicities on a class
    Blowup {
        #[arg(allow_hyphen_values = true)]
        class: String,
        #[arg(long, value_delimiter = ',')]
        mults: Vec<i64>,
    },
    /// n F on a ruled manifold
    FiberMultiple {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
}

/// File-based defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub threads: Option<usize>,
    pub window_k_max: Option<usize>,
    pub bound: Option<i64>,
    pub f_bound: Option<i64>,
    pub c_bound: Option<i64>,
    pub b_max: Option<i64>,
    pub resolution: Option<i64>,
    pub exceptional_bound: Option<i64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }

    fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) => Self::load(Path::new(&p)),
            None => Ok(Config::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::input(e.to_string())
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    value: Value,
    text: String,
    counterexample: bool,
}

impl Report {
    fn plain(value: Value) -> Self {
        let text = text_of(&value);
        Report {
            value,
            text,
            counterexample: false,
        }
    }
}

fn text_of(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {s}\n"));
        }
    } else {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

fn tuples_text(header: &Value, rows: &[Vec<i64>]) -> String {
    let mut out = text_of(header);
    for r in rows {
        out.push_str(&tuple_text(r));
        out.push('\n');
    }
    out
}

/// Largest `E` index or list length in a literal.
fn infer_k(lit: &str) -> usize {
    let t = lit.trim();
    let list_len = |inner: &str| inner.split(',').filter(|s| !s.trim().is_empty()).count();
    if let Some(rest) = t.strip_prefix('[') {
        return rest
            .split_once(';')
            .map(|(_, tail)| list_len(tail.trim_end_matches(']')))
            .unwrap_or(0);
    }
    if t.starts_with('{') {
        return t
            .split_once("c:")
            .and_then(|(_, tail)| tail.split_once('[').map(|(_, x)| x))
            .and_then(|x| x.split_once(']').map(|(inner, _)| list_len(inner)))
            .unwrap_or(0);
    }
    let bytes = t.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'E' {
            let j = i + 1;
            let mut e = j;
            while e < bytes.len() && bytes[e].is_ascii_digit() {
                e += 1;
            }
            if let Ok(v) = t[j..e].parse::<usize>() {
                best = best.max(v);
            }
            i = e.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

struct Ctx {
    g: GlobalOpts,
    cfg: Config,
}

impl Ctx {
    fn manifold(&self, literals: &[&str]) -> Result<Manifold, CliError> {
        let k = self
            .g
            .k
            .unwrap_or_else(|| literals.iter().map(|l| infer_k(l)).max().unwrap_or(0));
        if self.g.ruled {
            Ok(Manifold::ruled(self.g.h, k)?)
        } else {
            Ok(Manifold::rational(k))
        }
    }

    fn manifold_k(&self) -> Result<Manifold, CliError> {
        let k = self
            .g
            .k
            .ok_or_else(|| CliError::input("this verb needs -k"))?;
        if self.g.ruled {
            Ok(Manifold::ruled(self.g.h, k)?)
        } else {
            Ok(Manifold::rational(k))
        }
    }
}

fn manifold_json(m: &Manifold) -> Value {
    serde_json::to_value(m).expect("manifold serializes")
}

fn class_json(c: &Class) -> Value {
    json!({ "literal": format_class(c), "coefficients": c })
}

fn omega_opt(s: &Option<String>, m: &Manifold) -> Result<Option<CohomologyClass>, CliError> {
    s.as_deref()
        .map(|w| parse_cohomology(w, m))
        .transpose()
        .map_err(Into::into)
}

fn run_reduce(ctx: &Ctx, class: &str) -> Result<Report, CliError> {
    let m = ctx.manifold(&[class])?;
    let a = parse_class(class, &m)?;
    let value = match &a {
        Class::Rational(r) => {
            let res = reduce(r);
            let out = Class::Rational(res.result.clone());
            json!({
                "version": crate::VERSION,
                "manifold": manifold_json(&m),
                "input": class_json(&a),
                "result": class_json(&out),
                "status": res.status,
                "moves": res.moves,
            })
        }
        Class::Ruled(r) => match reduce_ruled(r) {
            Some(res) => {
                let out = Class::Ruled(res.result.clone());
                json!({
                    "version": crate::VERSION,
                    "manifold": manifold_json(&m),
                    "input": class_json(&a),
                    "result": class_json(&out),
                    "status": res.form,
                    "moves": res.moves,
                })
            }
            None => json!({
                "version": crate::VERSION,
                "manifold": manifold_json(&m),
                "input": class_json(&a),
                "result": Value::Null,
                "status": "outside the negative-square sphere orbit",
                "moves": [],
            }),
        },
    };
    Ok(Report::plain(value))
}

fn run_classify(ctx: &Ctx, class: &str, omega: &Option<String>) -> Result<Report, CliError> {
    let m = ctx.manifold(&[class])?;
    let a = parse_class(class, &m)?;
    let w = omega_opt(omega, &m)?;
    let v = classify(&a, &m, w.as_ref())?;
    let mut value = serde_json::to_value(&v).expect("verdict serializes");
    value["literal"] = json!(format_class(&a));
    let text = format!(
        "class: {}\nsquare: {}\nsmooth: {:?} {}\nsymplectic (some form): {}\nnever symplectic: {}\nreasons: {}\n",
        format_class(&a),
        v.square,
        v.smooth.representable,
        v.smooth.type_tag,
        v.symplectic.representable_for_some_form,
        v.symplectic.never_symplectic,
        v.reasons.iter().map(|r| r.code.to_string()).collect::<Vec<_>>().join(", "),
    );
    Ok(Report {
        value,
        text,
        counterexample: false,
    })
}

fn run_genus(ctx: &Ctx, class: &str, canonical: &Option<String>) -> Result<Report, CliError> {
    let lits: Vec<&str> = std::iter::once(class).chain(canonical.as_deref()).collect();
    let m = ctx.manifold(&lits)?;
    let a = parse_class(class, &m)?;
    let k = match canonical {
        Some(s) => parse_class(s, &m)?,
        None => Class::canonical_std(&m),
    };
    let rep = genus_report(&a, &k, &m)?;
    let sg = match &a {
        Class::Rational(r) => {
            let red = reduce(r).result;
            symplectic_genus_reduced(&red).ok().map(|g| g.to_string())
        }
        Class::Ruled(_) => None,
    };
    Ok(Report::plain(json!({
        "version": crate::VERSION,
        "manifold": manifold_json(&m),
        "class": class_json(&a),
        "report": rep,
        "reduced_genus_k_st": sg,
    })))
}

fn timed_value(timing: bool, mut v: Value, ms: u128) -> Value {
    if timing {
        v["elapsed_ms"] = json!(ms);
    }
    v
}

fn run_verify(ctx: &Ctx, which: &VerifyVerb) -> Result<Report, CliError> {
    let cfg = &ctx.cfg;
    let start = Instant::now();
    match which {
        VerifyVerb::Window { square, k_max } => {
            let k_max = k_max.or(cfg.window_k_max).unwrap_or(64);
            let rep = enumerate_window_solutions(*square, k_max)?;
            let v = timed_value(
                ctx.g.timing,
                serde_json::to_value(&rep).expect("json"),
                start.elapsed().as_millis(),
            );
            let header = json!({"square": square, "k_max": k_max, "complete": rep.complete, "count": rep.solutions.len()});
            Ok(Report {
                text: tuples_text(&header, &rep.solutions),
                value: v,
                counterexample: false,
            })
        }
        VerifyVerb::Nonexistence {
            square,
            d_max,
            d_min,
            tau,
            bound,
            last_b,
        } => {
            let k = ctx
                .g
                .k
                .ok_or_else(|| CliError::input("verify nonexistence needs -k"))?;
            let mut sys =
                ConstraintSystem::new(*square, k, *d_max, *tau, bound.or(cfg.bound).unwrap_or(40));
            sys.d_min = *d_min;
            sys.last_b = *last_b;
            let rep = verify_reduced_nonexistence(&sys)?;
            let unexplained: Vec<Vec<i64>> = rep
                .solutions
                .iter()
                .filter(|r| !is_equal_entry_solution(r))
                .cloned()
                .collect();
            let mut v = serde_json::to_value(&rep).expect("json");
            v["unexplained"] = json!(unexplained);
            let v = timed_value(ctx.g.timing, v, start.elapsed().as_millis());
            let header = json!({"system": rep.system, "box": rep.search_box, "scope": rep.scope, "count": rep.solutions.len(), "unexplained": unexplained.len()});
            Ok(Report {
                text: tuples_text(&header, &rep.solutions),
                value: v,
                counterexample: !unexplained.is_empty(),
            })
        }
        VerifyVerb::NormalForm {
            square,
            tau,
            d,
            b_max,
            resolution,
        } => {
            let k = ctx
                .g
                .k
                .ok_or_else(|| CliError::input("verify normal-form needs -k"))?;
            let rep = verify_normal_form(
                *square,
                k,
                *tau,
                *d,
                b_max.or(cfg.b_max).unwrap_or(12),
                resolution.or(cfg.resolution).unwrap_or(2),
            )?;
            let bad = rep.consistent == Some(false);
            let v = timed_value(
                ctx.g.timing,
                serde_json::to_value(&rep).expect("json"),
                start.elapsed().as_millis(),
            );
            let mut text = text_of(&json!({
                "case": rep.case, "expected_infeasible": rep.expected_infeasible, "consistent": rep.consistent,
                "comparison_b1": rep.comparison_b1, "comparison_f_nonnegative": rep.comparison_f_nonnegative,
            }));
            for s in &rep.slices {
                text.push_str(&format!(
                    "r={} points={} feasible={}\n",
                    s.r, s.grid_points, s.feasible
                ));
            }
            Ok(Report {
                value: v,
                text,
                counterexample: bad,
            })
        }
        VerifyVerb::CiBound {
            k_max,
            f_bound,
            c_bound,
        } => {
            let rep = verify_ci_bound(
                ctx.g.h,
                *k_max,
                f_bound.or(cfg.f_bound).unwrap_or(10),
                c_bound.or(cfg.c_bound).unwrap_or(5),
            )?;
            let bad = !rep.violations.is_empty() || !rep.off_shape.is_empty();
            let header = json!({"h": rep.h, "k_max": rep.k_max, "examined": rep.examined, "survivors": rep.survivors.len(), "violations": rep.violations.len(), "off_shape": rep.off_shape.len(), "scope": rep.scope});
            let text = tuples_text(&header, &rep.violations);
            let v = timed_value(
                ctx.g.timing,
                serde_json::to_value(&rep).expect("json"),
                start.elapsed().as_millis(),
            );
            Ok(Report {
                value: v,
                text,
                counterexample: bad,
            })
        }
    }
}

fn construct_record(c: &Class, m: &Manifold, extra: Value) -> Result<Value, CliError> {
    let k = Class::canonical_std(m);
    let genus = genus_report(c, &k, m)?;
    let verdict = classify(c, m, None)?;
    Ok(json!({
        "version": crate::VERSION,
        "manifold": manifold_json(m),
        "class": class_json(c),
        "generator": extra,
        "genus": genus,
        "verdict": verdict,
    }))
}

fn run_construct(ctx: &Ctx, which: &ConstructVerb) -> Result<Report, CliError> {
    let value = match which {
        ConstructVerb::Type3 { a } => {
            let c = Class::Rational(family_type3(*a)?);
            construct_record(
                &c,
                &Manifold::rational(10),
                json!({"family": "type3", "a": a}),
            )?
        }
        ConstructVerb::Singular { a, perturb } => {
            let kp: [i64; 9] = if perturb.is_empty() {
                [0; 9]
            } else {
                perturb
                    .clone()
                    .try_into()
                    .map_err(|_| CliError::input("--perturb needs 9 values"))?
            };
            let fam = singular_family(&FamilyParams::new(*a, kp)?);
            let m = Manifold::rational(fam.m);
            let c = Class::Rational(fam.class.clone());
            construct_record(
                &c,
                &m,
                json!({"family": "singular", "params": fam.params, "n": fam.n, "m": fam.m}),
            )?
        }
        ConstructVerb::MinusTwenty => {
            let (a1, a2) = minus_twenty_pair();
            let eq = equivalent(&a1, &a2)?;
            let m = Manifold::rational(20);
            json!({
                "version": crate::VERSION,
                "manifold": manifold_json(&m),
                "first": construct_record(&Class::Rational(a1), &m, json!({"family": "singular", "a": 4, "perturb": [0,0,0,0,0,0,1,1,1], "extra_blowup": 1}))?,
                "second": construct_record(&Class::Rational(a2), &m, json!({"family": "singular", "a": 4, "perturb": [0,0,0,0,0,0,0,2,2]}))?,
                "equivalent": eq,
            })
        }
        ConstructVerb::Blowup { class, mults } => {
            let m = ctx.manifold(&[class])?;
            let a = parse_class(class, &m)?;
            let out = blowup(&a, mults);
            let m2 = match m {
                Manifold::Rational { k } => Manifold::rational(k + mults.len()),
                Manifold::Ruled { h, k } => Manifold::ruled(h, k + mults.len())?,
            };
            construct_record(
                &out,
                &m2,
                json!({"family": "blowup", "from": format_class(&a), "mults": mults}),
            )?
        }
        ConstructVerb::FiberMultiple { n } => {
            let k = ctx.g.k.unwrap_or(0);
            let m = Manifold::ruled(ctx.g.h, k)?;
            let c = Class::Ruled(fiber_multiple(*n, k));
            construct_record(&c, &m, json!({"family": "fiber_multiple", "n": n}))?
        }
    };
    Ok(Report::plain(value))
}

fn run_config_check(ctx: &Ctx, file: &str, omega: &Option<String>) -> Result<Report, CliError> {
    let text =
        std::fs::read_to_string(file).map_err(|e| CliError::input(format!("{file}: {e}")))?;
    let m = match ctx.g.k {
        Some(_) => ctx.manifold_k()?,
        None => {
            let doc: Value = serde_json::from_str(&text)?;
            let lits: Vec<&str> = doc["vertices"]
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_str).collect())
                .unwrap_or_default();
            ctx.manifold(&lits)?
        }
    };
    let g = Configuration::from_json(&text, &m)?;
    let rep = validate_configuration(&g, &m);
    let w = omega_opt(omega, &m)?;
    let positive = w.map(|w| is_g_positive(&w, &g, &m)).transpose()?;
    Ok(Report::plain(json!({
        "version": crate::VERSION,
        "manifold": manifold_json(&m),
        "vertices": g.vertices.iter().map(format_class).collect::<Vec<_>>(),
        "valid": rep.valid,
        "simple": rep.simple,
        "diagnostics": rep.diagnostics,
        "g_positive": positive,
        "scope": rep.scope,
    })))
}

fn run_ade(ctx: &Ctx, classes: &[String], omega: &Option<String>) -> Result<Report, CliError> {
    let lits: Vec<&str> = classes.iter().map(String::as_str).collect();
    let m = ctx.manifold(&lits)?;
    let cs = classes
        .iter()
        .map(|s| parse_class(s, &m))
        .collect::<Result<Vec<_>, _>>()?;
    let w = omega_opt(omega, &m)?;
    let value = match recognize_ade(&cs, w.as_ref(), &m) {
        Ok(p) => json!({
            "version": crate::VERSION,
            "manifold": manifold_json(&m),
            "recognized": true,
            "type": p.dynkin,
            "match": p.match_kind,
            "signs": p.signs,
            "correspondence": p.correspondence,
            "classes": p.classes.iter().map(format_class).collect::<Vec<_>>(),
            "compactifying_divisors": p.compactifying_divisors.iter().map(format_class).collect::<Vec<_>>(),
            "reduced_forms": p.reduced_forms.iter().map(format_class).collect::<Vec<_>>(),
        }),
        Err(e) => json!({
            "version": crate::VERSION,
            "manifold": manifold_json(&m),
            "recognized": false,
            "reason": e.reason,
        }),
    };
    Ok(Report::plain(value))
}

fn run_exceptional(
    ctx: &Ctx,
    bound: Option<i64>,
    canonical: &Option<String>,
) -> Result<Report, CliError> {
    let m = ctx.manifold_k()?;
    let k = match canonical {
        Some(s) => parse_class(s, &m)?,
        None => Class::canonical_std(&m),
    };
    let bound = bound.or(ctx.cfg.exceptional_bound).unwrap_or(3);
    let list = enumerate_exceptional(&k, &m, bound)?;
    let lits: Vec<String> = list.classes.iter().map(format_class).collect();
    let value = json!({
        "version": crate::VERSION,
        "manifold": manifold_json(&m),
        "canonical": format_class(&k),
        "bound": bound,
        "complete": list.complete,
        "count": lits.len(),
        "classes": lits,
    });
    let mut text =
        text_of(&json!({"bound": bound, "complete": list.complete, "count": lits.len()}));
    for l in &lits {
        text.push_str(l);
        text.push('\n');
    }
    Ok(Report {
        value,
        text,
        counterexample: false,
    })
}

fn dispatch(ctx: &Ctx, verb: &Verb) -> Result<Report, CliError> {
    match verb {
        Verb::Reduce { class } => run_reduce(ctx, class),
        Verb::Classify { class, omega } => run_classify(ctx, class, omega),
        Verb::Genus { class, canonical } => run_genus(ctx, class, canonical),
        Verb::Verify { which } => run_verify(ctx, which),
        Verb::Construct { which } => run_construct(ctx, which),
        Verb::ConfigCheck { file, omega } => run_config_check(ctx, file, omega),
        Verb::AdeRecognize { classes, omega } => run_ade(ctx, classes, omega),
        Verb::ExceptionalEnum { bound, canonical } => run_exceptional(ctx, *bound, canonical),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let err = |e: CliError| Outcome {
        code: e.code,
        stdout: String::new(),
        stderr: format!("error: {}\n", e.message),
    };
    let cfg = match Config::from_env() {
        Ok(c) => c,
        Err(e) => return err(e),
    };
    let is_verify = matches!(cli.verb, Verb::Verify { .. });
    let threads = if is_verify {
        cli.global.threads.or(cfg.threads).unwrap_or(0)
    } else {
        1
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return err(CliError::input(e.to_string())),
    };
    let output = cli.global.output;
    let ctx = Ctx { g: cli.global, cfg };
    match pool.install(|| dispatch(&ctx, &cli.verb)) {
        Ok(rep) => {
            let stdout = match output {
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&rep.value).expect("json");
                    s.push('\n');
                    s
                }
                OutputFormat::Text => rep.text,
            };
            Outcome {
                code: if rep.counterexample { 3 } else { 0 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infer_k_examples() {
        assert_eq!(infer_k("6H -2E1 .. -2E9 -2E10"), 10);
        assert_eq!(infer_k("[6; 2,2,2]"), 3);
        assert_eq!(infer_k("{s:0, f:-2, c:[1,1,1,-1]}"), 4);
        assert_eq!(infer_k("3H"), 0);
    }

    #[test]
    fn exit_codes() {
        let o = run(["sphereclass", "classify", "E11", "-k", "10"]);
        assert_eq!(o.code, 2);
        let o = run(["sphereclass", "bogus"]);
        assert_eq!(o.code, 2);
        let o = run(["sphereclass", "reduce", "-k", "3", "1H -2E1 -1E2"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("ExceptionalWindow"));
    }
}
