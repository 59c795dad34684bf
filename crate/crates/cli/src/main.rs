//! Command-line front end for the graded variational calculus engine.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use varcalc::exec::Exec;
use varcalc::frontend::{
    corpus_names, jacobi_trial, parse_expression, parse_method, print_density, print_functional, print_operator,
    print_polynomial, print_wedge_density, print_wedge_poly, run_check, trial_triple, CheckOptions, ProblemSpec,
    Verdict,
};
use varcalc::graded::{quotient_to_standard, variational_derivative, LocalFunctional};
use varcalc::jet::{euler_lagrange, higher_euler_all, DiffPolynomial, MultiIndex};
use varcalc::operators::GradedDiffOperator;
use varcalc::poisson::{jacobi_residual, poisson_bracket, poisson_bracket_frechet, trivector_value, PoissonCandidate};
use varcalc::tensors::{multivector_is_zero, sn_bracket, sn_bracket_bivectors, Vector, ZeroOptions};
use varcalc::{Error, Space};

#[derive(Parser)]
#[command(name = "varcalc", version, about = "Boundary-aware Poisson brackets and Hamiltonian structure checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Spatial dimension for inline expressions.
    #[arg(long, global = true, default_value_t = 1)]
    dim: usize,
    /// Comma-separated field names for inline expressions.
    #[arg(long, global = true, default_value = "u")]
    fields: String,
    /// Problem file supplying fields, operator and functionals.
    #[arg(long, global = true, conflicts_with = "corpus")]
    problem: Option<String>,
    /// Built-in corpus entry used as the problem.
    #[arg(long, global = true)]
    corpus: Option<String>,
    /// Operator expression (overrides the problem's operator).
    #[arg(long, global = true)]
    operator: Option<String>,
    /// Antisymmetrize an inline `--operator` before use.
    #[arg(long, global = true)]
    antisymmetrize: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest derivative order used by the divergence search.
    #[arg(long, global = true)]
    order_bound: Option<u32>,
    /// Number of randomized Jacobi trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Zero-test method: rewrite or span.
    #[arg(long, global = true)]
    method: Option<String>,
    /// Run sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Report wall-clock time (text and JSON).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical grading-zero form of a functional.
    Canon { expr: String },
    /// Graded adjoint of an operator.
    Adjoint { expr: String },
    /// Antisymmetric part (I - I*)/2 of an operator.
    Antisym { expr: String },
    /// Higher Euler operators E^J of a density.
    Euler {
        expr: String,
        /// Field to differentiate against (default: the first).
        #[arg(long)]
        field: Option<String>,
    },
    /// Graded variational derivative of a functional.
    Vder { expr: String },
    /// Poisson bracket {F, G} with its bulk and boundary parts.
    Bracket { f: String, g: String },
    /// Self Schouten-Nijenhuis bracket of the operator's bivector.
    Sn,
    /// Hamiltonian verdict for the operator.
    Check,
    /// Jacobi residual on a named triple, or randomized trials.
    Jacobi { functionals: Vec<String> },
    /// The built-in corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List entries.
    List,
    /// Check entries (all when none are named).
    Run { names: Vec<String> },
}

/// Result of a command: text, JSON, and whether a structure failed the test.
struct Output {
    text: String,
    json: Value,
    not_hamiltonian: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output { text, json, not_hamiltonian: false }
    }
}

struct Context {
    g: Global,
    problem: Option<ProblemSpec>,
    space: Space,
}

impl Context {
    fn new(g: Global) -> Result<Self, Error> {
        let problem = match (&g.problem, &g.corpus) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Problem(format!("{path}: {e}")))?;
                Some(ProblemSpec::from_toml(&text)?)
            }
            (None, Some(name)) => Some(ProblemSpec::from_corpus(name)?),
            (None, None) => None,
        };
        let space = match &problem {
            Some(p) => p.space.clone(),
            None => {
                let names: Vec<&str> = g.fields.split(',').map(str::trim).collect();
                Space::new(g.dim, &names)?
            }
        };
        Ok(Context { g, problem, space })
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn exec(&self) -> Exec {
        if self.g.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }

    fn options(&self, base: &CheckOptions) -> Result<CheckOptions, Error> {
        let mut o = base.clone();
        if let Some(m) = &self.g.method {
            o.method = parse_method(m)?;
        }
        if self.g.order_bound.is_some() {
            o.order_bound = self.g.order_bound;
        }
        if let Some(t) = self.g.trials {
            o.trials = t;
        }
        if let Some(s) = self.g.seed {
            o.seed = s;
        }
        Ok(o)
    }

    fn zero_options(&self) -> Result<ZeroOptions, Error> {
        let o = self.options(&CheckOptions::default())?;
        Ok(ZeroOptions { method: o.method, order_bound: o.order_bound, exec: self.exec(), ..ZeroOptions::default() })
    }

    fn parse_operator(&self, text: &str) -> Result<GradedDiffOperator, Error> {
        parse_expression(&self.space, text)?.into_operator(self.dim())
    }

    /// The problem spec to analyze, with `--operator` substituted if given.
    fn spec(&self) -> Result<ProblemSpec, Error> {
        match (&self.g.operator, self.problem.as_ref()) {
            (None, Some(p)) => Ok(p.clone()),
            (Some(text), base) => {
                let raw = self.parse_operator(text)?;
                let operator = if self.g.antisymmetrize { raw.antisymmetrize() } else { raw.clone() };
                Ok(ProblemSpec {
                    name: base.map(|p| p.name.clone()).unwrap_or_else(|| "inline".into()),
                    description: String::new(),
                    space: self.space.clone(),
                    raw_operator: raw,
                    operator,
                    antisymmetrized: self.g.antisymmetrize,
                    functionals: base.map(|p| p.functionals.clone()).unwrap_or_default(),
                    options: base.map(|p| p.options.clone()).unwrap_or_default(),
                })
            }
            (None, None) => {
                Err(Error::Problem("no operator given; use --operator, --problem or --corpus".into()))
            }
        }
    }

    fn candidate(&self) -> Result<(ProblemSpec, PoissonCandidate), Error> {
        let spec = self.spec()?;
        let p = PoissonCandidate::new(spec.operator.clone())?;
        Ok((spec, p))
    }

    /// A functional given inline or by its name in the problem file.
    fn functional(&self, spec: Option<&ProblemSpec>, arg: &str) -> Result<LocalFunctional, Error> {
        if let Some(f) = spec.and_then(|s| s.functional(arg)) {
            return Ok(f.clone());
        }
        parse_expression(&self.space, arg)?.into_functional(self.dim())
    }
}

fn canon(cx: &Context, expr: &str) -> Result<Output, Error> {
    let f = parse_expression(&cx.space, expr)?.into_functional(cx.dim())?;
    let c = f.canonical();
    let std_class = quotient_to_standard(&f.density, cx.space.num_fields());
    let canonical = print_functional(&cx.space, &c);
    let text = format!(
        "{canonical}\nzero: {}\nclassically zero: {}",
        yes_no(c.is_zero()),
        yes_no(std_class.is_zero())
    );
    Ok(Output::new(
        text,
        json!({"input": print_functional(&cx.space, &f), "canonical": canonical, "zero": c.is_zero(), "standard_zero": std_class.is_zero()}),
    ))
}

fn adjoint(cx: &Context, expr: &str, antisym: bool) -> Result<Output, Error> {
    let op = cx.parse_operator(expr)?;
    let out = if antisym { op.antisymmetrize() } else { op.adjoint() };
    let printed = print_operator(&cx.space, &out);
    let key = if antisym { "antisymmetrized" } else { "adjoint" };
    let text = format!("{printed}\nantisymmetric input: {}", yes_no(op.is_antisymmetric()));
    Ok(Output::new(
        text,
        json!({"operator": print_operator(&cx.space, &op), key: printed, "antisymmetric": op.is_antisymmetric()}),
    ))
}

fn field_index(cx: &Context, field: Option<&str>) -> Result<usize, Error> {
    match field {
        None => Ok(0),
        Some(name) => cx.space.field_index(name).ok_or_else(|| Error::Undeclared(name.into())),
    }
}

fn index_label(j: &MultiIndex) -> String {
    format!("{j:?}")
}

fn euler(cx: &Context, expr: &str, field: Option<&str>) -> Result<Output, Error> {
    let a = field_index(cx, field)?;
    let f: DiffPolynomial = match parse_expression(&cx.space, expr)? {
        varcalc::frontend::Parsed::Polynomial(p) => p,
        other => other.into_functional(cx.dim())?.canonical_density(),
    };
    let comps = higher_euler_all(&f, a);
    let name = cx.space.field_name(a);
    let mut lines = Vec::new();
    let mut map = serde_json::Map::new();
    for (j, e) in &comps {
        let p = print_polynomial(&cx.space, e);
        lines.push(format!("E^{}[{name}] = {p}", index_label(j)));
        map.insert(index_label(j), Value::String(p));
    }
    let el = print_polynomial(&cx.space, &euler_lagrange(&f, a, cx.dim()));
    lines.push(format!("euler-lagrange[{name}] = {el}"));
    Ok(Output::new(lines.join("\n"), json!({"field": name, "components": map, "euler_lagrange": el})))
}

fn vder(cx: &Context, expr: &str) -> Result<Output, Error> {
    let f = parse_expression(&cx.space, expr)?.into_functional(cx.dim())?;
    let mut lines = Vec::new();
    let mut fields = serde_json::Map::new();
    for a in 0..cx.space.num_fields() {
        let v = variational_derivative(&f, a);
        let name = cx.space.field_name(a);
        let mut map = serde_json::Map::new();
        for (j, c) in &v.components {
            let p = print_polynomial(&cx.space, c);
            lines.push(format!("δ/δ{name}^{} = {p}", index_label(j)));
            map.insert(index_label(j), Value::String(p));
        }
        fields.insert(name.to_string(), Value::Object(map));
    }
    if lines.is_empty() {
        lines.push("0".into());
    }
    Ok(Output::new(lines.join("\n"), json!({"functional": print_functional(&cx.space, &f), "components": fields})))
}

fn bracket(cx: &Context, f: &str, g: &str) -> Result<Output, Error> {
    let (spec, p) = cx.candidate()?;
    let (fv, gv) = (cx.functional(Some(&spec), f)?, cx.functional(Some(&spec), g)?);
    let b = poisson_bracket(&fv, &gv, &p)?;
    let frechet = poisson_bracket_frechet(&fv, &gv, &p)?;
    let s = &cx.space;
    let value = print_functional(s, &b.value);
    let canonical = print_functional(s, &b.value.canonical());
    let bulk = print_polynomial(s, &b.bulk);
    let boundary = print_density(s, &b.boundary);
    let standard = print_polynomial(s, &quotient_to_standard(&b.value.density, p.fields()).representative);
    let paths_agree = frechet.equals(&b.value);
    let text = format!(
        "bracket: {value}\nbulk: {bulk}\nboundary: {boundary}\ncanonical: {canonical}\nstandard: {standard}\nfrechet path agrees: {}",
        yes_no(paths_agree)
    );
    Ok(Output::new(
        text,
        json!({"value": value, "bulk": bulk, "boundary": boundary, "canonical": canonical, "standard": standard, "paths_agree": paths_agree}),
    ))
}

fn sn(cx: &Context) -> Result<Output, Error> {
    let (spec, p) = cx.candidate()?;
    let s = &cx.space;
    let tri = sn_bracket_bivectors(p.operator(), p.operator())?;
    let zopts = cx.zero_options()?;
    let general = sn_bracket(p.bivector(), p.bivector())?;
    let agrees = multivector_is_zero(&general.sub(&tri), &zopts)?.is_zero;
    let zt = multivector_is_zero(&tri, &zopts)?;
    let printed = print_wedge_density(s, &tri);
    let residue = print_wedge_poly::<Vector>(s, &zt.residue);
    let text = format!(
        "operator: {}\ntrivector: {printed}\nresidue: {residue}\nzero modulo divergences: {}\ngeneral bracket agrees: {}",
        print_operator(s, &spec.operator),
        yes_no(zt.is_zero),
        yes_no(agrees)
    );
    Ok(Output::new(
        text,
        json!({"operator": print_operator(s, &spec.operator), "trivector": printed, "residue": residue, "zero": zt.is_zero, "general_agrees": agrees}),
    ))
}

fn check(cx: &Context) -> Result<Output, Error> {
    let spec = cx.spec()?;
    let opts = cx.options(&spec.options)?;
    let v = timed_check(cx, &spec, &opts)?;
    let not_hamiltonian = !v.hamiltonian;
    Ok(Output { text: v.to_text(), json: serde_json::to_value(&v).expect("verdict"), not_hamiltonian })
}

fn timed_check(cx: &Context, spec: &ProblemSpec, opts: &CheckOptions) -> Result<Verdict, Error> {
    let start = Instant::now();
    let mut v = run_check(spec, opts, cx.exec())?;
    if cx.g.timing {
        v.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(v)
}

fn jacobi(cx: &Context, names: &[String]) -> Result<Output, Error> {
    let (spec, p) = cx.candidate()?;
    let s = &cx.space;
    let tri = sn_bracket_bivectors(p.operator(), p.operator())?;
    match names.len() {
        3 => {
            let fs: Vec<LocalFunctional> =
                names.iter().map(|n| cx.functional(Some(&spec), n)).collect::<Result<_, _>>()?;
            let jac = jacobi_residual(&fs[0], &fs[1], &fs[2], &p)?;
            let value = trivector_value(&tri, &fs[0], &fs[1], &fs[2])?;
            let agrees = jac.add(&value.scale(&varcalc::ratio(1, 2))).is_zero();
            let (jc, vc) = (print_functional(s, &jac.canonical()), print_functional(s, &value.canonical()));
            let text = format!(
                "jacobi residual: {jc}\ntrivector value: {vc}\nresidual = -1/2 value: {}",
                yes_no(agrees)
            );
            Ok(Output::new(text, json!({"residual": jc, "trivector_value": vc, "agrees": agrees, "residual_zero": jac.is_zero()})))
        }
        0 => {
            let opts = cx.options(&spec.options)?;
            let outcomes = cx.exec().map_range(opts.trials, |i| jacobi_trial(&p, &tri, &trial_triple(s, opts.seed, i)));
            let (mut agreed, mut vanished) = (0, 0);
            for o in outcomes {
                let (a, z) = o?;
                agreed += a as usize;
                vanished += z as usize;
            }
            let text = format!(
                "{agreed}/{} trials agree with -1/2 trivector value; residual vanished in {vanished} (seed {})",
                opts.trials, opts.seed
            );
            Ok(Output::new(text, json!({"trials": opts.trials, "seed": opts.seed, "agreed": agreed, "vanished": vanished})))
        }
        n => Err(Error::Problem(format!("jacobi takes three functionals or none, got {n}"))),
    }
}

fn corpus(cx: &Context, action: &CorpusAction) -> Result<Output, Error> {
    match action {
        CorpusAction::List => {
            let mut lines = Vec::new();
            let mut entries = Vec::new();
            for name in corpus_names() {
                let p = ProblemSpec::from_corpus(name)?;
                lines.push(format!("{name}: {}", p.description));
                entries.push(json!({"name": name, "description": p.description}));
            }
            Ok(Output::new(lines.join("\n"), Value::Array(entries)))
        }
        CorpusAction::Run { names } => {
            let names: Vec<String> =
                if names.is_empty() { corpus_names().into_iter().map(String::from).collect() } else { names.clone() };
            let specs: Vec<ProblemSpec> =
                names.iter().map(|n| ProblemSpec::from_corpus(n)).collect::<Result<_, _>>()?;
            let verdicts = cx.exec().map(&specs, |spec| {
                let opts = cx.options(&spec.options)?;
                timed_check(cx, spec, &opts)
            });
            let verdicts: Vec<Verdict> = verdicts.into_iter().collect::<Result<_, _>>()?;
            let text = verdicts.iter().map(Verdict::to_text).collect::<Vec<_>>().join("\n\n");
            Ok(Output::new(text, serde_json::to_value(&verdicts).expect("verdicts")))
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli) -> Result<Output, Error> {
    let format_check = cli.global.method.clone();
    if let Some(m) = format_check {
        parse_method(&m)?;
    }
    let cx = Context::new(cli.global)?;
    match &cli.command {
        Command::Canon { expr } => canon(&cx, expr),
        Command::Adjoint { expr } => adjoint(&cx, expr, false),
        Command::Antisym { expr } => adjoint(&cx, expr, true),
        Command::Euler { expr, field } => euler(&cx, expr, field.as_deref()),
        Command::Vder { expr } => vder(&cx, expr),
        Command::Bracket { f, g } => bracket(&cx, f, g),
        Command::Sn => sn(&cx),
        Command::Check => check(&cx),
        Command::Jacobi { functionals } => jacobi(&cx, functionals),
        Command::Corpus { action } => corpus(&cx, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let is_check = matches!(cli.command, Command::Check);
    match run(cli) {
        Ok(out) => {
            let body = match format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json"),
            };
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{body}");
            if is_check && out.not_hamiltonian {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
