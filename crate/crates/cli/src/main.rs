//! Command-line front end for the idyll library.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use idyll::algebra::axioms::check_idyll_axioms;
use idyll::algebra::{Elem, Idyll};
use idyll::demo::{run_demo, DEMOS};
use idyll::extension::{check_extension_axioms, product_differences};
use idyll::mult::lift::{lift_chain, lift_factorization};
use idyll::mult::{degree_bound_check, divide_once, mult_with_engine, multiplicity, Engine};
use idyll::newton::{initial_form_at, newton_polygon, render_ascii, render_svg};
use idyll::oracle::run_suite;
use idyll::poly::{sign_of_poly, trop_of_rational, trop_real_of_rational, Polynomial};
use idyll::text::{format_elem, parse_elem, parse_poly, poly_to_json};
use idyll::{Error, Rat, Result};

#[derive(Parser, Debug)]
#[command(name = "idyll", version, about = "Roots and multiplicities of polynomials over idylls")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Idyll name: krasner, sign, phase, f1pm, field:Q, field:GF(p),
    /// quot:GF(p)/{..}, oag:rank-n, trop, trop-real, trop:rank-n,
    /// trop-real:rank-n, ext:<base>:<rank>.
    #[arg(long, short = 'i')]
    idyll: String,

    /// Polynomial, e.g. "1 - x + x^2" or "2 + 1*x + 0*x^2".
    #[arg(long, short = 'p', allow_hyphen_values = true)]
    poly: String,

    /// Overrides the rank of a tropical, tropical real or OAG idyll.
    #[arg(long)]
    rank: Option<usize>,

    /// Read the polynomial over Q and push it to the idyll with the
    /// p-adic valuation.
    #[arg(long)]
    prime: Option<u64>,

    /// Read the polynomial over Q and push it to the idyll (sign, or a
    /// tropical idyll together with --prime).
    #[arg(long)]
    rational: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Search,
    Closed,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Search => Engine::Search,
            EngineArg::Closed => Engine::Closed,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Ascii,
    Svg,
    Json,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Multiplicity of a root.
    Mult {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'a', allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value = "search")]
        engine: EngineArg,
        /// Print the chain of quotients witnessing the multiplicity.
        #[arg(long)]
        certificate: bool,
    },
    /// All roots with their multiplicities.
    Roots {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "search")]
        engine: EngineArg,
    },
    /// Quotients g with f ≼ (x − a) g.
    Divide {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'a', allow_hyphen_values = true)]
        at: String,
    },
    /// Lift a factorization of the initial form to the extension.
    Lift {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'a', allow_hyphen_values = true)]
        at: String,
        /// Base quotient to lift; without it the full chain is lifted.
        #[arg(long, allow_hyphen_values = true)]
        quotient: Option<String>,
    },
    /// Newton polygon.
    Newton {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Initial form at a root.
    InitialForm {
        #[command(flatten)]
        input: Input,
        #[arg(long, short = 'a', allow_hyphen_values = true)]
        at: String,
    },
    /// Check that the multiplicities sum to at most the degree.
    DegreeBound {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "search")]
        engine: EngineArg,
    },
    /// Compare engines with the oracles on a pinned corpus and random sweeps.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        sweeps: usize,
    },
    /// Run a worked example, or all of them.
    Demo {
        /// One of the demo names, or "all".
        name: String,
    },
    /// Check the idyll axioms.
    Axioms {
        #[arg(long, short = 'i')]
        idyll: String,
        #[arg(long)]
        rank: Option<usize>,
        /// Longest formal sum checked.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Random samples for the extension checks.
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Also compare the extension with the product of its base and the
        /// tropical idyll.
        #[arg(long)]
        product: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Purity(_) => 2,
        Error::Mismatch(_) => 3,
        Error::Resource { .. } => 4,
        _ => 1,
    }
}

fn idyll_name(name: &str, rank: Option<usize>) -> Result<String> {
    let Some(r) = rank else {
        return Ok(name.to_string());
    };
    let bad = || Error::Parse { pos: 0, msg: format!("--rank does not apply to '{name}'") };
    let stem = name.split(':').next().unwrap_or(name);
    Ok(match stem {
        "trop" | "T" => format!("trop:rank-{r}"),
        "trop-real" | "TR" => format!("trop-real:rank-{r}"),
        "oag" => format!("oag:rank-{r}"),
        "ext" => {
            let (head, _) = name.rsplit_once(':').ok_or_else(bad)?;
            format!("{head}:{r}")
        }
        _ => return Err(bad()),
    })
}

fn load_idyll(name: &str, rank: Option<usize>) -> Result<Arc<Idyll<Rat>>> {
    Ok(Arc::new(Idyll::from_name(&idyll_name(name, rank)?)?))
}

fn load(input: &Input) -> Result<Polynomial<Rat>> {
    let target = load_idyll(&input.idyll, input.rank)?;
    if !input.rational && input.prime.is_none() {
        return parse_poly(&input.poly, target);
    }
    let q = parse_poly(&input.poly, Arc::new(Idyll::Rationals))?;
    let need_prime = || Error::Precondition(format!("{} from Q needs --prime", target.name()));
    let g = match (target.name().as_str(), input.prime) {
        ("field:Q", _) => q,
        ("sign", _) => sign_of_poly(&q)?,
        ("trop", Some(p)) => trop_of_rational(&q, p)?,
        ("trop-real", Some(p)) => trop_real_of_rational(&q, p)?,
        ("trop" | "trop-real", None) => return Err(need_prime()),
        (other, _) => return Err(Error::Unsupported(format!("no map from Q to {other}"))),
    };
    Ok(g)
}

fn elem(text: &str, f: &Polynomial<Rat>) -> Result<Elem<Rat>> {
    parse_elem(text, f.idyll())
}

fn header(f: &Polynomial<Rat>) -> Value {
    json!({ "idyll": f.idyll().name(), "polynomial": poly_to_json(f), "text": f.to_string() })
}

struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn mult_cmd(input: &Input, at: &str, engine: Engine, certificate: bool) -> Result<Output> {
    let f = load(input)?;
    let a = elem(at, &f)?;
    let m = mult_with_engine(&f, &a, engine)?;
    let shown = format_elem(&a, f.idyll());
    let mut text = format!("mult at {shown} of {f} over {}: {m}\n", f.idyll().name());
    let mut j = header(&f);
    j["root"] = json!(shown);
    j["engine"] = json!(engine.to_string());
    j["multiplicity"] = json!(m);
    if certificate {
        let (_, chain) = multiplicity(&f, &a)?;
        let valid = chain.verify(&f)?;
        for (k, g) in chain.quotients.iter().enumerate() {
            text.push_str(&format!("  g{k} = {g}\n"));
        }
        text.push_str(&format!("  chain verified: {valid}\n"));
        j["certificate"] = chain.to_json(&f);
        j["certificate"]["verified"] = json!(valid);
        if !valid {
            return Ok(Output { text, json: j, code: 3 });
        }
    }
    Ok(Output::ok(text, j))
}

fn roots_cmd(input: &Input, engine: Engine, bound_only: bool) -> Result<Output> {
    let f = load(input)?;
    let r = degree_bound_check(&f, engine)?;
    let mut text = String::new();
    if !bound_only {
        for (a, m) in &r.roots {
            text.push_str(&format!("{} (mult {m})\n", format_elem(a, f.idyll())));
        }
    }
    text.push_str(&format!(
        "sum of multiplicities {} {} degree {}\n",
        r.sum,
        if r.pass { "<=" } else { ">" },
        r.degree
    ));
    let mut j = header(&f);
    j["report"] = r.to_json(f.idyll());
    Ok(Output { text, json: j, code: if r.pass { 0 } else { 3 } })
}

fn divide_cmd(input: &Input, at: &str) -> Result<Output> {
    let f = load(input)?;
    let a = elem(at, &f)?;
    let qs = divide_once(&f, &a)?;
    let mut text = String::new();
    if qs.is_empty() {
        text.push_str(&format!("{} is not a root\n", format_elem(&a, f.idyll())));
    }
    for g in &qs {
        text.push_str(&format!("{g}\n"));
    }
    let mut j = header(&f);
    j["root"] = json!(format_elem(&a, f.idyll()));
    j["quotients"] = qs.iter().map(poly_to_json).collect();
    Ok(Output::ok(text, j))
}

fn lift_cmd(input: &Input, at: &str, quotient: Option<&str>) -> Result<Output> {
    let f = load(input)?;
    let a = elem(at, &f)?;
    let mut j = header(&f);
    j["root"] = json!(format_elem(&a, f.idyll()));
    let Some(q) = quotient else {
        let chain = lift_chain(&f, &a)?;
        let valid = chain.verify(&f)?;
        let mut text = String::new();
        for (k, g) in chain.quotients.iter().enumerate() {
            text.push_str(&format!("g{k} = {g}\n"));
        }
        text.push_str(&format!("length {}, verified: {valid}\n", chain.len()));
        j["chain"] = chain.to_json(&f);
        j["verified"] = json!(valid);
        return Ok(Output { text, json: j, code: if valid { 0 } else { 3 } });
    };
    let base = match f.idyll().as_extension() {
        Some(e) => Arc::clone(&e.base),
        None => return Err(Error::Structural(format!("{} is not a tropical extension", f.idyll().name()))),
    };
    let g = parse_poly(q, base)?;
    let lifted = lift_factorization(&f, &a, &g)?;
    j["quotient"] = poly_to_json(&g);
    j["lifted"] = poly_to_json(&lifted);
    Ok(Output::ok(format!("{lifted}\n"), j))
}

fn newton_cmd(input: &Input, format: Format, json_flag: bool) -> Result<Output> {
    let f = load(input)?;
    let np = newton_polygon(&f)?;
    let mut j = header(&f);
    j["newton"] = np.to_json();
    let text = match format {
        Format::Ascii => render_ascii(&np),
        Format::Svg => render_svg(&np),
        Format::Json if !json_flag => format!("{:#}\n", j),
        _ => {
            let mut t = format!("points: {}\n", points(&np.points));
            t.push_str(&format!("lower hull: {}\n", points(&np.hull)));
            for e in &np.edges {
                t.push_str(&format!("edge [{}, {}] slope {} width {}\n", e.start, e.end, e.slope, e.width));
            }
            t
        }
    };
    Ok(Output::ok(text, j))
}

fn points(ps: &[(usize, Rat)]) -> String {
    ps.iter().map(|(i, v)| format!("({i}, {v})")).collect::<Vec<_>>().join(" ")
}

fn initial_form_cmd(input: &Input, at: &str) -> Result<Output> {
    let f = load(input)?;
    let a = elem(at, &f)?;
    let init = initial_form_at(&f, &a)?;
    let base = init.to_base()?;
    let text = format!("level {}\ninitial form {}\nover {}: {base}\n", init.level, init.poly, base.idyll().name());
    let mut j = header(&f);
    j["root"] = json!(format_elem(&a, f.idyll()));
    j["level"] = json!(init.level.to_string());
    j["initial_form"] = poly_to_json(&init.poly);
    j["base_form"] = poly_to_json(&base);
    Ok(Output::ok(text, j))
}

fn verify_cmd(seed: u64, sweeps: usize) -> Result<Output> {
    let report = run_suite(seed, sweeps)?;
    let mut text = format!("{} comparisons\n", report.entries.len());
    for e in report.failures() {
        text.push_str(&format!("DISAGREE {}: oracle {}, engine {}\n", e.instance, e.oracle, e.engine));
    }
    let agree = report.all_agree();
    text.push_str(if agree { "all agree\n" } else { "FAIL\n" });
    Ok(Output { text, json: report.to_json(), code: if agree { 0 } else { 3 } })
}

fn demo_cmd(name: &str) -> Result<Output> {
    let names: Vec<&str> = if name == "all" { DEMOS.to_vec() } else { vec![name] };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut pass = true;
    for n in names {
        let r = run_demo(n)?;
        pass &= r.pass();
        text.push_str(&r.to_text());
        reports.push(r.to_json());
    }
    let j = if reports.len() == 1 { reports.pop().unwrap() } else { json!({ "pass": pass, "demos": reports }) };
    Ok(Output { text, json: j, code: if pass { 0 } else { 3 } })
}

fn axioms_cmd(name: &str, rank: Option<usize>, max_len: usize, samples: usize, product: bool) -> Result<Output> {
    let b = load_idyll(name, rank)?;
    let mut violations = check_idyll_axioms(&b, max_len);
    let mut differences = None;
    if let Some(e) = b.as_extension() {
        if e.base.is_finite() {
            violations.extend(check_extension_axioms(e, samples)?);
            if product {
                differences = Some(product_differences(e, samples)?);
            }
        }
    }
    let mut text = String::new();
    for v in &violations {
        text.push_str(&format!("violation: {v}\n"));
    }
    text.push_str(&format!("{}: {} violations\n", b.name(), violations.len()));
    if let Some(d) = &differences {
        for s in d.iter().take(10) {
            text.push_str(&format!("differs from the product: {s}\n"));
        }
        text.push_str(&format!("{} sampled sums differ from the product\n", d.len()));
    }
    let j = json!({
        "idyll": b.name(),
        "violations": violations,
        "pass": violations.is_empty(),
        "product_differences": differences,
    });
    Ok(Output { text, json: j, code: if violations.is_empty() { 0 } else { 3 } })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Cmd::Mult { input, at, engine, certificate } => mult_cmd(input, at, (*engine).into(), *certificate),
        Cmd::Roots { input, engine } => roots_cmd(input, (*engine).into(), false),
        Cmd::Divide { input, at } => divide_cmd(input, at),
        Cmd::Lift { input, at, quotient } => lift_cmd(input, at, quotient.as_deref()),
        Cmd::Newton { input, format } => newton_cmd(input, *format, cli.json),
        Cmd::InitialForm { input, at } => initial_form_cmd(input, at),
        Cmd::DegreeBound { input, engine } => roots_cmd(input, (*engine).into(), true),
        Cmd::Verify { seed, sweeps } => verify_cmd(*seed, *sweeps),
        Cmd::Demo { name } => demo_cmd(name),
        Cmd::Axioms { idyll, rank, max_len, samples, product } => {
            axioms_cmd(idyll, *rank, *max_len, *samples, *product)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{:#}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                println!("{:#}", json!({ "error": e.to_string(), "code": exit_code(&e) }));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
