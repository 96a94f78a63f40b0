use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nbodd::bench::{run_bench, BenchTable};
use nbodd::model::{learn_document, prob_to_log_odds, LearnOptions, ModelDocument};
use nbodd::odd::{deserialize, export_dot, serialize};
use nbodd::ops::{disagreement, equivalent, model_count, OpsError};
use nbodd::oracle::{enumerate, OracleError};
use nbodd::scalar::ExtendedReal;
use nbodd::sensitivity::{
    count_prior_classifiers, sensitivity_report, sweep_distinct_classifiers, weight_classifier_bound,
    SensitivityError, SweepMode,
};
use nbodd::{compile, make_order, size_bound, Instance, Model64, Odd, OrderingHeuristic, Threshold64, ZeroMode};

/// Compile naive Bayes classifiers into ordered decision diagrams and query
/// them.
#[derive(Parser)]
#[command(name = "nbodd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ThresholdArgs {
    /// Probability threshold: positive iff Pr(c|e) >= p.
    #[arg(long, conflicts_with = "rho")]
    p: Option<f64>,
    /// Log-odds threshold: positive iff log O(c|e) >= rho.
    #[arg(long)]
    rho: Option<f64>,
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[command(flatten)]
    threshold: ThresholdArgs,
    /// random:<seed> | desc | asc | explicit:<i,j,...>
    #[arg(long, default_value = "asc")]
    order: OrderingHeuristic,
    /// Keep zero probabilities as infinite weights instead of clamping them.
    #[arg(long)]
    strict_zeros: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a model file into a .odd diagram.
    Compile {
        model: PathBuf,
        #[command(flatten)]
        args: ModelArgs,
        /// Output path; defaults to the model path with extension .odd.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Remove redundant nodes before writing.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify instances given as attr=value,... lists.
    Eval {
        input: PathBuf,
        #[arg(long = "instance", required = true)]
        instances: Vec<String>,
        #[command(flatten)]
        args: ModelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exit 0 if two models or diagrams induce the same classifier, 1 if not.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        args: ModelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Count and list the instances two models or diagrams disagree on.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        args: ModelArgs,
        /// Number of witnesses to print.
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[arg(long)]
        json: bool,
    },
    /// Count positive and negative instances.
    Count {
        input: PathBuf,
        #[command(flatten)]
        args: ModelArgs,
        /// Cross-check against exhaustive enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Equivalence intervals of the prior and of every weight of evidence.
    Sensitivity {
        model: PathBuf,
        #[command(flatten)]
        args: ModelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Maximum numbers of classifiers reachable by changing one CPT.
    CountClassifiers {
        /// Model file; alternatively give --cards.
        model: Option<PathBuf>,
        /// Attribute cardinalities, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "model")]
        cards: Option<Vec<usize>>,
        /// Also count by sweeping each parameter over the model's instances.
        #[arg(long, requires = "model")]
        sweep: bool,
        #[arg(long)]
        strict_zeros: bool,
        #[arg(long)]
        json: bool,
    },
    /// Upper bound on the node count of a compiled diagram.
    Bound {
        /// Model file; alternatively give --cards or --binary.
        model: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["model", "binary"])]
        cards: Option<Vec<usize>>,
        /// Number of binary attributes.
        #[arg(long, conflicts_with = "model")]
        binary: Option<usize>,
        #[arg(long, default_value = "asc")]
        order: OrderingHeuristic,
        #[arg(long)]
        json: bool,
    },
    /// Node counts of random binary models under each ordering heuristic.
    Bench {
        /// Numbers of attributes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        #[arg(long)]
        json: bool,
    },
    /// Learn a model from a CSV file with a header row.
    Learn {
        csv: PathBuf,
        /// Name of the class column.
        #[arg(long = "class")]
        class_column: String,
        /// Laplace smoothing pseudo-count.
        #[arg(long, default_value_t = 1.0)]
        smoothing: f64,
        /// Class value treated as c; defaults to the first one seen.
        #[arg(long)]
        positive: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write a diagram in Graphviz DOT format.
    ExportDot {
        input: PathBuf,
        #[command(flatten)]
        args: ModelArgs,
        #[arg(long)]
        reduce: bool,
        /// Output path; defaults to standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const INPUT_ERROR: u8 = 1;
const INCOMPATIBLE: u8 = 2;
const REFUSED: u8 = 3;

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error = e.into();
        let code = if let Some(e) = error.downcast_ref::<OracleError>() {
            match e {
                OracleError::TooLarge { .. } => REFUSED,
                OracleError::SpecMismatch => INCOMPATIBLE,
                _ => INPUT_ERROR,
            }
        } else if let Some(SensitivityError::TooLarge { .. }) = error.downcast_ref::<SensitivityError>() {
            REFUSED
        } else if let Some(OpsError::OrderMismatch) = error.downcast_ref::<OpsError>() {
            INCOMPATIBLE
        } else {
            INPUT_ERROR
        };
        Self { code, error }
    }
}

fn incompatible(message: impl Into<String>) -> Failure {
    Failure {
        code: INCOMPATIBLE,
        error: anyhow!(message.into()),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Compile {
            model,
            args,
            output,
            reduce,
            json,
        } => cmd_compile(&model, &args, output, reduce, json),
        Command::Eval {
            input,
            instances,
            args,
            json,
        } => cmd_eval(&input, &instances, &args, json),
        Command::Equiv { a, b, args, json } => cmd_equiv(&a, &b, &args, json),
        Command::Diff {
            a,
            b,
            args,
            limit,
            json,
        } => cmd_diff(&a, &b, &args, limit, json),
        Command::Count {
            input,
            args,
            oracle,
            json,
        } => cmd_count(&input, &args, oracle, json),
        Command::Sensitivity { model, args, json } => cmd_sensitivity(&model, &args, json),
        Command::CountClassifiers {
            model,
            cards,
            sweep,
            strict_zeros,
            json,
        } => cmd_count_classifiers(model, cards, sweep, strict_zeros, json),
        Command::Bound {
            model,
            cards,
            binary,
            order,
            json,
        } => cmd_bound(model, cards, binary, &order, json),
        Command::Bench {
            n,
            trials,
            seed,
            rho,
            json,
        } => cmd_bench(&n, trials, seed, rho, json),
        Command::Learn {
            csv,
            class_column,
            smoothing,
            positive,
            output,
        } => cmd_learn(&csv, class_column, smoothing, positive, &output),
        Command::ExportDot {
            input,
            args,
            reduce,
            output,
        } => cmd_export_dot(&input, &args, reduce, output),
    }
}

fn zero_mode(strict: bool) -> ZeroMode {
    if strict {
        ZeroMode::Strict
    } else {
        ZeroMode::Clamp
    }
}

fn load_model(path: &Path, strict: bool) -> Result<Model64, Failure> {
    let doc = ModelDocument::read(path).with_context(|| format!("reading model {}", path.display()))?;
    Ok(doc
        .to_model(zero_mode(strict))
        .with_context(|| format!("model {}", path.display()))?)
}

fn threshold(args: &ThresholdArgs) -> Result<Threshold64, Failure> {
    let rho = match (args.p, args.rho) {
        (Some(p), None) => prob_to_log_odds(p)?,
        (None, Some(rho)) => rho,
        _ => return Err(anyhow!("give exactly one of --p or --rho").into()),
    };
    Ok(Threshold64::new(rho)?)
}

enum Input {
    Model(Model64),
    Odd(Odd),
}

fn is_odd_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "odd")
}

fn load_input(path: &Path, strict: bool) -> Result<Input, Failure> {
    if is_odd_file(path) {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Input::Odd(deserialize(&text).with_context(|| format!("diagram {}", path.display()))?))
    } else {
        Ok(Input::Model(load_model(path, strict)?))
    }
}

fn compile_with(model: &Model64, args: &ModelArgs, order: Option<&[usize]>) -> Result<nbodd::Compilation64, Failure> {
    let rho = threshold(&args.threshold)?;
    let order = match order {
        Some(o) => o.to_vec(),
        None => make_order(model, &args.order)?,
    };
    Ok(compile(model, rho, &order)?)
}

/// The diagram of an input: loaded as is, or compiled.
fn diagram(input: Input, args: &ModelArgs) -> Result<Odd, Failure> {
    match input {
        Input::Odd(d) => Ok(d),
        Input::Model(m) => Ok(compile_with(&m, args, None)?.odd),
    }
}

/// Two diagrams over one attribute order. Models are compiled with the
/// other side's order when it is a diagram, else with the heuristic order
/// of the first model.
fn diagram_pair(a: &Path, b: &Path, args: &ModelArgs) -> Result<(Odd, Odd), Failure> {
    let (a, b) = (load_input(a, args.strict_zeros)?, load_input(b, args.strict_zeros)?);
    let attrs = |i: &Input| match i {
        Input::Model(m) => m.attributes().to_vec(),
        Input::Odd(d) => d.attributes().to_vec(),
    };
    if attrs(&a) != attrs(&b) {
        return Err(incompatible("inputs have different attributes or values"));
    }
    match (a, b) {
        (Input::Odd(x), Input::Odd(y)) => {
            if !x.same_order(&y) {
                return Err(incompatible(
                    "diagrams use different attribute orders; recompile them with a shared --order",
                ));
            }
            Ok((x, y))
        }
        (Input::Odd(x), Input::Model(m)) => {
            let y = compile_with(&m, args, Some(x.order()))?.odd;
            Ok((x, y))
        }
        (Input::Model(m), Input::Odd(y)) => {
            let x = compile_with(&m, args, Some(y.order()))?.odd;
            Ok((x, y))
        }
        (Input::Model(m1), Input::Model(m2)) => {
            let order = make_order(&m1, &args.order)?;
            let x = compile_with(&m1, args, Some(&order))?.odd;
            let y = compile_with(&m2, args, Some(&order))?.odd;
            Ok((x, y))
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn cmd_compile(model: &Path, args: &ModelArgs, output: Option<PathBuf>, reduce: bool, json: bool) -> Outcome {
    let m = load_model(model, args.strict_zeros)?;
    let rho = threshold(&args.threshold)?.rho();
    let result = compile_with(&m, args, None)?;
    let odd = if reduce { result.odd.reduce() } else { result.odd.clone() };
    let output = output.unwrap_or_else(|| model.with_extension("odd"));
    fs::write(&output, serialize(&odd)?).with_context(|| format!("writing {}", output.display()))?;
    let stats = result.stats();
    if json {
        print_json(&json!({
            "output": output.display().to_string(),
            "rho": rho,
            "order": result.order,
            "written_nodes": odd.node_count(),
            "stats": stats,
        }));
    } else {
        println!("rho: {}", ExtendedReal(rho));
        let names: Vec<&str> = result.order.iter().map(|&i| m.attributes()[i].name.as_str()).collect();
        println!("order: {}", names.join(" "));
        print!("{stats}");
        println!("written: {} ({} nodes)", output.display(), odd.node_count());
    }
    Ok(0)
}

fn cmd_eval(input: &Path, instances: &[String], args: &ModelArgs, json: bool) -> Outcome {
    let input = load_input(input, args.strict_zeros)?;
    let mut rows = Vec::new();
    for text in instances {
        match &input {
            Input::Model(m) => {
                let e = Instance::parse(text, m.attributes())?;
                let rho = threshold(&args.threshold)?;
                let x = m.log_odds_of(&e)?;
                rows.push((text, m.classify(rho, &e)?, Some(x)));
            }
            Input::Odd(d) => {
                let e = Instance::parse(text, d.attributes())?;
                rows.push((text, d.evaluate(&e), None));
            }
        }
    }
    if json {
        let rows: Vec<_> = rows
            .iter()
            .map(|(e, label, x)| json!({ "instance": e, "label": u8::from(*label), "log_odds": x.map(ExtendedReal) }))
            .collect();
        print_json(&json!(rows));
    } else {
        for (e, label, x) in rows {
            match x {
                Some(x) => println!("{e}: {} (log-odds {})", u8::from(label), ExtendedReal(x)),
                None => println!("{e}: {}", u8::from(label)),
            }
        }
    }
    Ok(0)
}

fn cmd_equiv(a: &Path, b: &Path, args: &ModelArgs, json: bool) -> Outcome {
    let (x, y) = diagram_pair(a, b, args)?;
    let same = equivalent(&x, &y)?;
    if json {
        print_json(&json!({ "equivalent": same }));
    } else {
        println!("{}", if same { "equivalent" } else { "not equivalent" });
    }
    Ok(if same { 0 } else { 1 })
}

fn cmd_diff(a: &Path, b: &Path, args: &ModelArgs, limit: usize, json: bool) -> Outcome {
    let (x, y) = diagram_pair(a, b, args)?;
    let d = disagreement(&x, &y, limit)?;
    let witnesses: Vec<String> = d.witnesses.iter().map(|e| e.render(x.attributes())).collect();
    if json {
        print_json(&json!({
            "equivalent": d.count == 0u32.into(),
            "count": d.count.to_string(),
            "witnesses": witnesses,
        }));
    } else {
        println!("disagreements: {}", d.count);
        for w in witnesses {
            println!("{w}");
        }
    }
    Ok(0)
}

fn cmd_count(input: &Path, args: &ModelArgs, oracle: bool, json: bool) -> Outcome {
    let input = load_input(input, args.strict_zeros)?;
    let check = match (&input, oracle) {
        (Input::Model(m), true) => Some(enumerate(m, threshold(&args.threshold)?)?),
        (Input::Odd(_), true) => return Err(anyhow!("--oracle needs a model file").into()),
        _ => None,
    };
    let d = diagram(input, args)?;
    let c = model_count(&d);
    if let Some(r) = &check {
        if c.positive != r.positive.into() || c.negative != r.negative.into() {
            return Err(anyhow!(
                "diagram counts {}/{} disagree with enumeration {}/{}",
                c.positive,
                c.negative,
                r.positive,
                r.negative
            )
            .into());
        }
    }
    if json {
        print_json(&json!({
            "positive": c.positive.to_string(),
            "negative": c.negative.to_string(),
            "total": c.total().to_string(),
            "oracle_checked": check.is_some(),
        }));
    } else {
        println!("positive: {}", c.positive);
        println!("negative: {}", c.negative);
        println!("total: {}", c.total());
        if check.is_some() {
            println!("enumeration agrees");
        }
    }
    Ok(0)
}

fn cmd_sensitivity(model: &Path, args: &ModelArgs, json: bool) -> Outcome {
    let m = load_model(model, args.strict_zeros)?;
    let rho = threshold(&args.threshold)?;
    let order = make_order(&m, &args.order)?;
    let report = sensitivity_report(&m, rho, &order)?;
    if json {
        print_json(&serde_json::to_value(&report)?);
    } else {
        print!("{report}");
    }
    Ok(0)
}

fn cmd_count_classifiers(
    model: Option<PathBuf>,
    cards: Option<Vec<usize>>,
    sweep: bool,
    strict: bool,
    json: bool,
) -> Outcome {
    let (model, names, cards) = match (model, cards) {
        (Some(path), None) => {
            let m = load_model(&path, strict)?;
            let names: Vec<String> = m.attributes().iter().map(|a| a.name.clone()).collect();
            let cards = m.cardinalities();
            (Some(m), names, cards)
        }
        (None, Some(cards)) => (None, (1..=cards.len()).map(|i| format!("E{i}")).collect(), cards),
        _ => return Err(anyhow!("give a model file or --cards").into()),
    };
    if cards.contains(&0) {
        return Err(anyhow!("cardinalities must be at least 1").into());
    }
    let prior = count_prior_classifiers(&cards);
    let prior_sweep = match (&model, sweep) {
        (Some(m), true) => Some(sweep_distinct_classifiers(m, SweepMode::Prior)?),
        _ => None,
    };
    let mut rows = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let bound = weight_classifier_bound(&cards, i)?;
        let swept = match (&model, sweep) {
            (Some(m), true) => Some(sweep_distinct_classifiers(m, SweepMode::Attribute(i))?),
            _ => None,
        };
        rows.push((name, bound, swept));
    }
    if json {
        let attrs: Vec<_> = rows
            .iter()
            .map(|(name, bound, swept)| {
                json!({ "attribute": name, "bound": bound.to_string(), "sweep": swept.as_ref().map(|s| s.to_string()) })
            })
            .collect();
        print_json(&json!({
            "prior": { "bound": prior.to_string(), "sweep": prior_sweep.map(|s| s.to_string()) },
            "attributes": attrs,
        }));
    } else {
        let mut line = format!("prior: at most {prior}");
        if let Some(s) = prior_sweep {
            write!(line, " (sweep {s})").unwrap();
        }
        println!("{line}");
        for (name, bound, swept) in rows {
            let mut line = format!("{name}: at most {bound}");
            if let Some(s) = swept {
                write!(line, " (unrestricted sweep {s})").unwrap();
            }
            println!("{line}");
        }
    }
    Ok(0)
}

fn cmd_bound(
    model: Option<PathBuf>,
    cards: Option<Vec<usize>>,
    binary: Option<usize>,
    order: &OrderingHeuristic,
    json: bool,
) -> Outcome {
    let (cards, order) = match (model, cards, binary) {
        (Some(path), None, None) => {
            let m = load_model(&path, false)?;
            let order = make_order(&m, order)?;
            (m.cardinalities(), order)
        }
        (None, Some(cards), None) => {
            let order = (0..cards.len()).collect();
            (cards, order)
        }
        (None, None, Some(n)) => (vec![2; n], (0..n).collect()),
        _ => return Err(anyhow!("give one of a model file, --cards or --binary").into()),
    };
    let bound = size_bound(&cards, &order);
    let instances = nbodd::model::instance_space(&cards);
    if json {
        print_json(&json!({ "instances": instances.to_string(), "bound": bound.to_string() }));
    } else {
        println!("instances: {instances}");
        println!("bound: {bound}");
    }
    Ok(0)
}

fn cmd_bench(ns: &[usize], trials: usize, seed: u64, rho: f64, json: bool) -> Outcome {
    let records = run_bench(ns, trials, seed, Threshold64::new(rho)?)?;
    if json {
        print_json(&serde_json::to_value(&records)?);
    } else {
        print!("{}", BenchTable(&records));
    }
    Ok(0)
}

fn cmd_learn(csv: &Path, class_column: String, smoothing: f64, positive: Option<String>, output: &Path) -> Outcome {
    let mut options = LearnOptions::new(class_column).smoothing(smoothing);
    if let Some(p) = positive {
        options = options.positive_class(p);
    }
    let file = fs::File::open(csv).with_context(|| format!("opening {}", csv.display()))?;
    let doc = learn_document(file, &options).with_context(|| format!("learning from {}", csv.display()))?;
    doc.validate()?;
    doc.write(output).with_context(|| format!("writing {}", output.display()))?;
    println!(
        "learned {} attributes, class {} ({} / {}), written to {}",
        doc.attributes.len(),
        doc.class.name,
        doc.class.values[0],
        doc.class.values[1],
        output.display()
    );
    Ok(0)
}

fn cmd_export_dot(input: &Path, args: &ModelArgs, reduce: bool, output: Option<PathBuf>) -> Outcome {
    let d = diagram(load_input(input, args.strict_zeros)?, args)?;
    let d = if reduce { d.reduce() } else { d };
    let dot = export_dot(&d);
    match output {
        Some(path) => fs::write(&path, dot).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{dot}"),
    }
    Ok(0)
}
