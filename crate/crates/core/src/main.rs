use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use menon::arith::FuncSpec;
use menon::identity::{Budgets, Evaluator, DEFAULT_DP_BUDGET, DEFAULT_NAIVE_BUDGET};
use menon::ideals::IdealLiteral;
use menon::numfield::{load_corpus, NumberField};
use menon::par::Execution;
use menon::sweep::{explain, run_sweep, CharSelector, ModulusSelector, Point, RSelector, SweepConfig};
use menon::{Error, Result};

/// Verify character-twisted Menon-type gcd-sum identities over rings of
/// algebraic integers.
#[derive(Parser)]
#[command(name = "menon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identity on a parameter grid and write a JSON report.
    Sweep(SweepArgs),
    /// Print the factors of the closed form for one parameter point.
    Explain(ExplainArgs),
}

#[derive(Args)]
struct Common {
    /// Field corpus JSON file.
    #[arg(long)]
    field: PathBuf,
    /// Only use the corpus entry with this name.
    #[arg(long)]
    name: Option<String>,
    /// Modulus as an ideal literal, e.g. '{"int":3}' or '{"gens":[[3,0],[1,1]]}'.
    #[arg(long)]
    ideal: Option<String>,
    /// Evaluators to run: naive, convolution, dp.
    #[arg(long, value_delimiter = ',', default_value = "naive,convolution,dp")]
    evaluators: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_NAIVE_BUDGET)]
    naive_budget: u64,
    #[arg(long, default_value_t = DEFAULT_DP_BUDGET)]
    dp_budget: u64,
    /// Add 1 to every closed form to exercise the mismatch path.
    #[arg(long, hide = true)]
    corrupt_rhs: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Visit every ideal with 1 < N(n) <= this bound.
    #[arg(long, conflicts_with = "ideal")]
    max_norm: Option<u64>,
    /// Values of k: a list "1,2,3" or a range "1..3".
    #[arg(long, default_value = "1")]
    k: String,
    /// Values of s, same syntax as --k.
    #[arg(long, default_value = "0")]
    s: String,
    /// all | trivial | idx:<i>
    #[arg(long, default_value = "all")]
    chars: String,
    /// first:<count> or coordinates such as '[1,0]' or '[[1,0],[2,1]]'.
    #[arg(long, default_value = "first:3")]
    r: String,
    /// Comma-separated functions: norm, norm^s, sigma:s, sigma1, moebius, one, phi, table:<path>.
    #[arg(long, value_delimiter = ',', default_value = "norm")]
    f: Vec<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Report path; the summary is printed either way.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    s: u32,
    /// trivial | idx:<i>
    #[arg(long, default_value = "trivial")]
    chars: String,
    /// Coordinates of r; defaults to 1.
    #[arg(long)]
    r: Option<String>,
    #[arg(long, default_value = "norm")]
    f: String,
}

fn parse_range(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("bad range '{text}'"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..=b).collect());
    }
    text.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

impl Common {
    fn fields(&self) -> Result<Vec<Arc<NumberField>>> {
        let mut fields = load_corpus(&self.field)?;
        if let Some(name) = &self.name {
            fields.retain(|f| f.name() == name);
            if fields.is_empty() {
                return Err(Error::InvalidParams(format!("no field named '{name}' in the corpus")));
            }
        }
        Ok(fields)
    }

    fn evaluators(&self) -> Result<Vec<Evaluator>> {
        self.evaluators.iter().map(|e| Evaluator::parse(e)).collect()
    }

    fn budgets(&self) -> Budgets {
        Budgets { naive: self.naive_budget, dp: self.dp_budget }
    }

    fn shift(&self) -> i64 {
        self.corrupt_rhs as i64
    }
}

fn sweep(args: &SweepArgs) -> Result<i32> {
    let c = &args.common;
    let modulus = match (&c.ideal, args.max_norm) {
        (Some(lit), _) => ModulusSelector::Explicit(IdealLiteral::parse(lit)?),
        (None, Some(b)) => ModulusSelector::MaxNorm(b),
        (None, None) => return Err(Error::InvalidParams("give --ideal or --max-norm".into())),
    };
    let cfg = SweepConfig {
        ks: parse_range(&args.k)?,
        ss: parse_range(&args.s)?,
        chars: CharSelector::parse(&args.chars)?,
        rs: RSelector::parse(&args.r)?,
        fs: args.f.iter().map(|f| FuncSpec::parse(f)).collect::<Result<_>>()?,
        evaluators: c.evaluators()?,
        budgets: c.budgets(),
        execution: Execution::default(),
        jobs: args.jobs,
        rhs_shift: c.shift(),
        ..SweepConfig::new(c.fields()?, modulus)
    };
    let report = run_sweep(&cfg)?;
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    let s = report.summary;
    println!("total {} passed {} failed {} errored {}", s.total, s.passed, s.failed, s.errored);
    for e in report.errors.iter().take(10) {
        eprintln!("error: {} n={} k={:?} s={:?} char={:?}: {}", e.field, serde_json::to_string(&e.n)?, e.k, e.s, e.char_index, e.error);
    }
    Ok(report.exit_code())
}

fn explain_cmd(args: &ExplainArgs) -> Result<i32> {
    let c = &args.common;
    let fields = c.fields()?;
    let [field] = fields.as_slice() else {
        return Err(Error::InvalidParams("explain needs exactly one field; use --name".into()));
    };
    let lit = c.ideal.as_deref().ok_or_else(|| Error::InvalidParams("explain needs --ideal".into()))?;
    let n = IdealLiteral::parse(lit)?.build(field)?;
    let char_index = match CharSelector::parse(&args.chars)? {
        CharSelector::Trivial => 0,
        CharSelector::Index(i) => i,
        CharSelector::All => return Err(Error::InvalidParams("explain takes a single character".into())),
    };
    let r = match &args.r {
        None => field.one(),
        Some(text) => match RSelector::parse(text)? {
            RSelector::Explicit(list) if list.len() == 1 => {
                let coords = list[0]
                    .iter()
                    .map(|v| v.as_i64().ok_or_else(|| Error::Parse(format!("bad coordinate {v}"))))
                    .collect::<Result<Vec<_>>>()?;
                field.element_i64(&coords)?
            }
            _ => return Err(Error::InvalidParams("explain takes a single r".into())),
        },
    };
    let point = Point { field: field.clone(), n, k: args.k, s: args.s, char_index, r, f: FuncSpec::parse(&args.f)? };
    let (text, equal) = explain(&point, &c.evaluators()?, &c.budgets(), c.shift())?;
    print!("{text}");
    Ok(if equal { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Explain(a) => explain_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
