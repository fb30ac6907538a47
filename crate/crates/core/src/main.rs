use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sl12gen::action::DEFAULT_GUARD;
use sl12gen::certify::{
    certify_full_generation, sweep, verify_lemma_5, verify_lemma_alt, verify_lemma_alt5, verify_orders,
    verify_prop_steps, EngineConfig,
};
use sl12gen::gens::{default_t, GeneratorPair, Variant, DEFAULT_T_POLICY};
use sl12gen::{make_field, CertificateReport, CertifyError, Field, FieldElement, Verdict};

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sl12gen",
    version,
    about = "Exact certificates that explicit (2,3)-pairs generate SL_12(q)",
    after_help = format!(
        "Exit codes: 0 all pass, 1 any fail, 2 infeasible only, 3 usage error.\n\nDefault t: {DEFAULT_T_POLICY}."
    )
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one step of the generation argument.
    Verify {
        claim: Claim,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Report the closure order for parameters violating the hypothesis (lemma-5 only).
        #[arg(long)]
        exploratory: bool,
    },
    /// Compute <x, y> on the nonzero vectors of F_q^12 and compare with |SL_12(q)|.
    Certify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generator orders plus lemma-alt (or lemma-alt5 for p = 5) for every prime p <= p-max.
    Sweep {
        #[arg(long, default_value_t = 100)]
        p_max: u64,
        /// Extension degrees, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        a: Vec<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Field inspection.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
}

#[derive(Subcommand)]
enum FieldCommand {
    /// Modulus, size and default parameter t of F_{p^a}.
    Info {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// Monic modulus coefficients c0,c1,..,ca (constant term first).
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Claim {
    #[value(name = "lemma-alt")]
    LemmaAlt,
    #[value(name = "lemma-5")]
    Lemma5,
    #[value(name = "prop-steps")]
    PropSteps,
    #[value(name = "lemma-alt5")]
    LemmaAlt5,
    Orders,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    a: u32,
    /// Coefficients of t in the basis 1, u, .., u^(a-1), comma separated; omitted: the default policy.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<i64>>,
    /// Monic modulus coefficients c0,c1,..,ca (constant term first); omitted: least irreducible.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u64>>,
    #[arg(long, default_value = "standard")]
    variant: VariantArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    Tilde,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Tilde => Variant::Tilde,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Maximum number of points in an action space.
    #[arg(long, env = "SL12GEN_GUARD", default_value_t = DEFAULT_GUARD)]
    guard: u64,
    /// Randomized sifting pass before verification.
    #[arg(long)]
    randomized: bool,
    #[arg(long)]
    json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn engine(&self) -> EngineConfig {
        EngineConfig { guard: self.guard, randomized: self.randomized, ..EngineConfig::default() }
    }
}

struct UsageError(String);

impl From<CertifyError> for UsageError {
    fn from(e: CertifyError) -> Self {
        UsageError(e.to_string())
    }
}

fn field_and_t(args: &FieldArgs) -> Result<(Field, FieldElement), UsageError> {
    let field = make_field(args.p, args.a, args.modulus.as_deref())
        .map_err(|e| UsageError(format!("cannot build F_{}^{}: {e}", args.p, args.a)))?;
    let t = match &args.t {
        Some(coeffs) => {
            if coeffs.len() > args.a as usize {
                return Err(UsageError(format!("--t has {} coefficients, at most {} allowed", coeffs.len(), args.a)));
            }
            let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(args.p as i64) as u64).collect();
            field.from_coeffs(&reduced).map_err(|e| UsageError(format!("invalid --t: {e}")))?
        }
        None => default_t(&field).ok_or_else(|| UsageError(format!("F_{} has no valid default t", field.q())))?,
    };
    Ok((field, t))
}

fn run_verify(
    claim: Claim,
    args: &FieldArgs,
    out: &OutputArgs,
    exploratory: bool,
) -> Result<Vec<CertificateReport>, UsageError> {
    let (field, t) = field_and_t(args)?;
    let engine = out.engine();
    let variant = Variant::from(args.variant);
    let report = match claim {
        Claim::Orders => {
            let pair = GeneratorPair::new(&field, &t, variant).map_err(CertifyError::from)?;
            verify_orders(&pair, &engine)
        }
        Claim::LemmaAlt => verify_lemma_alt(&field, &t, &engine)
            .map_err(|e| UsageError(format!("{e}; for p = 5 use `verify lemma-alt5`")))?,
        Claim::Lemma5 => verify_lemma_5(&field, &t, &engine, exploratory)?,
        Claim::PropSteps => verify_prop_steps(&field, &t, variant, &engine)?,
        Claim::LemmaAlt5 => verify_lemma_alt5(&field, &t, &engine)?,
    };
    Ok(vec![report])
}

fn render(reports: &[CertificateReport], json: bool, single: bool) -> String {
    if json {
        let text =
            if single { serde_json::to_string_pretty(&reports[0]) } else { serde_json::to_string_pretty(reports) };
        text.expect("reports serialize") + "\n"
    } else {
        let mut text: String = reports.iter().map(|r| format!("{r}\n")).collect();
        if !single {
            let verdict = Verdict::combine(reports.iter().map(|r| r.verdict));
            text.push_str(&format!("{} reports, overall verdict: {verdict}\n", reports.len()));
        }
        text
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), UsageError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field_info(p: u64, a: u32, modulus: Option<&[u64]>, json: bool) -> Result<(), UsageError> {
    let field = make_field(p, a, modulus).map_err(|e| UsageError(format!("cannot build F_{p}^{a}: {e}")))?;
    let t = default_t(&field);
    if json {
        let info = json!({
            "p": field.p(),
            "a": field.a(),
            "q": field.q(),
            "modulus": field.modulus(),
            "default_t": t.as_ref().map(|t| t.coeffs()),
            "log_tables": field.has_tables(),
        });
        println!("{}", serde_json::to_string_pretty(&info).expect("json"));
    } else {
        println!("F_{} = F_{}[u]/({:?})", field.q(), field.p(), field.modulus());
        println!("log tables: {}", field.has_tables());
        match t {
            Some(t) => println!("default t: {t} (coefficients {:?})", t.coeffs()),
            None => println!("default t: none"),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Verdict, UsageError> {
    let (reports, out, single) = match cli.command {
        Command::Verify { claim, field, out, exploratory } => {
            (run_verify(claim, &field, &out, exploratory)?, out, true)
        }
        Command::Certify { field, out } => {
            let (f, t) = field_and_t(&field)?;
            (vec![certify_full_generation(&f, &t, field.variant.into(), &out.engine())?], out, true)
        }
        Command::Sweep { p_max, a, out } => {
            if a.contains(&0) {
                return Err(UsageError("--a entries must be at least 1".into()));
            }
            (sweep(p_max, &a, &out.engine())?, out, false)
        }
        Command::Field { command: FieldCommand::Info { p, a, modulus, json } } => {
            field_info(p, a, modulus.as_deref(), json)?;
            return Ok(Verdict::Pass);
        }
    };
    emit(&render(&reports, out.json, single), &out.out)?;
    Ok(Verdict::combine(reports.iter().map(|r| r.verdict)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(verdict) => ExitCode::from(verdict.exit_code() as u8),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
