//! `wpvol`: exact Weil–Petersson volume tables.
//!
//! Exit status is 0 on success, 1 on bad input or a domain error and 2 when
//! a verification command finds a failed check.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wpvol::scalars::parse_rational;
use wpvol::{ConeRule, MemoTable, PsiMode, Rational, Reduction};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "wpvol", version, about = "Exact Weil–Petersson volumes of genus-zero moduli spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output encoding: one JSON object per line, or CSV.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,

    /// Memo file loaded before and saved after the command.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Worker threads for split sums.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    /// Append an approximate decimal value of the volume with D digits.
    #[arg(long, global = true, value_name = "D")]
    decimal: Option<usize>,

    /// Unit of angles and lengths.
    #[arg(long, value_enum, global = true, default_value = "pi")]
    units: Units,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Units {
    Pi,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cusped volumes V_n.
    Cusp {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// A single n instead of the table 3..=max-n.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Volume with cone points of angle t·π.
    Conical {
        #[arg(long, value_delimiter = ',', value_parser = rational, required_unless_present = "profile")]
        t: Vec<Rational>,
        /// Profile JSON file instead of --t.
        #[arg(long, conflicts_with = "t")]
        profile: Option<PathBuf>,
        #[command(flatten)]
        modes: Modes,
    },
    /// Volume with geodesic boundaries of length s·π, or the polynomial in λ_j.
    Boundary {
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        s: Vec<Rational>,
        #[arg(long, conflicts_with = "s")]
        profile: Option<PathBuf>,
        /// Print V_n as a polynomial in λ_j = L_j²/(4π²).
        #[arg(long, requires = "n")]
        symbolic: bool,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        modes: Modes,
    },
    /// Volumes with q boundaries of one length L and n − q cusps.
    Vq {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, value_enum, default_value = "both")]
        variant: VqVariant,
        /// λ = L²/(4π²); symbolic when absent.
        #[arg(long, value_parser = rational, conflicts_with = "symbolic")]
        lambda: Option<Rational>,
        #[arg(long)]
        symbolic: bool,
        /// Largest n scanned by --variant both.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Volumes of the hyperelliptic loci H_g.
    Hyperelliptic {
        #[arg(long, default_value_t = 8)]
        g_max: usize,
        #[arg(long, conflicts_with = "g_max")]
        g: Option<usize>,
    },
    /// Residuals of the generating-function differential equations.
    OdeCheck {
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value = "printed")]
        source: Source,
        #[arg(long, value_parser = rational, conflicts_with = "symbolic")]
        lambda: Option<Rational>,
        #[arg(long)]
        symbolic: bool,
        /// Fail with status 2 unless the h₁ residual vanishes.
        #[arg(long)]
        expect_zero: bool,
    },
    /// Reduced against labeled engines and averaged against fixed-pair ψ.
    CompareEngines {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random profiles added to the grid.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Disagreements listed in full.
        #[arg(long, default_value_t = 10)]
        show: usize,
        #[arg(long, value_enum, default_value = "cusp")]
        cone_rule: ConeRuleArg,
    },
    /// Runs the invariant suite.
    Selftest {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct Modes {
    #[arg(long, value_enum, default_value = "averaged")]
    psi_mode: PsiModeArg,
    #[arg(long, value_enum, default_value = "reduced")]
    reduction: ReductionArg,
    /// Node mark opposite a split-off pair of cone points.
    #[arg(long, value_enum, default_value = "cusp")]
    cone_rule: ConeRuleArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PsiModeArg {
    Averaged,
    FixedPair,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReductionArg {
    Reduced,
    Naive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConeRuleArg {
    Cusp,
    MergedNode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VqVariant {
    Printed,
    Reference,
    Corrected,
    Unconstrained,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Source {
    Printed,
    Reference,
    Unconstrained,
}

impl From<PsiModeArg> for PsiMode {
    fn from(a: PsiModeArg) -> Self {
        match a {
            PsiModeArg::Averaged => PsiMode::AveragedUnordered,
            PsiModeArg::FixedPair => PsiMode::FixedPair,
        }
    }
}

impl From<ReductionArg> for Reduction {
    fn from(a: ReductionArg) -> Self {
        match a {
            ReductionArg::Reduced => Reduction::SymmetryReduced,
            ReductionArg::Naive => Reduction::NaiveLabeled,
        }
    }
}

impl From<ConeRuleArg> for ConeRule {
    fn from(a: ConeRuleArg) -> Self {
        match a {
            ConeRuleArg::Cusp => ConeRule::Cusp,
            ConeRuleArg::MergedNode => ConeRule::MergedNode,
        }
    }
}

impl From<Source> for wpvol::series::H1Source {
    fn from(s: Source) -> Self {
        use wpvol::series::H1Source;
        match s {
            Source::Printed => H1Source::Printed,
            Source::Reference => H1Source::Reference,
            Source::Unconstrained => H1Source::Unconstrained,
        }
    }
}

fn rational(token: &str) -> Result<Rational, String> {
    parse_rational(token.trim()).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("wpvol: {msg}");
            ExitCode::from(1)
        }
    }
}

/// `Ok(false)` when a verification failed.
fn run(cli: Cli) -> Result<bool, String> {
    let Units::Pi = cli.units;
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err("--threads must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let memo = Arc::new(MemoTable::new());
    if let Some(path) = &cli.cache {
        if path.exists() {
            memo.load(path).map_err(|e| e.to_string())?;
        }
    }
    let ctx = commands::Ctx {
        memo: memo.clone(),
        parallel: cli.threads.is_some(),
        decimal: cli.decimal,
    };
    let outcome = dispatch(&ctx, cli.command).map_err(|e| e.to_string())?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    output::emit(&mut out, &outcome.sections, cli.format).map_err(|e| e.to_string())?;
    out.flush().map_err(|e| e.to_string())?;
    if let Some(path) = &cli.cache {
        memo.persist(path).map_err(|e| e.to_string())?;
    }
    Ok(outcome.passed)
}

fn dispatch(ctx: &commands::Ctx, command: Command) -> wpvol::Result<commands::Outcome> {
    use wpvol::Family;
    match command {
        Command::Cusp { max_n, n } => commands::cusp(ctx, n.map_or(3..=max_n, |n| n..=n)),
        Command::Conical { t, profile, modes } => {
            let p = commands::profile(Family::Conical, &t, profile.as_deref())?;
            commands::volume(ctx, &p, modes.psi_mode.into(), modes.reduction.into(), modes.cone_rule.into())
        }
        Command::Boundary {
            s,
            profile,
            symbolic,
            n,
            modes,
        } => {
            if symbolic {
                let n = n.expect("clap requires --n with --symbolic");
                return commands::boundary_symbolic(ctx, n, modes.psi_mode.into(), modes.reduction.into());
            }
            if s.is_empty() && profile.is_none() {
                return Err(wpvol::Error::Domain("boundary needs --s, --profile or --symbolic --n".into()));
            }
            let p = commands::profile(Family::Boundary, &s, profile.as_deref())?;
            commands::volume(ctx, &p, modes.psi_mode.into(), modes.reduction.into(), ConeRule::Cusp)
        }
        Command::Vq {
            n,
            q,
            variant,
            lambda,
            symbolic: _,
            max_n,
        } => commands::vq(n, q, variant, lambda, max_n),
        Command::Hyperelliptic { g_max, g } => commands::hyperelliptic(ctx, g, g_max),
        Command::OdeCheck {
            order,
            source,
            lambda,
            symbolic: _,
            expect_zero,
        } => commands::ode_check(order, source.into(), lambda, expect_zero),
        Command::CompareEngines {
            max_n,
            seed,
            random,
            show,
            cone_rule,
        } => commands::compare_engines(max_n, seed, random, show, cone_rule.into()),
        Command::Selftest { max_n, seed } => commands::selftest(max_n, seed),
    }
}
