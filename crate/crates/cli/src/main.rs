use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use peiffer_cli::{run_command, Command, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "peiffer", version, about = "Identity sequences, Peiffer moves and finite shadows")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Prime for mod-p computations.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// Degree bound for Magnus expansions and quotients.
    #[arg(long = "deg", global = true, default_value_t = 3)]
    deg: usize,
    /// Master seed for randomized campaigns.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of cases in a campaign.
    #[arg(long, global = true, default_value_t = 100)]
    count: usize,
    /// Maximum number of random moves per case.
    #[arg(long, global = true, default_value_t = 10)]
    moves: usize,
    /// Cap on enumerated group elements.
    #[arg(long, global = true, default_value_t = peiffer::oracle::DEFAULT_BUDGET)]
    budget: usize,
    /// Generator names for bare words, e.g. "x1 x2 x3".
    #[arg(long, global = true)]
    gens: Option<String>,
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Freely reduce a word.
    Reduce { word: String },
    /// Check that a sequence file is an identity sequence.
    CheckSeq { pres: PathBuf, seq: PathBuf },
    /// Block decomposition of a 2- or 3-class identity sequence.
    Blocks { pres: PathBuf, seq: PathBuf },
    /// Λ for a 2-class identity sequence.
    Lambda2 { pres: PathBuf, seq: PathBuf },
    /// Λ for a 3-class identity sequence.
    Lambda3 { pres: PathBuf, seq: PathBuf },
    /// Cross-effect Λ(a+b)·Λ(b)⁻¹·Λ(a)⁻¹.
    CrossEffect { pres: PathBuf, a: PathBuf, b: PathBuf },
    /// Random Peiffer moves must preserve Λ in the shadow.
    FuzzPeiffer { pres: PathBuf },
    /// Truncated Magnus expansion (over ℤ unless --modular).
    Magnus {
        word: String,
        /// Reduce coefficients mod --p.
        #[arg(long)]
        modular: bool,
    },
    /// Lower central series degree of a word.
    GammaDegree { word: String },
    /// Finite shadow of the intersection modulo the denominator.
    Shadow {
        pres: PathBuf,
        /// Word to locate, as `name=expr` or `expr`; repeatable.
        #[arg(long = "word")]
        words: Vec<String>,
    },
    /// Test u ≡ v modulo the denominator in the shadow.
    Congruent { pres: PathBuf, u: String, v: String },
    /// Bracket generators of the symmetric commutator subgroup.
    WuGens {
        n: usize,
        #[arg(long = "max-len")]
        max_len: Option<usize>,
    },
    /// The sphere presentation on n generators.
    WuPresentation { n: usize },
    /// Generator word for π_k(S²), k = 3, 4, 5.
    SphereGen { k: usize },
    /// Check the quadratic functor sequences for ℤ^rank.
    Functors {
        #[arg(long)]
        rank: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = match cli.command {
        Cmd::Reduce { word } => Command::Reduce { word },
        Cmd::CheckSeq { pres, seq } => Command::CheckSeq { pres, seq },
        Cmd::Blocks { pres, seq } => Command::Blocks { pres, seq },
        Cmd::Lambda2 { pres, seq } => Command::Lambda2 { pres, seq },
        Cmd::Lambda3 { pres, seq } => Command::Lambda3 { pres, seq },
        Cmd::CrossEffect { pres, a, b } => Command::CrossEffect { pres, a, b },
        Cmd::FuzzPeiffer { pres } => Command::FuzzPeiffer { pres },
        Cmd::Magnus { word, modular } => Command::Magnus { word, modular },
        Cmd::GammaDegree { word } => Command::GammaDegree { word },
        Cmd::Shadow { pres, words } => Command::Shadow { pres, words },
        Cmd::Congruent { pres, u, v } => Command::Congruent { pres, u, v },
        Cmd::WuGens { n, max_len } => Command::WuGens {
            n,
            max_len: max_len.unwrap_or(n + 1),
        },
        Cmd::WuPresentation { n } => Command::WuPresentation { n },
        Cmd::SphereGen { k } => Command::SphereGen { k },
        Cmd::Functors { rank } => Command::Functors { rank },
    };
    let cfg = RunConfig {
        command,
        gens: cli.gens,
        p: cli.p,
        d: cli.deg,
        seed: cli.seed,
        count: cli.count,
        moves: cli.moves,
        budget: cli.budget,
        json: cli.json,
    };
    let out = run_command(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
