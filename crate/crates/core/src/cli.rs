//! Command-line front end.
//!
//! External files use 1-based sequence and column indices. All outputs are
//! deterministic for fixed inputs and seeds, whatever the thread count.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::bench::{run_bench, write_bench_tsv};
use crate::error::{Error, Result};
use crate::median::{compute_weights, Weights};
use crate::pairwise::{align_all, Mode, PairwiseTable, ScoringScheme};
use crate::score::score;
use crate::seqio::{read_aligned_fasta, read_fasta, write_aligned_fasta, write_fasta, Alphabet, Sequence};
use crate::sim::{simulate, SimParams};
use crate::tables::{build_tables, render, write_tables_tsv};

#[derive(Debug, Parser)]
#[command(name = "warpmsa", version, about = "Median-warping multiple sequence alignment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align every pair of sequences and write paths and scores as TSV.
    Pairwise(PairwiseArgs),
    /// Build a multiple alignment from all pairwise alignments.
    Align(AlignArgs),
    /// Score a test alignment against a reference (SP and TC).
    Score(ScoreArgs),
    /// Simulate sequences and their true alignment on a star tree.
    Simulate(SimulateArgs),
    /// Benchmark estimated and reference-fed alignments on simulated data.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SchemeName {
    DnaDefault,
    Blosum62,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long, default_value = "dna")]
    pub alphabet: Alphabet,
    /// Defaults to dna-default for DNA and blosum62 for protein.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeName>,
    #[arg(long, default_value = "global")]
    pub mode: Mode,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl SchemeArgs {
    fn scheme(&self) -> ScoringScheme {
        let name = self.scheme.unwrap_or(match self.alphabet {
            Alphabet::Dna => SchemeName::DnaDefault,
            Alphabet::Protein => SchemeName::Blosum62,
        });
        match name {
            SchemeName::DnaDefault => ScoringScheme::dna_default().with_mode(self.mode),
            SchemeName::Blosum62 => ScoringScheme::blosum62(self.mode),
        }
    }
}

#[derive(Debug, Args)]
pub struct PairwiseArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Debug, Args)]
pub struct AlignArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Two columns per line: sequence id and distance to the ancestor.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Also write the Hom/Ins tables here.
    #[arg(long)]
    pub tables: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Alignment under test.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "dna")]
    pub alphabet: Alphabet,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Ancestor length N.
    #[arg(long = "length", default_value_t = 100)]
    pub n_ancestor: usize,
    #[arg(long, default_value_t = 0.03)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.03)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub branch_length: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SimArgs {
    fn params(&self, k: usize) -> SimParams {
        SimParams {
            n_ancestor: self.n_ancestor,
            k,
            lambda: self.lambda,
            mu: self.mu,
            alpha: self.alpha,
            branch_length: self.branch_length,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Output prefix: writes PREFIX.ancestor.fa, PREFIX.descendants.fa,
    /// PREFIX.reference.fa and PREFIX.homologous.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(short, long, default_value_t = 10)]
    pub k: usize,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "10,20")]
    pub k_list: Vec<usize>,
    /// Replicates M per K.
    #[arg(long, default_value_t = 100)]
    pub replicates: u64,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value = "global")]
    pub mode: Mode,
    #[arg(long)]
    pub threads: Option<usize>,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(0) => Err(Error::InvalidParameter("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(f),
    }
}

fn read_sequences(path: &Path, alphabet: Alphabet, min: usize) -> Result<Vec<Sequence>> {
    let seqs = read_fasta(&read_file(path)?, alphabet)?;
    if seqs.len() < min {
        return Err(Error::InvalidParameter(format!(
            "{} holds {} sequences, at least {min} required",
            path.display(),
            seqs.len()
        )));
    }
    Ok(seqs)
}

/// `i  j  score  path` with 1-based sequence indices, one line per pair.
pub fn pairwise_tsv(table: &PairwiseTable) -> String {
    let mut out = String::from("i\tj\tscore\tpath\n");
    for i in 0..table.k() {
        for j in i + 1..table.k() {
            let points: Vec<String> = table
                .path(i, j)
                .points()
                .iter()
                .map(|(x, y)| format!("{x},{y}"))
                .collect();
            writeln!(out, "{}\t{}\t{}\t{}", i + 1, j + 1, table.score(i, j), points.join(" ")).unwrap();
        }
    }
    out
}

/// Reads `id distance` lines (blank lines and `#` comments skipped) and
/// orders the distances like `seqs`.
pub fn parse_distances(text: &str, seqs: &[Sequence]) -> Result<Vec<f64>> {
    let mut by_id = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(id), Some(d), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::InvalidParameter(format!(
                "weights line {}: expected 'id distance'",
                n + 1
            )));
        };
        let d: f64 = d
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("weights line {}: bad distance '{d}'", n + 1)))?;
        if by_id.insert(id.to_string(), d).is_some() {
            return Err(Error::InvalidParameter(format!("weights: duplicate id '{id}'")));
        }
    }
    seqs.iter()
        .map(|s| {
            by_id
                .get(s.id())
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("weights: no distance for '{}'", s.id())))
        })
        .collect()
}

fn cmd_pairwise(args: &PairwiseArgs) -> Result<()> {
    let seqs = read_sequences(&args.input, args.scheme.alphabet, 2)?;
    let scheme = args.scheme.scheme();
    let table = with_threads(args.scheme.threads, || align_all(&seqs, &scheme))?;
    emit(args.out.as_deref(), &pairwise_tsv(&table))
}

fn cmd_align(args: &AlignArgs) -> Result<()> {
    let seqs = read_sequences(&args.input, args.scheme.alphabet, 2)?;
    let weights: Option<Weights> = match &args.weights {
        Some(p) => Some(compute_weights(&parse_distances(&read_file(p)?, &seqs)?, args.epsilon)?),
        None => None,
    };
    let scheme = args.scheme.scheme();
    let tables = with_threads(args.scheme.threads, || {
        let pairwise = align_all(&seqs, &scheme)?;
        build_tables(&seqs, &pairwise, weights.as_ref())
    })?;
    if let Some(p) = &args.tables {
        emit(Some(p), &write_tables_tsv(&tables))?;
    }
    emit(args.out.as_deref(), &write_aligned_fasta(&render(&tables, &seqs)?)?)
}

fn cmd_score(args: &ScoreArgs) -> Result<()> {
    let test = read_aligned_fasta(&read_file(&args.input)?, args.alphabet)?;
    let reference = read_aligned_fasta(&read_file(&args.reference)?, args.alphabet)?;
    let report = score(&test, &reference)?;
    emit(args.out.as_deref(), &format!("{report}\n"))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let out = simulate(&args.sim.params(args.k))?;
    let cols: Vec<String> = out
        .reference
        .homologous_columns()
        .into_iter()
        .flatten()
        .map(|c| (c + 1).to_string())
        .collect();
    let files = [
        (".ancestor.fa", write_fasta(std::slice::from_ref(&out.ancestor))),
        (".descendants.fa", write_fasta(&out.descendants)),
        (".reference.fa", write_aligned_fasta(&out.reference)?),
        (".homologous", format!("{}\n", cols.join(" "))),
    ];
    for (suffix, text) in files {
        emit(Some(&with_suffix(&args.out, suffix)), &text)?;
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    if args.k_list.is_empty() || args.k_list.contains(&0) {
        return Err(Error::InvalidParameter("--k-list needs positive values".into()));
    }
    let params = args.sim.params(args.k_list[0]);
    let scheme = ScoringScheme::dna_default().with_mode(args.mode);
    let records = with_threads(args.threads, || {
        run_bench(&params, &args.k_list, args.replicates, &scheme)
    })?;
    emit(args.out.as_deref(), &write_bench_tsv(&records))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Pairwise(a) => cmd_pairwise(a),
        Command::Align(a) => cmd_align(a),
        Command::Score(a) => cmd_score(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` (program name first), runs, and reports errors on stderr.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
