//! Multiple sequence alignment by median warping.
//!
//! Every pairwise alignment is a monotone lattice path. For each sequence the
//! coordinate-wise median of its K paths defines a path onto a shared
//! ancestor axis of length `N̂`, and those per-sequence paths are rendered as
//! one MSA through homology and insertion tables.
//!
//! ```
//! use warpmsa::{align_all, build_tables, read_fasta, render, Alphabet, ScoringScheme};
//!
//! let seqs = read_fasta(">a\nACGTACGT\n>b\nACGACGT\n>c\nACGTACGT\n", Alphabet::Dna).unwrap();
//! let pairwise = align_all(&seqs, &ScoringScheme::dna_default()).unwrap();
//! let msa = render(&build_tables(&seqs, &pairwise, None).unwrap(), &seqs).unwrap();
//! assert_eq!(msa.num_rows(), 3);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod median;
pub mod pairwise;
pub mod path;
pub mod score;
pub mod seqio;
pub mod sim;
pub mod tables;

pub use error::{Error, Result};
pub use median::{compute_weights, estimate_n_hat, integer_median, median_path, weighted_integer_median, Weights};
pub use pairwise::{align_all, align_pair, Mode, PairwiseResult, PairwiseTable, ScoringScheme, SubstitutionMatrix};
pub use path::{path_from_alignment, AlignmentPath, Point, Step, StepCoords};
pub use score::{score, sp_score, tc_score, ScoreReport};
pub use seqio::{read_aligned_fasta, read_fasta, write_aligned_fasta, write_fasta, Alphabet, Msa, Sequence, GAP};
pub use sim::{simulate, simulate_replicate, SimOutput, SimParams};
pub use tables::{
    build_tables, build_tables_with_diagnostics, extract_tables, pairwise_from_msa, pairwise_path, read_tables_tsv,
    render, write_tables_tsv, BuildDiagnostics, MsaTables,
};
