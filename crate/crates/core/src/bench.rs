//! Replicate benchmark on simulated data: each replicate is aligned twice,
//! once from estimated pairwise alignments and once from the pairwise
//! alignments induced by the true MSA, and both results are scored against it.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::error::Result;
use crate::pairwise::{align_all, ScoringScheme};
use crate::score::{score, ScoreReport};
use crate::sim::{simulate_replicate, SimParams};
use crate::tables::{build_tables, pairwise_from_msa, render};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Estimated,
    Reference,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Estimated => "estimated",
            Variant::Reference => "reference",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRecord {
    pub k: usize,
    pub replicate: u64,
    pub variant: Variant,
    pub report: ScoreReport,
}

/// Simulates replicate `replicate` with `params` and scores both variants.
pub fn run_replicate(params: &SimParams, replicate: u64, scheme: &ScoringScheme) -> Result<[BenchRecord; 2]> {
    let sim = simulate_replicate(params, replicate)?;
    let seqs = &sim.descendants;
    let estimated = align_all(seqs, scheme)?;
    let reference = pairwise_from_msa(&sim.reference)?;
    let run = |variant, table| -> Result<BenchRecord> {
        let msa = render(&build_tables(seqs, table, None)?, seqs)?;
        Ok(BenchRecord {
            k: params.k,
            replicate,
            variant,
            report: score(&msa, &sim.reference)?,
        })
    };
    Ok([
        run(Variant::Estimated, &estimated)?,
        run(Variant::Reference, &reference)?,
    ])
}

/// Runs `replicates` replicates for each K in `k_list`, in parallel. Records
/// come back ordered by K, then replicate, then variant.
pub fn run_bench(
    params: &SimParams,
    k_list: &[usize],
    replicates: u64,
    scheme: &ScoringScheme,
) -> Result<Vec<BenchRecord>> {
    let jobs: Vec<(usize, u64)> = k_list
        .iter()
        .flat_map(|&k| (0..replicates).map(move |r| (k, r)))
        .collect();
    let results: Vec<[BenchRecord; 2]> = jobs
        .par_iter()
        .map(|&(k, r)| run_replicate(&SimParams { k, ..*params }, r, scheme))
        .collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}

/// Long-format table with columns `K replicate variant sp tc`.
pub fn write_bench_tsv(records: &[BenchRecord]) -> String {
    let mut out = String::from("K\treplicate\tvariant\tsp\ttc\n");
    for r in records {
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{:.6}",
            r.k, r.replicate, r.variant, r.report.sp, r.report.tc
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_count_and_order() {
        let p = SimParams {
            seed: 3,
            ..SimParams::default()
        };
        let recs = run_bench(&p, &[3, 4], 2, &ScoringScheme::dna_default()).unwrap();
        let keys: Vec<(usize, u64, Variant)> = recs.iter().map(|r| (r.k, r.replicate, r.variant)).collect();
        assert_eq!(
            keys,
            vec![
                (3, 0, Variant::Estimated),
                (3, 0, Variant::Reference),
                (3, 1, Variant::Estimated),
                (3, 1, Variant::Reference),
                (4, 0, Variant::Estimated),
                (4, 0, Variant::Reference),
                (4, 1, Variant::Estimated),
                (4, 1, Variant::Reference),
            ]
        );
        let tsv = write_bench_tsv(&recs);
        assert_eq!(tsv.lines().count(), 9);
        assert!(tsv.starts_with("K\treplicate\tvariant\tsp\ttc\n3\t0\testimated\t"));
    }

    #[test]
    fn no_evolution_scores_one() {
        let p = SimParams {
            lambda: 0.0,
            mu: 0.0,
            alpha: 0.0,
            seed: 11,
            ..SimParams::default()
        };
        for rec in run_bench(&p, &[5], 2, &ScoringScheme::dna_default()).unwrap() {
            assert_eq!((rec.report.sp, rec.report.tc), (1.0, 1.0), "{rec:?}");
        }
    }
}
