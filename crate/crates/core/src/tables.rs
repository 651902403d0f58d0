//! Homology and insertion tables, and the median-warping MSA built on them.
//!
//! `hom[i][c]` is the 1-based position of the residue of sequence `i`
//! homologous to ancestor column `c + 1`, or 0 when that column is deleted in
//! `i`. `ins[i][c]` counts the residues of `i` inserted before ancestor column
//! `c + 1` (the last entry counts residues after the final column). Rendering
//! gives every insert block the width of its longest run and left-justifies
//! each run inside it.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::median::{assemble, estimate_n_hat, median_coords, Weights};
use crate::pairwise::PairwiseTable;
use crate::path::{path_from_alignment, AlignmentPath, Step};
use crate::seqio::{Msa, Sequence, GAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsaTables {
    n_hat: usize,
    hom: Vec<Vec<usize>>,
    ins: Vec<Vec<usize>>,
    paths: Vec<AlignmentPath>,
}

/// Corner cases met while building tables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildDiagnostics {
    /// Median coordinates above `N̂` that were clamped to it.
    pub clamped: usize,
    /// Sequences whose median path stopped short of `N̂`.
    pub padded_rows: usize,
    /// Trailing vertical steps added over all such sequences.
    pub padded_steps: usize,
    /// Residues classified homologous to an already-filled ancestor column and
    /// moved to the following insert block.
    pub reclassified: usize,
}

/// Path of one row against the ancestor axis, derived from its table rows.
fn row_path(hom: &[usize], ins: &[usize]) -> AlignmentPath {
    let mut steps = Vec::new();
    for (c, &count) in ins.iter().enumerate() {
        steps.extend(std::iter::repeat_n(Step::Horizontal, count));
        if let Some(&h) = hom.get(c) {
            steps.push(if h == 0 { Step::Vertical } else { Step::Diagonal });
        }
    }
    AlignmentPath::from_steps(steps)
}

/// Checks that the rows enumerate residues `1..=n` in order.
fn check_row(i: usize, hom: &[usize], ins: &[usize]) -> Result<usize> {
    if ins.len() != hom.len() + 1 {
        return Err(Error::Tables(format!(
            "row {}: {} insert counts for {} ancestor columns",
            i + 1,
            ins.len(),
            hom.len()
        )));
    }
    let mut cursor = 0;
    for (c, &count) in ins.iter().enumerate() {
        cursor += count;
        if let Some(&h) = hom.get(c) {
            if h != 0 {
                if h != cursor + 1 {
                    return Err(Error::Tables(format!(
                        "row {}: column {} holds residue {h}, expected {}",
                        i + 1,
                        c + 1,
                        cursor + 1
                    )));
                }
                cursor += 1;
            }
        }
    }
    Ok(cursor)
}

impl MsaTables {
    /// Validates the tables and derives each row's path to the ancestor.
    pub fn from_hom_ins(n_hat: usize, hom: Vec<Vec<usize>>, ins: Vec<Vec<usize>>) -> Result<Self> {
        if hom.len() != ins.len() {
            return Err(Error::Tables(format!(
                "{} Hom rows but {} Ins rows",
                hom.len(),
                ins.len()
            )));
        }
        for (i, h) in hom.iter().enumerate() {
            if h.len() != n_hat {
                return Err(Error::Tables(format!(
                    "Hom row {} has {} columns, expected {n_hat}",
                    i + 1,
                    h.len()
                )));
            }
            check_row(i, h, &ins[i])?;
        }
        let paths = hom.iter().zip(&ins).map(|(h, s)| row_path(h, s)).collect();
        Ok(MsaTables { n_hat, hom, ins, paths })
    }

    pub fn n_hat(&self) -> usize {
        self.n_hat
    }

    pub fn k(&self) -> usize {
        self.hom.len()
    }

    pub fn hom(&self) -> &[Vec<usize>] {
        &self.hom
    }

    pub fn ins(&self) -> &[Vec<usize>] {
        &self.ins
    }

    /// Path of sequence `i` (first axis) against the ancestor (second axis).
    pub fn paths(&self) -> &[AlignmentPath] {
        &self.paths
    }

    /// Number of residues of sequence `i` accounted for by the tables.
    pub fn row_length(&self, i: usize) -> usize {
        self.hom[i].iter().filter(|&&h| h != 0).count() + self.ins[i].iter().sum::<usize>()
    }

    /// Width of each insert block: the longest run over all sequences.
    pub fn insert_widths(&self) -> Vec<usize> {
        (0..=self.n_hat)
            .map(|c| self.ins.iter().map(|row| row[c]).max().unwrap_or(0))
            .collect()
    }

    /// Total number of alignment columns.
    pub fn width(&self) -> usize {
        self.n_hat + self.insert_widths().iter().sum::<usize>()
    }
}

/// Builds the tables from all pairwise paths, using weighted medians when
/// weights are given.
pub fn build_tables(sequences: &[Sequence], pairwise: &PairwiseTable, weights: Option<&Weights>) -> Result<MsaTables> {
    build_tables_with_diagnostics(sequences, pairwise, weights).map(|(t, _)| t)
}

pub fn build_tables_with_diagnostics(
    sequences: &[Sequence],
    pairwise: &PairwiseTable,
    weights: Option<&Weights>,
) -> Result<(MsaTables, BuildDiagnostics)> {
    let k = sequences.len();
    if k == 0 {
        return Err(Error::EmptyInput("no sequences"));
    }
    if let Some(w) = weights {
        if w.len() != k {
            return Err(Error::CountMismatch(k, w.len()));
        }
    }
    let lengths: Vec<usize> = sequences.iter().map(Sequence::len).collect();
    pairwise.check_consistency(&lengths)?;
    let n_hat = estimate_n_hat(&lengths)?;

    let rows: Vec<(Vec<usize>, Vec<usize>, AlignmentPath, BuildDiagnostics)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let paths: Vec<&AlignmentPath> = (0..k).map(|j| pairwise.path(i, j)).collect();
            let coords = median_coords(&paths, lengths[i], n_hat, weights);
            let (mut path, padding) = assemble(&coords, n_hat);
            let mut diag = BuildDiagnostics {
                clamped: coords.clamped,
                padded_rows: usize::from(padding > 0),
                padded_steps: padding,
                reclassified: 0,
            };
            let mut hom = vec![0usize; n_hat];
            let mut ins = vec![0usize; n_hat + 1];
            for (u, (&a, &b)) in coords.start.iter().zip(&coords.end).enumerate() {
                if a == b {
                    ins[a] += 1;
                } else if hom[b - 1] != 0 {
                    ins[b] += 1;
                    diag.reclassified += 1;
                } else {
                    hom[b - 1] = u + 1;
                }
            }
            if diag.reclassified > 0 {
                path = row_path(&hom, &ins);
            }
            (hom, ins, path, diag)
        })
        .collect();

    let mut diagnostics = BuildDiagnostics::default();
    let mut tables = MsaTables {
        n_hat,
        hom: Vec::with_capacity(k),
        ins: Vec::with_capacity(k),
        paths: Vec::with_capacity(k),
    };
    for (hom, ins, path, d) in rows {
        tables.hom.push(hom);
        tables.ins.push(ins);
        tables.paths.push(path);
        diagnostics.clamped += d.clamped;
        diagnostics.padded_rows += d.padded_rows;
        diagnostics.padded_steps += d.padded_steps;
        diagnostics.reclassified += d.reclassified;
    }
    Ok((tables, diagnostics))
}

/// Lays the sequences out as an alignment. Homologous columns are flagged on
/// the result.
pub fn render(tables: &MsaTables, sequences: &[Sequence]) -> Result<Msa> {
    if sequences.len() != tables.k() {
        return Err(Error::Tables(format!(
            "{} sequences for {} table rows",
            sequences.len(),
            tables.k()
        )));
    }
    for (i, s) in sequences.iter().enumerate() {
        let n = check_row(i, &tables.hom[i], &tables.ins[i])?;
        if n != s.len() {
            return Err(Error::Tables(format!(
                "row {} accounts for {n} residues but '{}' has {}",
                i + 1,
                s.id(),
                s.len()
            )));
        }
    }
    let widths = tables.insert_widths();
    let width = tables.n_hat + widths.iter().sum::<usize>();
    // first column of each insert block; the homologous column follows the block
    let mut block_start = Vec::with_capacity(widths.len());
    let mut homologous = BTreeSet::new();
    let mut col = 0;
    for (c, w) in widths.iter().enumerate() {
        block_start.push(col);
        col += w;
        if c < tables.n_hat {
            homologous.insert(col);
            col += 1;
        }
    }

    let mut rows = Vec::with_capacity(sequences.len());
    for (i, s) in sequences.iter().enumerate() {
        let residues = s.residues();
        let mut row = vec![GAP; width];
        let mut next = 0;
        for (c, &count) in tables.ins[i].iter().enumerate() {
            let start = block_start[c];
            row[start..start + count].copy_from_slice(&residues[next..next + count]);
            next += count;
            if c < tables.n_hat && tables.hom[i][c] != 0 {
                row[start + widths[c]] = residues[next];
                next += 1;
            }
        }
        rows.push(row);
    }
    let ids = sequences.iter().map(|s| s.id().to_string()).collect();
    Msa::new(ids, rows)?.with_homologous_columns(homologous)
}

/// Reads tables off an alignment given its 0-based homologous columns.
pub fn extract_tables(msa: &Msa, homologous_columns: &BTreeSet<usize>) -> Result<MsaTables> {
    if let Some(&c) = homologous_columns.iter().next_back() {
        if c >= msa.width() {
            return Err(Error::OutOfRange {
                what: "column",
                index: c + 1,
                max: msa.width(),
            });
        }
    }
    let n_hat = homologous_columns.len();
    let mut hom = Vec::with_capacity(msa.num_rows());
    let mut ins = Vec::with_capacity(msa.num_rows());
    for row in msa.rows() {
        let mut h = vec![0usize; n_hat];
        let mut s = vec![0usize; n_hat + 1];
        let mut pos = 0;
        let mut seen = 0;
        for (c, &b) in row.iter().enumerate() {
            let is_hom = homologous_columns.contains(&c);
            if b != GAP {
                pos += 1;
                if is_hom {
                    h[seen] = pos;
                } else {
                    s[seen] += 1;
                }
            }
            if is_hom {
                seen += 1;
            }
        }
        hom.push(h);
        ins.push(s);
    }
    MsaTables::from_hom_ins(n_hat, hom, ins)
}

/// Pairwise path between rows `i` and `j` of an alignment, dropping columns
/// that are gaps in both.
pub fn pairwise_path(msa: &Msa, i: usize, j: usize) -> Result<AlignmentPath> {
    let k = msa.num_rows();
    for idx in [i, j] {
        if idx >= k {
            return Err(Error::OutOfRange {
                what: "row",
                index: idx + 1,
                max: k,
            });
        }
    }
    let (x, y): (Vec<u8>, Vec<u8>) = msa
        .row(i)
        .iter()
        .zip(msa.row(j))
        .filter(|(&a, &b)| a != GAP || b != GAP)
        .map(|(&a, &b)| (a, b))
        .unzip();
    path_from_alignment(&x, &y)
}

/// All pairwise paths induced by an alignment.
pub fn pairwise_from_msa(msa: &Msa) -> Result<PairwiseTable> {
    let lengths: Vec<usize> = (0..msa.num_rows())
        .map(|i| msa.row(i).iter().filter(|&&b| b != GAP).count())
        .collect();
    PairwiseTable::from_upper(&lengths, |i, j| Ok((pairwise_path(msa, i, j)?, 0.0)))
}

/// Header line `K <k> N_hat <n>`, then K rows of Hom and K rows of Ins.
pub fn write_tables_tsv(tables: &MsaTables) -> String {
    let mut out = String::new();
    writeln!(out, "K\t{}\tN_hat\t{}", tables.k(), tables.n_hat).unwrap();
    for row in tables.hom.iter().chain(&tables.ins) {
        let line: Vec<String> = row.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join("\t")).unwrap();
    }
    out
}

pub fn read_tables_tsv(text: &str) -> Result<MsaTables> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Tables("missing header".into()))?
        .split('\t')
        .collect();
    let (k, n_hat) = match header.as_slice() {
        ["K", k, "N_hat", n] => (
            k.parse::<usize>().map_err(|_| Error::Tables(format!("bad K '{k}'")))?,
            n.parse::<usize>()
                .map_err(|_| Error::Tables(format!("bad N_hat '{n}'")))?,
        ),
        _ => return Err(Error::Tables("header must read 'K <k> N_hat <n>'".into())),
    };
    let mut parse_rows = |what: &str| -> Result<Vec<Vec<usize>>> {
        (0..k)
            .map(|r| {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Tables(format!("missing {what} row {}", r + 1)))?;
                line.split('\t')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Tables(format!("bad {what} entry '{t}'")))
                    })
                    .collect()
            })
            .collect()
    };
    let hom = parse_rows("Hom")?;
    let ins = parse_rows("Ins")?;
    MsaTables::from_hom_ins(n_hat, hom, ins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqio::Alphabet;
    use proptest::prelude::*;

    fn example_msa() -> Msa {
        Msa::new(
            vec!["X".into(), "Y".into(), "Z".into()],
            vec![b"ACAGTA--T".to_vec(), b"-CT-CCAG-".to_vec(), b"TCAC---CT".to_vec()],
        )
        .unwrap()
    }

    fn example_columns() -> BTreeSet<usize> {
        [1, 2, 3, 7].into_iter().collect()
    }

    #[test]
    fn extracts_example_tables() {
        let t = extract_tables(&example_msa(), &example_columns()).unwrap();
        assert_eq!(t.n_hat(), 4);
        assert_eq!(t.hom(), &[vec![2, 3, 4, 0], vec![1, 2, 0, 6], vec![2, 3, 4, 5]]);
        assert_eq!(
            t.ins(),
            &[vec![1, 0, 0, 2, 1], vec![0, 0, 0, 3, 0], vec![1, 0, 0, 0, 1]]
        );
        assert_eq!(t.insert_widths(), vec![1, 0, 0, 3, 1]);
        assert_eq!(t.width(), 9);
    }

    #[test]
    fn renders_example_alignment() {
        let t = MsaTables::from_hom_ins(
            4,
            vec![vec![2, 3, 4, 0], vec![1, 2, 0, 6], vec![2, 3, 4, 5]],
            vec![vec![1, 0, 0, 2, 1], vec![0, 0, 0, 3, 0], vec![1, 0, 0, 0, 1]],
        )
        .unwrap();
        let seqs = example_msa().sequences(Alphabet::Dna).unwrap();
        let msa = render(&t, &seqs).unwrap();
        assert_eq!(msa.rows(), example_msa().rows());
        assert_eq!(msa.homologous_columns(), Some(&example_columns()));
    }

    #[test]
    fn example_pair_path() {
        let p = pairwise_path(&example_msa(), 0, 1).unwrap();
        assert_eq!(
            p.points(),
            &[
                (0, 0),
                (1, 0),
                (2, 1),
                (3, 2),
                (4, 2),
                (5, 3),
                (6, 4),
                (6, 5),
                (6, 6),
                (7, 6)
            ]
        );
        assert_eq!((p.n(), p.m()), (7, 6));
        assert!(pairwise_path(&example_msa(), 0, 3).is_err());
    }

    #[test]
    fn single_sequence_tables() {
        let msa = Msa::new(vec!["a".into()], vec![b"ACGT".to_vec()]).unwrap();
        let all: BTreeSet<usize> = (0..4).collect();
        let t = extract_tables(&msa, &all).unwrap();
        assert_eq!(t.hom(), &[vec![1, 2, 3, 4]]);
        assert_eq!(t.ins(), &[vec![0; 5]]);
        assert_eq!(t.paths()[0], AlignmentPath::diagonal(4));
    }

    #[test]
    fn extract_rejects_out_of_range_columns() {
        let cols: BTreeSet<usize> = [2, 9].into_iter().collect();
        assert!(matches!(
            extract_tables(&example_msa(), &cols),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn copies_of_one_sequence() {
        let s = Sequence::new("s", "ACGTTGCA", Alphabet::Dna).unwrap();
        let seqs: Vec<Sequence> = (0..5)
            .map(|i| Sequence::new(format!("s{i}"), s.residues(), Alphabet::Dna).unwrap())
            .collect();
        let lengths = vec![8; 5];
        let pw = PairwiseTable::from_upper(&lengths, |_, _| Ok((AlignmentPath::diagonal(8), 40.0))).unwrap();
        let (t, d) = build_tables_with_diagnostics(&seqs, &pw, None).unwrap();
        assert_eq!(d, BuildDiagnostics::default());
        assert_eq!(t.n_hat(), 8);
        for i in 0..5 {
            assert_eq!(t.hom()[i], (1..=8).collect::<Vec<_>>());
            assert!(t.ins()[i].iter().all(|&c| c == 0));
        }
        let msa = render(&t, &seqs).unwrap();
        assert_eq!(msa.width(), 8);
        assert!(msa.rows().iter().all(|r| r == s.residues()));
    }

    #[test]
    fn render_rejects_inconsistent_tables() {
        let seqs = example_msa().sequences(Alphabet::Dna).unwrap();
        let t = MsaTables::from_hom_ins(
            1,
            vec![vec![1], vec![1], vec![1]],
            vec![vec![0, 5], vec![0, 5], vec![0, 5]],
        )
        .unwrap();
        assert!(render(&t, &seqs).is_err());
        assert!(MsaTables::from_hom_ins(1, vec![vec![2]], vec![vec![0, 1]]).is_err());
        assert!(MsaTables::from_hom_ins(2, vec![vec![1]], vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let t = extract_tables(&example_msa(), &example_columns()).unwrap();
        let text = write_tables_tsv(&t);
        assert!(text.starts_with("K\t3\tN_hat\t4\n2\t3\t4\t0\n"));
        assert_eq!(read_tables_tsv(&text).unwrap(), t);
        assert!(read_tables_tsv("K\t1\tN_hat\t1\n1\n").is_err());
        assert!(read_tables_tsv("nope\n").is_err());
    }

    #[test]
    fn inconsistent_pairwise_rejected() {
        let seqs: Vec<Sequence> = ["AC", "ACG", "AG"]
            .iter()
            .enumerate()
            .map(|(i, s)| Sequence::new(format!("s{i}"), s, Alphabet::Dna).unwrap())
            .collect();
        let mut paths = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let (n, m) = (seqs[i].len(), seqs[j].len());
                let steps = std::iter::repeat_n(Step::Horizontal, n).chain(std::iter::repeat_n(Step::Vertical, m));
                paths.push(if i == j {
                    AlignmentPath::diagonal(n)
                } else {
                    AlignmentPath::from_steps(steps)
                });
            }
        }
        let pw = PairwiseTable::from_full(3, paths).unwrap();
        assert!(matches!(
            build_tables(&seqs, &pw, None),
            Err(Error::InconsistentPairwise { .. })
        ));
    }

    /// Random consistent tables: per row, per block, an insert count and a
    /// homologous flag.
    fn arb_tables() -> impl Strategy<Value = MsaTables> {
        (1usize..6, 0usize..8).prop_flat_map(|(k, n_hat)| {
            proptest::collection::vec(
                (
                    proptest::collection::vec(0usize..3, n_hat + 1),
                    proptest::collection::vec(any::<bool>(), n_hat),
                ),
                k..=k,
            )
            .prop_map(move |rows| {
                let mut hom = Vec::new();
                let mut ins = Vec::new();
                for (counts, flags) in rows {
                    let mut h = vec![0; n_hat];
                    let mut pos = 0;
                    for c in 0..=n_hat {
                        pos += counts[c];
                        if c < n_hat && flags[c] {
                            pos += 1;
                            h[c] = pos;
                        }
                    }
                    hom.push(h);
                    ins.push(counts);
                }
                MsaTables::from_hom_ins(n_hat, hom, ins).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn render_then_extract_is_identity(t in arb_tables()) {
            let seqs: Vec<Sequence> = (0..t.k())
                .map(|i| Sequence::new(format!("s{i}"), vec![b'A'; t.row_length(i)], Alphabet::Dna).unwrap())
                .collect();
            let msa = render(&t, &seqs).unwrap();
            prop_assert_eq!(msa.width(), t.width());
            let cols = msa.homologous_columns().unwrap().clone();
            let back = extract_tables(&msa, &cols).unwrap();
            prop_assert_eq!(&back, &t);
            for (i, s) in seqs.iter().enumerate() {
                prop_assert_eq!(msa.ungapped(i), s.residues().to_vec());
                prop_assert_eq!(t.paths()[i].n(), t.row_length(i));
                prop_assert_eq!(t.paths()[i].m(), t.n_hat());
            }
        }
    }
}
