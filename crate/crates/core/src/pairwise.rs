//! Affine-gap pairwise alignment (Gotoh's three-state recursion).
//!
//! A gap run of length `l` costs `gap_open + l * gap_extend`. In overlap mode,
//! runs lying on the boundary of the grid (horizontal runs on the first or
//! last row, vertical runs on the first or last column) are free.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::path::{AlignmentPath, Step};
use crate::seqio::Sequence;

const BLOSUM62: &str = include_str!("../data/blosum62.txt");
const ABSENT: u8 = u8::MAX;

/// Square, symmetric residue-pair score table.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionMatrix {
    symbols: Vec<u8>,
    index: [u8; 256],
    scores: Vec<f64>,
}

impl SubstitutionMatrix {
    pub fn new(symbols: &[u8], scores: Vec<f64>) -> Result<Self> {
        let k = symbols.len();
        if k == 0 || k >= ABSENT as usize {
            return Err(Error::Matrix(format!("{k} symbols")));
        }
        if scores.len() != k * k {
            return Err(Error::Matrix(format!("{} scores for {k} symbols", scores.len())));
        }
        let mut index = [ABSENT; 256];
        for (i, &s) in symbols.iter().enumerate() {
            let s = s.to_ascii_uppercase();
            if index[s as usize] != ABSENT {
                return Err(Error::Matrix(format!("duplicate symbol '{}'", s as char)));
            }
            index[s as usize] = i as u8;
        }
        for a in 0..k {
            for b in 0..a {
                if scores[a * k + b] != scores[b * k + a] {
                    return Err(Error::Matrix(format!(
                        "not symmetric at ({}, {})",
                        symbols[a] as char, symbols[b] as char
                    )));
                }
            }
        }
        Ok(SubstitutionMatrix {
            symbols: symbols.iter().map(u8::to_ascii_uppercase).collect(),
            index,
            scores,
        })
    }

    /// Uniform match/mismatch scores over `symbols`.
    pub fn match_mismatch(symbols: &[u8], matched: f64, mismatched: f64) -> Self {
        let k = symbols.len();
        let scores = (0..k * k)
            .map(|c| if c / k == c % k { matched } else { mismatched })
            .collect();
        Self::new(symbols, scores).expect("match/mismatch matrix is well formed")
    }

    pub fn blosum62() -> Self {
        BLOSUM62.parse().expect("bundled BLOSUM62 parses")
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    fn code(&self, residue: u8) -> Option<usize> {
        match self.index[residue.to_ascii_uppercase() as usize] {
            ABSENT => None,
            c => Some(c as usize),
        }
    }

    /// Score of a residue pair, or `None` if either residue is not in the table.
    pub fn score(&self, a: u8, b: u8) -> Option<f64> {
        Some(self.scores[self.code(a)? * self.symbols.len() + self.code(b)?])
    }

    fn encode(&self, seq: &Sequence) -> Result<Vec<usize>> {
        seq.residues()
            .iter()
            .map(|&r| {
                self.code(r).ok_or_else(|| Error::AlphabetMismatch {
                    id: seq.id().to_string(),
                    ch: r as char,
                })
            })
            .collect()
    }
}

/// Parses a whitespace-separated square matrix: a header row of residue
/// symbols, then one row per symbol with an optional leading row label.
/// Lines starting with `#` are comments.
impl FromStr for SubstitutionMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Matrix("no header row".into()))?;
        let mut symbols = Vec::new();
        for tok in header.split_whitespace() {
            match tok.as_bytes() {
                [b] => symbols.push(*b),
                _ => return Err(Error::Matrix(format!("bad header symbol '{tok}'"))),
            }
        }
        let k = symbols.len();
        let mut scores = Vec::with_capacity(k * k);
        let mut rows = 0;
        for line in lines {
            let mut toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() == k + 1 {
                let label = toks.remove(0);
                if label.as_bytes() != [symbols[rows.min(k - 1)]] {
                    return Err(Error::Matrix(format!("row label '{label}' out of order")));
                }
            }
            if toks.len() != k {
                return Err(Error::Matrix(format!(
                    "row {} has {} entries, expected {k}",
                    rows + 1,
                    toks.len()
                )));
            }
            for t in toks {
                scores.push(
                    t.parse::<f64>()
                        .map_err(|_| Error::Matrix(format!("bad score '{t}'")))?,
                );
            }
            rows += 1;
            if rows > k {
                return Err(Error::Matrix(format!("more than {k} rows")));
            }
        }
        if rows != k {
            return Err(Error::Matrix(format!("{rows} rows for {k} symbols")));
        }
        SubstitutionMatrix::new(&symbols, scores)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Global,
    /// Global alignment with free terminal gap runs.
    Overlap,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(Mode::Global),
            "overlap" => Ok(Mode::Overlap),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Global => "global",
            Mode::Overlap => "overlap",
        })
    }
}

/// Substitution scores plus affine gap penalties. Penalties are stored as
/// nonnegative magnitudes and subtracted from the score.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringScheme {
    matrix: SubstitutionMatrix,
    gap_open: f64,
    gap_extend: f64,
    mode: Mode,
}

impl ScoringScheme {
    pub fn new(matrix: SubstitutionMatrix, gap_open: f64, gap_extend: f64, mode: Mode) -> Result<Self> {
        if !(gap_open >= 0.0 && gap_extend >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gap penalties must be nonnegative (open {gap_open}, extend {gap_extend})"
            )));
        }
        Ok(ScoringScheme {
            matrix,
            gap_open,
            gap_extend,
            mode,
        })
    }

    /// Match +5, mismatch -4 over ACGT; open 10, extend 0.5; global.
    pub fn dna_default() -> Self {
        Self::new(
            SubstitutionMatrix::match_mismatch(b"ACGT", 5.0, -4.0),
            10.0,
            0.5,
            Mode::Global,
        )
        .expect("valid defaults")
    }

    pub fn blosum62(mode: Mode) -> Self {
        Self::new(SubstitutionMatrix::blosum62(), 10.0, 0.5, mode).expect("valid defaults")
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn matrix(&self) -> &SubstitutionMatrix {
        &self.matrix
    }

    pub fn gap_open(&self) -> f64 {
        self.gap_open
    }

    pub fn gap_extend(&self) -> f64 {
        self.gap_extend
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn substitution(&self, a: u8, b: u8) -> Option<f64> {
        self.matrix.score(a, b)
    }

    /// Penalty of a gap run of `len` residues.
    pub fn gap_cost(&self, len: usize) -> f64 {
        if len == 0 {
            0.0
        } else {
            self.gap_open + len as f64 * self.gap_extend
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseResult {
    pub path: AlignmentPath,
    pub score: f64,
}

const M: usize = 0;
const V: usize = 1;
const H: usize = 2;
/// Tie-break precedence: diagonal, then vertical, then horizontal.
const PRECEDENCE: [usize; 3] = [M, V, H];

#[inline]
fn best(cands: [f64; 3]) -> (f64, u8) {
    let mut arg = PRECEDENCE[0];
    for &s in &PRECEDENCE[1..] {
        if cands[s] > cands[arg] {
            arg = s;
        }
    }
    (cands[arg], arg as u8)
}

/// Optimal alignment of `x` (first axis) against `y` (second axis).
pub fn align_pair(x: &Sequence, y: &Sequence, scheme: &ScoringScheme) -> Result<PairwiseResult> {
    let xs = scheme.matrix.encode(x)?;
    let ys = scheme.matrix.encode(y)?;
    Ok(align_codes(&xs, &ys, scheme))
}

fn align_codes(xs: &[usize], ys: &[usize], scheme: &ScoringScheme) -> PairwiseResult {
    let (n, m) = (xs.len(), ys.len());
    let k = scheme.matrix.symbols.len();
    let subs = &scheme.matrix.scores;
    let overlap = scheme.mode == Mode::Overlap;
    let (open, ext) = (scheme.gap_open, scheme.gap_extend);
    // (open + extend, extend) for a horizontal step on row j / vertical step on column i
    let h_cost = |j: usize| {
        if overlap && (j == 0 || j == m) {
            (0.0, 0.0)
        } else {
            (open + ext, ext)
        }
    };
    let v_cost = |i: usize| {
        if overlap && (i == 0 || i == n) {
            (0.0, 0.0)
        } else {
            (open + ext, ext)
        }
    };

    let neg = f64::NEG_INFINITY;
    let w = m + 1;
    // predecessor state per (state, cell)
    let mut trace = vec![[0u8; 3]; (n + 1) * w];
    let mut prev = vec![[neg; 3]; w];
    let mut cur = vec![[neg; 3]; w];

    for i in 0..=n {
        let (vo, ve) = v_cost(i);
        for j in 0..=m {
            let mut cell = [neg; 3];
            let mut ptr = [0u8; 3];
            if i == 0 && j == 0 {
                cell[M] = 0.0;
            }
            if i > 0 && j > 0 {
                let (s, p) = best(prev[j - 1]);
                cell[M] = s + subs[xs[i - 1] * k + ys[j - 1]];
                ptr[M] = p;
            }
            if j > 0 {
                let left = cur[j - 1];
                let (s, p) = best([left[M] - vo, left[V] - ve, left[H] - vo]);
                cell[V] = s;
                ptr[V] = p;
            }
            if i > 0 {
                let (ho, he) = h_cost(j);
                let up = prev[j];
                let (s, p) = best([up[M] - ho, up[V] - ho, up[H] - he]);
                cell[H] = s;
                ptr[H] = p;
            }
            cur[j] = cell;
            trace[i * w + j] = ptr;
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    let (score, mut state) = best(prev[m]);
    let mut steps = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let p = trace[i * w + j][state as usize];
        match state as usize {
            M => {
                steps.push(Step::Diagonal);
                i -= 1;
                j -= 1;
            }
            V => {
                steps.push(Step::Vertical);
                j -= 1;
            }
            _ => {
                steps.push(Step::Horizontal);
                i -= 1;
            }
        }
        state = p;
    }
    steps.reverse();
    PairwiseResult {
        path: AlignmentPath::from_steps(steps),
        score,
    }
}

/// All pairwise alignment paths of `K` sequences, indexed `(i, j)` with
/// sequence `i` on the first axis. The diagonal holds self-alignments and
/// `(j, i)` is always the inverse of `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseTable {
    k: usize,
    paths: Vec<AlignmentPath>,
    scores: Vec<f64>,
}

impl PairwiseTable {
    /// Fills the table from a function producing the `(i, j)` path for `i < j`.
    pub fn from_upper<F>(lengths: &[usize], f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<(AlignmentPath, f64)> + Sync,
    {
        let k = lengths.len();
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        let computed: Vec<(AlignmentPath, f64)> = pairs.par_iter().map(|&(i, j)| f(i, j)).collect::<Result<_>>()?;
        let mut paths: Vec<Option<AlignmentPath>> = vec![None; k * k];
        let mut scores = vec![0.0; k * k];
        for (i, &n) in lengths.iter().enumerate() {
            paths[i * k + i] = Some(AlignmentPath::diagonal(n));
        }
        for ((i, j), (path, score)) in pairs.into_iter().zip(computed) {
            if path.n() != lengths[i] || path.m() != lengths[j] {
                return Err(Error::InconsistentPairwise {
                    i,
                    j,
                    reason: format!(
                        "path spans {}x{}, sequences have lengths {} and {}",
                        path.n(),
                        path.m(),
                        lengths[i],
                        lengths[j]
                    ),
                });
            }
            paths[j * k + i] = Some(path.invert());
            paths[i * k + j] = Some(path);
            scores[i * k + j] = score;
            scores[j * k + i] = score;
        }
        Ok(PairwiseTable {
            k,
            paths: paths.into_iter().map(|p| p.expect("filled")).collect(),
            scores,
        })
    }

    /// Takes a full `K × K` row-major table as given, without checks.
    /// Use [`PairwiseTable::check_consistency`] to validate it.
    pub fn from_full(k: usize, paths: Vec<AlignmentPath>) -> Result<Self> {
        if paths.len() != k * k {
            return Err(Error::InvalidParameter(format!("{} paths for K = {k}", paths.len())));
        }
        Ok(PairwiseTable {
            k,
            paths,
            scores: vec![0.0; k * k],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn path(&self, i: usize, j: usize) -> &AlignmentPath {
        &self.paths[i * self.k + j]
    }

    pub fn score(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.k + j]
    }

    /// Checks axis lengths, diagonal self-alignments and mutual inversion.
    pub fn check_consistency(&self, lengths: &[usize]) -> Result<()> {
        if lengths.len() != self.k {
            return Err(Error::InvalidParameter(format!(
                "{} sequences for a table of K = {}",
                lengths.len(),
                self.k
            )));
        }
        for i in 0..self.k {
            for j in i..self.k {
                let p = self.path(i, j);
                let bad = |reason: String| Error::InconsistentPairwise { i, j, reason };
                p.validate().map_err(|e| bad(e.to_string()))?;
                if p.n() != lengths[i] || p.m() != lengths[j] {
                    return Err(bad(format!(
                        "path spans {}x{}, sequences have lengths {} and {}",
                        p.n(),
                        p.m(),
                        lengths[i],
                        lengths[j]
                    )));
                }
                if i == j {
                    if p.points().iter().any(|&(a, b)| a != b) {
                        return Err(bad("self-alignment is not the diagonal".into()));
                    }
                } else {
                    let q = self.path(j, i).points();
                    if q.len() != p.points().len()
                        || p.points().iter().zip(q).any(|(&(a, b), &(c, d))| a != d || b != c)
                    {
                        return Err(bad("(j, i) is not the inverse of (i, j)".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Aligns every pair `i < j` in parallel.
pub fn align_all(sequences: &[Sequence], scheme: &ScoringScheme) -> Result<PairwiseTable> {
    let encoded: Vec<Vec<usize>> = sequences
        .iter()
        .map(|s| scheme.matrix.encode(s))
        .collect::<Result<_>>()?;
    let lengths: Vec<usize> = sequences.iter().map(Sequence::len).collect();
    PairwiseTable::from_upper(&lengths, |i, j| {
        let r = align_codes(&encoded[i], &encoded[j], scheme);
        Ok((r.path, r.score))
    })
}
