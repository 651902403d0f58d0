//! Sum-of-pairs (SP) and total-column (TC) agreement with a reference MSA.
//!
//! Residues are identified by `(sequence, position)`, never by character.
//! Rows are matched between the two alignments by id. TC is taken over the
//! aligned reference columns, those holding at least two residues: a column
//! with a single residue (or none) makes no homology statement. The counts over
//! every non-empty reference column are kept as well.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::seqio::{Msa, GAP};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreReport {
    pub sp: f64,
    pub tc: f64,
    pub aligned_pairs_ref: u64,
    pub aligned_pairs_correct: u64,
    /// Reference columns with at least two residues.
    pub columns_ref: u64,
    pub columns_correct: u64,
    /// Reference columns with at least one residue.
    pub columns_ref_all: u64,
    pub columns_correct_all: u64,
}

impl ScoreReport {
    /// TC with single-residue columns counted too.
    pub fn tc_all_columns(&self) -> f64 {
        ratio(self.columns_correct_all, self.columns_ref_all)
    }
}

/// `sp  tc  aligned_pairs_ref  aligned_pairs_correct  columns_ref  columns_correct`
impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.6}\t{:.6}\t{}\t{}\t{}\t{}",
            self.sp,
            self.tc,
            self.aligned_pairs_ref,
            self.aligned_pairs_correct,
            self.columns_ref,
            self.columns_correct
        )
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// For each reference row, the index of the same sequence in `test`.
fn match_rows(test: &Msa, reference: &Msa) -> Result<Vec<usize>> {
    if test.num_rows() != reference.num_rows() {
        return Err(Error::SequenceMismatch(format!(
            "{} test rows vs {} reference rows",
            test.num_rows(),
            reference.num_rows()
        )));
    }
    let mut by_id: HashMap<&str, usize> = HashMap::with_capacity(test.num_rows());
    for (t, id) in test.ids().iter().enumerate() {
        if by_id.insert(id.as_str(), t).is_some() {
            return Err(Error::SequenceMismatch(format!(
                "duplicate id '{id}' in test alignment"
            )));
        }
    }
    let mut seen = vec![false; test.num_rows()];
    let mut map = Vec::with_capacity(reference.num_rows());
    for (r, id) in reference.ids().iter().enumerate() {
        let &t = by_id
            .get(id.as_str())
            .ok_or_else(|| Error::SequenceMismatch(format!("'{id}' missing from test alignment")))?;
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::SequenceMismatch(format!(
                "duplicate id '{id}' in reference alignment"
            )));
        }
        if test.ungapped(t) != reference.ungapped(r) {
            return Err(Error::SequenceMismatch(format!("residues of '{id}' differ")));
        }
        map.push(t);
    }
    Ok(map)
}

/// Column index of every residue of every row: `out[row][pos]`.
fn residue_columns(msa: &Msa) -> Vec<Vec<usize>> {
    msa.rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b != GAP)
                .map(|(c, _)| c)
                .collect()
        })
        .collect()
}

/// Computes both scores and their counters.
pub fn score(test: &Msa, reference: &Msa) -> Result<ScoreReport> {
    let map = match_rows(test, reference)?;
    let test_cols = residue_columns(test);
    // residues per test column
    let mut test_occupancy = vec![0u64; test.width()];
    for cols in &test_cols {
        for &c in cols {
            test_occupancy[c] += 1;
        }
    }

    let k = reference.num_rows();
    let mut pos = vec![0usize; k];
    let mut report = ScoreReport {
        sp: 0.0,
        tc: 0.0,
        aligned_pairs_ref: 0,
        aligned_pairs_correct: 0,
        columns_ref: 0,
        columns_correct: 0,
        columns_ref_all: 0,
        columns_correct_all: 0,
    };
    // (reference row, test column) of the residues in the current column
    let mut column: Vec<usize> = Vec::with_capacity(k);
    for c in 0..reference.width() {
        column.clear();
        for r in 0..k {
            if reference.row(r)[c] != GAP {
                column.push(test_cols[map[r]][pos[r]]);
                pos[r] += 1;
            }
        }
        if column.is_empty() {
            continue;
        }
        let size = column.len() as u64;
        report.aligned_pairs_ref += size * (size - 1) / 2;
        // pairs sharing a test column
        let mut sorted = column.clone();
        sorted.sort_unstable();
        let mut run = 1u64;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                report.aligned_pairs_correct += run * (run - 1) / 2;
                run = 1;
            }
        }
        report.aligned_pairs_correct += run * (run - 1) / 2;

        let target = column[0];
        let correct = u64::from(column.iter().all(|&tc| tc == target) && test_occupancy[target] == size);
        report.columns_ref_all += 1;
        report.columns_correct_all += correct;
        if size >= 2 {
            report.columns_ref += 1;
            report.columns_correct += correct;
        }
    }
    report.sp = ratio(report.aligned_pairs_correct, report.aligned_pairs_ref);
    report.tc = ratio(report.columns_correct, report.columns_ref);
    Ok(report)
}

pub fn sp_score(test: &Msa, reference: &Msa) -> Result<f64> {
    score(test, reference).map(|r| r.sp)
}

pub fn tc_score(test: &Msa, reference: &Msa) -> Result<f64> {
    score(test, reference).map(|r| r.tc)
}
