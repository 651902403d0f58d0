//! Reference implementations used as test oracles. They favour obviousness
//! over speed and share no code with the library beyond its data types.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpmsa::{AlignmentPath, Mode, Step};

pub const MATCH: f64 = 5.0;
pub const MISMATCH: f64 = -4.0;
pub const OPEN: f64 = 10.0;
pub const EXTEND: f64 = 0.5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dna(rng: &mut impl Rng, max_len: usize) -> Vec<u8> {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| b"ACGT"[rng.random_range(0..4)]).collect()
}

/// Every step sequence from (0,0) to (n,m).
pub fn all_paths(n: usize, m: usize) -> Vec<Vec<Step>> {
    fn go(i: usize, j: usize, n: usize, m: usize, cur: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        if i == n && j == m {
            out.push(cur.clone());
            return;
        }
        for (s, di, dj) in [(Step::Diagonal, 1, 1), (Step::Horizontal, 1, 0), (Step::Vertical, 0, 1)] {
            if i + di <= n && j + dj <= m {
                cur.push(s);
                go(i + di, j + dj, n, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, 0, n, m, &mut Vec::new(), &mut out);
    out
}

/// DNA score of an alignment given as steps: substitutions plus
/// `open + len * extend` for every maximal run of one gap kind. In overlap
/// mode, runs lying before the first or after the last residue of the other
/// sequence are free.
pub fn score_steps(x: &[u8], y: &[u8], steps: &[Step], mode: Mode) -> f64 {
    let mut total = 0.0;
    let (mut i, mut j) = (0, 0);
    let mut k = 0;
    while k < steps.len() {
        match steps[k] {
            Step::Diagonal => {
                total += if x[i] == y[j] { MATCH } else { MISMATCH };
                i += 1;
                j += 1;
                k += 1;
            }
            kind => {
                let start = k;
                while k < steps.len() && steps[k] == kind {
                    k += 1;
                }
                let len = k - start;
                // the other sequence sits at the same index for the whole run
                let terminal = match kind {
                    Step::Horizontal => j == 0 || j == y.len(),
                    _ => i == 0 || i == x.len(),
                };
                if !(mode == Mode::Overlap && terminal) {
                    total -= OPEN + len as f64 * EXTEND;
                }
                match kind {
                    Step::Horizontal => i += len,
                    _ => j += len,
                }
            }
        }
    }
    total
}

/// Best score over every alignment.
pub fn brute_force_optimum(x: &[u8], y: &[u8], mode: Mode) -> f64 {
    all_paths(x.len(), y.len())
        .iter()
        .map(|s| score_steps(x, y, s, mode))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Checks the path conditions directly on the point list.
pub fn is_valid_path(points: &[(usize, usize)], n: usize, m: usize) -> bool {
    points.first() == Some(&(0, 0))
        && points.last() == Some(&(n, m))
        && points.windows(2).all(|w| {
            matches!(
                (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1)),
                (1, 0) | (0, 1) | (1, 1)
            )
        })
}

/// Random step sequence to (n, m), one random move at a time.
pub fn random_path(rng: &mut impl Rng, n: usize, m: usize) -> AlignmentPath {
    let (mut i, mut j) = (0, 0);
    let mut steps = Vec::new();
    while i < n || j < m {
        let s = match (i < n, j < m) {
            (true, true) => [Step::Diagonal, Step::Horizontal, Step::Vertical][rng.random_range(0..3)],
            (true, false) => Step::Horizontal,
            _ => Step::Vertical,
        };
        let (di, dj) = s.delta();
        i += di;
        j += dj;
        steps.push(s);
    }
    AlignmentPath::from_steps(steps)
}

/// Transcribes two gapped rows column by column into points.
pub fn transcribe(row_x: &[u8], row_y: &[u8]) -> Vec<(usize, usize)> {
    let mut pts = vec![(0, 0)];
    let (mut i, mut j) = (0, 0);
    for (&a, &b) in row_x.iter().zip(row_y) {
        if a == b'-' && b == b'-' {
            continue;
        }
        i += usize::from(a != b'-');
        j += usize::from(b != b'-');
        pts.push((i, j));
    }
    pts
}

pub fn median_of(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
