//! Integer medians and the per-sequence median warping path.
//!
//! For sequence `i`, every pairwise path `(i, j)` (including the diagonal
//! self-alignment) brackets each residue `u` between the points `(u-1, v1)`
//! and `(u, v2)`. Taking the median of `v1` and of `v2` over all `j` gives two
//! median points per residue; chaining them, with vertical steps wherever
//! consecutive medians leave a hole, yields a path from `(0, 0)` to
//! `(n_i, N̂)` that aligns sequence `i` to the estimated ancestor.

use crate::error::{Error, Result};
use crate::path::{AlignmentPath, Step};

/// Integer median of a nonempty slice. Odd counts return the middle order
/// statistic; even counts return the floor of the mean of the two middle ones.
pub fn integer_median(values: &[usize]) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::EmptyInput("median of an empty list"));
    }
    let mut scratch = values.to_vec();
    Ok(median_in_place(&mut scratch))
}

/// Expected linear-time selection; reorders `values`.
pub(crate) fn median_in_place(values: &mut [usize]) -> usize {
    let k = values.len();
    let (left, &mut hi, _) = values.select_nth_unstable(k / 2);
    if k % 2 == 1 {
        hi
    } else {
        let lo = *left.iter().max().expect("even count has a left half");
        (lo + hi) / 2
    }
}

/// Estimated ancestor length: the integer median of the sequence lengths.
pub fn estimate_n_hat(lengths: &[usize]) -> Result<usize> {
    integer_median(lengths)
}

/// Positive per-sequence weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

const WEIGHT_TOL: f64 = 1e-9;

impl Weights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyInput("weights"));
        }
        if w.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::InvalidParameter("weights must lie in (0, 1]".into()));
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Weights(w))
    }

    pub fn uniform(k: usize) -> Self {
        Weights(vec![1.0 / k as f64; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Weights decreasing linearly with distance to the root:
/// `w_i ∝ 1 - d_i / (d_max + epsilon)`.
pub fn compute_weights(distances: &[f64], epsilon: f64) -> Result<Weights> {
    if distances.is_empty() {
        return Err(Error::EmptyInput("distances"));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if let Some((index, &value)) = distances.iter().enumerate().find(|(_, d)| !d.is_finite() || **d < 0.0) {
        return Err(Error::NegativeDistance { index, value });
    }
    let d_max = distances.iter().copied().fold(0.0, f64::max);
    let raw: Vec<f64> = distances.iter().map(|d| 1.0 - d / (d_max + epsilon)).collect();
    let total: f64 = raw.iter().sum();
    Ok(Weights(raw.into_iter().map(|r| r / total).collect()))
}

/// Weighted integer median: the floor of the midpoint between the smallest
/// value whose cumulative weight reaches 1/2 and the smallest value whose
/// cumulative weight exceeds 1/2. These coincide unless the cumulative weight
/// lands exactly on 1/2, which with uniform weights reproduces
/// [`integer_median`].
pub fn weighted_integer_median(values: &[usize], weights: &Weights) -> Result<usize> {
    if values.len() != weights.len() {
        return Err(Error::CountMismatch(values.len(), weights.len()));
    }
    if values.is_empty() {
        return Err(Error::EmptyInput("median of an empty list"));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    Ok(weighted_median_with(values, weights.as_slice(), &mut order))
}

pub(crate) fn weighted_median_with(values: &[usize], weights: &[f64], order: &mut [usize]) -> usize {
    order.sort_unstable_by_key(|&j| values[j]);
    let mut cum = 0.0;
    let mut lower = None;
    let mut t = 0;
    while t < order.len() {
        let v = values[order[t]];
        while t < order.len() && values[order[t]] == v {
            cum += weights[order[t]];
            t += 1;
        }
        if lower.is_none() && cum >= 0.5 - WEIGHT_TOL {
            lower = Some(v);
        }
        if cum > 0.5 + WEIGHT_TOL {
            return (lower.unwrap_or(v) + v) / 2;
        }
    }
    // rounding left the total at 1/2 within tolerance
    let last = values[order[order.len() - 1]];
    (lower.unwrap_or(last) + last) / 2
}

/// Per-residue median coordinates of one sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MedianCoords {
    /// Median `v1` per residue (second coordinate of the first median point).
    pub start: Vec<usize>,
    /// Median `v2` per residue.
    pub end: Vec<usize>,
    /// Coordinates clamped down to `N̂`.
    pub clamped: usize,
}

pub(crate) fn median_coords(
    paths: &[&AlignmentPath],
    n_i: usize,
    n_hat: usize,
    weights: Option<&Weights>,
) -> MedianCoords {
    let k = paths.len();
    let mut v1 = vec![0usize; n_i * k];
    let mut v2 = vec![0usize; n_i * k];
    for (j, p) in paths.iter().enumerate() {
        for w in p.points().windows(2) {
            if w[1].0 == w[0].0 + 1 {
                let u = w[0].0;
                v1[u * k + j] = w[0].1;
                v2[u * k + j] = w[1].1;
            }
        }
    }
    let mut out = MedianCoords {
        start: Vec::with_capacity(n_i),
        end: Vec::with_capacity(n_i),
        clamped: 0,
    };
    let mut order: Vec<usize> = (0..k).collect();
    for u in 0..n_i {
        let (a, b) = match weights {
            None => (
                median_in_place(&mut v1[u * k..(u + 1) * k]),
                median_in_place(&mut v2[u * k..(u + 1) * k]),
            ),
            Some(w) => (
                weighted_median_with(&v1[u * k..(u + 1) * k], w.as_slice(), &mut order),
                weighted_median_with(&v2[u * k..(u + 1) * k], w.as_slice(), &mut order),
            ),
        };
        if a > n_hat {
            out.clamped += 1;
        }
        if b > n_hat {
            out.clamped += 1;
        }
        out.start.push(a.min(n_hat));
        out.end.push(b.min(n_hat));
    }
    out
}

/// Chains the median points into a lattice path ending at `(n_i, n_hat)`.
/// Returns the path and the number of trailing vertical steps added.
pub(crate) fn assemble(coords: &MedianCoords, n_hat: usize) -> (AlignmentPath, usize) {
    let mut steps = Vec::with_capacity(coords.start.len() + n_hat);
    let mut y = 0;
    for (&a, &b) in coords.start.iter().zip(&coords.end) {
        debug_assert!(a >= y && (b == a || b == a + 1), "medians are monotone");
        steps.extend(std::iter::repeat_n(Step::Vertical, a - y));
        steps.push(if b > a { Step::Diagonal } else { Step::Horizontal });
        y = b;
    }
    let padding = n_hat - y;
    steps.extend(std::iter::repeat_n(Step::Vertical, padding));
    (AlignmentPath::from_steps(steps), padding)
}

fn check_paths(i: usize, paths: &[&AlignmentPath]) -> Result<usize> {
    let own = paths.get(i).ok_or(Error::OutOfRange {
        what: "sequence index",
        index: i + 1,
        max: paths.len(),
    })?;
    let n_i = own.n();
    if own.m() != n_i || own.points().iter().any(|&(a, b)| a != b) {
        return Err(Error::InconsistentPairwise {
            i,
            j: i,
            reason: "missing diagonal self-alignment".into(),
        });
    }
    for (j, p) in paths.iter().enumerate() {
        p.validate()?;
        if p.n() != n_i {
            return Err(Error::InconsistentPairwise {
                i,
                j,
                reason: format!("first axis has length {}, expected {n_i}", p.n()),
            });
        }
    }
    Ok(n_i)
}

/// Median path of sequence `i` given its alignments to all `K` sequences
/// (`paths_to_i[j]` has sequence `i` on the first axis; entry `i` must be the
/// diagonal). Medians above `n_hat` are clamped to it.
pub fn median_path(
    i: usize,
    paths_to_i: &[AlignmentPath],
    n_hat: usize,
    weights: Option<&Weights>,
) -> Result<AlignmentPath> {
    let refs: Vec<&AlignmentPath> = paths_to_i.iter().collect();
    if let Some(w) = weights {
        if w.len() != refs.len() {
            return Err(Error::CountMismatch(refs.len(), w.len()));
        }
    }
    let n_i = check_paths(i, &refs)?;
    let coords = median_coords(&refs, n_i, n_hat, weights);
    Ok(assemble(&coords, n_hat).0)
}
