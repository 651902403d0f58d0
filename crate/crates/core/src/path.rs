//! Pairwise alignments as monotone lattice paths.
//!
//! A path over the `n × m` grid starts at `(0, 0)`, ends at `(n, m)` and moves
//! by one of three unit steps. Coordinate `0` on either axis stands for the
//! artificial character preceding the first residue, so a residue aligned to a
//! gap is associated with the last residue of the other sequence that came
//! before it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::seqio::GAP;

pub type Point = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `(1, 0)`: residue of the first sequence against a gap.
    Horizontal,
    /// `(0, 1)`: gap against a residue of the second sequence.
    Vertical,
    /// `(1, 1)`: match or mismatch.
    Diagonal,
}

impl Step {
    pub fn delta(self) -> Point {
        match self {
            Step::Horizontal => (1, 0),
            Step::Vertical => (0, 1),
            Step::Diagonal => (1, 1),
        }
    }

    fn between(a: Point, b: Point) -> Option<Step> {
        match (b.0.checked_sub(a.0)?, b.1.checked_sub(a.1)?) {
            (1, 0) => Some(Step::Horizontal),
            (0, 1) => Some(Step::Vertical),
            (1, 1) => Some(Step::Diagonal),
            _ => None,
        }
    }
}

/// The pair `(v1, v2)` bracketing position `u` of the first sequence: the
/// path contains the consecutive points `(u-1, v1)` and `(u, v2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepCoords {
    pub u: usize,
    pub v1: usize,
    pub v2: usize,
}

impl StepCoords {
    /// True when residue `u` is matched (`v2 = v1 + 1`) rather than gapped.
    pub fn is_match(&self) -> bool {
        self.v2 > self.v1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignmentPath {
    points: Vec<Point>,
}

impl AlignmentPath {
    /// Validates and wraps an explicit point list.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let path = AlignmentPath { points };
        path.validate()?;
        Ok(path)
    }

    pub fn from_steps(steps: impl IntoIterator<Item = Step>) -> Self {
        let mut points = vec![(0, 0)];
        let mut cur = (0, 0);
        for s in steps {
            let (dx, dy) = s.delta();
            cur = (cur.0 + dx, cur.1 + dy);
            points.push(cur);
        }
        AlignmentPath { points }
    }

    /// The identity warping on `0..=n`.
    pub fn diagonal(n: usize) -> Self {
        AlignmentPath {
            points: (0..=n).map(|k| (k, k)).collect(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Length of the first sequence.
    pub fn n(&self) -> usize {
        self.points.last().map_or(0, |p| p.0)
    }

    /// Length of the second sequence.
    pub fn m(&self) -> usize {
        self.points.last().map_or(0, |p| p.1)
    }

    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.points
            .windows(2)
            .map(|w| Step::between(w[0], w[1]).expect("validated path"))
    }

    pub fn validate(&self) -> Result<()> {
        match self.points.first() {
            None => return Err(Error::InvalidPath("no points".into())),
            Some(&p) if p != (0, 0) => {
                return Err(Error::InvalidPath(format!("starts at {p:?}, not (0, 0)")));
            }
            _ => {}
        }
        for (t, w) in self.points.windows(2).enumerate() {
            if Step::between(w[0], w[1]).is_none() {
                return Err(Error::InvalidPath(format!(
                    "step {} from {:?} to {:?} is not a unit step",
                    t + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(())
    }

    /// Mirror across the diagonal: the path of the swapped pair.
    pub fn invert(&self) -> AlignmentPath {
        AlignmentPath {
            points: self.points.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    pub fn step_coords(&self, u: usize) -> Result<StepCoords> {
        if u == 0 || u > self.n() {
            return Err(Error::OutOfRange {
                what: "position",
                index: u,
                max: self.n(),
            });
        }
        let t = self
            .points
            .windows(2)
            .position(|w| w[0].0 == u - 1 && w[1].0 == u)
            .expect("every column of a valid path is crossed once");
        Ok(StepCoords {
            u,
            v1: self.points[t].1,
            v2: self.points[t + 1].1,
        })
    }

    /// `step_coords` for every `u` in `1..=n`, in one pass.
    pub fn all_step_coords(&self) -> Vec<StepCoords> {
        let mut out = Vec::with_capacity(self.n());
        for w in self.points.windows(2) {
            if w[1].0 == w[0].0 + 1 {
                out.push(StepCoords {
                    u: w[1].0,
                    v1: w[0].1,
                    v2: w[1].1,
                });
            }
        }
        out
    }

    /// Replaces each horizontal/vertical (or vertical/horizontal) pair of
    /// consecutive steps with a diagonal step, scanning left to right.
    pub fn normalize_no_adjacent_indels(&self) -> AlignmentPath {
        let mut out: Vec<Step> = Vec::with_capacity(self.points.len());
        for s in self.steps() {
            match (out.last(), s) {
                (Some(Step::Horizontal), Step::Vertical) | (Some(Step::Vertical), Step::Horizontal) => {
                    *out.last_mut().unwrap() = Step::Diagonal;
                }
                _ => out.push(s),
            }
        }
        AlignmentPath::from_steps(out)
    }

    /// Renders the path as two gapped rows over the given residues.
    pub fn to_alignment(&self, x: &[u8], y: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
        if x.len() != self.n() || y.len() != self.m() {
            return Err(Error::InvalidPath(format!(
                "path spans {}x{} but sequences have lengths {} and {}",
                self.n(),
                self.m(),
                x.len(),
                y.len()
            )));
        }
        let mut rx = Vec::with_capacity(self.points.len());
        let mut ry = Vec::with_capacity(self.points.len());
        for (w, s) in self.points.windows(2).zip(self.steps()) {
            let (a, b) = w[0];
            let (cx, cy) = match s {
                Step::Horizontal => (x[a], GAP),
                Step::Vertical => (GAP, y[b]),
                Step::Diagonal => (x[a], y[b]),
            };
            rx.push(cx);
            ry.push(cy);
        }
        Ok((rx, ry))
    }
}

/// Transcribes a two-row alignment into its path, one step per column.
pub fn path_from_alignment(row_x: &[u8], row_y: &[u8]) -> Result<AlignmentPath> {
    if row_x.len() != row_y.len() {
        return Err(Error::UnequalRows(row_x.len(), row_y.len()));
    }
    let mut steps = Vec::with_capacity(row_x.len());
    for (col, (&a, &b)) in row_x.iter().zip(row_y).enumerate() {
        steps.push(match (a == GAP, b == GAP) {
            (false, false) => Step::Diagonal,
            (false, true) => Step::Horizontal,
            (true, false) => Step::Vertical,
            (true, true) => return Err(Error::GapGapColumn(col + 1)),
        });
    }
    Ok(AlignmentPath::from_steps(steps))
}

/// One `a,b` pair per line.
impl fmt::Display for AlignmentPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(a, b) in &self.points {
            writeln!(f, "{a},{b}")?;
        }
        Ok(())
    }
}

impl FromStr for AlignmentPath {
    type Err = Error;

    /// Accepts whitespace-separated `a,b` pairs.
    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .split_whitespace()
            .map(|tok| {
                let (a, b) = tok
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidPath(format!("bad point '{tok}'")))?;
                let parse = |v: &str| {
                    v.parse::<usize>()
                        .map_err(|_| Error::InvalidPath(format!("bad point '{tok}'")))
                };
                Ok((parse(a)?, parse(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        AlignmentPath::new(points)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn arb_path(max_n: usize, max_m: usize) -> impl Strategy<Value = AlignmentPath> {
        proptest::collection::vec(0u8..3, 0..(max_n + max_m)).prop_map(move |raw| {
            let (mut x, mut y) = (0, 0);
            let mut steps = Vec::new();
            for r in raw {
                let s = match r {
                    0 => Step::Horizontal,
                    1 => Step::Vertical,
                    _ => Step::Diagonal,
                };
                let (dx, dy) = s.delta();
                if x + dx <= max_n && y + dy <= max_m {
                    x += dx;
                    y += dy;
                    steps.push(s);
                }
            }
            AlignmentPath::from_steps(steps)
        })
    }

    fn worked_example() -> AlignmentPath {
        path_from_alignment(b"ACAGTA-GT", b"-CT-TAAG-").unwrap()
    }

    #[test]
    fn worked_example_points() {
        assert_eq!(
            worked_example().points(),
            &[
                (0, 0),
                (1, 0),
                (2, 1),
                (3, 2),
                (4, 2),
                (5, 3),
                (6, 4),
                (6, 5),
                (7, 6),
                (8, 6)
            ]
        );
    }

    #[test]
    fn diagonal_and_single_indels() {
        assert_eq!(
            path_from_alignment(b"AC", b"AC").unwrap().points(),
            &[(0, 0), (1, 1), (2, 2)]
        );
        assert_eq!(
            path_from_alignment(b"A-", b"-A").unwrap().points(),
            &[(0, 0), (1, 0), (1, 1)]
        );
    }

    #[test]
    fn alignment_errors() {
        assert_eq!(path_from_alignment(b"AC", b"A").unwrap_err(), Error::UnequalRows(2, 1));
        assert_eq!(path_from_alignment(b"A-C", b"A-C").unwrap_err(), Error::GapGapColumn(2));
    }

    #[test]
    fn inverse_of_worked_example() {
        assert_eq!(
            worked_example().invert().points(),
            &[
                (0, 0),
                (0, 1),
                (1, 2),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 6),
                (5, 6),
                (6, 7),
                (6, 8)
            ]
        );
        let d = AlignmentPath::diagonal(5);
        assert_eq!(d.invert(), d);
    }

    #[test]
    fn step_coords_of_worked_example() {
        let p = worked_example();
        assert_eq!(p.step_coords(1).unwrap(), StepCoords { u: 1, v1: 0, v2: 0 });
        assert_eq!(p.step_coords(7).unwrap(), StepCoords { u: 7, v1: 5, v2: 6 });
        // X_u -> Y_v associations
        let assoc: Vec<usize> = p.all_step_coords().iter().map(|s| s.v2).collect();
        assert_eq!(assoc, vec![0, 1, 2, 2, 3, 4, 6, 6]);
        assert!(p.step_coords(0).is_err());
        assert!(p.step_coords(9).is_err());
        let d = AlignmentPath::diagonal(4);
        for u in 1..=4 {
            assert_eq!(d.step_coords(u).unwrap(), StepCoords { u, v1: u - 1, v2: u });
        }
    }

    #[test]
    fn validation() {
        assert!(AlignmentPath::new(vec![]).is_err());
        assert!(AlignmentPath::new(vec![(1, 0)]).is_err());
        assert!(AlignmentPath::new(vec![(0, 0), (2, 1)]).is_err());
        assert!(AlignmentPath::new(vec![(0, 0), (1, 1), (1, 0)]).is_err());
        assert!(AlignmentPath::new(vec![(0, 0)]).is_ok());
    }

    #[test]
    fn normalization_examples() {
        let p = AlignmentPath::new(vec![(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(p.normalize_no_adjacent_indels().points(), &[(0, 0), (1, 1)]);
        let d = AlignmentPath::diagonal(3);
        assert_eq!(d.normalize_no_adjacent_indels(), d);
        // vertical, horizontal, horizontal: only the leading pair merges
        let p = AlignmentPath::new(vec![(0, 0), (0, 1), (1, 1), (2, 1)]).unwrap();
        assert_eq!(p.normalize_no_adjacent_indels().points(), &[(0, 0), (1, 1), (2, 1)]);
    }

    fn all_paths(n: usize, m: usize) -> Vec<Vec<Step>> {
        if n == 0 && m == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for s in [Step::Horizontal, Step::Vertical, Step::Diagonal] {
            let (dx, dy) = s.delta();
            if dx <= n && dy <= m {
                for mut rest in all_paths(n - dx, m - dy) {
                    rest.insert(0, s);
                    out.push(rest);
                }
            }
        }
        out
    }

    /// Rewrites the leftmost "HV"/"VH" into "D" until none remain.
    fn rewrite_oracle(steps: &[Step]) -> String {
        let mut s: String = steps
            .iter()
            .map(|s| match s {
                Step::Horizontal => 'H',
                Step::Vertical => 'V',
                Step::Diagonal => 'D',
            })
            .collect();
        loop {
            let hv = s.find("HV");
            let vh = s.find("VH");
            let at = match (hv, vh) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => return s,
            };
            s.replace_range(at..at + 2, "D");
        }
    }

    #[test]
    fn normalization_matches_rewriter_exhaustively() {
        for n in 0..=3 {
            for m in 0..=3 {
                for steps in all_paths(n, m) {
                    let p = AlignmentPath::from_steps(steps.clone());
                    let q = p.normalize_no_adjacent_indels();
                    let got: String = q
                        .steps()
                        .map(|s| match s {
                            Step::Horizontal => 'H',
                            Step::Vertical => 'V',
                            Step::Diagonal => 'D',
                        })
                        .collect();
                    assert_eq!(got, rewrite_oracle(&steps), "{steps:?}");
                    assert_eq!((q.n(), q.m()), (n, m));
                    assert!(!got.contains("HV") && !got.contains("VH"));
                }
            }
        }
    }

    #[test]
    fn display_round_trip() {
        let p = worked_example();
        let text = p.to_string();
        assert!(text.starts_with("0,0\n1,0\n2,1\n"));
        assert_eq!(text.parse::<AlignmentPath>().unwrap(), p);
        assert!("0,0 2,2".parse::<AlignmentPath>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn invert_is_an_involution(p in arb_path(30, 30)) {
            prop_assert!(p.validate().is_ok());
            let q = p.invert();
            prop_assert!(q.validate().is_ok());
            prop_assert_eq!((q.n(), q.m()), (p.m(), p.n()));
            prop_assert_eq!(q.invert(), p);
        }

        #[test]
        fn step_coords_consistent(p in arb_path(20, 20)) {
            let all = p.all_step_coords();
            prop_assert_eq!(all.len(), p.n());
            for sc in &all {
                prop_assert_eq!(p.step_coords(sc.u).unwrap(), *sc);
                prop_assert!(sc.v2 == sc.v1 || sc.v2 == sc.v1 + 1);
            }
            // on the inverse, horizontal steps of p are exactly the gapped positions
            let gaps_in_q = p.invert().all_step_coords().iter().filter(|s| !s.is_match()).count();
            prop_assert_eq!(gaps_in_q, p.steps().filter(|s| *s == Step::Vertical).count());
        }

        #[test]
        fn alignment_round_trip(p in arb_path(20, 20)) {
            let x = vec![b'A'; p.n()];
            let y = vec![b'C'; p.m()];
            let (rx, ry) = p.to_alignment(&x, &y).unwrap();
            prop_assert_eq!(path_from_alignment(&rx, &ry).unwrap(), p);
        }
    }
}
