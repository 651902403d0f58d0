mod common;

use common::*;
use warpmsa::{align_pair, Alphabet, Mode, ScoringScheme, Sequence};

fn seq(s: &[u8]) -> Sequence {
    Sequence::new("s", s, Alphabet::Dna).unwrap()
}

#[test]
fn returned_path_scores_what_is_reported() {
    let mut r = rng(5);
    for mode in [Mode::Global, Mode::Overlap] {
        let scheme = ScoringScheme::dna_default().with_mode(mode);
        for _ in 0..250 {
            let (x, y) = (random_dna(&mut r, 8), random_dna(&mut r, 8));
            let res = align_pair(&seq(&x), &seq(&y), &scheme).unwrap();
            let steps: Vec<_> = res.path.steps().collect();
            assert!(is_valid_path(res.path.points(), x.len(), y.len()));
            assert_eq!(score_steps(&x, &y, &steps, mode), res.score, "{mode} {x:?} {y:?}");
            assert_eq!(res.score, brute_force_optimum(&x, &y, mode));
        }
    }
}

#[test]
fn overlap_never_scores_below_global() {
    let mut r = rng(6);
    for _ in 0..200 {
        let (x, y) = (random_dna(&mut r, 30), random_dna(&mut r, 30));
        let g = align_pair(&seq(&x), &seq(&y), &ScoringScheme::dna_default()).unwrap();
        let o = align_pair(
            &seq(&x),
            &seq(&y),
            &ScoringScheme::dna_default().with_mode(Mode::Overlap),
        )
        .unwrap();
        assert!(o.score >= g.score);
    }
}

#[test]
fn overhangs_are_free_in_overlap_mode() {
    let core = b"ACGTTGCA";
    let x: Vec<u8> = [b"TTTTTTTTTT".as_slice(), core].concat();
    let y: Vec<u8> = [core.as_slice(), b"GGGGGGGGGGGG"].concat();
    let o = align_pair(
        &seq(&x),
        &seq(&y),
        &ScoringScheme::dna_default().with_mode(Mode::Overlap),
    )
    .unwrap();
    assert_eq!(o.score, 5.0 * core.len() as f64);
    let g = align_pair(&seq(&x), &seq(&y), &ScoringScheme::dna_default()).unwrap();
    assert!(g.score < o.score);
}

#[test]
fn swapping_arguments_keeps_the_score() {
    let mut r = rng(7);
    for mode in [Mode::Global, Mode::Overlap] {
        let scheme = ScoringScheme::dna_default().with_mode(mode);
        for _ in 0..200 {
            let (x, y) = (random_dna(&mut r, 25), random_dna(&mut r, 25));
            let a = align_pair(&seq(&x), &seq(&y), &scheme).unwrap();
            let b = align_pair(&seq(&y), &seq(&x), &scheme).unwrap();
            assert_eq!(a.score, b.score);
        }
    }
}

#[test]
fn unique_optimum_is_symmetric() {
    let mut r = rng(8);
    let mut checked = 0;
    for mode in [Mode::Global, Mode::Overlap] {
        let scheme = ScoringScheme::dna_default().with_mode(mode);
        for _ in 0..300 {
            let (x, y) = (random_dna(&mut r, 6), random_dna(&mut r, 6));
            let best = brute_force_optimum(&x, &y, mode);
            let optima = all_paths(x.len(), y.len())
                .iter()
                .filter(|s| score_steps(&x, &y, s, mode) == best)
                .count();
            if optima != 1 {
                continue;
            }
            checked += 1;
            let a = align_pair(&seq(&x), &seq(&y), &scheme).unwrap();
            let b = align_pair(&seq(&y), &seq(&x), &scheme).unwrap();
            let flipped: Vec<(usize, usize)> = b.path.points().iter().map(|&(p, q)| (q, p)).collect();
            assert_eq!(a.path.points(), flipped.as_slice(), "{mode} {x:?} {y:?}");
        }
    }
    assert!(checked > 50, "only {checked} instances had a unique optimum");
}

#[test]
fn runtime_grows_with_the_grid_area() {
    use std::time::Instant;
    let scheme = ScoringScheme::dna_default();
    let mut r = rng(9);
    let mut time = |n: usize| {
        let x: Vec<u8> = (0..n).map(|_| b"ACGT"[rand::Rng::random_range(&mut r, 0..4)]).collect();
        let y: Vec<u8> = (0..n).map(|_| b"ACGT"[rand::Rng::random_range(&mut r, 0..4)]).collect();
        let (x, y) = (seq(&x), seq(&y));
        let mut runs: Vec<f64> = (0..5)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(align_pair(&x, &y, &scheme).unwrap());
                t.elapsed().as_secs_f64()
            })
            .collect();
        median_of(&mut runs)
    };
    let small = time(400);
    let large = time(800);
    // doubling both lengths quadruples the cells
    let ratio = large / small;
    assert!((2.0..8.0).contains(&ratio), "ratio {ratio:.2}");
}
