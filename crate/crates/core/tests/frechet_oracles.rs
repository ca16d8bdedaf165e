mod common;

use common::{book_brute_force, book_frechet_value, commuting_family, rng};
use hadamard::space::variance_gap;
use hadamard::{
    lim_palfia, BookPoint, Euclidean, FrechetOracle, OpenBook, SpdSpace, Weights,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_weights(n: usize, r: &mut ChaCha8Rng) -> Weights {
    let raw: Vec<f64> = (0..n).map(|_| r.random_range(0.1..1.0)).collect();
    let s: f64 = raw.iter().sum();
    Weights::new(raw.iter().map(|w| w / s).collect()).unwrap()
}

#[test]
fn book_folding_matches_brute_force() {
    let mut r = rng(31);
    for case in 0..200 {
        let sheets = 2 + case % 3;
        let spine_dim = case % 2;
        let book = OpenBook::new(sheets, spine_dim).unwrap();
        let n = r.random_range(1..=6);
        let pts: Vec<BookPoint> = (0..n).map(|_| book.random_point(&mut r)).collect();
        let w = if case % 2 == 0 { Weights::uniform(n).unwrap() } else { random_weights(n, &mut r) };
        let m = book.frechet_oracle(&pts, &w).unwrap();
        let exact = book_frechet_value(&pts, w.as_slice(), &m);
        let grid = book_brute_force(&pts, w.as_slice(), sheets, spine_dim);
        assert!(exact <= grid + 1e-6, "case {case}: folding {exact} grid {grid}");
    }
}

#[test]
fn symmetric_three_sheet_configurations_sit_on_the_spine() {
    let book = OpenBook::new(3, 1).unwrap();
    for t in [0.1, 1.0, 2.5] {
        let pts: Vec<BookPoint> = (1..=3).map(|j| BookPoint::new(j, t, vec![0.5]).unwrap()).collect();
        let m = book.frechet_oracle(&pts, &Weights::uniform(3).unwrap()).unwrap();
        assert!(m.on_spine() && m.t == 0.0);
        assert_eq!(m.spine, vec![0.5]);
    }
}

#[test]
fn perturbed_symmetric_configuration_sticks() {
    // folded mean on the pushed sheet is (t + δ - 2t)/3 < 0 while δ < t
    let book = OpenBook::new(3, 0).unwrap();
    let t = 1.0;
    for delta in [1e-6, 0.1, 0.5, 0.99] {
        let pts = vec![
            BookPoint::new(1, t + delta, vec![]).unwrap(),
            BookPoint::new(2, t, vec![]).unwrap(),
            BookPoint::new(3, t, vec![]).unwrap(),
        ];
        let m = book.frechet_oracle(&pts, &Weights::uniform(3).unwrap()).unwrap();
        assert!(m.on_spine(), "delta {delta}");
    }
    let pts = vec![
        BookPoint::new(1, 2.5, vec![]).unwrap(),
        BookPoint::new(2, 1.0, vec![]).unwrap(),
        BookPoint::new(3, 1.0, vec![]).unwrap(),
    ];
    let m = book.frechet_oracle(&pts, &Weights::uniform(3).unwrap()).unwrap();
    assert_eq!(m.sheet, 1);
    assert!((m.t - 0.5 / 3.0).abs() < 1e-15);
}

fn certificate_holds<S: FrechetOracle>(space: &S, pts: &[S::Point], k: usize) {
    let lp = lim_palfia(space, pts, None, k).unwrap();
    let b = space.frechet_oracle(pts, &Weights::uniform(pts.len()).unwrap()).unwrap();
    let err = space.distance(&lp.estimate, &b).unwrap();
    assert!(err <= lp.certificate() + 1e-9, "n={} k={k}: {err} > {}", pts.len(), lp.certificate());
}

#[test]
fn lim_palfia_certificate_in_every_oracle_space() {
    let mut r = rng(41);
    let e = Euclidean::new(3);
    let book = OpenBook::new(3, 1).unwrap();
    for _ in 0..200 {
        let n = r.random_range(1..=10);
        let k = n * r.random_range(1..=50);
        let pts: Vec<_> = (0..n).map(|_| e.random_point(&mut r, 3.0)).collect();
        certificate_holds(&e, &pts, k);
        let pts: Vec<_> = (0..n).map(|_| book.random_point(&mut r)).collect();
        certificate_holds(&book, &pts, k);
        let dim = r.random_range(2..=4);
        certificate_holds(&SpdSpace::new(dim), &commuting_family(dim, n, &mut r), k);
    }
}

#[test]
fn larger_budgets_tighten_the_certificate() {
    let mut r = rng(42);
    let book = OpenBook::new(4, 1).unwrap();
    let pts: Vec<_> = (0..7).map(|_| book.random_point(&mut r)).collect();
    let mut last = f64::INFINITY;
    for k in [7usize, 14, 70, 700, 7000] {
        let lp = lim_palfia(&book, &pts, None, k).unwrap();
        assert!(lp.certificate() < last);
        last = lp.certificate();
        certificate_holds(&book, &pts, k);
    }
}

fn variance_inequality<S: FrechetOracle>(space: &S, pts: &[S::Point], w: &Weights, zs: &[S::Point]) {
    let b = space.frechet_oracle(pts, w).unwrap();
    for z in zs {
        let gap = variance_gap(space, pts, w, &b, z).unwrap();
        let scale: f64 = pts.iter().map(|p| space.distance(p, z).unwrap().powi(2)).sum::<f64>();
        assert!(gap >= -1e-9 * (1.0 + scale), "gap {gap}");
    }
    // the Lim–Palfia estimate satisfies it up to what the certificate allows
    let lp = lim_palfia(space, pts, None, 50 * pts.len()).unwrap();
    let u = Weights::uniform(pts.len()).unwrap();
    let c = lp.certificate();
    for z in zs {
        let gap = variance_gap(space, pts, &u, &lp.estimate, z).unwrap();
        let reach = pts.iter().chain([z]).map(|p| space.distance(p, &lp.estimate).unwrap()).fold(0.0, f64::max);
        assert!(gap >= -2.0 * c * (2.0 * reach + c) - 1e-9, "lp gap {gap}, certificate {c}");
    }
}

#[test]
fn variance_inequality_at_the_barycenter() {
    let mut r = rng(51);
    let e = Euclidean::new(2);
    let book = OpenBook::new(3, 1).unwrap();
    for _ in 0..100 {
        let n = r.random_range(1..=8);
        let pts: Vec<_> = (0..n).map(|_| e.random_point(&mut r, 2.0)).collect();
        let zs: Vec<_> = (0..5).map(|_| e.random_point(&mut r, 2.0)).collect();
        variance_inequality(&e, &pts, &random_weights(n, &mut r), &zs);
        let pts: Vec<_> = (0..n).map(|_| book.random_point(&mut r)).collect();
        let zs: Vec<_> = (0..5).map(|_| book.random_point(&mut r)).collect();
        variance_inequality(&book, &pts, &random_weights(n, &mut r), &zs);
        let sp = SpdSpace::new(3);
        let fam = commuting_family(3, n + 5, &mut r);
        variance_inequality(&sp, &fam[..n], &random_weights(n, &mut r), &fam[n..]);
    }
}
