use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use sphereloci::geometry::{circumsphere, Point, Simplex, SimplexPair};
use sphereloci::locus::{angle_cos_sq, AngleParam, LocusFunction, LocusKind};

fn points(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0..3.0f64, n), count)
}

fn conditioned(pts: &[Vec<f64>]) -> bool {
    let n = pts[0].len();
    let m = DMatrix::from_fn(n, n, |r, c| pts[r + 1][c] - pts[0][c]);
    m.determinant().abs() > 0.1
}

fn simplex(pts: &[Vec<f64>], label: &str) -> Simplex {
    Simplex::new(pts.iter().cloned().map(Point::new).collect(), label).unwrap()
}

fn rotate(p: &[f64], theta: f64, shift: [f64; 2], scale: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    vec![scale * (c * p[0] - s * p[1]) + shift[0], scale * (s * p[0] + c * p[1]) + shift[1]]
}

proptest! {
    #[test]
    fn center_is_equidistant(n in 2usize..=4, seed in points(4, 5)) {
        let pts: Vec<Vec<f64>> = seed[..=n].iter().map(|p| p[..n].to_vec()).collect();
        prop_assume!(conditioned(&pts));
        let (center, radius_sq) = circumsphere(&pts[0], &simplex(&pts[1..], "s")).unwrap();
        for p in &pts {
            let d: f64 = p.iter().zip(center.iter()).map(|(a, b)| (a - b).powi(2)).sum();
            prop_assert!((d - radius_sq).abs() < 1e-8 * radius_sq.max(1.0));
        }
    }

    #[test]
    fn center_matches_linear_solve(seed in points(3, 4)) {
        prop_assume!(conditioned(&seed));
        let (center, _) = circumsphere(&seed[0], &simplex(&seed[1..], "s")).unwrap();
        let a = DMatrix::from_fn(3, 3, |r, c| 2.0 * (seed[r + 1][c] - seed[0][c]));
        let sq = |p: &[f64]| p.iter().map(|x| x * x).sum::<f64>();
        let b = DVector::from_fn(3, |r, _| sq(&seed[r + 1]) - sq(&seed[0]));
        let expected = a.lu().solve(&b).unwrap();
        for (x, y) in center.iter().zip(expected.iter()) {
            prop_assert!((x - y).abs() < 1e-8 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn angle_is_similarity_invariant(
        pts in points(2, 4),
        k in prop::collection::vec(-3.0..3.0f64, 2),
        theta in 0.0..std::f64::consts::TAU,
        shift in prop::array::uniform2(-5.0..5.0f64),
        scale in 0.2..5.0f64,
    ) {
        let seg = |a: &Vec<f64>, b: &Vec<f64>| (a[0] - b[0]).hypot(a[1] - b[1]);
        prop_assume!(seg(&pts[0], &pts[1]) > 0.1 && seg(&pts[2], &pts[3]) > 0.1);
        let make = |f: &dyn Fn(&[f64]) -> Vec<f64>| {
            SimplexPair::new(
                simplex(&[f(&pts[0]), f(&pts[1])], "first"),
                simplex(&[f(&pts[2]), f(&pts[3])], "second"),
            )
        };
        let Ok(pair) = make(&|p| p.to_vec()) else { return Ok(()) };
        let moved = make(&|p| rotate(p, theta, shift, scale)).unwrap();
        let (Ok(before), Ok(after)) = (angle_cos_sq(&pair, &k), angle_cos_sq(&moved, &rotate(&k, theta, shift, scale))) else {
            return Ok(());
        };
        prop_assert!((before - after).abs() < 1e-6);
    }

    #[test]
    fn swapping_the_pair_keeps_the_zero_sets(pts in points(2, 4), k in prop::collection::vec(-3.0..3.0f64, 2)) {
        let Ok(pair) = SimplexPair::new(simplex(&pts[..2], "first"), simplex(&pts[2..], "second")) else {
            return Ok(());
        };
        for (angle, kind) in [
            (AngleParam::Orthogonal, LocusKind::H),
            (AngleParam::Tangent, LocusKind::G { i: 1, j: 2 }),
            (AngleParam::general(0.3).unwrap(), LocusKind::F),
        ] {
            let f = LocusFunction::new(pair.clone(), angle, kind).unwrap().eval(&k).unwrap();
            let g = LocusFunction::new(pair.swapped(), angle, kind).unwrap().eval(&k).unwrap();
            prop_assert!((f.abs() - g.abs()).abs() <= 1e-9 * f.abs().max(1.0));
        }
    }
}

#[test]
fn degenerate_simplex_is_rejected() {
    let pts = [vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]];
    assert!(Simplex::new(pts.iter().cloned().map(Point::new).collect(), "line").is_err());
}

#[test]
fn collinear_point_has_no_circle() {
    let s = Simplex::new(vec![Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 0.0])], "s").unwrap();
    assert!(circumsphere(&[3.0, 0.0], &s).is_err());
}
