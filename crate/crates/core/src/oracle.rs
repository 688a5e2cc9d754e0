//! Brute-force reconstruction of the loci straight from the sphere families.
//!
//! The spheres through the `n` vertices of a simplex have their centers on a
//! line. Sampling centers on both lines, every pair of intersecting spheres
//! meets at a constant angle along its whole intersection, given by the law of
//! cosines: `cos = (r₁² + r₂² − d²) / (2 r₁ r₂)`. Pairs that hit the target
//! angle contribute the points of their intersection. Nothing here touches the
//! locus polynomials.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::det::{solve, Matrix};
use crate::error::{Error, Result};
use crate::geometry::{Point, Simplex, SimplexPair};
use crate::locus::AngleParam;

/// The line of centers of every sphere through a simplex's vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterLine {
    /// Circumcenter of the vertices inside their affine hull.
    pub base: Point,
    /// Unit normal of the affine hull.
    pub direction: Vec<f64>,
}

impl CenterLine {
    pub fn at(&self, s: f64) -> Vec<f64> {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(b, d)| b + s * d)
            .collect()
    }
}

/// Center line of the sphere family through `s`.
pub fn family_center_line(s: &Simplex) -> Result<CenterLine> {
    let n = s.dim();
    let v = s.vertices();
    let edges: Vec<Vec<f64>> = v[1..]
        .iter()
        .map(|p| p.iter().zip(v[0].iter()).map(|(a, b)| a - b).collect())
        .collect();

    // generalized cross product of the n-1 edge vectors
    let mut direction = vec![0.0; n];
    for (i, d) in direction.iter_mut().enumerate() {
        let minor: Vec<Vec<f64>> = edges
            .iter()
            .map(|e| e.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, x)| *x).collect())
            .collect();
        let m = if n == 1 + minor.len() && minor.len() == 1 {
            minor[0][0]
        } else {
            Matrix::from_rows(&minor)?.det()
        };
        *d = if i % 2 == 0 { m } else { -m };
    }
    let len = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::DegenerateSimplex(s.label().to_string()));
    }
    direction.iter_mut().for_each(|x| *x /= len);

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    let sq = |p: &[f64]| p.iter().map(|x| x * x).sum::<f64>();
    for p in &v[1..] {
        rows.push(p.iter().zip(v[0].iter()).map(|(a, b)| 2.0 * (a - b)).collect());
        rhs.push(sq(p) - sq(&v[0]));
    }
    rows.push(direction.clone());
    rhs.push(direction.iter().zip(v[0].iter()).map(|(a, b)| a * b).sum());
    let base = solve(&Matrix::from_rows(&rows)?, &rhs)
        .ok_or_else(|| Error::DegenerateSimplex(s.label().to_string()))?;
    Ok(CenterLine {
        base: Point::new(base),
        direction,
    })
}

/// Sampling parameters of the family sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Centers per family, placed at `base + tan(s)·direction` on a uniform grid in `s`.
    pub samples: usize,
    /// Acceptance bound on `|cos² − target|` for emitted points.
    pub tolerance: f64,
    /// Bisection target on the signed angle function of a sphere pair.
    pub refine_tolerance: f64,
    /// Points emitted per intersection circle (3D).
    pub points_per_circle: usize,
    /// Random phase of the `s`-grid; `None` puts samples at cell midpoints.
    pub jitter_seed: Option<u64>,
    /// Only points inside these bounds are kept.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            samples: 4000,
            tolerance: 1e-4,
            refine_tolerance: 1e-10,
            points_per_circle: 64,
            jitter_seed: None,
            bounds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleCloud {
    pub points: Vec<Vec<f64>>,
    /// Achieved cos² of the angle between the two radial vectors at each point.
    pub cos_sq: Vec<f64>,
}

impl OracleCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

struct Family {
    line: CenterLine,
    anchor: Vec<f64>,
}

impl Family {
    fn sphere(&self, s: f64) -> (Vec<f64>, f64) {
        let c = self.line.at(s.tan());
        let r = dist(&c, &self.anchor);
        (c, r)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Unclamped cosine of the intersection angle of two spheres.
fn cos_angle(c1: &[f64], r1: f64, c2: &[f64], r2: f64) -> f64 {
    let d = dist(c1, c2);
    (r1 * r1 + r2 * r2 - d * d) / (2.0 * r1 * r2)
}

/// Samples the common points of sphere pairs meeting at the target angle.
pub fn oracle_cloud(pair: &SimplexPair, angle: AngleParam, sweep: &SweepSpec) -> Result<OracleCloud> {
    let n = pair.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidLocus(format!(
            "the family sweep supports dimensions 2 and 3, got {n}"
        )));
    }
    let target = angle
        .cos_sq()
        .ok_or_else(|| Error::InvalidAngle("the family sweep needs a real angle".into()))?;
    if sweep.samples < 2 {
        return Err(Error::InvalidGrid("the sweep needs at least two samples".into()));
    }
    let families = [&pair.first, &pair.second].map(|s| -> Result<Family> {
        Ok(Family {
            line: family_center_line(s)?,
            anchor: s.vertices()[0].coords.clone(),
        })
    });
    let [f1, f2] = families;
    let (f1, f2) = (f1?, f2?);

    let phases = match sweep.jitter_seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            [rng.random::<f64>(), rng.random::<f64>()]
        }
        None => [0.5, 0.5],
    };
    let m = sweep.samples;
    let grid = |phase: f64| -> Vec<f64> {
        (0..m)
            .map(|k| -FRAC_PI_2 + (k as f64 + phase) * PI / m as f64)
            .filter(|s| s.abs() < FRAC_PI_2)
            .collect()
    };
    let s_grid = grid(phases[0]);
    let u_grid = grid(phases[1]);

    let c = target.sqrt();
    let mut branches = vec![c];
    if c > 0.0 {
        branches.push(-c);
    }

    // Sweep u for every fixed s, then s for every fixed u.
    let roots: Vec<(f64, f64)> = {
        let by_s: Vec<Vec<(f64, f64)>> = s_grid
            .par_iter()
            .map(|&s| {
                let (c1, r1) = f1.sphere(s);
                scan(&u_grid, &branches, sweep.refine_tolerance, |u| {
                    let (c2, r2) = f2.sphere(u);
                    cos_angle(&c1, r1, &c2, r2)
                })
                .into_iter()
                .map(|u| (s, u))
                .collect()
            })
            .collect();
        let by_u: Vec<Vec<(f64, f64)>> = u_grid
            .par_iter()
            .map(|&u| {
                let (c2, r2) = f2.sphere(u);
                scan(&s_grid, &branches, sweep.refine_tolerance, |s| {
                    let (c1, r1) = f1.sphere(s);
                    cos_angle(&c1, r1, &c2, r2)
                })
                .into_iter()
                .map(|s| (s, u))
                .collect()
            })
            .collect();
        by_s.into_iter().chain(by_u).flatten().collect()
    };

    let emitted: Vec<Vec<(Vec<f64>, f64)>> = roots
        .par_iter()
        .map(|&(s, u)| {
            let (c1, r1) = f1.sphere(s);
            let (c2, r2) = f2.sphere(u);
            intersection_points(&c1, r1, &c2, r2, sweep.points_per_circle)
                .into_iter()
                .filter_map(|p| {
                    let a: Vec<f64> = p.iter().zip(&c1).map(|(x, y)| x - y).collect();
                    let b: Vec<f64> = p.iter().zip(&c2).map(|(x, y)| x - y).collect();
                    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                    let na: f64 = a.iter().map(|x| x * x).sum();
                    let nb: f64 = b.iter().map(|x| x * x).sum();
                    let cos_sq = dot * dot / (na * nb);
                    let inside = sweep.bounds.as_ref().is_none_or(|bounds| {
                        p.iter().zip(bounds).all(|(&x, &(lo, hi))| lo <= x && x <= hi)
                    });
                    ((cos_sq - target).abs() < sweep.tolerance && inside && cos_sq.is_finite())
                        .then_some((p, cos_sq))
                })
                .collect()
        })
        .collect();

    let mut cloud = OracleCloud::default();
    for (p, c) in emitted.into_iter().flatten() {
        cloud.points.push(p);
        cloud.cos_sq.push(c);
    }
    Ok(cloud)
}

/// Roots in the parameter of `f(x) − β` for each branch `β`, located on `grid`
/// and refined by bisection.
fn scan(grid: &[f64], branches: &[f64], tol: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for &beta in branches {
        for k in 0..grid.len() - 1 {
            let (ga, gb) = (values[k] - beta, values[k + 1] - beta);
            if !(ga.is_finite() && gb.is_finite()) || (ga > 0.0) == (gb > 0.0) {
                continue;
            }
            let (mut lo, mut hi) = (grid[k], grid[k + 1]);
            let lo_positive = ga > 0.0;
            let mut mid = 0.5 * (lo + hi);
            for _ in 0..200 {
                mid = 0.5 * (lo + hi);
                let g = f(mid) - beta;
                if g.abs() < tol || mid <= lo || mid >= hi {
                    break;
                }
                if (g > 0.0) == lo_positive {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(mid);
        }
    }
    roots
}

/// Common points of two spheres: two points in 2D, a sampled circle in 3D.
fn intersection_points(c1: &[f64], r1: f64, c2: &[f64], r2: f64, per_circle: usize) -> Vec<Vec<f64>> {
    let d = dist(c1, c2);
    if d == 0.0 || !d.is_finite() {
        return Vec::new();
    }
    let e: Vec<f64> = c2.iter().zip(c1).map(|(b, a)| (b - a) / d).collect();
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let mut h_sq = r1 * r1 - a * a;
    if h_sq < 0.0 {
        if h_sq < -1e-9 * r1 * r1 {
            return Vec::new();
        }
        h_sq = 0.0;
    }
    let h = h_sq.sqrt();
    let foot: Vec<f64> = c1.iter().zip(&e).map(|(c, x)| c + a * x).collect();
    match c1.len() {
        2 => {
            let perp = [-e[1], e[0]];
            let p = |sign: f64| vec![foot[0] + sign * h * perp[0], foot[1] + sign * h * perp[1]];
            if h == 0.0 {
                vec![foot]
            } else {
                vec![p(1.0), p(-1.0)]
            }
        }
        _ => {
            let (u, w) = orthonormal_pair(&e);
            if h == 0.0 {
                return vec![foot];
            }
            (0..per_circle.max(1))
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / per_circle.max(1) as f64;
                    (0..3)
                        .map(|i| foot[i] + h * (th.cos() * u[i] + th.sin() * w[i]))
                        .collect()
                })
                .collect()
        }
    }
}

fn orthonormal_pair(e: &[f64]) -> ([f64; 3], [f64; 3]) {
    let pick = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let e3 = [e[0], e[1], e[2]];
    let mut u = cross(e3, pick);
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u.iter_mut().for_each(|x| *x /= n);
    (u, cross(e3, u))
}

/// Uniform bucket grid for nearest-neighbour queries.
struct Buckets<'a> {
    points: &'a [Vec<f64>],
    cell: f64,
    map: HashMap<Vec<i64>, Vec<usize>>,
}

impl<'a> Buckets<'a> {
    fn new(points: &'a [Vec<f64>], cell: f64) -> Self {
        let mut map: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            map.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { points, cell, map }
    }

    fn key(p: &[f64], cell: f64) -> Vec<i64> {
        p.iter().map(|x| (x / cell).floor() as i64).collect()
    }

    /// Indices of points in buckets within `rings` cells of `p`.
    fn around(&self, p: &[f64], rings: i64) -> Vec<usize> {
        let k = Self::key(p, self.cell);
        let mut out = Vec::new();
        let mut offset = vec![-rings; k.len()];
        loop {
            let key: Vec<i64> = k.iter().zip(&offset).map(|(a, b)| a + b).collect();
            if let Some(v) = self.map.get(&key) {
                out.extend_from_slice(v);
            }
            let mut axis = 0;
            loop {
                if axis == offset.len() {
                    return out;
                }
                offset[axis] += 1;
                if offset[axis] <= rings {
                    break;
                }
                offset[axis] = -rings;
                axis += 1;
            }
        }
    }

    fn nearest(&self, p: &[f64]) -> f64 {
        let mut rings = 1;
        loop {
            let cands = self.around(p, rings);
            if !cands.is_empty() {
                let best = cands
                    .iter()
                    .map(|&i| dist(p, &self.points[i]))
                    .fold(f64::INFINITY, f64::min);
                // anything closer than `rings` cells has been seen
                if best <= rings as f64 * self.cell || rings > 64 {
                    return best;
                }
            }
            if rings > 64 {
                return self
                    .points
                    .iter()
                    .map(|q| dist(p, q))
                    .fold(f64::INFINITY, f64::min);
            }
            rings *= 2;
        }
    }
}

fn bucket_size(points: &[Vec<f64>]) -> f64 {
    let dim = points[0].len();
    let mut extent: f64 = 0.0;
    for axis in 0..dim {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[axis]), hi.max(p[axis])));
        extent = extent.max(hi - lo);
    }
    let cell = extent / (points.len() as f64).powf(1.0 / dim as f64);
    if cell > 0.0 && cell.is_finite() {
        cell
    } else {
        1.0
    }
}

/// Directed max–min distances `(cloud → geometry, geometry → cloud)`.
pub fn set_distance(cloud: &[Vec<f64>], geometry: &[Vec<f64>]) -> Result<(f64, f64)> {
    if cloud.is_empty() || geometry.is_empty() {
        return Err(Error::EmptyInput);
    }
    let directed = |from: &[Vec<f64>], to: &[Vec<f64>]| {
        let b = Buckets::new(to, bucket_size(to));
        from.par_iter().map(|p| b.nearest(p)).reduce(|| 0.0, f64::max)
    };
    Ok((directed(cloud, geometry), directed(geometry, cloud)))
}

/// Single-linkage clusters of `points` at `link_distance`.
pub fn count_clusters(points: &[Vec<f64>], link_distance: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let b = Buckets::new(points, link_distance);
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..points.len() {
        for j in b.around(&points[i], 1) {
            if j > i && dist(&points[i], &points[j]) <= link_distance {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    (0..points.len()).filter(|&i| find(&mut parent, i) == i).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locus::{LocusFunction, LocusKind};

    fn simplex(pts: &[&[f64]]) -> Simplex {
        Simplex::new(pts.iter().map(|p| Point::new(p.to_vec())).collect(), "s").unwrap()
    }

    #[test]
    fn center_line_of_a_segment() {
        let l = family_center_line(&simplex(&[&[-1.0, 0.0], &[1.0, 0.0]])).unwrap();
        assert!(l.base.iter().all(|x| x.abs() < 1e-15));
        assert!(l.direction[0].abs() < 1e-15 && (l.direction[1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn center_line_of_a_triangle() {
        let l = family_center_line(&simplex(&[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]))
            .unwrap();
        assert!(l.base.iter().all(|x| x.abs() < 1e-15));
        assert!((l.direction[2].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn center_line_points_are_equidistant() {
        let s = simplex(&[&[0.3, 1.0, -2.0], &[1.5, -0.5, 0.7], &[-1.0, 2.0, 1.0]]);
        let l = family_center_line(&s).unwrap();
        for t in [-3.0, 0.0, 0.5, 7.0] {
            let c = l.at(t);
            let d: Vec<f64> = s.vertices().iter().map(|v| dist(&c, v)).collect();
            assert!(d.iter().all(|x| (x - d[0]).abs() < 1e-9 * d[0]));
        }
    }

    #[test]
    fn intersection_angle_is_constant_on_circle() {
        let c1 = [0.0, 0.0, 0.0];
        let c2 = [1.5, 0.3, -0.2];
        let (r1, r2) = (1.0, 1.2);
        let pts = intersection_points(&c1, r1, &c2, r2, 64);
        assert_eq!(pts.len(), 64);
        let expected = cos_angle(&c1, r1, &c2, r2);
        for p in pts {
            let a: Vec<f64> = p.iter().zip(&c1).map(|(x, y)| x - y).collect();
            let b: Vec<f64> = p.iter().zip(&c2).map(|(x, y)| x - y).collect();
            assert!((dist(&p, &c1) - r1).abs() < 1e-12 && (dist(&p, &c2) - r2).abs() < 1e-12);
            let cos = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / (r1 * r2);
            assert!((cos - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn orthogonal_cloud_lies_on_h_zero_set() {
        let pair = SimplexPair::from_coords(&[&[-1.0, 0.0], &[1.0, 0.0]], &[&[0.0, 1.0], &[0.5, 2.0]])
            .unwrap();
        let cloud = oracle_cloud(&pair, AngleParam::Orthogonal, &SweepSpec { samples: 400, ..Default::default() })
            .unwrap();
        assert!(cloud.len() > 100);
        assert!(cloud.cos_sq.iter().all(|c| c.abs() < 1e-4));
        let h = LocusFunction::new(pair, AngleParam::Orthogonal, LocusKind::H).unwrap();
        for p in &cloud.points {
            let (v, scale) = h.value_and_scale(p).unwrap();
            assert!(v.abs() / scale < 1e-2, "{p:?}");
        }
    }

    #[test]
    fn general_cloud_lies_on_f_zero_set() {
        let pair = SimplexPair::from_coords(&[&[0.0, 0.0], &[1.0, 0.0]], &[&[2.0, 4.0], &[-1.0, 1.0]])
            .unwrap();
        let angle = AngleParam::from_alpha(PI / 12.0).unwrap();
        let cloud = oracle_cloud(&pair, angle, &SweepSpec { samples: 400, ..Default::default() }).unwrap();
        assert!(cloud.len() > 100);
        let f = LocusFunction::new(pair, angle, LocusKind::F).unwrap();
        for p in &cloud.points {
            let (v, scale) = f.value_and_scale(p).unwrap();
            assert!(v.abs() / scale < 1e-6);
        }
    }

    #[test]
    fn set_distance_examples() {
        let circle: Vec<Vec<f64>> = (0..500)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 500.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        assert_eq!(set_distance(&circle, &circle).unwrap(), (0.0, 0.0));
        let shifted: Vec<Vec<f64>> = circle.iter().map(|p| vec![p[0] + 0.1, p[1]]).collect();
        let (a, b) = set_distance(&circle, &shifted).unwrap();
        let slack = 2.0 * PI / 500.0;
        for d in [a, b] {
            assert!(d <= 0.1 + slack && d >= 0.1 - slack, "{d}");
        }
        assert_eq!(set_distance(&[], &circle), Err(Error::EmptyInput));
    }

    #[test]
    fn clusters() {
        let pts: Vec<Vec<f64>> = (0..10)
            .map(|k| vec![k as f64 * 0.1, 0.0])
            .chain((0..10).map(|k| vec![5.0 + k as f64 * 0.1, 0.0]))
            .collect();
        assert_eq!(count_clusters(&pts, 0.15), 2);
        assert_eq!(count_clusters(&pts, 0.05), 20);
    }

    #[test]
    fn jitter_is_reproducible() {
        let pair = SimplexPair::from_coords(&[&[0.0, 0.0], &[1.0, 0.0]], &[&[2.0, 4.0], &[-1.0, 1.0]])
            .unwrap();
        let spec = SweepSpec { samples: 200, jitter_seed: Some(42), ..Default::default() };
        let a = oracle_cloud(&pair, AngleParam::Tangent, &spec).unwrap();
        let b = oracle_cloud(&pair, AngleParam::Tangent, &spec).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
    }
}
