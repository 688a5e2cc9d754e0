use std::collections::HashMap;

use super::{Polyline, TriangleMesh};
use crate::error::{Error, Result};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Connected pieces among traced polylines. Open polylines whose endpoints lie
/// within `merge_distance` of each other count as one piece.
pub fn count_polyline_components(polylines: &[Polyline], merge_distance: f64) -> usize {
    let mut uf = UnionFind::new(polylines.len());
    let ends: Vec<Vec<[f64; 2]>> = polylines
        .iter()
        .map(|p| match (p.closed, p.points.first(), p.points.last()) {
            (false, Some(a), Some(b)) => vec![*a, *b],
            _ => vec![],
        })
        .collect();
    let close = |a: &[f64; 2], b: &[f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]) <= merge_distance;
    for i in 0..polylines.len() {
        for j in i + 1..polylines.len() {
            if ends[i].iter().any(|a| ends[j].iter().any(|b| close(a, b))) {
                uf.union(i, j);
            }
        }
    }
    (0..polylines.len()).filter(|&i| uf.find(i) == i).count()
}

/// Connected components of a mesh under triangle adjacency.
pub fn count_mesh_components(mesh: &TriangleMesh) -> usize {
    let mut uf = UnionFind::new(mesh.vertices.len());
    let mut used = vec![false; mesh.vertices.len()];
    for t in &mesh.triangles {
        for &v in t {
            used[v as usize] = true;
        }
        uf.union(t[0] as usize, t[1] as usize);
        uf.union(t[1] as usize, t[2] as usize);
    }
    (0..mesh.vertices.len())
        .filter(|&v| used[v] && uf.find(v) == v)
        .count()
}

/// `V − E + F` of a closed mesh.
pub fn euler_characteristic(mesh: &TriangleMesh) -> Result<i64> {
    if mesh.triangles.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut edge_use: HashMap<(u32, u32), u32> = HashMap::new();
    let mut used = vec![false; mesh.vertices.len()];
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *edge_use.entry((a.min(b), a.max(b))).or_default() += 1;
            used[t[k] as usize] = true;
        }
    }
    let boundary = edge_use.values().filter(|&&c| c == 1).count();
    if boundary > 0 {
        return Err(Error::OpenMesh(boundary));
    }
    let v = used.iter().filter(|&&u| u).count() as i64;
    let e = edge_use.len() as i64;
    let f = mesh.triangles.len() as i64;
    Ok(v - e + f)
}

/// Smooth branches of a plane curve sampled by `points`.
///
/// Unlike plain connectivity, curves that cross at a node count separately
/// and a curve passing through its own node stays one branch. Each point gets
/// a tangent from the principal axis of its neighbours within `radius`;
/// points whose neighbourhood has no dominant direction (crossings, corners
/// left by contouring) are dropped. Two remaining points are linked when they
/// lie within `6·radius`, their tangents agree to within `max_angle` radians,
/// and the segment between them runs along that tangent. The sampling must be
/// dense relative to `radius`.
pub fn count_branches(points: &[[f64; 2]], radius: f64, max_angle: f64) -> usize {
    count_branches_with_reach(points, radius, 6.0 * radius, max_angle)
}

pub fn count_branches_with_reach(points: &[[f64; 2]], radius: f64, reach: f64, max_angle: f64) -> usize {
    let buckets = PlaneBuckets::new(points, radius);
    let tangents: Vec<Option<[f64; 2]>> = points
        .iter()
        .map(|p| principal_direction(points, &buckets.within(points, p, radius)))
        .collect();
    let kept: Vec<usize> = (0..points.len()).filter(|&i| tangents[i].is_some()).collect();
    if kept.is_empty() {
        return 0;
    }
    let cos_max = max_angle.cos();
    let mut uf = UnionFind::new(points.len());
    for &i in &kept {
        let ti = tangents[i].unwrap();
        for j in buckets.within(points, &points[i], reach) {
            if j <= i {
                continue;
            }
            let Some(tj) = tangents[j] else { continue };
            if (ti[0] * tj[0] + ti[1] * tj[1]).abs() < cos_max {
                continue;
            }
            let d = [points[j][0] - points[i][0], points[j][1] - points[i][1]];
            let len = d[0].hypot(d[1]);
            // neighbours inside the tangent window need no collinearity test
            if len > radius && (d[0] * ti[0] + d[1] * ti[1]).abs() < cos_max * len {
                continue;
            }
            uf.union(i, j);
        }
    }
    let mut roots: Vec<usize> = kept.iter().map(|&i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Unit principal axis of `points[idx]`, or `None` when the spread is not
/// clearly one-dimensional.
fn principal_direction(points: &[[f64; 2]], idx: &[usize]) -> Option<[f64; 2]> {
    if idx.len() < 3 {
        return None;
    }
    let n = idx.len() as f64;
    let (mx, my) = idx
        .iter()
        .fold((0.0, 0.0), |(x, y), &i| (x + points[i][0], y + points[i][1]));
    let (mx, my) = (mx / n, my / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &i in idx {
        let (dx, dy) = (points[i][0] - mx, points[i][1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let half_trace = 0.5 * (sxx + syy);
    let root = (0.25 * (sxx - syy).powi(2) + sxy * sxy).sqrt();
    let (big, small) = (half_trace + root, half_trace - root);
    if big <= 0.0 || small > 0.02 * big {
        return None;
    }
    let (vx, vy) = if sxy.abs() > 1e-300 {
        (big - syy, sxy)
    } else if sxx >= syy {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let len = vx.hypot(vy);
    Some([vx / len, vy / len])
}

struct PlaneBuckets {
    cell: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
}

impl PlaneBuckets {
    fn new(points: &[[f64; 2]], cell: f64) -> Self {
        let mut map: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            map.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { cell, map }
    }

    fn key(p: &[f64; 2], cell: f64) -> (i64, i64) {
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    fn within(&self, points: &[[f64; 2]], p: &[f64; 2], r: f64) -> Vec<usize> {
        let (kx, ky) = Self::key(p, self.cell);
        let rings = (r / self.cell).ceil() as i64;
        let mut out = Vec::new();
        for dx in -rings..=rings {
            for dy in -rings..=rings {
                if let Some(v) = self.map.get(&(kx + dx, ky + dy)) {
                    out.extend(
                        v.iter()
                            .copied()
                            .filter(|&i| (points[i][0] - p[0]).hypot(points[i][1] - p[1]) <= r),
                    );
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> TriangleMesh {
        TriangleMesh {
            vertices: vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            triangles: vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
            residuals: vec![0.0; 4],
        }
    }

    #[test]
    fn tetrahedron_is_a_sphere() {
        assert_eq!(euler_characteristic(&tetrahedron()).unwrap(), 2);
        assert_eq!(count_mesh_components(&tetrahedron()), 1);
    }

    #[test]
    fn open_mesh_detected() {
        let mut m = tetrahedron();
        m.triangles.pop();
        assert_eq!(euler_characteristic(&m), Err(Error::OpenMesh(3)));
    }

    #[test]
    fn two_components() {
        let a = tetrahedron();
        let mut m = a.clone();
        m.vertices.extend(a.vertices.iter().map(|v| [v[0] + 5.0, v[1], v[2]]));
        m.triangles.extend(a.triangles.iter().map(|t| t.map(|i| i + 4)));
        assert_eq!(count_mesh_components(&m), 2);
        assert_eq!(euler_characteristic(&m).unwrap(), 4);
    }

    #[test]
    fn polyline_merging() {
        let open = |a: [f64; 2], b: [f64; 2]| Polyline {
            points: vec![a, b],
            closed: false,
            residuals: vec![0.0; 2],
        };
        let lines = vec![
            open([0.0, 0.0], [1.0, 0.0]),
            open([1.05, 0.0], [2.0, 0.0]),
            open([5.0, 5.0], [6.0, 5.0]),
        ];
        assert_eq!(count_polyline_components(&lines, 0.1), 2);
        assert_eq!(count_polyline_components(&lines, 0.01), 3);
        let closed = Polyline {
            points: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            closed: true,
            residuals: vec![0.0; 3],
        };
        assert_eq!(count_polyline_components(&[closed], 0.1), 1);
    }

    fn sample(f: impl Fn(f64) -> [f64; 2], lo: f64, hi: f64, n: usize) -> Vec<[f64; 2]> {
        (0..=n).map(|k| f(lo + (hi - lo) * k as f64 / n as f64)).collect()
    }

    #[test]
    fn crossing_lines_are_two_branches() {
        let mut pts = sample(|t| [t, 0.0], -1.0, 1.0, 400);
        pts.extend(sample(|t| [0.0, t], -1.0, 1.0, 400));
        assert_eq!(count_branches(&pts, 0.02, 0.3), 2);
    }

    #[test]
    fn lemniscate_is_one_branch() {
        // lemniscate of Bernoulli
        let pts = sample(
            |t| {
                let d = 1.0 + t.sin().powi(2);
                [t.cos() / d, t.sin() * t.cos() / d]
            },
            0.0,
            2.0 * std::f64::consts::PI,
            4000,
        );
        assert_eq!(count_branches(&pts, 0.01, 0.3), 1);
    }

    #[test]
    fn circle_through_a_line() {
        let mut pts = sample(|t| [t.cos(), t.sin()], 0.0, 2.0 * std::f64::consts::PI, 2000);
        pts.extend(sample(|t| [t, 0.0], -2.0, 2.0, 800));
        assert_eq!(count_branches(&pts, 0.02, 0.3), 2);
        assert_eq!(count_branches(&[], 0.02, 0.3), 0);
    }
}
