use std::collections::HashMap;

use rayon::prelude::*;

use super::{refine_segment, GridSpec, RefineOptions, ScalarField};
use crate::error::{Error, Result};

/// Triangulated zero surface.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Counter-clockwise when viewed from the positive side of the field.
    pub triangles: Vec<[u32; 3]>,
    pub residuals: Vec<f64>,
}

impl TriangleMesh {
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i as usize]);
                let u = sub(b, a);
                let v = sub(c, a);
                0.5 * norm(cross(u, v))
            })
            .sum()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn norm(u: [f64; 3]) -> f64 {
    dot(u, u).sqrt()
}

/// The six tetrahedra of the Freudenthal split of a cube, as corner bitmasks
/// `x | y << 1 | z << 2`. Every tetrahedron runs from corner 0 to corner 7, so
/// neighbouring cubes agree on their face diagonals.
const TETRAHEDRA: [[u8; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

/// Marching-cubes style surface extraction over `grid`.
///
/// Each cube is split into six tetrahedra, which removes the ambiguous cases
/// and yields a closed, consistently oriented manifold wherever the surface
/// stays inside the box. Vertices sit on grid edges and are refined by
/// bisection.
pub fn mesh_3d(field: &dyn ScalarField, grid: &GridSpec, opts: &RefineOptions) -> Result<TriangleMesh> {
    if grid.dim() != 3 || field.dim() != 3 {
        return Err(Error::InvalidGrid(format!(
            "meshing needs a 3D field and grid, got field dim {} and grid dim {}",
            field.dim(),
            grid.dim()
        )));
    }
    let [nx, ny, nz] = [grid.resolution()[0], grid.resolution()[1], grid.resolution()[2]];
    let sx = nx + 1;
    let sxy = sx * (ny + 1);
    let total = sxy * (nz + 1);
    let position = |idx: usize| {
        [
            grid.node(0, idx % sx),
            grid.node(1, (idx / sx) % (ny + 1)),
            grid.node(2, idx / sxy),
        ]
    };

    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| field.value(&position(idx)))
        .collect();

    let corner_offset: [usize; 8] = std::array::from_fn(|c| (c & 1) + ((c >> 1) & 1) * sx + ((c >> 2) & 1) * sxy);

    let mut vertex_of: HashMap<u64, u32> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();

    let mut vertex = |a: usize, b: usize| -> u32 {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let key = lo as u64 * total as u64 + hi as u64;
        *vertex_of.entry(key).or_insert_with(|| {
            edges.push((lo, hi));
            (edges.len() - 1) as u32
        })
    };

    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let base = i + j * sx + k * sxy;
                for tet in &TETRAHEDRA {
                    let nodes = tet.map(|c| base + corner_offset[c as usize]);
                    let pos = nodes.map(|n| values[n] > 0.0);
                    let count = pos.iter().filter(|&&p| p).count();
                    if count == 0 || count == 4 {
                        continue;
                    }
                    let ps: Vec<usize> = (0..4).filter(|&v| pos[v]).collect();
                    let ns: Vec<usize> = (0..4).filter(|&v| !pos[v]).collect();

                    let p_centroid = centroid(ps.iter().map(|&v| position(nodes[v])));
                    let n_centroid = centroid(ns.iter().map(|&v| position(nodes[v])));
                    let toward_positive = sub(p_centroid, n_centroid);

                    let quads: Vec<[(usize, usize); 3]> = match count {
                        1 => vec![[(ps[0], ns[0]), (ps[0], ns[1]), (ps[0], ns[2])]],
                        3 => vec![[(ns[0], ps[0]), (ns[0], ps[1]), (ns[0], ps[2])]],
                        _ => {
                            let (a, b, c, d) = (ps[0], ps[1], ns[0], ns[1]);
                            vec![[(a, c), (a, d), (b, d)], [(a, c), (b, d), (b, c)]]
                        }
                    };
                    for tri in quads {
                        let mids = tri.map(|(u, v)| {
                            let pu = position(nodes[u]);
                            let pv = position(nodes[v]);
                            [0.5 * (pu[0] + pv[0]), 0.5 * (pu[1] + pv[1]), 0.5 * (pu[2] + pv[2])]
                        });
                        let normal = cross(sub(mids[1], mids[0]), sub(mids[2], mids[0]));
                        let mut ids = tri.map(|(u, v)| vertex(nodes[u], nodes[v]));
                        if dot(normal, toward_positive) < 0.0 {
                            ids.swap(1, 2);
                        }
                        triangles.push(ids);
                    }
                }
            }
        }
    }
    if triangles.is_empty() {
        return Err(Error::EmptyZeroSet);
    }

    let refined: Vec<([f64; 3], f64)> = edges
        .par_iter()
        .map(|&(a, b)| {
            let pa = position(a);
            let pb = position(b);
            match refine_segment(field, &pa, &pb, opts) {
                Ok(r) => ([r.point[0], r.point[1], r.point[2]], r.residual),
                Err(_) => (
                    [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]), 0.5 * (pa[2] + pb[2])],
                    f64::INFINITY,
                ),
            }
        })
        .collect();
    let (vertices, residuals) = refined.into_iter().unzip();
    Ok(TriangleMesh {
        vertices,
        triangles,
        residuals,
    })
}

fn centroid(points: impl Iterator<Item = [f64; 3]>) -> [f64; 3] {
    let mut acc = [0.0; 3];
    let mut n = 0.0;
    for p in points {
        acc = [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]];
        n += 1.0;
    }
    [acc[0] / n, acc[1] / n, acc[2] / n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{euler_characteristic, FnField};

    #[test]
    fn sphere_mesh() {
        let f = FnField::new(3, |p: &[f64]| p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0);
        let g = GridSpec::uniform(vec![(-2.0, 2.0); 3], 64).unwrap();
        let m = mesh_3d(&f, &g, &RefineOptions::default()).unwrap();
        assert_eq!(euler_characteristic(&m).unwrap(), 2);
        let area = m.area();
        assert!((area - 4.0 * std::f64::consts::PI).abs() < 0.02 * 4.0 * std::f64::consts::PI);
        for v in &m.vertices {
            assert!((dot(*v, *v).sqrt() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn outward_orientation_on_sphere() {
        let f = FnField::new(3, |p: &[f64]| p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0);
        let g = GridSpec::uniform(vec![(-1.5, 1.5); 3], 16).unwrap();
        let m = mesh_3d(&f, &g, &RefineOptions::default()).unwrap();
        for t in &m.triangles {
            let [a, b, c] = t.map(|i| m.vertices[i as usize]);
            let n = cross(sub(b, a), sub(c, a));
            let centre = centroid([a, b, c].into_iter());
            assert!(dot(n, centre) > 0.0);
        }
    }

    #[test]
    fn torus_mesh() {
        let f = FnField::new(3, |p: &[f64]| {
            let q = (p[0] * p[0] + p[1] * p[1]).sqrt() - 2.0;
            q * q + p[2] * p[2] - 1.0
        });
        let g = GridSpec::uniform(vec![(-4.0, 4.0); 3], 48).unwrap();
        let m = mesh_3d(&f, &g, &RefineOptions::default()).unwrap();
        assert_eq!(euler_characteristic(&m).unwrap(), 0);
    }

    #[test]
    fn clipped_surface_is_open() {
        let f = FnField::new(3, |p: &[f64]| p[2] - 0.1);
        let g = GridSpec::uniform(vec![(-1.0, 1.0); 3], 8).unwrap();
        let m = mesh_3d(&f, &g, &RefineOptions::default()).unwrap();
        assert!(matches!(euler_characteristic(&m), Err(Error::OpenMesh(_))));
    }

    #[test]
    fn empty_mesh() {
        let f = FnField::new(3, |_: &[f64]| 1.0);
        let g = GridSpec::uniform(vec![(-1.0, 1.0); 3], 4).unwrap();
        assert_eq!(mesh_3d(&f, &g, &RefineOptions::default()), Err(Error::EmptyZeroSet));
    }
}
