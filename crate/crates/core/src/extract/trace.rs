use std::collections::HashMap;

use rayon::prelude::*;

use super::{refine_segment, GridSpec, RefineOptions, ScalarField};
use crate::error::{Error, Result};

/// A traced piece of a zero curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    /// Closed polylines implicitly join the last point back to the first.
    pub closed: bool,
    pub residuals: Vec<f64>,
}

impl Polyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arc_length(&self) -> f64 {
        let d = |a: &[f64; 2], b: &[f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        let open: f64 = self.points.windows(2).map(|w| d(&w[0], &w[1])).sum();
        match (self.closed, self.points.first(), self.points.last()) {
            (true, Some(first), Some(last)) => open + d(last, first),
            _ => open,
        }
    }
}

const NONE: u32 = u32::MAX;

/// Marching squares over `grid`, with every output vertex refined along its grid edge.
///
/// Saddle cells are split according to the sign at the cell center. Curves
/// that leave the box come back as open polylines.
pub fn trace_2d(field: &dyn ScalarField, grid: &GridSpec, opts: &RefineOptions) -> Result<Vec<Polyline>> {
    if grid.dim() != 2 || field.dim() != 2 {
        return Err(Error::InvalidGrid(format!(
            "tracing needs a 2D field and grid, got field dim {} and grid dim {}",
            field.dim(),
            grid.dim()
        )));
    }
    let nx = grid.resolution()[0];
    let ny = grid.resolution()[1];
    let stride = nx + 1;
    let node = |i: usize, j: usize| [grid.node(0, i), grid.node(1, j)];

    let values: Vec<f64> = (0..stride * (ny + 1))
        .into_par_iter()
        .map(|idx| field.value(&node(idx % stride, idx / stride)))
        .collect();
    let positive = |i: usize, j: usize| values[j * stride + i] > 0.0;

    let horizontal = nx * (ny + 1);
    let h_edge = |i: usize, j: usize| (j * nx + i) as u32;
    let v_edge = |i: usize, j: usize| (horizontal + j * stride + i) as u32;

    let mut segments: Vec<(u32, u32)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let c = [
                positive(i, j),
                positive(i + 1, j),
                positive(i + 1, j + 1),
                positive(i, j + 1),
            ];
            // bottom, right, top, left
            let e = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let cut = [c[0] != c[1], c[1] != c[2], c[2] != c[3], c[3] != c[0]];
            match cut.iter().filter(|&&x| x).count() {
                0 => {}
                2 => {
                    let mut it = (0..4).filter(|&k| cut[k]);
                    let a = it.next().unwrap();
                    let b = it.next().unwrap();
                    segments.push((e[a], e[b]));
                }
                _ => {
                    let center = [
                        0.5 * (grid.node(0, i) + grid.node(0, i + 1)),
                        0.5 * (grid.node(1, j) + grid.node(1, j + 1)),
                    ];
                    let center_positive = field.value(&center) > 0.0;
                    if center_positive == c[0] {
                        // corners 0 and 2 joined through the center
                        segments.push((e[0], e[1]));
                        segments.push((e[2], e[3]));
                    } else {
                        segments.push((e[3], e[0]));
                        segments.push((e[1], e[2]));
                    }
                }
            }
        }
    }
    if segments.is_empty() {
        return Err(Error::EmptyZeroSet);
    }

    let mut vertex_of: HashMap<u32, u32> = HashMap::new();
    let mut edges: Vec<u32> = Vec::new();
    let mut adjacency: Vec<[u32; 2]> = Vec::new();
    let mut id = |edge: u32, edges: &mut Vec<u32>, adjacency: &mut Vec<[u32; 2]>| -> u32 {
        *vertex_of.entry(edge).or_insert_with(|| {
            edges.push(edge);
            adjacency.push([NONE, NONE]);
            (edges.len() - 1) as u32
        })
    };
    for &(a, b) in &segments {
        let va = id(a, &mut edges, &mut adjacency);
        let vb = id(b, &mut edges, &mut adjacency);
        for (from, to) in [(va, vb), (vb, va)] {
            let slot = &mut adjacency[from as usize];
            if slot[0] == NONE {
                slot[0] = to;
            } else {
                debug_assert_eq!(slot[1], NONE);
                slot[1] = to;
            }
        }
    }

    let endpoints = |edge: u32| -> ([f64; 2], [f64; 2]) {
        let edge = edge as usize;
        if edge < horizontal {
            let (i, j) = (edge % nx, edge / nx);
            (node(i, j), node(i + 1, j))
        } else {
            let k = edge - horizontal;
            let (i, j) = (k % stride, k / stride);
            (node(i, j), node(i, j + 1))
        }
    };
    let refined: Vec<([f64; 2], f64)> = edges
        .par_iter()
        .map(|&edge| {
            let (a, b) = endpoints(edge);
            match refine_segment(field, &a, &b, opts) {
                Ok(r) => ([r.point[0], r.point[1]], r.residual),
                Err(_) => {
                    let m = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                    (m, f64::INFINITY)
                }
            }
        })
        .collect();

    let mut visited = vec![false; edges.len()];
    let mut chains: Vec<(Vec<u32>, bool)> = Vec::new();
    let walk = |start: u32, visited: &mut Vec<bool>| -> Vec<u32> {
        let mut chain = vec![start];
        visited[start as usize] = true;
        let mut prev = NONE;
        let mut cur = start;
        loop {
            let next = adjacency[cur as usize]
                .iter()
                .copied()
                .find(|&n| n != NONE && n != prev && !visited[n as usize]);
            match next {
                Some(n) => {
                    visited[n as usize] = true;
                    chain.push(n);
                    prev = cur;
                    cur = n;
                }
                None => break,
            }
        }
        chain
    };
    for v in 0..edges.len() as u32 {
        let degree = adjacency[v as usize].iter().filter(|&&n| n != NONE).count();
        if degree == 1 && !visited[v as usize] {
            chains.push((walk(v, &mut visited), false));
        }
    }
    for v in 0..edges.len() as u32 {
        if !visited[v as usize] {
            chains.push((walk(v, &mut visited), true));
        }
    }

    let mut out = Vec::with_capacity(chains.len());
    for (chain, closed) in chains {
        let mut points: Vec<[f64; 2]> = Vec::with_capacity(chain.len());
        let mut residuals = Vec::with_capacity(chain.len());
        for v in chain {
            let (p, r) = refined[v as usize];
            if points.last() != Some(&p) {
                points.push(p);
                residuals.push(r);
            }
        }
        if closed && points.len() > 1 && points.first() == points.last() {
            points.pop();
            residuals.pop();
        }
        if points.len() >= 2 {
            out.push(Polyline { points, closed, residuals });
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyZeroSet);
    }
    Ok(out)
}
