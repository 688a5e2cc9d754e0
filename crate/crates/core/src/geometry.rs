//! Points, simplexes, and the radial-vector machinery.
//!
//! For a point `K` adjoined to the `n` vertices of an `(n-1)`-simplex in `n`
//! dimensions, the sphere through all `n + 1` points has center `c` with
//!
//! ```text
//! K - c = a(K) / (2 V(K))
//! ```
//!
//! where `V` is the `(n+1) × (n+1)` volume determinant with rows
//! `(x_1 .. x_n, 1)` and each `a_i` is an `(n+2) × (n+2)` bordered determinant
//! over the lifted rows `(|x|², x_1 .. x_n, 1)`. Rows are always ordered
//! `K, S_1, .., S_n`, so `V` and `a` flip sign together under vertex
//! permutations while their quotient does not.

use std::ops::Deref;

use num_traits::Zero;

use crate::det::{rational_from_f64, Matrix, Rational, Scalar};
use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// Relative cutoff on `|V|` against `(max |coordinate|)^n`.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Point<T = f64> {
    pub coords: Vec<T>,
}

impl<T> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl<T> Deref for Point<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.coords
    }
}

impl<T> From<Vec<T>> for Point<T> {
    fn from(coords: Vec<T>) -> Self {
        Self { coords }
    }
}

impl<const N: usize> From<[f64; N]> for Point<f64> {
    fn from(coords: [f64; N]) -> Self {
        Self {
            coords: coords.to_vec(),
        }
    }
}

/// The vertex set of an `(n-1)`-simplex in `n` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex<T = f64> {
    vertices: Vec<Point<T>>,
    label: String,
    /// Lifted vertex rows `(|v|², v_1 .. v_n, 1)`, cached for the bordered determinants.
    lifted: Vec<Vec<T>>,
}

impl<T: Scalar> Simplex<T> {
    /// Builds a simplex after checking dimensions only.
    pub fn new_unchecked(vertices: Vec<Point<T>>, label: impl Into<String>) -> Result<Self> {
        let dim = vertices.len();
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::DimensionOutOfRange(dim));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::WrongVertexCount {
                    dim: v.dim(),
                    got: dim,
                });
            }
        }
        let lifted = vertices.iter().map(|v| lifted_row(v)).collect();
        Ok(Self {
            vertices,
            label: label.into(),
            lifted,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lifted_rows(&self) -> &[Vec<T>] {
        &self.lifted
    }
}

impl Simplex<f64> {
    /// Builds a simplex and rejects affinely dependent vertex sets.
    ///
    /// The test is exact: every finite float is a dyadic rational, and the
    /// Gram determinant of the edge vectors is evaluated over rationals.
    pub fn new(vertices: Vec<Point>, label: impl Into<String>) -> Result<Self> {
        let s = Self::new_unchecked(vertices, label)?;
        if s.vertices.iter().any(|v| v.iter().any(|c| !c.is_finite())) {
            return Err(Error::DegenerateSimplex(s.label.clone()));
        }
        if !s.is_affinely_independent() {
            return Err(Error::DegenerateSimplex(s.label.clone()));
        }
        Ok(s)
    }

    pub fn is_affinely_independent(&self) -> bool {
        let n = self.dim();
        let base: Vec<Rational> = self.vertices[0].iter().map(|&c| rational_from_f64(c)).collect();
        let edges: Vec<Vec<Rational>> = self.vertices[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&base)
                    .map(|(&c, b)| rational_from_f64(c) - b)
                    .collect()
            })
            .collect();
        let m = n - 1;
        let gram: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        edges[i]
                            .iter()
                            .zip(&edges[j])
                            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                    })
                    .collect()
            })
            .collect();
        match Matrix::from_rows(&gram) {
            Ok(g) => !g.det_exact().is_zero(),
            Err(_) => false,
        }
    }

    /// Largest absolute coordinate over the vertices.
    pub fn max_abs_coord(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

/// The two simplexes whose sphere families are intersected.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPair<T = f64> {
    pub first: Simplex<T>,
    pub second: Simplex<T>,
}

impl<T: Scalar> SimplexPair<T> {
    /// Pairs two simplexes without checking that they differ.
    pub fn new_unchecked(first: Simplex<T>, second: Simplex<T>) -> Result<Self> {
        if first.dim() != second.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                got: second.dim(),
            });
        }
        Ok(Self { first, second })
    }

    pub fn new(first: Simplex<T>, second: Simplex<T>) -> Result<Self> {
        let pair = Self::new_unchecked(first, second)?;
        let same = pair.first.vertices.iter().all(|v| pair.second.vertices.contains(v))
            && pair.second.vertices.iter().all(|v| pair.first.vertices.contains(v));
        if same {
            return Err(Error::IdenticalSimplexes);
        }
        Ok(pair)
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    /// The same pair with the two simplexes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }
}

impl SimplexPair<f64> {
    /// Convenience constructor for real vertex lists; simplexes are labelled `first`/`second`.
    pub fn from_coords(first: &[&[f64]], second: &[&[f64]]) -> Result<Self> {
        let a = Simplex::new(first.iter().map(|c| Point::new(c.to_vec())).collect(), "first")?;
        let b = Simplex::new(second.iter().map(|c| Point::new(c.to_vec())).collect(), "second")?;
        Self::new(a, b)
    }

    /// Promotes real coordinates to complex ones with zero imaginary parts.
    pub fn to_complex(&self) -> SimplexPair<num_complex::Complex64> {
        let lift = |s: &Simplex<f64>| {
            Simplex::new_unchecked(
                s.vertices
                    .iter()
                    .map(|v| Point::new(v.iter().map(|&c| num_complex::Complex64::new(c, 0.0)).collect()))
                    .collect(),
                s.label.clone(),
            )
            .expect("dimensions already validated")
        };
        SimplexPair {
            first: lift(&self.first),
            second: lift(&self.second),
        }
    }
}

/// `(|p|², p_1 .. p_n, 1)` with the square taken without conjugation.
pub fn lifted_row<T: Scalar>(p: &[T]) -> Vec<T> {
    let mut row = Vec::with_capacity(p.len() + 2);
    let sq = p.iter().fold(T::zero(), |acc, &c| acc + c * c);
    row.push(sq);
    row.extend_from_slice(p);
    row.push(T::one());
    row
}

fn check_dim<T>(k: &[T], s: &Simplex<impl Scalar>) -> Result<()> {
    if k.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: k.len(),
        });
    }
    Ok(())
}

/// Determinant of rows `(coords, 1)` for `K` then the simplex vertices.
pub fn volume_det<T: Scalar>(k: &[T], s: &Simplex<T>) -> Result<T> {
    check_dim(k, s)?;
    let row = |p: &[T]| {
        let mut r = p.to_vec();
        r.push(T::one());
        r
    };
    let mut rows = Vec::with_capacity(s.dim() + 1);
    rows.push(row(k));
    rows.extend(s.vertices.iter().map(|v| row(v)));
    Ok(Matrix::from_rows(&rows)?.det())
}

/// The bordered determinants `(a_1 .. a_n)` evaluated at `K`.
pub fn a_vector<T: Scalar>(k: &[T], s: &Simplex<T>) -> Result<Vec<T>> {
    check_dim(k, s)?;
    let n = s.dim();
    let order = n + 2;
    let mut rows = Vec::with_capacity(order);
    rows.push(vec![T::zero(); order]);
    rows.push(lifted_row(k));
    rows.extend(s.lifted.iter().cloned());
    let base = Matrix::from_rows(&rows)?;

    let two = T::from_f64(2.0);
    let mut border = vec![T::zero(); order];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        border.iter_mut().for_each(|e| *e = T::zero());
        border[0] = two * k[i];
        border[i + 1] = T::one();
        out.push(base.det_with_replaced_row(0, &border)?);
    }
    Ok(out)
}

fn degeneracy_scale(k: &[f64], s: &Simplex<f64>) -> f64 {
    let m = k.iter().fold(s.max_abs_coord(), |m, c| m.max(c.abs()));
    m.powi(s.dim() as i32)
}

/// Whether `V(K)` is zero relative to the coordinate scale.
pub fn is_degenerate(volume: f64, k: &[f64], s: &Simplex<f64>) -> bool {
    volume.abs() <= DEGENERACY_TOLERANCE * degeneracy_scale(k, s)
}

/// `K - center` of the sphere through `K` and the simplex vertices.
pub fn radial_vector(k: &[f64], s: &Simplex<f64>) -> Result<Vec<f64>> {
    let v = volume_det(k, s)?;
    if is_degenerate(v, k, s) {
        return Err(Error::DegenerateCircumsphere);
    }
    let a = a_vector(k, s)?;
    Ok(a.into_iter().map(|ai| ai / (2.0 * v)).collect())
}

/// Center and squared radius of the sphere through `K` and the simplex vertices.
pub fn circumsphere(k: &[f64], s: &Simplex<f64>) -> Result<(Point, f64)> {
    let r = radial_vector(k, s)?;
    let center = k.iter().zip(&r).map(|(x, d)| x - d).collect();
    let radius_sq = r.iter().map(|d| d * d).sum();
    Ok((Point::new(center), radius_sq))
}

/// The four 3×3 determinants describing the circle through three planar points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleCoefficients2D {
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CircleCoefficients2D {
    /// `(A / 2S, B / 2S)`; `None` for collinear points.
    pub fn center(&self) -> Option<[f64; 2]> {
        (self.s != 0.0).then(|| [self.a / (2.0 * self.s), self.b / (2.0 * self.s)])
    }

    pub fn radius_sq(&self) -> Option<f64> {
        (self.s != 0.0).then(|| {
            (self.a * self.a + self.b * self.b) / (4.0 * self.s * self.s) + self.c / self.s
        })
    }
}

pub fn coefficients_2d(k: [f64; 2], t: [f64; 2], u: [f64; 2]) -> CircleCoefficients2D {
    let pts = [k, t, u];
    let sq = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
    let det3 = |f: &dyn Fn([f64; 2]) -> [f64; 3]| {
        let rows: Vec<[f64; 3]> = pts.iter().map(|&p| f(p)).collect();
        Matrix::from_rows(&rows).expect("3x3").det()
    };
    CircleCoefficients2D {
        s: det3(&|p| [p[0], p[1], 1.0]),
        c: det3(&|p| [sq(p), p[0], p[1]]),
        b: -det3(&|p| [sq(p), p[0], 1.0]),
        a: det3(&|p| [sq(p), p[1], 1.0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(pts: &[&[f64]]) -> Simplex {
        Simplex::new(pts.iter().map(|p| Point::new(p.to_vec())).collect(), "s").unwrap()
    }

    /// Circumcenter from the equidistance system, solved by Cramer's rule on
    /// exact rationals. Independent of the bordered-determinant route.
    fn exact_center(points: &[&[f64]]) -> Vec<f64> {
        use num_traits::ToPrimitive;
        let n = points[0].len();
        let q = |v: f64| rational_from_f64(v);
        let rows: Vec<Vec<Rational>> = points[1..]
            .iter()
            .map(|p| (0..n).map(|i| (q(p[i]) - q(points[0][i])) * q(2.0)).collect())
            .collect();
        let rhs: Vec<Rational> = points[1..]
            .iter()
            .map(|p| {
                (0..n).fold(Rational::zero(), |acc, i| {
                    acc + q(p[i]) * q(p[i]) - q(points[0][i]) * q(points[0][i])
                })
            })
            .collect();
        let m = Matrix::from_rows(&rows).unwrap();
        let d = m.det_exact();
        (0..n)
            .map(|j| {
                let cols: Vec<Vec<Rational>> = rows
                    .iter()
                    .zip(&rhs)
                    .map(|(r, b)| {
                        let mut r = r.clone();
                        r[j] = b.clone();
                        r
                    })
                    .collect();
                (Matrix::from_rows(&cols).unwrap().det_exact() / &d)
                    .to_f64()
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn volume_examples() {
        let s = simplex(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(volume_det(&[0.0, 0.0], &s).unwrap(), 1.0);
        let col = Simplex::new_unchecked(vec![[1.0, 0.0].into(), [2.0, 0.0].into()], "c").unwrap();
        assert_eq!(volume_det(&[0.0, 0.0], &col).unwrap(), 0.0);

        // Cofactor oracle for rows (1,0,0,1), (-1,0,0,1), (0,1,0,1), (0,0,1,1): value 2.
        let s3 = simplex(&[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let rows: Vec<Vec<Rational>> = [[1, 0, 0, 1], [-1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        let oracle = Matrix::from_rows(&rows).unwrap().det_exact();
        assert_eq!(oracle, Rational::from_integer(2.into()));
        assert!((volume_det(&[1.0, 0.0, 0.0], &s3).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn a_vector_right_triangle() {
        let s = simplex(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let a = a_vector(&[0.0, 0.0], &s).unwrap();
        let v = volume_det(&[0.0, 0.0], &s).unwrap();
        assert!((a[0] / (2.0 * v) + 0.5).abs() < 1e-15);
        assert!((a[1] / (2.0 * v) + 0.5).abs() < 1e-15);

        let a = a_vector(&[1.0, 1.0], &s).unwrap();
        let v = volume_det(&[1.0, 1.0], &s).unwrap();
        assert!((a[0] - 2.0 * v * 0.5).abs() < 1e-14);
        assert!((a[1] - 2.0 * v * 0.5).abs() < 1e-14);
    }

    #[test]
    fn a_vector_at_sample_points() {
        let k = [0.0, 0.0, 2.0];
        let verts: [&[f64]; 3] = [&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]];
        let s = simplex(&verts);
        let center = exact_center(&[&k, verts[0], verts[1], verts[2]]);
        let r = radial_vector(&k, &s).unwrap();
        for i in 0..3 {
            assert!((r[i] - (k[i] - center[i])).abs() < 1e-12);
        }
        // equidistance system gives center (0, 0, 3/4)
        assert!(center[0].abs() < 1e-15 && center[1].abs() < 1e-15);
        assert!((center[2] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn radial_examples() {
        let s = simplex(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let r = radial_vector(&[0.0, 0.0], &s).unwrap();
        assert!((r[0] + 0.5).abs() < 1e-15 && (r[1] + 0.5).abs() < 1e-15);

        let s3 = simplex(&[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let r = radial_vector(&[1.0, 0.0, 0.0], &s3).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-14 && r[1].abs() < 1e-14 && r[2].abs() < 1e-14);

        let s = simplex(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let r = radial_vector(&[3.0, 4.0], &s).unwrap();
        let c = exact_center(&[&[3.0, 4.0], &[0.0, 0.0], &[1.0, 0.0]]);
        assert!((r[0] - (3.0 - c[0])).abs() < 1e-12);
        assert!((r[1] - (4.0 - c[1])).abs() < 1e-12);
    }

    #[test]
    fn radial_degenerate() {
        let s = simplex(&[&[1.0, 0.0], &[2.0, 0.0]]);
        assert_eq!(radial_vector(&[0.0, 0.0], &s), Err(Error::DegenerateCircumsphere));
        assert_eq!(radial_vector(&[5.0, 1e-14], &s), Err(Error::DegenerateCircumsphere));
    }

    #[test]
    fn circumsphere_examples() {
        let s = simplex(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let (c, r2) = circumsphere(&[0.0, 0.0], &s).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-15 && (c[1] - 0.5).abs() < 1e-15);
        assert!((r2 - 0.5).abs() < 1e-15);

        let s = simplex(&[&[1.0, 0.0], &[-1.0, 1.0]]);
        let (c, r2) = circumsphere(&[0.0, 0.0], &s).unwrap();
        // x² + y² + Dx + Ey + F = 0 through (0,0), (1,0), (-1,1): F = 0, D = -1, E = -3
        assert!((c[0] - 0.5).abs() < 1e-14 && (c[1] - 1.5).abs() < 1e-14);
        assert!((r2 - 2.5).abs() < 1e-14);

        let s3 = simplex(&[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let (c, r2) = circumsphere(&[1.0, 0.0, 0.0], &s3).unwrap();
        assert!(c.iter().all(|x| x.abs() < 1e-14));
        assert!((r2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coefficients_examples() {
        let c = coefficients_2d([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert_eq!((c.s, c.a, c.b, c.c), (1.0, 1.0, 1.0, 0.0));
        assert_eq!(c.center(), Some([0.5, 0.5]));
        assert!((c.radius_sq().unwrap() - 0.5).abs() < 1e-15);

        let c = coefficients_2d([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]);
        assert_eq!(c.s, 0.0);
        assert_eq!(c.center(), None);

        let c = coefficients_2d([0.0, 0.0], [2.0, 0.0], [0.0, 2.0]);
        assert_eq!(c.center(), Some([1.0, 1.0]));
    }

    #[test]
    fn coefficients_agree_with_circumsphere() {
        let k = [0.3, -1.2];
        let s = simplex(&[&[2.0, 0.5], &[-1.0, 1.7]]);
        let c = coefficients_2d(k, [2.0, 0.5], [-1.0, 1.7]);
        let (center, r2) = circumsphere(&k, &s).unwrap();
        let cc = c.center().unwrap();
        assert!((cc[0] - center[0]).abs() < 1e-12 && (cc[1] - center[1]).abs() < 1e-12);
        assert!((c.radius_sq().unwrap() - r2).abs() < 1e-11);
    }

    #[test]
    fn simplex_validation() {
        assert!(matches!(
            Simplex::new(vec![[1.0, 0.0].into(), [1.0, 0.0].into()], "dup"),
            Err(Error::DegenerateSimplex(_))
        ));
        assert!(matches!(
            Simplex::new(
                vec![[0.0, 0.0, 0.0].into(), [1.0, 1.0, 1.0].into(), [2.0, 2.0, 2.0].into()],
                "line"
            ),
            Err(Error::DegenerateSimplex(_))
        ));
        assert!(matches!(
            Simplex::new(vec![[0.0, 0.0, 0.0].into(), [1.0, 1.0, 1.0].into()], "short"),
            Err(Error::WrongVertexCount { .. })
        ));
        assert_eq!(
            Simplex::new(vec![[1.0].into()], "one").unwrap_err(),
            Error::DimensionOutOfRange(1)
        );
        let a = simplex(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = simplex(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert_eq!(SimplexPair::new(a.clone(), b).unwrap_err(), Error::IdenticalSimplexes);
        assert!(SimplexPair::new_unchecked(a.clone(), a).is_ok());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let s = simplex(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(
            a_vector(&[0.0, 0.0, 0.0], &s).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 3 }
        );
    }
}
