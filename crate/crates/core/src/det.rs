//! Determinants of the small bordered matrices every locus formula is built from.
//!
//! Two arithmetic routes are provided: partial-pivoted elimination over any
//! [`Scalar`] (real or complex floats) and fraction-free Bareiss elimination
//! over arbitrary-precision rationals. Orders are capped at [`MAX_ORDER`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest supported matrix order.
pub const MAX_ORDER: usize = 16;

/// Exact rational scalar; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("matrix order {0} exceeds the supported maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("row index {index} out of range for order {order}")]
    RowOutOfRange { index: usize, order: usize },
}

/// Field scalar usable by the floating elimination kernel.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    /// Pivot magnitude.
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    order: usize,
    entries: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self, DetError> {
        let order = rows.len();
        if order == 0 {
            return Err(DetError::Empty);
        }
        if order > MAX_ORDER {
            return Err(DetError::TooLarge(order));
        }
        let mut entries = Vec::with_capacity(order * order);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != order {
                return Err(DetError::NotSquare {
                    rows: order,
                    row,
                    cols: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Ok(Self { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.order + j]
    }

    /// Copy of the matrix with one row replaced.
    pub fn with_replaced_row(&self, row_index: usize, new_row: &[T]) -> Result<Self, DetError> {
        if row_index >= self.order {
            return Err(DetError::RowOutOfRange {
                index: row_index,
                order: self.order,
            });
        }
        if new_row.len() != self.order {
            return Err(DetError::DimensionMismatch {
                expected: self.order,
                got: new_row.len(),
            });
        }
        let mut out = self.clone();
        out.entries[row_index * self.order..(row_index + 1) * self.order].clone_from_slice(new_row);
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.order {
            self.entries.swap(a * self.order + j, b * self.order + j);
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn identity(order: usize) -> Result<Self, DetError> {
        if order == 0 {
            return Err(DetError::Empty);
        }
        if order > MAX_ORDER {
            return Err(DetError::TooLarge(order));
        }
        let mut entries = vec![T::zero(); order * order];
        for i in 0..order {
            entries[i * order + i] = T::one();
        }
        Ok(Self { order, entries })
    }

    pub fn det(&self) -> T {
        let mut scratch = self.entries.clone();
        det_in_place(&mut scratch, self.order)
    }

    pub fn det_with_replaced_row(&self, row_index: usize, new_row: &[T]) -> Result<T, DetError> {
        Ok(self.with_replaced_row(row_index, new_row)?.det())
    }
}

impl Matrix<Rational> {
    pub fn det_exact(&self) -> Rational {
        det_bareiss(self.order, &self.entries)
    }

    pub fn det_exact_with_replaced_row(
        &self,
        row_index: usize,
        new_row: &[Rational],
    ) -> Result<Rational, DetError> {
        Ok(self.with_replaced_row(row_index, new_row)?.det_exact())
    }
}

/// Determinant of the row-major `k × k` block in `a`, destroying it.
///
/// Partial pivoting by [`Scalar::magnitude`]; an all-zero pivot column yields zero.
pub fn det_in_place<T: Scalar>(a: &mut [T], k: usize) -> T {
    debug_assert_eq!(a.len(), k * k);
    let mut det = T::one();
    for col in 0..k {
        let mut pivot = col;
        let mut best = a[col * k + col].magnitude();
        for r in col + 1..k {
            let m = a[r * k + col].magnitude();
            if m > best {
                best = m;
                pivot = r;
            }
        }
        if best == 0.0 {
            return T::zero();
        }
        if pivot != col {
            for j in col..k {
                a.swap(col * k + j, pivot * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det = det * p;
        for r in col + 1..k {
            let factor = a[r * k + col] / p;
            if factor.magnitude() == 0.0 {
                continue;
            }
            for j in col + 1..k {
                let v = a[col * k + j];
                a[r * k + j] = a[r * k + j] - factor * v;
            }
        }
    }
    det
}

/// Solves `m · x = rhs` by partial-pivoted elimination. `None` when singular.
pub fn solve<T: Scalar>(m: &Matrix<T>, rhs: &[T]) -> Option<Vec<T>> {
    let k = m.order;
    if rhs.len() != k {
        return None;
    }
    let w = k + 1;
    let mut a = Vec::with_capacity(k * w);
    for (i, b) in rhs.iter().enumerate() {
        a.extend_from_slice(m.row(i));
        a.push(*b);
    }
    for col in 0..k {
        let pivot = (col..k).max_by(|&x, &y| {
            a[x * w + col]
                .magnitude()
                .total_cmp(&a[y * w + col].magnitude())
        })?;
        if a[pivot * w + col].magnitude() == 0.0 {
            return None;
        }
        if pivot != col {
            for j in 0..w {
                a.swap(col * w + j, pivot * w + j);
            }
        }
        let p = a[col * w + col];
        for r in 0..k {
            if r == col {
                continue;
            }
            let factor = a[r * w + col] / p;
            for j in col..w {
                let v = a[col * w + j];
                a[r * w + j] = a[r * w + j] - factor * v;
            }
        }
    }
    Some((0..k).map(|i| a[i * w + k] / a[i * w + i]).collect())
}

/// Fraction-free elimination: each row is cleared of denominators, Bareiss runs
/// over integers, and the row multipliers are divided back out.
fn det_bareiss(k: usize, entries: &[Rational]) -> Rational {
    let mut scale = BigInt::one();
    let mut a: Vec<BigInt> = Vec::with_capacity(k * k);
    for i in 0..k {
        let row = &entries[i * k..(i + 1) * k];
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        for q in row {
            a.push(q.numer() * (&lcm / q.denom()));
        }
        scale *= lcm;
    }

    let mut sign = false;
    let mut prev = BigInt::one();
    for col in 0..k {
        if a[col * k + col].is_zero() {
            match (col + 1..k).find(|&r| !a[r * k + col].is_zero()) {
                Some(r) => {
                    for j in 0..k {
                        a.swap(col * k + j, r * k + j);
                    }
                    sign = !sign;
                }
                None => return Rational::zero(),
            }
        }
        for r in col + 1..k {
            for j in col + 1..k {
                let v = &a[r * k + j] * &a[col * k + col] - &a[r * k + col] * &a[col * k + j];
                a[r * k + j] = v / &prev;
            }
            a[r * k + col] = BigInt::zero();
        }
        prev = a[col * k + col].clone();
    }
    let det = a[k * k - 1].clone();
    let det = if sign { -det } else { det };
    Rational::new(det, scale)
}

/// Exact conversion of a finite float. Non-finite input maps to zero.
pub fn rational_from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// Sign of an exact rational as -1, 0 or 1.
pub fn rational_sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Laplace expansion along the first row; the independent oracle.
    fn cofactor(m: &[Vec<Rational>]) -> Rational {
        let k = m.len();
        if k == 1 {
            return m[0][0].clone();
        }
        let mut acc = Rational::zero();
        for j in 0..k {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn identity_three() {
        assert_eq!(Matrix::<f64>::identity(3).unwrap().det(), 1.0);
    }

    #[test]
    fn two_by_two() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert!((m.det() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn hilbert_three_exact() {
        let rows = vec![
            vec![q(1, 1), q(1, 2), q(1, 3)],
            vec![q(1, 2), q(1, 3), q(1, 4)],
            vec![q(1, 3), q(1, 4), q(1, 5)],
        ];
        let oracle = cofactor(&rows);
        assert_eq!(oracle, q(1, 2160));
        let m = Matrix::from_rows(&rows).unwrap();
        assert_eq!(m.det_exact(), oracle);
        let f = Matrix::from_rows(&[
            [1.0, 0.5, 1.0 / 3.0],
            [0.5, 1.0 / 3.0, 0.25],
            [1.0 / 3.0, 0.25, 0.2],
        ])
        .unwrap();
        assert!((f.det() - 1.0 / 2160.0).abs() < 1e-15);
    }

    #[test]
    fn replaced_row_examples() {
        let id2 = Matrix::<f64>::identity(2).unwrap();
        assert_eq!(id2.det_with_replaced_row(0, &[0.0, 1.0]).unwrap(), 0.0);
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert!((m.det_with_replaced_row(1, &[3.0, 4.0]).unwrap() + 2.0).abs() < 1e-15);
        let id3 = Matrix::<f64>::identity(3).unwrap();
        assert_eq!(id3.det_with_replaced_row(0, &[2.0, 0.0, 0.0]).unwrap(), 2.0);
        // original untouched
        assert_eq!(id3.det(), 1.0);
    }

    #[test]
    fn replaced_row_errors() {
        let id2 = Matrix::<f64>::identity(2).unwrap();
        assert_eq!(
            id2.det_with_replaced_row(0, &[1.0]),
            Err(DetError::DimensionMismatch { expected: 2, got: 1 })
        );
        assert_eq!(
            id2.det_with_replaced_row(2, &[1.0, 0.0]),
            Err(DetError::RowOutOfRange { index: 2, order: 2 })
        );
    }

    #[test]
    fn construction_errors() {
        let empty: [[f64; 0]; 0] = [];
        assert_eq!(Matrix::from_rows(&empty), Err(DetError::Empty));
        assert!(matches!(
            Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(DetError::NotSquare { .. })
        ));
        assert_eq!(
            Matrix::<f64>::identity(MAX_ORDER + 1),
            Err(DetError::TooLarge(MAX_ORDER + 1))
        );
        assert!(Matrix::<f64>::identity(MAX_ORDER).is_ok());
    }

    #[test]
    fn singular_is_zero() {
        let m = Matrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]).unwrap();
        assert_eq!(m.det(), 0.0);
        let e = Matrix::from_rows(&[
            [q(1, 1), q(2, 1)],
            [q(2, 1), q(4, 1)],
        ])
        .unwrap();
        assert!(e.det_exact().is_zero());
    }

    #[test]
    fn exact_needs_row_swap() {
        let e = Matrix::from_rows(&[
            [q(0, 1), q(1, 1), q(0, 1)],
            [q(1, 1), q(0, 1), q(0, 1)],
            [q(0, 1), q(0, 1), q(3, 7)],
        ])
        .unwrap();
        assert_eq!(e.det_exact(), q(-3, 7));
    }

    #[test]
    fn complex_det() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let m = Matrix::from_rows(&[[i, one], [one, i]]).unwrap();
        // i*i - 1 = -2
        let d = m.det();
        assert!((d - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_small_system() {
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let x = solve(&m, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        let s = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(solve(&s, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn rational_conversion_is_exact() {
        assert_eq!(rational_from_f64(0.75), q(3, 4));
        assert_eq!(rational_sign(&q(-1, 3)), -1);
        assert_eq!(rational_sign(&Rational::zero()), 0);
    }
}
