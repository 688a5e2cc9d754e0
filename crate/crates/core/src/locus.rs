//! Tangency (`G`), orthogonality (`H`) and fixed-angle (`F`) locus functions.
//!
//! With `a_S(r)` and `a_V(r)` the a-vectors of the two simplexes at `r`:
//!
//! ```text
//! G_ij = a_S,i a_V,j - a_S,j a_V,i
//! H    = Σ a_S,i a_V,i
//! F    = Σ_{i<j} G_ij² - sin²α |a_S|² |a_V|²
//! ```
//!
//! All three are polynomials and are defined everywhere; only the angle reading
//! needs non-degenerate circumspheres.

use num_complex::Complex64;

use crate::det::Scalar;
use crate::error::{Error, Result};
use crate::extract::ScalarField;
use crate::geometry::{a_vector, is_degenerate, volume_det, SimplexPair};

/// The intersection-angle constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleParam {
    /// α ∈ {0, π}.
    Tangent,
    /// α = π/2.
    Orthogonal,
    General { cos_sq_alpha: f64 },
    /// sin²α = a + ib, for pseudo-Euclidean slices.
    ComplexGeneral { sin_sq_alpha: Complex64 },
}

impl AngleParam {
    pub fn general(cos_sq_alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&cos_sq_alpha) {
            return Err(Error::InvalidAngle(format!(
                "cos²α = {cos_sq_alpha} is outside [0, 1]"
            )));
        }
        Ok(Self::General { cos_sq_alpha })
    }

    /// General angle from α in radians.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        let c = alpha.cos();
        Self::general((c * c).clamp(0.0, 1.0))
    }

    pub fn complex(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidAngle(format!("sin²α = {a} + {b}i is not finite")));
        }
        Ok(Self::ComplexGeneral {
            sin_sq_alpha: Complex64::new(a, b),
        })
    }

    pub fn sin_sq(&self) -> Complex64 {
        match *self {
            Self::Tangent => Complex64::new(0.0, 0.0),
            Self::Orthogonal => Complex64::new(1.0, 0.0),
            Self::General { cos_sq_alpha } => Complex64::new(1.0 - cos_sq_alpha, 0.0),
            Self::ComplexGeneral { sin_sq_alpha } => sin_sq_alpha,
        }
    }

    /// Target cos²α for real angles.
    pub fn cos_sq(&self) -> Option<f64> {
        match *self {
            Self::Tangent => Some(1.0),
            Self::Orthogonal => Some(0.0),
            Self::General { cos_sq_alpha } => Some(cos_sq_alpha),
            Self::ComplexGeneral { .. } => None,
        }
    }
}

/// Which locus polynomial to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusKind {
    /// `G_ij` with 1-based `i < j`.
    G { i: usize, j: usize },
    /// `Σ_{i<j} G_ij²`.
    GSumSq,
    H,
    F,
}

/// A locus polynomial bound to a simplex pair.
#[derive(Debug, Clone)]
pub struct LocusFunction<T: Scalar = f64> {
    pair: SimplexPair<T>,
    angle: AngleParam,
    kind: LocusKind,
}

impl<T: Scalar> LocusFunction<T> {
    pub fn new(pair: SimplexPair<T>, angle: AngleParam, kind: LocusKind) -> Result<Self> {
        let n = pair.dim();
        match (kind, angle) {
            (LocusKind::G { i, j }, AngleParam::Tangent) => {
                if !(1 <= i && i < j && j <= n) {
                    return Err(Error::InvalidLocus(format!(
                        "G_{i}{j} needs 1 <= i < j <= {n}"
                    )));
                }
            }
            (LocusKind::GSumSq, AngleParam::Tangent)
            | (LocusKind::H, AngleParam::Orthogonal)
            | (LocusKind::F, AngleParam::General { .. })
            | (LocusKind::F, AngleParam::ComplexGeneral { .. }) => {}
            (k, a) => {
                return Err(Error::InvalidLocus(format!(
                    "{k:?} is not consistent with angle {a:?}"
                )))
            }
        }
        Ok(Self { pair, angle, kind })
    }

    pub fn pair(&self) -> &SimplexPair<T> {
        &self.pair
    }

    pub fn angle(&self) -> AngleParam {
        self.angle
    }

    pub fn kind(&self) -> LocusKind {
        self.kind
    }

    pub fn a_vectors(&self, r: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        a_vectors(&self.pair, r)
    }
}

impl LocusFunction<f64> {
    /// The locus value and its scale `|a_S|^p |a_V|^p` (p = 1 for G/H, 2 for Σ G² and F).
    pub fn value_and_scale(&self, r: &[f64]) -> Result<(f64, f64)> {
        let (s, v) = self.a_vectors(r)?;
        let ns = norm_sq(&s).sqrt();
        let nv = norm_sq(&v).sqrt();
        Ok(match self.kind {
            LocusKind::G { i, j } => (g_from(&s, &v, i - 1, j - 1), ns * nv),
            LocusKind::GSumSq => (g_sumsq_from(&s, &v), ns * ns * nv * nv),
            LocusKind::H => (dot(&s, &v), ns * nv),
            LocusKind::F => {
                let sin_sq = 1.0 - self.angle.cos_sq().unwrap_or(0.0);
                (f_from(&s, &v, sin_sq), ns * ns * nv * nv)
            }
        })
    }

    pub fn eval(&self, r: &[f64]) -> Result<f64> {
        Ok(self.value_and_scale(r)?.0)
    }
}

impl ScalarField for LocusFunction<f64> {
    fn dim(&self) -> usize {
        self.pair.dim()
    }

    fn sample(&self, p: &[f64]) -> (f64, f64) {
        self.value_and_scale(p).unwrap_or((f64::NAN, 0.0))
    }
}

pub fn a_vectors<T: Scalar>(pair: &SimplexPair<T>, r: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    Ok((a_vector(r, &pair.first)?, a_vector(r, &pair.second)?))
}

pub(crate) fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub(crate) fn g_from<T: Scalar>(s: &[T], v: &[T], i: usize, j: usize) -> T {
    s[i] * v[j] - s[j] * v[i]
}

pub(crate) fn g_sumsq_from<T: Scalar>(s: &[T], v: &[T]) -> T {
    let n = s.len();
    let mut acc = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            let g = g_from(s, v, i, j);
            acc = acc + g * g;
        }
    }
    acc
}

pub(crate) fn f_from<T: Scalar>(s: &[T], v: &[T], sin_sq: T) -> T {
    g_sumsq_from(s, v) - sin_sq * dot(s, s) * dot(v, v)
}

/// Fixed-angle locus `F` at `r`. Tangent/orthogonal angles map to sin²α = 0 / 1.
pub fn eval_f(pair: &SimplexPair, angle: AngleParam, r: &[f64]) -> Result<f64> {
    let sin_sq = match angle {
        AngleParam::ComplexGeneral { .. } => {
            return Err(Error::InvalidAngle(
                "complex sin²α needs the pseudo-Euclidean evaluator".into(),
            ))
        }
        a => a.sin_sq().re,
    };
    let (s, v) = a_vectors(pair, r)?;
    Ok(f_from(&s, &v, sin_sq))
}

/// Tangency determinant `G_ij` at `r`, 1-based `i < j`.
pub fn eval_g(pair: &SimplexPair, i: usize, j: usize, r: &[f64]) -> Result<f64> {
    let n = pair.dim();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidLocus(format!("G_{i}{j} needs 1 <= i < j <= {n}")));
    }
    let (s, v) = a_vectors(pair, r)?;
    Ok(g_from(&s, &v, i - 1, j - 1))
}

pub fn eval_g_sumsq(pair: &SimplexPair, r: &[f64]) -> Result<f64> {
    let (s, v) = a_vectors(pair, r)?;
    Ok(g_sumsq_from(&s, &v))
}

/// Orthogonality locus `H` at `r`.
pub fn eval_h(pair: &SimplexPair, r: &[f64]) -> Result<f64> {
    let (s, v) = a_vectors(pair, r)?;
    Ok(dot(&s, &v))
}

/// Squared cosine of the angle between the two radial vectors at `r`.
pub fn angle_cos_sq(pair: &SimplexPair, r: &[f64]) -> Result<f64> {
    for s in [&pair.first, &pair.second] {
        let v = volume_det(r, s)?;
        if is_degenerate(v, r, s) {
            return Err(Error::DegenerateCircumsphere);
        }
    }
    let (s, v) = a_vectors(pair, r)?;
    let ss = norm_sq(&s);
    let vv = norm_sq(&v);
    if ss == 0.0 || vv == 0.0 {
        return Err(Error::ZeroRadialVector);
    }
    let d = dot(&s, &v);
    Ok((d * d / (ss * vv)).clamp(0.0, 1.0))
}

/// `(Σx²)(Σy²) − (Σxy)² − Σ_{i<j} (x_i y_j − x_j y_i)²`, identically zero.
pub fn lagrange_residual(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let d = dot(x, y);
    Ok(norm_sq(x) * norm_sq(y) - d * d - g_sumsq_from(x, y))
}
