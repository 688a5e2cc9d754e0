//! Signature `{n, 1}` slices: the last coordinate is `i·t` with real `t`.
//!
//! Locus functions are evaluated in complex arithmetic over the lifted point
//! `(x_1 .. x_{n-1}, i·t)`. Squares are not conjugated, so the last coordinate
//! contributes `-t²` to every lifted row. For fixed `t` the real and imaginary
//! parts of a locus function are two real fields over `R^{n-1}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extract::{refine_segment, trace_2d, GridSpec, Polyline, RefineOptions, ScalarField};
use crate::locus::{a_vectors, dot, f_from, g_sumsq_from, AngleParam};
use crate::geometry::SimplexPair;

/// Which complexified locus function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudoKind {
    /// `Σ_{k<l} G_kl²`.
    GSumSq,
    H,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// A simplex pair with complex coordinates sliced at a fixed `t`.
#[derive(Debug, Clone)]
pub struct PseudoConfig {
    pub pair: SimplexPair<Complex64>,
    pub t: f64,
    pub angle: AngleParam,
}

impl PseudoConfig {
    pub fn new(pair: SimplexPair<Complex64>, t: f64, angle: AngleParam) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidAngle(format!("slice parameter t = {t} is not finite")));
        }
        Ok(Self { pair, t, angle })
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    /// Vertices that do not have the form `(real, .., real, i·real)`.
    /// Such input is still evaluated.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in [&self.pair.first, &self.pair.second] {
            for (k, v) in s.vertices().iter().enumerate() {
                let n = v.len();
                let spatial_complex = v[..n - 1].iter().any(|c| c.im != 0.0);
                let last_mixed = v[n - 1].re != 0.0 && v[n - 1].im != 0.0;
                if spatial_complex || last_mixed {
                    out.push(format!(
                        "simplex `{}` vertex {}: expected real spatial coordinates and a purely real or imaginary last coordinate",
                        s.label(),
                        k + 1
                    ));
                }
            }
        }
        out
    }

    /// `(r_1 .. r_{n-1}, i·t)`.
    pub fn lift(&self, r_spatial: &[f64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if r_spatial.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: r_spatial.len(),
            });
        }
        let mut p: Vec<Complex64> = r_spatial.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        p.push(Complex64::new(0.0, self.t));
        Ok(p)
    }

    fn a_vectors(&self, r_spatial: &[f64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        a_vectors(&self.pair, &self.lift(r_spatial)?)
    }

    /// Value of `kind` at the lifted point, plus the Hermitian scale
    /// `‖a_S‖^p ‖a_V‖^p` (p = 1 for H, 2 otherwise).
    pub fn value_and_scale(&self, kind: PseudoKind, r_spatial: &[f64]) -> Result<(Complex64, f64)> {
        let (s, v) = self.a_vectors(r_spatial)?;
        let ns = hermitian_norm_sq(&s).sqrt();
        let nv = hermitian_norm_sq(&v).sqrt();
        Ok(match kind {
            PseudoKind::GSumSq => (g_sumsq_from(&s, &v), ns * ns * nv * nv),
            PseudoKind::H => (dot(&s, &v), ns * nv),
            PseudoKind::F => (f_from(&s, &v, self.angle.sin_sq()), ns * ns * nv * nv),
        })
    }
}

fn hermitian_norm_sq(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum()
}

pub fn eval_g_sumsq_complex(config: &PseudoConfig, r_spatial: &[f64]) -> Result<Complex64> {
    Ok(config.value_and_scale(PseudoKind::GSumSq, r_spatial)?.0)
}

pub fn eval_h_complex(config: &PseudoConfig, r_spatial: &[f64]) -> Result<Complex64> {
    Ok(config.value_and_scale(PseudoKind::H, r_spatial)?.0)
}

/// `F` with `sin²α` taken from the configured angle (complex for `ComplexGeneral`).
pub fn eval_f_complex(config: &PseudoConfig, r_spatial: &[f64]) -> Result<Complex64> {
    Ok(config.value_and_scale(PseudoKind::F, r_spatial)?.0)
}

/// One real part of a complexified locus function, as a field over the spatial slice.
pub struct PseudoField<'a> {
    pub config: &'a PseudoConfig,
    pub kind: PseudoKind,
    pub part: Part,
}

impl ScalarField for PseudoField<'_> {
    fn dim(&self) -> usize {
        self.config.dim() - 1
    }

    fn sample(&self, p: &[f64]) -> (f64, f64) {
        match self.config.value_and_scale(self.kind, p) {
            Ok((z, scale)) => (
                match self.part {
                    Part::Re => z.re,
                    Part::Im => z.im,
                },
                scale,
            ),
            Err(_) => (f64::NAN, 0.0),
        }
    }
}

/// A point where both the real and the imaginary part vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct JointZero {
    pub point: [f64; 2],
    /// `|value| / scale` of the complex value.
    pub residual: f64,
}

/// Intersections of `{Re = 0}` and `{Im = 0}` on a 2D slice: the real-part
/// curve is traced, and sign changes of the imaginary part along it are refined.
pub fn joint_zeros(
    config: &PseudoConfig,
    kind: PseudoKind,
    grid: &GridSpec,
    opts: &RefineOptions,
) -> Result<Vec<JointZero>> {
    let re = PseudoField { config, kind, part: Part::Re };
    let im = PseudoField { config, kind, part: Part::Im };
    let curves: Vec<Polyline> = trace_2d(&re, grid, opts)?;
    let mut out = Vec::new();
    for c in &curves {
        let n = c.points.len();
        let segments = if c.closed { n } else { n - 1 };
        for k in 0..segments {
            let a = c.points[k];
            let b = c.points[(k + 1) % n];
            let (fa, fb) = (im.value(&a), im.value(&b));
            if fa == 0.0 || (fa > 0.0) != (fb > 0.0) {
                if let Ok(r) = refine_segment(&im, &a, &b, opts) {
                    let (z, scale) = config.value_and_scale(kind, &r.point)?;
                    out.push(JointZero {
                        point: [r.point[0], r.point[1]],
                        residual: crate::extract::normalized_residual(z.norm(), scale),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Simplex};
    use crate::locus::{eval_f, eval_g_sumsq, eval_h};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simplex(pts: &[[Complex64; 3]], label: &str) -> Simplex<Complex64> {
        Simplex::new_unchecked(pts.iter().map(|p| Point::new(p.to_vec())).collect(), label).unwrap()
    }

    /// Two triangles with imaginary last coordinates on the second.
    fn pseudo_pair() -> SimplexPair<Complex64> {
        SimplexPair::new(
            simplex(
                &[
                    [c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                    [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                    [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                ],
                "RST",
            ),
            simplex(
                &[
                    [c(-2.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
                    [c(0.0, 0.0), c(-1.0, 0.0), c(0.0, -1.0)],
                    [c(2.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
                ],
                "UVW",
            ),
        )
        .unwrap()
    }

    fn conjugated(pair: &SimplexPair<Complex64>) -> SimplexPair<Complex64> {
        let conj = |s: &Simplex<Complex64>| {
            Simplex::new_unchecked(
                s.vertices()
                    .iter()
                    .map(|v| Point::new(v.iter().map(|z| z.conj()).collect()))
                    .collect(),
                s.label(),
            )
            .unwrap()
        };
        SimplexPair::new_unchecked(conj(&pair.first), conj(&pair.second)).unwrap()
    }

    fn real_pair() -> SimplexPair {
        SimplexPair::from_coords(
            &[&[-1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]],
            &[&[-2.0, 0.0, 1.0], &[0.0, -1.0, -1.0], &[2.0, 0.0, 1.0]],
        )
        .unwrap()
    }

    #[test]
    fn real_embedding_at_t_zero() {
        let real = real_pair();
        let angle = AngleParam::from_alpha(std::f64::consts::PI / 6.0).unwrap();
        let cfg = PseudoConfig::new(real.to_complex(), 0.0, angle).unwrap();
        for r in [[0.3, -0.7], [1.5, 2.0], [-2.2, 0.1]] {
            let p = [r[0], r[1], 0.0];
            let g = eval_g_sumsq_complex(&cfg, &r).unwrap();
            assert_eq!(g.im, 0.0);
            let gr = eval_g_sumsq(&real, &p).unwrap();
            assert!((g.re - gr).abs() <= 1e-12 * gr.abs());
            let h = eval_h_complex(&cfg, &r).unwrap();
            assert_eq!(h.im, 0.0);
            assert!((h.re - eval_h(&real, &p).unwrap()).abs() <= 1e-12 * h.re.abs());
            let f = eval_f_complex(&cfg, &r).unwrap();
            assert_eq!(f.im, 0.0);
            let fr = eval_f(&real, angle, &p).unwrap();
            assert!((f.re - fr).abs() <= 1e-12 * fr.abs());
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let pair = pseudo_pair();
        let angle = AngleParam::complex(0.25, 0.0).unwrap();
        let cfg = PseudoConfig::new(pair.clone(), 0.37, angle).unwrap();
        let mirror = PseudoConfig::new(conjugated(&pair), -0.37, angle).unwrap();
        for r in [[0.2, 0.4], [-1.1, 2.5], [3.0, -0.5]] {
            for kind in [PseudoKind::GSumSq, PseudoKind::H, PseudoKind::F] {
                let (a, scale) = cfg.value_and_scale(kind, &r).unwrap();
                let (b, _) = mirror.value_and_scale(kind, &r).unwrap();
                assert!((a.conj() - b).norm() <= 1e-12 * scale, "{kind:?}");
            }
        }
    }

    #[test]
    fn slice_value_is_finite() {
        let cfg = PseudoConfig::new(pseudo_pair(), 0.25, AngleParam::Orthogonal).unwrap();
        let h = eval_h_complex(&cfg, &[0.0, 0.0]).unwrap();
        assert!(h.re.is_finite() && h.im.is_finite());
    }

    #[test]
    fn imaginary_sin_sq_on_real_geometry() {
        let real = real_pair();
        let b = 0.3;
        let cfg = PseudoConfig::new(real.to_complex(), 0.0, AngleParam::complex(0.25, b).unwrap()).unwrap();
        for r in [[0.3, -0.7], [1.5, 2.0]] {
            let p = [r[0], r[1], 0.0];
            let (s, v) = crate::locus::a_vectors(&real, &p).unwrap();
            let ss: f64 = s.iter().map(|x| x * x).sum();
            let vv: f64 = v.iter().map(|x| x * x).sum();
            let f = eval_f_complex(&cfg, &r).unwrap();
            assert!((f.im + b * ss * vv).abs() <= 1e-12 * ss * vv);
        }
    }

    #[test]
    fn warnings_for_mixed_coordinates() {
        assert!(PseudoConfig::new(pseudo_pair(), 0.0, AngleParam::Orthogonal)
            .unwrap()
            .warnings()
            .is_empty());
        let odd = SimplexPair::new_unchecked(
            simplex(
                &[
                    [c(-1.0, 0.5), c(0.0, 0.0), c(0.0, 0.0)],
                    [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)],
                    [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                ],
                "odd",
            ),
            pseudo_pair().second,
        )
        .unwrap();
        let cfg = PseudoConfig::new(odd, 0.0, AngleParam::Orthogonal).unwrap();
        assert_eq!(cfg.warnings().len(), 2);
    }

    #[test]
    fn lift_checks_dimension() {
        let cfg = PseudoConfig::new(pseudo_pair(), 1.0, AngleParam::Orthogonal).unwrap();
        assert_eq!(cfg.lift(&[1.0, 2.0]).unwrap()[2], c(0.0, 1.0));
        assert!(cfg.lift(&[1.0]).is_err());
        assert!(PseudoConfig::new(pseudo_pair(), f64::NAN, AngleParam::Orthogonal).is_err());
    }
}
