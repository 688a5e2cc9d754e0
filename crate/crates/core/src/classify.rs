//! Degenerate planar configurations of two segments `TU` and `VW`.
//!
//! Coordinates that are dyadic rationals with small denominators (integers,
//! halves, quarters, ...) are classified with exact rational predicates. All
//! other input falls back to floating predicates with a relative tolerance.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::det::{rational_from_f64, Rational};
use crate::error::{Error, Result};
use crate::geometry::SimplexPair;

/// Relative tolerance of the floating fallback.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Largest denominator exponent (`2^k`) treated as exact input.
const EXACT_DENOMINATOR_BITS: i32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigurationClass {
    pub concyclic_tuvw: bool,
    pub parallel_tu_vw: bool,
    pub rectangle: bool,
    pub bilateral_trapezium: bool,
    pub vw_on_perp_bisector_of_tu: bool,
    pub tu_on_perp_bisector_of_vw: bool,
    pub diagonals_of_cyclic_quadrangle: bool,
    /// Acute angle between the lines `TU` and `VW`, radians in `[0, π/2]`.
    pub angle_between_segments: f64,
    /// Whether the exact predicates were used.
    pub exact: bool,
}

impl ConfigurationClass {
    /// `(name, value)` for every boolean flag, in a fixed order.
    pub fn flags(&self) -> [(&'static str, bool); 7] {
        [
            ("concyclic_tuvw", self.concyclic_tuvw),
            ("parallel_tu_vw", self.parallel_tu_vw),
            ("rectangle", self.rectangle),
            ("bilateral_trapezium", self.bilateral_trapezium),
            ("vw_on_perp_bisector_of_tu", self.vw_on_perp_bisector_of_tu),
            ("tu_on_perp_bisector_of_vw", self.tu_on_perp_bisector_of_vw),
            ("diagonals_of_cyclic_quadrangle", self.diagonals_of_cyclic_quadrangle),
        ]
    }
}

/// Raw predicate polynomials with their degrees.
struct Predicates<Q> {
    incircle: Q,
    cross_tu_vw: Q,
    len_diff: Q,
    v_bisector_tu: Q,
    w_bisector_tu: Q,
    t_bisector_vw: Q,
    u_bisector_vw: Q,
    orient_tuv: Q,
    orient_tuw: Q,
    orient_vwt: Q,
    orient_vwu: Q,
}

fn predicates<Q>(p: &[[Q; 2]; 4]) -> Predicates<Q>
where
    Q: Clone + Add<Output = Q> + Sub<Output = Q> + Mul<Output = Q> + Neg<Output = Q>,
{
    let [t, u, v, w] = p;
    let sub = |a: &[Q; 2], b: &[Q; 2]| [a[0].clone() - b[0].clone(), a[1].clone() - b[1].clone()];
    let cross = |a: &[Q; 2], b: &[Q; 2]| a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
    let dot = |a: &[Q; 2], b: &[Q; 2]| a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone();
    let orient = |a: &[Q; 2], b: &[Q; 2], c: &[Q; 2]| cross(&sub(b, a), &sub(c, a));
    let dist_sq = |a: &[Q; 2], b: &[Q; 2]| {
        let d = sub(a, b);
        dot(&d, &d)
    };

    // incircle as a 3x3 determinant relative to T
    let rel = [sub(u, t), sub(v, t), sub(w, t)];
    let lift = |d: &[Q; 2]| dot(d, d);
    let (a, b, c) = (&rel[0], &rel[1], &rel[2]);
    let incircle = a[0].clone() * (b[1].clone() * lift(c) - lift(b) * c[1].clone())
        - a[1].clone() * (b[0].clone() * lift(c) - lift(b) * c[0].clone())
        + lift(a) * (b[0].clone() * c[1].clone() - b[1].clone() * c[0].clone());

    let tu = sub(u, t);
    let vw = sub(w, v);
    Predicates {
        incircle,
        cross_tu_vw: cross(&tu, &vw),
        len_diff: dot(&tu, &tu) - dot(&vw, &vw),
        v_bisector_tu: dist_sq(v, t) - dist_sq(v, u),
        w_bisector_tu: dist_sq(w, t) - dist_sq(w, u),
        t_bisector_vw: dist_sq(t, v) - dist_sq(t, w),
        u_bisector_vw: dist_sq(u, v) - dist_sq(u, w),
        orient_tuv: orient(t, u, v),
        orient_tuw: orient(t, u, w),
        orient_vwt: orient(v, w, t),
        orient_vwu: orient(v, w, u),
    }
}

fn is_exact_input(c: f64) -> bool {
    let scaled = c * f64::from(1 << EXACT_DENOMINATOR_BITS);
    c.is_finite() && c.abs() < 2f64.powi(40) && scaled.fract() == 0.0
}

/// Classifies a planar pair `(T, U), (V, W)`.
pub fn classify_2d(pair: &SimplexPair) -> Result<ConfigurationClass> {
    if pair.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: pair.dim(),
        });
    }
    let pts: Vec<[f64; 2]> = pair
        .first
        .vertices()
        .iter()
        .chain(pair.second.vertices())
        .map(|p| [p[0], p[1]])
        .collect();
    let pts: [[f64; 2]; 4] = [pts[0], pts[1], pts[2], pts[3]];
    let exact = pts.iter().flatten().all(|&c| is_exact_input(c));

    // signs of the predicates: -1, 0, 1
    let signs: Vec<i32> = if exact {
        let q = pts.map(|p| p.map(rational_from_f64));
        let p = predicates(&q);
        let sign = |x: &Rational| {
            if x.is_zero() {
                0
            } else if *x > Rational::zero() {
                1
            } else {
                -1
            }
        };
        [
            &p.incircle,
            &p.cross_tu_vw,
            &p.len_diff,
            &p.v_bisector_tu,
            &p.w_bisector_tu,
            &p.t_bisector_vw,
            &p.u_bisector_vw,
            &p.orient_tuv,
            &p.orient_tuw,
            &p.orient_vwt,
            &p.orient_vwu,
        ]
        .iter()
        .map(|x| sign(x))
        .collect()
    } else {
        let t = pts[0];
        let m = pts
            .iter()
            .flat_map(|p| [p[0] - t[0], p[1] - t[1]])
            .fold(0.0_f64, |m, c| m.max(c.abs()))
            .max(f64::MIN_POSITIVE);
        let p = predicates(&pts);
        let sign = |x: f64, degree: i32| {
            if x.abs() <= FLOAT_TOLERANCE * m.powi(degree) {
                0
            } else if x > 0.0 {
                1
            } else {
                -1
            }
        };
        vec![
            sign(p.incircle, 4),
            sign(p.cross_tu_vw, 2),
            sign(p.len_diff, 2),
            sign(p.v_bisector_tu, 2),
            sign(p.w_bisector_tu, 2),
            sign(p.t_bisector_vw, 2),
            sign(p.u_bisector_vw, 2),
            sign(p.orient_tuv, 2),
            sign(p.orient_tuw, 2),
            sign(p.orient_vwt, 2),
            sign(p.orient_vwu, 2),
        ]
    };
    let [incircle, cross, len_diff, vb, wb, tb, ub, o_tuv, o_tuw, o_vwt, o_vwu] =
        <[i32; 11]>::try_from(signs).expect("eleven predicates");

    let all_collinear = o_tuv == 0 && o_tuw == 0;
    let concyclic = incircle == 0;
    let parallel = cross == 0;
    let rectangle = parallel && concyclic && len_diff == 0 && !all_collinear;
    let trapezium = parallel && concyclic && len_diff != 0 && !all_collinear;
    let crossing = o_tuv * o_tuw < 0 && o_vwt * o_vwu < 0;

    let [t, u, v, w] = pts;
    let tu = [u[0] - t[0], u[1] - t[1]];
    let vw = [w[0] - v[0], w[1] - v[1]];
    let angle = (tu[0] * vw[1] - tu[1] * vw[0])
        .abs()
        .atan2((tu[0] * vw[0] + tu[1] * vw[1]).abs());

    Ok(ConfigurationClass {
        concyclic_tuvw: concyclic,
        parallel_tu_vw: parallel,
        rectangle,
        bilateral_trapezium: trapezium,
        vw_on_perp_bisector_of_tu: vb == 0 && wb == 0,
        tu_on_perp_bisector_of_vw: tb == 0 && ub == 0,
        diagonals_of_cyclic_quadrangle: concyclic && crossing,
        angle_between_segments: angle,
        exact,
    })
}
