use super::{normalized_residual, ScalarField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    /// Bound on `|f| / scale` that a refined point is expected to meet.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            max_iterations: 80,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub point: Vec<f64>,
    /// `|f| / scale` at `point`.
    pub residual: f64,
    pub iterations: usize,
}

impl Refined {
    pub fn converged(&self, opts: &RefineOptions) -> bool {
        self.residual < opts.tolerance
    }
}

/// Bisection for a root of `field` on `origin + s · direction`, `s` in `bracket`.
///
/// Bisection continues until the bracket can no longer shrink in floating
/// point, the value hits zero exactly, or `max_iterations` is reached; the
/// point with the smallest residual seen is returned.
pub fn refine_point(
    field: &dyn ScalarField,
    origin: &[f64],
    direction: &[f64],
    bracket: (f64, f64),
    opts: &RefineOptions,
) -> Result<Refined> {
    let at = |s: f64| -> Vec<f64> {
        origin
            .iter()
            .zip(direction)
            .map(|(o, d)| o + s * d)
            .collect()
    };
    let (mut lo, mut hi) = bracket;
    let p_lo = at(lo);
    let p_hi = at(hi);
    let (f_lo, sc_lo) = field.sample(&p_lo);
    let (f_hi, sc_hi) = field.sample(&p_hi);
    if f_lo == 0.0 {
        return Ok(Refined { point: p_lo, residual: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Refined { point: p_hi, residual: 0.0, iterations: 0 });
    }
    if (f_lo > 0.0) == (f_hi > 0.0) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoBracket);
    }
    let lo_positive = f_lo > 0.0;

    let mut best = {
        let r_lo = normalized_residual(f_lo, sc_lo);
        let r_hi = normalized_residual(f_hi, sc_hi);
        if r_lo <= r_hi {
            (lo, r_lo)
        } else {
            (hi, r_hi)
        }
    };
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        iterations += 1;
        let (f, sc) = field.sample(&at(mid));
        let r = normalized_residual(f, sc);
        if r < best.1 {
            best = (mid, r);
        }
        if f == 0.0 {
            break;
        }
        if (f > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Refined {
        point: at(best.0),
        residual: best.1,
        iterations,
    })
}

/// [`refine_point`] between two points.
pub fn refine_segment(
    field: &dyn ScalarField,
    a: &[f64],
    b: &[f64],
    opts: &RefineOptions,
) -> Result<Refined> {
    let dir: Vec<f64> = b.iter().zip(a).map(|(y, x)| y - x).collect();
    refine_point(field, a, &dir, (0.0, 1.0), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::FnField;

    #[test]
    fn linear_root() {
        let f = FnField::new(1, |p: &[f64]| p[0] - 0.3);
        let r = refine_point(&f, &[0.0], &[1.0], (0.0, 1.0), &RefineOptions::default()).unwrap();
        assert!((r.point[0] - 0.3).abs() < 1e-12);
        assert!(r.converged(&RefineOptions::default()));
    }

    #[test]
    fn cubic_root() {
        let f = FnField::new(1, |p: &[f64]| p[0].powi(3));
        let r = refine_point(&f, &[0.0], &[1.0], (-1.0, 2.0), &RefineOptions::default()).unwrap();
        assert!(r.point[0].abs() < 1e-9);
    }

    #[test]
    fn no_bracket() {
        let f = FnField::new(1, |p: &[f64]| p[0] * p[0] + 1.0);
        assert_eq!(
            refine_point(&f, &[0.0], &[1.0], (-1.0, 1.0), &RefineOptions::default()),
            Err(Error::NoBracket)
        );
    }

    #[test]
    fn exact_endpoint_root() {
        let f = FnField::new(2, |p: &[f64]| p[0] + p[1]);
        let r = refine_segment(&f, &[0.0, 0.0], &[1.0, 1.0], &RefineOptions::default()).unwrap();
        assert_eq!(r.point, vec![0.0, 0.0]);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn iteration_cap_respected() {
        let f = FnField::new(1, |p: &[f64]| p[0] - 0.3);
        let opts = RefineOptions { tolerance: 1e-9, max_iterations: 5 };
        let r = refine_point(&f, &[0.0], &[1.0], (0.0, 1.0), &opts).unwrap();
        assert_eq!(r.iterations, 5);
        assert!(!r.converged(&opts));
    }
}
