//! JSON job descriptions for the command-line front end.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::extract::GridSpec;
use crate::geometry::{Point, Simplex, SimplexPair};
use crate::locus::{AngleParam, LocusKind};
use crate::oracle::SweepSpec;
use crate::pseudo::{PseudoConfig, PseudoKind};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

/// One coordinate: a bare number, `[re]` or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Real(f64),
    Parts(Parts),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parts(pub Complex64);

impl<'de> Deserialize<'de> for Parts {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        match v.as_slice() {
            [re] => Ok(Parts(Complex64::new(*re, 0.0))),
            [re, im] => Ok(Parts(Complex64::new(*re, *im))),
            _ => Err(serde::de::Error::invalid_length(v.len(), &"[re] or [re, im]")),
        }
    }
}

impl Coord {
    pub fn value(&self) -> Complex64 {
        match *self {
            Coord::Real(x) => Complex64::new(x, 0.0),
            Coord::Parts(Parts(z)) => z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusName {
    Tangent,
    Orthogonal,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SinSq {
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusSpec {
    pub kind: LocusName,
    pub cos_sq_alpha: Option<f64>,
    pub sin_sq_alpha: Option<SinSq>,
    /// 1-based coordinate pair selecting a single `G_ij`; the sum of squares otherwise.
    pub pair: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Resolution {
    Uniform(usize),
    PerAxis(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Svg,
    Obj,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: Format,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub points_per_circle: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub dim: usize,
    pub simplexes: [Vec<Vec<Coord>>; 2],
    pub locus: LocusSpec,
    pub t: Option<f64>,
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
    pub oracle: Option<OracleConfig>,
}

/// A validated job: the simplexes, the angle and the function to extract.
#[derive(Debug, Clone)]
pub enum Problem {
    Real {
        pair: SimplexPair,
        angle: AngleParam,
        kind: LocusKind,
    },
    Slice {
        config: PseudoConfig,
        kind: PseudoKind,
    },
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn is_slice(&self) -> bool {
        self.t.is_some()
    }

    fn check_shape(&self) -> Result<(), ConfigError> {
        let n = self.dim;
        if !(crate::geometry::MIN_DIM..=crate::geometry::MAX_DIM).contains(&n) {
            return Err(invalid(
                "dim",
                format!(
                    "must be between {} and {}",
                    crate::geometry::MIN_DIM,
                    crate::geometry::MAX_DIM
                ),
            ));
        }
        for (s, verts) in self.simplexes.iter().enumerate() {
            if verts.len() != n {
                return Err(invalid(
                    format!("simplexes[{s}]"),
                    format!("expected {n} vertices, got {}", verts.len()),
                ));
            }
            for (v, coords) in verts.iter().enumerate() {
                if coords.len() != n {
                    return Err(invalid(
                        format!("simplexes[{s}][{v}]"),
                        format!("expected {n} coordinates, got {}", coords.len()),
                    ));
                }
                if let Some(c) = coords.iter().position(|c| {
                    let z = c.value();
                    !(z.re.is_finite() && z.im.is_finite())
                }) {
                    return Err(invalid(format!("simplexes[{s}][{v}][{c}]"), "is not finite"));
                }
            }
        }
        Ok(())
    }

    fn has_complex(&self) -> bool {
        self.simplexes
            .iter()
            .flatten()
            .flatten()
            .any(|c| c.value().im != 0.0)
    }

    /// Angle constraint named by `locus`.
    pub fn angle(&self) -> Result<AngleParam, ConfigError> {
        let l = &self.locus;
        match l.kind {
            LocusName::Tangent | LocusName::Orthogonal => {
                if l.cos_sq_alpha.is_some() || l.sin_sq_alpha.is_some() {
                    return Err(invalid(
                        "locus",
                        "cos_sq_alpha and sin_sq_alpha only apply to the general locus",
                    ));
                }
                Ok(if l.kind == LocusName::Tangent {
                    AngleParam::Tangent
                } else {
                    AngleParam::Orthogonal
                })
            }
            LocusName::General => match (l.cos_sq_alpha, l.sin_sq_alpha) {
                (Some(c), None) => {
                    AngleParam::general(c).map_err(|e| invalid("locus.cos_sq_alpha", e.to_string()))
                }
                (None, Some(SinSq { a, b })) if b == 0.0 && !self.is_slice() => {
                    AngleParam::general(1.0 - a).map_err(|e| invalid("locus.sin_sq_alpha", e.to_string()))
                }
                (None, Some(SinSq { a, b })) => {
                    if !self.is_slice() {
                        return Err(invalid(
                            "locus.sin_sq_alpha",
                            "a complex sin²α needs a pseudo-Euclidean slice (set `t`)",
                        ));
                    }
                    AngleParam::complex(a, b).map_err(|e| invalid("locus.sin_sq_alpha", e.to_string()))
                }
                _ => Err(invalid(
                    "locus",
                    "the general locus needs exactly one of cos_sq_alpha and sin_sq_alpha",
                )),
            },
        }
    }

    /// Builds the problem. Degenerate simplexes surface as [`crate::Error`]
    /// so callers can tell them apart from schema mistakes.
    pub fn problem(&self) -> Result<Result<Problem, crate::Error>, ConfigError> {
        self.check_shape()?;
        let angle = self.angle()?;
        let n = self.dim;
        if let Some(t) = self.t {
            if !t.is_finite() {
                return Err(invalid("t", "is not finite"));
            }
            if self.locus.pair.is_some() {
                return Err(invalid("locus.pair", "slices support the sum of squares only"));
            }
            let kind = match self.locus.kind {
                LocusName::Tangent => PseudoKind::GSumSq,
                LocusName::Orthogonal => PseudoKind::H,
                LocusName::General => PseudoKind::F,
            };
            let build = |k: usize, label: &str| -> crate::Result<Simplex<Complex64>> {
                let vertices = self.simplexes[k]
                    .iter()
                    .map(|v| Point::new(v.iter().map(Coord::value).collect()))
                    .collect();
                Simplex::new_unchecked(vertices, label)
            };
            return Ok((|| {
                let pair = SimplexPair::new(build(0, "first")?, build(1, "second")?)?;
                Ok(Problem::Slice {
                    config: PseudoConfig::new(pair, t, angle)?,
                    kind,
                })
            })());
        }
        if self.has_complex() {
            return Err(invalid(
                "simplexes",
                "complex coordinates need a pseudo-Euclidean slice (set `t`)",
            ));
        }
        let kind = match (self.locus.kind, self.locus.pair) {
            (LocusName::Tangent, Some([i, j])) => {
                if i == j || i == 0 || j == 0 || i > n || j > n {
                    return Err(invalid(
                        "locus.pair",
                        format!("needs two distinct indices in 1..={n}"),
                    ));
                }
                LocusKind::G { i: i.min(j), j: i.max(j) }
            }
            (LocusName::Tangent, None) if n == 2 => LocusKind::G { i: 1, j: 2 },
            (LocusName::Tangent, None) => LocusKind::GSumSq,
            (_, Some(_)) => return Err(invalid("locus.pair", "only applies to the tangent locus")),
            (LocusName::Orthogonal, None) => LocusKind::H,
            (LocusName::General, None) => LocusKind::F,
        };
        let build = |k: usize, label: &str| -> crate::Result<Simplex> {
            let vertices = self.simplexes[k]
                .iter()
                .map(|v| Point::new(v.iter().map(|c| c.value().re).collect()))
                .collect();
            Simplex::new(vertices, label)
        };
        Ok((|| {
            Ok(Problem::Real {
                pair: SimplexPair::new(build(0, "first")?, build(1, "second")?)?,
                angle,
                kind,
            })
        })())
    }

    /// Grid from the config, with optional overrides. Slices grid the
    /// `dim − 1` spatial coordinates.
    pub fn grid(&self, resolution: Option<usize>, bounds: Option<&[f64]>) -> Result<GridSpec, ConfigError> {
        let axes = if self.is_slice() { self.dim - 1 } else { self.dim };
        let bounds: Vec<(f64, f64)> = match bounds {
            Some(b) => {
                if b.len() != 2 * axes {
                    return Err(invalid(
                        "--box",
                        format!("expected {} numbers (min,max per axis), got {}", 2 * axes, b.len()),
                    ));
                }
                b.chunks(2).map(|c| (c[0], c[1])).collect()
            }
            None => self.grid.bounds.iter().map(|b| (b[0], b[1])).collect(),
        };
        if bounds.len() != axes {
            return Err(invalid(
                "grid.box",
                format!("expected {axes} axes, got {}", bounds.len()),
            ));
        }
        let res = match (resolution, &self.grid.resolution) {
            (Some(k), _) => vec![k; axes],
            (None, Resolution::Uniform(k)) => vec![*k; axes],
            (None, Resolution::PerAxis(v)) => v.clone(),
        };
        let field = if resolution.is_some() { "--resolution" } else { "grid.resolution" };
        if res.len() != axes {
            return Err(invalid(field, format!("expected {axes} entries, got {}", res.len())));
        }
        GridSpec::new(bounds, res).map_err(|e| {
            invalid(
                if matches!(e, crate::Error::InvalidGrid(ref m) if m.contains("resolution")) {
                    field
                } else {
                    "grid.box"
                },
                e.to_string(),
            )
        })
    }

    /// Sweep settings; `seed` overrides the configured jitter seed.
    pub fn sweep(&self, seed: Option<u64>) -> SweepSpec {
        let mut spec = SweepSpec::default();
        if let Some(o) = &self.oracle {
            if let Some(s) = o.samples {
                spec.samples = s;
            }
            if let Some(t) = o.tolerance {
                spec.tolerance = t;
            }
            if let Some(p) = o.points_per_circle {
                spec.points_per_circle = p;
            }
            spec.jitter_seed = o.seed;
        }
        if seed.is_some() {
            spec.jitter_seed = seed;
        }
        spec
    }
}
