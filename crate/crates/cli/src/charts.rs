//! Charts built from scenario data.

use hopf_core::hypersurface::Chart;
use hopf_core::space_forms::{CVec, ModelPoint, SpaceForm};
use hopf_core::tubes::TubeSpec;
use hopf_core::{GeomError, Result};
use num_complex::Complex64;

use crate::config::parse_complexes;

/// A tube chart composed with the coordinate swap `z_0 <-> z_k`, an
/// isometry of the model. Moves the center of a geodesic sphere to `e_k`.
pub struct Relabeled {
    pub inner: TubeSpec,
    pub k: usize,
}

impl Relabeled {
    fn swap(&self, p: ModelPoint) -> Result<ModelPoint> {
        let mut z = p.coords().clone();
        z.swap_rows(0, self.k);
        ModelPoint::new(p.space(), z)
    }
}

impl Chart for Relabeled {
    fn space(&self) -> SpaceForm {
        self.inner.space()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        self.inner.domain()
    }

    fn eval(&self, u: &[f64]) -> Result<ModelPoint> {
        self.swap(self.inner.eval(u)?)
    }

    fn focus(&self, u: &[f64]) -> Result<Option<ModelPoint>> {
        self.inner.focus(u)?.map(|p| self.swap(p)).transpose()
    }
}

/// `u -> [origin + sum_i u_i axis_i]`, a real-affine parametrization in
/// homogeneous coordinates.
#[derive(Debug, Clone)]
pub struct AffineChart {
    pub space: SpaceForm,
    pub domain: Vec<(f64, f64)>,
    pub origin: CVec,
    pub axes: Vec<CVec>,
}

impl AffineChart {
    /// Reads lines `domain <lo> <hi>`, `origin <complex list>` and
    /// `axis <complex list>`; one `domain` line per `axis` line, in order.
    pub fn parse(space: SpaceForm, text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut domain = Vec::new();
        let mut origin = None;
        let mut axes = Vec::new();
        let len = space.ambient_len();
        let vector = |rest: &str, line: usize| -> std::result::Result<CVec, (usize, String)> {
            let v = parse_complexes(rest).map_err(|m| (line, m))?;
            if v.len() != len {
                return Err((line, format!("expected {len} coordinates, got {}", v.len())));
            }
            Ok(CVec::from_vec(v))
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
            match head {
                "domain" => {
                    let nums: Vec<f64> = rest
                        .split_whitespace()
                        .map(|t| crate::expr::eval(t).map_err(|m| (line, m)))
                        .collect::<std::result::Result<_, _>>()?;
                    match nums.as_slice() {
                        [lo, hi] if lo < hi => domain.push((*lo, *hi)),
                        _ => return Err((line, "expected `domain <lo> <hi>` with lo < hi".into())),
                    }
                }
                "origin" => {
                    if origin.is_some() {
                        return Err((line, "duplicate origin".into()));
                    }
                    origin = Some(vector(rest, line)?);
                }
                "axis" => axes.push(vector(rest, line)?),
                other => return Err((line, format!("unknown directive `{other}`"))),
            }
        }
        let last = text.lines().count().max(1);
        let origin = origin.ok_or((last, "missing origin".to_string()))?;
        let dim = 2 * space.n() - 1;
        if axes.len() != dim || domain.len() != dim {
            return Err((
                last,
                format!(
                    "a hypersurface chart needs {dim} axes and domains, got {} and {}",
                    axes.len(),
                    domain.len()
                ),
            ));
        }
        Ok(Self {
            space,
            domain,
            origin,
            axes,
        })
    }
}

impl Chart for AffineChart {
    fn space(&self) -> SpaceForm {
        self.space
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        self.domain.clone()
    }

    fn eval(&self, u: &[f64]) -> Result<ModelPoint> {
        if u.len() != self.axes.len() {
            return Err(GeomError::Dimension {
                expected: self.axes.len(),
                got: u.len(),
            });
        }
        let mut z = self.origin.clone();
        for (t, a) in u.iter().zip(&self.axes) {
            z += a * Complex64::new(*t, 0.0);
        }
        ModelPoint::new(self.space, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hopf_core::canned::geodesic_sphere;

    #[test]
    fn relabeled_sphere_is_centered_at_e_k() {
        let cp2 = SpaceForm::projective(2).unwrap();
        let c = Relabeled {
            inner: geodesic_sphere(cp2, 0.7).unwrap(),
            k: 2,
        };
        let e2 = cp2.basis_point(2).unwrap();
        for u in [[0.5, 1.0, 2.0], [1.2, 0.4, 5.0]] {
            assert!((c.eval(&u).unwrap().distance(&e2).unwrap() - 0.7).abs() < 1e-12);
            assert_eq!(c.focus(&u).unwrap().unwrap(), e2);
        }
    }

    #[test]
    fn affine_chart_parse() {
        let cp2 = SpaceForm::projective(2).unwrap();
        let text = "# plane\norigin 1, 0, 0.5\naxis 0, 1, 0\ndomain -0.5 0.5\naxis 0, 0 1, 0\ndomain -0.5 0.5\naxis 0, 0, 0 1\ndomain -0.2 0.2\n";
        let c = AffineChart::parse(cp2, text).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.eval(&[0.0, 0.1, 0.0]).is_ok());
        assert_eq!(AffineChart::parse(cp2, "origin 1, 0\n").unwrap_err().0, 1);
        assert_eq!(
            AffineChart::parse(cp2, "origin 1,0,0\nbogus\n")
                .unwrap_err()
                .0,
            2
        );
        assert!(AffineChart::parse(cp2, "origin 1,0,0\naxis 0,1,0\ndomain 0 1\n").is_err());
    }
}
