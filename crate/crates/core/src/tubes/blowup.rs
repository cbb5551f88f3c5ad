//! Tube curvature along a curve of smooth points running into a point of
//! an algebraic hypersurface.

use std::sync::Arc;

use num_complex::Complex64;

use super::bases::{AlgebraicBase, SMOOTH_POINT_TOL};
use super::spectra::algebraic_principal_angles;
use super::TubeSpec;
use crate::error::{GeomError, Result};
use crate::hypersurface::NormalOrientation;
use crate::polynomial::AlgebraicHypersurface;
use crate::space_forms::{CVec, Curvature, ModelPoint};

/// The curve `s -> [y(s) + t(s) w]` with `y(s) = y_0 + s d` in the affine
/// chart of the target's largest coordinate and `t(s)` the smallest root of
/// `f(y(s) + t w) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproachCurve {
    pub direction: CVec,
    pub transversal: CVec,
}

impl ApproachCurve {
    pub fn new(direction: CVec, transversal: CVec) -> Self {
        Self {
            direction,
            transversal,
        }
    }

    /// Smooth point of `f = 0` at parameter `s`.
    pub fn point(&self, f: &AlgebraicHypersurface, target: &ModelPoint, s: f64) -> Result<CVec> {
        let x = target.coords();
        if self.direction.len() != x.len() || self.transversal.len() != x.len() {
            return Err(GeomError::Dimension {
                expected: x.len(),
                got: self.direction.len().min(self.transversal.len()),
            });
        }
        let a = (0..x.len())
            .max_by(|&i, &j| x[i].norm().total_cmp(&x[j].norm()).then(j.cmp(&i)))
            .expect("nonempty point");
        let y0 = x.map(|z| z / x[a]);
        let mut d = self.direction.clone();
        d[a] = Complex64::new(0.0, 0.0);
        let q = &y0 + d * Complex64::new(s, 0.0);
        let roots = f.line_roots(&q, &self.transversal)?;
        let t = *roots
            .first()
            .ok_or_else(|| GeomError::Numerical("approach line misses the variety".into()))?;
        Ok(q + &self.transversal * t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupSample {
    pub scale: f64,
    /// Distance from the base point to the target.
    pub distance: Option<f64>,
    pub grad_norm: Option<f64>,
    /// Largest `|cot Theta_j|` of the base at the approach point.
    pub base_curvature: Option<f64>,
    /// Largest `|principal curvature|` of the tube, finite differences.
    pub max_abs_curvature: Option<f64>,
    /// Largest `|principal curvature|` from the closed-form tube spectrum.
    pub predicted_max_abs: Option<f64>,
    /// Why the sample carries no finite-difference value.
    pub skipped: Option<String>,
}

impl BlowupSample {
    fn empty(scale: f64) -> Self {
        Self {
            scale,
            distance: None,
            grad_norm: None,
            base_curvature: None,
            max_abs_curvature: None,
            predicted_max_abs: None,
            skipped: None,
        }
    }
}

/// For each approach scale, builds the tube of radius `r` over a chart of
/// `f = 0` around the curve point and records the largest principal
/// curvature. Points whose gradient is below the smoothness threshold are
/// skipped with a marker.
pub fn singular_blowup_probe(
    f: &AlgebraicHypersurface,
    target: &ModelPoint,
    r: f64,
    scales: &[f64],
    curve: &ApproachCurve,
) -> Result<Vec<BlowupSample>> {
    let space = target.space();
    if space.curvature() != Curvature::Projective || space.ambient_len() != f.vars() {
        return Err(GeomError::Precondition(
            "blow-up probe needs a point of CP^n matching the polynomial".into(),
        ));
    }
    let residual = f.eval(target.coords())?.norm();
    if residual > 1e-9 * f.scale() {
        return Err(GeomError::OffVariety { residual });
    }
    let mut out = Vec::with_capacity(scales.len());
    for &s in scales {
        let mut sample = BlowupSample::empty(s);
        let point = curve
            .point(f, target, s)
            .and_then(|y| ModelPoint::new(space, y));
        let x = match point {
            Ok(x) => x,
            Err(e) => {
                sample.skipped = Some(e.to_string());
                out.push(sample);
                continue;
            }
        };
        sample.distance = x.distance(target).ok();
        let gn = f.gradient(x.coords())?.norm();
        sample.grad_norm = Some(gn);
        if gn <= SMOOTH_POINT_TOL * f.scale() {
            sample.skipped = Some(format!("singular: |grad f| = {gn:.3e}"));
            out.push(sample);
            continue;
        }
        match probe_point(f, &x, r) {
            Ok((base, fd, predicted)) => {
                sample.base_curvature = Some(base);
                sample.max_abs_curvature = Some(fd);
                sample.predicted_max_abs = predicted;
            }
            Err(e) => sample.skipped = Some(e.to_string()),
        }
        out.push(sample);
    }
    Ok(out)
}

fn probe_point(
    f: &AlgebraicHypersurface,
    x: &ModelPoint,
    r: f64,
) -> Result<(f64, f64, Option<f64>)> {
    let angles = algebraic_principal_angles(f, x)?;
    let base = angles
        .iter()
        .map(|(t, _)| (1.0 / t.tan()).abs())
        .fold(0.0, f64::max);
    // Shrink the chart with the base curvature so the finite-difference
    // stencil resolves the tube.
    let chart_scale = AlgebraicBase::DEFAULT_SCALE / (1.0 + base);
    let alg = AlgebraicBase::with_scale(f.clone(), x, chart_scale)?;
    let tube = TubeSpec::new(Arc::new(alg), r)?;
    let patch = tube.patch(NormalOrientation::Outward)?;
    let mut u = vec![0.0; patch.domain().len()];
    *u.last_mut().expect("tube chart has a fiber angle") = std::f64::consts::PI;
    let spec = patch.spectrum(&u)?;
    let fd = spec.eigenvalues.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let predicted = tube
        .model(&vec![0.0; u.len() - 1])?
        .and_then(|m| m.predicted(r).ok())
        .map(|p| p.iter().map(|(e, _)| e.abs()).fold(0.0, f64::max));
    Ok((base, fd, predicted))
}
