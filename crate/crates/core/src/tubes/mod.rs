//! Tubes `Phi_r(xi) = F(r xi)` over base submanifolds, predicted tube
//! spectra, focal radii and rank measurements of the normal exponential map.

mod bases;
mod blowup;
mod rank;
mod spectra;
pub(crate) mod sphere_coords;

pub use bases::{
    AlgebraicBase, BaseKind, BaseSubmanifold, ComplexLinearBase, HypersurfaceBase, RealFormBase,
    SMOOTH_POINT_TOL,
};
pub use blowup::{singular_blowup_probe, ApproachCurve, BlowupSample};
pub use rank::{
    focal_cell_sweep, jacobian_rank, rank_sweep, CellRow, RankMeasurement, RankRow,
    DEFAULT_RANK_TOL,
};
pub use spectra::{
    algebraic_principal_angles, expand_spectrum, focal_radii, hopf_focal_radius,
    hyperbolic_sphere_spectrum, predicted_spectrum, FocalRadius, FocalReport, FocalSource,
    TubeModel, FOCAL_GUARD,
};

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::hypersurface::{Chart, HypersurfacePatch, NormalOrientation};
use crate::polynomial::AlgebraicHypersurface;
use crate::space_forms::{gauge_in_place, CVec, Curvature, ModelPoint, SpaceForm, TangentVector};

/// The unit normal at `base_param` selected by `fiber_param`, as a tangent
/// vector at the gauged base point.
pub fn normal_sampler(
    base: &dyn BaseSubmanifold,
    base_param: &[f64],
    fiber_param: &[f64],
) -> Result<TangentVector> {
    let mut lift = base.lift(base_param)?;
    let nu = base.normal(base_param, fiber_param)?;
    let phase = gauge_in_place(&mut lift);
    let point = ModelPoint::new(base.space(), lift)?;
    TangentVector::new(point, nu.map(|z| z * phase))
}

/// A base submanifold together with a tube radius.
#[derive(Clone)]
pub struct TubeSpec {
    base: Arc<dyn BaseSubmanifold>,
    radius: f64,
}

impl std::fmt::Debug for TubeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TubeSpec")
            .field("base", &self.base.kind())
            .field("space", &self.base.space())
            .field("radius", &self.radius)
            .finish()
    }
}

impl TubeSpec {
    /// Radius must lie in `(0, pi/2)` for `CP^n` and `(0, inf)` for `CH^n`.
    pub fn new(base: Arc<dyn BaseSubmanifold>, radius: f64) -> Result<Self> {
        let ok = match base.space().curvature() {
            Curvature::Projective => radius > 0.0 && radius < FRAC_PI_2,
            Curvature::Hyperbolic => radius > 0.0 && radius.is_finite(),
        };
        if !ok {
            return Err(GeomError::Precondition(format!(
                "tube radius {radius} outside the admissible range"
            )));
        }
        Ok(Self { base, radius })
    }

    /// Normal exponential map at an arbitrary signed distance; used by rank
    /// sweeps that cross focal radii and antipodal sets.
    pub fn exponential(base: Arc<dyn BaseSubmanifold>, radius: f64) -> Self {
        Self { base, radius }
    }

    pub fn base(&self) -> &Arc<dyn BaseSubmanifold> {
        &self.base
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.base.clone(), radius)
    }

    /// `Phi_r` at `(base_param, normal_param)`.
    pub fn tube_point(&self, base_param: &[f64], normal_param: &[f64]) -> Result<ModelPoint> {
        let space = self.base.space();
        let lift = self.base.lift(base_param)?;
        let nu = self.base.normal(base_param, normal_param)?;
        ModelPoint::new(space, space.geodesic_raw(&lift, &nu, self.radius))
    }

    /// Smooth (ungauged) representative of `Phi_r` at a full chart parameter.
    pub(crate) fn raw_point(&self, u: &[f64]) -> Result<CVec> {
        let (x, nu) = self.lift_and_normal(u)?;
        let space = self.space();
        space.normalize_raw(&space.geodesic_raw(&x, &nu, self.radius))
    }

    /// Base representative and unit normal for a full chart parameter.
    pub(crate) fn lift_and_normal(&self, u: &[f64]) -> Result<(CVec, CVec)> {
        let (b, f) = self.split(u)?;
        Ok((self.base.lift(b)?, self.base.normal(b, f)?))
    }

    fn split<'a>(&self, u: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
        let b = self.base.base_domain().len();
        let f = self.base.fiber_domain().len();
        if u.len() != b + f {
            return Err(GeomError::Dimension {
                expected: b + f,
                got: u.len(),
            });
        }
        Ok(u.split_at(b))
    }

    /// The tube as a hypersurface patch; `Inward` points back to the base.
    pub fn patch(&self, orientation: NormalOrientation) -> Result<HypersurfacePatch> {
        HypersurfacePatch::new(Arc::new(self.clone()), orientation)
    }

    /// Closed-form spectral data for the predicted tube spectrum, when the
    /// base admits one.
    pub fn model(&self, base_param: &[f64]) -> Result<Option<TubeModel>> {
        self.base.tube_model(base_param)
    }
}

impl Chart for TubeSpec {
    fn space(&self) -> SpaceForm {
        self.base.space()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        let mut d = self.base.base_domain();
        d.extend(self.base.fiber_domain());
        d
    }

    fn eval(&self, u: &[f64]) -> Result<ModelPoint> {
        let (b, f) = self.split(u)?;
        self.tube_point(b, f)
    }

    fn focus(&self, u: &[f64]) -> Result<Option<ModelPoint>> {
        let (b, _) = self.split(u)?;
        Ok(Some(ModelPoint::new(
            self.base.space(),
            self.base.lift(b)?,
        )?))
    }
}

/// The explicit tube chart over an algebraic hypersurface:
/// `z_j = x_j cos r + sin r conj(df/dx_j) / |grad f| e^{it}`.
pub fn tube_chart_algebraic(
    f: &AlgebraicHypersurface,
    x: &ModelPoint,
    t: f64,
    r: f64,
) -> Result<ModelPoint> {
    let space = x.space();
    if space.curvature() != Curvature::Projective || space.ambient_len() != f.vars() {
        return Err(GeomError::Precondition(
            "algebraic tube chart needs a point of CP^n matching the polynomial".into(),
        ));
    }
    let z = x.coords();
    bases::check_smooth_point(f, z)?;
    let g = f.gradient(z)?;
    let gn = g.norm();
    let rot = Complex64::from_polar(r.sin() / gn, t);
    let out = z * Complex64::new(r.cos(), 0.0) + g.map(|w| w.conj() * rot);
    ModelPoint::new(space, out)
}

#[cfg(test)]
mod tests;
