use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use super::spectra::{algebraic_principal_angles, TubeModel};
use super::sphere_coords;
use super::TubeSpec;
use crate::error::{GeomError, Result};
use crate::hypersurface::Chart;
use crate::polynomial::AlgebraicHypersurface;
use crate::space_forms::{CVec, Curvature, ModelPoint, SpaceForm};

/// `|grad f|` at or below this multiple of the coefficient scale counts as
/// singular.
pub const SMOOTH_POINT_TOL: f64 = 1e-8;
/// Polar angles of normal-sphere and real-form charts stay this far from
/// the coordinate poles.
pub(crate) const ANGLE_MARGIN: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseKind {
    HolomorphicChart,
    AlgebraicHypersurface,
    RealForm,
    /// A real hypersurface with its inward normal; tubes over it are its
    /// parallel hypersurfaces.
    Hypersurface,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::HolomorphicChart => "holomorphic_chart",
            Self::AlgebraicHypersurface => "algebraic_hypersurface",
            Self::RealForm => "real_form",
            Self::Hypersurface => "hypersurface",
        }
    }
}

/// A submanifold of a space form with a parametrized unit normal bundle.
///
/// `lift` returns a normalized representative that depends smoothly on the
/// parameters (it is not phase-gauged) and `normal` a unit horizontal
/// vector at that same representative.
pub trait BaseSubmanifold: Send + Sync {
    fn space(&self) -> SpaceForm;
    fn kind(&self) -> BaseKind;
    fn base_domain(&self) -> Vec<(f64, f64)>;
    fn fiber_domain(&self) -> Vec<(f64, f64)>;
    fn lift(&self, base_param: &[f64]) -> Result<CVec>;
    fn normal(&self, base_param: &[f64], fiber_param: &[f64]) -> Result<CVec>;

    /// Principal angles, Hopf angle and fiber multiplicity of the tubes over
    /// this base at `base_param`, when known in closed form.
    fn tube_model(&self, _base_param: &[f64]) -> Result<Option<TubeModel>> {
        Ok(None)
    }
}

fn check_len(param: &[f64], expected: usize) -> Result<()> {
    if param.len() != expected {
        return Err(GeomError::Dimension {
            expected,
            got: param.len(),
        });
    }
    Ok(())
}

/// Totally geodesic `CP^k` (or `CH^k`) spanned by `e_0, ..., e_k`, charted
/// affinely around `e_0`; `k = 0` is a single point.
#[derive(Debug, Clone)]
pub struct ComplexLinearBase {
    space: SpaceForm,
    k: usize,
    half_width: f64,
}

impl ComplexLinearBase {
    pub fn new(space: SpaceForm, k: usize) -> Result<Self> {
        if k >= space.n() {
            return Err(GeomError::Precondition(format!(
                "complex linear base needs 0 <= k < n, got k = {k}, n = {}",
                space.n()
            )));
        }
        let half_width = match space.curvature() {
            Curvature::Projective => 0.8,
            // keeps |w|^2 < 1 inside the box for k <= 2
            Curvature::Hyperbolic => 0.3,
        };
        Ok(Self {
            space,
            k,
            half_width,
        })
    }

    pub fn point(space: SpaceForm) -> Result<Self> {
        Self::new(space, 0)
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl BaseSubmanifold for ComplexLinearBase {
    fn space(&self) -> SpaceForm {
        self.space
    }

    fn kind(&self) -> BaseKind {
        BaseKind::HolomorphicChart
    }

    fn base_domain(&self) -> Vec<(f64, f64)> {
        vec![(-self.half_width, self.half_width); 2 * self.k]
    }

    fn fiber_domain(&self) -> Vec<(f64, f64)> {
        sphere_coords::domain(2 * (self.space.n() - self.k) - 1, ANGLE_MARGIN)
    }

    fn lift(&self, b: &[f64]) -> Result<CVec> {
        check_len(b, 2 * self.k)?;
        let mut v = CVec::zeros(self.space.ambient_len());
        v[0] = Complex64::new(1.0, 0.0);
        for j in 0..self.k {
            v[j + 1] = Complex64::new(b[2 * j], b[2 * j + 1]);
        }
        self.space.normalize_raw(&v)
    }

    fn normal(&self, b: &[f64], f: &[f64]) -> Result<CVec> {
        check_len(b, 2 * self.k)?;
        check_len(f, 2 * (self.space.n() - self.k) - 1)?;
        let p = sphere_coords::point(f);
        let mut v = CVec::zeros(self.space.ambient_len());
        for m in 0..self.space.n() - self.k {
            v[self.k + 1 + m] = Complex64::new(p[2 * m], p[2 * m + 1]);
        }
        Ok(v)
    }

    fn tube_model(&self, _b: &[f64]) -> Result<Option<TubeModel>> {
        let n = self.space.n();
        let fiber = 2 * (n - self.k) - 2;
        Ok(match self.space.curvature() {
            Curvature::Projective => Some(TubeModel {
                space: self.space,
                angles: if self.k > 0 {
                    vec![(FRAC_PI_2, 2 * self.k)]
                } else {
                    Vec::new()
                },
                hopf_angle: FRAC_PI_2,
                fiber_multiplicity: fiber,
            }),
            Curvature::Hyperbolic if self.k == 0 => Some(TubeModel {
                space: self.space,
                angles: Vec::new(),
                hopf_angle: FRAC_PI_2,
                fiber_multiplicity: fiber,
            }),
            Curvature::Hyperbolic => None,
        })
    }
}

/// The totally geodesic real form `RP^n`: real unit vectors, charted by
/// hyperspherical angles, with normals `i y` for unit real tangents `y`.
#[derive(Debug, Clone)]
pub struct RealFormBase {
    space: SpaceForm,
}

impl RealFormBase {
    pub fn new(space: SpaceForm) -> Result<Self> {
        if space.curvature() != Curvature::Projective {
            return Err(GeomError::Precondition(
                "the real form base is implemented in CP^n".into(),
            ));
        }
        Ok(Self { space })
    }
}

impl BaseSubmanifold for RealFormBase {
    fn space(&self) -> SpaceForm {
        self.space
    }

    fn kind(&self) -> BaseKind {
        BaseKind::RealForm
    }

    fn base_domain(&self) -> Vec<(f64, f64)> {
        sphere_coords::domain(self.space.n(), ANGLE_MARGIN)
    }

    fn fiber_domain(&self) -> Vec<(f64, f64)> {
        sphere_coords::domain(self.space.n() - 1, ANGLE_MARGIN)
    }

    fn lift(&self, b: &[f64]) -> Result<CVec> {
        check_len(b, self.space.n())?;
        Ok(CVec::from_iterator(
            self.space.ambient_len(),
            sphere_coords::point(b)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0)),
        ))
    }

    fn normal(&self, b: &[f64], f: &[f64]) -> Result<CVec> {
        check_len(b, self.space.n())?;
        check_len(f, self.space.n() - 1)?;
        let frame = sphere_coords::frame(b);
        let p = sphere_coords::point(f);
        let mut v = CVec::zeros(self.space.ambient_len());
        for (e, w) in frame.iter().zip(&p) {
            for (slot, x) in v.iter_mut().zip(e) {
                *slot += Complex64::new(0.0, w * x);
            }
        }
        Ok(v)
    }

    fn tube_model(&self, _b: &[f64]) -> Result<Option<TubeModel>> {
        let n = self.space.n();
        Ok(Some(TubeModel {
            space: self.space,
            angles: vec![(FRAC_PI_2, n - 1)],
            hopf_angle: FRAC_PI_4,
            fiber_multiplicity: n - 1,
        }))
    }
}

/// A patch of the smooth locus of `f = 0` around a given point.
///
/// In the affine chart of the largest coordinate of the center, all but one
/// of the remaining coordinates are free (`center + scale * delta`); the last
/// one, chosen where `|df/dz|` is largest, is solved for by Newton's method.
#[derive(Debug, Clone)]
pub struct AlgebraicBase {
    space: SpaceForm,
    f: AlgebraicHypersurface,
    center: CVec,
    solve: usize,
    free: Vec<usize>,
    scale: f64,
}

impl AlgebraicBase {
    pub const DEFAULT_SCALE: f64 = 0.25;

    pub fn new(f: AlgebraicHypersurface, center: &ModelPoint) -> Result<Self> {
        Self::with_scale(f, center, Self::DEFAULT_SCALE)
    }

    pub fn with_scale(f: AlgebraicHypersurface, center: &ModelPoint, scale: f64) -> Result<Self> {
        let space = center.space();
        if space.curvature() != Curvature::Projective || space.ambient_len() != f.vars() {
            return Err(GeomError::Precondition(
                "algebraic base needs a point of CP^n matching the polynomial".into(),
            ));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(GeomError::Precondition(format!(
                "chart scale must be positive, got {scale}"
            )));
        }
        let x = center.coords();
        check_smooth_point(&f, x)?;
        let affine = argmax(x.iter().map(|z| z.norm()), None);
        let y = x.map(|z| z / x[affine]);
        let g = f.gradient(&y)?;
        let solve = argmax(g.iter().map(|z| z.norm()), Some(affine));
        let free = (0..f.vars())
            .filter(|&k| k != affine && k != solve)
            .collect();
        Ok(Self {
            space,
            f,
            center: y,
            solve,
            free,
            scale,
        })
    }

    pub fn polynomial(&self) -> &AlgebraicHypersurface {
        &self.f
    }

    /// The affine point with free coordinates shifted by `scale * delta`.
    fn affine_point(&self, b: &[f64]) -> Result<CVec> {
        check_len(b, 2 * self.free.len())?;
        let mut y = self.center.clone();
        for (j, &k) in self.free.iter().enumerate() {
            y[k] += Complex64::new(b[2 * j], b[2 * j + 1]) * self.scale;
        }
        for _ in 0..100 {
            let fv = self.f.eval(&y)?;
            let ds = self.f.gradient(&y)?[self.solve];
            if ds.norm() == 0.0 {
                break;
            }
            let step = fv / ds;
            y[self.solve] -= step;
            if step.norm() <= 1e-15 * y[self.solve].norm() || step.norm() == 0.0 {
                break;
            }
        }
        let residual = self.f.eval(&y)?.norm();
        if residual <= 1e-12 * self.f.eval_abs(&y)? {
            Ok(y)
        } else {
            Err(GeomError::Numerical(format!(
                "Newton projection onto the variety stalled (|f| = {residual:.3e})"
            )))
        }
    }
}

fn argmax(values: impl Iterator<Item = f64>, skip: Option<usize>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (k, v) in values.enumerate() {
        if Some(k) != skip && v > best_v {
            best_v = v;
            best = k;
        }
    }
    best
}

/// Errors unless `x` (normalized) lies on `f = 0` and `|grad f|` clears the
/// smoothness threshold.
pub(crate) fn check_smooth_point(f: &AlgebraicHypersurface, x: &CVec) -> Result<()> {
    let value = f.eval(x)?.norm();
    if value > 1e-9 * f.scale() {
        return Err(GeomError::OffVariety { residual: value });
    }
    let gn = f.gradient(x)?.norm();
    if gn <= SMOOTH_POINT_TOL * f.scale() {
        return Err(GeomError::SingularPoint { grad_norm: gn });
    }
    Ok(())
}

impl BaseSubmanifold for AlgebraicBase {
    fn space(&self) -> SpaceForm {
        self.space
    }

    fn kind(&self) -> BaseKind {
        BaseKind::AlgebraicHypersurface
    }

    fn base_domain(&self) -> Vec<(f64, f64)> {
        vec![(-1.0, 1.0); 2 * self.free.len()]
    }

    fn fiber_domain(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 2.0 * std::f64::consts::PI)]
    }

    fn lift(&self, b: &[f64]) -> Result<CVec> {
        let y = self.affine_point(b)?;
        self.space.normalize_raw(&y)
    }

    fn normal(&self, b: &[f64], f: &[f64]) -> Result<CVec> {
        check_len(f, 1)?;
        let x = self.lift(b)?;
        let g = self.f.gradient(&x)?;
        let gn = g.norm();
        if gn <= SMOOTH_POINT_TOL * self.f.scale() {
            return Err(GeomError::SingularPoint { grad_norm: gn });
        }
        let rot = Complex64::from_polar(1.0 / gn, f[0]);
        Ok(g.map(|w| w.conj() * rot))
    }

    fn tube_model(&self, b: &[f64]) -> Result<Option<TubeModel>> {
        let x = ModelPoint::new(self.space, self.lift(b)?)?;
        let angles = algebraic_principal_angles(&self.f, &x)?;
        Ok(Some(TubeModel {
            space: self.space,
            angles,
            hopf_angle: FRAC_PI_2,
            fiber_multiplicity: 0,
        }))
    }
}

/// A tube regarded as a hypersurface with its inward normal (towards the
/// tube's own base). The tube of radius `s` over it is its parallel
/// hypersurface at inward distance `s`.
#[derive(Debug, Clone)]
pub struct HypersurfaceBase {
    tube: TubeSpec,
}

impl HypersurfaceBase {
    pub fn new(tube: TubeSpec) -> Self {
        Self { tube }
    }

    pub fn tube(&self) -> &TubeSpec {
        &self.tube
    }
}

impl BaseSubmanifold for HypersurfaceBase {
    fn space(&self) -> SpaceForm {
        self.tube.space()
    }

    fn kind(&self) -> BaseKind {
        BaseKind::Hypersurface
    }

    fn base_domain(&self) -> Vec<(f64, f64)> {
        self.tube.domain()
    }

    fn fiber_domain(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    fn lift(&self, b: &[f64]) -> Result<CVec> {
        let (x, nu) = self.tube.lift_and_normal(b)?;
        Ok(self.space().geodesic_raw(&x, &nu, self.tube.radius()))
    }

    fn normal(&self, b: &[f64], f: &[f64]) -> Result<CVec> {
        check_len(f, 0)?;
        let (x, nu) = self.tube.lift_and_normal(b)?;
        let r = self.tube.radius();
        // minus the velocity of the normal geodesic at time r
        Ok(match self.space().curvature() {
            Curvature::Projective => {
                &x * Complex64::new(r.sin(), 0.0) - &nu * Complex64::new(r.cos(), 0.0)
            }
            Curvature::Hyperbolic => {
                -(&x * Complex64::new(r.sinh(), 0.0) + &nu * Complex64::new(r.cosh(), 0.0))
            }
        })
    }
}
