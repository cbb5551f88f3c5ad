//! Ready-made hypersurfaces used by the tests, the scenario runner and the
//! browser demo.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::hypersurface::Chart;
use crate::polynomial::AlgebraicHypersurface;
use crate::space_forms::{CVec, ModelPoint, SpaceForm};
use crate::tubes::{AlgebraicBase, ComplexLinearBase, RealFormBase, TubeSpec};

/// Geodesic sphere of radius `r` about `e_0`: the tube over a point.
pub fn geodesic_sphere(space: SpaceForm, r: f64) -> Result<TubeSpec> {
    TubeSpec::new(Arc::new(ComplexLinearBase::point(space)?), r)
}

/// Tube over the totally geodesic `CP^k` (or `CH^k`) spanned by
/// `e_0, ..., e_k`.
pub fn tube_over_linear(space: SpaceForm, k: usize, r: f64) -> Result<TubeSpec> {
    TubeSpec::new(Arc::new(ComplexLinearBase::new(space, k)?), r)
}

/// Tube over `RP^n` in `CP^n`.
pub fn tube_over_real_form(n: usize, r: f64) -> Result<TubeSpec> {
    TubeSpec::new(Arc::new(RealFormBase::new(SpaceForm::projective(n)?)?), r)
}

/// A fixed smooth point of the quadric `sum z_j^2 = 0` in `CP^n` with no
/// vanishing coordinate.
pub fn quadric_point(n: usize) -> Result<ModelPoint> {
    if n < 2 {
        return Err(GeomError::ComplexDim(n));
    }
    // (1, 0.5, ..., 0.5, i b) with b^2 = 1 + 0.25 (n - 1)
    let mut z = CVec::from_element(n + 1, Complex64::new(0.5, 0.0));
    z[0] = Complex64::new(1.0, 0.0);
    z[n] = Complex64::new(0.0, (1.0 + 0.25 * (n - 1) as f64).sqrt());
    ModelPoint::new(SpaceForm::projective(n)?, z)
}

/// Tube over a patch of the quadric around [`quadric_point`].
pub fn tube_over_quadric(n: usize, r: f64) -> Result<TubeSpec> {
    let base = AlgebraicBase::new(AlgebraicHypersurface::quadric(n), &quadric_point(n)?)?;
    TubeSpec::new(Arc::new(base), r)
}

/// Tube over a patch of `f = 0` around the smooth point `x`.
pub fn tube_over_polynomial(f: AlgebraicHypersurface, x: &ModelPoint, r: f64) -> Result<TubeSpec> {
    TubeSpec::new(Arc::new(AlgebraicBase::new(f, x)?), r)
}

/// A geodesic sphere pushed through the ambient map
/// `z -> z + eps Re(z_1) e_2` on homogeneous representatives. For
/// `eps != 0` the result is no longer Hopf.
#[derive(Debug, Clone)]
pub struct WarpedSphere {
    sphere: TubeSpec,
    eps: f64,
}

impl WarpedSphere {
    pub fn new(space: SpaceForm, r: f64, eps: f64) -> Result<Self> {
        Ok(Self {
            sphere: geodesic_sphere(space, r)?,
            eps,
        })
    }
}

impl Chart for WarpedSphere {
    fn space(&self) -> SpaceForm {
        self.sphere.space()
    }

    fn domain(&self) -> Vec<(f64, f64)> {
        self.sphere.domain()
    }

    fn eval(&self, u: &[f64]) -> Result<ModelPoint> {
        let mut z = self.sphere.raw_point(u)?;
        let shift = self.eps * z[1].re;
        z[2] += Complex64::new(shift, 0.0);
        ModelPoint::new(self.space(), z)
    }

    fn focus(&self, u: &[f64]) -> Result<Option<ModelPoint>> {
        self.sphere.focus(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::{HypersurfacePatch, NormalOrientation};

    #[test]
    fn quadric_point_is_smooth_and_on_the_quadric() {
        for n in 2..=4 {
            let x = quadric_point(n).unwrap();
            let f = AlgebraicHypersurface::quadric(n);
            assert!(f.eval(x.coords()).unwrap().norm() < 1e-15);
            assert!(f.gradient(x.coords()).unwrap().norm() > 1.0);
            assert!(x.coords().iter().all(|z| z.norm() > 0.1));
        }
        assert!(quadric_point(1).is_err());
    }

    #[test]
    fn unwarped_sphere_matches_sphere() {
        let cp2 = SpaceForm::projective(2).unwrap();
        let w = WarpedSphere::new(cp2, 0.8, 0.0).unwrap();
        let s = geodesic_sphere(cp2, 0.8).unwrap();
        let u = [1.0, 1.4, 2.0];
        assert_eq!(w.eval(&u).unwrap(), s.eval(&u).unwrap());
        let p = HypersurfacePatch::new(Arc::new(w), NormalOrientation::Inward).unwrap();
        assert!(p.spectrum(&u).unwrap().hopf_defect < 1e-6);
    }

    #[test]
    fn canned_tubes_have_hypersurface_dimension() {
        let cp3 = SpaceForm::projective(3).unwrap();
        let tubes = [
            tube_over_linear(cp3, 1, 0.4).unwrap(),
            tube_over_linear(cp3, 2, 0.4).unwrap(),
            tube_over_real_form(3, 0.4).unwrap(),
            tube_over_quadric(3, 0.4).unwrap(),
        ];
        for t in &tubes {
            assert_eq!(t.domain().len(), 5);
        }
        let f = AlgebraicHypersurface::coordinate_hyperplane(2, 2);
        let x = SpaceForm::projective(2).unwrap().basis_point(0).unwrap();
        assert_eq!(tube_over_polynomial(f, &x, 0.3).unwrap().domain().len(), 3);
        assert!(tube_over_real_form(1, 0.4).is_err());
    }
}
