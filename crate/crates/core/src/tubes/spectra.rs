//! Closed-form tube spectra and focal radii.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::bases::check_smooth_point;
use crate::error::{GeomError, Result};
use crate::hypersurface::{ShapeSpectrum, DEFAULT_HOPF_TOL};
use crate::polynomial::AlgebraicHypersurface;
use crate::space_forms::{CVec, Curvature, ModelPoint, SpaceForm};

/// Distance to a cotangent pole below which a radius counts as focal.
pub const FOCAL_GUARD: f64 = 1e-8;
/// Eigenvalues closer than this are merged into one focal radius.
const CLUSTER_TOL: f64 = 1e-6;

fn arccot(x: f64) -> f64 {
    FRAC_PI_2 - x.atan()
}

/// Principal curvatures of the tube of radius `r` with the normal pointing
/// away from the base, as `(eigenvalue, multiplicity)`:
/// `-cot r` on the normal-sphere directions, `cot(Theta_j - r)` on the
/// directions parallel to the base and `2 cot(2(Theta - r))` on `U`.
pub fn predicted_spectrum(
    angles: &[(f64, usize)],
    hopf_angle: f64,
    fiber_multiplicity: usize,
    r: f64,
) -> Result<Vec<(f64, usize)>> {
    if !(r > 0.0 && r < FRAC_PI_2) {
        return Err(GeomError::Precondition(format!(
            "radius {r} outside (0, pi/2)"
        )));
    }
    if !(hopf_angle > 0.0 && hopf_angle <= FRAC_PI_2) {
        return Err(GeomError::Precondition(format!(
            "Hopf angle {hopf_angle} outside (0, pi/2]"
        )));
    }
    let mut out = Vec::with_capacity(angles.len() + 2);
    if fiber_multiplicity > 0 {
        out.push((-1.0 / r.tan(), fiber_multiplicity));
    }
    for &(theta, mult) in angles {
        if !(theta > 0.0 && theta < PI) {
            return Err(GeomError::Precondition(format!(
                "principal angle {theta} outside (0, pi)"
            )));
        }
        if (theta - r).abs() < FOCAL_GUARD {
            return Err(GeomError::FocalDegeneracy {
                radius: r,
                guard: FOCAL_GUARD,
            });
        }
        out.push((1.0 / (theta - r).tan(), mult));
    }
    if (hopf_angle - r).abs() < FOCAL_GUARD {
        return Err(GeomError::FocalDegeneracy {
            radius: r,
            guard: FOCAL_GUARD,
        });
    }
    out.push((2.0 / (2.0 * (hopf_angle - r)).tan(), 1));
    Ok(out)
}

/// Flattens `(value, multiplicity)` pairs into an ascending list.
pub fn expand_spectrum(pairs: &[(f64, usize)]) -> Vec<f64> {
    let mut out: Vec<f64> = pairs
        .iter()
        .flat_map(|&(v, m)| std::iter::repeat(v).take(m))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Inward principal curvatures of the geodesic sphere of radius `r` in
/// `CH^n`: `coth r` with multiplicity `2n - 2` and `2 coth 2r` on `U`.
pub fn hyperbolic_sphere_spectrum(n: usize, r: f64) -> Result<Vec<(f64, usize)>> {
    if !(r > 0.0 && r.is_finite()) || n < 2 {
        return Err(GeomError::Precondition(format!(
            "need r > 0 and n >= 2, got r = {r}, n = {n}"
        )));
    }
    Ok(vec![
        (1.0 / r.tanh(), 2 * n - 2),
        (2.0 / (2.0 * r).tanh(), 1),
    ])
}

/// Principal angles `Theta_j = arccot(lambda_j)` of the hypersurface
/// `f = 0` at `x` for the normal `conj(grad f) / |grad f|`.
///
/// The shape operator of a complex hypersurface has eigenvalues `+-s_k`,
/// where `s_k` are the singular values of the symmetric form
/// `Hess f / |grad f|` restricted to the complex tangent space.
pub fn algebraic_principal_angles(
    f: &AlgebraicHypersurface,
    x: &ModelPoint,
) -> Result<Vec<(f64, usize)>> {
    let space = x.space();
    if space.curvature() != Curvature::Projective || space.ambient_len() != f.vars() {
        return Err(GeomError::Precondition(
            "principal angles need a point of CP^n matching the polynomial".into(),
        ));
    }
    let z = x.coords();
    check_smooth_point(f, z)?;
    let g = f.gradient(z)?;
    let gn = g.norm();
    let h = f.hessian(z)?;

    // Orthonormal basis of {v : <v, x> = 0, <v, conj(grad f)> = 0}.
    let normal = g.map(|w| w.conj()).unscale(gn);
    let mut fixed = vec![z.clone(), normal];
    let mut basis: Vec<CVec> = Vec::new();
    for k in 0..f.vars() {
        let mut e = CVec::zeros(f.vars());
        e[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &fixed {
                let p = space.herm(&e, b);
                e -= b * p;
            }
        }
        let n = e.norm();
        if n > 1e-6 {
            let e = e.unscale(n);
            fixed.push(e.clone());
            basis.push(e);
        }
        if basis.len() == f.vars() - 2 {
            break;
        }
    }
    let m = basis.len();
    // B_jk = v_j^T H v_k / |grad f|, complex symmetric.
    let mut b = DMatrix::<Complex64>::zeros(m, m);
    for j in 0..m {
        let hv = &h * &basis[j];
        for k in 0..m {
            b[(k, j)] = basis[k]
                .iter()
                .zip(hv.iter())
                .map(|(p, q)| p * q)
                .sum::<Complex64>()
                / gn;
        }
    }
    let sigma: Vec<f64> = b
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    let mut angles: Vec<(f64, usize)> = sigma
        .iter()
        .flat_map(|&s| [(arccot(s), 1), (arccot(-s), 1)])
        .collect();
    angles.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(angles)
}

/// Closed-form data describing the tubes over a base at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeModel {
    pub space: SpaceForm,
    pub angles: Vec<(f64, usize)>,
    pub hopf_angle: f64,
    pub fiber_multiplicity: usize,
}

impl TubeModel {
    /// Predicted spectrum for the normal pointing away from the base.
    pub fn predicted(&self, r: f64) -> Result<Vec<(f64, usize)>> {
        match self.space.curvature() {
            Curvature::Projective => {
                predicted_spectrum(&self.angles, self.hopf_angle, self.fiber_multiplicity, r)
            }
            Curvature::Hyperbolic => {
                if !self.angles.is_empty() {
                    return Err(GeomError::Precondition(
                        "closed-form tube spectra in CH^n are only provided over a point".into(),
                    ));
                }
                Ok(hyperbolic_sphere_spectrum(self.space.n(), r)?
                    .into_iter()
                    .map(|(v, m)| (-v, m))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FocalSource {
    /// `lambda = cot r` for an eigenvalue on `U`-perp.
    Eigenvalue { lambda: f64 },
    /// `mu = 2 cot 2r`.
    Hopf { mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalRadius {
    pub radius: f64,
    pub multiplicity: usize,
    pub source: FocalSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocalReport {
    /// Ascending by radius.
    pub radii: Vec<FocalRadius>,
}

/// Focal distances along the normal of a Hopf hypersurface in `CP^n`:
/// `r = arccot(lambda)` in `(0, pi)` for each transverse eigenvalue and the
/// root of `mu = 2 cot 2r` in `(0, pi/2)`.
pub fn focal_radii(spec: &ShapeSpectrum) -> Result<FocalReport> {
    if spec.space.curvature() != Curvature::Projective {
        return Err(GeomError::Precondition(
            "focal radii are computed in CP^n".into(),
        ));
    }
    if spec.hopf_defect > DEFAULT_HOPF_TOL {
        return Err(GeomError::NotHopf {
            defect: spec.hopf_defect,
            tol: DEFAULT_HOPF_TOL,
        });
    }
    let mut radii: Vec<FocalRadius> = Vec::new();
    let transverse = spec.transverse_eigenvalues();
    let mut k = 0;
    while k < transverse.len() {
        let start = k;
        while k + 1 < transverse.len() && transverse[k + 1] - transverse[start] < CLUSTER_TOL {
            k += 1;
        }
        let cluster = &transverse[start..=k];
        let lambda = cluster.iter().sum::<f64>() / cluster.len() as f64;
        radii.push(FocalRadius {
            radius: arccot(lambda),
            multiplicity: cluster.len(),
            source: FocalSource::Eigenvalue { lambda },
        });
        k += 1;
    }
    radii.push(FocalRadius {
        radius: hopf_focal_radius(spec.mu),
        multiplicity: 1,
        source: FocalSource::Hopf { mu: spec.mu },
    });
    radii.sort_by(|a, b| a.radius.total_cmp(&b.radius));
    Ok(FocalReport { radii })
}

/// The root of `mu = 2 cot 2r` in `(0, pi/2)`.
pub fn hopf_focal_radius(mu: f64) -> f64 {
    0.5 * arccot(0.5 * mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn point_base_matches_outward_sphere() {
        let p = predicted_spectrum(&[], FRAC_PI_2, 2, FRAC_PI_4).unwrap();
        let e = expand_spectrum(&p);
        assert_eq!(e.len(), 3);
        assert_abs_diff_eq!(e[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn focal_radius_is_rejected() {
        let err = predicted_spectrum(&[(0.7, 2)], FRAC_PI_2, 0, 0.7).unwrap_err();
        assert!(matches!(err, GeomError::FocalDegeneracy { .. }));
        let err = predicted_spectrum(&[], 0.7, 0, 0.7 + 1e-9).unwrap_err();
        assert!(matches!(err, GeomError::FocalDegeneracy { .. }));
        assert!(predicted_spectrum(&[], 0.7, 0, 0.7 + 1e-6).is_ok());
    }

    #[test]
    fn parallel_form_matches_tangent_form() {
        // tan(rho - Theta) = cot(Theta - (rho - pi/2))
        for &theta in &[0.3, 1.1, 2.0, 2.9] {
            for &rho in &[1.7, 2.2, 2.8] {
                let r = rho - FRAC_PI_2;
                let p = predicted_spectrum(&[(theta, 1)], FRAC_PI_2, 0, r).unwrap();
                assert_abs_diff_eq!(p[0].0, (rho - theta).tan(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hopf_radius_inverts_formula() {
        assert_abs_diff_eq!(hopf_focal_radius(2.0 / 1f64.tan()), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hopf_focal_radius(0.0), FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(
            hopf_focal_radius(-2.0 / 3f64.sqrt()),
            PI / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn preconditions() {
        assert!(predicted_spectrum(&[], FRAC_PI_2, 1, 0.0).is_err());
        assert!(predicted_spectrum(&[], FRAC_PI_2, 1, FRAC_PI_2).is_err());
        assert!(predicted_spectrum(&[(PI, 1)], FRAC_PI_2, 1, 0.3).is_err());
        assert!(predicted_spectrum(&[], 1.7, 1, 0.3).is_err());
        assert!(hyperbolic_sphere_spectrum(2, 0.0).is_err());
    }

    #[test]
    fn quadric_angles_are_quarter_turns() {
        let f = AlgebraicHypersurface::quadric(3);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = ModelPoint::from_slice(
            SpaceForm::projective(3).unwrap(),
            &[
                Complex64::new(s, 0.0),
                Complex64::new(0.0, s),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let a = algebraic_principal_angles(&f, &x).unwrap();
        let got: Vec<f64> = a.iter().map(|p| p.0).collect();
        let want = [FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4, 3.0 * FRAC_PI_4];
        for (g, w) in got.iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn hyperplane_is_totally_geodesic() {
        let f = AlgebraicHypersurface::coordinate_hyperplane(2, 2);
        let x = ModelPoint::from_slice(
            SpaceForm::projective(2).unwrap(),
            &[
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        for (theta, _) in algebraic_principal_angles(&f, &x).unwrap() {
            assert_abs_diff_eq!(theta, FRAC_PI_2, epsilon = 1e-15);
        }
    }
}
