//! Property tests over random points, vectors and radii.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use hopf_core::canned::{geodesic_sphere, tube_over_linear};
use hopf_core::duality::{gauss_point, sample_variety};
use hopf_core::hypersurface::{structure_tensors, NormalOrientation};
use hopf_core::polynomial::AlgebraicHypersurface;
use hopf_core::space_forms::{geodesic, CVec, ModelPoint, SpaceForm};
use hopf_core::tubes::predicted_spectrum;

fn cvec(parts: &[f64]) -> CVec {
    CVec::from_iterator(
        parts.len() / 2,
        parts.chunks(2).map(|p| Complex64::new(p[0], p[1])),
    )
}

fn coords() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 6)
}

fn point(space: SpaceForm, raw: &[f64]) -> Option<ModelPoint> {
    let mut z = cvec(raw);
    if space.c() < 0.0 {
        let w2: f64 = z.iter().skip(1).map(|w| w.norm_sqr()).sum();
        z[0] = Complex64::new((1.0 + w2).sqrt(), 0.0) * Complex64::from_polar(1.0, raw[1]);
    }
    if z.norm() < 1e-3 {
        return None;
    }
    ModelPoint::new(space, z).ok()
}

fn spaces() -> [SpaceForm; 2] {
    [
        SpaceForm::projective(2).unwrap(),
        SpaceForm::hyperbolic(2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complex_structure_is_a_metric_isometry(a in coords(), b in coords(), c in coords()) {
        for space in spaces() {
            let Some(x) = point(space, &a) else { continue };
            let v = x.project_horizontal(&cvec(&b)).unwrap();
            let w = x.project_horizontal(&cvec(&c)).unwrap();
            let g = v.metric(&w).unwrap();
            prop_assert!((v.j().metric(&w.j()).unwrap() - g).abs() < 1e-13);
            prop_assert!((v.j().metric(&v).unwrap()).abs() < 1e-13);
            let jj = v.j().j();
            let diff = (jj.rep() + v.rep()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(diff < 1e-13);
            prop_assert!((v.metric(&w).unwrap() - w.metric(&v).unwrap()).abs() < 1e-14);
            prop_assert!(v.metric(&v).unwrap() >= 0.0);
        }
    }

    #[test]
    fn geodesic_ignores_the_representative_phase(a in coords(), b in coords(), theta in 0.0..2.0 * PI, t in 0.0..1.5) {
        for space in spaces() {
            let Some(x) = point(space, &a) else { continue };
            let rotated = x.coords().map(|z| z * Complex64::from_polar(1.0, theta));
            let x2 = ModelPoint::new(space, rotated).unwrap();
            prop_assert!(x.gauge_distance(&x2) < 1e-12);
            let v = x.project_horizontal(&cvec(&b)).unwrap();
            prop_assume!(v.norm() > 1e-3);
            let v = v.normalized().unwrap();
            let v2 = x2.project_horizontal(v.rep()).unwrap();
            let p = geodesic(&x, &v, t).unwrap();
            let p2 = geodesic(&x2, &v2, t).unwrap();
            prop_assert!(p.gauge_distance(&p2) < 1e-12);
            prop_assert!((x.distance(&p).unwrap() - t).abs() < 1e-10);
        }
    }

    #[test]
    fn triangle_inequality(a in coords(), b in coords(), c in coords()) {
        let space = SpaceForm::projective(2).unwrap();
        let (Some(x), Some(y), Some(z)) = (point(space, &a), point(space, &b), point(space, &c)) else {
            return Ok(());
        };
        let d = |p: &ModelPoint, q: &ModelPoint| p.distance(q).unwrap();
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-10);
        prop_assert!(d(&x, &y) <= FRAC_PI_2 + 1e-15);
    }

    #[test]
    fn hyperbolic_distance_vanishes_only_on_equal_points(a in coords(), b in coords()) {
        let space = SpaceForm::hyperbolic(2).unwrap();
        let (Some(x), Some(y)) = (point(space, &a), point(space, &b)) else { return Ok(()) };
        prop_assert!(x.distance(&x).unwrap() < 1e-7);
        if x.gauge_distance(&y) > 1e-6 {
            prop_assert!(x.distance(&y).unwrap() > 0.0);
        }
    }

    #[test]
    fn tangent_form_identity(theta in 0.05..3.1f64, rho in 1.6..3.0f64) {
        let r = rho - FRAC_PI_2;
        prop_assume!((r - theta).abs() > 1e-3 && (theta - r - PI).abs() > 1e-3);
        let p = predicted_spectrum(&[(theta, 1)], FRAC_PI_2, 0, r).unwrap();
        let want = (rho - theta).tan();
        prop_assert!((p[0].0 - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gauss_map_is_orthogonal_and_phase_invariant(seed in 0u64..1000, theta in 0.0..2.0 * PI) {
        let cubic = AlgebraicHypersurface::from_terms(&[
            (1.0, 0.0, &[3, 0, 0]),
            (1.0, 0.0, &[0, 3, 0]),
            (1.0, 0.0, &[0, 0, 3]),
            (0.0, 2.0, &[1, 1, 1]),
        ]).unwrap();
        for f in [AlgebraicHypersurface::quadric(3), cubic] {
            let x = sample_variety(&f, 1, seed).unwrap().remove(0);
            let y = gauss_point(&f, &x).unwrap();
            let h = x.space().hermitian_form(x.coords(), y.coords()).unwrap();
            prop_assert!(h.norm() < 1e-10);
            let rotated = x.coords().map(|z| z * Complex64::from_polar(1.0, theta));
            let raw = f.gradient(&rotated).unwrap().map(|w| w.conj());
            let y2 = ModelPoint::new(x.space(), raw).unwrap();
            prop_assert!(y.gauge_distance(&y2) < 1e-12);
        }
    }

    #[test]
    fn orientation_flip_negates_spectrum(r in 0.2..1.3f64, u0 in 0.4..2.7f64, u1 in 0.4..2.7f64, u2 in 0.4..5.8f64) {
        let patch = geodesic_sphere(SpaceForm::projective(2).unwrap(), r)
            .unwrap()
            .patch(NormalOrientation::Inward)
            .unwrap();
        let u = [u0, u1, u2];
        let a = patch.spectrum(&u).unwrap();
        let b = patch.flipped().spectrum(&u).unwrap();
        let mut neg: Vec<f64> = a.eigenvalues.iter().map(|e| -e).collect();
        neg.reverse();
        prop_assert_eq!(neg, b.eigenvalues);
        prop_assert_eq!(a.mu, -b.mu);
        prop_assert!((a.hopf_defect - b.hopf_defect).abs() < 1e-12);
    }

    #[test]
    fn structure_identities_on_tubes(r in 0.2..1.3f64, b0 in -0.7..0.7f64, b1 in -0.7..0.7f64, f in 0.4..5.8f64) {
        let tube = tube_over_linear(SpaceForm::projective(2).unwrap(), 1, r).unwrap();
        let patch = tube.patch(NormalOrientation::Outward).unwrap();
        let frame = patch.frame_at(&[b0, b1, f]).unwrap();
        prop_assert!(structure_tensors(&frame).max_identity_residual() < 1e-9);
    }
}
