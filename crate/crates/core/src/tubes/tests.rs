use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::canned::{geodesic_sphere, quadric_point, tube_over_linear, tube_over_quadric};
use crate::hypersurface::{sample_grid, DEFAULT_HOPF_TOL};
use crate::space_forms::{geodesic, CVec};

fn cp(n: usize) -> SpaceForm {
    SpaceForm::projective(n).unwrap()
}

fn cot(x: f64) -> f64 {
    1.0 / x.tan()
}

fn bases() -> Vec<Arc<dyn BaseSubmanifold>> {
    let ch2 = SpaceForm::hyperbolic(2).unwrap();
    vec![
        Arc::new(ComplexLinearBase::point(cp(2)).unwrap()),
        Arc::new(ComplexLinearBase::new(cp(3), 1).unwrap()),
        Arc::new(ComplexLinearBase::new(cp(3), 2).unwrap()),
        Arc::new(ComplexLinearBase::point(ch2).unwrap()),
        Arc::new(ComplexLinearBase::new(ch2, 1).unwrap()),
        Arc::new(RealFormBase::new(cp(2)).unwrap()),
        Arc::new(
            AlgebraicBase::new(
                AlgebraicHypersurface::quadric(2),
                &quadric_point(2).unwrap(),
            )
            .unwrap(),
        ),
    ]
}

fn full_grid(base: &dyn BaseSubmanifold, per_axis: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let bd = base.base_domain();
    let fd = base.fiber_domain();
    let mut dom = bd.clone();
    dom.extend(fd);
    sample_grid(&dom, &vec![per_axis; dom.len()], 1e-3)
        .unwrap()
        .into_iter()
        .map(|u| {
            let (b, f) = u.split_at(bd.len());
            (b.to_vec(), f.to_vec())
        })
        .collect()
}

#[test]
fn normals_are_unit_and_orthogonal_to_the_base() {
    let h = 1e-6;
    for base in bases() {
        let space = base.space();
        for (b, f) in full_grid(base.as_ref(), 2) {
            let nu = normal_sampler(base.as_ref(), &b, &f).unwrap();
            assert!((nu.norm() - 1.0).abs() < 1e-9, "{:?}", base.kind());
            let x = nu.base().coords().clone();
            let lift = base.lift(&b).unwrap();
            let phase = space.alignment_phase(&lift, &x);
            assert!((&lift * phase - &x).norm() < 1e-12);
            for axis in 0..b.len() {
                let at = |d: f64| {
                    let mut v = b.clone();
                    v[axis] += d;
                    let p = base.lift(&v).unwrap();
                    let ph = space.alignment_phase(&p, &x);
                    p * ph
                };
                let t =
                    space.horizontal_raw(&x, &((at(h) - at(-h)) / Complex64::new(2.0 * h, 0.0)));
                let cos = space.real_pairing(&t, nu.rep()) / t.norm();
                assert!(cos.abs() < 1e-9, "{:?} axis {axis}: {cos:e}", base.kind());
            }
        }
    }
}

#[test]
fn tube_points_sit_at_distance_r() {
    for base in bases() {
        let space = base.space();
        let radii: &[f64] = match space.curvature() {
            Curvature::Projective => &[0.1, 0.7, 1.4],
            Curvature::Hyperbolic => &[0.1, 0.7, 2.5],
        };
        for &r in radii {
            let spec = TubeSpec::new(base.clone(), r).unwrap();
            for (b, f) in full_grid(base.as_ref(), 2) {
                let x = ModelPoint::new(space, base.lift(&b).unwrap()).unwrap();
                let p = spec.tube_point(&b, &f).unwrap();
                assert!((x.distance(&p).unwrap() - r).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn zero_radius_limit_is_the_base_point() {
    let base: Arc<dyn BaseSubmanifold> = Arc::new(ComplexLinearBase::new(cp(3), 1).unwrap());
    let spec = TubeSpec::exponential(base.clone(), 1e-12);
    for (b, f) in full_grid(base.as_ref(), 2) {
        let x = ModelPoint::new(cp(3), base.lift(&b).unwrap()).unwrap();
        assert!(spec.tube_point(&b, &f).unwrap().gauge_distance(&x) < 1e-10);
    }
}

#[test]
fn radius_range_is_validated() {
    let base: Arc<dyn BaseSubmanifold> = Arc::new(ComplexLinearBase::point(cp(2)).unwrap());
    assert!(TubeSpec::new(base.clone(), 0.0).is_err());
    assert!(TubeSpec::new(base.clone(), FRAC_PI_2).is_err());
    assert!(TubeSpec::new(base, 1.5).is_ok());
    let h: Arc<dyn BaseSubmanifold> =
        Arc::new(ComplexLinearBase::point(SpaceForm::hyperbolic(2).unwrap()).unwrap());
    assert!(TubeSpec::new(h, 5.0).is_ok());
}

#[test]
fn point_tube_is_a_sphere() {
    let spec = geodesic_sphere(cp(2), 0.4).unwrap();
    let p0 = cp(2).basis_point(0).unwrap();
    for u in sample_grid(&spec.domain(), &[4, 4, 4], 0.0).unwrap() {
        assert!((spec.eval(&u).unwrap().distance(&p0).unwrap() - 0.4).abs() < 1e-12);
    }
}

#[test]
fn hyperplane_tube_is_sphere_about_dual_point() {
    let rho = FRAC_PI_2 - 0.4;
    let tube = tube_over_linear(cp(2), 1, rho).unwrap();
    let dual = cp(2).basis_point(2).unwrap();
    let mut worst: f64 = 0.0;
    // tube samples lie on the sphere of radius 0.4 about the dual point
    for u in sample_grid(&tube.domain(), &[5, 5, 5], 0.0).unwrap() {
        let p = tube.eval(&u).unwrap();
        worst = worst.max((p.distance(&dual).unwrap() - 0.4).abs());
    }
    // sphere samples reach the hyperplane along a normal geodesic of length rho
    let sphere = geodesic_sphere(cp(2), 0.4).unwrap();
    for u in sample_grid(&sphere.domain(), &[5, 5, 5], 0.0).unwrap() {
        let s = sphere.eval(&u).unwrap();
        let z = s.coords();
        let p = ModelPoint::from_slice(cp(2), &[z[1], z[2], z[0]]).unwrap();
        let mut foot = p.coords().clone();
        foot[2] = Complex64::new(0.0, 0.0);
        let foot = ModelPoint::new(cp(2), foot).unwrap();
        let v = foot.direction_to(&p).normalized().unwrap();
        assert!((v.rep()[2].norm() - 1.0).abs() < 1e-12);
        let q = geodesic(&foot, &v, rho).unwrap();
        worst = worst.max(q.gauge_distance(&p));
    }
    assert!(worst <= 1e-6, "Hausdorff bound {worst:e}");
}

#[test]
fn algebraic_chart_examples() {
    let f = AlgebraicHypersurface::coordinate_hyperplane(2, 2);
    let e0 = cp(2).basis_point(0).unwrap();
    for t in [0.0, 1.0, 4.0] {
        let z = tube_chart_algebraic(&f, &e0, t, 0.0).unwrap();
        assert!(z.gauge_distance(&e0) < 1e-15);
    }
    let z = tube_chart_algebraic(&f, &e0, 0.0, 0.3).unwrap();
    let want = ModelPoint::from_slice(
        cp(2),
        &[
            Complex64::new(0.3f64.cos(), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.3f64.sin(), 0.0),
        ],
    )
    .unwrap();
    assert!(z.gauge_distance(&want) < 1e-15);
    assert!((z.distance(&e0).unwrap() - 0.3).abs() < 1e-12);

    let q = AlgebraicHypersurface::quadric(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let xs = q
        .sample_smooth_points(5, SMOOTH_POINT_TOL, &mut rng)
        .unwrap();
    for x in &xs {
        let x = ModelPoint::new(cp(2), x.clone()).unwrap();
        for _ in 0..20 {
            let t = rng.gen_range(0.0..2.0 * PI);
            let r = rng.gen_range(0.0..FRAC_PI_2);
            let p = tube_chart_algebraic(&q, &x, t, r).unwrap();
            assert!((p.distance(&x).unwrap() - r).abs() < 1e-9);
        }
    }
}

#[test]
fn algebraic_chart_rejects_singular_points() {
    let f = AlgebraicHypersurface::singular_sextic();
    let p = cp(3).basis_point(0).unwrap();
    assert!(matches!(
        tube_chart_algebraic(&f, &p, 0.0, 0.3),
        Err(GeomError::SingularPoint { .. })
    ));
    let off = ModelPoint::from_slice(
        cp(2),
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.1, 0.0),
        ],
    )
    .unwrap();
    let q = AlgebraicHypersurface::coordinate_hyperplane(2, 2);
    assert!(matches!(
        tube_chart_algebraic(&q, &off, 0.0, 0.3),
        Err(GeomError::OffVariety { .. })
    ));
}

fn max_error(tube: &TubeSpec, per_axis: usize) -> f64 {
    let patch = tube.patch(NormalOrientation::Outward).unwrap();
    let nb = tube.base().base_domain().len();
    let mut worst: f64 = 0.0;
    for u in patch.grid(&vec![per_axis; patch.domain().len()]).unwrap() {
        let s = patch.spectrum(&u).unwrap();
        let model = tube.model(&u[..nb]).unwrap().unwrap();
        let pred = expand_spectrum(&model.predicted(tube.radius()).unwrap());
        for (a, b) in s.eigenvalues.iter().zip(&pred) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

#[test]
fn predicted_spectrum_matches_tube_over_line() {
    assert!(max_error(&tube_over_linear(cp(2), 1, PI / 6.0).unwrap(), 1) < 1e-5);
}

#[test]
fn fiber_multiplicity_is_fixed_by_the_oracle() {
    // CP^1 in CP^3: the unit normal sphere is S^3, giving two fiber
    // directions with -cot r.
    let r = 0.4;
    let tube = tube_over_linear(cp(3), 1, r).unwrap();
    let patch = tube.patch(NormalOrientation::Outward).unwrap();
    let u = patch.grid(&[1; 5]).unwrap().remove(0);
    let s = patch.spectrum(&u).unwrap();
    let hits = s
        .eigenvalues
        .iter()
        .filter(|e| (*e + cot(r)).abs() < 1e-5)
        .count();
    assert_eq!(hits, 2);
    assert_eq!(tube.model(&u[..2]).unwrap().unwrap().fiber_multiplicity, 2);
}

#[test]
fn hopf_eigenvalue_carries_factor_two() {
    let r = 0.5;
    let tube = tube_over_linear(cp(2), 1, r).unwrap();
    let patch = tube.patch(NormalOrientation::Outward).unwrap();
    let u = patch.grid(&[1; 3]).unwrap().remove(0);
    let s = patch.spectrum(&u).unwrap();
    assert!((s.mu - 2.0 * cot(2.0 * (FRAC_PI_2 - r))).abs() < 1e-6);
    assert!((s.mu - cot(2.0 * (FRAC_PI_2 - r))).abs() > 0.1);
}

#[test]
fn hyperbolic_point_tube_prediction() {
    let tube = geodesic_sphere(SpaceForm::hyperbolic(2).unwrap(), 0.7).unwrap();
    assert!(max_error(&tube, 2) < 1e-5);
}

fn inward_center_spectrum(tube: &TubeSpec) -> (Vec<f64>, crate::hypersurface::ShapeSpectrum) {
    let patch = tube.patch(NormalOrientation::Inward).unwrap();
    let u = patch
        .grid(&vec![1; patch.domain().len()])
        .unwrap()
        .remove(0);
    let s = patch.spectrum(&u).unwrap();
    (u, s)
}

#[test]
fn focal_radii_examples() {
    let (_, s) = inward_center_spectrum(&geodesic_sphere(cp(2), PI / 4.0).unwrap());
    let rep = focal_radii(&s).unwrap();
    let total: usize = rep.radii.iter().map(|r| r.multiplicity).sum();
    assert_eq!(total, 3);
    for r in &rep.radii {
        assert!((r.radius - PI / 4.0).abs() < 1e-5);
    }
    let (_, s) = inward_center_spectrum(&tube_over_linear(cp(2), 1, PI / 6.0).unwrap());
    let rep = focal_radii(&s).unwrap();
    assert!(rep.radii.iter().any(
        |r| (r.radius - PI / 6.0).abs() < 1e-6 && matches!(r.source, FocalSource::Hopf { .. })
    ));
    assert!(rep.radii.windows(2).all(|w| w[0].radius <= w[1].radius));
}

#[test]
fn focal_radii_reject_non_hopf_and_hyperbolic() {
    let w = crate::canned::WarpedSphere::new(cp(2), 1.0, 1e-2).unwrap();
    let p = crate::hypersurface::HypersurfacePatch::new(Arc::new(w), NormalOrientation::Inward)
        .unwrap();
    let u = p.grid(&[2, 2, 2]).unwrap().remove(0);
    let s = p.spectrum(&u).unwrap();
    assert!(s.hopf_defect > DEFAULT_HOPF_TOL);
    assert!(matches!(focal_radii(&s), Err(GeomError::NotHopf { .. })));
    let (_, s) =
        inward_center_spectrum(&geodesic_sphere(SpaceForm::hyperbolic(2).unwrap(), 0.5).unwrap());
    assert!(matches!(focal_radii(&s), Err(GeomError::Precondition(_))));
}

#[test]
fn rank_is_full_off_focal_radii() {
    let tube = tube_over_linear(cp(2), 1, 0.5).unwrap();
    let u = tube
        .patch(NormalOrientation::Inward)
        .unwrap()
        .grid(&[1; 3])
        .unwrap()
        .remove(0);
    let m = jacobian_rank(&tube, &u, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(m.rank, 3);
}

#[test]
fn rank_drops_to_even_value_at_focal_radius() {
    let r0 = PI / 6.0;
    let tube = tube_over_linear(cp(2), 1, r0).unwrap();
    let (u, _) = inward_center_spectrum(&tube);
    let base: Arc<dyn BaseSubmanifold> = Arc::new(HypersurfaceBase::new(tube));
    let at = |s: f64| {
        jacobian_rank(
            &TubeSpec::exponential(base.clone(), s),
            &u,
            DEFAULT_RANK_TOL,
        )
        .unwrap()
    };
    // back onto CP^1: the image is the complex line
    assert_eq!(at(r0).rank, 2);
    // the opposite focal sheet collapses to a point of the polar line
    assert_eq!(at(2.0 * PI / 3.0).rank, 0);
    assert_eq!(at(1.0).rank, 3);
}

#[test]
fn cell_sweep_finds_focal_cells() {
    let tube = tube_over_linear(cp(2), 1, PI / 6.0).unwrap();
    let (u, _) = inward_center_spectrum(&tube);
    let base: Arc<dyn BaseSubmanifold> = Arc::new(HypersurfaceBase::new(tube));
    let rows = focal_cell_sweep(base, (0.0, PI), 10, &[u], DEFAULT_RANK_TOL).unwrap();
    let dips: Vec<usize> = rows
        .iter()
        .filter(|r| r.min_rank < 3)
        .map(|r| r.index)
        .collect();
    // pi/6 lies in cell 1 and 2 pi/3 in cell 6
    assert_eq!(dips, vec![1, 6]);
    assert!(focal_cell_sweep(
        Arc::new(ComplexLinearBase::point(cp(2)).unwrap()),
        (1.0, 1.0),
        4,
        &[vec![0.0; 3]],
        DEFAULT_RANK_TOL
    )
    .is_err());
}

#[test]
fn rank_sweep_over_sphere() {
    let r0 = 0.6;
    let base: Arc<dyn BaseSubmanifold> =
        Arc::new(HypersurfaceBase::new(geodesic_sphere(cp(2), r0).unwrap()));
    let radii: Vec<f64> = (1..=7).map(|k| 0.2 * k as f64).collect();
    let rows = rank_sweep(base, &radii, &[2, 2, 2], DEFAULT_RANK_TOL).unwrap();
    for row in &rows {
        assert!(row.failures.is_empty());
        if (row.radius - r0).abs() < 1e-12 {
            assert_eq!(row.max_rank, Some(0));
        } else {
            assert_eq!(row.min_rank, Some(3), "radius {}", row.radius);
        }
    }
}

#[test]
fn rank_sweep_smoke_and_empty() {
    let base: Arc<dyn BaseSubmanifold> = tube_over_quadric(2, 0.3).unwrap().base().clone();
    let radii: Vec<f64> = (1..=8).map(|k| 0.18 * k as f64).collect();
    let rows = rank_sweep(base.clone(), &radii, &[2, 2, 1], DEFAULT_RANK_TOL).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.min_rank.is_some()));
    assert!(rank_sweep(base, &[], &[2, 2, 1], DEFAULT_RANK_TOL)
        .unwrap()
        .is_empty());
}

fn approach() -> ApproachCurve {
    let c = |re: f64| Complex64::new(re, 0.0);
    ApproachCurve::new(
        CVec::from_vec(vec![c(0.0), c(1.0), c(1.0), c(0.0)]),
        CVec::from_vec(vec![c(0.0), c(0.0), c(0.0), c(1.0)]),
    )
}

#[test]
fn blowup_probe_edge_cases() {
    let f = AlgebraicHypersurface::singular_sextic();
    let p = cp(3).basis_point(0).unwrap();
    assert!(singular_blowup_probe(&f, &p, 0.5, &[], &approach())
        .unwrap()
        .is_empty());
    let off = cp(3).basis_point(1).unwrap();
    let q = AlgebraicHypersurface::quadric(3);
    assert!(matches!(
        singular_blowup_probe(&q, &off, 0.5, &[0.1], &approach()),
        Err(GeomError::OffVariety { .. })
    ));
    let out = singular_blowup_probe(&f, &p, 0.5, &[1e-3], &approach()).unwrap();
    assert!(out[0].skipped.as_deref().unwrap().starts_with("singular"));
    assert!(out[0].max_abs_curvature.is_none());
}

#[test]
fn blowup_probe_agrees_with_prediction_where_smooth() {
    let f = AlgebraicHypersurface::singular_sextic();
    let p = cp(3).basis_point(0).unwrap();
    let out = singular_blowup_probe(&f, &p, 0.5, &[1e-1], &approach()).unwrap();
    let s = &out[0];
    assert!(s.skipped.is_none());
    assert!((s.max_abs_curvature.unwrap() - s.predicted_max_abs.unwrap()).abs() < 1e-5);
}

#[test]
fn blowup_probe_stays_bounded_on_quadric() {
    let q = AlgebraicHypersurface::quadric(3);
    let x = quadric_point(3).unwrap();
    let out = singular_blowup_probe(&q, &x, 0.5, &[1e-1, 1e-2, 1e-3], &approach()).unwrap();
    let first = out[0].max_abs_curvature.unwrap();
    for s in &out {
        assert!(s.max_abs_curvature.unwrap() <= 10.0 * first);
    }
}
