//! Browser bindings for a few hopf-core computations.
//!
//! Every export has a plain Rust twin (`*_rows`) so it can be tested
//! natively; the wasm wrappers only flatten the rows into typed arrays.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use hopf_core::canned::{
    geodesic_sphere, tube_over_linear, tube_over_quadric, tube_over_real_form,
};
use hopf_core::duality::tube_duality_check;
use hopf_core::hypersurface::{Chart, NormalOrientation};
use hopf_core::polynomial::AlgebraicHypersurface;
use hopf_core::space_forms::SpaceForm;
use hopf_core::tubes::{
    expand_spectrum, focal_cell_sweep, BaseSubmanifold, HypersurfaceBase, TubeSpec,
    DEFAULT_RANK_TOL,
};
use wasm_bindgen::prelude::*;

/// Hypersurfaces of CP^2 offered by the page.
pub const KINDS: [&str; 4] = ["sphere", "cp1", "rp2", "quadric"];

pub fn tube(kind: &str, r: f64) -> Result<TubeSpec, String> {
    let cp2 = SpaceForm::projective(2).map_err(|e| e.to_string())?;
    let t = match kind {
        "sphere" => geodesic_sphere(cp2, r),
        "cp1" => tube_over_linear(cp2, 1, r),
        "rp2" => tube_over_real_form(2, r),
        "quadric" => tube_over_quadric(2, r),
        _ => return Err(format!("unknown hypersurface '{kind}'")),
    };
    t.map_err(|e| e.to_string())
}

fn center(t: &TubeSpec) -> Vec<f64> {
    t.domain().iter().map(|(a, b)| 0.5 * (a + b)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub radius: f64,
    /// Finite-difference principal curvatures, outward normal; empty if the
    /// shape operator could not be computed.
    pub measured: Vec<f64>,
    /// Closed-form values, empty when the base has no model.
    pub predicted: Vec<f64>,
}

/// Principal curvatures at the chart center for `steps - 1` radii evenly
/// spaced in (0, pi/2).
pub fn spectrum_rows(kind: &str, steps: usize) -> Result<Vec<SpectrumRow>, String> {
    if steps < 2 {
        return Err("need at least 2 steps".into());
    }
    let mut rows = Vec::with_capacity(steps - 1);
    for i in 1..steps {
        let r = FRAC_PI_2 * i as f64 / steps as f64;
        let t = tube(kind, r)?;
        let u = center(&t);
        let measured = t
            .patch(NormalOrientation::Outward)
            .and_then(|p| p.spectrum(&u))
            .map(|s| s.eigenvalues)
            .unwrap_or_default();
        let nb = t.base().base_domain().len();
        let predicted = match t.model(&u[..nb]) {
            Ok(Some(m)) => m
                .predicted(r)
                .map(|p| expand_spectrum(&p))
                .unwrap_or_default(),
            _ => Vec::new(),
        };
        rows.push(SpectrumRow {
            radius: r,
            measured,
            predicted,
        });
    }
    Ok(rows)
}

/// Minimal Jacobian rank of the normal exponential map in each of `cells`
/// radius cells covering (0, pi), seen from the chart center.
pub fn focal_rows(kind: &str, radius: f64, cells: usize) -> Result<Vec<usize>, String> {
    let t = tube(kind, radius)?;
    let u = center(&t);
    let base: Arc<dyn BaseSubmanifold> = Arc::new(HypersurfaceBase::new(t));
    let rows = focal_cell_sweep(base, (0.0, PI), cells, &[u], DEFAULT_RANK_TOL)
        .map_err(|e| e.to_string())?;
    Ok(rows.iter().map(|r| r.min_rank).collect())
}

/// `(radius, direct residual, membership residual)` of the tube/dual
/// distance identity for the quadric in CP^n.
pub fn duality_rows(
    n: usize,
    steps: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<[f64; 3]>, String> {
    let f = AlgebraicHypersurface::quadric(n);
    (1..steps)
        .map(|i| {
            let r = FRAC_PI_2 * i as f64 / steps as f64;
            tube_duality_check(&f, r, samples, seed)
                .map(|rep| [r, rep.direct_residual, rep.membership_residual])
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

/// Rows of `1 + 6` numbers: radius, three measured and three predicted
/// curvatures (NaN where unavailable).
#[wasm_bindgen]
pub fn spectrum_sweep(kind: &str, steps: usize) -> Result<Vec<f64>, JsValue> {
    let rows = spectrum_rows(kind, steps).map_err(js)?;
    let mut out = Vec::with_capacity(rows.len() * 7);
    for r in rows {
        out.push(r.radius);
        for v in [&r.measured, &r.predicted] {
            for k in 0..3 {
                out.push(v.get(k).copied().unwrap_or(f64::NAN));
            }
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn focal_sweep(kind: &str, radius: f64, cells: usize) -> Result<Vec<u32>, JsValue> {
    Ok(focal_rows(kind, radius, cells)
        .map_err(js)?
        .into_iter()
        .map(|r| r as u32)
        .collect())
}

/// Rows of 3 numbers, see [`duality_rows`].
#[wasm_bindgen]
pub fn duality_sweep(
    n: usize,
    steps: usize,
    samples: usize,
    seed: u32,
) -> Result<Vec<f64>, JsValue> {
    Ok(duality_rows(n, steps, samples, seed as u64)
        .map_err(js)?
        .into_iter()
        .flatten()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cot(x: f64) -> f64 {
        1.0 / x.tan()
    }

    #[test]
    fn sphere_rows_match_closed_form() {
        let rows = spectrum_rows("sphere", 8).unwrap();
        assert_eq!(rows.len(), 7);
        for row in rows {
            let r = row.radius;
            let mut want = vec![-cot(r), -cot(r), 2.0 * cot(2.0 * (FRAC_PI_2 - r))];
            want.sort_by(f64::total_cmp);
            assert_eq!(row.measured.len(), 3);
            for (a, b) in row.measured.iter().zip(&want) {
                assert!(
                    (a - b).abs() < 1e-5,
                    "r={r}: {:?} vs {want:?}",
                    row.measured
                );
            }
            let mut p = row.predicted.clone();
            p.sort_by(f64::total_cmp);
            for (a, b) in p.iter().zip(&want) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn unknown_kind_is_an_error() {
        assert!(tube("torus", 0.3).is_err());
        assert!(spectrum_rows("sphere", 1).is_err());
    }

    #[test]
    fn every_kind_builds() {
        for k in KINDS {
            let rows = spectrum_rows(k, 4).unwrap();
            assert!(rows.iter().any(|r| r.measured.len() == 3), "{k}");
        }
    }

    #[test]
    fn cp1_tube_dips_at_focal_cells() {
        let ranks = focal_rows("cp1", PI / 6.0, 50).unwrap();
        assert_eq!(ranks.len(), 50);
        let dips: Vec<usize> = (0..50).filter(|&i| ranks[i] < 3).collect();
        assert_eq!(dips, vec![8, 33]);
    }

    #[test]
    fn quadric_duality_residuals_are_small() {
        let rows = duality_rows(2, 6, 5, 3).unwrap();
        assert_eq!(rows.len(), 5);
        for [r, direct, _] in rows {
            assert!(r > 0.0 && r < FRAC_PI_2);
            assert!(direct < 1e-8);
        }
    }

    #[test]
    fn flattened_layout() {
        let v = spectrum_sweep("cp1", 3).unwrap();
        assert_eq!(v.len(), 2 * 7);
        let d = duality_sweep(2, 3, 2, 1).unwrap();
        assert_eq!(d.len(), 2 * 3);
    }
}
