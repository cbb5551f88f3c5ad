//! Rank of the differential of the normal exponential map.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::{BaseSubmanifold, TubeSpec};
use crate::error::{GeomError, Result};
use crate::hypersurface::{sample_grid, Chart};
use crate::linalg;
use crate::space_forms::CVec;

pub const DEFAULT_RANK_TOL: f64 = 1e-6;
/// Central-difference step for Jacobians of `Phi_r`.
pub const RANK_FD_STEP: f64 = 1e-5;
/// Singular values are compared against `tol_ratio * max(sigma_max, 1)`, so
/// a map that collapses every direction still reads as rank zero.
pub const RANK_REFERENCE_FLOOR: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RankMeasurement {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `max(sigma_max, RANK_REFERENCE_FLOOR)`.
    pub reference: f64,
}

impl RankMeasurement {
    /// `sigma_min / reference`.
    pub fn min_ratio(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0) / self.reference
    }
}

/// Rank of the real `2n x (2n-1)` Jacobian of `Phi_r` at `params`, in a
/// `g`-orthonormal basis of the horizontal space at the image point.
pub fn jacobian_rank(spec: &TubeSpec, params: &[f64], tol_ratio: f64) -> Result<RankMeasurement> {
    let dom = spec.domain();
    if params.len() != dom.len() {
        return Err(GeomError::Dimension {
            expected: dom.len(),
            got: params.len(),
        });
    }
    let h = RANK_FD_STEP;
    for (axis, (&x, &(lo, hi))) in params.iter().zip(&dom).enumerate() {
        if !(x >= lo + 2.0 * h && x <= hi - 2.0 * h) {
            return Err(GeomError::OutOfDomain {
                axis,
                value: x,
                lo: lo + 2.0 * h,
                hi: hi - 2.0 * h,
            });
        }
    }
    let space = spec.space();
    let center = spec.raw_point(params)?;
    let hb = linalg::horizontal_basis(&space, &center);
    let aligned = |u: &[f64]| -> Result<CVec> {
        let p = spec.raw_point(u)?;
        let a = space.herm(&p, &center);
        if a.norm() < 0.5 {
            return Err(GeomError::Numerical(
                "neighbouring representative cannot be phase-aligned".into(),
            ));
        }
        let phase = space.alignment_phase(&p, &center);
        Ok(p.map(|z| z * phase))
    };
    let mut cols = Vec::with_capacity(dom.len());
    for axis in 0..dom.len() {
        let mut up = params.to_vec();
        let mut dn = params.to_vec();
        up[axis] += h;
        dn[axis] -= h;
        let d = (aligned(&up)? - aligned(&dn)?).unscale(2.0 * h);
        let d = space.horizontal_raw(&center, &d);
        cols.push(linalg::coordinates(&space, &hb, &d));
    }
    let jac = DMatrix::from_columns(&cols);
    let singular_values = linalg::singular_values(&jac);
    let reference = singular_values
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(RANK_REFERENCE_FLOOR);
    let rank = singular_values
        .iter()
        .filter(|&&s| s > tol_ratio * reference)
        .count();
    Ok(RankMeasurement {
        rank,
        singular_values,
        reference,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub radius: f64,
    /// `None` when every grid point failed.
    pub min_rank: Option<usize>,
    pub max_rank: Option<usize>,
    pub failures: Vec<(usize, String)>,
}

/// Rank extrema of `Phi_r` over a parameter grid for each radius.
pub fn rank_sweep(
    base: Arc<dyn BaseSubmanifold>,
    radii: &[f64],
    counts: &[usize],
    tol_ratio: f64,
) -> Result<Vec<RankRow>> {
    let probe = TubeSpec::exponential(base.clone(), 0.0);
    let points = sample_grid(&probe.domain(), counts, 3.0 * RANK_FD_STEP)?;
    let mut rows = Vec::with_capacity(radii.len());
    for &radius in radii {
        let spec = TubeSpec::exponential(base.clone(), radius);
        let mut min_rank: Option<usize> = None;
        let mut max_rank: Option<usize> = None;
        let mut failures = Vec::new();
        for (k, u) in points.iter().enumerate() {
            match jacobian_rank(&spec, u, tol_ratio) {
                Ok(m) => {
                    min_rank = Some(min_rank.map_or(m.rank, |r| r.min(m.rank)));
                    max_rank = Some(max_rank.map_or(m.rank, |r| r.max(m.rank)));
                }
                Err(e) => failures.push((k, e.to_string())),
            }
        }
        rows.push(RankRow {
            radius,
            min_rank,
            max_rank,
            failures,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellRow {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    /// Smallest rank found inside the cell over all sample points.
    pub min_rank: usize,
    /// Radius at which `min_rank` was measured.
    pub argmin_radius: f64,
    /// Smallest `sigma_min / reference` found inside the cell.
    pub min_ratio: f64,
}

const GOLDEN_ITERATIONS: usize = 80;

/// Splits `[lo, hi]` into `cells` equal radius intervals. In each interval
/// and for each sample point, `sigma_min / reference` of the Jacobian is
/// minimized over the radius by golden-section search and the rank is
/// measured at the minimizer, so that a rank drop at an isolated radius is
/// found in the cell that contains it.
pub fn focal_cell_sweep(
    base: Arc<dyn BaseSubmanifold>,
    interval: (f64, f64),
    cells: usize,
    points: &[Vec<f64>],
    tol_ratio: f64,
) -> Result<Vec<CellRow>> {
    let (lo, hi) = interval;
    if !(hi > lo) || cells == 0 || points.is_empty() {
        return Err(GeomError::Precondition(
            "cell sweep needs a nonempty interval, cells and sample points".into(),
        ));
    }
    let width = (hi - lo) / cells as f64;
    let mut rows = Vec::with_capacity(cells);
    for index in 0..cells {
        let a = lo + width * index as f64;
        let b = a + width;
        let mut best: Option<(usize, f64, f64)> = None;
        for u in points {
            let ratio = |r: f64| -> Result<RankMeasurement> {
                jacobian_rank(&TubeSpec::exponential(base.clone(), r), u, tol_ratio)
            };
            let r_star = golden_section(a, b, |r| ratio(r).map(|m| m.min_ratio()))?;
            let m = ratio(r_star)?;
            let cand = (m.rank, r_star, m.min_ratio());
            best = Some(match best {
                Some(prev) if (prev.0, prev.2) <= (cand.0, cand.2) => prev,
                _ => cand,
            });
        }
        let (min_rank, argmin_radius, min_ratio) = best.expect("points is nonempty");
        rows.push(CellRow {
            index,
            lo: a,
            hi: b,
            min_rank,
            argmin_radius,
            min_ratio,
        });
    }
    Ok(rows)
}

/// Minimizer of `f` on `[a, b]`, including the end points as candidates.
fn golden_section<F>(a: f64, b: f64, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let interior = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let fa = f(a)?;
    let fb = f(b)?;
    let mut best = interior;
    for cand in [(a, fa), (b, fb)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_kink() {
        let x = golden_section(0.0, 1.0, |t| Ok((t - 0.3719).abs())).unwrap();
        assert!((x - 0.3719).abs() < 1e-12);
        let x = golden_section(0.0, 1.0, |t| Ok(t)).unwrap();
        assert_eq!(x, 0.0);
    }
}
