//! Gauss map and dual varieties of algebraic hypersurfaces in `CP^n`.
//!
//! The dual projective space is identified with `CP^n` by sending a
//! hyperplane `{sum a_j z_j = 0}` to the point `[conj(a)]`, the complex line
//! Hermitian-orthogonal to it.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::polynomial::AlgebraicHypersurface;
use crate::space_forms::{CVec, Curvature, ModelPoint, SpaceForm};
use crate::tubes::{tube_chart_algebraic, SMOOTH_POINT_TOL};

/// Gauged equality tolerance for biduality.
pub const BIDUALITY_TOL: f64 = 1e-7;
/// Smallest singular value of the Gauss map differential (scaled by
/// `|grad f|`) for the dual to count as a hypersurface near the image.
pub const GAUSS_RANK_TOL: f64 = 1e-8;

fn check_point(f: &AlgebraicHypersurface, x: &ModelPoint) -> Result<SpaceForm> {
    let space = x.space();
    if space.curvature() != Curvature::Projective || space.ambient_len() != f.vars() {
        return Err(GeomError::Precondition(
            "duality needs a point of CP^n matching the polynomial".into(),
        ));
    }
    let z = x.coords();
    let residual = f.eval(z)?.norm();
    if residual > 1e-9 * f.scale() {
        return Err(GeomError::OffVariety { residual });
    }
    let gn = f.gradient(z)?.norm();
    if gn <= SMOOTH_POINT_TOL * f.scale() {
        return Err(GeomError::SingularPoint { grad_norm: gn });
    }
    Ok(space)
}

/// The point of `CP^n` dual to the tangent hyperplane at `x`:
/// `[conj(grad f(x))]`.
pub fn gauss_point(f: &AlgebraicHypersurface, x: &ModelPoint) -> Result<ModelPoint> {
    let space = check_point(f, x)?;
    let g = f.gradient(x.coords())?;
    ModelPoint::new(space, g.map(|w| w.conj()))
}

/// A smooth point of `X` with the dual point of its tangent hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidencePair {
    pub x: ModelPoint,
    pub y: ModelPoint,
}

impl IncidencePair {
    pub fn new(f: &AlgebraicHypersurface, x: ModelPoint) -> Result<Self> {
        let y = gauss_point(f, &x)?;
        Ok(Self { x, y })
    }

    /// Equal to `pi/2` by the Euler identity.
    pub fn distance(&self) -> f64 {
        self.x
            .space()
            .distance_raw(self.x.coords(), self.y.coords())
    }
}

/// Seeded smooth points of `f = 0` as model points.
pub fn sample_variety(
    f: &AlgebraicHypersurface,
    count: usize,
    seed: u64,
) -> Result<Vec<ModelPoint>> {
    let space = SpaceForm::projective(f.n())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    f.sample_smooth_points(count, SMOOTH_POINT_TOL, &mut rng)?
        .into_iter()
        .map(|z| ModelPoint::new(space, z))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeDualityReport {
    pub radius: f64,
    pub samples: usize,
    /// `max |distance(p, gauss_point(x)) - (pi/2 - r)|`.
    pub direct_residual: f64,
    /// `max |min_i distance(p, y_i) - (pi/2 - r)|` over a dense sample of
    /// the dual variety.
    pub membership_residual: f64,
    /// Largest `|distance(x, p) - r|`.
    pub radius_residual: f64,
}

/// Checks that the tube of radius `r` over `X` sits at distance
/// `pi/2 - r` from the dual variety.
pub fn tube_duality_check(
    f: &AlgebraicHypersurface,
    r: f64,
    sample_count: usize,
    seed: u64,
) -> Result<TubeDualityReport> {
    if !(r > 0.0 && r < FRAC_PI_2) {
        return Err(GeomError::Precondition(format!(
            "radius {r} outside (0, pi/2)"
        )));
    }
    let dense = sample_variety(f, 10 * sample_count.max(1), seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let mut duals: Vec<ModelPoint> = dense
        .iter()
        .map(|x| gauss_point(f, x))
        .collect::<Result<_>>()?;
    let points = sample_variety(f, sample_count, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut pairs = Vec::with_capacity(points.len());
    for x in points {
        let pair = IncidencePair::new(f, x)?;
        duals.push(pair.y.clone());
        pairs.push(pair);
    }
    let target = FRAC_PI_2 - r;
    let mut direct_residual: f64 = 0.0;
    let mut membership_residual: f64 = 0.0;
    let mut radius_residual: f64 = 0.0;
    for pair in &pairs {
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = tube_chart_algebraic(f, &pair.x, t, r)?;
        radius_residual = radius_residual.max((pair.x.distance(&p)? - r).abs());
        direct_residual = direct_residual.max((pair.y.distance(&p)? - target).abs());
        let nearest = duals
            .iter()
            .map(|y| p.space().distance_raw(p.coords(), y.coords()))
            .fold(f64::INFINITY, f64::min);
        membership_residual = membership_residual.max((nearest - target).abs());
    }
    Ok(TubeDualityReport {
        radius: r,
        samples: pairs.len(),
        direct_residual,
        membership_residual,
        radius_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BidualityOutcome {
    /// The Gauss construction on the dual returns `x`; `error` is the
    /// distance between the two points.
    Holds {
        error: f64,
    },
    Fails {
        error: f64,
    },
    /// The Gauss map is degenerate at `x`, so the dual is not a
    /// hypersurface near the image point.
    Inapplicable {
        gauss_rank_sigma: f64,
    },
}

impl BidualityOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds { .. })
    }
}

/// Applies the Gauss construction to the dual variety at `y = gauss_point(x)`.
///
/// The cone over the dual near `y` is the image of `z -> conj(grad f(z))`,
/// whose tangent space at `x` is spanned by `conj(grad f)` and
/// `conj(Hess f v)` for tangent `v`. Its Hermitian-orthogonal line is the
/// bidual point, which must equal `x`.
pub fn biduality_spot_check(f: &AlgebraicHypersurface, x: &ModelPoint) -> Result<BidualityOutcome> {
    let space = check_point(f, x)?;
    let z = x.coords();
    let g = f.gradient(z)?;
    let gn = g.norm();
    let h = f.hessian(z)?;
    let len = f.vars();

    let tangent = complex_complement(&[z.clone(), g.map(|w| w.conj())], len);
    let mut cols: Vec<CVec> = vec![g.map(|w| w.conj()).unscale(gn)];
    for v in &tangent {
        cols.push((&h * v).map(|w| w.conj()).unscale(gn));
    }
    // Non-degeneracy of the Gauss map on the tangent space.
    let images = DMatrix::from_columns(&cols[1..]);
    let sigma_min = if tangent.is_empty() {
        f64::INFINITY
    } else {
        let proj = complex_complement(&cols[..1], len);
        let mut coords = DMatrix::<Complex64>::zeros(proj.len(), images.ncols());
        for (i, b) in proj.iter().enumerate() {
            for j in 0..images.ncols() {
                coords[(i, j)] = images
                    .column(j)
                    .iter()
                    .zip(b.iter())
                    .map(|(p, q)| p * q.conj())
                    .sum();
            }
        }
        coords
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    if !(sigma_min > GAUSS_RANK_TOL) {
        return Ok(BidualityOutcome::Inapplicable {
            gauss_rank_sigma: sigma_min,
        });
    }
    let normal = complex_complement(&cols, len);
    let candidate = normal
        .first()
        .ok_or_else(|| GeomError::Numerical("dual tangent space fills the ambient space".into()))?;
    let bidual = ModelPoint::new(space, candidate.clone())?;
    let error = bidual.distance(x)?;
    Ok(if error <= BIDUALITY_TOL {
        BidualityOutcome::Holds { error }
    } else {
        BidualityOutcome::Fails { error }
    })
}

/// Orthonormal basis (standard Hermitian product) of the complement of the
/// span of `vectors` in `C^len`.
fn complex_complement(vectors: &[CVec], len: usize) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::new();
    let push = |mut v: CVec, basis: &mut Vec<CVec>| {
        for _ in 0..2 {
            for b in basis.iter() {
                let p: Complex64 = v.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            basis.push(v.unscale(n));
        }
    };
    for v in vectors {
        push(v.clone(), &mut basis);
    }
    let fixed = basis.len();
    for k in 0..len {
        let mut e = CVec::zeros(len);
        e[k] = Complex64::new(1.0, 0.0);
        push(e, &mut basis);
    }
    basis.split_off(fixed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularCandidate {
    pub point: ModelPoint,
    /// `|f|` at the normalized point.
    pub value: f64,
    pub grad_norm: f64,
}

/// Maximal number of grid points refined by descent.
const MAX_STARTS: usize = 64;
const DESCENT_ITERATIONS: usize = 100;

/// Searches for singular points of `f = 0` on the affine grids
/// `z_a = 1`, other coordinates with real and imaginary parts on
/// `grid` evenly spaced values in `[-1, 1]`. The grid points of smallest
/// `|f|^2 + |grad f|^2`, sparsest first among equals, are refined by damped gradient descent and kept when
/// `|f| <= 1e-8 scale` and `|grad f| <= 1e-6 scale`.
pub fn singular_locus_probe(
    f: &AlgebraicHypersurface,
    grid: usize,
) -> Result<Vec<SingularCandidate>> {
    let space = SpaceForm::projective(f.n())?;
    let len = f.vars();
    let scale = f.scale();
    let axis: Vec<f64> = match grid {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..grid)
            .map(|k| -1.0 + 2.0 * k as f64 / (grid - 1) as f64)
            .collect(),
    };
    if axis.is_empty() {
        return Ok(Vec::new());
    }
    let energy =
        |z: &CVec| -> Result<f64> { Ok(f.eval(z)?.norm_sqr() + f.gradient(z)?.norm_squared()) };

    let mut scored: Vec<(f64, usize, CVec)> = Vec::new();
    let reals = 2 * (len - 1);
    let total = axis.len().pow(reals as u32);
    for a in 0..len {
        for idx in 0..total {
            let mut z = CVec::zeros(len);
            z[a] = Complex64::new(1.0, 0.0);
            let mut rest = idx;
            let mut slots = (0..len).filter(|&k| k != a);
            let mut digits = Vec::with_capacity(reals);
            for _ in 0..reals {
                digits.push(axis[rest % axis.len()]);
                rest /= axis.len();
            }
            for pair in digits.chunks(2) {
                let k = slots.next().expect("slot count matches");
                z[k] = Complex64::new(pair[0], pair[1]);
            }
            let support = z.iter().filter(|w| w.norm() > 0.0).count();
            let z = z.unscale(z.norm());
            scored.push((energy(&z)?, support, z));
        }
    }
    // Ties in the energy are common on positive-dimensional singular loci;
    // sparser starts go first so coordinate points are always refined.
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(MAX_STARTS);

    let mut found: Vec<SingularCandidate> = Vec::new();
    for (_, _, start) in scored {
        let z = descend(f, start)?;
        let value = f.eval(&z)?.norm();
        let grad_norm = f.gradient(&z)?.norm();
        if value > 1e-8 * scale || grad_norm > 1e-6 * scale {
            continue;
        }
        let point = ModelPoint::new(space, z)?;
        let duplicate = found
            .iter()
            .any(|c| space.distance_raw(c.point.coords(), point.coords()) < 1e-4);
        if !duplicate {
            found.push(SingularCandidate {
                point,
                value,
                grad_norm,
            });
        }
    }
    Ok(found)
}

/// Damped steepest descent of `E = |f|^2 + |grad f|^2` on the unit sphere,
/// halving the step whenever `E` does not decrease.
fn descend(f: &AlgebraicHypersurface, start: CVec) -> Result<CVec> {
    let energy =
        |z: &CVec| -> Result<f64> { Ok(f.eval(z)?.norm_sqr() + f.gradient(z)?.norm_squared()) };
    let mut z = start;
    let mut e = energy(&z)?;
    let mut step = 0.1;
    for _ in 0..DESCENT_ITERATIONS {
        if e == 0.0 {
            break;
        }
        let fv = f.eval(&z)?;
        let g = f.gradient(&z)?;
        let h = f.hessian(&z)?;
        // dE/d conj(z_k) = f conj(g_k) + sum_j g_j conj(H_jk)
        let mut d = g.map(|w| fv * w.conj());
        for k in 0..z.len() {
            for j in 0..z.len() {
                d[k] += g[j] * h[(j, k)].conj();
            }
        }
        let dn = d.norm();
        if dn == 0.0 {
            break;
        }
        let mut accepted = false;
        while step > 1e-12 {
            let trial = &z - &d * Complex64::new(step / dn, 0.0);
            let trial = trial.unscale(trial.norm());
            let et = energy(&trial)?;
            if et < e {
                z = trial;
                e = et;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(z)
}
