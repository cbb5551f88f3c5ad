//! Parametrized real hypersurfaces of a complex space form and their
//! numerical Weingarten maps.
//!
//! Every derivative is a central finite difference taken on homogeneous
//! representatives that have been phase-aligned with the representative at
//! the evaluation point, then projected to the horizontal space. Along an
//! aligned curve the lifted velocity is horizontal, so the horizontal part
//! of the ordinary derivative of a horizontal field is its Levi-Civita
//! derivative in the quotient.

mod diagnostics;

pub use diagnostics::{
    lemma4_residuals, miquel_check, miquel_inequality, structure_tensors, HopfReport,
    Lemma4Residuals, MiquelOutcome, PairingEntry, StructureTensors, DEFAULT_HOPF_TOL,
};

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::linalg;
use crate::space_forms::{CVec, ModelPoint, SpaceForm, TangentVector};

pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Smallest admissible singular value of the raw tangent set.
pub const IMMERSION_TOL: f64 = 1e-6;
/// Asymmetry of the raw Weingarten matrix above which derivatives are
/// considered too noisy to symmetrize.
pub const ASYMMETRY_LIMIT: f64 = 1e-4;

/// A map from a box in `R^{2n-1}` into a space form.
pub trait Chart: Send + Sync {
    fn space(&self) -> SpaceForm;

    /// Per-axis closed intervals of the parameter box.
    fn domain(&self) -> Vec<(f64, f64)>;

    fn eval(&self, u: &[f64]) -> Result<ModelPoint>;

    /// A point the inward normal points towards (sphere center, tube base
    /// point). Charts without one fall back to a determinant orientation.
    fn focus(&self, _u: &[f64]) -> Result<Option<ModelPoint>> {
        Ok(None)
    }

    fn dim(&self) -> usize {
        self.domain().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalOrientation {
    Inward,
    Outward,
}

impl NormalOrientation {
    pub fn flipped(self) -> Self {
        match self {
            Self::Inward => Self::Outward,
            Self::Outward => Self::Inward,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Self::Inward => 1.0,
            Self::Outward => -1.0,
        }
    }
}

/// An orthonormal tangent frame with unit normal at a chart point.
#[derive(Debug, Clone)]
pub struct Frame {
    pub base: ModelPoint,
    pub tangent_basis: Vec<TangentVector>,
    pub normal: TangentVector,
    /// Smallest singular value of the raw finite-difference tangents.
    pub min_singular_value: f64,
    /// Raw tangents = orthonormal frame times this upper-triangular matrix.
    pub(crate) r: DMatrix<f64>,
}

impl Frame {
    pub fn space(&self) -> SpaceForm {
        self.base.space()
    }

    /// Frame coordinates `g(v, t_j)` of a vector at the frame's base.
    pub fn coordinates(&self, v: &CVec) -> DVector<f64> {
        let s = self.space();
        DVector::from_iterator(
            self.tangent_basis.len(),
            self.tangent_basis
                .iter()
                .map(|t| s.real_pairing(v, t.rep())),
        )
    }

    /// The tangent vector with the given frame coordinates.
    pub fn vector(&self, coords: &DVector<f64>) -> TangentVector {
        let mut rep = CVec::zeros(self.space().ambient_len());
        for (c, t) in coords.iter().zip(&self.tangent_basis) {
            rep += t.rep() * Complex64::new(*c, 0.0);
        }
        TangentVector::from_parts_unchecked(self.base.clone(), rep)
    }

    /// The structure vector `U = -J xi`.
    pub fn structure_vector(&self) -> TangentVector {
        self.normal.j().scale(-1.0)
    }
}

/// Weingarten matrix in the orthonormal frame, with its raw asymmetry.
#[derive(Debug, Clone)]
pub struct ShapeOperator {
    pub frame: Frame,
    /// Symmetrized matrix `(A + A^T)/2`.
    pub matrix: DMatrix<f64>,
    /// `||A - A^T||` before symmetrization.
    pub asymmetry: f64,
}

#[derive(Debug, Clone)]
pub struct ShapeSpectrum {
    pub space: SpaceForm,
    /// Principal curvatures, ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<TangentVector>,
    /// Eigenvectors in frame coordinates, matching `eigenvalues`.
    pub frame_eigenvectors: Vec<DVector<f64>>,
    /// `g(AU, U)`.
    pub mu: f64,
    /// `||AU - mu U||`.
    pub hopf_defect: f64,
    /// `trace(A) / (2n - 1)`.
    pub mean_curvature: f64,
    pub shape: ShapeOperator,
}

impl ShapeSpectrum {
    /// Coordinates of `U` in the frame.
    pub fn structure_coords(&self) -> DVector<f64> {
        let f = &self.shape.frame;
        f.coordinates(f.structure_vector().rep())
    }

    /// Principal curvatures of `A` restricted to the orthogonal complement
    /// of `U`, ascending.
    pub fn transverse_eigenvalues(&self) -> Vec<f64> {
        let u = self.structure_coords();
        let m = u.len();
        let mut cols: Vec<DVector<f64>> = Vec::with_capacity(m - 1);
        let un = u.normalize();
        // Greedy completion of {U} to an orthonormal basis of R^m.
        let mut basis = vec![un.clone()];
        while cols.len() < m - 1 {
            let mut best: Option<(f64, DVector<f64>)> = None;
            for k in 0..m {
                let mut w = DVector::<f64>::zeros(m);
                w[k] = 1.0;
                for _ in 0..2 {
                    for b in &basis {
                        let p = w.dot(b);
                        w -= b * p;
                    }
                }
                let n = w.norm();
                if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                    best = Some((n, w));
                }
            }
            let (n, w) = best.unwrap();
            let w = w / n;
            basis.push(w.clone());
            cols.push(w);
        }
        let p = DMatrix::from_columns(&cols);
        let restricted = p.transpose() * &self.shape.matrix * p;
        linalg::sorted_symmetric_eigen(&restricted).0
    }
}

/// A chart together with differentiation controls and a choice of normal.
#[derive(Clone)]
pub struct HypersurfacePatch {
    chart: Arc<dyn Chart>,
    fd_step: f64,
    orientation: NormalOrientation,
    richardson: bool,
}

impl std::fmt::Debug for HypersurfacePatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HypersurfacePatch")
            .field("space", &self.chart.space())
            .field("domain", &self.chart.domain())
            .field("fd_step", &self.fd_step)
            .field("orientation", &self.orientation)
            .field("richardson", &self.richardson)
            .finish()
    }
}

impl HypersurfacePatch {
    pub fn new(chart: Arc<dyn Chart>, orientation: NormalOrientation) -> Result<Self> {
        let space = chart.space();
        if chart.dim() != space.hypersurface_dim() {
            return Err(GeomError::Dimension {
                expected: space.hypersurface_dim(),
                got: chart.dim(),
            });
        }
        Ok(Self {
            chart,
            fd_step: DEFAULT_FD_STEP,
            orientation,
            richardson: false,
        })
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        assert!(h > 0.0, "finite-difference step must be positive");
        self.fd_step = h;
        self
    }

    /// Enables two-level Richardson extrapolation `(4 D(h/2) - D(h)) / 3`.
    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn with_orientation(mut self, orientation: NormalOrientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn flipped(&self) -> Self {
        self.clone().with_orientation(self.orientation.flipped())
    }

    pub fn chart(&self) -> &Arc<dyn Chart> {
        &self.chart
    }

    pub fn space(&self) -> SpaceForm {
        self.chart.space()
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn orientation(&self) -> NormalOrientation {
        self.orientation
    }

    pub fn domain(&self) -> Vec<(f64, f64)> {
        self.chart.domain()
    }

    fn check_interior(&self, u: &[f64]) -> Result<()> {
        let dom = self.chart.domain();
        if u.len() != dom.len() {
            return Err(GeomError::Dimension {
                expected: dom.len(),
                got: u.len(),
            });
        }
        let margin = 2.0 * self.fd_step;
        for (axis, (&x, &(lo, hi))) in u.iter().zip(&dom).enumerate() {
            if !(x >= lo + margin && x <= hi - margin) {
                return Err(GeomError::OutOfDomain {
                    axis,
                    value: x,
                    lo: lo + margin,
                    hi: hi - margin,
                });
            }
        }
        Ok(())
    }

    /// Central difference of a representative-valued map along one axis,
    /// optionally Richardson-extrapolated.
    fn derivative<F>(&self, u: &[f64], axis: usize, f: F) -> Result<CVec>
    where
        F: Fn(&[f64]) -> Result<CVec>,
    {
        let central = |h: f64| -> Result<CVec> {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[axis] += h;
            dn[axis] -= h;
            Ok((f(&up)? - f(&dn)?).unscale(2.0 * h))
        };
        let h = self.fd_step;
        if self.richardson {
            let coarse = central(h)?;
            let fine = central(h / 2.0)?;
            Ok((fine * Complex64::new(4.0, 0.0) - coarse).unscale(3.0))
        } else {
            central(h)
        }
    }

    /// Chart representative at `u`, rotated to align with `reference`.
    fn aligned(&self, u: &[f64], reference: &CVec) -> Result<CVec> {
        let p = self.chart.eval(u)?;
        let s = self.space();
        let phase = s.alignment_phase(p.coords(), reference);
        Ok(p.coords().map(|z| z * phase))
    }

    /// Orthonormal frame and oriented unit normal at `u`.
    pub fn frame_at(&self, u: &[f64]) -> Result<Frame> {
        self.check_interior(u)?;
        self.frame_unchecked(u)
    }

    fn frame_unchecked(&self, u: &[f64]) -> Result<Frame> {
        let space = self.space();
        let base = self.chart.eval(u)?;
        let z = base.coords().clone();
        let m = space.hypersurface_dim();

        let mut raw = Vec::with_capacity(m);
        for axis in 0..m {
            let d = self.derivative(u, axis, |v| self.aligned(v, &z))?;
            raw.push(space.horizontal_raw(&z, &d));
        }

        let hb = linalg::horizontal_basis(&space, &z);
        let coords = DMatrix::from_columns(
            &raw.iter()
                .map(|t| linalg::coordinates(&space, &hb, t))
                .collect::<Vec<_>>(),
        );
        let sigma = linalg::singular_values(&coords);
        let min_sigma = sigma.last().copied().unwrap_or(0.0);
        if !(min_sigma > IMMERSION_TOL) {
            return Err(GeomError::DegenerateChart { sigma: min_sigma });
        }

        let (q, r) = linalg::gram_schmidt(&space, &raw, 0.0)
            .map_err(|(_, n)| GeomError::DegenerateChart { sigma: n })?;
        let mut normal = linalg::complete_basis(&space, &q, &hb, 1)
            .pop()
            .expect("one normal direction");

        let sign = self.normal_sign(u, &base, &raw, &normal)?;
        if sign < 0.0 {
            normal.neg_mut();
        }

        let tangent_basis = q
            .into_iter()
            .map(|t| TangentVector::from_parts_unchecked(base.clone(), t))
            .collect();
        Ok(Frame {
            normal: TangentVector::from_parts_unchecked(base.clone(), normal),
            base,
            tangent_basis,
            min_singular_value: min_sigma,
            r,
        })
    }

    /// `+1` if `normal` already has the requested orientation, else `-1`.
    fn normal_sign(
        &self,
        u: &[f64],
        base: &ModelPoint,
        raw: &[CVec],
        normal: &CVec,
    ) -> Result<f64> {
        let space = self.space();
        let inward = if let Some(focus) = self.chart.focus(u)? {
            let dir = base.direction_to(&focus);
            let p = space.real_pairing(normal, dir.rep());
            if p.abs() < 1e-10 * (1.0 + dir.norm()) {
                return Err(GeomError::Numerical(
                    "focus direction is tangent to the hypersurface".into(),
                ));
            }
            p.signum()
        } else {
            // Orientation of (z, iz, T_1..T_m, xi) in the real coordinates
            // of C^{n+1}; positive counts as inward.
            let z = base.coords();
            let mut cols: Vec<CVec> = vec![z.clone(), z.map(|w| w * Complex64::i())];
            cols.extend(raw.iter().cloned());
            cols.push(normal.clone());
            let dim = 2 * space.ambient_len();
            let mut mat = DMatrix::<f64>::zeros(dim, dim);
            for (j, col) in cols.iter().enumerate() {
                for (k, w) in col.iter().enumerate() {
                    mat[(2 * k, j)] = w.re;
                    mat[(2 * k + 1, j)] = w.im;
                }
            }
            mat.determinant().signum()
        };
        Ok(inward * self.orientation.sign())
    }

    /// Weingarten map `A = -(D xi)^T` in the orthonormal frame.
    pub fn shape_operator(&self, u: &[f64]) -> Result<ShapeOperator> {
        let frame = self.frame_at(u)?;
        let space = self.space();
        let z = frame.base.coords().clone();
        let m = frame.tangent_basis.len();

        let normal_at = |v: &[f64]| -> Result<CVec> {
            let f = self.frame_unchecked(v)?;
            let phase = space.alignment_phase(f.base.coords(), &z);
            Ok(f.normal.rep().map(|w| w * phase))
        };

        // b[(j, i)] = -g(D_i xi, t_j)
        let mut b = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            let d = self.derivative(u, i, normal_at)?;
            let d = space.horizontal_raw(&z, &d);
            for (j, t) in frame.tangent_basis.iter().enumerate() {
                b[(j, i)] = -space.real_pairing(&d, t.rep());
            }
        }
        let r_inv = frame
            .r
            .clone()
            .try_inverse()
            .ok_or_else(|| GeomError::Numerical("singular tangent factor".into()))?;
        let a = b * r_inv;
        let asymmetry = linalg::operator_norm(&(&a - a.transpose()));
        if asymmetry > ASYMMETRY_LIMIT {
            return Err(GeomError::NoisyDerivative { asymmetry });
        }
        let matrix = (&a + a.transpose()) * 0.5;
        Ok(ShapeOperator {
            frame,
            matrix,
            asymmetry,
        })
    }

    pub fn spectrum(&self, u: &[f64]) -> Result<ShapeSpectrum> {
        let shape = self.shape_operator(u)?;
        Ok(spectrum_of(shape))
    }

    /// Evaluates the spectrum on a regular grid with `counts[k]` samples per
    /// axis and summarizes the Hopf condition and the constancy of `mu`.
    pub fn hopf_report(&self, counts: &[usize], tol: f64) -> Result<HopfReport> {
        let points = self.grid(counts)?;
        let results: Vec<(usize, Result<ShapeSpectrum>)> = points
            .iter()
            .enumerate()
            .map(|(k, u)| (k, self.spectrum(u)))
            .collect();
        Ok(HopfReport::from_results(results, tol))
    }

    /// Regular grid inside the domain, keeping a margin of three steps.
    pub fn grid(&self, counts: &[usize]) -> Result<Vec<Vec<f64>>> {
        sample_grid(&self.chart.domain(), counts, 3.0 * self.fd_step)
    }
}

pub(crate) fn spectrum_of(shape: ShapeOperator) -> ShapeSpectrum {
    let frame = &shape.frame;
    let space = frame.space();
    let a = &shape.matrix;
    let m = a.nrows();
    let (eigenvalues, frame_eigenvectors) = linalg::sorted_symmetric_eigen(a);
    let eigenvectors = frame_eigenvectors.iter().map(|v| frame.vector(v)).collect();

    let u = frame.coordinates(frame.structure_vector().rep());
    let au = a * &u;
    let mu = u.dot(&au);
    let hopf_defect = (au - &u * mu).norm();
    let mean_curvature = a.trace() / m as f64;
    ShapeSpectrum {
        space,
        eigenvalues,
        eigenvectors,
        frame_eigenvectors,
        mu,
        hopf_defect,
        mean_curvature,
        shape,
    }
}

/// Regular grid in a box: `counts[k]` evenly spaced samples on axis `k`
/// after shrinking each interval by `margin`; a count of one takes the
/// midpoint. Points are ordered with the last axis varying fastest.
pub fn sample_grid(domain: &[(f64, f64)], counts: &[usize], margin: f64) -> Result<Vec<Vec<f64>>> {
    if counts.len() != domain.len() {
        return Err(GeomError::Dimension {
            expected: domain.len(),
            got: counts.len(),
        });
    }
    let axes: Vec<Vec<f64>> = domain
        .iter()
        .zip(counts)
        .map(|(&(lo, hi), &n)| {
            let (a, b) = (lo + margin, hi - margin);
            match n {
                0 => Vec::new(),
                1 => vec![0.5 * (a + b)],
                _ => (0..n)
                    .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
                    .collect(),
            }
        })
        .collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &x in axis {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out)
}
