use nalgebra::{DMatrix, DVector};

use super::{Frame, HypersurfacePatch, ShapeSpectrum};
use crate::error::{GeomError, Result};
use crate::linalg;
use crate::space_forms::{Curvature, TangentVector};

pub const DEFAULT_HOPF_TOL: f64 = 1e-6;
/// `|2 alpha - mu|` below which the eigenvalue pairing is not evaluated.
pub const PAIRING_POLE_GUARD: f64 = 1e-8;

/// The almost-contact structure `(phi, f, U)` induced on the tangent space.
#[derive(Debug, Clone)]
pub struct StructureTensors {
    /// `phi[(j, k)] = g(J t_k, t_j)`: tangential part of `J`.
    pub phi: DMatrix<f64>,
    /// `f(t_k) = g(J t_k, xi)`.
    pub f_form: DVector<f64>,
    /// Frame coordinates of `U = -J xi`.
    pub u_coords: DVector<f64>,
    pub u: TangentVector,
}

impl StructureTensors {
    /// Largest violation over the frame basis of the four identities
    /// `phi^2 = -I + f (x) U`, `phi U = 0`, `f o phi = 0`,
    /// `g(phi X, Y) = -g(X, phi Y)` and `g(phi X, phi Y) = g - f (x) f`.
    pub fn max_identity_residual(&self) -> f64 {
        let m = self.phi.nrows();
        let id = DMatrix::<f64>::identity(m, m);
        let fu = &self.u_coords * self.f_form.transpose();
        let r1 = (&self.phi * &self.phi + &id - fu).amax();
        let r2 = (&self.phi * &self.u_coords).amax();
        let r3 = (self.f_form.transpose() * &self.phi).amax();
        let r4 = (&self.phi + self.phi.transpose()).amax();
        let ff = &self.f_form * self.f_form.transpose();
        let r5 = (self.phi.transpose() * &self.phi - (id - ff)).amax();
        [r1, r2, r3, r4, r5].into_iter().fold(0.0, f64::max)
    }
}

pub fn structure_tensors(frame: &Frame) -> StructureTensors {
    let space = frame.space();
    let m = frame.tangent_basis.len();
    let mut phi = DMatrix::<f64>::zeros(m, m);
    let mut f_form = DVector::<f64>::zeros(m);
    for (k, tk) in frame.tangent_basis.iter().enumerate() {
        let jt = tk.j();
        for (j, tj) in frame.tangent_basis.iter().enumerate() {
            phi[(j, k)] = space.real_pairing(jt.rep(), tj.rep());
        }
        f_form[k] = space.real_pairing(jt.rep(), frame.normal.rep());
    }
    let u = frame.structure_vector();
    let u_coords = frame.coordinates(u.rep());
    StructureTensors {
        phi,
        f_form,
        u_coords,
        u,
    }
}

#[derive(Debug, Clone)]
pub struct HopfReport {
    pub samples: usize,
    pub max_defect: f64,
    pub mu_mean: f64,
    /// `max |mu - mu_mean|` over successful samples.
    pub mu_max_deviation: f64,
    /// Population standard deviation of `mu`.
    pub mu_stddev: f64,
    pub is_hopf: bool,
    /// Grid indices whose evaluation failed, with the error text.
    pub failures: Vec<(usize, String)>,
    pub mus: Vec<f64>,
    pub spectra: Vec<(usize, Vec<f64>)>,
}

impl HopfReport {
    pub(crate) fn from_results(results: Vec<(usize, Result<ShapeSpectrum>)>, tol: f64) -> Self {
        let mut failures = Vec::new();
        let mut mus = Vec::new();
        let mut spectra = Vec::new();
        let mut max_defect: f64 = 0.0;
        for (k, r) in results {
            match r {
                Ok(s) => {
                    max_defect = max_defect.max(s.hopf_defect);
                    mus.push(s.mu);
                    spectra.push((k, s.eigenvalues));
                }
                Err(e) => failures.push((k, e.to_string())),
            }
        }
        let n = mus.len().max(1) as f64;
        let mu_mean = mus.iter().sum::<f64>() / n;
        let mu_max_deviation = mus.iter().map(|m| (m - mu_mean).abs()).fold(0.0, f64::max);
        let mu_stddev = (mus.iter().map(|m| (m - mu_mean).powi(2)).sum::<f64>() / n).sqrt();
        let is_hopf = !mus.is_empty() && failures.is_empty() && max_defect <= tol;
        HopfReport {
            samples: mus.len() + failures.len(),
            max_defect,
            mu_mean,
            mu_max_deviation,
            mu_stddev,
            is_hopf,
            failures,
            mus,
            spectra,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingEntry {
    pub alpha: f64,
    /// `(mu alpha + 2c) / (2 alpha - mu)`, `None` at the pole.
    pub partner: Option<f64>,
    /// Distance from the partner to the transverse spectrum.
    pub distance: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Lemma4Residuals {
    pub mu: f64,
    /// `||-2c phi - mu (phi A + A phi) + 2 A phi A||` (operator norm).
    pub identity_a_residual: f64,
    /// Max pairing distance over applicable eigenvalues, `None` if every
    /// eigenvalue sits at the pole.
    pub pairing_residual: Option<f64>,
    pub pairs: Vec<PairingEntry>,
}

/// Checks the structure equation `-2c phi = mu (phi A + A phi) - 2 A phi A`
/// and the induced pairing `alpha -> (mu alpha + 2c)/(2 alpha - mu)` of the
/// principal curvatures transverse to `U` at a Hopf point.
pub fn lemma4_residuals(patch: &HypersurfacePatch, u: &[f64], tol: f64) -> Result<Lemma4Residuals> {
    let spec = patch.spectrum(u)?;
    lemma4_from_spectrum(&spec, tol)
}

pub(crate) fn lemma4_from_spectrum(spec: &ShapeSpectrum, tol: f64) -> Result<Lemma4Residuals> {
    if spec.hopf_defect > tol {
        return Err(GeomError::NotHopf {
            defect: spec.hopf_defect,
            tol,
        });
    }
    let c = spec.space.c();
    let st = structure_tensors(&spec.shape.frame);
    let a = &spec.shape.matrix;
    let phi = &st.phi;
    let mu = spec.mu;
    let lhs = phi * (-2.0 * c);
    let rhs = (phi * a + a * phi) * mu - a * phi * a * 2.0;
    let identity_a_residual = linalg::operator_norm(&(lhs - rhs));

    let transverse = spec.transverse_eigenvalues();
    let pairs: Vec<PairingEntry> = transverse
        .iter()
        .map(|&alpha| {
            let den = 2.0 * alpha - mu;
            if den.abs() < PAIRING_POLE_GUARD {
                return PairingEntry {
                    alpha,
                    partner: None,
                    distance: None,
                };
            }
            let partner = (mu * alpha + 2.0 * c) / den;
            let distance = transverse
                .iter()
                .map(|b| (b - partner).abs())
                .fold(f64::INFINITY, f64::min);
            PairingEntry {
                alpha,
                partner: Some(partner),
                distance: Some(distance),
            }
        })
        .collect();
    let pairing_residual = pairs.iter().filter_map(|p| p.distance).reduce(f64::max);
    Ok(Lemma4Residuals {
        mu,
        identity_a_residual,
        pairing_residual,
        pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MiquelOutcome {
    Checked {
        lhs: f64,
        rhs: f64,
        satisfied: bool,
    },
    /// The cotangent argument sits at a pole.
    Inapplicable,
}

/// The rigidity inequality
/// `mu >= 2 cot(2 arccot[((2n-1)H - mu)/(2n-2)])`, with `arccot` valued in
/// `(0, pi)`.
pub fn miquel_check(spectrum: &ShapeSpectrum) -> Result<MiquelOutcome> {
    if spectrum.space.curvature() != Curvature::Projective {
        return Err(GeomError::Precondition(
            "the rigidity inequality is stated in CP^n".into(),
        ));
    }
    Ok(miquel_inequality(
        spectrum.space.n(),
        spectrum.mean_curvature,
        spectrum.mu,
    ))
}

/// The inequality of [`miquel_check`] for given `n`, `H` and `mu`.
pub fn miquel_inequality(n: usize, mean_curvature: f64, mu: f64) -> MiquelOutcome {
    let n = n as f64;
    let x = ((2.0 * n - 1.0) * mean_curvature - mu) / (2.0 * n - 2.0);
    // 2 arccot(x) = pi is the pole of cot.
    if x.abs() < 1e-12 {
        return MiquelOutcome::Inapplicable;
    }
    let theta = std::f64::consts::FRAC_PI_2 - x.atan();
    let rhs = 2.0 / (2.0 * theta).tan();
    MiquelOutcome::Checked {
        lhs: mu,
        rhs,
        satisfied: mu >= rhs - 1e-9,
    }
}
