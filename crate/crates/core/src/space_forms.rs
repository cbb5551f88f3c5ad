//! Homogeneous-coordinate models of the complex space forms.
//!
//! `CP^n` is the unit sphere of `C^{n+1}` modulo phase, `CH^n` is the
//! `<z,z> = -1` hyperboloid of `C^{1,n}` modulo phase. Tangent vectors are
//! stored as horizontal representatives at a fixed homogeneous
//! representative of their base point, so the complex structure is plain
//! multiplication by `i` and the metric is the real part of the Hermitian
//! form.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{GeomError, Result};

pub type CVec = DVector<Complex64>;

pub const NORMALIZATION_TOL: f64 = 1e-12;
pub const HORIZONTAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    /// `CP^n`, holomorphic curvature `+4`.
    Projective,
    /// `CH^n`, holomorphic curvature `-4`.
    Hyperbolic,
}

/// A complex space form of constant holomorphic curvature `4c`, `c = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceForm {
    curvature: Curvature,
    complex_dim: usize,
}

impl SpaceForm {
    pub fn new(curvature: Curvature, complex_dim: usize) -> Result<Self> {
        if complex_dim < 2 {
            return Err(GeomError::ComplexDim(complex_dim));
        }
        Ok(Self {
            curvature,
            complex_dim,
        })
    }

    pub fn projective(n: usize) -> Result<Self> {
        Self::new(Curvature::Projective, n)
    }

    pub fn hyperbolic(n: usize) -> Result<Self> {
        Self::new(Curvature::Hyperbolic, n)
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// The sign `c` in `4c`.
    pub fn c(&self) -> f64 {
        match self.curvature {
            Curvature::Projective => 1.0,
            Curvature::Hyperbolic => -1.0,
        }
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.complex_dim
    }

    /// Length of homogeneous coordinate vectors, `n + 1`.
    pub fn ambient_len(&self) -> usize {
        self.complex_dim + 1
    }

    /// Real dimension of a hypersurface, `2n - 1`.
    pub fn hypersurface_dim(&self) -> usize {
        2 * self.complex_dim - 1
    }

    #[inline]
    fn weight(&self, j: usize) -> f64 {
        if j == 0 {
            self.c()
        } else {
            1.0
        }
    }

    /// Hermitian form, conjugate-linear in the second slot.
    pub fn hermitian_form(&self, a: &CVec, b: &CVec) -> Result<Complex64> {
        let len = self.ambient_len();
        for v in [a, b] {
            if v.len() != len {
                return Err(GeomError::Dimension {
                    expected: len,
                    got: v.len(),
                });
            }
        }
        Ok(self.herm(a, b))
    }

    /// Unchecked Hermitian form; callers guarantee matching lengths.
    #[inline]
    pub(crate) fn herm(&self, a: &CVec, b: &CVec) -> Complex64 {
        a.iter()
            .zip(b.iter())
            .enumerate()
            .map(|(j, (x, y))| x * y.conj() * self.weight(j))
            .sum()
    }

    /// `Re <a, b>`.
    #[inline]
    pub(crate) fn real_pairing(&self, a: &CVec, b: &CVec) -> f64 {
        self.herm(a, b).re
    }

    /// Scales `v` by a positive real so that `<v,v> = c`, without touching
    /// the phase.
    pub(crate) fn normalize_raw(&self, v: &CVec) -> Result<CVec> {
        let q = self.herm(v, v).re;
        if !q.is_finite() || q * self.c() <= 0.0 {
            return Err(GeomError::NotAPoint(q));
        }
        Ok(v.unscale((q * self.c()).sqrt()))
    }

    /// Horizontal part of `w` at the normalized representative `x`.
    pub(crate) fn horizontal_raw(&self, x: &CVec, w: &CVec) -> CVec {
        let a = self.herm(w, x) * self.c();
        w - x * a
    }

    /// Unit phase `u` such that `<u w, reference>` is real with the sign of
    /// `c`, i.e. `u w` is the representative of `[w]` closest to `reference`.
    pub(crate) fn alignment_phase(&self, w: &CVec, reference: &CVec) -> Complex64 {
        let a = self.herm(w, reference) * self.c();
        let m = a.norm();
        if m == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            a.conj() / m
        }
    }

    /// Raw geodesic `cos t x + sin t v` (or the hyperbolic analogue) on
    /// representatives. `v` must be unit and horizontal at `x`.
    pub(crate) fn geodesic_raw(&self, x: &CVec, v: &CVec, t: f64) -> CVec {
        let (a, b) = match self.curvature {
            Curvature::Projective => (t.cos(), t.sin()),
            Curvature::Hyperbolic => (t.cosh(), t.sinh()),
        };
        x * Complex64::new(a, 0.0) + v * Complex64::new(b, 0.0)
    }

    /// Distance between normalized representatives.
    pub(crate) fn distance_raw(&self, x: &CVec, y: &CVec) -> f64 {
        let a = self.herm(y, x);
        let perp = y - x * (a * self.c());
        // g-norm of the horizontal part: sin d (CP) or sinh d (CH).
        let s = self.real_pairing(&perp, &perp).max(0.0).sqrt();
        let m = a.norm();
        match self.curvature {
            Curvature::Projective => {
                let m = m.min(1.0 + NORMALIZATION_TOL).min(1.0);
                s.atan2(m)
            }
            Curvature::Hyperbolic => s.asinh(),
        }
    }

    /// Point `e_k` of the standard basis (for `CH^n` only `k = 0` is a point).
    pub fn basis_point(&self, k: usize) -> Result<ModelPoint> {
        let mut v = CVec::zeros(self.ambient_len());
        if k >= v.len() {
            return Err(GeomError::Dimension {
                expected: self.ambient_len(),
                got: k + 1,
            });
        }
        v[k] = Complex64::new(1.0, 0.0);
        ModelPoint::new(*self, v)
    }
}

/// Rotates `v` so that its first coordinate of largest modulus is real and
/// nonnegative. Returns the applied phase.
pub fn gauge_in_place(v: &mut CVec) -> Complex64 {
    let mut best = 0;
    let mut best_mod = -1.0;
    for (j, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mod {
            best_mod = m;
            best = j;
        }
    }
    if best_mod <= 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let phase = v[best].conj() / best_mod;
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[best] = Complex64::new(v[best].re.max(0.0), 0.0);
    phase
}

/// A point of `CP^n` or `CH^n`, held as a normalized, phase-gauged
/// homogeneous coordinate vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    space: SpaceForm,
    coords: CVec,
    form_value: f64,
}

impl ModelPoint {
    /// Normalizes and gauges an arbitrary nonzero representative.
    pub fn new(space: SpaceForm, coords: CVec) -> Result<Self> {
        if coords.len() != space.ambient_len() {
            return Err(GeomError::Dimension {
                expected: space.ambient_len(),
                got: coords.len(),
            });
        }
        let mut coords = space.normalize_raw(&coords)?;
        gauge_in_place(&mut coords);
        let form_value = space.herm(&coords, &coords).re;
        Ok(Self {
            space,
            coords,
            form_value,
        })
    }

    pub fn from_slice(space: SpaceForm, coords: &[Complex64]) -> Result<Self> {
        Self::new(space, CVec::from_column_slice(coords))
    }

    pub fn space(&self) -> SpaceForm {
        self.space
    }

    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub fn form_value(&self) -> f64 {
        self.form_value
    }

    /// Max coordinate difference between the gauged representatives.
    pub fn gauge_distance(&self, other: &ModelPoint) -> f64 {
        (&self.coords - &other.coords)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &ModelPoint) -> Result<f64> {
        if self.space != other.space {
            return Err(GeomError::Precondition(
                "points belong to different space forms".into(),
            ));
        }
        Ok(self.space.distance_raw(&self.coords, &other.coords))
    }

    /// Horizontal projection `w - c <w,x> x`.
    pub fn project_horizontal(&self, w: &CVec) -> Result<TangentVector> {
        if w.len() != self.space.ambient_len() {
            return Err(GeomError::Dimension {
                expected: self.space.ambient_len(),
                got: w.len(),
            });
        }
        Ok(TangentVector {
            base: self.clone(),
            rep: self.space.horizontal_raw(&self.coords, w),
        })
    }

    /// Unnormalized initial direction of the geodesic from `self` to
    /// `target`: the horizontal part of the phase-aligned representative of
    /// `target`. Its length is `sin d` (`sinh d` for `CH^n`).
    pub fn direction_to(&self, target: &ModelPoint) -> TangentVector {
        let s = &self.space;
        let u = s.alignment_phase(&target.coords, &self.coords);
        let y = target.coords.map(|z| z * u);
        TangentVector {
            base: self.clone(),
            rep: s.horizontal_raw(&self.coords, &y),
        }
    }
}

/// A tangent vector: base point plus a horizontal representative at the
/// base point's gauged coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: ModelPoint,
    rep: CVec,
}

impl TangentVector {
    /// Wraps `rep` after checking horizontality within [`HORIZONTAL_TOL`].
    pub fn new(base: ModelPoint, rep: CVec) -> Result<Self> {
        if rep.len() != base.space.ambient_len() {
            return Err(GeomError::Dimension {
                expected: base.space.ambient_len(),
                got: rep.len(),
            });
        }
        let pairing = base.space.herm(&rep, &base.coords).norm();
        let scale = 1.0 + rep.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if pairing > HORIZONTAL_TOL * scale {
            return Err(GeomError::Precondition(format!(
                "vector is not horizontal (|<v,x>| = {pairing:.3e})"
            )));
        }
        Ok(Self { base, rep })
    }

    pub(crate) fn from_parts_unchecked(base: ModelPoint, rep: CVec) -> Self {
        Self { base, rep }
    }

    pub fn base(&self) -> &ModelPoint {
        &self.base
    }

    pub fn rep(&self) -> &CVec {
        &self.rep
    }

    pub fn metric(&self, other: &TangentVector) -> Result<f64> {
        if self.base.space != other.base.space
            || self.base.gauge_distance(&other.base) > NORMALIZATION_TOL
        {
            return Err(GeomError::BaseMismatch);
        }
        Ok(self.base.space.real_pairing(&self.rep, &other.rep))
    }

    pub fn norm(&self) -> f64 {
        self.base
            .space
            .real_pairing(&self.rep, &self.rep)
            .max(0.0)
            .sqrt()
    }

    /// Complex structure: multiplication of the representative by `i`.
    pub fn j(&self) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            rep: self.rep.map(|z| z * Complex64::i()),
        }
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            rep: self.rep.map(|z| z * s),
        }
    }

    pub fn normalized(&self) -> Result<TangentVector> {
        let m = self.norm();
        if m == 0.0 {
            return Err(GeomError::Precondition("zero tangent vector".into()));
        }
        Ok(self.scale(1.0 / m))
    }
}

/// `F(t v)`: the point at distance `t` along the geodesic from `x` with unit
/// initial velocity `v`.
pub fn geodesic(x: &ModelPoint, v: &TangentVector, t: f64) -> Result<ModelPoint> {
    if v.base.gauge_distance(x) > NORMALIZATION_TOL {
        return Err(GeomError::BaseMismatch);
    }
    let len = v.norm();
    if (len - 1.0).abs() > 1e-9 {
        return Err(GeomError::Precondition(format!(
            "geodesic needs a unit vector, got length {len}"
        )));
    }
    let s = x.space;
    ModelPoint::new(s, s.geodesic_raw(&x.coords, &v.rep, t))
}

/// Geodesic distance: `arccos |<x,y>|` on `CP^n`, `arccosh |<x,y>|` on
/// `CH^n`, evaluated in a form that stays accurate for nearby points.
pub fn distance(x: &ModelPoint, y: &ModelPoint) -> Result<f64> {
    x.distance(y)
}
