//! Homogeneous polynomials in `n + 1` complex variables and their plain-text
//! format.
//!
//! One monomial per line, `<re> <im> : e0 e1 ... en`; blank lines and `#`
//! comments are ignored.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::space_forms::CVec;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: Complex64,
}

/// Zero set of a homogeneous polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicHypersurface {
    monomials: Vec<Monomial>,
    vars: usize,
    degree: u32,
}

fn pow(z: Complex64, e: u32) -> Complex64 {
    match e {
        0 => Complex64::new(1.0, 0.0),
        1 => z,
        _ => z.powu(e),
    }
}

impl AlgebraicHypersurface {
    pub fn new(monomials: Vec<Monomial>) -> Result<Self> {
        let first = monomials
            .first()
            .ok_or_else(|| GeomError::Precondition("polynomial has no monomials".into()))?;
        let vars = first.exponents.len();
        let degree: u32 = first.exponents.iter().sum();
        if vars < 3 {
            return Err(GeomError::Precondition(format!(
                "need at least 3 homogeneous variables, got {vars}"
            )));
        }
        if degree == 0 {
            return Err(GeomError::Precondition("constant polynomial".into()));
        }
        for m in &monomials {
            if m.exponents.len() != vars {
                return Err(GeomError::Dimension {
                    expected: vars,
                    got: m.exponents.len(),
                });
            }
            let d: u32 = m.exponents.iter().sum();
            if d != degree {
                return Err(GeomError::Precondition(format!(
                    "not homogeneous: monomial of degree {d} in a degree-{degree} polynomial"
                )));
            }
        }
        Ok(Self {
            monomials,
            vars,
            degree,
        })
    }

    pub fn from_terms(terms: &[(f64, f64, &[u32])]) -> Result<Self> {
        Self::new(
            terms
                .iter()
                .map(|(re, im, e)| Monomial {
                    exponents: e.to_vec(),
                    coefficient: Complex64::new(*re, *im),
                })
                .collect(),
        )
    }

    /// `z_0^2 + ... + z_n^2`.
    pub fn quadric(n: usize) -> Self {
        let monomials = (0..=n)
            .map(|j| {
                let mut e = vec![0; n + 1];
                e[j] = 2;
                Monomial {
                    exponents: e,
                    coefficient: Complex64::new(1.0, 0.0),
                }
            })
            .collect();
        Self::new(monomials).expect("quadric is homogeneous")
    }

    /// The coordinate hyperplane `z_k = 0`.
    pub fn coordinate_hyperplane(n: usize, k: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[k] = 1;
        Self::new(vec![Monomial {
            exponents: e,
            coefficient: Complex64::new(1.0, 0.0),
        }])
        .expect("linear form is homogeneous")
    }

    /// `x0^6 x3^2 + x1^3 x2^5` in `CP^3`, singular at `(1, 0, 0, 0)`.
    pub fn singular_sextic() -> Self {
        Self::from_terms(&[(1.0, 0.0, &[6, 0, 0, 2]), (1.0, 0.0, &[0, 3, 5, 0])])
            .expect("sextic is homogeneous")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut monomials = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GeomError::Parse {
                line: line_no,
                message,
            };
            let (coef, exps) = line
                .split_once(':')
                .ok_or_else(|| err("expected `<re> <im> : e0 e1 ...`".into()))?;
            let parts: Vec<&str> = coef.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(err(format!(
                    "expected two coefficient fields, found {}",
                    parts.len()
                )));
            }
            let re: f64 = parts[0]
                .parse()
                .map_err(|_| err(format!("bad real part `{}`", parts[0])))?;
            let im: f64 = parts[1]
                .parse()
                .map_err(|_| err(format!("bad imaginary part `{}`", parts[1])))?;
            let exponents = exps
                .split_whitespace()
                .map(|e| {
                    e.parse::<u32>()
                        .map_err(|_| err(format!("bad exponent `{e}`")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if let Some(prev) = monomials.first().map(|m: &Monomial| m.exponents.len()) {
                if prev != exponents.len() {
                    return Err(err(format!(
                        "expected {prev} exponents, found {}",
                        exponents.len()
                    )));
                }
                let d0: u32 = monomials[0].exponents.iter().sum();
                let d: u32 = exponents.iter().sum();
                if d != d0 {
                    return Err(err(format!("not homogeneous: degree {d}, expected {d0}")));
                }
            }
            monomials.push(Monomial {
                exponents,
                coefficient: Complex64::new(re, im),
            });
        }
        if monomials.is_empty() {
            return Err(GeomError::Parse {
                line: text.lines().count().max(1),
                message: "no monomials".into(),
            });
        }
        Self::new(monomials)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.monomials {
            let exps: Vec<String> = m.exponents.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(
                out,
                "{} {} : {}",
                m.coefficient.re,
                m.coefficient.im,
                exps.join(" ")
            );
        }
        out
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of homogeneous variables, `n + 1`.
    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Complex dimension `n` of the ambient projective space.
    pub fn n(&self) -> usize {
        self.vars - 1
    }

    /// Sum of coefficient moduli, used to scale residual thresholds.
    pub fn scale(&self) -> f64 {
        self.monomials.iter().map(|m| m.coefficient.norm()).sum()
    }

    fn check_len(&self, z: &CVec) -> Result<()> {
        if z.len() != self.vars {
            return Err(GeomError::Dimension {
                expected: self.vars,
                got: z.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: &CVec) -> Result<Complex64> {
        self.check_len(z)?;
        Ok(self
            .monomials
            .iter()
            .map(|m| {
                m.exponents
                    .iter()
                    .zip(z.iter())
                    .fold(m.coefficient, |acc, (&e, &x)| acc * pow(x, e))
            })
            .sum())
    }

    /// `sum |c| prod |z_j|^e_j`, the size of the terms that cancel in `f(z)`.
    pub fn eval_abs(&self, z: &CVec) -> Result<f64> {
        self.check_len(z)?;
        Ok(self
            .monomials
            .iter()
            .map(|m| {
                m.exponents
                    .iter()
                    .zip(z.iter())
                    .fold(m.coefficient.norm(), |acc, (&e, x)| {
                        acc * x.norm().powi(e as i32)
                    })
            })
            .sum())
    }

    /// Holomorphic gradient `(df/dz_0, ..., df/dz_n)`.
    pub fn gradient(&self, z: &CVec) -> Result<CVec> {
        self.check_len(z)?;
        let mut g = CVec::zeros(self.vars);
        for m in &self.monomials {
            for k in 0..self.vars {
                let ek = m.exponents[k];
                if ek == 0 {
                    continue;
                }
                let mut term = m.coefficient * ek as f64;
                for (j, (&e, &x)) in m.exponents.iter().zip(z.iter()).enumerate() {
                    term *= pow(x, if j == k { e - 1 } else { e });
                }
                g[k] += term;
            }
        }
        Ok(g)
    }

    /// Holomorphic Hessian `d^2 f / dz_j dz_k`.
    pub fn hessian(&self, z: &CVec) -> Result<DMatrix<Complex64>> {
        self.check_len(z)?;
        let v = self.vars;
        let mut h = DMatrix::<Complex64>::zeros(v, v);
        for m in &self.monomials {
            for j in 0..v {
                for k in 0..v {
                    let mut e = m.exponents.clone();
                    let mut c = m.coefficient;
                    if e[j] == 0 {
                        continue;
                    }
                    c *= e[j] as f64;
                    e[j] -= 1;
                    if e[k] == 0 {
                        continue;
                    }
                    c *= e[k] as f64;
                    e[k] -= 1;
                    let term = e
                        .iter()
                        .zip(z.iter())
                        .fold(c, |acc, (&ex, &x)| acc * pow(x, ex));
                    h[(j, k)] += term;
                }
            }
        }
        Ok(h)
    }

    /// Coefficients (ascending powers of `t`) of `t -> f(q + t w)`, expanded
    /// monomial by monomial.
    pub fn restrict_to_line(&self, q: &CVec, w: &CVec) -> Result<Vec<Complex64>> {
        self.check_len(q)?;
        self.check_len(w)?;
        let d = self.degree as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
        for m in &self.monomials {
            let mut poly = vec![m.coefficient];
            for (k, &e) in m.exponents.iter().enumerate() {
                for _ in 0..e {
                    let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                    for (i, c) in poly.iter().enumerate() {
                        next[i] += c * q[k];
                        next[i + 1] += c * w[k];
                    }
                    poly = next;
                }
            }
            for (slot, c) in out.iter_mut().zip(poly) {
                *slot += c;
            }
        }
        Ok(out)
    }

    /// Roots `t` of `f(q + t w) = 0`, from the companion matrix and polished
    /// by Newton steps. Ordered by modulus.
    pub fn line_roots(&self, q: &CVec, w: &CVec) -> Result<Vec<Complex64>> {
        let coeffs = self.restrict_to_line(q, w)?;
        let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if big == 0.0 {
            return Err(GeomError::Precondition(
                "line lies inside the variety".into(),
            ));
        }
        let mut deg = coeffs.len() - 1;
        while deg > 0 && coeffs[deg].norm() <= 1e-14 * big {
            deg -= 1;
        }
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = coeffs[deg];
        let mut companion = DMatrix::<Complex64>::zeros(deg, deg);
        for i in 1..deg {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..deg {
            companion[(i, deg - 1)] = -coeffs[i] / lead;
        }
        let eig = nalgebra::Schur::new(companion)
            .eigenvalues()
            .ok_or_else(|| GeomError::Numerical("companion eigenvalues failed".into()))?;
        let p = &coeffs[..=deg];
        let eval = |t: Complex64| -> (Complex64, Complex64) {
            let mut v = Complex64::new(0.0, 0.0);
            let mut dv = Complex64::new(0.0, 0.0);
            for c in p.iter().rev() {
                dv = dv * t + v;
                v = v * t + c;
            }
            (v, dv)
        };
        let mut roots: Vec<Complex64> = eig
            .iter()
            .map(|&t0| {
                let mut t = t0;
                for _ in 0..8 {
                    let (v, dv) = eval(t);
                    if dv.norm() == 0.0 {
                        break;
                    }
                    let step = v / dv;
                    let next = t - step;
                    if eval(next).0.norm() > v.norm() {
                        break;
                    }
                    t = next;
                    if step.norm() <= 1e-16 * (1.0 + t.norm()) {
                        break;
                    }
                }
                t
            })
            .collect();
        roots.sort_by(|a, b| {
            a.norm()
                .total_cmp(&b.norm())
                .then(a.im.total_cmp(&b.im))
                .then(a.re.total_cmp(&b.re))
        });
        Ok(roots)
    }

    /// Normalized points of `f = 0` in `CP^n` whose gradient clears
    /// `smooth_tol * scale()`: intersections with random complex lines.
    pub fn sample_smooth_points<R: rand::Rng + ?Sized>(
        &self,
        count: usize,
        smooth_tol: f64,
        rng: &mut R,
    ) -> Result<Vec<CVec>> {
        let mut out: Vec<CVec> = Vec::with_capacity(count);
        let max_lines = 50 * (count + 1);
        let random_vec = |rng: &mut R| -> CVec {
            CVec::from_iterator(
                self.vars,
                (0..self.vars)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
            )
        };
        for _ in 0..max_lines {
            if out.len() >= count {
                break;
            }
            let q = random_vec(rng);
            let w = random_vec(rng);
            let roots = match self.line_roots(&q, &w) {
                Ok(r) => r,
                Err(_) => continue,
            };
            for t in roots {
                if out.len() >= count {
                    break;
                }
                let z = &q + &w * t;
                let norm = z.norm();
                if norm < 1e-8 {
                    continue;
                }
                let z = z.unscale(norm);
                let smooth = self.gradient(&z)?.norm() > smooth_tol * self.scale();
                let on = self.eval(&z)?.norm() <= 1e-12 * self.scale();
                if smooth && on {
                    out.push(z);
                }
            }
        }
        if out.len() < count {
            return Err(GeomError::Numerical(format!(
                "found only {} of {count} smooth points",
                out.len()
            )));
        }
        Ok(out)
    }

    /// `|sum z_j df/dz_j - d f(z)| / (1 + |d f(z)|)`.
    pub fn euler_residual(&self, z: &CVec) -> Result<f64> {
        let f = self.eval(z)?;
        let g = self.gradient(z)?;
        let lhs: Complex64 = z.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
        let rhs = f * self.degree as f64;
        Ok((lhs - rhs).norm() / (1.0 + rhs.norm() + lhs.norm()))
    }
}
