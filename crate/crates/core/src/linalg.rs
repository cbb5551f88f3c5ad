//! Small dense helpers: Gram–Schmidt in the ambient metric, horizontal
//! bases, symmetric eigen-decomposition and singular values.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::space_forms::{CVec, SpaceForm};

/// Modified Gram–Schmidt (two passes) in the metric `Re <.,.>`.
///
/// Returns the orthonormal vectors `Q` and the upper-triangular `R` with
/// `input_j = sum_i Q_i R[i][j]`, or the index and residual norm of the
/// first vector that is numerically dependent on its predecessors.
pub(crate) fn gram_schmidt(
    space: &SpaceForm,
    vectors: &[CVec],
    min_norm: f64,
) -> std::result::Result<(Vec<CVec>, DMatrix<f64>), (usize, f64)> {
    let m = vectors.len();
    let mut q: Vec<CVec> = Vec::with_capacity(m);
    let mut r = DMatrix::<f64>::zeros(m, m);
    for (j, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for _pass in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let c = space.real_pairing(&w, qi);
                r[(i, j)] += c;
                w -= qi * Complex64::new(c, 0.0);
            }
        }
        let norm = space.real_pairing(&w, &w).max(0.0).sqrt();
        if norm < min_norm {
            return Err((j, norm));
        }
        r[(j, j)] = norm;
        q.push(w.unscale(norm));
    }
    Ok((q, r))
}

/// A `g`-orthonormal real basis of the horizontal space at `x`.
pub(crate) fn horizontal_basis(space: &SpaceForm, x: &CVec) -> Vec<CVec> {
    let len = space.ambient_len();
    let mut candidates = Vec::with_capacity(2 * len);
    for k in 0..len {
        for unit in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let mut e = CVec::zeros(len);
            e[k] = unit;
            candidates.push(space.horizontal_raw(x, &e));
        }
    }
    complete_basis(space, &[], &candidates, 2 * space.n())
}

/// Extends the orthonormal family `fixed` by greedily picking the candidate
/// with the largest residual until `target` new vectors are found.
pub(crate) fn complete_basis(
    space: &SpaceForm,
    fixed: &[CVec],
    candidates: &[CVec],
    target: usize,
) -> Vec<CVec> {
    let mut basis: Vec<CVec> = fixed.to_vec();
    let mut out = Vec::with_capacity(target);
    while out.len() < target {
        let mut best: Option<(f64, CVec)> = None;
        for c in candidates {
            let mut w = c.clone();
            for _pass in 0..2 {
                for b in &basis {
                    let p = space.real_pairing(&w, b);
                    w -= b * Complex64::new(p, 0.0);
                }
            }
            let n = space.real_pairing(&w, &w).max(0.0).sqrt();
            if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                best = Some((n, w));
            }
        }
        let (n, w) = best.expect("candidate list is empty");
        let w = w.unscale(n);
        basis.push(w.clone());
        out.push(w);
    }
    out
}

/// Real coordinates of `v` against a `g`-orthonormal family.
pub(crate) fn coordinates(space: &SpaceForm, basis: &[CVec], v: &CVec) -> DVector<f64> {
    DVector::from_iterator(basis.len(), basis.iter().map(|b| space.real_pairing(v, b)))
}

/// Eigenpairs of a symmetric matrix, ascending; ties are broken by the
/// sign-normalized eigenvector in lexicographic order.
pub(crate) fn sorted_symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eig = SymmetricEigen::new(a.clone());
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..a.nrows())
        .map(|k| {
            let mut v = eig.eigenvectors.column(k).into_owned();
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.neg_mut();
                }
            }
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        la.total_cmp(lb).then_with(|| {
            va.iter()
                .zip(vb.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    pairs.into_iter().unzip()
}

/// Singular values in descending order.
pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Operator (spectral) norm.
pub(crate) fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(0.0)
}
