//! Hyperspherical coordinates on the unit sphere `S^{d-1}` of `R^d`.

/// `x_1 = cos a_1`, `x_j = sin a_1 ... sin a_{j-1} cos a_j`,
/// `x_d = sin a_1 ... sin a_{d-1}`.
pub(crate) fn point(angles: &[f64]) -> Vec<f64> {
    let d = angles.len() + 1;
    let mut out = Vec::with_capacity(d);
    let mut prefix = 1.0;
    for &a in angles {
        out.push(prefix * a.cos());
        prefix *= a.sin();
    }
    out.push(prefix);
    out
}

/// Normalized coordinate tangents `e_k = (d x / d a_k) / |d x / d a_k|`.
/// They are mutually orthogonal and orthogonal to `point(angles)`.
pub(crate) fn frame(angles: &[f64]) -> Vec<Vec<f64>> {
    let d = angles.len() + 1;
    (0..angles.len())
        .map(|k| {
            let mut e = vec![0.0; d];
            e[k] = -angles[k].sin();
            let tail = point(&angles[k + 1..]);
            for (j, t) in tail.iter().enumerate() {
                e[k + 1 + j] = angles[k].cos() * t;
            }
            e
        })
        .collect()
}

/// Parameter box for `S^{d-1}`: polar angles kept `margin` away from the
/// coordinate poles, the last angle a full turn.
pub(crate) fn domain(sphere_dim: usize, margin: f64) -> Vec<(f64, f64)> {
    let pi = std::f64::consts::PI;
    (0..sphere_dim)
        .map(|k| {
            if k + 1 == sphere_dim {
                (0.0, 2.0 * pi)
            } else {
                (margin, pi - margin)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_orthonormal_and_matches_derivatives() {
        let a = [0.7, 1.9, 4.0];
        let x = point(&a);
        let f = frame(&a);
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        assert!((dot(&x, &x) - 1.0).abs() < 1e-15);
        for (i, ei) in f.iter().enumerate() {
            assert!(dot(ei, &x).abs() < 1e-15);
            for (j, ej) in f.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(ei, ej) - want).abs() < 1e-14);
            }
            let h = 1e-6;
            let mut ap = a;
            let mut am = a;
            ap[i] += h;
            am[i] -= h;
            let d: Vec<f64> = point(&ap)
                .iter()
                .zip(point(&am))
                .map(|(p, q)| (p - q) / (2.0 * h))
                .collect();
            let n = dot(&d, &d).sqrt();
            for (p, q) in d.iter().zip(ei) {
                assert!((p / n - q).abs() < 1e-8);
            }
        }
    }
}
