//! Small dense complex linear algebra: eigenpairs of 3×3 matrices and a
//! scaling-and-squaring matrix exponential.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64 as C64;

pub type CMatrix3 = Matrix3<C64>;
pub type CVector3 = Vector3<C64>;

/// Eigenvalues of a complex 3×3 matrix from its Schur form. Matrices on
/// which the QR iteration stalls (nilpotent Jordan blocks) fall back to the
/// closed-form roots of the characteristic polynomial.
pub fn eigenvalues3(m: &CMatrix3) -> [C64; 3] {
    if let Some(schur) = m.try_schur(f64::EPSILON, 1000) {
        let t = schur.unpack().1;
        return [t[(0, 0)], t[(1, 1)], t[(2, 2)]];
    }
    let a = -m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    cubic_roots_closed(a, minors, -m.determinant())
}

/// Cardano roots of `s³ + a s² + b s + c`.
pub fn cubic_roots_closed(a: C64, b: C64, c: C64) -> [C64; 3] {
    let shift = a / 3.0;
    let p = b - a * shift;
    let q = shift * shift * shift * 2.0 - b * shift + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    // Pick the larger-magnitude cube to avoid cancellation.
    let w = if (-q / 2.0 + disc).norm() >= (-q / 2.0 - disc).norm() { -q / 2.0 + disc } else { -q / 2.0 - disc };
    let u = w.powf(1.0 / 3.0);
    let rot = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut out = [C64::new(0.0, 0.0); 3];
    let mut uk = u;
    for r in out.iter_mut() {
        let v = if uk.norm() > 0.0 { -p / (uk * 3.0) } else { C64::new(0.0, 0.0) };
        *r = uk + v - shift;
        uk *= rot;
    }
    out
}

/// Right null vector of the (numerically) singular matrix `a`, taken as the
/// largest cross product of two of its rows and normalized to unit length.
fn null_vector3(a: &CMatrix3) -> CVector3 {
    let rows: [CVector3; 3] = [
        a.row(0).transpose(),
        a.row(1).transpose(),
        a.row(2).transpose(),
    ];
    // Bilinear cross product: rows · (u × v) = 0 without conjugation.
    let cross = |u: &CVector3, v: &CVector3| {
        CVector3::new(
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )
    };
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    let best = candidates
        .into_iter()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap();
    let n = best.norm();
    if n > 0.0 {
        best / C64::new(n, 0.0)
    } else {
        // Rank ≤ 1: any vector orthogonal to the non-zero row works.
        let r = rows
            .iter()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap();
        let e = if r[0].norm() > r[1].norm() {
            CVector3::new(-r[1], r[0], C64::new(0.0, 0.0))
        } else {
            CVector3::new(C64::new(0.0, 0.0), -r[2], r[1])
        };
        let n = e.norm();
        if n > 0.0 {
            e / C64::new(n, 0.0)
        } else {
            CVector3::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0))
        }
    }
}

/// Eigen-decomposition `m = V·diag(μ)·V⁻¹` of a diagonalizable 3×3 matrix.
#[derive(Clone, Debug)]
pub struct Eigen3 {
    pub values: [C64; 3],
    pub vectors: CMatrix3,
    pub inverse: CMatrix3,
}

impl Eigen3 {
    /// Returns `None` when two eigenvalues are closer than
    /// `gap_rtol · spectral radius` or when the eigenvector matrix is singular.
    pub fn new(m: &CMatrix3, gap_rtol: f64) -> Option<Self> {
        let values = eigenvalues3(m);
        let radius = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let scale = radius.max(m.norm()).max(f64::MIN_POSITIVE);
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (values[i] - values[j]).norm() < gap_rtol * scale {
                    return None;
                }
            }
        }
        let mut vectors = CMatrix3::zeros();
        for (k, mu) in values.iter().enumerate() {
            let shifted = m - CMatrix3::from_diagonal_element(*mu);
            let mut v = null_vector3(&shifted);
            // One step of inverse iteration sharpens vectors for ill-separated pairs.
            let perturbed = shifted + CMatrix3::from_diagonal_element(C64::new(scale * 1e-14, 0.0));
            if let Some(inv) = perturbed.try_inverse() {
                let w = inv * v;
                let n = w.norm();
                if n.is_finite() && n > 0.0 {
                    v = w / C64::new(n, 0.0);
                }
            }
            vectors.set_column(k, &v);
        }
        let inverse = vectors.try_inverse()?;
        if !inverse.iter().all(|z| z.is_finite()) {
            return None;
        }
        Some(Self { values, vectors, inverse })
    }

    /// `e^{m t}·x`.
    pub fn apply_exp(&self, t: f64, x: &CVector3) -> CVector3 {
        let coeffs = self.inverse * x;
        let mut out = CVector3::zeros();
        for k in 0..3 {
            let w = (self.values[k] * t).exp() * coeffs[k];
            out += self.vectors.column(k) * w;
        }
        out
    }

    /// Largest reconstruction residual `‖m·v_k − μ_k v_k‖`.
    pub fn residual(&self, m: &CMatrix3) -> f64 {
        (0..3)
            .map(|k| {
                let v = self.vectors.column(k);
                (m * v - v * self.values[k]).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Matrix exponential `e^{a}` by scaling and squaring with a Taylor series.
pub fn expm3(a: &CMatrix3) -> CMatrix3 {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut term = CMatrix3::identity();
    let mut sum = CMatrix3::identity();
    for k in 1..=20 {
        term = term * scaled / C64::new(k as f64, 0.0);
        sum += term;
        if term.iter().map(|z| z.norm()).sum::<f64>() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_eigenvalues() {
        let m = CMatrix3::from_diagonal(&CVector3::new(c(1.0, 0.0), c(-2.0, 1.0), c(0.5, -0.5)));
        let mut ev = eigenvalues3(&m).to_vec();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[0] - c(-2.0, 1.0)).norm() < 1e-14);
        assert!((ev[2] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigen_reconstructs_generic_matrix() {
        let m = CMatrix3::new(
            c(0.3, -1.0), c(0.2, 0.1), c(-0.5, 0.0),
            c(1.1, 0.0), c(-0.2, 0.4), c(0.0, 0.7),
            c(0.0, -0.3), c(0.6, 0.6), c(-1.0, 0.0),
        );
        let e = Eigen3::new(&m, 1e-8).unwrap();
        assert!(e.residual(&m) < 1e-12);
        let x = CVector3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5));
        let via_eigen = e.apply_exp(0.7, &x);
        let via_series = expm3(&(m * c(0.7, 0.0))) * x;
        assert!((via_eigen - via_series).norm() < 1e-12);
    }

    #[test]
    fn degenerate_matrix_is_rejected() {
        let jordan = CMatrix3::new(
            c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0),
        );
        assert!(Eigen3::new(&jordan, 1e-8).is_none());
    }

    #[test]
    fn expm_of_rotation() {
        let theta = 2.5;
        let a = CMatrix3::new(
            c(0.0, 0.0), c(-theta, 0.0), c(0.0, 0.0),
            c(theta, 0.0), c(0.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
        );
        let e = expm3(&a);
        assert!((e[(0, 0)] - c(theta.cos(), 0.0)).norm() < 1e-14);
        assert!((e[(1, 0)] - c(theta.sin(), 0.0)).norm() < 1e-14);
        assert!((e[(2, 2)] - c(1.0, 0.0)).norm() < 1e-15);
    }
}
