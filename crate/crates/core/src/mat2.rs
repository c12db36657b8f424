//! Dense complex 2x2 matrices.
//!
//! Everything the channel algebra needs — products, adjoints, determinants,
//! inverses, a unitarity deficit and 2x2 singular values — in closed form.
//! Entries are row-major: `[a11, a12, a21, a22]`.

use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [C64; 4],
}

impl Mat2 {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Mat2 {
            e: [a11, a12, a21, a22],
        }
    }

    pub fn zero() -> Self {
        Mat2::new(C64::ZERO, C64::ZERO, C64::ZERO, C64::ZERO)
    }

    pub fn identity() -> Self {
        Mat2::new(C64::ONE, C64::ZERO, C64::ZERO, C64::ONE)
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Mat2::new(a, C64::ZERO, C64::ZERO, b)
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.e[2 * row + col]
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        Mat2 {
            e: [
                self.e[0] + other.e[0],
                self.e[1] + other.e[1],
                self.e[2] + other.e[2],
                self.e[3] + other.e[3],
            ],
        }
    }

    pub fn sub(&self, other: &Mat2) -> Mat2 {
        Mat2 {
            e: [
                self.e[0] - other.e[0],
                self.e[1] - other.e[1],
                self.e[2] - other.e[2],
                self.e[3] - other.e[3],
            ],
        }
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.e;
        let b = &other.e;
        Mat2 {
            e: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2 {
            e: [self.e[0] * s, self.e[1] * s, self.e[2] * s, self.e[3] * s],
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.e[0].conj(),
            self.e[2].conj(),
            self.e[1].conj(),
            self.e[3].conj(),
        )
    }

    pub fn det(&self) -> C64 {
        self.e[0] * self.e[3] - self.e[1] * self.e[2]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 {
            return None;
        }
        Some(Mat2::new(self.e[3] / d, -self.e[1] / d, -self.e[2] / d, self.e[0] / d))
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.e[0] * v[0] + self.e[1] * v[1],
            self.e[2] * v[0] + self.e[3] * v[1],
        ]
    }

    /// Max absolute entry.
    pub fn max_norm(&self) -> f64 {
        self.e.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// ||A* A - I||_max, zero iff unitary.
    pub fn unitarity_deficit(&self) -> f64 {
        self.adjoint().mul(self).sub(&Mat2::identity()).max_norm()
    }

    /// Singular values (largest, smallest), from the eigenvalues of A* A.
    pub fn singular_values(&self) -> (f64, f64) {
        let g = self.adjoint().mul(self);
        // g is Hermitian positive semidefinite
        let tr = g.e[0].re + g.e[3].re;
        let det = g.det().re.max(0.0);
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let l1 = (tr / 2.0 + disc).max(0.0);
        let l2 = (tr / 2.0 - disc).max(0.0);
        (l1.sqrt(), l2.sqrt())
    }

    /// A unit vector v with ||A v|| minimal; the kernel direction when A is
    /// (numerically) singular.
    pub fn null_vector(&self) -> [C64; 2] {
        // pick the better-conditioned row of the adjugate construction:
        // (a12, -a11) kills row 1, (a22, -a21) kills row 2
        let r1 = self.e[0].norm_sqr() + self.e[1].norm_sqr();
        let r2 = self.e[2].norm_sqr() + self.e[3].norm_sqr();
        let (a, b) = if r1 >= r2 {
            (self.e[1], -self.e[0])
        } else {
            (self.e[3], -self.e[2])
        };
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n == 0.0 {
            // zero matrix: any vector is in the kernel
            return [C64::ONE, C64::ZERO];
        }
        [a / n, b / n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.3, 0.1), c(0.0, 1.5), c(2.0, -1.0));
        let inv = m.inverse().unwrap();
        let deficit = m.mul(&inv).sub(&Mat2::identity()).max_norm();
        assert!(deficit < 1e-15);
    }

    #[test]
    fn diagonal_unitary_has_zero_deficit() {
        let u = Mat2::diag(C64::cis(0.7), C64::cis(-2.1));
        assert!(u.unitarity_deficit() < 1e-15);
    }

    #[test]
    fn null_vector_of_singular_matrix() {
        // rank-1: rows proportional
        let m = Mat2::new(c(1.0, 1.0), c(2.0, 0.0), c(2.0, 2.0), c(4.0, 0.0));
        let v = m.null_vector();
        let out = m.apply(v);
        assert!(out[0].norm() + out[1].norm() < 1e-15);
        let (s1, s2) = m.singular_values();
        assert!(s2 / s1 < 1e-15);
    }

    #[test]
    fn singular_values_of_diag() {
        let m = Mat2::diag(c(3.0, 0.0), c(0.0, 0.5));
        let (s1, s2) = m.singular_values();
        assert!((s1 - 3.0).abs() < 1e-14);
        assert!((s2 - 0.5).abs() < 1e-14);
    }
}
