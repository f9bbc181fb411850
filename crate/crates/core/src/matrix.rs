//! Fixed-size complex linear algebra for one- and two-qubit operators.
//!
//! Two-qubit operators use the basis order `|q1 q0⟩`, with `q1` the most
//! significant bit. In every controlled construction `q1` is the control wire.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type used throughout the crate.
pub type Complex = Complex64;

/// Unitarity tolerance for 2×2 matrices (max-norm of `M†M − I`).
pub const UNITARY_TOL_2: f64 = 1e-10;
/// Unitarity tolerance for 4×4 matrices.
pub const UNITARY_TOL_4: f64 = 1e-9;
/// Entry-level comparison tolerance.
pub const ENTRY_TOL: f64 = 1e-10;
/// Tolerance for determinant and trace predicates.
pub const PREDICATE_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

#[inline]
pub(crate) const fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// Principal argument mapped into `[0, 2π)`.
pub fn arg_2pi(z: Complex) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// A dense complex 2×2 matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex; 2]; 2]);

/// A dense complex 4×4 matrix, row-major, basis `|q1 q0⟩`.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat4(pub [[Complex; 4]; 4]);

/// A single-qubit amplitude vector.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Vec2(pub [Complex; 2]);

/// A two-qubit amplitude vector, basis `|q1 q0⟩`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Vec4(pub [Complex; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, c(-1.0, 0.0)]]);
    pub const H: Mat2 = Mat2([
        [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
        [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
    ]);

    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2([[a, b], [c, d]])
    }

    /// Builds a matrix and rejects NaN or infinite entries.
    pub fn try_new(entries: [[Complex; 2]; 2]) -> Result<Self> {
        let m = Mat2(entries);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn diag(a: Complex, d: Complex) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    /// `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> Self {
        Self::diag(ONE, cis(phi))
    }

    /// `Rz(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
    pub fn rz(theta: f64) -> Self {
        Self::diag(cis(-theta / 2.0), cis(theta / 2.0))
    }

    /// Real rotation by `θ/2`.
    pub fn ry(theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Mat2([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> Complex {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: Complex) -> Self {
        let m = &self.0;
        Mat2([[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]])
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        let m = &self.0;
        Vec2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// Max-norm of the entrywise difference.
    pub fn distance(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.dagger() * *self).distance(&Mat2::IDENTITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_finite() && self.unitarity_residual() <= tol
    }

    /// Errors unless the matrix is finite and unitary within `tol`.
    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let residual = self.unitarity_residual();
        if residual <= tol {
            Ok(())
        } else {
            Err(Error::NonUnitary { residual, tol })
        }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.0[0][1].norm() <= tol && self.0[1][0].norm() <= tol
    }

    pub fn is_antidiagonal(&self, tol: f64) -> bool {
        self.0[0][0].norm() <= tol && self.0[1][1].norm() <= tol
    }

    pub fn column(&self, j: usize) -> Vec2 {
        Vec2([self.0[0][j], self.0[1][j]])
    }

    pub fn from_columns(a: &Vec2, b: &Vec2) -> Self {
        Mat2([[a.0[0], b.0[0]], [a.0[1], b.0[1]]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Index<(usize, usize)> for Mat2 {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.0[i][j]
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat2{:?}", self.0)
    }
}

/// Tensor product `a ⊗ b`; `a` acts on `q1`, `b` on `q0`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for i1 in 0..2 {
        for j1 in 0..2 {
            for i0 in 0..2 {
                for j0 in 0..2 {
                    out[2 * i1 + i0][2 * j1 + j0] = a.0[i1][j1] * b.0[i0][j0];
                }
            }
        }
    }
    Mat4(out)
}

impl Mat4 {
    pub fn identity() -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Mat4(out)
    }

    pub fn zeros() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn dagger(&self) -> Self {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[j][i].conj();
            }
        }
        Mat4(out)
    }

    pub fn trace(&self) -> Complex {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: Complex) -> Self {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|e| *e *= s);
        Mat4(out)
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v.0[j]).sum();
        }
        Vec4(out)
    }

    /// `tr(self† · other)`.
    pub fn inner(&self, other: &Mat4) -> Complex {
        let mut acc = ZERO;
        for i in 0..4 {
            for j in 0..4 {
                acc += self.0[i][j].conj() * other.0[i][j];
            }
        }
        acc
    }

    /// Max-norm of the entrywise difference.
    pub fn distance(&self, other: &Mat4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.dagger() * *self).distance(&Mat4::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_finite() && self.unitarity_residual() <= tol
    }
}

impl Mul for Mat4 {
    type Output = Mat4;

    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Mat4(out)
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.0[i][j]
    }
}

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat4[")?;
        for row in &self.0 {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

impl Vec2 {
    pub const ZERO_STATE: Vec2 = Vec2([ONE, ZERO]);
    pub const ONE_STATE: Vec2 = Vec2([ZERO, ONE]);

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn omega0() -> Self {
        Vec2([c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)])
    }

    /// `(|0⟩ − |1⟩)/√2`.
    pub fn omega1() -> Self {
        Vec2([c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)])
    }

    pub fn norm(&self) -> f64 {
        (self.0[0].norm_sqr() + self.0[1].norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Vec2([self.0[0] / n, self.0[1] / n])
    }

    /// `⟨self|other⟩`.
    pub fn dot(&self, other: &Vec2) -> Complex {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn scale(&self, s: Complex) -> Self {
        Vec2([s * self.0[0], s * self.0[1]])
    }

    pub fn distance(&self, other: &Vec2) -> f64 {
        (self.0[0] - other.0[0])
            .norm()
            .max((self.0[1] - other.0[1]).norm())
    }

    /// `self ⊗ other`, with `self` on `q1`.
    pub fn kron(&self, other: &Vec2) -> Vec4 {
        Vec4([
            self.0[0] * other.0[0],
            self.0[0] * other.0[1],
            self.0[1] * other.0[0],
            self.0[1] * other.0[1],
        ])
    }
}

impl Vec4 {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Vec4) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Spectral decomposition of a unitary 2×2 matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigen2 {
    pub values: [Complex; 2],
    pub vectors: [Vec2; 2],
}

impl Eigen2 {
    /// `V = [v0 v1]`.
    pub fn basis(&self) -> Mat2 {
        Mat2::from_columns(&self.vectors[0], &self.vectors[1])
    }
}

/// Rotates `v` so its first component above `1e-12` in modulus is real positive.
fn canonical_phase(v: Vec2) -> Vec2 {
    let pivot = if v.0[0].norm() > 1e-12 {
        v.0[0]
    } else {
        v.0[1]
    };
    v.scale(pivot.conj() / pivot.norm())
}

/// Eigenvalues and orthonormal eigenvectors of a unitary 2×2 matrix.
///
/// `λ0` is the eigenvalue with the smaller argument in `[0, 2π)`. Each
/// eigenvector has its first non-negligible component real and positive.
pub fn eig_unitary2(u: &Mat2) -> Result<Eigen2> {
    u.check_unitary(1e-8)?;
    let tr = u.trace();
    let det = u.det();
    let disc = (tr * tr - 4.0 * det).sqrt();
    let mut l0 = (tr + disc) / 2.0;
    let mut l1 = (tr - disc) / 2.0;
    // Project onto the unit circle; roundoff in the quadratic formula is O(eps).
    l0 /= l0.norm();
    l1 /= l1.norm();
    if arg_2pi(l1) < arg_2pi(l0) {
        std::mem::swap(&mut l0, &mut l1);
    }

    let m = &u.0;
    let a = Vec2([m[0][1], l0 - m[0][0]]);
    let b = Vec2([l0 - m[1][1], m[1][0]]);
    let best = if a.norm() >= b.norm() { a } else { b };
    let v0 = if best.norm() <= 1e-14 {
        // Scalar matrix: every vector is an eigenvector.
        Vec2::ZERO_STATE
    } else {
        canonical_phase(best.normalized())
    };
    let v1 = canonical_phase(Vec2([-v0.0[1].conj(), v0.0[0].conj()]));
    Ok(Eigen2 {
        values: [l0, l1],
        vectors: [v0, v1],
    })
}

/// `1 − |tr(m†t)|/4`, clamped to `[0, 1]`. Zero iff `t = e^{iθ} m`.
pub fn phase_distance(m: &Mat4, t: &Mat4) -> f64 {
    (1.0 - m.inner(t).norm() / 4.0).clamp(0.0, 1.0)
}

/// Max-norm of `m − t`.
pub fn exact_distance(m: &Mat4, t: &Mat4) -> f64 {
    m.distance(t)
}
