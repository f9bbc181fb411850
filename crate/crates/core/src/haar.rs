//! Seeded random draws: Haar unitaries and uniformly distributed states.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{Complex, Mat2, Vec2};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A state drawn uniformly from the unit sphere in `C²`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> Vec2 {
    loop {
        let v = Vec2([gaussian(rng), gaussian(rng)]);
        if v.norm() > 1e-6 {
            return v.normalized();
        }
    }
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian draw,
/// then the diagonal of the implied R factor is rotated to be real positive.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let a = Vec2([gaussian(rng), gaussian(rng)]);
        let b = Vec2([gaussian(rng), gaussian(rng)]);
        let na = a.norm();
        if na < 1e-8 {
            continue;
        }
        let q0 = a.normalized();
        let proj = q0.dot(&b);
        let r = Vec2([b.0[0] - proj * q0.0[0], b.0[1] - proj * q0.0[1]]);
        let nr = r.norm();
        if nr < 1e-8 {
            continue;
        }
        // R = [[na, proj], [0, nr]] already has a real positive diagonal.
        let q1 = r.normalized();
        return Mat2::from_columns(&q0, &q1);
    }
}
