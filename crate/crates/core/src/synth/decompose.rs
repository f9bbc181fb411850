//! Factorizations behind the two-qubit constructions.

use std::f64::consts::PI;

use crate::classify::INPUT_UNITARY_TOL;
use crate::error::{Error, Result};
use crate::matrix::{eig_unitary2, Mat2, ONE, PREDICATE_TOL};

use super::zyz::zyz;

/// `u = e^{iφ} P X P†`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracelessForm {
    pub phi: f64,
    pub p: Mat2,
}

/// `v = C X B X A` with `C B A = I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbcFactors {
    pub a: Mat2,
    pub b: Mat2,
    pub c: Mat2,
}

/// Writes a traceless unitary as `e^{iφ} P X P†`.
///
/// The eigenvalues of `u` are `±e^{iφ}`; `P = W H` where the columns of `W`
/// are the eigenvectors for `e^{iφ}` and `−e^{iφ}`. If `det u = −1` the
/// branch `φ = 0` is taken.
pub fn decompose_traceless(u: &Mat2) -> Result<TracelessForm> {
    u.check_unitary(INPUT_UNITARY_TOL)?;
    let tr = u.trace().norm();
    if tr > PREDICATE_TOL {
        return Err(Error::Precondition(format!(
            "|tr U| = {tr:.3e} is not zero"
        )));
    }
    let eig = eig_unitary2(u)?;
    let [v0, v1] = eig.vectors;
    let (phi, w) = if (u.det() + ONE).norm() <= PREDICATE_TOL {
        // Eigenvalues are ±1; put the +1 eigenvector first.
        if (eig.values[0] - ONE).norm() <= (eig.values[1] - ONE).norm() {
            (0.0, Mat2::from_columns(&v0, &v1))
        } else {
            (0.0, Mat2::from_columns(&v1, &v0))
        }
    } else {
        (eig.values[0].arg(), Mat2::from_columns(&v0, &v1))
    };
    Ok(TracelessForm {
        phi,
        p: w * Mat2::H,
    })
}

/// Writes a unitary with `tr(uX) = 0` as `e^{iφ} P X P† X`, via
/// [`decompose_traceless`] of `u X`. If `det u = 1` then `φ = 0`.
pub fn decompose_xtraceless(u: &Mat2) -> Result<TracelessForm> {
    u.check_unitary(INPUT_UNITARY_TOL)?;
    let ux = *u * Mat2::X;
    let tr = ux.trace().norm();
    if tr > PREDICATE_TOL {
        return Err(Error::Precondition(format!(
            "|tr(UX)| = {tr:.3e} is not zero"
        )));
    }
    decompose_traceless(&ux)
}

/// Splits a determinant-one unitary into `A, B, C` with `C B A = I` and
/// `C X B X A = v`.
pub fn decompose_abc(v: &Mat2) -> Result<AbcFactors> {
    v.check_unitary(INPUT_UNITARY_TOL)?;
    let det_err = (v.det() - ONE).norm();
    if det_err > PREDICATE_TOL {
        return Err(Error::Precondition(format!(
            "|det V − 1| = {det_err:.3e} is not zero"
        )));
    }
    let angles = zyz(v)?;
    // det v = 1 leaves e^{iα} = ±1; Ry(γ + 2π) = −Ry(γ) absorbs the sign.
    let gamma = if angles.alpha.cos() < 0.0 {
        angles.gamma + 2.0 * PI
    } else {
        angles.gamma
    };
    let (beta, delta) = (angles.beta, angles.delta);
    Ok(AbcFactors {
        a: Mat2::rz((delta - beta) / 2.0),
        b: Mat2::ry(-gamma / 2.0) * Mat2::rz(-(delta + beta) / 2.0),
        c: Mat2::rz(beta) * Mat2::ry(gamma / 2.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{sample, GateClass};
    use crate::haar::haar_unitary;
    use crate::matrix::{c, cis};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rebuild_traceless(f: &TracelessForm) -> Mat2 {
        (f.p * Mat2::X * f.p.dagger()).scale(cis(f.phi))
    }

    #[test]
    fn traceless_constants() {
        let f = decompose_traceless(&Mat2::X).unwrap();
        assert_eq!(f.phi, 0.0);
        assert!((f.p * Mat2::X * f.p.dagger()).distance(&Mat2::X) < 1e-15);
        assert!(f.p.distance(&Mat2::IDENTITY) < 1e-15);

        let f = decompose_traceless(&Mat2::Z).unwrap();
        assert_eq!(f.phi, 0.0);
        assert!(f.p.distance(&Mat2::H) < 1e-15);
    }

    #[test]
    fn traceless_rejects_trace() {
        assert!(matches!(
            decompose_traceless(&Mat2::IDENTITY),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn traceless_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let p = haar_unitary(&mut rng);
            let u = (p * Mat2::X * p.dagger()).scale(cis(rng.gen_range(-PI..PI)));
            let f = decompose_traceless(&u).unwrap();
            assert!(f.p.is_unitary(1e-12));
            assert!(rebuild_traceless(&f).distance(&u) <= 1e-10);
        }
    }

    #[test]
    fn det_minus_one_takes_zero_phase() {
        for seed in 0..200 {
            let u = sample(GateClass::F, seed).unwrap();
            let f = decompose_traceless(&u).unwrap();
            assert_eq!(f.phi, 0.0);
            assert!(rebuild_traceless(&f).distance(&u) <= 1e-10);
        }
    }

    #[test]
    fn xtraceless_examples() {
        let theta = 0.9;
        let u = Mat2::diag(cis(theta), cis(-theta));
        let f = decompose_xtraceless(&u).unwrap();
        assert_eq!(f.phi, 0.0);
        assert!((rebuild_traceless(&f) * Mat2::X).distance(&u) <= 1e-10);

        let s = Mat2::diag(ONE, c(0.0, 1.0));
        let f = decompose_xtraceless(&s).unwrap();
        // det(e^{iφ} P X P† X) = e^{2iφ} must equal det S = i
        assert!((cis(2.0 * f.phi) - s.det()).norm() <= 1e-12);
        assert!((rebuild_traceless(&f) * Mat2::X).distance(&s) <= 1e-10);

        assert!(matches!(
            decompose_xtraceless(&Mat2::X),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn xtraceless_round_trip() {
        for class in [GateClass::H, GateClass::I] {
            for seed in 0..1000 {
                let u = sample(class, seed).unwrap();
                let f = decompose_xtraceless(&u).unwrap();
                if class == GateClass::H {
                    assert_eq!(f.phi, 0.0);
                }
                assert!((rebuild_traceless(&f) * Mat2::X).distance(&u) <= 1e-10);
            }
        }
    }

    fn check_abc(v: &Mat2, f: &AbcFactors) {
        assert!((f.c * f.b * f.a).distance(&Mat2::IDENTITY) <= 1e-10);
        assert!((f.c * Mat2::X * f.b * Mat2::X * f.a).distance(v) <= 1e-10);
    }

    #[test]
    fn abc_examples() {
        let f = decompose_abc(&Mat2::IDENTITY).unwrap();
        for m in [f.a, f.b, f.c] {
            assert!(m.distance(&Mat2::IDENTITY) < 1e-15);
        }

        let theta = 0.8;
        let f = decompose_abc(&Mat2::rz(theta)).unwrap();
        assert!(f.a.distance(&Mat2::rz(-theta / 2.0)) < 1e-15);
        assert!(f.b.distance(&Mat2::rz(-theta / 2.0)) < 1e-15);
        assert!(f.c.distance(&Mat2::rz(theta)) < 1e-15);
        check_abc(&Mat2::rz(theta), &f);

        let iz = Mat2::diag(c(0.0, 1.0), c(0.0, -1.0));
        let angles = zyz(&iz).unwrap();
        assert!(angles.alpha.cos() < 0.0, "iZ needs the γ + 2π branch");
        check_abc(&iz, &decompose_abc(&iz).unwrap());

        let not_det_one = Mat2::diag(ONE, c(0.0, 1.0));
        assert!(matches!(
            decompose_abc(&not_det_one),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn abc_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..1000 {
            let h = haar_unitary(&mut rng);
            let v = h.scale(h.det().sqrt().inv());
            check_abc(&v, &decompose_abc(&v).unwrap());
        }
        // −I and other sign-flipped degenerate members
        for v in [
            Mat2::IDENTITY.scale(-ONE),
            Mat2::rz(2.0 * PI - 0.1),
            Mat2::ry(PI),
        ] {
            check_abc(&v, &decompose_abc(&v).unwrap());
        }
    }
}
