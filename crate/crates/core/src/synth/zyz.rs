use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::classify::INPUT_UNITARY_TOL;
use crate::error::Result;
use crate::matrix::{cis, wrap_angle, Mat2};

/// Below this modulus a diagonal (or off-diagonal) entry pair counts as
/// zero and only one combination of `β` and `δ` is determined.
const DEGENERATE_TOL: f64 = 1e-12;

/// Euler angles with `u = e^{iα} Rz(β) Ry(γ) Rz(δ)`.
///
/// `zyz` returns `γ ∈ [0, π]` and `α, β, δ ∈ (−π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZyzAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl ZyzAngles {
    pub fn to_matrix(&self) -> Mat2 {
        (Mat2::rz(self.beta) * Mat2::ry(self.gamma) * Mat2::rz(self.delta)).scale(cis(self.alpha))
    }
}

/// ZYZ Euler decomposition. When `γ ∈ {0, π}` the free angle `δ` is 0.
pub fn zyz(u: &Mat2) -> Result<ZyzAngles> {
    u.check_unitary(INPUT_UNITARY_TOL)?;
    let mut alpha = u.det().arg() / 2.0;
    let v = u.scale(cis(-alpha));
    // v = [[e^{-i(β+δ)/2} cos, −e^{-i(β−δ)/2} sin], [e^{i(β−δ)/2} sin, e^{i(β+δ)/2} cos]]
    let cos_half = (v.0[0][0].norm() + v.0[1][1].norm()) / 2.0;
    let sin_half = (v.0[0][1].norm() + v.0[1][0].norm()) / 2.0;
    let gamma = 2.0 * sin_half.atan2(cos_half);
    let (mut beta, mut delta) = if sin_half <= DEGENERATE_TOL {
        (2.0 * v.0[1][1].arg(), 0.0)
    } else if cos_half <= DEGENERATE_TOL {
        (2.0 * v.0[1][0].arg(), 0.0)
    } else {
        let sum = 2.0 * v.0[1][1].arg();
        let diff = 2.0 * v.0[1][0].arg();
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    // Rz(θ ± 2π) = −Rz(θ): move each sign flip into the global phase.
    for angle in [&mut beta, &mut delta] {
        if *angle > PI {
            *angle -= 2.0 * PI;
            alpha += PI;
        } else if *angle <= -PI {
            *angle += 2.0 * PI;
            alpha += PI;
        }
    }
    Ok(ZyzAngles {
        alpha: wrap_angle(alpha),
        beta,
        gamma,
        delta,
    })
}
