use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A real rotation in the {|0⟩, |1⟩} plane, i.e. a rotation of linear
/// polarization by `theta` radians.
///
/// The matrix is `[[cos θ, −sin θ], [sin θ, cos θ]]`. All rotations commute,
/// and `RotationGate::new(-θ)` is the exact inverse of `RotationGate::new(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationGate {
    theta: f64,
}

impl RotationGate {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::invalid(format!("rotation angle must be finite, got {theta}")));
        }
        Ok(RotationGate { theta })
    }

    /// Quarter turn: maps |0⟩ to |1⟩ and |1⟩ to −|0⟩.
    pub fn quarter_turn() -> Self {
        RotationGate { theta: FRAC_PI_2 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn inverse(&self) -> Self {
        RotationGate { theta: -self.theta }
    }

    /// Composition; the rotation group is abelian so order is irrelevant.
    pub fn then(&self, other: &RotationGate) -> Self {
        RotationGate { theta: self.theta + other.theta }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [[c, -s], [s, c]]
    }

    pub(crate) fn complex_matrix(&self) -> [[Complex64; 2]; 2] {
        let m = self.matrix();
        [
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ]
    }
}

/// Convenience constructor mirroring [`RotationGate::new`].
pub fn rotation_gate(theta: f64) -> Result<RotationGate> {
    RotationGate::new(theta)
}

#[cfg(test)]
pub(crate) fn matmul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
