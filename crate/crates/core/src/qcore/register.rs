use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::density::DensityOperator;
use super::gate::RotationGate;
use crate::error::{Error, Result};

/// Largest register the simulator will build: 2^8 = 256 amplitudes.
pub const MAX_QUBITS: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Outcome of a projective measurement in a rotated linear-polarization basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub outcome: u8,
    pub basis_angle: f64,
    /// Born-rule probability of the sampled outcome.
    pub probability_of_outcome: f64,
}

/// Exact pure state of 1..=8 qubits.
///
/// Qubit `k` is bit `k` of the basis-state index, so attaching ancillas
/// appends high-order bits and leaves existing indices untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRegister {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumRegister {
    /// Computational basis state |bits⟩ over `num_qubits` qubits.
    pub fn basis(num_qubits: usize, bits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if bits >= dim {
            return Err(Error::invalid(format!("basis index {bits} out of range for {num_qubits} qubits")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[bits] = Complex64::new(1.0, 0.0);
        Ok(QuantumRegister { num_qubits, amplitudes })
    }

    /// Single qubit in |bit⟩.
    pub fn qubit(bit: u8) -> Self {
        Self::basis(1, usize::from(bit & 1)).expect("single qubit always fits")
    }

    /// Builds a register from raw amplitudes, normalizing them.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!("amplitude vector length {dim} is not a power of two >= 2")));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_size(num_qubits)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("amplitude vector has zero or non-finite norm"));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(QuantumRegister { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_index(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::invalid(format!(
                "qubit index {qubit} out of range for {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }

    fn apply_matrix(&mut self, qubit: usize, m: &[[Complex64; 2]; 2]) {
        let mask = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & mask != 0 {
                continue;
            }
            let j = i | mask;
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    pub fn apply_gate(&mut self, qubit: usize, gate: &RotationGate) -> Result<()> {
        self.check_index(qubit)?;
        self.apply_matrix(qubit, &gate.complex_matrix());
        Ok(())
    }

    /// Applies Pauli X (1), Y (2) or Z (3) to `qubit`; 0 is the identity.
    pub fn apply_pauli(&mut self, qubit: usize, pauli: u8) -> Result<()> {
        self.check_index(qubit)?;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let m = match pauli {
            0 => return Ok(()),
            1 => [[ZERO, one], [one, ZERO]],
            2 => [[ZERO, -i], [i, ZERO]],
            3 => [[one, ZERO], [ZERO, -one]],
            other => return Err(Error::invalid(format!("unknown Pauli index {other}"))),
        };
        self.apply_matrix(qubit, &m);
        Ok(())
    }

    /// Monte Carlo unraveling of the depolarizing channel `ρ ↦ (1−p)ρ + p·I/2`
    /// on one qubit: with probability `p` a uniformly random Pauli (including
    /// the identity) is applied. Averaged over trajectories this reproduces
    /// the channel exactly.
    pub fn depolarize_qubit<R: Rng + ?Sized>(&mut self, qubit: usize, p: f64, rng: &mut R) -> Result<()> {
        self.check_index(qubit)?;
        check_probability(p)?;
        if p == 0.0 {
            return Ok(());
        }
        if rng.random::<f64>() < p {
            let pauli = rng.random_range(0..4u8);
            self.apply_pauli(qubit, pauli)?;
        }
        Ok(())
    }

    /// Born probabilities of outcomes 0 and 1 when measuring `qubit` in the
    /// basis {R(φ)|0⟩, R(φ)|1⟩}.
    pub fn outcome_probabilities(&self, qubit: usize, basis_angle: f64) -> Result<[f64; 2]> {
        self.check_index(qubit)?;
        let mut rotated = self.clone();
        rotated.apply_gate(qubit, &RotationGate::new(-basis_angle)?)?;
        Ok(rotated.computational_probabilities(qubit))
    }

    fn computational_probabilities(&self, qubit: usize) -> [f64; 2] {
        let mask = 1usize << qubit;
        let mut p = [0.0; 2];
        for (i, a) in self.amplitudes.iter().enumerate() {
            p[usize::from(i & mask != 0)] += a.norm_sqr();
        }
        p
    }

    /// Projective measurement of `qubit` in the basis rotated by `basis_angle`.
    /// The register collapses onto R(φ)|outcome⟩ for that qubit and is
    /// renormalized.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        basis_angle: f64,
        rng: &mut R,
    ) -> Result<MeasurementRecord> {
        self.check_index(qubit)?;
        let into_basis = RotationGate::new(-basis_angle)?;
        self.apply_gate(qubit, &into_basis)?;

        let p = self.computational_probabilities(qubit);
        let outcome: u8 = if rng.random::<f64>() < p[0] { 0 } else { 1 };
        let prob = p[usize::from(outcome)];

        let mask = 1usize << qubit;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if u8::from(i & mask != 0) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        self.apply_gate(qubit, &into_basis.inverse())?;

        Ok(MeasurementRecord { outcome, basis_angle, probability_of_outcome: prob })
    }

    /// Appends `count` fresh qubits in |0⟩; returns the index of the first.
    pub fn attach_qubits(&mut self, count: usize) -> Result<usize> {
        let first = self.num_qubits;
        let total = self.num_qubits + count;
        if total > MAX_QUBITS {
            return Err(Error::Capacity { requested: total, limit: MAX_QUBITS });
        }
        self.amplitudes.resize(1usize << total, ZERO);
        self.num_qubits = total;
        Ok(first)
    }

    /// Symmetric universal 1→2 cloning isometry on `qubit`.
    ///
    /// Two ancillas are attached (clone slot and machine slot) and
    ///
    /// ```text
    /// V|0⟩ = √(2/3)|00⟩|0⟩ + √(1/6)(|01⟩+|10⟩)|1⟩
    /// V|1⟩ = √(2/3)|11⟩|1⟩ + √(1/6)(|01⟩+|10⟩)|0⟩
    /// ```
    ///
    /// is applied over (original, clone, machine). Each output copy has
    /// reduced state (2/3)ρ + (1/3)I/2 regardless of the input. Returns
    /// `(clone_index, machine_index)`.
    pub fn uqcm_clone(&mut self, qubit: usize) -> Result<(usize, usize)> {
        self.check_index(qubit)?;
        if self.num_qubits + 2 > MAX_QUBITS {
            return Err(Error::Capacity { requested: self.num_qubits + 2, limit: MAX_QUBITS });
        }
        let old_dim = self.amplitudes.len();
        let clone = self.num_qubits;
        let machine = clone + 1;
        let (qm, cm, mm) = (1usize << qubit, 1usize << clone, 1usize << machine);

        let big = (2.0f64 / 3.0).sqrt();
        let small = (1.0f64 / 6.0).sqrt();
        let mut out = vec![ZERO; old_dim << 2];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let rest = i & !qm;
            if i & qm == 0 {
                out[rest] += a * big;
                out[rest | cm | mm] += a * small;
                out[rest | qm | mm] += a * small;
            } else {
                out[rest | qm | cm | mm] += a * big;
                out[rest | cm] += a * small;
                out[rest | qm] += a * small;
            }
        }
        self.amplitudes = out;
        self.num_qubits += 2;
        Ok((clone, machine))
    }

    /// Reduced density operator over one or two kept qubits. For two kept
    /// qubits `[a, b]` the reduced basis index is `2·bit_a + bit_b`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        if keep.is_empty() || keep.len() > 2 {
            return Err(Error::invalid(format!("keep set must hold 1 or 2 qubits, got {}", keep.len())));
        }
        for &q in keep {
            self.check_index(q)?;
        }
        if keep.len() == 2 && keep[0] == keep[1] {
            return Err(Error::invalid("keep set contains a repeated qubit"));
        }
        let dim = 1usize << keep.len();
        let kept_mask: usize = keep.iter().map(|&q| 1usize << q).sum();
        let mut m = nalgebra::DMatrix::from_element(dim, dim, ZERO);
        // Group full indices by their traced-out part; within a group all
        // pairs contribute ψ_i ψ_j*.
        let full = self.amplitudes.len();
        for rest in 0..full {
            if rest & kept_mask != 0 {
                continue;
            }
            for r in 0..dim {
                let i = expand(rest, keep, r);
                let ai = self.amplitudes[i];
                if ai == ZERO {
                    continue;
                }
                for c in 0..dim {
                    let j = expand(rest, keep, c);
                    m[(r, c)] += ai * self.amplitudes[j].conj();
                }
            }
        }
        Ok(DensityOperator::from_matrix_unchecked(m))
    }

    /// ⟨self|other⟩ for registers of equal size.
    pub fn inner(&self, other: &QuantumRegister) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::invalid("register size mismatch"));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Sets the kept-qubit bits of `rest` from the reduced index `r`.
fn expand(rest: usize, keep: &[usize], r: usize) -> usize {
    let k = keep.len();
    keep.iter().enumerate().fold(rest, |acc, (pos, &q)| {
        let bit = (r >> (k - 1 - pos)) & 1;
        acc | (bit << q)
    })
}

fn check_size(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::invalid("register needs at least one qubit"));
    }
    if num_qubits > MAX_QUBITS {
        return Err(Error::Capacity { requested: num_qubits, limit: MAX_QUBITS });
    }
    Ok(())
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}
