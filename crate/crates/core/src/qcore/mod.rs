//! Exact small-register quantum simulation: linear-polarization rotations,
//! projective measurement, the universal cloner, depolarizing noise and the
//! reduced-state metrics used by the analysis layer.
//!
//! Registers hold at most [`MAX_QUBITS`] qubits, so everything here is dense
//! complex arithmetic in double precision.

mod density;
mod gate;
mod register;

pub use density::{depolarize, fidelity, trace_distance, DensityOperator};
pub use gate::{rotation_gate, RotationGate};
pub use register::{MeasurementRecord, QuantumRegister, MAX_QUBITS};
