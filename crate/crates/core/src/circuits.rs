//! Circuit builders: the second-order ZZ feature map and the RealAmplitudes
//! ansatz, bound to concrete data and parameter values as gate lists.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{config_err, Result};
use crate::qsim::{Gate, MAX_QUBITS};

/// How data values become rotation angles in the feature map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PhaseConvention {
    /// `φ_j = x_j`, `φ_jk = (x_j − x_k)²`.
    #[default]
    Paper,
    /// `φ_j = x_j`, `φ_jk = (π − x_j)(π − x_k)`.
    Standard,
}

impl PhaseConvention {
    #[inline]
    pub fn single(self, xj: f64) -> f64 {
        xj
    }

    #[inline]
    pub fn pair(self, xj: f64, xk: f64) -> f64 {
        match self {
            PhaseConvention::Paper => (xj - xk) * (xj - xk),
            PhaseConvention::Standard => (PI - xj) * (PI - xk),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseConvention::Paper => "paper",
            PhaseConvention::Standard => "standard",
        }
    }
}

impl core::str::FromStr for PhaseConvention {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(PhaseConvention::Paper),
            "standard" => Ok(PhaseConvention::Standard),
            other => Err(config_err!(
                "unknown phase convention {other:?} (expected paper or standard)"
            )),
        }
    }
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(config_err!("qubit count {n_qubits} outside 1..={MAX_QUBITS}"));
    }
    Ok(())
}

/// Second-order Pauli-Z feature map.
///
/// Each repetition applies a Hadamard layer, `RZ(2φ_j)` on every qubit
/// (i.e. `e^{−iφ_j Z_j}`), then `e^{−iφ_jk Z_j Z_k}` for every entangled pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureMapSpec {
    n_qubits: usize,
    reps: usize,
    pairs: Vec<(usize, usize)>,
    convention: PhaseConvention,
}

impl FeatureMapSpec {
    pub const DEFAULT_REPS: usize = 2;

    /// All-pairs entanglement.
    pub fn new(n_qubits: usize, reps: usize, convention: PhaseConvention) -> Result<Self> {
        check_qubits(n_qubits)?;
        let pairs = (0..n_qubits)
            .flat_map(|j| (j + 1..n_qubits).map(move |k| (j, k)))
            .collect();
        Self::with_pairs(n_qubits, reps, pairs, convention)
    }

    /// Custom pair set; each pair must satisfy `j < k < n_qubits`.
    pub fn with_pairs(
        n_qubits: usize,
        reps: usize,
        pairs: Vec<(usize, usize)>,
        convention: PhaseConvention,
    ) -> Result<Self> {
        check_qubits(n_qubits)?;
        if reps == 0 {
            return Err(config_err!("feature map needs at least one repetition"));
        }
        if let Some(&(j, k)) = pairs.iter().find(|&&(j, k)| j >= k || k >= n_qubits) {
            return Err(config_err!("invalid entangling pair ({j}, {k}) for {n_qubits} qubits"));
        }
        Ok(Self {
            n_qubits,
            reps,
            pairs,
            convention,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn convention(&self) -> PhaseConvention {
        self.convention
    }

    /// Binds data `x` into a gate list.
    pub fn build(&self, x: &[f64]) -> Result<Vec<Gate>> {
        if x.len() != self.n_qubits {
            return Err(config_err!(
                "feature vector has {} entries, feature map expects {}",
                x.len(),
                self.n_qubits
            ));
        }
        let n = self.n_qubits;
        let mut gates = Vec::with_capacity(self.reps * (2 * n + self.pairs.len()));
        for _ in 0..self.reps {
            gates.extend((0..n).map(Gate::H));
            gates.extend(x.iter().enumerate().map(|(j, &xj)| Gate::Rz {
                qubit: j,
                angle: 2.0 * self.convention.single(xj),
            }));
            gates.extend(self.pairs.iter().map(|&(j, k)| Gate::ZzPhase {
                a: j,
                b: k,
                angle: self.convention.pair(x[j], x[k]),
            }));
        }
        Ok(gates)
    }
}

/// Hardware-efficient RealAmplitudes ansatz: `reps` blocks of
/// (RY layer, CNOT chain `i → i+1`), closed by a final RY layer.
///
/// Parameter `r·n + q` drives the RY on qubit `q` in layer `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnsatzSpec {
    n_qubits: usize,
    reps: usize,
}

impl AnsatzSpec {
    pub const DEFAULT_REPS: usize = 3;

    pub fn new(n_qubits: usize, reps: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        if reps == 0 {
            return Err(config_err!("ansatz needs at least one repetition"));
        }
        Ok(Self { n_qubits, reps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    /// `n_qubits × (reps + 1)`.
    pub fn parameter_count(&self) -> usize {
        parameter_count(self.n_qubits, self.reps)
    }

    pub fn build(&self, theta: &[f64]) -> Result<Vec<Gate>> {
        if theta.len() != self.parameter_count() {
            return Err(config_err!(
                "ansatz expects {} parameters, got {}",
                self.parameter_count(),
                theta.len()
            ));
        }
        let n = self.n_qubits;
        let mut gates = Vec::with_capacity(theta.len() + self.reps * n.saturating_sub(1));
        for (layer, angles) in theta.chunks_exact(n).enumerate() {
            gates.extend(
                angles
                    .iter()
                    .enumerate()
                    .map(|(qubit, &angle)| Gate::Ry { qubit, angle }),
            );
            if layer < self.reps {
                gates.extend((0..n - 1).map(|q| Gate::Cnot {
                    control: q,
                    target: q + 1,
                }));
            }
        }
        Ok(gates)
    }
}

/// Number of trainable angles in a RealAmplitudes ansatz.
pub fn parameter_count(n_qubits: usize, reps: usize) -> usize {
    n_qubits * (reps + 1)
}

/// Trainable ansatz angles (radians).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct ParameterVector(pub Vec<f64>);

impl ParameterVector {
    pub fn zeros(len: usize) -> Self {
        Self(alloc::vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}
