//! Dense statevector simulation.
//!
//! Qubit ordering is little-endian: qubit `q` is bit `q` of the basis-state
//! index, so `|01⟩` written as (qubit 1, qubit 0) is index 1.
//!
//! Gate conventions:
//!
//! | gate | matrix |
//! |------|--------|
//! | `H` | `[[1, 1], [1, -1]] / √2` |
//! | `RY(θ)` | `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]` |
//! | `RZ(θ)` | `diag(e^{−iθ/2}, e^{iθ/2})` |
//! | `CNOT(c, t)` | flips `t` when `c` is set |
//! | `ZZPhase(φ, a, b)` | `e^{−iφ Z_a Z_b}` = `diag(e^{−iφ}, e^{iφ}, e^{iφ}, e^{−iφ})` |
//!
//! Amplitudes are never renormalized behind the caller's back.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{config_err, Result};
use crate::math;
use crate::rng::Xorshift64Star;

/// Largest supported register (2^20 amplitudes, 16 MiB).
pub const MAX_QUBITS: usize = 20;

/// A gate acting on one or two qubits of a register.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Gate {
    H(usize),
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    ZzPhase { a: usize, b: usize, angle: f64 },
}

impl Gate {
    /// The inverse gate.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(q),
            Gate::Ry { qubit, angle } => Gate::Ry { qubit, angle: -angle },
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::Cnot { control, target } => Gate::Cnot { control, target },
            Gate::ZzPhase { a, b, angle } => Gate::ZzPhase { a, b, angle: -angle },
        }
    }

    /// Checks indices against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(config_err!("qubit index {q} out of range for {n_qubits} qubits"))
            }
        };
        match *self {
            Gate::H(q) | Gate::Ry { qubit: q, .. } | Gate::Rz { qubit: q, .. } => check(q),
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(config_err!("CNOT control and target are both {control}"));
                }
                Ok(())
            }
            Gate::ZzPhase { a, b, .. } => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(config_err!("ZZ phase needs two distinct qubits, got {a} twice"));
                }
                Ok(())
            }
        }
    }
}

/// Pauli-Z on one qubit, identity elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Observable {
    pub qubit: usize,
}

impl Observable {
    pub fn z(qubit: usize) -> Self {
        Self { qubit }
    }
}

/// `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(config_err!(
                "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
            ));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(config_err!("amplitude count {len} is not a power of two >= 2"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(config_err!("{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap"));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `‖ψ‖²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        overlap.norm_sqr()
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::H(q) => {
                let h = FRAC_1_SQRT_2;
                self.for_each_pair(q, |a0, a1| {
                    let (x, y) = (*a0, *a1);
                    *a0 = (x + y) * h;
                    *a1 = (x - y) * h;
                });
            }
            Gate::Ry { qubit, angle } => {
                let (c, s) = (math::cos(angle / 2.0), math::sin(angle / 2.0));
                self.for_each_pair(qubit, |a0, a1| {
                    let (x, y) = (*a0, *a1);
                    *a0 = x * c - y * s;
                    *a1 = x * s + y * c;
                });
            }
            Gate::Rz { qubit, angle } => {
                let (c, s) = (math::cos(angle / 2.0), math::sin(angle / 2.0));
                let lo = Complex64::new(c, -s);
                let hi = Complex64::new(c, s);
                self.for_each_pair(qubit, |a0, a1| {
                    *a0 *= lo;
                    *a1 *= hi;
                });
            }
            Gate::Cnot { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..self.amplitudes.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amplitudes.swap(i, i | tmask);
                    }
                }
            }
            Gate::ZzPhase { a, b, angle } => {
                let (c, s) = (math::cos(angle), math::sin(angle));
                let same = Complex64::new(c, -s);
                let differ = Complex64::new(c, s);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    let parity = ((i >> a) ^ (i >> b)) & 1;
                    *amp *= if parity == 0 { same } else { differ };
                }
            }
        }
        Ok(())
    }

    /// Applies each gate in order. All gates are validated before the first
    /// one touches the state.
    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| g.validate(self.n_qubits))?;
        gates.iter().try_for_each(|g| self.apply(g))
    }

    /// Consuming variant of [`StateVector::apply`].
    pub fn applied(mut self, gate: &Gate) -> Result<Self> {
        self.apply(gate)?;
        Ok(self)
    }

    // Visits amplitude pairs (bit q clear, bit q set).
    #[inline]
    fn for_each_pair(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let stride = 1usize << q;
        for block in self.amplitudes.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a0, a1);
            }
        }
    }

    /// Probability that `qubit` reads 0.
    pub fn prob_zero(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Exact `⟨ψ|Z_qubit|ψ⟩`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }

    /// Shot-based estimate of `⟨Z_qubit⟩`: `(n₊ − n₋) / shots` over
    /// independent Born-rule draws.
    pub fn sample_z(&self, qubit: usize, shots: usize, seed: u64) -> Result<f64> {
        if shots == 0 {
            return Err(config_err!("shot count must be at least 1"));
        }
        let p0 = self.prob_zero(qubit)?;
        let mut rng = Xorshift64Star::new(seed);
        let plus = (0..shots).filter(|_| rng.next_f64() < p0).count();
        Ok((2.0 * plus as f64 - shots as f64) / shots as f64)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(config_err!(
                "qubit index {qubit} out of range for {} qubits",
                self.n_qubits
            ));
        }
        Ok(())
    }
}
