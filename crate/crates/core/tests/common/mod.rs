//! Dense reference implementations: full 2^n × 2^n gate matrices built
//! from Kronecker products, applied by plain matrix-vector multiplication.

#![allow(dead_code)]

use num_complex::Complex64;
use qransom_core::qsim::Gate;

pub type CMat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMat {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]
}

pub fn ry(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    vec![vec![c(co, 0.0), c(-s, 0.0)], vec![c(s, 0.0), c(co, 0.0)]]
}

/// d/dθ RY(θ).
pub fn ry_derivative(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    vec![
        vec![c(-s / 2.0, 0.0), c(-co / 2.0, 0.0)],
        vec![c(co / 2.0, 0.0), c(-s / 2.0, 0.0)],
    ]
}

pub fn rz(theta: f64) -> CMat {
    vec![
        vec![Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn pauli_z() -> CMat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub fn projector(bit: usize) -> CMat {
    let mut p = vec![vec![c(0.0, 0.0); 2]; 2];
    p[bit][bit] = c(1.0, 0.0);
    p
}

/// Embeds single-qubit operators; `ops[q]` acts on qubit `q`. Qubit 0 is the
/// least significant bit, so it is the rightmost Kronecker factor.
pub fn tensor(ops: &[CMat]) -> CMat {
    let mut out = vec![vec![c(1.0, 0.0)]];
    for op in ops.iter().rev() {
        out = kron(&out, op);
    }
    out
}

pub fn single(n: usize, q: usize, op: CMat) -> CMat {
    let ops: Vec<CMat> = (0..n).map(|k| if k == q { op.clone() } else { identity(2) }).collect();
    tensor(&ops)
}

pub fn gate_matrix(n: usize, gate: &Gate) -> CMat {
    match *gate {
        Gate::H(q) => single(n, q, hadamard()),
        Gate::Ry { qubit, angle } => single(n, qubit, ry(angle)),
        Gate::Rz { qubit, angle } => single(n, qubit, rz(angle)),
        Gate::Cnot { control, target } => {
            // |0⟩⟨0|_c ⊗ I + |1⟩⟨1|_c ⊗ X_t
            let x = vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]];
            let mut off: Vec<CMat> = (0..n).map(|_| identity(2)).collect();
            off[control] = projector(0);
            let mut on: Vec<CMat> = (0..n).map(|_| identity(2)).collect();
            on[control] = projector(1);
            on[target] = x;
            let (a, b) = (tensor(&off), tensor(&on));
            a.iter()
                .zip(&b)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x + y).collect())
                .collect()
        }
        Gate::ZzPhase { a, b, angle } => {
            // e^{−iφ Z_a Z_b} = cos φ I − i sin φ Z_a Z_b
            let mut zz: Vec<CMat> = (0..n).map(|_| identity(2)).collect();
            zz[a] = pauli_z();
            zz[b] = pauli_z();
            let zz = tensor(&zz);
            let id = identity(1 << n);
            id.iter()
                .zip(&zz)
                .map(|(r1, r2)| {
                    r1.iter()
                        .zip(r2)
                        .map(|(i, z)| i * angle.cos() - c(0.0, 1.0) * z * angle.sin())
                        .collect()
                })
                .collect()
        }
    }
}

pub fn zero_vector(n: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

pub fn run_dense(n: usize, gates: &[Gate], mut v: Vec<Complex64>) -> Vec<Complex64> {
    for g in gates {
        v = matvec(&gate_matrix(n, g), &v);
    }
    v
}

/// ⟨ψ| Z_q |ψ⟩ through the full observable matrix.
pub fn dense_expectation_z(n: usize, q: usize, v: &[Complex64]) -> f64 {
    let zv = matvec(&single(n, q, pauli_z()), v);
    v.iter().zip(&zv).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Random gate of any kind on `n` qubits, from a tiny LCG so the oracle
/// shares no code with the crate's generator.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn unit(&mut self) -> f64 {
        self.next() as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn angle(&mut self) -> f64 {
        (self.unit() * 2.0 - 1.0) * 2.0 * std::f64::consts::PI
    }

    pub fn gate(&mut self, n: usize) -> Gate {
        let kinds = if n >= 2 { 5 } else { 3 };
        let q = self.below(n);
        match self.below(kinds) {
            0 => Gate::H(q),
            1 => Gate::Ry {
                qubit: q,
                angle: self.angle(),
            },
            2 => Gate::Rz {
                qubit: q,
                angle: self.angle(),
            },
            k => {
                let mut other = self.below(n - 1);
                if other >= q {
                    other += 1;
                }
                if k == 3 {
                    Gate::Cnot {
                        control: q,
                        target: other,
                    }
                } else {
                    Gate::ZzPhase {
                        a: q,
                        b: other,
                        angle: self.angle(),
                    }
                }
            }
        }
    }
}

/// One repetition written straight from the formula: Hadamards, then the
/// diagonal operator Π e^{−iφ_j Z_j} Π_{j<k} e^{−iφ_jk Z_j Z_k}, evaluated
/// entry by entry on the computational basis.
pub fn feature_block(n: usize, x: &[f64], convention: qransom_core::circuits::PhaseConvention) -> CMat {
    let h = tensor(&vec![hadamard(); n]);
    let dim = 1usize << n;
    let z = |k: usize, q: usize| if k >> q & 1 == 0 { 1.0 } else { -1.0 };
    let mut diag = vec![vec![c(0.0, 0.0); dim]; dim];
    for (k, row) in diag.iter_mut().enumerate() {
        let mut phase = 0.0;
        for j in 0..n {
            phase += convention.single(x[j]) * z(k, j);
            for l in j + 1..n {
                phase += convention.pair(x[j], x[l]) * z(k, j) * z(k, l);
            }
        }
        row[k] = num_complex::Complex64::from_polar(1.0, -phase);
    }
    matmul(&diag, &h)
}

/// RY layers separated by a CNOT ladder, built from dense matrices.
pub fn ansatz_dense(n: usize, reps: usize, theta: &[f64]) -> CMat {
    let mut u = identity(1 << n);
    for layer in 0..=reps {
        let rys: Vec<CMat> = (0..n).map(|q| ry(theta[layer * n + q])).collect();
        u = matmul(&tensor(&rys), &u);
        if layer < reps {
            for q in 0..n.saturating_sub(1) {
                u = matmul(
                    &gate_matrix(
                        n,
                        &Gate::Cnot {
                            control: q,
                            target: q + 1,
                        },
                    ),
                    &u,
                );
            }
        }
    }
    u
}
