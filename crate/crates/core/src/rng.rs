//! Seeded pseudo-random numbers.
//!
//! All stochastic steps (initial VQC parameters, synthetic data, shot
//! sampling, shuffles) draw from [`Xorshift64Star`] so a seed reproduces the
//! same stream on every platform and in any language that ports the two
//! functions below.
//!
//! Algorithm: the seed is scrambled once with SplitMix64 to form the state
//! (a zero state is replaced by `0x9E37_79B9_7F4A_7C15`), then each draw is
//! xorshift64* with shifts (12, 25, 27) and multiplier
//! `0x2545_F491_4F6C_DD1D`. Floats take the top 53 bits.

use alloc::vec::Vec;

use crate::math;

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const XORSHIFT_MULT: u64 = 0x2545_F491_4F6C_DD1D;

/// One SplitMix64 output for `seed`.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xorshift64* generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => SPLITMIX_GAMMA,
            s => s,
        };
        Self { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_MULT)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[low, high)`.
    #[inline]
    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.next_f64()
    }

    /// Standard normal via Box-Muller (one draw per call, the sine branch is
    /// discarded so the stream position stays easy to reason about).
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        math::sqrt(-2.0 * math::ln(u1)) * math::cos(core::f64::consts::TAU * u2)
    }

    /// Uniform integer in `0..bound` (Lemire's multiply-shift, slight bias
    /// is irrelevant for shuffling a few thousand rows).
    #[inline]
    pub fn below(&mut self, bound: usize) -> usize {
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// `0..n` in shuffled order.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        self.shuffle(&mut idx);
        idx
    }
}
