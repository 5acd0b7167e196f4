//! Seeded random ensembles.
//!
//! Every random stream is ChaCha20 (20 rounds, original 64-bit counter /
//! 64-bit stream-id layout) keyed by the 64-bit seed written little-endian
//! into the first 8 key bytes, remaining 24 key bytes zero, with the stream id
//! set to the trial index. A `u64` draw is two consecutive 32-bit keystream
//! words, low word first. From that:
//!
//! * uniform `u = (draw >> 11) · 2⁻⁵³` in `[0, 1)`;
//! * one Box–Muller pair from two uniforms `u₁, u₂`:
//!   `ρ = √(−2 ln(1 − u₁))`, `(ρ cos 2πu₂, ρ sin 2πu₂)`;
//! * a standard complex Gaussian is `(g₀ + i g₁)/√2` from one pair;
//! * a real Gaussian is `g₀` of a fresh pair (`g₁` is discarded).
//!
//! Matrices are filled row-major.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::matcore::{CMat, C64};

/// Seed used when neither a flag nor the environment provides one.
pub const DEFAULT_SEED: u64 = 0x5E_ED0F_0B17;

pub struct StreamRng {
    inner: ChaCha20Rng,
}

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let rho = (-2.0 * (1.0 - u1).ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        (rho * c, rho * s)
    }

    pub fn gaussian(&mut self) -> f64 {
        self.gaussian_pair().0
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let (a, b) = self.gaussian_pair();
        C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// i.i.d. standard complex Gaussian entries.
pub fn ginibre(rng: &mut StreamRng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// i.i.d. standard complex Gaussian entries.
    Ginibre,
    /// `(G + G*)/2` for Ginibre `G`.
    Hermitian,
    /// `G*G` for Ginibre `G`.
    Psd,
    /// Real Gaussian diagonal.
    Diagonal,
}

impl Ensemble {
    pub fn sample(self, rng: &mut StreamRng, n: usize) -> CMat {
        match self {
            Ensemble::Ginibre => ginibre(rng, n, n),
            Ensemble::Hermitian => ginibre(rng, n, n).real_part(),
            Ensemble::Psd => ginibre(rng, n, n).gram(),
            Ensemble::Diagonal => {
                let d: Vec<f64> = (0..n).map(|_| rng.gaussian()).collect();
                CMat::diag_real(&d)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::Hermitian => "hermitian",
            Ensemble::Psd => "psd",
            Ensemble::Diagonal => "diagonal",
        }
    }
}

impl std::str::FromStr for Ensemble {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ginibre" => Ok(Ensemble::Ginibre),
            "hermitian" => Ok(Ensemble::Hermitian),
            "psd" => Ok(Ensemble::Psd),
            "diagonal" => Ok(Ensemble::Diagonal),
            other => Err(format!("unknown ensemble '{other}'")),
        }
    }
}

/// A reproducible tuple of equal-size square matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleSample {
    pub matrices: Vec<CMat>,
    pub seed: u64,
    pub trial: u64,
    pub ensemble: Ensemble,
}

impl TupleSample {
    /// Draws `count` matrices of size `n` from the stream `(seed, trial)`.
    pub fn draw(ensemble: Ensemble, seed: u64, trial: u64, count: usize, n: usize) -> Self {
        let mut rng = StreamRng::new(seed, trial);
        let matrices = (0..count).map(|_| ensemble.sample(&mut rng, n)).collect();
        Self { matrices, seed, trial, ensemble }
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, CMat::rows)
    }
}
