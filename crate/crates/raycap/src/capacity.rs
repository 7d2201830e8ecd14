//! Channel capacity under three transmit power regimes, the SISO
//! baseline, and the closed-form asymptotic limits.
//!
//! Capacity is `log2 det(I + c * H*H')` with a scale `c` set by the
//! [`PowerSetup`]. It is evaluated from the eigenvalues of the Hermitian
//! Gram matrix (equivalently the squared singular values of `H`), which
//! avoids forming a determinant that overflows for a few hundred antennas
//! and keeps every log argument nonnegative. The explicit log-det route
//! survives as [`log_det_oracle`] for small matrices.

use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::channel::ChannelMatrix;
use crate::{Error, Result};

/// Relative cutoff under which a singular value is treated as exactly
/// zero. Steering matrices with coincident rays are rank-deficient by
/// construction and must not pick up noise capacity from rounding.
const SINGULAR_VALUE_CUTOFF: f64 = 1e-12;

/// How transmit power maps onto the capacity scale `c = (P/sigma^2)/divisor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSetup {
    /// Equal power per transmit stream with no channel knowledge at the
    /// transmitter: divisor `n_T`.
    StandardEqualPower,
    /// Constant, equal power on every ray: divisor `n_R`.
    Setup1,
    /// Total power split evenly over the rays: divisor `n_R * n_T`.
    Setup2,
}

impl PowerSetup {
    /// Coefficient multiplying `H*H'` inside the determinant.
    pub fn scale(self, snr: f64, n_r: usize, n_t: usize) -> f64 {
        match self {
            PowerSetup::StandardEqualPower => snr / n_t as f64,
            PowerSetup::Setup1 => snr / n_r as f64,
            PowerSetup::Setup2 => snr / (n_r as f64 * n_t as f64),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PowerSetup::StandardEqualPower => "standard",
            PowerSetup::Setup1 => "setup1",
            PowerSetup::Setup2 => "setup2",
        }
    }
}

impl fmt::Display for PowerSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Transmit power, noise power, and the power-allocation setup.
///
/// Only the ratio `P/sigma^2` enters any formula; both are kept so callers
/// can express either side explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityConfig {
    transmit_power: f64,
    noise_power: f64,
    setup: PowerSetup,
}

impl CapacityConfig {
    pub fn new(transmit_power: f64, noise_power: f64, setup: PowerSetup) -> Result<Self> {
        if !transmit_power.is_finite() || transmit_power <= 0.0 {
            return Err(Error::BadPower(transmit_power));
        }
        if !noise_power.is_finite() || noise_power <= 0.0 {
            return Err(Error::BadNoisePower(noise_power));
        }
        Ok(Self {
            transmit_power,
            noise_power,
            setup,
        })
    }

    /// Config with unit noise power and the given linear SNR.
    pub fn from_snr(snr: f64, setup: PowerSetup) -> Result<Self> {
        Self::new(snr, 1.0, setup)
    }

    /// Config with unit noise power and the SNR given in dB.
    pub fn from_snr_db(snr_db: f64, setup: PowerSetup) -> Result<Self> {
        Self::from_snr(snr_db_to_linear(snr_db), setup)
    }

    pub fn transmit_power(&self) -> f64 {
        self.transmit_power
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn setup(&self) -> PowerSetup {
        self.setup
    }

    /// Linear `P/sigma^2`.
    pub fn snr(&self) -> f64 {
        self.transmit_power / self.noise_power
    }
}

/// `10^(dB/10)`.
pub fn snr_db_to_linear(snr_db: f64) -> f64 {
    10.0f64.powf(snr_db / 10.0)
}

/// Capacity plus the quantities it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    bits: f64,
    scale_used: f64,
    singular_values: Vec<f64>,
}

impl CapacityResult {
    /// Capacity in bits/s/Hz.
    pub fn bits(&self) -> f64 {
        self.bits
    }

    /// The coefficient that multiplied `H*H'` inside the determinant.
    pub fn scale_used(&self) -> f64 {
        self.scale_used
    }

    /// Singular values of `H`, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }
}

/// Capacity `sum_i log2(1 + c * s_i^2)` over the singular values of `H`.
pub fn capacity(h: &ChannelMatrix, cfg: &CapacityConfig) -> CapacityResult {
    let scale = cfg.setup().scale(cfg.snr(), h.n_r(), h.n_t());
    let eig = SymmetricEigen::new(h.gram());
    let mut singular_values: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let cutoff = SINGULAR_VALUE_CUTOFF * singular_values[0];
    for s in &mut singular_values {
        if *s < cutoff {
            *s = 0.0;
        }
    }
    let bits = singular_values
        .iter()
        .map(|s| (scale * s * s).ln_1p() / LN_2)
        .sum();
    CapacityResult {
        bits,
        scale_used: scale,
        singular_values,
    }
}

/// Shannon capacity `log2(1 + snr)` of the single-antenna AWGN channel.
pub fn siso_awgn_capacity(snr: f64) -> Result<f64> {
    if !snr.is_finite() || snr < 0.0 {
        return Err(Error::NegativeSnr(snr));
    }
    Ok(snr.ln_1p() / LN_2)
}

/// Large-ray-count capacity limit of the evenly-split power setup:
/// `n_R * log2(1 + snr/n_R)`.
pub fn setup2_large_nt_limit(n_r: usize, snr: f64) -> f64 {
    let n = n_r as f64;
    n * ((snr / n).ln_1p() / LN_2)
}

/// Limit of [`setup2_large_nt_limit`] as the antenna count also grows:
/// `snr / ln 2`.
pub fn setup2_double_limit(snr: f64) -> f64 {
    snr / LN_2
}

/// Independent check: `log2 det(I + scale * H*H')` by explicit complex LU
/// elimination with partial pivoting. No singular values involved, and no
/// shared linear algebra with [`capacity`]. Limited to 8 receive antennas.
#[allow(clippy::needless_range_loop)]
pub fn log_det_oracle(h: &ChannelMatrix, scale: f64) -> Result<f64> {
    let n = h.n_r();
    if n > 8 {
        return Err(Error::OracleTooLarge(n));
    }
    let n_t = h.n_t();

    // m = I + scale * H*H', formed entrywise.
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..n_t {
                acc += h.entry(i, t) * h.entry(j, t).conj();
            }
            m[i][j] = scale * acc;
        }
        m[i][i] += 1.0;
    }

    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .expect("non-empty pivot range");
        if m[pivot][col].norm() == 0.0 {
            det = Complex64::new(0.0, 0.0);
            break;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for c in col..n {
                let sub = factor * m[col][c];
                m[row][c] -= sub;
            }
        }
    }

    // det(I + scale*H*H') is real and >= 1; the imaginary residue is rounding.
    Ok(det.re.ln() / LN_2)
}
