//! OFDM numerology, the unitary DFT and cyclic-shift pilot sequences.
//!
//! Indices are 0-based. A cyclic shift `tau` applied to a length-`L` pilot
//! multiplies tone `n` by `exp(j 2 pi tau n / L)`; after derotation with the
//! base sequence this appears in the delay domain as the circulant
//! [`ShiftOperator`], which maps a CIR `h` to `n -> h[(n + tau) mod L]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{CMatrix, Error, Result, C64};

/// OFDM numerology: tone count, cyclic prefix length and symbol timing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OfdmConfigRaw", into = "OfdmConfigRaw")]
pub struct OfdmConfig {
    n_tones: usize,
    n_cp: usize,
    symbol_duration: f64,
    chip_duration: f64,
}

#[derive(Serialize, Deserialize)]
struct OfdmConfigRaw {
    n_tones: usize,
    n_cp: usize,
    symbol_duration: f64,
}

impl TryFrom<OfdmConfigRaw> for OfdmConfig {
    type Error = Error;

    fn try_from(raw: OfdmConfigRaw) -> Result<Self> {
        OfdmConfig::new(raw.n_tones, raw.n_cp, raw.symbol_duration)
    }
}

impl From<OfdmConfig> for OfdmConfigRaw {
    fn from(c: OfdmConfig) -> Self {
        OfdmConfigRaw {
            n_tones: c.n_tones,
            n_cp: c.n_cp,
            symbol_duration: c.symbol_duration,
        }
    }
}

impl Default for OfdmConfig {
    /// LTE-like numerology: 128 tones, 8-chip cyclic prefix, 66.67 us symbols.
    fn default() -> Self {
        Self::new(128, 8, 66.67e-6).expect("default numerology is valid")
    }
}

impl OfdmConfig {
    pub fn new(n_tones: usize, n_cp: usize, symbol_duration: f64) -> Result<Self> {
        if n_tones == 0 || n_cp == 0 {
            return Err(Error::InvalidSize(
                "tone count and cyclic prefix must be positive".into(),
            ));
        }
        if n_cp > n_tones {
            return Err(Error::InvalidSize(format!(
                "cyclic prefix {n_cp} longer than {n_tones} tones"
            )));
        }
        if !(symbol_duration > 0.0 && symbol_duration.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "symbol duration must be positive, got {symbol_duration}"
            )));
        }
        Ok(Self {
            n_tones,
            n_cp,
            symbol_duration,
            chip_duration: symbol_duration / n_tones as f64,
        })
    }

    pub fn n_tones(&self) -> usize {
        self.n_tones
    }

    pub fn n_cp(&self) -> usize {
        self.n_cp
    }

    pub fn symbol_duration(&self) -> f64 {
        self.symbol_duration
    }

    pub fn chip_duration(&self) -> f64 {
        self.chip_duration
    }

    pub fn tone_spacing(&self) -> f64 {
        1.0 / self.symbol_duration
    }

    /// Number of orthogonal shifts (or tone groups) of width `n_cp`,
    /// `floor(N / N_cp)`.
    pub fn n_groups(&self) -> usize {
        self.n_tones / self.n_cp
    }

    /// Absolute tones of comb group `group`: `group + i * N / N_cp`.
    pub fn tone_group(&self, group: usize) -> Vec<usize> {
        let stride = self.n_groups();
        (0..self.n_cp).map(|i| group + i * stride).collect()
    }
}

/// `n x n` unitary DFT, entry `(k, m) = exp(-j 2 pi k m / n) / sqrt(n)`.
pub fn unitary_dft(n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidSize("DFT size must be at least 1".into()));
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(CMatrix::from_fn(n, n, |k, m| {
        // Reduce the exponent mod n before scaling to keep the phase exact.
        let e = (k * m) % n;
        C64::from_polar(scale, -2.0 * PI * e as f64 / n as f64)
    }))
}

/// Quadratic-phase base sequence `s0[n] = exp(-j pi n^2 / length)`.
pub fn base_sequence(length: usize) -> Result<Vec<C64>> {
    if length == 0 {
        return Err(Error::InvalidSize(
            "sequence length must be at least 1".into(),
        ));
    }
    // n^2 mod 2L keeps the phase argument small for long sequences.
    let two_l = 2 * length as u128;
    Ok((0..length as u128)
        .map(|n| {
            let e = (n * n) % two_l;
            C64::from_polar(1.0, -PI * e as f64 / length as f64)
        })
        .collect())
}

/// Linear phase `exp(j 2 pi tau n / L)` for `n = 0..L`.
pub(crate) fn shift_ramp(tau: usize, len: usize) -> impl Iterator<Item = C64> {
    (0..len).map(move |n| {
        let e = (tau * n) % len;
        C64::from_polar(1.0, 2.0 * PI * e as f64 / len as f64)
    })
}

/// A unit-modulus pilot carrying the cyclic shift `shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotSequence {
    pub values: Vec<C64>,
    pub shift: usize,
    pub tone_set: Vec<usize>,
}

impl PilotSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Places the sequence on explicit absolute tones (a comb group).
    pub fn with_tones(mut self, tone_set: Vec<usize>) -> Result<Self> {
        if tone_set.len() != self.values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} tones for a length-{} sequence",
                tone_set.len(),
                self.values.len()
            )));
        }
        self.tone_set = tone_set;
        Ok(self)
    }

    /// The diagonal matrix `S` with the sequence on its diagonal.
    pub fn diag(&self) -> CMatrix {
        CMatrix::from_diagonal(&crate::CVector::from_column_slice(&self.values))
    }
}

/// Applies the cyclic shift `tau` to `base`.
pub fn shifted_sequence(base: &[C64], tau: usize) -> Result<PilotSequence> {
    let len = base.len();
    if len == 0 {
        return Err(Error::InvalidSize("empty base sequence".into()));
    }
    if tau >= len {
        return Err(Error::InvalidShift {
            tau: tau as i64,
            len,
        });
    }
    let values = base
        .iter()
        .zip(shift_ramp(tau, len))
        .map(|(b, r)| b * r)
        .collect();
    Ok(PilotSequence {
        values,
        shift: tau,
        tone_set: (0..len).collect(),
    })
}

/// Relative cyclic shift between two pilots of a common base, as the
/// circulant `F^H S_b^H S_a F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftOperator {
    pub delta_tau: usize,
    pub size: usize,
}

/// Operator relating a pilot with shift `tau_a` to one with shift `tau_b`;
/// `delta_tau = (tau_a - tau_b) mod size`.
pub fn shift_operator(tau_a: i64, tau_b: i64, size: usize) -> Result<ShiftOperator> {
    if size == 0 {
        return Err(Error::InvalidSize(
            "shift operator size must be at least 1".into(),
        ));
    }
    Ok(ShiftOperator {
        delta_tau: (tau_a - tau_b).rem_euclid(size as i64) as usize,
        size,
    })
}

impl ShiftOperator {
    /// Dense matrix form. Column `c` has its single 1 at row `(c - delta) mod L`.
    pub fn to_matrix(&self) -> CMatrix {
        let l = self.size;
        let mut m = CMatrix::zeros(l, l);
        for c in 0..l {
            m[((c + l - self.delta_tau) % l, c)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// `(Theta x)[n] = x[(n + delta) mod L]`.
    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_len(x.len())?;
        let l = self.size;
        Ok((0..l).map(|n| x[(n + self.delta_tau) % l]).collect())
    }

    /// Diagonal of `Theta diag(d) Theta^H`: `d` rotated by `-delta`.
    pub fn rotate_diagonal(&self, d: &[f64]) -> Result<Vec<f64>> {
        self.check_len(d.len())?;
        let l = self.size;
        Ok((0..l).map(|n| d[(n + self.delta_tau) % l]).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {len} for a size-{} shift operator",
                self.size
            )));
        }
        Ok(())
    }
}
