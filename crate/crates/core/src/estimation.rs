//! MMSE channel estimation.
//!
//! Two estimators are provided:
//!
//! - per antenna, over the tones of one OFDM symbol, where cyclic-shift
//!   pilots of a common base make every covariance diagonal after derotation
//!   so the Wiener filter acts tap by tap;
//! - per delay tap, across the array, where the observation
//!   `g_n = h_n^{own} + sum_{other cells} h_n + noise` is filtered with
//!   `C_own (sigma^2 I + C_own + C_int)^{-1}`.
//!
//! The residual matrix is the extra error covariance caused by the
//! inter-cell term; the alignment objective sums its traces.

use nalgebra::{Cholesky, Dyn, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::model::{shift_ramp, unitary_dft, PilotSequence};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Rank threshold for the eigen-factored residual: eigenvalues at or below
/// `1e-9` times the largest are treated as zero.
pub const EIGEN_RANK_THRESHOLD: f64 = 1e-9;

/// Per-tone pilot powers and receiver noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// `tone_power[cell][user]`.
    pub tone_power: Vec<Vec<f64>>,
    pub noise_variance: f64,
}

impl LinkBudget {
    pub fn new(tone_power: Vec<Vec<f64>>, noise_variance: f64) -> Result<Self> {
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        if tone_power
            .iter()
            .flatten()
            .any(|p| !(p.is_finite() && *p >= 0.0))
        {
            return Err(Error::InvalidConfig(
                "tone powers must be nonnegative".into(),
            ));
        }
        Ok(Self {
            tone_power,
            noise_variance,
        })
    }

    /// Unit tone power for everyone and `sigma^2 = 10^(-snr_db / 10)`.
    pub fn from_snr_db(n_cells: usize, users_per_cell: usize, snr_db: f64) -> Result<Self> {
        Self::new(
            vec![vec![1.0; users_per_cell]; n_cells],
            10f64.powf(-snr_db / 10.0),
        )
    }

    pub fn rho(&self, cell: usize, user: usize) -> f64 {
        self.tone_power[cell][user]
    }

    pub fn snr_db(&self, cell: usize, user: usize) -> f64 {
        10.0 * (self.rho(cell, user) / self.noise_variance).log10()
    }
}

/// One user's pilot, PDP toward the receiving base station and tone power.
#[derive(Debug, Clone, Copy)]
pub struct PilotedUser<'a> {
    pub pilot: &'a PilotSequence,
    pub pdp: &'a [f64],
    pub tone_power: f64,
}

/// Per-tap interference-plus-signal power `sigma^2 + sum_k rho_k P_k(n + dtau_k)`
/// seen after derotating with the target's pilot.
fn derotated_power(
    users: &[PilotedUser<'_>],
    target: usize,
    noise_variance: f64,
) -> Result<Vec<f64>> {
    let Some(tgt) = users.get(target) else {
        return Err(Error::DimensionMismatch(format!(
            "target {target} out of {} users",
            users.len()
        )));
    };
    let len = tgt.pilot.len();
    if len == 0 {
        return Err(Error::InvalidSize("empty pilot".into()));
    }
    let mut power = vec![noise_variance; len];
    for u in users {
        if u.pilot.len() != len || u.pdp.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "pilot/PDP lengths {}/{} differ from {len}",
                u.pilot.len(),
                u.pdp.len()
            )));
        }
        let delta = (u.pilot.shift + len - tgt.pilot.shift) % len;
        // S_u^H S_k must be the pure phase ramp of the relative shift.
        let consistent = tgt
            .pilot
            .values
            .iter()
            .zip(&u.pilot.values)
            .zip(shift_ramp(delta, len))
            .all(|((a, b), r)| (a.conj() * b - r).norm() < 1e-9);
        if !consistent {
            return Err(Error::BaseMismatch);
        }
        for (n, p) in power.iter_mut().enumerate() {
            *p += u.tone_power * u.pdp[(n + delta) % len];
        }
    }
    Ok(power)
}

/// MMSE estimate of the target user's CIR from one antenna's tones `y`.
///
/// All pilots must be cyclic shifts of one base. The estimate is
/// `sqrt(rho_u) P_u(n) z(n) / (sigma^2 + sum_k rho_k P_k(n + dtau_k))` with
/// `z = F^H S_u^H y`.
pub fn per_antenna_mmse(
    y: &[C64],
    users: &[PilotedUser<'_>],
    target: usize,
    noise_variance: f64,
) -> Result<Vec<C64>> {
    let power = derotated_power(users, target, noise_variance)?;
    let len = power.len();
    if y.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "observation of length {} for length-{len} pilots",
            y.len()
        )));
    }
    let tgt = &users[target];
    let f = unitary_dft(len)?;
    let derot = CVector::from_iterator(
        len,
        y.iter().zip(&tgt.pilot.values).map(|(y, s)| s.conj() * y),
    );
    let z = f.adjoint() * derot;
    let gain = tgt.tone_power.sqrt();
    Ok((0..len)
        .map(|n| z[n] * (gain * tgt.pdp[n] / power[n]))
        .collect())
}

/// Error covariance of [`per_antenna_mmse`] (diagonal):
/// `P_u - rho_u P_u^2 / (sigma^2 + sum_k rho_k P_k(n + dtau_k))`.
pub fn per_antenna_error_cov(
    users: &[PilotedUser<'_>],
    target: usize,
    noise_variance: f64,
) -> Result<CMatrix> {
    let power = derotated_power(users, target, noise_variance)?;
    let tgt = &users[target];
    let diag = CVector::from_iterator(
        power.len(),
        power
            .iter()
            .zip(tgt.pdp)
            .map(|(d, p)| C64::new(p - tgt.tone_power * p * p / d, 0.0)),
    );
    Ok(CMatrix::from_diagonal(&diag))
}

/// Error covariance without any interfering pilot:
/// `P - rho P (sigma^2 I + rho P)^{-1} P`.
pub fn interference_free_error_cov(pdp: &[f64], tone_power: f64, noise_variance: f64) -> CMatrix {
    let diag = CVector::from_iterator(
        pdp.len(),
        pdp.iter().map(|p| {
            C64::new(
                p - tone_power * p * p / (noise_variance + tone_power * p),
                0.0,
            )
        }),
    );
    CMatrix::from_diagonal(&diag)
}

/// Derotates each antenna's tones with the base pilot and regroups them by
/// tap: `y` is `M x L` (row `m` holds antenna `m`), the result is `M x L`
/// with column `n` equal to `g_n`.
pub fn derotate_and_stack(y: &CMatrix, base: &[C64]) -> Result<CMatrix> {
    let len = base.len();
    if y.ncols() != len {
        return Err(Error::DimensionMismatch(format!(
            "{} tones per antenna for a length-{len} base sequence",
            y.ncols()
        )));
    }
    // z_m^T = y_m^T diag(conj(s0)) conj(F), F being symmetric.
    let f = unitary_dft(len)?;
    let mut scaled = y.clone();
    for (mut col, s) in scaled.column_iter_mut().zip(base) {
        col *= s.conj();
    }
    Ok(scaled * f.map(|z| z.conj()))
}

fn check_square(m: &CMatrix, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn loaded(c: &CMatrix, noise_variance: f64) -> CMatrix {
    let mut a = c.clone();
    for i in 0..a.nrows() {
        a[(i, i)] += noise_variance;
    }
    a
}

fn cholesky(a: CMatrix) -> Result<Cholesky<C64, Dyn>> {
    Cholesky::new(a).ok_or(Error::NotPositiveDefinite)
}

fn sum_others(c_own: &CMatrix, c_others: &[CMatrix]) -> Result<Option<CMatrix>> {
    let n = c_own.nrows();
    check_square(c_own, n, "own covariance")?;
    let mut acc: Option<CMatrix> = None;
    for c in c_others {
        check_square(c, n, "interference covariance")?;
        acc = Some(match acc {
            Some(s) => s + c,
            None => c.clone(),
        });
    }
    Ok(acc)
}

fn is_zero(m: &CMatrix) -> bool {
    m.iter().all(|z| *z == C64::new(0.0, 0.0))
}

/// `C (sigma^2 I + C + I_sum)^{-1}` as `L^{-1} C` where `L L^H` is the loaded
/// covariance; `C A^{-1} C = X^H X` for the returned `X`.
fn whitened(c_own: &CMatrix, total: &CMatrix, noise_variance: f64) -> Result<CMatrix> {
    let chol = cholesky(loaded(total, noise_variance))?;
    chol.l_dirty()
        .solve_lower_triangular(c_own)
        .ok_or(Error::NotPositiveDefinite)
}

/// `Tr(C_own (sigma^2 I + total)^{-1} C_own)`, the power the Wiener filter
/// recovers when the observation covariance is `total`.
pub(crate) fn captured_trace(c_own: &CMatrix, total: &CMatrix, noise_variance: f64) -> Result<f64> {
    Ok(whitened(c_own, total, noise_variance)?.norm_squared())
}

/// Linear MMSE filter for one tap: `W = C_own (sigma^2 I + C_own + sum C_others)^{-1}`.
pub fn tap_wiener_filter(
    c_own: &CMatrix,
    c_others: &[CMatrix],
    noise_variance: f64,
) -> Result<CMatrix> {
    let total = match sum_others(c_own, c_others)? {
        Some(s) => s + c_own,
        None => c_own.clone(),
    };
    let chol = cholesky(loaded(&total, noise_variance))?;
    // A and C are Hermitian, so C A^{-1} = (A^{-1} C)^H.
    Ok(chol.solve(c_own).adjoint())
}

/// Per-tap spatial MMSE estimate `C_own (sigma^2 I + C_own + sum C_others)^{-1} g_n`.
pub fn per_tap_mmse(
    g_n: &CVector,
    c_own: &CMatrix,
    c_others: &[CMatrix],
    noise_variance: f64,
) -> Result<CVector> {
    if g_n.len() != c_own.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "observation of length {} for {}x{} covariances",
            g_n.len(),
            c_own.nrows(),
            c_own.ncols()
        )));
    }
    Ok(tap_wiener_filter(c_own, c_others, noise_variance)? * g_n)
}

fn error_cov(c_own: &CMatrix, total: &CMatrix, noise_variance: f64) -> Result<CMatrix> {
    let x = whitened(c_own, total, noise_variance)?;
    let e = c_own - x.adjoint() * &x;
    Ok((&e + e.adjoint()) * C64::new(0.5, 0.0))
}

/// Error covariance of [`per_tap_mmse`]:
/// `C_own - C_own (sigma^2 I + C_own + sum C_others)^{-1} C_own`.
pub fn per_tap_error_cov(
    c_own: &CMatrix,
    c_others: &[CMatrix],
    noise_variance: f64,
) -> Result<CMatrix> {
    let total = match sum_others(c_own, c_others)? {
        Some(s) => s + c_own,
        None => c_own.clone(),
    };
    error_cov(c_own, &total, noise_variance)
}

/// Extra error covariance due to the inter-cell terms, computed as the
/// difference of the error covariances with and without them. Exactly zero
/// when either the interference or the own covariance vanishes.
pub fn residual_matrix(
    c_own: &CMatrix,
    c_others: &[CMatrix],
    noise_variance: f64,
) -> Result<CMatrix> {
    let n = c_own.nrows();
    let Some(interference) = sum_others(c_own, c_others)? else {
        return Ok(CMatrix::zeros(n, n));
    };
    if is_zero(&interference) || is_zero(c_own) {
        return Ok(CMatrix::zeros(n, n));
    }
    let x0 = whitened(c_own, c_own, noise_variance)?;
    let x1 = whitened(c_own, &(interference + c_own), noise_variance)?;
    let r = x0.adjoint() * x0 - x1.adjoint() * x1;
    Ok((&r + r.adjoint()) * C64::new(0.5, 0.0))
}

/// `Tr` of [`residual_matrix`] for a pre-summed interference covariance,
/// without forming the matrix.
pub fn residual_trace(c_own: &CMatrix, interference: &CMatrix, noise_variance: f64) -> Result<f64> {
    check_square(interference, c_own.nrows(), "interference covariance")?;
    if is_zero(interference) || is_zero(c_own) {
        return Ok(0.0);
    }
    let x0 = whitened(c_own, c_own, noise_variance)?;
    let x1 = whitened(c_own, &(interference + c_own), noise_variance)?;
    Ok(x0.norm_squared() - x1.norm_squared())
}

/// Eigenvectors and eigenvalues of a Hermitian PSD matrix above
/// [`EIGEN_RANK_THRESHOLD`] relative to the largest.
fn significant_eigen(m: &CMatrix) -> (CMatrix, Vec<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| max > 0.0 && eig.eigenvalues[i] > EIGEN_RANK_THRESHOLD * max)
        .collect();
    let vecs = CMatrix::from_fn(m.nrows(), keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    let vals = keep.iter().map(|&i| eig.eigenvalues[i]).collect();
    (vecs, vals)
}

/// Residual matrix in eigen-factored form. With the interference
/// `U Sigma U^H`, the own covariance `V Lambda V^H` and `A = sigma^2 I + C_own`:
/// `R = A^{-1} V Lambda V^H U (Sigma^{-1} + U^H A^{-1} U)^{-1} U^H V Lambda V^H A^{-1}`.
pub fn residual_matrix_eigen(
    c_own: &CMatrix,
    c_others: &[CMatrix],
    noise_variance: f64,
) -> Result<CMatrix> {
    let n = c_own.nrows();
    let Some(interference) = sum_others(c_own, c_others)? else {
        return Ok(CMatrix::zeros(n, n));
    };
    let (u, sigma) = significant_eigen(&interference);
    let (v, lambda) = significant_eigen(c_own);
    if sigma.is_empty() || lambda.is_empty() {
        return Ok(CMatrix::zeros(n, n));
    }
    let a_inv = cholesky(loaded(c_own, noise_variance))?.inverse();
    let lam = CMatrix::from_diagonal(&CVector::from_iterator(
        lambda.len(),
        lambda.iter().map(|&x| C64::new(x, 0.0)),
    ));
    let own = &v * lam * v.adjoint();
    let t = &a_inv * &own * &u;
    let mut core = u.adjoint() * &a_inv * &u;
    for (i, s) in sigma.iter().enumerate() {
        core[(i, i)] += C64::new(1.0 / s, 0.0);
    }
    let core_inv = cholesky(core)?.inverse();
    let r = &t * core_inv * t.adjoint();
    Ok((&r + r.adjoint()) * C64::new(0.5, 0.0))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Per-tap estimates, error covariances and residual matrices of one cell.
#[derive(Debug, Clone)]
pub struct EstimationReport {
    pub estimates: Vec<CVector>,
    pub error_covariance: Vec<CMatrix>,
    pub residuals: Vec<CMatrix>,
}

/// Runs [`per_tap_mmse`] on every column of `g` (`M x L`), with `own[n]` and
/// `interference[n]` the covariances of tap `n`.
pub fn estimate_taps(
    g: &CMatrix,
    own: &[CMatrix],
    interference: &[CMatrix],
    noise_variance: f64,
) -> Result<EstimationReport> {
    let taps = g.ncols();
    if own.len() != taps || interference.len() != taps {
        return Err(Error::DimensionMismatch(format!(
            "{taps} taps with {} own and {} interference covariances",
            own.len(),
            interference.len()
        )));
    }
    let mut report = EstimationReport {
        estimates: Vec::with_capacity(taps),
        error_covariance: Vec::with_capacity(taps),
        residuals: Vec::with_capacity(taps),
    };
    for n in 0..taps {
        let others = std::slice::from_ref(&interference[n]);
        report.estimates.push(per_tap_mmse(
            &g.column(n).into_owned(),
            &own[n],
            others,
            noise_variance,
        )?);
        report
            .error_covariance
            .push(per_tap_error_cov(&own[n], others, noise_variance)?);
        report
            .residuals
            .push(residual_matrix(&own[n], others, noise_variance)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{base_sequence, shifted_sequence};
    use crate::seed;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn frob_rel(a: &CMatrix, b: &CMatrix) -> f64 {
        let d = (a - b).norm();
        if b.norm() == 0.0 {
            d
        } else {
            d / b.norm()
        }
    }

    fn cn<R: Rng>(rng: &mut R, var: f64) -> C64 {
        let s = (var / 2.0).sqrt();
        C64::new(
            s * rng.sample::<f64, _>(StandardNormal),
            s * rng.sample::<f64, _>(StandardNormal),
        )
    }

    fn random_psd<R: Rng>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
        let a = CMatrix::from_fn(n, rank, |_, _| cn(rng, 1.0));
        &a * a.adjoint()
    }

    fn steer(theta: f64, m: usize) -> CVector {
        crate::channel::steering_vector(theta, &crate::channel::ArrayConfig::new(m, 0.5).unwrap())
    }

    #[test]
    fn budget_from_snr() {
        let b = LinkBudget::from_snr_db(2, 1, 10.0).unwrap();
        assert!((b.noise_variance - 0.1).abs() < 1e-15);
        assert!((b.snr_db(1, 0) - 10.0).abs() < 1e-12);
        assert!(LinkBudget::new(vec![vec![1.0]], 0.0).is_err());
    }

    #[test]
    fn per_antenna_noiseless_identity() {
        let l = 8;
        let base = base_sequence(l).unwrap();
        let pilot = shifted_sequence(&base, 3).unwrap();
        let pdp = vec![0.125; l];
        let users = [PilotedUser {
            pilot: &pilot,
            pdp: &pdp,
            tone_power: 1.0,
        }];
        let mut rng = seed::stream(1, &[]);
        let y: Vec<C64> = (0..l).map(|_| cn(&mut rng, 1.0)).collect();
        let est = per_antenna_mmse(&y, &users, 0, 1e-12).unwrap();
        let f = unitary_dft(l).unwrap();
        let z = f.adjoint()
            * CVector::from_iterator(l, y.iter().zip(&pilot.values).map(|(y, s)| s.conj() * y));
        for n in 0..l {
            assert!((est[n] - z[n]).norm() < 1e-6);
        }
    }

    #[test]
    fn per_antenna_zero_prior_tap() {
        let base = base_sequence(4).unwrap();
        let pilot = shifted_sequence(&base, 0).unwrap();
        let pdp = vec![0.5, 0.0, 0.5, 0.0];
        let users = [PilotedUser {
            pilot: &pilot,
            pdp: &pdp,
            tone_power: 1.0,
        }];
        let y = vec![C64::new(1.0, 2.0); 4];
        let est = per_antenna_mmse(&y, &users, 0, 0.1).unwrap();
        assert_eq!(est[1], C64::new(0.0, 0.0));
        assert_eq!(est[3], C64::new(0.0, 0.0));
        assert!(per_antenna_mmse(&y[..3], &users, 0, 0.1).is_err());
    }

    #[test]
    fn per_antenna_rejects_foreign_base() {
        let a = shifted_sequence(&base_sequence(4).unwrap(), 0).unwrap();
        let b = shifted_sequence(&[C64::new(1.0, 0.0); 4], 1).unwrap();
        let pdp = vec![0.25; 4];
        let users = [
            PilotedUser {
                pilot: &a,
                pdp: &pdp,
                tone_power: 1.0,
            },
            PilotedUser {
                pilot: &b,
                pdp: &pdp,
                tone_power: 1.0,
            },
        ];
        assert!(matches!(
            per_antenna_error_cov(&users, 0, 0.1),
            Err(Error::BaseMismatch)
        ));
    }

    #[test]
    fn per_antenna_disjoint_interferer_is_harmless() {
        let l = 16;
        let base = base_sequence(l).unwrap();
        let pu = shifted_sequence(&base, 0).unwrap();
        let pk = shifted_sequence(&base, 8).unwrap();
        let mut pdp = vec![0.0; l];
        pdp[..8].fill(0.125);
        let users = [
            PilotedUser {
                pilot: &pu,
                pdp: &pdp,
                tone_power: 1.0,
            },
            PilotedUser {
                pilot: &pk,
                pdp: &pdp,
                tone_power: 2.0,
            },
        ];
        let with = per_antenna_error_cov(&users, 0, 0.1).unwrap();
        let clean = interference_free_error_cov(&pdp, 1.0, 0.1);
        assert!(frob_rel(&with, &clean) < 1e-10);
        let alone = per_antenna_error_cov(&users[..1], 0, 0.1).unwrap();
        assert!(frob_rel(&alone, &clean) < 1e-14);
        // Huge noise: nothing learned.
        let blind = per_antenna_error_cov(&users, 0, 1e12).unwrap();
        for n in 0..l {
            assert!((blind[(n, n)].re - pdp[n]).abs() < 1e-9);
        }
    }

    #[test]
    fn derotation_of_shifted_user() {
        let (l, m) = (8, 3);
        let base = base_sequence(l).unwrap();
        let f = unitary_dft(l).unwrap();
        let mut rng = seed::stream(2, &[]);
        let h = CMatrix::from_fn(m, l, |_, _| cn(&mut rng, 1.0));
        for tau in [0usize, 3] {
            let s = shifted_sequence(&base, tau).unwrap();
            // y_m = S F h_m, rows are antennas.
            let mut y = CMatrix::zeros(m, l);
            for a in 0..m {
                let fh = &f * h.row(a).transpose();
                for t in 0..l {
                    y[(a, t)] = s.values[t] * fh[t];
                }
            }
            let g = derotate_and_stack(&y, &base).unwrap();
            for a in 0..m {
                for n in 0..l {
                    assert!((g[(a, n)] - h[(a, (n + tau) % l)]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn derotated_noise_power() {
        let (l, m, trials) = (8, 4, 10_000);
        let base = base_sequence(l).unwrap();
        let sigma2 = 0.3;
        let mut rng = seed::stream(3, &[]);
        let mut energy = 0.0;
        for _ in 0..trials {
            let y = CMatrix::from_fn(m, l, |_, _| cn(&mut rng, sigma2));
            let g = derotate_and_stack(&y, &base).unwrap();
            energy += g.column(2).norm_squared();
        }
        let mean = energy / trials as f64;
        assert!((mean / (m as f64 * sigma2) - 1.0).abs() < 0.05, "{mean}");
    }

    #[test]
    fn per_tap_scalar_cases() {
        let m = 5;
        let c = 2.0;
        let sigma2 = 0.5;
        let own = CMatrix::identity(m, m) * C64::new(c, 0.0);
        let g = CVector::from_element(m, C64::new(1.0, -1.0));
        let est = per_tap_mmse(&g, &own, &[], sigma2).unwrap();
        assert!((est - &g * C64::new(c / (c + sigma2), 0.0)).norm() < 1e-12);
        let zero = per_tap_mmse(&g, &CMatrix::zeros(m, m), &[], sigma2).unwrap();
        assert_eq!(zero, CVector::zeros(m));
        let e = per_tap_error_cov(&own, &[], sigma2).unwrap();
        let want = CMatrix::identity(m, m) * C64::new(c * sigma2 / (c + sigma2), 0.0);
        assert!(frob_rel(&e, &want) < 1e-12);
        let e0 = per_tap_error_cov(&own, &[CMatrix::zeros(m, m)], sigma2).unwrap();
        assert!(frob_rel(&e0, &want) < 1e-12);
    }

    #[test]
    fn residual_special_cases() {
        let m = 8;
        let sigma2 = 0.1;
        let a = steer(0.6, m);
        let own = &a * a.adjoint();
        assert_eq!(
            residual_matrix(&own, &[], sigma2).unwrap(),
            CMatrix::zeros(m, m)
        );
        assert_eq!(
            residual_matrix(&own, &[CMatrix::zeros(m, m)], sigma2).unwrap(),
            CMatrix::zeros(m, m)
        );
        // Orthogonal subspaces: DFT steering directions 2 bins apart.
        let theta2 = (0.6f64.cos() - 2.0 * 2.0 / m as f64).acos();
        let b = steer(theta2, m);
        assert!((a.adjoint() * &b)[(0, 0)].norm() < 1e-10);
        let int = &b * b.adjoint();
        let r = residual_matrix(&own, &[int], sigma2).unwrap();
        assert!(r.norm() < 1e-10);
    }

    #[test]
    fn residual_collinear_matches_scalar() {
        // Signal and interference along the same unit direction reduce to a
        // 1-D Wiener problem with powers s = S |a|^2 and i = I |a|^2.
        let m = 6;
        let sigma2 = 0.2;
        let (ps, pi) = (1.5, 0.7);
        let a = steer(1.3, m);
        let own = &a * a.adjoint() * C64::new(ps, 0.0);
        let int = &a * a.adjoint() * C64::new(pi, 0.0);
        let r = residual_matrix(&own, &[int], sigma2).unwrap();
        let (s, i) = (ps * m as f64, pi * m as f64);
        let e0 = s - s * s / (sigma2 + s);
        let e1 = s - s * s / (sigma2 + s + i);
        let closed = s * s * i / ((sigma2 + s) * (sigma2 + s + i));
        assert!((e1 - e0 - closed).abs() < 1e-12 * closed);
        let tr = r.trace().re;
        assert!(tr > 0.0);
        assert!((tr - closed).abs() < 1e-10 * closed);
    }

    #[test]
    fn residual_eigen_form_agrees() {
        let mut rng = seed::stream(4, &[]);
        for trial in 0..40 {
            let m = 2 + trial % 10;
            let own = random_psd(&mut rng, m, 1 + trial % m);
            let int = random_psd(&mut rng, m, 1 + (trial / 3) % m);
            let sigma2 = 0.05 + rng.gen::<f64>();
            let a = residual_matrix(&own, std::slice::from_ref(&int), sigma2).unwrap();
            let b = residual_matrix_eigen(&own, &[int], sigma2).unwrap();
            assert!(
                frob_rel(&b, &a) < 1e-8,
                "trial {trial}: {}",
                frob_rel(&b, &a)
            );
        }
    }

    #[test]
    fn residual_trace_matches_matrix() {
        let mut rng = seed::stream(5, &[]);
        let own = random_psd(&mut rng, 7, 3);
        let int = random_psd(&mut rng, 7, 2);
        let r = residual_matrix(&own, std::slice::from_ref(&int), 0.3).unwrap();
        let t = residual_trace(&own, &int, 0.3).unwrap();
        assert!((r.trace().re - t).abs() < 1e-10 * t.abs().max(1.0));
    }

    #[test]
    fn interference_never_helps() {
        let mut rng = seed::stream(6, &[]);
        for _ in 0..20 {
            let own = random_psd(&mut rng, 6, 3);
            let i1 = random_psd(&mut rng, 6, 2);
            let i2 = random_psd(&mut rng, 6, 1);
            let e0 = per_tap_error_cov(&own, &[], 0.2).unwrap().trace().re;
            let e1 = per_tap_error_cov(&own, std::slice::from_ref(&i1), 0.2)
                .unwrap()
                .trace()
                .re;
            let e2 = per_tap_error_cov(&own, &[i1, i2], 0.2).unwrap().trace().re;
            assert!(e0 <= e1 + 1e-12 && e1 <= e2 + 1e-12);
            assert!(e2 <= own.trace().re + 1e-12);
        }
    }

    #[test]
    fn error_covariance_is_psd() {
        let mut rng = seed::stream(7, &[]);
        let own = random_psd(&mut rng, 8, 4);
        let int = random_psd(&mut rng, 8, 4);
        let e = per_tap_error_cov(&own, std::slice::from_ref(&int), 0.1).unwrap();
        assert!((&e - e.adjoint()).norm() < 1e-12);
        let max = SymmetricEigen::new(e.clone()).eigenvalues.max();
        assert!(min_eigenvalue(&e) >= -1e-8 * max);
        let r = residual_matrix(&own, &[int], 0.1).unwrap();
        let rmax = SymmetricEigen::new(r.clone()).eigenvalues.max();
        assert!(min_eigenvalue(&r) >= -1e-8 * rmax);
    }

    #[test]
    fn dimension_errors() {
        let own = CMatrix::identity(3, 3);
        assert!(per_tap_mmse(&CVector::zeros(4), &own, &[], 0.1).is_err());
        assert!(per_tap_error_cov(&own, &[CMatrix::identity(2, 2)], 0.1).is_err());
        assert!(estimate_taps(
            &CMatrix::zeros(3, 2),
            std::slice::from_ref(&own),
            std::slice::from_ref(&own),
            0.1
        )
        .is_err());
    }
}
