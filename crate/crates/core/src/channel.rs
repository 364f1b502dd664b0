//! Power-delay profiles, ULA geometry and the scatterer-based spatial channel.
//!
//! Each resolvable tap of a user's channel toward a base station comes from
//! one scatterer cluster of `Q` sub-paths whose angles of arrival (AoA) sit
//! inside the cluster's angle spread. Conditioned on those angles, the tap is
//! `sqrt(P_n / Q) * sum_q a(theta_q) exp(j phi_q)` with i.i.d. uniform phases,
//! so its covariance is `(P_n / Q) * sum_q a(theta_q) a(theta_q)^H`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{seed, CMatrix, CVector, Error, Result, C64};

/// Per-tap decay of the exponential profile, `P_n = P_0 exp(-0.6 n)`.
pub const EXP_DECAY_PER_TAP: f64 = 0.6;

/// Sub-paths per scatterer cluster.
pub const DEFAULT_SUBPATHS: usize = 20;

/// Smallest distance kept between a sub-path AoA and the array end-fire
/// directions 0 and pi.
const AOA_EDGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdpKind {
    Uniform,
    Exponential,
    Sparse,
}

/// Average tap powers on a delay grid (the diagonal of `E[h h^H]`).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    powers: Vec<f64>,
    support: Vec<usize>,
}

impl PowerDelayProfile {
    pub fn from_powers(powers: Vec<f64>) -> Result<Self> {
        if powers.is_empty() {
            return Err(Error::InvalidProfile("empty delay grid".into()));
        }
        if let Some(p) = powers.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidProfile(format!(
                "tap power {p} is not a nonnegative number"
            )));
        }
        let support = powers
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(n, _)| n)
            .collect();
        Ok(Self { powers, support })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    /// Taps with nonzero power, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn total_power(&self) -> f64 {
        self.powers.iter().sum()
    }

    /// One past the last supported tap (0 for an all-zero profile).
    pub fn delay_spread(&self) -> usize {
        self.support.last().map_or(0, |n| n + 1)
    }

    /// The profile folded onto a length-`len` cyclic grid (tap `n` lands on
    /// `n mod len`). Lossless when the delay spread fits in `len`.
    pub fn on_grid(&self, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidSize("grid length must be at least 1".into()));
        }
        let mut powers = vec![0.0; len];
        for (n, p) in self.powers.iter().enumerate() {
            powers[n % len] += p;
        }
        Self::from_powers(powers)
    }

    /// Profile seen through a relative shift `delta`: `n -> P[(n + delta) mod L]`.
    pub fn rotated(&self, delta: i64) -> Self {
        let l = self.len();
        let d = delta.rem_euclid(l as i64) as usize;
        let powers: Vec<f64> = (0..l).map(|n| self.powers[(n + d) % l]).collect();
        Self::from_powers(powers).expect("rotation preserves validity")
    }
}

/// Builds a uniform, exponential or sparse profile on an `n_tones` grid with
/// all energy in the first `n_cp` taps, normalized to `total_power`.
pub fn make_pdp(
    kind: PdpKind,
    n_tones: usize,
    n_cp: usize,
    total_power: f64,
    sparse_support: Option<&[usize]>,
) -> Result<PowerDelayProfile> {
    if n_cp == 0 || n_cp > n_tones {
        return Err(Error::InvalidSize(format!(
            "need 1 <= n_cp <= n_tones, got n_cp={n_cp}, n_tones={n_tones}"
        )));
    }
    if !(total_power > 0.0 && total_power.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "total power must be positive, got {total_power}"
        )));
    }
    let mut shape = vec![0.0; n_tones];
    match kind {
        PdpKind::Uniform => shape[..n_cp].fill(1.0),
        PdpKind::Exponential => {
            for (n, p) in shape[..n_cp].iter_mut().enumerate() {
                *p = (-EXP_DECAY_PER_TAP * n as f64).exp();
            }
        }
        PdpKind::Sparse => {
            let taps: BTreeSet<usize> = sparse_support.unwrap_or(&[]).iter().copied().collect();
            if taps.is_empty() {
                return Err(Error::InvalidProfile(
                    "sparse profile needs a nonempty support".into(),
                ));
            }
            if let Some(&bad) = taps.iter().find(|&&n| n >= n_cp) {
                return Err(Error::InvalidProfile(format!(
                    "sparse tap {bad} outside the cyclic prefix [0, {n_cp})"
                )));
            }
            for n in taps {
                shape[n] = 1.0;
            }
        }
    }
    let sum: f64 = shape.iter().sum();
    PowerDelayProfile::from_powers(shape.into_iter().map(|p| p * total_power / sum).collect())
}

/// Uniform linear array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub n_antennas: usize,
    pub spacing_over_wavelength: f64,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self {
            n_antennas: 50,
            spacing_over_wavelength: 0.5,
        }
    }
}

impl ArrayConfig {
    pub fn new(n_antennas: usize, spacing_over_wavelength: f64) -> Result<Self> {
        let a = Self {
            n_antennas,
            spacing_over_wavelength,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_antennas == 0 {
            return Err(Error::InvalidConfig(
                "array needs at least one antenna".into(),
            ));
        }
        let d = self.spacing_over_wavelength;
        if !(d > 0.0 && d < 0.5 + 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "antenna spacing {d} wavelengths must lie in (0, 0.5]"
            )));
        }
        Ok(())
    }
}

/// ULA response `a(theta)[m] = exp(-j 2 pi m (D / lambda) cos theta)`.
pub fn steering_vector(theta: f64, array: &ArrayConfig) -> CVector {
    let step = -2.0 * PI * array.spacing_over_wavelength * theta.cos();
    CVector::from_iterator(
        array.n_antennas,
        (0..array.n_antennas).map(|m| C64::from_polar(1.0, step * m as f64)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UserId {
    pub cell: usize,
    pub user: usize,
}

impl UserId {
    pub fn new(cell: usize, user: usize) -> Self {
        Self { cell, user }
    }
}

/// Two users whose channels toward every base station bounce off the same
/// scatterers. Tap `n` of `first` and tap `tap_map[n]` of `second` share a
/// cluster (identical sub-path AoAs, independent phases). Taps past the end
/// of the map pair with themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedScatterers {
    pub first: UserId,
    pub second: UserId,
    #[serde(default)]
    pub tap_map: Vec<usize>,
}

/// Cells, users per cell and scatterer structure. Every cell hosts one base
/// station, so cell and base-station indices coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub n_cells: usize,
    pub users_per_cell: usize,
    #[serde(default = "default_subpaths")]
    pub n_subpaths: usize,
    #[serde(default)]
    pub shared: Vec<SharedScatterers>,
}

fn default_subpaths() -> usize {
    DEFAULT_SUBPATHS
}

impl Default for Topology {
    /// Two single-user cells whose cell-edge users share all scatterers.
    fn default() -> Self {
        Self {
            n_cells: 2,
            users_per_cell: 1,
            n_subpaths: DEFAULT_SUBPATHS,
            shared: vec![SharedScatterers {
                first: UserId::new(0, 0),
                second: UserId::new(1, 0),
                tap_map: Vec::new(),
            }],
        }
    }
}

impl Topology {
    pub fn validate(&self) -> Result<()> {
        if self.n_cells == 0 || self.users_per_cell == 0 || self.n_subpaths == 0 {
            return Err(Error::InvalidConfig(
                "cells, users per cell and sub-paths must all be positive".into(),
            ));
        }
        for pair in &self.shared {
            for u in [pair.first, pair.second] {
                self.check_user(u)?;
            }
            if pair.first == pair.second {
                return Err(Error::InvalidConfig(
                    "a user cannot share scatterers with itself".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn check_user(&self, u: UserId) -> Result<()> {
        if u.cell >= self.n_cells || u.user >= self.users_per_cell {
            return Err(Error::InvalidConfig(format!(
                "user ({}, {}) outside a {}x{} topology",
                u.cell, u.user, self.n_cells, self.users_per_cell
            )));
        }
        Ok(())
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> + '_ {
        (0..self.n_cells)
            .flat_map(move |cell| (0..self.users_per_cell).map(move |user| UserId { cell, user }))
    }
}

/// PDPs `P_k^{(l,b)}` for every user `(l, k)` toward every base station `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdpSet {
    n_cells: usize,
    users_per_cell: usize,
    profiles: Vec<PowerDelayProfile>,
}

impl PdpSet {
    /// The same profile for every (user, base station) link.
    pub fn uniform(topology: &Topology, pdp: &PowerDelayProfile) -> Self {
        Self::from_fn(topology, |_, _| pdp.clone())
    }

    pub fn from_fn(
        topology: &Topology,
        mut f: impl FnMut(UserId, usize) -> PowerDelayProfile,
    ) -> Self {
        let mut profiles = Vec::new();
        for u in topology.users() {
            for b in 0..topology.n_cells {
                profiles.push(f(u, b));
            }
        }
        Self {
            n_cells: topology.n_cells,
            users_per_cell: topology.users_per_cell,
            profiles,
        }
    }

    pub fn get(&self, user: UserId, bs: usize) -> &PowerDelayProfile {
        &self.profiles[(user.cell * self.users_per_cell + user.user) * self.n_cells + bs]
    }

    pub fn grid_len(&self) -> usize {
        self.profiles[0].len()
    }

    pub fn on_grid(&self, len: usize) -> Result<Self> {
        Ok(Self {
            n_cells: self.n_cells,
            users_per_cell: self.users_per_cell,
            profiles: self
                .profiles
                .iter()
                .map(|p| p.on_grid(len))
                .collect::<Result<_>>()?,
        })
    }
}

/// Geometry of one scatterer cluster as seen from one base station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathGeometry {
    pub center_aoa: f64,
    pub angle_spread: f64,
    pub subpath_aoas: Vec<f64>,
    pub power: f64,
}

impl PathGeometry {
    /// A cluster with all `q` sub-paths spread evenly over the spread
    /// `[center - spread/2, center + spread/2]`.
    pub fn evenly_spread(center_aoa: f64, angle_spread: f64, q: usize, power: f64) -> Self {
        let subpath_aoas = (0..q)
            .map(|i| {
                let frac = if q == 1 {
                    0.5
                } else {
                    i as f64 / (q - 1) as f64
                };
                clip_aoa(center_aoa + angle_spread * (frac - 0.5))
            })
            .collect();
        Self {
            center_aoa,
            angle_spread,
            subpath_aoas,
            power,
        }
    }

    /// Columns `sqrt(P / Q) a(theta_q)`.
    fn scaled_steering(&self, array: &ArrayConfig) -> CMatrix {
        let q = self.subpath_aoas.len();
        let amp = (self.power / q as f64).sqrt();
        let mut a = CMatrix::zeros(array.n_antennas, q);
        for (j, &theta) in self.subpath_aoas.iter().enumerate() {
            a.set_column(j, &(steering_vector(theta, array) * C64::new(amp, 0.0)));
        }
        a
    }
}

fn clip_aoa(theta: f64) -> f64 {
    theta.clamp(AOA_EDGE, PI - AOA_EDGE)
}

/// Scatterer geometry of every (user, base station, tap) on a delay grid.
/// A tap may carry several clusters after folding onto a shorter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialScene {
    n_cells: usize,
    users_per_cell: usize,
    taps: usize,
    paths: Vec<Vec<PathGeometry>>,
}

impl SpatialScene {
    /// A scene with no scatterers, to be filled with [`SpatialScene::set_path`].
    pub fn empty(n_cells: usize, users_per_cell: usize, taps: usize) -> Self {
        Self {
            n_cells,
            users_per_cell,
            taps,
            paths: vec![Vec::new(); n_cells * users_per_cell * n_cells * taps],
        }
    }

    fn index(&self, user: UserId, bs: usize, tap: usize) -> usize {
        assert!(
            user.cell < self.n_cells
                && user.user < self.users_per_cell
                && bs < self.n_cells
                && tap < self.taps,
            "scene index out of range"
        );
        ((user.cell * self.users_per_cell + user.user) * self.n_cells + bs) * self.taps + tap
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn users_per_cell(&self) -> usize {
        self.users_per_cell
    }

    /// Delay-grid length.
    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn paths(&self, user: UserId, bs: usize, tap: usize) -> &[PathGeometry] {
        &self.paths[self.index(user, bs, tap)]
    }

    pub fn set_path(&mut self, user: UserId, bs: usize, tap: usize, path: PathGeometry) {
        let i = self.index(user, bs, tap);
        self.paths[i] = vec![path];
    }

    /// Tap powers of the link `user -> bs`.
    pub fn pdp(&self, user: UserId, bs: usize) -> PowerDelayProfile {
        let powers = (0..self.taps)
            .map(|n| self.paths(user, bs, n).iter().map(|p| p.power).sum())
            .collect();
        PowerDelayProfile::from_powers(powers).expect("scene powers are nonnegative")
    }

    /// Per-link PDPs implied by the path powers.
    pub fn pdp_set(&self) -> PdpSet {
        let mut profiles = Vec::new();
        for cell in 0..self.n_cells {
            for user in 0..self.users_per_cell {
                for b in 0..self.n_cells {
                    profiles.push(self.pdp(UserId { cell, user }, b));
                }
            }
        }
        PdpSet {
            n_cells: self.n_cells,
            users_per_cell: self.users_per_cell,
            profiles,
        }
    }

    /// The scene on a length-`len` cyclic grid; tap `n` moves to `n mod len`.
    pub fn on_grid(&self, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidSize("grid length must be at least 1".into()));
        }
        let mut out = Self::empty(self.n_cells, self.users_per_cell, len);
        for cell in 0..self.n_cells {
            for user in 0..self.users_per_cell {
                let u = UserId { cell, user };
                for b in 0..self.n_cells {
                    for n in 0..self.taps {
                        let src = self.paths(u, b, n).to_vec();
                        let i = out.index(u, b, n % len);
                        out.paths[i].extend(src);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Draws scatterer geometry for every link: per supported tap, a center AoA
/// uniform on (0, pi) and `Q` sub-path AoAs uniform within `as_value` around
/// it. Shared-scatterer pairs then copy the first user's clusters onto the
/// second user's mapped taps.
pub fn draw_scene(
    rng_seed: u64,
    topology: &Topology,
    as_value: f64,
    pdps: &PdpSet,
) -> Result<SpatialScene> {
    topology.validate()?;
    if !(as_value >= 0.0 && as_value.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "angle spread {as_value} must be >= 0"
        )));
    }
    let taps = pdps.grid_len();
    let q = topology.n_subpaths;
    let mut scene = SpatialScene::empty(topology.n_cells, topology.users_per_cell, taps);
    for u in topology.users() {
        for b in 0..topology.n_cells {
            let pdp = pdps.get(u, b);
            if pdp.len() != taps {
                return Err(Error::DimensionMismatch(
                    "PDPs on different delay grids".into(),
                ));
            }
            let mut rng = seed::stream(rng_seed, &[u.cell as u64, u.user as u64, b as u64]);
            for &n in pdp.support() {
                let center = clip_aoa(rng.gen_range(0.0..PI));
                let subpath_aoas = (0..q)
                    .map(|_| {
                        if as_value == 0.0 {
                            center
                        } else {
                            clip_aoa(center + as_value * (rng.gen::<f64>() - 0.5))
                        }
                    })
                    .collect();
                scene.set_path(
                    u,
                    b,
                    n,
                    PathGeometry {
                        center_aoa: center,
                        angle_spread: as_value,
                        subpath_aoas,
                        power: pdp.powers()[n],
                    },
                );
            }
        }
    }
    for pair in &topology.shared {
        if pair.tap_map.len() > taps {
            return Err(Error::InvalidConfig(format!(
                "shared-scatterer tap map has {} entries for a {taps}-tap grid",
                pair.tap_map.len()
            )));
        }
        if let Some(&bad) = pair.tap_map.iter().find(|&&m| m >= taps) {
            return Err(Error::InvalidConfig(format!(
                "tap map entry {bad} outside the grid"
            )));
        }
        for b in 0..topology.n_cells {
            for n in 0..taps {
                let m = pair.tap_map.get(n).copied().unwrap_or(n);
                let (Some(src), Some(dst)) = (
                    scene.paths(pair.first, b, n).first().cloned(),
                    scene.paths(pair.second, b, m).first().cloned(),
                ) else {
                    continue;
                };
                scene.set_path(
                    pair.second,
                    b,
                    m,
                    PathGeometry {
                        power: dst.power,
                        ..src
                    },
                );
            }
        }
    }
    Ok(scene)
}

/// Which channel a [`TapCovariance`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovarianceSource {
    User { user: UserId, bs: usize, tap: usize },
    Aggregate { cell: usize, bs: usize, tap: usize },
}

/// Spatial covariance of one delay tap across the array.
#[derive(Debug, Clone, PartialEq)]
pub struct TapCovariance {
    pub matrix: CMatrix,
    pub tap: usize,
    pub source: CovarianceSource,
}

fn link_tap_matrix(paths: &[PathGeometry], array: &ArrayConfig) -> Option<CMatrix> {
    let mut acc: Option<CMatrix> = None;
    for p in paths.iter().filter(|p| p.power > 0.0) {
        let a = p.scaled_steering(array);
        let c = &a * a.adjoint();
        acc = Some(match acc {
            Some(s) => s + c,
            None => c,
        });
    }
    acc
}

/// `C = (P_n / Q) sum_q a(theta_q) a(theta_q)^H` for tap `tap` of `user -> bs`;
/// the zero matrix off the support.
pub fn tap_covariance(
    scene: &SpatialScene,
    user: UserId,
    bs: usize,
    tap: usize,
    array: &ArrayConfig,
) -> TapCovariance {
    let m = array.n_antennas;
    TapCovariance {
        matrix: link_tap_matrix(scene.paths(user, bs, tap), array)
            .unwrap_or_else(|| CMatrix::zeros(m, m)),
        tap,
        source: CovarianceSource::User { user, bs, tap },
    }
}

/// Covariance of tap `tap` of the aggregate channel from cell `cell` to
/// base station `bs` when user `k` of that cell uses cyclic shift
/// `shifts[k]`: `sum_k rho_k C_{k}((tap + tau_k) mod L)`.
pub fn aggregate_tap_covariance(
    scene: &SpatialScene,
    shifts: &[usize],
    cell: usize,
    bs: usize,
    tap: usize,
    tone_power: &[f64],
    array: &ArrayConfig,
) -> Result<TapCovariance> {
    if shifts.len() != scene.users_per_cell() || tone_power.len() != scene.users_per_cell() {
        return Err(Error::DimensionMismatch(format!(
            "need one shift and one power per user of cell {cell}"
        )));
    }
    let bank = CovarianceBank::new(scene, array);
    let users: Vec<(usize, usize, f64)> = (0..shifts.len())
        .map(|k| (k, shifts[k], tone_power[k]))
        .collect();
    Ok(TapCovariance {
        matrix: bank
            .aggregate(cell, bs, tap, &users)
            .unwrap_or_else(|| CMatrix::zeros(array.n_antennas, array.n_antennas)),
        tap,
        source: CovarianceSource::Aggregate { cell, bs, tap },
    })
}

/// All per-link tap covariances of a scene, computed once.
#[derive(Debug, Clone)]
pub struct CovarianceBank {
    n_cells: usize,
    users_per_cell: usize,
    taps: usize,
    n_antennas: usize,
    matrices: Vec<Option<CMatrix>>,
}

impl CovarianceBank {
    pub fn new(scene: &SpatialScene, array: &ArrayConfig) -> Self {
        let matrices = scene
            .paths
            .par_iter()
            .map(|paths| link_tap_matrix(paths, array))
            .collect();
        Self {
            n_cells: scene.n_cells,
            users_per_cell: scene.users_per_cell,
            taps: scene.taps,
            n_antennas: array.n_antennas,
            matrices,
        }
    }

    pub fn taps(&self) -> usize {
        self.taps
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn users_per_cell(&self) -> usize {
        self.users_per_cell
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    /// `None` when the tap carries no power.
    pub fn get(&self, user: UserId, bs: usize, tap: usize) -> Option<&CMatrix> {
        let i =
            ((user.cell * self.users_per_cell + user.user) * self.n_cells + bs) * self.taps + tap;
        self.matrices[i].as_ref()
    }

    /// Aggregate covariance of tap `tap` from the users `(k, tau_k, rho_k)`
    /// of cell `cell` toward `bs`, or `None` if no user contributes.
    pub fn aggregate(
        &self,
        cell: usize,
        bs: usize,
        tap: usize,
        users: &[(usize, usize, f64)],
    ) -> Option<CMatrix> {
        let mut acc: Option<CMatrix> = None;
        for &(k, tau, rho) in users {
            if rho == 0.0 {
                continue;
            }
            let t = (tap + tau) % self.taps;
            if let Some(c) = self.get(UserId::new(cell, k), bs, t) {
                let term = c * C64::new(rho, 0.0);
                acc = Some(match acc {
                    Some(s) => s + term,
                    None => term,
                });
            }
        }
        acc
    }
}

/// One channel realization of `user -> bs`: an `M x L` matrix whose column
/// `n` is `sqrt(P_n / Q) sum_q a(theta_q) exp(j phi_q)` with fresh phases.
pub fn realize_cir<R: Rng + ?Sized>(
    scene: &SpatialScene,
    user: UserId,
    bs: usize,
    array: &ArrayConfig,
    rng: &mut R,
) -> CMatrix {
    CirSampler::new(scene, user, bs, array).sample(rng)
}

/// Repeated [`realize_cir`] draws for one link with the steering vectors
/// computed once.
#[derive(Debug, Clone)]
pub struct CirSampler {
    n_antennas: usize,
    /// `taps[n]`: scaled steering matrices of the paths on tap `n`.
    taps: Vec<Vec<CMatrix>>,
}

impl CirSampler {
    pub fn new(scene: &SpatialScene, user: UserId, bs: usize, array: &ArrayConfig) -> Self {
        let taps = (0..scene.taps())
            .map(|n| {
                scene
                    .paths(user, bs, n)
                    .iter()
                    .filter(|p| p.power > 0.0)
                    .map(|p| p.scaled_steering(array))
                    .collect()
            })
            .collect();
        Self {
            n_antennas: array.n_antennas,
            taps,
        }
    }

    /// Draws one `M x L` realization; phases are drawn tap by tap, path by
    /// path, sub-path by sub-path.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let mut h = CMatrix::zeros(self.n_antennas, self.taps.len());
        for (n, paths) in self.taps.iter().enumerate() {
            for a in paths {
                let phases = CVector::from_fn(a.ncols(), |_, _| {
                    C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
                });
                let mut col = h.column_mut(n);
                col.gemv(C64::new(1.0, 0.0), a, &phases, C64::new(1.0, 0.0));
            }
        }
        h
    }
}

/// [`realize_cir`] on the stream keyed by `rng_seed`.
pub fn realize_cir_seeded(
    scene: &SpatialScene,
    user: UserId,
    bs: usize,
    array: &ArrayConfig,
    rng_seed: u64,
) -> CMatrix {
    let mut rng = seed::stream(rng_seed, &[]);
    realize_cir(scene, user, bs, array, &mut rng)
}
