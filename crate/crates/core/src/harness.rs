//! Monte-Carlo comparison of pilot-alignment arms.
//!
//! Each run draws a scatterer geometry, picks a plan per arm, then averages
//! channel and noise realizations that are shared by every arm:
//!
//! - `BA`: tone-group pilots with optimized shifts;
//! - `NA`: tone-group pilots with every shift fixed (colliding PDPs);
//! - `NI`: the `NA` plan with inter-cell pilots removed.
//!
//! Estimates feed per-tone matched-filter downlink precoders, whose sum
//! spectral efficiency is reported next to the estimation NMSE.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alignment::{
    fixed_tone_group_plan, optimize_tone_groups, AlignmentPlan, AlignmentProblem, Scheme,
    ToneGroupOptions,
};
use crate::channel::{
    draw_scene, make_pdp, ArrayConfig, CirSampler, CovarianceBank, PdpKind, PdpSet, SpatialScene,
    Topology, UserId,
};
use crate::estimation::{tap_wiener_filter, LinkBudget};
use crate::model::OfdmConfig;
use crate::{seed, CMatrix, CVector, Error, Result, C64};

/// Experimental arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arm {
    BA,
    NA,
    NI,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::BA => "BA",
            Arm::NA => "NA",
            Arm::NI => "NI",
        })
    }
}

/// Output format of [`emit_results`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub ofdm: OfdmConfig,
    #[serde(default)]
    pub array: ArrayConfig,
    #[serde(default)]
    pub topology: Topology,
    #[serde(default = "default_pdp_kind")]
    pub pdp_kind: PdpKind,
    /// Taps of the sparse profile; ignored for the other kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparse_support: Option<Vec<usize>>,
    /// Angular spread in degrees.
    #[serde(default = "default_as_deg")]
    pub as_deg: f64,
    #[serde(default = "default_snr_db")]
    pub snr_db: f64,
    #[serde(default = "default_n_runs")]
    pub n_runs: usize,
    #[serde(default = "default_realizations")]
    pub realizations_per_run: usize,
    #[serde(default = "default_arms")]
    pub schemes: Vec<Arm>,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    /// Users whose estimates are scored; each is served by its own cell.
    #[serde(default = "default_targets")]
    pub targets: Vec<UserId>,
    /// Shift shared by every user in the `NA` arm.
    #[serde(default)]
    pub na_shift: usize,
    #[serde(default)]
    pub swap_pass: bool,
    /// Fixed plan for the `BA` arm instead of optimizing each run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<AlignmentPlan>,
}

fn default_pdp_kind() -> PdpKind {
    PdpKind::Exponential
}
fn default_as_deg() -> f64 {
    10.0
}
fn default_snr_db() -> f64 {
    10.0
}
fn default_n_runs() -> usize {
    1000
}
fn default_realizations() -> usize {
    10
}
fn default_arms() -> Vec<Arm> {
    vec![Arm::BA, Arm::NA, Arm::NI]
}
fn default_seed() -> u64 {
    1
}
fn default_targets() -> Vec<UserId> {
    vec![UserId::new(0, 0), UserId::new(1, 0)]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            ofdm: OfdmConfig::default(),
            array: ArrayConfig::default(),
            topology: Topology::default(),
            pdp_kind: default_pdp_kind(),
            sparse_support: None,
            as_deg: default_as_deg(),
            snr_db: default_snr_db(),
            n_runs: default_n_runs(),
            realizations_per_run: default_realizations(),
            schemes: default_arms(),
            master_seed: default_seed(),
            targets: default_targets(),
            na_shift: 0,
            swap_pass: false,
            plan: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.array.validate()?;
        self.topology.validate()?;
        if self.n_runs == 0 || self.realizations_per_run == 0 {
            return Err(Error::InvalidConfig(
                "n_runs and realizations_per_run must be at least 1".into(),
            ));
        }
        if self.schemes.is_empty() {
            return Err(Error::InvalidConfig("no schemes to compare".into()));
        }
        if self.targets.is_empty() {
            return Err(Error::InvalidConfig("no target users".into()));
        }
        for &t in &self.targets {
            self.topology.check_user(t)?;
        }
        if !self.snr_db.is_finite() || !(self.as_deg >= 0.0 && self.as_deg.is_finite()) {
            return Err(Error::InvalidConfig(
                "snr_db and as_deg must be finite, as_deg >= 0".into(),
            ));
        }
        if self.ofdm.n_groups() < self.topology.users_per_cell {
            return Err(Error::Capacity(format!(
                "{} users per cell exceed the {} tone groups",
                self.topology.users_per_cell,
                self.ofdm.n_groups()
            )));
        }
        if let Some(plan) = &self.plan {
            plan.validate_shape(self.topology.n_cells, self.topology.users_per_cell)?;
            if plan.scheme != Scheme::ToneGroup || plan.sequence_length != self.ofdm.n_cp() {
                return Err(Error::InvalidConfig(
                    "a fixed plan must be a tone-group plan of length N_cp".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let cfg: Self = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn pdp_set(&self) -> Result<PdpSet> {
        let pdp = make_pdp(
            self.pdp_kind,
            self.ofdm.n_tones(),
            self.ofdm.n_cp(),
            1.0,
            self.sparse_support.as_deref(),
        )?;
        Ok(PdpSet::uniform(&self.topology, &pdp))
    }

    pub fn budget(&self) -> Result<LinkBudget> {
        LinkBudget::from_snr_db(
            self.topology.n_cells,
            self.topology.users_per_cell,
            self.snr_db,
        )
    }

    /// Scatterer geometry of run `run_index`.
    pub fn scene(&self, run_index: usize) -> Result<SpatialScene> {
        draw_scene(
            seed::derive(self.master_seed, &[0, run_index as u64]),
            &self.topology,
            self.as_deg.to_radians(),
            &self.pdp_set()?,
        )
    }

    /// Statistics of run `run_index`, ready for plan evaluation.
    pub fn problem(&self, run_index: usize) -> Result<AlignmentProblem> {
        AlignmentProblem::new(
            &self.scene(run_index)?,
            &self.array,
            &self.budget()?,
            &self.ofdm,
        )
    }

    /// The `BA` plan of one run: the configured plan or the optimized one.
    pub fn best_plan(&self, problem: &AlignmentProblem) -> Result<AlignmentPlan> {
        match &self.plan {
            Some(p) => Ok(p.clone()),
            None => optimize_tone_groups(
                problem,
                ToneGroupOptions {
                    swap_pass: self.swap_pass,
                },
            ),
        }
    }

    pub fn fixed_plan(&self) -> Result<AlignmentPlan> {
        fixed_tone_group_plan(
            self.topology.n_cells,
            self.topology.users_per_cell,
            &self.ofdm,
            self.na_shift,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_index: usize,
    pub scheme: Arm,
    pub nmse_linear: f64,
    pub nmse_db: f64,
    pub sum_se_bits_per_tone: f64,
    pub plan: AlignmentPlan,
}

/// `sum ||est - truth||^2 / sum ||truth||^2` over paired matrices.
pub fn nmse(estimates: &[CMatrix], truths: &[CMatrix]) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} estimates for {} truths",
            estimates.len(),
            truths.len()
        )));
    }
    let mut err = 0.0;
    let mut energy = 0.0;
    for (e, t) in estimates.iter().zip(truths) {
        if e.shape() != t.shape() {
            return Err(Error::DimensionMismatch(format!(
                "estimate {:?} vs truth {:?}",
                e.shape(),
                t.shape()
            )));
        }
        err += (e - t).norm_squared();
        energy += t.norm_squared();
    }
    if energy == 0.0 {
        return Err(Error::UndefinedMetric("truth has zero energy".into()));
    }
    Ok(err / energy)
}

/// `taps x n_tones` matrix with entries `exp(-j 2 pi k d / n_tones)`.
fn twiddle(taps: usize, n_tones: usize) -> CMatrix {
    CMatrix::from_fn(taps, n_tones, |d, k| {
        C64::from_polar(1.0, -2.0 * PI * ((k * d) % n_tones) as f64 / n_tones as f64)
    })
}

/// `H(k) = sum_d h(d) exp(-j 2 pi k d / n_tones)` for every tone `k`; column
/// `k` of the result.
pub fn frequency_response(cir: &CMatrix, n_tones: usize) -> CMatrix {
    cir * twiddle(cir.ncols(), n_tones)
}

/// Downlink link for [`sum_spectral_efficiency`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownlinkBudget {
    pub tx_power: f64,
    pub noise_variance: f64,
    pub n_tones: usize,
}

/// Sum over users of the tone-averaged `log2(1 + SINR)` under per-tone
/// matched-filter precoding from estimated channels.
///
/// `truths[u][b]` is the CIR (`M x L`, delay taps) of user `u` toward base
/// station `b`; `estimates[u]` is its estimate at the serving station
/// `serving[u]`. Each user's precoder is the conjugate of its estimated
/// frequency response at unit norm; every other user's beam leaks into it.
pub fn sum_spectral_efficiency(
    truths: &[Vec<CMatrix>],
    estimates: &[CMatrix],
    serving: &[usize],
    dl: &DownlinkBudget,
) -> Result<f64> {
    let n_users = estimates.len();
    if truths.len() != n_users || serving.len() != n_users {
        return Err(Error::DimensionMismatch(
            "one truth row and serving cell per estimate".into(),
        ));
    }
    if let Some(&b) = serving
        .iter()
        .find(|&&b| truths.iter().any(|row| b >= row.len()))
    {
        return Err(Error::DimensionMismatch(format!(
            "serving base station {b} has no channel"
        )));
    }
    let responses: Vec<Vec<CMatrix>> = truths
        .iter()
        .map(|row| {
            row.iter()
                .map(|t| frequency_response(t, dl.n_tones))
                .collect()
        })
        .collect();
    let est: Vec<CMatrix> = estimates
        .iter()
        .map(|e| frequency_response(e, dl.n_tones))
        .collect();
    Ok(se_from_responses(&responses, &est, serving, dl))
}

/// [`sum_spectral_efficiency`] on frequency responses (`M x n_tones`).
fn se_from_responses(
    truths: &[Vec<CMatrix>],
    estimates: &[CMatrix],
    serving: &[usize],
    dl: &DownlinkBudget,
) -> f64 {
    let n_users = estimates.len();
    let k_tones = dl.n_tones;
    let precoders: Vec<CMatrix> = estimates
        .iter()
        .map(|e| {
            let mut w = e.map(|z| z.conj());
            for mut col in w.column_iter_mut() {
                let n = col.norm();
                if n > 0.0 {
                    col /= C64::new(n, 0.0);
                }
            }
            w
        })
        .collect();
    let mut total = 0.0;
    for (u, h) in truths.iter().enumerate() {
        let mut se = 0.0;
        for k in 0..k_tones {
            let gain = |v: usize| {
                let hk = h[serving[v]].column(k);
                dl.tx_power * hk.dot(&precoders[v].column(k)).norm_sqr()
            };
            let desired = gain(u);
            let leak: f64 = (0..n_users).filter(|&v| v != u).map(gain).sum();
            se += (1.0 + desired / (dl.noise_variance + leak)).log2();
        }
        total += se / k_tones as f64;
    }
    total
}

/// Circularly complex Gaussian `M x L` noise with per-entry variance `var`.
fn noise<R: Rng + ?Sized>(rows: usize, cols: usize, var: f64, rng: &mut R) -> CMatrix {
    let s = (var / 2.0).sqrt();
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(s * re, s * im)
    })
}

/// Delay-domain CIR folded onto `len` taps.
fn fold(h: &CMatrix, len: usize) -> CMatrix {
    let mut out = CMatrix::zeros(h.nrows(), len);
    for d in 0..h.ncols() {
        let mut col = out.column_mut(d % len);
        col += h.column(d);
    }
    out
}

/// Per-tap filters of one target under one plan.
struct TargetFilter {
    /// `filters[n]`, `None` where the own aggregate covariance vanishes.
    filters: Vec<Option<CMatrix>>,
}

fn members(
    plan: &AlignmentPlan,
    budget: &LinkBudget,
    cell: usize,
    group: usize,
) -> Vec<(usize, usize, f64)> {
    plan.members(cell, group)
        .into_iter()
        .map(|(k, tau)| (k, tau, budget.rho(cell, k)))
        .collect()
}

fn target_filter(
    bank: &CovarianceBank,
    plan: &AlignmentPlan,
    budget: &LinkBudget,
    target: UserId,
    with_interference: bool,
) -> Result<TargetFilter> {
    let len = bank.taps();
    let b = target.cell;
    let g = plan.group(target);
    let own = members(plan, budget, b, g);
    let filters = (0..len)
        .map(|n| {
            let Some(c_own) = bank.aggregate(b, b, n, &own) else {
                return Ok(None);
            };
            let others: Vec<CMatrix> = if with_interference {
                (0..bank.n_cells())
                    .filter(|&l| l != b)
                    .filter_map(|l| bank.aggregate(l, b, n, &members(plan, budget, l, g)))
                    .collect()
            } else {
                Vec::new()
            };
            tap_wiener_filter(&c_own, &others, budget.noise_variance).map(Some)
        })
        .collect::<Result<_>>()?;
    Ok(TargetFilter { filters })
}

/// Observation `g_n` at the target's base station on its tone group, plus
/// the target's own CIR estimate recovered from it.
#[allow(clippy::too_many_arguments)]
fn estimate_target(
    comb: &[Vec<CMatrix>],
    plan: &AlignmentPlan,
    budget: &LinkBudget,
    filter: &TargetFilter,
    target: UserId,
    users_per_cell: usize,
    noise_block: &CMatrix,
    with_interference: bool,
) -> CMatrix {
    let len = noise_block.ncols();
    let b = target.cell;
    let g = plan.group(target);
    let mut y = noise_block.clone();
    for l in 0..comb.len() / users_per_cell {
        if l != b && !with_interference {
            continue;
        }
        for (k, tau) in plan.members(l, g) {
            let rho = budget.rho(l, k);
            let h = &comb[l * users_per_cell + k][b];
            for n in 0..len {
                let mut col = y.column_mut(n);
                col.axpy(
                    C64::new(rho.sqrt(), 0.0),
                    &h.column((n + tau) % len),
                    C64::new(1.0, 0.0),
                );
            }
        }
    }
    let tau_u = plan.shift(target);
    let rho_u = budget.rho(b, target.user);
    let mut est = CMatrix::zeros(y.nrows(), len);
    if rho_u > 0.0 {
        for d in 0..len {
            let n = (d + len - tau_u) % len;
            if let Some(w) = &filter.filters[n] {
                let agg: CVector = w * y.column(n);
                est.set_column(d, &(agg / C64::new(rho_u.sqrt(), 0.0)));
            }
        }
    }
    est
}

/// All records of one run, in the order of `config.schemes`.
pub fn run_once(config: &ExperimentConfig, run_index: usize) -> Result<Vec<RunRecord>> {
    let scene = config.scene(run_index)?;
    let budget = config.budget()?;
    let problem = AlignmentProblem::new(&scene, &config.array, &budget, &config.ofdm)?;
    let bank = problem.bank(config.ofdm.n_cp())?;
    let n_cp = config.ofdm.n_cp();
    let (b_count, k_count) = (config.topology.n_cells, config.topology.users_per_cell);
    let m = config.array.n_antennas;

    let fixed = config.fixed_plan()?;
    let best = if config.schemes.contains(&Arm::BA) {
        Some(config.best_plan(&problem)?)
    } else {
        None
    };
    let arms: Vec<(Arm, &AlignmentPlan, bool)> = config
        .schemes
        .iter()
        .map(|&a| match a {
            Arm::BA => (a, best.as_ref().expect("BA plan"), true),
            Arm::NA => (a, &fixed, true),
            Arm::NI => (a, &fixed, false),
        })
        .collect();
    let filters: Vec<Vec<TargetFilter>> = arms
        .iter()
        .map(|&(_, plan, with_int)| {
            config
                .targets
                .iter()
                .map(|&t| target_filter(bank, plan, &budget, t, with_int))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let serving: Vec<usize> = config.targets.iter().map(|t| t.cell).collect();
    let dl = DownlinkBudget {
        tx_power: 1.0,
        noise_variance: budget.noise_variance,
        n_tones: config.ofdm.n_tones(),
    };
    let tw = twiddle(n_cp, dl.n_tones);
    // samplers[user][bs]
    let samplers: Vec<Vec<CirSampler>> = (0..b_count)
        .flat_map(|l| (0..k_count).map(move |k| UserId::new(l, k)))
        .map(|u| {
            (0..b_count)
                .map(|b| CirSampler::new(&scene, u, b, &config.array))
                .collect()
        })
        .collect();
    let mut estimates = vec![Vec::new(); arms.len()];
    let mut truths = Vec::new();
    let mut se = vec![0.0; arms.len()];
    for r in 0..config.realizations_per_run {
        // comb[user][bs]: folded CIR of every user toward every station.
        let comb: Vec<Vec<CMatrix>> = (0..b_count)
            .flat_map(|l| (0..k_count).map(move |k| UserId::new(l, k)))
            .map(|u| {
                (0..b_count)
                    .map(|b| {
                        let mut rng = seed::stream(
                            config.master_seed,
                            &[
                                1,
                                run_index as u64,
                                r as u64,
                                u.cell as u64,
                                u.user as u64,
                                b as u64,
                            ],
                        );
                        fold(
                            &samplers[u.cell * k_count + u.user][b].sample(&mut rng),
                            n_cp,
                        )
                    })
                    .collect()
            })
            .collect();
        let noise_blocks: Vec<CMatrix> = (0..config.targets.len())
            .map(|i| {
                let mut rng = seed::stream(
                    config.master_seed,
                    &[2, run_index as u64, r as u64, i as u64],
                );
                noise(m, n_cp, budget.noise_variance, &mut rng)
            })
            .collect();
        let target_truths: Vec<Vec<CMatrix>> = config
            .targets
            .iter()
            .map(|t| comb[t.cell * k_count + t.user].clone())
            .collect();
        for (i, t) in config.targets.iter().enumerate() {
            truths.push(target_truths[i][t.cell].clone());
        }
        let truth_fr: Vec<Vec<CMatrix>> = target_truths
            .iter()
            .map(|row| row.iter().map(|h| h * &tw).collect())
            .collect();
        for (a, &(_, plan, with_int)) in arms.iter().enumerate() {
            let est: Vec<CMatrix> = config
                .targets
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    estimate_target(
                        &comb,
                        plan,
                        &budget,
                        &filters[a][i],
                        t,
                        k_count,
                        &noise_blocks[i],
                        with_int,
                    )
                })
                .collect();
            let est_fr: Vec<CMatrix> = est.iter().map(|e| e * &tw).collect();
            se[a] += se_from_responses(&truth_fr, &est_fr, &serving, &dl);
            estimates[a].extend(est);
        }
    }
    arms.iter()
        .enumerate()
        .map(|(a, &(arm, plan, _))| {
            let v = nmse(&estimates[a], &truths)?;
            Ok(RunRecord {
                run_index,
                scheme: arm,
                nmse_linear: v,
                nmse_db: 10.0 * v.log10(),
                sum_se_bits_per_tone: se[a] / config.realizations_per_run as f64,
                plan: plan.clone(),
            })
        })
        .collect()
}

/// Every run in parallel; records sorted by run index, then by the order of
/// `config.schemes`. The first failing run (by index) aborts the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let per_run: Vec<Result<Vec<RunRecord>>> = (0..config.n_runs)
        .into_par_iter()
        .map(|i| run_once(config, i))
        .collect();
    let mut out = Vec::with_capacity(config.n_runs * config.schemes.len());
    for (run_index, r) in per_run.into_iter().enumerate() {
        match r {
            Ok(records) => out.extend(records),
            Err(e) => {
                return Err(Error::Run {
                    run_index,
                    source: Box::new(e),
                })
            }
        }
    }
    Ok(out)
}

/// Nearest-rank percentile of ascending `sorted`, `p` in `(0, 100]`.
pub fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    Some(sorted[rank.clamp(1, sorted.len()) - 1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PercentileRow {
    pub percentile: u32,
    pub nmse_db: f64,
    pub sum_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub scheme: Arm,
    pub runs: usize,
    pub median_nmse_db: f64,
    pub median_sum_se: f64,
    pub percentiles: Vec<PercentileRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub schemes: Vec<ArmSummary>,
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Per-arm empirical CDFs at percentiles 1..=99, arms in `config.schemes` order.
pub fn summarize(records: &[RunRecord], config: &ExperimentConfig) -> Summary {
    let schemes = config
        .schemes
        .iter()
        .map(|&arm| {
            let mine: Vec<&RunRecord> = records.iter().filter(|r| r.scheme == arm).collect();
            let nmse = sorted(mine.iter().map(|r| r.nmse_db).collect());
            let se = sorted(mine.iter().map(|r| r.sum_se_bits_per_tone).collect());
            let at = |v: &[f64], p: f64| percentile(v, p).unwrap_or(f64::NAN);
            ArmSummary {
                scheme: arm,
                runs: mine.len(),
                median_nmse_db: at(&nmse, 50.0),
                median_sum_se: at(&se, 50.0),
                percentiles: (1..=99)
                    .map(|p| PercentileRow {
                        percentile: p,
                        nmse_db: at(&nmse, p as f64),
                        sum_se: at(&se, p as f64),
                    })
                    .collect(),
            }
        })
        .collect();
    Summary {
        config: config.clone(),
        schemes,
    }
}

/// Median NMSE (dB) of one arm, nearest-rank.
pub fn median_nmse_db(records: &[RunRecord], arm: Arm) -> Option<f64> {
    let v = sorted(
        records
            .iter()
            .filter(|r| r.scheme == arm)
            .map(|r| r.nmse_db)
            .collect(),
    );
    percentile(&v, 50.0)
}

/// Median sum SE of one arm, nearest-rank.
pub fn median_sum_se(records: &[RunRecord], arm: Arm) -> Option<f64> {
    let v = sorted(
        records
            .iter()
            .filter(|r| r.scheme == arm)
            .map(|r| r.sum_se_bits_per_tone)
            .collect(),
    );
    percentile(&v, 50.0)
}

/// CSV with columns `run,scheme,nmse_db,sum_se`, nine significant digits.
pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "scheme", "nmse_db", "sum_se"])?;
    for r in records {
        w.write_record([
            r.run_index.to_string(),
            r.scheme.to_string(),
            format!("{:.8e}", r.nmse_db),
            format!("{:.8e}", r.sum_se_bits_per_tone),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes `records` to `path` as CSV rows or as a JSON [`Summary`].
pub fn emit_results(
    records: &[RunRecord],
    config: &ExperimentConfig,
    path: &Path,
    format: OutputFormat,
) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut file = std::io::BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_csv(records, &mut file)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut file, &summarize(records, config)).map_err(
                |source| Error::Json {
                    path: path.to_owned(),
                    source,
                },
            )?;
            file.write_all(b"\n").map_err(io_err)?;
        }
    }
    file.flush().map_err(io_err)
}
