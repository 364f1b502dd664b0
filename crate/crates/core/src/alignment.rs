//! Cyclic-shift assignment ("PDP alignment") across cells.
//!
//! Within a cell, users that share tones must use shifts whose shifted PDPs
//! have disjoint supports. Across cells, the shifts decide which taps of the
//! interfering users land on which taps of the desired users; the cost of a
//! plan is the summed trace of the per-tap residual matrices at every base
//! station.
//!
//! Three optimizers are provided:
//!
//! - [`optimize_exhaustive`]: every user's shift is a free variable.
//! - [`optimize_full_length`]: length-`N` pilots, user `k` of cell `l` uses
//!   `tau_l + k N_cp`, one variable per cell.
//! - [`optimize_tone_groups`]: length-`N_cp` pilots on comb tone groups, one
//!   independent small search per group.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{
    ArrayConfig, CovarianceBank, PdpSet, PowerDelayProfile, SpatialScene, UserId,
};
use crate::estimation::{captured_trace, LinkBudget};
use crate::model::OfdmConfig;
use crate::{CMatrix, Error, Result};

/// Largest number of candidate plans [`optimize_exhaustive`] will visit.
pub const DEFAULT_PLAN_CAP: u128 = 100_000;

/// Relative tolerance under which two plan costs count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Exhaustive,
    FullLength,
    ToneGroup,
}

/// Cyclic shift (and, for comb pilots, tone group) of every user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentPlan {
    pub scheme: Scheme,
    /// Pilot length `L`: `N` for full-length pilots, `N_cp` for tone groups.
    pub sequence_length: usize,
    /// `shifts[cell][user]`, each in `[0, L)`.
    pub shifts: Vec<Vec<usize>>,
    /// `tone_groups[cell][user]`; absent when every user spans all tones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tone_groups: Option<Vec<Vec<usize>>>,
}

impl AlignmentPlan {
    pub fn shift(&self, u: UserId) -> usize {
        self.shifts[u.cell][u.user]
    }

    pub fn group(&self, u: UserId) -> usize {
        self.tone_groups.as_ref().map_or(0, |g| g[u.cell][u.user])
    }

    pub fn n_cells(&self) -> usize {
        self.shifts.len()
    }

    /// Distinct tone groups in use, ascending.
    pub fn groups(&self) -> Vec<usize> {
        let mut g: Vec<usize> = match &self.tone_groups {
            Some(t) => t.iter().flatten().copied().collect(),
            None => vec![0],
        };
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Users of `cell` in `group` with their shifts.
    pub fn members(&self, cell: usize, group: usize) -> Vec<(usize, usize)> {
        (0..self.shifts[cell].len())
            .filter(|&k| self.group(UserId::new(cell, k)) == group)
            .map(|k| (k, self.shifts[cell][k]))
            .collect()
    }

    pub fn validate_shape(&self, n_cells: usize, users_per_cell: usize) -> Result<()> {
        let bad_shape = |rows: &Vec<Vec<usize>>| {
            rows.len() != n_cells || rows.iter().any(|r| r.len() != users_per_cell)
        };
        if bad_shape(&self.shifts) || self.tone_groups.as_ref().is_some_and(bad_shape) {
            return Err(Error::DimensionMismatch(format!(
                "plan does not cover {n_cells} cells x {users_per_cell} users"
            )));
        }
        if self.sequence_length == 0 {
            return Err(Error::InvalidSize("plan sequence length is 0".into()));
        }
        if let Some(&tau) = self
            .shifts
            .iter()
            .flatten()
            .find(|&&t| t >= self.sequence_length)
        {
            return Err(Error::InvalidShift {
                tau: tau as i64,
                len: self.sequence_length,
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })
    }
}

/// Whether the supports of `pdp_a` and of `pdp_b` rotated by `-delta_tau`
/// are disjoint on a length-`len` cyclic grid.
pub fn pdp_orthogonal(
    pdp_a: &PowerDelayProfile,
    pdp_b: &PowerDelayProfile,
    delta_tau: i64,
    len: usize,
) -> bool {
    if len == 0 {
        return true;
    }
    let fold = |p: &PowerDelayProfile| {
        let mut mask = vec![false; len];
        for &n in p.support() {
            mask[n % len] = true;
        }
        mask
    };
    let (a, b) = (fold(pdp_a), fold(pdp_b));
    let d = delta_tau.rem_euclid(len as i64) as usize;
    (0..len).all(|n| !(a[n] && b[(n + d) % len]))
}

/// Greedy first-fit packing: user `i` takes the smallest shift orthogonal to
/// every user already placed. `None` if some user fits nowhere.
pub fn max_orthogonal_packing(pdps: &[PowerDelayProfile], len: usize) -> Option<Vec<usize>> {
    let mut shifts: Vec<usize> = Vec::with_capacity(pdps.len());
    for (i, p) in pdps.iter().enumerate() {
        let tau = (0..len).find(|&t| {
            shifts
                .iter()
                .enumerate()
                .all(|(j, &s)| pdp_orthogonal(&pdps[j], p, t as i64 - s as i64, len))
        })?;
        debug_assert!(i == shifts.len());
        shifts.push(tau);
    }
    Some(shifts)
}

/// Intra-cell pairs of `plan` whose shifted PDPs overlap on shared tones.
pub fn intra_cell_violations(plan: &AlignmentPlan, pdps: &PdpSet) -> Vec<String> {
    let len = plan.sequence_length;
    let mut out = Vec::new();
    for (b, row) in plan.shifts.iter().enumerate() {
        for u in 0..row.len() {
            for k in u + 1..row.len() {
                let (uu, uk) = (UserId::new(b, u), UserId::new(b, k));
                if plan.group(uu) != plan.group(uk) {
                    continue;
                }
                let delta = plan.shift(uk) as i64 - plan.shift(uu) as i64;
                if !pdp_orthogonal(pdps.get(uu, b), pdps.get(uk, b), delta, len) {
                    out.push(format!(
                        "cell {b}: users {u} and {k} overlap (shifts {}, {})",
                        plan.shift(uu),
                        plan.shift(uk)
                    ));
                }
            }
        }
    }
    out
}

pub fn check_intra_cell(plan: &AlignmentPlan, pdps: &PdpSet) -> Result<()> {
    let v = intra_cell_violations(plan, pdps);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(v.join("; ")))
    }
}

/// Objective value of a plan with its per-(base station, tap) breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentCost {
    pub total: f64,
    /// `per_cell_per_tap[b][n] = Tr(R_n^{(b)})`, summed over tone groups.
    pub per_cell_per_tap: Vec<Vec<f64>>,
}

/// Which users of one cell contribute to an aggregate tap, as
/// `(user, source tap)` pairs; used as a memo key.
type Contribution = Vec<(usize, usize, usize)>;

/// Second-order statistics of one channel draw, prepared for cost
/// evaluation on both the full-length grid and the comb grid.
pub struct AlignmentProblem {
    ofdm: OfdmConfig,
    budget: LinkBudget,
    full: Grid,
    comb: Grid,
    memo: Mutex<HashMap<(usize, Contribution, Contribution), f64>>,
    own_memo: Mutex<HashMap<(usize, Contribution), f64>>,
}

struct Grid {
    pdps: PdpSet,
    bank: CovarianceBank,
}

impl Grid {
    fn new(scene: &SpatialScene, array: &ArrayConfig, len: usize) -> Result<Self> {
        let s = scene.on_grid(len)?;
        Ok(Self {
            pdps: s.pdp_set(),
            bank: CovarianceBank::new(&s, array),
        })
    }
}

impl AlignmentProblem {
    /// `scene` must live on the `N`-tap grid of `ofdm`.
    pub fn new(
        scene: &SpatialScene,
        array: &ArrayConfig,
        budget: &LinkBudget,
        ofdm: &OfdmConfig,
    ) -> Result<Self> {
        if scene.taps() != ofdm.n_tones() {
            return Err(Error::DimensionMismatch(format!(
                "scene has {} taps, numerology has {} tones",
                scene.taps(),
                ofdm.n_tones()
            )));
        }
        if budget.tone_power.len() != scene.n_cells()
            || budget
                .tone_power
                .iter()
                .any(|r| r.len() != scene.users_per_cell())
        {
            return Err(Error::DimensionMismatch(
                "link budget does not match the scene".into(),
            ));
        }
        array.validate()?;
        Ok(Self {
            ofdm: *ofdm,
            budget: budget.clone(),
            full: Grid::new(scene, array, ofdm.n_tones())?,
            comb: Grid::new(scene, array, ofdm.n_cp())?,
            memo: Mutex::new(HashMap::new()),
            own_memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn ofdm(&self) -> &OfdmConfig {
        &self.ofdm
    }

    pub fn budget(&self) -> &LinkBudget {
        &self.budget
    }

    pub fn n_cells(&self) -> usize {
        self.full.bank.n_cells()
    }

    pub fn users_per_cell(&self) -> usize {
        self.full.bank.users_per_cell()
    }

    fn grid(&self, len: usize) -> Result<&Grid> {
        if len == self.ofdm.n_tones() {
            Ok(&self.full)
        } else if len == self.ofdm.n_cp() {
            Ok(&self.comb)
        } else {
            Err(Error::InvalidSize(format!(
                "pilot length {len} is neither N={} nor N_cp={}",
                self.ofdm.n_tones(),
                self.ofdm.n_cp()
            )))
        }
    }

    /// PDPs on the length-`len` grid (`N` or `N_cp`).
    pub fn pdps(&self, len: usize) -> Result<&PdpSet> {
        Ok(&self.grid(len)?.pdps)
    }

    /// Covariances on the length-`len` grid (`N` or `N_cp`).
    pub fn bank(&self, len: usize) -> Result<&CovarianceBank> {
        Ok(&self.grid(len)?.bank)
    }

    fn contribution(
        &self,
        bank: &CovarianceBank,
        cell: usize,
        bs: usize,
        tap: usize,
        members: &[(usize, usize)],
    ) -> Contribution {
        members
            .iter()
            .filter(|&&(k, _)| self.budget.rho(cell, k) > 0.0)
            .map(|&(k, tau)| (cell, k, (tap + tau) % bank.taps()))
            .filter(|&(l, k, t)| bank.get(UserId::new(l, k), bs, t).is_some())
            .collect()
    }

    fn aggregate(&self, bank: &CovarianceBank, bs: usize, parts: &Contribution) -> Option<CMatrix> {
        let mut acc: Option<CMatrix> = None;
        for &(l, k, t) in parts {
            let c = bank.get(UserId::new(l, k), bs, t)?;
            let term = c * crate::C64::new(self.budget.rho(l, k), 0.0);
            acc = Some(match acc {
                Some(s) => s + term,
                None => term,
            });
        }
        acc
    }

    /// `Tr(R_n^{(bs)})` for the given own/interfering tap contributions.
    fn residual_trace(
        &self,
        len: usize,
        bs: usize,
        own: Contribution,
        others: Contribution,
    ) -> Result<f64> {
        if own.is_empty() || others.is_empty() {
            return Ok(0.0);
        }
        let key = (len * 1_000_003 + bs, own, others);
        let cached = self.memo.lock().expect("memo lock").get(&key).copied();
        if let Some(v) = cached {
            return Ok(v);
        }
        let bank = self.bank(len)?;
        let sigma2 = self.budget.noise_variance;
        let c_own = self
            .aggregate(bank, bs, &key.1)
            .expect("nonempty contribution");
        let c_int = self
            .aggregate(bank, bs, &key.2)
            .expect("nonempty contribution");
        let own_key = (key.0, key.1.clone());
        let cached = self
            .own_memo
            .lock()
            .expect("memo lock")
            .get(&own_key)
            .copied();
        let clean = match cached {
            Some(v) => v,
            None => {
                let v = captured_trace(&c_own, &c_own, sigma2)?;
                self.own_memo.lock().expect("memo lock").insert(own_key, v);
                v
            }
        };
        let dirty = captured_trace(&c_own, &(c_int + &c_own), sigma2)?;
        let v = clean - dirty;
        self.memo.lock().expect("memo lock").insert(key, v);
        Ok(v)
    }

    /// Cost contribution of one tone group: `members[l]` lists `(user, shift)`
    /// of cell `l` in the group. Returns `[bs][tap]` traces.
    fn group_cost(&self, len: usize, members: &[Vec<(usize, usize)>]) -> Result<Vec<Vec<f64>>> {
        let bank = self.bank(len)?;
        let b_count = self.n_cells();
        let mut out = vec![vec![0.0; len]; b_count];
        for (bs, row) in out.iter_mut().enumerate() {
            for (n, slot) in row.iter_mut().enumerate() {
                let own = self.contribution(bank, bs, bs, n, &members[bs]);
                let others: Contribution = (0..b_count)
                    .filter(|&l| l != bs)
                    .flat_map(|l| self.contribution(bank, l, bs, n, &members[l]))
                    .collect();
                *slot = self.residual_trace(len, bs, own, others)?;
            }
        }
        Ok(out)
    }

    /// Summed residual trace of a feasible plan.
    pub fn alignment_cost(&self, plan: &AlignmentPlan) -> Result<AlignmentCost> {
        plan.validate_shape(self.n_cells(), self.users_per_cell())?;
        let len = plan.sequence_length;
        check_intra_cell(plan, self.pdps(len)?)?;
        let mut per = vec![vec![0.0; len]; self.n_cells()];
        for g in plan.groups() {
            let members: Vec<_> = (0..self.n_cells()).map(|l| plan.members(l, g)).collect();
            let part = self.group_cost(len, &members)?;
            for (acc, row) in per.iter_mut().zip(part) {
                for (a, v) in acc.iter_mut().zip(row) {
                    *a += v;
                }
            }
        }
        let total = per.iter().flatten().sum();
        Ok(AlignmentCost {
            total,
            per_cell_per_tap: per,
        })
    }
}

/// [`AlignmentProblem::alignment_cost`] as a free function.
pub fn alignment_cost(plan: &AlignmentPlan, problem: &AlignmentProblem) -> Result<AlignmentCost> {
    problem.alignment_cost(plan)
}

/// Index of the lexicographically first candidate whose cost is within
/// [`TIE_TOLERANCE`] of the minimum. `costs` is in enumeration order.
fn pick_min(costs: &[(usize, f64)]) -> Option<usize> {
    let min = costs.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return None;
    }
    let tol = TIE_TOLERANCE * min.abs().max(f64::MIN_POSITIVE);
    costs.iter().find(|c| c.1 <= min + tol).map(|c| c.0)
}

/// Mixed-radix decode of candidate `index` into one choice per digit;
/// the last digit varies fastest, so indices follow lexicographic order.
fn decode(mut index: u128, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = (index % r as u128) as usize;
        index /= r as u128;
    }
    out
}

fn grid_size(radices: &[usize]) -> u128 {
    radices
        .iter()
        .fold(1u128, |acc, &r| acc.saturating_mul(r as u128))
}

fn check_delay_spread(problem: &AlignmentProblem) -> Result<()> {
    let n_cp = problem.ofdm.n_cp();
    let pdps = problem.pdps(problem.ofdm.n_tones())?;
    for l in 0..problem.n_cells() {
        for k in 0..problem.users_per_cell() {
            for b in 0..problem.n_cells() {
                let spread = pdps.get(UserId::new(l, k), b).delay_spread();
                if spread > n_cp {
                    return Err(Error::InvalidProfile(format!(
                        "user ({l}, {k}) toward base station {b} spans {spread} taps, more than N_cp={n_cp}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Every shift in `[0, N)` for every user.
pub fn full_shift_domain(problem: &AlignmentProblem) -> Vec<Vec<Vec<usize>>> {
    let n = problem.ofdm.n_tones();
    vec![vec![(0..n).collect(); problem.users_per_cell()]; problem.n_cells()]
}

/// Minimum-cost feasible plan over the product of per-user shift domains
/// (`domains[cell][user]`, full-length pilots). Refuses grids larger than `cap`.
pub fn optimize_exhaustive(
    problem: &AlignmentProblem,
    domains: &[Vec<Vec<usize>>],
    cap: u128,
) -> Result<AlignmentPlan> {
    let (b_count, k_count) = (problem.n_cells(), problem.users_per_cell());
    if domains.len() != b_count || domains.iter().any(|d| d.len() != k_count) {
        return Err(Error::DimensionMismatch(
            "one shift domain per user is required".into(),
        ));
    }
    let len = problem.ofdm.n_tones();
    let flat: Vec<&Vec<usize>> = domains.iter().flatten().collect();
    if let Some(&&t) = flat
        .iter()
        .flat_map(|d| d.iter())
        .find(|&&t| t >= len)
        .as_ref()
    {
        return Err(Error::InvalidShift { tau: t as i64, len });
    }
    let radices: Vec<usize> = flat.iter().map(|d| d.len()).collect();
    let size = grid_size(&radices);
    if size > cap {
        return Err(Error::SearchTooLarge {
            candidates: size,
            cap,
        });
    }
    let pdps = problem.pdps(len)?;
    let build = |index: u128| {
        let digits = decode(index, &radices);
        let shifts = (0..b_count)
            .map(|l| {
                (0..k_count)
                    .map(|k| flat[l * k_count + k][digits[l * k_count + k]])
                    .collect()
            })
            .collect();
        AlignmentPlan {
            scheme: Scheme::Exhaustive,
            sequence_length: len,
            shifts,
            tone_groups: None,
        }
    };
    let costs = (0..size as usize)
        .into_par_iter()
        .filter_map(|i| {
            let plan = build(i as u128);
            if !intra_cell_violations(&plan, pdps).is_empty() {
                return None;
            }
            Some(problem.alignment_cost(&plan).map(|c| (i, c.total)))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = pick_min(&costs).ok_or_else(|| {
        Error::ConstraintViolation("no candidate plan is intra-cell orthogonal".into())
    })?;
    Ok(build(best as u128))
}

/// Options for [`optimize_full_length`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullLengthOptions {
    /// Candidate cell offsets are `0, step, 2 step, ... < N`.
    pub step: usize,
    pub cap: u128,
}

impl Default for FullLengthOptions {
    fn default() -> Self {
        Self {
            step: 1,
            cap: DEFAULT_PLAN_CAP,
        }
    }
}

/// Full-length pilots with `tau_{l,k} = tau_l + k N_cp mod N`; searches the
/// per-cell offsets `tau_l`.
pub fn optimize_full_length(
    problem: &AlignmentProblem,
    opts: FullLengthOptions,
) -> Result<AlignmentPlan> {
    let ofdm = problem.ofdm;
    let (n, n_cp) = (ofdm.n_tones(), ofdm.n_cp());
    if problem.users_per_cell() > ofdm.n_groups() {
        return Err(Error::Capacity(format!(
            "{} users per cell exceed N/N_cp = {}",
            problem.users_per_cell(),
            ofdm.n_groups()
        )));
    }
    if opts.step == 0 {
        return Err(Error::InvalidConfig("offset step must be positive".into()));
    }
    check_delay_spread(problem)?;
    let offsets: Vec<usize> = (0..n).step_by(opts.step).collect();
    let radices = vec![offsets.len(); problem.n_cells()];
    let size = grid_size(&radices);
    if size > opts.cap {
        return Err(Error::SearchTooLarge {
            candidates: size,
            cap: opts.cap,
        });
    }
    let k_count = problem.users_per_cell();
    let build = |index: u128| {
        let digits = decode(index, &radices);
        AlignmentPlan {
            scheme: Scheme::FullLength,
            sequence_length: n,
            shifts: digits
                .iter()
                .map(|&d| (0..k_count).map(|k| (offsets[d] + k * n_cp) % n).collect())
                .collect(),
            tone_groups: None,
        }
    };
    let costs = (0..size as usize)
        .into_par_iter()
        .map(|i| {
            problem
                .alignment_cost(&build(i as u128))
                .map(|c| (i, c.total))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = pick_min(&costs).expect("at least one candidate");
    Ok(build(best as u128))
}

/// Options for [`optimize_tone_groups`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ToneGroupOptions {
    /// Hill-climb over swaps of users between tone groups within a cell
    /// after the default `user k -> group k` allocation.
    pub swap_pass: bool,
}

/// Best shifts for the users sharing one tone group. `occupants[l]` is the
/// user of cell `l` in the group, if any. Returns the per-cell shifts and
/// the group cost.
fn solve_group(
    problem: &AlignmentProblem,
    occupants: &[Option<usize>],
) -> Result<(Vec<usize>, f64)> {
    let len = problem.ofdm.n_cp();
    let cells: Vec<usize> = (0..occupants.len())
        .filter(|&l| occupants[l].is_some())
        .collect();
    let radices = vec![len; cells.len()];
    let size = grid_size(&radices);
    let members_of = |digits: &[usize]| {
        let mut members = vec![Vec::new(); occupants.len()];
        for (i, &l) in cells.iter().enumerate() {
            members[l].push((occupants[l].expect("occupied"), digits[i]));
        }
        members
    };
    let costs = (0..size as usize)
        .into_par_iter()
        .map(|i| {
            let digits = decode(i as u128, &radices);
            let per = problem.group_cost(len, &members_of(&digits))?;
            Ok((i, per.iter().flatten().sum::<f64>()))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = pick_min(&costs).expect("at least one candidate");
    let digits = decode(best as u128, &radices);
    let mut shifts = vec![0; occupants.len()];
    for (i, &l) in cells.iter().enumerate() {
        shifts[l] = digits[i];
    }
    Ok((shifts, costs[best].1))
}

/// Comb pilots of length `N_cp`: user `k` of each cell goes to tone group `k`
/// and each group's shifts are searched over `[0, N_cp)^B` independently.
pub fn optimize_tone_groups(
    problem: &AlignmentProblem,
    opts: ToneGroupOptions,
) -> Result<AlignmentPlan> {
    let ofdm = problem.ofdm;
    let (b_count, k_count) = (problem.n_cells(), problem.users_per_cell());
    if k_count > ofdm.n_groups() {
        return Err(Error::Capacity(format!(
            "{k_count} users per cell exceed the {} tone groups",
            ofdm.n_groups()
        )));
    }
    check_delay_spread(problem)?;
    // assignment[l][g] = user of cell l in group g.
    let mut assignment: Vec<Vec<Option<usize>>> = (0..b_count)
        .map(|_| {
            (0..ofdm.n_groups())
                .map(|g| (g < k_count).then_some(g))
                .collect()
        })
        .collect();
    let occupants = |assignment: &Vec<Vec<Option<usize>>>, g: usize| -> Vec<Option<usize>> {
        assignment.iter().map(|row| row[g]).collect()
    };
    let active = |assignment: &Vec<Vec<Option<usize>>>, g: usize| {
        assignment.iter().any(|row| row[g].is_some())
    };

    let solve_all = |assignment: &Vec<Vec<Option<usize>>>| -> Result<Vec<(Vec<usize>, f64)>> {
        (0..ofdm.n_groups())
            .into_par_iter()
            .map(|g| {
                if active(assignment, g) {
                    solve_group(problem, &occupants(assignment, g))
                } else {
                    Ok((vec![0; b_count], 0.0))
                }
            })
            .collect()
    };
    let mut solutions = solve_all(&assignment)?;

    if opts.swap_pass {
        let mut improved = true;
        while improved {
            improved = false;
            for l in 0..b_count {
                for g1 in 0..ofdm.n_groups() {
                    for g2 in g1 + 1..ofdm.n_groups() {
                        if assignment[l][g1].is_none() && assignment[l][g2].is_none() {
                            continue;
                        }
                        let before = solutions[g1].1 + solutions[g2].1;
                        let mut trial = assignment.clone();
                        trial[l].swap(g1, g2);
                        let s1 = solve_group(problem, &occupants(&trial, g1))?;
                        let s2 = solve_group(problem, &occupants(&trial, g2))?;
                        let after = s1.1 + s2.1;
                        if after < before - TIE_TOLERANCE * before.abs() {
                            assignment = trial;
                            solutions[g1] = s1;
                            solutions[g2] = s2;
                            improved = true;
                        }
                    }
                }
            }
        }
    }

    let mut shifts = vec![vec![0; k_count]; b_count];
    let mut groups = vec![vec![0; k_count]; b_count];
    for (g, (sol, _)) in solutions.iter().enumerate() {
        for l in 0..b_count {
            if let Some(k) = assignment[l][g] {
                shifts[l][k] = sol[l];
                groups[l][k] = g;
            }
        }
    }
    Ok(AlignmentPlan {
        scheme: Scheme::ToneGroup,
        sequence_length: ofdm.n_cp(),
        shifts,
        tone_groups: Some(groups),
    })
}

/// The tone-group plan with every shift fixed to `shift` and the default
/// `user k -> group k` allocation.
pub fn fixed_tone_group_plan(
    n_cells: usize,
    users_per_cell: usize,
    ofdm: &OfdmConfig,
    shift: usize,
) -> Result<AlignmentPlan> {
    if users_per_cell > ofdm.n_groups() {
        return Err(Error::Capacity(format!(
            "{users_per_cell} users per cell exceed the {} tone groups",
            ofdm.n_groups()
        )));
    }
    if shift >= ofdm.n_cp() {
        return Err(Error::InvalidShift {
            tau: shift as i64,
            len: ofdm.n_cp(),
        });
    }
    Ok(AlignmentPlan {
        scheme: Scheme::ToneGroup,
        sequence_length: ofdm.n_cp(),
        shifts: vec![vec![shift; users_per_cell]; n_cells],
        tone_groups: Some(vec![(0..users_per_cell).collect(); n_cells]),
    })
}
