//! Optimizer properties checked against independent enumeration.

use proptest::prelude::*;

use pdpalign::alignment::{
    fixed_tone_group_plan, full_shift_domain, intra_cell_violations, optimize_exhaustive,
    optimize_full_length, optimize_tone_groups, AlignmentPlan, AlignmentProblem, FullLengthOptions,
    Scheme, ToneGroupOptions, DEFAULT_PLAN_CAP,
};
use pdpalign::channel::{
    draw_scene, make_pdp, tap_covariance, ArrayConfig, PathGeometry, PdpKind, PdpSet, SpatialScene,
    Topology, UserId,
};
use pdpalign::estimation::{residual_matrix, LinkBudget};
use pdpalign::model::OfdmConfig;
use pdpalign::{CMatrix, Error};

struct Setup {
    ofdm: OfdmConfig,
    array: ArrayConfig,
    scene: SpatialScene,
    budget: LinkBudget,
}

impl Setup {
    fn new(seed: u64, n: usize, n_cp: usize, cells: usize, users: usize, m: usize) -> Self {
        let topology = Topology {
            n_cells: cells,
            users_per_cell: users,
            n_subpaths: 5,
            shared: if cells > 1 {
                Topology::default().shared
            } else {
                vec![]
            },
        };
        let pdp = make_pdp(PdpKind::Exponential, n, n_cp, 1.0, None).unwrap();
        let scene = draw_scene(seed, &topology, 0.2, &PdpSet::uniform(&topology, &pdp)).unwrap();
        Self {
            ofdm: OfdmConfig::new(n, n_cp, 1e-4).unwrap(),
            array: ArrayConfig::new(m, 0.5).unwrap(),
            scene,
            budget: LinkBudget::from_snr_db(cells, users, 10.0).unwrap(),
        }
    }

    fn problem(&self) -> AlignmentProblem {
        AlignmentProblem::new(&self.scene, &self.array, &self.budget, &self.ofdm).unwrap()
    }

    /// Cost from raw tap covariances: users of `cell` listed in `members[cell]`
    /// as `(user, shift)`, on a length-`len` cyclic grid.
    fn oracle_cost(&self, len: usize, members: &[Vec<(usize, usize)>]) -> f64 {
        let grid = self.scene.on_grid(len).unwrap();
        let cells = members.len();
        let sigma2 = self.budget.noise_variance;
        let mut total = 0.0;
        for b in 0..cells {
            for n in 0..len {
                let sum = |l: usize| {
                    let mut acc = CMatrix::zeros(self.array.n_antennas, self.array.n_antennas);
                    for &(k, tau) in &members[l] {
                        acc += tap_covariance(
                            &grid,
                            UserId::new(l, k),
                            b,
                            (n + tau) % len,
                            &self.array,
                        )
                        .matrix
                            * pdpalign::C64::new(self.budget.rho(l, k), 0.0);
                    }
                    acc
                };
                let own = sum(b);
                let mut int = CMatrix::zeros(own.nrows(), own.ncols());
                for l in (0..cells).filter(|&l| l != b) {
                    int += sum(l);
                }
                total += residual_matrix(&own, &[int], sigma2).unwrap().trace().re;
            }
        }
        total
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn single_cell_costs_nothing() {
    let s = Setup::new(1, 16, 4, 1, 2, 4);
    let p = s.problem();
    let ex = optimize_exhaustive(&p, &full_shift_domain(&p), DEFAULT_PLAN_CAP).unwrap();
    let fl = optimize_full_length(&p, FullLengthOptions::default()).unwrap();
    let tg = optimize_tone_groups(&p, ToneGroupOptions::default()).unwrap();
    for plan in [&ex, &fl, &tg] {
        assert_eq!(p.alignment_cost(plan).unwrap().total, 0.0);
    }
    assert_eq!(fl.shifts, vec![vec![0, 4]]);
    assert_eq!(
        ex.shifts,
        vec![vec![0, 4]],
        "first orthogonal pair in lexicographic order"
    );
}

#[test]
fn full_length_matches_restricted_enumeration() {
    let s = Setup::new(2, 16, 4, 2, 2, 6);
    let p = s.problem();
    let plan = optimize_full_length(&p, FullLengthOptions::default()).unwrap();
    let mut best = f64::INFINITY;
    for t0 in 0..16 {
        for t1 in 0..16 {
            let members: Vec<Vec<(usize, usize)>> = [t0, t1]
                .iter()
                .map(|&t| (0..2).map(|k| (k, (t + 4 * k) % 16)).collect())
                .collect();
            best = best.min(s.oracle_cost(16, &members));
        }
    }
    let got = p.alignment_cost(&plan).unwrap().total;
    assert!(close(got, best), "{got} vs {best}");
    for row in &plan.shifts {
        assert_eq!((row[1] + 16 - row[0]) % 16, 4);
    }
}

#[test]
fn tone_groups_match_per_group_enumeration() {
    let s = Setup::new(3, 16, 8, 2, 2, 6);
    let p = s.problem();
    let plan = optimize_tone_groups(&p, ToneGroupOptions::default()).unwrap();
    assert_eq!(plan.tone_groups, Some(vec![vec![0, 1], vec![0, 1]]));
    let mut expected = 0.0;
    for g in 0..2 {
        let mut best = f64::INFINITY;
        for t0 in 0..8 {
            for t1 in 0..8 {
                best = best.min(s.oracle_cost(8, &[vec![(g, t0)], vec![(g, t1)]]));
            }
        }
        expected += best;
    }
    let got = p.alignment_cost(&plan).unwrap().total;
    assert!(close(got, expected), "{got} vs {expected}");
}

#[test]
fn search_spaces_nest() {
    let s = Setup::new(4, 8, 4, 2, 2, 4);
    let p = s.problem();
    let ex = optimize_exhaustive(&p, &full_shift_domain(&p), DEFAULT_PLAN_CAP).unwrap();
    let fl = optimize_full_length(&p, FullLengthOptions::default()).unwrap();
    let zero = AlignmentPlan {
        shifts: vec![vec![0, 4], vec![0, 4]],
        ..fl.clone()
    };
    let (ce, cf, cz) = (
        p.alignment_cost(&ex).unwrap().total,
        p.alignment_cost(&fl).unwrap().total,
        p.alignment_cost(&zero).unwrap().total,
    );
    assert!(ce <= cf + 1e-12 && cf <= cz + 1e-12, "{ce} {cf} {cz}");
}

#[test]
fn swap_pass_never_hurts() {
    let s = Setup::new(5, 16, 8, 2, 2, 6);
    let p = s.problem();
    let plain = optimize_tone_groups(&p, ToneGroupOptions::default()).unwrap();
    let swapped = optimize_tone_groups(&p, ToneGroupOptions { swap_pass: true }).unwrap();
    let (a, b) = (
        p.alignment_cost(&plain).unwrap().total,
        p.alignment_cost(&swapped).unwrap().total,
    );
    assert!(b <= a + 1e-12);
    assert!(intra_cell_violations(&swapped, p.pdps(8).unwrap()).is_empty());
}

#[test]
fn exhaustive_cap_is_enforced() {
    let s = Setup::new(6, 32, 4, 2, 2, 2);
    let p = s.problem();
    match optimize_exhaustive(&p, &full_shift_domain(&p), DEFAULT_PLAN_CAP) {
        Err(Error::SearchTooLarge { candidates, cap }) => {
            assert_eq!(candidates, 32u128.pow(4));
            assert_eq!(cap, DEFAULT_PLAN_CAP);
        }
        other => panic!("expected a refusal, got {other:?}"),
    }
}

/// Two 2-tap users sharing scatterers: tap 0 of each sits near 60 degrees,
/// tap 1 near 100 degrees. A relative shift of one pairs each tap with the
/// other user's far cluster.
fn crossed_scene(m: usize) -> (SpatialScene, ArrayConfig, LinkBudget, OfdmConfig) {
    let mut scene = SpatialScene::empty(2, 1, 2);
    let spread = 1f64.to_radians();
    for b in 0..2 {
        for l in 0..2 {
            let u = UserId::new(l, 0);
            scene.set_path(
                u,
                b,
                0,
                PathGeometry::evenly_spread(60f64.to_radians(), spread, 10, 0.6),
            );
            scene.set_path(
                u,
                b,
                1,
                PathGeometry::evenly_spread(100f64.to_radians(), spread, 10, 0.4),
            );
        }
    }
    (
        scene,
        ArrayConfig::new(m, 0.5).unwrap(),
        LinkBudget::from_snr_db(2, 1, 10.0).unwrap(),
        OfdmConfig::new(2, 2, 1e-4).unwrap(),
    )
}

#[test]
fn crossed_paths_are_aligned() {
    let (scene, array, budget, ofdm) = crossed_scene(50);
    let p = AlignmentProblem::new(&scene, &array, &budget, &ofdm).unwrap();
    let plan = optimize_tone_groups(&p, ToneGroupOptions::default()).unwrap();
    assert_eq!(plan.shifts, vec![vec![0], vec![1]]);
    let best = p.alignment_cost(&plan).unwrap().total;
    let worst = (0..2)
        .map(|t| {
            let mut q = plan.clone();
            q.shifts[1][0] = t;
            p.alignment_cost(&q).unwrap().total
        })
        .fold(0.0, f64::max);
    let gain_db = 10.0 * (worst / best).log10();
    assert!(gain_db >= 10.0, "gain {gain_db:.1} dB");
}

#[test]
fn disjoint_angles_cost_almost_nothing() {
    let array = ArrayConfig::new(64, 0.5).unwrap();
    let mut scene = SpatialScene::empty(2, 1, 1);
    let ray = |deg: f64| PathGeometry {
        center_aoa: deg.to_radians(),
        angle_spread: 0.0,
        subpath_aoas: vec![deg.to_radians()],
        power: 1.0,
    };
    // Cos-domain separation 0.5 is a multiple of 2 / M: exact nulls.
    for b in 0..2 {
        scene.set_path(UserId::new(0, 0), b, 0, ray(60.0));
        scene.set_path(UserId::new(1, 0), b, 0, ray(90.0));
    }
    let budget = LinkBudget::from_snr_db(2, 1, 10.0).unwrap();
    let ofdm = OfdmConfig::new(1, 1, 1e-4).unwrap();
    let p = AlignmentProblem::new(&scene, &array, &budget, &ofdm).unwrap();
    let plan = fixed_tone_group_plan(2, 1, &ofdm, 0).unwrap();
    let cost = p.alignment_cost(&plan).unwrap().total;
    let signal = tap_covariance(&scene, UserId::new(0, 0), 0, 0, &array)
        .matrix
        .trace()
        .re;
    assert!(cost < 1e-8 * signal, "cost {cost:e}");
}

fn relabeled(scene: &SpatialScene) -> SpatialScene {
    let cells = scene.n_cells();
    let mut out = SpatialScene::empty(cells, scene.users_per_cell(), scene.taps());
    let flip = |c: usize| cells - 1 - c;
    for l in 0..cells {
        for k in 0..scene.users_per_cell() {
            for b in 0..cells {
                for n in 0..scene.taps() {
                    if let Some(p) = scene.paths(UserId::new(l, k), b, n).first() {
                        out.set_path(UserId::new(flip(l), k), flip(b), n, p.clone());
                    }
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn optimizer_plans_are_feasible(seed in 0u64..1000, cells in 1usize..=3, users in 1usize..=2) {
        let s = Setup::new(seed, 16, 4, cells, users, 4);
        let p = s.problem();
        let fl = optimize_full_length(&p, FullLengthOptions::default()).unwrap();
        let tg = optimize_tone_groups(&p, ToneGroupOptions::default()).unwrap();
        prop_assert_eq!(fl.scheme, Scheme::FullLength);
        for plan in [&fl, &tg] {
            prop_assert!(intra_cell_violations(plan, p.pdps(plan.sequence_length).unwrap()).is_empty());
            let c = p.alignment_cost(plan).unwrap();
            prop_assert!(c.total >= -1e-9);
            let sum: f64 = c.per_cell_per_tap.iter().flatten().sum();
            prop_assert!((sum - c.total).abs() <= 1e-9 * c.total.abs().max(1e-300));
        }
        let fixed = fixed_tone_group_plan(cells, users, &s.ofdm, 0).unwrap();
        prop_assert!(p.alignment_cost(&tg).unwrap().total <= p.alignment_cost(&fixed).unwrap().total + 1e-12);
    }

    #[test]
    fn cost_ignores_cell_labels(seed in 0u64..1000, t0 in 0usize..8, t1 in 0usize..8) {
        let s = Setup::new(seed, 8, 8, 2, 1, 4);
        let p = s.problem();
        let flipped = AlignmentProblem::new(&relabeled(&s.scene), &s.array, &s.budget, &s.ofdm).unwrap();
        let plan = AlignmentPlan {
            scheme: Scheme::ToneGroup,
            sequence_length: 8,
            shifts: vec![vec![t0], vec![t1]],
            tone_groups: Some(vec![vec![0], vec![0]]),
        };
        let swapped = AlignmentPlan { shifts: vec![vec![t1], vec![t0]], ..plan.clone() };
        let a = p.alignment_cost(&plan).unwrap().total;
        let b = flipped.alignment_cost(&swapped).unwrap().total;
        prop_assert!(close(a, b));
        // Only the relative shift matters.
        let rel = AlignmentPlan { shifts: vec![vec![0], vec![(t1 + 8 - t0) % 8]], ..plan };
        prop_assert!(close(a, p.alignment_cost(&rel).unwrap().total));
    }
}
