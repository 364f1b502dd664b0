//! Pilot alignment for one geometry of the default two-cell setup: the cost
//! of every tone-group shift pair and the plans of the three optimizers.

use pdpalign::alignment::{
    fixed_tone_group_plan, optimize_full_length, optimize_tone_groups, AlignmentPlan,
    FullLengthOptions, Scheme, ToneGroupOptions,
};
use pdpalign::harness::ExperimentConfig;

fn main() -> pdpalign::Result<()> {
    let cfg = ExperimentConfig::default();
    let problem = cfg.problem(0)?;
    let n_cp = cfg.ofdm.n_cp();

    println!("Tr R summed over both cells (rows: cell 0 shift, cols: cell 1 shift)");
    for t0 in 0..n_cp {
        let row: Vec<String> = (0..n_cp)
            .map(|t1| {
                let plan = AlignmentPlan {
                    scheme: Scheme::ToneGroup,
                    sequence_length: n_cp,
                    shifts: vec![vec![t0], vec![t1]],
                    tone_groups: Some(vec![vec![0], vec![0]]),
                };
                problem
                    .alignment_cost(&plan)
                    .map(|c| format!("{:7.3}", c.total))
            })
            .collect::<pdpalign::Result<_>>()?;
        println!("{t0}: {}", row.join(" "));
    }

    let fixed = fixed_tone_group_plan(2, 1, &cfg.ofdm, 0)?;
    let tone = optimize_tone_groups(&problem, ToneGroupOptions::default())?;
    let full = optimize_full_length(
        &problem,
        FullLengthOptions {
            step: 4,
            ..Default::default()
        },
    )?;
    for (name, plan) in [
        ("no alignment", &fixed),
        ("tone groups", &tone),
        ("full length", &full),
    ] {
        let cost = problem.alignment_cost(plan)?;
        println!(
            "{name:12}: shifts {:?}, cost {:.4}",
            plan.shifts, cost.total
        );
    }
    println!("{}", tone.to_json());
    Ok(())
}
