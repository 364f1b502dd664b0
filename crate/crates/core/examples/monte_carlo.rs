//! A short Monte-Carlo comparison of best alignment, no alignment and no
//! interference; prints medians and writes the per-run CSV to stdout.

use pdpalign::harness::{
    median_nmse_db, median_sum_se, run_experiment, write_csv, Arm, ExperimentConfig,
};

fn main() -> pdpalign::Result<()> {
    let runs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20);
    let cfg = ExperimentConfig {
        n_runs: runs,
        ..ExperimentConfig::default()
    };
    let records = run_experiment(&cfg)?;
    for arm in [Arm::BA, Arm::NA, Arm::NI] {
        eprintln!(
            "{arm}: median NMSE {:.2} dB, median sum SE {:.3} bit/s/Hz",
            median_nmse_db(&records, arm).unwrap_or(f64::NAN),
            median_sum_se(&records, arm).unwrap_or(f64::NAN)
        );
    }
    write_csv(&records, std::io::stdout().lock())
}
