//! Per-antenna MMSE over the tones of one symbol: an interferer whose
//! shifted PDP avoids the target's taps costs nothing, a colliding one does.

use pdpalign::channel::{make_pdp, PdpKind};
use pdpalign::estimation::{interference_free_error_cov, per_antenna_error_cov, PilotedUser};
use pdpalign::model::{base_sequence, shifted_sequence};

fn main() -> pdpalign::Result<()> {
    let (n, n_cp, sigma2) = (32, 8, 0.1);
    let base = base_sequence(n)?;
    let pdp = make_pdp(PdpKind::Exponential, n, n_cp, 1.0, None)?;
    let target = shifted_sequence(&base, 0)?;
    let clean = interference_free_error_cov(pdp.powers(), 1.0, sigma2)
        .trace()
        .re;
    println!("interference-free MSE {clean:.4}");
    for tau in [0, 4, 8, 16] {
        let other = shifted_sequence(&base, tau)?;
        let users = [
            PilotedUser {
                pilot: &target,
                pdp: pdp.powers(),
                tone_power: 1.0,
            },
            PilotedUser {
                pilot: &other,
                pdp: pdp.powers(),
                tone_power: 1.0,
            },
        ];
        let mse = per_antenna_error_cov(&users, 0, sigma2)?.trace().re;
        println!("interferer at shift {tau:2}: MSE {mse:.4}");
    }
    Ok(())
}
