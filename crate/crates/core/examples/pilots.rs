//! Cyclic-shift pilots of one base sequence and the shift operator that
//! relates them.

use pdpalign::channel::{make_pdp, PdpKind};
use pdpalign::model::{base_sequence, shift_operator, shifted_sequence, OfdmConfig};

fn main() -> pdpalign::Result<()> {
    let ofdm = OfdmConfig::default();
    println!(
        "N = {}, N_cp = {}, {} tone groups, tone spacing {:.0} Hz",
        ofdm.n_tones(),
        ofdm.n_cp(),
        ofdm.n_groups(),
        ofdm.tone_spacing()
    );

    let l = 8;
    let base = base_sequence(l)?;
    let a = shifted_sequence(&base, 1)?;
    let b = shifted_sequence(&base, 4)?;
    // S_a^H S_b is a pure phase ramp of the relative shift.
    let ramp: Vec<String> = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| format!("{:+.2}", (x.conj() * y).arg()))
        .collect();
    println!("phase of conj(s_1) s_4 per tone: {}", ramp.join(" "));

    let theta = shift_operator(4, 1, l)?;
    println!(
        "shift operator with delta = {}:\n{}",
        theta.delta_tau,
        theta.to_matrix().map(|z| z.re)
    );

    let pdp = make_pdp(PdpKind::Exponential, l, l, 1.0, None)?;
    let rotated = pdp.rotated(theta.delta_tau as i64);
    println!("PDP         {:.3?}", pdp.powers());
    println!("rotated PDP {:.3?}", rotated.powers());
    Ok(())
}
