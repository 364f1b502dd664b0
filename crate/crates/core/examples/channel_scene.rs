//! Draws a two-cell scatterer scene and shows how array size separates the
//! spatial covariances of users with distinct angles of arrival.

use pdpalign::channel::{
    draw_scene, make_pdp, steering_vector, tap_covariance, ArrayConfig, PdpKind, PdpSet, Topology,
    UserId,
};

fn main() -> pdpalign::Result<()> {
    let topology = Topology::default();
    let pdp = make_pdp(PdpKind::Exponential, 128, 8, 1.0, None)?;
    let scene = draw_scene(
        7,
        &topology,
        10f64.to_radians(),
        &PdpSet::uniform(&topology, &pdp),
    )?;
    let array = ArrayConfig::default();

    for u in topology.users() {
        for b in 0..topology.n_cells {
            let centers: Vec<String> = (0..8)
                .flat_map(|n| {
                    scene
                        .paths(u, b, n)
                        .iter()
                        .map(|p| format!("{:.0}", p.center_aoa.to_degrees()))
                })
                .collect();
            println!(
                "user ({}, {}) -> bs {b}: tap AoAs (deg) {}",
                u.cell,
                u.user,
                centers.join(" ")
            );
        }
    }
    let c = tap_covariance(&scene, UserId::new(0, 0), 0, 0, &array);
    println!(
        "tap 0 covariance trace {:.3} (M P_0 = {:.3})",
        c.matrix.trace().re,
        50.0 * pdp.powers()[0]
    );

    // |a(t1)^H a(t2)| / M shrinks as the array grows.
    let (t1, t2) = (60f64.to_radians(), 80f64.to_radians());
    for m in [10, 100, 1000] {
        let arr = ArrayConfig::new(m, 0.5)?;
        let (a1, a2) = (steering_vector(t1, &arr), steering_vector(t2, &arr));
        println!(
            "M = {m:4}: |a1^H a2| / M = {:.4}",
            a1.dotc(&a2).norm() / m as f64
        );
    }
    Ok(())
}
