//! Per-tap spatial MMSE and the residual matrix: the extra error caused by
//! an inter-cell interferer, by direct subtraction and in eigen form.

use pdpalign::channel::{tap_covariance, ArrayConfig, PathGeometry, SpatialScene, UserId};
use pdpalign::estimation::{per_tap_error_cov, residual_matrix, residual_matrix_eigen};

fn main() -> pdpalign::Result<()> {
    let sigma2 = 0.1;
    let own_aoa = 60f64.to_radians();
    for (label, int_aoa) in [
        ("same cluster", 60.0),
        ("5 deg apart", 65.0),
        ("30 deg apart", 90.0),
    ] {
        let array = ArrayConfig::new(32, 0.5)?;
        let mut scene = SpatialScene::empty(2, 1, 1);
        let spread = 3f64.to_radians();
        scene.set_path(
            UserId::new(0, 0),
            0,
            0,
            PathGeometry::evenly_spread(own_aoa, spread, 20, 1.0),
        );
        scene.set_path(
            UserId::new(1, 0),
            0,
            0,
            PathGeometry::evenly_spread(f64::to_radians(int_aoa), spread, 20, 1.0),
        );
        let own = tap_covariance(&scene, UserId::new(0, 0), 0, 0, &array).matrix;
        let int = tap_covariance(&scene, UserId::new(1, 0), 0, 0, &array).matrix;
        let e0 = per_tap_error_cov(&own, &[], sigma2)?.trace().re;
        let e1 = per_tap_error_cov(&own, std::slice::from_ref(&int), sigma2)?
            .trace()
            .re;
        let r = residual_matrix(&own, std::slice::from_ref(&int), sigma2)?;
        let r_eig = residual_matrix_eigen(&own, &[int], sigma2)?;
        println!(
            "{label:13}: error {e0:.4} -> {e1:.4}, Tr R {:.4}, eigen form off by {:.1e}",
            r.trace().re,
            (&r - &r_eig).norm()
        );
    }
    Ok(())
}
