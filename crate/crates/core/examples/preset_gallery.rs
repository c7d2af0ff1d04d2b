//! Builds every preset and prints the umbilicity constant, the curvature
//! range and the pinching of the initial data.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use ricci_umbilic::pinching::{eps_pinch, f_ratio};
use ricci_umbilic::{curvature, volume, Preset};

fn main() -> ricci_umbilic::Result<()> {
    let presets = [
        Preset::RoundCap { s_max: FRAC_PI_2 },
        Preset::RoundCap { s_max: FRAC_PI_3 },
        Preset::PerturbedCap {
            s_max: 1.4,
            amp: 0.2,
            mode: 2,
        },
        Preset::PerturbedCap {
            s_max: 1.4,
            amp: 0.05,
            mode: 3,
        },
        Preset::FlattenedCap {
            s_max: FRAC_PI_3,
            aspect: 1.3,
        },
        Preset::FlatBall { radius: 1.0 },
    ];
    for preset in presets {
        let metric = preset.build(128)?;
        let curv = curvature(&metric)?;
        let pinching = match (eps_pinch(&curv), f_ratio(&curv)) {
            (Ok((eps, _)), Ok((f, _))) => format!("eps* = {eps:.4}  f = {f:.4}"),
            _ => "pinching undefined (R = 0)".to_string(),
        };
        println!("{preset}");
        println!(
            "    kappa = {:.4}  volume = {:.4}  R in [{:.4}, {:.4}]  {pinching}",
            metric.kappa(),
            volume(&metric),
            curv.r_min(),
            curv.r_max()
        );
    }

    // Initial data without positive Ricci curvature is refused.
    match (Preset::PerturbedCap {
        s_max: FRAC_PI_2,
        amp: 0.9,
        mode: 4,
    })
    .build(128)
    {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
