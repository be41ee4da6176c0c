//! Burn-in: unique-outcome ratios, slope fitting, and the a_max inversion.

use qles_measure::burnin::{
    a_max_from_slope, burn_in_shots, fit_slope, make_dummy_state, rebuild_slope_model, sample_unique_ratio, BurnInGrid,
    SlopeModel, SHOT_GRID,
};
use qles_measure::rng::substream;

fn main() -> qles_measure::Result<()> {
    let mut rng = substream(5, "example", &[]);
    let state = make_dummy_state(5, 2, 0.9, &mut rng)?;
    println!("peaks at {:?}, peak amplitude {:.4}", state.peaks, state.amplitudes[state.peaks[0]]);
    let samples = SHOT_GRID
        .iter()
        .map(|&n| sample_unique_ratio(&state, n, &mut rng))
        .collect::<qles_measure::Result<Vec<_>>>()?;
    for s in &samples {
        println!("  N_S={:>6}  N_new={:>3}  r={:.5}", s.n_s, s.n_new, s.r);
    }
    let slope = fit_slope(&samples)?;
    println!("slope of r vs log10 N_S: {slope:.4}");

    let fit = rebuild_slope_model(&BurnInGrid::default(), 10, 0)?;
    let m = fit.model;
    println!("rebuilt model: {:.3} a² {:+.3} a {:+.3}", m.c2, m.c1, m.c0);
    for (a, s) in &fit.aggregate {
        println!("  a_max={a:.2}  mean slope {s:.4}");
    }

    let published = SlopeModel::PUBLISHED;
    let est = a_max_from_slope(-0.25, &published)?;
    println!("published model: slope -0.25 -> a_max {:.4} (clamped {})", est.a_max, est.clamped);
    for alpha in [0.5, 0.9] {
        println!("burn-in shots for alpha={alpha}, a_max={:.3}: {}", est.a_max, burn_in_shots(alpha, est.a_max)?);
    }
    Ok(())
}
