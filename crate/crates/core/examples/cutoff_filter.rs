//! Which components survive the amplitude cutoff.

use nalgebra::DVector;
use qles_measure::noise::apply_cutoff;
use qles_measure::nozzle::CorrectionVector;

fn main() {
    let v = CorrectionVector::new(DVector::from_vec(vec![0.9, 0.02, 0.6, -0.01, 0.7, 0.03]));
    for alpha in [0.0, 0.5, 0.7, 0.9] {
        let kept = apply_cutoff(&v, alpha);
        let shown: Vec<String> = kept.values().iter().map(|x| format!("{x:+.2}")).collect();
        let n = kept.values().iter().filter(|x| **x != 0.0).count();
        println!("alpha={alpha:.1}: keeps {n} -> [{}]", shown.join(", "));
    }
}
