//! Unsigned and signed amplitude estimation against the query model.

use qles_measure::ae::{chebae_estimate, model_query_complexity, signed_estimate, AeConfig, CoinOracle, Sampling};
use qles_measure::rng::substream;

fn main() -> qles_measure::Result<()> {
    let eps = 1e-3;
    let cfg = AeConfig::new(eps, 0.05)?;
    let model = model_query_complexity(eps, false)?;
    let signed_model = model_query_complexity(eps, true)?;
    println!("query model at eps={eps}: unsigned {:.1}, signed {:.1}", model.queries, signed_model.queries);

    for (i, a) in [0.9, 0.5, 0.1, -0.3, -0.7].into_iter().enumerate() {
        let mut rng = substream(1, "example", &[i as u64]);
        let u = chebae_estimate(&CoinOracle::plain(a)?, &cfg, Sampling::Shots(&mut rng))?;
        let s = signed_estimate(&CoinOracle::shifted(a)?, &cfg, Sampling::Shots(&mut rng))?;
        println!(
            "a={a:+.2}  |a|≈{:.5} ({} queries, {} rounds)  a≈{:+.5} ({} queries, shifts {:?})",
            u.a_hat,
            u.queries,
            u.rounds,
            s.a_hat,
            s.queries,
            s.shifts.iter().map(|b| (b * 1e3).round() / 1e3).collect::<Vec<_>>()
        );
    }

    let exact = signed_estimate::<rand_chacha::ChaCha8Rng>(&CoinOracle::shifted(-0.42)?, &cfg, Sampling::Exact)?;
    println!("exact coins: a_hat = {}", exact.a_hat);
    Ok(())
}
