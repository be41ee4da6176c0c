/// Bernoulli KL divergence `D(p ‖ q)`.
fn kl(p: f64, q: f64) -> f64 {
    let q = q.clamp(1e-300, 1.0 - 1e-16);
    let mut d = 0.0;
    if p > 0.0 {
        d += p * (p / q).ln();
    }
    if p < 1.0 {
        d += (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
    }
    d
}

/// Two-sided Chernoff–Hoeffding interval in KL form for a Bernoulli mean:
/// all `q` with `n·D(p̂ ‖ q) ≤ ln(2/δ)`.
pub fn kl_interval(successes: u64, n: u64, delta: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let p = successes as f64 / n as f64;
    let limit = (2.0 / delta).ln() / n as f64;
    let upper = if kl(p, 1.0) <= limit { 1.0 } else { bisect(p, 1.0, |q| kl(p, q) <= limit) };
    let lower = if kl(p, 0.0) <= limit { 0.0 } else { bisect(p, 0.0, |q| kl(p, q) <= limit) };
    (lower, upper)
}

/// Boundary between `inside` (true at `from`) and its complement (at `to`).
fn bisect(from: f64, to: f64, inside: impl Fn(f64) -> bool) -> f64 {
    let (mut a, mut b) = (from, to);
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        if inside(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}
