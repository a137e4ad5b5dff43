//! Tiny order-independent statistics over integer samples.

pub fn mean(samples: &[u64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|&v| v as f64).sum::<f64>() / samples.len() as f64
}

/// Population standard deviation. Exactly 0.0 for constant samples.
pub fn stddev(samples: &[u64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let first = samples[0];
    if samples.iter().all(|&v| v == first) {
        return 0.0;
    }
    let m = mean(samples);
    let var = samples
        .iter()
        .map(|&v| {
            let d = v as f64 - m;
            d * d
        })
        .sum::<f64>()
        / samples.len() as f64;
    var.sqrt()
}
