/// First `x` at which the sampled curve `y(x)` reaches `level` from below,
/// by linear interpolation between neighboring samples.
pub fn level_crossing(x: &[f64], y: &[f64], level: f64) -> Option<f64> {
    x.windows(2).zip(y.windows(2)).find_map(|(xs, ys)| {
        if ys[0] < level && ys[1] >= level {
            Some(xs[0] + (level - ys[0]) * (xs[1] - xs[0]) / (ys[1] - ys[0]))
        } else {
            None
        }
    })
}
