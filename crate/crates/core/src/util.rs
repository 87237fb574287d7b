//! Small numerical helpers shared across modules.

/// Coordinate (compass) search minimizing `f` in the box `[lo, hi]`.
/// Steps halve `halvings` times after no axis move improves.
pub(crate) fn compass_min<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step0: &[f64],
    lo: &[f64],
    hi: &[f64],
    halvings: usize,
) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut steps = step0.to_vec();
    for _ in 0..halvings {
        for _ in 0..64 {
            let mut moved = false;
            for i in 0..x.len() {
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] = (x[i] + sign * steps[i]).clamp(lo[i], hi[i]);
                    if y[i] == x[i] {
                        continue;
                    }
                    let fy = f(&y);
                    if fy < fx {
                        x = y;
                        fx = fy;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        for s in steps.iter_mut() {
            *s *= 0.5;
        }
    }
    (x, fx)
}

/// Index and value of the smallest entry, first index on ties.
pub(crate) fn argmin(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, v)| if v < bv || v.is_nan() && !bv.is_nan() { (i, v) } else { (bi, bv) })
}
