//! Small real-line quadrature helpers used by the special-function layer.

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// `tol` is an absolute tolerance on the segment estimate; recursion depth
/// and total work are both capped so a tolerance that turns out to be
/// unattainable (for example, set from a crude panel estimate that missed a
/// boundary layer) degrades to the best refined value instead of grinding.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut budget = 1u32 << 17;
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50, &mut budget)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut u32,
) -> f64 {
    if *budget == 0 {
        return whole;
    }
    *budget -= 1;
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // second disjunct: delta is rounding noise relative to the panel itself,
    // so further splitting cannot improve the estimate
    if depth == 0
        || delta.abs() <= 15.0 * tol
        || delta.abs() <= 1e-15 * (left.abs() + right.abs())
    {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)
    }
}

/// Integrates a decaying `f` over `[a, inf)` by summing adaptive Simpson
/// panels of geometrically growing width until two consecutive panels fall
/// below `rel_tol` relative to the running total.
pub fn integrate_decaying(f: &dyn Fn(f64) -> f64, a: f64, rel_tol: f64) -> f64 {
    let mut left = a;
    // Grow from a unit panel: boundary layers of width O(1) at a large left
    // endpoint (e.g. t^{a-1} e^{-t} truncated far beyond its mode) are then
    // sampled before the panel estimates that set the tolerances can miss
    // them, while doubling still crosses any distant mode in ~90 panels.
    let mut width = 1.0;
    let mut total = 0.0f64;
    let mut small_streak = 0u32;
    for _ in 0..90 {
        let right = left + width;
        // scale the panel tolerance by the larger of the running total and a
        // three-point estimate of the panel, so the first panel is not held
        // to an absolute tolerance near zero
        let crude = (right - left) / 6.0
            * (f(left) + 4.0 * f(0.5 * (left + right)) + f(right));
        let scale = total.abs().max(crude.abs()).max(1e-300);
        let panel = adaptive_simpson(f, left, right, rel_tol * scale * 0.1);
        total += panel;
        if panel.abs() < rel_tol * total.abs().max(1e-300) {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
        left = right;
        width *= 2.0;
    }
    total
}
