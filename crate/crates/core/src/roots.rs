//! Scalar root finding on a bounded parameter interval.
//!
//! Everything here works on closed-form functions of one variable: a
//! sign-change scan over a uniform grid, then bisection. Tangential roots
//! (a sample touching zero without changing sign) are caught by a
//! golden-section search on `|g|` around local minima.

const MAX_BISECT_ITERS: usize = 200;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Bisection on `[lo, hi]`; `g(lo)` and `g(hi)` must differ in sign (or one
/// of them is exactly zero). Returns `None` without a bracket.
pub fn bisect<F>(g: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Some(lo);
    }
    if g_hi == 0.0 {
        return Some(hi);
    }
    if g_lo.signum() == g_hi.signum() || !g_lo.is_finite() || !g_hi.is_finite() {
        return None;
    }
    for _ in 0..MAX_BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Some(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Minimizes `h` on `[lo, hi]` by golden-section search.
fn golden_min<F>(h: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let mut ha = h(a);
    let mut hb = h(b);
    for _ in 0..MAX_BISECT_ITERS {
        if hi - lo <= tol {
            break;
        }
        if ha < hb {
            hi = b;
            b = a;
            hb = ha;
            a = hi - GOLDEN * (hi - lo);
            ha = h(a);
        } else {
            lo = a;
            a = b;
            ha = hb;
            b = lo + GOLDEN * (hi - lo);
            hb = h(b);
        }
    }
    0.5 * (lo + hi)
}

/// All roots of `g` on the sampled points `ts` (strictly increasing).
///
/// `touch_eps` is the absolute level below which a sample, or a refined
/// local minimum of `|g|`, counts as a root. Roots closer than `tol` are
/// merged. Output is sorted.
pub fn find_roots<F>(g: F, ts: &[f64], tol: f64, touch_eps: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
    let mut roots = Vec::new();
    let n = ts.len();
    for i in 0..n {
        let v = values[i];
        if v.abs() <= touch_eps {
            roots.push(ts[i]);
            continue;
        }
        if i + 1 < n {
            let next = values[i + 1];
            if next.abs() > touch_eps && v.signum() != next.signum() {
                if let Some(r) = bisect(&g, ts[i], ts[i + 1], tol) {
                    roots.push(r);
                }
            }
        }
        // tangential root: |g| has an interior local minimum at sample i
        if i > 0 && i + 1 < n {
            let (prev, next) = (values[i - 1], values[i + 1]);
            if v.abs() < prev.abs()
                && v.abs() <= next.abs()
                && v.signum() == prev.signum()
                && v.signum() == next.signum()
            {
                let t_min = golden_min(|t| g(t).abs(), ts[i - 1], ts[i + 1], tol);
                if g(t_min).abs() <= touch_eps {
                    roots.push(t_min);
                }
            }
        }
    }
    merge_close(roots, tol.max(1e-9))
}

/// Roots from samples only, by linear interpolation between sign changes.
/// Used for loci without a closed-form trajectory.
pub fn find_sampled_roots(ts: &[f64], values: &[f64], touch_eps: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let n = ts.len().min(values.len());
    for i in 0..n {
        let v = values[i];
        if v.abs() <= touch_eps {
            roots.push(ts[i]);
            continue;
        }
        if i + 1 < n {
            let next = values[i + 1];
            if next.abs() > touch_eps && v.signum() != next.signum() {
                let frac = v / (v - next);
                roots.push(ts[i] + frac * (ts[i + 1] - ts[i]));
            }
        }
    }
    let spacing = if n > 1 { ts[1] - ts[0] } else { 0.0 };
    merge_close(roots, 1.5 * spacing)
}

/// Collapses runs of roots closer than `gap` into their mean.
fn merge_close(mut roots: Vec<f64>, gap: f64) -> Vec<f64> {
    roots.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    let mut run: Vec<f64> = Vec::new();
    for r in roots {
        if let Some(&last) = run.last() {
            if r - last > gap {
                out.push(run.iter().sum::<f64>() / run.len() as f64);
                run.clear();
            }
        }
        run.push(r);
    }
    if !run.is_empty() {
        out.push(run.iter().sum::<f64>() / run.len() as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_missing_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn sine_roots_over_one_period() {
        let ts = grid(0.0, 2.0 * PI, 64);
        let roots = find_roots(f64::sin, &ts, 1e-12, 1e-13);
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([0.0, PI, 2.0 * PI]) {
            assert!((r - want).abs() < 1e-12, "{r} vs {want}");
        }
    }

    #[test]
    fn cosine_roots_between_samples() {
        let ts = grid(0.0, 2.0 * PI, 66);
        let roots = find_roots(f64::cos, &ts, 1e-12, 1e-13);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - PI / 2.0).abs() < 1e-11);
        assert!((roots[1] - 1.5 * PI).abs() < 1e-11);
    }

    #[test]
    fn tangential_root_off_grid() {
        let ts = grid(0.0, 1.0, 70);
        let roots = find_roots(|t| (t - 0.3).powi(2), &ts, 1e-12, 1e-14);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.3).abs() < 1e-6);
    }

    #[test]
    fn sampled_roots_interpolate() {
        let ts = grid(0.0, 2.0 * PI, 4096);
        let vals: Vec<f64> = ts.iter().map(|t| t.cos()).collect();
        let roots = find_sampled_roots(&ts, &vals, 1e-12);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - PI / 2.0).abs() < 1e-6);
    }
}
