//! Root finding and quadrature used by the ground-truth oracles.

use crate::error::{Error, Result};

const MAX_DOUBLINGS: usize = 1100;
const MAX_BISECTIONS: usize = 400;

/// Root of a decreasing function on `[1, ∞)`: starts from `[1, 2]` and
/// doubles the upper end until the sign changes, then bisects to relative
/// width `rel_tol`.
pub fn decreasing_root<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<f64> {
    let mut lo = 1.0;
    let mut hi = 2.0;
    if f(lo) < 0.0 {
        return Err(Error::NoRoot(format!("function is already negative at {lo}")));
    }
    let mut doublings = 0;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NoRoot("bracket expansion diverged".into()));
        }
    }
    bisect(&f, lo, hi, rel_tol)
}

/// Bisection on a bracket with `f(lo) >= 0 >= f(hi)`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    if f(lo) < 0.0 || f(hi) > 0.0 {
        return Err(Error::NoRoot(format!("[{lo}, {hi}] does not bracket a root")));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs() || mid == lo || mid == hi {
            return Ok(mid);
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss-Kronrod quadrature on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.abs() || err <= f64::MIN_POSITIVE {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Integration(format!(
                "error estimate {err:e} after {MAX_INTERVALS} subintervals"
            )));
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// `∫_c^∞ f(x) dx` via `x = c/t`, splitting at any interior breakpoints.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    c: f64,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    if c <= 0.0 {
        return Err(Error::InvalidParameter(format!("lower limit {c} must be positive")));
    }
    let g = |t: f64| if t <= 0.0 { 0.0 } else { f(c / t) * c / (t * t) };
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .filter(|&&x| x > c && x.is_finite())
        .map(|&x| c / x)
        .collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| integrate(g, w[0], w[1], rel_tol))
        .sum()
}
