//! Truncated evaluation of `B(f, g)(x) = Σ_{m≠0} f(x - P(m)) g(x - Q(m)) / m`.
//!
//! The sum is always formed the same way: the terms for `m` and `-m` are
//! combined first, then pairs are accumulated in ascending `|m|`. With
//! `P = Q` of even parity every pair is an exact floating-point zero.

use num_complex::Complex64;

use crate::arith::{ArithFn, ArithName, Minorant};
use crate::par::{self, Exec};
use crate::signal::{CompactSignal, Signal};
use crate::{Error, Result};

/// The `P` functions of the four reference plots; `Q` is always `d`, sign-odd.
pub const FIGURE_P: [ArithName; 4] = [
    ArithName::Phi,
    ArithName::Pi,
    ArithName::Mobius,
    ArithName::Omega,
];

#[inline]
fn pair_term(f: &Signal, g: &Signal, p: &ArithFn, q: &ArithFn, x: f64, k: i64) -> Complex64 {
    let plus = f.eval(x - p.at(k) as f64) * g.eval(x - q.at(k) as f64);
    let minus = f.eval(x - p.at(-k) as f64) * g.eval(x - q.at(-k) as f64);
    (plus - minus) / k as f64
}

fn check_t0(p: &ArithFn, q: &ArithFn, t0: u64) -> Result<()> {
    p.require(t0)?;
    q.require(t0)
}

/// `Σ_{1 <= |m| <= T0} f(x - P(m)) g(x - Q(m)) / m`.
pub fn evaluate(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    x: f64,
    t0: u64,
) -> Result<Complex64> {
    check_t0(p, q, t0)?;
    Ok(evaluate_unchecked(f, g, p, q, x, t0))
}

pub(crate) fn evaluate_unchecked(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    x: f64,
    t0: u64,
) -> Complex64 {
    let mut acc = Complex64::default();
    for k in 1..=t0 as i64 {
        acc += pair_term(f, g, p, q, x, k);
    }
    acc
}

/// Points `x_min, x_min + step, ..., <= x_max`. Empty when `step <= 0`.
pub fn grid(x_min: f64, x_max: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || !(x_max >= x_min) {
        return Vec::new();
    }
    let span = x_max - x_min;
    let count = (span / step + 1e-9).floor() as usize;
    let exact = count > 0 && (count as f64 * step - span).abs() <= 1e-9 * span.max(1.0);
    (0..=count)
        .map(|i| {
            if exact {
                // interpolate between the end points so 0 lands on 0
                (x_min * (count - i) as f64 + x_max * i as f64) / count as f64
            } else {
                x_min + i as f64 * step
            }
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn figure_series(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    x_min: f64,
    x_max: f64,
    step: f64,
    t0: u64,
) -> Result<Vec<(f64, Complex64)>> {
    figure_series_with(f, g, p, q, x_min, x_max, step, t0, Exec::default())
}

#[allow(clippy::too_many_arguments)]
pub fn figure_series_with(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    x_min: f64,
    x_max: f64,
    step: f64,
    t0: u64,
    exec: Exec,
) -> Result<Vec<(f64, Complex64)>> {
    check_t0(p, q, t0)?;
    let xs = grid(x_min, x_max, step);
    Ok(par::map_slice(exec, &xs, |&x| {
        (x, evaluate_unchecked(f, g, p, q, x, t0))
    }))
}

/// The error budget quoted next to the reference plots: `1/(T0 - X)^2` for
/// `|x| <= X`.
pub fn quoted_budget(t0: u64, x_abs_max: f64) -> f64 {
    1.0 / (t0 as f64 - x_abs_max).powi(2)
}

/// A certified bound on everything [`evaluate`] drops at cutoff `t0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationBudget {
    pub t0: u64,
    pub tail_bound: f64,
}

/// How the decaying signal's majorant behaves as its argument moves away.
enum Decay {
    /// `|s(y)| <= amp / (1 + ((|y - center|) / scale)^2)`.
    Cauchy { center: f64, scale: f64, amp: f64 },
    /// `s(y) = 0` for `|y| > radius`, `|s| <= amp` otherwise.
    Compact { radius: f64, amp: f64 },
}

impl Decay {
    fn of(s: &Signal) -> Self {
        match s {
            Signal::Cauchy(c) => Decay::Cauchy {
                center: c.center,
                scale: c.scale,
                amp: c.amplitude.abs(),
            },
            Signal::Compact(c) => Decay::Compact {
                radius: c
                    .support()
                    .map_or(0.0, |(a, b)| a.abs().max(b.abs()) as f64),
                amp: c.sup_abs(),
            },
        }
    }
}

/// Bound `Σ_{|m| > T0} |f(x - P(m)) g(x - Q(m))| / |m|` uniformly over
/// `x` in `x_range`.
///
/// Uses the growth floor of `P` (against `f`'s majorant) or, failing that,
/// of `Q` (against `g`'s). Every term is dominated by
/// `h(m) = (2/m) maj(floor(m) - X) sup|other|`, which is non-increasing in
/// `m`, so the sum is closed by `∫_{T0}^∞ h`, evaluated as an upper Riemann
/// sum on a geometric grid plus an analytic far tail.
pub fn tail_budget(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    x_range: (f64, f64),
    t0: u64,
) -> Result<TruncationBudget> {
    let (decaying, other, minorant) = match (p.minorant(), q.minorant()) {
        (Some(m), _) => (f, g, m),
        (None, Some(m)) => (g, f, m),
        (None, None) => {
            return Err(Error::Unsupported(format!(
                "neither {} nor {} has a growth floor",
                p.label(),
                q.label()
            )))
        }
    };
    if t0 == 0 {
        return Err(Error::InvalidParameter("T0 must be positive".into()));
    }
    let sup_other = other.sup_abs();
    let tail_bound = match Decay::of(decaying) {
        _ if sup_other == 0.0 || decaying.is_zero() => 0.0,
        Decay::Compact { radius, amp } => {
            let reach = x_range.0.abs().max(x_range.1.abs()) + radius;
            compact_tail(minorant, reach, t0) * 2.0 * amp * sup_other
        }
        Decay::Cauchy { center, scale, amp } => {
            let reach = (x_range.0 - center).abs().max((x_range.1 - center).abs());
            cauchy_tail(minorant, reach, scale, t0) * 2.0 * amp * sup_other
        }
    };
    Ok(TruncationBudget { t0, tail_bound })
}

/// `Σ 1/m` over `m > t0` with `floor(m) <= reach`.
fn compact_tail(minorant: Minorant, reach: f64, t0: u64) -> f64 {
    let alive = |m: f64| minorant.at(m) <= reach;
    if !alive(t0 as f64 + 1.0) {
        return 0.0;
    }
    // last m with floor(m) <= reach, by doubling then bisection
    let (mut lo, mut hi) = (t0 + 1, 2 * (t0 + 1));
    while alive(hi as f64) {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            return f64::INFINITY;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if alive(mid as f64) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo - t0 <= 10_000_000 {
        (t0 + 1..=lo).map(|m| 1.0 / m as f64).sum()
    } else {
        (lo as f64 / t0 as f64).ln()
    }
}

/// `∫_{t0}^∞ (1/t) / (1 + (max(0, floor(t) - reach) / scale)^2) dt`, bounded
/// from above.
fn cauchy_tail(minorant: Minorant, reach: f64, scale: f64, t0: u64) -> f64 {
    let weight = |t: f64| {
        let d = (minorant.at(t) - reach).max(0.0) / scale;
        1.0 / (t * (1.0 + d * d))
    };
    let (c, a, floor_from) = minorant.power_floor();
    // far point where the power floor holds and clears the reach twice over
    let mut far = (t0 as f64 * 1e12).max(floor_from);
    while c * far.powf(a) < 2.0 * reach {
        far *= 10.0;
    }
    let ratio = 1.0005f64;
    let mut t = t0 as f64;
    let mut sum = 0.0;
    while t < far {
        let next = (t * ratio).min(far);
        sum += weight(t) * (next - t);
        t = next;
    }
    // beyond `far`: weight <= scale^2 / (t (c t^a - reach)^2)
    //                      <= scale^2 / ((1 - k)^2 c^2) t^(-1-2a)
    let k = reach / (c * far.powf(a));
    let far_tail = scale * scale / ((1.0 - k).powi(2) * c * c) * far.powf(-2.0 * a) / (2.0 * a);
    sum + far_tail
}

/// The untruncated sum for compactly supported `f`, `g` at an integer `x`.
///
/// Scans `1 <= |m| <= search_bound` and requires a growth floor of `P` or
/// `Q` to certify that no term beyond the bound survives.
pub fn exact_compact_evaluate(
    f: &CompactSignal,
    g: &CompactSignal,
    p: &ArithFn,
    q: &ArithFn,
    x: i64,
    search_bound: u64,
) -> Result<Complex64> {
    check_t0(p, q, search_bound)?;
    if f.is_zero() || g.is_zero() {
        return Ok(Complex64::default());
    }
    let radius = |s: &CompactSignal| {
        let (a, b) = s.support().expect("nonzero signal");
        a.unsigned_abs().max(b.unsigned_abs()) as f64
    };
    let beyond = search_bound as f64 + 1.0;
    let vanishes = |fun: &ArithFn, s: &CompactSignal| {
        fun.minorant()
            .is_some_and(|m| m.at(beyond) - x.unsigned_abs() as f64 > radius(s))
    };
    if !vanishes(p, f) && !vanishes(q, g) {
        return Err(Error::SearchExhausted {
            bound: search_bound,
        });
    }
    let mut acc = Complex64::default();
    for k in 1..=search_bound as i64 {
        let term = |m: i64| {
            let (a, b) = (x - p.at(m), x - q.at(m));
            if f.contains(a) && g.contains(b) {
                f.get(a) * g.get(b)
            } else {
                Complex64::default()
            }
        };
        let (plus, minus) = (term(k), term(-k));
        if plus != minus {
            acc += (plus - minus) / k as f64;
        }
    }
    Ok(acc)
}
