//! Numerical probes of the level-set argument.
//!
//! The transform is split at a scale cutoff `M` into a low part
//! `Σ_{j<M} T_j` and a high part `Σ_{j>=M} T_j`. The low part is controlled
//! through the `l1` bound on each `T_j`, the high part through
//! `|E^(2)_λ| <= V / λ²` where `V = sup_η ∫ |Σ_{j>=M} σ_j(ξ, η)|² dξ`.
//! `V` is computed exactly via Plancherel as a sum over pairs with
//! `P(m1) = P(m2)`, and majorised by the collision census.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::ArithFn;
use crate::census::{self, ValueHistogram};
use crate::kernel::{BandWeights, DyadicKernel};
use crate::par::{self, Exec};
use crate::signal::{CompactSignal, Signal};
use crate::transform;
use crate::{Error, Result};

/// Inclusive integer evaluation window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Empty("evaluation window"));
        }
        Ok(Window { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<i64> {
        (self.lo..=self.hi).collect()
    }
}

/// Smallest window holding every `n` where some term with `|m| <= max_m`
/// can be nonzero, or `None` if no term can be.
pub fn reachable_window(
    f: &CompactSignal,
    g: &CompactSignal,
    p: &ArithFn,
    q: &ArithFn,
    max_m: u64,
) -> Result<Option<Window>> {
    p.require(max_m)?;
    q.require(max_m)?;
    let span = |s: &CompactSignal, r: &ArithFn| -> Option<(i64, i64)> {
        let (a, b) = s.support()?;
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for k in 1..=max_m as i64 {
            for v in [r.at(k), r.at(-k)] {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        Some((a + lo, b + hi))
    };
    let (Some(sf), Some(sg)) = (span(f, p), span(g, q)) else {
        return Ok(None);
    };
    let (lo, hi) = (sf.0.max(sg.0), sf.1.min(sg.1));
    Ok((lo <= hi).then_some(Window { lo, hi }))
}

/// Geometric grid from `hi` down to `lo` with ratio `2^(1/4)`.
pub fn geometric_lambdas(lo: f64, hi: f64) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo);
    let ratio = 0.25f64.exp2();
    let mut out = Vec::new();
    let mut k = 0;
    loop {
        let lambda = hi / ratio.powi(k);
        if lambda < lo * (1.0 - 1e-12) {
            break;
        }
        out.push(lambda);
        k += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSetProfile {
    pub lambdas: Vec<f64>,
    /// `|E_λ|` within the window, one per lambda.
    pub sizes: Vec<u64>,
    pub epsilon: f64,
    /// `sup_λ λ |E_λ|^(1/(1+ε))` over the grid.
    pub weak_norm: f64,
    /// `max_n |T(f, g)(n)|` over the window.
    pub max_abs: f64,
}

impl LevelSetProfile {
    fn from_values(mut values: Vec<f64>, lambdas: &[f64], epsilon: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let above = |lambda: f64| (values.len() - values.partition_point(|&v| v <= lambda)) as u64;
        let sizes: Vec<u64> = lambdas.iter().map(|&l| above(l)).collect();
        let weak_norm = lambdas
            .iter()
            .zip(&sizes)
            .map(|(&l, &s)| l * (s as f64).powf(1.0 / (1.0 + epsilon)))
            .fold(0.0, f64::max);
        LevelSetProfile {
            lambdas: lambdas.to_vec(),
            sizes,
            epsilon,
            weak_norm,
            max_abs: values.last().copied().unwrap_or(0.0),
        }
    }

    /// `max_λ λ^(1+ε) |E_λ|` over the grid.
    pub fn envelope(&self) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.sizes)
            .map(|(&l, &s)| l.powf(1.0 + self.epsilon) * s as f64)
            .fold(0.0, f64::max)
    }
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::Empty("lambda grid"));
    }
    if lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidParameter("lambdas must be positive".into()));
    }
    Ok(())
}

/// Level sets of the truncated transform `B_{T0}(f, g)` over `window`.
#[allow(clippy::too_many_arguments)]
pub fn level_sets(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    t0: u64,
    window: Window,
    lambdas: &[f64],
    epsilon: f64,
) -> Result<LevelSetProfile> {
    level_sets_with(f, g, p, q, t0, window, lambdas, epsilon, Exec::default())
}

#[allow(clippy::too_many_arguments)]
pub fn level_sets_with(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    t0: u64,
    window: Window,
    lambdas: &[f64],
    epsilon: f64,
    exec: Exec,
) -> Result<LevelSetProfile> {
    check_lambdas(lambdas)?;
    p.require(t0)?;
    q.require(t0)?;
    let values = par::map_range(exec, 0..window.len(), |i| {
        let n = (window.lo + i as i64) as f64;
        transform::evaluate_unchecked(f, g, p, q, n, t0).norm()
    });
    Ok(LevelSetProfile::from_values(values, lambdas, epsilon))
}

/// Level-set sizes of the full dyadic sum and its two parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitLevelSets {
    pub lambda: f64,
    pub cutoff: u32,
    /// `|E_λ|` for `Σ_{j<=J} T_j`.
    pub full: u64,
    /// `|E^(1)_{λ/2}|`.
    pub first_half: u64,
    /// `|E^(2)_{λ/2}|`.
    pub second_half: u64,
    /// `|E^(1)_λ|`.
    pub first: u64,
    /// `|E^(2)_λ|`.
    pub second: u64,
}

impl SplitLevelSets {
    /// `|E_λ| <= |E^(1)_{λ/2}| + |E^(2)_{λ/2}|`.
    pub fn triangle_holds(&self) -> bool {
        self.full <= self.first_half + self.second_half
    }
}

/// Split at cutoff `M`: low scales `0..M`, high scales `M..=J`.
#[allow(clippy::too_many_arguments)]
pub fn split_level_sets(
    kernel: &DyadicKernel,
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    cutoff: u32,
    levels: u32,
    window: Window,
    lambda: f64,
) -> Result<SplitLevelSets> {
    check_lambdas(&[lambda])?;
    crate::kernel::require_levels(p, q, levels)?;
    // empty when cutoff == 0
    let low = match cutoff {
        0 => BandWeights::new(kernel, 1, 0),
        c => BandWeights::new(kernel, 0, (c - 1).min(levels)),
    };
    let high = BandWeights::new(kernel, cutoff, levels);
    let parts = par::map_range(Exec::default(), 0..window.len(), |i| {
        let n = (window.lo + i as i64) as f64;
        (low.apply(f, g, p, q, n), high.apply(f, g, p, q, n))
    });
    let count = |pred: &dyn Fn(&(Complex64, Complex64)) -> bool| {
        parts.iter().filter(|v| pred(v)).count() as u64
    };
    Ok(SplitLevelSets {
        lambda,
        cutoff,
        full: count(&|(a, b)| (a + b).norm() > lambda),
        first_half: count(&|(a, _)| a.norm() > lambda / 2.0),
        second_half: count(&|(_, b)| b.norm() > lambda / 2.0),
        first: count(&|(a, _)| a.norm() > lambda),
        second: count(&|(_, b)| b.norm() > lambda),
    })
}

/// Outcome of the low-scale Chebyshev bound `|E^(1)_λ| <= C M ‖f‖ ‖g‖ / λ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct E1Check {
    pub size: u64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `|E^(1)_λ| <= 4 sup|ρ| M ‖f‖₂ ‖g‖₂ / λ` on `window`.
#[allow(clippy::too_many_arguments)]
pub fn e1_bound_check(
    kernel: &DyadicKernel,
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    cutoff: u32,
    lambda: f64,
    window: Window,
) -> Result<E1Check> {
    check_lambdas(&[lambda])?;
    let size = if cutoff == 0 {
        0
    } else {
        crate::kernel::require_levels(p, q, cutoff - 1)?;
        let low = BandWeights::new(kernel, 0, cutoff - 1);
        par::map_range(Exec::default(), 0..window.len(), |i| {
            low.apply(f, g, p, q, (window.lo + i as i64) as f64).norm() > lambda
        })
        .into_iter()
        .filter(|&b| b)
        .count() as u64
    };
    let bound = 4.0 * kernel.sup_abs() * cutoff as f64 * f.l2_norm() * g.l2_norm() / lambda;
    Ok(E1Check {
        size,
        bound,
        holds: size as f64 <= bound,
    })
}

/// `∫_0^1 |Σ_{j=M}^{J} σ_j(ξ, η)|² dξ` as the literal Plancherel pair sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VExact {
    pub eta: f64,
    pub value: f64,
    /// Residual imaginary part of the pair sum; zero up to rounding.
    pub imag: f64,
}

/// Band weights grouped by `P`-value: `(Q(m), w(m))` for each signed `m`.
struct PBuckets {
    buckets: Vec<Vec<(i64, f64)>>,
}

impl PBuckets {
    fn new(kernel: &DyadicKernel, p: &ArithFn, q: &ArithFn, jlo: u32, jhi: u32) -> Result<Self> {
        let band = BandWeights::new(kernel, jlo, jhi);
        p.require(band.required_limit())?;
        q.require(band.required_limit())?;
        let mut map: HashMap<i64, Vec<(i64, f64)>> = HashMap::new();
        for (k, w) in band.iter() {
            map.entry(p.at(k)).or_default().push((q.at(k), w));
            map.entry(p.at(-k)).or_default().push((q.at(-k), -w));
        }
        let mut keyed: Vec<(i64, Vec<(i64, f64)>)> = map.into_iter().collect();
        keyed.sort_by_key(|(v, _)| *v);
        Ok(PBuckets {
            buckets: keyed.into_iter().map(|(_, b)| b).collect(),
        })
    }

    fn phases(bucket: &[(i64, f64)], eta: f64) -> Vec<Complex64> {
        bucket
            .iter()
            .map(|&(qv, w)| Complex64::cis(-std::f64::consts::TAU * (qv as f64 * eta).fract()) * w)
            .collect()
    }

    fn pair_sum(&self, eta: f64) -> Complex64 {
        let mut total = Complex64::default();
        for bucket in &self.buckets {
            let z = Self::phases(bucket, eta);
            for a in &z {
                for b in &z {
                    total += a * b.conj();
                }
            }
        }
        total
    }

    fn square_sum(&self, eta: f64) -> f64 {
        self.buckets
            .iter()
            .map(|b| {
                Self::phases(b, eta)
                    .into_iter()
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum()
    }
}

pub fn v_exact(
    kernel: &DyadicKernel,
    p: &ArithFn,
    q: &ArithFn,
    eta: f64,
    m_start: u32,
    j_max: u32,
) -> Result<VExact> {
    let sum = PBuckets::new(kernel, p, q, m_start, j_max)?.pair_sum(eta);
    Ok(VExact {
        eta,
        value: sum.re,
        imag: sum.im,
    })
}

/// Sampled supremum over `η` of the `V` integrand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VSup {
    /// Maximiser after refinement.
    pub eta: f64,
    /// Lower bound for the true supremum.
    pub value: f64,
    /// `(η, value)` on the uniform grid.
    pub samples: Vec<(f64, f64)>,
}

/// Evaluate on `k / grid` for `k < grid`, then refine around the best
/// sample by golden-section search.
pub fn v_sup(
    kernel: &DyadicKernel,
    p: &ArithFn,
    q: &ArithFn,
    m_start: u32,
    j_max: u32,
    grid: usize,
) -> Result<VSup> {
    v_sup_with(kernel, p, q, m_start, j_max, grid, Exec::default())
}

pub fn v_sup_with(
    kernel: &DyadicKernel,
    p: &ArithFn,
    q: &ArithFn,
    m_start: u32,
    j_max: u32,
    grid: usize,
    exec: Exec,
) -> Result<VSup> {
    if grid == 0 {
        return Err(Error::Empty("eta grid"));
    }
    let buckets = PBuckets::new(kernel, p, q, m_start, j_max)?;
    let samples: Vec<(f64, f64)> = par::map_range(exec, 0..grid, |k| {
        let eta = k as f64 / grid as f64;
        (eta, buckets.square_sum(eta))
    });
    let (mut eta, mut value) =
        samples.iter().copied().fold(
            (0.0, f64::MIN),
            |best, s| if s.1 > best.1 { s } else { best },
        );
    let h = 1.0 / grid as f64;
    let (mut a, mut b) = (eta - h, eta + h);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let at = |x: f64| buckets.square_sum(x.rem_euclid(1.0));
    let (mut c, mut d) = (b - phi * (b - a), a + phi * (b - a));
    let (mut fc, mut fd) = (at(c), at(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = at(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > value {
            eta = x.rem_euclid(1.0);
            value = v;
        }
    }
    Ok(VSup {
        eta,
        value,
        samples,
    })
}

/// Census majorant of `V` and the estimated remainder beyond `J`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VBound {
    /// `Σ_{j1,j2=M}^{J} 2^{-j1-j2} |S^P_{2^j1, 2^j2}|`.
    pub grid_bound: f64,
    /// Fitted density constant on the same grid.
    pub delta_prime: f64,
    /// `Σ` over `max(j1, j2) > J` of `δ' / (j1 j2 ln²2)^(1+δ)`.
    pub tail: f64,
}

pub fn v_census_bound(p: &ArithFn, m_start: u32, j_max: u32, delta: f64) -> Result<VBound> {
    if m_start > j_max {
        return Err(Error::InvalidParameter("M must not exceed Jmax".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    p.require(census::strip_bounds(j_max).1)?;
    let js: Vec<u32> = (m_start..=j_max).collect();
    let hist = par::map_slice(Exec::default(), &js, |&j| {
        ValueHistogram::of_strip(p, j).expect("strip checked against limit")
    });
    let mut grid_bound = 0.0;
    let mut delta_prime: f64 = 0.0;
    for (a, &j1) in js.iter().enumerate() {
        for (b, &j2) in js.iter().enumerate() {
            let count = hist[a].pairs_with(&hist[b]);
            grid_bound += count as f64 / ((j1 + j2) as f64).exp2();
            delta_prime = delta_prime.max(census::star_star_ratio(count, j1, j2, delta));
        }
    }
    let s = 1.0 + delta;
    let head: f64 = (m_start.max(1)..=j_max).map(|j| (j as f64).powf(-s)).sum();
    let rest = (j_max.max(1) as f64).powf(-delta) / delta;
    let ln2sq = std::f64::consts::LN_2.powi(2);
    let tail = delta_prime / ln2sq.powf(s) * (2.0 * head * rest + rest * rest);
    Ok(VBound {
        grid_bound,
        delta_prime,
        tail,
    })
}

/// Cutoff scale: `0` for `λ >= 1`, else the integer nearest
/// `(1/λ)^(1/(1+2δ))`, at least 1.
pub fn choose_cutoff(lambda: f64, delta: f64) -> Result<u32> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if lambda >= 1.0 {
        return Ok(0);
    }
    let m = (1.0 / lambda).powf(1.0 / (1.0 + 2.0 * delta)).round();
    Ok((m as u32).max(1))
}

/// `max_{1<=M<=M_max} |M^{-1} Σ_{m=1}^{M} f(n - P(m)) g(n - Q(m))|`.
pub fn maximal_operator(
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    n: f64,
    m_max: u64,
) -> Result<f64> {
    if m_max == 0 {
        return Err(Error::InvalidParameter("M_max must be at least 1".into()));
    }
    p.require(m_max)?;
    q.require(m_max)?;
    let mut running = Complex64::default();
    let mut best: f64 = 0.0;
    for m in 1..=m_max as i64 {
        running += f.eval(n - p.at(m) as f64) * g.eval(n - q.at(m) as f64);
        best = best.max(running.norm() / m as f64);
    }
    Ok(best)
}
