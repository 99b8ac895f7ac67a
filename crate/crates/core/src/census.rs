//! Collision census over dyadic strips.
//!
//! For scales `M = 2^j1`, `N = 2^j2` the collision set holds the ordered
//! pairs `(m, n)` of nonzero integers with `R(m) = R(n)`,
//! `M/2 <= |m| <= 2M` and `N/2 <= |n| <= 2N`. Both bounds are inclusive and
//! the diagonal `m = n` is counted. Counting goes through per-strip value
//! histograms, so a cell costs time linear in the strip sizes.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::ArithFn;
use crate::par::{self, Exec};
use crate::{Error, Result};

/// Inclusive range of `|m|` covered by the strip of scale `2^j`.
pub fn strip_bounds(j: u32) -> (u64, u64) {
    let lo = if j == 0 { 1 } else { 1u64 << (j - 1) };
    (lo, 1u64 << (j + 1))
}

/// Number of signed integers in the strip of scale `2^j`.
pub fn strip_len(j: u32) -> u64 {
    let (lo, hi) = strip_bounds(j);
    2 * (hi - lo + 1)
}

/// Signed integers lying in both strips: the pairs `(m, m)` every function
/// collides on.
pub fn diagonal_floor(j1: u32, j2: u32) -> u64 {
    let (a, b) = strip_bounds(j1);
    let (c, d) = strip_bounds(j2);
    let lo = a.max(c);
    let hi = b.min(d);
    if lo > hi {
        0
    } else {
        2 * (hi - lo + 1)
    }
}

/// `count * (ln M * ln N)^(1 + delta) / (M N)` with `M = 2^j1`, `N = 2^j2`.
pub fn star_star_ratio(count: u64, j1: u32, j2: u32, delta: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let logs = (j1 as f64 * ln2) * (j2 as f64 * ln2);
    count as f64 * logs.powf(1.0 + delta) / ((j1 + j2) as f64).exp2()
}

/// Multiplicity of each value of `R` over one dyadic strip.
#[derive(Clone, Debug, Default)]
pub struct ValueHistogram {
    counts: HashMap<i64, u64>,
}

impl ValueHistogram {
    pub fn of_strip(r: &ArithFn, j: u32) -> Result<Self> {
        let (lo, hi) = strip_bounds(j);
        r.require(hi)?;
        let mut counts = HashMap::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let k = k as i64;
            *counts.entry(r.at(k)).or_insert(0) += 1;
            *counts.entry(r.at(-k)).or_insert(0) += 1;
        }
        Ok(ValueHistogram { counts })
    }

    /// Number of `(a, b)` with `a` from `self`, `b` from `other`, equal values.
    pub fn pairs_with(&self, other: &ValueHistogram) -> u64 {
        let (small, large) = if self.counts.len() <= other.counts.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .counts
            .iter()
            .filter_map(|(v, &c)| large.counts.get(v).map(|&o| c * o))
            .sum()
    }

    pub fn distinct_values(&self) -> usize {
        self.counts.len()
    }
}

/// One cell of the census grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollisionRecord {
    pub j1: u32,
    pub j2: u32,
    #[serde(rename = "M")]
    pub m_scale: u64,
    #[serde(rename = "N")]
    pub n_scale: u64,
    pub count: u64,
    pub delta: f64,
    pub ratio: f64,
}

impl CollisionRecord {
    fn new(j1: u32, j2: u32, count: u64, delta: f64) -> Self {
        CollisionRecord {
            j1,
            j2,
            m_scale: 1 << j1,
            n_scale: 1 << j2,
            count,
            delta,
            ratio: star_star_ratio(count, j1, j2, delta),
        }
    }

    pub fn ratio_for(&self, delta: f64) -> f64 {
        star_star_ratio(self.count, self.j1, self.j2, delta)
    }

    /// Constant-function ceiling on the count.
    pub fn ceiling(&self) -> u64 {
        strip_len(self.j1) * strip_len(self.j2)
    }

    pub fn floor(&self) -> u64 {
        diagonal_floor(self.j1, self.j2)
    }
}

/// Collision count for a single cell, with the ratio at `delta = 1`.
pub fn count_collisions(r: &ArithFn, j1: u32, j2: u32) -> Result<CollisionRecord> {
    count_collisions_delta(r, j1, j2, 1.0)
}

pub fn count_collisions_delta(
    r: &ArithFn,
    j1: u32,
    j2: u32,
    delta: f64,
) -> Result<CollisionRecord> {
    let h1 = ValueHistogram::of_strip(r, j1)?;
    let count = if j1 == j2 {
        h1.pairs_with(&h1)
    } else {
        h1.pairs_with(&ValueHistogram::of_strip(r, j2)?)
    };
    Ok(CollisionRecord::new(j1, j2, count, delta))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )))
    }
}

/// All cells `1 <= j1, j2 <= jmax`, row-major in `(j1, j2)`.
pub fn census_grid(r: &ArithFn, jmax: u32, delta: f64) -> Result<Vec<CollisionRecord>> {
    census_grid_with(r, jmax, delta, Exec::default())
}

pub fn census_grid_with(
    r: &ArithFn,
    jmax: u32,
    delta: f64,
    exec: Exec,
) -> Result<Vec<CollisionRecord>> {
    check_delta(delta)?;
    if jmax == 0 {
        return Err(Error::Empty("census grid needs jmax >= 1"));
    }
    r.require(strip_bounds(jmax).1)?;
    let histograms = par::map_range(exec, 1..jmax as usize + 1, |j| {
        ValueHistogram::of_strip(r, j as u32).expect("strip checked against limit")
    });
    let side = jmax as usize;
    Ok(par::map_range(exec, 0..side * side, |cell| {
        let (a, b) = (cell / side, cell % side);
        let count = histograms[a].pairs_with(&histograms[b]);
        CollisionRecord::new(a as u32 + 1, b as u32 + 1, count, delta)
    }))
}

/// Diagonal-only census `j1 = j2 = j` for `j in jmin..=jmax`.
pub fn census_diagonal(
    r: &ArithFn,
    jmin: u32,
    jmax: u32,
    delta: f64,
) -> Result<Vec<CollisionRecord>> {
    check_delta(delta)?;
    r.require(strip_bounds(jmax).1)?;
    let js: Vec<u32> = (jmin..=jmax).collect();
    par::map_slice(Exec::default(), &js, |&j| {
        count_collisions_delta(r, j, j, delta)
    })
    .into_iter()
    .collect()
}

/// Constants of the density condition fitted on a scanned grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionParams {
    pub delta: f64,
    /// Smallest constant making the density bound hold on every record.
    pub delta_prime: f64,
}

pub fn fit_delta_prime(records: &[CollisionRecord], delta: f64) -> Result<ConditionParams> {
    check_delta(delta)?;
    if records.is_empty() {
        return Err(Error::Empty("no collision records to fit"));
    }
    let delta_prime = records
        .iter()
        .map(|r| r.ratio_for(delta))
        .fold(0.0, f64::max);
    Ok(ConditionParams { delta, delta_prime })
}

/// Observed bounded-multiplicity constants over `1 <= |m| <= range_limit`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StarReport {
    /// Largest `|m1| / |m2|` over colliding pairs.
    pub d1: f64,
    /// Largest number of partners (itself included) of any `m1`.
    pub d2: u64,
    pub range_limit: u64,
}

pub fn star_report(r: &ArithFn, range_limit: u64) -> Result<StarReport> {
    if range_limit == 0 {
        return Err(Error::ZeroLimit);
    }
    r.require(range_limit)?;
    // value -> (multiplicity, min |m|, max |m|)
    let mut buckets: HashMap<i64, (u64, u64, u64)> = HashMap::new();
    for k in 1..=range_limit {
        for m in [k as i64, -(k as i64)] {
            let e = buckets.entry(r.at(m)).or_insert((0, u64::MAX, 0));
            e.0 += 1;
            e.1 = e.1.min(k);
            e.2 = e.2.max(k);
        }
    }
    let (d1, d2) = buckets
        .values()
        .fold((1.0f64, 1u64), |(d1, d2), &(c, lo, hi)| {
            (d1.max(hi as f64 / lo as f64), d2.max(c))
        });
    Ok(StarReport {
        d1,
        d2,
        range_limit,
    })
}

/// Whether the π-collision set between strips `j1` and `j2` is empty.
pub fn pi_far_strip_vanishing(pi: &ArithFn, j1: u32, j2: u32) -> Result<bool> {
    Ok(count_collisions(pi, j1, j2)?.count == 0)
}

/// `(j, |S_{2^j,2^j}| (ln 2^j)^2 / 4^j)` for `1 <= j <= jmax`.
pub fn d_lower_ratio(d: &ArithFn, jmax: u32) -> Result<Vec<(u32, f64)>> {
    let ln2 = std::f64::consts::LN_2;
    Ok(census_diagonal(d, 1, jmax, 1.0)?
        .into_iter()
        .map(|rec| {
            let log = rec.j1 as f64 * ln2;
            (
                rec.j1,
                rec.count as f64 * log * log / ((2 * rec.j1) as f64).exp2(),
            )
        })
        .collect())
}

/// Quadratic reference count. Test-only.
#[cfg(test)]
pub(crate) fn brute_force_count(r: &ArithFn, j1: u32, j2: u32) -> u64 {
    let signed = |j: u32| {
        let (lo, hi) = strip_bounds(j);
        (lo as i64..=hi as i64)
            .flat_map(|k| [k, -k])
            .collect::<Vec<_>>()
    };
    let (a, b) = (signed(j1), signed(j2));
    let mut count = 0;
    for &m in &a {
        for &n in &b {
            if r.at(m) == r.at(n) {
                count += 1;
            }
        }
    }
    count
}
