//! The odd dyadic cutoff `ρ` and the scale pieces of the transform.
//!
//! `ρ` is supported in `1/2 < |x| < 2` and its rescalings telescope:
//! `Σ_{j=0}^{J} 2^{-j} ρ(x / 2^j) = 1/x` for `1 <= |x| <= 2^J`.
//! It is built from a smooth step `η` (0 below 1/2, 1 above 1) via
//! `ψ(x) = η(x) - η(x/2)` and `ρ(x) = ψ(x) / x` for `x > 0`.

use num_complex::Complex64;

use crate::arith::ArithFn;
use crate::signal::{CompactSignal, Signal};
use crate::{Error, Result};

/// Regularity of the smooth step under `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    /// The `exp(-1/t)` construction.
    Infinite,
    /// Polynomial smoothstep of class `C^k`, `k >= 1`.
    Finite(u32),
}

#[derive(Clone, Debug)]
pub struct DyadicKernel {
    smoothing: Smoothing,
    sup_abs: f64,
}

pub fn build_rho(smoothing: Smoothing) -> DyadicKernel {
    DyadicKernel::new(smoothing)
}

impl Default for DyadicKernel {
    fn default() -> Self {
        DyadicKernel::new(Smoothing::Infinite)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl DyadicKernel {
    pub fn new(smoothing: Smoothing) -> Self {
        if let Smoothing::Finite(k) = smoothing {
            assert!(k >= 1, "finite smoothing order must be positive");
        }
        let mut kernel = DyadicKernel {
            smoothing,
            sup_abs: 0.0,
        };
        // ρ is continuous on (1/2, 2); a fine grid pins the max to ~1e-10
        let samples = 200_000;
        kernel.sup_abs = (0..=samples)
            .map(|i| kernel.rho(0.5 + 1.5 * i as f64 / samples as f64).abs())
            .fold(0.0, f64::max);
        kernel
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    /// Support of `|x|`, open at both ends.
    pub fn support(&self) -> (f64, f64) {
        (0.5, 2.0)
    }

    /// `sup |ρ|`.
    pub fn sup_abs(&self) -> f64 {
        self.sup_abs
    }

    /// Step on `[0, 1]`: 0 at 0, 1 at 1, flat at both ends.
    fn step(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        match self.smoothing {
            Smoothing::Infinite => {
                let a = (-1.0 / t).exp();
                let b = (-1.0 / (1.0 - t)).exp();
                a / (a + b)
            }
            Smoothing::Finite(k) => {
                let s = 1.0 - t;
                let poly: f64 = (0..=k).map(|i| binomial(k + i, i) * s.powi(i as i32)).sum();
                t.powi(k as i32 + 1) * poly
            }
        }
    }

    /// The cutoff `η`: 0 on `(-inf, 1/2]`, 1 on `[1, inf)`.
    pub fn cutoff(&self, x: f64) -> f64 {
        self.step(2.0 * x - 1.0)
    }

    pub fn psi(&self, x: f64) -> f64 {
        self.cutoff(x) - self.cutoff(x / 2.0)
    }

    pub fn rho(&self, x: f64) -> f64 {
        let a = x.abs();
        if a <= 0.5 || a >= 2.0 {
            return 0.0;
        }
        let v = self.psi(a) / a;
        if x < 0.0 {
            -v
        } else {
            v
        }
    }

    /// `Σ_{j=0}^{J} 2^{-j} ρ(x / 2^j)`.
    pub fn telescope(&self, x: f64, levels: u32) -> f64 {
        (0..=levels)
            .map(|j| {
                let scale = (j as f64).exp2();
                self.rho(x / scale) / scale
            })
            .sum()
    }

    /// Max of `|telescope(x, J) - 1/x|` over `samples` log-spaced points in
    /// `[1, 2^(J-1)]`.
    pub fn max_telescope_error(&self, levels: u32, samples: usize) -> f64 {
        assert!(levels >= 1 && samples >= 2);
        let top = (levels as f64 - 1.0).max(0.0);
        (0..samples)
            .map(|i| {
                let x = (top * i as f64 / (samples - 1) as f64).exp2();
                (self.telescope(x, levels) - 1.0 / x).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `2^{j-1} < |m| < 2^{j+1}` as an inclusive range of `|m|`.
pub fn piece_support(j: u32) -> (u64, u64) {
    let lo = if j == 0 { 1 } else { (1u64 << (j - 1)) + 1 };
    (lo, (1u64 << (j + 1)) - 1)
}

fn phase(p: i64, xi: f64, q: i64, eta: f64) -> Complex64 {
    let turns = (p as f64 * xi).fract() + (q as f64 * eta).fract();
    Complex64::cis(-std::f64::consts::TAU * turns)
}

/// Weights `w(m) = Σ_{j=jlo}^{jhi} 2^{-j} ρ(m / 2^j)` for `m > 0`; the
/// weight at `-m` is `-w(m)`.
#[derive(Clone, Debug)]
pub struct BandWeights {
    pub jlo: u32,
    pub jhi: u32,
    // (|m|, w) in ascending |m|, zero weights dropped
    weights: Vec<(i64, f64)>,
}

impl BandWeights {
    /// An empty band when `jlo > jhi`.
    pub fn new(kernel: &DyadicKernel, jlo: u32, jhi: u32) -> Self {
        if jlo > jhi {
            return BandWeights {
                jlo,
                jhi,
                weights: Vec::new(),
            };
        }
        let top = piece_support(jhi).1 as usize;
        let mut w = vec![0.0; top + 1];
        for j in jlo..=jhi {
            let scale = (j as f64).exp2();
            let (lo, hi) = piece_support(j);
            for k in lo..=hi {
                w[k as usize] += kernel.rho(k as f64 / scale) / scale;
            }
        }
        let weights = w
            .into_iter()
            .enumerate()
            .skip(1)
            .filter(|&(_, v)| v != 0.0)
            .map(|(k, v)| (k as i64, v))
            .collect();
        BandWeights { jlo, jhi, weights }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Largest `|m|` carrying weight.
    pub fn max_m(&self) -> u64 {
        self.weights.last().map_or(0, |&(k, _)| k as u64)
    }

    /// Table size needed to evaluate the band.
    pub fn required_limit(&self) -> u64 {
        if self.jlo > self.jhi {
            0
        } else {
            1u64 << (self.jhi + 1)
        }
    }

    /// `Σ_m w(m) f(n - P(m)) g(n - Q(m))`, pairing `m` with `-m`.
    pub fn apply(&self, f: &Signal, g: &Signal, p: &ArithFn, q: &ArithFn, n: f64) -> Complex64 {
        let mut acc = Complex64::default();
        for &(k, w) in &self.weights {
            let plus = f.eval(n - p.at(k) as f64) * g.eval(n - q.at(k) as f64);
            let minus = f.eval(n - p.at(-k) as f64) * g.eval(n - q.at(-k) as f64);
            acc += (plus - minus) * w;
        }
        acc
    }

    /// `Σ_m w(m) e^{-2πi(P(m)ξ + Q(m)η)}`.
    pub fn multiplier(&self, p: &ArithFn, q: &ArithFn, xi: f64, eta: f64) -> Complex64 {
        let mut acc = Complex64::default();
        for &(k, w) in &self.weights {
            let d = phase(p.at(k), xi, q.at(k), eta) - phase(p.at(-k), xi, q.at(-k), eta);
            acc += d * w;
        }
        acc
    }

    fn check(&self, p: &ArithFn, q: &ArithFn) -> Result<()> {
        let need = self.required_limit();
        p.require(need)?;
        q.require(need)
    }
}

/// The scale-`j` piece of the transform for a fixed pair `P`, `Q`.
#[derive(Clone, Debug)]
pub struct KernelPiece<'a> {
    pub j: u32,
    p: &'a ArithFn,
    q: &'a ArithFn,
    band: BandWeights,
}

impl<'a> KernelPiece<'a> {
    pub fn new(kernel: &DyadicKernel, j: u32, p: &'a ArithFn, q: &'a ArithFn) -> Result<Self> {
        let band = BandWeights::new(kernel, j, j);
        band.check(p, q)?;
        Ok(KernelPiece { j, p, q, band })
    }

    /// `σ_j(ξ, η)`.
    pub fn sigma(&self, xi: f64, eta: f64) -> Complex64 {
        self.band.multiplier(self.p, self.q, xi, eta)
    }

    /// `T_j(f, g)(n)`.
    pub fn apply(&self, f: &Signal, g: &Signal, n: f64) -> Complex64 {
        self.band.apply(f, g, self.p, self.q, n)
    }

    /// `‖T_j(f, g)‖_{l1}` for compactly supported `f`.
    pub fn l1_norm(&self, f: &CompactSignal, g: &Signal) -> f64 {
        let mut points = std::collections::BTreeSet::new();
        for (s, _) in f.iter() {
            for (k, _) in self.band.iter() {
                points.insert(s + self.p.at(k));
                points.insert(s + self.p.at(-k));
            }
        }
        let f = Signal::Compact(f.clone());
        points
            .into_iter()
            .map(|n| self.apply(&f, g, n as f64).norm())
            .sum()
    }
}

pub fn eval_sigma_j(piece: &KernelPiece<'_>, xi: f64, eta: f64) -> Complex64 {
    piece.sigma(xi, eta)
}

pub fn eval_t_j(piece: &KernelPiece<'_>, f: &Signal, g: &Signal, n: f64) -> Complex64 {
    piece.apply(f, g, n)
}

/// `Σ_{j=0}^{J} T_j(f, g)(n)`.
pub fn partial_sum_t(
    kernel: &DyadicKernel,
    f: &Signal,
    g: &Signal,
    p: &ArithFn,
    q: &ArithFn,
    n: f64,
    levels: u32,
) -> Result<Complex64> {
    let band = BandWeights::new(kernel, 0, levels);
    band.check(p, q)?;
    Ok(band.apply(f, g, p, q, n))
}

/// Validates that scales `0..=levels` fit the tables.
pub fn require_levels(p: &ArithFn, q: &ArithFn, levels: u32) -> Result<()> {
    let need = 1u64 << (levels + 1);
    if need > p.limit().min(q.limit()) {
        return Err(Error::ExceedsLimit {
            needed: need,
            limit: p.limit().min(q.limit()),
        });
    }
    Ok(())
}
