//! Input sequences `f`, `g` for the transform.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

/// A complex sequence with finite support on the integers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompactSignal {
    values: BTreeMap<i64, Complex64>,
}

impl CompactSignal {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Zero entries are dropped so that the support is exact.
    pub fn new(values: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        CompactSignal {
            values: values
                .into_iter()
                .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    /// Real values placed at `start, start + 1, ...`.
    pub fn from_real(start: i64, values: &[f64]) -> Self {
        Self::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (start + i as i64, Complex64::new(v, 0.0))),
        )
    }

    /// Indicator of `{at}` (unit l2 norm).
    pub fn indicator(at: i64) -> Self {
        Self::from_real(at, &[1.0])
    }

    /// Gaussian real and imaginary parts on `lo..=hi`, normalised to unit l2.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        let draw = |rng: &mut R| -> f64 {
            // Box-Muller keeps this independent of rand_distr
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            let v: f64 = rng.gen();
            (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
        };
        let raw: Vec<(i64, Complex64)> = (lo..=hi)
            .map(|k| (k, Complex64::new(draw(rng), draw(rng))))
            .collect();
        Self::new(raw).normalized()
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.values.get(&n).copied().unwrap_or_default()
    }

    /// Value at a real argument; zero off the integers.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x.fract() != 0.0 || x.abs() > i64::MAX as f64 / 2.0 {
            return Complex64::default();
        }
        self.get(x as i64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Smallest and largest support point.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((
            *self.values.keys().next()?,
            *self.values.keys().next_back()?,
        ))
    }

    pub fn contains(&self, n: i64) -> bool {
        self.values.contains_key(&n)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.values
            .values()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn normalized(&self) -> Self {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / norm, 0.0))
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        Self::new(self.iter().map(|(k, v)| (k, alpha * v)))
    }

    /// `alpha * self + other`.
    pub fn axpy(&self, alpha: Complex64, other: &CompactSignal) -> Self {
        let mut out = other.values.clone();
        for (k, v) in self.iter() {
            *out.entry(k).or_default() += alpha * v;
        }
        Self::new(out)
    }
}

/// `amplitude / (((x - center) / scale)^2 + 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyProfile {
    pub center: f64,
    pub scale: f64,
    pub amplitude: f64,
}

impl Default for CauchyProfile {
    fn default() -> Self {
        CauchyProfile {
            center: 0.0,
            scale: 1.0,
            amplitude: 1.0,
        }
    }
}

impl CauchyProfile {
    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.center) / self.scale;
        self.amplitude / (t * t + 1.0)
    }

    /// Upper bound for `|f(x)|` over all `x` at distance `>= dist` from the
    /// center.
    pub fn majorant(&self, dist: f64) -> f64 {
        let t = dist.max(0.0) / self.scale;
        self.amplitude.abs() / (t * t + 1.0)
    }

    /// l2 norm of the samples on the integers.
    pub fn l2_norm(&self) -> f64 {
        let c = self.center.round() as i64;
        let span = (self.scale.abs() * 1e4).max(1e5) as i64;
        let head: f64 = (c - span..=c + span)
            .map(|n| self.eval(n as f64).powi(2))
            .sum();
        // tail: sum over |n - c| > span of A^2 s^4 / t^4 <= 2 A^2 s^4 / (3 (span-1)^3)
        let s = self.scale.abs();
        let tail = 2.0 * self.amplitude.powi(2) * s.powi(4) / (3.0 * ((span - 1) as f64).powi(3));
        (head + tail).sqrt()
    }

    /// Rescaled to unit l2 norm on the integers.
    pub fn normalized(&self) -> Self {
        CauchyProfile {
            amplitude: self.amplitude / self.l2_norm(),
            ..*self
        }
    }
}

/// An input sequence: finitely supported, or the analytic Cauchy profile.
#[derive(Clone, Debug, PartialEq)]
pub enum Signal {
    Compact(CompactSignal),
    Cauchy(CauchyProfile),
}

impl Signal {
    pub fn cauchy() -> Self {
        Signal::Cauchy(CauchyProfile::default())
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Signal::Compact(c) => c.eval(x),
            Signal::Cauchy(p) => Complex64::new(p.eval(x), 0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Signal::Compact(c) => c.is_zero(),
            Signal::Cauchy(p) => p.amplitude == 0.0,
        }
    }

    pub fn sup_abs(&self) -> f64 {
        match self {
            Signal::Compact(c) => c.sup_abs(),
            Signal::Cauchy(p) => p.amplitude.abs(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        match self {
            Signal::Compact(c) => c.l2_norm(),
            Signal::Cauchy(p) => p.l2_norm(),
        }
    }

    pub fn as_compact(&self) -> Option<&CompactSignal> {
        match self {
            Signal::Compact(c) => Some(c),
            Signal::Cauchy(_) => None,
        }
    }
}

impl From<CompactSignal> for Signal {
    fn from(c: CompactSignal) -> Self {
        Signal::Compact(c)
    }
}

impl From<CauchyProfile> for Signal {
    fn from(p: CauchyProfile) -> Self {
        Signal::Cauchy(p)
    }
}
