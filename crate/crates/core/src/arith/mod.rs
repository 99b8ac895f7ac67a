//! Arithmetic function tables and their extensions to nonzero integers.
//!
//! Tables are built by sieving (never by per-element factorisation) and are
//! immutable afterwards. An [`ArithFn`] couples a table with a parity rule so
//! that it is defined on `1 <= |m| <= limit`; `m = 0` is never in the domain.

pub mod cache;
mod sieve;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::{Error, Result};

/// The arithmetic functions this crate knows how to sieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithName {
    /// Euler's totient φ.
    Phi,
    /// Prime counting function π.
    Pi,
    /// Number of positive divisors d.
    Divisors,
    /// Möbius function μ.
    Mobius,
    /// Ω: prime factors counted with multiplicity.
    Omega,
    /// ω: distinct prime factors.
    OmegaDistinct,
}

impl ArithName {
    pub const ALL: [ArithName; 6] = [
        ArithName::Phi,
        ArithName::Pi,
        ArithName::Divisors,
        ArithName::Mobius,
        ArithName::Omega,
        ArithName::OmegaDistinct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ArithName::Phi => "phi",
            ArithName::Pi => "pi",
            ArithName::Divisors => "d",
            ArithName::Mobius => "mu",
            ArithName::Omega => "omega",
            ArithName::OmegaDistinct => "omega_distinct",
        }
    }

    pub fn sieve(self, limit: u64) -> Result<ArithTable> {
        if limit == 0 {
            return Err(Error::ZeroLimit);
        }
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::ExceedsLimit {
                needed: limit,
                limit: MAX_SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let values = match self {
            ArithName::Phi => sieve::totient(n),
            ArithName::Pi => sieve::prime_pi(n),
            ArithName::Divisors => sieve::divisor_count(n),
            ArithName::Mobius => sieve::mobius(n),
            ArithName::Omega => sieve::big_omega(n),
            ArithName::OmegaDistinct => sieve::small_omega(n),
        };
        Ok(ArithTable::from_parts(self, values))
    }

    /// A lower bound `|F(n)| >= minorant(n)` valid for every `n >= 1`, where
    /// one is known.
    pub fn minorant(self) -> Option<Minorant> {
        match self {
            ArithName::Phi => Some(Minorant::SqrtHalf),
            ArithName::Pi => Some(Minorant::PrimeCount),
            _ => None,
        }
    }
}

impl fmt::Display for ArithName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArithName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ArithName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownFunction(s.to_string()))
    }
}

pub fn sieve_totient(limit: u64) -> Result<ArithTable> {
    ArithName::Phi.sieve(limit)
}

pub fn sieve_divisor_count(limit: u64) -> Result<ArithTable> {
    ArithName::Divisors.sieve(limit)
}

pub fn sieve_mobius(limit: u64) -> Result<ArithTable> {
    ArithName::Mobius.sieve(limit)
}

/// Ω(n), with multiplicity. See [`sieve_omega_distinct`] for ω.
pub fn sieve_omega(limit: u64) -> Result<ArithTable> {
    ArithName::Omega.sieve(limit)
}

pub fn sieve_omega_distinct(limit: u64) -> Result<ArithTable> {
    ArithName::OmegaDistinct.sieve(limit)
}

pub fn sieve_prime_pi(limit: u64) -> Result<ArithTable> {
    ArithName::Pi.sieve(limit)
}

/// Values of a named function on `1..=limit`.
#[derive(Clone, Debug)]
pub struct ArithTable {
    name: ArithName,
    // index 0 is an unused sentinel so that values[n] is F(n)
    values: Vec<i64>,
}

impl ArithTable {
    pub(crate) fn from_parts(name: ArithName, values: Vec<i64>) -> Self {
        debug_assert!(values.len() >= 2);
        ArithTable { name, values }
    }

    pub fn name(&self) -> ArithName {
        self.name
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// F(n) for `1 <= n <= limit`.
    pub fn get(&self, n: u64) -> Option<i64> {
        if n == 0 {
            return None;
        }
        self.values.get(n as usize).copied()
    }

    /// Values for `n = 1..=limit`, in order.
    pub fn values(&self) -> &[i64] {
        &self.values[1..]
    }
}

impl std::ops::Index<u64> for ArithTable {
    type Output = i64;

    fn index(&self, n: u64) -> &i64 {
        assert!(n >= 1, "arithmetic tables start at n = 1");
        &self.values[n as usize]
    }
}

/// How a table on positive integers extends to negative arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `F(-m) = F(m)`.
    Even,
    /// `F(-m) = -F(m)`.
    SignOdd,
    /// Values on negative arguments are specified directly.
    Raw,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::SignOdd => "signodd",
            Parity::Raw => "raw",
        }
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "signodd" | "sign-odd" | "odd" => Ok(Parity::SignOdd),
            "raw" => Ok(Parity::Raw),
            other => Err(Error::InvalidParameter(format!("unknown parity `{other}`"))),
        }
    }
}

/// Growth floor `|F(m)| >= bound(|m|)`, non-decreasing in `|m|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Minorant {
    /// `sqrt(n / 2)`, a floor for φ(n).
    SqrtHalf,
    /// `n / ln n` for `n >= 17` and 0 below, a floor for π(n).
    PrimeCount,
    /// `n` itself.
    Linear,
}

impl Minorant {
    pub fn at(self, n: f64) -> f64 {
        match self {
            Minorant::SqrtHalf => (n / 2.0).max(0.0).sqrt(),
            Minorant::PrimeCount => {
                if n >= 17.0 {
                    n / n.ln()
                } else {
                    0.0
                }
            }
            Minorant::Linear => n.max(0.0),
        }
    }

    /// Constants `(c, a, t0)` with `bound(t) >= c * t^a` for all `t >= t0`.
    pub fn power_floor(self) -> (f64, f64, f64) {
        match self {
            Minorant::SqrtHalf => (std::f64::consts::FRAC_1_SQRT_2, 0.5, 1.0),
            // n / ln n >= sqrt(n) whenever sqrt(n) >= ln n, i.e. always.
            Minorant::PrimeCount => (1.0, 0.5, 17.0),
            Minorant::Linear => (1.0, 1.0, 0.0),
        }
    }
}

/// The small directly specified functions used as reference cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RawName {
    Identity,
    NegIdentity,
    Square,
    Zero,
}

impl RawName {
    pub const ALL: [RawName; 4] = [
        RawName::Identity,
        RawName::NegIdentity,
        RawName::Square,
        RawName::Zero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RawName::Identity => "identity",
            RawName::NegIdentity => "negidentity",
            RawName::Square => "square",
            RawName::Zero => "zero",
        }
    }

    pub fn eval(self, m: i64) -> i64 {
        match self {
            RawName::Identity => m,
            RawName::NegIdentity => -m,
            RawName::Square => m * m,
            RawName::Zero => 0,
        }
    }

    fn minorant(self) -> Option<Minorant> {
        match self {
            RawName::Identity | RawName::NegIdentity | RawName::Square => Some(Minorant::Linear),
            RawName::Zero => None,
        }
    }
}

/// Largest limit [`ArithName::sieve`] accepts; factor tables are `u32`.
pub const MAX_SIEVE_LIMIT: u64 = 1 << 31;

/// A parsed `NAME[:PARITY]` selector such as `phi:even` or `square`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnSpec {
    Table(ArithName, Parity),
    Raw(RawName),
}

impl FnSpec {
    pub fn build(self, limit: u64) -> Result<ArithFn> {
        match self {
            FnSpec::Table(name, parity) => {
                ArithFn::from_table(Arc::new(name.sieve(limit)?), parity)
            }
            FnSpec::Raw(raw) => ArithFn::builtin(raw, limit),
        }
    }

    /// Like [`FnSpec::build`], reusing `table` when it matches.
    pub fn build_with(self, table: Arc<ArithTable>) -> Result<ArithFn> {
        match self {
            FnSpec::Table(name, parity) if table.name() == name => {
                ArithFn::from_table(table, parity)
            }
            _ => self.build(table.limit()),
        }
    }
}

impl FromStr for FnSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, parity) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p.parse::<Parity>()?)),
            None => (s, None),
        };
        if let Some(raw) = RawName::ALL.into_iter().find(|r| r.as_str() == name) {
            return match parity {
                None | Some(Parity::Raw) => Ok(FnSpec::Raw(raw)),
                Some(p) => Err(Error::InvalidParameter(format!(
                    "`{name}` is a raw function and cannot take parity `{}`",
                    p.as_str()
                ))),
            };
        }
        let table: ArithName = name.parse()?;
        match parity.unwrap_or(Parity::Even) {
            Parity::Raw => Err(Error::InvalidParameter(format!(
                "`{name}` is a table function; use even or signodd"
            ))),
            p => Ok(FnSpec::Table(table, p)),
        }
    }
}

impl fmt::Display for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Table(n, p) => write!(f, "{}:{}", n.as_str(), p.as_str()),
            FnSpec::Raw(r) => write!(f, "{}:raw", r.as_str()),
        }
    }
}

/// An arithmetic function on `1 <= |m| <= limit`.
#[derive(Clone, Debug)]
pub struct ArithFn {
    label: String,
    parity: Parity,
    // index |m|; index 0 unused
    positive: Arc<[i64]>,
    negative: Option<Arc<[i64]>>,
    minorant: Option<Minorant>,
}

impl ArithFn {
    pub fn from_table(table: Arc<ArithTable>, parity: Parity) -> Result<Self> {
        if parity == Parity::Raw {
            return Err(Error::InvalidParameter(
                "raw parity needs explicit values for negative arguments".into(),
            ));
        }
        Ok(ArithFn {
            label: format!("{}:{}", table.name().as_str(), parity.as_str()),
            parity,
            positive: table.values.clone().into(),
            negative: None,
            minorant: table.name().minorant(),
        })
    }

    pub fn even(table: Arc<ArithTable>) -> Self {
        Self::from_table(table, Parity::Even).expect("even parity is valid")
    }

    pub fn sign_odd(table: Arc<ArithTable>) -> Self {
        Self::from_table(table, Parity::SignOdd).expect("sign-odd parity is valid")
    }

    /// Tabulate `f` on `1 <= |m| <= limit`.
    pub fn raw(label: impl Into<String>, limit: u64, f: impl Fn(i64) -> i64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::ZeroLimit);
        }
        let side = |sign: i64| -> Arc<[i64]> {
            std::iter::once(0)
                .chain((1..=limit as i64).map(|m| f(sign * m)))
                .collect()
        };
        Ok(ArithFn {
            label: label.into(),
            parity: Parity::Raw,
            positive: side(1),
            negative: Some(side(-1)),
            minorant: None,
        })
    }

    pub fn builtin(name: RawName, limit: u64) -> Result<Self> {
        let mut f = Self::raw(format!("{}:raw", name.as_str()), limit, |m| name.eval(m))?;
        f.minorant = name.minorant();
        Ok(f)
    }

    /// Attach a growth floor for `|F(m)|`. The caller vouches for it.
    pub fn with_minorant(mut self, minorant: Minorant) -> Self {
        self.minorant = Some(minorant);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn limit(&self) -> u64 {
        (self.positive.len() - 1) as u64
    }

    pub fn minorant(&self) -> Option<Minorant> {
        self.minorant
    }

    /// F(m) with the domain checked.
    pub fn eval_signed(&self, m: i64) -> Result<i64> {
        let limit = self.limit();
        if m == 0 || m.unsigned_abs() > limit {
            return Err(Error::OutOfDomain { m, limit });
        }
        Ok(self.at(m))
    }

    /// F(m) for `1 <= |m| <= limit`; panics outside the domain.
    #[inline]
    pub fn at(&self, m: i64) -> i64 {
        debug_assert!(m != 0);
        let k = m.unsigned_abs() as usize;
        if m > 0 {
            return self.positive[k];
        }
        match self.parity {
            Parity::Even => self.positive[k],
            Parity::SignOdd => -self.positive[k],
            Parity::Raw => self
                .negative
                .as_ref()
                .expect("raw functions carry negatives")[k],
        }
    }

    /// Error unless `|m| <= needed` lies inside the table.
    pub fn require(&self, needed: u64) -> Result<()> {
        if needed > self.limit() {
            Err(Error::ExceedsLimit {
                needed,
                limit: self.limit(),
            })
        } else {
            Ok(())
        }
    }
}
