//! Exact real numbers as Dedekind filters on the rationals.
//!
//! A [`Real`] answers every precision query `ε > 0` with an open rational
//! interval of width at most `ε`; all answers overlap. The filter of sets
//! containing some answer is a regular Cauchy filter on `ℚ`, and every
//! operation here is an interval computation carrying an explicit modulus.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub mod compact;
pub mod cut;
pub mod expr;
pub mod extnat;
pub mod limits;

pub use compact::{ball_cover, certify_coverage, epsilon_net, finite_subcover, uniform_convergence_check, UniformVerdict};
pub use cut::{cut_of_real, real_of_cut, real_of_cut_traced, trisection_count, CutLocator, Side};
pub use limits::{exp, exp_rat, limit, limit_at_zero, sum_series, ConvergentSeq};

pub type Rat = BigRational;

/// `p / q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(k: i64) -> Rat {
    Rat::from_integer(BigInt::from(k))
}

/// `10^-k`.
pub fn ten_pow_neg(k: u32) -> Rat {
    Rat::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize))
}

/// Parse `p/q`, a decimal such as `-0.125`, or an integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", if whole.is_empty() { "0" } else { whole }, frac).parse().ok()?;
    let r = Rat::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
    Some(if neg { -r } else { r })
}

/// Smallest integer `≥ r`, as `u64` (saturating, negatives give 0).
pub fn ceil_u64(r: &Rat) -> u64 {
    let c = r.ceil().to_integer();
    if c.is_negative() {
        0
    } else {
        c.to_u64().unwrap_or(u64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("precision must be positive")]
    NonPositiveEps,
    #[error("interval endpoints must satisfy lo < hi")]
    EmptyInterval,
    #[error("apartness fails: approximation {interval} meets (-{delta}, {delta})")]
    NotApart { interval: RInterval, delta: Rat },
    #[error("no apartness witness found down to {0}")]
    ApartnessNotFound(Rat),
    #[error("seed interval does not straddle the cut: {0}")]
    InvalidSeed(String),
    #[error("modulus failed: {0}")]
    Modulus(String),
    #[error("approximation broke the real invariant: {0}")]
    Invariant(String),
    #[error("{0}")]
    Eval(String),
}

/// An open interval `(lo, hi)` with `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RInterval {
    lo: Rat,
    hi: Rat,
}

impl RInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<RInterval, RealError> {
        if lo < hi {
            Ok(RInterval { lo, hi })
        } else {
            Err(RealError::EmptyInterval)
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    /// Strict membership in the open interval.
    pub fn contains(&self, q: &Rat) -> bool {
        &self.lo < q && q < &self.hi
    }

    pub fn contains_closed(&self, q: &Rat) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn overlaps(&self, other: &RInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn is_within(&self, other: &RInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &RInterval) -> RInterval {
        RInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Distance between the closed intervals, zero when they meet.
    pub fn separation(&self, other: &RInterval) -> Rat {
        let a = &other.lo - &self.hi;
        let b = &self.lo - &other.hi;
        a.max(b).max(Rat::zero())
    }

    /// Largest absolute value of an endpoint.
    pub fn magnitude(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn widen(&self, r: &Rat) -> RInterval {
        RInterval { lo: &self.lo - r, hi: &self.hi + r }
    }
}

impl fmt::Display for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

impl fmt::Debug for RInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

type Approx = dyn Fn(&Rat) -> Result<RInterval, RealError> + Send + Sync;

/// A real number, presented by its precision queries.
#[derive(Clone)]
pub struct Real {
    approx: Arc<Approx>,
}

impl Real {
    /// Wrap a query function. Answers are checked for the width bound on
    /// every call.
    pub fn new<F>(f: F) -> Real
    where
        F: Fn(&Rat) -> Result<RInterval, RealError> + Send + Sync + 'static,
    {
        Real { approx: Arc::new(f) }
    }

    pub fn approx(&self, eps: &Rat) -> Result<RInterval, RealError> {
        if !eps.is_positive() {
            return Err(RealError::NonPositiveEps);
        }
        let i = (self.approx)(eps)?;
        if &i.width() > eps {
            return Err(RealError::Invariant(format!("width {} exceeds {}", i.width(), eps)));
        }
        Ok(i)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.approx(&ten_pow_neg(6)) {
            Ok(i) => write!(f, "Real{i}"),
            Err(e) => write!(f, "Real<{e}>"),
        }
    }
}

/// `(q - ε/3, q + ε/3)`.
pub fn real_of_rat(q: Rat) -> Real {
    Real::new(move |eps| {
        let r = eps / int(3);
        RInterval::new(&q - &r, &q + &r)
    })
}

pub fn add(x: &Real, y: &Real) -> Real {
    let (x, y) = (x.clone(), y.clone());
    Real::new(move |eps| {
        let half = eps / int(2);
        let a = x.approx(&half)?;
        let b = y.approx(&half)?;
        RInterval::new(&a.lo + &b.lo, &a.hi + &b.hi)
    })
}

pub fn neg(x: &Real) -> Real {
    let x = x.clone();
    Real::new(move |eps| {
        let a = x.approx(eps)?;
        RInterval::new(-&a.hi, -&a.lo)
    })
}

pub fn sub(x: &Real, y: &Real) -> Real {
    add(x, &neg(y))
}

/// Product hull of two rational intervals.
pub fn interval_mul(a: &RInterval, b: &RInterval) -> Result<RInterval, RealError> {
    let ps = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
    let lo = ps.iter().min().expect("four products").clone();
    let hi = ps.iter().max().expect("four products").clone();
    RInterval::new(lo, hi)
}

/// Magnitude bounds come from the answers at precision 1; each factor is
/// then queried at `ε / (2 (B + 1))` where `B` bounds the other factor.
pub fn mul(x: &Real, y: &Real) -> Real {
    let (x, y) = (x.clone(), y.clone());
    Real::new(move |eps| {
        let one = Rat::one();
        let bx = x.approx(&one)?.magnitude();
        let by = y.approx(&one)?.magnitude();
        let ex = (eps / (int(2) * (&by + &one))).min(one.clone());
        let ey = (eps / (int(2) * (&bx + &one))).min(one.clone());
        interval_mul(&x.approx(&ex)?, &y.approx(&ey)?)
    })
}

/// Certify `x ∉ (-δ, δ)` from the answer at precision `δ`. Returns the sign.
fn apart_sign(x: &Real, delta: &Rat) -> Result<bool, RealError> {
    let a = x.approx(delta)?;
    if &a.lo >= delta {
        Ok(true)
    } else if a.hi <= -delta.clone() {
        Ok(false)
    } else {
        Err(RealError::NotApart { interval: a, delta: delta.clone() })
    }
}

/// `1/x`, given a witness `δ` with `x` outside `(-δ, δ)`.
///
/// The answer at `ε` is the reciprocal of `x`'s answer at `εδ²/(1+εδ)`,
/// clipped to the side of `δ` that the witness certifies.
pub fn inv(x: &Real, delta: &Rat) -> Result<Real, RealError> {
    if !delta.is_positive() {
        return Err(RealError::NonPositiveEps);
    }
    let positive = apart_sign(x, delta)?;
    let (x, delta) = (x.clone(), delta.clone());
    Ok(Real::new(move |eps| {
        let eta = eps * &delta * &delta / (Rat::one() + eps * &delta);
        let a = x.approx(&eta)?;
        if positive {
            let lo = a.lo.clone().max(delta.clone());
            RInterval::new(a.hi.recip(), lo.recip())
        } else {
            let hi = a.hi.clone().min(-delta.clone());
            RInterval::new(hi.recip(), a.lo.recip())
        }
    }))
}

/// Search `δ = 1, 1/2, 1/4, ...` down to `floor` for an apartness witness.
/// Failure says nothing about whether `x` is zero.
pub fn find_apartness(x: &Real, floor: &Rat) -> Result<Rat, RealError> {
    let mut delta = Rat::one();
    while &delta >= floor {
        if apart_sign(x, &delta).is_ok() {
            return Ok(delta);
        }
        delta /= int(2);
    }
    Err(RealError::ApartnessNotFound(floor.clone()))
}

/// Round `q` to `digits` decimal places, to nearest.
pub fn round_decimal(q: &Rat, digits: u32) -> Rat {
    let scale = Rat::from_integer(num_traits::pow(BigInt::from(10), digits as usize));
    (q * &scale).round() / scale
}

/// Render an interval as `c ± r` with `digits` decimals, rounding the
/// centre to nearest and the radius up so that `[c - r, c + r]` contains it.
pub fn format_interval(i: &RInterval, digits: u32) -> String {
    let c = round_decimal(&i.midpoint(), digits);
    let spread = (&i.hi - &c).max(&c - &i.lo);
    let scale = Rat::from_integer(num_traits::pow(BigInt::from(10), digits as usize));
    let r = (&spread * &scale).ceil() / &scale;
    format!("{} ± {}", decimal_string(&c, digits), decimal_string(&r, digits))
}

/// Exact decimal rendering of a rational with a terminating expansion of at
/// most `digits` places.
pub fn decimal_string(q: &Rat, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = (q * Rat::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let (whole, frac) = scaled.abs().div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&whole.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits as usize));
    }
    s
}
