//! Limits of sequences and series with explicit moduli, the exponential,
//! and limits of functions on the punctured line at zero.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ceil_u64, int, inv, real_of_rat, RInterval, Rat, Real, RealError};

type Terms = dyn Fn(u64) -> Result<Real, RealError> + Send + Sync;
type Modulus = dyn Fn(&Rat) -> Result<u64, RealError> + Send + Sync;

/// A sequence of reals with a Cauchy modulus: for all `m, n ≥ modulus(δ)`,
/// `|x_m - x_n| ≤ δ`.
#[derive(Clone)]
pub struct ConvergentSeq {
    terms: Arc<Terms>,
    modulus: Arc<Modulus>,
}

impl ConvergentSeq {
    pub fn new<T, M>(terms: T, modulus: M) -> ConvergentSeq
    where
        T: Fn(u64) -> Result<Real, RealError> + Send + Sync + 'static,
        M: Fn(&Rat) -> Result<u64, RealError> + Send + Sync + 'static,
    {
        ConvergentSeq { terms: Arc::new(terms), modulus: Arc::new(modulus) }
    }

    pub fn term(&self, n: u64) -> Result<Real, RealError> {
        (self.terms)(n)
    }

    pub fn modulus(&self, delta: &Rat) -> Result<u64, RealError> {
        (self.modulus)(delta)
    }
}

/// The limit. With `N = modulus(ε/4)` the limit lies within `ε/4` of `x_N`,
/// so `x_N`'s answer at `ε/4` widened by `3ε/8` on each side contains it
/// and has width at most `ε`.
pub fn limit(seq: &ConvergentSeq) -> Real {
    let seq = seq.clone();
    Real::new(move |eps| {
        let quarter = eps / int(4);
        let n = seq.modulus(&quarter)?;
        let i = seq.term(n)?.approx(&quarter)?;
        Ok(i.widen(&(eps * Rat::new(3.into(), 8.into()))))
    })
}

/// Least `N ≤ cap` with `bound(N) ≤ target`, for a non-increasing bound.
fn least_index<F: Fn(u64) -> Rat>(bound: &F, target: &Rat, cap: u64) -> Option<u64> {
    if &bound(0) <= target {
        return Some(0);
    }
    let mut hi = 1u64;
    while &bound(hi) > target {
        if hi >= cap {
            return None;
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    // bound(lo) > target, bound(hi) <= target
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if &bound(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

const INDEX_CAP: u64 = 1 << 24;

/// `Σ a_k` given `tail_bound(N) ≥ sup_m |s_m - s_N|`, non-increasing to
/// zero, where `s_N = a_0 + .. + a_N`. The modulus at `δ` is the least `N`
/// with `tail_bound(N) ≤ δ/2`.
pub fn sum_series<T, B>(terms: T, tail_bound: B) -> Result<Real, RealError>
where
    T: Fn(u64) -> Result<Real, RealError> + Send + Sync + 'static,
    B: Fn(u64) -> Rat + Send + Sync + 'static,
{
    let terms = Arc::new(terms);
    let bound = Arc::new(tail_bound);
    if least_index(&*bound, &Rat::one(), INDEX_CAP).is_none() {
        return Err(RealError::Modulus("tail bound never drops below 1".into()));
    }
    let t = terms.clone();
    let seq = ConvergentSeq::new(
        move |n| Ok(partial_sum(t.clone(), n)),
        move |delta| {
            least_index(&*bound, &(delta / int(2)), INDEX_CAP)
                .ok_or_else(|| RealError::Modulus(format!("tail bound not below {} by index {INDEX_CAP}", delta / int(2))))
        },
    );
    Ok(limit(&seq))
}

/// `a_0 + .. + a_n`, each term queried at `ε/(n+1)`.
fn partial_sum(terms: Arc<Terms>, n: u64) -> Real {
    Real::new(move |eps| {
        let e = eps / Rat::from_integer(BigInt::from(n + 1));
        let (mut lo, mut hi) = (Rat::zero(), Rat::zero());
        for k in 0..=n {
            let i = terms(k)?.approx(&e)?;
            lo += i.lo();
            hi += i.hi();
        }
        RInterval::new(lo, hi)
    })
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Tail of the exponential series at `|q| ≤ b`:
/// `2 b^(N+1)/(N+1)!` once `N + 2 ≥ 2b`, never above `3^b`.
fn exp_tail(b: u64, n: u64) -> Rat {
    let crude = Rat::from_integer(num_traits::pow(BigInt::from(3), b as usize));
    if n + 2 >= 2 * b {
        let t = Rat::new(
            BigInt::from(2) * num_traits::pow(BigInt::from(b), (n + 1) as usize),
            factorial(n + 1),
        );
        t.min(crude)
    } else {
        crude
    }
}

/// `e^q` for rational `q`, summing `q^n / n!` exactly.
pub fn exp_rat(q: &Rat) -> Real {
    let b = ceil_u64(&q.abs()).max(1);
    let q = q.clone();
    sum_series(
        move |n| Ok(real_of_rat(q.pow(n as i32) / Rat::from_integer(factorial(n)))),
        move |n| exp_tail(b, n),
    )
    .expect("exponential tail reaches every precision")
}

/// `e^x`. With `|x| ≤ B` from the answer at precision 1, `x` is queried
/// tightly enough that `e` grows by under `ε/2` across its interval, and
/// the endpoints are evaluated at `ε/4` each.
pub fn exp(x: &Real) -> Real {
    let x = x.clone();
    Real::new(move |eps| {
        let b = ceil_u64(&x.approx(&Rat::one())?.magnitude()) + 1;
        let growth = Rat::from_integer(num_traits::pow(BigInt::from(3), b as usize));
        let eta = (eps / (int(4) * growth)).min(Rat::one());
        let i = x.approx(&eta)?;
        let quarter = eps / int(4);
        let lo = exp_rat(i.lo()).approx(&quarter)?;
        let hi = exp_rat(i.hi()).approx(&quarter)?;
        RInterval::new(lo.lo().clone(), hi.hi().clone())
    })
}

/// The limit at `0` of `f` on the punctured line, given `δ(ε)` with
/// `0 < |x| < δ(ε) ⟹ |f(x) - y| < ε`. `f` receives a point and an
/// apartness witness for it.
pub fn limit_at_zero<F, D>(f: F, limit_modulus: D) -> Real
where
    F: Fn(&Rat, &Rat) -> Result<Real, RealError> + Send + Sync + 'static,
    D: Fn(&Rat) -> Rat + Send + Sync + 'static,
{
    Real::new(move |eps| {
        let quarter = eps / int(4);
        let delta = limit_modulus(&quarter);
        if !delta.is_positive() {
            return Err(RealError::Modulus("limit modulus must be positive".into()));
        }
        let q = &delta / int(2);
        let apart = &q / int(2);
        let i = f(&q, &apart)?.approx(&(eps / int(2)))?;
        Ok(i.widen(&quarter))
    })
}

/// `x · (1/x)` on the punctured line, as used for limits at zero.
pub fn times_inverse(x: &Rat, apart: &Rat) -> Result<Real, RealError> {
    let r = real_of_rat(x.clone());
    Ok(super::mul(&r, &inv(&r, apart)?))
}
