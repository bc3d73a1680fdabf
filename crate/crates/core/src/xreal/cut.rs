//! Dedekind cuts presented by a locating oracle, and the conversions between
//! cuts and reals.

use std::sync::Arc;

use super::{int, RInterval, Rat, Real, RealError};

/// Answer of a locator on `a < b`: `Left` means `a` is in the lower set,
/// `Right` means `b` is in the upper set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

type Locate = dyn Fn(&Rat, &Rat) -> Result<Side, RealError> + Send + Sync;

/// A cut `(L, U)` given by the decision `a < b ⟹ a ∈ L ∨ b ∈ U`.
#[derive(Clone)]
pub struct CutLocator {
    loc: Arc<Locate>,
}

impl CutLocator {
    pub fn new<F>(f: F) -> CutLocator
    where
        F: Fn(&Rat, &Rat) -> Result<Side, RealError> + Send + Sync + 'static,
    {
        CutLocator { loc: Arc::new(f) }
    }

    /// The cut of a rational `q`: `L = (-∞, q)`, `U = (q, ∞)`.
    pub fn at_rat(q: Rat) -> CutLocator {
        CutLocator::new(move |a, _| Ok(if a < &q { Side::Left } else { Side::Right }))
    }

    /// A cut whose lower set is decidable.
    pub fn from_lower<F>(in_lower: F) -> CutLocator
    where
        F: Fn(&Rat) -> bool + Send + Sync + 'static,
    {
        CutLocator::new(move |a, _| Ok(if in_lower(a) { Side::Left } else { Side::Right }))
    }

    pub fn locate(&self, a: &Rat, b: &Rat) -> Result<Side, RealError> {
        if a >= b {
            return Err(RealError::EmptyInterval);
        }
        (self.loc)(a, b)
    }
}

/// Query at a third of the gap: an answer `(c, d)` with `c > a` puts `a`
/// below the real, otherwise `d ≤ a + (b-a)/3 < b` puts `b` above it.
pub fn cut_of_real(x: &Real) -> CutLocator {
    let x = x.clone();
    CutLocator::new(move |a, b| {
        let i = x.approx(&((b - a) / int(3)))?;
        Ok(if i.lo() > a { Side::Left } else { Side::Right })
    })
}

/// Least `k` with `width · (2/3)^k ≤ eps`.
pub fn trisection_count(width: &Rat, eps: &Rat) -> u64 {
    let shrink = Rat::new(2.into(), 3.into());
    let mut w = width.clone();
    let mut k = 0;
    while &w > eps {
        w *= &shrink;
        k += 1;
    }
    k
}

fn trisect(c: &CutLocator, seed: &RInterval, eps: &Rat) -> Result<(RInterval, u64), RealError> {
    let k = trisection_count(&seed.width(), eps);
    let (mut a, mut b) = (seed.lo().clone(), seed.hi().clone());
    for _ in 0..k {
        let third = (&b - &a) / int(3);
        let l = &a + &third;
        let r = &b - &third;
        match c.locate(&l, &r)? {
            Side::Left => a = l,
            Side::Right => b = r,
        }
    }
    Ok((RInterval::new(a, b)?, k))
}

fn check_seed(c: &CutLocator, seed: &RInterval) -> Result<(), RealError> {
    let w = seed.width();
    if c.locate(&(seed.lo() - &w), seed.lo())? == Side::Right {
        return Err(RealError::InvalidSeed(format!("{} is not below the cut", seed.lo())));
    }
    if c.locate(seed.hi(), &(seed.hi() + &w))? == Side::Left {
        return Err(RealError::InvalidSeed(format!("{} is not above the cut", seed.hi())));
    }
    Ok(())
}

/// The real of a cut, by repeated trisection of a seed interval whose
/// endpoints straddle the cut. Each step keeps two thirds of the interval.
pub fn real_of_cut(c: &CutLocator, seed: &RInterval) -> Result<Real, RealError> {
    check_seed(c, seed)?;
    let (c, seed) = (c.clone(), seed.clone());
    Ok(Real::new(move |eps| trisect(&c, &seed, eps).map(|(i, _)| i)))
}

/// One query of [`real_of_cut`], also returning the number of trisection
/// steps taken.
pub fn real_of_cut_traced(c: &CutLocator, seed: &RInterval, eps: &Rat) -> Result<(RInterval, u64), RealError> {
    check_seed(c, seed)?;
    if eps <= &Rat::from_integer(0.into()) {
        return Err(RealError::NonPositiveEps);
    }
    trisect(c, seed, eps)
}
