//! Total boundedness and compactness of closed rational intervals, and a
//! grid test for uniform convergence.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ceil_u64, int, RInterval, Rat, Real, RealError};

/// `⌈w/ε⌉ + 1` evenly spaced points from `lo` to `hi`. Every point of the
/// closed interval is within `ε/2` of one of them.
pub fn epsilon_net(domain: &RInterval, eps: &Rat) -> Result<Vec<Rat>, RealError> {
    if !eps.is_positive() {
        return Err(RealError::NonPositiveEps);
    }
    let w = domain.width();
    let k = ceil_u64(&(&w / eps)).max(1);
    let step = w / Rat::from_integer(BigInt::from(k));
    Ok((0..=k).map(|i| domain.lo() + &step * Rat::from_integer(BigInt::from(i))).collect())
}

/// Greedy selection, left to right, of open intervals covering the closed
/// domain. At each step the member reaching furthest right among those
/// strictly containing the current point is taken. If no member contains
/// the point, that point is returned as the uncovered certificate.
pub fn finite_subcover(domain: &RInterval, cover: &[RInterval]) -> Result<Vec<RInterval>, Rat> {
    let mut reach = domain.lo().clone();
    let mut picked = Vec::new();
    loop {
        let best = cover.iter().filter(|i| i.contains(&reach)).max_by(|a, b| a.hi().cmp(b.hi()));
        match best {
            None => return Err(reach),
            Some(i) => {
                picked.push(i.clone());
                reach = i.hi().clone();
                if &reach > domain.hi() {
                    return Ok(picked);
                }
            }
        }
    }
}

/// Independent check that a list of open intervals covers the closed
/// domain: sort by left end and walk the chain, demanding each link
/// overlap strictly. Returns the first uncovered point otherwise.
pub fn certify_coverage(domain: &RInterval, intervals: &[RInterval]) -> Result<(), Rat> {
    let mut v: Vec<&RInterval> = intervals.iter().collect();
    v.sort_by(|a, b| a.lo().cmp(b.lo()));
    // everything left of `reach` is covered, `reach` itself not yet
    let mut reach = domain.lo().clone();
    for i in v {
        if &reach > domain.hi() {
            break;
        }
        if i.lo() >= &reach {
            return Err(reach);
        }
        if i.hi() > &reach {
            reach = i.hi().clone();
        }
    }
    if &reach > domain.hi() {
        Ok(())
    } else {
        Err(reach)
    }
}

/// Outcome of [`uniform_convergence_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniformVerdict {
    /// Every probed `(ε, x, n)` was certified within `ε`, except `undecided`
    /// cases where the approximations could settle neither way. This only
    /// covers the grid.
    Verified { checked: usize, undecided: usize },
    /// `|f(n, x) - f(N, x)| ≥ ε` with `N = modulus(ε)`, certified by a
    /// separation of the two approximations.
    Refuted { eps: Rat, x: Rat, n: u64, big_n: u64, separation: Rat },
}

const REFINE_ROUNDS: u32 = 4;

/// Test the uniform Cauchy condition for `n ↦ f(n, ·)` at each `ε` in
/// `eps_values`: with `N = modulus(ε)`, for each grid point `x` and each
/// probe `n ≥ N`, decide whether `|f(n, x) - f(N, x)| < ε`. The refuter is
/// sound; a `Verified` answer is limited to the grid and probes.
pub fn uniform_convergence_check<F, M>(
    family: F,
    domain: &RInterval,
    modulus: M,
    grid_eps: &Rat,
    probe_n: &[u64],
    eps_values: &[Rat],
) -> Result<UniformVerdict, RealError>
where
    F: Fn(u64, &Rat) -> Result<Real, RealError>,
    M: Fn(&Rat) -> u64,
{
    let grid = epsilon_net(domain, grid_eps)?;
    let (mut checked, mut undecided) = (0, 0);
    for eps in eps_values {
        if !eps.is_positive() {
            return Err(RealError::NonPositiveEps);
        }
        let big_n = modulus(eps);
        for x in &grid {
            let base = family(big_n, x)?;
            for &n in probe_n.iter().filter(|&&n| n >= big_n) {
                let other = family(n, x)?;
                let mut prec = eps / int(8);
                let mut decided = false;
                for _ in 0..REFINE_ROUNDS {
                    let a = base.approx(&prec)?;
                    let b = other.approx(&prec)?;
                    let sep = a.separation(&b);
                    if &sep >= eps {
                        return Ok(UniformVerdict::Refuted { eps: eps.clone(), x: x.clone(), n, big_n, separation: sep });
                    }
                    let far = (a.hi() - b.lo()).max(b.hi() - a.lo());
                    if &far < eps {
                        decided = true;
                        break;
                    }
                    prec /= int(8);
                }
                if decided {
                    checked += 1;
                } else {
                    undecided += 1;
                }
            }
        }
    }
    Ok(UniformVerdict::Verified { checked, undecided })
}

/// The cover of `[0, 1]` by open balls of radius `ε` centred on an `ε/4`
/// mesh of `[-ε, 1 + ε]`.
pub fn ball_cover(eps: &Rat) -> Result<Vec<RInterval>, RealError> {
    if !eps.is_positive() {
        return Err(RealError::NonPositiveEps);
    }
    let outer = RInterval::new(-eps.clone(), int(1) + eps)?;
    let centres = epsilon_net(&outer, &(eps / int(4)))?;
    centres.iter().map(|c| RInterval::new(c - eps, c + eps)).collect()
}
