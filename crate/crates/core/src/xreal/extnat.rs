//! Extended naturals: binary sequences with at most one `1`, the completion
//! of `ℕ` under the tail covers `{{0}, .., {N-1}, [N, ∞)}`.

use std::fmt;
use std::sync::Arc;

use super::limits::{limit, ConvergentSeq};
use super::{Real, RealError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    /// The `k`-th digit of the sequence.
    pub fn digit(self, k: u64) -> bool {
        self == ExtNat::Fin(k)
    }

    pub fn digits(self, len: usize) -> Vec<bool> {
        (0..len as u64).map(|k| self.digit(k)).collect()
    }

    /// Read a digit prefix. Only the first `1` matters; a second one is an
    /// error. An all-zero prefix reads as `Inf`, which is exact up to the
    /// prefix length.
    pub fn from_digits(prefix: &[bool]) -> Result<ExtNat, String> {
        let mut ones = prefix.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64);
        match (ones.next(), ones.next()) {
            (None, _) => Ok(ExtNat::Inf),
            (Some(n), None) => Ok(ExtNat::Fin(n)),
            (Some(a), Some(b)) => Err(format!("digits {a} and {b} are both set")),
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "∞"),
        }
    }
}

/// The member a Cauchy filter picks from the `N`-th tail cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Point(u64),
    Tail,
}

type Choose = dyn Fn(u64) -> Choice + Send + Sync;

/// A Cauchy filter on `ℕ` for the tail covers, given by its choice from
/// each cover `{{0}, .., {N-1}, [N, ∞)}`.
#[derive(Clone)]
pub struct NatFilter {
    choose: Arc<Choose>,
}

impl NatFilter {
    pub fn new<F: Fn(u64) -> Choice + Send + Sync + 'static>(f: F) -> NatFilter {
        NatFilter { choose: Arc::new(f) }
    }

    /// Neighbourhood filter of `n`.
    pub fn principal(n: u64) -> NatFilter {
        NatFilter::new(move |big_n| if n < big_n { Choice::Point(n) } else { Choice::Tail })
    }

    /// The filter of tails.
    pub fn tail() -> NatFilter {
        NatFilter::new(|_| Choice::Tail)
    }

    pub fn of_ext(e: ExtNat) -> NatFilter {
        match e {
            ExtNat::Fin(n) => NatFilter::principal(n),
            ExtNat::Inf => NatFilter::tail(),
        }
    }

    pub fn choose(&self, big_n: u64) -> Choice {
        (self.choose)(big_n)
    }

    /// Digit `k` is `1` iff `{k}` is in the filter, read off the cover with
    /// `N = k + 1`.
    pub fn digit(&self, k: u64) -> bool {
        self.choose(k + 1) == Choice::Point(k)
    }

    /// The extended natural of the filter, read up to `horizon` digits.
    pub fn to_ext(&self, horizon: u64) -> ExtNat {
        (0..horizon).find(|&k| self.digit(k)).map_or(ExtNat::Inf, ExtNat::Fin)
    }

    /// Check the choices are consistent up to `horizon`: once a point is
    /// chosen every later cover chooses it, and a tail choice at `N` forces
    /// tail choices before it.
    pub fn is_consistent(&self, horizon: u64) -> bool {
        let mut point = None;
        for big_n in 0..=horizon {
            match (self.choose(big_n), point) {
                (Choice::Point(n), _) if n >= big_n => return false,
                (Choice::Point(n), None) => point = Some(n),
                (Choice::Point(n), Some(m)) if n != m => return false,
                (Choice::Tail, Some(_)) => return false,
                _ => {}
            }
        }
        true
    }
}

/// A convergent sequence extended to `ℕ_∞`: `x_n` at `n`, the limit at `∞`.
pub fn extend_seq(seq: &ConvergentSeq, e: ExtNat) -> Result<Real, RealError> {
    match e {
        ExtNat::Fin(n) => seq.term(n),
        ExtNat::Inf => Ok(limit(seq)),
    }
}
