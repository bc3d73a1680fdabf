//! Finite carriers, subsets, covers and the principal representation of
//! precover structures.
//!
//! On a finite carrier every family of Cauchy covers generated by finitely
//! many covers is exactly the set of covers refined by one canonical
//! antichain, the generator. [`FiniteCoverSpace`] stores only that generator.

use std::fmt;

use crate::error::SpaceError;

/// Largest carrier for which subset enumeration is ever allowed.
pub const HARD_MAX_SUBSETS: usize = 20;
/// Largest carrier for which cover or ideal enumeration is ever allowed.
/// Ideals are stored as 64-bit masks over the powerset, hence 2^6.
pub const HARD_MAX_COVERS: usize = 6;

/// Size caps for operations that enumerate subsets or covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub subsets: usize,
    pub covers: usize,
}

impl Limits {
    pub const DEFAULT: Limits = Limits { subsets: 12, covers: 4 };

    /// Raise or lower both caps, clamped to the hard maxima.
    pub fn with_max_carrier(n: usize) -> Limits {
        Limits {
            subsets: n.min(HARD_MAX_SUBSETS),
            covers: n.min(HARD_MAX_COVERS),
        }
    }

    pub fn check_subsets(&self, op: &'static str, n: usize) -> Result<(), SpaceError> {
        if n > self.subsets {
            return Err(SpaceError::SizeGuard { op, what: "all subsets", limit: self.subsets, size: n });
        }
        Ok(())
    }

    pub fn check_covers(&self, op: &'static str, n: usize) -> Result<(), SpaceError> {
        if n > self.covers {
            return Err(SpaceError::SizeGuard { op, what: "all covers", limit: self.covers, size: n });
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}

/// A finite set `{0, .., n-1}` with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Carrier(usize);

impl Carrier {
    pub fn new(n: usize) -> Result<Carrier, SpaceError> {
        if n == 0 {
            return Err(SpaceError::EmptyCarrier);
        }
        if n > 64 {
            return Err(SpaceError::CarrierTooLarge(n));
        }
        Ok(Carrier(n))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn full(self) -> Subset {
        Subset::full(self.0)
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of a finite carrier, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    n: u8,
    bits: u64,
}

impl Subset {
    pub fn empty(n: usize) -> Subset {
        Subset { n: n as u8, bits: 0 }
    }

    pub fn full(n: usize) -> Subset {
        Subset { n: n as u8, bits: full_mask(n) }
    }

    pub fn singleton(n: usize, x: usize) -> Subset {
        debug_assert!(x < n);
        Subset { n: n as u8, bits: 1u64 << x }
    }

    /// Bits above the carrier are masked off.
    pub fn from_bits(n: usize, bits: u64) -> Subset {
        Subset { n: n as u8, bits: bits & full_mask(n) }
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, xs: I) -> Result<Subset, SpaceError> {
        let mut bits = 0u64;
        for x in xs {
            if x >= n {
                return Err(SpaceError::OutOfRange { index: x, size: n });
            }
            bits |= 1u64 << x;
        }
        Ok(Subset { n: n as u8, bits })
    }

    pub fn carrier_size(self) -> usize {
        self.n as usize
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn contains(self, x: usize) -> bool {
        x < self.carrier_size() && self.bits >> x & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_inhabited(self) -> bool {
        self.bits != 0
    }

    pub fn is_full(self) -> bool {
        self.bits == full_mask(self.carrier_size())
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset { n: self.n, bits: self.bits | other.bits }
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset { n: self.n, bits: self.bits & other.bits }
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset { n: self.n, bits: self.bits & !other.bits }
    }

    pub fn complement(self) -> Subset {
        Subset { n: self.n, bits: !self.bits & full_mask(self.carrier_size()) }
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.bits & !other.bits == 0
    }

    /// True when the intersection is inhabited.
    pub fn meets(self, other: Subset) -> bool {
        self.bits & other.bits != 0
    }

    pub fn with(self, x: usize) -> Subset {
        Subset { n: self.n, bits: self.bits | 1u64 << x }
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.carrier_size()).filter(move |&i| bits >> i & 1 == 1)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Supersets of `self` inside the carrier, in increasing bit order.
    pub fn supersets(self) -> impl Iterator<Item = Subset> {
        let n = self.carrier_size();
        let free = full_mask(n) & !self.bits;
        let base = self.bits;
        let mut sub = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Subset { n: n as u8, bits: base | sub };
            if sub == free {
                done = true;
            } else {
                sub = (sub.wrapping_sub(free)) & free;
            }
            Some(out)
        })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Every subset of an `n`-element carrier, ordered by bitmask.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n < 64, "subset enumeration needs n < 64");
    (0..1u64 << n).map(move |b| Subset::from_bits(n, b))
}

fn check_same(a: usize, b: usize) -> Result<(), SpaceError> {
    if a != b {
        return Err(SpaceError::CarrierMismatch { left: a, right: b });
    }
    Ok(())
}

/// Does the family (any list of subsets) refine `d`?
pub fn family_refines(c: &[Subset], d: &[Subset]) -> bool {
    c.iter().all(|u| d.iter().any(|v| u.is_subset_of(*v)))
}

/// Union of a family.
pub fn family_union(n: usize, c: &[Subset]) -> Subset {
    c.iter().fold(Subset::empty(n), |acc, u| acc.union(*u))
}

/// A cover of a finite carrier: a set of subsets whose union is everything.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover {
    n: usize,
    members: Vec<Subset>,
}

impl Cover {
    pub fn new<I: IntoIterator<Item = Subset>>(n: usize, members: I) -> Result<Cover, SpaceError> {
        Carrier::new(n)?;
        let mut members: Vec<Subset> = members.into_iter().collect();
        for m in &members {
            check_same(n, m.carrier_size())?;
        }
        members.sort();
        members.dedup();
        let u = family_union(n, &members);
        if !u.is_full() {
            let missing = u.complement().elements().next().unwrap_or(0);
            return Err(SpaceError::NotACover { missing });
        }
        Ok(Cover { n, members })
    }

    /// Build from element lists, as in `[[0], [1, 2]]`.
    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<Cover, SpaceError> {
        let subsets = lists
            .iter()
            .map(|l| Subset::from_elements(n, l.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Cover::new(n, subsets)
    }

    /// The trivial cover `{X}`.
    pub fn whole(n: usize) -> Cover {
        Cover { n, members: vec![Subset::full(n)] }
    }

    pub fn singletons(n: usize) -> Cover {
        Cover { n, members: (0..n).map(|x| Subset::singleton(n, x)).collect() }
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_antichain(&self) -> bool {
        self.members.iter().enumerate().all(|(i, u)| {
            self.members.iter().enumerate().all(|(j, v)| i == j || !u.is_subset_of(*v))
        })
    }
}

impl fmt::Debug for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Every member of `c` is contained in some member of `d`.
pub fn refines(c: &Cover, d: &Cover) -> Result<bool, SpaceError> {
    check_same(c.n, d.n)?;
    Ok(family_refines(&c.members, &d.members))
}

/// Pairwise intersections `{U ∩ V}`.
pub fn meet(c: &Cover, d: &Cover) -> Result<Cover, SpaceError> {
    check_same(c.n, d.n)?;
    let mut out = Vec::with_capacity(c.len() * d.len());
    for u in &c.members {
        for v in &d.members {
            out.push(u.intersection(*v));
        }
    }
    out.sort();
    out.dedup();
    Ok(Cover { n: c.n, members: out })
}

/// The antichain of maximal members; the unique representative of the
/// mutual-refinement class of `c`.
pub fn canonicalize(c: &Cover) -> Cover {
    let members: Vec<Subset> = c
        .members
        .iter()
        .filter(|u| !c.members.iter().any(|v| v != *u && u.is_subset_of(*v)))
        .copied()
        .collect();
    Cover { n: c.n, members }
}

/// A precover structure on a finite carrier, given by its canonical generator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteCoverSpace {
    carrier: Carrier,
    generator: Cover,
}

impl FiniteCoverSpace {
    pub fn from_generator(c: &Cover) -> FiniteCoverSpace {
        FiniteCoverSpace { carrier: Carrier(c.n), generator: canonicalize(c) }
    }

    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<FiniteCoverSpace, SpaceError> {
        Ok(FiniteCoverSpace::from_generator(&Cover::from_lists(n, lists)?))
    }

    pub fn discrete(n: usize) -> Result<FiniteCoverSpace, SpaceError> {
        Carrier::new(n)?;
        Ok(FiniteCoverSpace::from_generator(&Cover::singletons(n)))
    }

    pub fn indiscrete(n: usize) -> Result<FiniteCoverSpace, SpaceError> {
        Carrier::new(n)?;
        Ok(FiniteCoverSpace::from_generator(&Cover::whole(n)))
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn n(&self) -> usize {
        self.carrier.0
    }

    pub fn generator(&self) -> &Cover {
        &self.generator
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n())
    }

    /// Union of the generator members containing `x`: the least
    /// neighbourhood of `x`.
    pub fn star(&self, x: usize) -> Subset {
        self.star_of(Subset::singleton(self.n(), x))
    }

    /// Union of the generator members meeting `v`.
    pub fn star_of(&self, v: Subset) -> Subset {
        self.generator
            .members
            .iter()
            .filter(|w| w.meets(v))
            .fold(Subset::empty(self.n()), |acc, w| acc.union(*w))
    }
}

impl fmt::Debug for FiniteCoverSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space(n={}, gen={})", self.n(), self.generator)
    }
}

/// A total function between finite carriers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnTable {
    codomain: usize,
    values: Vec<usize>,
}

impl FnTable {
    pub fn new(codomain: usize, values: Vec<usize>) -> Result<FnTable, SpaceError> {
        Carrier::new(values.len())?;
        Carrier::new(codomain)?;
        for (at, &value) in values.iter().enumerate() {
            if value >= codomain {
                return Err(SpaceError::TableValue { at, value, size: codomain });
            }
        }
        Ok(FnTable { codomain, values })
    }

    pub fn identity(n: usize) -> FnTable {
        FnTable { codomain: n, values: (0..n).collect() }
    }

    pub fn constant(domain: usize, codomain: usize, value: usize) -> FnTable {
        FnTable { codomain, values: vec![value; domain] }
    }

    pub fn domain(&self) -> usize {
        self.values.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn preimage(&self, v: Subset) -> Subset {
        let bits = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &y)| v.contains(y))
            .fold(0u64, |acc, (x, _)| acc | 1u64 << x);
        Subset::from_bits(self.domain(), bits)
    }

    pub fn image(&self, u: Subset) -> Subset {
        let bits = u.elements().fold(0u64, |acc, x| acc | 1u64 << self.values[x]);
        Subset::from_bits(self.codomain, bits)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FnTable) -> Result<FnTable, SpaceError> {
        check_same(self.codomain, other.domain())?;
        Ok(FnTable { codomain: other.codomain, values: self.values.iter().map(|&y| other.values[y]).collect() })
    }

    pub fn is_injective(&self) -> bool {
        let img = self.image(Subset::full(self.domain()));
        img.len() == self.domain()
    }

    pub(crate) fn check_between(&self, x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Result<(), SpaceError> {
        if self.domain() != x.n() {
            return Err(SpaceError::TableLength { got: self.domain(), expected: x.n() });
        }
        check_same(self.codomain, y.n())
    }
}

/// Product structure on `n_x * n_y` points, `(a, b) ↦ a * n_y + b`.
///
/// The products of generator members always satisfy the regularity axiom
/// when both factors do; the reflection is applied otherwise.
pub fn product(x: &FiniteCoverSpace, y: &FiniteCoverSpace, limits: &Limits) -> Result<FiniteCoverSpace, SpaceError> {
    let n = x.n() * y.n();
    if n > 64 {
        return Err(SpaceError::CarrierTooLarge(n));
    }
    let mut members = Vec::new();
    for u in x.generator().members() {
        for v in y.generator().members() {
            let mut bits = 0u64;
            for a in u.elements() {
                for b in v.elements() {
                    bits |= 1u64 << (a * y.n() + b);
                }
            }
            members.push(Subset::from_bits(n, bits));
        }
    }
    let s = FiniteCoverSpace::from_generator(&Cover::new(n, members)?);
    if crate::coverspace::satisfies_cr(&s) {
        Ok(s)
    } else {
        crate::coverspace::regular_reflection(&s, limits)
    }
}

/// Projection tables of a product carrier.
pub fn projections(nx: usize, ny: usize) -> (FnTable, FnTable) {
    let n = nx * ny;
    (
        FnTable { codomain: nx, values: (0..n).map(|p| p / ny).collect() },
        FnTable { codomain: ny, values: (0..n).map(|p| p % ny).collect() },
    )
}

/// `f × g` on product carriers.
pub fn product_map(f: &FnTable, g: &FnTable) -> FnTable {
    let mut values = Vec::with_capacity(f.domain() * g.domain());
    for a in 0..f.domain() {
        for b in 0..g.domain() {
            values.push(f.apply(a) * g.codomain() + g.apply(b));
        }
    }
    FnTable { codomain: f.codomain() * g.codomain(), values }
}

/// The structure on the domain of `f` whose Cauchy covers are exactly the
/// families `C` such that `{V : f⁻¹(V) ⊆ some U ∈ C}` is Cauchy in `y`.
pub fn transfer(f: &FnTable, y: &FiniteCoverSpace) -> Result<FiniteCoverSpace, SpaceError> {
    check_same(f.codomain(), y.n())?;
    let pre = y.generator().members().iter().map(|w| f.preimage(*w));
    Ok(FiniteCoverSpace::from_generator(&Cover::new(f.domain(), pre)?))
}

/// Every antichain cover of an `n`-element carrier, i.e. every possible
/// canonical generator.
pub fn canonical_covers(n: usize, limits: &Limits) -> Result<Vec<Cover>, SpaceError> {
    Carrier::new(n)?;
    limits.check_covers("canonical_covers", n)?;
    let subsets: Vec<Subset> = all_subsets(n).filter(|s| s.is_inhabited()).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    antichains(&subsets, 0, &mut chosen, &mut |c| {
        if family_union(n, c).is_full() {
            out.push(Cover { n, members: c.to_vec() });
        }
    });
    for c in &mut out {
        c.members.sort();
    }
    out.sort();
    Ok(out)
}

fn antichains(pool: &[Subset], from: usize, chosen: &mut Vec<Subset>, visit: &mut dyn FnMut(&[Subset])) {
    visit(chosen);
    for i in from..pool.len() {
        let s = pool[i];
        if chosen.iter().all(|c| !c.is_subset_of(s) && !s.is_subset_of(*c)) {
            chosen.push(s);
            antichains(pool, i + 1, chosen, visit);
            chosen.pop();
        }
    }
}
