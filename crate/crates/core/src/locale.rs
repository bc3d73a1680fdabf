//! Finite frames presented by coverage ideals, locale points, and the
//! passage between locales and cover spaces.
//!
//! The frame `L(X)` of a precover space is generated by the subsets of `X`
//! under three covering rules: a set is covered by its meets with a Cauchy
//! cover, by the sets strongly rather below it, and `∅` by nothing. Frame
//! elements are the rule-closed down-sets of the powerset, stored as 64-bit
//! masks indexed by subset bitmask.

use std::collections::BTreeSet;

use crate::coverspace::{is_proper, is_strongly_regular, rather_below, strongly_rather_below};
use crate::error::SpaceError;
use crate::finkernel::{all_subsets, Cover, FiniteCoverSpace, FnTable, Limits, Subset};

/// A down-set of the powerset closed under the covering rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameElement(u64);

impl FrameElement {
    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, u: Subset) -> bool {
        self.0 >> u.bits() & 1 == 1
    }

    pub fn is_subset_of(self, other: FrameElement) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn members(self, n: usize) -> Vec<Subset> {
        (0..1u64 << n).filter(|b| self.0 >> b & 1 == 1).map(|b| Subset::from_bits(n, b)).collect()
    }
}

/// The three rule schemata of `L(X)`, instantiated on the generator.
///
/// The Cauchy-cover rule is needed only for the generator: if `U`'s meets
/// with the generator lie in a down-set, so do its meets with any coarser
/// cover, because each of those contains one of the former.
#[derive(Debug, Clone)]
pub struct CoveragePresentation {
    space: FiniteCoverSpace,
    by_generator: Vec<u64>,
    by_strongly_below: Vec<u64>,
}

impl CoveragePresentation {
    pub fn new(s: &FiniteCoverSpace, limits: &Limits) -> Result<CoveragePresentation, SpaceError> {
        let n = s.n();
        limits.check_covers("coverage presentation", n)?;
        let subsets: Vec<Subset> = all_subsets(n).collect();
        let by_generator = subsets
            .iter()
            .map(|u| s.generator().members().iter().fold(0u64, |m, w| m | 1 << u.intersection(*w).bits()))
            .collect();
        let by_strongly_below = subsets
            .iter()
            .map(|u| {
                subsets
                    .iter()
                    .filter(|v| strongly_rather_below(s, **v, *u))
                    .fold(0u64, |m, v| m | 1 << v.bits())
            })
            .collect();
        Ok(CoveragePresentation { space: s.clone(), by_generator, by_strongly_below })
    }

    pub fn space(&self) -> &FiniteCoverSpace {
        &self.space
    }

    /// The subsets `V` with `U ⊲₀ {V_j}` for the strongly-rather-below rule.
    pub fn strongly_below(&self, u: Subset) -> u64 {
        self.by_strongly_below[u.bits() as usize]
    }

    /// The least rule-closed down-set containing `seed`.
    pub fn ideal_closure(&self, seed: u64) -> FrameElement {
        let n = self.space.n();
        let count = 1u64 << n;
        let mut ideal = seed | 1;
        loop {
            let mut next = down_closure(ideal, n);
            for u in 0..count {
                if next >> u & 1 == 1 {
                    continue;
                }
                let g = self.by_generator[u as usize];
                let sb = self.by_strongly_below[u as usize];
                if g & !next == 0 || sb & !next == 0 {
                    next |= 1 << u;
                }
            }
            if next == ideal {
                return FrameElement(ideal);
            }
            ideal = next;
        }
    }

    /// `[U]`, the closure of `{U}`.
    pub fn bracket(&self, u: Subset) -> FrameElement {
        self.ideal_closure(1 << u.bits())
    }
}

/// All subsets of members of the mask.
pub fn down_closure(mask: u64, n: usize) -> u64 {
    let mut out = mask;
    for u in 0..1u64 << n {
        if mask >> u & 1 == 1 {
            let mut sub = u;
            loop {
                out |= 1 << sub;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & u;
            }
        }
    }
    out
}

/// A finite frame with tabulated order, joins and meets. Elements are
/// indices `0..size`; when built from a space, each index also carries its
/// ideal.
#[derive(Debug, Clone)]
pub struct FiniteLocale {
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    ideals: Option<(CoveragePresentation, Vec<FrameElement>)>,
}

/// A point of a finite locale: the filter above a join-prime element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalePoint {
    pub prime: usize,
}

impl FiniteLocale {
    /// Build from an order relation, checking it is a distributive lattice.
    pub fn from_order(leq: Vec<Vec<bool>>) -> Result<FiniteLocale, SpaceError> {
        let k = leq.len();
        if k == 0 || leq.iter().any(|r| r.len() != k) {
            return Err(SpaceError::BadLattice("order table must be square and non-empty".into()));
        }
        for a in 0..k {
            if !leq[a][a] {
                return Err(SpaceError::BadLattice(format!("not reflexive at {a}")));
            }
            for b in 0..k {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(SpaceError::BadLattice(format!("not antisymmetric at {a},{b}")));
                }
                for c in 0..k {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(SpaceError::BadLattice(format!("not transitive at {a},{b},{c}")));
                    }
                }
            }
        }
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let ok = |c: usize| if upper { leq[a][c] && leq[b][c] } else { leq[c][a] && leq[c][b] };
            let cands: Vec<usize> = (0..k).filter(|&c| ok(c)).collect();
            cands
                .iter()
                .copied()
                .find(|&c| cands.iter().all(|&d| if upper { leq[c][d] } else { leq[d][c] }))
        };
        let mut join = vec![vec![0; k]; k];
        let mut meet = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                join[a][b] = bound(a, b, true).ok_or_else(|| SpaceError::BadLattice(format!("no join of {a},{b}")))?;
                meet[a][b] = bound(a, b, false).ok_or_else(|| SpaceError::BadLattice(format!("no meet of {a},{b}")))?;
            }
        }
        let bottom = (0..k).find(|&a| (0..k).all(|b| leq[a][b])).ok_or_else(|| SpaceError::BadLattice("no bottom".into()))?;
        let top = (0..k).find(|&a| (0..k).all(|b| leq[b][a])).ok_or_else(|| SpaceError::BadLattice("no top".into()))?;
        let m = FiniteLocale { leq, join, meet, bottom, top, ideals: None };
        if let Some((a, b, c)) = m.distributivity_witness() {
            return Err(SpaceError::BadLattice(format!("not distributive at {a},{b},{c}")));
        }
        Ok(m)
    }

    /// `0 < 1 < .. < k-1`.
    pub fn chain(k: usize) -> Result<FiniteLocale, SpaceError> {
        FiniteLocale::from_order((0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect())
    }

    /// The powerset of `atoms` atoms, elements indexed by bitmask.
    pub fn boolean(atoms: usize) -> Result<FiniteLocale, SpaceError> {
        let k = 1usize << atoms;
        FiniteLocale::from_order((0..k).map(|a| (0..k).map(|b| a & !b == 0).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |a, b| self.join[a][b])
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |a, b| self.meet[a][b])
    }

    /// The ideal behind an element, for frames built from a space.
    pub fn ideal(&self, a: usize) -> Option<FrameElement> {
        self.ideals.as_ref().map(|(_, v)| v[a])
    }

    pub fn presentation(&self) -> Option<&CoveragePresentation> {
        self.ideals.as_ref().map(|(p, _)| p)
    }

    /// Index of `[U]`, for frames built from a space.
    pub fn bracket(&self, u: Subset) -> Option<usize> {
        let (p, ideals) = self.ideals.as_ref()?;
        let e = p.bracket(u);
        ideals.iter().position(|i| *i == e)
    }

    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let k = self.size();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.meet[a][self.join[b][c]] != self.join[self.meet[a][b]][self.meet[a][c]] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `¬b = ⋁{a | a ∧ b = ⊥}`.
    pub fn neg(&self, b: usize) -> usize {
        self.join_all((0..self.size()).filter(|&a| self.meet[a][b] == self.bottom))
    }

    /// `b ≺ a` when `¬b ∨ a = ⊤`.
    pub fn rather_below(&self, b: usize, a: usize) -> bool {
        self.join[self.neg(b)][a] == self.top
    }

    /// Every element is the join of the elements rather below it.
    pub fn is_regular(&self) -> bool {
        (0..self.size()).all(|a| self.join_all((0..self.size()).filter(|&b| self.rather_below(b, a))) == a)
    }

    fn is_join_prime(&self, p: usize) -> bool {
        p != self.bottom
            && (0..self.size()).all(|a| {
                (0..self.size()).all(|b| !self.leq[p][self.join[a][b]] || self.leq[p][a] || self.leq[p][b])
            })
    }

    /// Proper: `ε_*(∅) = ⊥`.
    pub fn is_proper(&self) -> bool {
        let pts = points(self);
        eps_lower(self, &pts, Subset::empty(pts.len())) == self.bottom
    }
}

/// Enumerate every element of `L(X)` as a join of brackets, starting from
/// the bottom ideal.
pub fn build_l(s: &FiniteCoverSpace, limits: &Limits) -> Result<FiniteLocale, SpaceError> {
    let p = CoveragePresentation::new(s, limits)?;
    let n = s.n();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let bottom = p.ideal_closure(0).0;
    seen.insert(bottom);
    let mut frontier = vec![bottom];
    while let Some(i) = frontier.pop() {
        for u in 0..1u64 << n {
            if i >> u & 1 == 1 {
                continue;
            }
            let j = p.ideal_closure(i | 1 << u).0;
            if seen.insert(j) {
                frontier.push(j);
            }
        }
    }
    let mut ideals: Vec<FrameElement> = seen.into_iter().map(FrameElement).collect();
    ideals.sort_by_key(|e| (e.0.count_ones(), e.0));
    let k = ideals.len();
    let leq: Vec<Vec<bool>> = (0..k).map(|a| (0..k).map(|b| ideals[a].is_subset_of(ideals[b])).collect()).collect();
    let index = |e: FrameElement| ideals.iter().position(|x| *x == e).expect("closure of ideals is an ideal");
    let mut join = vec![vec![0; k]; k];
    let mut meet = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            join[a][b] = index(p.ideal_closure(ideals[a].0 | ideals[b].0));
            let m = FrameElement(ideals[a].0 & ideals[b].0);
            meet[a][b] = ideals.iter().position(|x| *x == m).ok_or_else(|| {
                SpaceError::BadLattice("intersection of ideals is not an ideal".into())
            })?;
        }
    }
    let bottom = 0;
    let top = k - 1;
    Ok(FiniteLocale { leq, join, meet, bottom, top, ideals: Some((p, ideals)) })
}

/// The join-prime elements, each standing for the filter above it.
pub fn points(m: &FiniteLocale) -> Vec<LocalePoint> {
    (0..m.size()).filter(|&p| m.is_join_prime(p)).map(|prime| LocalePoint { prime }).collect()
}

/// `ε^*(a)`: the points containing `a`, as a subset of the point list.
pub fn eps_star(m: &FiniteLocale, pts: &[LocalePoint], a: usize) -> Subset {
    let bits = pts
        .iter()
        .enumerate()
        .filter(|(_, p)| m.leq(p.prime, a))
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    Subset::from_bits(pts.len(), bits)
}

/// `ε_*(S) = ⋁{a | ε^*(a) ⊆ S}`.
pub fn eps_lower(m: &FiniteLocale, pts: &[LocalePoint], s: Subset) -> usize {
    m.join_all((0..m.size()).filter(|&a| eps_star(m, pts, a).is_subset_of(s)))
}

/// The cover space of points: `C` is Cauchy when `⋁ ε_*(U) = ⊤`, which
/// happens exactly when every `ε^*(p)` lies inside a member.
pub fn point_space(m: &FiniteLocale) -> Result<FiniteCoverSpace, SpaceError> {
    let pts = points(m);
    if pts.is_empty() {
        return Err(SpaceError::EmptyCarrier);
    }
    let gen = pts.iter().map(|p| eps_star(m, &pts, p.prime));
    Ok(FiniteCoverSpace::from_generator(&Cover::new(pts.len(), gen)?))
}

/// The definition-level Cauchy test in the point space.
pub fn is_point_cauchy(m: &FiniteLocale, family: &[Subset]) -> bool {
    let pts = points(m);
    m.join_all(family.iter().map(|u| eps_lower(m, &pts, *u))) == m.top
}

/// A frame map `O_N → O_M`, as a table indexed by elements of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMap(pub Vec<usize>);

/// Preserves finite meets and joins, including empty ones.
pub fn is_frame_map(m: &FiniteLocale, n: &FiniteLocale, g: &FrameMap) -> bool {
    let t = &g.0;
    t.len() == n.size()
        && t[n.top()] == m.top()
        && t[n.bottom()] == m.bottom()
        && (0..n.size()).all(|a| {
            (0..n.size()).all(|b| t[n.meet(a, b)] == m.meet(t[a], t[b]) && t[n.join(a, b)] == m.join(t[a], t[b]))
        })
}

/// `g^*(a) = ⋁{ε_*(f⁻¹(ε^*(b))) | b ≺ a}` for a cover map `f` between the
/// point spaces.
pub fn locale_map_of_cover_map(m: &FiniteLocale, n: &FiniteLocale, f: &FnTable) -> Result<FrameMap, SpaceError> {
    if !m.is_proper() {
        return Err(SpaceError::Precondition("source locale is not proper".into()));
    }
    if !n.is_regular() {
        return Err(SpaceError::Precondition("target locale is not regular".into()));
    }
    let (pm, pn) = (points(m), points(n));
    if f.domain() != pm.len() || f.codomain() != pn.len() {
        return Err(SpaceError::TableLength { got: f.domain(), expected: pm.len() });
    }
    let pull = |b: usize| eps_lower(m, &pm, f.preimage(eps_star(n, &pn, b)));
    let table = (0..n.size())
        .map(|a| m.join_all((0..n.size()).filter(|&b| n.rather_below(b, a)).map(pull)))
        .collect();
    Ok(FrameMap(table))
}

/// `P(g)(F) = {a | g^*(a) ∈ F}` as a map of point indices.
pub fn cover_map_of_locale_map(m: &FiniteLocale, n: &FiniteLocale, g: &FrameMap) -> Result<FnTable, SpaceError> {
    if !is_frame_map(m, n, g) {
        return Err(SpaceError::Precondition("table is not a frame map".into()));
    }
    let (pm, pn) = (points(m), points(n));
    let mut values = Vec::with_capacity(pm.len());
    for p in &pm {
        let filter: Vec<bool> = (0..n.size()).map(|a| m.leq(p.prime, g.0[a])).collect();
        let q = pn
            .iter()
            .position(|q| (0..n.size()).all(|a| n.leq(q.prime, a) == filter[a]))
            .ok_or_else(|| SpaceError::Precondition("image filter is not a point".into()))?;
        values.push(q);
    }
    FnTable::new(pn.len().max(1), values)
}

/// Result of checking that `x ↦ η(x)` identifies a space with the points of
/// its locale.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub checks: Vec<(String, bool)>,
    /// `η(x)` as an index into the point list of `L(X)`.
    pub eta: Vec<Option<usize>>,
    pub frame_size: usize,
    pub point_count: usize,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// `η(x) = {a | ∃U, {x} ≺ U, [U] ≤ a}` as a set of frame elements.
pub fn eta_filter(s: &FiniteCoverSpace, m: &FiniteLocale, x: usize) -> Vec<bool> {
    let mut out = vec![false; m.size()];
    for u in all_subsets(s.n()).filter(|u| rather_below(s, Subset::singleton(s.n(), x), *u)) {
        if let Some(b) = m.bracket(u) {
            for (a, slot) in out.iter_mut().enumerate() {
                *slot |= m.leq(b, a);
            }
        }
    }
    out
}

/// Check that `η : X → P(L(X))` is a bijection and an isomorphism of cover
/// spaces. Requires a proper strongly complete space.
pub fn verify_equivalence(s: &FiniteCoverSpace, limits: &Limits) -> Result<EquivalenceReport, SpaceError> {
    if !is_proper(s) {
        return Err(SpaceError::Precondition("space is not proper".into()));
    }
    if !is_strongly_regular(s) {
        return Err(SpaceError::Precondition("space is not strongly regular".into()));
    }
    if !crate::cauchy::is_strongly_complete(s) {
        return Err(SpaceError::Precondition("space is not strongly complete".into()));
    }
    let m = build_l(s, limits)?;
    let pts = points(&m);
    let mut checks: Vec<(String, bool)> = vec![
        ("frame distributive".into(), m.distributivity_witness().is_none()),
        ("frame regular".into(), m.is_regular()),
        ("frame proper".into(), m.is_proper()),
    ];
    let mut eta = Vec::with_capacity(s.n());
    for x in 0..s.n() {
        let f = eta_filter(s, &m, x);
        let p = pts.iter().position(|p| (0..m.size()).all(|a| m.leq(p.prime, a) == f[a]));
        checks.push((format!("eta({x}) is a point"), p.is_some()));
        eta.push(p);
    }
    let distinct: BTreeSet<usize> = eta.iter().flatten().copied().collect();
    checks.push(("eta injective".into(), distinct.len() == s.n()));
    checks.push(("eta surjective".into(), distinct.len() == pts.len()));
    let iso = if eta.iter().all(|p| p.is_some()) && !pts.is_empty() {
        let f = FnTable::new(pts.len(), eta.iter().map(|p| p.unwrap()).collect())?;
        let ps = point_space(&m)?;
        crate::coverspace::is_isomorphism(&f, s, &ps)?
    } else {
        false
    };
    checks.push(("eta cover isomorphism".into(), iso));
    Ok(EquivalenceReport { checks, eta, frame_size: m.size(), point_count: pts.len() })
}
