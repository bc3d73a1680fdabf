//! Cauchy filters on finite cover spaces, completion, and extension along
//! dense embeddings.
//!
//! Every filter on a finite set is principal, so a filter is stored as its
//! least member.

use std::fmt;

use crate::coverspace::{
    is_cover_map, is_dense_map, is_embedding, is_neighborhood, rather_below, satisfies_cr, strongly_rather_below,
};
use crate::error::SpaceError;
use crate::finkernel::{all_subsets, canonicalize, Cover, FiniteCoverSpace, FnTable, Limits, Subset};

/// The filter `↑base = {S | base ⊆ S}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalFilter {
    base: Subset,
}

impl PrincipalFilter {
    pub fn new(base: Subset) -> PrincipalFilter {
        PrincipalFilter { base }
    }

    pub fn base(self) -> Subset {
        self.base
    }

    pub fn contains(self, u: Subset) -> bool {
        self.base.is_subset_of(u)
    }

    /// Proper, and for principal filters equally weakly proper.
    pub fn is_proper(self) -> bool {
        self.base.is_inhabited()
    }
}

impl fmt::Debug for PrincipalFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑{}", self.base)
    }
}

/// `x^∧`, the filter of neighbourhoods of `x`.
pub fn neighborhood_filter(s: &FiniteCoverSpace, x: usize) -> PrincipalFilter {
    PrincipalFilter::new(s.star(x))
}

pub fn is_cauchy_filter(s: &FiniteCoverSpace, f: PrincipalFilter) -> bool {
    f.is_proper() && s.generator().members().iter().any(|u| f.base.is_subset_of(*u))
}

/// Every Cauchy cover has a single member lying in both filters.
pub fn filters_equivalent(s: &FiniteCoverSpace, f: PrincipalFilter, g: PrincipalFilter) -> bool {
    let both = f.base.union(g.base);
    s.generator().members().iter().any(|u| both.is_subset_of(*u))
}

/// The least filter equivalent to `f`: the union of the generator members
/// containing its base.
pub fn regular_representative(s: &FiniteCoverSpace, f: PrincipalFilter) -> Result<PrincipalFilter, SpaceError> {
    if !is_cauchy_filter(s, f) {
        return Err(SpaceError::NotCauchy(f.base.to_string()));
    }
    let base = s
        .generator()
        .members()
        .iter()
        .filter(|u| f.base.is_subset_of(**u))
        .fold(Subset::empty(s.n()), |a, u| a.union(*u));
    Ok(PrincipalFilter::new(base))
}

/// Every member contains a member rather below it. For `↑B` this reduces
/// to `B ≺ B`.
pub fn is_regular_filter(s: &FiniteCoverSpace, f: PrincipalFilter) -> bool {
    rather_below(s, f.base, f.base)
}

/// Every member contains a member strongly rather below it.
pub fn is_strongly_regular_filter(s: &FiniteCoverSpace, f: PrincipalFilter) -> bool {
    f.base
        .supersets()
        .all(|u| f.base.supersets().any(|v| strongly_rather_below(s, v, u)))
}

/// Some generator member contains both points.
pub fn point_equiv(s: &FiniteCoverSpace, x: usize, y: usize) -> bool {
    let pair = Subset::singleton(s.n(), x).with(y);
    s.generator().members().iter().any(|u| pair.is_subset_of(*u))
}

pub fn separation_witness(s: &FiniteCoverSpace) -> Option<(usize, usize)> {
    let n = s.n();
    (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).find(|&(x, y)| point_equiv(s, x, y))
}

pub fn is_separated(s: &FiniteCoverSpace) -> bool {
    separation_witness(s).is_none()
}

/// A Cauchy filter base equivalent to no neighbourhood filter. Bases are
/// taken from the generator: if the largest Cauchy base in a member is
/// matched by a point, so is every smaller one.
pub fn completeness_witness(s: &FiniteCoverSpace) -> Option<Subset> {
    s.generator().members().iter().copied().find(|w| {
        let f = PrincipalFilter::new(*w);
        !(0..s.n()).any(|x| filters_equivalent(s, f, neighborhood_filter(s, x)))
    })
}

pub fn is_complete(s: &FiniteCoverSpace) -> bool {
    is_separated(s) && completeness_witness(s).is_none()
}

/// Strongly complete: separated, and every weakly Cauchy filter is
/// equivalent to a neighbourhood filter. Principal filters are weakly
/// proper exactly when proper, so this matches completeness for strongly
/// regular spaces.
pub fn is_strongly_complete(s: &FiniteCoverSpace) -> bool {
    crate::coverspace::is_strongly_regular(s) && is_complete(s)
}

/// The seven equivalent characterisations of `x` and `y` being equivalent,
/// each evaluated from its own definition. Conditions quantified over all
/// Cauchy covers enumerate every family of subsets, so the cover-size guard
/// applies.
pub fn separated_char_conditions(
    s: &FiniteCoverSpace,
    x: usize,
    y: usize,
    limits: &Limits,
) -> Result<[bool; 7], SpaceError> {
    let n = s.n();
    limits.check_covers("separated_char_conditions", n)?;
    let (fx, fy) = (neighborhood_filter(s, x), neighborhood_filter(s, y));
    let nb = |p: usize| -> Vec<Subset> { all_subsets(n).filter(|u| is_neighborhood(s, p, *u)).collect() };
    let (nx, ny) = (nb(x), nb(y));

    // x^∧ ⊆ y^∧ as sets of subsets.
    let c1 = nx.iter().all(|u| ny.contains(u));
    let c2 = is_cauchy_filter(s, fx) && is_cauchy_filter(s, fy) && filters_equivalent(s, fx, fy);
    let c3 = nx == ny;
    let c4 = nx.iter().all(|u| u.contains(y));
    let c5 = nx.iter().all(|u| ny.iter().all(|v| u.meets(*v)));

    let subsets: Vec<Subset> = all_subsets(n).collect();
    let mut c6 = true;
    let mut c7 = true;
    for fam in 0..1u128 << subsets.len() {
        let family: Vec<Subset> = (0..subsets.len()).filter(|i| fam >> i & 1 == 1).map(|i| subsets[i]).collect();
        if !crate::finkernel::family_refines(s.generator().members(), &family) {
            continue;
        }
        if !family.iter().any(|u| nx.contains(u) && ny.contains(u)) {
            c6 = false;
        }
        if !family.iter().any(|u| u.contains(x) && u.contains(y)) {
            c7 = false;
        }
        if !c6 && !c7 {
            break;
        }
    }
    Ok([c1, c2, c3, c4, c5, c6, c7])
}

/// A completion: regular Cauchy filters as points, with the unit map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionSpace {
    points: Vec<PrincipalFilter>,
    space: FiniteCoverSpace,
    unit: FnTable,
}

impl CompletionSpace {
    pub fn points(&self) -> &[PrincipalFilter] {
        &self.points
    }

    pub fn space(&self) -> &FiniteCoverSpace {
        &self.space
    }

    pub fn unit(&self) -> &FnTable {
        &self.unit
    }

    /// The named postconditions of the construction, each re-derived.
    pub fn checks(&self, s: &FiniteCoverSpace) -> Vec<(&'static str, bool)> {
        let c = &self.space;
        let unit = &self.unit;
        vec![
            ("separated", is_separated(c)),
            ("complete", is_complete(c)),
            ("unit cover map", is_cover_map(unit, s, c).unwrap_or(false)),
            ("unit embedding", is_embedding(unit, s, c).unwrap_or(false)),
            ("unit dense", is_dense_map(unit, s, c).unwrap_or(false)),
        ]
    }
}

/// `Ũ`: the points whose filter contains `U`.
fn tilde(points: &[PrincipalFilter], u: Subset) -> Subset {
    let bits = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.contains(u))
        .fold(0u64, |a, (i, _)| a | 1 << i);
    Subset::from_bits(points.len(), bits)
}

fn assemble(s: &FiniteCoverSpace, mut points: Vec<PrincipalFilter>, unit_of: impl Fn(usize, &[PrincipalFilter]) -> Option<usize>) -> Result<CompletionSpace, SpaceError> {
    points.sort();
    points.dedup();
    let k = points.len();
    let tildes: Vec<Subset> = s.generator().members().iter().map(|u| tilde(&points, *u)).collect();
    let space = FiniteCoverSpace::from_generator(&canonicalize(&Cover::new(k, tildes)?));
    let values = (0..s.n())
        .map(|x| unit_of(x, &points).ok_or_else(|| SpaceError::Precondition(format!("no point for {x}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CompletionSpace { points, space, unit: FnTable::new(k, values)? })
}

/// Inhabited subsets of generator members: every Cauchy filter base.
fn cauchy_bases(s: &FiniteCoverSpace) -> Vec<Subset> {
    let mut out = Vec::new();
    for w in s.generator().members() {
        let free = w.bits();
        let mut sub = free;
        while sub != 0 {
            out.push(Subset::from_bits(s.n(), sub));
            sub = (sub - 1) & free;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The completion, with points the regular representatives of all Cauchy
/// filters and covers generated by the sets `Ũ`.
pub fn completion(s: &FiniteCoverSpace, limits: &Limits) -> Result<CompletionSpace, SpaceError> {
    if !satisfies_cr(s) {
        return Err(SpaceError::NotRegular);
    }
    limits.check_subsets("completion", s.n())?;
    let points = cauchy_bases(s)
        .into_iter()
        .map(|a| regular_representative(s, PrincipalFilter::new(a)))
        .collect::<Result<Vec<_>, _>>()?;
    assemble(s, points, |x, pts| {
        let r = regular_representative(s, neighborhood_filter(s, x)).ok()?;
        pts.iter().position(|p| *p == r)
    })
}

/// The same construction with strongly regular weakly Cauchy filters in
/// place of regular Cauchy filters. Points are found by direct search.
pub fn strong_completion(s: &FiniteCoverSpace, limits: &Limits) -> Result<CompletionSpace, SpaceError> {
    if !crate::coverspace::is_strongly_regular(s) {
        return Err(SpaceError::NotStronglyRegular);
    }
    limits.check_subsets("strong_completion", s.n())?;
    let points: Vec<PrincipalFilter> = all_subsets(s.n())
        .map(PrincipalFilter::new)
        .filter(|f| is_cauchy_filter(s, *f) && is_strongly_regular_filter(s, *f))
        .collect();
    assemble(s, points, |x, pts| {
        let nx = neighborhood_filter(s, x);
        pts.iter().position(|p| filters_equivalent(s, *p, nx))
    })
}

/// A reason `dense_lift` refused its input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftViolation {
    Shape(SpaceError),
    NotEmbedding,
    NotDense,
    NotCoverMap,
    TargetNotComplete,
}

fn lift_preconditions(
    f: &FnTable,
    x: &FiniteCoverSpace,
    y: &FiniteCoverSpace,
    g: &FnTable,
    z: &FiniteCoverSpace,
) -> Vec<LiftViolation> {
    let mut out = Vec::new();
    match is_embedding(f, x, y) {
        Ok(true) => {}
        Ok(false) => out.push(LiftViolation::NotEmbedding),
        Err(e) => out.push(LiftViolation::Shape(e)),
    }
    if let Ok(false) = is_dense_map(f, x, y) {
        out.push(LiftViolation::NotDense);
    }
    match is_cover_map(g, x, z) {
        Ok(true) => {}
        Ok(false) => out.push(LiftViolation::NotCoverMap),
        Err(e) => out.push(LiftViolation::Shape(e)),
    }
    if !is_complete(z) {
        out.push(LiftViolation::TargetNotComplete);
    }
    out
}

/// The unique cover map `g̃ : Y → Z` with `g̃ ∘ f = g`.
///
/// For each `y`, the neighbourhood filter is pulled back to
/// `{U | ∃V, f⁻¹(V) ⊆ U, N_y ≺ V}`, pushed along `g`, and the resulting
/// Cauchy filter `F` is sent to the point whose neighbourhoods are
/// `{U | ∃V ∈ F, V ≺ U}`.
pub fn dense_lift(
    f: &FnTable,
    x: &FiniteCoverSpace,
    y: &FiniteCoverSpace,
    g: &FnTable,
    z: &FiniteCoverSpace,
    limits: &Limits,
) -> Result<FnTable, Vec<LiftViolation>> {
    let v = lift_preconditions(f, x, y, g, z);
    if !v.is_empty() {
        return Err(v);
    }
    let guard = |e: SpaceError| vec![LiftViolation::Shape(e)];
    limits.check_subsets("dense_lift", y.n().max(z.n())).map_err(guard)?;
    let ys: Vec<Subset> = all_subsets(y.n()).collect();
    let zs: Vec<Subset> = all_subsets(z.n()).collect();
    let mut values = Vec::with_capacity(y.n());
    for p in 0..y.n() {
        let ny = y.star(p);
        let pulled = ys
            .iter()
            .filter(|v| rather_below(y, ny, **v))
            .fold(x.full(), |a, v| a.intersection(f.preimage(*v)));
        let pushed = g.image(pulled);
        let wanted: Vec<Subset> = zs.iter().copied().filter(|u| rather_below(z, pushed, *u)).collect();
        let q = (0..z.n())
            .find(|&q| {
                let nq = z.star(q);
                let have: Vec<Subset> = zs.iter().copied().filter(|u| nq.is_subset_of(*u)).collect();
                have == wanted
            })
            .ok_or_else(|| guard(SpaceError::Precondition(format!("no limit point for {p}"))))?;
        values.push(q);
    }
    FnTable::new(z.n(), values).map_err(guard)
}

/// The same extension computed pointwise: transport `f⁻¹(N_y)` along `g`
/// and pick the point of `Z` whose neighbourhood filter is equivalent.
pub fn dense_lift_by_transport(
    f: &FnTable,
    x: &FiniteCoverSpace,
    y: &FiniteCoverSpace,
    g: &FnTable,
    z: &FiniteCoverSpace,
) -> Result<FnTable, Vec<LiftViolation>> {
    let v = lift_preconditions(f, x, y, g, z);
    if !v.is_empty() {
        return Err(v);
    }
    let guard = |e: SpaceError| vec![LiftViolation::Shape(e)];
    let mut values = Vec::with_capacity(y.n());
    for p in 0..y.n() {
        let moved = PrincipalFilter::new(g.image(f.preimage(y.star(p))));
        let q = (0..z.n())
            .find(|&q| filters_equivalent(z, moved, neighborhood_filter(z, q)))
            .ok_or_else(|| guard(SpaceError::Precondition(format!("no equivalent point for {p}"))))?;
        values.push(q);
    }
    FnTable::new(z.n(), values).map_err(guard)
}

/// One member of `c` per generator member, covering the carrier.
pub fn finite_subcover(s: &FiniteCoverSpace, c: &[Subset]) -> Result<Vec<Subset>, SpaceError> {
    let mut out: Vec<Subset> = Vec::new();
    for w in s.generator().members() {
        let u = c
            .iter()
            .find(|u| w.is_subset_of(**u))
            .ok_or_else(|| SpaceError::NotCauchy(format!("family misses generator member {w}")))?;
        if !out.contains(u) {
            out.push(*u);
        }
    }
    Ok(out)
}
