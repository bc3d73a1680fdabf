//! Decision procedures for the cover space axioms on finite carriers, and the
//! bridge to finite topologies.
//!
//! Conditions quantified over all Cauchy covers are evaluated on the
//! generator alone. Every such condition is monotone under refinement, so the
//! finest Cauchy cover decides it.

use crate::error::SpaceError;
use crate::finkernel::{
    all_subsets, canonical_covers, canonicalize, family_refines, meet, Cover, FiniteCoverSpace, FnTable, Limits, Subset,
};

/// A finite list of covers generating a precover structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubbasePresentation {
    n: usize,
    covers: Vec<Cover>,
}

impl SubbasePresentation {
    pub fn new(n: usize, covers: Vec<Cover>) -> Result<SubbasePresentation, SpaceError> {
        crate::finkernel::Carrier::new(n)?;
        for c in &covers {
            if c.carrier_size() != n {
                return Err(SpaceError::CarrierMismatch { left: n, right: c.carrier_size() });
            }
        }
        Ok(SubbasePresentation { n, covers })
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }
}

/// The precover structure generated by a subbase: everything refined by the
/// meet of the listed covers.
pub fn close_subbase(b: &SubbasePresentation) -> FiniteCoverSpace {
    let mut acc = Cover::whole(b.n);
    for c in &b.covers {
        acc = canonicalize(&meet(&acc, c).expect("carrier checked on construction"));
    }
    FiniteCoverSpace::from_generator(&acc)
}

fn same_carrier(s: &FiniteCoverSpace, n: usize) -> Result<(), SpaceError> {
    if s.n() != n {
        return Err(SpaceError::CarrierMismatch { left: s.n(), right: n });
    }
    Ok(())
}

/// Is the family Cauchy? Works on arbitrary families, covering or not.
pub fn is_cauchy(s: &FiniteCoverSpace, d: &[Subset]) -> Result<bool, SpaceError> {
    for u in d {
        same_carrier(s, u.carrier_size())?;
    }
    Ok(family_refines(s.generator().members(), d))
}

pub fn is_cauchy_cover(s: &FiniteCoverSpace, d: &Cover) -> Result<bool, SpaceError> {
    is_cauchy(s, d.members())
}

/// `V ≺ U`: every generator member meeting `V` lies inside `U`.
pub fn rather_below(s: &FiniteCoverSpace, v: Subset, u: Subset) -> bool {
    s.generator().members().iter().all(|w| !w.meets(v) || w.is_subset_of(u))
}

/// `V ≺ˢ U`: `{X∖V, U}` is Cauchy.
pub fn strongly_rather_below(s: &FiniteCoverSpace, v: Subset, u: Subset) -> bool {
    let outside = v.complement();
    s.generator().members().iter().all(|w| w.is_subset_of(outside) || w.is_subset_of(u))
}

/// The regularity axiom: `{V | ∃U ∈ C, V ≺ U}` is Cauchy for the generator `C`.
pub fn satisfies_cr(s: &FiniteCoverSpace) -> bool {
    cr_witness(s).is_none()
}

/// A generator member not rather below any generator member, if one exists.
pub fn cr_witness(s: &FiniteCoverSpace) -> Option<Subset> {
    let gen = s.generator().members();
    gen.iter().copied().find(|w| !gen.iter().any(|u| rather_below(s, *w, *u)))
}

pub fn is_strongly_regular(s: &FiniteCoverSpace) -> bool {
    strong_regularity_witness(s).is_none()
}

pub fn strong_regularity_witness(s: &FiniteCoverSpace) -> Option<Subset> {
    let gen = s.generator().members();
    gen.iter().copied().find(|w| !gen.iter().any(|u| strongly_rather_below(s, *w, *u)))
}

/// The largest cover space structure contained in `s`, found by enumerating
/// every canonical cover that `s` makes Cauchy and keeping those whose
/// generated structure is regular.
pub fn regular_reflection(s: &FiniteCoverSpace, limits: &Limits) -> Result<FiniteCoverSpace, SpaceError> {
    if satisfies_cr(s) {
        return Ok(s.clone());
    }
    let n = s.n();
    limits.check_covers("regular_reflection", n)?;
    let mut acc = Cover::whole(n);
    for e in canonical_covers(n, limits)? {
        if !family_refines(s.generator().members(), e.members()) {
            continue;
        }
        if satisfies_cr(&FiniteCoverSpace::from_generator(&e)) {
            acc = canonicalize(&meet(&acc, &e)?);
        }
    }
    Ok(FiniteCoverSpace::from_generator(&acc))
}

/// Proper: `C ∪ {∅}` Cauchy implies `C` Cauchy. On a finite inhabited
/// carrier this holds exactly when the canonical generator omits `∅`.
pub fn is_proper(s: &FiniteCoverSpace) -> bool {
    s.generator().members().iter().all(|u| u.is_inhabited())
}

/// `U` is a neighbourhood of `x` when `{x} ≺ U`.
pub fn is_neighborhood(s: &FiniteCoverSpace, x: usize, u: Subset) -> bool {
    rather_below(s, Subset::singleton(s.n(), x), u)
}

pub fn is_open(s: &FiniteCoverSpace, u: Subset) -> bool {
    u.elements().all(|x| is_neighborhood(s, x, u))
}

/// `{x | {x} ≺ U}`.
pub fn interior(s: &FiniteCoverSpace, u: Subset) -> Subset {
    let bits = (0..s.n()).filter(|&x| is_neighborhood(s, x, u)).fold(0u64, |a, x| a | 1 << x);
    Subset::from_bits(s.n(), bits)
}

/// Every neighbourhood of `x` meets `U`. Since the least neighbourhood is
/// the star of `x`, that single set decides it.
pub fn is_limit_point(s: &FiniteCoverSpace, x: usize, u: Subset) -> bool {
    s.star(x).meets(u)
}

/// The set of limit points.
pub fn closure(s: &FiniteCoverSpace, u: Subset) -> Subset {
    let bits = (0..s.n()).filter(|&x| is_limit_point(s, x, u)).fold(0u64, |a, x| a | 1 << x);
    Subset::from_bits(s.n(), bits)
}

pub fn is_closed(s: &FiniteCoverSpace, u: Subset) -> bool {
    closure(s, u).is_subset_of(u)
}

pub fn is_dense(s: &FiniteCoverSpace, d: Subset) -> bool {
    closure(s, d).is_full()
}

/// A finite topology, given by its family of open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    n: usize,
    opens: Vec<Subset>,
}

impl FiniteTopology {
    pub fn new(n: usize, opens: Vec<Subset>) -> Result<FiniteTopology, SpaceError> {
        crate::finkernel::Carrier::new(n)?;
        let mut opens = opens;
        for o in &opens {
            same_carrier_n(n, o.carrier_size())?;
        }
        opens.sort();
        opens.dedup();
        let has = |s: Subset| opens.binary_search(&s).is_ok();
        if !has(Subset::empty(n)) || !has(Subset::full(n)) {
            return Err(SpaceError::NotATopology);
        }
        for a in &opens {
            for b in &opens {
                if !has(a.union(*b)) || !has(a.intersection(*b)) {
                    return Err(SpaceError::NotATopology);
                }
            }
        }
        Ok(FiniteTopology { n, opens })
    }

    /// The topology generated by a family of opens (closing under finite
    /// intersections and unions).
    pub fn generated_by(n: usize, base: &[Subset]) -> Result<FiniteTopology, SpaceError> {
        crate::finkernel::Carrier::new(n)?;
        let mut opens: Vec<Subset> = vec![Subset::empty(n), Subset::full(n)];
        opens.extend_from_slice(base);
        loop {
            let mut next = opens.clone();
            for a in &opens {
                for b in &opens {
                    next.push(a.union(*b));
                    next.push(a.intersection(*b));
                }
            }
            next.sort();
            next.dedup();
            if next.len() == opens.len() {
                return FiniteTopology::new(n, next);
            }
            opens = next;
        }
    }

    pub fn discrete(n: usize) -> Result<FiniteTopology, SpaceError> {
        let base: Vec<Subset> = (0..n).map(|x| Subset::singleton(n, x)).collect();
        FiniteTopology::generated_by(n, &base)
    }

    pub fn indiscrete(n: usize) -> Result<FiniteTopology, SpaceError> {
        FiniteTopology::new(n, vec![Subset::empty(n), Subset::full(n)])
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, u: Subset) -> bool {
        self.opens.binary_search(&u).is_ok()
    }

    /// Largest open subset.
    pub fn interior(&self, u: Subset) -> Subset {
        self.opens.iter().filter(|o| o.is_subset_of(u)).fold(Subset::empty(self.n), |a, o| a.union(*o))
    }

    /// Smallest closed superset.
    pub fn closure(&self, u: Subset) -> Subset {
        self.interior(u.complement()).complement()
    }

    /// Intersection of all opens containing `x`.
    pub fn minimal_neighborhood(&self, x: usize) -> Subset {
        self.opens.iter().filter(|o| o.contains(x)).fold(Subset::full(self.n), |a, o| a.intersection(*o))
    }

    /// Every point of an open `U` has an open `V ∋ x` with closure inside `U`.
    pub fn is_regular(&self) -> bool {
        self.regularity_witness().is_none()
    }

    /// An open set and a point in it with no closed neighbourhood inside.
    pub fn regularity_witness(&self) -> Option<(Subset, usize)> {
        for u in &self.opens {
            for x in u.elements() {
                let ok = self.opens.iter().any(|v| v.contains(x) && self.closure(*v).is_subset_of(*u));
                if !ok {
                    return Some((*u, x));
                }
            }
        }
        None
    }
}

fn same_carrier_n(a: usize, b: usize) -> Result<(), SpaceError> {
    if a != b {
        return Err(SpaceError::CarrierMismatch { left: a, right: b });
    }
    Ok(())
}

/// The induced topology `S(X)`.
pub fn to_topology(s: &FiniteCoverSpace, limits: &Limits) -> Result<FiniteTopology, SpaceError> {
    limits.check_subsets("to_topology", s.n())?;
    let opens = all_subsets(s.n()).filter(|u| is_open(s, *u)).collect();
    FiniteTopology::new(s.n(), opens)
}

/// `T(X)`: covers containing a neighbourhood of every point. Requires a
/// regular topology.
pub fn from_topology(t: &FiniteTopology) -> Result<FiniteCoverSpace, SpaceError> {
    if !t.is_regular() {
        return Err(SpaceError::TopologyNotRegular);
    }
    let n = t.carrier_size();
    let nbhds = (0..n).map(|x| t.minimal_neighborhood(x));
    Ok(FiniteCoverSpace::from_generator(&Cover::new(n, nbhds)?))
}

/// Preimages of Cauchy covers are Cauchy.
pub fn is_cover_map(f: &FnTable, x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Result<bool, SpaceError> {
    f.check_between(x, y)?;
    Ok(cover_map_witness(f, x, y).is_none())
}

/// A generator member of `y` whose preimage cover is not Cauchy in `x`.
pub fn cover_map_witness(f: &FnTable, x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Option<Subset> {
    let pre: Vec<Subset> = y.generator().members().iter().map(|w| f.preimage(*w)).collect();
    x.generator()
        .members()
        .iter()
        .copied()
        .find(|u| !pre.iter().any(|p| u.is_subset_of(*p)))
}

/// A cover map such that, for the generator `E` of `x`,
/// `{V | ∃U ∈ E, f⁻¹(V) ⊆ U}` is Cauchy in `y`.
pub fn is_embedding(f: &FnTable, x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Result<bool, SpaceError> {
    if !is_cover_map(f, x, y)? {
        return Ok(false);
    }
    let ex = x.generator().members();
    Ok(y
        .generator()
        .members()
        .iter()
        .all(|w| ex.iter().any(|u| f.preimage(*w).is_subset_of(*u))))
}

/// The image of `f` is dense in `y`.
pub fn is_dense_map(f: &FnTable, x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Result<bool, SpaceError> {
    f.check_between(x, y)?;
    Ok(is_dense(y, f.image(x.full())))
}

/// A bijective cover map whose inverse is a cover map.
pub fn is_isomorphism(f: &FnTable, x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Result<bool, SpaceError> {
    f.check_between(x, y)?;
    if x.n() != y.n() || !f.is_injective() {
        return Ok(false);
    }
    let mut inv = vec![0; y.n()];
    for (a, &b) in f.values().iter().enumerate() {
        inv[b] = a;
    }
    let g = FnTable::new(x.n(), inv)?;
    Ok(is_cover_map(f, x, y)? && is_cover_map(&g, y, x)?)
}

/// Search all bijections for an isomorphism. Generators are compared as
/// canonical antichains after relabelling.
pub fn find_isomorphism(x: &FiniteCoverSpace, y: &FiniteCoverSpace) -> Option<FnTable> {
    if x.n() != y.n() || x.generator().len() != y.generator().len() || x.n() > 9 {
        return None;
    }
    let n = x.n();
    let target = y.generator().clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found = None;
    permute(&mut perm, 0, &mut |p| {
        let f = FnTable::new(n, p.to_vec()).expect("permutation");
        let img = x.generator().members().iter().map(|u| f.image(*u));
        let c = Cover::new(n, img).expect("bijective image covers");
        if canonicalize(&c) == target {
            found = Some(f);
            true
        } else {
            false
        }
    });
    found
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return visit(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permute(p, k + 1, visit) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}
