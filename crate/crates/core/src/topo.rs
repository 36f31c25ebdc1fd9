//! Exact finite topology machinery: subbase generation, neighbourhood
//! systems, relative/product topologies, minimal neighbourhoods, covers and
//! point-finite refinements, and exhaustive enumeration at tiny orders.
//!
//! A finite topology is stored by its minimal-open-neighbourhood map
//! `x -> U(x)`: the opens are exactly the sets `V` with `U(x) ⊆ V` for every
//! `x ∈ V`, so the map is a canonical, polynomial-size representation and
//! equality of topologies is equality of maps.  Explicit open families are
//! materialized on demand for small carriers only.

use std::collections::HashSet;

use thiserror::Error;

use crate::set::PointSet;

/// Carriers above this size refuse to materialize their full open family.
pub const MAX_MATERIALIZE: usize = 22;

#[derive(Debug, Clone, Error)]
pub enum TopoError {
    #[error("family is not a topology: {0}")]
    NotATopology(String),
    #[error("carrier of {0} points is too large to materialize all opens")]
    TooLarge(usize),
    #[error("neighbourhood system fails {axiom}: {witness}")]
    BadSystem { axiom: &'static str, witness: String },
    #[error("subbase reduction hypothesis violated: {0}")]
    ReductionHypothesis(String),
    #[error("cover is not an open cover: {0}")]
    BadCover(String),
    #[error("point count {0} outside the supported enumeration range 1..=4")]
    EnumOutOfRange(usize),
}

/// A topology on a finite carrier, canonically represented by minimal open
/// neighbourhoods.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteTopology {
    n: usize,
    min_open: Vec<PointSet>,
}

impl FiniteTopology {
    /// Smallest topology containing the subbase.
    ///
    /// The minimal open at `x` is the intersection of the subbase members
    /// containing `x` (with the whole carrier as the empty intersection);
    /// that set is itself a finite intersection of subbase members and hence
    /// open, and every basic open containing `x` contains it.
    pub fn generate(n: usize, subbase: &[PointSet]) -> FiniteTopology {
        let min_open = (0..n)
            .map(|x| {
                let mut m = PointSet::full(n);
                for s in subbase {
                    if s.contains(x) {
                        m.intersect_with(s);
                    }
                }
                m
            })
            .collect();
        // Already saturated (see module tests), but saturate defensively so
        // the invariant never depends on the argument above.
        Self::from_min_map(n, min_open)
    }

    /// Builds the topology whose opens are the sets closed under the given
    /// neighbourhood assignment, saturating it into true minimal opens.
    pub(crate) fn from_min_map(n: usize, mut min_open: Vec<PointSet>) -> FiniteTopology {
        for (x, m) in min_open.iter_mut().enumerate() {
            m.insert(x);
        }
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut grown = min_open[x].clone();
                for y in min_open[x].iter() {
                    if !min_open[y].is_subset(&grown) {
                        grown.union_with(&min_open[y].clone());
                        changed = true;
                    }
                }
                min_open[x] = grown;
            }
            if !changed {
                break;
            }
        }
        FiniteTopology { n, min_open }
    }

    pub fn discrete(n: usize) -> FiniteTopology {
        FiniteTopology {
            n,
            min_open: (0..n).map(|x| PointSet::singleton(n, x)).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> FiniteTopology {
        FiniteTopology { n, min_open: vec![PointSet::full(n); n] }
    }

    /// Ingests an explicit open family, checking it really is a topology.
    pub fn from_opens(n: usize, opens: &[PointSet]) -> Result<FiniteTopology, TopoError> {
        let family: HashSet<&PointSet> = opens.iter().collect();
        if !family.contains(&PointSet::empty(n)) {
            return Err(TopoError::NotATopology("missing the empty set".into()));
        }
        if !family.contains(&PointSet::full(n)) {
            return Err(TopoError::NotATopology("missing the full carrier".into()));
        }
        for a in opens {
            for b in opens {
                if !family.contains(&a.union(b)) {
                    return Err(TopoError::NotATopology(format!(
                        "not closed under union: {a:?} ∪ {b:?}"
                    )));
                }
                if !family.contains(&a.intersect(b)) {
                    return Err(TopoError::NotATopology(format!(
                        "not closed under intersection: {a:?} ∩ {b:?}"
                    )));
                }
            }
        }
        let min_open = (0..n)
            .map(|x| {
                let mut m = PointSet::full(n);
                for s in opens {
                    if s.contains(x) {
                        m.intersect_with(s);
                    }
                }
                m
            })
            .collect();
        Ok(FiniteTopology { n, min_open })
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn is_open(&self, v: &PointSet) -> bool {
        v.iter().all(|x| self.min_open[x].is_subset(v))
    }

    /// Smallest neighbourhood of each point; always open on finite carriers.
    pub fn min_neighbourhoods(&self) -> &[PointSet] {
        &self.min_open
    }

    pub fn min_open(&self, x: usize) -> &PointSet {
        &self.min_open[x]
    }

    /// All opens, sorted by (size, bit value).  Refuses large carriers.
    pub fn opens(&self) -> Result<Vec<PointSet>, TopoError> {
        if self.n > MAX_MATERIALIZE {
            return Err(TopoError::TooLarge(self.n));
        }
        let mut basis: Vec<PointSet> = self.min_open.clone();
        basis.sort();
        basis.dedup();
        let mut seen: HashSet<PointSet> = HashSet::new();
        seen.insert(PointSet::empty(self.n));
        let mut queue: Vec<PointSet> = vec![PointSet::empty(self.n)];
        while let Some(u) = queue.pop() {
            for b in &basis {
                let v = u.union(b);
                if !seen.contains(&v) {
                    seen.insert(v.clone());
                    queue.push(v);
                }
            }
        }
        let mut out: Vec<PointSet> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn open_count(&self) -> Result<usize, TopoError> {
        Ok(self.opens()?.len())
    }

    /// Trace topology on a subset; points are reindexed in ascending order.
    pub fn relative(&self, a: &PointSet) -> FiniteTopology {
        let idx: Vec<usize> = a.iter().collect();
        let m = idx.len();
        let min_open = idx
            .iter()
            .map(|&x| {
                let mut s = PointSet::empty(m);
                for (j, &y) in idx.iter().enumerate() {
                    if self.min_open[x].contains(y) {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        // The trace of a minimal open is minimal in the trace topology, so no
        // saturation is needed; keep it anyway for safety.
        FiniteTopology::from_min_map(m, min_open)
    }

    /// Product topology; the pair `(x, y)` is encoded as `x * other.n + y`.
    pub fn product(&self, other: &FiniteTopology) -> FiniteTopology {
        let n = self.n * other.n;
        let mut min_open = Vec::with_capacity(n);
        for x in 0..self.n {
            for y in 0..other.n {
                let mut s = PointSet::empty(n);
                for a in self.min_open[x].iter() {
                    for b in other.min_open[y].iter() {
                        s.insert(a * other.n + b);
                    }
                }
                min_open.push(s);
            }
        }
        FiniteTopology { n, min_open }
    }

    /// Specialization preorder edges: `x ⤳ y` iff every open containing `x`
    /// contains `y`, excluding loops.
    pub fn specialization_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for x in 0..self.n {
            for y in self.min_open[x].iter() {
                if y != x {
                    edges.push((x, y));
                }
            }
        }
        edges
    }
}

/// A per-point family of subsets with testable neighbourhood axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbhdSystem {
    n: usize,
    at: Vec<Vec<PointSet>>,
}

/// Outcome of one axiom check, with a human-readable failure witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub holds: bool,
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck { holds: true, witness: None }
    }
    fn fail(w: String) -> Self {
        AxiomCheck { holds: false, witness: Some(w) }
    }
}

/// Axiom status of a neighbourhood system: B1-B3 make it a neighbourhood
/// system, B1 + B2 + B3' an open one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbhdFlags {
    pub b1: AxiomCheck,
    pub b2: AxiomCheck,
    pub b3: AxiomCheck,
    pub b3_prime: AxiomCheck,
}

impl NbhdFlags {
    pub fn is_system(&self) -> bool {
        self.b1.holds && self.b2.holds && self.b3.holds
    }
    pub fn is_open_system(&self) -> bool {
        self.b1.holds && self.b2.holds && self.b3_prime.holds
    }
}

impl NbhdSystem {
    pub fn new(n: usize, at: Vec<Vec<PointSet>>) -> NbhdSystem {
        assert_eq!(at.len(), n);
        assert!(at.iter().all(|f| !f.is_empty()), "every B(x) must be nonempty");
        NbhdSystem { n, at }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn at(&self, x: usize) -> &[PointSet] {
        &self.at[x]
    }

    /// Least member of `B(x)` if one exists.  With B2 and a finite family the
    /// least member exists and equals the intersection of all members.
    fn least(&self, x: usize) -> Option<PointSet> {
        let mut inter = self.at[x][0].clone();
        for u in &self.at[x][1..] {
            inter.intersect_with(u);
        }
        self.at[x].iter().any(|u| *u == inter).then_some(inter)
    }

    pub fn validate(&self) -> NbhdFlags {
        let b1 = 'b1: {
            for x in 0..self.n {
                for (i, u) in self.at[x].iter().enumerate() {
                    if !u.contains(x) {
                        break 'b1 AxiomCheck::fail(format!("x={x} not in member {i} = {u:?}"));
                    }
                }
            }
            AxiomCheck::pass()
        };
        let b2 = 'b2: {
            for x in 0..self.n {
                for u in &self.at[x] {
                    for v in &self.at[x] {
                        let uv = u.intersect(v);
                        if !self.at[x].iter().any(|w| w.is_subset(&uv)) {
                            break 'b2 AxiomCheck::fail(format!(
                                "no member below {u:?} ∩ {v:?} at x={x}"
                            ));
                        }
                    }
                }
            }
            AxiomCheck::pass()
        };
        let leasts: Option<Vec<PointSet>> = (0..self.n).map(|x| self.least(x)).collect();
        let b3 = match &leasts {
            // With least members, B3 reduces to: for every U in B(x) and
            // every y in least(x), least(y) ⊆ U.
            Some(ls) => 'b3: {
                for x in 0..self.n {
                    for u in &self.at[x] {
                        let v = &ls[x];
                        if v.iter().any(|y| !ls[y].is_subset(u)) {
                            // least(x) failed; by minimality no other V works.
                            break 'b3 AxiomCheck::fail(format!(
                                "no V in B({x}) screens {u:?}"
                            ));
                        }
                    }
                }
                AxiomCheck::pass()
            }
            None => 'b3: {
                for x in 0..self.n {
                    for u in &self.at[x] {
                        let ok = self.at[x].iter().any(|v| {
                            v.iter().all(|y| self.at[y].iter().any(|w| w.is_subset(u)))
                        });
                        if !ok {
                            break 'b3 AxiomCheck::fail(format!("no V in B({x}) screens {u:?}"));
                        }
                    }
                }
                AxiomCheck::pass()
            }
        };
        let b3p = 'b3p: {
            for x in 0..self.n {
                for u in &self.at[x] {
                    for y in u.iter() {
                        if !self.at[y].iter().any(|v| v.is_subset(u)) {
                            break 'b3p AxiomCheck::fail(format!(
                                "no member of B({y}) inside {u:?} from B({x})"
                            ));
                        }
                    }
                }
            }
            AxiomCheck::pass()
        };
        NbhdFlags { b1, b2, b3, b3_prime: b3p }
    }

    /// The topology `{V : for every x in V some member of B(x) is inside V}`.
    /// Requires B1-B3.
    pub fn topology_of(&self) -> Result<FiniteTopology, TopoError> {
        let flags = self.validate();
        for (name, check) in
            [("B1", &flags.b1), ("B2", &flags.b2), ("B3", &flags.b3)]
        {
            if !check.holds {
                return Err(TopoError::BadSystem {
                    axiom: name,
                    witness: check.witness.clone().unwrap_or_default(),
                });
            }
        }
        let min0 = (0..self.n)
            .map(|x| self.least(x).expect("B2 guarantees a least member"))
            .collect();
        Ok(FiniteTopology::from_min_map(self.n, min0))
    }

    /// Mutual pointwise refinement; on finite carriers this coincides with
    /// equality of the induced topologies.
    pub fn equivalent(&self, other: &NbhdSystem) -> bool {
        assert_eq!(self.n, other.n);
        let refines = |a: &NbhdSystem, b: &NbhdSystem| {
            (0..a.n).all(|x| {
                a.at[x]
                    .iter()
                    .all(|u| b.at[x].iter().any(|v| v.is_subset(u)))
            })
        };
        refines(self, other) && refines(other, self)
    }
}

/// Checks the subbase-reduction hypothesis (`V ⊆ U`, every member of `U` a
/// union of members of `V`), then verifies both families generate the same
/// topology.
pub fn subbase_reduction_equivalent(
    n: usize,
    u: &[PointSet],
    v: &[PointSet],
) -> Result<bool, TopoError> {
    for s in v {
        if !u.contains(s) {
            return Err(TopoError::ReductionHypothesis(format!("{s:?} not in U")));
        }
    }
    for s in u {
        let mut covered = PointSet::empty(n);
        for t in v {
            if t.is_subset(s) {
                covered.union_with(t);
            }
        }
        if covered != *s {
            return Err(TopoError::ReductionHypothesis(format!(
                "{s:?} is not a union of members of V"
            )));
        }
    }
    Ok(FiniteTopology::generate(n, u) == FiniteTopology::generate(n, v))
}

/// A target for [`induced_by_maps`]: either a topology or an open
/// neighbourhood system on the codomain.
pub enum MapTarget<'a> {
    Topology(&'a FiniteTopology),
    System(&'a NbhdSystem),
}

/// Topology induced by a family of maps: generated by the preimages of the
/// targets' opens.  For neighbourhood-system targets the subbase of member
/// preimages is used and checked to agree with the full-open-set subbase.
pub fn induced_by_maps(n: usize, targets: &[(MapTarget<'_>, Vec<usize>)]) -> FiniteTopology {
    let mut subbase: Vec<PointSet> = Vec::new();
    let mut reference: Vec<PointSet> = Vec::new();
    for (target, map) in targets {
        let preimage = |s: &PointSet| {
            let mut p = PointSet::empty(n);
            for (x, &y) in map.iter().enumerate() {
                if s.contains(y) {
                    p.insert(x);
                }
            }
            p
        };
        match target {
            MapTarget::Topology(t) => {
                assert!(map.iter().all(|&y| y < t.points()));
                // Preimages of minimal opens generate the same topology as
                // preimages of all opens (every open is a union of them).
                for m in t.min_neighbourhoods() {
                    subbase.push(preimage(m));
                    reference.push(preimage(m));
                }
            }
            MapTarget::System(b) => {
                assert!(map.iter().all(|&y| y < b.points()));
                for y in 0..b.points() {
                    for v in b.at(y) {
                        subbase.push(preimage(v));
                    }
                }
                let t = b.topology_of().expect("system target must satisfy B1-B3");
                for m in t.min_neighbourhoods() {
                    reference.push(preimage(m));
                }
            }
        }
    }
    let result = FiniteTopology::generate(n, &subbase);
    // Member preimages and open-set preimages must agree.
    assert_eq!(result, FiniteTopology::generate(n, &reference));
    result
}

/// Evaluates the open-cover criterion: `V` is open iff for every `x ∈ V` and
/// every cover member containing `x` some trace-open sits between `x` and
/// `V`.  Asserted to agree with direct openness.
pub fn is_open_via_cover(
    t: &FiniteTopology,
    cover: &[PointSet],
    v: &PointSet,
) -> Result<bool, TopoError> {
    check_open_cover(t, cover)?;
    let mut criterion = true;
    'outer: for x in v.iter() {
        for u in cover {
            if u.contains(x) {
                // The minimal trace-open of U at x is min_open(x) ∩ U.
                if !t.min_open(x).intersect(u).is_subset(v) {
                    criterion = false;
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(criterion, t.is_open(v));
    Ok(criterion)
}

fn check_open_cover(t: &FiniteTopology, cover: &[PointSet]) -> Result<(), TopoError> {
    let mut all = PointSet::empty(t.points());
    for u in cover {
        if !t.is_open(u) {
            return Err(TopoError::BadCover(format!("{u:?} is not open")));
        }
        all.union_with(u);
    }
    if !all.is_full() {
        return Err(TopoError::BadCover("members do not cover the carrier".into()));
    }
    Ok(())
}

/// An open cover together with a point-finite open refinement and per-member
/// containment witnesses.
#[derive(Clone, Debug)]
pub struct CoverData {
    pub cover: Vec<PointSet>,
    pub refinement: Vec<PointSet>,
    /// `assignment[j]` is the index of a cover member containing
    /// `refinement[j]`.
    pub assignment: Vec<usize>,
    /// Largest number of refinement members through a single point.
    pub max_multiplicity: usize,
}

/// On a finite carrier every open cover is already point-finite; this returns
/// the cover itself minimized by greedily dropping redundant members in
/// (size ascending, bit value) order.
pub fn point_finite_refinement(
    t: &FiniteTopology,
    cover: &[PointSet],
) -> Result<CoverData, TopoError> {
    check_open_cover(t, cover)?;
    let mut members: Vec<(PointSet, usize)> = Vec::new();
    for (i, u) in cover.iter().enumerate() {
        if !members.iter().any(|(m, _)| m == u) {
            members.push((u.clone(), i));
        }
    }
    members.sort_by(|(a, _), (b, _)| a.cmp(b));
    let mut kept = vec![true; members.len()];
    for j in 0..members.len() {
        let mut rest = PointSet::empty(t.points());
        for (i, (m, _)) in members.iter().enumerate() {
            if i != j && kept[i] {
                rest.union_with(m);
            }
        }
        if rest.is_full() {
            kept[j] = false;
        }
    }
    let mut refinement = Vec::new();
    let mut assignment = Vec::new();
    for (i, (m, src)) in members.into_iter().enumerate() {
        if kept[i] {
            refinement.push(m);
            assignment.push(src);
        }
    }
    let max_multiplicity = (0..t.points())
        .map(|x| refinement.iter().filter(|m| m.contains(x)).count())
        .max()
        .unwrap_or(0);
    Ok(CoverData { cover: cover.to_vec(), refinement, assignment, max_multiplicity })
}

/// Result of the dual-path exhaustive enumeration of all topologies on `n`
/// labeled points.
pub struct EnumeratedTopologies {
    pub topologies: Vec<FiniteTopology>,
    /// Count from generating a topology out of every subbase family.
    pub subbase_path: usize,
    /// Count from filtering every family closed under union/intersection.
    pub closed_family_path: usize,
}

/// Enumerates all distinct topologies on `n` labeled points (`n <= 4`) by two
/// independent code paths and checks they produce the same collection.
pub fn enumerate_topologies(n: usize) -> Result<EnumeratedTopologies, TopoError> {
    if !(1..=4).contains(&n) {
        return Err(TopoError::EnumOutOfRange(n));
    }
    let subsets: Vec<PointSet> = (0..1u32 << n)
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            PointSet::from_indices(n, &idx)
        })
        .collect();

    // Path A: every family of subsets, used as a subbase.
    let mut via_subbase: HashSet<FiniteTopology> = HashSet::new();
    for fam in 0..1u64 << (1 << n) {
        let subbase: Vec<PointSet> = (0..1 << n)
            .filter(|&s| fam >> s & 1 == 1)
            .map(|s| subsets[s].clone())
            .collect();
        via_subbase.insert(FiniteTopology::generate(n, &subbase));
    }

    // Path B: every family containing ∅ and X and closed under pairwise
    // union and intersection, checked with mask arithmetic.
    let full = (1usize << n) - 1;
    let mut via_closed: HashSet<FiniteTopology> = HashSet::new();
    let mut closed_count = 0usize;
    'fam: for fam in 0..1u64 << (1 << n) {
        if fam & 1 == 0 || fam >> full & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..=full).filter(|&s| fam >> s & 1 == 1).collect();
        for &s in &members {
            for &t in &members {
                if fam >> (s | t) & 1 == 0 || fam >> (s & t) & 1 == 0 {
                    continue 'fam;
                }
            }
        }
        closed_count += 1;
        let opens: Vec<PointSet> = members.iter().map(|&s| subsets[s].clone()).collect();
        via_closed.insert(FiniteTopology::from_opens(n, &opens).expect("closed family"));
    }

    assert_eq!(via_subbase, via_closed, "enumeration paths disagree on the collection");
    let subbase_path = via_subbase.len();
    let mut topologies: Vec<FiniteTopology> = via_subbase.into_iter().collect();
    topologies.sort_by(|a, b| a.min_neighbourhoods().cmp(b.min_neighbourhoods()));
    Ok(EnumeratedTopologies { topologies, subbase_path, closed_family_path: closed_count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: usize, idx: &[usize]) -> PointSet {
        PointSet::from_indices(n, idx)
    }

    /// Literal worklist closure to a fixpoint: intersections, then unions,
    /// each round.  Independent oracle for `generate`.
    fn generate_by_closure(n: usize, subbase: &[PointSet]) -> Vec<PointSet> {
        let mut fam: HashSet<PointSet> = subbase.iter().cloned().collect();
        fam.insert(PointSet::empty(n));
        fam.insert(PointSet::full(n));
        loop {
            let snapshot: Vec<PointSet> = fam.iter().cloned().collect();
            let before = fam.len();
            for a in &snapshot {
                for b in &snapshot {
                    fam.insert(a.intersect(b));
                }
            }
            let snapshot: Vec<PointSet> = fam.iter().cloned().collect();
            for a in &snapshot {
                for b in &snapshot {
                    fam.insert(a.union(b));
                }
            }
            if fam.len() == before {
                break;
            }
        }
        let mut out: Vec<PointSet> = fam.into_iter().collect();
        out.sort();
        out
    }

    #[test]
    fn generate_three_point_example() {
        let t = FiniteTopology::generate(3, &[ps(3, &[0, 1]), ps(3, &[1, 2])]);
        let opens = t.opens().unwrap();
        let expected = vec![
            ps(3, &[]),
            ps(3, &[1]),
            ps(3, &[0, 1]),
            ps(3, &[1, 2]),
            ps(3, &[0, 1, 2]),
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(opens, expected);
    }

    #[test]
    fn generate_matches_worklist_closure() {
        // Oracle comparison over every subbase family on 3 points.
        for fam in 0u32..1 << 8 {
            let subbase: Vec<PointSet> = (0..8u32)
                .filter(|s| fam >> s & 1 == 1)
                .map(|s| {
                    let idx: Vec<usize> = (0..3).filter(|&i| s >> i & 1 == 1).collect();
                    ps(3, &idx)
                })
                .collect();
            let fast = FiniteTopology::generate(3, &subbase).opens().unwrap();
            let slow = generate_by_closure(3, &subbase);
            assert_eq!(fast, slow, "subbase {subbase:?}");
        }
    }

    #[test]
    fn empty_subbase_and_singletons() {
        assert_eq!(FiniteTopology::generate(4, &[]), FiniteTopology::indiscrete(4));
        let singles: Vec<PointSet> = (0..4).map(|i| ps(4, &[i])).collect();
        let t = FiniteTopology::generate(4, &singles);
        assert_eq!(t, FiniteTopology::discrete(4));
        assert_eq!(t.open_count().unwrap(), 16);
    }

    #[test]
    fn generation_is_idempotent() {
        let t = FiniteTopology::generate(3, &[ps(3, &[0, 1]), ps(3, &[1, 2])]);
        let again = FiniteTopology::generate(3, &t.opens().unwrap());
        assert_eq!(t, again);
        let ingested = FiniteTopology::from_opens(3, &t.opens().unwrap()).unwrap();
        assert_eq!(t, ingested);
    }

    #[test]
    fn subbase_reduction() {
        let u = vec![ps(2, &[0, 1]), ps(2, &[0]), ps(2, &[1])];
        let v = vec![ps(2, &[0]), ps(2, &[1])];
        assert!(subbase_reduction_equivalent(2, &u, &v).unwrap());
        assert!(subbase_reduction_equivalent(2, &u, &u).unwrap());
        let bad_u = vec![ps(2, &[0, 1])];
        let bad_v = vec![ps(2, &[0])];
        assert!(subbase_reduction_equivalent(2, &bad_u, &bad_v).is_err());
    }

    #[test]
    fn nbhd_axioms_discrete_and_indiscrete() {
        let disc = NbhdSystem::new(2, vec![vec![ps(2, &[0])], vec![ps(2, &[1])]]);
        let flags = disc.validate();
        assert!(flags.is_system() && flags.is_open_system());
        assert_eq!(disc.topology_of().unwrap(), FiniteTopology::discrete(2));

        let ind = NbhdSystem::new(2, vec![vec![ps(2, &[0, 1])], vec![ps(2, &[0, 1])]]);
        assert!(ind.validate().is_open_system());
        assert_eq!(ind.topology_of().unwrap(), FiniteTopology::indiscrete(2));

        assert!(!disc.equivalent(&ind));
        assert!(disc.equivalent(&disc));
    }

    #[test]
    fn equivalence_matches_topology_equality_exhaustively() {
        // All single-member systems on 2 points.
        let subsets = [ps(2, &[0]), ps(2, &[1]), ps(2, &[0, 1])];
        let mut systems = Vec::new();
        for a in &subsets {
            for b in &subsets {
                let s = NbhdSystem::new(2, vec![vec![a.clone()], vec![b.clone()]]);
                if s.validate().is_system() {
                    systems.push(s);
                }
            }
        }
        for s1 in &systems {
            for s2 in &systems {
                assert_eq!(
                    s1.equivalent(s2),
                    s1.topology_of().unwrap() == s2.topology_of().unwrap()
                );
            }
        }
    }

    #[test]
    fn induced_by_identity_and_constant() {
        let sierp = FiniteTopology::generate(2, &[ps(2, &[0])]);
        let id = induced_by_maps(2, &[(MapTarget::Topology(&sierp), vec![0, 1])]);
        assert_eq!(id, sierp);
        let constant = induced_by_maps(3, &[(MapTarget::Topology(&sierp), vec![1, 1, 1])]);
        assert_eq!(constant, FiniteTopology::indiscrete(3));
    }

    #[test]
    fn induced_by_two_identity_maps() {
        // Two identity maps into the one-generator factors reproduce the
        // subbase-generated topology.
        let f1 = FiniteTopology::generate(3, &[ps(3, &[0, 1])]);
        let f2 = FiniteTopology::generate(3, &[ps(3, &[1, 2])]);
        let t = induced_by_maps(
            3,
            &[
                (MapTarget::Topology(&f1), vec![0, 1, 2]),
                (MapTarget::Topology(&f2), vec![0, 1, 2]),
            ],
        );
        assert_eq!(t, FiniteTopology::generate(3, &[ps(3, &[0, 1]), ps(3, &[1, 2])]));
    }

    #[test]
    fn induced_by_maps_is_monotone() {
        let f1 = FiniteTopology::generate(3, &[ps(3, &[0, 1])]);
        let f2 = FiniteTopology::generate(3, &[ps(3, &[1, 2])]);
        let coarse = induced_by_maps(3, &[(MapTarget::Topology(&f1), vec![0, 1, 2])]);
        let fine = induced_by_maps(
            3,
            &[
                (MapTarget::Topology(&f1), vec![0, 1, 2]),
                (MapTarget::Topology(&f2), vec![0, 1, 2]),
            ],
        );
        // Adding maps refines: every coarse open stays open.
        for u in coarse.opens().unwrap() {
            assert!(fine.is_open(&u));
        }
    }

    #[test]
    fn relative_and_product() {
        let sierp = FiniteTopology::generate(2, &[ps(2, &[0])]);
        let trace = sierp.relative(&ps(2, &[1]));
        assert_eq!(trace, FiniteTopology::indiscrete(1));
        let point = FiniteTopology::discrete(1);
        assert_eq!(sierp.product(&point), sierp);
        let d2 = FiniteTopology::discrete(2);
        assert_eq!(d2.product(&d2), FiniteTopology::discrete(4));
    }

    #[test]
    fn min_neighbourhoods_sierpinski() {
        let sierp = FiniteTopology::generate(2, &[ps(2, &[0])]);
        assert_eq!(sierp.min_open(0), &ps(2, &[0]));
        assert_eq!(sierp.min_open(1), &ps(2, &[0, 1]));
        for (x, u) in FiniteTopology::discrete(3).min_neighbourhoods().iter().enumerate() {
            assert_eq!(u, &ps(3, &[x]));
        }
        // Minimal neighbourhoods are open.
        for u in sierp.min_neighbourhoods() {
            assert!(sierp.is_open(u));
        }
    }

    #[test]
    fn open_via_cover_criterion() {
        let t = FiniteTopology::generate(3, &[ps(3, &[0, 1]), ps(3, &[1, 2])]);
        let cover = vec![ps(3, &[0, 1]), ps(3, &[1, 2])];
        assert!(is_open_via_cover(&t, &cover, &ps(3, &[1])).unwrap());
        assert!(!is_open_via_cover(&t, &cover, &ps(3, &[0])).unwrap());
        assert!(is_open_via_cover(&t, &cover, &ps(3, &[0, 1, 2])).unwrap());
        assert!(is_open_via_cover(&t, &[ps(3, &[0])], &ps(3, &[0])).is_err());
    }

    #[test]
    fn refinement_minimization() {
        let t = FiniteTopology::generate(3, &[ps(3, &[0, 1]), ps(3, &[1, 2])]);
        let cover = vec![ps(3, &[0, 1]), ps(3, &[1, 2])];
        let r = point_finite_refinement(&t, &cover).unwrap();
        assert_eq!(r.refinement, cover);
        assert_eq!(r.assignment, vec![0, 1]);

        let dup = vec![ps(3, &[0, 1]), ps(3, &[0, 1]), ps(3, &[1, 2])];
        let r = point_finite_refinement(&t, &dup).unwrap();
        assert_eq!(r.refinement.len(), 2);

        let disc = FiniteTopology::discrete(2);
        let r = point_finite_refinement(&disc, &[ps(2, &[0, 1]), ps(2, &[0])]).unwrap();
        assert_eq!(r.refinement, vec![ps(2, &[0, 1])]);
    }

    #[test]
    fn topology_counts_small() {
        // Labeled topologies on 1..4 points: 1, 4, 29, 355.
        let expect = [1usize, 4, 29, 355];
        for n in 1..=4 {
            let e = enumerate_topologies(n).unwrap();
            assert_eq!(e.subbase_path, expect[n - 1], "n={n}");
            assert_eq!(e.closed_family_path, expect[n - 1], "n={n}");
            assert_eq!(e.topologies.len(), expect[n - 1]);
        }
    }
}
