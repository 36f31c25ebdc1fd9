//! Entourages and quasiuniform bases on finite carriers.
//!
//! A relation on `n` points is stored row-wise as bitsets: `rows[x]` is the
//! section `U[x] = {y : (x, y) ∈ U}`.  Composition follows the convention
//! `(x, z) ∈ V ∘ U` iff some `y` has `(x, y) ∈ U` and `(y, z) ∈ V` — the
//! right operand acts first — so `(V ∘ U)[x]` is the union of `V[y]` over
//! `y ∈ U[x]`.

use thiserror::Error;

use crate::qmetric::{BallKind, QmSpace};
use crate::set::PointSet;
use crate::topo::{AxiomCheck, FiniteTopology, NbhdSystem, TopoError};

#[derive(Debug, Clone, Error)]
pub enum BaseError {
    #[error("base is empty")]
    Empty,
    #[error("entourages live on carriers of different sizes")]
    MixedCarriers,
    #[error("base axiom {axiom} fails: {witness}")]
    Axiom { axiom: &'static str, witness: String },
    #[error("value set is not atom-free, which the entourage base requires")]
    NotAtomFree,
    #[error(transparent)]
    Topo(#[from] TopoError),
}

/// A binary relation on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Entourage {
    n: usize,
    rows: Vec<PointSet>,
}

impl Entourage {
    pub fn empty(n: usize) -> Entourage {
        Entourage { n, rows: vec![PointSet::empty(n); n] }
    }

    pub fn diagonal(n: usize) -> Entourage {
        Entourage { n, rows: (0..n).map(|x| PointSet::singleton(n, x)).collect() }
    }

    pub fn full(n: usize) -> Entourage {
        Entourage { n, rows: vec![PointSet::full(n); n] }
    }

    pub fn from_rows(rows: Vec<PointSet>) -> Entourage {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.carrier_len() == n));
        Entourage { n, rows }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Entourage {
        let mut e = Entourage::empty(n);
        for &(x, y) in pairs {
            e.insert(x, y);
        }
        e
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x].insert(y);
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    /// The section `U[x]`.
    pub fn section(&self, x: usize) -> &PointSet {
        &self.rows[x]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.rows[x].iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn includes_diagonal(&self) -> bool {
        (0..self.n).all(|x| self.rows[x].contains(x))
    }

    pub fn is_subset(&self, other: &Entourage) -> bool {
        assert_eq!(self.n, other.n);
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn intersect(&self, other: &Entourage) -> Entourage {
        assert_eq!(self.n, other.n);
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.intersect(b)).collect();
        Entourage { n: self.n, rows }
    }

    pub fn union(&self, other: &Entourage) -> Entourage {
        assert_eq!(self.n, other.n);
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a.union(b)).collect();
        Entourage { n: self.n, rows }
    }

    /// `self ∘ first`: the right operand acts first.
    pub fn compose(&self, first: &Entourage) -> Entourage {
        assert_eq!(self.n, first.n);
        let rows = (0..self.n)
            .map(|x| {
                let mut out = PointSet::empty(self.n);
                for y in first.rows[x].iter() {
                    out.union_with(&self.rows[y]);
                }
                out
            })
            .collect();
        Entourage { n: self.n, rows }
    }

    pub fn inverse(&self) -> Entourage {
        let mut inv = Entourage::empty(self.n);
        for x in 0..self.n {
            for y in self.rows[x].iter() {
                inv.insert(y, x);
            }
        }
        inv
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.inverse()
    }
}

/// Axiom status of a candidate quasiuniform base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseFlags {
    /// Every member contains the diagonal.
    pub ub1: AxiomCheck,
    /// Every two members have a member below their intersection.
    pub ub2: AxiomCheck,
    /// Every member `U` has a member `V` with `V ∘ V ⊆ U`.
    pub ub3: AxiomCheck,
}

impl BaseFlags {
    pub fn is_base(&self) -> bool {
        self.ub1.holds && self.ub2.holds && self.ub3.holds
    }
}

fn check(ok: bool, witness: impl FnOnce() -> String) -> AxiomCheck {
    if ok {
        AxiomCheck { holds: true, witness: None }
    } else {
        AxiomCheck { holds: false, witness: Some(witness()) }
    }
}

/// Deduplicates a candidate base and checks the three base axioms.
pub fn validate_base(base: &[Entourage]) -> Result<(Vec<Entourage>, BaseFlags), BaseError> {
    if base.is_empty() {
        return Err(BaseError::Empty);
    }
    let n = base[0].points();
    if base.iter().any(|u| u.points() != n) {
        return Err(BaseError::MixedCarriers);
    }
    let mut members: Vec<Entourage> = Vec::new();
    for u in base {
        if !members.contains(u) {
            members.push(u.clone());
        }
    }
    let mut ub1 = AxiomCheck { holds: true, witness: None };
    for (i, u) in members.iter().enumerate() {
        if !u.includes_diagonal() {
            ub1 = check(false, || format!("member {i} misses the diagonal"));
            break;
        }
    }
    let mut ub2 = AxiomCheck { holds: true, witness: None };
    'ub2: for (i, u) in members.iter().enumerate() {
        for (j, v) in members.iter().enumerate() {
            let uv = u.intersect(v);
            if !members.iter().any(|w| w.is_subset(&uv)) {
                ub2 = check(false, || format!("no member inside members {i} ∩ {j}"));
                break 'ub2;
            }
        }
    }
    let mut ub3 = AxiomCheck { holds: true, witness: None };
    for (i, u) in members.iter().enumerate() {
        if !members.iter().any(|v| v.compose(v).is_subset(u)) {
            ub3 = check(false, || format!("no half-size member for member {i}"));
            break;
        }
    }
    Ok((members, BaseFlags { ub1, ub2, ub3 }))
}

/// Whether `u` belongs to the quasiuniformity generated by the base, i.e.
/// contains some member.
pub fn in_quasiuniformity(base: &[Entourage], u: &Entourage) -> bool {
    base.iter().any(|v| v.is_subset(u))
}

/// Whether the generated quasiuniformity is a uniformity: the inverse of
/// every member again belongs to it.
pub fn generates_uniformity(base: &[Entourage]) -> bool {
    base.iter().all(|u| in_quasiuniformity(base, &u.inverse()))
}

/// The topology of a quasiuniform base: neighbourhoods of `x` are the
/// sections `U[x]`.
pub fn base_topology(base: &[Entourage]) -> Result<FiniteTopology, BaseError> {
    let (members, flags) = validate_base(base)?;
    for (name, c) in [("UB1", &flags.ub1), ("UB2", &flags.ub2), ("UB3", &flags.ub3)] {
        if !c.holds {
            return Err(BaseError::Axiom {
                axiom: name,
                witness: c.witness.clone().unwrap_or_default(),
            });
        }
    }
    let n = members[0].points();
    let at = (0..n)
        .map(|x| members.iter().map(|u| u.section(x).clone()).collect())
        .collect();
    let system = NbhdSystem::new(n, at);
    // The base axioms make the sections a neighbourhood system; assert
    // rather than re-derive.
    let nf = system.validate();
    assert!(nf.is_system(), "sections of a quasiuniform base must satisfy B1-B3: {nf:?}");
    Ok(system.topology_of()?)
}

/// How two bases on one carrier relate: mutual cofinality means they generate
/// the same quasiuniformity, which implies (but is weaker than is implied by)
/// inducing the same topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseComparison {
    pub a_refines_b: bool,
    pub b_refines_a: bool,
    pub same_quasiuniformity: bool,
    pub same_topology: bool,
}

pub fn compare_bases(a: &[Entourage], b: &[Entourage]) -> Result<BaseComparison, BaseError> {
    let ta = base_topology(a)?;
    let tb = base_topology(b)?;
    let a_refines_b = b.iter().all(|u| in_quasiuniformity(a, u));
    let b_refines_a = a.iter().all(|u| in_quasiuniformity(b, u));
    let same_quasiuniformity = a_refines_b && b_refines_a;
    let same_topology = ta == tb;
    if same_quasiuniformity {
        assert!(same_topology, "equal quasiuniformities must induce equal topologies");
    }
    Ok(BaseComparison { a_refines_b, b_refines_a, same_quasiuniformity, same_topology })
}

/// The entourage base of a quasimetric over an atom-free value set:
/// `U_m = {(x, y) : f(x, y) ⊴ m}` for `m ∈ M*`, deduplicated.
///
/// Returns the deduplicated base together with the map from non-neutral
/// value-set elements (ascending) to member positions.
pub struct QmBase {
    pub members: Vec<Entourage>,
    /// `member_of[i]` is the member position of the i-th non-neutral element.
    pub member_of: Vec<usize>,
}

pub fn base_from_qm(q: &QmSpace) -> Result<QmBase, BaseError> {
    if !q.mvs().is_atom_free() {
        return Err(BaseError::NotAtomFree);
    }
    let n = q.len();
    let mut members: Vec<Entourage> = Vec::new();
    let mut member_of = Vec::new();
    for m in q.mvs().nonneutral() {
        let rows = (0..n).map(|x| q.ball(x, m, BallKind::Closed)).collect();
        let u = Entourage::from_rows(rows);
        let pos = members.iter().position(|v| *v == u).unwrap_or_else(|| {
            members.push(u.clone());
            members.len() - 1
        });
        member_of.push(pos);
    }
    let (deduped, flags) = validate_base(&members)?;
    assert_eq!(deduped.len(), members.len(), "members were pre-deduplicated");
    for (name, c) in [("UB1", &flags.ub1), ("UB2", &flags.ub2), ("UB3", &flags.ub3)] {
        assert!(c.holds, "quasimetric base must satisfy {name}: {:?}", c.witness);
    }
    // The base topology agrees with the quasimetric topology (closed and
    // open balls are equivalent over an atom-free value set).
    assert_eq!(base_topology(&members)?, q.induced_topology());
    Ok(QmBase { members, member_of })
}
