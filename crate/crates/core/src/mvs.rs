//! Finite metric value sets: Cayley-table representation, axiom checking,
//! the induced order relations, classification predicates, homomorphisms and
//! the standard constructions (absorbing-top adjunction, canonical metric
//! carrier, exhaustive enumeration at small orders).
//!
//! An MVS is a set with at least two elements and an associative operation
//! `+` with neutral element `e` such that `a + b = e` forces `a = b = e` (M3)
//! and every two non-neutral elements share a non-neutral left part (M4).

use std::fmt;

use thiserror::Error;

/// Axioms checked by [`MvsTable::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvsAxiom {
    /// At least two elements.
    Size,
    /// Associativity.
    M1,
    /// Declared neutral element really is neutral.
    M2,
    /// No nontrivial inverses.
    M3,
    /// Common left parts for non-neutral pairs.
    M4,
}

impl fmt::Display for MvsAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MvsAxiom::Size => write!(f, "size"),
            MvsAxiom::M1 => write!(f, "M1"),
            MvsAxiom::M2 => write!(f, "M2"),
            MvsAxiom::M3 => write!(f, "M3"),
            MvsAxiom::M4 => write!(f, "M4"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum MvsError {
    #[error("axiom {axiom} violated at {witness:?}")]
    Violation { axiom: MvsAxiom, witness: Vec<usize> },
    #[error("table entry out of range at ({row}, {col})")]
    EntryOutOfRange { row: usize, col: usize },
    #[error("table is not square over {expected} declared elements")]
    NotSquare { expected: usize },
    #[error("order {0} outside the supported enumeration range 2..=5")]
    OrderOutOfRange(usize),
    #[error("no common lower bound exists for {0:?} (M4 consistency failure)")]
    NoCommonLowerBound(Vec<usize>),
}

/// A validated finite MVS.
///
/// Elements are dense indices `0..k`; `labels` are presentation only.  The
/// order relations are cached at validation time: `leq(a, b)` holds iff
/// `a + c = b` for some `c`, `lt(a, b)` iff such a `c` exists with `c != e`.
#[derive(Clone, PartialEq, Eq)]
pub struct MvsTable {
    labels: Vec<String>,
    neutral: usize,
    table: Vec<usize>,
    leq: Vec<bool>,
    lt: Vec<bool>,
}

impl fmt::Debug for MvsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MvsTable")
            .field("labels", &self.labels)
            .field("neutral", &self.neutral)
            .field("table", &self.rows())
            .finish()
    }
}

impl MvsTable {
    /// Checks M1-M4 over the candidate table and caches the order relations.
    ///
    /// On failure reports the first violated axiom together with a witness
    /// (scan order is row-major, triples lexicographic).
    pub fn validate(
        labels: Vec<String>,
        neutral: usize,
        table: Vec<Vec<usize>>,
    ) -> Result<MvsTable, MvsError> {
        let k = labels.len();
        if k < 2 {
            return Err(MvsError::Violation { axiom: MvsAxiom::Size, witness: vec![k] });
        }
        if neutral >= k || table.len() != k {
            return Err(MvsError::NotSquare { expected: k });
        }
        let mut flat = Vec::with_capacity(k * k);
        for (i, row) in table.iter().enumerate() {
            if row.len() != k {
                return Err(MvsError::NotSquare { expected: k });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= k {
                    return Err(MvsError::EntryOutOfRange { row: i, col: j });
                }
                flat.push(v);
            }
        }
        let add = |a: usize, b: usize| flat[a * k + b];
        // M2 before M1: a bad neutral makes every later report confusing.
        for i in 0..k {
            if add(neutral, i) != i || add(i, neutral) != i {
                return Err(MvsError::Violation { axiom: MvsAxiom::M2, witness: vec![i] });
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if add(add(a, b), c) != add(a, add(b, c)) {
                        return Err(MvsError::Violation {
                            axiom: MvsAxiom::M1,
                            witness: vec![a, b, c],
                        });
                    }
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                if add(a, b) == neutral && (a != neutral || b != neutral) {
                    return Err(MvsError::Violation { axiom: MvsAxiom::M3, witness: vec![a, b] });
                }
            }
        }
        let mut leq = vec![false; k * k];
        let mut lt = vec![false; k * k];
        for a in 0..k {
            for c in 0..k {
                leq[a * k + add(a, c)] = true;
                if c != neutral {
                    lt[a * k + add(a, c)] = true;
                }
            }
        }
        for m1 in 0..k {
            for m2 in 0..k {
                if m1 == neutral || m2 == neutral {
                    continue;
                }
                let ok = (0..k)
                    .filter(|&m3| m3 != neutral)
                    .any(|m3| leq[m3 * k + m1] && leq[m3 * k + m2]);
                if !ok {
                    return Err(MvsError::Violation { axiom: MvsAxiom::M4, witness: vec![m1, m2] });
                }
            }
        }
        Ok(MvsTable { labels, neutral, table: flat, leq, lt })
    }

    /// The atom-free MVS `({0..k-1}, max)`.
    pub fn max_mvs(k: usize) -> MvsTable {
        let labels = (0..k).map(|i| i.to_string()).collect();
        let table = (0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect();
        MvsTable::validate(labels, 0, table).expect("max table is an MVS")
    }

    /// The commutative, non-atom-free MVS `{0,1,2}` with `x + y = 2` whenever
    /// both arguments are nonzero.
    pub fn collapse_mvs() -> MvsTable {
        let labels = vec!["0".into(), "1".into(), "2".into()];
        let table = vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]];
        MvsTable::validate(labels, 0, table).expect("collapse table is an MVS")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn neutral(&self) -> usize {
        self.neutral
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        let k = self.order();
        (0..k).map(|i| self.table[i * k..(i + 1) * k].to_vec()).collect()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.order() + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a * self.order() + b]
    }

    /// Non-neutral elements, ascending.
    pub fn nonneutral(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order()).filter(move |&i| i != self.neutral)
    }

    pub fn is_commutative(&self) -> bool {
        let k = self.order();
        (0..k).all(|a| (0..k).all(|b| self.add(a, b) == self.add(b, a)))
    }

    /// Commutative and every non-neutral element has a non-neutral strict
    /// lower part.
    pub fn is_atom_free(&self) -> bool {
        self.is_commutative()
            && self.nonneutral().all(|m| self.nonneutral().any(|n| self.lt(n, m)))
    }

    /// Atom-free with a witness `n` that is additionally not strictly above
    /// `m` again.
    pub fn is_strictly_atom_free(&self) -> bool {
        self.is_commutative()
            && self
                .nonneutral()
                .all(|m| self.nonneutral().any(|n| self.lt(n, m) && !self.lt(m, n)))
    }

    /// `m + m + ... + m` with `n >= 1` summands.
    pub fn n_times(&self, m: usize, n: usize) -> usize {
        assert!(n >= 1, "n_times needs a positive count");
        (1..n).fold(m, |acc, _| self.add(acc, m))
    }

    /// Smallest-index `m'` in `M*` with `n·m' ⊴ m`, if any.
    pub fn find_subdivision(&self, m: usize, n: usize) -> Option<usize> {
        self.nonneutral().find(|&c| self.leq(self.n_times(c, n), m))
    }

    /// Smallest-index element of `M*` below every input.  Existence is
    /// guaranteed by iterated M4; absence is reported as an M4-consistency
    /// failure.
    pub fn common_lower_bound(&self, ms: &[usize]) -> Result<usize, MvsError> {
        assert!(!ms.is_empty());
        self.nonneutral()
            .find(|&c| ms.iter().all(|&m| self.leq(c, m)))
            .ok_or_else(|| MvsError::NoCommonLowerBound(ms.to_vec()))
    }

    /// Adjoins an absorbing top element.  The result is revalidated rather
    /// than trusted, and restricts back to `self` on the original carrier.
    pub fn adjoin_infinity(&self) -> MvsTable {
        let k = self.order();
        let mut labels = self.labels.clone();
        let mut inf = "inf".to_string();
        while labels.contains(&inf) {
            inf.push('_');
        }
        labels.push(inf);
        let mut table: Vec<Vec<usize>> = self.rows();
        for row in table.iter_mut() {
            row.push(k);
        }
        table.push(vec![k; k + 1]);
        MvsTable::validate(labels, self.neutral, table)
            .expect("adjoining an absorbing element preserves M1-M4")
    }

    /// Index of the adjoined top in [`MvsTable::adjoin_infinity`] output.
    pub fn top_of_adjoined(&self) -> usize {
        self.order()
    }
}

/// A validated MVS homomorphism (H1: neutral exactly to neutral, H2:
/// operation-preserving).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvsHom {
    map: Vec<usize>,
}

#[derive(Debug, Clone, Error)]
pub enum HomError {
    #[error("map is not total over the source carrier")]
    NotTotal,
    #[error("H1 violated at element {0}")]
    H1(usize),
    #[error("H2 violated at pair ({0}, {1})")]
    H2(usize, usize),
}

impl MvsHom {
    pub fn validate(map: Vec<usize>, source: &MvsTable, target: &MvsTable) -> Result<MvsHom, HomError> {
        if map.len() != source.order() || map.iter().any(|&v| v >= target.order()) {
            return Err(HomError::NotTotal);
        }
        for i in 0..source.order() {
            let h1 = map[i] == target.neutral();
            if h1 != (i == source.neutral()) {
                return Err(HomError::H1(i));
            }
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.add(a, b)] != target.add(map[a], map[b]) {
                    return Err(HomError::H2(a, b));
                }
            }
        }
        Ok(MvsHom { map })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self, target: &MvsTable) -> bool {
        (0..target.order()).all(|t| self.map.contains(&t))
    }
}

/// Classification flags attached to enumerated tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MvsClass {
    pub commutative: bool,
    pub atom_free: bool,
    pub strictly_atom_free: bool,
}

impl MvsClass {
    pub fn of(m: &MvsTable) -> MvsClass {
        MvsClass {
            commutative: m.is_commutative(),
            atom_free: m.is_atom_free(),
            strictly_atom_free: m.is_strictly_atom_free(),
        }
    }
}

/// Enumerates every MVS of order `k` (neutral fixed at index 0), optionally
/// reduced to one representative per isomorphism class.
///
/// The search backtracks over the free entries of the Cayley table, pruning
/// with M3 (no free entry may be neutral) and with every associativity triple
/// that becomes fully determined.  Each leaf is revalidated from scratch.
pub fn enumerate_mvs(k: usize, up_to_iso: bool) -> Result<Vec<MvsTable>, MvsError> {
    if !(2..=5).contains(&k) {
        return Err(MvsError::OrderOutOfRange(k));
    }
    let labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let cells: Vec<(usize, usize)> =
        (1..k).flat_map(|i| (1..k).map(move |j| (i, j))).collect();
    let mut table = vec![0usize; k * k];
    for i in 0..k {
        table[i * k] = i;
        table[i] = i;
    }
    let mut filled = vec![false; k * k];
    for i in 0..k {
        filled[i * k] = true;
        filled[i] = true;
    }
    let mut out = Vec::new();
    search(k, &cells, 0, &mut table, &mut filled, &labels, &mut out);
    if up_to_iso {
        let mut reps: Vec<MvsTable> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
        for m in out {
            if seen.insert(canonical_form(&m)) {
                reps.push(m);
            }
        }
        out = reps;
        return Ok(out);
    }
    Ok(out)
}

fn search(
    k: usize,
    cells: &[(usize, usize)],
    at: usize,
    table: &mut Vec<usize>,
    filled: &mut Vec<bool>,
    labels: &[String],
    out: &mut Vec<MvsTable>,
) {
    if at == cells.len() {
        let rows = (0..k).map(|i| table[i * k..(i + 1) * k].to_vec()).collect();
        if let Ok(m) = MvsTable::validate(labels.to_vec(), 0, rows) {
            out.push(m);
        }
        return;
    }
    let (i, j) = cells[at];
    for v in 1..k {
        table[i * k + j] = v;
        filled[i * k + j] = true;
        if assoc_consistent(k, table, filled) {
            search(k, cells, at + 1, table, filled, labels, out);
        }
        filled[i * k + j] = false;
    }
}

/// Checks every associativity triple whose four lookups are all determined.
fn assoc_consistent(k: usize, table: &[usize], filled: &[bool]) -> bool {
    for a in 0..k {
        for b in 0..k {
            if !filled[a * k + b] {
                continue;
            }
            let ab = table[a * k + b];
            for c in 0..k {
                if !filled[b * k + c] {
                    continue;
                }
                let bc = table[b * k + c];
                if filled[ab * k + c] && filled[a * k + bc]
                    && table[ab * k + c] != table[a * k + bc]
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Lexicographically least table over all relabelings fixing the neutral
/// element.
fn canonical_form(m: &MvsTable) -> Vec<usize> {
    let k = m.order();
    let mut best: Option<Vec<usize>> = None;
    let others: Vec<usize> = (0..k).filter(|&i| i != m.neutral()).collect();
    for perm in permutations(&others) {
        // p maps old index -> new index, neutral -> 0.
        let mut p = vec![0usize; k];
        for (new_minus_one, &old) in perm.iter().enumerate() {
            p[old] = new_minus_one + 1;
        }
        let mut inv = vec![0usize; k];
        for (old, &new) in p.iter().enumerate() {
            inv[new] = old;
        }
        let mut t = vec![0usize; k * k];
        for a in 0..k {
            for b in 0..k {
                t[a * k + b] = p[m.add(inv[a], inv[b])];
            }
        }
        if best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    }
    best.unwrap()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}
