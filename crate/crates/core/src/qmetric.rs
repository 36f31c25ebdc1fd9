//! Quasimetric functions on finite carriers: validation, open and closed
//! balls, induced topologies, and the constructions that transport them
//! (pullback, restriction, gluing over an open cover, finite products,
//! metrization of Alexandrov topologies).

use std::sync::Arc;

use thiserror::Error;

use crate::mvs::MvsTable;
use crate::set::PointSet;
use crate::topo::{
    induced_by_maps, point_finite_refinement, FiniteTopology, MapTarget, NbhdSystem, TopoError,
};

/// Carriers up to this size get the full neighbourhood-axiom assertion on
/// every induced-topology computation; larger ones rely on the property
/// suite instead.
const AXIOM_ASSERT_LIMIT: usize = 200;

#[derive(Debug, Clone, Error)]
pub enum QmError {
    #[error("distance matrix is not {n}x{n}")]
    BadShape { n: usize },
    #[error("distance entry at ({x}, {y}) is not an element of the value set")]
    EntryOutOfRange { x: usize, y: usize },
    #[error("(f2) violated: d({x}, {x}) != e")]
    F2 { x: usize },
    #[error("(f1) violated at triple ({x}, {y}, {z})")]
    F1 { x: usize, y: usize, z: usize },
    #[error("value set is not atom-free, which this construction requires")]
    NotAtomFree,
    #[error("value set is not commutative, which this construction requires")]
    NotCommutative,
    #[error("restriction to an empty subset")]
    EmptySubset,
    #[error("product of zero factors is not defined")]
    EmptyProduct,
    #[error("factors use different value sets")]
    MixedValueSets,
    #[error("piece over {subset:?} does not induce the relative topology")]
    PieceTopologyMismatch { subset: String },
    #[error(transparent)]
    Topo(#[from] TopoError),
}

/// A validated quasimetric function on a finite point set.
#[derive(Clone, Debug)]
pub struct QmSpace {
    points: Vec<String>,
    mvs: Arc<MvsTable>,
    d: Vec<usize>,
    symmetric: bool,
    strict: bool,
}

impl PartialEq for QmSpace {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && *self.mvs == *other.mvs && self.d == other.d
    }
}
impl Eq for QmSpace {}

/// Ball flavour: open balls use the strict relation, closed balls the weak
/// one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallKind {
    Open,
    Closed,
}

/// The per-point family of balls of one kind, realized as a neighbourhood
/// system.
#[derive(Clone, Debug)]
pub struct BallSystem {
    pub kind: BallKind,
    pub system: NbhdSystem,
}

impl QmSpace {
    /// Checks (f2) and the triangle inequality (f1), and computes the
    /// symmetry and strictness flags.
    ///
    /// The (f1) scan groups by the value of `d(y, z)`: for fixed `x, y` and
    /// each value `c`, every `z` with `d(y, z) = c` must satisfy
    /// `d(x, z) ⊴ d(x, y) + c`.
    pub fn validate(
        points: Vec<String>,
        mvs: Arc<MvsTable>,
        d: Vec<Vec<usize>>,
    ) -> Result<QmSpace, QmError> {
        let n = points.len();
        let k = mvs.order();
        if d.len() != n || d.iter().any(|r| r.len() != n) {
            return Err(QmError::BadShape { n });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in d.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if v >= k {
                    return Err(QmError::EntryOutOfRange { x, y });
                }
                flat.push(v);
            }
        }
        let e = mvs.neutral();
        for x in 0..n {
            if flat[x * n + x] != e {
                return Err(QmError::F2 { x });
            }
        }
        // rows_eq[y][c] = {z : d(y,z) = c}; below[x][v] = {z : d(x,z) ⊴ v}.
        let mut rows_eq = vec![PointSet::empty(n); n * k];
        let mut below = vec![PointSet::empty(n); n * k];
        for x in 0..n {
            for z in 0..n {
                let v = flat[x * n + z];
                rows_eq[x * k + v].insert(z);
                for w in 0..k {
                    if mvs.leq(v, w) {
                        below[x * k + w].insert(z);
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let a = flat[x * n + y];
                let mut bad: Option<usize> = None;
                for c in 0..k {
                    let viol = rows_eq[y * k + c].difference(&below[x * k + mvs.add(a, c)]);
                    if let Some(z) = viol.first() {
                        bad = Some(bad.map_or(z, |b| b.min(z)));
                    }
                }
                if let Some(z) = bad {
                    return Err(QmError::F1 { x, y, z });
                }
            }
        }
        let symmetric = (0..n).all(|x| (0..n).all(|y| flat[x * n + y] == flat[y * n + x]));
        let strict = (0..n).all(|x| (0..n).all(|y| flat[x * n + y] != e || x == y));
        Ok(QmSpace { points, mvs, d: flat, symmetric, strict })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn mvs(&self) -> &Arc<MvsTable> {
        &self.mvs
    }

    pub fn dist(&self, x: usize, y: usize) -> usize {
        self.d[x * self.len() + y]
    }

    pub fn matrix(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        (0..n).map(|x| self.d[x * n..(x + 1) * n].to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn ball(&self, x: usize, m: usize, kind: BallKind) -> PointSet {
        let n = self.len();
        let mut s = PointSet::empty(n);
        for y in 0..n {
            let hit = match kind {
                BallKind::Open => self.mvs.lt(self.dist(x, y), m),
                BallKind::Closed => self.mvs.leq(self.dist(x, y), m),
            };
            if hit {
                s.insert(y);
            }
        }
        s
    }

    /// The family `{B(x, m) : m in M*}` at every point.
    pub fn ball_system(&self, kind: BallKind) -> BallSystem {
        let n = self.len();
        let at = (0..n)
            .map(|x| self.mvs.nonneutral().map(|m| self.ball(x, m, kind)).collect())
            .collect();
        BallSystem { kind, system: NbhdSystem::new(n, at) }
    }

    /// Smallest open ball at `x`: the ball of a common lower bound of all of
    /// `M*`, which is contained in every other ball.
    fn least_open_ball(&self, x: usize) -> PointSet {
        let all: Vec<usize> = self.mvs.nonneutral().collect();
        let m = self
            .mvs
            .common_lower_bound(&all)
            .expect("M4 guarantees a common lower bound of M*");
        self.ball(x, m, BallKind::Open)
    }

    /// Topology induced by the open balls.
    pub fn induced_topology(&self) -> FiniteTopology {
        let n = self.len();
        if n <= AXIOM_ASSERT_LIMIT {
            let flags = self.ball_system(BallKind::Open).system.validate();
            assert!(
                flags.is_open_system(),
                "open balls must form an open neighbourhood system: {flags:?}"
            );
        }
        let min0 = (0..n).map(|x| self.least_open_ball(x)).collect();
        FiniteTopology::from_min_map(n, min0)
    }

    /// Verifies the closed-ball system is a neighbourhood system equivalent
    /// to the open one.  Requires an atom-free value set.
    pub fn closed_ball_equivalence(&self) -> Result<bool, QmError> {
        if !self.mvs.is_atom_free() {
            return Err(QmError::NotAtomFree);
        }
        let open = self.ball_system(BallKind::Open).system;
        let closed = self.ball_system(BallKind::Closed).system;
        let flags = closed.validate();
        Ok(flags.b1.holds && flags.b2.holds && flags.b3.holds && open.equivalent(&closed))
    }

    /// Pulls the quasimetric back along `g`; the induced topology is checked
    /// to equal the topology induced by `g` as a map.
    pub fn pullback(&self, new_points: Vec<String>, g: &[usize]) -> Result<QmSpace, QmError> {
        assert_eq!(new_points.len(), g.len());
        assert!(g.iter().all(|&y| y < self.len()));
        let n = g.len();
        let d = (0..n)
            .map(|x| (0..n).map(|y| self.dist(g[x], g[y])).collect())
            .collect();
        let out = QmSpace::validate(new_points, Arc::clone(&self.mvs), d)?;
        let target = self.induced_topology();
        let induced = induced_by_maps(n, &[(MapTarget::Topology(&target), g.to_vec())]);
        assert_eq!(out.induced_topology(), induced, "pullback topology identity failed");
        Ok(out)
    }

    /// Restriction to a nonempty subset; the induced topology is checked to
    /// be the trace of the ambient one.
    pub fn restrict(&self, a: &PointSet) -> Result<QmSpace, QmError> {
        if a.is_empty() {
            return Err(QmError::EmptySubset);
        }
        let idx: Vec<usize> = a.iter().collect();
        let points = idx.iter().map(|&i| self.points[i].clone()).collect();
        let d = idx
            .iter()
            .map(|&x| idx.iter().map(|&y| self.dist(x, y)).collect())
            .collect();
        let out = QmSpace::validate(points, Arc::clone(&self.mvs), d)?;
        assert_eq!(
            out.induced_topology(),
            self.induced_topology().relative(a),
            "restriction topology identity failed"
        );
        Ok(out)
    }
}

/// Glues locally defined quasimetric functions over an open cover into one
/// function with values in the value set extended by an absorbing top.
///
/// Each piece must induce the relative topology of its subset.  The pieces
/// are restricted to a deterministic point-finite refinement; inside the
/// intersection `W_x` of the refinement members through `x` the distance is
/// the sum over those members, outside it is the top element.
pub fn glue(
    t: &FiniteTopology,
    pieces: &[(PointSet, QmSpace)],
) -> Result<QmSpace, QmError> {
    let n = t.points();
    assert!(!pieces.is_empty());
    let mvs = pieces[0].1.mvs();
    if !mvs.is_atom_free() {
        return Err(QmError::NotAtomFree);
    }
    let mut cover = Vec::new();
    for (subset, piece) in pieces {
        if **piece.mvs() != **mvs {
            return Err(QmError::MixedValueSets);
        }
        if piece.len() != subset.len()
            || piece.induced_topology() != t.relative(subset)
        {
            return Err(QmError::PieceTopologyMismatch { subset: format!("{subset:?}") });
        }
        cover.push(subset.clone());
    }
    let refinement = point_finite_refinement(t, &cover)?;
    // Restrict the assigned piece to each refinement member.  Points of a
    // member are indexed ascending within the assigned subset.
    let mut local: Vec<(PointSet, Vec<usize>, QmSpace)> = Vec::new();
    for (j, member) in refinement.refinement.iter().enumerate() {
        let (subset, piece) = &pieces[refinement.assignment[j]];
        let inner: Vec<usize> = subset.iter().collect();
        let mut rel = PointSet::empty(subset.len());
        for (pos, &p) in inner.iter().enumerate() {
            if member.contains(p) {
                rel.insert(pos);
            }
        }
        let restricted = piece.restrict(&rel)?;
        // Map carrier point -> index within the restricted piece.
        let mut back = vec![usize::MAX; n];
        for (i, p) in member.iter().enumerate() {
            back[p] = i;
        }
        local.push((member.clone(), back, restricted));
    }
    let minf = Arc::new(mvs.adjoin_infinity());
    let top = mvs.top_of_adjoined();
    let e = mvs.neutral();
    let mut d = vec![vec![top; n]; n];
    for x in 0..n {
        let members_through_x: Vec<usize> =
            (0..local.len()).filter(|&j| local[j].0.contains(x)).collect();
        let mut w_x = PointSet::full(n);
        for &j in &members_through_x {
            w_x.intersect_with(&local[j].0);
        }
        for y in w_x.iter() {
            // Sum in ascending member order; commutativity makes the value
            // order-independent.
            let mut acc = e;
            for &j in &members_through_x {
                let (_, back, piece) = &local[j];
                acc = minf.add(acc, piece.dist(back[x], back[y]));
            }
            d[x][y] = acc;
        }
    }
    let points = (0..n).map(|i| i.to_string()).collect();
    let out = QmSpace::validate(points, minf, d)?;
    assert_eq!(out.induced_topology(), *t, "glued topology must reproduce the input");
    // Strictness propagates from the pieces.
    if pieces.iter().all(|(_, p)| p.is_strict()) {
        assert!(out.is_strict());
    }
    Ok(out)
}

/// Sum quasimetric on a finite product of spaces over one commutative
/// atom-free value set.  The induced topology is checked against the product
/// topology via equivalence of the ball and box neighbourhood systems.
pub fn product(factors: &[&QmSpace]) -> Result<QmSpace, QmError> {
    if factors.is_empty() {
        return Err(QmError::EmptyProduct);
    }
    let mvs = factors[0].mvs();
    for f in factors {
        if **f.mvs() != **mvs {
            return Err(QmError::MixedValueSets);
        }
    }
    if !mvs.is_atom_free() {
        return Err(QmError::NotAtomFree);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let n: usize = sizes.iter().product();
    let decode = |mut i: usize| -> Vec<usize> {
        let mut coord = vec![0; sizes.len()];
        for (slot, &s) in sizes.iter().enumerate().rev() {
            coord[slot] = i % s;
            i /= s;
        }
        coord
    };
    let points: Vec<String> = (0..n)
        .map(|i| {
            let c = decode(i);
            let parts: Vec<&str> =
                c.iter().zip(factors).map(|(&p, f)| f.points()[p].as_str()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let e = mvs.neutral();
    let mut d = vec![vec![e; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        let cx = decode(x);
        for (y, cell) in row.iter_mut().enumerate() {
            let cy = decode(y);
            let mut acc = e;
            for (slot, f) in factors.iter().enumerate() {
                acc = mvs.add(acc, f.dist(cx[slot], cy[slot]));
            }
            *cell = acc;
        }
    }
    let out = QmSpace::validate(points, Arc::clone(mvs), d)?;

    // Projections are distance-nonincreasing.
    for x in 0..n {
        let cx = decode(x);
        for y in 0..n {
            let cy = decode(y);
            for (slot, f) in factors.iter().enumerate() {
                assert!(mvs.leq(f.dist(cx[slot], cy[slot]), out.dist(x, y)));
            }
        }
    }

    // Box neighbourhood system: products of one open ball per factor, over
    // every tuple of non-neutral radii.
    let nonneutral: Vec<usize> = mvs.nonneutral().collect();
    let mut at: Vec<Vec<PointSet>> = Vec::with_capacity(n);
    for x in 0..n {
        let cx = decode(x);
        let mut fam = Vec::new();
        let mut tuple = vec![0usize; factors.len()];
        loop {
            let mut box_set = PointSet::empty(n);
            for y in 0..n {
                let cy = decode(y);
                let inside = factors.iter().enumerate().all(|(slot, f)| {
                    mvs.lt(f.dist(cx[slot], cy[slot]), nonneutral[tuple[slot]])
                });
                if inside {
                    box_set.insert(y);
                }
            }
            fam.push(box_set);
            // Next radius tuple.
            let mut slot = 0;
            loop {
                tuple[slot] += 1;
                if tuple[slot] < nonneutral.len() {
                    break;
                }
                tuple[slot] = 0;
                slot += 1;
                if slot == factors.len() {
                    break;
                }
            }
            if slot == factors.len() {
                break;
            }
        }
        at.push(fam);
    }
    let box_system = NbhdSystem::new(n, at);
    let ball_system = out.ball_system(BallKind::Open).system;
    assert!(
        ball_system.equivalent(&box_system),
        "sum-distance balls must be equivalent to the box system"
    );
    let mut product_topology = factors[0].induced_topology();
    for f in &factors[1..] {
        product_topology = product_topology.product(&f.induced_topology());
    }
    assert_eq!(out.induced_topology(), product_topology);
    Ok(out)
}

/// Metrizes an arbitrary finite topology over `({0,1,2}, max)`: distance 1
/// into the smallest neighbourhood, 2 outside it.
pub fn alexandrov_metrize(t: &FiniteTopology, labels: Vec<String>) -> QmSpace {
    let n = t.points();
    assert_eq!(labels.len(), n);
    let mvs = Arc::new(MvsTable::max_mvs(3));
    let d = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if y == x {
                        0
                    } else if t.min_open(x).contains(y) {
                        1
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect();
    let out = QmSpace::validate(labels, mvs, d).expect("the smallest-neighbourhood distance is a quasimetric");
    assert!(out.is_strict());
    for x in 0..n {
        assert_eq!(&out.ball(x, 1, BallKind::Open), t.min_open(x));
    }
    assert_eq!(out.induced_topology(), *t);
    out
}

/// The canonical metric space of a commutative value set: carrier `M`,
/// distance `m + n` off the diagonal and `e` on it.
pub fn canonical_metric_space(mvs: &Arc<MvsTable>) -> Result<QmSpace, QmError> {
    if !mvs.is_commutative() {
        return Err(QmError::NotCommutative);
    }
    let k = mvs.order();
    let e = mvs.neutral();
    let points = mvs.labels().to_vec();
    let d = (0..k)
        .map(|a| (0..k).map(|b| if a == b { e } else { mvs.add(a, b) }).collect())
        .collect();
    let out = QmSpace::validate(points, Arc::clone(mvs), d)?;
    assert!(out.is_symmetric());
    Ok(out)
}

/// Partition space over `({0,1,2}, max)`: distance 1 inside a block, 2
/// across blocks.  Its induced topology is the partition topology with the
/// blocks as atoms.
pub fn clique_partition_space(blocks: usize, block_size: usize) -> QmSpace {
    assert!(blocks >= 1 && block_size >= 1);
    let n = blocks * block_size;
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    let mvs = Arc::new(MvsTable::max_mvs(3));
    let block_of = |i: usize| i / block_size;
    let d = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y {
                        0
                    } else if block_of(x) == block_of(y) {
                        1
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect();
    QmSpace::validate(labels, mvs, d).expect("the partition distance is a quasimetric")
}

/// Two-valued demonstration space over `({0,1,2}, max)`: distance 0 inside a
/// distinguished block (and on the diagonal), 2 everywhere else.  On a finite
/// carrier this is mechanism-only: the induced topology is just the block
/// plus outside singletons.
pub fn zero_block_space(labels: Vec<String>, block: &PointSet) -> QmSpace {
    let n = labels.len();
    let mvs = Arc::new(MvsTable::max_mvs(3));
    let d = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y || (block.contains(x) && block.contains(y)) {
                        0
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect();
    QmSpace::validate(labels, mvs, d).expect("the block distance is a quasimetric")
}
