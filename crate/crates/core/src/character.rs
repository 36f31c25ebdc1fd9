//! The characterization pipeline: fullness and convexity of quasimetric
//! spaces, the full embedding on `X × M`, finite-stage convexification, the
//! entourage value set `(𝒱, +)` with its four structural conditions, the
//! converse metrization from a conforming base, and the end-to-end roundtrip.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::mvs::{MvsHom, MvsTable};
use crate::qmetric::{canonical_metric_space, BallKind, QmSpace};
use crate::quniform::{base_topology, validate_base, Entourage};
use crate::report::{Clause, Report};
use crate::set::PointSet;

/// Most unrealized-decomposition witnesses kept in a report.
const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, Error)]
pub enum CharError {
    /// Precondition failure: the input is outside the operation's scope.
    #[error("refused: {0}")]
    Refused(String),
    /// A statement the construction is supposed to guarantee failed.
    #[error("{anchor} failed: {witness}")]
    ClauseFailed { anchor: String, witness: String },
}

fn clause_err(anchor: &str, witness: impl Into<String>) -> CharError {
    CharError::ClauseFailed { anchor: anchor.into(), witness: witness.into() }
}

/// Exhaustive fullness / convexity scan.
#[derive(Debug, Clone)]
pub struct FullConvexReport {
    pub full: bool,
    /// Value-set elements never attained by the distance.
    pub missing: Vec<usize>,
    pub convex: bool,
    /// Unrealized decompositions `(x, y, m2, m3)`: `d(x,y) = m2 + m3` with no
    /// midpoint `z` having `d(x,z) = m2` and `d(z,y) = m3`.
    pub unrealized: Vec<(usize, usize, usize, usize)>,
    pub unrealized_count: usize,
}

/// Scans surjectivity of the distance and condition (C): every decomposition
/// of every distance must be realized by a midpoint.
pub fn full_convex_report(q: &QmSpace) -> FullConvexReport {
    let n = q.len();
    let k = q.mvs().order();
    let mut attained = vec![false; k];
    let mut out_eq = vec![PointSet::empty(n); n * k];
    let mut in_eq = vec![PointSet::empty(n); n * k];
    for x in 0..n {
        for y in 0..n {
            let v = q.dist(x, y);
            attained[v] = true;
            out_eq[x * k + v].insert(y);
            in_eq[y * k + v].insert(x);
        }
    }
    let missing: Vec<usize> = (0..k).filter(|&m| !attained[m]).collect();
    let mut decomps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
    for m2 in 0..k {
        for m3 in 0..k {
            decomps[q.mvs().add(m2, m3)].push((m2, m3));
        }
    }
    let mut unrealized = Vec::new();
    let mut unrealized_count = 0usize;
    for x in 0..n {
        for y in 0..n {
            for &(m2, m3) in &decomps[q.dist(x, y)] {
                if !out_eq[x * k + m2].intersects(&in_eq[y * k + m3]) {
                    unrealized_count += 1;
                    if unrealized.len() < MAX_WITNESSES {
                        unrealized.push((x, y, m2, m3));
                    }
                }
            }
        }
    }
    FullConvexReport {
        full: missing.is_empty(),
        missing,
        convex: unrealized_count == 0,
        unrealized,
        unrealized_count,
    }
}

/// A space together with the indices of the original points inside it.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub space: QmSpace,
    pub inclusion: Vec<usize>,
}

/// Embeds a space over a commutative value set into a full one on `X × M`:
/// distance `m1 + f(x1, x2) + m2` off the diagonal.  An empty carrier maps to
/// the canonical metric space of `M`.
pub fn embed_full(q: &QmSpace) -> Result<Embedding, CharError> {
    let mvs = q.mvs();
    if !mvs.is_commutative() {
        return Err(CharError::Refused("value set is not commutative".into()));
    }
    if q.is_empty() {
        let space = canonical_metric_space(mvs)
            .map_err(|e| clause_err("Lemma 2.10", e.to_string()))?;
        return Ok(Embedding { space, inclusion: Vec::new() });
    }
    let n = q.len();
    let k = mvs.order();
    let e = mvs.neutral();
    let nn = n * k;
    let idx = |x: usize, m: usize| x * k + m;
    let labels = (0..n)
        .flat_map(|x| (0..k).map(move |m| (x, m)))
        .map(|(x, m)| format!("({},{})", q.points()[x], mvs.label(m)))
        .collect();
    let mut d = vec![vec![e; nn]; nn];
    for x1 in 0..n {
        for m1 in 0..k {
            for x2 in 0..n {
                for m2 in 0..k {
                    if (x1, m1) != (x2, m2) {
                        d[idx(x1, m1)][idx(x2, m2)] =
                            mvs.add(mvs.add(m1, q.dist(x1, x2)), m2);
                    }
                }
            }
        }
    }
    let space = QmSpace::validate(labels, Arc::clone(mvs), d)
        .map_err(|err| clause_err("Lemma 2.10", format!("f* is not a quasimetric: {err}")))?;
    let inclusion: Vec<usize> = (0..n).map(|x| idx(x, e)).collect();
    for x in 0..n {
        for y in 0..n {
            if space.dist(inclusion[x], inclusion[y]) != q.dist(x, y) {
                return Err(clause_err(
                    "Lemma 2.10",
                    format!("restriction to X×{{e}} differs at ({x}, {y})"),
                ));
            }
        }
    }
    let fcr = full_convex_report(&space);
    if !fcr.full {
        return Err(clause_err("Lemma 2.10", format!("f* misses values {:?}", fcr.missing)));
    }
    Ok(Embedding { space, inclusion })
}

/// Number of points one convexification stage would produce.
pub fn stage_size(q: &QmSpace) -> usize {
    let k = q.mvs().order();
    let mut decomp_count = vec![0usize; k];
    for m1 in 0..k {
        for m2 in 0..k {
            decomp_count[q.mvs().add(m1, m2)] += 1;
        }
    }
    let n = q.len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| decomp_count[q.dist(x, y)])
        .sum()
}

/// One convexification stage: the carrier becomes the quadruples
/// `(x1, m1, m2, x2)` with `m1 + m2 = f(x1, x2)`, where `x` is identified
/// with `(x, e, e, x)`, and the distance between distinct quadruples
/// `(x1, m1, m2, x2)` and `(x3, m3, m4, x4)` is `m2 + f(x2, x3) + m3`.
///
/// Every decomposition of every old distance is realized by a stage-new
/// midpoint; this is checked, as is the restriction identity.
pub fn convexify_stage(q: &QmSpace) -> Result<Embedding, CharError> {
    let mvs = q.mvs();
    if !mvs.is_commutative() {
        return Err(CharError::Refused("value set is not commutative".into()));
    }
    let n = q.len();
    let k = mvs.order();
    let e = mvs.neutral();
    let mut quads: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut pos: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for x1 in 0..n {
        for m1 in 0..k {
            for m2 in 0..k {
                for x2 in 0..n {
                    if mvs.add(m1, m2) == q.dist(x1, x2) {
                        pos.insert((x1, m1, m2, x2), quads.len());
                        quads.push((x1, m1, m2, x2));
                    }
                }
            }
        }
    }
    let nn = quads.len();
    let labels = quads
        .iter()
        .map(|&(x1, m1, m2, x2)| {
            format!(
                "({},{},{},{})",
                q.points()[x1],
                mvs.label(m1),
                mvs.label(m2),
                q.points()[x2]
            )
        })
        .collect();
    let mut d = vec![vec![e; nn]; nn];
    for (i, &(_, _, m2, x2)) in quads.iter().enumerate() {
        for (j, &(x3, m3, _, _)) in quads.iter().enumerate() {
            if i != j {
                d[i][j] = mvs.add(mvs.add(m2, q.dist(x2, x3)), m3);
            }
        }
    }
    let space = QmSpace::validate(labels, Arc::clone(mvs), d)
        .map_err(|err| clause_err("Lemma 2.11", format!("f2 is not a quasimetric: {err}")))?;
    let inclusion: Vec<usize> = (0..n).map(|x| pos[&(x, e, e, x)]).collect();
    for x in 0..n {
        for y in 0..n {
            if space.dist(inclusion[x], inclusion[y]) != q.dist(x, y) {
                return Err(clause_err(
                    "Lemma 2.11",
                    format!("restriction to the old points differs at ({x}, {y})"),
                ));
            }
            // Every decomposition of the old distance has a new midpoint.
            let m1 = q.dist(x, y);
            for a in 0..k {
                for b in 0..k {
                    if mvs.add(a, b) != m1 {
                        continue;
                    }
                    let z = pos[&(x, a, b, y)];
                    if space.dist(inclusion[x], z) != a || space.dist(z, inclusion[y]) != b {
                        return Err(clause_err(
                            "Lemma 2.11",
                            format!("midpoint (x={x},{a},{b},y={y}) misrealizes ({a}, {b})"),
                        ));
                    }
                }
            }
        }
    }
    Ok(Embedding { space, inclusion })
}

/// Outcome of the bounded convexification loop.
#[derive(Debug, Clone)]
pub struct ConvexifyOutcome {
    pub space: QmSpace,
    pub inclusion: Vec<usize>,
    pub stages: usize,
    pub convex: bool,
    /// Set when a budget stopped the iteration before convexity was reached.
    pub partial: bool,
}

/// Iterates [`convexify_stage`] until the space is convex or a budget
/// (stage count or point ceiling) is hit.  Budget exhaustion yields a
/// flagged partial result, never an error.
pub fn convexify_until(
    q: &QmSpace,
    max_stages: usize,
    max_points: usize,
) -> Result<ConvexifyOutcome, CharError> {
    let mut cur = q.clone();
    let mut inclusion: Vec<usize> = (0..q.len()).collect();
    let mut stages = 0usize;
    loop {
        let fcr = full_convex_report(&cur);
        if fcr.convex {
            return Ok(ConvexifyOutcome { space: cur, inclusion, stages, convex: true, partial: false });
        }
        if stages >= max_stages || stage_size(&cur) > max_points {
            return Ok(ConvexifyOutcome { space: cur, inclusion, stages, convex: false, partial: true });
        }
        let emb = convexify_stage(&cur)?;
        inclusion = inclusion.into_iter().map(|i| emb.inclusion[i]).collect();
        cur = emb.space;
        stages += 1;
    }
}

/// The entourage value set of a full, convex space over an atom-free value
/// set: `𝒱 = {U_0} ∪ {U_m : m ∈ M*}` with `U + V = ⋂{W ∈ 𝒱 : V ∘ U ⊆ W}`.
#[derive(Debug, Clone)]
pub struct EntourageMvs {
    /// `members[0]` is `U_0`; the rest is `𝒱*` in first-appearance order of
    /// the generating value-set elements.
    pub members: Vec<Entourage>,
    /// `(𝒱, +)` as a validated value set with neutral index 0.
    pub mvs: Arc<MvsTable>,
    /// The surjective homomorphism `m ↦ U_m`.
    pub hom: MvsHom,
    pub clauses: Vec<Clause>,
}

fn sum_table(members: &[Entourage], anchor: &str) -> Result<Vec<Vec<usize>>, CharError> {
    let kv = members.len();
    let mut table = vec![vec![0usize; kv]; kv];
    for i in 0..kv {
        for j in 0..kv {
            // U + V uses V ∘ U: the left summand acts first.
            let comp = members[j].compose(&members[i]);
            let above: Vec<usize> =
                (0..kv).filter(|&w| comp.is_subset(&members[w])).collect();
            if above.is_empty() {
                return Err(clause_err(
                    anchor,
                    format!("(Q2) no member contains member {j} ∘ member {i}"),
                ));
            }
            let mut inter = members[above[0]].clone();
            for &w in &above[1..] {
                inter = inter.intersect(&members[w]);
            }
            let posn = members.iter().position(|m| *m == inter).ok_or_else(|| {
                clause_err(
                    anchor,
                    format!("(Q2) sum of members {i} and {j} falls outside the family"),
                )
            })?;
            table[i][j] = posn;
        }
    }
    Ok(table)
}

fn check_q3(members: &[Entourage], mvs: &MvsTable, anchor: &str) -> Result<(), CharError> {
    for i in 0..members.len() {
        for j in 0..members.len() {
            if mvs.leq(i, j) != members[i].is_subset(&members[j]) {
                return Err(clause_err(
                    anchor,
                    format!("(Q3) order/inclusion mismatch at members ({i}, {j})"),
                ));
            }
        }
    }
    Ok(())
}

/// Builds and verifies the entourage value set of a full, convex space.
pub fn entourage_mvs(q: &QmSpace) -> Result<EntourageMvs, CharError> {
    const ANCHOR: &str = "Thm 2.13";
    let m = q.mvs();
    if !m.is_atom_free() {
        return Err(CharError::Refused("value set is not atom-free".into()));
    }
    let fcr = full_convex_report(q);
    if !fcr.full {
        return Err(CharError::Refused(format!(
            "space is not full: values {:?} are not attained",
            fcr.missing
        )));
    }
    if !fcr.convex {
        return Err(CharError::Refused(format!(
            "space is not convex: {} unrealized decompositions, first {:?}",
            fcr.unrealized_count, fcr.unrealized.first()
        )));
    }
    let n = q.len();
    let e = m.neutral();
    let mut clauses = Vec::new();

    let u0 = Entourage::from_rows(
        (0..n)
            .map(|x| {
                let mut r = PointSet::empty(n);
                for y in 0..n {
                    if q.dist(x, y) == e {
                        r.insert(y);
                    }
                }
                r
            })
            .collect(),
    );
    if !u0.includes_diagonal() {
        return Err(clause_err(ANCHOR, "U_0 misses the diagonal"));
    }

    // 𝒱* = {U_m : m ∈ M*} (closed balls), deduplicated; hom_map sends each
    // value-set element to its member index in 𝒱.
    let mut members = vec![u0.clone()];
    let mut labels = vec!["U0".to_string()];
    let mut hom_map = vec![usize::MAX; m.order()];
    hom_map[e] = 0;
    for mm in m.nonneutral() {
        let um = Entourage::from_rows((0..n).map(|x| q.ball(x, mm, BallKind::Closed)).collect());
        if um == u0 {
            return Err(clause_err(ANCHOR, format!("U_0 is not strictly below U_{mm}")));
        }
        let posn = members.iter().position(|v| *v == um).unwrap_or_else(|| {
            members.push(um.clone());
            labels.push(format!("U_{}", m.label(mm)));
            members.len() - 1
        });
        hom_map[mm] = posn;
    }
    let kv = members.len();

    // U_0 ⊊ U for every U ∈ 𝒱*, and ⋃𝒱* = X × X.
    let strict = members[1..].iter().all(|u| u0.is_subset(u) && *u != u0);
    clauses.push(status_clause(ANCHOR, "U_0 ⊊ U for every U in V*", strict)?);
    let mut union = Entourage::empty(n);
    for u in &members[1..] {
        union = union.union(u);
    }
    clauses.push(status_clause(ANCHOR, "⋃V* = X×X", union == Entourage::full(n))?);

    // UB1-UB3 for 𝒱* as a quasiuniform base.
    let (_, flags) = validate_base(&members[1..])
        .map_err(|err| clause_err(ANCHOR, err.to_string()))?;
    clauses.push(status_clause("§2.7", "V* satisfies UB1-UB3", flags.is_base())?);

    // U_{x,y} agrees with U_{f(x,y)} off U_0, and (Q1): the family of the
    // U_{x,y} is exactly 𝒱*.
    let mut seen = vec![false; kv];
    for x in 0..n {
        for y in 0..n {
            if u0.contains(x, y) {
                continue;
            }
            let holding: Vec<usize> =
                (1..kv).filter(|&i| members[i].contains(x, y)).collect();
            if holding.is_empty() {
                return Err(clause_err(ANCHOR, format!("({x}, {y}) lies in no member of V*")));
            }
            let mut uxy = members[holding[0]].clone();
            for &i in &holding[1..] {
                uxy = uxy.intersect(&members[i]);
            }
            let expected = hom_map[q.dist(x, y)];
            if uxy != members[expected] {
                return Err(clause_err(
                    ANCHOR,
                    format!("U_(x,y) differs from U_f(x,y) at ({x}, {y})"),
                ));
            }
            seen[expected] = true;
        }
    }
    let q1 = (1..kv).all(|i| seen[i]);
    clauses.push(status_clause(ANCHOR, "(Q1) V* = {U_(x,y) : (x,y) ∉ U_0}", q1)?);

    // (Q2): the sum table closes and defines a value set.
    let table = sum_table(&members, ANCHOR)?;
    // U_m + U_m' = U_{m+m'} for all value-set elements.
    for a in 0..m.order() {
        for b in 0..m.order() {
            if table[hom_map[a]][hom_map[b]] != hom_map[m.add(a, b)] {
                return Err(clause_err(
                    ANCHOR,
                    format!("U_m + U_m' ≠ U_(m+m') at ({a}, {b})"),
                ));
            }
        }
    }
    let vmvs = MvsTable::validate(labels, 0, table)
        .map_err(|err| clause_err(ANCHOR, format!("(Q2) (V,+) is not a value set: {err}")))?;
    clauses.push(Clause::pass(ANCHOR, "(Q2) (V,+) is a value set with neutral U_0"));

    check_q3(&members, &vmvs, ANCHOR)?;
    clauses.push(Clause::pass(ANCHOR, "(Q3) U ⊴ V iff U ⊆ V"));

    clauses.push(status_clause(ANCHOR, "(Q4) (V,+) is atom-free", vmvs.is_atom_free())?);

    let hom = MvsHom::validate(hom_map, m, &vmvs)
        .map_err(|err| clause_err(ANCHOR, format!("h: m ↦ U_m is not a homomorphism: {err}")))?;
    clauses.push(status_clause(
        ANCHOR,
        "h: m ↦ U_m is a surjective homomorphism",
        hom.is_surjective(&vmvs),
    )?);

    if m.is_strictly_atom_free() {
        clauses.push(status_clause(
            "Summary 2.15",
            "(V,+) is strictly atom-free",
            vmvs.is_strictly_atom_free(),
        )?);
    }

    Ok(EntourageMvs { members, mvs: Arc::new(vmvs), hom, clauses })
}

/// Turns a verified statement into a passing clause, or fails the pipeline.
fn status_clause(anchor: &str, detail: &str, ok: bool) -> Result<Clause, CharError> {
    if ok {
        Ok(Clause::pass(anchor, detail))
    } else {
        Err(clause_err(anchor, detail))
    }
}

/// Result of metrizing a quasiuniform base satisfying the structural
/// conditions: the derived value set, the quasimetric space `f(x,y) =
/// U_{x,y}`, and its topology.
#[derive(Debug, Clone)]
pub struct MetrizeOutcome {
    pub members: Vec<Entourage>,
    pub mvs: Arc<MvsTable>,
    pub space: QmSpace,
    pub clauses: Vec<Clause>,
}

/// Metrizes a carrier from `U_0` and a base satisfying UB1-UB3 and the
/// structural conditions (Q1)-(Q3); atom-freeness (Q4) is not required.
pub fn metrize_from_base(
    labels: Vec<String>,
    u0: &Entourage,
    base: &[Entourage],
) -> Result<MetrizeOutcome, CharError> {
    const ANCHOR: &str = "Thm 2.14";
    let n = u0.points();
    if labels.len() != n {
        return Err(CharError::Refused("label count differs from the carrier".into()));
    }
    if base.is_empty() {
        return Err(CharError::Refused("empty base".into()));
    }
    if base.iter().any(|u| u.points() != n) {
        return Err(CharError::Refused("base members live on a different carrier".into()));
    }
    let mut vstar: Vec<Entourage> = Vec::new();
    for u in base {
        if !vstar.contains(u) {
            vstar.push(u.clone());
        }
    }
    if !u0.includes_diagonal() {
        return Err(CharError::Refused("U_0 misses the diagonal".into()));
    }
    if vstar.iter().any(|u| !(u0.is_subset(u) && *u != *u0)) {
        return Err(CharError::Refused("some base member is not strictly above U_0".into()));
    }
    let mut clauses = Vec::new();

    let (_, flags) = validate_base(&vstar).map_err(|err| CharError::Refused(err.to_string()))?;
    if !flags.is_base() {
        return Err(CharError::Refused(format!("base fails UB1-UB3: {flags:?}")));
    }
    clauses.push(Clause::pass("§2.7", "base satisfies UB1-UB3"));

    let mut union = Entourage::empty(n);
    for u in &vstar {
        union = union.union(u);
    }
    clauses.push(status_clause(ANCHOR, "⋃V* = X×X", union == Entourage::full(n))?);

    // U_{x,y} per the definition; (Q1) demands the family equals 𝒱*.
    let mut members = vec![u0.clone()];
    members.extend(vstar.iter().cloned());
    let kv = members.len();
    let mut f = vec![vec![0usize; n]; n];
    let mut seen = vec![false; kv];
    seen[0] = true;
    for x in 0..n {
        for y in 0..n {
            if u0.contains(x, y) {
                f[x][y] = 0;
                continue;
            }
            let holding: Vec<usize> =
                (1..kv).filter(|&i| members[i].contains(x, y)).collect();
            if holding.is_empty() {
                return Err(clause_err(ANCHOR, format!("({x}, {y}) lies in no member")));
            }
            let mut uxy = members[holding[0]].clone();
            for &i in &holding[1..] {
                uxy = uxy.intersect(&members[i]);
            }
            let posn = members.iter().position(|m| *m == uxy).ok_or_else(|| {
                clause_err(ANCHOR, format!("(Q1) U_({x},{y}) is not a base member"))
            })?;
            f[x][y] = posn;
            seen[posn] = true;
        }
    }
    clauses.push(status_clause(
        ANCHOR,
        "(Q1) every base member arises as some U_(x,y)",
        seen.iter().all(|&s| s),
    )?);

    let table = sum_table(&members, ANCHOR)?;
    let vlabels: Vec<String> =
        std::iter::once("U0".to_string()).chain((1..kv).map(|i| format!("U{i}"))).collect();
    let vmvs = MvsTable::validate(vlabels, 0, table)
        .map_err(|err| clause_err(ANCHOR, format!("(Q2) (V,+) is not a value set: {err}")))?;
    clauses.push(Clause::pass(ANCHOR, "(Q2) (V,+) is a value set with neutral U_0"));
    check_q3(&members, &vmvs, ANCHOR)?;
    clauses.push(Clause::pass(ANCHOR, "(Q3) U ⊴ V iff U ⊆ V"));

    let vmvs = Arc::new(vmvs);
    let space = QmSpace::validate(labels, Arc::clone(&vmvs), f)
        .map_err(|err| clause_err(ANCHOR, format!("f(x,y) = U_(x,y) is not a quasimetric: {err}")))?;
    clauses.push(Clause::pass(ANCHOR, "f(x,y) = U_(x,y) is a quasimetric over (V,+)"));

    // Pointwise identity U[x] = closed ball of radius U, for every member.
    for (i, u) in members.iter().enumerate() {
        for x in 0..n {
            if *u.section(x) != space.ball(x, i, BallKind::Closed) {
                return Err(clause_err(
                    ANCHOR,
                    format!("U[x] ≠ closed ball at member {i}, x = {x}"),
                ));
            }
        }
    }
    clauses.push(Clause::pass(ANCHOR, "U[x] = closed ball B̄_f(x, U) pointwise"));

    let t_u = base_topology(&vstar).map_err(|err| clause_err(ANCHOR, err.to_string()))?;
    clauses.push(status_clause(
        ANCHOR,
        "T_f = T_U",
        space.induced_topology() == t_u,
    )?);

    Ok(MetrizeOutcome { members, mvs: vmvs, space, clauses })
}

/// End-to-end roundtrip outcome; `partial` marks a convexification budget
/// stop, in which case the later stages are skipped.
#[derive(Debug, Clone)]
pub struct RoundtripOutcome {
    pub report: Report,
    pub space: Option<QmSpace>,
    /// Image of the original carrier inside the final space.
    pub image: Option<PointSet>,
    pub partial: bool,
}

/// Runs the whole pipeline: make the space full, convexify within budget,
/// extract the entourage value set, metrize it back, and check that the
/// original topology is the relative topology of its image.
pub fn roundtrip(
    q: &QmSpace,
    max_stages: usize,
    max_points: usize,
) -> Result<RoundtripOutcome, CharError> {
    if !q.mvs().is_atom_free() {
        return Err(CharError::Refused("value set is not atom-free".into()));
    }
    let mut report = Report::new("characterization roundtrip");
    let fcr = full_convex_report(q);
    let (mut cur, mut inclusion): (QmSpace, Vec<usize>) = if fcr.full {
        report.push(Clause::note("Lemma 2.10", "space is already full; embedding skipped"));
        (q.clone(), (0..q.len()).collect())
    } else {
        let emb = embed_full(q)?;
        report.push(Clause::pass(
            "Lemma 2.10",
            format!("embedded into a full space on {} points", emb.space.len()),
        ));
        (emb.space, emb.inclusion)
    };

    let conv = convexify_until(&cur, max_stages, max_points)?;
    inclusion = inclusion.into_iter().map(|i| conv.inclusion[i]).collect();
    cur = conv.space;
    if conv.partial {
        report.push(Clause::note(
            "Lemma 2.11",
            format!(
                "partial: not convex after {} stage(s) within budget ({} points)",
                conv.stages,
                cur.len()
            ),
        ));
        return Ok(RoundtripOutcome { report, space: Some(cur), image: None, partial: true });
    }
    report.push(Clause::pass(
        "Lemma 2.11",
        format!("convex after {} stage(s) on {} points", conv.stages, cur.len()),
    ));

    let ent = entourage_mvs(&cur)?;
    report.extend(ent.clauses.iter().cloned());

    let met = metrize_from_base(
        cur.points().to_vec(),
        &ent.members[0],
        &ent.members[1..],
    )?;
    report.extend(met.clauses.iter().cloned());

    // The metrized space reproduces the topology of the convexified space,
    // and the original topology is the trace on the image of the inclusion.
    let final_t = met.space.induced_topology();
    report.push(status_clause(
        "Thm 2.14",
        "metrized topology equals the convexified topology",
        final_t == cur.induced_topology(),
    )?);
    let image = PointSet::from_indices(met.space.len(), &inclusion);
    report.push(status_clause(
        "Thm 1.5",
        "original topology is the relative topology of the image",
        final_t.relative(&image) == q.induced_topology(),
    )?);
    for x in 0..q.len() {
        for y in 0..q.len() {
            if cur.dist(inclusion[x], inclusion[y]) != q.dist(x, y) {
                return Err(clause_err("Lemma 2.10", "inclusion does not preserve distances"));
            }
        }
    }
    report.push(Clause::pass("Lemma 2.10", "inclusion preserves distances"));

    Ok(RoundtripOutcome { report, space: Some(met.space), image: Some(image), partial: false })
}
