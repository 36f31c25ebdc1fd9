//! Shared corpus generation for the integration suites: seeded random
//! quasimetric spaces over the max value set, produced by repairing a random
//! matrix to a triangle-inequality fixpoint.
#![allow(dead_code)]

use std::sync::Arc;

use finmet::{MvsTable, QmSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random quasimetric over `({0..k-1}, max)`: random off-diagonal entries,
/// then Floyd-Warshall-style lowering `d(x,z) := min(d(x,z),
/// max(d(x,y), d(y,z)))` until the triangle inequality holds.
pub fn random_max_space(rng: &mut ChaCha8Rng, n: usize, k: usize) -> QmSpace {
    let mvs = Arc::new(MvsTable::max_mvs(k));
    let mut d = vec![vec![0usize; n]; n];
    for x in 0..n {
        for y in 0..n {
            if x != y {
                d[x][y] = rng.gen_range(0..k);
            }
        }
    }
    for y in 0..n {
        for x in 0..n {
            for z in 0..n {
                let bound = d[x][y].max(d[y][z]);
                if d[x][z] > bound {
                    d[x][z] = bound;
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    QmSpace::validate(labels, mvs, d).expect("repaired matrix satisfies the axioms")
}

/// Symmetrization: pointwise max of the distance and its transpose, which
/// stays a quasimetric over a max value set.
pub fn symmetrize(q: &QmSpace) -> QmSpace {
    let n = q.len();
    let d = (0..n)
        .map(|x| (0..n).map(|y| q.dist(x, y).max(q.dist(y, x))).collect())
        .collect();
    QmSpace::validate(q.points().to_vec(), Arc::clone(q.mvs()), d)
        .expect("symmetrized matrix satisfies the axioms")
}
