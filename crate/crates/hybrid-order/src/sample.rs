//! Seed-reproducible random instances for audits and property tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::relation::Relation;

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Random acyclic relation on `x1..xn`: a uniformly random permutation fixes
/// a topological order and each forward pair is included with probability
/// 1/2. Covers sparse through dense DAGs and is deterministic in `seed`.
pub fn random_acyclic(n: usize, seed: u64) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher-Yates with the seeded stream.
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.5) {
                pairs.push((perm[a], perm[b]));
            }
        }
    }
    Relation::new(labels(n), &pairs).expect("forward pairs of a permutation are in bounds")
}

/// Random relation on `x1..xn` with each ordered pair (loops included)
/// present with probability 1/2.
pub fn random_relation(n: usize, seed: u64) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.5) {
                pairs.push((i, j));
            }
        }
    }
    Relation::new(labels(n), &pairs).expect("pairs are in bounds")
}

/// Random reflexive transitively antisymmetric relation: the reflexive
/// closure of a random acyclic relation.
pub fn random_reflexive_antisymmetric(n: usize, seed: u64) -> Relation {
    random_acyclic(n, seed).reflexive_closure()
}
