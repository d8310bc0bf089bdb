//! Exact order, interval, semiorder and lexicographic hybrid dimensions.
//!
//! Everything here is computed for the transitive closure of the input and is
//! certified: the returned realizer re-verifies, and minimality comes from an
//! exhaustive candidate enumeration plus an exact set-cover search. Beyond
//! the configured element caps the operations refuse with `SizeLimit` rather
//! than report an unverified number.

use std::collections::HashMap;

use serde::Serialize;

use crate::classify::{interval_violations, semiorder_violations};
use crate::error::Error;
use crate::extend::PartnerClass;
use crate::realize::{verify_realizer, MemberClass, Realizer};
use crate::relation::Relation;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Dim,
    Idim,
    Sdim,
    Lidim,
    Lsdim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DimValue {
    Scalar(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone)]
pub struct DimCertificate {
    pub quantity: Quantity,
    pub value: DimValue,
    pub witness: Realizer,
    /// True when the search provably covered all candidates.
    pub exhaustive: bool,
    /// Cover-search nodes explored.
    pub budget_used: u64,
}

/// Ordered incomparable pairs of a transitively closed relation; the cover
/// universe. A family of extensions intersects to the closure exactly when
/// every such pair is omitted by some member.
fn cover_universe(c: &Relation) -> Vec<(usize, usize)> {
    let n = c.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !c.contains(i, j) && !c.contains(j, i) {
                out.push((i, j));
            }
        }
    }
    out
}

fn omission_mask(cand: &Relation, universe: &[(usize, usize)]) -> u64 {
    let mut mask = 0u64;
    for (k, &(i, j)) in universe.iter().enumerate() {
        if !cand.contains(i, j) {
            mask |= 1 << k;
        }
    }
    mask
}

/// All strict linear order extensions of a strict partial order, as
/// (omission mask, relation) pairs.
fn linear_pool(c: &Relation, universe: &[(usize, usize)]) -> Vec<(u64, Relation)> {
    let n = c.len();
    let mut pool = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    fn rec(
        c: &Relation,
        remaining: u64,
        prefix: &mut Vec<usize>,
        universe: &[(usize, usize)],
        pool: &mut Vec<(u64, Relation)>,
    ) {
        let n = c.len();
        if remaining == 0 {
            let mut rows = vec![0u64; n];
            for (pos, &i) in prefix.iter().enumerate() {
                for &j in &prefix[pos + 1..] {
                    rows[i] |= 1 << j;
                }
            }
            let cand = c.with_rows(rows);
            pool.push((omission_mask(&cand, universe), cand));
            return;
        }
        for i in 0..n {
            if remaining >> i & 1 == 1
                && (0..n).all(|j| j == i || remaining >> j & 1 == 0 || !c.contains(j, i))
            {
                prefix.push(i);
                rec(c, remaining & !(1u64 << i), prefix, universe, pool);
                prefix.pop();
            }
        }
    }
    rec(c, full, &mut prefix, universe, &mut pool);
    pool
}

/// All transitive irreflexive supersets of `c` passing `keep`, by DFS over
/// pair decisions with transitivity propagation. Each superset is visited
/// exactly once.
fn extension_pool(
    c: &Relation,
    universe: &[(usize, usize)],
    keep: &dyn Fn(&Relation) -> bool,
    cap: u64,
) -> Result<Vec<(u64, Relation)>, Error> {
    let n = c.len();
    let mut pool = Vec::new();
    let mut nodes: u64 = 0;
    let mut stack = vec![(c.clone(), vec![0u64; n])];
    while let Some((q, forbidden)) = stack.pop() {
        nodes += 1;
        if nodes > cap {
            return Err(Error::SizeLimit {
                what: "extension pool nodes",
                value: nodes as usize,
                cap: cap as usize,
            });
        }
        let undecided = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                i != j && !q.contains(i, j) && forbidden[i] >> j & 1 == 0
            });
        match undecided {
            None => {
                if keep(&q) {
                    pool.push((omission_mask(&q, universe), q));
                }
            }
            Some((i, j)) => {
                // Exclude branch.
                let mut fb = forbidden.clone();
                fb[i] |= 1 << j;
                stack.push((q.clone(), fb));
                // Include branch, with propagation.
                let q2 = q.with_pair(i, j).transitive_closure();
                if q2.is_irreflexive()
                    && (0..n).all(|u| q2.row(u) & forbidden[u] == 0)
                {
                    stack.push((q2, forbidden));
                }
            }
        }
    }
    Ok(pool)
}

/// Exact minimum set cover by iterative deepening over the family size, with
/// a greedy popcount bound. Returns chosen pool indices.
fn min_cover(universe_bits: u64, pool: &[(u64, Relation)], nodes: &mut u64) -> Option<Vec<usize>> {
    if universe_bits == 0 {
        return Some(Vec::new());
    }
    // Per-bit candidate lists, ordered by descending mask popcount.
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(pool[i].0.count_ones()));
    let bits: Vec<u32> = (0..64).filter(|&b| universe_bits >> b & 1 == 1).collect();
    let mut per_bit: HashMap<u32, Vec<usize>> = HashMap::new();
    for &b in &bits {
        per_bit.insert(
            b,
            order
                .iter()
                .copied()
                .filter(|&i| pool[i].0 >> b & 1 == 1)
                .collect(),
        );
    }
    let max_pop = pool.iter().map(|(m, _)| m.count_ones()).max()?;
    for k in 1..=bits.len() {
        let mut chosen = Vec::new();
        if cover_dfs(universe_bits, k, &per_bit, pool, max_pop, &mut chosen, nodes) {
            return Some(chosen);
        }
    }
    None
}

fn cover_dfs(
    uncovered: u64,
    depth_left: usize,
    per_bit: &HashMap<u32, Vec<usize>>,
    pool: &[(u64, Relation)],
    max_pop: u32,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if uncovered == 0 {
        return true;
    }
    if depth_left == 0 {
        return false;
    }
    let need = (uncovered.count_ones() + max_pop - 1) / max_pop;
    if need as usize > depth_left {
        return false;
    }
    // Branch on the uncovered bit with the fewest candidates.
    let b = (0..64)
        .filter(|&b| uncovered >> b & 1 == 1)
        .min_by_key(|b| per_bit[b].len())
        .unwrap();
    for &i in &per_bit[&b] {
        if chosen.contains(&i) {
            continue;
        }
        chosen.push(i);
        if cover_dfs(
            uncovered & !pool[i].0,
            depth_left - 1,
            per_bit,
            pool,
            max_pop,
            chosen,
            nodes,
        ) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn check_acyclic(r: &Relation) -> Result<Relation, Error> {
    match r.cycle_witness() {
        Some(w) => Err(Error::CyclicInput(w)),
        None => Ok(r.transitive_closure()),
    }
}

fn certificate(
    quantity: Quantity,
    value: DimValue,
    target: Relation,
    members: Vec<Relation>,
    cls: MemberClass,
    budget_used: u64,
    limits: &Limits,
) -> Result<DimCertificate, Error> {
    let member_tags = members
        .iter()
        .map(|m| crate::classify::classify(m).strict_linear_order)
        .collect();
    let decompositions = members.iter().map(|_| None).collect();
    let witness = Realizer {
        target: target.clone(),
        members,
        member_class: cls,
        member_tags,
        decompositions,
    };
    if let Some(defect) = verify_realizer(&target, &witness.members, cls, limits)? {
        return Err(Error::RealizerInvalid {
            detail: defect.to_string(),
        });
    }
    Ok(DimCertificate {
        quantity,
        value,
        witness,
        exhaustive: true,
        budget_used,
    })
}

/// Minimum number of strict linear order extensions intersecting to the
/// transitive closure.
pub fn order_dim(r: &Relation, limits: &Limits) -> Result<DimCertificate, Error> {
    let c = check_acyclic(r)?;
    if c.len() > limits.max_n_order {
        return Err(Error::SizeLimit {
            what: "ground set (order_dim)",
            value: c.len(),
            cap: limits.max_n_order,
        });
    }
    let universe = cover_universe(&c);
    let universe_bits: u64 = if universe.len() == 64 {
        !0
    } else {
        (1u64 << universe.len()) - 1
    };
    let pool = linear_pool(&c, &universe);
    let mut nodes = 0u64;
    let chosen = min_cover(universe_bits, &pool, &mut nodes)
        .expect("every incomparable pair is reversible in some linear extension");
    let members: Vec<Relation> = if chosen.is_empty() {
        vec![c.clone()]
    } else {
        chosen.iter().map(|&i| pool[i].1.clone()).collect()
    };
    let value = DimValue::Scalar(members.len());
    certificate(
        Quantity::Dim,
        value,
        c,
        members,
        MemberClass::StrictLinear,
        nodes,
        limits,
    )
}

fn pool_dim(
    r: &Relation,
    quantity: Quantity,
    cls: MemberClass,
    keep: &dyn Fn(&Relation) -> bool,
    limits: &Limits,
) -> Result<DimCertificate, Error> {
    let c = check_acyclic(r)?;
    if c.len() > limits.max_n_pool {
        return Err(Error::SizeLimit {
            what: "ground set (pool dimension)",
            value: c.len(),
            cap: limits.max_n_pool,
        });
    }
    let universe = cover_universe(&c);
    let universe_bits: u64 = if universe.len() == 64 {
        !0
    } else {
        (1u64 << universe.len()) - 1
    };
    let pool = extension_pool(&c, &universe, keep, limits.search_budget)?;
    let mut nodes = 0u64;
    let chosen = min_cover(universe_bits, &pool, &mut nodes)
        .expect("the pool contains a full realizer by the extension theorems");
    let members: Vec<Relation> = if chosen.is_empty() {
        vec![c.clone()]
    } else {
        chosen.iter().map(|&i| pool[i].1.clone()).collect()
    };
    let value = DimValue::Scalar(members.len());
    certificate(quantity, value, c, members, cls, nodes, limits)
}

/// Minimum number of interval order extensions intersecting to the closure.
pub fn interval_dim(r: &Relation, limits: &Limits) -> Result<DimCertificate, Error> {
    pool_dim(
        r,
        Quantity::Idim,
        MemberClass::IntervalOrder,
        &|q| interval_violations(q).is_empty(),
        limits,
    )
}

/// Minimum number of semiorder extensions intersecting to the closure.
pub fn semiorder_dim(r: &Relation, limits: &Limits) -> Result<DimCertificate, Error> {
    pool_dim(
        r,
        Quantity::Sdim,
        MemberClass::Semiorder,
        &|q| interval_violations(q).is_empty() && semiorder_violations(q).is_empty(),
        limits,
    )
}

/// Lexicographically minimal `(p, q)` such that some family of `p − q`
/// strict linear and `q` non-linear partner-class extensions intersects to
/// the closure.
pub fn hybrid_dim(
    r: &Relation,
    partner: PartnerClass,
    limits: &Limits,
) -> Result<DimCertificate, Error> {
    let c = check_acyclic(r)?;
    if c.len() > limits.max_n_pool {
        return Err(Error::SizeLimit {
            what: "ground set (pool dimension)",
            value: c.len(),
            cap: limits.max_n_pool,
        });
    }
    let universe = cover_universe(&c);
    let universe_bits: u64 = if universe.len() == 64 {
        !0
    } else {
        (1u64 << universe.len()) - 1
    };
    let linears = linear_pool(&c, &universe);
    let keep: &dyn Fn(&Relation) -> bool = match partner {
        PartnerClass::IntervalOrder => &|q: &Relation| {
            !q.is_total() && interval_violations(q).is_empty()
        },
        PartnerClass::Semiorder => &|q: &Relation| {
            !q.is_total()
                && interval_violations(q).is_empty()
                && semiorder_violations(q).is_empty()
        },
    };
    let nonlinears = extension_pool(&c, &universe, keep, limits.search_budget)?;

    let (quantity, cls) = match partner {
        PartnerClass::IntervalOrder => (Quantity::Lidim, MemberClass::LinearInterval),
        PartnerClass::Semiorder => (Quantity::Lsdim, MemberClass::LinearSemiorder),
    };

    let mut nodes = 0u64;
    let upper = universe.len().max(1) + 1;
    for p in 1..=upper {
        for q in 0..=p {
            if p - q > linears.len() || q > nonlinears.len() {
                continue;
            }
            if let Some((lin_idx, non_idx)) =
                hybrid_cover(universe_bits, &linears, &nonlinears, p - q, q, &mut nodes)
            {
                let mut members: Vec<Relation> = lin_idx
                    .iter()
                    .map(|&i| linears[i].1.clone())
                    .chain(non_idx.iter().map(|&i| nonlinears[i].1.clone()))
                    .collect();
                members.sort();
                let value = DimValue::Pair(p, q);
                return certificate(quantity, value, c, members, cls, nodes, limits);
            }
        }
    }
    unreachable!("a full strict linear realizer bounds p")
}

/// Exact cover using at most `lin` linear and `non` non-linear members, then
/// padded with distinct unused candidates to the exact counts.
fn hybrid_cover(
    universe_bits: u64,
    linears: &[(u64, Relation)],
    nonlinears: &[(u64, Relation)],
    lin: usize,
    non: usize,
    nodes: &mut u64,
) -> Option<(Vec<usize>, Vec<usize>)> {
    fn dfs(
        uncovered: u64,
        linears: &[(u64, Relation)],
        nonlinears: &[(u64, Relation)],
        lin_left: usize,
        non_left: usize,
        lin_chosen: &mut Vec<usize>,
        non_chosen: &mut Vec<usize>,
        nodes: &mut u64,
    ) -> bool {
        *nodes += 1;
        if uncovered == 0 {
            return true;
        }
        if lin_left == 0 && non_left == 0 {
            return false;
        }
        let b = uncovered.trailing_zeros();
        if lin_left > 0 {
            for (i, (mask, _)) in linears.iter().enumerate() {
                if mask >> b & 1 == 1 && !lin_chosen.contains(&i) {
                    lin_chosen.push(i);
                    if dfs(
                        uncovered & !mask,
                        linears,
                        nonlinears,
                        lin_left - 1,
                        non_left,
                        lin_chosen,
                        non_chosen,
                        nodes,
                    ) {
                        return true;
                    }
                    lin_chosen.pop();
                }
            }
        }
        if non_left > 0 {
            for (i, (mask, _)) in nonlinears.iter().enumerate() {
                if mask >> b & 1 == 1 && !non_chosen.contains(&i) {
                    non_chosen.push(i);
                    if dfs(
                        uncovered & !mask,
                        linears,
                        nonlinears,
                        lin_left,
                        non_left - 1,
                        lin_chosen,
                        non_chosen,
                        nodes,
                    ) {
                        return true;
                    }
                    non_chosen.pop();
                }
            }
        }
        false
    }

    let mut lin_chosen = Vec::new();
    let mut non_chosen = Vec::new();
    if !dfs(
        universe_bits,
        linears,
        nonlinears,
        lin,
        non,
        &mut lin_chosen,
        &mut non_chosen,
        nodes,
    ) {
        return None;
    }
    // Pad with distinct unused candidates to the exact member counts.
    for i in 0..linears.len() {
        if lin_chosen.len() == lin {
            break;
        }
        if !lin_chosen.contains(&i) {
            lin_chosen.push(i);
        }
    }
    for i in 0..nonlinears.len() {
        if non_chosen.len() == non {
            break;
        }
        if !non_chosen.contains(&i) {
            non_chosen.push(i);
        }
    }
    if lin_chosen.len() == lin && non_chosen.len() == non {
        Some((lin_chosen, non_chosen))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    fn chain(n: usize) -> Relation {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Relation::on_indexed(n, &pairs)
    }

    fn two_plus_two() -> Relation {
        Relation::on_indexed(4, &[(0, 1), (2, 3)])
    }

    fn three_plus_one() -> Relation {
        Relation::on_indexed(4, &[(0, 1), (1, 2), (0, 2)])
    }

    /// Standard example S3: a_i < b_j iff i != j (elements a1 a2 a3 b1 b2 b3).
    fn s3() -> Relation {
        let labels: Vec<String> = ["a1", "a2", "a3", "b1", "b2", "b3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut pairs = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    pairs.push((i, 3 + j));
                }
            }
        }
        Relation::new(labels, &pairs).unwrap()
    }

    #[test]
    fn dim_of_chain_is_one() {
        let cert = order_dim(&chain(4), &limits()).unwrap();
        assert_eq!(cert.value, DimValue::Scalar(1));
        assert!(cert.exhaustive);
    }

    #[test]
    fn dim_of_antichain_is_two() {
        let cert = order_dim(&Relation::on_indexed(2, &[]), &limits()).unwrap();
        assert_eq!(cert.value, DimValue::Scalar(2));
    }

    #[test]
    fn dim_of_standard_example_is_three() {
        let cert = order_dim(&s3(), &limits()).unwrap();
        assert_eq!(cert.value, DimValue::Scalar(3));
    }

    #[test]
    fn idim_of_interval_order_is_one() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3), (0, 3)]);
        let cert = interval_dim(&r, &limits()).unwrap();
        assert_eq!(cert.value, DimValue::Scalar(1));
    }

    #[test]
    fn idim_of_two_plus_two_is_two() {
        let cert = interval_dim(&two_plus_two(), &limits()).unwrap();
        assert_eq!(cert.value, DimValue::Scalar(2));
    }

    #[test]
    fn idim_of_standard_example_is_three() {
        // Exhaustive: 688 interval-order extensions of S3 exist and no two
        // of them cover all 18 incomparable pairs (cross-checked by an
        // independent brute force over all 2^18 pair subsets).
        let cert = interval_dim(&s3(), &limits()).unwrap();
        assert_eq!(cert.value, DimValue::Scalar(3));
    }

    #[test]
    fn sdim_examples() {
        let semi = chain(3);
        assert_eq!(
            semiorder_dim(&semi, &limits()).unwrap().value,
            DimValue::Scalar(1)
        );
        assert_eq!(
            semiorder_dim(&two_plus_two(), &limits()).unwrap().value,
            DimValue::Scalar(2)
        );
        assert_eq!(
            semiorder_dim(&three_plus_one(), &limits()).unwrap().value,
            DimValue::Scalar(2)
        );
    }

    #[test]
    fn hybrid_examples() {
        let lin = chain(3);
        assert_eq!(
            hybrid_dim(&lin, PartnerClass::IntervalOrder, &limits())
                .unwrap()
                .value,
            DimValue::Pair(1, 0)
        );
        let interval_nonlinear = Relation::on_indexed(4, &[(0, 1), (2, 3), (0, 3)]);
        assert_eq!(
            hybrid_dim(&interval_nonlinear, PartnerClass::IntervalOrder, &limits())
                .unwrap()
                .value,
            DimValue::Pair(1, 1)
        );
        for partner in [PartnerClass::IntervalOrder, PartnerClass::Semiorder] {
            assert_eq!(
                hybrid_dim(&two_plus_two(), partner, &limits()).unwrap().value,
                DimValue::Pair(2, 0)
            );
        }
    }

    #[test]
    fn cyclic_input_rejected() {
        let cyc = Relation::on_indexed(2, &[(0, 1), (1, 0)]);
        assert!(matches!(
            order_dim(&cyc, &limits()),
            Err(Error::CyclicInput(_))
        ));
    }

    #[test]
    fn size_limit_enforced() {
        let big = Relation::on_indexed(7, &[]);
        assert!(matches!(
            interval_dim(&big, &limits()),
            Err(Error::SizeLimit { .. })
        ));
    }
}
