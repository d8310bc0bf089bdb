//! Membership tests for the order classes, plus the negative-assumption
//! violation scans that certify failures.
//!
//! The scans are brute-force quadruple loops over the ground set with the
//! transitive closure precomputed once. The ground sets here are tiny, and a
//! checkable certificate is worth more than speed.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::relation::{Relation, Witness, WitnessKind};

/// Flags keyed in [`ClassReport::witnesses`] when they fail with a
/// certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFlag {
    Acyclic,
    TransitivelyAntisymmetric,
    IntervalOrder,
    Semiorder,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub irreflexive: bool,
    pub reflexive: bool,
    pub transitive: bool,
    pub antisymmetric: bool,
    pub asymmetric: bool,
    pub total: bool,
    pub acyclic: bool,
    pub transitively_antisymmetric: bool,
    pub strict_partial_order: bool,
    pub partial_order: bool,
    pub strict_linear_order: bool,
    pub linear_order: bool,
    pub interval_order: bool,
    pub semiorder: bool,
    pub strong_interval_order: bool,
    pub witnesses: BTreeMap<ClassFlag, Witness>,
}

/// Decides every order-class flag by direct definition. On the empty ground
/// set every universally quantified flag is vacuously true.
pub fn classify(r: &Relation) -> ClassReport {
    let closure = r.transitive_closure();
    let irreflexive = r.is_irreflexive();
    let reflexive = r.is_reflexive();
    let transitive = closure == *r;
    let antisymmetric = r.is_antisymmetric();
    let asymmetric = r.is_asymmetric();
    let total = r.is_total();
    let acyclic = closure.is_irreflexive();
    let mut witnesses = BTreeMap::new();
    if !acyclic {
        if let Some(w) = r.cycle_witness() {
            witnesses.insert(ClassFlag::Acyclic, w);
        }
    }
    let transitively_antisymmetric = match r.symmetric_pair_witness() {
        None => true,
        Some(w) => {
            witnesses.insert(ClassFlag::TransitivelyAntisymmetric, w);
            false
        }
    };

    let strict_partial_order = irreflexive && transitive;
    let partial_order = reflexive && transitive && antisymmetric;
    let strict_linear_order = strict_partial_order && total;
    let linear_order = partial_order && total;

    let mut interval_order = strict_partial_order;
    if strict_partial_order {
        let violations = interval_violations(r);
        if let Some(&((x, y), (a, b))) = violations.first() {
            witnesses.insert(
                ClassFlag::IntervalOrder,
                Witness {
                    kind: WitnessKind::TwoPlusTwo,
                    members: vec![
                        r.label(x).to_owned(),
                        r.label(y).to_owned(),
                        r.label(a).to_owned(),
                        r.label(b).to_owned(),
                    ],
                },
            );
            interval_order = false;
        }
    }

    let mut semiorder = interval_order;
    if interval_order {
        let violations = semiorder_violations(r);
        if let Some(&(x, y, z, w)) = violations.first() {
            witnesses.insert(
                ClassFlag::Semiorder,
                Witness {
                    kind: WitnessKind::ThreePlusOne,
                    members: vec![
                        r.label(x).to_owned(),
                        r.label(y).to_owned(),
                        r.label(z).to_owned(),
                        r.label(w).to_owned(),
                    ],
                },
            );
            semiorder = false;
        }
    }

    let strict = r.without_diagonal();
    let strong_interval_order =
        reflexive && strict.is_transitive() && interval_violations(&strict).is_empty();

    ClassReport {
        irreflexive,
        reflexive,
        transitive,
        antisymmetric,
        asymmetric,
        total,
        acyclic,
        transitively_antisymmetric,
        strict_partial_order,
        partial_order,
        strict_linear_order,
        linear_order,
        interval_order,
        semiorder,
        strong_interval_order,
        witnesses,
    }
}

/// The negative interval order assumption set: all `((x, y), (a, b))` with
/// `(x,a) ∈ r`, `(b,y) ∈ r`, `(b,a) ∉ r̄`, `(x,y) ∉ r`, in lexicographic
/// element-sequence order.
pub fn interval_violations(r: &Relation) -> Vec<((usize, usize), (usize, usize))> {
    let closure = r.transitive_closure();
    let n = r.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if r.contains(x, y) {
                continue;
            }
            for a in 0..n {
                if !r.contains(x, a) {
                    continue;
                }
                for b in 0..n {
                    if r.contains(b, y) && !closure.contains(b, a) {
                        out.push(((x, y), (a, b)));
                    }
                }
            }
        }
    }
    out
}

/// All 3+1 quadruples `(x, y, z, w)` with `(x,y) ∈ r`, `(y,z) ∈ r`,
/// `(x,w) ∉ r`, `(w,z) ∉ r` and `w ∉ {x, y, z}`, in lexicographic order.
pub fn semiorder_violations(r: &Relation) -> Vec<(usize, usize, usize, usize)> {
    let n = r.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if !r.contains(x, y) {
                continue;
            }
            for z in 0..n {
                if !r.contains(y, z) {
                    continue;
                }
                for w in 0..n {
                    if w != x
                        && w != y
                        && w != z
                        && !r.contains(x, w)
                        && !r.contains(w, z)
                    {
                        out.push((x, y, z, w));
                    }
                }
            }
        }
    }
    out
}
