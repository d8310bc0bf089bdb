//! Realizer construction and verification: families of extensions whose
//! intersection is exactly the transitive closure of the target.
//!
//! Members come from pairwise reversals: one base extension plus, per
//! unordered incomparable pair, an extension forcing each direction. That is
//! all the intersection argument needs, and it keeps families quadratic
//! instead of exponential.

use serde::Serialize;

use crate::classify::classify;
use crate::error::Error;
use crate::extend::{
    interval_extension, linear_extension, linear_interval_decompose, linear_semiorder_decompose,
    semiorder_extension, strong_interval_extension, Decomposition, LinearMode,
};
use crate::relation::{is_extension, Relation};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberClass {
    StrictLinear,
    Linear,
    IntervalOrder,
    StrongInterval,
    Semiorder,
    LinearInterval,
    LinearSemiorder,
}

impl MemberClass {
    pub fn requires_reflexive(self) -> bool {
        matches!(self, MemberClass::Linear | MemberClass::StrongInterval)
    }
}

/// A family of verified extensions of `target` whose intersection equals
/// `target` exactly.
#[derive(Debug, Clone)]
pub struct Realizer {
    pub target: Relation,
    pub members: Vec<Relation>,
    pub member_class: MemberClass,
    /// Per-member: does the member pass the strict linear (or linear, for
    /// reflexive classes) check? Meaningful for the hybrid classes.
    pub member_tags: Vec<bool>,
    /// Provenance for hybrid members, parallel to `members`.
    pub decompositions: Vec<Option<Decomposition>>,
}

/// First defect found while checking a candidate realizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealizerDefect {
    MemberWrongClass { index: usize },
    MemberNotExtension { index: usize },
    /// `extra` is true when the pair is in the intersection but not the
    /// target, false when the target pair is missing from some member.
    IntersectionMismatch { pair: (String, String), extra: bool },
}

impl std::fmt::Display for RealizerDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealizerDefect::MemberWrongClass { index } => {
                write!(f, "member {index} fails its class check")
            }
            RealizerDefect::MemberNotExtension { index } => {
                write!(f, "member {index} is not an extension of the target")
            }
            RealizerDefect::IntersectionMismatch { pair, extra } => {
                let side = if *extra { "exceeds" } else { "misses" };
                write!(f, "intersection {side} the target at ({}, {})", pair.0, pair.1)
            }
        }
    }
}

/// Checks every realizer invariant; `Ok(None)` means the family verifies.
/// The only hard error is a ground-set mismatch.
pub fn verify_realizer(
    target: &Relation,
    members: &[Relation],
    cls: MemberClass,
    limits: &Limits,
) -> Result<Option<RealizerDefect>, Error> {
    let mut intersection = target.reflexive_closure().with_rows(vec![!0u64; target.len()]);
    for (index, member) in members.iter().enumerate() {
        if !target.same_ground_set(member) {
            return Err(Error::GroundSetMismatch);
        }
        if !member_passes_class(member, cls, limits) {
            return Ok(Some(RealizerDefect::MemberWrongClass { index }));
        }
        if !is_extension(target, member)? {
            return Ok(Some(RealizerDefect::MemberNotExtension { index }));
        }
        intersection = intersection.intersection(member)?;
    }
    if members.is_empty() {
        intersection = target.clone().with_rows(vec![0u64; target.len()]);
    }
    if intersection != *target {
        let n = target.len();
        for i in 0..n {
            for j in 0..n {
                if intersection.contains(i, j) != target.contains(i, j) {
                    return Ok(Some(RealizerDefect::IntersectionMismatch {
                        pair: (target.label(i).to_owned(), target.label(j).to_owned()),
                        extra: intersection.contains(i, j),
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn member_passes_class(member: &Relation, cls: MemberClass, limits: &Limits) -> bool {
    let report = classify(member);
    match cls {
        MemberClass::StrictLinear => report.strict_linear_order,
        MemberClass::Linear => report.linear_order,
        MemberClass::IntervalOrder => report.interval_order,
        MemberClass::StrongInterval => report.strong_interval_order,
        MemberClass::Semiorder => report.semiorder,
        MemberClass::LinearInterval => {
            report.acyclic && linear_interval_decompose(member, limits).is_ok()
        }
        MemberClass::LinearSemiorder => {
            report.acyclic && linear_semiorder_decompose(member, limits).is_ok()
        }
    }
}

/// Builds a verified realizer of `transitive_closure(r)` (reflexively closed
/// for the reflexive classes) from pairwise reversals.
pub fn realizer(r: &Relation, cls: MemberClass, limits: &Limits) -> Result<Realizer, Error> {
    let target = if cls.requires_reflexive() {
        if let Some(i) = (0..r.len()).find(|&i| !r.contains(i, i)) {
            return Err(Error::NotReflexive {
                element: r.label(i).to_owned(),
            });
        }
        if let Some(w) = r.symmetric_pair_witness() {
            return Err(Error::SymmetricPair(w));
        }
        r.without_diagonal().transitive_closure().reflexive_closure()
    } else {
        if let Some(w) = r.cycle_witness() {
            return Err(Error::CyclicInput(w));
        }
        r.transitive_closure()
    };
    let strict_target = target.without_diagonal();

    let mut raw: Vec<(Relation, Option<Decomposition>)> = Vec::new();
    raw.push(build_member(&target, cls, limits).map_err(|e| match e {
        Error::NoDecompositionFound { .. } | Error::SearchBudgetExhausted { .. } => {
            Error::MemberConstructionFailed("-".into(), "-".into(), Box::new(e))
        }
        other => other,
    })?);

    let n = target.len();
    for a in 0..n {
        for b in a + 1..n {
            if strict_target.contains(a, b) || strict_target.contains(b, a) {
                continue;
            }
            for (u, v) in [(b, a), (a, b)] {
                let augmented = target.with_pair(u, v);
                let member = build_member(&augmented, cls, limits).map_err(|e| match e {
                    Error::NoDecompositionFound { .. } | Error::SearchBudgetExhausted { .. } => {
                        Error::MemberConstructionFailed(
                            target.label(u).to_owned(),
                            target.label(v).to_owned(),
                            Box::new(e),
                        )
                    }
                    other => other,
                })?;
                raw.push(member);
            }
        }
    }

    raw.sort_by(|x, y| x.0.cmp(&y.0));
    raw.dedup_by(|x, y| x.0 == y.0);

    let member_tags = raw
        .iter()
        .map(|(m, _)| {
            let report = classify(m);
            if cls.requires_reflexive() {
                report.linear_order
            } else {
                report.strict_linear_order
            }
        })
        .collect();
    let (members, decompositions): (Vec<_>, Vec<_>) = raw.into_iter().unzip();

    let out = Realizer {
        target: target.clone(),
        members,
        member_class: cls,
        member_tags,
        decompositions,
    };
    if let Some(defect) = verify_realizer(&target, &out.members, cls, limits)? {
        return Err(Error::RealizerInvalid {
            detail: defect.to_string(),
        });
    }
    Ok(out)
}

fn build_member(
    augmented: &Relation,
    cls: MemberClass,
    limits: &Limits,
) -> Result<(Relation, Option<Decomposition>), Error> {
    match cls {
        MemberClass::StrictLinear => {
            Ok((linear_extension(augmented, LinearMode::Strict)?, None))
        }
        MemberClass::Linear => Ok((linear_extension(augmented, LinearMode::Reflexive)?, None)),
        MemberClass::IntervalOrder => Ok((interval_extension(augmented)?, None)),
        MemberClass::StrongInterval => Ok((strong_interval_extension(augmented)?, None)),
        MemberClass::Semiorder => Ok((semiorder_extension(augmented)?, None)),
        MemberClass::LinearInterval => {
            let d = linear_interval_decompose(augmented, limits)?;
            let member = d.linear_part.intersection(&d.partner)?;
            Ok((member, Some(d)))
        }
        MemberClass::LinearSemiorder => {
            let d = linear_semiorder_decompose(augmented, limits)?;
            let member = d.linear_part.intersection(&d.partner)?;
            Ok((member, Some(d)))
        }
    }
}
