//! Extension constructors: strict/reflexive linear extensions, interval and
//! strong interval extensions, semiorder extensions, and the verified
//! linear-interval / linear-semiorder decompositions.
//!
//! Every constructor returns a transitively closed output and every
//! decomposition is verified (`linear_part ∩ partner == closure of the
//! input`) before it is returned.

use serde::Serialize;

use crate::classify::{classify, interval_violations, semiorder_violations};
use crate::error::Error;
use crate::relation::Relation;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearMode {
    Strict,
    Reflexive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartnerClass {
    IntervalOrder,
    Semiorder,
}

/// A verified `L ∩ Q` decomposition of an acyclic relation's transitive
/// closure into a strict linear order and an interval order or semiorder.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub linear_part: Relation,
    pub partner: Relation,
    pub partner_class: PartnerClass,
    /// Always true on a stored decomposition: the intersection equality has
    /// been checked before construction.
    pub verified: bool,
}

impl Decomposition {
    /// Re-checks everything this value asserts about `source`.
    pub fn verify_against(&self, source: &Relation) -> Result<bool, Error> {
        let c = source.transitive_closure();
        let report = classify(&self.partner);
        let partner_ok = match self.partner_class {
            PartnerClass::IntervalOrder => report.interval_order,
            PartnerClass::Semiorder => report.semiorder,
        };
        Ok(classify(&self.linear_part).strict_linear_order
            && partner_ok
            && self.linear_part.intersection(&self.partner)? == c)
    }
}

/// Topological order extension. Strict mode needs an acyclic input; reflexive
/// mode needs a transitively antisymmetric one. Ties are broken by
/// element-sequence order, so the output is deterministic.
pub fn linear_extension(r: &Relation, mode: LinearMode) -> Result<Relation, Error> {
    match mode {
        LinearMode::Strict => {
            if let Some(w) = r.cycle_witness() {
                return Err(Error::CyclicInput(w));
            }
            Ok(topological_total_order(&r.transitive_closure()))
        }
        LinearMode::Reflexive => {
            if let Some(w) = r.symmetric_pair_witness() {
                return Err(Error::SymmetricPair(w));
            }
            let strict = r.transitive_closure().without_diagonal();
            Ok(topological_total_order(&strict).reflexive_closure())
        }
    }
}

/// Kahn's algorithm on a strict partial order `c`, emitting the
/// element-sequence-first source of the residual relation each round. The
/// result is the total strict order given by that emission sequence.
fn topological_total_order(c: &Relation) -> Relation {
    let n = c.len();
    let mut remaining: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while remaining != 0 {
        let next = (0..n)
            .find(|&i| {
                remaining >> i & 1 == 1
                    && (0..n).all(|j| j == i || remaining >> j & 1 == 0 || !c.contains(j, i))
            })
            .expect("acyclic relation always has a source");
        order.push(next);
        remaining &= !(1u64 << next);
    }
    let mut rows = vec![0u64; n];
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            rows[i] |= 1 << j;
        }
    }
    c.with_rows(rows)
}

/// Saturates the Russell-Wiener augmentation operator to a fixpoint and
/// returns the transitive closure, an interval order extension of `r`.
///
/// Pairs are added all at once per round with a post-round acyclicity check;
/// if a round ever broke acyclicity the engine falls back to adding one
/// violating pair at a time in element order.
pub fn interval_extension(r: &Relation) -> Result<Relation, Error> {
    if let Some(w) = r.cycle_witness() {
        return Err(Error::CyclicInput(w));
    }
    let mut cur = r.clone();
    loop {
        let violations = interval_violations(&cur);
        if violations.is_empty() {
            break;
        }
        let mut next = cur.clone();
        for &((x, y), _) in &violations {
            next = next.with_pair(x, y);
        }
        if next.is_acyclic() {
            cur = next;
            continue;
        }
        // Single-pair fallback: one new pair per round keeps the cycle
        // argument airtight.
        let ((x, y), _) = violations[0];
        let single = cur.with_pair(x, y);
        if !single.is_acyclic() {
            return Err(Error::InternalSaturationCycle);
        }
        cur = single;
    }
    Ok(cur.transitive_closure())
}

/// Reflexive closure of an interval extension of the strict part; a strong
/// interval order extension of any transitively antisymmetric input.
pub fn strong_interval_extension(r: &Relation) -> Result<Relation, Error> {
    if let Some(w) = r.symmetric_pair_witness() {
        return Err(Error::SymmetricPair(w));
    }
    let strict = r.transitive_closure().without_diagonal();
    Ok(interval_extension(&strict)?.reflexive_closure())
}

/// Saturates the 3+1 completion operator on top of an interval extension.
/// After each round the operator's preserved invariants (irreflexivity,
/// transitivity, the interval axiom) are asserted.
pub fn semiorder_extension(r: &Relation) -> Result<Relation, Error> {
    let mut q = interval_extension(r)?;
    loop {
        let additions = operator_t(&q);
        if additions.is_empty() {
            break;
        }
        for (x, w) in additions {
            q = q.with_pair(x, w);
        }
        if !q.is_irreflexive() {
            return Err(Error::InternalOperatorFailure("irreflexivity".into()));
        }
        if !q.is_transitive() {
            return Err(Error::InternalOperatorFailure("transitivity".into()));
        }
        if !interval_violations(&q).is_empty() {
            return Err(Error::InternalOperatorFailure("interval axiom".into()));
        }
    }
    Ok(q)
}

/// `T(q) = {(x, w), x ≠ w : ∃ y, z with (x,y) ∈ q, (y,z) ∈ q, (x,w) ∉ q,
/// (w,z) ∉ q}`.
fn operator_t(q: &Relation) -> Vec<(usize, usize)> {
    let n = q.len();
    let mut out = Vec::new();
    for x in 0..n {
        'pairs: for w in 0..n {
            if x == w || q.contains(x, w) {
                continue;
            }
            for y in 0..n {
                if !q.contains(x, y) {
                    continue;
                }
                for z in 0..n {
                    if q.contains(y, z) && !q.contains(w, z) {
                        out.push((x, w));
                        continue 'pairs;
                    }
                }
            }
        }
    }
    out
}

/// `R* = c ∪ {(v, u) : (u, v) ∈ q \ c}` — the reversal completion used by
/// the decomposition theorems. Cyclic outputs are possible and are exactly
/// what the decomposition search backtracks on.
pub fn reversal_completion(c: &Relation, q: &Relation) -> Result<Relation, Error> {
    if !c.same_ground_set(q) {
        return Err(Error::GroundSetMismatch);
    }
    let n = c.len();
    let mut out = c.clone();
    for u in 0..n {
        for v in 0..n {
            if q.contains(u, v) && !c.contains(u, v) {
                out = out.with_pair(v, u);
            }
        }
    }
    Ok(out)
}

pub fn linear_interval_decompose(r: &Relation, limits: &Limits) -> Result<Decomposition, Error> {
    decompose(r, PartnerClass::IntervalOrder, limits)
}

pub fn linear_semiorder_decompose(r: &Relation, limits: &Limits) -> Result<Decomposition, Error> {
    decompose(r, PartnerClass::Semiorder, limits)
}

fn decompose(r: &Relation, cls: PartnerClass, limits: &Limits) -> Result<Decomposition, Error> {
    if let Some(w) = r.cycle_witness() {
        return Err(Error::CyclicInput(w));
    }
    let c = r.transitive_closure();
    let mut nodes: u64 = 0;

    // Fast path: the canonical saturated extension, when its reversal
    // completion happens to be acyclic.
    let q0 = match cls {
        PartnerClass::IntervalOrder => interval_extension(&c)?,
        PartnerClass::Semiorder => semiorder_extension(&c)?,
    };
    if let Some(d) = try_complete(&c, &q0, cls)? {
        return Ok(d);
    }

    // Backtracking search: grow the partner from the closure, resolving one
    // forbidden quadruple at a time.
    match search(&c, &c, cls, &mut nodes, limits.search_budget)? {
        Some(d) => Ok(d),
        None => Err(Error::NoDecompositionFound { nodes }),
    }
}

/// If `q` is a violation-free partner whose reversal completion is acyclic,
/// builds and verifies the full decomposition.
fn try_complete(
    c: &Relation,
    q: &Relation,
    cls: PartnerClass,
) -> Result<Option<Decomposition>, Error> {
    let rstar = reversal_completion(c, q)?;
    if !rstar.is_acyclic() {
        return Ok(None);
    }
    let linear = linear_extension(&rstar, LinearMode::Strict)?;
    if linear.intersection(q)? != *c {
        return Ok(None);
    }
    let d = Decomposition {
        linear_part: linear,
        partner: q.clone(),
        partner_class: cls,
        verified: true,
    };
    debug_assert!(d.verify_against(c)?);
    Ok(Some(d))
}

fn search(
    c: &Relation,
    q: &Relation,
    cls: PartnerClass,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<Decomposition>, Error> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::SearchBudgetExhausted { nodes: *nodes });
    }
    if !q.is_irreflexive() {
        return Ok(None);
    }
    if !reversal_completion(c, q)?.is_acyclic() {
        return Ok(None);
    }
    let options: Option<[(usize, usize); 2]> = if let Some(&((x, y), (a, b))) =
        interval_violations(q).first()
    {
        Some([(x, y), (b, a)])
    } else if cls == PartnerClass::Semiorder {
        semiorder_violations(q)
            .first()
            .map(|&(x, _, z, w)| [(x, w), (w, z)])
    } else {
        None
    };
    let Some(options) = options else {
        // Violation-free partner with acyclic completion: a leaf.
        return try_complete(c, q, cls);
    };
    for (u, v) in options {
        let next = q.with_pair(u, v).transitive_closure();
        if let Some(d) = search(c, &next, cls, nodes, budget)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}
