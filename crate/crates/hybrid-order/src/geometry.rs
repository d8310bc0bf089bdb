//! Geometric models: interval and unit-interval representations, triangle
//! representations of decomposable relations, tuple products with their
//! tie-break linearization, and box embeddings from interval realizers.
//!
//! Every representation is verified against its defining biconditional with
//! exact rational comparisons before it is returned; contact is comparable
//! (`b_x ≤ a_y` means precedence, even when the endpoints touch).

use num_rational::Rational64;
use num_traits::Zero;

use crate::classify::{classify, interval_violations, semiorder_violations};
use crate::error::Error;
use crate::extend::{linear_interval_decompose, linear_semiorder_decompose, PartnerClass};
use crate::realize::{verify_realizer, MemberClass, Realizer};
use crate::relation::{Relation, Witness, WitnessKind};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Interval,
    UnitInterval,
    Triangle,
    UnitTriangle,
    Box,
}

impl RepKind {
    pub fn name(self) -> &'static str {
        match self {
            RepKind::Interval => "interval",
            RepKind::UnitInterval => "unit_interval",
            RepKind::Triangle => "triangle",
            RepKind::UnitTriangle => "unit_triangle",
            RepKind::Box => "box",
        }
    }
}

/// A verified geometric model. `intervals[x]` holds one open interval per
/// coordinate (a single one except for boxes); `apexes` is present for the
/// triangle kinds only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricRep {
    pub kind: RepKind,
    pub elements: Vec<String>,
    pub apexes: Option<Vec<Rational64>>,
    pub intervals: Vec<Vec<(Rational64, Rational64)>>,
}

fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// Certifies that `q` is an interval order or returns a checkable witness:
/// a cycle (covers self-loops), or a Russell-Wiener violation quadruple
/// (non-transitive acyclic irreflexive relations always contain one with
/// `a = b`).
fn interval_order_witness(q: &Relation) -> Option<Witness> {
    if let Some(w) = q.cycle_witness() {
        return Some(w);
    }
    interval_violations(q).first().map(|&((x, y), (a, b))| Witness {
        kind: WitnessKind::TwoPlusTwo,
        members: vec![
            q.label(x).to_owned(),
            q.label(y).to_owned(),
            q.label(a).to_owned(),
            q.label(b).to_owned(),
        ],
    })
}

/// Open-interval model of an interval order by down-set ranks: the distinct
/// strict predecessor sets form a chain `D_0 ⊂ … ⊂ D_{k−1}`; `a_x` is the
/// chain index of `Pred(x)` and `b_x` the least `j` with `x ∈ D_j` (else
/// `k`). `(x,y) ∈ q ⇔ b_x ≤ a_y`, checked before return.
pub fn interval_representation(q: &Relation) -> Result<GeometricRep, Error> {
    if let Some(w) = interval_order_witness(q) {
        return Err(Error::NotIntervalOrder(w));
    }
    let n = q.len();
    let mut downsets: Vec<u64> = (0..n)
        .map(|x| (0..n).filter(|&y| q.contains(y, x)).fold(0u64, |m, y| m | 1 << y))
        .collect();
    downsets.sort();
    downsets.dedup();
    downsets.sort_by_key(|d| d.count_ones());
    for w in downsets.windows(2) {
        if w[0] & !w[1] != 0 {
            return Err(Error::InternalOperatorFailure(
                "interval order down-sets must form a chain".into(),
            ));
        }
    }
    let k = downsets.len() as i64;
    let intervals: Vec<Vec<(Rational64, Rational64)>> = (0..n)
        .map(|x| {
            let pred = (0..n)
                .filter(|&y| q.contains(y, x))
                .fold(0u64, |m, y| m | 1 << y);
            let a = downsets.iter().position(|&d| d == pred).unwrap() as i64;
            let b = downsets
                .iter()
                .position(|&d| d >> x & 1 == 1)
                .map_or(k, |j| j as i64);
            vec![(rat(a), rat(b))]
        })
        .collect();
    let rep = GeometricRep {
        kind: RepKind::Interval,
        elements: q.elements().to_vec(),
        apexes: None,
        intervals,
    };
    verify_interval_iff(&rep, q, 0)?;
    Ok(rep)
}

/// Checks `(x,y) ∈ q ⇔ b_x ≤ a_y` in coordinate `coord`.
fn verify_interval_iff(rep: &GeometricRep, q: &Relation, coord: usize) -> Result<(), Error> {
    let n = q.len();
    for x in 0..n {
        let (ax, bx) = rep.intervals[x][coord];
        if ax >= bx {
            return Err(Error::InternalOperatorFailure(
                "degenerate interval endpoints".into(),
            ));
        }
        for y in 0..n {
            if x == y {
                continue;
            }
            let ay = rep.intervals[y][coord].0;
            if q.contains(x, y) != (bx <= ay) {
                return Err(Error::InternalOperatorFailure(
                    "interval representation biconditional failed".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Certifies that `s` is a semiorder or returns a checkable witness.
fn semiorder_witness(s: &Relation) -> Option<Witness> {
    if let Some(w) = interval_order_witness(s) {
        return Some(w);
    }
    semiorder_violations(s).first().map(|&(x, y, z, w)| Witness {
        kind: WitnessKind::ThreePlusOne,
        members: vec![
            s.label(x).to_owned(),
            s.label(y).to_owned(),
            s.label(z).to_owned(),
            s.label(w).to_owned(),
        ],
    })
}

/// Unit-interval model of a semiorder: solves the difference-constraint
/// system `{r_x + 1 ≤ r_y for (x,y) ∈ s; |r_x − r_y| ≤ 1 − ε for
/// incomparable x ≠ y}` with `ε = 1/(n+1)` by Bellman-Ford potentials,
/// shifts the minimum to 0, and checks `(x,y) ∈ s ⇔ r_x + 1 ≤ r_y`.
pub fn unit_interval_representation(s: &Relation) -> Result<GeometricRep, Error> {
    if let Some(w) = semiorder_witness(s) {
        return Err(Error::NotSemiorder(w));
    }
    let n = s.len();
    let eps = Rational64::new(1, n as i64 + 1);
    // Constraint r_u − r_v ≤ c becomes edge (v, u, c).
    let mut edges: Vec<(usize, usize, Rational64)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            if s.contains(x, y) {
                edges.push((y, x, rat(-1)));
            } else if !s.contains(y, x) {
                edges.push((y, x, rat(1) - eps));
            }
        }
    }
    let mut dist = vec![Rational64::zero(); n];
    for round in 0..=n {
        let mut changed = false;
        for &(v, u, c) in &edges {
            if dist[v] + c < dist[u] {
                dist[u] = dist[v] + c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        if round == n {
            return Err(Error::InfeasibleSystem);
        }
    }
    let shift = dist.iter().min().copied().unwrap_or_else(Rational64::zero);
    let intervals: Vec<Vec<(Rational64, Rational64)>> = dist
        .iter()
        .map(|&d| vec![(d - shift, d - shift + rat(1))])
        .collect();
    for x in 0..n {
        for y in 0..n {
            if x != y && s.contains(x, y) != (intervals[x][0].1 <= intervals[y][0].0) {
                return Err(Error::InfeasibleSystem);
            }
        }
    }
    Ok(GeometricRep {
        kind: RepKind::UnitInterval,
        elements: s.elements().to_vec(),
        apexes: None,
        intervals,
    })
}

/// Triangle model of a decomposable relation: apexes are ranks in the linear
/// part, bases an (unit-)interval model of the partner. Verified:
/// `(x,y) ∈ closure ⇔ apex_x < apex_y ∧ b_x ≤ a_y`.
pub fn triangle_representation(
    r: &Relation,
    partner: PartnerClass,
    limits: &Limits,
) -> Result<GeometricRep, Error> {
    let d = match partner {
        PartnerClass::IntervalOrder => linear_interval_decompose(r, limits)?,
        PartnerClass::Semiorder => linear_semiorder_decompose(r, limits)?,
    };
    let base = match partner {
        PartnerClass::IntervalOrder => interval_representation(&d.partner)?,
        PartnerClass::Semiorder => unit_interval_representation(&d.partner)?,
    };
    let n = r.len();
    let apexes: Vec<Rational64> = (0..n)
        .map(|x| rat((0..n).filter(|&y| d.linear_part.contains(y, x)).count() as i64))
        .collect();
    let c = r.transitive_closure();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let left_of = apexes[x] < apexes[y] && base.intervals[x][0].1 <= base.intervals[y][0].0;
            if c.contains(x, y) != left_of {
                return Err(Error::InternalOperatorFailure(
                    "triangle representation biconditional failed".into(),
                ));
            }
        }
    }
    Ok(GeometricRep {
        kind: match partner {
            PartnerClass::IntervalOrder => RepKind::Triangle,
            PartnerClass::Semiorder => RepKind::UnitTriangle,
        },
        elements: r.elements().to_vec(),
        apexes: Some(apexes),
        intervals: base.intervals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    Strict,
    Componentwise,
}

fn tuple_ground_set(family: &[Relation], limits: &Limits) -> Result<Vec<Vec<usize>>, Error> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut size: usize = 1;
    for r in family {
        size = size.saturating_mul(r.len().max(1));
        if size > limits.tuple_cap {
            return Err(Error::SizeLimit {
                what: "tuple ground set",
                value: size,
                cap: limits.tuple_cap,
            });
        }
    }
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for r in family {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..r.len()).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    Ok(tuples)
}

fn tuple_label(family: &[Relation], t: &[usize]) -> String {
    let parts: Vec<&str> = t.iter().enumerate().map(|(i, &e)| family[i].label(e)).collect();
    format!("({})", parts.join(","))
}

/// Direct product on the tuple ground set. Strict mode relates tuples when
/// every coordinate strictly rises in the asymmetric part `P(Rᵢ)`;
/// componentwise mode uses `rc(P(Rᵢ))`, so coordinates may tie.
pub fn product_relation(
    family: &[Relation],
    mode: ProductMode,
    limits: &Limits,
) -> Result<Relation, Error> {
    let tuples = tuple_ground_set(family, limits)?;
    let coords: Vec<Relation> = family
        .iter()
        .map(|r| match mode {
            ProductMode::Strict => r.asymmetric_part(),
            ProductMode::Componentwise => r.asymmetric_part().reflexive_closure(),
        })
        .collect();
    let labels: Vec<String> = tuples.iter().map(|t| tuple_label(family, t)).collect();
    let mut pairs = Vec::new();
    for (ti, t) in tuples.iter().enumerate() {
        for (ui, u) in tuples.iter().enumerate() {
            if t.iter()
                .zip(u)
                .enumerate()
                .all(|(i, (&a, &b))| coords[i].contains(a, b))
            {
                pairs.push((ti, ui));
            }
        }
    }
    Relation::new(labels, &pairs)
}

/// The tie-break linearization of a family of strict linear orders: tuples
/// `x, y` are related when `xᵢ <ᵢ yᵢ`, or `x = y`, or `xᵢ = yᵢ` and
/// `y_γ <_γ x_γ` at the least differing coordinate `γ`. The output is a
/// linear order extending the strict product, checked before return.
pub fn product_linearization(
    family: &[Relation],
    index: usize,
    limits: &Limits,
) -> Result<Relation, Error> {
    for (i, r) in family.iter().enumerate() {
        if !classify(r).strict_linear_order {
            return Err(Error::MemberNotLinear { index: i });
        }
    }
    if index >= family.len() {
        return Err(Error::MemberNotLinear { index });
    }
    let tuples = tuple_ground_set(family, limits)?;
    let labels: Vec<String> = tuples.iter().map(|t| tuple_label(family, t)).collect();
    let mut pairs = Vec::new();
    for (ti, t) in tuples.iter().enumerate() {
        for (ui, u) in tuples.iter().enumerate() {
            let related = if family[index].contains(t[index], u[index]) {
                true
            } else if t[index] != u[index] {
                false
            } else {
                match t.iter().zip(u).position(|(&a, &b)| a != b) {
                    None => true,
                    Some(g) => family[g].contains(u[g], t[g]),
                }
            };
            if related {
                pairs.push((ti, ui));
            }
        }
    }
    let out = Relation::new(labels, &pairs)?;
    // Direct flag checks; full classification would scan for forbidden
    // quadruples, which is needless at tuple-space size.
    let linear_order =
        out.is_reflexive() && out.is_transitive() && out.is_antisymmetric() && out.is_total();
    if !linear_order {
        return Err(Error::InternalOperatorFailure(
            "tie-break linearization is not a linear order".into(),
        ));
    }
    let strict_product = product_relation(family, ProductMode::Strict, limits)?;
    if !crate::relation::is_extension(&strict_product, &out)? {
        return Err(Error::InternalOperatorFailure(
            "tie-break linearization does not extend the strict product".into(),
        ));
    }
    Ok(out)
}

/// Box model from an interval-order realizer of `transitive_closure(r)`:
/// coordinate `i` of every box is the element's interval in the
/// representation of member `i`. Verified:
/// `(x,y) ∈ closure ⇔ bᵢₓ ≤ aᵢᵧ for all i`.
pub fn box_embedding(r: &Relation, realizer: &Realizer, limits: &Limits) -> Result<GeometricRep, Error> {
    if let Some(w) = r.cycle_witness() {
        return Err(Error::CyclicInput(w));
    }
    let c = r.transitive_closure();
    if let Some(defect) =
        verify_realizer(&c, &realizer.members, MemberClass::IntervalOrder, limits)?
    {
        return Err(Error::RealizerInvalid {
            detail: defect.to_string(),
        });
    }
    let reps: Vec<GeometricRep> = realizer
        .members
        .iter()
        .map(interval_representation)
        .collect::<Result<_, _>>()?;
    let n = c.len();
    let intervals: Vec<Vec<(Rational64, Rational64)>> = (0..n)
        .map(|x| reps.iter().map(|rep| rep.intervals[x][0]).collect())
        .collect();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let dominated = (0..reps.len()).all(|i| intervals[x][i].1 <= intervals[y][i].0);
            if c.contains(x, y) != dominated {
                return Err(Error::InternalOperatorFailure(
                    "box embedding biconditional failed".into(),
                ));
            }
        }
    }
    Ok(GeometricRep {
        kind: RepKind::Box,
        elements: c.elements().to_vec(),
        apexes: None,
        intervals,
    })
}

/// Endpoint tie-break linearization of a box embedding's coordinate `i`:
/// elements ordered by `(aᵢ, bᵢ)` lexicographically, ties broken by the
/// first coordinate with differing endpoints (reversed), then by element
/// order. Test-support for the box-embedding verification; always a linear
/// order containing the strict box dominance.
#[cfg(test)]
pub(crate) fn endpoint_linearization(boxes: &GeometricRep, index: usize) -> Relation {
    let n = boxes.elements.len();
    let key = |x: usize, i: usize| boxes.intervals[x][i];
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let related = if key(x, index) < key(y, index) {
                true
            } else if key(x, index) != key(y, index) {
                false
            } else {
                match (0..boxes.intervals[x].len()).find(|&i| key(x, i) != key(y, i)) {
                    Some(g) => key(y, g) < key(x, g),
                    None => x <= y,
                }
            };
            if related {
                pairs.push((x, y));
            }
        }
    }
    Relation::new(boxes.elements.clone(), &pairs).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::realizer;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn interval_representation_of_chain() {
        let chain = Relation::on_indexed(3, &[(0, 1), (1, 2), (0, 2)]);
        let rep = interval_representation(&chain).unwrap();
        let expect: Vec<Vec<(Rational64, Rational64)>> = vec![
            vec![(rat(0), rat(1))],
            vec![(rat(1), rat(2))],
            vec![(rat(2), rat(3))],
        ];
        assert_eq!(rep.intervals, expect);
    }

    #[test]
    fn interval_representation_of_antichain() {
        let r = Relation::on_indexed(2, &[]);
        let rep = interval_representation(&r).unwrap();
        assert_eq!(rep.intervals[0], vec![(rat(0), rat(1))]);
        assert_eq!(rep.intervals[1], vec![(rat(0), rat(1))]);
    }

    #[test]
    fn interval_representation_rejects_two_plus_two() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3)]);
        let err = interval_representation(&r).unwrap_err();
        let Error::NotIntervalOrder(w) = err else { panic!() };
        assert_eq!(w.kind, WitnessKind::TwoPlusTwo);
        assert!(w.verify(&r));
    }

    #[test]
    fn interval_representation_rejects_non_transitive_with_witness() {
        let r = Relation::on_indexed(3, &[(0, 1), (1, 2)]);
        let err = interval_representation(&r).unwrap_err();
        let Error::NotIntervalOrder(w) = err else { panic!() };
        assert!(w.verify(&r));
    }

    #[test]
    fn unit_interval_representation_of_chain() {
        let chain = Relation::on_indexed(2, &[(0, 1)]);
        let rep = unit_interval_representation(&chain).unwrap();
        assert_eq!(rep.intervals[0][0], (rat(0), rat(1)));
        assert_eq!(rep.intervals[1][0], (rat(1), rat(2)));
    }

    #[test]
    fn unit_interval_representation_rejects_three_plus_one() {
        let r = Relation::on_indexed(4, &[(0, 1), (1, 2), (0, 2)]);
        let err = unit_interval_representation(&r).unwrap_err();
        let Error::NotSemiorder(w) = err else { panic!() };
        assert_eq!(w.kind, WitnessKind::ThreePlusOne);
        assert!(w.verify(&r));
    }

    #[test]
    fn triangle_representation_of_linear_order() {
        let chain = Relation::on_indexed(3, &[(0, 1), (1, 2), (0, 2)]);
        let rep = triangle_representation(&chain, PartnerClass::IntervalOrder, &limits()).unwrap();
        assert_eq!(rep.apexes, Some(vec![rat(0), rat(1), rat(2)]));
        assert_eq!(
            rep.intervals,
            vec![
                vec![(rat(0), rat(1))],
                vec![(rat(1), rat(2))],
                vec![(rat(2), rat(3))],
            ]
        );
    }

    #[test]
    fn triangle_representation_of_two_plus_two() {
        let labels: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let r = Relation::new(labels, &[(0, 1), (2, 3)]).unwrap();
        for (partner, kind) in [
            (PartnerClass::IntervalOrder, RepKind::Triangle),
            (PartnerClass::Semiorder, RepKind::UnitTriangle),
        ] {
            let rep = triangle_representation(&r, partner, &limits()).unwrap();
            assert_eq!(rep.kind, kind);
            assert!(rep.apexes.is_some());
        }
    }

    #[test]
    fn triangle_representation_rejects_cycles() {
        let cyc = Relation::on_indexed(2, &[(0, 1), (1, 0)]);
        assert!(matches!(
            triangle_representation(&cyc, PartnerClass::IntervalOrder, &limits()),
            Err(Error::CyclicInput(_))
        ));
    }

    #[test]
    fn strict_product_of_two_chains() {
        let chain = Relation::on_indexed(2, &[(0, 1)]);
        let p = product_relation(&[chain.clone(), chain.clone()], ProductMode::Strict, &limits())
            .unwrap();
        assert_eq!(p.pair_count(), 1);
        let lo = p.index_of("(x1,x1)").unwrap();
        let hi = p.index_of("(x2,x2)").unwrap();
        assert!(p.contains(lo, hi));
    }

    #[test]
    fn componentwise_product_of_two_chains() {
        let chain = Relation::on_indexed(2, &[(0, 1)]);
        let p = product_relation(
            &[chain.clone(), chain.clone()],
            ProductMode::Componentwise,
            &limits(),
        )
        .unwrap();
        // The 2-cube order: reflexive (4) + covers (4) + diagonal of the
        // square (1).
        assert_eq!(p.pair_count(), 9);
        assert!(classify(&p).partial_order);
    }

    #[test]
    fn empty_family_rejected() {
        assert!(matches!(
            product_relation(&[], ProductMode::Strict, &limits()),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    fn product_linearization_tie_break() {
        let up = Relation::on_indexed(2, &[(0, 1)]);
        let down = Relation::on_indexed(2, &[(1, 0)]);
        let lin = product_linearization(&[up, down], 0, &limits()).unwrap();
        // Coordinates agree at index 0, so the first differing coordinate
        // (index 1) breaks the tie reversed: x2 below x1 there.
        let t = lin.index_of("(x1,x1)").unwrap();
        let u = lin.index_of("(x1,x2)").unwrap();
        assert!(lin.contains(t, u));
        assert!(!lin.contains(u, t));
        assert!(classify(&lin).linear_order);
    }

    #[test]
    fn product_linearization_rejects_non_linear_member() {
        let anti = Relation::on_indexed(2, &[]);
        assert!(matches!(
            product_linearization(&[anti], 0, &limits()),
            Err(Error::MemberNotLinear { index: 0 })
        ));
    }

    #[test]
    fn box_embedding_single_member() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3), (0, 3)]);
        let real = Realizer {
            target: r.clone(),
            members: vec![r.clone()],
            member_class: MemberClass::IntervalOrder,
            member_tags: vec![false],
            decompositions: vec![None],
        };
        let boxes = box_embedding(&r, &real, &limits()).unwrap();
        assert_eq!(boxes.intervals, interval_representation(&r).unwrap().intervals);
    }

    #[test]
    fn box_embedding_of_two_plus_two() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3)]);
        let real = realizer(&r, MemberClass::IntervalOrder, &limits()).unwrap();
        let boxes = box_embedding(&r, &real, &limits()).unwrap();
        assert_eq!(boxes.intervals[0].len(), real.members.len());

        for i in 0..real.members.len() {
            let lin = endpoint_linearization(&boxes, i);
            assert!(classify(&lin).linear_order);
        }
    }

    #[test]
    fn box_embedding_rejects_tampered_realizer() {
        let r = Relation::on_indexed(4, &[(0, 1), (2, 3)]);
        let mut real = realizer(&r, MemberClass::IntervalOrder, &limits()).unwrap();
        // Delete one pair from the first member.
        let m = &real.members[0];
        let (i, j) = m.pairs().next().unwrap();
        let mut rows: Vec<u64> = (0..m.len()).map(|u| m.row(u)).collect();
        rows[i] &= !(1u64 << j);
        real.members[0] = m.with_rows(rows);
        assert!(matches!(
            box_embedding(&r, &real, &limits()),
            Err(Error::RealizerInvalid { .. })
        ));
    }
}
