//! Finite binary relations and the basic closure/part operators.
//!
//! A [`Relation`] is a value: an ordered ground set of distinct labels plus a
//! set of ordered index pairs, stored as one bit row per source element. The
//! ground-set sequence order is the deterministic tie-break order used by
//! every search in the crate. All operations are pure; nothing mutates its
//! arguments.

use std::fmt;

use serde::Serialize;

use crate::error::Error;

/// A binary relation over a finite, ordered ground set of labeled elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    elements: Vec<String>,
    rows: Vec<u64>,
}

impl Relation {
    /// Builds a relation from labels and index pairs. Labels must be
    /// pairwise distinct and pair indices in bounds.
    pub fn new(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, Error> {
        if elements.len() > 64 {
            return Err(Error::SizeLimit {
                what: "ground set",
                value: elements.len(),
                cap: 64,
            });
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(Error::DuplicateElement { label: e.clone() });
            }
        }
        let n = elements.len();
        let mut rows = vec![0u64; n];
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::PairOutOfBounds {
                    index: i.max(j),
                    n,
                });
            }
            rows[i] |= 1 << j;
        }
        Ok(Self { elements, rows })
    }

    /// Empty relation on the given labels.
    pub fn empty(elements: Vec<String>) -> Result<Self, Error> {
        Self::new(elements, &[])
    }

    /// Test helper: relation on `x1..xn` with the given index pairs.
    pub fn on_indexed(n: usize, pairs: &[(usize, usize)]) -> Self {
        let labels = (1..=n).map(|i| format!("x{i}")).collect();
        Self::new(labels, pairs).expect("valid indexed relation")
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    /// Number of elements in the ground set.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// All pairs in row-major (element-sequence) order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| self.contains(i, j)).map(move |j| (i, j)))
    }

    pub fn pair_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn same_ground_set(&self, other: &Relation) -> bool {
        self.elements == other.elements
    }

    /// Copy with one extra pair.
    pub fn with_pair(&self, i: usize, j: usize) -> Relation {
        let mut out = self.clone();
        out.rows[i] |= 1 << j;
        out
    }

    /// Copy built from raw bit rows over the same ground set.
    pub fn with_rows(&self, rows: Vec<u64>) -> Relation {
        debug_assert_eq!(rows.len(), self.len());
        Relation {
            elements: self.elements.clone(),
            rows,
        }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, Error> {
        if !self.same_ground_set(other) {
            return Err(Error::GroundSetMismatch);
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a | b)
            .collect();
        Ok(self.with_rows(rows))
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation, Error> {
        if !self.same_ground_set(other) {
            return Err(Error::GroundSetMismatch);
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a & b)
            .collect();
        Ok(self.with_rows(rows))
    }

    pub fn is_subset_of(&self, other: &Relation) -> Result<bool, Error> {
        if !self.same_ground_set(other) {
            return Err(Error::GroundSetMismatch);
        }
        Ok(self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0))
    }

    pub fn without_diagonal(&self) -> Relation {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r & !(1u64 << i))
            .collect();
        self.with_rows(rows)
    }

    /// Smallest transitive superset, by Warshall-style row-OR propagation.
    pub fn transitive_closure(&self) -> Relation {
        let n = self.len();
        let mut rows = self.rows.clone();
        for k in 0..n {
            let row_k = rows[k];
            for row in rows.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= row_k;
                }
            }
        }
        self.with_rows(rows)
    }

    /// `r ∪ Δ`.
    pub fn reflexive_closure(&self) -> Relation {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r | 1u64 << i)
            .collect();
        self.with_rows(rows)
    }

    /// Pairs whose reverse is absent; always asymmetric.
    pub fn asymmetric_part(&self) -> Relation {
        let n = self.len();
        let mut rows = self.rows.clone();
        for i in 0..n {
            for j in 0..n {
                if self.contains(i, j) && self.contains(j, i) {
                    rows[i] &= !(1u64 << j);
                }
            }
        }
        self.with_rows(rows)
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive_closure() == *self
    }

    pub fn is_irreflexive(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r >> i & 1 == 0)
    }

    pub fn is_reflexive(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r >> i & 1 == 1)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || !(self.contains(i, j) && self.contains(j, i))))
    }

    pub fn is_asymmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| !(self.contains(i, j) && self.contains(j, i))))
    }

    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.contains(i, j) || self.contains(j, i)))
    }

    /// True iff the transitive closure is irreflexive.
    pub fn is_acyclic(&self) -> bool {
        self.transitive_closure().is_irreflexive()
    }

    /// A minimal closed walk through the first element lying on a cycle,
    /// found by BFS, or `None` when the relation is acyclic.
    pub fn cycle_witness(&self) -> Option<Witness> {
        let closure = self.transitive_closure();
        let start = (0..self.len()).find(|&i| closure.contains(i, i))?;
        if self.contains(start, start) {
            let l = self.elements[start].clone();
            return Some(Witness {
                kind: WitnessKind::Cycle,
                members: vec![l.clone(), l],
            });
        }
        // BFS from start back to start.
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for j in 0..n {
            if self.contains(start, j) && parent[j] == usize::MAX {
                parent[j] = start;
                queue.push_back(j);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == start {
                break;
            }
            for j in 0..n {
                if self.contains(u, j) && parent[j] == usize::MAX {
                    parent[j] = u;
                    queue.push_back(j);
                }
            }
        }
        // Walk parents back from start.
        let mut path = vec![start];
        let mut cur = parent[start];
        while cur != start {
            path.push(cur);
            cur = parent[cur];
        }
        path.push(start);
        path.reverse();
        Some(Witness {
            kind: WitnessKind::Cycle,
            members: path.iter().map(|&i| self.elements[i].clone()).collect(),
        })
    }

    /// True iff no two distinct elements are related both ways in the
    /// transitive closure.
    pub fn is_transitively_antisymmetric(&self) -> bool {
        self.symmetric_pair_witness().is_none()
    }

    pub fn symmetric_pair_witness(&self) -> Option<Witness> {
        let closure = self.transitive_closure();
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && closure.contains(i, j) && closure.contains(j, i) {
                    return Some(Witness {
                        kind: WitnessKind::SymmetricPair,
                        members: vec![self.elements[i].clone(), self.elements[j].clone()],
                    });
                }
            }
        }
        None
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (i, j) in self.pairs() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "({}, {})", self.elements[i], self.elements[j])?;
        }
        write!(f, "}}")
    }
}

/// True iff `base ⊆ cand` and `P(base) ⊆ P(cand)`.
pub fn is_extension(base: &Relation, cand: &Relation) -> Result<bool, Error> {
    if !base.same_ground_set(cand) {
        return Err(Error::GroundSetMismatch);
    }
    Ok(base.is_subset_of(cand)?
        && base
            .asymmetric_part()
            .is_subset_of(&cand.asymmetric_part())?)
}

/// A certified forbidden pattern. Witnesses are certificates, never hints:
/// [`Witness::verify`] re-checks the defining conditions against the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub kind: WitnessKind,
    /// Element labels in the role order of the corresponding definition.
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A closed walk of pairs all in the source relation.
    Cycle,
    /// `(x, y, a, b)` with `(x,a) ∈ r`, `(b,y) ∈ r`, `(b,a) ∉ r̄`, `(x,y) ∉ r`.
    TwoPlusTwo,
    /// `(x, y, z, w)` with `(x,y) ∈ r`, `(y,z) ∈ r`, `(x,w) ∉ r`, `(w,z) ∉ r`.
    ThreePlusOne,
    /// Distinct `(x, y)` related both ways in the transitive closure.
    SymmetricPair,
}

impl Witness {
    pub fn verify(&self, source: &Relation) -> bool {
        let idx: Option<Vec<usize>> = self
            .members
            .iter()
            .map(|l| source.index_of(l))
            .collect();
        let Some(idx) = idx else { return false };
        match self.kind {
            WitnessKind::Cycle => {
                idx.len() >= 2
                    && idx.first() == idx.last()
                    && idx.windows(2).all(|w| source.contains(w[0], w[1]))
            }
            WitnessKind::SymmetricPair => {
                let [x, y] = idx[..] else { return false };
                let closure = source.transitive_closure();
                x != y && closure.contains(x, y) && closure.contains(y, x)
            }
            WitnessKind::TwoPlusTwo => {
                let [x, y, a, b] = idx[..] else { return false };
                let closure = source.transitive_closure();
                source.contains(x, a)
                    && source.contains(b, y)
                    && !closure.contains(b, a)
                    && !source.contains(x, y)
            }
            WitnessKind::ThreePlusOne => {
                let [x, y, z, w] = idx[..] else { return false };
                w != x
                    && w != y
                    && w != z
                    && source.contains(x, y)
                    && source.contains(y, z)
                    && !source.contains(x, w)
                    && !source.contains(w, z)
            }
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            WitnessKind::Cycle => "cycle",
            WitnessKind::TwoPlusTwo => "2+2",
            WitnessKind::ThreePlusOne => "3+1",
            WitnessKind::SymmetricPair => "symmetric pair",
        };
        write!(f, "{kind} [{}]", self.members.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitive_closure_composes() {
        let r = Relation::on_indexed(3, &[(0, 1), (1, 2)]);
        let expected = Relation::on_indexed(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(r.transitive_closure(), expected);
    }

    #[test]
    fn transitive_closure_of_empty_is_empty() {
        let r = Relation::on_indexed(2, &[]);
        assert_eq!(r.transitive_closure(), r);
    }

    #[test]
    fn transitive_closure_of_two_cycle_is_full() {
        let r = Relation::on_indexed(2, &[(0, 1), (1, 0)]);
        let expected = Relation::on_indexed(2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(r.transitive_closure(), expected);
    }

    #[test]
    fn reflexive_closure_examples() {
        let empty = Relation::on_indexed(2, &[]);
        assert_eq!(
            empty.reflexive_closure(),
            Relation::on_indexed(2, &[(0, 0), (1, 1)])
        );
        let r = Relation::on_indexed(2, &[(0, 1)]);
        assert_eq!(
            r.reflexive_closure(),
            Relation::on_indexed(2, &[(0, 0), (1, 1), (0, 1)])
        );
        let diag = Relation::on_indexed(2, &[(0, 0), (1, 1)]);
        assert_eq!(diag.reflexive_closure(), diag);
    }

    #[test]
    fn asymmetric_part_examples() {
        let r = Relation::on_indexed(3, &[(0, 1), (1, 0), (0, 2)]);
        assert_eq!(r.asymmetric_part(), Relation::on_indexed(3, &[(0, 2)]));
        let r = Relation::on_indexed(2, &[(0, 0), (0, 1)]);
        assert_eq!(r.asymmetric_part(), Relation::on_indexed(2, &[(0, 1)]));
        let empty = Relation::on_indexed(2, &[]);
        assert_eq!(empty.asymmetric_part(), empty);
    }

    #[test]
    fn acyclicity_and_cycle_witnesses() {
        let chain = Relation::on_indexed(3, &[(0, 1), (1, 2)]);
        assert!(chain.is_acyclic());
        assert!(chain.cycle_witness().is_none());

        let two_cycle = Relation::on_indexed(2, &[(0, 1), (1, 0)]);
        assert!(!two_cycle.is_acyclic());
        let w = two_cycle.cycle_witness().unwrap();
        assert_eq!(w.members, ["x1", "x2", "x1"]);
        assert!(w.verify(&two_cycle));

        let loop_r = Relation::on_indexed(1, &[(0, 0)]);
        let w = loop_r.cycle_witness().unwrap();
        assert_eq!(w.members, ["x1", "x1"]);
        assert!(w.verify(&loop_r));
    }

    #[test]
    fn transitive_antisymmetry() {
        let with_loop = Relation::on_indexed(2, &[(0, 0), (0, 1)]);
        assert!(with_loop.is_transitively_antisymmetric());

        let sym = Relation::on_indexed(2, &[(0, 1), (1, 0)]);
        let w = sym.symmetric_pair_witness().unwrap();
        assert_eq!(w.members, ["x1", "x2"]);
        assert!(w.verify(&sym));

        let three_cycle = Relation::on_indexed(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(!three_cycle.is_transitively_antisymmetric());
    }

    #[test]
    fn extension_examples() {
        let base = Relation::on_indexed(4, &[(0, 1), (2, 3)]);
        let cand = Relation::on_indexed(4, &[(0, 1), (2, 3), (0, 3)]);
        assert!(is_extension(&base, &cand).unwrap());
        assert!(is_extension(&base, &base).unwrap());

        let bad = Relation::on_indexed(2, &[(0, 1), (1, 0)]);
        let small = Relation::on_indexed(2, &[(0, 1)]);
        assert!(!is_extension(&small, &bad).unwrap());

        let other = Relation::new(vec!["a".into(), "b".into()], &[]).unwrap();
        assert!(matches!(
            is_extension(&small, &other),
            Err(Error::GroundSetMismatch)
        ));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = Relation::new(vec!["a".into(), "a".into()], &[]);
        assert!(matches!(err, Err(Error::DuplicateElement { .. })));
    }
}
