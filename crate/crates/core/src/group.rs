//! Finite Galois groups given by multiplication table, their coset spaces,
//! and disjoint unions of coset spaces (embedding sets of CM-algebras).
//!
//! Everything here uses left cosets and left actions: a group element `t`
//! sends the coset `gH` to `(tg)H`. Complex conjugation is the distinguished
//! central involution `iota` of the group; on a coset space it acts by left
//! translation and is fixed-point-free exactly when `iota` is not in `H`.

use std::sync::Arc;

use thiserror::Error;

use crate::points::{PointSet, MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be between 1 and {MAX_POINTS}, got {0}")]
    BadOrder(usize),
    #[error("multiplication table shape: {0}")]
    BadShape(String),
    #[error("not a group: {0}")]
    NotAGroup(AxiomFailure),
    #[error("bad involution {iota}: {reason}")]
    BadInvolution { iota: usize, reason: InvolutionDefect },
    #[error("element {element} out of range for group of order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("iota {iota} lies in the subgroup, so conjugation would fix an embedding")]
    IotaInSubgroup { iota: usize },
    #[error("embedding set has {0} points, more than the supported {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("embedding set needs at least one factor")]
    NoFactors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomFailure {
    /// `(a*b)*c != a*(b*c)`
    Associativity(usize, usize, usize),
    NoIdentity,
    NoInverse(usize),
}

impl std::fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AxiomFailure::Associativity(a, b, c) => {
                write!(f, "associativity fails at ({a}, {b}, {c})")
            }
            AxiomFailure::NoIdentity => write!(f, "no two-sided identity"),
            AxiomFailure::NoInverse(g) => write!(f, "element {g} has no inverse"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionDefect {
    OutOfRange,
    IsIdentity,
    NotOrderTwo,
    NotCentral { witness: usize },
}

impl std::fmt::Display for InvolutionDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InvolutionDefect::OutOfRange => write!(f, "index out of range"),
            InvolutionDefect::IsIdentity => write!(f, "equals the identity"),
            InvolutionDefect::NotOrderTwo => write!(f, "does not square to the identity"),
            InvolutionDefect::NotCentral { witness } => {
                write!(f, "does not commute with {witness}")
            }
        }
    }
}

/// A validated finite group with a central involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mult: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    iota: usize,
}

/// Validates a multiplication table and derives identity and inverses.
///
/// Associativity is checked by the direct triple loop.
pub fn build_group(
    order: usize,
    table: &[Vec<usize>],
    iota: usize,
) -> Result<GroupTable, GroupError> {
    if order == 0 || order > MAX_POINTS {
        return Err(GroupError::BadOrder(order));
    }
    if table.len() != order {
        return Err(GroupError::BadShape(format!(
            "expected {order} rows, got {}",
            table.len()
        )));
    }
    let mut mult = Vec::with_capacity(order * order);
    for (r, row) in table.iter().enumerate() {
        if row.len() != order {
            return Err(GroupError::BadShape(format!(
                "row {r} has {} entries, expected {order}",
                row.len()
            )));
        }
        for &v in row {
            if v >= order {
                return Err(GroupError::ElementOutOfRange { element: v, order });
            }
            mult.push(v);
        }
    }
    let at = |a: usize, b: usize| mult[a * order + b];

    let identity = (0..order)
        .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
        .ok_or(GroupError::NotAGroup(AxiomFailure::NoIdentity))?;

    let mut inverse = Vec::with_capacity(order);
    for g in 0..order {
        let h = (0..order)
            .find(|&h| at(g, h) == identity && at(h, g) == identity)
            .ok_or(GroupError::NotAGroup(AxiomFailure::NoInverse(g)))?;
        inverse.push(h);
    }

    for a in 0..order {
        for b in 0..order {
            let ab = at(a, b);
            for c in 0..order {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAGroup(AxiomFailure::Associativity(a, b, c)));
                }
            }
        }
    }

    let group = GroupTable {
        order,
        mult,
        identity,
        inverse,
        iota,
    };
    group.check_involution(iota)?;
    Ok(group)
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Complex conjugation.
    pub fn iota(&self) -> usize {
        self.iota
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The table as a list of rows.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_central(&self, g: usize) -> bool {
        self.elements().all(|h| self.mul(g, h) == self.mul(h, g))
    }

    fn check_involution(&self, iota: usize) -> Result<(), GroupError> {
        let bad = |reason| Err(GroupError::BadInvolution { iota, reason });
        if iota >= self.order {
            return bad(InvolutionDefect::OutOfRange);
        }
        if iota == self.identity {
            return bad(InvolutionDefect::IsIdentity);
        }
        if self.mul(iota, iota) != self.identity {
            return bad(InvolutionDefect::NotOrderTwo);
        }
        if let Some(witness) = self
            .elements()
            .find(|&g| self.mul(iota, g) != self.mul(g, iota))
        {
            return bad(InvolutionDefect::NotCentral { witness });
        }
        Ok(())
    }

    /// Every element that could serve as complex conjugation.
    pub fn central_involutions(&self) -> Vec<usize> {
        self.elements()
            .filter(|&g| {
                g != self.identity && self.mul(g, g) == self.identity && self.is_central(g)
            })
            .collect()
    }

    /// The same group with a different choice of conjugation.
    pub fn with_iota(&self, iota: usize) -> Result<GroupTable, GroupError> {
        self.check_involution(iota)?;
        Ok(GroupTable { iota, ..self.clone() })
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = PointSet::singleton(self.identity);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members.contains(y) {
                    members = members.with(y);
                    frontier.push(y);
                }
            }
        }
        members.to_vec()
    }

    /// All subgroups, each as a sorted element list, in increasing mask order.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let cyclic: Vec<PointSet> = self
            .elements()
            .map(|g| PointSet::from_indices(self.generated_subgroup(&[g])))
            .collect();
        let mut found = vec![PointSet::singleton(self.identity)];
        let mut idx = 0;
        while idx < found.len() {
            let h = found[idx];
            for c in &cyclic {
                let gens: Vec<usize> = h.union(*c).to_vec();
                let joined = PointSet::from_indices(self.generated_subgroup(&gens));
                if !found.contains(&joined) {
                    found.push(joined);
                }
            }
            idx += 1;
        }
        found.sort();
        found.into_iter().map(PointSet::to_vec).collect()
    }
}

/// Left cosets of a subgroup not containing `iota`, with the induced
/// left action and conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    parent: Arc<GroupTable>,
    subgroup: Vec<usize>,
    points: Vec<Vec<usize>>,
    /// `action[t * m + s]`
    action: Vec<usize>,
    conj: Vec<usize>,
}

pub fn coset_space(group: &Arc<GroupTable>, subgroup: &[usize]) -> Result<CosetSpace, GroupError> {
    let n = group.order();
    for &h in subgroup {
        if h >= n {
            return Err(GroupError::ElementOutOfRange { element: h, order: n });
        }
    }
    let members = PointSet::from_indices(subgroup.iter().copied());
    if !members.contains(group.identity()) {
        return Err(GroupError::NotASubgroup(format!(
            "identity {} missing",
            group.identity()
        )));
    }
    for a in members.iter() {
        if !members.contains(group.inverse(a)) {
            return Err(GroupError::NotASubgroup(format!(
                "inverse of {a} missing"
            )));
        }
        for b in members.iter() {
            if !members.contains(group.mul(a, b)) {
                return Err(GroupError::NotASubgroup(format!(
                    "not closed: {a} * {b} = {}",
                    group.mul(a, b)
                )));
            }
        }
    }
    if members.contains(group.iota()) {
        return Err(GroupError::IotaInSubgroup { iota: group.iota() });
    }

    // Scanning g in increasing order, the first unassigned g is the least
    // element of its coset, so points come out ordered by minimal representative.
    let mut coset_of = vec![usize::MAX; n];
    let mut points = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = members.iter().map(|h| group.mul(g, h)).collect();
        coset.sort_unstable();
        for &x in &coset {
            coset_of[x] = points.len();
        }
        points.push(coset);
    }

    let m = points.len();
    let mut action = vec![0; n * m];
    for t in 0..n {
        for (s, coset) in points.iter().enumerate() {
            action[t * m + s] = coset_of[group.mul(t, coset[0])];
        }
    }
    let iota = group.iota();
    let conj = (0..m).map(|s| action[iota * m + s]).collect();

    Ok(CosetSpace {
        parent: Arc::clone(group),
        subgroup: members.to_vec(),
        points,
        action,
        conj,
    })
}

impl CosetSpace {
    pub fn group(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn act(&self, t: usize, s: usize) -> usize {
        self.action[t * self.points.len() + s]
    }

    pub fn conj(&self, s: usize) -> usize {
        self.conj[s]
    }
}

/// Disjoint union of coset spaces: the embeddings of a CM-algebra
/// `E = E_1 x ... x E_k` into the Galois closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSet {
    parent: Arc<GroupTable>,
    factors: Vec<CosetSpace>,
    offsets: Vec<usize>,
    size: usize,
    action: Vec<usize>,
    conj: Vec<usize>,
    factor_of: Vec<usize>,
}

pub fn embedding_set(
    group: &Arc<GroupTable>,
    subgroups: &[Vec<usize>],
) -> Result<EmbeddingSet, GroupError> {
    if subgroups.is_empty() {
        return Err(GroupError::NoFactors);
    }
    let factors = subgroups
        .iter()
        .map(|h| coset_space(group, h))
        .collect::<Result<Vec<_>, _>>()?;
    let size: usize = factors.iter().map(CosetSpace::len).sum();
    if size > MAX_POINTS {
        return Err(GroupError::TooManyPoints(size));
    }

    let mut offsets = Vec::with_capacity(factors.len());
    let mut factor_of = Vec::with_capacity(size);
    let mut acc = 0;
    for (i, f) in factors.iter().enumerate() {
        offsets.push(acc);
        factor_of.extend(std::iter::repeat(i).take(f.len()));
        acc += f.len();
    }

    let n = group.order();
    let mut action = vec![0; n * size];
    let mut conj = vec![0; size];
    for (f, &off) in factors.iter().zip(&offsets) {
        for s in 0..f.len() {
            for t in 0..n {
                action[t * size + off + s] = off + f.act(t, s);
            }
            conj[off + s] = off + f.conj(s);
        }
    }

    Ok(EmbeddingSet {
        parent: Arc::clone(group),
        factors,
        offsets,
        size,
        action,
        conj,
        factor_of,
    })
}

impl EmbeddingSet {
    pub fn group(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn factors(&self) -> &[CosetSpace] {
        &self.factors
    }

    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(|f| f.subgroup().to_vec()).collect()
    }

    /// Number of points `m`.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn half(&self) -> usize {
        self.size / 2
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.size)
    }

    pub fn offset(&self, factor: usize) -> usize {
        self.offsets[factor]
    }

    pub fn factor_of(&self, s: usize) -> usize {
        self.factor_of[s]
    }

    /// `t∘s`
    #[inline]
    pub fn act(&self, t: usize, s: usize) -> usize {
        self.action[t * self.size + s]
    }

    /// The permutation of points induced by `t`.
    pub fn action_row(&self, t: usize) -> &[usize] {
        &self.action[t * self.size..(t + 1) * self.size]
    }

    pub fn conj(&self, s: usize) -> usize {
        self.conj[s]
    }

    /// Elementwise image `t∘X`. This is the one translation used for both
    /// CM-types and monomials.
    pub fn translate(&self, t: usize, set: PointSet) -> PointSet {
        set.map_through(self.action_row(t))
    }

    pub fn conjugate(&self, set: PointSet) -> PointSet {
        set.map_through(&self.conj)
    }

    /// Conjugate pairs `(s, conj s)` with `s < conj s`, sorted by `s`.
    pub fn conjugate_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .filter(|&s| s < self.conj[s])
            .map(|s| (s, self.conj[s]))
            .collect()
    }
}
