//! Hodge monomials: the subsets `Δ ⊆ S` of size `2p` with
//! `|(t∘Δ) ∩ Φ| = p` for every Galois element `t`.
//!
//! Each such `Δ` indexes a line of Hodge classes after extending scalars to
//! the Galois closure. Products of degree-2 classes give exactly the `Δ`
//! that split into `p` disjoint valid pairs; the remaining valid `Δ` are
//! reported as exotic.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cm::CmType;
use crate::group::EmbeddingSet;
use crate::points::{binomial, k_subsets, PointSet};

/// Default bound on `C(m, 2p)` for the brute-force enumerator.
pub const DEFAULT_SUBSET_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("C({m}, {k}) = {count} subsets exceed the cap of {cap}")]
    CapExceeded {
        m: usize,
        k: usize,
        count: u128,
        cap: u128,
    },
    #[error("monomial set not closed under translation: {element} * {delta} is missing")]
    NotClosed { delta: PointSet, element: usize },
}

/// Direct test of the validity criterion, translating `Δ` by every element.
pub fn valid_delta(phi: &CmType, delta: PointSet, p: usize) -> bool {
    let carrier = phi.carrier();
    delta.len() == 2 * p
        && delta.is_subset(carrier.all())
        && carrier
            .group()
            .elements()
            .all(|t| carrier.translate(t, delta).meet_count(phi.members()) == p)
}

/// Reference enumerator: every `2p`-subset checked with [`valid_delta`].
pub fn enumerate_valid_bruteforce(
    phi: &CmType,
    p: usize,
    cap: u128,
) -> Result<Vec<PointSet>, EnumError> {
    let m = phi.carrier().len();
    let count = binomial(m, 2 * p);
    if count > cap {
        return Err(EnumError::CapExceeded {
            m,
            k: 2 * p,
            count,
            cap,
        });
    }
    Ok(k_subsets(m, 2 * p)
        .filter(|&d| valid_delta(phi, d, p))
        .collect())
}

/// Distinct translates `t∘Φ` in order of first appearance over `t`.
///
/// Since `|(t∘Δ) ∩ Φ| = |Δ ∩ (t⁻¹∘Φ)|`, a set is valid iff it meets each of
/// these in exactly `p` points.
pub fn translates(phi: &CmType) -> Vec<PointSet> {
    let carrier = phi.carrier();
    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for t in carrier.group().elements() {
        let row = carrier.translate(t, phi.members());
        if seen.insert(row) {
            rows.push(row);
        }
    }
    rows
}

/// Backtracking search over points `0..m` that keeps, per translate row,
/// the running count `|Δ ∩ row|` and prunes when a count passes `p` or can
/// no longer reach it.
struct Search<'a> {
    rows: &'a [PointSet],
    /// `rows_at[i]`: indices of rows containing point `i`.
    rows_at: Vec<Vec<usize>>,
    /// `suffix[i][r] = |rows[r] ∩ {i, .., m-1}|`
    suffix: Vec<Vec<usize>>,
    m: usize,
    p: usize,
}

#[derive(Clone)]
struct Partial {
    next: usize,
    chosen: PointSet,
    counts: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(rows: &'a [PointSet], m: usize, p: usize) -> Self {
        let rows_at = (0..m)
            .map(|i| (0..rows.len()).filter(|&r| rows[r].contains(i)).collect())
            .collect();
        let mut suffix = vec![vec![0; rows.len()]; m + 1];
        for i in (0..m).rev() {
            for r in 0..rows.len() {
                suffix[i][r] = suffix[i + 1][r] + usize::from(rows[r].contains(i));
            }
        }
        Search {
            rows,
            rows_at,
            suffix,
            m,
            p,
        }
    }

    fn root(&self) -> Partial {
        Partial {
            next: 0,
            chosen: PointSet::EMPTY,
            counts: vec![0; self.rows.len()],
        }
    }

    /// Expand `state` until `depth` points are decided, collecting frontier states.
    fn frontier(&self, state: Partial, depth: usize, out: &mut Vec<Partial>) {
        if state.next >= depth.min(self.m) || state.chosen.len() == 2 * self.p {
            out.push(state);
            return;
        }
        if let Some(inc) = self.include(&state) {
            self.frontier(inc, depth, out);
        }
        if let Some(exc) = self.exclude(&state) {
            self.frontier(exc, depth, out);
        }
    }

    fn include(&self, state: &Partial) -> Option<Partial> {
        let i = state.next;
        if self.rows_at[i].iter().any(|&r| state.counts[r] >= self.p) {
            return None;
        }
        let mut counts = state.counts.clone();
        for &r in &self.rows_at[i] {
            counts[r] += 1;
        }
        Some(Partial {
            next: i + 1,
            chosen: state.chosen.with(i),
            counts,
        })
    }

    fn exclude(&self, state: &Partial) -> Option<Partial> {
        let i = state.next;
        let need = 2 * self.p - state.chosen.len();
        if self.m - (i + 1) < need {
            return None;
        }
        if self.rows_at[i]
            .iter()
            .any(|&r| state.counts[r] + self.suffix[i + 1][r] < self.p)
        {
            return None;
        }
        Some(Partial {
            next: i + 1,
            ..state.clone()
        })
    }

    fn run(&self, state: &mut Partial, out: &mut Vec<PointSet>) {
        if state.chosen.len() == 2 * self.p {
            if state.counts.iter().all(|&c| c == self.p) {
                out.push(state.chosen);
            }
            return;
        }
        let i = state.next;
        if i == self.m || self.m - i < 2 * self.p - state.chosen.len() {
            return;
        }
        let rows_here = &self.rows_at[i];

        if rows_here.iter().all(|&r| state.counts[r] < self.p) {
            for &r in rows_here {
                state.counts[r] += 1;
            }
            let before = state.chosen;
            state.chosen = before.with(i);
            state.next = i + 1;
            self.run(state, out);
            state.chosen = before;
            for &r in rows_here {
                state.counts[r] -= 1;
            }
        }

        if rows_here
            .iter()
            .all(|&r| state.counts[r] + self.suffix[i + 1][r] >= self.p)
        {
            state.next = i + 1;
            self.run(state, out);
        }
        state.next = i;
    }
}

/// Optimized enumerator; returns the same sorted list as
/// [`enumerate_valid_bruteforce`].
pub fn enumerate_valid(phi: &CmType, p: usize) -> Vec<PointSet> {
    let m = phi.carrier().len();
    if 2 * p > m {
        return Vec::new();
    }
    let rows = translates(phi);
    let search = Search::new(&rows, m, p);
    let mut out = Vec::new();
    search.run(&mut search.root(), &mut out);
    out.sort_unstable();
    out
}

/// [`enumerate_valid`] with the search tree split on its first `split_depth`
/// decisions and the subtrees run on the current rayon pool.
pub fn enumerate_valid_parallel(phi: &CmType, p: usize, split_depth: usize) -> Vec<PointSet> {
    let m = phi.carrier().len();
    if 2 * p > m {
        return Vec::new();
    }
    let rows = translates(phi);
    let search = Search::new(&rows, m, p);
    let mut starts = Vec::new();
    search.frontier(search.root(), split_depth, &mut starts);
    let mut out: Vec<PointSet> = starts
        .into_par_iter()
        .flat_map_iter(|mut st| {
            let mut found = Vec::new();
            search.run(&mut st, &mut found);
            found
        })
        .collect();
    out.sort_unstable();
    out
}

/// Partition of a translation-closed set into Galois orbits.
///
/// Orbits are sorted internally and listed by their least element, which is
/// the orbit representative.
pub fn galois_orbits(
    deltas: &[PointSet],
    carrier: &EmbeddingSet,
) -> Result<Vec<Vec<PointSet>>, EnumError> {
    let all: BTreeSet<PointSet> = deltas.iter().copied().collect();
    let mut assigned = BTreeSet::new();
    let mut orbits = Vec::new();
    for &delta in &all {
        if assigned.contains(&delta) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for t in carrier.group().elements() {
            let image = carrier.translate(t, delta);
            if !all.contains(&image) {
                return Err(EnumError::NotClosed { delta, element: t });
            }
            orbit.insert(image);
        }
        assigned.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }
    Ok(orbits)
}

/// Lexicographically least splitting of `Δ` into disjoint members of `pairs`,
/// found by always matching the smallest unmatched point first.
pub fn is_decomposable(
    delta: PointSet,
    pairs: &BTreeSet<PointSet>,
) -> Option<Vec<(usize, usize)>> {
    fn go(
        rest: PointSet,
        pairs: &BTreeSet<PointSet>,
        acc: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some(v) = rest.min() else {
            return true;
        };
        for w in rest.iter().skip(1) {
            let edge = PointSet::from_indices([v, w]);
            if pairs.contains(&edge) {
                acc.push((v, w));
                if go(rest.difference(edge), pairs, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }

    if delta.len() % 2 != 0 {
        return None;
    }
    let mut acc = Vec::with_capacity(delta.len() / 2);
    go(delta, pairs, &mut acc).then_some(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecompositionReport {
    pub phi: PointSet,
    pub p: usize,
    pub valid_deltas: Vec<PointSet>,
    pub orbits: Vec<Vec<PointSet>>,
    pub valid_pair_count: usize,
    pub decomposable_deltas: Vec<PointSet>,
    pub exotic_deltas: Vec<PointSet>,
    pub hodge_dim: usize,
    pub lefschetz_dim: usize,
}

impl DecompositionReport {
    pub fn orbit_reps(&self) -> Vec<PointSet> {
        self.orbits.iter().map(|o| o[0]).collect()
    }
}

pub fn classify(phi: &CmType, p: usize) -> Result<DecompositionReport, EnumError> {
    classify_from(phi, p, enumerate_valid(phi, p))
}

/// Classification with the degree-`p` enumeration split across the rayon pool.
pub fn classify_parallel(phi: &CmType, p: usize) -> Result<DecompositionReport, EnumError> {
    let depth = phi.carrier().len().min(8);
    classify_from(phi, p, enumerate_valid_parallel(phi, p, depth))
}

fn classify_from(
    phi: &CmType,
    p: usize,
    valid: Vec<PointSet>,
) -> Result<DecompositionReport, EnumError> {
    let orbits = galois_orbits(&valid, phi.carrier())?;
    let pairs: BTreeSet<PointSet> = enumerate_valid(phi, 1).into_iter().collect();
    let (decomposable, exotic): (Vec<PointSet>, Vec<PointSet>) = valid
        .iter()
        .partition(|&&d| is_decomposable(d, &pairs).is_some());
    Ok(DecompositionReport {
        phi: phi.members(),
        p,
        hodge_dim: valid.len(),
        lefschetz_dim: decomposable.len(),
        valid_deltas: valid,
        orbits,
        valid_pair_count: pairs.len(),
        decomposable_deltas: decomposable,
        exotic_deltas: exotic,
    })
}
