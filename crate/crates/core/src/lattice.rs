//! Integer row lattice spanned by the translates of a CM-type.
//!
//! Rows are the characteristic vectors of `t∘Φ`. Each row meets the
//! all-ones vector in `m/2`, so whenever a row is a rational combination of
//! other rows the coefficients sum to one. That makes the validity test for
//! `Δ` equivalent to checking a maximal independent set of rows only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cm::CmType;
use crate::pohlmann::translates;
use crate::points::PointSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMatrix {
    rows: Vec<PointSet>,
    columns: usize,
}

impl OrbitMatrix {
    pub fn rows(&self) -> &[PointSet] {
        &self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Rows as 0/1 vectors.
    pub fn to_vectors(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.columns).map(|c| u8::from(r.contains(c))).collect())
            .collect()
    }
}

/// Distinct translates of `Φ`, in order of first appearance over group elements.
pub fn orbit_matrix(phi: &CmType) -> OrbitMatrix {
    OrbitMatrix {
        rows: translates(phi),
        columns: phi.carrier().len(),
    }
}

/// Rank of a 0/1 matrix by fraction-free (Bareiss) elimination.
pub fn rank_of(rows: &[PointSet], columns: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            (0..columns)
                .map(|c| BigInt::from(u8::from(r.contains(c))))
                .collect()
        })
        .collect();
    bareiss_rank(&mut a, columns)
}

fn bareiss_rank(a: &mut [Vec<BigInt>], columns: usize) -> usize {
    let n = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..columns {
        if rank == n {
            break;
        }
        let Some(piv) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for r in rank + 1..n {
            for c in col + 1..columns {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LatticeRank {
    pub raw: usize,
    /// Rank after adjoining the all-ones vector.
    pub with_ones: usize,
    /// `m/2 + 1`
    pub bound: usize,
    pub maximal: bool,
}

pub fn lattice_rank(matrix: &OrbitMatrix) -> LatticeRank {
    let raw = rank_of(&matrix.rows, matrix.columns);
    let mut with = matrix.rows.clone();
    with.push(PointSet::full(matrix.columns));
    let with_ones = rank_of(&with, matrix.columns);
    let bound = matrix.columns / 2 + 1;
    LatticeRank {
        raw,
        with_ones,
        bound,
        maximal: raw == bound,
    }
}

/// A reduced system of linear conditions equivalent to the validity
/// criterion at a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValiditySystem {
    pub p: usize,
    pub columns: usize,
    /// Maximal independent subset of the orbit rows, greedily chosen in row order.
    pub basis: Vec<PointSet>,
    /// `p * <b, 1> / (m/2)` per basis row.
    pub targets: Vec<BigRational>,
    /// For each dependent row: its index in the orbit matrix and its
    /// coefficients over `basis`.
    pub expressions: Vec<(usize, Vec<BigRational>)>,
}

struct EchelonRow {
    vector: Vec<BigRational>,
    pivot: usize,
    /// This echelon row as a combination of basis rows.
    combination: Vec<BigRational>,
}

pub fn reduced_validity_system(phi: &CmType, p: usize) -> ValiditySystem {
    let matrix = orbit_matrix(phi);
    let m = matrix.columns;
    let half = BigRational::from_integer(BigInt::from(m / 2));
    let mut echelon: Vec<EchelonRow> = Vec::new();
    let mut basis = Vec::new();
    let mut targets = Vec::new();
    let mut expressions = Vec::new();

    for (idx, row) in matrix.rows.iter().enumerate() {
        let mut v: Vec<BigRational> = (0..m)
            .map(|c| BigRational::from_integer(BigInt::from(u8::from(row.contains(c)))))
            .collect();
        // Coefficients (over current basis) of what was subtracted.
        let mut taken = vec![BigRational::zero(); basis.len()];
        for e in &echelon {
            if v[e.pivot].is_zero() {
                continue;
            }
            let factor = &v[e.pivot] / &e.vector[e.pivot];
            for c in 0..m {
                if !e.vector[c].is_zero() {
                    v[c] = &v[c] - &factor * &e.vector[c];
                }
            }
            for (k, coef) in e.combination.iter().enumerate() {
                taken[k] = &taken[k] + &factor * coef;
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => expressions.push((idx, taken)),
            Some(pivot) => {
                let mut combination: Vec<BigRational> = taken.iter().map(|x| -x).collect();
                combination.push(BigRational::one());
                for e in &mut echelon {
                    e.combination.push(BigRational::zero());
                }
                echelon.push(EchelonRow {
                    vector: v,
                    pivot,
                    combination,
                });
                let weight = BigRational::from_integer(BigInt::from(row.len()));
                targets.push(BigRational::from_integer(BigInt::from(p)) * weight / &half);
                basis.push(*row);
            }
        }
    }

    ValiditySystem {
        p,
        columns: m,
        basis,
        targets,
        expressions,
    }
}

/// Validity of `Δ` decided from the reduced system alone.
pub fn check_via_system(system: &ValiditySystem, delta: PointSet, p: usize) -> bool {
    if p != system.p || delta.len() != 2 * p || !delta.is_subset(PointSet::full(system.columns)) {
        return false;
    }
    system.basis.iter().zip(&system.targets).all(|(b, target)| {
        let dot = BigRational::from_integer(BigInt::from(b.meet_count(delta)));
        dot == *target
    })
}

impl ValiditySystem {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Checks that every recorded expression reproduces its row and has
    /// coefficients summing to one.
    pub fn expressions_consistent(&self, matrix: &OrbitMatrix) -> bool {
        self.expressions.iter().all(|(idx, coefs)| {
            let sum: BigRational = coefs.iter().fold(BigRational::zero(), |a, c| a + c);
            let row = matrix.rows[*idx];
            sum.is_one()
                && (0..self.columns).all(|c| {
                    let mut acc = BigRational::zero();
                    for (b, coef) in self.basis.iter().zip(coefs) {
                        if b.contains(c) {
                            acc += coef;
                        }
                    }
                    acc == BigRational::from_integer(BigInt::from(u8::from(row.contains(c))))
                })
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cm::{enumerate_cm_types, validate_cm_type};
    use crate::group::{build_group, embedding_set, EmbeddingSet};
    use crate::pohlmann::valid_delta;
    use crate::points::k_subsets;

    fn set(ix: &[usize]) -> PointSet {
        PointSet::from_indices(ix.iter().copied())
    }

    fn regular(rows: Vec<Vec<usize>>, iota: usize) -> Arc<EmbeddingSet> {
        let g = Arc::new(build_group(rows.len(), &rows, iota).unwrap());
        Arc::new(embedding_set(&g, &[vec![g.identity()]]).unwrap())
    }

    fn cyclic(n: usize) -> Arc<EmbeddingSet> {
        regular(
            (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            n / 2,
        )
    }

    /// Rank by plain rational elimination, independent of the Bareiss route.
    fn rational_rank(rows: &[Vec<u8>]) -> usize {
        let mut a: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in 0..cols {
                        let sub = &f * &a[rank][k];
                        a[r][k] -= sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn orbit_matrix_examples() {
        let s2 = cyclic(2);
        let phi = validate_cm_type(&s2, set(&[0])).unwrap();
        assert_eq!(orbit_matrix(&phi).to_vectors(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(lattice_rank(&orbit_matrix(&phi)).raw, 2);

        let s4 = cyclic(4);
        let phi = validate_cm_type(&s4, set(&[0, 1])).unwrap();
        let mat = orbit_matrix(&phi);
        assert_eq!(
            mat.to_vectors(),
            vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 1]]
        );
        let rank = lattice_rank(&mat);
        assert_eq!(rank.raw, 3);
        assert!(rank.maximal);

        let klein = regular((0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(), 3);
        let phi = validate_cm_type(&klein, set(&[0, 1])).unwrap();
        let mat = orbit_matrix(&phi);
        assert_eq!(mat.rows().len(), 2);
        assert_eq!(lattice_rank(&mat).raw, 2);
    }

    #[test]
    fn bareiss_agrees_with_rational_elimination() {
        for n in [2, 4, 6, 8, 10, 12] {
            let s = cyclic(n);
            for phi in enumerate_cm_types(&s, 20).unwrap() {
                let mat = orbit_matrix(&phi);
                let r = lattice_rank(&mat);
                assert_eq!(r.raw, rational_rank(&mat.to_vectors()));
                assert!(r.raw <= n / 2 + 1);
                assert_eq!(r.with_ones, r.raw);
            }
        }
    }

    #[test]
    fn system_examples() {
        let s2 = cyclic(2);
        let phi = validate_cm_type(&s2, set(&[0])).unwrap();
        let sys = reduced_validity_system(&phi, 1);
        assert_eq!(sys.basis.len(), 2);
        assert!(sys.targets.iter().all(|t| *t == BigRational::one()));

        let s4 = cyclic(4);
        let phi = validate_cm_type(&s4, set(&[0, 1])).unwrap();
        let sys = reduced_validity_system(&phi, 1);
        assert_eq!(sys.rank(), 3);
        assert!(sys.targets.iter().all(|t| *t == BigRational::one()));
        assert!(check_via_system(&sys, set(&[0, 2]), 1));
        assert!(!check_via_system(&sys, set(&[0, 1]), 1));
        assert!(sys.expressions_consistent(&orbit_matrix(&phi)));

        let sys0 = reduced_validity_system(&phi, 0);
        assert!(sys0.targets.iter().all(Zero::is_zero));
        assert!(check_via_system(&sys0, PointSet::EMPTY, 0));

        let top = reduced_validity_system(&phi, 2);
        assert!(check_via_system(&top, s4.all(), 2));
    }

    #[test]
    fn system_agrees_with_direct_check() {
        for n in [4, 6, 8] {
            let s = cyclic(n);
            for phi in enumerate_cm_types(&s, 20).unwrap() {
                let mat = orbit_matrix(&phi);
                for p in 0..=n / 2 {
                    let sys = reduced_validity_system(&phi, p);
                    assert_eq!(sys.rank(), lattice_rank(&mat).raw);
                    assert!(sys.expressions_consistent(&mat));
                    for d in k_subsets(n, 2 * p) {
                        assert_eq!(check_via_system(&sys, d, p), valid_delta(&phi, d, p));
                    }
                }
            }
        }
    }
}
