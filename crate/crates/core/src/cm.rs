//! CM-types on an embedding set, induced CM-types on the Galois group,
//! and Hodge-number bookkeeping for exterior powers of `H^1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{EmbeddingSet, GroupTable};
use crate::points::{binomial, PointSet};

/// Default bound on `m/2` for [`enumerate_cm_types`].
pub const DEFAULT_CM_STREAM_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("not a CM-type: point {witness} and its conjugate are both {}", if *.both_in { "in" } else { "out" })]
    NotACmType { witness: usize, both_in: bool },
    #[error("point {point} out of range for an embedding set of size {size}")]
    PointOutOfRange { point: usize, size: usize },
    #[error("{pairs} conjugate pairs exceed the CM-type stream cap of {cap}")]
    CapExceeded { pairs: usize, cap: usize },
}

/// A subset `Φ` of the embeddings with `S = Φ ⊔ conj(Φ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmType {
    carrier: Arc<EmbeddingSet>,
    members: PointSet,
}

pub fn validate_cm_type(carrier: &Arc<EmbeddingSet>, members: PointSet) -> Result<CmType, CmError> {
    let size = carrier.len();
    if let Some(point) = members.max().filter(|&p| p >= size) {
        return Err(CmError::PointOutOfRange { point, size });
    }
    for s in 0..size {
        let here = members.contains(s);
        if here == members.contains(carrier.conj(s)) {
            return Err(CmError::NotACmType {
                witness: s.min(carrier.conj(s)),
                both_in: here,
            });
        }
    }
    Ok(CmType {
        carrier: Arc::clone(carrier),
        members,
    })
}

impl CmType {
    pub fn carrier(&self) -> &Arc<EmbeddingSet> {
        &self.carrier
    }

    pub fn members(&self) -> PointSet {
        self.members
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.carrier.group()
    }

    /// The characteristic function `φ`.
    pub fn contains(&self, s: usize) -> bool {
        self.members.contains(s)
    }

    /// `t∘Φ`
    pub fn translate(&self, t: usize) -> CmType {
        CmType {
            carrier: Arc::clone(&self.carrier),
            members: self.carrier.translate(t, self.members),
        }
    }

    /// `Φ̄`
    pub fn conjugate(&self) -> CmType {
        CmType {
            carrier: Arc::clone(&self.carrier),
            members: self.carrier.conjugate(self.members),
        }
    }

    /// `φ_s(t) = φ(t∘s)`, a CM-type on the group itself.
    pub fn induced(&self, s: usize) -> RegularCmType {
        assert!(s < self.carrier.len(), "point {s} out of range");
        let group = self.group();
        let members = group
            .elements()
            .filter(|&t| self.members.contains(self.carrier.act(t, s)))
            .collect();
        RegularCmType {
            group: Arc::clone(group),
            members,
        }
    }

    /// Counts of degree-`r` monomials by Hodge type `(p, q)`.
    pub fn hodge_numbers(&self, r: usize) -> BTreeMap<(usize, usize), u128> {
        hodge_numbers(&self.carrier, self, r)
    }
}

pub fn induced_type(phi: &CmType, s: usize) -> RegularCmType {
    phi.induced(s)
}

pub fn translate_type(phi: &CmType, t: usize) -> CmType {
    phi.translate(t)
}

pub fn conjugate_type(phi: &CmType) -> CmType {
    phi.conjugate()
}

/// A CM-type on the regular embedding set of the group: a subset `X` of
/// group elements with `G = X ⊔ iota·X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularCmType {
    group: Arc<GroupTable>,
    members: PointSet,
}

impl RegularCmType {
    pub fn new(group: &Arc<GroupTable>, members: PointSet) -> Result<Self, CmError> {
        let n = group.order();
        if let Some(point) = members.max().filter(|&p| p >= n) {
            return Err(CmError::PointOutOfRange { point, size: n });
        }
        for t in group.elements() {
            let other = group.mul(group.iota(), t);
            if members.contains(t) == members.contains(other) {
                return Err(CmError::NotACmType {
                    witness: t.min(other),
                    both_in: members.contains(t),
                });
            }
        }
        Ok(RegularCmType {
            group: Arc::clone(group),
            members,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn members(&self) -> PointSet {
        self.members
    }

    pub fn contains(&self, t: usize) -> bool {
        self.members.contains(t)
    }
}

/// Streams all `2^(m/2)` CM-types on `carrier`.
///
/// Pairs `{s, conj s}` are sorted by their smaller point; the counter's most
/// significant bit chooses in the first pair, a set bit picking the larger point.
pub fn enumerate_cm_types(
    carrier: &Arc<EmbeddingSet>,
    cap: usize,
) -> Result<CmTypeStream, CmError> {
    let pairs = carrier.conjugate_pairs();
    if pairs.len() > cap {
        return Err(CmError::CapExceeded {
            pairs: pairs.len(),
            cap,
        });
    }
    Ok(CmTypeStream {
        carrier: Arc::clone(carrier),
        total: 1u64 << pairs.len(),
        pairs,
        next: 0,
    })
}

pub struct CmTypeStream {
    carrier: Arc<EmbeddingSet>,
    pairs: Vec<(usize, usize)>,
    next: u64,
    total: u64,
}

impl Iterator for CmTypeStream {
    type Item = CmType;

    fn next(&mut self) -> Option<CmType> {
        if self.next >= self.total {
            return None;
        }
        let k = self.pairs.len();
        let counter = self.next;
        self.next += 1;
        let members = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, &(lo, hi))| if counter >> (k - 1 - i) & 1 == 1 { hi } else { lo })
            .collect();
        Some(CmType {
            carrier: Arc::clone(&self.carrier),
            members,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

/// Number of `r`-subsets `Δ` with `|Δ∩Φ| = p` and `|Δ∩Φ̄| = q`, for `p + q = r`.
///
/// Only nonzero entries are returned.
pub fn hodge_numbers(
    carrier: &EmbeddingSet,
    phi: &CmType,
    r: usize,
) -> BTreeMap<(usize, usize), u128> {
    let inside = phi.members().len();
    let outside = carrier.len() - inside;
    (0..=r)
        .filter_map(|p| {
            let count = binomial(inside, p).saturating_mul(binomial(outside, r - p));
            (count > 0).then_some(((p, r - p), count))
        })
        .collect()
}
