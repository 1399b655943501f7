//! Exact combinatorics of Hodge classes on CM abelian varieties.
//!
//! The Galois group is a finite multiplication table with a central
//! involution; embedding sets are disjoint unions of coset spaces and
//! CM-types are bitmasks over them. Validity of a monomial, Galois orbits,
//! decomposability, split Weil witnesses and the orbit-matrix rank are all
//! computed exactly.

pub mod cm;
pub mod error;
pub mod group;
pub mod io;
pub mod lattice;
pub mod pohlmann;
pub mod points;
pub mod witness;

pub use cm::{enumerate_cm_types, hodge_numbers, validate_cm_type, CmError, CmType, RegularCmType};
pub use error::{Error, Result};
pub use group::{build_group, coset_space, embedding_set, CosetSpace, EmbeddingSet, GroupError, GroupTable};
pub use io::catalog::catalog;
pub use io::instance::{parse_instance, Degrees, Instance, InstanceSpec};
pub use io::report::{analyze, AnalyzeOptions, CertificateDocument, Report};
pub use lattice::{lattice_rank, orbit_matrix, reduced_validity_system, LatticeRank, OrbitMatrix, ValiditySystem};
pub use pohlmann::{classify, enumerate_valid, enumerate_valid_bruteforce, galois_orbits, valid_delta, DecompositionReport, EnumError};
pub use points::PointSet;
pub use witness::{coverage_certificate, split_weil_witness, verify_witness, CoverageCertificate, SplitWeilWitness, Verification};
