//! Exact computer algebra for non-associative identities: free magma algebras,
//! semidirect-product actions, λ/μ-rule expansion, and Gröbner bases with
//! Nullstellensatz certificates.

pub mod exactnum;
pub mod expr;
pub mod groebner;
pub mod singio;
pub mod freealg;
pub mod magma;
pub mod action;
pub mod lambdamu;
