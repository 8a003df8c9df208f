//! Certificates of non-realizability for abstract polytopal spheres.
//!
//! The pipeline: parse a sphere given by facet vertex-sets, pick a flag of
//! facets, build the reduced symbolic slack matrix for that flag, scale a
//! spanning forest of entries to one, reconstruct the full slack matrix as
//! determinants in the reduced variables, orient its columns, and search for
//! a positive rational combination of entry products that is symbolically
//! zero. Such a combination can never vanish on a strictly positive point,
//! so it certifies that no realization exists. Certificates are verified by
//! exact symbolic expansion, optionally rehomogenized, and translated into
//! classical final polynomials in Plucker coordinates.
//!
//! All arithmetic is exact (arbitrary-precision rationals); the linear
//! programming step is an exact simplex with Bland's rule, so a reported
//! certificate is a proof, not a numerical suggestion.

pub mod certify;
pub mod combinatorics;
pub mod error;
pub mod lp;
pub mod pipeline;
pub mod polynomial;
pub mod slack;

pub use error::Error;

/// Deadline handle threaded through the long-running stages.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<std::time::Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn after_secs(secs: u64) -> Self {
        Deadline(Some(
            std::time::Instant::now() + std::time::Duration::from_secs(secs),
        ))
    }

    pub fn check(&self) -> Result<(), Error> {
        match self.0 {
            Some(t) if std::time::Instant::now() > t => Err(Error::TimeLimit),
            _ => Ok(()),
        }
    }
}
