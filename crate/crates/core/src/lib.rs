//! Orbit enumeration and counting for discrete groups preserving a quadratic
//! form of signature `(n, 1)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; IO, threading and file formats live in the
//! `orbitcount` companion crate.
//!
//! Layout:
//! - [`form`]: exact Gram matrices, evaluation of `Q(x)` and `Q(x, y)`.
//! - [`hyperbolic`]: the hyperboloid model, distance, Busemann functions.
//! - [`group`]: `SO(n,1)°` elements, `a_r`, Cartan and Iwasawa decompositions.
//! - [`chart`]: the quadratic defect of the horospherical chart maps.
//! - [`apollonian`]: Descartes quadruples and pruned packing enumeration.
//! - [`orbit`]: word enumeration, Poincaré sums, vector-orbit counting.
//! - [`powerfit`]: log-log least squares for `N(T) ~ c T^alpha`.
//! - [`oracle`]: brute-force enumerations used to certify the pruned ones.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod apollonian;
pub mod chart;
mod coord;
pub mod error;
pub mod form;
pub mod group;
pub mod hyperbolic;
pub mod linalg;
pub mod oracle;
pub mod orbit;
pub mod powerfit;

pub use error::{Error, Result};
pub use form::QuadraticForm;
pub use hyperbolic::{BoundaryRay, HyperboloidPoint, UnitTangent};

/// Frontier size limits shared by the enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of live frontier (or visited-set) entries.
    pub max_frontier: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_frontier: 64_000_000,
        }
    }
}

/// Bookkeeping returned by the enumerators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub nodes: u64,
    pub peak_frontier: usize,
}

impl WalkStats {
    pub fn merge(&mut self, other: &WalkStats) {
        self.nodes += other.nodes;
        self.peak_frontier = self.peak_frontier.max(other.peak_frontier);
    }
}
