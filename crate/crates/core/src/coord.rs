//! Exact integer coordinates: `i128` on the fast path, `BigInt` otherwise.

use core::fmt::Debug;
use core::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub(crate) trait Coord: Clone + Ord + Hash + Signed + Debug {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn to_f64(&self) -> f64;
}

impl Coord for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Coord for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }
}

/// Magnitude below which `i128` arithmetic on our orbits cannot overflow,
/// including the squares in the Descartes form: `8 * (2^60)^2 < 2^127`.
pub(crate) const I128_SAFE_BITS: u64 = 60;

pub(crate) fn fits_fast(values: &[&BigInt]) -> bool {
    values.iter().all(|v| v.bits() < I128_SAFE_BITS)
}
