//! Brute-force enumerations with no pruning beyond a hard truncation.
//!
//! These are slow on purpose: they exist to certify the pruned walks in
//! [`crate::apollonian`] and [`crate::orbit`].

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use hashbrown::HashSet;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::apollonian::{DescartesQuadruple, SwapGenerator};
use crate::hyperbolic::HyperboloidPoint;
use crate::orbit::{quantize, GeneratorSet, BALL_TOL};
use crate::{Error, Limits, Result};

/// The representative of `{v, -v}` with positive sum (or the
/// lexicographically larger one when the sum is zero).
fn sign_class(v: [BigInt; 4]) -> [BigInt; 4] {
    let sum: BigInt = v.iter().sum();
    let neg = v.clone().map(|x| -x);
    if sum.is_negative() || (sum.is_zero() && neg > v) {
        neg
    } else {
        v
    }
}

/// Breadth-first search over all reduced words in `S_1..S_4`, keeping every
/// orbit quadruple with `max |c_j| < bound` (identified up to sign).
/// Returns the sorted multiset of curvatures created by the last swap.
pub fn brute_force_packing(root: &DescartesQuadruple, bound: &BigInt, limits: &Limits) -> Result<Vec<BigInt>> {
    let gens = SwapGenerator::all();
    let max_abs = |v: &[BigInt; 4]| v.iter().map(|x| x.abs()).max().unwrap_or_default();
    let start = sign_class(root.curvatures().clone());
    let mut seen: HashSet<[BigInt; 4]> = HashSet::new();
    seen.insert(start.clone());
    let mut queue: VecDeque<([BigInt; 4], Option<usize>)> = VecDeque::new();
    queue.push_back((start, None));
    let mut out = Vec::new();
    while let Some((v, last)) = queue.pop_front() {
        for (i, g) in gens.iter().enumerate() {
            if last == Some(i) {
                continue;
            }
            let child = sign_class(g.apply(&v));
            if max_abs(&child) >= *bound {
                continue;
            }
            if !seen.insert(child.clone()) {
                continue;
            }
            out.push(child[i].clone());
            queue.push_back((child, Some(i)));
            if seen.len() > limits.max_frontier {
                return Err(Error::MemoryGuard {
                    count: out.len() as u64,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Depth-first enumeration of every reduced word of length at most
/// `max_depth`, returning the distances of the distinct orbit points within
/// `radius`, sorted.
pub fn brute_force_ball(gens: &GeneratorSet, o: &HyperboloidPoint, radius: f64, max_depth: usize) -> Result<Vec<f64>> {
    let form = gens.form();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<f64>, Option<usize>, usize)> = Vec::new();
    stack.push((o.coords().to_vec(), None, 0));
    while let Some((x, last, depth)) = stack.pop() {
        let d = form.distance(o, &form.point_unchecked(x.clone()))?;
        if d <= radius + BALL_TOL && seen.insert(quantize(&x)?) {
            out.push(d);
        }
        if depth == max_depth {
            continue;
        }
        for j in 0..gens.len() {
            if gens.allowed(last, j) {
                stack.push((gens.generator(j).matrix().mul_vec(&x), Some(j), depth + 1));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    Ok(out)
}

/// Depth-first enumeration of `g_{w[0]} ... g_{w[k-1]} x` for every reduced
/// word of length at most `max_depth`, in exact `i64` arithmetic
/// (generators must be integral). Returns the distinct points accepted by
/// `keep`, sorted.
pub fn brute_force_integer_orbit(
    gens: &GeneratorSet,
    start: &[i64],
    max_depth: usize,
    keep: impl Fn(&[i64]) -> bool,
) -> Result<Vec<Vec<i64>>> {
    let d = start.len();
    let mats: Vec<Vec<i64>> = gens
        .integer_matrices()
        .ok_or(Error::InvalidArgument("generators are not integral"))?
        .iter()
        .map(|m| {
            m.iter()
                .map(|x| x.to_i64().ok_or(Error::InvalidArgument("entry exceeds i64")))
                .collect()
        })
        .collect::<Result<_>>()?;
    let apply = |m: &[i64], x: &[i64]| -> Result<Vec<i64>> {
        (0..d)
            .map(|i| {
                (0..d).try_fold(0i64, |acc, k| {
                    m[i * d + k]
                        .checked_mul(x[k])
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::InvalidArgument("i64 overflow in brute-force orbit"))
                })
            })
            .collect()
    };
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut stack: Vec<(Vec<i64>, Option<usize>, usize)> = Vec::new();
    stack.push((start.to_vec(), None, 0));
    while let Some((x, last, depth)) = stack.pop() {
        if keep(&x) {
            seen.insert(x.clone());
        }
        if depth == max_depth {
            continue;
        }
        for (j, m) in mats.iter().enumerate() {
            if gens.allowed(last, j) {
                stack.push((apply(m, &x)?, Some(j), depth + 1));
            }
        }
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
