//! Descartes quadruples and their Apollonian orbits.
//!
//! Quadruples are rows acted on by the transposed reflections: `swap(q, i)`
//! replaces `c_i` with `2 * (sum of the others) - c_i`. Enumeration walks the
//! monotone tree: from a reduced root, a child is explored only if the
//! swapped coordinate strictly increases, which is the same as the
//! coordinate sum increasing. Every other orbit point with positive sum has
//! at least one sum-decreasing move; we keep a node only when it is reached
//! through the smallest such index, so each ordered quadruple is produced
//! exactly once.
//!
//! Hyperbolic orbits contain `-v` along with `v` and are counted up to
//! sign. Such an orbit can pass through zero-sum quadruples (permutations of
//! `(1, -1, 0, 0)`), each joining further positive-sum minima with sum 4.
//! These are found by a search of the low part of the orbit and each
//! minimum roots its own monotone tree.
//!
//! Arithmetic is exact. Small inputs run on `i128`, with `BigInt` as the
//! fallback when the root or bound is too large for that to be safe.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Float, Signed, ToPrimitive, Zero};

use crate::coord::{fits_fast, Coord};
use crate::powerfit::CountSeries;
use crate::{Error, Limits, Result, WalkStats};

const REDUCE_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PackingKind {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl PackingKind {
    /// The value `q` with `Q(c) = q` on every quadruple of this kind.
    pub fn target(self) -> i64 {
        match self {
            PackingKind::Euclidean => 0,
            PackingKind::Hyperbolic => 4,
            PackingKind::Spherical => -4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PackingKind::Euclidean => "euclidean",
            PackingKind::Hyperbolic => "hyperbolic",
            PackingKind::Spherical => "spherical",
        }
    }

    pub fn all() -> [PackingKind; 3] {
        [PackingKind::Euclidean, PackingKind::Hyperbolic, PackingKind::Spherical]
    }
}

impl fmt::Display for PackingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PackingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "e" => Ok(PackingKind::Euclidean),
            "hyperbolic" | "h" => Ok(PackingKind::Hyperbolic),
            "spherical" | "s" => Ok(PackingKind::Spherical),
            _ => Err(Error::InvalidArgument(
                "packing kind must be euclidean, hyperbolic or spherical",
            )),
        }
    }
}

/// `Q(c) = 2 * sum(c_i^2) - (sum c_i)^2`.
pub fn descartes_value(c: &[BigInt; 4]) -> BigInt {
    let sum: BigInt = c.iter().sum();
    let sq: BigInt = c.iter().map(|x| x * x).sum();
    sq * 2 - &sum * &sum
}

fn descartes_value_c<C: Coord>(c: &[C; 4]) -> C {
    let mut sum = C::zero();
    let mut sq = C::zero();
    for x in c {
        sum = sum + x.clone();
        sq = sq + x.clone() * x.clone();
    }
    sq.clone() + sq - sum.clone() * sum
}

/// Four curvatures with `Q(c) = kind.target()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DescartesQuadruple {
    c: [BigInt; 4],
    kind: PackingKind,
}

impl DescartesQuadruple {
    pub fn new(c: [BigInt; 4], kind: PackingKind) -> Result<Self> {
        let actual = descartes_value(&c);
        let expected = BigInt::from(kind.target());
        if actual != expected {
            return Err(Error::FormValueMismatch { expected, actual });
        }
        Ok(DescartesQuadruple { c, kind })
    }

    pub fn from_i64(c: [i64; 4], kind: PackingKind) -> Result<Self> {
        Self::new(c.map(BigInt::from), kind)
    }

    pub fn curvatures(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn kind(&self) -> PackingKind {
        self.kind
    }

    pub fn sum(&self) -> BigInt {
        self.c.iter().sum()
    }

    pub fn max_norm(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn sorted(&self) -> DescartesQuadruple {
        let mut c = self.c.clone();
        c.sort();
        DescartesQuadruple { c, kind: self.kind }
    }

    fn negated(&self) -> DescartesQuadruple {
        DescartesQuadruple {
            c: self.c.clone().map(|x| -x),
            kind: self.kind,
        }
    }
}

impl fmt::Display for DescartesQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

/// One of the four reflections `S_1..S_4`, applied to quadruples as rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapGenerator {
    index: usize,
}

impl SwapGenerator {
    /// `index` is 1-based.
    pub fn new(index: usize) -> Result<Self> {
        if !(1..=4).contains(&index) {
            return Err(Error::InvalidArgument("swap index must be in 1..=4"));
        }
        Ok(SwapGenerator { index })
    }

    pub fn all() -> [SwapGenerator; 4] {
        [1, 2, 3, 4].map(|index| SwapGenerator { index })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// `S_i`: identity except row `i`, which is `(2, 2, 2, 2)` with `-1` on
    /// the diagonal. A row vector `c` maps to `c * S_i^T`.
    pub fn matrix(&self) -> [[i64; 4]; 4] {
        let i = self.index - 1;
        let mut m = [[0i64; 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            if r == i {
                *row = [2; 4];
                row[i] = -1;
            } else {
                row[r] = 1;
            }
        }
        m
    }

    /// `c * S_i^T` computed from the matrix entries.
    pub fn apply(&self, c: &[BigInt; 4]) -> [BigInt; 4] {
        let m = self.matrix();
        core::array::from_fn(|r| (0..4).map(|k| BigInt::from(m[r][k]) * &c[k]).sum())
    }
}

/// Replace coordinate `i` (1-based) by `2 * (sum of the others) - c_i`.
pub fn swap(q: &DescartesQuadruple, i: usize) -> Result<DescartesQuadruple> {
    let g = SwapGenerator::new(i)?;
    let k = g.index - 1;
    let mut c = q.c.clone();
    let others: BigInt = c.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x).sum();
    c[k] = others * 2 - &c[k];
    Ok(DescartesQuadruple { c, kind: q.kind })
}

/// Reduce to the root of the orbit: apply the swap with the largest sum
/// decrease that keeps the sum positive, until none exists. A quadruple
/// with negative sum is negated first. The result is sorted ascending.
pub fn root_reduce(q: &DescartesQuadruple) -> Result<DescartesQuadruple> {
    let mut cur = if q.sum().is_negative() { q.negated() } else { q.clone() };
    for _ in 0..REDUCE_GUARD {
        let sum = cur.sum();
        // After swapping c_i the sum is 3s - 4c_i: a decrease iff 2c_i > s,
        // still positive iff 4c_i < 3s.
        let best = (0..4)
            .filter(|&i| {
                let c = &cur.c[i];
                c * 2 > sum && c * 4 < &sum * 3
            })
            .max_by(|&a, &b| cur.c[a].cmp(&cur.c[b]));
        match best {
            Some(i) => cur = swap(&cur, i + 1)?,
            None => return Ok(cur.sorted()),
        }
    }
    Err(Error::ReductionDiverged(REDUCE_GUARD))
}

/// A quadruple produced by the enumeration, tagged with the 1-based index
/// of the coordinate that was just created.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emission {
    pub quadruple: DescartesQuadruple,
    pub generator: usize,
}

impl Emission {
    pub fn new_curvature(&self) -> &BigInt {
        &self.quadruple.c[self.generator - 1]
    }
}

/// `2 * sum - 3 * c_i`: coordinate `i` after the swap.
#[inline]
fn swapped<C: Coord>(c: &[C; 4], sum: &C, i: usize) -> C {
    let ci = c[i].clone();
    sum.clone() + sum.clone() - ci.clone() - ci.clone() - ci
}

/// Whether `i` is the smallest index through which `v` (with sum `sum`) is
/// reached from a positive-sum parent.
#[inline]
fn canonical_parent<C: Coord>(v: &[C; 4], sum: &C, i: usize) -> bool {
    for j in 0..i {
        let vj = v[j].clone();
        let twice = vj.clone() + vj.clone();
        let four = twice.clone() + twice.clone();
        let three_sum = sum.clone() + sum.clone() + sum.clone();
        if twice > *sum && four < three_sum {
            return false;
        }
    }
    true
}

fn max_abs<C: Coord>(c: &[C; 4]) -> C {
    c.iter().map(|x| x.abs()).max().unwrap_or_else(C::zero)
}

fn max_signed<C: Coord>(c: &[C; 4]) -> C {
    c.iter().cloned().max().unwrap_or_else(C::zero)
}

/// Expand one node: calls `child(v, i, emit)` for each monotone child that
/// survives pruning. `emit` is true when all coordinates are below `bound`
/// in absolute value. The form value is checked on every emitted child.
#[inline]
fn expand<C: Coord>(node: &[C; 4], bound: &C, target: &C, mut child: impl FnMut([C; 4], usize, bool)) -> Result<()> {
    let sum = node.iter().fold(C::zero(), |a, b| a + b.clone());
    for i in 0..4 {
        let new = swapped(node, &sum, i);
        if new <= node[i] {
            continue;
        }
        let mut v = node.clone();
        v[i] = new;
        if max_signed(&v) >= *bound {
            continue;
        }
        let vsum = v.iter().fold(C::zero(), |a, b| a + b.clone());
        if !canonical_parent(&v, &vsum, i) {
            continue;
        }
        let emit = max_abs(&v) < *bound;
        if emit && descartes_value_c(&v) != *target {
            return Err(Error::InvariantViolation(
                "Descartes form value changed along the orbit",
            ));
        }
        child(v, i, emit);
    }
    Ok(())
}

/// Depth-first walk below `starts` (which are not themselves reported).
fn walk<C: Coord>(
    starts: Vec<[C; 4]>,
    bound: &C,
    target: &C,
    limits: &Limits,
    mut visit: impl FnMut(&[C; 4], usize),
) -> Result<WalkStats> {
    let mut stats = WalkStats::default();
    let mut emitted = 0u64;
    let mut stack = starts;
    while let Some(node) = stack.pop() {
        stats.nodes += 1;
        expand(&node, bound, target, |v, i, emit| {
            if emit {
                emitted += 1;
                visit(&v, i);
            }
            stack.push(v);
        })?;
        stats.peak_frontier = stats.peak_frontier.max(stack.len());
        if stack.len() > limits.max_frontier {
            return Err(Error::MemoryGuard { count: emitted });
        }
    }
    Ok(stats)
}

/// Whether the root, the bound and every seed (whose entries are at most
/// four times the root's) fit the `i128` walk.
fn fast_path(root: &DescartesQuadruple, bound: &BigInt) -> bool {
    let reach = root.max_norm() * 4;
    fits_fast(&[&reach, bound])
}

fn to_coord<C: Coord>(c: &[BigInt; 4]) -> [C; 4] {
    core::array::from_fn(|k| C::from_big(&c[k]).expect("checked by fits_fast"))
}

fn to_big<C: Coord>(c: &[C; 4]) -> [BigInt; 4] {
    core::array::from_fn(|k| c[k].to_big())
}

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

fn is_minimum(v: &[BigInt; 4]) -> bool {
    let sum: BigInt = v.iter().sum();
    !v.iter().any(|c| c * 2 > sum && c * 4 < &sum * 3)
}

/// Quadruples of the orbit that no monotone tree below the root reaches.
struct Seeds {
    /// Zero-sum classes and further minima, tagged with the 0-based index
    /// of the coordinate just created.
    extra: Vec<([BigInt; 4], usize)>,
    /// Roots of the monotone trees, the given root first unless its sum
    /// is zero.
    minima: Vec<[BigInt; 4]>,
}

fn seeds(root: &[BigInt; 4]) -> Seeds {
    let start = sign_class(root.clone());
    let s0: BigInt = start.iter().sum();
    let limit = s0.clone().max(BigInt::from(4));
    let mut seen: hashbrown::HashSet<[BigInt; 4]> = hashbrown::HashSet::new();
    seen.insert(start.clone());
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(start.clone());
    let mut out = Seeds {
        extra: Vec::new(),
        minima: Vec::new(),
    };
    // A zero-sum root has no monotone tree of its own: both signs lead
    // into trees of positive-sum minima found below.
    if !s0.is_zero() {
        out.minima.push(root.clone());
    }
    while let Some(v) = queue.pop_front() {
        let sum: BigInt = v.iter().sum();
        for i in 0..4 {
            let mut c = v.clone();
            c[i] = &sum * 2 - &v[i] * 3;
            let c = sign_class(c);
            let csum: BigInt = c.iter().sum();
            if csum > limit || !seen.insert(c.clone()) {
                continue;
            }
            if csum.is_zero() {
                out.extra.push((c.clone(), i));
            } else if is_minimum(&c) {
                out.extra.push((c.clone(), i));
                out.minima.push(c.clone());
            }
            queue.push_back(c);
        }
    }
    out
}

/// Visit every orbit quadruple below the root with all `|c_j| < bound`,
/// together with the 1-based index of its new coordinate.
pub fn visit_packing(
    root: &DescartesQuadruple,
    bound: &BigInt,
    limits: &Limits,
    mut visit: impl FnMut(&[BigInt; 4], usize),
) -> Result<WalkStats> {
    let seeds = seeds(&root.c);
    for (v, i) in &seeds.extra {
        if v.iter().all(|x| x.abs() < *bound) {
            visit(v, i + 1);
        }
    }
    let target = BigInt::from(root.kind.target());
    if fast_path(root, bound) {
        let b = i128::from_big(bound).expect("fits");
        let t = root.kind.target() as i128;
        let starts = seeds.minima.iter().map(to_coord::<i128>).collect();
        walk(starts, &b, &t, limits, |v, i| visit(&to_big(v), i + 1))
    } else {
        walk(seeds.minima, bound, &target, limits, |v, i| visit(v, i + 1))
    }
}

/// All emissions below `bound`, in walk order.
pub fn enumerate_packing(root: &DescartesQuadruple, bound: &BigInt, limits: &Limits) -> Result<Vec<Emission>> {
    let mut out = Vec::new();
    visit_packing(root, bound, limits, |v, generator| {
        out.push(Emission {
            quadruple: DescartesQuadruple {
                c: v.clone(),
                kind: root.kind,
            },
            generator,
        })
    })?;
    Ok(out)
}

/// `N(T)`: root entries with `|c| < T` plus one per emission below `T`.
pub fn count_circles(root: &DescartesQuadruple, bound: &BigInt) -> Result<u64> {
    let plan = CirclePlan::from_bounds(root.clone(), vec![bound.clone()])?;
    let (hist, _) = plan.run(&Limits::default())?;
    Ok(hist.cumulative()[0])
}

/// The two roots `x` of `Q(a, b, c, x) = q`.
#[derive(Debug, Clone, PartialEq)]
pub enum FourthCurvature {
    Integer(BigInt),
    NonIntegral(f64),
}

impl FourthCurvature {
    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            FourthCurvature::Integer(x) => Some(x),
            FourthCurvature::NonIntegral(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            FourthCurvature::Integer(x) => ToPrimitive::to_f64(x).unwrap_or(f64::NAN),
            FourthCurvature::NonIntegral(x) => *x,
        }
    }
}

/// Solve `Q(a, b, c, x) = q` for `x`, smaller root first.
///
/// Expanding gives `x^2 - 2sx + (2(a^2+b^2+c^2) - s^2 - q) = 0` with
/// `s = a + b + c`, so `x = s +- sqrt(D)` where `D = 4(ab + bc + ca) + q`.
pub fn descartes_complete(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    kind: PackingKind,
) -> Result<(FourthCurvature, FourthCurvature)> {
    let s = a + b + c;
    let disc: BigInt = (a * b + b * c + c * a) * 4 + BigInt::from(kind.target());
    if disc.is_negative() {
        return Err(Error::NoRealSolution(disc));
    }
    let root = disc.sqrt();
    if &root * &root == disc {
        return Ok((
            FourthCurvature::Integer(&s - &root),
            FourthCurvature::Integer(&s + &root),
        ));
    }
    let sf = ToPrimitive::to_f64(&s).unwrap_or(f64::NAN);
    let rf = Float::sqrt(ToPrimitive::to_f64(&disc).unwrap_or(f64::NAN));
    Ok((
        FourthCurvature::NonIntegral(sf - rf),
        FourthCurvature::NonIntegral(sf + rf),
    ))
}

/// Cumulative circle counts for a grid of bounds, split into independent
/// subtrees so the walk can be spread over threads.
#[derive(Debug, Clone)]
pub struct CirclePlan {
    root: DescartesQuadruple,
    bounds: Vec<BigInt>,
    grid: Vec<f64>,
}

/// Per-bound counts: `bins[k]` holds circles with `B_{k-1} <= |c| < B_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    pub bins: Vec<u64>,
    pub stats: WalkStats,
}

impl Histogram {
    fn new(len: usize) -> Self {
        Histogram {
            bins: vec![0; len],
            stats: WalkStats::default(),
        }
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.stats.merge(&other.stats);
    }

    pub fn cumulative(&self) -> Vec<u64> {
        self.bins
            .iter()
            .scan(0u64, |acc, b| {
                *acc += b;
                Some(*acc)
            })
            .collect()
    }
}

/// A subtree of the monotone walk, rooted at an already-counted node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanTask {
    pub start: [BigInt; 4],
}

impl CirclePlan {
    /// Counts at each real `T` in `grid` use the integer bound `ceil(T)`.
    pub fn new(root: DescartesQuadruple, grid: &[f64]) -> Result<Self> {
        let mut bounds = Vec::with_capacity(grid.len());
        for &t in grid {
            if !t.is_finite() || t <= 0.0 {
                return Err(Error::InvalidArgument("grid values must be positive and finite"));
            }
            let b = num_traits::FromPrimitive::from_f64(Float::ceil(t))
                .ok_or(Error::InvalidArgument("grid value out of range"))?;
            bounds.push(b);
        }
        let mut plan = Self::from_bounds(root, bounds)?;
        plan.grid = grid.to_vec();
        Ok(plan)
    }

    pub fn from_bounds(root: DescartesQuadruple, bounds: Vec<BigInt>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument("at least one bound is required"));
        }
        if bounds.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("bounds must be non-decreasing"));
        }
        let grid = bounds
            .iter()
            .map(|b| ToPrimitive::to_f64(b).unwrap_or(f64::INFINITY))
            .collect();
        Ok(CirclePlan { root, bounds, grid })
    }

    pub fn root(&self) -> &DescartesQuadruple {
        &self.root
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    fn fast(&self) -> bool {
        fast_path(&self.root, self.bounds.last().expect("non-empty"))
    }

    /// Expand breadth-first until at least `min_tasks` subtrees are open
    /// (or the tree is exhausted). Returns the counts of everything
    /// expanded so far, including the root entries, and the open subtrees.
    pub fn split(&self, min_tasks: usize, limits: &Limits) -> Result<(Histogram, Vec<PlanTask>)> {
        if self.fast() {
            self.split_c::<i128>(min_tasks, limits)
        } else {
            self.split_c::<BigInt>(min_tasks, limits)
        }
    }

    pub fn run_task(&self, task: &PlanTask, limits: &Limits) -> Result<Histogram> {
        if self.fast() && fits_fast(&task.start.iter().collect::<Vec<_>>()) {
            self.run_c::<i128>(vec![to_coord(&task.start)], limits)
        } else {
            self.run_c::<BigInt>(vec![task.start.clone()], limits)
        }
    }

    /// Single-threaded run of the whole plan.
    pub fn run(&self, limits: &Limits) -> Result<(Histogram, WalkStats)> {
        let (mut hist, tasks) = self.split(1, limits)?;
        for t in &tasks {
            let h = self.run_task(t, limits)?;
            hist.merge(&h);
        }
        let stats = hist.stats;
        Ok((hist, stats))
    }

    /// Turn a merged histogram into the count series on the grid.
    pub fn finish(&self, hist: &Histogram) -> Result<CountSeries> {
        CountSeries::new(self.grid.clone(), hist.cumulative())
    }

    fn bounds_c<C: Coord>(&self) -> Vec<C> {
        self.bounds.iter().map(|b| C::from_big(b).expect("checked")).collect()
    }

    fn bin<C: Coord>(bounds: &[C], value: &C, bins: &mut [u64]) {
        let k = bounds.partition_point(|b| b <= value);
        if k < bins.len() {
            bins[k] += 1;
        }
    }

    fn split_c<C: Coord>(&self, min_tasks: usize, limits: &Limits) -> Result<(Histogram, Vec<PlanTask>)> {
        let bounds = self.bounds_c::<C>();
        let top = bounds.last().expect("non-empty").clone();
        let target = C::from_big(&BigInt::from(self.root.kind.target())).expect("small");
        let mut hist = Histogram::new(bounds.len());
        let root: [C; 4] = to_coord(&self.root.c);
        for x in &root {
            Self::bin(&bounds, &x.abs(), &mut hist.bins);
        }
        let seeds = seeds(&self.root.c);
        for (v, _) in &seeds.extra {
            let v: [C; 4] = to_coord(v);
            if max_abs(&v) < top {
                Self::bin(&bounds, &max_abs(&v), &mut hist.bins);
            }
        }
        let mut level: Vec<[C; 4]> = seeds.minima.iter().map(to_coord).collect();
        let mut depth = 0;
        while !level.is_empty() && level.len() < min_tasks.max(1) && depth < 64 {
            let mut next = Vec::new();
            for node in &level {
                hist.stats.nodes += 1;
                expand(node, &top, &target, |v, _, emit| {
                    if emit {
                        Self::bin(&bounds, &max_abs(&v), &mut hist.bins);
                    }
                    next.push(v);
                })?;
            }
            if next.len() > limits.max_frontier {
                return Err(Error::MemoryGuard {
                    count: hist.bins.iter().sum(),
                });
            }
            hist.stats.peak_frontier = hist.stats.peak_frontier.max(next.len());
            level = next;
            depth += 1;
        }
        let tasks = level.iter().map(|v| PlanTask { start: to_big(v) }).collect();
        Ok((hist, tasks))
    }

    fn run_c<C: Coord>(&self, starts: Vec<[C; 4]>, limits: &Limits) -> Result<Histogram> {
        let bounds = self.bounds_c::<C>();
        let top = bounds.last().expect("non-empty").clone();
        let target = C::from_big(&BigInt::from(self.root.kind.target())).expect("small");
        let mut hist = Histogram::new(bounds.len());
        let mut bins = vec![0u64; bounds.len()];
        hist.stats = walk(starts, &top, &target, limits, |v, _| {
            Self::bin(&bounds, &max_abs(v), &mut bins);
        })?;
        hist.bins = bins;
        Ok(hist)
    }
}

/// Default roots: `(-1, 2, 2, 3)` for Euclidean and `(0, 0, 0, 2)` for
/// hyperbolic packings. Spherical packings have no default.
pub fn default_root(kind: PackingKind) -> Option<DescartesQuadruple> {
    match kind {
        PackingKind::Euclidean => DescartesQuadruple::from_i64([-1, 2, 2, 3], kind).ok(),
        PackingKind::Hyperbolic => DescartesQuadruple::from_i64([0, 0, 0, 2], kind).ok(),
        PackingKind::Spherical => None,
    }
}
