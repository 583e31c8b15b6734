//! Orbits of finitely generated groups preserving a quadratic form.
//!
//! Two walks share one engine: orbit points `γ o` on the hyperboloid (for
//! balls, Poincaré sums and critical exponents) and row-vector orbits `w₀ γ`
//! (for norm-ball and cone counts). Both run breadth-first over reduced
//! words: an involutive generator never follows itself, and a general
//! generator never follows its inverse. Orbit points are deduplicated, so
//! relations between generators are harmless.
//!
//! Pruning: words are expanded in full up to the burn-in depth. Past it, a
//! child is dropped when it leaves the ball or when its norm (or distance)
//! is smaller than its parent's. This is exact for groups whose orbits grow
//! monotonically along reduced words, which is what the brute-force oracles
//! check.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;
use core::str::FromStr;

use hashbrown::HashSet;
use num_bigint::BigInt;
use num_rational::BigRational;
// Inherent float methods shadow `Float` when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coord::Coord;
use crate::form::{FormKind, QuadraticForm};
use crate::hyperbolic::HyperboloidPoint;
use crate::linalg::{norm, Matrix};
use crate::powerfit::{fit_exponential, CountSeries, FitReport};
use crate::{Error, Limits, Result, WalkStats};

/// Default number of levels expanded without pruning.
pub const BURN_IN_DEPTH: u32 = 6;

/// Quantization step for float orbit-point keys.
pub const DEDUP_RESOLUTION: f64 = 1e-7;

/// Slack for `d(o, γo) <= R`.
pub const BALL_TOL: f64 = 1e-9;

const FLOAT_GEN_TOL: f64 = 1e-9;

/// A square matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(RationalMatrix { dim, data })
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.as_ref()
                        .iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![BigRational::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = BigRational::one();
        }
        RationalMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        let d = self.dim;
        let mut data = vec![BigRational::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.get(k, j);
                }
            }
        }
        RationalMatrix { dim: d, data }
    }

    pub fn transpose(&self) -> RationalMatrix {
        let d = self.dim;
        let data = (0..d * d).map(|idx| self.get(idx % d, idx / d).clone()).collect();
        RationalMatrix { dim: d, data }
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut inv = RationalMatrix::identity(d).data;
        for col in 0..d {
            let pivot = (col..d)
                .find(|&r| !a[r * d + col].is_zero())
                .ok_or(Error::InvalidArgument("matrix is singular"))?;
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                    inv.swap(pivot * d + j, col * d + j);
                }
            }
            let p = a[col * d + col].clone();
            for j in 0..d {
                a[col * d + j] /= &p;
                inv[col * d + j] /= &p;
            }
            for r in 0..d {
                if r == col || a[r * d + col].is_zero() {
                    continue;
                }
                let f = a[r * d + col].clone();
                for j in 0..d {
                    let (x, y) = (a[col * d + j].clone(), inv[col * d + j].clone());
                    a[r * d + j] -= &f * x;
                    inv[r * d + j] -= &f * y;
                }
            }
        }
        Ok(RationalMatrix { dim: d, data: inv })
    }

    pub fn is_identity(&self) -> bool {
        *self == RationalMatrix::identity(self.dim)
    }

    pub fn integer_entries(&self) -> Option<Vec<BigInt>> {
        self.data
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    pub fn to_f64(&self) -> Matrix {
        let d = self.dim;
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|j| self.get(i, j).to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        Matrix::from_rows(&rows).expect("square")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    exact: Option<RationalMatrix>,
    float: Matrix,
    involutive: bool,
    inverse: usize,
}

impl Generator {
    pub fn exact(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.float
    }

    pub fn is_involutive(&self) -> bool {
        self.involutive
    }

    /// Index of the inverse generator in the set.
    pub fn inverse_index(&self) -> usize {
        self.inverse
    }
}

/// Generators of a discrete group `Γ` preserving a form, closed under
/// inverses. Points are acted on as columns `x -> g x`, vectors as rows
/// `v -> v g`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    form: QuadraticForm,
    gens: Vec<Generator>,
    supplied: usize,
}

/// Whether `g` maps the sheet of the form's reference point to itself.
fn keeps_sheet(form: &QuadraticForm, g: &Matrix) -> bool {
    let b = form.base_coords();
    form.bilinear_unchecked(&g.mul_vec(b), b) < 0.0
}

impl GeneratorSet {
    /// Exact generators; each must satisfy `gᵀ G g = G` exactly and keep
    /// the sheet. Inverses of non-involutive generators are appended unless
    /// already present.
    pub fn from_exact(form: QuadraticForm, mats: Vec<RationalMatrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::InvalidArgument("generator set is empty"));
        }
        let supplied = mats.len();
        let mut gens: Vec<Generator> = Vec::new();
        let mut exact: Vec<RationalMatrix> = Vec::new();
        for m in &mats {
            if m.dim() != form.dim() {
                return Err(Error::DimensionMismatch {
                    expected: form.dim(),
                    got: m.dim(),
                });
            }
            if !form.preserved_by_exact(m.entries()) {
                return Err(Error::NotFormPreserving(form.preservation_defect(&m.to_f64())));
            }
            let float = m.to_f64();
            if !keeps_sheet(&form, &float) {
                return Err(Error::SwapsSheets);
            }
            let involutive = m.mul(m).is_identity();
            let idx = gens.len();
            gens.push(Generator {
                exact: Some(m.clone()),
                float,
                involutive,
                inverse: idx,
            });
            exact.push(m.clone());
        }
        for i in 0..supplied {
            if gens[i].involutive {
                continue;
            }
            let inv = exact[i].inverse()?;
            if let Some(j) = exact.iter().position(|m| *m == inv) {
                gens[i].inverse = j;
                gens[j].inverse = i;
                continue;
            }
            let idx = gens.len();
            gens[i].inverse = idx;
            gens.push(Generator {
                float: inv.to_f64(),
                exact: Some(inv.clone()),
                involutive: false,
                inverse: i,
            });
            exact.push(inv);
        }
        Ok(GeneratorSet { form, gens, supplied })
    }

    /// Float generators, checked to `1e-9` relative to their size.
    pub fn from_float(form: QuadraticForm, mats: Vec<Matrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::InvalidArgument("generator set is empty"));
        }
        let supplied = mats.len();
        let mut gens = Vec::new();
        for m in mats {
            if m.dim() != form.dim() {
                return Err(Error::DimensionMismatch {
                    expected: form.dim(),
                    got: m.dim(),
                });
            }
            let scale = m.max_abs_diff(&Matrix::zeros(m.dim())).max(1.0);
            let defect = form.preservation_defect(&m);
            if defect > FLOAT_GEN_TOL * scale * scale {
                return Err(Error::NotFormPreserving(defect));
            }
            if !keeps_sheet(&form, &m) {
                return Err(Error::SwapsSheets);
            }
            let involutive = (&m * &m).max_abs_diff(&Matrix::identity(m.dim())) < FLOAT_GEN_TOL * scale * scale;
            let idx = gens.len();
            gens.push(Generator {
                exact: None,
                float: m,
                involutive,
                inverse: idx,
            });
        }
        for i in 0..supplied {
            if gens[i].involutive {
                continue;
            }
            let inv = gens[i].float.inverse()?;
            let idx = gens.len();
            gens[i].inverse = idx;
            gens.push(Generator {
                exact: None,
                float: inv,
                involutive: false,
                inverse: i,
            });
        }
        Ok(GeneratorSet { form, gens, supplied })
    }

    /// The Apollonian group on the Descartes form: the transposed
    /// reflections `S_iᵀ`, so that `c S_iᵀ` is the swap of coordinate `i`.
    pub fn apollonian() -> Self {
        let mats = crate::apollonian::SwapGenerator::all()
            .iter()
            .map(|s| {
                let m = s.matrix();
                RationalMatrix::from_integers(&m).expect("4x4").transpose()
            })
            .collect();
        Self::from_exact(QuadraticForm::descartes(), mats).expect("the reflections preserve the Descartes form")
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Number of generators supplied, before inverses were appended.
    pub fn supplied(&self) -> usize {
        self.supplied
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    /// Integer matrices (row-major) when every generator is integral.
    pub fn integer_matrices(&self) -> Option<Vec<Vec<BigInt>>> {
        self.gens
            .iter()
            .map(|g| g.exact.as_ref().and_then(|m| m.integer_entries()))
            .collect()
    }

    /// Whether generator `next` may follow `last` in a reduced word.
    #[inline]
    pub fn allowed(&self, last: Option<usize>, next: usize) -> bool {
        match last {
            Some(l) => self.gens[l].inverse != next,
            None => true,
        }
    }
}

/// Knobs shared by the word walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkOptions {
    pub limits: Limits,
    pub burn_in: u32,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions {
            limits: Limits::default(),
            burn_in: BURN_IN_DEPTH,
        }
    }
}

struct Node<S> {
    state: S,
    value: f64,
    depth: u32,
    last: Option<usize>,
}

/// The shared breadth-first engine. `measure` is the norm or distance,
/// `inside` decides membership, `visit` sees each distinct accepted state.
#[allow(clippy::too_many_arguments)]
fn word_walk<S, K: Hash + Eq>(
    gens: &GeneratorSet,
    start: S,
    opts: &WalkOptions,
    mut measure: impl FnMut(&S) -> Result<f64>,
    mut step: impl FnMut(&S, usize) -> S,
    mut key: impl FnMut(&S) -> Result<K>,
    inside: impl Fn(f64) -> bool,
    mut visit: impl FnMut(&S, f64) -> Result<()>,
) -> Result<WalkStats> {
    let mut stats = WalkStats::default();
    let mut seen: HashSet<K> = HashSet::new();
    let mut accepted = 0u64;
    let v0 = measure(&start)?;
    seen.insert(key(&start)?);
    if inside(v0) {
        visit(&start, v0)?;
        accepted += 1;
    }
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(Node {
        state: start,
        value: v0,
        depth: 0,
        last: None,
    });
    while let Some(node) = queue.pop_front() {
        stats.nodes += 1;
        let depth = node.depth + 1;
        for j in 0..gens.len() {
            if !gens.allowed(node.last, j) {
                continue;
            }
            let child = step(&node.state, j);
            let value = measure(&child)?;
            let is_in = inside(value);
            if depth > opts.burn_in && (!is_in || value + BALL_TOL < node.value) {
                continue;
            }
            if !seen.insert(key(&child)?) {
                continue;
            }
            if is_in {
                visit(&child, value)?;
                accepted += 1;
            }
            queue.push_back(Node {
                state: child,
                value,
                depth,
                last: Some(j),
            });
        }
        stats.peak_frontier = stats.peak_frontier.max(queue.len());
        if seen.len() > opts.limits.max_frontier {
            return Err(Error::MemoryGuard { count: accepted });
        }
    }
    Ok(stats)
}

/// Quantized key of a float vector.
pub fn quantize(x: &[f64]) -> Result<Vec<i64>> {
    const LIMIT: f64 = 9.0e18;
    x.iter()
        .map(|&v| {
            let q = (v / DEDUP_RESOLUTION).round();
            if !(q.abs() < LIMIT) {
                return Err(Error::QuantizationRange(v));
            }
            Ok(q as i64)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Balls of orbit points.

/// One orbit point `γ o` with `γ = g_{w[0]} g_{w[1]} ... g_{w[k-1]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    pub word: Vec<usize>,
    pub point: HyperboloidPoint,
    pub dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupBall {
    pub points: Vec<BallPoint>,
    pub stats: WalkStats,
}

fn check_base(gens: &GeneratorSet, o: &HyperboloidPoint) -> Result<()> {
    if o.coords().len() != gens.form().dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.form().dim(),
            got: o.coords().len(),
        });
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive and finite"));
    }
    Ok(())
}

/// Calls `visit(point, d(o, point))` for every distinct `γ o` within `R`.
pub fn visit_group_ball(
    gens: &GeneratorSet,
    o: &HyperboloidPoint,
    radius: f64,
    opts: &WalkOptions,
    mut visit: impl FnMut(&[f64], f64),
) -> Result<WalkStats> {
    check_base(gens, o)?;
    check_radius(radius)?;
    let form = gens.form();
    word_walk(
        gens,
        o.coords().to_vec(),
        opts,
        |x| form.distance(o, &form.point_unchecked(x.clone())),
        |x, j| gens.generator(j).matrix().mul_vec(x),
        |x| quantize(x),
        |d| d <= radius + BALL_TOL,
        |x, d| {
            visit(x, d);
            Ok(())
        },
    )
}

/// All distinct orbit points within distance `R` of `o`, with a word for each.
pub fn enumerate_group_ball(
    gens: &GeneratorSet,
    o: &HyperboloidPoint,
    radius: f64,
    opts: &WalkOptions,
) -> Result<GroupBall> {
    check_base(gens, o)?;
    check_radius(radius)?;
    let form = gens.form();
    let mut points = Vec::new();
    let stats = word_walk(
        gens,
        (o.coords().to_vec(), Vec::<usize>::new()),
        opts,
        |(x, _)| form.distance(o, &form.point_unchecked(x.clone())),
        |(x, w), j| {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(j);
            word.extend_from_slice(w);
            (gens.generator(j).matrix().mul_vec(x), word)
        },
        |(x, _)| quantize(x),
        |d| d <= radius + BALL_TOL,
        |(x, w), d| {
            points.push(BallPoint {
                word: w.clone(),
                point: form.point_unchecked(x.clone()),
                dist: d,
            });
            Ok(())
        },
    )?;
    Ok(GroupBall { points, stats })
}

/// `Σ e^{-s d(o, γo)}` over the ball of radius `R`.
pub fn poincare_partial(
    gens: &GeneratorSet,
    o: &HyperboloidPoint,
    s: f64,
    radius: f64,
    opts: &WalkOptions,
) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument("exponent s must be non-negative"));
    }
    let mut terms = Vec::new();
    visit_group_ball(gens, o, radius, opts, |_, d| terms.push(d))?;
    // Sum small terms first.
    terms.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    Ok(terms.iter().map(|d| (-s * d).exp()).sum())
}

/// `#{γ : d(o, γo) <= R}` for each `R` in the grid, from a single walk.
pub fn group_growth(
    gens: &GeneratorSet,
    o: &HyperboloidPoint,
    grid: &[f64],
    opts: &WalkOptions,
) -> Result<CountSeries> {
    let top = *grid.last().ok_or(Error::InvalidArgument("empty radius grid"))?;
    let mut bins = vec![0u64; grid.len()];
    visit_group_ball(gens, o, top, opts, |_, d| {
        let k = grid.partition_point(|&r| r + BALL_TOL < d);
        if k < bins.len() {
            bins[k] += 1;
        }
    })?;
    let mut acc = 0;
    let counts = bins
        .iter()
        .map(|b| {
            acc += b;
            acc
        })
        .collect();
    CountSeries::new(grid.to_vec(), counts)
}

/// Slope of `log #{d(o, γo) <= R}` against `R`.
pub fn estimate_delta(
    gens: &GeneratorSet,
    o: &HyperboloidPoint,
    grid: &[f64],
    opts: &WalkOptions,
) -> Result<FitReport> {
    if grid.len() < 4 {
        return Err(Error::DegenerateFit("need at least 4 radii"));
    }
    let series = group_growth(gens, o, grid, opts)?;
    fit_exponential(&series, None)
}

/// An atom `w δ_{γo}` of the approximate Patterson-Sullivan measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: Vec<f64>,
    pub weight: f64,
}

/// `e^{-s d(x, γo)} / Σ_γ e^{-s d(o, γo)}` for every `γo` in the ball.
/// With `x = o` the weights sum to 1.
pub fn ps_density_approx(
    gens: &GeneratorSet,
    x: &HyperboloidPoint,
    o: &HyperboloidPoint,
    s: f64,
    radius: f64,
    opts: &WalkOptions,
) -> Result<Vec<Atom>> {
    let form = gens.form();
    let mut raw = Vec::new();
    visit_group_ball(gens, o, radius, opts, |p, d| raw.push((p.to_vec(), d)))?;
    let mut total = 0.0;
    let mut atoms = Vec::with_capacity(raw.len());
    for (p, d) in raw {
        total += (-s * d).exp();
        let dx = form.distance(x, &form.point_unchecked(p.clone()))?;
        atoms.push(Atom {
            point: p,
            weight: (-s * dx).exp(),
        });
    }
    for a in &mut atoms {
        a.weight /= total;
    }
    Ok(atoms)
}

// ---------------------------------------------------------------------------
// Vector orbits.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    Max,
    Euclidean,
}

impl Norm {
    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            Norm::Max => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Norm::Euclidean => norm(v),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::Max => "max",
            Norm::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Ok(Norm::Max),
            "euclidean" | "l2" => Ok(Norm::Euclidean),
            _ => Err(Error::InvalidArgument("norm must be max or euclidean")),
        }
    }
}

/// A round cone: directions within `radius` (radians) of `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    axis: Vec<f64>,
    radius: f64,
    cos_radius: f64,
}

impl Cone {
    pub fn new(axis: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= core::f64::consts::PI) {
            return Err(Error::InvalidArgument("cap radius must lie in (0, pi]"));
        }
        let len = norm(&axis);
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::ZeroVector);
        }
        Ok(Cone {
            axis: axis.iter().map(|a| a / len).collect(),
            radius,
            cos_radius: radius.cos(),
        })
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `angle(v, axis) <= radius`.
    pub fn contains(&self, v: &[f64]) -> bool {
        if self.radius >= core::f64::consts::PI {
            return true;
        }
        let len = norm(v);
        if len == 0.0 {
            return false;
        }
        let c: f64 = v.iter().zip(&self.axis).map(|(a, b)| a * b).sum::<f64>() / len;
        c >= self.cos_radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitVector {
    Exact(Vec<BigInt>),
    Float(Vec<f64>),
}

impl OrbitVector {
    pub fn len(&self) -> usize {
        match self {
            OrbitVector::Exact(v) => v.len(),
            OrbitVector::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            OrbitVector::Exact(v) => v.iter().map(|x| ToPrimitive::to_f64(x).unwrap_or(f64::NAN)).collect(),
            OrbitVector::Float(v) => v.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            OrbitVector::Exact(v) => v.iter().all(|x| x.is_zero()),
            OrbitVector::Float(v) => v.iter().all(|x| *x == 0.0),
        }
    }
}

/// `#{w ∈ w₀Γ : ‖w‖ < T}`, optionally restricted to a cone.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBallQuery {
    pub w0: OrbitVector,
    pub norm: Norm,
    pub t: f64,
    pub cone: Option<Cone>,
}

impl OrbitBallQuery {
    pub fn new(w0: OrbitVector, norm: Norm, t: f64, cone: Option<Cone>) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument("T must be positive and finite"));
        }
        if w0.is_zero() {
            return Err(Error::ZeroVector);
        }
        if let Some(c) = &cone {
            if c.axis().len() != w0.len() {
                return Err(Error::DimensionMismatch {
                    expected: w0.len(),
                    got: c.axis().len(),
                });
            }
        }
        Ok(OrbitBallQuery { w0, norm, t, cone })
    }
}

fn row_apply<C: Coord>(v: &[C], g: &[C], d: usize) -> Vec<C> {
    (0..d)
        .map(|j| (0..d).fold(C::zero(), |acc, k| acc + v[k].clone() * g[k * d + j].clone()))
        .collect()
}

fn quad<C: Coord>(v: &[C], g: &[C], d: usize) -> C {
    let mut acc = C::zero();
    for i in 0..d {
        for j in 0..d {
            acc = acc + v[i].clone() * g[i * d + j].clone() * v[j].clone();
        }
    }
    acc
}

fn max_row_sum(m: &[BigInt], d: usize) -> f64 {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| ToPrimitive::to_f64(&m[i * d + j].abs()).unwrap_or(f64::INFINITY))
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

/// Exact row-vector walk over `C`.
fn exact_vector_walk<C: Coord>(
    gens: &GeneratorSet,
    ints: &[Vec<BigInt>],
    w0: &[BigInt],
    norm_kind: Norm,
    bound: f64,
    opts: &WalkOptions,
    visit: &mut dyn FnMut(&[f64], f64),
) -> Result<WalkStats> {
    let d = w0.len();
    let conv = |v: &[BigInt]| -> Vec<C> { v.iter().map(|x| C::from_big(x).expect("range checked")).collect() };
    let mats: Vec<Vec<C>> = ints.iter().map(|m| conv(m)).collect();
    let gram: Option<Vec<C>> = gens.form().gram_integer().map(|g| conv(&g));
    let start = conv(w0);
    let target = gram.as_ref().map(|g| quad(&start, g, d));
    let to_f = |v: &[C]| -> Vec<f64> { v.iter().map(|x| x.to_f64()).collect() };
    word_walk(
        gens,
        start,
        opts,
        |v| Ok(norm_kind.eval(&to_f(v))),
        |v, j| row_apply(v, &mats[j], d),
        |v| Ok(v.clone()),
        |n| n < bound,
        |v, n| {
            if let (Some(g), Some(t)) = (&gram, &target) {
                if quad(v, g, d) != *t {
                    return Err(Error::InvariantViolation("form value changed along the orbit"));
                }
            }
            visit(&to_f(v), n);
            Ok(())
        },
    )
}

/// Calls `visit(v, ‖v‖)` for every distinct `v ∈ w₀Γ` with `‖v‖ < bound`.
pub fn visit_vector_orbit(
    gens: &GeneratorSet,
    w0: &OrbitVector,
    norm_kind: Norm,
    bound: f64,
    opts: &WalkOptions,
    mut visit: impl FnMut(&[f64], f64),
) -> Result<WalkStats> {
    let d = gens.form().dim();
    if w0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: w0.len(),
        });
    }
    if w0.is_zero() {
        return Err(Error::ZeroVector);
    }
    if let (OrbitVector::Exact(v), Some(ints)) = (w0, gens.integer_matrices()) {
        // Magnitudes never exceed max(|w0| A^(burn_in + 1), bound * A), where
        // A bounds the row sums; squares of accepted entries stay below bound^2.
        let a = ints.iter().map(|m| max_row_sum(m, d)).fold(1.0, f64::max);
        let w0_mag = v
            .iter()
            .map(|x| ToPrimitive::to_f64(&x.abs()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let reach = (w0_mag * a.powi(opts.burn_in as i32 + 1)).max(bound * a);
        let gram_mag = gens
            .form()
            .gram_integer()
            .map(|g| {
                g.iter()
                    .map(|x| ToPrimitive::to_f64(&x.abs()).unwrap_or(f64::INFINITY))
                    .fold(1.0, f64::max)
            })
            .unwrap_or(1.0);
        let square = reach * reach * gram_mag * (d * d) as f64;
        if reach < 2f64.powi(60) && square < 2f64.powi(120) {
            return exact_vector_walk::<i128>(gens, &ints, v, norm_kind, bound, opts, &mut visit);
        }
        return exact_vector_walk::<BigInt>(gens, &ints, v, norm_kind, bound, opts, &mut visit);
    }
    let start = w0.to_f64();
    let mats: Vec<Matrix> = gens.generators().iter().map(|g| g.matrix().transpose()).collect();
    word_walk(
        gens,
        start,
        opts,
        |v| Ok(norm_kind.eval(v)),
        |v, j| mats[j].mul_vec(v),
        |v| quantize(v),
        |n| n < bound,
        |v, n| {
            visit(v, n);
            Ok(())
        },
    )
}

/// Number of distinct orbit vectors matching the query.
pub fn count_vector_orbit(gens: &GeneratorSet, query: &OrbitBallQuery, opts: &WalkOptions) -> Result<u64> {
    let mut count = 0u64;
    visit_vector_orbit(gens, &query.w0, query.norm, query.t, opts, |v, _| {
        if query.cone.as_ref().map_or(true, |c| c.contains(v)) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Counts on a grid of bounds from a single walk.
pub fn count_series(
    gens: &GeneratorSet,
    w0: &OrbitVector,
    norm_kind: Norm,
    grid: &[f64],
    cone: Option<&Cone>,
    opts: &WalkOptions,
) -> Result<CountSeries> {
    let top = *grid.last().ok_or(Error::InvalidArgument("empty grid"))?;
    let mut bins = vec![0u64; grid.len()];
    visit_vector_orbit(gens, w0, norm_kind, top, opts, |v, n| {
        if cone.map_or(true, |c| c.contains(v)) {
            let k = grid.partition_point(|&t| t <= n);
            if k < bins.len() {
                bins[k] += 1;
            }
        }
    })?;
    let mut acc = 0;
    let counts = bins
        .iter()
        .map(|b| {
            acc += b;
            acc
        })
        .collect();
    CountSeries::new(grid.to_vec(), counts)
}

/// `(1,1,1,1)/√8` for the Descartes form, the form's reference point otherwise.
pub fn default_base_point(form: &QuadraticForm) -> HyperboloidPoint {
    if form.kind() == FormKind::Descartes {
        let c = 1.0 / 8f64.sqrt();
        return form.point_unchecked(vec![c; 4]);
    }
    form.base_point()
}
