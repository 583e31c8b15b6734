//! Property suites run by `orbitcount verify`.

use std::fmt;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use orbitcount_core::apollonian::{
    default_root, enumerate_packing, swap, DescartesQuadruple, PackingKind, SwapGenerator,
};
use orbitcount_core::chart::chart_defect;
use orbitcount_core::group::{
    a_flow, cartan_decompose, horospherical, iwasawa_decompose, omega0, rotation, GroupElement,
};
use orbitcount_core::linalg::{orthonormalize, Matrix};
use orbitcount_core::oracle::brute_force_packing;
use orbitcount_core::{BoundaryRay, HyperboloidPoint, Limits, QuadraticForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::genfile::GenFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Suite {
    /// Exact and numerical form preservation.
    Form,
    /// Involutive generators square to the identity.
    Involution,
    /// Cartan and Iwasawa round-trips.
    Decomp,
    /// Distance and Busemann identities.
    Geometry,
    /// Quadratic defect of the horospherical chart.
    Prop24,
    /// Pruned enumeration against brute force.
    Enumeration,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Form,
        Suite::Involution,
        Suite::Decomp,
        Suite::Geometry,
        Suite::Prop24,
        Suite::Enumeration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Form => "form",
            Suite::Involution => "involution",
            Suite::Decomp => "decomp",
            Suite::Geometry => "geometry",
            Suite::Prop24 => "prop24",
            Suite::Enumeration => "enumeration",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Generators to check in place of the built-in Apollonian swaps.
    pub gens: Option<GenFile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
    pub note: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{:<12} {status} ({} checks", self.suite.name(), self.checks)?;
        if let Some(n) = &self.note {
            write!(f, "; {n}")?;
        }
        write!(f, ")")?;
        for msg in self.failures.iter().take(10) {
            write!(f, "\n    {msg}")?;
        }
        if self.failures.len() > 10 {
            write!(f, "\n    ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}

struct Checker {
    checks: usize,
    failures: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn finish(self, suite: Suite, note: Option<String>) -> SuiteOutcome {
        SuiteOutcome {
            suite,
            checks: self.checks,
            failures: self.failures,
            note,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match suite {
        Suite::Form => form_suite(cfg, &mut rng),
        Suite::Involution => involution_suite(cfg, &mut rng),
        Suite::Decomp => decomp_suite(&mut rng),
        Suite::Geometry => geometry_suite(&mut rng),
        Suite::Prop24 => prop24_suite(),
        Suite::Enumeration => enumeration_suite(),
    }
}

pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Vec<SuiteOutcome> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn swap_matrix(g: &SwapGenerator) -> Vec<BigRational> {
    g.matrix()
        .iter()
        .flatten()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect()
}

fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = rng.gen_range(-1.0..1.0);
        }
    }
    let mut q = orthonormalize(&m);
    if q.det() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    rotation(&q).expect("orthonormal")
}

fn random_unipotent(n: usize, rng: &mut ChaCha8Rng) -> GroupElement {
    let v: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
    horospherical(&v)
}

fn random_point(q: &QuadraticForm, rng: &mut ChaCha8Rng, spread: f64) -> HyperboloidPoint {
    let n = q.n();
    let g = random_rotation(n, rng).compose(&a_flow(n, rng.gen_range(0.0..spread)));
    g.act(&q.base_point())
}

fn random_ray(q: &QuadraticForm, rng: &mut ChaCha8Rng) -> BoundaryRay {
    let mut x: Vec<f64> = (0..q.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let t = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.push(t);
    q.ray(x).expect("null by construction")
}

fn form_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut c = Checker::new();
    let note = match &cfg.gens {
        Some(file) => {
            for (k, m) in file.matrices.iter().enumerate() {
                c.check(file.form.preserved_by_exact(m.entries()), || {
                    format!("generator {} does not preserve the form exactly", k + 1)
                });
            }
            if c.failures.is_empty() {
                let built = file.generator_set();
                c.check(built.is_ok(), || {
                    format!("generator set rejected: {}", built.unwrap_err())
                });
            }
            Some("from generator file".to_string())
        }
        None => {
            let d = QuadraticForm::descartes();
            for g in SwapGenerator::all() {
                c.check(d.preserved_by_exact(&swap_matrix(&g)), || {
                    format!("S{} does not preserve the Descartes form", g.index())
                });
            }
            None
        }
    };
    // Long products of rotations and boosts stay in SO(n,1) numerically.
    for n in [2usize, 3, 4] {
        for _ in 0..50 {
            let mut g = GroupElement::identity(n);
            for _ in 0..8 {
                g = g
                    .compose(&random_rotation(n, rng))
                    .compose(&a_flow(n, rng.gen_range(-1.5..1.5)));
            }
            let scale = g.matrix()[(n, n)].powi(2).max(1.0);
            let defect = g.form_defect();
            c.check(defect <= 1e-9 * scale, || {
                format!("product in SO({n},1) has form defect {defect:e} (scale {scale:e})")
            });
        }
    }
    c.finish(Suite::Form, note)
}

fn quadruple_int(q: &DescartesQuadruple) -> [BigInt; 4] {
    q.curvatures().clone()
}

fn involution_suite(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut c = Checker::new();
    if let Some(file) = &cfg.gens {
        if !file.involutive {
            return c.finish(
                Suite::Involution,
                Some("skipped: generator file is not involutive".into()),
            );
        }
        for (k, m) in file.matrices.iter().enumerate() {
            c.check(m.mul(m).is_identity(), || {
                format!("generator {} does not square to the identity", k + 1)
            });
        }
        return c.finish(Suite::Involution, Some("from generator file".into()));
    }
    for g in SwapGenerator::all() {
        let m = g.matrix();
        let mut sq = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                sq[i][j] = (0..4).map(|k| m[i][k] * m[k][j]).sum();
            }
        }
        let id: [[i64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j)));
        c.check(sq == id, || format!("S{}^2 != I", g.index()));
    }
    for kind in [PackingKind::Euclidean, PackingKind::Hyperbolic] {
        let root = default_root(kind).expect("default root");
        for _ in 0..100 {
            let mut q = root.clone();
            let mut last = 0;
            for _ in 0..rng.gen_range(1..25) {
                let mut i = rng.gen_range(1..=4);
                while i == last {
                    i = rng.gen_range(1..=4);
                }
                q = swap(&q, i).expect("swap preserves Q");
                last = i;
            }
            for i in 1..=4 {
                let back = swap(&swap(&q, i).expect("swap"), i).expect("swap");
                c.check(quadruple_int(&back) == quadruple_int(&q), || {
                    format!("swap {i} is not an involution at {q}")
                });
            }
        }
    }
    c.finish(Suite::Involution, None)
}

fn decomp_suite(rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut c = Checker::new();
    for n in [2usize, 3] {
        let qf = QuadraticForm::lorentz(n).expect("n >= 1");
        for _ in 0..100 {
            let r = rng.gen_range(0.0..6.0);
            let g = random_rotation(n, rng)
                .compose(&a_flow(n, r))
                .compose(&random_rotation(n, rng));
            match cartan_decompose(&g) {
                Ok(t) => {
                    let err = t.reconstruct().max_abs_diff(&g);
                    let scale = g.matrix()[(n, n)];
                    c.check((t.r - r).abs() < 1e-9, || {
                        format!("Cartan r = {} for {r} (n = {n})", t.r)
                    });
                    c.check(err < 1e-8 * scale, || {
                        format!("Cartan reconstruction error {err:e} (n = {n})")
                    });
                    let d = qf
                        .distance(&qf.base_point(), &g.act(&qf.base_point()))
                        .unwrap_or(f64::NAN);
                    c.check((t.r - d).abs() < 1e-9, || {
                        format!("Cartan r = {} but d(o, g o) = {d}", t.r)
                    });
                }
                Err(e) => c.check(false, || format!("Cartan decomposition failed: {e}")),
            }
        }
        for _ in 0..100 {
            let r = rng.gen_range(-4.0..4.0);
            let nu = random_unipotent(n, rng);
            let k = random_rotation(n, rng);
            let g = nu.compose(&a_flow(n, r)).compose(&k);
            match iwasawa_decompose(&g) {
                Ok(t) => {
                    let scale = g.matrix()[(n, n)].max(1.0);
                    let err = t.reconstruct().max_abs_diff(&g);
                    c.check((t.r - r).abs() < 1e-9, || {
                        format!("Iwasawa r = {} for {r} (n = {n})", t.r)
                    });
                    c.check(t.nu.max_abs_diff(&nu) < 1e-8 && t.k.max_abs_diff(&k) < 1e-8, || {
                        format!("Iwasawa factors differ (n = {n}, r = {r})")
                    });
                    c.check(err < 1e-8 * scale, || {
                        format!("Iwasawa reconstruction error {err:e} (n = {n})")
                    });
                }
                Err(e) => c.check(false, || format!("Iwasawa decomposition failed: {e}")),
            }
        }
        let w = omega0(n).expect("n >= 2");
        let conj = w.compose(&a_flow(n, 0.9)).compose(&w.inverse());
        c.check(conj.max_abs_diff(&a_flow(n, -0.9)) < 1e-12, || {
            "omega0 does not invert a_r".into()
        });
    }
    c.finish(Suite::Decomp, None)
}

fn geometry_suite(rng: &mut ChaCha8Rng) -> SuiteOutcome {
    let mut c = Checker::new();
    let q2 = QuadraticForm::lorentz(2).expect("n = 2");
    for r in [0.7f64, 1.5, 3.0] {
        // u = a_r: β_{u⁻}(o, π(u)) = −r
        let res = q2
            .point(vec![r.sinh(), 0.0, r.cosh()])
            .and_then(|base| q2.tangent(base, vec![r.cosh(), 0.0, r.sinh()]))
            .and_then(|u| {
                let minus = q2.backward_endpoint(&u)?;
                q2.busemann(&minus, &q2.base_point(), u.base())
            });
        match res {
            Ok(b) => c.check((b + r).abs() < 1e-9, || {
                format!("Busemann at r = {r}: {b}, expected {}", -r)
            }),
            Err(e) => c.check(false, || format!("Busemann check at r = {r} failed: {e}")),
        }
    }
    let q = QuadraticForm::lorentz(3).expect("n = 3");
    for _ in 0..1000 {
        let x = random_point(&q, rng, 3.0);
        let y = random_point(&q, rng, 3.0);
        let z = random_point(&q, rng, 3.0);
        let xi = random_ray(&q, rng);
        let (Ok(dxy), Ok(dyx), Ok(dxz), Ok(dyz)) = (
            q.distance(&x, &y),
            q.distance(&y, &x),
            q.distance(&x, &z),
            q.distance(&y, &z),
        ) else {
            c.check(false, || "distance failed on random points".into());
            continue;
        };
        let (Ok(bxy), Ok(byz), Ok(bxz)) = (
            q.busemann(&xi, &x, &y),
            q.busemann(&xi, &y, &z),
            q.busemann(&xi, &x, &z),
        ) else {
            c.check(false, || "Busemann function failed on random points".into());
            continue;
        };
        c.check((bxz - bxy - byz).abs() < 1e-9, || {
            format!("cocycle defect {:e}", bxz - bxy - byz)
        });
        c.check(bxy.abs() <= dxy + 1e-9, || format!("|β| = {} > d = {dxy}", bxy.abs()));
        c.check(dxy == dyx, || format!("distance not symmetric: {dxy} vs {dyx}"));
        c.check(dxz <= dxy + dyz + 1e-9, || {
            format!("triangle inequality fails: {dxz} > {dxy} + {dyz}")
        });
    }
    c.finish(Suite::Geometry, None)
}

fn prop24_suite() -> SuiteOutcome {
    let mut c = Checker::new();
    for k in -50..=50 {
        let t = 0.25 * k as f64 / 50.0;
        match chart_defect(t) {
            Ok((g, s)) => {
                c.check(g.abs() <= 2.0 * t * t + 1e-15, || {
                    format!("|ℓ_geodesic({t})| = {} > 2t²", g.abs())
                });
                c.check(s.abs() <= 2.0 * t * t + 1e-15, || {
                    format!("|ℓ_sphere({t})| = {} > 2t²", s.abs())
                });
            }
            Err(e) => c.check(false, || format!("chart defect at t = {t} failed: {e}")),
        }
    }
    let t: f64 = 0.05;
    match chart_defect(t) {
        Ok((g, s)) => {
            let rg = g / (t * t);
            let rs = -s / (t * t);
            c.check((0.99..=1.01).contains(&rg), || {
                format!("ℓ_geodesic(t)/t² = {rg} at t = {t}")
            });
            c.check((0.99..=1.01).contains(&rs), || {
                format!("-ℓ_sphere(t)/t² = {rs} at t = {t}")
            });
        }
        Err(e) => c.check(false, || format!("chart defect at t = {t} failed: {e}")),
    }
    c.finish(Suite::Prop24, None)
}

/// Pruned walk against hash-set brute force, as curvature multisets.
pub fn enumeration_matches(root: &DescartesQuadruple, t: i64) -> Result<bool, String> {
    let bound = BigInt::from(t);
    let limits = Limits::default();
    let mut pruned: Vec<BigInt> = enumerate_packing(root, &bound, &limits)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|e| e.new_curvature().clone())
        .collect();
    pruned.sort();
    let brute = brute_force_packing(root, &bound, &limits).map_err(|e| e.to_string())?;
    Ok(pruned == brute)
}

fn enumeration_suite() -> SuiteOutcome {
    let mut c = Checker::new();
    for kind in [PackingKind::Euclidean, PackingKind::Hyperbolic] {
        let root = default_root(kind).expect("default root");
        for t in [50, 200, 1000] {
            let res = enumeration_matches(&root, t);
            c.check(res == Ok(true), || match res {
                Ok(_) => format!("{kind} root {root}, T = {t}: multisets differ"),
                Err(e) => format!("{kind} root {root}, T = {t}: {e}"),
            });
        }
    }
    c.finish(Suite::Enumeration, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_suites_pass() {
        let cfg = VerifyConfig::default();
        for s in Suite::ALL {
            let out = run_suite(s, &cfg);
            assert!(out.passed(), "{out}");
            assert!(out.checks > 0);
        }
    }

    #[test]
    fn corrupted_generator_fails_involution() {
        let text = include_str!("../data/apollonian.gens").replacen("2,0,1,0", "2,0,2,0", 1);
        let cfg = VerifyConfig {
            seed: 0,
            gens: Some(GenFile::parse(&text).unwrap()),
        };
        let inv = run_suite(Suite::Involution, &cfg);
        assert!(!inv.passed());
        assert_eq!(inv.failures.len(), 1);
        assert!(!run_suite(Suite::Form, &cfg).passed());
    }

    #[test]
    fn non_involutive_file_skips() {
        let cfg = VerifyConfig {
            seed: 0,
            gens: Some(GenFile::parse(include_str!("../data/cyclic_loxodromic.gens")).unwrap()),
        };
        let out = run_suite(Suite::Involution, &cfg);
        assert!(out.passed() && out.checks == 0);
        assert!(run_suite(Suite::Form, &cfg).passed());
    }

    #[test]
    fn seeds_change_sampling_only() {
        let a = run_suite(Suite::Geometry, &VerifyConfig { seed: 1, gens: None });
        let b = run_suite(Suite::Geometry, &VerifyConfig { seed: 2, gens: None });
        assert!(a.passed() && b.passed());
        assert_eq!(a.checks, b.checks);
    }
}
