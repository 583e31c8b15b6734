use num_bigint::BigInt;
use orbitcount_core::apollonian::{enumerate_packing, root_reduce, swap, CirclePlan, DescartesQuadruple, PackingKind};
use orbitcount_core::oracle::{brute_force_integer_orbit, brute_force_packing};
use orbitcount_core::orbit::{
    default_base_point, enumerate_group_ball, visit_vector_orbit, GeneratorSet, Norm, OrbitVector, WalkOptions,
};
use orbitcount_core::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small root quadruples of each kind, found by exhaustive search.
fn small_roots(kind: PackingKind) -> Vec<DescartesQuadruple> {
    let mut out = Vec::new();
    for a in -4i64..=6 {
        for b in a..=10 {
            for c in b..=12 {
                for d in c..=14 {
                    let Ok(q) = DescartesQuadruple::from_i64([a, b, c, d], kind) else {
                        continue;
                    };
                    if root_reduce(&q).unwrap().curvatures() == q.curvatures() {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

fn pruned(root: &DescartesQuadruple, t: i64) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = enumerate_packing(root, &BigInt::from(t), &Limits::default())
        .unwrap()
        .iter()
        .map(|e| e.new_curvature().clone())
        .collect();
    v.sort();
    v
}

#[test]
fn pruned_walk_matches_brute_force_on_many_roots() {
    for kind in PackingKind::all() {
        let roots = small_roots(kind);
        assert!(roots.len() >= 3, "{kind}: {} roots", roots.len());
        for root in roots.iter().take(12) {
            let brute = brute_force_packing(root, &BigInt::from(80), &Limits::default()).unwrap();
            assert_eq!(pruned(root, 80), brute, "{kind} root {root}");
            let plan = CirclePlan::from_bounds(root.clone(), vec![BigInt::from(40), BigInt::from(80)]).unwrap();
            let (hist, _) = plan.run(&Limits::default()).unwrap();
            let below = |t: i64| {
                let entries = root
                    .curvatures()
                    .iter()
                    .filter(|c| **c < BigInt::from(t) && **c > BigInt::from(-t));
                (entries.count() + brute.iter().filter(|c| **c < BigInt::from(t)).count()) as u64
            };
            assert_eq!(hist.cumulative(), vec![below(40), below(80)], "{kind} root {root}");
        }
    }
}

#[test]
fn random_orbit_members_reduce_to_their_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in PackingKind::all() {
        for root in small_roots(kind).iter().take(6) {
            for _ in 0..30 {
                let mut q = root.clone();
                let mut last = 0;
                for _ in 0..rng.gen_range(1..30) {
                    let mut i = rng.gen_range(1..=4);
                    while i == last {
                        i = rng.gen_range(1..=4);
                    }
                    q = swap(&q, i).unwrap();
                    last = i;
                }
                let r = root_reduce(&q).unwrap();
                // Hyperbolic orbits can hold several sum-minimizing quadruples.
                if kind != PackingKind::Hyperbolic {
                    assert_eq!(r.sorted().curvatures(), root.sorted().curvatures(), "{kind} from {q}");
                }
                assert_eq!(root_reduce(&r).unwrap().curvatures(), r.curvatures());
                assert_eq!(pruned(&r, 40), pruned(root, 40), "{kind}: {q} reduces to {r}");
            }
        }
    }
}

#[test]
fn apollonian_ball_of_radius_6_matches_integer_words() {
    // γ(1,1,1,1) is integral and cosh d(o, γo) = sum/4 for o = (1,1,1,1)/√8.
    // The farthest points of this ball need words of length 14.
    let gens = GeneratorSet::apollonian();
    let o = default_base_point(gens.form());
    let r = 6.0f64;
    let ball = enumerate_group_ball(&gens, &o, r, &WalkOptions::default()).unwrap();
    let limit = 4.0 * r.cosh() * (1.0 + 1e-12);
    let keep = |v: &[i64]| (v.iter().sum::<i64>() as f64) <= limit;
    let brute = brute_force_integer_orbit(&gens, &[1, 1, 1, 1], 14, keep).unwrap();
    assert_eq!(ball.points.len(), brute.len());
    assert_eq!(brute.len(), 1289);
    let shallow = brute_force_integer_orbit(&gens, &[1, 1, 1, 1], 12, keep).unwrap();
    assert!(shallow.len() < brute.len());
    let mut from_ball: Vec<Vec<i64>> = ball
        .points
        .iter()
        .map(|p| {
            p.point
                .coords()
                .iter()
                .map(|x| (x * 8f64.sqrt()).round() as i64)
                .collect()
        })
        .collect();
    from_ball.sort();
    assert_eq!(from_ball, brute);
}

#[test]
fn quantized_dedupe_agrees_with_exact_keys() {
    let gens = GeneratorSet::apollonian();
    let opts = WalkOptions::default();
    for (w, t) in [([-1i64, 2, 2, 3], 5e3), ([0, 0, 1, 1], 5e3), ([-2, 3, 6, 7], 2e3)] {
        for norm in [Norm::Max, Norm::Euclidean] {
            let exact = OrbitVector::Exact(w.iter().map(|&x| BigInt::from(x)).collect());
            let float = OrbitVector::Float(w.iter().map(|&x| x as f64).collect());
            let mut a: Vec<Vec<i64>> = Vec::new();
            let mut b: Vec<Vec<i64>> = Vec::new();
            visit_vector_orbit(&gens, &exact, norm, t, &opts, |v, _| {
                a.push(v.iter().map(|x| *x as i64).collect())
            })
            .unwrap();
            visit_vector_orbit(&gens, &float, norm, t, &opts, |v, _| {
                b.push(v.iter().map(|x| x.round() as i64).collect())
            })
            .unwrap();
            a.sort();
            b.sort();
            assert!(!a.is_empty());
            assert_eq!(a, b, "{w:?} {norm}");
        }
    }
}
