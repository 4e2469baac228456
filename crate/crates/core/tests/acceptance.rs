//! Acceptance suite: one PASS/FAIL line per criterion on stdout.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use packlab::coxeter::{build_polytope, catalog_polytope, is_packing_polytope, maxwell_level, MaxwellLevel};
use packlab::exponent::{counting_function, default_grid, fit_exponent};
use packlab::inversive::EuclideanSphere;
use packlab::lattice::{a_dual_basis, a_dual_lattice, apollonian_lattice, discriminant_group, gram_in_basis, rescale};
use packlab::orbit::{cluster_orbit, enumerate_packing, member_cluster, seed_cluster_from_curvatures, EnumerationOptions};
use packlab::surface::{builtin_model, estimate_surface_exponent, verify_model, OrbitCount};
use packlab::{rat, ratio, ExactVector, Rational, RationalMatrix};

/// Writes past the test harness capture so every line reaches the log.
fn report(n: usize, title: &str, pass: bool, detail: &str) {
    let mark = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n:>2} {mark}: {title} ({detail})");
    let _ = out.flush();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn ks(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn gasket_spheres() -> Vec<EuclideanSphere> {
    vec![
        EuclideanSphere::sphere(rat(-10), vec![rat(0), rat(0)]).unwrap(),
        EuclideanSphere::sphere(rat(18), vec![ratio(2, 45), rat(0)]).unwrap(),
        EuclideanSphere::sphere(rat(23), vec![ratio(-6, 115), ratio(1, 46)]).unwrap(),
        EuclideanSphere::sphere(rat(27), vec![ratio(-4, 135), ratio(-1, 18)]).unwrap(),
    ]
}

#[test]
fn criterion_01_descartes_quadruple() {
    let k = [-10i64, 18, 23, 27];
    let sum: i64 = k.iter().sum();
    let squares: i64 = k.iter().map(|x| x * x).sum();
    let residual = 2 * squares - sum * sum;
    report(1, "Descartes identity for (-10,18,23,27)", residual == 0, &format!("2*{squares} - {sum}^2 = {residual}"));
}

#[test]
fn criterion_02_soddy_suite() {
    let seeds = [("apollonian2", ks(&[-10, 18, 23, 27])), ("apollonian3", ks(&[-1, 2, 2, 3, 3])), ("boyd", ks(&[-1, 2, 4, 3]))];
    let mut details = Vec::new();
    let mut pass = true;
    for (name, k) in seeds {
        let p = catalog_polytope(name).unwrap();
        let seed = seed_cluster_from_curvatures(&p, &k, None).unwrap();
        let clusters = cluster_orbit(&seed, 64, 10_000).unwrap();
        let soddy = clusters.iter().all(|c| c.soddy_residual() == Some(rat(0)));
        let grams = clusters.iter().all(|c| &c.member_gram().unwrap() == c.expected_gram());
        pass &= clusters.len() >= 10_000 && soddy && grams;
        details.push(format!("{name}: {} clusters, soddy {soddy}, gram {grams}", clusters.len()));
    }
    report(2, "Soddy property over 10^4 clusters per seed", pass, &details.join("; "));
}

/// Curvature and scaled curvature-center of a circle, all integral for this seed.
type Circle = (i128, i128, i128);

/// Every reduced word up to `depth`, by the Descartes swap on curvatures and
/// curvature-weighted centers, scaled by 10 to stay integral.
fn descartes_oracle(depth: usize, bound: i128) -> BTreeSet<Circle> {
    fn walk(q: [Circle; 4], last: Option<usize>, left: usize, bound: i128, out: &mut BTreeSet<Circle>) {
        for c in q {
            if c.0 > 0 && c.0 <= bound {
                out.insert(c);
            }
        }
        if left == 0 {
            return;
        }
        for i in 0..4 {
            if Some(i) == last {
                continue;
            }
            let mut r = q;
            let others = |f: fn(&Circle) -> i128| (0..4).filter(|&j| j != i).map(|j| f(&q[j])).sum::<i128>();
            r[i] = (
                2 * others(|c| c.0) - q[i].0,
                2 * others(|c| c.1) - q[i].1,
                2 * others(|c| c.2) - q[i].2,
            );
            walk(r, Some(i), left - 1, bound, out);
        }
    }
    // (k, 10 k x, 10 k y)
    let seed = [(-10, 0, 0), (18, 8, 0), (23, -12, 5), (27, -8, -15)];
    let mut out = BTreeSet::new();
    walk(seed, None, depth, bound, &mut out);
    out
}

fn enumerated_circles(threads: usize, t: i64) -> BTreeSet<Circle> {
    let p = catalog_polytope("apollonian2").unwrap();
    let seed = seed_cluster_from_curvatures(&p, &ks(&[-10, 18, 23, 27]), Some(&gasket_spheres())).unwrap();
    let orbit = enumerate_packing(&p, &seed, &EnumerationOptions::bounded(rat(t)).with_threads(threads)).unwrap();
    assert!(!orbit.truncated);
    let as_int = |q: Rational| -> i128 {
        assert!(q.is_integer());
        i128::try_from(q.to_integer()).unwrap()
    };
    orbit
        .euclidean_spheres()
        .unwrap()
        .into_iter()
        .filter(|s| s.curvature().is_positive())
        .map(|s| {
            let k = s.curvature();
            let c = s.center().unwrap();
            let scaled = |x: &Rational| as_int(&k * x * rat(10));
            (as_int(k.clone()), scaled(&c[0]), scaled(&c[1]))
        })
        .collect()
}

#[test]
fn criterion_03_oracle_equivalence() {
    let oracle = descartes_oracle(12, 200);
    let mut pass = true;
    let mut details = Vec::new();
    for t in [30i64, 35, 50, 200] {
        let mine = enumerated_circles(4, t);
        let want: BTreeSet<Circle> = oracle.iter().filter(|c| c.0 <= t as i128).copied().collect();
        pass &= mine == want;
        details.push(format!("N({t})={}/{}", mine.len(), want.len()));
    }
    let firsts: Vec<usize> = [30, 35, 50].iter().map(|&t| oracle.iter().filter(|c| c.0 <= t).count()).collect();
    pass &= firsts == [3, 4, 5];
    report(3, "bounded enumeration equals depth-12 Descartes oracle", pass, &details.join(", "));
}

#[test]
fn criterion_04_apollonian_exponent() {
    let p = catalog_polytope("apollonian2").unwrap();
    let seed = seed_cluster_from_curvatures(&p, &ks(&[-10, 18, 23, 27]), Some(&gasket_spheres())).unwrap();
    let t = 100_000.0;
    let orbit = enumerate_packing(&p, &seed, &EnumerationOptions::bounded(rat(100_000))).unwrap();
    let curve = counting_function(&orbit.positive_curvatures(), &default_grid(18.0, t)).unwrap();
    let fit = fit_exponent(&curve, 2.0).unwrap();
    let pass = !orbit.truncated && (1.26..=1.36).contains(&fit.delta_hat);
    report(
        4,
        "Apollonian exponent at T = 1e5 within [1.26, 1.36]",
        pass,
        &format!("delta = {:.4} +- {:.4}, {} circles", fit.delta_hat, fit.stderr, orbit.count_at_most(&rat(100_000))),
    );
}

#[test]
fn criterion_05_levels() {
    let minus_two = {
        let mut m = RationalMatrix::identity(6);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    m[(i, j)] = rat(-2);
                }
            }
        }
        m
    };
    let l4 = maxwell_level(&RationalMatrix::circulant(&ks(&[1, -1, -1, -1]))).unwrap();
    let l3 = maxwell_level(&RationalMatrix::circulant(&ks(&[1, -1, -1]))).unwrap();
    let l2 = maxwell_level(&RationalMatrix::identity(2)).unwrap();
    let accepted = ["apollonian2", "apollonian3", "boyd"]
        .iter()
        .all(|n| is_packing_polytope(&catalog_polytope(n).unwrap()));
    let rejected = !is_packing_polytope(&build_polytope(minus_two).unwrap());
    let pass = l4 == MaxwellLevel::Level(2) && l3 == MaxwellLevel::Level(1) && l2 == MaxwellLevel::Level(0) && accepted && rejected;
    report(5, "Maxwell levels and packing test", pass, &format!("{l4}, {l3}, {l2}, accept {accepted}, reject {rejected}"));
}

#[test]
fn criterion_06_lattice_identities() {
    let mut pass = true;
    let mut details = Vec::new();
    for n in 2..=5usize {
        let disc = discriminant_group(&apollonian_lattice(n).unwrap()).unwrap();
        let mut orders = vec![2i64; n];
        orders.push(2 * n as i64);
        let want = packlab::lattice::DiscriminantGroup::from_cyclic_orders(&orders);
        pass &= disc == want;
        details.push(format!("Ap({n}): {disc}"));
    }
    let cols = [
        [1, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [-1, 0, -1, 0, 0, 0],
        [1, 1, 1, -1, 0, 0],
        [0, 0, 0, 1, -1, 0],
        [0, 0, 0, 0, 1, -1],
    ];
    let b = RationalMatrix::from_columns(&cols.iter().map(|c| ExactVector::from_i64(c)).collect::<Vec<_>>()).unwrap();
    let f_gram = gram_in_basis(&apollonian_lattice(4).unwrap(), &b, false).unwrap();
    let block = RationalMatrix::from_i64(&[
        &[1, 0, 0, 0, 0, 0],
        &[0, 0, 2, 0, 0, 0],
        &[0, 2, 0, 0, 0, 0],
        &[0, 0, 0, 4, -2, 0],
        &[0, 0, 0, -2, 4, -2],
        &[0, 0, 0, 0, -2, 4],
    ]);
    pass &= f_gram == block;
    details.push(format!("f-basis block {}", f_gram == block));
    for n in 3..=6i64 {
        let m = (n - 1) as usize;
        let l = rescale(&a_dual_lattice(m).unwrap(), &rat(n)).unwrap();
        let g = gram_in_basis(&l, &a_dual_basis(n as usize).unwrap(), false).unwrap();
        let mut want = RationalMatrix::zeros(m, m);
        for i in 0..m {
            want[(i, i)] = rat(2 * n);
            if i + 1 < m {
                want[(i, i + 1)] = rat(-n);
                want[(i + 1, i)] = rat(-n);
            }
        }
        want[(m - 1, m - 2)] = rat(n);
        want[(m - 2, m - 1)] = rat(n);
        want[(m - 1, m - 1)] = rat(n - 1);
        pass &= g == want;
        details.push(format!("n={n} corner {}", g[(m - 1, m - 1)]));
    }
    report(6, "discriminant groups, f-basis block, dual A basis", pass, &details.join("; "));
}

#[test]
fn criterion_07_k3_models() {
    let p2p2 = verify_model(&builtin_model("baragar_p2p2").unwrap()).unwrap();
    let m222 = verify_model(&builtin_model("baragar_222").unwrap()).unwrap();
    let failed: Vec<String> = p2p2.checks.iter().chain(&m222.checks).filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let pass = p2p2.passed() && m222.passed() && p2p2.checks.len() == 7 && m222.checks.len() == 9;
    let detail = if failed.is_empty() {
        format!("{} + {} exact checks", p2p2.checks.len(), m222.checks.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    report(7, "K3 model generators, reflection words and alpha Grams", pass, &detail);
}

/// Surface runs keyed by model, H index and thread count, shared with criterion 9.
fn surface_run(model: &str, second_h: bool, threads: usize) -> (f64, OrbitCount) {
    type Runs = std::sync::Mutex<Vec<((String, bool, usize), (f64, OrbitCount))>>;
    static RUNS: OnceLock<Runs> = OnceLock::new();
    let runs = RUNS.get_or_init(Default::default);
    let key = (model.to_string(), second_h, threads);
    if let Some((_, v)) = runs.lock().unwrap().iter().find(|(k, _)| *k == key) {
        return v.clone();
    }
    let (t, h2) = match model {
        "baragar_p2p2" => (rat(100_000_000), ExactVector::from_i64(&[1, 1, 2])),
        _ => (rat(100_000), ExactVector::from_i64(&[1, 1, 2, 0])),
    };
    let mut m = builtin_model(model).unwrap();
    if second_h {
        m = m.with_h(h2).unwrap();
    }
    let c = m.c.clone();
    let (est, count) = estimate_surface_exponent(&m, &c, &t, &rat(2), Some(threads)).unwrap();
    let v = (est.delta_hat, count);
    runs.lock().unwrap().push((key, v.clone()));
    v
}

#[test]
fn criterion_08_surface_exponents() {
    let mut pass = true;
    let mut details = Vec::new();
    for (model, range) in [("baragar_p2p2", 0.60..=0.70), ("baragar_222", 1.20..=1.40)] {
        let (d1, c1) = surface_run(model, false, 8);
        let (d2, c2) = surface_run(model, true, 8);
        let ok = range.contains(&d1) && range.contains(&d2) && (d1 - d2).abs() < 0.05 && !c1.truncated && !c2.truncated;
        pass &= ok;
        details.push(format!("{model}: {d1:.4} / {d2:.4} over {} / {} points", c1.count(), c2.count()));
    }
    report(8, "surface exponents within the desk-scale brackets", pass, &details.join("; "));
}

#[test]
fn criterion_09_determinism() {
    let reference = enumerated_circles(1, 200);
    let circles = [2, 8].iter().all(|&t| enumerated_circles(t, 200) == reference);
    let mut surfaces = true;
    for model in ["baragar_p2p2", "baragar_222"] {
        let (d1, c1) = surface_run(model, false, 1);
        for threads in [2, 8] {
            let (d, c) = surface_run(model, false, threads);
            surfaces &= d == d1 && c.heights == c1.heights && c.truncated == c1.truncated;
        }
    }
    report(9, "identical output for 1, 2 and 8 threads", circles && surfaces, &format!("circles {circles}, surfaces {surfaces}"));
}

#[test]
fn criterion_10_ideal_triangle_invariant() {
    let p = catalog_polytope("ideal-triangle").unwrap();
    let seed = member_cluster(&p, &ks(&[1, -2, -2])).unwrap();
    let clusters = cluster_orbit(&seed, 64, 2_000).unwrap();
    let holds = clusters.iter().all(|c| {
        let k = c.curvatures().unwrap();
        (&k[0] * &k[1] + &k[0] * &k[2] + &k[1] * &k[2]).is_zero()
    });
    let pass = clusters.len() >= 1_000 && holds;
    report(10, "k1k2 + k1k3 + k2k3 = 0 along ideal triangle orbits", pass, &format!("{} words", clusters.len()));
}
