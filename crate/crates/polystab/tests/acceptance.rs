//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polystab_core::cone::Cone;
use polystab_core::exact::{CRat, Matrix, QVec, Rat};
use polystab_core::moment::MomentMapModel;
use polystab_core::poly::{Poly, Root};
use polystab_core::presets::{cross_weights, p1p1_oracle, EXAMPLE_SUPPORT_INDEX};
use polystab_core::stability::{self, FutakiOracle, Status};
use polystab_core::toric::{AffineFn, Polygon};
use polystab_core::{DeformationModel, Support};

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn r(n: i64, d: i64) -> Rat {
    Rat::frac(n, d)
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> QVec {
    QVec::new((0..dim).map(|_| Rat::int(rng.gen_range(-bound..=bound))).collect())
}

fn random_nonzero(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> QVec {
    loop {
        let v = random_vec(rng, dim, bound);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Distinct nonzero weights, each switched on with probability 3/4.
fn random_model(rng: &mut ChaCha8Rng, max_dim: usize, max_weights: usize, bound: i64) -> DeformationModel {
    let dim = rng.gen_range(1..=max_dim);
    let count = rng.gen_range(1..=max_weights);
    let mut weights: Vec<QVec> = Vec::new();
    while weights.len() < count {
        let w = random_nonzero(rng, dim, bound);
        if !weights.contains(&w) {
            weights.push(w);
        }
        if weights.len() >= (2 * bound as usize + 1).pow(dim as u32) - 1 {
            break;
        }
    }
    let coefficients = weights
        .iter()
        .map(|_| {
            if rng.gen_ratio(3, 4) {
                CRat::new(Rat::int(rng.gen_range(1..=5)), Rat::int(rng.gen_range(-2..=2)))
            } else {
                CRat::default()
            }
        })
        .collect();
    DeformationModel::new(dim, weights, coefficients, None).expect("valid random model")
}

fn example_model(coefficient: CRat) -> DeformationModel {
    let mut c = vec![CRat::default(); 4];
    c[EXAMPLE_SUPPORT_INDEX] = coefficient;
    DeformationModel::new(2, cross_weights(), c, None).unwrap()
}

fn criterion_1() -> Result<(), String> {
    let oracle = p1p1_oracle(&r(1, 4)).map_err(|e| e.to_string())?;
    let (alpha, beta) = (QVec::from_ints(&[1, 0]), QVec::from_ints(&[0, 1]));
    let fut = |v: &QVec, e: &Rat| oracle.futaki(v, e).unwrap();
    for e in [r(-1, 10), Rat::zero(), r(1, 10)] {
        ensure!(fut(&alpha, &e).is_zero(), "Fut(v_alpha; {e}) = {}", fut(&alpha, &e));
    }
    ensure!(fut(&beta, &Rat::zero()).is_zero(), "Fut(v_beta; 0) = {}", fut(&beta, &Rat::zero()));
    ensure!(fut(&beta, &r(1, 10)).signum() == -1, "Fut(v_beta; 1/10) = {}", fut(&beta, &r(1, 10)));
    ensure!(fut(&beta, &r(-1, 10)).signum() == 1, "Fut(v_beta; -1/10) = {}", fut(&beta, &r(-1, 10)));
    let m = example_model(CRat::real(Rat::one()));
    let expected = [
        (r(-1, 10), Status::Polystable_cscK),
        (Rat::zero(), Status::StrictlySemistable),
        (r(1, 10), Status::Unstable),
    ];
    for (e, status) in expected {
        let v = stability::verdict(&m, &oracle, &e).map_err(|e| e.to_string())?;
        ensure!(v.status == status, "verdict at {e}: {} instead of {status}", v.status);
        if status == Status::Unstable {
            ensure!(
                v.violations().any(|w| w.v == beta),
                "unstable verdict at {e} lacks the witness (0, 1)"
            );
        }
    }
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    let oracle = p1p1_oracle(&r(1, 4)).map_err(|e| e.to_string())?;
    let m = example_model(CRat::real(Rat::one()));
    let report = stability::sweep(&m, &oracle, &r(-1, 10), &r(1, 10), 100).map_err(|e| e.to_string())?;
    ensure!(report.points.len() == 101, "{} grid points", report.points.len());
    ensure!(report.walls.len() == 1, "{} walls: {:?}", report.walls.len(), report.walls);
    ensure!(
        report.walls[0].location == Root::Exact(Rat::zero()),
        "wall at {:?}",
        report.walls[0].location
    );
    Ok(())
}

fn criterion_3() -> Result<(), String> {
    let mut rng = rng(3);
    for case in 0..50 {
        let dim = rng.gen_range(1..=4);
        let count = rng.gen_range(1..=6);
        let gens: Vec<QVec> = (0..count).map(|_| random_nonzero(&mut rng, dim, 5)).collect();
        let cone = Cone::new(dim, gens.clone()).map_err(|e| e.to_string())?;
        let dual = cone.dual();
        ensure!(dual.dual().set_eq(&cone), "case {case}: dual of dual differs for {gens:?}");
        ensure!(
            cone.is_strongly_convex() == (dual.cone_dim() == dim),
            "case {case}: strong convexity vs full-dimensional dual for {gens:?}"
        );
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    let mut rng = rng(4);
    let mut seen = BTreeMap::new();
    for case in 0..100 {
        let m = loop {
            let m = random_model(&mut rng, 3, 5, 2);
            if !m.support().is_empty() {
                break m;
            }
        };
        let d = m.dim_t();
        // -μ*(0): a nonnegative combination of the support, sometimes perturbed.
        let mut neg_base = QVec::zeros(d);
        for w in m.support_weights() {
            neg_base.axpy(&Rat::int(rng.gen_range(0..=2)), &w);
        }
        if rng.gen_bool(0.5) {
            neg_base = neg_base.add(&random_vec(&mut rng, d, 2));
        }
        let base = neg_base.neg();
        let entries = stability::test_vectors(&m)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(_, v)| {
                let fut = neg_base.dot(&v);
                (v, Poly::new(vec![fut, Rat::zero()]))
            })
            .collect();
        let oracle = FutakiOracle::tabulated(d, entries).map_err(|e| e.to_string())?;

        let mm = MomentMapModel::with_default_masses(base.clone(), m.clone()).map_err(|e| e.to_string())?;
        let cert = mm.find_zero_in_orbit_closure().map_err(|e| e.to_string())?;
        let dual = m.support_cone().map_err(|e| e.to_string())?.dual();
        let by_dual_rays = dual.generators().iter().all(|v| !neg_base.dot(v).is_negative());
        ensure!(cert.feasible == by_dual_rays, "case {case}: feasibility {} vs dual test {by_dual_rays}", cert.feasible);

        let verdict = stability::verdict(&m, &oracle, &r(1, 7)).map_err(|e| e.to_string())?;
        let stab_zero = m.stabilizer_algebra().iter().all(|v| neg_base.dot(v).is_zero());
        let rays_positive = m
            .quotient_rays()
            .map_err(|e| e.to_string())?
            .iter()
            .all(|v| neg_base.dot(v).is_positive());
        let conjunction = stab_zero && rays_positive && cert.in_open_orbit();
        let polystable = matches!(verdict.status, Status::Polystable_cscK | Status::ClosedOrbit_FutakiOnly);
        ensure!(
            polystable == conjunction,
            "case {case}: status {} but conjunction {conjunction}",
            verdict.status
        );
        *seen.entry(verdict.status).or_insert(0) += 1;
    }
    ensure!(
        seen.contains_key(&Status::Polystable_cscK) && seen.contains_key(&Status::Unstable),
        "random instances did not exercise both outcomes: {seen:?}"
    );
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    let mut rng = rng(5);
    for case in 0..100 {
        let m = random_model(&mut rng, 3, 5, 3);
        let v = random_vec(&mut rng, m.dim_t(), 3);
        let limit = m.one_ps_limit(&v).map_err(|e| e.to_string())?;
        let in_dual = match m.support_cone() {
            Ok(sigma) => sigma.dual().contains(&v).map_err(|e| e.to_string())?,
            Err(_) => true,
        };
        ensure!(limit.is_some() == in_dual, "case {case}: limit existence {} vs v in dual {in_dual}", limit.is_some());
        if let Some(limit) = limit {
            let expected: Vec<usize> = m
                .support()
                .indices()
                .iter()
                .copied()
                .filter(|&i| m.weights()[i].dot(&v).is_zero())
                .collect();
            ensure!(limit.support().indices() == expected, "case {case}: limit support mismatch");
        }
    }
    Ok(())
}

fn criterion_6() -> Result<(), String> {
    let mut rng = rng(6);
    let mut cones = 0;
    while cones < 30 {
        let m = random_model(&mut rng, 3, 5, 3);
        let Ok(sigma) = m.support_cone() else { continue };
        if !sigma.is_strongly_convex() {
            continue;
        }
        cones += 1;
        let base = random_vec(&mut rng, m.dim_t(), 4);
        for ray in sigma.rays().map_err(|e| e.to_string())? {
            let witness = m.ray_witness(&ray).map_err(|e| e.to_string())?;
            let mm = MomentMapModel::with_default_masses(base.clone(), witness).map_err(|e| e.to_string())?;
            let diff = mm.moment_value().sub(&base);
            let k = ray.iter().position(|x| !x.is_zero()).expect("ray is nonzero");
            let lambda = &diff[k] / &ray[k];
            ensure!(diff == ray.scale(&lambda), "ray {ray}: image offset {diff} is not on the ray");
            ensure!(lambda.is_positive(), "ray {ray}: lambda = {lambda}");
        }
    }
    Ok(())
}

fn hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let chain = |iter: &mut dyn Iterator<Item = (i64, i64)>| {
        let mut h: Vec<(i64, i64)> = Vec::new();
        for q in iter {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
        h
    };
    let mut lower = chain(&mut p.clone().into_iter());
    lower.extend(chain(&mut p.into_iter().rev()));
    lower
}

fn to_polygon(points: &[(i64, i64)]) -> Option<Polygon> {
    let h = hull(points);
    (h.len() >= 3).then(|| Polygon::from_vertices(h.iter().map(|&(x, y)| QVec::from_ints(&[x, y])).collect()).unwrap())
}

fn random_points(rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
    let n = rng.gen_range(3..=8);
    (0..n).map(|_| (rng.gen_range(-6..=6), rng.gen_range(-6..=6))).collect()
}

fn random_affine(rng: &mut ChaCha8Rng) -> AffineFn {
    let mut q = || r(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    AffineFn::new(q(), q(), q())
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
        if (e[0] * e[3] - e[1] * e[2]).abs() == 1 {
            return Matrix::from_int_rows(&[&e[..2], &e[2..]]);
        }
    }
}

fn criterion_7() -> Result<(), String> {
    let mut rng = rng(7);
    let mut polygons = 0;
    while polygons < 20 {
        let pts = random_points(&mut rng);
        let Some(p) = to_polygon(&pts) else { continue };
        polygons += 1;
        let (f, g) = (random_affine(&mut rng), random_affine(&mut rng));
        let (a, b) = (r(rng.gen_range(-5..=5), 3), r(rng.gen_range(-5..=5), 2));
        let lhs = p.futaki(&f.scale(&a).add(&g.scale(&b)));
        let rhs = &(&a * &p.futaki(&f)) + &(&b * &p.futaki(&g));
        ensure!(lhs == rhs, "linearity fails on {:?}", p.vertices());
        let c = AffineFn::constant(r(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        ensure!(p.futaki(&c).is_zero(), "constant not killed on {:?}", p.vertices());

        let s = rng.gen_range(-3..=3);
        let mirrored: Vec<(i64, i64)> = pts.iter().flat_map(|&(x, y)| [(x, y), (2 * s - x, y)]).collect();
        let sym = to_polygon(&mirrored).expect("mirrored hull is two-dimensional");
        let odd = AffineFn::from_ints(1, 0, -s);
        ensure!(sym.futaki(&odd).is_zero(), "reflection symmetry: {}", sym.futaki(&odd));

        for _ in 0..20 {
            let m = random_unimodular(&mut rng);
            let t = random_vec(&mut rng, 2, 5);
            let image = p.map_affine(&m, &t).map_err(|e| e.to_string())?;
            ensure!(image.futaki(&f) == p.futaki(&f.pullback(&m, &t)), "lattice invariance fails");
        }
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    let mut rng = rng(8);
    let oracle = p1p1_oracle(&r(1, 4)).map_err(|e| e.to_string())?;
    let support = Support::new(vec![EXAMPLE_SUPPORT_INDEX]);
    for e in [r(-1, 10), r(-1, 20), Rat::zero(), r(1, 20), r(1, 10)] {
        let reference = stability::family_verdict(2, cross_weights(), &support, None, &oracle, &e)
            .map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let c = loop {
                let c = CRat::new(
                    r(rng.gen_range(-20..=20), rng.gen_range(1..=7)),
                    r(rng.gen_range(-20..=20), rng.gen_range(1..=7)),
                );
                if !c.is_zero() {
                    break c;
                }
            };
            let v = stability::verdict(&example_model(c.clone()), &oracle, &e).map_err(|e| e.to_string())?;
            ensure!(v.status == reference.status, "eps {e}, coefficient {c:?}: {} vs {}", v.status, reference.status);
            ensure!(v.witnesses == reference.witnesses, "eps {e}: witnesses differ");
        }
    }
    Ok(())
}

/// Every command, writing its report files into `dir`.
fn run_suite(dir: &Path) -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_polystab");
    let cone = dir.join("cone-input.json");
    std::fs::write(&cone, r#"{"dim":3,"generators":[[1,0,0],[0,1,0],[1,1,1],[0,0,-1]]}"#).map_err(|e| e.to_string())?;
    let out = |name: &str| dir.join(name).display().to_string();
    let cone = cone.display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["cone-dual".into(), "--input".into(), cone],
        vec!["orbit-limit".into(), "--builtin".into(), "p1p1-blowup4".into()],
        vec!["stabilizer".into(), "--builtin".into(), "p1p1-blowup4".into(), "--support".into(), "0,1;1,0".into()],
        vec!["futaki".into(), "--builtin".into(), "p1p1-blowup4".into(), "--eps".into(), "1/10".into(), "--interval".into(), "-1/10,1/10".into(), "--float".into()],
        vec!["verdict".into(), "--builtin".into(), "p1p1-blowup4".into(), "--support".into(), "0,1".into(), "--eps".into(), "-1/10".into()],
        vec!["sweep".into(), "--builtin".into(), "p1p1-blowup4".into(), "--interval".into(), "-1/10,1/10".into(), "--grid".into(), "20".into(), "--jobs".into(), "4".into()],
        vec!["verify-image".into(), "--builtin".into(), "p1p1-blowup4".into(), "--eps".into(), "-1/10".into(), "--eta".into(), "1/2".into()],
    ];
    for (k, args) in runs.iter().enumerate() {
        let status = Command::new(bin)
            .args(args)
            .args(["--out", &out(&format!("run{k}"))])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(status.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&status.stderr));
    }
    Ok(())
}

fn collect_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn criterion_9() -> Result<(), String> {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_suite(a.path())?;
    run_suite(b.path())?;
    let (fa, fb) = (collect_files(a.path()), collect_files(b.path()));
    ensure!(fa.len() >= 9, "only {} report files written", fa.len());
    ensure!(
        fa.keys().collect::<Vec<_>>() == fb.keys().collect::<Vec<_>>(),
        "runs wrote different file sets"
    );
    for (name, bytes) in &fa {
        ensure!(fb[name] == *bytes, "{name} differs between runs");
    }
    Ok(())
}

fn main() {
    let criteria: [(u32, &str, Check, Option<Duration>); 9] = [
        (1, "worked example end-to-end", criterion_1, Some(Duration::from_secs(1))),
        (2, "wall detection at eps = 0 (grid 100)", criterion_2, Some(Duration::from_secs(5))),
        (3, "cone duality involution (50 cones)", criterion_3, Some(Duration::from_secs(10))),
        (4, "criterion equivalence (100 tabulated instances)", criterion_4, Some(Duration::from_secs(10))),
        (5, "one-parameter limit law (100 pairs)", criterion_5, Some(Duration::from_secs(5))),
        (6, "ray witnesses (30 strongly convex cones)", criterion_6, None),
        (7, "Futaki functional properties (20 polygons)", criterion_7, None),
        (8, "support uniformity (20 coefficient choices x 5 eps)", criterion_8, None),
        (9, "byte-identical reports across runs", criterion_9, None),
    ];
    let mut failures = 0;
    for (n, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(()), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("PASS criterion {n}: {name} ({elapsed:.2?})"),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {n}: {name} ({elapsed:.2?}): {msg}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
