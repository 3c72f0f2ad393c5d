//! Release acceptance suite: one test per criterion, each self-contained.
//!
//! Every test pins its tolerances and runtime ceiling as local constants,
//! checks the criterion end to end, and prints a single `criterion N ...:
//! PASS` line with the measured evidence (visible under `--nocapture`; in
//! quiet runs the per-test ok/FAILED line carries the verdict).

mod common;

use std::time::Instant;

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arithdist::matrix::determinant_bigint;
use arithdist::monomial::monomial_count;
use arithdist::{
    canonical_height, canonical_height_detailed, conjugate, dynamical_distance_search,
    enumerate_coeff_tensors, enumerate_pgl, enumerate_points, monomial_entries,
    bounded_complexity_search, phi_a_experiment, prop9_slack, recover_map, sup_estimates,
    sup_estimates_over, DistanceMode, Dyadic, Error, HeightInterval, MonomialMatrix, Morphism,
    PglMap, ProjPoint, Round, TateOpts, VerifiedMorphism,
};

fn pow10_inv(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(digits))
}

/// Asserts the runtime ceiling and prints the criterion's PASS line.
fn finish(criterion: &str, t0: Instant, limit_s: u64, evidence: String) {
    let dt = t0.elapsed().as_secs_f64();
    assert!(dt < limit_s as f64, "{criterion} exceeded its {limit_s}s ceiling ({dt:.1}s)");
    println!("{criterion}: PASS ({evidence}; {dt:.2}s)");
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> ProjPoint {
    loop {
        let coords: Vec<BigInt> =
            (0..=n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        if let Ok(p) = ProjPoint::from_integers(&coords) {
            return p;
        }
    }
}

fn random_map(rng: &mut ChaCha8Rng, n: usize, d: u32, coeff_bound: i64) -> Morphism {
    let k = monomial_count(n + 1, d);
    loop {
        let rows: Vec<Vec<BigInt>> = (0..=n)
            .map(|_| {
                (0..k).map(|_| BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound))).collect()
            })
            .collect();
        if let Ok(m) = Morphism::from_coeff_rows(n, d, rows) {
            return m;
        }
    }
}

fn random_verified(rng: &mut ChaCha8Rng, n: usize, d: u32, coeff_bound: i64) -> VerifiedMorphism {
    loop {
        if let Ok(vm) = VerifiedMorphism::new(random_map(rng, n, d, coeff_bound)) {
            return vm;
        }
    }
}

fn distinct_points(rng: &mut ChaCha8Rng, n: usize, count: usize, bound: i64) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_point(rng, n, bound);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[test]
fn criterion_1_power_map_exactness() {
    const WIDTH_DIGITS: u32 = 9;
    const TIME_LIMIT_S: u64 = 5;
    let t0 = Instant::now();
    let eps = pow10_inv(WIDTH_DIGITS);

    let points = enumerate_points(1, 2);
    assert_eq!(points.len(), 8, "P^1(Q) up to coordinate bound 2 has 8 points");
    let mut exact_zeroes = 0usize;
    for d in [2u32, 3] {
        let vm = VerifiedMorphism::new(Morphism::power(1, d)).unwrap();
        assert!(vm.cert().is_exact());
        for p in &points {
            let h = canonical_height(vm.map(), vm.cert(), p, &eps, 96).unwrap();
            let width = h.hi().to_rational() - h.lo().to_rational();
            assert!(width <= eps, "interval wider than 1e-{WIDTH_DIGITS} at {p}");
            let m = p.max_abs_coord();
            if m.is_one() {
                assert!(h.is_exact_zero(), "hhat({p}) under the power map must be exactly 0");
                exact_zeroes += 1;
            } else {
                let (lo, hi) = common::ln_oracle(&BigRational::from_integer(m), 40);
                assert!(
                    h.lo().to_rational() <= lo && hi <= h.hi().to_rational(),
                    "hhat({p}) fails to contain log max|coords|"
                );
            }
            // the integer identity behind the exact certificate
            let image = ProjPoint::from_integers(&vm.map().evaluate_raw(p).unwrap()).unwrap();
            assert_eq!(image.max_abs_coord(), p.max_abs_coord().pow(d));
        }
        let defect =
            sup_estimates(DistanceMode::PullbackDefect, &vm, Some(&vm), 2, &eps, 96).unwrap();
        assert!(defect.upper().is_zero(), "power-map defect upper bound must be exactly 0");
    }

    finish(
        "criterion 1 (power-map exactness)",
        t0,
        TIME_LIMIT_S,
        format!("8 points x d in {{2,3}}, {exact_zeroes} exact zeroes, defect upper = 0"),
    );
}

#[test]
fn criterion_2_preperiodic_zero() {
    const TIME_LIMIT_S: u64 = 1;
    let t0 = Instant::now();
    let eps = pow10_inv(6);

    let origin = ProjPoint::parse("0:1").unwrap();
    let mut maps = vec![Morphism::construct(1, 2, &["x0^2 - x1^2", "x1^2"]).unwrap()];
    for a in [7i64, 1000] {
        maps.push(Morphism::phi_a(2, &BigInt::from(a)).unwrap());
    }
    let count = maps.len();
    for map in maps {
        let vm = VerifiedMorphism::new(map).unwrap();
        let detail =
            canonical_height_detailed(vm.map(), vm.cert(), &origin, &eps, 64, &TateOpts::default())
                .unwrap();
        assert!(detail.preperiodic, "orbit detection must flag [0:1] under {}", vm.map());
        assert!(detail.interval.is_exact_zero(), "preperiodic points get the exact-zero interval");
    }

    finish(
        "criterion 2 (preperiodic zero)",
        t0,
        TIME_LIMIT_S,
        format!("{count} maps, exact-zero interval via orbit detection"),
    );
}

#[test]
fn criterion_3_certificate_soundness_sweep() {
    const BOUND_DIM1: u32 = 50;
    const BOUND_DIM2: u32 = 10;
    const TIME_LIMIT_S: u64 = 60;
    let t0 = Instant::now();

    let maps = vec![
        Morphism::power(1, 2),
        Morphism::power(1, 3),
        Morphism::construct(1, 2, &["x0^2 + x1^2", "x0*x1"]).unwrap(),
        Morphism::phi_a(2, &BigInt::from(7)).unwrap(),
        Morphism::power(2, 2),
    ];
    let mut checked = 0u64;
    for map in maps {
        let vm = VerifiedMorphism::new(map).unwrap();
        let bound = if vm.dim() == 1 { BOUND_DIM1 } else { BOUND_DIM2 };
        let k = BigInt::from(monomial_count(vm.dim() + 1, vm.degree()));
        let maxa = vm.map().max_abs_coeff();
        let lcm_r = vm.cert().lcm_r();
        let weight = vm.cert().cofactor_weight();
        let places = BigInt::from(vm.dim() as u64 + 1);
        for p in enumerate_points(vm.dim(), bound) {
            let raw = vm.map().evaluate_raw(&p).unwrap();
            let image = ProjPoint::from_integers(&raw).unwrap();
            let h_out = image.max_abs_coord();
            let hd = p.max_abs_coord().pow(vm.degree());
            // the two integer inequalities the offset constants come from
            assert!(h_out <= &k * &maxa * &hd, "upper inequality fails at {p}");
            assert!(&lcm_r * &places * &weight * &h_out >= hd, "lower inequality fails at {p}");
            let mut g = BigInt::zero();
            for c in &raw {
                g = g.gcd(c);
            }
            assert!(lcm_r.mod_floor(&g).is_zero(), "gcd {g} does not divide lcm R at {p}");
            checked += 1;
        }
    }

    finish(
        "criterion 3 (certificate soundness sweep)",
        t0,
        TIME_LIMIT_S,
        format!("{checked} point checks across 5 maps, 0 violations"),
    );
}

#[test]
fn criterion_4_sandwich_and_triangle() {
    const TRIPLES: usize = 20;
    const SAMPLE_BOUND: u32 = 2;
    const EPS_DIGITS: u32 = 6;
    const TIME_LIMIT_S: u64 = 600;
    let t0 = Instant::now();
    let eps = pow10_inv(EPS_DIGITS);
    let tol = BigRational::from_integer(BigInt::from(6)) * &eps;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let points = enumerate_points(1, SAMPLE_BOUND);
    let mut pair_checks = 0u64;
    let mut triangle_checks = 0u64;
    for _ in 0..TRIPLES {
        let trio: Vec<VerifiedMorphism> = (0..3)
            .map(|_| {
                let d = rng.gen_range(2..=3);
                random_verified(&mut rng, 1, d, 5)
            })
            .collect();
        let mut ests = Vec::new();
        for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
            let est = sup_estimates(
                DistanceMode::HeightGap,
                &trio[i],
                Some(&trio[j]),
                SAMPLE_BOUND,
                &eps,
                96,
            )
            .unwrap();
            // bound-level sandwich: the sampled lower bound never exceeds
            // the telescoping upper bound
            assert!(est.lower().cmp_exact(est.upper()).is_le(), "lower bound above upper bound");
            ests.push(est);
            pair_checks += 1;
        }
        for p in &points {
            let hs: Vec<HeightInterval> = trio
                .iter()
                .map(|vm| canonical_height(vm.map(), vm.cert(), p, &eps, 96).unwrap())
                .collect();
            let gaps =
                [hs[0].abs_diff(&hs[1], 96), hs[1].abs_diff(&hs[2], 96), hs[0].abs_diff(&hs[2], 96)];
            for (g, est) in gaps.iter().zip(&ests) {
                assert!(
                    g.lo().cmp_exact(est.upper()).is_le(),
                    "pointwise gap exceeds the certified upper bound at {p}"
                );
            }
            // finite-sample triangle inequality in all three orientations
            for (a, b, c) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
                let lhs = gaps[a].lo().to_rational();
                let rhs = gaps[b].hi().to_rational() + gaps[c].hi().to_rational() + &tol;
                assert!(lhs <= rhs, "triangle inequality violated at {p}");
                triangle_checks += 1;
            }
        }
    }

    finish(
        "criterion 4 (sandwich and triangle suites)",
        t0,
        TIME_LIMIT_S,
        format!(
            "{TRIPLES} random triples, {pair_checks} sandwich checks, \
             {triangle_checks} triangle checks, 0 violations"
        ),
    );
}

#[test]
fn criterion_5_interpolation() {
    const ROUND_TRIPS_PER_CASE: usize = 40;
    const VANDERMONDE_CONFIGS: usize = 100;
    const SLACK_CONFIGS: usize = 500;
    const TIME_LIMIT_S: u64 = 300;
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);

    // (a) exact recovery round trips
    let cases = [(1usize, 1u32), (1, 2), (1, 3), (1, 4), (2, 2)];
    for &(n, d) in &cases {
        let k = monomial_count(n + 1, d);
        for _ in 0..ROUND_TRIPS_PER_CASE {
            let map = random_map(&mut rng, n, d, 9);
            let pairs = loop {
                let pts = distinct_points(&mut rng, n, k, 12);
                let mm = MonomialMatrix::new(n, d, &pts).unwrap();
                if mm.is_degenerate() {
                    continue;
                }
                let pairs: Vec<(ProjPoint, Vec<BigInt>)> =
                    pts.iter().map(|p| (p.clone(), map.evaluate_raw(p).unwrap())).collect();
                // a sampled base point of a non-morphism gives a zero tuple
                if pairs.iter().any(|(_, v)| v.iter().all(|c| c.is_zero())) {
                    continue;
                }
                break pairs;
            };
            assert_eq!(recover_map(n, d, &pairs).unwrap(), map, "round trip must be exact");
        }
    }

    // (b) the dimension-1 determinant is the Vandermonde product up to sign
    let mut sign_flips = 0u64;
    for _ in 0..VANDERMONDE_CONFIGS {
        let d = rng.gen_range(1..=4u32);
        let k = monomial_count(2, d);
        let pts = distinct_points(&mut rng, 1, k, 9);
        let mm = MonomialMatrix::new(1, d, &pts).unwrap();
        let mut prod = BigInt::one();
        for i in 0..k {
            for j in (i + 1)..k {
                let (xi, yi) = (&pts[i].coords()[0], &pts[i].coords()[1]);
                let (xj, yj) = (&pts[j].coords()[0], &pts[j].coords()[1]);
                prod *= xi * yj - xj * yi;
            }
        }
        let det = mm.det().clone();
        assert!(det == prod || det == -&prod, "determinant differs from the Vandermonde product");
        if det != prod {
            sign_flips += 1;
        }
    }

    // (c) multihomogeneity: scaling one tuple scales the determinant by lambda^d
    for d in 1..=4u32 {
        let k = monomial_count(2, d);
        let tuples: Vec<Vec<BigInt>> = (0..k)
            .map(|_| {
                let p = random_point(&mut rng, 1, 9);
                p.coords().to_vec()
            })
            .collect();
        let base = determinant_bigint(&monomial_entries(1, d, &tuples));
        for j in 0..k {
            for lam in [2i64, 3, -2] {
                let mut scaled = tuples.clone();
                for c in scaled[j].iter_mut() {
                    *c *= BigInt::from(lam);
                }
                let det = determinant_bigint(&monomial_entries(1, d, &scaled));
                assert_eq!(det, &base * BigInt::from(lam).pow(d), "row scaling broke degree {d}");
            }
        }
    }

    // (d) height-slack functional: report the running max of (-slack)
    let mut max_neg_slack: Option<Dyadic> = None;
    let mut slack_runs = 0usize;
    while slack_runs < SLACK_CONFIGS {
        let d = rng.gen_range(2..=3u32);
        let vm = random_verified(&mut rng, 1, d, 5);
        let pts = distinct_points(&mut rng, 1, monomial_count(2, d), 15);
        let slack = match prop9_slack(vm.map(), &pts, 64) {
            Ok(s) => s,
            Err(Error::DegenerateConfiguration(_)) => continue,
            Err(e) => panic!("unexpected slack failure: {e}"),
        };
        let neg_hi = slack.neg().hi().clone();
        max_neg_slack = Some(match max_neg_slack {
            None => neg_hi,
            Some(m) if neg_hi.cmp_exact(&m).is_gt() => neg_hi,
            Some(m) => m,
        });
        slack_runs += 1;
    }
    let reported = max_neg_slack.unwrap().to_decimal(6, Round::Ceil);

    finish(
        "criterion 5 (interpolation)",
        t0,
        TIME_LIMIT_S,
        format!(
            "200 exact round trips, {VANDERMONDE_CONFIGS} Vandermonde configs \
             ({sign_flips} sign flips), max(-slack) over {SLACK_CONFIGS} configs = {reported}"
        ),
    );
}

#[test]
fn criterion_6_family_reproduction() {
    const SAMPLE_BOUND: u32 = 10;
    const EPS_DIGITS: u32 = 7;
    const MARGIN_DIGITS: u32 = 6;
    const TIME_LIMIT_S: u64 = 120;
    let t0 = Instant::now();
    let eps = pow10_inv(EPS_DIGITS);

    let a_values = [10i64, 100, 1000];
    let a_list: Vec<BigInt> = a_values.iter().map(|&a| BigInt::from(a)).collect();
    let report = phi_a_experiment(2, &a_list, SAMPLE_BOUND, &eps, 96).unwrap();
    let col = |name: &str| report.columns.iter().position(|c| c == name).unwrap();
    let margin = 10f64.powi(-(MARGIN_DIGITS as i32));
    assert_eq!(report.rows.len(), a_values.len());
    for (row, &a) in report.rows.iter().zip(&a_values) {
        let cell = |name: &str| row[col(name)].parse::<f64>().unwrap();
        let ln_a = (a as f64).ln();
        // h(phi_A) encloses log|A| (cells are outward-rounded to 12 digits)
        assert!(cell("h_map_lo") <= ln_a + 1e-9 && ln_a <= cell("h_map_hi") + 1e-9);
        assert!(cell("defect_lower") >= ln_a - margin, "defect lower bound too small for A={a}");
        assert!(cell("gap_lower") >= ln_a - margin, "gap lower bound too small for A={a}");
        let witness = ProjPoint::parse(&format!("-{a}:1")).unwrap().render();
        assert_eq!(row[col("defect_witness")], witness);
        assert_eq!(row[col("gap_witness")], witness);
        // the claimed comparison bound is printed alongside and is exceeded
        let claimed = 0.5 * ((a as f64) + 1.0).ln();
        assert!((cell("claimed_bound_lo") - claimed).abs() < 1e-6);
        assert!(cell("claimed_bound_hi") >= cell("claimed_bound_lo"));
        assert_eq!(row[col("exceeds_claimed")], "yes", "discrepancy must be surfaced for A={a}");
    }

    // independent exact-arithmetic spot check at A = 100
    let vm = VerifiedMorphism::new(Morphism::phi_a(2, &BigInt::from(100)).unwrap()).unwrap();
    let power = VerifiedMorphism::new(Morphism::power(1, 2)).unwrap();
    let root = ProjPoint::parse("-100:1").unwrap();
    let mut pts = enumerate_points(1, SAMPLE_BOUND);
    pts.push(root.clone());
    let defect = sup_estimates_over(
        DistanceMode::PullbackDefect,
        &vm,
        Some(&power),
        &pts,
        SAMPLE_BOUND,
        &eps,
        96,
    )
    .unwrap();
    let (oracle_lo, _) = common::ln_oracle(&BigRational::from_integer(BigInt::from(100)), 40);
    assert!(defect.lower().to_rational() >= oracle_lo - pow10_inv(MARGIN_DIGITS));
    assert_eq!(defect.witness().render(), root.render());

    finish(
        "criterion 6 (family reproduction)",
        t0,
        TIME_LIMIT_S,
        "A in {10,100,1000}: bounds enclose log A, witness [-A:1], claimed bound exceeded"
            .to_string(),
    );
}

#[test]
fn criterion_7_conjugation_identities() {
    const TRIALS: usize = 50;
    const ENTRY_BOUND: i64 = 3;
    const EPS_DIGITS: u32 = 6;
    const TIME_LIMIT_S: u64 = 600;
    let t0 = Instant::now();
    let eps = pow10_inv(EPS_DIGITS);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let frames = enumerate_pgl(1, ENTRY_BOUND as u32);
    for trial in 0..TRIALS {
        let vm = random_verified(&mut rng, 1, 2, ENTRY_BOUND);
        let f = frames[rng.gen_range(0..frames.len())].clone();
        let p = random_point(&mut rng, 1, ENTRY_BOUND);
        let cvm = VerifiedMorphism::new(conjugate(vm.map(), &f).unwrap()).unwrap();
        let lhs = canonical_height(cvm.map(), cvm.cert(), &p, &eps, 96).unwrap();
        let rhs =
            canonical_height(vm.map(), vm.cert(), &f.apply(&p).unwrap(), &eps, 96).unwrap();
        assert!(lhs.overlaps(&rhs), "height transform fails at trial {trial}");
        let back = conjugate(cvm.map(), &f.inverse()).unwrap();
        assert_eq!(&back, vm.map(), "conjugation round trip must be exact at trial {trial}");
    }

    // class-distance search against an exactly conjugated copy
    let phi = VerifiedMorphism::new(
        Morphism::construct(1, 2, &["x0^2 + x1^2", "x0*x1"]).unwrap(),
    )
    .unwrap();
    let g = PglMap::parse("1,1;0,1").unwrap();
    let psi = VerifiedMorphism::new(conjugate(phi.map(), &g).unwrap()).unwrap();
    let (_, _, table) =
        dynamical_distance_search(&phi, &psi, 1, 4, &pow10_inv(3), 64).unwrap();
    let found = table
        .iter()
        .any(|(f, est)| est.lower().is_zero() && conjugate(phi.map(), f).unwrap() == *psi.map());
    assert!(found, "search must surface a conjugating candidate with sampled lower bound 0");

    finish(
        "criterion 7 (conjugation identities)",
        t0,
        TIME_LIMIT_S,
        format!("{TRIALS} height-transform overlaps, exact round trips, search recovers a conjugator"),
    );
}

/// Expands the 4x4 Sylvester determinant of two binary quadratics over all
/// 24 permutations. Deliberately shares nothing with the library's linear
/// algebra.
fn resultant_oracle(f: &[i64], g: &[i64]) -> i64 {
    let m = [
        [f[0], f[1], f[2], 0],
        [0, f[0], f[1], f[2]],
        [g[0], g[1], g[2], 0],
        [0, g[0], g[1], g[2]],
    ];
    let mut det = 0i64;
    for c0 in 0..4usize {
        for c1 in 0..4usize {
            if c1 == c0 {
                continue;
            }
            for c2 in 0..4usize {
                if c2 == c0 || c2 == c1 {
                    continue;
                }
                let c3 = 6 - c0 - c1 - c2;
                let perm = [c0, c1, c2, c3];
                let mut inversions = 0;
                for i in 0..4 {
                    for j in (i + 1)..4 {
                        if perm[i] > perm[j] {
                            inversions += 1;
                        }
                    }
                }
                let term = m[0][c0] * m[1][c1] * m[2][c2] * m[3][c3];
                det += if inversions % 2 == 0 { term } else { -term };
            }
        }
    }
    det
}

#[test]
fn criterion_8_finiteness_search() {
    const COEFF_BOUND: u32 = 1;
    const SAMPLE_BOUND: u32 = 2;
    const EPS_DIGITS: u32 = 3;
    const TIME_LIMIT_S: u64 = 900;
    let t0 = Instant::now();
    let eps = pow10_inv(EPS_DIGITS);

    let psi = VerifiedMorphism::new(Morphism::power(1, 2)).unwrap();
    let complexity_bound = BigRational::new(BigInt::from(7), BigInt::from(10));
    let report =
        bounded_complexity_search(1, 2, &psi, COEFF_BOUND, &complexity_bound, SAMPLE_BOUND, &eps, 64)
            .unwrap();
    let summary = |key: &str| {
        report.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone()).unwrap()
    };
    let col = |name: &str| report.columns.iter().position(|c| c == name).unwrap();

    // independent resultant oracle over the same enumeration
    let tensors = enumerate_coeff_tensors(1, 2, COEFF_BOUND);
    assert_eq!(tensors.len(), 364);
    let verdicts: Vec<bool> = tensors
        .iter()
        .map(|t| {
            let f: Vec<i64> = t[0].iter().map(|c| c.to_i64().unwrap()).collect();
            let g: Vec<i64> = t[1].iter().map(|c| c.to_i64().unwrap()).collect();
            resultant_oracle(&f, &g) != 0
        })
        .collect();
    let oracle_morphisms = verdicts.iter().filter(|&&b| b).count();
    assert_eq!(summary("candidates_total"), "364");
    assert_eq!(summary("morphism_count"), oracle_morphisms.to_string());
    assert_eq!(summary("non_morphism_count"), (364 - oracle_morphisms).to_string());
    assert_eq!(report.rows.len(), 364);
    for (row, &is_morphism) in report.rows.iter().zip(&verdicts) {
        assert_eq!(row[col("morphism")] == "yes", is_morphism, "oracle disagrees on {}", row[0]);
    }

    // consistency inequalities re-checked from the emitted cells
    let slope: f64 = summary("consistency_slope").parse().unwrap();
    let c_height: f64 = summary("c_height_measured").parse().unwrap();
    let c_gap: f64 = summary("c_gap_measured").parse().unwrap();
    let h_psi_hi = psi.map().naive_height(64).hi().to_f64();
    let mut within = 0u64;
    for row in &report.rows {
        if row[col("morphism")] != "yes" {
            continue;
        }
        let h_hi: f64 = row[col("h_hi")].parse().unwrap();
        let gap_lower: f64 = row[col("gap_lower")].parse().unwrap();
        let gap_upper: f64 = row[col("gap_upper")].parse().unwrap();
        assert!(h_hi <= slope * gap_upper + c_height + 1e-8, "height bound fails on {}", row[0]);
        assert!(gap_lower <= h_hi + h_psi_hi + c_gap + 1e-8, "gap bound fails on {}", row[0]);
        if row[col("within_bound")] == "yes" {
            within += 1;
        }
    }
    assert_eq!(summary("within_bound_count"), within.to_string());
    assert!(within >= 1, "the reference map itself sits inside the complexity bound");

    finish(
        "criterion 8 (finiteness search)",
        t0,
        TIME_LIMIT_S,
        format!(
            "{oracle_morphisms} morphisms / {} non-morphisms of 364 match the resultant \
             oracle; {within} within complexity bound {complexity_bound}",
            364 - oracle_morphisms
        ),
    );
}
