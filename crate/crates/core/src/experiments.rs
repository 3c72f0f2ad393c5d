//! Desk-scale experiments over families of morphisms, reported as
//! deterministic tables.
//!
//! Three studies are packaged here: the family x^d + A x^(d-1) y whose
//! distance to the power map grows like log|A|, a scan of the ratio between
//! naive height and pullback defect over all small-coefficient morphisms,
//! and the bounded-distance finiteness search that classifies every
//! small-coefficient map and lists those within a distance bound of a
//! reference morphism.
//!
//! Reports hold rendered cells only. Every cell comes from exact integer or
//! directed dyadic arithmetic, so a report is a pure function of its config:
//! rerunning produces byte-identical CSV. The empirical-fit summary lines
//! use f64 least squares (they describe the data, they certify nothing).

use crate::certificate::VerifiedMorphism;
use crate::distance::{sup_estimates, sup_estimates_over, DistanceEstimate, DistanceMode};
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{log_enclosure, HeightInterval};
use crate::monomial::monomial_count;
use crate::morphism::Morphism;
use crate::point::{enumerate_points, ProjPoint};
use num::{BigInt, BigRational, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

const CELL_DIGITS: u32 = 12;
const RATIO_BITS: u32 = 96;

/// A finished experiment: config echo, fixed columns, rendered rows, and
/// summary statistics, serializable as CSV (config and summary as comment
/// lines) or JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub title: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(&self.title);
        out.push('\n');
        for (k, v) in &self.config {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            debug_assert!(row.iter().all(|c| !c.contains(',') && !c.contains('\n')));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn cell_lo(d: &Dyadic) -> String {
    d.to_decimal(CELL_DIGITS, Round::Floor)
}

fn cell_hi(d: &Dyadic) -> String {
    d.to_decimal(CELL_DIGITS, Round::Ceil)
}

fn cell_rational(q: &BigRational, dir: Round) -> String {
    Dyadic::from_rational(q, RATIO_BITS, dir).to_decimal(CELL_DIGITS, dir)
}

fn yes_no(b: bool) -> String {
    (if b { "yes" } else { "no" }).to_string()
}

/// All projectively normalized coefficient tensors for maps P^n -> P^n of
/// degree d with entries in [-bound, bound]: content 1, first nonzero entry
/// positive, in odometer order. For n=1, d=2, bound=1 this is (3^6-1)/2
/// tensors.
pub fn enumerate_coeff_tensors(n: usize, d: u32, bound: u32) -> Vec<Vec<Vec<BigInt>>> {
    assert!(bound >= 1, "coefficient bound must be at least 1");
    let k = monomial_count(n + 1, d);
    let cells = (n + 1) * k;
    let m = bound as i64;
    let mut out = Vec::new();
    let mut entries = vec![-m; cells];
    'outer: loop {
        let mut content = 0i64;
        let mut first = 0i64;
        for &e in &entries {
            if first == 0 {
                first = e;
            }
            content = gcd_i64(content, e);
        }
        if content == 1 && first > 0 {
            out.push(
                (0..=n)
                    .map(|i| (0..k).map(|j| BigInt::from(entries[i * k + j])).collect())
                    .collect(),
            );
        }
        for slot in (0..cells).rev() {
            if entries[slot] < m {
                entries[slot] += 1;
                continue 'outer;
            }
            entries[slot] = -m;
        }
        break;
    }
    out
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Study of the family [x^d + A x^(d-1) y : y^d]: per A, the naive height,
/// the pullback defect and height gap against the power map (both certified
/// two-sided), the raw sampled supremum of |(1/d) h(phi(P)) - h(P)|, and the
/// conjectured ceiling (1/d) log(1 + |A|) side by side, flagging when the
/// sampled value certifiably exceeds it.
///
/// The sample set is the points of coordinate bound `sample_bound` plus the
/// distinguished root [-A : 1], which the family sends to the fixed point
/// [0 : 1] and which realizes a gap of log|A|.
pub fn phi_a_experiment(
    d: u32,
    a_list: &[BigInt],
    sample_bound: u32,
    eps: &BigRational,
    precision_bits: u32,
) -> Result<ExperimentReport> {
    if a_list.iter().any(|a| a.is_zero()) {
        return Err(Error::InvalidArgument("each family parameter A must be nonzero".into()));
    }
    let power = VerifiedMorphism::new(Morphism::power(1, d))?;
    let base_points = enumerate_points(1, sample_bound);
    let inv_d = BigRational::new(BigInt::one(), BigInt::from(d));

    let rows = a_list
        .par_iter()
        .map(|a| {
            let phi = VerifiedMorphism::new(Morphism::phi_a(d, a)?)?;
            let root = ProjPoint::from_integers(&[-a.clone(), BigInt::one()])?;
            let mut points = base_points.clone();
            if !points.contains(&root) {
                points.push(root);
            }
            let defect = sup_estimates_over(
                DistanceMode::PullbackDefect,
                &phi,
                Some(&power),
                &points,
                sample_bound,
                eps,
                precision_bits,
            )?;
            let gap = sup_estimates_over(
                DistanceMode::HeightGap,
                &phi,
                Some(&power),
                &points,
                sample_bound,
                eps,
                precision_bits,
            )?;
            let h_map = phi.map().naive_height(precision_bits);

            // raw finite-sample supremum, straight from Weil heights
            let mut sampled = HeightInterval::exact_zero();
            for p in &points {
                let (image, _) = phi.map().evaluate(p, 1)?;
                let pulled = image
                    .weil_height(precision_bits)
                    .scale_rational(&inv_d, precision_bits);
                sampled = sampled
                    .max_with(&pulled.abs_diff(&p.weil_height(precision_bits), precision_bits));
            }
            let claimed = log_enclosure(&(a.abs() + BigInt::one()), precision_bits)?
                .scale_rational(&inv_d, precision_bits);
            let exceeds = sampled.lo().cmp_exact(claimed.hi()).is_gt();

            Ok(vec![
                a.to_string(),
                cell_lo(h_map.lo()),
                cell_hi(h_map.hi()),
                cell_lo(defect.lower()),
                cell_hi(defect.upper()),
                defect.witness().render(),
                cell_lo(gap.lower()),
                cell_hi(gap.upper()),
                gap.witness().render(),
                cell_lo(sampled.lo()),
                cell_hi(sampled.hi()),
                cell_lo(claimed.lo()),
                cell_hi(claimed.hi()),
                yes_no(exceeds),
            ])
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        title: "distance of x^d + A x^(d-1) y from the power map".into(),
        config: vec![
            ("schema".into(), "family-a/1".into()),
            ("degree".into(), d.to_string()),
            (
                "A_list".into(),
                a_list.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "),
            ),
            ("sample_bound".into(), sample_bound.to_string()),
            ("eps".into(), eps.to_string()),
            ("precision_bits".into(), precision_bits.to_string()),
        ],
        columns: [
            "A",
            "h_map_lo",
            "h_map_hi",
            "defect_lower",
            "defect_upper",
            "defect_witness",
            "gap_lower",
            "gap_upper",
            "gap_witness",
            "sampled_sup_lo",
            "sampled_sup_hi",
            "claimed_bound_lo",
            "claimed_bound_hi",
            "exceeds_claimed",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        summary: vec![("rows".into(), a_list.len().to_string())],
    })
}

/// Scan of h(phi) / defect(phi) over every normalized morphism with
/// coefficients in [-map_coeff_bound, map_coeff_bound]. Rows carry the
/// certified ratio bracket [h.lo/defect.upper, h.hi/max(defect.lower, eps)];
/// maps with exact-zero defect (coordinate permutations of the power map)
/// are noted and excluded from the running maximum. The summary compares the
/// max certified lower bracket with the proven ceiling d * C(n+d, n) and
/// reports a dominating linear fit defect.upper <= a * h + b.
pub fn alpha_scan(
    n: usize,
    d: u32,
    map_coeff_bound: u32,
    sample_bound: u32,
    eps: &BigRational,
    precision_bits: u32,
) -> Result<ExperimentReport> {
    if d < 2 {
        return Err(Error::InvalidArgument("the scan needs degree at least 2".into()));
    }
    let k = monomial_count(n + 1, d);
    let power = VerifiedMorphism::new(Morphism::power(n, d))?;
    let morphisms = classify_tensors(n, d, map_coeff_bound)?
        .into_iter()
        .filter_map(|c| match c {
            Classified::Morphism(vm) => Some(vm),
            Classified::NotMorphism(_) => None,
        })
        .collect::<Vec<_>>();

    let estimates: Vec<(HeightInterval, DistanceEstimate)> = morphisms
        .par_iter()
        .map(|vm| {
            let defect = sup_estimates(
                DistanceMode::PullbackDefect,
                vm,
                Some(&power),
                sample_bound,
                eps,
                precision_bits,
            )?;
            Ok((vm.map().naive_height(precision_bits), defect))
        })
        .collect::<Result<Vec<_>>>()?;

    let zero = BigRational::zero();
    let mut max_ratio_lo = BigRational::zero();
    let mut fit_points: Vec<(f64, f64)> = Vec::new();
    let mut rows = Vec::with_capacity(morphisms.len());
    for (vm, (h, defect)) in morphisms.iter().zip(&estimates) {
        let h_lo = h.lo().to_rational().max(zero.clone());
        let (ratio_lo, ratio_hi, note) = if defect.upper().is_zero() {
            ("-".into(), "-".into(), "exact-zero-complexity")
        } else {
            let lo = &h_lo / defect.upper().to_rational();
            let hi = h.hi().to_rational() / defect.lower().to_rational().max(eps.clone());
            if lo > max_ratio_lo {
                max_ratio_lo = lo.clone();
            }
            fit_points.push((h.midpoint_f64(), defect.upper().to_f64()));
            (cell_rational(&lo, Round::Floor), cell_rational(&hi, Round::Ceil), "included")
        };
        rows.push(vec![
            vm.map().to_string(),
            cell_lo(h.lo()),
            cell_hi(h.hi()),
            cell_lo(defect.lower()),
            cell_hi(defect.upper()),
            ratio_lo,
            ratio_hi,
            note.to_string(),
        ]);
    }

    let (fit_a, fit_b) = dominating_fit(&fit_points);
    Ok(ExperimentReport {
        title: "naive height versus pullback defect over small-coefficient morphisms".into(),
        config: vec![
            ("schema".into(), "ratio-scan/1".into()),
            ("dimension".into(), n.to_string()),
            ("degree".into(), d.to_string()),
            ("map_coeff_bound".into(), map_coeff_bound.to_string()),
            ("sample_bound".into(), sample_bound.to_string()),
            ("eps".into(), eps.to_string()),
            ("precision_bits".into(), precision_bits.to_string()),
        ],
        columns: [
            "map",
            "h_lo",
            "h_hi",
            "defect_lower",
            "defect_upper",
            "ratio_lo",
            "ratio_hi",
            "note",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        summary: vec![
            ("morphisms".into(), morphisms.len().to_string()),
            ("proven_ratio_ceiling".into(), (u64::from(d) * k as u64).to_string()),
            ("max_certified_ratio_lo".into(), cell_rational(&max_ratio_lo, Round::Floor)),
            ("fit_slope".into(), format!("{fit_a:.6}")),
            ("fit_intercept".into(), format!("{fit_b:.6}")),
        ],
    })
}

/// Least squares slope through the (h, defect) cloud, with the intercept
/// raised until the line dominates every point. Descriptive only.
fn dominating_fit(points: &[(f64, f64)]) -> (f64, f64) {
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (x - mx), b + (x - mx) * (y - my)));
    let a = if sxx > 1e-12 { sxy / sxx } else { 0.0 };
    let b = points.iter().map(|(x, y)| y - a * x).fold(f64::NEG_INFINITY, f64::max);
    (a, b)
}

enum Classified {
    Morphism(VerifiedMorphism),
    NotMorphism(Morphism),
}

/// Certifies every normalized coefficient tensor within the bound, in
/// enumeration order.
fn classify_tensors(n: usize, d: u32, coeff_bound: u32) -> Result<Vec<Classified>> {
    enumerate_coeff_tensors(n, d, coeff_bound)
        .into_par_iter()
        .map(|rows| {
            let map = Morphism::from_coeff_rows(n, d, rows)?;
            match VerifiedMorphism::new(map.clone()) {
                Ok(vm) => Ok(Classified::Morphism(vm)),
                Err(Error::NotAMorphism(_)) => Ok(Classified::NotMorphism(map)),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Full enumeration of degree-d self-maps of P^n with coefficients in
/// [-coeff_bound, coeff_bound]: classifies morphism versus not, computes the
/// certified height-gap bracket against `psi` for each morphism, and marks
/// the finite sub-table whose gap upper bound is at most `complexity_bound`.
///
/// Every morphism row is re-checked against the two-sided consistency
/// relations h(phi) <= (d+1) K gap.upper + c and gap.lower <= h(phi) +
/// h(psi) + c', where c and c' are the measured running maxima reported in
/// the summary; a violation panics, since it can only come from broken
/// interval arithmetic.
pub fn bounded_complexity_search(
    n: usize,
    d: u32,
    psi: &VerifiedMorphism,
    coeff_bound: u32,
    complexity_bound: &BigRational,
    sample_bound: u32,
    eps: &BigRational,
    precision_bits: u32,
) -> Result<ExperimentReport> {
    if psi.dim() != n {
        return Err(Error::InvalidArgument("reference morphism acts on the wrong space".into()));
    }
    if d < 2 || psi.degree() < 2 {
        return Err(Error::InvalidArgument("the search needs degrees at least 2".into()));
    }
    let k = monomial_count(n + 1, d);
    let classified = classify_tensors(n, d, coeff_bound)?;
    let total = classified.len();

    let estimated: Vec<(Morphism, Option<(DistanceEstimate, HeightInterval)>)> = classified
        .into_par_iter()
        .map(|c| match c {
            Classified::NotMorphism(m) => Ok((m, None)),
            Classified::Morphism(vm) => {
                let gap = sup_estimates(
                    DistanceMode::HeightGap,
                    &vm,
                    Some(psi),
                    sample_bound,
                    eps,
                    precision_bits,
                )?;
                let h = vm.map().naive_height(precision_bits);
                Ok((vm.into_map(), Some((gap, h))))
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let h_psi_hi = psi.map().naive_height(precision_bits).hi().to_rational();
    let slope = BigRational::from_integer(BigInt::from((u64::from(d) + 1) * k as u64));
    let zero = BigRational::zero();

    // measured constants: running maxima of the two residuals
    let mut c_upper = BigRational::zero();
    let mut c_lower = BigRational::zero();
    for (_, est) in &estimated {
        if let Some((gap, h)) = est {
            let r1 = h.hi().to_rational() - &slope * gap.upper().to_rational();
            let r2 = gap.lower().to_rational() - h.hi().to_rational() - &h_psi_hi;
            c_upper = c_upper.max(r1);
            c_lower = c_lower.max(r2);
        }
    }
    c_upper = c_upper.max(zero.clone());
    c_lower = c_lower.max(zero);

    let mut morphism_count = 0usize;
    let mut within_count = 0usize;
    let mut rows = Vec::with_capacity(total);
    for (map, est) in &estimated {
        let row = match est {
            None => vec![
                map.to_string(),
                yes_no(false),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
            ],
            Some((gap, h)) => {
                morphism_count += 1;
                assert!(
                    h.hi().to_rational()
                        <= &slope * gap.upper().to_rational() + &c_upper,
                    "height/gap consistency failed for {map}"
                );
                assert!(
                    gap.lower().to_rational()
                        <= h.hi().to_rational() + &h_psi_hi + &c_lower,
                    "gap/height consistency failed for {map}"
                );
                let within = gap.upper().to_rational() <= *complexity_bound;
                within_count += usize::from(within);
                vec![
                    map.to_string(),
                    yes_no(true),
                    cell_lo(h.lo()),
                    cell_hi(h.hi()),
                    cell_lo(gap.lower()),
                    cell_hi(gap.upper()),
                    yes_no(within),
                ]
            }
        };
        rows.push(row);
    }

    Ok(ExperimentReport {
        title: "bounded-distance finiteness search".into(),
        config: vec![
            ("schema".into(), "finiteness/1".into()),
            ("dimension".into(), n.to_string()),
            ("degree".into(), d.to_string()),
            ("reference".into(), psi.map().to_string()),
            ("coeff_bound".into(), coeff_bound.to_string()),
            ("complexity_bound".into(), complexity_bound.to_string()),
            ("sample_bound".into(), sample_bound.to_string()),
            ("eps".into(), eps.to_string()),
            ("precision_bits".into(), precision_bits.to_string()),
        ],
        columns: ["map", "morphism", "h_lo", "h_hi", "gap_lower", "gap_upper", "within_bound"]
            .map(String::from)
            .to_vec(),
        rows,
        summary: vec![
            ("candidates_total".into(), total.to_string()),
            ("morphism_count".into(), morphism_count.to_string()),
            ("non_morphism_count".into(), (total - morphism_count).to_string()),
            ("within_bound_count".into(), within_count.to_string()),
            ("consistency_slope".into(), slope.to_string()),
            ("c_height_measured".into(), cell_rational(&c_upper, Round::Ceil)),
            ("c_gap_measured".into(), cell_rational(&c_lower, Round::Ceil)),
        ],
    })
}
