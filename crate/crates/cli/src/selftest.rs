//! The acceptance suite behind `symprod selftest`.
//!
//! Each criterion draws its randomness from `rng::stream(seed, tag | i)`
//! with a per-criterion tag, so artifacts depend only on the seed.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use symprod::domains::{Membership, PlanarDomain};
use symprod::invmetrics::{
    carath_lower, divergence_probe, exhaustion_value, lempert_upper_disc_search, lempert_upper_permutation,
    DiscSearchConfig, Sequence, OMEGA_GRID,
};
use symprod::peaks::{symmetric_peak, verify_peak, Approach, PeakVerdict};
use symprod::rng;
use symprod::symgeo::{
    arrangement, classify, entire_curve_witness, intersection_space, separating_hyperplane, SymProduct, Verdict,
    EXP_CURVE_TAG,
};
use symprod::sympoly::{match_roots, monic_eval, roots_of_point, symmetrize, ComplexPoint, RootMultiset};

use crate::{Artifact, CliError, CliResult};

pub const CRITERIA: usize = 9;

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub artifact: Value,
    /// Extra tabular artifact (file name, CSV body).
    #[serde(skip)]
    pub table: Option<(String, String)>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<26} {}  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

fn stream(seed: u64, id: usize, index: u64) -> rand_chacha::ChaCha8Rng {
    rng::stream(seed, ((id as u64) << 40) | index)
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Runs one criterion (1–9).
pub fn check(id: usize, seed: u64) -> Outcome {
    match id {
        1 => round_trip(seed),
        2 => arrangement_equivalence(seed),
        3 => linear_convexity(seed),
        4 => general_position(seed),
        5 => classification(seed),
        6 => calibration(seed),
        7 => divergence(),
        8 => exhaustion(seed),
        9 => peak(seed),
        _ => panic!("no criterion {id}"),
    }
}

fn outcome(id: usize, name: &'static str, passed: bool, detail: String, artifact: Value) -> Outcome {
    Outcome {
        id,
        name,
        passed,
        detail,
        artifact,
        table: None,
    }
}

fn round_trip(seed: u64) -> Outcome {
    const CASES: usize = 10_000;
    let errors: Vec<(usize, Result<f64, String>)> = (0..CASES)
        .into_par_iter()
        .map(|i| {
            let n = 2 + i % 5;
            let mut r = stream(seed, 1, i as u64);
            let roots = loop {
                let roots: Vec<_> = (0..n).map(|_| rng::in_disc(&mut r, origin(), 1.0)).collect();
                if RootMultiset::new(roots.clone()).collision_gap() > 1e-3 {
                    break roots;
                }
            };
            let err = symmetrize(&roots)
                .and_then(|z| roots_of_point(&z))
                .and_then(|found| match_roots(&RootMultiset::new(roots), &found))
                .map(|m| m.max_error)
                .map_err(|e| e.to_string());
            (n, err)
        })
        .collect();
    let mut per_n = Vec::new();
    let mut failures = 0;
    for n in 2..=6 {
        let errs: Vec<_> = errors.iter().filter(|(m, _)| *m == n).map(|(_, e)| e).collect();
        let bad = errs.iter().filter(|e| !matches!(e, Ok(x) if *x < 1e-8)).count();
        let worst = errs.iter().filter_map(|e| e.as_ref().ok()).fold(0.0_f64, |a, b| a.max(*b));
        failures += bad;
        per_n.push(json!({"n": n, "cases": errs.len(), "failures": bad, "max_error": worst}));
    }
    let worst = errors.iter().filter_map(|(_, e)| e.as_ref().ok()).fold(0.0_f64, |a, b| a.max(*b));
    outcome(
        1,
        "root round trip",
        failures == 0,
        format!("{CASES} tuples, {failures} failures, max error {worst:.3e}"),
        json!({"seed": seed, "cases": CASES, "tolerance": 1e-8, "per_n": per_n, "failures": failures}),
    )
}

fn arrangement_equivalence(seed: u64) -> Outcome {
    const CASES: usize = 10_000;
    let mut r = stream(seed, 2, u64::from(u32::MAX));
    let random: Vec<Complex64> = (0..6).map(|_| rng::in_square(&mut r, 2.0)).collect();
    let sets = [
        ("zero_one", vec![origin(), Complex64::new(1.0, 0.0)]),
        ("random_six", random),
    ];
    let mut passed = true;
    let mut reports = Vec::new();
    let mut detail = Vec::new();
    for (set_index, (label, punctures)) in sets.iter().enumerate() {
        let arr = match arrangement(punctures, 2) {
            Ok(a) => a,
            Err(e) => return outcome(2, "arrangement equivalence", false, e.to_string(), json!({"seed": seed})),
        };
        let s = SymProduct::new(PlanarDomain::complement_finite(punctures.clone()).expect("distinct"), 2)
            .expect("n = 2");
        let results: Vec<Option<bool>> = (0..CASES)
            .into_par_iter()
            .map(|i| {
                let mut r = stream(seed, 2, ((set_index as u64) << 32) | i as u64);
                let z = if i % 4 == 0 {
                    symmetrize(&[punctures[i % punctures.len()], rng::in_square(&mut r, 3.0)]).ok()?
                } else {
                    ComplexPoint::new(vec![rng::in_square(&mut r, 3.0), rng::in_square(&mut r, 3.0)]).ok()?
                };
                let near = punctures.iter().any(|m| {
                    let v = monic_eval(&z, *m).norm();
                    v > 0.0 && v <= 1e-6
                });
                if near {
                    return None;
                }
                let by_roots = s.member(&z).map(|v| v.state == Membership::In).ok()?;
                Some(by_roots == arr.complement_contains(&z))
            })
            .collect();
        let evaluated = results.iter().filter(|x| x.is_some()).count();
        let agree = results.iter().filter(|x| **x == Some(true)).count();
        passed &= agree == evaluated;
        detail.push(format!("{label}: {agree}/{evaluated}"));
        reports.push(json!({
            "punctures": punctures,
            "sampled": CASES,
            "evaluated": evaluated,
            "agree": agree,
            "excluded_near_hyperplane": CASES - evaluated,
        }));
    }
    outcome(
        2,
        "arrangement equivalence",
        passed,
        detail.join(", "),
        json!({"seed": seed, "sets": reports}),
    )
}

fn linear_convexity(seed: u64) -> Outcome {
    const POINTS: usize = 1_000;
    const ON_PLANE: usize = 100;
    let cases: [(&str, PlanarDomain); 2] = [
        ("unit_disc", PlanarDomain::UnitDisc),
        (
            "c_minus_0_1",
            PlanarDomain::complement_finite(vec![origin(), Complex64::new(1.0, 0.0)]).expect("distinct"),
        ),
    ];
    let mut passed = true;
    let mut reports = Vec::new();
    let mut detail = Vec::new();
    for (case_index, (label, base)) in cases.iter().enumerate() {
        let s = SymProduct::new(base.clone(), 2).expect("n = 2");
        let results: Vec<(bool, f64)> = (0..POINTS)
            .into_par_iter()
            .map(|i| {
                let mut r = stream(seed, 3, ((case_index as u64) << 32) | i as u64);
                let w = match base {
                    PlanarDomain::UnitDisc => symmetrize(&[
                        rng::in_disc(&mut r, origin(), 1.0),
                        rng::in_annulus(&mut r, 1.0 + 1e-6, 3.0),
                    ]),
                    _ => {
                        let mu = base.punctures()[r.gen_range(0..2)];
                        symmetrize(&[mu, rng::in_square(&mut r, 3.0)])
                    }
                };
                let Ok(w) = w else { return (false, f64::NAN) };
                let Ok(h) = separating_hyperplane(&s, &w) else { return (false, f64::NAN) };
                let residual = h.eval(&w).norm();
                let Ok(space) = intersection_space(&[h.witness], 2) else { return (false, residual) };
                let all_out = (0..ON_PLANE).all(|_| {
                    space
                        .sample(&mut r, 2.0)
                        .and_then(|z| s.member(&z))
                        .is_ok_and(|v| v.state != Membership::In)
                });
                (residual < 1e-9 && all_out, residual)
            })
            .collect();
        let ok = results.iter().filter(|(ok, _)| *ok).count();
        let worst = results.iter().map(|(_, r)| *r).fold(0.0_f64, f64::max);
        passed &= ok == POINTS;
        detail.push(format!("{label}: {ok}/{POINTS}"));
        reports.push(json!({"base": base, "points": POINTS, "success": ok, "max_residual": worst}));
    }
    outcome(
        3,
        "linear convexity",
        passed,
        detail.join(", "),
        json!({"seed": seed, "plane_samples": ON_PLANE, "cases": reports}),
    )
}

fn general_position(seed: u64) -> Outcome {
    const SETS: usize = 10;
    let mut passed = true;
    let mut reports = Vec::new();
    let mut checked = 0;
    for n in [2usize, 3] {
        for set in 0..SETS {
            let mut r = stream(seed, 4, ((n as u64) << 32) | set as u64);
            let punctures: Vec<Complex64> = (0..2 * n + 3).map(|_| rng::in_square(&mut r, 2.0)).collect();
            match arrangement(&punctures, n) {
                Ok(arr) => {
                    passed &= arr.report.general_position;
                    checked += arr.report.subsets_checked;
                    reports.push(json!({
                        "n": n,
                        "punctures": punctures,
                        "subsets_checked": arr.report.subsets_checked,
                        "failures": arr.report.failures,
                    }));
                }
                Err(e) => {
                    passed = false;
                    reports.push(json!({"n": n, "punctures": punctures, "error": e.to_string()}));
                }
            }
        }
    }
    outcome(
        4,
        "general position",
        passed,
        format!("{} arrangements, {checked} subsets", reports.len()),
        json!({"seed": seed, "rank_tolerance": symprod::tol::RANK, "arrangements": reports}),
    )
}

fn classification(seed: u64) -> Outcome {
    let mut passed = true;
    let mut table = Vec::new();
    for n in [2usize, 3] {
        for count in 1..=8usize {
            let mut r = stream(seed, 5, ((n as u64) << 32) | count as u64);
            let punctures: Vec<Complex64> = (0..count).map(|_| rng::in_square(&mut r, 2.0)).collect();
            let s = SymProduct::new(PlanarDomain::complement_finite(punctures).expect("distinct"), n).expect("n");
            let c = classify(&s);
            let expected = if count >= 2 * n {
                Verdict::KobayashiComplete
            } else {
                Verdict::NotHyperbolic
            };
            passed &= c.verdict == expected && c.threshold == 2 * n;
            table.push(json!({"n": n, "punctures": count, "verdict": c.verdict, "expected": expected}));
        }
    }

    let zero_one = PlanarDomain::complement_finite(vec![origin(), Complex64::new(1.0, 0.0)]).expect("distinct");
    let s = SymProduct::new(zero_one, 2).expect("n = 2");
    let tagged = classify(&s).witness.as_deref() == Some(EXP_CURVE_TAG);
    let curve = entire_curve_witness();
    let checks: Vec<(bool, f64)> = (0..1_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = stream(seed, 5, (1 << 36) | i);
            let lambda = rng::in_square(&mut r, 4.0);
            let Ok(z) = curve.eval(lambda) else { return (false, f64::NAN) };
            let at_one = monic_eval(&z, Complex64::new(1.0, 0.0));
            let at_zero = monic_eval(&z, origin());
            let inside = s.member(&z).is_ok_and(|v| v.state == Membership::In);
            (at_one.norm() >= 1.0 - 1e-12 && at_zero != origin() && inside, (at_one + 1.0).norm())
        })
        .collect();
    let curve_ok = checks.iter().all(|(ok, _)| *ok);
    let deviation = checks.iter().map(|(_, d)| *d).fold(0.0_f64, f64::max);
    passed &= tagged && curve_ok;
    outcome(
        5,
        "classification table",
        passed,
        format!(
            "{} verdicts, curve samples ok: {curve_ok}, max |p(1)+1| = {deviation:.1e}",
            table.len()
        ),
        json!({
            "seed": seed,
            "table": table,
            "witness_tag": tagged,
            "curve_samples": checks.len(),
            "curve_ok": curve_ok,
            "max_deviation_from_minus_one": deviation,
        }),
    )
}

fn calibration(seed: u64) -> Outcome {
    let s = SymProduct::symmetrized_polydisc(2).expect("n = 2");
    let zero = ComplexPoint::new(vec![origin(), origin()]).expect("finite");
    let mut passed = true;
    let mut rows = Vec::new();
    for p in [0.3_f64, 0.6, 0.9] {
        let w = ComplexPoint::new(vec![origin(), Complex64::new(p, 0.0)]).expect("finite");
        let exact = p.atanh();
        let lower = carath_lower(&s, &zero, &w, OMEGA_GRID).map(|b| b.lower);
        let config = DiscSearchConfig {
            seed,
            ..DiscSearchConfig::default()
        };
        let upper = lempert_upper_disc_search(&s, &zero, &w, &config).ok().and_then(|b| b.upper);
        let ok = matches!(lower, Ok(l) if (l - exact).abs() <= 1e-9)
            && matches!(upper, Some(u) if u <= exact + 1e-3);
        passed &= ok;
        rows.push(json!({
            "p": p,
            "atanh_p": exact,
            "lower": lower.ok(),
            "upper": upper,
            "ok": ok,
        }));
    }

    let config = DiscSearchConfig {
        budget: 160,
        starts: 4,
        seed,
        ..DiscSearchConfig::default()
    };
    let pairs: Vec<Value> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut r = stream(seed, 6, i);
            let mut draw = || symmetrize(&[rng::in_disc(&mut r, origin(), 0.95), rng::in_disc(&mut r, origin(), 0.95)]);
            let (Ok(z), Ok(w)) = (draw(), draw()) else { return json!({"ok": false}) };
            let lower = carath_lower(&s, &z, &w, OMEGA_GRID).map(|b| b.lower).ok();
            let perm = lempert_upper_permutation(&s, &z, &w).ok().and_then(|b| b.upper);
            let disc = lempert_upper_disc_search(&s, &z, &w, &config).ok().and_then(|b| b.upper);
            let ok = match (lower, perm, disc) {
                (Some(l), Some(p), Some(d)) => l <= p + 1e-9 && l <= d + 1e-9,
                _ => false,
            };
            json!({"lower": lower, "upper_permutation": perm, "upper_disc": disc, "ok": ok})
        })
        .collect();
    let sandwich = pairs.iter().filter(|v| v["ok"] == true).count();
    passed &= sandwich == pairs.len();
    outcome(
        6,
        "metric calibration",
        passed,
        format!(
            "gaps {}, sandwich {sandwich}/{}",
            rows.iter()
                .map(|r| format!("{:.1e}", r["upper"].as_f64().unwrap_or(f64::NAN) - r["atanh_p"].as_f64().unwrap_or(0.0)))
                .collect::<Vec<_>>()
                .join("/"),
            pairs.len()
        ),
        json!({"seed": seed, "omega_grid": OMEGA_GRID, "calibration": rows, "random_pairs": pairs}),
    )
}

/// First `k` with `atanh(1 − 2^{−k}) > threshold`, by the closed form.
pub fn closed_form_crossing(threshold: f64) -> usize {
    (1..64).find(|&k| (1.0 - 0.5_f64.powi(k)).atanh() > threshold).expect("threshold below atanh(1 - 2^-63)") as usize
}

fn divergence() -> Outcome {
    const K: usize = 20;
    let s = SymProduct::symmetrized_polydisc(2).expect("n = 2");
    let zero = ComplexPoint::new(vec![origin(), origin()]).expect("finite");
    let target = ComplexPoint::new(vec![origin(), Complex64::new(1.0, 0.0)]).expect("finite");
    let report = match divergence_probe(&s, &zero, &Sequence::CoordinateRadial { target }, K, OMEGA_GRID) {
        Ok(r) => r,
        Err(e) => return outcome(7, "divergence", false, e.to_string(), json!({})),
    };
    let deviation = report
        .rows
        .iter()
        .map(|r| (r.c_k - (1.0 - 0.5_f64.powi(r.k as i32)).atanh()).abs())
        .fold(0.0_f64, f64::max);
    let c15 = report.rows[14].c_k;
    let first = report.first_crossing[2];
    let expected_first = closed_form_crossing(5.0);
    let passed = deviation <= 1e-9 && c15 > 5.0 && first == Some(expected_first);
    let mut o = outcome(
        7,
        "divergence",
        passed,
        format!(
            "max |c_k - atanh(1-2^-k)| = {deviation:.1e}, c_15 = {c15:.6}, first k with c_k > 5: {}",
            first.map_or("none".to_string(), |k| k.to_string())
        ),
        json!({
            "K": K,
            "max_deviation": deviation,
            "c_15": c15,
            "first_crossing": report.first_crossing,
            "closed_form_first_crossing_5": expected_first,
            "thresholds": report.thresholds,
        }),
    );
    o.table = Some(("divergence.csv".to_string(), report.to_csv()));
    o
}

fn exhaustion(seed: u64) -> Outcome {
    let s = SymProduct::symmetrized_polydisc(2).expect("n = 2");
    let negative: Vec<bool> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = stream(seed, 8, i);
            symmetrize(&[rng::in_disc(&mut r, origin(), 1.0), rng::in_disc(&mut r, origin(), 1.0)])
                .and_then(|z| exhaustion_value(&s, &z))
                .is_ok_and(|v| v < 0.0)
        })
        .collect();
    let negative = negative.iter().filter(|x| **x).count();

    const CIRCLE: usize = 1024;
    let mean_gaps: Vec<f64> = (0..1_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = stream(seed, 8, (1 << 32) | i);
            loop {
                let roots = [rng::in_disc(&mut r, origin(), 0.9), rng::in_disc(&mut r, origin(), 0.9)];
                let dir = [rng::in_disc(&mut r, origin(), 1.0), rng::in_disc(&mut r, origin(), 1.0)];
                let norm = (dir[0].norm_sqr() + dir[1].norm_sqr()).sqrt();
                let radius = r.gen_range(0.01..0.1);
                if norm < 1e-3 {
                    continue;
                }
                let Ok(a) = symmetrize(&roots) else { continue };
                let Ok(centre) = exhaustion_value(&s, &a) else { continue };
                let values: Option<Vec<f64>> = (0..CIRCLE)
                    .map(|k| {
                        let e = Complex64::from_polar(radius / norm, std::f64::consts::TAU * k as f64 / CIRCLE as f64);
                        let p = ComplexPoint::new(vec![a.coords()[0] + e * dir[0], a.coords()[1] + e * dir[1]]).ok()?;
                        exhaustion_value(&s, &p).ok()
                    })
                    .collect();
                if let Some(values) = values {
                    return values.iter().sum::<f64>() / CIRCLE as f64 - centre;
                }
            }
        })
        .collect();
    let sub_mean_ok = mean_gaps.iter().filter(|g| **g >= -1e-6).count();
    let worst_gap = mean_gaps.iter().cloned().fold(f64::INFINITY, f64::min);

    let near: Vec<bool> = (0..1_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = stream(seed, 8, (2 << 32) | i);
            let edge = rng::in_annulus(&mut r, 1.0 - 1e-4, 1.0);
            let other = rng::in_disc(&mut r, origin(), 1.0);
            symmetrize(&[edge, other])
                .and_then(|z| exhaustion_value(&s, &z))
                .is_ok_and(|v| v > -1e-3)
        })
        .collect();
    let near = near.iter().filter(|x| **x).count();
    let passed = negative == 10_000 && sub_mean_ok == 1_000 && near == 1_000;
    outcome(
        8,
        "exhaustion",
        passed,
        format!("negative {negative}/10000, sub-mean {sub_mean_ok}/1000 (worst {worst_gap:.1e}), near boundary {near}/1000"),
        json!({
            "seed": seed,
            "negative": negative,
            "sub_mean_value_ok": sub_mean_ok,
            "worst_mean_minus_centre": worst_gap,
            "circle_samples": CIRCLE,
            "near_boundary_above_minus_1e-3": near,
        }),
    )
}

fn peak(seed: u64) -> Outcome {
    let s = SymProduct::symmetrized_polydisc(2).expect("n = 2");
    let candidate = match symmetric_peak(&PlanarDomain::UnitDisc, Complex64::new(1.0, 0.0), origin()) {
        Ok(c) => c,
        Err(e) => return outcome(9, "peak verification", false, e.to_string(), json!({})),
    };
    match verify_peak(&candidate, &s, 10_000, &Approach::Radial { steps: 12 }, seed) {
        Ok(report) => {
            let last = report.approach.last().map_or(f64::NAN, |r| r.modulus);
            let passed = report.verdict == PeakVerdict::Pass
                && (report.target_value - 1.0).norm() <= 1e-9
                && report.max_interior_modulus < 1.0
                && (last - 1.0).abs() <= 1e-3;
            outcome(
                9,
                "peak verification",
                passed,
                format!(
                    "{:?}, max interior {:.9}, |G| at k=12 {last:.6}",
                    report.verdict, report.max_interior_modulus
                ),
                serde_json::to_value(&report).unwrap_or(Value::Null),
            )
        }
        Err(e) => outcome(9, "peak verification", false, e.to_string(), json!({})),
    }
}

/// Runs every criterion and writes the artifacts into `dir`.
pub fn run(seed: u64, dir: &Path) -> CliResult<(Vec<Outcome>, Artifact)> {
    let outcomes: Vec<Outcome> = (1..=CRITERIA).map(|id| check(id, seed)).collect();
    fs::create_dir_all(dir).map_err(|e| CliError::Validation(format!("{}: {e}", dir.display())))?;
    let write = |name: &str, body: &str| {
        fs::write(dir.join(name), body).map_err(|e| CliError::Validation(format!("{name}: {e}")))
    };
    for o in &outcomes {
        let mut body = serde_json::to_string_pretty(o).map_err(|e| CliError::Numerical(e.to_string()))?;
        body.push('\n');
        write(&format!("criterion_{:02}.json", o.id), &body)?;
        if let Some((name, csv)) = &o.table {
            write(name, csv)?;
        }
    }
    let summary_json = json!({
        "seed": seed,
        "criteria": outcomes.iter().map(|o| json!({"id": o.id, "name": o.name, "passed": o.passed})).collect::<Vec<_>>(),
        "passed": outcomes.iter().all(|o| o.passed),
    });
    let mut body = serde_json::to_string_pretty(&summary_json).map_err(|e| CliError::Numerical(e.to_string()))?;
    body.push('\n');
    write("selftest.json", &body)?;
    let summary = outcomes.iter().map(Outcome::line).collect::<Vec<_>>().join("\n");
    Ok((outcomes, Artifact { body, summary }))
}
