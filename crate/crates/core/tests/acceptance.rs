//! Acceptance suite. Every comparison is exact; each criterion prints one
//! PASS or FAIL line and the process fails if any criterion does.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use folia::bundle::BundleVariety;
use folia::catalog::{mixed_record, standard_catalog, Catalog};
use folia::foliation::{fibration_foliation, wps_coordinate_foliation, LeafRc, Recipe};
use folia::lattice::{Class2, Rational};
use folia::rank_one::WeightedProjectiveSpace;
use folia::synthesis::{certify_case1, synth_fano_index, synth_generalized_index, ExampleRecord};
use folia::variety::VarietyModel;
use folia::verification::{check_records, compute_invariants, IndexOracle, OracleGrid, Outcome};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduced fractions `p/q` with `q <= q_max` in `(0, hi]`.
fn targets(hi: i64, q_max: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for den in 1..=q_max {
        for num in 1..=hi * den {
            if gcd(num, den) == 1 {
                out.push(q(num, den));
            }
        }
    }
    out
}

fn no_failed_checks(rec: &ExampleRecord) -> Result<(), String> {
    match rec.checks.iter().find(|c| c.outcome == Outcome::Fail) {
        Some(c) => Err(format!("{}: check {} failed: {}", rec.id, c.name, c.detail)),
        None => Ok(()),
    }
}

fn index_formula_vs_oracle() -> Verdict {
    let start = Instant::now();
    let grid = OracleGrid {
        big_not_ample_only: true,
        ..OracleGrid::default()
    };
    // Both cones, and so the oracle value, depend only on (m, b1).
    let mut oracles: HashMap<(i64, i64), IndexOracle> = HashMap::new();
    let mut values: HashMap<(i64, i64, i64, i64), Rational> = HashMap::new();
    let mut cases = 0usize;
    for x in grid.bundles() {
        let (m, b1) = (x.m() as i64, x.b1() as i64);
        for beta in -6i64..=6 {
            for gamma in -6i64..=6 {
                let big = beta > 0 && gamma > -m * beta;
                let ample = beta > 0 && gamma > b1 * beta;
                if !big || ample {
                    continue;
                }
                let d = Class2::ints(beta, gamma);
                let expected = q(m * beta + gamma, m + b1 + 1);
                let (closed, _) = x.generalized_index(&d).map_err(|e| e.to_string())?;
                let oracle_value = match values.get(&(m, b1, beta, gamma)) {
                    Some(v) => v.clone(),
                    None => {
                        let oracle = match oracles.get(&(m, b1)) {
                            Some(o) => o,
                            None => {
                                let o = IndexOracle::new(&x, 6, 40).map_err(|e| e.to_string())?;
                                oracles.entry((m, b1)).or_insert(o)
                            }
                        };
                        let v = oracle.value(&d).map_err(|e| e.to_string())?;
                        values.insert((m, b1, beta, gamma), v.clone());
                        v
                    }
                };
                ensure(closed == expected && oracle_value == expected, || {
                    format!(
                        "X(k={}, m={m}, b={:?}) D={d}: closed {closed}, expected {expected}, oracle {oracle_value}",
                        x.base_dim(),
                        x.b()
                    )
                })?;
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(cases > 0, || "empty grid".into())?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{cases} classes agree, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn hirzebruch_series() -> Verdict {
    for a in 2..=10u32 {
        let x = BundleVariety::hirzebruch(a).map_err(|e| e.to_string())?;
        let inv = compute_invariants(&fibration_foliation(&x)).map_err(|e| e.to_string())?;
        let expected = q(a as i64 - 1, a as i64);
        ensure(inv.gen_index.as_ref() == Some(&expected), || {
            format!("a={a}: gen_index {:?}", inv.gen_index)
        })?;
        let (h0, eps) = x.seshadri_polarization();
        ensure(h0 == Class2::ints(1, 1) && eps == Rational::one(), || {
            format!("a={a}: polarization {h0} with epsilon {eps}")
        })?;
        ensure(
            inv.seshadri_index_polarization.as_ref() == Some(&expected),
            || {
                format!(
                    "a={a}: epsilon(iota_hat H0) {:?}",
                    inv.seshadri_index_polarization
                )
            },
        )?;
    }
    Ok("a = 2..10".into())
}

fn generalized_index_synthesis() -> Verdict {
    let mut count = 0;
    let mut case1 = 0;
    for (r, n) in [(1u32, 3u32), (2, 3), (2, 4), (3, 4), (3, 5)] {
        for c in targets(r as i64, 8) {
            let rec = synth_generalized_index(n, r, &c)
                .map_err(|e| format!("(n={n}, r={r}, c={c}): {e}"))?;
            ensure(rec.invariants.gen_index.as_ref() == Some(&c), || {
                format!("(n={n}, r={r}, c={c}): got {:?}", rec.invariants.gen_index)
            })?;
            ensure(rec.variety.dim() == n, || {
                format!("{}: dimension {}", rec.id, rec.variety.dim())
            })?;
            if let Some(params) = rec.parameters.as_ref().filter(|p| p.branch == "case1") {
                certify_case1(params).map_err(|e| format!("{}: {e}", rec.id))?;
                case1 += 1;
            }
            no_failed_checks(&rec)?;
            count += 1;
        }
    }
    for a in 2..=8i64 {
        let c = q(a - 1, a);
        let rec = synth_generalized_index(2, 1, &c).map_err(|e| format!("(n=2, c={c}): {e}"))?;
        ensure(
            rec.branch == "hirzebruch" && rec.invariants.gen_index.as_ref() == Some(&c),
            || {
                format!(
                    "(n=2, c={c}): {} {:?}",
                    rec.branch, rec.invariants.gen_index
                )
            },
        )?;
        no_failed_checks(&rec)?;
        count += 1;
    }
    ensure(case1 > 0, || "no case-1 records".into())?;
    Ok(format!("{count} records, {case1} case-1 certificates"))
}

fn fano_index_synthesis() -> Verdict {
    let mut cones = 0;
    let mut weighted = 0;
    for n in 3..=6u32 {
        for r in 1..n {
            let hi = r.min(n - 2) as i64;
            for c in targets(hi, 8).into_iter().filter(|c| !c.is_integer()) {
                let rec = synth_fano_index(n, r, &c)
                    .map_err(|e| format!("(n={n}, r={r}, c={c}): {e}"))?;
                let inv = &rec.invariants;
                ensure(
                    rec.branch == "cone"
                        && inv.fano_index.as_ref() == Some(&c)
                        && inv.gen_index.as_ref() == Some(&c)
                        && inv.seshadri_antican.as_ref() == Some(&c),
                    || format!("(n={n}, r={r}, c={c}): {} {inv:?}", rec.branch),
                )?;
                no_failed_checks(&rec)?;
                cones += 1;
            }
        }
    }
    for n in 3..=6u32 {
        for a in 2..=8i64 {
            let c = Rational::from(n as i64 - 2) + q(1, a);
            let rec = synth_fano_index(n, n - 1, &c).map_err(|e| format!("(n={n}, c={c}): {e}"))?;
            let mut weights = vec![1u32, 1, 1];
            weights.extend(std::iter::repeat_n(a as u32, n as usize - 2));
            let expected_variety = VarietyModel::Wps(
                WeightedProjectiveSpace::new(weights).map_err(|e| e.to_string())?,
            );
            ensure(
                rec.variety == expected_variety && rec.invariants.fano_index.as_ref() == Some(&c),
                || {
                    format!(
                        "(n={n}, c={c}): {} {:?}",
                        rec.variety, rec.invariants.fano_index
                    )
                },
            )?;
            no_failed_checks(&rec)?;
            weighted += 1;
        }
    }
    Ok(format!("{cones} cone records, {weighted} weighted records"))
}

fn wps_invariants(weights: Vec<u32>, j: u32) -> Result<(Rational, Rational), String> {
    let w = WeightedProjectiveSpace::new(weights.clone()).map_err(|e| e.to_string())?;
    let f = wps_coordinate_foliation(&w, j).map_err(|e| e.to_string())?;
    let inv = compute_invariants(&f).map_err(|e| e.to_string())?;
    match (inv.fano_index, inv.seshadri_antican) {
        (Some(i), Some(e)) => Ok((i, e)),
        other => Err(format!("{weights:?} j={j}: {other:?}")),
    }
}

fn weighted_tables() -> Verdict {
    let mut count = 0;
    for n in 3..=6i64 {
        for m in 1..=7i64 {
            let mut weights = vec![1u32, 1, 1];
            weights.extend(std::iter::repeat_n(m as u32, n as usize - 2));
            let expected = Rational::from(n - 2) + q(1, m);
            let got = wps_invariants(weights, 1)?;
            ensure(got == (expected.clone(), expected.clone()), || {
                format!("case 1 n={n} m={m}: {got:?}")
            })?;
            count += 1;
        }
        for m in 2..=7i64 {
            for mp in (1..m).filter(|mp| gcd(*mp, m) == 1) {
                let mut weights = vec![1u32];
                weights.extend(std::iter::repeat_n(mp as u32, n as usize - 1));
                weights.push(m as u32);
                let iota = q((n - 2) * mp + m, mp * m);
                let eps = Rational::one() + q((n - 2) * mp, m);
                let got = wps_invariants(weights, 1)?;
                ensure(got == (iota.clone(), eps.clone()), || {
                    format!("case 2 n={n} m'={mp} m={m}: {got:?}, expected ({iota}, {eps})")
                })?;
                count += 1;
            }
        }
    }
    for a1 in 1..=7i64 {
        for a2 in (a1..=7).filter(|a2| gcd(a1, *a2) == 1) {
            let got = wps_invariants(vec![1, a1 as u32, a2 as u32], 1)?;
            ensure(got == (q(1, a1), Rational::one()), || {
                format!("case 3 ({a1},{a2}): {got:?}")
            })?;
            let got = wps_invariants(vec![1, a1 as u32, a2 as u32], 2)?;
            ensure(got == (q(1, a2), q(a1, a2)), || {
                format!("case 4 ({a1},{a2}): {got:?}")
            })?;
            count += 2;
        }
    }
    Ok(format!("{count} weighted instances"))
}

fn mixed_example() -> Verdict {
    for r in 2..=4i64 {
        let rec = mixed_record(r as u32).map_err(|e| e.to_string())?;
        let VarietyModel::Bundle(x) = &rec.variety else {
            return Err(format!("r={r}: ambient {}", rec.variety));
        };
        ensure(
            x.base_dim() as i64 == r + 2
                && x.m() == 1
                && x.b() == vec![(r - 2) as u32; r as usize].as_slice(),
            || format!("r={r}: ambient {}", rec.variety),
        )?;
        ensure(rec.variety.dim() as i64 == 2 * r + 2, || {
            format!("r={r}: dimension {}", rec.variety.dim())
        })?;
        let antican = Class2::ints(r + 1, (r + 1) * (r - 2) + 1);
        ensure(
            rec.foliation.minus_canonical().as_bundle() == Some(&antican),
            || format!("r={r}: -K_F = {}", rec.foliation.minus_canonical()),
        )?;
        let inv = &rec.invariants;
        ensure(
            inv.fano_index == Some(Rational::one()) && inv.gen_index == Some(Rational::from(r)),
            || {
                format!(
                    "r={r}: iota {:?}, iota_hat {:?}",
                    inv.fano_index, inv.gen_index
                )
            },
        )?;
        let oracle = IndexOracle::new(x, 6, 40)
            .and_then(|o| o.value(&antican))
            .map_err(|e| e.to_string())?;
        ensure(oracle == Rational::from(r), || {
            format!("r={r}: oracle {oracle}")
        })?;
        no_failed_checks(&rec)?;
    }
    Ok("r = 2, 3, 4: iota = 1 < r = iota_hat".into())
}

const THEOREM_CHECKS: [&str; 6] = [
    "algebraic_rank_vs_gen_index",
    "algebraic_rank_vs_fano_index",
    "fano_below_gen_index",
    "seshadri_bound",
    "rc_consistency",
    "seshadri_equality",
];

fn theorem_suite() -> Verdict {
    let cat = standard_catalog().map_err(|e| e.to_string())?;
    ensure(cat.records.len() >= 500, || {
        format!("only {} records", cat.records.len())
    })?;
    let reports = check_records(&cat.records);
    let mut evaluated = 0;
    for report in &reports {
        for name in THEOREM_CHECKS {
            ensure(report.outcome(name).is_some(), || {
                format!("{}: {name} missing", report.record)
            })?;
        }
        if let Some(c) = report.failures().next() {
            return Err(format!(
                "{}: {} failed: {}",
                report.record, c.name, c.detail
            ));
        }
        evaluated += report
            .checks
            .iter()
            .filter(|c| c.outcome == Outcome::Pass)
            .count();
    }
    let boundary: Vec<_> = cat
        .records
        .iter()
        .zip(&reports)
        .filter(|(rec, _)| {
            let ra = Rational::from(rec.foliation.algebraic_rank as i64);
            rec.foliation.leaf_rc == LeafRc::False
                && rec.invariants.seshadri_antican.as_ref() == Some(&(ra - Rational::one()))
        })
        .collect();
    ensure(!boundary.is_empty(), || "no boundary records".into())?;
    for (rec, report) in &boundary {
        ensure(
            report.outcome("rc_consistency") == Some(Outcome::Pass),
            || format!("{}: rc_consistency", rec.id),
        )?;
    }
    let genus = cat
        .records
        .iter()
        .filter(|r| {
            matches!(r.foliation.recipe, Recipe::ConeInduced { .. })
                && r.foliation.leaf_rc == LeafRc::False
        })
        .count();
    ensure(genus > boundary.len(), || {
        "no genus records below the boundary".into()
    })?;
    Ok(format!(
        "{} records, {evaluated} passing checks, {} boundary records",
        cat.records.len(),
        boundary.len()
    ))
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_folia"))
        .args(args)
        .env_remove("FOLIA_OUT")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn determinism_and_round_trip() -> Verdict {
    let commands: [&[&str]; 8] = [
        &[
            "synth",
            "--kind",
            "generalized-index",
            "--n",
            "3",
            "--r",
            "2",
            "--c",
            "3/2",
            "--out",
            "json",
        ],
        &[
            "synth", "--kind", "seshadri", "--n", "2", "--r", "1", "--c", "2/3", "--out", "csv",
        ],
        &[
            "synth",
            "--kind",
            "fano-index",
            "--n",
            "4",
            "--r",
            "2",
            "--c",
            "3/2",
            "--out",
            "table",
        ],
        &["table", "--family", "hirzebruch", "--a", "2..6"],
        &["table", "--family", "case1", "--out", "json"],
        &["verify", "--grid", "standard", "--out", "json"],
        &["info"],
        &["catalog", "export"],
    ];
    for args in commands {
        let first = run_bin(args)?;
        let second = run_bin(args)?;
        ensure(first == second, || format!("{args:?} differs between runs"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let a_str = a.to_str().ok_or("non-utf8 path")?;
    let b_str = b.to_str().ok_or("non-utf8 path")?;
    run_bin(&["catalog", "export", "--output", a_str])?;
    run_bin(&["catalog", "import", a_str, "--output", b_str])?;
    let (ta, tb) = (
        std::fs::read(&a).map_err(|e| e.to_string())?,
        std::fs::read(&b).map_err(|e| e.to_string())?,
    );
    ensure(ta == tb, || {
        "export/import/export changed the catalog".into()
    })?;
    let text = String::from_utf8(ta).map_err(|e| e.to_string())?;
    let reexported = Catalog::from_json(&text)
        .and_then(|c| c.to_json())
        .map_err(|e| e.to_string())?;
    ensure(reexported == text, || {
        "library round trip changed the catalog".into()
    })?;
    ensure(
        standard_catalog().and_then(|c| c.to_json()).ok().as_deref() == Some(text.as_str()),
        || "binary export differs from the library catalog".into(),
    )?;
    Ok(format!(
        "{} commands repeated, {} byte catalog round trip",
        commands.len(),
        text.len()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "generalized index closed form equals formula and oracle",
            index_formula_vs_oracle,
        ),
        ("Hirzebruch series iota_hat = 1 - 1/a", hirzebruch_series),
        ("generalized index synthesis", generalized_index_synthesis),
        ("Fano index synthesis", fano_index_synthesis),
        ("weighted projective sub-cases", weighted_tables),
        ("mixed example iota < iota_hat", mixed_example),
        ("theorem suite over the standard catalog", theorem_suite),
        (
            "determinism and catalog round trip",
            determinism_and_round_trip,
        ),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
