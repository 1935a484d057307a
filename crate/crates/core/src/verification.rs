//! Invariant computation, the definitional index oracle and the theorem
//! checks run over example records.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleVariety;
use crate::error::{Error, Result};
use crate::foliation::{CanonicalClass, FoliationDescriptor, LeafRc};
use crate::lattice::{Class2, Cone2, Positivity, Rational};
use crate::rank_one::{RankOneClass, RankOneVariety};
use crate::synthesis::{self, ExampleRecord, Kind, SynthesisRequest};
use crate::variety::VarietyModel;

/// Exact invariants of `-K_F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub gen_index: Option<Rational>,
    pub fano_index: Option<Rational>,
    pub seshadri_antican: Option<Rational>,
    /// `epsilon(iota_hat * H)` for the polarization realising the
    /// generalised index.
    pub seshadri_index_polarization: Option<Rational>,
    pub positivity: Positivity,
}

/// Invariants of a rank-one class `s * H`.
pub fn rank_one_invariants(v: RankOneVariety<'_>, d: &RankOneClass) -> Result<InvariantReport> {
    let positivity = Positivity::of_rank_one(&d.s);
    let seshadri = if positivity.nef {
        Some(v.seshadri(d)?)
    } else {
        None
    };
    let (gen_index, fano_index) = if positivity.ample {
        let (g, f) = v.index_pair(d)?;
        (Some(g), Some(f))
    } else {
        (None, None)
    };
    // The index polarization is a multiple of H, so epsilon(iota_hat * H')
    // is epsilon(-K_F) itself.
    let seshadri_index_polarization = if positivity.ample {
        seshadri.clone()
    } else {
        None
    };
    Ok(InvariantReport {
        gen_index,
        fano_index,
        seshadri_antican: seshadri,
        seshadri_index_polarization,
        positivity,
    })
}

/// Invariants of a class on a projective bundle.
pub fn bundle_invariants(x: &BundleVariety, d: &Class2) -> Result<InvariantReport> {
    let positivity = x.classify(d);
    let gen_index = if positivity.big {
        Some(x.generalized_index(d)?.0)
    } else {
        None
    };
    let fano_index = if positivity.ample && d.is_integral() {
        Some(x.fano_index(d)?)
    } else {
        None
    };
    let (h, eps_h) = x.seshadri_polarization();
    // Only multiples of the distinguished polarization have a known
    // Seshadri constant.
    let seshadri_antican = if positivity.nef && h.det(d).is_zero() && !d.beta.is_negative() {
        Some(&d.beta * &eps_h)
    } else {
        None
    };
    let seshadri_index_polarization = gen_index.as_ref().map(|t| t * &eps_h);
    Ok(InvariantReport {
        gen_index,
        fano_index,
        seshadri_antican,
        seshadri_index_polarization,
        positivity,
    })
}

/// Recomputes every invariant of `-K_F` from the descriptor alone.
pub fn compute_invariants(f: &FoliationDescriptor) -> Result<InvariantReport> {
    match (&f.ambient, f.minus_canonical()) {
        (VarietyModel::Bundle(x), CanonicalClass::Bundle(d)) => bundle_invariants(x, &d),
        (ambient, CanonicalClass::RankOne(d)) => {
            let v = ambient.as_rank_one().ok_or_else(|| {
                Error::unsupported(format!("no invariants are modelled on {ambient}"))
            })?;
            rank_one_invariants(v, &d)
        }
        (ambient, _) => Err(Error::domain(format!(
            "canonical class does not live on {ambient}"
        ))),
    }
}

/// Direct optimisation over the definition of the generalised index on a
/// bundle: the largest `t` with `D - tH` pseudo-effective, over integral
/// ample `H = (d, c)` with `1 <= d <= d_max`, `c <= c_max`.
#[derive(Debug, Clone)]
pub struct IndexOracle {
    pseff: Cone2,
    /// Ample witnesses with their coordinates in the pseff ray basis.
    witnesses: Vec<(Rational, Rational)>,
}

impl IndexOracle {
    pub fn new(x: &BundleVariety, d_max: i64, c_max: i64) -> Result<Self> {
        let b1 = x.b1() as i64;
        if d_max < 1 {
            return Err(Error::domain("d_max must be at least 1"));
        }
        if c_max < b1 * d_max + 1 {
            return Err(Error::domain(format!(
                "c_max must be at least b_1 * d_max + 1 = {}",
                b1 * d_max + 1
            )));
        }
        let pseff = x.pseff_cone();
        let nef = x.nef_cone();
        let mut witnesses = Vec::new();
        for d in 1..=d_max {
            for c in -c_max..=c_max {
                let h = Class2::ints(d, c);
                if nef.membership(&h) == crate::lattice::Membership::Interior {
                    witnesses.push(pseff.coordinates(&h));
                }
            }
        }
        Ok(IndexOracle { pseff, witnesses })
    }

    pub fn value(&self, d: &Class2) -> Result<Rational> {
        let (u, v) = self.pseff.coordinates(d);
        if !(u.is_positive() && v.is_positive()) {
            return Err(Error::domain(format!("class {d} is not big")));
        }
        let mut best: Option<Rational> = None;
        for (hu, hv) in &self.witnesses {
            // Largest t keeping both pseff coordinates of D - tH non-negative.
            let mut t: Option<Rational> = None;
            for (dc, hc) in [(&u, hu), (&v, hv)] {
                if hc.is_positive() {
                    let bound = dc / hc;
                    t = Some(match t {
                        Some(cur) => cur.min(bound),
                        None => bound,
                    });
                }
            }
            let t = t.ok_or_else(|| {
                Error::Internal("ample witness with no positive coordinate".into())
            })?;
            best = Some(match best {
                Some(cur) => cur.max(t),
                None => t,
            });
        }
        best.ok_or_else(|| Error::Internal("no ample witness in range".into()))
    }
}

pub fn oracle_generalized_index(
    x: &BundleVariety,
    d: &Class2,
    d_max: i64,
    c_max: i64,
) -> Result<Rational> {
    IndexOracle::new(x, d_max, c_max)?.value(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skip => "skip",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub record: String,
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    pub fn outcome(&self, name: &str) -> Option<Outcome> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.outcome)
    }
}

pub const CHECK_NAMES: [&str; 14] = [
    "type_invariants",
    "ambient",
    "canonical_recipe",
    "invariants_recomputed",
    "request_target",
    "case1_constraints",
    "oracle_index",
    "algebraic_rank_vs_gen_index",
    "algebraic_rank_vs_fano_index",
    "fano_below_gen_index",
    "seshadri_bound",
    "seshadri_bound_polarization",
    "rc_consistency",
    "seshadri_equality",
];

fn outcome(name: &str, o: Outcome, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        outcome: o,
        detail: detail.into(),
    }
}

fn pass(name: &str, detail: impl Into<String>) -> CheckOutcome {
    outcome(name, Outcome::Pass, detail)
}

fn fail(name: &str, detail: impl Into<String>) -> CheckOutcome {
    outcome(name, Outcome::Fail, detail)
}

fn skip(name: &str, detail: impl Into<String>) -> CheckOutcome {
    outcome(name, Outcome::Skip, detail)
}

fn verdict(name: &str, ok: bool, detail: String) -> CheckOutcome {
    if ok {
        pass(name, detail)
    } else {
        fail(name, detail)
    }
}

fn show(v: &Option<Rational>) -> String {
    v.as_ref()
        .map_or_else(|| "null".to_string(), |r| r.to_string())
}

/// `r^a >= value` for an optional invariant.
fn bound_check(name: &str, ra: &Rational, value: &Option<Rational>, label: &str) -> CheckOutcome {
    match value {
        None => skip(name, format!("{label} absent")),
        Some(v) => verdict(name, ra >= v, format!("r^a = {ra}, {label} = {v}")),
    }
}

fn request_target(
    req: &SynthesisRequest,
    rec: &ExampleRecord,
    inv: &InvariantReport,
) -> CheckOutcome {
    const NAME: &str = "request_target";
    let f = &rec.foliation;
    if f.algebraic_rank != req.r || f.ambient.dim() != req.n {
        return fail(
            NAME,
            format!(
                "requested (n, r) = ({}, {}), record has ({}, {})",
                req.n,
                req.r,
                f.ambient.dim(),
                f.algebraic_rank
            ),
        );
    }
    let c = Some(req.c.clone());
    let (ok, detail) = match req.kind {
        Kind::GeneralizedIndex => (
            inv.gen_index == c && inv.seshadri_index_polarization == c,
            format!(
                "gen_index = {}, epsilon(gen_index H) = {}, target {}",
                show(&inv.gen_index),
                show(&inv.seshadri_index_polarization),
                req.c
            ),
        ),
        Kind::FanoIndex => (
            inv.fano_index == c && inv.gen_index == c,
            format!(
                "fano_index = {}, gen_index = {}, target {}",
                show(&inv.fano_index),
                show(&inv.gen_index),
                req.c
            ),
        ),
        Kind::Seshadri => (
            inv.seshadri_antican == c,
            format!(
                "seshadri_antican = {}, target {}",
                show(&inv.seshadri_antican),
                req.c
            ),
        ),
    };
    verdict(NAME, ok, detail)
}

/// Runs every check against a record. Invariants are recomputed from the
/// foliation descriptor; the stored ones are only compared.
pub fn check_record(rec: &ExampleRecord) -> CheckReport {
    let f = &rec.foliation;
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());

    checks.push(match f.validate() {
        Ok(()) => pass(
            "type_invariants",
            format!("rank {}, r^a {}", f.rank, f.algebraic_rank),
        ),
        Err(e) => fail("type_invariants", e.to_string()),
    });
    checks.push(verdict(
        "ambient",
        rec.variety == f.ambient,
        format!(
            "record variety {}, foliation ambient {}",
            rec.variety, f.ambient
        ),
    ));
    checks.push(match f.recompute_canonical() {
        Ok(k) => verdict(
            "canonical_recipe",
            k == f.canonical,
            format!("stored K_F = {}, recipe gives {}", f.canonical, k),
        ),
        Err(e) => fail("canonical_recipe", e.to_string()),
    });

    let inv = match compute_invariants(f) {
        Ok(inv) => {
            checks.push(verdict(
                "invariants_recomputed",
                inv == rec.invariants,
                format!(
                    "stored (gen, fano, eps) = ({}, {}, {}), recomputed ({}, {}, {})",
                    show(&rec.invariants.gen_index),
                    show(&rec.invariants.fano_index),
                    show(&rec.invariants.seshadri_antican),
                    show(&inv.gen_index),
                    show(&inv.fano_index),
                    show(&inv.seshadri_antican)
                ),
            ));
            inv
        }
        Err(e) => {
            checks.push(fail("invariants_recomputed", e.to_string()));
            // Continue with the stored values so the theorem checks still
            // report on what the record claims.
            rec.invariants.clone()
        }
    };

    checks.push(match &rec.request {
        Some(req) => request_target(req, rec, &inv),
        None => skip("request_target", "no synthesis request"),
    });

    checks.push(match (&rec.parameters, &rec.variety) {
        (Some(p), VarietyModel::Bundle(x)) if p.branch == "case1" => {
            match synthesis::certify_case1(p) {
                Ok(()) => verdict(
                    "case1_constraints",
                    x.m() as u64 == p.q && x.b() == p.b_list.as_slice(),
                    format!("l = {}, b = {:?}", p.l.unwrap_or(0), p.b_list),
                ),
                Err(e) => fail("case1_constraints", e.to_string()),
            }
        }
        _ => skip("case1_constraints", "not a case-1 record"),
    });

    checks.push(match (&rec.variety, f.minus_canonical()) {
        (VarietyModel::Bundle(x), CanonicalClass::Bundle(d)) if x.classify(&d).big => {
            let d_max = 3;
            let c_max = x.b1() as i64 * d_max + d_max;
            match oracle_generalized_index(x, &d, d_max, c_max) {
                Ok(o) => verdict(
                    "oracle_index",
                    inv.gen_index.as_ref() == Some(&o),
                    format!("formula {}, oracle {}", show(&inv.gen_index), o),
                ),
                Err(e) => fail("oracle_index", e.to_string()),
            }
        }
        _ => skip("oracle_index", "not a big class on a bundle"),
    });

    let ra = Rational::from(f.algebraic_rank);
    checks.push(bound_check(
        "algebraic_rank_vs_gen_index",
        &ra,
        &inv.gen_index,
        "gen_index",
    ));
    checks.push(bound_check(
        "algebraic_rank_vs_fano_index",
        &ra,
        &inv.fano_index,
        "fano_index",
    ));
    checks.push(match (&inv.fano_index, &inv.gen_index) {
        (Some(i), Some(g)) => verdict("fano_below_gen_index", i <= g, format!("fano {i}, gen {g}")),
        (Some(i), None) => fail(
            "fano_below_gen_index",
            format!("fano {i} without gen_index"),
        ),
        _ => skip("fano_below_gen_index", "fano_index absent"),
    });
    checks.push(if inv.positivity.nef {
        bound_check(
            "seshadri_bound",
            &ra,
            &inv.seshadri_antican,
            "epsilon(-K_F)",
        )
    } else {
        skip("seshadri_bound", "-K_F not nef")
    });
    checks.push(bound_check(
        "seshadri_bound_polarization",
        &ra,
        &inv.seshadri_index_polarization,
        "epsilon(gen_index H)",
    ));
    checks.push(rc_consistency(f, &inv, &ra));
    checks.push(seshadri_equality(f, &inv, &ra));

    CheckReport {
        record: rec.id.clone(),
        checks,
    }
}

fn rc_consistency(f: &FoliationDescriptor, inv: &InvariantReport, ra: &Rational) -> CheckOutcome {
    const NAME: &str = "rc_consistency";
    let threshold = ra - Rational::one();
    let direct = inv
        .seshadri_antican
        .as_ref()
        .filter(|_| inv.positivity.nef && inv.positivity.big);
    let witness = inv.seshadri_index_polarization.as_ref();
    if direct.is_none() && witness.is_none() {
        return skip(NAME, "no Seshadri constant of a nef and big part");
    }
    let best = match (direct, witness) {
        (Some(a), Some(b)) => a.clone().max(b.clone()),
        (Some(a), None) | (None, Some(a)) => a.clone(),
        (None, None) => unreachable!(),
    };
    if best > threshold {
        verdict(
            NAME,
            f.leaf_rc != LeafRc::False,
            format!(
                "epsilon {best} > r^a - 1 = {threshold}, leaf_rc {}",
                f.leaf_rc
            ),
        )
    } else {
        pass(
            NAME,
            format!("epsilon {best} <= r^a - 1 = {threshold}, hypothesis not met"),
        )
    }
}

fn seshadri_equality(
    f: &FoliationDescriptor,
    inv: &InvariantReport,
    ra: &Rational,
) -> CheckOutcome {
    const NAME: &str = "seshadri_equality";
    let Some(eps) = &inv.seshadri_antican else {
        return skip(NAME, "epsilon(-K_F) absent");
    };
    match f.ambient.is_smooth() {
        Some(true) => {}
        Some(false) => return skip(NAME, "ambient singular"),
        None => return skip(NAME, "smoothness of ambient not modelled"),
    }
    if !inv.positivity.ample {
        return skip(NAME, "-K_F not ample");
    }
    if eps < ra {
        return pass(
            NAME,
            format!("epsilon {eps} < r^a = {ra}, hypothesis not met"),
        );
    }
    verdict(
        NAME,
        f.is_linear_pullback_shape(),
        format!("epsilon {eps} >= r^a = {ra}, recipe {}", f.recipe.name()),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub record: String,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
}

impl AggregateReport {
    pub fn push(&mut self, report: &CheckReport) {
        for c in &report.checks {
            self.push_outcome(&report.record, c);
        }
    }

    pub fn push_outcome(&mut self, record: &str, c: &CheckOutcome) {
        self.total += 1;
        match c.outcome {
            Outcome::Pass => self.passed += 1,
            Outcome::Skip => self.skipped += 1,
            Outcome::Fail => {
                self.failed += 1;
                self.failures.push(Failure {
                    record: record.to_string(),
                    check: c.name.clone(),
                    detail: c.detail.clone(),
                });
            }
        }
    }

    pub fn from_reports<'a>(reports: impl IntoIterator<Item = &'a CheckReport>) -> Self {
        let mut agg = AggregateReport::default();
        for r in reports {
            agg.push(r);
        }
        agg
    }

    pub fn merge(&mut self, other: AggregateReport) {
        self.total += other.total;
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
    }

    pub fn is_clean(&self) -> bool {
        self.failed == 0
    }
}

/// Checks records in parallel; reports keep the input order.
pub fn check_records(records: &[ExampleRecord]) -> Vec<CheckReport> {
    records.par_iter().map(check_record).collect()
}

/// Parameter ranges for a synthesis sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisGrid {
    pub kinds: Vec<Kind>,
    pub n_max: u32,
    pub q_max: u32,
}

impl Default for SynthesisGrid {
    fn default() -> Self {
        SynthesisGrid {
            kinds: vec![Kind::GeneralizedIndex, Kind::FanoIndex, Kind::Seshadri],
            n_max: 5,
            q_max: 6,
        }
    }
}

/// Every `p/q` with `q <= q_max` in `(0, hi]`, ascending.
pub fn rationals_up_to(hi: u32, q_max: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for q in 1..=q_max as i64 {
        for p in 1..=(hi as i64 * q) {
            out.push(Rational::new(p, q));
        }
    }
    out.sort();
    out.dedup();
    out
}

impl SynthesisGrid {
    /// All requests in grid order.
    pub fn requests(&self) -> Vec<SynthesisRequest> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            for n in 2..=self.n_max {
                for r in 1..n {
                    for c in rationals_up_to(r, self.q_max) {
                        if let Ok(req) = SynthesisRequest::new(kind, n, r, c) {
                            out.push(req);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Synthesises every supported request in the grid and checks the
/// results. Unsupported requests are not counted.
pub fn sweep_synthesis(grid: &SynthesisGrid) -> (Vec<ExampleRecord>, AggregateReport) {
    let results: Vec<Option<Result<ExampleRecord>>> = grid
        .requests()
        .into_par_iter()
        .map(|req| match synthesis::synthesize(&req) {
            Err(Error::Unsupported(_)) => None,
            other => Some(other),
        })
        .collect();
    let mut records = Vec::new();
    let mut agg = AggregateReport::default();
    for res in results.into_iter().flatten() {
        match res {
            Ok(rec) => records.push(rec),
            Err(e) => agg.push_outcome("synthesis", &fail("synthesis", e.to_string())),
        }
    }
    for report in check_records(&records) {
        agg.push(&report);
    }
    (records, agg)
}

/// Ranges for the formula-versus-oracle sweep on bundles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleGrid {
    pub m_max: u32,
    pub b1_max: u32,
    pub rprime_max: u32,
    pub k_max: u32,
    pub coeff_max: i64,
    pub d_max: i64,
    pub c_max: i64,
    /// Restrict to classes that are big but not ample.
    pub big_not_ample_only: bool,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid {
            m_max: 4,
            b1_max: 3,
            rprime_max: 3,
            k_max: 3,
            coeff_max: 6,
            d_max: 6,
            c_max: 40,
            big_not_ample_only: false,
        }
    }
}

/// Every non-increasing twist list with first entry `b1` and length `len`.
pub fn twist_lists(b1: u32, len: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, cap: u32, left: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=cap).rev() {
            prefix.push(v);
            extend(prefix, v, left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    extend(&mut vec![b1], b1, len - 1, &mut out);
    out
}

impl OracleGrid {
    pub fn bundles(&self) -> Vec<BundleVariety> {
        let mut out = Vec::new();
        for k in 1..=self.k_max {
            for m in 1..=self.m_max {
                for b1 in 0..=self.b1_max {
                    for len in 1..=self.rprime_max {
                        for b in twist_lists(b1, len) {
                            if let Ok(x) = BundleVariety::new(k, m, b) {
                                out.push(x);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Integral big classes in the coefficient box, in lexicographic order.
    pub fn classes(&self, x: &BundleVariety) -> Vec<Class2> {
        let mut out = Vec::new();
        for beta in -self.coeff_max..=self.coeff_max {
            for gamma in -self.coeff_max..=self.coeff_max {
                let d = Class2::ints(beta, gamma);
                let p = x.classify(&d);
                if p.big && !(self.big_not_ample_only && p.ample) {
                    out.push(d);
                }
            }
        }
        out
    }
}

/// Compares the closed form against the oracle on every grid point. The
/// cones, the class box and hence the oracle values depend only on
/// `(m, b_1)`, so each value is computed once per pair and shared by every
/// bundle with the same pair.
pub fn sweep_oracle(grid: &OracleGrid) -> AggregateReport {
    type Values = Result<Vec<(Class2, Result<Rational>)>>;
    let bundles = grid.bundles();
    let mut keys: Vec<(u32, u32)> = bundles.iter().map(|x| (x.m(), x.b1())).collect();
    keys.sort();
    keys.dedup();
    let values: HashMap<(u32, u32), Values> = keys
        .par_iter()
        .map(|&(m, b1)| {
            let values = BundleVariety::new(1, m, vec![b1]).and_then(|x| {
                let oracle = IndexOracle::new(&x, grid.d_max, grid.c_max)?;
                Ok(grid
                    .classes(&x)
                    .into_iter()
                    .map(|d| {
                        let v = oracle.value(&d);
                        (d, v)
                    })
                    .collect())
            });
            ((m, b1), values)
        })
        .collect();
    let reports: Vec<CheckReport> = bundles
        .par_iter()
        .map(|x| {
            let id = format!("X(k={}, m={}, b={:?})", x.base_dim(), x.m(), x.b());
            let checks = match &values[&(x.m(), x.b1())] {
                Err(e) => vec![fail("oracle", e.to_string())],
                Ok(vals) => vals
                    .iter()
                    .map(|(d, oracle)| {
                        let name = format!("oracle {d}");
                        match (x.generalized_index(d).map(|(t, _)| t), oracle) {
                            (Ok(a), Ok(b)) => {
                                verdict(&name, &a == b, format!("formula {a}, oracle {b}"))
                            }
                            (a, b) => fail(&name, format!("formula {a:?}, oracle {b:?}")),
                        }
                    })
                    .collect(),
            };
            CheckReport { record: id, checks }
        })
        .collect();
    AggregateReport::from_reports(&reports)
}
