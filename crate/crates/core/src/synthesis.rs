//! Constructive procedures: given `(kind, n, r, c)`, build a variety and a
//! foliation of algebraic rank `r` on an `n`-fold whose requested invariant
//! is exactly `c`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleVariety;
use crate::error::{Error, Result};
use crate::foliation::{
    cone_foliation, fibration_foliation, pn_catalog, pullback_over_bundle, transcendental_rank1,
    wps_coordinate_foliation, FoliationDescriptor,
};
use crate::lattice::Rational;
use crate::rank_one::{GeneralizedCone, PolarizedBase, WeightedProjectiveSpace};
use crate::variety::VarietyModel;
use crate::verification::{check_record, compute_invariants, CheckOutcome, InvariantReport};

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    GeneralizedIndex,
    FanoIndex,
    Seshadri,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::GeneralizedIndex => "generalized_index",
            Kind::FanoIndex => "fano_index",
            Kind::Seshadri => "seshadri",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SynthesisRequest {
    pub kind: Kind,
    pub n: u32,
    pub r: u32,
    pub c: Rational,
}

impl SynthesisRequest {
    pub fn new(kind: Kind, n: u32, r: u32, c: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "dimension n = {n} must be at least 2"
            )));
        }
        if r == 0 || r >= n {
            return Err(Error::domain(format!(
                "algebraic rank r = {r} must lie in (0, {n})"
            )));
        }
        if !c.is_positive() {
            return Err(Error::domain(format!("target c = {c} must be positive")));
        }
        if c > Rational::from(r) {
            return Err(Error::domain(format!("target c = {c} exceeds r = {r}")));
        }
        Ok(SynthesisRequest { kind, n, r, c })
    }

    pub fn id(&self) -> String {
        format!("{}:n={}:r={}:c={}", self.kind, self.n, self.r, self.c)
    }
}

/// Auxiliary data of a construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseParameters {
    pub p: u64,
    pub q: u64,
    pub l: Option<u64>,
    pub b_list: Vec<u32>,
    pub branch: String,
}

/// A (variety, foliation) pair with its recomputed invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub id: String,
    pub request: Option<SynthesisRequest>,
    pub branch: String,
    pub variety: VarietyModel,
    pub foliation: FoliationDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<CaseParameters>,
    pub invariants: InvariantReport,
    pub checks: Vec<CheckOutcome>,
}

impl ExampleRecord {
    /// Assembles a record, computing invariants and checks from the
    /// foliation alone.
    pub fn build(
        id: impl Into<String>,
        request: Option<SynthesisRequest>,
        branch: &str,
        foliation: FoliationDescriptor,
        parameters: Option<CaseParameters>,
    ) -> Result<Self> {
        let invariants = compute_invariants(&foliation)?;
        let mut rec = ExampleRecord {
            id: id.into(),
            request,
            branch: branch.to_string(),
            variety: foliation.ambient.clone(),
            foliation,
            parameters,
            invariants,
            checks: Vec::new(),
        };
        rec.checks = check_record(&rec).checks;
        Ok(rec)
    }

    /// The invariant named by the request kind.
    pub fn requested_value(&self) -> Option<&Rational> {
        let req = self.request.as_ref()?;
        match req.kind {
            Kind::GeneralizedIndex => self.invariants.gen_index.as_ref(),
            Kind::FanoIndex => self.invariants.fano_index.as_ref(),
            Kind::Seshadri => self.invariants.seshadri_antican.as_ref(),
        }
    }
}

fn small(r: &Rational) -> Result<(i64, i64)> {
    r.to_i64_pair()
        .ok_or_else(|| Error::unsupported(format!("target {r} is too large")))
}

fn finish(
    req: &SynthesisRequest,
    branch: &str,
    foliation: FoliationDescriptor,
    parameters: Option<CaseParameters>,
) -> Result<ExampleRecord> {
    let rec = ExampleRecord::build(req.id(), Some(req.clone()), branch, foliation, parameters)?;
    if rec.requested_value() != Some(&req.c) {
        return Err(Error::Internal(format!(
            "{} branch produced {:?} for target {}",
            branch,
            rec.requested_value().map(ToString::to_string),
            req.c
        )));
    }
    Ok(rec)
}

/// `K_F = -c H` on `P^n`.
fn pn_branch(req: &SynthesisRequest) -> Result<ExampleRecord> {
    let c = req
        .c
        .to_i64()
        .ok_or_else(|| Error::Internal("integer branch with non-integer target".into()))?;
    finish(req, "pn", pn_catalog(req.n, req.r, -c)?, None)
}

/// The minimal `l` of the case-1 construction, with the surplus spread
/// greedily over `b_2, ..., b_r`.
pub fn case1_parameters(r: u32, p: u64, q: u64) -> Result<CaseParameters> {
    if q == 0 || p.gcd(&q) != 1 {
        return Err(Error::domain(format!("{p}/{q} is not in lowest terms")));
    }
    let (ri, pi, qi) = (r as i128, p as i128, q as i128);
    if !(qi < pi && pi < qi * ri) {
        return Err(Error::domain(format!(
            "need q < p < q r, got p = {p}, q = {q}, r = {r}"
        )));
    }
    for l in 1..=1_000_000i128 {
        let surplus = l * (pi - qi) + (pi - qi * ri) + 1;
        let b1 = l * qi - 1;
        if surplus > 0 && pi * l <= (qi * l - 1) * ri + 1 && surplus <= b1 * (ri - 1) {
            let b1 = u32::try_from(b1).map_err(|_| Error::unsupported("twist b_1 overflows"))?;
            let mut left = surplus as u64;
            let mut b_list = vec![b1];
            for _ in 1..r {
                let take = left.min(b1 as u64);
                b_list.push(take as u32);
                left -= take;
            }
            let params = CaseParameters {
                p,
                q,
                l: Some(l as u64),
                b_list,
                branch: "case1".into(),
            };
            certify_case1(&params)?;
            return Ok(params);
        }
    }
    Err(Error::Internal(format!(
        "no l <= 10^6 for p/q = {p}/{q}, r = {r}"
    )))
}

/// Checks the case-1 constraints exactly, with `r = len(b_list)`.
pub fn certify_case1(params: &CaseParameters) -> Result<()> {
    let bad = |why: &str| {
        Err(Error::Internal(format!(
            "case-1 parameters {params:?}: {why}"
        )))
    };
    let l = match params.l {
        Some(l) if l >= 1 => l as i64,
        _ => return bad("missing l"),
    };
    let (p, q) = (params.p as i64, params.q as i64);
    let r = params.b_list.len() as i64;
    let Some(&b1) = params.b_list.first() else {
        return bad("empty twists");
    };
    if b1 as i64 != l * q - 1 {
        return bad("b_1 != l q - 1");
    }
    let surplus = l * (p - q) + (p - q * r) + 1;
    if surplus <= 0 {
        return bad("surplus is not positive");
    }
    let ql = Rational::integer(q * l);
    let rhs = (Rational::one() - ql.recip()) * Rational::integer(r) + ql.recip();
    if Rational::new(p, q) > rhs {
        return bad("p/q exceeds (1 - 1/(q l)) r + 1/(q l)");
    }
    let rest: i64 = params.b_list[1..].iter().map(|&b| b as i64).sum();
    if rest != surplus {
        return bad("b_2 + ... + b_r differs from the surplus");
    }
    if params.b_list.windows(2).any(|w| w[1] > w[0]) {
        return bad("twists are not non-increasing");
    }
    Ok(())
}

/// Records with prescribed generalised index `c`.
pub fn synth_generalized_index(n: u32, r: u32, c: &Rational) -> Result<ExampleRecord> {
    let req = SynthesisRequest::new(Kind::GeneralizedIndex, n, r, c.clone())?;
    if req.c.is_integer() {
        return pn_branch(&req);
    }
    let (p, q) = small(&req.c)?;
    if n == 2 {
        // Only the standard multiplicities 1 - 1/a are constructed on
        // surfaces.
        if p + 1 == q {
            let x = BundleVariety::hirzebruch(q as u32)?;
            let params = CaseParameters {
                p: p as u64,
                q: q as u64,
                l: None,
                b_list: x.b().to_vec(),
                branch: "hirzebruch".into(),
            };
            return finish(&req, "hirzebruch", fibration_foliation(&x), Some(params));
        }
        return Err(Error::unsupported(format!(
            "generalized index {} on a surface: only values 1 - 1/a are constructed; \
             whether other c < 1 occur on smooth surfaces is an open question",
            req.c
        )));
    }
    if p < q {
        // Bundle over P^{n-1} with m = q, b = [q - 1]; the base foliation has
        // canonical degree 2(q - p) - 1.
        let d = 2 * (q - p) - 1;
        let x = BundleVariety::new(n - 1, q as u32, vec![q as u32 - 1])?;
        let g = if r >= 2 {
            pn_catalog(n - 1, r - 1, d)?
        } else {
            transcendental_rank1(n - 1, d as u32)?
        };
        let params = CaseParameters {
            p: p as u64,
            q: q as u64,
            l: None,
            b_list: x.b().to_vec(),
            branch: "case2".into(),
        };
        return finish(&req, "case2", pullback_over_bundle(&x, &g)?, Some(params));
    }
    let params = case1_parameters(r, p as u64, q as u64)?;
    let x = BundleVariety::new(n - r, q as u32, params.b_list.clone())?;
    finish(&req, "case1", fibration_foliation(&x), Some(params))
}

/// Cone over `(P^{n-r'}, O(q))` with `r' = ceil(c)` and `r' - c = p/q`.
fn cone_branch(req: &SynthesisRequest) -> Result<ExampleRecord> {
    let rprime = req.c.ceil();
    let frac = Rational::from(rprime.clone()) - &req.c;
    let (p, q) = small(&frac)?;
    let rprime: u32 =
        u32::try_from(&rprime).map_err(|_| Error::unsupported("vertex rank overflows"))?;
    let k = req.n - rprime;
    let y = GeneralizedCone::new(PolarizedBase::projective_space(k)?, q as u32, rprime)?;
    let h = if req.r > rprime {
        pn_catalog(k, req.r - rprime, p)?
    } else {
        transcendental_rank1(k, p as u32)?
    };
    let params = CaseParameters {
        p: p as u64,
        q: q as u64,
        l: None,
        b_list: Vec::new(),
        branch: "cone".into(),
    };
    finish(req, "cone", cone_foliation(&y, &h)?, Some(params))
}

/// `1/a` when `c = n - 2 + 1/a` for an integer `a >= 2`.
fn unit_fraction_above(c: &Rational, n: u32) -> Option<u32> {
    let rest = c - Rational::from(n) + Rational::integer(2);
    if rest.is_positive() && rest.numer() == &1.into() {
        rest.to_i64_pair()
            .and_then(|(_, a)| u32::try_from(a).ok())
            .filter(|&a| a >= 2)
    } else {
        None
    }
}

/// Records with prescribed Fano index `c` (and generalised index `c`).
pub fn synth_fano_index(n: u32, r: u32, c: &Rational) -> Result<ExampleRecord> {
    let req = SynthesisRequest::new(Kind::FanoIndex, n, r, c.clone())?;
    if req.c.is_integer() {
        return pn_branch(&req);
    }
    if n >= 3 && req.c <= Rational::from(n - 2) {
        return cone_branch(&req);
    }
    if r == n - 1 {
        if let Some(a) = unit_fraction_above(&req.c, n) {
            return if n >= 3 {
                let mut weights = vec![1, 1, 1];
                weights.extend(std::iter::repeat_n(a, n as usize - 2));
                let w = WeightedProjectiveSpace::new(weights)?;
                finish(&req, "wps1", wps_coordinate_foliation(&w, 1)?, None)
            } else {
                let w = WeightedProjectiveSpace::new(vec![1, a, a + 1])?;
                finish(&req, "wps3", wps_coordinate_foliation(&w, 1)?, None)
            };
        }
        return Err(Error::unsupported(format!(
            "Fano index {} with r = n - 1 = {}: only n - 2 + 1/a is constructed in (n - 2, n - 1); \
             other values are an open question",
            req.c, r
        )));
    }
    Err(Error::unsupported(format!(
        "Fano index {} exceeds n - 2 = {} with r = {} < n - 1",
        req.c,
        n - 2,
        r
    )))
}

/// Records with prescribed Seshadri constant `epsilon(-K_F) = c`.
pub fn synth_seshadri(n: u32, r: u32, c: &Rational) -> Result<ExampleRecord> {
    let req = SynthesisRequest::new(Kind::Seshadri, n, r, c.clone())?;
    if req.c.is_integer() {
        return pn_branch(&req);
    }
    if n >= 3 && req.c <= Rational::from(n - 2) {
        return cone_branch(&req);
    }
    if n >= 3 && r == n - 1 {
        // 1 + (n-2) m'/m = c.
        let ratio = (&req.c - Rational::one()) / Rational::from(n - 2);
        let (mp, m) = small(&ratio)?;
        let mut weights = vec![1];
        weights.extend(std::iter::repeat_n(mp as u32, n as usize - 1));
        weights.push(m as u32);
        let w = WeightedProjectiveSpace::new(weights)?;
        let params = CaseParameters {
            p: mp as u64,
            q: m as u64,
            l: None,
            b_list: Vec::new(),
            branch: "wps2".into(),
        };
        return finish(&req, "wps2", wps_coordinate_foliation(&w, 1)?, Some(params));
    }
    if n == 2 {
        let (a1, a2) = small(&req.c)?;
        let w = WeightedProjectiveSpace::new(vec![1, a1 as u32, a2 as u32])?;
        let params = CaseParameters {
            p: a1 as u64,
            q: a2 as u64,
            l: None,
            b_list: Vec::new(),
            branch: "wps4".into(),
        };
        return finish(&req, "wps4", wps_coordinate_foliation(&w, 2)?, Some(params));
    }
    Err(Error::unsupported(format!(
        "Seshadri constant {} with n = {n}, r = {r}",
        req.c
    )))
}

pub fn synthesize(req: &SynthesisRequest) -> Result<ExampleRecord> {
    match req.kind {
        Kind::GeneralizedIndex => synth_generalized_index(req.n, req.r, &req.c),
        Kind::FanoIndex => synth_fano_index(req.n, req.r, &req.c),
        Kind::Seshadri => synth_seshadri(req.n, req.r, &req.c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foliation::Recipe;
    use crate::verification::rationals_up_to;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn bundle(rec: &ExampleRecord) -> &BundleVariety {
        match &rec.variety {
            VarietyModel::Bundle(x) => x,
            other => panic!("expected a bundle, got {other}"),
        }
    }

    #[test]
    fn case1_examples() {
        let p = case1_parameters(2, 3, 2).unwrap();
        assert_eq!((p.l, p.b_list.clone()), (Some(1), vec![1, 1]));
        let p = case1_parameters(3, 5, 2).unwrap();
        assert_eq!((p.l, p.b_list.clone()), (Some(2), vec![3, 3, 3]));
        assert!(matches!(case1_parameters(2, 1, 2), Err(Error::Domain(_))));
        assert!(matches!(case1_parameters(2, 4, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn case1_minimality() {
        for r in 2..=5u32 {
            for qq in 1..=8u64 {
                for pp in (qq + 1)..(qq * r as u64) {
                    if pp.gcd(&qq) != 1 {
                        continue;
                    }
                    let params = case1_parameters(r, pp, qq).unwrap();
                    let l = params.l.unwrap();
                    for smaller in 1..l {
                        let b1 = smaller * qq - 1;
                        let mut trial = vec![b1 as u32];
                        let surplus = smaller as i64 * (pp as i64 - qq as i64)
                            + (pp as i64 - qq as i64 * r as i64)
                            + 1;
                        if surplus <= 0 || surplus > (b1 as i64) * (r as i64 - 1) {
                            continue;
                        }
                        let mut left = surplus as u32;
                        for _ in 1..r {
                            let t = left.min(b1 as u32);
                            trial.push(t);
                            left -= t;
                        }
                        let cand = CaseParameters {
                            l: Some(smaller),
                            b_list: trial,
                            ..params.clone()
                        };
                        assert!(
                            certify_case1(&cand).is_err(),
                            "l = {smaller} already works for {pp}/{qq}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn generalized_index_examples() {
        let rec = synth_generalized_index(3, 2, &q(3, 2)).unwrap();
        let x = bundle(&rec);
        assert_eq!((x.base_dim(), x.m(), x.b()), (1, 2, &[1, 1][..]));
        assert_eq!(rec.branch, "case1");
        assert_eq!(rec.invariants.gen_index, Some(q(3, 2)));

        let rec = synth_generalized_index(3, 2, &q(1, 2)).unwrap();
        let x = bundle(&rec);
        assert_eq!((x.base_dim(), x.m(), x.b()), (2, 2, &[1][..]));
        assert_eq!(rec.branch, "case2");
        match &rec.foliation.recipe {
            Recipe::PullbackOverBundle { base_foliation } => {
                assert_eq!(base_foliation.canonical.as_rank_one(), Some(&q(1, 1)))
            }
            other => panic!("unexpected recipe {other:?}"),
        }

        let rec = synth_generalized_index(2, 1, &q(1, 2)).unwrap();
        assert_eq!(bundle(&rec), &BundleVariety::hirzebruch(2).unwrap());
        assert_eq!(rec.invariants.seshadri_index_polarization, Some(q(1, 2)));

        let rec = synth_generalized_index(4, 3, &q(2, 1)).unwrap();
        assert_eq!(rec.branch, "pn");
        assert!(matches!(
            synth_generalized_index(2, 1, &q(2, 5)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            synth_generalized_index(3, 1, &q(3, 2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn fano_examples() {
        let rec = synth_fano_index(4, 2, &q(3, 2)).unwrap();
        assert_eq!(rec.branch, "cone");
        match &rec.variety {
            VarietyModel::Cone(y) => {
                assert_eq!((y.base().dim(), y.m(), y.vertex_rank()), (2, 2, 2))
            }
            other => panic!("{other}"),
        }
        assert_eq!(rec.foliation.recipe.name(), "cone");
        assert_eq!(rec.invariants.fano_index, Some(q(3, 2)));
        assert_eq!(rec.invariants.gen_index, Some(q(3, 2)));

        let rec = synth_fano_index(3, 2, &q(3, 2)).unwrap();
        assert_eq!(
            rec.variety,
            VarietyModel::Wps(WeightedProjectiveSpace::new(vec![1, 1, 1, 2]).unwrap())
        );
        assert_eq!(rec.invariants.fano_index, Some(q(3, 2)));

        let rec = synth_fano_index(5, 1, &q(1, 1)).unwrap();
        assert_eq!(
            rec.foliation.minus_canonical().as_rank_one(),
            Some(&q(1, 1))
        );

        // 5/4 = 1 + 1/4 sits in the constructed set; 5/3 does not.
        let rec = synth_fano_index(3, 2, &q(5, 4)).unwrap();
        assert_eq!(
            rec.variety,
            VarietyModel::Wps(WeightedProjectiveSpace::new(vec![1, 1, 1, 4]).unwrap())
        );
        assert!(matches!(
            synth_fano_index(3, 2, &q(5, 3)),
            Err(Error::Unsupported(_))
        ));
        let rec = synth_fano_index(2, 1, &q(1, 3)).unwrap();
        assert_eq!(rec.branch, "wps3");
        assert_eq!(rec.invariants.fano_index, Some(q(1, 3)));
    }

    #[test]
    fn seshadri_examples() {
        let rec = synth_seshadri(3, 2, &q(3, 2)).unwrap();
        assert_eq!(
            rec.variety,
            VarietyModel::Wps(WeightedProjectiveSpace::new(vec![1, 1, 1, 2]).unwrap())
        );
        assert_eq!(rec.invariants.seshadri_antican, Some(q(3, 2)));

        let rec = synth_seshadri(2, 1, &q(2, 3)).unwrap();
        assert_eq!(
            rec.variety,
            VarietyModel::Wps(WeightedProjectiveSpace::new(vec![1, 2, 3]).unwrap())
        );
        assert_eq!(rec.invariants.seshadri_antican, Some(q(2, 3)));
        assert_eq!(rec.invariants.fano_index, Some(q(1, 3)));

        let rec = synth_seshadri(4, 2, &q(3, 2)).unwrap();
        assert_eq!(rec.branch, "cone");
        assert_eq!(rec.invariants.seshadri_antican, Some(q(3, 2)));

        // n = 5: 1 + 3 m'/m = 7/2 gives m'/m = 5/6.
        let rec = synth_seshadri(5, 4, &q(7, 2)).unwrap();
        assert_eq!(
            rec.variety,
            VarietyModel::Wps(WeightedProjectiveSpace::new(vec![1, 5, 5, 5, 5, 6]).unwrap())
        );
        assert_eq!(rec.invariants.seshadri_antican, Some(q(7, 2)));
    }

    #[test]
    fn branch_totality_over_grid() {
        for kind in [Kind::GeneralizedIndex, Kind::FanoIndex, Kind::Seshadri] {
            for n in 2..=6u32 {
                for r in 1..n {
                    for c in rationals_up_to(r, 6) {
                        let req = SynthesisRequest::new(kind, n, r, c.clone()).unwrap();
                        match synthesize(&req) {
                            Ok(rec) => {
                                assert_eq!(rec.requested_value(), Some(&c));
                                assert!(
                                    rec.checks
                                        .iter()
                                        .all(|c| c.outcome != crate::verification::Outcome::Fail),
                                    "{}",
                                    rec.id
                                );
                            }
                            Err(Error::Unsupported(msg)) => assert!(!msg.is_empty()),
                            Err(e) => panic!("{}: {e}", req.id()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn seshadri_is_total() {
        for n in 2..=6u32 {
            for r in 1..n {
                for c in rationals_up_to(r, 6) {
                    synth_seshadri(n, r, &c).unwrap();
                }
            }
        }
    }

    proptest! {
        #[test]
        fn synthesis_is_deterministic(
            (n, r, qq, p) in (2u32..=6)
                .prop_flat_map(|n| (Just(n), 1..n))
                .prop_flat_map(|(n, r)| (Just(n), Just(r), 1i64..=8))
                .prop_flat_map(|(n, r, qq)| (Just(n), Just(r), Just(qq), 1..=(r as i64 * qq)))
        ) {
            let c = q(p, qq);
            for kind in [Kind::GeneralizedIndex, Kind::FanoIndex, Kind::Seshadri] {
                let req = SynthesisRequest::new(kind, n, r, c.clone()).unwrap();
                if let Ok(a) = synthesize(&req) {
                    let b = synthesize(&req).unwrap();
                    prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
                }
            }
        }
    }
}
