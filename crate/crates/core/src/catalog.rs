//! Catalogs of example records and the standard catalog generator.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleVariety;
use crate::error::{Error, Result};
use crate::foliation::{
    cone_foliation, elliptic_factor, fibration_foliation, pn_catalog, pn_pencil,
    pullback_over_bundle, wps_coordinate_foliation,
};
use crate::lattice::Rational;
use crate::rank_one::{GeneralizedCone, PolarizedBase, SingularityClass, WeightedProjectiveSpace};
use crate::synthesis::{synth_fano_index, synth_generalized_index, synth_seshadri, ExampleRecord};
use crate::verification::rationals_up_to;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: String,
    pub metadata: BTreeMap<String, String>,
    pub records: Vec<ExampleRecord>,
}

impl Catalog {
    pub fn new(records: Vec<ExampleRecord>, metadata: BTreeMap<String, String>) -> Result<Self> {
        let cat = Catalog {
            version: SCHEMA_VERSION.to_string(),
            metadata,
            records,
        };
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::domain(format!(
                "catalog schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        let mut seen = HashSet::new();
        for rec in &self.records {
            if !seen.insert(rec.id.as_str()) {
                return Err(Error::domain(format!("duplicate record id {}", rec.id)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Internal(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cat: Catalog = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cat.validate()?;
        Ok(cat)
    }
}

fn q(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn collect(results: Vec<Result<ExampleRecord>>) -> Result<Vec<ExampleRecord>> {
    results.into_iter().collect()
}

/// Fibration foliations on `P(O(a-1) + O)` for each `a`.
pub fn hirzebruch_records(a_range: impl IntoIterator<Item = u32>) -> Result<Vec<ExampleRecord>> {
    a_range
        .into_iter()
        .map(|a| {
            let x = BundleVariety::hirzebruch(a)?;
            ExampleRecord::build(
                format!("hirzebruch:a={a}"),
                None,
                "hirzebruch",
                fibration_foliation(&x),
                None,
            )
        })
        .collect()
}

/// Prescribed generalised index over the `(r, n)` pairs, `q <= q_max`,
/// plus `1 - 1/a` on surfaces.
pub fn generalized_index_records(
    pairs: &[(u32, u32)],
    q_max: u32,
    a_max: u32,
) -> Result<Vec<ExampleRecord>> {
    let mut requests = Vec::new();
    for &(r, n) in pairs {
        for c in rationals_up_to(r, q_max) {
            requests.push((n, r, c));
        }
    }
    for a in 2..=a_max as i64 {
        requests.push((2, 1, q(a - 1, a)));
    }
    collect(
        requests
            .into_par_iter()
            .map(|(n, r, c)| synth_generalized_index(n, r, &c))
            .collect(),
    )
}

/// Cone-branch Fano index records for non-integer `c <= min(r, n-2)`, and
/// `n - 2 + 1/a` for `r = n - 1`.
pub fn fano_index_records(n_max: u32, q_max: u32, a_max: u32) -> Result<Vec<ExampleRecord>> {
    let mut requests = Vec::new();
    for n in 3..=n_max {
        for r in 1..n {
            for c in rationals_up_to(r.min(n - 2), q_max) {
                if !c.is_integer() {
                    requests.push((n, r, c));
                }
            }
        }
        for a in 2..=a_max as i64 {
            requests.push((n, n - 1, Rational::integer(n as i64 - 2) + q(1, a)));
        }
    }
    collect(
        requests
            .into_par_iter()
            .map(|(n, r, c)| synth_fano_index(n, r, &c))
            .collect(),
    )
}

/// Seshadri-constant records, covering every branch of that construction.
pub fn seshadri_records(n_max: u32, q_max: u32) -> Result<Vec<ExampleRecord>> {
    let mut requests = Vec::new();
    for n in 2..=n_max {
        for r in 1..n {
            for c in rationals_up_to(r, q_max) {
                requests.push((n, r, c));
            }
        }
    }
    collect(
        requests
            .into_par_iter()
            .map(|(n, r, c)| synth_seshadri(n, r, &c))
            .collect(),
    )
}

fn wps_record(id: String, branch: &str, weights: Vec<u32>, j: u32) -> Result<ExampleRecord> {
    let w = WeightedProjectiveSpace::new(weights)?;
    ExampleRecord::build(id, None, branch, wps_coordinate_foliation(&w, j)?, None)
}

pub fn wps1_weights(n: u32, m: u32) -> Vec<u32> {
    let mut w = vec![1, 1, 1];
    w.extend(std::iter::repeat_n(m, n as usize - 2));
    w
}

pub fn wps2_weights(n: u32, mprime: u32, m: u32) -> Vec<u32> {
    let mut w = vec![1];
    w.extend(std::iter::repeat_n(mprime, n as usize - 1));
    w.push(m);
    w
}

/// The four weighted sub-cases over `n <= n_max` and weights `<= w_max`.
pub fn weighted_records(n_max: u32, w_max: u32) -> Result<Vec<ExampleRecord>> {
    let mut out = Vec::new();
    for n in 3..=n_max {
        for m in 1..=w_max {
            out.push(wps_record(
                format!("wps1:n={n}:m={m}"),
                "wps1",
                wps1_weights(n, m),
                1,
            )?);
        }
        for m in 2..=w_max {
            for mp in 1..m {
                if mp.gcd(&m) == 1 {
                    out.push(wps_record(
                        format!("wps2:n={n}:m'={mp}:m={m}"),
                        "wps2",
                        wps2_weights(n, mp, m),
                        1,
                    )?);
                }
            }
        }
    }
    for a1 in 1..=w_max {
        for a2 in a1..=w_max {
            if a1.gcd(&a2) == 1 {
                out.push(wps_record(
                    format!("wps3:a1={a1}:a2={a2}"),
                    "wps3",
                    vec![1, a1, a2],
                    1,
                )?);
                out.push(wps_record(
                    format!("wps4:a1={a1}:a2={a2}"),
                    "wps4",
                    vec![1, a1, a2],
                    2,
                )?);
            }
        }
    }
    Ok(out)
}

/// Pull-back to `P(O(1) + O(-(r-2))^r)` over `P^{r+2}` of a foliation with
/// `K = -r H`; here `iota = 1 < r = iota_hat`.
pub fn mixed_record(r: u32) -> Result<ExampleRecord> {
    if r < 2 {
        return Err(Error::domain("the mixed example needs r >= 2"));
    }
    let x = BundleVariety::new(r + 2, 1, vec![r - 2; r as usize])?;
    let g = pn_catalog(r + 2, r, -(r as i64))?;
    ExampleRecord::build(
        format!("mixed:r={r}"),
        None,
        "mixed",
        pullback_over_bundle(&x, &g)?,
        None,
    )
}

/// Cone over `(P^2, O(m))` with vertex `P^{r-2}` and the pencil of plane
/// curves of degree `e >= 4`, so `d = 2e - 3` and the leaves have genus
/// at least 2. Requires `d < m (r - 1)`.
pub fn rc_genus_record(r: u32, e: u32, m: u32) -> Result<ExampleRecord> {
    if r < 2 || e < 4 {
        return Err(Error::domain("need r >= 2 and e >= 4"));
    }
    let d = 2 * e as i64 - 3;
    if d >= m as i64 * (r as i64 - 1) {
        return Err(Error::NotFano(format!(
            "d = {d} >= m (r - 1) = {}",
            m * (r - 1)
        )));
    }
    let y = GeneralizedCone::new(PolarizedBase::projective_space(2)?, m, r - 1)?;
    let h = pn_pencil(2, e, e)?;
    let f = cone_foliation(&y, &h)?;
    ExampleRecord::build(
        format!("rc-genus:r={r}:e={e}:m={m}"),
        None,
        "rc-genus",
        f,
        None,
    )
}

/// Cone over `(C x W, O(m))` with `C` elliptic, `K_W = 0`, `dim W = n - r`,
/// and the foliation by the elliptic factor; `epsilon = r - 1` exactly.
pub fn rc_elliptic_record(n: u32, r: u32, m: u32) -> Result<ExampleRecord> {
    if !(1 < r && r < n) {
        return Err(Error::domain("need 1 < r < n"));
    }
    let z = PolarizedBase::abstract_base(
        n - r + 1,
        SingularityClass::NumericallyTrivialCanonicalLc,
        format!("C x W^{}", n - r),
    )?;
    let y = GeneralizedCone::new(z.clone(), m, r - 1)?;
    let f = cone_foliation(&y, &elliptic_factor(&z)?)?;
    ExampleRecord::build(
        format!("rc-elliptic:n={n}:r={r}:m={m}"),
        None,
        "rc-elliptic",
        f,
        None,
    )
}

pub fn rc_boundary_records() -> Result<Vec<ExampleRecord>> {
    let mut out = Vec::new();
    for r in 2..=4u32 {
        for e in 4..=5u32 {
            let d = 2 * e - 3;
            let m_min = d / (r - 1) + 1;
            for m in m_min..m_min + 3 {
                out.push(rc_genus_record(r, e, m)?);
            }
        }
        for n in (r + 1)..=(r + 3) {
            for m in 1..=3 {
                out.push(rc_elliptic_record(n, r, m)?);
            }
        }
    }
    Ok(out)
}

/// The catalog behind the acceptance suite.
pub fn standard_records() -> Result<Vec<ExampleRecord>> {
    let mut out = Vec::new();
    out.extend(hirzebruch_records(2..=10)?);
    out.extend(generalized_index_records(
        &[(1, 3), (2, 3), (2, 4), (3, 4), (3, 5)],
        8,
        8,
    )?);
    out.extend(fano_index_records(6, 8, 8)?);
    out.extend(weighted_records(6, 7)?);
    for r in 2..=4 {
        out.push(mixed_record(r)?);
    }
    out.extend(rc_boundary_records()?);
    out.extend(seshadri_records(4, 4)?);
    Ok(out)
}

pub fn standard_catalog() -> Result<Catalog> {
    let metadata = BTreeMap::from([
        ("generator".to_string(), "standard".to_string()),
        ("q_max".to_string(), "8".to_string()),
        ("weight_max".to_string(), "7".to_string()),
        ("n_max".to_string(), "6".to_string()),
    ]);
    Catalog::new(standard_records()?, metadata)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_values() {
        for r in 2..=5 {
            let rec = mixed_record(r).unwrap();
            assert_eq!(rec.invariants.fano_index, Some(Rational::one()));
            assert_eq!(rec.invariants.gen_index, Some(Rational::from(r)));
            assert_eq!(rec.foliation.algebraic_rank, 2 * r);
            assert_eq!(rec.variety.dim(), 2 * r + 2);
        }
        assert!(mixed_record(1).is_err());
    }

    #[test]
    fn rc_records() {
        let rec = rc_elliptic_record(5, 3, 2).unwrap();
        assert_eq!(rec.invariants.seshadri_antican, Some(Rational::integer(2)));
        assert_eq!(rec.foliation.algebraic_rank, 3);
        assert_eq!(rec.foliation.leaf_rc, crate::foliation::LeafRc::False);

        // d = 5, m = 3, r = 3: epsilon = 2 - 5/3 = 1/3.
        let rec = rc_genus_record(3, 4, 3).unwrap();
        assert_eq!(rec.invariants.seshadri_antican, Some(q(1, 3)));
        assert!(rc_genus_record(3, 4, 2).is_err());
    }

    #[test]
    fn catalog_rejects_duplicates_and_versions() {
        let recs = hirzebruch_records([2, 2]).unwrap();
        assert!(Catalog::new(recs, BTreeMap::new()).is_err());
        let mut cat = Catalog::new(hirzebruch_records([2, 3]).unwrap(), BTreeMap::new()).unwrap();
        let text = cat.to_json().unwrap();
        assert_eq!(Catalog::from_json(&text).unwrap(), cat);
        cat.version = "0".into();
        assert!(Catalog::from_json(&cat.to_json().unwrap()).is_err());
        assert!(matches!(Catalog::from_json("{"), Err(Error::Parse(_))));
    }
}
