//! Symbolic foliation descriptors.
//!
//! A foliation is carried by its rank, algebraic rank, canonical class and
//! the recipe that produced it. Existence of the underlying sheaf is never
//! constructed; each descriptor records where its existence comes from.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::BundleVariety;
use crate::error::{Error, Result};
use crate::lattice::{Class2, Rational};
use crate::rank_one::{
    GeneralizedCone, PolarizedBase, RankOneClass, SingularityClass, WeightedProjectiveSpace,
};
use crate::variety::VarietyModel;

/// Rational connectedness of the closure of a general leaf of the algebraic
/// part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafRc {
    True,
    False,
    Unknown,
}

impl fmt::Display for LeafRc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeafRc::True => "true",
            LeafRc::False => "false",
            LeafRc::Unknown => "unknown",
        })
    }
}

/// `K_F` in the class group of the ambient variety.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CanonicalClass {
    Bundle(Class2),
    RankOne(RankOneClass),
}

impl CanonicalClass {
    pub fn rank_one(s: impl Into<Rational>) -> Self {
        CanonicalClass::RankOne(RankOneClass::new(s))
    }

    pub fn negate(&self) -> CanonicalClass {
        match self {
            CanonicalClass::Bundle(c) => CanonicalClass::Bundle(-c),
            CanonicalClass::RankOne(r) => CanonicalClass::rank_one(-&r.s),
        }
    }

    pub fn as_rank_one(&self) -> Option<&Rational> {
        match self {
            CanonicalClass::RankOne(r) => Some(&r.s),
            CanonicalClass::Bundle(_) => None,
        }
    }

    pub fn as_bundle(&self) -> Option<&Class2> {
        match self {
            CanonicalClass::Bundle(c) => Some(c),
            CanonicalClass::RankOne(_) => None,
        }
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(&Rational, &str)> = match self {
            CanonicalClass::Bundle(c) => vec![(&c.beta, "L"), (&c.gamma, "A")],
            CanonicalClass::RankOne(r) => vec![(&r.s, "H")],
        };
        let mut first = true;
        for (coef, sym) in terms {
            if coef.is_zero() {
                continue;
            }
            let sign = if coef.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let abs = coef.abs();
            let body = if abs == Rational::one() {
                String::new()
            } else if abs.is_integer() {
                abs.to_string()
            } else {
                format!("({abs})")
            };
            write!(f, "{sign}{body}{sym}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "recipe")]
pub enum Recipe {
    /// Relative tangent sheaf of a projective bundle.
    #[serde(rename = "fibration")]
    FibrationInduced,
    /// `pi^{-1} G` for a foliation `G` on the base `P^k` of a bundle.
    #[serde(rename = "pullback")]
    PullbackOverBundle {
        base_foliation: Box<FoliationDescriptor>,
    },
    /// Foliation induced on a generalised cone by one on its base.
    #[serde(rename = "cone")]
    ConeInduced {
        base_foliation: Box<FoliationDescriptor>,
    },
    /// Fibres of `[x_0 : ... : x_n] -> [x_0^{a_j} : x_j]` on a weighted
    /// projective space.
    #[serde(rename = "coordinate")]
    CoordinateProjection { j: u32 },
    /// Linear pull-back of a purely transcendental rank-one foliation
    /// `G = O(d + r)` on `P^{n-r}`.
    #[serde(rename = "pn1")]
    PnCatalogCase1 { d: i64 },
    /// Codimension-one foliation given by a pencil `[f : g]`.
    #[serde(rename = "pn2")]
    PnCatalogCase2 { d_f: u32, d_g: u32 },
    /// Purely transcendental rank-one foliation with `K = O(p)`.
    #[serde(rename = "transcendental")]
    TranscendentalRankOne { p: u32 },
    /// On `C x W` with `C` elliptic and `K_W = 0`: the foliation by the
    /// fibres of the projection to `W`.
    #[serde(rename = "elliptic-factor")]
    EllipticFactor,
}

impl Recipe {
    pub fn name(&self) -> &'static str {
        match self {
            Recipe::FibrationInduced => "fibration",
            Recipe::PullbackOverBundle { .. } => "pullback",
            Recipe::ConeInduced { .. } => "cone",
            Recipe::CoordinateProjection { .. } => "coordinate",
            Recipe::PnCatalogCase1 { .. } => "pn1",
            Recipe::PnCatalogCase2 { .. } => "pn2",
            Recipe::TranscendentalRankOne { .. } => "transcendental",
            Recipe::EllipticFactor => "elliptic-factor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoliationDescriptor {
    #[serde(flatten)]
    pub recipe: Recipe,
    pub ambient: VarietyModel,
    pub rank: u32,
    pub algebraic_rank: u32,
    pub canonical: CanonicalClass,
    pub purely_transcendental: bool,
    pub leaf_rc: LeafRc,
    pub provenance: String,
}

impl FoliationDescriptor {
    pub fn minus_canonical(&self) -> CanonicalClass {
        self.canonical.negate()
    }

    /// Checks the structural invariants every descriptor must satisfy.
    pub fn validate(&self) -> Result<()> {
        let dim = self.ambient.dim();
        if self.rank == 0 || self.rank >= dim {
            return Err(Error::domain(format!(
                "rank {} must lie in [1, {}) on a {dim}-fold",
                self.rank, dim
            )));
        }
        if self.algebraic_rank > self.rank {
            return Err(Error::domain(format!(
                "algebraic rank {} exceeds rank {}",
                self.algebraic_rank, self.rank
            )));
        }
        if self.purely_transcendental != (self.algebraic_rank == 0) {
            return Err(Error::domain(
                "purely transcendental flag disagrees with algebraic rank",
            ));
        }
        if matches!(
            self.recipe,
            Recipe::FibrationInduced | Recipe::CoordinateProjection { .. }
        ) && self.algebraic_rank != self.rank
        {
            return Err(Error::domain(format!(
                "{} foliations are algebraically integrable",
                self.recipe.name()
            )));
        }
        let bundle_ambient = matches!(self.ambient, VarietyModel::Bundle(_));
        let bundle_class = matches!(self.canonical, CanonicalClass::Bundle(_));
        if bundle_ambient != bundle_class {
            return Err(Error::domain(
                "canonical class does not live on the ambient",
            ));
        }
        match &self.recipe {
            Recipe::PullbackOverBundle { base_foliation }
            | Recipe::ConeInduced { base_foliation } => base_foliation.validate(),
            _ => Ok(()),
        }
    }

    /// `K_F` recomputed from the recipe and ambient alone.
    pub fn recompute_canonical(&self) -> Result<CanonicalClass> {
        let mismatch = || {
            Error::domain(format!(
                "recipe {} does not apply to {}",
                self.recipe.name(),
                self.ambient
            ))
        };
        match (&self.recipe, &self.ambient) {
            (Recipe::FibrationInduced, VarietyModel::Bundle(x)) => {
                Ok(CanonicalClass::Bundle(-&x.relative_anticanonical()))
            }
            (Recipe::PullbackOverBundle { base_foliation }, VarietyModel::Bundle(x)) => {
                let g = base_foliation.recompute_canonical()?;
                let deg = g.as_rank_one().ok_or_else(mismatch)?;
                let k = &(-&x.relative_anticanonical()) + &Class2::new(0, deg.clone());
                Ok(CanonicalClass::Bundle(k))
            }
            (Recipe::ConeInduced { base_foliation }, VarietyModel::Cone(y)) => {
                let h = base_foliation.recompute_canonical()?;
                let d = h.as_rank_one().ok_or_else(mismatch)?;
                let s = Rational::from(y.vertex_rank()) - d / Rational::from(y.m());
                Ok(CanonicalClass::rank_one(-s))
            }
            (Recipe::CoordinateProjection { j }, VarietyModel::Wps(w)) => {
                Ok(CanonicalClass::rank_one(-coordinate_degree(w, *j)?))
            }
            (Recipe::PnCatalogCase1 { d }, VarietyModel::Wps(w)) if w.is_projective_space() => {
                Ok(CanonicalClass::rank_one(*d))
            }
            (Recipe::PnCatalogCase2 { d_f, d_g }, VarietyModel::Wps(w))
                if w.is_projective_space() =>
            {
                Ok(CanonicalClass::rank_one(
                    *d_f as i64 + *d_g as i64 - w.dim() as i64 - 1,
                ))
            }
            (Recipe::TranscendentalRankOne { p }, VarietyModel::Wps(w))
                if w.is_projective_space() =>
            {
                Ok(CanonicalClass::rank_one(*p as i64))
            }
            (Recipe::EllipticFactor, VarietyModel::Base(_)) => Ok(CanonicalClass::rank_one(0)),
            _ => Err(mismatch()),
        }
    }

    /// Whether this is the linear pull-back, on `P^n`, of a purely
    /// transcendental foliation with zero canonical class (the zero
    /// foliation included).
    pub fn is_linear_pullback_shape(&self) -> bool {
        if !self.ambient.is_projective_space() {
            return false;
        }
        match &self.recipe {
            Recipe::PnCatalogCase1 { d } => *d == -(self.algebraic_rank as i64),
            Recipe::PnCatalogCase2 { d_f, d_g } => *d_f == 1 && *d_g == 1,
            // On P^n every coordinate weight is 1: the pencil of hyperplanes.
            Recipe::CoordinateProjection { .. } => true,
            Recipe::ConeInduced { base_foliation } => {
                (base_foliation.purely_transcendental
                    && base_foliation
                        .canonical
                        .as_rank_one()
                        .is_some_and(|s| s.is_zero()))
                    || base_foliation.is_linear_pullback_shape()
            }
            _ => false,
        }
    }
}

fn coordinate_degree(w: &WeightedProjectiveSpace, j: u32) -> Result<Rational> {
    let n = w.dim();
    if j < 1 || j > n {
        return Err(Error::domain(format!(
            "coordinate index {j} outside 1..={n}"
        )));
    }
    let total: u64 = (1..=n as usize)
        .filter(|&i| i != j as usize)
        .map(|i| w.weight(i) as u64)
        .sum();
    Ok(Rational::integer(total as i64))
}

fn leaf_rc_over(base: &FoliationDescriptor) -> LeafRc {
    if base.purely_transcendental {
        LeafRc::True
    } else {
        base.leaf_rc
    }
}

/// Foliation by the fibres of a projective bundle.
pub fn fibration_foliation(x: &BundleVariety) -> FoliationDescriptor {
    let r = x.fiber_rank();
    FoliationDescriptor {
        recipe: Recipe::FibrationInduced,
        ambient: VarietyModel::Bundle(x.clone()),
        rank: r,
        algebraic_rank: r,
        canonical: CanonicalClass::Bundle(-&x.relative_anticanonical()),
        purely_transcendental: false,
        leaf_rc: LeafRc::True,
        provenance: "relative tangent sheaf of the bundle projection".into(),
    }
}

/// `pi^{-1} G` for a foliation `G` on the base `P^k`.
pub fn pullback_over_bundle(
    x: &BundleVariety,
    g: &FoliationDescriptor,
) -> Result<FoliationDescriptor> {
    let expected = VarietyModel::projective_space(x.base_dim())?;
    if g.ambient != expected {
        return Err(Error::domain(format!(
            "base foliation lives on {}, bundle base is {}",
            g.ambient, expected
        )));
    }
    if g.rank >= x.base_dim() {
        return Err(Error::domain(
            "base foliation rank must be below the base dimension",
        ));
    }
    let deg = g
        .canonical
        .as_rank_one()
        .ok_or_else(|| Error::domain("base foliation canonical class must be a multiple of H"))?;
    let canonical = &(-&x.relative_anticanonical()) + &Class2::new(0, deg.clone());
    let r = x.fiber_rank();
    Ok(FoliationDescriptor {
        recipe: Recipe::PullbackOverBundle {
            base_foliation: Box::new(g.clone()),
        },
        ambient: VarietyModel::Bundle(x.clone()),
        rank: r + g.rank,
        algebraic_rank: r + g.algebraic_rank,
        canonical: CanonicalClass::Bundle(canonical),
        purely_transcendental: false,
        leaf_rc: leaf_rc_over(g),
        provenance: format!(
            "pull-back along the bundle projection of [{}]",
            g.provenance
        ),
    })
}

/// Foliation induced on a generalised cone by a foliation on its base.
pub fn cone_foliation(y: &GeneralizedCone, h: &FoliationDescriptor) -> Result<FoliationDescriptor> {
    let expected = VarietyModel::cone_base(y)?;
    if h.ambient != expected {
        return Err(Error::domain(format!(
            "base foliation lives on {}, cone base is {}",
            h.ambient, expected
        )));
    }
    if h.rank >= y.base().dim() {
        return Err(Error::domain(
            "base foliation rank must be below the base dimension",
        ));
    }
    let d = h.canonical.as_rank_one().ok_or_else(|| {
        Error::domain("base foliation canonical class must be a multiple of O(1)")
    })?;
    let s = Rational::from(y.vertex_rank()) - d / Rational::from(y.m());
    let r = y.vertex_rank();
    Ok(FoliationDescriptor {
        recipe: Recipe::ConeInduced {
            base_foliation: Box::new(h.clone()),
        },
        ambient: VarietyModel::Cone(y.clone()),
        rank: r + h.rank,
        algebraic_rank: r + h.algebraic_rank,
        canonical: CanonicalClass::rank_one(-s),
        purely_transcendental: false,
        leaf_rc: leaf_rc_over(h),
        provenance: format!("induced on the cone by [{}]", h.provenance),
    })
}

/// A foliation on `P^n` of algebraic rank `r` with `K = O(d)`, `d >= -r`.
///
/// For `r <= n - 2` this is the linear pull-back of a purely transcendental
/// rank-one foliation `O(d + r)` on `P^{n-r}`; for `r = n - 1` it is the
/// pencil with the balanced degree choice `d_f = ceil((d+n+1)/2)`.
pub fn pn_catalog(n: u32, r: u32, d: i64) -> Result<FoliationDescriptor> {
    if r == 0 || r >= n {
        return Err(Error::domain(format!(
            "algebraic rank {r} must lie in (0, {n})"
        )));
    }
    if d < -(r as i64) {
        return Err(Error::domain(format!(
            "canonical degree {d} is below -r = -{r}"
        )));
    }
    if r + 2 <= n {
        Ok(FoliationDescriptor {
            recipe: Recipe::PnCatalogCase1 { d },
            ambient: VarietyModel::projective_space(n)?,
            rank: r + 1,
            algebraic_rank: r,
            canonical: CanonicalClass::rank_one(d),
            purely_transcendental: false,
            // The algebraic part is the linear projection, with P^r fibres.
            leaf_rc: LeafRc::True,
            provenance: format!(
                "linear pull-back from P^{} of a purely transcendental foliation O({}); existence assumed",
                n - r,
                d + r as i64
            ),
        })
    } else {
        let total = d + n as i64 + 1;
        let d_f = (total + 1).div_euclid(2);
        let d_g = total - d_f;
        pn_pencil(n, d_f as u32, d_g as u32)
    }
}

/// Codimension-one foliation on `P^n` induced by a general pencil of forms
/// of degrees `d_f` and `d_g`; `K = O(d_f + d_g - n - 1)`.
pub fn pn_pencil(n: u32, d_f: u32, d_g: u32) -> Result<FoliationDescriptor> {
    if n < 2 {
        return Err(Error::domain("pencils need n >= 2"));
    }
    if d_f < 1 || d_g < 1 {
        return Err(Error::domain("pencil degrees must be positive"));
    }
    // Hyperplane pencils have linear leaves; a general plane curve of
    // degree e >= 3 has positive genus.
    let leaf_rc = match (n, d_f, d_g) {
        (_, 1, 1) => LeafRc::True,
        (2, e, g) if e == g && e >= 3 => LeafRc::False,
        _ => LeafRc::Unknown,
    };
    Ok(FoliationDescriptor {
        recipe: Recipe::PnCatalogCase2 { d_f, d_g },
        ambient: VarietyModel::projective_space(n)?,
        rank: n - 1,
        algebraic_rank: n - 1,
        canonical: CanonicalClass::rank_one(d_f as i64 + d_g as i64 - n as i64 - 1),
        purely_transcendental: false,
        leaf_rc,
        provenance: format!("pencil of general forms of degrees {d_f} and {d_g} on P^{n}"),
    })
}

/// Purely transcendental rank-one foliation on `P^k` with `K = O(p)`.
pub fn transcendental_rank1(k: u32, p: u32) -> Result<FoliationDescriptor> {
    if k < 2 {
        return Err(Error::domain("transcendental foliations need k >= 2"));
    }
    if p < 1 {
        return Err(Error::domain("canonical degree p must be at least 1"));
    }
    Ok(FoliationDescriptor {
        recipe: Recipe::TranscendentalRankOne { p },
        ambient: VarietyModel::projective_space(k)?,
        rank: 1,
        algebraic_rank: 0,
        canonical: CanonicalClass::rank_one(p as i64),
        purely_transcendental: true,
        leaf_rc: LeafRc::Unknown,
        provenance: format!(
            "purely transcendental rank-one foliation O({}) on P^{k}; existence assumed",
            -(p as i64)
        ),
    })
}

/// Foliation on `P(1, a_1, ..., a_n)` induced by `[x_0^{a_j} : x_j]`.
///
/// Only `j = 1` (and `j = 2` on surfaces) are established constructions;
/// other indices reuse the same degree rule.
pub fn wps_coordinate_foliation(
    w: &WeightedProjectiveSpace,
    j: u32,
) -> Result<FoliationDescriptor> {
    let n = w.dim();
    if n < 2 {
        return Err(Error::domain(
            "coordinate foliations need dimension at least 2",
        ));
    }
    let minus_k = coordinate_degree(w, j)?;
    let derived = j > 2 || (j == 2 && n > 2);
    Ok(FoliationDescriptor {
        recipe: Recipe::CoordinateProjection { j },
        ambient: VarietyModel::Wps(w.clone()),
        rank: n - 1,
        algebraic_rank: n - 1,
        canonical: CanonicalClass::rank_one(-minus_k),
        purely_transcendental: false,
        leaf_rc: LeafRc::Unknown,
        provenance: if derived {
            format!("fibres of [x_0^a_{j} : x_{j}]; degree rule extended to this index")
        } else {
            format!("fibres of [x_0^a_{j} : x_{j}]")
        },
    })
}

/// The foliation by elliptic curves `C x {w}` on `C x W`, with `K_W = 0`.
pub fn elliptic_factor(base: &PolarizedBase) -> Result<FoliationDescriptor> {
    if base.is_projective_space()
        || base.singularity_class() != SingularityClass::NumericallyTrivialCanonicalLc
    {
        return Err(Error::domain(format!(
            "{} is not a product of an elliptic curve and a K-trivial manifold",
            base.label()
        )));
    }
    if base.dim() < 2 {
        return Err(Error::domain("C x W needs dim W >= 1"));
    }
    Ok(FoliationDescriptor {
        recipe: Recipe::EllipticFactor,
        ambient: VarietyModel::Base(base.clone()),
        rank: 1,
        algebraic_rank: 1,
        canonical: CanonicalClass::rank_one(0),
        purely_transcendental: false,
        leaf_rc: LeafRc::False,
        provenance: "fibres of C x W -> W with C elliptic".into(),
    })
}
