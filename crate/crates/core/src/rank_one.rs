//! Varieties whose divisor class group is `Z * H`: normal generalised cones
//! over a polarised base and weighted projective spaces `P(1, a_1, ..., a_n)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleVariety;
use crate::error::{Error, Result};
use crate::lattice::{Class2, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityClass {
    Smooth,
    KltFano,
    NumericallyTrivialCanonicalLc,
    Other,
}

/// Singularities of a generalised cone, read off from its base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeSingularities {
    Smooth,
    Klt,
    Lc,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BaseRepr", into = "BaseRepr")]
pub struct PolarizedBase {
    dim: u32,
    is_projective_space: bool,
    singularity_class: SingularityClass,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct BaseRepr {
    dim: u32,
    is_projective_space: bool,
    singularity_class: SingularityClass,
    label: String,
}

impl TryFrom<BaseRepr> for PolarizedBase {
    type Error = Error;
    fn try_from(s: BaseRepr) -> Result<Self> {
        if s.is_projective_space {
            let pk = PolarizedBase::projective_space(s.dim)?;
            if s.singularity_class != SingularityClass::Smooth || s.label != pk.label {
                return Err(Error::domain(format!(
                    "projective-space base {} carries inconsistent data",
                    s.label
                )));
            }
            Ok(pk)
        } else {
            PolarizedBase::abstract_base(s.dim, s.singularity_class, s.label)
        }
    }
}

impl From<PolarizedBase> for BaseRepr {
    fn from(b: PolarizedBase) -> Self {
        BaseRepr {
            dim: b.dim,
            is_projective_space: b.is_projective_space,
            singularity_class: b.singularity_class,
            label: b.label,
        }
    }
}

impl PolarizedBase {
    /// `(P^k, O(1))`.
    pub fn projective_space(dim: u32) -> Result<Self> {
        if dim < 1 {
            return Err(Error::domain("base dimension must be at least 1"));
        }
        Ok(PolarizedBase {
            dim,
            is_projective_space: true,
            singularity_class: SingularityClass::Smooth,
            label: format!("P^{dim}"),
        })
    }

    /// A base known only through its dimension and singularity class.
    pub fn abstract_base(
        dim: u32,
        singularity_class: SingularityClass,
        label: impl Into<String>,
    ) -> Result<Self> {
        if dim < 1 {
            return Err(Error::domain("base dimension must be at least 1"));
        }
        Ok(PolarizedBase {
            dim,
            is_projective_space: false,
            singularity_class,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_projective_space(&self) -> bool {
        self.is_projective_space
    }

    pub fn singularity_class(&self) -> SingularityClass {
        self.singularity_class
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Normal generalised cone over `(Z, O_Z(m))` with vertex `P^{r'-1}`,
/// obtained by contracting `E` on `P(O_Z(m) + O_Z^{r'})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneralizedCone {
    base: PolarizedBase,
    m: u32,
    vertex_rank: u32,
}

impl GeneralizedCone {
    pub fn new(base: PolarizedBase, m: u32, vertex_rank: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain(
                "cone polarization multiple m must be at least 1",
            ));
        }
        if vertex_rank < 1 {
            return Err(Error::domain("cone vertex rank must be at least 1"));
        }
        Ok(GeneralizedCone {
            base,
            m,
            vertex_rank,
        })
    }

    pub fn base(&self) -> &PolarizedBase {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn vertex_rank(&self) -> u32 {
        self.vertex_rank
    }

    pub fn dim(&self) -> u32 {
        self.base.dim + self.vertex_rank
    }

    /// The bundle `P(O(m) + O^{r'})` resolving the cone, when the base is a
    /// projective space.
    pub fn resolution(&self) -> Option<BundleVariety> {
        if !self.base.is_projective_space {
            return None;
        }
        BundleVariety::new(self.base.dim, self.m, vec![0; self.vertex_rank as usize]).ok()
    }

    /// The cone over `(P^k, O(1))` is `P^{k + r'}` itself.
    pub fn is_projective_space(&self) -> bool {
        self.base.is_projective_space && self.m == 1
    }

    pub fn singularities(&self) -> ConeSingularities {
        if self.is_projective_space() {
            return ConeSingularities::Smooth;
        }
        match self.base.singularity_class {
            SingularityClass::Smooth if self.base.is_projective_space => ConeSingularities::Klt,
            SingularityClass::KltFano => ConeSingularities::Klt,
            SingularityClass::NumericallyTrivialCanonicalLc => ConeSingularities::Lc,
            _ => ConeSingularities::Unknown,
        }
    }
}

/// `P(1, a_1, ..., a_n)` with `a_1 <= ... <= a_n` and `gcd(a_i) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WpsRepr", into = "WpsRepr")]
pub struct WeightedProjectiveSpace {
    weights: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct WpsRepr {
    weights: Vec<u32>,
}

impl TryFrom<WpsRepr> for WeightedProjectiveSpace {
    type Error = Error;
    fn try_from(s: WpsRepr) -> Result<Self> {
        WeightedProjectiveSpace::new(s.weights)
    }
}

impl From<WeightedProjectiveSpace> for WpsRepr {
    fn from(w: WeightedProjectiveSpace) -> Self {
        WpsRepr { weights: w.weights }
    }
}

impl WeightedProjectiveSpace {
    /// `weights` includes the leading 1.
    pub fn new(weights: Vec<u32>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::domain(
                "weighted projective space needs dimension at least 1",
            ));
        }
        if weights[0] != 1 {
            return Err(Error::domain(format!(
                "first weight of {weights:?} must be 1"
            )));
        }
        if weights.contains(&0) {
            return Err(Error::domain(format!(
                "weights {weights:?} must be positive"
            )));
        }
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain(format!(
                "weights {weights:?} are not sorted ascending"
            )));
        }
        let g = weights[1..].iter().fold(0u32, |g, &a| g.gcd(&a));
        if g != 1 {
            return Err(Error::domain(format!(
                "weights {weights:?} have common factor {g}"
            )));
        }
        Ok(WeightedProjectiveSpace { weights })
    }

    pub fn projective_space(n: u32) -> Result<Self> {
        WeightedProjectiveSpace::new(vec![1; n as usize + 1])
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `a_i` for `1 <= i <= n`.
    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn dim(&self) -> u32 {
        self.weights.len() as u32 - 1
    }

    pub fn is_projective_space(&self) -> bool {
        self.weights.iter().all(|&a| a == 1)
    }

    pub fn max_weight(&self) -> u32 {
        *self.weights.last().expect("non-empty weights")
    }
}

/// A rank-one class `s * H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankOneClass {
    pub s: Rational,
}

impl RankOneClass {
    pub fn new(s: impl Into<Rational>) -> Self {
        RankOneClass { s: s.into() }
    }
}

/// Either kind of variety with class group `Z * H`.
#[derive(Debug, Clone, Copy)]
pub enum RankOneVariety<'a> {
    Cone(&'a GeneralizedCone),
    Wps(&'a WeightedProjectiveSpace),
}

impl RankOneVariety<'_> {
    /// Smallest positive multiple of `H` that is Cartier.
    pub fn cartier_index(&self) -> u32 {
        match self {
            RankOneVariety::Cone(_) => 1,
            RankOneVariety::Wps(w) => w.weights[1..].iter().fold(1u32, |l, &a| l.lcm(&a)),
        }
    }

    /// Seshadri constant of the generator `H` at a general smooth point.
    pub fn seshadri_h(&self) -> Rational {
        match self {
            RankOneVariety::Cone(_) => Rational::one(),
            RankOneVariety::Wps(w) => Rational::new(1, w.max_weight() as i64),
        }
    }

    /// `epsilon(s * H) = s * epsilon(H)` for `s >= 0`.
    pub fn seshadri(&self, d: &RankOneClass) -> Result<Rational> {
        if d.s.is_negative() {
            return Err(Error::domain(format!("class {}H is not nef", d.s)));
        }
        Ok(&d.s * self.seshadri_h())
    }

    /// Generalised and Fano index of an ample class `s * H`; on a rank-one
    /// class group both equal `s / cartier_index`.
    pub fn index_pair(&self, d: &RankOneClass) -> Result<(Rational, Rational)> {
        if !d.s.is_positive() {
            return Err(Error::domain(format!("class {}H is not ample", d.s)));
        }
        let iota = &d.s / Rational::from(self.cartier_index());
        Ok((iota.clone(), iota))
    }

    pub fn dim(&self) -> u32 {
        match self {
            RankOneVariety::Cone(c) => c.dim(),
            RankOneVariety::Wps(w) => w.dim(),
        }
    }
}

/// Push a class on `P(O(m) + O^{r'})` forward to the cone it resolves:
/// `mu_* Lambda = H` and `m * mu_* pi^*A = H`.
pub fn cone_pushforward(resolution: &BundleVariety, d: &Class2) -> Result<RankOneClass> {
    if !resolution.is_cone_resolution() {
        return Err(Error::domain(format!(
            "bundle with twists {:?} does not contract to a cone",
            resolution.b()
        )));
    }
    let m = Rational::from(resolution.m());
    Ok(RankOneClass {
        s: &d.beta + &d.gamma / m,
    })
}

/// `-K_F = (r' - d/m) H` for the foliation induced on the cone by a base
/// foliation with `K = O_Z(d)`; Fano exactly when `d < m r'`.
pub fn cone_anticanonical(cone: &GeneralizedCone, d: i64) -> Result<RankOneClass> {
    let s = Rational::from(cone.vertex_rank) - Rational::new(d, cone.m as i64);
    if !s.is_positive() {
        return Err(Error::NotFano(format!(
            "base canonical degree {d} >= m r' = {}",
            cone.m as i64 * cone.vertex_rank as i64
        )));
    }
    Ok(RankOneClass { s })
}

/// Invariants of the foliation induced on a cone by a base foliation with
/// `K = O_Z(d)`: all three equal `r' - d/m`.
pub fn cone_foliation_invariants(
    cone: &GeneralizedCone,
    d: i64,
) -> Result<crate::verification::InvariantReport> {
    let minus_k = cone_anticanonical(cone, d)?;
    crate::verification::rank_one_invariants(RankOneVariety::Cone(cone), &minus_k)
}
