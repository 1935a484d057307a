use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::BundleVariety;
use crate::rank_one::{GeneralizedCone, PolarizedBase, RankOneVariety, WeightedProjectiveSpace};

/// Ambient variety of a foliation.
///
/// `Base` only appears as the ambient of a foliation on the base of a cone
/// when that base is not a projective space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum VarietyModel {
    Bundle(BundleVariety),
    Cone(GeneralizedCone),
    Wps(WeightedProjectiveSpace),
    Base(PolarizedBase),
}

impl VarietyModel {
    pub fn projective_space(n: u32) -> crate::Result<Self> {
        WeightedProjectiveSpace::projective_space(n).map(VarietyModel::Wps)
    }

    /// The variety on which a cone's base foliation lives.
    pub fn cone_base(cone: &GeneralizedCone) -> crate::Result<Self> {
        let base = cone.base();
        if base.is_projective_space() {
            VarietyModel::projective_space(base.dim())
        } else {
            Ok(VarietyModel::Base(base.clone()))
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            VarietyModel::Bundle(x) => x.dim(),
            VarietyModel::Cone(c) => c.dim(),
            VarietyModel::Wps(w) => w.dim(),
            VarietyModel::Base(b) => b.dim(),
        }
    }

    pub fn as_rank_one(&self) -> Option<RankOneVariety<'_>> {
        match self {
            VarietyModel::Cone(c) => Some(RankOneVariety::Cone(c)),
            VarietyModel::Wps(w) => Some(RankOneVariety::Wps(w)),
            _ => None,
        }
    }

    /// `P^n`, in either of its presentations.
    pub fn is_projective_space(&self) -> bool {
        match self {
            VarietyModel::Wps(w) => w.is_projective_space(),
            VarietyModel::Cone(c) => c.is_projective_space(),
            VarietyModel::Base(_) | VarietyModel::Bundle(_) => false,
        }
    }

    /// `Some(true)` when smooth, `Some(false)` when singular, `None` for
    /// abstract bases whose geometry is not modelled.
    pub fn is_smooth(&self) -> Option<bool> {
        match self {
            VarietyModel::Bundle(_) => Some(true),
            VarietyModel::Wps(w) => Some(w.is_projective_space()),
            VarietyModel::Cone(c) => {
                if c.is_projective_space() {
                    Some(true)
                } else if c.base().is_projective_space() {
                    Some(false)
                } else {
                    None
                }
            }
            VarietyModel::Base(b) => {
                if b.is_projective_space() {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Display for VarietyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyModel::Bundle(x) => {
                let b: Vec<String> = x.b().iter().map(|v| v.to_string()).collect();
                write!(
                    f,
                    "P(O({}) + O(-[{}])) over P^{}",
                    x.m(),
                    b.join(","),
                    x.base_dim()
                )
            }
            VarietyModel::Cone(c) => write!(
                f,
                "cone over ({}, O({})) vertex P^{}",
                c.base().label(),
                c.m(),
                c.vertex_rank() - 1
            ),
            VarietyModel::Wps(w) => {
                if w.is_projective_space() {
                    write!(f, "P^{}", w.dim())
                } else {
                    let ws: Vec<String> = w.weights().iter().map(|v| v.to_string()).collect();
                    write!(f, "P({})", ws.join(","))
                }
            }
            VarietyModel::Base(b) => write!(f, "{}", b.label()),
        }
    }
}
