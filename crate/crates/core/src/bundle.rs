//! Projective bundles `P(O(m) + O(-b_1) + ... + O(-b_r'))` over `P^k`.
//!
//! Classes are written in the basis `(Lambda, pi^*A)` of the tautological
//! class and the pull-back of a hyperplane of the base. The exceptional
//! divisor `E = P(O(-b_1) + ...)` has class `Lambda - m pi^*A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{content, Class2, Cone2, Membership, Positivity, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BundleRepr", into = "BundleRepr")]
pub struct BundleVariety {
    base_dim: u32,
    m: u32,
    b: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct BundleRepr {
    base_dim: u32,
    m: u32,
    b: Vec<u32>,
}

impl TryFrom<BundleRepr> for BundleVariety {
    type Error = Error;
    fn try_from(r: BundleRepr) -> Result<Self> {
        BundleVariety::new(r.base_dim, r.m, r.b)
    }
}

impl From<BundleVariety> for BundleRepr {
    fn from(x: BundleVariety) -> Self {
        BundleRepr {
            base_dim: x.base_dim,
            m: x.m,
            b: x.b,
        }
    }
}

/// Decomposition `D = t*H + p_e*E + p_a*pi^*A` certifying a generalised index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWitness {
    pub t: Rational,
    pub h: Class2,
    pub p_e: Rational,
    pub p_a: Rational,
}

impl BundleVariety {
    /// `b` must be sorted descending and non-empty.
    pub fn new(base_dim: u32, m: u32, b: Vec<u32>) -> Result<Self> {
        if base_dim < 1 {
            return Err(Error::domain("bundle base dimension must be at least 1"));
        }
        if m < 1 {
            return Err(Error::domain("twist m must be at least 1"));
        }
        if b.is_empty() {
            return Err(Error::domain("bundle needs at least one negative summand"));
        }
        if b.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!(
                "twists {b:?} are not sorted descending"
            )));
        }
        Ok(BundleVariety { base_dim, m, b })
    }

    /// The Hirzebruch surface `P(O(a-1) + O)` over `P^1`, `a >= 2`.
    pub fn hirzebruch(a: u32) -> Result<Self> {
        if a < 2 {
            return Err(Error::domain("Hirzebruch parameter a must be at least 2"));
        }
        BundleVariety::new(1, a - 1, vec![0])
    }

    pub fn base_dim(&self) -> u32 {
        self.base_dim
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn b1(&self) -> u32 {
        self.b[0]
    }

    /// Number `r'` of negative summands; the fibres are `P^{r'}`.
    pub fn fiber_rank(&self) -> u32 {
        self.b.len() as u32
    }

    pub fn b_total(&self) -> u32 {
        self.b.iter().sum()
    }

    pub fn dim(&self) -> u32 {
        self.base_dim + self.fiber_rank()
    }

    /// Whether every `b_i` vanishes, so the bundle resolves a generalised cone.
    pub fn is_cone_resolution(&self) -> bool {
        self.b.iter().all(|&x| x == 0)
    }

    pub fn exceptional(&self) -> Class2 {
        Class2::ints(1, -(self.m as i64))
    }

    pub fn fiber_class(&self) -> Class2 {
        Class2::ints(0, 1)
    }

    pub fn nef_cone(&self) -> Cone2 {
        Cone2::new(Class2::ints(1, self.b1() as i64), self.fiber_class())
            .expect("nef rays are primitive and independent")
    }

    pub fn pseff_cone(&self) -> Cone2 {
        Cone2::new(self.exceptional(), self.fiber_class())
            .expect("pseff rays are primitive and independent")
    }

    pub fn classify(&self, d: &Class2) -> Positivity {
        let pseff = self.pseff_cone().membership(d);
        let nef = self.nef_cone().membership(d);
        Positivity {
            pseff: pseff != Membership::Outside,
            big: pseff == Membership::Interior,
            nef: nef != Membership::Outside,
            ample: nef == Membership::Interior,
        }
    }

    /// `-K_{X/Z} = (r'+1) Lambda + (b - m) pi^*A`.
    pub fn relative_anticanonical(&self) -> Class2 {
        Class2::ints(
            self.fiber_rank() as i64 + 1,
            self.b_total() as i64 - self.m as i64,
        )
    }

    /// The very ample class `Lambda + (b_1 + 1) pi^*A` and its Seshadri
    /// constant, which is 1 (it restricts to a hyperplane on every fibre).
    pub fn seshadri_polarization(&self) -> (Class2, Rational) {
        (Class2::ints(1, self.b1() as i64 + 1), Rational::one())
    }

    /// Generalised index of a big class, with a certificate at the
    /// polarization `H = Lambda + (b_1 + 1) pi^*A`.
    ///
    /// For big classes that are not ample this is `(m*beta + gamma) / (m + b_1 + 1)`;
    /// for ample ones the optimum can instead be cut off by `beta` itself.
    pub fn generalized_index(&self, d: &Class2) -> Result<(Rational, IndexWitness)> {
        if !self.classify(d).big {
            return Err(Error::domain(format!("class {d} is not big")));
        }
        let m = Rational::from(self.m);
        let b1 = Rational::from(self.b1());
        let one = Rational::one();
        let denom = &m + &b1 + &one;
        let slope = (&m * &d.beta + &d.gamma) / &denom;
        let (h, _) = self.seshadri_polarization();

        let witness = if slope <= d.beta {
            let p_e = (&d.beta * (&b1 + &one) - &d.gamma) / &denom;
            IndexWitness {
                t: slope,
                h,
                p_e,
                p_a: Rational::zero(),
            }
        } else {
            let p_a = &d.gamma - &d.beta * (&b1 + &one);
            IndexWitness {
                t: d.beta.clone(),
                h,
                p_e: Rational::zero(),
                p_a,
            }
        };
        self.check_witness(d, &witness)?;
        Ok((witness.t.clone(), witness))
    }

    /// Verifies `d = t*H + p_e*E + p_a*pi^*A` exactly, with `H` ample and
    /// non-negative remainder coefficients.
    pub fn check_witness(&self, d: &Class2, w: &IndexWitness) -> Result<()> {
        let rebuilt = &(&w.h.scale(&w.t) + &self.exceptional().scale(&w.p_e))
            + &self.fiber_class().scale(&w.p_a);
        if &rebuilt != d {
            return Err(Error::Internal(format!(
                "witness rebuilds {rebuilt}, expected {d}"
            )));
        }
        if w.p_e.is_negative() || w.p_a.is_negative() {
            return Err(Error::Internal("witness remainder is not effective".into()));
        }
        if !w.h.is_integral() || !self.classify(&w.h).ample {
            return Err(Error::Internal(format!(
                "witness polarization {} is not ample",
                w.h
            )));
        }
        Ok(())
    }

    /// Fano index of an integral ample class: the content of the class,
    /// since the Picard group is the full lattice.
    pub fn fano_index(&self, d: &Class2) -> Result<Rational> {
        if !d.is_integral() {
            return Err(Error::domain(format!("class {d} is not integral")));
        }
        if !self.classify(d).ample {
            return Err(Error::domain(format!("class {d} is not ample")));
        }
        Ok(Rational::from(content(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn x(k: u32, m: u32, b: &[u32]) -> BundleVariety {
        BundleVariety::new(k, m, b.to_vec()).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert!(BundleVariety::new(0, 1, vec![0]).is_err());
        assert!(BundleVariety::new(1, 0, vec![0]).is_err());
        assert!(BundleVariety::new(1, 1, vec![]).is_err());
        assert!(BundleVariety::new(1, 1, vec![0, 1]).is_err());
        let b = x(5, 1, &[1, 1, 1]);
        assert_eq!((b.dim(), b.b_total(), b.fiber_rank()), (8, 3, 3));
    }

    #[test]
    fn cones() {
        let c = x(1, 1, &[0]).nef_cone();
        assert_eq!(
            (c.ray1(), c.ray2()),
            (&Class2::ints(1, 0), &Class2::ints(0, 1))
        );
        let c = x(1, 2, &[1, 1]).nef_cone();
        assert_eq!(c.ray1(), &Class2::ints(1, 1));
        let c = x(5, 1, &[1, 1, 1]).nef_cone();
        assert_eq!(c.ray1(), &Class2::ints(1, 1));

        assert_eq!(x(1, 1, &[0]).pseff_cone().ray1(), &Class2::ints(1, -1));
        assert_eq!(x(1, 2, &[1, 1]).pseff_cone().ray1(), &Class2::ints(1, -2));
        assert_eq!(x(2, 3, &[0]).pseff_cone().ray1(), &Class2::ints(1, -3));
    }

    #[test]
    fn classify_examples() {
        let p = x(1, 2, &[1, 1]).classify(&Class2::ints(3, 0));
        assert_eq!(
            p,
            Positivity {
                pseff: true,
                big: true,
                nef: false,
                ample: false
            }
        );
        let p = x(5, 1, &[1, 1, 1]).classify(&Class2::ints(4, 5));
        assert_eq!(
            p,
            Positivity {
                pseff: true,
                big: true,
                nef: true,
                ample: true
            }
        );
        let p = x(3, 2, &[2, 1]).classify(&Class2::ints(0, 1));
        assert_eq!(
            p,
            Positivity {
                pseff: true,
                big: false,
                nef: true,
                ample: false
            }
        );
        let p = x(1, 2, &[0]).classify(&Class2::ints(1, -3));
        assert_eq!(p, Positivity::default());
    }

    #[test]
    fn relative_anticanonical_examples() {
        assert_eq!(
            x(1, 2, &[1, 1]).relative_anticanonical(),
            Class2::ints(3, 0)
        );
        assert_eq!(
            BundleVariety::hirzebruch(2)
                .unwrap()
                .relative_anticanonical(),
            Class2::ints(2, -1)
        );
        assert_eq!(x(2, 2, &[1]).relative_anticanonical(), Class2::ints(2, -1));
    }

    #[test]
    fn generalized_index_examples() {
        let (t, w) = x(1, 1, &[0])
            .generalized_index(&Class2::ints(2, -1))
            .unwrap();
        assert_eq!(t, q(1, 2));
        assert_eq!(w.h, Class2::ints(1, 1));
        assert!(w.p_e.is_positive());

        let (t, _) = x(1, 2, &[1, 1])
            .generalized_index(&Class2::ints(3, 0))
            .unwrap();
        assert_eq!(t, q(3, 2));

        // Ample regime: min(4, 9/3).
        let (t, w) = x(5, 1, &[1, 1, 1])
            .generalized_index(&Class2::ints(4, 5))
            .unwrap();
        assert_eq!(t, q(3, 1));
        assert_eq!(w.p_e, q(1, 1));

        // Ample regime where beta is the binding term.
        let (t, w) = x(1, 1, &[0])
            .generalized_index(&Class2::ints(1, 5))
            .unwrap();
        assert_eq!(t, q(1, 1));
        assert_eq!(w.p_a, q(4, 1));

        assert!(x(1, 2, &[1])
            .generalized_index(&Class2::ints(0, 1))
            .is_err());
    }

    #[test]
    fn fano_index_examples() {
        assert_eq!(
            x(5, 1, &[1, 1, 1]).fano_index(&Class2::ints(4, 5)).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            x(1, 2, &[1]).fano_index(&Class2::ints(2, 4)).unwrap(),
            q(2, 1)
        );
        assert!(matches!(
            x(1, 2, &[1, 1]).fano_index(&Class2::ints(3, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn seshadri_polarizations() {
        assert_eq!(
            x(1, 1, &[0]).seshadri_polarization(),
            (Class2::ints(1, 1), q(1, 1))
        );
        assert_eq!(
            x(1, 2, &[1, 1]).seshadri_polarization().0,
            Class2::ints(1, 2)
        );
        assert_eq!(x(2, 2, &[1]).seshadri_polarization().0, Class2::ints(1, 2));
    }

    #[test]
    fn nef_inside_pseff() {
        for m in 1..=5u32 {
            for b1 in 0..=5u32 {
                let xv = x(1, m, &[b1]);
                for beta in -6..=6 {
                    for gamma in -12..=12 {
                        let d = Class2::ints(beta, gamma);
                        let p = xv.classify(&d);
                        if p.nef {
                            assert!(p.pseff, "{d} nef but not pseff on m={m} b1={b1}");
                        }
                        if p.ample {
                            assert!(p.big);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn regimes_agree_on_ample_boundary() {
        for m in 1..=4u32 {
            for b1 in 0..=3u32 {
                let xv = x(2, m, &[b1]);
                for beta in 1..=6i64 {
                    let d = Class2::ints(beta, b1 as i64 * beta);
                    let (t, _) = xv.generalized_index(&d).unwrap();
                    let slope = Rational::integer(m as i64 * beta + b1 as i64 * beta)
                        / Rational::integer((m + b1 + 1) as i64);
                    assert_eq!(t, slope);
                }
            }
        }
    }

    fn bundle_strategy() -> impl Strategy<Value = BundleVariety> {
        (1u32..4, 1u32..5, 0u32..4, 0u32..3).prop_map(|(k, m, b1, extra)| {
            let mut b = vec![b1];
            b.extend(std::iter::repeat_n(b1 / 2, extra as usize));
            BundleVariety::new(k, m, b).unwrap()
        })
    }

    proptest! {
        #[test]
        fn index_is_homogeneous(
            xv in bundle_strategy(),
            beta in 1i64..8, gamma in -8i64..16,
            kn in 1i64..7, kd in 1i64..7,
        ) {
            let d = Class2::ints(beta, gamma);
            prop_assume!(xv.classify(&d).big);
            let k = q(kn, kd);
            let (t, _) = xv.generalized_index(&d).unwrap();
            let (tk, _) = xv.generalized_index(&d.scale(&k)).unwrap();
            prop_assert_eq!(tk, &t * &k);
        }

        #[test]
        fn index_is_monotone(
            xv in bundle_strategy(),
            beta in 1i64..8, gamma in -8i64..16,
            pe in 0i64..5, pa in 0i64..5,
        ) {
            let d = Class2::ints(beta, gamma);
            prop_assume!(xv.classify(&d).big);
            let p = &xv.exceptional().scale(&Rational::integer(pe))
                + &xv.fiber_class().scale(&Rational::integer(pa));
            let (t, _) = xv.generalized_index(&d).unwrap();
            let (tp, _) = xv.generalized_index(&(&d + &p)).unwrap();
            prop_assert!(tp >= t);
        }

        #[test]
        fn witness_reconstructs(xv in bundle_strategy(), beta in -4i64..8, gamma in -20i64..20) {
            let d = Class2::ints(beta, gamma);
            prop_assume!(xv.classify(&d).big);
            let (t, w) = xv.generalized_index(&d).unwrap();
            prop_assert_eq!(&t, &w.t);
            prop_assert!(xv.check_witness(&d, &w).is_ok());
        }

        #[test]
        fn fano_index_below_generalized(xv in bundle_strategy(), beta in 1i64..8, gamma in 0i64..30) {
            let d = Class2::ints(beta, gamma);
            prop_assume!(xv.classify(&d).ample);
            let iota = xv.fano_index(&d).unwrap();
            let (hat, _) = xv.generalized_index(&d).unwrap();
            prop_assert!(iota <= hat);
        }
    }
}
