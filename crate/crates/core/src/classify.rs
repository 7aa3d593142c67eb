//! Postnikov extensions of `F_p` by `Sigma^n F_p`, counted by orbits of Hochschild cohomology
//! classes under `Aut(F_p)`, and the comparison map `F_p[sigma_2] -> Gamma[alpha_2]`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;

/// The base ring spectrum of the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Base {
    /// Over `HZ`: the ring `F_p[sigma_2]`.
    #[serde(rename = "HZ")]
    Hz,
    /// Over the sphere: the ring `Gamma[alpha_2]`.
    #[serde(rename = "S")]
    Sphere,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Hz => "HZ",
            Base::Sphere => "S",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThhVariant {
    Polynomial,
    DividedPower,
}

/// A homogeneous element `c * b_k` in cohomological degree `2k`, where `b_k` is `sigma_2^k` or
/// `gamma_k(alpha_2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThhElement {
    pub k: u32,
    pub coeff: u32,
}

/// `F_p[sigma_2]` or `Gamma[alpha_2]`, rank one in each even degree up to `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThhRing {
    pub variant: ThhVariant,
    pub p: Prime,
    pub bound: u32,
}

impl ThhRing {
    pub fn new(variant: ThhVariant, p: Prime, bound: u32) -> Self {
        ThhRing { variant, p, bound }
    }

    pub fn for_base(base: Base, p: Prime, bound: u32) -> Self {
        let variant = match base {
            Base::Hz => ThhVariant::Polynomial,
            Base::Sphere => ThhVariant::DividedPower,
        };
        ThhRing::new(variant, p, bound)
    }

    pub fn dim(&self, degree: u32) -> usize {
        usize::from(degree % 2 == 0 && degree <= self.bound)
    }

    pub fn basis(&self, k: u32) -> ThhElement {
        ThhElement { k, coeff: 1 }
    }

    pub fn mul(&self, a: ThhElement, b: ThhElement) -> ThhElement {
        let k = a.k + b.k;
        let mut coeff = self.p.mul(a.coeff, b.coeff);
        if self.variant == ThhVariant::DividedPower {
            coeff = self.p.mul(coeff, self.p.binomial(k as i64, a.k as i64));
        }
        if 2 * k > self.bound {
            coeff = 0;
        }
        ThhElement { k, coeff }
    }

    /// `x^e` for `x` the degree-two generator: `sigma_2^e`, or `alpha_2^e = e! gamma_e`.
    pub fn generator_power(&self, e: u32) -> ThhElement {
        let mut acc = ThhElement { k: 0, coeff: 1 };
        for _ in 0..e {
            acc = self.mul(acc, self.basis(1));
        }
        acc
    }

    pub fn render(&self, x: ThhElement) -> String {
        if x.coeff == 0 {
            return "0".into();
        }
        let b = match (self.variant, x.k) {
            (_, 0) => return x.coeff.to_string(),
            (ThhVariant::Polynomial, 1) => "sigma2".to_string(),
            (ThhVariant::Polynomial, k) => format!("sigma2^{k}"),
            (ThhVariant::DividedPower, k) => format!("gamma{k}"),
        };
        if x.coeff == 1 {
            b
        } else {
            format!("{} {b}", x.coeff)
        }
    }
}

/// The ring map `sigma_2 -> alpha_2`, so `sigma_2^k -> k! gamma_k`.
pub fn comparison_map(p: Prime, bound: u32, x: ThhElement) -> ThhElement {
    let target = ThhRing::new(ThhVariant::DividedPower, p, bound);
    let image = target.generator_power(x.k);
    ThhElement {
        k: x.k,
        coeff: p.mul(x.coeff, image.coeff),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representative {
    pub class: String,
    pub realization: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub p: u32,
    pub n: u32,
    pub base: Base,
    pub count: usize,
    pub representatives: Vec<Representative>,
    pub notes: Vec<String>,
}

/// Orbits of `THH^{n+2}` under `F_p^x`: the zero class, plus one orbit of nonzero classes when
/// the degree is nonzero.
pub fn postnikov_classes(base: Base, p: Prime, n: u32) -> ClassificationReport {
    let degree = n + 2;
    let ring = ThhRing::for_base(base, p, degree);
    let mut representatives = vec![Representative {
        class: "0".into(),
        realization: None,
    }];
    if ring.dim(degree) > 0 {
        representatives.push(Representative {
            class: ring.render(ring.basis(degree / 2)),
            realization: None,
        });
    }
    if base == Base::Hz && n == 0 {
        representatives[0].realization = Some("HLambda_{F_p}(x_0)".into());
        representatives[1].realization = Some("HZ/p^2".into());
    }
    let mut notes = Vec::new();
    if base == Base::Sphere {
        notes.push(
            "counted from the ring structure: Gamma[alpha_2] is concentrated in even degrees, \
             so a nonzero class needs n even"
                .into(),
        );
    }
    ClassificationReport {
        p: p.value(),
        n,
        base,
        count: representatives.len(),
        representatives,
        notes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CollapseVerdict {
    Collapse,
    NoCollapse,
}

impl fmt::Display for CollapseVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapseVerdict::Collapse => "COLLAPSE",
            CollapseVerdict::NoCollapse => "NO COLLAPSE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub p: u32,
    pub n: u32,
    pub k: u32,
    /// `phi(sigma_2^k)` in the divided power ring.
    pub image: String,
    pub verdict: CollapseVerdict,
    /// `n = 2p - 2`, where the collapse is known independently.
    pub certified: bool,
}

/// Whether the two `HZ`-classes in degree `n` become equivalent over the sphere: the nonzero
/// class `sigma_2^k`, `k = (n+2)/2`, maps to `k! gamma_k`.
pub fn comparison_collapse(p: Prime, n: u32) -> Result<CollapseReport> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::Hypothesis(format!(
            "n = {n}: comparison needs n even and positive, where two HZ-classes exist"
        )));
    }
    let k = (n + 2) / 2;
    let image = comparison_map(p, n + 2, ThhElement { k, coeff: 1 });
    let ring = ThhRing::new(ThhVariant::DividedPower, p, n + 2);
    let verdict = if image.coeff == 0 {
        CollapseVerdict::Collapse
    } else {
        CollapseVerdict::NoCollapse
    };
    Ok(CollapseReport {
        p: p.value(),
        n,
        k,
        image: ring.render(image),
        verdict,
        certified: n == 2 * p.value() - 2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub p: u32,
    pub n: u32,
    pub hz: ClassificationReport,
    pub sphere: ClassificationReport,
    pub collapse: Option<CollapseReport>,
}

pub fn classification_table(p: Prime, n_max: u32) -> Vec<TableRow> {
    (0..=n_max)
        .map(|n| TableRow {
            p: p.value(),
            n,
            hz: postnikov_classes(Base::Hz, p, n),
            sphere: postnikov_classes(Base::Sphere, p, n),
            collapse: comparison_collapse(p, n).ok(),
        })
        .collect()
}

/// Plain-text rendering of [`classification_table`].
pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = String::from("p  n   HZ  S   collapse\n");
    for r in rows {
        let collapse = match &r.collapse {
            Some(c) => {
                let mark = if c.certified { " *" } else { "" };
                format!("{} ({}){mark}", c.verdict, c.image)
            }
            None => "-".into(),
        };
        out.push_str(&format!(
            "{:<2} {:<3} {:<3} {:<3} {collapse}\n",
            r.p, r.n, r.hz.count, r.sphere.count
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn divided_powers() {
        for pv in [2, 3, 5] {
            let g = ThhRing::new(ThhVariant::DividedPower, p(pv), 4 * pv + 4);
            for k in 0..=2 * pv {
                let a = g.generator_power(k);
                assert_eq!(a.coeff, p(pv).factorial(k as u64), "p = {pv}, k = {k}");
                assert_eq!(a.coeff == 0, k >= pv);
            }
            let poly = ThhRing::new(ThhVariant::Polynomial, p(pv), 40);
            for d in 0..=40 {
                assert_eq!(poly.dim(d), ThhRing::new(ThhVariant::DividedPower, p(pv), 40).dim(d));
            }
        }
    }

    #[test]
    fn comparison_is_multiplicative() {
        for pv in [2, 3, 5] {
            let bound = 24;
            let poly = ThhRing::new(ThhVariant::Polynomial, p(pv), bound);
            let dp = ThhRing::new(ThhVariant::DividedPower, p(pv), bound);
            for a in 0..=bound / 2 {
                for b in 0..=(bound / 2 - a) {
                    let lhs = comparison_map(p(pv), bound, poly.mul(poly.basis(a), poly.basis(b)));
                    let rhs = dp.mul(
                        comparison_map(p(pv), bound, poly.basis(a)),
                        comparison_map(p(pv), bound, poly.basis(b)),
                    );
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn counts_and_collapse() {
        for pv in [2, 3, 5] {
            for n in 0..=20 {
                let hz = postnikov_classes(Base::Hz, p(pv), n);
                let expected = if n % 2 == 0 { 2 } else { 1 };
                assert_eq!(hz.count, expected);
                assert_eq!(postnikov_classes(Base::Sphere, p(pv), n).count, expected);
            }
            let c = comparison_collapse(p(pv), 2 * pv - 2).unwrap();
            assert_eq!(c.verdict, CollapseVerdict::Collapse);
            assert!(c.certified);
        }
        let zero = postnikov_classes(Base::Hz, p(3), 0);
        let names: Vec<_> = zero.representatives.iter().filter_map(|r| r.realization.clone()).collect();
        assert_eq!(names, ["HLambda_{F_p}(x_0)", "HZ/p^2"]);
        let c = comparison_collapse(p(5), 2).unwrap();
        assert_eq!((c.verdict, c.image.as_str()), (CollapseVerdict::NoCollapse, "2 gamma2"));
        assert_eq!(comparison_collapse(p(3), 4).unwrap().image, "0");
        assert!(comparison_collapse(p(3), 3).is_err());
        assert!(comparison_collapse(p(3), 0).is_err());
        let text = render_table(&classification_table(p(2), 6));
        assert!(text.lines().any(|l| l.starts_with("2  2 ") && l.contains("COLLAPSE") && l.ends_with('*')));
    }
}
