//! Ring maps between presentations, Dyer-Lashof equivariance, and isomorphism search.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::{AlgebraPresentation, QLookup};
use crate::error::{Error, Result};
use crate::graded::Element;
use crate::linalg::Matrix;

/// Cap on the number of candidate assignments [`find_isomorphisms`] will enumerate.
pub const SEARCH_BUDGET: u128 = 1_000_000;

/// A map given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Element>,
}

impl Morphism {
    pub fn new(images: Vec<Element>) -> Self {
        Morphism { images }
    }

    /// Generator `g` to the generator of the same name in the target.
    pub fn identity_on_names(x: &AlgebraPresentation, y: &AlgebraPresentation) -> Result<Self> {
        let images = x
            .algebra()
            .generators()
            .iter()
            .map(|g| Element::named(y.algebra(), &g.name))
            .collect::<Result<_>>()?;
        Ok(Morphism { images })
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// The image of `x`, not yet reduced in the target.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        let target = self
            .images
            .first()
            .map(|e| e.algebra().clone())
            .ok_or_else(|| Error::Presentation("morphism has no generator images".into()))?;
        x.substitute(&target, &self.images)
    }

    pub fn apply_in(&self, y: &AlgebraPresentation, x: &Element) -> Result<Element> {
        if self.images.is_empty() {
            return Ok(y.reduce(&x.homogeneous_part(0).transport(y.algebra())?));
        }
        Ok(y.reduce(&self.apply(x)?))
    }

    pub fn describe(&self, source: &AlgebraPresentation) -> Vec<(String, String)> {
        source
            .algebra()
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, e)| (g.name.clone(), e.to_string()))
            .collect()
    }
}

/// The first constraint a candidate map breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Relation { relation: String, image: String },
    QPair { op: String, arg: String, image_of_value: String, value_on_image: String },
    Undetermined { op: String, arg: String, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Relation { relation, image } => {
                write!(f, "relation {relation} maps to {image}, not 0")
            }
            Violation::QPair {
                op,
                arg,
                image_of_value,
                value_on_image,
            } => write!(
                f,
                "pair ({op}, {arg}): f({op} {arg}) = {image_of_value} but {op} f({arg}) = {value_on_image}"
            ),
            Violation::Undetermined { op, arg, reason } => {
                write!(f, "pair ({op}, {arg}) cannot be checked: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "violation", rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected(Violation),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Checks that `f` is a degree-preserving ring map `X -> Y` that commutes with every recorded
/// operation value of `X`.
pub fn check_morphism(
    f: &Morphism,
    x: &AlgebraPresentation,
    y: &AlgebraPresentation,
) -> Result<Verdict> {
    let gens = x.algebra().generators();
    if f.images.len() != gens.len() {
        return Err(Error::Presentation(format!(
            "{} generator images for {} generators",
            f.images.len(),
            gens.len()
        )));
    }
    for (g, img) in gens.iter().zip(&f.images) {
        if **img.algebra() != **y.algebra() {
            return Err(Error::MixedAlgebras);
        }
        let img = y.reduce(img);
        if !img.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        if let Some(d) = img.degree()? {
            if d != g.degree {
                return Err(Error::ImageDegree {
                    generator: g.name.clone(),
                    expected: g.degree,
                    actual: d,
                });
            }
        }
    }
    for r in x.ring().ideal().relations() {
        let image = f.apply_in(y, r)?;
        if !image.is_zero() {
            return Ok(Verdict::Rejected(Violation::Relation {
                relation: r.to_string(),
                image: image.to_string(),
            }));
        }
    }
    for qv in x.q_values() {
        let image_of_value = f.apply_in(y, &qv.value)?;
        let image_of_arg = f.apply_in(y, &qv.arg)?;
        match y.q(qv.op, &image_of_arg)? {
            QLookup::Value(v) if v == image_of_value => {}
            QLookup::Value(v) => {
                return Ok(Verdict::Rejected(Violation::QPair {
                    op: qv.op.to_string(),
                    arg: qv.arg.to_string(),
                    image_of_value: image_of_value.to_string(),
                    value_on_image: v.to_string(),
                }))
            }
            QLookup::Undetermined(reason) => {
                return Ok(Verdict::Rejected(Violation::Undetermined {
                    op: qv.op.to_string(),
                    arg: qv.arg.to_string(),
                    reason,
                }))
            }
        }
    }
    Ok(Verdict::Accepted)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub forward: Morphism,
    pub inverse: Morphism,
}

/// The matrix of `f` from `X_d` to `Y_d` in standard-monomial coordinates.
fn degree_matrix(
    f: &Morphism,
    x: &AlgebraPresentation,
    y: &AlgebraPresentation,
    d: u32,
) -> Result<Matrix> {
    let cols = x
        .ring()
        .basis_elements(d)
        .iter()
        .map(|b| Ok(y.ring().coordinates(&f.apply_in(y, b)?, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(y.dim(d), &cols))
}

/// The linear inverse of a bijective `f`, as a map on generators of `Y`.
fn linear_inverse(
    f: &Morphism,
    x: &AlgebraPresentation,
    y: &AlgebraPresentation,
) -> Result<Option<Morphism>> {
    let p = x.prime();
    let mut mats = Vec::new();
    for d in 0..=x.bound() {
        let m = degree_matrix(f, x, y, d)?;
        if m.rank(p) != x.dim(d) || x.dim(d) != y.dim(d) {
            return Ok(None);
        }
        mats.push(m);
    }
    let mut images = Vec::new();
    for g in y.algebra().generators() {
        let h = Element::named(y.algebra(), &g.name)?;
        let coords = y.ring().coordinates(&h, g.degree);
        let Some(z) = mats[g.degree as usize].solve(p, &coords) else {
            return Ok(None);
        };
        images.push(x.ring().from_coordinates(g.degree, &z));
    }
    Ok(Some(Morphism::new(images)))
}

fn search_size(x: &AlgebraPresentation, y: &AlgebraPresentation) -> u128 {
    let p = x.prime().value() as u128;
    x.algebra()
        .generators()
        .iter()
        .map(|g| p.saturating_pow(y.dim(g.degree) as u32))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

/// Every isomorphism `X -> Y` compatible with the recorded operation data of both sides.
pub fn find_isomorphisms(
    x: &AlgebraPresentation,
    y: &AlgebraPresentation,
) -> Result<Vec<Isomorphism>> {
    find_isomorphisms_with_budget(x, y, SEARCH_BUDGET)
}

pub fn find_isomorphisms_with_budget(
    x: &AlgebraPresentation,
    y: &AlgebraPresentation,
    budget: u128,
) -> Result<Vec<Isomorphism>> {
    if x.prime() != y.prime() {
        return Err(Error::MixedAlgebras);
    }
    if x.bound() != y.bound() || x.poincare_series() != y.poincare_series() {
        return Ok(Vec::new());
    }
    let size = search_size(x, y);
    if size > budget {
        return Err(Error::SearchBudget { size, budget });
    }
    let p = x.prime().value() as u128;
    // Candidate images per generator: all of Y in that degree, in coordinate order.
    let slots: Vec<(u32, usize)> = x
        .algebra()
        .generators()
        .iter()
        .map(|g| (g.degree, y.dim(g.degree)))
        .collect();
    let decode = |mut index: u128| -> Morphism {
        let mut images = Vec::with_capacity(slots.len());
        for &(d, dim) in &slots {
            let mut coords = vec![0u32; dim];
            for c in coords.iter_mut() {
                *c = (index % p) as u32;
                index /= p;
            }
            images.push(y.ring().from_coordinates(d, &coords));
        }
        Morphism::new(images)
    };
    let found: Vec<Result<Option<Isomorphism>>> = (0..size as u64)
        .into_par_iter()
        .map(|i| {
            let f = decode(i as u128);
            if !check_morphism(&f, x, y)?.is_accepted() {
                return Ok(None);
            }
            let Some(g) = linear_inverse(&f, x, y)? else {
                return Ok(None);
            };
            if !check_morphism(&g, y, x)?.is_accepted() {
                return Ok(None);
            }
            Ok(Some(Isomorphism {
                forward: f,
                inverse: g,
            }))
        })
        .collect();
    found.into_iter().filter_map(|r| r.transpose()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;
    use crate::graded::GeneratorSpec;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn truncated_poly(q2: &str) -> AlgebraPresentation {
        AlgebraPresentation::from_strings(
            p(2),
            3,
            vec![GeneratorSpec::new("xi1", 1)],
            &[],
            &[("Q^2", "xi1", q2)],
        )
        .unwrap()
    }

    #[test]
    fn equivariance_decides() {
        let x1 = truncated_poly("xi1^3");
        let x2 = truncated_poly("0");
        let id = Morphism::identity_on_names(&x1, &x2).unwrap();
        assert!(check_morphism(&Morphism::identity_on_names(&x1, &x1).unwrap(), &x1, &x1)
            .unwrap()
            .is_accepted());
        match check_morphism(&id, &x1, &x2).unwrap() {
            Verdict::Rejected(Violation::QPair { op, arg, .. }) => {
                assert_eq!((op.as_str(), arg.as_str()), ("Q^2", "xi1"));
            }
            other => panic!("{other:?}"),
        }
        let bare = check_morphism(&id, &x1.without_q_data(), &x2.without_q_data()).unwrap();
        assert!(bare.is_accepted());
        assert!(find_isomorphisms(&x1, &x2).unwrap().is_empty());
        assert_eq!(find_isomorphisms(&x1.without_q_data(), &x2.without_q_data()).unwrap().len(), 1);
        let own = find_isomorphisms(&x1, &x1).unwrap();
        assert_eq!(own.len(), 1);
        assert_eq!(own[0].forward, Morphism::identity_on_names(&x1, &x1).unwrap());
    }

    #[test]
    fn image_degree_and_relations() {
        let x = truncated_poly("0");
        let wrong = Morphism::new(vec![x.parse_element("xi1^2").unwrap()]);
        assert!(matches!(
            check_morphism(&wrong, &x, &x),
            Err(Error::ImageDegree { expected: 1, actual: 2, .. })
        ));
        let e = AlgebraPresentation::from_strings(
            p(3),
            8,
            vec![GeneratorSpec::new("x", 2)],
            &["x^2"],
            &[],
        )
        .unwrap();
        let f = AlgebraPresentation::from_strings(p(3), 8, vec![GeneratorSpec::new("x", 2)], &[], &[])
            .unwrap();
        let id = Morphism::identity_on_names(&f, &e).unwrap();
        assert!(check_morphism(&id, &f, &e).unwrap().is_accepted());
        let back = Morphism::identity_on_names(&e, &f).unwrap();
        assert!(matches!(
            check_morphism(&back, &e, &f).unwrap(),
            Verdict::Rejected(Violation::Relation { .. })
        ));
        assert!(find_isomorphisms(&e, &f).unwrap().is_empty());
        // Automorphisms of F_3[x]/(x^2) scale x by a unit.
        assert_eq!(find_isomorphisms(&e, &e).unwrap().len(), 2);
    }

    #[test]
    fn every_found_isomorphism_is_sound() {
        let x = AlgebraPresentation::from_strings(
            p(3),
            6,
            vec![
                GeneratorSpec::new("u", 1),
                GeneratorSpec::new("v", 1),
                GeneratorSpec::new("w", 2),
            ],
            &["u * v - w"],
            &[],
        )
        .unwrap();
        let isos = find_isomorphisms(&x, &x).unwrap();
        assert!(!isos.is_empty());
        for iso in &isos {
            assert!(check_morphism(&iso.forward, &x, &x).unwrap().is_accepted());
            assert!(check_morphism(&iso.inverse, &x, &x).unwrap().is_accepted());
            for g in x.algebra().generators() {
                let e = x.generator(&g.name).unwrap();
                let there = iso.forward.apply_in(&x, &e).unwrap();
                let back = iso.inverse.apply_in(&x, &there).unwrap();
                assert_eq!(back, x.reduce(&e));
            }
        }
        // GL_2(F_3) acts on (u, v), and w follows: 48 automorphisms.
        assert_eq!(isos.len(), 48);
        assert!(matches!(
            find_isomorphisms_with_budget(&x, &x, 10),
            Err(Error::SearchBudget { size: 243, budget: 10 })
        ));
    }
}
