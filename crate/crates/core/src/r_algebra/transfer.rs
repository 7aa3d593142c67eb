//! The extended module `A_* (x) X_*` and the chain of equalities that forces a ring isomorphism
//! to commute with the operations when the first homotopy group vanishes.

use serde::Serialize;

use super::{check_morphism, AlgebraPresentation, Morphism, QLookup};
use crate::error::{Error, Result};
use crate::graded::{Algebra, Element, GeneratorSpec, GradedIdeal, QuotientRing};
use crate::op_expr::Op;
use crate::steenrod::{Side, SteenrodDual};

/// `A_* (x) X_*` truncated at the bound of `X`. Generators are `A:<name>` for the dual Steenrod
/// generators and `X:<name>` for those of `X`.
#[derive(Clone, Debug)]
pub struct ExtendedModule {
    dual: SteenrodDual,
    base: AlgebraPresentation,
    ring: QuotientRing,
    /// Position of each dual generator among the generators of `ring`, if inside the bound.
    a_slots: Vec<Option<usize>>,
    x_offset: usize,
}

impl ExtendedModule {
    pub fn new(dual: &SteenrodDual, base: &AlgebraPresentation) -> Result<Self> {
        if dual.prime() != base.prime() {
            return Err(Error::MixedAlgebras);
        }
        let bound = base.bound();
        if bound > dual.bound() {
            return Err(Error::DegreeBound {
                degree: bound,
                bound: dual.bound(),
            });
        }
        let mut gens = Vec::new();
        let mut a_slots = Vec::new();
        for g in dual.algebra().generators() {
            if g.degree <= bound {
                a_slots.push(Some(gens.len()));
                gens.push(GeneratorSpec::new(format!("A:{}", g.name), g.degree));
            } else {
                a_slots.push(None);
            }
        }
        let x_offset = gens.len();
        for g in base.algebra().generators() {
            gens.push(GeneratorSpec::new(format!("X:{}", g.name), g.degree));
        }
        let alg = Algebra::new(base.prime(), bound, gens)?;
        let x_images: Vec<Element> = (0..base.algebra().generators().len())
            .map(|i| Element::generator(&alg, x_offset + i))
            .collect();
        let mut ideal = GradedIdeal::zero(&alg);
        for r in base.ring().ideal().relations() {
            ideal.add_relation(r.substitute(&alg, &x_images)?)?;
        }
        Ok(ExtendedModule {
            dual: dual.clone(),
            base: base.clone(),
            ring: QuotientRing::new(ideal),
            a_slots,
            x_offset,
        })
    }

    pub fn algebra(&self) -> &std::sync::Arc<Algebra> {
        self.ring.algebra()
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn dual(&self) -> &SteenrodDual {
        &self.dual
    }

    /// `a (x) 1` for `a` in the dual Steenrod algebra.
    pub fn left(&self, a: &Element) -> Result<Element> {
        let images: Vec<Element> = self
            .a_slots
            .iter()
            .map(|slot| match slot {
                Some(i) => Element::generator(self.algebra(), *i),
                None => Element::zero(self.algebra()),
            })
            .collect();
        Ok(self.ring.reduce(&a.substitute(self.algebra(), &images)?))
    }

    /// The unit map `eta(x) = 1 (x) x`.
    pub fn eta(&self, x: &Element) -> Result<Element> {
        let images: Vec<Element> = (0..self.base.algebra().generators().len())
            .map(|i| Element::generator(self.algebra(), self.x_offset + i))
            .collect();
        Ok(self.ring.reduce(&x.substitute(self.algebra(), &images)?))
    }

    /// `a (x) x`.
    pub fn tensor(&self, a: &Element, x: &Element) -> Result<Element> {
        Ok(self.ring.mul(&self.left(a)?, &self.eta(x)?))
    }

    /// The multiplication map: `a (x) x` goes to `a x` for `|a| = 0` and to zero otherwise.
    pub fn mu(&self, e: &Element) -> Result<Element> {
        let base_alg = self.base.algebra();
        let mut images = vec![Element::zero(base_alg); self.x_offset];
        images.extend((0..base_alg.generators().len()).map(|i| Element::generator(base_alg, i)));
        Ok(self.base.reduce(&e.substitute(base_alg, &images)?))
    }

    /// `Q(a (x) 1) = (Q a) (x) 1`, with the left action on the dual Steenrod algebra.
    pub fn q_left(&self, op: Op, a: &Element) -> Result<Element> {
        self.left(&self.dual.q_op(Side::Left, op, a)?)
    }

    /// Generator `A:<name>` as an element, for building maps out of this module.
    pub fn a_generator(&self, name: &str) -> Result<Element> {
        Element::named(self.algebra(), &format!("A:{name}"))
    }

    /// The map `A (x) X -> A (x) Y` with `a (x) 1` sent to `a_image(a)` and `1 (x) x` to
    /// `1 (x) phi(x)`.
    pub fn map_with(
        &self,
        target: &ExtendedModule,
        phi: &Morphism,
        a_image: impl Fn(&Element) -> Result<Element>,
    ) -> Result<Morphism> {
        let mut images = Vec::new();
        for (g, slot) in self.dual.algebra().generators().iter().zip(&self.a_slots) {
            if slot.is_some() {
                images.push(a_image(&self.dual.named(&g.name)?)?);
            }
        }
        for i in 0..self.base.algebra().generators().len() {
            let x = Element::generator(self.base.algebra(), i);
            images.push(target.eta(&phi.apply_in(&target.base, &x)?)?);
        }
        Ok(Morphism::new(images))
    }

    /// The positive-degree dual Steenrod generators inside the bound, as `(name, element)`.
    fn a_generators(&self) -> Vec<(String, Element)> {
        self.dual
            .algebra()
            .generators()
            .iter()
            .zip(&self.a_slots)
            .filter(|(_, s)| s.is_some())
            .map(|(g, _)| (g.name.clone(), self.dual.named(&g.name).unwrap()))
            .collect()
    }

    fn as_presentation(&self) -> Result<AlgebraPresentation> {
        AlgebraPresentation::new(self.ring.clone(), Vec::new())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// `mu_Y psi(tau_0 (x) 1) = 0` for the degree-one generator.
    DegreeOneClass,
    /// `mu_Y psi(a (x) 1) = 0` for each positive-degree generator `a`.
    PositiveGenerator,
    /// `mu_Y psi(a (x) x) = 0` for `|a| > 0`.
    Multiplicativity,
    /// `mu_Y psi(1 (x) x) = phi(x)`.
    UnitSquare,
    /// `phi(Q x) = Q mu_Y psi(1 (x) x) = Q phi(x)`.
    Equivariance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    pub equation: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TransferOutcome {
    /// Every step holds: the ring isomorphism commutes with all recorded operations.
    Certificate { pi1_vanishes: bool, steps: Vec<ChainStep> },
    /// The first failing step, after the steps that held before it.
    Trace { pi1_vanishes: bool, steps: Vec<ChainStep>, failed: ChainStep },
}

impl TransferOutcome {
    pub fn is_certificate(&self) -> bool {
        matches!(self, TransferOutcome::Certificate { .. })
    }

    pub fn steps(&self) -> &[ChainStep] {
        match self {
            TransferOutcome::Certificate { steps, .. } | TransferOutcome::Trace { steps, .. } => steps,
        }
    }
}

fn step(kind: StepKind, equation: String, lhs: &Element, rhs: &Element) -> ChainStep {
    ChainStep {
        kind,
        equation,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        holds: lhs == rhs,
    }
}

/// Follow the argument that a ring isomorphism `phi: X -> Y`, together with the induced map
/// `psi` on extended modules, preserves the operations. `psi` is an input: it comes from
/// topology, not from the algebra.
pub fn extend_and_transfer(
    ext_x: &ExtendedModule,
    ext_y: &ExtendedModule,
    phi: &Morphism,
    psi: &Morphism,
) -> Result<TransferOutcome> {
    let x = &ext_x.base;
    let y = &ext_y.base;
    let p = x.prime();
    if !check_morphism(phi, &x.without_q_data(), &y.without_q_data())?.is_accepted() {
        return Err(Error::Hypothesis("phi is not a ring map".into()));
    }
    for d in 0..=x.bound() {
        let images: Vec<Element> = x
            .ring()
            .basis_elements(d)
            .iter()
            .map(|b| phi.apply_in(y, b))
            .collect::<Result<_>>()?;
        let span = crate::linalg::Subspace::spanned_by(
            p,
            y.dim(d),
            images.iter().map(|e| y.ring().coordinates(e, d)),
        );
        if x.dim(d) != y.dim(d) || span.dim() != y.dim(d) {
            return Err(Error::Hypothesis(format!("phi is not bijective in degree {d}")));
        }
    }
    let ext_x_pres = ext_x.as_presentation()?;
    let ext_y_pres = ext_y.as_presentation()?;
    if !check_morphism(psi, &ext_x_pres, &ext_y_pres)?.is_accepted() {
        return Err(Error::Hypothesis("psi is not a ring map".into()));
    }
    let psi_of = |e: &Element| psi.apply_in(&ext_y_pres, e);
    let mu_psi = |e: &Element| -> Result<Element> { ext_y.mu(&psi_of(e)?) };

    // psi(eta_X x) = eta_Y(phi x) on generators.
    for g in x.algebra().generators() {
        let gx = x.generator(&g.name)?;
        let lhs = psi_of(&ext_x.eta(&gx)?)?;
        let rhs = ext_y.eta(&phi.apply_in(y, &gx)?)?;
        if lhs != rhs {
            return Err(Error::NotUnitCompatible(format!(
                "psi(1 (x) {}) = {lhs} but 1 (x) phi({}) = {rhs}",
                g.name, g.name
            )));
        }
    }

    let pi1_vanishes = y.dim(1) == 0;
    let mut steps = Vec::new();
    let zero_y = Element::zero(y.algebra());
    let push = |s: ChainStep, steps: &mut Vec<ChainStep>| -> Option<ChainStep> {
        if s.holds {
            steps.push(s);
            None
        } else {
            Some(s)
        }
    };
    let fail = |steps: Vec<ChainStep>, failed: ChainStep| TransferOutcome::Trace {
        pi1_vanishes,
        steps,
        failed,
    };

    let a_gens = ext_x.a_generators();
    if let Some((name, a)) = a_gens.iter().find(|(_, a)| a.degree().ok().flatten() == Some(1)) {
        let v = mu_psi(&ext_x.left(a)?)?;
        let s = step(
            StepKind::DegreeOneClass,
            format!("mu_Y psi({name} (x) 1) = 0"),
            &v,
            &zero_y,
        );
        if let Some(f) = push(s, &mut steps) {
            return Ok(fail(steps, f));
        }
    }
    for (name, a) in &a_gens {
        let v = mu_psi(&ext_x.left(a)?)?;
        let s = step(
            StepKind::PositiveGenerator,
            format!("mu_Y psi({name} (x) 1) = 0"),
            &v,
            &zero_y,
        );
        if let Some(f) = push(s, &mut steps) {
            return Ok(fail(steps, f));
        }
    }
    for (name, a) in &a_gens {
        let da = a.degree()?.unwrap_or(0);
        for d in 0..=x.bound().saturating_sub(da) {
            for b in x.ring().basis_elements(d) {
                let v = mu_psi(&ext_x.tensor(a, &b)?)?;
                let s = step(
                    StepKind::Multiplicativity,
                    format!("mu_Y psi({name} (x) {b}) = 0"),
                    &v,
                    &zero_y,
                );
                if let Some(f) = push(s, &mut steps) {
                    return Ok(fail(steps, f));
                }
            }
        }
    }
    for g in x.algebra().generators() {
        let gx = x.generator(&g.name)?;
        let v = mu_psi(&ext_x.eta(&gx)?)?;
        let s = step(
            StepKind::UnitSquare,
            format!("mu_Y psi(1 (x) {}) = phi({})", g.name, g.name),
            &v,
            &phi.apply_in(y, &gx)?,
        );
        if let Some(f) = push(s, &mut steps) {
            return Ok(fail(steps, f));
        }
    }
    for qv in x.q_values() {
        let lhs = phi.apply_in(y, &qv.value)?;
        let through = mu_psi(&ext_x.eta(&qv.arg)?)?;
        let equation = format!("phi({} {}) = {} mu_Y psi(1 (x) {})", qv.op, qv.arg, qv.op, qv.arg);
        let s = match y.q(qv.op, &through)? {
            QLookup::Value(rhs) => step(StepKind::Equivariance, equation, &lhs, &rhs),
            QLookup::Undetermined(reason) => ChainStep {
                kind: StepKind::Equivariance,
                equation,
                lhs: lhs.to_string(),
                rhs: format!("undetermined: {reason}"),
                holds: false,
            },
        };
        if let Some(f) = push(s, &mut steps) {
            return Ok(fail(steps, f));
        }
    }
    Ok(TransferOutcome::Certificate {
        pi1_vanishes,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Prime;
    use crate::r_algebra::kill_element;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn mu_after_eta_is_identity() {
        let dual = SteenrodDual::new(p(3), 10).unwrap();
        let x = AlgebraPresentation::from_dual(&dual, Side::Left, 10).unwrap();
        let ext = ExtendedModule::new(&dual, &x).unwrap();
        for d in 0..=10 {
            for b in x.ring().basis_elements(d) {
                assert_eq!(ext.mu(&ext.eta(&b).unwrap()).unwrap(), b);
                let tau0 = dual.tau(0).unwrap();
                if d < 10 {
                    assert!(ext.mu(&ext.tensor(&tau0, &b).unwrap()).unwrap().is_zero());
                }
            }
        }
        let one = Element::one(dual.algebra());
        assert_eq!(ext.mu(&ext.left(&one).unwrap()).unwrap(), Element::one(x.algebra()));
        let q = ext.q_left(Op::q(1), &dual.tau(0).unwrap()).unwrap();
        assert_eq!(q.to_string(), "A:tau1 + 2 A:tau0*A:xi1");
    }

    #[test]
    fn toy_certificate() {
        // Bound 13 leaves room for Q^1 and Q^2 on the degree-5 class.
        let dual = SteenrodDual::new(p(3), 13).unwrap();
        let x = AlgebraPresentation::from_strings(
            p(3),
            13,
            vec![GeneratorSpec::new("taubar1", 5)],
            &[],
            &[("Q^1", "taubar1", "0"), ("Q^2", "taubar1", "0")],
        )
        .unwrap();
        let ext = ExtendedModule::new(&dual, &x).unwrap();
        let phi = Morphism::identity_on_names(&x, &x).unwrap();
        let psi = ext.map_with(&ext, &phi, |a| ext.left(&dual.chi(a))).unwrap();
        let out = extend_and_transfer(&ext, &ext, &phi, &psi).unwrap();
        assert!(out.is_certificate(), "{out:?}");
        assert!(out.steps().iter().all(|s| s.holds));
        let eq = out.steps().iter().filter(|s| s.kind == StepKind::Equivariance).count();
        assert_eq!(eq, 2);
    }

    #[test]
    fn example_trace_fails_at_degree_one() {
        let dual = SteenrodDual::new(p(2), 3).unwrap();
        let kill = |side| {
            let a = AlgebraPresentation::from_dual(&dual, side, 3).unwrap();
            let x = a.parse_element("xi1^3 + xi2").unwrap();
            kill_element(&a, &x).unwrap().ring
        };
        let (x, y) = (kill(Side::Left), kill(Side::Right));
        let ext_x = ExtendedModule::new(&dual, &x).unwrap();
        let ext_y = ExtendedModule::new(&dual, &y).unwrap();
        let phi = Morphism::identity_on_names(&x, &y).unwrap();
        let psi = ext_x
            .map_with(&ext_y, &phi, |a| {
                let shifted = ext_y.left(a)?;
                if a.to_string() == "xi1" {
                    Ok(&shifted + &ext_y.eta(&y.generator("xi1")?)?)
                } else {
                    Ok(shifted)
                }
            })
            .unwrap();
        match extend_and_transfer(&ext_x, &ext_y, &phi, &psi).unwrap() {
            TransferOutcome::Trace { pi1_vanishes, steps, failed } => {
                assert!(!pi1_vanishes);
                assert!(steps.is_empty());
                assert_eq!(failed.kind, StepKind::DegreeOneClass);
                assert_eq!(failed.equation, "mu_Y psi(xi1 (x) 1) = 0");
                assert_eq!(failed.lhs, "xi1");
            }
            other => panic!("{other:?}"),
        }
        // A ring map that moves 1 (x) xi1 is rejected before any analysis.
        let moved = &ext_y.eta(&y.generator("xi1").unwrap()).unwrap()
            + &ext_y.a_generator("xi1").unwrap();
        let mut images = psi.images().to_vec();
        let n = images.len();
        images[n - 2] = moved.clone();
        images[n - 1] = ext_y.ring().reduce(&moved.pow(3));
        let bad = Morphism::new(images);
        assert!(matches!(
            extend_and_transfer(&ext_x, &ext_y, &phi, &bad),
            Err(Error::NotUnitCompatible(_))
        ));
    }
}
