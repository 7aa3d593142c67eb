//! Finitely presented graded-commutative algebras carrying partial Dyer-Lashof data.
//!
//! A presentation records only the operation values it is given. Everything else is derived
//! on demand from instability, linear combinations of recorded values, and the Cartan formula;
//! a value none of these decide is reported as undetermined rather than guessed.

mod morphism;
mod tor;
mod transfer;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::graded::{Algebra, Element, GeneratorSpec, GradedIdeal, QuotientRing};
use crate::linalg::Matrix;
use crate::op_expr::{
    apply_op, evaluate, instability_rewrite, parse, EvalContext, GeneratorAction, Op, OpSeq,
};
use crate::steenrod::{Side, SteenrodDual};

pub use morphism::{
    check_morphism, find_isomorphisms, find_isomorphisms_with_budget, Isomorphism, Morphism,
    Verdict, Violation, SEARCH_BUDGET,
};
pub use tor::{kill_element, tor_exterior, GradedModule, KillOutcome, TorTable};
pub use transfer::{extend_and_transfer, ChainStep, ExtendedModule, StepKind, TransferOutcome};

/// A recorded value `op(arg) = value`, both sides in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QValue {
    pub op: Op,
    pub arg: Element,
    pub value: Element,
}

/// Result of asking a presentation for `Q^s x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QLookup {
    Value(Element),
    Undetermined(String),
}

impl QLookup {
    pub fn value(self) -> Option<Element> {
        match self {
            QLookup::Value(v) => Some(v),
            QLookup::Undetermined(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    ring: QuotientRing,
    q_values: Vec<QValue>,
}

impl AlgebraPresentation {
    /// Validates every recorded value against instability and against the values already
    /// recorded. Values landing above the bound are dropped.
    pub fn new(ring: QuotientRing, q_values: Vec<QValue>) -> Result<Self> {
        let mut pres = AlgebraPresentation {
            ring,
            q_values: Vec::new(),
        };
        for qv in q_values {
            pres.record(qv)?;
        }
        Ok(pres)
    }

    /// Build from names and expression strings in the operation grammar.
    pub fn from_strings(
        p: Prime,
        bound: u32,
        gens: Vec<GeneratorSpec>,
        relations: &[&str],
        q_values: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let alg = Algebra::new(p, bound, gens)?;
        let free = AlgebraPresentation::new(QuotientRing::free(&alg), Vec::new())?;
        let rels = relations
            .iter()
            .map(|r| free.parse_element(r))
            .collect::<Result<Vec<_>>>()?;
        let ring = QuotientRing::new(GradedIdeal::new(&alg, rels)?);
        let bare = AlgebraPresentation::new(ring, Vec::new())?;
        let mut values = Vec::new();
        for (op, arg, value) in q_values {
            values.push(QValue {
                op: op.parse()?,
                arg: bare.parse_element(arg)?,
                value: bare.parse_element(value)?,
            });
        }
        AlgebraPresentation::new(bare.ring, values)
    }

    fn record(&mut self, qv: QValue) -> Result<()> {
        let p = self.prime();
        let op = qv.op.check(p)?;
        for x in [&qv.arg, &qv.value] {
            if **x.algebra() != **self.algebra() {
                return Err(Error::MixedAlgebras);
            }
        }
        let arg = self.reduce(&qv.arg);
        let value = self.reduce(&qv.value);
        if !arg.is_homogeneous() || !value.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let describe = || format!("({op}, {}) = {}", qv.arg, qv.value);
        let Some(d) = arg.degree()? else {
            if !value.is_zero() {
                return Err(Error::Presentation(format!(
                    "{}: the argument is zero in the ring",
                    describe()
                )));
            }
            return Ok(());
        };
        let target = d as i64 + op.degree(p);
        if target < 0 || target > self.bound() as i64 {
            return Ok(());
        }
        if let Some(vd) = value.degree()? {
            if vd as i64 != target {
                return Err(Error::Presentation(format!(
                    "{}: value has degree {vd}, expected {target}",
                    describe()
                )));
            }
        }
        if let Some(forced) = instability_rewrite(op, &arg)? {
            let forced = self.reduce(&forced);
            if forced != value {
                return Err(Error::Instability(format!(
                    "{} but instability forces {forced}",
                    describe()
                )));
            }
        }
        if let Some(predicted) = self.solve_recorded(op, &arg) {
            if predicted != value {
                return Err(Error::Presentation(format!(
                    "{} contradicts the recorded values, which give {predicted}",
                    describe()
                )));
            }
            return Ok(());
        }
        self.q_values.push(QValue { op, arg, value });
        Ok(())
    }

    pub fn prime(&self) -> Prime {
        self.ring.prime()
    }

    pub fn bound(&self) -> u32 {
        self.ring.bound()
    }

    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.ring.algebra()
    }

    pub fn q_values(&self) -> &[QValue] {
        &self.q_values
    }

    pub fn reduce(&self, x: &Element) -> Element {
        self.ring.reduce(x)
    }

    pub fn dim(&self, degree: u32) -> usize {
        self.ring.dim(degree)
    }

    pub fn poincare_series(&self) -> Vec<usize> {
        self.ring.poincare_series(self.bound())
    }

    /// Highest degree with a nonzero class.
    pub fn top_degree(&self) -> u32 {
        (0..=self.bound()).rev().find(|&d| self.dim(d) > 0).unwrap_or(0)
    }

    pub fn generator(&self, name: &str) -> Result<Element> {
        Element::named(self.algebra(), name)
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        evaluate(&parse(text)?, self)
    }

    /// The same ring with no operation data.
    pub fn without_q_data(&self) -> Self {
        AlgebraPresentation {
            ring: self.ring.clone(),
            q_values: Vec::new(),
        }
    }

    pub fn with_q_value(&self, op: Op, arg: Element, value: Element) -> Result<Self> {
        let mut next = self.clone();
        next.record(QValue { op, arg, value })?;
        Ok(next)
    }

    /// The ring modulo extra relations, with recorded values pushed through the quotient map.
    pub fn quotient(&self, relations: &[Element]) -> Result<Self> {
        let mut ideal = self.ring.ideal().clone();
        for r in relations {
            ideal.add_relation(r.clone())?;
        }
        AlgebraPresentation::new(QuotientRing::new(ideal), self.q_values.clone())
    }

    /// The degree-`bound` truncation of a dual Steenrod algebra, with every operation value on
    /// a generator that one side's table can evaluate inside the bound.
    pub fn from_dual(dual: &SteenrodDual, side: Side, bound: u32) -> Result<Self> {
        if bound > dual.bound() {
            return Err(Error::DegreeBound {
                degree: bound,
                bound: dual.bound(),
            });
        }
        let p = dual.prime();
        let gens: Vec<GeneratorSpec> = dual
            .algebra()
            .generators()
            .iter()
            .filter(|g| g.degree <= bound)
            .cloned()
            .collect();
        let alg = Algebra::new(p, bound, gens.clone())?;
        let mut values = Vec::new();
        for g in &gens {
            let x = dual.named(&g.name)?;
            for op in ops_up_to(p, g.degree, bound) {
                if instability_rewrite(op, &x)?.is_some() {
                    continue;
                }
                match dual.q_op(side, op, &x) {
                    Ok(v) => values.push(QValue {
                        op,
                        arg: Element::named(&alg, &g.name)?,
                        value: v.transport(&alg)?,
                    }),
                    Err(Error::MissingTableEntry { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        AlgebraPresentation::new(QuotientRing::free(&alg), values)
    }

    /// The Postnikov section: identical through degree `n`, zero above.
    pub fn postnikov_truncate(&self, n: u32) -> Result<Self> {
        if n > self.bound() {
            return Err(Error::DegreeBound {
                degree: n,
                bound: self.bound(),
            });
        }
        let gens: Vec<GeneratorSpec> = self
            .algebra()
            .generators()
            .iter()
            .filter(|g| g.degree <= n)
            .cloned()
            .collect();
        let alg = Algebra::new(self.prime(), n, gens)?;
        let mut ideal = GradedIdeal::zero(&alg);
        for r in self.ring.ideal().relations() {
            if r.degree()?.is_some_and(|d| d <= n) {
                ideal.add_relation(r.transport(&alg)?)?;
            }
        }
        let mut values = Vec::new();
        for qv in &self.q_values {
            let d = qv.arg.degree()?.unwrap_or(0) as i64 + qv.op.degree(self.prime());
            if d > n as i64 {
                continue;
            }
            values.push(QValue {
                op: qv.op,
                arg: qv.arg.transport(&alg)?,
                value: qv.value.transport(&alg)?,
            });
        }
        AlgebraPresentation::new(QuotientRing::new(ideal), values)
    }

    /// Express `x` through recorded arguments of the same operation and degree.
    fn solve_recorded(&self, op: Op, x: &Element) -> Option<Element> {
        let d = x.degree().ok().flatten()?;
        let pairs: Vec<&QValue> = self
            .q_values
            .iter()
            .filter(|qv| qv.op == op && qv.arg.degree().ok().flatten() == Some(d))
            .collect();
        let dim = self.dim(d);
        let cols: Vec<_> = pairs.iter().map(|qv| self.ring.coordinates(&qv.arg, d)).collect();
        let target = self.ring.coordinates(x, d);
        let coeffs = Matrix::from_columns(dim, &cols).solve(self.prime(), &target)?;
        let mut out = Element::zero(self.algebra());
        for (qv, c) in pairs.iter().zip(coeffs) {
            out = &out + &qv.value.scale(c);
        }
        Some(self.reduce(&out))
    }

    /// `op(x)` in canonical form, or the reason it is not determined by the recorded data.
    pub fn q(&self, op: Op, x: &Element) -> Result<QLookup> {
        let p = self.prime();
        op.check(p)?;
        if **x.algebra() != **self.algebra() {
            return Err(Error::MixedAlgebras);
        }
        let x = self.reduce(x);
        let Some(d) = x.degree()? else {
            return Ok(QLookup::Value(x));
        };
        let target = d as i64 + op.degree(p);
        if target < 0 || target > self.bound() as i64 {
            return Ok(QLookup::Value(Element::zero(self.algebra())));
        }
        if let Some(v) = instability_rewrite(op, &x)? {
            return Ok(QLookup::Value(self.reduce(&v)));
        }
        if let Some(v) = self.solve_recorded(op, &x) {
            return Ok(QLookup::Value(v));
        }
        match apply_op(&PresentationAction(self), op, &x) {
            Ok(v) => Ok(QLookup::Value(self.reduce(&v))),
            Err(Error::MissingTableEntry { word, generator }) => Ok(QLookup::Undetermined(
                format!("{word} on {generator} is not determined by the recorded data"),
            )),
            Err(e) => Err(e),
        }
    }

    pub fn report(&self) -> PresentationReport {
        PresentationReport {
            prime: self.prime().value(),
            bound: self.bound(),
            generators: self.algebra().generators().to_vec(),
            relations: self
                .ring
                .ideal()
                .relations()
                .iter()
                .map(|r| r.to_string())
                .collect(),
            q_values: self
                .q_values
                .iter()
                .map(|qv| format!("({}, {}) = {}", qv.op, qv.arg, qv.value))
                .collect(),
            poincare: self.poincare_series(),
        }
    }
}

/// Operations whose value on a degree-`d` class lands in degrees `0..=bound`.
pub(crate) fn ops_up_to(p: Prime, d: u32, bound: u32) -> Vec<Op> {
    let mut out = Vec::new();
    let flags: &[bool] = if p.is_two() { &[false] } else { &[false, true] };
    for index in 0.. {
        if d as i64 + Op::q(index).degree(p) - 1 > bound as i64 {
            break;
        }
        for &b in flags {
            let op = Op {
                bockstein: b,
                index,
            };
            let t = d as i64 + op.degree(p);
            if (0..=bound as i64).contains(&t) {
                out.push(op);
            }
        }
    }
    out
}

struct PresentationAction<'a>(&'a AlgebraPresentation);

impl GeneratorAction for PresentationAction<'_> {
    fn algebra(&self) -> &Arc<Algebra> {
        self.0.algebra()
    }

    fn on_generator(&self, op: Op, generator: usize) -> Result<Element> {
        let x = Element::generator(self.0.algebra(), generator);
        self.0
            .solve_recorded(op, &self.0.reduce(&x))
            .ok_or_else(|| Error::MissingTableEntry {
                word: op.to_string(),
                generator: self.0.algebra().generators()[generator].name.clone(),
            })
    }
}

impl EvalContext for AlgebraPresentation {
    fn algebra(&self) -> &Arc<Algebra> {
        self.ring.algebra()
    }

    fn generator(&self, name: &str) -> Result<Element> {
        Element::named(self.algebra(), name)
    }

    fn apply_admissible(&self, word: &OpSeq, x: &Element) -> Result<Element> {
        let mut v = x.clone();
        for &op in word.ops().iter().rev() {
            v = match self.q(op, &v)? {
                QLookup::Value(v) => v,
                QLookup::Undetermined(_) => {
                    return Err(Error::MissingTableEntry {
                        word: op.to_string(),
                        generator: v.to_string(),
                    })
                }
            };
        }
        Ok(v)
    }

    fn reduce(&self, x: &Element) -> Element {
        self.ring.reduce(x)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub prime: u32,
    pub bound: u32,
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<String>,
    pub q_values: Vec<String>,
    pub poincare: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn truncated_p2() -> AlgebraPresentation {
        AlgebraPresentation::from_strings(
            p(2),
            3,
            vec![GeneratorSpec::new("xi1", 1), GeneratorSpec::new("xi2", 3)],
            &[],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn truncation_of_the_dual() {
        let dual = SteenrodDual::new(p(2), 31).unwrap();
        let a = AlgebraPresentation::from_dual(&dual, Side::Left, 31).unwrap();
        let t = a.postnikov_truncate(3).unwrap();
        // F_2[xi1, xi2]/(xi1^4, xi2^2, xi1 xi2), built with room above the truncation.
        let wide = AlgebraPresentation::from_strings(
            p(2),
            8,
            vec![GeneratorSpec::new("xi1", 1), GeneratorSpec::new("xi2", 3)],
            &["xi1^4", "xi2^2", "xi1 * xi2"],
            &[],
        )
        .unwrap();
        assert_eq!(t.poincare_series(), vec![1, 1, 1, 2]);
        assert_eq!(wide.poincare_series(), vec![1, 1, 1, 2, 0, 0, 0, 0, 0]);
        assert!(wide.reduce(&wide.parse_element("xi1^4").unwrap()).is_zero());
        assert_eq!(t.q_values().len(), 1);
        assert_eq!(t.q_values()[0].value.to_string(), "xi2 + xi1^3");

        let zero = a.postnikov_truncate(0).unwrap();
        assert_eq!(zero.poincare_series(), vec![1]);
        let same = a.postnikov_truncate(31).unwrap();
        assert_eq!(same.poincare_series(), a.poincare_series());
        assert_eq!(same.q_values().len(), a.q_values().len());
        assert!(a.postnikov_truncate(32).is_err());
    }

    #[test]
    fn instability_checked_at_load() {
        let t = truncated_p2();
        let xi1 = t.generator("xi1").unwrap();
        // Q^1 on a degree-1 class must be its square.
        assert!(matches!(
            t.with_q_value(Op::q(1), xi1.clone(), Element::zero(t.algebra())),
            Err(Error::Instability(_))
        ));
        assert!(t.with_q_value(Op::q(1), xi1.clone(), xi1.pow(2)).is_ok());
        assert!(t.with_q_value(Op::q(0), xi1.clone(), xi1.clone()).is_err());
        let bad_degree = t.with_q_value(Op::q(2), xi1.clone(), xi1.pow(2));
        assert!(matches!(bad_degree, Err(Error::Presentation(_))));
    }

    #[test]
    fn lookups() {
        let t = truncated_p2()
            .with_q_value(Op::q(2), truncated_p2().generator("xi1").unwrap(), {
                truncated_p2().parse_element("xi1^3").unwrap()
            })
            .unwrap();
        let xi1 = t.generator("xi1").unwrap();
        let v = t.q(Op::q(2), &xi1).unwrap().value().unwrap();
        assert_eq!(v.to_string(), "xi1^3");
        assert_eq!(t.q(Op::q(1), &xi1).unwrap().value().unwrap(), xi1.pow(2));
        // Q^2(xi1^2) = (Q^1 xi1)^2 lands in degree 4, above the bound.
        assert!(t.q(Op::q(2), &xi1.pow(2)).unwrap().value().unwrap().is_zero());
        let q = t.q(Op::q(1), &xi1.pow(2)).unwrap().value().unwrap();
        assert!(q.is_zero());
        assert!(matches!(
            t.q(Op::q(0), &t.generator("xi2").unwrap()).unwrap(),
            QLookup::Value(v) if v.is_zero()
        ));
        assert!(t.q(Op::q(3), &Element::one(t.algebra())).unwrap().value().unwrap().is_zero());
        let bare = truncated_p2();
        assert!(matches!(bare.q(Op::q(2), &xi1).unwrap(), QLookup::Undetermined(_)));
        assert_eq!(t.parse_element("Q^2 xi1 + Q^1 xi1").unwrap().to_string(), "xi1^3 + xi1^2");
    }

    #[test]
    fn linear_combinations_and_cartan() {
        let t = AlgebraPresentation::from_strings(
            p(3),
            12,
            vec![
                GeneratorSpec::new("u", 1),
                GeneratorSpec::new("v", 1),
                GeneratorSpec::new("w", 4),
            ],
            &[],
            &[("Q^1", "u + v", "u * w"), ("Q^1", "v", "v * w")],
        )
        .unwrap();
        let u = t.generator("u").unwrap();
        let got = t.q(Op::q(1), &u).unwrap().value().unwrap();
        assert_eq!(got, t.parse_element("u * w - v * w").unwrap());
        // Cartan: Q^1(u v) = Q^0 u Q^1 v + Q^1 u Q^0 v, and Q^0 vanishes on degree 1.
        let uv = t.parse_element("u * v").unwrap();
        assert!(t.q(Op::q(1), &uv).unwrap().value().unwrap().is_zero());
        // Q^2 u needs data nobody recorded.
        assert!(matches!(t.q(Op::q(2), &u).unwrap(), QLookup::Undetermined(_)));
        let conflicting = AlgebraPresentation::from_strings(
            p(3),
            12,
            vec![GeneratorSpec::new("u", 1), GeneratorSpec::new("w", 4)],
            &[],
            &[("Q^1", "u", "u * w"), ("Q^1", "2 u", "0")],
        );
        assert!(matches!(conflicting, Err(Error::Presentation(_))));
    }
}
