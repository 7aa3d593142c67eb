//! The dual Steenrod algebra `A_*`, truncated at a degree bound, with both generator systems,
//! the antipode `chi`, and the two Dyer-Lashof actions (`Q` from the left unit, `Q~` from the
//! right unit).
//!
//! Internal coordinates are the Milnor generators `xi_r` (and `tau_s` at odd `p`); `zeta_r` and
//! `taubar_s` are derived expressions. The shipped operation table holds only the closed forms
//! on `xi_1` (resp. `tau_0`); anything else must come from a config entry, otherwise evaluation
//! fails with [`Error::MissingTableEntry`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::graded::{fmt_monomial, Algebra, Element, GeneratorSpec};
use crate::op_expr::{
    adem_normalize, adem_pair, apply_op, apply_word, instability_rewrite, EvalContext,
    GeneratorAction, Op, OpSeq, Strategy,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Config(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "note", rename_all = "lowercase")]
pub enum Provenance {
    /// One of the closed forms on the Dyer-Lashof generator.
    Reference,
    /// Obtained from a reference formula through `chi(Q^s x) = Q~^s chi(x)`.
    Derived(String),
    Config(String),
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub value: Element,
    pub provenance: Provenance,
}

/// Output basis for printing elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    #[default]
    Milnor,
    Zeta,
}

pub fn xi_degree(p: Prime, r: u32) -> u64 {
    let pv = p.value() as u64;
    if p.is_two() {
        (1u64 << r) - 1
    } else {
        2 * (pv.pow(r) - 1)
    }
}

pub fn tau_degree(p: Prime, s: u32) -> u64 {
    2 * (p.value() as u64).pow(s) - 1
}

/// `2p^2`, enough for every computation on this algebra at `p` in `{2, 3}`.
pub fn default_bound(p: Prime) -> u32 {
    2 * p.value() * p.value()
}

#[derive(Clone, Debug)]
pub struct SteenrodDual {
    p: Prime,
    bound: u32,
    alg: Arc<Algebra>,
    xi: Vec<usize>,
    tau: Vec<usize>,
    zeta: Vec<Element>,
    taubar: Vec<Element>,
    chi_images: Vec<Element>,
    table: BTreeMap<(Side, Op, usize), TableEntry>,
}

impl SteenrodDual {
    pub fn new(p: Prime, bound: u32) -> Result<Self> {
        let mut gens = Vec::new();
        let mut r = 1;
        while xi_degree(p, r) <= bound as u64 {
            gens.push(GeneratorSpec::new(format!("xi{r}"), xi_degree(p, r) as u32));
            r += 1;
        }
        if !p.is_two() {
            let mut s = 0;
            while tau_degree(p, s) <= bound as u64 {
                gens.push(GeneratorSpec::new(format!("tau{s}"), tau_degree(p, s) as u32));
                s += 1;
            }
        }
        // Order generators by degree so printed monomials read naturally.
        gens.sort_by_key(|g| g.degree);
        let alg = Algebra::new(p, bound, gens)?;
        let xi: Vec<usize> = (1..r)
            .map(|r| alg.generator_index(&format!("xi{r}")).unwrap())
            .collect();
        let tau: Vec<usize> = (0..)
            .map_while(|s| alg.generator_index(&format!("tau{s}")))
            .collect();

        // sum_{i+j=k} xi_i zeta_j^{p^i} = 0, with xi_0 = zeta_0 = 1.
        let mut zeta: Vec<Element> = vec![Element::one(&alg)];
        for k in 1..=xi.len() {
            let mut acc = Element::zero(&alg);
            for i in 1..=k {
                let power = (p.value() as u64).pow(i as u32);
                let z = pow_big(&zeta[k - i], power);
                acc = &acc + &(&Element::generator(&alg, xi[i - 1]) * &z);
            }
            zeta.push(-&acc);
        }
        zeta.remove(0);

        // taubar_s = -tau_s - sum_{i=1}^{s} taubar_{s-i} xi_i^{p^{s-i}}.
        let mut taubar: Vec<Element> = Vec::new();
        for s in 0..tau.len() {
            let mut acc = Element::generator(&alg, tau[s]);
            for i in 1..=s {
                let power = (p.value() as u64).pow((s - i) as u32);
                let x = pow_big(&Element::generator(&alg, xi[i - 1]), power);
                acc = &acc + &(&taubar[s - i] * &x);
            }
            taubar.push(-&acc);
        }

        let mut chi_images = vec![Element::zero(&alg); alg.generators().len()];
        for (r, &g) in xi.iter().enumerate() {
            chi_images[g] = zeta[r].clone();
        }
        for (s, &g) in tau.iter().enumerate() {
            chi_images[g] = taubar[s].clone();
        }

        let mut dual = SteenrodDual {
            p,
            bound,
            alg,
            xi,
            tau,
            zeta,
            taubar,
            chi_images,
            table: BTreeMap::new(),
        };
        dual.install_reference_table();
        Ok(dual)
    }

    pub fn with_default_bound(p: Prime) -> Result<Self> {
        Self::new(p, default_bound(p))
    }

    fn install_reference_table(&mut self) {
        let p = self.p;
        let pv = p.value() as u64;
        if p.is_two() {
            let x1 = self.xi[0];
            for s in 2..=self.xi.len() {
                let op = Op::q((1u32 << s) - 2);
                let left = self.zeta[s - 1].clone();
                let right = Element::generator(&self.alg, self.xi[s - 1]);
                self.insert(Side::Left, op, x1, left, Provenance::Reference);
                self.insert(Side::Right, op, x1, right, Provenance::Reference);
            }
            return;
        }
        let Some(&t0) = self.tau.first() else {
            return;
        };
        let via_chi = || Provenance::Derived("antipode equivariance".into());
        for s in 1..self.tau.len().max(self.xi.len() + 1) {
            let index = ((pv.pow(s as u32) - 1) / (pv - 1)) as u32;
            let sign = p.sign(s as i64);
            let flipped = p.neg(sign);
            if let Some(&ts) = self.tau.get(s) {
                let left = self.taubar[s].scale(sign);
                let right = Element::generator(&self.alg, ts).scale(flipped);
                self.insert(Side::Left, Op::q(index), t0, left, Provenance::Reference);
                self.insert(Side::Right, Op::q(index), t0, right, via_chi());
            }
            if let Some(&xs) = self.xi.get(s - 1) {
                let left = self.zeta[s - 1].scale(sign);
                let right = Element::generator(&self.alg, xs).scale(flipped);
                self.insert(Side::Left, Op::bq(index), t0, left, Provenance::Reference);
                self.insert(Side::Right, Op::bq(index), t0, right, via_chi());
            }
        }
    }

    fn insert(&mut self, side: Side, op: Op, gen: usize, value: Element, provenance: Provenance) {
        self.table
            .insert((side, op, gen), TableEntry { value, provenance });
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    fn degree_check(&self, degree: u64) -> Result<()> {
        if degree > self.bound as u64 {
            return Err(Error::DegreeBound {
                degree: degree.min(u32::MAX as u64) as u32,
                bound: self.bound,
            });
        }
        Ok(())
    }

    pub fn xi(&self, r: u32) -> Result<Element> {
        if r == 0 {
            return Ok(Element::one(&self.alg));
        }
        self.degree_check(xi_degree(self.p, r))?;
        Ok(Element::generator(&self.alg, self.xi[r as usize - 1]))
    }

    pub fn zeta(&self, r: u32) -> Result<Element> {
        if r == 0 {
            return Ok(Element::one(&self.alg));
        }
        self.degree_check(xi_degree(self.p, r))?;
        Ok(self.zeta[r as usize - 1].clone())
    }

    pub fn tau(&self, s: u32) -> Result<Element> {
        self.odd_only("tau")?;
        self.degree_check(tau_degree(self.p, s))?;
        Ok(Element::generator(&self.alg, self.tau[s as usize]))
    }

    pub fn taubar(&self, s: u32) -> Result<Element> {
        self.odd_only("taubar")?;
        self.degree_check(tau_degree(self.p, s))?;
        Ok(self.taubar[s as usize].clone())
    }

    fn odd_only(&self, name: &str) -> Result<()> {
        if self.p.is_two() {
            return Err(Error::UnknownGenerator(format!("{name} (no such generator at p = 2)")));
        }
        Ok(())
    }

    /// Resolve `xi<r>`, `zeta<r>`, `tau<s>` or `taubar<s>`.
    pub fn named(&self, name: &str) -> Result<Element> {
        let split = |prefix: &str| -> Option<u32> {
            name.strip_prefix(prefix)
                .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|rest| rest.parse().ok())
        };
        if let Some(s) = split("taubar") {
            return self.taubar(s);
        }
        if let Some(s) = split("tau") {
            return self.tau(s);
        }
        if let Some(r) = split("zeta").filter(|&r| r > 0) {
            return self.zeta(r);
        }
        if let Some(r) = split("xi").filter(|&r| r > 0) {
            return self.xi(r);
        }
        Err(Error::UnknownGenerator(name.to_string()))
    }

    /// The antipode: the ring map `xi_r -> zeta_r`, `tau_s -> taubar_s`.
    pub fn chi(&self, x: &Element) -> Element {
        x.substitute(&self.alg, &self.chi_images)
            .expect("chi maps the algebra into itself")
    }

    pub fn table(&self) -> impl Iterator<Item = (Side, Op, &str, &TableEntry)> {
        self.table
            .iter()
            .map(|((side, op, g), e)| (*side, *op, self.alg.generators()[*g].name.as_str(), e))
    }

    pub fn table_entry(&self, side: Side, op: Op, generator: &str) -> Option<&TableEntry> {
        let g = self.alg.generator_index(generator)?;
        self.table.get(&(side, op, g))
    }

    fn action(&self, side: Side) -> SideAction<'_> {
        SideAction { dual: self, side }
    }

    /// One operation on `x`, via instability, Cartan and the table.
    pub fn q_op(&self, side: Side, op: Op, x: &Element) -> Result<Element> {
        apply_op(&self.action(side), op, x)
    }

    /// A word on `x`: Adem-normalize first, then evaluate each admissible word.
    pub fn q_act(&self, side: Side, word: &OpSeq, x: &Element) -> Result<Element> {
        let mut out = Element::zero(&self.alg);
        for (w, c) in adem_normalize(word, Strategy::LeftFirst).terms() {
            out = &out + &self.q_act_direct(side, w, x)?.scale(c);
        }
        Ok(out)
    }

    /// A word on `x` evaluated as written, innermost operation first.
    pub fn q_act_direct(&self, side: Side, word: &OpSeq, x: &Element) -> Result<Element> {
        apply_word(&self.action(side), word, x)
    }

    /// Render in the Milnor basis, or in the `zeta`/`taubar` basis.
    pub fn render(&self, x: &Element, basis: Basis) -> String {
        match basis {
            Basis::Milnor => x.to_string(),
            Basis::Zeta => {
                // x = f(zeta, taubar) exactly when chi(x) = f(xi, tau).
                let y = self.chi(x);
                render_renamed(&y, |name| {
                    if let Some(r) = name.strip_prefix("xi") {
                        format!("zeta{r}")
                    } else if let Some(s) = name.strip_prefix("tau") {
                        format!("taubar{s}")
                    } else {
                        name.to_string()
                    }
                })
            }
        }
    }

    /// Add a table entry from configuration after checking it against instability, any
    /// existing entry, the Adem relations and antipode equivariance.
    pub fn with_entry(
        &self,
        side: Side,
        op: Op,
        generator: &str,
        value: Element,
        provenance: &str,
    ) -> Result<Self> {
        let bad = |msg: String| Error::Config(format!("table entry ({side}, {op}, {generator}): {msg}"));
        op.check(self.p)?;
        if provenance.trim().is_empty() {
            return Err(bad("missing provenance".into()));
        }
        let g = self
            .alg
            .generator_index(generator)
            .ok_or_else(|| Error::UnknownGenerator(generator.to_string()))?;
        if **value.algebra() != *self.alg {
            return Err(Error::MixedAlgebras);
        }
        let gen_el = Element::generator(&self.alg, g);
        let target = self.alg.generators()[g].degree as i64 + op.degree(self.p);
        if let Some(d) = value.degree()? {
            if d as i64 != target {
                return Err(bad(format!("value has degree {d}, expected {target}")));
            }
        }
        if let Some(forced) = instability_rewrite(op, &gen_el)? {
            if forced != value {
                return Err(bad(format!("instability forces {forced}")));
            }
        }
        if let Some(existing) = self.table.get(&(side, op, g)) {
            if existing.value != value {
                return Err(bad(format!("conflicts with existing value {}", existing.value)));
            }
        }
        let mut next = self.clone();
        next.insert(side, op, g, value, Provenance::Config(provenance.to_string()));
        let report = next.coherence_report();
        if let Some(failure) = report.failures.first() {
            return Err(bad(failure.clone()));
        }
        Ok(next)
    }

    /// Checks every evaluable instance of the Adem relations (length-2 words on generators,
    /// both sides) and antipode equivariance on every table pair.
    pub fn coherence_report(&self) -> CoherenceReport {
        let mut report = CoherenceReport::default();
        for (w, g) in self.adem_instances() {
            for side in [Side::Left, Side::Right] {
                let x = Element::generator(&self.alg, g);
                let direct = self.q_act_direct(side, &w, &x);
                let normal = self.q_act(side, &w, &x);
                match (direct, normal) {
                    (Ok(a), Ok(b)) if a == b => report.checked += 1,
                    (Ok(a), Ok(b)) => report.failures.push(format!(
                        "{side} {w} {}: direct {a}, normalized {b}",
                        self.alg.generators()[g].name
                    )),
                    (Err(Error::MissingTableEntry { .. }), _)
                    | (_, Err(Error::MissingTableEntry { .. })) => report.skipped += 1,
                    (Err(e), _) | (_, Err(e)) => report.failures.push(e.to_string()),
                }
            }
        }
        for (side, op, g) in self.table.keys().copied().collect::<Vec<_>>() {
            let x = Element::generator(&self.alg, g);
            let other = match side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
            let lhs = self.q_op(side, op, &x).map(|v| self.chi(&v));
            let rhs = self.q_op(other, op, &self.chi(&x));
            match (lhs, rhs) {
                (Ok(a), Ok(b)) if a == b => report.checked += 1,
                (Ok(a), Ok(b)) => report.failures.push(format!(
                    "chi({side} {op} {}) = {a} but the other side gives {b}",
                    self.alg.generators()[g].name
                )),
                (Err(Error::MissingTableEntry { .. }), _)
                | (_, Err(Error::MissingTableEntry { .. })) => report.skipped += 1,
                (Err(e), _) | (_, Err(e)) => report.failures.push(e.to_string()),
            }
        }
        report
    }

    /// Inadmissible length-2 words with their generator arguments, within the bound.
    fn adem_instances(&self) -> Vec<(OpSeq, usize)> {
        let p = self.p;
        let flags: &[bool] = if p.is_two() { &[false] } else { &[false, true] };
        let mut out = Vec::new();
        for g in 0..self.alg.generators().len() {
            let d = self.alg.generators()[g].degree as i64;
            let max_index = self.bound;
            for r in 0..=max_index {
                for s in 0..=max_index {
                    for &ea in flags {
                        for &eb in flags {
                            let a = Op { bockstein: ea, index: r };
                            let b = Op { bockstein: eb, index: s };
                            let total = d + a.degree(p) + b.degree(p);
                            if total > self.bound as i64 || d + b.degree(p) > self.bound as i64 {
                                continue;
                            }
                            if adem_pair(p, a, b).is_some() {
                                out.push((OpSeq::new(p, vec![a, b]).unwrap(), g));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Expression-evaluation context for one side's action.
    pub fn context(&self, side: Side) -> DualContext<'_> {
        DualContext { dual: self, side }
    }
}

/// Outcome of [`SteenrodDual::coherence_report`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

fn pow_big(x: &Element, e: u64) -> Element {
    let bound = x.algebra().bound() as u64;
    match x.degree().ok().flatten() {
        Some(d) if d > 0 && e.saturating_mul(d as u64) > bound => Element::zero(x.algebra()),
        _ => x.pow(e.min(u32::MAX as u64) as u32),
    }
}

pub(crate) fn render_renamed(x: &Element, rename: impl Fn(&str) -> String) -> String {
    struct Renamed<'a, F>(&'a Element, F);
    impl<F: Fn(&str) -> String> fmt::Display for Renamed<'_, F> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let x = self.0;
            let names = x.algebra().generators();
            if x.is_zero() {
                return write!(f, "0");
            }
            for (i, (m, c)) in x.terms().rev().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                if m.is_one() {
                    write!(f, "{c}")?;
                    continue;
                }
                if c != 1 {
                    write!(f, "{c} ")?;
                }
                fmt_monomial(f, m.factors(), |g| (self.1)(&names[g].name))?;
            }
            Ok(())
        }
    }
    Renamed(x, rename).to_string()
}

struct SideAction<'a> {
    dual: &'a SteenrodDual,
    side: Side,
}

impl GeneratorAction for SideAction<'_> {
    fn algebra(&self) -> &Arc<Algebra> {
        &self.dual.alg
    }

    fn on_generator(&self, op: Op, generator: usize) -> Result<Element> {
        match self.dual.table.get(&(self.side, op, generator)) {
            Some(e) => Ok(e.value.clone()),
            None => {
                let name = &self.dual.alg.generators()[generator].name;
                let word = match self.side {
                    Side::Left => op.to_string(),
                    Side::Right => format!("{op} (right action)"),
                };
                Err(Error::MissingTableEntry {
                    word,
                    generator: name.clone(),
                })
            }
        }
    }
}

pub struct DualContext<'a> {
    dual: &'a SteenrodDual,
    side: Side,
}

impl EvalContext for DualContext<'_> {
    fn algebra(&self) -> &Arc<Algebra> {
        &self.dual.alg
    }

    fn generator(&self, name: &str) -> Result<Element> {
        self.dual.named(name)
    }

    fn apply_admissible(&self, word: &OpSeq, x: &Element) -> Result<Element> {
        self.dual.q_act_direct(self.side, word, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op_expr::{evaluate, parse};

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn generators_and_degrees() {
        let a = SteenrodDual::new(p(2), 31).unwrap();
        let names: Vec<_> = a.algebra().generators().iter().map(|g| g.name.clone()).collect();
        assert_eq!(names, ["xi1", "xi2", "xi3", "xi4", "xi5"]);
        let b = SteenrodDual::new(p(3), 18).unwrap();
        let names: Vec<_> = b
            .algebra()
            .generators()
            .iter()
            .map(|g| (g.name.clone(), g.degree))
            .collect();
        assert_eq!(
            names,
            [
                ("tau0".to_string(), 1),
                ("xi1".to_string(), 4),
                ("tau1".to_string(), 5),
                ("xi2".to_string(), 16),
                ("tau2".to_string(), 17)
            ]
        );
        assert_eq!(default_bound(p(3)), 18);
    }

    #[test]
    fn conjugate_generators() {
        let a = SteenrodDual::new(p(2), 31).unwrap();
        assert_eq!(a.zeta(1).unwrap(), a.xi(1).unwrap());
        assert_eq!(a.zeta(2).unwrap().to_string(), "xi2 + xi1^3");
        let b = SteenrodDual::new(p(3), 18).unwrap();
        let t1 = &(&b.tau(0).unwrap() * &b.xi(1).unwrap()) - &b.tau(1).unwrap();
        assert_eq!(b.taubar(1).unwrap(), t1);
        assert_eq!(b.zeta(1).unwrap(), -&b.xi(1).unwrap());
        assert!(matches!(a.xi(6), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn chi_is_an_involution() {
        for (prime, bound) in [(2, 31), (3, 18), (5, 20)] {
            let a = SteenrodDual::new(p(prime), bound).unwrap();
            for d in 0..=bound {
                for m in a.algebra().basis(d).monomials() {
                    let x = Element::from_monomial(a.algebra(), m.clone(), 1);
                    assert_eq!(a.chi(&a.chi(&x)), x, "p = {prime}, {x}");
                }
            }
        }
    }

    #[test]
    fn action_examples() {
        let a = SteenrodDual::new(p(2), 8).unwrap();
        let x1 = a.xi(1).unwrap();
        assert_eq!(a.q_op(Side::Left, Op::q(2), &x1).unwrap().to_string(), "xi2 + xi1^3");
        assert_eq!(a.q_op(Side::Right, Op::q(2), &x1).unwrap().to_string(), "xi2");
        assert_eq!(a.q_op(Side::Left, Op::q(1), &x1).unwrap(), x1.pow(2));
        let one = Element::one(a.algebra());
        assert!(a.q_op(Side::Left, Op::q(5), &one).unwrap().is_zero());
        assert!(matches!(
            a.q_op(Side::Left, Op::q(3), &x1),
            Err(Error::MissingTableEntry { .. })
        ));

        let b = SteenrodDual::new(p(3), 18).unwrap();
        let t0 = b.tau(0).unwrap();
        assert_eq!(b.q_op(Side::Left, Op::bq(1), &t0).unwrap(), -&b.zeta(1).unwrap());
        assert_eq!(b.q_op(Side::Left, Op::q(1), &t0).unwrap(), -&b.taubar(1).unwrap());
        assert_eq!(b.q_op(Side::Right, Op::q(1), &t0).unwrap(), b.tau(1).unwrap());
        assert!(b
            .q_op(Side::Left, Op::q(1), &b.zeta(1).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn zeta_rendering() {
        let b = SteenrodDual::new(p(3), 18).unwrap();
        let v = b.q_op(Side::Left, Op::bq(1), &b.tau(0).unwrap()).unwrap();
        assert_eq!(b.render(&v, Basis::Zeta), "2 zeta1");
        assert_eq!(b.render(&v, Basis::Milnor), "xi1");
    }

    #[test]
    fn evaluates_expressions() {
        let a = SteenrodDual::new(p(2), 8).unwrap();
        let ctx = a.context(Side::Left);
        let v = evaluate(&parse("Q^2 xi1").unwrap(), &ctx).unwrap();
        assert_eq!(v.to_string(), "xi2 + xi1^3");
        let v = evaluate(&parse("Q^3 1").unwrap(), &ctx).unwrap();
        assert!(v.is_zero());
        assert!(matches!(
            evaluate(&parse("Q^2 nope").unwrap(), &ctx),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            evaluate(&parse("xi1@2").unwrap(), &ctx),
            Err(Error::DegreeAnnotation { .. })
        ));
        assert!(matches!(
            evaluate(&parse("b Q^1 xi1").unwrap(), &ctx),
            Err(Error::InvalidOperation { .. })
        ));
    }

    #[test]
    fn shipped_table_is_coherent() {
        for (prime, bound) in [(2, 31), (3, 18)] {
            let a = SteenrodDual::new(p(prime), bound).unwrap();
            let report = a.coherence_report();
            assert!(report.failures.is_empty(), "p = {prime}: {:?}", report.failures);
            assert!(report.checked > 0);
        }
    }
}
