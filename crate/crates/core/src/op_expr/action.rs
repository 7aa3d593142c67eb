//! Extending an action on generators to whole algebras via instability and the Cartan formula.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Op, OpSeq};
use crate::error::Result;
use crate::graded::{Algebra, Element, Monomial};

/// Supplies `op` on a single generator, for the pairs instability does not decide.
pub trait GeneratorAction {
    fn algebra(&self) -> &Arc<Algebra>;

    fn on_generator(&self, op: Op, generator: usize) -> Result<Element>;
}

/// The instability axioms for a homogeneous `x`: `Some(0)`, `Some(x^p)`, or `None` when they do
/// not decide. At `p = 2` the test is `s < |x|` / `s = |x|`; at odd `p` it is `2s < |x|` /
/// `2s = |x|`, and `b Q^s x = 0` once `2s <= |x|`. On scalars only `Q^0` survives.
pub fn instability_rewrite(op: Op, x: &Element) -> Result<Option<Element>> {
    let alg = x.algebra();
    let p = alg.prime();
    op.check(p)?;
    let Some(d) = x.degree()? else {
        return Ok(Some(Element::zero(alg)));
    };
    if d == 0 {
        let keep = op == Op::q(0);
        return Ok(Some(if keep { x.clone() } else { Element::zero(alg) }));
    }
    let (s, d) = (op.index as u64, d as u64);
    let out = if p.is_two() {
        match s.cmp(&d) {
            std::cmp::Ordering::Less => Some(Element::zero(alg)),
            std::cmp::Ordering::Equal => Some(x.pow(2)),
            std::cmp::Ordering::Greater => None,
        }
    } else if op.bockstein {
        (2 * s <= d).then(|| Element::zero(alg))
    } else {
        match (2 * s).cmp(&d) {
            std::cmp::Ordering::Less => Some(Element::zero(alg)),
            std::cmp::Ordering::Equal => Some(x.pow(p.value())),
            std::cmp::Ordering::Greater => None,
        }
    };
    Ok(out)
}

/// `Q^s(ab) = sum_i Q^i a Q^{s-i} b`, and at odd `p`
/// `bQ^s(ab) = sum_i bQ^i a Q^{s-i} b + (-1)^{|a|} Q^i a bQ^{s-i} b`.
///
/// `act` evaluates single operations on the factors. Summands whose left factor vanishes are
/// skipped without evaluating the right factor.
pub fn cartan_expand<F>(op: Op, a: &Element, b: &Element, act: &mut F) -> Result<Element>
where
    F: FnMut(Op, &Element) -> Result<Element>,
{
    let alg = a.algebra();
    let da = a.degree()?.unwrap_or(0);
    let mut out = Element::zero(alg);
    for i in 0..=op.index {
        let rest = op.index - i;
        let qa = act(Op::q(i), a)?;
        if !qa.is_zero() {
            let qb = act(
                Op {
                    bockstein: op.bockstein,
                    index: rest,
                },
                b,
            )?;
            let term = &qa * &qb;
            out = if op.bockstein && da % 2 == 1 {
                &out - &term
            } else {
                &out + &term
            };
        }
        if op.bockstein {
            let bqa = act(Op::bq(i), a)?;
            if !bqa.is_zero() {
                let qb = act(Op::q(rest), b)?;
                out = &out + &(&bqa * &qb);
            }
        }
    }
    Ok(out)
}

struct Engine<'a, A: GeneratorAction + ?Sized> {
    action: &'a A,
    memo: HashMap<(Op, Monomial), Element>,
}

impl<A: GeneratorAction + ?Sized> Engine<'_, A> {
    fn apply(&mut self, op: Op, x: &Element) -> Result<Element> {
        let alg = self.action.algebra().clone();
        let p = alg.prime();
        op.check(p)?;
        let mut out = Element::zero(&alg);
        for (d, part) in x.homogeneous_parts() {
            let target = d as i64 + op.degree(p);
            if target < 0 || target > alg.bound() as i64 {
                continue;
            }
            if let Some(v) = instability_rewrite(op, &part)? {
                out = &out + &v;
                continue;
            }
            for (m, c) in part.terms() {
                let v = self.monomial(op, m)?;
                out = &out + &v.scale(c);
            }
        }
        Ok(out)
    }

    fn monomial(&mut self, op: Op, m: &Monomial) -> Result<Element> {
        let key = (op, m.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.monomial_uncached(op, m)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn monomial_uncached(&mut self, op: Op, m: &Monomial) -> Result<Element> {
        let alg = self.action.algebra().clone();
        let p = alg.prime();
        let pv = p.value();
        let whole = Element::from_monomial(&alg, m.clone(), 1);
        if let Some(v) = instability_rewrite(op, &whole)? {
            return Ok(v);
        }
        if let [(g, 1)] = m.factors() {
            return self.action.on_generator(op, *g);
        }
        let root: Vec<(usize, u32)> = m
            .factors()
            .iter()
            .filter(|(_, e)| *e >= pv)
            .map(|&(g, e)| (g, e / pv))
            .collect();
        let rest: Vec<(usize, u32)> = m
            .factors()
            .iter()
            .filter(|(_, e)| e % pv != 0)
            .map(|&(g, e)| (g, e % pv))
            .collect();
        let mut act = |o: Op, y: &Element| self.apply(o, y);
        if !root.is_empty() {
            let y = Element::from_monomial(&alg, alg.monomial(&root)?, 1);
            if rest.is_empty() {
                // Only the constant Cartan summands of a p-th power survive.
                if op.bockstein || op.index % pv != 0 {
                    return Ok(Element::zero(&alg));
                }
                return Ok(act(Op::q(op.index / pv), &y)?.pow(pv));
            }
            let z = Element::from_monomial(&alg, alg.monomial(&rest)?, 1);
            let yp = y.pow(pv);
            return cartan_expand(op, &yp, &z, &mut act);
        }
        let (g, e) = m.factors()[0];
        let head = Element::generator(&alg, g);
        let mut tail = m.factors().to_vec();
        if e == 1 {
            tail.remove(0);
        } else {
            tail[0].1 -= 1;
        }
        let tail = Element::from_monomial(&alg, alg.monomial(&tail)?, 1);
        cartan_expand(op, &head, &tail, &mut act)
    }
}

/// Apply one operation to an arbitrary element. Results above the bound are zero.
pub fn apply_op<A: GeneratorAction + ?Sized>(action: &A, op: Op, x: &Element) -> Result<Element> {
    Engine {
        action,
        memo: HashMap::new(),
    }
    .apply(op, x)
}

/// Apply a word as written, innermost operation first, with no Adem rewriting.
pub fn apply_word<A: GeneratorAction + ?Sized>(
    action: &A,
    word: &OpSeq,
    x: &Element,
) -> Result<Element> {
    let mut engine = Engine {
        action,
        memo: HashMap::new(),
    };
    let mut v = x.clone();
    for op in word.ops().iter().rev() {
        if v.is_zero() {
            break;
        }
        v = engine.apply(*op, &v)?;
    }
    Ok(v)
}
