//! Formal Dyer-Lashof operation words.
//!
//! A word `b^{e1} Q^{i1} ... b^{ek} Q^{ik}` is stored leftmost first, so the last entry acts first.
//! At `p = 2` there are no Bocksteins and `Q^s` raises degree by `s`; at odd `p`, `Q^s` raises
//! degree by `2s(p-1)` and each Bockstein lowers it by one.

mod action;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::Prime;

pub use action::{apply_op, apply_word, cartan_expand, instability_rewrite, GeneratorAction};
pub use parse::{evaluate, parse, EvalContext, Expr, Sign};

/// One operation `b^e Q^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Op {
    pub bockstein: bool,
    pub index: u32,
}

impl Op {
    pub const fn q(index: u32) -> Self {
        Op {
            bockstein: false,
            index,
        }
    }

    pub const fn bq(index: u32) -> Self {
        Op {
            bockstein: true,
            index,
        }
    }

    /// Degree raised by this operation.
    pub fn degree(self, p: Prime) -> i64 {
        if p.is_two() {
            self.index as i64
        } else {
            2 * self.index as i64 * (p.value() as i64 - 1) - self.bockstein as i64
        }
    }

    pub fn check(self, p: Prime) -> Result<Self> {
        if self.bockstein && p.is_two() {
            return Err(Error::InvalidOperation {
                op: self.to_string(),
                p: 2,
            });
        }
        Ok(self)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bockstein {
            write!(f, "b ")?;
        }
        write!(f, "Q^{}", self.index)
    }
}

impl std::str::FromStr for Op {
    type Err = Error;

    /// Accepts `Q^3`, `b Q^1` and `bQ^1`.
    fn from_str(text: &str) -> Result<Self> {
        let seq = parse_ops(text)?;
        match seq.as_slice() {
            [op] => Ok(*op),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("expected a single operation, got `{text}`"),
            }),
        }
    }
}

/// Parse a bare operation word such as `b Q^3 Q^1`.
pub fn parse_ops(text: &str) -> Result<Vec<Op>> {
    let mut ops = Vec::new();
    let mut pending_b = false;
    let mut pos = 0;
    for token in text.split_whitespace() {
        let at = text[pos..].find(token).map_or(pos, |i| pos + i);
        pos = at + token.len();
        let mut rest = token;
        if let Some(r) = rest.strip_prefix('b') {
            if pending_b {
                return Err(Error::Parse {
                    position: at,
                    message: "repeated Bockstein".into(),
                });
            }
            pending_b = true;
            rest = r;
            if rest.is_empty() {
                continue;
            }
        }
        let index = rest
            .strip_prefix("Q^")
            .and_then(|n| n.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse {
                position: at,
                message: format!("expected `Q^<int>`, found `{token}`"),
            })?;
        ops.push(Op {
            bockstein: std::mem::take(&mut pending_b),
            index,
        });
    }
    if pending_b || ops.is_empty() {
        return Err(Error::Parse {
            position: text.len(),
            message: "expected an operation".into(),
        });
    }
    Ok(ops)
}

/// A sequence `I = (e1, i1, ..., ek, ik)`, not necessarily admissible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpSeq {
    p: Prime,
    ops: Vec<Op>,
}

impl OpSeq {
    pub fn new(p: Prime, ops: Vec<Op>) -> Result<Self> {
        for op in &ops {
            op.check(p)?;
        }
        Ok(OpSeq { p, ops })
    }

    pub fn empty(p: Prime) -> Self {
        OpSeq {
            p,
            ops: Vec::new(),
        }
    }

    /// A sequence of plain `Q^i` (the only kind at `p = 2`).
    pub fn from_indices(p: Prime, indices: &[u32]) -> Self {
        OpSeq {
            p,
            ops: indices.iter().map(|&i| Op::q(i)).collect(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.ops.iter().map(|o| o.degree(self.p)).sum()
    }

    /// `i1 - sum(tail)` at `p = 2`, `2 i1 - e1 - sum_{j>=2} (2 ij (p-1) - ej)` at odd `p`.
    /// The empty sequence has infinite excess, reported as `i64::MAX`.
    pub fn excess(&self) -> i64 {
        let Some((first, tail)) = self.ops.split_first() else {
            return i64::MAX;
        };
        let tail_degree: i64 = tail.iter().map(|o| o.degree(self.p)).sum();
        if self.p.is_two() {
            first.index as i64 - tail_degree
        } else {
            2 * first.index as i64 - first.bockstein as i64 - tail_degree
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.first_inadmissible_pair().is_none()
    }

    fn pair_admissible(p: Prime, a: Op, b: Op) -> bool {
        if p.is_two() {
            a.index <= 2 * b.index
        } else {
            a.index as i64 <= p.value() as i64 * b.index as i64 - b.bockstein as i64
        }
    }

    fn first_inadmissible_pair(&self) -> Option<usize> {
        (0..self.ops.len().saturating_sub(1))
            .find(|&j| !Self::pair_admissible(self.p, self.ops[j], self.ops[j + 1]))
    }

    fn last_inadmissible_pair(&self) -> Option<usize> {
        (0..self.ops.len().saturating_sub(1))
            .rev()
            .find(|&j| !Self::pair_admissible(self.p, self.ops[j], self.ops[j + 1]))
    }

    /// The sequence with its first operation removed.
    pub fn tail(&self) -> OpSeq {
        OpSeq {
            p: self.p,
            ops: self.ops.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    pub fn prepend(&self, op: Op) -> OpSeq {
        let mut ops = Vec::with_capacity(self.ops.len() + 1);
        ops.push(op);
        ops.extend_from_slice(&self.ops);
        OpSeq { p: self.p, ops }
    }

    /// Whether `Q^I x` is a free generator for `|x| = arg_degree`: `excess(I) + e1 > |x|`.
    pub fn passes_excess(&self, arg_degree: u32) -> bool {
        match self.ops.first() {
            None => true,
            Some(first) => {
                self.excess().saturating_add(first.bockstein as i64) > arg_degree as i64
            }
        }
    }
}

impl fmt::Display for OpSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Which inadmissible pair the rewriter attacks first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftFirst,
    RightFirst,
}

/// An `F_p`-linear combination of operation sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpSum {
    p: Prime,
    terms: BTreeMap<OpSeq, u32>,
}

impl OpSum {
    pub fn zero(p: Prime) -> Self {
        OpSum {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(seq: OpSeq) -> Self {
        let mut s = OpSum::zero(seq.p);
        s.add(seq, 1);
        s
    }

    pub fn add(&mut self, seq: OpSeq, c: u32) {
        let c = c % self.p.value();
        if c == 0 {
            return;
        }
        let p = self.p;
        let slot = self.terms.entry(seq).or_insert(0);
        *slot = p.add(*slot, c);
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpSeq, u32)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for OpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (*c, s.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{s}")?,
                (c, false) => write!(f, "{c} {s}")?,
            }
        }
        Ok(())
    }
}

/// Adem expansion of an inadmissible pair `a b`, as `(coefficient, a', b')` terms, or `None` if
/// the pair is already admissible.
pub fn adem_pair(p: Prime, a: Op, b: Op) -> Option<Vec<(u32, Op, Op)>> {
    if OpSeq::pair_admissible(p, a, b) {
        return None;
    }
    let r = a.index as i64;
    let s = b.index as i64;
    let mut out = Vec::new();
    if p.is_two() {
        for i in 0..=(r + s) {
            let c = p.binomial(i - s - 1, 2 * i - r);
            if c != 0 {
                out.push((c, Op::q((r + s - i) as u32), Op::q(i as u32)));
            }
        }
        return Some(out);
    }
    let pm1 = p.value() as i64 - 1;
    let pv = p.value() as i64;
    let prefix = a.bockstein;
    for i in 0..=(r + s) {
        let sign = p.sign(r + i);
        let first = (r + s - i) as u32;
        if !b.bockstein {
            let c = p.mul(sign, p.binomial(pm1 * (i - s) - 1, pv * i - r));
            if c != 0 {
                out.push((
                    c,
                    Op {
                        bockstein: prefix,
                        index: first,
                    },
                    Op::q(i as u32),
                ));
            }
        } else {
            // b Q^{r+s-i} Q^i term; vanishes under a leading Bockstein since bb = 0.
            let c1 = p.mul(sign, p.binomial(pm1 * (i - s), pv * i - r));
            if c1 != 0 && !prefix {
                out.push((c1, Op::bq(first), Op::q(i as u32)));
            }
            let c2 = p.mul(sign, p.binomial(pm1 * (i - s) - 1, pv * i - r - 1));
            if c2 != 0 {
                out.push((
                    p.neg(c2),
                    Op {
                        bockstein: prefix,
                        index: first,
                    },
                    Op::bq(i as u32),
                ));
            }
        }
    }
    Some(out)
}

/// Rewrite to a combination of admissible sequences using Adem relations.
pub fn adem_normalize(seq: &OpSeq, strategy: Strategy) -> OpSum {
    adem_normalize_sum(&OpSum::single(seq.clone()), strategy)
}

pub fn adem_normalize_sum(input: &OpSum, strategy: Strategy) -> OpSum {
    let p = input.p;
    let mut out = OpSum::zero(p);
    let mut pending = input.terms.clone();
    while let Some((w, c)) = pending.pop_last() {
        let pos = match strategy {
            Strategy::LeftFirst => w.first_inadmissible_pair(),
            Strategy::RightFirst => w.last_inadmissible_pair(),
        };
        let Some(j) = pos else {
            out.add(w, c);
            continue;
        };
        let expansion = adem_pair(p, w.ops[j], w.ops[j + 1]).expect("pair is inadmissible");
        for (k, x, y) in expansion {
            let mut ops = w.ops.clone();
            ops[j] = x;
            ops[j + 1] = y;
            let coeff = p.mul(c, k);
            let slot = pending.entry(OpSeq { p, ops }).or_insert(0);
            *slot = p.add(*slot, coeff);
        }
        pending.retain(|_, v| *v != 0);
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
    fn excess_examples() {
        assert_eq!(OpSeq::from_indices(p(2), &[2]).excess(), 2);
        assert_eq!(OpSeq::from_indices(p(2), &[2, 1]).excess(), 1);
        assert_eq!(OpSeq::empty(p(3)).excess(), i64::MAX);
        let bq3 = OpSeq::new(p(3), vec![Op::bq(3)]).unwrap();
        assert_eq!(bq3.degree(), 11);
        assert_eq!(4 + bq3.degree(), 2 * 9 - 3);
    }

    #[test]
    fn bockstein_rejected_at_two() {
        assert!(matches!(
            OpSeq::new(p(2), vec![Op::bq(1)]),
            Err(Error::InvalidOperation { .. })
        ));
    }

    #[test]
    fn two_primary_relations() {
        let two = p(2);
        // Q^{2s+1} Q^s = 0.
        for s in 0..10 {
            let w = OpSeq::from_indices(two, &[2 * s + 1, s]);
            assert!(adem_normalize(&w, Strategy::LeftFirst).is_zero(), "{w}");
        }
        let w = OpSeq::from_indices(two, &[4, 1]);
        let n = adem_normalize(&w, Strategy::LeftFirst);
        assert_eq!(n, OpSum::single(OpSeq::from_indices(two, &[3, 2])));
        let adm = OpSeq::from_indices(two, &[3, 2]);
        assert_eq!(adem_normalize(&adm, Strategy::LeftFirst), OpSum::single(adm));
    }

    #[test]
    fn odd_relation_shapes() {
        let three = p(3);
        for r in 0..12u32 {
            for s in 0..6u32 {
                for (ea, eb) in [(false, false), (false, true), (true, false), (true, true)] {
                    let a = Op {
                        bockstein: ea,
                        index: r,
                    };
                    let b = Op {
                        bockstein: eb,
                        index: s,
                    };
                    if let Some(terms) = adem_pair(three, a, b) {
                        let d = a.degree(three) + b.degree(three);
                        for (_, x, y) in terms {
                            assert_eq!(x.degree(three) + y.degree(three), d);
                            assert!(OpSeq::pair_admissible(three, x, y), "{a} {b} -> {x} {y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parses_bare_operations() {
        assert_eq!("Q^3".parse::<Op>().unwrap(), Op::q(3));
        assert_eq!("b Q^1".parse::<Op>().unwrap(), Op::bq(1));
        assert_eq!("bQ^1".parse::<Op>().unwrap(), Op::bq(1));
        assert_eq!(parse_ops("b Q^3 Q^1").unwrap(), vec![Op::bq(3), Op::q(1)]);
        assert!("Q^1 Q^2".parse::<Op>().is_err());
        assert!(parse_ops("b").is_err());
        assert!(matches!(parse_ops("Q^1 R^2"), Err(Error::Parse { position: 4, .. })));
    }

    #[test]
    fn sum_display() {
        let two = p(2);
        let mut s = OpSum::zero(two);
        s.add(OpSeq::from_indices(two, &[3, 2]), 1);
        assert_eq!(s.to_string(), "Q^3 Q^2");
        assert_eq!(OpSum::zero(two).to_string(), "0");
    }
}
