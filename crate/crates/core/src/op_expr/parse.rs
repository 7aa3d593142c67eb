//! Expression grammar and pretty-printer.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := INT [factor] | ['b'] 'Q^' INT factor | primary ['^' INT]
//! primary := IDENT ['@' INT] | '(' expr ')'
//! ```
//!
//! Composition (juxtaposition) binds tighter than `*`, which binds tighter than `+`.

use std::fmt;
use std::sync::Arc;

use super::{adem_normalize, Op, OpSeq, Strategy};
use crate::error::{Error, Result};
use crate::graded::{Algebra, Element};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(u64),
    Gen { name: String, degree: Option<u32> },
    Apply { op: Op, arg: Box<Expr> },
    Scale(u64, Box<Expr>),
    Pow(Box<Expr>, u32),
    Product(Vec<Expr>),
    Sum(Vec<(Sign, Expr)>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Q,
    Caret,
    At,
    Star,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '^' => Tok::Caret,
            '@' => Tok::At,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| err(start, "integer out of range"))?;
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let next_is_caret = bytes.get(i) == Some(&b'^');
                out.push((
                    start,
                    if word == "Q" && next_is_caret {
                        Tok::Q
                    } else {
                        Tok::Ident(word.to_string())
                    },
                ));
                continue;
            }
            other => return Err(err(start, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<u64> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(n),
            _ => Err(err(at, format!("expected integer {what}"))),
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        let n = self.expect_int(what)?;
        u32::try_from(n).map_err(|_| err(at, format!("{what} too large")))
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Ident(_) | Tok::Q | Tok::LParen)
        )
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut sign = Sign::Plus;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            sign = Sign::Minus;
        }
        loop {
            terms.push((sign, self.term()?));
            sign = match self.peek() {
                Some(Tok::Plus) => Sign::Plus,
                Some(Tok::Minus) => Sign::Minus,
                _ => break,
            };
            self.bump();
        }
        if terms.len() == 1 && terms[0].0 == Sign::Plus {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(Expr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(Expr::Product(factors))
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Int(_)) => {
                let n = self.expect_int("")?;
                if self.starts_factor() {
                    Ok(Expr::Scale(n, Box::new(self.factor()?)))
                } else {
                    Ok(Expr::Int(n))
                }
            }
            Some(Tok::Ident(b)) if b == "b" && self.peek_at(1) == Some(&Tok::Q) => {
                self.bump();
                self.operation(true)
            }
            Some(Tok::Q) => self.operation(false),
            Some(Tok::Ident(_) | Tok::LParen) => {
                let base = self.primary()?;
                if self.peek() == Some(&Tok::Caret) {
                    self.bump();
                    let e = self.small_int("exponent")?;
                    Ok(Expr::Pow(Box::new(base), e))
                } else {
                    Ok(base)
                }
            }
            _ => Err(err(at, "expected a factor")),
        }
    }

    fn operation(&mut self, bockstein: bool) -> Result<Expr> {
        self.bump();
        let at = self.offset();
        if self.bump() != Some(Tok::Caret) {
            return Err(err(at, "expected `^` after Q"));
        }
        let index = self.small_int("operation index")?;
        if !self.starts_factor() {
            return Err(err(self.offset(), "operation needs an argument"));
        }
        let arg = self.factor()?;
        Ok(Expr::Apply {
            op: Op { bockstein, index },
            arg: Box::new(arg),
        })
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Ident(name)) => {
                let degree = if self.peek() == Some(&Tok::At) {
                    self.bump();
                    Some(self.small_int("degree annotation")?)
                } else {
                    None
                };
                Ok(Expr::Gen { name, degree })
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let close = self.offset();
                if self.bump() != Some(Tok::RParen) {
                    return Err(err(close, "expected `)`"));
                }
                Ok(e)
            }
            _ => Err(err(at, "expected a generator or `(`")),
        }
    }
}

/// Parse an expression. Generator names are resolved later, against a context.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    if parser.peek().is_none() {
        return Err(err(0, "empty expression"));
    }
    let e = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return Err(err(parser.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

#[derive(PartialEq, PartialOrd)]
enum Level {
    Sum,
    Term,
    Factor,
    Primary,
}

impl Expr {
    fn level(&self) -> Level {
        match self {
            Expr::Sum(_) => Level::Sum,
            Expr::Product(_) => Level::Term,
            Expr::Int(_) | Expr::Apply { .. } | Expr::Scale(..) | Expr::Pow(..) => Level::Factor,
            Expr::Gen { .. } => Level::Primary,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: Level) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_bare(f)?;
            write!(f, ")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Gen { name, degree } => {
                write!(f, "{name}")?;
                if let Some(d) = degree {
                    write!(f, "@{d}")?;
                }
                Ok(())
            }
            Expr::Apply { op, arg } => {
                write!(f, "{op} ")?;
                arg.write_at(f, Level::Factor)
            }
            Expr::Scale(c, inner) => {
                write!(f, "{c} ")?;
                inner.write_at(f, Level::Factor)
            }
            Expr::Pow(base, e) => {
                base.write_at(f, Level::Primary)?;
                write!(f, "^{e}")
            }
            Expr::Product(factors) => {
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    x.write_at(f, Level::Factor)?;
                }
                Ok(())
            }
            Expr::Sum(terms) => {
                for (i, (sign, t)) in terms.iter().enumerate() {
                    match (i, sign) {
                        (0, Sign::Plus) => {}
                        (0, Sign::Minus) => write!(f, "-")?,
                        (_, Sign::Plus) => write!(f, " + ")?,
                        (_, Sign::Minus) => write!(f, " - ")?,
                    }
                    t.write_at(f, Level::Term)?;
                }
                Ok(())
            }
        }
    }

    /// Generator names mentioned anywhere in the expression.
    pub fn generator_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::Gen { name, .. } => out.push(name),
            Expr::Apply { arg, .. } | Expr::Scale(_, arg) | Expr::Pow(arg, _) => {
                arg.collect_names(out)
            }
            Expr::Product(xs) => xs.iter().for_each(|x| x.collect_names(out)),
            Expr::Sum(ts) => ts.iter().for_each(|(_, t)| t.collect_names(out)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_bare(f)
    }
}

/// Where expressions get their meaning: an ambient algebra, generator names, and an operation.
pub trait EvalContext {
    fn algebra(&self) -> &Arc<Algebra>;

    /// The element a generator name denotes, or `UnknownGenerator`.
    fn generator(&self, name: &str) -> Result<Element>;

    /// A single admissible word applied to `x`.
    fn apply_admissible(&self, word: &OpSeq, x: &Element) -> Result<Element>;

    /// Canonical representative; the identity unless the context is a quotient.
    fn reduce(&self, x: &Element) -> Element {
        x.clone()
    }
}

/// Evaluate to a reduced element. Operation words are Adem-normalized before they act.
pub fn evaluate(expr: &Expr, ctx: &dyn EvalContext) -> Result<Element> {
    let v = eval_inner(expr, ctx)?;
    Ok(ctx.reduce(&v))
}

fn eval_inner(expr: &Expr, ctx: &dyn EvalContext) -> Result<Element> {
    let alg = ctx.algebra();
    let p = alg.prime();
    Ok(match expr {
        Expr::Int(n) => Element::scalar(alg, (*n % p.value() as u64) as i64),
        Expr::Gen { name, degree } => {
            let x = ctx.generator(name)?;
            if let Some(annotated) = degree {
                let actual = x.degree()?.unwrap_or(*annotated);
                if actual != *annotated {
                    return Err(Error::DegreeAnnotation {
                        name: name.clone(),
                        annotated: *annotated,
                        actual,
                    });
                }
            }
            x
        }
        Expr::Apply { .. } => {
            let mut ops = Vec::new();
            let mut cur = expr;
            while let Expr::Apply { op, arg } = cur {
                ops.push(*op);
                cur = arg;
            }
            let word = OpSeq::new(p, ops)?;
            let x = ctx.reduce(&eval_inner(cur, ctx)?);
            let mut out = Element::zero(alg);
            for (w, c) in adem_normalize(&word, Strategy::LeftFirst).terms() {
                out = &out + &ctx.apply_admissible(w, &x)?.scale(c);
            }
            out
        }
        Expr::Scale(c, inner) => eval_inner(inner, ctx)?.scale((*c % p.value() as u64) as u32),
        Expr::Pow(base, e) => eval_inner(base, ctx)?.pow(*e),
        Expr::Product(xs) => {
            let mut acc = Element::one(alg);
            for x in xs {
                acc = acc.checked_mul(&eval_inner(x, ctx)?)?;
            }
            acc
        }
        Expr::Sum(ts) => {
            let mut acc = Element::zero(alg);
            for (sign, t) in ts {
                let v = eval_inner(t, ctx)?;
                acc = match sign {
                    Sign::Plus => acc.checked_add(&v)?,
                    Sign::Minus => acc.checked_add(&-&v)?,
                };
            }
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::{parse, Error, Expr, Op, Sign};
    use proptest::prelude::*;

    fn gen(name: &str) -> Expr {
        Expr::Gen {
            name: name.into(),
            degree: None,
        }
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse("Q^2 xi1").unwrap(),
            Expr::Apply {
                op: Op::q(2),
                arg: Box::new(gen("xi1"))
            }
        );
        assert_eq!(
            parse("b Q^1 tau0").unwrap(),
            Expr::Apply {
                op: Op::bq(1),
                arg: Box::new(gen("tau0"))
            }
        );
        assert_eq!(
            parse("Q^1 (tau0 * zeta1)").unwrap(),
            Expr::Apply {
                op: Op::q(1),
                arg: Box::new(Expr::Product(vec![gen("tau0"), gen("zeta1")]))
            }
        );
        assert_eq!(
            parse("x@3^2").unwrap(),
            Expr::Pow(
                Box::new(Expr::Gen {
                    name: "x".into(),
                    degree: Some(3)
                }),
                2
            )
        );
        assert_eq!(parse("Q^2 Q^1 xi1").unwrap().to_string(), "Q^2 Q^1 xi1");
        assert_eq!(parse("xi2 + xi1^3").unwrap().to_string(), "xi2 + xi1^3");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("xi1 + * xi2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("Q^ xi1"), Err(Error::Parse { position: 3, .. })));
        assert!(matches!(parse("(xi1"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        assert!(matches!(parse("xi1 $"), Err(Error::Parse { position: 4, .. })));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let name = "[a-z][a-z0-9_]{0,4}".prop_filter("reserved", |s| s != "b");
        let leaf = prop_oneof![
            (0u64..20).prop_map(Expr::Int),
            (name, prop::option::of(0u32..30))
                .prop_map(|(name, degree)| Expr::Gen { name, degree }),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                (any::<bool>(), 0u32..12, inner.clone()).prop_map(|(b, i, a)| Expr::Apply {
                    op: Op {
                        bockstein: b,
                        index: i
                    },
                    arg: Box::new(a)
                }),
                (1u64..9, inner.clone()).prop_map(|(c, a)| Expr::Scale(c, Box::new(a))),
                (inner.clone(), 0u32..5).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Product),
                prop::collection::vec(
                    (prop_oneof![Just(Sign::Plus), Just(Sign::Minus)], inner),
                    1..4
                )
                .prop_map(|mut ts| {
                    if ts.len() == 1 {
                        ts[0].0 = Sign::Minus;
                    }
                    Expr::Sum(ts)
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.to_string();
            let back = parse(&text).map_err(|x| TestCaseError::fail(format!("{text}: {x}")))?;
            prop_assert_eq!(back, e, "{}", text);
        }
    }
}
