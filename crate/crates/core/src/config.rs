//! Declarative TOML configuration for evaluation contexts.
//!
//! ```toml
//! kind = "presentation"
//! prime = 2
//! bound = 3
//! generators = ["xi1@1", { name = "xi2", degree = 3 }]
//! relations = ["xi1^4", "xi2^2", "xi1 * xi2"]
//! q_values = ["(Q^2, xi1) = xi1^3"]
//! ```
//!
//! ```toml
//! kind = "dual-steenrod"
//! prime = 3
//! bound = 18
//! side = "left"
//! q_table = [
//!   { entry = "(left, Q^3, xi1) = ...", provenance = "computed by hand" },
//! ]
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::graded::{Algebra, Element, GeneratorSpec};
use crate::op_expr::{evaluate, parse, parse_ops, EvalContext, Op};
use crate::r_algebra::AlgebraPresentation;
use crate::steenrod::{default_bound, Basis, Side, SteenrodDual};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    Presentation,
    DualSteenrod,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GeneratorEntry {
    Compact(String),
    Full { name: String, degree: u32 },
}

impl GeneratorEntry {
    pub fn spec(&self) -> Result<GeneratorSpec> {
        match self {
            GeneratorEntry::Full { name, degree } => Ok(GeneratorSpec::new(name.clone(), *degree)),
            GeneratorEntry::Compact(text) => {
                let (name, degree) = text
                    .split_once('@')
                    .ok_or_else(|| Error::Config(format!("generator `{text}` must be name@degree")))?;
                let degree = degree
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad degree in generator `{text}`")))?;
                Ok(GeneratorSpec::new(name.trim(), degree))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct TableLine {
    pub entry: String,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextConfig {
    pub kind: ConfigKind,
    pub prime: u32,
    pub bound: Option<u32>,
    #[serde(default)]
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub q_values: Vec<String>,
    pub side: Option<Side>,
    pub basis: Option<Basis>,
    #[serde(default)]
    pub q_table: Vec<TableLine>,
}

impl ContextConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn build(&self) -> Result<Context> {
        let p = Prime::new(self.prime)?;
        match self.kind {
            ConfigKind::Presentation => {
                if !self.q_table.is_empty() || self.side.is_some() {
                    return Err(Error::Config(
                        "q_table and side belong to dual-steenrod configs".into(),
                    ));
                }
                let bound = self
                    .bound
                    .ok_or_else(|| Error::Config("presentation needs a bound".into()))?;
                let gens = self
                    .generators
                    .iter()
                    .map(GeneratorEntry::spec)
                    .collect::<Result<Vec<_>>>()?;
                let rels: Vec<&str> = self.relations.iter().map(String::as_str).collect();
                let lines = self
                    .q_values
                    .iter()
                    .map(|l| split_q_value(l))
                    .collect::<Result<Vec<_>>>()?;
                let triples: Vec<(&str, &str, &str)> =
                    lines.iter().map(|(a, b, c)| (*a, *b, *c)).collect();
                let pres = AlgebraPresentation::from_strings(p, bound, gens, &rels, &triples)?;
                Ok(Context::Presentation {
                    pres,
                    basis: self.basis.unwrap_or_default(),
                })
            }
            ConfigKind::DualSteenrod => {
                if !self.generators.is_empty() || !self.relations.is_empty() || !self.q_values.is_empty() {
                    return Err(Error::Config(
                        "generators, relations and q_values belong to presentation configs".into(),
                    ));
                }
                let mut dual = SteenrodDual::new(p, self.bound.unwrap_or_else(|| default_bound(p)))?;
                for line in &self.q_table {
                    let (side, op, generator, value) = split_table_entry(&line.entry)?;
                    let value = evaluate(&parse(value)?, &dual.context(side))?;
                    dual = dual.with_entry(side, op, generator, value, &line.provenance)?;
                }
                Ok(Context::Dual {
                    dual,
                    side: self.side.unwrap_or(Side::Left),
                    basis: self.basis.unwrap_or_default(),
                })
            }
        }
    }
}

/// `(Q^2, xi1) = xi1^3` into `("Q^2", "xi1", "xi1^3")`.
pub fn split_q_value(line: &str) -> Result<(&str, &str, &str)> {
    let (lhs, value) = split_equation(line)?;
    let parts = tuple_parts(lhs, 2, line)?;
    Ok((parts[0], parts[1], value))
}

/// `(left, Q^3, xi1) = expr` into its parts.
pub fn split_table_entry(line: &str) -> Result<(Side, Op, &str, &str)> {
    let (lhs, value) = split_equation(line)?;
    let parts = tuple_parts(lhs, 3, line)?;
    let side: Side = parts[0].parse()?;
    let ops = parse_ops(parts[1])?;
    let [op] = ops.as_slice() else {
        return Err(Error::Config(format!(
            "`{line}`: table entries take a single operation"
        )));
    };
    Ok((side, *op, parts[2], value))
}

fn split_equation(line: &str) -> Result<(&str, &str)> {
    let (lhs, rhs) = line
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("`{line}`: expected `(...) = value`")))?;
    Ok((lhs.trim(), rhs.trim()))
}

fn tuple_parts<'a>(lhs: &'a str, n: usize, line: &str) -> Result<Vec<&'a str>> {
    let inner = lhs
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Config(format!("`{line}`: left side must be parenthesized")))?;
    let parts: Vec<&str> = inner.splitn(n, ',').map(str::trim).collect();
    if parts.len() != n || parts.iter().any(|s| s.is_empty()) {
        return Err(Error::Config(format!("`{line}`: expected {n} comma-separated fields")));
    }
    Ok(parts)
}

/// A place to evaluate expressions.
#[derive(Clone, Debug)]
pub enum Context {
    Dual {
        dual: SteenrodDual,
        side: Side,
        basis: Basis,
    },
    Presentation {
        pres: AlgebraPresentation,
        basis: Basis,
    },
}

impl Context {
    /// `p2-dual` or `p3-dual`. The odd-prime context prints in conjugate coordinates by default.
    pub fn builtin(name: &str, bound: Option<u32>) -> Result<Self> {
        let (p, basis) = match name {
            "p2-dual" => (Prime::two(), Basis::Milnor),
            "p3-dual" => (Prime::new(3)?, Basis::Zeta),
            other => return Err(Error::Config(format!("unknown context `{other}`"))),
        };
        let dual = SteenrodDual::new(p, bound.unwrap_or_else(|| default_bound(p)))?;
        Ok(Context::Dual {
            dual,
            side: Side::Left,
            basis,
        })
    }

    /// A built-in name, or else a path to a TOML file.
    pub fn resolve(name: &str, bound: Option<u32>) -> Result<Self> {
        match name {
            "p2-dual" | "p3-dual" => Self::builtin(name, bound),
            path => ContextConfig::load(Path::new(path))?.build(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.algebra().prime()
    }

    pub fn basis(&self) -> Basis {
        match self {
            Context::Dual { basis, .. } | Context::Presentation { basis, .. } => *basis,
        }
    }

    pub fn with_basis(mut self, b: Basis) -> Self {
        match &mut self {
            Context::Dual { basis, .. } | Context::Presentation { basis, .. } => *basis = b,
        }
        self
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        match self {
            Context::Dual { dual, .. } => dual.algebra(),
            Context::Presentation { pres, .. } => pres.algebra(),
        }
    }

    pub fn evaluate(&self, text: &str) -> Result<Element> {
        let expr = parse(text)?;
        match self {
            Context::Dual { dual, side, .. } => evaluate(&expr, &dual.context(*side)),
            Context::Presentation { pres, .. } => evaluate(&expr, pres as &dyn EvalContext),
        }
    }

    pub fn render(&self, x: &Element) -> String {
        match self {
            Context::Dual { dual, basis, .. } => dual.render(x, *basis),
            Context::Presentation { pres, .. } => pres.reduce(x).to_string(),
        }
    }

    /// Evaluate and print.
    pub fn eval(&self, text: &str) -> Result<String> {
        Ok(self.render(&self.evaluate(text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRES: &str = r#"
kind = "presentation"
prime = 2
bound = 3
generators = ["xi1@1"]
relations = ["xi1^4"]
q_values = ["(Q^2, xi1) = xi1^3"]
"#;

    #[test]
    fn presentation_config() {
        let ctx = ContextConfig::from_toml(PRES).unwrap().build().unwrap();
        let Context::Presentation { pres, .. } = &ctx else { panic!() };
        assert_eq!(pres.poincare_series(), [1, 1, 1, 1]);
        assert_eq!(ctx.eval("Q^2 xi1 + xi1^2 * xi1").unwrap(), "0");
        assert_eq!(ctx.eval("Q^1 xi1").unwrap(), "xi1^2");
        let bad = PRES.replace("xi1^3\"", "xi1^2\"");
        assert!(ContextConfig::from_toml(&bad).unwrap().build().is_err());
        let unstable = PRES.replace("(Q^2, xi1) = xi1^3", "(Q^0, xi1) = xi1");
        assert!(matches!(
            ContextConfig::from_toml(&unstable).unwrap().build(),
            Err(Error::Instability(_))
        ));
    }

    #[test]
    fn table_entries_are_gated() {
        let ok = r#"
kind = "dual-steenrod"
prime = 2
bound = 7
q_table = [{ entry = "(right, Q^2, xi1) = xi2", provenance = "restated" }]
"#;
        let ctx = ContextConfig::from_toml(ok).unwrap().build().unwrap();
        assert_eq!(ctx.eval("Q^2 xi1").unwrap(), "xi2 + xi1^3");
        let wrong = ok.replace("= xi2\"", "= xi1^3\"");
        assert!(ContextConfig::from_toml(&wrong).unwrap().build().is_err());
        let unsourced = ok.replace("\"restated\"", "\"\"");
        assert!(ContextConfig::from_toml(&unsourced).unwrap().build().is_err());
        assert!(ContextConfig::from_toml("kind = \"other\"\nprime = 2").is_err());
    }

    #[test]
    fn line_splitting() {
        assert_eq!(split_q_value("(Q^2, xi1) = xi1^3").unwrap(), ("Q^2", "xi1", "xi1^3"));
        let (side, op, g, v) = split_table_entry("(left, b Q^1, tau0) = 2 zeta1").unwrap();
        assert_eq!((side, op, g, v), (Side::Left, Op::bq(1), "tau0", "2 zeta1"));
        assert!(split_table_entry("(left, Q^1 Q^1, tau0) = 0").is_err());
        assert!(split_q_value("Q^2 xi1 = 0").is_err());
    }

    #[test]
    fn builtin_contexts() {
        let p2 = Context::builtin("p2-dual", None).unwrap();
        assert_eq!(p2.eval("Q^2 xi1").unwrap(), "xi2 + xi1^3");
        assert_eq!(p2.eval("Q^3 1").unwrap(), "0");
        let p3 = Context::builtin("p3-dual", None).unwrap();
        assert_eq!(p3.eval("b Q^1 tau0").unwrap(), "2 zeta1");
        assert_eq!(p3.with_basis(Basis::Milnor).eval("b Q^1 tau0").unwrap(), "xi1");
    }
}
