//! Packaged pipelines with labelled assertions and a versioned JSON report.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{
    classification_table, comparison_collapse, postnikov_classes, Base, CollapseVerdict,
};
use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::graded::{Algebra, Element, GeneratorSpec};
use crate::op_expr::Op;
use crate::r_algebra::{
    extend_and_transfer, find_isomorphisms, kill_element, tor_exterior, AlgebraPresentation,
    ExtendedModule, GradedModule, Morphism, StepKind, TransferOutcome,
};
use crate::steenrod::{Side, SteenrodDual};
use crate::unstable::{free_unstable_poincare, lowest_new_generator};

pub const REPORT_VERSION: u32 = 1;

pub const BUILTIN: [&str; 7] = [
    "example-fp-p2",
    "example-fp-odd",
    "dual-steenrod-identities",
    "lemma-lowest-generator",
    "tor-exterior",
    "classify-table",
    "transfer-theorem7",
];

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// A value stated in the literature.
    Reference,
    /// A value computed independently by other means.
    Derived,
    /// A structural check with an obvious answer.
    Sanity,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Reference => "reference",
            Label::Derived => "derived",
            Label::Sanity => "sanity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub label: Label,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Default)]
pub struct Recorder {
    assertions: Vec<Assertion>,
}

impl Recorder {
    /// Compare the printed forms.
    pub fn check(
        &mut self,
        label: Label,
        name: impl Into<String>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        self.assertions.push(Assertion {
            name: name.into(),
            label,
            pass: expected == actual,
            expected,
            actual,
        });
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }
}

type StepFn = Box<dyn Fn(&mut Recorder) -> Result<()> + Send + Sync>;

pub struct Step {
    pub name: String,
    run: StepFn,
}

impl Step {
    pub fn new(
        name: impl Into<String>,
        run: impl Fn(&mut Recorder) -> Result<()> + Send + Sync + 'static,
    ) -> Self {
        Step {
            name: name.into(),
            run: Box::new(run),
        }
    }
}

pub struct ScenarioSpec {
    pub name: String,
    pub prime: Option<u32>,
    pub bound: Option<u32>,
    pub pipeline: Vec<Step>,
}

/// Overrides from the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScenarioParams {
    pub p: Option<u32>,
    pub bound: Option<u32>,
    pub n_max: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub version: u32,
    pub scenario: String,
    pub prime: Option<u32>,
    pub bound: Option<u32>,
    pub pass: bool,
    pub assertions: Vec<Assertion>,
}

impl ScenarioReport {
    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }
}

impl ScenarioSpec {
    pub fn new(name: impl Into<String>, prime: Option<u32>, bound: Option<u32>) -> Self {
        ScenarioSpec {
            name: name.into(),
            prime,
            bound,
            pipeline: Vec::new(),
        }
    }

    pub fn step(
        mut self,
        name: impl Into<String>,
        run: impl Fn(&mut Recorder) -> Result<()> + Send + Sync + 'static,
    ) -> Self {
        self.pipeline.push(Step::new(name, run));
        self
    }

    /// Run every step in order. A step that errors becomes a failed assertion.
    pub fn run(&self) -> ScenarioReport {
        let mut rec = Recorder::default();
        for step in &self.pipeline {
            if let Err(e) = (step.run)(&mut rec) {
                rec.check(Label::Sanity, format!("{}: completes", step.name), "ok", format!("error: {e}"));
            }
        }
        ScenarioReport {
            version: REPORT_VERSION,
            scenario: self.name.clone(),
            prime: self.prime,
            bound: self.bound,
            pass: rec.assertions.iter().all(|a| a.pass),
            assertions: rec.assertions,
        }
    }

    pub fn run_timed(&self) -> (ScenarioReport, Duration) {
        let start = Instant::now();
        let report = self.run();
        (report, start.elapsed())
    }
}

/// Run several scenarios, in order or fanned out. Output order matches input order.
pub fn run_all(specs: &[ScenarioSpec], parallel: bool) -> Vec<(ScenarioReport, Duration)> {
    if parallel {
        specs.par_iter().map(ScenarioSpec::run_timed).collect()
    } else {
        specs.iter().map(ScenarioSpec::run_timed).collect()
    }
}

pub fn builtin(name: &str, params: ScenarioParams) -> Result<ScenarioSpec> {
    match name {
        "example-fp-p2" => Ok(example_fp_p2()),
        "example-fp-odd" => Ok(example_fp_odd()),
        "dual-steenrod-identities" => Ok(dual_steenrod_identities()),
        "lemma-lowest-generator" => Ok(lowest_generator(params)),
        "tor-exterior" => Ok(tor_scenario()),
        "classify-table" => classify_scenario(params),
        "transfer-theorem7" => Ok(transfer_scenario()),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

fn p(n: u32) -> Prime {
    Prime::new(n).expect("built-in prime")
}

/// The two structures on one ring: left and right actions on a truncation of the dual Steenrod
/// algebra, with the same class killed in both.
#[derive(Clone, Debug)]
pub struct ExamplePair {
    pub truncation: AlgebraPresentation,
    pub left: AlgebraPresentation,
    pub right: AlgebraPresentation,
    pub dual: SteenrodDual,
}

/// `p = 2`: kill `xi1^3 + xi2` in degree 3. Odd `p`: kill `tau0 xi1 - tau1` in degree `2p - 1`.
pub fn example_pair(p: Prime) -> Result<ExamplePair> {
    let (n, class) = if p.is_two() {
        (3, "xi1^3 + xi2")
    } else {
        (2 * p.value() - 1, "tau0 * xi1 - tau1")
    };
    let dual = SteenrodDual::new(p, n)?;
    let kill = |side| -> Result<AlgebraPresentation> {
        let a = AlgebraPresentation::from_dual(&dual, side, n)?;
        let x = a.parse_element(class)?;
        Ok(kill_element(&a, &x)?.ring)
    };
    Ok(ExamplePair {
        truncation: AlgebraPresentation::from_dual(&dual, Side::Left, n)?,
        left: kill(Side::Left)?,
        right: kill(Side::Right)?,
        dual,
    })
}

/// `Lambda(taubar1)` at `p = 3` with the identity and the antipode-twisted extension.
pub fn toy_transfer() -> Result<TransferOutcome> {
    let p = p(3);
    let dual = SteenrodDual::new(p, 13)?;
    let x = AlgebraPresentation::from_strings(
        p,
        13,
        vec![GeneratorSpec::new("taubar1", 5)],
        &[],
        &[("Q^1", "taubar1", "0"), ("Q^2", "taubar1", "0")],
    )?;
    let ext = ExtendedModule::new(&dual, &x)?;
    let phi = Morphism::identity_on_names(&x, &x)?;
    let psi = ext.map_with(&ext, &phi, |a| ext.left(&dual.chi(a)))?;
    extend_and_transfer(&ext, &ext, &phi, &psi)
}

/// The two structures of [`example_pair`] with the identity on generators. `psi` sends
/// `c (x) 1` to `c (x) 1 + 1 (x) c` for the degree-one class `c`, so `c` survives `mu_Y`.
pub fn example_transfer(p: Prime) -> Result<TransferOutcome> {
    let pair = example_pair(p)?;
    let (x, y) = (&pair.left, &pair.right);
    let ext_x = ExtendedModule::new(&pair.dual, x)?;
    let ext_y = ExtendedModule::new(&pair.dual, y)?;
    let phi = Morphism::identity_on_names(x, y)?;
    let name = degree_one_class(p);
    let c = y.generator(name)?;
    let psi = ext_x.map_with(&ext_y, &phi, |a| {
        let shifted = ext_y.left(a)?;
        if a.to_string() == name {
            Ok(&shifted + &ext_y.eta(&c)?)
        } else {
            Ok(shifted)
        }
    })?;
    extend_and_transfer(&ext_x, &ext_y, &phi, &psi)
}

/// `xi1` at `p = 2`, `tau0` otherwise.
pub fn degree_one_class(p: Prime) -> &'static str {
    if p.is_two() {
        "xi1"
    } else {
        "tau0"
    }
}

fn lookup(pres: &AlgebraPresentation, op: Op, arg: &str) -> Result<String> {
    let x = pres.parse_element(arg)?;
    Ok(match pres.q(op, &x)?.value() {
        Some(v) => v.to_string(),
        None => "undetermined".into(),
    })
}

fn example_fp_p2() -> ScenarioSpec {
    ScenarioSpec::new("example-fp-p2", Some(2), Some(3)).step("pipeline", |rec| {
        let two = Prime::two();
        let dual = SteenrodDual::new(two, 3)?;
        rec.check(Label::Reference, "zeta2 in Milnor coordinates", "xi2 + xi1^3", dual.zeta(2)?);
        let pair = example_pair(two)?;
        let reference = AlgebraPresentation::from_strings(
            two,
            3,
            vec![GeneratorSpec::new("xi1", 1), GeneratorSpec::new("xi2", 3)],
            &["xi1^4", "xi2^2", "xi1 * xi2"],
            &[],
        )?;
        rec.check(
            Label::Reference,
            "third Postnikov section",
            format!("{:?}", reference.poincare_series()),
            format!("{:?}", pair.truncation.poincare_series()),
        );
        let quartic = AlgebraPresentation::from_strings(two, 3, vec![GeneratorSpec::new("xi1", 1)], &["xi1^4"], &[])?;
        for (side, x) in [("left", &pair.left), ("right", &pair.right)] {
            rec.check(
                Label::Reference,
                format!("{side}: killed ring is F_2[xi1]/(xi1^4)"),
                format!("{:?}", quartic.poincare_series()),
                format!("{:?}", x.poincare_series()),
            );
            rec.check(Label::Reference, format!("{side}: xi1^3 + xi2 is zero"), "0", x.reduce(&x.parse_element("xi1^3 + xi2")?));
        }
        rec.check(Label::Reference, "left: Q^2 xi1", "0", lookup(&pair.left, Op::q(2), "xi1")?);
        rec.check(Label::Reference, "right: Q^2 xi1", "xi1^3", lookup(&pair.right, Op::q(2), "xi1")?);
        rec.check(Label::Reference, "isomorphisms respecting operations", 0, find_isomorphisms(&pair.left, &pair.right)?.len());
        rec.check(
            Label::Sanity,
            "ring isomorphisms",
            1,
            find_isomorphisms(&pair.left.without_q_data(), &pair.right.without_q_data())?.len(),
        );
        Ok(())
    })
}

fn example_fp_odd() -> ScenarioSpec {
    ScenarioSpec::new("example-fp-odd", Some(3), Some(5)).step("pipeline", |rec| {
        let three = p(3);
        let pair = example_pair(three)?;
        let reference = AlgebraPresentation::from_strings(
            three,
            10,
            vec![
                GeneratorSpec::new("tau0", 1),
                GeneratorSpec::new("xi1", 4),
                GeneratorSpec::new("tau1", 5),
            ],
            &["tau0 * tau1", "tau1 * xi1", "tau0 * xi1 - tau1"],
            &[],
        )?
        .postnikov_truncate(5)?;
        for (side, x) in [("left", &pair.left), ("right", &pair.right)] {
            rec.check(
                Label::Reference,
                format!("{side}: killed ring"),
                format!("{:?}", reference.poincare_series()),
                format!("{:?}", x.poincare_series()),
            );
            for r in ["tau0 * tau1", "tau1 * xi1", "tau0 * xi1 - tau1"] {
                rec.check(Label::Reference, format!("{side}: {r} is zero"), "0", x.reduce(&x.parse_element(r)?));
            }
        }
        let tau1 = pair.right.reduce(&pair.right.parse_element("tau1")?);
        rec.check(Label::Reference, "left: Q^1 tau0", "0", lookup(&pair.left, Op::q(1), "tau0")?);
        rec.check(Label::Reference, "right: Q^1 tau0", tau1, lookup(&pair.right, Op::q(1), "tau0")?);
        rec.check(Label::Reference, "isomorphisms respecting operations", 0, find_isomorphisms(&pair.left, &pair.right)?.len());
        let bare = find_isomorphisms(&pair.left.without_q_data(), &pair.right.without_q_data())?;
        rec.check(Label::Sanity, "ring isomorphisms exist", true, !bare.is_empty());
        Ok(())
    })
}

/// Coefficient of `t^{p^k}` in `sum_i a_i b(t)^{p^i}` for `a(t) = sum a_i t^{p^i}`.
fn composite_coefficient(a: &[Element], b: &[Element], k: usize) -> Element {
    let p = a[0].prime().value() as u64;
    let mut acc = Element::zero(a[0].algebra());
    for i in 0..=k {
        let power = p.pow(i as u32);
        let bj = &b[k - i];
        let term = if bj.degree().ok().flatten().is_some_and(|d| d as u64 * power > bj.algebra().bound() as u64) {
            Element::zero(bj.algebra())
        } else {
            bj.pow(power as u32)
        };
        acc = &acc + &(&a[i] * &term);
    }
    acc
}

fn dual_steenrod_identities() -> ScenarioSpec {
    ScenarioSpec::new("dual-steenrod-identities", None, None)
        .step("p = 2", |rec| {
            let dual = SteenrodDual::new(Prime::two(), 31)?;
            let one = Element::one(dual.algebra());
            let mut xi = vec![one.clone()];
            let mut zeta = vec![one];
            for r in 1..=5 {
                xi.push(dual.xi(r)?);
                zeta.push(dual.zeta(r)?);
            }
            for k in 1..=5 {
                rec.check(Label::Reference, format!("xi(zeta(t)) at t^{}", 1 << k), "0", composite_coefficient(&xi, &zeta, k));
                rec.check(Label::Reference, format!("zeta(xi(t)) at t^{}", 1 << k), "0", composite_coefficient(&zeta, &xi, k));
            }
            rec.check(Label::Reference, "zeta1", "xi1", dual.zeta(1)?);
            rec.check(Label::Reference, "zeta2", "xi2 + xi1^3", dual.zeta(2)?);
            let mut bad = 0;
            for d in 0..=31 {
                for m in dual.algebra().basis(d).monomials() {
                    let x = Element::from_monomial(dual.algebra(), m.clone(), 1);
                    if dual.chi(&dual.chi(&x)) != x {
                        bad += 1;
                    }
                }
            }
            rec.check(Label::Sanity, "chi^2 = id on the monomial basis", 0, bad);
            rec.check(Label::Reference, "Q^2 xi1", "xi2 + xi1^3", dual.q_op(Side::Left, Op::q(2), &dual.xi(1)?)?);
            rec.check(Label::Reference, "right Q^2 xi1", "xi2", dual.q_op(Side::Right, Op::q(2), &dual.xi(1)?)?);
            rec.check(Label::Derived, "table coherence failures", 0, dual.coherence_report().failures.len());
            Ok(())
        })
        .step("p = 3", |rec| {
            let three = p(3);
            let dual = SteenrodDual::new(three, 18)?;
            for s in 0..=2u32 {
                // taubar_s + sum_{i<s} taubar_i xi_{s-i}^{p^i} + tau_s
                let mut acc = &dual.taubar(s)? + &dual.tau(s)?;
                for i in 0..s {
                    let x = dual.xi(s - i)?.pow(3u32.pow(i));
                    acc = &acc + &(&dual.taubar(i)? * &x);
                }
                rec.check(Label::Reference, format!("conjugation identity residual, s = {s}"), "0", acc);
            }
            rec.check(Label::Reference, "taubar1 = tau0 xi1 - tau1", "2 tau1 + tau0*xi1", dual.taubar(1)?);
            let tau0 = dual.tau(0)?;
            let neg_taubar1 = -&dual.taubar(1)?;
            rec.check(Label::Reference, "Q^1 tau0 = -taubar1", &neg_taubar1, dual.q_op(Side::Left, Op::q(1), &tau0)?);
            let neg_zeta1 = -&dual.zeta(1)?;
            rec.check(Label::Reference, "b Q^1 tau0 = -zeta1", &neg_zeta1, dual.q_op(Side::Left, Op::bq(1), &tau0)?);
            let report = dual.coherence_report();
            rec.check(Label::Derived, "table coherence failures", 0, report.failures.len());
            let mut checked = 0;
            let mut bad = 0;
            for (side, op, g, _) in dual.table().filter(|e| e.0 == Side::Left) {
                let x = dual.named(g)?;
                let lhs = dual.chi(&dual.q_op(side, op, &x)?);
                match dual.q_op(Side::Right, op, &dual.chi(&x)) {
                    Ok(rhs) => {
                        checked += 1;
                        bad += usize::from(lhs != rhs);
                    }
                    Err(Error::MissingTableEntry { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            rec.check(Label::Reference, "antipode equivariance violations", 0, bad);
            rec.check(Label::Sanity, "equivariance pairs checked", true, checked > 0);
            Ok(())
        })
}

fn lowest_generator(params: ScenarioParams) -> ScenarioSpec {
    let prime = params.p.unwrap_or(3);
    let bound = params.bound.unwrap_or(2 * prime * prime - 2);
    ScenarioSpec::new("lemma-lowest-generator", Some(prime), Some(bound)).step("enumerate", move |rec| {
        let p = Prime::new(prime)?;
        if p.is_two() {
            return Err(Error::Hypothesis("this scenario is about odd primes".into()));
        }
        let zeta1 = 2 * (prime - 1);
        let taubar1 = 2 * prime - 1;
        let gens = vec![GeneratorSpec::new("zeta1", zeta1), GeneratorSpec::new("taubar1", taubar1)];
        let first = 2 * prime * prime - 3;
        match lowest_new_generator(p, &gens, bound) {
            Some(w) => {
                rec.check(Label::Reference, "lowest new generator", format!("b Q^{prime} zeta1"), &w);
                rec.check(Label::Reference, "its degree", first, w.degree);
            }
            None => rec.check(Label::Reference, "lowest new generator", format!("b Q^{prime} zeta1"), "none"),
        }
        // Free on zeta_i (degree 2(p^i - 1)) and taubar_i (degree 2p^i - 1), i >= 1.
        let mut dual_gens = Vec::new();
        let mut q = prime;
        while 2 * q - 2 <= bound {
            dual_gens.push(GeneratorSpec::new(format!("zeta{}", dual_gens.len() / 2 + 1), 2 * q - 2));
            dual_gens.push(GeneratorSpec::new(format!("taubar{}", dual_gens.len() / 2 + 1), 2 * q - 1));
            q *= prime;
        }
        dual_gens.retain(|g| g.degree <= bound);
        let free = Algebra::new(p, bound, dual_gens)?.poincare_series();
        let unstable = free_unstable_poincare(p, &gens, bound)?;
        let agree_through = (0..=bound as usize).take_while(|&d| free[d] == unstable[d]).last();
        rec.check(Label::Reference, "series agree through degree", first - 1, agree_through.unwrap_or(0));
        rec.check(Label::Derived, "free unstable dimension in the first new degree", free[first as usize] + 1, unstable[first as usize]);
        Ok(())
    })
}

fn tor_scenario() -> ScenarioSpec {
    ScenarioSpec::new("tor-exterior", None, None)
        .step("standard modules", |rec| {
            let triv = GradedModule::trivial(p(3), 4, 20)?;
            let t = tor_exterior(&triv, 5, 20)?;
            let off = (0..=5).flat_map(|k| (0..=20).map(move |l| (k, l))).filter(|&(k, l)| t.get(k, l) != usize::from(l == 4 * k)).count();
            rec.check(Label::Derived, "trivial module: Tor_{k,kn} = F_p and nothing else", 0, off);
            let free = GradedModule::free_rank_one(p(2), 3, 15)?;
            let t = tor_exterior(&free, 4, 15)?;
            let total: usize = (0..=4).flat_map(|k| (0..=15).map(move |l| (k, l))).map(|(k, l)| t.get(k, l)).sum();
            rec.check(Label::Sanity, "free module: Tor is F_p in bidegree (0,0)", "1 1", format!("{} {total}", t.get(0, 0)));
            let short = tor_exterior(&triv, 1, 21).map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string());
            rec.check(Label::Sanity, "insufficient data is reported", Error::InsufficientModuleData { needed: 21, known: 20 }, short);
            Ok(())
        })
        .step("killing top classes", |rec| {
            for prime in [2, 3] {
                let pair = example_pair(p(prime))?;
                let x = &pair.truncation;
                let n = x.top_degree();
                let class = if prime == 2 { "xi1^3 + xi2" } else { "tau0 * xi1 - tau1" };
                let out = kill_element(x, &x.parse_element(class)?)?;
                rec.check(Label::Reference, format!("p = {prime}: Tor_{{k,l}} = 0 for k > 0, l < {n}"), true, out.tor.vanishes_below(n));
                let direct = x.quotient(&[x.parse_element(class)?])?;
                rec.check(
                    Label::Derived,
                    format!("p = {prime}: agrees with the ideal quotient"),
                    format!("{:?}", direct.poincare_series()),
                    format!("{:?}", out.ring.poincare_series()),
                );
                let zero = kill_element(x, &Element::zero(x.algebra()))?;
                rec.check(Label::Sanity, format!("p = {prime}: killing zero"), format!("{:?}", x.poincare_series()), format!("{:?}", zero.ring.poincare_series()));
            }
            Ok(())
        })
}

fn classify_scenario(params: ScenarioParams) -> Result<ScenarioSpec> {
    let primes: Vec<u32> = match params.p {
        Some(v) => vec![Prime::new(v)?.value()],
        None => vec![2, 3, 5],
    };
    let n_max = params.n_max.unwrap_or(10);
    let prime = params.p;
    Ok(ScenarioSpec::new("classify-table", prime, Some(n_max)).step("table", move |rec| {
        for &pv in &primes {
            let pr = Prime::new(pv)?;
            for row in classification_table(pr, n_max) {
                let n = row.n;
                let expected = if n % 2 == 0 { 2 } else { 1 };
                rec.check(Label::Reference, format!("p = {pv}, n = {n}: HZ classes"), expected, row.hz.count);
                rec.check(Label::Derived, format!("p = {pv}, n = {n}: S classes"), expected, row.sphere.count);
                if let Some(c) = row.collapse {
                    let k = (n + 2) / 2;
                    let want = if k >= pv { CollapseVerdict::Collapse } else { CollapseVerdict::NoCollapse };
                    let label = if c.certified { Label::Reference } else { Label::Derived };
                    rec.check(label, format!("p = {pv}, n = {n}: collapse"), want, c.verdict);
                }
            }
            let zero = postnikov_classes(Base::Hz, pr, 0);
            let names: Vec<String> = zero.representatives.iter().filter_map(|r| r.realization.clone()).collect();
            rec.check(Label::Reference, format!("p = {pv}, n = 0: realizations"), "HLambda_{F_p}(x_0), HZ/p^2", names.join(", "));
            if pv == 5 && n_max >= 2 {
                rec.check(Label::Derived, "p = 5, n = 2: image", "2 gamma2", comparison_collapse(pr, 2)?.image);
            }
        }
        Ok(())
    }))
}

fn transfer_scenario() -> ScenarioSpec {
    ScenarioSpec::new("transfer-theorem7", None, None)
        .step("certificate", |rec| {
            let out = toy_transfer()?;
            rec.check(Label::Derived, "toy instance gives a certificate", true, out.is_certificate());
            for s in out.steps() {
                rec.check(Label::Derived, format!("{:?}: {} [{} = {}]", s.kind, s.equation, s.lhs, s.rhs), true, s.holds);
            }
            let dual = SteenrodDual::new(p(3), 10)?;
            let x = AlgebraPresentation::from_dual(&dual, Side::Left, 10)?;
            let ext = ExtendedModule::new(&dual, &x)?;
            let mut bad = 0;
            for d in 0..=10 {
                for b in x.ring().basis_elements(d) {
                    bad += usize::from(ext.mu(&ext.eta(&b)?)? != b);
                }
            }
            rec.check(Label::Reference, "mu after eta is the identity", 0, bad);
            Ok(())
        })
        .step("trace", |rec| {
            for prime in [2, 3] {
                let c = degree_one_class(p(prime));
                match example_transfer(p(prime))? {
                    TransferOutcome::Trace { pi1_vanishes, failed, .. } => {
                        rec.check(Label::Reference, format!("p = {prime}: pi_1 vanishes"), false, pi1_vanishes);
                        rec.check(Label::Reference, format!("p = {prime}: failing step"), format!("{:?}", StepKind::DegreeOneClass), format!("{:?}", failed.kind));
                        rec.check(Label::Reference, format!("p = {prime}: failing equation"), format!("mu_Y psi({c} (x) 1) = 0"), failed.equation);
                        rec.check(Label::Reference, format!("p = {prime}: surviving class"), c, failed.lhs);
                    }
                    other => rec.check(Label::Reference, format!("p = {prime}: example gives a trace"), "trace", format!("{other:?}")),
                }
            }
            Ok(())
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_pass() {
        for name in BUILTIN {
            let report = builtin(name, ScenarioParams::default()).unwrap().run();
            let failures: Vec<_> = report.failures().collect();
            assert!(report.pass, "{name}: {failures:#?}");
            assert!(!report.assertions.is_empty());
        }
    }

    #[test]
    fn empty_pipeline_passes() {
        let report = ScenarioSpec::new("empty", None, None).run();
        assert!(report.pass);
        assert!(report.assertions.is_empty());
    }

    #[test]
    fn failing_steps_are_reported() {
        let spec = ScenarioSpec::new("bad", None, None)
            .step("mismatch", |rec| {
                rec.check(Label::Sanity, "one", 1, 2);
                Ok(())
            })
            .step("error", |_| Err(Error::Hypothesis("no".into())));
        let report = spec.run();
        assert!(!report.pass);
        assert_eq!(report.failures().count(), 2);
        assert!(matches!(builtin("nope", ScenarioParams::default()), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn reports_are_deterministic() {
        let specs: Vec<_> = ["example-fp-p2", "classify-table"]
            .iter()
            .map(|n| builtin(n, ScenarioParams::default()).unwrap())
            .collect();
        let a: Vec<_> = run_all(&specs, true).into_iter().map(|r| serde_json::to_string(&r.0).unwrap()).collect();
        let b: Vec<_> = run_all(&specs, false).into_iter().map(|r| serde_json::to_string(&r.0).unwrap()).collect();
        assert_eq!(a, b);
    }
}
