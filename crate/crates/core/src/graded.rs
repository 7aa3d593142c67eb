//! Free graded-commutative `F_p`-algebras on weighted generators, truncated at a degree bound.
//!
//! Every algebra carries an explicit bound `N`; products landing above `N` are dropped. This is
//! computation in the Postnikov truncation, which is where every calculation in this crate
//! happens. For odd `p`, odd-degree generators are exterior and products pick up Koszul signs;
//! for `p = 2` everything is polynomial and signs vanish.
//!
//! Quotients by homogeneous ideals are handled by per-degree Gaussian elimination rather than
//! Groebner bases: the bases involved have at most a few hundred monomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fp::{FpScalar, Prime};
use crate::linalg::{Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(d: u32) -> Self {
        if d % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
        }
    }

    pub fn parity(&self) -> Parity {
        Parity::of_degree(self.degree)
    }
}

/// Multiply two sorted factor lists `a * b` in a graded-commutative algebra.
///
/// `odd` decides which keys anticommute. With `graded` false (characteristic 2) there are no
/// signs and no exterior truncation. Returns `None` when an exterior factor would square, and
/// otherwise the merged factors plus whether a sign flip occurred.
pub(crate) fn merge_factors<K: Ord + Clone>(
    a: &[(K, u32)],
    b: &[(K, u32)],
    odd: impl Fn(&K) -> bool,
    graded: bool,
) -> Option<(Vec<(K, u32)>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut flips = 0usize;
    // Number of odd factors of `a` strictly greater than the current key.
    let mut odd_left_in_a = if graded {
        a.iter().filter(|(k, _)| odd(k)).count()
    } else {
        0
    };
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => Some(true),
                Ordering::Greater => Some(false),
                Ordering::Equal => None,
            },
            (Some(_), None) => Some(true),
            (None, Some(_)) => Some(false),
            (None, None) => unreachable!(),
        };
        match take_a {
            Some(true) => {
                if graded && odd(&a[i].0) {
                    odd_left_in_a -= 1;
                }
                out.push(a[i].clone());
                i += 1;
            }
            Some(false) => {
                if graded && odd(&b[j].0) {
                    flips += odd_left_in_a;
                }
                out.push(b[j].clone());
                j += 1;
            }
            None => {
                if graded && odd(&a[i].0) {
                    return None;
                }
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    Some((out, flips % 2 == 1))
}

/// A monomial: sparse exponent list sorted by generator index, with its total degree.
///
/// Ordered by degree, then colexicographically (the highest-index generator is most
/// significant). Ideal reduction eliminates the largest monomial of each relation, so e.g.
/// killing `xi1^3 + xi2` rewrites `xi2` as `xi1^3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn exponent(&self, gen: usize) -> u32 {
        self.factors
            .iter()
            .find(|(g, _)| *g == gen)
            .map_or(0, |(_, e)| *e)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    fn from_factors(alg: &Algebra, factors: Vec<(usize, u32)>) -> Self {
        let degree = factors
            .iter()
            .map(|(g, e)| alg.gens[*g].degree * e)
            .sum();
        Monomial { degree, factors }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let mut a = self.factors.iter().rev();
            let mut b = other.factors.iter().rev();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(x), Some(y)) => {
                        let c = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered monomial basis of one degree, largest monomial first.
#[derive(Debug)]
pub struct DegreeBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// A free graded-commutative algebra truncated above `bound`.
#[derive(Debug)]
pub struct Algebra {
    p: Prime,
    bound: u32,
    gens: Vec<GeneratorSpec>,
    bases: OnceLock<Vec<DegreeBasis>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.bound == other.bound && self.gens == other.gens
    }
}

impl Eq for Algebra {}

impl Algebra {
    pub fn new(p: Prime, bound: u32, gens: Vec<GeneratorSpec>) -> Result<Arc<Self>> {
        for (i, g) in gens.iter().enumerate() {
            if g.degree == 0 {
                return Err(Error::InvalidGenerator(format!(
                    "`{}` has degree 0; generators must have positive degree",
                    g.name
                )));
            }
            if g.name.is_empty() {
                return Err(Error::InvalidGenerator("empty generator name".into()));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidGenerator(format!(
                    "duplicate generator name `{}`",
                    g.name
                )));
            }
        }
        Ok(Arc::new(Algebra {
            p,
            bound,
            gens,
            bases: OnceLock::new(),
        }))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Whether generator `g` is exterior (odd degree at odd `p`).
    pub fn is_exterior(&self, g: usize) -> bool {
        !self.p.is_two() && self.gens[g].degree % 2 == 1
    }

    pub fn basis(&self, degree: u32) -> &DegreeBasis {
        &self.bases()[degree as usize]
    }

    fn bases(&self) -> &[DegreeBasis] {
        self.bases.get_or_init(|| {
            let mut by_degree: Vec<Vec<Monomial>> = vec![Vec::new(); self.bound as usize + 1];
            let mut current = Vec::new();
            self.enumerate(0, 0, &mut current, &mut by_degree);
            by_degree
                .into_iter()
                .map(|mut monomials| {
                    monomials.sort_by(|a, b| b.cmp(a));
                    let index = monomials
                        .iter()
                        .enumerate()
                        .map(|(i, m)| (m.clone(), i))
                        .collect();
                    DegreeBasis { monomials, index }
                })
                .collect()
        })
    }

    fn enumerate(
        &self,
        gen: usize,
        degree: u32,
        current: &mut Vec<(usize, u32)>,
        out: &mut [Vec<Monomial>],
    ) {
        if gen == self.gens.len() {
            out[degree as usize].push(Monomial {
                degree,
                factors: current.clone(),
            });
            return;
        }
        let d = self.gens[gen].degree;
        let max_exp = if self.is_exterior(gen) { 1 } else { u32::MAX };
        let mut e = 0;
        while e <= max_exp && degree + e * d <= self.bound {
            if e > 0 {
                current.push((gen, e));
            }
            self.enumerate(gen + 1, degree + e * d, current, out);
            if e > 0 {
                current.pop();
            }
            e += 1;
        }
    }

    /// Dimensions of the free algebra in degrees `0..=bound`.
    pub fn poincare_series(&self) -> Vec<usize> {
        self.bases().iter().map(DegreeBasis::dim).collect()
    }

    /// Product of two monomials with its sign, or `None` if it vanishes (exterior square or
    /// degree above the bound).
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, u32)> {
        if a.degree + b.degree > self.bound {
            return None;
        }
        let (factors, flip) = merge_factors(
            &a.factors,
            &b.factors,
            |g| self.gens[*g].degree % 2 == 1,
            !self.p.is_two(),
        )?;
        let sign = if flip { self.p.value() - 1 } else { 1 };
        Some((
            Monomial {
                degree: a.degree + b.degree,
                factors,
            },
            sign,
        ))
    }

    pub fn monomial(&self, factors: &[(usize, u32)]) -> Result<Monomial> {
        let mut sorted: Vec<(usize, u32)> = Vec::new();
        for &(g, e) in factors {
            if g >= self.gens.len() {
                return Err(Error::InvalidGenerator(format!("index {g}")));
            }
            if e == 0 {
                continue;
            }
            match sorted.iter_mut().find(|(h, _)| *h == g) {
                Some(slot) => slot.1 += e,
                None => sorted.push((g, e)),
            }
        }
        sorted.sort();
        Ok(Monomial::from_factors(self, sorted))
    }
}

/// A sparse element of an [`Algebra`]. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    alg: Arc<Algebra>,
    terms: BTreeMap<Monomial, u32>,
}

impl Element {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Element {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        Self::scalar(alg, 1)
    }

    pub fn scalar(alg: &Arc<Algebra>, c: i64) -> Self {
        Self::from_monomial(alg, Monomial::one(), alg.p.reduce(c))
    }

    pub fn generator(alg: &Arc<Algebra>, g: usize) -> Self {
        let m = Monomial::from_factors(alg, vec![(g, 1)]);
        Self::from_monomial(alg, m, 1)
    }

    pub fn named(alg: &Arc<Algebra>, name: &str) -> Result<Self> {
        let g = alg
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Self::generator(alg, g))
    }

    /// The monomial with coefficient `c`; zero if it lies above the bound.
    pub fn from_monomial(alg: &Arc<Algebra>, m: Monomial, c: u32) -> Self {
        let mut e = Element::zero(alg);
        let c = c % alg.p.value();
        if c != 0 && m.degree <= alg.bound {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn prime(&self) -> Prime {
        self.alg.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> FpScalar {
        FpScalar::new(self.alg.p, self.terms.get(m).copied().unwrap_or(0) as i64)
    }

    /// Degree of a nonzero homogeneous element; `None` for zero, an error if inhomogeneous.
    pub fn degree(&self) -> Result<Option<u32>> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => Ok(None),
            Some(d) if degrees.all(|e| e == d) => Ok(Some(d)),
            Some(_) => Err(Error::NotHomogeneous),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    /// Split into homogeneous components, keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Element> {
        let mut parts: BTreeMap<u32, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree)
                .or_insert_with(|| Element::zero(&self.alg))
                .terms
                .insert(m.clone(), *c);
        }
        parts
    }

    pub fn homogeneous_part(&self, degree: u32) -> Element {
        Element {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == degree)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.alg.p;
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = p.add(*slot, c);
                if *slot == 0 {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn same_ambient(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.same_ambient(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Element) -> Result<Element> {
        self.same_ambient(other)?;
        let p = self.alg.p;
        let mut out = Element::zero(&self.alg);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((m, sign)) = self.alg.mul_monomials(a, b) {
                    out.add_term(m, p.mul(p.mul(*ca, *cb), sign));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Element {
        let p = self.alg.p;
        let c = c % p.value();
        let mut out = Element::zero(&self.alg);
        if c != 0 {
            for (m, x) in &self.terms {
                out.terms.insert(m.clone(), p.mul(*x, c));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Element {
        let mut acc = Element::one(&self.alg);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coordinates of the degree-`d` part in the basis of [`Algebra::basis`].
    pub fn coordinates(&self, degree: u32) -> Vector {
        let basis = self.alg.basis(degree);
        let mut v = vec![0; basis.dim()];
        for (m, c) in self.terms.range(..) {
            if m.degree == degree {
                v[basis.index_of(m).expect("monomial in basis")] = *c;
            }
        }
        v
    }

    pub fn from_coordinates(alg: &Arc<Algebra>, degree: u32, coords: &[u32]) -> Element {
        let basis = alg.basis(degree);
        assert_eq!(coords.len(), basis.dim(), "coordinate vector has wrong length");
        let mut e = Element::zero(alg);
        for (m, &c) in basis.monomials().iter().zip(coords) {
            if c % alg.p.value() != 0 {
                e.terms.insert(m.clone(), c % alg.p.value());
            }
        }
        e
    }

    /// Apply a ring map given by generator images. Images may live in another algebra.
    pub fn substitute(&self, target: &Arc<Algebra>, images: &[Element]) -> Result<Element> {
        assert_eq!(images.len(), self.alg.gens.len(), "one image per generator");
        let p = self.alg.p;
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            let mut term = Element::scalar(target, *c as i64);
            for &(g, e) in &m.factors {
                term = term.checked_mul(&images[g].pow(e))?;
                if term.is_zero() {
                    break;
                }
            }
            let _ = p;
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Rebuild in another algebra whose generators are a superset by name.
    pub fn transport(&self, target: &Arc<Algebra>) -> Result<Element> {
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            let mut factors = Vec::with_capacity(m.factors.len());
            for &(g, e) in &m.factors {
                let name = &self.alg.gens[g].name;
                let h = target
                    .generator_index(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                factors.push((h, e));
            }
            let mono = target.monomial(&factors)?;
            // Reordering exterior generators can introduce a sign.
            let mut signed = Element::scalar(target, *c as i64);
            for &(h, e) in &factors {
                signed = &signed * &Element::generator(target, h).pow(e);
            }
            debug_assert!(signed.is_zero() || signed.terms.contains_key(&mono));
            out = &out + &signed;
        }
        Ok(out)
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("elements of different algebras")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.checked_add(&-rhs).expect("elements of different algebras")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(self.alg.p.value() - 1)
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.checked_mul(rhs).expect("elements of different algebras")
    }
}

pub(crate) fn fmt_monomial(
    f: &mut fmt::Formatter<'_>,
    factors: &[(usize, u32)],
    name: impl Fn(usize) -> String,
) -> fmt::Result {
    for (i, (g, e)) in factors.iter().enumerate() {
        if i > 0 {
            write!(f, "*")?;
        }
        write!(f, "{}", name(*g))?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Prints in the expression grammar, largest monomial first: `xi2 + xi1^3`.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (m.is_one(), *c) {
                (true, c) => write!(f, "{c}")?,
                (false, 1) => fmt_monomial(f, &m.factors, |g| self.alg.gens[g].name.clone())?,
                (false, c) => {
                    write!(f, "{c} ")?;
                    fmt_monomial(f, &m.factors, |g| self.alg.gens[g].name.clone())?
                }
            }
        }
        Ok(())
    }
}

/// A homogeneous ideal, spanned degree by degree up to the algebra's bound.
#[derive(Clone, Debug)]
pub struct GradedIdeal {
    alg: Arc<Algebra>,
    relations: Vec<Element>,
    spans: Vec<Subspace>,
}

impl GradedIdeal {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        let spans = (0..=alg.bound)
            .map(|d| Subspace::zero(alg.p, alg.basis(d).dim()))
            .collect();
        GradedIdeal {
            alg: alg.clone(),
            relations: Vec::new(),
            spans,
        }
    }

    pub fn new(alg: &Arc<Algebra>, relations: Vec<Element>) -> Result<Self> {
        let mut ideal = GradedIdeal::zero(alg);
        for r in relations {
            ideal.add_relation(r)?;
        }
        Ok(ideal)
    }

    /// Adds a homogeneous relation. Relations above the bound are rejected: they would be
    /// silently meaningless in the truncation.
    pub fn add_relation(&mut self, r: Element) -> Result<()> {
        if **r.algebra() != *self.alg {
            return Err(Error::MixedAlgebras);
        }
        let Some(d) = r.degree()? else {
            return Ok(());
        };
        if d > self.alg.bound {
            return Err(Error::DegreeBound {
                degree: d,
                bound: self.alg.bound,
            });
        }
        for e in d..=self.alg.bound {
            for m in self.alg.basis(e - d).monomials() {
                let prod = &Element::from_monomial(&self.alg, m.clone(), 1) * &r;
                if !prod.is_zero() {
                    self.spans[e as usize].insert(prod.coordinates(e));
                }
            }
        }
        self.relations.push(r);
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn span(&self, degree: u32) -> &Subspace {
        &self.spans[degree as usize]
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.reduce(x).is_zero()
    }

    /// Canonical coset representative.
    pub fn reduce(&self, x: &Element) -> Element {
        let mut out = Element::zero(&self.alg);
        for (d, part) in x.homogeneous_parts() {
            let mut v = part.coordinates(d);
            self.spans[d as usize].reduce(&mut v);
            out = &out + &Element::from_coordinates(&self.alg, d, &v);
        }
        out
    }
}

/// A quotient `A / I` with canonical representatives and a basis of standard monomials.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    ideal: GradedIdeal,
}

impl QuotientRing {
    pub fn new(ideal: GradedIdeal) -> Self {
        QuotientRing { ideal }
    }

    pub fn free(alg: &Arc<Algebra>) -> Self {
        QuotientRing::new(GradedIdeal::zero(alg))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.ideal.alg
    }

    pub fn ideal(&self) -> &GradedIdeal {
        &self.ideal
    }

    pub fn prime(&self) -> Prime {
        self.ideal.alg.p
    }

    pub fn bound(&self) -> u32 {
        self.ideal.alg.bound
    }

    pub fn reduce(&self, x: &Element) -> Element {
        self.ideal.reduce(x)
    }

    pub fn dim(&self, degree: u32) -> usize {
        if degree > self.bound() {
            return 0;
        }
        let alg = self.algebra();
        alg.basis(degree).dim() - self.ideal.span(degree).dim()
    }

    /// Standard monomials spanning the quotient in `degree` (the non-pivot monomials).
    pub fn basis(&self, degree: u32) -> Vec<Monomial> {
        if degree > self.bound() {
            return Vec::new();
        }
        let pivots = self.ideal.span(degree).pivots();
        self.algebra()
            .basis(degree)
            .monomials()
            .iter()
            .enumerate()
            .filter(|(i, _)| pivots.binary_search(i).is_err())
            .map(|(_, m)| m.clone())
            .collect()
    }

    pub fn basis_elements(&self, degree: u32) -> Vec<Element> {
        self.basis(degree)
            .into_iter()
            .map(|m| Element::from_monomial(self.algebra(), m, 1))
            .collect()
    }

    /// Coordinates of the reduced degree-`d` part in the standard-monomial basis.
    pub fn coordinates(&self, x: &Element, degree: u32) -> Vector {
        let reduced = self.reduce(&x.homogeneous_part(degree));
        self.basis(degree)
            .iter()
            .map(|m| reduced.coefficient(m).value())
            .collect()
    }

    pub fn from_coordinates(&self, degree: u32, coords: &[u32]) -> Element {
        let basis = self.basis(degree);
        assert_eq!(basis.len(), coords.len());
        basis
            .into_iter()
            .zip(coords)
            .fold(Element::zero(self.algebra()), |acc, (m, &c)| {
                &acc + &Element::from_monomial(self.algebra(), m, c)
            })
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.reduce(&(a * b))
    }

    /// Dimensions in degrees `0..=up_to` (zero above the bound).
    pub fn poincare_series(&self, up_to: u32) -> Vec<usize> {
        (0..=up_to).map(|d| self.dim(d)).collect()
    }
}
