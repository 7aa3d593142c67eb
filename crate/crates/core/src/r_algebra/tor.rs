//! Tor over an exterior algebra `Lambda[x_n]`, and killing a top-degree class.

use serde::Serialize;

use super::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::graded::Element;
use crate::linalg::Matrix;

/// A module over `Lambda[x_n]`, known in degrees `0..=known_through()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    p: Prime,
    n: u32,
    dims: Vec<usize>,
    /// `action[d]: M_d -> M_{d+n}`, for every `d` with `d + n` known.
    action: Vec<Matrix>,
}

impl GradedModule {
    pub fn new(p: Prime, n: u32, dims: Vec<usize>, action: Vec<Matrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Module("x_n must have positive degree".into()));
        }
        if dims.is_empty() {
            return Err(Error::Module("no degrees given".into()));
        }
        let n_us = n as usize;
        let expected = dims.len().saturating_sub(n_us);
        if action.len() != expected {
            return Err(Error::Module(format!(
                "expected {expected} action matrices, got {}",
                action.len()
            )));
        }
        for (d, m) in action.iter().enumerate() {
            if m.cols != dims[d] || m.rows != dims[d + n_us] {
                return Err(Error::Module(format!("action matrix in degree {d} has the wrong shape")));
            }
        }
        for d in 0..expected.saturating_sub(n_us) {
            if !action[d + n_us].compose(p, &action[d]).is_zero() {
                return Err(Error::Module(format!("x_n^2 acts nontrivially on degree {d}")));
            }
        }
        Ok(GradedModule { p, n, dims, action })
    }

    /// `Lambda[x_n]` as a module over itself, padded with zeros through `known_through`.
    pub fn free_rank_one(p: Prime, n: u32, known_through: u32) -> Result<Self> {
        let mut dims = vec![0; known_through as usize + 1];
        dims[0] = 1;
        if (n as usize) < dims.len() {
            dims[n as usize] = 1;
        }
        let action = (0..dims.len().saturating_sub(n as usize))
            .map(|d| {
                let mut m = Matrix::zero(dims[d + n as usize], dims[d]);
                if d == 0 && m.rows == 1 {
                    m.data[0][0] = 1;
                }
                m
            })
            .collect();
        GradedModule::new(p, n, dims, action)
    }

    /// `F_p` in degree 0 with trivial action.
    pub fn trivial(p: Prime, n: u32, known_through: u32) -> Result<Self> {
        let mut dims = vec![0; known_through as usize + 1];
        dims[0] = 1;
        let action = (0..dims.len().saturating_sub(n as usize))
            .map(|d| Matrix::zero(dims[d + n as usize], dims[d]))
            .collect();
        GradedModule::new(p, n, dims, action)
    }

    /// The underlying module of a presentation, `x_n` acting by multiplication with `x`.
    /// The presentation is treated as a Postnikov section: zero above its bound.
    pub fn from_multiplication(x: &AlgebraPresentation, by: &Element) -> Result<Self> {
        let p = x.prime();
        let by = x.reduce(by);
        let n = by
            .degree()?
            .ok_or_else(|| Error::Module("cannot act by zero: its degree is undefined".into()))?;
        if n == 0 {
            return Err(Error::Module("x_n must have positive degree".into()));
        }
        let known = x.bound().max(2 * n) as usize;
        let dims: Vec<usize> = (0..=known as u32).map(|d| x.dim(d)).collect();
        let mut action = Vec::new();
        for d in 0..=known.saturating_sub(n as usize) {
            let e = d as u32 + n;
            let cols: Vec<_> = x
                .ring()
                .basis_elements(d as u32)
                .iter()
                .map(|b| x.ring().coordinates(&x.ring().mul(b, &by), e))
                .collect();
            action.push(Matrix::from_columns(dims[e as usize], &cols));
        }
        GradedModule::new(p, n, dims, action)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn known_through(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn action(&self, d: usize) -> &Matrix {
        &self.action[d]
    }

    fn rank_of_action(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.action[d as usize].rank(self.p)
        }
    }

    fn kernel_dim(&self, d: usize) -> usize {
        self.dims[d] - self.action[d].rank(self.p)
    }
}

/// `Tor_{k,l}` for `0 <= k <= k_max`, `0 <= l <= l_max`, with `l` the internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorTable {
    pub n: u32,
    pub k_max: u32,
    pub l_max: u32,
    /// `dims[k][l]`.
    pub dims: Vec<Vec<usize>>,
}

impl TorTable {
    pub fn get(&self, k: u32, l: u32) -> usize {
        self.dims[k as usize][l as usize]
    }

    /// Whether `Tor_{k,l} = 0` for all `k > 0` and `l < bound`.
    pub fn vanishes_below(&self, bound: u32) -> bool {
        (1..=self.k_max).all(|k| (0..bound.min(self.l_max + 1)).all(|l| self.get(k, l) == 0))
    }

    /// Whether `Tor_{k,l} = 0` whenever `k > 0` and `k + l <= total`.
    pub fn no_corrections_through(&self, total: u32) -> bool {
        (1..=self.k_max).all(|k| (0..=self.l_max).all(|l| k + l > total || self.get(k, l) == 0))
    }
}

/// Tor over `Lambda[x_n]` from the periodic resolution: homological degree `k` is
/// `Sigma^{kn} Lambda[x_n]`, so `Tor_{k,l}` is the homology of `x_n` at `M_{l-kn}`.
pub fn tor_exterior(m: &GradedModule, k_max: u32, l_max: u32) -> Result<TorTable> {
    if m.known_through() < l_max as usize {
        return Err(Error::InsufficientModuleData {
            needed: l_max as usize,
            known: m.known_through(),
        });
    }
    let n = m.n as i64;
    let mut dims = Vec::new();
    for k in 0..=k_max as i64 {
        let mut row = Vec::new();
        for l in 0..=l_max as i64 {
            let d = l - k * n;
            let v = if d < 0 {
                0
            } else if k == 0 {
                m.dims[d as usize] - m.rank_of_action(d - n)
            } else {
                m.kernel_dim(d as usize) - m.rank_of_action(d - n)
            };
            row.push(v);
        }
        dims.push(row);
    }
    Ok(TorTable {
        n: m.n,
        k_max,
        l_max,
        dims,
    })
}

#[derive(Clone, Debug)]
pub struct KillOutcome {
    pub ring: AlgebraPresentation,
    pub tor: TorTable,
}

/// Kill a top-degree class `x` of a Postnikov section `X`: the result is
/// `F_p (x)_{Lambda[x_n]} X_*`, which equals `X_*/(x)` once Tor confirms no higher corrections.
pub fn kill_element(x_ring: &AlgebraPresentation, x: &Element) -> Result<KillOutcome> {
    let x = x_ring.reduce(x);
    let top = x_ring.top_degree();
    if x_ring.dim(0) != 1 {
        return Err(Error::Hypothesis("pi_0 must be F_p".into()));
    }
    let Some(n) = x.degree()? else {
        // Killing zero: x_n acts trivially and only Tor_0 = X_* is reported.
        let n = top.max(1) as usize;
        let dims: Vec<usize> = (0..=x_ring.bound()).map(|d| x_ring.dim(d)).collect();
        let action = (0..dims.len().saturating_sub(n))
            .map(|d| Matrix::zero(dims[d + n], dims[d]))
            .collect();
        let module = GradedModule::new(x_ring.prime(), n as u32, dims, action)?;
        return Ok(KillOutcome {
            ring: x_ring.clone(),
            tor: tor_exterior(&module, 0, x_ring.bound())?,
        });
    };
    if !x.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if n != top || n == 0 {
        return Err(Error::Hypothesis(format!(
            "the killed class must have the top degree {top}, it has degree {n}"
        )));
    }
    let module = GradedModule::from_multiplication(x_ring, &x)?;
    let k_max = n.max(1);
    let tor = tor_exterior(&module, k_max, n)?;
    if !tor.no_corrections_through(n) {
        return Err(Error::Hypothesis("higher Tor contributes in degrees <= n".into()));
    }
    let truncated = x_ring.postnikov_truncate(n)?;
    let ring = truncated.quotient(&[x.transport(truncated.algebra())?])?;
    for l in 0..=n {
        if ring.dim(l) != tor.get(0, l) {
            return Err(Error::Module(format!(
                "Tor_0 has dimension {} in degree {l} but the quotient has {}",
                tor.get(0, l),
                ring.dim(l)
            )));
        }
    }
    Ok(KillOutcome { ring, tor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GeneratorSpec;
    use crate::steenrod::{Side, SteenrodDual};

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn free_and_trivial_modules() {
        let free = GradedModule::free_rank_one(p(3), 4, 20).unwrap();
        let t = tor_exterior(&free, 4, 20).unwrap();
        for k in 0..=4 {
            for l in 0..=20 {
                let expect = usize::from(k == 0 && l == 0);
                assert_eq!(t.get(k, l), expect, "k = {k}, l = {l}");
            }
        }
        let triv = GradedModule::trivial(p(2), 3, 15).unwrap();
        let t = tor_exterior(&triv, 5, 15).unwrap();
        for k in 0..=5 {
            for l in 0..=15 {
                assert_eq!(t.get(k, l), usize::from(l == 3 * k), "k = {k}, l = {l}");
            }
        }
        assert!(matches!(
            tor_exterior(&triv, 1, 16),
            Err(Error::InsufficientModuleData { needed: 16, known: 15 })
        ));
    }

    #[test]
    fn rejects_bad_modules() {
        let mut sq = Matrix::zero(1, 1);
        sq.data[0][0] = 1;
        // x acts isomorphically 0 -> 1 -> 2, so x^2 != 0.
        let bad = GradedModule::new(p(2), 1, vec![1, 1, 1], vec![sq.clone(), sq.clone()]);
        assert!(matches!(bad, Err(Error::Module(_))));
        assert!(GradedModule::new(p(2), 1, vec![1, 1], vec![]).is_err());
    }

    #[test]
    fn kills_the_standard_classes() {
        let dual = SteenrodDual::new(p(2), 3).unwrap();
        let x = AlgebraPresentation::from_dual(&dual, Side::Left, 3).unwrap();
        let out = kill_element(&x, &x.parse_element("xi1^3 + xi2").unwrap()).unwrap();
        assert_eq!(out.ring.poincare_series(), vec![1, 1, 1, 1]);
        assert!(out.tor.vanishes_below(3));
        // Only top-degree classes can be killed this way.
        assert!(matches!(
            kill_element(&x, &x.parse_element("xi1^2").unwrap()),
            Err(Error::Hypothesis(_))
        ));
        let same = kill_element(&x, &Element::zero(x.algebra())).unwrap();
        assert_eq!(same.ring.poincare_series(), x.poincare_series());

        let dual = SteenrodDual::new(p(3), 5).unwrap();
        let x = AlgebraPresentation::from_dual(&dual, Side::Right, 5).unwrap();
        let out = kill_element(&x, &x.parse_element("tau0 * xi1 - tau1").unwrap()).unwrap();
        assert_eq!(out.ring.poincare_series(), vec![1, 1, 0, 0, 1, 1]);
        let reference = AlgebraPresentation::from_strings(
            p(3),
            10,
            vec![
                GeneratorSpec::new("tau0", 1),
                GeneratorSpec::new("xi1", 4),
                GeneratorSpec::new("tau1", 5),
            ],
            &["tau0 * tau1", "tau1 * xi1", "tau0 * xi1 - tau1"],
            &[],
        )
        .unwrap()
        .postnikov_truncate(5)
        .unwrap();
        assert_eq!(reference.poincare_series(), out.ring.poincare_series());
    }
}
