//! Dense linear algebra over `F_p`. Dimensions here are tiny, so plain `Vec<u32>` rows suffice.

use crate::fp::Prime;

pub type Vector = Vec<u32>;

/// A subspace of `F_p^n` in reduced row-echelon form.
///
/// Pivots are taken at the leftmost nonzero coordinate, so callers that want a particular
/// coordinate eliminated in favour of others should order their basis with it first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    p: Prime,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: Prime, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by<I: IntoIterator<Item = Vector>>(p: Prime, ambient: usize, vectors: I) -> Self {
        let mut s = Subspace::zero(p, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    /// Reduce `v` against the echelon basis. The result is zero exactly when `v` lies in the span.
    pub fn reduce(&self, v: &mut [u32]) {
        debug_assert_eq!(v.len(), self.ambient);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                let f = self.p.neg(c);
                for (x, r) in v.iter_mut().zip(row) {
                    if *r != 0 {
                        *x = self.p.add(*x, self.p.mul(f, *r));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Add `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.p.inv(v[piv]).unwrap();
        for x in v.iter_mut() {
            *x = self.p.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                let f = self.p.neg(c);
                for (x, n) in row.iter_mut().zip(&v) {
                    *x = self.p.add(*x, self.p.mul(f, *n));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }
}

/// A matrix acting on column vectors: `rows x cols`, mapping `F_p^cols -> F_p^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vector>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    /// Build from column images.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Matrix::zero(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.data[i][j] = x;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data.iter().map(|r| r[j]).collect()
    }

    pub fn apply(&self, p: Prime, v: &[u32]) -> Vector {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (a, b)| p.add(acc, p.mul(*a, *b)))
            })
            .collect()
    }

    pub fn compose(&self, p: Prime, inner: &Matrix) -> Matrix {
        assert_eq!(self.cols, inner.rows);
        let cols: Vec<Vector> = (0..inner.cols)
            .map(|j| self.apply(p, &inner.column(j)))
            .collect();
        Matrix::from_columns(self.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn rank(&self, p: Prime) -> usize {
        Subspace::spanned_by(p, self.cols, self.data.iter().cloned()).dim()
    }

    /// Solve `self * x = b`, returning one solution if any.
    pub fn solve(&self, p: Prime, b: &[u32]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        // Row-reduce the augmented matrix [A | b].
        let width = self.cols + 1;
        let mut aug: Vec<Vector> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, &bi)| {
                let mut v = r.clone();
                v.push(bi);
                v
            })
            .collect();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            let Some(r) = (lead..aug.len()).find(|&r| aug[r][col] != 0) else {
                continue;
            };
            aug.swap(lead, r);
            let inv = p.inv(aug[lead][col]).unwrap();
            for x in aug[lead].iter_mut() {
                *x = p.mul(*x, inv);
            }
            for r in 0..aug.len() {
                if r != lead && aug[r][col] != 0 {
                    let f = p.neg(aug[r][col]);
                    for c in 0..width {
                        let v = p.mul(f, aug[lead][c]);
                        aug[r][c] = p.add(aug[r][c], v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        if aug[lead..].iter().any(|r| r[self.cols] != 0) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[r][self.cols];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn echelon_membership() {
        let s = Subspace::spanned_by(p(3), 3, vec![vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 2, 1]));
        assert!(!s.contains(&[0, 0, 1]));
        assert!(s.contains(&[1, 0, 2]));
        assert_eq!(s.pivots(), &[0, 1]);
    }

    #[test]
    fn reduce_is_canonical() {
        let s = Subspace::spanned_by(p(2), 2, vec![vec![1, 1]]);
        let mut a = vec![1, 0];
        let mut b = vec![0, 1];
        s.reduce(&mut a);
        s.reduce(&mut b);
        assert_eq!(a, b);
        assert_eq!(a, vec![0, 1]);
    }

    #[test]
    fn solve_and_rank() {
        let m = Matrix::from_columns(2, &[vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert_eq!(m.rank(p(5)), 2);
        let x = m.solve(p(5), &[3, 4]).unwrap();
        assert_eq!(m.apply(p(5), &x), vec![3, 4]);
        let singular = Matrix::from_columns(2, &[vec![1, 1], vec![2, 2]]);
        assert!(singular.solve(p(5), &[1, 0]).is_none());
    }
}
