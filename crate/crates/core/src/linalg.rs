//! Exact linear algebra: rational matrices for kernel/rank computations and
//! square matrices over ℚ[D] for operator inversion.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, Rat};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(rows: &[Vec<Rat>], ncols: usize, b: &[Rat]) -> Option<Vec<Rat>> {
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Matrix over ℚ[D] (entries are `MPoly` without λ-variables).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![MPoly::zero(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, MPoly::one(0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<MPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Invalid("ragged matrix".into()));
            }
            for (j, e) in row.into_iter().enumerate() {
                if e.nvars() != 0 {
                    return Err(Error::Invalid("matrix entries must be polynomials in D only".into()));
                }
                m.set(i, j, e);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: MPoly) {
        assert_eq!(v.nvars(), 0);
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MPoly::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().map(MPoly::degree).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::RankMismatch { what: "matrix product", expected: self.cols, got: other.rows });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = MPoly::zero(0);
                for k in 0..self.cols {
                    acc += &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &PolyMatrix, f: impl Fn(&MPoly, &MPoly) -> MPoly) -> Result<PolyMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::RankMismatch { what: "matrix shape", expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix { rows: self.rows - 1, cols: self.cols - 1, entries }
    }

    /// Determinant by cofactor expansion (ranks here are small).
    pub fn det(&self) -> Result<MPoly> {
        if self.rows != self.cols {
            return Err(Error::Invalid("determinant of a non-square matrix".into()));
        }
        Ok(self.det_square())
    }

    fn det_square(&self) -> MPoly {
        match self.rows {
            0 => MPoly::one(0),
            1 => self.get(0, 0).clone(),
            n => {
                let mut acc = MPoly::zero(0);
                for j in 0..n {
                    if self.get(0, j).is_zero() {
                        continue;
                    }
                    let term = self.get(0, j) * &self.minor(0, j).det_square();
                    if j % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                acc
            }
        }
    }

    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::Invalid("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut out = Self::zero(n, n);
        if n == 1 {
            out.set(0, 0, MPoly::one(0));
            return Ok(out);
        }
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det_square();
                out.set(j, i, if (i + j) % 2 == 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// `Some(k)` with `self^k = 0` when the matrix is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if self.rows != self.cols {
            return None;
        }
        let mut p = self.clone();
        for k in 1..=self.rows.max(1) {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self).ok()?;
        }
        if p.is_zero() {
            Some(self.rows + 1)
        } else {
            None
        }
    }

    /// Inverse over ℚ[D]: the determinant must be a nonzero rational constant.
    pub fn inverse(&self) -> Result<PolyMatrix> {
        let det = self.det()?;
        if det.is_zero() || !det.is_constant() {
            return Err(Error::NotInvertible(format!("determinant {det} is not a nonzero constant")));
        }
        let inv = Rat::one() / det.constant_term();
        Ok(self.adjugate()?.scale(&inv))
    }

    /// `(I + N)^{-1} = Σ (-N)^k` for nilpotent `N`.
    pub fn unipotent_inverse(n: &PolyMatrix) -> Option<PolyMatrix> {
        let k = n.nilpotency_index()?;
        let size = n.rows;
        let neg = n.scale(&-Rat::one());
        let mut acc = Self::identity(size);
        let mut power = Self::identity(size);
        for _ in 1..k {
            power = power.mul(&neg).ok()?;
            acc = acc.add(&power).ok()?;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, ratio};

    fn q(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn d(s: &str) -> MPoly {
        MPoly::parse(s, 0).unwrap()
    }

    #[test]
    fn rank_nullspace_solve() {
        let a = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[0, 1, 1])];
        assert_eq!(rank(&a, 3), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Rat = row.iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        let x = solve(&a, 3, &q(&[4, 8, 1])).unwrap();
        for (row, bi) in a.iter().zip(q(&[4, 8, 1])) {
            let dot: Rat = row.iter().zip(&x).map(|(p, r)| p * r).sum();
            assert_eq!(dot, bi);
        }
        assert!(solve(&a, 3, &q(&[1, 0, 0])).is_none());
    }

    #[test]
    fn poly_matrix_inverse() {
        let m = PolyMatrix::from_rows(vec![vec![d("2"), d("D")], vec![d("0"), d("1")]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), PolyMatrix::identity(2));
        assert_eq!(inv.get(0, 1), &MPoly::parse("-1/2*D", 0).unwrap());
        assert_eq!(inv.get(0, 0), &MPoly::constant(0, ratio(1, 2)));
        let bad = PolyMatrix::from_rows(vec![vec![d("D")]]).unwrap();
        assert!(matches!(bad.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn unipotent_series_agrees_with_adjugate() {
        let n = PolyMatrix::from_rows(vec![
            vec![d("0"), d("D"), d("1")],
            vec![d("0"), d("0"), d("D^2")],
            vec![d("0"), d("0"), d("0")],
        ])
        .unwrap();
        let a = PolyMatrix::identity(3).add(&n).unwrap();
        assert_eq!(PolyMatrix::unipotent_inverse(&n).unwrap(), a.inverse().unwrap());
        assert!(PolyMatrix::identity(2).nilpotency_index().is_none());
    }
}
