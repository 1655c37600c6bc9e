//! λ-expressions and basis tables of multilinear maps between free
//! ℚ[∂]-modules, with the sesquilinear evaluation rule shared by products,
//! actions and cochains.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, Rat};

/// `Σ_k c_k(D, L1..Ln) x_k` in a free module of finite rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaExpr {
    nvars: usize,
    coeffs: Vec<MPoly>,
}

/// Elements are λ-expressions without λ-variables.
pub type Element = LambdaExpr;

impl LambdaExpr {
    pub fn zero(rank: usize, nvars: usize) -> Self {
        LambdaExpr { nvars, coeffs: vec![MPoly::zero(nvars); rank] }
    }

    pub fn basis(rank: usize, i: usize, nvars: usize) -> Self {
        let mut e = Self::zero(rank, nvars);
        e.coeffs[i] = MPoly::one(nvars);
        e
    }

    pub fn from_coeffs(nvars: usize, coeffs: Vec<MPoly>) -> Result<Self> {
        for c in &coeffs {
            if c.nvars() != nvars {
                return Err(crate::exactpoly::PolyError::VarCountMismatch(c.nvars(), nvars).into());
            }
        }
        Ok(LambdaExpr { nvars, coeffs })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &MPoly {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: MPoly) {
        assert_eq!(c.nvars(), self.nvars);
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MPoly::is_zero)
    }

    pub fn add_assign(&mut self, other: &LambdaExpr) {
        assert_eq!(self.rank(), other.rank(), "LambdaExpr rank mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &LambdaExpr) {
        assert_eq!(self.rank(), other.rank(), "LambdaExpr rank mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    pub fn add(&self, other: &LambdaExpr) -> LambdaExpr {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &LambdaExpr) -> LambdaExpr {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> LambdaExpr {
        LambdaExpr { nvars: self.nvars, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rat) -> LambdaExpr {
        LambdaExpr { nvars: self.nvars, coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn signed(&self, sign: i64) -> LambdaExpr {
        if sign < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul_poly(&self, p: &MPoly) -> LambdaExpr {
        LambdaExpr { nvars: self.nvars, coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }

    pub fn substitute(&self, images: &[MPoly], target_nvars: usize) -> Result<LambdaExpr> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute(images, target_nvars))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(LambdaExpr { nvars: target_nvars, coeffs })
    }

    /// Same expression over `n >= nvars` L-variables.
    pub fn embed(&self, n: usize) -> LambdaExpr {
        LambdaExpr { nvars: n, coeffs: self.coeffs.iter().map(|c| c.embed(n)).collect() }
    }

    /// Concatenate coordinates: `(self, other)` in a direct sum.
    pub fn concat(&self, other: &LambdaExpr) -> LambdaExpr {
        assert_eq!(self.nvars, other.nvars);
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        LambdaExpr { nvars: self.nvars, coeffs }
    }

    /// Coordinates `range` as an expression of smaller rank.
    pub fn slice(&self, range: std::ops::Range<usize>) -> LambdaExpr {
        LambdaExpr { nvars: self.nvars, coeffs: self.coeffs[range].to_vec() }
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.iter().map(MPoly::degree).max().unwrap_or(0)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| if c.num_terms() == 1 { format!("{c}·{n}") } else { format!("({c})·{n}") })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// All tuples of `ranks` in row-major order (last index fastest).
pub fn tuples(ranks: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = ranks.iter().product();
    (0..total).map(|idx| unflatten(ranks, idx)).collect()
}

pub fn unflatten(ranks: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; ranks.len()];
    for k in (0..ranks.len()).rev() {
        out[k] = idx % ranks[k];
        idx /= ranks[k];
    }
    out
}

pub fn flatten(ranks: &[usize], tuple: &[usize]) -> usize {
    tuple.iter().zip(ranks).fold(0, |acc, (&t, &r)| acc * r + t)
}

/// Basis table of a sesquilinear multilinear map `M_1 × ... × M_n → N`.
///
/// The entry at a basis tuple has coefficients in `D, L1..L(n-1)`; for
/// arity 0 the single entry is an element (no λ-variables).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMap {
    in_ranks: Vec<usize>,
    out_rank: usize,
    entries: Vec<LambdaExpr>,
}

impl StructureMap {
    pub fn zero(in_ranks: Vec<usize>, out_rank: usize) -> Self {
        let nv = in_ranks.len().saturating_sub(1);
        let count: usize = in_ranks.iter().product();
        StructureMap { entries: vec![LambdaExpr::zero(out_rank, nv); count], in_ranks, out_rank }
    }

    /// Build a table entry by entry; the closure may run in parallel.
    pub fn from_fn<F>(in_ranks: Vec<usize>, out_rank: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Result<LambdaExpr> + Sync + Send,
    {
        let nv = in_ranks.len().saturating_sub(1);
        let count: usize = in_ranks.iter().product();
        let ranks = in_ranks.clone();
        let entries = crate::par::map_range(count, |idx| f(&unflatten(&ranks, idx)));
        let entries = entries.into_iter().collect::<Result<Vec<_>>>()?;
        for e in &entries {
            if e.rank() != out_rank || e.nvars() != nv {
                return Err(Error::Invalid(format!(
                    "table entry has rank {} over {} variables, expected rank {out_rank} over {nv}",
                    e.rank(),
                    e.nvars()
                )));
            }
        }
        Ok(StructureMap { in_ranks, out_rank, entries })
    }

    pub fn arity(&self) -> usize {
        self.in_ranks.len()
    }

    pub fn in_ranks(&self) -> &[usize] {
        &self.in_ranks
    }

    pub fn out_rank(&self) -> usize {
        self.out_rank
    }

    /// Number of λ-variables in table entries.
    pub fn table_nvars(&self) -> usize {
        self.arity().saturating_sub(1)
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        tuples(&self.in_ranks)
    }

    pub fn entry(&self, tuple: &[usize]) -> &LambdaExpr {
        &self.entries[flatten(&self.in_ranks, tuple)]
    }

    pub fn entries(&self) -> &[LambdaExpr] {
        &self.entries
    }

    pub fn set_entry(&mut self, tuple: &[usize], value: LambdaExpr) -> Result<()> {
        if tuple.len() != self.arity() {
            return Err(Error::ArityMismatch { what: "table tuple", expected: self.arity(), got: tuple.len() });
        }
        for (&t, &r) in tuple.iter().zip(&self.in_ranks) {
            if t >= r {
                return Err(Error::IndexOutOfRange { index: t, rank: r });
            }
        }
        if value.rank() != self.out_rank {
            return Err(Error::RankMismatch { what: "table entry", expected: self.out_rank, got: value.rank() });
        }
        if value.nvars() != self.table_nvars() {
            return Err(crate::exactpoly::PolyError::VarCountMismatch(value.nvars(), self.table_nvars()).into());
        }
        let idx = flatten(&self.in_ranks, tuple);
        self.entries[idx] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LambdaExpr::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.entries.iter().map(LambdaExpr::max_degree).max().unwrap_or(0)
    }

    pub fn add(&self, other: &StructureMap) -> Result<StructureMap> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(StructureMap { in_ranks: self.in_ranks.clone(), out_rank: self.out_rank, entries })
    }

    pub fn sub(&self, other: &StructureMap) -> Result<StructureMap> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Ok(StructureMap { in_ranks: self.in_ranks.clone(), out_rank: self.out_rank, entries })
    }

    pub fn scale(&self, c: &Rat) -> StructureMap {
        StructureMap {
            in_ranks: self.in_ranks.clone(),
            out_rank: self.out_rank,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    fn check_same_shape(&self, other: &StructureMap) -> Result<()> {
        if self.in_ranks != other.in_ranks {
            return Err(Error::ArityMismatch { what: "table shape", expected: self.arity(), got: other.arity() });
        }
        if self.out_rank != other.out_rank {
            return Err(Error::RankMismatch { what: "table target", expected: self.out_rank, got: other.out_rank });
        }
        Ok(())
    }

    /// Evaluate at arbitrary arguments over `nvars` ambient L-variables.
    ///
    /// `lambdas[j]` is the value given to the table variable `L(j+1)`; it may
    /// be any polynomial in the ambient ring, including ones containing `D`.
    /// A coefficient `c(D)` of an interior argument `j` becomes
    /// `c(-lambdas[j])`; one of the last argument becomes `c(D + Σ lambdas)`.
    pub fn apply(&self, args: &[&LambdaExpr], lambdas: &[MPoly], nvars: usize) -> Result<LambdaExpr> {
        let n = self.arity();
        if args.len() != n {
            return Err(Error::ArityMismatch { what: "arguments", expected: n, got: args.len() });
        }
        if lambdas.len() != self.table_nvars() {
            return Err(Error::ArityMismatch { what: "λ-assignments", expected: self.table_nvars(), got: lambdas.len() });
        }
        for l in lambdas {
            if l.nvars() != nvars {
                return Err(crate::exactpoly::PolyError::VarCountMismatch(l.nvars(), nvars).into());
            }
        }
        let mut comps: Vec<Vec<(usize, MPoly)>> = Vec::with_capacity(n);
        let mut sum_l = MPoly::zero(nvars);
        for l in lambdas {
            sum_l += l;
        }
        for (j, a) in args.iter().enumerate() {
            if a.rank() != self.in_ranks[j] {
                return Err(Error::RankMismatch { what: "argument", expected: self.in_ranks[j], got: a.rank() });
            }
            if a.nvars() != nvars {
                return Err(crate::exactpoly::PolyError::VarCountMismatch(a.nvars(), nvars).into());
            }
            let d_image = if j + 1 < n { -&lambdas[j] } else { &MPoly::d(nvars) + &sum_l };
            let mut images = MPoly::identity_images(nvars);
            images[0] = d_image;
            let mut list = Vec::new();
            for (k, c) in a.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let t = if c.degree_in(0) == 0 { c.clone() } else { c.substitute(&images, nvars)? };
                if !t.is_zero() {
                    list.push((k, t));
                }
            }
            if list.is_empty() {
                return Ok(LambdaExpr::zero(self.out_rank, nvars));
            }
            comps.push(list);
        }
        let mut entry_images = vec![MPoly::d(nvars)];
        entry_images.extend(lambdas.iter().cloned());
        let table_nv = self.table_nvars();
        let mut cache: HashMap<usize, LambdaExpr> = HashMap::new();
        let mut out = LambdaExpr::zero(self.out_rank, nvars);
        let mut pos = vec![0usize; n];
        loop {
            let tuple: Vec<usize> = (0..n).map(|j| comps[j][pos[j]].0).collect();
            let idx = flatten(&self.in_ranks, &tuple);
            let raw = &self.entries[idx];
            if !raw.is_zero() {
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(idx) {
                    let sub = if table_nv == 0 && nvars == 0 {
                        raw.clone()
                    } else {
                        raw.substitute(&entry_images, nvars)?
                    };
                    e.insert(sub);
                }
                let entry = &cache[&idx];
                let mut scalar = MPoly::one(nvars);
                for j in 0..n {
                    scalar = &scalar * &comps[j][pos[j]].1;
                }
                out.add_assign(&entry.mul_poly(&scalar));
            }
            // odometer
            let mut j = n;
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                pos[j] += 1;
                if pos[j] < comps[j].len() {
                    break;
                }
                pos[j] = 0;
            }
        }
    }

    /// Evaluate at basis arguments with table variables `L(base+1)..` of an
    /// ambient ring with `nvars` L-variables.
    pub fn apply_basis(&self, tuple: &[usize], base: usize, nvars: usize) -> Result<LambdaExpr> {
        let args: Vec<LambdaExpr> =
            tuple.iter().zip(&self.in_ranks).map(|(&i, &r)| LambdaExpr::basis(r, i, nvars)).collect();
        let refs: Vec<&LambdaExpr> = args.iter().collect();
        let lambdas: Vec<MPoly> = (0..self.table_nvars()).map(|k| MPoly::l(nvars, base + k + 1)).collect();
        self.apply(&refs, &lambdas, nvars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> MPoly {
        MPoly::parse(s, n).unwrap()
    }

    /// e_λ e = (D + 2 L1) e on a rank-1 module (not associative, just a table).
    fn sample() -> StructureMap {
        let mut m = StructureMap::zero(vec![1, 1], 1);
        m.set_entry(&[0, 0], LambdaExpr::from_coeffs(1, vec![p("D + 2*L1", 1)]).unwrap()).unwrap();
        m
    }

    #[test]
    fn sesquilinearity_rules() {
        let m = sample();
        let de = LambdaExpr::from_coeffs(1, vec![p("D", 1)]).unwrap();
        let e = LambdaExpr::basis(1, 0, 1);
        let lam = [MPoly::l(1, 1)];
        // (∂e)_λ e = -λ e_λ e
        let left = m.apply(&[&de, &e], &lam, 1).unwrap();
        assert_eq!(left.coeff(0), &p("-L1*D - 2*L1^2", 1));
        // e_λ ∂e = (∂ + λ) e_λ e
        let right = m.apply(&[&e, &de], &lam, 1).unwrap();
        assert_eq!(right.coeff(0), &p("(D + L1)*(D + 2*L1)", 1));
    }

    #[test]
    fn lambda_may_contain_d() {
        let m = sample();
        let e = LambdaExpr::basis(1, 0, 0);
        let de = LambdaExpr::from_coeffs(0, vec![p("D", 0)]).unwrap();
        // e_{-∂} ∂e: last argument sees ∂ + λ = 0
        let v = m.apply(&[&e, &de], &[p("-D", 0)], 0).unwrap();
        assert!(v.is_zero());
        let w = m.apply(&[&e, &e], &[p("-D", 0)], 0).unwrap();
        assert_eq!(w.coeff(0), &p("-D", 0));
    }

    #[test]
    fn tuple_indexing_round_trips() {
        let ranks = [2, 3, 2];
        for (idx, t) in tuples(&ranks).iter().enumerate() {
            assert_eq!(flatten(&ranks, t), idx);
        }
    }

    #[test]
    fn arity_zero_and_errors() {
        let mut m = StructureMap::zero(vec![], 2);
        m.set_entry(&[], LambdaExpr::from_coeffs(0, vec![p("D", 0), p("1", 0)]).unwrap()).unwrap();
        let v = m.apply(&[], &[], 2).unwrap();
        assert_eq!(v.coeff(0), &p("D", 2));
        let s = sample();
        let e = LambdaExpr::basis(1, 0, 1);
        assert!(s.apply(&[&e], &[], 1).is_err());
        assert!(s.apply(&[&e, &e], &[], 1).is_err());
        assert!(s.clone().set_entry(&[1, 0], LambdaExpr::zero(1, 1)).is_err());
    }
}
