//! Conformal Hochschild cochains, the differential, insertion composition and
//! the Gerstenhaber bracket.

use crate::conformal::{ConformalAlgebra, ConformalBimodule};
use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, Rat};
use crate::multilinear::{tuples, LambdaExpr, StructureMap};
use crate::report::CheckReport;

pub fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// An `n`-cochain `M^n → N` between free modules of ranks `src_rank`,
/// `tgt_rank`. Arity 0 is an element of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    src_rank: usize,
    map: StructureMap,
}

impl Cochain {
    pub fn zero(arity: usize, src_rank: usize, tgt_rank: usize) -> Self {
        Cochain { src_rank, map: StructureMap::zero(vec![src_rank; arity], tgt_rank) }
    }

    pub fn from_map(src_rank: usize, map: StructureMap) -> Result<Self> {
        if map.in_ranks().iter().any(|&r| r != src_rank) {
            return Err(Error::RankMismatch { what: "cochain source", expected: src_rank, got: map.in_ranks()[0] });
        }
        Ok(Cochain { src_rank, map })
    }

    pub fn from_fn<F>(arity: usize, src_rank: usize, tgt_rank: usize, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> Result<LambdaExpr> + Sync + Send,
    {
        Ok(Cochain { src_rank, map: StructureMap::from_fn(vec![src_rank; arity], tgt_rank, f)? })
    }

    /// Arity-0 cochain holding the element `x`.
    pub fn element(src_rank: usize, x: LambdaExpr) -> Result<Self> {
        if x.nvars() != 0 {
            return Err(crate::exactpoly::PolyError::VarCountMismatch(x.nvars(), 0).into());
        }
        let mut map = StructureMap::zero(vec![], x.rank());
        map.set_entry(&[], x)?;
        Ok(Cochain { src_rank, map })
    }

    /// Arity-1 cochain from a matrix over ℚ[D]: `f(x_a) = Σ_i M[i][a] y_i`.
    pub fn from_matrix(m: &crate::linalg::PolyMatrix) -> Result<Self> {
        Self::from_fn(1, m.cols(), m.rows(), |t| {
            LambdaExpr::from_coeffs(0, (0..m.rows()).map(|i| m.get(i, t[0]).clone()).collect())
        })
    }

    /// Matrix of an arity-1 cochain.
    pub fn to_matrix(&self) -> Result<crate::linalg::PolyMatrix> {
        if self.arity() != 1 {
            return Err(Error::ArityMismatch { what: "matrix cochain", expected: 1, got: self.arity() });
        }
        let mut m = crate::linalg::PolyMatrix::zero(self.tgt_rank(), self.src_rank);
        for a in 0..self.src_rank {
            for (i, c) in self.map.entry(&[a]).coeffs().iter().enumerate() {
                m.set(i, a, c.clone());
            }
        }
        Ok(m)
    }

    pub fn arity(&self) -> usize {
        self.map.arity()
    }

    pub fn src_rank(&self) -> usize {
        self.src_rank
    }

    pub fn tgt_rank(&self) -> usize {
        self.map.out_rank()
    }

    pub fn map(&self) -> &StructureMap {
        &self.map
    }

    pub fn entry(&self, tuple: &[usize]) -> &LambdaExpr {
        self.map.entry(tuple)
    }

    pub fn set_entry(&mut self, tuple: &[usize], v: LambdaExpr) -> Result<()> {
        self.map.set_entry(tuple, v)
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        Ok(Cochain { src_rank: self.src_rank, map: self.map.add(&other.map)? })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        Ok(Cochain { src_rank: self.src_rank, map: self.map.sub(&other.map)? })
    }

    pub fn scale(&self, c: &Rat) -> Cochain {
        Cochain { src_rank: self.src_rank, map: self.map.scale(c) }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rat::from_integer(1.into()))
    }

    pub fn max_degree(&self) -> u32 {
        self.map.max_degree()
    }

    /// Evaluate with explicit λ-assignments.
    pub fn evaluate(&self, args: &[&LambdaExpr], lambdas: &[MPoly], nvars: usize) -> Result<LambdaExpr> {
        self.map.apply(args, lambdas, nvars)
    }

    /// Evaluate with the cochain's variables placed at `L(var_base+1)..`
    /// of an ambient ring with `nvars` L-variables.
    pub fn evaluate_at(&self, args: &[&LambdaExpr], var_base: usize, nvars: usize) -> Result<LambdaExpr> {
        let lambdas: Vec<MPoly> = (0..self.map.table_nvars()).map(|k| MPoly::l(nvars, var_base + k + 1)).collect();
        self.map.apply(args, &lambdas, nvars)
    }

    /// `f ∘_i g` (slot `i` is 1-based).
    pub fn compose_at(&self, g: &Cochain, i: usize) -> Result<Cochain> {
        let map = compose_maps(&self.map, &g.map, i)?;
        let src = if g.arity() > 0 { g.src_rank } else { self.src_rank };
        Cochain::from_map(src, map)
    }

    /// Gerstenhaber bracket `[f,g] = f∘g − (−1)^{(m−1)(n−1)} g∘f`.
    pub fn gerstenhaber(&self, g: &Cochain) -> Result<Cochain> {
        let (m, n) = (self.arity(), g.arity());
        if self.src_rank != self.tgt_rank() || g.src_rank != g.tgt_rank() || self.src_rank != g.src_rank {
            return Err(Error::RankMismatch { what: "Gerstenhaber bracket spaces", expected: self.src_rank, got: g.src_rank });
        }
        if m + n == 0 {
            return Err(Error::Invalid("bracket of two arity-0 cochains has arity −1".into()));
        }
        let arity = m + n - 1;
        let rank = self.src_rank;
        Cochain::from_fn(arity, rank, rank, |tuple| gerstenhaber_entry(&self.map, &g.map, tuple))
    }
}

/// Number of λ-variables of a cochain of the given arity.
fn nv_of(arity: usize) -> usize {
    arity.saturating_sub(1)
}

/// Value of `f ∘_i g` at a basis tuple of the composite.
///
/// The composite's variables are those of the concatenated argument list.
/// `g` reads the variables inside its group; `f` reads, at slot `i`, the sum
/// of the variables covering the group. Inserting an arity-0 `g` at the last
/// slot sets `f`'s last variable to `−D − (sum of the others)`.
pub fn compose_entry(f: &StructureMap, g: &StructureMap, i: usize, tuple: &[usize]) -> Result<LambdaExpr> {
    let (m, n) = (f.arity(), g.arity());
    if i == 0 || i > m {
        return Err(Error::BadSlot { slot: i, arity: m });
    }
    if f.in_ranks()[i - 1] != g.out_rank() {
        return Err(Error::RankMismatch { what: "insertion slot", expected: f.in_ranks()[i - 1], got: g.out_rank() });
    }
    let arity = m + n - 1;
    if tuple.len() != arity {
        return Err(Error::ArityMismatch { what: "composite tuple", expected: arity, got: tuple.len() });
    }
    let nv = nv_of(arity);
    let lv = |k: usize| MPoly::l(nv, k);
    let g_args: Vec<LambdaExpr> =
        (0..n).map(|q| LambdaExpr::basis(g.in_ranks()[q], tuple[i - 1 + q], nv)).collect();
    let g_refs: Vec<&LambdaExpr> = g_args.iter().collect();
    let g_lambdas: Vec<MPoly> = (0..nv_of(n)).map(|q| lv(i + q)).collect();
    let inner = g.apply(&g_refs, &g_lambdas, nv)?;
    if inner.is_zero() {
        return Ok(LambdaExpr::zero(f.out_rank(), nv));
    }
    let mut f_lambdas = Vec::with_capacity(nv_of(m));
    for s in 1..m {
        let v = if s < i {
            if n == 0 && i == m && s == m - 1 {
                -&(&MPoly::d(nv) + &MPoly::l_sum(nv, 1, m - 2))
            } else {
                lv(s)
            }
        } else if s == i {
            MPoly::l_sum(nv, i, i + n - 1)
        } else {
            lv(s + n - 1)
        };
        f_lambdas.push(v);
    }
    let mut f_args: Vec<LambdaExpr> = Vec::with_capacity(m);
    for s in 0..m {
        if s + 1 < i {
            f_args.push(LambdaExpr::basis(f.in_ranks()[s], tuple[s], nv));
        } else if s + 1 == i {
            f_args.push(inner.clone());
        } else {
            f_args.push(LambdaExpr::basis(f.in_ranks()[s], tuple[s + n - 1], nv));
        }
    }
    let f_refs: Vec<&LambdaExpr> = f_args.iter().collect();
    f.apply(&f_refs, &f_lambdas, nv)
}

/// Table of `f ∘_i g` for heterogeneous maps.
pub fn compose_maps(f: &StructureMap, g: &StructureMap, i: usize) -> Result<StructureMap> {
    let m = f.arity();
    if i == 0 || i > m {
        return Err(Error::BadSlot { slot: i, arity: m });
    }
    let mut in_ranks = f.in_ranks()[..i - 1].to_vec();
    in_ranks.extend_from_slice(g.in_ranks());
    in_ranks.extend_from_slice(&f.in_ranks()[i..]);
    StructureMap::from_fn(in_ranks, f.out_rank(), |t| compose_entry(f, g, i, t))
}

/// `f∘g = Σ_i (−1)^{(i−1)(n−1)} f∘_i g` at one tuple.
pub fn circ_entry(f: &StructureMap, g: &StructureMap, tuple: &[usize]) -> Result<LambdaExpr> {
    let n = g.arity() as i64;
    let nv = nv_of((f.arity() + g.arity()).saturating_sub(1));
    let mut acc = LambdaExpr::zero(f.out_rank(), nv);
    for i in 1..=f.arity() {
        let term = compose_entry(f, g, i, tuple)?;
        acc.add_assign(&term.signed(sign((i as i64 - 1) * (n - 1))));
    }
    Ok(acc)
}

pub fn gerstenhaber_entry(f: &StructureMap, g: &StructureMap, tuple: &[usize]) -> Result<LambdaExpr> {
    let (m, n) = (f.arity() as i64, g.arity() as i64);
    let a = circ_entry(f, g, tuple)?;
    let b = circ_entry(g, f, tuple)?;
    Ok(a.sub(&b.signed(sign((m - 1) * (n - 1)))))
}

/// Coefficient data `(T, U, H)`: an algebra, a bimodule over it and a
/// 2-cochain `H : T × T → U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub algebra: ConformalAlgebra,
    pub bimodule: ConformalBimodule,
    pub cocycle: Cochain,
}

impl Frame {
    pub fn new(algebra: ConformalAlgebra, bimodule: ConformalBimodule, cocycle: Cochain) -> Result<Self> {
        let (t, u) = (algebra.rank(), bimodule.rank());
        if bimodule.algebra_rank() != t {
            return Err(Error::RankMismatch { what: "bimodule algebra", expected: t, got: bimodule.algebra_rank() });
        }
        if cocycle.arity() != 2 {
            return Err(Error::ArityMismatch { what: "twisting cochain", expected: 2, got: cocycle.arity() });
        }
        if cocycle.src_rank() != t || cocycle.tgt_rank() != u {
            return Err(Error::RankMismatch { what: "twisting cochain", expected: t, got: cocycle.src_rank() });
        }
        Ok(Frame { algebra, bimodule, cocycle })
    }

    pub fn untwisted(algebra: ConformalAlgebra, bimodule: ConformalBimodule) -> Result<Self> {
        let h = Cochain::zero(2, algebra.rank(), bimodule.rank());
        Self::new(algebra, bimodule, h)
    }

    pub fn t_rank(&self) -> usize {
        self.algebra.rank()
    }

    pub fn u_rank(&self) -> usize {
        self.bimodule.rank()
    }

    pub fn with_cocycle(&self, h: Cochain) -> Result<Frame> {
        Frame::new(self.algebra.clone(), self.bimodule.clone(), h)
    }
}

/// Hochschild differential of `f : T^n → U`.
///
/// For `n = 0` the element `x` goes to the 1-cochain
/// `p ↦ p_{−∂} x − x_0 p`, the convention under which `δ` is
/// `(−1)^{n−1}[μ, ·]` in every degree.
pub fn hochschild_delta(t: &ConformalAlgebra, u: &ConformalBimodule, f: &Cochain) -> Result<Cochain> {
    if f.src_rank() != t.rank() || f.tgt_rank() != u.rank() || u.algebra_rank() != t.rank() {
        return Err(Error::RankMismatch { what: "cochain spaces", expected: t.rank(), got: f.src_rank() });
    }
    let n = f.arity();
    Cochain::from_fn(n + 1, t.rank(), u.rank(), |p| delta_entry(t, u, f, p))
}

fn delta_entry(t: &ConformalAlgebra, u: &ConformalBimodule, f: &Cochain, p: &[usize]) -> Result<LambdaExpr> {
    let n = f.arity();
    let nv = n;
    let e = |i: usize| t.element(p[i], nv);
    let lv = |k: usize| MPoly::l(nv, k);
    if n == 0 {
        let x = f.entry(&[]).embed(0);
        let first = u.left_at(&e(0), &x, &-MPoly::d(0))?;
        let last = u.right_at(&x, &e(0), &MPoly::zero(0))?;
        return Ok(first.sub(&last));
    }
    // p1_{λ1} f_{λ2..λn}(p2..p_{n+1})
    let args: Vec<LambdaExpr> = (1..=n).map(e).collect();
    let refs: Vec<&LambdaExpr> = args.iter().collect();
    let lam: Vec<MPoly> = (2..=n).map(lv).collect();
    let inner = f.evaluate(&refs, &lam, nv)?;
    let mut acc = u.left_at(&e(0), &inner, &lv(1))?;
    // middle terms
    for j in 1..=n {
        let prod = t.product_at(&e(j - 1), &e(j), &lv(j))?;
        let mut args: Vec<LambdaExpr> = Vec::with_capacity(n);
        for s in 1..j {
            args.push(e(s - 1));
        }
        args.push(prod);
        for s in j + 2..=n + 1 {
            args.push(e(s - 1));
        }
        let mut lam = Vec::with_capacity(n - 1);
        for s in 1..n {
            lam.push(if s < j {
                lv(s)
            } else if s == j {
                &lv(j) + &lv(j + 1)
            } else {
                lv(s + 1)
            });
        }
        let refs: Vec<&LambdaExpr> = args.iter().collect();
        let term = f.evaluate(&refs, &lam, nv)?;
        acc.add_assign(&term.signed(sign(j as i64)));
    }
    // (−1)^{n+1} f_{λ1..λ(n−1)}(p1..pn)_{λ1+..+λn} p_{n+1}
    let args: Vec<LambdaExpr> = (0..n).map(e).collect();
    let refs: Vec<&LambdaExpr> = args.iter().collect();
    let lam: Vec<MPoly> = (1..n).map(lv).collect();
    let inner = f.evaluate(&refs, &lam, nv)?;
    let last = u.right_at(&inner, &e(n), &MPoly::l_sum(nv, 1, n))?;
    acc.add_assign(&last.signed(sign(n as i64 + 1)));
    Ok(acc)
}

/// `δH = 0`, with the first violating triple as witness.
pub fn is_two_cocycle(t: &ConformalAlgebra, u: &ConformalBimodule, h: &Cochain) -> Result<CheckReport> {
    if h.arity() != 2 {
        return Err(Error::ArityMismatch { what: "2-cocycle", expected: 2, got: h.arity() });
    }
    let d = hochschild_delta(t, u, h)?;
    let mut rep = CheckReport::new("2-cocycle");
    for tuple in tuples(&[t.rank(); 3]) {
        rep.record("δH", &tuple, d.entry(&tuple).clone());
    }
    Ok(rep)
}

/// Lift of `f : T^n → U` to a cochain on the semidirect sum `T ⊕ U`.
pub fn lift_tu(f: &Cochain, t: usize, u: usize) -> Result<Cochain> {
    let n = f.arity();
    let nv = nv_of(n);
    Cochain::from_fn(n, t + u, t + u, |x| {
        if x.iter().all(|&i| i < t) {
            Ok(LambdaExpr::zero(t, nv).concat(f.entry(x)))
        } else {
            Ok(LambdaExpr::zero(t + u, nv))
        }
    })
}
