//! H-twisted Rota-Baxter operators: identity and graph checks, induced
//! algebra and bimodule, the twisted Hochschild differential, truncated
//! cohomology, and the perturbation constructions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::conformal::{check_associativity, semidirect_twisted, ConformalAlgebra, ConformalBimodule};
use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, Monomial, Rat};
use crate::hochschild::{hochschild_delta, sign, Cochain, Frame};
use crate::linalg::{self, PolyMatrix};
use crate::linf::{self, UCochain};
use crate::multilinear::{flatten, tuples, LambdaExpr, StructureMap};
use crate::report::CheckReport;

/// ℚ[∂]-linear `R : U → T`, stored as an arity-1 cochain whose entries are
/// polynomials in `D` only.
pub type TrbOperator = Cochain;

/// `R(x)` for an expression over any ambient ring.
pub fn apply_op(r: &Cochain, x: &LambdaExpr) -> Result<LambdaExpr> {
    r.evaluate(&[x], &[], x.nvars())
}

fn check_operator(frame: &Frame, r: &Cochain) -> Result<()> {
    if r.arity() != 1 || r.src_rank() != frame.u_rank() || r.tgt_rank() != frame.t_rank() {
        return Err(Error::RankMismatch { what: "operator U → T", expected: frame.u_rank(), got: r.src_rank() });
    }
    Ok(())
}

/// `R(u)_λ R(v) − R(u_λ R(v) + R(u)_λ v + H_λ(R(u), R(v)))` at basis pairs.
pub fn trb_residual(frame: &Frame, r: &Cochain, a: usize, b: usize) -> Result<LambdaExpr> {
    let l = MPoly::l(1, 1);
    let u = frame.bimodule.element(a, 1);
    let v = frame.bimodule.element(b, 1);
    let ru = apply_op(r, &u)?;
    let rv = apply_op(r, &v)?;
    let lhs = frame.algebra.product_at(&ru, &rv, &l)?;
    let mut inner = frame.bimodule.right_at(&u, &rv, &l)?;
    inner.add_assign(&frame.bimodule.left_at(&ru, &v, &l)?);
    inner.add_assign(&frame.cocycle.evaluate(&[&ru, &rv], std::slice::from_ref(&l), 1)?);
    Ok(lhs.sub(&apply_op(r, &inner)?))
}

pub fn check_trb(frame: &Frame, r: &Cochain) -> Result<CheckReport> {
    check_operator(frame, r)?;
    let pairs = tuples(&[frame.u_rank(), frame.u_rank()]);
    let items = crate::par::map_slice(&pairs, |p| {
        trb_residual(frame, r, p[0], p[1]).map(|res| ("twisted Rota-Baxter identity".to_string(), p.clone(), res))
    });
    Ok(CheckReport::from_residuals("twisted Rota-Baxter identity", items.into_iter().collect::<Result<_>>()?))
}

fn require_trb(frame: &Frame, r: &Cochain) -> Result<()> {
    let rep = check_trb(frame, r)?;
    match rep.first_failure() {
        Some(w) => Err(Error::NotTrb(format!("identity fails at {:?}", w.tuple))),
        None => Ok(()),
    }
}

/// The graph `{(R(u), u)}` is closed under the twisted semidirect product.
pub fn graph_check(frame: &Frame, r: &Cochain) -> Result<CheckReport> {
    check_operator(frame, r)?;
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let s = semidirect_twisted(&frame.algebra, &frame.bimodule, &frame.cocycle)?;
    let l = MPoly::l(1, 1);
    let graph = |a: usize| -> Result<LambdaExpr> {
        let x = frame.bimodule.element(a, 1);
        Ok(apply_op(r, &x)?.concat(&x))
    };
    let mut rep = CheckReport::new("graph subalgebra");
    for p in tuples(&[u, u]) {
        let z = s.product_at(&graph(p[0])?, &graph(p[1])?, &l)?;
        let res = z.slice(0..t).sub(&apply_op(r, &z.slice(t..t + u))?);
        rep.record("graph closure", &p, res);
    }
    Ok(rep)
}

/// `u *_λ v = u_λ R(v) + R(u)_λ v + H_λ(R(u), R(v))`.
pub fn induced_product(frame: &Frame, r: &Cochain) -> Result<ConformalAlgebra> {
    require_trb(frame, r)?;
    let u = frame.u_rank();
    let l = MPoly::l(1, 1);
    let product = StructureMap::from_fn(vec![u, u], u, |p| {
        let x = frame.bimodule.element(p[0], 1);
        let y = frame.bimodule.element(p[1], 1);
        let rx = apply_op(r, &x)?;
        let ry = apply_op(r, &y)?;
        let mut out = frame.bimodule.right_at(&x, &ry, &l)?;
        out.add_assign(&frame.bimodule.left_at(&rx, &y, &l)?);
        out.add_assign(&frame.cocycle.evaluate(&[&rx, &ry], std::slice::from_ref(&l), 1)?);
        Ok(out)
    })?;
    ConformalAlgebra::new(frame.bimodule.basis_names().to_vec(), product)
}

/// `l^R_λ(u,p) = R(u)_λ p − R(u_λ p + H_λ(R(u),p))`,
/// `r^R_λ(p,u) = p_λ R(u) − R(p_λ u + H_λ(p,R(u)))`.
pub fn induced_bimodule(frame: &Frame, r: &Cochain) -> Result<ConformalBimodule> {
    require_trb(frame, r)?;
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let l = MPoly::l(1, 1);
    let left = StructureMap::from_fn(vec![u, t], t, |x| {
        let uu = frame.bimodule.element(x[0], 1);
        let p = frame.algebra.element(x[1], 1);
        induced_left(frame, r, &uu, &p, &l)
    })?;
    let right = StructureMap::from_fn(vec![t, u], t, |x| {
        let p = frame.algebra.element(x[0], 1);
        let uu = frame.bimodule.element(x[1], 1);
        induced_right(frame, r, &p, &uu, &l)
    })?;
    ConformalBimodule::new(frame.algebra.basis_names().to_vec(), u, left, right)
}

pub fn induced_left(frame: &Frame, r: &Cochain, u: &LambdaExpr, p: &LambdaExpr, l: &MPoly) -> Result<LambdaExpr> {
    let ru = apply_op(r, u)?;
    let mut inner = frame.bimodule.right_at(u, p, l)?;
    inner.add_assign(&frame.cocycle.evaluate(&[&ru, p], std::slice::from_ref(l), u.nvars())?);
    Ok(frame.algebra.product_at(&ru, p, l)?.sub(&apply_op(r, &inner)?))
}

pub fn induced_right(frame: &Frame, r: &Cochain, p: &LambdaExpr, u: &LambdaExpr, l: &MPoly) -> Result<LambdaExpr> {
    let ru = apply_op(r, u)?;
    let mut inner = frame.bimodule.left_at(p, u, l)?;
    inner.add_assign(&frame.cocycle.evaluate(&[p, &ru], std::slice::from_ref(l), u.nvars())?);
    Ok(frame.algebra.product_at(p, &ru, l)?.sub(&apply_op(r, &inner)?))
}

/// Twisted Hochschild differential of `g : U^m → T`, term by term.
///
/// For `m = 0` the convention matches [`hochschild_delta`]: the left group
/// is evaluated at `λ = −∂` and the right group at `λ = 0`.
pub fn twisted_delta(frame: &Frame, r: &Cochain, g: &UCochain) -> Result<UCochain> {
    require_trb(frame, r)?;
    twisted_delta_unchecked(frame, r, g)
}

pub(crate) fn twisted_delta_unchecked(frame: &Frame, r: &Cochain, g: &UCochain) -> Result<UCochain> {
    if g.src_rank() != frame.u_rank() || g.tgt_rank() != frame.t_rank() {
        return Err(Error::RankMismatch { what: "Hom(U^n, T) cochain", expected: frame.u_rank(), got: g.src_rank() });
    }
    let m = g.arity();
    Cochain::from_fn(m + 1, frame.u_rank(), frame.t_rank(), |x| twisted_delta_entry(frame, r, g, x))
}

fn twisted_delta_entry(frame: &Frame, r: &Cochain, g: &UCochain, x: &[usize]) -> Result<LambdaExpr> {
    let (alg, bim, h) = (&frame.algebra, &frame.bimodule, &frame.cocycle);
    let m = g.arity();
    let nv = m;
    let u = |i: usize| bim.element(x[i - 1], nv);
    let lv = |k: usize| MPoly::l(nv, k);
    let left_group = |ru1: &LambdaExpr, u1: &LambdaExpr, val: &LambdaExpr, lam: &MPoly| -> Result<LambdaExpr> {
        let mut inner = bim.right_at(u1, val, lam)?;
        inner.add_assign(&h.evaluate(&[ru1, val], std::slice::from_ref(lam), nv)?);
        Ok(alg.product_at(ru1, val, lam)?.sub(&apply_op(r, &inner)?))
    };
    let right_group = |val: &LambdaExpr, un: &LambdaExpr, lam: &MPoly| -> Result<LambdaExpr> {
        let run = apply_op(r, un)?;
        let mut inner = bim.left_at(val, un, lam)?;
        inner.add_assign(&h.evaluate(&[val, &run], std::slice::from_ref(lam), nv)?);
        Ok(alg.product_at(val, &run, lam)?.sub(&apply_op(r, &inner)?))
    };
    if m == 0 {
        let val = g.entry(&[]).clone();
        let u1 = u(1);
        let ru1 = apply_op(r, &u1)?;
        let first = left_group(&ru1, &u1, &val, &-MPoly::d(0))?;
        let last = right_group(&val, &u1, &MPoly::zero(0))?;
        return Ok(first.sub(&last));
    }
    let u1 = u(1);
    let ru1 = apply_op(r, &u1)?;
    let rest: Vec<LambdaExpr> = (2..=m + 1).map(u).collect();
    let refs: Vec<&LambdaExpr> = rest.iter().collect();
    let lam: Vec<MPoly> = (2..=m).map(lv).collect();
    let val = g.evaluate(&refs, &lam, nv)?;
    let mut acc = left_group(&ru1, &u1, &val, &lv(1))?;
    for j in 1..=m {
        let (uj, uk) = (u(j), u(j + 1));
        let (ruj, ruk) = (apply_op(r, &uj)?, apply_op(r, &uk)?);
        let mut merged = bim.right_at(&uj, &ruk, &lv(j))?;
        merged.add_assign(&bim.left_at(&ruj, &uk, &lv(j))?);
        merged.add_assign(&h.evaluate(&[&ruj, &ruk], &[lv(j)], nv)?);
        let mut args: Vec<LambdaExpr> = (1..j).map(u).collect();
        args.push(merged);
        args.extend((j + 2..=m + 1).map(u));
        let lam: Vec<MPoly> = (1..m)
            .map(|s| if s < j { lv(s) } else if s == j { &lv(j) + &lv(j + 1) } else { lv(s + 1) })
            .collect();
        let refs: Vec<&LambdaExpr> = args.iter().collect();
        acc.add_assign(&g.evaluate(&refs, &lam, nv)?.signed(sign(j as i64)));
    }
    let head: Vec<LambdaExpr> = (1..=m).map(u).collect();
    let refs: Vec<&LambdaExpr> = head.iter().collect();
    let lam: Vec<MPoly> = (1..m).map(lv).collect();
    let val = g.evaluate(&refs, &lam, nv)?;
    let last = right_group(&val, &u(m + 1), &MPoly::l_sum(nv, 1, m))?;
    acc.add_assign(&last.signed(sign(m as i64 + 1)));
    Ok(acc)
}

/// Which differential a cohomology computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    TwistedDelta,
    DerivedBrackets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub truncation: u32,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries_in_window: usize,
    pub dim_quotient: usize,
    /// Largest degree of any structure constant; images of degree-`d`
    /// cochains have degree at most `d + growth`.
    pub growth: u32,
    pub stabilized: bool,
}

/// Exponent vectors over `nv` L-variables with total degree `<= d`.
pub fn monomials(nv: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; nv + 1];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if pos == cur.len() {
            out.push(Monomial::from_exps(cur));
            return;
        }
        for e in 0..=left {
            cur[pos] = e as u16;
            rec(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by_key(|m| (m.degree(), m.clone()));
    out
}

/// Monomial basis of `Hom(U^n, T)` truncated at total degree `d`.
pub fn cochain_basis(frame: &Frame, n: usize, d: u32) -> Vec<UCochain> {
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let nv = n.saturating_sub(1);
    let mut out = Vec::new();
    for tuple in tuples(&vec![u; n]) {
        for k in 0..t {
            for mono in monomials(nv, d) {
                let mut c = Cochain::zero(n, u, t);
                let mut v = LambdaExpr::zero(t, nv);
                v.set_coeff(k, MPoly::from_terms(nv, [(mono, Rat::from_integer(1.into()))]));
                c.set_entry(&tuple, v).expect("basis entry");
                out.push(c);
            }
        }
    }
    out
}

type Coord = (usize, usize, Monomial);

fn coordinates(c: &Cochain) -> BTreeMap<Coord, Rat> {
    let ranks = c.map().in_ranks().to_vec();
    let mut out = BTreeMap::new();
    for tuple in tuples(&ranks) {
        let idx = flatten(&ranks, &tuple);
        for (k, p) in c.entry(&tuple).coeffs().iter().enumerate() {
            for (m, q) in p.terms() {
                out.insert((idx, k, m.clone()), q.clone());
            }
        }
    }
    out
}

fn to_rows(vecs: &[BTreeMap<Coord, Rat>], keep: impl Fn(&Coord) -> bool) -> (Vec<Vec<Rat>>, usize) {
    let keys: BTreeSet<&Coord> = vecs.iter().flat_map(|v| v.keys()).filter(|k| keep(k)).collect();
    let index: BTreeMap<&Coord, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let rows = vecs
        .iter()
        .map(|v| {
            let mut row = vec![Rat::zero(); index.len()];
            for (k, q) in v {
                if let Some(&i) = index.get(k) {
                    row[i] = q.clone();
                }
            }
            row
        })
        .collect();
    (rows, index.len())
}

struct Differential<'a> {
    frame: &'a Frame,
    r: &'a Cochain,
    route: Route,
}

impl Differential<'_> {
    fn apply(&self, g: &UCochain) -> Result<UCochain> {
        match self.route {
            Route::TwistedDelta => twisted_delta_unchecked(self.frame, self.r, g),
            Route::DerivedBrackets => linf::d_r_unchecked(self.frame, self.r, g),
        }
    }

    fn images(&self, basis: &[UCochain]) -> Result<Vec<BTreeMap<Coord, Rat>>> {
        crate::par::map_slice(basis, |g| self.apply(g).map(|c| coordinates(&c))).into_iter().collect()
    }
}

/// Structure-constant degree growth of the data `(T, U, H, R)`.
pub fn growth(frame: &Frame, r: &Cochain) -> u32 {
    [
        frame.algebra.product().max_degree(),
        frame.bimodule.left().max_degree(),
        frame.bimodule.right().max_degree(),
        frame.cocycle.max_degree(),
        r.max_degree(),
    ]
    .into_iter()
    .max()
    .unwrap_or(0)
}

/// Truncated cohomology dimensions in degree `n` at truncation `d`.
pub fn cohomology(frame: &Frame, r: &Cochain, n: usize, d: u32, route: Route) -> Result<CohomologyReport> {
    require_trb(frame, r)?;
    let (dims, _) = cohomology_dims(frame, r, n, d, route)?;
    let (next, _) = cohomology_dims(frame, r, n, d + 1, route)?;
    Ok(CohomologyReport {
        degree: n,
        truncation: d,
        dim_cochains: dims.0,
        dim_cocycles: dims.1,
        dim_coboundaries_in_window: dims.2,
        dim_quotient: dims.1 - dims.2,
        growth: growth(frame, r),
        stabilized: dims.1 - dims.2 == next.1 - next.2,
    })
}

type Dims = (usize, usize, usize);

fn cohomology_dims(frame: &Frame, r: &Cochain, n: usize, d: u32, route: Route) -> Result<(Dims, Vec<UCochain>)> {
    let diff = Differential { frame, r, route };
    let basis = cochain_basis(frame, n, d);
    let images = diff.images(&basis)?;
    let (rows, ncols) = to_rows(&images, |_| true);
    let rank = linalg::rank(&rows, ncols);
    let cocycles = basis.len() - rank;
    let coboundaries = if n == 0 {
        0
    } else {
        let prev = cochain_basis(frame, n - 1, d);
        let vecs = diff.images(&prev)?;
        let (all, nall) = to_rows(&vecs, |_| true);
        let (high, nhigh) = to_rows(&vecs, |k| k.2.degree() > d);
        linalg::rank(&all, nall) - linalg::rank(&high, nhigh)
    };
    Ok(((basis.len(), cocycles, coboundaries), basis))
}

/// Basis of the degree-`<= d` cocycles in `Hom(U^n, T)`.
pub fn cocycle_basis(frame: &Frame, r: &Cochain, n: usize, d: u32) -> Result<Vec<UCochain>> {
    require_trb(frame, r)?;
    let diff = Differential { frame, r, route: Route::TwistedDelta };
    let basis = cochain_basis(frame, n, d);
    let images = diff.images(&basis)?;
    let (rows, ncols) = to_rows(&images, |_| true);
    // kernel of the map sending basis vector i to row i: solve Σ x_i row_i = 0
    let transposed: Vec<Vec<Rat>> = (0..ncols).map(|c| rows.iter().map(|row| row[c].clone()).collect()).collect();
    let kernel = linalg::nullspace(&transposed, basis.len());
    kernel
        .into_iter()
        .map(|coeffs| {
            let mut acc = Cochain::zero(n, frame.u_rank(), frame.t_rank());
            for (c, b) in coeffs.iter().zip(&basis) {
                if !c.is_zero() {
                    acc = acc.add(&b.scale(c))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

fn one_cochain_matrix(h: &Cochain, src: usize, tgt: usize) -> Result<PolyMatrix> {
    if h.arity() != 1 || h.src_rank() != src || h.tgt_rank() != tgt {
        return Err(Error::RankMismatch { what: "1-cochain", expected: src, got: h.src_rank() });
    }
    h.to_matrix()
}

/// `H′ = H + δh` together with the check that `(p,u) ↦ (p, u + h(p))`
/// intertwines `T ⋉^{H′} U` with `T ⋉^H U`.
pub fn twist_by_coboundary(frame: &Frame, h: &Cochain) -> Result<(Cochain, CheckReport)> {
    let (t, u) = (frame.t_rank(), frame.u_rank());
    one_cochain_matrix(h, t, u)?;
    let hp = frame.cocycle.add(&hochschild_delta(&frame.algebra, &frame.bimodule, h)?)?;
    let s = semidirect_twisted(&frame.algebra, &frame.bimodule, &frame.cocycle)?;
    let sp = semidirect_twisted(&frame.algebra, &frame.bimodule, &hp)?;
    let phi = |z: &LambdaExpr| -> Result<LambdaExpr> {
        let top = z.slice(0..t);
        let mut bottom = z.slice(t..t + u);
        bottom.add_assign(&apply_op(h, &top)?);
        Ok(top.concat(&bottom))
    };
    let l = MPoly::l(1, 1);
    let mut rep = CheckReport::new("semidirect isomorphism");
    for p in tuples(&[t + u, t + u]) {
        let x = LambdaExpr::basis(t + u, p[0], 1);
        let y = LambdaExpr::basis(t + u, p[1], 1);
        let lhs = phi(&sp.product_at(&x, &y, &l)?)?;
        let rhs = s.product_at(&phi(&x)?, &phi(&y)?, &l)?;
        rep.record("Φ(x ·′ y) = Φ(x) · Φ(y)", &p, lhs.sub(&rhs));
    }
    Ok((hp, rep))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbMode {
    /// `R ∘ (id + h′∘R)^{-1}` for a 1-cocycle `h′`, same `H`.
    Admissible,
    /// `R ∘ (id − h∘R)^{-1}` for any `h`, with `H + δh`.
    Twist,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub operator: TrbOperator,
    pub cocycle: Cochain,
    pub verified: CheckReport,
}

fn invert_unipotent_or_constant(n: &PolyMatrix) -> Result<PolyMatrix> {
    if let Some(inv) = PolyMatrix::unipotent_inverse(n) {
        return Ok(inv);
    }
    PolyMatrix::identity(n.rows()).add(n)?.inverse()
}

pub fn perturb_graph(frame: &Frame, r: &Cochain, h: &Cochain, mode: PerturbMode) -> Result<Perturbation> {
    check_operator(frame, r)?;
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let hm = one_cochain_matrix(h, t, u)?;
    let rm = r.to_matrix()?;
    let hr = hm.mul(&rm)?;
    let (n, cocycle) = match mode {
        PerturbMode::Admissible => {
            let dh = hochschild_delta(&frame.algebra, &frame.bimodule, h)?;
            if !dh.is_zero() {
                return Err(Error::NotCocycle("δh′ ≠ 0".into()));
            }
            (hr, frame.cocycle.clone())
        }
        PerturbMode::Twist => {
            let dh = hochschild_delta(&frame.algebra, &frame.bimodule, h)?;
            (hr.scale(&-Rat::from_integer(1.into())), frame.cocycle.add(&dh)?)
        }
    };
    let inv = invert_unipotent_or_constant(&n)?;
    let operator = Cochain::from_matrix(&rm.mul(&inv)?)?;
    let verified = check_trb(&frame.with_cocycle(cocycle.clone())?, &operator)?;
    Ok(Perturbation { operator, cocycle, verified })
}

/// `ψ = id + h′∘R` is an isomorphism from the product induced by `R` to the
/// product induced by the admissible perturbation of `R`.
pub fn induced_iso_check(frame: &Frame, r: &Cochain, h: &Cochain) -> Result<CheckReport> {
    let pert = perturb_graph(frame, r, h, PerturbMode::Admissible)?;
    let star = induced_product(frame, r)?;
    let star2 = induced_product(frame, &pert.operator)?;
    let psi = Cochain::from_matrix(&PolyMatrix::identity(frame.u_rank()).add(&h.to_matrix()?.mul(&r.to_matrix()?)?)?)?;
    let l = MPoly::l(1, 1);
    let mut rep = CheckReport::new("induced isomorphism");
    for p in tuples(&[frame.u_rank(), frame.u_rank()]) {
        let x = frame.bimodule.element(p[0], 1);
        let y = frame.bimodule.element(p[1], 1);
        let lhs = apply_op(&psi, &star.product_at(&x, &y, &l)?)?;
        let rhs = star2.product_at(&apply_op(&psi, &x)?, &apply_op(&psi, &y)?, &l)?;
        rep.record("ψ(u * v) = ψ(u) *′ ψ(v)", &p, lhs.sub(&rhs));
    }
    Ok(rep)
}

/// For invertible `h : T → U`, `R = h^{-1}` is an `H`-twisted Rota-Baxter
/// operator with `H = −δh`.
pub fn from_invertible_onecochain(frame: &Frame, h: &Cochain) -> Result<(TrbOperator, Cochain)> {
    let hm = one_cochain_matrix(h, frame.t_rank(), frame.u_rank())?;
    if hm.rows() != hm.cols() {
        return Err(Error::NotInvertible("T and U have different ranks".into()));
    }
    let r = Cochain::from_matrix(&hm.inverse()?)?;
    let cocycle = hochschild_delta(&frame.algebra, &frame.bimodule, h)?.neg();
    Ok((r, cocycle))
}

/// Convenience: the induced algebra passes the associativity check.
pub fn induced_product_is_associative(frame: &Frame, r: &Cochain) -> Result<bool> {
    Ok(check_associativity(&induced_product(frame, r)?).passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::check_bimodule;
    use crate::fixtures;

    fn d(s: &str) -> MPoly {
        MPoly::parse(s, 0).unwrap()
    }

    fn one_cochain(src: usize, tgt: usize, images: &[(usize, usize, &str)]) -> Cochain {
        let mut m = PolyMatrix::zero(tgt, src);
        for &(a, i, s) in images {
            m.set(i, a, d(s));
        }
        Cochain::from_matrix(&m).unwrap()
    }

    #[test]
    fn fixtures_are_trb() {
        for fx in [fixtures::fix_a(), fixtures::fix_b()] {
            assert!(check_trb(&fx.frame, &fx.r).unwrap().passed(), "{}", fx.name);
            assert!(graph_check(&fx.frame, &fx.r).unwrap().passed(), "{}", fx.name);
        }
        let fx = fixtures::fix_a();
        let bad = one_cochain(2, 2, &[(0, 0, "1")]);
        let rep = check_trb(&fx.frame, &bad).unwrap();
        assert_eq!(rep.first_failure().unwrap().tuple, vec![0, 0]);
        assert!(!graph_check(&fx.frame, &bad).unwrap().passed());
        assert!(check_trb(&fx.frame, &Cochain::zero(1, 2, 2)).unwrap().passed());
    }

    #[test]
    fn induced_structures_on_fixtures() {
        let fa = fixtures::fix_a();
        let star = induced_product(&fa.frame, &fa.r).unwrap();
        let two_u2 = LambdaExpr::basis(2, 1, 1).scale(&crate::exactpoly::rat(2));
        assert_eq!(star.product().entry(&[0, 0]), &two_u2);
        for p in [[0, 1], [1, 0], [1, 1]] {
            assert!(star.product().entry(&p).is_zero());
        }
        let bim = induced_bimodule(&fa.frame, &fa.r).unwrap();
        assert!(bim.left().entry(&[0, 0]).is_zero());
        assert!(check_bimodule(&star, &bim).passed());

        let fb = fixtures::fix_b();
        let star = induced_product(&fb.frame, &fb.r).unwrap();
        assert_eq!(star.product().entry(&[0, 0]), &LambdaExpr::basis(1, 0, 1));
        let bim = induced_bimodule(&fb.frame, &fb.r).unwrap();
        assert_eq!(bim.left().entry(&[0, 0]), &LambdaExpr::basis(1, 0, 1));
        assert!(check_bimodule(&star, &bim).passed());
    }

    #[test]
    fn twisted_delta_is_hochschild_delta_of_induced_structures() {
        for fx in [fixtures::fix_a(), fixtures::fix_b()] {
            let star = induced_product(&fx.frame, &fx.r).unwrap();
            let bim = induced_bimodule(&fx.frame, &fx.r).unwrap();
            let (t, u) = (fx.frame.t_rank(), fx.frame.u_rank());
            let gs = [
                Cochain::element(u, LambdaExpr::from_coeffs(0, (0..t).map(|k| d(&format!("D + {k}"))).collect()).unwrap())
                    .unwrap(),
                Cochain::from_fn(1, u, t, |x| {
                    LambdaExpr::from_coeffs(0, (0..t).map(|k| d(&format!("{}*D^2 + {k}", x[0] + 1))).collect())
                })
                .unwrap(),
                Cochain::from_fn(2, u, t, |x| {
                    LambdaExpr::from_coeffs(
                        1,
                        (0..t).map(|k| MPoly::parse(&format!("{}*L1 - D + {k}", x[0] + x[1]), 1).unwrap()).collect(),
                    )
                })
                .unwrap(),
            ];
            for g in &gs {
                let a = twisted_delta(&fx.frame, &fx.r, g).unwrap();
                let b = hochschild_delta(&star, &bim, g).unwrap();
                assert_eq!(a, b, "{} arity {}", fx.name, g.arity());
                // the two differentials differ by the sign (−1)^m
                let c = linf::d_r(&fx.frame, &fx.r, g).unwrap();
                assert_eq!(c, a.scale(&crate::exactpoly::rat(sign(g.arity() as i64))), "{} arity {}", fx.name, g.arity());
            }
        }
    }

    #[test]
    fn h0_matches_direct_enumeration_on_fix_a() {
        let fx = fixtures::fix_a();
        let rep = cohomology(&fx.frame, &fx.r, 0, 2, Route::TwistedDelta).unwrap();
        assert_eq!(rep.dim_cochains, 6);
        assert_eq!(rep.dim_cocycles, 6);
        assert_eq!(rep.dim_coboundaries_in_window, 0);
        let rep2 = cohomology(&fx.frame, &fx.r, 0, 2, Route::DerivedBrackets).unwrap();
        assert_eq!(rep, rep2);
    }

    #[test]
    fn fix_b_identity_is_not_a_cocycle() {
        let fx = fixtures::fix_b();
        let z = cocycle_basis(&fx.frame, &fx.r, 1, 0).unwrap();
        assert!(z.is_empty());
        let z1 = cocycle_basis(&fx.frame, &fx.r, 1, 1).unwrap();
        assert_eq!(z1.len(), 1);
        assert!(twisted_delta(&fx.frame, &fx.r, &z1[0]).unwrap().is_zero());
    }

    #[test]
    fn coboundary_twist_on_fix_b() {
        let fx = fixtures::fix_b();
        let id = one_cochain(1, 1, &[(0, 0, "1")]);
        let (hp, rep) = twist_by_coboundary(&fx.frame, &id).unwrap();
        assert!(hp.is_zero());
        assert!(rep.passed());
        let fa = fixtures::fix_a();
        let h = one_cochain(2, 2, &[(0, 1, "D"), (1, 0, "1")]);
        let (hp, rep) = twist_by_coboundary(&fa.frame, &h).unwrap();
        assert!(rep.passed());
        assert!(crate::hochschild::is_two_cocycle(&fa.frame.algebra, &fa.frame.bimodule, &hp).unwrap().passed());
    }

    #[test]
    fn perturbations_on_fix_a() {
        let fx = fixtures::fix_a();
        let hprime = one_cochain(2, 2, &[(0, 1, "D"), (1, 1, "1")]);
        let p = perturb_graph(&fx.frame, &fx.r, &hprime, PerturbMode::Admissible).unwrap();
        assert!(p.verified.passed());
        assert!(induced_iso_check(&fx.frame, &fx.r, &hprime).unwrap().passed());
        let not_cocycle = one_cochain(2, 2, &[(0, 1, "1")]);
        assert!(matches!(
            perturb_graph(&fx.frame, &fx.r, &not_cocycle, PerturbMode::Admissible),
            Err(Error::NotCocycle(_))
        ));
        // id − h∘R singular: h(e2) = u1 sends u1 to zero
        let h = one_cochain(2, 2, &[(1, 0, "1")]);
        assert!(matches!(perturb_graph(&fx.frame, &fx.r, &h, PerturbMode::Twist), Err(Error::NotInvertible(_))));
        let h = one_cochain(2, 2, &[(0, 0, "D"), (1, 1, "2")]);
        let p = perturb_graph(&fx.frame, &fx.r, &h, PerturbMode::Twist).unwrap();
        assert!(p.verified.passed());
    }

    #[test]
    fn from_invertible_onecochain_examples() {
        let fx = fixtures::fix_b();
        let (r, h) = from_invertible_onecochain(&fx.frame, &one_cochain(1, 1, &[(0, 0, "1")])).unwrap();
        assert_eq!(r, fx.r);
        assert_eq!(h, fx.frame.cocycle);
        let (r, h) = from_invertible_onecochain(&fx.frame, &one_cochain(1, 1, &[(0, 0, "2")])).unwrap();
        assert!(check_trb(&fx.frame.with_cocycle(h).unwrap(), &r).unwrap().passed());
        assert!(matches!(
            from_invertible_onecochain(&fx.frame, &one_cochain(1, 1, &[(0, 0, "D")])),
            Err(Error::NotInvertible(_))
        ));
    }
}
