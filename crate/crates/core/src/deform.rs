//! Linear and formal deformations of a twisted Rota-Baxter operator:
//! coefficient equations, morphisms, order-one equivalences, Nijenhuis
//! elements and truncated rigidity witnesses.
//!
//! Equations with a free `λ` (and `μ`) are checked as polynomial identities
//! in those formal variables, `λ = L1` and `μ = L2`. A subscript `−∂−λ` is
//! realised by evaluating at the polynomial `−D − λ`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, Rat};
use crate::hochschild::{Cochain, Frame};
use crate::linalg::{self, PolyMatrix};
use crate::linf;
use crate::multilinear::{tuples, LambdaExpr};
use crate::report::CheckReport;
use crate::trb::{self, apply_op, check_trb, induced_left, induced_right, TrbOperator};

/// `R_t = Σ tⁱ R_i` truncated at the stored order; `R_0` is the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationSeries {
    coefficients: Vec<TrbOperator>,
}

impl DeformationSeries {
    pub fn new(coefficients: Vec<TrbOperator>) -> Result<Self> {
        let first = coefficients.first().ok_or_else(|| Error::Invalid("empty deformation series".into()))?;
        for c in &coefficients {
            if c.arity() != 1 || c.src_rank() != first.src_rank() || c.tgt_rank() != first.tgt_rank() {
                return Err(Error::RankMismatch { what: "series coefficient", expected: first.src_rank(), got: c.src_rank() });
            }
        }
        Ok(DeformationSeries { coefficients })
    }

    pub fn linear(r: &TrbOperator, r1: &TrbOperator) -> Result<Self> {
        Self::new(vec![r.clone(), r1.clone()])
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[TrbOperator] {
        &self.coefficients
    }

    /// `R_i`, zero beyond the stored order.
    pub fn coefficient(&self, i: usize) -> TrbOperator {
        self.coefficients.get(i).cloned().unwrap_or_else(|| {
            let b = &self.coefficients[0];
            Cochain::zero(1, b.src_rank(), b.tgt_rank())
        })
    }
}

/// Order-`n` deformation equation at `(u1, u2)`:
/// `Σ R_i(u1)_λ R_j(u2) − Σ R_i(u1_λ R_j(u2) + R_j(u1)_λ u2) − Σ R_i H_λ(R_j u1, R_k u2)`.
fn order_residual(frame: &Frame, s: &DeformationSeries, n: usize, a: usize, b: usize) -> Result<LambdaExpr> {
    let l = MPoly::l(1, 1);
    let u1 = frame.bimodule.element(a, 1);
    let u2 = frame.bimodule.element(b, 1);
    let ru1: Vec<LambdaExpr> = (0..=n).map(|i| apply_op(&s.coefficient(i), &u1)).collect::<Result<_>>()?;
    let ru2: Vec<LambdaExpr> = (0..=n).map(|i| apply_op(&s.coefficient(i), &u2)).collect::<Result<_>>()?;
    let mut acc = LambdaExpr::zero(frame.t_rank(), 1);
    for i in 0..=n {
        let j = n - i;
        acc.add_assign(&frame.algebra.product_at(&ru1[i], &ru2[j], &l)?);
        let mut inner = frame.bimodule.right_at(&u1, &ru2[j], &l)?;
        inner.add_assign(&frame.bimodule.left_at(&ru1[j], &u2, &l)?);
        for k in 0..=j {
            inner.add_assign(&frame.cocycle.evaluate(&[&ru1[k], &ru2[j - k]], std::slice::from_ref(&l), 1)?);
        }
        acc.sub_assign(&apply_op(&s.coefficient(i), &inner)?);
    }
    Ok(acc)
}

/// One report per order `0..=up_to`; order 0 is the identity for `R_0`.
pub fn check_formal_deformation(frame: &Frame, series: &DeformationSeries, up_to: usize) -> Result<Vec<CheckReport>> {
    let u = frame.u_rank();
    if series.coefficient(0).src_rank() != u || series.coefficient(0).tgt_rank() != frame.t_rank() {
        return Err(Error::RankMismatch { what: "series operator U → T", expected: u, got: series.coefficient(0).src_rank() });
    }
    (0..=up_to)
        .map(|n| {
            let name = format!("deformation equation, order {n}");
            let mut rep = CheckReport::new(name.clone());
            for p in tuples(&[u, u]) {
                rep.record(&name, &p, order_residual(frame, series, n, p[0], p[1])?);
            }
            Ok(rep)
        })
        .collect()
}

/// Coefficients of `t⁰..t³` in the identity for `R + t R1`.
pub fn check_linear_deformation(frame: &Frame, r: &TrbOperator, r1: &TrbOperator) -> Result<Vec<CheckReport>> {
    check_formal_deformation(frame, &DeformationSeries::linear(r, r1)?, 3)
}

/// `d_R(R1) = 0`, cross-checked against the twisted Hochschild differential.
pub fn is_one_cocycle(frame: &Frame, r: &TrbOperator, r1: &TrbOperator) -> Result<bool> {
    let via_brackets = linf::d_r(frame, r, r1)?.is_zero();
    let via_delta = trb::twisted_delta(frame, r, r1)?.is_zero();
    if via_brackets != via_delta {
        return Err(Error::Invalid("derived-bracket and explicit differentials disagree".into()));
    }
    Ok(via_brackets)
}

/// `d_R(p)` for an element `p ∈ T`, normalised so that
/// `d_R(p)(u) = R(ψ₁(u)) − φ₁(R(u))` at `λ = 0`.
pub fn element_differential(frame: &Frame, r: &TrbOperator, p: &LambdaExpr) -> Result<TrbOperator> {
    trb::twisted_delta(frame, r, &Cochain::element(frame.u_rank(), p.clone())?)
}

/// A pair of ℚ[∂]-linear maps `φ : T → T`, `ψ : U → U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismPair {
    pub phi: PolyMatrix,
    pub psi: PolyMatrix,
}

impl MorphismPair {
    pub fn identity(t: usize, u: usize) -> Self {
        MorphismPair { phi: PolyMatrix::identity(t), psi: PolyMatrix::identity(u) }
    }
}

/// Checks `φ(p_λ q) = φ(p)_λ φ(q)`, `ψ(p_λ u) = φ(p)_λ ψ(u)`,
/// `ψ(u_λ p) = ψ(u)_λ φ(p)`, `ψ∘H_λ = H′_λ∘(φ⊗φ)` and `φ∘R = R′∘ψ`.
pub fn check_morphism(
    pair: &MorphismPair,
    frame: &Frame,
    r: &TrbOperator,
    r2: &TrbOperator,
    h2: &Cochain,
) -> Result<Vec<CheckReport>> {
    let (t, u) = (frame.t_rank(), frame.u_rank());
    if pair.phi.rows() != t || pair.phi.cols() != t || pair.psi.rows() != u || pair.psi.cols() != u {
        return Err(Error::RankMismatch { what: "morphism pair", expected: t, got: pair.phi.rows() });
    }
    let target = frame.with_cocycle(h2.clone())?;
    let phi = Cochain::from_matrix(&pair.phi)?;
    let psi = Cochain::from_matrix(&pair.psi)?;
    let l = MPoly::l(1, 1);
    let (alg, bim) = (&frame.algebra, &frame.bimodule);

    let mut algebra = CheckReport::new("φ(p_λ q) = φ(p)_λ φ(q)");
    for x in tuples(&[t, t]) {
        let (p, q) = (alg.element(x[0], 1), alg.element(x[1], 1));
        let lhs = apply_op(&phi, &alg.product_at(&p, &q, &l)?)?;
        let rhs = alg.product_at(&apply_op(&phi, &p)?, &apply_op(&phi, &q)?, &l)?;
        algebra.record("algebra morphism", &x, lhs.sub(&rhs));
    }
    let mut action = CheckReport::new("ψ(p_λ u) = φ(p)_λ ψ(u)");
    for x in tuples(&[t, u]) {
        let (p, v) = (alg.element(x[0], 1), bim.element(x[1], 1));
        let (fp, sv) = (apply_op(&phi, &p)?, apply_op(&psi, &v)?);
        let lhs = apply_op(&psi, &bim.left_at(&p, &v, &l)?)?;
        action.record("left action", &x, lhs.sub(&bim.left_at(&fp, &sv, &l)?));
        let lhs = apply_op(&psi, &bim.right_at(&v, &p, &l)?)?;
        action.record("right action", &x, lhs.sub(&bim.right_at(&sv, &fp, &l)?));
    }
    let mut twist = CheckReport::new("ψ∘H_λ = H′_λ∘(φ⊗φ)");
    for x in tuples(&[t, t]) {
        let (p, q) = (alg.element(x[0], 1), alg.element(x[1], 1));
        let lhs = apply_op(&psi, &frame.cocycle.evaluate(&[&p, &q], std::slice::from_ref(&l), 1)?)?;
        let rhs = target.cocycle.evaluate(&[&apply_op(&phi, &p)?, &apply_op(&phi, &q)?], std::slice::from_ref(&l), 1)?;
        twist.record("twisting cocycle", &x, lhs.sub(&rhs));
    }
    let mut operator = CheckReport::new("φ∘R = R′∘ψ");
    for a in 0..u {
        let v = bim.element(a, 0);
        let lhs = apply_op(&phi, &apply_op(r, &v)?)?;
        let rhs = apply_op(r2, &apply_op(&psi, &v)?)?;
        operator.record("operator intertwining", &[a], lhs.sub(&rhs));
    }
    Ok(vec![algebra, action, twist, operator])
}

fn minus_d_minus(lam: &MPoly) -> MPoly {
    -&(&MPoly::d(lam.nvars()) + lam)
}

/// `φ₁_λ(q) = p_λ q − q_{−∂−λ} p`.
pub fn phi1(frame: &Frame, p: &LambdaExpr, q: &LambdaExpr, lam: &MPoly) -> Result<LambdaExpr> {
    let nv = q.nvars();
    let p = p.embed(nv);
    let alg = &frame.algebra;
    Ok(alg.product_at(&p, q, lam)?.sub(&alg.product_at(q, &p, &minus_d_minus(lam))?))
}

/// `ψ₁_λ(u) = p_λ u − u_{−∂−λ} p + H_λ(p, R(u)) − H_{−∂−λ}(R(u), p)`.
pub fn psi1(frame: &Frame, r: &TrbOperator, p: &LambdaExpr, u: &LambdaExpr, lam: &MPoly) -> Result<LambdaExpr> {
    let nv = u.nvars();
    let p = p.embed(nv);
    let ru = apply_op(r, u)?;
    let shifted = minus_d_minus(lam);
    let mut out = frame.bimodule.left_at(&p, u, lam)?;
    out.sub_assign(&frame.bimodule.right_at(u, &p, &shifted)?);
    out.add_assign(&frame.cocycle.evaluate(&[&p, &ru], std::slice::from_ref(lam), nv)?);
    out.sub_assign(&frame.cocycle.evaluate(&[&ru, &p], &[shifted], nv)?);
    Ok(out)
}

/// Map `f_λ` with `f_λ(c(∂) x) = c(∂+λ) f_λ(x)`, stored by its values on
/// basis vectors with `λ = L1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalLinearMap {
    src_rank: usize,
    images: Vec<LambdaExpr>,
}

impl ConformalLinearMap {
    pub fn from_fn(src_rank: usize, f: impl Fn(usize) -> Result<LambdaExpr>) -> Result<Self> {
        let images = (0..src_rank).map(f).collect::<Result<Vec<_>>>()?;
        Ok(ConformalLinearMap { src_rank, images })
    }

    pub fn src_rank(&self) -> usize {
        self.src_rank
    }

    pub fn images(&self) -> &[LambdaExpr] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(LambdaExpr::is_zero)
    }

    pub fn apply(&self, x: &LambdaExpr, lam: &MPoly, tgt_rank: usize) -> Result<LambdaExpr> {
        let nv = x.nvars();
        let mut shift = MPoly::identity_images(nv);
        shift[0] = &MPoly::d(nv) + lam;
        let at = [MPoly::d(nv), lam.clone()];
        let mut acc = LambdaExpr::zero(tgt_rank, nv);
        for (i, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = self.images[i].substitute(&at, nv)?;
            acc.add_assign(&img.mul_poly(&c.substitute(&shift, nv)?));
        }
        Ok(acc)
    }
}

/// Order-one coefficients `(φ₁, ψ₁)` of the equivalence generated by `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalencePair {
    pub p: LambdaExpr,
    pub phi1: ConformalLinearMap,
    pub psi1: ConformalLinearMap,
}

pub fn equivalence_pair(frame: &Frame, r: &TrbOperator, p: &LambdaExpr) -> Result<EquivalencePair> {
    check_element(frame, p)?;
    let l = MPoly::l(1, 1);
    let phi = ConformalLinearMap::from_fn(frame.t_rank(), |i| phi1(frame, p, &frame.algebra.element(i, 1), &l))?;
    let psi = ConformalLinearMap::from_fn(frame.u_rank(), |i| psi1(frame, r, p, &frame.bimodule.element(i, 1), &l))?;
    Ok(EquivalencePair { p: p.clone(), phi1: phi, psi1: psi })
}

fn check_element(frame: &Frame, p: &LambdaExpr) -> Result<()> {
    if p.rank() != frame.t_rank() || p.nvars() != 0 {
        return Err(Error::RankMismatch { what: "element of T", expected: frame.t_rank(), got: p.rank() });
    }
    Ok(())
}

/// The conditions on `(φ₁, ψ₁)` and `(R1, R1′)` for `R + tR1` and
/// `R + tR1′` to be equivalent through the pair generated by `p`.
/// Identities in two formal variables use `λ = L1`, `μ = L2`.
fn equivalence_conditions(
    frame: &Frame,
    r: &TrbOperator,
    r1: &TrbOperator,
    r1p: &TrbOperator,
    p: &LambdaExpr,
) -> Result<Vec<CheckReport>> {
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let (alg, bim, h) = (&frame.algebra, &frame.bimodule, &frame.cocycle);
    let (lam, mu) = (MPoly::l(2, 1), MPoly::l(2, 2));
    let lm = &lam + &mu;

    let mut square = CheckReport::new("(p_λ q − q_{−∂−λ} p)_μ (p_λ r − r_{−∂−λ} p) = 0");
    let mut derivation = CheckReport::new("ψ₁ intertwines the left action and H");
    let mut vanishing = CheckReport::new("products of order-one terms vanish");
    for x in tuples(&[t, t]) {
        let (q, rr) = (alg.element(x[0], 2), alg.element(x[1], 2));
        let (fq, fr) = (phi1(frame, p, &q, &lam)?, phi1(frame, p, &rr, &lam)?);
        square.record("square of the inner derivation", &x, alg.product_at(&fq, &fr, &mu)?);
        let hqr = h.evaluate(&[&q, &rr], std::slice::from_ref(&mu), 2)?;
        let lhs = psi1(frame, r, p, &hqr, &lam)?;
        let mut rhs = h.evaluate(&[&fq, &rr], std::slice::from_ref(&lm), 2)?;
        rhs.add_assign(&h.evaluate(&[&q, &fr], std::slice::from_ref(&mu), 2)?);
        derivation.record("ψ₁ H_μ(q,r) = H_{λ+μ}(φ₁q, r) + H_μ(q, φ₁r)", &x, lhs.sub(&rhs));
        vanishing.record("H_{λ+μ}(φ₁q, φ₁r) = 0", &x, h.evaluate(&[&fq, &fr], std::slice::from_ref(&lm), 2)?);
    }
    for x in tuples(&[t, u]) {
        let (q, v) = (alg.element(x[0], 2), bim.element(x[1], 2));
        let fq = phi1(frame, p, &q, &lam)?;
        let sv = psi1(frame, r, p, &v, &lam)?;
        let lhs = psi1(frame, r, p, &bim.left_at(&q, &v, &mu)?, &lam)?;
        let mut rhs = bim.left_at(&fq, &v, &lm)?;
        rhs.add_assign(&bim.left_at(&q, &sv, &mu)?);
        derivation.record("ψ₁(q_μ u) = (φ₁q)_{λ+μ} u + q_μ ψ₁(u)", &x, lhs.sub(&rhs));
        vanishing.record("(φ₁q)_μ ψ₁(u) = 0", &x, bim.left_at(&fq, &sv, &mu)?);
    }
    let mut operator = CheckReport::new("R1 + φ₁∘R = R∘ψ₁ + R1′ and φ₁∘R1 = R1′∘ψ₁");
    let l = MPoly::l(1, 1);
    for a in 0..u {
        let v = bim.element(a, 1);
        let sv = psi1(frame, r, p, &v, &l)?;
        let mut lhs = apply_op(r1, &v)?;
        lhs.add_assign(&phi1(frame, p, &apply_op(r, &v)?, &l)?);
        let mut rhs = apply_op(r, &sv)?;
        rhs.add_assign(&apply_op(r1p, &v)?);
        operator.record("first order", &[a], lhs.sub(&rhs));
        let lhs = phi1(frame, p, &apply_op(r1, &v)?, &l)?;
        operator.record("second order", &[a], lhs.sub(&apply_op(r1p, &sv)?));
    }
    Ok(vec![square, derivation, vanishing, operator])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub conditions: Vec<CheckReport>,
    /// `R1 − R1′ = d_R(p)`, evaluated only when every condition holds.
    pub difference_is_dr: Option<bool>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(CheckReport::passed) && self.difference_is_dr != Some(false)
    }
}

pub fn check_linear_equivalence(
    frame: &Frame,
    r: &TrbOperator,
    r1: &TrbOperator,
    r1p: &TrbOperator,
    p: &LambdaExpr,
) -> Result<EquivalenceReport> {
    check_element(frame, p)?;
    let conditions = equivalence_conditions(frame, r, r1, r1p, p)?;
    let difference_is_dr = if conditions.iter().all(CheckReport::passed) {
        Some(r1.sub(r1p)? == element_differential(frame, r, p)?)
    } else {
        None
    };
    Ok(EquivalenceReport { conditions, difference_is_dr })
}

/// The defining identity of a Nijenhuis element,
/// `φ₁_μ(l^R_λ(u,p) − r^R_λ(p,u)) = 0`, followed by the equivalence
/// conditions with `R1 = d_R(p)` and `R1′ = 0`.
pub fn is_nijenhuis(frame: &Frame, r: &TrbOperator, p: &LambdaExpr) -> Result<Vec<CheckReport>> {
    check_element(frame, p)?;
    if !check_trb(frame, r)?.passed() {
        return Err(Error::NotTrb("base operator fails the twisted Rota-Baxter identity".into()));
    }
    let (lam, mu) = (MPoly::l(2, 1), MPoly::l(2, 2));
    let p2 = p.embed(2);
    let mut defining = CheckReport::new("p_μ X − X_{−∂−μ} p = 0 for X = l^R_λ(u,p) − r^R_λ(p,u)");
    for a in 0..frame.u_rank() {
        let v = frame.bimodule.element(a, 2);
        let x = induced_left(frame, r, &v, &p2, &lam)?.sub(&induced_right(frame, r, &p2, &v, &lam)?);
        defining.record("Nijenhuis identity", &[a], phi1(frame, p, &x, &mu)?);
    }
    let r1 = element_differential(frame, r, p)?;
    let zero = Cochain::zero(1, frame.u_rank(), frame.t_rank());
    let mut out = vec![defining];
    out.extend(equivalence_conditions(frame, r, &r1, &zero, p)?);
    Ok(out)
}

pub fn nijenhuis_holds(frame: &Frame, r: &TrbOperator, p: &LambdaExpr) -> Result<bool> {
    Ok(is_nijenhuis(frame, r, p)?.iter().all(CheckReport::passed))
}

/// Coefficient of `t` in `φ_t ∘ (R + tR1) ∘ ψ_t^{-1}`:
/// `R1(u) − R(ψ₁_λ u) + φ₁_λ(R u)`, one entry per basis vector of `U`.
pub fn gauge_order1(frame: &Frame, r: &TrbOperator, r1: &TrbOperator, p: &LambdaExpr) -> Result<CheckReport> {
    check_element(frame, p)?;
    let l = MPoly::l(1, 1);
    let mut rep = CheckReport::new("order-one gauge coefficient");
    for a in 0..frame.u_rank() {
        let v = frame.bimodule.element(a, 1);
        let mut c = apply_op(r1, &v)?;
        c.sub_assign(&apply_op(r, &psi1(frame, r, p, &v, &l)?)?);
        c.add_assign(&phi1(frame, p, &apply_op(r, &v)?, &l)?);
        rep.record("coefficient of t", &[a], c);
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RigidityStatus {
    SolvedNijenhuis(LambdaExpr),
    SolvedNotNijenhuis(LambdaExpr),
    Unsolved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityEntry {
    pub cocycle: TrbOperator,
    pub status: RigidityStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityReport {
    pub truncation: u32,
    pub entries: Vec<RigidityEntry>,
}

impl RigidityReport {
    /// Every truncated 1-cocycle is `d_R` of a Nijenhuis element.
    pub fn witnessed(&self) -> bool {
        self.entries.iter().all(|e| matches!(e.status, RigidityStatus::SolvedNijenhuis(_)))
    }
}

type Coord = (usize, usize, crate::exactpoly::Monomial);

fn coords(c: &Cochain) -> BTreeMap<Coord, Rat> {
    let mut out = BTreeMap::new();
    for (idx, e) in c.map().entries().iter().enumerate() {
        for (k, poly) in e.coeffs().iter().enumerate() {
            for (m, q) in poly.terms() {
                out.insert((idx, k, m.clone()), q.clone());
            }
        }
    }
    out
}

/// Basis of the degree-`<= d` 1-cocycles; for each, an element `p` of
/// degree `<= d` with `d_R(p) = z` if one exists, and whether it is
/// Nijenhuis. Only the particular solution found is tested.
pub fn rigidity_witness(frame: &Frame, r: &TrbOperator, d: u32) -> Result<RigidityReport> {
    let cocycles = trb::cocycle_basis(frame, r, 1, d)?;
    let elements: Vec<LambdaExpr> = trb::cochain_basis(frame, 0, d).iter().map(|c| c.entry(&[]).clone()).collect();
    let images: Vec<BTreeMap<Coord, Rat>> = crate::par::map_slice(&elements, |p| element_differential(frame, r, p).map(|c| coords(&c)))
        .into_iter()
        .collect::<Result<_>>()?;
    let entries = crate::par::map_slice(&cocycles, |z| -> Result<RigidityEntry> {
        let target = coords(z);
        let keys: BTreeSet<&Coord> = images.iter().flat_map(|m| m.keys()).chain(target.keys()).collect();
        let rows: Vec<Vec<Rat>> = keys
            .iter()
            .map(|k| images.iter().map(|m| m.get(*k).cloned().unwrap_or_else(Rat::zero)).collect())
            .collect();
        let rhs: Vec<Rat> = keys.iter().map(|k| target.get(*k).cloned().unwrap_or_else(Rat::zero)).collect();
        let status = match linalg::solve(&rows, elements.len(), &rhs) {
            None => RigidityStatus::Unsolved,
            Some(x) => {
                let mut p = LambdaExpr::zero(frame.t_rank(), 0);
                for (c, e) in x.iter().zip(&elements) {
                    if !c.is_zero() {
                        p.add_assign(&e.scale(c));
                    }
                }
                if element_differential(frame, r, &p)? != *z {
                    return Err(Error::Invalid("rigidity solve produced a wrong preimage".into()));
                }
                if nijenhuis_holds(frame, r, &p)? {
                    RigidityStatus::SolvedNijenhuis(p)
                } else {
                    RigidityStatus::SolvedNotNijenhuis(p)
                }
            }
        };
        Ok(RigidityEntry { cocycle: z.clone(), status })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(RigidityReport { truncation: d, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::regular_bimodule;
    use crate::exactpoly::rat;
    use crate::fixtures;

    fn op(src: usize, tgt: usize, images: &[(usize, usize, &str)]) -> Cochain {
        let mut m = PolyMatrix::zero(tgt, src);
        for &(a, i, s) in images {
            m.set(i, a, MPoly::parse(s, 0).unwrap());
        }
        Cochain::from_matrix(&m).unwrap()
    }

    fn all_pass(reps: &[CheckReport]) -> bool {
        reps.iter().all(CheckReport::passed)
    }

    #[test]
    fn linear_deformation_examples() {
        let fx = fixtures::fix_a();
        let reps = check_linear_deformation(&fx.frame, &fx.r, &fx.r).unwrap();
        assert!(all_pass(&reps));
        let zero = Cochain::zero(1, 2, 2);
        assert!(all_pass(&check_linear_deformation(&fx.frame, &fx.r, &zero).unwrap()));
        // R1(u1) = e1 is a cocycle here; R1(u2) = e2 is not
        assert!(is_one_cocycle(&fx.frame, &fx.r, &op(2, 2, &[(0, 0, "1")])).unwrap());
        let bad = op(2, 2, &[(1, 1, "1")]);
        let reps = check_linear_deformation(&fx.frame, &fx.r, &bad).unwrap();
        assert!(reps[0].passed());
        assert_eq!(reps[1].first_failure().unwrap().tuple, vec![0, 0]);
        assert!(is_one_cocycle(&fx.frame, &fx.r, &fx.r).unwrap());
        assert!(is_one_cocycle(&fx.frame, &fx.r, &zero).unwrap());
        assert!(!is_one_cocycle(&fx.frame, &fx.r, &bad).unwrap());
    }

    #[test]
    fn formal_orders_agree_with_linear() {
        let fx = fixtures::fix_b();
        let r1 = op(1, 1, &[(0, 0, "D")]);
        let lin = check_linear_deformation(&fx.frame, &fx.r, &r1).unwrap();
        let formal = check_formal_deformation(&fx.frame, &DeformationSeries::linear(&fx.r, &r1).unwrap(), 1).unwrap();
        assert_eq!(lin[..2], formal[..]);
        assert_eq!(lin[1].passed(), is_one_cocycle(&fx.frame, &fx.r, &r1).unwrap());
    }

    #[test]
    fn morphism_checks() {
        let fx = fixtures::fix_b();
        let id = MorphismPair::identity(1, 1);
        assert!(all_pass(&check_morphism(&id, &fx.frame, &fx.r, &fx.r, &fx.frame.cocycle).unwrap()));
        let two = PolyMatrix::identity(1).scale(&rat(2));
        let pair = MorphismPair { phi: two.clone(), psi: two };
        let half = fx.frame.cocycle.scale(&crate::exactpoly::ratio(1, 2));
        let reps = check_morphism(&pair, &fx.frame, &fx.r, &fx.r, &half).unwrap();
        assert!(!reps[0].passed());
        assert!(reps[2].passed());
        assert!(reps[3].passed());
        let reps = check_morphism(&pair, &fx.frame, &fx.r, &fx.r, &fx.frame.cocycle).unwrap();
        assert!(!reps[2].passed());
    }

    #[test]
    fn equivalence_pair_examples() {
        let fb = fixtures::fix_b();
        let e = fb.frame.algebra.element(0, 0);
        let pair = equivalence_pair(&fb.frame, &fb.r, &e).unwrap();
        assert!(pair.phi1.is_zero());
        let zero = LambdaExpr::zero(1, 0);
        let pair = equivalence_pair(&fb.frame, &fb.r, &zero).unwrap();
        assert!(pair.phi1.is_zero() && pair.psi1.is_zero());
        let fa = fixtures::fix_a();
        let e2 = fa.frame.algebra.element(1, 0);
        let pair = equivalence_pair(&fa.frame, &fa.r, &e2).unwrap();
        assert!(pair.psi1.images()[0].is_zero());
    }

    #[test]
    fn table_form_is_conformal_linear() {
        let t = fixtures::matrix_algebra();
        let frame = Frame::untwisted(t.clone(), regular_bimodule(&t)).unwrap();
        let r = Cochain::zero(1, 4, 4);
        let p = LambdaExpr::from_coeffs(0, vec![MPoly::parse("D", 0).unwrap(), MPoly::from_int(0, 1), MPoly::zero(0), MPoly::zero(0)])
            .unwrap();
        let pair = equivalence_pair(&frame, &r, &p).unwrap();
        let lam = MPoly::l(1, 1);
        let x = LambdaExpr::from_coeffs(1, vec![MPoly::parse("D^2", 1).unwrap(), MPoly::zero(1), MPoly::from_int(1, 3), MPoly::parse("D - 1", 1).unwrap()])
            .unwrap();
        let direct = phi1(&frame, &p, &x, &lam).unwrap();
        assert!(!direct.is_zero());
        assert_eq!(pair.phi1.apply(&x, &lam, 4).unwrap(), direct);
        assert_eq!(pair.psi1.apply(&x, &lam, 4).unwrap(), psi1(&frame, &r, &p, &x, &lam).unwrap());
    }

    #[test]
    fn linear_equivalence_examples() {
        let fx = fixtures::fix_a();
        let e2 = fx.frame.algebra.element(1, 0);
        let r1 = op(2, 2, &[(0, 1, "D"), (1, 1, "1")]);
        let dr = element_differential(&fx.frame, &fx.r, &e2).unwrap();
        let r1p = r1.sub(&dr).unwrap();
        let rep = check_linear_equivalence(&fx.frame, &fx.r, &r1, &r1p, &e2).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.difference_is_dr, Some(true));
        let zero = LambdaExpr::zero(2, 0);
        assert!(check_linear_equivalence(&fx.frame, &fx.r, &r1, &r1, &zero).unwrap().passed());

        let t = fixtures::matrix_algebra();
        let frame = Frame::untwisted(t.clone(), regular_bimodule(&t)).unwrap();
        let r = Cochain::zero(1, 4, 4);
        let e11 = t.element(0, 0);
        let rep = check_linear_equivalence(&frame, &r, &r, &r, &e11).unwrap();
        assert!(!rep.conditions[0].passed());
        assert_eq!(rep.difference_is_dr, None);
    }

    #[test]
    fn nijenhuis_examples() {
        let fx = fixtures::fix_a();
        assert!(nijenhuis_holds(&fx.frame, &fx.r, &fx.frame.algebra.element(1, 0)).unwrap());
        assert!(nijenhuis_holds(&fx.frame, &fx.r, &LambdaExpr::zero(2, 0)).unwrap());
        let t = fixtures::upper_triangular();
        let u = regular_bimodule(&t);
        let p = LambdaExpr::from_coeffs(0, vec![MPoly::from_int(0, 1), MPoly::from_int(0, 2), MPoly::from_int(0, 3)]).unwrap();
        // with R = 0 every condition reduces to products of strictly upper triangular terms
        let frame = Frame::untwisted(t.clone(), u.clone()).unwrap();
        assert!(nijenhuis_holds(&frame, &Cochain::zero(1, 3, 3), &p).unwrap());
        // R = id is twisted Rota-Baxter for H = −(product)
        let h = Cochain::from_map(3, t.product().scale(&rat(-1))).unwrap();
        let frame = Frame::new(t, u, h).unwrap();
        let id = Cochain::from_matrix(&PolyMatrix::identity(3)).unwrap();
        assert!(check_trb(&frame, &id).unwrap().passed());
        let reps = is_nijenhuis(&frame, &id, &p).unwrap();
        assert!(!all_pass(&reps));
    }

    #[test]
    fn gauge_kills_order_one_for_dr_of_p() {
        for fx in [fixtures::fix_a(), fixtures::fix_b()] {
            for i in 0..fx.frame.t_rank() {
                let p = fx.frame.algebra.element(i, 0);
                let r1 = element_differential(&fx.frame, &fx.r, &p).unwrap();
                let rep = gauge_order1(&fx.frame, &fx.r, &r1, &p).unwrap();
                // λ-independent only for Nijenhuis p, where it must vanish
                if nijenhuis_holds(&fx.frame, &fx.r, &p).unwrap() {
                    assert!(rep.passed(), "{} p = e{}", fx.name, i + 1);
                }
            }
        }
    }

    #[test]
    fn rigidity_reports_verify() {
        for (fx, d) in [(fixtures::fix_a(), 1), (fixtures::fix_b(), 0), (fixtures::fix_b(), 1)] {
            let rep = rigidity_witness(&fx.frame, &fx.r, d).unwrap();
            for e in &rep.entries {
                if let RigidityStatus::SolvedNijenhuis(p) | RigidityStatus::SolvedNotNijenhuis(p) = &e.status {
                    assert_eq!(&element_differential(&fx.frame, &fx.r, p).unwrap(), &e.cocycle);
                }
            }
        }
        let fb = fixtures::fix_b();
        assert!(rigidity_witness(&fb.frame, &fb.r, 0).unwrap().entries.is_empty());
    }
}
