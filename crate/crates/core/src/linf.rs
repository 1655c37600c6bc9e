//! The binary derived bracket, the H-twisted ternary bracket, Maurer-Cartan
//! residuals and the differential `d_R` on `⊕ Hom(U^m, T)`.

use crate::conformal::semidirect_twisted;
use crate::error::{Error, Result};
use crate::exactpoly::{ratio, MPoly};
use crate::hochschild::{compose_maps, gerstenhaber_entry, sign, Cochain, Frame};
use crate::multilinear::{tuples, LambdaExpr, StructureMap};

/// Cochain `U^n → T`.
pub type UCochain = Cochain;

fn check_space(frame: &Frame, a: &UCochain) -> Result<()> {
    if a.src_rank() != frame.u_rank() || a.tgt_rank() != frame.t_rank() {
        return Err(Error::RankMismatch { what: "Hom(U^n, T) cochain", expected: frame.u_rank(), got: a.src_rank() });
    }
    Ok(())
}

/// Untwisted semidirect multiplication `μ̂` on `T ⊕ U` as a 2-cochain.
pub fn semidirect_mult(frame: &Frame) -> Result<Cochain> {
    let zero = Cochain::zero(2, frame.t_rank(), frame.u_rank());
    let s = semidirect_twisted(&frame.algebra, &frame.bimodule, &zero)?;
    Cochain::from_map(s.rank(), s.product().clone())
}

/// `Â` on `T ⊕ U`: `A` on `U`-block arguments, zero elsewhere, values in
/// the `T`-block.
pub fn lift(frame: &Frame, a: &UCochain) -> Result<Cochain> {
    check_space(frame, a)?;
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let nv = a.arity().saturating_sub(1);
    Cochain::from_fn(a.arity(), t + u, t + u, |x| {
        if x.iter().all(|&i| i >= t) {
            let inner: Vec<usize> = x.iter().map(|&i| i - t).collect();
            Ok(a.entry(&inner).concat(&LambdaExpr::zero(u, nv)))
        } else {
            Ok(LambdaExpr::zero(t + u, nv))
        }
    })
}

/// `⟦A,B⟧ = (−1)^a [[μ̂, Â]_G, B̂]_G` restricted to `U`-arguments and
/// projected to `T`.
pub fn derived_bracket(frame: &Frame, a: &UCochain, b: &UCochain) -> Result<UCochain> {
    check_space(frame, a)?;
    check_space(frame, b)?;
    let arity = a.arity() + b.arity();
    if arity == 0 {
        return Err(Error::ArityMismatch { what: "bracket of two elements", expected: 1, got: 0 });
    }
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let mu = semidirect_mult(frame)?;
    let x = mu.gerstenhaber(&lift(frame, a)?)?;
    let bh = lift(frame, b)?;
    let s = sign(a.arity() as i64);
    Cochain::from_fn(arity, u, t, |tuple| {
        let shifted: Vec<usize> = tuple.iter().map(|&i| i + t).collect();
        let v = gerstenhaber_entry(x.map(), bh.map(), &shifted)?;
        Ok(v.slice(0..t).signed(s))
    })
}

/// `H(Y, Z) : U^{y+z} → U`, i.e. `(H ∘_2 Z) ∘_1 Y`.
fn h_of(frame: &Frame, y: &UCochain, z: &UCochain) -> Result<StructureMap> {
    let hz = compose_maps(frame.cocycle.map(), z.map(), 2)?;
    compose_maps(&hz, y.map(), 1)
}

/// `Σ_{j ≤ x} (−1)^{(j−1) e} X ∘_j inner`.
fn insertion_sum(x: &UCochain, inner: &StructureMap, e: usize, acc: &mut StructureMap) -> Result<()> {
    for j in 1..=x.arity() {
        let term = compose_maps(x.map(), inner, j)?;
        let term = if sign((j as i64 - 1) * e as i64) < 0 { term.scale(&ratio(-1, 1)) } else { term };
        *acc = acc.add(&term)?;
    }
    Ok(())
}

/// The H-twisted ternary bracket of degree −1.
pub fn ternary_bracket(frame: &Frame, a: &UCochain, b: &UCochain, c: &UCochain) -> Result<UCochain> {
    for x in [a, b, c] {
        check_space(frame, x)?;
    }
    let (p, q, r) = (a.arity(), b.arity(), c.arity());
    if p + q + r == 0 {
        return Err(Error::ArityMismatch { what: "ternary bracket of elements", expected: 1, got: 0 });
    }
    let (t, u) = (frame.t_rank(), frame.u_rank());
    let out = p + q + r - 1;
    let zero = || StructureMap::zero(vec![u; out], t);
    let (pi, qi, ri) = (p as i64, q as i64, r as i64);
    let groups: [(i64, &UCochain, &UCochain, &UCochain, usize); 6] = [
        (1, a, b, c, q),
        (-sign(qi * ri), a, c, b, r),
        (-sign(pi * qi), b, a, c, p),
        (sign(pi * (qi + ri)), b, c, a, r),
        (-sign(pi * qi + qi * ri + ri * pi), c, b, a, q),
        (sign(ri * (pi + qi)), c, a, b, p),
    ];
    let mut total = zero();
    for (s, x, y, z, e) in groups {
        if x.arity() == 0 {
            continue;
        }
        let inner = h_of(frame, y, z)?;
        let mut acc = zero();
        insertion_sum(x, &inner, e, &mut acc)?;
        total = if s < 0 { total.sub(&acc)? } else { total.add(&acc)? };
    }
    if sign(pi * qi * ri) < 0 {
        total = total.scale(&ratio(-1, 1));
    }
    Cochain::from_map(u, total)
}

/// `½⟦R,R⟧ − ⅙⟦R,R,R⟧`.
pub fn mc_residual(frame: &Frame, r: &UCochain) -> Result<UCochain> {
    if r.arity() != 1 {
        return Err(Error::ArityMismatch { what: "Maurer-Cartan element", expected: 1, got: r.arity() });
    }
    let two = derived_bracket(frame, r, r)?.scale(&ratio(1, 2));
    let three = ternary_bracket(frame, r, r, r)?.scale(&ratio(1, 6));
    two.sub(&three)
}

fn require_trb(frame: &Frame, r: &UCochain) -> Result<()> {
    let rep = crate::trb::check_trb(frame, r)?;
    if let Some(w) = rep.first_failure() {
        return Err(Error::NotTrb(format!("identity fails at {:?}", w.tuple)));
    }
    Ok(())
}

/// `d_R(g) = ⟦R,g⟧ − ½⟦R,R,g⟧`; `R` must be a twisted Rota-Baxter operator.
pub fn d_r(frame: &Frame, r: &UCochain, g: &UCochain) -> Result<UCochain> {
    require_trb(frame, r)?;
    d_r_unchecked(frame, r, g)
}

pub(crate) fn d_r_unchecked(frame: &Frame, r: &UCochain, g: &UCochain) -> Result<UCochain> {
    let two = derived_bracket(frame, r, g)?;
    let three = ternary_bracket(frame, r, r, g)?.scale(&ratio(1, 2));
    two.sub(&three)
}

/// `l1 = d_R`.
pub fn twisted_l1(frame: &Frame, r: &UCochain, g: &UCochain) -> Result<UCochain> {
    d_r(frame, r, g)
}

/// `l2(A,B) = ⟦A,B⟧ − ⟦R,A,B⟧`.
pub fn twisted_l2(frame: &Frame, r: &UCochain, a: &UCochain, b: &UCochain) -> Result<UCochain> {
    require_trb(frame, r)?;
    derived_bracket(frame, a, b)?.sub(&ternary_bracket(frame, r, a, b)?)
}

/// `l3 = ⟦·,·,·⟧`.
pub fn twisted_l3(frame: &Frame, r: &UCochain, a: &UCochain, b: &UCochain, c: &UCochain) -> Result<UCochain> {
    require_trb(frame, r)?;
    ternary_bracket(frame, a, b, c)
}

/// `l1(R′) + ½ l2(R′,R′) − ⅙ l3(R′,R′,R′)`, which vanishes exactly when
/// `R + R′` is again a twisted Rota-Baxter operator.
pub fn twisted_mc_residual(frame: &Frame, r: &UCochain, rp: &UCochain) -> Result<UCochain> {
    let l1 = twisted_l1(frame, r, rp)?;
    let l2 = twisted_l2(frame, r, rp, rp)?.scale(&ratio(1, 2));
    let l3 = twisted_l3(frame, r, rp, rp, rp)?.scale(&ratio(1, 6));
    l1.add(&l2)?.sub(&l3)
}

/// All basis tuples `U^n`.
pub fn u_tuples(frame: &Frame, n: usize) -> Vec<Vec<usize>> {
    tuples(&vec![frame.u_rank(); n])
}

/// `L1 + ... + Ln` helper used by callers assembling explicit formulas.
pub fn lambda_total(nvars: usize) -> MPoly {
    MPoly::l_sum(nvars, 1, nvars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::fixtures;
    use crate::trb::{apply_op, check_trb};

    fn op(t: usize, u: usize, images: &[(usize, usize, &str)]) -> UCochain {
        let mut c = Cochain::zero(1, u, t);
        for &(a, i, s) in images {
            let mut v = c.entry(&[a]).clone();
            v.set_coeff(i, MPoly::parse(s, 0).unwrap());
            c.set_entry(&[a], v).unwrap();
        }
        c
    }

    #[test]
    fn fix_a_brackets_vanish() {
        let fx = fixtures::fix_a();
        assert!(derived_bracket(&fx.frame, &fx.r, &fx.r).unwrap().is_zero());
        assert!(mc_residual(&fx.frame, &fx.r).unwrap().is_zero());
        assert!(d_r(&fx.frame, &fx.r, &fx.r).unwrap().is_zero());
    }

    #[test]
    fn fix_a_non_trb_operator() {
        let fx = fixtures::fix_a();
        let rp = op(2, 2, &[(0, 0, "1")]);
        let two = derived_bracket(&fx.frame, &rp, &rp).unwrap();
        assert_eq!(two.entry(&[0, 0]), &LambdaExpr::basis(2, 0, 1).scale(&rat(2)));
        let res = mc_residual(&fx.frame, &rp).unwrap();
        assert_eq!(res.entry(&[0, 0]), &LambdaExpr::basis(2, 0, 1));
        assert!(matches!(d_r(&fx.frame, &rp, &rp), Err(Error::NotTrb(_))));
    }

    #[test]
    fn fix_b_ternary_value() {
        let fx = fixtures::fix_b();
        let three = ternary_bracket(&fx.frame, &fx.r, &fx.r, &fx.r).unwrap();
        assert_eq!(three.entry(&[0, 0]), &LambdaExpr::basis(1, 0, 1).scale(&rat(6)));
        assert!(mc_residual(&fx.frame, &fx.r).unwrap().is_zero());
    }

    #[test]
    fn ternary_vanishes_without_twist() {
        let fx = fixtures::fix_a();
        let a = op(2, 2, &[(0, 0, "D"), (1, 1, "1")]);
        assert!(ternary_bracket(&fx.frame, &a, &fx.r, &a).unwrap().is_zero());
    }

    #[test]
    fn derived_bracket_has_the_expected_closed_form() {
        // ⟦R,R⟧(u,v) = 2(R(R(u)_λ v + u_λ R(v)) − R(u)_λ R(v))
        let fx = fixtures::fix_b();
        let f = &fx.frame;
        let r = op(1, 1, &[(0, 0, "D + 2")]);
        let br = derived_bracket(f, &r, &r).unwrap();
        let l = MPoly::l(1, 1);
        let u = f.bimodule.element(0, 1);
        let ru = apply_op(&r, &u).unwrap();
        let inner = f.bimodule.left_at(&ru, &u, &l).unwrap().add(&f.bimodule.right_at(&u, &ru, &l).unwrap());
        let expect = apply_op(&r, &inner).unwrap().sub(&f.algebra.product_at(&ru, &ru, &l).unwrap()).scale(&rat(2));
        assert_eq!(br.entry(&[0, 0]), &expect);
        assert!(!check_trb(f, &r).unwrap().passed());
    }

    #[test]
    fn graded_symmetry_of_brackets() {
        let fx = fixtures::fix_a();
        let f = &fx.frame;
        let a = op(2, 2, &[(0, 0, "D"), (1, 1, "1")]);
        let b = op(2, 2, &[(0, 1, "1"), (1, 0, "D + 1")]);
        // degree-one elements commute
        assert_eq!(derived_bracket(f, &a, &b).unwrap(), derived_bracket(f, &b, &a).unwrap());
        let fb = fixtures::fix_b();
        let g = Cochain::from_fn(2, 1, 1, |_| {
            LambdaExpr::from_coeffs(1, vec![MPoly::parse("L1 + D", 1).unwrap()])
        })
        .unwrap();
        let x = ternary_bracket(&fb.frame, &fb.r, &g, &fb.r).unwrap();
        let y = ternary_bracket(&fb.frame, &g, &fb.r, &fb.r).unwrap();
        let z = ternary_bracket(&fb.frame, &fb.r, &fb.r, &g).unwrap();
        assert!(!x.is_zero());
        // a transposition of neighbours of arity a, b contributes −(−1)^{ab}
        assert_eq!(x, y.neg());
        assert_eq!(x, z.neg());
    }
}
