//! Acceptance criteria 1 to 11, one test per criterion; criterion 12 (the
//! command line) lives with the CLI crate. Each test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting. This file sorts last
//! so that a red criterion does not stop the other suites under fail-fast.

use ccalg::conformal::{check_associativity, check_bimodule, semidirect_twisted};
use ccalg::deform::{
    check_formal_deformation, check_linear_deformation, element_differential, gauge_order1, is_one_cocycle, nijenhuis_holds,
    rigidity_witness, DeformationSeries, RigidityStatus,
};
use ccalg::exactpoly::rat;
use ccalg::fixtures::{self, Fixture};
use ccalg::gen;
use ccalg::hochschild::{hochschild_delta, is_two_cocycle};
use ccalg::linf::{d_r, derived_bracket, mc_residual, ternary_bracket, twisted_mc_residual, u_tuples};
use ccalg::trb::{
    apply_op, check_trb, cocycle_basis, cohomology, induced_bimodule, induced_product, twisted_delta, Route,
};
use ccalg::{Cochain, Frame, LambdaExpr, MPoly};

fn verdict(n: u32, what: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    if detail.is_empty() {
        println!("criterion {n}: {status} {what}");
    } else {
        println!("criterion {n}: {status} {what} ({detail})");
    }
    assert!(ok, "criterion {n} failed: {what} {detail}");
}

fn fixtures_ab() -> [Fixture; 2] {
    [fixtures::fix_a(), fixtures::fix_b()]
}

#[test]
fn criterion_01_semidirect_associative_iff_cocycle() {
    let mut rng = gen::rng(101);
    let (mut agree, mut cocycles, mut total) = (0, 0, 0);
    for _ in 0..60 {
        let f = gen::frame(&mut rng, 2, 1);
        let assoc = check_associativity(&semidirect_twisted(&f.algebra, &f.bimodule, &f.cocycle).unwrap()).passed();
        let cocycle = is_two_cocycle(&f.algebra, &f.bimodule, &f.cocycle).unwrap().passed();
        agree += usize::from(assoc == cocycle);
        cocycles += usize::from(cocycle);
        total += 1;
    }
    // both outcomes must occur for the equivalence to be exercised
    let ok = agree == total && cocycles > 0 && cocycles < total;
    verdict(1, "twisted semidirect product associative iff H is a 2-cocycle", ok, &format!("{agree}/{total} agree, {cocycles} cocycles"));
}

#[test]
fn criterion_02_differentials_square_to_zero() {
    let mut rng = gen::rng(202);
    let mut bad = 0;
    let mut count = 0;
    for i in 0..30 {
        let f = gen::frame(&mut rng, 2, 1);
        let c = gen::t_cochain(&mut rng, &f, i % 3, 1);
        let dd = hochschild_delta(&f.algebra, &f.bimodule, &hochschild_delta(&f.algebra, &f.bimodule, &c).unwrap()).unwrap();
        bad += usize::from(!dd.is_zero());
        count += 1;
    }
    for i in 0..20 {
        let (f, r) = gen::trb_instance(&mut rng, 2, 1).unwrap();
        assert!(check_trb(&f, &r).unwrap().passed());
        let g = gen::u_cochain(&mut rng, &f, i % 3, 1);
        let dd = twisted_delta(&f, &r, &twisted_delta(&f, &r, &g).unwrap()).unwrap();
        bad += usize::from(!dd.is_zero());
        count += 1;
    }
    verdict(2, "δ∘δ = 0 and twisted δ∘δ = 0", bad == 0, &format!("{} of {count} nonzero", bad));
}

/// `2(R(R(u)_λ v + u_λ R(v)) + s·R(u)_λ R(v))` at every basis pair.
fn closed_form(f: &Frame, r: &Cochain, s: i64) -> Cochain {
    let l = MPoly::l(1, 1);
    Cochain::from_fn(2, f.u_rank(), f.t_rank(), |t| {
        let u = f.bimodule.element(t[0], 1);
        let v = f.bimodule.element(t[1], 1);
        let ru = apply_op(r, &u)?;
        let rv = apply_op(r, &v)?;
        let inner = f.bimodule.left_at(&ru, &v, &l)?.add(&f.bimodule.right_at(&u, &rv, &l)?);
        let prod = f.algebra.product_at(&ru, &rv, &l)?.scale(&rat(s));
        Ok(apply_op(r, &inner)?.add(&prod).scale(&rat(2)))
    })
    .unwrap()
}

fn random_operators(seed: u64, n: usize) -> Vec<(Frame, Cochain)> {
    let mut rng = gen::rng(seed);
    (0..n)
        .map(|_| {
            let f = gen::cocycle_frame(&mut rng, 2, 1);
            let r = gen::operator(&mut rng, &f, 1);
            (f, r)
        })
        .collect()
}

#[test]
fn criterion_03_derived_bracket_printed_closed_form() {
    // Checked verbatim: the printed sign of R(u)_λ R(v) is `+`.
    let cases = random_operators(303, 50);
    let matches = cases.iter().filter(|(f, r)| derived_bracket(f, r, r).unwrap() == closed_form(f, r, 1)).count();
    verdict(3, "⟦R,R⟧ equals the printed closed form with +R(u)_λ R(v)", matches == cases.len(), &format!("{matches}/{} match", cases.len()));
}

#[test]
fn derived_bracket_matches_closed_form_with_minus_sign() {
    let cases = random_operators(303, 50);
    let matches = cases.iter().filter(|(f, r)| derived_bracket(f, r, r).unwrap() == closed_form(f, r, -1)).count();
    println!("derived bracket with −R(u)_λ R(v): {matches}/{} match", cases.len());
    assert_eq!(matches, cases.len());
}

#[test]
fn criterion_04_ternary_bracket_closed_form() {
    let mut rng = gen::rng(404);
    let mut matches = 0;
    let n = 50;
    for _ in 0..n {
        let f = gen::frame(&mut rng, 2, 1);
        let r = gen::operator(&mut rng, &f, 1);
        let l = MPoly::l(1, 1);
        let expect = Cochain::from_fn(2, f.u_rank(), f.t_rank(), |t| {
            let ru = apply_op(&r, &f.bimodule.element(t[0], 1))?;
            let rv = apply_op(&r, &f.bimodule.element(t[1], 1))?;
            Ok(apply_op(&r, &f.cocycle.evaluate(&[&ru, &rv], std::slice::from_ref(&l), 1)?)?.scale(&rat(-6)))
        })
        .unwrap();
        matches += usize::from(ternary_bracket(&f, &r, &r, &r).unwrap() == expect);
    }
    verdict(4, "⟦R,R,R⟧ = −6 R(H(R·, R·))", matches == n, &format!("{matches}/{n} match"));
}

#[test]
fn criterion_05_maurer_cartan_iff_trb() {
    let mut rng = gen::rng(505);
    let mut cases: Vec<(Frame, Cochain)> = fixtures_ab().into_iter().map(|fx| (fx.frame, fx.r)).collect();
    // Keep drawing until at least 20 perturbations leave the solution locus;
    // some random algebras (zero products) admit every operator.
    let mut attempts = 0;
    while attempts < 200 && cases.iter().filter(|(f, r)| !check_trb(f, r).unwrap().passed()).count() < 20 {
        attempts += 1;
        let (f, r) = gen::trb_instance(&mut rng, 2, 1).unwrap();
        let mut bump = gen::operator(&mut rng, &f, 0);
        while bump.is_zero() {
            bump = gen::operator(&mut rng, &f, 0);
        }
        cases.push((f.clone(), r.add(&bump).unwrap()));
        cases.push((f, r));
    }
    let (mut agree, mut negatives) = (0, 0);
    for (f, r) in &cases {
        let trb = check_trb(f, r).unwrap().passed();
        let mc = mc_residual(f, r).unwrap().is_zero();
        agree += usize::from(trb == mc);
        negatives += usize::from(!trb);
    }
    let fixtures_pass = fixtures_ab().iter().all(|fx| mc_residual(&fx.frame, &fx.r).unwrap().is_zero());
    let ok = agree == cases.len() && negatives >= 20 && fixtures_pass;
    verdict(5, "Maurer-Cartan residual vanishes iff R is twisted Rota-Baxter", ok, &format!("{agree}/{} agree, {negatives} negatives", cases.len()));
}

#[test]
fn criterion_06_twisted_delta_is_signed_dr() {
    let mut rng = gen::rng(606);
    let mut ok = true;
    for fx in fixtures_ab() {
        for m in [1usize, 2] {
            for _ in 0..5 {
                let g = gen::u_cochain(&mut rng, &fx.frame, m, 1);
                let sign = rat(if m % 2 == 0 { 1 } else { -1 });
                let lhs = twisted_delta(&fx.frame, &fx.r, &g).unwrap();
                ok &= lhs == d_r(&fx.frame, &fx.r, &g).unwrap().scale(&sign);
            }
        }
        for n in 0..=2 {
            for d in 0..=2 {
                let a = cohomology(&fx.frame, &fx.r, n, d, Route::TwistedDelta).unwrap();
                let b = cohomology(&fx.frame, &fx.r, n, d, Route::DerivedBrackets).unwrap();
                ok &= a == b;
            }
        }
    }
    verdict(6, "twisted δ(g) = (−1)^m d_R(g); cohomology agrees through both routes", ok, "");
}

fn induced_ok(f: &Frame, r: &Cochain) -> bool {
    let star = induced_product(f, r).unwrap();
    let bim = induced_bimodule(f, r).unwrap();
    check_associativity(&star).passed() && check_bimodule(&star, &bim).passed()
}

#[test]
fn criterion_07_induced_structures() {
    let mut rng = gen::rng(707);
    let mut ok = fixtures_ab().iter().all(|fx| induced_ok(&fx.frame, &fx.r));
    for _ in 0..20 {
        let (f, r) = gen::trb_instance(&mut rng, 2, 1).unwrap();
        ok &= induced_ok(&f, &r);
    }
    verdict(7, "induced product associative and induced bimodule valid", ok, "fixtures and 20 random instances");
}

#[test]
fn criterion_08_worked_examples() {
    let pass = fixtures_ab().iter().all(|fx| check_trb(&fx.frame, &fx.r).unwrap().passed());
    let fx = fixtures::fix_a();
    let star = induced_product(&fx.frame, &fx.r).unwrap();
    let mut table_ok = true;
    for t in u_tuples(&fx.frame, 2) {
        let expect = if t == [0, 0] { LambdaExpr::basis(2, 1, 1).scale(&rat(2)) } else { LambdaExpr::zero(2, 1) };
        table_ok &= star.product().entry(&t) == &expect;
    }
    verdict(8, "worked examples pass; induced table is u1*u1 = 2u2, others 0", pass && table_ok, "");
}

#[test]
fn criterion_09_twisted_linf_deformations() {
    let mut rng = gen::rng(909);
    let (mut agree, mut positives, n) = (0, 0, 30);
    for i in 0..n {
        let fx = if i % 2 == 0 { fixtures::fix_a() } else { fixtures::fix_b() };
        // a third of the perturbations are scalings of R, which stay on the locus for H = 0
        let rp = if i % 3 == 0 { fx.r.scale(&rat(i as i64 % 5 - 2)) } else { gen::operator(&mut rng, &fx.frame, 1) };
        let sum = fx.r.add(&rp).unwrap();
        let trb = check_trb(&fx.frame, &sum).unwrap().passed();
        let mc = twisted_mc_residual(&fx.frame, &fx.r, &rp).unwrap().is_zero();
        agree += usize::from(trb == mc);
        positives += usize::from(trb);
    }
    verdict(9, "R + R′ twisted Rota-Baxter iff l1 + ½l2 − ⅙l3 vanishes at R′", agree == n && positives > 0, &format!("{agree}/{n} agree, {positives} positive"));
}

/// Upper triangular matrices on the regular bimodule with `H = −(product)`,
/// for which `R = id` is twisted Rota-Baxter and `d_R` is nonzero.
fn upper_triangular_twisted() -> Frame {
    let t = fixtures::upper_triangular();
    let u = ccalg::conformal::regular_bimodule(&t);
    let h = Cochain::from_map(3, t.product().scale(&rat(-1))).unwrap();
    Frame::new(t, u, h).unwrap()
}

#[test]
fn criterion_10_deformation_layer() {
    let mut rng = gen::rng(1010);
    let mut ok = true;
    let mut detail = Vec::new();
    // order-one flag against the cocycle test, on random and cocycle inputs
    for fx in fixtures_ab() {
        let mut r1s: Vec<Cochain> = (0..6).map(|_| gen::operator(&mut rng, &fx.frame, 1)).collect();
        r1s.extend(cocycle_basis(&fx.frame, &fx.r, 1, 1).unwrap());
        for r1 in &r1s {
            let flag = check_linear_deformation(&fx.frame, &fx.r, r1).unwrap()[1].passed();
            ok &= flag == is_one_cocycle(&fx.frame, &fx.r, r1).unwrap();
        }
    }
    detail.push(format!("order-one flag {}", if ok { "agrees" } else { "disagrees" }));
    let fx = fixtures::fix_a();
    let series = DeformationSeries::new(vec![fx.r.clone(), fx.r.clone()]).unwrap();
    let orders = check_formal_deformation(&fx.frame, &series, 3).unwrap();
    let series_ok = orders.len() == 4 && orders.iter().all(|r| r.passed());
    ok &= series_ok;
    detail.push(format!("(R,R) series {}", if series_ok { "passes" } else { "fails" }));
    let mut verified = 0;
    let mut frames: Vec<(Frame, Cochain, u32)> =
        vec![(fixtures::fix_a().frame, fixtures::fix_a().r, 1), (fixtures::fix_b().frame, fixtures::fix_b().r, 1)];
    frames.push((upper_triangular_twisted(), Cochain::from_matrix(&ccalg::linalg::PolyMatrix::identity(3)).unwrap(), 1));
    for (frame, r, d) in &frames {
        for e in rigidity_witness(frame, r, *d).unwrap().entries {
            match e.status {
                RigidityStatus::SolvedNijenhuis(p) => {
                    ok &= element_differential(frame, r, &p).unwrap() == e.cocycle;
                    ok &= nijenhuis_holds(frame, r, &p).unwrap();
                    verified += 1;
                }
                RigidityStatus::SolvedNotNijenhuis(p) => {
                    ok &= element_differential(frame, r, &p).unwrap() == e.cocycle;
                    ok &= !nijenhuis_holds(frame, r, &p).unwrap();
                    verified += 1;
                }
                RigidityStatus::Unsolved => {}
            }
        }
    }
    detail.push(format!("{verified} rigidity preimages re-verified"));
    let e2 = fx.frame.algebra.element(1, 0);
    let r1 = element_differential(&fx.frame, &fx.r, &e2).unwrap();
    let gauge = gauge_order1(&fx.frame, &fx.r, &r1, &e2).unwrap().passed();
    ok &= gauge;
    detail.push(format!("gauge coefficient of t {}", if gauge { "vanishes" } else { "is nonzero" }));
    verdict(10, "deformation layer", ok, &detail.join(", "));
}

#[test]
fn criterion_11_h0_dimension_on_fix_a() {
    let fx = fixtures::fix_a();
    let rep = cohomology(&fx.frame, &fx.r, 0, 2, Route::TwistedDelta).unwrap();
    // Independent oracle: x is a 0-cocycle iff u_{−∂} x = x_0 u in the
    // induced bimodule, for every basis vector u. The monomial elements of
    // degree <= 2 are tested one by one.
    let bim = induced_bimodule(&fx.frame, &fx.r).unwrap();
    let mut basis = Vec::new();
    for k in 0..fx.frame.t_rank() {
        for e in 0..=2 {
            let mut c = vec![MPoly::zero(0); fx.frame.t_rank()];
            c[k] = MPoly::d(0).pow(e);
            basis.push(LambdaExpr::from_coeffs(0, c).unwrap());
        }
    }
    let condition = |x: &LambdaExpr| {
        (0..fx.frame.u_rank()).all(|a| {
            let u = fx.frame.bimodule.element(a, 0);
            let left = bim.left_at(&u, x, &MPoly::d(0).scale(&rat(-1))).unwrap();
            let right = bim.right_at(x, &u, &MPoly::zero(0)).unwrap();
            left == right
        })
    };
    let oracle = basis.iter().filter(|x| condition(x)).count();
    let ok = rep.dim_cocycles == 6 && oracle == basis.len() && basis.len() == 6;
    verdict(11, "FIX-A H⁰ at truncation 2 has 6 cocycles", ok, &format!("engine {}, oracle {oracle}", rep.dim_cocycles));
}
