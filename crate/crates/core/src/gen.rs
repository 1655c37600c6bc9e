//! Seeded random instances: associative algebras from a small catalog
//! moved by random changes of ℚ[∂]-basis, bimodules, cochains, and twisted
//! Rota-Baxter operators built from invertible 1-cochains.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::{current_algebra, regular_bimodule, ConformalAlgebra, ConformalBimodule};
use crate::error::Result;
use crate::exactpoly::{rat, MPoly, Rat};
use crate::hochschild::{hochschild_delta, Cochain, Frame};
use crate::linalg::PolyMatrix;
use crate::multilinear::{LambdaExpr, StructureMap};
use crate::trb::{from_invertible_onecochain, monomials};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    rat(rng.gen_range(-2..=2))
}

/// Random polynomial over `nvars` L-variables of total degree `<= d`.
pub fn poly<R: Rng + ?Sized>(rng: &mut R, nvars: usize, d: u32, density: f64) -> MPoly {
    let mut terms = Vec::new();
    for m in monomials(nvars, d) {
        if rng.gen_bool(density) {
            terms.push((m, small(rng)));
        }
    }
    MPoly::from_terms(nvars, terms)
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, rank: usize, nvars: usize, d: u32) -> LambdaExpr {
    let coeffs = (0..rank).map(|_| poly(rng, nvars, d, 0.5)).collect();
    LambdaExpr::from_coeffs(nvars, coeffs).expect("matching nvars")
}

/// D-only matrix with entries of degree `<= d`.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, d: u32) -> PolyMatrix {
    let mut m = PolyMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, poly(rng, 0, d, 0.5));
        }
    }
    m
}

/// Product of elementary matrices: invertible over ℚ[D] with a nonzero
/// constant determinant.
pub fn invertible_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, d: u32) -> PolyMatrix {
    let mut m = PolyMatrix::identity(n);
    for i in 0..n {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-2..=2);
        }
        m.set(i, i, MPoly::from_int(0, c));
    }
    if n < 2 {
        return m;
    }
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = PolyMatrix::identity(n);
        e.set(i, j, poly(rng, 0, d, 0.7));
        m = m.mul(&e).expect("square");
    }
    m
}

fn constants(n: usize, nonzero: &[(usize, usize, usize)]) -> Vec<Vec<Vec<Rat>>> {
    let mut c = vec![vec![vec![rat(0); n]; n]; n];
    for &(i, j, k) in nonzero {
        c[i][j][k] = rat(1);
    }
    c
}

/// Associative algebras of rank `<= 3` given by constants `a_i a_j = a_k`.
pub fn catalog(max_rank: usize) -> Vec<ConformalAlgebra> {
    let list: Vec<(usize, Vec<(usize, usize, usize)>)> = vec![
        (1, vec![(0, 0, 0)]),
        (1, vec![]),
        (2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)]),
        (2, vec![(0, 0, 0), (1, 1, 1)]),
        (2, vec![(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)]),
        (2, vec![(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)]),
        (2, vec![(0, 0, 1)]),
        (3, vec![(0, 0, 0), (0, 1, 1), (1, 2, 1), (2, 2, 2)]),
        (3, vec![(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 0, 1), (2, 0, 2)]),
    ];
    list.into_iter()
        .filter(|(n, _)| *n <= max_rank)
        .map(|(n, nz)| current_algebra(&constants(n, &nz)).expect("catalog entries are associative"))
        .collect()
}

/// Catalog algebra in a random basis; structure constants of degree
/// `<= max_degree` (the untransformed algebra is the fallback).
pub fn algebra<R: Rng + ?Sized>(rng: &mut R, max_rank: usize, max_degree: u32) -> ConformalAlgebra {
    let base = catalog(max_rank).choose(rng).cloned().expect("nonempty catalog");
    for _ in 0..8 {
        let p = invertible_matrix(rng, base.rank(), 1);
        if let Ok(t) = base.change_basis(&p) {
            if t.product().max_degree() <= max_degree {
                return t;
            }
        }
    }
    base
}

/// Regular, one-sided regular, or zero bimodule in a random basis.
pub fn bimodule<R: Rng + ?Sized>(rng: &mut R, t: &ConformalAlgebra, max_degree: u32) -> ConformalBimodule {
    let reg = regular_bimodule(t);
    let names = reg.basis_names().to_vec();
    let n = t.rank();
    let zero = StructureMap::zero(vec![n, n], n);
    let base = match rng.gen_range(0..4) {
        0 => reg,
        1 => ConformalBimodule::new(names, n, t.product().clone(), zero).expect("left module"),
        2 => ConformalBimodule::new(names, n, zero, t.product().clone()).expect("right module"),
        _ => ConformalBimodule::new(names, n, zero.clone(), zero).expect("zero module"),
    };
    for _ in 0..8 {
        let q = invertible_matrix(rng, n, 1);
        if let Ok(u) = base.change_basis(&PolyMatrix::identity(n), &q) {
            if u.left().max_degree().max(u.right().max_degree()) <= max_degree {
                return u;
            }
        }
    }
    base
}

/// Random cochain of the given arity with entries of degree `<= d`.
/// Values are drawn before the (possibly parallel) table build.
pub fn sample_cochain<R: Rng + ?Sized>(rng: &mut R, arity: usize, src: usize, tgt: usize, d: u32) -> Cochain {
    let nv = arity.saturating_sub(1);
    let count = crate::multilinear::tuples(&vec![src; arity]).len();
    let values: Vec<LambdaExpr> = (0..count).map(|_| element(rng, tgt, nv, d)).collect();
    let ranks = vec![src; arity];
    Cochain::from_fn(arity, src, tgt, |t| Ok(values[crate::multilinear::flatten(&ranks, t)].clone())).expect("shapes")
}

/// Random 2-cochain `T × T → U`; a cocycle (a coboundary `δh`) with
/// probability one half.
pub fn twisting<R: Rng + ?Sized>(rng: &mut R, t: &ConformalAlgebra, u: &ConformalBimodule, d: u32) -> Cochain {
    if rng.gen_bool(0.5) {
        let h = sample_cochain(rng, 1, t.rank(), u.rank(), d.saturating_sub(1));
        hochschild_delta(t, u, &h).expect("shapes")
    } else {
        sample_cochain(rng, 2, t.rank(), u.rank(), d)
    }
}

/// Random `(T, U, H)` without any cocycle condition imposed on `H`.
pub fn frame<R: Rng + ?Sized>(rng: &mut R, max_rank: usize, max_degree: u32) -> Frame {
    let t = algebra(rng, max_rank, max_degree);
    let u = bimodule(rng, &t, max_degree);
    let h = twisting(rng, &t, &u, max_degree);
    Frame::new(t, u, h).expect("consistent shapes")
}

/// `(T, U, H)` with `H` a coboundary, hence a cocycle.
pub fn cocycle_frame<R: Rng + ?Sized>(rng: &mut R, max_rank: usize, max_degree: u32) -> Frame {
    let t = algebra(rng, max_rank, max_degree);
    let u = bimodule(rng, &t, max_degree);
    let h = sample_cochain(rng, 1, t.rank(), u.rank(), 1);
    let cocycle = hochschild_delta(&t, &u, &h).expect("shapes");
    Frame::new(t, u, cocycle).expect("consistent shapes")
}

/// Random ℚ[∂]-linear operator `U → T`.
pub fn operator<R: Rng + ?Sized>(rng: &mut R, frame: &Frame, d: u32) -> Cochain {
    Cochain::from_matrix(&matrix(rng, frame.t_rank(), frame.u_rank(), d)).expect("D-only")
}

/// Random `U^arity → T` cochain.
pub fn u_cochain<R: Rng + ?Sized>(rng: &mut R, frame: &Frame, arity: usize, d: u32) -> Cochain {
    sample_cochain(rng, arity, frame.u_rank(), frame.t_rank(), d)
}

/// Random `T^arity → U` cochain.
pub fn t_cochain<R: Rng + ?Sized>(rng: &mut R, frame: &Frame, arity: usize, d: u32) -> Cochain {
    sample_cochain(rng, arity, frame.t_rank(), frame.u_rank(), d)
}

/// A twisted Rota-Baxter instance: `R = h^{-1}`, `H = −δh` for a random
/// invertible `h : T → U`.
pub fn trb_instance<R: Rng + ?Sized>(rng: &mut R, max_rank: usize, max_degree: u32) -> Result<(Frame, Cochain)> {
    let t = algebra(rng, max_rank, max_degree);
    let u = bimodule(rng, &t, max_degree);
    let h = Cochain::from_matrix(&invertible_matrix(rng, t.rank(), 1))?;
    let base = Frame::untwisted(t, u)?;
    let (r, cocycle) = from_invertible_onecochain(&base, &h)?;
    Ok((base.with_cocycle(cocycle)?, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{check_associativity, check_bimodule};
    use crate::trb::check_trb;

    #[test]
    fn generated_structures_satisfy_their_axioms() {
        let mut g = rng(7);
        for _ in 0..20 {
            let t = algebra(&mut g, 3, 3);
            assert!(check_associativity(&t).passed());
            let u = bimodule(&mut g, &t, 3);
            assert!(check_bimodule(&t, &u).passed());
            assert!(invertible_matrix(&mut g, 3, 2).inverse().is_ok());
        }
    }

    #[test]
    fn trb_instances_pass() {
        let mut g = rng(11);
        for _ in 0..10 {
            let (frame, r) = trb_instance(&mut g, 2, 2).unwrap();
            assert!(check_trb(&frame, &r).unwrap().passed());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = frame(&mut rng(3), 2, 1);
        let b = frame(&mut rng(3), 2, 1);
        assert_eq!(a, b);
    }
}
