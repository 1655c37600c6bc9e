//! Small worked examples used by tests, benches and the CLI.

use crate::conformal::{current_algebra, regular_bimodule, ConformalAlgebra};
use crate::exactpoly::{rat, MPoly, Rat};
use crate::hochschild::{Cochain, Frame};
use crate::linalg::PolyMatrix;
use crate::multilinear::LambdaExpr;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub frame: Frame,
    pub r: Cochain,
}

fn constants(n: usize, nonzero: &[(usize, usize, usize, i64)]) -> Vec<Vec<Vec<Rat>>> {
    let mut c = vec![vec![vec![rat(0); n]; n]; n];
    for &(i, j, k, v) in nonzero {
        c[i][j][k] = rat(v);
    }
    c
}

/// Current algebra of the dual numbers `ℚ[x]/(x²)`: `e1` the unit, `e2 = x`.
pub fn dual_numbers() -> ConformalAlgebra {
    current_algebra(&constants(2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])).expect("dual numbers")
}

/// Current algebra of upper triangular 2×2 matrices, basis `E11, E12, E22`.
pub fn upper_triangular() -> ConformalAlgebra {
    current_algebra(&constants(3, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1), (2, 2, 2, 1)])).expect("upper triangular")
}

/// Current algebra of `M2(ℚ)`, basis `E11, E12, E21, E22`.
pub fn matrix_algebra() -> ConformalAlgebra {
    let mut nz = Vec::new();
    // E_ij E_kl = δ_jk E_il with index (i,j) -> 2i + j
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                nz.push((2 * i + j, 2 * j + l, 2 * i + l, 1));
            }
        }
    }
    current_algebra(&constants(4, &nz)).expect("matrix algebra")
}

/// Dual numbers on the regular bimodule, `H = 0`, `R(u1) = e2`.
pub fn fix_a() -> Fixture {
    let t = dual_numbers();
    let u = regular_bimodule(&t);
    let frame = Frame::untwisted(t, u).expect("fix_a frame");
    let mut m = PolyMatrix::zero(2, 2);
    m.set(1, 0, MPoly::one(0));
    Fixture { name: "dual numbers, R(u1) = e2", frame, r: Cochain::from_matrix(&m).expect("operator") }
}

/// Rank-one unit algebra `e_λ e = e` on its regular bimodule with
/// `H(e,e) = −u` and `R = id`.
pub fn fix_b() -> Fixture {
    let t = current_algebra(&constants(1, &[(0, 0, 0, 1)])).expect("unit algebra");
    let u = regular_bimodule(&t);
    let mut h = Cochain::zero(2, 1, 1);
    h.set_entry(&[0, 0], LambdaExpr::from_coeffs(1, vec![MPoly::from_int(1, -1)]).expect("entry")).expect("entry");
    let frame = Frame::new(t, u, h).expect("fix_b frame");
    Fixture { name: "unit algebra, H(e,e) = -u, R = id", frame, r: Cochain::from_matrix(&PolyMatrix::identity(1)).expect("operator") }
}
