//! Finite-rank associative conformal algebras and their bimodules.

use crate::error::{Error, Result};
use crate::exactpoly::{MPoly, Rat};
use crate::hochschild::Cochain;
use crate::linalg::PolyMatrix;
use crate::multilinear::{LambdaExpr, StructureMap};
use crate::report::CheckReport;

/// Free ℚ[∂]-module with basis `e_1..e_r` and λ-product
/// `e_i λ e_j = Σ_k S_ij^k(∂, λ) e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalAlgebra {
    basis: Vec<String>,
    product: StructureMap,
}

impl ConformalAlgebra {
    pub fn new(basis: Vec<String>, product: StructureMap) -> Result<Self> {
        let r = basis.len();
        if product.in_ranks() != [r, r] || product.out_rank() != r {
            return Err(Error::RankMismatch { what: "algebra product table", expected: r, got: product.out_rank() });
        }
        Ok(ConformalAlgebra { basis, product })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn product(&self) -> &StructureMap {
        &self.product
    }

    /// `a_λ b` with λ the given polynomial of the ambient ring.
    pub fn product_at(&self, a: &LambdaExpr, b: &LambdaExpr, lambda: &MPoly) -> Result<LambdaExpr> {
        self.product.apply(&[a, b], std::slice::from_ref(lambda), a.nvars())
    }

    /// `a_λ b` with λ the ambient variable `L(slot_var)`.
    pub fn lambda_product(&self, a: &LambdaExpr, b: &LambdaExpr, slot_var: usize) -> Result<LambdaExpr> {
        let n = a.nvars();
        if slot_var == 0 || slot_var > n {
            return Err(crate::exactpoly::PolyError::IndexOutOfRange { index: slot_var, nvars: n }.into());
        }
        self.product_at(a, b, &MPoly::l(n, slot_var))
    }

    pub fn element(&self, i: usize, nvars: usize) -> LambdaExpr {
        LambdaExpr::basis(self.rank(), i, nvars)
    }

    /// Same algebra in the basis `f_i = Σ_j P_ij(∂) e_j`.
    pub fn change_basis(&self, p: &PolyMatrix) -> Result<ConformalAlgebra> {
        let q = p.inverse()?;
        let product = transform_map(&self.product, &[p, p], &q)?;
        ConformalAlgebra::new(self.basis.clone(), product)
    }
}

/// Free ℚ[∂]-module with left and right λ-actions of an algebra of rank
/// `algebra_rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalBimodule {
    basis: Vec<String>,
    algebra_rank: usize,
    left: StructureMap,
    right: StructureMap,
}

impl ConformalBimodule {
    pub fn new(basis: Vec<String>, algebra_rank: usize, left: StructureMap, right: StructureMap) -> Result<Self> {
        let r = basis.len();
        if left.in_ranks() != [algebra_rank, r] || left.out_rank() != r {
            return Err(Error::RankMismatch { what: "left action table", expected: r, got: left.out_rank() });
        }
        if right.in_ranks() != [r, algebra_rank] || right.out_rank() != r {
            return Err(Error::RankMismatch { what: "right action table", expected: r, got: right.out_rank() });
        }
        Ok(ConformalBimodule { basis, algebra_rank, left, right })
    }

    pub fn zero(algebra_rank: usize, basis: Vec<String>) -> Self {
        let r = basis.len();
        ConformalBimodule {
            basis,
            algebra_rank,
            left: StructureMap::zero(vec![algebra_rank, r], r),
            right: StructureMap::zero(vec![r, algebra_rank], r),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_rank(&self) -> usize {
        self.algebra_rank
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn left(&self) -> &StructureMap {
        &self.left
    }

    pub fn right(&self) -> &StructureMap {
        &self.right
    }

    pub fn element(&self, i: usize, nvars: usize) -> LambdaExpr {
        LambdaExpr::basis(self.rank(), i, nvars)
    }

    /// `p_λ u`.
    pub fn left_at(&self, p: &LambdaExpr, u: &LambdaExpr, lambda: &MPoly) -> Result<LambdaExpr> {
        self.left.apply(&[p, u], std::slice::from_ref(lambda), p.nvars())
    }

    /// `u_λ p`.
    pub fn right_at(&self, u: &LambdaExpr, p: &LambdaExpr, lambda: &MPoly) -> Result<LambdaExpr> {
        self.right.apply(&[u, p], std::slice::from_ref(lambda), u.nvars())
    }

    pub fn left_action(&self, p: &LambdaExpr, u: &LambdaExpr, slot_var: usize) -> Result<LambdaExpr> {
        self.left_at(p, u, &MPoly::l(p.nvars(), slot_var))
    }

    pub fn right_action(&self, u: &LambdaExpr, p: &LambdaExpr, slot_var: usize) -> Result<LambdaExpr> {
        self.right_at(u, p, &MPoly::l(u.nvars(), slot_var))
    }

    /// Same bimodule after basis changes of the algebra (`pt`) and module (`pu`).
    pub fn change_basis(&self, pt: &PolyMatrix, pu: &PolyMatrix) -> Result<ConformalBimodule> {
        let qu = pu.inverse()?;
        let left = transform_map(&self.left, &[pt, pu], &qu)?;
        let right = transform_map(&self.right, &[pu, pt], &qu)?;
        ConformalBimodule::new(self.basis.clone(), self.algebra_rank, left, right)
    }
}

/// Rewrite a table in new bases: argument `k` uses rows of `ins[k]` as the
/// new basis vectors, and outputs are re-expressed through `out_inv`.
pub fn transform_map(map: &StructureMap, ins: &[&PolyMatrix], out_inv: &PolyMatrix) -> Result<StructureMap> {
    let nv = map.table_nvars();
    let n = map.arity();
    if ins.len() != n {
        return Err(Error::ArityMismatch { what: "basis changes", expected: n, got: ins.len() });
    }
    let lambdas: Vec<MPoly> = (1..=nv).map(|k| MPoly::l(nv, k)).collect();
    StructureMap::from_fn(map.in_ranks().to_vec(), map.out_rank(), |tuple| {
        let args: Vec<LambdaExpr> = tuple
            .iter()
            .zip(ins)
            .map(|(&i, m)| {
                let coeffs = (0..m.cols()).map(|j| m.get(i, j).embed(nv)).collect();
                LambdaExpr::from_coeffs(nv, coeffs)
            })
            .collect::<Result<_>>()?;
        let refs: Vec<&LambdaExpr> = args.iter().collect();
        let old = map.apply(&refs, &lambdas, nv)?;
        let coeffs = (0..out_inv.cols())
            .map(|col| {
                let mut acc = MPoly::zero(nv);
                for (m, c) in old.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        acc += &(c * &out_inv.get(m, col).embed(nv));
                    }
                }
                acc
            })
            .collect();
        LambdaExpr::from_coeffs(nv, coeffs)
    })
}

/// `(e_i λ e_j)_{λ+μ} e_k = e_i λ (e_j μ e_k)` for all basis triples.
pub fn check_associativity(t: &ConformalAlgebra) -> CheckReport {
    let r = t.rank();
    let l1 = MPoly::l(2, 1);
    let l2 = MPoly::l(2, 2);
    let l12 = &l1 + &l2;
    let triples = crate::multilinear::tuples(&[r, r, r]);
    let residuals = crate::par::map_slice(&triples, |tr| {
        let (a, b, c) = (t.element(tr[0], 2), t.element(tr[1], 2), t.element(tr[2], 2));
        let lhs = t.product_at(&t.product_at(&a, &b, &l1).unwrap(), &c, &l12).unwrap();
        let rhs = t.product_at(&a, &t.product_at(&b, &c, &l2).unwrap(), &l1).unwrap();
        ("associativity".to_string(), tr.clone(), lhs.sub(&rhs))
    });
    CheckReport::from_residuals("associativity", residuals)
}

/// The three bimodule axioms for all basis triples.
pub fn check_bimodule(t: &ConformalAlgebra, u: &ConformalBimodule) -> CheckReport {
    let mut report = CheckReport::new("bimodule");
    if u.algebra_rank() != t.rank() {
        report.record("algebra rank", &[t.rank(), u.algebra_rank()], LambdaExpr::basis(1, 0, 0));
        return report;
    }
    let (tr, ur) = (t.rank(), u.rank());
    let l1 = MPoly::l(2, 1);
    let l2 = MPoly::l(2, 2);
    let l12 = &l1 + &l2;
    let e = |i| t.element(i, 2);
    let m = |i| u.element(i, 2);
    let mut items = Vec::new();
    let a1 = crate::multilinear::tuples(&[tr, ur, tr]);
    items.extend(crate::par::map_slice(&a1, |x| {
        let (p, v, q) = (e(x[0]), m(x[1]), e(x[2]));
        let lhs = u.right_at(&u.left_at(&p, &v, &l1).unwrap(), &q, &l12).unwrap();
        let rhs = u.left_at(&p, &u.right_at(&v, &q, &l2).unwrap(), &l1).unwrap();
        ("(p u) q = p (u q)".to_string(), x.clone(), lhs.sub(&rhs))
    }));
    let a2 = crate::multilinear::tuples(&[ur, tr, tr]);
    items.extend(crate::par::map_slice(&a2, |x| {
        let (v, p, q) = (m(x[0]), e(x[1]), e(x[2]));
        let lhs = u.right_at(&u.right_at(&v, &p, &l1).unwrap(), &q, &l12).unwrap();
        let rhs = u.right_at(&v, &t.product_at(&p, &q, &l2).unwrap(), &l1).unwrap();
        ("(u p) q = u (p q)".to_string(), x.clone(), lhs.sub(&rhs))
    }));
    let a3 = crate::multilinear::tuples(&[tr, tr, ur]);
    items.extend(crate::par::map_slice(&a3, |x| {
        let (p, q, v) = (e(x[0]), e(x[1]), m(x[2]));
        let lhs = u.left_at(&t.product_at(&p, &q, &l1).unwrap(), &v, &l12).unwrap();
        let rhs = u.left_at(&p, &u.left_at(&q, &v, &l2).unwrap(), &l1).unwrap();
        ("(p q) u = p (q u)".to_string(), x.clone(), lhs.sub(&rhs))
    }));
    report.merge(CheckReport::from_residuals("bimodule", items));
    report
}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Current algebra `ℚ[∂] ⊗ A` of a finite-dimensional associative algebra
/// given by constants `c[i][j][k]` (`a_i a_j = Σ_k c_ijk a_k`).
pub fn current_algebra(c: &[Vec<Vec<Rat>>]) -> Result<ConformalAlgebra> {
    let n = c.len();
    let mut product = StructureMap::zero(vec![n, n], n);
    for i in 0..n {
        if c[i].len() != n {
            return Err(Error::RankMismatch { what: "structure constants", expected: n, got: c[i].len() });
        }
        for j in 0..n {
            if c[i][j].len() != n {
                return Err(Error::RankMismatch { what: "structure constants", expected: n, got: c[i][j].len() });
            }
            let coeffs = c[i][j].iter().map(|x| MPoly::constant(1, x.clone())).collect();
            product.set_entry(&[i, j], LambdaExpr::from_coeffs(1, coeffs)?)?;
        }
    }
    // brute-force associativity of A itself
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for out in 0..n {
                    let mut lhs = Rat::from_integer(0.into());
                    let mut rhs = lhs.clone();
                    for m in 0..n {
                        lhs += &c[i][j][m] * &c[m][k][out];
                        rhs += &c[j][k][m] * &c[i][m][out];
                    }
                    if lhs != rhs {
                        return Err(Error::NotAssociative(format!(
                            "(a{} a{}) a{} != a{} (a{} a{})",
                            i + 1, j + 1, k + 1, i + 1, j + 1, k + 1
                        )));
                    }
                }
            }
        }
    }
    ConformalAlgebra::new(default_names("e", n), product)
}

/// `T` acting on a copy of itself with basis `u1..ur`.
pub fn regular_bimodule(t: &ConformalAlgebra) -> ConformalBimodule {
    let r = t.rank();
    ConformalBimodule::new(default_names("u", r), r, t.product().clone(), t.product().clone())
        .expect("regular bimodule shapes")
}

/// `T ⊕ U` with `(p,u)_λ(q,v) = (p_λ q, p_λ v + u_λ q + H_λ(p,q))`.
pub fn semidirect_twisted(t: &ConformalAlgebra, u: &ConformalBimodule, h: &Cochain) -> Result<ConformalAlgebra> {
    let (tr, ur) = (t.rank(), u.rank());
    if h.arity() != 2 || h.src_rank() != tr || h.tgt_rank() != ur {
        return Err(Error::ArityMismatch { what: "twisting 2-cochain", expected: 2, got: h.arity() });
    }
    if u.algebra_rank() != tr {
        return Err(Error::RankMismatch { what: "bimodule algebra", expected: tr, got: u.algebra_rank() });
    }
    let n = tr + ur;
    let product = StructureMap::from_fn(vec![n, n], n, |x| {
        let (a, b) = (x[0], x[1]);
        let zt = LambdaExpr::zero(tr, 1);
        let zu = LambdaExpr::zero(ur, 1);
        Ok(match (a < tr, b < tr) {
            (true, true) => t.product().entry(&[a, b]).concat(h.map().entry(&[a, b])),
            (true, false) => zt.concat(u.left().entry(&[a, b - tr])),
            (false, true) => zt.concat(u.right().entry(&[a - tr, b])),
            (false, false) => zt.concat(&zu),
        })
    })?;
    let mut names = t.basis_names().to_vec();
    names.extend(u.basis_names().iter().cloned());
    ConformalAlgebra::new(names, product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::fixtures;

    #[test]
    fn lambda_product_sesquilinearity_on_fix_b() {
        let fx = fixtures::fix_b();
        let t = &fx.frame.algebra;
        let de = LambdaExpr::from_coeffs(1, vec![MPoly::d(1)]).unwrap();
        let e = t.element(0, 1);
        // (∂e)_λ e = -λ e
        assert_eq!(t.lambda_product(&de, &e, 1).unwrap().coeff(0), &-MPoly::l(1, 1));
        assert!(t.lambda_product(&e, &e, 2).is_err());
    }

    #[test]
    fn current_algebras_are_associative() {
        let fx = fixtures::fix_a();
        assert!(check_associativity(&fx.frame.algebra).passed());
        assert!(check_bimodule(&fx.frame.algebra, &fx.frame.bimodule).passed());
        let ut = fixtures::upper_triangular();
        assert!(check_associativity(&ut).passed());
        assert!(check_bimodule(&ut, &regular_bimodule(&ut)).passed());
        // e λ e = D e is not associative
        let mut prod = StructureMap::zero(vec![1, 1], 1);
        prod.set_entry(&[0, 0], LambdaExpr::from_coeffs(1, vec![MPoly::d(1)]).unwrap()).unwrap();
        let bad = ConformalAlgebra::new(vec!["e".into()], prod).unwrap();
        let rep = check_associativity(&bad);
        assert!(!rep.passed());
        assert_eq!(rep.first_failure().unwrap().tuple, vec![0, 0, 0]);
    }

    #[test]
    fn nonassociative_constants_rejected() {
        // a1 a1 = a2, everything else zero except a2 a1 = a1: (a1 a1) a1 = a1, a1 (a1 a1) = 0
        let mut c = vec![vec![vec![rat(0); 2]; 2]; 2];
        c[0][0][1] = rat(1);
        c[1][0][0] = rat(1);
        assert!(matches!(current_algebra(&c), Err(Error::NotAssociative(_))));
    }

    #[test]
    fn broken_right_action_fails_bimodule_axioms() {
        let fx = fixtures::fix_a();
        let t = &fx.frame.algebra;
        let u = &fx.frame.bimodule;
        let mut right = u.right().clone();
        right.set_entry(&[0, 0], LambdaExpr::basis(2, 1, 1)).unwrap();
        let bad = ConformalBimodule::new(u.basis_names().to_vec(), 2, u.left().clone(), right).unwrap();
        let rep = check_bimodule(t, &bad);
        assert!(!rep.passed());
    }

    #[test]
    fn basis_change_preserves_axioms() {
        let fx = fixtures::fix_a();
        let d = |s: &str| MPoly::parse(s, 0).unwrap();
        let p = PolyMatrix::from_rows(vec![vec![d("1"), d("0")], vec![d("D"), d("1")]]).unwrap();
        let t2 = fx.frame.algebra.change_basis(&p).unwrap();
        assert!(check_associativity(&t2).passed());
        assert!(t2.product().max_degree() >= 1);
        let u2 = fx.frame.bimodule.change_basis(&p, &p).unwrap();
        assert!(check_bimodule(&t2, &u2).passed());
    }
}
