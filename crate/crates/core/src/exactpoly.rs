//! Exact multivariate polynomials over the rationals.
//!
//! Variable 0 is `D` (standing for ∂); variables `1..=nvars` are the
//! λ-variables `L1..Ln`. Sesquilinearity rules are expressed as ring
//! homomorphisms built from [`MPoly::substitute`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("variable index {index} out of range for {nvars} L-variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("reindexing map is not injective into 1..={0}")]
    NonInjective(usize),
    #[error("expected {expected} substitution images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}

/// Exponent vector `[exp_D, exp_L1, ..., exp_Ln]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars + 1))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Key for canonical printing: higher total degree first, then
    /// lexicographically larger exponent vectors first.
    fn print_key(&self) -> (std::cmp::Reverse<u32>, std::cmp::Reverse<SmallVec<[u16; 6]>>) {
        (std::cmp::Reverse(self.degree()), std::cmp::Reverse(self.0.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    /// Variable by raw index: 0 is `D`, `j >= 1` is `Lj`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index <= nvars, "variable {index} out of range for {nvars} L-variables");
        let mut m = Monomial::one(nvars);
        m.0[index] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(m, Rat::one());
        p
    }

    pub fn d(nvars: usize) -> Self {
        Self::var(nvars, 0)
    }

    /// `Lj`, 1-based.
    pub fn l(nvars: usize, j: usize) -> Self {
        assert!(j >= 1, "L-variables are 1-based");
        Self::var(nvars, j)
    }

    /// Sum `L_from + ... + L_to` (1-based, inclusive); zero when empty.
    pub fn l_sum(nvars: usize, from: usize, to: usize) -> Self {
        let mut s = Self::zero(nvars);
        for j in from..=to {
            if j >= 1 {
                s += &Self::l(nvars, j);
            }
        }
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.0.len(), nvars + 1, "monomial length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree in a single raw variable index.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index] as u32).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch(self.nvars, other.nvars));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VarCountMismatch(self.nvars, other.nvars));
        }
        let mut out = Self::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Ring homomorphism sending raw variable `v` to `images[v]`; all images
    /// must live over `target_nvars` L-variables.
    pub fn substitute(&self, images: &[MPoly], target_nvars: usize) -> Result<MPoly, PolyError> {
        if images.len() != self.nvars + 1 {
            return Err(PolyError::ImageCount { expected: self.nvars + 1, got: images.len() });
        }
        if let Some(bad) = images.iter().find(|im| im.nvars != target_nvars) {
            return Err(PolyError::VarCountMismatch(bad.nvars, target_nvars));
        }
        let mut out = Self::zero(target_nvars);
        if self.is_zero() {
            return Ok(out);
        }
        // Pure renamings avoid polynomial multiplication entirely.
        let renaming: Option<Vec<usize>> = images
            .iter()
            .map(|im| {
                if im.terms.len() == 1 {
                    let (m, c) = im.terms.iter().next().unwrap();
                    if c.is_one() && m.degree() == 1 {
                        return m.0.iter().position(|&e| e == 1);
                    }
                }
                None
            })
            .collect();
        if let Some(target) = renaming {
            for (m, c) in &self.terms {
                let mut nm = Monomial::one(target_nvars);
                for (v, &e) in m.0.iter().enumerate() {
                    nm.0[target[v]] += e;
                }
                out.add_term(nm, c.clone());
            }
            return Ok(out);
        }
        let mut powers: Vec<Vec<MPoly>> =
            images.iter().map(|im| vec![Self::one(target_nvars), im.clone()]).collect();
        for (m, c) in &self.terms {
            let mut term = Self::constant(target_nvars, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap() * &images[v];
                    powers[v].push(next);
                }
                term = &term * &powers[v][e];
            }
            out += &term;
        }
        Ok(out)
    }

    /// Identity images over the same variable set.
    pub fn identity_images(nvars: usize) -> Vec<MPoly> {
        (0..=nvars).map(|v| Self::var(nvars, v)).collect()
    }

    /// Replace `Lj` (1-based) by `r`.
    pub fn subst_l(&self, j: usize, r: &MPoly) -> Result<MPoly, PolyError> {
        if j == 0 || j > self.nvars {
            return Err(PolyError::IndexOutOfRange { index: j, nvars: self.nvars });
        }
        if r.nvars != self.nvars {
            return Err(PolyError::VarCountMismatch(self.nvars, r.nvars));
        }
        let mut images = Self::identity_images(self.nvars);
        images[j] = r.clone();
        self.substitute(&images, self.nvars)
    }

    /// Replace `D` by `D + s`.
    pub fn shift_d(&self, s: &MPoly) -> Result<MPoly, PolyError> {
        if s.nvars != self.nvars {
            return Err(PolyError::VarCountMismatch(self.nvars, s.nvars));
        }
        let mut images = Self::identity_images(self.nvars);
        images[0] = &images[0] + s;
        self.substitute(&images, self.nvars)
    }

    /// Move `L(k+1)` to `L(positions[k])` inside a ring with `n` L-variables.
    pub fn extend_vars(&self, n: usize, positions: &[usize]) -> Result<MPoly, PolyError> {
        if positions.len() != self.nvars {
            return Err(PolyError::ImageCount { expected: self.nvars, got: positions.len() });
        }
        let mut seen = vec![false; n + 1];
        for &p in positions {
            if p == 0 || p > n || seen[p] {
                return Err(PolyError::NonInjective(n));
            }
            seen[p] = true;
        }
        let mut images = vec![Self::d(n)];
        images.extend(positions.iter().map(|&p| Self::l(n, p)));
        self.substitute(&images, n)
    }

    /// Same polynomial with trailing L-variables appended.
    pub fn embed(&self, n: usize) -> MPoly {
        assert!(n >= self.nvars, "cannot embed {} variables into {n}", self.nvars);
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(n);
            nm.0[..m.0.len()].copy_from_slice(&m.0);
            out.terms.insert(nm, c.clone());
        }
        out
    }

    /// Parse the text form, e.g. `2*D*L1 - 1/3*L2^2 + 5`.
    pub fn parse(text: &str, nvars: usize) -> Result<MPoly, PolyError> {
        let mut p = Parser { chars: text.char_indices().collect(), pos: 0, nvars };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> PolyError {
        let col = self.chars.get(self.pos).map(|c| c.0).unwrap_or_else(|| self.chars.last().map_or(0, |c| c.0 + 1));
        PolyError::Parse { col: col + 1, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = MPoly::zero(self.nvars);
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -1
            }
            Some('+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    return Ok(MPoly::constant(self.nvars, Rat::new(num, den)));
                }
                Ok(MPoly::constant(self.nvars, Rat::from_integer(num)))
            }
            Some('D') => {
                self.pos += 1;
                Ok(MPoly::d(self.nvars))
            }
            Some('L') => {
                self.pos += 1;
                let j = self.integer()?;
                let j: usize = j.try_into().map_err(|_| self.err("variable index too large"))?;
                if j == 0 || j > self.nvars {
                    return Err(self.err(&format!("L{j} out of range (have {} L-variables)", self.nvars)));
                }
                Ok(MPoly::l(self.nvars, j))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if v == 0 {
            write!(f, "D")?;
        } else {
            write!(f, "L{v}")?;
        }
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| m.print_key());
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.checked_add(rhs).expect("MPoly add")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.checked_mul(rhs).expect("MPoly mul")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        assert_eq!(self.nvars, rhs.nvars, "MPoly variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        assert_eq!(self.nvars, rhs.nvars, "MPoly variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}
