//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending grevlex order with no zero
//! coefficients stored, so equality is structural and leading-term queries
//! are free. Coefficients stay exactly as computed; normalization is the
//! Gröbner engine's business.

use crate::monomial::{Monomial, TermOrder};
use crate::rational::{format_rational, Rational};
use num::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Ordered list of variable identifiers shared by the polynomials of a
/// system.
#[derive(Debug, Clone)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        VarSet {
            names: Arc::new(names.into_iter().map(Into::into).collect()),
        }
    }

    /// `x1..xn`.
    pub fn xs(n: usize) -> Self {
        VarSet::new((1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn concat(&self, other: &VarSet) -> VarSet {
        let mut names = self.names.as_ref().clone();
        names.extend(other.names.iter().cloned());
        VarSet::new(names)
    }

    pub fn subset(&self, keep: &[usize]) -> VarSet {
        VarSet::new(keep.iter().map(|&i| self.names[i].clone()).collect::<Vec<_>>())
    }

    pub fn same(&self, other: &VarSet) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ArithError {
    #[error("operands live in different variable universes")]
    UniverseMismatch,
    #[error("evaluation point has length {got}, universe has {want}")]
    PointLength { got: usize, want: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("block size {block} does not match matrix dimension {dim}")]
    BlockSize { block: usize, dim: usize },
}

/// A polynomial over `Q` in the universe `vars`.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    vars: VarSet,
    /// Descending grevlex, nonzero coefficients only.
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars.same(&other.vars) && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: &VarSet) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(vars);
        }
        MultiPoly {
            vars: vars.clone(),
            terms: vec![(Monomial::one(vars.len()), c)],
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &VarSet, i: usize) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: vec![(Monomial::var(vars.len(), i), Rational::one())],
        }
    }

    /// Builds from unsorted terms, merging duplicates and dropping zeros.
    pub fn from_terms(vars: &VarSet, mut terms: Vec<(Monomial, Rational)>) -> Self {
        terms.sort_by(|a, b| TermOrder::Grevlex.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    if last.1.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !c.is_zero() {
                out.push((m, c));
            }
        }
        MultiPoly {
            vars: vars.clone(),
            terms: out,
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Degree in the variable block `[lo, hi)`.
    pub fn block_degree(&self, lo: usize, hi: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.block_degree(lo, hi))
            .max()
            .unwrap_or(0)
    }

    fn check_universe(&self, other: &MultiPoly) -> Result<(), ArithError> {
        if self.vars.same(&other.vars) {
            Ok(())
        } else {
            Err(ArithError::UniverseMismatch)
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, ArithError> {
        self.check_universe(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match TermOrder::Grevlex.cmp(&self.terms[i].0, &other.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    terms.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        terms.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Ok(MultiPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, ArithError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, ArithError> {
        self.check_universe(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Ok(Self::from_terms(&self.vars, terms))
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, ArithError> {
        if point.len() != self.nvars() {
            return Err(ArithError::PointLength {
                got: point.len(),
                want: self.nvars(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, i: usize) -> MultiPoly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            terms.push((
                Monomial::from_exps(&exps),
                c * Rational::from_integer(num::BigInt::from(e)),
            ));
        }
        Self::from_terms(&self.vars, terms)
    }

    /// Composes with `x -> M x` on the variable block `block` (identity on
    /// the rest). `M` must be square of the block's size and invertible.
    pub fn apply_linear_change(
        &self,
        m: &[Vec<Rational>],
        block: &[usize],
    ) -> Result<MultiPoly, ArithError> {
        let k = block.len();
        if m.len() != k || m.iter().any(|row| row.len() != k) {
            return Err(ArithError::BlockSize {
                block: k,
                dim: m.len(),
            });
        }
        if !matrix_is_invertible(m) {
            return Err(ArithError::SingularMatrix);
        }
        // Linear form substituted for the i-th block variable.
        let forms: Vec<MultiPoly> = (0..k)
            .map(|i| {
                let terms = (0..k)
                    .filter(|&j| !m[i][j].is_zero())
                    .map(|j| (Monomial::var(self.nvars(), block[j]), m[i][j].clone()))
                    .collect();
                MultiPoly::from_terms(&self.vars, terms)
            })
            .collect();
        let in_block = {
            let mut f = vec![None; self.nvars()];
            for (bi, &v) in block.iter().enumerate() {
                f[v] = Some(bi);
            }
            f
        };
        let mut acc = MultiPoly::zero(&self.vars);
        for (mono, c) in &self.terms {
            let mut exps = mono.exps().to_vec();
            let mut factor = MultiPoly::constant(&self.vars, c.clone());
            for (i, e) in exps.iter_mut().enumerate() {
                if let Some(bi) = in_block[i] {
                    for _ in 0..*e {
                        factor = factor.mul(&forms[bi])?;
                    }
                    *e = 0;
                }
            }
            let rest = Monomial::from_exps(&exps);
            acc = acc.add(&factor.mul_monomial(&rest, &Rational::one()))?;
        }
        Ok(acc)
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        let (dlm, dlc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quo_terms: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((rlm, rlc)) = rem.leading() {
            if !dlm.divides(rlm) {
                return None;
            }
            let qm = dlm.quotient(rlm);
            let qc = rlc / dlc;
            quo_terms.push((qm.clone(), qc.clone()));
            rem = rem.sub(&d.mul_monomial(&qm, &qc)).ok()?;
        }
        Some(MultiPoly::from_terms(&self.vars, quo_terms))
    }

    /// Canonical text form: grevlex-descending terms joined by ` + `, each
    /// term `c*v1^e1*...` with the rational coefficient always present.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = format_rational(c);
                for (i, &e) in m.exps().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    s.push('*');
                    s.push_str(self.vars.name(i));
                    if e > 1 {
                        s.push('^');
                        s.push_str(&e.to_string());
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

/// Exact rank of a rational matrix by fraction-free elimination.
pub fn matrix_rank(m: &[Vec<Rational>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        for r in row + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[row][col];
            for c in col..cols {
                let t = &a[row][c] * &factor;
                a[r][c] -= t;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

pub fn matrix_is_invertible(m: &[Vec<Rational>]) -> bool {
    !m.is_empty() && m.len() == m[0].len() && matrix_rank(m) == m.len()
}

/// Inverse of a square rational matrix.
pub fn matrix_inverse(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, ArithError> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(ArithError::SingularMatrix);
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else {
            return Err(ArithError::SingularMatrix);
        };
        a.swap(col, p);
        inv.swap(col, p);
        let pv = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &pv;
            inv[col][c] /= &pv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let t = &a[col][c] * &f;
                a[r][c] -= t;
                let t = &inv[col][c] * &f;
                inv[r][c] -= t;
            }
        }
    }
    Ok(inv)
}

/// Determinant of a square matrix of polynomials by fraction-free
/// (Bareiss) elimination; divisions are exact by construction.
pub fn det_bareiss(mat: &[Vec<MultiPoly>]) -> Option<MultiPoly> {
    let n = mat.len();
    if n == 0 {
        return None;
    }
    let vars = mat[0][0].vars().clone();
    if n == 1 {
        return Some(mat[0][0].clone());
    }
    let mut a: Vec<Vec<MultiPoly>> = mat.to_vec();
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(&vars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Some(MultiPoly::zero(&vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k]
                    .mul(&a[i][j])
                    .ok()?
                    .sub(&a[i][k].mul(&a[k][j]).ok()?)
                    .ok()?;
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        for i in k + 1..n {
            a[i][k] = MultiPoly::zero(&vars);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Some(if sign_flip { det.neg() } else { det })
}

/// All `k x k` minors of a rectangular polynomial matrix.
pub fn minors(k: usize, mat: &[Vec<MultiPoly>]) -> Vec<MultiPoly> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    if k == 0 || k > rows || k > cols {
        return Vec::new();
    }
    let row_sets = subsets(rows, k);
    let col_sets = subsets(cols, k);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            let sub: Vec<Vec<MultiPoly>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| mat[r][c].clone()).collect())
                .collect();
            out.push(det_bareiss(&sub).expect("square minor"));
        }
    }
    out
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=n.saturating_sub(need) {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    fn xs3() -> VarSet {
        VarSet::xs(3)
    }

    #[test]
    fn difference_of_squares() {
        let v = xs3();
        let x1 = MultiPoly::var(&v, 0);
        let one = MultiPoly::one(&v);
        let p = x1.add(&one).unwrap().mul(&x1.sub(&one).unwrap()).unwrap();
        let expect = x1.mul(&x1).unwrap().sub(&one).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn eval_simple() {
        let v = xs3();
        let p = MultiPoly::var(&v, 0).mul(&MultiPoly::var(&v, 1)).unwrap();
        let val = p
            .eval(&[q(2), Rational::new(3.into(), 2.into()), q(0)])
            .unwrap();
        assert_eq!(val, q(3));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let v = xs3();
        let p = MultiPoly::from_terms(
            &v,
            vec![
                (Monomial::from_exps(&[2, 1, 0]), q(5)),
                (Monomial::from_exps(&[0, 0, 1]), q(-3)),
            ],
        );
        assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn linear_change_scalar_and_inverse() {
        let v = VarSet::xs(1);
        let p = MultiPoly::var(&v, 0);
        let scaled = p.apply_linear_change(&[vec![q(2)]], &[0]).unwrap();
        assert_eq!(scaled, p.scale(&q(2)));

        let v2 = VarSet::xs(2);
        let p2 = MultiPoly::var(&v2, 0).mul(&MultiPoly::var(&v2, 1)).unwrap();
        let m = vec![vec![q(1), q(2)], vec![q(0), q(1)]];
        let minv = matrix_inverse(&m).unwrap();
        let once = p2.apply_linear_change(&m, &[0, 1]).unwrap();
        let back = once.apply_linear_change(&minv, &[0, 1]).unwrap();
        assert_eq!(back, p2);
    }

    #[test]
    fn swap_fixes_symmetric() {
        let v2 = VarSet::xs(2);
        let p2 = MultiPoly::var(&v2, 0).mul(&MultiPoly::var(&v2, 1)).unwrap();
        let swap = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(p2.apply_linear_change(&swap, &[0, 1]).unwrap(), p2);
    }

    #[test]
    fn singular_change_rejected() {
        let v = VarSet::xs(2);
        let p = MultiPoly::var(&v, 0);
        let m = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(p.apply_linear_change(&m, &[0, 1]).is_err());
    }

    #[test]
    fn universe_mismatch_detected() {
        let a = MultiPoly::var(&VarSet::xs(2), 0);
        let b = MultiPoly::var(&VarSet::xs(3), 0);
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn bareiss_det_matches_hand_expansion() {
        let v = xs3();
        let x = |i| MultiPoly::var(&v, i);
        let one = MultiPoly::one(&v);
        // det [[1, x1], [x1, 1]] = 1 - x1^2
        let d = det_bareiss(&[vec![one.clone(), x(0)], vec![x(0), one.clone()]]).unwrap();
        let expect = one.sub(&x(0).mul(&x(0)).unwrap()).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn exact_division() {
        let v = xs3();
        let x = |i| MultiPoly::var(&v, i);
        let p = x(0).add(&x(1)).unwrap();
        let sq = p.mul(&p).unwrap();
        assert_eq!(sq.div_exact(&p).unwrap(), p);
        assert!(sq.div_exact(&x(2)).is_none());
    }

    #[test]
    fn canonical_text() {
        let v = xs3();
        let p = MultiPoly::from_terms(
            &v,
            vec![
                (Monomial::from_exps(&[0, 0, 0]), q(1)),
                (Monomial::from_exps(&[2, 0, 1]), Rational::new((-5).into(), 2.into())),
            ],
        );
        assert_eq!(p.to_canonical_string(), "-5/2*x1^2*x3 + 1");
    }
}
