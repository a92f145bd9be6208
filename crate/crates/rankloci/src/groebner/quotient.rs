//! The quotient algebra of a zero-dimensional ideal.
//!
//! Built from a grevlex Gröbner basis: staircase enumeration, normal
//! forms, multiplication maps, Krylov minimal polynomials, Seidenberg
//! radicalization, and the linear-algebra change of ordering used for
//! shape-position bases.

use super::engine::GbError;
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{MultiPoly, VarSet};
use crate::rational::Rational;
use crate::unipoly::UniPoly;
use num::{One, Zero};
use std::collections::HashMap;

const STAIRCASE_CAP: usize = 200_000;

/// Monic reduced basis element split as leading monomial + tail.
#[derive(Debug, Clone)]
struct Rule {
    lt: Monomial,
    mask: u64,
    tail: Vec<(Monomial, Rational)>,
}

#[derive(Debug)]
pub struct Quotient {
    vars: VarSet,
    rules: Vec<Rule>,
    staircase: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// Lazily filled columns of multiplication by each variable.
    mult_cache: Vec<Vec<Option<Vec<Rational>>>>,
}

impl Quotient {
    /// Requires a reduced monic grevlex basis of a zero-dimensional ideal.
    pub fn new(vars: &VarSet, basis: &[MultiPoly]) -> Result<Quotient, GbError> {
        let n = vars.len();
        let rules: Vec<Rule> = basis
            .iter()
            .map(|p| {
                let (lt, lc) = p.leading().expect("nonzero basis element");
                debug_assert!(lc.is_one());
                Rule {
                    lt: lt.clone(),
                    mask: lt.support_mask(),
                    tail: p.terms()[1..].to_vec(),
                }
            })
            .collect();
        // Zero-dimensionality: every variable needs a pure power among the
        // leading terms.
        for i in 0..n {
            let has = rules
                .iter()
                .any(|r| r.lt.exps().iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)));
            if !has {
                let dim = super::dimension::staircase_dimension(
                    &rules.iter().map(|r| r.lt.clone()).collect::<Vec<_>>(),
                    n,
                );
                return Err(GbError::NotZeroDimensional { dim });
            }
        }
        // Enumerate the staircase.
        let mut staircase = Vec::new();
        let mut index = HashMap::new();
        let mut queue = vec![Monomial::one(n)];
        let mut seen: HashMap<Monomial, ()> = HashMap::new();
        seen.insert(queue[0].clone(), ());
        while let Some(m) = queue.pop() {
            if rules.iter().any(|r| r.lt.divides(&m)) {
                continue;
            }
            index.insert(m.clone(), staircase.len());
            staircase.push(m.clone());
            if staircase.len() > STAIRCASE_CAP {
                return Err(GbError::NotZeroDimensional { dim: 0 });
            }
            for i in 0..n {
                let next = m.mul(&Monomial::var(n, i));
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    queue.push(next);
                }
            }
        }
        // Ascending grevlex: staircase[0] is the monomial 1.
        staircase.sort_by(|a, b| TermOrder::Grevlex.cmp(a, b));
        let index: HashMap<Monomial, usize> = staircase
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mult_cache = vec![vec![None; staircase.len()]; n];
        Ok(Quotient {
            vars: vars.clone(),
            rules,
            staircase,
            index,
            mult_cache,
        })
    }

    pub fn dimension(&self) -> usize {
        self.staircase.len()
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// Normal form as coordinates over the staircase basis.
    pub fn normal_form(&self, terms: &[(Monomial, Rational)]) -> Vec<Rational> {
        let mut work: Vec<(Monomial, Rational)> = terms.to_vec();
        work.sort_by(|a, b| TermOrder::Grevlex.cmp(&b.0, &a.0));
        let mut coords = vec![Rational::zero(); self.staircase.len()];
        while let Some((m, c)) = work.first().cloned() {
            // Merge equal leading monomials first.
            let mut c = c;
            work.remove(0);
            while let Some((m2, _)) = work.first() {
                if *m2 == m {
                    c += &work.remove(0).1;
                } else {
                    break;
                }
            }
            if c.is_zero() {
                continue;
            }
            let mask = m.support_mask();
            let rule = self
                .rules
                .iter()
                .find(|r| r.mask & !mask == 0 && r.lt.divides(&m));
            match rule {
                None => {
                    let idx = *self.index.get(&m).expect("staircase monomial");
                    coords[idx] += c;
                }
                Some(r) => {
                    let shift = r.lt.quotient(&m);
                    let add: Vec<(Monomial, Rational)> = r
                        .tail
                        .iter()
                        .map(|(tm, tc)| (tm.mul(&shift), -(tc * &c)))
                        .collect();
                    let mut merged = Vec::with_capacity(work.len() + add.len());
                    let (mut i, mut j) = (0, 0);
                    while i < work.len() && j < add.len() {
                        match TermOrder::Grevlex.cmp(&work[i].0, &add[j].0) {
                            std::cmp::Ordering::Greater => {
                                merged.push(work[i].clone());
                                i += 1;
                            }
                            std::cmp::Ordering::Less => {
                                merged.push(add[j].clone());
                                j += 1;
                            }
                            std::cmp::Ordering::Equal => {
                                let s = &work[i].1 + &add[j].1;
                                if !s.is_zero() {
                                    merged.push((work[i].0.clone(), s));
                                }
                                i += 1;
                                j += 1;
                            }
                        }
                    }
                    merged.extend_from_slice(&work[i..]);
                    merged.extend_from_slice(&add[j..]);
                    work = merged;
                }
            }
        }
        coords
    }

    /// Coordinates of `x_i * (staircase basis element b)`.
    fn mult_var_column(&mut self, var: usize, b: usize) -> Vec<Rational> {
        if let Some(col) = &self.mult_cache[var][b] {
            return col.clone();
        }
        let m = self.staircase[b].mul(&Monomial::var(self.vars.len(), var));
        let col = match self.index.get(&m) {
            Some(&i) => {
                let mut v = vec![Rational::zero(); self.staircase.len()];
                v[i] = Rational::one();
                v
            }
            None => self.normal_form(&[(m, Rational::one())]),
        };
        self.mult_cache[var][b] = Some(col.clone());
        col
    }

    /// Applies multiplication by the linear form `sum lambda_i x_i` to the
    /// coordinate vector `v`.
    pub fn apply_linear_mult(&mut self, lambda: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let d = self.staircase.len();
        let mut out = vec![Rational::zero(); d];
        for b in 0..d {
            if v[b].is_zero() {
                continue;
            }
            for (i, li) in lambda.iter().enumerate() {
                if li.is_zero() {
                    continue;
                }
                let col = self.mult_var_column(i, b);
                let s = li * &v[b];
                for (o, c) in out.iter_mut().zip(col.iter()) {
                    if !c.is_zero() {
                        *o += c * &s;
                    }
                }
            }
        }
        out
    }

    /// Minimal polynomial of multiplication by `sum lambda_i x_i`, together
    /// with the Krylov vectors `1, u, u^2, ...` (one per degree).
    pub fn min_poly(&mut self, lambda: &[Rational]) -> (UniPoly, Vec<Vec<Rational>>) {
        let d = self.staircase.len();
        let mut span = IncrementalSpan::new(d);
        let mut vectors: Vec<Vec<Rational>> = Vec::new();
        let mut v = vec![Rational::zero(); d];
        v[0] = Rational::one(); // NF(1): the staircase starts at 1
        loop {
            match span.try_add(v.clone()) {
                None => {
                    vectors.push(v.clone());
                    v = self.apply_linear_mult(lambda, &v);
                }
                Some(dep) => {
                    // v = sum dep_j vectors[j]  =>  min poly t^k - sum dep_j t^j
                    let k = vectors.len();
                    let mut coeffs = vec![Rational::zero(); k + 1];
                    coeffs[k] = Rational::one();
                    for (j, c) in dep.into_iter().enumerate() {
                        coeffs[j] = -c;
                    }
                    return (UniPoly::from_coeffs(coeffs), vectors);
                }
            }
        }
    }

    /// Minimal polynomial of the single variable `x_i`.
    pub fn var_min_poly(&mut self, i: usize) -> UniPoly {
        let mut lambda = vec![Rational::zero(); self.vars.len()];
        lambda[i] = Rational::one();
        self.min_poly(&lambda).0
    }

    /// Normal-form coordinates of the variable `x_i`.
    pub fn var_coords(&mut self, i: usize) -> Vec<Rational> {
        let m = Monomial::var(self.vars.len(), i);
        match self.index.get(&m) {
            Some(&idx) => {
                let mut v = vec![Rational::zero(); self.staircase.len()];
                v[idx] = Rational::one();
                v
            }
            None => self.normal_form(&[(m, Rational::one())]),
        }
    }
}

/// Incremental row echelon with dependency tracking over the original
/// insertion order.
pub struct IncrementalSpan {
    dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
    /// Row i of this matrix expresses echelon row i over the inputs.
    history: Vec<Vec<Rational>>,
}

impl IncrementalSpan {
    pub fn new(dim: usize) -> Self {
        IncrementalSpan {
            dim,
            rows: Vec::new(),
            history: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `None` if independent (vector added); otherwise the coefficients
    /// expressing the vector over the previously added ones.
    pub fn try_add(&mut self, mut v: Vec<Rational>) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.dim);
        let mut combo = vec![Rational::zero(); self.rows.len()];
        for (r, (pivot, row)) in self.rows.iter().enumerate() {
            if v[*pivot].is_zero() {
                continue;
            }
            let scale = v[*pivot].clone();
            for (vi, ri) in v.iter_mut().zip(row.iter()) {
                if !ri.is_zero() {
                    *vi -= &scale * ri;
                }
            }
            combo[r] = scale;
        }
        match v.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                let inv = v[pivot].clone().recip();
                for c in &mut v {
                    if !c.is_zero() {
                        *c *= &inv;
                    }
                }
                // history row: (input - sum combo_r * echelonrow_r) / pivot
                let mut h = vec![Rational::zero(); self.history.len() + 1];
                *h.last_mut().unwrap() = inv.clone();
                for (r, c) in combo.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (k, hv) in self.history[r].iter().enumerate() {
                        let t = &inv * c * hv;
                        h[k] -= t;
                    }
                }
                for row in &mut self.history {
                    row.push(Rational::zero());
                }
                self.history.push(h);
                self.rows.push((pivot, v));
                None
            }
            None => {
                // Dependent: expand the echelon combination over the inputs.
                let mut out = vec![Rational::zero(); self.history.len()];
                for (r, c) in combo.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (k, hv) in self.history[r].iter().enumerate() {
                        if !hv.is_zero() {
                            out[k] += c * hv;
                        }
                    }
                }
                Some(out)
            }
        }
    }
}

/// Solves the square system `A x = b` where `A`'s columns are given; used
/// to express coordinates over the powers of a separating form.
pub struct DenseSolver {
    n: usize,
    lu: Vec<Vec<Rational>>,
    perm: Vec<usize>,
}

impl DenseSolver {
    pub fn new(columns: &[Vec<Rational>]) -> Option<DenseSolver> {
        let n = columns.len();
        if n == 0 || columns.iter().any(|c| c.len() != n) {
            return None;
        }
        // Rows of A: a[i][j] = columns[j][i]
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| columns[j][i].clone()).collect())
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, p);
            perm.swap(col, p);
            let inv = a[col][col].clone().recip();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                a[r][col] = f.clone();
                for c in col + 1..n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
        Some(DenseSolver { n, lu: a, perm })
    }

    pub fn solve(&self, b: &[Rational]) -> Vec<Rational> {
        let n = self.n;
        let mut y: Vec<Rational> = (0..n).map(|i| b[self.perm[i]].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = &self.lu[i][j] * &y[j];
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &self.lu[i][j] * &y[j];
                y[i] -= t;
            }
            y[i] /= &self.lu[i][i];
        }
        y
    }
}
