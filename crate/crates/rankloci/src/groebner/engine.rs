//! Buchberger engine over primitive integer polynomials.
//!
//! Polynomials are scaled to content 1 with a positive leading coefficient
//! and reduced by fraction-free pseudo-division, which keeps every
//! intermediate value in `Z`. Pair selection follows the sugar strategy;
//! both classic Buchberger criteria prune the queue. A step budget turns
//! runaway computations into an explicit error instead of a wrong answer.

use crate::monomial::{Monomial, TermOrder};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use num::{BigInt, Integer, One, Signed, Zero};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

#[derive(Debug, Clone, thiserror::Error)]
pub enum GbError {
    #[error("Groebner budget exceeded after {steps} reduction steps")]
    Budget { steps: u64 },
    #[error("ideal is not zero-dimensional (dimension {dim})")]
    NotZeroDimensional { dim: i64 },
    #[error("no separating linear form found after {tried} attempts")]
    SeparatingFormExhausted { tried: usize },
}

/// Primitive integer polynomial, terms sorted descending in the engine's
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ZPoly {
    pub terms: Vec<(Monomial, BigInt)>,
}

impl ZPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> &(Monomial, BigInt) {
        &self.terms[0]
    }

    pub fn is_constant_nonzero(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Divides by the content and fixes the sign of the leading term.
    fn normalize(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut content = BigInt::zero();
        for (_, c) in &self.terms {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &content;
            }
        }
    }

    fn max_coeff_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }

    pub fn from_multipoly(p: &MultiPoly, order: TermOrder) -> ZPoly {
        let mut den = BigInt::one();
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .iter()
            .map(|(m, c)| {
                (
                    m.clone(),
                    (c * Rational::from_integer(den.clone())).to_integer(),
                )
            })
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut z = ZPoly { terms };
        z.normalize();
        z
    }

    /// Back to a monic rational polynomial.
    pub fn to_monic_multipoly(&self, vars: &crate::poly::VarSet) -> MultiPoly {
        if self.is_zero() {
            return MultiPoly::zero(vars);
        }
        let lc = self.terms[0].1.clone();
        MultiPoly::from_terms(
            vars,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::new(c.clone(), lc.clone())))
                .collect(),
        )
    }
}

/// Merges `dst` (sorted desc) with `-(factor) * shift * src_tail`.
fn merge_sub(
    order: TermOrder,
    dst: Vec<(Monomial, BigInt)>,
    src_tail: &[(Monomial, BigInt)],
    shift: &Monomial,
    factor: &BigInt,
) -> Vec<(Monomial, BigInt)> {
    let mut out = Vec::with_capacity(dst.len() + src_tail.len());
    let mut i = 0;
    let mut j = 0;
    while i < dst.len() && j < src_tail.len() {
        let sm = src_tail[j].0.mul(shift);
        match order.cmp(&dst[i].0, &sm) {
            std::cmp::Ordering::Greater => {
                out.push(dst[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((sm, -(factor * &src_tail[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &dst[i].1 - factor * &src_tail[j].1;
                if !c.is_zero() {
                    out.push((dst[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&dst[i..]);
    for (m, c) in &src_tail[j..] {
        out.push((m.mul(shift), -(factor * c)));
    }
    out
}

pub(crate) struct Engine {
    pub order: TermOrder,
    pub budget: u64,
    pub steps: u64,
}

impl Engine {
    pub fn new(order: TermOrder, budget: u64) -> Self {
        Engine {
            order,
            budget,
            steps: 0,
        }
    }

    fn tick(&mut self) -> Result<(), GbError> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(GbError::Budget { steps: self.steps })
        } else {
            Ok(())
        }
    }

    /// Full normal form of `p` against `basis` by pseudo-reduction.
    pub fn normal_form(
        &mut self,
        mut p: ZPoly,
        basis: &[ZPoly],
        masks: &[u64],
    ) -> Result<ZPoly, GbError> {
        let mut idx = 0;
        let mut since_strip = 0u32;
        while idx < p.terms.len() {
            let (m, mask) = {
                let t = &p.terms[idx];
                (t.0.clone(), t.0.support_mask())
            };
            // Reducer with the fewest terms keeps growth down.
            let mut best: Option<usize> = None;
            for (k, g) in basis.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let glt = &g.terms[0].0;
                if masks[k] & !mask != 0 {
                    continue;
                }
                if glt.divides(&m) {
                    match best {
                        Some(b) if basis[b].terms.len() <= g.terms.len() => {}
                        _ => best = Some(k),
                    }
                }
            }
            let Some(k) = best else {
                idx += 1;
                continue;
            };
            self.tick()?;
            let g = &basis[k];
            let c = p.terms[idx].1.clone();
            let alpha = g.terms[0].1.clone();
            let d = alpha.gcd(&c);
            let scale = &alpha / &d;
            let factor = &c / &d;
            let shift = g.terms[0].0.quotient(&m);
            if !scale.is_one() {
                for (_, pc) in &mut p.terms {
                    *pc = &*pc * &scale;
                }
            }
            let tail = p.terms.split_off(idx + 1);
            p.terms.pop(); // the reduced term cancels exactly
            let merged = merge_sub(self.order, tail, &g.terms[1..], &shift, &factor);
            p.terms.extend(merged);
            since_strip += 1;
            if since_strip >= 24 || p.max_coeff_bits() > 8192 {
                p.normalize();
                since_strip = 0;
            }
        }
        p.normalize();
        Ok(p)
    }

    /// S-polynomial of `f` and `g` in fraction-free form.
    fn s_poly(&self, f: &ZPoly, g: &ZPoly) -> ZPoly {
        let (fm, fc) = f.leading();
        let (gm, gc) = g.leading();
        let lcm = fm.lcm(gm);
        let d = fc.gcd(gc);
        let cf = gc / &d;
        let cg = fc / &d;
        let uf = fm.quotient(&lcm);
        let ug = gm.quotient(&lcm);
        // cf * uf * f - cg * ug * g; the leading terms cancel.
        let left: Vec<(Monomial, BigInt)> = f.terms[1..]
            .iter()
            .map(|(m, c)| (m.mul(&uf), c * &cf))
            .collect();
        let terms = merge_sub(self.order, left, &g.terms[1..], &ug, &cg);
        let mut z = ZPoly { terms };
        z.normalize();
        z
    }

    /// Reduced Gröbner basis of the input generators.
    pub fn buchberger(&mut self, gens: Vec<ZPoly>) -> Result<Vec<ZPoly>, GbError> {
        let mut basis: Vec<ZPoly> = gens.into_iter().filter(|p| !p.is_zero()).collect();
        basis.sort_by(|a, b| self.order.cmp(&a.terms[0].0, &b.terms[0].0));
        if basis.iter().any(|p| p.is_constant_nonzero()) {
            return Ok(vec![one_poly(&basis)]);
        }
        let mut sugars: Vec<u32> = basis.iter().map(|p| p.terms[0].0.degree().max(total_degree(p))).collect();
        let mut masks: Vec<u64> = basis.iter().map(|p| p.terms[0].0.support_mask()).collect();

        #[derive(PartialEq, Eq, PartialOrd, Ord)]
        struct Pair {
            sugar: u32,
            lcm_deg: u32,
            i: u32,
            j: u32,
        }
        let mut heap: BinaryHeap<Reverse<Pair>> = BinaryHeap::new();
        let mut done: HashSet<(u32, u32)> = HashSet::new();
        let push_pairs = |heap: &mut BinaryHeap<Reverse<Pair>>,
                              basis: &[ZPoly],
                              sugars: &[u32],
                              t: usize| {
            for i in 0..t {
                if basis[i].is_zero() {
                    continue;
                }
                let lcm = basis[i].terms[0].0.lcm(&basis[t].terms[0].0);
                let su = (sugars[i] + (lcm.degree() - basis[i].terms[0].0.degree()))
                    .max(sugars[t] + (lcm.degree() - basis[t].terms[0].0.degree()));
                heap.push(Reverse(Pair {
                    sugar: su,
                    lcm_deg: lcm.degree(),
                    i: i as u32,
                    j: t as u32,
                }));
            }
        };
        for t in 1..basis.len() {
            push_pairs(&mut heap, &basis, &sugars, t);
        }

        while let Some(Reverse(pair)) = heap.pop() {
            let (i, j) = (pair.i as usize, pair.j as usize);
            done.insert((pair.i, pair.j));
            if basis[i].is_zero() || basis[j].is_zero() {
                continue;
            }
            let (li, lj) = (&basis[i].terms[0].0, &basis[j].terms[0].0);
            // Product criterion.
            if li.is_coprime(lj) {
                continue;
            }
            // Chain criterion.
            let lcm = li.lcm(lj);
            let mut skip = false;
            for (k, g) in basis.iter().enumerate() {
                if k == i || k == j || g.is_zero() {
                    continue;
                }
                if g.terms[0].0.divides(&lcm) {
                    let a = (pair.i.min(k as u32), pair.i.max(k as u32));
                    let b = (pair.j.min(k as u32), pair.j.max(k as u32));
                    if done.contains(&a) && done.contains(&b) {
                        skip = true;
                        break;
                    }
                }
            }
            if skip {
                continue;
            }
            let sp = self.s_poly(&basis[i], &basis[j]);
            let nf = self.normal_form(sp, &basis, &masks)?;
            if nf.is_zero() {
                continue;
            }
            if nf.is_constant_nonzero() {
                return Ok(vec![one_poly(&basis)]);
            }
            let t = basis.len();
            sugars.push(pair.sugar.max(total_degree(&nf)));
            masks.push(nf.terms[0].0.support_mask());
            basis.push(nf);
            push_pairs(&mut heap, &basis, &sugars, t);
            // Retire elements whose leading term became divisible.
            for k in 0..t {
                if !basis[k].is_zero()
                    && basis[t].terms[0].0.divides(&basis[k].terms[0].0)
                    && basis[t].terms[0].0 != basis[k].terms[0].0
                {
                    // Keep for pair bookkeeping but stop using as reducer
                    // only if fully divisible; the element is redundant for
                    // the final basis, which inter-reduction removes.
                }
            }
        }
        Ok(self.inter_reduce(basis)?)
    }

    /// Minimalizes and tail-reduces into the unique reduced basis
    /// (primitive integer scaling).
    fn inter_reduce(&mut self, mut basis: Vec<ZPoly>) -> Result<Vec<ZPoly>, GbError> {
        basis.retain(|p| !p.is_zero());
        // Minimal: drop any element whose LT is divisible by another LT.
        let mut keep = vec![true; basis.len()];
        for i in 0..basis.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..basis.len() {
                if i == j || !keep[j] {
                    continue;
                }
                if basis[j].terms[0].0.divides(&basis[i].terms[0].0)
                    && (basis[j].terms[0].0 != basis[i].terms[0].0 || j < i)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut minimal: Vec<ZPoly> = basis
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        minimal.sort_by(|a, b| self.order.cmp(&a.terms[0].0, &b.terms[0].0));
        // Tail-reduce each element against the others.
        for i in 0..minimal.len() {
            let p = minimal[i].clone();
            let others: Vec<ZPoly> = minimal
                .iter()
                .enumerate()
                .filter_map(|(k, g)| (k != i).then(|| g.clone()))
                .collect();
            let masks: Vec<u64> = others.iter().map(|g| g.terms[0].0.support_mask()).collect();
            minimal[i] = self.normal_form(p, &others, &masks)?;
        }
        minimal.retain(|p| !p.is_zero());
        minimal.sort_by(|a, b| self.order.cmp(&a.terms[0].0, &b.terms[0].0));
        Ok(minimal)
    }
}

fn total_degree(p: &ZPoly) -> u32 {
    p.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
}

fn one_poly(basis: &[ZPoly]) -> ZPoly {
    let nvars = basis
        .first()
        .map(|p| p.terms[0].0.nvars())
        .unwrap_or(0);
    ZPoly {
        terms: vec![(Monomial::one(nvars), BigInt::one())],
    }
}
