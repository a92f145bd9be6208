//! Gröbner bases, ideal dimension, and shape-position conversion for
//! zero-dimensional ideals.

mod dimension;
mod engine;
mod quotient;

pub use engine::GbError;
pub use quotient::{DenseSolver, IncrementalSpan, Quotient};

use crate::monomial::{Monomial, TermOrder};
use crate::poly::{MultiPoly, VarSet};
use crate::rational::Rational;
use crate::rng::Sampler;
use crate::unipoly::UniPoly;
use engine::{Engine, ZPoly};
use num::{One, Zero};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::Mutex;

pub const DEFAULT_GB_BUDGET: u64 = 50_000_000;

/// A polynomial ideal with cached Gröbner bases per term order.
#[derive(Debug)]
pub struct Ideal {
    vars: VarSet,
    gens: Vec<MultiPoly>,
    budget: u64,
    cache: Mutex<HashMap<OrderKey, Vec<MultiPoly>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum OrderKey {
    Grevlex,
    Lex,
    Elim(usize),
}

impl From<TermOrder> for OrderKey {
    fn from(o: TermOrder) -> Self {
        match o {
            TermOrder::Grevlex => OrderKey::Grevlex,
            TermOrder::Lex => OrderKey::Lex,
            TermOrder::Elim { keep } => OrderKey::Elim(keep),
        }
    }
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            vars: self.vars.clone(),
            gens: self.gens.clone(),
            budget: self.budget,
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Ideal {
    pub fn new(vars: &VarSet, gens: Vec<MultiPoly>) -> Ideal {
        Ideal {
            vars: vars.clone(),
            gens,
            budget: DEFAULT_GB_BUDGET,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Ideal {
        self.budget = budget;
        self
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// Reduced Gröbner basis, monic, sorted ascending by leading term.
    /// Deterministic for a fixed input; the result is cached per order.
    pub fn groebner_basis(&self, order: TermOrder) -> Result<Vec<MultiPoly>, GbError> {
        let key = OrderKey::from(order);
        if let Some(b) = self.cache.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let basis = match order {
            TermOrder::Lex => self.lex_basis()?,
            _ => self.run_engine(order)?,
        };
        self.cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| basis.clone());
        Ok(basis)
    }

    fn run_engine(&self, order: TermOrder) -> Result<Vec<MultiPoly>, GbError> {
        let gens: Vec<ZPoly> = self
            .gens
            .iter()
            .map(|p| ZPoly::from_multipoly(p, order))
            .collect();
        let mut eng = Engine::new(order, self.budget);
        let gb = eng.buchberger(gens)?;
        Ok(gb
            .iter()
            .map(|z| z.to_monic_multipoly(&self.vars))
            .collect())
    }

    /// Lex basis: FGLM change of ordering when the ideal is
    /// zero-dimensional in more than four variables, direct recomputation
    /// otherwise.
    fn lex_basis(&self) -> Result<Vec<MultiPoly>, GbError> {
        if self.vars.len() > 4 {
            let grevlex = self.groebner_basis(TermOrder::Grevlex)?;
            if is_unit_basis(&grevlex) {
                return Ok(grevlex);
            }
            if let Ok(q) = Quotient::new(&self.vars, &grevlex) {
                return Ok(fglm_to_lex(q));
            }
        }
        self.run_engine(TermOrder::Lex)
    }

    /// Krull dimension of the zero set; `-1` for the empty variety.
    pub fn dimension(&self) -> Result<i64, GbError> {
        let gb = self.groebner_basis(TermOrder::Grevlex)?;
        let lts: Vec<Monomial> = gb
            .iter()
            .map(|p| p.leading().expect("nonzero").0.clone())
            .collect();
        if lts.is_empty() {
            // Zero ideal: the whole space.
            return Ok(self.vars.len() as i64);
        }
        Ok(dimension::staircase_dimension(&lts, self.vars.len()))
    }

    pub fn is_empty(&self) -> Result<bool, GbError> {
        Ok(self.dimension()? == -1)
    }

    pub fn is_zero_dimensional(&self) -> Result<bool, GbError> {
        Ok(self.dimension()? == 0)
    }

    /// Quotient algebra; requires a zero-dimensional (nonempty) ideal.
    pub fn quotient(&self) -> Result<Quotient, GbError> {
        let gb = self.groebner_basis(TermOrder::Grevlex)?;
        Quotient::new(&self.vars, &gb)
    }

    /// Generators of the radical obtained by adding the squarefree part of
    /// each variable's minimal polynomial (valid in dimension zero). The
    /// returned ideal has the same zero set and a radical-defining basis.
    pub fn radical_zero_dimensional(&self) -> Result<Ideal, GbError> {
        let mut current = self.clone();
        loop {
            let mut q = current.quotient()?;
            let mut extra: Vec<MultiPoly> = Vec::new();
            for i in 0..self.vars.len() {
                let mp = q.var_min_poly(i);
                let sf = mp.squarefree_part();
                if sf.degree() < mp.degree() {
                    extra.push(unipoly_in_var(&self.vars, i, &sf));
                }
            }
            if extra.is_empty() {
                return Ok(current);
            }
            let mut gens = current.gens.clone();
            gens.extend(extra);
            current = Ideal::new(&self.vars, gens).with_budget(self.budget);
        }
    }
}

fn is_unit_basis(basis: &[MultiPoly]) -> bool {
    basis.len() == 1 && basis[0].is_constant() && !basis[0].is_zero()
}

/// Embeds a univariate polynomial as a polynomial in variable `i`.
fn unipoly_in_var(vars: &VarSet, i: usize, p: &UniPoly) -> MultiPoly {
    let n = vars.len();
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let mut exps = vec![0u16; n];
            exps[i] = k as u16;
            (Monomial::from_exps(&exps), c.clone())
        })
        .collect();
    MultiPoly::from_terms(vars, terms)
}

/// Lex Gröbner basis of a zero-dimensional quotient via the FGLM
/// linear-algebra enumeration.
pub fn fglm_to_lex(q: Quotient) -> Vec<MultiPoly> {
    let n = q.vars().len();
    let vars = q.vars().clone();

    #[derive(PartialEq, Eq)]
    struct LexWrap(Monomial);
    impl Ord for LexWrap {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            TermOrder::Lex.cmp(&self.0, &other.0)
        }
    }
    impl PartialOrd for LexWrap {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut frontier: BinaryHeap<Reverse<LexWrap>> = BinaryHeap::new();
    let mut seen: HashSet<Monomial> = HashSet::new();
    let one = Monomial::one(n);
    frontier.push(Reverse(LexWrap(one.clone())));
    seen.insert(one);

    let mut span = IncrementalSpan::new(q.dimension());
    let mut staircase: Vec<Monomial> = Vec::new();
    let mut lex_gb: Vec<MultiPoly> = Vec::new();
    let mut lex_lts: Vec<Monomial> = Vec::new();

    while let Some(Reverse(LexWrap(m))) = frontier.pop() {
        if lex_lts.iter().any(|lt| lt.divides(&m)) {
            continue;
        }
        let v = q.normal_form(&[(m.clone(), Rational::one())]);
        match span.try_add(v) {
            None => {
                staircase.push(m.clone());
                for i in 0..n {
                    let next = m.mul(&Monomial::var(n, i));
                    if seen.insert(next.clone()) {
                        frontier.push(Reverse(LexWrap(next)));
                    }
                }
            }
            Some(dep) => {
                let mut terms = vec![(m.clone(), Rational::one())];
                for (j, c) in dep.into_iter().enumerate() {
                    if !c.is_zero() {
                        terms.push((staircase[j].clone(), -c));
                    }
                }
                lex_lts.push(m);
                lex_gb.push(MultiPoly::from_terms(&vars, terms));
            }
        }
    }
    lex_gb.sort_by(|a, b| {
        TermOrder::Lex.cmp(
            &a.leading().expect("nonzero").0,
            &b.leading().expect("nonzero").0,
        )
    });
    lex_gb
}

/// A zero-dimensional ideal rewritten over a separating linear form:
/// `h(t) = 0`, `x_i = coords[i](t)` with `t = sum lambda_i x_i`.
/// `h` is monic and squarefree, so `deg h` counts the points.
#[derive(Debug, Clone)]
pub struct ShapePositionBasis {
    pub lambda: Vec<Rational>,
    pub h: UniPoly,
    pub coords: Vec<UniPoly>,
}

impl ShapePositionBasis {
    pub fn point_count(&self) -> usize {
        self.h.degree()
    }
}

/// Computes a shape-position basis of the radical of a zero-dimensional
/// ideal. Separating-form coefficients are drawn uniformly from
/// `{-99..99}` through the caller's seeded sampler; a form that fails to
/// separate is redrawn up to `retries` times.
pub fn shape_position_basis(
    ideal: &Ideal,
    sampler: &mut Sampler,
    retries: usize,
) -> Result<ShapePositionBasis, GbError> {
    let radical = ideal.radical_zero_dimensional()?;
    let mut q = radical.quotient()?;
    let d = q.dimension();
    if d == 0 {
        return Err(GbError::NotZeroDimensional { dim: -1 });
    }
    let n = ideal.vars().len();
    let mut tried = 0;
    loop {
        let lambda: Vec<Rational> = if tried == 0 && n == 1 {
            vec![Rational::one()]
        } else {
            (0..n)
                .map(|_| Rational::from_integer(sampler.int_in_symmetric_range(99).into()))
                .collect()
        };
        tried += 1;
        if lambda.iter().all(|c| c.is_zero()) {
            continue;
        }
        let (h, vectors) = q.min_poly(&lambda);
        if h.degree() == d {
            let solver =
                DenseSolver::new(&vectors).expect("independent Krylov vectors form a basis");
            let coords: Vec<UniPoly> = (0..n)
                .map(|i| UniPoly::from_coeffs(solver.solve(&q.var_coords(i))))
                .collect();
            debug_assert!(h.gcd(&h.derivative()).is_constant());
            return Ok(ShapePositionBasis {
                lambda,
                h: h.monic(),
                coords,
            });
        }
        if tried > retries {
            return Err(GbError::SeparatingFormExhausted { tried });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    fn xs(n: usize) -> VarSet {
        VarSet::xs(n)
    }

    fn var(v: &VarSet, i: usize) -> MultiPoly {
        MultiPoly::var(v, i)
    }

    fn c(v: &VarSet, k: i64) -> MultiPoly {
        MultiPoly::constant(v, q(k))
    }

    #[test]
    fn inconsistent_linear_system_gives_unit() {
        let v = xs(1);
        let g1 = var(&v, 0).sub(&c(&v, 1)).unwrap();
        let g2 = var(&v, 0).sub(&c(&v, 2)).unwrap();
        let i = Ideal::new(&v, vec![g1, g2]);
        let gb = i.groebner_basis(TermOrder::Grevlex).unwrap();
        assert_eq!(gb.len(), 1);
        assert!(gb[0].is_constant());
        assert_eq!(i.dimension().unwrap(), -1);
        assert!(i.is_empty().unwrap());
    }

    #[test]
    fn twisted_cubic_bases() {
        // <x2 - x1^2, x3 - x1^3>
        let v = xs(3);
        let x1 = var(&v, 0);
        let g1 = var(&v, 1).sub(&x1.mul(&x1).unwrap()).unwrap();
        let g2 = var(&v, 2).sub(&x1.mul(&x1).unwrap().mul(&x1).unwrap()).unwrap();
        let i = Ideal::new(&v, vec![g1, g2]);
        let gb = i.groebner_basis(TermOrder::Grevlex).unwrap();
        // Grevlex staircase of the twisted cubic: lts {x1^2, x1x2, x2^2}.
        let lts: Vec<_> = gb
            .iter()
            .map(|p| p.leading().unwrap().0.exps().to_vec())
            .collect();
        assert!(lts.contains(&vec![2, 0, 0]));
        assert!(lts.contains(&vec![1, 1, 0]));
        assert!(lts.contains(&vec![0, 2, 0]));
        assert_eq!(i.dimension().unwrap(), 1);
        // Lex basis eliminates: contains a polynomial free of x1.
        let lex = i.groebner_basis(TermOrder::Lex).unwrap();
        assert!(lex.iter().any(|p| p
            .terms()
            .iter()
            .all(|(m, _)| m.exp(0) == 0)));
    }

    #[test]
    fn idempotent_on_own_output() {
        let v = xs(2);
        let g1 = var(&v, 0).mul(&var(&v, 1)).unwrap().sub(&c(&v, 1)).unwrap();
        let g2 = var(&v, 0)
            .mul(&var(&v, 0))
            .unwrap()
            .sub(&var(&v, 1))
            .unwrap();
        let i = Ideal::new(&v, vec![g1, g2]);
        let gb1 = i.groebner_basis(TermOrder::Grevlex).unwrap();
        let i2 = Ideal::new(&v, gb1.clone());
        let gb2 = i2.groebner_basis(TermOrder::Grevlex).unwrap();
        assert_eq!(gb1, gb2);
    }

    #[test]
    fn univariate_zero_dimensional() {
        let v = xs(1);
        let p = var(&v, 0)
            .mul(&var(&v, 0))
            .unwrap()
            .sub(&c(&v, 2))
            .unwrap();
        let i = Ideal::new(&v, vec![p]);
        assert!(i.is_zero_dimensional().unwrap());
        assert!(!i.is_empty().unwrap());
    }

    #[test]
    fn shape_position_univariate() {
        // <x1^2 - 2> with lambda = x1: h = t^2 - 2, x1 = t.
        let v = xs(1);
        let p = var(&v, 0)
            .mul(&var(&v, 0))
            .unwrap()
            .sub(&c(&v, 2))
            .unwrap();
        let i = Ideal::new(&v, vec![p]);
        let mut sampler = Sampler::from_seed(7);
        let sp = shape_position_basis(&i, &mut sampler, 16).unwrap();
        assert_eq!(sp.point_count(), 2);
        // x1 must equal a polynomial whose square is 2 mod h.
        let sq = sp.coords[0].mulmod(&sp.coords[0], &sp.h);
        assert_eq!(sq, UniPoly::constant(q(2)));
    }

    #[test]
    fn shape_position_four_points() {
        // <x1^2 - 1, x2^2 - 1>: the four sign points.
        let v = xs(2);
        let g1 = var(&v, 0)
            .mul(&var(&v, 0))
            .unwrap()
            .sub(&c(&v, 1))
            .unwrap();
        let g2 = var(&v, 1)
            .mul(&var(&v, 1))
            .unwrap()
            .sub(&c(&v, 1))
            .unwrap();
        let i = Ideal::new(&v, vec![g1, g2]);
        let mut sampler = Sampler::from_seed(3);
        let sp = shape_position_basis(&i, &mut sampler, 16).unwrap();
        assert_eq!(sp.point_count(), 4);
        // Each coordinate squares to 1 modulo h.
        for g in &sp.coords {
            assert_eq!(g.mulmod(g, &sp.h), UniPoly::constant(q(1)));
        }
    }

    #[test]
    fn shape_position_single_point() {
        let v = xs(2);
        let g1 = var(&v, 0).sub(&c(&v, 1)).unwrap();
        let g2 = var(&v, 1).add(&c(&v, 1)).unwrap();
        let i = Ideal::new(&v, vec![g1, g2]);
        let mut sampler = Sampler::from_seed(5);
        let sp = shape_position_basis(&i, &mut sampler, 16).unwrap();
        assert_eq!(sp.point_count(), 1);
        assert_eq!(sp.coords[0].coeff(0), q(1));
        assert_eq!(sp.coords[1].coeff(0), q(-1));
    }

    #[test]
    fn radical_squares_away() {
        // <(x1 - 1)^2>: radical is <x1 - 1>.
        let v = xs(1);
        let f = var(&v, 0).sub(&c(&v, 1)).unwrap();
        let i = Ideal::new(&v, vec![f.mul(&f).unwrap()]);
        let rad = i.radical_zero_dimensional().unwrap();
        let gb = rad.groebner_basis(TermOrder::Grevlex).unwrap();
        assert_eq!(gb, vec![f]);
    }

    #[test]
    fn budget_surfaces_as_error() {
        let v = xs(3);
        // Katsura-ish small system with a tiny budget must fail loudly.
        let g1 = var(&v, 0)
            .add(&var(&v, 1))
            .unwrap()
            .add(&var(&v, 2))
            .unwrap()
            .sub(&c(&v, 1))
            .unwrap();
        let g2 = var(&v, 0)
            .mul(&var(&v, 1))
            .unwrap()
            .add(&var(&v, 1).mul(&var(&v, 2)).unwrap())
            .unwrap()
            .sub(&var(&v, 2).mul(&var(&v, 2)).unwrap())
            .unwrap();
        let g3 = var(&v, 0)
            .mul(&var(&v, 0))
            .unwrap()
            .sub(&var(&v, 1).mul(&var(&v, 2)).unwrap())
            .unwrap();
        let i = Ideal::new(&v, vec![g1, g2, g3]).with_budget(2);
        match i.groebner_basis(TermOrder::Grevlex) {
            Err(GbError::Budget { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
