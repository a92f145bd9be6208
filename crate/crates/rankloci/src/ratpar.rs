//! Rational parametrizations of finite point sets and the operations the
//! solver composes: parametrize, project, lift, image, union.
//!
//! A finite set `Z` in `n` coordinates is encoded by univariate
//! polynomials `(q0, q1..qn, qlast)`: the points are
//! `(q1(t)/q0(t), ..., qn(t)/q0(t))` as `t` runs over the roots of the
//! squarefree `qlast`, and `q0 = qlast'`, which keeps coefficient sizes
//! modest. The empty set is the canonical `qlast = 1`.

use crate::groebner::{shape_position_basis, DenseSolver, GbError, Ideal, IncrementalSpan};
use crate::monomial::{Monomial, TermOrder};
use crate::poly::{matrix_inverse, ArithError, MultiPoly, VarSet};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::rng::Sampler;
use crate::unipoly::{crt, UniPoly};
use num::{One, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SEPARATING_RETRIES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParametrization {
    nvars: usize,
    q0: UniPoly,
    qs: Vec<UniPoly>,
    qlast: UniPoly,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum RatParError {
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("parametrizations have different numbers of coordinates")]
    MixedArity,
    #[error("no common separating form found after {tried} attempts")]
    UnionRetriesExhausted { tried: usize },
    #[error("projection subset out of range")]
    BadSubset,
}

impl RationalParametrization {
    /// The canonical empty parametrization `q = 1`.
    pub fn empty(nvars: usize) -> Self {
        RationalParametrization {
            nvars,
            q0: UniPoly::one(),
            qs: vec![UniPoly::zero(); nvars],
            qlast: UniPoly::one(),
        }
    }

    /// Assembles from a shape-position basis: `qlast` the squarefree
    /// minimal polynomial, `q0 = qlast'`, `qi = gi * q0 mod qlast`.
    pub fn from_shape(h: &UniPoly, coords: &[UniPoly]) -> Self {
        let qlast = h.primitive();
        let q0 = qlast.derivative();
        let qs = coords
            .iter()
            .map(|g| g.mulmod(&q0, &qlast))
            .collect();
        RationalParametrization {
            nvars: coords.len(),
            q0,
            qs,
            qlast,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of encoded points (degree of the squarefree `qlast`).
    pub fn degree(&self) -> usize {
        self.qlast.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.qlast.is_constant()
    }

    pub fn q0(&self) -> &UniPoly {
        &self.q0
    }

    pub fn coord(&self, i: usize) -> &UniPoly {
        &self.qs[i]
    }

    pub fn qlast(&self) -> &UniPoly {
        &self.qlast
    }

    /// Coordinate functions as residues `qi * q0^{-1} mod qlast`.
    pub fn coordinate_residues(&self) -> Option<Vec<UniPoly>> {
        if self.is_empty() {
            return Some(Vec::new());
        }
        let inv = self.q0.invmod(&self.qlast)?;
        Some(self.qs.iter().map(|q| q.mulmod(&inv, &self.qlast)).collect())
    }

    /// Exact membership of a rational point: some root of `qlast` maps to
    /// it. Computed as a gcd condition, no root isolation involved.
    pub fn contains_rational_point(&self, point: &[Rational]) -> bool {
        if point.len() != self.nvars || self.is_empty() {
            return false;
        }
        let mut g = self.qlast.clone();
        for (i, pi) in point.iter().enumerate() {
            let num = self.qs[i].sub(&self.q0.scale(pi));
            g = g.gcd(&num);
            if g.is_constant() {
                return false;
            }
        }
        !g.is_constant()
    }

    /// Evaluates `p(q1/q0, ..., qn/q0)` in `Q[t]/(qlast)`; `true` when the
    /// numerator vanishes identically, i.e. every encoded point is a zero
    /// of `p`.
    pub fn annihilates(&self, p: &MultiPoly) -> bool {
        if self.is_empty() {
            return true;
        }
        assert_eq!(p.nvars(), self.nvars);
        let residues = match self.coordinate_residues() {
            Some(r) => r,
            None => return false,
        };
        let mut acc = UniPoly::zero();
        for (m, c) in p.terms() {
            let mut term = UniPoly::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term = term.mulmod(&residues[i], &self.qlast);
                }
            }
            acc = acc.add(&term).rem(&self.qlast);
        }
        acc.is_zero()
    }

    /// The ideal of the encoded point set in fresh variables
    /// `x1..xn, t`: `{qlast(t), q0(t) xi - qi(t)}`.
    fn graph_ideal(&self) -> (VarSet, Vec<MultiPoly>) {
        let n = self.nvars;
        let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        names.push("t".to_string());
        let vars = VarSet::new(names);
        let t = n;
        let mut gens = vec![unipoly_as_multipoly(&vars, t, &self.qlast)];
        for i in 0..n {
            let q0x = unipoly_as_multipoly(&vars, t, &self.q0)
                .mul(&MultiPoly::var(&vars, i))
                .expect("same universe");
            let qi = unipoly_as_multipoly(&vars, t, &self.qs[i]);
            gens.push(q0x.sub(&qi).expect("same universe"));
        }
        (vars, gens)
    }
}

fn unipoly_as_multipoly(vars: &VarSet, var_index: usize, p: &UniPoly) -> MultiPoly {
    let n = vars.len();
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let mut exps = vec![0u16; n];
            exps[var_index] = k as u16;
            (Monomial::from_exps(&exps), c.clone())
        })
        .collect();
    MultiPoly::from_terms(vars, terms)
}

/// Rational parametrization of the zero set of a zero-dimensional (or
/// empty) ideal, working modulo the radical.
pub fn rat_par(ideal: &Ideal, sampler: &mut Sampler) -> Result<RationalParametrization, RatParError> {
    let n = ideal.vars().len();
    if ideal.is_empty()? {
        return Ok(RationalParametrization::empty(n));
    }
    let sp = shape_position_basis(ideal, sampler, SEPARATING_RETRIES)?;
    Ok(RationalParametrization::from_shape(&sp.h, &sp.coords))
}

/// Parametrization of the projection onto the coordinate subset `keep`
/// (0-based). Projections can merge points, so the image is
/// re-parametrized through an elimination ideal.
pub fn project(
    p: &RationalParametrization,
    keep: &[usize],
    sampler: &mut Sampler,
    budget: u64,
) -> Result<RationalParametrization, RatParError> {
    if keep.iter().any(|&i| i >= p.nvars()) || keep.is_empty() {
        return Err(RatParError::BadSubset);
    }
    if p.is_empty() {
        return Ok(RationalParametrization::empty(keep.len()));
    }
    let (vars, gens) = p.graph_ideal();
    // Reorder the universe as (kept..., dropped..., t) so a single block
    // order eliminates everything past the kept coordinates.
    let mut order: Vec<usize> = keep.to_vec();
    for i in 0..p.nvars() {
        if !keep.contains(&i) {
            order.push(i);
        }
    }
    order.push(p.nvars()); // t
    let perm_vars = vars.subset(&order);
    let gens_perm: Vec<MultiPoly> = gens
        .iter()
        .map(|g| {
            let terms = g
                .terms()
                .iter()
                .map(|(m, c)| (m.restrict(&order), c.clone()))
                .collect();
            MultiPoly::from_terms(&perm_vars, terms)
        })
        .collect();
    let ideal = Ideal::new(&perm_vars, gens_perm).with_budget(budget);
    let gb = ideal.groebner_basis(TermOrder::Elim { keep: keep.len() })?;
    let kept_vars = perm_vars.subset(&(0..keep.len()).collect::<Vec<_>>());
    let restricted: Vec<MultiPoly> = gb
        .iter()
        .filter(|g| {
            g.terms()
                .iter()
                .all(|(m, _)| (keep.len()..perm_vars.len()).all(|i| m.exp(i) == 0))
        })
        .map(|g| {
            let keep_idx: Vec<usize> = (0..keep.len()).collect();
            let terms = g
                .terms()
                .iter()
                .map(|(m, c)| (m.restrict(&keep_idx), c.clone()))
                .collect();
            MultiPoly::from_terms(&kept_vars, terms)
        })
        .collect();
    let image_ideal = Ideal::new(&kept_vars, restricted).with_budget(budget);
    rat_par(&image_ideal, sampler)
}

/// Prepends the constant coordinate `t0`.
pub fn lift(p: &RationalParametrization, t0: &Rational) -> RationalParametrization {
    if p.is_empty() {
        return RationalParametrization::empty(p.nvars() + 1);
    }
    let mut qs = Vec::with_capacity(p.nvars() + 1);
    qs.push(p.q0.scale(t0));
    qs.extend(p.qs.iter().cloned());
    RationalParametrization {
        nvars: p.nvars + 1,
        q0: p.q0.clone(),
        qs,
        qlast: p.qlast.clone(),
    }
}

/// Parametrization of `M^{-1} Z`.
pub fn image(
    p: &RationalParametrization,
    m: &[Vec<Rational>],
) -> Result<RationalParametrization, RatParError> {
    let n = p.nvars();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(RatParError::Arith(ArithError::BlockSize {
            block: n,
            dim: m.len(),
        }));
    }
    let minv = matrix_inverse(m)?;
    if p.is_empty() {
        return Ok(RationalParametrization::empty(n));
    }
    let qs: Vec<UniPoly> = (0..n)
        .map(|i| {
            let mut acc = UniPoly::zero();
            for (j, qj) in p.qs.iter().enumerate() {
                if !minv[i][j].is_zero() {
                    acc = acc.add(&qj.scale(&minv[i][j]));
                }
            }
            acc.rem(&p.qlast)
        })
        .collect();
    Ok(RationalParametrization {
        nvars: n,
        q0: p.q0.clone(),
        qs,
        qlast: p.qlast.clone(),
    })
}

/// One point set rewritten over the linear form `lambda`: the squarefree
/// `h(s)` of the form's values and each coordinate as a polynomial in `s`.
/// `None` when `lambda` does not separate the set.
fn rewrite_over_form(
    p: &RationalParametrization,
    lambda: &[Rational],
) -> Option<(UniPoly, Vec<UniPoly>)> {
    let d = p.qlast.degree();
    let inv0 = p.q0.invmod(&p.qlast)?;
    let mut u = UniPoly::zero();
    for (i, li) in lambda.iter().enumerate() {
        if !li.is_zero() {
            u = u.add(&p.qs[i].scale(li));
        }
    }
    u = u.mulmod(&inv0, &p.qlast);
    // Krylov over the power basis of Q[t]/(qlast).
    let pad = |q: &UniPoly| -> Vec<Rational> {
        let mut v: Vec<Rational> = q.coeffs().to_vec();
        v.resize(d, Rational::zero());
        v
    };
    let mut span = IncrementalSpan::new(d);
    let mut powers: Vec<UniPoly> = Vec::new();
    let mut cur = UniPoly::one();
    let h = loop {
        match span.try_add(pad(&cur)) {
            None => {
                powers.push(cur.clone());
                cur = cur.mulmod(&u, &p.qlast);
            }
            Some(dep) => {
                let k = powers.len();
                let mut coeffs = vec![Rational::zero(); k + 1];
                coeffs[k] = Rational::one();
                for (j, c) in dep.into_iter().enumerate() {
                    coeffs[j] = -c;
                }
                break UniPoly::from_coeffs(coeffs);
            }
        }
    };
    if h.degree() != d {
        return None;
    }
    let cols: Vec<Vec<Rational>> = powers.iter().map(pad).collect();
    let solver = DenseSolver::new(&cols)?;
    let residues = p.coordinate_residues()?;
    let coords = residues
        .iter()
        .map(|r| UniPoly::from_coeffs(solver.solve(&pad(r))))
        .collect();
    Some((h, coords))
}

/// Parametrization of the set union, re-parametrized over a common
/// separating form drawn from the sampler; collisions between distinct
/// points force a redraw.
pub fn union(
    p1: &RationalParametrization,
    p2: &RationalParametrization,
    sampler: &mut Sampler,
) -> Result<RationalParametrization, RatParError> {
    if p1.nvars() != p2.nvars() {
        return Err(RatParError::MixedArity);
    }
    if p1.is_empty() {
        return Ok(p2.clone());
    }
    if p2.is_empty() {
        return Ok(p1.clone());
    }
    let n = p1.nvars();
    let mut tried = 0;
    while tried < SEPARATING_RETRIES {
        tried += 1;
        let lambda: Vec<Rational> = (0..n).map(|_| sampler.rational(99)).collect();
        if lambda.iter().all(|c| c.is_zero()) {
            continue;
        }
        let Some((h1, g1)) = rewrite_over_form(p1, &lambda) else {
            continue;
        };
        let Some((h2, g2)) = rewrite_over_form(p2, &lambda) else {
            continue;
        };
        let g = h1.gcd(&h2);
        // Shared form values must belong to shared points, coordinate by
        // coordinate; otherwise two distinct points collided.
        if !g.is_constant() {
            let agree = (0..n).all(|i| g1[i].sub(&g2[i]).rem(&g).is_zero());
            if !agree {
                continue;
            }
        }
        let (h2q, rem) = h2.divrem(&g);
        debug_assert!(rem.is_zero());
        let h = h1.mul(&h2q);
        let coords: Option<Vec<UniPoly>> = (0..n)
            .map(|i| {
                if h2q.is_constant() {
                    Some(g1[i].clone())
                } else {
                    crt(&g1[i], &h1, &g2[i].rem(&h2q), &h2q)
                }
            })
            .collect();
        let Some(coords) = coords else { continue };
        return Ok(RationalParametrization::from_shape(&h, &coords));
    }
    Err(RatParError::UnionRetriesExhausted { tried })
}

#[derive(Serialize, Deserialize)]
struct RpJson {
    n: usize,
    q0: Vec<String>,
    q: Vec<Vec<String>>,
    qlast: Vec<String>,
}

fn coeff_strings(p: &UniPoly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn coeffs_from_strings(v: &[String]) -> Result<UniPoly, crate::rational::RationalParseError> {
    let coeffs: Result<Vec<Rational>, _> = v.iter().map(|s| parse_rational(s)).collect();
    Ok(UniPoly::from_coeffs(coeffs?))
}

impl Serialize for RationalParametrization {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RpJson {
            n: self.nvars,
            q0: coeff_strings(&self.q0),
            q: self.qs.iter().map(coeff_strings).collect(),
            qlast: coeff_strings(&self.qlast),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalParametrization {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RpJson::deserialize(deserializer)?;
        if raw.q.len() != raw.n {
            return Err(D::Error::custom("coordinate count does not match n"));
        }
        let conv = |v: &Vec<String>| coeffs_from_strings(v).map_err(D::Error::custom);
        Ok(RationalParametrization {
            nvars: raw.n,
            q0: conv(&raw.q0)?,
            qs: raw.q.iter().map(conv).collect::<Result<_, _>>()?,
            qlast: conv(&raw.qlast)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    fn ideal_of(vars: &VarSet, gens: Vec<MultiPoly>) -> Ideal {
        Ideal::new(vars, gens)
    }

    fn sampler() -> Sampler {
        Sampler::from_seed(2024)
    }

    #[test]
    fn sqrt_two_parametrization() {
        // <x1^2 - 2> -> q = (2t, 4, t^2 - 2) with lambda = x1.
        let v = VarSet::xs(1);
        let x = MultiPoly::var(&v, 0);
        let g = x
            .mul(&x)
            .unwrap()
            .sub(&MultiPoly::constant(&v, q(2)))
            .unwrap();
        let p = rat_par(&ideal_of(&v, vec![g.clone()]), &mut sampler()).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.annihilates(&g));
        // Coprimality and squarefreeness.
        assert!(p.q0().gcd(p.qlast()).is_constant());
        assert!(p.qlast().gcd(&p.qlast().derivative()).is_constant());
    }

    #[test]
    fn empty_ideal_gives_canonical_one() {
        let v = VarSet::xs(1);
        let one = MultiPoly::one(&v);
        let p = rat_par(&ideal_of(&v, vec![one]), &mut sampler()).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn single_point() {
        let v = VarSet::xs(2);
        let g1 = MultiPoly::var(&v, 0)
            .sub(&MultiPoly::constant(&v, q(1)))
            .unwrap();
        let g2 = MultiPoly::var(&v, 1)
            .add(&MultiPoly::constant(&v, q(1)))
            .unwrap();
        let p = rat_par(&ideal_of(&v, vec![g1, g2]), &mut sampler()).unwrap();
        assert_eq!(p.degree(), 1);
        assert!(p.contains_rational_point(&[q(1), q(-1)]));
        assert!(!p.contains_rational_point(&[q(1), q(1)]));
    }

    #[test]
    fn project_merges_fibers() {
        // {(1,5), (2,5)} projected to the second coordinate is {5}.
        let v = VarSet::xs(2);
        let x1 = MultiPoly::var(&v, 0);
        let x2 = MultiPoly::var(&v, 1);
        let g1 = x1
            .sub(&MultiPoly::constant(&v, q(1)))
            .unwrap()
            .mul(&x1.sub(&MultiPoly::constant(&v, q(2))).unwrap())
            .unwrap();
        let g2 = x2.sub(&MultiPoly::constant(&v, q(5))).unwrap();
        let p = rat_par(&ideal_of(&v, vec![g1, g2]), &mut sampler()).unwrap();
        assert_eq!(p.degree(), 2);
        let proj = project(&p, &[1], &mut sampler(), 1_000_000).unwrap();
        assert_eq!(proj.degree(), 1);
        assert!(proj.contains_rational_point(&[q(5)]));
        // Projection onto all coordinates preserves the degree.
        let full = project(&p, &[0, 1], &mut sampler(), 1_000_000).unwrap();
        assert_eq!(full.degree(), 2);
    }

    #[test]
    fn lift_and_project_are_inverse() {
        let v = VarSet::xs(1);
        let x = MultiPoly::var(&v, 0);
        let g = x
            .sub(&MultiPoly::constant(&v, q(3)))
            .unwrap();
        let p = rat_par(&ideal_of(&v, vec![g]), &mut sampler()).unwrap();
        let lifted = lift(&p, &q(7));
        assert_eq!(lifted.nvars(), 2);
        assert!(lifted.contains_rational_point(&[q(7), q(3)]));
        let back = project(&lifted, &[1], &mut sampler(), 1_000_000).unwrap();
        assert!(back.contains_rational_point(&[q(3)]));
        assert_eq!(back.degree(), 1);
        // Lift of the empty parametrization stays empty.
        assert!(lift(&RationalParametrization::empty(2), &q(1)).is_empty());
    }

    #[test]
    fn image_scaling_and_group_action() {
        // M = 2I on {(4, 6)} gives {(2, 3)}.
        let v = VarSet::xs(2);
        let g1 = MultiPoly::var(&v, 0)
            .sub(&MultiPoly::constant(&v, q(4)))
            .unwrap();
        let g2 = MultiPoly::var(&v, 1)
            .sub(&MultiPoly::constant(&v, q(6)))
            .unwrap();
        let p = rat_par(&ideal_of(&v, vec![g1, g2]), &mut sampler()).unwrap();
        let two_i = vec![vec![q(2), q(0)], vec![q(0), q(2)]];
        let im = image(&p, &two_i).unwrap();
        assert!(im.contains_rational_point(&[q(2), q(3)]));
        // image(image(p, M), M^{-1}) = p as point sets.
        let minv = matrix_inverse(&two_i).unwrap();
        let back = image(&im, &minv).unwrap();
        assert!(back.contains_rational_point(&[q(4), q(6)]));
        // Identity fixes everything.
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        let same = image(&p, &id).unwrap();
        assert!(same.contains_rational_point(&[q(4), q(6)]));
    }

    #[test]
    fn union_points() {
        let v = VarSet::xs(1);
        let mk = |c: i64| {
            let g = MultiPoly::var(&v, 0)
                .sub(&MultiPoly::constant(&v, q(c)))
                .unwrap();
            rat_par(&ideal_of(&v, vec![g]), &mut sampler()).unwrap()
        };
        let p1 = mk(1);
        let p2 = mk(2);
        let u = union(&p1, &p2, &mut sampler()).unwrap();
        assert_eq!(u.degree(), 2);
        assert!(u.contains_rational_point(&[q(1)]));
        assert!(u.contains_rational_point(&[q(2)]));
        // Idempotence: union of {1} with itself has degree 1.
        let again = union(&p1, &mk(1), &mut sampler()).unwrap();
        assert_eq!(again.degree(), 1);
        // Empty is the identity element.
        let e = RationalParametrization::empty(1);
        assert_eq!(union(&p1, &e, &mut sampler()).unwrap().degree(), 1);
    }

    #[test]
    fn union_overlapping_sets() {
        // {1, 2} u {2, 3} = {1, 2, 3}.
        let v = VarSet::xs(1);
        let x = MultiPoly::var(&v, 0);
        let pair = |a: i64, b: i64| {
            let g = x
                .sub(&MultiPoly::constant(&v, q(a)))
                .unwrap()
                .mul(&x.sub(&MultiPoly::constant(&v, q(b))).unwrap())
                .unwrap();
            rat_par(&ideal_of(&v, vec![g]), &mut sampler()).unwrap()
        };
        let u = union(&pair(1, 2), &pair(2, 3), &mut sampler()).unwrap();
        assert_eq!(u.degree(), 3);
        for c in [1, 2, 3] {
            assert!(u.contains_rational_point(&[q(c)]));
        }
    }

    #[test]
    fn json_round_trip() {
        let v = VarSet::xs(1);
        let x = MultiPoly::var(&v, 0);
        let g = x
            .mul(&x)
            .unwrap()
            .sub(&MultiPoly::constant(&v, q(2)))
            .unwrap();
        let p = rat_par(&ideal_of(&v, vec![g]), &mut sampler()).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let back: RationalParametrization = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
        assert_eq!(s, serde_json::to_string(&back).unwrap());
    }
}
