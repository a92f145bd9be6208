//! Certified real-root isolation and interval boxes for encoded solutions.
//!
//! Isolation runs Descartes/VCA bisection on integer coefficients with a
//! Sturm-sequence count as an independent cross-check; on disagreement the
//! Sturm-driven bisection is authoritative. Boxes for the coordinates of a
//! parametrized point are exact rational interval evaluations of
//! `qi/q0`, refined by bisecting the root interval of `qlast`.

use crate::rational::Rational;
use crate::ratpar::RationalParametrization;
use crate::unipoly::UniPoly;
use num::{BigInt, One, Signed, Zero};

#[derive(Debug, Clone, thiserror::Error)]
pub enum RealRootsError {
    #[error("polynomial must be squarefree")]
    NotSquarefree,
    #[error("interval does not isolate a root of qlast")]
    NotIsolating,
    #[error("refinement budget exceeded")]
    RefinementBudget,
}

/// A solution box: one exact rational interval per coordinate plus the
/// parameter interval it was refined from.
#[derive(Debug, Clone)]
pub struct IsolatedRealPoint {
    pub coords: Vec<(Rational, Rational)>,
    pub t_interval: (Rational, Rational),
    /// Bisections applied to the parameter interval.
    pub precision_bits: u32,
}

pub struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> SturmChain {
        // Normalization must preserve signs: only positive scalings.
        let mut seq = vec![p.primitive_keep_sign()];
        if p.degree() >= 1 {
            seq.push(p.derivative().primitive_keep_sign());
            loop {
                let k = seq.len();
                let r = seq[k - 2].rem(&seq[k - 1]);
                if r.is_zero() {
                    break;
                }
                seq.push(r.neg().primitive_keep_sign());
            }
        }
        SturmChain { seq }
    }

    fn variations<F: Fn(&UniPoly) -> i8>(&self, sign_of: F) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let s = sign_of(p);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        self.variations(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.numer().is_negative() {
                -1
            } else {
                1
            }
        })
    }

    fn sign_at_infinity(p: &UniPoly, positive: bool) -> i8 {
        if p.is_zero() {
            return 0;
        }
        let lead = p.leading_coeff();
        let mut s: i8 = if lead.numer().is_negative() { -1 } else { 1 };
        if !positive && p.degree() % 2 == 1 {
            s = -s;
        }
        s
    }

    pub fn variations_at_neg_infinity(&self) -> usize {
        self.variations(|p| Self::sign_at_infinity(p, false))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        self.variations(|p| Self::sign_at_infinity(p, true))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_neg_infinity() - self.variations_at_pos_infinity()
    }
}

/// Distinct real roots of the squarefree polynomial encoding a
/// parametrization's parameter values.
pub fn count_real(p: &RationalParametrization) -> usize {
    if p.is_empty() {
        return 0;
    }
    SturmChain::new(p.qlast()).count_real()
}

fn int_coeffs(p: &UniPoly) -> Vec<BigInt> {
    p.primitive()
        .coeffs()
        .iter()
        .map(|c| c.to_integer())
        .collect()
}

fn variations_int(c: &[BigInt]) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for v in c {
        let s = match v.sign() {
            num::bigint::Sign::Minus => -1,
            num::bigint::Sign::NoSign => 0,
            num::bigint::Sign::Plus => 1,
        };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// In-place Taylor shift: coefficients of `p(x + 1)`.
fn shift_by_one(c: &mut [BigInt]) {
    let n = c.len();
    if n < 2 {
        return;
    }
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let add = c[j + 1].clone();
            c[j] += add;
        }
    }
}

/// Descartes bound for the root count of `p` in the open interval (0, 1):
/// sign variations of `(x + 1)^d p(1 / (x + 1))`.
fn descartes_01(c: &[BigInt]) -> usize {
    let mut rev: Vec<BigInt> = c.iter().rev().cloned().collect();
    shift_by_one(&mut rev);
    variations_int(&rev)
}

/// Roots of the squarefree `h` as disjoint isolating intervals, sorted in
/// ascending order. Intervals are either exact (`lo == hi`, a rational
/// root) or open with a sign change at the endpoints.
pub fn isolate_roots(h: &UniPoly) -> Result<Vec<(Rational, Rational)>, RealRootsError> {
    if h.is_zero() {
        return Err(RealRootsError::NotSquarefree);
    }
    if !h.gcd(&h.derivative()).is_constant() && h.degree() >= 1 {
        return Err(RealRootsError::NotSquarefree);
    }
    if h.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    let mut c = int_coeffs(h);
    // Strip a root at zero.
    if c[0].is_zero() {
        out.push((Rational::zero(), Rational::zero()));
        while c[0].is_zero() {
            c.remove(0);
        }
    }
    // Power-of-two Cauchy bound.
    let lead_abs = c.last().unwrap().abs();
    let max_abs = c.iter().map(|v| v.abs()).max().unwrap();
    let mut bound = BigInt::one();
    while &bound * &lead_abs < max_abs {
        bound <<= 1;
    }
    bound <<= 1;
    let b = Rational::from_integer(bound.clone());

    // Positive roots: p(bound * x) on (0, 1).
    let scaled: Vec<BigInt> = c
        .iter()
        .enumerate()
        .map(|(k, v)| v * bound.pow(k as u32))
        .collect();
    let mut pos = Vec::new();
    vca(&scaled, Rational::zero(), b.clone(), &mut pos);
    // Negative roots: mirror through p(-x).
    let mirrored: Vec<BigInt> = c
        .iter()
        .enumerate()
        .map(|(k, v)| if k % 2 == 1 { -v } else { v.clone() })
        .collect();
    let scaled_neg: Vec<BigInt> = mirrored
        .iter()
        .enumerate()
        .map(|(k, v)| v * bound.pow(k as u32))
        .collect();
    let mut neg = Vec::new();
    vca(&scaled_neg, Rational::zero(), b, &mut neg);
    for (lo, hi) in neg {
        out.push((-hi, -lo));
    }
    out.extend(pos);
    out.sort_by(|a, b| a.0.cmp(&b.0));

    // Sturm is authoritative: recount and fall back on disagreement.
    let chain = SturmChain::new(h);
    if out.len() != chain.count_real() {
        out = sturm_isolate(h, &chain);
    }
    Ok(out)
}

/// Vincent-Collins-Akritas bisection. `c` holds the coefficients of a
/// polynomial whose roots in (0, 1) correspond affinely to the roots of
/// `h` in `(lo, hi)`.
fn vca(c: &[BigInt], lo: Rational, hi: Rational, out: &mut Vec<(Rational, Rational)>) {
    match descartes_01(c) {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            let d = c.len() - 1;
            // Left half: 2^d p(x/2).
            let left: Vec<BigInt> = c
                .iter()
                .enumerate()
                .map(|(k, v)| v << (d - k))
                .collect();
            // Root exactly at the midpoint: p(1/2) = 0 iff sum of left's
            // coefficients vanishes.
            let at_half: BigInt = left.iter().cloned().sum();
            if at_half.is_zero() {
                out.push((mid.clone(), mid.clone()));
            }
            vca(&left, lo, mid.clone(), out);
            let mut right = left;
            shift_by_one(&mut right);
            vca(&right, mid, hi, out);
        }
    }
}

/// Sturm-count-driven bisection (used as the authoritative fallback).
fn sturm_isolate(h: &UniPoly, chain: &SturmChain) -> Vec<(Rational, Rational)> {
    let c = int_coeffs(h);
    let lead_abs = c.last().unwrap().abs();
    let max_abs = c.iter().map(|v| v.abs()).max().unwrap();
    let mut bound = BigInt::one();
    while &bound * &lead_abs < max_abs {
        bound <<= 1;
    }
    bound <<= 1;
    let b = Rational::from_integer(bound);
    let mut out = Vec::new();
    rec(h, chain, &(-b.clone()), &b, &mut out);
    fn rec(
        h: &UniPoly,
        chain: &SturmChain,
        a: &Rational,
        b: &Rational,
        out: &mut Vec<(Rational, Rational)>,
    ) {
        let mut inside = chain.count_half_open(a, b);
        if h.eval(b).is_zero() {
            inside -= 1;
        }
        if inside == 0 {
            return;
        }
        let mid = (a + b) / Rational::from_integer(2.into());
        if inside == 1 {
            // Certify via a sign change or shrink until the mid hits.
            if h.eval(a).is_zero() || h.eval(b).is_zero() {
                // Endpoints are roots only at the original bound; shrink.
            } else if (h.eval(a) * h.eval(b)).numer().is_negative() {
                out.push((a.clone(), b.clone()));
                return;
            }
        }
        if h.eval(&mid).is_zero() {
            out.push((mid.clone(), mid.clone()));
        }
        rec(h, chain, a, &mid, out);
        rec(h, chain, &mid, b, out);
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

type Interval = (Rational, Rational);

fn iv_add(a: &Interval, b: &Interval) -> Interval {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn iv_mul(a: &Interval, b: &Interval) -> Interval {
    let products = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = products.iter().min().unwrap().clone();
    let hi = products.iter().max().unwrap().clone();
    (lo, hi)
}

fn iv_div(a: &Interval, b: &Interval) -> Option<Interval> {
    if (b.0.is_zero() || b.0.numer().is_negative()) && (b.1.is_zero() || !b.1.numer().is_negative())
    {
        return None; // denominator interval touches zero
    }
    let inv = (b.1.clone().recip(), b.0.clone().recip());
    Some(iv_mul(a, &inv))
}

fn eval_interval(p: &UniPoly, iv: &Interval) -> Interval {
    let mut acc = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = iv_mul(&acc, iv);
        acc = iv_add(&acc, &(c.clone(), c.clone()));
    }
    acc
}

const MAX_REFINEMENT: u32 = 4096;

/// Refines a root interval of `qlast` until every coordinate box of the
/// encoded point is narrower than `width`.
pub fn evaluate_box(
    p: &RationalParametrization,
    interval: &(Rational, Rational),
    width: &Rational,
) -> Result<IsolatedRealPoint, RealRootsError> {
    let h = p.qlast();
    let (mut lo, mut hi) = interval.clone();
    if lo > hi {
        return Err(RealRootsError::NotIsolating);
    }
    let mut bits = 0u32;
    // Exact rational root: every coordinate is exact.
    let exact_point = |t: &Rational| -> IsolatedRealPoint {
        let q0v = p.q0().eval(t);
        let coords = (0..p.nvars())
            .map(|i| {
                let v = p.coord(i).eval(t) / &q0v;
                (v.clone(), v)
            })
            .collect();
        IsolatedRealPoint {
            coords,
            t_interval: (t.clone(), t.clone()),
            precision_bits: u32::MAX,
        }
    };
    if lo == hi {
        if !h.eval(&lo).is_zero() {
            return Err(RealRootsError::NotIsolating);
        }
        return Ok(exact_point(&lo));
    }
    let (slo, shi) = (h.eval(&lo), h.eval(&hi));
    if slo.is_zero() || shi.is_zero() || slo.numer().is_negative() == shi.numer().is_negative() {
        return Err(RealRootsError::NotIsolating);
    }
    let sign_lo = slo.numer().is_negative();
    loop {
        // Try to produce boxes at the current width.
        let t_iv = (lo.clone(), hi.clone());
        let q0_iv = eval_interval(p.q0(), &t_iv);
        let mut ok = true;
        let mut coords = Vec::with_capacity(p.nvars());
        if !(q0_iv.0.numer().is_negative() == q0_iv.1.numer().is_negative()
            && !q0_iv.0.is_zero()
            && !q0_iv.1.is_zero())
        {
            ok = false;
        } else {
            for i in 0..p.nvars() {
                let qi_iv = eval_interval(p.coord(i), &t_iv);
                match iv_div(&qi_iv, &q0_iv) {
                    Some(b) if &(&b.1 - &b.0) <= width => coords.push(b),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok {
            return Ok(IsolatedRealPoint {
                coords,
                t_interval: (lo, hi),
                precision_bits: bits,
            });
        }
        if bits >= MAX_REFINEMENT {
            return Err(RealRootsError::RefinementBudget);
        }
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        let smid = h.eval(&mid);
        if smid.is_zero() {
            return Ok(exact_point(&mid));
        }
        if smid.numer().is_negative() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        bits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    #[test]
    fn isolates_sqrt_two() {
        let h = UniPoly::from_i64(&[-2, 0, 1]);
        let roots = isolate_roots(&h).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].1 <= roots[1].0);
        // Signs certify each nondegenerate interval.
        for (lo, hi) in &roots {
            if lo != hi {
                assert!((h.eval(lo) * h.eval(hi)).numer().is_negative());
            }
        }
    }

    #[test]
    fn no_real_roots() {
        let h = UniPoly::from_i64(&[1, 0, 1]);
        assert!(isolate_roots(&h).unwrap().is_empty());
        assert_eq!(SturmChain::new(&h).count_real(), 0);
    }

    #[test]
    fn rational_roots_become_exact() {
        // (t - 1/2)(t + 3) scaled to integers: (2t - 1)(t + 3).
        let h = UniPoly::from_i64(&[-3, 5, 2]);
        let roots = isolate_roots(&h).unwrap();
        assert_eq!(roots.len(), 2);
        // Count agrees with Sturm.
        assert_eq!(SturmChain::new(&h).count_real(), 2);
    }

    #[test]
    fn rejects_non_squarefree() {
        let f = UniPoly::from_i64(&[-1, 1]);
        let sq = f.mul(&f);
        assert!(matches!(
            isolate_roots(&sq),
            Err(RealRootsError::NotSquarefree)
        ));
    }

    #[test]
    fn sturm_counts_interval() {
        let h = UniPoly::from_i64(&[-2, 0, 1]); // roots ±sqrt(2)
        let chain = SturmChain::new(&h);
        assert_eq!(chain.count_real(), 2);
        assert_eq!(chain.count_half_open(&q(0), &q(2)), 1);
        assert_eq!(chain.count_half_open(&q(-2), &q(2)), 2);
    }

    #[test]
    fn root_at_zero() {
        // t(t^2 - 4): roots -2, 0, 2.
        let h = UniPoly::from_i64(&[0, -4, 0, 1]);
        let roots = isolate_roots(&h).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().any(|(lo, hi)| lo == hi && lo.is_zero()));
    }

    #[test]
    fn degree_forty_wilkinson_fragment() {
        // prod (t - k) for k = 1..12: twelve exact rational roots.
        let mut h = UniPoly::one();
        for k in 1..=12 {
            h = h.mul(&UniPoly::from_coeffs(vec![q(-k), q(1)]));
        }
        let roots = isolate_roots(&h).unwrap();
        assert_eq!(roots.len(), 12);
    }
}
