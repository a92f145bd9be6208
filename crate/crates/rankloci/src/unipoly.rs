//! Dense univariate polynomials over the rationals.

use crate::rational::Rational;
use num::{BigInt, Integer, One, Signed, Zero};
use std::fmt;

/// Coefficients ascending by degree; the leading coefficient is nonzero
/// unless the polynomial is zero (empty list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            UniPoly { coeffs: vec![c] }
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.degree() < d.degree() || self.is_zero() {
            return (Self::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlc = d.leading_coeff();
        let dd = d.degree();
        let mut quo = vec![Rational::zero(); rem.len() - dd];
        while rem.len() >= dd + 1 && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &dlc;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let t = c * &q;
                    rem[k + i] -= t;
                }
                quo[k] = q;
            }
            rem.pop();
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() < dd + 1 {
                break;
            }
        }
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.divrem(d).1
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Monic gcd; `gcd(0, q) = monic(q)`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The squarefree part `p / gcd(p, p')`, normalized to primitive
    /// integer coefficients with a positive leading coefficient.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() || self.is_constant() {
            return self.clone().primitive();
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.divrem(&g);
        debug_assert!(r.is_zero());
        q.primitive()
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }

    /// Scales to integer coefficients with content 1 and positive leading
    /// coefficient.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if content.is_zero() {
            return Self::zero();
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        UniPoly {
            coeffs: ints
                .iter()
                .map(|v| Rational::from_integer(v / &content))
                .collect(),
        }
    }

    /// Scales by the (positive) inverse of the integer content, keeping
    /// the sign; what Sturm chains need.
    pub fn primitive_keep_sign(&self) -> UniPoly {
        let p = self.primitive();
        if p.is_zero() {
            return p;
        }
        if self.leading_coeff().numer().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self * other mod m`.
    pub fn mulmod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(other).rem(m)
    }

    /// Inverse modulo `m` by the extended Euclidean algorithm; `None` when
    /// `gcd(self, m)` is not constant.
    pub fn invmod(&self, m: &UniPoly) -> Option<UniPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if !r0.is_constant() || r0.is_zero() {
            return None;
        }
        Some(s0.scale(&r0.coeff(0).recip()).rem(m))
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&UniPoly::constant(c.clone()));
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => crate::rational::format_rational(c),
                1 => format!("{}*t", crate::rational::format_rational(c)),
                _ => format!("{}*t^{}", crate::rational::format_rational(c), i),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Chinese remaindering: the unique `x mod m1*m2` with `x = a1 mod m1`,
/// `x = a2 mod m2`; requires `gcd(m1, m2)` constant.
pub fn crt(a1: &UniPoly, m1: &UniPoly, a2: &UniPoly, m2: &UniPoly) -> Option<UniPoly> {
    let inv = m1.invmod(m2)?;
    let diff = a2.sub(&a1.rem(m2)).rem(m2);
    let k = diff.mulmod(&inv, m2);
    Some(a1.add(&m1.mul(&k)).rem(&m1.mul(m2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    #[test]
    fn derivative_power_rule() {
        // d/dt (t^2 - 2) = 2t
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.derivative(), UniPoly::from_i64(&[0, 2]));
    }

    #[test]
    fn gcd_common_factor() {
        // gcd(t^2 - 1, t - 1) = t - 1 (monic)
        let a = UniPoly::from_i64(&[-1, 0, 1]);
        let b = UniPoly::from_i64(&[-1, 1]);
        assert_eq!(a.gcd(&b), b.monic());
    }

    #[test]
    fn squarefree_removes_repeats() {
        // (t-1)^2 (t+2) -> (t-1)(t+2) up to scalar
        let f = UniPoly::from_i64(&[-1, 1]);
        let g = UniPoly::from_i64(&[2, 1]);
        let p = f.mul(&f).mul(&g);
        let sf = p.squarefree_part();
        let expect = f.mul(&g).primitive();
        assert_eq!(sf, expect);
    }

    #[test]
    fn divrem_inverts_mul() {
        let a = UniPoly::from_i64(&[3, -1, 2, 7]);
        let b = UniPoly::from_i64(&[1, 4, 5]);
        let p = a.mul(&b);
        let (quo, rem) = p.divrem(&b);
        assert!(rem.is_zero());
        assert_eq!(quo, a);
    }

    #[test]
    fn invmod_roundtrip() {
        let m = UniPoly::from_i64(&[-2, 0, 1]); // t^2 - 2
        let a = UniPoly::from_i64(&[0, 1]); // t
        let inv = a.invmod(&m).unwrap();
        assert!(a.mulmod(&inv, &m).is_one());
    }

    #[test]
    fn crt_reconstructs() {
        let m1 = UniPoly::from_i64(&[-1, 1]); // t - 1
        let m2 = UniPoly::from_i64(&[-2, 1]); // t - 2
        let x = crt(
            &UniPoly::constant(q(5)),
            &m1,
            &UniPoly::constant(q(7)),
            &m2,
        )
        .unwrap();
        assert_eq!(x.eval(&q(1)), q(5));
        assert_eq!(x.eval(&q(2)), q(7));
    }

    #[test]
    fn primitive_normalization() {
        let p = UniPoly::from_coeffs(vec![
            Rational::new(1.into(), 2.into()),
            Rational::new((-3).into(), 4.into()),
        ]);
        // 1/2 - 3/4 t -> -(2 - 3t) -> primitive with positive lead: -2 + 3t
        assert_eq!(p.primitive(), UniPoly::from_i64(&[-2, 3]));
    }
}
