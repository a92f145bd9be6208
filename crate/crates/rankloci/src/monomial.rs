//! Exponent vectors and term orders.

use smallvec::SmallVec;
use std::cmp::Ordering;

/// An exponent vector with its total degree cached. Exponents are `u16`,
/// far beyond anything the bilinear systems here can produce.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 16]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: smallvec::smallvec![0; nvars],
            degree: 0,
        }
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Degree within a variable block `[lo, hi)`.
    pub fn block_degree(&self, lo: usize, hi: usize) -> u32 {
        self.exps[lo..hi].iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let exps = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(a, b)| a - b)
            .collect();
        Monomial {
            exps,
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 16]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bitmask of the support over the first 64 variables; used as a cheap
    /// divisibility pre-filter.
    pub fn support_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.exps.iter().enumerate().take(64) {
            if e > 0 {
                m |= 1 << i;
            }
        }
        m
    }

    /// Drops the variables listed in `keep` into a smaller universe.
    pub fn restrict(&self, keep: &[usize]) -> Monomial {
        let exps: SmallVec<[u16; 16]> = keep.iter().map(|&i| self.exps[i]).collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }
}

/// Term orders. `Greater` means "comes first" (is the leading side).
///
/// `Elim { keep }` is the block order eliminating every variable of index
/// `>= keep`: the tail block is compared grevlex first, then the head block
/// grevlex. Basis elements of tail-degree zero form a basis of the
/// elimination ideal in the grevlex order of the head block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOrder {
    Grevlex,
    Lex,
    Elim { keep: usize },
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Grevlex => grevlex(a.exps(), b.exps(), a.degree(), b.degree()),
            TermOrder::Lex => lex(a.exps(), b.exps()),
            TermOrder::Elim { keep } => {
                let (ka, kb) = (*keep, *keep);
                let da = a.block_degree(ka, a.nvars());
                let db = b.block_degree(kb, b.nvars());
                grevlex(&a.exps()[ka..], &b.exps()[kb..], da, db).then_with(|| {
                    grevlex(
                        &a.exps()[..ka],
                        &b.exps()[..kb],
                        a.degree() - da,
                        b.degree() - db,
                    )
                })
            }
        }
    }
}

fn lex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u16], b: &[u16], da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Equal degree: the rightmost differing exponent decides, smaller wins.
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}
