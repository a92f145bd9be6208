//! Regularity checks gating the solver.
//!
//! The decisive check is the Jacobian criterion on the incidence system:
//! the system together with the maximal minors of its Jacobian must have
//! an empty zero set, which certifies radicality, smoothness and
//! equidimensionality at once. Per-rank dimension comparisons are computed
//! and reported alongside; the classical examples this solver targets are
//! structured (symmetric) pencils whose lower rank strata are larger than
//! the generic count, so dimension mismatches are informative rather than
//! gating. A singular-locus comparison (`sing D_r = D_{r-1}`) is available
//! behind the full level; its cost explodes quickly with `m`.

use crate::groebner::{GbError, Ideal};
use crate::incidence::{eliminate_kernel_rows, IncidenceSystem, LinearMatrix};
use crate::lagrange::jacobian;
use crate::monomial::Monomial;
use crate::poly::{minors, MultiPoly, VarSet};
use crate::rational::Rational;
use crate::rng::Sampler;
use num::Zero;
use serde::Serialize;

/// When the Jacobian has more maximal minors than this, rank deficiency is
/// tested through a kernel-certificate system instead of expanding every
/// determinant.
const MINOR_COUNT_CAP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    None,
    Standard,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionCheck {
    pub p: usize,
    /// `None` when the computation hit the budget.
    pub computed: Option<i64>,
    pub expected: i64,
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericityReport {
    pub level: CheckLevel,
    pub g1: CheckOutcome,
    pub g2: CheckOutcome,
    pub dims: Vec<DimensionCheck>,
    /// Conjunction of the gating checks (`g2`, and `g1` when enabled).
    pub overall: bool,
}

impl GenericityReport {
    pub fn skipped() -> Self {
        GenericityReport {
            level: CheckLevel::None,
            g1: CheckOutcome::Skipped,
            g2: CheckOutcome::Skipped,
            dims: Vec::new(),
            overall: true,
        }
    }

    pub fn undetermined(&self) -> bool {
        self.g2 == CheckOutcome::Undetermined || self.g1 == CheckOutcome::Undetermined
    }
}

/// Jacobian-criterion check on the (reduced) incidence system: true when
/// the system plus the maximal minors of its Jacobian has no common zero.
pub fn check_g2(sys: &IncidenceSystem, budget: u64, sampler: &mut Sampler) -> CheckOutcome {
    let red = match eliminate_kernel_rows(sys) {
        Ok(r) => r,
        Err(_) => return CheckOutcome::Undetermined,
    };
    let base = Ideal::new(&red.vars, red.polys.clone()).with_budget(budget);
    match base.is_empty() {
        Ok(true) => return CheckOutcome::Pass, // empty variety satisfies the property
        Ok(false) => {}
        Err(GbError::Budget { .. }) => return CheckOutcome::Undetermined,
        Err(_) => return CheckOutcome::Undetermined,
    }
    let nv = red.vars.len();
    let q = red.polys.len();
    let all: Vec<usize> = (0..nv).collect();
    let jac = jacobian(&red.polys, &all);
    let c = q.min(nv);
    let count = binom_usize(q, c).saturating_mul(binom_usize(nv, c));
    let gens = if count <= MINOR_COUNT_CAP {
        let mut gens = red.polys.clone();
        gens.extend(minors(c, &jac));
        Ideal::new(&red.vars, gens).with_budget(budget)
    } else {
        kernel_certificate_ideal(&red.vars, &red.polys, &jac, q, nv, budget, sampler)
    };
    match gens.is_empty() {
        Ok(true) => CheckOutcome::Pass,
        Ok(false) => CheckOutcome::Fail,
        Err(GbError::Budget { .. }) => CheckOutcome::Undetermined,
        Err(_) => CheckOutcome::Undetermined,
    }
}

/// Encodes `rank J < min(q, nv)` on the zero set by adjoining a kernel
/// vector: a left kernel row when the system is square-or-underdetermined,
/// a right kernel column otherwise, normalized against a random vector.
fn kernel_certificate_ideal(
    vars: &VarSet,
    polys: &[MultiPoly],
    jac: &[Vec<MultiPoly>],
    q: usize,
    nv: usize,
    budget: u64,
    sampler: &mut Sampler,
) -> Ideal {
    let left = q <= nv;
    let klen = if left { q } else { nv };
    let knames: Vec<String> = (1..=klen).map(|i| format!("w{i}")).collect();
    let all = vars.concat(&VarSet::new(knames));
    let total = all.len();
    let lift = |p: &MultiPoly| -> MultiPoly {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                e.resize(total, 0);
                (Monomial::from_exps(&e), c.clone())
            })
            .collect();
        MultiPoly::from_terms(&all, terms)
    };
    let mut gens: Vec<MultiPoly> = polys.iter().map(lift).collect();
    if left {
        // w' J = 0: one polynomial per column.
        for col in 0..nv {
            let mut acc = MultiPoly::zero(&all);
            for (row, jrow) in jac.iter().enumerate() {
                if jrow[col].is_zero() {
                    continue;
                }
                let w = MultiPoly::var(&all, nv + row);
                acc = acc
                    .add(&lift(&jrow[col]).mul(&w).expect("same universe"))
                    .expect("same universe");
            }
            gens.push(acc);
        }
    } else {
        // J w = 0: one polynomial per row.
        for jrow in jac {
            let mut acc = MultiPoly::zero(&all);
            for (col, e) in jrow.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let w = MultiPoly::var(&all, nv + col);
                acc = acc
                    .add(&lift(e).mul(&w).expect("same universe"))
                    .expect("same universe");
            }
            gens.push(acc);
        }
    }
    // v' w - 1 with random v.
    let mut terms = vec![(
        Monomial::one(total),
        -Rational::from_integer(1.into()),
    )];
    for i in 0..klen {
        let vi = sampler.rational(99);
        if !vi.is_zero() {
            terms.push((Monomial::var(total, nv + i), vi));
        }
    }
    gens.push(MultiPoly::from_terms(&all, terms));
    Ideal::new(&all, gens).with_budget(budget)
}

fn binom_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Dimension of each rank stratum `D_p` for `p <= r` against the expected
/// `n - (m-p)^2`; the empty variety is always accepted.
pub fn check_dimensions(a: &LinearMatrix, r: usize, budget: u64) -> Vec<DimensionCheck> {
    let m = a.size() as i64;
    let n = a.nvars() as i64;
    (0..=r)
        .map(|p| {
            let (vars, gens) = a.minors_ideal_gens(p + 1);
            let ideal = Ideal::new(&vars, gens).with_budget(budget);
            let computed = match ideal.dimension() {
                Ok(d) => Some(d),
                Err(_) => None,
            };
            let expected = n - (m - p as i64) * (m - p as i64);
            DimensionCheck {
                p,
                computed,
                expected,
                matches: computed.map(|d| d == -1 || d == expected),
            }
        })
        .collect()
}

/// Singular-locus comparison `sing D_r = D_{r-1}` through radical
/// membership both ways. For the hypersurface case (`r = m-1`) the
/// defining determinant is replaced by its squarefree part first.
pub fn check_g1(a: &LinearMatrix, r: usize, budget: u64) -> CheckOutcome {
    let m = a.size();
    let n = a.nvars();
    let (vars, mut dr_gens) = a.minors_ideal_gens(r + 1);
    if r + 1 == m && dr_gens.len() == 1 {
        dr_gens = vec![squarefree_multipoly(&dr_gens[0])];
    }
    let dr = Ideal::new(&vars, dr_gens.clone()).with_budget(budget);
    let dim = match dr.dimension() {
        Ok(d) => d,
        Err(_) => return CheckOutcome::Undetermined,
    };
    // Singular locus: the stratum where the Jacobian drops below the
    // actual codimension.
    let sing_gens: Vec<MultiPoly> = if dim == -1 {
        vec![MultiPoly::one(&vars)]
    } else {
        let c = (n as i64 - dim) as usize;
        let all: Vec<usize> = (0..n).collect();
        let jac = jacobian(&dr_gens, &all);
        let mut gens = dr_gens.clone();
        if c <= jac.len().min(n) {
            gens.extend(minors(c, &jac));
        }
        gens
    };
    let lower_gens: Vec<MultiPoly> = if r == 0 {
        vec![MultiPoly::one(&vars)]
    } else {
        a.minors_ideal_gens(r).1
    };
    // sing D_r ⊆ D_{r-1}: every r-minor vanishes on the singular locus.
    for g in &lower_gens {
        match in_radical(g, &sing_gens, &vars, budget) {
            Ok(true) => {}
            Ok(false) => return CheckOutcome::Fail,
            Err(_) => return CheckOutcome::Undetermined,
        }
    }
    // D_{r-1} ⊆ sing D_r.
    for g in &sing_gens {
        match in_radical(g, &lower_gens, &vars, budget) {
            Ok(true) => {}
            Ok(false) => return CheckOutcome::Fail,
            Err(_) => return CheckOutcome::Undetermined,
        }
    }
    CheckOutcome::Pass
}

/// Squarefree part of a determinant when it is detectable: exact for
/// polynomials in a single variable (univariate squarefree), identity
/// otherwise. Multivariate gcd is out of scope; repeated factors in
/// several variables stay as given.
fn squarefree_multipoly(p: &MultiPoly) -> MultiPoly {
    let used: Vec<usize> = (0..p.nvars())
        .filter(|&i| p.terms().iter().any(|(m, _)| m.exp(i) > 0))
        .collect();
    if used.len() != 1 {
        return p.clone();
    }
    let v = used[0];
    let deg = p.total_degree() as usize;
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exp(v) as usize] = c.clone();
    }
    let sf = crate::unipoly::UniPoly::from_coeffs(coeffs).squarefree_part();
    let terms = sf
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let mut exps = vec![0u16; p.nvars()];
            exps[v] = k as u16;
            (Monomial::from_exps(&exps), c.clone())
        })
        .collect();
    MultiPoly::from_terms(p.vars(), terms)
}

pub struct GateConfig {
    pub level: CheckLevel,
    pub budget: u64,
}

/// The regularity gate: builds the report at the requested level.
pub fn is_reg(
    sys: &IncidenceSystem,
    cfg: &GateConfig,
    sampler: &mut Sampler,
) -> GenericityReport {
    match cfg.level {
        CheckLevel::None => GenericityReport::skipped(),
        CheckLevel::Standard | CheckLevel::Full => {
            let g2 = check_g2(sys, cfg.budget, sampler);
            let dims = check_dimensions(&sys.a, sys.r, cfg.budget);
            let g1 = if cfg.level == CheckLevel::Full {
                check_g1(&sys.a, sys.r, cfg.budget)
            } else {
                CheckOutcome::Skipped
            };
            let overall = g2 == CheckOutcome::Pass
                && (g1 == CheckOutcome::Pass || g1 == CheckOutcome::Skipped);
            GenericityReport {
                level: cfg.level,
                g1,
                g2,
                dims,
                overall,
            }
        }
    }
}

/// Membership of `g` in the radical of the ideal generated by `gens`
/// (Rabinowitsch: the saturated system with `1 - w g` must be empty).
pub fn in_radical(
    g: &MultiPoly,
    gens: &[MultiPoly],
    vars: &VarSet,
    budget: u64,
) -> Result<bool, GbError> {
    if g.is_zero() {
        return Ok(true);
    }
    let all = vars.concat(&VarSet::new(vec!["_w".to_string()]));
    let total = all.len();
    let lift = |p: &MultiPoly| -> MultiPoly {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| {
                let mut e = m.exps().to_vec();
                e.resize(total, 0);
                (Monomial::from_exps(&e), c.clone())
            })
            .collect();
        MultiPoly::from_terms(&all, terms)
    };
    let mut new_gens: Vec<MultiPoly> = gens.iter().map(lift).collect();
    let w = MultiPoly::var(&all, total - 1);
    let one = MultiPoly::one(&all);
    new_gens.push(one.sub(&w.mul(&lift(g)).expect("universe")).expect("universe"));
    let ideal = Ideal::new(&all, new_gens).with_budget(budget);
    ideal.is_empty()
}
