//! The top-level solver: draws the kernel-certificate parameters once,
//! gates on the regularity report, then recurses variable by variable.
//!
//! At each level the critical points of the projection onto the first
//! (changed) coordinate are encoded by the Lagrange system; the level's
//! contribution is the parametrization of its `x`-space elimination, and
//! the recursion continues in the fiber over a random value of that
//! coordinate. Levels whose incidence system is already inconsistent
//! terminate the whole subtree with the empty parametrization. The level
//! in `(m-r)^2` variables is parametrized directly from the incidence
//! system.
//!
//! The elimination ideal is parametrized first and projected never:
//! structured pencils routinely carry positive-dimensional multiplier or
//! kernel fibers over finitely many interesting `x`-points, so demanding a
//! zero-dimensional full system before projecting would reject inputs the
//! method handles. Zero-dimensionality is required exactly where it is
//! needed: on the `x`-space image.

use crate::bounds::{profile, BezoutProfile};
use crate::genericity::{is_reg, CheckLevel, GateConfig, GenericityReport};
use crate::groebner::{GbError, Ideal};
use crate::incidence::{build_incidence, eliminate_kernel_rows, IncidenceError, LinearMatrix};
use crate::lagrange::{build_lagrange_reduced, LagrangeError};
use crate::monomial::TermOrder;
use crate::poly::{matrix_inverse, ArithError, MultiPoly, VarSet};
use crate::rational::{format_rational, Rational};
use crate::ratpar::{self, RatParError, RationalParametrization};
use crate::realroots::count_real;
use crate::rng::Sampler;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub seed: u64,
    pub check_level: CheckLevel,
    /// Bound for every random integer draw.
    pub coeff_range: i64,
    pub gb_budget: u64,
    pub isolation_width: Rational,
    /// Certify emptiness of the rank stratum up front when the variable
    /// count is below `(m-r)^2`.
    pub verify_empty: bool,
    pub fiber_retries: usize,
    pub threads: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            seed: 0,
            check_level: CheckLevel::Standard,
            coeff_range: 99,
            gb_budget: crate::groebner::DEFAULT_GB_BUDGET,
            isolation_width: Rational::new(1.into(), num::BigInt::from(1u64) << 60),
            verify_empty: false,
            fiber_retries: 8,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelRecord {
    pub nvars: usize,
    /// `lagrange`, `incidence`, or `empty` (subtree cut off by an
    /// inconsistent incidence system).
    pub route: String,
    pub degree: usize,
    pub real_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_change: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveTrace {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub u: Vec<Vec<String>>,
    pub s: Vec<Vec<String>>,
    pub levels: Vec<LevelRecord>,
    pub partial_degrees: Vec<usize>,
    pub total_degree: usize,
    pub real_solutions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified_empty: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub parametrization: RationalParametrization,
    pub trace: SolveTrace,
    pub genericity: GenericityReport,
    pub bounds_profile: BezoutProfile,
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("input is not generic enough: regularity checks failed")]
    Genericity(GenericityReport),
    #[error("fiber at {nvars} variables failed the regularity gate after {tried} draws")]
    FiberGenericity { nvars: usize, tried: usize },
    #[error("computation budget exceeded ({context})")]
    Budget { context: String },
    #[error("elimination ideal at the {nvars}-variable level is not zero-dimensional (dimension {dim})")]
    NotZeroDimensional { nvars: usize, dim: i64 },
    #[error("separating-form retries exhausted at the {nvars}-variable level")]
    Separation { nvars: usize },
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Lagrange(#[from] LagrangeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl SolveError {
    fn from_gb(e: GbError, nvars: usize, context: &str) -> SolveError {
        match e {
            GbError::Budget { steps } => SolveError::Budget {
                context: format!("{context} at {nvars} variables after {steps} steps"),
            },
            GbError::NotZeroDimensional { dim } => SolveError::NotZeroDimensional { nvars, dim },
            GbError::SeparatingFormExhausted { .. } => SolveError::Separation { nvars },
        }
    }

    fn from_ratpar(e: RatParError, nvars: usize, context: &str) -> SolveError {
        match e {
            RatParError::Gb(g) => SolveError::from_gb(g, nvars, context),
            RatParError::Arith(a) => SolveError::Arith(a),
            RatParError::UnionRetriesExhausted { .. } | RatParError::MixedArity => {
                SolveError::Separation { nvars }
            }
            RatParError::BadSubset => SolveError::Budget {
                context: format!("internal projection subset at {nvars} variables"),
            },
        }
    }
}

fn rationals_to_strings(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect()
}

struct Solver<'a> {
    cfg: &'a SolveConfig,
    m: usize,
    r: usize,
    u: Vec<Vec<Rational>>,
    s: Vec<Vec<Rational>>,
    sampler: Sampler,
    levels: Vec<LevelRecord>,
    /// Lowest variable count the recursion reaches.
    bottom: usize,
    base: usize,
}

impl<'a> Solver<'a> {
    /// Parametrization of the projection of `V(polys)` onto the first
    /// `keep` variables, through a block elimination order.
    fn x_parametrization(
        &mut self,
        vars: &VarSet,
        polys: Vec<MultiPoly>,
        keep: usize,
    ) -> Result<RationalParametrization, SolveError> {
        let nv = vars.len();
        let ideal = Ideal::new(vars, polys).with_budget(self.cfg.gb_budget);
        let gb = ideal
            .groebner_basis(TermOrder::Elim { keep })
            .map_err(|e| SolveError::from_gb(e, keep, "elimination basis"))?;
        let kept_vars = vars.subset(&(0..keep).collect::<Vec<_>>());
        let restricted: Vec<MultiPoly> = gb
            .iter()
            .filter(|g| {
                g.terms()
                    .iter()
                    .all(|(mono, _)| (keep..nv).all(|i| mono.exp(i) == 0))
            })
            .map(|g| {
                let keep_idx: Vec<usize> = (0..keep).collect();
                let terms = g
                    .terms()
                    .iter()
                    .map(|(mono, c)| (mono.restrict(&keep_idx), c.clone()))
                    .collect();
                MultiPoly::from_terms(&kept_vars, terms)
            })
            .collect();
        let x_ideal = Ideal::new(&kept_vars, restricted).with_budget(self.cfg.gb_budget);
        ratpar::rat_par(&x_ideal, &mut self.sampler)
            .map_err(|e| SolveError::from_ratpar(e, keep, "level parametrization"))
    }

    fn record_empty_levels(&mut self, from: usize) {
        let mut n = from;
        loop {
            self.levels.push(LevelRecord {
                nvars: n,
                route: "empty".to_string(),
                degree: 0,
                real_count: 0,
                m_change: None,
                v: None,
                t: None,
            });
            if n == self.bottom {
                break;
            }
            n -= 1;
        }
    }

    fn recurse(&mut self, a: &LinearMatrix) -> Result<RationalParametrization, SolveError> {
        let n = a.nvars();
        // Inconsistent incidence system: the whole subtree is empty.
        let inc = build_incidence(a, self.r, &self.u, &self.s)?;
        let red = eliminate_kernel_rows(&inc)?;
        let red_ideal = Ideal::new(&red.vars, red.polys.clone()).with_budget(self.cfg.gb_budget);
        let empty = red_ideal
            .is_empty()
            .map_err(|e| SolveError::from_gb(e, n, "incidence emptiness"))?;
        if empty {
            self.record_empty_levels(n);
            return Ok(RationalParametrization::empty(n));
        }
        if n == self.base {
            // Terminal: parametrize the projection of the finite incidence
            // variety onto the x-coordinates.
            let p = self.x_parametrization(&red.vars.clone(), red.polys, n)?;
            self.levels.push(LevelRecord {
                nvars: n,
                route: "incidence".to_string(),
                degree: p.degree(),
                real_count: count_real(&p),
                m_change: None,
                v: None,
                t: None,
            });
            return Ok(p);
        }

        // Critical-point route.
        let m_change = self.sampler.invertible_matrix(n, self.cfg.coeff_range);
        let m_inv = matrix_inverse(&m_change)?;
        let am = a.change_of_variables(&m_change)?;
        let inc_m = build_incidence(&am, self.r, &self.u, &self.s)?;
        let v = self
            .sampler
            .vector(self.m * (self.m - self.r), self.cfg.coeff_range);
        let lag = build_lagrange_reduced(&inc_m, &v)?;
        // Points come out in the changed frame; `image` with M^{-1}
        // encodes (M^{-1})^{-1} Z = M Z, the original coordinates.
        let p_changed = self.x_parametrization(&lag.vars.clone(), lag.polys, n)?;
        let p = ratpar::image(&p_changed, &m_inv)
            .map_err(|e| SolveError::from_ratpar(e, n, "image"))?;
        self.levels.push(LevelRecord {
            nvars: n,
            route: "lagrange".to_string(),
            degree: p.degree(),
            real_count: count_real(&p),
            m_change: Some(rationals_to_strings(&m_change)),
            v: Some(v.iter().map(format_rational).collect()),
            t: None,
        });
        if n == self.bottom {
            return Ok(p);
        }

        // Fiber: substitute a random value for the first changed
        // coordinate, re-gating at the configured level.
        let mut chosen: Option<(Rational, LinearMatrix)> = None;
        let mut tried = 0;
        while tried <= self.cfg.fiber_retries {
            tried += 1;
            let t = self.sampler.rational(self.cfg.coeff_range);
            let fiber = am.substitute_first_variable(&t);
            if self.cfg.check_level == CheckLevel::None {
                chosen = Some((t, fiber));
                break;
            }
            let fiber_inc = build_incidence(&fiber, self.r, &self.u, &self.s)?;
            let report = is_reg(
                &fiber_inc,
                &GateConfig {
                    level: self.cfg.check_level,
                    budget: self.cfg.gb_budget,
                },
                &mut self.sampler,
            );
            if report.undetermined() {
                return Err(SolveError::Budget {
                    context: format!("fiber regularity at {} variables", n - 1),
                });
            }
            if report.overall {
                chosen = Some((t, fiber));
                break;
            }
        }
        let Some((t, fiber)) = chosen else {
            return Err(SolveError::FiberGenericity { nvars: n - 1, tried });
        };
        if let Some(last) = self.levels.last_mut() {
            last.t = Some(format_rational(&t));
        }
        let q_sub = self.recurse(&fiber)?;
        let q_lifted = ratpar::lift(&q_sub, &t);
        let q = ratpar::image(&q_lifted, &m_inv)
            .map_err(|e| SolveError::from_ratpar(e, n, "image of lifted fiber"))?;
        ratpar::union(&q, &p, &mut self.sampler)
            .map_err(|e| SolveError::from_ratpar(e, n, "union"))
    }
}

/// Full solve: returns a rational parametrization meeting every connected
/// component of the rank-`r` locus of `A(x)`, with the per-level trace,
/// the regularity report, and the degree-bound profile.
pub fn low_rank(a: &LinearMatrix, r: usize, cfg: &SolveConfig) -> Result<SolveOutput, SolveError> {
    let m = a.size();
    let n = a.nvars();
    if r >= m {
        return Err(SolveError::Incidence(IncidenceError::InvalidRank { r, m }));
    }
    let mut sampler = Sampler::from_seed(cfg.seed);
    let corank = m - r;
    let u = sampler.full_rank_matrix(corank, m, cfg.coeff_range);
    let s = loop {
        let cand = sampler.rational_matrix(corank, corank, cfg.coeff_range);
        if crate::poly::matrix_is_invertible(&cand) {
            break cand;
        }
    };
    let top = build_incidence(a, r, &u, &s)?;
    let report = is_reg(
        &top,
        &GateConfig {
            level: cfg.check_level,
            budget: cfg.gb_budget,
        },
        &mut sampler,
    );
    if report.undetermined() {
        return Err(SolveError::Budget {
            context: "top-level regularity checks".to_string(),
        });
    }
    if !report.overall {
        return Err(SolveError::Genericity(report));
    }

    let base = corank * corank;
    let bottom = if n < base { 1 } else { base };
    let mut verified_empty = None;
    let mut solver = Solver {
        cfg,
        m,
        r,
        u: u.clone(),
        s: s.clone(),
        sampler,
        levels: Vec::new(),
        bottom: bottom.max(1),
        base,
    };
    let parametrization = if n < base && cfg.verify_empty {
        let (vars, gens) = a.minors_ideal_gens(r + 1);
        let ideal = Ideal::new(&vars, gens).with_budget(cfg.gb_budget);
        let empty = ideal
            .is_empty()
            .map_err(|e| SolveError::from_gb(e, n, "rank stratum emptiness"))?;
        verified_empty = Some(empty);
        if empty {
            solver.record_empty_levels(n);
            RationalParametrization::empty(n)
        } else {
            solver.recurse(a)?
        }
    } else {
        solver.recurse(a)?
    };

    let partial_degrees: Vec<usize> = solver.levels.iter().map(|l| l.degree).collect();
    let trace = SolveTrace {
        seed: cfg.seed,
        m,
        n,
        r,
        u: rationals_to_strings(&u),
        s: rationals_to_strings(&s),
        levels: solver.levels,
        partial_degrees,
        total_degree: parametrization.degree(),
        real_solutions: count_real(&parametrization),
        verified_empty,
    };
    let bounds_profile =
        profile(m as u64, n as u64, r as u64).expect("rank validated above");
    Ok(SolveOutput {
        parametrization,
        trace,
        genericity: report,
        bounds_profile,
    })
}

/// Re-exported convenience used by the recursion and by callers: the
/// pencil with `x1` set to `t` (after any change of variables already
/// applied by the caller).
pub fn substitute_first_variable(a: &LinearMatrix, t: &Rational) -> LinearMatrix {
    a.substitute_first_variable(t)
}
