//! Linear matrix pencils and their incidence systems.
//!
//! The incidence system attaches kernel certificates to rank defects: for
//! an `m x m` pencil `A(x)` and target rank `r`, the system collects the
//! bilinear entries of `A(x) Y(y)` for an `m x (m-r)` matrix of fresh
//! kernel variables together with the affine entries of `U Y(y) - S`,
//! which force `Y(y)` to have full column rank `m - r`.

use crate::monomial::Monomial;
use crate::poly::{matrix_is_invertible, matrix_rank, ArithError, MultiPoly, VarSet};
use crate::rational::Rational;
use num::Zero;

/// The pencil `A0 + x1 A1 + ... + xn An` of square rational matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMatrix {
    m: usize,
    n: usize,
    mats: Vec<Vec<Vec<Rational>>>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum IncidenceError {
    #[error("expected {want} matrices of size {m}x{m}")]
    Shape { want: usize, m: usize },
    #[error("rank must satisfy 0 <= r <= m-1 (got r={r}, m={m})")]
    InvalidRank { r: usize, m: usize },
    #[error("U must have full row rank m-r")]
    RankDeficientU,
    #[error("S must be invertible of size (m-r)x(m-r)")]
    SingularS,
    #[error("no invertible column submatrix of U at any pivot set")]
    NoPivot,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl LinearMatrix {
    pub fn new(m: usize, n: usize, mats: Vec<Vec<Vec<Rational>>>) -> Result<Self, IncidenceError> {
        if mats.len() != n + 1
            || mats
                .iter()
                .any(|a| a.len() != m || a.iter().any(|row| row.len() != m))
        {
            return Err(IncidenceError::Shape { want: n + 1, m });
        }
        Ok(LinearMatrix { m, n, mats })
    }

    pub fn from_i64(m: usize, n: usize, mats: &[Vec<Vec<i64>>]) -> Self {
        let conv = mats
            .iter()
            .map(|a| {
                a.iter()
                    .map(|row| {
                        row.iter()
                            .map(|&v| Rational::from_integer(v.into()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        LinearMatrix::new(m, n, conv).expect("consistent shapes")
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[Vec<Vec<Rational>>] {
        &self.mats
    }

    /// The entry `A(x)[i][j]` as a polynomial in an `nvars`-variable
    /// universe whose first `n` variables are `x`.
    pub fn entry_poly(&self, vars: &VarSet, i: usize, j: usize) -> MultiPoly {
        let nv = vars.len();
        let mut terms = Vec::new();
        if !self.mats[0][i][j].is_zero() {
            terms.push((Monomial::one(nv), self.mats[0][i][j].clone()));
        }
        for k in 0..self.n {
            let c = &self.mats[k + 1][i][j];
            if !c.is_zero() {
                terms.push((Monomial::var(nv, k), c.clone()));
            }
        }
        MultiPoly::from_terms(vars, terms)
    }

    /// All `k x k` minors of `A(x)` as polynomials in `x1..xn`.
    pub fn minors_ideal_gens(&self, k: usize) -> (VarSet, Vec<MultiPoly>) {
        let vars = VarSet::xs(self.n);
        let mat: Vec<Vec<MultiPoly>> = (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entry_poly(&vars, i, j)).collect())
            .collect();
        (vars, crate::poly::minors(k, &mat))
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        assert_eq!(x.len(), self.n);
        let mut out = self.mats[0].clone();
        for k in 0..self.n {
            for i in 0..self.m {
                for j in 0..self.m {
                    let t = &self.mats[k + 1][i][j] * &x[k];
                    out[i][j] += t;
                }
            }
        }
        out
    }

    /// The pencil of `A(M x)`: coefficient matrices recombine columnwise.
    pub fn change_of_variables(&self, m_change: &[Vec<Rational>]) -> Result<Self, ArithError> {
        if m_change.len() != self.n || m_change.iter().any(|r| r.len() != self.n) {
            return Err(ArithError::BlockSize {
                block: self.n,
                dim: m_change.len(),
            });
        }
        if !matrix_is_invertible(m_change) {
            return Err(ArithError::SingularMatrix);
        }
        let mut mats = vec![self.mats[0].clone()];
        for k in 0..self.n {
            let mut mk = vec![vec![Rational::zero(); self.m]; self.m];
            for j in 0..self.n {
                let c = &m_change[j][k];
                if c.is_zero() {
                    continue;
                }
                for i in 0..self.m {
                    for l in 0..self.m {
                        let t = &self.mats[j + 1][i][l] * c;
                        mk[i][l] += t;
                    }
                }
            }
            mats.push(mk);
        }
        Ok(LinearMatrix {
            m: self.m,
            n: self.n,
            mats,
        })
    }

    /// Sets `x1 = t`, producing the pencil `(A0 + t A1) + x2 A2 + ...` in
    /// `n - 1` variables.
    pub fn substitute_first_variable(&self, t: &Rational) -> LinearMatrix {
        assert!(self.n >= 1);
        let mut a0 = self.mats[0].clone();
        for i in 0..self.m {
            for j in 0..self.m {
                let add = &self.mats[1][i][j] * t;
                a0[i][j] += add;
            }
        }
        let mut mats = vec![a0];
        mats.extend_from_slice(&self.mats[2..]);
        LinearMatrix {
            m: self.m,
            n: self.n - 1,
            mats,
        }
    }
}

/// The incidence system `f(A, U, S) = (A(x)Y(y), U Y(y) - S)`.
#[derive(Debug, Clone)]
pub struct IncidenceSystem {
    pub a: LinearMatrix,
    pub r: usize,
    pub u: Vec<Vec<Rational>>,
    pub s: Vec<Vec<Rational>>,
    /// `x1..xn`, then `y_{i,j}` row-major over the `m x (m-r)` kernel
    /// matrix.
    pub vars: VarSet,
    /// `m(m-r)` bilinear entries of `A(x)Y(y)` (row-major), then the
    /// `(m-r)^2` affine entries of `U Y(y) - S`.
    pub polys: Vec<MultiPoly>,
}

/// Index of `y_{row, col}` inside the combined `(x, y)` universe.
fn y_index(n: usize, corank: usize, row: usize, col: usize) -> usize {
    n + row * corank + col
}

pub fn build_incidence(
    a: &LinearMatrix,
    r: usize,
    u: &[Vec<Rational>],
    s: &[Vec<Rational>],
) -> Result<IncidenceSystem, IncidenceError> {
    let m = a.size();
    let n = a.nvars();
    if r >= m {
        return Err(IncidenceError::InvalidRank { r, m });
    }
    let corank = m - r;
    if u.len() != corank || u.iter().any(|row| row.len() != m) || matrix_rank(u) != corank {
        return Err(IncidenceError::RankDeficientU);
    }
    if s.len() != corank || s.iter().any(|row| row.len() != corank) || !matrix_is_invertible(s) {
        return Err(IncidenceError::SingularS);
    }
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    for i in 1..=m {
        for j in 1..=corank {
            names.push(format!("y{i}_{j}"));
        }
    }
    let vars = VarSet::new(names);
    let nv = vars.len();
    let mut polys = Vec::with_capacity((2 * m - r) * corank);
    // A(x) Y(y): entry (i, j) = sum_k A(x)[i][k] * y_{k,j}.
    for i in 0..m {
        for j in 0..corank {
            let mut acc = MultiPoly::zero(&vars);
            for k in 0..m {
                let aik = a.entry_poly(&vars, i, k);
                if aik.is_zero() {
                    continue;
                }
                let y = MultiPoly::var(&vars, y_index(n, corank, k, j));
                acc = acc.add(&aik.mul(&y)?)?;
            }
            polys.push(acc);
        }
    }
    // U Y(y) - S.
    for i in 0..corank {
        for j in 0..corank {
            let mut terms = Vec::new();
            for k in 0..m {
                if !u[i][k].is_zero() {
                    terms.push((
                        Monomial::var(nv, y_index(n, corank, k, j)),
                        u[i][k].clone(),
                    ));
                }
            }
            if !s[i][j].is_zero() {
                terms.push((Monomial::one(nv), -s[i][j].clone()));
            }
            polys.push(MultiPoly::from_terms(&vars, terms));
        }
    }
    Ok(IncidenceSystem {
        a: a.clone(),
        r,
        u: u.to_vec(),
        s: s.to_vec(),
        vars,
        polys,
    })
}

/// The incidence system with the `(m-r)^2` affine relations solved for
/// `m - r` rows of `Y`, leaving `m(m-r)` bilinear polynomials in `x` and
/// the remaining `r(m-r)` kernel variables.
#[derive(Debug, Clone)]
pub struct ReducedIncidence {
    /// `x1..xn` then the kept `y` variables (row-major).
    pub vars: VarSet,
    pub polys: Vec<MultiPoly>,
    /// Rows of `Y` solved away (0-based).
    pub eliminated_rows: Vec<usize>,
    pub kept_rows: Vec<usize>,
    /// For each eliminated row, the affine expressions (one per column of
    /// `Y`) over the reduced universe.
    pub substitutions: Vec<Vec<MultiPoly>>,
    pub n: usize,
    pub m: usize,
    pub r: usize,
}

/// Eliminates `(m-r)^2` kernel variables via `U Y = S`, preferring the
/// last `m - r` rows of `Y` and falling back to any pivot set for which
/// the column submatrix of `U` is invertible.
pub fn eliminate_kernel_rows(sys: &IncidenceSystem) -> Result<ReducedIncidence, IncidenceError> {
    let m = sys.a.size();
    let n = sys.a.nvars();
    let corank = m - sys.r;
    let candidates: Vec<Vec<usize>> = {
        let last: Vec<usize> = (m - corank..m).collect();
        let mut all = vec![last.clone()];
        for set in crate::poly::subsets(m, corank) {
            if set != last {
                all.push(set);
            }
        }
        all
    };
    let chosen = candidates
        .into_iter()
        .find(|rows| {
            let sub: Vec<Vec<Rational>> = (0..corank)
                .map(|i| rows.iter().map(|&c| sys.u[i][c].clone()).collect())
                .collect();
            matrix_is_invertible(&sub)
        })
        .ok_or(IncidenceError::NoPivot)?;
    let kept: Vec<usize> = (0..m).filter(|i| !chosen.contains(i)).collect();

    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    for &i in &kept {
        for j in 1..=corank {
            names.push(format!("y{}_{}", i + 1, j));
        }
    }
    let vars = VarSet::new(names);
    let nv = vars.len();
    let kept_index = |row: usize, col: usize| -> usize {
        let pos = kept.iter().position(|&k| k == row).expect("kept row");
        n + pos * corank + col
    };

    // U_C Y_C = S - U_K Y_K  =>  Y_C = U_C^{-1} (S - U_K Y_K).
    let u_c: Vec<Vec<Rational>> = (0..corank)
        .map(|i| chosen.iter().map(|&c| sys.u[i][c].clone()).collect())
        .collect();
    let u_c_inv = crate::poly::matrix_inverse(&u_c)?;
    // rhs[i][j] = S[i][j] - sum over kept rows k of U[i][k] y_{k,j}.
    let rhs: Vec<Vec<MultiPoly>> = (0..corank)
        .map(|i| {
            (0..corank)
                .map(|j| {
                    let mut terms = vec![(Monomial::one(nv), sys.s[i][j].clone())];
                    for &k in &kept {
                        if !sys.u[i][k].is_zero() {
                            terms.push((
                                Monomial::var(nv, kept_index(k, j)),
                                -sys.u[i][k].clone(),
                            ));
                        }
                    }
                    MultiPoly::from_terms(&vars, terms)
                })
                .collect()
        })
        .collect();
    // substitutions[c][j]: expression for y_{chosen[c], j}.
    let mut substitutions = vec![vec![MultiPoly::zero(&vars); corank]; corank];
    for (c, _) in chosen.iter().enumerate() {
        for j in 0..corank {
            let mut acc = MultiPoly::zero(&vars);
            for i in 0..corank {
                if !u_c_inv[c][i].is_zero() {
                    acc = acc.add(&rhs[i][j].scale(&u_c_inv[c][i]))?;
                }
            }
            substitutions[c][j] = acc;
        }
    }

    // Substitute into the bilinear block: entry (i, j) of A(x) Y(y).
    let mut polys = Vec::with_capacity(m * corank);
    for i in 0..m {
        for j in 0..corank {
            let mut acc = MultiPoly::zero(&vars);
            for k in 0..m {
                let aik = sys.a.entry_poly(&vars, i, k);
                if aik.is_zero() {
                    continue;
                }
                let yk = match chosen.iter().position(|&c| c == k) {
                    Some(c) => substitutions[c][j].clone(),
                    None => MultiPoly::var(&vars, kept_index(k, j)),
                };
                acc = acc.add(&aik.mul(&yk)?)?;
            }
            polys.push(acc);
        }
    }
    Ok(ReducedIncidence {
        vars,
        polys,
        eliminated_rows: chosen,
        kept_rows: kept,
        substitutions,
        n,
        m,
        r: sys.r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    pub fn cayley() -> LinearMatrix {
        LinearMatrix::from_i64(
            3,
            3,
            &[
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]],
                vec![vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]],
                vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0]],
            ],
        )
    }

    #[test]
    fn dimension_counts() {
        // m=2, r=1, n=1: 3 polynomials in 3 variables.
        let a = LinearMatrix::from_i64(
            2,
            1,
            &[vec![vec![0, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 0]]],
        );
        let sys = build_incidence(&a, 1, &[vec![q(1), q(0)]], &[vec![q(1)]]).unwrap();
        assert_eq!(sys.polys.len(), 3);
        assert_eq!(sys.vars.len(), 3);

        // Cayley, r=2: 4 polynomials in 6 variables.
        let c = cayley();
        let u = vec![vec![q(3), q(-1), q(2)]];
        let s = vec![vec![q(5)]];
        let sys = build_incidence(&c, 2, &u, &s).unwrap();
        assert_eq!(sys.polys.len(), 4);
        assert_eq!(sys.vars.len(), 6);
        // Bidegree audit: degree <= 1 in x-block, <= 1 in y-block.
        for p in &sys.polys {
            assert!(p.block_degree(0, 3) <= 1);
            assert!(p.block_degree(3, 6) <= 1);
        }
    }

    #[test]
    fn hand_solved_instance() {
        // A(x) = [[x1, 0], [0, 1]], r=1, U=[1 0], S=[1]:
        // polys {x1*y1_1, y2_1, y1_1 - 1}, unique solution (0, 1, 0).
        let a = LinearMatrix::from_i64(
            2,
            1,
            &[vec![vec![0, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 0]]],
        );
        let sys = build_incidence(&a, 1, &[vec![q(1), q(0)]], &[vec![q(1)]]).unwrap();
        let sol = [q(0), q(1), q(0)];
        for p in &sys.polys {
            assert!(p.eval(&sol).unwrap().is_zero());
        }
        // Reduction eliminates y1_1 = 1, leaving {x1, y2_1}.
        let red = eliminate_kernel_rows(&sys).unwrap();
        assert_eq!(red.polys.len(), 2);
        assert_eq!(red.vars.len(), 2);
        let as_strings: Vec<String> = red.polys.iter().map(|p| p.to_canonical_string()).collect();
        assert!(as_strings.contains(&"1*x1".to_string()));
        assert!(as_strings.contains(&"1*y2_1".to_string()));
    }

    #[test]
    fn reduction_counts() {
        // m=3, r=2: 3 polynomials in n + 2 variables.
        let c = cayley();
        let u = vec![vec![q(2), q(7), q(-3)]];
        let s = vec![vec![q(4)]];
        let sys = build_incidence(&c, 2, &u, &s).unwrap();
        let red = eliminate_kernel_rows(&sys).unwrap();
        assert_eq!(red.polys.len(), 3);
        assert_eq!(red.vars.len(), 3 + 2);
    }

    #[test]
    fn reduction_preserves_zero_set() {
        // Solutions of the reduced system extend to solutions of the full
        // system through the recorded substitutions.
        let a = LinearMatrix::from_i64(
            2,
            1,
            &[vec![vec![0, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 0]]],
        );
        let u = vec![vec![q(2), q(3)]];
        let s = vec![vec![q(6)]];
        let sys = build_incidence(&a, 1, &u, &s).unwrap();
        let red = eliminate_kernel_rows(&sys).unwrap();
        // Reduced universe: (x1, kept y). Solve by hand: reduced polys
        // vanish at x1=0 and whatever the kept variable needs to be.
        // Use the substitution to rebuild the full point and check f = 0.
        // Reduced system: find a zero by brute scan over small rationals.
        let mut found = None;
        'outer: for xi in -6..=6 {
            for yi in -6..=6 {
                for den in 1..=3 {
                    let pt = [q(xi), Rational::new(yi.into(), den.into())];
                    if red.polys.iter().all(|p| p.eval(&pt).unwrap().is_zero()) {
                        found = Some(pt);
                        break 'outer;
                    }
                }
            }
        }
        let pt = found.expect("a rational solution of the reduced system");
        // Rebuild full coordinates.
        let mut full = vec![q(0); sys.vars.len()];
        full[0] = pt[0].clone();
        let corank = 1;
        for (pos, &row) in red.kept_rows.iter().enumerate() {
            for j in 0..corank {
                full[1 + row * corank + j] = pt[1 + pos * corank + j].clone();
            }
        }
        for (c, &row) in red.eliminated_rows.iter().enumerate() {
            for j in 0..corank {
                full[1 + row * corank + j] = red.substitutions[c][j].eval(&pt).unwrap();
            }
        }
        for p in &sys.polys {
            assert!(p.eval(&full).unwrap().is_zero());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let a = LinearMatrix::from_i64(
            2,
            1,
            &[vec![vec![0, 0], vec![0, 1]], vec![vec![1, 0], vec![0, 0]]],
        );
        assert!(matches!(
            build_incidence(&a, 2, &[vec![q(1), q(0)]], &[vec![q(1)]]),
            Err(IncidenceError::InvalidRank { .. })
        ));
        assert!(matches!(
            build_incidence(&a, 1, &[vec![q(0), q(0)]], &[vec![q(1)]]),
            Err(IncidenceError::RankDeficientU)
        ));
        assert!(matches!(
            build_incidence(&a, 1, &[vec![q(1), q(0)]], &[vec![q(0)]]),
            Err(IncidenceError::SingularS)
        ));
    }

    #[test]
    fn substitution_specializes() {
        let c = cayley();
        let t = q(1);
        let sub = c.substitute_first_variable(&t);
        assert_eq!(sub.nvars(), 2);
        let p = [q(2), q(-1)];
        let full = [q(1), q(2), q(-1)];
        assert_eq!(sub.eval(&p), c.eval(&full));
    }

    #[test]
    fn change_of_variables_matches_eval() {
        let c = cayley();
        let m = vec![
            vec![q(1), q(2), q(0)],
            vec![q(0), q(1), q(0)],
            vec![q(3), q(0), q(1)],
        ];
        let cm = c.change_of_variables(&m).unwrap();
        let x = [q(2), q(-1), q(5)];
        let mx: Vec<Rational> = (0..3)
            .map(|i| (0..3).map(|j| &m[i][j] * &x[j]).sum())
            .collect();
        assert_eq!(cm.eval(&x), c.eval(&mx));
    }
}
