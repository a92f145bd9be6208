//! Critical-point (Lagrange) systems for the projection onto `x1`.
//!
//! For the incidence system `f` of a pencil (after a change of variables
//! `M`), the Lagrange system stacks `f`, the multiplier rows `z' D1 f`
//! where `D1 f` drops the `x1` column of the Jacobian, and one affine
//! normalization `v' z - 1`. Its solutions carry the critical points of
//! `x1` restricted to the incidence variety.

use crate::incidence::{
    build_incidence, eliminate_kernel_rows, IncidenceError, IncidenceSystem, LinearMatrix,
    ReducedIncidence,
};
use crate::monomial::Monomial;
use crate::poly::{MultiPoly, VarSet};
use crate::rational::Rational;
use num::Zero;

/// Jacobian of the system with respect to the subset `vars` of its
/// universe: rows follow `polys`, columns follow `vars`.
pub fn jacobian(polys: &[MultiPoly], vars: &[usize]) -> Vec<Vec<MultiPoly>> {
    polys
        .iter()
        .map(|p| vars.iter().map(|&v| p.partial_derivative(v)).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct LagrangeSystem {
    /// `x`, then `y` (full kernel matrix), then `z`.
    pub vars: VarSet,
    /// `(2m-r)(m-r)` incidence entries, then `n-1 + m(m-r)` entries of
    /// `z' D1 f`, then `v' z - 1`.
    pub polys: Vec<MultiPoly>,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub v: Vec<Rational>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum LagrangeError {
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error("v must have length {want} (got {got})")]
    VLength { want: usize, got: usize },
    #[error(transparent)]
    Arith(#[from] crate::poly::ArithError),
}

/// Extends a polynomial into a larger universe sharing the leading
/// variables.
fn extend(p: &MultiPoly, vars: &VarSet) -> MultiPoly {
    let extra = vars.len() - p.nvars();
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut exps = m.exps().to_vec();
            exps.extend(std::iter::repeat(0).take(extra));
            (Monomial::from_exps(&exps), c.clone())
        })
        .collect();
    MultiPoly::from_terms(vars, terms)
}

fn lagrange_from_parts(
    f_vars: &VarSet,
    f_polys: &[MultiPoly],
    n: usize,
    m: usize,
    r: usize,
    v: &[Rational],
) -> Result<(VarSet, Vec<MultiPoly>), LagrangeError> {
    let zlen = f_polys.len();
    if v.len() != zlen {
        return Err(LagrangeError::VLength {
            want: zlen,
            got: v.len(),
        });
    }
    let znames: Vec<String> = (1..=zlen).map(|i| format!("z{i}")).collect();
    let vars = f_vars.concat(&VarSet::new(znames));
    let nv = vars.len();
    let zbase = f_vars.len();
    let mut polys: Vec<MultiPoly> = f_polys.iter().map(|p| extend(p, &vars)).collect();
    // Columns of D1 f: every variable of f except x1.
    let cols: Vec<usize> = (1..f_vars.len()).collect();
    let jac = jacobian(f_polys, &cols);
    for (ci, _) in cols.iter().enumerate() {
        let mut acc = MultiPoly::zero(&vars);
        for (ri, row) in jac.iter().enumerate() {
            if row[ci].is_zero() {
                continue;
            }
            let zi = MultiPoly::var(&vars, zbase + ri);
            acc = acc.add(&extend(&row[ci], &vars).mul(&zi)?)?;
        }
        polys.push(acc);
    }
    // v' z - 1.
    let mut terms = vec![(Monomial::one(nv), -Rational::from_integer(1.into()))];
    for (i, vi) in v.iter().enumerate() {
        if !vi.is_zero() {
            terms.push((Monomial::var(nv, zbase + i), vi.clone()));
        }
    }
    polys.push(MultiPoly::from_terms(&vars, terms));
    let _ = (n, m, r);
    Ok((vars, polys))
}

/// The full Lagrange system `(f(A∘M, U, S), z' D1 f, v' z - 1)`:
/// `n + (3m-r)(m-r)` polynomials in as many variables.
pub fn build_lagrange(
    a: &LinearMatrix,
    r: usize,
    m_change: &[Vec<Rational>],
    u: &[Vec<Rational>],
    s: &[Vec<Rational>],
    v: &[Rational],
) -> Result<LagrangeSystem, LagrangeError> {
    let am = a
        .change_of_variables(m_change)
        .map_err(LagrangeError::Arith)?;
    let inc = build_incidence(&am, r, u, s)?;
    let (vars, polys) = lagrange_from_parts(&inc.vars, &inc.polys, a.nvars(), a.size(), r, v)?;
    Ok(LagrangeSystem {
        vars,
        polys,
        n: a.nvars(),
        m: a.size(),
        r,
        v: v.to_vec(),
    })
}

/// The Lagrange system built on the reduced incidence system (kernel rows
/// eliminated through `U Y = S`): `n + m^2 - r^2` polynomials in
/// `n + (m+r)(m-r)` variables with multipliers indexed by the `m(m-r)`
/// remaining bilinear equations. Same `x`-projection as the full system;
/// far fewer variables.
pub struct ReducedLagrange {
    pub vars: VarSet,
    pub polys: Vec<MultiPoly>,
    pub reduced: ReducedIncidence,
    pub v: Vec<Rational>,
}

pub fn build_lagrange_reduced(
    sys: &IncidenceSystem,
    v: &[Rational],
) -> Result<ReducedLagrange, LagrangeError> {
    let red = eliminate_kernel_rows(sys)?;
    let (vars, polys) = lagrange_from_parts(&red.vars, &red.polys, red.n, red.m, red.r, v)?;
    Ok(ReducedLagrange {
        vars,
        polys,
        reduced: red,
        v: v.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_from_i64 as q;

    fn cayley() -> LinearMatrix {
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

    fn identity(n: usize) -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| (0..n).map(|j| q((i == j) as i64)).collect())
            .collect()
    }

    #[test]
    fn square_dimension_counts() {
        // m=3, r=2, n=3: 10 polynomials in 10 variables.
        let a = cayley();
        let u = vec![vec![q(1), q(2), q(3)]];
        let s = vec![vec![q(1)]];
        let v: Vec<Rational> = (0..4).map(|i| q(i + 1)).collect();
        let sys = build_lagrange(&a, 2, &identity(3), &u, &s, &v).unwrap();
        assert_eq!(sys.polys.len(), 10);
        assert_eq!(sys.vars.len(), 10);

        // m=2, r=1, n=2: 7 equations in 7 variables.
        let b = LinearMatrix::from_i64(
            2,
            2,
            &[
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![1, 0]],
                vec![vec![1, 0], vec![0, -1]],
            ],
        );
        let u = vec![vec![q(1), q(1)]];
        let s = vec![vec![q(1)]];
        let v: Vec<Rational> = (0..3).map(|i| q(2 * i + 1)).collect();
        let sys = build_lagrange(&b, 1, &identity(2), &u, &s, &v).unwrap();
        assert_eq!(sys.polys.len(), 7);
        assert_eq!(sys.vars.len(), 7);
    }

    #[test]
    fn first_basis_vector_normalization() {
        let a = cayley();
        let u = vec![vec![q(1), q(2), q(3)]];
        let s = vec![vec![q(1)]];
        let mut v = vec![q(0); 4];
        v[0] = q(1);
        let sys = build_lagrange(&a, 2, &identity(3), &u, &s, &v).unwrap();
        let last = sys.polys.last().unwrap();
        // z1 - 1.
        let z1 = MultiPoly::var(&sys.vars, 6);
        let expect = z1.sub(&MultiPoly::one(&sys.vars)).unwrap();
        assert_eq!(last, &expect);
    }

    #[test]
    fn jacobian_product_rule() {
        let v = VarSet::new(vec!["x1", "y1"]);
        let f = MultiPoly::var(&v, 0).mul(&MultiPoly::var(&v, 1)).unwrap();
        let j = jacobian(&[f], &[0, 1]);
        assert_eq!(j[0][0], MultiPoly::var(&v, 1));
        assert_eq!(j[0][1], MultiPoly::var(&v, 0));
    }

    #[test]
    fn incidence_jacobian_entries_are_linear() {
        let a = cayley();
        let u = vec![vec![q(1), q(2), q(3)]];
        let s = vec![vec![q(1)]];
        let sys = crate::incidence::build_incidence(&a, 2, &u, &s).unwrap();
        let all: Vec<usize> = (0..sys.vars.len()).collect();
        for row in jacobian(&sys.polys, &all) {
            for e in row {
                assert!(e.total_degree() <= 1);
            }
        }
    }

    #[test]
    fn chain_rule_spot_check() {
        // D(f ∘ M) = (Df ∘ M) · blockdiag(M, I) at random rational points.
        let a = cayley();
        let m = vec![
            vec![q(2), q(1), q(0)],
            vec![q(0), q(1), q(1)],
            vec![q(1), q(0), q(1)],
        ];
        let u = vec![vec![q(1), q(2), q(3)]];
        let s = vec![vec![q(1)]];
        let f = crate::incidence::build_incidence(&a, 2, &u, &s).unwrap();
        let am = a.change_of_variables(&m).unwrap();
        let fm = crate::incidence::build_incidence(&am, 2, &u, &s).unwrap();
        let all: Vec<usize> = (0..f.vars.len()).collect();
        let jf = jacobian(&f.polys, &all);
        let jfm = jacobian(&fm.polys, &all);
        let pt: Vec<Rational> = vec![q(1), q(-2), q(3), q(5), q(-1), q(2)];
        // Image point: (M x, y).
        let mut mpt = pt.clone();
        for i in 0..3 {
            mpt[i] = (0..3).map(|j| &m[i][j] * &pt[j]).sum();
        }
        // blockdiag(M, I): column c of the x block mixes by M.
        for (ri, row) in jfm.iter().enumerate() {
            for c in 0..6 {
                let lhs = row[c].eval(&pt).unwrap();
                let rhs: Rational = if c < 3 {
                    (0..3)
                        .map(|k| jf[ri][k].eval(&mpt).unwrap() * &m[k][c])
                        .sum()
                } else {
                    jf[ri][c].eval(&mpt).unwrap()
                };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn reduced_variant_counts() {
        let a = cayley();
        let u = vec![vec![q(1), q(2), q(3)]];
        let s = vec![vec![q(1)]];
        let inc = crate::incidence::build_incidence(&a, 2, &u, &s).unwrap();
        let v: Vec<Rational> = (0..3).map(|i| q(i + 2)).collect();
        let red = build_lagrange_reduced(&inc, &v).unwrap();
        // n + m^2 - r^2 = 3 + 5 = 8 polynomials, x(3) + y(2) + z(3) = 8 vars.
        assert_eq!(red.polys.len(), 8);
        assert_eq!(red.vars.len(), 8);
    }
}
