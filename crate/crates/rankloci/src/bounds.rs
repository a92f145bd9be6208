//! Multilinear Bézout bounds on output degrees.
//!
//! `delta(m, n, r)` bounds the number of solutions of the critical-point
//! system at one recursion level; `profile` assembles the per-level bounds
//! and their sum. `delta_oracle` recomputes the same number independently
//! by expanding the product of binomial generating polynomials and reading
//! off one coefficient, which is what the bound actually counts.

use num::{BigUint, One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, thiserror::Error)]
pub enum BoundsError {
    #[error("rank must satisfy 0 <= r <= m-1 (got m={m}, r={r})")]
    InvalidRank { m: i64, r: i64 },
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

fn validate(m: u64, r: u64) -> Result<(), BoundsError> {
    if m == 0 || r >= m {
        return Err(BoundsError::InvalidRank {
            m: m as i64,
            r: r as i64,
        });
    }
    Ok(())
}

/// Degree bound for one recursion level in `n` variables.
pub fn delta(m: u64, n: u64, r: u64) -> Result<BigUint, BoundsError> {
    validate(m, r)?;
    let d = m - r;
    let base = d * d;
    if n < base {
        return Ok(BigUint::zero());
    }
    if n == base {
        return Ok(binomial(m * d, base));
    }
    let lo = n.saturating_sub(m * d);
    let hi = (n - base).min(r * d);
    let mut total = BigUint::zero();
    for k in lo..=hi {
        total += binomial(m * d, n - k) * binomial(n - 1, k + base - 1) * binomial(r * d, k);
    }
    Ok(total)
}

/// Dense product of `(sx + sy)^a (sy + sz)^b (sx + sz)^c` stored as a
/// coefficient cube indexed by the degrees in `sx, sy, sz`.
fn expand_cube(a: u64, b: u64, c: u64) -> Vec<Vec<Vec<BigUint>>> {
    let (xd, yd, zd) = ((a + c + 1) as usize, (a + b + 1) as usize, (b + c + 1) as usize);
    let mut cube = vec![vec![vec![BigUint::zero(); zd]; yd]; xd];
    cube[0][0][0] = BigUint::one();
    let factors: [(usize, usize, u64); 3] = [(0, 1, a), (1, 2, b), (0, 2, c)];
    for &(v1, v2, reps) in &factors {
        for _ in 0..reps {
            let mut next = vec![vec![vec![BigUint::zero(); zd]; yd]; xd];
            for (x, plane) in cube.iter().enumerate() {
                for (y, row) in plane.iter().enumerate() {
                    for (z, coef) in row.iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let mut idx = [x, y, z];
                        idx[v1] += 1;
                        next[idx[0]][idx[1]][idx[2]] += coef;
                        let mut idx = [x, y, z];
                        idx[v2] += 1;
                        next[idx[0]][idx[1]][idx[2]] += coef;
                    }
                }
            }
            cube = next;
        }
    }
    cube
}

/// Independent recomputation of `delta` by coefficient extraction.
pub fn delta_oracle(m: u64, n: u64, r: u64) -> Result<BigUint, BoundsError> {
    validate(m, r)?;
    let d = m - r;
    let base = d * d;
    if n < base {
        return Ok(BigUint::zero());
    }
    if n == base {
        // Coefficient of sx^n sy^(r d) in (sx + sy)^(m d).
        let cube = expand_cube(m * d, 0, 0);
        let (xi, yi) = (n as usize, (r * d) as usize);
        return Ok(cube
            .get(xi)
            .and_then(|p| p.get(yi))
            .and_then(|row| row.first())
            .cloned()
            .unwrap_or_else(BigUint::zero));
    }
    // Coefficient of sx^n sy^(r d) sz^(m d - 1) in
    // (sx + sy)^(m d) (sy + sz)^(n - 1) (sx + sz)^(r d).
    let cube = expand_cube(m * d, n - 1, r * d);
    let (xi, yi, zi) = (n as usize, (r * d) as usize, (m * d - 1) as usize);
    Ok(cube
        .get(xi)
        .and_then(|p| p.get(yi))
        .and_then(|row| row.get(zi))
        .cloned()
        .unwrap_or_else(BigUint::zero))
}

/// Per-level bounds for a full run on `n` variables, from the top level
/// down to the base case, with their sum and the closed-form cube bound.
#[derive(Debug, Clone, Serialize)]
pub struct BezoutProfile {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    /// `delta(m, j, r)` for `j = n` down to `(m-r)^2`, as decimal strings.
    pub per_step: Vec<String>,
    pub total: String,
    /// `binom(n + m(m-r), n)^3`.
    pub cube_bound: String,
}

pub fn profile(m: u64, n: u64, r: u64) -> Result<BezoutProfile, BoundsError> {
    validate(m, r)?;
    let base = (m - r) * (m - r);
    let mut per_step = Vec::new();
    let mut total = BigUint::zero();
    if n >= base {
        for j in (base..=n).rev() {
            let dj = delta(m, j, r)?;
            total += &dj;
            per_step.push(dj);
        }
    }
    let cb = binomial(n + m * (m - r), n).pow(3);
    Ok(BezoutProfile {
        m,
        n,
        r,
        per_step: per_step.iter().map(|v| v.to_string()).collect(),
        total: total.to_string(),
        cube_bound: cb.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: u64, n: u64, r: u64) -> u64 {
        use num::ToPrimitive;
        delta(m, n, r).unwrap().to_u64().unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(d(3, 1, 2), 3); // binom(3, 1)
        assert_eq!(d(3, 2, 2), 9); // k=0 gives 3, k=1 gives 6
        assert_eq!(d(4, 4, 2), 70); // binom(8, 4)
        assert_eq!(d(3, 6, 2), 0); // index set empty beyond m^2 - r^2
    }

    #[test]
    fn oracle_matches_samples() {
        use num::ToPrimitive;
        assert_eq!(delta_oracle(3, 2, 2).unwrap().to_u64().unwrap(), 9);
        assert_eq!(delta_oracle(4, 4, 2).unwrap().to_u64().unwrap(), 70);
    }

    #[test]
    fn oracle_matches_delta_on_grid() {
        for m in 1..=6u64 {
            for r in 0..m {
                for n in 0..=12u64 {
                    assert_eq!(
                        delta(m, n, r).unwrap(),
                        delta_oracle(m, n, r).unwrap(),
                        "mismatch at m={m} n={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn profile_example() {
        let p = profile(3, 2, 2).unwrap();
        assert_eq!(p.per_step, vec!["9".to_string(), "3".to_string()]);
        assert_eq!(p.total, "12");
    }

    #[test]
    fn cube_bound_dominates_on_grid() {
        for m in 1..=6u64 {
            for r in 0..m {
                for n in 0..=12u64 {
                    let dl = delta(m, n, r).unwrap();
                    let cb = binomial(n + m * (m - r), n).pow(3);
                    assert!(dl <= cb, "cube bound fails at m={m} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn totals_stabilize_past_m2_minus_r2() {
        for m in 2..=5u64 {
            for r in 1..m {
                let stable = m * m - r * r;
                let t1 = profile(m, stable, r).unwrap().total;
                for n in stable + 1..=stable + 4 {
                    assert_eq!(profile(m, n, r).unwrap().total, t1);
                }
            }
        }
    }

    #[test]
    fn invalid_rank_rejected() {
        assert!(delta(3, 2, 3).is_err());
        assert!(profile(0, 2, 0).is_err());
    }
}
