//! Krull dimension from a grevlex staircase.
//!
//! The dimension of `V(I)` equals the largest cardinality of a set `S` of
//! variables such that no leading monomial of the basis is supported
//! entirely inside `S` (the standard independent-set computation).

use crate::monomial::Monomial;
use std::collections::HashMap;

/// Dimension of the zero set given the leading monomials of a Gröbner
/// basis; `-1` when the basis is `{1}` (empty variety).
pub fn staircase_dimension(leading: &[Monomial], nvars: usize) -> i64 {
    if leading.iter().any(|m| m.is_one()) {
        return -1;
    }
    assert!(nvars <= 64, "dimension search limited to 64 variables");
    let supports: Vec<u64> = leading.iter().map(|m| m.support_mask()).collect();
    let full: u64 = if nvars == 64 {
        u64::MAX
    } else {
        (1u64 << nvars) - 1
    };
    let mut memo: HashMap<u64, u32> = HashMap::new();
    fn rec(allowed: u64, supports: &[u64], memo: &mut HashMap<u64, u32>) -> u32 {
        if let Some(&v) = memo.get(&allowed) {
            return v;
        }
        // A leading monomial fully inside the allowed set blocks it.
        let blocker = supports.iter().find(|&&s| s & !allowed == 0);
        let result = match blocker {
            None => allowed.count_ones(),
            Some(&s) => {
                let mut best = 0;
                let mut bits = s;
                while bits != 0 {
                    let v = bits & bits.wrapping_neg();
                    bits ^= v;
                    best = best.max(rec(allowed & !v, supports, memo));
                }
                best
            }
        };
        memo.insert(allowed, result);
        result
    }
    rec(full, &supports, &mut memo) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn hyperplane_in_three_vars() {
        assert_eq!(staircase_dimension(&[m(&[1, 0, 0])], 3), 2);
    }

    #[test]
    fn unit_ideal() {
        assert_eq!(staircase_dimension(&[m(&[0, 0, 0])], 3), -1);
    }

    #[test]
    fn zero_dimensional_staircase() {
        let lts = [m(&[2, 0]), m(&[0, 3])];
        assert_eq!(staircase_dimension(&lts, 2), 0);
    }

    #[test]
    fn twisted_cubic_is_a_curve() {
        // lt(x2 - x1^2) = x1^2 (grevlex), lt(x3 - x1^3) involves x1^2 x? —
        // use the abstract staircase {x1 x2, x1^2, x2^2} plus nothing on x3.
        let lts = [m(&[1, 1, 0]), m(&[2, 0, 0]), m(&[0, 2, 0])];
        assert_eq!(staircase_dimension(&lts, 3), 1);
    }
}
