//! Independent brute-force reference implementations, used only by the
//! test suites to cross-check the main code paths.

use crate::factorizer::GeomFactorization;
use crate::polyring::{GeomSeries, IntPoly};

/// Decide by exhaustive enumeration whether `f` is a product of geometric
/// series: try every multiset of (exponent, length) pairs with product of
/// lengths `f(1)` and total degree `deg f`, expanding each candidate.
///
/// Independent of the backtracking search: no divisibility reasoning, no
/// forced exponents.
pub fn brute_force_geometric_factorization(f: &IntPoly) -> Option<GeomFactorization> {
    if f.is_one() {
        return Some(GeomFactorization::new(vec![]));
    }
    let deg = f.degree()?;
    let total = f.eval(1).ok()?;
    if total < 2 {
        return None;
    }
    let mut stack = Vec::new();
    if enumerate(f, total as u64, deg, (1, 2), &mut stack) {
        Some(GeomFactorization::new(stack))
    } else {
        None
    }
}

fn enumerate(
    f: &IntPoly,
    n_budget: u64,
    d_budget: usize,
    min_pair: (usize, u32),
    stack: &mut Vec<GeomSeries>,
) -> bool {
    if n_budget == 1 {
        if d_budget != 0 {
            return false;
        }
        let mut prod = IntPoly::one();
        for s in stack.iter() {
            match prod.mul(&s.expand()) {
                Ok(p) => prod = p,
                Err(_) => return false,
            }
        }
        return prod == *f;
    }
    for e in min_pair.0..=d_budget.max(1) {
        let gamma_start = if e == min_pair.0 { min_pair.1 } else { 2 };
        let mut gamma = gamma_start;
        while (gamma as u64) <= n_budget && (gamma as usize - 1) * e <= d_budget {
            if n_budget.is_multiple_of(gamma as u64) {
                stack.push(GeomSeries::new(e, gamma));
                if enumerate(
                    f,
                    n_budget / gamma as u64,
                    d_budget - (gamma as usize - 1) * e,
                    (e, gamma),
                    stack,
                ) {
                    return true;
                }
                stack.pop();
            }
            gamma += 1;
        }
    }
    false
}
