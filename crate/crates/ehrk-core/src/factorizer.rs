//! Factorization of h*- and g-polynomials into geometric series, the
//! closed-form families that produce such factorizations, and the
//! classification predicate for support (2, 2k-1).
//!
//! The search is a complete deterministic backtracking: for a polynomial
//! with constant term 1 and nonnegative coefficients, any factorization
//! into geometric series must contain a series whose exponent is the
//! smallest exponent present, so that exponent is forced and only the
//! length is branched on (ascending, depth-first, first success wins).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{is_kronecker, GeomSeries, IntPoly, PolyError};
use crate::simplex::{SimplexError, SupportedQ};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// A multiset of geometric series whose product is the factored polynomial,
/// sorted ascending by exponent then length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeomFactorization {
    factors: Vec<GeomSeries>,
}

impl GeomFactorization {
    pub fn new(mut factors: Vec<GeomSeries>) -> Self {
        factors.sort_unstable();
        GeomFactorization { factors }
    }

    /// Build from `(exponent, length)` pairs, dropping length-1 entries
    /// (the constant 1); family formulas produce those at small parameters.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        let factors = pairs
            .iter()
            .filter(|&&(_, gamma)| gamma >= 2)
            .map(|&(e, gamma)| GeomSeries::new(e as usize, gamma as u32))
            .collect();
        GeomFactorization::new(factors)
    }

    pub fn factors(&self) -> &[GeomSeries] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the series lengths; equals the expansion evaluated at 1.
    pub fn product_of_lengths(&self) -> u64 {
        self.factors.iter().map(|f| f.length as u64).product()
    }

    pub fn expand(&self) -> Result<IntPoly, PolyError> {
        let mut acc = IntPoly::one();
        for f in &self.factors {
            acc = acc.mul(&f.expand())?;
        }
        Ok(acc)
    }

    /// e.g. `(1+z)(1+z+z^2)` with repeated factors grouped: `(1+z^3)^2`.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.factors.len() {
            let mut j = i;
            while j < self.factors.len() && self.factors[j] == self.factors[i] {
                j += 1;
            }
            out.push('(');
            out.push_str(&self.factors[i].expand().render_compact());
            out.push(')');
            if j - i > 1 {
                out.push('^');
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

/// Exact division of `f` by the geometric series with exponent `e` and
/// length `gamma`, succeeding only when the quotient exists over the
/// integers with nonnegative coefficients.
///
/// Uses the telescoping recurrence `q_i = f_i - f_{i-e} + q_{i-gamma*e}`
/// (from `q * (1 - z^{gamma e}) = f * (1 - z^e)`), aborting on the first
/// negative quotient coefficient; the tail of the recurrence must vanish
/// for the division to be exact.
fn div_geom_nonneg(f: &IntPoly, e: usize, gamma: u32) -> Option<IntPoly> {
    let deg = f.degree()?;
    let step = gamma as usize * e;
    let dq = deg.checked_sub((gamma as usize - 1) * e)?;
    let mut q = vec![0i64; dq + 1];
    for i in 0..=dq {
        let mut v = f.coeff(i);
        if i >= e {
            v -= f.coeff(i - e);
        }
        if i >= step {
            v += q[i - step];
        }
        if v < 0 {
            return None;
        }
        q[i] = v;
    }
    // remainder of the power-series division must vanish
    for i in dq + 1..=deg + e {
        let mut v = f.coeff(i);
        if i >= e {
            v -= f.coeff(i - e);
        }
        if i >= step {
            v += q.get(i - step).copied().unwrap_or(0);
        }
        if v != 0 {
            return None;
        }
    }
    Some(IntPoly::from_coeffs(q))
}

fn search_factors(f: &IntPoly, acc: &mut Vec<GeomSeries>) -> Result<bool, PolyError> {
    if f.is_one() {
        return Ok(true);
    }
    let deg = f.degree().expect("nonzero by construction");
    let e = (1..=deg)
        .find(|&i| f.coeff(i) != 0)
        .expect("nonconstant with constant term 1");
    let total = f.eval_at_one()?;
    let mut gamma = 2u32;
    while (gamma as i64) <= total {
        if (gamma as usize - 1) * e > deg {
            break;
        }
        if total % gamma as i64 == 0 {
            if let Some(quot) = div_geom_nonneg(f, e, gamma) {
                acc.push(GeomSeries::new(e, gamma));
                if search_factors(&quot, acc)? {
                    return Ok(true);
                }
                acc.pop();
            }
        }
        gamma += 1;
    }
    Ok(false)
}

/// Find a factorization of `f` into geometric series, or `None` with the
/// guarantee that no such factorization exists.
///
/// `f` must have nonnegative coefficients and constant term 1.
pub fn find_geometric_factorization(f: &IntPoly) -> Result<Option<GeomFactorization>, FactorError> {
    if f.coeff(0) != 1 {
        return Err(FactorError::InvalidInput(
            "constant term must be 1".to_string(),
        ));
    }
    if !f.has_nonnegative_coeffs() {
        return Err(FactorError::InvalidInput(
            "coefficients must be nonnegative".to_string(),
        ));
    }
    let mut acc = Vec::new();
    if search_factors(f, &mut acc)? {
        Ok(Some(GeomFactorization::new(acc)))
    } else {
        Ok(None)
    }
}

/// Family identifiers for q-vectors with closed-form geometric
/// factorizations of g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyId {
    /// support contains 1: g is a single geometric series
    Case0,
    /// r = (a, ka-1), x = ((ka-1)c - k, a((ka-1)c - k) + 1)
    Case1,
    /// r = (a, a-1), x = ((a-1)c - 1, ac + 1)
    Case2,
    /// r = (a, a^2-1), x = ((a^2-1)c - a, a(ac-1) + 1)
    Case3,
    /// s = (5,3,2), r = (6,10,15), x = (4,8,3)
    #[serde(rename = "s532-1")]
    S532C1,
    /// s = (5,3,2), x = (5c-1, 3c-1, 8c-1)
    #[serde(rename = "s532-2")]
    S532C2,
    /// s = (5,3,2), x = (5c-1, 9c-1, 14c-1)
    #[serde(rename = "s532-3")]
    S532C3,
    /// r = x = (a_{n+1}, a_n) over every-other Fibonacci numbers
    Fib,
}

impl FamilyId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyId::Case0 => "case0",
            FamilyId::Case1 => "case1",
            FamilyId::Case2 => "case2",
            FamilyId::Case3 => "case3",
            FamilyId::S532C1 => "s532-1",
            FamilyId::S532C2 => "s532-2",
            FamilyId::S532C3 => "s532-3",
            FamilyId::Fib => "fib",
        }
    }
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One instantiated member of a factorization family: the q-vector together
/// with the factorization its family formula predicts for g.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInstance {
    pub family: FamilyId,
    pub params: Vec<(&'static str, u64)>,
    pub q: SupportedQ,
    pub expected: GeomFactorization,
}

impl FamilyInstance {
    /// Check the family identity: the expected product expands to g, and g
    /// is Kronecker. Returns a description of the first failure.
    pub fn verify(&self) -> Result<(), String> {
        let g = self
            .q
            .g_poly()
            .map_err(|e| format!("{:?}: g failed: {e}", self.q))?;
        let expanded = self
            .expected
            .expand()
            .map_err(|e| format!("{:?}: expansion failed: {e}", self.q))?;
        if expanded != g {
            return Err(format!(
                "{:?} [{}]: expected {} = {} but g = {}",
                self.q,
                self.family,
                self.expected.render(),
                expanded.render(),
                g.render()
            ));
        }
        match is_kronecker(&g) {
            Ok(Some(_)) => Ok(()),
            Ok(None) => Err(format!("{:?} [{}]: g is not Kronecker", self.q, self.family)),
            Err(e) => Err(format!("{:?}: Kronecker test failed: {e}", self.q)),
        }
    }
}

/// Support (1, a) with any R-multiplicity `x = (x_one, x_a)`: g is the
/// single geometric series with exponent `(x_one + 1)/a` and length `a`.
pub fn family_case0(a: u64, x_one: u64, x_a: u64) -> Result<FamilyInstance, FactorError> {
    if a < 2 {
        return Err(FactorError::InvalidInput(format!("need a >= 2, got {a}")));
    }
    let q = SupportedQ::from_parts(vec![1, a], vec![x_one, x_a])?;
    if !q.is_reflexive() {
        return Err(FactorError::Simplex(SimplexError::NotRMultiplicity));
    }
    let c1 = (x_one + 1) / a;
    Ok(FamilyInstance {
        family: FamilyId::Case0,
        params: vec![("a", a), ("x1", x_one), ("xa", x_a)],
        q,
        expected: GeomFactorization::from_pairs(&[(c1, a)]),
    })
}

/// Support (a, ka-1) with x = ((ka-1)c - k, a((ka-1)c - k) + 1):
/// g = (series exp c, len a)(series exp ac-1, len ka-1).
/// When ka-1 = 1 the support contains 1 and the instance routes to case 0.
pub fn family_case1(a: u64, k: u64, c: u64) -> Result<FamilyInstance, FactorError> {
    if a < 2 || k < 1 || c < 1 {
        return Err(FactorError::InvalidInput(format!(
            "need a >= 2, k >= 1, c >= 1; got a={a} k={k} c={c}"
        )));
    }
    let b = k * a - 1;
    let x1 = (b * c)
        .checked_sub(k)
        .filter(|&v| v >= 1)
        .ok_or_else(|| FactorError::InvalidInput(format!("x1 = {b}*{c} - {k} is not positive")))?;
    let x2 = a * x1 + 1;
    if b == 1 {
        let mut inst = family_case0(a, x2, x1)?;
        inst.params = vec![("a", a), ("k", k), ("c", c)];
        return Ok(inst);
    }
    let q = SupportedQ::from_parts(vec![a, b], vec![x1, x2])?;
    Ok(FamilyInstance {
        family: FamilyId::Case1,
        params: vec![("a", a), ("k", k), ("c", c)],
        q,
        expected: GeomFactorization::from_pairs(&[(c, a), (a * c - 1, b)]),
    })
}

/// Support (a, a-1) with x = ((a-1)c - 1, ac + 1):
/// g = (1 + z^{c+1}) * (series exp c, len 2*floor((a-1)/2)+1)
///                   * (series exp 2c, len ceil((a-1)/2)).
pub fn family_case2(a: u64, c: u64) -> Result<FamilyInstance, FactorError> {
    if a < 2 || c < 1 {
        return Err(FactorError::InvalidInput(format!(
            "need a >= 2, c >= 1; got a={a} c={c}"
        )));
    }
    let x1 = ((a - 1) * c)
        .checked_sub(1)
        .filter(|&v| v >= 1)
        .ok_or_else(|| {
            FactorError::InvalidInput(format!("x1 = ({a}-1)*{c} - 1 is not positive"))
        })?;
    let x2 = a * c + 1;
    if a == 2 {
        let mut inst = family_case0(2, x2, x1)?;
        inst.params = vec![("a", a), ("c", c)];
        return Ok(inst);
    }
    let q = SupportedQ::from_parts(vec![a, a - 1], vec![x1, x2])?;
    Ok(FamilyInstance {
        family: FamilyId::Case2,
        params: vec![("a", a), ("c", c)],
        q,
        expected: GeomFactorization::from_pairs(&[
            (c + 1, 2),
            (c, 2 * ((a - 1) / 2) + 1),
            (2 * c, a / 2),
        ]),
    })
}

/// Support (a, a^2-1) with x = ((a^2-1)c - a, a(ac-1) + 1):
/// g = (series exp c, len a+1)(series exp ac-1, len a)(series exp ac+c-1, len a-1).
pub fn family_case3(a: u64, c: u64) -> Result<FamilyInstance, FactorError> {
    if a < 2 || c < 1 {
        return Err(FactorError::InvalidInput(format!(
            "need a >= 2, c >= 1; got a={a} c={c}"
        )));
    }
    let b = a * a - 1;
    let x1 = (b * c)
        .checked_sub(a)
        .filter(|&v| v >= 1)
        .ok_or_else(|| FactorError::InvalidInput(format!("x1 = {b}*{c} - {a} is not positive")))?;
    let x2 = a * (a * c - 1) + 1;
    let q = SupportedQ::from_parts(vec![a, b], vec![x1, x2])?;
    Ok(FamilyInstance {
        family: FamilyId::Case3,
        params: vec![("a", a), ("c", c)],
        q,
        expected: GeomFactorization::from_pairs(&[
            (c, a + 1),
            (a * c - 1, a),
            (a * c + c - 1, a - 1),
        ]),
    })
}

/// The three Kronecker cases on support (6, 10, 15) (s = (5, 3, 2)).
///
/// Case 1 is the single instance x = (4, 8, 3); cases 2 and 3 are the
/// one-parameter families x = (5c-1, 3c-1, 8c-1) and x = (5c-1, 9c-1, 14c-1).
/// The factor lengths are pinned by g(1) = 30 = 2 * 3 * 5.
pub fn family_532(case: u8, c: u64) -> Result<FamilyInstance, FactorError> {
    if !(1..=3).contains(&case) || c < 1 {
        return Err(FactorError::InvalidInput(format!(
            "need case in 1..=3 and c >= 1; got case={case} c={c}"
        )));
    }
    let (family, x, pairs): (FamilyId, Vec<u64>, Vec<(u64, u64)>) = match case {
        1 => (
            FamilyId::S532C1,
            vec![4, 8, 3],
            vec![(1, 5), (2, 3), (3, 2)],
        ),
        2 => (
            FamilyId::S532C2,
            vec![5 * c - 1, 3 * c - 1, 8 * c - 1],
            vec![(c, 5), (c, 3), (4 * c - 1, 2)],
        ),
        _ => (
            FamilyId::S532C3,
            vec![5 * c - 1, 9 * c - 1, 14 * c - 1],
            vec![(c, 5), (3 * c, 3), (7 * c - 1, 2)],
        ),
    };
    let q = SupportedQ::from_parts(vec![6, 10, 15], x)?;
    Ok(FamilyInstance {
        family,
        params: vec![("case", case as u64), ("c", c)],
        q,
        expected: GeomFactorization::from_pairs(&pairs),
    })
}

/// The conjectural Fibonacci family: r = x = (a_{n+1}, a_n) over the
/// sequence a_0 = 1, a_1 = 2, a_n = 3a_{n-1} - a_{n-2}, with
/// g = (series exp 1, len a_n)(series exp 1, len a_{n+1}).
pub fn fibonacci_instance(n: u32) -> Result<FamilyInstance, FactorError> {
    let a_n = crate::explorer::fib_sequence(n);
    let a_np1 = crate::explorer::fib_sequence(n + 1);
    let multiset: Vec<u64> = std::iter::repeat_n(a_np1, a_np1 as usize)
        .chain(std::iter::repeat_n(a_n, a_n as usize))
        .collect();
    let q = SupportedQ::support(&multiset)?;
    Ok(FamilyInstance {
        family: FamilyId::Fib,
        params: vec![("n", n as u64), ("a_n", a_n), ("a_n+1", a_np1)],
        q,
        expected: GeomFactorization::from_pairs(&[(1, a_n), (1, a_np1)]),
    })
}

/// Classification predicate for r = (2, 2k-1), k >= 2, with
/// x = ((2k-1)c1 - k, 2c2 + 1), c1 >= 1, c2 >= 0: true exactly when g
/// admits a geometric factorization.
///
/// The factorable instances are the single exception (k, c1, c2) = (5, 1, 1)
/// (that is, r = (2,9), x = (4,3)) together with the case-1/2/3 family
/// parameterizations, which on this support reduce to:
/// k = 2 with c1 = 2(c2+1), or c2 = c1 - 2 (c1 >= 3), or c2 + 1 = 2c1;
/// and for every k, c2 = (2k-1)c1 - k.
pub fn classify_2_2km1(k: u64, c1: u64, c2: u64) -> Result<bool, FactorError> {
    if k < 2 || c1 < 1 {
        return Err(FactorError::InvalidInput(format!(
            "need k >= 2 and c1 >= 1; got k={k} c1={c1}"
        )));
    }
    if k == 5 && c1 == 1 && c2 == 1 {
        return Ok(true);
    }
    if k == 2 {
        if c1 == 2 * (c2 + 1) {
            return Ok(true);
        }
        if c1 >= 3 && c2 + 2 == c1 {
            return Ok(true);
        }
        if c2 + 1 == 2 * c1 {
            return Ok(true);
        }
    }
    Ok(c2 + k == (2 * k - 1) * c1)
}

/// Family-membership test for a reflexive two-support q: does (r, x) solve
/// the defining parameter equations of one of the closed-form families?
/// Matches in order case0, case1, case2, case3.
pub fn match_two_support_family(q: &SupportedQ) -> Option<FamilyId> {
    if q.support_size() != 2 {
        return None;
    }
    let (r1, r2) = (q.r()[0], q.r()[1]);
    let (x1, x2) = (q.x()[0], q.x()[1]);
    if r1 == 1 {
        return Some(FamilyId::Case0);
    }
    // case1 in both orientations of {a, ka-1}
    for (a, b, xa, xb) in [(r1, r2, x1, x2), (r2, r1, x2, x1)] {
        if (b + 1) % a == 0 && (xa + (b + 1) / a) % b == 0 {
            let k = (b + 1) / a;
            let c = (xa + k) / b;
            if c >= 1 && xb == a * xa + 1 {
                return Some(FamilyId::Case1);
            }
        }
    }
    // case2 on consecutive support {a-1, a}
    if r2 == r1 + 1 {
        let a = r2;
        if (x2 + 1) % (a - 1) == 0 {
            let c = (x2 + 1) / (a - 1);
            if c >= 1 && x1 == a * c + 1 {
                return Some(FamilyId::Case2);
            }
        }
    }
    // case3 on {a, a^2 - 1}
    if r2 == r1 * r1 - 1 {
        let a = r1;
        if (x1 + a) % (a * a - 1) == 0 {
            let c = (x1 + a) / (a * a - 1);
            if c >= 1 && x2 == a * (a * c - 1) + 1 {
                return Some(FamilyId::Case3);
            }
        }
    }
    None
}

/// Family-membership test for three-support q: the (6, 10, 15) cases.
pub fn match_three_support_family(q: &SupportedQ) -> Option<FamilyId> {
    if q.r() != [6, 10, 15] {
        return None;
    }
    let (x1, x2, x3) = (q.x()[0], q.x()[1], q.x()[2]);
    if (x1, x2, x3) == (4, 8, 3) {
        return Some(FamilyId::S532C1);
    }
    if (x1 + 1) % 5 == 0 {
        let c = (x1 + 1) / 5;
        if c >= 1 {
            if x2 == 3 * c - 1 && x3 == 8 * c - 1 {
                return Some(FamilyId::S532C2);
            }
            if x2 == 9 * c - 1 && x3 == 14 * c - 1 {
                return Some(FamilyId::S532C3);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::geometric_series;

    fn poly(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs.to_vec())
    }

    fn factor(f: &IntPoly) -> Option<GeomFactorization> {
        find_geometric_factorization(f).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let f = factor(&poly(&[1, 2, 2, 1])).expect("factors");
        assert_eq!(
            f.factors(),
            &[GeomSeries::new(1, 2), GeomSeries::new(1, 3)]
        );
        assert_eq!(f.expand().unwrap(), poly(&[1, 2, 2, 1]));

        // ambiguous input: ascending length finds (1+z)(1+z^2) first
        let f = factor(&poly(&[1, 1, 1, 1])).expect("factors");
        assert_eq!(
            f.factors(),
            &[GeomSeries::new(1, 2), GeomSeries::new(2, 2)]
        );

        // g for (2,5)^(7,5): Kronecker yet not a product of geometric series
        assert_eq!(factor(&poly(&[1, 0, 1, 2, 1, 1, 2, 1, 0, 1])), None);
    }

    #[test]
    fn factorization_input_validation() {
        assert!(matches!(
            find_geometric_factorization(&poly(&[2, 1])),
            Err(FactorError::InvalidInput(_))
        ));
        assert!(matches!(
            find_geometric_factorization(&poly(&[1, -1, 1])),
            Err(FactorError::InvalidInput(_))
        ));
        assert_eq!(factor(&IntPoly::one()), Some(GeomFactorization::new(vec![])));
    }

    #[test]
    fn factorization_soundness_on_products() {
        let cases: &[&[(usize, u32)]] = &[
            &[(1, 2), (1, 3), (2, 2)],
            &[(3, 3), (1, 4)],
            &[(2, 5)],
            &[(1, 2), (1, 2), (1, 2)],
            &[(4, 2), (2, 3), (1, 2)],
        ];
        for pairs in cases {
            let mut f = IntPoly::one();
            for &(e, g) in *pairs {
                f = f.mul(&geometric_series(e, g)).unwrap();
            }
            let found = factor(&f).expect("product of series must factor");
            assert_eq!(found.expand().unwrap(), f, "{pairs:?}");
            assert_eq!(found.product_of_lengths() as i64, f.eval(1).unwrap());
        }
    }

    #[test]
    fn hstar_of_25_instance_factors_g_does_not() {
        let q = SupportedQ::from_parts(vec![2, 5], vec![7, 5]).unwrap();
        let h = q.hstar();
        let fh = factor(&h).expect("h* factors");
        assert_eq!(fh.expand().unwrap(), h);
        assert_eq!(factor(&q.g_poly().unwrap()), None);
    }

    #[test]
    fn render_groups_repeats() {
        let f = GeomFactorization::from_pairs(&[(1, 2), (1, 3)]);
        assert_eq!(f.render(), "(1+z)(1+z+z^2)");
        let f = GeomFactorization::from_pairs(&[(3, 2), (3, 2), (2, 2)]);
        assert_eq!(f.render(), "(1+z^2)(1+z^3)^2");
        assert_eq!(GeomFactorization::new(vec![]).render(), "1");
    }

    #[test]
    fn factorization_serde() {
        let f = GeomFactorization::from_pairs(&[(1, 3), (2, 2)]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"[{"e":1,"gamma":3},{"e":2,"gamma":2}]"#);
        let back: GeomFactorization = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn case0_examples() {
        let inst = family_case0(3, 8, 1).unwrap();
        assert_eq!(inst.expected, GeomFactorization::from_pairs(&[(3, 3)]));
        inst.verify().unwrap();

        let inst = family_case0(2, 1, 1).unwrap();
        assert_eq!(inst.expected, GeomFactorization::from_pairs(&[(1, 2)]));
        inst.verify().unwrap();

        for a in 2..=8 {
            let inst = family_case0(a, a - 1, 1).unwrap();
            assert_eq!(inst.expected, GeomFactorization::from_pairs(&[(1, a)]));
            inst.verify().unwrap();
        }
    }

    #[test]
    fn case1_examples() {
        let inst = family_case1(3, 1, 1).unwrap();
        assert_eq!(inst.q.r(), &[2, 3]);
        assert_eq!(inst.q.x(), &[4, 1]);
        inst.verify().unwrap();

        let inst = family_case1(2, 2, 1).unwrap();
        assert_eq!(inst.q.r(), &[2, 3]);
        assert_eq!(inst.q.x(), &[1, 3]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(1, 2), (1, 3)])
        );
        inst.verify().unwrap();

        // a=2, k=1 puts 1 in the support and routes to case 0
        let inst = family_case1(2, 1, 2).unwrap();
        assert_eq!(inst.family, FamilyId::Case0);
        assert_eq!(inst.q.r(), &[1, 2]);
        inst.verify().unwrap();
        assert!(family_case1(2, 1, 1).is_err());
    }

    #[test]
    fn case2_examples() {
        let inst = family_case2(3, 2).unwrap();
        assert_eq!(inst.q.r(), &[2, 3]);
        assert_eq!(inst.q.x(), &[7, 3]);
        assert_eq!(
            inst.expected.expand().unwrap(),
            poly(&[1, 0, 1, 1, 1, 1, 0, 1])
        );
        inst.verify().unwrap();

        let inst = family_case2(2, 2).unwrap();
        assert_eq!(inst.family, FamilyId::Case0);
        inst.verify().unwrap();

        let inst = family_case2(4, 1).unwrap();
        assert_eq!(inst.q.r(), &[3, 4]);
        assert_eq!(inst.q.x(), &[5, 2]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(2, 2), (1, 3), (2, 2)])
        );
        inst.verify().unwrap();
    }

    #[test]
    fn case3_examples() {
        let inst = family_case3(2, 1).unwrap();
        assert_eq!(inst.q.r(), &[2, 3]);
        assert_eq!(inst.q.x(), &[1, 3]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(1, 3), (1, 2)])
        );
        inst.verify().unwrap();

        let inst = family_case3(2, 2).unwrap();
        assert_eq!(inst.q.x(), &[4, 7]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(2, 3), (3, 2)])
        );
        inst.verify().unwrap();

        let inst = family_case3(3, 1).unwrap();
        assert_eq!(inst.q.r(), &[3, 8]);
        assert_eq!(inst.q.x(), &[5, 7]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(1, 4), (2, 3), (3, 2)])
        );
        inst.verify().unwrap();
    }

    #[test]
    fn family_532_examples() {
        let inst = family_532(1, 1).unwrap();
        assert_eq!(inst.q.x(), &[4, 8, 3]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(1, 5), (2, 3), (3, 2)])
        );
        inst.verify().unwrap();

        let inst = family_532(2, 1).unwrap();
        assert_eq!(inst.q.x(), &[4, 2, 7]);
        inst.verify().unwrap();

        let inst = family_532(3, 1).unwrap();
        assert_eq!(inst.q.x(), &[4, 8, 13]);
        inst.verify().unwrap();

        for c in 1..=4 {
            family_532(2, c).unwrap().verify().unwrap();
            family_532(3, c).unwrap().verify().unwrap();
        }
    }

    #[test]
    fn fibonacci_examples() {
        let inst = fibonacci_instance(1).unwrap();
        assert_eq!(inst.q.r(), &[2, 5]);
        assert_eq!(inst.q.x(), &[2, 5]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(1, 2), (1, 5)])
        );
        inst.verify().unwrap();

        let inst = fibonacci_instance(2).unwrap();
        assert_eq!(inst.q.r(), &[5, 13]);
        assert_eq!(
            inst.expected,
            GeomFactorization::from_pairs(&[(1, 5), (1, 13)])
        );
        inst.verify().unwrap();

        // n = 0 degenerates onto support containing 1
        let inst = fibonacci_instance(0).unwrap();
        assert_eq!(inst.q.r(), &[1, 2]);
        inst.verify().unwrap();
    }

    #[test]
    fn classify_examples() {
        assert!(classify_2_2km1(5, 1, 1).unwrap());
        assert!(!classify_2_2km1(3, 2, 2).unwrap());
        assert!(classify_2_2km1(2, 1, 1).unwrap());
        assert!(matches!(
            classify_2_2km1(1, 1, 0),
            Err(FactorError::InvalidInput(_))
        ));
    }

    #[test]
    fn classify_agrees_with_search_small() {
        for k in 2..=6u64 {
            for c1 in 1..=6u64 {
                for c2 in 0..=6u64 {
                    let g = crate::simplex::g_two_support_fast(2, k, c1, c2).unwrap();
                    let found = factor(&g).is_some();
                    let predicted = classify_2_2km1(k, c1, c2).unwrap();
                    assert_eq!(predicted, found, "k={k} c1={c1} c2={c2} g={}", g.render());
                }
            }
        }
    }

    #[test]
    fn exactly_one_even_length_on_2_2km1() {
        for k in 2..=6u64 {
            for c1 in 1..=5u64 {
                for c2 in 0..=5u64 {
                    let g = crate::simplex::g_two_support_fast(2, k, c1, c2).unwrap();
                    if let Some(f) = factor(&g) {
                        assert_eq!(f.product_of_lengths(), 2 * (2 * k - 1));
                        let evens = f.factors().iter().filter(|s| s.length % 2 == 0).count();
                        assert_eq!(evens, 1, "k={k} c1={c1} c2={c2}");
                    }
                }
            }
        }
    }

    #[test]
    fn family_membership_examples() {
        let q = SupportedQ::from_parts(vec![2, 9], vec![4, 3]).unwrap();
        assert_eq!(match_two_support_family(&q), None);

        let q = SupportedQ::from_parts(vec![2, 5], vec![7, 5]).unwrap();
        assert_eq!(match_two_support_family(&q), None);

        let inst = family_case1(3, 2, 2).unwrap();
        assert_eq!(match_two_support_family(&inst.q), Some(FamilyId::Case1));

        let inst = family_case2(5, 2).unwrap();
        assert_eq!(match_two_support_family(&inst.q), Some(FamilyId::Case2));

        let inst = family_case3(3, 2).unwrap();
        assert_eq!(match_two_support_family(&inst.q), Some(FamilyId::Case3));

        let q = SupportedQ::from_parts(vec![1, 7], vec![6, 3]).unwrap();
        assert_eq!(match_two_support_family(&q), Some(FamilyId::Case0));

        for c in 1..=3 {
            assert_eq!(
                match_three_support_family(&family_532(2, c).unwrap().q),
                Some(FamilyId::S532C2)
            );
            assert_eq!(
                match_three_support_family(&family_532(3, c).unwrap().q),
                Some(FamilyId::S532C3)
            );
        }
        assert_eq!(
            match_three_support_family(&family_532(1, 1).unwrap().q),
            Some(FamilyId::S532C1)
        );
        let q = SupportedQ::from_parts(vec![12, 33, 44], vec![21, 11, 22]).unwrap();
        assert_eq!(match_three_support_family(&q), None);
    }
}
