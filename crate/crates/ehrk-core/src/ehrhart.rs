//! Ehrhart polynomial recovery from h* and an independent brute-force
//! lattice-point counter for the simplices Delta_(1,q).
//!
//! `L(t) = sum_j h*_j * binom(t + n - j, n)` expanded in t over exact
//! rationals. The counting oracle derives the n+1 facet inequalities of
//! Delta_(1,q) from its vertices by rational linear solves and scans the
//! integer box `[-t*max(q), t]^n`; the two routes must agree on every
//! lattice simplex at oracle scale.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::polyring::IntPoly;
use crate::simplex::SupportedQ;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EhrhartError {
    #[error("h* degree {deg} exceeds the dimension {dim}")]
    DegreeExceedsDimension { deg: usize, dim: usize },
    #[error("oracle scale exceeded: need dimension <= {max_dim} and t <= {max_t}")]
    ScaleExceeded { max_dim: u64, max_t: u32 },
}

pub const ORACLE_MAX_DIM: u64 = 6;
pub const ORACLE_MAX_T: u32 = 5;

/// Polynomial in t with exact rational coefficients, `coeffs[i]` the
/// coefficient of `t^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(t));
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &t + c;
        }
        acc
    }

    pub fn all_coeffs_positive(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_positive())
    }

    /// Descending powers with coefficients in lowest terms, e.g.
    /// `3/2 t^2 + 3/2 t + 1`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() || i == 0 {
                if mag.is_integer() {
                    out.push_str(&mag.numer().to_string());
                } else {
                    out.push_str(&format!("{}/{}", mag.numer(), mag.denom()));
                }
                if i > 0 {
                    out.push(' ');
                }
            }
            match i {
                0 => {}
                1 => out.push('t'),
                _ => out.push_str(&format!("t^{i}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// JSON form `{"num": [...], "den": [...]}`, ascending powers, values
    /// as decimal strings (numerators or denominators can exceed 64 bits).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "num": self.coeffs.iter().map(|c| c.numer().to_string()).collect::<Vec<_>>(),
            "den": self.coeffs.iter().map(|c| c.denom().to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Expand `L(t) = sum_j h_j * binom(t + n - j, n)` with exact arithmetic.
/// Requires `deg h <= n`.
///
/// The accumulation runs over big integers (the common denominator is n!)
/// and divides once at the end; binom(t + n - j, n) is expanded as the
/// falling factorial `(t + n - j)(t + n - j - 1) ... / n!`.
pub fn ehrhart_from_hstar(h: &IntPoly, n: usize) -> Result<RationalPoly, EhrhartError> {
    if let Some(deg) = h.degree() {
        if deg > n {
            return Err(EhrhartError::DegreeExceedsDimension { deg, dim: n });
        }
    }
    let mut acc = vec![BigInt::zero(); n + 1];
    for (j, &hj) in h.coeffs().iter().enumerate() {
        if hj == 0 {
            continue;
        }
        // term = prod_{m=0}^{n-1} (t + n - j - m), expanded in t
        let mut term = vec![BigInt::zero(); n + 1];
        term[0] = BigInt::one();
        let mut deg = 0usize;
        for m in 0..n {
            let shift = BigInt::from(n as i64 - j as i64 - m as i64);
            deg += 1;
            for i in (1..=deg).rev() {
                let lower = term[i - 1].clone();
                term[i] = &term[i] * &shift + lower;
            }
            term[0] = &term[0] * &shift;
        }
        let weight = BigInt::from(hj);
        for (slot, t) in acc.iter_mut().zip(&term) {
            *slot += t * &weight;
        }
    }
    let factorial = (1..=n).fold(BigInt::one(), |f, m| f * m);
    let coeffs = acc
        .into_iter()
        .map(|c| BigRational::new(c, factorial.clone()))
        .collect();
    Ok(RationalPoly { coeffs })
}

/// All coefficients of the Ehrhart polynomial of Delta_(1,q) strictly
/// positive? Works for non-reflexive q as well.
pub fn is_ehrhart_positive(q: &SupportedQ) -> bool {
    let l = ehrhart_from_hstar(&q.hstar(), q.dimension() as usize)
        .expect("h* degree is at most the dimension");
    l.all_coeffs_positive()
}

/// A facet inequality `a . y <= b` (with `b > 0`); the dilate by t uses
/// `a . y <= t*b`. Entries are primitive integers.
struct Facet {
    normal: Vec<i64>,
    rhs: i64,
}

/// Solve `a . v = 1` for each choice of n facet vertices by Gaussian
/// elimination over exact rationals, then clear denominators. Valid because
/// the origin is interior to every Delta_(1,q), so no facet hyperplane
/// passes through 0.
fn facet_inequalities(qvec: &[i64]) -> Vec<Facet> {
    let n = qvec.len();
    let mut vertices: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    vertices.push(qvec.iter().map(|&v| -v).collect());

    let mut facets = Vec::with_capacity(n + 1);
    for omit in 0..=n {
        let rows: Vec<&Vec<i64>> = vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != omit)
            .map(|(_, v)| v)
            .collect();
        let solution = solve_unit_rhs(&rows);
        // clear denominators to a primitive integer normal
        let mut denom_lcm = BigInt::one();
        for c in &solution {
            let d = c.denom();
            let g = gcd_bigint(&denom_lcm, d);
            denom_lcm = &denom_lcm / &g * d;
        }
        let mut normal: Vec<BigInt> = solution.iter().map(|c| c.numer() * (&denom_lcm / c.denom())).collect();
        let mut g = denom_lcm.clone();
        for v in &normal {
            g = gcd_bigint(&g, v);
        }
        let rhs = &denom_lcm / &g;
        for v in &mut normal {
            *v = &*v / &g;
        }
        facets.push(Facet {
            normal: normal
                .iter()
                .map(|v| i64::try_from(v).expect("facet normals stay well within i64 at oracle scale"))
                .collect(),
            rhs: i64::try_from(&rhs).expect("facet rhs fits i64"),
        });
    }
    facets
}

fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Solve `M a = 1` where the rows of M are the given lattice points.
fn solve_unit_rhs(rows: &[&Vec<i64>]) -> Vec<BigRational> {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .chain(std::iter::once(BigRational::one()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("facet vertex matrix is nonsingular");
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for entry in m[col].iter_mut() {
            *entry = &*entry / &p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (entry, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *entry = &*entry - p * &factor;
                }
            }
        }
    }
    (0..n).map(|r| m[r][n].clone()).collect()
}

fn count_points(q: &SupportedQ, t: u32, strict: bool) -> Result<u64, EhrhartError> {
    let n = q.dimension();
    if n > ORACLE_MAX_DIM || t > ORACLE_MAX_T {
        return Err(EhrhartError::ScaleExceeded {
            max_dim: ORACLE_MAX_DIM,
            max_t: ORACLE_MAX_T,
        });
    }
    if t == 0 {
        // only the origin (which is interior)
        return Ok(1);
    }
    let qvec: Vec<i64> = q.to_multiset().iter().map(|&v| v as i64).collect();
    let facets = facet_inequalities(&qvec);
    let n = n as usize;
    let lo = -(t as i64) * qvec.iter().max().copied().unwrap_or(1);
    let hi = t as i64;

    // scan the box over the first n-1 coordinates; the last coordinate is
    // an interval cut out by the facet inequalities (each linear in y_n)
    let mut point = vec![0i64; n];
    let mut count = 0u64;
    scan_box(&facets, t as i64, lo, hi, &mut point, 0, strict, &mut count);
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn scan_box(
    facets: &[Facet],
    t: i64,
    lo: i64,
    hi: i64,
    point: &mut Vec<i64>,
    depth: usize,
    strict: bool,
    count: &mut u64,
) {
    let n = point.len();
    if depth + 1 == n {
        let mut min = lo;
        let mut max = hi;
        for f in facets {
            // partial . y + a_n * y_n  (<= | <) t * b
            let partial: i64 = f
                .normal
                .iter()
                .zip(point.iter())
                .take(n - 1)
                .map(|(&a, &y)| a * y)
                .sum();
            let mut bound = t * f.rhs - partial;
            if strict {
                bound -= 1;
            }
            let a = f.normal[n - 1];
            if a == 0 {
                if bound < 0 {
                    return;
                }
            } else if a > 0 {
                max = max.min(bound.div_euclid(a));
            } else {
                min = min.max((-bound).div_euclid(-a) + i64::from((-bound).rem_euclid(-a) != 0));
            }
        }
        if max >= min {
            *count += (max - min + 1) as u64;
        }
        return;
    }
    for y in lo..=hi {
        point[depth] = y;
        scan_box(facets, t, lo, hi, point, depth + 1, strict, count);
    }
}

/// Exact number of lattice points in the dilate `t * Delta_(1,q)`, by
/// half-space enumeration over the bounding box. Independent of the h*
/// route; must equal `ehrhart_from_hstar(hstar(q), n)` evaluated at t.
pub fn count_lattice_points(q: &SupportedQ, t: u32) -> Result<u64, EhrhartError> {
    count_points(q, t, false)
}

/// Lattice points strictly interior to the dilate. For reflexive q this
/// equals `L(t-1)` (the interior of tP is a lattice translate family of
/// (t-1)P).
pub fn count_interior_lattice_points(q: &SupportedQ, t: u32) -> Result<u64, EhrhartError> {
    if t == 0 {
        return Ok(0);
    }
    count_points(q, t, true)
}
