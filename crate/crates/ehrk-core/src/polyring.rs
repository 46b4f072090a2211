//! Exact univariate polynomial arithmetic over the integers.
//!
//! Coefficients are 64-bit integers with checked arithmetic: an operation
//! that would overflow returns [`PolyError::Overflow`] instead of wrapping.
//! Degrees stay in the thousands and coefficients are bounded by lattice
//! point counts, so this is plenty of headroom while staying fast enough
//! for the exhaustive searches.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient overflow in exact integer arithmetic")]
    Overflow,
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Dense univariate polynomial with exact `i64` coefficients.
///
/// `coeffs[i]` is the coefficient of `z^i`. The zero polynomial is the
/// empty vector; otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    /// Build from coefficients in ascending order of exponent, trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn monomial(c: i64, exp: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![0; exp + 1];
        coeffs[exp] = c;
        IntPoly { coeffs }
    }

    /// `z^d - 1`.
    pub fn z_pow_minus_one(d: usize) -> Self {
        assert!(d >= 1);
        let mut coeffs = vec![0; d + 1];
        coeffs[0] = -1;
        coeffs[d] = 1;
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        let mut coeffs = vec![0i64; self.coeffs.len().max(other.coeffs.len())];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            *slot = self
                .coeff(i)
                .checked_add(other.coeff(i))
                .ok_or(PolyError::Overflow)?;
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// Exact convolution product.
    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPoly::zero());
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let prod = a.checked_mul(b).ok_or(PolyError::Overflow)?;
                coeffs[i + j] = coeffs[i + j].checked_add(prod).ok_or(PolyError::Overflow)?;
            }
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    /// Exact quotient `self / divisor` over the integers.
    ///
    /// Returns [`PolyError::NotDivisible`] when no integer-coefficient
    /// quotient exists (nonzero remainder or a fractional division step).
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(IntPoly::zero());
        }
        let dn = self.degree().unwrap();
        let dm = divisor.degree().unwrap();
        if dn < dm {
            return Err(PolyError::NotDivisible);
        }
        let lead = *divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; dn - dm + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dm];
            if top == 0 {
                continue;
            }
            if top % lead != 0 {
                return Err(PolyError::NotDivisible);
            }
            let q = top / lead;
            quot[k] = q;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let sub = q.checked_mul(b).ok_or(PolyError::Overflow)?;
                rem[k + j] = rem[k + j].checked_sub(sub).ok_or(PolyError::Overflow)?;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Err(PolyError::NotDivisible);
        }
        Ok(IntPoly::from_coeffs(quot))
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, t: i64) -> Result<i64, PolyError> {
        let mut acc: i64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(t)
                .and_then(|v| v.checked_add(c))
                .ok_or(PolyError::Overflow)?;
        }
        Ok(acc)
    }

    /// Sum of coefficients; equals the number of lattice points for h*-type
    /// polynomials.
    pub fn eval_at_one(&self) -> Result<i64, PolyError> {
        self.eval(1)
    }

    /// Human-readable form: ascending exponents, zero terms omitted,
    /// unit coefficients omitted, e.g. `1 + 2z + 2z^2 + z^3`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else if c < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.unsigned_abs();
            if mag != 1 || i == 0 {
                out.push_str(&mag.to_string());
            }
            match i {
                0 => {}
                1 => out.push('z'),
                _ => {
                    out.push_str("z^");
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }

    /// Compact form without spaces, used inside factorizations:
    /// `1+z+z^2`.
    pub fn render_compact(&self) -> String {
        self.render().replace(' ', "")
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.render())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A geometric series in powers of `z`: `1 + z^e + ... + z^{(gamma-1)e}`
/// with exponent `e >= 1` and length `gamma >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeomSeries {
    #[serde(rename = "e")]
    pub exponent: usize,
    #[serde(rename = "gamma")]
    pub length: u32,
}

impl GeomSeries {
    pub fn new(exponent: usize, length: u32) -> Self {
        assert!(exponent >= 1, "geometric series exponent must be >= 1");
        assert!(length >= 2, "geometric series length must be >= 2");
        GeomSeries { exponent, length }
    }

    pub fn expand(&self) -> IntPoly {
        geometric_series(self.exponent, self.length)
    }

    pub fn degree(&self) -> usize {
        (self.length as usize - 1) * self.exponent
    }
}

/// The polynomial `1 + z^e + z^{2e} + ... + z^{(gamma-1)e}`.
///
/// Its value at `z = 1` is `gamma` and its degree is `(gamma-1)e`.
pub fn geometric_series(e: usize, gamma: u32) -> IntPoly {
    assert!(e >= 1, "geometric series exponent must be >= 1");
    assert!(gamma >= 2, "geometric series length must be >= 2");
    let mut coeffs = vec![0i64; (gamma as usize - 1) * e + 1];
    for i in 0..gamma as usize {
        coeffs[i * e] = 1;
    }
    IntPoly { coeffs }
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1u32;
    while i * i <= n {
        if n.is_multiple_of(i) {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The d-th cyclotomic polynomial, computed by dividing `z^d - 1` by the
/// product of all cyclotomic polynomials of proper divisors of `d`.
///
/// Results are memoized process-wide; the search harnesses call this
/// millions of times.
pub fn cyclotomic(d: u32) -> Arc<IntPoly> {
    assert!(d >= 1, "cyclotomic index must be >= 1");
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&d) {
        return Arc::clone(p);
    }
    let poly = if d == 1 {
        IntPoly::from_coeffs(vec![-1, 1])
    } else {
        let mut acc = IntPoly::z_pow_minus_one(d as usize);
        for e in divisors(d) {
            if e == d {
                continue;
            }
            acc = acc
                .exact_div(&cyclotomic(e))
                .expect("z^d - 1 is divisible by every cyclotomic of a divisor");
        }
        acc
    };
    let arc = Arc::new(poly);
    cyclotomic_cache()
        .write()
        .unwrap()
        .entry(d)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Euler totients `phi(0..=limit)` by sieve. `phi[0]` is unused (set to 0).
pub fn totient_sieve(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    let mut phi: Vec<u32> = (0..=limit).collect();
    for p in 2..=n {
        if phi[p] == p as u32 {
            let mut m = p;
            while m <= n {
                phi[m] -= phi[m] / p as u32;
                m += p;
            }
        }
    }
    if !phi.is_empty() {
        phi[0] = 0;
    }
    phi
}

/// Indices `d` with `phi(d) <= max_phi`, ascending. Complete: every such d
/// satisfies `d <= 2*max_phi^2 + 6` because `phi(d) >= sqrt(d/2)`.
fn cyclotomic_candidates(max_phi: usize) -> Vec<u32> {
    struct SieveCache {
        limit: u32,
        phi: Vec<u32>,
    }
    static SIEVE: OnceLock<RwLock<SieveCache>> = OnceLock::new();
    let bound = (2 * max_phi * max_phi + 6) as u32;
    let lock = SIEVE.get_or_init(|| {
        RwLock::new(SieveCache {
            limit: 0,
            phi: vec![0],
        })
    });
    {
        let cache = lock.read().unwrap();
        if cache.limit >= bound {
            return collect_candidates(&cache.phi, bound, max_phi as u32);
        }
    }
    let mut cache = lock.write().unwrap();
    if cache.limit < bound {
        cache.phi = totient_sieve(bound);
        cache.limit = bound;
    }
    collect_candidates(&cache.phi, bound, max_phi as u32)
}

fn collect_candidates(phi: &[u32], bound: u32, max_phi: u32) -> Vec<u32> {
    (1..=bound).filter(|&d| phi[d as usize] <= max_phi).collect()
}

/// Multiset of cyclotomic indices with multiplicities, sorted by index.
/// Multiplying the corresponding cyclotomics reconstructs the factored
/// polynomial exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicMultiset {
    pub entries: Vec<(u32, u32)>,
}

impl CyclotomicMultiset {
    pub fn expand(&self) -> Result<IntPoly, PolyError> {
        let mut acc = IntPoly::one();
        for &(d, mult) in &self.entries {
            let phi_d = cyclotomic(d);
            for _ in 0..mult {
                acc = acc.mul(&phi_d)?;
            }
        }
        Ok(acc)
    }

    /// e.g. `Phi2*Phi3^2`.
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "1".to_string();
        }
        self.entries
            .iter()
            .map(|&(d, m)| {
                if m == 1 {
                    format!("Phi{d}")
                } else {
                    format!("Phi{d}^{m}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Decide whether `f` is a Kronecker polynomial: monic over the integers
/// with a complete factorization into cyclotomic polynomials (equivalently,
/// all roots on the unit circle).
///
/// Returns the cyclotomic multiset on success, `None` otherwise. The scan
/// trial-divides by `Phi_d` for every `d` with `phi(d) <= deg f`, ascending,
/// extracting full multiplicity at each step, until the quotient is 1.
pub fn is_kronecker(f: &IntPoly) -> Result<Option<CyclotomicMultiset>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Ok(None);
    }
    let mut g = f.clone();
    let mut entries: Vec<(u32, u32)> = Vec::new();
    let deg = g.degree().unwrap();
    if deg == 0 {
        return Ok(Some(CyclotomicMultiset { entries }));
    }
    for d in cyclotomic_candidates(deg) {
        let remaining = match g.degree() {
            Some(0) | None => break,
            Some(m) => m,
        };
        let phi_d = cyclotomic(d);
        if phi_d.degree().unwrap() > remaining {
            continue;
        }
        let mut mult = 0u32;
        loop {
            match g.exact_div(&phi_d) {
                Ok(q) => {
                    g = q;
                    mult += 1;
                    if g.degree() == Some(0) {
                        break;
                    }
                }
                Err(PolyError::NotDivisible) => break,
                Err(e) => return Err(e),
            }
        }
        if mult > 0 {
            entries.push((d, mult));
        }
    }
    if g.is_one() {
        Ok(Some(CyclotomicMultiset { entries }))
    } else {
        Ok(None)
    }
}
