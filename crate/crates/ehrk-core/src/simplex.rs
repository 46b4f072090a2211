//! The q-vector data model for the simplices Delta_(1,q) and the exact
//! formulas producing their h*- and g-polynomials.
//!
//! A q-vector is stored by its support `r` (distinct entries, ascending)
//! and multiplicities `x`. Reflexivity of Delta_(1,q) is equivalent to
//! `lcm(r) | 1 + sum x_i r_i`; in that case `ell = (1 + sum x_i r_i)/lcm(r)`
//! and h* factors as the length-`ell` geometric series times the
//! g-polynomial. The g-polynomial is computed two independent ways: the
//! direct weight enumeration over residues `alpha < lcm(r)`, and the
//! CRT-indexed sum attached to a desirable s-division.

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polyring::IntPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplexError {
    #[error("q-vector must be nonempty")]
    EmptyInput,
    #[error("support and multiplicity vectors must have equal length")]
    LengthMismatch,
    #[error("support entries must be distinct positive integers and multiplicities positive")]
    InvalidEntry,
    #[error("multiplicity vector is not an R-multiplicity of the support (lcm(r) does not divide 1 + sum x_i r_i)")]
    NotRMultiplicity,
    #[error("s-division is not desirable for this q-vector")]
    NotDesirable,
    #[error("residues are inconsistent: no CRT solution exists")]
    InconsistentResidues,
    #[error("simplex is not reflexive")]
    NotReflexive,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("arithmetic overflow while assembling q-vector data")]
    Overflow,
    #[error("cannot parse q-spec: {0}")]
    Parse(String),
}

/// A q-vector `(r_1^{x_1}, ..., r_d^{x_d})`: distinct support entries with
/// positive multiplicities, plus the derived quantities used everywhere.
///
/// Canonical order is ascending by support value; h* and g depend only on
/// the underlying multiset, so this is a pure normalization.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SupportedQ {
    r: Vec<u64>,
    x: Vec<u64>,
    s: Vec<u64>,
    lcm: u64,
    n: u64,
    qsum: u64,
}

impl std::fmt::Debug for SupportedQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SupportedQ(r={:?}, x={:?})", self.r, self.x)
    }
}

/// True iff `lcm(r)` divides `1 + sum x_i r_i`. Works on raw slices in any
/// order; agrees with [`SupportedQ::is_reflexive`] on the assembled q.
pub fn is_r_multiplicity(r: &[u64], x: &[u64]) -> Result<bool, SimplexError> {
    if r.len() != x.len() {
        return Err(SimplexError::LengthMismatch);
    }
    if r.is_empty() || r.contains(&0) {
        return Err(SimplexError::InvalidEntry);
    }
    let lcm = r.iter().fold(1u64, |a, &b| a.lcm(&b));
    let mut qsum: u128 = 0;
    for (&ri, &xi) in r.iter().zip(x) {
        qsum += ri as u128 * xi as u128;
    }
    Ok((1 + qsum).is_multiple_of(lcm as u128))
}

impl SupportedQ {
    /// Build from an explicit multiset of positive integers, e.g.
    /// `(2,2,2,2,2,2,2,5,5,5,5,5)` becomes support `(2,5)` with
    /// multiplicities `(7,5)`.
    pub fn support(q: &[u64]) -> Result<Self, SimplexError> {
        if q.is_empty() {
            return Err(SimplexError::EmptyInput);
        }
        let mut sorted = q.to_vec();
        sorted.sort_unstable();
        let mut r = Vec::new();
        let mut x = Vec::new();
        for &v in &sorted {
            if v == 0 {
                return Err(SimplexError::InvalidEntry);
            }
            if r.last() == Some(&v) {
                *x.last_mut().unwrap() += 1;
            } else {
                r.push(v);
                x.push(1);
            }
        }
        Self::from_parts(r, x)
    }

    /// Build from support and multiplicity vectors (any order; pairs are
    /// sorted ascending by support value).
    pub fn from_parts(r: Vec<u64>, x: Vec<u64>) -> Result<Self, SimplexError> {
        if r.len() != x.len() {
            return Err(SimplexError::LengthMismatch);
        }
        if r.is_empty() {
            return Err(SimplexError::EmptyInput);
        }
        let mut pairs: Vec<(u64, u64)> = r.into_iter().zip(x).collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(SimplexError::InvalidEntry);
            }
        }
        if pairs.iter().any(|&(ri, xi)| ri == 0 || xi == 0) {
            return Err(SimplexError::InvalidEntry);
        }
        let r: Vec<u64> = pairs.iter().map(|p| p.0).collect();
        let x: Vec<u64> = pairs.iter().map(|p| p.1).collect();
        let mut lcm = 1u64;
        for &ri in &r {
            lcm = lcm.checked_mul(ri / lcm.gcd(&ri)).ok_or(SimplexError::Overflow)?;
        }
        let s: Vec<u64> = r.iter().map(|&ri| lcm / ri).collect();
        let mut n = 0u64;
        let mut qsum = 0u64;
        for (&ri, &xi) in r.iter().zip(&x) {
            n = n.checked_add(xi).ok_or(SimplexError::Overflow)?;
            qsum = ri
                .checked_mul(xi)
                .and_then(|p| qsum.checked_add(p))
                .ok_or(SimplexError::Overflow)?;
        }
        Ok(SupportedQ { r, x, s, lcm, n, qsum })
    }

    pub fn r(&self) -> &[u64] {
        &self.r
    }

    pub fn x(&self) -> &[u64] {
        &self.x
    }

    /// `s_i = lcm(r) / r_i`.
    pub fn s(&self) -> &[u64] {
        &self.s
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// Dimension `n = sum x_i` of the simplex.
    pub fn dimension(&self) -> u64 {
        self.n
    }

    /// `sum x_i r_i`.
    pub fn qsum(&self) -> u64 {
        self.qsum
    }

    /// Number of distinct support entries.
    pub fn support_size(&self) -> usize {
        self.r.len()
    }

    /// The explicit multiset `(r_1^{x_1}, ..., r_d^{x_d})`.
    pub fn to_multiset(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.n as usize);
        for (&ri, &xi) in self.r.iter().zip(&self.x) {
            out.extend(std::iter::repeat_n(ri, xi as usize));
        }
        out
    }

    /// Reflexivity of Delta_(1,q): every q_i divides `1 + sum q_j`,
    /// equivalently `lcm(r) | 1 + qsum`.
    pub fn is_reflexive(&self) -> bool {
        (1 + self.qsum as u128).is_multiple_of(self.lcm as u128)
    }

    /// The quotient `ell = (1 + qsum) / lcm(r)` for reflexive q.
    pub fn ell(&self) -> Result<u64, SimplexError> {
        if !self.is_reflexive() {
            return Err(SimplexError::NotRMultiplicity);
        }
        Ok((1 + self.qsum) / self.lcm)
    }

    /// Weight `w(b) = b - sum_i x_i * floor(b r_i / (1 + qsum))`.
    fn weight(&self, b: u64) -> u64 {
        let denom = 1 + self.qsum as u128;
        let mut acc = b as u128;
        for (&ri, &xi) in self.r.iter().zip(&self.x) {
            acc -= xi as u128 * (b as u128 * ri as u128 / denom);
        }
        acc as u64
    }

    /// The h*-polynomial of Delta_(1,q): `sum_{b=0}^{qsum} z^{w(b)}`.
    ///
    /// Defined for every positive q-vector; reflexivity is not required.
    pub fn hstar(&self) -> IntPoly {
        let mut counts = vec![0i64; self.n as usize + 1];
        for b in 0..=self.qsum {
            let w = self.weight(b) as usize;
            debug_assert!(w <= self.n as usize);
            counts[w] += 1;
        }
        IntPoly::from_coeffs(counts)
    }

    /// Exponent weight `u(alpha) = alpha*ell - sum_i x_i*floor(alpha/s_i)`.
    fn u_weight(&self, alpha: u64, ell: u64) -> u64 {
        let mut acc = alpha as i128 * ell as i128;
        for (&si, &xi) in self.s.iter().zip(&self.x) {
            acc -= xi as i128 * (alpha / si) as i128;
        }
        debug_assert!(acc >= 0);
        acc as u64
    }

    /// The g-polynomial `sum_{alpha=0}^{lcm-1} z^{u(alpha)}`; satisfies
    /// `h* = (1 + z + ... + z^{ell-1}) * g` and `g(1) = lcm(r)`.
    pub fn g_poly(&self) -> Result<IntPoly, SimplexError> {
        let ell = self.ell()?;
        let mut counts: Vec<i64> = Vec::new();
        for alpha in 0..self.lcm {
            let u = self.u_weight(alpha, ell) as usize;
            if u >= counts.len() {
                counts.resize(u + 1, 0);
            }
            counts[u] += 1;
        }
        Ok(IntPoly::from_coeffs(counts))
    }

    /// The canonical desirable s-division: start from the residues
    /// `rho_i = x_i mod s_i`, whose weighted sum is `m*lcm - 1`, and shift
    /// `rho -> rho - s` (incrementing `c`) at the `m` smallest indices.
    pub fn desirable_division(&self) -> Result<SDivision, SimplexError> {
        let divisions = self.desirable_divisions_shifted(1)?;
        Ok(divisions.into_iter().next().unwrap())
    }

    /// All desirable s-divisions with `rho_i` restricted to
    /// `{0..s_i-1} union {-s_i..-1}`: exactly the `binom(d, m)` choices of
    /// which `m` indices to shift down. `limit = 0` enumerates all of them;
    /// the canonical division shifts the `m` smallest indices and comes
    /// first.
    pub fn desirable_divisions_shifted(&self, limit: usize) -> Result<Vec<SDivision>, SimplexError> {
        if !self.is_reflexive() {
            return Err(SimplexError::NotRMultiplicity);
        }
        let d = self.r.len();
        let rho0: Vec<u64> = self.x.iter().zip(&self.s).map(|(&xi, &si)| xi % si).collect();
        let mut weighted: u128 = 0;
        for (&rho, &ri) in rho0.iter().zip(&self.r) {
            weighted += rho as u128 * ri as u128;
        }
        debug_assert_eq!((weighted + 1) % self.lcm as u128, 0);
        let m = ((weighted + 1) / self.lcm as u128) as usize;
        debug_assert!(m >= 1 && m <= d.max(1));

        let mut out = Vec::new();
        let mut chosen: Vec<usize> = (0..m).collect();
        loop {
            let mut rho: Vec<i64> = rho0.iter().map(|&v| v as i64).collect();
            let mut c: Vec<i64> = Vec::with_capacity(d);
            for (i, rho_i) in rho.iter_mut().enumerate() {
                if chosen.contains(&i) {
                    *rho_i -= self.s[i] as i64;
                }
                c.push(((self.x[i] as i128 - *rho_i as i128) / self.s[i] as i128) as i64);
            }
            out.push(SDivision::new(self, c, rho)?);
            if limit != 0 && out.len() >= limit {
                break;
            }
            // advance to the next m-combination of {0..d-1}, lexicographic
            let mut i = m;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if chosen[i] != i + d - m {
                    break;
                }
            }
            chosen[i] += 1;
            for j in i + 1..m {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
        Ok(out)
    }

    /// The g-polynomial via the CRT-indexed formula
    /// `g = sum_{i in I(r)} z^{sum_j (c_j i_j - rho_j omega_j(i))}`,
    /// valid for every desirable s-division.
    pub fn g_poly_via_crt(&self, div: &SDivision) -> Result<IntPoly, SimplexError> {
        self.ell()?;
        if !div.desirable || div.c.len() != self.r.len() {
            return Err(SimplexError::NotDesirable);
        }
        for i in 0..self.r.len() {
            let rhs = div.c[i] as i128 * self.s[i] as i128 + div.rho[i] as i128;
            if rhs != self.x[i] as i128 {
                return Err(SimplexError::NotDesirable);
            }
        }
        let mut counts: Vec<i64> = Vec::new();
        let mut indices = vec![0u64; self.r.len()];
        self.crt_enumerate(0, 0, 1, &mut indices, &mut |idx, alpha| {
            let mut exp: i128 = 0;
            for (j, &ij) in idx.iter().enumerate() {
                let omega_j = (alpha / self.s[j]) as i128;
                exp += div.c[j] as i128 * ij as i128 - div.rho[j] as i128 * omega_j;
            }
            debug_assert!(exp >= 0);
            let u = exp as usize;
            if u >= counts.len() {
                counts.resize(u + 1, 0);
            }
            counts[u] += 1;
        });
        Ok(IntPoly::from_coeffs(counts))
    }

    /// Walk the CRT-compatible index set I(r), carrying the merged residue
    /// `alpha mod lcm(s_1..s_depth)`; visits every index once with its alpha.
    fn crt_enumerate(
        &self,
        depth: usize,
        residue: u64,
        modulus: u64,
        indices: &mut Vec<u64>,
        visit: &mut impl FnMut(&[u64], u64),
    ) {
        if depth == self.r.len() {
            visit(indices, residue);
            return;
        }
        let sj = self.s[depth];
        let g = modulus.gcd(&sj);
        let start = residue % g;
        let mut ij = start;
        while ij < sj {
            let (merged, new_mod) =
                crt_pair(residue, modulus, ij, sj).expect("gcd-compatible residues always merge");
            indices[depth] = ij;
            self.crt_enumerate(depth + 1, merged, new_mod, indices, visit);
            ij += g;
        }
    }

    /// Append `lcm(r)` to the support with multiplicity `y` (merging if the
    /// lcm is already a support entry). Increases `ell` by `y` and leaves
    /// the g-polynomial unchanged.
    pub fn extend_by_lcm(&self, y: u64) -> Result<SupportedQ, SimplexError> {
        if !self.is_reflexive() {
            return Err(SimplexError::NotRMultiplicity);
        }
        let mut r = self.r.clone();
        let mut x = self.x.clone();
        if let Some(pos) = r.iter().position(|&ri| ri == self.lcm) {
            x[pos] += y;
        } else {
            r.push(self.lcm);
            x.push(y);
        }
        SupportedQ::from_parts(r, x)
    }
}

/// An s-division of x: `x_i = c_i s_i + rho_i`. Desirable when
/// `sum rho_i r_i = -1`, in which case `sum c_i = ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SDivision {
    pub c: Vec<i64>,
    pub rho: Vec<i64>,
    pub desirable: bool,
}

impl SDivision {
    /// Build from quotients and remainders, validating `x_i = c_i s_i + rho_i`
    /// and computing the desirability flag.
    pub fn new(q: &SupportedQ, c: Vec<i64>, rho: Vec<i64>) -> Result<Self, SimplexError> {
        if c.len() != q.r.len() || rho.len() != q.r.len() {
            return Err(SimplexError::LengthMismatch);
        }
        for i in 0..c.len() {
            let rhs = c[i] as i128 * q.s[i] as i128 + rho[i] as i128;
            if rhs != q.x[i] as i128 {
                return Err(SimplexError::InvalidEntry);
            }
        }
        let weighted: i128 = rho
            .iter()
            .zip(&q.r)
            .map(|(&rho_i, &ri)| rho_i as i128 * ri as i128)
            .sum();
        Ok(SDivision {
            c,
            rho,
            desirable: weighted == -1,
        })
    }
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Merge two congruences `alpha = a1 (mod m1)`, `alpha = a2 (mod m2)`.
/// `None` when `gcd(m1,m2)` does not divide `a2 - a1`.
fn crt_pair(a1: u64, m1: u64, a2: u64, m2: u64) -> Option<(u64, u64)> {
    let (m1, m2) = (m1 as i128, m2 as i128);
    let (a1, a2) = (a1 as i128, a2 as i128);
    let (g, p, _) = egcd(m1, m2);
    let diff = a2 - a1;
    if diff % g != 0 {
        return None;
    }
    let lcm = m1 / g * m2;
    let m2g = m2 / g;
    let t = ((diff / g) % m2g * (p % m2g)) % m2g;
    let mut sol = (a1 + m1 * t) % lcm;
    if sol < 0 {
        sol += lcm;
    }
    Some((sol as u64, lcm as u64))
}

/// Solve `alpha = i_j (mod m_j)` for all j, returning the unique solution
/// in `{0, ..., lcm(m)-1}`. The system is solvable exactly when
/// `gcd(m_j, m_j') | i_j - i_j'` for every pair.
pub fn crt_alpha(moduli: &[u64], residues: &[u64]) -> Result<u64, SimplexError> {
    if moduli.len() != residues.len() || moduli.is_empty() {
        return Err(SimplexError::LengthMismatch);
    }
    for (&mj, &ij) in moduli.iter().zip(residues) {
        if mj == 0 || ij >= mj {
            return Err(SimplexError::InconsistentResidues);
        }
    }
    let mut a = residues[0];
    let mut m = moduli[0];
    for j in 1..moduli.len() {
        match crt_pair(a, m, residues[j], moduli[j]) {
            Some((na, nm)) => {
                a = na;
                m = nm;
            }
            None => return Err(SimplexError::InconsistentResidues),
        }
    }
    Ok(a)
}

/// Brute-force CRT solution by scanning `0..lcm`; oracle counterpart of
/// [`crt_alpha`].
pub fn crt_alpha_scan(moduli: &[u64], residues: &[u64]) -> Option<u64> {
    let lcm = moduli.iter().fold(1u64, |acc, &mj| acc.lcm(&mj));
    (0..lcm).find(|&alpha| {
        moduli
            .iter()
            .zip(residues)
            .all(|(&mj, &ij)| alpha % mj == ij % mj)
    })
}

/// The quotient digits `omega_j(i) = floor(alpha(i) / s_j)`, which satisfy
/// `alpha(i) = omega_j s_j + i_j`.
pub fn omega(q: &SupportedQ, indices: &[u64]) -> Result<Vec<u64>, SimplexError> {
    let alpha = crt_alpha(q.s(), indices)?;
    Ok(q.s().iter().map(|&sj| alpha / sj).collect())
}

/// Direct double-loop form of g for two-support q with `r = (a, ka-1)`
/// and `x = (c1(ka-1) - k, c2 a + 1)`:
/// `g = sum z^{c1 i1 + c2 i2 - floor((i1-i2)/a)}` over
/// `(i1, i2) in {0..ka-2} x {0..a-1}`.
pub fn g_two_support_fast(a: u64, k: u64, c1: u64, c2: u64) -> Result<IntPoly, SimplexError> {
    if a < 2 || k < 1 {
        return Err(SimplexError::InvalidParameters(format!(
            "need a >= 2 and k >= 1, got a={a}, k={k}"
        )));
    }
    let b = k * a - 1;
    let x1 = (c1 as i128) * (b as i128) - k as i128;
    let x2 = (c2 as i128) * (a as i128) + 1;
    if x1 < 1 || x2 < 1 {
        return Err(SimplexError::InvalidParameters(format!(
            "multiplicities must be positive, got x=({x1},{x2})"
        )));
    }
    let mut counts: Vec<i64> = Vec::new();
    for i1 in 0..b as i64 {
        for i2 in 0..a as i64 {
            let exp = c1 as i128 * i1 as i128 + c2 as i128 * i2 as i128
                - (i1 - i2).div_euclid(a as i64) as i128;
            debug_assert!(exp >= 0);
            let u = exp as usize;
            if u >= counts.len() {
                counts.resize(u + 1, 0);
            }
            counts[u] += 1;
        }
    }
    Ok(IntPoly::from_coeffs(counts))
}

/// The q-vector of the free sum Delta_(1,p) *_0 Delta_(1,q):
/// `y = (p_1, ..., p_n, s q_1, ..., s q_m)` with `s = 1 + sum p_j`.
/// Its h*-polynomial is the product of the two h*-polynomials.
pub fn free_sum(p: &SupportedQ, q: &SupportedQ) -> Result<SupportedQ, SimplexError> {
    if !p.is_reflexive() || !q.is_reflexive() {
        return Err(SimplexError::NotReflexive);
    }
    let scale = 1 + p.qsum();
    let mut multiset = p.to_multiset();
    for v in q.to_multiset() {
        multiset.push(v.checked_mul(scale).ok_or(SimplexError::Overflow)?);
    }
    SupportedQ::support(&multiset)
}

/// Parse a q-spec: comma-separated `r^x` terms (`"2^7,5^5"`) or a bare
/// multiset (`"2,2,2,5"`); terms may mix, whitespace is ignored.
pub fn parse_qspec(spec: &str) -> Result<SupportedQ, SimplexError> {
    let cleaned: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(SimplexError::Parse("empty q-spec".to_string()));
    }
    let mut multiset = Vec::new();
    for term in cleaned.split(',') {
        if term.is_empty() {
            return Err(SimplexError::Parse(format!("empty term in '{spec}'")));
        }
        let (base, count) = match term.split_once('^') {
            Some((b, e)) => {
                let count: u64 = e
                    .parse()
                    .map_err(|_| SimplexError::Parse(format!("bad multiplicity '{e}'")))?;
                (b, count)
            }
            None => (term, 1),
        };
        let value: u64 = base
            .parse()
            .map_err(|_| SimplexError::Parse(format!("bad entry '{base}'")))?;
        if value == 0 || count == 0 {
            return Err(SimplexError::Parse(format!(
                "entries and multiplicities must be positive in '{term}'"
            )));
        }
        multiset.extend(std::iter::repeat_n(value, count as usize));
    }
    SupportedQ::support(&multiset)
}

/// Render as a q-spec string, e.g. `2^7,5^5`.
pub fn render_qspec(q: &SupportedQ) -> String {
    q.r()
        .iter()
        .zip(q.x())
        .map(|(&ri, &xi)| if xi == 1 { format!("{ri}") } else { format!("{ri}^{xi}") })
        .collect::<Vec<_>>()
        .join(",")
}

impl Serialize for SupportedQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            r: &'a [u64],
            x: &'a [u64],
        }
        Raw { r: &self.r, x: &self.x }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SupportedQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            r: Vec<u64>,
            x: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        SupportedQ::from_parts(raw.r, raw.x).map_err(D::Error::custom)
    }
}
