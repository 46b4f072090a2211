//! Exact combinatorics of the lattice simplices Delta_(1,q).
//!
//! The crate computes h*- and g-polynomials from q-vectors with exact
//! integer arithmetic, decides the Kronecker property by cyclotomic trial
//! division, searches for factorizations into geometric series, recovers
//! Ehrhart polynomials over exact rationals, and drives the exhaustive
//! searches that classify Kronecker instances for small supports.
//!
//! ```
//! use ehrk_core::{parse_qspec, find_geometric_factorization, is_kronecker, geometric_series};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let q = parse_qspec("2^7,5^5")?;
//! assert!(q.is_reflexive());
//! let (h, g) = (q.hstar(), q.g_poly()?);
//! assert_eq!(h, geometric_series(1, q.ell()? as u32).mul(&g)?);
//! assert!(is_kronecker(&g)?.is_some()); // Kronecker...
//! assert!(find_geometric_factorization(&g)?.is_none()); // ...with no geometric factorization
//! # Ok(())
//! # }
//! ```

pub mod ehrhart;
pub mod explorer;
pub mod factorizer;
pub mod oracle;
pub mod polyring;
pub mod simplex;

pub use factorizer::{
    classify_2_2km1, family_532, family_case0, family_case1, family_case2, family_case3,
    fibonacci_instance, find_geometric_factorization, FactorError, FamilyId, FamilyInstance,
    GeomFactorization,
};
pub use polyring::{
    cyclotomic, geometric_series, is_kronecker, CyclotomicMultiset, GeomSeries, IntPoly, PolyError,
};
pub use simplex::{
    crt_alpha, free_sum, g_two_support_fast, is_r_multiplicity, omega, parse_qspec, render_qspec,
    SDivision, SimplexError, SupportedQ,
};
