//! Property-based invariants across the crate: exact-division round trips,
//! Kronecker behaviour on geometric products, agreement of the two g
//! formulas, CRT against brute scan, and h* symmetry under input
//! permutations.

use proptest::prelude::*;

use ehrk_core::factorizer::find_geometric_factorization;
use ehrk_core::oracle::brute_force_geometric_factorization;
use ehrk_core::polyring::{geometric_series, is_kronecker, IntPoly};
use ehrk_core::simplex::{crt_alpha, crt_alpha_scan, SupportedQ};

fn small_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-4i64..=4, 0..8).prop_map(IntPoly::from_coeffs)
}

fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn geometric_product() -> impl Strategy<Value = (Vec<(usize, u32)>, IntPoly)> {
    prop::collection::vec((1usize..=4, 2u32..=5), 0..4).prop_map(|pairs| {
        let mut f = IntPoly::one();
        for &(e, g) in &pairs {
            f = f.mul(&geometric_series(e, g)).unwrap();
        }
        (pairs, f)
    })
}

/// Construct a reflexive two-support q from free parameters: given coprime
/// r1 < r2 and x1, the R-multiplicity condition fixes x2 modulo r1.
fn reflexive_two_support() -> impl Strategy<Value = SupportedQ> {
    (1u64..=10, 1u64..=10, 1u64..=20, 0u64..=3).prop_filter_map(
        "coprime pair",
        |(a, b, x1, shift)| {
            let (r1, r2) = (a.min(b), a.max(b) + 1);
            if num_integer::Integer::gcd(&r1, &r2) != 1 {
                return None;
            }
            let lcm = r1 * r2;
            // solve x2*r2 = -(1 + x1*r1) mod lcm; since gcd(r2, lcm) = r2,
            // a solution exists iff r2 divides 1 + x1*r1 ... scan the small
            // residue class instead of inverting
            let target = (lcm - (1 + x1 * r1) % lcm) % lcm;
            let x2 = (1..=lcm)
                .find(|x2| (x2 * r2) % lcm == target)?
                + shift * r1;
            SupportedQ::from_parts(vec![r1, r2], vec![x1, x2]).ok()
        },
    )
}

proptest! {
    #[test]
    fn mul_then_exact_div_round_trips(a in small_poly(), b in nonzero_poly()) {
        let prod = a.mul(&b).unwrap();
        prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn geometric_series_value_at_one(e in 1usize..=6, gamma in 2u32..=9) {
        let f = geometric_series(e, gamma);
        prop_assert_eq!(f.eval(1).unwrap(), gamma as i64);
        prop_assert_eq!(f.degree(), Some((gamma as usize - 1) * e));
    }

    #[test]
    fn geometric_products_are_kronecker((_pairs, f) in geometric_product()) {
        let multiset = is_kronecker(&f).unwrap().expect("geometric products are Kronecker");
        prop_assert_eq!(multiset.expand().unwrap(), f);
    }

    #[test]
    fn factorization_search_is_sound((_pairs, f) in geometric_product()) {
        let found = find_geometric_factorization(&f).unwrap().expect("a factorization exists");
        prop_assert_eq!(found.expand().unwrap(), f.clone());
        prop_assert_eq!(found.product_of_lengths() as i64, f.eval(1).unwrap());
    }

    #[test]
    fn factorization_search_matches_brute_force(coeffs in prop::collection::vec(0i64..=3, 0..9)) {
        let mut coeffs = coeffs;
        coeffs.insert(0, 1);
        let f = IntPoly::from_coeffs(coeffs);
        if f.eval(1).unwrap() <= 24 {
            let searched = find_geometric_factorization(&f).unwrap();
            let brute = brute_force_geometric_factorization(&f);
            prop_assert_eq!(searched.is_some(), brute.is_some(), "f = {}", f.render());
        }
    }

    #[test]
    fn hstar_is_permutation_invariant(entries in prop::collection::vec(1u64..=6, 1..7)) {
        let q = SupportedQ::support(&entries).unwrap();
        // direct weight-sum over the multiset in its original order
        let qsum: u64 = entries.iter().sum();
        let mut counts = vec![0i64; entries.len() + 1];
        for b in 0..=qsum {
            let mut w = b as i128;
            for &qi in &entries {
                w -= (b as u128 * qi as u128 / (1 + qsum as u128)) as i128;
            }
            counts[w as usize] += 1;
        }
        prop_assert_eq!(q.hstar(), IntPoly::from_coeffs(counts));
    }

    #[test]
    fn hstar_factors_as_ell_series_times_g(q in reflexive_two_support()) {
        let ell = q.ell().unwrap();
        let g = q.g_poly().unwrap();
        let h = q.hstar();
        let rhs = if ell == 1 { g.clone() } else { geometric_series(1, ell as u32).mul(&g).unwrap() };
        prop_assert_eq!(h.clone(), rhs);
        prop_assert_eq!(g.eval(1).unwrap() as u64, q.lcm());
        prop_assert_eq!(h.eval(1).unwrap() as u64, 1 + q.qsum());
    }

    #[test]
    fn g_formulas_agree(q in reflexive_two_support()) {
        let g = q.g_poly().unwrap();
        for div in q.desirable_divisions_shifted(0).unwrap() {
            prop_assert_eq!(q.g_poly_via_crt(&div).unwrap(), g.clone());
        }
    }

    #[test]
    fn crt_matches_brute_scan(
        moduli in prop::collection::vec(1u64..=12, 1..4),
        seeds in prop::collection::vec(0u64..=1000, 1..4),
    ) {
        prop_assume!(moduli.len() == seeds.len());
        let lcm = moduli.iter().fold(1u64, |acc, &m| num_integer::Integer::lcm(&acc, &m));
        // derive residues from a single witness so the system is consistent
        let witness = seeds[0] % lcm;
        let residues: Vec<u64> = moduli.iter().map(|&m| witness % m).collect();
        prop_assert_eq!(crt_alpha(&moduli, &residues).unwrap(), witness);
        prop_assert_eq!(crt_alpha_scan(&moduli, &residues), Some(witness));
        // and inconsistent systems are rejected identically
        if moduli.len() >= 2 && moduli[0] > 1 {
            let mut bad = residues.clone();
            bad[0] = (bad[0] + 1) % moduli[0];
            let fast = crt_alpha(&moduli, &bad).ok();
            let slow = crt_alpha_scan(&moduli, &bad);
            prop_assert_eq!(fast, slow);
        }
    }

    #[test]
    fn extend_by_lcm_keeps_g(q in reflexive_two_support(), y in 1u64..=3) {
        let ext = q.extend_by_lcm(y).unwrap();
        prop_assert_eq!(ext.g_poly().unwrap(), q.g_poly().unwrap());
        prop_assert_eq!(ext.ell().unwrap(), q.ell().unwrap() + y);
    }
}
