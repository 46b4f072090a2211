//! Browser bindings for the Delta_(1,q) toolkit: analyze a q-vector,
//! instantiate a factorization family, and render the Fibonacci u-table.
//!
//! Every function returns a JSON string (`{"ok": false, "error": ...}` on
//! failure) so the page needs no shared memory or custom types.

use wasm_bindgen::prelude::wasm_bindgen;

use ehrk_core::ehrhart::{ehrhart_from_hstar, is_ehrhart_positive};
use ehrk_core::explorer::fib_sequence;
use ehrk_core::factorizer::{
    family_532, family_case0, family_case1, family_case2, family_case3, fibonacci_instance,
    find_geometric_factorization, FamilyInstance,
};
use ehrk_core::polyring::is_kronecker;
use ehrk_core::simplex::{parse_qspec, render_qspec};

// interactive-demo guard rails; the CLI has no such caps
const MAX_QSUM: u64 = 2_000_000;
const MAX_EHRHART_DIM: u64 = 40;
const MAX_FIB_INDEX: u32 = 6;

fn err(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "ok": false, "error": msg.to_string() }).to_string()
}

/// Full analysis of a q-spec like `"2^7,5^5"`: reflexivity, ell, h*, g,
/// Kronecker status, factorizations, and the Ehrhart polynomial.
#[wasm_bindgen]
pub fn analyze(qspec: &str) -> String {
    let q = match parse_qspec(qspec) {
        Ok(q) => q,
        Err(e) => return err(e),
    };
    if q.qsum() > MAX_QSUM {
        return err(format!("q-vector too large for the demo (sum {} > {MAX_QSUM})", q.qsum()));
    }
    let h = q.hstar();
    let mut out = serde_json::json!({
        "ok": true,
        "qspec": render_qspec(&q),
        "r": q.r(),
        "x": q.x(),
        "dimension": q.dimension(),
        "lcm": q.lcm(),
        "reflexive": q.is_reflexive(),
        "hstar": { "coeffs": h.coeffs(), "render": h.render() },
    });
    let kron = match is_kronecker(&h) {
        Ok(k) => k,
        Err(e) => return err(e),
    };
    out["kronecker"] = serde_json::json!(kron.is_some());
    if let Some(m) = kron {
        out["cyclotomics"] = serde_json::json!(m.render());
    }
    match find_geometric_factorization(&h) {
        Ok(f) => out["hstar_factorization"] = serde_json::json!(f.map(|f| f.render())),
        Err(e) => return err(e),
    }
    if q.is_reflexive() {
        let ell = q.ell().expect("reflexive");
        let g = q.g_poly().expect("reflexive");
        out["ell"] = serde_json::json!(ell);
        out["g"] = serde_json::json!({ "coeffs": g.coeffs(), "render": g.render() });
        match find_geometric_factorization(&g) {
            Ok(f) => out["g_factorization"] = serde_json::json!(f.map(|f| f.render())),
            Err(e) => return err(e),
        }
    }
    if q.dimension() <= MAX_EHRHART_DIM {
        let l = ehrhart_from_hstar(&h, q.dimension() as usize).expect("degree bounded");
        out["ehrhart"] = serde_json::json!({
            "render": l.render(),
            "coeffs": l.to_json(),
            "positive": is_ehrhart_positive(&q),
        });
    }
    out.to_string()
}

fn instance_json(inst: FamilyInstance) -> String {
    let g = match inst.q.g_poly() {
        Ok(g) => g,
        Err(e) => return err(e),
    };
    let verified = inst.verify().is_ok();
    serde_json::json!({
        "ok": true,
        "family": inst.family.as_str(),
        "params": inst.params,
        "qspec": render_qspec(&inst.q),
        "r": inst.q.r(),
        "x": inst.q.x(),
        "ell": inst.q.ell().ok(),
        "expected": inst.expected.render(),
        "g": g.render(),
        "verified": verified,
    })
    .to_string()
}

/// Instantiate a closed-form family. Parameter meaning per family:
/// case0: (a, c1, c2) with x = (a*c1 - 1, c2); case1: (a, k, c);
/// case2/case3: (a, c, -); s532-1: (-, -, -); s532-2/s532-3: (c, -, -);
/// fib: (n, -, -).
#[wasm_bindgen]
pub fn family(name: &str, p1: u32, p2: u32, p3: u32) -> String {
    let (p1, p2, p3) = (p1 as u64, p2 as u64, p3 as u64);
    let inst = match name {
        "case0" => {
            if p1 < 2 || p2 < 1 || p3 < 1 {
                return err("case0 needs a >= 2, c1 >= 1, c2 >= 1");
            }
            family_case0(p1, p1 * p2 - 1, p3)
        }
        "case1" => family_case1(p1, p2, p3),
        "case2" => family_case2(p1, p2),
        "case3" => family_case3(p1, p2),
        "s532-1" => family_532(1, 1),
        "s532-2" => family_532(2, p1.max(1)),
        "s532-3" => family_532(3, p1.max(1)),
        "fib" => {
            if p1 > MAX_FIB_INDEX as u64 {
                return err(format!("fib index capped at {MAX_FIB_INDEX} in the demo"));
            }
            fibonacci_instance(p1 as u32)
        }
        other => return err(format!("unknown family '{other}'")),
    };
    match inst {
        Ok(inst) => instance_json(inst),
        Err(e) => err(e),
    }
}

/// The u-table of the Fibonacci instance at index n: an a_n x a_{n+1} grid
/// whose (i1, i2) entry is the exponent weight u(alpha(i1, i2)).
#[wasm_bindgen]
pub fn fib_table(n: u32) -> String {
    if !(1..=MAX_FIB_INDEX).contains(&n) {
        return err(format!("need 1 <= n <= {MAX_FIB_INDEX}"));
    }
    let reports = ehrk_core::explorer::verify_fibonacci(n);
    let rep = reports.last().expect("n >= 1");
    serde_json::json!({
        "ok": true,
        "n": n,
        "a_n": fib_sequence(n),
        "a_np1": fib_sequence(n + 1),
        "identities_ok": rep.identities_ok,
        "factorization_ok": rep.factorization_ok,
        "boundary_ok": rep.boundary_ok,
        "stability_ok": rep.stability_ok,
        "table": rep.u_table,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_reference_instance() {
        let v: serde_json::Value = serde_json::from_str(&analyze("2^7,5^5")).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["reflexive"], true);
        assert_eq!(v["ell"], 4);
        assert_eq!(v["kronecker"], true);
        assert_eq!(v["g_factorization"], serde_json::Value::Null);
        assert!(v["hstar_factorization"].as_str().is_some());
        assert_eq!(v["ehrhart"]["positive"], true);
    }

    #[test]
    fn analyze_rejects_garbage() {
        let v: serde_json::Value = serde_json::from_str(&analyze("zebra")).unwrap();
        assert_eq!(v["ok"], false);
    }

    #[test]
    fn family_endpoint() {
        let v: serde_json::Value = serde_json::from_str(&family("case1", 3, 2, 2)).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["verified"], true);
        let v: serde_json::Value = serde_json::from_str(&family("nope", 1, 1, 1)).unwrap();
        assert_eq!(v["ok"], false);
    }

    #[test]
    fn fib_table_endpoint() {
        let v: serde_json::Value = serde_json::from_str(&fib_table(2)).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(v["a_n"], 5);
        assert_eq!(v["table"].as_array().unwrap().len(), 5);
        assert_eq!(v["table"][0][1], 1);
        let v: serde_json::Value = serde_json::from_str(&fib_table(99)).unwrap();
        assert_eq!(v["ok"], false);
    }
}
