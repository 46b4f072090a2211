//! Exhaustive search harnesses and conjecture verifiers: the two-support
//! Kronecker search with family tagging, the three-support coprime search,
//! the (2, 2k-1) classification sweep, the Fibonacci family checks, and the
//! Ehrhart positivity sweep.
//!
//! Work units are processed in deterministic lexicographic order and merged
//! positionally, so every report is byte-identical regardless of the worker
//! count.

use num_integer::Integer;
use serde::Serialize;
use std::sync::OnceLock;

use crate::ehrhart;
use crate::factorizer::{
    classify_2_2km1, find_geometric_factorization, match_three_support_family,
    match_two_support_family, FamilyId, GeomFactorization,
};
use crate::polyring::{is_kronecker, CyclotomicMultiset};
use crate::simplex::{crt_alpha, g_two_support_fast, render_qspec, SupportedQ};

/// Worker count from `EHRK_THREADS`, or the machine parallelism.
pub fn default_workers() -> usize {
    if let Ok(v) = std::env::var("EHRK_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
    }
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Map `f` over `items` on `workers` threads, preserving input order in the
/// output. Items are split into contiguous chunks, one per worker, so the
/// result is independent of scheduling.
pub fn parallel_map<T, R, F>(items: Vec<T>, workers: usize, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers <= 1 {
        return items.into_iter().map(f).collect();
    }
    let total = items.len();
    let chunk_size = total.div_ceil(workers);
    let mut results: Vec<Option<R>> = (0..total).map(|_| None).collect();
    let mut item_chunks: Vec<Vec<T>> = Vec::new();
    {
        let mut it = items.into_iter();
        loop {
            let chunk: Vec<T> = it.by_ref().take(chunk_size).collect();
            if chunk.is_empty() {
                break;
            }
            item_chunks.push(chunk);
        }
    }
    std::thread::scope(|scope| {
        let mut slots: &mut [Option<R>] = &mut results;
        let mut handles = Vec::new();
        for chunk in item_chunks {
            let (head, tail) = slots.split_at_mut(chunk.len().min(slots.len()));
            slots = tail;
            let fref = &f;
            handles.push(scope.spawn(move || {
                for (slot, item) in head.iter_mut().zip(chunk) {
                    *slot = Some(fref(item));
                }
            }));
        }
        for h in handles {
            h.join().expect("worker panicked");
        }
    });
    results.into_iter().map(|r| r.expect("all slots filled")).collect()
}

/// How a Kronecker instance is accounted for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyTag {
    Family(FamilyId),
    Exceptional,
}

impl FamilyTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyTag::Family(id) => id.as_str(),
            FamilyTag::Exceptional => "exceptional",
        }
    }
}

impl Serialize for FamilyTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Classification of one reflexive q-vector.
#[derive(Clone, Debug, Serialize)]
pub struct SearchRecord {
    #[serde(flatten)]
    pub q: SupportedQ,
    pub reflexive: bool,
    pub ell: u64,
    pub kronecker: bool,
    pub cyclotomics: Option<CyclotomicMultiset>,
    pub hstar_factorization: Option<GeomFactorization>,
    pub g_factorization: Option<GeomFactorization>,
    pub family_tag: Option<FamilyTag>,
}

impl SearchRecord {
    pub fn is_exceptional(&self) -> bool {
        self.kronecker && self.family_tag == Some(FamilyTag::Exceptional)
    }

    pub fn key(&self) -> (Vec<u64>, Vec<u64>) {
        (self.q.r().to_vec(), self.q.x().to_vec())
    }
}

fn build_record(q: SupportedQ, three_support: bool) -> SearchRecord {
    let ell = q.ell().expect("records are built for reflexive q only");
    let g = q.g_poly().expect("reflexive");
    let kron_g = is_kronecker(&g).expect("coefficient overflow in Kronecker scan");
    if kron_g.is_none() {
        // a geometric factorization would make g Kronecker, so both
        // factorizations are known absent without searching
        return SearchRecord {
            q,
            reflexive: true,
            ell,
            kronecker: false,
            cyclotomics: None,
            hstar_factorization: None,
            g_factorization: None,
            family_tag: None,
        };
    }
    let h = q.hstar();
    let cyclotomics = is_kronecker(&h)
        .expect("coefficient overflow in Kronecker scan")
        .expect("h* is Kronecker exactly when g is");
    let hstar_factorization = find_geometric_factorization(&h).expect("valid h* input");
    let g_factorization = find_geometric_factorization(&g).expect("valid g input");
    let family = if three_support {
        match_three_support_family(&q)
    } else {
        match_two_support_family(&q)
    };
    SearchRecord {
        q,
        reflexive: true,
        ell,
        kronecker: true,
        cyclotomics: Some(cyclotomics),
        hstar_factorization,
        g_factorization,
        family_tag: Some(family.map_or(FamilyTag::Exceptional, FamilyTag::Family)),
    }
}

/// Enumerate every reflexive q supported on two integers `r1 < r2 <= r_max`
/// with multiplicities up to `x_max`, classifying each Kronecker instance
/// as family-covered or exceptional. Output is lexicographic in
/// `(r1, r2, x1, x2)`.
pub fn search_two_support(r_max: u64, x_max: u64, workers: usize) -> Vec<SearchRecord> {
    let mut pairs = Vec::new();
    for r1 in 1..r_max {
        for r2 in r1 + 1..=r_max {
            if r1.gcd(&r2) == 1 {
                pairs.push((r1, r2));
            }
        }
    }
    let per_pair = parallel_map(pairs, workers, |(r1, r2)| {
        let lcm = r1 * r2 / r1.gcd(&r2);
        let mut records = Vec::new();
        for x1 in 1..=x_max {
            for x2 in 1..=x_max {
                if (1 + x1 * r1 + x2 * r2) % lcm != 0 {
                    continue;
                }
                let q = SupportedQ::from_parts(vec![r1, r2], vec![x1, x2])
                    .expect("valid support");
                records.push(build_record(q, false));
            }
        }
        records
    });
    per_pair.into_iter().flatten().collect()
}

/// Records whose h* is Kronecker but admits no geometric factorization.
pub fn find_kronecker_without_geomfact(
    r_max: u64,
    x_max: u64,
    workers: usize,
) -> Vec<SearchRecord> {
    search_two_support(r_max, x_max, workers)
        .into_iter()
        .filter(|rec| rec.kronecker && rec.hstar_factorization.is_none())
        .collect()
}

/// Enumerate pairwise-coprime s-triples with `2 <= s_i <= s_max`, derive
/// `r_j = prod_{j' != j} s_{j'}`, and sweep R-multiplicities up to `x_max`.
pub fn search_three_support(s_max: u64, x_max: u64, workers: usize) -> Vec<SearchRecord> {
    let mut triples = Vec::new();
    for sc in 2..=s_max {
        for sb in sc + 1..=s_max {
            for sa in sb + 1..=s_max {
                if sa.gcd(&sb) == 1 && sa.gcd(&sc) == 1 && sb.gcd(&sc) == 1 {
                    triples.push((sa, sb, sc));
                }
            }
        }
    }
    triples.sort_unstable();
    let per_triple = parallel_map(triples, workers, |(sa, sb, sc)| {
        let r = [sb * sc, sa * sc, sa * sb];
        let lcm = sa * sb * sc;
        let mut records = Vec::new();
        for x1 in 1..=x_max {
            for x2 in 1..=x_max {
                let partial = 1 + x1 * r[0] + x2 * r[1];
                for x3 in 1..=x_max {
                    if (partial + x3 * r[2]) % lcm != 0 {
                        continue;
                    }
                    let q = SupportedQ::from_parts(r.to_vec(), vec![x1, x2, x3])
                        .expect("valid support");
                    records.push(build_record(q, true));
                }
            }
        }
        records
    });
    per_triple.into_iter().flatten().collect()
}

/// One disagreement between the classification predicate and the search.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyDisagreement {
    pub k: u64,
    pub c1: u64,
    pub c2: u64,
    pub predicted: bool,
    pub found: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub checked: u64,
    pub disagreements: Vec<ClassifyDisagreement>,
}

/// Sweep `2 <= k <= k_max`, `1 <= c1 <= c_max`, `0 <= c2 <= c_max` and
/// compare the closed-form predicate with the factorization search on
/// `g` for r = (2, 2k-1), x = ((2k-1)c1 - k, 2c2 + 1).
pub fn verify_classification_2odd(k_max: u64, c_max: u64, workers: usize) -> ClassificationReport {
    let ks: Vec<u64> = (2..=k_max).collect();
    let per_k = parallel_map(ks, workers, |k| {
        let mut checked = 0u64;
        let mut disagreements = Vec::new();
        for c1 in 1..=c_max {
            for c2 in 0..=c_max {
                let g = g_two_support_fast(2, k, c1, c2).expect("valid parameters");
                let found = find_geometric_factorization(&g)
                    .expect("valid g input")
                    .is_some();
                let predicted = classify_2_2km1(k, c1, c2).expect("valid parameters");
                checked += 1;
                if predicted != found {
                    disagreements.push(ClassifyDisagreement {
                        k,
                        c1,
                        c2,
                        predicted,
                        found,
                    });
                }
            }
        }
        (checked, disagreements)
    });
    let mut report = ClassificationReport {
        checked: 0,
        disagreements: Vec::new(),
    };
    for (checked, mut dis) in per_k {
        report.checked += checked;
        report.disagreements.append(&mut dis);
    }
    report
}

/// The sequence a_0 = 1, a_1 = 2, a_n = 3a_{n-1} - a_{n-2} (every other
/// Fibonacci number: 1, 2, 5, 13, 34, 89, 233, ...). Hard failure past the
/// u64 range (n = 46).
pub fn fib_sequence(n: u32) -> u64 {
    let (mut prev, mut cur) = (1u64, 2u64);
    if n == 0 {
        return 1;
    }
    for _ in 1..n {
        let next = 3u64
            .checked_mul(cur)
            .and_then(|v| v.checked_sub(prev))
            .expect("sequence value overflows u64");
        prev = cur;
        cur = next;
    }
    cur
}

fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    loop {
        let next = (r + n / r) / 2;
        if next == r || next == r + 1 {
            while r * r > n {
                r -= 1;
            }
            while (r + 1) * (r + 1) <= n {
                r += 1;
            }
            return r;
        }
        r = next;
    }
}

/// `floor(i * (1 + sqrt 5)/2)` computed exactly as
/// `floor((i + isqrt(5 i^2)) / 2)`; no floating point in the result path.
pub fn beatty_floor(i: u64) -> u64 {
    let i = i as u128;
    ((i + isqrt_u128(5 * i * i)) / 2) as u64
}

/// Verification record for one index n of the Fibonacci family.
#[derive(Clone, Debug, Serialize)]
pub struct FibReport {
    pub n: u32,
    /// arithmetic identities of the sequence, reflexivity with ell = 3, and
    /// agreement of the closed-form u with the direct weight enumeration
    pub identities_ok: bool,
    /// g equals the product of the two unit-exponent geometric series
    pub factorization_ok: bool,
    /// `u_table[i1][i2]` for `i1 < a_n`, `i2 < a_{n+1}`
    pub u_table: Vec<Vec<u64>>,
    /// first row and column match the golden-ratio Beatty formulas
    pub boundary_ok: bool,
    /// table agrees with index n-1 on the overlapping grid
    pub stability_ok: bool,
}

impl FibReport {
    pub fn all_ok(&self) -> bool {
        self.identities_ok && self.factorization_ok && self.boundary_ok && self.stability_ok
    }
}

fn fib_u_table(n: u32) -> (Vec<Vec<u64>>, bool) {
    let a_nm1 = if n == 0 { 1 } else { fib_sequence(n - 1) };
    let a_n = fib_sequence(n);
    let a_np1 = fib_sequence(n + 1);
    let mut ok = true;
    let mut table = Vec::with_capacity(a_n as usize);
    for i1 in 0..a_n {
        let mut row = Vec::with_capacity(a_np1 as usize);
        for i2 in 0..a_np1 {
            let diff = i1 as i128 - i2 as i128;
            let w1 = (a_n as i128 * diff).rem_euclid(a_np1 as i128);
            let w2 = (a_nm1 as i128 * diff).rem_euclid(a_n as i128);
            let closed = 3 * i1 as i128 + a_nm1 as i128 * w1 - a_n as i128 * w2;
            // direct weight: u(alpha) with alpha = CRT(i1 mod a_n, i2 mod a_{n+1})
            let alpha = crt_alpha(&[a_n, a_np1], &[i1, i2]).expect("coprime moduli") as i128;
            let direct = 3 * alpha
                - a_n as i128 * (alpha / a_np1 as i128)
                - a_np1 as i128 * (alpha / a_n as i128);
            if closed != direct || closed < 0 {
                ok = false;
            }
            row.push(closed.max(0) as u64);
        }
        table.push(row);
    }
    (table, ok)
}

/// Check the Fibonacci family for `1 <= n <= n_max`: sequence identities,
/// reflexivity with ell = 3, the two-series factorization of g, the
/// golden-ratio boundary formulas, and grid stability across consecutive n.
pub fn verify_fibonacci(n_max: u32) -> Vec<FibReport> {
    let mut reports: Vec<FibReport> = Vec::new();
    for n in 1..=n_max {
        let a_nm1 = fib_sequence(n - 1);
        let a_n = fib_sequence(n);
        let a_np1 = fib_sequence(n + 1);

        let mut identities_ok = true;
        if n >= 2 {
            let a_nm2 = fib_sequence(n - 2);
            identities_ok &= 1 + a_nm1 * a_nm1 == a_n * a_nm2;
        }
        identities_ok &= 1 + a_n * a_n + a_np1 * a_np1 == 3 * a_n * a_np1;
        identities_ok &= a_n.gcd(&a_np1) == 1;

        let inst = crate::factorizer::fibonacci_instance(n).expect("n >= 1 is nondegenerate");
        let q = &inst.q;
        identities_ok &= q.is_reflexive() && q.ell() == Ok(3);

        let (u_table, grid_ok) = fib_u_table(n);
        identities_ok &= grid_ok;
        // the multiset of grid values is exactly g
        let g = q.g_poly().expect("reflexive");
        let mut counts = vec![0i64; g.degree().unwrap_or(0) + 1];
        let mut in_range = true;
        for row in &u_table {
            for &u in row {
                if (u as usize) < counts.len() {
                    counts[u as usize] += 1;
                } else {
                    in_range = false;
                }
            }
        }
        identities_ok &= in_range && counts == g.coeffs();

        let factorization_ok = inst.verify().is_ok();

        let mut boundary_ok = true;
        for (i1, row) in u_table.iter().enumerate() {
            let expect = if i1 == 0 {
                0
            } else {
                i1 as u64 + beatty_floor(i1 as u64) + 1
            };
            boundary_ok &= row[0] == expect;
        }
        for i2 in 0..a_np1 {
            boundary_ok &= u_table[0][i2 as usize] == 2 * i2 - beatty_floor(i2);
        }

        let stability_ok = match reports.last() {
            None => true,
            Some(prev) => prev
                .u_table
                .iter()
                .enumerate()
                .all(|(i1, row)| row.iter().enumerate().all(|(i2, &u)| u_table[i1][i2] == u)),
        };

        reports.push(FibReport {
            n,
            identities_ok,
            factorization_ok,
            u_table,
            boundary_ok,
            stability_ok,
        });
    }
    reports
}

/// Bounds for the family verification sweep.
#[derive(Clone, Copy, Debug)]
pub struct FamilyBounds {
    pub a_max: u64,
    pub k_max: u64,
    pub c_max: u64,
    pub c532_max: u64,
    pub fib_max: u32,
}

impl FamilyBounds {
    pub fn desk_scale() -> Self {
        FamilyBounds {
            a_max: 6,
            k_max: 4,
            c_max: 5,
            c532_max: 4,
            fib_max: 5,
        }
    }

    pub fn full_scale() -> Self {
        FamilyBounds {
            a_max: 8,
            k_max: 6,
            c_max: 7,
            c532_max: 6,
            fib_max: 7,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FamilyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Instantiate every family member in the given parameter box and check
/// that the predicted factorization expands to g and that g is Kronecker.
pub fn verify_families(bounds: &FamilyBounds) -> FamilyReport {
    let mut report = FamilyReport::default();
    let mut run = |inst: Result<crate::factorizer::FamilyInstance, _>| {
        if let Ok(inst) = inst {
            report.checked += 1;
            if let Err(msg) = inst.verify() {
                report.failures.push(msg);
            }
        }
    };
    for a in 2..=bounds.a_max {
        for c1 in 1..=bounds.c_max {
            for c2 in 1..=bounds.c_max {
                run(crate::factorizer::family_case0(a, a * c1 - 1, c2));
            }
        }
    }
    for a in 2..=bounds.a_max {
        for k in 1..=bounds.k_max {
            for c in 1..=bounds.c_max {
                run(crate::factorizer::family_case1(a, k, c));
            }
        }
    }
    for a in 2..=bounds.a_max {
        for c in 1..=bounds.c_max {
            run(crate::factorizer::family_case2(a, c));
            run(crate::factorizer::family_case3(a, c));
        }
    }
    run(crate::factorizer::family_532(1, 1));
    for c in 1..=bounds.c532_max {
        run(crate::factorizer::family_532(2, c));
        run(crate::factorizer::family_532(3, c));
    }
    for n in 1..=bounds.fib_max {
        run(crate::factorizer::fibonacci_instance(n));
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivityViolation {
    pub qspec: String,
    pub coefficient_index: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PositivityReport {
    pub checked: u64,
    pub violations: Vec<PositivityViolation>,
}

/// Sweep every two-support q (reflexive or not) with `r1 < r2 <= r_max`,
/// `x_i <= x_max`, and report any Ehrhart coefficient that is not strictly
/// positive.
pub fn verify_ehrhart_positivity(r_max: u64, x_max: u64, workers: usize) -> PositivityReport {
    let mut pairs = Vec::new();
    for r1 in 1..r_max {
        for r2 in r1 + 1..=r_max {
            pairs.push((r1, r2));
        }
    }
    let per_pair = parallel_map(pairs, workers, |(r1, r2)| {
        let mut checked = 0u64;
        let mut violations = Vec::new();
        for x1 in 1..=x_max {
            for x2 in 1..=x_max {
                let q = SupportedQ::from_parts(vec![r1, r2], vec![x1, x2])
                    .expect("valid support");
                let l = ehrhart::ehrhart_from_hstar(&q.hstar(), q.dimension() as usize)
                    .expect("h* degree bounded by dimension");
                checked += 1;
                for (i, c) in l.coeffs().iter().enumerate() {
                    if !num_traits::Signed::is_positive(c) {
                        violations.push(PositivityViolation {
                            qspec: render_qspec(&q),
                            coefficient_index: i,
                        });
                    }
                }
            }
        }
        (checked, violations)
    });
    let mut report = PositivityReport::default();
    for (checked, mut v) in per_pair {
        report.checked += checked;
        report.violations.append(&mut v);
    }
    report
}

/// A two-support instance as `((r1, r2), (x1, x2))`.
pub type TwoSupportKey = ((u64, u64), (u64, u64));

/// The known exceptional Kronecker instances for two-support q (the search
/// output at r <= 40, x <= 100 not covered by the closed-form families).
pub fn known_exceptional() -> &'static [TwoSupportKey] {
    static ROWS: OnceLock<Vec<TwoSupportKey>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let raw = include_str!("../data/exceptional_kronecker.csv");
        raw.lines()
            .skip(1)
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                let f: Vec<u64> = line
                    .split(',')
                    .map(|v| v.trim().parse().expect("integer field"))
                    .collect();
                assert_eq!(f.len(), 4, "bad row: {line}");
                ((f[0], f[1]), (f[2], f[3]))
            })
            .collect()
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DiffReport {
    pub matched: Vec<TwoSupportKey>,
    pub missing: Vec<TwoSupportKey>,
    pub extra: Vec<TwoSupportKey>,
}

impl DiffReport {
    pub fn clean(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Compare the exceptional Kronecker records found by a search against the
/// known list restricted to the searched range.
pub fn diff_exceptional(records: &[SearchRecord], r_max: u64, x_max: u64) -> DiffReport {
    let mut expected: Vec<TwoSupportKey> = known_exceptional()
        .iter()
        .copied()
        .filter(|&((r1, r2), (x1, x2))| {
            r1 <= r_max && r2 <= r_max && x1 <= x_max && x2 <= x_max
        })
        .collect();
    expected.sort_unstable();
    let mut actual: Vec<TwoSupportKey> = records
        .iter()
        .filter(|rec| rec.is_exceptional())
        .map(|rec| ((rec.q.r()[0], rec.q.r()[1]), (rec.q.x()[0], rec.q.x()[1])))
        .collect();
    actual.sort_unstable();
    let mut report = DiffReport::default();
    for row in &expected {
        if actual.binary_search(row).is_ok() {
            report.matched.push(*row);
        } else {
            report.missing.push(*row);
        }
    }
    for row in &actual {
        if expected.binary_search(row).is_err() {
            report.extra.push(*row);
        }
    }
    report
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub const RECORD_CSV_HEADER: &str =
    "r,x,reflexive,ell,kronecker,cyclotomics,hstar_factorization,g_factorization,family_tag";

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn record_to_csv_row(rec: &SearchRecord) -> String {
    let cells = [
        csv_escape(&format!("({})", join_u64(rec.q.r()))),
        csv_escape(&format!("({})", join_u64(rec.q.x()))),
        rec.reflexive.to_string(),
        rec.ell.to_string(),
        rec.kronecker.to_string(),
        rec.cyclotomics
            .as_ref()
            .map_or("-".to_string(), |c| c.render()),
        rec.hstar_factorization
            .as_ref()
            .map_or("-".to_string(), |f| f.render()),
        rec.g_factorization
            .as_ref()
            .map_or("-".to_string(), |f| f.render()),
        rec.family_tag.map_or("-".to_string(), |t| t.as_str().to_string()),
    ];
    cells.join(",")
}

/// Deterministic CSV report, one row per record.
pub fn records_to_csv(records: &[SearchRecord]) -> String {
    let mut out = String::from(RECORD_CSV_HEADER);
    out.push('\n');
    for rec in records {
        out.push_str(&record_to_csv_row(rec));
        out.push('\n');
    }
    out
}

/// JSON-lines report.
pub fn records_to_jsonl(records: &[SearchRecord]) -> String {
    let mut out = String::new();
    for rec in records {
        out.push_str(&serde_json::to_string(rec).expect("serializable record"));
        out.push('\n');
    }
    out
}

/// Text rendering of a known-exceptional diff.
pub fn render_diff(diff: &DiffReport) -> String {
    let mut out = String::new();
    let fmt = |((r1, r2), (x1, x2)): &TwoSupportKey| {
        format!("r=({r1},{r2}) x=({x1},{x2})")
    };
    out.push_str(&format!("matched: {}\n", diff.matched.len()));
    for row in &diff.matched {
        out.push_str(&format!("  = {}\n", fmt(row)));
    }
    out.push_str(&format!("missing: {}\n", diff.missing.len()));
    for row in &diff.missing {
        out.push_str(&format!("  - {}\n", fmt(row)));
    }
    out.push_str(&format!("extra: {}\n", diff.extra.len()));
    for row in &diff.extra {
        out.push_str(&format!("  + {}\n", fmt(row)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fib_sequence_values() {
        let expect = [1u64, 2, 5, 13, 34, 89, 233, 610, 1597];
        for (n, &v) in expect.iter().enumerate() {
            assert_eq!(fib_sequence(n as u32), v);
        }
    }

    #[test]
    fn beatty_values() {
        // floor(i * phi) for i = 0..: 0, 1, 3, 4, 6, 8, 9, 11, 12, 14, 16
        let expect = [0u64, 1, 3, 4, 6, 8, 9, 11, 12, 14, 16];
        for (i, &v) in expect.iter().enumerate() {
            assert_eq!(beatty_floor(i as u64), v, "i={i}");
        }
        assert_eq!(beatty_floor(4), 6);
    }

    #[test]
    fn parallel_map_is_order_preserving() {
        let items: Vec<u64> = (0..1000).collect();
        let out1 = parallel_map(items.clone(), 1, |v| v * v);
        let out8 = parallel_map(items, 8, |v| v * v);
        assert_eq!(out1, out8);
        assert_eq!(out1[10], 100);
    }

    #[test]
    fn two_support_search_small() {
        let records = search_two_support(2, 3, 2);
        // r = (1, 2): reflexive multiplicities with x <= 3
        assert!(!records.is_empty());
        for rec in &records {
            assert!(rec.reflexive);
            // every reflexive q on (1, 2) is Kronecker via case 0
            assert!(rec.kronecker, "{:?}", rec.q);
            assert_eq!(rec.family_tag, Some(FamilyTag::Family(FamilyId::Case0)));
            let g = rec.q.g_poly().unwrap();
            assert_eq!(
                rec.g_factorization.as_ref().unwrap().expand().unwrap(),
                g
            );
        }
    }

    #[test]
    fn two_support_search_finds_exception() {
        let records = search_two_support(9, 15, 4);
        let exceptional: Vec<_> = records.iter().filter(|r| r.is_exceptional()).collect();
        assert!(exceptional
            .iter()
            .any(|r| r.q.r() == [2, 9] && r.q.x() == [4, 3]));
        // non-Kronecker records carry no factorization data
        for rec in &records {
            if !rec.kronecker {
                assert!(rec.cyclotomics.is_none());
                assert!(rec.family_tag.is_none());
            }
        }
    }

    #[test]
    fn kronecker_without_geomfact_excludes_25_instance() {
        // (2,5) x (7,5): h* factors even though g does not
        let records = search_two_support(5, 10, 2);
        for rec in &records {
            if rec.q.r() == [2, 5] && rec.q.x() == [7, 5] {
                assert!(rec.kronecker);
                assert!(rec.hstar_factorization.is_some());
                assert!(rec.g_factorization.is_none());
            }
        }
        assert!(find_kronecker_without_geomfact(4, 10, 2).is_empty());
    }

    #[test]
    fn three_support_search_finds_532_case1() {
        let records = search_three_support(5, 15, 2);
        let hit = records
            .iter()
            .find(|r| r.q.r() == [6, 10, 15] && r.q.x() == [4, 8, 3])
            .expect("case-1 instance present");
        assert!(hit.kronecker);
        assert_eq!(hit.family_tag, Some(FamilyTag::Family(FamilyId::S532C1)));
    }

    #[test]
    fn three_support_empty_below_smallest_triple() {
        assert!(search_three_support(3, 5, 1).is_empty());
    }

    #[test]
    fn classification_sweep_small() {
        let report = verify_classification_2odd(5, 6, 2);
        assert_eq!(report.checked, 4 * 6 * 7);
        assert!(report.disagreements.is_empty(), "{:?}", report.disagreements);
    }

    #[test]
    fn fibonacci_reports_small() {
        let reports = verify_fibonacci(3);
        assert_eq!(reports.len(), 3);
        for rep in &reports {
            assert!(rep.all_ok(), "n={} {:?}", rep.n, (rep.identities_ok, rep.factorization_ok, rep.boundary_ok, rep.stability_ok));
        }
        // diagonal shift: u(i1+1, i2+1) = 3 + u(i1, i2)
        let rep = &reports[1];
        for i1 in 0..rep.u_table.len() - 1 {
            for i2 in 0..rep.u_table[0].len() - 1 {
                assert_eq!(rep.u_table[i1 + 1][i2 + 1], 3 + rep.u_table[i1][i2]);
            }
        }
        assert_eq!(rep.u_table[0][0], 0);
        assert_eq!(rep.u_table[1][1], 3);
        assert_eq!(rep.u_table[2][2], 6);
    }

    #[test]
    fn family_sweep_small() {
        let report = verify_families(&FamilyBounds {
            a_max: 4,
            k_max: 2,
            c_max: 3,
            c532_max: 2,
            fib_max: 3,
        });
        assert!(report.checked > 40);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn positivity_sweep_small() {
        let report = verify_ehrhart_positivity(4, 4, 2);
        assert_eq!(report.checked, 6 * 16);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn known_exceptional_data() {
        let rows = known_exceptional();
        assert_eq!(rows.len(), 29);
        assert!(rows.contains(&((2, 9), (4, 3))));
        assert!(rows.contains(&((5, 7), (25, 7))));
        assert!(rows.contains(&((26, 33), (52, 11))));
        // every row is a reflexive q
        for &((r1, r2), (x1, x2)) in rows {
            let q = SupportedQ::from_parts(vec![r1, r2], vec![x1, x2]).unwrap();
            assert!(q.is_reflexive(), "({r1},{r2}) ({x1},{x2})");
        }
    }

    #[test]
    fn diff_roundtrip() {
        let records = search_two_support(9, 15, 4);
        let diff = diff_exceptional(&records, 9, 15);
        assert!(diff.matched.contains(&((2, 9), (4, 3))));
        assert!(diff.extra.is_empty(), "{:?}", diff.extra);
        assert!(diff.missing.is_empty(), "{:?}", diff.missing);
    }

    #[test]
    fn csv_shape() {
        let records = search_two_support(3, 5, 1);
        let csv = records_to_csv(&records);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), RECORD_CSV_HEADER);
        let first = lines.next().unwrap();
        assert!(first.starts_with("\"(1,2)\""), "{first}");
        let jsonl = records_to_jsonl(&records);
        let first: serde_json::Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
        assert_eq!(first["r"][0], 1);
        assert!(first["reflexive"].as_bool().unwrap());
    }

    #[test]
    fn reports_identical_across_worker_counts() {
        let base = records_to_csv(&search_two_support(6, 8, 1));
        for workers in [2, 4, 8] {
            assert_eq!(base, records_to_csv(&search_two_support(6, 8, workers)));
        }
    }
}
