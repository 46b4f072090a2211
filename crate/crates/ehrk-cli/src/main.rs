//! `ehrk`: exact h*/g-polynomial computations, Kronecker and factorization
//! tests, Ehrhart polynomials, and the exhaustive search harnesses for the
//! simplices Delta_(1,q).
//!
//! Exit codes: 0 success, 1 a verification subcommand reported violations,
//! 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ehrk_core::ehrhart;
use ehrk_core::explorer::{self, FamilyBounds};
use ehrk_core::factorizer::find_geometric_factorization;
use ehrk_core::polyring::{is_kronecker, IntPoly};
use ehrk_core::simplex::{parse_qspec, render_qspec, SupportedQ};

#[derive(Parser)]
#[command(
    name = "ehrk",
    version,
    about = "Exact h*- and g-polynomials of the simplices Delta_(1,q): reflexivity, Kronecker \
             tests, geometric-series factorization, Ehrhart polynomials, and search harnesses.",
    after_help = "q-specs are comma-separated r^x terms (\"2^7,5^5\") or explicit multisets \
                  (\"2,2,2,5\"). EHRK_THREADS caps worker parallelism for the searches."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (csv applies to search2/search3)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// h*-polynomial of Delta_(1,q)
    Hstar { qspec: String },
    /// g-polynomial: h* = (1 + z + ... + z^{ell-1}) * g
    G { qspec: String },
    /// The quotient ell = (1 + sum q_i) / lcm(r)
    Ell { qspec: String },
    /// Is Delta_(1,q) reflexive?
    Reflexive { qspec: String },
    /// Canonical desirable s-division of the multiplicity vector
    Division { qspec: String },
    /// Kronecker test (cyclotomic factorization) of h*, or of --poly
    Kronecker {
        qspec: Option<String>,
        /// Raw polynomial as ascending coefficients, e.g. "1,2,2,1"
        #[arg(long, value_name = "COEFFS")]
        poly: Option<String>,
    },
    /// Geometric-series factorization of h* and g, or of --poly
    Factor {
        qspec: Option<String>,
        /// Raw polynomial as ascending coefficients, e.g. "1,2,2,1"
        #[arg(long, value_name = "COEFFS")]
        poly: Option<String>,
    },
    /// Ehrhart polynomial L(t) with exact rational coefficients
    Ehrhart { qspec: String },
    /// Brute-force lattice point count of t * Delta_(1,q) (oracle scale)
    Count {
        qspec: String,
        #[arg(short, long)]
        t: u32,
    },
    /// Classify all reflexive two-support q with r <= rmax, x <= xmax
    Search2 {
        #[arg(long)]
        rmax: Option<u64>,
        #[arg(long)]
        xmax: Option<u64>,
        /// Widest bounds (r <= 40, x <= 100); takes a little longer
        #[arg(long)]
        full_scale: bool,
        /// Only records whose h* is Kronecker without a geometric factorization
        #[arg(long)]
        kronecker_no_geomfact: bool,
        /// Diff the exceptional records against the known list (exit 1 on mismatch)
        #[arg(long)]
        diff_exceptional: bool,
    },
    /// Classify three-support q derived from pairwise-coprime s-triples
    Search3 {
        #[arg(long)]
        smax: Option<u64>,
        #[arg(long)]
        xmax: Option<u64>,
        /// Widest bounds (s <= 11, x <= 50)
        #[arg(long)]
        full_scale: bool,
    },
    /// Verify the (2, 2k-1) classification predicate against the search
    Classify2odd {
        #[arg(long)]
        kmax: Option<u64>,
        #[arg(long)]
        cmax: Option<u64>,
    },
    /// Verify the Fibonacci family (identities, factorization, boundaries)
    Fib {
        #[arg(long)]
        nmax: Option<u32>,
        /// Widest bound (n <= 7)
        #[arg(long)]
        full_scale: bool,
    },
    /// Verify every closed-form family instance in a parameter box
    Families {
        #[arg(long)]
        amax: Option<u64>,
        #[arg(long)]
        kmax: Option<u64>,
        #[arg(long)]
        cmax: Option<u64>,
        #[arg(long)]
        nmax: Option<u32>,
        /// Larger parameter box
        #[arg(long)]
        full_scale: bool,
    },
    /// Verify Ehrhart positivity over all two-support q in range
    Positivity {
        #[arg(long)]
        rmax: Option<u64>,
        #[arg(long)]
        xmax: Option<u64>,
        /// Widest range (r <= 15, x <= 24)
        #[arg(long)]
        full_scale: bool,
    },
}

enum CliError {
    /// usage or input error -> exit 2
    Input(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Input(e.to_string())
    }
}

struct Outcome {
    payload: String,
    failed_checks: bool,
}

impl Outcome {
    fn ok(payload: String) -> Self {
        Outcome {
            payload,
            failed_checks: false,
        }
    }
}

fn parse_poly_arg(spec: &str) -> Result<IntPoly, CliError> {
    let coeffs: Result<Vec<i64>, _> = spec
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect();
    match coeffs {
        Ok(c) if !c.is_empty() => Ok(IntPoly::from_coeffs(c)),
        _ => Err(CliError::Input(format!(
            "cannot parse polynomial coefficients from '{spec}'"
        ))),
    }
}

fn q_from(qspec: &str) -> Result<SupportedQ, CliError> {
    let q = parse_qspec(qspec)?;
    if q.qsum() > 100_000_000 {
        return Err(CliError::Input(format!(
            "q-vector sum {} is beyond desk scale (the h* enumeration walks 0..=sum)",
            q.qsum()
        )));
    }
    Ok(q)
}

fn poly_output(f: &IntPoly, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(f.render()),
        Format::Json => Ok(serde_json::to_string(f).expect("serializable")),
        Format::Csv => unreachable!("rejected above"),
    }
}

fn factorization_name(f: &Option<ehrk_core::GeomFactorization>) -> String {
    f.as_ref().map_or("none".to_string(), |f| f.render())
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let workers = explorer::default_workers();
    let format = cli.format;
    if format == Format::Csv
        && !matches!(cli.command, Command::Search2 { .. } | Command::Search3 { .. })
    {
        return Err(CliError::Input(
            "--format csv is only supported for search2/search3".to_string(),
        ));
    }
    match cli.command {
        Command::Hstar { qspec } => {
            let q = q_from(&qspec)?;
            Ok(Outcome::ok(poly_output(&q.hstar(), format)?))
        }
        Command::G { qspec } => {
            let q = q_from(&qspec)?;
            Ok(Outcome::ok(poly_output(&q.g_poly()?, format)?))
        }
        Command::Ell { qspec } => {
            let q = q_from(&qspec)?;
            let ell = q.ell()?;
            Ok(Outcome::ok(match format {
                Format::Text => ell.to_string(),
                Format::Json => format!("{{\"ell\":{ell}}}"),
                Format::Csv => unreachable!("rejected above"),
            }))
        }
        Command::Reflexive { qspec } => {
            let q = q_from(&qspec)?;
            let v = q.is_reflexive();
            Ok(Outcome::ok(match format {
                Format::Text => v.to_string(),
                Format::Json => format!("{{\"reflexive\":{v}}}"),
                Format::Csv => unreachable!("rejected above"),
            }))
        }
        Command::Division { qspec } => {
            let q = q_from(&qspec)?;
            let div = q.desirable_division()?;
            Ok(Outcome::ok(match format {
                Format::Text => format!(
                    "c = {:?}, rho = {:?}, desirable = {}",
                    div.c, div.rho, div.desirable
                ),
                Format::Json => serde_json::to_string(&div).expect("serializable"),
                Format::Csv => unreachable!("rejected above"),
            }))
        }
        Command::Kronecker { qspec, poly } => {
            let (label, f) = target_poly(qspec, poly)?;
            let result = is_kronecker(&f)?;
            Ok(Outcome::ok(match format {
                Format::Text => match result {
                    Some(m) => format!("true: {} = {}", label, m.render()),
                    None => "false".to_string(),
                },
                Format::Json => serde_json::json!({
                    "kronecker": result.is_some(),
                    "cyclotomics": result.map(|m| m.entries),
                })
                .to_string(),
                Format::Csv => unreachable!("rejected above"),
            }))
        }
        Command::Factor { qspec, poly } => match (qspec, poly) {
            (Some(qspec), None) => {
                let q = q_from(&qspec)?;
                let h = q.hstar();
                let g = q.g_poly()?;
                let fh = find_geometric_factorization(&h)?;
                let fg = find_geometric_factorization(&g)?;
                Ok(Outcome::ok(match format {
                    Format::Text => format!(
                        "hstar: {}\ng: {}",
                        factorization_name(&fh),
                        factorization_name(&fg)
                    ),
                    Format::Json => serde_json::json!({
                        "hstar": fh,
                        "g": fg,
                    })
                    .to_string(),
                    Format::Csv => {
                        return Err(CliError::Input(
                            "--format csv is only supported for search2/search3".to_string(),
                        ))
                    }
                }))
            }
            (None, Some(poly)) => {
                let f = parse_poly_arg(&poly)?;
                let found = find_geometric_factorization(&f)?;
                Ok(Outcome::ok(match format {
                    Format::Text => factorization_name(&found),
                    Format::Json => serde_json::json!({ "factorization": found }).to_string(),
                    Format::Csv => {
                        return Err(CliError::Input(
                            "--format csv is only supported for search2/search3".to_string(),
                        ))
                    }
                }))
            }
            _ => Err(CliError::Input(
                "factor takes either a q-spec or --poly".to_string(),
            )),
        },
        Command::Ehrhart { qspec } => {
            let q = q_from(&qspec)?;
            let l = ehrhart::ehrhart_from_hstar(&q.hstar(), q.dimension() as usize)?;
            Ok(Outcome::ok(match format {
                Format::Text => l.render(),
                Format::Json => l.to_json().to_string(),
                Format::Csv => unreachable!("rejected above"),
            }))
        }
        Command::Count { qspec, t } => {
            let q = q_from(&qspec)?;
            let count = ehrhart::count_lattice_points(&q, t)?;
            Ok(Outcome::ok(match format {
                Format::Text => count.to_string(),
                Format::Json => format!("{{\"count\":{count}}}"),
                Format::Csv => unreachable!("rejected above"),
            }))
        }
        Command::Search2 {
            rmax,
            xmax,
            full_scale,
            kronecker_no_geomfact,
            diff_exceptional,
        } => {
            let (dr, dx) = if full_scale { (40, 100) } else { (20, 60) };
            let (rmax, xmax) = (rmax.unwrap_or(dr), xmax.unwrap_or(dx));
            let mut records = explorer::search_two_support(rmax, xmax, workers);
            if kronecker_no_geomfact {
                records.retain(|rec| rec.kronecker && rec.hstar_factorization.is_none());
            }
            let mut payload = render_records(&records, format);
            let mut failed_checks = false;
            if diff_exceptional {
                let diff = explorer::diff_exceptional(&records, rmax, xmax);
                payload.push_str(&explorer::render_diff(&diff));
                if diff.clean() {
                    payload.push_str(&format!("OK: {} exceptional rows matched\n", diff.matched.len()));
                } else {
                    payload.push_str("FAIL: exceptional records differ from the known list\n");
                    failed_checks = true;
                }
            }
            Ok(Outcome {
                payload,
                failed_checks,
            })
        }
        Command::Search3 {
            smax,
            xmax,
            full_scale,
        } => {
            let (ds, dx) = if full_scale { (11, 50) } else { (7, 25) };
            let (smax, xmax) = (smax.unwrap_or(ds), xmax.unwrap_or(dx));
            let records = explorer::search_three_support(smax, xmax, workers);
            Ok(Outcome::ok(render_records(&records, format)))
        }
        Command::Classify2odd { kmax, cmax } => {
            let (kmax, cmax) = (kmax.unwrap_or(10), cmax.unwrap_or(12));
            let report = explorer::verify_classification_2odd(kmax, cmax, workers);
            let mut payload = String::new();
            for d in &report.disagreements {
                payload.push_str(&format!(
                    "disagreement: k={} c1={} c2={} predicted={} search={}\n",
                    d.k, d.c1, d.c2, d.predicted, d.found
                ));
            }
            let ok = report.disagreements.is_empty();
            payload.push_str(&if ok {
                format!("OK: {} checks\n", report.checked)
            } else {
                format!("FAIL: {} disagreements\n", report.disagreements.len())
            });
            Ok(Outcome {
                payload,
                failed_checks: !ok,
            })
        }
        Command::Fib { nmax, full_scale } => {
            let nmax = nmax.unwrap_or(if full_scale { 7 } else { 5 });
            if nmax > 9 {
                return Err(CliError::Input(format!(
                    "fib index {nmax} is too large: the n-th u-table has a_n * a_{{n+1}} entries; use --nmax 9 or less"
                )));
            }
            let reports = explorer::verify_fibonacci(nmax);
            let all_ok = reports.iter().all(|r| r.all_ok());
            let payload = match format {
                Format::Json => {
                    let mut s = String::new();
                    for r in &reports {
                        s.push_str(&serde_json::to_string(r).expect("serializable"));
                        s.push('\n');
                    }
                    s
                }
                _ => {
                    let mut s = String::new();
                    for r in &reports {
                        s.push_str(&format!(
                            "n={} identities={} factorization={} boundary={} stability={}\n",
                            r.n,
                            r.identities_ok,
                            r.factorization_ok,
                            r.boundary_ok,
                            r.stability_ok
                        ));
                    }
                    s.push_str(&if all_ok {
                        format!("OK: {} checks\n", reports.len())
                    } else {
                        "FAIL: see report lines above\n".to_string()
                    });
                    s
                }
            };
            Ok(Outcome {
                payload,
                failed_checks: !all_ok,
            })
        }
        Command::Families {
            amax,
            kmax,
            cmax,
            nmax,
            full_scale,
        } => {
            let mut bounds = if full_scale {
                FamilyBounds::full_scale()
            } else {
                FamilyBounds::desk_scale()
            };
            if let Some(a) = amax {
                bounds.a_max = a;
            }
            if let Some(k) = kmax {
                bounds.k_max = k;
            }
            if let Some(c) = cmax {
                bounds.c_max = c;
                bounds.c532_max = c;
            }
            if let Some(n) = nmax {
                bounds.fib_max = n;
            }
            let report = explorer::verify_families(&bounds);
            let mut payload = String::new();
            for f in &report.failures {
                payload.push_str(&format!("failure: {f}\n"));
            }
            let ok = report.failures.is_empty();
            payload.push_str(&if ok {
                format!("OK: {} checks\n", report.checked)
            } else {
                format!("FAIL: {} failures\n", report.failures.len())
            });
            Ok(Outcome {
                payload,
                failed_checks: !ok,
            })
        }
        Command::Positivity {
            rmax,
            xmax,
            full_scale,
        } => {
            let (dr, dx) = if full_scale { (15, 24) } else { (8, 10) };
            let (rmax, xmax) = (rmax.unwrap_or(dr), xmax.unwrap_or(dx));
            let report = explorer::verify_ehrhart_positivity(rmax, xmax, workers);
            let mut payload = String::new();
            for v in &report.violations {
                payload.push_str(&format!(
                    "violation: q={} coefficient index {}\n",
                    v.qspec, v.coefficient_index
                ));
            }
            let ok = report.violations.is_empty();
            payload.push_str(&if ok {
                format!("OK: {} checks\n", report.checked)
            } else {
                format!("FAIL: {} violations\n", report.violations.len())
            });
            Ok(Outcome {
                payload,
                failed_checks: !ok,
            })
        }
    }
}

fn target_poly(
    qspec: Option<String>,
    poly: Option<String>,
) -> Result<(String, IntPoly), CliError> {
    match (qspec, poly) {
        (Some(qspec), None) => {
            let q = q_from(&qspec)?;
            let f = q.hstar();
            Ok((format!("hstar({})", render_qspec(&q)), f))
        }
        (None, Some(poly)) => {
            let f = parse_poly_arg(&poly)?;
            Ok((f.render(), f))
        }
        _ => Err(CliError::Input(
            "expected either a q-spec or --poly".to_string(),
        )),
    }
}

fn render_records(records: &[explorer::SearchRecord], format: Format) -> String {
    match format {
        Format::Csv => explorer::records_to_csv(records),
        Format::Json => explorer::records_to_jsonl(records),
        Format::Text => {
            let kronecker = records.iter().filter(|r| r.kronecker).count();
            let mut out = String::new();
            out.push_str(&format!(
                "records: {}\nkronecker: {}\n",
                records.len(),
                kronecker
            ));
            let exceptional: Vec<_> = records.iter().filter(|r| r.is_exceptional()).collect();
            out.push_str(&format!("exceptional: {}\n", exceptional.len()));
            for rec in exceptional {
                out.push_str(&format!(
                    "  r=({}) x=({}) hstar_fact={} g_fact={}\n",
                    rec.q
                        .r()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    rec.q
                        .x()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    factorization_name(&rec.hstar_factorization),
                    factorization_name(&rec.g_factorization),
                ));
            }
            out
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    match run(cli) {
        Ok(outcome) => {
            let emitted = if let Some(path) = out_path {
                std::fs::write(&path, &outcome.payload)
                    .map_err(|e| eprintln!("ehrk: cannot write {}: {e}", path.display()))
                    .is_ok()
            } else {
                print!("{}", outcome.payload);
                if !outcome.payload.ends_with('\n') && !outcome.payload.is_empty() {
                    println!();
                }
                true
            };
            if !emitted {
                ExitCode::from(2)
            } else if outcome.failed_checks {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("ehrk: {msg}");
            ExitCode::from(2)
        }
    }
}
