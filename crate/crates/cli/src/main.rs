//! Command-line front end: parse a job, dispatch to the library, render
//! the report as text, JSON or CSV, and cache the expensive results.

mod cache;
mod report;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use ordeal::algebra::make_algebra;
use ordeal::classes::icm::{av_order, icm_count, matrix_conjugacy_classes};
use ordeal::classes::picard::{pic_context, pic_order, PicParams};
use ordeal::classes::principal::SearchParams;
use ordeal::classes::weak::weak_class_count;
use ordeal::cmtype::{global_type, type_at_prime};
use ordeal::compare::{gorenstein_profile, trace_ideal};
use ordeal::order::dim_quotient_at_prime;
use ordeal::overorders::overorders;
use ordeal::poly::ZPoly;
use ordeal::{Error, Order};
use rayon::prelude::*;
use report::{
    cert_string, AvReport, CompareReport, CompareRow, IcmReportOut, IcmRowOut,
    MatrixClassesReport, OverordersReport, PicReport, PrimeRow, PrimesReport, Report, TypeCountRow,
    TypeReport, WkReport, WkRow, SCHEMA_VERSION,
};
use serde::Serialize;
use std::any::Any;
use std::collections::BTreeMap;
use std::panic::AssertUnwindSafe;
use std::path::PathBuf;
use std::sync::mpsc;
use std::time::Duration;

const EXIT_PARSE: i32 = 2;
const EXIT_FACTORING: i32 = 3;
const EXIT_CONDITIONAL: i32 = 4;
const EXIT_TIMEOUT: i32 = 5;

#[derive(Parser)]
#[command(
    name = "ordeal",
    version,
    about = "Orders in etale algebras over Q: types, overorders, weak classes, Picard groups and class monoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: GlobalFlags,
}

#[derive(Args, Clone)]
struct GlobalFlags {
    /// Monic integer polynomial, ascending coefficients: "c0,c1,...,1"
    #[arg(long, global = true, env = "ORDEAL_POLY")]
    poly: Option<String>,

    /// Prime power for av-classes
    #[arg(long, global = true, env = "ORDEAL_Q")]
    q: Option<u64>,

    /// Emit the report as JSON
    #[arg(long, global = true, env = "ORDEAL_JSON", conflicts_with = "csv")]
    json: bool,

    /// Emit the report as CSV
    #[arg(long, global = true, env = "ORDEAL_CSV")]
    csv: bool,

    /// Directory for cached results
    #[arg(long, global = true, env = "ORDEAL_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads; 0 keeps the library default
    #[arg(long, global = true, env = "ORDEAL_THREADS", default_value_t = 0)]
    threads: usize,

    /// Re-run every redundant cross-check; any disagreement aborts
    #[arg(long, global = true, env = "ORDEAL_VERIFY")]
    verify: bool,

    /// Exit nonzero if any reported count is conditional on a search bound
    #[arg(long, global = true, env = "ORDEAL_REQUIRE_EXACT")]
    require_exact: bool,

    /// Bound for class-number, unit and ideal-enumeration searches
    #[arg(long, global = true, env = "ORDEAL_SEARCH_BOUND")]
    search_bound: Option<u64>,

    /// Bits of precision for numeric embeddings
    #[arg(long, global = true, env = "ORDEAL_PRECISION")]
    precision: Option<u32>,

    /// Wall-clock limit in seconds
    #[arg(long, global = true, env = "ORDEAL_TIMEOUT")]
    timeout: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Cohen-Macaulay type and duality profile of the order Z[x]/(f)
    Type,
    /// Non-invertible maximal ideals with their residue data
    Primes,
    /// Count overorders by type, with the Gorenstein count
    Overorders,
    /// Weak equivalence classes fibered over every overorder
    Wk,
    /// Picard group of the order, with certification
    Pic,
    /// Ideal class monoid size, fibered over multiplicator rings
    Icm,
    /// Conjugacy classes of integer matrices with characteristic polynomial f
    MatrixClasses,
    /// Isomorphism classes of abelian varieties in an ordinary isogeny class
    AvClasses,
    /// Gorenstein / nearly Gorenstein / almost Gorenstein comparison
    Compare,
}

struct Failure {
    code: &'static str,
    exit: i32,
    message: String,
}

impl Failure {
    fn parse(msg: impl Into<String>) -> Failure {
        Failure { code: "parse", exit: EXIT_PARSE, message: msg.into() }
    }

    fn of_error(e: &Error) -> Failure {
        let (code, exit) = match e {
            Error::InvalidPolynomial(_) | Error::Precondition(_) => ("parse", EXIT_PARSE),
            Error::FactoringFailure(_) | Error::PrimeTooLarge(_) => ("factoring", EXIT_FACTORING),
            Error::SearchBound(_) => ("search-bound", 1),
            _ => ("internal", 1),
        };
        Failure { code, exit, message: e.to_string() }
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    if cli.flags.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.flags.threads)
            .build_global();
    }
    ordeal::verify::set_enabled(cli.flags.verify);
    let json = cli.flags.json;
    match execute(cli.command, cli.flags) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if json {
                let env = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "error": { "code": f.code, "message": f.message },
                });
                println!("{}", serde_json::to_string_pretty(&env).expect("serializes"));
            }
            f.exit
        }
    }
}

fn execute(cmd: Command, flags: GlobalFlags) -> Result<(), Failure> {
    let src = flags
        .poly
        .clone()
        .ok_or_else(|| Failure::parse("--poly is required"))?;
    let f = parse_poly(&src)?;
    let poly = canonical_poly(&f);
    // validate up front so every later path may assume a legal algebra
    make_algebra(&f).map_err(|e| Failure::of_error(&e))?;
    match cmd {
        Command::Type => drive("type", &poly, None, &f, &flags, cmd_type),
        Command::Primes => drive("primes", &poly, None, &f, &flags, cmd_primes),
        Command::Overorders => drive("overorders", &poly, None, &f, &flags, cmd_overorders),
        Command::Wk => drive("wk", &poly, None, &f, &flags, cmd_wk),
        Command::Pic => drive("pic", &poly, None, &f, &flags, cmd_pic),
        Command::Icm => drive("icm", &poly, None, &f, &flags, cmd_icm),
        Command::MatrixClasses => {
            drive("matrix-classes", &poly, None, &f, &flags, cmd_matrix_classes)
        }
        Command::AvClasses => {
            let q = flags
                .q
                .ok_or_else(|| Failure::parse("--q is required for av-classes"))?;
            drive("av-classes", &poly, Some(q), &f, &flags, cmd_av_classes)
        }
        Command::Compare => drive("compare", &poly, None, &f, &flags, cmd_compare),
    }
}

/// The leading 1 must be written out, so a typo cannot silently shift
/// the degree.
fn parse_poly(src: &str) -> Result<ZPoly, Failure> {
    let explicit_leading_one = src
        .rsplit(',')
        .next()
        .map(|t| t.trim() == "1")
        .unwrap_or(false);
    if !explicit_leading_one {
        return Err(Failure::parse(
            "polynomial must be monic with the leading coefficient written as 1",
        ));
    }
    let f = ZPoly::parse(src).map_err(|e| Failure::of_error(&e))?;
    if !f.leading().is_one() {
        return Err(Failure::parse(
            "polynomial must be monic with the leading coefficient written as 1",
        ));
    }
    Ok(f)
}

fn canonical_poly(f: &ZPoly) -> String {
    (0..=f.degree())
        .map(|i| f.coeff(i).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn search_params(flags: &GlobalFlags) -> SearchParams {
    let mut p = SearchParams::default();
    if let Some(bits) = flags.precision {
        p.precision = bits;
    }
    p
}

fn pic_params(flags: &GlobalFlags) -> PicParams {
    let mut p = PicParams { search: search_params(flags), ..PicParams::default() };
    if let Some(b) = flags.search_bound {
        p.class_bound = b;
        p.unit_level = BigRational::from(BigInt::from(b));
    }
    p
}

/// Run one subcommand: consult the cache, otherwise compute on a worker
/// thread under the timeout, store, gate on --require-exact, render.
fn drive<T, F>(
    kind: &'static str,
    poly: &str,
    q: Option<u64>,
    f: &ZPoly,
    flags: &GlobalFlags,
    job: F,
) -> Result<(), Failure>
where
    T: Report + Send + 'static,
    F: FnOnce(&ZPoly, &GlobalFlags) -> Result<T, Error> + Send + 'static,
{
    let key = cache::CacheKey {
        kind,
        poly,
        q,
        search_bound: flags.search_bound,
        precision: flags.precision,
    };

    let mut body: Option<T> = None;
    if let Some(dir) = &flags.cache_dir {
        // --verify means "recompute and re-check", so skip the read
        if !flags.verify {
            if let Some(payload) = cache::get(dir, &key) {
                match serde_json::from_value::<T>(payload) {
                    Ok(b) => body = Some(b),
                    Err(_) => eprintln!("warning: cache entry for {kind} has a stale shape"),
                }
            }
        }
    }

    let body = match body {
        Some(b) => b,
        None => {
            let b = compute(f.clone(), flags.clone(), flags.timeout, job)?;
            if let Some(dir) = &flags.cache_dir {
                let payload = serde_json::to_value(&b).expect("report serializes");
                cache::put(dir, &key, &payload);
            }
            b
        }
    };

    if flags.require_exact && body.conditional() {
        return Err(Failure {
            code: "conditional",
            exit: EXIT_CONDITIONAL,
            message: "result is conditional on a search bound and --require-exact is set".into(),
        });
    }

    render(kind, poly, q, &body, flags);
    Ok(())
}

/// Run the job on its own thread so a timeout can fire and a panic
/// (including a failed cross-check) comes back as an orderly error.
fn compute<T, F>(
    f: ZPoly,
    flags: GlobalFlags,
    timeout: Option<u64>,
    job: F,
) -> Result<T, Failure>
where
    T: Send + 'static,
    F: FnOnce(&ZPoly, &GlobalFlags) -> Result<T, Error> + Send + 'static,
{
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let out = std::panic::catch_unwind(AssertUnwindSafe(|| job(&f, &flags)));
        let _ = tx.send(out.map_err(panic_text));
    });
    let outcome = match timeout {
        Some(secs) => match rx.recv_timeout(Duration::from_secs(secs)) {
            Ok(v) => v,
            Err(mpsc::RecvTimeoutError::Timeout) => {
                return Err(Failure {
                    code: "timeout",
                    exit: EXIT_TIMEOUT,
                    message: format!("computation exceeded {secs}s"),
                })
            }
            Err(mpsc::RecvTimeoutError::Disconnected) => Err("worker thread died".to_string()),
        },
        None => rx.recv().unwrap_or_else(|_| Err("worker thread died".to_string())),
    };
    match outcome {
        Ok(Ok(body)) => Ok(body),
        Ok(Err(e)) => Err(Failure::of_error(&e)),
        Err(panic_msg) => {
            let code = if panic_msg.contains("verification failed") {
                "verification"
            } else {
                "panic"
            };
            Err(Failure { code, exit: 1, message: panic_msg })
        }
    }
}

fn panic_text(p: Box<dyn Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_string()
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: &'static str,
    command: &'a str,
    poly: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<String>,
    report: &'a T,
}

fn render<T: Report>(kind: &str, poly: &str, q: Option<u64>, body: &T, flags: &GlobalFlags) {
    if flags.json {
        let env = Envelope {
            schema_version: SCHEMA_VERSION,
            command: kind,
            poly,
            q: q.map(|v| v.to_string()),
            report: body,
        };
        println!("{}", serde_json::to_string_pretty(&env).expect("serializes"));
    } else if flags.csv {
        print!("{}", body.csv());
    } else {
        print!("{}", body.text());
    }
}

fn cmd_type(f: &ZPoly, _flags: &GlobalFlags) -> Result<TypeReport, Error> {
    let alg = make_algebra(f)?;
    let s = Order::equation_order(&alg);
    let p = gorenstein_profile(&s)?;
    Ok(TypeReport {
        degree: alg.dim(),
        discriminant: alg.disc().to_string(),
        index_in_maximal: s.index_in_maximal()?.to_string(),
        maximal: s.is_maximal()?,
        global_type: p.global_type,
        gorenstein: p.gorenstein,
        nearly_gorenstein: p.nearly_gorenstein,
        almost_gorenstein: p.almost_gorenstein,
    })
}

fn cmd_primes(f: &ZPoly, _flags: &GlobalFlags) -> Result<PrimesReport, Error> {
    let alg = make_algebra(f)?;
    let s = Order::equation_order(&alg);
    let ok = Order::maximal_order(&alg)?;
    let singular = s.singular_primes()?;
    let primes = s.noninvertible_primes()?;
    let rows = primes
        .iter()
        .map(|pr| PrimeRow {
            p: pr.p().to_string(),
            residue_degree: pr.residue_degree(),
            dim_maximal_quotient: dim_quotient_at_prime(ok.lattice(), pr),
            local_type: type_at_prime(&s, pr),
        })
        .collect::<Vec<_>>();
    Ok(PrimesReport {
        singular_primes: singular.iter().map(|p| p.to_string()).collect(),
        count: rows.len().to_string(),
        primes: rows,
    })
}

fn cmd_overorders(f: &ZPoly, _flags: &GlobalFlags) -> Result<OverordersReport, Error> {
    let alg = make_algebra(f)?;
    let u = Order::equation_order(&alg);
    let all = overorders(&u)?;
    let types = all
        .par_iter()
        .map(global_type)
        .collect::<ordeal::Result<Vec<_>>>()?;
    let mut by_type = BTreeMap::<usize, u64>::new();
    for t in &types {
        *by_type.entry(*t).or_default() += 1;
    }
    Ok(OverordersReport {
        count: all.len().to_string(),
        gorenstein_count: by_type.get(&1).copied().unwrap_or(0).to_string(),
        max_type: by_type.keys().max().copied().unwrap_or(1),
        by_type: by_type
            .iter()
            .map(|(ty, n)| TypeCountRow { global_type: *ty, orders: n.to_string() })
            .collect(),
    })
}

fn cmd_wk(f: &ZPoly, _flags: &GlobalFlags) -> Result<WkReport, Error> {
    let alg = make_algebra(f)?;
    let u = Order::equation_order(&alg);
    let all = overorders(&u)?;
    let counts = all
        .par_iter()
        .map(weak_class_count)
        .collect::<ordeal::Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(all.len());
    let mut total = BigInt::from(0);
    for (i, (t, w)) in all.iter().zip(&counts).enumerate() {
        total += w;
        rows.push(WkRow {
            position: i,
            index_in_maximal: t.index_in_maximal()?.to_string(),
            weak_classes: w.to_string(),
        });
    }
    Ok(WkReport {
        order_count: all.len().to_string(),
        total: total.to_string(),
        orders: rows,
    })
}

fn cmd_pic(f: &ZPoly, flags: &GlobalFlags) -> Result<PicReport, Error> {
    let alg = make_algebra(f)?;
    let params = pic_params(flags);
    let ctx = pic_context(&alg, &params)?;
    let s = Order::equation_order(&alg);
    let g = pic_order(&ctx, &s)?;
    Ok(PicReport {
        pic: g.size.to_string(),
        certification: cert_string(&g.certification),
        h_maximal: ctx.h.to_string(),
        h_certification: cert_string(&ctx.h_certification),
        unit_generators: ctx.unit_gens.len(),
    })
}

fn cmd_icm(f: &ZPoly, flags: &GlobalFlags) -> Result<IcmReportOut, Error> {
    let alg = make_algebra(f)?;
    let s = Order::equation_order(&alg);
    let rpt = icm_count(&s, &pic_params(flags))?;
    let mut rows = Vec::with_capacity(rpt.rows.len());
    for (i, r) in rpt.rows.iter().enumerate() {
        rows.push(IcmRowOut {
            position: i,
            index_in_maximal: r.order.index_in_maximal()?.to_string(),
            weak_classes: r.weak.to_string(),
            pic: r.pic.size.to_string(),
        });
    }
    Ok(IcmReportOut {
        total: rpt.total.to_string(),
        certification: cert_string(&rpt.certification),
        order_count: rpt.rows.len().to_string(),
        orders: rows,
    })
}

fn cmd_matrix_classes(f: &ZPoly, flags: &GlobalFlags) -> Result<MatrixClassesReport, Error> {
    let mats = matrix_conjugacy_classes(f, flags.search_bound, &search_params(flags))?;
    let representatives = mats
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|e| e.to_string()).collect())
                .collect()
        })
        .collect();
    Ok(MatrixClassesReport { count: mats.len().to_string(), representatives })
}

fn cmd_av_classes(f: &ZPoly, flags: &GlobalFlags) -> Result<AvReport, Error> {
    let q = flags.q.expect("checked before dispatch");
    let alg = make_algebra(f)?;
    let s = av_order(&alg, q)?;
    let rpt = icm_count(&s, &pic_params(flags))?;
    Ok(AvReport {
        q: q.to_string(),
        total: rpt.total.to_string(),
        certification: cert_string(&rpt.certification),
        order_count: rpt.rows.len().to_string(),
    })
}

fn cmd_compare(f: &ZPoly, _flags: &GlobalFlags) -> Result<CompareReport, Error> {
    let alg = make_algebra(f)?;
    let u = Order::equation_order(&alg);
    let all = overorders(&u)?;
    let rows = all
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let p = gorenstein_profile(t)?;
            Ok(CompareRow {
                position: i,
                index_in_maximal: t.index_in_maximal()?.to_string(),
                global_type: p.global_type,
                gorenstein: p.gorenstein,
                nearly_gorenstein: p.nearly_gorenstein,
                almost_gorenstein: p.almost_gorenstein,
                trace_ideal_is_ring: trace_ideal(t) == *t.lattice(),
            })
        })
        .collect::<ordeal::Result<Vec<_>>>()?;
    let count = |sel: fn(&CompareRow) -> bool| rows.iter().filter(|r| sel(r)).count().to_string();
    Ok(CompareReport {
        order_count: rows.len().to_string(),
        gorenstein_count: count(|r| r.gorenstein),
        nearly_gorenstein_count: count(|r| r.nearly_gorenstein),
        almost_gorenstein_count: count(|r| r.almost_gorenstein),
        orders: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_must_spell_out_the_leading_one() {
        assert!(parse_poly("5,0,1").is_ok());
        assert!(parse_poly(" 5 , 0 , 1 ").is_ok());
        assert!(parse_poly("5,0,2").is_err());
        assert!(parse_poly("5,0,1,0").is_err());
        assert!(parse_poly("5,0").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^2+5").is_err());
    }

    #[test]
    fn canonical_form_round_trips() {
        let f = parse_poly("5, 0, 1").unwrap();
        assert_eq!(canonical_poly(&f), "5,0,1");
    }

    #[test]
    fn search_bound_feeds_both_class_and_unit_levels() {
        let mut flags = GlobalFlags {
            poly: None,
            q: None,
            json: false,
            csv: false,
            cache_dir: None,
            threads: 0,
            verify: false,
            require_exact: false,
            search_bound: Some(100),
            precision: None,
            timeout: None,
        };
        let p = pic_params(&flags);
        assert_eq!(p.class_bound, 100);
        assert_eq!(p.unit_level, BigRational::from(BigInt::from(100)));
        flags.precision = Some(96);
        assert_eq!(search_params(&flags).precision, 96);
    }
}
