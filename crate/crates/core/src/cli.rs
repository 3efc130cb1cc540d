//! Command-line front end. `run` parses arguments, executes one command and
//! returns the exit code with the rendered report.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::rational::{int, ratio};
use crate::arith::{gauss_sum_square, legendre_kronecker, parse_rational, BigRational, PrimeField, QuadFieldElement};
use crate::classno::{class_number, ratio_check, reduced_forms};
use crate::ecfp::{j_mod_p, local_scan_with};
use crate::ecq::{bad_primes, eval_map_f, map_49a3_to_quartic_x, quartic_point_check, two_torsion_x, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::localglobal::{construct_prop3_group, lemma1_verify, prop3_check, ImageStructure, LemmaReport};
use crate::modpoly::{
    evaluate_at_j, fp_linear_factor_count, fp_root_count, load_modpoly, modpoly_path, rational_linear_factors, verify_certificate,
    FactorizationCertificate,
};

pub const CERTIFICATE_FILE: &str = "phi7_cert_2268945_128.txt";

#[derive(Parser, Debug)]
#[command(name = "isoverify", version, about = "Verify the local-global principle for prime-degree isogenies")]
pub struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized point counting.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory holding the modular polynomial files.
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,
    /// Report elapsed_ms as 0 so output is byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the exceptional-subgroup lemma over all subgroups of GL2(F_ell).
    Lemma {
        #[arg(long)]
        ell: u64,
        /// Allow ell = 11 (slow).
        #[arg(long)]
        expensive: bool,
    },
    /// Reproduce the j = 2268945/128 counterexample end to end.
    Counterexample {
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Local or global isogeny test for one curve.
    Curve {
        #[command(subcommand)]
        mode: CurveMode,
    },
    /// Square of the quadratic Gauss sum.
    Gauss {
        #[arg(long)]
        ell: u64,
    },
    /// Class number by reduced forms.
    Classnumber {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Class number ratio of an order and its index-ell suborder.
    Ratio {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        ell: u64,
    },
    /// Build the dihedral-image group for (ell, n) and check its properties.
    Group {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveMode {
    /// Frobenius criterion at every good prime up to --bound.
    Local {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Rational roots of Phi_ell(X, j).
    Global {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        ell: u64,
        /// Modular polynomial file (default: phi<ell>.txt in the data directory).
        #[arg(long)]
        modpoly: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// "a1,a2,a3,a4,a6"
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a3: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a4: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a6: Option<String>,
    /// j-invariant (global mode only).
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<String>,
}

impl CurveArgs {
    fn weierstrass(&self) -> Result<Option<WeierstrassCurve>> {
        if let Some(s) = &self.curve {
            return WeierstrassCurve::parse(s).map(Some);
        }
        let parts = [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6];
        if parts.iter().all(|p| p.is_none()) {
            return Ok(None);
        }
        let a = parts
            .map(|p| p.as_deref().map(parse_rational).unwrap_or_else(|| Ok(BigRational::zero())));
        let [a1, a2, a3, a4, a6] = a;
        WeierstrassCurve::new([a1?, a2?, a3?, a4?, a6?]).map(Some)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub check: String,
    pub ok: bool,
    pub detail: Value,
}

impl Finding {
    pub fn new(check: &str, ok: bool, detail: Value) -> Self {
        Finding {
            check: check.to_string(),
            ok,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub findings: Vec<Finding>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for f in &self.findings {
            let mark = if f.ok { "ok" } else { "FAIL" };
            out.push_str(&format!("[{mark}] {}: {}\n", f.check, f.detail));
        }
        let status = serde_json::to_value(self.status).unwrap();
        out.push_str(&format!("status: {}\n", status.as_str().unwrap()));
        out.push_str(&format!("elapsed_ms: {}\n", self.elapsed_ms));
        out
    }
}

/// Errors that mean bad input or missing data rather than a failed check.
fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let start = Instant::now();
    let (status, findings) = match execute(&cli) {
        Ok(findings) => {
            let status = if findings.iter().all(|f| f.ok) { Status::Pass } else { Status::Fail };
            (status, findings)
        }
        Err(e) => (Status::Error, vec![Finding::new("error", false, json!(e.to_string()))]),
    };
    let elapsed_ms = if cli.no_timing { 0 } else { start.elapsed().as_millis() as u64 };
    let report = RunReport {
        command: echo,
        status,
        findings,
        elapsed_ms,
    };
    let text = if cli.json { report.to_json() + "\n" } else { report.to_text() };
    (report.exit_code(), text)
}

pub fn execute(cli: &Cli) -> Result<Vec<Finding>> {
    let data_dir = cli.data_dir.clone().unwrap_or_else(default_data_dir);
    match &cli.command {
        Command::Lemma { ell, expensive } => cmd_lemma(*ell, *expensive),
        Command::Counterexample { bound } => cmd_counterexample(&data_dir, *bound, cli.seed),
        Command::Curve { mode } => match mode {
            CurveMode::Local { curve, ell, bound } => cmd_curve_local(curve, *ell, *bound, cli.seed),
            CurveMode::Global { curve, ell, modpoly } => {
                let path = modpoly.clone().unwrap_or_else(|| modpoly_path(&data_dir, *ell));
                cmd_curve_global(curve, *ell, &path)
            }
        },
        Command::Gauss { ell } => cmd_gauss(*ell),
        Command::Classnumber { disc } => cmd_classnumber(*disc),
        Command::Ratio { disc, ell } => cmd_ratio(*disc, *ell),
        Command::Group { ell, n } => cmd_group(*ell, *n),
    }
}

fn lemma_finding(r: &LemmaReport) -> Finding {
    let v = r.violations();
    let mut detail = serde_json::to_value(r).unwrap();
    detail["violations"] = json!(v);
    Finding::new("exceptional class", v.is_empty(), detail)
}

pub fn cmd_lemma(ell: u64, expensive: bool) -> Result<Vec<Finding>> {
    match ell {
        2 | 3 | 5 | 7 => {}
        11 if expensive => {}
        11 => return Err(usage("ell = 11 needs --expensive")),
        _ => return Err(usage(format!("ell = {ell} is outside the enumerable range {{2, 3, 5, 7, 11}}"))),
    }
    let reports = lemma1_verify(ell, expensive)?;
    let mut out = vec![Finding::new(
        "hypothesis-satisfying classes",
        true,
        json!({ "ell": ell, "count": reports.len() }),
    )];
    out.extend(reports.iter().map(lemma_finding));
    Ok(out)
}

pub fn cmd_counterexample(data_dir: &Path, bound: u64, seed: u64) -> Result<Vec<Finding>> {
    let phi7 = load_modpoly(modpoly_path(data_dir, 7))?;
    let cert_path = data_dir.join(CERTIFICATE_FILE);
    let e = WeierstrassCurve::counterexample();
    let j_expected = ratio(2268945, 128);
    let mut out = Vec::new();

    let j = e.j_invariant();
    out.push(Finding::new("j-invariant", j == j_expected, json!(j.to_string())));

    let bad = bad_primes(&e)?;
    out.push(Finding::new("bad primes", bad == [2, 5, 7], json!(bad)));

    let scan = local_scan_with(&e, 7, bound, seed)?;
    let mut few_factors = Vec::new();
    let mut collisions = Vec::new();
    for entry in &scan.entries {
        let jp = PrimeField::new(entry.p)?.elem(j_mod_p(&e, entry.p).ok_or_else(|| usage("j has p in its denominator"))?);
        if fp_linear_factor_count(&phi7, jp)? < 2 {
            few_factors.push(entry.p);
        }
        // the linear factors coincide
        if fp_root_count(&phi7, jp)? < 2 {
            collisions.push(entry.p);
        }
    }
    out.push(Finding::new(
        "local 7-isogeny at every good prime",
        scan.all_admit() && few_factors.is_empty(),
        json!({
            "bound": bound,
            "primes_checked": scan.entries.len(),
            "bad": scan.bad,
            "skipped": scan.skipped,
            "frobenius_failures": scan.failing(),
            "fewer_than_two_linear_factors": few_factors,
            "repeated_root_primes": collisions,
            "supersingular": scan.entries.iter().filter(|e| e.supersingular).map(|e| e.p).collect::<Vec<_>>(),
        }),
    ));

    let phi = evaluate_at_j(&phi7, &j);
    let roots = rational_linear_factors(&phi);
    out.push(Finding::new(
        "no rational root of Phi_7(X, j)",
        roots.is_empty(),
        json!(roots.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
    ));

    let cert = FactorizationCertificate::load(phi, &cert_path)?;
    let report = verify_certificate(&cert);
    out.push(Finding::new(
        "factorization certificate",
        report.product_matches
            && report.all_shapes_match()
            && report.discriminants.len() == 3
            && report.discriminants.iter().all(|d| d.irreducible),
        serde_json::to_value(&report).unwrap(),
    ));

    let quartic_ok = quartic_point_check(&ratio(-1, 2), &ratio(1, 4))? && quartic_point_check(&ratio(-1, 2), &ratio(-1, 4))?;
    out.push(Finding::new("quartic points (-1/2, +-1/4)", quartic_ok, json!(quartic_ok)));

    let fx = eval_map_f(&ratio(-1, 2))?;
    out.push(Finding::new("f(-1/2)", fx == j_expected, json!(fx.to_string())));

    let c49 = WeierstrassCurve::curve_49a3();
    let u = QuadFieldElement::gaussian(int(-14), int(0));
    let v = QuadFieldElement::gaussian(int(7), int(29));
    let on_curve = c49.contains(&u, &v)?;
    let (x, square) = map_49a3_to_quartic_x(&u, &v)?;
    let want_x = QuadFieldElement::gaussian(ratio(-29, 58), ratio(7, 58));
    out.push(Finding::new(
        "Q(i) point of 49a3",
        on_curve && square && x == want_x,
        json!({ "on_curve": on_curve, "x": x.to_string(), "square": square }),
    ));

    let tors = two_torsion_x(&c49);
    let degenerate = matches!(map_49a3_to_quartic_x(&int(-12), &int(6)), Err(Error::DegeneratePoint(..)));
    out.push(Finding::new(
        "49a3 two-torsion (-12, 6)",
        tors == [int(-12)] && degenerate,
        json!({ "two_torsion_x": tors.iter().map(|t| t.to_string()).collect::<Vec<_>>(), "map_degenerate": degenerate }),
    ));

    let g = construct_prop3_group(7, 3)?;
    let chk = prop3_check(&g)?;
    let lemma = LemmaReport::build(&g);
    out.push(Finding::new(
        "image group",
        chk.order == 36
            && chk.image == ImageStructure::Dihedral(6)
            && chk.orbit_sizes == [2, 3, 3]
            && lemma.conclusions_hold(),
        json!({ "order": chk.order, "image": chk.image.to_string(), "orbit_sizes": chk.orbit_sizes }),
    ));
    Ok(out)
}

fn require_prime(ell: u64) -> Result<()> {
    if !crate::arith::is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    Ok(())
}

pub fn cmd_curve_local(args: &CurveArgs, ell: u64, bound: u64, seed: u64) -> Result<Vec<Finding>> {
    require_prime(ell)?;
    if args.j.is_some() {
        return Err(usage("local mode needs a curve, not --j"));
    }
    let e = args.weierstrass()?.ok_or_else(|| usage("no curve given"))?;
    let scan = local_scan_with(&e, ell, bound, seed)?;
    let mut out: Vec<Finding> = scan
        .entries
        .iter()
        .map(|s| Finding::new(&format!("p = {}", s.p), s.admitted, serde_json::to_value(s).unwrap()))
        .collect();
    out.push(Finding::new(
        "summary",
        scan.all_admit(),
        json!({ "curve": e.to_string(), "ell": ell, "bound": bound, "bad": scan.bad, "skipped": scan.skipped, "failing": scan.failing() }),
    ));
    Ok(out)
}

pub fn cmd_curve_global(args: &CurveArgs, ell: u64, modpoly: &Path) -> Result<Vec<Finding>> {
    require_prime(ell)?;
    let j = match (&args.j, args.weierstrass()?) {
        (Some(j), None) => parse_rational(j)?,
        (None, Some(e)) => e.j_invariant(),
        (Some(_), Some(_)) => return Err(usage("give either a curve or --j, not both")),
        (None, None) => return Err(usage("no curve or j-invariant given")),
    };
    let m = load_modpoly(modpoly)?;
    if m.level() != ell {
        return Err(usage(format!("{} has level {}, not {ell}", modpoly.display(), m.level())));
    }
    let roots = rational_linear_factors(&evaluate_at_j(&m, &j));
    let mut distinct = roots.clone();
    distinct.dedup();
    let verdict = if roots.is_empty() {
        format!("no rational {ell}-isogeny")
    } else {
        format!("rational {ell}-isogeny ({} rational roots)", distinct.len())
    };
    Ok(vec![Finding::new(
        "global",
        true,
        json!({
            "j": j.to_string(),
            "ell": ell,
            "rational_roots": roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "verdict": verdict,
        }),
    )])
}

pub fn cmd_gauss(ell: u64) -> Result<Vec<Finding>> {
    let g = gauss_sum_square(ell)?;
    let chi = legendre_kronecker(-1, ell)? as f64;
    let expected = chi * ell as f64;
    let err = ((g.re - expected).powi(2) + g.im.powi(2)).sqrt();
    Ok(vec![Finding::new(
        "g^2 = (-1|ell) ell",
        err < 1e-9,
        json!({ "ell": ell, "re": g.re, "im": g.im, "expected": expected, "error": err }),
    )])
}

pub fn cmd_classnumber(d: i64) -> Result<Vec<Finding>> {
    let h = class_number(d)?;
    let forms: Vec<String> = reduced_forms(d)?
        .iter()
        .map(|f| format!("({}, {}, {})", f.a, f.b, f.c))
        .collect();
    Ok(vec![Finding::new("class number", true, json!({ "disc": d, "h": h, "forms": forms }))])
}

pub fn cmd_ratio(d: i64, ell: u64) -> Result<Vec<Finding>> {
    let r = ratio_check(d, ell)?;
    Ok(vec![Finding::new(
        "class number ratio",
        r.agree,
        json!({ "disc": d, "ell": ell, "predicted": r.predicted, "direct": r.direct }),
    )])
}

pub fn cmd_group(ell: u64, n: u64) -> Result<Vec<Finding>> {
    let g = construct_prop3_group(ell, n)?;
    let chk = prop3_check(&g)?;
    let report = LemmaReport::build(&g);
    Ok(vec![
        Finding::new(
            "determinant surjective",
            chk.det_surjective,
            json!({ "ell": ell, "n": n, "order": chk.order }),
        ),
        Finding::new("every element fixes a line", chk.min_fixed_lines >= 2, json!(chk.min_fixed_lines)),
        Finding::new("no common fixed line", chk.common_fixed_lines == 0, json!(chk.common_fixed_lines)),
        Finding::new(
            "dihedral image of order 2n",
            chk.image == ImageStructure::Dihedral(2 * n as usize),
            json!({ "image": chk.image.to_string(), "orbit_sizes": chk.orbit_sizes }),
        ),
        Finding::new("lemma conclusions", report.conclusions_hold(), json!(report.violations())),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> (i32, String) {
        run(std::iter::once("isoverify").chain(args.split_whitespace()))
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go("lemma --ell 13").0, 2);
        assert_eq!(go("lemma --ell 11").0, 2);
        assert_eq!(go("lemma --ell 4").0, 2);
        assert_eq!(go("lemma --bogus").0, 2);
        assert_eq!(go("lemma --ell 5").0, 0);
        assert_eq!(go("gauss --ell 13").0, 0);
        assert_eq!(go("gauss --ell 12").0, 2);
        assert_eq!(go("--help").0, 0);
        // y^2 = x^3 + x fails at supersingular p = 3 mod 4 for ell = 5
        assert_eq!(go("curve local --curve 0,0,0,1,0 --ell 5 --bound 50").0, 1);
        assert_eq!(go("curve local --a1 1 --a2 -1 --a4 -107 --a6 -379 --ell 7 --bound 200").0, 0);
        assert_eq!(go("curve local --j 1 --ell 7").0, 2);
        assert_eq!(go("curve global --ell 7").0, 2);
    }

    #[test]
    fn json_is_sorted_and_reproducible() {
        let (c1, a) = go("--json --no-timing ratio --disc -4 --ell 3");
        let (c2, b) = go("--json --no-timing ratio --disc -4 --ell 3");
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["elapsed_ms"], 0);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "elapsed_ms", "findings", "status"]);
        let pos = |k: &str| a.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("command") < pos("elapsed_ms") && pos("findings") < pos("status"));
    }

    #[test]
    fn global_verdicts() {
        let (code, out) = go("--json curve global --j 0 --ell 2");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        // Phi_2(X, 0) = (X - 54000) X^2 ... has the root 54000
        let roots = v["findings"][0]["detail"]["rational_roots"].as_array().unwrap().clone();
        assert!(roots.contains(&json!("54000")));
        let (code, out) = go("curve global --j 2268945/128 --ell 7");
        assert_eq!(code, 0);
        assert!(out.contains("no rational 7-isogeny"));
        let (code, _) = go(&format!("curve global --j 0 --ell 3 --modpoly {}/data/phi5.txt", env!("CARGO_MANIFEST_DIR")));
        assert_eq!(code, 2);
    }

    #[test]
    fn data_errors() {
        let dir = std::env::temp_dir().join(format!("isoverify-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (code, out) = go(&format!("counterexample --bound 100 --data-dir {}", dir.display()));
        assert_eq!(code, 2, "{out}");
        std::fs::write(dir.join("phi7.txt"), "level 7\n8 0 1\n8 0 2\n").unwrap();
        let (code, out) = go(&format!("counterexample --bound 100 --data-dir {}", dir.display()));
        assert_eq!(code, 2);
        assert!(out.contains("phi7.txt:3: duplicate"), "{out}");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn counterexample_passes() {
        let (code, out) = go("counterexample --bound 600");
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains("FAIL"));
    }

    #[test]
    fn group_command() {
        assert_eq!(go("group --ell 7 --n 3").0, 0);
        assert_eq!(go("group --ell 11 --n 5").0, 0);
        assert_eq!(go("group --ell 13 --n 3").0, 2);
        assert_eq!(go("group --ell 7 --n 2").0, 2);
    }
}
