//! Command-line front end. Every subcommand produces a deterministic text
//! report; [`run`] returns it together with the exit code.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or invalid input,
//! 3 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::RingPresentation;
use crate::catalog::{self, CatalogKey, Space};
use crate::curves::{
    self, auto_parameters, double_points, resolve, CurveError, CurveFile, DecoratedImmersion, DetectOptions,
    LongCurve,
};
use crate::degrees::{self, ShiftSign, SingularDegree};
use crate::spectral::{self, BigradedTable, CollapseOutcome, Fibration, Window};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(
    name = "knotalg",
    version,
    about = "Homology rings, collapse checks and desingularization of long knots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a catalog presentation, a basis in one degree, or a product table.
    Ring(RingArgs),
    /// Multiply two monomials in a catalog ring.
    Mult(MultArgs),
    /// Check collapse at E² for a catalog fibration or a table file.
    Ss(SsArgs),
    /// Resolve the decorated double points of a curve file.
    Resolve(ResolveArgs),
    /// Sweep the two-sphere family of trefoil resolutions.
    Budney(BudneyArgs),
    /// Run one of the property suites.
    Check(CheckArgs),
    /// Print the degree shift table.
    Degrees(DegreesArgs),
}

#[derive(Debug, Args)]
struct RingArgs {
    key: String,
    #[arg(allow_negative_numbers = true)]
    n: i64,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "table")]
    degree: Option<i64>,
    /// Products of all basis monomials with degrees in [lo, hi].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    table: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
struct MultArgs {
    key: String,
    #[arg(allow_negative_numbers = true)]
    n: i64,
    left: String,
    right: String,
}

#[derive(Debug, Args)]
struct SsArgs {
    /// Base key (`unit_tangent`, `sphere`) or total-space key (`imm_prime`, `imm`).
    #[arg(required_unless_present = "table")]
    base: Option<String>,
    /// Fibre key, or the dimension when the first argument is a total space.
    #[arg(allow_negative_numbers = true)]
    fiber: Option<String>,
    #[arg(allow_negative_numbers = true)]
    n: Option<i64>,
    #[arg(long, num_args = 3, value_names = ["P_MIN", "P_MAX", "Q_MAX"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    /// Read the table from a file instead of the catalog.
    #[arg(long, conflicts_with_all = ["base", "fiber", "n"])]
    table: Option<PathBuf>,
    /// Also compare the page with the total-space ring in degrees [lo, hi].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    compare: Option<Vec<i64>>,
}

#[derive(Debug, Args)]
struct ResolveArgs {
    file: PathBuf,
    #[arg(long, requires = "delta")]
    eps: Option<f64>,
    #[arg(long, requires = "eps")]
    delta: Option<f64>,
    /// Comma-separated sign choices, one per decoration.
    #[arg(long, value_delimiter = ',')]
    signs: Option<Vec<u8>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = curves::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = curves::DEFAULT_SEP_CELLS)]
    sep: usize,
}

#[derive(Debug, Args)]
struct BudneyArgs {
    #[arg(allow_negative_numbers = true)]
    n: i64,
    #[arg(default_value_t = 10)]
    grid: usize,
    /// Also check the planar Gauss code of the standard resolution (n = 3).
    #[arg(long)]
    gauss_check: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(subcommand)]
    suite: Suite,
}

#[derive(Debug, Subcommand)]
enum Suite {
    /// Resolution against concatenation on k- and l-point immersions.
    Compat {
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
    },
    /// Relations and multiplicativity of the inclusion morphism.
    Morphism {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = 30)]
        window: i64,
    },
    /// Degree laws of products and desingularization.
    Degrees {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
}

#[derive(Debug, Args)]
struct DegreesArgs {
    /// Range `a..b` or a single value.
    #[arg(long, default_value = "3..8")]
    n: String,
    #[arg(long, default_value = "0..3")]
    k: String,
}

enum Failure {
    Check(String),
    Usage(String),
    Numeric(String),
}

type Outcome = std::result::Result<String, (String, Failure)>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn curve_failure(e: CurveError) -> Failure {
    match e {
        CurveError::NoValidParameters { .. } | CurveError::SingularityCluster { .. } => {
            Failure::Numeric(e.to_string())
        }
        _ => Failure::Usage(e.to_string()),
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandResult { exit_code: 0, stdout: text, stderr: String::new() }
            } else {
                CommandResult { exit_code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let outcome = match cli.command {
        Command::Ring(a) => cmd_ring(a),
        Command::Mult(a) => cmd_mult(a),
        Command::Ss(a) => cmd_ss(a),
        Command::Resolve(a) => cmd_resolve(a),
        Command::Budney(a) => cmd_budney(a),
        Command::Check(a) => cmd_check(a),
        Command::Degrees(a) => cmd_degrees(a),
    };
    match outcome {
        Ok(stdout) => CommandResult { exit_code: 0, stdout, stderr: String::new() },
        Err((stdout, failure)) => {
            let (exit_code, msg) = match failure {
                Failure::Check(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Numeric(m) => (3, m),
            };
            CommandResult { exit_code, stdout, stderr: format!("error: {msg}\n") }
        }
    }
}

fn fail(f: Failure) -> (String, Failure) {
    (String::new(), f)
}

fn catalog_ring(key: &str, n: i64) -> std::result::Result<RingPresentation, Failure> {
    let space: Space = key.parse().map_err(usage)?;
    let key = CatalogKey::new(space, n).map_err(usage)?;
    if !key.is_supported() {
        return Err(Failure::Usage(format!("{} is not defined for n = {}", space.key(), n)));
    }
    key.build().map_err(usage)
}

fn cmd_ring(a: RingArgs) -> Outcome {
    let ring = catalog_ring(&a.key, a.n).map_err(fail)?;
    if let Some(d) = a.degree {
        return Ok(basis_lines(&ring, d));
    }
    if let Some(t) = a.table {
        let (lo, hi) = (t[0], t[1]);
        let basis: Vec<_> = (lo..=hi).flat_map(|d| ring.basis_in_degree(d)).collect();
        let mut out = String::new();
        for x in &basis {
            for y in &basis {
                let ex = ring.monomial_element(&x.monomial, 1);
                let ey = ring.monomial_element(&y.monomial, 1);
                let p = ring.multiply(&ex, &ey).map_err(|e| fail(usage(e)))?;
                let _ = writeln!(
                    out,
                    "{} * {} = {}",
                    ring.display_monomial(&x.monomial),
                    ring.display_monomial(&y.monomial),
                    ring.display(&p)
                );
            }
        }
        return Ok(out);
    }
    Ok(ring.to_text())
}

fn basis_lines(ring: &RingPresentation, d: i64) -> String {
    let basis = ring.basis_in_degree(d);
    if basis.is_empty() {
        return "0\n".to_string();
    }
    basis.iter().map(|b| format!("{} {}\n", ring.display_monomial(&b.monomial), b.order)).collect()
}

fn cmd_mult(a: MultArgs) -> Outcome {
    let ring = catalog_ring(&a.key, a.n).map_err(fail)?;
    let x = ring.parse_monomial(&a.left).map_err(|e| fail(usage(e)))?;
    let y = ring.parse_monomial(&a.right).map_err(|e| fail(usage(e)))?;
    let p = ring.multiply(&x, &y).map_err(|e| fail(usage(e)))?;
    Ok(format!("{}\n", ring.display(&p)))
}

/// Resolves `(base, fiber, n)` or `(total, n)` to a catalog fibration.
fn fibration(
    base: &str,
    fiber: Option<&str>,
    n: Option<i64>,
) -> std::result::Result<(String, Fibration), Failure> {
    let parse_n =
        |s: &str| s.parse::<i64>().map_err(|_| Failure::Usage(format!("expected a dimension, got {s:?}")));
    let (name, n) = match (base, fiber, n) {
        ("imm_prime" | "imm", Some(f), None) => (base.to_string(), parse_n(f)?),
        ("unit_tangent", Some("omega_sphere"), Some(n)) if n % 2 == 0 => ("imm_prime".to_string(), n),
        ("sphere", Some("loop_sphere"), Some(n)) if n % 2 == 1 => ("imm_prime".to_string(), n),
        ("unit_tangent", Some("omega_unit_tangent"), Some(n)) if n % 2 == 0 => ("imm".to_string(), n),
        _ => {
            return Err(Failure::Usage(format!(
                "no catalog fibration for {base} {} {}",
                fiber.unwrap_or(""),
                n.map(|n| n.to_string()).unwrap_or_default()
            )))
        }
    };
    let f = if name == "imm" {
        if n % 2 != 0 {
            return Err(Failure::Usage(format!("imm is defined for even n only, got {n}")));
        }
        Fibration::imm(n)
    } else {
        Fibration::imm_prime(n)
    };
    Ok((format!("{name} n={n}"), f.map_err(usage)?))
}

fn cmd_ss(a: SsArgs) -> Outcome {
    let (header, table, total) = if let Some(path) = &a.table {
        let text = read(path).map_err(fail)?;
        let table = BigradedTable::from_text(&text).map_err(|e| fail(usage(e)))?;
        (format!("table {}", path.display()), table, None)
    } else {
        let base = a.base.as_deref().unwrap_or_default();
        let (name, f) = fibration(base, a.fiber.as_deref(), a.n).map_err(fail)?;
        let n: i64 = name.rsplit('=').next().and_then(|s| s.parse().ok()).unwrap_or(0);
        let window = match &a.window {
            Some(w) => Window::new(w[0], w[1], w[2]),
            None => Window::default_for(n),
        };
        let table = f.table(window).map_err(|e| fail(usage(e)))?;
        (format!("fibration {name}"), table, Some(f.total))
    };
    let w = table.window();
    let mut out = format!(
        "{header} window p={}..{} q=0..{} shift={}\n",
        w.p_min,
        w.p_max,
        w.q_max,
        table.fiber_shift()
    );
    let outcome = spectral::collapse_check(&table).map_err(|e| fail(usage(e)))?;
    match outcome {
        CollapseOutcome::Certificate(lines) => {
            for l in &lines {
                let _ = writeln!(out, "{l}");
            }
            out.push_str("collapses at the E² term\n");
        }
        CollapseOutcome::Violations(v) => {
            for l in &v {
                let _ = writeln!(out, "{l}");
            }
            let _ = writeln!(out, "does not collapse: {} violations", v.len());
            return Err((out, Failure::Check("collapse check failed".into())));
        }
    }
    if let Some(c) = &a.compare {
        let Some(total) = total else {
            return Err((out, Failure::Usage("--compare needs a catalog fibration".into())));
        };
        for row in spectral::extension_report(&table, &total, c[0], c[1]) {
            let _ =
                writeln!(out, "deg {}: page {} ring {} {}", row.degree, row.page, row.claimed, row.status);
        }
    }
    Ok(out)
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn cmd_resolve(a: ResolveArgs) -> Outcome {
    let text = read(&a.file).map_err(fail)?;
    let parsed = curves::parse_curve_file(&text).map_err(|e| fail(curve_failure(e)))?;
    let CurveFile::Long(mut d) = parsed else {
        return Err(fail(Failure::Usage("resolve needs a long curve file".into())));
    };
    if let Some(signs) = &a.signs {
        d = d.with_signs(signs).map_err(|e| fail(curve_failure(e)))?;
    }
    let opts = DetectOptions { tol: a.tol, sep_cells: a.sep };
    let before = double_points(d.curve(), opts).map_err(|e| fail(curve_failure(e)))?.len();
    if before != d.k() {
        return Err(fail(Failure::Usage(format!(
            "file decorates {} double points but the curve has {before}",
            d.k()
        ))));
    }
    let (eps, delta, halvings, curve) = match (a.eps, a.delta) {
        (Some(eps), Some(delta)) => {
            let c = resolve(&d, eps, delta).map_err(|e| fail(curve_failure(e)))?;
            (eps, delta, None, c)
        }
        _ => {
            let p = auto_parameters(&d, opts).map_err(|e| fail(curve_failure(e)))?;
            (p.eps, p.delta, Some(p.halvings), p.curve)
        }
    };
    let after = double_points(&curve, opts).map_err(|e| fail(curve_failure(e)))?.len();
    let mut out = format!("k: {before} → {after}\neps: {}\ndelta: {}\n", sci(eps), sci(delta));
    match halvings {
        Some(h) => {
            let _ = writeln!(out, "halvings: {h}");
        }
        None => out.push_str("halvings: fixed\n"),
    }
    if let Some(path) = &a.out {
        let file =
            CurveFile::Long(DecoratedImmersion::new(curve, vec![]).map_err(|e| fail(curve_failure(e)))?);
        std::fs::write(path, file.to_text())
            .map_err(|e| fail(Failure::Usage(format!("{}: {e}", path.display()))))?;
    }
    if after > 0 {
        return Err((out, Failure::Check(format!("{after} double points remain"))));
    }
    Ok(out)
}

fn dim(n: i64) -> std::result::Result<usize, Failure> {
    if n < 3 {
        return Err(Failure::Usage(CurveError::DimensionTooSmall(n.max(0) as usize).to_string()));
    }
    Ok(n as usize)
}

fn cmd_budney(a: BudneyArgs) -> Outcome {
    let n = dim(a.n).map_err(fail)?;
    if a.grid == 0 {
        return Err(fail(Failure::Usage("grid must be positive".into())));
    }
    let sweep = curves::budney_sweep(n, a.grid).map_err(|e| fail(curve_failure(e)))?;
    let mut out = format!("{sweep}\n");
    for (i, j, why) in &sweep.failures {
        let _ = writeln!(out, "failed ({i},{j}): {why}");
    }
    let mut ok = sweep.failures.is_empty();
    if a.gauss_check {
        let c = curves::standard_resolution(3).map_err(|e| (out.clone(), curve_failure(e)))?;
        let code = curves::gauss_code(&c).map_err(|e| (out.clone(), curve_failure(e)))?;
        let yes = curves::is_trefoil_code(&code);
        let _ = writeln!(out, "gauss: {code}\ntrefoil: {}", if yes { "yes" } else { "no" });
        ok &= yes;
    }
    if !ok {
        return Err((out, Failure::Check("budney family check failed".into())));
    }
    Ok(out)
}

fn cmd_check(a: CheckArgs) -> Outcome {
    match a.suite {
        Suite::Compat { n, k, l } => check_compat(dim(n).map_err(fail)?, k, l),
        Suite::Morphism { n, window } => check_morphism(n, window),
        Suite::Degrees { n } => check_degrees(n),
    }
}

/// `count` figure-eights in a row, each decorated by the projection of a
/// fixed seed.
fn chain(n: usize, count: usize) -> curves::Result<DecoratedImmersion> {
    let mut c = LongCurve::trivial(n)?;
    for i in 0..count {
        let f = LongCurve::figure_eight(n)?;
        c = if i == 0 { f } else { c.concat(&f)? };
    }
    let seeds: Vec<Vec<f64>> = (0..count)
        .map(|i| (0..n).map(|j| if j < 2 { 0.0 } else { 1.0 / (1 + (i + j) % n) as f64 }).collect())
        .collect();
    let signs: Vec<u8> = (0..count).map(|i| 1 + (i % 2) as u8).collect();
    DecoratedImmersion::decorate(c, &seeds, &signs, DetectOptions::default())
}

fn check_compat(n: usize, k: usize, l: usize) -> Outcome {
    let cf = |e| fail(curve_failure(e));
    let opts = DetectOptions::default();
    let d1 = chain(n, k).map_err(cf)?;
    let d2 = chain(n, l).map_err(cf)?;
    let p1 = auto_parameters(&d1, opts).map_err(cf)?;
    let p2 = auto_parameters(&d2, opts).map_err(cf)?;
    let joined = d1.concat(&d2).map_err(cf)?;
    let before = double_points(joined.curve(), opts).map_err(cf)?.len();
    let params: Vec<curves::BumpParams> =
        std::iter::repeat_n(curves::BumpParams { eps: p1.eps / 2.0, delta: p1.delta / 2.0 }, k)
            .chain(std::iter::repeat_n(curves::BumpParams { eps: p2.eps / 2.0, delta: p2.delta / 2.0 }, l))
            .collect();
    let lhs = curves::resolve_each(&joined, &params).map_err(cf)?;
    let rhs = p1.curve.concat(&p2.curve).map_err(cf)?;
    let gap = lhs.sample_distance(&rhs).unwrap_or(f64::INFINITY);
    let after_l = double_points(&lhs, opts).map_err(cf)?.len();
    let after_r = double_points(&rhs, opts).map_err(cf)?.len();
    let degrees_ok = (-10..=10).all(|d| {
        degrees::check_compatibility_degrees(k as i64, l as i64, d, -d, n as i64, ShiftSign::Plus) == Ok(true)
    });
    let pass = gap < 1e-6 && after_l == 0 && after_r == 0 && before == k + l && degrees_ok;
    let out = format!(
        "compat n={n} k={k} l={l}\nsup distance: {}\ndouble points: {before} → {after_l} (resolve after concat), {after_r} (concat after resolve)\ndegrees: {}\n{}\n",
        sci(gap),
        if degrees_ok { "ok" } else { "mismatch" },
        if pass { "pass" } else { "fail" }
    );
    if pass {
        Ok(out)
    } else {
        Err((out, Failure::Check("compatibility check failed".into())))
    }
}

fn check_morphism(n: i64, window: i64) -> Outcome {
    let m = catalog::inclusion_morphism(n).map_err(|e| fail(usage(e)))?;
    let mut out = format!("morphism n={n} window={}..{window}\n", -window);
    let relations = m.check_relations();
    let _ = writeln!(out, "relations: {}", if relations.is_ok() { "ok" } else { "violated" });
    let report = m.check_multiplicative(-window, window).map_err(|e| fail(usage(e)))?;
    let _ = writeln!(
        out,
        "multiplicativity: {} pairs, {} violations",
        report.pairs_checked,
        report.violations.len()
    );
    for v in &report.violations {
        let _ =
            writeln!(out, "  {} * {}: {} != {}", v.left, v.right, v.image_of_product, v.product_of_images);
    }
    if relations.is_ok() && report.is_clean() {
        out.push_str("pass\n");
        Ok(out)
    } else {
        out.push_str("fail\n");
        Err((out, Failure::Check("morphism check failed".into())))
    }
}

fn check_degrees(n: i64) -> Outcome {
    if n < 3 {
        return Err(fail(Failure::Usage(format!("dimension {n} is below 3"))));
    }
    let mut out = format!("degrees n={n}\n");
    let range = -12..=12i64;
    let mut compat = 0usize;
    let mut bad = 0usize;
    for k in 0..=3 {
        for l in 0..=3 {
            for dx in range.clone() {
                for dy in range.clone() {
                    compat += 1;
                    if degrees::check_compatibility_degrees(k, l, dx, dy, n, ShiftSign::Plus) != Ok(true) {
                        bad += 1;
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "compatibility: {compat} tuples, {bad} failures");
    let mut assoc_bad = 0usize;
    for (dx, dy, dz) in [(0, 0, 0), (3, -5, 7), (-2 * n, 1, 4), (10, 10, -10)] {
        for (k, l, m) in [(0, 0, 0), (1, 2, 3), (2, 0, 1)] {
            let x = SingularDegree { degree: dx, k };
            let y = SingularDegree { degree: dy, k: l };
            let z = SingularDegree { degree: dz, k: m };
            let left = degrees::singular_product(degrees::singular_product(x, y, n), z, n);
            let right = degrees::singular_product(x, degrees::singular_product(y, z, n), n);
            if left != right || left.k != k + l + m {
                assoc_bad += 1;
            }
        }
    }
    let _ = writeln!(out, "associativity: {} failures", assoc_bad);
    let sigma2 = degrees::desingularize(0, 2, n, ShiftSign::Plus).map_err(|e| fail(usage(e)))?;
    let sigma_ok = sigma2 == 2 * n - 6;
    let _ = writeln!(out, "sigma_2: 0 -> {sigma2}");
    let pass = bad == 0 && assoc_bad == 0 && sigma_ok;
    out.push_str(if pass { "pass\n" } else { "fail\n" });
    if pass {
        Ok(out)
    } else {
        Err((out, Failure::Check("degree check failed".into())))
    }
}

fn parse_range(s: &str) -> std::result::Result<std::ops::RangeInclusive<i64>, Failure> {
    let bad = || Failure::Usage(format!("expected a range like 3..8, got {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok(v..=v)
        }
    }
}

fn cmd_degrees(a: DegreesArgs) -> Outcome {
    let ns = parse_range(&a.n).map_err(fail)?;
    let ks = parse_range(&a.k).map_err(fail)?;
    degrees::shift_table(ns, ks).map_err(|e| fail(usage(e)))
}
