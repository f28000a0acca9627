use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use singclass_core::classes::{
    basic_to_sing, point_coefficient_delta, point_coefficient_psi, psi_power_sing, sing_to_basic,
    theorem1_expansion, ClassExpr,
};
use singclass_core::combinatorics::{mn_character, Partition, Profile};
use singclass_core::cycles::{
    completed_cycle, genus0_part, multiply_central, verify_in_group_algebra, x_polynomial, CycleExpr, XPolynomial,
};
use singclass_core::local_models::{canonical_function, hurwitz_coordinates, profile_constants};
use singclass_core::syntax::{parse_class, render_cycle_json, render_cycle_latex, render_json, render_latex, render_text};
use singclass_core::verify::{self, Report};
use singclass_core::{Error, Rational};

/// Exact expansions of singularity and basic classes, completed cycles and
/// local models.
#[derive(Parser)]
#[command(name = "singclass", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// ∏_{r≤m}(rψ − ξ) in singularity classes.
    Product { m: u32 },
    /// ψ^m in singularity classes.
    Psi { m: u32 },
    /// Rewrites a basic-class expression in singularity classes.
    ToSing { expr: String },
    /// Rewrites a singularity-class expression in basic classes.
    ToBasic { expr: String },
    /// The completed cycle C̄_{m+1}.
    CompletedCycle {
        m: u32,
        /// Keep only the genus-0 terms.
        #[arg(long)]
        genus0: bool,
    },
    /// The polynomial X_m, normalized by 1/m! unless --raw is given.
    XPoly {
        m: u32,
        #[arg(long)]
        raw: bool,
    },
    /// Product of two stable central elements, e.g. `{2} {2}`.
    MultiplyCycles {
        p1: String,
        p2: String,
        /// Also check the product by brute force in the group algebra of S_N.
        #[arg(long, value_name = "N")]
        verify_at: Option<u32>,
    },
    /// Irreducible character χ^λ at cycle type μ, e.g. `[3,1] [2,2]`.
    Char { lambda: String, mu: String },
    /// Point-class coefficients.
    #[command(subcommand)]
    Coeff(CoeffKind),
    /// Hurwitz coordinates of the canonical function with profile P, zero
    /// of full order at x and poles z_1,…
    LocalModel {
        profile: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        poles: String,
    },
    /// Runs a verification suite; exits 1 on any failure.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest m (for roundtrip: largest codimension) to check.
        #[arg(long)]
        max_m: Option<u32>,
    },
}

#[derive(Subcommand)]
enum CoeffKind {
    /// Coefficient of α_ℓ i_k in ψ^m.
    Psi {
        m: u32,
        profile: String,
        /// Unnormalized value, larger by m!.
        #[arg(long)]
        raw: bool,
    },
    /// Coefficient of α_ℓ i_k in α_s δ_{m_1,…,m_s}.
    Delta { ms: String, profile: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Appendix,
    Ko,
    Equality,
    Cycles,
    Roundtrip,
}

struct Output {
    body: String,
    failed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, failed: false }
    }
}

fn max_codim() -> Result<u32, Error> {
    match std::env::var("SINGCLASS_MAX_CODIM") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Constraint(format!("SINGCLASS_MAX_CODIM={v} is not a number"))),
        Err(_) => Ok(8),
    }
}

fn capped(m: u32) -> Result<u32, Error> {
    let cap = max_codim()?;
    if m > cap {
        return Err(Error::Constraint(format!(
            "codimension {m} exceeds SINGCLASS_MAX_CODIM = {cap}"
        )));
    }
    Ok(m)
}

fn bracketed<T: std::str::FromStr<Err = Error>>(s: &str, open: char, close: char) -> Result<T, Error> {
    let s = s.trim();
    if s.starts_with(open) {
        s.parse()
    } else {
        format!("{open}{s}{close}").parse()
    }
}

fn profile_arg(s: &str) -> Result<Profile, Error> {
    bracketed(s, '{', '}')
}

fn partition_arg(s: &str) -> Result<Partition, Error> {
    bracketed(s, '[', ']')
}

fn rational_list(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',').map(|t| t.trim().parse()).collect()
}

fn uint_list(s: &str) -> Result<Vec<u32>, Error> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse { position: 0, message: format!("bad index `{t}`") }))
        .collect()
}

fn class(e: &ClassExpr, format: Format) -> Result<String, Error> {
    capped(e.codim())?;
    Ok(match format {
        Format::Text => render_text(e),
        Format::Json => render_json(e).to_string(),
        Format::Latex => render_latex(e),
    })
}

fn cycle(c: &CycleExpr, format: Format) -> String {
    match format {
        Format::Text => c.to_string(),
        Format::Json => render_cycle_json(c).to_string(),
        Format::Latex => render_cycle_latex(c),
    }
}

fn latex_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn x_poly(x: &XPolynomial, format: Format) -> String {
    match format {
        Format::Text => x.to_string(),
        Format::Json => {
            let terms: Vec<Value> = x
                .iter()
                .map(|(p, c)| json!({"monomial": p, "coeff": c}))
                .collect();
            json!({ "terms": terms }).to_string()
        }
        Format::Latex => {
            let mut out = String::new();
            for (i, (p, c)) in x.iter().enumerate() {
                let atom: String = p
                    .multiplicities()
                    .iter()
                    .map(|(k, e)| if *e == 1 { format!("x_{{{k}}}") } else { format!("x_{{{k}}}^{{{e}}}") })
                    .collect();
                let sign = match (i, c.is_negative()) {
                    (0, true) => "-",
                    (0, false) => "",
                    (_, true) => " - ",
                    (_, false) => " + ",
                };
                let mag = c.abs();
                if mag.is_one() {
                    out.push_str(&format!("{sign}{atom}"));
                } else {
                    out.push_str(&format!("{sign}{} {atom}", latex_rational(&mag)));
                }
            }
            if out.is_empty() {
                "0".into()
            } else {
                out
            }
        }
    }
}

fn scalar(c: &Rational, format: Format) -> String {
    match format {
        Format::Text => c.to_string(),
        Format::Json => json!({ "value": c }).to_string(),
        Format::Latex => latex_rational(c),
    }
}

fn report(r: &Report, format: Format) -> Output {
    let body = match format {
        Format::Json => {
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "diff": c.diff}))
                .collect();
            json!({"suite": r.suite, "passed": r.passed(), "checks": checks, "notes": r.notes}).to_string()
        }
        _ => r.to_string().trim_end().to_string(),
    };
    Output {
        body,
        failed: !r.passed(),
    }
}

fn local_model(profile: &str, x: &str, poles: &str, format: Format) -> Result<String, Error> {
    let p = profile_arg(profile)?;
    let x: Rational = x.trim().parse()?;
    let poles = rational_list(poles)?;
    let consts = profile_constants(&p)?;
    let f = canonical_function(&p, &x, &poles)?;
    let h = hurwitz_coordinates(&f, &p, &poles)?;
    Ok(match format {
        Format::Json => {
            let branches: Vec<Value> = h
                .branches
                .iter()
                .map(|b| {
                    json!({
                        "pole": b.pole,
                        "order": b.order,
                        "u": b.u.value,
                        "u_power": b.u.radicand,
                        "a": b.a,
                        "laurent": b.laurent,
                    })
                })
                .collect();
            json!({
                "function": f.to_string(),
                "K": consts.lcm,
                "r": consts.r,
                "d": consts.d,
                "branches": branches,
                "constant": h.constant,
            })
            .to_string()
        }
        _ => {
            let mut lines = vec![
                format!("f = {f}"),
                format!(
                    "K = {}, r = ({}), d = {}",
                    consts.lcm,
                    consts.r.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
                    consts.d
                ),
            ];
            for b in &h.branches {
                let a = match &b.a {
                    Some(a) => a[1..].iter().map(Rational::to_string).collect::<Vec<_>>().join(", "),
                    None => format!(
                        "a_j*u^(k-j) = {}",
                        b.laurent[1..].iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
                    ),
                };
                lines.push(format!("z = {} (order {}): u = {}, a = [{a}]", b.pole, b.order, b.u));
            }
            lines.push(format!("constant = {}", h.constant));
            lines.join("\n")
        }
    })
}

fn run(cli: Cli) -> Result<Output, Error> {
    let f = cli.format;
    let body = match cli.command {
        Command::Product { m } => class(&theorem1_expansion(capped(m)?)?, f)?,
        Command::Psi { m } => class(&psi_power_sing(capped(m)?)?, f)?,
        Command::ToSing { expr } => class(&basic_to_sing(&capped_class(&expr)?)?, f)?,
        Command::ToBasic { expr } => class(&sing_to_basic(&capped_class(&expr)?)?, f)?,
        Command::CompletedCycle { m, genus0 } => {
            let c = completed_cycle(capped(m)?);
            cycle(&if genus0 { genus0_part(&c, m) } else { c }, f)
        }
        Command::XPoly { m, raw } => x_poly(&x_polynomial(capped(m)?, !raw), f),
        Command::MultiplyCycles { p1, p2, verify_at } => {
            let (p1, p2) = (profile_arg(&p1)?, profile_arg(&p2)?);
            let product = multiply_central(&p1, &p2)?;
            let body = cycle(&product, f);
            if let Some(n) = verify_at {
                if !verify_in_group_algebra(&p1, &p2, &product, n)? {
                    return Ok(Output {
                        body: format!("{body}\nFAIL: product does not hold in the group algebra of S_{n}"),
                        failed: true,
                    });
                }
            }
            body
        }
        Command::Char { lambda, mu } => {
            let (lambda, mu) = (partition_arg(&lambda)?, partition_arg(&mu)?);
            let value = mn_character(&lambda, &mu)?;
            match f {
                Format::Json => json!({"lambda": lambda.rows(), "mu": mu.rows(), "value": value.to_string()}).to_string(),
                _ => value.to_string(),
            }
        }
        Command::Coeff(CoeffKind::Psi { m, profile, raw }) => {
            scalar(&point_coefficient_psi(capped(m)?, &profile_arg(&profile)?, raw)?, f)
        }
        Command::Coeff(CoeffKind::Delta { ms, profile }) => {
            scalar(&point_coefficient_delta(&uint_list(&ms)?, &profile_arg(&profile)?)?, f)
        }
        Command::LocalModel { profile, x, poles } => local_model(&profile, &x, &poles, f)?,
        Command::Verify { suite, max_m } => {
            let r = match suite {
                Suite::Appendix => verify::appendix()?,
                Suite::Ko => verify::ko(capped(max_m.unwrap_or(5))?, 8),
                Suite::Equality => verify::equality(capped(max_m.unwrap_or(6))?)?,
                Suite::Cycles => verify::cycles()?,
                Suite::Roundtrip => verify::roundtrip(capped(max_m.unwrap_or(6))?)?,
            };
            return Ok(report(&r, f));
        }
    };
    Ok(Output::ok(body))
}

fn capped_class(text: &str) -> Result<ClassExpr, Error> {
    let e = parse_class(text)?;
    capped(e.codim())?;
    Ok(e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.body);
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } => 2,
                _ => 3,
            })
        }
    }
}
