use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mopasym::config::{OutputFormat, PanelEntry, RunConfig};
use mopasym::families::FamilySpec;
use mopasym::harness::{run_mh_experiment, run_zero_scaling, theorem_for};
use mopasym::moments::construct_mop;
use mopasym::roots::{bessel_zeros, genbessel_zeros, poly_real_zeros, ZeroList};
use mopasym::verify::run_verify;
use mopasym::{BigPoly, Error, MultiIndex, Param, PrecisionContext};
use rug::{Float, Rational};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mopasym", version, about = "Multiple orthogonal polynomials and their hard-edge scaling limits")]
struct Cli {
    /// Significant decimal digits (overrides the config file).
    #[arg(long, global = true, env = "MOPASYM_DIGITS")]
    digits: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML run configuration; the bundled default panel otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Value of the monic polynomial at x.
    Eval {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        x: String,
    },
    /// Coefficients in increasing degree.
    Coeffs {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Coefficients of the explicit normalized form instead of the monic polynomial.
        #[arg(long)]
        normalized: bool,
    },
    /// Zeros of a family polynomial, of 0F_r(-; a+1; -z), or of J_a.
    Zeros {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, conflicts_with = "bessel")]
        genbessel: bool,
        #[arg(long)]
        bessel: bool,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Sup errors of the scaled polynomials against their limits.
    MhTable {
        /// Theorem to run; every panel entry with this theorem when no family is given.
        #[arg(long)]
        theorem: Option<u8>,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Scaled k-th zeros against their limits.
    ZeroScaling {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Runs the verification suite on the configured panels.
    Verify,
}

#[derive(Args, Default)]
struct FamilyArgs {
    /// jacobiangelesco, jacobipineiro, mlag1, mlag2, sorokin, kbessel, ibessel or meijerg.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    #[arg(long)]
    cs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nus: Option<String>,
    /// Multi-index, comma separated.
    #[arg(long)]
    n: Option<String>,
    /// Ratios for vector indices, comma separated.
    #[arg(long)]
    q: Option<String>,
}

fn param(name: &str, v: &Option<String>) -> Result<Param, Error> {
    let s = v.as_ref().ok_or_else(|| Error::InvalidParameters(format!("--{name} is required")))?;
    Param::parse(s)
}

fn params(name: &str, v: &Option<String>) -> Result<Vec<Param>, Error> {
    let s = v.as_ref().ok_or_else(|| Error::InvalidParameters(format!("--{name} is required")))?;
    s.split(',').map(Param::parse).collect()
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, Error> {
        let Some(name) = &self.family else { return Ok(None) };
        let fam = match name.as_str() {
            "jacobiangelesco" => FamilySpec::JacobiAngelesco {
                alpha: param("alpha", &self.alpha)?,
                beta: param("beta", &self.beta)?,
                gamma: param("gamma", &self.gamma)?,
            },
            "jacobipineiro" => FamilySpec::JacobiPineiro { alphas: params("alphas", &self.alphas)?, beta: param("beta", &self.beta)? },
            "mlag1" => FamilySpec::MLaguerre1 { alphas: params("alphas", &self.alphas)? },
            "mlag2" => FamilySpec::MLaguerre2 { alpha: param("alpha", &self.alpha)?, cs: params("cs", &self.cs)? },
            "sorokin" => FamilySpec::SorokinLaguerre {
                p: param("p", &self.p)?,
                r: self.r.ok_or_else(|| Error::InvalidParameters("--r is required".into()))?,
            },
            "kbessel" => FamilySpec::KBesselMop { alpha: param("alpha", &self.alpha)?, nu: param("nu", &self.nu)? },
            "ibessel" => FamilySpec::IBesselMop { nu: param("nu", &self.nu)?, c: param("c", &self.c)? },
            "meijerg" => FamilySpec::MeijerGMop { nus: params("nus", &self.nus)? },
            other => return Err(Error::InvalidParameters(format!("unknown family {other:?}"))),
        };
        fam.validate()?;
        Ok(Some(fam))
    }

    fn require(&self) -> Result<FamilySpec, Error> {
        self.spec()?.ok_or_else(|| Error::InvalidParameters("--family is required".into()))
    }

    fn index(&self) -> Result<MultiIndex, Error> {
        let s = self.n.as_ref().ok_or_else(|| Error::InvalidParameters("--n is required".into()))?;
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("index {t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        MultiIndex::new(parts)
    }

    fn entry(&self) -> Result<Option<PanelEntry>, Error> {
        let Some(family) = self.spec()? else { return Ok(None) };
        let q = self.q.as_ref().map(|s| s.split(',').map(Param::parse).collect::<Result<Vec<_>, _>>()).transpose()?;
        Ok(Some(PanelEntry { family, q }))
    }
}

/// Output sink honoring `--format` and `--out`.
struct Out {
    format: OutputFormat,
    digits: u32,
}

impl Out {
    fn float(&self, v: &Float) -> String {
        if v.is_zero() {
            return "0".into();
        }
        // rug counts significant digits here, unlike f64
        format!("{:.*e}", self.digits as usize, v)
    }

    fn f64(&self, v: f64) -> String {
        format!("{:.*e}", (self.digits as usize).min(17) - 1, v)
    }

    /// Rows as CSV with a header, or as a JSON array of objects.
    fn table(&self, header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Error> {
        match self.format {
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
                w.write_record(header).map_err(io)?;
                for r in &rows {
                    w.write_record(r).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
                Ok(String::from_utf8(bytes).expect("utf-8"))
            }
            OutputFormat::Json => {
                let arr: Vec<Value> = rows
                    .into_iter()
                    .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.into_iter().map(Value::String)).collect()))
                    .collect();
                Ok(serde_json::to_string_pretty(&arr).expect("serializable") + "\n")
            }
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Error::Config(format!("stdout: {e}")))
        }
    }
}

fn monic_poly(fam: &FamilySpec, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<Poly, Error> {
    if fam.params_exact() && fam.moments_exact() {
        Ok(Poly::Exact(construct_mop::<Rational>(fam, idx, ctx)?.poly))
    } else {
        Ok(Poly::Real(construct_mop::<Float>(fam, idx, ctx)?.poly))
    }
}

fn normalized_poly(fam: &FamilySpec, idx: &MultiIndex, ctx: &PrecisionContext) -> Result<Poly, Error> {
    if fam.params_exact() {
        Ok(Poly::Exact(fam.normalized_coefficients::<Rational>(idx, ctx)?))
    } else {
        Ok(Poly::Real(fam.normalized_coefficients::<Float>(idx, ctx)?))
    }
}

enum Poly {
    Exact(BigPoly<Rational>),
    Real(BigPoly<Float>),
}

impl Poly {
    fn coeff_strings(&self, out: &Out) -> Vec<String> {
        match self {
            Poly::Exact(p) => p.coeffs().iter().map(Rational::to_string).collect(),
            Poly::Real(p) => p.coeffs().iter().map(|c| out.float(c)).collect(),
        }
    }

    fn eval_string(&self, x: &Param, out: &Out, ctx: &PrecisionContext) -> String {
        match (self, x.as_rational()) {
            (Poly::Exact(p), Some(q)) => p.eval(q).to_string(),
            (Poly::Exact(p), None) => out.float(&p.to_float(ctx).eval(&x.to_float(ctx))),
            (Poly::Real(p), _) => out.float(&p.eval(&x.to_float(ctx))),
        }
    }
}

fn zero_rows(kind: &str, z: &ZeroList, out: &Out) -> Vec<Vec<String>> {
    z.values
        .iter()
        .enumerate()
        .map(|(k, v)| vec![kind.to_string(), (k + 1).to_string(), out.float(v), out.f64(z.achieved_tolerance)])
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(d) = cli.digits {
        cfg.digits = d;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if cli.out.is_some() {
        cfg.output = cli.out.clone();
    }
    let ctx = PrecisionContext::new(cfg.digits)?;
    cfg.validate()?;
    let out = Out { format: cfg.format, digits: cfg.digits };
    let text = match &cli.cmd {
        Cmd::Eval { fam, x } => {
            let spec = fam.require()?;
            let idx = fam.index()?;
            let x = Param::parse(x)?;
            let monic = monic_poly(&spec, &idx, &ctx)?.eval_string(&x, &out, &ctx);
            match out.format {
                OutputFormat::Csv => format!("{monic}\n"),
                OutputFormat::Json => {
                    let normalized = if spec.has_explicit_formula() {
                        Value::String(normalized_poly(&spec, &idx, &ctx)?.eval_string(&x, &out, &ctx))
                    } else {
                        Value::Null
                    };
                    let v = json!({
                        "family": spec.to_string(),
                        "n": idx.parts(),
                        "x": x.to_string(),
                        "monic": monic,
                        "normalized": normalized,
                    });
                    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
                }
            }
        }
        Cmd::Coeffs { fam, normalized } => {
            let spec = fam.require()?;
            let idx = fam.index()?;
            let poly = if *normalized { normalized_poly(&spec, &idx, &ctx)? } else { monic_poly(&spec, &idx, &ctx)? };
            let rows = poly.coeff_strings(&out).into_iter().enumerate().map(|(k, c)| vec![k.to_string(), c]).collect();
            out.table(&["k", "coefficient"], rows)?
        }
        Cmd::Zeros { fam, genbessel, bessel, count } => {
            let rows = if *genbessel {
                let a: Vec<Float> = params("alphas", &fam.alphas)?.iter().map(|p| p.to_float(&ctx)).collect();
                zero_rows("genbessel", &genbessel_zeros(&a, *count, &ctx)?, &out)
            } else if *bessel {
                let a = param("alpha", &fam.alpha)?.to_float(&ctx);
                zero_rows("bessel", &bessel_zeros(&a, *count, &ctx)?, &out)
            } else {
                let spec = fam.require()?;
                let idx = fam.index()?;
                // real zeros of a monic polynomial lie within 1 + max |c_i|
                let z = match monic_poly(&spec, &idx, &ctx)? {
                    Poly::Exact(p) => {
                        let b = p.coeffs().iter().map(|c| Rational::from(c.abs_ref())).max().unwrap_or_default() + 1u32;
                        poly_real_zeros(&p, &Rational::from(-&b), Some(&b), None, &ctx)?
                    }
                    Poly::Real(p) => {
                        let b = p.coeffs().iter().map(|c| c.to_rational().unwrap_or_default().abs()).max().unwrap_or_default().ceil() + 1u32;
                        poly_real_zeros(&p, &Rational::from(-&b), Some(&b), None, &ctx)?
                    }
                };
                zero_rows("polynomial", &z, &out)
            };
            out.table(&["kind", "k", "value", "tolerance"], rows)?
        }
        Cmd::MhTable { theorem, fam } => {
            let entries: Vec<PanelEntry> = match fam.entry()? {
                Some(e) => vec![e],
                None => cfg.mh.iter().filter(|e| theorem.is_none_or(|t| theorem_for(&e.family) == t)).cloned().collect(),
            };
            if let (Some(t), Some(e)) = (theorem, entries.first()) {
                if theorem_for(&e.family) != *t {
                    return Err(Error::InvalidParameters(format!("theorem {t} does not cover {}", e.family)));
                }
            }
            if entries.is_empty() {
                return Err(Error::Config("no matching panel entries".into()));
            }
            let mut rows = Vec::new();
            for e in &entries {
                let rep = run_mh_experiment(&e.experiment()?, &cfg.n_grid, &cfg.z_grid, &ctx)?;
                let order = rep.estimated_order.map(|o| out.f64(o)).unwrap_or_default();
                for ((n, z), err) in rep.n_grid.iter().zip(&rep.z_sup).zip(&rep.sup_errors) {
                    rows.push(vec![rep.theorem_id.to_string(), n.to_string(), z.to_string(), out.float(err), order.clone()]);
                }
            }
            out.table(&["theorem", "n", "z_sup", "sup_error", "order_estimate"], rows)?
        }
        Cmd::ZeroScaling { fam, k } => {
            let entries: Vec<PanelEntry> = match fam.entry()? {
                Some(e) => vec![e],
                None => cfg.zero_scaling.clone(),
            };
            let ks: Vec<usize> = match k {
                Some(k) => vec![*k],
                None => (cfg.k_range[0]..=cfg.k_range[1]).collect(),
            };
            let mut rows = Vec::new();
            for e in &entries {
                for &k in &ks {
                    let rep = run_zero_scaling(&e.family, &e.ratios()?, k, &cfg.zero_n_grid, &ctx)?;
                    for ((n, z), rel) in rep.n_grid.iter().zip(&rep.scaled_zeros).zip(&rep.rel_errors) {
                        rows.push(vec![
                            e.family.name().to_string(),
                            k.to_string(),
                            n.to_string(),
                            out.float(z),
                            out.float(&rep.target),
                            out.f64(*rel),
                        ]);
                    }
                }
            }
            out.table(&["family", "k", "n", "scaled_zero", "target", "rel_error"], rows)?
        }
        Cmd::Verify => {
            let rep = run_verify(&cfg, &ctx)?;
            let text = match out.format {
                OutputFormat::Json => serde_json::to_string_pretty(&rep).expect("serializable") + "\n",
                OutputFormat::Csv => {
                    let rows = rep
                        .checks
                        .iter()
                        .map(|c| vec![c.criterion.to_string(), c.label.clone(), c.status.to_string(), c.detail.clone()])
                        .collect();
                    out.table(&["criterion", "label", "status", "detail"], rows)?
                }
            };
            emit(&text, &cfg.output)?;
            return Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    emit(&text, &cfg.output)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {}", e.name(), e.to_string().replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
