//! `meanval`: exact mean-value counts from the command line.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use meanval_core::apps::{self, TarryWitness};
use meanval_core::engine::{multidim_from_quadratic, multidim_mean_value};
use meanval_core::ffield::{ff_exponent_probe, ff_mean_value, FfSystem, FqPoly, GaloisField};
use meanval_core::padic::{self, PadicContext};
use meanval_core::{
    brute_force_mean_value, exponent_fit, mean_value, EngineConfig, Error, IntPolynomial, PolynomialSystem,
    RationalFunctionSystem, Result, WeightSeq,
};

use output::Format;

#[derive(Parser)]
#[command(name = "meanval", version, about = "Exact counting for Vinogradov-type mean values")]
struct Cli {
    /// Worker threads, or "auto".
    #[arg(long, global = true, default_value = "auto")]
    threads: String,
    /// Memory budget for table builds, in bytes.
    #[arg(long = "memory-cap", global = true)]
    memory_cap: Option<u128>,
    /// Write the payload here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Report wall-clock times (otherwise elapsed_ms is 0).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// Degree of the default system (t, t^2, ..., t^k).
    #[arg(long)]
    k: Option<usize>,
    /// Polynomials separated by ';', each as coefficients constant first, e.g. "0,1;0,0,0,1".
    #[arg(long, allow_hyphen_values = true)]
    system: Option<String>,
}

impl SystemArgs {
    fn resolve(&self) -> Result<PolynomialSystem> {
        match (&self.system, self.k) {
            (Some(text), k) => {
                let sys: PolynomialSystem = text.parse()?;
                if k.is_some_and(|k| k != sys.k()) {
                    return Err(Error::input("--k disagrees with the number of polynomials in --system"));
                }
                Ok(sys)
            }
            (None, Some(k)) if k > 0 => Ok(PolynomialSystem::vinogradov(k)),
            (None, _) => Err(Error::input("give --k or --system")),
        }
    }
}

#[derive(Args, Clone)]
struct IntervalArgs {
    /// Interval [1, X].
    #[arg(long = "X")]
    x: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<i64>,
}

impl IntervalArgs {
    fn resolve(&self) -> Result<(i64, i64)> {
        match (self.x, self.lo, self.hi) {
            (Some(x), None, None) => Ok((1, x)),
            (None, Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::input("give either --X or both --lo and --hi")),
        }
    }

    fn resolve_or(&self, w: &WeightSeq) -> Result<(i64, i64)> {
        if self.x.is_none() && self.lo.is_none() && self.hi.is_none() {
            Ok((w.lo(), w.hi()))
        } else {
            self.resolve()
        }
    }
}

#[derive(Args, Clone)]
struct WeightArgs {
    /// JSON file {"lo":..,"hi":..,"weights":[[re,im],..]}.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// All-ones weights on [LO, HI].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    indicator: Option<Vec<i64>>,
}

impl WeightArgs {
    fn resolve(&self) -> Result<Option<WeightSeq>> {
        match (&self.weights, &self.indicator) {
            (Some(_), Some(_)) => Err(Error::input("give only one of --weights and --indicator")),
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
                WeightSeq::from_json(&text).map(Some)
            }
            (None, Some(b)) => WeightSeq::indicator(b[0], b[1]).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn required(&self) -> Result<WeightSeq> {
        self.resolve()?.ok_or_else(|| Error::input("give --weights or --indicator"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CongruenceKind {
    /// U^B
    U,
    /// U^{B,h}
    Uh,
    /// K^r_{a,b}
    K,
    Bracket,
    Lambda,
}

#[derive(Subcommand)]
enum Command {
    /// Unweighted count J_{s,k}(X).
    Count {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        interval: IntervalArgs,
        #[arg(long)]
        s: usize,
    },
    /// Weighted mean value with Gaussian-integer or floating weights.
    Weighted {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        s: usize,
        /// Divide by rho_0^{2s}.
        #[arg(long)]
        normalize: bool,
    },
    /// Restriction-of-scalars system over Z[sqrt D] on a box.
    Multidim {
        #[arg(long = "D", default_value_t = -2, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        s: usize,
        /// Box [1, Y]^2.
        #[arg(long = "Y")]
        y: Option<i64>,
        /// Box as "lo,hi;lo,hi".
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
        /// Divide each form by its content.
        #[arg(long)]
        primitive: bool,
    },
    /// Mean values modulo p^B.
    Congruence {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value = "u")]
        kind: CongruenceKind,
        #[arg(long)]
        p: u64,
        #[arg(long = "B")]
        b_exp: u32,
        #[arg(long = "H")]
        h_exp: Option<u32>,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        nu: Option<u32>,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        h: Option<u32>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<f64>,
    },
    /// Short-interval congruence count N_B(X, Y).
    Interval {
        #[command(flatten)]
        sys: SystemArgs,
        /// Denominators separated by ';' (default 1).
        #[arg(long, allow_hyphen_values = true)]
        denominators: Option<String>,
        #[arg(long)]
        p: u64,
        #[arg(long = "B")]
        b_exp: u32,
        #[arg(long = "X", allow_hyphen_values = true)]
        x: i64,
        #[arg(long = "Y")]
        y: i64,
        #[arg(long)]
        s: usize,
    },
    /// Counts over F_q[t].
    Ff {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        s: usize,
        /// Polynomials in x separated by ';', coefficients by ',', each
        /// coefficient a t-polynomial with F_q digits separated by ':'.
        #[arg(long)]
        system: Option<String>,
        /// Fit the growth exponent over these degrees instead, e.g. "0,1,2".
        #[arg(long = "d-list")]
        d_list: Option<String>,
    },
    /// Tarry's problem.
    Tarry {
        #[command(subcommand)]
        cmd: TarryCmd,
    },
    /// Exponent calculators for Waring's problem.
    Bounds {
        #[arg(long)]
        d: Option<u64>,
        /// Inclusive range "a..b".
        #[arg(long = "d-range")]
        d_range: Option<String>,
    },
    /// Least-squares growth exponent of J over several X.
    Fit {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        s: usize,
        /// Comma-separated interval lengths.
        #[arg(long = "X-list")]
        x_list: String,
    },
    /// Truncated singular series or integral.
    Singular {
        #[command(subcommand)]
        cmd: SingularCmd,
    },
    /// Engine against brute-force enumeration; exit 1 on disagreement.
    Oracle {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        interval: IntervalArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        normalize: bool,
    },
}

#[derive(Subcommand)]
enum TarryCmd {
    /// Check a witness file {"k":..,"columns":[[..],..]}.
    Verify { file: PathBuf },
    Search {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum SingularCmd {
    Series {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long = "Q")]
        q: u64,
    },
    Integral {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long = "half-width", default_value_t = 20.0)]
        half_width: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
}

enum Failure {
    Core(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Payload {
    body: Json,
    default_format: Format,
    mismatch: Option<String>,
}

fn to_json<T: Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("serializable result")
}

fn payload<T: Serialize>(v: &T) -> Payload {
    Payload {
        body: to_json(v),
        default_format: Format::Json,
        mismatch: None,
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::input(format!("{what}: cannot parse {t:?}"))))
        .collect()
}

fn parse_ff_system(field: &GaloisField, text: &str) -> Result<FfSystem> {
    let polys = text
        .split(';')
        .map(|poly| {
            poly.split(',')
                .map(|coef| {
                    let digits: Vec<u32> = coef
                        .split(':')
                        .map(|d| d.trim().parse().map_err(|_| Error::input(format!("bad F_q element {d:?}"))))
                        .collect::<Result<_>>()?;
                    Ok(FqPoly::new(digits))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FfSystem::new(field.clone(), polys)
}

fn parse_box(text: &str) -> Result<Vec<(i64, i64)>> {
    text.split(';')
        .map(|axis| {
            let v: Vec<i64> = parse_list(axis, "box")?;
            match v[..] {
                [lo, hi] => Ok((lo, hi)),
                _ => Err(Error::input("box axes are \"lo,hi\"")),
            }
        })
        .collect()
}

fn padic_context(p: u64, k: usize, b: u32, h: Option<u32>, c: Option<u32>, nu: Option<u32>) -> Result<PadicContext> {
    let mut ctx = PadicContext::new(p, k, b)?;
    if let Some(h) = h {
        ctx = ctx.with_h(h)?;
    }
    if let Some(c) = c {
        ctx = ctx.with_c(c)?;
    }
    if let Some(nu) = nu {
        ctx = ctx.with_nu(nu)?;
    }
    Ok(ctx)
}

fn run(cmd: Command, cfg: &EngineConfig) -> std::result::Result<Payload, Failure> {
    Ok(match cmd {
        Command::Count { sys, interval, s } => {
            payload(&mean_value(&sys.resolve()?, interval.resolve()?, s, None, false, cfg)?)
        }
        Command::Weighted {
            sys,
            interval,
            weights,
            s,
            normalize,
        } => {
            let w = weights.required()?;
            let iv = interval.resolve_or(&w)?;
            payload(&mean_value(&sys.resolve()?, iv, s, Some(&w), normalize, cfg)?)
        }
        Command::Multidim {
            disc,
            k,
            s,
            y,
            bx,
            primitive,
        } => {
            let mut msys = multidim_from_quadratic(disc, k)?;
            if primitive {
                msys = msys.primitive_forms();
            }
            let bx = match (y, bx) {
                (Some(y), None) => vec![(1, y), (1, y)],
                (None, Some(text)) => parse_box(&text)?,
                _ => return Err(Error::input("give either --Y or --box").into()),
            };
            payload(&multidim_mean_value(&msys, &bx, s, cfg)?)
        }
        Command::Congruence {
            sys,
            weights,
            kind,
            p,
            b_exp,
            h_exp,
            c,
            nu,
            s,
            h,
            r,
            a,
            b,
            delta,
        } => {
            let sys = sys.resolve()?;
            let w = weights.required()?;
            let ctx = padic_context(p, sys.k(), b_exp, h_exp, c, nu)?;
            let need = |v: Option<u32>, name: &str| v.ok_or_else(|| Error::input(format!("--{name} is required")));
            let need_r = || r.ok_or_else(|| Error::input("--r is required"));
            match kind {
                CongruenceKind::U => payload(&padic::u_mean(&ctx, &sys, &w, s, cfg)?),
                CongruenceKind::Uh => payload(&padic::u_mean_restricted(&ctx, &sys, &w, s, h.unwrap_or(ctx.h), cfg)?),
                CongruenceKind::K => {
                    payload(&padic::k_mean(&ctx, &sys, &w, s, need_r()?, need(a, "a")?, need(b, "b")?, cfg)?)
                }
                CongruenceKind::Bracket => {
                    let r = need_r()?;
                    let kval = padic::k_mean(&ctx, &sys, &w, s, r, need(a, "a")?, need(b, "b")?, cfg)?;
                    let ubh = padic::u_mean_restricted(&ctx, &sys, &w, s, ctx.h, cfg)?;
                    let delta = delta.ok_or_else(|| Error::input("--delta is required"))?;
                    let value = padic::bracket(&ctx, sys.k(), &kval, &ubh, delta, r)?;
                    payload(&json!({"kind": "bracket", "value": format!("{value:.15e}"), "K": kval, "U_BH": ubh}))
                }
                CongruenceKind::Lambda => {
                    let ratio = padic::lambda_ratio(&ctx, &sys, &w, s, cfg)?;
                    payload(&json!({"kind": "lambda", "B": ctx.b, "H": ctx.h, "ratio": format!("{ratio:.15e}")}))
                }
            }
        }
        Command::Interval {
            sys,
            denominators,
            p,
            b_exp,
            x,
            y,
            s,
        } => {
            let nums = sys.resolve()?;
            let rsys = match denominators {
                None => RationalFunctionSystem::from_polynomials(&nums),
                Some(text) => {
                    let dens: Vec<IntPolynomial> =
                        text.split(';').map(|t| t.trim().parse()).collect::<Result<_>>()?;
                    RationalFunctionSystem::new(nums.polys().to_vec(), dens)?
                }
            };
            let ctx = PadicContext::new(p, rsys.k(), b_exp)?;
            payload(&padic::interval_congruence_count(&ctx, &rsys, x, y, s, cfg)?)
        }
        Command::Ff {
            q,
            d,
            k,
            s,
            system,
            d_list,
        } => {
            if let Some(list) = d_list {
                let k = k.ok_or_else(|| Error::input("--k is required for --d-list"))?;
                payload(&ff_exponent_probe(q, k, s, &parse_list::<u32>(&list, "--d-list")?, cfg)?)
            } else {
                let field = GaloisField::new(q)?;
                let sys = match (system, k) {
                    (Some(text), _) => parse_ff_system(&field, &text)?,
                    (None, Some(k)) => FfSystem::vinogradov(field, k),
                    (None, None) => return Err(Error::input("give --k or --system").into()),
                };
                let d = d.ok_or_else(|| Error::input("--d is required"))?;
                let value = ff_mean_value(&sys, d, s, cfg)?;
                payload(&json!({"q": q, "d": d, "k": sys.k(), "s": s, "value": value.to_string()}))
            }
        }
        Command::Tarry { cmd } => match cmd {
            TarryCmd::Verify { file } => {
                let text =
                    std::fs::read_to_string(&file).map_err(|e| Error::input(format!("{}: {e}", file.display())))?;
                let w: TarryWitness =
                    serde_json::from_str(&text).map_err(|e| Error::input(format!("witness: {e}")))?;
                payload(&apps::verify_tarry(&w))
            }
            TarryCmd::Search { k, h, s, bound } => payload(&apps::search_tarry(k, h, s, bound, cfg.memory_cap / 64)?),
        },
        Command::Bounds { d, d_range } => {
            let ds: Vec<u64> = match (d, d_range) {
                (Some(d), None) => vec![d],
                (None, Some(r)) => {
                    let (a, b) = r.split_once("..").ok_or_else(|| Error::input("--d-range is \"a..b\""))?;
                    let a: u64 = a.trim().parse().map_err(|_| Error::input("--d-range start"))?;
                    let b: u64 = b.trim().parse().map_err(|_| Error::input("--d-range end"))?;
                    if a > b || b - a > 100_000 {
                        return Err(Error::input("--d-range must be nonempty and at most 100000 long").into());
                    }
                    (a..=b).collect()
                }
                _ => return Err(Error::input("give either --d or --d-range").into()),
            };
            let rows = ds.into_iter().map(apps::bound_report).collect::<Result<Vec<_>>>()?;
            Payload {
                body: to_json(&rows),
                default_format: Format::Csv,
                mismatch: None,
            }
        }
        Command::Fit { sys, s, x_list } => {
            let sys = sys.resolve()?;
            let xs: Vec<i64> = parse_list(&x_list, "--X-list")?;
            let vals = xs
                .iter()
                .map(|&x| Ok((x as f64, mean_value(&sys, (1, x), s, None, false, cfg)?)))
                .collect::<Result<Vec<_>>>()?;
            payload(&exponent_fit(&vals, s, sys.k())?)
        }
        Command::Singular { cmd } => match cmd {
            SingularCmd::Series { k, s, q } => payload(&apps::singular_series(k, s, q)?),
            SingularCmd::Integral {
                k,
                s,
                half_width,
                points,
            } => payload(&apps::singular_integral(k, s, half_width, points)?),
        },
        Command::Oracle {
            sys,
            interval,
            weights,
            s,
            normalize,
        } => {
            let sys = sys.resolve()?;
            let w = weights.resolve()?;
            let iv = match &w {
                Some(w) => interval.resolve_or(w)?,
                None => interval.resolve()?,
            };
            let engine = mean_value(&sys, iv, s, w.as_ref(), normalize, cfg)?;
            let oracle = brute_force_mean_value(&sys, iv, s, w.as_ref(), normalize, meanval_core::engine::ORACLE_CAP)?;
            let agree = match (engine.error_bound, &engine.value, &oracle.value) {
                (Some(eb), a, b) => (a.to_f64() - b.to_f64()).abs() <= eb.max(1e-9 * b.to_f64().abs()),
                (None, a, b) => a == b,
            };
            Payload {
                body: json!({"agree": agree, "engine": engine, "oracle": oracle}),
                default_format: Format::Json,
                mismatch: (!agree).then(|| format!("engine {} != oracle {}", engine.value, oracle.value)),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.threads != "auto" {
        let n: usize = match cli.threads.parse() {
            Ok(n) if n > 0 => n,
            _ => {
                eprintln!("error: --threads takes a positive integer or \"auto\"");
                return ExitCode::from(2);
            }
        };
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut cfg = EngineConfig::default();
    if let Some(cap) = cli.memory_cap {
        cfg.memory_cap = cap;
    }
    let result = run(cli.cmd, &cfg).and_then(|mut p| {
        if !cli.timing {
            output::strip_timing(&mut p.body);
        }
        let text = output::render(&p.body, cli.format.unwrap_or(p.default_format))?;
        output::emit(&text, cli.output.as_deref())?;
        match p.mismatch {
            Some(m) => Err(Failure::Mismatch(m)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => 3,
                _ => 2,
            })
        }
    }
}
