use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wahl_core::canideal::{first_syzygies, normal_sections, quadric_generators, CanonicalPresentation};
use wahl_core::curvemodel::PlaneCurve;
use wahl_core::exactcore::PrimeField;
use wahl_core::extender::{extend, random_ribbon, ribbon_basis, universal_equations};
use wahl_core::gaussmap::{gauss_corank, mult_rank, wahl_corank, GaussReport};
use wahl_core::planeext::{admissible_cubic, extension_system_seeded, surface_sample};

use crate::acceptance::{self, AcceptanceConfig};
use crate::corpus::{self, CORPUS};
use crate::curvefile::{parse_cubic, CurveFile};
use crate::error::{exit, CliError, CliResult};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "wahl",
    version,
    about = "Gaussian maps, canonical ideals and extensions of plane curves over F_p"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// `corpus:NAME` or a path to a curve file
    #[arg(long, global = true)]
    pub curve: Option<String>,
    /// Prime modulus; defaults to the curve file's prime or one drawn from the seed
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of evaluation points
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Report wall-clock time
    #[arg(long, global = true)]
    pub timing: bool,
    /// Attach the relevant export (curve, presentation, equations or sample)
    #[arg(long, global = true)]
    pub dump: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Arithmetic genus of the plane model
    Genus,
    /// Corank of the Wahl map
    Corank,
    /// Corank of the Gaussian map Phi_{omega^k, omega}
    Gauss {
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Rank of the multiplication map H^0(omega^k) x H^0(omega) -> H^0(omega^(k+1))
    Mult {
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Dimension of the sections of N(-k) of the canonical curve
    Normal {
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Equations of the surface extension along one ribbon
    Extend {
        #[arg(long, conflicts_with = "random_ribbon")]
        ribbon_index: Option<usize>,
        #[arg(long)]
        random_ribbon: bool,
    },
    /// Equations of the universal extension
    Universal,
    /// Extension of a plane curve through a cubic
    PlaneExtend {
        /// `auto` or a file of `term i j k coeff` lines
        #[arg(long, default_value = "auto")]
        cubic: String,
    },
    /// Run the acceptance suite
    Verify {
        /// Only this criterion (1-12)
        #[arg(long)]
        criterion: Option<usize>,
        /// How many primes and seeds to use
        #[arg(long, value_enum, default_value_t = VerifyMode::Full)]
        mode: VerifyMode,
    },
    /// List the built-in curves
    Corpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    /// Two primes, two seeds
    Full,
    /// One prime, one seed
    Quick,
}

/// A loaded curve with the prime and seed that produced it.
pub struct Context {
    pub curve: PlaneCurve,
    pub label: String,
    pub seed: u64,
    pub points: Option<usize>,
}

impl GlobalOpts {
    fn field(&self, declared: Option<u64>) -> CliResult<PrimeField> {
        match self.prime.or(declared) {
            Some(p) => Ok(PrimeField::new(p)?),
            None => Ok(PrimeField::random(self.seed)),
        }
    }

    pub fn load(&self) -> CliResult<Context> {
        let source = self
            .curve
            .as_deref()
            .ok_or_else(|| CliError::Usage("--curve is required for this command".into()))?;
        let curve = match source.strip_prefix("corpus:") {
            Some(name) => {
                let entry =
                    corpus::lookup(name).ok_or_else(|| CliError::Usage(format!("no corpus curve named {name:?}")))?;
                entry.curve(self.field(None)?)?
            }
            None => {
                let cf = CurveFile::read(&PathBuf::from(source))?;
                cf.to_curve(self.field(cf.prime)?)?
            }
        };
        Ok(Context {
            label: curve.name().to_string(),
            curve,
            seed: self.seed,
            points: self.points,
        })
    }
}

impl Context {
    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command);
        r.field("curve", &self.label)
            .field("p", self.curve.field().modulus())
            .field("seed", self.seed)
            .field("genus", self.curve.genus());
        r
    }

    fn presentation(&self) -> CliResult<CanonicalPresentation> {
        let pres = quadric_generators(&self.curve, self.seed, self.points)?;
        Ok(first_syzygies(pres, self.seed)?)
    }
}

fn gauss_fields(r: &mut Report, g: &GaussReport) {
    r.field("k", g.k)
        .field("points", g.points)
        .field("dim_source", g.dim_source)
        .field("dim_target", g.dim_target)
        .field("rank", g.rank)
        .field("corank", g.corank);
}

/// A finished invocation: the report and the exit status it maps to.
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let start = Instant::now();
    let opts = &cli.global;
    let mut report = match &cli.command {
        Command::Corpus => corpus_report(),
        Command::Verify { criterion, mode } => return verify(opts, *criterion, *mode),
        cmd => {
            let ctx = opts.load()?;
            let mut r = run_curve_command(cmd, &ctx, opts.dump)?;
            if opts.dump && matches!(cmd, Command::Genus) {
                r.dump("curve", CurveFile::render(&ctx.curve));
            }
            r
        }
    };
    if opts.timing {
        report.set_elapsed(start.elapsed());
    }
    Ok(Outcome { report, exit: exit::OK })
}

fn run_curve_command(cmd: &Command, ctx: &Context, dump: bool) -> CliResult<Report> {
    let c = &ctx.curve;
    Ok(match cmd {
        Command::Genus => {
            let mut r = ctx.report("genus");
            let mults: Vec<String> = c.singular_points().iter().map(|s| s.m.to_string()).collect();
            r.field("degree", c.degree())
                .field("singular_multiplicities", mults.join(","))
                .field("gonality", c.gonality());
            r
        }
        Command::Corank => {
            let g = wahl_corank(c, ctx.seed, ctx.points)?;
            let mut r = ctx.report("corank");
            gauss_fields(&mut r, &g);
            r
        }
        Command::Gauss { k } => {
            let g = gauss_corank(c, *k, ctx.seed, ctx.points)?;
            let mut r = ctx.report("gauss");
            gauss_fields(&mut r, &g);
            r
        }
        Command::Mult { k } => {
            let m = mult_rank(c, *k, ctx.seed, ctx.points)?;
            let mut r = ctx.report("mult");
            r.field("k", m.k)
                .field("points", m.points)
                .field("dim_source", m.dim_left * m.dim_right)
                .field("dim_target", m.dim_target)
                .field("rank", m.rank)
                .field("corank", m.corank);
            if let Some(q) = m.sym_kernel {
                r.field("quadrics", q);
            }
            r
        }
        Command::Normal { k } => {
            let pres = ctx.presentation()?;
            let n = normal_sections(&pres, *k, ctx.seed)?;
            let mut r = ctx.report("normal");
            r.field("k", n.k)
                .field("quadrics", pres.m())
                .field("linear_syzygies", pres.m1())
                .field("dim", n.dim);
            if dump {
                r.dump("presentation", pres.to_text());
            }
            r
        }
        Command::Extend {
            ribbon_index,
            random_ribbon: random,
        } => {
            let pres = ctx.presentation()?;
            let basis = ribbon_basis(&pres, ctx.seed)?;
            let v = match (ribbon_index, random) {
                (Some(i), _) => basis.get(*i).cloned().ok_or_else(|| {
                    CliError::Usage(format!("ribbon index {i} out of range (basis has {})", basis.len()))
                })?,
                (None, true) => random_ribbon(&pres, &basis, ctx.seed),
                (None, false) => return Err(CliError::Usage("give --ribbon-index N or --random-ribbon".into())),
            };
            let (data, surf) = extend(&pres, &v)?;
            let mut r = ctx.report("extend");
            r.field("quadrics", pres.m())
                .field("linear_syzygies", pres.m1())
                .field("ribbons", basis.len())
                .field("ribbon", ribbon_index.map_or("random".to_string(), |i| i.to_string()))
                .field("h_zero", data.h_v.iter().all(|&x| x == 0))
                .field("residue_zero", surf.residue.iter().all(|&x| x == 0))
                .field("certificate", "ok");
            if dump {
                r.dump("equations", surf.to_text());
            }
            r
        }
        Command::Universal => {
            let pres = ctx.presentation()?;
            let basis = ribbon_basis(&pres, ctx.seed)?;
            let u = universal_equations(&pres, &basis)?;
            let mut r = ctx.report("universal");
            r.field("quadrics", pres.m())
                .field("ribbons", basis.len())
                .field("variables", u.nvars())
                .field("equations", u.equations.len());
            if dump {
                r.dump("equations", u.to_text());
            }
            r
        }
        Command::PlaneExtend { cubic } => {
            let (sys, attempts) = if cubic == "auto" {
                let (_, sys, attempts) = admissible_cubic(c, ctx.seed, 20)?;
                (sys, attempts)
            } else {
                let text = std::fs::read_to_string(cubic)?;
                let t = parse_cubic(&text, cubic, c.field())?;
                (extension_system_seeded(c, &t, ctx.seed)?, 1)
            };
            let m = ctx.points.unwrap_or(2 * c.genus() + 10);
            let s = surface_sample(&sys, m, ctx.seed)?;
            let mut r = ctx.report("plane-extend");
            r.field("cubic", format!("{}", sys.cubic))
                .field("attempts", attempts)
                .field("simple_basepoints", sys.simple_basepoints)
                .field("dim", sys.dim())
                .field("sample_points", m)
                .field("cubic_rank", s.cubic_rank)
                .field("curve_span", s.curve_span)
                .field("joint_rank", s.joint_rank)
                .field("general_rank", s.general_rank);
            if dump {
                r.dump("sample", s.to_text());
            }
            r
        }
        Command::Corpus | Command::Verify { .. } => unreachable!("handled without a curve"),
    })
}

fn corpus_report() -> Report {
    let mut r = Report::new("corpus");
    r.field("count", CORPUS.len());
    for e in CORPUS {
        let mults: Vec<String> = e.multiplicities.iter().map(usize::to_string).collect();
        r.field(
            e.name,
            format!(
                "degree={} singular={} genus={} gonality={} seed={}",
                e.degree,
                if mults.is_empty() { "-".into() } else { mults.join(",") },
                e.genus(),
                e.gonality,
                e.seed
            ),
        );
    }
    r
}

fn verify(opts: &GlobalOpts, only: Option<usize>, mode: VerifyMode) -> CliResult<Outcome> {
    let mut config = match mode {
        VerifyMode::Full => AcceptanceConfig::full(),
        VerifyMode::Quick => AcceptanceConfig::quick(),
    };
    if let Some(p) = opts.prime {
        config.primes = vec![PrimeField::new(p)?];
    }
    let ids: Vec<usize> = match only {
        Some(i) if (1..=acceptance::CRITERIA).contains(&i) => vec![i],
        Some(i) => return Err(CliError::Usage(format!("no criterion {i}"))),
        None => (1..=acceptance::CRITERIA).collect(),
    };
    let mut r = Report::new("verify");
    let mut failed = 0;
    for id in ids {
        let res = acceptance::run(id, &config);
        if !res.passed() {
            failed += 1;
        }
        r.field(&format!("criterion.{id}"), res.line());
    }
    r.field("failed", failed);
    Ok(Outcome {
        report: r,
        exit: if failed > 0 { exit::CERTIFICATE } else { exit::OK },
    })
}
