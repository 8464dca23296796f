//! Command-line surface: every subcommand reads .ht files, prints stable
//! `key: value` report lines (or a bare value for the scalar functions), and
//! exits 0 on success, 1 on domain errors, 2 on resource-guard stops.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundReport, ProbeSampler};
use crate::combinat::{self, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::genfun::{self, CharacterSpec, GenFunSpec, WeightFunction};
use crate::ht;
use crate::permanent;
use crate::polytope::{self, PolytopeSpec, StochKind};
use crate::scalar::{to_decimal, Rational};
use crate::tensor::Tensor;

#[derive(Parser)]
#[command(name = "tenper", version, about = "Exact permanent-type functions of dense tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random draw (probe subcommand).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print rationals as decimals with this many fractional digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<usize>,

    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Node budget for exhaustive enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum PerDef {
    /// Axis 1 anchors the injections.
    Eq1,
    /// The first minimum-extent axis anchors and carries the identity.
    Eq2,
}

#[derive(Clone, Copy, ValueEnum)]
enum GtfMode {
    Full,
    #[value(name = "2per")]
    TwoPer,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Line,
    Plane,
}

impl KindArg {
    fn kind(self) -> StochKind {
        match self {
            KindArg::Line => StochKind::Line,
            KindArg::Plane => StochKind::Plane,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichBound {
    Prop1,
    Prop2,
    Mb1,
    Mb2,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Exact,
    Sinkhorn,
}

#[derive(Subcommand)]
enum Command {
    /// k-permanent of a tensor (default k = 1).
    Per {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = PerDef::Eq1)]
        def: PerDef,
    },
    /// Combinatorial hyperdeterminant.
    Det { file: PathBuf },
    /// Generalized tensor function under character tables.
    Gtf {
        file: PathBuf,
        /// Comma-separated character specs: "trivial", "sign",
        /// "trivial-group", or a table file path; one spec applies to every
        /// axis, or give one per axis.
        #[arg(long)]
        chars: String,
        #[arg(long, value_enum, default_value_t = GtfMode::Full)]
        mode: GtfMode,
    },
    /// k-generalized tensor function under a named weight.
    Kgtf {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// one | indicator-positive | product-sign
        #[arg(long)]
        weight: String,
    },
    /// Stochasticity check.
    Check {
        file: PathBuf,
        /// line | plane | an explicit level k
        #[arg(long)]
        stochastic: String,
    },
    /// Enumerate polytope vertices exactly.
    Vertices {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        /// Tensor order (2 gives the doubly stochastic baseline).
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Directory for the vertex-set archive.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tight-constraint extremality test.
    Extreme {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
    /// Exact convex-hull membership against generator tensors.
    Hull {
        file: PathBuf,
        /// Directory of .ht/.htv files, or a single such file.
        #[arg(long)]
        generators: PathBuf,
    },
    /// Latin squares of order n.
    Latin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// k-per index patterns of P_{d,n,k}.
    Patterns {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Permanent bounds and structural zero tests.
    Bounds {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: Option<WhichBound>,
    },
    /// Emit a named witness tensor.
    Builtin {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample line-stochastic tensors and report the minimum permanent.
    Probe {
        /// 4 (even order) or 5 (odd dimension); informational.
        #[arg(long)]
        conjecture: Option<u32>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = SamplerArg::Exact)]
        sampler: SamplerArg,
    },
}

/// Entry point shared by the binary and the tests. Returns the exit code.
pub fn run<I, S>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };

    let outcome = pool.install(|| dispatch(&cli, out));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    decimal: Option<usize>,
}

impl Printer<'_> {
    fn header(&mut self) {
        if let Some(p) = self.decimal {
            let _ = writeln!(self.out, "precision: decimal, {p} digits");
        }
    }

    fn value(&self, r: &Rational) -> String {
        match self.decimal {
            Some(p) => to_decimal(r, p),
            None => r.to_string(),
        }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", text.as_ref());
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let mut pr = Printer {
        out,
        decimal: cli.decimal,
    };
    pr.header();
    match &cli.command {
        Command::Per { file, k, def } => {
            let t = read_tensor(file)?;
            let v = match (k, def) {
                (1, PerDef::Eq1) => permanent::per1(&t)?,
                (1, PerDef::Eq2) => permanent::per1_min(&t)?,
                (_, PerDef::Eq2) => {
                    return Err(Error::Precondition(
                        "--def eq2 applies to k = 1 only".into(),
                    ))
                }
                (k, PerDef::Eq1) => permanent::kper(&t, *k)?,
            };
            let text = pr.value(&v);
            pr.line(text);
        }
        Command::Det { file } => {
            let t = read_tensor(file)?;
            let v = genfun::hyperdet(&t)?;
            let text = pr.value(&v);
            pr.line(text);
        }
        Command::Gtf { file, chars, mode } => {
            let t = read_tensor(file)?;
            let specs = parse_char_specs(chars, &t)?;
            let v = match mode {
                GtfMode::Full => {
                    let spec = if specs.len() == 1 {
                        GenFunSpec::Uniform(specs.into_iter().next().expect("one"))
                    } else {
                        GenFunSpec::PerAxis(specs)
                    };
                    genfun::gtf(&t, &spec)?
                }
                GtfMode::TwoPer => {
                    if specs.len() != 1 {
                        return Err(Error::Precondition(
                            "--mode 2per takes exactly one character spec".into(),
                        ));
                    }
                    genfun::gtf2_3d(&t, &specs[0], None)?
                }
            };
            let text = pr.value(&v);
            pr.line(text);
        }
        Command::Kgtf { file, k, weight } => {
            let t = read_tensor(file)?;
            let f = WeightFunction::from_name(weight)?;
            let v = genfun::kgtf(&t, *k, f)?;
            let text = pr.value(&v);
            pr.line(text);
        }
        Command::Check { file, stochastic } => {
            let t = read_tensor(file)?;
            let k = match stochastic.as_str() {
                "line" => 1,
                "plane" => 2,
                other => other.parse().map_err(|_| {
                    Error::Precondition(format!(
                        "--stochastic takes line, plane, or a level; got {other:?}"
                    ))
                })?,
            };
            let ok = polytope::is_k_stochastic(&t, k)?;
            pr.line(format!("k: {k}"));
            pr.line(format!("stochastic: {ok}"));
        }
        Command::Vertices { kind, n, d, out } => {
            let spec = PolytopeSpec::new(*d, *n, kind.kind())?;
            let set = polytope::enumerate_vertices(&spec)?;
            pr.line(format!(
                "{} vertices ({} zero-one, {} half-valued)",
                set.total(),
                set.zero_one_count(),
                set.non_zero_one_count()
            ));
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).map_err(|e| io_error(dir, &e))?;
                let path = dir.join(format!("vertices-{}-n{}.htv", spec.kind_name(), n));
                let text = ht::vertexset_to_text(set.vertices());
                std::fs::write(&path, text).map_err(|e| io_error(&path, &e))?;
                pr.line(format!("wrote: {}", path.display()));
            }
        }
        Command::Extreme { file, kind, n, d } => {
            let t = read_tensor(file)?;
            let spec = PolytopeSpec::new(*d, *n, kind.kind())?;
            let extreme = polytope::is_extreme(&t, &spec)?;
            pr.line("member: true");
            pr.line(format!("extreme: {extreme}"));
        }
        Command::Hull { file, generators } => {
            let t = read_tensor(file)?;
            let gens = read_generators(generators)?;
            pr.line(format!("generators: {}", gens.len()));
            match polytope::in_convex_hull(&t, &gens)? {
                None => pr.line("in-hull: no"),
                Some(weights) => {
                    pr.line("in-hull: yes");
                    for (i, w) in weights.iter().enumerate() {
                        if !num_traits::Zero::is_zero(w) {
                            let text = format!("weight {}: {}", i + 1, pr.value(w));
                            pr.line(text);
                        }
                    }
                }
            }
        }
        Command::Latin { n, count_only } => {
            if *count_only {
                let c = combinat::count_latin_squares_with(
                    *n,
                    combinat::DEFAULT_MAX_LATIN_N,
                    cli.budget,
                )?;
                pr.line(format!("{c}"));
            } else {
                if *n > combinat::DEFAULT_MAX_LATIN_N {
                    return Err(Error::DimensionGuard {
                        n: *n,
                        max: combinat::DEFAULT_MAX_LATIN_N,
                        what: "Latin square enumeration",
                    });
                }
                let mut first = true;
                for tuple in combinat::perm_tuples_distance_n_with_budget(*n, *n, cli.budget) {
                    let tuple = tuple?;
                    if !first {
                        pr.line("");
                    }
                    first = false;
                    for row in tuple.rows() {
                        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                        pr.line(cells.join(" "));
                    }
                }
            }
        }
        Command::Patterns { d, n, k, count_only } => {
            let stream = combinat::diagonal_patterns_with_budget(*d, *n, *k, cli.budget)?;
            if *count_only {
                let mut count = 0u64;
                for p in stream {
                    p?;
                    count += 1;
                }
                pr.line(format!("{count}"));
            } else {
                for p in stream {
                    let p = p?;
                    let cells: Vec<String> = p
                        .cells()
                        .iter()
                        .map(|c| {
                            c.coords()
                                .iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        })
                        .collect();
                    pr.line(cells.join(" "));
                }
            }
        }
        Command::Bounds { file, which } => {
            let t = read_tensor(file)?;
            match which {
                Some(w) => run_bound(&mut pr, &t, *w, cli.budget)?,
                None => {
                    for w in [WhichBound::Prop1, WhichBound::Prop2, WhichBound::Mb1, WhichBound::Mb2]
                    {
                        match run_bound(&mut pr, &t, w, cli.budget) {
                            Ok(()) => {}
                            Err(e @ Error::ResourceGuard { .. }) => return Err(e),
                            Err(e) => pr.line(format!("skipped: {e}")),
                        }
                        pr.line("");
                    }
                }
            }
        }
        Command::Builtin { name, out } => {
            let t = polytope::builtin_tensor(name)?;
            let text = ht::to_text(&t);
            match out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| io_error(path, &e))?;
                    pr.line(format!("wrote: {}", path.display()));
                }
                None => {
                    let _ = write!(pr.out, "{text}");
                }
            }
        }
        Command::Probe {
            conjecture,
            n,
            d,
            samples,
            sampler,
        } => {
            let sampler = match sampler {
                SamplerArg::Exact => ProbeSampler::ConvexCombination,
                SamplerArg::Sinkhorn => ProbeSampler::SinkhornFloat,
            };
            if let Some(c) = conjecture {
                if *c != 4 && *c != 5 {
                    return Err(Error::Precondition(
                        "--conjecture takes 4 or 5".into(),
                    ));
                }
            }
            let report = bounds::probe_conjectures(*d, *n, *samples, cli.seed, sampler)?;
            pr.line(format!("rng: chacha20 seed={}", report.seed));
            match conjecture {
                Some(c) => pr.line(format!("conjecture: {c}")),
                None => pr.line("conjecture: none"),
            }
            pr.line(format!("d: {}", report.order));
            pr.line(format!("n: {}", report.dim));
            pr.line(format!("samples: {}", report.samples));
            let sampler_name = match report.sampler {
                ProbeSampler::ConvexCombination => "convex-combination",
                ProbeSampler::SinkhornFloat => "sinkhorn-float",
            };
            pr.line(format!("sampler: {sampler_name}"));
            pr.line(format!("generators: {}", report.generator_count));
            match &report.min_per {
                Some(v) => {
                    let text = format!("min-per: {}", pr.value(v));
                    pr.line(text);
                    pr.line(format!("min-sample: {}", report.min_sample.unwrap_or(0)));
                }
                None => pr.line("min-per: none"),
            }
            pr.line(format!("zeros: {}", report.zero_count));
            if let Some(c) = conjecture {
                let relevant = (*c == 4 && report.order % 2 == 0)
                    || (*c == 5 && report.dim % 2 == 1);
                if relevant {
                    pr.line(format!(
                        "consistent-with-conjecture: {}",
                        report.zero_count == 0
                    ));
                } else {
                    pr.line("consistent-with-conjecture: not-applicable");
                }
            }
            pr.line("note: empirical probe only; no conjecture is proved or refuted");
        }
    }
    Ok(())
}

fn run_bound(pr: &mut Printer, t: &Tensor, which: WhichBound, budget: u64) -> Result<()> {
    match which {
        WhichBound::Prop1 => {
            let cert = bounds::find_zero_block_with_budget(t, budget.min(bounds::DEFAULT_ZERO_BLOCK_BUDGET))?;
            pr.line("check: prop1");
            match cert {
                Some(c) => {
                    let sets: Vec<String> = c
                        .subsets
                        .iter()
                        .map(|s| {
                            let inner: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                            format!("{{{}}}", inner.join(","))
                        })
                        .collect();
                    pr.line(format!("certificate: {}", sets.join(" x ")));
                    let per = permanent::per1(t)?;
                    let text = format!("per: {}", pr.value(&per));
                    pr.line(text);
                }
                None => pr.line("certificate: none"),
            }
        }
        WhichBound::Prop2 => {
            let r = bounds::lower_bound_01(t)?;
            pr.line("check: prop2");
            print_report(pr, &r);
        }
        WhichBound::Mb1 => {
            let r = bounds::minc_bregman_1(t)?;
            pr.line("check: mb1");
            print_report(pr, &r);
        }
        WhichBound::Mb2 => {
            let r = bounds::minc_bregman_2(t)?;
            pr.line("check: mb2");
            print_report(pr, &r);
        }
    }
    Ok(())
}

fn print_report(pr: &mut Printer, r: &BoundReport) {
    let text = format!("per: {}", pr.value(&r.per_value));
    pr.line(text);
    if let Some(t) = r.zero_count {
        pr.line(format!("zeros: {t}"));
    }
    if let Some(sums) = &r.hyperplane_sums {
        let s: Vec<String> = sums.iter().map(|v| v.to_string()).collect();
        pr.line(format!("hyperplane-sums: {}", s.join(" ")));
    }
    if let Some(sums) = &r.tube_sums {
        let s: Vec<String> = sums.iter().map(|v| v.to_string()).collect();
        pr.line(format!("tube-sums: {}", s.join(" ")));
    }
    if let Some(b) = &r.bound_exact {
        let text = format!("bound: {}", pr.value(b));
        pr.line(text);
    }
    if let Some(lb) = r.bound_log {
        pr.line(format!("log-bound: {lb:.12}"));
    }
    if let Some(lp) = r.per_log {
        pr.line(format!("log-per: {lp:.12}"));
    }
    pr.line(format!("status: {}", r.status));
}

fn io_error(path: &Path, e: &std::io::Error) -> Error {
    Error::Precondition(format!("{}: {e}", path.display()))
}

fn read_tensor(path: &Path) -> Result<Tensor> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, &e))?;
    ht::parse(&text)
}

/// "trivial", "sign", "trivial-group", or a character-table file path;
/// comma-separated for per-axis specs.
fn parse_char_specs(arg: &str, t: &Tensor) -> Result<Vec<CharacterSpec>> {
    let n = t.cubical_dim()?;
    arg.split(',')
        .map(|item| match item.trim() {
            "trivial" => Ok(CharacterSpec::symmetric_trivial(n)),
            "sign" => Ok(CharacterSpec::symmetric_sign(n)),
            "trivial-group" => Ok(CharacterSpec::trivial_group(n)),
            path => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| io_error(Path::new(path), &e))?;
                CharacterSpec::parse_table(&text)
            }
        })
        .collect()
}

fn read_generators(path: &Path) -> Result<Vec<Tensor>> {
    let mut files: Vec<PathBuf> = Vec::new();
    let meta = std::fs::metadata(path).map_err(|e| io_error(path, &e))?;
    if meta.is_dir() {
        for entry in std::fs::read_dir(path).map_err(|e| io_error(path, &e))? {
            let p = entry.map_err(|e| io_error(path, &e))?.path();
            match p.extension().and_then(|e| e.to_str()) {
                Some("ht") | Some("htv") => files.push(p),
                _ => {}
            }
        }
        files.sort();
    } else {
        files.push(path.to_path_buf());
    }
    if files.is_empty() {
        return Err(Error::Precondition(format!(
            "no .ht or .htv files under {}",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| io_error(&f, &e))?;
        if f.extension().and_then(|e| e.to_str()) == Some("htv") {
            out.extend(ht::parse_vertexset(&text)?);
        } else {
            out.push(ht::parse(&text)?);
        }
    }
    Ok(out)
}
