//! Command-line entry points. [`run`] parses arguments, dispatches, and
//! returns the process exit code: 0 on success, 1 when a checked property
//! fails, 2 on input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::{self, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::families::{Family, Orientation};
use crate::fibered::{create_witness, is_u_cartesian, is_u_initial, Kind, LiftTarget, OverContext};
use crate::fincat::{Arr, FinCat, FunctorMap, Obj};
use crate::grothendieck::extract_pseudofunctor;
use crate::mask::Bound;
use crate::model::{ModelFile, Resolved};
use crate::report::{self, Format};
use crate::topological::{bot_object, classify, theorem_battery, top_object};
use crate::verify::{verify_corpus, verify_random, verify_resolved, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fibercheck", version, about = "Checks fibred and topological functors between finite categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Machine => Format::Machine,
        }
    }
}

fn parse_bound(s: &str) -> std::result::Result<Bound, String> {
    match s {
        "auto" | "exact" => Ok(Bound::Auto),
        n => n
            .parse::<usize>()
            .map(Bound::AtMost)
            .map_err(|_| format!("expected `auto` or a family size, got `{n}`")),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every section of a model file against the axioms.
    Validate { path: PathBuf },
    /// Classify the functors of a model file.
    Classify {
        path: PathBuf,
        /// Only this functor section.
        #[arg(long)]
        functor: Option<String>,
        /// Largest family size enumerated, or `auto` for every family.
        #[arg(long, default_value = "auto", value_parser = parse_bound)]
        bound: Bound,
        /// Print every route verdict with its counterexample.
        #[arg(long)]
        routes: bool,
        /// Also run the property battery on topological functors.
        #[arg(long)]
        battery: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Print a created family or object with a verification transcript.
    Witness {
        path: PathBuf,
        #[arg(long)]
        functor: Option<String>,
        #[command(subcommand)]
        query: Query,
    },
    /// Run the invariant suites on a model file, the corpus, or random models.
    Verify {
        path: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
        /// Number of random models.
        #[arg(long)]
        seeds: Option<u64>,
        /// First random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size budget of random models.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value = "auto", value_parser = parse_bound)]
        bound: Bound,
        /// Skip the property battery.
        #[arg(long)]
        no_battery: bool,
        /// Skip the double-diagram lemma.
        #[arg(long)]
        no_lemma: bool,
        /// Print failing checks and the summary only.
        #[arg(long)]
        quiet: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Grothendieck construction and extraction.
    Groth {
        #[command(subcommand)]
        action: GrothAction,
    },
    /// Write the corpus as model files, or print a random model.
    Gen {
        /// Output directory; defaults to the corpus directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also search for and write the separating counterexamples.
        #[arg(long)]
        search: bool,
        /// Print the random model for `--seed` instead.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Query {
    /// The terminal object of the fiber over a base object.
    Top {
        #[arg(long)]
        object: String,
    },
    /// The initial object of the fiber over a base object.
    Bot {
        #[arg(long)]
        object: String,
    },
    /// A cartesian family out of an object over `--base`.
    CartesianFamily {
        #[arg(long)]
        base: String,
        /// A base arrow out of `--base` and an object over its target.
        #[arg(long = "leg", num_args = 2, value_names = ["ARROW", "OBJECT"])]
        legs: Vec<String>,
    },
    /// An initial family out of an object over `--base`.
    InitialFamily {
        #[arg(long)]
        base: String,
        #[arg(long = "leg", num_args = 2, value_names = ["ARROW", "OBJECT"])]
        legs: Vec<String>,
    },
    /// The arrow through which a cone factors over a cartesian family.
    Mediator {
        /// Members of the family, all out of one apex.
        #[arg(long = "member", required = true)]
        members: Vec<String>,
        /// Cone arrows, one per member, all out of one object.
        #[arg(long = "cone", required = true)]
        cone: Vec<String>,
        /// Base arrow the mediator must lie over.
        #[arg(long)]
        over: String,
    },
}

#[derive(Subcommand, Debug)]
enum GrothAction {
    /// Total category and projection of a pseudofunctor section.
    Build {
        path: PathBuf,
        #[arg(long)]
        pseudofunctor: Option<String>,
    },
    /// Pseudofunctor of a faithful fibration with poset fibers.
    Extract {
        path: PathBuf,
        #[arg(long)]
        functor: Option<String>,
    },
}

/// Runs the CLI with `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buf = String::new();
    let code = match dispatch(cli.command, &mut buf) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.write_all(buf.as_bytes());
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let _ = out.write_all(buf.as_bytes());
    code
}

fn dispatch(cmd: Command, out: &mut String) -> Result<i32> {
    match cmd {
        Command::Validate { path } => cmd_validate(&path, out),
        Command::Classify {
            path,
            functor,
            bound,
            routes,
            battery,
            format,
        } => cmd_classify(&path, functor.as_deref(), bound, routes, battery, format.into(), out),
        Command::Witness { path, functor, query } => cmd_witness(&path, functor.as_deref(), query, out),
        Command::Verify {
            path,
            corpus,
            seeds,
            seed,
            budget,
            bound,
            no_battery,
            no_lemma,
            quiet,
            format,
        } => {
            let opts = VerifyOptions {
                bound,
                battery: !no_battery,
                lemma: !no_lemma,
            };
            cmd_verify(path.as_deref(), corpus, seeds.map(|n| (seed, n, budget)), opts, quiet, format.into(), out)
        }
        Command::Groth { action } => match action {
            GrothAction::Build { path, pseudofunctor } => cmd_groth_build(&path, pseudofunctor.as_deref(), out),
            GrothAction::Extract { path, functor } => cmd_groth_extract(&path, functor.as_deref(), out),
        },
        Command::Gen {
            out: dir,
            search,
            random,
            seed,
            budget,
        } => cmd_gen(dir, search, random.then_some((seed, budget)), out),
    }
}

fn load(path: &Path) -> Result<Resolved> {
    ModelFile::read(path)?.resolve()
}

/// The named functor, or the only one in the file.
fn pick_functor<'a>(r: &'a Resolved, name: Option<&str>) -> Result<&'a FunctorMap> {
    match name {
        Some(n) => r.functor(n).ok_or_else(|| Error::UnknownSection(n.into())),
        None => match r.functors.as_slice() {
            [u] => Ok(u),
            [] => Err(Error::Precondition("the file has no functor section".into())),
            _ => Err(Error::Precondition(
                "the file has several functor sections; choose one with --functor".into(),
            )),
        },
    }
}

pub fn cmd_validate(path: &Path, out: &mut String) -> Result<i32> {
    use std::fmt::Write;
    let mut ok = true;
    for (what, name, rep) in load(path)?.validate() {
        ok &= rep.is_valid();
        let _ = write!(out, "{what} {name}: {rep}");
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_classify(
    path: &Path,
    functor: Option<&str>,
    bound: Bound,
    routes: bool,
    battery: bool,
    format: Format,
    out: &mut String,
) -> Result<i32> {
    use std::fmt::Write;
    let r = load(path)?;
    let chosen: Vec<&FunctorMap> = match functor {
        Some(_) => vec![pick_functor(&r, functor)?],
        None if r.functors.is_empty() => return Err(Error::Precondition("the file has no functor section".into())),
        None => r.functors.iter().collect(),
    };
    let mut code = EXIT_OK;
    for (i, u) in chosen.into_iter().enumerate() {
        if i > 0 && format == Format::Text {
            out.push('\n');
        }
        let ctx = OverContext::new(u.clone())?;
        let cl = classify(&ctx, bound)?;
        out.push_str(&report::classification(&cl, routes, format));
        if !cl.inconsistencies().is_empty() {
            code = EXIT_FAILURE;
        }
        if battery && cl.is_topological() {
            let b = theorem_battery(&ctx, bound)?;
            if format == Format::Text {
                out.push_str("battery:\n");
            }
            out.push_str(&report::battery(&b, format));
            if !b.passed() {
                code = EXIT_FAILURE;
            }
        }
        let flags = cl.flags();
        for e in r.expectations.iter().filter(|e| e.functor == u.name) {
            let wrong: Vec<String> = e
                .flags
                .iter()
                .filter_map(|(k, want)| {
                    let got = flags.iter().find(|(n, _)| n == k).map(|&(_, v)| v);
                    (got != Some(*want)).then(|| format!("{k} expected {want}"))
                })
                .collect();
            match format {
                Format::Text if wrong.is_empty() => {
                    let _ = writeln!(out, "expectations of {}: met", e.entry);
                }
                Format::Text => {
                    let _ = writeln!(out, "expectations of {}: NOT MET ({})", e.entry, wrong.join(", "));
                }
                Format::Machine => {
                    let _ = writeln!(out, "expect.{}={}", e.entry, wrong.is_empty());
                }
            }
            if !wrong.is_empty() {
                code = EXIT_FAILURE;
            }
        }
    }
    Ok(code)
}

fn legs(ctx: &OverContext, base: &str, raw: &[String]) -> Result<(Obj, Vec<LiftTarget>)> {
    let s = ctx.s();
    let base = s.obj(base)?;
    let targets = raw
        .chunks(2)
        .map(|p| {
            Ok(LiftTarget {
                phi: s.arr(&p[0])?,
                x: ctx.t().obj(&p[1])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((base, targets))
}

fn arrows(c: &FinCat, names: &[String]) -> Result<Vec<Arr>> {
    names.iter().map(|n| c.arr(n)).collect()
}

fn cmd_witness(path: &Path, functor: Option<&str>, query: Query, out: &mut String) -> Result<i32> {
    use std::fmt::Write;
    let r = load(path)?;
    let ctx = OverContext::new(pick_functor(&r, functor)?.clone())?;
    let (t, s) = (ctx.t(), ctx.s());
    let _ = writeln!(out, "functor {}", ctx.name());
    match query {
        Query::Top { object } => {
            let b = s.obj(&object)?;
            let Some(y) = top_object(&ctx, b)? else {
                let _ = writeln!(out, "no witness: no terminal object over {object}");
                return Ok(EXIT_FAILURE);
            };
            let _ = writeln!(out, "top over {object}: {}", t.obj_name(y));
            let (checked, ok) = couniversal_checks(&ctx, y);
            let _ = writeln!(
                out,
                "verified {ok}: exactly one lift into {} over each of {checked} base arrows",
                t.obj_name(y)
            );
        }
        Query::Bot { object } => {
            let b = s.obj(&object)?;
            let Some(y) = bot_object(&ctx, b)? else {
                let _ = writeln!(out, "no witness: no initial object over {object}");
                return Ok(EXIT_FAILURE);
            };
            let _ = writeln!(out, "bottom over {object}: {}", t.obj_name(y));
            let (checked, ok) = couniversal_checks(ctx.op(), y);
            let _ = writeln!(
                out,
                "verified {ok}: exactly one lift out of {} over each of {checked} base arrows",
                t.obj_name(y)
            );
        }
        Query::CartesianFamily { base, legs: raw } => {
            return created(&ctx, Kind::Cartesian, &base, &raw, out);
        }
        Query::InitialFamily { base, legs: raw } => {
            return created(&ctx, Kind::Initial, &base, &raw, out);
        }
        Query::Mediator { members, cone, over } => {
            let members = arrows(t, &members)?;
            let cone = arrows(t, &cone)?;
            let psi = s.arr(&over)?;
            if members.len() != cone.len() {
                return Err(Error::IndexMismatch(format!(
                    "{} members against {} cone arrows",
                    members.len(),
                    cone.len()
                )));
            }
            let fam = Family::source(t, t.src(members[0]), members.clone())?;
            let z = t.src(cone[0]);
            for (&f, &g) in members.iter().zip(&cone) {
                if t.src(g) != z || t.tgt(g) != t.tgt(f) {
                    return Err(Error::AnchorMismatch(format!(
                        "cone arrow `{}` does not run from `{}` to the end of `{}`",
                        t.arr_name(g),
                        t.obj_name(z),
                        t.arr_name(f)
                    )));
                }
                if s.try_comp(ctx.u.on_arr(f), psi) != Some(ctx.u.on_arr(g)) {
                    return Err(Error::AnchorMismatch(format!(
                        "`{}` does not lie over `{}` followed by the image of `{}`",
                        t.arr_name(g),
                        over,
                        t.arr_name(f)
                    )));
                }
            }
            let found: Vec<Arr> = ctx
                .lifts(z, fam.anchor, psi)
                .filter(|&h| members.iter().zip(&cone).all(|(&f, &g)| t.comp(f, h) == g))
                .collect();
            let _ = writeln!(out, "family: {}", fam.display(t));
            match found.as_slice() {
                [h] => {
                    let _ = writeln!(out, "mediator over {over}: {}", t.arr_name(*h));
                    let _ = writeln!(out, "verified: each member after it gives its cone arrow");
                }
                [] => {
                    let _ = writeln!(out, "no witness: no arrow over {over} factors the cone");
                    return Ok(EXIT_FAILURE);
                }
                many => {
                    let names: Vec<&str> = many.iter().map(|&h| t.arr_name(h)).collect();
                    let _ = writeln!(out, "no witness: several arrows factor the cone: {}", names.join(", "));
                    return Ok(EXIT_FAILURE);
                }
            }
        }
    }
    Ok(EXIT_OK)
}

/// Whether every object has exactly one arrow into `y` over each base
/// arrow into the base of `y`, with the number of pairs checked.
fn couniversal_checks(ctx: &OverContext, y: Obj) -> (usize, bool) {
    let (t, s) = (ctx.t(), ctx.s());
    let b = ctx.base(y);
    let mut n = 0;
    let mut ok = true;
    for x in t.objects() {
        for &phi in s.hom(ctx.base(x), b) {
            ok &= ctx.lift_count(x, y, phi) == 1;
            n += 1;
        }
    }
    (n, ok)
}

fn created(ctx: &OverContext, kind: Kind, base: &str, raw: &[String], out: &mut String) -> Result<i32> {
    use std::fmt::Write;
    let (b, targets) = legs(ctx, base, raw)?;
    let t = ctx.t();
    let Some(w) = create_witness(ctx, kind, b, &targets)? else {
        let _ = writeln!(out, "no witness: no {} family over these legs", kind.word());
        return Ok(EXIT_FAILURE);
    };
    let fam = w.family(kind);
    let _ = writeln!(out, "apex: {}", t.obj_name(w.apex));
    let _ = writeln!(out, "family: {}", fam.display(t));
    for (l, &m) in targets.iter().zip(&w.members) {
        let _ = writeln!(
            out,
            "  {} over {} into {}",
            t.arr_name(m),
            ctx.s().arr_name(l.phi),
            t.obj_name(l.x)
        );
    }
    debug_assert_eq!(fam.orientation, Orientation::Source);
    let ok = match kind {
        Kind::Cartesian => is_u_cartesian(ctx, &fam)?,
        _ => is_u_initial(ctx, &fam)?,
    };
    let _ = writeln!(out, "verified {}: {ok}", kind.word());
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_verify(
    path: Option<&Path>,
    corpus: bool,
    random: Option<(u64, u64, usize)>,
    opts: VerifyOptions,
    quiet: bool,
    format: Format,
    out: &mut String,
) -> Result<i32> {
    use std::fmt::Write;
    if path.is_none() && !corpus && random.is_none() {
        return Err(Error::Precondition("give a model file, --corpus or --seeds".into()));
    }
    let mut rep = VerifyReport::default();
    if let Some(p) = path {
        rep.checks.extend(verify_resolved(&load(p)?, opts)?.checks);
    }
    if corpus {
        rep.checks.extend(verify_corpus(opts)?.checks);
    }
    if let Some((first, count, budget)) = random {
        rep.checks.extend(verify_random(first, count, budget, opts)?.checks);
    }
    let failed = rep.failures().count();
    match format {
        Format::Text => {
            for c in rep.checks.iter().filter(|c| !quiet || !c.passed) {
                let _ = writeln!(out, "{c}");
            }
            let _ = writeln!(
                out,
                "{} checks, {} passed, {failed} failed",
                rep.checks.len(),
                rep.checks.len() - failed
            );
        }
        Format::Machine => {
            for c in rep.checks.iter().filter(|c| !quiet || !c.passed) {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.anchor,
                    c.subject
                );
            }
            let _ = writeln!(out, "checks={} failed={failed}", rep.checks.len());
        }
    }
    Ok(if rep.passed() { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_groth_build(path: &Path, name: Option<&str>, out: &mut String) -> Result<i32> {
    use std::fmt::Write;
    let r = load(path)?;
    let p = match name {
        Some(n) => r
            .pseudofunctors
            .iter()
            .find(|p| p.name == n)
            .ok_or_else(|| Error::UnknownSection(n.into()))?,
        None => match r.pseudofunctors.as_slice() {
            [p] => p,
            [] => return Err(Error::Precondition("the file has no pseudofunctor section".into())),
            _ => {
                return Err(Error::Precondition(
                    "the file has several pseudofunctor sections; choose one with --pseudofunctor".into(),
                ))
            }
        },
    };
    let v = p.validate();
    if !v.is_valid() {
        let _ = write!(out, "pseudofunctor {}: {v}", p.name);
        return Ok(EXIT_FAILURE);
    }
    let total = p.total_category()?;
    let mut v = total.total.validate();
    v.extend(total.projection.validate());
    if !v.is_valid() {
        let _ = write!(out, "total category of {}: {v}", p.name);
        return Ok(EXIT_FAILURE);
    }
    let mut m = ModelFile::default();
    m.add_functor(&total.projection);
    let _ = writeln!(out, "# total category of {}", p.name);
    let _ = write!(out, "{m}");
    Ok(EXIT_OK)
}

pub fn cmd_groth_extract(path: &Path, name: Option<&str>, out: &mut String) -> Result<i32> {
    use std::fmt::Write;
    let r = load(path)?;
    let u = pick_functor(&r, name)?;
    let ctx = OverContext::new(u.clone())?;
    let p = match extract_pseudofunctor(&ctx) {
        Ok(p) => p,
        Err(Error::Precondition(why)) => {
            let _ = writeln!(out, "cannot extract from {}: {why}", u.name);
            return Ok(EXIT_FAILURE);
        }
        Err(e) => return Err(e),
    };
    let v = p.validate();
    if !v.is_valid() {
        let _ = write!(out, "extracted pseudofunctor: {v}");
        return Ok(EXIT_FAILURE);
    }
    let rebuilt = p.total_category()?.projection;
    let iso = rebuilt.iso_over_base(u).is_some();
    let mut m = ModelFile::default();
    m.add_pseudofunctor(&p);
    let _ = writeln!(out, "# pseudofunctor of {}", u.name);
    let _ = writeln!(
        out,
        "# round trip: total category {} the original",
        if iso { "is isomorphic to" } else { "differs from" }
    );
    let _ = write!(out, "{m}");
    Ok(if iso { EXIT_OK } else { EXIT_FAILURE })
}

pub fn cmd_gen(dir: Option<PathBuf>, search: bool, random: Option<(u64, usize)>, out: &mut String) -> Result<i32> {
    use std::fmt::Write;
    if let Some((seed, budget)) = random {
        let (strategy, u) = corpus::random_functor(seed, budget);
        let mut m = ModelFile::default();
        m.add_functor(&u);
        let _ = writeln!(out, "# random model, seed {seed}, budget {budget}, strategy {strategy}");
        let _ = write!(out, "{m}");
        return Ok(EXIT_OK);
    }
    let dir = dir.unwrap_or_else(corpus::corpus_dir);
    for p in corpus::write_corpus(&dir, search)? {
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(EXIT_OK)
}
