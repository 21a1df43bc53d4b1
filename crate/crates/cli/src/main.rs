//! `coherent`: command-line front end.
//!
//! Every subcommand builds one structured document. `--json` prints it as
//! JSON; otherwise it is rendered as indented `key: value` lines.
//! Exit codes: 0 success, 2 parse or validation error, 3 search budget
//! exhausted, 4 internal invariant violated.

mod plot;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coherent::analyze::{coherence_report, embeddability_verdict, find_ray_element, EmbeddingTarget, VERDICT_DEPTH};
use coherent::catalog::{self, build_str};
use coherent::classify::{classify_element, comb_finite_report};
use coherent::dynamics::{density_report, orbit_sample, probe_window};
use coherent::germ::{germ_at, germ_survey_with_budget, Side, SURVEY_NODES};
use coherent::interval::Interval;
use coherent::rational::{fmt_rational, parse_rational, Rational};
use coherent::search::SearchBudget;
use coherent::witness::{self, find_f_assignment};
use coherent::{text, Error, ExtPoint, GroupSpec, PiecewiseMap, Point, Word};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "coherent", version, about = "Exact computations in groups of piecewise fractional-linear homeomorphisms")]
struct Cli {
    /// Print the structured output as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group definition and print it in canonical form.
    Parse { file: String },
    /// Evaluate a word.
    Eval {
        file: String,
        #[arg(long, value_parser = parse_word)]
        word: Word,
        #[arg(long, value_parser = parse_ext)]
        at: Option<ExtPoint>,
    },
    /// Element type, fixed set and support of a word.
    Classify {
        file: String,
        #[arg(long, value_parser = parse_word)]
        word: Word,
    },
    /// Germ of a word at a fixed point.
    Germ {
        file: String,
        #[arg(long, value_parser = parse_word)]
        word: Word,
        #[arg(long, value_parser = parse_ext)]
        at: ExtPoint,
        #[arg(long)]
        side: Side,
    },
    /// Survey the group of germs at a point.
    GermRank {
        file: String,
        #[arg(long, value_parser = parse_ext)]
        at: ExtPoint,
        #[arg(long)]
        side: Side,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = SURVEY_NODES)]
        budget: usize,
    },
    /// Orbit sample of a point and its largest gap in a window.
    Orbit {
        file: String,
        #[arg(long, value_parser = parse_rat)]
        start: Rational,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_parser = parse_interval)]
        window: Option<Interval>,
        /// Write the orbit points, one per line.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Coherence report: minimality probe, end germs, ray elements.
    Check {
        file: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, value_parser = parse_rat, default_value = "1/64")]
        eps: Rational,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Combinatorial finiteness checks at sample points.
    CombFinite {
        file: String,
        #[arg(long = "at", value_parser = parse_ext)]
        points: Vec<ExtPoint>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Non-embeddability verdict.
    Verdict {
        file: String,
        #[arg(long)]
        target: EmbeddingTarget,
        #[arg(long, default_value_t = VERDICT_DEPTH)]
        depth: usize,
    },
    /// Constructive certificates.
    #[command(subcommand)]
    Witness(WitnessCommand),
    /// Built-in groups.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Render the graph of an element or an orbit as SVG.
    Plot {
        file: String,
        #[arg(long, value_parser = parse_word)]
        word: Option<Word>,
        #[arg(long, value_parser = parse_rat)]
        start: Option<Rational>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Most group elements visited by a search.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    /// Longest word considered by a search.
    #[arg(long, default_value_t = 12)]
    max_len: usize,
}

impl BudgetArgs {
    fn get(self) -> Result<SearchBudget, Error> {
        SearchBudget::new(self.budget, self.max_len)
    }
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Compactly supported element moving r1 above r2.
    MovePoint {
        file: String,
        #[arg(long, value_parser = parse_rat)]
        r1: Rational,
        #[arg(long, value_parser = parse_rat)]
        r2: Rational,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compactly supported element mapping U into V.
    IntervalInto {
        file: String,
        #[arg(long, value_parser = parse_interval)]
        u: Interval,
        #[arg(long, value_parser = parse_interval)]
        v: Interval,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Element fixing U pointwise and moving V above r.
    FixPush {
        file: String,
        #[arg(long, value_parser = parse_interval)]
        u: Interval,
        #[arg(long, value_parser = parse_interval)]
        v: Interval,
        #[arg(long, value_parser = parse_rat)]
        r: Rational,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Element mapping U into W and V above r.
    PushAnchor {
        file: String,
        #[arg(long, value_parser = parse_interval)]
        u: Interval,
        #[arg(long, value_parser = parse_interval)]
        v: Interval,
        #[arg(long, value_parser = parse_interval)]
        w: Interval,
        #[arg(long, value_parser = parse_rat)]
        r: Rational,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Element mapping U1 into V1 and U2 into V2.
    PairTransport {
        file: String,
        #[arg(long, value_parser = parse_interval)]
        u1: Interval,
        #[arg(long, value_parser = parse_interval)]
        u2: Interval,
        #[arg(long, value_parser = parse_interval)]
        v1: Interval,
        #[arg(long, value_parser = parse_interval)]
        v2: Interval,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Element supported in V with a power moving x into U.
    LocalMin {
        file: String,
        #[arg(long, value_parser = parse_interval)]
        u: Interval,
        #[arg(long, value_parser = parse_interval)]
        v: Interval,
        #[arg(long, value_parser = parse_rat)]
        x: Rational,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Conjugator separating the supports of α and β from their γ-image.
    Higman {
        file: String,
        #[arg(long, value_parser = parse_word)]
        alpha: Word,
        #[arg(long, value_parser = parse_word)]
        beta: Word,
        #[arg(long, value_parser = parse_word)]
        gamma: Word,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Element without interior fixed points.
    FullySupported {
        file: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Subgroup isomorphic to F from a ray element and a mirrored one;
    /// both are searched for when omitted.
    FindF {
        file: String,
        #[arg(long, value_parser = parse_word)]
        f: Option<Word>,
        #[arg(long, value_parser = parse_word)]
        g: Option<Word>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Words satisfying both relators of F, single letters first.
    FRelations {
        file: String,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    /// Print the group definition of a catalog key.
    Emit { key: String },
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

fn parse_ext(s: &str) -> Result<ExtPoint, String> {
    ExtPoint::parse(s).ok_or_else(|| format!("not a rational or ±inf: {s:?}"))
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    Interval::parse(s).ok_or_else(|| format!("not an interval a,b with a ≤ b: {s:?}"))
}

fn parse_word(s: &str) -> Result<Word, String> {
    Word::parse(s).map_err(|e| e.to_string())
}

/// Reads a group-definition file, or builds a catalog group when no such
/// file exists.
fn load(file: &str) -> Result<GroupSpec, Error> {
    let path = Path::new(file);
    if path.exists() {
        let content = std::fs::read_to_string(path).map_err(|e| Error::Precondition(format!("{file}: {e}")))?;
        return text::parse(&content);
    }
    build_str(file)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn map_rows(f: &PiecewiseMap) -> Value {
    Value::Array(
        f.pieces()
            .iter()
            .map(|p| json!({ "left": p.left.to_string(), "right": p.right.to_string(), "map": p.map.to_string() }))
            .collect(),
    )
}

fn budget_of(b: BudgetArgs) -> Result<SearchBudget, Error> {
    b.get()
}

fn run(command: Command) -> Result<Value, Error> {
    Ok(match command {
        Command::Parse { file } => {
            let spec = load(&file)?;
            json!({
                "name": spec.name,
                "domain": spec.domain.to_string(),
                "generators": spec.generators().iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
                "metadata": to_value(&spec.metadata),
                "canonical": text::serialize(&spec),
            })
        }
        Command::Eval { file, word, at } => {
            let spec = load(&file)?;
            let f = spec.evaluate(&word)?;
            let mut out = json!({
                "word": word.to_string(),
                "pieces": map_rows(&f),
                "breakpoints": f.breakpoints().iter().map(fmt_rational).collect::<Vec<_>>(),
            });
            if let Some(x) = at {
                out["at"] = json!(x.to_string());
                out["image"] = json!(f.evaluate(&x)?.to_string());
            }
            out
        }
        Command::Classify { file, word } => {
            let spec = load(&file)?;
            let f = spec.evaluate(&word)?;
            json!({
                "word": word.to_string(),
                "element_type": to_value(&classify_element(&f)),
                "fixed_set": to_value(&f.fixed_set()),
                "support": to_value(&f.support_components()),
            })
        }
        Command::Germ { file, word, at, side } => {
            let spec = load(&file)?;
            let g = germ_at(&spec.evaluate(&word)?, &at, side)?;
            json!({
                "word": word.to_string(),
                "base": at.to_string(),
                "side": side.to_string(),
                "germ": g.rep.to_string(),
                "trivial": g.is_trivial(),
            })
        }
        Command::GermRank {
            file,
            at,
            side,
            depth,
            budget,
        } => {
            let spec = load(&file)?;
            to_value(&germ_survey_with_budget(&spec, &at, side, depth, budget)?)
        }
        Command::Orbit {
            file,
            start,
            depth,
            window,
            csv,
        } => {
            let spec = load(&file)?;
            let sample = orbit_sample(&spec, &start, depth)?;
            let window = match window {
                Some(w) => w,
                None => probe_window(&Point::from(spec.domain.inf()), &Point::from(spec.domain.sup()))?,
            };
            if let Some(path) = csv {
                let body: String = sample.points.iter().map(|p| fmt_rational(p) + "\n").collect();
                std::fs::write(&path, body).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
            }
            json!({
                "start": fmt_rational(&sample.start),
                "depth": depth,
                "point_count": sample.points.len(),
                "density": to_value(&density_report(&sample, &window)),
            })
        }
        Command::Check {
            file,
            depth,
            eps,
            budget,
        } => {
            let spec = load(&file)?;
            to_value(&coherence_report(&spec, depth, &eps, &budget_of(budget)?)?)
        }
        Command::CombFinite { file, points, depth } => {
            let spec = load(&file)?;
            to_value(&comb_finite_report(&spec, &points, depth)?)
        }
        Command::Verdict { file, target, depth } => {
            let spec = load(&file)?;
            to_value(&embeddability_verdict(&spec, &target, depth)?)
        }
        Command::Witness(w) => run_witness(w)?,
        Command::Catalog(CatalogCommand::List) => json!({ "keys": catalog::KEYS }),
        Command::Catalog(CatalogCommand::Emit { key }) => {
            json!({ "key": key, "definition": text::serialize(&build_str(&key)?) })
        }
        Command::Plot {
            file,
            word,
            start,
            depth,
            svg,
        } => {
            let spec = load(&file)?;
            let (kind, body) = match (word, start) {
                (Some(w), None) => ("graph", plot::graph(&spec, &spec.evaluate(&w)?, &w.to_string())),
                (None, Some(x)) => {
                    let sample = orbit_sample(&spec, &x, depth)?;
                    ("orbit", plot::rug(&spec, &sample))
                }
                _ => return Err(Error::Precondition("give exactly one of --word and --start".into())),
            };
            std::fs::write(&svg, body).map_err(|e| Error::Precondition(format!("{}: {e}", svg.display())))?;
            json!({ "kind": kind, "svg": svg.display().to_string() })
        }
    })
}

fn run_witness(command: WitnessCommand) -> Result<Value, Error> {
    use WitnessCommand as W;
    Ok(match command {
        W::MovePoint { file, r1, r2, budget } => {
            to_value(&witness::move_point_witness(&load(&file)?, &r1, &r2, &budget_of(budget)?)?)
        }
        W::IntervalInto { file, u, v, budget } => {
            to_value(&witness::interval_into_witness(&load(&file)?, &u, &v, &budget_of(budget)?)?)
        }
        W::FixPush { file, u, v, r, budget } => {
            to_value(&witness::fix_and_push_witness(&load(&file)?, &u, &v, &r, &budget_of(budget)?)?)
        }
        W::PushAnchor { file, u, v, w, r, budget } => to_value(&witness::push_with_anchor_witness(
            &load(&file)?,
            &u,
            &v,
            &w,
            &r,
            &budget_of(budget)?,
        )?),
        W::PairTransport {
            file,
            u1,
            u2,
            v1,
            v2,
            budget,
        } => to_value(&witness::pair_transport_witness(
            &load(&file)?,
            &u1,
            &u2,
            &v1,
            &v2,
            &budget_of(budget)?,
        )?),
        W::LocalMin { file, u, v, x, budget } => {
            to_value(&witness::local_minimality_witness(&load(&file)?, &u, &v, &x, &budget_of(budget)?)?)
        }
        W::Higman {
            file,
            alpha,
            beta,
            gamma,
            budget,
        } => to_value(&witness::higman_witness(&load(&file)?, &alpha, &beta, &gamma, &budget_of(budget)?)?),
        W::FullySupported { file, budget } => {
            to_value(&witness::fully_supported_witness(&load(&file)?, &budget_of(budget)?)?)
        }
        W::FindF { file, f, g, budget } => {
            let spec = load(&file)?;
            let budget = budget_of(budget)?;
            let f = match f {
                Some(f) => f,
                None => find_ray_element(&spec, &budget, true)?,
            };
            let g = match g {
                Some(g) => g,
                None => find_ray_element(&spec, &budget, false)?,
            };
            to_value(&witness::f_subgroup_certificate(&spec, &f, &g, &budget)?)
        }
        W::FRelations { file, max_len } => {
            let spec = load(&file)?;
            match find_f_assignment(&spec, max_len)? {
                Some(found) => to_value(&found),
                None => json!({ "found": false, "max_len": max_len }),
            }
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted { .. } => 3,
        Error::Internal(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(doc) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc).expect("valid JSON"));
            } else {
                print!("{}", render::human(&doc));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                let doc = json!({ "error": e.to_string(), "exit_code": exit_code(&e) });
                println!("{}", serde_json::to_string_pretty(&doc).expect("valid JSON"));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
