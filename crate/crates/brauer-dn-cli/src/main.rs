//! Command-line front end: word reduction, products, census queries and
//! the batch verification drivers, over both coefficient rings.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use brauer_dn::admissible::{Tables, YLabel, CACHE_DIR_ENV};
use brauer_dn::engine::Engine;
use brauer_dn::nf::{nf_json, NormalForm};
use brauer_dn::search::DEFAULT_BUDGET;
use brauer_dn::word::Word;
use brauer_dn::{bmw, brauer, oracle, BmwCtx, BrauerCtx};

#[derive(Parser)]
#[command(name = "brauer-dn", version, about = "Exact engine for the type D Brauer monoid and its BMW deformation")]
struct Cli {
    /// Rank of the diagram (4..=8; verification commands need <= 6)
    #[arg(long, global = true, default_value_t = 4)]
    n: u8,
    /// Search budget (states explored per reduction)
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Seed for sampled drivers
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Cache directory for precomputed tables (defaults to the
    /// BRAUER_DN_CACHE_DIR environment variable)
    #[arg(long, global = true)]
    cache_dir: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Normal form of a word in the monoid algebra
    Reduce { word: String },
    /// Expand a word in the deformed algebra over the four-parameter ring
    BmwReduce { word: String },
    /// Product of two words in the monoid algebra
    Mul { left: String, right: String },
    /// Product of two words in the deformed algebra
    BmwMul { left: String, right: String },
    /// Admissible-set orbits and their sizes
    Orbits,
    /// Basis census by label, with the closed-form total
    Rank,
    /// Census restricted to the starred labels
    ThetaRank,
    /// Height-zero span: basis size and closure under products
    Tl,
    /// Unit, braid, quadratic-defect and trace-independence checks for
    /// every label's group block
    Hecke {
        /// Random reduced-word pairs per label
        #[arg(long, default_value_t = 6)]
        samples: usize,
    },
    /// Layer containment and reversal symmetry over every basis key
    Cellcheck,
    /// Compare the structural reducer against the searcher
    OracleCompare {
        /// Maximum word length
        #[arg(long, default_value_t = 8)]
        len: usize,
        /// Sweep every word up to the length bound
        #[arg(long)]
        exhaustive: bool,
        /// Random word count when not exhaustive
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(dir) = &cli.cache_dir {
        std::env::set_var(CACHE_DIR_ENV, dir);
    }
    if matches!(
        cli.verb,
        Verb::Tl | Verb::Hecke { .. } | Verb::Cellcheck | Verb::OracleCompare { .. }
    ) && cli.n > 6
    {
        bail!("verification commands are limited to n <= 6");
    }
    let tab = Tables::new(cli.n).map_err(|e| anyhow!("{e}"))?;
    let eng = Engine::new(tab).with_budget(cli.budget);
    run(&cli, eng)
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse::<Word>()
        .map_err(|e| anyhow!("{e}"))
        .with_context(|| format!("cannot parse '{s}'"))
}

fn print_nf(cli: &Cli, tab: &Tables, nf: &NormalForm) {
    match cli.format {
        Format::Text => println!("{}", nf.word(tab)),
        Format::Json => println!("{}", nf_json(tab, nf)),
    }
}

fn bmw_element_json(tab: &Tables, el: &bmw::BMWElement) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = el
        .sorted_terms(tab)
        .into_iter()
        .map(|(k, c)| {
            let nf = NormalForm {
                key: k.clone(),
                delta: 0,
            };
            serde_json::json!({ "key": nf_json(tab, &nf), "coeff": c.to_string() })
        })
        .collect();
    serde_json::json!({ "terms": terms })
}

fn print_bmw(cli: &Cli, tab: &Tables, el: &bmw::BMWElement) {
    match cli.format {
        Format::Text => println!("{}", el.render(tab)),
        Format::Json => println!("{}", bmw_element_json(tab, el)),
    }
}

fn run(cli: &Cli, eng: Engine) -> Result<()> {
    match &cli.verb {
        Verb::Reduce { word } => {
            let w = parse_word(word)?;
            let nf = eng.reduce(&w).map_err(|e| anyhow!("{e}"))?;
            print_nf(cli, eng.tab(), &nf);
        }
        Verb::Mul { left, right } => {
            let w = parse_word(left)?.concat(&parse_word(right)?);
            let nf = eng.reduce(&w).map_err(|e| anyhow!("{e}"))?;
            print_nf(cli, eng.tab(), &nf);
        }
        Verb::BmwReduce { word } => {
            let w = parse_word(word)?;
            let ctx = BmwCtx::new(eng);
            let el = ctx.reduce(&w).map_err(|e| anyhow!("{e}"))?;
            print_bmw(cli, ctx.engine().tab(), &el);
        }
        Verb::BmwMul { left, right } => {
            let (wl, wr) = (parse_word(left)?, parse_word(right)?);
            let ctx = BmwCtx::new(eng);
            let a = ctx.reduce(&wl).map_err(|e| anyhow!("{e}"))?;
            let b = ctx.reduce(&wr).map_err(|e| anyhow!("{e}"))?;
            let el = ctx.mul(&a, &b).map_err(|e| anyhow!("{e}"))?;
            print_bmw(cli, ctx.engine().tab(), &el);
        }
        Verb::Orbits => {
            let stats = brauer::orbit_stats_json(eng.tab());
            match cli.format {
                Format::Text => {
                    for row in stats["orbits"].as_array().into_iter().flatten() {
                        println!(
                            "{}  sets={}  group={}  heights {}..{}",
                            row["label"].as_str().unwrap_or("?"),
                            row["size"],
                            row["group_order"],
                            row["min_height"],
                            row["max_height"]
                        );
                    }
                    println!("total sets: {}", stats["num_sets"]);
                }
                Format::Json => println!("{stats}"),
            }
        }
        Verb::Rank => {
            let (rows, total) = brauer::rank_count(eng.tab()).map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Text => print!("{}", brauer::rank_csv(&rows, total)),
                Format::Json => {
                    let rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "label": r.label.to_string(),
                                "orbit": r.orbit_size,
                                "group": r.group_order,
                                "contribution": r.contribution(),
                            })
                        })
                        .collect();
                    println!("{}", serde_json::json!({ "rows": rows, "total": total }));
                }
            }
        }
        Verb::ThetaRank => {
            let t = brauer::theta_rank(eng.tab()).map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Text => println!("{t}"),
                Format::Json => println!("{}", serde_json::json!({ "theta_rank": t })),
            }
        }
        Verb::Tl => {
            let ctx = BrauerCtx::new(eng);
            let (size, closed) = brauer::tl_closure_check(&ctx).map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Text => println!("height-zero basis {size}, closed: {closed}"),
                Format::Json => {
                    println!("{}", serde_json::json!({ "basis": size, "closed": closed }))
                }
            }
            if !closed {
                bail!("height-zero span is not closed under products");
            }
        }
        Verb::Hecke { samples } => {
            let ctx = BmwCtx::new(eng);
            let mut bad = 0usize;
            let mut reports = Vec::new();
            for label in YLabel::all(ctx.engine().tab().n) {
                let rep = bmw::hecke_check(&ctx, label, *samples, cli.seed)
                    .map_err(|e| anyhow!("{e}"))?;
                if !rep.ok() {
                    bad += 1;
                }
                match cli.format {
                    Format::Text => println!(
                        "{label}: unit {} braid {} quadratic {} trace-independence {} ({} pairs)",
                        rep.unit_ok, rep.braid_ok, rep.quad_ok, rep.rho_ok, rep.rho_pairs
                    ),
                    Format::Json => reports.push(rep.to_json()),
                }
            }
            if cli.format == Format::Json {
                println!("{}", serde_json::json!({ "labels": reports, "failed": bad }));
            }
            if bad > 0 {
                bail!("{bad} label(s) failed");
            }
        }
        Verb::Cellcheck => {
            let ctx = BmwCtx::new(eng);
            let rep = bmw::filtration_check(&ctx).map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Text => println!(
                    "keys {} products {} layer {} reversal {}",
                    rep.keys, rep.products, rep.layer_ok, rep.op_ok
                ),
                Format::Json => println!("{}", rep.to_json()),
            }
            if !rep.ok() {
                for f in rep.failures.iter().take(5) {
                    eprintln!("  {f}");
                }
                bail!("filtration check failed");
            }
        }
        Verb::OracleCompare {
            len,
            exhaustive,
            samples,
        } => {
            let progress = cli.format == Format::Text;
            let rep = if *exhaustive {
                oracle::compare_exhaustive(&eng, *len, cli.budget, progress)
            } else {
                oracle::compare_samples(&eng, *len, *samples, cli.seed, cli.budget, progress)
            }
            .map_err(|e| anyhow!("{e}"))?;
            match cli.format {
                Format::Text => println!(
                    "compared {} words up to length {}: {} mismatches",
                    rep.checked, rep.max_len, rep.mismatch_count
                ),
                Format::Json => println!("{}", rep.to_json()),
            }
            if !rep.ok() {
                for m in &rep.mismatches {
                    eprintln!("  {m}");
                }
                bail!("reducers disagree");
            }
        }
    }
    Ok(())
}
