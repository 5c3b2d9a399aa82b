use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use tetcensus::canon::canonical_data;
use tetcensus::census::{self, group_and_name, run_census, CensusConfig};
use tetcensus::enumerate::{enumerate_ctts, SearchConfig};
use tetcensus::geometry::{certify, CanonizeOptions};
use tetcensus::homology::{first_homology, is_homology_link};
use tetcensus::morphisms::covering_pairs;
use tetcensus::signature::{decode_signature, signature};

#[derive(Parser)]
#[command(name = "tetcensus", version, about = "Census of tetrahedral hyperbolic 3-manifolds")]
struct Cli {
    /// Worker threads (default: all cores; 1 is the reference mode).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Kinds {
    /// Orientable CTTs only.
    #[arg(long, conflicts_with = "non_orientable")]
    orientable: bool,
    /// Non-orientable CTTs only.
    #[arg(long)]
    non_orientable: bool,
}

impl Kinds {
    /// Requested orientabilities; both when neither flag is given.
    fn list(self) -> Vec<bool> {
        match (self.orientable, self.non_orientable) {
            (true, _) => vec![true],
            (_, true) => vec![false],
            _ => vec![true, false],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List CTT signatures up to a size.
    Enumerate {
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        kinds: Kinds,
    },
    /// Canonize a CTT and print the certified proto-canonical triangulation.
    Canonize {
        sig: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Isometry signature of a CTT.
    Isosig {
        sig: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Group CTT signatures (one per line, from FILE or stdin) into named
    /// isometry classes, printed as census lines.
    Group {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// First homology of a triangulation.
    Homology { sig: String },
    /// Covering pairs among the CTTs up to a size.
    Morphisms {
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        kinds: Kinds,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the full census and write its files.
    Census {
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        kinds: Kinds,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "census")]
        out: PathBuf,
    },
    /// Replay a census directory.
    Verify {
        #[arg(long, default_value = "census")]
        out: PathBuf,
    },
}

fn parse(sig: &str) -> Result<tetcensus::Triangulation> {
    decode_signature(sig.trim()).map_err(|e| anyhow!(e))
}

fn options(seed: u64) -> CanonizeOptions {
    CanonizeOptions {
        seed,
        ..CanonizeOptions::default()
    }
}

fn enumerate(max: usize, kinds: Kinds) -> Vec<String> {
    let mut out = Vec::new();
    for o in kinds.list() {
        let e = enumerate_ctts(&SearchConfig::new(max, o));
        eprint!("{}", e.stats);
        out.extend(e.signatures);
    }
    out
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Enumerate { max, kinds } => {
            for s in enumerate(max, kinds) {
                println!("{s}");
            }
        }
        Command::Canonize { sig, seed } => {
            let t = parse(&sig)?;
            let d = canonical_data(&t, &options(seed))?;
            let proto = &d.canonized.triangulation;
            let mut plain = proto.clone();
            plain.set_shapes(None);
            println!("proto {}", signature(&plain)?);
            println!("tets {}", proto.num_tets());
            println!(
                "moves {} randomizations {}",
                d.canonized.moves, d.canonized.randomizations
            );
            for (i, z) in d.canonized.shapes().iter().enumerate() {
                println!("shape {i} {z}");
            }
            println!("cells {:?}", d.cells.cell_sizes());
            let sides: Vec<usize> = d.cells.two_cells.iter().map(|c| c.sides).collect();
            println!("2-cells {sides:?}");
            let report = certify(proto, d.canonized.shapes());
            print!("{report}");
            return Ok(report.passed());
        }
        Command::Isosig { sig, seed } => {
            let t = parse(&sig)?;
            println!("{}", canonical_data(&t, &options(seed))?.signature);
        }
        Command::Group { file, seed } => {
            let mut text = String::new();
            match file {
                Some(p) => text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
                None => {
                    io::stdin().read_to_string(&mut text)?;
                }
            }
            let sigs: Vec<String> = text.split_whitespace().map(str::to_string).collect();
            match group_and_name(&sigs, &options(seed)) {
                Ok(records) => {
                    for r in records {
                        println!("{}", r.tsv_line());
                    }
                }
                Err(f) => {
                    eprintln!("FAILURES\n{}\t{}", f.signature, f.error);
                    return Ok(false);
                }
            }
        }
        Command::Homology { sig } => {
            let t = parse(&sig)?;
            println!("H1 {}", first_homology(&t)?);
            if t.is_orientable()? {
                println!("homology_link {}", is_homology_link(&t)?);
            }
        }
        Command::Morphisms { max, kinds, seed } => {
            let sigs = enumerate(max, kinds);
            let records = group_and_name(&sigs, &options(seed)).map_err(|f| anyhow!("{}: {}", f.signature, f.error))?;
            let mut named = Vec::new();
            for r in &records {
                for (k, s) in r.ctts.iter().enumerate() {
                    named.push((r.ctt_name(k), parse(s)?));
                }
            }
            for p in covering_pairs(&named) {
                println!("{p}");
            }
        }
        Command::Census { max, kinds, seed, out } => {
            let list = kinds.list();
            let cfg = CensusConfig {
                max_tets: max,
                orientable: list.contains(&true),
                non_orientable: list.contains(&false),
                seed,
            };
            let summary = run_census(&cfg, &out).with_context(|| format!("writing {}", out.display()))?;
            print!("{}", summary.summary_text());
            return Ok(summary.failures.is_empty());
        }
        Command::Verify { out } => {
            let report = census::verify(&out).with_context(|| format!("reading {}", out.display()))?;
            print!("{report}");
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
