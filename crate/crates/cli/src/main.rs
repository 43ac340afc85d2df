use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use default_bilattices::algebra::{congruence_lattice, homs, FiniteAlgebra};
use default_bilattices::duality::{
    alter_ego, check_duality, dualize, evaluate, free_algebra, free_algebra_size, optimality_witness,
    priestley_reconstruction, Dropped, Polarity,
};
use default_bilattices::json;
use default_bilattices::kn::{build_kn, s_nm};
use default_bilattices::poset::hasse_dot;
use default_bilattices::product::{build_product, check_transport, product_representation};
use default_bilattices::verify::{self, duality_test_algebras, proper_quotients, Suite};
use default_bilattices::Error;

const DEFAULT_MAX_SIZE: usize = 10_000;
const MAX_SIZE_ENV: &str = "BILATTICE_MAX_SIZE";

#[derive(Parser)]
#[command(name = "dbl", version, about = "Prioritised default bilattices K_n and their dualities")]
struct Cli {
    /// Largest universe any command may build (default 10000, or $BILATTICE_MAX_SIZE)
    #[arg(long, global = true)]
    max_size: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Export {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build K_n; print its algebra JSON or a DOT diagram of one of its orders
    Kn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        export: Export,
        /// k, t, or `s M` for the relation S_{n,M}; DOT only, both orders if omitted
        #[arg(long, num_args = 1..=2, value_names = ["ORDER", "M"])]
        order: Vec<String>,
    },
    /// Print the dual of an algebra as a multisorted space
    Dualize {
        algebra: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Print the algebra of structure-preserving maps on a multisorted space
    Evaluate {
        space: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// The free algebra on K generators in the variety generated by K_n
    Free {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gens: usize,
        /// Print only the size, counted via the Priestley reconstruction
        #[arg(long)]
        count_only: bool,
    },
    /// List the subuniverses of an algebra
    Subalg { algebra: PathBuf },
    /// List the congruences of an algebra as block partitions
    Congruences { algebra: PathBuf },
    /// List the homomorphisms between two algebras
    Homs { from: PathBuf, to: PathBuf },
    /// Represent an algebra as the product bilattice of its default sequence
    ProductRep {
        algebra: PathBuf,
        #[arg(long)]
        n: usize,
        /// Also write the default sequence as JSON to this file
        #[arg(long)]
        sequence_out: Option<PathBuf>,
    },
    /// Build the product bilattice of a default sequence
    Odot { sequence: PathBuf },
    /// Rebuild the Priestley space of the knowledge reduct from a multisorted space
    Reconstruct {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        export: Export,
    },
    /// Run verification suites and print a pass/fail table
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Check that evaluation is an isomorphism on subalgebras of K_i × K_j and their quotients
    VerifyDuality {
        #[arg(long)]
        n: usize,
    },
    /// Show a non-evaluation map once a piece of the alter ego is dropped
    Optimality {
        #[arg(long)]
        n: usize,
        /// rel:M drops S_{M,M}, op:M drops h_{M,M-1}
        #[arg(long)]
        drop: String,
    },
    /// Check the product representation on subalgebras of K_i × K_j
    VerifyProdrep {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
    Overflow(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeOverflow { .. } => Failure::Overflow(e.to_string()),
            e => Failure::Library(e),
        }
    }
}

type Outcome = Result<String, Failure>;

fn max_size(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(MAX_SIZE_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Usage(format!("{MAX_SIZE_ENV} is not a number: {v}"))),
        Err(_) => Ok(DEFAULT_MAX_SIZE),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: fn(&str) -> default_bilattices::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn name_list(a: &FiniteAlgebra, elems: impl IntoIterator<Item = usize>) -> String {
    elems.into_iter().map(|x| a.name(x)).collect::<Vec<_>>().join(" ")
}

fn kn_command(n: usize, export: Export, order: &[String]) -> Outcome {
    let k = build_kn(n);
    let a = k.algebra();
    let names: Vec<String> = (0..a.size()).map(|x| a.name(x)).collect();
    if let Export::Json = export {
        if !order.is_empty() {
            return Err(Failure::Usage("--order applies to --export dot".into()));
        }
        return Ok(json::algebra_to_string(a) + "\n");
    }
    match order.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        [] => Ok(hasse_dot(&a.knowledge_order(), &format!("K{n} knowledge"), Some(&names))
            + &hasse_dot(&a.truth_order(), &format!("K{n} truth"), Some(&names))),
        ["k"] => Ok(hasse_dot(&a.knowledge_order(), &format!("K{n} knowledge"), Some(&names))),
        ["t"] => Ok(hasse_dot(&a.truth_order(), &format!("K{n} truth"), Some(&names))),
        ["s", m] => {
            let m: usize = m.parse().map_err(|_| Failure::Usage(format!("bad level {m}")))?;
            let rel = s_nm(n, m).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut out = format!("digraph \"S{n},{m}\" {{\n  node [shape=plaintext];\n");
            for (i, name) in names.iter().enumerate() {
                writeln!(out, "  n{i} [label=\"{name}\"];").unwrap();
            }
            for (x, y) in rel.pairs() {
                if x != y {
                    writeln!(out, "  n{x} -> n{y};").unwrap();
                }
            }
            out.push_str("}\n");
            Ok(out)
        }
        _ => Err(Failure::Usage("--order takes k, t, or s M".into())),
    }
}

fn free_command(n: usize, gens: usize, count_only: bool, limit: usize) -> Outcome {
    if count_only {
        return Ok(format!("{}\n", free_algebra_size(n, gens)?));
    }
    let size = free_algebra_size(n, gens)?;
    if size > limit as u128 {
        return Err(Error::SizeOverflow { size, limit: limit as u128 }.into());
    }
    Ok(json::algebra_to_string(&free_algebra(n, gens, limit)?.algebra) + "\n")
}

fn product_rep_command(a: &FiniteAlgebra, n: usize, sequence_out: Option<&Path>, limit: usize) -> Outcome {
    let r = product_representation(a, n, limit)?;
    if let Some(path) = sequence_out {
        std::fs::write(path, json::sequence_to_string(&r.sequence.sequence) + "\n")
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    let mut out = String::new();
    let sizes: Vec<String> = r.sequence.sequence.lattices().iter().map(|l| l.size().to_string()).collect();
    writeln!(out, "lattice sizes: {}", sizes.join(" ")).unwrap();
    for c in 0..a.size() {
        writeln!(out, "{} -> {:?}", a.name(c), r.product.universe[r.iso[c]]).unwrap();
    }
    if !r.is_isomorphism {
        return Err(Failure::Verification(out + "not an isomorphism\n"));
    }
    out.push_str("isomorphism verified\n");
    Ok(out)
}

fn odot_command(sequence: &Path, limit: usize) -> Outcome {
    let s = load(sequence, json::sequence_from_str)?;
    let p = build_product(&s, limit)?;
    let names: Vec<String> = p
        .universe
        .iter()
        .map(|a| a.iter().map(|(t, f)| format!("{t}.{f}")).collect::<Vec<_>>().join("|"))
        .collect();
    Ok(json::algebra_to_string(&p.algebra.clone().with_names(names)?) + "\n")
}

fn reconstruct_command(space: &Path, export: Export) -> Outcome {
    let x = load(space, json::space_from_str)?;
    let y = priestley_reconstruction(&x)?;
    match export {
        Export::Json => Ok(json::poset_to_string(&y.poset) + "\n"),
        Export::Dot => {
            let labels: Vec<String> = (0..y.poset.size())
                .map(|k| {
                    let p = y.points[k];
                    let pol = if y.polarity(k) == Polarity::T { "t" } else { "f" };
                    format!("{}:{}{}", p.layer, p.elem, pol)
                })
                .collect();
            Ok(hasse_dot(&y.poset, "reconstruction", Some(&labels)))
        }
    }
}

fn verify_command(suite: &str, max_n: usize, seed: u64, limit: usize) -> Outcome {
    let suite = Suite::parse(suite).ok_or_else(|| {
        Failure::Usage(format!("unknown suite {suite}; use algebra, duality, priestley, product, quasivariety or all"))
    })?;
    let results = verify::run(suite, max_n, seed, limit);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict}  {:width$}  {:>9.3}s  {}", r.name, r.elapsed.as_secs_f64(), r.detail).unwrap();
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} of {} checks passed", results.len() - failed, results.len()).unwrap();
    if failed > 0 {
        Err(Failure::Verification(out))
    } else {
        Ok(out)
    }
}

fn verify_duality_command(n: usize, limit: usize) -> Outcome {
    let ego = alter_ego(n);
    let mut out = String::new();
    let mut failed = 0;
    let mut total = 0;
    for a in duality_test_algebras(n)? {
        for b in std::iter::once(a.clone()).chain(proper_quotients(&a)?) {
            let ok = check_duality(&b, &ego, limit)?.is_isomorphism;
            writeln!(out, "{}  size {}", if ok { "PASS" } else { "FAIL" }, b.size()).unwrap();
            failed += usize::from(!ok);
            total += 1;
        }
    }
    writeln!(out, "{} of {total} algebras passed", total - failed).unwrap();
    if failed > 0 {
        Err(Failure::Verification(out))
    } else {
        Ok(out)
    }
}

fn parse_drop(s: &str) -> Result<Dropped, Failure> {
    let bad = || Failure::Usage(format!("--drop expects rel:M or op:M, got {s}"));
    let (kind, m) = s.split_once(':').ok_or_else(bad)?;
    let m: usize = m.parse().map_err(|_| bad())?;
    match kind {
        "rel" => Ok(Dropped::Relation(m)),
        "op" => Ok(Dropped::Link(m)),
        _ => Err(bad()),
    }
}

fn optimality_command(n: usize, drop: &str) -> Outcome {
    let dropped = parse_drop(drop)?;
    let report = optimality_witness(n, dropped).map_err(|e| match e {
        Error::BadIndices { .. } => Failure::Usage(e.to_string()),
        e => e.into(),
    })?;
    let mut out = String::new();
    let a = &report.test_algebra;
    writeln!(out, "test algebra: {} elements", a.size()).unwrap();
    writeln!(out, "non-evaluation maps: {}", report.non_evaluation_maps.len()).unwrap();
    let ego = alter_ego(n);
    for (m, images) in report.explicit.iter().enumerate() {
        let level = ego.level(m);
        let shown: Vec<String> = images.iter().map(|&v| level.elem(v).to_string()).collect();
        writeln!(out, "witness on sort {m}: [{}]", shown.join(", ")).unwrap();
    }
    if !report.explicit_found {
        return Err(Failure::Verification(out + "the constructed witness was not among the maps found\n"));
    }
    Ok(out)
}

fn verify_prodrep_command(n: usize, limit: usize) -> Outcome {
    let mut out = String::new();
    let mut failed = 0;
    let algebras = duality_test_algebras(n)?;
    for a in &algebras {
        let r = product_representation(a, n, limit)?;
        let ok = r.is_isomorphism && check_transport(&r.product, limit)?.passed();
        writeln!(out, "{}  size {}", if ok { "PASS" } else { "FAIL" }, a.size()).unwrap();
        failed += usize::from(!ok);
    }
    writeln!(out, "{} of {} algebras passed", algebras.len() - failed, algebras.len()).unwrap();
    if failed > 0 {
        Err(Failure::Verification(out))
    } else {
        Ok(out)
    }
}

fn run(cli: Cli) -> Outcome {
    let limit = max_size(cli.max_size)?;
    match cli.command {
        Command::Kn { n, export, order } => kn_command(n, export, &order),
        Command::Dualize { algebra, n } => {
            let a = load(&algebra, json::algebra_from_str)?;
            Ok(json::space_to_string(&dualize(&a, &alter_ego(n))?.space) + "\n")
        }
        Command::Evaluate { space, n } => {
            let x = load(&space, json::space_from_str)?;
            Ok(json::algebra_to_string(&evaluate(&x, &alter_ego(n), limit)?.algebra) + "\n")
        }
        Command::Free { n, gens, count_only } => free_command(n, gens, count_only, limit),
        Command::Subalg { algebra } => {
            let a = load(&algebra, json::algebra_from_str)?;
            Ok(a.all_subalgebras().iter().map(|s| name_list(&a, s.ones()) + "\n").collect())
        }
        Command::Congruences { algebra } => {
            let a = load(&algebra, json::algebra_from_str)?;
            Ok(congruence_lattice(&a)
                .iter()
                .map(|c| {
                    let blocks: Vec<String> = c.blocks().into_iter().map(|b| format!("{{{}}}", name_list(&a, b))).collect();
                    blocks.join(" ") + "\n"
                })
                .collect())
        }
        Command::Homs { from, to } => {
            let a = load(&from, json::algebra_from_str)?;
            let b = load(&to, json::algebra_from_str)?;
            Ok(homs(&a, &b).iter().map(|h| name_list(&b, h.iter().copied()) + "\n").collect())
        }
        Command::ProductRep { algebra, n, sequence_out } => {
            product_rep_command(&load(&algebra, json::algebra_from_str)?, n, sequence_out.as_deref(), limit)
        }
        Command::Odot { sequence } => odot_command(&sequence, limit),
        Command::Reconstruct { space, export } => reconstruct_command(&space, export),
        Command::Verify { suite, max_n, seed } => verify_command(&suite, max_n, seed, limit),
        Command::VerifyDuality { n } => verify_duality_command(n, limit),
        Command::Optimality { n, drop } => optimality_command(n, &drop),
        Command::VerifyProdrep { n } => verify_prodrep_command(n, limit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Overflow(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
