//! Command-line front end: dissimilarity vectors, tropical certification,
//! the built-in worked example, randomized trials, and reconstruction.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use treetrop::{
    check_all, exchange_relations, from_metric_tree, m_dissimilarity, m_from_pairwise,
    neighbor_joining, pairwise, parse_newick, random_tree, to_newick, tree_isomorphic,
    tropical_check, weight_vector, Convention, DissimilarityVector, Error as MathError,
    QuadraticRelation, Rational, WeightVector,
};

#[derive(Parser)]
#[command(
    name = "treetrop",
    version,
    about = "Exact m-dissimilarity vectors of weighted trees and tropical Pluecker certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Min,
    Max,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the m-dissimilarity vector of a weighted tree.
    Dissim {
        /// Inline Newick string (overrides --input and stdin).
        #[arg(long)]
        newick: Option<String>,
        /// File holding the Newick string; stdin when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Subset size m, between 2 and the leaf count.
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Certify a weight vector against the tropical quadratic relations.
    ///
    /// Input is a vector JSON object, a dissimilarity TSV, or a Newick tree
    /// (whose m-dissimilarity vector is computed first).
    Check {
        #[arg(long)]
        newick: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Subset size for tree input (default 2); must match vector input.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Max)]
        convention: ConventionArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Built-in worked example: the balanced 8-leaf unit tree at m = 3.
    Demo {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Deterministic randomized trial battery over small trees.
    RandomSuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random trees to run.
        #[arg(long, default_value_t = 50)]
        trees: usize,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Largest subset size exercised per tree.
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::Max)]
        convention: ConventionArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rebuild a tree from a pairwise vector by neighbor joining.
    Reconstruct {
        /// Vector file, JSON or TSV; stdin when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A command failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
    fn parameter(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<MathError> for Failure {
    fn from(err: MathError) -> Self {
        match err {
            MathError::MOutOfRange { .. }
            | MathError::TooFewLeaves(_)
            | MathError::Parameter(_)
            | MathError::FunctionalArity { .. }
            | MathError::FunctionalNotValid(_)
            | MathError::FractionRange
            | MathError::SubsetSize { .. } => Failure::parameter(err.to_string()),
            other => Failure::input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Dissim { newick, input, m, format, output } => {
            cmd_dissim(newick, input, m, format, output)
        }
        Command::Check { newick, input, m, convention, output } => {
            cmd_check(newick, input, m, convention, output)
        }
        Command::Demo { output } => cmd_demo(output),
        Command::RandomSuite { seed, trees, n_min, n_max, m, convention, output } => {
            cmd_random_suite(seed, trees, n_min, n_max, m, convention, output)
        }
        Command::Reconstruct { input, output } => cmd_reconstruct(input, output),
    }
}

/// Inline string, then file, then stdin.
fn read_source(newick: Option<String>, input: Option<PathBuf>) -> Result<String, Failure> {
    if let Some(text) = newick {
        return Ok(text);
    }
    if let Some(path) = input {
        return fs::read_to_string(&path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())));
    }
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
    Ok(text)
}

fn write_output(output: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(path) => fs::write(&path, &text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_dissim(
    newick: Option<String>,
    input: Option<PathBuf>,
    m: usize,
    format: Format,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    let tree = parse_newick(read_source(newick, input)?.trim())?;
    let vector = m_dissimilarity(&tree, m)?;
    let text = match format {
        Format::Json => vector.to_json_string(),
        Format::Tsv => vector.to_tsv(),
    };
    write_output(output, &text)
}

/// Vector JSON when the input starts with '{', dissimilarity TSV when it
/// contains tabs, Newick otherwise.
fn load_weight_vector(
    text: &str,
    m: Option<usize>,
) -> Result<(WeightVector, &'static str), Failure> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let vector = WeightVector::from_json_str(trimmed)?;
        if let Some(m) = m {
            if m != vector.m() {
                return Err(Failure::parameter(format!(
                    "--m {m} conflicts with the input vector's m = {}",
                    vector.m()
                )));
            }
        }
        Ok((vector, "vector"))
    } else if trimmed.contains('\t') {
        let d = DissimilarityVector::from_tsv(trimmed)?;
        if let Some(m) = m {
            if m != d.m() {
                return Err(Failure::parameter(format!(
                    "--m {m} conflicts with the input vector's m = {}",
                    d.m()
                )));
            }
        }
        Ok((WeightVector::from_dissimilarity(&d), "vector"))
    } else {
        let tree = parse_newick(trimmed)?;
        let d = m_dissimilarity(&tree, m.unwrap_or(2))?;
        Ok((WeightVector::from_dissimilarity(&d), "tree"))
    }
}

fn cmd_check(
    newick: Option<String>,
    input: Option<PathBuf>,
    m: Option<usize>,
    convention: ConventionArg,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    let text = read_source(newick, input)?;
    let (vector, kind) = load_weight_vector(&text, m)?;
    let conventions: &[Convention] = match convention {
        ConventionArg::Min => &[Convention::Min],
        ConventionArg::Max => &[Convention::Max],
        ConventionArg::Both => &[Convention::Max, Convention::Min],
    };
    let mut report = serde_json::Map::new();
    let mut all_passed = true;
    for &conv in conventions {
        let certificate = check_all(&vector, conv);
        all_passed &= certificate.passed;
        eprintln!(
            "{kind} ({}, {}): {}/{} relations pass under {conv}",
            format_args!("n = {}", vector.n()),
            format_args!("m = {}", vector.m()),
            certificate.relations_checked - certificate.failures.len(),
            certificate.relations_checked,
        );
        let value: serde_json::Value = serde_json::from_str(&certificate.to_json_string())
            .expect("certificate JSON is well formed");
        report.insert(conv.to_string(), value);
    }
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(report))
        .expect("report serialization");
    write_output(output, &text)?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::check("at least one tropical relation failed"))
    }
}

/// The distinguished four-term relation the demo inspects:
/// p{1,2,3}p{4,5,6} - p{1,2,4}p{3,5,6} + p{1,2,5}p{3,4,6} - p{1,2,6}p{3,4,5}.
fn demo_relation(relations: &[QuadraticRelation]) -> Option<&QuadraticRelation> {
    let want: Vec<(Vec<u32>, Vec<u32>)> = vec![
        (vec![1, 2, 3], vec![4, 5, 6]),
        (vec![1, 2, 4], vec![3, 5, 6]),
        (vec![1, 2, 5], vec![3, 4, 6]),
        (vec![1, 2, 6], vec![3, 4, 5]),
    ];
    relations.iter().find(|rel| {
        rel.monomials().len() == 4
            && rel
                .monomials()
                .iter()
                .map(|mono| (mono.left.members().to_vec(), mono.right.members().to_vec()))
                .collect::<Vec<_>>()
                == want
    })
}

fn cmd_demo(output: Option<PathBuf>) -> Result<(), Failure> {
    // Unrooted form of the balanced binary tree on 8 leaves with unit edges:
    // one internal edge of length 2, every other edge of length 1.
    let newick = "((1:1,2:1):1,(3:1,4:1):1,((5:1,6:1):1,(7:1,8:1):1):2);";
    let tree = parse_newick(newick)?;
    let two = Rational::from_integer(2.into());
    let long_edges: Vec<usize> = (0..tree.num_edges())
        .filter(|&e| tree.edges()[e].length == two)
        .collect();
    let [long_edge] = long_edges[..] else {
        return Err(Failure::check("expected exactly one edge of length 2"));
    };

    let m = 3;
    let d3 = m_dissimilarity(&tree, m)?;
    let functional = from_metric_tree(&tree, m, long_edge, &Rational::new(1.into(), 2.into()))?;
    let weights = weight_vector(&functional);
    if !weights.matches_dissimilarity(&d3) {
        return Err(Failure::check(
            "realized weight vector differs from the dissimilarity vector",
        ));
    }

    let relations = exchange_relations(m, tree.num_leaves())?;
    let relation = demo_relation(&relations)
        .ok_or_else(|| Failure::check("distinguished relation not among exchange relations"))?;
    let max_check = tropical_check(relation, &weights, Convention::Max)?;
    let min_check = tropical_check(relation, &weights, Convention::Min)?;

    let expected: Vec<Rational> = [12, 12, 14, 14]
        .iter()
        .map(|&k| Rational::from_integer(k.into()))
        .collect();
    if max_check.weights != expected {
        return Err(Failure::check(format!(
            "distinguished relation weights differ from (12, 12, 14, 14): got {:?}",
            max_check.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>()
        )));
    }
    if !max_check.passed || !min_check.passed {
        return Err(Failure::check(
            "distinguished relation must pass under both conventions",
        ));
    }

    let certificate_max = check_all(&weights, Convention::Max);
    let certificate_min = check_all(&weights, Convention::Min);
    if !certificate_max.passed {
        return Err(Failure::check("full max certificate failed on the demo tree"));
    }

    let rational_strings = |values: &[Rational]| {
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>()
    };
    let report = json!({
        "tree": newick,
        "m": m,
        "long_edge": { "index": long_edge, "length": "2" },
        "highlights": {
            "d{1,2,3}": d3.value(&[1, 2, 3]).expect("entry").to_string(),
            "d{4,5,6}": d3.value(&[4, 5, 6]).expect("entry").to_string(),
        },
        "relation": relation.to_string(),
        "monomial_weights": rational_strings(&max_check.weights),
        "relation_passes": { "max": max_check.passed, "min": min_check.passed },
        "certificates": {
            "max": {
                "relations_checked": certificate_max.relations_checked,
                "failures": certificate_max.failures.len(),
                "passed": certificate_max.passed,
            },
            "min": {
                "relations_checked": certificate_min.relations_checked,
                "failures": certificate_min.failures.len(),
                "passed": certificate_min.passed,
            },
        },
        "dissimilarity": serde_json::from_str::<serde_json::Value>(&d3.to_json_string())
            .expect("vector JSON is well formed"),
    });
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    write_output(output, &text)
}

fn convention_of(arg: ConventionArg) -> Vec<Convention> {
    match arg {
        ConventionArg::Min => vec![Convention::Min],
        ConventionArg::Max => vec![Convention::Max],
        ConventionArg::Both => vec![Convention::Max, Convention::Min],
    }
}

fn cmd_random_suite(
    seed: u64,
    trees: usize,
    n_min: usize,
    n_max: usize,
    m_max: usize,
    convention: ConventionArg,
    output: Option<PathBuf>,
) -> Result<(), Failure> {
    if n_min < 3 || n_min > n_max {
        return Err(Failure::parameter(
            "need 3 <= n-min <= n-max for random tree generation",
        ));
    }
    if m_max < 2 {
        return Err(Failure::parameter("need --m at least 2"));
    }
    let conventions = convention_of(convention);
    let mut relation_cache: std::collections::BTreeMap<(usize, usize), Vec<QuadraticRelation>> =
        std::collections::BTreeMap::new();
    let mut checked = [0usize; 4];
    let mut passed = [0usize; 4];
    const ORACLE: usize = 0;
    const REALIZATION: usize = 1;
    const CERTIFICATION: usize = 2;
    const RECONSTRUCTION: usize = 3;

    for t in 0..trees {
        let n = n_min + t % (n_max - n_min + 1);
        let tree_seed = seed.wrapping_mul(1_000_003).wrapping_add(t as u64);
        let tree = random_tree(n, tree_seed, 12)?;
        let d2 = pairwise(&tree);

        for m in 2..=m_max.min(n) {
            let direct = m_dissimilarity(&tree, m)?;

            checked[ORACLE] += 1;
            if m_from_pairwise(&d2, m)? == direct {
                passed[ORACLE] += 1;
            }

            checked[REALIZATION] += 1;
            let root_edge = t % tree.num_edges();
            let functional =
                from_metric_tree(&tree, m, root_edge, &Rational::new(1.into(), 2.into()))?;
            let weights = weight_vector(&functional);
            if weights.matches_dissimilarity(&direct) {
                passed[REALIZATION] += 1;
            }

            let relations = relation_cache
                .entry((m, n))
                .or_insert_with(|| exchange_relations(m, n).expect("valid shape"));
            checked[CERTIFICATION] += 1;
            let mut all_relations_pass = true;
            for conv in &conventions {
                for relation in relations.iter() {
                    if !tropical_check(relation, &weights, *conv)?.passed {
                        all_relations_pass = false;
                    }
                }
            }
            if all_relations_pass {
                passed[CERTIFICATION] += 1;
            }
        }

        checked[RECONSTRUCTION] += 1;
        let outcome = neighbor_joining(&d2)?;
        let report = tree_isomorphic(&tree, &outcome.tree)?;
        if outcome.exact && report.isomorphic && report.length_match {
            passed[RECONSTRUCTION] += 1;
        }
    }

    let all_passed = checked == passed;
    let names = ["oracle_equivalence", "realization", "certification", "reconstruction"];
    let properties: serde_json::Map<String, serde_json::Value> = names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            (
                name.to_string(),
                json!({ "checked": checked[i], "passed": passed[i] }),
            )
        })
        .collect();
    let report = json!({
        "seed": seed,
        "trees": trees,
        "n_range": [n_min, n_max],
        "m_max": m_max,
        "conventions": conventions.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "properties": properties,
        "all_passed": all_passed,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    write_output(output, &text)?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::check("at least one randomized property failed"))
    }
}

fn cmd_reconstruct(input: Option<PathBuf>, output: Option<PathBuf>) -> Result<(), Failure> {
    let text = read_source(None, input)?;
    let trimmed = text.trim();
    let d2 = if trimmed.starts_with('{') {
        DissimilarityVector::from_json_str(trimmed)?
    } else if trimmed.contains('\t') {
        DissimilarityVector::from_tsv(trimmed)?
    } else {
        return Err(Failure::input("expected a vector as JSON or TSV"));
    };
    if d2.m() != 2 {
        return Err(Failure::input(format!(
            "reconstruction needs a pairwise vector, got m = {}",
            d2.m()
        )));
    }
    let outcome = neighbor_joining(&d2)?;
    let mut report = json!({
        "newick": to_newick(&outcome.tree),
        "residual": outcome.residual.to_string(),
        "exact": outcome.exact,
    });
    if !outcome.exact {
        report["warning"] = json!("input is not a tree metric; tree realizes it only approximately");
    }
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    write_output(output, &text)
}
