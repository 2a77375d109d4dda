//! Command-line front end: `mine`, `discretize`, `transform` and `oracle-check`.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 invalid configuration,
//! 3 unreadable or invalid input data.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::apriori::{apriori_filtered, Counting, HashTreeConfig, MiningOptions};
use crate::dataset::{parse_basket, ItemDictionary, Itemset, TransactionDatabase};
use crate::error::{Error, Result};
use crate::fraction::{parse_rational, Rational, Threshold};
use crate::interest::{annotate, InterestMode, CHI2_CRITICAL_5PCT};
use crate::quantitative::{
    format_partitionings, parse_partitionings, quantitative_attributes, AttributeGroups, Discretization, PartitionMode,
};
use crate::report::{write_rules, OutputFormat};
use crate::rules::generate_rules;
use crate::taxonomy::{extend_database, mine_generalized_filtered, parse_taxonomy, read_edges, TaxonomyGraph};
use crate::transform::{
    format_numbering, quantitative_to_taxonomy, quantitative_to_taxonomy_bisect, taxonomy_to_quantitative,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "armine", version, about = "Apriori association rule mining")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine association rules from a basket file.
    Mine(RunConfig),
    /// Print the interval partitioning of every quantitative attribute.
    Discretize(RunConfig),
    /// Convert between quantitative attributes and taxonomies.
    Transform {
        #[arg(value_enum)]
        direction: Direction,
        #[command(flatten)]
        config: RunConfig,
        /// Partitioning file (`attr lo hi raw_lo raw_hi count`) for `to-taxonomy`.
        #[arg(long)]
        partitions_file: Option<PathBuf>,
        /// Build a binary tree by recursive halving instead of three levels.
        #[arg(long)]
        bisect: bool,
    },
    /// Compare the miners against brute-force oracles on the input.
    OracleCheck(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToTaxonomy,
    ToQuantitative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiscretizeMode {
    None,
    EquiWidth,
    EquiDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InterestArg {
    None,
    Lift,
    Chi2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Basket file.
    pub input: Option<PathBuf>,
    /// Minimum support, e.g. `0.3` or `30%`.
    #[arg(long, default_value = "10%")]
    pub min_support: String,
    #[arg(long, default_value = "50%")]
    pub min_confidence: String,
    /// Maximum support for merged intervals; defaults to 5 × min support.
    #[arg(long)]
    pub max_support: Option<String>,
    /// Partial completeness level K (> 1).
    #[arg(long = "K", visible_alias = "completeness", default_value = "1.5")]
    pub completeness: String,
    #[arg(long, value_enum, default_value = "none")]
    pub discretize: DiscretizeMode,
    /// Fixed partition count instead of the one derived from K.
    #[arg(long)]
    pub partitions: Option<usize>,
    /// Taxonomy edge list (`parent child` per line).
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    pub interest: InterestArg,
    #[arg(long, default_value_t = CHI2_CRITICAL_5PCT)]
    pub chi2_threshold: f64,
    #[arg(long, default_value_t = 8)]
    pub buckets: usize,
    #[arg(long, default_value_t = 16)]
    pub leaf_split: usize,
    /// Count candidates by plain scan instead of the hash tree.
    #[arg(long)]
    pub naive: bool,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    /// Seed for randomized probes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Validated numeric settings of a [`RunConfig`].
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub min_support: Threshold,
    pub min_confidence: Threshold,
    pub discretization: Option<Discretization>,
    pub interest: InterestMode,
    pub options: MiningOptions,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn settings(&self) -> Result<Settings> {
        let min_support: Threshold = self.min_support.parse()?;
        let min_confidence: Threshold = self.min_confidence.parse()?;
        let max_support = self.max_support.as_deref().map(str::parse::<Threshold>).transpose()?;
        if max_support.is_some_and(|m| m < min_support) {
            return Err(Error::MaxBelowMinSupport);
        }
        let completeness = parse_rational(&self.completeness)
            .filter(|k| *k > Rational::from_integer(1))
            .ok_or_else(|| Error::InvalidCompleteness(self.completeness.clone()))?;
        if self.buckets == 0 || self.leaf_split == 0 || self.partitions == Some(0) {
            return Err(Error::InvalidThreshold(
                "bucket, leaf and partition counts must be positive".into(),
            ));
        }
        let mode = match self.discretize {
            DiscretizeMode::None => None,
            DiscretizeMode::EquiWidth => Some(PartitionMode::EquiWidth),
            DiscretizeMode::EquiDepth => Some(PartitionMode::EquiDepth),
        };
        Ok(Settings {
            min_support,
            min_confidence,
            discretization: mode.map(|mode| Discretization {
                mode,
                partitions: self.partitions,
                completeness,
                max_support,
            }),
            interest: match self.interest {
                InterestArg::None => InterestMode::None,
                InterestArg::Lift => InterestMode::Lift,
                InterestArg::Chi2 => InterestMode::ChiSquared {
                    threshold: self.chi2_threshold,
                },
            },
            options: MiningOptions {
                hash_tree: HashTreeConfig {
                    bucket_count: self.buckets,
                    leaf_split_threshold: self.leaf_split,
                },
                counting: if self.naive {
                    Counting::Naive
                } else {
                    Counting::HashTree
                },
            },
            format: match self.format {
                FormatArg::Table => OutputFormat::Table,
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Jsonl => OutputFormat::Jsonl,
            },
        })
    }

    /// Same validation with equi-depth as the default partitioning mode.
    fn partition_settings(&self) -> Result<(Settings, Discretization)> {
        let settings = self.settings()?;
        let discretization = settings.discretization.unwrap_or(Discretization {
            mode: PartitionMode::EquiDepth,
            partitions: self.partitions,
            completeness: parse_rational(&self.completeness).expect("validated"),
            max_support: None,
        });
        Ok((settings, discretization))
    }

    fn load(&self) -> Result<TransactionDatabase> {
        let path = self
            .input
            .as_deref()
            .ok_or_else(|| Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, "no input file given")))?;
        parse_basket(&read(path)?)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidThreshold(_) | Error::InvalidCompleteness(_) | Error::MaxBelowMinSupport => EXIT_CONFIG,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let threads = match &cli.command {
        Command::Mine(c) | Command::Discretize(c) | Command::OracleCheck(c) => c.threads,
        Command::Transform { config, .. } => config.threads,
    };
    let pool = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let (result, stdout, stderr) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let result = execute(&cli.command, &mut o, &mut e);
        (result, o, e)
    });
    let _ = out.write_all(&stdout);
    let _ = err.write_all(&stderr);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Mine(config) => cmd_mine(config, out).map(|_| EXIT_OK),
        Command::Discretize(config) => cmd_discretize(config, out, err).map(|_| EXIT_OK),
        Command::Transform {
            direction,
            config,
            partitions_file,
            bisect,
        } => cmd_transform(config, *direction, partitions_file.as_deref(), *bisect, out).map(|_| EXIT_OK),
        Command::OracleCheck(config) => cmd_oracle_check(config, out),
    }
}

pub fn cmd_mine(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let settings = config.settings()?;
    let (db, groups) = load_mining_input(config, &settings)?;
    let keep = |s: &Itemset| groups.as_ref().is_none_or(|g| g.distinct(s));

    let (dictionary, rules, scored_db) = match &config.taxonomy {
        Some(path) => {
            let taxonomy = parse_taxonomy(&read(path)?, &db)?;
            let mined = mine_generalized_filtered(
                &db,
                &taxonomy,
                settings.min_support,
                settings.min_confidence,
                &settings.options,
                keep,
            )?;
            (mined.dictionary, mined.rules, extend_database(&db, &taxonomy))
        }
        None => {
            let frequent = apriori_filtered(&db, settings.min_support, &settings.options, keep);
            let rules = generate_rules(&frequent, settings.min_confidence);
            (db.dictionary().clone(), rules, db)
        }
    };

    let annotations = (settings.interest != InterestMode::None).then(|| {
        rules
            .iter()
            .map(|r| annotate(&scored_db, r, settings.interest))
            .collect::<Vec<_>>()
    });
    write_rules(out, settings.format, &dictionary, &rules, annotations.as_deref())
}

/// The input database, booleanized when discretizing, with the attribute
/// of each synthetic interval item.
fn load_mining_input(
    config: &RunConfig,
    settings: &Settings,
) -> Result<(TransactionDatabase, Option<AttributeGroups>)> {
    let db = config.load()?;
    match &settings.discretization {
        Some(discretization) => {
            let (boolean, groups) = discretization.booleanize_grouped(&db, settings.min_support)?;
            Ok((boolean, Some(groups)))
        }
        None => Ok((db, None)),
    }
}

pub fn cmd_discretize(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let (settings, discretization) = config.partition_settings()?;
    let db = config.load()?;
    let n_attributes = quantitative_attributes(&db).len();
    if n_attributes > 0 {
        let requested = discretization.requested_partitions(n_attributes, settings.min_support)?;
        writeln!(
            err,
            "{n_attributes} quantitative attribute(s), {requested} partition(s) requested"
        )?;
    }
    let partitionings = discretization.partition(&db, settings.min_support)?;
    out.write_all(format_partitionings(&partitionings).as_bytes())?;
    Ok(())
}

pub fn cmd_transform(
    config: &RunConfig,
    direction: Direction,
    partitions_file: Option<&Path>,
    bisect: bool,
    out: &mut dyn Write,
) -> Result<()> {
    match direction {
        Direction::ToTaxonomy => {
            let (settings, discretization) = config.partition_settings()?;
            let db = config.load()?;
            let text = if bisect {
                quantitative_attributes(&db)
                    .iter()
                    .map(|a| quantitative_to_taxonomy_bisect(a).to_edge_text())
                    .collect::<String>()
            } else {
                let partitionings = match partitions_file {
                    Some(path) => parse_partitionings(&read(path)?, &db)?,
                    None => discretization.partition(&db, settings.min_support)?,
                };
                partitionings
                    .iter()
                    .map(|p| quantitative_to_taxonomy(p).to_edge_text())
                    .collect::<String>()
            };
            out.write_all(text.as_bytes())?;
        }
        Direction::ToQuantitative => {
            let path = config.taxonomy.as_deref().ok_or_else(|| {
                Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "--taxonomy is required",
                ))
            })?;
            let edges = read_edges(read(path)?.as_bytes())?;
            let items = match &config.input {
                Some(_) => config.load()?.dictionary().clone(),
                None => ItemDictionary::default(),
            };
            let taxonomy = TaxonomyGraph::from_edges(&edges, &items)?;
            let numbered = taxonomy_to_quantitative(&taxonomy)?;
            out.write_all(format_numbering(&numbered).as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(feature = "testing")]
pub fn cmd_oracle_check(config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    use crate::apriori::{apriori_gen, HashTree};
    use crate::dataset::ItemId;
    use crate::oracle::{bf_frequent_itemsets, bf_rules, naive_generalized, naive_subset};

    let settings = config.settings()?;
    let (db, groups) = load_mining_input(config, &settings)?;
    let keep = |s: &Itemset| groups.as_ref().is_none_or(|g| g.distinct(s));
    let mut failures = 0;
    let mut report = |name: &str, ok: bool, out: &mut dyn Write| -> Result<()> {
        if !ok {
            failures += 1;
        }
        writeln!(out, "{} {name}", if ok { "PASS" } else { "FAIL" })?;
        Ok(())
    };

    let tree = apriori_filtered(&db, settings.min_support, &settings.options, keep);
    let naive = apriori_filtered(
        &db,
        settings.min_support,
        &MiningOptions {
            counting: Counting::Naive,
            ..settings.options
        },
        keep,
    );
    report("hash-tree counting equals naive counting", tree == naive, out)?;
    match bf_frequent_itemsets(&db, settings.min_support) {
        Ok(bf) => {
            let bf = bf.filtered(keep);
            report("apriori equals exhaustive itemset enumeration", tree == bf, out)?;
            let rules = generate_rules(&tree, settings.min_confidence);
            report(
                "rule generation equals exhaustive rule enumeration",
                rules == bf_rules(&bf, settings.min_confidence),
                out,
            )?;
        }
        Err(e) => writeln!(out, "SKIP exhaustive enumeration: {e}")?,
    }

    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut probes_ok = true;
    let n_items = db.n_items() as u32;
    for k in 2..=tree.max_size().max(2) {
        let previous: Vec<Itemset> = tree.level(k - 1).iter().map(|(s, _)| s.clone()).collect();
        let mut candidates = apriori_gen(&previous).candidates;
        if n_items >= k as u32 {
            for _ in 0..32 {
                let items: Vec<ItemId> = (0..k).map(|_| ItemId(rng.gen_range(0..n_items))).collect();
                let s = Itemset::new(items);
                if s.len() == k && !candidates.contains(&s) {
                    candidates.push(s);
                }
            }
        }
        for buckets in [2, 8, 32] {
            for leaf in [1, 4, 16] {
                let ht = HashTree::build(
                    k,
                    candidates.clone(),
                    HashTreeConfig {
                        bucket_count: buckets,
                        leaf_split_threshold: leaf,
                    },
                );
                for t in db.transactions() {
                    let mut expected = naive_subset(&candidates, t.items.items());
                    expected.sort();
                    let mut got = ht.subset(t.items.items());
                    got.sort();
                    probes_ok &= expected == got;
                }
            }
        }
    }
    report("hash-tree subset equals naive containment", probes_ok, out)?;

    if let Some(path) = &config.taxonomy {
        let taxonomy = parse_taxonomy(&read(path)?, &db)?;
        let optimized = mine_generalized_filtered(
            &db,
            &taxonomy,
            settings.min_support,
            settings.min_confidence,
            &settings.options,
            keep,
        )?;
        let (itemsets, _) = naive_generalized(&db, &taxonomy, settings.min_support, settings.min_confidence);
        let itemsets = itemsets.filtered(keep);
        let rules = generate_rules(&itemsets, settings.min_confidence);
        report(
            "generalized mining equals naive full extension",
            optimized.itemsets == itemsets && optimized.rules == rules,
            out,
        )?;
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

#[cfg(not(feature = "testing"))]
pub fn cmd_oracle_check(_config: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "oracle-check requires the `testing` feature")?;
    Ok(EXIT_CONFIG)
}
