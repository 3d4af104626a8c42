mod render;
mod seedfile;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qcluster::expansion::{build_exchange_graph, initial_tracked, Atlas, Frame, DEFAULT_NODE_CAP};
use qcluster::leclerc::{
    check_codegree_triangular, check_degree_triangular, enumerate_basis, verify_theorem, LeclercContext, RScope,
};
use qcluster::seed::QuantumSeed;
use qcluster::tropical::{self, Direction};
use qcluster::{instances, Error};

use seedfile::SeedFile;

#[derive(Parser)]
#[command(name = "qcluster", version, about = "Quantum cluster seeds, mutations and triangular bases")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test B~^T Lambda = (D 0); a missing Lambda is synthesized and printed.
    Check { seed: String },
    /// Mutate along a word and print the resulting seed file.
    Mutate {
        seed: String,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Print cluster variables of the seed reached by a word, in the initial torus.
    Expand {
        seed: String,
        #[arg(long, default_value = "")]
        word: String,
        /// 1-based vertex; all variables when omitted.
        #[arg(long)]
        var: Option<usize>,
    },
    /// Enumerate the exchange graph.
    Graph {
        seed: String,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        cap: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Find t[1] or t[-1] for a node and test the swap and commuting-diagram properties there.
    Shift {
        seed: String,
        #[arg(long, value_enum, default_value_t = Dir::Plus)]
        direction: Dir,
        /// 1-based graph node.
        #[arg(long, default_value_t = 1)]
        node: usize,
        /// RNG seed for sampled vectors.
        #[arg(long = "seed", id = "rng", default_value_t = tropical::DEFAULT_RNG_SEED)]
        rng: u64,
    },
    /// Verify the two-extremal-term structure over a cluster-monomial basis.
    Leclerc {
        seed: String,
        /// Unfrozen exponent cap of the basis.
        #[arg(long, default_value_t = 3)]
        cap: i64,
        /// `all`, a 1-based node list such as `1,3`, or `conjecture` (R over all basis elements).
        #[arg(long, default_value = "all")]
        scope: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Plus,
    Minus,
}

enum Fail {
    Usage(String),
    Check(String),
    Internal(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::BadVertex(_) | Error::NotUnfrozen(_) => Fail::Usage(e.to_string()),
            Error::Truncated(_) => Fail::Check(e.to_string()),
            e => Fail::Internal(e.to_string()),
        }
    }
}

type Out = Result<(String, bool), Fail>;

fn load(input: &str) -> Result<SeedFile, Fail> {
    if let Some(name) = input.strip_prefix("builtin:") {
        let s = instances::by_name(name).ok_or_else(|| Fail::Usage(format!("unknown builtin seed `{name}`")))?;
        return Ok(SeedFile::from_seed(&s));
    }
    let text = std::fs::read_to_string(Path::new(input)).map_err(|e| Fail::Usage(format!("{input}: {e}")))?;
    SeedFile::parse(&text).map_err(Fail::Usage)
}

fn load_seed(input: &str) -> Result<QuantumSeed, Fail> {
    load(input)?.to_seed().map_err(Fail::Usage)
}

fn parse_word(w: &str, n: usize) -> Result<Vec<usize>, Fail> {
    w.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| match x.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
            _ => Err(Fail::Usage(format!("bad vertex `{x}` in word; expected 1..={n}"))),
        })
        .collect()
}

/// Fails fast on seeds whose mutation class is visibly not 2-finite, before any expansion.
fn require_finite(seed: &QuantumSeed, cap: usize) -> Result<(), Fail> {
    match seed.two_finite_obstruction(cap) {
        None => Ok(()),
        Some((word, x)) => {
            let w: Vec<String> = word.iter().map(|k| (k + 1).to_string()).collect();
            Err(Fail::Check(format!(
                "not finite type: after word [{}] the exchange matrix has |b_ij b_ji| = {x}",
                w.join(",")
            )))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn cmd_check(input: &str) -> Out {
    let file = load(input)?;
    let (seed, synthesized) = file.to_seed_unchecked().map_err(Fail::Usage)?;
    let c = seed.check_compatible();
    let mut out = String::new();
    if synthesized {
        out += "synthesized compatible pair:\n";
        out += &pretty(&serde_json::to_value(SeedFile::from_seed(&seed)).expect("seed file serializes"));
    }
    if !c.ok {
        let _ = writeln!(out, "incompatible: {}", c.diagnostic.unwrap_or_default());
        return Ok((out, false));
    }
    if seed.d().iter().any(|&x| x <= 0) {
        out += "incompatible: D must be positive\n";
        return Ok((out, false));
    }
    out += "compatible\n";
    Ok((out, true))
}

fn cmd_mutate(input: &str, word: &str) -> Out {
    let seed = load_seed(input)?;
    let w = parse_word(word, seed.n())?;
    let m = seed.mutate_word(&w)?;
    Ok((pretty(&serde_json::to_value(SeedFile::from_seed(&m)).expect("seed file serializes")), true))
}

fn cmd_expand(input: &str, word: &str, var: Option<usize>) -> Out {
    let seed = load_seed(input)?;
    let n = seed.n();
    let w = parse_word(word, n)?;
    let frame = Frame::new(seed)?;
    let t = initial_tracked(&frame).apply_word(&w)?;
    match var {
        Some(i) if (1..=n).contains(&i) => Ok((format!("{}\n", t.vars[i - 1]), true)),
        Some(i) => Err(Fail::Usage(format!("bad variable {i}; expected 1..={n}"))),
        None => {
            let mut out = String::new();
            for (i, z) in t.vars.iter().enumerate() {
                let _ = writeln!(out, "X_{} = {z}", i + 1);
            }
            Ok((out, true))
        }
    }
}

fn cmd_graph(input: &str, cap: usize, dot: bool) -> Out {
    let seed = load_seed(input)?;
    require_finite(&seed, cap)?;
    let g = build_exchange_graph(&seed, cap)?;
    g.require_closed()?;
    let out = if dot {
        render::dot(&g)
    } else {
        format!(
            "{} nodes\n{} cluster variables\n{} edges\n{} violations\n",
            g.len(),
            g.cluster_variables().len(),
            g.edges.len(),
            g.violations.len()
        )
    };
    let mut out = out;
    for v in &g.violations {
        let _ = writeln!(out, "violation: {v}");
    }
    Ok((out, g.violations.is_empty()))
}

fn cmd_shift(input: &str, dir: Dir, node: usize, rng: u64) -> Out {
    let seed = load_seed(input)?;
    require_finite(&seed, DEFAULT_NODE_CAP)?;
    let atlas = Atlas::build(&seed, DEFAULT_NODE_CAP)?;
    if node == 0 || node > atlas.len() {
        return Err(Fail::Usage(format!("bad node {node}; expected 1..={}", atlas.len())));
    }
    let t = node - 1;
    let direction = match dir {
        Dir::Plus => Direction::Plus,
        Dir::Minus => Direction::Minus,
    };
    let sh = tropical::detect_shift(&atlas, t, direction)?;
    let samples = tropical::default_samples(seed.n(), tropical::DEFAULT_SAMPLE_COUNT, rng);

    let mut swap_failures = Vec::new();
    let mut commute_failures = Vec::new();
    let minus = tropical::detect_shift(&atlas, t, Direction::Minus)?;
    let plus = tropical::detect_shift(&atlas, t, Direction::Plus)?;
    for x in 0..atlas.len() {
        for i in 0..seed.n() {
            let z = qcluster::expansion::MonomialRef { node: x, exponent: qcluster::ExpVec::unit(seed.n(), i) };
            let (l, r) = tropical::check_swap(&atlas, &minus, &z)?;
            if l != r {
                swap_failures.push(render::mref(&z));
            }
        }
    }
    for tp in 0..atlas.len() {
        let other = tropical::detect_shift(&atlas, tp, Direction::Plus)?;
        for g in tropical::check_trop_commute(&atlas, &plus, &other, &samples)? {
            commute_failures.push(json!({"node": tp + 1, "vector": g.0}));
        }
    }
    let ok = swap_failures.is_empty() && commute_failures.is_empty();
    let mut v = render::shift(&sh);
    v["checks"] = json!({
        "samples": samples.len(),
        "swap_failures": swap_failures,
        "commute_failures": commute_failures,
    });
    Ok((pretty(&v), ok))
}

fn cmd_leclerc(input: &str, cap: i64, scope: &str, json_out: Option<&Path>) -> Out {
    let seed = load_seed(input)?;
    require_finite(&seed, DEFAULT_NODE_CAP)?;
    let atlas = Atlas::build(&seed, DEFAULT_NODE_CAP)?;
    let (scope, conjecture) = match scope {
        "all" => (RScope::Variables((0..atlas.len()).collect()), false),
        "conjecture" => (RScope::BasisElements, true),
        list => {
            let nodes = list
                .split(',')
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(k) if (1..=atlas.len()).contains(&k) => Ok(k - 1),
                    _ => Err(Fail::Usage(format!("bad node `{x}` in scope; expected 1..={}", atlas.len()))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (RScope::Variables(nodes), false)
        }
    };
    let basis = match enumerate_basis(&atlas, cap, 0) {
        Err(e @ Error::DuplicateDegreeConflict { .. }) => {
            return Ok((format!("duplicate degree conflict: {e}\n"), false));
        }
        r => r?,
    };
    let ctx = LeclercContext::new(&atlas, &basis)?;
    let summary = verify_theorem(&ctx, &scope);
    let mut tri = Vec::new();
    for t in 0..atlas.len() {
        tri.push(check_degree_triangular(&ctx, t)?);
        tri.push(check_codegree_triangular(&ctx, t)?);
    }
    let tri_fail: usize = tri.iter().map(|r| r.fail).sum();
    let ok = summary.two_tail_fail == 0 && summary.in_basis_fail == 0 && tri_fail == 0;

    let mut out = String::new();
    if conjecture {
        out += "conjecture mode: R ranges over all basis elements\n";
    }
    let _ = writeln!(out, "nodes: {}", atlas.len());
    let _ = writeln!(out, "cluster variables: {}", atlas.graph.cluster_variables().len());
    let _ = writeln!(out, "basis size: {}", basis.len());
    let _ = writeln!(
        out,
        "pairs: {} (in basis {}, two-tail pass {}, two-tail fail {}, in-basis fail {}, indeterminate {})",
        summary.pairs.len(),
        summary.in_basis,
        summary.two_tail_pass,
        summary.two_tail_fail,
        summary.in_basis_fail,
        summary.indeterminate
    );
    for (label, co) in [("degree", false), ("codegree", true)] {
        let rs = tri.iter().skip(usize::from(co)).step_by(2);
        let (p, f, i) = rs.fold((0, 0, 0), |a, r| (a.0 + r.pass, a.1 + r.fail, a.2 + r.indeterminate));
        let _ = writeln!(out, "{label} triangularity: pass {p}, fail {f}, indeterminate {i}");
    }
    for p in &summary.pairs {
        if !p.verdict.passed() || matches!(p.verdict.case, qcluster::leclerc::Case::Indeterminate { .. }) {
            let _ = writeln!(out, "{}", render::pair_line(p));
        }
    }
    if let Some(path) = json_out {
        let report = render::leclerc_report(&ctx, &summary, &tri, conjecture)?;
        std::fs::write(path, pretty(&report)).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok((out, ok))
}

fn run(cli: Cli) -> Out {
    match &cli.cmd {
        Cmd::Check { seed } => cmd_check(seed),
        Cmd::Mutate { seed, word } => cmd_mutate(seed, word),
        Cmd::Expand { seed, word, var } => cmd_expand(seed, word, *var),
        Cmd::Graph { seed, cap, dot } => cmd_graph(seed, *cap, *dot),
        Cmd::Shift { seed, direction, node, rng } => cmd_shift(seed, *direction, *node, *rng),
        Cmd::Leclerc { seed, cap, scope, json } => cmd_leclerc(seed, *cap, scope, json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok((out, ok))) => {
            print!("{out}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Ok(Err(Fail::Check(m))) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Ok(Err(Fail::Usage(m))) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Ok(Err(Fail::Internal(m))) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
        Err(_) => ExitCode::from(3),
    }
}
