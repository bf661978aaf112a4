use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};
use treemetrics_core::classic::{alignment_distance, edit_distance, hausdorff_distance, EditCosts};
use treemetrics_core::frechet_like::{decide_fl, fl_distance};
use treemetrics_core::generate::{merge_tree_with_leaves, random_merge_tree, rng};
use treemetrics_core::hardness::{build_gadget, default_scale, verify_gap, PartitionInstance};
use treemetrics_core::interleaving::{good_map_exists, interleaving_distance, Delta};
use treemetrics_core::io::{embedded_to_json, merge_to_json, merge_to_newick};
use treemetrics_core::{parse_labeled, parse_tree, Error, FLQuery, ParsedTree, PointRef, TreeFormat, TreePair};

use crate::{dot, output, CheckArgs, DistArgs, DotArgs, GadgetArgs, GenArgs, MetricArg, SummaryFormat, TreeFormatArg};

#[derive(Debug)]
pub enum CliError {
    /// A library error, tagged with the file or flag it concerns.
    Core { context: String, error: Error },
    Io { path: PathBuf, error: std::io::Error },
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { error, .. } if error.is_capacity() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core { context, error } => write!(f, "{context}: {error}"),
            CliError::Io { path, error } => write!(f, "{}: {error}", path.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn core<T>(context: impl fmt::Display, r: treemetrics_core::Result<T>) -> Result<T> {
    r.map_err(|error| CliError::Core {
        context: context.to_string(),
        error,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        error,
    })
}

fn format_of(text: &str) -> TreeFormat {
    if text.trim_start().starts_with('{') {
        TreeFormat::Json
    } else {
        TreeFormat::NewickExt
    }
}

fn load(path: &Path) -> Result<ParsedTree> {
    let text = read(path)?;
    core(path.display(), parse_tree(&text, format_of(&text)))
}

fn write(out: Option<&Path>, text: &str) -> Result<()> {
    output::emit(out, text).map_err(|error| CliError::Io {
        path: out.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        error,
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn tree_value(t: &ParsedTree) -> Value {
    let text = match t {
        ParsedTree::Merge(m) => merge_to_json(m),
        ParsedTree::Embedded(e) => embedded_to_json(e),
    };
    serde_json::from_str(&text).expect("serialized tree is valid json")
}

fn parse_costs(s: &str) -> Result<EditCosts> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Option<Vec<f64>> = parts.iter().map(|p| p.parse().ok()).collect();
    match nums.as_deref() {
        Some(&[r, i, d]) => core("--costs", EditCosts::new(r, i, d)),
        _ => Err(CliError::Usage(format!("--costs expects three numbers r,i,d, got '{s}'"))),
    }
}

pub fn dist(a: &DistArgs) -> Result<ExitCode> {
    let label = |p: &Path| p.display().to_string();
    let names = format!("{} and {}", label(&a.first), label(&a.second));
    if a.eps.is_some() && !matches!(a.metric, MetricArg::FlMerge | MetricArg::FlEuclid) {
        return Err(CliError::Usage("--eps applies to fl-merge and fl-euclid".into()));
    }
    if a.delta.is_some() && a.metric != MetricArg::Interleaving {
        return Err(CliError::Usage("--delta applies to interleaving".into()));
    }
    let value = match a.metric {
        MetricArg::Edit | MetricArg::Alignment => {
            let costs = parse_costs(&a.costs)?;
            let labeled = |p: &Path| -> Result<_> {
                let text = read(p)?;
                core(p.display(), parse_labeled(&text, format_of(&text)))
            };
            let (t1, t2) = (labeled(&a.first)?, labeled(&a.second)?);
            let report = if a.metric == MetricArg::Edit {
                edit_distance(&t1, &t2, costs)
            } else {
                core(&names, alignment_distance(&t1, &t2, costs, a.degree_bound))?
            };
            serde_json::to_value(report)
        }
        MetricArg::FlMerge | MetricArg::Interleaving => {
            let t1 = core(label(&a.first), load(&a.first)?.into_merge())?;
            let t2 = core(label(&a.second), load(&a.second)?.into_merge())?;
            match (a.metric, a.eps, a.delta) {
                (MetricArg::FlMerge, Some(eps), _) => {
                    let d = core(&names, decide_fl(TreePair::Merge(&t1, &t2), &FLQuery::merge(eps)))?;
                    Ok(json!({ "metric": "fl-merge", "eps": eps, "accepted": d.accepted, "witness": d.witness }))
                }
                (MetricArg::FlMerge, None, _) => serde_json::to_value(core(&names, fl_distance(TreePair::Merge(&t1, &t2), &FLQuery::merge(0.0)))?),
                (_, _, Some(delta)) => {
                    let g = core(&names, good_map_exists(&t1, &t2, core("--delta", Delta::new(delta))?))?;
                    Ok(json!({ "metric": "interleaving", "delta": delta, "exists": g.exists, "witness": g.witness }))
                }
                _ => serde_json::to_value(core(&names, interleaving_distance(&t1, &t2))?),
            }
        }
        MetricArg::FlEuclid | MetricArg::Hausdorff => {
            let t1 = core(label(&a.first), load(&a.first)?.into_embedded())?;
            let t2 = core(label(&a.second), load(&a.second)?.into_embedded())?;
            if a.metric == MetricArg::Hausdorff {
                serde_json::to_value(core(&names, hausdorff_distance(&t1, &t2, a.resolution))?)
            } else {
                let q = FLQuery::euclidean(a.eps.unwrap_or(0.0), a.resolution).with_align_roots(a.align_roots);
                let pair = TreePair::Euclidean(&t1, &t2);
                match a.eps {
                    Some(eps) => {
                        let d = core(&names, decide_fl(pair, &q))?;
                        Ok(json!({ "metric": "fl-euclid", "eps": eps, "accepted": d.accepted, "witness": d.witness }))
                    }
                    None => serde_json::to_value(core(&names, fl_distance(pair, &q))?),
                }
            }
        }
    }
    .expect("reports serialize");
    write(a.out.as_deref(), &pretty(&value))?;
    Ok(ExitCode::SUCCESS)
}

fn parse_values(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("--X expects comma-separated positive integers, got '{s}'"))))
        .collect()
}

pub fn gadget(a: &GadgetArgs) -> Result<ExitCode> {
    let p = core("--X/--k", PartitionInstance::new(parse_values(&a.x)?, a.k, !a.relaxed))?;
    let scale = default_scale(&p);
    let (big_a, big_b) = (a.a.unwrap_or(scale), a.b.unwrap_or(scale));
    let g = core("--A/--B", build_gadget(&p, big_a, big_b))?;
    let report = core("gadget", verify_gap(&p, big_a, big_b))?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["t1"] = tree_value(&ParsedTree::Merge(g.t1));
    v["t2"] = tree_value(&ParsedTree::Merge(g.t2));
    write(a.out.as_deref(), &pretty(&v))?;
    Ok(if report.gap_respected { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn check_lemma(a: &CheckArgs) -> Result<ExitCode> {
    let mut r = rng(a.seed);
    let q = FLQuery::merge(0.0);
    let mut rows = Vec::with_capacity(a.count);
    let mut offending = Vec::new();
    for i in 0..a.count {
        let t1 = random_merge_tree(&mut r, a.leaves);
        let t2 = random_merge_tree(&mut r, a.leaves);
        let ctx = format!("pair {i}");
        let di = core(&ctx, interleaving_distance(&t1, &t2))?.value;
        let fl = core(&ctx, fl_distance(TreePair::Merge(&t1, &t2), &q))?.value;
        let violated = di > fl + 1e-9;
        if violated {
            offending.push(json!({
                "index": i,
                "interleaving": di,
                "fl_merge": fl,
                "t1": tree_value(&ParsedTree::Merge(t1)),
                "t2": tree_value(&ParsedTree::Merge(t2)),
            }));
        }
        rows.push((i, di, fl, violated));
    }
    let text = match a.format {
        SummaryFormat::Json => pretty(&json!({
            "pairs": a.count,
            "leaves": a.leaves,
            "seed": a.seed,
            "violations": offending.len(),
            "offending": offending,
        })),
        SummaryFormat::Csv => {
            let mut s = String::from("index,interleaving,fl_merge,violation\n");
            for (i, di, fl, bad) in rows {
                s.push_str(&format!("{i},{di},{fl},{bad}\n"));
            }
            s
        }
    };
    write(a.out.as_deref(), &text)?;
    Ok(if offending.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn gen_random(a: &GenArgs) -> Result<ExitCode> {
    let mut r = rng(a.seed);
    let trees: Vec<_> = (0..a.count).map(|_| merge_tree_with_leaves(&mut r, a.leaves as usize)).collect();
    let text = match a.format {
        TreeFormatArg::Newick => trees.iter().map(merge_to_newick).collect::<Vec<_>>().join("\n"),
        TreeFormatArg::Json => {
            let mut values: Vec<Value> = trees.into_iter().map(|t| tree_value(&ParsedTree::Merge(t))).collect();
            if values.len() == 1 {
                pretty(&values.remove(0))
            } else {
                pretty(&Value::Array(values))
            }
        }
    };
    write(a.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Trees named on the command line; a single JSON file with `t1` and `t2`
/// keys (as written by `gadget`) supplies both.
fn dot_inputs(files: &[PathBuf]) -> Result<Vec<ParsedTree>> {
    if let [only] = files {
        let text = read(only)?;
        if let Ok(v) = serde_json::from_str::<Value>(&text) {
            if let (Some(t1), Some(t2)) = (v.get("t1"), v.get("t2")) {
                let parse = |t: &Value| core(only.display(), parse_tree(&t.to_string(), TreeFormat::Json));
                return Ok(vec![parse(t1)?, parse(t2)?]);
            }
        }
        return Ok(vec![core(only.display(), parse_tree(&text, format_of(&text)))?]);
    }
    files.iter().map(|p| load(p)).collect()
}

/// Pairs from a distance report, a bare correspondence (`[[p, q], ...]`) or
/// a map (`[{"from": p, "to": q}, ...]`).
fn witness_pairs(path: &Path) -> Result<Vec<(PointRef, PointRef)>> {
    let text = read(path)?;
    let syntax = |msg: String| CliError::Core {
        context: path.display().to_string(),
        error: Error::Syntax { pos: 0, msg },
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| syntax(e.to_string()))?;
    let list = v.get("witness").unwrap_or(&v);
    let items = list.as_array().ok_or_else(|| syntax("witness must be a list of pairs".into()))?;
    items
        .iter()
        .map(|item| {
            let (p, q) = match item {
                Value::Array(pq) if pq.len() == 2 => (&pq[0], &pq[1]),
                Value::Object(m) if m.contains_key("from") && m.contains_key("to") => (&m["from"], &m["to"]),
                _ => return Err(syntax(format!("unrecognized witness entry {item}"))),
            };
            let point = |x: &Value| serde_json::from_value::<PointRef>(x.clone()).map_err(|e| syntax(e.to_string()));
            Ok((point(p)?, point(q)?))
        })
        .collect()
}

pub fn export_dot(a: &DotArgs) -> Result<ExitCode> {
    let trees = dot_inputs(&a.files)?;
    let pairs = match &a.witness {
        Some(w) if trees.len() == 2 => witness_pairs(w)?,
        Some(_) => return Err(CliError::Usage("--witness needs two trees".into())),
        None => Vec::new(),
    };
    write(a.out.as_deref(), &dot::render(&trees, &pairs))?;
    Ok(ExitCode::SUCCESS)
}
