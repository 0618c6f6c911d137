use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use vnarrow::analysis::{annotate_closedness, check_fvp, FvpLimits, FvpVerdict, OpVerdict};
use vnarrow::variant::{Criterion, ExpandOptions, ExpansionReport, Variant, VariantNode, VariantTree};
use vnarrow::{parse_modules, parse_term, Term, Theory};

use crate::error::CliError;

/// Text or JSON produced by a command, and whether it was cut short.
pub struct Output {
    pub text: String,
    pub partial: bool,
}

/// Reads `path` and picks the module called `name`, or the last one.
pub fn load_module(path: &Path, name: Option<&str>) -> Result<Arc<Theory>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let mut modules = parse_modules(&text).map_err(|source| CliError::Module { path: path.into(), source })?;
    let th = match name {
        Some(n) => {
            let i = modules.iter().position(|m| m.name == n).ok_or_else(|| CliError::UnknownModule(n.into()))?;
            modules.swap_remove(i)
        }
        None => modules.pop().ok_or_else(|| CliError::NoModule { path: path.into() })?,
    };
    Ok(Arc::new(th))
}

pub fn read_term(th: &Theory, text: &str) -> Result<Term, CliError> {
    parse_term(text, th).map_err(CliError::Term)
}

fn deadline(timeout: Option<u64>) -> Option<Instant> {
    timeout.map(|s| Instant::now() + Duration::from_secs(s))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write { path: path.into(), source })
}

pub struct VariantListing {
    pub variants: Vec<Variant>,
    pub criterion: Criterion,
}

/// Breadth-first variants of `t`, at most `bound` of them.
pub fn variants(th: &Arc<Theory>, t: &Term, bound: Option<usize>, timeout: Option<u64>) -> Result<VariantListing, CliError> {
    let limit = bound.unwrap_or(usize::MAX);
    let until = deadline(timeout);
    let mut tree = VariantTree::new(Arc::clone(th), t)?;
    let criterion = loop {
        if limit == 0 || tree.len() > limit {
            break Criterion::Bound;
        }
        let Some(id) = tree.frontier().next() else { break Criterion::Exhausted };
        if until.is_some_and(|d| Instant::now() >= d) {
            break if tree.len() == limit { Criterion::Bound } else { Criterion::Timeout };
        }
        tree.expand_node(id)?;
    };
    let n = tree.len().min(limit);
    Ok(VariantListing { variants: (0..n).map(|i| tree.variant(i)).collect(), criterion })
}

pub fn render_variants(th: &Theory, header: &str, listing: &VariantListing) -> String {
    let mut out = format!("{header}\n");
    for v in &listing.variants {
        let _ = write!(out, "\nVariant {}\n{}: {}\n{}", v.id + 1, th.show_sort(th.least_sort(&v.term)), th.show(&v.term), th.show_subst(&v.subst));
    }
    if listing.criterion == Criterion::Exhausted {
        out.push_str("\nNo more variants.\n");
    }
    out
}

pub fn variants_json(th: &Theory, listing: &VariantListing) -> Value {
    let variants: Vec<Value> = listing
        .variants
        .iter()
        .map(|v| {
            let subst: serde_json::Map<String, Value> =
                v.subst.iter().map(|(x, t)| (x.label(), Value::String(th.show(t)))).collect();
            json!({
                "index": v.id + 1,
                "sort": th.show_sort(th.least_sort(&v.term)),
                "term": th.show(&v.term),
                "substitution": subst,
                "freshIndex": v.fresh_index,
                "parent": v.parent,
                "more": v.more,
            })
        })
        .collect();
    json!({ "module": th.name, "criterion": listing.criterion, "variants": variants })
}

pub fn get_variants(
    module: &Path,
    name: Option<&str>,
    term: &str,
    bound: Option<usize>,
    timeout: Option<u64>,
    as_json: bool,
) -> Result<Output, CliError> {
    let th = load_module(module, name)?;
    let t = read_term(&th, term)?;
    let listing = variants(&th, &t, bound, timeout)?;
    let text = if as_json {
        format!("{:#}\n", variants_json(&th, &listing))
    } else {
        let bound = bound.map(|n| format!(" [{n}]")).unwrap_or_default();
        render_variants(&th, &format!("get variants{bound} in {} : {term} .", th.name), &listing)
    };
    Ok(Output { text, partial: listing.criterion == Criterion::Timeout })
}

pub fn render_fvp(v: &FvpVerdict) -> String {
    let mut out = String::new();
    for (op, r) in &v.per_operator {
        let _ = writeln!(out, "{op}: {}", r.verdict.summary());
    }
    let _ = writeln!(out, "overall: {}", v.overall);
    out
}

pub fn fvp_json(th: &Theory, v: &FvpVerdict) -> Value {
    let ops: Vec<Value> = v
        .per_operator
        .iter()
        .map(|(op, r)| {
            let reason = match &r.verdict {
                OpVerdict::Finite { .. } => None,
                OpVerdict::Uncertain { reason, .. } => Some(*reason),
            };
            json!({
                "operator": op,
                "flatTerm": th.show(&r.flat_term),
                "finite": r.verdict.is_finite(),
                "variants": r.verdict.count(),
                "reason": reason,
                "line": format!("{op}: {}", r.verdict.summary()),
            })
        })
        .collect();
    json!({ "module": th.name, "overall": v.overall, "operators": ops })
}

pub fn check(
    module: &Path,
    name: Option<&str>,
    max_variants: usize,
    timeout: u64,
    as_json: bool,
) -> Result<Output, CliError> {
    let th = load_module(module, name)?;
    let limits = FvpLimits { max_variants, timeout: Duration::from_secs(timeout) };
    let verdict = check_fvp(&th, limits, None)?;
    let text = if as_json { format!("{:#}\n", fvp_json(&th, &verdict)) } else { render_fvp(&verdict) };
    Ok(Output { text, partial: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Depth(usize),
    Variants(usize),
    Embedding,
}

pub struct TreeRequest<'a> {
    pub module: &'a Path,
    pub name: Option<&'a str>,
    pub term: &'a str,
    pub mode: Mode,
    pub max_nodes: usize,
    pub timeout: Option<u64>,
    pub closedness: bool,
    pub export: Option<PathBuf>,
    pub export_meta: Option<PathBuf>,
    pub json: bool,
}

pub fn build_tree(th: &Arc<Theory>, t: &Term, mode: Mode, max_nodes: usize, timeout: Option<u64>) -> Result<(VariantTree, ExpansionReport), CliError> {
    let mut tree = VariantTree::new(Arc::clone(th), t)?;
    let opts = ExpandOptions { deadline: deadline(timeout), cancel: None, max_nodes: Some(max_nodes) };
    let report = match mode {
        Mode::Depth(k) => tree.expand_depth(k, &opts)?,
        Mode::Variants(n) => tree.expand_variants(n, &opts)?,
        Mode::Embedding => tree.expand_until_whistle(&opts)?,
    };
    Ok((tree, report))
}

/// Indented depth-first listing, one node per line.
pub fn render_tree(tree: &VariantTree, report: &ExpansionReport) -> String {
    let mut out = String::new();
    let mut stack = vec![0];
    while let Some(id) = stack.pop() {
        let n = &tree.nodes()[id];
        out.push_str(&node_line(tree, n));
        stack.extend(n.children.iter().rev());
    }
    let _ = writeln!(out, "{} nodes, stopped by {}", tree.len(), criterion_name(report.criterion));
    out
}

fn node_line(tree: &VariantTree, n: &VariantNode) -> String {
    let mut out = format!("{}{}", "  ".repeat(n.depth), n.id);
    if let Some(e) = &n.edge {
        let _ = write!(out, " [{}]", e.equation);
    }
    let _ = write!(out, " {}", tree.theory().show(&n.term));
    let mut marks = Vec::new();
    if let Some(a) = n.flags.embedded_ancestor {
        marks.push(format!("embeds {a}"));
    }
    if n.flags.whistled {
        marks.push("whistle".to_string());
    }
    if let Some(c) = n.flags.closed {
        marks.push(if c { "closed" } else { "open" }.to_string());
    }
    if !n.folded_children.is_empty() {
        marks.push(format!("folded {}", n.folded_children.len()));
    }
    if !marks.is_empty() {
        let _ = write!(out, "  ({})", marks.join(", "));
    }
    out.push('\n');
    out
}

fn criterion_name(c: Criterion) -> &'static str {
    match c {
        Criterion::Exhausted => "exhaustion",
        Criterion::Bound => "the bound",
        Criterion::Whistle => "the whistle",
        Criterion::Timeout => "the timeout",
    }
}

pub fn tree(req: TreeRequest<'_>) -> Result<Output, CliError> {
    let th = load_module(req.module, req.name)?;
    let t = read_term(&th, req.term)?;
    let (mut tree, report) = build_tree(&th, &t, req.mode, req.max_nodes, req.timeout)?;
    if req.closedness {
        annotate_closedness(&mut tree)?;
    }
    if let Some(p) = &req.export {
        write_file(p, &tree.export_json())?;
    }
    if let Some(p) = &req.export_meta {
        write_file(p, &tree.export_meta(None)?)?;
    }
    let text = if req.json { format!("{}\n", tree.export_json()) } else { render_tree(&tree, &report) };
    Ok(Output { text, partial: report.criterion == Criterion::Timeout })
}
