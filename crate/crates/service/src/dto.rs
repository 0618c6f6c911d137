//! Request and response bodies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use vnarrow::analysis::QueryHit;
use vnarrow::variant::{BranchOutcome, Criterion, FlagsExport, NodeExport, StepExport, VariantTree};

use crate::session::{Settings, View};

#[derive(Debug, Deserialize)]
pub struct CreateSession {
    pub module: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionInfo {
    pub session_id: u64,
    pub theory: String,
    pub trees: Vec<u64>,
    pub settings: Settings,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SettingsPatch {
    pub view: Option<View>,
    pub max_variants: Option<usize>,
    pub max_nodes: Option<usize>,
    pub request_timeout_secs: Option<u64>,
    pub fvp_timeout_secs: Option<u64>,
}

impl SettingsPatch {
    pub fn apply(&self, s: &mut Settings) {
        if let Some(v) = self.view {
            s.view = v;
        }
        let l = &mut s.limits;
        l.max_variants = self.max_variants.unwrap_or(l.max_variants);
        l.max_nodes = self.max_nodes.unwrap_or(l.max_nodes);
        l.request_timeout_secs = self.request_timeout_secs.unwrap_or(l.request_timeout_secs);
        l.fvp_timeout_secs = self.fvp_timeout_secs.unwrap_or(l.fvp_timeout_secs);
    }
}

#[derive(Debug, Deserialize)]
pub struct OpenTree {
    pub term: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeCreated {
    pub tree_id: u64,
    pub root: NodeInfo,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeInfo {
    pub equation: String,
    pub unifier: BTreeMap<String, String>,
    pub redex_position: Vec<usize>,
}

/// The five variant metadata fields plus tree and analysis data; `trace` is
/// present only in the instrumented view.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeInfo {
    pub id: usize,
    pub term: String,
    pub substitution: BTreeMap<String, String>,
    pub fresh_index: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<usize>,
    pub more_flag: bool,
    pub depth: usize,
    pub expanded: bool,
    pub children: Vec<usize>,
    pub folded_children: usize,
    pub edge: Option<EdgeInfo>,
    pub flags: FlagsExport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepExport>>,
}

impl NodeInfo {
    pub fn of(tree: &VariantTree, id: usize, view: View) -> Self {
        let n: NodeExport = tree.export_node(id);
        let mut trace = None;
        let edge = n.edge.map(|e| {
            trace = Some(e.normalization_steps);
            EdgeInfo { equation: e.equation, unifier: e.unifier, redex_position: e.redex_position }
        });
        let trace = match view {
            View::Standard => None,
            View::Instrumented => Some(trace.unwrap_or_else(|| tree.export_input_steps())),
        };
        NodeInfo {
            id: n.id,
            term: n.term,
            substitution: n.substitution,
            fresh_index: n.fresh_index,
            parent_id: n.parent_id,
            more_flag: n.more_flag,
            depth: n.depth,
            expanded: n.expanded,
            children: n.children,
            folded_children: n.folded_children.len(),
            edge,
            flags: n.flags,
            trace,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EdgeRef {
    pub from: usize,
    pub to: usize,
    pub equation: String,
}

/// What an expansion changed: new nodes and edges, plus existing nodes whose
/// data changed (the expanded parent, and more flags).
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Delta {
    pub new_nodes: Vec<NodeInfo>,
    pub edges: Vec<EdgeRef>,
    pub updated: Vec<NodeInfo>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoMode {
    Depth,
    Variants,
    Embedding,
}

#[derive(Debug, Deserialize)]
pub struct AutoExpand {
    pub mode: AutoMode,
    /// Depth for `depth`, number of variants for `variants`.
    pub bound: Option<usize>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AutoResult {
    pub criterion: Criterion,
    pub partial: bool,
    pub size: usize,
    #[serde(flatten)]
    pub delta: Delta,
    pub branches: Vec<BranchOutcome>,
}

#[derive(Debug, Deserialize)]
pub struct CompareRequest {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Deserialize)]
pub struct QueryRequest {
    pub pattern: String,
}

#[derive(Debug, Serialize)]
pub struct QueryResult {
    pub hits: Vec<QueryHit>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FvpRequest {
    pub max_variants: Option<usize>,
    pub timeout_secs: Option<u64>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OperatorVerdict {
    pub operator: String,
    pub flat_term: String,
    pub finite: bool,
    pub variants: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<vnarrow::analysis::UncertainReason>,
    /// `OP: finite(k)` or `OP: uncertain(≥k, reason)`.
    pub line: String,
}

#[derive(Debug, Serialize)]
pub struct FvpResult {
    pub overall: bool,
    pub operators: Vec<OperatorVerdict>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VariantInfo {
    pub id: usize,
    pub term: String,
    pub substitution: BTreeMap<String, String>,
    pub fresh_index: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<usize>,
    pub more_flag: bool,
}

#[derive(Debug, Deserialize)]
pub struct MetaQuery {
    pub node: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ClosednessResult {
    pub closed: Vec<(usize, bool)>,
}

#[derive(Debug, Serialize)]
pub struct SnapshotSaved {
    pub path: String,
}
