//! JSON and meta-level renderings of a tree, and JSON import.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Criterion, Edge, FoldedChild, NodeFlags, VariantNode, VariantTree};
use crate::error::{Error, Result};
use crate::parser::parse_term;
use crate::rewrite::{RewriteStep, DEFAULT_STEP_LIMIT};
use crate::subst::Substitution;
use crate::term::{Term, Var};
use crate::theory::Theory;

pub const SCHEMA_VERSION: u32 = 1;

/// A whole tree minus its frontier, which is recomputed on import.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeExport {
    pub schema_version: u32,
    pub theory_name: String,
    /// The input term over the root variables.
    pub input: String,
    pub input_steps: Vec<StepExport>,
    pub root_variables: Vec<RootVariable>,
    pub root: usize,
    pub criterion_fired: Option<Criterion>,
    pub next_fresh_index: u32,
    pub nodes: Vec<NodeExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootVariable {
    pub user: String,
    pub root: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeExport {
    pub id: usize,
    pub term: String,
    /// Keyed by user variable name.
    pub substitution: BTreeMap<String, String>,
    pub fresh_index: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<usize>,
    pub more_flag: bool,
    pub depth: usize,
    pub expanded: bool,
    pub children: Vec<usize>,
    pub edge: Option<EdgeExport>,
    pub flags: FlagsExport,
    pub folded_children: Vec<FoldedExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeExport {
    pub equation: String,
    pub unifier: BTreeMap<String, String>,
    pub redex_position: Vec<usize>,
    pub normalization_steps: Vec<StepExport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepExport {
    pub equation: String,
    pub position: Vec<usize>,
    pub matcher: BTreeMap<String, String>,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlagsExport {
    pub narrowable: bool,
    pub folded: bool,
    pub folded_by: Option<usize>,
    pub embedded_ancestor: Option<usize>,
    pub whistled: bool,
    pub closed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FoldedExport {
    pub term: String,
    pub substitution: BTreeMap<String, String>,
    pub edge: EdgeExport,
    pub folded_by: Option<usize>,
}

fn subst_map(th: &Theory, s: &Substitution) -> BTreeMap<String, String> {
    s.iter().map(|(v, t)| (th.show_var(v), th.show(t))).collect()
}

fn step_export(th: &Theory, s: &RewriteStep) -> StepExport {
    StepExport {
        equation: s.label.clone(),
        position: s.position.clone(),
        matcher: subst_map(th, &s.matcher),
        before: th.show(&s.before),
        after: th.show(&s.after),
    }
}

fn edge_export(th: &Theory, e: &Edge) -> EdgeExport {
    EdgeExport {
        equation: e.equation.clone(),
        unifier: subst_map(th, &e.unifier),
        redex_position: e.position.clone(),
        normalization_steps: e.trace.iter().map(|s| step_export(th, s)).collect(),
    }
}

impl VariantTree {
    fn user_map(&self, s: &Substitution) -> BTreeMap<String, String> {
        self.root_vars.iter().map(|(u, r)| (u.label(), self.theory.show(&s.image(r)))).collect()
    }

    /// The export record of node `id`.
    pub fn export_node(&self, id: usize) -> NodeExport {
        let th = &*self.theory;
        let n = &self.nodes[id];
        NodeExport {
            id: n.id,
            term: th.show(&n.term),
            substitution: self.user_map(&n.subst),
            fresh_index: n.fresh_index,
            parent_id: n.parent,
            more_flag: n.more,
            depth: n.depth,
            expanded: n.expanded,
            children: n.children.clone(),
            edge: n.edge.as_ref().map(|e| edge_export(th, e)),
            flags: FlagsExport {
                narrowable: n.flags.narrowable,
                folded: false,
                folded_by: None,
                embedded_ancestor: n.flags.embedded_ancestor,
                whistled: n.flags.whistled,
                closed: n.flags.closed,
            },
            folded_children: n
                .folded_children
                .iter()
                .map(|f| FoldedExport {
                    term: th.show(&f.term),
                    substitution: self.user_map(&f.subst),
                    edge: edge_export(th, &f.edge),
                    folded_by: f.folded_by,
                })
                .collect(),
        }
    }

    /// Rewrite steps from the input term to the root.
    pub fn export_input_steps(&self) -> Vec<StepExport> {
        self.input_trace.iter().map(|s| step_export(&self.theory, s)).collect()
    }

    pub fn to_export(&self) -> TreeExport {
        let th = &*self.theory;
        let nodes = (0..self.nodes.len()).map(|id| self.export_node(id)).collect();
        TreeExport {
            schema_version: SCHEMA_VERSION,
            theory_name: th.name.clone(),
            input: th.show(&self.input),
            input_steps: self.export_input_steps(),
            root_variables: self
                .root_vars
                .iter()
                .map(|(u, r)| RootVariable { user: th.show_var(u), root: th.show_var(r) })
                .collect(),
            root: 0,
            criterion_fired: self.criterion,
            next_fresh_index: self.fresh,
            nodes,
        }
    }

    /// Pretty-printed JSON with a fixed key order.
    pub fn export_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_export()).expect("export serializes")
    }

    /// One meta-level 5-tuple `{term, substitution, fresh index, parent,
    /// more flag}` per line, for the whole tree or for the branch ending at
    /// `leaf`.
    pub fn export_meta(&self, leaf: Option<usize>) -> Result<String> {
        let th = &*self.theory;
        let ids = match leaf {
            Some(id) if id >= self.nodes.len() => return Err(Error::InvalidExpansion(format!("no node {id}"))),
            Some(id) => self.branch(id),
            None => (0..self.nodes.len()).collect(),
        };
        let mut out = String::new();
        for id in ids {
            let n = &self.nodes[id];
            let parent = n.parent.map_or("none".to_string(), |p| p.to_string());
            out.push_str(&format!(
                "{{{}, {}, {}, {}, {}}}\n",
                th.show_meta(&n.term),
                th.show_subst_meta(&self.user_subst(id)),
                n.fresh_index,
                parent,
                n.more
            ));
        }
        Ok(out)
    }
}

struct Reader<'a> {
    th: &'a Theory,
}

impl Reader<'_> {
    fn term(&self, s: &str) -> Result<Term> {
        parse_term(s, self.th).map(|t| self.th.canonical(&t)).map_err(|e| Error::Import(format!("term `{s}`: {e}")))
    }

    fn var(&self, s: &str) -> Result<Var> {
        self.term(s)?.as_var().cloned().ok_or_else(|| Error::Import(format!("`{s}` is not a variable")))
    }

    fn subst(&self, m: &BTreeMap<String, String>) -> Result<Substitution> {
        let mut out = Substitution::new();
        for (k, v) in m {
            out.insert(self.var(k)?, self.term(v)?);
        }
        Ok(out)
    }

    fn root_subst(&self, roots: &[(Var, Var)], m: &BTreeMap<String, String>) -> Result<Substitution> {
        let mut out = Substitution::new();
        for (u, r) in roots {
            let v = m.get(&*u.name).ok_or_else(|| Error::Import(format!("missing binding for {}", u.name)))?;
            out.insert(r.clone(), self.term(v)?);
        }
        Ok(out)
    }

    fn step(&self, s: &StepExport) -> Result<RewriteStep> {
        Ok(RewriteStep {
            label: s.equation.clone(),
            position: s.position.clone(),
            matcher: self.subst(&s.matcher)?,
            before: self.term(&s.before)?,
            after: self.term(&s.after)?,
        })
    }

    fn edge(&self, e: &EdgeExport) -> Result<Edge> {
        Ok(Edge {
            equation: e.equation.clone(),
            unifier: self.subst(&e.unifier)?,
            position: e.redex_position.clone(),
            trace: e.normalization_steps.iter().map(|s| self.step(s)).collect::<Result<_>>()?,
        })
    }
}

impl VariantTree {
    /// Rebuilds a tree from its JSON export over `theory`.
    pub fn import_json(theory: Arc<Theory>, json: &str) -> Result<Self> {
        let ex: TreeExport = serde_json::from_str(json).map_err(|e| Error::Import(e.to_string()))?;
        Self::from_export(theory, &ex)
    }

    pub fn from_export(theory: Arc<Theory>, ex: &TreeExport) -> Result<Self> {
        if ex.schema_version != SCHEMA_VERSION {
            return Err(Error::Import(format!("unsupported schema version {}", ex.schema_version)));
        }
        if ex.theory_name != theory.name {
            return Err(Error::Import(format!("export is for {}, not {}", ex.theory_name, theory.name)));
        }
        let rd = Reader { th: &theory };
        let root_vars = ex
            .root_variables
            .iter()
            .map(|rv| Ok((rd.var(&rv.user)?, rd.var(&rv.root)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut nodes = Vec::new();
        for (i, n) in ex.nodes.iter().enumerate() {
            if n.id != i || n.parent_id.is_some_and(|p| p >= i) {
                return Err(Error::Import(format!("node {} is out of order", n.id)));
            }
            let folded_children = n
                .folded_children
                .iter()
                .map(|f| {
                    Ok(FoldedChild {
                        term: rd.term(&f.term)?,
                        subst: rd.root_subst(&root_vars, &f.substitution)?,
                        edge: rd.edge(&f.edge)?,
                        folded_by: f.folded_by,
                    })
                })
                .collect::<Result<_>>()?;
            nodes.push(VariantNode {
                id: n.id,
                term: rd.term(&n.term)?,
                subst: rd.root_subst(&root_vars, &n.substitution)?,
                fresh_index: n.fresh_index,
                parent: n.parent_id,
                more: n.more_flag,
                depth: n.depth,
                edge: n.edge.as_ref().map(|e| rd.edge(e)).transpose()?,
                children: n.children.clone(),
                folded_children,
                expanded: n.expanded,
                flags: NodeFlags {
                    narrowable: n.flags.narrowable,
                    embedded_ancestor: n.flags.embedded_ancestor,
                    whistled: n.flags.whistled,
                    closed: n.flags.closed,
                },
            });
        }
        if nodes.is_empty() {
            return Err(Error::Import("no nodes".into()));
        }
        let frontier: VecDeque<usize> = nodes
            .iter()
            .filter(|n| n.flags.narrowable && !n.expanded && !n.flags.whistled)
            .map(|n| n.id)
            .collect();
        let mut last_at_depth = Vec::new();
        for n in &nodes {
            if n.depth == last_at_depth.len() {
                last_at_depth.push(n.id);
            } else if n.depth < last_at_depth.len() {
                last_at_depth[n.depth] = n.id;
            } else {
                return Err(Error::Import(format!("node {} skips a level", n.id)));
            }
        }
        Ok(VariantTree {
            input: rd.term(&ex.input)?,
            input_trace: ex.input_steps.iter().map(|s| rd.step(s)).collect::<Result<_>>()?,
            root_vars,
            nodes,
            frontier,
            fresh: ex.next_fresh_index,
            last_at_depth,
            step_limit: DEFAULT_STEP_LIMIT,
            criterion: ex.criterion_fired,
            theory,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::annotate_closedness;
    use crate::fixtures;
    use crate::variant::ExpandOptions;

    fn grown(th: Theory, t: &str, whistle: bool) -> VariantTree {
        let th = Arc::new(th);
        let mut tree = VariantTree::new(Arc::clone(&th), &parse_term(t, &th).unwrap()).unwrap();
        let opts = ExpandOptions { max_nodes: Some(60), ..Default::default() };
        if whistle {
            tree.expand_until_whistle(&opts).unwrap();
        } else {
            tree.expand_variants(20, &opts).unwrap();
        }
        annotate_closedness(&mut tree).unwrap();
        tree
    }

    fn round_trip(tree: &VariantTree) {
        let json = tree.export_json();
        let back = VariantTree::import_json(Arc::clone(tree.theory()), &json).unwrap();
        assert_eq!(back.export_json(), json);
        assert_eq!(back.frontier().collect::<Vec<_>>(), tree.frontier().collect::<Vec<_>>());
        assert_eq!(back.nodes(), tree.nodes());
    }

    #[test]
    fn export_import_is_loss_free() {
        round_trip(&grown(fixtures::exclusive_or(), "X:[NatSet] * Y:[NatSet]", false));
        round_trip(&grown(fixtures::exclusive_or_nofvp(), "X:[NatSet] * Y:[NatSet]", true));
        round_trip(&grown(fixtures::nat_variant(), "X:Nat + s(0)", false));
        round_trip(&grown(fixtures::boolean(), "X and Y", false));
    }

    #[test]
    fn export_keys_are_stable() {
        let tree = grown(fixtures::exclusive_or(), "X:[NatSet] * Y:[NatSet]", false);
        let v: serde_json::Value = serde_json::from_str(&tree.export_json()).unwrap();
        assert_eq!(v["schemaVersion"], 1);
        assert_eq!(v["theoryName"], "EXCLUSIVE-OR");
        assert_eq!(v["criterionFired"], "exhausted");
        let root = &v["nodes"][0];
        assert!(root.get("parentId").is_none());
        assert_eq!(root["substitution"]["X"], "#1:[NatSet]");
        let child = &v["nodes"][1];
        assert_eq!(child["parentId"], 0);
        for key in ["equation", "unifier", "redexPosition", "normalizationSteps"] {
            assert!(child["edge"].get(key).is_some(), "{key}");
        }
        for key in ["narrowable", "folded", "foldedBy", "embeddedAncestor", "closed"] {
            assert!(child["flags"].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn import_rejects_other_theory() {
        let tree = grown(fixtures::exclusive_or(), "X:[NatSet] * Y:[NatSet]", false);
        let err = VariantTree::import_json(Arc::new(fixtures::nat_variant()), &tree.export_json());
        assert!(matches!(err, Err(Error::Import(_))));
    }

    #[test]
    fn meta_level_terms() {
        let th = fixtures::exclusive_or();
        assert_eq!(th.show_meta(&parse_term("X:NatSet * Y:NatSet", &th).unwrap()), "'_*_['X:NatSet,'Y:NatSet]");
        assert_eq!(th.show_meta(&parse_term("0", &th).unwrap()), "'0.Nat");
        assert_eq!(th.show_meta(&parse_term("X:Nat", &th).unwrap()), "'X:Nat");
    }

    #[test]
    fn meta_branch_export() {
        let tree = grown(fixtures::exclusive_or(), "X:[NatSet] * Y:[NatSet]", false);
        let meta = tree.export_meta(Some(1)).unwrap();
        let lines: Vec<&str> = meta.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "{'_*_['#1:[NatSet],'#2:[NatSet]], 'X:[NatSet] <- '#1:[NatSet] ; 'Y:[NatSet] <- '#2:[NatSet], 2, none, false}"
        );
        assert!(lines[1].ends_with(", 0, true}"));
        assert_eq!(tree.export_meta(None).unwrap().lines().count(), 7);
    }
}
