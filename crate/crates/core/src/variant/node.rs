use crate::rewrite::RewriteStep;
use crate::subst::Substitution;
use crate::term::{Position, Term};

/// How a node was obtained from its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub equation: String,
    /// The unifier restricted to the variables of the parent term and of the
    /// renamed equation.
    pub unifier: Substitution,
    pub position: Position,
    /// Simplification of the narrowed term to canonical form.
    pub trace: Vec<RewriteStep>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeFlags {
    pub narrowable: bool,
    /// Smallest ancestor index the node embeds, when the embedding check ran.
    pub embedded_ancestor: Option<usize>,
    /// The branch was stopped here by the embedding whistle.
    pub whistled: bool,
    /// Set once closedness has been computed.
    pub closed: Option<bool>,
}

/// A narrowing successor subsumed by an existing node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedChild {
    pub term: Term,
    pub subst: Substitution,
    pub edge: Edge,
    pub folded_by: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantNode {
    pub id: usize,
    pub term: Term,
    /// Accumulated substitution over the root variables `#1..#n`.
    pub subst: Substitution,
    /// Largest fresh-variable index in use when the node was created.
    pub fresh_index: u32,
    pub parent: Option<usize>,
    /// Another node exists after this one at the same depth.
    pub more: bool,
    pub depth: usize,
    pub edge: Option<Edge>,
    pub children: Vec<usize>,
    pub folded_children: Vec<FoldedChild>,
    pub expanded: bool,
    pub flags: NodeFlags,
}

/// A variant as delivered to callers: substitution over the user's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub id: usize,
    pub term: Term,
    pub subst: Substitution,
    pub fresh_index: u32,
    pub parent: Option<usize>,
    pub more: bool,
}
