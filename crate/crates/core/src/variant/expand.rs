//! Automatic expansion strategies.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::VariantTree;
use crate::analysis::embed::{embeds, whistle_check};
use crate::error::Result;
use crate::term::Term;

/// Why an expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// No more variants exist.
    Exhausted,
    /// The requested depth or number of variants was reached.
    Bound,
    /// The embedding whistle blew.
    Whistle,
    /// The deadline passed or the expansion was cancelled.
    Timeout,
}

#[derive(Clone, Debug, Default)]
pub struct ExpandOptions {
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
    /// Hard cap on the tree size for strategies without their own bound.
    pub max_nodes: Option<usize>,
}

impl ExpandOptions {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
            || self.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchOutcome {
    pub leaf: usize,
    pub criterion: Criterion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpansionReport {
    pub criterion: Criterion,
    pub new_nodes: Vec<usize>,
    pub branches: Vec<BranchOutcome>,
}

impl VariantTree {
    /// Expands every node above depth `k`.
    pub fn expand_depth(&mut self, k: usize, opts: &ExpandOptions) -> Result<ExpansionReport> {
        let mut new_nodes = Vec::new();
        loop {
            let Some(id) = self.frontier().find(|&n| self.nodes[n].depth < k) else { break };
            if opts.expired() {
                return Ok(self.report(Criterion::Timeout, new_nodes));
            }
            new_nodes.extend(self.expand_node(id)?);
        }
        let c = if self.frontier.is_empty() { Criterion::Exhausted } else { Criterion::Bound };
        Ok(self.report(c, new_nodes))
    }

    /// Expands breadth-first until the tree holds `n` variants.
    pub fn expand_variants(&mut self, n: usize, opts: &ExpandOptions) -> Result<ExpansionReport> {
        let mut new_nodes = Vec::new();
        while self.len() < n {
            let Some(id) = self.frontier().next() else { break };
            if opts.expired() {
                return Ok(self.report(Criterion::Timeout, new_nodes));
            }
            new_nodes.extend(self.expand_node(id)?);
        }
        let c = if self.frontier.is_empty() { Criterion::Exhausted } else { Criterion::Bound };
        Ok(self.report(c, new_nodes))
    }

    /// Expands breadth-first, marking every node that embeds an ancestor and
    /// stopping a branch once a node embeds an ancestor already so marked.
    pub fn expand_until_whistle(&mut self, opts: &ExpandOptions) -> Result<ExpansionReport> {
        let mut new_nodes = Vec::new();
        while let Some(id) = self.frontier.front().copied() {
            if opts.expired() {
                return Ok(self.report(Criterion::Timeout, new_nodes));
            }
            if opts.max_nodes.is_some_and(|m| self.len() >= m) {
                return Ok(self.report(Criterion::Bound, new_nodes));
            }
            for c in self.expand_node(id)? {
                self.check_embedding(c);
                new_nodes.push(c);
            }
        }
        let whistled = self.nodes.iter().any(|n| n.flags.whistled);
        Ok(self.report(if whistled { Criterion::Whistle } else { Criterion::Exhausted }, new_nodes))
    }

    fn check_embedding(&mut self, id: usize) {
        let th = Arc::clone(&self.theory);
        let mut ancestors = self.branch(id);
        ancestors.pop();
        let terms: Vec<Term> = ancestors.iter().map(|&a| self.nodes[a].term.clone()).collect();
        let term = self.nodes[id].term.clone();
        let Some(i) = whistle_check(&th, &terms, &term) else { return };
        let stop = ancestors
            .iter()
            .any(|&a| self.nodes[a].flags.embedded_ancestor.is_some() && embeds(&th, &self.nodes[a].term, &term));
        let flags = self.flags_mut(id);
        flags.embedded_ancestor = Some(ancestors[i]);
        if stop {
            flags.whistled = true;
            self.remove_from_frontier(id);
        }
    }

    fn report(&mut self, criterion: Criterion, new_nodes: Vec<usize>) -> ExpansionReport {
        let mut branches = Vec::new();
        for n in &self.nodes {
            if !n.children.is_empty() {
                continue;
            }
            let c = if n.flags.whistled {
                Criterion::Whistle
            } else if !n.flags.narrowable || n.expanded {
                Criterion::Exhausted
            } else if criterion == Criterion::Timeout {
                Criterion::Timeout
            } else {
                Criterion::Bound
            };
            branches.push(BranchOutcome { leaf: n.id, criterion: c });
        }
        self.criterion = Some(criterion);
        ExpansionReport { criterion, new_nodes, branches }
    }
}
