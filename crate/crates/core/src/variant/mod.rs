//! Folding variant narrowing trees.

mod expand;
mod export;
mod node;
mod stream;

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rewrite::{normalize_trace, RewriteStep, Strategy, DEFAULT_STEP_LIMIT};
use crate::subst::Substitution;
use crate::term::{Position, Term, Var, VarClass};
use crate::theory::Theory;
use crate::unify::{match_all, unify};

pub use export::{
    EdgeExport, FlagsExport, FoldedExport, NodeExport, RootVariable, StepExport, TreeExport, SCHEMA_VERSION,
};
pub use expand::{BranchOutcome, Criterion, ExpandOptions, ExpansionReport};
pub use node::{Edge, FoldedChild, NodeFlags, Variant, VariantNode};
pub use stream::{get_variants, VariantStream};

#[derive(Clone, Debug)]
pub struct VariantTree {
    theory: Arc<Theory>,
    /// The input term with its variables renamed to `#1..#n`.
    input: Term,
    input_trace: Vec<RewriteStep>,
    /// `(user variable, root variable)` in order of first occurrence.
    root_vars: Vec<(Var, Var)>,
    nodes: Vec<VariantNode>,
    frontier: VecDeque<usize>,
    /// Next unused fresh index.
    fresh: u32,
    last_at_depth: Vec<usize>,
    step_limit: usize,
    /// Criterion of the most recent automatic expansion.
    criterion: Option<Criterion>,
}

struct Candidate {
    term: Term,
    subst: Substitution,
    edge: Edge,
}

impl VariantTree {
    /// Renames the variables of `t` apart, normalizes it, and seeds the
    /// frontier with the resulting root `V_0`.
    pub fn new(theory: Arc<Theory>, t: &Term) -> Result<Self> {
        theory.check_term(t)?;
        let th = &*theory;
        let mut root_vars = Vec::new();
        for (i, v) in t.vars_in_order().into_iter().enumerate() {
            let r = Var::fresh(VarClass::Unif, i as u32 + 1, v.sort);
            root_vars.push((v, r));
        }
        let ren: Substitution = root_vars.iter().map(|(u, r)| (u.clone(), Term::Var(r.clone()))).collect();
        let input = ren.apply(th, t);
        let norm = normalize_trace(th, &input, Strategy::LeftmostInnermost, DEFAULT_STEP_LIMIT)?;
        let fresh = root_vars.len() as u32 + 1;
        let mut tree = VariantTree {
            theory,
            input,
            input_trace: norm.steps,
            root_vars,
            nodes: Vec::new(),
            frontier: VecDeque::new(),
            fresh,
            last_at_depth: Vec::new(),
            step_limit: DEFAULT_STEP_LIMIT,
            criterion: None,
        };
        tree.push_node(norm.term, Substitution::new(), None, None)?;
        Ok(tree)
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn input(&self) -> &Term {
        &self.input
    }

    /// Rewrite steps from the input term to `V_0`.
    pub fn input_trace(&self) -> &[RewriteStep] {
        &self.input_trace
    }

    pub fn root_vars(&self) -> &[(Var, Var)] {
        &self.root_vars
    }

    pub fn nodes(&self) -> &[VariantNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Option<&VariantNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn frontier(&self) -> impl Iterator<Item = usize> + '_ {
        self.frontier.iter().copied()
    }

    pub fn criterion(&self) -> Option<Criterion> {
        self.criterion
    }

    pub fn fresh_counter(&self) -> u32 {
        self.fresh
    }

    pub fn root_term(&self) -> &Term {
        &self.nodes[0].term
    }

    /// Node ids from the root down to `id`.
    pub fn branch(&self, id: usize) -> Vec<usize> {
        let mut out = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// The substitution of a node over the user's variable names.
    pub fn user_subst(&self, id: usize) -> Substitution {
        let s = &self.nodes[id].subst;
        self.root_vars.iter().map(|(u, r)| (u.clone(), s.image(r))).collect()
    }

    pub fn variant(&self, id: usize) -> Variant {
        let n = &self.nodes[id];
        Variant {
            id,
            term: n.term.clone(),
            subst: self.user_subst(id),
            fresh_index: n.fresh_index,
            parent: n.parent,
            more: n.more,
        }
    }

    pub(crate) fn flags_mut(&mut self, id: usize) -> &mut NodeFlags {
        &mut self.nodes[id].flags
    }

    pub(crate) fn remove_from_frontier(&mut self, id: usize) {
        self.frontier.retain(|&n| n != id);
    }

    /// Whether some variant equation unifies with a non-variable position.
    fn narrowable(&self, t: &Term) -> Result<bool> {
        let th = &*self.theory;
        for pos in t.app_positions() {
            let sub = t.subterm(&pos).unwrap();
            for eq in th.variant_equations() {
                let base = self.fresh.max(t.max_fresh_index() + 1);
                let (lhs, _) = rename_equation(&eq.lhs, &eq.rhs, base);
                let nv = eq.lhs.vars().len() as u32;
                if !unify(th, &[(lhs, sub.clone())], base + nv)?.is_empty() {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    fn push_node(&mut self, term: Term, subst: Substitution, parent: Option<usize>, edge: Option<Edge>) -> Result<usize> {
        let id = self.nodes.len();
        let depth = parent.map_or(0, |p| self.nodes[p].depth + 1);
        let narrowable = self.narrowable(&term)?;
        if let Some(&prev) = self.last_at_depth.get(depth) {
            self.nodes[prev].more = true;
            self.last_at_depth[depth] = id;
        } else {
            self.last_at_depth.push(id);
        }
        self.nodes.push(VariantNode {
            id,
            term,
            subst,
            fresh_index: self.fresh - 1,
            parent,
            more: false,
            depth,
            edge,
            children: Vec::new(),
            folded_children: Vec::new(),
            expanded: false,
            flags: NodeFlags { narrowable, ..NodeFlags::default() },
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        if narrowable {
            self.frontier.push_back(id);
        }
        Ok(id)
    }

    /// Does the variant `(sa, ta)` subsume `(sb, tb)`?
    pub fn subsumes(&self, ta: &Term, sa: &Substitution, tb: &Term, sb: &Substitution) -> Result<bool> {
        let mut pairs = vec![(ta.clone(), tb.clone())];
        for (_, r) in &self.root_vars {
            pairs.push((sa.image(r), sb.image(r)));
        }
        Ok(!match_all(&self.theory, &pairs, &Substitution::new())?.is_empty())
    }

    /// All one-step narrowing successors of node `id`, normalized, in
    /// position, equation, unifier order.
    fn candidates(&mut self, id: usize) -> Result<Vec<Candidate>> {
        let theory = Arc::clone(&self.theory);
        let th = &*theory;
        let t = self.nodes[id].term.clone();
        let sigma = self.nodes[id].subst.clone();
        let root: Vec<Var> = self.root_vars.iter().map(|(_, r)| r.clone()).collect();
        let mut out = Vec::new();
        for pos in t.app_positions() {
            let sub = t.subterm(&pos).unwrap().clone();
            for eq in th.variant_equations() {
                let base = self.fresh.max(t.max_fresh_index() + 1);
                let (lhs, rhs) = rename_equation(&eq.lhs, &eq.rhs, base);
                let nv = eq.lhs.vars().len() as u32;
                let unifiers = unify(th, &[(lhs.clone(), sub.clone())], base + nv)?;
                if unifiers.is_empty() {
                    continue;
                }
                self.fresh = self.fresh.max(base + nv);
                for theta in unifiers {
                    self.fresh = self.fresh.max(theta.max_fresh_index() + 1);
                    let raw = theta.apply(th, &t.replace_at(&pos, rhs.clone()));
                    let norm = normalize_trace(th, &raw, Strategy::LeftmostInnermost, self.step_limit)?;
                    let raw_acc = sigma.compose(&theta, th).restrict(&root);
                    let mut acc = Substitution::new();
                    for (v, b) in raw_acc.iter() {
                        acc.insert(v.clone(), self.normal_form(b)?);
                    }
                    // fall back to the composed bindings when normalized
                    // ones do not reproduce the variant
                    if self.normal_form(&acc.apply(th, &self.nodes[0].term))? != norm.term {
                        acc = raw_acc;
                    }
                    let (term, subst) = self.rename_transient(&norm.term, &acc);
                    let mut step_vars = t.vars();
                    lhs.collect_vars(&mut step_vars);
                    out.push(Candidate {
                        term,
                        subst,
                        edge: Edge {
                            equation: eq.label.clone(),
                            unifier: theta.restrict(&step_vars),
                            position: pos.clone(),
                            trace: norm.steps,
                        },
                    });
                }
            }
        }
        Ok(out)
    }

    fn normal_form(&self, t: &Term) -> Result<Term> {
        Ok(normalize_trace(&self.theory, t, Strategy::LeftmostInnermost, self.step_limit)?.term)
    }

    /// Replaces `%` variables left over from equations by fresh `#` ones.
    fn rename_transient(&mut self, t: &Term, s: &Substitution) -> (Term, Substitution) {
        let mut ren = Substitution::new();
        let seen = |v: &Var, ren: &mut Substitution, fresh: &mut u32| {
            if v.class == VarClass::Variant && !ren.contains(v) {
                ren.insert(v.clone(), Term::Var(Var::fresh(VarClass::Unif, *fresh, v.sort)));
                *fresh += 1;
            }
        };
        for v in t.vars_in_order() {
            seen(&v, &mut ren, &mut self.fresh);
        }
        for (_, b) in s.iter() {
            for v in b.vars_in_order() {
                seen(&v, &mut ren, &mut self.fresh);
            }
        }
        let th = &*self.theory;
        (ren.apply(th, t), s.map_terms(|b| ren.apply(th, b)))
    }

    /// Narrows node `id` one step and keeps the children that are not
    /// subsumed by a sibling or by any node already in the tree.
    pub fn expand_node(&mut self, id: usize) -> Result<Vec<usize>> {
        let Some(node) = self.nodes.get(id) else {
            return Err(Error::InvalidExpansion(format!("no node V_{id}")));
        };
        if node.expanded {
            return Err(Error::InvalidExpansion(format!("V_{id} is already expanded")));
        }
        if !node.flags.narrowable {
            return Err(Error::InvalidExpansion(format!("V_{id} is not narrowable")));
        }
        if node.flags.whistled {
            return Err(Error::InvalidExpansion(format!("V_{id} was stopped by the embedding whistle")));
        }
        let cands = self.candidates(id)?;
        self.nodes[id].expanded = true;
        self.remove_from_frontier(id);

        let mut dropped: Vec<Option<usize>> = vec![None; cands.len()];
        for i in 0..cands.len() {
            for j in 0..cands.len() {
                if i == j || dropped[j].is_some() {
                    continue;
                }
                let (a, b) = (&cands[j], &cands[i]);
                if self.subsumes(&a.term, &a.subst, &b.term, &b.subst)? {
                    let mutual = self.subsumes(&b.term, &b.subst, &a.term, &a.subst)?;
                    if !mutual || j < i {
                        dropped[i] = Some(j);
                        break;
                    }
                }
            }
        }

        let mut kept = Vec::new();
        // node id a candidate became, or the node that folded it
        let mut resolved: Vec<Option<usize>> = vec![None; cands.len()];
        let mut folded: Vec<(usize, Candidate)> = Vec::new();
        for (i, c) in cands.into_iter().enumerate() {
            if dropped[i].is_some() {
                folded.push((i, c));
                continue;
            }
            let mut by = None;
            for n in &self.nodes {
                if self.subsumes(&n.term, &n.subst, &c.term, &c.subst)? {
                    by = Some(n.id);
                    break;
                }
            }
            if by.is_some() {
                resolved[i] = by;
                folded.push((i, c));
                continue;
            }
            let nid = self.push_node(c.term, c.subst, Some(id), Some(c.edge))?;
            resolved[i] = Some(nid);
            kept.push(nid);
        }
        for (i, c) in folded {
            let folded_by = match dropped[i] {
                Some(j) => resolved[j],
                None => resolved[i],
            };
            self.nodes[id].folded_children.push(FoldedChild { term: c.term, subst: c.subst, edge: c.edge, folded_by });
        }
        Ok(kept)
    }
}

/// Renames the variables of an equation to `%base, %base+1, ...`.
fn rename_equation(lhs: &Term, rhs: &Term, base: u32) -> (Term, Term) {
    let order = lhs.vars_in_order();
    let ren: Substitution = order
        .iter()
        .enumerate()
        .map(|(k, v)| (v.clone(), Term::Var(Var::fresh(VarClass::Variant, base + k as u32, v.sort))))
        .collect();
    (ren.apply_raw(lhs), ren.apply_raw(rhs))
}

/// Convenience wrapper around [`Term`] positions for display.
pub fn show_position(p: &Position) -> String {
    if p.is_empty() {
        "ε".to_string()
    } else {
        p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}

#[cfg(test)]
mod tests;
