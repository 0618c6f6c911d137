//! Equational theories: signature, axioms, equations, and the Ax-canonical
//! representation of terms.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::sort::{KindId, SortGraph, SortId, SortRef};
use crate::term::{OpId, Term, Var, VarClass};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDecl {
    pub args: Vec<SortId>,
    pub range: SortId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Axioms {
    pub assoc: bool,
    pub comm: bool,
    pub id: Option<Term>,
}

impl Axioms {
    pub fn is_ac(&self) -> bool {
        self.assoc && self.comm
    }

    pub fn is_free(&self) -> bool {
        !self.assoc && !self.comm && self.id.is_none()
    }
}

/// How an operator is written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syntax {
    /// `c`
    Constant,
    /// `f(t1, ..., tn)`
    Prefix,
    /// `t1 op t2`, declared as `_op_`.
    Infix(String),
}

/// All declarations sharing one operator name.
#[derive(Clone, Debug)]
pub struct OpFamily {
    pub name: String,
    pub arity: usize,
    pub syntax: Syntax,
    pub decls: Vec<OpDecl>,
    pub axioms: Axioms,
    pub arg_kinds: Vec<KindId>,
    pub range_kind: KindId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
    pub variant: bool,
}

#[derive(Clone, Debug)]
pub struct Theory {
    pub name: String,
    pub sorts: SortGraph,
    pub ops: Vec<OpFamily>,
    pub(crate) op_index: HashMap<String, OpId>,
    pub vars: BTreeMap<String, SortRef>,
    pub eqs: Vec<Equation>,
}

impl Theory {
    pub fn op(&self, f: OpId) -> &OpFamily {
        &self.ops[f.0 as usize]
    }

    pub fn axioms(&self, f: OpId) -> &Axioms {
        &self.op(f).axioms
    }

    pub fn op_named(&self, name: &str) -> Option<OpId> {
        self.op_index.get(name).copied()
    }

    pub fn variant_equations(&self) -> impl Iterator<Item = &Equation> {
        self.eqs.iter().filter(|e| e.variant)
    }

    pub fn equation(&self, label: &str) -> Option<&Equation> {
        self.eqs.iter().find(|e| e.label == label)
    }

    /// The Ax-canonical representative: arguments of assoc operators are
    /// flattened, identity elements removed, and arguments of comm
    /// operators sorted by the term order.
    pub fn canonical(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.canonical(a)).collect();
                self.canonical_node(*f, args)
            }
        }
    }

    /// Canonicalizes one node whose arguments are already canonical.
    pub fn canonical_node(&self, f: OpId, args: Vec<Term>) -> Term {
        let ax = self.axioms(f);
        let mut args = if ax.assoc {
            let mut flat = Vec::with_capacity(args.len());
            for a in args {
                match a {
                    Term::App(g, inner) if g == f => flat.extend(inner),
                    other => flat.push(other),
                }
            }
            flat
        } else {
            args
        };
        if let Some(id) = &ax.id {
            if !args.is_empty() {
                args.retain(|a| a != id);
                match args.len() {
                    0 => return id.clone(),
                    1 => return args.pop().unwrap(),
                    _ => {}
                }
            }
        }
        if ax.comm {
            args.sort();
        }
        Term::App(f, args)
    }

    pub fn ax_equal(&self, a: &Term, b: &Term) -> bool {
        self.canonical(a) == self.canonical(b)
    }

    /// Arguments of `t` viewed as an `f`-node: the flattened arguments when
    /// `t` is headed by `f`, nothing when `t` is the identity of `f`, and
    /// `[t]` otherwise.
    pub fn as_args_of(&self, f: OpId, t: &Term) -> Vec<Term> {
        match t {
            Term::App(g, args) if *g == f => args.clone(),
            _ if self.axioms(f).id.as_ref() == Some(t) => Vec::new(),
            _ => vec![t.clone()],
        }
    }

    /// Builds the canonical `f`-node over canonical `args`, collapsing to
    /// the identity or to a single argument where the axioms allow it.
    pub fn build_ac(&self, f: OpId, args: Vec<Term>) -> Term {
        match args.len() {
            0 => self.axioms(f).id.clone().expect("empty argument list requires an identity"),
            1 if self.axioms(f).assoc => args.into_iter().next().unwrap(),
            _ => self.canonical_node(f, args),
        }
    }

    pub fn kind_of_term(&self, t: &Term) -> KindId {
        match t {
            Term::Var(v) => self.sorts.kind_of_ref(v.sort),
            Term::App(f, _) => self.op(*f).range_kind,
        }
    }

    /// Least sort of `t`, or its kind when no declaration gives a proper sort.
    pub fn least_sort(&self, t: &Term) -> SortRef {
        match t {
            Term::Var(v) => v.sort,
            Term::App(f, args) => {
                let fam = self.op(*f);
                let arg_sorts: Vec<SortRef> = args.iter().map(|a| self.least_sort(a)).collect();
                if fam.axioms.assoc && arg_sorts.len() > 2 {
                    let mut acc = arg_sorts[0];
                    for &s in &arg_sorts[1..] {
                        acc = self.sort_of_app(fam, &[acc, s]);
                    }
                    acc
                } else {
                    self.sort_of_app(fam, &arg_sorts)
                }
            }
        }
    }

    fn sort_of_app(&self, fam: &OpFamily, arg_sorts: &[SortRef]) -> SortRef {
        let mut candidates: Vec<SortId> = Vec::new();
        let mut consider = |sorts: &[SortRef]| {
            for d in &fam.decls {
                if d.args.len() == sorts.len()
                    && d.args.iter().zip(sorts).all(|(&want, &have)| self.sorts.leq(have, SortRef::Sort(want)))
                {
                    candidates.push(d.range);
                }
            }
        };
        consider(arg_sorts);
        if fam.axioms.comm && arg_sorts.len() == 2 {
            consider(&[arg_sorts[1], arg_sorts[0]]);
        }
        candidates
            .iter()
            .copied()
            .find(|&c| candidates.iter().all(|&o| self.sorts.sort_leq(c, o)))
            .or_else(|| {
                // no least range: pick a minimal one deterministically
                candidates.iter().copied().filter(|&c| candidates.iter().all(|&o| o == c || !self.sorts.sort_leq(o, c))).min()
            })
            .map(SortRef::Sort)
            .unwrap_or(SortRef::Kind(fam.range_kind))
    }

    /// Kind-level well-formedness.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let fam = self.op(*f);
                let arity_ok = if fam.axioms.assoc { args.len() >= 2 } else { args.len() == fam.arity };
                if !arity_ok {
                    return Err(Error::Signature(format!(
                        "operator {} applied to {} arguments",
                        fam.name,
                        args.len()
                    )));
                }
                for (i, a) in args.iter().enumerate() {
                    let want = fam.arg_kinds[i.min(fam.arg_kinds.len() - 1)];
                    if self.kind_of_term(a) != want {
                        return Err(Error::Signature(format!(
                            "argument {} of {} is in kind {} but {} is expected",
                            i + 1,
                            fam.name,
                            self.sorts.kind(self.kind_of_term(a)).name,
                            self.sorts.kind(want).name
                        )));
                    }
                    self.check_term(a)?;
                }
                Ok(())
            }
        }
    }

    /// Operators in declaration-independent (name) order.
    pub fn op_ids(&self) -> impl Iterator<Item = OpId> {
        (0..self.ops.len() as u32).map(OpId)
    }

    pub fn kind_var(&self, name: &str, sort: SortRef) -> Var {
        Var::user(name, SortRef::Kind(self.sorts.kind_of_ref(sort)))
    }
}

/// Creates `#n:S` or `%n:S`.
pub fn fresh_var(class: VarClass, sort: SortRef, counter: u32) -> Var {
    assert!(counter >= 1, "fresh variable counters start at 1");
    Var::fresh(class, counter, sort)
}
