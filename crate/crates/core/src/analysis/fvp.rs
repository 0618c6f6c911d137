//! The finite variant property check on flat terms.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::term::{Term, Var};
use crate::theory::Theory;
use crate::variant::{Variant, VariantTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FvpLimits {
    pub max_variants: usize,
    pub timeout: Duration,
}

impl Default for FvpLimits {
    fn default() -> Self {
        FvpLimits { max_variants: 100, timeout: Duration::from_secs(30) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UncertainReason {
    Bound,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpVerdict {
    Finite { variants: Vec<Variant> },
    Uncertain { reason: UncertainReason, variants: Vec<Variant> },
}

impl OpVerdict {
    pub fn count(&self) -> usize {
        self.variants().len()
    }

    pub fn variants(&self) -> &[Variant] {
        match self {
            OpVerdict::Finite { variants } | OpVerdict::Uncertain { variants, .. } => variants,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, OpVerdict::Finite { .. })
    }

    /// `finite(k)` or `uncertain(≥k, reason)`.
    pub fn summary(&self) -> String {
        match self {
            OpVerdict::Finite { variants } => format!("finite({})", variants.len()),
            OpVerdict::Uncertain { reason, variants } => format!("uncertain(≥{}, {})", variants.len(), reason),
        }
    }
}

impl std::fmt::Display for UncertainReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            UncertainReason::Bound => "bound",
            UncertainReason::Timeout => "timeout",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpReport {
    pub flat_term: Term,
    pub verdict: OpVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FvpVerdict {
    /// Keyed by operator name.
    pub per_operator: BTreeMap<String, OpReport>,
    /// True when every operator has finitely many variants.
    pub overall: bool,
}

/// `f(X1, ..., Xn)` over pairwise distinct variables at the argument kinds.
pub fn flat_term(th: &Theory, f: crate::term::OpId) -> Term {
    let fam = th.op(f);
    let args = (0..fam.arity)
        .map(|i| {
            let kind = fam.arg_kinds[i.min(fam.arg_kinds.len().saturating_sub(1))];
            Term::Var(Var::user(&format!("X{}", i + 1), crate::sort::SortRef::Kind(kind)))
        })
        .collect();
    Term::App(f, args)
}

/// Computes the variants of every flat term, giving up on an operator once
/// it exceeds `max_variants` or its share of time runs out.
pub fn check_fvp(th: &Theory, limits: FvpLimits, cancel: Option<Arc<AtomicBool>>) -> Result<FvpVerdict> {
    let theory = Arc::new(th.clone());
    let mut per_operator = BTreeMap::new();
    for f in th.op_ids() {
        let flat = flat_term(th, f);
        let verdict = variants_within(&theory, &flat, limits, cancel.as_deref())?;
        per_operator.insert(th.op(f).name.clone(), OpReport { flat_term: flat, verdict });
    }
    let overall = per_operator.values().all(|r| r.verdict.is_finite());
    Ok(FvpVerdict { per_operator, overall })
}

fn variants_within(th: &Arc<Theory>, t: &Term, limits: FvpLimits, cancel: Option<&AtomicBool>) -> Result<OpVerdict> {
    let deadline = Instant::now() + limits.timeout;
    let mut tree = VariantTree::new(Arc::clone(th), t)?;
    let collect = |tree: &VariantTree| (0..tree.len().min(limits.max_variants)).map(|i| tree.variant(i)).collect();
    loop {
        let Some(id) = tree.frontier().next() else {
            if tree.len() <= limits.max_variants {
                return Ok(OpVerdict::Finite { variants: collect(&tree) });
            }
            return Ok(OpVerdict::Uncertain { reason: UncertainReason::Bound, variants: collect(&tree) });
        };
        if tree.len() >= limits.max_variants {
            return Ok(OpVerdict::Uncertain { reason: UncertainReason::Bound, variants: collect(&tree) });
        }
        if Instant::now() >= deadline || cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            return Ok(OpVerdict::Uncertain { reason: UncertainReason::Timeout, variants: collect(&tree) });
        }
        tree.expand_node(id)?;
    }
}
