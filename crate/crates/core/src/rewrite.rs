//! Rewriting with the equations of a theory modulo its axioms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subst::Substitution;
use crate::term::{OpId, Position, Term};
use crate::theory::{Equation, Theory};
use crate::unify::{match_extension, match_term, unify};

pub const DEFAULT_STEP_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    LeftmostOutermost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub label: String,
    pub position: Position,
    pub matcher: Substitution,
    pub before: Term,
    pub after: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: Vec<RewriteStep>,
}

/// Canonical form of `t` under all equations of `th`.
pub fn normalize(th: &Theory, t: &Term) -> Result<Term> {
    Ok(normalize_trace(th, t, Strategy::default(), DEFAULT_STEP_LIMIT)?.term)
}

pub fn normalize_trace(th: &Theory, t: &Term, strategy: Strategy, limit: usize) -> Result<Normalized> {
    let mut term = th.canonical(t);
    let mut steps = Vec::new();
    while let Some(step) = rewrite_once(th, &term, strategy)? {
        if steps.len() == limit {
            return Err(Error::NonTermination { limit });
        }
        term = step.after.clone();
        steps.push(step);
    }
    Ok(Normalized { term, steps })
}

/// The first rewrite step from `t` under `strategy`, if any.
pub fn rewrite_once(th: &Theory, t: &Term, strategy: Strategy) -> Result<Option<RewriteStep>> {
    let t = th.canonical(t);
    let positions = match strategy {
        Strategy::LeftmostInnermost => t.app_positions_postorder(),
        Strategy::LeftmostOutermost => t.app_positions(),
    };
    for pos in positions {
        let sub = t.subterm(&pos).expect("position from the term itself");
        for eq in &th.eqs {
            if let Some((matcher, replacement)) = rewrite_at(th, eq, sub)? {
                let after = th.canonical(&t.replace_at(&pos, replacement));
                return Ok(Some(RewriteStep { label: eq.label.clone(), position: pos, matcher, before: t, after }));
            }
        }
    }
    Ok(None)
}

/// Applies `eq` at the top of `sub`, using extension at assoc nodes.
fn rewrite_at(th: &Theory, eq: &Equation, sub: &Term) -> Result<Option<(Substitution, Term)>> {
    let (Term::App(f, args), Some(g)) = (sub, eq.lhs.top()) else { return Ok(None) };
    let ax = th.axioms(*f);
    if *f == g && ax.is_ac() {
        let Some((m, rest)) = match_extension(th, &eq.lhs, sub)?.into_iter().next() else { return Ok(None) };
        let rhs = m.apply(th, &eq.rhs);
        let replaced = if rest.is_empty() { rhs } else { th.canonical(&Term::App(*f, [vec![rhs], rest].concat())) };
        return Ok(Some((m, replaced)));
    }
    if *f == g && ax.assoc {
        let n = args.len();
        for i in 0..n {
            for j in i + 2..=n {
                let seg = th.build_ac(*f, args[i..j].to_vec());
                if let Some(m) = match_term(th, &eq.lhs, &seg)?.into_iter().next() {
                    let rhs = m.apply(th, &eq.rhs);
                    let mut out = args[..i].to_vec();
                    out.push(rhs);
                    out.extend_from_slice(&args[j..]);
                    return Ok(Some((m, th.build_ac(*f, out))));
                }
            }
        }
        return Ok(None);
    }
    Ok(match_term(th, &eq.lhs, sub)?.into_iter().next().map(|m| {
        let rhs = m.apply(th, &eq.rhs);
        (m, rhs)
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedexMode {
    Match,
    Unify,
}

/// A location where some pattern applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub position: Position,
    /// Argument indices of the flattened assoc node at `position` forming a
    /// proper segment; `None` for the whole subterm.
    pub segment: Option<Vec<usize>>,
    /// The subterm or segment itself.
    pub term: Term,
    /// Indices of the patterns that apply.
    pub patterns: Vec<usize>,
}

const MAX_SEGMENT_ARGS: usize = 16;

/// Every subterm and assoc segment of `t` that some pattern matches (or
/// unifies with). Pattern variables are renamed apart before unifying.
pub fn find_redexes(th: &Theory, t: &Term, patterns: &[Term], mode: RedexMode) -> Result<Vec<Redex>> {
    let t = th.canonical(t);
    let mut out = Vec::new();
    for pos in t.app_positions() {
        let sub = t.subterm(&pos).expect("own position");
        let mut candidates: Vec<(Option<Vec<usize>>, Term)> = vec![(None, sub.clone())];
        if let Term::App(f, args) = sub {
            candidates.extend(segments(th, *f, args)?.into_iter().map(|ix| {
                let seg = th.build_ac(*f, ix.iter().map(|&i| args[i].clone()).collect());
                (Some(ix), seg)
            }));
        }
        for (segment, term) in candidates {
            let mut hits = Vec::new();
            for (k, p) in patterns.iter().enumerate() {
                if applies(th, p, &term, mode)? {
                    hits.push(k);
                }
            }
            if !hits.is_empty() {
                out.push(Redex { position: pos.clone(), segment, term, patterns: hits });
            }
        }
    }
    Ok(out)
}

/// Proper segments of length at least two: contiguous runs under assoc,
/// distinct sub-multisets under assoc+comm.
fn segments(th: &Theory, f: OpId, args: &[Term]) -> Result<Vec<Vec<usize>>> {
    let ax = th.axioms(f);
    let n = args.len();
    if !ax.assoc || n < 3 {
        return Ok(Vec::new());
    }
    if !ax.comm {
        let mut out = Vec::new();
        for len in 2..n {
            for i in 0..=n - len {
                out.push((i..i + len).collect());
            }
        }
        return Ok(out);
    }
    if n > MAX_SEGMENT_ARGS {
        return Err(Error::ResourceLimit(format!("{n} arguments are too many for segment enumeration")));
    }
    let mut seen: Vec<Vec<&Term>> = Vec::new();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        if mask.count_ones() < 2 {
            continue;
        }
        let ix: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let key: Vec<&Term> = ix.iter().map(|&i| &args[i]).collect();
        if !seen.contains(&key) {
            seen.push(key);
            out.push(ix);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn applies(th: &Theory, pattern: &Term, term: &Term, mode: RedexMode) -> Result<bool> {
    match mode {
        RedexMode::Match => Ok(!match_term(th, pattern, term)?.is_empty()),
        RedexMode::Unify => {
            let fresh = term.max_fresh_index().max(pattern.max_fresh_index()) + 1;
            let renamed = rename_apart(pattern, fresh);
            Ok(!unify(th, &[(renamed, term.clone())], fresh + pattern.vars().len() as u32)?.is_empty())
        }
    }
}

/// Renames the variables of `t` to `%fresh, %fresh+1, ...` in order of
/// first occurrence.
pub fn rename_apart(t: &Term, fresh: u32) -> Term {
    let order = t.vars_in_order();
    t.map_vars(&mut |v| {
        let k = order.iter().position(|w| w == v).unwrap() as u32;
        Term::Var(crate::term::Var::fresh(crate::term::VarClass::Variant, fresh + k, v.sort))
    })
}

#[cfg(test)]
mod tests;
