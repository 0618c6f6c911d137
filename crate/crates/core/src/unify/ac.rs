//! The AC and ACU unification step.

use std::collections::BTreeMap;

use super::dioph::DiophSystem;
use super::{kind_sort, Solver, State, Step};
use crate::error::{Error, Result};
use crate::term::{OpId, Term, Var, VarClass};

/// Removes arguments occurring on both sides, respecting multiplicities.
fn cancel(mut ls: Vec<Term>, mut rs: Vec<Term>) -> (Vec<Term>, Vec<Term>) {
    let mut i = 0;
    while i < ls.len() {
        if let Some(j) = rs.iter().position(|r| *r == ls[i]) {
            rs.remove(j);
            ls.remove(i);
        } else {
            i += 1;
        }
    }
    (ls, rs)
}

fn group(ts: Vec<Term>) -> (Vec<Term>, Vec<u32>) {
    let mut m: BTreeMap<Term, u32> = BTreeMap::new();
    for t in ts {
        *m.entry(t).or_insert(0) += 1;
    }
    m.into_iter().unzip()
}

impl Solver<'_> {
    pub(super) fn ac(&mut self, f: OpId, ls: Vec<Term>, rs: Vec<Term>, st: &mut State) -> Result<Step> {
        let th = self.th;
        let with_id = th.axioms(f).id.is_some();
        let (ls, rs) = cancel(ls, rs);
        if ls.is_empty() && rs.is_empty() {
            return Ok(Step::Continue);
        }
        if !with_id && (ls.is_empty() || rs.is_empty()) {
            return Ok(Step::Fail);
        }
        if ls.len() == 1 && ls[0].is_var() && !rs.is_empty() {
            let x = ls[0].as_var().unwrap().clone();
            return self.bind(x, th.build_ac(f, rs), st);
        }
        if rs.len() == 1 && rs[0].is_var() && !ls.is_empty() {
            let y = rs[0].as_var().unwrap().clone();
            return self.bind(y, th.build_ac(f, ls), st);
        }

        let (lt, lm) = group(ls);
        let (rt, rm) = group(rs);
        let basis = DiophSystem::from_sides(&lm, &rm).solve(self.limits.basis_cap)?;
        let terms: Vec<Term> = lt.into_iter().chain(rt).collect();
        let nonvar: Vec<bool> = terms.iter().map(|t| !t.is_var()).collect();
        let basis: Vec<Vec<u32>> =
            basis.into_iter().filter(|v| v.iter().zip(&nonvar).all(|(&x, &nv)| !nv || x <= 1)).collect();

        let touches = |v: &Vec<u32>| v.iter().zip(&nonvar).any(|(&x, &nv)| nv && x > 0);
        let (forced, optional): (Vec<usize>, Vec<usize>) = if with_id {
            (0..basis.len()).partition(|&i| !touches(&basis[i]))
        } else {
            (Vec::new(), (0..basis.len()).collect())
        };

        let mut selections = Vec::new();
        let mut budget = 1_000_000usize;
        let mut cover = vec![0u32; terms.len()];
        for &i in &forced {
            for (c, &x) in cover.iter_mut().zip(&basis[i]) {
                *c += x;
            }
        }
        let mut chosen = forced.clone();
        select(&basis, &optional, 0, &nonvar, with_id, &mut cover, &mut chosen, &mut selections, &mut budget)?;

        let mut states = Vec::with_capacity(selections.len());
        for sel in selections {
            let mut s = st.clone();
            let mut parts: Vec<Vec<Term>> = vec![Vec::new(); terms.len()];
            for &i in &sel {
                let z = Term::Var(Var::fresh(VarClass::Unif, s.next, kind_sort(th, f)));
                s.next += 1;
                for (k, &x) in basis[i].iter().enumerate() {
                    for _ in 0..x {
                        parts[k].push(z.clone());
                    }
                }
            }
            let pairs = terms.iter().cloned().zip(parts.into_iter().map(|p| th.build_ac(f, p))).collect();
            s.push_all(pairs);
            states.push(s);
        }
        if states.is_empty() {
            return Ok(Step::Fail);
        }
        Ok(Step::Branch(states))
    }
}

/// Enumerates subsets of `optional` such that every non-variable unknown is
/// covered exactly once and, without identity, every variable at least once.
#[allow(clippy::too_many_arguments)]
fn select(
    basis: &[Vec<u32>],
    optional: &[usize],
    k: usize,
    nonvar: &[bool],
    with_id: bool,
    cover: &mut Vec<u32>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: &mut usize,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::ResourceLimit("too many AC unifier candidates".into()));
    }
    *budget -= 1;
    if k == optional.len() {
        let ok = cover.iter().zip(nonvar).all(|(&c, &nv)| if nv { c == 1 } else { with_id || c >= 1 });
        if ok {
            let mut sel = chosen.clone();
            sel.sort_unstable();
            out.push(sel);
        }
        return Ok(());
    }
    let v = &basis[optional[k]];
    let fits = v.iter().zip(nonvar.iter()).zip(cover.iter()).all(|((&x, &nv), &c)| !nv || c + x <= 1);
    if fits {
        for (c, &x) in cover.iter_mut().zip(v) {
            *c += x;
        }
        chosen.push(optional[k]);
        select(basis, optional, k + 1, nonvar, with_id, cover, chosen, out, budget)?;
        chosen.pop();
        for (c, &x) in cover.iter_mut().zip(v) {
            *c -= x;
        }
    }
    select(basis, optional, k + 1, nonvar, with_id, cover, chosen, out, budget)
}
