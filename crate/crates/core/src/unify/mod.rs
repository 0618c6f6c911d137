//! Order-sorted unification and matching modulo free, C, AC, ACU and a
//! restricted form of A axioms.

pub mod dioph;
pub mod matching;
mod sorts;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::sort::SortRef;
use crate::subst::Substitution;
use crate::term::{OpId, Term, Var, VarClass};
use crate::theory::Theory;

pub use matching::{match_all, match_extension, match_term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnifyLimits {
    /// Largest Diophantine basis accepted for one AC equation.
    pub basis_cap: usize,
    /// Upper bound on equations processed across all branches.
    pub max_steps: usize,
}

impl Default for UnifyLimits {
    fn default() -> Self {
        UnifyLimits { basis_cap: 64, max_steps: 200_000 }
    }
}

/// Complete set of unifiers of all `pairs` simultaneously, modulo the axioms
/// of `th`. Fresh variables are `#n` numbered consecutively from `fresh` (or
/// past the largest `#` index already present). Unifiers come out sorted.
pub fn unify(th: &Theory, pairs: &[(Term, Term)], fresh: u32) -> Result<Vec<Substitution>> {
    unify_with(th, pairs, fresh, UnifyLimits::default())
}

pub fn unify_with(th: &Theory, pairs: &[(Term, Term)], fresh: u32, limits: UnifyLimits) -> Result<Vec<Substitution>> {
    let mut problem_vars = BTreeSet::new();
    let mut start = fresh.max(1);
    let mut eqs = Vec::with_capacity(pairs.len());
    for (l, r) in pairs {
        l.collect_vars(&mut problem_vars);
        r.collect_vars(&mut problem_vars);
        start = start.max(l.max_fresh_index() + 1).max(r.max_fresh_index() + 1);
        eqs.push((th.canonical(l), th.canonical(r)));
    }
    eqs.reverse();

    let mut solver = Solver { th, limits, steps: 0 };
    let mut stack = vec![State { eqs, sigma: Substitution::new(), next: start }];
    let mut solved = Vec::new();
    while let Some(mut st) = stack.pop() {
        loop {
            let Some((l, r)) = st.eqs.pop() else {
                solved.push((st.sigma, st.next));
                break;
            };
            solver.steps += 1;
            if solver.steps > limits.max_steps {
                return Err(Error::ResourceLimit(format!("unification exceeded {} steps", limits.max_steps)));
            }
            let l = st.sigma.apply(th, &l);
            let r = st.sigma.apply(th, &r);
            match solver.step(l, r, &mut st)? {
                Step::Continue => {}
                Step::Fail => break,
                Step::Branch(states) => {
                    stack.extend(states.into_iter().rev());
                    break;
                }
            }
        }
    }

    let mut out = BTreeSet::new();
    for (sigma, mut next) in solved {
        for repaired in sorts::repair(th, sigma, &mut next) {
            let restricted = repaired.restrict(&problem_vars);
            out.insert(renumber(th, &restricted, start));
        }
    }
    Ok(out.into_iter().collect())
}

/// Renames `#` variables with index at least `start` to consecutive indices
/// in order of first appearance.
fn renumber(th: &Theory, s: &Substitution, start: u32) -> Substitution {
    let mut ren = Substitution::new();
    let mut k = start;
    for (_, t) in s.iter() {
        for v in t.vars_in_order() {
            if v.class == VarClass::Unif && v.index >= start && !ren.contains(&v) {
                ren.insert(v.clone(), Term::Var(Var::fresh(VarClass::Unif, k, v.sort)));
                k += 1;
            }
        }
    }
    s.map_terms(|t| ren.apply(th, t))
}

#[derive(Clone, Debug)]
struct State {
    /// Pending equations, processed from the back.
    eqs: Vec<(Term, Term)>,
    sigma: Substitution,
    next: u32,
}

impl State {
    fn push_all(&mut self, pairs: Vec<(Term, Term)>) {
        self.eqs.extend(pairs.into_iter().rev());
    }
}

enum Step {
    Continue,
    Fail,
    Branch(Vec<State>),
}

struct Solver<'a> {
    th: &'a Theory,
    limits: UnifyLimits,
    steps: usize,
}

fn class_rank(c: VarClass) -> u8 {
    match c {
        VarClass::User => 0,
        VarClass::Unif => 1,
        VarClass::Variant => 2,
    }
}

impl Solver<'_> {
    fn step(&mut self, l: Term, r: Term, st: &mut State) -> Result<Step> {
        if l == r {
            return Ok(Step::Continue);
        }
        match (&l, &r) {
            (Term::Var(x), Term::Var(y)) => {
                let (v, t) = self.orient(x, y);
                self.bind(v, t, st)
            }
            (Term::Var(x), _) => self.bind(x.clone(), r, st),
            (_, Term::Var(y)) => self.bind(y.clone(), l, st),
            (Term::App(f, a), Term::App(g, b)) => {
                if f == g {
                    return self.decompose(*f, a.clone(), b.clone(), st);
                }
                for h in [*f, *g] {
                    let ax = self.th.axioms(h);
                    if ax.id.is_some() && !ax.is_ac() {
                        return Err(self.unsupported(h));
                    }
                }
                if self.th.axioms(*f).id.is_some() {
                    let rs = self.th.as_args_of(*f, &r);
                    self.ac(*f, a.clone(), rs, st)
                } else if self.th.axioms(*g).id.is_some() {
                    let ls = self.th.as_args_of(*g, &l);
                    self.ac(*g, ls, b.clone(), st)
                } else {
                    Ok(Step::Fail)
                }
            }
        }
    }

    fn unsupported(&self, f: OpId) -> Error {
        Error::UnsupportedAxioms(format!("unification modulo the axioms of {}", self.th.op(f).name))
    }

    /// Picks which of two variables gets bound: the one with the larger sort,
    /// otherwise the more transient class, otherwise the larger variable.
    fn orient(&self, x: &Var, y: &Var) -> (Var, Term) {
        let s = &self.th.sorts;
        let bind_x = match (s.leq(x.sort, y.sort), s.leq(y.sort, x.sort)) {
            (true, false) => false,
            (false, true) => true,
            _ => (class_rank(x.class), x) > (class_rank(y.class), y),
        };
        if bind_x {
            (x.clone(), Term::Var(y.clone()))
        } else {
            (y.clone(), Term::Var(x.clone()))
        }
    }

    fn bind(&mut self, x: Var, t: Term, st: &mut State) -> Result<Step> {
        let th = self.th;
        if th.sorts.kind_of_ref(x.sort) != th.kind_of_term(&t) {
            return Ok(Step::Fail);
        }
        if t.occurs(&x) {
            if let Term::App(f, args) = &t {
                if th.axioms(*f).is_ac() && args.iter().any(|a| a.as_var() == Some(&x)) {
                    return self.ac(*f, vec![Term::Var(x)], args.clone(), st);
                }
            }
            return Ok(Step::Fail);
        }
        let single = Substitution::singleton(x.clone(), t.clone());
        st.sigma = st.sigma.map_terms(|u| single.apply(th, u));
        st.sigma.insert(x, t);
        Ok(Step::Continue)
    }

    fn decompose(&mut self, f: OpId, a: Vec<Term>, b: Vec<Term>, st: &mut State) -> Result<Step> {
        let ax = self.th.axioms(f);
        if ax.is_ac() {
            return self.ac(f, a, b, st);
        }
        if ax.id.is_some() {
            return Err(self.unsupported(f));
        }
        if ax.assoc {
            return self.assoc(f, a, b, st);
        }
        if a.len() != b.len() {
            return Ok(Step::Fail);
        }
        if ax.comm {
            let mut straight = st.clone();
            straight.push_all(vec![(a[0].clone(), b[0].clone()), (a[1].clone(), b[1].clone())]);
            let mut crossed = st.clone();
            crossed.push_all(vec![(a[0].clone(), b[1].clone()), (a[1].clone(), b[0].clone())]);
            return Ok(Step::Branch(vec![straight, crossed]));
        }
        st.push_all(a.into_iter().zip(b).collect());
        Ok(Step::Continue)
    }

    /// Associative but not commutative: only the case where one side is a
    /// list of distinct variables absent from the other side.
    fn assoc(&mut self, f: OpId, a: Vec<Term>, b: Vec<Term>, st: &mut State) -> Result<Step> {
        let linear = |side: &[Term], other: &[Term]| {
            let mut seen = BTreeSet::new();
            side.iter().all(|t| match t {
                Term::Var(v) => seen.insert(v.clone()) && !other.iter().any(|o| o.occurs(v)),
                _ => false,
            })
        };
        let (vars, terms) = if linear(&a, &b) {
            (a, b)
        } else if linear(&b, &a) {
            (b, a)
        } else {
            return Err(Error::UnsupportedAxioms(format!(
                "associative unification for {} needs one side made of distinct variables",
                self.th.op(f).name
            )));
        };
        if vars.len() > terms.len() {
            return Ok(Step::Fail);
        }
        let mut states = Vec::new();
        for cuts in compositions(terms.len(), vars.len()) {
            let mut s = st.clone();
            let mut pairs = Vec::new();
            let mut from = 0;
            for (v, &to) in vars.iter().zip(&cuts) {
                pairs.push((v.clone(), self.th.build_ac(f, terms[from..to].to_vec())));
                from = to;
            }
            s.push_all(pairs);
            states.push(s);
        }
        Ok(Step::Branch(states))
    }
}

/// End offsets of every split of `n` items into `parts` non-empty
/// contiguous groups.
pub(crate) fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(from: usize, n: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for end in from + 1..=n - (parts - 1) {
            cur.push(end);
            go(end, n, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && parts <= n {
        go(0, n, parts, &mut Vec::new(), &mut out);
    }
    out
}

mod ac;


pub(crate) fn kind_sort(th: &Theory, f: OpId) -> SortRef {
    SortRef::Kind(th.op(f).range_kind)
}
