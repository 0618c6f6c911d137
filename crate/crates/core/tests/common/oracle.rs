//! Oracles shared by the property suites and the acceptance target.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use vnarrow::analysis::{embeds, flat_term};
use vnarrow::rewrite::{find_redexes, normalize, RedexMode};
use vnarrow::unify::{match_all, match_term, unify};
use vnarrow::variant::{get_variants, Criterion, ExpandOptions, VariantTree};
use vnarrow::{fixtures, Error, Substitution, Term, Theory, Var, VarClass};

use super::{symbols, term, term_text, tree};

pub const UNIFICATION_LEAVES: &[&str] = &["0", "mt", "s(0)", "X:[NatSet]", "Y:[NatSet]", "Z:[NatSet]"];

/// Ground instances: the three atoms and their pairwise products.
fn pool(th: &Theory) -> Vec<Term> {
    let atoms = ["0", "mt", "s(0)"];
    let mut out = BTreeSet::new();
    for a in atoms {
        out.insert(term(th, a));
        for b in atoms {
            out.insert(term(th, &format!("{a} * {b}")));
        }
    }
    out.into_iter().collect()
}

fn assignments(vars: &[Var], pool: &[Term]) -> Vec<Substitution> {
    let mut out = vec![Substitution::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|s| {
                pool.iter().map(move |t| {
                    let mut s = s.clone();
                    s.insert(v.clone(), t.clone());
                    s
                })
            })
            .collect();
    }
    out
}

/// Every unifier is sound, and every ground solution drawn from the pool is
/// an instance of some unifier.
pub fn unification_complete(th: &Theory, l: &str, r: &str) -> Result<(), TestCaseError> {
    let (l, r) = (term(th, l), term(th, r));
    let us = match unify(th, &[(l.clone(), r.clone())], 1) {
        Err(Error::ResourceLimit(_)) => return Err(TestCaseError::reject("resource limit")),
        other => other.unwrap(),
    };
    for u in &us {
        prop_assert!(th.ax_equal(&u.apply(th, &l), &u.apply(th, &r)), "unsound {}", th.show_subst(u));
    }
    let vars: Vec<Var> = l.vars().union(&r.vars()).cloned().collect();
    let pool = pool(th);
    for rho in assignments(&vars, &pool) {
        if !th.ax_equal(&rho.apply(th, &l), &rho.apply(th, &r)) {
            continue;
        }
        let covered = us.iter().any(|u| {
            let pairs: Vec<(Term, Term)> = vars.iter().map(|v| (u.image(v), rho.image(v))).collect();
            !match_all(th, &pairs, &Substitution::new()).unwrap().is_empty()
        });
        prop_assert!(covered, "{} =? {}: solution {} not covered", th.show(&l), th.show(&r), th.show_subst(&rho));
    }
    Ok(())
}

pub fn unification_side() -> BoxedStrategy<String> {
    term_text(UNIFICATION_LEAVES, &[], &["*"], 3)
}

/// All variables collapse to one per sort, since any variable embeds any
/// other of the same kind.
fn abstracted(th: &Theory, t: &Term) -> Term {
    th.canonical(&t.map_vars(&mut |v| Term::Var(Var::user("V", v.sort))))
}

/// Terms reachable from `t` by deleting one symbol: replacing an
/// application by one of its arguments, or dropping one argument of a
/// flattened assoc node.
fn deletions(th: &Theory, t: &Term) -> Vec<Term> {
    let Term::App(f, args) = t else { return Vec::new() };
    let mut out: Vec<Term> = args.clone();
    if th.axioms(*f).assoc && args.len() > 2 {
        for i in 0..args.len() {
            let mut rest = args.clone();
            rest.remove(i);
            out.push(th.canonical(&Term::App(*f, rest)));
        }
    }
    for i in 0..args.len() {
        for d in deletions(th, &args[i]) {
            let mut next = args.clone();
            next[i] = d;
            out.push(th.canonical(&Term::App(*f, next)));
        }
    }
    out
}

pub fn embeds_by_deletion(th: &Theory, small: &Term, big: &Term) -> bool {
    let goal = abstracted(th, small);
    let mut seen = BTreeSet::new();
    let mut todo = vec![abstracted(th, big)];
    while let Some(t) = todo.pop() {
        if t == goal {
            return true;
        }
        if seen.insert(t.clone()) {
            todo.extend(deletions(th, &t));
        }
    }
    false
}

pub fn embedding_agrees(th: &Theory, a: &str, b: &str) -> Result<(), TestCaseError> {
    let (a, b) = (term(th, a), term(th, b));
    prop_assume!(symbols(th, &a) <= 6 && symbols(th, &b) <= 6);
    prop_assert_eq!(embeds(th, &a, &b), embeds_by_deletion(th, &a, &b), "{} in {}", th.show(&a), th.show(&b));
    Ok(())
}

/// Products of at most three leaves, the largest that fit in six symbols.
pub fn products(leaves: &'static [&'static str]) -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(leaves), 1..=3).prop_map(|v| v.join(" * "))
}


struct Naive {
    term: Term,
    subst: Substitution,
    depth: usize,
}

/// Narrowing without folding: every successor of every node, normalized,
/// down to `depth`.
fn naive_narrowing(th: &Theory, root: &Term, root_vars: &[Var], depth: usize) -> Vec<Naive> {
    let mut fresh = 1000;
    let mut out = vec![Naive { term: root.clone(), subst: Substitution::new(), depth: 0 }];
    let mut i = 0;
    while i < out.len() {
        if out[i].depth < depth {
            let (t, sigma, d) = (out[i].term.clone(), out[i].subst.clone(), out[i].depth);
            for pos in t.app_positions() {
                let sub = t.subterm(&pos).unwrap().clone();
                for eq in th.variant_equations() {
                    let ren: Substitution = eq
                        .lhs
                        .vars()
                        .into_iter()
                        .map(|v| {
                            fresh += 1;
                            let s = v.sort;
                            (v, Term::Var(Var::fresh(VarClass::Variant, fresh, s)))
                        })
                        .collect();
                    let (lhs, rhs) = (ren.apply_raw(&eq.lhs), ren.apply_raw(&eq.rhs));
                    fresh += 1;
                    for theta in unify(th, &[(lhs, sub.clone())], fresh).unwrap() {
                        fresh = fresh.max(theta.max_fresh_index() + 1);
                        let next = normalize(th, &theta.apply(th, &t.replace_at(&pos, rhs.clone()))).unwrap();
                        let acc = sigma
                            .compose(&theta, th)
                            .restrict(root_vars)
                            .map_terms(|b| normalize(th, b).unwrap());
                        out.push(Naive { term: next, subst: acc, depth: d + 1 });
                    }
                }
            }
        }
        i += 1;
    }
    out
}

pub fn naive_agrees(th: &Arc<Theory>, input: &str, depth: usize) -> Result<(), TestCaseError> {
    let mut t = tree(th, input);
    t.expand_depth(depth, &ExpandOptions::default()).unwrap();
    let roots: Vec<Var> = t.root_vars().iter().map(|(_, r)| r.clone()).collect();
    let naive = naive_narrowing(th, t.root_term(), &roots, depth);
    for n in t.nodes() {
        let found = naive.iter().any(|m| {
            m.depth == n.depth
                && t.subsumes(&m.term, &m.subst, &n.term, &n.subst).unwrap()
                && t.subsumes(&n.term, &n.subst, &m.term, &m.subst).unwrap()
        });
        prop_assert!(found, "{input}: node {} has no naive counterpart", n.id);
    }
    for m in &naive {
        let covered = t.nodes().iter().any(|n| t.subsumes(&n.term, &n.subst, &m.term, &m.subst).unwrap());
        prop_assert!(covered, "{input}: naive {} is not covered", th.show(&m.term));
    }
    Ok(())
}


/// Inputs per fixture: every flat term plus the terms used in the examples.
pub fn inputs(th: &Theory, extra: &[&str]) -> Vec<Term> {
    let mut out: Vec<Term> = th.op_ids().filter(|&f| th.op(f).arity > 0).map(|f| flat_term(th, f)).collect();
    out.extend(extra.iter().map(|s| term(th, s)));
    out
}

pub fn suite() -> Vec<(Theory, Vec<&'static str>)> {
    vec![
        (fixtures::nat_variant(), vec!["X:Nat + s(0)", "Z:Nat + 0", "s(X:Nat) + Y:Nat"]),
        (fixtures::boolean(), vec!["X and Y", "X or Y", "X and (Y or true)"]),
        (fixtures::exclusive_or(), vec!["X:[NatSet] * Y:[NatSet]", "X:[NatSet] * X:[NatSet] * 0"]),
        (fixtures::exclusive_or_nofvp(), vec!["X:[NatSet] * Y:[NatSet]"]),
        (fixtures::exclusive_or_acu(), vec!["A:NatSet * B:NatSet", "X:NeNatSet * Z:[NatSet]"]),
        (fixtures::assoc_set(), vec!["X * Y", "X * 0"]),
        (fixtures::embedding_signature(), vec!["s(X * (Y + X))"]),
    ]
}

/// Every one-step rewrite of `t`, over all redexes, equations and matchers.
pub fn successors(th: &Theory, t: &Term) -> Vec<Term> {
    let t = th.canonical(t);
    let lhss: Vec<Term> = th.eqs.iter().map(|e| e.lhs.clone()).collect();
    let mut out = Vec::new();
    for r in find_redexes(th, &t, &lhss, RedexMode::Match).unwrap() {
        for &k in &r.patterns {
            let eq = &th.eqs[k];
            for m in match_term(th, &eq.lhs, &r.term).unwrap() {
                let rhs = m.apply(th, &eq.rhs);
                let replaced = match (&r.segment, t.subterm(&r.position).unwrap()) {
                    (Some(ix), Term::App(f, args)) => {
                        let mut rest: Vec<Term> =
                            args.iter().enumerate().filter(|(i, _)| !ix.contains(i)).map(|(_, a)| a.clone()).collect();
                        rest.insert(0, rhs);
                        Term::App(*f, rest)
                    }
                    _ => rhs,
                };
                out.push(th.canonical(&t.replace_at(&r.position, replaced)));
            }
        }
    }
    out
}

/// `to` is an irreducible term that `from` rewrites to.
pub fn rewrites_to_normal_form(th: &Theory, from: &Term, to: &Term) -> bool {
    let goal = th.canonical(to);
    if !successors(th, &goal).is_empty() {
        return false;
    }
    let mut seen = BTreeSet::new();
    let mut todo = vec![th.canonical(from)];
    while let Some(t) = todo.pop() {
        if t == goal {
            return true;
        }
        if seen.len() < 20_000 && seen.insert(t.clone()) {
            todo.extend(successors(th, &t));
        }
    }
    false
}


pub fn normal_forms(th: &Theory, t: &Term) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    let mut todo = vec![th.canonical(t)];
    while let Some(t) = todo.pop() {
        let next = successors(th, &t);
        if next.is_empty() {
            out.insert(t);
        }
        todo.extend(next);
    }
    out
}


/// In convergent theories the instance normalizes to the variant term. The
/// NOFVP and ACU mutations are not confluent on open terms, so there the
/// variant term must be one of the normal forms of the instance.
pub fn variants_sound() -> Result<(), String> {
    for (th, extra) in suite() {
        let confluent = !matches!(th.name.as_str(), "EXCLUSIVE-OR-NOFVP" | "EXCLUSIVE-OR-ACU");
        for t in inputs(&th, &extra) {
            for v in get_variants(&th, &t, Some(40)).unwrap() {
                let inst = v.subst.apply(&th, &t);
                let ok = if confluent {
                    th.ax_equal(&normalize(&th, &inst).unwrap(), &v.term)
                } else {
                    rewrites_to_normal_form(&th, &inst, &v.term)
                };
                if !ok {
                    return Err(format!("{}: {} under {} is not {}", th.name, th.show(&t), th.show_subst(&v.subst), th.show(&v.term)));
                }
            }
        }
    }
    Ok(())
}

/// No variant of an FVP fixture subsumes another in the final set.
pub fn folds_minimal() -> Result<(), String> {
    for (th, extra) in suite() {
        if matches!(th.name.as_str(), "NAT-VARIANT" | "EXCLUSIVE-OR-NOFVP") {
            continue;
        }
        let th = Arc::new(th);
        for t in inputs(&th, &extra) {
            let mut tree = VariantTree::new(Arc::clone(&th), &t).unwrap();
            let r = tree.expand_variants(1000, &ExpandOptions::default()).unwrap();
            if r.criterion != Criterion::Exhausted {
                return Err(format!("{}: {} did not finish", th.name, th.show(&t)));
            }
            let ns = tree.nodes();
            for a in ns {
                for b in ns.iter().filter(|b| b.id != a.id) {
                    if tree.subsumes(&a.term, &a.subst, &b.term, &b.subst).unwrap() {
                        return Err(format!("{}: V{} subsumes V{} for {}", th.name, a.id, b.id, th.show(&t)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// JSON exports of a tree for every input of every fixture: FVP fixtures are
/// expanded to exhaustion, the others until the whistle or a size cap.
pub fn fixture_exports() -> Vec<String> {
    let mut out = Vec::new();
    for (th, extra) in suite() {
        let th = Arc::new(th);
        for t in inputs(&th, &extra) {
            let mut tree = VariantTree::new(Arc::clone(&th), &t).unwrap();
            let opts = ExpandOptions { max_nodes: Some(60), ..ExpandOptions::default() };
            match th.name.as_str() {
                "NAT-VARIANT" => tree.expand_variants(30, &opts).unwrap(),
                "EXCLUSIVE-OR-NOFVP" => tree.expand_until_whistle(&opts).unwrap(),
                _ => tree.expand_variants(1000, &opts).unwrap(),
            };
            vnarrow::analysis::annotate_closedness(&mut tree).unwrap();
            out.push(tree.export_json());
        }
    }
    out
}
