//! Substitutions.

use std::collections::{BTreeMap, BTreeSet};

use crate::term::{Term, Var};
use crate::theory::Theory;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Self::new();
        s.insert(v, t);
        s
    }

    /// Inserts a binding; trivial bindings `X -> X` are dropped.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t.as_var() == Some(&v) {
            self.bindings.remove(&v);
        } else {
            self.bindings.insert(v, t);
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.bindings.contains_key(v)
    }

    pub fn remove(&mut self, v: &Var) -> Option<Term> {
        self.bindings.remove(v)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.bindings.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    /// Instantiates without canonicalizing.
    pub fn apply_raw(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.bindings.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone())))
    }

    /// Instantiates and returns the canonical representative.
    pub fn apply(&self, th: &Theory, t: &Term) -> Term {
        th.canonical(&self.apply_raw(t))
    }

    /// The substitution `t -> other(self(t))`.
    pub fn compose(&self, other: &Substitution, th: &Theory) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.insert(v.clone(), other.apply(th, t));
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
        let keep: BTreeSet<&Var> = vars.into_iter().collect();
        Substitution {
            bindings: self.bindings.iter().filter(|(v, _)| keep.contains(v)).map(|(v, t)| (v.clone(), t.clone())).collect(),
        }
    }

    /// Binding of `v`, or `v` itself when unbound.
    pub fn image(&self, v: &Var) -> Term {
        self.bindings.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone()))
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.insert(v.clone(), f(t));
        }
        out
    }

    pub fn max_fresh_index(&self) -> u32 {
        self.bindings.values().map(Term::max_fresh_index).max().unwrap_or(0)
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert(v, t);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parser::parse_term;

    fn var(th: &Theory, s: &str) -> Var {
        parse_term(s, th).unwrap().as_var().unwrap().clone()
    }

    #[test]
    fn apply_narrowing_unifier() {
        let th = fixtures::nat_variant();
        let sigma: Substitution = [
            (var(&th, "Z"), parse_term("s(X)", &th).unwrap()),
            (var(&th, "Y"), parse_term("0", &th).unwrap()),
        ]
        .into_iter()
        .collect();
        let t = parse_term("Z + 0", &th).unwrap();
        assert_eq!(th.show(&sigma.apply(&th, &t)), "s(X:Nat) + 0");
    }

    #[test]
    fn compose_with_identity() {
        let th = fixtures::nat_variant();
        let sigma = Substitution::singleton(var(&th, "Z"), parse_term("s(X)", &th).unwrap());
        assert_eq!(Substitution::new().compose(&sigma, &th), sigma);
        assert_eq!(sigma.compose(&Substitution::new(), &th), sigma);
    }

    #[test]
    fn compose_chains_application() {
        let th = fixtures::nat_variant();
        let s0: Substitution = [
            (var(&th, "Z"), parse_term("s(X)", &th).unwrap()),
            (var(&th, "Y"), parse_term("0", &th).unwrap()),
        ]
        .into_iter()
        .collect();
        let s1 = Substitution::singleton(var(&th, "X"), parse_term("0", &th).unwrap());
        let c = s0.compose(&s1, &th);
        let t = parse_term("Z + X", &th).unwrap();
        assert_eq!(c.apply(&th, &t), s1.apply(&th, &s0.apply(&th, &t)));
        let theta = c.restrict([&var(&th, "Z")]);
        assert_eq!(theta, Substitution::singleton(var(&th, "Z"), parse_term("s(0)", &th).unwrap()));
    }

    #[test]
    fn restrict_drops_outside_bindings() {
        let th = fixtures::nat_variant();
        let s: Substitution = [
            (var(&th, "Z"), parse_term("s(0)", &th).unwrap()),
            (var(&th, "X"), parse_term("0", &th).unwrap()),
        ]
        .into_iter()
        .collect();
        let r = s.restrict([&var(&th, "Z")]);
        assert_eq!(r.len(), 1);
        assert!(r.contains(&var(&th, "Z")));
    }
}
