//! Matching modulo axioms. Subject terms are treated as ground: their
//! variables are never bound.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::subst::Substitution;
use crate::term::{OpId, Term, Var};
use crate::theory::Theory;

/// All matchers `sigma` with `sigma(pattern) =Ax subject`.
pub fn match_term(th: &Theory, pattern: &Term, subject: &Term) -> Result<Vec<Substitution>> {
    match_all(th, &[(pattern.clone(), subject.clone())], &Substitution::new())
}

/// Simultaneous matching of every `(pattern, subject)` pair, extending `init`.
pub fn match_all(th: &Theory, pairs: &[(Term, Term)], init: &Substitution) -> Result<Vec<Substitution>> {
    let pairs: Vec<(Term, Term)> = pairs.iter().map(|(p, s)| (th.canonical(p), th.canonical(s))).collect();
    let mut out = Vec::new();
    Matcher { th }.pairs(&pairs, init.clone(), &mut out)?;
    Ok(dedupe(out))
}

/// Matching with extension at an AC node: `pattern` must be headed by an AC
/// operator `f`, and each result pairs a matcher with the subject arguments
/// left over, so that `f(sigma(pattern), rest...) =Ax subject`.
pub fn match_extension(th: &Theory, pattern: &Term, subject: &Term) -> Result<Vec<(Substitution, Vec<Term>)>> {
    let pattern = th.canonical(pattern);
    let subject = th.canonical(subject);
    let Term::App(f, pats) = &pattern else {
        return Err(Error::InvalidExpansion("extension matching needs an operator pattern".into()));
    };
    if !th.axioms(*f).is_ac() {
        return Err(Error::InvalidExpansion(format!("{} is not associative-commutative", th.op(*f).name)));
    }
    let subj = th.as_args_of(*f, &subject);
    let mut res = Matcher { th }.ac(*f, pats.clone(), subj, Substitution::new(), true)?;
    res.sort();
    res.dedup();
    Ok(res)
}

fn dedupe(v: Vec<Substitution>) -> Vec<Substitution> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

struct Matcher<'a> {
    th: &'a Theory,
}

impl Matcher<'_> {
    fn pairs(&self, pairs: &[(Term, Term)], sigma: Substitution, out: &mut Vec<Substitution>) -> Result<()> {
        let Some(((p, s), rest)) = pairs.split_first() else {
            out.push(sigma);
            return Ok(());
        };
        for next in self.one(p, s, sigma)? {
            self.pairs(rest, next, out)?;
        }
        Ok(())
    }

    fn accepts(&self, x: &Var, s: &Term) -> bool {
        let th = self.th;
        th.sorts.kind_of_ref(x.sort) == th.kind_of_term(s) && th.sorts.leq(th.least_sort(s), x.sort)
    }

    fn bind(&self, x: &Var, s: Term, mut sigma: Substitution) -> Option<Substitution> {
        match sigma.get(x) {
            Some(b) => (*b == s).then_some(sigma),
            None if self.accepts(x, &s) => {
                sigma.insert(x.clone(), s);
                Some(sigma)
            }
            None => None,
        }
    }

    fn one(&self, p: &Term, s: &Term, sigma: Substitution) -> Result<Vec<Substitution>> {
        let th = self.th;
        let (f, pargs) = match p {
            Term::Var(x) => return Ok(self.bind(x, s.clone(), sigma).into_iter().collect()),
            Term::App(f, pargs) => (*f, pargs),
        };
        let ax = th.axioms(f);
        if ax.is_ac() {
            if s.top() != Some(f) && ax.id.is_none() {
                return Ok(Vec::new());
            }
            let subj = th.as_args_of(f, s);
            return Ok(self.ac(f, pargs.clone(), subj, sigma, false)?.into_iter().map(|(m, _)| m).collect());
        }
        if ax.id.is_some() {
            return Err(Error::UnsupportedAxioms(format!("matching modulo the axioms of {}", th.op(f).name)));
        }
        let Term::App(g, sargs) = s else { return Ok(Vec::new()) };
        if *g != f {
            return Ok(Vec::new());
        }
        if ax.assoc {
            let mut out = Vec::new();
            self.seq(f, pargs, sargs, sigma, &mut out)?;
            return Ok(out);
        }
        if pargs.len() != sargs.len() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let straight: Vec<(Term, Term)> = pargs.iter().cloned().zip(sargs.iter().cloned()).collect();
        self.pairs(&straight, sigma.clone(), &mut out)?;
        if ax.comm {
            let crossed = vec![(pargs[0].clone(), sargs[1].clone()), (pargs[1].clone(), sargs[0].clone())];
            self.pairs(&crossed, sigma, &mut out)?;
        }
        Ok(dedupe(out))
    }

    /// Associative matching: each pattern argument takes a non-empty
    /// contiguous segment of the subject arguments.
    fn seq(&self, f: OpId, pats: &[Term], subj: &[Term], sigma: Substitution, out: &mut Vec<Substitution>) -> Result<()> {
        let Some((p, prest)) = pats.split_first() else {
            if subj.is_empty() {
                out.push(sigma);
            }
            return Ok(());
        };
        if subj.len() < pats.len() {
            return Ok(());
        }
        match p {
            Term::Var(x) => {
                if let Some(b) = sigma.get(x) {
                    let need = self.th.as_args_of(f, b);
                    if subj.starts_with(&need) {
                        let n = need.len();
                        self.seq(f, prest, &subj[n..], sigma, out)?;
                    }
                    return Ok(());
                }
                for len in 1..=subj.len() - prest.len() {
                    let val = self.th.build_ac(f, subj[..len].to_vec());
                    if let Some(next) = self.bind(x, val, sigma.clone()) {
                        self.seq(f, prest, &subj[len..], next, out)?;
                    }
                }
            }
            _ => {
                for next in self.one(p, &subj[0], sigma)? {
                    self.seq(f, prest, &subj[1..], next, out)?;
                }
            }
        }
        Ok(())
    }

    /// Multiset matching of `pats` against `subj` under the AC operator `f`.
    /// With `ext` set, subject arguments may be left over.
    pub(super) fn ac(
        &self,
        f: OpId,
        pats: Vec<Term>,
        mut subj: Vec<Term>,
        sigma: Substitution,
        ext: bool,
    ) -> Result<Vec<(Substitution, Vec<Term>)>> {
        let th = self.th;
        let mut open = Vec::new();
        for p in pats {
            match p.as_var().and_then(|x| sigma.get(x)) {
                Some(b) => {
                    for a in th.as_args_of(f, b) {
                        match subj.iter().position(|s| *s == a) {
                            Some(j) => {
                                subj.remove(j);
                            }
                            None => return Ok(Vec::new()),
                        }
                    }
                }
                None => open.push(p),
            }
        }
        if let Some(i) = open.iter().position(|p| !p.is_var()) {
            let p = open.remove(i);
            let mut out = Vec::new();
            for j in 0..subj.len() {
                if subj[..j].contains(&subj[j]) {
                    continue;
                }
                for next in self.one(&p, &subj[j], sigma.clone())? {
                    let mut rest = subj.clone();
                    rest.remove(j);
                    out.extend(self.ac(f, open.clone(), rest, next, ext)?);
                }
            }
            return Ok(out);
        }

        let mut vars: Vec<(Var, u32)> = Vec::new();
        for p in open {
            let x = p.as_var().unwrap().clone();
            match vars.iter_mut().find(|(v, _)| *v == x) {
                Some((_, m)) => *m += 1,
                None => vars.push((x, 1)),
            }
        }
        let mut distinct: Vec<Term> = Vec::new();
        let mut counts: Vec<u32> = Vec::new();
        for s in subj {
            match distinct.iter().position(|d| *d == s) {
                Some(j) => counts[j] += 1,
                None => {
                    distinct.push(s);
                    counts.push(1);
                }
            }
        }
        let mut out = Vec::new();
        self.distribute(f, &vars, &distinct, counts, sigma, ext, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        f: OpId,
        vars: &[(Var, u32)],
        distinct: &[Term],
        remaining: Vec<u32>,
        sigma: Substitution,
        ext: bool,
        out: &mut Vec<(Substitution, Vec<Term>)>,
    ) {
        let expand = |c: &[u32]| -> Vec<Term> {
            distinct.iter().zip(c).flat_map(|(t, &n)| std::iter::repeat_n(t.clone(), n as usize)).collect()
        };
        let Some(((x, m), vrest)) = vars.split_first() else {
            if ext || remaining.iter().all(|&c| c == 0) {
                out.push((sigma, expand(&remaining)));
            }
            return;
        };
        let with_id = self.th.axioms(f).id.is_some();
        let choices: Vec<Vec<u32>> = if vrest.is_empty() && !ext {
            if remaining.iter().any(|c| c % m != 0) {
                return;
            }
            vec![remaining.iter().map(|c| c / m).collect()]
        } else {
            count_vectors(&remaining.iter().map(|c| c / m).collect::<Vec<_>>())
        };
        for c in choices {
            let args = expand(&c);
            if args.is_empty() && !with_id {
                continue;
            }
            let val = self.th.build_ac(f, args);
            if let Some(next) = self.bind(x, val, sigma.clone()) {
                let left: Vec<u32> = remaining.iter().zip(&c).map(|(r, k)| r - k * m).collect();
                self.distribute(f, vrest, distinct, left, next, ext, out);
            }
        }
    }
}

/// Every vector bounded componentwise by `limits`.
fn count_vectors(limits: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &l in limits {
        out = out.into_iter().flat_map(|v| (0..=l).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}
