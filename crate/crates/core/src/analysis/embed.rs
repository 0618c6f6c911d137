//! Homeomorphic embedding modulo axioms.

use crate::term::Term;
use crate::theory::Theory;

/// Whether `small` can be obtained from some Ax-representative of `big` by
/// deleting symbols. Variables embed into variables of the same kind.
pub fn embeds(th: &Theory, small: &Term, big: &Term) -> bool {
    emb(th, &th.canonical(small), &th.canonical(big))
}

fn emb(th: &Theory, s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => th.sorts.kind_of_ref(x.sort) == th.sorts.kind_of_ref(y.sort),
        (_, Term::Var(_)) => false,
        (_, Term::App(g, targs)) => {
            if let Term::App(f, sargs) = s {
                if f == g && couple(th, *f, sargs, targs) {
                    return true;
                }
            }
            targs.iter().any(|a| emb(th, s, a))
        }
    }
}

/// Arguments of `s` embed into distinct arguments of `t` under `f`.
fn couple(th: &Theory, f: crate::term::OpId, sargs: &[Term], targs: &[Term]) -> bool {
    let ax = th.axioms(f);
    if ax.assoc && ax.comm {
        injection(th, sargs, targs, &mut vec![false; targs.len()])
    } else if ax.assoc {
        subsequence(th, sargs, targs)
    } else if ax.comm && sargs.len() == 2 && targs.len() == 2 {
        (emb(th, &sargs[0], &targs[0]) && emb(th, &sargs[1], &targs[1]))
            || (emb(th, &sargs[0], &targs[1]) && emb(th, &sargs[1], &targs[0]))
    } else {
        sargs.len() == targs.len() && sargs.iter().zip(targs).all(|(a, b)| emb(th, a, b))
    }
}

fn injection(th: &Theory, sargs: &[Term], targs: &[Term], used: &mut Vec<bool>) -> bool {
    let Some((first, rest)) = sargs.split_first() else { return true };
    for j in 0..targs.len() {
        if !used[j] && emb(th, first, &targs[j]) {
            used[j] = true;
            let ok = injection(th, rest, targs, used);
            used[j] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

fn subsequence(th: &Theory, sargs: &[Term], targs: &[Term]) -> bool {
    let Some((first, rest)) = sargs.split_first() else { return true };
    (0..targs.len()).any(|j| emb(th, first, &targs[j]) && subsequence(th, rest, &targs[j + 1..]))
}

/// Smallest index `i` such that `branch[i]` embeds into `new`.
pub fn whistle_check(th: &Theory, branch: &[Term], new: &Term) -> Option<usize> {
    branch.iter().position(|b| embeds(th, b, new))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parser::parse_term;

    fn e(th: &Theory, a: &str, b: &str) -> bool {
        embeds(th, &parse_term(a, th).unwrap(), &parse_term(b, th).unwrap())
    }

    #[test]
    fn embedding_under_commutativity() {
        let th = fixtures::embedding_signature();
        assert!(e(&th, "s(Y * (X + Y))", "s(s(X + Y) * (s(X) + Y))"));
        assert!(!e(&th, "s(Y * (X + Y))", "s(s(X + Y) + (s(X) * Y))"));
    }

    #[test]
    fn reflexive() {
        let th = fixtures::embedding_signature();
        assert!(e(&th, "s(X) + (Y * 0)", "s(X) + (Y * 0)"));
    }

    #[test]
    fn associative_products() {
        for th in [fixtures::assoc_set(), fixtures::exclusive_or()] {
            assert!(e(&th, "X * X", "0 * X * Z"));
            assert!(!e(&th, "X * Z", "0 * 0"));
        }
    }

    #[test]
    fn whistle_reports_first_ancestor() {
        let th = fixtures::nat_variant();
        let branch = [parse_term("#1:Nat + s(0)", &th).unwrap()];
        let new = parse_term("s(%1:Nat + s(0))", &th).unwrap();
        assert_eq!(whistle_check(&th, &branch, &new), Some(0));
        assert_eq!(whistle_check(&th, &[], &new), None);
    }
}
