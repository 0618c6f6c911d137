//! Order-sorted terms.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::sort::SortRef;

/// Index into the theory's operator table. Operators are numbered in
/// lexicographic order of their names, so comparing ids compares names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub u32);

/// Where a variable came from: written by the user, created by unification
/// (`#n`), or created while renaming variant equations apart (`%n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarClass {
    User,
    Unif,
    Variant,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub class: VarClass,
    /// Empty for fresh variables.
    pub name: Arc<str>,
    /// Zero for user variables.
    pub index: u32,
    pub sort: SortRef,
}

impl Var {
    pub fn user(name: &str, sort: SortRef) -> Self {
        Var { class: VarClass::User, name: name.into(), index: 0, sort }
    }

    pub fn fresh(class: VarClass, index: u32, sort: SortRef) -> Self {
        debug_assert!(class != VarClass::User);
        Var { class, name: "".into(), index, sort }
    }

    pub fn is_fresh(&self) -> bool {
        self.class != VarClass::User
    }

    pub fn with_sort(&self, sort: SortRef) -> Self {
        Var { sort, ..self.clone() }
    }

    pub fn label(&self) -> String {
        match self.class {
            VarClass::User => self.name.to_string(),
            VarClass::Unif => format!("#{}", self.index),
            VarClass::Variant => format!("%{}", self.index),
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.class
            .cmp(&other.class)
            .then_with(|| self.name.cmp(&other.name))
            .then_with(|| self.index.cmp(&other.index))
            .then_with(|| self.sort.cmp(&other.sort))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(OpId, Vec<Term>),
}

/// Variables before applications; applications by operator, then arity,
/// then arguments left to right.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, xs), Term::App(g, ys)) => f
                .cmp(g)
                .then_with(|| xs.len().cmp(&ys.len()))
                .then_with(|| {
                    for (x, y) in xs.iter().zip(ys) {
                        match x.cmp(y) {
                            Ordering::Equal => continue,
                            o => return o,
                        }
                    }
                    Ordering::Equal
                }),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Path of argument indices from the root. Indices refer to the flattened
/// representation.
pub type Position = Vec<usize>;

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    pub fn constant(op: OpId) -> Self {
        Term::App(op, Vec::new())
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn top(&self) -> Option<OpId> {
        match self {
            Term::App(f, _) => Some(*f),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence, left to right.
    pub fn vars_in_order(&self) -> Vec<Var> {
        fn go(t: &Term, out: &mut Vec<Var>) {
            match t {
                Term::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// Number of symbol occurrences (variables count as symbols).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.subterm(rest),
        }
    }

    /// Replaces the subterm at `pos`. The result is not canonical.
    pub fn replace_at(&self, pos: &[usize], new: Term) -> Term {
        match pos.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, new);
                    Term::App(*f, args)
                }
                Term::Var(_) => panic!("position {pos:?} runs through a variable"),
            },
        }
    }

    /// Non-variable positions in pre-order (root first, then arguments
    /// left to right).
    pub fn app_positions(&self) -> Vec<Position> {
        fn go(t: &Term, cur: &mut Position, out: &mut Vec<Position>) {
            if let Term::App(_, args) = t {
                out.push(cur.clone());
                for (i, a) in args.iter().enumerate() {
                    cur.push(i);
                    go(a, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Non-variable positions in post-order (arguments before their parent).
    pub fn app_positions_postorder(&self) -> Vec<Position> {
        fn go(t: &Term, cur: &mut Position, out: &mut Vec<Position>) {
            if let Term::App(_, args) = t {
                for (i, a) in args.iter().enumerate() {
                    cur.push(i);
                    go(a, cur, out);
                    cur.pop();
                }
                out.push(cur.clone());
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Largest index among fresh variables, zero if none.
    pub fn max_fresh_index(&self) -> u32 {
        match self {
            Term::Var(v) if v.is_fresh() => v.index,
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(Term::max_fresh_index).max().unwrap_or(0),
        }
    }

    /// Applies a variable-to-variable map without canonicalizing. Renaming
    /// preserves canonical form as long as the relative order of the renamed
    /// variables is preserved or the caller re-canonicalizes.
    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(op, args) => Term::App(*op, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}
